"""Seeded random binary linear coset codes with exact minimum-distance decoding.

A code of length ``n`` and dimension ``k`` is the direct sum of short random
blocks (each with at most ``max_block_k`` message bits) so that decoding can
enumerate each block's codebook. Minimum-distance decoding of a direct sum is
blockwise minimum-distance decoding, so the decoder is exact for the whole
code. The coset offset is the key shared by Alice and Bob.
"""
from dataclasses import dataclass

import numpy as np

from . import _rng
from .errors import DomainError

MAX_BLOCK_K = 8
MAX_BLOCK_N = 32
CANDIDATES = 32
_CODE_STREAM = 1_000_000


def _gf2_rank(rows):
    rows = [int(r) for r in rows]
    rank = 0
    for bit in range(max((r.bit_length() for r in rows), default=0)):
        pivot = next((i for i in range(rank, len(rows)) if rows[i] >> bit & 1), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] >> bit & 1:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


def _split(total, parts):
    base, extra = divmod(total, parts)
    return [base + (i < extra) for i in range(parts)]


def _span(rows):
    """All 2**len(rows) XOR combinations; entry ``m`` uses the rows set in ``m``."""
    book = np.zeros(1, dtype=np.uint32)
    for r in rows:
        book = np.concatenate([book, book ^ np.uint32(r)])
    return book


def bits_to_blocks(bits, lengths):
    """Pack an ``(..., n)`` 0/1 array into per-block integers (bit i of a block = position i)."""
    bits = np.asarray(bits, dtype=np.uint32)
    out, start = [], 0
    for nb in lengths:
        weights = (np.uint32(1) << np.arange(nb, dtype=np.uint32))
        out.append((bits[..., start:start + nb] * weights).sum(axis=-1, dtype=np.uint32))
        start += nb
    return np.stack(out, axis=-1)


def blocks_to_bits(blocks, lengths):
    cols = []
    for b, nb in enumerate(lengths):
        cols.append((blocks[..., b, None] >> np.arange(nb, dtype=np.uint32)) & 1)
    return np.concatenate(cols, axis=-1).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class CosetCode:
    n: int
    k: int
    seed: int
    lengths: tuple
    dims: tuple
    generators: tuple  # per block: tuple of row integers
    offset: np.ndarray  # per block coset offset (shared key)
    codebooks: tuple  # per block: linear codewords indexed by message

    @property
    def num_blocks(self):
        return len(self.lengths)

    @property
    def message_count(self):
        return 2 ** self.k

    def generator_matrix(self):
        """Full ``k x n`` generator as a 0/1 array (block diagonal)."""
        g = np.zeros((self.k, self.n), dtype=np.uint8)
        r = c = 0
        for rows, nb in zip(self.generators, self.lengths):
            for row in rows:
                g[r, c:c + nb] = [(row >> i) & 1 for i in range(nb)]
                r += 1
            c += nb
        return g

    def linear(self, messages):
        """Codewords of the underlying linear code (no offset) for per-block messages."""
        messages = np.asarray(messages)
        return np.stack([self.codebooks[b][messages[..., b]] for b in range(self.num_blocks)], axis=-1)

    def encode(self, messages):
        return self.linear(messages) ^ self.offset

    def decode(self, words, keyed=True):
        """Nearest codeword per block. Returns ``(messages, total_distance)``;
        ties go to the smallest message index."""
        words = np.asarray(words, dtype=np.uint32)
        if keyed:
            words = words ^ self.offset
        msgs = np.empty(words.shape, dtype=np.int64)
        dist = np.zeros(words.shape[:-1], dtype=np.int64)
        for b, book in enumerate(self.codebooks):
            d = np.bitwise_count(words[..., b, None] ^ book)
            msgs[..., b] = np.argmin(d, axis=-1)
            dist += np.min(d, axis=-1)
        return msgs, dist

    def random_messages(self, rng, count):
        return np.stack([rng.integers(0, 2 ** kb, size=count) for kb in self.dims], axis=-1)

    def codewords(self):
        """Every codeword (with offset) as an ``(2**k, n)`` bit array; small codes only."""
        if self.k > 20:
            raise DomainError("too many codewords to enumerate")
        idx = np.arange(2 ** self.k)
        msgs, shift = [], 0
        for kb in self.dims:
            msgs.append((idx >> shift) & (2 ** kb - 1))
            shift += kb
        return blocks_to_bits(self.encode(np.stack(msgs, axis=-1)), self.lengths)


def build_code(n, rate, seed, max_block_k=MAX_BLOCK_K):
    """Random coset code with ``k = round(rate * n)``, deterministic per ``(n, rate, seed)``.

    Each block generator is the best (by minimum distance) of a fixed number of
    seeded random full-rank draws.
    """
    n = int(n)
    k = int(round(rate * n))
    if not 1 <= k < n:
        raise DomainError(f"k = round({rate} * {n}) = {k} must satisfy 1 <= k < n")
    blocks = max(-(-k // max_block_k), -(-n // MAX_BLOCK_N))
    lengths = _split(n, blocks)
    dims = _split(k, blocks)
    rng = _rng.generator(seed, _CODE_STREAM, 0)
    generators, books = [], []
    for nb, kb in zip(lengths, dims):
        # keep the candidate with the largest minimum distance (first wins ties)
        best = None
        for _ in range(CANDIDATES):
            rows = [int(r) for r in rng.integers(1, 2 ** nb, size=kb)]
            if _gf2_rank(rows) != kb:
                continue
            book = _span(rows)
            d = int(np.bitwise_count(book[1:]).min())
            if best is None or d > best[0]:
                best = (d, rows, book)
        if best is None:
            raise DomainError(f"no full-rank [{nb}, {kb}] generator found")
        generators.append(tuple(best[1]))
        books.append(best[2])
    offset = np.array([rng.integers(0, 2 ** nb) for nb in lengths], dtype=np.uint32)
    return CosetCode(n, k, int(seed), tuple(lengths), tuple(dims), tuple(generators), offset, tuple(books))


def minimum_distance(code):
    return int(min(np.bitwise_count(book[1:]).min() for book in code.codebooks if len(book) > 1))
