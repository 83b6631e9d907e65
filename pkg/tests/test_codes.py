import numpy as np
import pytest

from wiretap_lab import DomainError
from wiretap_lab.codes import bits_to_blocks, blocks_to_bits, build_code, minimum_distance


def test_small_code_enumeration():
    code = build_code(8, 0.5, 1)
    words = code.codewords()
    assert words.shape == (16, 8)
    assert len({w.tobytes() for w in words}) == 16


def test_infeasible_rate():
    with pytest.raises(DomainError):
        build_code(8, 0.05, 0)


def test_determinism():
    a, b = build_code(64, 0.5, 7), build_code(64, 0.5, 7)
    assert a.generators == b.generators
    np.testing.assert_array_equal(a.offset, b.offset)
    assert build_code(64, 0.5, 8).generators != a.generators


def test_block_structure():
    code = build_code(64, 0.5, 7)
    assert sum(code.lengths) == 64 and sum(code.dims) == 32
    assert code.message_count == 2**32
    assert minimum_distance(code) >= 3


def test_bits_round_trip(rng):
    code = build_code(40, 0.25, 3)
    bits = rng.integers(0, 2, size=(5, 40)).astype(np.uint8)
    np.testing.assert_array_equal(blocks_to_bits(bits_to_blocks(bits, code.lengths), code.lengths), bits)


def test_encode_decode_round_trip(rng):
    code = build_code(64, 0.5, 7)
    msgs = code.random_messages(rng, 200)
    decoded, dist = code.decode(code.encode(msgs))
    np.testing.assert_array_equal(decoded, msgs)
    assert (dist == 0).all()


def test_decode_corrects_single_errors(rng):
    code = build_code(16, 0.25, 2)
    assert minimum_distance(code) >= 3
    msgs = code.random_messages(rng, 64)
    words = code.encode(msgs)
    flips = np.uint32(1) << rng.integers(0, 16, size=(64, 1)).astype(np.uint32)
    decoded, dist = code.decode(words ^ flips)
    np.testing.assert_array_equal(decoded, msgs)
    assert (dist == 1).all()


def test_generator_matrix_spans_codebook():
    code = build_code(8, 0.5, 1)
    g = code.generator_matrix()
    assert g.shape == (4, 8)
    assert np.linalg.matrix_rank(g) == 4
