"""Monte Carlo simulation of the Alice/Bob/Eve authentication protocol.

Alice encodes a uniform message with a keyed coset code and sends it over
Bob's BSC(p). Bob decodes to the nearest codeword and accepts when it lies
within Hamming radius ``floor(tau * n)``.

Eve sees the same transmission through her BSC(q). She does not know the
coset key, so her substitution forgery shifts her view by the linear
codeword of a random non-zero message difference. This re-encodes a
different message while keeping the key. The forgery then crosses Bob's
channel, and it counts as a false acceptance when Bob accepts a message
other than Alice's.

All randomness is addressed by ``(seed, stream, chunk)``, so reports do not
depend on the number of workers.
"""
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.stats import binomtest

from . import _rng
from ._validation import check_prob
from .bounds import FanoInputs, fano_min_error
from .channels import backward_conceptual
from .codes import bits_to_blocks, build_code
from .errors import ConfigurationError
from .info import binary_entropy, cascade

CHUNK = 4096
Z95 = 1.959963984540054

_S_MESSAGE, _S_BOB, _S_EVE, _S_DIFF, _S_FORGED = 0, 1, 2, 3, 4


def default_workers():
    return int(os.environ.get("WIRETAP_LAB_WORKERS", "1") or 1)


@dataclass(frozen=True)
class ProtocolConfig:
    n: int = 64
    p: float = 0.01
    q: float = 0.25
    rate: float = 0.5
    tau: float = None
    trials: int = 10_000
    seed: int = 0
    cascade_delta: float = 0.0

    def __post_init__(self):
        check_prob(self.p, "p")
        check_prob(self.q, "q")
        check_prob(self.cascade_delta, "cascade_delta")
        if not 0.0 < self.rate < 1.0:
            raise ConfigurationError(f"rate={self.rate!r} must lie in (0, 1)")
        if self.tau is None:
            object.__setattr__(self, "tau", (self.p + self.q) / 2.0)
        if not 0.0 < self.tau < 0.5:
            raise ConfigurationError(f"tau={self.tau!r} must lie in (0, 1/2)")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ConfigurationError("trials must be a positive integer")
        if int(self.n) != self.n or self.n < 2:
            raise ConfigurationError("n must be an integer >= 2")

    @property
    def radius(self):
        return int(math.floor(self.tau * self.n + 1e-9))

    @property
    def theorem3_regime(self):
        """Whether ``0 <= p < q <= 1/2``, the premise of the authenticated-space result."""
        return 0.0 <= self.p < self.q <= 0.5

    def code(self):
        return build_code(self.n, self.rate, self.seed)


@dataclass(frozen=True)
class Estimate:
    value: float
    low: float
    high: float
    count: int
    trials: int

    @classmethod
    def from_counts(cls, count, trials):
        count, trials = int(count), int(trials)
        if trials == 0:
            return cls(0.0, 0.0, 0.0, 0, 0)
        ci = binomtest(count, trials).proportion_ci(confidence_level=0.95, method="wilson")
        return cls(count / trials, float(ci.low), float(ci.high), count, trials)

    @property
    def sigma(self):
        if self.trials == 0:
            return 0.0
        return math.sqrt(self.value * (1.0 - self.value) / self.trials)


@dataclass(frozen=True)
class SimReport:
    p_de: Estimate
    p_fa: Estimate
    trials: int
    seed: int
    attack: bool
    config: dict = field(default_factory=dict)

    def as_dict(self):
        return asdict(self)


def _chunks(trials):
    return [(i, min(CHUNK, trials - start)) for i, start in enumerate(range(0, trials, CHUNK))]


def _noise(code, crossover, rng, size):
    return bits_to_blocks(rng.random((size, code.n)) < crossover, code.lengths)


def _nonzero_differences(code, rng, size):
    diff = code.random_messages(rng, size)
    zero = ~diff.any(axis=-1)
    while zero.any():
        diff[zero] = code.random_messages(rng, int(zero.sum()))
        zero = ~diff.any(axis=-1)
    return diff


def _transmission_chunk(code, cfg, attack, index, size, keep_trials):
    g = lambda stream: _rng.generator(cfg.seed, stream, index)  # noqa: E731
    msgs = code.random_messages(g(_S_MESSAGE), size)
    sent = code.encode(msgs)
    bob_view = sent ^ _noise(code, cfg.p, g(_S_BOB), size)
    decoded, dist = code.decode(bob_view)
    bob_ok = (dist <= cfg.radius) & (decoded == msgs).all(axis=-1)
    out = {"bob_fail": int((~bob_ok).sum())}
    if attack:
        eve_view = sent ^ _noise(code, cfg.q, g(_S_EVE), size)
        forged = eve_view ^ code.linear(_nonzero_differences(code, g(_S_DIFF), size))
        received = forged ^ _noise(code, cfg.p, g(_S_FORGED), size)
        f_decoded, f_dist = code.decode(received)
        fooled = (f_dist <= cfg.radius) & (f_decoded != msgs).any(axis=-1)
        out["forgery_accepted"] = int(fooled.sum())
    if keep_trials:
        out["rows"] = {"bob_distance": dist, "bob_ok": bob_ok}
        if attack:
            out["rows"].update(forgery_distance=f_dist, forgery_accepted=fooled)
    return out


def _map_chunks(fn, trials, workers):
    chunks = _chunks(trials)
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1:
        return [fn(i, s) for i, s in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: fn(*c), chunks))


def simulate(cfg, attack=True, workers=None, keep_trials=False):
    """Run the protocol; returns ``(SimReport, per-trial rows or None)``."""
    code = cfg.code()
    parts = _map_chunks(lambda i, s: _transmission_chunk(code, cfg, attack, i, s, keep_trials),
                        cfg.trials, workers)
    bob_fail = sum(p["bob_fail"] for p in parts)
    forged = sum(p.get("forgery_accepted", 0) for p in parts)
    report = SimReport(Estimate.from_counts(bob_fail, cfg.trials),
                       Estimate.from_counts(forged, cfg.trials if attack else 0),
                       cfg.trials, cfg.seed, attack, asdict(cfg))
    rows = None
    if keep_trials:
        rows = {k: np.concatenate([p["rows"][k] for p in parts]) for k in parts[0]["rows"]}
    return report, rows


def run_transmission(cfg, attack=True, workers=None):
    """Estimate the decoding-error and false-acceptance probabilities."""
    return simulate(cfg, attack, workers)[0]


def resource_distance(report):
    """Distance to the ideal authenticated resource, ``max(p_de, p_fa)``."""
    return max(report.p_de.value, report.p_fa.value)


def authentication_probability(cfg, workers=None):
    """Fraction of attack-free trials where Bob accepts Alice's message intact."""
    report = run_transmission(cfg, attack=False, workers=workers)
    ok = report.trials - report.p_de.count
    return Estimate.from_counts(ok, report.trials)


def _party_chunk(code, crossover, radius, seed, stream, index, size):
    rng = _rng.generator(seed, stream, index)
    msgs = code.random_messages(rng, size)
    received = code.encode(msgs) ^ _noise(code, crossover, rng, size)
    decoded, dist = code.decode(received)
    accepted = dist <= radius
    right = (decoded == msgs).all(axis=-1)
    return int((accepted & right).sum()), int((accepted & ~right).sum())


def party_error_rates(code, crossover, radius, trials, seed, stream, workers=None):
    """``(P_EC, P_FA)`` for one party decoding over BSC(crossover).

    P_EC is the probability of accepting the sent message. P_FA is the
    probability that an accepted message is not the one sent, so it counts
    acceptances that should not have happened among all acceptances.
    """
    parts = _map_chunks(lambda i, s: _party_chunk(code, crossover, radius, seed, stream, i, s),
                        trials, workers)
    ec = sum(p[0] for p in parts)
    fa = sum(p[1] for p in parts)
    return Estimate.from_counts(ec, trials), Estimate.from_counts(fa, ec + fa)


def compare(lhs, rhs, direction):
    """CI-separated comparison: True/False when the 95% intervals are disjoint
    (in the claimed or the opposite direction), None when they overlap."""
    if direction == "<":
        lhs, rhs = rhs, lhs
    if lhs.low > rhs.high:
        return True
    if lhs.high < rhs.low:
        return False
    return None


def _group(entries):
    results = [compare(*e) for e in entries]
    if all(r is True for r in results):
        verdict = True
    elif any(r is False for r in results):
        verdict = False
    else:
        verdict = None
    return {"holds": verdict, "comparisons": results}


@dataclass(frozen=True)
class DominationReport:
    crossovers: dict
    estimates: dict  # channel -> party -> {"P_EC": Estimate, "P_FA": Estimate}
    group1: dict
    group2: dict
    group3: dict
    config: dict = field(default_factory=dict)

    def as_dict(self):
        return asdict(self)


CHANNELS = ("public", "forward", "backward")
PARTIES = ("alice", "bob", "eve")


def domination_crossovers(eA, eB, eE, cascade_delta):
    """Per-party crossover on each channel.

    Public broadcast: the raw crossovers. Forward conceptual: Eve's view gets
    the extra cascade stage. Backward conceptual: Alice and Bob share the
    Alice-Bob cascade, Eve holds her better pairwise cascade.
    """
    back = backward_conceptual(eA, eB, eE)
    return {
        "public": {"alice": eA, "bob": eB, "eve": eE},
        "forward": {"alice": eA, "bob": eB, "eve": cascade(eE, cascade_delta)},
        "backward": {"alice": back["alice_bob"], "bob": back["alice_bob"],
                     "eve": min(back["alice_eve"], back["bob_eve"])},
    }


def domination_experiment(eA, eB, eE, cascade_delta, base, workers=None):
    """Estimate every party's P_EC and P_FA on the three channels and test the
    three inequality groups with CI-separated comparisons."""
    for name, v in (("eA", eA), ("eB", eB), ("eE", eE)):
        check_prob(v, name, upper=0.5)
    if not eE < min(eA, eB):
        raise ConfigurationError("Eve must start superior: eE < min(eA, eB)")
    if not 0.0 <= cascade_delta < 0.5:
        raise ConfigurationError("cascade_delta must lie in [0, 1/2)")
    code = base.code()
    cross = domination_crossovers(eA, eB, eE, cascade_delta)
    est = {}
    stream = 100
    for ch in CHANNELS:
        est[ch] = {}
        for party in PARTIES:
            stream += 1
            ec, fa = party_error_rates(code, cross[ch][party], base.radius, base.trials,
                                       base.seed, stream, workers)
            est[ch][party] = {"P_EC": ec, "P_FA": fa}

    def pair(ch1, p1, ch2, p2, key, direction):
        return est[ch1][p1][key], est[ch2][p2][key], direction

    g1 = _group([pair("public", "eve", "public", "alice", "P_FA", "<"),
                 pair("public", "eve", "public", "bob", "P_FA", "<"),
                 pair("public", "eve", "public", "alice", "P_EC", ">"),
                 pair("public", "eve", "public", "bob", "P_EC", ">")])
    g2 = _group([pair("forward", "eve", "forward", "alice", "P_FA", ">"),
                 pair("forward", "eve", "forward", "bob", "P_FA", ">"),
                 pair("forward", "eve", "forward", "alice", "P_EC", "<"),
                 pair("forward", "eve", "forward", "bob", "P_EC", "<")])
    g3 = _group([pair("public", "eve", "backward", "alice", "P_FA", ">"),
                 pair("public", "eve", "backward", "bob", "P_FA", ">"),
                 pair("public", "eve", "backward", "alice", "P_EC", "<"),
                 pair("public", "eve", "backward", "bob", "P_EC", "<")])
    config = {"eA": eA, "eB": eB, "eE": eE, "cascade_delta": cascade_delta, **asdict(base)}
    return DominationReport(cross, est, g1, g2, g3, config)


def with_trials(cfg, trials):
    return replace(cfg, trials=trials)


def block_mutual_information(code, crossover):
    """Exact I(U;Z) in bits for a uniform message seen through BSC(crossover).

    The offset is a known shift here, so it drops out. Blocks are independent,
    so the total is the sum of per-block values, each from a full enumeration
    of the block's output words.
    """
    total = 0.0
    for nb, book in zip(code.lengths, code.codebooks):
        if nb > 20:
            raise ConfigurationError(f"block length {nb} too large to enumerate")
        z = np.arange(2 ** nb, dtype=np.uint32)
        d = np.bitwise_count(z[:, None] ^ book[None, :]).astype(float)
        if crossover in (0.0, 1.0):
            like = (d == (0 if crossover == 0.0 else nb)).astype(float)
        else:
            like = crossover ** d * (1.0 - crossover) ** (nb - d)
        pz = like.mean(axis=1)
        pz = pz[pz > 0]
        total += float(-(pz * np.log2(pz)).sum()) - nb * binary_entropy(crossover)
    return max(0.0, total)


@dataclass(frozen=True)
class FanoCheck:
    eve_error: Estimate
    mutual_information: float
    messages: int
    fano_bound: float

    @property
    def consistent(self):
        return self.eve_error.value >= self.fano_bound - 3.0 * self.eve_error.sigma


def _eve_chunk(code, cfg, index, size):
    rng = _rng.generator(cfg.seed, _S_EVE + 10, index)
    msgs = code.random_messages(rng, size)
    view = code.encode(msgs) ^ _noise(code, cfg.q, rng, size)
    decoded, _ = code.decode(view)
    return int((decoded != msgs).any(axis=-1).sum())


def fano_experiment(cfg, workers=None):
    """Eve's message-decoding error on her BSC(q) view against the Fano bound.

    Eve is handed the coset key, which makes this the most favourable
    eavesdropping setting; she decodes to the nearest codeword (maximum
    likelihood for q < 1/2).
    """
    code = cfg.code()
    errors = sum(_map_chunks(lambda i, s: _eve_chunk(code, cfg, i, s), cfg.trials, workers))
    mi = block_mutual_information(code, cfg.q)
    M = code.message_count
    return FanoCheck(Estimate.from_counts(errors, cfg.trials), mi, M, fano_min_error(FanoInputs(M, mi)))
