"""Executable property suite behind ``wiretap-lab verify``.

Each check returns a :class:`Check`; sample counts scale with ``size`` so a
quick smoke run and the full run share one code path.
"""
import math
import time
from dataclasses import dataclass

import numpy as np

from . import _rng
from .bounds import helstrom_two_state
from .channels import BroadcastModel
from .games import XorGame, bias, classical_optimum, tsirelson_strategy, win_probability
from .holevo import Ensemble, holevo_chi
from .info import binary_entropy, cascade
from .polar import SynthesizedChannel, amplitude_channel, polarize, split_minus, split_plus
from .qstate import apply_channel, check_contractivity, check_dpi, random_channel, random_density_matrix
from .secrecy import cs, cs_bar_bsc, cs_bar_upper


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str
    seconds: float


def _timed(name, fn):
    t0 = time.perf_counter()
    passed, detail = fn()
    return Check(name, bool(passed), detail, time.perf_counter() - t0)


def grid(points):
    return np.linspace(0.0, 0.5, points)


def check_public_discussion_equality(points=100):
    worst = 0.0
    for e in grid(points):
        for d in grid(points):
            model = BroadcastModel.from_crossovers(e, d)
            worst = max(worst, abs(cs_bar_upper(model).value - cs_bar_bsc(e, d)))
    return worst < 1e-4, f"max |sup I(X;Y|Z) - closed form| = {worst:.3g}"


def check_capacity_ordering(points=100):
    worst = min(cs_bar_bsc(e, d) - cs(e, d) for e in grid(points) for d in grid(points))
    return worst >= -1e-12, f"min (cs_bar - cs) = {worst:.3g}"


def check_cascade_law(pairs=20, samples=10**6, seed=0):
    rng = _rng.generator(seed, 7, 0)
    worst = 0.0
    for i, (e, d) in enumerate(rng.random((pairs, 2))):
        g = _rng.generator(seed, 8, i)
        flips = (g.random(samples) < e) ^ (g.random(samples) < d)
        target = cascade(e, d)
        sigma = math.sqrt(target * (1 - target) / samples)
        worst = max(worst, abs(flips.mean() - target) / sigma)
    return worst <= 3.0, f"max deviation {worst:.2f} sigma"


def random_cq_channels(count, seed):
    rng = _rng.generator(seed, 9, 0)
    return [SynthesizedChannel.from_blocks((random_density_matrix(2, rng).entries[None],
                                random_density_matrix(2, rng).entries[None])) for _ in range(count)]


def check_conservation_and_ordering(count=1000, seed=0):
    worst_cons, worst_order = 0.0, 0.0
    for w in random_cq_channels(count, seed):
        c, lo, hi = w.chi(), split_minus(w).chi(), split_plus(w).chi()
        worst_cons = max(worst_cons, abs((lo + hi) / 2 - c))
        worst_order = max(worst_order, lo - c, c - hi)
    ok = worst_cons < 1e-9 and worst_order <= 1e-10
    return ok, f"conservation residual {worst_cons:.3g}, ordering violation {worst_order:.3g}"


def check_polarization_trend():
    w = amplitude_channel(math.pi / 4)
    v1 = np.var([c.chi for c in polarize(w, 1)], ddof=1)
    v3 = np.var([c.chi for c in polarize(w, 3)], ddof=1)
    return v3 > v1, f"variance depth 1 = {v1:.4g}, depth 3 = {v3:.4g}"


def check_cptp_suite(count=1000, seed=0):
    rng = _rng.generator(seed, 10, 0)
    dpi, contr, holevo = np.inf, np.inf, np.inf
    for _ in range(count):
        phi = random_channel(2, rng)
        rho, sigma = random_density_matrix(2, rng), random_density_matrix(2, rng)
        dpi = min(dpi, check_dpi(phi, rho, sigma))
        contr = min(contr, check_contractivity(phi, rho, sigma))
        ens = Ensemble.uniform([rho, sigma])
        post = Ensemble.uniform([apply_channel(phi, rho), apply_channel(phi, sigma)])
        holevo = min(holevo, holevo_chi(ens) - holevo_chi(post))
    ok = min(dpi, contr, holevo) >= -1e-10
    return ok, f"min residuals: DPI {dpi:.3g}, contractivity {contr:.3g}, Holevo {holevo:.3g}"


def check_helstrom(count=500, shots=10**5, seed=0):
    from .bounds import helstrom_measurement

    rng = _rng.generator(seed, 11, 0)
    worst = 0.0
    for i in range(count):
        r0, r1 = random_density_matrix(2, rng), random_density_matrix(2, rng)
        proj = helstrom_measurement(r0, r1)
        p_guess0 = [float(np.trace(proj @ r.entries).real) for r in (r0, r1)]
        g = _rng.generator(seed, 12, i)
        labels = g.integers(0, 2, shots)
        guess0 = g.random(shots) < np.where(labels == 0, p_guess0[0], p_guess0[1])
        err = np.mean(guess0 != (labels == 0))
        target = 1.0 - helstrom_two_state(r0, r1)
        sigma = max(math.sqrt(target * (1 - target) / shots), 1e-12)
        worst = max(worst, abs(err - target) / sigma)
    return worst <= 3.0, f"max |error - (1 - P_succ)| = {worst:.2f} sigma"


def check_chsh():
    g = XorGame.chsh()
    c = classical_optimum(g)
    b = bias(g, tsirelson_strategy())
    ok = c == 0.5 and abs(b - 0.707107) <= 1e-6 and abs(win_probability(b) - 0.853553) <= 1e-6
    return ok, f"classical {c}, quantum {b:.9f}, win {win_probability(b):.9f}"


def check_binary_entropy_symmetry():
    p = np.linspace(0, 1, 1001)
    worst = max(abs(binary_entropy(x) - binary_entropy(1 - x)) for x in p)
    return worst < 1e-12, f"max asymmetry {worst:.3g}"


SUITE = {
    "binary-entropy-symmetry": lambda s, seed: check_binary_entropy_symmetry(),
    "public-discussion-equality": lambda s, seed: check_public_discussion_equality(max(3, int(100 * s))),
    "capacity-ordering": lambda s, seed: check_capacity_ordering(max(3, int(100 * s))),
    "cascade-law": lambda s, seed: check_cascade_law(20, max(10**4, int(10**6 * s)), seed),
    "holevo-conservation-ordering": lambda s, seed: check_conservation_and_ordering(max(10, int(1000 * s)), seed),
    "polarization-trend": lambda s, seed: check_polarization_trend(),
    "cptp-suite": lambda s, seed: check_cptp_suite(max(10, int(1000 * s)), seed),
    "helstrom-achievability": lambda s, seed: check_helstrom(max(5, int(500 * s)), max(10**4, int(10**5 * s)), seed),
    "chsh": lambda s, seed: check_chsh(),
}


def run_suite(size=1.0, seed=0, only=None):
    names = [n for n in SUITE if only is None or n in only]
    return [_timed(n, lambda n=n: SUITE[n](size, seed)) for n in names]
