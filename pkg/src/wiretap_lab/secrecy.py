"""Secrecy capacities of the binary-symmetric wiretap/broadcast setting."""
from dataclasses import dataclass

import numpy as np

from ._optimize import maximize_binary_prior
from ._validation import check_prob
from .channels import conditional_mi_given_z, conditional_mi_given_z_grid
from .info import binary_entropy, cascade


def _half(value, name):
    return check_prob(value, name, upper=0.5)


def cs(eps, delta):
    """Secrecy capacity without public discussion: ``h(delta) - h(eps)`` if
    Eve's channel is noisier (``delta > eps``), else 0."""
    eps, delta = _half(eps, "eps"), _half(delta, "delta")
    if delta <= eps:
        return 0.0
    return binary_entropy(delta) - binary_entropy(eps)


def cs_bar_bsc(eps, delta):
    """Secrecy capacity with public discussion, ``h(eps (+) delta) - h(eps)``."""
    eps, delta = _half(eps, "eps"), _half(delta, "delta")
    return max(0.0, binary_entropy(cascade(eps, delta)) - binary_entropy(eps))


@dataclass(frozen=True)
class UpperBound:
    value: float
    prior: tuple


def cs_bar_upper(model):
    """Numerical supremum of I(X;Y|Z) over binary input distributions."""
    grid = np.linspace(0.0, 1.0, 1001)
    values = conditional_mi_given_z_grid(model, grid)
    p1, value = maximize_binary_prior(
        lambda x: conditional_mi_given_z(model, [1.0 - x, x]), grid_values=values)
    return UpperBound(value, (1.0 - p1, p1))


@dataclass(frozen=True)
class LowerBound:
    value: float
    vacuous: bool


def thm4_lower(eA, eB, eE, clamp=False):
    """Public-discussion lower bound from pairwise cascades.

    ``max(h(eA (+) eE), h(eB (+) eE)) - h(eA (+) eB)``; negative values mean the
    bound says nothing and are flagged rather than hidden.
    """
    eA, eB, eE = _half(eA, "eA"), _half(eB, "eB"), _half(eE, "eE")
    value = (max(binary_entropy(cascade(eA, eE)), binary_entropy(cascade(eB, eE)))
             - binary_entropy(cascade(eA, eB)))
    vacuous = value < 0
    if clamp and vacuous:
        value = 0.0
    return LowerBound(value, vacuous)
