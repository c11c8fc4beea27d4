"""Entropy machinery and the information-theoretic noise/disturbance
functionals.

All entropies are in bits (log base 2) and 0 * log 0 is taken as 0
throughout, which is what makes the exact eigenstate configurations
(theta = 0, 90, 180 degrees) come out exactly 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bloch import (
    OUTCOMES,
    CorrectionMap,
    Observable,
    ProjectiveInstrument,
    PureState,
    born_probability,
)
from .errors import DomainError, ValidationError

# Slack accepted on mathematical domain boundaries before raising.
DOMAIN_ATOL = 1e-12

# Bisection for the entropy inverse: interval width target and iteration cap.
_BISECT_WIDTH = 1e-15
_BISECT_MAX_STEPS = 200


def _neg_p_log2_p(p):
    """-p log2 p elementwise with the 0 log 0 = 0 convention."""
    safe = np.where(p > 0.0, p, 1.0)
    return np.where(p > 0.0, -p * np.log2(safe), 0.0)


def binary_entropy(x):
    """h(x) = -(1+x)/2 log2((1+x)/2) - (1-x)/2 log2((1-x)/2), in bits.

    x is the bias of a +1/-1 variable, so h(0) = 1, h(+-1) = 0 and
    h(-x) = h(x). Accepts scalars or arrays; |x| <= 1 up to 1e-12 slack.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > 1.0 + DOMAIN_ATOL):
        raise DomainError("binary_entropy argument must satisfy |x| <= 1")
    arr = np.clip(arr, -1.0, 1.0)
    out = _neg_p_log2_p((1.0 + arr) / 2.0) + _neg_p_log2_p((1.0 - arr) / 2.0)
    return float(out) if np.ndim(x) == 0 else out


def binary_entropy_derivative(x):
    """h'(x) = (1/2) log2((1-x)/(1+x)); diverges at the endpoints, so the
    domain is the open interval |x| < 1."""
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) >= 1.0):
        raise DomainError("binary_entropy_derivative requires |x| < 1")
    out = 0.5 * np.log2((1.0 - arr) / (1.0 + arr))
    return float(out) if np.ndim(x) == 0 else out


def binary_entropy_inverse(y):
    """g(y): the unique x in [0, 1] with h(x) = y.

    h is strictly decreasing on [0, 1], so plain bisection is unconditionally
    robust; iterations stop once the bracket is below 1e-15 (about 50 steps,
    h-residual well under 1e-12), with a 200-step cap. Endpoints are returned
    exactly: g(0) = 1, g(1) = 0.
    """
    arr = np.asarray(y, dtype=float)
    if np.any((arr < -DOMAIN_ATOL) | (arr > 1.0 + DOMAIN_ATOL)):
        raise DomainError("binary_entropy_inverse argument must lie in [0, 1]")
    arr = np.clip(arr, 0.0, 1.0)

    lo = np.zeros_like(arr)
    hi = np.ones_like(arr)
    steps = 0
    while steps < _BISECT_MAX_STEPS and np.any(hi - lo > _BISECT_WIDTH):
        mid = 0.5 * (lo + hi)
        go_right = binary_entropy(mid) > arr  # root is where h crosses y
        lo = np.where(go_right, mid, lo)
        hi = np.where(go_right, hi, mid)
        steps += 1
    x = 0.5 * (lo + hi)
    x = np.where(arr == 0.0, 1.0, x)
    x = np.where(arr == 1.0, 0.0, x)
    return float(x) if np.ndim(y) == 0 else x


@dataclass(frozen=True, eq=False)
class JointTable:
    """Joint distribution p(x, y) over two finite outcome alphabets.

    p[i, j] is the probability of (labels_x[i], labels_y[j]); entries must be
    non-negative and sum to 1 within 1e-9.
    """

    labels_x: tuple
    labels_y: tuple
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels_x", tuple(self.labels_x))
        object.__setattr__(self, "labels_y", tuple(self.labels_y))
        arr = np.asarray(self.p, dtype=float)
        if arr.shape != (len(self.labels_x), len(self.labels_y)):
            raise ValidationError(
                f"joint table shape {arr.shape} does not match labels "
                f"({len(self.labels_x)}, {len(self.labels_y)})"
            )
        if np.any(arr < 0.0):
            raise ValidationError("joint table entries must be non-negative")
        total = float(arr.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValidationError(f"joint table must sum to 1, got {total!r}")
        object.__setattr__(self, "p", arr)


def _cond_entropy_given_last(p):
    """H(X|Y) in bits for arrays shaped (..., nx, ny), conditioning on the
    last axis. Zero cells contribute nothing; conditioning outcomes with zero
    marginal carry only zero cells and so are skipped automatically."""
    marginal = p.sum(axis=-2, keepdims=True)
    safe_p = np.where(p > 0.0, p, 1.0)
    safe_m = np.where(marginal > 0.0, marginal, 1.0)
    terms = np.where(p > 0.0, -p * np.log2(safe_p / safe_m), 0.0)
    return terms.sum(axis=(-2, -1))


def conditional_entropy(joint, given: str = "y") -> float:
    """Conditional Shannon entropy of a 2D joint table, in bits.

    given="y" returns H(X|Y), given="x" returns H(Y|X). Accepts a JointTable
    or a raw probability matrix.
    """
    arr = joint.p if isinstance(joint, JointTable) else np.asarray(joint, dtype=float)
    if not isinstance(joint, JointTable):
        if np.any(arr < 0.0):
            raise ValidationError("joint probabilities must be non-negative")
    if given == "y":
        return float(_cond_entropy_given_last(arr))
    if given == "x":
        return float(_cond_entropy_given_last(arr.T))
    raise ValidationError(f"given must be 'x' or 'y', got {given!r}")


@dataclass(frozen=True)
class NDPoint:
    """A (noise, disturbance) pair for one apparatus configuration."""

    noise: float
    disturbance: float
    theta: float = None
    corrected: bool = False

    def __post_init__(self):
        object.__setattr__(self, "noise", float(self.noise))
        object.__setattr__(self, "disturbance", float(self.disturbance))
        for name in ("noise", "disturbance"):
            v = getattr(self, name)
            if not (-1e-12 <= v <= 1.0 + 1e-9):
                raise ValidationError(f"{name} must lie in [0, 1] bits, got {v!r}")


def sequential_joint(
    state: PureState, inst: ProjectiveInstrument, second: Observable
) -> np.ndarray:
    """Joint outcome distribution of the instrument followed by a sharp
    measurement of `second`, as a 2x2 array indexed [mu, outcome2] in the
    (+1, -1) storage order. Rows sum to the single-measurement Born
    probabilities of the instrument."""
    joint = np.empty((2, 2))
    for i, mu in enumerate(OUTCOMES):
        p_mu, emitted = inst.apply(state, mu)
        for j, out2 in enumerate(OUTCOMES):
            joint[i, j] = p_mu * born_probability(emitted, second, out2)
    return joint


def noise(inst: ProjectiveInstrument, a: Observable) -> float:
    """Information-theoretic noise H(A|M): the conditional entropy of which
    eigenstate of `a` was sent (uniformly) given the instrument's outcome."""
    joint = np.empty((2, 2))
    for i, alpha in enumerate(OUTCOMES):
        state = a.eigenstate(alpha)
        for j, mu in enumerate(OUTCOMES):
            joint[i, j] = 0.5 * inst.outcome_probability(state, mu)
    table = JointTable(OUTCOMES, OUTCOMES, joint)
    return conditional_entropy(table, given="y")


def disturbance(
    inst: ProjectiveInstrument, b: Observable, correction: CorrectionMap = None
) -> float:
    """Information-theoretic disturbance H(B|B'): the conditional entropy of
    which eigenstate of `b` was sent (uniformly) given the outcome of a sharp
    `b` measurement performed after the instrument.

    `correction` overrides the instrument's post map when given, leaving the
    outcome statistics of the instrument itself untouched.
    """
    post = correction if correction is not None else inst.post_map
    effective = ProjectiveInstrument(inst.measured, post)
    joint = np.zeros((2, 2))
    for i, beta in enumerate(OUTCOMES):
        joint[i] = 0.5 * sequential_joint(b.eigenstate(beta), effective, b).sum(axis=0)
    table = JointTable(OUTCOMES, OUTCOMES, joint)
    return conditional_entropy(table, given="y")


# Closed-form theory curves for the y-z-plane configuration A = sigma_z,
# B = sigma_y, measurement axis at polar angle theta. These are what the
# instrument pipeline above must reproduce.


def theory_noise(theta):
    """N(theta) = h(cos(theta))."""
    return binary_entropy(np.cos(theta))


def theory_disturbance_uncorrected(theta):
    """D0(theta) = h(sin^2(theta)), no correction applied."""
    return binary_entropy(np.sin(theta) ** 2)


def theory_disturbance_optimal(theta):
    """Dopt(theta) = h(|sin(theta)|), optimal correction applied."""
    return binary_entropy(np.abs(np.sin(theta)))
