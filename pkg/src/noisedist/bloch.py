"""Bloch-vector algebra for qubit states, spin observables, and projective
measure-and-prepare instruments.

Every quantity the package computes is a function of inner products of real
3-vectors, so states are represented as Bloch vectors throughout; no complex
2x2 matrices (and hence no global-phase convention) are needed. Spin
observables are +1/-1 valued and labelled by their eigenvalues.

All types are immutable values and all operations are pure functions, so
everything here can be shared freely across concurrent workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

#: Outcome labels in storage order: index 0 holds outcome +1, index 1 holds -1.
OUTCOMES = (1, -1)

# Constructors accept unit vectors up to this absolute norm error.
UNIT_ATOL = 1e-12

# Explicit normalization (from_vector) rejects anything shorter than this
# rather than silently rescaling noise to the sphere.
DEGENERATE_NORM = 1e-9


def _check_outcome(outcome):
    if outcome not in (1, -1):
        raise ValidationError(f"outcome must be +1 or -1, got {outcome!r}")
    return outcome


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector (x, y, z). Pure states lie on the unit sphere, mixed
    states strictly inside; this class itself enforces no length constraint.
    """

    x: float
    y: float
    z: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "z", float(self.z))

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def dot(self, other: "BlochVector") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def __neg__(self) -> "BlochVector":
        return BlochVector(-self.x, -self.y, -self.z)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class PureState:
    """A pure qubit state, i.e. a unit Bloch vector.

    The (theta, phi) parametrization follows the usual spherical convention:
    direction = (sin(theta) cos(phi), sin(theta) sin(phi), cos(theta)), with
    the antipodal partner at (pi - theta, phi + pi).
    """

    direction: BlochVector

    def __post_init__(self):
        n = self.direction.norm()
        if abs(n - 1.0) > UNIT_ATOL:
            raise ValidationError(
                f"pure state requires a unit Bloch vector; |r| = {n!r}"
            )

    @classmethod
    def from_vector(cls, x, y, z) -> "PureState":
        """Normalize (x, y, z) onto the sphere. Rejects near-zero input."""
        v = BlochVector(x, y, z)
        n = v.norm()
        if n < DEGENERATE_NORM:
            raise ValidationError(f"degenerate direction, |r| = {n!r}")
        return cls(BlochVector(v.x / n, v.y / n, v.z / n))

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "PureState":
        """State at polar angle theta from +z and azimuth phi (radians)."""
        st = math.sin(theta)
        return cls(BlochVector(st * math.cos(phi), st * math.sin(phi), math.cos(theta)))

    def angles(self) -> tuple[float, float]:
        """(theta, phi) with theta in [0, pi], phi in (-pi, pi].

        Round-trips with from_angles to 1e-10 for theta away from the poles;
        phi is indeterminate at the poles themselves.
        """
        d = self.direction
        return (math.atan2(math.hypot(d.x, d.y), d.z), math.atan2(d.y, d.x))

    def antipode(self) -> "PureState":
        """The orthogonal state, -direction = psi(pi - theta, phi + pi)."""
        return PureState(-self.direction)


@dataclass(frozen=True)
class Observable:
    """A +1/-1 valued spin observable n . sigma given by its unit axis."""

    axis: BlochVector

    def __post_init__(self):
        n = self.axis.norm()
        if abs(n - 1.0) > UNIT_ATOL:
            raise ValidationError(f"observable requires a unit axis; |axis| = {n!r}")

    def eigenstate(self, outcome: int) -> PureState:
        _check_outcome(outcome)
        return PureState(self.axis if outcome == 1 else -self.axis)

    def eigenstates(self) -> tuple[PureState, PureState]:
        """(|+axis>, |-axis>) in outcome order (+1, -1)."""
        return (self.eigenstate(1), self.eigenstate(-1))


SIGMA_X = Observable(BlochVector(1.0, 0.0, 0.0))
SIGMA_Y = Observable(BlochVector(0.0, 1.0, 0.0))
SIGMA_Z = Observable(BlochVector(0.0, 0.0, 1.0))


def polar_observable(theta: float) -> Observable:
    """Spin along (0, sin(theta), cos(theta)): the y-z-plane measurement axis
    at polar angle theta (radians) from +z."""
    return Observable(BlochVector(0.0, math.sin(theta), math.cos(theta)))


def eigenstates(obs: Observable) -> tuple[PureState, PureState]:
    return obs.eigenstates()


def born_probability(state: PureState, obs: Observable, outcome: int) -> float:
    """p(outcome) = (1 + outcome * r . axis) / 2 for a sharp measurement."""
    _check_outcome(outcome)
    p = 0.5 * (1.0 + outcome * state.direction.dot(obs.axis))
    # inner products can overshoot [-1, 1] by an ulp
    return min(max(p, 0.0), 1.0)


@dataclass(frozen=True)
class CorrectionMap:
    """Outcome-conditioned re-preparation applied after the measurement.

    Every sharp qubit measurement is of measure-and-prepare form, so the most
    general correction in scope is a pair of target states, one per outcome.
    """

    target_plus: PureState
    target_minus: PureState

    @classmethod
    def identity_for(cls, obs: Observable) -> "CorrectionMap":
        """Leave the post-measurement eigenstates |+-m> untouched."""
        plus, minus = obs.eigenstates()
        return cls(plus, minus)

    @classmethod
    def from_rotation_angles(cls, vartheta: float, phi: float) -> "CorrectionMap":
        """Send outcome +1 to psi(vartheta, phi) and -1 to its antipode."""
        plus = PureState.from_angles(vartheta, phi)
        return cls(plus, plus.antipode())

    def target(self, outcome: int) -> PureState:
        _check_outcome(outcome)
        return self.target_plus if outcome == 1 else self.target_minus


@dataclass(frozen=True)
class ProjectiveInstrument:
    """A sharp measurement plus the re-preparation rule for its output.

    With the default post map the instrument projects onto the eigenstates
    |+-m> of the measured observable.
    """

    measured: Observable
    post_map: CorrectionMap = None

    def __post_init__(self):
        if self.post_map is None:
            object.__setattr__(self, "post_map", CorrectionMap.identity_for(self.measured))

    def outcome_probability(self, state: PureState, outcome: int) -> float:
        return born_probability(state, self.measured, outcome)

    def apply(self, state: PureState, outcome: int) -> tuple[float, PureState]:
        """(outcome probability, emitted state) for one measurement branch."""
        return (self.outcome_probability(state, outcome), self.post_map.target(outcome))


def apply_instrument(
    state: PureState, inst: ProjectiveInstrument, outcome: int
) -> tuple[float, PureState]:
    return inst.apply(state, outcome)
