"""Uncertainty-bound evaluation, optimal correction, the noise-disturbance
tradeoff boundary, and a brute-force ensemble oracle for it.

The tradeoff boundary for the complementary pair (sigma_z, sigma_y) is the
parametric curve (h(cos t), h(sin t)), t in [0, pi/2]; equivalently the set
where g[N]^2 + g[D]^2 = 1 with g the inverse of h on [0, 1]. Values of
g[N]^2 + g[D]^2 above 1 are prohibited, below 1 allowed but not optimal.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bloch import (
    OUTCOMES,
    SIGMA_Y,
    SIGMA_Z,
    UNIT_ATOL,
    BlochVector,
    CorrectionMap,
    Observable,
    PureState,
    born_probability,
    polar_observable,
)
from .entropy import (
    NDPoint,
    _cond_entropy_given_last,
    binary_entropy,
    binary_entropy_derivative,
    binary_entropy_inverse,
)
from .errors import DomainError, ValidationError


def c_ab(a: Observable, b: Observable) -> float:
    """Incompatibility constant -log2 max |<a|b>|^2 over eigenstate pairs.

    For qubit axes the maximal squared overlap is (1 + |a.b|)/2, so this is
    1 bit for complementary observables and 0 for identical ones.
    """
    overlap = 0.5 * (1.0 + abs(a.axis.dot(b.axis)))
    return -math.log2(overlap)


def optimal_correction(m_axis, b: Observable) -> CorrectionMap:
    """Disturbance-minimizing re-preparation after a sharp measurement along
    m_axis: outcome mu is sent to |mu b> when b.m >= 0 and to |-mu b>
    otherwise. The tie b.m = 0 takes the >= branch."""
    if isinstance(m_axis, Observable):
        m_axis = m_axis.axis
    if not isinstance(m_axis, BlochVector):
        raise ValidationError(f"m_axis must be a BlochVector, got {type(m_axis).__name__}")
    if abs(m_axis.norm() - 1.0) > UNIT_ATOL:
        raise ValidationError(f"m_axis must be unit-norm, |m| = {m_axis.norm()!r}")
    plus, minus = b.eigenstates()
    if b.axis.dot(m_axis) >= 0.0:
        return CorrectionMap(plus, minus)
    return CorrectionMap(minus, plus)


def disturbance_surface(theta_m: float, varthetas, phis, b: Observable = SIGMA_Y) -> np.ndarray:
    """Disturbance of B for every re-preparation target psi(vartheta, phi).

    The instrument measures along (0, sin theta_m, cos theta_m); outcome +1
    is re-prepared as psi(vartheta, phi), outcome -1 as its antipode. Returns
    the H(B|B') surface with shape (len(varthetas), len(phis)). This is the
    scalar instrument pipeline vectorized over the lattice, kept to the same
    arithmetic.
    """
    m = polar_observable(theta_m)
    p_mu_given_beta = np.empty((2, 2))
    for i, beta in enumerate(OUTCOMES):
        state = b.eigenstate(beta)
        for j, mu in enumerate(OUTCOMES):
            p_mu_given_beta[i, j] = born_probability(state, m, mu)

    vt = np.asarray(varthetas, dtype=float)[:, None]
    ph = np.asarray(phis, dtype=float)[None, :]
    bx, by, bz = b.axis.as_tuple()
    # psi(vartheta, phi) . b for the +1 target; the -1 target is antipodal
    overlap = np.sin(vt) * np.cos(ph) * bx + np.sin(vt) * np.sin(ph) * by + np.cos(vt) * bz

    joint = np.zeros(overlap.shape + (2, 2))
    for i in range(2):
        for j, mu in enumerate(OUTCOMES):
            for k, bp in enumerate(OUTCOMES):
                p_bp = np.clip(0.5 * (1.0 + bp * mu * overlap), 0.0, 1.0)
                joint[..., i, k] += 0.5 * p_mu_given_beta[i, j] * p_bp
    return _cond_entropy_given_last(joint)


@dataclass(frozen=True, eq=False)
class GridSearchResult:
    """Disturbance surface over a correction-target lattice plus its argmin.

    Ties resolve to the first minimum in row-major order (vartheta outer,
    phi inner), so the result is deterministic for symmetric surfaces.
    """

    theta_m: float
    varthetas: np.ndarray
    phis: np.ndarray
    surface: np.ndarray
    best_vartheta: float
    best_phi: float
    d_min: float


def correction_grid_search(theta_m: float, b: Observable, varthetas, phis) -> GridSearchResult:
    """Evaluate the disturbance surface on a (vartheta, phi) lattice and
    locate its minimum."""
    vt = np.atleast_1d(np.asarray(varthetas, dtype=float))
    ph = np.atleast_1d(np.asarray(phis, dtype=float))
    if vt.size == 0 or ph.size == 0:
        raise ValidationError("correction grid must be non-empty")
    surface = disturbance_surface(theta_m, vt, ph, b)
    # np.argmin returns the first occurrence in C (row-major) order
    flat = int(np.argmin(surface))
    i, j = divmod(flat, ph.size)
    return GridSearchResult(
        theta_m=theta_m,
        varthetas=vt,
        phis=ph,
        surface=surface,
        best_vartheta=float(vt[i]),
        best_phi=float(ph[j]),
        d_min=float(surface[i, j]),
    )


@dataclass(frozen=True)
class BoundReport:
    """Diagnostics of one (noise, disturbance) point against both bounds.

    tight_value is g[N]^2 + g[D]^2, signed so either reading of the tight
    relation is auditable; saturation_gap = 1 - tight_value is 0 exactly on
    the boundary.
    """

    c_ab: float
    sum_nd: float
    tight_value: float
    satisfies_general: bool
    satisfies_tight: bool
    saturation_gap: float


def check_bounds(
    point: NDPoint,
    a: Observable = SIGMA_Z,
    b: Observable = SIGMA_Y,
    tolerance: float = 1e-9,
) -> BoundReport:
    """Evaluate the general bound N + D >= c_AB and the tight qubit bound
    g[N]^2 + g[D]^2 <= 1 for one point.

    tolerance is the accepted slack: 1e-9 suits analytic inputs; sampled
    points should pass a few standard deviations' worth instead.
    """
    c = c_ab(a, b)
    total = point.noise + point.disturbance
    gn = binary_entropy_inverse(min(max(point.noise, 0.0), 1.0))
    gd = binary_entropy_inverse(min(max(point.disturbance, 0.0), 1.0))
    tight = gn * gn + gd * gd
    return BoundReport(
        c_ab=c,
        sum_nd=total,
        tight_value=tight,
        satisfies_general=bool(total >= c - tolerance),
        satisfies_tight=bool(tight <= 1.0 + tolerance),
        saturation_gap=1.0 - tight,
    )


def variational_f(theta):
    """f(t) = (h'(sin t)/sin t) / (h'(cos t)/cos t) on the open interval
    (0, pi/2).

    This is the stationarity ratio of the boundary's variational problem:
    boundary ensembles have all members at angles where f equals the same
    multiplier. f increases monotonically from 0+ to +infinity and satisfies
    f(t) f(pi/2 - t) = 1. Endpoint input (or input close enough that sin or
    cos rounds to 1) raises DomainError.
    """
    arr = np.asarray(theta, dtype=float)
    if np.any((arr <= 0.0) | (arr >= math.pi / 2)):
        raise DomainError("variational_f is defined on the open interval (0, pi/2)")
    s, c = np.sin(arr), np.cos(arr)
    if np.any(s >= 1.0) or np.any(c >= 1.0):
        raise DomainError("variational_f input too close to an endpoint singularity")
    out = (binary_entropy_derivative(s) / s) / (binary_entropy_derivative(c) / c)
    return float(out) if np.ndim(theta) == 0 else out


def _stationarity_ratio_raw(theta):
    """The f expression without the (0, pi/2) interval restriction; valid
    wherever sin and cos are nonzero and unsaturated. h' is odd, so this
    inherits f's symmetry about 0 and pi/2."""
    arr = np.asarray(theta, dtype=float)
    s, c = np.sin(arr), np.cos(arr)
    if np.any(s == 0.0) or np.any(c == 0.0) or np.any(np.abs(s) >= 1.0) or np.any(np.abs(c) >= 1.0):
        raise DomainError("stationarity ratio undefined at multiples of pi/2")
    return (binary_entropy_derivative(s) / s) / (binary_entropy_derivative(c) / c)


@dataclass(frozen=True)
class BoundarySolverState:
    """Stationary configuration behind one interior boundary point.

    theta_m are the member angles (radians) of the extremal pure-state
    ensembles, parametrized by r = (0, cos t, sin t) in the y-z plane; kappa
    and lam are the multipliers of the disturbance constraint and the weight
    normalization. Every retained angle satisfies f(theta_m) = kappa within
    1e-8; any weights over these angles give the same boundary point.
    """

    theta_m: tuple
    kappa: float
    lam: float

    def __post_init__(self):
        object.__setattr__(self, "theta_m", tuple(float(t) for t in self.theta_m))
        resid = np.abs(_stationarity_ratio_raw(np.array(self.theta_m)) - self.kappa)
        if np.any(resid > 1e-8):
            raise ValidationError(
                f"stationarity violated: max |f(theta_m) - kappa| = {float(resid.max())!r}"
            )

    def member_states(self) -> tuple:
        """Bloch vectors (0, cos t, sin t) of the extremal members."""
        return tuple(
            BlochVector(0.0, math.cos(t), math.sin(t)) for t in self.theta_m
        )


def variational_solver_state(theta: float) -> BoundarySolverState:
    """Solve the stationarity conditions for the boundary point at parameter
    `theta` in the open interval (0, pi/2).

    The angle condition admits the four solutions theta_m = +-pi/2 +- theta,
    all sharing kappa = f(pi/2 - theta); the weight condition then fixes
    lam = -(h(cos theta) + kappa h(sin theta)). Any mixture of the four
    members lands on (h(cos theta), h(sin theta)).
    """
    theta = float(theta)
    if not 0.0 < theta < math.pi / 2:
        raise DomainError("boundary parameter must lie in the open interval (0, pi/2)")
    kappa = variational_f(math.pi / 2 - theta)
    members = (
        math.pi / 2 - theta,
        math.pi / 2 + theta,
        -math.pi / 2 + theta,
        -math.pi / 2 - theta,
    )
    lam = -(binary_entropy(math.cos(theta)) + kappa * binary_entropy(math.sin(theta)))
    return BoundarySolverState(theta_m=members, kappa=kappa, lam=lam)


class BoundaryCurve(NamedTuple):
    """The optimal tradeoff boundary sampled at `theta`: the parametric curve
    (noise, disturbance) = (h(cos theta), h(sin theta))."""

    theta: np.ndarray
    noise: np.ndarray
    disturbance: np.ndarray

    def points(self) -> list[tuple[float, float]]:
        return [(float(n), float(d)) for n, d in zip(self.noise, self.disturbance)]


def boundary_curve(samples: int) -> BoundaryCurve:
    """Sample the boundary at `samples` equally spaced angles in [0, pi/2].

    Endpoints are (0, 1) and (1, 0) exactly; every point satisfies
    g[N]^2 + g[D]^2 = 1 within 1e-10.
    """
    if samples < 2:
        raise ValidationError(f"samples must be >= 2, got {samples!r}")
    theta = np.linspace(0.0, math.pi / 2, int(samples))
    return BoundaryCurve(theta, binary_entropy(np.cos(theta)), binary_entropy(np.sin(theta)))


def boundary_disturbance(noise_bits):
    """Disturbance of the boundary point with the given noise: the minimal
    disturbance compatible with the tight relation."""
    g = binary_entropy_inverse(np.clip(noise_bits, 0.0, 1.0))
    return binary_entropy(np.sqrt(np.clip(1.0 - g * g, 0.0, 1.0)))


def signed_boundary_distance(noise_bits, disturbance_bits):
    """Vertical distance to the boundary in bits; negative means the point
    lies in the prohibited region below the curve."""
    return disturbance_bits - boundary_disturbance(noise_bits)


@dataclass(frozen=True)
class EnsembleMember:
    """One weighted qubit state of an ensemble; mixed states allowed."""

    weight: float
    state: BlochVector

    def __post_init__(self):
        object.__setattr__(self, "weight", float(self.weight))
        if not -1e-12 <= self.weight <= 1.0 + 1e-12:
            raise ValidationError(f"weight must lie in [0, 1], got {self.weight!r}")
        n = self.state.norm()
        if n > 1.0 + 1e-12:
            raise ValidationError(f"Bloch vector must satisfy |r| <= 1, got |r| = {n!r}")


def ensemble_point(members) -> tuple[float, float]:
    """Ensemble-averaged entropy pair
    (sum_m p_m H(sigma_z|rho_m), sum_m p_m H(sigma_y|rho_m)) with
    H(sigma|rho) = h(r . axis)."""
    members = list(members)
    total = sum(m.weight for m in members)
    if abs(total - 1.0) > 1e-9:
        raise ValidationError(f"ensemble weights must sum to 1, got {total!r}")
    n = sum(m.weight * binary_entropy(m.state.z) for m in members)
    d = sum(m.weight * binary_entropy(m.state.y) for m in members)
    return (float(n), float(d))


def pure_state_projection(members) -> list[EnsembleMember]:
    """Project each member onto the pure y-z state with the same y component:
    r' = (0, r_y, s sqrt(1 - r_y^2)) with s = +1 when r_z >= 0 and -1
    otherwise. This never increases H(sigma_z) and preserves H(sigma_y)."""
    out = []
    for m in members:
        ry = m.state.y
        sign = 1.0 if m.state.z >= 0.0 else -1.0
        rz = sign * math.sqrt(max(1.0 - ry * ry, 0.0))
        out.append(EnsembleMember(m.weight, BlochVector(0.0, ry, rz)))
    return out


@dataclass(frozen=True)
class OracleReport:
    """Extremes observed over the random-ensemble trials.

    min_signed_distance is the worst (most negative) vertical distance below
    the boundary; max_tight_excess the worst g[N]^2 + g[D]^2 - 1. The
    projection fields bound how far any trial strayed from the pure-state
    reduction (noise must not increase, disturbance must be preserved),
    member-wise and ensemble-wise.

    Single-member trials can never go below the boundary (a single state has
    r_y^2 + r_z^2 <= 1, hence g[N]^2 + g[D]^2 <= 1), and
    min_single_member_distance records that. Mixing members whose angles sit
    at the two endpoint states does beat the curve, down to the straight
    N + D = 1 segment: e.g. the ensemble {(1/2, |+z>), (1/2, |+y>)} sits at
    (0.5, 0.5), 0.195 bits below the boundary. boundary_violations counts the
    sampled trials below the boundary by more than 1e-9, and worst_ensemble
    holds the members of the worst one for auditing.
    """

    trials: int
    max_members: int
    seed: int
    min_signed_distance: float
    max_tight_excess: float
    boundary_violations: int
    min_single_member_distance: float
    max_projection_noise_increase: float
    max_member_noise_increase: float
    max_projection_disturbance_shift: float
    worst_ensemble: tuple


def ensemble_boundary_oracle(trials: int, max_members: int = 4, seed: int = 0) -> OracleReport:
    """Brute-force survey of random ensembles against the boundary.

    Samples `trials` ensembles with 1..max_members members, weights flat on
    the simplex and Bloch vectors uniform in the unit ball (mixed states
    included), computes their (N*, D*) points, and records the extremes of
    the signed boundary distance together with the pure-state-projection
    diagnostics. Fully vectorized; deterministic for fixed arguments.

    Expected outcome (see OracleReport): the projection lemma holds for every
    member of every trial and single-member points never fall below the
    boundary, but multi-member mixtures occasionally do - the entropy-average
    region is bounded below by the straight N + D = 1 segment, not by the
    curve.
    """
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials!r}")
    if max_members < 1:
        raise ValidationError(f"max_members must be >= 1, got {max_members!r}")
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))

    sizes = rng.integers(1, max_members + 1, size=trials)
    active = np.arange(max_members)[None, :] < sizes[:, None]
    gamma = rng.exponential(1.0, size=(trials, max_members))
    gamma *= active
    weights = gamma / gamma.sum(axis=1, keepdims=True)

    direction = rng.normal(size=(trials, max_members, 3))
    direction /= np.maximum(np.linalg.norm(direction, axis=-1, keepdims=True), 1e-300)
    radius = rng.uniform(size=(trials, max_members)) ** (1.0 / 3.0)
    bloch = direction * radius[..., None]

    h_z = binary_entropy(bloch[..., 2])
    h_y = binary_entropy(bloch[..., 1])
    n_star = (weights * h_z).sum(axis=1)
    d_star = (weights * h_y).sum(axis=1)

    ry = bloch[..., 1]
    rz_proj = np.where(bloch[..., 2] >= 0.0, 1.0, -1.0) * np.sqrt(np.clip(1.0 - ry * ry, 0.0, None))
    h_z_proj = binary_entropy(rz_proj)
    n_proj = (weights * h_z_proj).sum(axis=1)
    d_proj = (weights * binary_entropy(ry)).sum(axis=1)

    g_n = binary_entropy_inverse(np.clip(n_star, 0.0, 1.0))
    g_d = binary_entropy_inverse(np.clip(d_star, 0.0, 1.0))

    distances = signed_boundary_distance(n_star, d_star)
    single = sizes == 1
    worst = int(np.argmin(distances))
    worst_members = tuple(
        EnsembleMember(float(weights[worst, k]), BlochVector(*bloch[worst, k]))
        for k in range(int(sizes[worst]))
    )
    member_increase = np.where(active, h_z_proj - h_z, -np.inf)
    return OracleReport(
        trials=int(trials),
        max_members=int(max_members),
        seed=int(seed),
        min_signed_distance=float(np.min(distances)),
        max_tight_excess=float(np.max(g_n * g_n + g_d * g_d - 1.0)),
        boundary_violations=int(np.sum(distances < -1e-9)),
        min_single_member_distance=float(np.min(distances[single])) if np.any(single) else float("nan"),
        max_projection_noise_increase=float(np.max(n_proj - n_star)),
        max_member_noise_increase=float(np.max(member_increase)),
        max_projection_disturbance_shift=float(np.max(np.abs(d_proj - d_star))),
        worst_ensemble=worst_members,
    )


@dataclass(frozen=True)
class MaassenUffinkReport:
    """Comparison of the boundary against the flat entropy bound
    H(sigma_y) + H(sigma_z) >= 1 bit.

    min_state_sum sweeps single pure states in the y-z plane (via
    ensemble_point); min_boundary_sum takes N + D along boundary_curve. Both
    minima equal 1 bit, attained at the eigenstate endpoints only;
    min_interior_gap is the smallest interior excess over 1 bit.
    """

    min_state_sum: float
    min_boundary_sum: float
    argmin_theta: float
    min_interior_gap: float
    route_max_diff: float
    samples: int


def maassen_uffink_compare(samples: int) -> MaassenUffinkReport:
    """Sweep y-z-plane pure states at `samples` angles in [0, pi/2] and
    compare the entropy sum H(sigma_z) + H(sigma_y) against the boundary's
    N + D (the sweep covers all such states up to the h(x) = h(-x) symmetry)."""
    if samples < 2:
        raise ValidationError(f"samples must be >= 2, got {samples!r}")
    thetas = np.linspace(0.0, math.pi / 2, int(samples))
    sums = np.empty(thetas.size)
    for i, t in enumerate(thetas):
        state = PureState.from_angles(t, math.pi / 2).direction
        n, d = ensemble_point([EnsembleMember(1.0, state)])
        sums[i] = n + d
    curve = boundary_curve(int(samples))
    boundary_sums = curve.noise + curve.disturbance
    argmin = int(np.argmin(sums))
    return MaassenUffinkReport(
        min_state_sum=float(sums.min()),
        min_boundary_sum=float(boundary_sums.min()),
        argmin_theta=float(thetas[argmin]),
        min_interior_gap=float(sums[1:-1].min() - 1.0) if thetas.size > 2 else float("nan"),
        route_max_diff=float(np.max(np.abs(sums - boundary_sums))),
        samples=int(samples),
    )


def boundary_to_csv(curve: BoundaryCurve) -> str:
    """Serialize a boundary curve with header theta_deg,N,D."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["theta_deg", "N", "D"])
    for t, n, d in zip(curve.theta, curve.noise, curve.disturbance):
        writer.writerow([str(math.degrees(t)), str(float(n)), str(float(d))])
    return buf.getvalue()


def surface_to_csv(result: GridSearchResult) -> str:
    """Serialize a grid-search surface with header vartheta_deg,phi_deg,D
    in row-major lattice order."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["vartheta_deg", "phi_deg", "D"])
    for i, vt in enumerate(result.varthetas):
        for j, p in enumerate(result.phis):
            writer.writerow([str(math.degrees(vt)), str(math.degrees(p)),
                             str(float(result.surface[i, j]))])
    return buf.getvalue()
