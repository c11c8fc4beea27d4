"""Counting-statistics simulation of the two-measurement experiment and the
intensity-ratio estimators that recover noise and disturbance from counts.

A run sends the two eigenstates of one observable (family "A": eigenstates
of A feeding the noise estimate; family "B": eigenstates of B feeding the
disturbance estimate) into the measurement apparatus followed by a sharp B
measurement, producing eight intensities I[input, mu, beta'] per family.

Reproducibility contract: sampled modes draw from a numpy PCG64 generator
seeded with SeedSequence([seed, family code, input index, axis bit patterns,
correction target bit patterns]). Every (seed, configuration) pair therefore
has its own independent stream, identical across runs, platforms, and any
order of evaluation.
"""

from __future__ import annotations

import csv
import io
import json
import math
import struct
from dataclasses import dataclass, replace

import numpy as np

from .bloch import (
    OUTCOMES,
    SIGMA_Y,
    SIGMA_Z,
    CorrectionMap,
    Observable,
    ProjectiveInstrument,
)
from .entropy import JointTable, NDPoint, conditional_entropy, sequential_joint
from .errors import EstimationError, ValidationError

FAMILIES = ("A", "B")
MODES = ("exact", "multinomial", "poisson")

_FAMILY_CODE = {"A": 0, "B": 1}

CSV_HEADER = "family,input,mu,beta_prime,count"


def _float_bits(*values) -> list[int]:
    """IEEE-754 bit patterns as non-negative ints, for seed-sequence keys."""
    return [struct.unpack("<Q", struct.pack("<d", float(v)))[0] for v in values]


def _stream(seed: int, family: str, input_index: int, measurement: Observable,
            post_map: CorrectionMap) -> np.random.Generator:
    """Independent reproducible substream for one (input state, apparatus)."""
    key = [int(seed), _FAMILY_CODE[family], int(input_index)]
    key += _float_bits(*measurement.axis.as_tuple())
    key += _float_bits(*post_map.target_plus.direction.as_tuple())
    key += _float_bits(*post_map.target_minus.direction.as_tuple())
    return np.random.default_rng(np.random.SeedSequence(key))


def polar_angle(obs: Observable) -> float:
    """Polar angle of an observable's axis from +z, in radians [0, pi]."""
    a = obs.axis
    return math.atan2(math.hypot(a.x, a.y), a.z)


@dataclass(frozen=True, eq=False)
class IntensityTable:
    """Eight intensities for one input family.

    counts[i, j, k] is the intensity for input OUTCOMES[i], apparatus outcome
    mu = OUTCOMES[j], final outcome beta' = OUTCOMES[k]. Stored as float64:
    exact mode holds real-valued expected counts, sampled modes hold integer
    values. In exact and multinomial modes the counts for one input sum to at
    most `shots` (with equality when efficiency = 1); poisson cell draws are
    unbounded, so that invariant intentionally does not apply there.
    """

    family: str
    counts: np.ndarray
    theta: float
    shots: int
    seed: int
    mode: str
    correction: str = "identity"
    efficiency: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        arr = np.asarray(self.counts, dtype=float)
        if arr.shape != (2, 2, 2):
            raise ValidationError(f"counts must have shape (2, 2, 2), got {arr.shape}")
        if np.any(arr < 0.0):
            raise ValidationError("counts must be non-negative")
        object.__setattr__(self, "counts", arr)

    @property
    def theta_deg(self) -> float:
        return math.degrees(self.theta)

    def rows(self):
        """(input, mu, beta_prime, count) in fixed (+1, -1) storage order."""
        for i, inp in enumerate(OUTCOMES):
            for j, mu in enumerate(OUTCOMES):
                for k, bp in enumerate(OUTCOMES):
                    yield (inp, mu, bp, self.counts[i, j, k])

    def _format_count(self, value: float):
        return value if self.mode == "exact" else int(value)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for inp, mu, bp, count in self.rows():
            writer.writerow([self.family, inp, mu, bp, self._format_count(count)])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "family": self.family,
            "theta_deg": self.theta_deg,
            "shots": self.shots,
            "seed": self.seed,
            "mode": self.mode,
            "correction": self.correction,
            "efficiency": self.efficiency,
            "counts": [
                {"input": inp, "mu": mu, "beta_prime": bp,
                 "count": self._format_count(count)}
                for inp, mu, bp, count in self.rows()
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "IntensityTable":
        data = json.loads(text)
        counts = np.zeros((2, 2, 2))
        index = {1: 0, -1: 1}
        for row in data["counts"]:
            counts[index[row["input"]], index[row["mu"]], index[row["beta_prime"]]] = row["count"]
        return cls(
            family=data["family"],
            counts=counts,
            theta=math.radians(data["theta_deg"]),
            shots=data["shots"],
            seed=data["seed"],
            mode=data["mode"],
            correction=data.get("correction", "identity"),
            efficiency=data.get("efficiency", 1.0),
        )


def simulate_intensities(
    measurement: Observable,
    correction: CorrectionMap | None,
    family: str,
    shots: int,
    seed: int = 0,
    mode: str = "exact",
    a: Observable = SIGMA_Z,
    b: Observable = SIGMA_Y,
    efficiency: float = 1.0,
    correction_label: str = None,
) -> IntensityTable:
    """Simulate the eight intensities of one input family.

    Each of the two input eigenstates is sent with the same number of shots.
    mode "exact" emits the expected counts shots * efficiency * p as reals;
    "multinomial" draws the 4 outcome cells per input from a multinomial with
    `shots` trials (then thins each cell binomially if efficiency < 1);
    "poisson" draws every cell independently with mean shots * efficiency * p.
    """
    if not isinstance(shots, (int, np.integer)) or shots < 1:
        raise ValidationError(f"shots must be a positive integer, got {shots!r}")
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}, got {mode!r}")
    if family not in FAMILIES:
        raise ValidationError(f"family must be one of {FAMILIES}, got {family!r}")
    if not 0.0 < efficiency <= 1.0:
        raise ValidationError(f"efficiency must lie in (0, 1], got {efficiency!r}")
    if seed < 0:
        raise ValidationError(f"seed must be non-negative, got {seed!r}")

    inst = ProjectiveInstrument(measurement, correction)
    input_obs = a if family == "A" else b
    if correction_label is None:
        correction_label = "identity" if correction is None else "custom"

    counts = np.empty((2, 2, 2))
    for i, outcome in enumerate(OUTCOMES):
        joint = sequential_joint(input_obs.eigenstate(outcome), inst, b)
        if mode == "exact":
            counts[i] = shots * efficiency * joint
            continue
        rng = _stream(seed, family, i, measurement, inst.post_map)
        if mode == "multinomial":
            cells = rng.multinomial(shots, joint.ravel()).reshape(2, 2)
            if efficiency < 1.0:
                cells = rng.binomial(cells, efficiency)
        else:  # poisson
            cells = rng.poisson(shots * efficiency * joint)
        counts[i] = cells

    return IntensityTable(
        family=family,
        counts=counts,
        theta=polar_angle(measurement),
        shots=int(shots),
        seed=int(seed),
        mode=mode,
        correction=correction_label,
        efficiency=float(efficiency),
    )


@dataclass(frozen=True, eq=False)
class EstimatedProbabilities:
    """Probabilities recovered from one intensity table.

    Arrays are indexed in the (+1, -1) storage order. "out" is the apparatus
    outcome mu for family A and the final outcome beta' for family B.
    p_out and p_in_given_out are filled by bayes_invert; outcomes whose
    marginal is exactly zero are listed in `dropped` and their posterior rows
    zeroed, mirroring the conditional-entropy skip rule.
    """

    family: str
    p_input: np.ndarray
    p_out_given_in: np.ndarray
    p_out: np.ndarray = None
    p_in_given_out: np.ndarray = None
    dropped: tuple = ()


def estimate_probabilities(table: IntensityTable) -> EstimatedProbabilities:
    """Marginalization-ratio estimators for the input distribution and the
    forward conditionals.

    Family A: p(alpha) and p(mu|alpha), summing intensities over beta'.
    Family B: p(beta) and p(beta'|beta), summing intensities over mu.
    """
    per_input = table.counts.sum(axis=(1, 2))
    total = per_input.sum()
    if total <= 0.0:
        raise EstimationError("no counts in table")
    if np.any(per_input == 0.0):
        raise EstimationError(
            f"input row with zero counts in family {table.family}; conditionals undefined"
        )
    p_input = per_input / total
    sum_axis = 2 if table.family == "A" else 1
    out_counts = table.counts.sum(axis=sum_axis)
    p_out_given_in = out_counts / per_input[:, None]
    return EstimatedProbabilities(
        family=table.family, p_input=p_input, p_out_given_in=p_out_given_in
    )


def bayes_invert(est: EstimatedProbabilities) -> EstimatedProbabilities:
    """Fill the posterior p(in|out) = p(in) p(out|in) / p(out), with
    p(out) = sum_in p(in) p(out|in).

    Outcomes with p(out) = 0 are dropped (flagged, posterior row zeroed)
    rather than raised, consistent with the entropy convention.
    """
    p_out = est.p_input @ est.p_out_given_in
    keep = p_out > 0.0
    p_in_given_out = np.zeros((len(p_out), len(est.p_input)))
    for j in np.flatnonzero(keep):
        p_in_given_out[j] = est.p_input * est.p_out_given_in[:, j] / p_out[j]
    dropped = tuple(OUTCOMES[j] for j in np.flatnonzero(~keep))
    return replace(est, p_out=p_out, p_in_given_out=p_in_given_out, dropped=dropped)


def _conditional_entropy_from_estimate(est: EstimatedProbabilities) -> float:
    if est.p_out is None:
        est = bayes_invert(est)
    # joint[in, out] = p(in|out) p(out); dropped outcomes contribute zero mass
    joint = est.p_in_given_out.T * est.p_out[None, :]
    table = JointTable(OUTCOMES, OUTCOMES, joint)
    return conditional_entropy(table, given="y")


def nd_from_counts(table_a: IntensityTable, table_b: IntensityTable) -> NDPoint:
    """Noise H(A|M) and disturbance H(B|B') from one pair of intensity
    tables, via the ratio estimators and Bayes inversion."""
    if table_a.family != "A" or table_b.family != "B":
        raise ValidationError(
            f"expected families ('A', 'B'), got ({table_a.family!r}, {table_b.family!r})"
        )
    n = _conditional_entropy_from_estimate(estimate_probabilities(table_a))
    d = _conditional_entropy_from_estimate(estimate_probabilities(table_b))
    return NDPoint(
        noise=n,
        disturbance=d,
        theta=table_b.theta,
        corrected=table_b.correction != "identity",
    )
