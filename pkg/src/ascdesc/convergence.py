"""Operator sequences, subspace-gap trajectories, and convergence probes.

A sequence T_n -> T is realized from a base operator and a decaying
perturbation rule.  For each sample the lab records the four one-sided
gaps between kernels and ranges of T_n and T together with the reduced
minimum modulus, then classifies upper/lower convergence empirically: a
tail of one-sided gaps below the convergence tolerance stands in for
the adherent-point definition (licensed by the fact that one-sided gap
decay follows from either convergence mode).

Probes evaluate the sequence statements about ascent/descent spectra.
Dense finite-dimensional spectra are empty, so on dense instances the
probes check the operative chain conditions from the proofs instead:
the intersection condition R(A^d) ∩ N(A) != 0 and the deficiency
condition R(A) + N(A^d) != X, evaluated along the sequence and at the
limit, plus the kernel/range convergence conclusions the proofs route
through.  On tower sequences the spectra statements are tested
literally over the window classification.  Every verdict records which
hypotheses were evaluated and what the tail looked like.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import Matrix, matrix_from_obj
from .gq import GQ, GaussianRational, format_scalar
from .numeric import (
    DEFAULT_TOL,
    FloatSubspace,
    Tolerance,
    delta,
    dist_to_subspace,
    float_image,
    float_kernel,
    float_rank,
    gamma,
    matrix_to_array,
    operator_norm,
)
from .theorems import TheoremVerdict
from .tower import DEFAULT_CONFIG, OperatorSpec, TowerConfig, spec_from_obj, tower_verdict

PROBE_IDS = (
    "lem1",
    "lem2",
    "lem3",
    "lem4",
    "T1",
    "ker_upper",
    "ker_lower",
    "rng_upper",
    "rng_lower",
)


@dataclass(frozen=True)
class Perturbation:
    """Decaying perturbation rule: T_n = T + n^(-exponent) * E.

    The direction E is an explicit matrix (exact or float), an operator
    spec for tower sequences, or a seeded random matrix with entries in
    [-1, 1] drawn once.
    """

    exponent: float
    direction: Matrix | OperatorSpec | np.ndarray | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.exponent <= 0:
            raise ValueError("exponent must be positive")
        if (self.direction is None) == (self.seed is None):
            raise ValueError("exactly one of direction or seed is required")

    def direction_array(self, dim: int) -> np.ndarray:
        if self.direction is not None:
            if isinstance(self.direction, Matrix):
                return matrix_to_array(self.direction)
            if isinstance(self.direction, np.ndarray):
                return self.direction
            raise ValueError("operator-spec perturbations need the tower path")
        rng = random.Random(f"perturbation:{self.seed}")
        return np.array(
            [[rng.uniform(-1.0, 1.0) for _ in range(dim)] for _ in range(dim)]
        )

    def to_obj(self) -> dict:
        obj: dict = {"exponent": self.exponent}
        if self.seed is not None:
            obj["rule"] = "seeded-random-decaying"
            obj["seed"] = self.seed
        else:
            obj["rule"] = "scaled"
            if isinstance(self.direction, Matrix):
                from .exact import matrix_to_obj

                obj["matrix"] = matrix_to_obj(self.direction)
            elif isinstance(self.direction, np.ndarray):
                from .numeric import array_to_obj

                obj["matrix"] = array_to_obj(self.direction)
            else:
                obj["operator"] = self.direction.to_obj()
        return obj


@dataclass(frozen=True)
class SequenceSpec:
    """Base operator plus perturbation rule plus sampled index range."""

    base: Matrix | OperatorSpec | np.ndarray
    perturbation: Perturbation
    n_range: tuple[int, int, int]

    def __post_init__(self):
        start, end, stride = self.n_range
        if start < 1 or end < start or stride < 1:
            raise ValueError("n_range must satisfy 1 <= start <= end, stride >= 1")

    def samples(self) -> list[int]:
        start, end, stride = self.n_range
        return list(range(start, end + 1, stride))

    @property
    def is_tower(self) -> bool:
        return isinstance(self.base, OperatorSpec)

    def to_obj(self) -> dict:
        from .exact import matrix_to_obj

        if isinstance(self.base, Matrix):
            base = matrix_to_obj(self.base)
        elif isinstance(self.base, np.ndarray):
            from .numeric import array_to_obj

            base = array_to_obj(self.base)
        else:
            base = self.base.to_obj()
        return {
            "base": base,
            "perturbation": self.perturbation.to_obj(),
            "n_range": list(self.n_range),
        }


def sequence_from_obj(obj: dict) -> SequenceSpec:
    try:
        base_obj = obj["base"]
        pert = obj["perturbation"]
        n_range = tuple(int(v) for v in obj["n_range"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed sequence spec: {exc}") from exc
    base: Matrix | OperatorSpec | np.ndarray
    if "variant" in base_obj:
        base = spec_from_obj(base_obj)
    else:
        base = _matrix_any_field(base_obj)
    exponent = float(pert.get("exponent", 1.0))
    rule = pert.get("rule", "scaled")
    if rule == "seeded-random-decaying":
        perturbation = Perturbation(exponent=exponent, seed=int(pert["seed"]))
    elif rule == "scaled":
        direction: Matrix | OperatorSpec | np.ndarray
        if "matrix" in pert:
            direction = _matrix_any_field(pert["matrix"])
        elif "operator" in pert:
            direction = spec_from_obj(pert["operator"])
        else:
            raise ValueError("scaled perturbation needs a matrix or operator")
        perturbation = Perturbation(exponent=exponent, direction=direction)
    else:
        raise ValueError(f"unknown perturbation rule {rule!r}")
    if len(n_range) != 3:
        raise ValueError("n_range must be [start, end, stride]")
    return SequenceSpec(base, perturbation, n_range)  # type: ignore[arg-type]


def _matrix_any_field(obj: dict):
    from .numeric import array_from_obj

    if obj.get("field", "gq") == "f64":
        return array_from_obj(obj)
    return matrix_from_obj(obj)


@dataclass(frozen=True)
class TrajectorySample:
    n: int
    dku: float  # gap from N(T_n) into N(T): upper-convergence side
    dkl: float  # gap from N(T) into N(T_n): lower-convergence side
    dru: float
    drl: float
    gamma: float


@dataclass(frozen=True)
class GapTrajectory:
    samples: tuple[TrajectorySample, ...]
    base_rank: int
    ranks: tuple[int, ...]

    @property
    def rank_jumps(self) -> tuple[int, ...]:
        """Samples where the numerical rank differs from the limit rank.

        These are exactly the places lower-convergence of kernels can
        break."""
        return tuple(
            s.n for s, r in zip(self.samples, self.ranks) if r != self.base_rank
        )

    def column(self, name: str) -> list[float]:
        return [getattr(s, name) for s in self.samples]

    def tail(self, name: str, window: int) -> list[float]:
        return self.column(name)[-window:]

    def to_obj(self) -> dict:
        return {
            "samples": [
                {
                    "n": s.n,
                    "dku": s.dku,
                    "dkl": s.dkl,
                    "dru": s.dru,
                    "drl": s.drl,
                    "gamma": s.gamma,
                }
                for s in self.samples
            ],
            "base_rank": self.base_rank,
            "ranks": list(self.ranks),
            "rank_jumps": list(self.rank_jumps),
        }

    def to_csv(self) -> str:
        lines = ["n,dku,dkl,dru,drl,gamma"]
        for s in self.samples:
            cells = [str(s.n)] + [
                _csv_float(v) for v in (s.dku, s.dkl, s.dru, s.drl, s.gamma)
            ]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def _csv_float(v: float) -> str:
    if math.isinf(v):
        return "inf"
    return f"{v:.12g}"


def _sample_matrices(spec: SequenceSpec, shift: complex = 0.0) -> tuple[np.ndarray, list[tuple[int, np.ndarray]]]:
    """Float realizations of the limit and the samples, optionally shifted."""
    if spec.is_tower:
        raise ValueError("dense path requires a matrix base")
    base = (
        matrix_to_array(spec.base)
        if isinstance(spec.base, Matrix)
        else np.asarray(spec.base)
    )
    dim = base.shape[0]
    direction = spec.perturbation.direction_array(dim)
    if direction.shape != base.shape:
        raise ValueError("perturbation shape must match the base")
    eye = np.eye(dim)
    limit = base - shift * eye
    out = []
    for n in spec.samples():
        t_n = base + float(n) ** (-spec.perturbation.exponent) * direction
        out.append((n, t_n - shift * eye))
    return limit, out


def trajectory(spec: SequenceSpec, tol: Tolerance = DEFAULT_TOL) -> GapTrajectory:
    """Gap and reduced-minimum-modulus trajectory of the sequence.

    Tower-based sequences are realized at the default window's largest
    truncation; the exact window semantics live in the probes.
    """
    if spec.is_tower:
        limit_m, samples_m = _tower_sample_matrices(spec, GQ(0), DEFAULT_CONFIG)
        limit = matrix_to_array(limit_m)
        realized = [(n, matrix_to_array(m)) for n, m in samples_m]
    else:
        limit, realized = _sample_matrices(spec)
    return _trajectory_from(limit, realized, tol)


def _trajectory_from(
    limit: np.ndarray, realized: list[tuple[int, np.ndarray]], tol: Tolerance
) -> GapTrajectory:
    k_lim = float_kernel(limit, tol)
    r_lim = float_image(limit, tol)
    base_rank = float_rank(limit, tol)
    samples = []
    ranks = []
    previous_norm = None
    for n, t_n in realized:
        drift = operator_norm(t_n - limit)
        if previous_norm is not None and drift > previous_norm + 1e-12:
            raise ValueError("perturbation norms must not increase along samples")
        previous_norm = drift
        k_n = float_kernel(t_n, tol)
        r_n = float_image(t_n, tol)
        samples.append(
            TrajectorySample(
                n=n,
                dku=delta(k_n, k_lim),
                dkl=delta(k_lim, k_n),
                dru=delta(r_n, r_lim),
                drl=delta(r_lim, r_n),
                gamma=gamma(t_n, tol),
            )
        )
        ranks.append(float_rank(t_n, tol))
    return GapTrajectory(tuple(samples), base_rank, tuple(ranks))


_COLUMNS = {
    ("upper", "kernel"): "dku",
    ("lower", "kernel"): "dkl",
    ("upper", "range"): "dru",
    ("lower", "range"): "drl",
}


def classify_convergence(
    traj: GapTrajectory, side: str, obj: str, tol: Tolerance = DEFAULT_TOL
) -> str:
    """converged / not-converged / inconclusive from the tail of one gap.

    Converged means the whole tail window sits below conv_tol;
    not-converged means it sits at or above 10 * conv_tol throughout.
    """
    key = (side, obj)
    if key not in _COLUMNS:
        raise ValueError("side must be upper/lower and object kernel/range")
    if len(traj.samples) < tol.tail_window:
        raise ValueError(
            f"trajectory needs at least {tol.tail_window} samples for a tail"
        )
    tail = traj.tail(_COLUMNS[key], tol.tail_window)
    if all(v < tol.conv_tol for v in tail):
        return "converged"
    if all(v >= 10 * tol.conv_tol for v in tail):
        return "not-converged"
    return "inconclusive"


def limsup_gamma(traj: GapTrajectory, tol: Tolerance = DEFAULT_TOL) -> float:
    """Empirical limsup surrogate: max of gamma over the tail window."""
    tail = traj.tail("gamma", tol.tail_window)
    return max(tail) if tail else math.inf


# ---------------------------------------------------------------------------
# chain-level conditions used by the probes


def _subspace_sum_dim(a: FloatSubspace, b: FloatSubspace, tol: Tolerance) -> int:
    if a.dim == 0:
        return b.dim
    if b.dim == 0:
        return a.dim
    stacked = np.hstack([a.ortho_basis, b.ortho_basis])
    return float_rank(stacked, tol)


def intersection_nontrivial(a: np.ndarray, tol: Tolerance) -> bool:
    """R(A^d) ∩ N(A) != {0} with d the ambient dimension."""
    d = a.shape[0]
    power = np.linalg.matrix_power(a, d)
    r_d = float_image(power, tol)
    n_1 = float_kernel(a, tol)
    meet_dim = r_d.dim + n_1.dim - _subspace_sum_dim(r_d, n_1, tol)
    return meet_dim > 0


def sum_deficient(a: np.ndarray, tol: Tolerance) -> bool:
    """R(A) + N(A^d) != X with d the ambient dimension."""
    d = a.shape[0]
    power = np.linalg.matrix_power(a, d)
    r_1 = float_image(a, tol)
    n_d = float_kernel(power, tol)
    return _subspace_sum_dim(r_1, n_d, tol) < d


# ---------------------------------------------------------------------------
# probes


_SUB_PROBES = ("ker_upper", "ker_lower", "rng_upper", "rng_lower")

# which convergence conclusions each proposition's proof routes through
_PROOF_SUBS = {
    "lem2": ("ker_lower", "rng_lower"),
    "lem1": ("ker_upper", "rng_upper"),
    "lem4": ("ker_lower", "rng_lower"),
    "lem3": ("ker_upper", "rng_upper"),
    "T1": _SUB_PROBES,
}

# hypothesis set each statement carries
_STATED_HYPS = {
    "lem2": ("closed_range", "dist_reached"),
    "lem1": ("gamma",),
    "lem4": ("gamma",),
    "lem3": ("closed_range", "dist_reached"),
    "T1": ("closed_range", "dist_reached"),
    "ker_upper": (),
    "ker_lower": ("closed_range", "dist_reached"),
    "rng_upper": ("gamma",),
    "rng_lower": (),
}

_SUB_SIDE_OBJECT = {
    "ker_upper": ("upper", "kernel"),
    "ker_lower": ("lower", "kernel"),
    "rng_upper": ("upper", "range"),
    "rng_lower": ("lower", "range"),
}


def _gamma_hypothesis(value: float, tol: Tolerance) -> str:
    if value > 10 * tol.conv_tol:
        return "met"
    if value < tol.conv_tol:
        return "unmet"
    return "ambiguous"


def _check_dist_reached(limit: np.ndarray, realized, tol: Tolerance) -> bool:
    """Distance from kernel vectors of the limit is attained at each sample.

    Orthogonal projection attains the infimum on every closed subspace
    of a finite-dimensional space; the check recomputes the projection
    residual against the reported distance to confirm attainment.
    """
    k_lim = float_kernel(limit, tol)
    if k_lim.dim == 0:
        return True
    for _, t_n in realized[-tol.tail_window :]:
        k_n = float_kernel(t_n, tol)
        for idx in range(k_lim.dim):
            x = k_lim.ortho_basis[:, idx]
            dist = dist_to_subspace(x, k_n)
            if k_n.dim:
                q = k_n.ortho_basis
                attained = float(np.linalg.norm(x - q @ (q.conj().T @ x)))
            else:
                attained = float(np.linalg.norm(x))
            if abs(attained - dist) > 1e-12:
                return False
    return True


def probe(
    spec: SequenceSpec,
    proposition: str,
    lam,
    tol: Tolerance = DEFAULT_TOL,
    cfg: TowerConfig = DEFAULT_CONFIG,
) -> TheoremVerdict:
    """Check one convergence statement on one sequence at one point.

    Dense instances are checked at the level of the proof machinery
    (chain conditions plus the kernel/range convergence conclusions);
    tower instances are checked literally against window divergence.
    A conclusion that fails while its evaluated hypotheses hold yields
    fail with the counterexample trajectory in the witness.
    """
    if proposition not in PROBE_IDS:
        raise ValueError(f"unknown proposition id {proposition!r}")
    if spec.is_tower:
        return _probe_tower(spec, proposition, lam, cfg)
    return _probe_dense(spec, proposition, lam, tol)


def _probe_dense(spec, proposition, lam, tol: Tolerance) -> TheoremVerdict:
    lam_gq = lam if isinstance(lam, GaussianRational) else None
    shift = lam_gq.to_complex() if lam_gq is not None else complex(lam)
    limit, realized = _sample_matrices(spec, shift)
    # the hypotheses are stated for the unshifted sequence; the proofs
    # apply the lemmas to the shifted one, so both views are recorded
    limit0, unshifted = _sample_matrices(spec)
    traj = _trajectory_from(limit, realized, tol)
    if len(traj.samples) < tol.tail_window:
        raise ValueError("sequence too short for the configured tail window")

    gamma_stated = max(
        gamma(t_n, tol) for _, t_n in unshifted[-tol.tail_window :]
    )
    gamma_shifted = limsup_gamma(traj, tol)
    hyp_flags = {
        "closed_range": "met",  # every subspace of a finite-dimensional space is closed
        "dist_reached": "met" if _check_dist_reached(limit0, unshifted, tol) else "unmet",
        "gamma": _gamma_hypothesis(gamma_stated, tol),
    }

    sub_results = {}
    for sub in _SUB_PROBES:
        side, obj = _SUB_SIDE_OBJECT[sub]
        sub_hyps_met = all(hyp_flags[h] == "met" for h in _STATED_HYPS[sub])
        classification = classify_convergence(traj, side, obj, tol)
        sub_results[sub] = {
            "hypotheses_met": sub_hyps_met,
            "classification": classification,
            "tail": traj.tail(_COLUMNS[(side, obj)], tol.tail_window),
        }

    asc_limit = intersection_nontrivial(limit, tol)
    asc_tail = [intersection_nontrivial(t_n, tol) for _, t_n in realized[-tol.tail_window :]]
    dsc_limit = sum_deficient(limit, tol)
    dsc_tail = [sum_deficient(t_n, tol) for _, t_n in realized[-tol.tail_window :]]

    witness: dict = {
        "mode": "dense-machinery",
        "lambda": format_scalar(lam_gq) if lam_gq is not None else repr(shift),
        "hypotheses": hyp_flags,
        "limsup_gamma": gamma_stated,
        "limsup_gamma_shifted": gamma_shifted,
        "sub_lemmas": sub_results,
        "intersection_condition": {"limit": asc_limit, "tail": asc_tail},
        "deficiency_condition": {"limit": dsc_limit, "tail": dsc_tail},
        "rank_jumps": list(traj.rank_jumps),
    }
    instance = {
        "proposition": proposition,
        "sequence": spec.to_obj(),
        "lambda": witness["lambda"],
    }

    if proposition in _SUB_PROBES:
        entry = sub_results[proposition]
        if not entry["hypotheses_met"]:
            return _probe_verdict(proposition, instance, witness, "inconclusive",
                                  note="hypothesis not met")
        if entry["classification"] == "converged":
            return _probe_verdict(proposition, instance, witness, "pass")
        if entry["classification"] == "not-converged":
            return _probe_verdict(
                proposition, instance, witness, "fail",
                note=f"{proposition}: conclusion fails with hypotheses met",
            )
        return _probe_verdict(proposition, instance, witness, "inconclusive",
                              note="tail in the gray zone")

    stated = _STATED_HYPS[proposition]
    if any(hyp_flags[h] != "met" for h in stated):
        return _probe_verdict(proposition, instance, witness, "inconclusive",
                              note="stated hypotheses not met")

    failures = []
    pending = False
    for sub in _PROOF_SUBS[proposition]:
        entry = sub_results[sub]
        if not entry["hypotheses_met"]:
            continue
        if entry["classification"] == "not-converged":
            failures.append(f"{sub} conclusion fails on the tail")
        elif entry["classification"] == "inconclusive":
            pending = True

    if proposition in ("lem2", "T1"):
        if asc_limit and not all(asc_tail):
            failures.append("limit intersection condition not inherited by the tail")
    if proposition in ("lem1", "T1"):
        if all(asc_tail) and not asc_limit:
            failures.append("tail intersection condition not inherited by the limit")
    if proposition in ("lem4", "T1"):
        if dsc_limit and not all(dsc_tail):
            failures.append("limit deficiency condition not inherited by the tail")
    if proposition in ("lem3", "T1"):
        if all(dsc_tail) and not dsc_limit:
            failures.append("tail deficiency condition not inherited by the limit")

    witness["machinery_failures"] = failures
    if failures:
        return _probe_verdict(proposition, instance, witness, "fail",
                              note="; ".join(failures))
    if pending:
        return _probe_verdict(proposition, instance, witness, "inconclusive",
                              note="sub-lemma tail in the gray zone")
    return _probe_verdict(proposition, instance, witness, "pass")


def _probe_verdict(proposition, instance, witness, verdict, note="") -> TheoremVerdict:
    return TheoremVerdict(
        theorem=f"probe:{proposition}",
        verdict=verdict,
        witness=witness,
        instance=instance,
        note=note,
    )


def _tower_sample_matrices(spec: SequenceSpec, lam: GaussianRational, cfg: TowerConfig):
    """Exact realizations at the largest window truncation, shifted."""
    n_ref = cfg.window()[-1]
    base = spec.base.realize(n_ref).shifted(lam)
    out = []
    for n in spec.samples():
        pert = _tower_perturbed(spec, n)
        out.append((n, pert.realize(n_ref).shifted(lam)))
    return base, out


def _tower_perturbed(spec: SequenceSpec, n: int) -> OperatorSpec:
    from .tower import SumSpec

    pert = spec.perturbation
    if not isinstance(pert.direction, OperatorSpec):
        raise ValueError("tower sequences need an operator-spec perturbation")
    exponent = pert.exponent
    if exponent != int(exponent):
        raise ValueError("tower sequences need an integer exponent to stay exact")
    factor = GQ(Fraction(1, n ** int(exponent)))
    return SumSpec((spec.base, pert.direction.scaled(factor)))


def _probe_tower(spec, proposition, lam, cfg: TowerConfig) -> TheoremVerdict:
    if not isinstance(lam, GaussianRational):
        raise ValueError("tower probes need an exact Gaussian-rational point")
    if proposition in _SUB_PROBES:
        raise ValueError("sub-lemma probes apply to dense sequences only")
    quantities = ("asc", "dsc") if proposition == "T1" else (
        ("asc",) if proposition in ("lem1", "lem2") else ("dsc",)
    )
    samples = spec.samples()
    results: dict = {}
    failures = []
    inconclusive = False
    for quantity in quantities:
        limit_kind = tower_verdict(spec.base, lam, quantity, cfg).kind
        tail_kinds = []
        for n in samples:
            pert_spec = _tower_perturbed(spec, n)
            tail_kinds.append(tower_verdict(pert_spec, lam, quantity, cfg).kind)
        results[quantity] = {"limit": limit_kind, "tail": tail_kinds}
        if limit_kind == "inconclusive" or "inconclusive" in tail_kinds:
            inconclusive = True
            continue
        limit_in = limit_kind == "divergent"
        tail_in = [k == "divergent" for k in tail_kinds]
        if proposition in ("lem2", "lem4") or proposition == "T1":
            if limit_in and not all(tail_in):
                failures.append(f"{quantity}: divergence not preserved along the tail")
        if proposition in ("lem1", "lem3") or proposition == "T1":
            if all(tail_in) and not limit_in:
                failures.append(f"{quantity}: tail divergence not inherited by the limit")
    witness = {
        "mode": "tower-literal",
        "lambda": format_scalar(lam),
        "window": list(cfg.window()),
        "classifications": results,
        "failures": failures,
    }
    instance = {
        "proposition": proposition,
        "sequence": spec.to_obj(),
        "lambda": format_scalar(lam),
    }
    if failures:
        return _probe_verdict(proposition, instance, witness, "fail",
                              note="; ".join(failures))
    if inconclusive:
        return _probe_verdict(proposition, instance, witness, "inconclusive",
                              note="window classification inconclusive")
    return _probe_verdict(proposition, instance, witness, "pass")
