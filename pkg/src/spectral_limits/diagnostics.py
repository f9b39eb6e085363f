"""Convergence diagnostics for the compact-resolvent and bounded-commutator
conditions.

The resolvent gap ||I_{j,J} R_lam(D_j) I_{j,J}* - R_lam(D_J)|| is computed
both directly and through the eigenprojection formula (the supremum of
|lam_n - lam|^(-1) over ambient eigenvalue clusters not contained in the
range of P_j); agreement of the two routes is the module's central
cross-check.  Commutator series track ||[D_k, pi_k(phi_{j,k}(a))]|| over
k >= j, which is nondecreasing for valid systems.

Verdicts are explicitly heuristic: a finite truncation can only report
trends, never prove a limit statement, and every verdict carries that
caveat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algebra import AlgebraElement
from .errors import ValidationError
from .inductive import InductiveSystem, Realization
from .linalg import (
    GROUP_TOL,
    dagger,
    function_from_decomposition,
    operator_norm,
    resolvent_from_decomposition,
)
from .triple import commutator_norm

# Containment threshold for ||Q - P_j Q|| in the eigenprojection route.
CONTAIN_TOL = 1e-8
# Verdict heuristics (callers may override): absolute smallness threshold,
# tail window length, and the decay factor a falling tail must achieve.
VERDICT_THRESHOLD = 1e-3
VERDICT_WINDOW = 5
VERDICT_DECAY = 0.9
# Tolerance for monotonicity statements about diagnostic series.
MONOTONE_TOL = 1e-9

CAVEAT = (
    "heuristic verdict from a finite truncation: trends at probed levels "
    "cannot prove or refute a statement about the inductive limit"
)

# Continuous probe functions vanishing at infinity, by CLI-stable name.
FUNCTION_PROBES: dict[str, Callable[[float], float]] = {
    "one_over_one_plus_x2": lambda x: 1.0 / (1.0 + x * x),
    "gaussian": lambda x: math.exp(-x * x),
    "x_over_one_plus_x2": lambda x: x / (1.0 + x * x),
}

# Default non-real resolvent probes.
DEFAULT_LAMBDAS = (1j, 2j, 1 + 1j)


def _check_level(r: Realization, j: int) -> int:
    j = int(j)
    if not (0 <= j <= r.level):
        raise ValidationError(f"level j must lie in [0, {r.level}], got {j}")
    return j


def _check_nonreal(lam: complex) -> complex:
    lam = complex(lam)
    if lam.imag == 0.0:
        raise ValidationError(f"resolvent probe must be non-real, got {lam:g}")
    return lam


def resolvent_gap(r: Realization, j: int, lam: complex) -> float:
    """Direct norm of I_{j,J} R_lam(D_j) I_{j,J}* - R_lam(D_J)."""
    j = _check_level(r, j)
    lam = _check_nonreal(lam)
    iso = r.embedding(j)
    inner = resolvent_from_decomposition(r.level_decomposition(j), lam)
    outer = resolvent_from_decomposition(r.ambient_decomposition(), lam)
    return operator_norm(iso @ inner @ dagger(iso) - outer)


def resolvent_gap_eigen(
    r: Realization,
    j: int,
    lam: complex,
    group_tol: float = GROUP_TOL,
    contain_tol: float = CONTAIN_TOL,
) -> float:
    """Eigenprojection route: sup over non-contained clusters of 1/|lam_n - lam|.

    Ambient eigenvalues are clustered at ``group_tol``; a cluster with
    eigenprojection Q counts unless ||Q - P_j Q|| <= contain_tol.
    """
    j = _check_level(r, j)
    lam = _check_nonreal(lam)
    dec = r.ambient_decomposition(group_tol)
    iso = r.embedding(j)
    worst = 0.0
    for g in range(len(dec.groups)):
        vecs = dec.group_vectors(g)
        # ||Q - P_j Q|| = ||(1 - P_j) U_g||, formed explicitly: the Gram
        # shortcut I - (I_j* U_g)*(I_j* U_g) cancels to half precision.
        residual = vecs - iso @ (dagger(iso) @ vecs)
        defect = operator_norm(residual)
        if defect > contain_tol:
            worst = max(worst, 1.0 / abs(dec.group_value(g) - lam))
    return worst


def function_gap(r: Realization, j: int, f: Callable[[float], float]) -> float:
    """Norm of I_{j,J} f(D_j) I_{j,J}* - f(D_J) for a vanishing-at-infinity f."""
    j = _check_level(r, j)
    iso = r.embedding(j)
    inner = function_from_decomposition(r.level_decomposition(j), f)
    outer = function_from_decomposition(r.ambient_decomposition(), f)
    return operator_norm(iso @ inner @ dagger(iso) - outer)


@dataclass(frozen=True)
class GapSeries:
    """Gap values over levels j, for one resolvent or function probe."""

    kind: str  # "resolvent" | "function"
    ambient_level: int
    entries: tuple[tuple[int, float], ...]
    lam: complex | None = None
    f_name: str | None = None
    analytic_bounds: tuple[float | None, ...] | None = None

    def __post_init__(self):
        for _, v in self.entries:
            if not (np.isfinite(v) and v >= 0.0):
                raise ValidationError("gap values must be finite and nonnegative")
        for j, v in self.entries:
            if j == self.ambient_level and v > 1e-12:
                raise ValidationError("gap at the ambient level must vanish (P_J = 1)")

    @property
    def levels(self) -> tuple[int, ...]:
        return tuple(j for j, _ in self.entries)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.entries)


def _cantor_bound(lengths: Sequence[float], j: int, lam: complex) -> float | None:
    # The closed-form bound <= l_j holds for purely imaginary probes; for
    # probes with a real part it can fail, so the truncated supremum formula
    # is reported instead.
    if lam.real == 0.0:
        return float(lengths[j]) if j < len(lengths) else None
    tail = [1.0 / abs(1.0 / l - lam) for l in lengths[j + 1 :]]
    return max(tail) if tail else None


def _ci_bound(alphas: Sequence[float], j: int, lam: complex) -> float | None:
    tail = [1.0 / abs(a - lam) for a in alphas[j:]]
    return max(tail) if tail else None


def analytic_gap_bound(system: InductiveSystem, j: int, lam: complex) -> float | None:
    """Closed-form gap bound for recognized generated systems, else None."""
    kind = system.provenance.get("kind")
    if kind == "cantor":
        return _cantor_bound(system.provenance["lengths"], j, lam)
    if kind == "christensen-ivan":
        return _ci_bound(system.provenance["alphas"], j, lam)
    return None


def gap_series(
    r: Realization,
    lam: complex | None = None,
    f_name: str | None = None,
    j_range: Sequence[int] | None = None,
) -> GapSeries:
    """Series of gaps over j for one probe (resolvent lam or named function)."""
    if (lam is None) == (f_name is None):
        raise ValidationError("give exactly one of lam / f_name")
    levels = list(range(r.level + 1)) if j_range is None else sorted(set(int(j) for j in j_range))
    for j in levels:
        _check_level(r, j)
    if lam is not None:
        lam = _check_nonreal(lam)
        entries = tuple((j, resolvent_gap(r, j, lam)) for j in levels)
        bounds = tuple(
            analytic_gap_bound(r.system, j, lam) if j < r.level else 0.0 for j in levels
        )
        return GapSeries("resolvent", r.level, entries, lam=lam, analytic_bounds=bounds)
    if f_name not in FUNCTION_PROBES:
        raise ValidationError(
            f"unknown probe function {f_name!r}; known: {sorted(FUNCTION_PROBES)}"
        )
    f = FUNCTION_PROBES[f_name]
    entries = tuple((j, function_gap(r, j, f)) for j in levels)
    return GapSeries("function", r.level, entries, f_name=f_name)


@dataclass(frozen=True)
class CommutatorSeries:
    """||[D_k, pi_k(phi_{j,k}(a))]|| for k = j..k_max, nondecreasing."""

    base_level: int
    element: AlgebraElement
    entries: tuple[tuple[int, float], ...]

    def __post_init__(self):
        values = [v for _, v in self.entries]
        scale = max(1.0, max(values, default=0.0))
        for a, b in zip(values, values[1:]):
            if b < a - MONOTONE_TOL * scale:
                raise ValidationError(
                    "commutator series decreased along k; pullbacks by isometries "
                    "can only contract norms, so the system data is inconsistent"
                )

    @property
    def levels(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.entries)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.entries)

    @property
    def sup(self) -> float:
        return max((v for _, v in self.entries), default=0.0)


def commutator_series(
    system: InductiveSystem, j: int, a: AlgebraElement, k_max: int | None = None
) -> CommutatorSeries:
    """Track the commutator norm of one level-j element up the chain."""
    if k_max is None:
        k_max = system.top_level
    if not (0 <= j <= k_max <= system.top_level):
        raise ValidationError(f"need 0 <= j <= k_max <= {system.top_level}")
    if a.algebra.block_dims != system.triples[j].algebra.block_dims:
        raise ValidationError(f"element does not belong to the level-{j} algebra")
    entries = []
    current = a
    for k in range(j, k_max + 1):
        entries.append((k, commutator_norm(system.triples[k], current)))
        if k < k_max:
            current = system.links[k].phi.apply(current)
    return CommutatorSeries(j, a, tuple(entries))


@dataclass(frozen=True)
class Verdict:
    """Heuristic classification with trend evidence; always carries the caveat."""

    classification: str  # "consistent" | "inconsistent" | "inconclusive"
    evidence: dict
    caveat: str = CAVEAT


def st1_verdict(
    series: GapSeries,
    threshold: float = VERDICT_THRESHOLD,
    window: int = VERDICT_WINDOW,
    decay: float = VERDICT_DECAY,
) -> Verdict:
    """Trend classification of a gap series.

    The tail (last ``window`` entries, excluding the structurally-zero
    ambient level) is called consistent when it is nonincreasing and either
    already below ``threshold`` or still decaying by at least the ``decay``
    factor across the window; a tail bounded away from zero without decrease
    is inconsistent; anything else is inconclusive.
    """
    if not series.entries:
        raise ValidationError("empty gap series")
    interior = [(j, v) for j, v in series.entries if j != series.ambient_level]
    tail = interior[-window:]
    values = [v for _, v in tail]
    evidence = {
        "kind": series.kind,
        "last_value": float(values[-1]) if values else 0.0,
        "max_value": float(max((v for _, v in series.entries), default=0.0)),
        "tail_levels": [int(j) for j, _ in tail],
        "threshold": threshold,
        "window": window,
    }
    if len(values) < 2:
        evidence["reason"] = "fewer than two informative entries"
        return Verdict("inconclusive", evidence)
    scale = max(1.0, max(values))
    nonincreasing = all(b <= a + MONOTONE_TOL * scale for a, b in zip(values, values[1:]))
    nondecreasing = all(b >= a - MONOTONE_TOL * scale for a, b in zip(values, values[1:]))
    tail_ratio = values[-1] / values[0] if values[0] > 0 else 0.0
    evidence["tail_nonincreasing"] = bool(nonincreasing)
    evidence["tail_nondecreasing"] = bool(nondecreasing)
    evidence["tail_ratio"] = float(tail_ratio)
    if nonincreasing and values[-1] <= threshold:
        evidence["reason"] = "tail nonincreasing and below threshold"
        return Verdict("consistent", evidence)
    if nondecreasing and values[-1] > threshold:
        evidence["reason"] = "tail stalled or growing above threshold"
        return Verdict("inconsistent", evidence)
    if nonincreasing and tail_ratio <= decay:
        evidence["reason"] = f"tail decayed by factor {tail_ratio:.3g} <= {decay}"
        return Verdict("consistent", evidence)
    evidence["reason"] = "no clear trend across the window"
    return Verdict("inconclusive", evidence)


def st2_verdict(
    series_set: Sequence[CommutatorSeries],
    bound: float | None = None,
    window: int = VERDICT_WINDOW,
    stall_tol: float = 1e-9,
) -> Verdict:
    """Uniform-boundedness classification for a family of commutator series.

    Consistent when every series stabilizes over its tail (or stays below a
    caller-set bound); a series still strictly growing at the end of the
    probed range (and above the bound, if any) is inconsistent.
    """
    if not series_set:
        raise ValidationError("empty commutator series collection")
    sups = [float(s.sup) for s in series_set]
    evidence = {
        "n_series": len(series_set),
        "per_series_sup": sups,
        "bound": bound,
        "window": window,
    }
    growing = []
    for idx, s in enumerate(series_set):
        values = list(s.values)[-window:]
        scale = max(1.0, max(values, default=0.0))
        stabilized = len(values) >= 2 and (values[-1] - values[0]) <= stall_tol * scale
        below_bound = bound is not None and s.sup <= bound
        if len(values) < 2 and bound is None:
            evidence["reason"] = f"series {idx} has fewer than two entries"
            return Verdict("inconclusive", evidence)
        if not (stabilized or below_bound):
            growing.append(idx)
    if not growing:
        evidence["reason"] = "every series stabilized or stayed below the bound"
        return Verdict("consistent", evidence)
    evidence["growing_series"] = growing
    evidence["reason"] = "series still growing at the end of the probed range"
    return Verdict("inconsistent", evidence)


def default_st2_probe(
    system: InductiveSystem, levels: Sequence[int] | None = None, k_max: int | None = None
) -> list[CommutatorSeries]:
    """One commutator series per basis generator of each probed level.

    By default levels below ``k_max`` are probed, so every series has at
    least two entries and carries trend information.
    """
    if k_max is None:
        k_max = system.top_level
    if levels is None:
        levels = range(k_max) if k_max > 0 else [0]
    out = []
    for j in levels:
        algebra = system.triples[j].algebra
        for i in range(algebra.element_dim):
            out.append(commutator_series(system, j, algebra.basis_element(i), k_max))
    return out
