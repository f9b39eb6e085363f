"""Inductive systems of spectral triples and their truncated realizations.

Only adjacent links are stored; every composed morphism is derived by
chaining, which makes the cocycle identities structural instead of
something to verify.  The infinite inductive limit is represented solely by
its level-J truncations: the ambient triple of a realization is the top
triple of the chain, carrying the composed embeddings I_{j,J} and the
orthogonal projections P_j = I_{j,J} I_{j,J}*.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np

from .algebra import ResidualReport
from .errors import ValidationError
from .linalg import (
    GROUP_TOL,
    SpectralDecomposition,
    commutator,
    dagger,
    eigh,
    operator_norm,
)
from .triple import (
    FiniteSpectralTriple,
    TripleMorphism,
    compose_morphisms,
    identity_morphism,
    validate_morphism,
    validate_triple,
)

VALIDATION_TOL = 1e-10


@dataclass(frozen=True)
class InductiveSystem:
    """Finite chain T_0 -> T_1 -> ... -> T_J with adjacent morphisms."""

    triples: tuple[FiniteSpectralTriple, ...]
    links: tuple[TripleMorphism, ...]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.triples) < 1:
            raise ValidationError("inductive system needs at least one triple")
        if len(self.links) != len(self.triples) - 1:
            raise ValidationError(
                f"expected {len(self.triples) - 1} links for {len(self.triples)} triples, "
                f"got {len(self.links)}"
            )
        for j, link in enumerate(self.links):
            if link.source is not self.triples[j] or link.target is not self.triples[j + 1]:
                if (
                    link.source.hilbert_dim != self.triples[j].hilbert_dim
                    or link.target.hilbert_dim != self.triples[j + 1].hilbert_dim
                ):
                    raise ValidationError(f"link {j} does not connect triples {j} -> {j + 1}")

    @property
    def top_level(self) -> int:
        return len(self.triples) - 1

    def level(self, j: int) -> FiniteSpectralTriple:
        return self.triples[j]


def embed(system: InductiveSystem, j: int, k: int) -> TripleMorphism:
    """Composed morphism T_j -> T_k obtained by chaining adjacent links."""
    if not (0 <= j <= k <= system.top_level):
        raise ValidationError(f"need 0 <= j <= k <= {system.top_level}, got j={j}, k={k}")
    if j == k:
        return identity_morphism(system.triples[j])
    morphism = system.links[j]
    for step in range(j + 1, k):
        morphism = compose_morphisms(morphism, system.links[step])
    return morphism


def system_validate(
    system: InductiveSystem, tol: float = VALIDATION_TOL
) -> "SystemReport":
    """Validate every triple and every link; aggregate names the first failure."""
    triple_reports = tuple(validate_triple(t, tol=tol) for t in system.triples)
    link_reports = tuple(validate_morphism(m, tol=tol) for m in system.links)
    failing_triple = next((j for j, r in enumerate(triple_reports) if not r.passed), None)
    failing_link = next((j for j, r in enumerate(link_reports) if not r.passed), None)
    return SystemReport(triple_reports, link_reports, tol, failing_triple, failing_link)


@dataclass(frozen=True)
class SystemReport:
    triple_reports: tuple[ResidualReport, ...]
    link_reports: tuple[ResidualReport, ...]
    tol: float
    failing_triple: int | None
    failing_link: int | None

    @property
    def passed(self) -> bool:
        return self.failing_triple is None and self.failing_link is None

    @property
    def worst(self) -> float:
        worst = 0.0
        for r in self.triple_reports + self.link_reports:
            worst = max(worst, r.worst)
        return worst

    def summary(self) -> str:
        if self.passed:
            return f"pass: {len(self.triple_reports)} triples, {len(self.link_reports)} links, worst residual {self.worst:.2e}"
        parts = []
        if self.failing_triple is not None:
            parts.append(
                f"triple {self.failing_triple}: "
                + self.triple_reports[self.failing_triple].summary()
            )
        if self.failing_link is not None:
            parts.append(
                f"link {self.failing_link}: " + self.link_reports[self.failing_link].summary()
            )
        return "FAIL " + "; ".join(parts)


class Realization:
    """Level-J truncation of the inductive limit.

    Carries the ambient triple T_J, the embeddings I_{j,J} and projections
    P_j for j <= J, and caches spectral decompositions of the Dirac
    operators for the convergence diagnostics.
    """

    def __init__(self, system: InductiveSystem, level: int):
        if not (0 <= level <= system.top_level):
            raise ValidationError(f"level must lie in [0, {system.top_level}], got {level}")
        self.system = system
        self.level = level
        self.ambient = system.triples[level]
        embeddings = [None] * (level + 1)
        embeddings[level] = identity_morphism(self.ambient).iso
        for j in range(level - 1, -1, -1):
            embeddings[j] = embeddings[j + 1] @ system.links[j].iso
        self.embeddings = tuple(embeddings)
        self.projections = tuple(i @ dagger(i) for i in self.embeddings)
        self._level_eig: dict[tuple[int, float], SpectralDecomposition] = {}

    def embedding(self, j: int) -> np.ndarray:
        return self.embeddings[j]

    def projection(self, j: int) -> np.ndarray:
        return self.projections[j]

    def level_decomposition(self, j: int, group_tol: float = GROUP_TOL) -> SpectralDecomposition:
        key = (j, group_tol)
        if key not in self._level_eig:
            self._level_eig[key] = eigh(self.system.triples[j].dirac, group_tol=group_tol)
        return self._level_eig[key]

    def ambient_decomposition(self, group_tol: float = GROUP_TOL) -> SpectralDecomposition:
        return self.level_decomposition(self.level, group_tol)


def realize(system: InductiveSystem, level: int | None = None) -> Realization:
    """Truncated inductive realization at the given level (default: top)."""
    if level is None:
        level = system.top_level
    return Realization(system, level)


def realization_residuals(r: Realization, tol: float = VALIDATION_TOL) -> ResidualReport:
    """Structural invariants of a realization.

    Checks projection monotonicity P_j P_k = P_j (j <= k), commutation of
    every P_j with the ambient Dirac operator, and the Dirac intertwining
    I_{j,J} D_j = D_J I_{j,J}.
    """
    monotone = 0.0
    commute = 0.0
    intertwine = 0.0
    d_top = r.ambient.dirac
    for j in range(r.level + 1):
        p_j = r.projection(j)
        commute = max(commute, operator_norm(commutator(p_j, d_top)))
        intertwine = max(
            intertwine,
            operator_norm(r.embedding(j) @ r.system.triples[j].dirac - d_top @ r.embedding(j)),
        )
        for k in range(j, r.level + 1):
            monotone = max(monotone, operator_norm(p_j @ r.projection(k) - p_j))
    entries = {
        "projection_monotonicity": monotone,
        "projection_dirac_commutation": commute,
        "dirac_intertwining": intertwine,
    }
    return ResidualReport(entries, tol)
