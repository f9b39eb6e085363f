"""Generators for the two worked inductive systems.

Cantor systems: a gap sequence (removed open intervals with nonincreasing
lengths) induces level algebras C(Lambda_j), pair Hilbert spaces over the
gap endpoints, gapwise-swap Dirac operators 1/l_n and pullback connecting
maps.  Christensen-Ivan systems: an increasing chain of finite-dimensional
C*-algebras with a faithful state; levels live inside the GNS space of the
top algebra, with Dirac increments alpha_i between consecutive conditional
projections.

Commutative chains are built in point coordinates (diagonal multiplication
representations, sparse inclusion isometries), which keeps deep binary
chains cheap; noncommutative chains go through the dense GNS route and are
capped at small dimensions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    FiniteCStarAlgebra,
    StarHomomorphism,
    State,
    gns,
    hom_compose,
)
from .errors import ValidationError
from .linalg import dagger
from .triple import (
    DenseRepresentation,
    DiagonalRepresentation,
    FiniteSpectralTriple,
    TripleMorphism,
)
from .inductive import InductiveSystem

# Slack for the nonincreasing-length check (adjacent lengths may differ by
# rounding when generated at equal nominal depth).
LENGTH_ORDER_SLACK = 1e-12
# Dense GNS construction cap (top-algebra element dimension).
DENSE_GNS_CAP = 128


@dataclass(frozen=True)
class GapSequence:
    """A Cantor-set presentation: outer interval plus removed open gaps.

    ``x0_plus``/``x0_minus`` are the minimum and maximum of the set; entry n
    of ``gaps`` (1-based in formulas, 0-based here) is the open interval
    (x_{n,-}, x_{n,+}).  Lengths must be nonincreasing: the strictly
    decreasing requirement would exclude standard examples with repeated
    lengths, and every formula used downstream holds verbatim for ties.
    """

    x0_plus: float
    x0_minus: float
    gaps: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not (self.x0_plus < self.x0_minus):
            raise ValidationError("outer interval must have positive length")
        lengths = [self.x0_minus - self.x0_plus]
        endpoints = [self.x0_plus, self.x0_minus]
        for left, right in self.gaps:
            if not (self.x0_plus < left < right < self.x0_minus):
                raise ValidationError("gap must lie strictly inside the outer interval")
            lengths.append(right - left)
            endpoints.extend([left, right])
        for a, b in zip(lengths, lengths[1:]):
            if b > a * (1.0 + LENGTH_ORDER_SLACK) + LENGTH_ORDER_SLACK:
                raise ValidationError("gap lengths must be nonincreasing")
        ordered = sorted(self.gaps)
        for (l1, r1), (l2, r2) in zip(ordered, ordered[1:]):
            if l2 < r1:
                raise ValidationError("gaps must be pairwise disjoint")
        if len(set(endpoints)) != len(endpoints):
            raise ValidationError("gap endpoints must be pairwise distinct (no isolated points)")

    @property
    def n_gaps(self) -> int:
        return len(self.gaps)

    @property
    def lengths(self) -> np.ndarray:
        out = [self.x0_minus - self.x0_plus]
        out.extend(right - left for left, right in self.gaps)
        return np.array(out)

    def plus_point(self, n: int) -> float:
        return self.x0_plus if n == 0 else self.gaps[n - 1][1]

    def minus_point(self, n: int) -> float:
        return self.x0_minus if n == 0 else self.gaps[n - 1][0]

    def plus_points(self, j: int) -> list[float]:
        return [self.plus_point(n) for n in range(j + 1)]

    def endpoint_basis(self, j: int) -> list[float]:
        """E_j: pairs (x_{n,+}, x_{n,-}) for n = 0..j, in pair order."""
        out = []
        for n in range(j + 1):
            out.extend([self.plus_point(n), self.minus_point(n)])
        return out


def middle_thirds(levels: int) -> GapSequence:
    """Middle-thirds gaps of [0, 1], enumerated by nonincreasing length.

    Ties (all gaps of one subdivision depth) are broken by ascending left
    endpoint; endpoints are computed from exact triadic integers so that
    repeated evaluations agree bitwise.
    """
    if levels < 0:
        raise ValidationError("levels must be nonnegative")
    gaps: list[tuple[float, float]] = []
    kept = [0]  # numerators p of kept intervals [p, p+1] / 3^depth
    depth = 0
    while len(gaps) < levels:
        depth += 1
        scale = 3**depth
        new_kept = []
        for p in sorted(kept):
            new_kept.extend([3 * p, 3 * p + 2])
            gaps.append(((3 * p + 1) / scale, (3 * p + 2) / scale))
        kept = new_kept
    return GapSequence(0.0, 1.0, tuple(gaps[:levels]))


def theta(seq: GapSequence, j: int, x: float) -> float:
    """Largest x_{n,+} <= x among levels n = 0..j."""
    return seq.plus_point(theta_index(seq, j, x))


def theta_index(seq: GapSequence, j: int, x: float) -> int:
    if j > seq.n_gaps:
        raise ValidationError(f"level {j} exceeds available gaps ({seq.n_gaps})")
    best = None
    best_val = None
    for n in range(j + 1):
        v = seq.plus_point(n)
        if v <= x and (best_val is None or v > best_val):
            best, best_val = n, v
    if best is None:
        raise ValidationError(f"x = {x:g} lies below the set minimum {seq.x0_plus:g}")
    return best


def cantor_system(seq: GapSequence, levels: int, with_grading: bool = True) -> InductiveSystem:
    """Inductive system of Cantor triples at levels 0..levels.

    Level j acts on the 2(j+1) gap endpoints; the Dirac operator swaps each
    endpoint pair with weight 1/l_n, so ||D_j|| = 1/l_j, and the optional
    grading is the unweighted swap.
    """
    if levels < 0:
        raise ValidationError("levels must be nonnegative")
    if seq.n_gaps < levels:
        raise ValidationError(f"gap sequence has {seq.n_gaps} gaps, need {levels}")
    lengths = seq.lengths
    triples = []
    for j in range(levels + 1):
        dim = 2 * (j + 1)
        coords = seq.endpoint_basis(j)
        coord_points = np.array([theta_index(seq, j, x) for x in coords])
        dirac = np.zeros((dim, dim), dtype=complex)
        grading = np.zeros((dim, dim), dtype=complex)
        for n in range(j + 1):
            w = 1.0 / lengths[n]
            dirac[2 * n, 2 * n + 1] = w
            dirac[2 * n + 1, 2 * n] = w
            grading[2 * n, 2 * n + 1] = 1.0
            grading[2 * n + 1, 2 * n] = 1.0
        algebra = FiniteCStarAlgebra((1,) * (j + 1))
        meta = {
            "kind": "cantor",
            "level": j,
            "points": [float(v) for v in seq.plus_points(j)],
            "coords": [float(v) for v in coords],
        }
        triples.append(
            FiniteSpectralTriple(
                algebra,
                DiagonalRepresentation(coord_points, j + 1),
                dirac,
                grading=grading if with_grading else None,
                meta=meta,
            )
        )
    links = []
    for j in range(levels):
        source, target = triples[j], triples[j + 1]
        mapping = np.array(
            [theta_index(seq, j, seq.plus_point(q)) for q in range(j + 2)]
        )
        phi = StarHomomorphism(source.algebra, target.algebra, spectrum_map=mapping)
        iso = np.zeros((target.hilbert_dim, source.hilbert_dim), dtype=complex)
        iso[: source.hilbert_dim, :] = np.eye(source.hilbert_dim)
        links.append(TripleMorphism(source, target, phi, iso))
    provenance = {
        "kind": "cantor",
        "lengths": [float(v) for v in lengths[: levels + 1]],
    }
    return InductiveSystem(tuple(triples), tuple(links), provenance)


@dataclass(frozen=True)
class AfChain:
    """Increasing chain A_0 = C <= A_1 <= ... with a faithful state on top.

    The state lives on the last algebra and is restricted downward along the
    inclusions when a shorter system is built; faithfulness at the top
    implies it on every subalgebra.
    """

    algebras: tuple[FiniteCStarAlgebra, ...]
    inclusions: tuple[StarHomomorphism, ...]
    state: State
    alphas: tuple[float, ...]

    def __post_init__(self):
        if len(self.algebras) < 1:
            raise ValidationError("chain needs at least one algebra")
        if self.algebras[0].block_dims != (1,):
            raise ValidationError("chain must start at the scalars A_0 = C")
        if len(self.inclusions) != len(self.algebras) - 1:
            raise ValidationError("chain needs one inclusion per adjacent pair")
        for j, inc in enumerate(self.inclusions):
            if inc.source.block_dims != self.algebras[j].block_dims:
                raise ValidationError(f"inclusion {j} source mismatch")
            if inc.target.block_dims != self.algebras[j + 1].block_dims:
                raise ValidationError(f"inclusion {j} target mismatch")
        if self.state.algebra.block_dims != self.algebras[-1].block_dims:
            raise ValidationError("state must live on the top algebra of the chain")
        alphas = tuple(float(a) for a in self.alphas)
        if len(alphas) < len(self.algebras) - 1:
            raise ValidationError("need one alpha per chain step")
        if any(a == 0.0 for a in alphas):
            raise ValidationError("alpha values must be nonzero")
        object.__setattr__(self, "alphas", alphas)

    @property
    def top_level(self) -> int:
        return len(self.algebras) - 1

    @property
    def is_commutative(self) -> bool:
        return all(a.is_commutative for a in self.algebras) and all(
            inc.spectrum_map is not None for inc in self.inclusions
        )

    def composed_inclusion(self, j: int, k: int) -> StarHomomorphism:
        if j == k:
            return StarHomomorphism.identity(self.algebras[j])
        out = self.inclusions[j]
        for step in range(j + 1, k):
            out = hom_compose(self.inclusions[step], out)
        return out


def commutative_af_chain(branching, weights, alphas) -> AfChain:
    """Chain of diagonal algebras from finite-set surjections.

    ``branching[i]`` maps the points of level i+1 onto the points of level
    i; ``weights`` is a faithful probability vector on the top point set.
    """
    maps = [np.asarray(b, dtype=int).ravel() for b in branching]
    sizes = [1] + [m.shape[0] for m in maps]
    algebras = [FiniteCStarAlgebra((1,) * s) for s in sizes]
    inclusions = []
    for i, m in enumerate(maps):
        if m.size and (m.min() < 0 or m.max() >= sizes[i]):
            raise ValidationError(f"branching map {i} has values outside the parent point set")
        hit = np.zeros(sizes[i], dtype=bool)
        hit[m] = True
        if not hit.all():
            raise ValidationError(
                f"branching map {i} misses a parent point (pullback would not be injective)"
            )
        inclusions.append(
            StarHomomorphism(algebras[i], algebras[i + 1], spectrum_map=m)
        )
    state = State.from_weights(algebras[-1], weights)
    return AfChain(tuple(algebras), tuple(inclusions), state, tuple(alphas))


def binary_branching(levels: int) -> list[np.ndarray]:
    return [np.arange(2 ** (i + 1)) // 2 for i in range(levels)]


def _restrict_state(chain: AfChain, level: int) -> State:
    """Pull the top state back to the level algebra along the inclusions."""
    if level == chain.top_level:
        return chain.state
    algebra = chain.algebras[level]
    inc = chain.composed_inclusion(level, chain.top_level)
    if algebra.is_commutative and inc.spectrum_map is not None:
        w_top = chain.state.weights
        w = np.zeros(algebra.n_points)
        np.add.at(w, inc.spectrum_map, w_top)
        return State.from_weights(algebra, w)
    densities = []
    offsets = algebra.block_offsets()
    for b, n in enumerate(algebra.block_dims):
        rho = np.zeros((n, n), dtype=complex)
        for k in range(n):
            for l in range(n):
                e = algebra.basis_element(offsets[b] + k * n + l)
                rho[l, k] = chain.state.value(inc.apply(e))
        densities.append(rho)
    return State(algebra, tuple(densities))


def _ci_system_commutative(chain: AfChain, levels: int) -> InductiveSystem:
    sigmas = [inc.spectrum_map for inc in chain.inclusions[:levels]]
    sizes = [a.n_points for a in chain.algebras[: levels + 1]]
    weights = [None] * (levels + 1)
    weights[levels] = _restrict_state(chain, levels).weights
    for j in range(levels, 0, -1):
        w = np.zeros(sizes[j - 1])
        np.add.at(w, sigmas[j - 1], weights[j])
        weights[j - 1] = w

    isometries = []
    for j in range(levels):
        iso = np.zeros((sizes[j + 1], sizes[j]), dtype=complex)
        for q in range(sizes[j + 1]):
            p = sigmas[j][q]
            iso[q, p] = math.sqrt(weights[j + 1][q] / weights[j][p])
        isometries.append(iso)

    diracs = [np.zeros((1, 1), dtype=complex)]
    for j in range(1, levels + 1):
        iso = isometries[j - 1]
        proj = iso @ dagger(iso)
        d = iso @ diracs[j - 1] @ dagger(iso) + chain.alphas[j - 1] * (
            np.eye(sizes[j]) - proj
        )
        diracs.append(0.5 * (d + dagger(d)))

    triples = []
    for j in range(levels + 1):
        meta = {"kind": "christensen-ivan", "level": j}
        triples.append(
            FiniteSpectralTriple(
                chain.algebras[j],
                DiagonalRepresentation(np.arange(sizes[j]), sizes[j]),
                diracs[j],
                meta=meta,
            )
        )
    links = [
        TripleMorphism(triples[j], triples[j + 1], chain.inclusions[j], isometries[j])
        for j in range(levels)
    ]
    provenance = {
        "kind": "christensen-ivan",
        "alphas": [float(a) for a in chain.alphas[:levels]],
    }
    return InductiveSystem(tuple(triples), tuple(links), provenance)


def _ci_system_gns(chain: AfChain, levels: int) -> InductiveSystem:
    top_algebra = chain.algebras[levels]
    if top_algebra.element_dim > DENSE_GNS_CAP:
        raise ValidationError(
            f"dense GNS construction capped at element dimension {DENSE_GNS_CAP}; "
            "use a commutative chain (spectrum maps) for larger systems"
        )
    state = _restrict_state(chain, levels)
    space = gns(top_algebra, state)
    n = space.dimension

    # Nested orthonormal bases of eta(A_j) inside the top GNS space.
    dims = [chain.algebras[j].element_dim for j in range(levels + 1)]
    q_cols = np.zeros((n, 0), dtype=complex)
    for j in range(levels + 1):
        v = chain.composed_inclusion(j, levels).as_matrix()
        w = space._chol_h @ v
        resid = w - q_cols @ (dagger(q_cols) @ w)
        u, s, _ = np.linalg.svd(resid, full_matrices=False)
        rank = int(np.sum(s > 1e-10 * max(1.0, s[0] if s.size else 1.0)))
        expected = dims[j] - q_cols.shape[1]
        if rank != expected:
            raise ValidationError(
                f"level {j} subspace has numerical rank {rank}, expected {expected} "
                "(inclusion not injective or state not separating)"
            )
        q_cols = np.hstack([q_cols, u[:, :rank]])

    diag_values = np.zeros(n)
    for j in range(1, levels + 1):
        diag_values[dims[j - 1] : dims[j]] = chain.alphas[j - 1]

    triples = []
    for j in range(levels + 1):
        d_j = dims[j]
        q_j = q_cols[:, :d_j]
        mats = []
        for e in chain.algebras[j].basis():
            top_elem = chain.composed_inclusion(j, levels).apply(e)
            mats.append(dagger(q_j) @ space.representation_matrix(top_elem) @ q_j)
        rep = DenseRepresentation(np.array(mats))
        dirac = np.diag(diag_values[:d_j]).astype(complex)
        meta = {"kind": "christensen-ivan", "level": j}
        triples.append(FiniteSpectralTriple(chain.algebras[j], rep, dirac, meta=meta))
    links = []
    for j in range(levels):
        iso = np.zeros((dims[j + 1], dims[j]), dtype=complex)
        iso[: dims[j], :] = np.eye(dims[j])
        links.append(TripleMorphism(triples[j], triples[j + 1], chain.inclusions[j], iso))
    provenance = {
        "kind": "christensen-ivan",
        "alphas": [float(a) for a in chain.alphas[:levels]],
    }
    return InductiveSystem(tuple(triples), tuple(links), provenance)


def ci_system(chain: AfChain, levels: int) -> InductiveSystem:
    """Christensen-Ivan system truncated at the given level.

    Level j is eta(A_j) with left multiplication; the Dirac operator is the
    alpha-weighted sum of conditional-projection increments, restricted to
    the level subspace (so D_k agrees with D_j on eta(A_j) for k >= j).
    """
    if levels < 0:
        raise ValidationError("levels must be nonnegative")
    if levels > chain.top_level:
        raise ValidationError(f"chain has top level {chain.top_level}, requested {levels}")
    if chain.is_commutative:
        return _ci_system_commutative(chain, levels)
    return _ci_system_gns(chain, levels)


def random_gap_sequence(rng: np.random.Generator, levels: int) -> GapSequence:
    """Random Cantor-style gap data with distinct, well-separated lengths."""
    intervals = [(0.0, 1.0)]
    gaps: list[tuple[float, float]] = []
    while len(gaps) < max(levels, 1):
        nxt = []
        for a, b in intervals:
            width = b - a
            frac = rng.uniform(0.25, 0.45)
            off = rng.uniform(0.15, 0.9 - frac)
            left = a + off * width
            right = left + frac * width
            gaps.append((left, right))
            nxt.extend([(a, left), (right, b)])
        intervals = nxt
    gaps.sort(key=lambda g: (-(g[1] - g[0]), g[0]))
    return GapSequence(0.0, 1.0, tuple(gaps[:levels]))


def random_af_chain(
    rng: np.random.Generator,
    levels: int,
    max_points: int = 64,
    alpha_kind: str = "random",
) -> AfChain:
    """Random commutative chain with separated alpha magnitudes."""
    sizes = [1]
    branching = []
    for _ in range(levels):
        fibers = []
        parents = sizes[-1]
        for p in range(parents):
            k = int(rng.integers(1, 3))
            remaining_parents = parents - p - 1
            k = max(1, min(k, max_points - len(fibers) - remaining_parents))
            fibers.extend([p] * k)
        branching.append(np.array(fibers))
        sizes.append(len(fibers))
    weights = rng.uniform(0.2, 1.0, size=sizes[-1])
    weights = weights / weights.sum()
    base = 0.6 + 0.4 * rng.random(levels)
    if alpha_kind == "increasing":
        mags = np.cumsum(base) + 0.5
    elif alpha_kind == "bounded":
        mags = 1.0 + 0.03 * np.arange(levels)
    else:
        mags = 0.5 + 0.45 * np.arange(levels) + 0.1 * rng.random(levels)
        rng.shuffle(mags)
    signs = rng.choice([-1.0, 1.0], size=levels)
    return commutative_af_chain(branching, weights, signs * mags)


def random_commutative_system(rng: np.random.Generator, max_dim: int = 64) -> InductiveSystem:
    """Random valid commutative system (Cantor-style or Christensen-Ivan)."""
    if rng.random() < 0.5:
        levels = int(rng.integers(1, 6))
        return cantor_system(random_gap_sequence(rng, levels), levels)
    levels = int(rng.integers(1, 6))
    chain = random_af_chain(rng, levels, max_points=max_dim)
    return ci_system(chain, levels)
