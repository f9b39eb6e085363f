"""Finite-dimensional C*-algebras and the GNS construction.

An algebra is a direct sum of full matrix blocks, elements are stored in
block coordinates, *-homomorphisms come either as spectrum maps (pullbacks
between finite point sets, commutative case) or as explicit linear maps on
coordinates, and states are block-diagonal densities.  The GNS space of a
faithful state is presented in the element basis with an explicit Gram
matrix plus a cached Cholesky factor for orthonormal coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError
from .linalg import as_matrix, dagger, frobenius, operator_norm

# Smallest eigenvalue (relative to trace) below which a density is not faithful.
FAITHFUL_TOL = 1e-12
# Numerical rank threshold for subspace extraction.
RANK_TOL = 1e-10


@dataclass(frozen=True)
class FiniteCStarAlgebra:
    """Direct sum of full matrix blocks M_{n_1} + ... + M_{n_s}."""

    block_dims: tuple[int, ...]

    def __post_init__(self):
        if len(self.block_dims) < 1:
            raise ValidationError("algebra needs at least one block")
        if any(int(n) < 1 for n in self.block_dims):
            raise ValidationError("block dimensions must be positive")
        object.__setattr__(self, "block_dims", tuple(int(n) for n in self.block_dims))

    @property
    def element_dim(self) -> int:
        return int(sum(n * n for n in self.block_dims))

    @property
    def is_commutative(self) -> bool:
        return all(n == 1 for n in self.block_dims)

    @property
    def n_points(self) -> int:
        if not self.is_commutative:
            raise ValidationError("point set is defined only for commutative algebras")
        return len(self.block_dims)

    def block_offsets(self) -> list[int]:
        offsets = [0]
        for n in self.block_dims:
            offsets.append(offsets[-1] + n * n)
        return offsets

    def unit(self) -> "AlgebraElement":
        return AlgebraElement(self, tuple(np.eye(n, dtype=complex) for n in self.block_dims))

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, tuple(np.zeros((n, n), dtype=complex) for n in self.block_dims))

    def element(self, blocks: Sequence) -> "AlgebraElement":
        return AlgebraElement(self, tuple(as_matrix(b, "block") for b in blocks))

    def from_point_values(self, values) -> "AlgebraElement":
        """Commutative shorthand: an element from its tuple of point values."""
        vals = np.asarray(values, dtype=complex).ravel()
        if not self.is_commutative or vals.shape[0] != self.n_points:
            raise ValidationError("from_point_values needs a commutative algebra and one value per point")
        return AlgebraElement(self, tuple(np.array([[v]], dtype=complex) for v in vals))

    def from_coordinates(self, coords) -> "AlgebraElement":
        vec = np.asarray(coords, dtype=complex).ravel()
        if vec.shape[0] != self.element_dim:
            raise ValidationError("coordinate vector has wrong length")
        blocks = []
        pos = 0
        for n in self.block_dims:
            blocks.append(vec[pos : pos + n * n].reshape(n, n))
            pos += n * n
        return AlgebraElement(self, tuple(blocks))

    def basis_element(self, index: int) -> "AlgebraElement":
        coords = np.zeros(self.element_dim, dtype=complex)
        coords[index] = 1.0
        return self.from_coordinates(coords)

    def basis(self) -> Iterable["AlgebraElement"]:
        for i in range(self.element_dim):
            yield self.basis_element(i)

    def star_permutation(self) -> tuple[np.ndarray, None]:
        """Coordinate permutation realizing the adjoint on the matrix-unit basis."""
        perm = np.empty(self.element_dim, dtype=int)
        pos = 0
        for n in self.block_dims:
            for k in range(n):
                for l in range(n):
                    perm[pos + k * n + l] = pos + l * n + k
            pos += n * n
        return perm, None


@dataclass(frozen=True)
class AlgebraElement:
    algebra: FiniteCStarAlgebra
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.blocks) != len(self.algebra.block_dims):
            raise ValidationError("element block count does not match the algebra")
        blocks = []
        for b, n in zip(self.blocks, self.algebra.block_dims):
            m = as_matrix(b, "block")
            if m.shape != (n, n):
                raise ValidationError(f"block shape {m.shape} does not match dimension {n}")
            blocks.append(m)
        object.__setattr__(self, "blocks", tuple(blocks))

    @property
    def coordinates(self) -> np.ndarray:
        return np.concatenate([b.ravel() for b in self.blocks])

    @property
    def point_values(self) -> np.ndarray:
        if not self.algebra.is_commutative:
            raise ValidationError("point values are defined only for commutative algebras")
        return np.array([b[0, 0] for b in self.blocks])

    def star(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, tuple(dagger(b) for b in self.blocks))

    def is_selfadjoint(self, tol: float = 1e-12) -> bool:
        return all(frobenius(b - dagger(b)) <= tol * max(1.0, frobenius(b)) for b in self.blocks)

    def norm(self) -> float:
        return max(operator_norm(b) for b in self.blocks)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_same(other)
        return AlgebraElement(self.algebra, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_same(other)
        return AlgebraElement(self.algebra, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check_same(other)
            return AlgebraElement(self.algebra, tuple(a @ b for a, b in zip(self.blocks, other.blocks)))
        return AlgebraElement(self.algebra, tuple(complex(other) * b for b in self.blocks))

    def __rmul__(self, other):
        return self.__mul__(other)

    def _check_same(self, other: "AlgebraElement"):
        if self.algebra.block_dims != other.algebra.block_dims:
            raise ValidationError("elements belong to different algebras")


@dataclass(frozen=True)
class StarHomomorphism:
    """Unital *-homomorphism, encoded as a spectrum map or an explicit linear map.

    A spectrum map sends target points to source points (the homomorphism is
    the pullback); the explicit form is a matrix acting on element
    coordinates whose axioms are checked numerically by ``hom_validate``.
    """

    source: FiniteCStarAlgebra
    target: FiniteCStarAlgebra
    spectrum_map: np.ndarray | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if (self.spectrum_map is None) == (self.matrix is None):
            raise ValidationError("exactly one of spectrum_map / matrix must be given")
        if self.spectrum_map is not None:
            if not (self.source.is_commutative and self.target.is_commutative):
                raise ValidationError("spectrum maps require commutative source and target")
            m = np.asarray(self.spectrum_map, dtype=int).ravel()
            if m.shape[0] != self.target.n_points:
                raise ValidationError("spectrum map must assign a source point to every target point")
            if m.size and (m.min() < 0 or m.max() >= self.source.n_points):
                raise ValidationError("spectrum map values out of range")
            object.__setattr__(self, "spectrum_map", m)
        else:
            m = as_matrix(self.matrix, "homomorphism matrix")
            if m.shape != (self.target.element_dim, self.source.element_dim):
                raise ValidationError(
                    f"homomorphism matrix shape {m.shape} does not match "
                    f"({self.target.element_dim}, {self.source.element_dim})"
                )
            object.__setattr__(self, "matrix", m)

    @property
    def kind(self) -> str:
        return "spectrum_map" if self.spectrum_map is not None else "explicit_linear"

    @classmethod
    def identity(cls, algebra: FiniteCStarAlgebra) -> "StarHomomorphism":
        if algebra.is_commutative:
            return cls(algebra, algebra, spectrum_map=np.arange(algebra.n_points))
        return cls(algebra, algebra, matrix=np.eye(algebra.element_dim, dtype=complex))

    def as_matrix(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix
        out = np.zeros((self.target.n_points, self.source.n_points), dtype=complex)
        out[np.arange(self.target.n_points), self.spectrum_map] = 1.0
        return out

    def apply(self, a: AlgebraElement) -> AlgebraElement:
        if a.algebra.block_dims != self.source.block_dims:
            raise ValidationError("element does not belong to the source algebra")
        if self.spectrum_map is not None:
            return self.target.from_point_values(a.point_values[self.spectrum_map])
        return self.target.from_coordinates(self.as_matrix() @ a.coordinates)


def hom_compose(second: StarHomomorphism, first: StarHomomorphism) -> StarHomomorphism:
    """Composite second o first (first: A->B, second: B->C)."""
    if first.target.block_dims != second.source.block_dims:
        raise ValidationError("homomorphisms do not compose: endpoint mismatch")
    if first.spectrum_map is not None and second.spectrum_map is not None:
        return StarHomomorphism(
            first.source, second.target, spectrum_map=first.spectrum_map[second.spectrum_map]
        )
    return StarHomomorphism(
        first.source, second.target, matrix=second.as_matrix() @ first.as_matrix()
    )


@dataclass(frozen=True)
class ResidualReport:
    """Named residuals with a tolerance and an aggregate verdict."""

    entries: dict[str, float]
    tol: float
    notes: tuple[str, ...] = ()
    # Residual names excluded from the pass/fail aggregation (reported only).
    informational: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def failures(self) -> tuple[str, ...]:
        return tuple(
            k for k, v in self.entries.items() if k not in self.informational and v > self.tol
        )

    @property
    def worst(self) -> float:
        checked = [v for k, v in self.entries.items() if k not in self.informational]
        return max(checked) if checked else 0.0

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL(" + ",".join(self.failures) + ")"
        body = ", ".join(f"{k}={v:.2e}" for k, v in self.entries.items())
        return f"{status}: {body}"


def hom_validate(
    phi: StarHomomorphism, tol: float = 1e-10, max_pairs: int = 4096
) -> ResidualReport:
    """Residuals for unitality, multiplicativity, *-preservation and injectivity.

    The injectivity margin is the smallest singular value of the coordinate
    matrix; it is reported (not thresholded), and a zero margin fails the
    report since Definition-style morphisms require injective maps.
    """
    unit_res = (phi.apply(phi.source.unit()) - phi.target.unit()).norm()

    if phi.spectrum_map is not None:
        # Pullbacks are multiplicative and *-preserving identically; check a
        # token sample numerically to keep the report honest.
        m = phi.source.n_points
        mult_res = 0.0
        star_res = 0.0
        sample = range(min(m, 8))
        for i in sample:
            ei = phi.source.basis_element(i)
            for j in sample:
                ej = phi.source.basis_element(j)
                lhs = phi.apply(ei * ej)
                rhs = phi.apply(ei) * phi.apply(ej)
                mult_res = max(mult_res, (lhs - rhs).norm())
            star_res = max(star_res, (phi.apply(ei.star()) - phi.apply(ei).star()).norm())
        hit = np.zeros(m, dtype=bool)
        hit[phi.spectrum_map] = True
        margin = 1.0 if bool(hit.all()) else 0.0
        counts = np.bincount(phi.spectrum_map, minlength=m)
        if bool(hit.all()):
            margin = float(np.sqrt(counts.min()))
    else:
        mult_res = 0.0
        star_res = 0.0
        dim = phi.source.element_dim
        perm, _ = phi.source.star_permutation()
        n_pairs = dim * dim
        if n_pairs > max_pairs:
            rng = np.random.default_rng(0)
            pairs = [(int(a), int(b)) for a, b in rng.integers(0, dim, size=(max_pairs, 2))]
        else:
            pairs = [(a, b) for a in range(dim) for b in range(dim)]
        images = [phi.apply(phi.source.basis_element(i)) for i in range(dim)]
        for a, b in pairs:
            prod = phi.source.basis_element(a) * phi.source.basis_element(b)
            mult_res = max(mult_res, (phi.apply(prod) - images[a] * images[b]).norm())
        for i in range(dim):
            star_res = max(star_res, (phi.apply(phi.source.basis_element(i).star()) - images[i].star()).norm())
        margin = float(np.linalg.svd(phi.as_matrix(), compute_uv=False)[-1])

    entries = {
        "unitality": float(unit_res),
        "multiplicativity": float(mult_res),
        "star_preservation": float(star_res),
        "injectivity_margin": margin,
        "injectivity_defect": 0.0 if margin > tol else 1.0,
    }
    return ResidualReport(entries, tol, informational=("injectivity_margin",))


@dataclass(frozen=True)
class State:
    """Faithful state given by block-diagonal densities with total trace one."""

    algebra: FiniteCStarAlgebra
    block_densities: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.block_densities) != len(self.algebra.block_dims):
            raise ValidationError("state needs one density block per algebra block")
        blocks = []
        total = 0.0
        for rho, n in zip(self.block_densities, self.algebra.block_dims):
            m = as_matrix(rho, "density block")
            if m.shape != (n, n):
                raise ValidationError("density block shape mismatch")
            if frobenius(m - dagger(m)) > 1e-12 * max(1.0, frobenius(m)):
                raise ValidationError("density block is not Hermitian")
            m = 0.5 * (m + dagger(m))
            low = float(np.linalg.eigvalsh(m)[0])
            if low <= FAITHFUL_TOL:
                raise ValidationError("state is not faithful: density block not positive definite")
            total += float(np.trace(m).real)
            blocks.append(m)
        if abs(total - 1.0) > 1e-10:
            raise ValidationError(f"state traces sum to {total:g}, expected 1")
        object.__setattr__(self, "block_densities", tuple(blocks))

    @classmethod
    def from_weights(cls, algebra: FiniteCStarAlgebra, weights) -> "State":
        w = np.asarray(weights, dtype=float).ravel()
        if not algebra.is_commutative or w.shape[0] != algebra.n_points:
            raise ValidationError("from_weights needs a commutative algebra and one weight per point")
        if np.any(w <= 0):
            raise ValidationError("state is not faithful: weights must be strictly positive")
        w = w / w.sum()
        return cls(algebra, tuple(np.array([[x]], dtype=complex) for x in w))

    @classmethod
    def uniform(cls, algebra: FiniteCStarAlgebra) -> "State":
        # Normalized trace on each block, blocks weighted by dimension share.
        total = sum(algebra.block_dims)
        return cls(
            algebra,
            tuple(np.eye(n, dtype=complex) / total for n in algebra.block_dims),
        )

    def value(self, a: AlgebraElement) -> complex:
        if a.algebra.block_dims != self.algebra.block_dims:
            raise ValidationError("element does not belong to the state's algebra")
        return complex(sum(np.trace(r @ b) for r, b in zip(self.block_densities, a.blocks)))

    @property
    def weights(self) -> np.ndarray:
        if not self.algebra.is_commutative:
            raise ValidationError("point weights are defined only for commutative algebras")
        return np.array([r[0, 0].real for r in self.block_densities])


@dataclass(frozen=True)
class GnsSpace:
    """GNS Hilbert space of (A, tau) in the element basis.

    ``gram[a, b] = tau(a* b)`` on the canonical matrix-unit basis; the
    cyclic vector is the unit.  ``chol`` ( lower-triangular, gram = L L* )
    converts element coordinates to orthonormal ones via x -> L* x.
    """

    algebra: FiniteCStarAlgebra
    state: State
    gram: np.ndarray

    @property
    def dimension(self) -> int:
        return self.algebra.element_dim

    @cached_property
    def chol(self) -> np.ndarray:
        try:
            return np.linalg.cholesky(self.gram)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - guarded by State
            raise ValidationError("gram matrix not positive definite (state not faithful)") from exc

    @cached_property
    def _chol_h(self) -> np.ndarray:
        return dagger(self.chol)

    @cached_property
    def _chol_h_inv(self) -> np.ndarray:
        return np.linalg.solve(self._chol_h, np.eye(self.dimension, dtype=complex))

    @property
    def cyclic_vector(self) -> np.ndarray:
        return self.algebra.unit().coordinates

    def inner(self, x, y) -> complex:
        return complex(np.conj(np.asarray(x)).ravel() @ self.gram @ np.asarray(y).ravel())

    def eta(self, a: AlgebraElement) -> np.ndarray:
        return a.coordinates

    def to_orthonormal(self, x) -> np.ndarray:
        return self._chol_h @ np.asarray(x, dtype=complex).ravel()

    def left_mult_matrix(self, a: AlgebraElement) -> np.ndarray:
        """Matrix of left multiplication by ``a`` on element coordinates."""
        if a.algebra.block_dims != self.algebra.block_dims:
            raise ValidationError("element does not belong to the GNS algebra")
        blocks = [np.kron(b, np.eye(n, dtype=complex)) for b, n in zip(a.blocks, self.algebra.block_dims)]
        out = np.zeros((self.dimension, self.dimension), dtype=complex)
        pos = 0
        for blk in blocks:
            d = blk.shape[0]
            out[pos : pos + d, pos : pos + d] = blk
            pos += d
        return out

    def representation_matrix(self, a: AlgebraElement) -> np.ndarray:
        """Left multiplication by ``a`` in orthonormal coordinates."""
        return self._chol_h @ self.left_mult_matrix(a) @ self._chol_h_inv


def gns(algebra: FiniteCStarAlgebra, state: State) -> GnsSpace:
    """GNS construction: gram[a, b] = tau(a* b) on the matrix-unit basis."""
    if state.algebra.block_dims != algebra.block_dims:
        raise ValidationError("state is not a state of the given algebra")
    blocks = []
    for rho, n in zip(state.block_densities, algebra.block_dims):
        # tau(e_kl* e_mn) = delta_km rho[n, l]  =>  block = I_n (x) rho^T.
        blocks.append(np.kron(np.eye(n, dtype=complex), rho.T))
    dim = algebra.element_dim
    gram = np.zeros((dim, dim), dtype=complex)
    pos = 0
    for blk in blocks:
        d = blk.shape[0]
        gram[pos : pos + d, pos : pos + d] = blk
        pos += d
    gram = 0.5 * (gram + dagger(gram))
    space = GnsSpace(algebra, state, gram)
    space.chol  # force the faithfulness check now
    return space


def subspace_projection(space: GnsSpace, inclusion: StarHomomorphism) -> np.ndarray:
    """Orthogonal projection of the GNS space onto eta(B), B included in A.

    Returned in orthonormal coordinates, where it is an ordinary Hermitian
    idempotent; conjugating with the Cholesky factor recovers the
    gram-self-adjoint form on element coordinates.
    """
    if inclusion.target.block_dims != space.algebra.block_dims:
        raise ValidationError("inclusion target must be the GNS algebra")
    v = inclusion.as_matrix()
    w = space._chol_h @ v
    q, r = np.linalg.qr(w)
    diag = np.abs(np.diag(r))
    scale = max(1.0, float(diag.max()) if diag.size else 1.0)
    if np.any(diag < RANK_TOL * scale):
        raise ValidationError("inclusion image is rank deficient (map not injective)")
    p = q @ dagger(q)
    return 0.5 * (p + dagger(p))
