"""Complex matrices, QR with a positive-diagonal convention, pencil
factorizations, and unitary-to-unitary interpolation paths.

The float side is numpy-backed.  The exact side works on Gaussian-rational
matrices; :func:`modified_qr_pencil` runs an unnormalized Gram-Schmidt
recursion on the columns of the pencil ``(1-theta) A + theta B`` whose output
columns are *polynomial* vectors in theta.  Column k of the cleared output has
entry degrees bounded by ``3**(k-1)`` (1-indexed); the running denominator
(product of the previous squared column norms) has degree ``3**(k-1) - 1``.
Normalization by the column norm is never done symbolically: square roots
leave the ring, so unit columns exist only pointwise in the float field.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import (
    BranchCutError,
    DegeneracyError,
    ValidationError,
)
from .poly import GaussianRational, Poly, PolyVector

RANK_TOLERANCE = 1e-12
UNITARY_TOLERANCE = 1e-10
BRANCH_CUT_TOLERANCE = 1e-12


def cleared_column_degree_bound(k: int) -> int:
    """Max entry degree of cleared column k (1-indexed): 1, 3, 9, 27, ..."""
    return 3 ** (k - 1)


def running_denominator_degree(k: int) -> int:
    """Degree of the running denominator ahead of column k: 0, 2, 8, 26, ..."""
    return 3 ** (k - 1) - 1


class UnitaryMatrix:
    """Square complex matrix validated unitary at construction."""

    __slots__ = ("matrix", "tol")

    def __init__(self, matrix, tol: float = UNITARY_TOLERANCE):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"unitary must be square, got shape {m.shape}")
        defect = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
        if defect > tol:
            raise ValidationError(
                f"matrix is not unitary within tol={tol:g} (defect {defect:.3e})"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "tol", float(tol))

    def __setattr__(self, name, value):
        raise AttributeError("UnitaryMatrix is immutable")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def unitarity_defect(self) -> float:
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(self.dim))))

    def dagger(self) -> np.ndarray:
        return self.matrix.conj().T

    def __repr__(self):
        return f"UnitaryMatrix(dim={self.dim}, tol={self.tol:g})"


def matrix_to_jsonable(m: np.ndarray):
    """Nested rows of [re, im] pairs."""
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_jsonable(data) -> np.ndarray:
    try:
        return np.array(
            [[complex(re, im) for re, im in row] for row in data], dtype=complex
        )
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix payload: {exc}") from exc


def _phase_fix(q: np.ndarray, r: np.ndarray):
    # scale column k of q (and row k of r) so every r[k, k] is real positive
    d = np.diagonal(r, axis1=-2, axis2=-1)
    mags = np.abs(d)
    if np.any(mags == 0):
        raise DegeneracyError("zero diagonal in QR factor")
    phases = d / mags
    q = q * phases[..., None, :]
    r = r * np.conj(phases)[..., :, None]
    return q, r


def qr_stack_positive_diagonal(mats: np.ndarray):
    """Batched QR with the positive-diagonal convention; no rank guard."""
    q, r = np.linalg.qr(np.asarray(mats))
    return _phase_fix(q, r)


def standard_qr(m, tol: float = UNITARY_TOLERANCE):
    """QR factorization with real positive diagonal of R.

    Under that convention the factorization of a full-rank matrix is unique.
    Rank is guarded up front: smallest singular value must exceed
    ``RANK_TOLERANCE`` times the largest.
    """
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"standard_qr needs a square matrix, got {a.shape}")
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[-1] <= RANK_TOLERANCE * sv[0]:
        raise DegeneracyError(
            f"rank-deficient input (singular values {sv[0]:.3e}..{sv[-1]:.3e})"
        )
    q, r = np.linalg.qr(a)
    q, r = _phase_fix(q, r)
    return UnitaryMatrix(q, tol=tol), r


class ExactMatrix:
    """Square matrix of Gaussian rationals."""

    __slots__ = ("entries", "dim")

    def __init__(self, entries: Sequence[Sequence]):
        rows = tuple(
            tuple(GaussianRational.coerce(e) for e in row) for row in entries
        )
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValidationError("ExactMatrix must be square and nonempty")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "dim", n)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(
            [[GaussianRational(int(i == j)) for j in range(n)] for i in range(n)]
        )

    @classmethod
    def from_complex(cls, m) -> "ExactMatrix":
        """Exact lift of a float matrix (binary floats are rationals)."""
        m = np.asarray(m, dtype=complex)
        return cls(
            [[GaussianRational.from_complex(z) for z in row] for row in m]
        )

    def to_complex(self) -> np.ndarray:
        return np.array(
            [[e.to_complex() for e in row] for row in self.entries], dtype=complex
        )

    def column(self, k: int):
        return tuple(self.entries[i][k] for i in range(self.dim))

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.entries == other.entries


def random_exact_matrix(n: int, rng, span: int = 9) -> ExactMatrix:
    """Random Gaussian-rational entries with numerators/denominators up to span."""
    def draw():
        return GaussianRational(
            Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, span + 1))),
            Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, span + 1))),
        )

    return ExactMatrix([[draw() for _ in range(n)] for _ in range(n)])


class MatrixPencil:
    """Line segment (1-theta) A + theta B between two exact matrices."""

    __slots__ = ("a", "b")

    def __init__(self, a: ExactMatrix, b: ExactMatrix):
        if a.dim != b.dim:
            raise ValidationError("pencil endpoints differ in dimension")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixPencil is immutable")

    @property
    def dim(self) -> int:
        return self.a.dim

    def column_poly(self, k: int) -> PolyVector:
        """Column k as a vector of degree-<=1 polynomials in theta."""
        acol, bcol = self.a.column(k), self.b.column(k)
        return PolyVector(
            [Poly.exact([ae, be - ae]) for ae, be in zip(acol, bcol)]
        )

    def evaluate(self, theta) -> np.ndarray:
        t = float(theta)
        return (1.0 - t) * self.a.to_complex() + t * self.b.to_complex()

    def evaluate_exact(self, theta) -> ExactMatrix:
        t = GaussianRational.coerce(theta)
        one_minus = GaussianRational(1) - t
        a, b = self.a.entries, self.b.entries
        n = self.dim
        return ExactMatrix(
            [[one_minus * a[i][j] + t * b[i][j] for j in range(n)] for i in range(n)]
        )


class PolyMatrix:
    """Orthogonal polynomial columns from the pencil recursion.

    ``columns[k]`` is the cleared (denominator-free) column; ``norm_sq[k]`` its
    squared norm as a polynomial; ``running_denominators[k]`` the product of
    previous squared norms that was cleared out of column k.
    """

    __slots__ = ("columns", "norm_sq", "running_denominators")

    def __init__(self, columns, norm_sq, running_denominators):
        object.__setattr__(self, "columns", tuple(columns))
        object.__setattr__(self, "norm_sq", tuple(norm_sq))
        object.__setattr__(self, "running_denominators", tuple(running_denominators))

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    @property
    def dim(self) -> int:
        return len(self.columns)

    def max_entry_degrees(self) -> list:
        return [col.max_degree() for col in self.columns]

    def verify_orthogonality(self) -> bool:
        """Pairwise inner products vanish identically (exact check)."""
        for j in range(self.dim):
            for k in range(j + 1, self.dim):
                if not self.columns[j].inner(self.columns[k]).is_zero:
                    return False
        return True

    def verify_norms(self) -> bool:
        return all(
            self.columns[k].norm_sq() == self.norm_sq[k] for k in range(self.dim)
        )

    def evaluate_normalized(self, theta) -> np.ndarray:
        """Exact column evaluation, then pointwise float normalization."""
        n = self.dim
        out = np.zeros((n, n), dtype=complex)
        for k, col in enumerate(self.columns):
            vec = np.array([e(theta).to_complex() for e in col], dtype=complex)
            nrm = np.linalg.norm(vec)
            if nrm == 0:
                raise DegeneracyError(f"column {k} vanishes at theta={theta}")
            out[:, k] = vec / nrm
        return out

    def to_jsonable(self):
        return {
            "columns": [[e.to_jsonable() for e in col] for col in self.columns],
            "norm_sq": [p.to_jsonable() for p in self.norm_sq],
            "running_denominators": [
                p.to_jsonable() for p in self.running_denominators
            ],
        }


def modified_qr_pencil(pencil: MatrixPencil) -> PolyMatrix:
    """Unnormalized Gram-Schmidt on pencil columns, exactly, in one pass.

    Column k is the orthogonalized column scaled by the product of the previous
    squared norms, which clears every division the projections introduce; all
    entries stay polynomial.  Raises DegeneracyError naming the first column
    whose squared norm is identically zero.
    """
    n = pencil.dim
    one = Poly.exact([1])
    cols = []
    norms = []
    running = []
    denom = one
    for k in range(n):
        m_k = pencil.column_poly(k)
        acc = m_k.scale(denom)
        for j in range(k):
            # subtract <z_j, m_k>/norm_sq_j * z_j, cleared by the running product
            coeff = cols[j].inner(m_k)
            cofactor = one
            for l in range(k):
                if l != j:
                    cofactor = cofactor * norms[l]
            acc = acc - cols[j].scale(coeff * cofactor)
        nsq = acc.norm_sq()
        if nsq.is_zero:
            raise DegeneracyError(f"pencil column {k} is linearly dependent")
        cols.append(acc)
        norms.append(nsq)
        running.append(denom)
        denom = denom * nsq
    return PolyMatrix(cols, norms, running)


def modified_qr_numeric(pencil: MatrixPencil, theta):
    """Float twin of the exact recursion at a single theta.

    Returns the unit-column unitary and the squared norms of the unnormalized
    columns (which match the exact ``norm_sq`` polynomials evaluated at theta).
    """
    m = pencil.evaluate(theta)
    n = m.shape[0]
    cols = []
    norms_sq = []
    denom = 1.0
    for k in range(n):
        m_k = m[:, k]
        acc = denom * m_k.astype(complex)
        for j in range(k):
            coeff = np.vdot(cols[j], m_k)
            cofactor = 1.0
            for l in range(k):
                if l != j:
                    cofactor *= norms_sq[l]
            acc = acc - coeff * cofactor * cols[j]
        nsq = float(np.vdot(acc, acc).real)
        if np.sqrt(nsq) < RANK_TOLERANCE * np.linalg.norm(m_k):
            raise DegeneracyError(f"pencil column {k} degenerate at theta={theta}")
        cols.append(acc)
        norms_sq.append(nsq)
        denom *= nsq
    u = np.column_stack([c / np.sqrt(s) for c, s in zip(cols, norms_sq)])
    return UnitaryMatrix(u), norms_sq


# -- interpolation paths -----------------------------------------------------


def _check_pair(u1: UnitaryMatrix, u2: UnitaryMatrix, theta):
    if u1.dim != u2.dim:
        raise ValidationError("endpoint unitaries differ in dimension")
    t = float(theta)
    if not 0.0 <= t <= 1.0:
        raise ValidationError(f"theta={t} outside [0, 1]")
    return t


def _unitary_eigensystem(u: np.ndarray):
    """Schur form of a (numerically) normal matrix: unitary basis + eigenphases."""
    t, z = scipy.linalg.schur(u, output="complex")
    eigs = np.diagonal(t)
    if np.any(np.abs(eigs + 1.0) <= BRANCH_CUT_TOLERANCE):
        raise BranchCutError(
            "eigenvalue on the principal branch cut (at -1); path is ambiguous"
        )
    return z, np.angle(eigs)


def geodesic_path(u1: UnitaryMatrix, u2: UnitaryMatrix, theta) -> UnitaryMatrix:
    """U1 exp(i H theta) with H the principal logarithm of U1^dag U2."""
    t = _check_pair(u1, u2, theta)
    v = u1.dagger() @ u2.matrix
    z, phases = _unitary_eigensystem(v)
    core = (z * np.exp(1j * phases * t)) @ z.conj().T
    return UnitaryMatrix(u1.matrix @ core, tol=u1.tol)


def power_path(u1: UnitaryMatrix, u2: UnitaryMatrix, theta) -> UnitaryMatrix:
    """Product of principal fractional powers U1^(1-theta) U2^theta."""
    t = _check_pair(u1, u2, theta)
    z1, ph1 = _unitary_eigensystem(u1.matrix)
    z2, ph2 = _unitary_eigensystem(u2.matrix)
    left = (z1 * np.exp(1j * ph1 * (1.0 - t))) @ z1.conj().T
    right = (z2 * np.exp(1j * ph2 * t)) @ z2.conj().T
    return UnitaryMatrix(left @ right, tol=u1.tol)


def pencil_qr_path(u1: UnitaryMatrix, u2: UnitaryMatrix, theta) -> UnitaryMatrix:
    """Unitary QR factor of the straight-line pencil between the endpoints."""
    t = _check_pair(u1, u2, theta)
    q, _ = standard_qr((1.0 - t) * u1.matrix + t * u2.matrix, tol=u1.tol)
    return q

def multiplicative_path(u1: UnitaryMatrix, u2: UnitaryMatrix, theta) -> UnitaryMatrix:
    """U1 times the QR factor of the pencil from the identity to U1^dag U2.

    Singular only when theta = 1/2 and U1^dag U2 has eigenvalue -1; the rank
    guard inside standard_qr surfaces that as a degeneracy error.
    """
    t = _check_pair(u1, u2, theta)
    v = u1.dagger() @ u2.matrix
    pencil = (1.0 - t) * np.eye(u1.dim) + t * v
    q, _ = standard_qr(pencil, tol=u1.tol)
    return UnitaryMatrix(u1.matrix @ q.matrix, tol=u1.tol)


PATH_CONSTRUCTORS = {
    "geodesic": geodesic_path,
    "power": power_path,
    "pencil-qr": pencil_qr_path,
    "multiplicative": multiplicative_path,
}
