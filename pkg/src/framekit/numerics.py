"""Dense-matrix substrate: factorizations, generalized inverses, projectors,
range tests, and PSD pencil maximization.

Everything is stored as a plain numpy array in complex128; real input is
embedded.  Numerical rank follows one convention throughout the toolkit:
singular values (or eigenvalues of PSD matrices) at or below ``RANK_TOL``
times the largest one are treated as zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    IllConditionedSplit,
    NotHermitian,
    NotPSD,
    NotSquare,
    OracleMismatch,
)

RANK_TOL = 1e-10

__all__ = [
    "RANK_TOL",
    "EigenResult",
    "Subspace",
    "DouglasReport",
    "as_matrix",
    "as_vector",
    "hermitian_part",
    "operator_norm",
    "hermitian_eig",
    "pinv",
    "drazin",
    "range_basis",
    "projector",
    "douglas_check",
    "max_psd_scale",
    "psd_scale_bisection",
    "projection_lemma_check",
]


def as_matrix(a) -> np.ndarray:
    """Coerce to a finite 2-d complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {m.shape}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def as_vector(a, dim: int | None = None) -> np.ndarray:
    v = np.asarray(a, dtype=np.complex128).reshape(-1)
    if v.size and not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    if dim is not None and v.size != dim:
        raise DimensionMismatch(f"expected length {dim}, got {v.size}")
    return v


def hermitian_part(m) -> np.ndarray:
    m = as_matrix(m)
    return (m + m.conj().T) / 2.0


def operator_norm(m) -> float:
    """Largest singular value; 0.0 for an empty matrix."""
    m = as_matrix(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


@dataclass(frozen=True)
class EigenResult:
    """Spectral data of a Hermitian matrix: ascending eigenvalues and a
    matching unitary of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(m, tol: float = 1e-10) -> EigenResult:
    """Eigendecomposition of a Hermitian matrix.

    Raises NotSquare on a rectangular input and NotHermitian when the
    symmetry residual exceeds ``tol * ||M||``.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise NotSquare(f"expected square matrix, got {m.shape}")
    scale = operator_norm(m)
    if operator_norm(m - m.conj().T) > tol * scale:
        raise NotHermitian("symmetry residual exceeds tolerance")
    w, v = np.linalg.eigh(hermitian_part(m))
    return EigenResult(w, v)


def pinv(m, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse by SVD truncation.

    Singular values at or below ``rank_tol`` times the largest are dropped.
    The zero matrix maps to the zero matrix of transposed shape.
    """
    m = as_matrix(m)
    if m.size == 0:
        return np.zeros((m.shape[1], m.shape[0]), dtype=np.complex128)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] <= 0.0:
        return np.zeros((m.shape[1], m.shape[0]), dtype=np.complex128)
    keep = s > rank_tol * s[0]
    if not np.any(keep):
        return np.zeros((m.shape[1], m.shape[0]), dtype=np.complex128)
    u, s, vh = u[:, keep], s[keep], vh[keep]
    return (vh.conj().T / s) @ u.conj().T


def _nilpotency_index(strict_upper: np.ndarray) -> int:
    """Smallest k >= 1 with N^k = 0 for a strictly upper triangular N.

    Each multiplication shifts the nonzero band up one diagonal, so powers
    reach an exact zero matrix in at most size(N) steps.
    """
    k = 1
    p = strict_upper
    while p.size and np.any(p):
        p = p @ strict_upper
        k += 1
    return k


def drazin(m, tol: float = RANK_TOL) -> tuple[np.ndarray, int]:
    """Drazin inverse via core-nilpotent splitting, with the index.

    Eigenvalues of magnitude above ``tol * ||M||`` form the invertible core;
    the rest are treated as the nilpotent part.  The result inverts the core
    and is zero on the nilpotent part.  Raises IllConditionedSplit when the
    spectral gap around the cut radius is below ``10 * tol`` relative to
    ``||M||``.
    """
    m = as_matrix(m)
    n = m.shape[0]
    if n != m.shape[1]:
        raise NotSquare(f"expected square matrix, got {m.shape}")
    scale = operator_norm(m)
    if scale == 0.0:
        return np.zeros_like(m), 1
    cutoff = tol * scale
    t, z, sdim = scipy.linalg.schur(
        m, output="complex", sort=lambda lam: abs(lam) > cutoff
    )
    moduli = np.abs(np.diag(t))
    if 0 < sdim < n:
        gap = (moduli[:sdim].min() - moduli[sdim:].max()) / scale
        if gap < 10.0 * tol:
            raise IllConditionedSplit(
                f"spectral gap {gap:.3e} below {10.0 * tol:.3e} at the cut radius"
            )
    eye_core = np.eye(sdim, dtype=np.complex128)
    if sdim == n:
        inv_t = scipy.linalg.solve_triangular(t, eye_core)
        return z @ inv_t @ z.conj().T, 1
    t22 = t[sdim:, sdim:]
    index = _nilpotency_index(np.triu(t22, 1))
    if sdim == 0:
        return np.zeros_like(m), index
    t11 = t[:sdim, :sdim]
    t12 = t[:sdim, sdim:]
    # X solves T11 X - X T22 = -T12, decoupling the two invariant blocks.
    x = scipy.linalg.solve_sylvester(t11, -t22, -t12)
    inv_core = scipy.linalg.solve_triangular(t11, eye_core)
    s_t = np.zeros((n, n), dtype=np.complex128)
    s_t[:sdim, :sdim] = inv_core
    s_t[:sdim, sdim:] = -inv_core @ x
    return z @ s_t @ z.conj().T, index


@dataclass(frozen=True)
class Subspace:
    """A subspace given by an orthonormal column basis.

    ``basis`` has shape (ambient_dim, dim); dim may be zero for the trivial
    subspace.  Immutable after construction.
    """

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = as_matrix(self.basis)
        if b.shape[0] != self.ambient_dim:
            raise DimensionMismatch(
                f"basis rows {b.shape[0]} != ambient dim {self.ambient_dim}"
            )
        if b.shape[1] > self.ambient_dim:
            raise DimensionMismatch("more basis columns than ambient dimensions")
        if b.shape[1]:
            gram = b.conj().T @ b
            if operator_norm(gram - np.eye(b.shape[1])) > 1e-12:
                raise ValueError("basis columns are not orthonormal")
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.zeros((ambient_dim, 0), dtype=np.complex128))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.eye(ambient_dim, dtype=np.complex128))

    @classmethod
    def from_span(cls, vectors, rank_tol: float = RANK_TOL) -> "Subspace":
        """Orthonormalize a spanning set (columns) into a Subspace."""
        return range_basis(as_matrix(vectors), rank_tol)


def range_basis(m, rank_tol: float = RANK_TOL) -> Subspace:
    """Orthonormal basis of the numerical column space of ``m``."""
    m = as_matrix(m)
    if m.shape[1] == 0:
        return Subspace.zero(m.shape[0])
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] <= 0.0:
        return Subspace.zero(m.shape[0])
    keep = s > rank_tol * s[0]
    return Subspace(m.shape[0], u[:, keep])


def projector(w: Subspace) -> np.ndarray:
    """Orthogonal projection onto the subspace."""
    return w.basis @ w.basis.conj().T


@dataclass(frozen=True)
class DouglasReport:
    """Outcome of the range-inclusion / majorization / factorization test.

    When ``range_included`` is false, ``alpha`` and ``factor`` are None.
    ``alpha`` is the least constant with S S* <= alpha T T*; ``factor`` is
    the L with S = T L obtained from the pseudoinverse.
    """

    range_included: bool
    alpha: float | None
    factor: np.ndarray | None
    residual: float


def douglas_check(s, t, tol: float = 1e-10) -> DouglasReport:
    """Test range(S) <= range(T) and produce the equivalent certificates."""
    s = as_matrix(s)
    t = as_matrix(t)
    if s.shape[0] != t.shape[0]:
        raise DimensionMismatch(
            f"row counts differ: {s.shape[0]} vs {t.shape[0]}"
        )
    t_dag = pinv(t)
    p_range = t @ t_dag
    residual = operator_norm(s - p_range @ s)
    if residual > tol * max(1.0, operator_norm(s)):
        return DouglasReport(False, None, None, residual)
    factor = t_dag @ s
    ss = hermitian_part(s @ s.conj().T)
    tt = hermitian_part(t @ t.conj().T)
    best = max_psd_scale(tt, ss)
    if math.isinf(best):
        alpha = 0.0  # S = 0: every alpha works, take the infimum
    elif best == 0.0:
        alpha = math.inf  # unreachable once inclusion holds; defensive
    else:
        alpha = 1.0 / best
    return DouglasReport(True, alpha, factor, residual)


def _checked_psd_eig(m, name: str) -> tuple[np.ndarray, np.ndarray]:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise NotSquare(f"{name} must be square, got {m.shape}")
    scale = operator_norm(m)
    if operator_norm(m - m.conj().T) > 1e-10 * scale:
        raise NotHermitian(f"{name} is not Hermitian within tolerance")
    w, v = np.linalg.eigh(hermitian_part(m))
    bound = max(abs(w[0]), abs(w[-1])) if w.size else 0.0
    if w.size and w[0] < -1e-10 * bound:
        raise NotPSD(f"{name} has eigenvalue {w[0]:.3e}")
    return w, v


def psd_scale_bisection(sw, g, *, slack_scale: float = 1e-13,
                        max_doublings: int = 200) -> float:
    """Largest a with Sw - a G PSD, found purely by min-eigenvalue tests.

    Independent of the closed form in max_psd_scale; serves as its oracle.
    Returns inf when no finite a fails the test (G numerically zero).
    """
    sw = hermitian_part(sw)
    g = hermitian_part(g)
    if operator_norm(g) == 0.0:
        return math.inf
    slack = slack_scale * max(1.0, operator_norm(sw))

    def ok(a: float) -> bool:
        return float(np.linalg.eigvalsh(sw - a * g)[0]) >= -slack

    if not ok(0.0):
        return 0.0
    hi = 1.0
    doublings = 0
    while ok(hi):
        hi *= 2.0
        doublings += 1
        if doublings > max_doublings:
            return math.inf
    lo = 0.0
    for _ in range(300):
        if hi - lo <= 1e-13 * max(hi, 1.0):
            break
        mid = (lo + hi) / 2.0
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _values_agree(x: float, y: float, rel: float) -> bool:
    if math.isinf(x) or math.isinf(y):
        return math.isinf(x) and math.isinf(y)
    return abs(x - y) <= rel * max(1.0, abs(x), abs(y))


def max_psd_scale(sw, g, *, rank_tol: float = RANK_TOL) -> float:
    """sup { a >= 0 : Sw - a G is PSD } for Hermitian PSD Sw and G.

    Computed in closed form as 1 / lambda_max of G compressed by the inverse
    square root of Sw on its range, then cross-checked against the bisection
    oracle; the two must agree to 1e-8 (relative, floored at one) or
    OracleMismatch is raised.  Returns 0 when range(G) is not inside
    range(Sw), and +inf when G = 0 (the constraint is vacuous).
    """
    sw_w, sw_v = _checked_psd_eig(sw, "Sw")
    g_w, _ = _checked_psd_eig(g, "G")
    g_max = float(g_w[-1]) if g_w.size else 0.0
    if g_max <= 0.0:
        return math.inf
    s_max = float(sw_w[-1]) if sw_w.size else 0.0
    if s_max <= 0.0:
        return 0.0
    keep = sw_w > rank_tol * s_max
    if not np.any(keep):
        return 0.0
    vr = sw_v[:, keep]
    lam = sw_w[keep]
    gh = hermitian_part(g)
    leak = gh - vr @ (vr.conj().T @ gh)
    if operator_norm(leak) > rank_tol * g_max:
        return 0.0
    inv_sqrt = 1.0 / np.sqrt(lam)
    compressed = (vr.conj().T @ gh @ vr) * inv_sqrt[:, None] * inv_sqrt[None, :]
    mu = float(np.linalg.eigvalsh(hermitian_part(compressed))[-1])
    if mu <= 0.0:
        return math.inf  # G vanishes on range(Sw); defensive, G=0 handled above
    closed = 1.0 / mu
    oracle = psd_scale_bisection(sw, g)
    if not _values_agree(closed, oracle, 1e-8):
        raise OracleMismatch(
            f"closed form {closed:.12e} vs bisection {oracle:.12e}"
        )
    return closed


def projection_lemma_check(t, w: Subspace, v: Subspace,
                           tol: float = 1e-10) -> bool:
    """Whether P_W T* P_V agrees with P_W T* within ``tol``.

    Equivalent to T(W) <= V; the equivalence is exercised in the tests via
    an independent range-inclusion computation.
    """
    t = as_matrix(t)
    if t.shape != (v.ambient_dim, w.ambient_dim):
        raise DimensionMismatch(
            f"operator shape {t.shape} does not map dim {w.ambient_dim} "
            f"into dim {v.ambient_dim}"
        )
    pw = projector(w)
    pv = projector(v)
    t_adj = t.conj().T
    return operator_norm(pw @ t_adj @ pv - pw @ t_adj) <= tol
