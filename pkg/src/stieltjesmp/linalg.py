"""Dense complex matrix kernel: Moore-Penrose pseudoinverse, rank, and
subspace/definiteness predicates with explicit tolerances.

Everything here works on plain ``numpy`` arrays of ``complex128``.  All
predicates take a :class:`ToleranceConfig`; the exact algebraic identities of
the underlying theory hold only in exact arithmetic, so every cutoff is
explicit and overridable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "as_matrix",
    "herm_part",
    "pinv",
    "rank_of",
    "range_contains",
    "null_contains",
    "is_hermitian",
    "is_psd",
    "min_eig",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical cutoffs used by all matrix predicates.

    rank_rel_tol: singular values below ``rank_rel_tol * sigma_max`` count as
        zero (SVD truncation and rank decisions).
    psd_tol: most negative eigenvalue still accepted as "nonnegative".
    eq_tol: entrywise/Frobenius bound for algebraic identity checks.
    """

    rank_rel_tol: float = 1e-10
    psd_tol: float = 1e-9
    eq_tol: float = 1e-9

    def __post_init__(self):
        for name in ("rank_rel_tol", "psd_tol", "eq_tol"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise ValueError(f"{name} must lie strictly between 0 and 1, got {value!r}")


DEFAULT_TOL = ToleranceConfig()


def as_matrix(a) -> np.ndarray:
    """Coerce input to a finite 2-D complex128 array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    elif m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    if m.size and not np.all(np.isfinite(m.view(float))):
        raise ValueError("matrix has non-finite entries")
    return m


def herm_part(a) -> np.ndarray:
    """Hermitian part (A + A*)/2."""
    m = as_matrix(a)
    return 0.5 * (m + m.conj().T)


def pinv(a, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse via SVD with relative singular value cutoff.

    Singular values below ``cfg.rank_rel_tol * sigma_max`` are treated as zero.
    A p x 0 or 0 x q matrix yields the empty matrix of transposed shape.
    """
    m = as_matrix(a)
    if m.size == 0:
        return np.zeros((m.shape[1], m.shape[0]), dtype=complex)
    return np.linalg.pinv(m, rcond=cfg.rank_rel_tol)


def rank_of(a, cfg: ToleranceConfig = DEFAULT_TOL) -> int:
    """Number of singular values >= rank_rel_tol * sigma_max (0 for the zero matrix)."""
    m = as_matrix(a)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    smax = s[0] if len(s) else 0.0
    if smax == 0.0:
        return 0
    return int(np.count_nonzero(s >= cfg.rank_rel_tol * smax))


def range_contains(a, c, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff ran(C) is contained in ran(A), tested via A A^+ C = C."""
    ma, mc = as_matrix(a), as_matrix(c)
    if ma.shape[0] != mc.shape[0]:
        raise ValueError(f"row counts differ: {ma.shape[0]} vs {mc.shape[0]}")
    residual = ma @ pinv(ma, cfg) @ mc - mc
    return float(np.linalg.norm(residual)) <= cfg.eq_tol * (1.0 + float(np.linalg.norm(mc)))


def null_contains(a, b, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff nul(A) is contained in nul(B), tested via B A^+ A = B."""
    ma, mb = as_matrix(a), as_matrix(b)
    if ma.shape[1] != mb.shape[1]:
        raise ValueError(f"column counts differ: {ma.shape[1]} vs {mb.shape[1]}")
    residual = mb @ pinv(ma, cfg) @ ma - mb
    return float(np.linalg.norm(residual)) <= cfg.eq_tol * (1.0 + float(np.linalg.norm(mb)))


def is_hermitian(a, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff ||A - A*|| <= eq_tol (Frobenius norm)."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix is not square: {m.shape}")
    return float(np.linalg.norm(m - m.conj().T)) <= cfg.eq_tol


def is_psd(a, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Nonnegative-Hermitian test.

    Requires ||A - A*|| <= eq_tol (drift beyond that fails outright, it is not
    repaired) and the smallest eigenvalue of the Hermitian part >= -psd_tol.
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix is not square: {m.shape}")
    if m.size == 0:
        return True
    if float(np.linalg.norm(m - m.conj().T)) > cfg.eq_tol:
        return False
    eigs = np.linalg.eigvalsh(herm_part(m))
    return float(eigs[0]) >= -cfg.psd_tol


def min_eig(a) -> float:
    """Smallest eigenvalue of the Hermitian part; useful for violation magnitudes."""
    m = herm_part(a)
    if m.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(m)[0])
