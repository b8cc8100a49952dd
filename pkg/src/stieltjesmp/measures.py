"""Finitely atomic nonnegative Hermitian matrix measures on [alpha, inf).

These measures are the exactly computable oracle of the whole package: their
power moments and Cauchy/Stieltjes transforms are finite sums, so every
theorem about solutions of the moment problem can be exercised against them
by brute force.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, ToleranceConfig, as_matrix, is_psd
from .sequences import MomentSequence

__all__ = [
    "PoleError",
    "DiscreteMeasure",
    "StieltjesFunctionRep",
    "moments",
    "stieltjes_transform_eval",
    "stieltjes_function_eval",
]


class PoleError(ValueError):
    """Raised when an evaluation point collides with an atom of the measure."""


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely many atoms t_k >= alpha with nonnegative Hermitian q x q weights.

    Atoms are normalized on construction: sorted ascending in t, zero weights
    dropped.  Duplicate atom positions or weights failing the nonnegativity
    test are rejected.
    """

    alpha: float
    atoms: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        cleaned = []
        for t, w in self.atoms:
            t = float(t)
            w = as_matrix(w)
            if w.shape[0] != w.shape[1]:
                raise ValueError(f"atom weight must be square, got {w.shape}")
            if np.linalg.norm(w) == 0.0:
                continue
            if t < self.alpha:
                raise ValueError(f"atom at {t} lies below the base point {self.alpha}")
            if not is_psd(w):
                raise ValueError(f"atom weight at {t} is not nonnegative Hermitian")
            cleaned.append((t, w))
        cleaned.sort(key=lambda tw: tw[0])
        positions = [t for t, _ in cleaned]
        if len(set(positions)) != len(positions):
            raise ValueError("atom positions must be pairwise distinct")
        qs = {w.shape[0] for _, w in cleaned}
        if len(qs) > 1:
            raise ValueError(f"atom weights have mixed dimensions: {sorted(qs)}")
        object.__setattr__(self, "atoms", tuple(cleaned))

    @property
    def q(self) -> int:
        if self.atoms:
            return self.atoms[0][1].shape[0]
        raise ValueError("dimension of an empty measure is undetermined; pass q explicitly")

    def total_mass(self, q: int | None = None) -> np.ndarray:
        dim = self.atoms[0][1].shape[0] if self.atoms else q
        if dim is None:
            raise ValueError("empty measure: supply q for the zero mass matrix")
        out = np.zeros((dim, dim), dtype=complex)
        for _, w in self.atoms:
            out += w
        return out


def zero_measure(alpha: float) -> DiscreteMeasure:
    """The measure with no atoms."""
    return DiscreteMeasure(alpha, ())


def moments(mu: DiscreteMeasure, m: int, q: int | None = None) -> MomentSequence:
    """Power moments s_j = sum_k t_k^j M_k for j = 0..m, carrying alpha over.

    ``q`` is only needed for the empty measure, whose dimension is otherwise
    undetermined.
    """
    if m < 0:
        raise ValueError("moment order must be nonnegative")
    dim = mu.atoms[0][1].shape[0] if mu.atoms else q
    if dim is None:
        raise ValueError("empty measure: supply q to fix the matrix dimension")
    entries = [np.zeros((dim, dim), dtype=complex) for _ in range(m + 1)]
    for t, w in mu.atoms:
        power = 1.0
        for j in range(m + 1):
            entries[j] = entries[j] + power * w
            power *= t
    return MomentSequence(mu.alpha, entries)


def stieltjes_transform_eval(
    mu: DiscreteMeasure, z: complex, q: int | None = None, pole_tol: float = DEFAULT_TOL.eq_tol
) -> np.ndarray:
    """Cauchy-type transform sum_k (t_k - z)^{-1} M_k at a point off [alpha, inf)."""
    z = complex(z)
    dim = mu.atoms[0][1].shape[0] if mu.atoms else q
    if dim is None:
        raise ValueError("empty measure: supply q to fix the matrix dimension")
    out = np.zeros((dim, dim), dtype=complex)
    for t, w in mu.atoms:
        d = t - z
        if abs(d) <= pole_tol:
            raise PoleError(f"evaluation point {z} collides with the atom at {t}")
        out += w / d
    return out


def stieltjes_transform(mu: DiscreteMeasure, q: int | None = None):
    """The transform as a callable z -> matrix (handy for the verification API)."""
    return lambda z: stieltjes_transform_eval(mu, z, q=q)


@dataclass(frozen=True)
class StieltjesFunctionRep:
    """Integral representation gamma + sum_k (1 + t_k - alpha)/(t_k - z) M_k.

    ``gamma`` must be nonnegative Hermitian; functions of this form are
    exactly the half-line Stieltjes functions with finitely atomic measure part.
    """

    gamma: np.ndarray
    measure: DiscreteMeasure

    def __post_init__(self):
        g = as_matrix(self.gamma)
        if g.shape[0] != g.shape[1]:
            raise ValueError(f"gamma must be square, got {g.shape}")
        if not is_psd(g):
            raise ValueError("gamma must be nonnegative Hermitian")
        if self.measure.atoms and self.measure.atoms[0][1].shape[0] != g.shape[0]:
            raise ValueError("gamma and measure weights have different dimensions")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "gamma", g)

    @property
    def q(self) -> int:
        return self.gamma.shape[0]

    @property
    def alpha(self) -> float:
        return self.measure.alpha

    def __call__(self, z: complex) -> np.ndarray:
        return stieltjes_function_eval(self, z)


def stieltjes_function_eval(
    rep: StieltjesFunctionRep, z: complex, pole_tol: float = DEFAULT_TOL.eq_tol
) -> np.ndarray:
    """Evaluate gamma + sum_k (1 + t_k - alpha)/(t_k - z) M_k."""
    z = complex(z)
    alpha = rep.measure.alpha
    out = rep.gamma.astype(complex).copy()
    for t, w in rep.measure.atoms:
        d = t - z
        if abs(d) <= pole_tol:
            raise PoleError(f"evaluation point {z} collides with the atom at {t}")
        out += ((1.0 + t - alpha) / d) * w
    return out
