"""Function-theoretic side of the algorithm.

The one-step sequence transform has a function-level counterpart: a coupled
pair of maps acting on matrix functions holomorphic off [alpha, inf),

    F |-> -A (I + (z-alpha)^{-1} F(z)^+ A)          (forward)
    G |-> -(z-alpha)^{-1} A (I + A^+ G(z))^+        (inverse)

realized as linear fractional transformations generated by the degree-one
2q x 2q matrix polynomials

    W_A(z) = [ (z-a)I        A      ]    V_A(z) = [   0        -A     ]
             [ -(z-a)A^+   I - A^+A ]             [ (z-a)A^+  (z-a)I  ].

Multiplying the V factors along the Schur chain of a moment sequence gives
the resolvent polynomial whose linear fractional transformation maps each
admissible parameter function to one solution of the moment problem, and onto
all of them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_matrix,
    herm_part,
    min_eig,
    pinv,
    rank_of,
)
from .measures import StieltjesFunctionRep
from .sequences import MomentSequence, classify, schur_transform

__all__ = [
    "MatrixPolynomial",
    "LftDomainError",
    "InadmissibleParameterError",
    "poly_W",
    "poly_V",
    "poly_mul",
    "resolvent_product_V",
    "resolvent_product_W",
    "lft_apply",
    "schur_stieltjes_eval",
    "inverse_schur_stieltjes_eval",
    "ParameterFunction",
    "ZeroParameter",
    "DirectParameter",
    "LowDimParameter",
    "low_dim_parameter",
    "AdmissibilityResult",
    "admissible_parameter_check",
    "default_parameter_grid",
    "SolutionFunction",
    "solution_from_parameter",
    "unique_solution",
]

LFT_COND_TOL = 1e-12


class LftDomainError(ValueError):
    """Denominator of a linear fractional transformation is (numerically) singular."""

    def __init__(self, message, z=None, argument=None):
        super().__init__(message)
        self.z = z
        self.argument = argument


class InadmissibleParameterError(ValueError):
    """Parameter function rejected; carries the violated conditions."""

    def __init__(self, message, violations):
        super().__init__(message)
        self.violations = list(violations)


# ---------------------------------------------------------------------------
# matrix polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MatrixPolynomial:
    """Matrix-coefficient polynomial sum_k coeffs[k] z^k.

    ``coeffs`` has shape (degree+1, n, n).  For the 2q x 2q resolvent
    polynomials the four q x q block slices are available as v11/v12/v21/v22.
    ``alpha`` records the base point the polynomial was built around (None for
    generic products).
    """

    coeffs: np.ndarray
    alpha: float | None = None

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 3 or c.shape[1] != c.shape[2] or c.shape[0] == 0:
            raise ValueError(f"coeffs must have shape (deg+1, n, n), got {c.shape}")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "alpha", None if self.alpha is None else float(self.alpha))

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    @property
    def q(self) -> int:
        if self.dim % 2:
            raise ValueError(f"dimension {self.dim} has no q x q block structure")
        return self.dim // 2

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def eval(self, z: complex) -> np.ndarray:
        z = complex(z)
        out = self.coeffs[-1].copy()
        for c in self.coeffs[-2::-1]:
            out = out * z + c
        return out

    __call__ = eval

    def block(self, i: int, j: int) -> "MatrixPolynomial":
        h = self.q
        return MatrixPolynomial(self.coeffs[:, i * h : (i + 1) * h, j * h : (j + 1) * h], self.alpha)

    def v11(self) -> "MatrixPolynomial":
        return self.block(0, 0)

    def v12(self) -> "MatrixPolynomial":
        return self.block(0, 1)

    def v21(self) -> "MatrixPolynomial":
        return self.block(1, 0)

    def v22(self) -> "MatrixPolynomial":
        return self.block(1, 1)


def poly_W(a, alpha: float, cfg: ToleranceConfig = DEFAULT_TOL) -> MatrixPolynomial:
    """Degree-one polynomial [[(z-a)I, A], [-(z-a)A^+, I - A^+A]]."""
    A = as_matrix(a)
    q = A.shape[0]
    if A.shape != (q, q):
        raise ValueError(f"generator must be square, got {A.shape}")
    alpha = float(alpha)
    Ainv = pinv(A, cfg)
    eye = np.eye(q)
    c0 = np.block([[-alpha * eye, A], [alpha * Ainv, eye - Ainv @ A]])
    c1 = np.block([[eye, np.zeros((q, q))], [-Ainv, np.zeros((q, q))]])
    return MatrixPolynomial(np.stack([c0, c1]), alpha)


def poly_V(a, alpha: float, cfg: ToleranceConfig = DEFAULT_TOL) -> MatrixPolynomial:
    """Degree-one polynomial [[0, -A], [(z-a)A^+, (z-a)I]]."""
    A = as_matrix(a)
    q = A.shape[0]
    if A.shape != (q, q):
        raise ValueError(f"generator must be square, got {A.shape}")
    alpha = float(alpha)
    Ainv = pinv(A, cfg)
    eye = np.eye(q)
    zero = np.zeros((q, q))
    c0 = np.block([[zero, -A], [-alpha * Ainv, -alpha * eye]])
    c1 = np.block([[zero, zero], [Ainv, eye]])
    return MatrixPolynomial(np.stack([c0, c1]), alpha)


def poly_mul(p: MatrixPolynomial, q: MatrixPolynomial) -> MatrixPolynomial:
    """Coefficient convolution: (p*q)(z) = p(z) q(z); degrees add."""
    if p.dim != q.dim:
        raise ValueError(f"dimension mismatch: {p.dim} vs {q.dim}")
    out = np.zeros((p.degree + q.degree + 1, p.dim, p.dim), dtype=complex)
    for i, ci in enumerate(p.coeffs):
        for j, cj in enumerate(q.coeffs):
            out[i + j] += ci @ cj
    alpha = p.alpha if (p.alpha is not None and p.alpha == q.alpha) else None
    return MatrixPolynomial(out, alpha)


def _schur_chain_heads(seq: MomentSequence, cfg: ToleranceConfig) -> list[np.ndarray]:
    """Leading entries s_0^(0), ..., s_0^(kappa) of the Schur-transform chain."""
    heads = []
    current = seq
    for j in range(seq.kappa + 1):
        heads.append(current[0])
        if j < seq.kappa:
            current = schur_transform(current, cfg)
    return heads


def _warn_if_not_extendable(seq: MomentSequence, cfg: ToleranceConfig):
    if not classify(seq, cfg).stieltjes_extendable:
        warnings.warn(
            "moment sequence failed the extendability test; the resolvent "
            "product is defined but loses its solution-set meaning",
            stacklevel=3,
        )


def resolvent_product_V(seq: MomentSequence, cfg: ToleranceConfig = DEFAULT_TOL) -> MatrixPolynomial:
    """Product V_{s_0^(0)} V_{s_0^(1)} ... V_{s_0^(kappa)} over the Schur chain."""
    _warn_if_not_extendable(seq, cfg)
    heads = _schur_chain_heads(seq, cfg)
    out = poly_V(heads[0], seq.alpha, cfg)
    for head in heads[1:]:
        out = poly_mul(out, poly_V(head, seq.alpha, cfg))
    return out


def resolvent_product_W(seq: MomentSequence, cfg: ToleranceConfig = DEFAULT_TOL) -> MatrixPolynomial:
    """Product W_{s_0^(kappa)} ... W_{s_0^(0)}, the mirror of the V product."""
    _warn_if_not_extendable(seq, cfg)
    heads = _schur_chain_heads(seq, cfg)
    out = poly_W(heads[-1], seq.alpha, cfg)
    for head in heads[-2::-1]:
        out = poly_mul(out, poly_W(head, seq.alpha, cfg))
    return out


# ---------------------------------------------------------------------------
# linear fractional transformations
# ---------------------------------------------------------------------------


def lft_apply(e, x, cond_tol: float = LFT_COND_TOL, z=None) -> np.ndarray:
    """Apply the transformation of the 2q x 2q value E to the q x q matrix X.

    With E = [[a, b], [c, d]] the value is (aX + b)(cX + d)^{-1}.  The
    denominator is rejected when its smallest singular value falls below
    ``cond_tol`` times its largest (or vanishes outright).
    """
    E = as_matrix(e)
    X = as_matrix(x)
    if E.shape[0] != E.shape[1] or E.shape[0] % 2:
        raise ValueError(f"transformation value must be 2q x 2q, got {E.shape}")
    q = E.shape[0] // 2
    if X.shape != (q, q):
        raise ValueError(f"argument must be {q}x{q}, got {X.shape}")
    a, b = E[:q, :q], E[:q, q:]
    c, d = E[q:, :q], E[q:, q:]
    den = c @ X + d
    s = np.linalg.svd(den, compute_uv=False)
    if s[0] == 0.0 or s[-1] < cond_tol * s[0]:
        raise LftDomainError(
            f"singular denominator in linear fractional transformation "
            f"(smallest/largest singular value = {s[-1]:.3e}/{s[0]:.3e}"
            + (f" at z = {z}" if z is not None else "")
            + ")",
            z=z,
            argument=X,
        )
    num = a @ X + b
    return np.linalg.solve(den.T, num.T).T


def schur_stieltjes_eval(f, a, alpha: float, z: complex, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Forward coupled transform: -A (I + (z-alpha)^{-1} F(z)^+ A)."""
    A = as_matrix(a)
    q = A.shape[0]
    z = complex(z)
    w = z - float(alpha)
    if w == 0:
        raise ValueError("evaluation point coincides with the base point")
    fz = as_matrix(f(z))
    return -A @ (np.eye(q) + pinv(fz, cfg) @ A / w)


def inverse_schur_stieltjes_eval(g, a, alpha: float, z: complex, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Inverse coupled transform: -(z-alpha)^{-1} A (I + A^+ G(z))^+."""
    A = as_matrix(a)
    q = A.shape[0]
    z = complex(z)
    w = z - float(alpha)
    if w == 0:
        raise ValueError("evaluation point coincides with the base point")
    gz = as_matrix(g(z))
    return -(A @ pinv(np.eye(q) + pinv(A, cfg) @ gz, cfg)) / w


# ---------------------------------------------------------------------------
# parameter functions
# ---------------------------------------------------------------------------


class ParameterFunction:
    """Evaluable parameter G: C \\ [alpha, inf) -> C^{q x q}.

    Three shapes occur: the zero function, a direct integral representation
    with vanishing constant part, and a compression U f(z) U* of a lower
    dimensional function through an isometry U.
    """

    kind = "abstract"

    @property
    def q(self) -> int:
        raise NotImplementedError

    def eval(self, z: complex) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, z: complex) -> np.ndarray:
        return self.eval(z)


@dataclass(frozen=True)
class ZeroParameter(ParameterFunction):
    """G identically zero; admissible for every last parametrization entry."""

    dim: int
    kind = "zero"

    @property
    def q(self) -> int:
        return self.dim

    def eval(self, z: complex) -> np.ndarray:
        return np.zeros((self.dim, self.dim), dtype=complex)


@dataclass(frozen=True)
class DirectParameter(ParameterFunction):
    """G given by an integral representation whose constant part is zero."""

    rep: StieltjesFunctionRep
    kind = "direct"

    def __post_init__(self):
        if float(np.linalg.norm(self.rep.gamma)) != 0.0:
            raise ValueError("direct parameters require a vanishing constant part")

    @property
    def q(self) -> int:
        return self.rep.q

    def eval(self, z: complex) -> np.ndarray:
        return self.rep(z)


@dataclass(frozen=True)
class LowDimParameter(ParameterFunction):
    """G(z) = U f(z) U* with an isometry U (U*U = I_r) and an r x r function f."""

    u: np.ndarray
    f: StieltjesFunctionRep
    kind = "low_dim"

    def __post_init__(self):
        U = as_matrix(self.u)
        r = U.shape[1]
        if self.f.q != r:
            raise ValueError(f"inner function has dimension {self.f.q}, expected {r}")
        if float(np.linalg.norm(U.conj().T @ U - np.eye(r))) > DEFAULT_TOL.eq_tol:
            raise ValueError("columns of U must be orthonormal")
        U = U.copy()
        U.setflags(write=False)
        object.__setattr__(self, "u", U)

    @property
    def q(self) -> int:
        return self.u.shape[0]

    @property
    def rank(self) -> int:
        return self.u.shape[1]

    def eval(self, z: complex) -> np.ndarray:
        return self.u @ self.f(z) @ self.u.conj().T


def low_dim_parameter(q_last, f: StieltjesFunctionRep, cfg: ToleranceConfig = DEFAULT_TOL) -> LowDimParameter:
    """Build U f U* with U an orthonormal basis of ran(q_last).

    Columns are ordered by descending singular values of ``q_last``.  The
    inner function must have dimension rank(q_last); a vanishing ``q_last``
    admits only the zero parameter and is rejected here.
    """
    Q = as_matrix(q_last)
    r = rank_of(Q, cfg)
    if r == 0:
        raise ValueError("last parametrization entry vanishes; only the zero parameter is admissible")
    if f.q != r:
        raise ValueError(f"inner function must have dimension {r}, got {f.q}")
    u_full, _, _ = np.linalg.svd(Q)
    return LowDimParameter(u_full[:, :r], f)


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------


def default_parameter_grid(alpha: float) -> list[complex]:
    """Deterministic sample grid: eight upper-half-plane points and four
    points on the real axis left of the base point."""
    alpha = float(alpha)
    upper = [0.9 + 0.7j, -1.3 + 1.1j, 2.2 + 0.4j, 3.0j, -0.5 + 2.5j, 1.7 + 1.9j, -2.8 + 0.6j, 0.3 + 4.0j]
    lower = [-0.5, -1.5, -3.0, -7.0]
    return [alpha + w for w in upper] + [alpha + x for x in lower]


@dataclass(frozen=True)
class AdmissibilityResult:
    """Boolean verdict plus the list of violated conditions (name, z, magnitude)."""

    ok: bool
    violations: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


DECAY_ORDINATES = (1e2, 1e4)


def admissible_parameter_check(
    param: ParameterFunction,
    q_last,
    grid,
    cfg: ToleranceConfig = DEFAULT_TOL,
    decay_ordinates=DECAY_ORDINATES,
) -> AdmissibilityResult:
    """Sampled admissibility verdict for a parameter function.

    Checks, on the given grid: the two-sided range coupling to the last
    parametrization entry Q (P G = G and G P = G with P the orthogonal
    projector Q^+ Q), nonnegativity of Im G at upper-half-plane points,
    nonnegativity of G at real points (callers put those left of alpha), and
    decay of ||G(iy)|| between the two decay ordinates.  A sampled check
    certifies nothing analytically; it is a numeric screen.
    """
    Q = as_matrix(q_last)
    proj = pinv(Q, cfg) @ Q
    violations = []
    for z in grid:
        z = complex(z)
        g = as_matrix(param.eval(z))
        gn = 1.0 + float(np.linalg.norm(g))
        res_r = float(np.linalg.norm(g @ proj - g))
        if res_r > cfg.eq_tol * gn:
            violations.append(("range_coupling", z, res_r))
        res_l = float(np.linalg.norm(proj @ g - g))
        if res_l > cfg.eq_tol * gn:
            violations.append(("null_coupling", z, res_l))
        if z.imag > 0:
            lam = min_eig((g - g.conj().T) / 2j)
            if lam < -cfg.psd_tol:
                violations.append(("imaginary_part_nonneg", z, -lam))
        elif z.imag == 0:
            drift = float(np.linalg.norm(g - g.conj().T))
            lam = min_eig(g)
            if drift > cfg.eq_tol:
                violations.append(("hermitian_on_real_axis", z, drift))
            if lam < -cfg.psd_tol:
                violations.append(("nonneg_on_real_axis", z, -lam))
    y_lo, y_hi = min(decay_ordinates), max(decay_ordinates)
    n_lo = float(np.linalg.norm(param.eval(1j * y_lo)))
    n_hi = float(np.linalg.norm(param.eval(1j * y_hi)))
    if n_hi > 0.1 * n_lo + cfg.eq_tol:
        violations.append(("decay_at_infinity", 1j * y_hi, n_hi))
    return AdmissibilityResult(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# solutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SolutionFunction:
    """Solution of the moment problem as resolvent LFT applied to a parameter.

    Evaluation uses the expanded coefficient polynomial; the factor list is
    kept so the factor-by-factor composition can cross-check the coefficient
    convolution.
    """

    resolvent: MatrixPolynomial
    parameter: ParameterFunction
    q: int
    alpha: float
    factors: tuple = field(default=(), repr=False)

    def eval(self, z: complex) -> np.ndarray:
        z = complex(z)
        return lft_apply(self.resolvent.eval(z), self.parameter.eval(z), z=z)

    __call__ = eval

    def eval_factorwise(self, z: complex) -> np.ndarray:
        """Apply the elementary factor transformations innermost-first."""
        if not self.factors:
            return self.eval(z)
        z = complex(z)
        x = self.parameter.eval(z)
        for factor in self.factors[::-1]:
            x = lft_apply(factor.eval(z), x, z=z)
        return x


def solution_from_parameter(
    seq: MomentSequence,
    param: ParameterFunction,
    cfg: ToleranceConfig = DEFAULT_TOL,
    grid=None,
    check: bool = True,
) -> SolutionFunction:
    """Solution generated by an admissible parameter function.

    The parameter is screened against the last element of the Schur chain on
    a sample grid; a failed screen raises :class:`InadmissibleParameterError`
    naming the violated conditions.  ``check=False`` skips the screen (the
    caller takes responsibility; with a degenerate last entry the transform
    no longer depends on the parameter at all).
    """
    if param.q != seq.q:
        raise ValueError(f"parameter dimension {param.q} does not match sequence dimension {seq.q}")
    _warn_if_not_extendable(seq, cfg)
    heads = _schur_chain_heads(seq, cfg)
    factors = tuple(poly_V(h, seq.alpha, cfg) for h in heads)
    resolvent = factors[0]
    for factor in factors[1:]:
        resolvent = poly_mul(resolvent, factor)
    if check:
        result = admissible_parameter_check(
            param, heads[-1], default_parameter_grid(seq.alpha) if grid is None else grid, cfg
        )
        if not result:
            names = sorted({name for name, _, _ in result.violations})
            raise InadmissibleParameterError(
                "parameter rejected: " + ", ".join(names), result.violations
            )
    return SolutionFunction(resolvent=resolvent, parameter=param, q=seq.q, alpha=seq.alpha, factors=factors)


def unique_solution(seq: MomentSequence, cfg: ToleranceConfig = DEFAULT_TOL) -> SolutionFunction:
    """The single solution of a completely degenerate problem.

    Equals the quotient of the upper-right and lower-right resolvent blocks;
    realized as the zero-parameter transform.  Raises when the last
    parametrization entry does not vanish.
    """
    report = classify(seq, cfg)
    if not report.completely_degenerate:
        raise ValueError(
            "sequence is not completely degenerate; the solution set is not a "
            "singleton - use solution_from_parameter"
        )
    return solution_from_parameter(seq, ZeroParameter(seq.q), cfg, check=False)
