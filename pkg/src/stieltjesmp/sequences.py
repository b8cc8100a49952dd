"""Matrix moment sequences on a half line [alpha, inf) and the one-step
Schur-type algorithm acting on them.

A sequence s_0, ..., s_kappa of complex q x q matrices together with the base
point alpha is the raw datum of the truncated half-line matrix moment problem.
This module provides:

* block Hankel matrices H_n = [s_{j+k}] and K_n = [s_{j+k+1}],
* the alpha-shift u_j = -alpha*s_{j-1} + s_j,
* the reciprocal sequence (a Moore-Penrose formal power series inverse),
* the one-step Schur transform t_j = -s_0 u_{j+1}^r s_0, its iterates and its
  inverse reconstruction from a head matrix,
* the Stieltjes parametrization Q_0, ..., Q_kappa (nested Schur complements),
  both directly and through the Schur chain,
* class membership tests (nonnegative definite, extendable, positive definite,
  completely degenerate, first-term dominated).

All operations are pure; sequences are immutable once constructed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_matrix,
    is_psd,
    min_eig,
    pinv,
    range_contains,
    null_contains,
)

__all__ = [
    "MomentSequence",
    "StieltjesParametrization",
    "ClassReport",
    "block_hankel_H",
    "block_hankel_K",
    "alpha_shift",
    "reciprocal_sequence",
    "schur_transform",
    "kth_schur_transform",
    "inverse_schur_transform",
    "stieltjes_parametrization",
    "stieltjes_parametrization_via_schur",
    "classify",
]


def _stack_entries(entries) -> np.ndarray:
    mats = [as_matrix(e) for e in entries]
    if not mats:
        raise ValueError("a moment sequence needs at least s_0")
    q = mats[0].shape[0]
    for m in mats:
        if m.shape != (q, q):
            raise ValueError(f"all entries must be square {q}x{q}, got {m.shape}")
    out = np.stack(mats)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class MomentSequence:
    """Base point alpha plus matrices s_0, ..., s_kappa (all q x q)."""

    alpha: float
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "entries", _stack_entries(self.entries))

    @property
    def q(self) -> int:
        return self.entries.shape[1]

    @property
    def kappa(self) -> int:
        return self.entries.shape[0] - 1

    def __len__(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, j: int) -> np.ndarray:
        return self.entries[j]

    def truncated(self, m: int) -> "MomentSequence":
        """The subsequence s_0, ..., s_m with the same base point."""
        if not 0 <= m <= self.kappa:
            raise ValueError(f"truncation order {m} outside 0..{self.kappa}")
        return MomentSequence(self.alpha, self.entries[: m + 1])


@dataclass(frozen=True)
class StieltjesParametrization:
    """The canonical Schur-complement coordinates Q_0, ..., Q_kappa of a sequence."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _stack_entries(self.entries))

    def __len__(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, j: int) -> np.ndarray:
        return self.entries[j]

    @property
    def last(self) -> np.ndarray:
        return self.entries[-1]


@dataclass(frozen=True)
class ClassReport:
    """Membership flags for a moment sequence.

    The implications posdef => extendable => nonneg hold for the underlying
    classes; numerically they are respected whenever the data are not sitting
    exactly on a tolerance boundary.
    """

    hankel_nonneg: bool
    stieltjes_nonneg: bool
    stieltjes_extendable: bool
    stieltjes_posdef: bool
    completely_degenerate: bool
    first_term_dominant: bool


def block_hankel_H(seq: MomentSequence, n: int) -> np.ndarray:
    """Block Hankel matrix with block (j, k) = s_{j+k}, 0 <= j, k <= n."""
    if n < 0 or 2 * n > seq.kappa:
        raise ValueError(f"block Hankel H_{n} needs 2n <= kappa = {seq.kappa}")
    q = seq.q
    out = np.empty(((n + 1) * q, (n + 1) * q), dtype=complex)
    for j in range(n + 1):
        for k in range(n + 1):
            out[j * q : (j + 1) * q, k * q : (k + 1) * q] = seq[j + k]
    return out


def block_hankel_K(seq: MomentSequence, n: int) -> np.ndarray:
    """Block Hankel matrix with block (j, k) = s_{j+k+1}, 0 <= j, k <= n."""
    if n < 0 or 2 * n + 1 > seq.kappa:
        raise ValueError(f"block Hankel K_{n} needs 2n+1 <= kappa = {seq.kappa}")
    q = seq.q
    out = np.empty(((n + 1) * q, (n + 1) * q), dtype=complex)
    for j in range(n + 1):
        for k in range(n + 1):
            out[j * q : (j + 1) * q, k * q : (k + 1) * q] = seq[j + k + 1]
    return out


def _shift_entries(entries: np.ndarray, alpha: float) -> np.ndarray:
    """u_j = -alpha*s_{j-1} + s_j with s_{-1} = 0, so u_0 = s_0."""
    out = entries.astype(complex).copy()
    out[1:] -= alpha * entries[:-1]
    return out


def alpha_shift(seq: MomentSequence) -> MomentSequence:
    """The shifted sequence u_0 = s_0, u_j = -alpha*s_{j-1} + s_j."""
    return MomentSequence(seq.alpha, _shift_entries(seq.entries, seq.alpha))


def reciprocal_sequence(entries, cfg: ToleranceConfig = DEFAULT_TOL) -> list[np.ndarray]:
    """Formal power series inverse built on the Moore-Penrose inverse.

    r_0 = s_0^+ and r_k = -s_0^+ * sum_{j<k} s_{k-j} r_j.
    """
    mats = [as_matrix(e) for e in entries]
    if not mats:
        return []
    head_inv = pinv(mats[0], cfg)
    out = [head_inv]
    for k in range(1, len(mats)):
        acc = np.zeros_like(head_inv @ mats[0])
        for j in range(k):
            acc += mats[k - j] @ out[j]
        out.append(-head_inv @ acc)
    return out


def schur_transform(seq: MomentSequence, cfg: ToleranceConfig = DEFAULT_TOL) -> MomentSequence:
    """One elementary algorithm step: t_j = -s_0 u_{j+1}^r s_0 for j < kappa.

    Here u is the alpha-shift of s and u^r its reciprocal sequence.  The
    result is one entry shorter and keeps the base point.
    """
    if seq.kappa < 1:
        raise ValueError("the Schur transform needs at least s_0 and s_1")
    shifted = _shift_entries(seq.entries, seq.alpha)
    rec = reciprocal_sequence(shifted, cfg)
    s0 = seq[0]
    t = [-s0 @ rec[j + 1] @ s0 for j in range(seq.kappa)]
    return MomentSequence(seq.alpha, t)


def kth_schur_transform(
    seq: MomentSequence, k: int, cfg: ToleranceConfig = DEFAULT_TOL
) -> MomentSequence:
    """k-fold application of :func:`schur_transform`; k = 0 is the identity."""
    if k < 0 or k > seq.kappa:
        raise ValueError(f"iteration count {k} outside 0..{seq.kappa}")
    out = seq
    for _ in range(k):
        out = schur_transform(out, cfg)
    return out


def inverse_schur_transform(
    t_entries, head, alpha: float, cfg: ToleranceConfig = DEFAULT_TOL
) -> MomentSequence:
    """Reconstruct a sequence whose Schur transform is ``t_entries`` and whose
    first entry is ``head``.

    The recursion, with r^b the alpha-shift of the r-sequence built so far:

        r_0 = A,
        r_j = alpha^j A
              + sum_{l=1}^{j} alpha^{j-l} A A^+ [ sum_{k=0}^{l-1} t_{l-k-1} A^+ r_k^b ].

    An empty ``t_entries`` is legal and yields the one-term sequence (A).
    """
    a = as_matrix(head)
    q = a.shape[0]
    if a.shape != (q, q):
        raise ValueError(f"head matrix must be square, got {a.shape}")
    t = [as_matrix(x) for x in t_entries]
    for x in t:
        if x.shape != (q, q):
            raise ValueError(f"t entries must be {q}x{q}, got {x.shape}")
    alpha = float(alpha)
    a_inv = pinv(a, cfg)
    proj = a @ a_inv
    r = [a]
    r_shift = [a]  # r_k^b accumulated alongside r
    for j in range(1, len(t) + 1):
        acc = (alpha**j) * a
        for l in range(1, j + 1):
            inner = np.zeros((q, q), dtype=complex)
            for k in range(l):
                inner += t[l - k - 1] @ a_inv @ r_shift[k]
            acc = acc + (alpha ** (j - l)) * (proj @ inner)
        r.append(acc)
        r_shift.append(-alpha * r[j - 1] + r[j])
    return MomentSequence(alpha, r)


def _col_block(seq: MomentSequence, lo: int, hi: int) -> np.ndarray:
    """Column stack of s_lo, ..., s_hi (shape (hi-lo+1)q x q)."""
    return np.concatenate([seq[j] for j in range(lo, hi + 1)], axis=0)


def _row_block(seq: MomentSequence, lo: int, hi: int) -> np.ndarray:
    """Row stack of s_lo, ..., s_hi (shape q x (hi-lo+1)q)."""
    return np.concatenate([seq[j] for j in range(lo, hi + 1)], axis=1)


def stieltjes_parametrization(
    seq: MomentSequence, cfg: ToleranceConfig = DEFAULT_TOL
) -> StieltjesParametrization:
    """Schur-complement coordinates of the sequence.

    Q_0 = s_0 and Q_1 = -alpha*s_0 + s_1; for k >= 1

        Q_{2k}   = s_{2k} - z_{k,2k-1} H_{k-1}^+ y_{k,2k-1},
        Q_{2k+1} = u_{2k+1} - zu_k (-alpha*H_{k-1} + K_{k-1})^+ yu_k,

    where y/z are column/row stacks of consecutive entries, u is the shifted
    sequence, and zu_k / yu_k stack u_{k+1..2k} (equivalently the shifted
    stacks -alpha*z_{k,2k-1} + z_{k+1,2k} and so on).  Degenerate Hankel
    blocks are expected; the pseudoinverse handles them.
    """
    alpha = seq.alpha
    out = [seq[0].astype(complex)]
    if seq.kappa >= 1:
        out.append(-alpha * seq[0] + seq[1])
    for j in range(2, seq.kappa + 1):
        k = j // 2
        if j % 2 == 0:
            h = block_hankel_H(seq, k - 1)
            z = _row_block(seq, k, 2 * k - 1)
            y = _col_block(seq, k, 2 * k - 1)
            out.append(seq[2 * k] - z @ pinv(h, cfg) @ y)
        else:
            hk = -alpha * block_hankel_H(seq, k - 1) + block_hankel_K(seq, k - 1)
            z = -alpha * _row_block(seq, k, 2 * k - 1) + _row_block(seq, k + 1, 2 * k)
            y = -alpha * _col_block(seq, k, 2 * k - 1) + _col_block(seq, k + 1, 2 * k)
            head = -alpha * seq[2 * k] + seq[2 * k + 1]
            out.append(head - z @ pinv(hk, cfg) @ y)
    return StieltjesParametrization(out)


def stieltjes_parametrization_via_schur(
    seq: MomentSequence, cfg: ToleranceConfig = DEFAULT_TOL
) -> StieltjesParametrization:
    """Leading entries of the Schur-transform chain: entry j is s_0 of the
    j-th transform.  Agrees with :func:`stieltjes_parametrization` on
    extendable nonnegative definite sequences; elsewhere no agreement is
    promised.
    """
    out = []
    current = seq
    for j in range(seq.kappa + 1):
        out.append(current[0])
        if j < seq.kappa:
            current = schur_transform(current, cfg)
    return StieltjesParametrization(out)


def _shifted_tail(seq: MomentSequence) -> MomentSequence | None:
    """The sequence -alpha*s_j + s_{j+1}, j = 0..kappa-1 (None when kappa = 0)."""
    if seq.kappa < 1:
        return None
    u = -seq.alpha * seq.entries[:-1] + seq.entries[1:]
    return MomentSequence(seq.alpha, u)


def classify(seq: MomentSequence, cfg: ToleranceConfig = DEFAULT_TOL) -> ClassReport:
    """Membership report for the half-line moment problem classes.

    * ``hankel_nonneg``: the largest defined H_n is nonnegative Hermitian.
    * ``stieltjes_nonneg``: H_n and the Hankel built from -alpha*s_j + s_{j+1}
      (indexed per the parity of kappa) are both nonnegative Hermitian.
    * ``stieltjes_extendable``: all Q_j nonnegative and ran(Q_{j+1}) inside
      ran(Q_j) for every consecutive pair.  This is one range link more than
      the nonnegative-definite characterization; it is a documented working
      criterion, not a theorem, validated against discrete-measure data.
    * ``stieltjes_posdef``: all Q_j positive definite.
    * ``completely_degenerate``: the last Q vanishes within eq_tol.
    * ``first_term_dominant``: nul(s_0) inside every nul(s_j) and every
      ran(s_j) inside ran(s_0).
    """
    hankel_ok = is_psd(block_hankel_H(seq, seq.kappa // 2), cfg)

    tail = _shifted_tail(seq)
    if tail is None:
        shifted_ok = True
    else:
        shifted_ok = is_psd(block_hankel_H(tail, tail.kappa // 2), cfg)
    nonneg = hankel_ok and shifted_ok

    par = stieltjes_parametrization(seq, cfg)
    q_psd = [is_psd(par[j], cfg) for j in range(len(par))]
    links = [
        range_contains(par[j], par[j + 1], cfg) for j in range(len(par) - 1)
    ]
    extendable = all(q_psd) and all(links)
    posdef = all(q_psd) and all(min_eig(par[j]) > cfg.psd_tol for j in range(len(par)))
    degenerate = float(np.linalg.norm(par.last)) <= cfg.eq_tol

    dominant = all(
        null_contains(seq[0], seq[j], cfg) and range_contains(seq[0], seq[j], cfg)
        for j in range(len(seq))
    )

    return ClassReport(
        hankel_nonneg=hankel_ok,
        stieltjes_nonneg=nonneg,
        stieltjes_extendable=extendable,
        stieltjes_posdef=posdef,
        completely_degenerate=degenerate,
        first_term_dominant=dominant,
    )
