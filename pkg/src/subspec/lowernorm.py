"""Localized lower norms from smallest singular values of column blocks.

The lower norm of a band operator is approached from above by restricting to
vectors supported on N consecutive positions, which is the same as minimizing
the smallest singular value over the N-column blocks.  Combining the operator
with its adjoint turns that into a lower bound on the resolvent norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import NumericalError, ValidationError
from .operators import (
    FULL_AXIS,
    HALF_AXIS,
    BandOperatorSpec,
    ColumnBlock,
    adjoint,
    boundary_blocks,
    column_blocks,
)

SINGULAR_RTOL = 1e-12


@dataclass(frozen=True)
class LowerNormResult:
    """Localized lower norm at one shift.

    ``combined`` is the minimum of the present components and the quantity
    whose reciprocal bounds the resolvent norm from below.  Values below
    SINGULAR_RTOL times the largest singular value seen are reported as
    computed but flagged ``numerically_singular``.
    """

    nu_N: float
    nu_N_adjoint: Optional[float]
    combined: float
    N: int
    lam: complex
    block_count: int
    exact: bool = True
    numerically_singular: bool = False


def smallest_singular_value(block: ColumnBlock) -> float:
    """Smallest singular value of one dense block via full decomposition."""
    if block.matrix.size == 0:
        raise ValidationError("block: empty matrix")
    try:
        s = np.linalg.svd(block.matrix, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"block rep_col={block.rep_col}: SVD failed: {exc}") from exc
    return float(s[-1])


@dataclass(frozen=True)
class BlockStack:
    """Shift-ready stack of blocks with per-block main-diagonal positions.

    Boundary blocks are padded with zero rows to a common height; zero rows do
    not change singular values.  ``diag_rows[b, q]`` is the row of the entry
    A[c, c] in block b's column q, or -1 where that entry was clipped away.
    """

    mats: np.ndarray       # (B, R, C) complex, read-only
    diag_rows: np.ndarray  # (B, C) int
    rep_cols: tuple
    exact: bool

    @property
    def count(self) -> int:
        return self.mats.shape[0]

    def shifted(self, lam: complex) -> np.ndarray:
        out = np.array(self.mats, copy=True)
        if lam != 0:
            b_idx, c_idx = np.nonzero(self.diag_rows >= 0)
            out[b_idx, self.diag_rows[b_idx, c_idx], c_idx] -= lam
        return out


def _stack_from_blocks(blocks, N: int, w: int, exact: bool) -> BlockStack:
    rows = N + 2 * w
    mats = np.zeros((len(blocks), rows, N), dtype=complex)
    diag_rows = np.full((len(blocks), N), -1, dtype=int)
    for b, blk in enumerate(blocks):
        h = blk.matrix.shape[0]
        mats[b, :h, :] = blk.matrix
        if blk.boundary_j is None:
            # Full block: entry A[c, c] sits w rows below the top of column q.
            diag_rows[b, :] = np.arange(N) + w
        else:
            j = blk.boundary_j
            for q in range(N):
                r = (j + q) - 1  # row index of A[c, c] with c = j + q
                if r < h:
                    diag_rows[b, q] = r
    mats.setflags(write=False)
    diag_rows.setflags(write=False)
    return BlockStack(mats, diag_rows, tuple(blk.rep_col for blk in blocks), exact)


@lru_cache(maxsize=64)
def block_stack(spec: BandOperatorSpec, N: int, scan_range=None) -> BlockStack:
    """Shift-independent block skeletons for a spec; cached per (spec, N, scan)."""
    if spec.domain == FULL_AXIS:
        blocks = column_blocks(spec, N, scan_range)
        return _stack_from_blocks(blocks, N, spec.band_width, spec.period is not None)
    w = spec.band_width
    blocks = [boundary_blocks(spec, j, N) for j in range(1, w + 1)]
    interior_scan = scan_range
    if interior_scan is not None:
        interior_scan = (max(int(interior_scan[0]), w), int(interior_scan[1]))
    full = BandOperatorSpec(spec.diagonals, FULL_AXIS, spec.lambda_shift)
    blocks.extend(column_blocks(full, N, interior_scan))
    return _stack_from_blocks(blocks, N, w, spec.period is not None)


def min_sigma(stack: BlockStack, lam: complex):
    """(min sigma_min, max sigma_max) over the stack shifted by lam."""
    mats = stack.shifted(lam)
    try:
        s = np.linalg.svd(mats, compute_uv=False)
    except np.linalg.LinAlgError:
        smin, smax = np.inf, 0.0
        for b in range(mats.shape[0]):
            try:
                sb = np.linalg.svd(mats[b], compute_uv=False)
            except np.linalg.LinAlgError as exc:
                raise NumericalError(
                    f"block rep_col={stack.rep_cols[b]}: SVD failed at "
                    f"lambda={lam}: {exc}") from exc
            smin = min(smin, float(sb[-1]))
            smax = max(smax, float(sb[0]))
        return smin, smax
    return float(s[:, -1].min()), float(s[:, 0].max())


def _nu(spec: BandOperatorSpec, N: int, lam: complex, skip_adjoint: bool,
        scan_range) -> LowerNormResult:
    stack = block_stack(spec, N, scan_range)
    nu, smax = min_sigma(stack, lam)
    nu_adj = None
    count = stack.count
    if not skip_adjoint:
        adj_stack = block_stack(adjoint(spec), N, scan_range)
        nu_adj, smax_adj = min_sigma(adj_stack, complex(lam).conjugate())
        smax = max(smax, smax_adj)
        count += adj_stack.count
    combined = nu if nu_adj is None else min(nu, nu_adj)
    return LowerNormResult(
        nu_N=nu,
        nu_N_adjoint=nu_adj,
        combined=combined,
        N=N,
        lam=complex(lam),
        block_count=count,
        exact=stack.exact,
        numerically_singular=bool(combined < SINGULAR_RTOL * smax),
    )


def nu_N(spec: BandOperatorSpec, N: int, lam: complex = 0j,
         skip_adjoint: bool = False, scan_range=None) -> LowerNormResult:
    """Localized lower norm of spec - lam on the axis.

    Skipping the adjoint is legitimate only in the large-N limit for
    self-contained operators; at finite N it is an approximation toggle, so
    both sides are computed by default.
    """
    if spec.domain != FULL_AXIS:
        raise ValidationError("domain: use nu_N_half_axis for half-axis operators")
    if N < 1:
        raise ValidationError("N: must be a positive integer")
    return _nu(spec, N, lam, skip_adjoint, scan_range)


def nu_N_half_axis(spec: BandOperatorSpec, N: int, lam: complex = 0j,
                   skip_adjoint: bool = False, scan_range=None) -> LowerNormResult:
    """Localized lower norm on the half axis.

    The minimum runs over the w boundary blocks (columns touching the edge,
    rows clipped at index 1) together with the interior blocks, which agree
    with full-axis blocks.  The adjoint is handled identically on the
    compressed adjoint.
    """
    if spec.domain != HALF_AXIS:
        raise ValidationError("domain: spec is not on the half axis")
    if N < 1:
        raise ValidationError("N: must be a positive integer")
    return _nu(spec, N, lam, skip_adjoint, scan_range)


def resolvent_lower_bound(spec: BandOperatorSpec, N: int, lam: complex,
                          skip_adjoint: bool = False, scan_range=None) -> float:
    """1 / combined localized lower norm; a lower bound on the resolvent norm.

    Infinite when the combined value vanishes within the singular tolerance.
    The derived sublevel sets are therefore inner approximations that grow
    toward the true pseudospectrum as N increases.
    """
    fn = nu_N if spec.domain == FULL_AXIS else nu_N_half_axis
    res = fn(spec, N, lam, skip_adjoint=skip_adjoint, scan_range=scan_range)
    if res.combined == 0.0 or res.numerically_singular:
        return float("inf")
    return 1.0 / res.combined


def block_sigma_table(spec: BandOperatorSpec, N: int, lam: complex = 0j,
                      scan_range=None) -> list:
    """Per-block (rep_col, sigma_min) diagnostic rows."""
    stack = block_stack(spec, N, scan_range)
    mats = stack.shifted(lam)
    rows = []
    for b in range(mats.shape[0]):
        try:
            s = np.linalg.svd(mats[b], compute_uv=False)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(
                f"block rep_col={stack.rep_cols[b]}: SVD failed: {exc}") from exc
        rows.append((stack.rep_cols[b], float(s[-1])))
    return rows
