"""Band operators with constant and potential-valued diagonals.

The entry convention is column-indexed: the diagonal at offset k contributes
A[j + k, j] = v_k(j).  Placing a potential b on the diagonal at offset g
therefore puts b_j into column j, and a translation-invariant part L adds a
constant on each of its diagonals.  Operators live on the full axis or, after
compression, on the half axis with positions 1, 2, ...
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Mapping, Optional

import numpy as np

from .errors import ValidationError
from .words import PotentialSource

FULL_AXIS = "Z"
HALF_AXIS = "N"


@dataclass(frozen=True)
class DiagonalSpec:
    """One diagonal: a constant part plus an optional potential with an index shift."""

    offset: int
    const: complex = 0j
    source: Optional[PotentialSource] = None
    shift: int = 0

    def __post_init__(self):
        object.__setattr__(self, "const", complex(self.const))
        object.__setattr__(self, "offset", int(self.offset))
        object.__setattr__(self, "shift", int(self.shift))

    def value_at(self, column: int) -> complex:
        if self.source is None:
            return self.const
        return self.const + self.source.letter(column + self.shift)

    def values_at(self, columns) -> np.ndarray:
        if self.source is None:
            return np.full(len(columns), self.const, dtype=complex)
        vals = [self.source.letter(c + self.shift) for c in columns]
        return self.const + np.asarray(vals, dtype=complex)

    def window_indices(self, col_lo: int, col_hi: int):
        """Letter indices feeding columns col_lo..col_hi, or None if constant."""
        if self.source is None:
            return None
        return tuple(self.source.letters_range(col_lo + self.shift, col_hi + self.shift))


@dataclass(frozen=True)
class BandOperatorSpec:
    """Finitely many diagonals on the axis or half axis.

    ``lambda_shift`` records the cumulative spectral shift already folded into
    the offset-0 constant.
    """

    diagonals: tuple
    domain: str = FULL_AXIS
    lambda_shift: complex = 0j

    def __post_init__(self):
        if self.domain not in (FULL_AXIS, HALF_AXIS):
            raise ValidationError("domain: must be 'Z' (axis) or 'N' (half axis)")
        diags = tuple(sorted(self.diagonals, key=lambda d: d.offset))
        offsets = [d.offset for d in diags]
        if len(set(offsets)) != len(offsets):
            raise ValidationError("diagonals: duplicate offset")
        object.__setattr__(self, "diagonals", diags)
        object.__setattr__(self, "lambda_shift", complex(self.lambda_shift))

    @property
    def band_width(self) -> int:
        return max((abs(d.offset) for d in self.diagonals), default=0)

    @property
    def self_contained(self) -> bool:
        return all(d.source.self_contained for d in self.diagonals if d.source is not None)

    @property
    def period(self) -> Optional[int]:
        """Least common period of all potentials; None if any is aperiodic."""
        p = 1
        for d in self.diagonals:
            if d.source is None:
                continue
            if d.source.period is None:
                return None
            p = p * d.source.period // math.gcd(p, d.source.period)
        return p

    def diagonal_at(self, offset: int) -> Optional[DiagonalSpec]:
        for d in self.diagonals:
            if d.offset == offset:
                return d
        return None

    def entry(self, row: int, col: int) -> complex:
        """Matrix entry A[row, col]; zero outside the band, zero off-domain."""
        if self.domain == HALF_AXIS and (row < 1 or col < 1):
            return 0j
        d = self.diagonal_at(row - col)
        return d.value_at(col) if d is not None else 0j

    def describe(self) -> str:
        parts = [self.domain]
        if self.lambda_shift != 0:
            parts.append(f"shift={self.lambda_shift}")
        for d in self.diagonals:
            bit = f"{d.offset}:const={d.const}"
            if d.source is not None:
                bit += f",src={d.source.describe()},shift={d.shift}"
            parts.append(bit)
        return ";".join(parts)


def schrodinger(L: Mapping[int, complex], gamma: int,
                potential: PotentialSource) -> BandOperatorSpec:
    """Translation-invariant part L plus the potential on the gamma-th diagonal."""
    diags = {int(k): complex(v) for k, v in L.items()}
    gamma = int(gamma)
    specs = []
    for k, v in diags.items():
        if k == gamma:
            continue
        specs.append(DiagonalSpec(k, v))
    specs.append(DiagonalSpec(gamma, diags.get(gamma, 0j), potential, 0))
    return BandOperatorSpec(tuple(specs))


def multi_diagonal(diagonals) -> BandOperatorSpec:
    """General band operator from an explicit list of diagonals."""
    return BandOperatorSpec(tuple(diagonals))


@lru_cache(maxsize=256)
def adjoint(spec: BandOperatorSpec) -> BandOperatorSpec:
    """Conjugate transpose.

    The diagonal at offset m of the result carries conj(v_{-m}(j + m)) at
    column j; on the half axis, compression and adjoint commute because both
    are index-set restrictions.
    """
    new = []
    for d in spec.diagonals:
        m = -d.offset
        src = d.source.conjugate() if d.source is not None else None
        new.append(DiagonalSpec(m, d.const.conjugate(), src,
                                m + d.shift if src is not None else 0))
    return BandOperatorSpec(tuple(new), spec.domain, spec.lambda_shift.conjugate())


def shift_lambda(spec: BandOperatorSpec, lam: complex) -> BandOperatorSpec:
    """Subtract lam on the main diagonal, creating it if absent."""
    lam = complex(lam)
    if lam == 0:
        return spec
    zero = spec.diagonal_at(0)
    rest = tuple(d for d in spec.diagonals if d.offset != 0)
    if zero is None:
        zero = DiagonalSpec(0, -lam)
    else:
        zero = replace(zero, const=zero.const - lam)
    return BandOperatorSpec(rest + (zero,), spec.domain, spec.lambda_shift + lam)


def half_axis(spec: BandOperatorSpec) -> BandOperatorSpec:
    """Compression to positions 1, 2, ... (homogeneous Dirichlet truncation)."""
    if spec.domain != FULL_AXIS:
        raise ValidationError("domain: spec is already on the half axis")
    return BandOperatorSpec(spec.diagonals, HALF_AXIS, spec.lambda_shift)


class ColumnBlock:
    """N consecutive columns of a band matrix, truncated to the banded part.

    Full-axis blocks have N + 2w rows; half-axis boundary blocks lose the rows
    above the first index.  ``window`` is the tuple of potential-letter windows
    that generated the block (the deduplication key); ``rep_col`` is one
    representative absolute column index.
    """

    def __init__(self, matrix: np.ndarray, window, rep_col: int, N: int,
                 band_width: int, boundary_j: Optional[int] = None):
        matrix = np.asarray(matrix, dtype=complex)
        matrix.setflags(write=False)
        self.matrix = matrix
        self.window = window
        self.rep_col = rep_col
        self.N = N
        self.band_width = band_width
        self.boundary_j = boundary_j

    @property
    def shape(self):
        return self.matrix.shape

    def key_bytes(self) -> bytes:
        """Content key for cross-spec block-set comparisons.

        Adding complex zero first collapses IEEE negative zeros, which
        conjugation of real data would otherwise introduce.
        """
        return (self.matrix + 0.0).tobytes()

    def __repr__(self):
        tag = f",boundary_j={self.boundary_j}" if self.boundary_j is not None else ""
        return f"ColumnBlock(shape={self.matrix.shape},rep_col={self.rep_col}{tag})"


def _full_block_matrix(spec: BandOperatorSpec, anchor: int, N: int) -> np.ndarray:
    """Block C[i, j] = A[anchor + i, anchor + j], i in 1-w..N+w, j in 1..N."""
    w = spec.band_width
    mat = np.zeros((N + 2 * w, N), dtype=complex)
    cols = range(anchor + 1, anchor + N + 1)
    j_arr = np.arange(N)
    for d in spec.diagonals:
        mat[j_arr + d.offset + w, j_arr] = d.values_at(cols)
    return mat


def _window_key(spec: BandOperatorSpec, anchor: int, N: int):
    key = []
    for d in spec.diagonals:
        if d.source is None:
            continue
        key.append((d.offset, d.window_indices(anchor + 1, anchor + N)))
    return tuple(key)


def column_blocks(spec: BandOperatorSpec, N: int, scan_range=None) -> list:
    """Deduplicated N-column blocks.

    Periodic specs are enumerated exactly over one common period; anything
    else needs an explicit scan range of anchor columns.  Blocks are keyed by
    the generating letter windows, not by matrix bytes, and returned in order
    of first appearance.
    """
    if N < 1:
        raise ValidationError("N: must be a positive integer")
    p = spec.period
    if p is not None:
        anchors = range(p)
    else:
        if scan_range is None:
            raise ValidationError("scan_range: required for aperiodic potentials")
        anchors = range(int(scan_range[0]), int(scan_range[1]) + 1)
    found: dict = {}
    for k in anchors:
        key = _window_key(spec, k, N)
        if key in found:
            continue
        found[key] = ColumnBlock(_full_block_matrix(spec, k, N), key, k + 1,
                                 N, spec.band_width)
    return list(found.values())


def boundary_blocks(spec: BandOperatorSpec, j: int, N: int) -> ColumnBlock:
    """Rectangular submatrix at columns j..j+N-1 of a half-axis operator.

    For j <= w the rows above index 1 are gone, so the block is genuinely
    smaller; for j > w it coincides with the full-axis block at the same
    columns.
    """
    if spec.domain != HALF_AXIS:
        raise ValidationError("domain: boundary blocks exist on the half axis only")
    if N < 1:
        raise ValidationError("N: must be a positive integer")
    if j < 1:
        raise ValidationError("j: column index starts at 1")
    w = spec.band_width
    if j > w:
        full = BandOperatorSpec(spec.diagonals, FULL_AXIS, spec.lambda_shift)
        mat = _full_block_matrix(full, j - 1, N)
        return ColumnBlock(mat, _window_key(spec, j - 1, N), j, N, w)
    r_max = (j + N - 1) + w
    mat = np.zeros((r_max, N), dtype=complex)
    for d in spec.diagonals:
        for q, c in enumerate(range(j, j + N)):
            r = c + d.offset
            if 1 <= r <= r_max:
                mat[r - 1, q] = d.value_at(c)
    return ColumnBlock(mat, None, j, N, w, boundary_j=j)
