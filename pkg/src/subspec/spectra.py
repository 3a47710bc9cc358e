"""Resolvent-norm fields on complex grids and the sets derived from them.

A field evaluates the localized resolvent lower bound at every node of a
rectangular grid.  Thresholding the field yields inner approximations of
pseudospectra, with contour polylines extracted by marching squares; point
sets are compared in Hausdorff distance; numerical ranges of finite sections
provide convex enclosures.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import NumericalError, ValidationError
from .lowernorm import SINGULAR_RTOL, block_stack
from .operators import BandOperatorSpec, adjoint
from .words import SubwordConditionReport

CHUNK_BYTES = 1 << 25


@dataclass(frozen=True)
class GridSpec:
    """Uniform rectangular grid in the complex plane, corners included."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.re_min < self.re_max):
            raise ValidationError("grid: re_min must be below re_max")
        if not (self.im_min < self.im_max):
            raise ValidationError("grid: im_min must be below im_max")
        if self.nx < 2 or self.ny < 2:
            raise ValidationError("grid: nx and ny must be at least 2")

    def re_axis(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.nx)

    def im_axis(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.ny)

    def nodes(self) -> np.ndarray:
        """Complex nodes, shape (ny, nx), row iy at im_axis()[iy]."""
        re = self.re_axis()[None, :]
        im = self.im_axis()[:, None]
        return re + 1j * im

    @property
    def bbox(self):
        return (self.re_min, self.re_max, self.im_min, self.im_max)


@dataclass
class ResolventField:
    """Per-node localized lower norms and the resolvent-norm lower bound."""

    grid: GridSpec
    nu: np.ndarray
    nu_adjoint: Optional[np.ndarray]
    bound: np.ndarray
    N: int
    fingerprint: str
    exact: bool = True
    holes: tuple = ()

    def combined(self) -> np.ndarray:
        if self.nu_adjoint is None:
            return self.nu
        return np.minimum(self.nu, self.nu_adjoint)


def _eval_chunk(stack, adj_stack, lams, out_nu, out_adj, out_smax, sl):
    nu_vals, smax_vals = _batched_min_sigma(stack, lams)
    out_nu[sl] = nu_vals
    np.maximum(out_smax[sl], smax_vals, out=out_smax[sl])
    if adj_stack is not None:
        adj_vals, adj_smax = _batched_min_sigma(adj_stack, np.conj(lams))
        out_adj[sl] = adj_vals
        np.maximum(out_smax[sl], adj_smax, out=out_smax[sl])


def _batched_min_sigma(stack, lams):
    """min sigma_min and max sigma_max per shift, over all blocks at once."""
    B, R, C = stack.mats.shape
    n = len(lams)
    mats = np.broadcast_to(stack.mats, (n, B, R, C)).copy()
    b_idx, c_idx = np.nonzero(stack.diag_rows >= 0)
    r_idx = stack.diag_rows[b_idx, c_idx]
    mats[:, b_idx, r_idx, c_idx] -= lams[:, None]
    s = np.linalg.svd(mats.reshape(n * B, R, C), compute_uv=False).reshape(n, B, -1)
    return s[:, :, -1].min(axis=1), s[:, :, 0].max(axis=1)


def resolvent_field(spec: BandOperatorSpec, grid: GridSpec, N: int,
                    skip_adjoint: bool = False, scan_range=None,
                    threads: int = 1) -> ResolventField:
    """Evaluate the resolvent lower bound at every grid node.

    Node evaluations are independent; with several threads the nodes are
    chunked and the assembled field is identical to a serial run.  Failed
    nodes become NaN holes with a recorded reason, never silently zeroed.
    """
    if threads < 1:
        raise ValidationError("threads: worker count must be at least 1")
    stack = block_stack(spec, N, scan_range)
    adj_stack = None
    if not skip_adjoint:
        adj_stack = block_stack(adjoint(spec), N, scan_range)

    nodes = grid.nodes()
    flat = nodes.ravel()
    n = flat.size
    nu = np.empty(n)
    nu_adj = np.empty(n) if adj_stack is not None else None
    smax = np.zeros(n)

    B, R, C = stack.mats.shape
    per_node = max(B, 1) * R * C * 16
    chunk = max(1, min(n, CHUNK_BYTES // per_node))
    slices = [slice(i, min(i + chunk, n)) for i in range(0, n, chunk)]

    holes = []

    def run(sl):
        try:
            _eval_chunk(stack, adj_stack, flat[sl], nu, nu_adj, smax, sl)
        except np.linalg.LinAlgError:
            for i in range(sl.start, sl.stop):
                try:
                    _eval_chunk(stack, adj_stack, flat[i:i + 1], nu, nu_adj, smax,
                                slice(i, i + 1))
                except np.linalg.LinAlgError as exc:
                    iy, ix = divmod(i, grid.nx)
                    holes.append((iy, ix, f"SVD failed: {exc}"))
                    nu[i] = np.nan
                    if nu_adj is not None:
                        nu_adj[i] = np.nan

    if threads == 1 or len(slices) == 1:
        for sl in slices:
            run(sl)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, slices))

    combined = nu if nu_adj is None else np.minimum(nu, nu_adj)
    with np.errstate(divide="ignore", invalid="ignore"):
        bound = np.where(combined > 0, 1.0 / combined, np.inf)
    singular = combined < SINGULAR_RTOL * smax
    bound = np.where(singular, np.inf, bound)
    bound = np.where(np.isnan(combined), np.nan, bound)

    return ResolventField(
        grid=grid,
        nu=nu.reshape(nodes.shape),
        nu_adjoint=None if nu_adj is None else nu_adj.reshape(nodes.shape),
        bound=bound.reshape(nodes.shape),
        N=N,
        fingerprint=spec.describe(),
        exact=stack.exact,
        holes=tuple(sorted(holes)),
    )


# ---------------------------------------------------------------------------
# Spectral point sets
# ---------------------------------------------------------------------------

@dataclass
class SpectralSet:
    """Finite point set in the complex plane, with optional contour polylines."""

    points: np.ndarray
    polylines: list = field(default_factory=list)
    provenance: str = "reference"
    bbox: Optional[tuple] = None
    theta_index: Optional[np.ndarray] = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=complex).ravel()
        if self.bbox is None and self.points.size:
            self.bbox = (float(self.points.real.min()), float(self.points.real.max()),
                         float(self.points.imag.min()), float(self.points.imag.max()))

    def __len__(self):
        return self.points.size


def _marching_squares(re_axis, im_axis, values, level):
    """Segment soup of the level set {values == level}, one pass over cells.

    Crossing points are computed once per grid edge (from the lexicographically
    smaller endpoint), so adjacent cells share bitwise-identical floats and the
    segments chain exactly.  Saddle cells are resolved toward the sublevel
    region: the two inside corners stay connected.
    """
    ny, nx = values.shape
    inside = values < level
    crossings: dict = {}

    def crossing(iy0, ix0, iy1, ix1):
        key = (iy0, ix0, iy1, ix1)
        pt = crossings.get(key)
        if pt is None:
            va, vb = values[iy0, ix0], values[iy1, ix1]
            t = (level - va) / (vb - va)
            x = re_axis[ix0] + t * (re_axis[ix1] - re_axis[ix0])
            y = im_axis[iy0] + t * (im_axis[iy1] - im_axis[iy0])
            pt = (x, y)
            crossings[key] = pt
        return pt

    segments = []
    for iy in range(ny - 1):
        for ix in range(nx - 1):
            v = (values[iy, ix], values[iy, ix + 1],
                 values[iy + 1, ix + 1], values[iy + 1, ix])
            if any(np.isnan(v)):
                continue
            a = inside[iy, ix]
            b = inside[iy, ix + 1]
            c = inside[iy + 1, ix + 1]
            d = inside[iy + 1, ix]
            code = (a << 3) | (b << 2) | (c << 1) | d
            if code in (0b0000, 0b1111):
                continue
            bottom = lambda: crossing(iy, ix, iy, ix + 1)
            right = lambda: crossing(iy, ix + 1, iy + 1, ix + 1)
            top = lambda: crossing(iy + 1, ix, iy + 1, ix + 1)
            left = lambda: crossing(iy, ix, iy + 1, ix)
            if code in (0b1000, 0b0111):
                segments.append((left(), bottom()))
            elif code in (0b0100, 0b1011):
                segments.append((bottom(), right()))
            elif code in (0b0010, 0b1101):
                segments.append((right(), top()))
            elif code in (0b0001, 0b1110):
                segments.append((top(), left()))
            elif code in (0b1100, 0b0011):
                segments.append((left(), right()))
            elif code in (0b1001, 0b0110):
                segments.append((bottom(), top()))
            elif code == 0b1010:
                # corners a and c inside: keep them connected
                segments.append((bottom(), right()))
                segments.append((top(), left()))
            elif code == 0b0101:
                # corners b and d inside: keep them connected
                segments.append((left(), bottom()))
                segments.append((right(), top()))
    return segments


def _chain_segments(segments):
    """Join shared-endpoint segments into polylines (loops or open chains)."""
    adjacency: dict = {}
    for s, (p, q) in enumerate(segments):
        adjacency.setdefault(p, []).append(s)
        adjacency.setdefault(q, []).append(s)
    used = [False] * len(segments)
    polylines = []
    starts = sorted(adjacency, key=lambda p: (len(adjacency[p]) != 1, p))
    for start in starts:
        for s in adjacency[start]:
            if used[s]:
                continue
            chain = [start]
            point = start
            seg = s
            while True:
                used[seg] = True
                p, q = segments[seg]
                point = q if p == point else p
                chain.append(point)
                nxt = [t for t in adjacency[point] if not used[t]]
                if not nxt:
                    break
                seg = nxt[0]
            polylines.append(np.array([complex(x, y) for x, y in chain]))
    return polylines


def sublevel_set(field_: ResolventField, eps: float) -> SpectralSet:
    """Grid nodes where the bound exceeds 1/eps, plus contour polylines.

    Thresholding happens on the combined lower norm (finite everywhere), which
    is equivalent to thresholding the bound and avoids interpolating through
    infinities.  An empty result is valid.
    """
    if not eps > 0:
        raise ValidationError("eps: must be positive")
    values = field_.combined()
    inside = values < eps
    inside = np.where(np.isnan(values), False, inside)
    nodes = field_.grid.nodes()
    segments = _marching_squares(field_.grid.re_axis(), field_.grid.im_axis(),
                                 values, eps)
    return SpectralSet(
        points=nodes[inside],
        polylines=_chain_segments(segments),
        provenance="sublevel",
        bbox=field_.grid.bbox,
    )


# ---------------------------------------------------------------------------
# Hausdorff distance
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HausdorffReport:
    directed_ab: float
    directed_ba: float
    distance: float


def _points_of(x) -> np.ndarray:
    pts = x.points if isinstance(x, SpectralSet) else np.asarray(x, dtype=complex)
    return np.asarray(pts, dtype=complex).ravel()


def hausdorff(a, b) -> HausdorffReport:
    """Hausdorff distance between finite point sets, exact up to float rounding.

    Nearest-neighbor queries run through a KD-tree, which is the bucketed
    acceleration of the brute-force max-min sweep.
    """
    pa, pb = _points_of(a), _points_of(b)
    if pa.size == 0 or pb.size == 0:
        raise ValidationError("points: Hausdorff distance needs non-empty sets")
    xa = np.column_stack([pa.real, pa.imag])
    xb = np.column_stack([pb.real, pb.imag])
    d_ab = float(cKDTree(xb).query(xa, k=1)[0].max())
    d_ba = float(cKDTree(xa).query(xb, k=1)[0].max())
    return HausdorffReport(d_ab, d_ba, max(d_ab, d_ba))


# ---------------------------------------------------------------------------
# Numerical range
# ---------------------------------------------------------------------------

def numerical_range_boundary(matrix: np.ndarray, angle_samples: int = 360) -> SpectralSet:
    """Support points of the numerical range of a dense square matrix.

    For each direction, the top eigenvector of the rotated Hermitian part
    yields a boundary point; the polyline is the polygon of the intersected
    supporting half-planes.  Points always lie inside the numerical range,
    and the range of a finite section lies inside the range of the operator
    it was cut from.
    """
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("matrix: must be dense square")
    if angle_samples < 3:
        raise ValidationError("angle_samples: need at least 3 directions")
    phis = 2.0 * np.pi * np.arange(angle_samples) / angle_samples
    points = np.empty(angle_samples, dtype=complex)
    support = np.empty(angle_samples)
    for t, phi in enumerate(phis):
        rotated = np.exp(-1j * phi) * a
        herm = (rotated + rotated.conj().T) / 2.0
        try:
            vals, vecs = np.linalg.eigh(herm)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"numerical range: eigh failed at phi={phi}: {exc}") from exc
        v = vecs[:, -1]
        points[t] = complex(v.conj() @ a @ v)
        support[t] = float(vals[-1])
    vertices = []
    for t in range(angle_samples):
        u = (t + 1) % angle_samples
        det = np.sin(phis[u] - phis[t])
        if abs(det) < 1e-15:
            continue
        x = (support[t] * np.sin(phis[u]) - support[u] * np.sin(phis[t])) / det
        y = (support[u] * np.cos(phis[t]) - support[t] * np.cos(phis[u])) / det
        vertices.append(complex(x, y))
    if vertices:
        vertices.append(vertices[0])
    return SpectralSet(points=points, polylines=[np.array(vertices)],
                       provenance="reference")


# ---------------------------------------------------------------------------
# Convergence studies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StudyRow:
    m: int
    eps: float
    report: Optional[HausdorffReport]
    annotation: Optional[str] = None


@dataclass
class StudyResult:
    rows: list
    condition_reports: dict
    sublevel_sets: dict          # (m, eps) -> SpectralSet
    monotone: dict               # eps -> bool, over the rows with a report

    def table(self):
        return [(r.m, r.eps,
                 r.report.directed_ab if r.report else float("nan"),
                 r.report.directed_ba if r.report else float("nan"),
                 r.report.distance if r.report else float("nan"))
                for r in self.rows]


def convergence_study(spec_for_m: Callable[[int], BandOperatorSpec],
                      ms: Sequence[int], grid: GridSpec,
                      N_rule: Callable[[int], int], eps_list: Sequence[float],
                      reference: Optional[SpectralSet] = None,
                      condition_for_m: Optional[
                          Callable[[int, int], SubwordConditionReport]] = None,
                      skip_adjoint: bool = False, threads: int = 1) -> StudyResult:
    """Sublevel sets of a sequence of approximants and their Hausdorff distances.

    Distances are taken against the reference set when one exists, otherwise
    against the final iterate.  Surrogate-condition violations are annotated
    and the computation proceeds; the monotone trend of the distances is
    reported, not enforced.
    """
    ms = list(ms)
    if not ms:
        raise ValidationError("ms: need at least one approximant index")
    condition_reports = {}
    per_m_sets = {}
    for m in ms:
        N = int(N_rule(m))
        if condition_for_m is not None:
            condition_reports[m] = condition_for_m(m, N)
        fld = resolvent_field(spec_for_m(m), grid, N,
                              skip_adjoint=skip_adjoint, threads=threads)
        for eps in eps_list:
            per_m_sets[(m, eps)] = sublevel_set(fld, eps)

    rows = []
    for m in ms:
        note = None
        rep = condition_reports.get(m)
        if rep is not None and not rep.equal:
            note = (f"subword condition violated at N={rep.N}: "
                    f"{len(rep.missing.words)} missing, {len(rep.extra.words)} extra")
        for eps in eps_list:
            own = per_m_sets[(m, eps)]
            target = reference if reference is not None else per_m_sets[(ms[-1], eps)]
            if len(own) == 0 or (target is not None and len(target) == 0):
                rows.append(StudyRow(m, eps, None,
                                     (note + "; " if note else "") + "empty sublevel set"))
                continue
            rows.append(StudyRow(m, eps, hausdorff(own, target), note))

    monotone = {}
    for eps in eps_list:
        dists = [r.report.distance for r in rows if r.eps == eps and r.report]
        monotone[eps] = all(b <= a + 1e-15 for a, b in zip(dists, dists[1:]))
    return StudyResult(rows, condition_reports, per_m_sets, monotone)
