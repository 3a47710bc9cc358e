import numpy as np
import pytest

import subspec as ss
from subspec.errors import ValidationError
from conftest import laplacian, nested_subword_pair, random_periodic_spec, shift_operator


class TestGridSpec:
    def test_nodes_cover_corners(self):
        grid = ss.GridSpec(-1, 1, -2, 2, 3, 5)
        nodes = grid.nodes()
        assert nodes.shape == (5, 3)
        assert nodes[0, 0] == -1 - 2j
        assert nodes[-1, -1] == 1 + 2j

    def test_validation(self):
        with pytest.raises(ValidationError):
            ss.GridSpec(1, -1, 0, 1, 4, 4)
        with pytest.raises(ValidationError):
            ss.GridSpec(-1, 1, 0, 1, 1, 4)


class TestResolventField:
    def test_zero_operator_exact_value(self):
        zero = ss.multi_diagonal([ss.DiagonalSpec(0, 0)])
        grid = ss.GridSpec(0.5, 1.5, -0.5, 0.5, 3, 3)
        fld = ss.resolvent_field(zero, grid, 4)
        node = grid.nodes()[1, 1]
        assert node == 1
        assert fld.bound[1, 1] == pytest.approx(1.0)

    def test_shift_inner_bound(self):
        grid = ss.GridSpec(-2, 2, -2, 2, 30, 30)
        fld = ss.resolvent_field(shift_operator(), grid, 8)
        truth = 1 / np.abs(1 - np.abs(grid.nodes()))
        finite = np.isfinite(fld.bound)
        assert np.all(fld.bound[finite] <= truth[finite] + 1e-8)

    def test_laplacian_bound_grows_toward_distance(self):
        grid = ss.GridSpec(-0.5, 0.5, 2.5, 3.5, 3, 3)  # centered at 3i
        vals = [ss.resolvent_field(laplacian(), grid, n).bound[1, 1] for n in (4, 8, 16)]
        assert vals[0] <= vals[1] <= vals[2] <= 1 / 3 + 1e-10

    def test_laplacian_inner_bound_nodewise(self):
        grid = ss.GridSpec(-3, 3, -2, 2, 25, 17)
        fld = ss.resolvent_field(laplacian(), grid, 8)
        nodes = grid.nodes()
        dist = np.abs(nodes - np.clip(nodes.real, -2, 2))
        finite = np.isfinite(fld.bound) & (dist > 0)
        assert np.all(fld.bound[finite] <= 1 / dist[finite] + 1e-8)

    def test_bound_consistent_with_components(self, rng):
        spec = random_periodic_spec(rng, period=3, width=1)
        grid = ss.GridSpec(-2, 2, -2, 2, 6, 6)
        fld = ss.resolvent_field(spec, grid, 6)
        combined = np.minimum(fld.nu, fld.nu_adjoint)
        finite = np.isfinite(fld.bound)
        assert np.allclose(fld.bound[finite], 1 / combined[finite])

    def test_monotone_in_window_length(self, rng):
        spec = random_periodic_spec(rng, period=4, width=1)
        grid = ss.GridSpec(-2, 2, -2, 2, 8, 8)
        prev = None
        for n in (4, 8, 16):
            bound = ss.resolvent_field(spec, grid, n).bound
            if prev is not None:
                assert np.all(bound >= prev - 1e-12)
            prev = bound

    def test_subword_inclusion_nests_fields(self, rng):
        N = 8
        grid = ss.GridSpec(-4, 4, -4, 4, 10, 10)
        for _ in range(3):
            b, c = nested_subword_pair(rng, N)
            fb = ss.resolvent_field(ss.schrodinger({1: 1, -1: 1}, 0, b), grid, N)
            fc = ss.resolvent_field(ss.schrodinger({1: 1, -1: 1}, 0, c), grid, N)
            ok = np.isfinite(fb.bound) & np.isfinite(fc.bound)
            assert np.all(fb.bound[ok] <= fc.bound[ok] + 1e-12)

    def test_self_adjoint_conjugate_symmetry(self, rng):
        letters = tuple(float(x) for x in rng.uniform(-2, 2, 3))
        b = ss.PeriodicWord(ss.FiniteWord((0, 1, 2), ss.Alphabet(letters)))
        spec = laplacian(b)
        grid = ss.GridSpec(-3, 3, -1, 1, 9, 9)  # symmetric grid about the real axis
        fld = ss.resolvent_field(spec, grid, 6)
        assert np.allclose(fld.bound, fld.bound[::-1, :], rtol=1e-12, atol=1e-12)

    def test_threads_match_serial(self, rng):
        spec = random_periodic_spec(rng, period=3, width=1)
        grid = ss.GridSpec(-2, 2, -2, 2, 12, 12)
        one = ss.resolvent_field(spec, grid, 6, threads=1)
        four = ss.resolvent_field(spec, grid, 6, threads=4)
        assert np.array_equal(one.nu, four.nu)
        assert np.array_equal(one.bound, four.bound)

    def test_half_axis_field(self):
        plus = ss.half_axis(laplacian())
        grid = ss.GridSpec(-3, 3, -1, 1, 7, 3)
        fld = ss.resolvent_field(plus, grid, 4)
        assert np.all(np.isfinite(fld.bound) | np.isinf(fld.bound))


class TestSublevelSet:
    def test_all_nodes_at_huge_eps(self):
        grid = ss.GridSpec(-2, 2, -2, 2, 8, 8)
        fld = ss.resolvent_field(shift_operator(), grid, 8)
        sset = ss.sublevel_set(fld, 1e9)
        assert len(sset) == 64

    def test_shift_annulus(self):
        grid = ss.GridSpec(-2, 2, -2, 2, 40, 40)
        fld = ss.resolvent_field(shift_operator(), grid, 16)
        sset = ss.sublevel_set(fld, 0.5)
        radii = np.abs(sset.points)
        assert len(sset) > 0
        assert radii.min() > 0.5 - 1e-9
        assert radii.max() < 1.5 + 1e-9
        assert len(sset.polylines) >= 2

    def test_laplacian_sublevel_stays_near_spectrum(self):
        grid = ss.GridSpec(-3, 3, -1, 1, 31, 11)
        fld = ss.resolvent_field(laplacian(), grid, 32)
        sset = ss.sublevel_set(fld, 0.1)
        assert len(sset) > 0
        dist = np.abs(sset.points - np.clip(sset.points.real, -2, 2))
        assert np.all(dist < 0.1)

    def test_empty_result_is_valid(self):
        grid = ss.GridSpec(5, 6, 5, 6, 4, 4)  # far from the unit circle
        fld = ss.resolvent_field(shift_operator(), grid, 8)
        sset = ss.sublevel_set(fld, 1e-3)
        assert len(sset) == 0 and sset.polylines == []

    def test_contour_points_near_level(self):
        grid = ss.GridSpec(-2, 2, -2, 2, 60, 60)
        fld = ss.resolvent_field(shift_operator(), grid, 16)
        eps = 0.4
        sset = ss.sublevel_set(fld, eps)
        cell = 4 / 59
        for poly in sset.polylines:
            radii = np.abs(poly)
            inner_ok = np.abs(radii - (1 - eps)) < 2 * cell
            outer_ok = np.abs(radii - (1 + eps)) < 2 * cell
            assert np.all(inner_ok | outer_ok)

    def test_saddle_resolved_toward_inclusion(self):
        # checkerboard cell: the two inside corners must stay connected
        values = np.array([[0.0, 2.0], [2.0, 0.0]])
        segments = ss.spectra._marching_squares(
            np.array([0.0, 1.0]), np.array([0.0, 1.0]), values, 1.0)
        assert len(segments) == 2
        # segments separate each outside corner individually: both midpoints
        # lie strictly off the cell diagonal through the inside corners
        for p, q in segments:
            mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
            assert abs(mid[0] - mid[1]) > 0.4

    def test_invalid_eps(self):
        grid = ss.GridSpec(-1, 1, -1, 1, 3, 3)
        fld = ss.resolvent_field(shift_operator(), grid, 4)
        with pytest.raises(ValidationError):
            ss.sublevel_set(fld, 0)


class TestHausdorff:
    def test_identical_sets(self):
        pts = np.array([1 + 1j, 2 - 1j, 0.5j])
        rep = ss.hausdorff(pts, pts)
        assert rep.distance == 0

    def test_known_values(self):
        assert ss.hausdorff(np.array([0j]), np.array([3 + 0j, 4 + 0j])).distance == 4
        assert ss.hausdorff(np.array([0j, 10 + 0j]), np.array([0j])).distance == 10

    def test_directed_values(self):
        rep = ss.hausdorff(np.array([0j]), np.array([3 + 0j, 4 + 0j]))
        assert rep.directed_ab == 3 and rep.directed_ba == 4

    def test_metric_axioms(self, rng):
        sets = [rng.normal(size=5) + 1j * rng.normal(size=5) for _ in range(12)]
        for a in sets:
            assert ss.hausdorff(a, a).distance <= 1e-12
        for a, b in zip(sets, sets[1:]):
            ab, ba = ss.hausdorff(a, b), ss.hausdorff(b, a)
            assert ab.distance == ba.distance
            assert ab.directed_ab == ba.directed_ba
        for a, b, c in zip(sets, sets[1:], sets[2:]):
            dab = ss.hausdorff(a, b).distance
            dbc = ss.hausdorff(b, c).distance
            dac = ss.hausdorff(a, c).distance
            assert dac <= dab + dbc + 1e-12

    def test_empty_input_rejected(self):
        with pytest.raises(ValidationError):
            ss.hausdorff(np.array([], dtype=complex), np.array([1j]))


class TestNumericalRange:
    def test_normal_matrix_segment(self):
        nr = ss.numerical_range_boundary(np.diag([0, 1]).astype(complex), 360)
        assert np.abs(nr.points.imag).max() <= 1e-12
        assert nr.points.real.min() >= -1e-12
        assert nr.points.real.max() <= 1 + 1e-12
        assert nr.points.real.max() == pytest.approx(1.0)
        assert nr.points.real.min() == pytest.approx(0.0, abs=1e-12)

    def test_jordan_block_disk(self):
        j = np.array([[0, 1], [0, 0]], dtype=complex)
        nr = ss.numerical_range_boundary(j, 360)
        assert np.abs(np.abs(nr.points) - 0.5).max() <= 1e-3

    def test_non_square_rejected(self):
        with pytest.raises(ValidationError):
            ss.numerical_range_boundary(np.zeros((2, 3)), 8)


class TestConvergenceStudy:
    def test_identical_iterates_have_zero_distance(self):
        b = ss.PeriodicWord(ss.de_bruijn(2, 3))
        spec = laplacian(b)
        grid = ss.GridSpec(-4, 4, -2, 2, 12, 8)
        result = ss.convergence_study(lambda m: spec, [1, 2], grid,
                                      lambda m: 4, [0.5])
        for row in result.rows:
            assert row.report.distance == 0
        assert result.monotone[0.5]

    def test_reference_and_condition_wiring(self):
        from subspec import models
        model = models.anderson_sa()
        grid = ss.GridSpec(-6, 6, -1, 1, 25, 5)
        ref = model.reference_samples(0.01)
        result = ss.convergence_study(
            lambda m: model.build(m).spec, [2, 3], grid, model.default_N, [1.2],
            reference=ref, condition_for_m=model.check_condition)
        assert all(result.condition_reports[m].equal for m in (2, 3))
        assert all(r.report is not None for r in result.rows)
        assert all(np.isfinite(r.report.distance) for r in result.rows)
        assert set(result.sublevel_sets) == {(2, 1.2), (3, 1.2)}

    def test_condition_violation_is_annotated_not_fatal(self):
        spike = ss.ExplicitWindow(ss.FiniteWord.from_string("1"), base_index=3,
                                  extension=0)
        zero = ss.PeriodicWord(ss.FiniteWord.from_string("0"))
        grid = ss.GridSpec(-2, 2, -1, 1, 9, 5)

        def condition(m, n):
            return ss.check_subword_condition(zero, spike, n, scan_range=(-40, 40))

        result = ss.convergence_study(
            lambda m: laplacian(), [1, 2], grid, lambda m: 4, [0.9],
            condition_for_m=condition)
        assert any(r.annotation for r in result.rows)
        assert all(r.report is not None for r in result.rows)
