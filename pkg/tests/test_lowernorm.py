import math

import numpy as np
import pytest

import subspec as ss
from subspec.errors import ValidationError
from conftest import laplacian, nested_subword_pair, random_periodic_spec, shift_operator


def make_block(matrix):
    return ss.ColumnBlock(np.asarray(matrix, dtype=complex), None, 1,
                          np.asarray(matrix).shape[1], 0)


class TestSmallestSingularValue:
    def test_identity(self):
        assert ss.smallest_singular_value(make_block(np.eye(2))) == pytest.approx(1.0)

    def test_rectangular_diagonal(self):
        blk = make_block([[1, 0], [0, 2], [0, 0]])
        assert ss.smallest_singular_value(blk) == pytest.approx(1.0)

    def test_single_column_norm(self):
        blk = make_block([[1], [0], [1]])
        assert ss.smallest_singular_value(blk) == pytest.approx(math.sqrt(2))

    def test_square_blocks_match_adjoint(self, rng):
        for _ in range(10):
            m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
            a = ss.smallest_singular_value(make_block(m))
            b = ss.smallest_singular_value(make_block(m.conj().T))
            assert abs(a - b) <= 1e-12


class TestNuN:
    def test_shift_operator_is_isometric(self):
        for n in (1, 2, 5, 16):
            assert ss.nu_N(shift_operator(), n).combined == pytest.approx(1.0)

    def test_laplacian_small_windows(self):
        assert ss.nu_N(laplacian(), 1).combined == pytest.approx(math.sqrt(2))
        assert ss.nu_N(laplacian(), 2).combined == pytest.approx(math.sqrt(2))

    def test_monotone_in_window_length(self, rng):
        for _ in range(4):
            spec = random_periodic_spec(rng, period=5, width=1)
            for _ in range(5):
                lam = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
                vals = [ss.nu_N(spec, n, lam).combined for n in (1, 2, 4, 8, 16, 32)]
                assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))

    def test_subword_inclusion_gives_larger_nu(self, rng):
        N = 6
        for _ in range(6):
            b, c = nested_subword_pair(rng, N)
            sb = ss.schrodinger({1: 1, -1: 1}, 0, b)
            sc = ss.schrodinger({1: 1, -1: 1}, 0, c)
            for lam in (0j, 1 + 0.5j, -2j):
                assert ss.nu_N(sb, N, lam).combined >= ss.nu_N(sc, N, lam).combined - 1e-12

    def test_never_undershoots_periodic_oracle(self, rng):
        for _ in range(5):
            spec = random_periodic_spec(rng, period=4, width=1)
            lam = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            exact = ss.nu_exact_periodic(spec, lam, 2048)
            for n in (2, 4, 8, 32):
                assert ss.nu_N(spec, n, lam).nu_N >= exact - 1e-10

    def test_skip_adjoint_toggle(self):
        res = ss.nu_N(laplacian(), 3, 1j, skip_adjoint=True)
        assert res.nu_N_adjoint is None
        assert res.combined == res.nu_N

    def test_rejects_half_axis_spec(self):
        with pytest.raises(ValidationError):
            ss.nu_N(ss.half_axis(laplacian()), 2)

    def test_result_metadata(self):
        res = ss.nu_N(laplacian(), 2, 0.5j)
        assert res.N == 2 and res.lam == 0.5j
        assert res.block_count == 2  # one block and its adjoint block
        assert res.exact and not res.numerically_singular

    def test_singular_flag_on_spectrum(self):
        # 0 lies in the spectrum of the shift, nu_N still reports the raw value
        res = ss.nu_N(shift_operator(), 8, 1.0)
        assert res.combined >= 0


class TestHalfAxisNu:
    def test_laplacian_boundary_dominates(self):
        plus = ss.half_axis(laplacian())
        res = ss.nu_N_half_axis(plus, 1)
        assert res.combined == pytest.approx(1.0)
        assert ss.nu_N(laplacian(), 1).combined == pytest.approx(math.sqrt(2))

    def test_shift_operator_unchanged(self):
        plus = ss.half_axis(shift_operator())
        res = ss.nu_N_half_axis(plus, 1)
        # isometric columns survive the compression ...
        assert res.nu_N == pytest.approx(1.0)
        # ... while the compressed adjoint annihilates the corner vector
        assert res.nu_N_adjoint == pytest.approx(0.0, abs=1e-15)

    def test_equals_explicit_min_of_boundary_and_interior(self, rng):
        for _ in range(4):
            spec = random_periodic_spec(rng, period=3, width=2)
            plus = ss.half_axis(spec)
            lam = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            n = 4
            res = ss.nu_N_half_axis(plus, n, lam, skip_adjoint=True)
            w = spec.band_width
            pieces = []
            for j in range(1, w + 1):
                blk = ss.boundary_blocks(plus, j, n)
                mat = np.array(blk.matrix, copy=True)
                for q in range(n):
                    r = (j + q) - 1
                    if r < mat.shape[0]:
                        mat[r, q] -= lam
                pieces.append(np.linalg.svd(mat, compute_uv=False)[-1])
            interior = ss.nu_N(spec, n, lam, skip_adjoint=True).nu_N
            assert res.nu_N == pytest.approx(min(min(pieces), interior), abs=1e-12)

    def test_half_axis_never_exceeds_full_axis(self, rng):
        for _ in range(4):
            spec = random_periodic_spec(rng, period=4, width=1)
            plus = ss.half_axis(spec)
            lam = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            assert ss.nu_N_half_axis(plus, 5, lam).combined <= \
                ss.nu_N(spec, 5, lam).combined + 1e-12


class TestResolventBound:
    def test_shift_at_origin(self):
        assert ss.resolvent_lower_bound(shift_operator(), 8, 0) == pytest.approx(1.0)

    def test_zero_operator(self):
        zero = ss.multi_diagonal([ss.DiagonalSpec(0, 0)])
        assert ss.resolvent_lower_bound(zero, 4, 1) == pytest.approx(1.0)

    def test_laplacian_approaches_distance(self):
        vals = [ss.resolvent_lower_bound(laplacian(), n, 3j) for n in (4, 8, 16, 32)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
        assert vals[-1] <= 1 / 3 + 1e-10
        assert vals[-1] >= 1 / 3 - 1e-2

    def test_neumann_style_far_field(self, rng):
        spec = random_periodic_spec(rng, period=3, width=1)
        radius = sum(max(abs(d.value_at(c)) for c in range(1, 4))
                     for d in spec.diagonals)
        lam = radius + 5
        assert ss.resolvent_lower_bound(spec, 8, lam) <= 1 / (lam - radius) + 1e-12

    def test_infinite_on_exact_kernel(self):
        zero = ss.multi_diagonal([ss.DiagonalSpec(0, 0)])
        assert ss.resolvent_lower_bound(zero, 3, 0) == math.inf


class TestDiagnostics:
    def test_sigma_table_rows(self):
        word = ss.PeriodicWord(ss.de_bruijn(2, 2))
        spec = laplacian(word)
        rows = ss.lowernorm.block_sigma_table(spec, 2, 0.5)
        assert len(rows) == len(ss.column_blocks(spec, 2))
        assert all(sig >= 0 for _, sig in rows)
