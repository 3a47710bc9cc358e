import numpy as np
import pytest

import subspec as ss
from subspec.errors import ValidationError
from conftest import dense_section, laplacian, nested_subword_pair, random_periodic_spec, shift_operator


def block_bytes(blocks):
    return {b.key_bytes() for b in blocks}


class TestConstruction:
    def test_schrodinger_places_potential_plus_constant(self):
        b = ss.PeriodicWord(ss.FiniteWord.from_string("01"))
        spec = ss.schrodinger({1: 0.5, -1: 2, 0: 3}, 0, b)
        # column 1 carries letter b_1 = 0 plus the constant 3
        assert spec.entry(1, 1) == 3
        assert spec.entry(2, 2) == 4
        assert spec.entry(2, 1) == 0.5
        assert spec.entry(1, 2) == 2

    def test_hopping_layouts_agree(self):
        b = ss.PeriodicWord(ss.FiniteWord((0, 1, 1, 0), ss.Alphabet((1, -1))))
        via_schrodinger = ss.schrodinger({1: 1}, -1, b)
        via_diagonals = ss.multi_diagonal(
            [ss.DiagonalSpec(1, 1), ss.DiagonalSpec(-1, 0, b, 0)])
        a = ss.column_blocks(via_schrodinger, 4)
        c = ss.column_blocks(via_diagonals, 4)
        assert block_bytes(a) == block_bytes(c)

    def test_duplicate_offsets_rejected(self):
        with pytest.raises(ValidationError):
            ss.multi_diagonal([ss.DiagonalSpec(0, 1), ss.DiagonalSpec(0, 2)])

    def test_scalar_identity_multiple(self):
        spec = ss.multi_diagonal([ss.DiagonalSpec(0, 5)])
        assert spec.band_width == 0
        blocks = ss.column_blocks(spec, 3)
        assert len(blocks) == 1
        assert np.array_equal(blocks[0].matrix, 5 * np.eye(3))

    def test_band_width_covers_gamma(self):
        b = ss.PeriodicWord(ss.FiniteWord.from_string("01"))
        spec = ss.schrodinger({1: 1}, -2, b)
        assert spec.band_width == 2


class TestAdjoint:
    def test_self_adjoint_laplacian(self):
        spec = laplacian(ss.PeriodicWord(ss.FiniteWord((0, 1), ss.Alphabet((0.5, -2)))))
        adj = ss.adjoint(spec)
        assert block_bytes(ss.column_blocks(spec, 4)) == block_bytes(ss.column_blocks(adj, 4))

    def test_sectional_conjugate_transpose_hopping(self):
        b = ss.PeriodicWord(ss.FiniteWord((0, 1, 1, 0, 1), ss.Alphabet((1, -1))))
        spec = ss.multi_diagonal([ss.DiagonalSpec(1, 1), ss.DiagonalSpec(-1, 0, b, 0)])
        adj = ss.adjoint(spec)
        sec = dense_section(spec, -3, 2)
        assert np.allclose(dense_section(adj, -3, 2), sec.conj().T)

    def test_sectional_conjugate_transpose_oneway(self):
        b = ss.PeriodicWord(ss.FiniteWord((0, 1, 0), ss.Alphabet((-2, 2))))
        c = ss.PeriodicWord(ss.FiniteWord((1, 0, 0), ss.Alphabet((3, 4))))
        spec = ss.multi_diagonal([ss.DiagonalSpec(0, 0, b, 0), ss.DiagonalSpec(1, 0, c, 0)])
        sec = dense_section(spec, -4, 4)
        assert np.allclose(dense_section(ss.adjoint(spec), -4, 4), sec.conj().T)

    def test_involution_on_blocks(self, rng):
        for _ in range(5):
            spec = random_periodic_spec(rng, period=4, width=1)
            double = ss.adjoint(ss.adjoint(spec))
            for n in (1, 3, 6):
                assert block_bytes(ss.column_blocks(spec, n)) == \
                    block_bytes(ss.column_blocks(double, n))

    def test_adjoint_block_inclusion_from_window_inclusion(self, rng):
        # nested length-(N+2w) windows also nest the adjoint N-column blocks
        N = 4
        for _ in range(5):
            b, c = nested_subword_pair(rng, N + 2)
            sb = ss.schrodinger({1: 1, -1: 1}, 0, b)
            sc = ss.schrodinger({1: 1, -1: 1}, 0, c)
            assert block_bytes(ss.column_blocks(sb, N + 2)) <= \
                block_bytes(ss.column_blocks(sc, N + 2))
            assert block_bytes(ss.column_blocks(ss.adjoint(sb), N)) <= \
                block_bytes(ss.column_blocks(ss.adjoint(sc), N))


class TestShift:
    def test_zero_shift_is_identity(self):
        spec = laplacian()
        assert ss.shift_lambda(spec, 0) is spec

    def test_shift_creates_main_diagonal(self):
        spec = laplacian()
        shifted = ss.shift_lambda(spec, 3j)
        assert shifted.diagonal_at(0).const == -3j
        assert shifted.lambda_shift == 3j
        assert shifted.band_width == 1

    def test_blocks_shift_exactly_on_the_diagonal(self, rng):
        spec = random_periodic_spec(rng, period=3, width=2)
        lam = 0.7 - 0.3j
        direct = ss.column_blocks(ss.shift_lambda(spec, lam), 4)
        base = ss.column_blocks(spec, 4)
        w = spec.band_width
        for blk_d, blk_b in zip(direct, base):
            expected = np.array(blk_b.matrix, copy=True)
            expected[np.arange(4) + w, np.arange(4)] -= lam
            assert np.array_equal(blk_d.matrix, expected)


class TestColumnBlocks:
    def test_laplacian_single_column(self):
        blocks = ss.column_blocks(laplacian(), 1)
        assert len(blocks) == 1
        assert np.array_equal(blocks[0].matrix.ravel(), [1, 0, 1])

    def test_de_bruijn_block_count_matches_subwords(self):
        word = ss.PeriodicWord(ss.de_bruijn(2, 3))
        spec = laplacian(word)
        blocks = ss.column_blocks(spec, 3)
        assert len(blocks) == 8
        assert all(b.shape == (5, 3) for b in blocks)

    def test_block_count_equals_subword_count(self, rng):
        for _ in range(8):
            p = int(rng.integers(2, 12))
            idx = tuple(int(x) for x in rng.integers(0, 2, p))
            word = ss.PeriodicWord(ss.FiniteWord(idx, ss.words.BINARY))
            spec = laplacian(word)
            for n in range(1, 9):
                assert len(ss.column_blocks(spec, n)) == len(ss.subword_set(word, n))

    def test_entries_match_dense_section(self, rng):
        spec = random_periodic_spec(rng, period=4, width=2)
        w = spec.band_width
        n = 5
        block = ss.column_blocks(spec, n)[0]
        anchor = block.rep_col - 1
        sec = np.zeros((n + 2 * w, n), dtype=complex)
        for i in range(1 - w, n + w + 1):
            for j in range(1, n + 1):
                sec[i - (1 - w), j - 1] = spec.entry(anchor + i, anchor + j)
        assert np.array_equal(block.matrix, sec)

    def test_scan_required_for_rotation_potential(self):
        rot = ss.RotationWord(ss.golden_rotation_params())
        spec = laplacian(rot)
        with pytest.raises(ValidationError):
            ss.column_blocks(spec, 3)
        blocks = ss.column_blocks(spec, 3, scan_range=(-100, 100))
        assert len(blocks) == 4  # N+1 windows of the golden word


class TestHalfAxis:
    def test_boundary_block_clips_rows(self):
        plus = ss.half_axis(laplacian())
        blk = ss.boundary_blocks(plus, 1, 1)
        assert np.array_equal(blk.matrix.ravel(), [0, 1])

    def test_interior_block_is_full(self):
        plus = ss.half_axis(laplacian())
        blk = ss.boundary_blocks(plus, 2, 1)
        assert np.array_equal(blk.matrix.ravel(), [1, 0, 1])

    def test_shift_operator_boundary_survives(self):
        # the clipped rows of the forward shift hold only zeros, so nothing is lost
        plus = ss.half_axis(shift_operator())
        blk = ss.boundary_blocks(plus, 1, 1)
        full = ss.column_blocks(shift_operator(), 1)[0]
        clipped = full.matrix.shape[0] - blk.matrix.shape[0]
        assert np.all(full.matrix[:clipped] == 0)
        assert np.array_equal(blk.matrix, full.matrix[clipped:])
        assert ss.smallest_singular_value(blk) == ss.smallest_singular_value(full)

    def test_interior_equals_full_axis_entrywise(self, rng):
        spec = random_periodic_spec(rng, period=3, width=2)
        plus = ss.half_axis(spec)
        w = spec.band_width
        n = 3
        for j in range(w + 1, w + 11):
            interior = ss.boundary_blocks(plus, j, n)
            anchor = j - 1
            expected = np.zeros((n + 2 * w, n), dtype=complex)
            for i in range(1 - w, n + w + 1):
                for q in range(1, n + 1):
                    expected[i - (1 - w), q - 1] = spec.entry(anchor + i, anchor + q)
            assert np.array_equal(interior.matrix, expected)

    def test_invalid_j_rejected(self):
        plus = ss.half_axis(laplacian())
        with pytest.raises(ValidationError):
            ss.boundary_blocks(plus, 0, 2)

    def test_half_axis_requires_full_axis_input(self):
        plus = ss.half_axis(laplacian())
        with pytest.raises(ValidationError):
            ss.half_axis(plus)
