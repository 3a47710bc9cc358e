import numpy as np
import pytest

import subspec as ss


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def dense_section(spec, lo, hi):
    """Dense window of the operator matrix, built entry by entry."""
    n = hi - lo + 1
    a = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            a[i, j] = spec.entry(lo + i, lo + j)
    return a


def random_periodic_spec(rng, period=5, width=2, box=2.0):
    """Every diagonal carries an independent random periodic potential."""
    diags = []
    for k in range(-width, width + 1):
        letters = tuple(complex(a, b) for a, b in rng.uniform(-box, box, (period, 2)))
        word = ss.PeriodicWord(ss.FiniteWord(tuple(range(period)), ss.Alphabet(letters)))
        diags.append(ss.DiagonalSpec(k, 0, word, 0))
    return ss.multi_diagonal(diags)


def laplacian(potential=None):
    if potential is None:
        potential = ss.PeriodicWord(ss.FiniteWord.from_string("0"))
    return ss.schrodinger({1: 1, -1: 1}, 0, potential)


def shift_operator():
    return ss.multi_diagonal([ss.DiagonalSpec(1, 1)])


def nested_subword_pair(rng, N, alphabet=None):
    """Periodic pair (b, c) with every length-N subword of b also in c.

    b repeats a word u; c repeats enough copies of u for all cyclic windows of
    u to appear literally, followed by a junk tail, so the inclusion holds by
    construction.
    """
    if alphabet is None:
        alphabet = ss.Alphabet((-1, 1))
    k = len(alphabet)
    ulen = int(rng.integers(4, 9))
    u = tuple(int(x) for x in rng.integers(0, k, ulen))
    copies = -(-(N + ulen - 1) // ulen)
    tail = tuple(int(x) for x in rng.integers(0, k, int(rng.integers(2, 6))))
    b = ss.PeriodicWord(ss.FiniteWord(u, alphabet))
    c = ss.PeriodicWord(ss.FiniteWord(u * copies + tail, alphabet))
    return b, c
