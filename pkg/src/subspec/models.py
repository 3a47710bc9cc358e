"""Catalog of example operators with periodic surrogate sequences.

Each model bundles an operator builder with an approximant builder m -> b_m
whose length-N subwords eventually match those of the target word.  Surrogates
for words of maximal subword variety come from condensed cyclic arrangements;
the golden-rotation models use prefix periodization.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ValidationError
from .operators import BandOperatorSpec, DiagonalSpec, schrodinger, multi_diagonal
from .spectra import SpectralSet
from .words import (
    Alphabet,
    FiniteWord,
    PeriodicWord,
    RotationParams,
    RotationWord,
    SubwordConditionReport,
    check_subword_condition,
    de_bruijn,
    golden_rotation_params,
    prefix_periodization,
)
from .surd import Surd

ROTATION_SCAN = (-20000, 20000)


@dataclass
class ModelBuild:
    spec: BandOperatorSpec
    potentials: dict
    pair_word: Optional[PeriodicWord] = None   # joint word for two-diagonal models


@dataclass
class ModelInstance:
    """A named operator family with its surrogate schedule."""

    name: str
    params: dict
    build: Callable[[int], ModelBuild]
    default_N: Callable[[int], int]
    check_condition: Callable[[int, int], SubwordConditionReport]
    reference_samples: Optional[Callable[[float], SpectralSet]] = None


def _surrogate_word(alphabet: Alphabet, m: int) -> PeriodicWord:
    """Periodic word over the alphabet containing every length-m word once."""
    if len(alphabet) == 1:
        return PeriodicWord(FiniteWord((0,), alphabet))
    db = de_bruijn(len(alphabet), m)
    return PeriodicWord(FiniteWord(db.indices, alphabet))


def _full_variety_condition(alphabet: Alphabet, approximant_for_m):
    def check(m: int, N: int) -> SubwordConditionReport:
        target = _surrogate_word(alphabet, N)
        return check_subword_condition(target, approximant_for_m(m), N)
    return check


def _interval_union_reference(sigma):
    def sample(step: float) -> SpectralSet:
        pts = []
        for s in sigma:
            count = int(round(4.0 / step)) + 1
            pts.append(s + np.linspace(-2.0, 2.0, count))
        return SpectralSet(np.unique(np.concatenate(pts)).astype(complex),
                           provenance="reference")
    return sample


def _anderson(name: str, hop_right: complex, hop_left: complex, sigma,
              reference=False) -> ModelInstance:
    alphabet = Alphabet(tuple(sigma))

    def approximant(m):
        return _surrogate_word(alphabet, m)

    def build(m):
        b = approximant(m)
        return ModelBuild(schrodinger({1: hop_right, -1: hop_left}, 0, b), {"b": b})

    return ModelInstance(
        name=name,
        params={"sigma": tuple(alphabet.letters)},
        build=build,
        default_N=lambda m: m,
        check_condition=_full_variety_condition(alphabet, approximant),
        reference_samples=_interval_union_reference(alphabet.letters) if reference else None,
    )


def anderson_sa(sigma=(-3, 3)) -> ModelInstance:
    """Symmetric nearest-neighbor hopping plus a real two-letter potential."""
    letters = tuple(complex(s) for s in sigma)
    if any(z.imag != 0 for z in letters):
        raise ValidationError("sigma: the self-adjoint model needs real letters")
    return _anderson("anderson_sa", 1, 1, letters, reference=True)


def anderson_nsa(sigma=(-3, 3)) -> ModelInstance:
    """Asymmetric hopping 1/2 and 2 with a two-letter potential."""
    return _anderson("anderson_nsa", 0.5, 2, tuple(sigma))


def _fibonacci(name: str, letters) -> ModelInstance:
    alphabet = Alphabet(letters)
    target = RotationWord(golden_rotation_params(), alphabet)

    def approximant(m):
        return prefix_periodization(target, m, scan_bound=max(4000, 64 * m))

    def build(m):
        b = approximant(m)
        return ModelBuild(schrodinger({1: 1, -1: 1}, 0, b), {"b": b})

    def check(m, N):
        return check_subword_condition(target, approximant(m), N,
                                       scan_range=ROTATION_SCAN)

    def default_N(m):
        # Equality at one length implies it below, so probe upward until the
        # first failure (capped a little past m, which passes by construction).
        best = 0
        for n in range(1, m + 9):
            if check(m, n).equal:
                best = n
            else:
                break
        return max(best, 1)

    return ModelInstance(
        name=name,
        params={"sigma": tuple(alphabet.letters)},
        build=build,
        default_N=default_N,
        check_condition=check,
    )


def fibonacci_sa() -> ModelInstance:
    """Golden-rotation indicator potential with letters {0, 1}."""
    return _fibonacci("fibonacci_sa", (0, 1))


def fibonacci_nsa() -> ModelInstance:
    """Same word with the inside letter scaled by -1j."""
    return _fibonacci("fibonacci_nsa", (0, -1j))


def fibonacci_rational_approximant(m: int,
                                   letters=(0, 1)) -> RotationWord:
    """Alternative surrogate route: rational rotation by a golden convergent.

    The rotation number is the ratio of consecutive terms of the classic
    addition sequence truncated after m steps, so the word is periodic with
    the denominator as its period.
    """
    if m < 1:
        raise ValidationError("m: must be a positive integer")
    a, b = 1, 1
    for _ in range(m):
        a, b = b, a + b
    alpha = Surd.rational(a, b)
    params = RotationParams(alpha, Surd.rational(b - a, b), Surd.rational(1))
    return RotationWord(params, Alphabet(letters))


def hopping(q: int = 2) -> ModelInstance:
    """State-flipping hopping particle: shift plus a root-of-unity potential
    one diagonal below."""
    if q < 1:
        raise ValidationError("q: number of states must be positive")
    letters = tuple(cmath.exp(2j * cmath.pi * t / q) for t in range(q))
    if q == 1:
        letters = (1 + 0j,)
    if q == 2:
        letters = (1 + 0j, -1 + 0j)
    if q == 4:
        letters = (1 + 0j, 1j, -1 + 0j, -1j)
    alphabet = Alphabet(letters)

    def approximant(m):
        return _surrogate_word(alphabet, m)

    def build(m):
        b = approximant(m)
        return ModelBuild(schrodinger({1: 1}, -1, b), {"b": b})

    return ModelInstance(
        name="hopping",
        params={"q": q, "sigma": tuple(alphabet.letters)},
        build=build,
        default_N=lambda m: m,
        check_condition=_full_variety_condition(alphabet, approximant),
    )


def oneway(sigma_b=(-2, 2), sigma_c=(3, 4)) -> ModelInstance:
    """Two varying diagonals: a multiplication part b and a shifted part c.

    The two surrogates are projected from one cyclic word over the product
    alphabet, so the pair (b_m, c_m) runs through every length-m pair pattern.
    """
    ab = Alphabet(tuple(sigma_b))
    ac = Alphabet(tuple(sigma_c))
    pair_alphabet = Alphabet(tuple(complex(t) for t in range(len(ab) * len(ac))))

    def pair_word(m):
        return _surrogate_word(pair_alphabet, m)

    def split(pair: PeriodicWord):
        kb = len(ac)
        b_idx = tuple(i // kb for i in pair.word.indices)
        c_idx = tuple(i % kb for i in pair.word.indices)
        return (PeriodicWord(FiniteWord(b_idx, ab)),
                PeriodicWord(FiniteWord(c_idx, ac)))

    def build(m):
        pair = pair_word(m)
        b, c = split(pair)
        spec = multi_diagonal((DiagonalSpec(0, 0, b, 0), DiagonalSpec(1, 0, c, 0)))
        return ModelBuild(spec, {"b": b, "c": c}, pair_word=pair)

    def check(m, N):
        target = _surrogate_word(pair_alphabet, N)
        return check_subword_condition(target, pair_word(m), N)

    return ModelInstance(
        name="oneway",
        params={"sigma_b": tuple(ab.letters), "sigma_c": tuple(ac.letters)},
        build=build,
        default_N=lambda m: m,
        check_condition=check,
    )


_FACTORIES = {
    "anderson_sa": anderson_sa,
    "anderson_nsa": anderson_nsa,
    "fibonacci_sa": fibonacci_sa,
    "fibonacci_nsa": fibonacci_nsa,
    "hopping": hopping,
    "oneway": oneway,
}

MODEL_NAMES = tuple(sorted(_FACTORIES))


def get_model(name: str, **params) -> ModelInstance:
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise ValidationError(
            f"model: unknown name {name!r}; choose from {', '.join(MODEL_NAMES)}")
    return factory(**params)


def build(name: str, m: int, **params) -> ModelBuild:
    """Build the operator and surrogate potentials for one approximant index."""
    if m < 1:
        raise ValidationError("m: approximant index must be positive")
    return get_model(name, **params).build(m)
