"""Infinite words used as operator potentials, and their subword combinatorics.

A potential is a letter sequence over a finite complex alphabet, described
finitely in one of four ways: a periodic word, a substitution fixed-point
prefix, an irrational (or rational) rotation indicator, or an explicit finite
window.  This module builds those words and analyzes them: subword sets,
occurrence-gap statistics, the subword-equality condition between a target
word and a periodic surrogate, and the prefix periodization that manufactures
such surrogates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .errors import (
    DomainError,
    ResourceLimitError,
    SearchExhaustedError,
    ValidationError,
)
from .surd import Surd

DE_BRUIJN_CAP = 1 << 20
SUBSTITUTION_CAP = 1 << 22


# ---------------------------------------------------------------------------
# Alphabets and finite words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Alphabet:
    """Ordered tuple of pairwise distinct complex letters."""

    letters: tuple

    def __post_init__(self):
        letters = tuple(complex(x) for x in self.letters)
        if not letters:
            raise ValidationError("letters: alphabet must be non-empty")
        if len(set(letters)) != len(letters):
            raise ValidationError("letters: alphabet letters must be pairwise distinct")
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    def conjugate(self) -> "Alphabet":
        return Alphabet(tuple(z.conjugate() for z in self.letters))


def canonical_alphabet(size: int) -> Alphabet:
    """Letters 0, 1, ..., size-1 as complex numbers."""
    return Alphabet(tuple(complex(i) for i in range(size)))


BINARY = canonical_alphabet(2)


@dataclass(frozen=True)
class FiniteWord:
    """A finite word stored as alphabet indices."""

    indices: tuple
    alphabet: Alphabet

    def __post_init__(self):
        indices = tuple(int(i) for i in self.indices)
        k = len(self.alphabet)
        if any(i < 0 or i >= k for i in indices):
            raise ValidationError("indices: letter index outside the alphabet")
        object.__setattr__(self, "indices", indices)

    def __len__(self):
        return len(self.indices)

    def values(self) -> tuple:
        return tuple(self.alphabet.letters[i] for i in self.indices)

    def to_string(self) -> str:
        """Digit string of indices; only meaningful for alphabets of size <= 10."""
        if len(self.alphabet) > 10:
            raise ValidationError("alphabet: too large for a digit-string rendering")
        return "".join(str(i) for i in self.indices)

    @classmethod
    def from_string(cls, digits: str, alphabet: Alphabet = BINARY) -> "FiniteWord":
        return cls(tuple(int(c) for c in digits), alphabet)


@dataclass(frozen=True)
class SubwordSet:
    """All distinct length-N windows seen in a word (exact or scanned)."""

    N: int
    words: frozenset
    exact: bool = True
    scan_range: Optional[tuple] = None

    def __len__(self):
        return len(self.words)


@dataclass(frozen=True)
class GapProfile:
    """Occurrence-gap radii per subword; g_N is the maximum over all of them.

    The gap of a subword is the smallest radius r such that balls of radius r
    around its occurrence positions cover the whole index set.  Exact for
    periodic words; a flagged lower estimate for scanned words.
    """

    N: int
    per_word: dict
    g_N: float
    exact: bool = True
    scan_range: Optional[tuple] = None


@dataclass(frozen=True)
class SubwordConditionReport:
    """Outcome of comparing the length-N subword sets of two words."""

    N: int
    equal: bool
    missing: SubwordSet
    extra: SubwordSet
    exact: bool


# ---------------------------------------------------------------------------
# de Bruijn words
# ---------------------------------------------------------------------------

def least_rotation(seq: tuple) -> tuple:
    """Lexicographically least rotation (Booth's algorithm)."""
    s = seq + seq
    n = len(seq)
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return seq[k % n:] + seq[:k % n]


def de_bruijn(alphabet_size: int, order: int, size_cap: int = DE_BRUIJN_CAP) -> FiniteWord:
    """Cyclic word of length k**n containing every length-n word exactly once.

    Built as the prefer-smallest Eulerian cycle on the graph whose nodes are
    the (n-1)-grams, then normalized to the lexicographically least rotation,
    so the output is deterministic.
    """
    k, n = int(alphabet_size), int(order)
    if k < 2:
        raise ValidationError("alphabet_size: need at least 2 letters")
    if n < 1:
        raise ValidationError("order: must be a positive integer")
    if k ** n > size_cap:
        raise ResourceLimitError(f"size_cap: k**n = {k ** n} exceeds cap {size_cap}")

    start = (0,) * (n - 1)
    next_try: dict = {}
    stack = [(start, -1)]
    out = []
    while stack:
        node, letter_in = stack[-1]
        c = next_try.get(node, 0)
        if c < k:
            next_try[node] = c + 1
            stack.append(((node + (c,))[1:], c))
        else:
            stack.pop()
            out.append(letter_in)
    out.pop()  # sentinel for the start node
    out.reverse()
    word = least_rotation(tuple(out))
    return FiniteWord(word, canonical_alphabet(k))


# ---------------------------------------------------------------------------
# Substitution words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubstitutionRules:
    """Letter-to-word morphism with a seed whose image starts with the seed."""

    images: tuple          # per letter index, a tuple of letter indices
    seed: int
    alphabet: Alphabet
    growth_bound: int = 64

    def __post_init__(self):
        k = len(self.alphabet)
        images = tuple(tuple(int(i) for i in img) for img in self.images)
        if len(images) != k:
            raise ValidationError("images: need exactly one image per letter")
        for c, img in enumerate(images):
            if not img:
                raise ValidationError(f"images: image of letter {c} is empty")
            if any(i < 0 or i >= k for i in img):
                raise ValidationError(f"images: image of letter {c} leaves the alphabet")
        if not (0 <= self.seed < k):
            raise ValidationError("seed: not a letter of the alphabet")
        if images[self.seed][0] != self.seed:
            raise ValidationError("seed: image of the seed must start with the seed")
        object.__setattr__(self, "images", images)
        self._check_growth(images, k, self.growth_bound)

    @staticmethod
    def _check_growth(images, k, bound):
        # Iterated image lengths must become strictly increasing for every letter.
        lengths = [1] * k
        history = [list(lengths)]
        for _ in range(bound):
            lengths = [sum(lengths[i] for i in images[c]) for c in range(k)]
            history.append(list(lengths))
        half = bound // 2
        for c in range(k):
            if history[bound][c] <= history[half][c]:
                raise ValidationError(
                    f"images: iterated image length of letter {c} does not grow "
                    f"within {bound} iterations"
                )

    @property
    def primitive(self) -> bool:
        return _primitivity(self.images)


@lru_cache(maxsize=128)
def _primitivity(images: tuple) -> bool:
    k = len(images)
    reach = [[False] * k for _ in range(k)]
    for c, img in enumerate(images):
        for i in img:
            reach[c][i] = True
    limit = (k - 1) * (k - 1) + 1 if k > 1 else 1
    current = [row[:] for row in reach]
    for _ in range(limit):
        if all(all(row) for row in current):
            return True
        current = [
            [any(current[c][m] and reach[m][i] for m in range(k)) for i in range(k)]
            for c in range(k)
        ]
    return all(all(row) for row in current)


def fibonacci_rules(alphabet: Alphabet | None = None) -> SubstitutionRules:
    """0 -> 1, 1 -> 10, seed 1."""
    return SubstitutionRules(((1,), (1, 0)), 1, alphabet or BINARY)


def thue_morse_rules(alphabet: Alphabet | None = None) -> SubstitutionRules:
    """0 -> 01, 1 -> 10, seed 0."""
    return SubstitutionRules(((0, 1), (1, 0)), 0, alphabet or BINARY)


def period_doubling_rules(alphabet: Alphabet | None = None) -> SubstitutionRules:
    """0 -> 01, 1 -> 00, seed 0."""
    return SubstitutionRules(((0, 1), (0, 0)), 0, alphabet or BINARY)


def substitution_prefix(rules: SubstitutionRules, steps: int,
                        size_cap: int = SUBSTITUTION_CAP) -> FiniteWord:
    """Iterate the morphism ``steps`` times from the seed letter.

    Each result is a prefix of the next, so the outputs converge letterwise to
    the one-sided fixed point.
    """
    if steps < 0:
        raise ValidationError("steps: must be non-negative")
    word = (rules.seed,)
    for _ in range(int(steps)):
        nxt = []
        for c in word:
            nxt.extend(rules.images[c])
            if len(nxt) > size_cap:
                raise ResourceLimitError(f"size_cap: prefix longer than {size_cap}")
        word = tuple(nxt)
    return FiniteWord(word, rules.alphabet)


# ---------------------------------------------------------------------------
# Rotation words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RotationParams:
    """Rotation number alpha and a half-open target interval [lo, hi) in [0, 1).

    All data live in one exact quadratic field, so letter evaluation is a pure
    integer computation.
    """

    alpha: Surd
    lo: Surd
    hi: Surd

    def __post_init__(self):
        one = Surd.rational(1)
        zero = Surd.rational(0)
        if not (zero < self.alpha < one):
            raise ValidationError("alpha: need 0 < alpha < 1")
        if not (zero <= self.lo < self.hi <= one):
            raise ValidationError("interval: need 0 <= lo < hi <= 1")

    def contains(self, x: Surd) -> bool:
        return self.lo <= x < self.hi


def golden_rotation_params() -> RotationParams:
    """alpha = (sqrt(5) - 1)/2 with interval [1 - alpha, 1)."""
    alpha = Surd(-1, 1, 2, 5)
    return RotationParams(alpha, Surd(3, -1, 2, 5), Surd.rational(1))


def _pair_sign(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d) for plain integers."""
    if b == 0 or d == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    lhs, rhs = a * a, b * b * d
    if lhs == rhs:
        return 0
    if a > 0:
        return 1 if lhs > rhs else -1
    return -1 if lhs > rhs else 1


def rotation_letter(params: RotationParams, n: int) -> int:
    """Indicator of n*alpha mod 1 lying in the target interval, decided exactly."""
    x = (params.alpha * int(n)).frac()
    return 1 if params.contains(x) else 0


# ---------------------------------------------------------------------------
# Potential sources
# ---------------------------------------------------------------------------

class PotentialSource:
    """A finitely described infinite (or windowed) letter sequence.

    Concrete sources implement ``letter_index``; positions are integers, with
    1-based prefixes (``b[1], b[2], ...``) matching the half-axis convention.
    """

    alphabet: Alphabet
    period: Optional[int] = None
    self_contained: bool = False
    domain_start: Optional[int] = None   # None means unbounded below
    domain_end: Optional[int] = None     # None means unbounded above
    strict_domain: bool = False          # raise instead of clipping scans

    def letter_index(self, n: int) -> int:
        raise NotImplementedError

    def letter(self, n: int) -> complex:
        return self.alphabet.letters[self.letter_index(n)]

    def letters_range(self, lo: int, hi: int) -> list:
        """Indices at positions lo..hi inclusive."""
        return [self.letter_index(n) for n in range(lo, hi + 1)]

    def conjugate(self) -> "PotentialSource":
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def _check_position(self, n: int):
        if self.domain_start is not None and n < self.domain_start:
            raise DomainError(f"position {n}: before the window start {self.domain_start}")
        if self.domain_end is not None and n > self.domain_end:
            raise DomainError(f"position {n}: past the window end {self.domain_end}")


class PeriodicWord(PotentialSource):
    """Two-sided periodic extension of a finite word, occupying positions 1..p."""

    self_contained = True

    def __init__(self, word: FiniteWord):
        if len(word) == 0:
            raise ValidationError("word: periodic word must be non-empty")
        self.word = word
        self.alphabet = word.alphabet
        self.period = len(word)

    def letter_index(self, n: int) -> int:
        return self.word.indices[(n - 1) % self.period]

    def letters_range(self, lo: int, hi: int) -> list:
        idx = self.word.indices
        p = self.period
        return [idx[(n - 1) % p] for n in range(lo, hi + 1)]

    def conjugate(self) -> "PeriodicWord":
        return PeriodicWord(FiniteWord(self.word.indices, self.alphabet.conjugate()))

    def describe(self) -> str:
        return f"periodic(p={self.period},indices={''.join(map(str, self.word.indices))})"


class SubstitutionWord(PotentialSource):
    """One-sided prefix M^steps(seed) of a substitution fixed point, at 1..L."""

    domain_start = 1

    def __init__(self, rules: SubstitutionRules, steps: int):
        self.rules = rules
        self.steps = int(steps)
        self.prefix = substitution_prefix(rules, steps)
        self.alphabet = rules.alphabet
        self.domain_end = len(self.prefix)
        self.self_contained = rules.primitive

    def letter_index(self, n: int) -> int:
        self._check_position(n)
        return self.prefix.indices[n - 1]

    def letters_range(self, lo: int, hi: int) -> list:
        self._check_position(lo)
        self._check_position(hi)
        return list(self.prefix.indices[lo - 1:hi])

    def conjugate(self) -> "SubstitutionWord":
        rules = SubstitutionRules(self.rules.images, self.rules.seed,
                                  self.rules.alphabet.conjugate())
        return SubstitutionWord(rules, self.steps)

    def describe(self) -> str:
        return f"substitution(seed={self.rules.seed},steps={self.steps},len={len(self.prefix)})"


class RotationWord(PotentialSource):
    """Two-sided indicator word of an interval along a rotation orbit.

    The alphabet has exactly two letters: index 0 outside the interval,
    index 1 inside.  Rational rotation numbers give periodic words.
    """

    self_contained = True

    def __init__(self, params: RotationParams, alphabet: Alphabet | None = None):
        self.params = params
        self.alphabet = alphabet if alphabet is not None else BINARY
        if len(self.alphabet) != 2:
            raise ValidationError("alphabet: rotation words use exactly two letters")
        if params.alpha.is_rational:
            self.period = params.alpha.den
        else:
            self.period = None

    def letter_index(self, n: int) -> int:
        return rotation_letter(self.params, n)

    def letters_range(self, lo: int, hi: int) -> list:
        # Hot path for long scans: iterate the orbit with raw integer pairs
        # (a, b) meaning (a + b*sqrt(d))/L, one exact sign test per compare.
        if hi < lo:
            return []
        p = self.params
        x0 = (p.alpha * int(lo)).frac()
        d = max(p.alpha.d, p.lo.d, p.hi.d, x0.d)
        L = math.lcm(p.alpha.den, p.lo.den, p.hi.den, x0.den)

        def scaled(s: Surd):
            f = L // s.den
            return s.a * f, s.b * f

        aa, ab = scaled(p.alpha)
        la, lb = scaled(p.lo)
        ha, hb = scaled(p.hi)
        xa, xb = scaled(x0)
        out = []
        for _ in range(lo, hi + 1):
            inside = (_pair_sign(xa - la, xb - lb, d) >= 0
                      and _pair_sign(xa - ha, xb - hb, d) < 0)
            out.append(1 if inside else 0)
            xa += aa
            xb += ab
            if _pair_sign(xa - L, xb, d) >= 0:
                xa -= L
        return out

    def conjugate(self) -> "RotationWord":
        return RotationWord(self.params, self.alphabet.conjugate())

    def describe(self) -> str:
        return f"rotation(alpha={self.params.alpha!r},lo={self.params.lo!r},hi={self.params.hi!r})"


class ExplicitWindow(PotentialSource):
    """A finite window of letters, either strict or extended by a constant letter."""

    self_contained = False

    def __init__(self, word: FiniteWord, base_index: int = 1,
                 extension: Optional[int] = None):
        if len(word) == 0:
            raise ValidationError("word: window must be non-empty")
        self.word = word
        self.alphabet = word.alphabet
        self.base_index = int(base_index)
        self.extension = extension
        if extension is None:
            self.domain_start = self.base_index
            self.domain_end = self.base_index + len(word) - 1
            self.strict_domain = True
        else:
            if not (0 <= int(extension) < len(self.alphabet)):
                raise ValidationError("extension: not a letter of the alphabet")
            self.extension = int(extension)

    def letter_index(self, n: int) -> int:
        offset = n - self.base_index
        if 0 <= offset < len(self.word):
            return self.word.indices[offset]
        if self.extension is None:
            self._check_position(n)
        return self.extension

    def conjugate(self) -> "ExplicitWindow":
        return ExplicitWindow(FiniteWord(self.word.indices, self.alphabet.conjugate()),
                              self.base_index, self.extension)

    def describe(self) -> str:
        ext = "error" if self.extension is None else f"const{self.extension}"
        return f"window(base={self.base_index},len={len(self.word)},ext={ext})"


# ---------------------------------------------------------------------------
# Subword analysis
# ---------------------------------------------------------------------------

def _scan_starts(source: PotentialSource, N: int, scan_range):
    """Window start positions to examine, honoring the source's domain."""
    if scan_range is None:
        raise ValidationError("scan_range: required for non-periodic sources")
    lo, hi = int(scan_range[0]), int(scan_range[1])
    if lo > hi:
        raise ValidationError("scan_range: lower end exceeds upper end")
    if source.strict_domain:
        if (source.domain_start is not None and lo < source.domain_start) or (
                source.domain_end is not None and hi + N - 1 > source.domain_end):
            raise DomainError(
                f"scan_range: {lo}..{hi + N - 1} leaves the window "
                f"{source.domain_start}..{source.domain_end}")
    if source.domain_start is not None:
        lo = max(lo, source.domain_start)
    if source.domain_end is not None:
        hi = min(hi, source.domain_end - N + 1)
    return lo, hi


def subword_set(source: PotentialSource, N: int, scan_range=None) -> SubwordSet:
    """All distinct length-N windows of the word.

    Exact for periodic sources (one period plus wrap-around suffices); for the
    rest, the windows seen on the recorded scan range.
    """
    if N < 1:
        raise ValidationError("N: must be a positive integer")
    alphabet = source.alphabet
    if source.period is not None:
        p = source.period
        letters = source.letters_range(1, p + N - 1)
        words = {tuple(letters[i:i + N]) for i in range(p)}
        return SubwordSet(N, frozenset(FiniteWord(w, alphabet) for w in words),
                          exact=True, scan_range=None)
    lo, hi = _scan_starts(source, N, scan_range)
    if lo > hi:
        return SubwordSet(N, frozenset(), exact=False, scan_range=(lo, hi))
    letters = source.letters_range(lo, hi + N - 1)
    words = {tuple(letters[i:i + N]) for i in range(hi - lo + 1)}
    return SubwordSet(N, frozenset(FiniteWord(w, alphabet) for w in words),
                      exact=False, scan_range=(lo, hi))


def _covering_radius(diffs) -> int:
    # Balls of radius r at consecutive occurrences cover the stretch between
    # them iff r >= floor(gap/2).
    return max((d // 2 for d in diffs), default=0)


def gap_profile(source: PotentialSource, N: int, scan_range=None) -> GapProfile:
    """Occurrence-gap radius for every length-N subword.

    For a periodic word the occurrence set of each subword is itself periodic,
    so the radii are exact; scanned sources get a flagged lower estimate from
    the consecutive occurrences seen.
    """
    if N < 1:
        raise ValidationError("N: must be a positive integer")
    alphabet = source.alphabet
    if source.period is not None:
        p = source.period
        letters = source.letters_range(1, p + N - 1)
        positions: dict = {}
        for i in range(p):
            positions.setdefault(tuple(letters[i:i + N]), []).append(i + 1)
        per_word = {}
        for w, occ in positions.items():
            diffs = [b - a for a, b in zip(occ, occ[1:])]
            diffs.append(occ[0] + p - occ[-1])
            per_word[FiniteWord(w, alphabet)] = _covering_radius(diffs)
        g_n = max(per_word.values(), default=0)
        return GapProfile(N, per_word, g_n, exact=True, scan_range=None)

    lo, hi = _scan_starts(source, N, scan_range)
    letters = source.letters_range(lo, hi + N - 1) if lo <= hi else []
    last_seen: dict = {}
    worst: dict = {}
    for i in range(max(0, hi - lo + 1)):
        w = tuple(letters[i:i + N])
        pos = lo + i
        if w in last_seen:
            d = pos - last_seen[w]
            if d > worst[w]:
                worst[w] = d
        else:
            worst[w] = 0
        last_seen[w] = pos
    per_word = {FiniteWord(w, alphabet): d // 2 for w, d in worst.items()}
    g_n = max(per_word.values(), default=0)
    return GapProfile(N, per_word, g_n, exact=False, scan_range=(lo, hi))


def check_subword_condition(target: PotentialSource, approximant: PotentialSource,
                            N: int, scan_range=None) -> SubwordConditionReport:
    """Compare length-N subword sets; equality is the surrogate condition."""
    if target.alphabet.letters != approximant.alphabet.letters:
        raise ValidationError("alphabet: target and approximant use different alphabets")
    sa = subword_set(target, N, scan_range)
    sb = subword_set(approximant, N, scan_range)
    missing = frozenset(sa.words - sb.words)
    extra = frozenset(sb.words - sa.words)
    return SubwordConditionReport(
        N=N,
        equal=not missing and not extra,
        missing=SubwordSet(N, missing, exact=sa.exact and sb.exact),
        extra=SubwordSet(N, extra, exact=sa.exact and sb.exact),
        exact=sa.exact and sb.exact,
    )


def prefix_periodization(source: PotentialSource, N: int,
                         scan_bound: int = 20000) -> PeriodicWord:
    """Periodic surrogate built from a one-sided prefix.

    Finds the smallest r such that the prefix b[1..r] already shows every
    length-N subword seen on the scan, then extends the prefix to just before
    the first recurrence of b[1..N] after position r and repeats it.  The
    result has exactly the same length-N subwords as the scanned word.
    """
    if N < 1:
        raise ValidationError("N: must be a positive integer")
    start = source.domain_start if source.domain_start is not None else 1
    if start != 1:
        raise ValidationError("source: prefix periodization needs a word starting at 1")
    end = scan_bound
    if source.domain_end is not None:
        end = min(end, source.domain_end)
    if end < N:
        raise ValidationError("scan_bound: shorter than one window")
    letters = source.letters_range(1, end)
    n_windows = end - N + 1
    target = {tuple(letters[i:i + N]) for i in range(n_windows)}

    seen: set = set()
    r = None
    for i in range(n_windows):
        seen.add(tuple(letters[i:i + N]))
        if len(seen) == len(target):
            r = i + N  # window starting at i+1 ends at position i+N
            break
    if r is None:
        raise SearchExhaustedError("scan_bound: subword collection never saturated")

    head = tuple(letters[:N])
    k = None
    for i in range(r, n_windows):  # start positions r+1..  (0-based i = pos-1)
        if tuple(letters[i:i + N]) == head:
            k = i + 1
            break
    if k is None:
        raise SearchExhaustedError(
            "scan_bound: prefix never recurs past the saturation point")
    r_tilde = k - 1
    word = PeriodicWord(FiniteWord(tuple(letters[:r_tilde]), source.alphabet))
    made = subword_set(word, N)
    if {w.indices for w in made.words} != target:
        raise SearchExhaustedError(
            "scan_bound: periodization changed the subword set; the scanned prefix "
            "is not self-contained at this length")
    return word
