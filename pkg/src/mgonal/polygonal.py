"""Generalized m-gonal numbers and forms, target decomposition, and the global
representation decision by pruned exhaustive search."""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError


def coefficient_gcd(coeffs) -> int:
    """gcd of a coefficient tuple (reported to callers of rejected forms)."""
    return math.gcd(*coeffs) if len(coeffs) > 1 else coeffs[0]


@dataclass(frozen=True)
class MgonalForm:
    """A weighted sum of generalized m-gonal numbers with positive weights.

    Forms must be primitive (coefficient gcd 1); non-primitive tuples are
    rejected rather than normalized, because dividing by the gcd changes
    which integers are representable.
    """

    m: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 3:
            raise InputError(f"gonality m must be an integer >= 3, got {self.m!r}")
        coeffs = tuple(self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if not coeffs:
            raise InputError("coefficient tuple must be nonempty")
        for a in coeffs:
            if not isinstance(a, int) or a < 1:
                raise InputError(f"coefficients must be positive integers, got {a!r}")
        g = coefficient_gcd(coeffs)
        if g != 1:
            raise InputError(
                f"form is not primitive: gcd of coefficients is {g} (divide manually "
                "if a rescaled form is really intended)"
            )

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    @property
    def coeff_sum(self) -> int:
        return sum(self.coeffs)

    def describe(self) -> str:
        return f"<{','.join(map(str, self.coeffs))}>_{self.m}"


def polygonal_number(m: int, x: int) -> int:
    """The x-th generalized m-gonal number (m-2)(x^2-x)/2 + x; nonnegative for all x."""
    if not isinstance(m, int) or m < 3:
        raise InputError(f"gonality m must be an integer >= 3, got {m!r}")
    return (m - 2) * (x * x - x) // 2 + x


def invert_polygonal(m: int, value: int) -> int | None:
    """Some integer x with the x-th m-gonal number equal to ``value``, or None.

    Ties resolve to the smallest |x|, positive preferred, so results are
    reproducible.  Uses the exact discriminant (m-4)^2 + 8 value (m-2).
    """
    if not isinstance(m, int) or m < 3:
        raise InputError(f"gonality m must be an integer >= 3, got {m!r}")
    if value < 0:
        return None
    disc = (m - 4) ** 2 + 8 * value * (m - 2)
    if disc < 0:
        return None
    s = math.isqrt(disc)
    if s * s != disc:
        return None
    roots = []
    for num in ((m - 4) + s, (m - 4) - s):
        den = 2 * (m - 2)
        if num % den == 0:
            roots.append(num // den)
    if not roots:
        return None
    return min(roots, key=lambda x: (abs(x), x < 0))


def evaluate(form: MgonalForm, x) -> int:
    """Value of the form at the integer tuple ``x``."""
    x = tuple(x)
    if len(x) != form.rank:
        raise InputError(
            f"argument has length {len(x)}, form has rank {form.rank}"
        )
    m = form.m
    return sum(a * polygonal_number(m, xi) for a, xi in zip(form.coeffs, x))


@dataclass(frozen=True)
class TargetDecomposition:
    """N written as A(m-2) + B with 0 <= B <= m-3 (unique given m)."""

    N: int
    A: int
    B: int


def decompose_target(m: int, N: int) -> TargetDecomposition:
    if not isinstance(m, int) or m < 3:
        raise InputError(f"gonality m must be an integer >= 3, got {m!r}")
    if N < 0:
        raise InputError(f"target must be nonnegative, got {N}")
    A, B = divmod(N, m - 2)
    return TargetDecomposition(N=N, A=A, B=B)


@dataclass(frozen=True)
class Witness:
    """An integer vector witnessing that a form represents some target."""

    x: tuple[int, ...]


@lru_cache(maxsize=512)
def _term_table(m: int, a: int, cap: int):
    """All values a*P_m(x) <= cap as (value, x), largest value first.

    Ties break positive-x first, then by |x|; the value list (strictly
    ascending, deduplicated) is kept alongside for bisection.
    """
    terms = [(0, 0)]
    k = 1
    while True:
        hit = False
        for x in (k, -k):
            v = a * polygonal_number(m, x)
            if v <= cap:
                terms.append((v, x))
                hit = True
        if not hit:
            break
        k += 1
    terms.sort(key=lambda t: (-t[0], t[1] < 0, abs(t[1])))
    values_desc = [v for v, _ in terms]
    return terms, values_desc


def represents(form: MgonalForm, N: int) -> Witness | None:
    """A verified witness for form = N over the integers, or None.

    Exhaustive over the finite region a_i P_m(x_i) <= N, with capacity
    pruning; coefficients are processed left to right and candidate values
    largest-first (positive x preferred on ties), so the witness returned is
    reproducible.  The last coordinate is resolved by exact inversion.
    """
    if N < 0:
        raise InputError(f"target must be nonnegative, got {N}")
    coeffs = form.coeffs
    m = form.m
    n = len(coeffs)

    def walk(i: int, rem: int):
        if i == n - 1:
            if rem % coeffs[i]:
                return None
            x = invert_polygonal(m, rem // coeffs[i])
            return None if x is None else (x,)
        terms, values_desc = _term_table(m, coeffs[i], N)
        # skip terms whose value exceeds the remaining capacity
        lo = 0
        if terms and terms[0][0] > rem:
            # values_desc is descending; find first index with value <= rem
            lo = _first_at_most(values_desc, rem)
        for v, x in terms[lo:]:
            tail = walk(i + 1, rem - v)
            if tail is not None:
                return (x,) + tail
        return None

    sol = walk(0, N)
    return Witness(sol) if sol is not None else None


def _first_at_most(values_desc, cap: int) -> int:
    """Index of the first entry <= cap in a descending list (all > cap -> len)."""
    lo, hi = 0, len(values_desc)
    while lo < hi:
        mid = (lo + hi) // 2
        if values_desc[mid] > cap:
            lo = mid + 1
        else:
            hi = mid
    return lo


def quadratic_linear_sums(form: MgonalForm, x) -> tuple[int, int]:
    """(sum a_i x_i^2, sum a_i x_i) for the tuple ``x`` - the two invariants the
    representation system constrains."""
    x = tuple(x)
    if len(x) != form.rank:
        raise InputError("length mismatch")
    s2 = sum(a * xi * xi for a, xi in zip(form.coeffs, x))
    s1 = sum(a * xi for a, xi in zip(form.coeffs, x))
    return s2, s1
