"""Exact integer and p-adic utility layer.

Valuations, exhaustive congruence enumeration, Hensel-lift detection and
refinement, Hilbert symbols, and p-adic square classes.  All arithmetic uses
Python's arbitrary-precision integers; nothing here ever wraps around or
touches floating point (the lone ``math.inf`` is the valuation of zero).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .errors import ContractError, InputError, ResourceError

#: Valuation of 0; compares larger than every finite valuation.
INFINITY = math.inf

#: Default ceiling on the number of residue tuples an exhaustive congruence
#: scan may enumerate.  Override with the MGONAL_ORACLE_CAP environment
#: variable.
DEFAULT_ORACLE_CAP = 30_000_000
ORACLE_CAP_ENV = "MGONAL_ORACLE_CAP"

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact well beyond 64-bit inputs)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _require_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise InputError(f"{p!r} is not prime")


def prime_factors(n: int) -> tuple[tuple[int, int], ...]:
    """Factor ``|n|`` by trial division; returns ((p, exponent), ...) ascending.

    Sized for desk-scale inputs (coefficients, gonalities); determinants are
    never factored, only valuated at known primes.
    """
    if n == 0:
        raise InputError("cannot factor 0")
    n = abs(n)
    out = []
    for p in (2, 3):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    d = 5
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 2 if d % 6 == 5 else 4
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def odd_prime_divisors(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in prime_factors(n) if p != 2)


def ord_and_unit(x: int, p: int) -> tuple[int | float, int]:
    """Split ``x = p^v * u`` with ``p`` not dividing ``u``; (INFINITY, 0) for x=0."""
    _require_prime(p)
    if x == 0:
        return (INFINITY, 0)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return (v, x)


def ordp(x: int, p: int) -> int | float:
    """p-adic valuation of ``x`` (INFINITY for 0)."""
    return ord_and_unit(x, p)[0]


def modinv(a: int, m: int) -> int:
    return pow(a, -1, m)


@dataclass(frozen=True)
class PAdicContext:
    """A prime together with the working precision (arithmetic modulo p^precision)."""

    p: int
    precision: int

    def __post_init__(self):
        _require_prime(self.p)
        if not isinstance(self.precision, int) or self.precision < 1:
            raise InputError(f"precision must be a positive integer, got {self.precision!r}")

    @property
    def modulus(self) -> int:
        return self.p ** self.precision


def oracle_cap() -> int:
    raw = os.environ.get(ORACLE_CAP_ENV)
    if raw is None:
        return DEFAULT_ORACLE_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InputError(f"{ORACLE_CAP_ENV} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise InputError(f"{ORACLE_CAP_ENV} must be positive, got {cap}")
    return cap


def _poly_residual(coeffs, linear, constant, target, x) -> int:
    acc = constant - target
    for c, l, xi in zip(coeffs, linear, x):
        acc += c * xi * xi + l * xi
    return acc


def brute_force_congruence(coeffs, linear, constant: int, target: int,
                           modulus: int) -> list[tuple[int, ...]]:
    """All tuples x mod ``modulus`` with sum(c_i x_i^2 + l_i x_i) + constant = target.

    Exhaustive and deterministic (lexicographic order).  Refuses instances
    whose total tuple count exceeds the oracle cap.
    """
    coeffs = tuple(coeffs)
    linear = tuple(linear)
    if len(coeffs) != len(linear):
        raise InputError("coeffs and linear must have equal length")
    if modulus < 1:
        raise InputError(f"modulus must be positive, got {modulus}")
    n = len(coeffs)
    total = modulus ** n
    cap = oracle_cap()
    if total > cap:
        raise ResourceError(
            f"{total} residue tuples exceed the oracle cap {cap}"
        )
    sols = []
    for x in product(range(modulus), repeat=n):
        if _poly_residual(coeffs, linear, constant, target, x) % modulus == 0:
            sols.append(x)
    return sols


def _derivative_orders(coeffs, linear, partial, p):
    return [ordp(2 * c * xi + l, p) for c, l, xi in zip(coeffs, linear, partial)]


def hensel_liftable(coeffs, linear, target: int, partial, p: int, t: int) -> bool:
    """True iff ``partial`` (a solution mod p^(2t+1)) lifts to an exact p-adic root.

    The criterion: some coordinate i has ord_p(2 c_i x_i + l_i) <= t.  The
    premise that ``partial`` solves the congruence mod p^(2t+1) is checked.
    """
    coeffs = tuple(coeffs)
    linear = tuple(linear)
    partial = tuple(partial)
    _require_prime(p)
    if not isinstance(t, int) or t < 0:
        raise InputError(f"t must be a nonnegative integer, got {t!r}")
    if len(coeffs) != len(linear) or len(coeffs) != len(partial):
        raise InputError("coeffs, linear and partial must have equal length")
    mod = p ** (2 * t + 1)
    if _poly_residual(coeffs, linear, 0, target, partial) % mod != 0:
        raise ContractError(
            f"partial solution does not satisfy the congruence mod {p}^{2 * t + 1}"
        )
    return any(o <= t for o in _derivative_orders(coeffs, linear, partial, p))


def hensel_refine(coeffs, linear, target: int, partial, p: int, t: int,
                  extra: int) -> tuple[int, ...]:
    """Refine a liftable solution mod p^(2t+1) to a verified one mod p^(2t+1+extra).

    Newton iteration in the coordinate of least derivative valuation; the
    result is checked against the congruence before being returned.
    """
    coeffs = tuple(coeffs)
    linear = tuple(linear)
    if not isinstance(extra, int) or extra < 0:
        raise InputError(f"extra must be a nonnegative integer, got {extra!r}")
    if not hensel_liftable(coeffs, linear, target, partial, p, t):
        raise ContractError("partial solution is not liftable at this depth")
    orders = _derivative_orders(coeffs, linear, partial, p)
    i = min(range(len(orders)), key=lambda j: orders[j])
    ti = orders[i]
    prec = 2 * t + 1 + extra
    big = p ** prec
    pt = p ** ti
    x = [xi % big for xi in partial]
    for _ in range(prec + 2):
        g = _poly_residual(coeffs, linear, 0, target, x)
        if g % big == 0:
            break
        d = 2 * coeffs[i] * x[i] + linear[i]
        # ord(d) stays exactly ti: corrections have strictly larger valuation
        step = (g // pt) * modinv((d // pt) % big, big)
        x[i] = (x[i] - step) % big
    else:  # pragma: no cover - convergence is quadratic
        raise ContractError("Newton refinement did not converge")
    if _poly_residual(coeffs, linear, 0, target, x) % big != 0:  # pragma: no cover
        raise ContractError("refined solution failed verification")
    return tuple(x)


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol of a unit ``a`` modulo an odd prime ``p`` (+1 or -1)."""
    r = pow(a % p, (p - 1) // 2, p)
    if r == 0:
        raise InputError(f"{a} is not a unit modulo {p}")
    return 1 if r == 1 else -1


@lru_cache(maxsize=None)
def least_nonresidue(p: int) -> int:
    """Smallest positive quadratic nonresidue modulo an odd prime."""
    for r in range(2, p):
        if legendre_symbol(r, p) == -1:
            return r
    raise InputError(f"{p} has no nonresidue (not an odd prime?)")  # pragma: no cover


def _eps2(u: int) -> int:
    return 0 if u % 4 == 1 else 1


def _omega2(u: int) -> int:
    return 0 if u % 8 in (1, 7) else 1


def hilbert_symbol(a: int, b: int, p: int) -> int:
    """+1 iff z^2 = a x^2 + b y^2 has a nontrivial p-adic solution, else -1.

    Classical closed form: for odd p with a = p^alpha u, b = p^beta v it is
    (-1)^(alpha beta (p-1)/2) (u|p)^beta (v|p)^alpha; the dyadic case uses the
    (u-1)/2 and (u^2-1)/8 characters.
    """
    _require_prime(p)
    if a == 0 or b == 0:
        raise InputError("hilbert_symbol requires nonzero arguments")
    alpha, u = ord_and_unit(a, p)
    beta, v = ord_and_unit(b, p)
    if p == 2:
        exp = _eps2(u) * _eps2(v) + alpha * _omega2(v) + beta * _omega2(u)
        return -1 if exp % 2 else 1
    sign = 1
    if (alpha % 2) and (beta % 2) and ((p - 1) // 2) % 2:
        sign = -sign
    if beta % 2:
        sign *= legendre_symbol(u, p)
    if alpha % 2:
        sign *= legendre_symbol(v, p)
    return sign


def is_padic_square(x: int, p: int) -> bool:
    """True iff nonzero ``x`` is a square in the p-adic integers."""
    _require_prime(p)
    if x == 0:
        raise InputError("0 has no square class")
    v, u = ord_and_unit(x, p)
    if v % 2:
        return False
    if p == 2:
        return u % 8 == 1
    return legendre_symbol(u, p) == 1


def square_class(u: int, ctx: PAdicContext) -> int:
    """Canonical representative of ``u`` modulo unit squares (and p-power squares).

    Odd p: one of {1, r, p, p*r} with r the least positive nonresidue.
    p = 2: one of {+-1, +-2, +-5, +-10} times 4^k, preserving the valuation;
    requires precision >= 3 (unit squares are exactly 1 + 8 Z_2).
    """
    if u == 0:
        raise InputError("0 has no square class")
    p = ctx.p
    v, w = ord_and_unit(u, p)
    if p == 2:
        if ctx.precision < 3:
            raise ContractError("square classes at p=2 need precision >= 3")
        rep = {1: 1, 3: -5, 5: 5, 7: -1}[w % 8]
        return rep * (2 if v % 2 else 1) * 4 ** (v // 2)
    rep = 1 if legendre_symbol(w, p) == 1 else least_nonresidue(p)
    return rep * (p if v % 2 else 1)


def unit_square_class_reps(p: int) -> tuple[int, ...]:
    """Representatives of the unit square classes of the p-adic integers."""
    _require_prime(p)
    if p == 2:
        return (1, 3, 5, 7)
    return (1, least_nonresidue(p))
