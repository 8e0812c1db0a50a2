import random
from fractions import Fraction

import pytest

from mgonal import (
    InputError,
    MgonalForm,
    coefficient_gcd,
    decompose_target,
    evaluate,
    invert_polygonal,
    locally_represents,
    polygonal_number,
    represents,
)
from mgonal.polygonal import quadratic_linear_sums
from mgonal.quadratic import eq2_residual


def test_polygonal_examples():
    assert polygonal_number(5, 3) == 12
    assert polygonal_number(4, -7) == 49
    assert polygonal_number(3, -2) == 1


def test_polygonal_validates_m():
    with pytest.raises(InputError):
        polygonal_number(2, 1)


def test_basic_identities():
    for m in range(3, 101):
        assert polygonal_number(m, 0) == 0
        assert polygonal_number(m, 1) == 1


def test_nonnegative_grid():
    for m in range(3, 41):
        for x in range(-200, 201):
            assert polygonal_number(m, x) >= 0


def test_invert_examples():
    assert invert_polygonal(6, 28) == 4
    # exhaustive scan oracle for the next two
    assert {x for x in range(-10, 11) if polygonal_number(5, x) == 7} == {-2}
    assert invert_polygonal(5, 7) == -2
    assert all(polygonal_number(5, x) != 3 for x in range(-10, 11))
    assert invert_polygonal(5, 3) is None


def test_invert_round_trip():
    rng = random.Random(11)
    for _ in range(400):
        m = rng.randint(3, 30)
        x = rng.randint(-150, 150)
        value = polygonal_number(m, x)
        y = invert_polygonal(m, value)
        assert y is not None and polygonal_number(m, y) == value


def test_form_validation():
    with pytest.raises(InputError):
        MgonalForm(5, (2, 4, 6, 8, 10))
    assert coefficient_gcd((2, 4, 6, 8, 10)) == 2
    with pytest.raises(InputError):
        MgonalForm(5, ())
    with pytest.raises(InputError):
        MgonalForm(5, (1, 0, 1, 1, 1))
    with pytest.raises(InputError):
        MgonalForm(2, (1, 1, 1, 1, 1))


def test_evaluate_examples():
    assert evaluate(MgonalForm(5, (1, 1, 1, 1, 1)), (1, 1, 1, 0, 0)) == 3
    assert evaluate(MgonalForm(5, (1, 2, 3, 4, 5)), (1, 0, 0, 0, 0)) == 1
    assert evaluate(MgonalForm(6, (2, 1, 1, 1, 1)), (0, -1, 0, 0, 0)) == 3
    with pytest.raises(InputError):
        evaluate(MgonalForm(5, (1, 1, 1, 1, 1)), (1, 2))


def test_decompose_examples():
    d = decompose_target(7, 23)
    assert (d.A, d.B) == (4, 3)
    assert decompose_target(5, 3) == decompose_target(5, 3)
    assert (decompose_target(5, 3).A, decompose_target(5, 3).B) == (1, 0)
    assert (decompose_target(5, 2).A, decompose_target(5, 2).B) == (0, 2)


def test_decompose_unique_and_m3():
    rng = random.Random(12)
    for _ in range(200):
        m = rng.randint(3, 20)
        N = rng.randint(0, 10**6)
        d = decompose_target(m, N)
        assert d.N == d.A * (m - 2) + d.B
        assert 0 <= d.B <= m - 3
    assert decompose_target(3, 17).B == 0


class TestRepresents:
    def test_five_squares_witness(self):
        w = represents(MgonalForm(4, (1, 1, 1, 1, 1)), 5)
        assert w.x == (2, 1, 0, 0, 0)

    def test_pentagonal_sum(self):
        form = MgonalForm(5, (1, 1, 1, 1, 1))
        # exhaustive oracle: generalized pentagonal values up to 33
        values = sorted({polygonal_number(5, x) for x in range(-10, 11)
                         if polygonal_number(5, x) <= 33})
        reachable = {0}
        for _ in range(5):
            reachable = {r + v for r in reachable for v in values if r + v <= 33}
        assert 33 in reachable
        w = represents(form, 33)
        assert w is not None and evaluate(form, w.x) == 33

    def test_zero(self):
        w = represents(MgonalForm(5, (1, 1, 1, 1, 1)), 0)
        assert w.x == (0, 0, 0, 0, 0)

    def test_witness_always_evaluates(self):
        rng = random.Random(13)
        for _ in range(120):
            m = rng.randint(3, 10)
            n = rng.randint(1, 5)
            coeffs = [rng.randint(1, 6) for _ in range(n)]
            coeffs[rng.randrange(n)] = 1
            form = MgonalForm(m, tuple(coeffs))
            N = rng.randint(0, 300)
            w = represents(form, N)
            if w is not None:
                assert evaluate(form, w.x) == N

    def test_not_represented(self):
        # <2,3>_4: 2x^2 + 3y^2 never equals 1
        assert represents(MgonalForm(4, (2, 3)), 1) is None

    def test_soundness_bridge(self):
        rng = random.Random(14)
        for _ in range(40):
            m = rng.randint(3, 9)
            coeffs = tuple(rng.randint(1, 5) for _ in range(4)) + (1,)
            form = MgonalForm(m, coeffs)
            N = rng.randint(0, 120)
            if represents(form, N) is not None:
                assert locally_represents(form, N).represented


class TestReductionIdentity:
    """The representation system and the reduced equation determine each other:
    f_eq2(x_2..x_n) = a_1 r_quad + r_lin (r_lin - 2 a_1 x_1)."""

    def _random_instance(self, rng):
        n = rng.choice([5, 6])
        m = rng.randint(3, 12)
        coeffs = [rng.randint(1, 12) for _ in range(n)]
        coeffs[rng.randrange(n)] = 1
        form = MgonalForm(m, tuple(coeffs))
        A = rng.randint(-20, 20)
        B = rng.randint(-20, 20)
        k = rng.randint(-20, 20)
        x = tuple(rng.randint(-8, 8) for _ in range(n))
        return form, A, B, k, x

    def test_completion_of_square(self):
        rng = random.Random(15)
        for _ in range(120):
            form, A, B, k, x = self._random_instance(rng)
            a = form.coeffs
            n = form.rank
            c = B + k * (form.m - 2)
            s = sum(a[i] * x[i] for i in range(1, n))
            lhs = Fraction((c - s) ** 2 + sum(
                a[0] * a[i] * x[i] * x[i] for i in range(1, n)
            ))
            r = Fraction(1, sum(a))
            y = [Fraction(x[i]) - c * r for i in range(1, n)]
            quad = sum(
                (a[0] * a[i + 1] + a[i + 1] ** 2) * y[i] * y[i]
                for i in range(n - 1)
            ) + 2 * sum(
                a[i + 1] * a[j + 1] * y[i] * y[j]
                for i in range(n - 1) for j in range(i + 1, n - 1)
            )
            rhs = quad + c * c * (1 - sum(a[i] * r for i in range(1, n)))
            assert lhs == rhs

    def test_solution_bijection(self):
        rng = random.Random(16)
        for _ in range(200):
            form, A, B, k, x = self._random_instance(rng)
            s2, s1 = quadratic_linear_sums(form, x)
            # forward: build (A, B) making x solve the system, then the
            # reduced equation must vanish on the tail
            B_val = s1 - k * (form.m - 2)
            num = s2 - B_val - k * (form.m - 4)
            assert num % 2 == 0
            A_val = num // 2
            assert eq2_residual(form, A_val, B_val, k, x[1:]) == 0
            # reverse: whenever the reduced equation vanishes and the first
            # coordinate is integral, the system holds
            a1 = form.coeffs[0]
            c = B_val + k * (form.m - 2)
            tail_s = sum(form.coeffs[i] * x[i] for i in range(1, form.rank))
            assert (c - tail_s) % a1 == 0
            x1 = (c - tail_s) // a1
            assert x1 == x[0]
            full = (x1,) + x[1:]
            ss2, ss1 = quadratic_linear_sums(form, full)
            assert ss2 == 2 * A_val + B_val + k * (form.m - 4)
            assert ss1 == B_val + k * (form.m - 2)

    def test_reverse_direction_random_tails(self):
        # a vanishing reduced equation with integral first coordinate gives a
        # solution of the system
        rng = random.Random(17)
        built = 0
        while built < 60:
            n = rng.choice([5, 6])
            m = rng.randint(3, 12)
            coeffs = [rng.randint(1, 12) for _ in range(n)]
            coeffs[rng.randrange(n)] = 1
            form = MgonalForm(m, tuple(coeffs))
            k = rng.randint(-20, 20)
            tail = tuple(rng.randint(-8, 8) for _ in range(n - 1))
            x1 = rng.randint(-8, 8)
            a = form.coeffs
            s1 = a[0] * x1 + sum(ai * xi for ai, xi in zip(a[1:], tail))
            B = s1 - k * (m - 2)
            s2 = a[0] * x1 * x1 + sum(
                ai * xi * xi for ai, xi in zip(a[1:], tail)
            )
            num = s2 - B - k * (m - 4)
            if num % 2:
                continue
            A = num // 2
            assert eq2_residual(form, A, B, k, tail) == 0
            built += 1
