import pytest

from subzero.bounds import BoundOverflow, BoundParams, bound_f, bound_g, bound_h

P = BoundParams(8, 8, 2)


def naive_f(c1, c2, sq, q, n):
    """Direct transcription with plain loops, no caching, no closed forms."""
    if q == 0:
        return c1 * n + c2

    def f(m):
        return naive_f(c1, c2, sq, q - 1, m)

    h = f(n)
    for _ in range(2**n):
        h = f(2 * n) + h * n + n * n
    m = n + sq
    g = f(m)
    for _ in range(2 ** (n + sq)):
        g = f(2 * m) + g * m + m * m
    k = max(
        f(2 * n) + h * n + n * n,
        f(2 * n) * (2**n + 1) + n * n,
        3 * f(2) + 1 + f(0) + 1,
        f(2 * n) + g * n + n * n,
    )
    return k * (sq + 1) + sq * n


def test_base_examples():
    assert bound_f(P, 0, 3) == 32
    assert bound_f(P, 0, 0) == 8
    assert bound_h(BoundParams(8, 8, 1), 1, 2, 1) == 92
    assert bound_g(P, 1, 1, 0) == 32
    assert bound_g(P, 1, 1, 1) == 161


def test_f1_against_naive_loop():
    assert bound_f(P, 1, 1) == naive_f(8, 8, 2, 1, 1) == 1269533
    for sq in (1, 2, 3):
        for n in range(3):
            assert bound_f(BoundParams(3, 5, sq), 1, n) == naive_f(3, 5, sq, 1, n)


def test_base_formula():
    for c1, c2 in ((8, 8), (1, 1), (5, 17)):
        for n in range(101):
            assert bound_f(BoundParams(c1, c2, 1), 0, n) == c1 * n + c2


def test_one_step_recurrences():
    for sq in (1, 2, 3):
        p = BoundParams(8, 8, sq)
        for q in (1, 2):
            for n in range(3):
                m = n + sq
                for k in range(6):
                    assert bound_h(p, q, n, k + 1) == bound_f(p, q - 1, 2 * n) + bound_h(p, q, n, k) * n + n * n
                    assert bound_g(p, q, n, k + 1) == bound_f(p, q - 1, 2 * m) + bound_g(p, q, n, k) * m + m * m


def test_monotone_grid():
    for sq in (1, 2, 3):
        p = BoundParams(8, 8, sq)
        for q in range(3):
            for n in range(5):
                v = bound_f(p, q, n)
                if n < 4:
                    assert v <= bound_f(p, q, n + 1)
                if q < 2:
                    assert v <= bound_f(p, q + 1, n)
                if q >= 1:
                    for k in range(4):
                        assert bound_h(p, q, n, k) <= bound_h(p, q, n, k + 1)
                        assert bound_g(p, q, n, k) <= bound_g(p, q, n, k + 1)
                    if n < 4:
                        assert bound_h(p, q, n, 2) <= bound_h(p, q, n + 1, 2)
                        assert bound_g(p, q, n, 2) <= bound_g(p, q, n + 1, 2)


def test_overflow_is_reported():
    with pytest.raises(BoundOverflow) as e:
        bound_f(BoundParams(8, 8, 2), 3, 3)
    assert e.value.bits > e.value.budget
    with pytest.raises(BoundOverflow):
        bound_f(BoundParams(8, 8, 1, max_bits=64), 2, 2)


def test_bad_params():
    with pytest.raises(ValueError):
        BoundParams(0, 8, 1)
    with pytest.raises(ValueError):
        BoundParams(8, 8, 0)
    with pytest.raises(ValueError):
        bound_f(P, -1, 0)
    with pytest.raises(ValueError):
        bound_h(P, 0, 1, 1)
