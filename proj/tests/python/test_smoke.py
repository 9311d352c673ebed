import math

import pytest

import cldiv


def test_class_group_of_23():
    cg = cldiv.class_group(23)
    assert cg["discriminant"] == -23
    assert cg["h"] == 3
    assert cg["forms"] == [(1, 1, 6), (2, -1, 3), (2, 1, 3)]


def test_class_number_against_form_count():
    # brute-force count of reduced forms of discriminant -4 * 5
    delta = -20
    count = 0
    for a in range(1, 10):
        for b in range(-a + 1, a + 1):
            if (b * b - delta) % (4 * a):
                continue
            c = (b * b - delta) // (4 * a)
            if c < a or (b < 0 and a == c) or math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            count += 1
    assert cldiv.class_group(5)["h"] == count == 2


def test_not_squarefree_is_rejected():
    with pytest.raises(ValueError):
        cldiv.class_group(12)


def test_special_pair():
    w = cldiv.is_special(1, 4, 4)
    assert w is not None
    m, t = w["m_rep"], w["t_rep"]
    assert (2 * m**2 - t**2 - 1) % 4 == 0


def test_case2_tuples_are_certified():
    a, b, _ = cldiv.lift_progression(1, 4, 4)
    for m, t, D in cldiv.construct_case2(1, 4, 4, 3000):
        assert D == 2 * m * m - t * t
        assert (D - a) % b == 0
        if D >= 63 and all(D % (p * p) for p in range(2, int(D**0.5) + 1)):
            assert cldiv.has_element_of_order(D, 4)


def test_census_exact_small():
    # square-free D <= 100 with D = 1 (mod 1): every class group has an element of order 1
    squarefree = [d for d in range(1, 101) if all(d % (p * p) for p in range(2, 11))]
    assert cldiv.census_exact(100, 0, 1, 1) == len(squarefree)


def test_fit_exponent_line():
    pts = [(10.0**k, 3.0 * 10.0 ** (0.75 * k)) for k in range(2, 6)]
    assert cldiv.fit_exponent(pts) == pytest.approx(0.75)


def test_screen_27a4():
    res = cldiv.screen("27a4", 1000)
    assert (res["A"], res["B"]) == (1, 3)
    for D, h, _ in res["witnesses"]:
        assert D % 3 == 1 and h % 3 == 0


def test_cli_round_trip():
    code, out, err = cldiv.run(["fit", "--points", "100:10,10000:100"])
    assert code == 0, err
    assert out.splitlines()[1].endswith("0.500000")
    code, _, _ = cldiv.run(["special", "--A", "1", "--B", "0", "--g", "4"])
    assert code == 2
