import cmath
import math
import random

import pytest

from tilingspectra.energy import EnergyParseError, parse_energy
from tilingspectra.exactnum import (
    QSQRT2,
    QSQRT5,
    Z8,
    Z10,
    CycloPoint,
    QuadScalar,
    RingMismatchError,
    dot_sign,
    golden,
    orient,
    silver,
)


def _rand_point(rng, ring, span=6):
    return CycloPoint(ring, [rng.randint(-span, span) for _ in range(4)])


def _approx(p: CycloPoint) -> complex:
    x, y = p.embed()
    return complex(x, y)


@pytest.mark.parametrize("ring", [Z10, Z8])
def test_ring_ops_match_complex_embedding(ring):
    rng = random.Random(7)
    for _ in range(200):
        a, b = _rand_point(rng, ring), _rand_point(rng, ring)
        k = rng.randint(-12, 12)
        assert abs(_approx(a + b) - (_approx(a) + _approx(b))) < 1e-9
        assert abs(_approx(a * b) - _approx(a) * _approx(b)) < 1e-8
        zk = cmath.exp(2j * math.pi * k / (10 if ring == Z10 else 8))
        assert abs(_approx(a.rotate(k)) - _approx(a) * zk) < 1e-9
        assert abs(_approx(a.conj()) - _approx(a).conjugate()) < 1e-9


@pytest.mark.parametrize("ring", [Z10, Z8])
def test_exact_signs_agree_with_floats_away_from_zero(ring):
    rng = random.Random(11)
    for _ in range(300):
        p = _rand_point(rng, ring)
        z = _approx(p)
        if abs(z.real) > 1e-6:
            assert p.re_sign() == (1 if z.real > 0 else -1)
        if abs(z.imag) > 1e-6:
            assert p.im_sign() == (1 if z.imag > 0 else -1)


def test_signs_of_exact_zero_parts():
    # 1 + zeta^5 = 0 in Z10; zeta^2 - zeta^-2 is purely imaginary in Z8
    assert CycloPoint.zeta(Z10, 5) + 1 == CycloPoint.zero(Z10)
    p = CycloPoint.zeta(Z8, 2) - CycloPoint.zeta(Z8, 6)
    assert p.re_sign() == 0 and p.im_sign() == 1


def test_zeta_order_and_units():
    assert CycloPoint.zeta(Z10, 10) == CycloPoint.one(Z10)
    assert CycloPoint.zeta(Z8, 8) == CycloPoint.one(Z8)
    phi = golden()
    assert phi * phi == phi + 1
    lam = silver()
    assert lam * lam == lam * 2 + 1
    assert lam * (lam - 2) == CycloPoint.one(Z8)


def test_orient_and_dot_sign():
    o, one, i = CycloPoint.zero(Z8), CycloPoint.one(Z8), CycloPoint.zeta(Z8, 2)
    assert orient(o, one, i) == 1
    assert orient(o, i, one) == -1
    assert orient(o, one, one * 3) == 0
    assert dot_sign(one, i) == 0
    assert dot_sign(one, one) == 1


def test_mixed_rings_rejected():
    with pytest.raises(RingMismatchError):
        CycloPoint.one(Z10) + CycloPoint.one(Z8)


def test_quadscalar_field_axioms():
    rng = random.Random(3)
    for fld, d in ((QSQRT5, 5), (QSQRT2, 2)):
        for _ in range(200):
            x = QuadScalar(fld, rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(1, 7))
            y = QuadScalar(fld, rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(1, 7))
            fx, fy = float(x), float(y)
            assert math.isclose(float(x + y), fx + fy, abs_tol=1e-9)
            assert math.isclose(float(x * y), fx * fy, abs_tol=1e-9)
            if x:
                assert x * x.inverse() == 1
            assert (x < y) == (fx < fy) or abs(fx - fy) < 1e-12
            assert (x * x.conjugate()).is_rational()
        assert QuadScalar(fld, 0, 1) ** 2 == d


def test_quadscalar_normal_form_and_hash():
    a = QuadScalar(QSQRT5, 2, 4, 6)
    b = QuadScalar(QSQRT5, -1, -2, -3)
    assert (a.a, a.b, a.c) == (1, 2, 3)
    assert a == b and hash(a) == hash(b)
    assert a + (-b) == 0
    assert QuadScalar(QSQRT5, 4) == 4
    assert QuadScalar.from_json(a.to_json()) == a


def test_golden_identities():
    phi = QuadScalar.phi()
    assert phi**2 == phi + 1
    assert phi ** -2 == QuadScalar(QSQRT5, 3, -1, 2)
    assert phi**4 * phi ** -4 == 1


@pytest.mark.parametrize(
    "token, value",
    [
        ("4", QuadScalar(QSQRT5, 4)),
        ("6-phi", QuadScalar(QSQRT5, 11, -1, 2)),
        ("5+phi", QuadScalar(QSQRT5, 11, 1, 2)),
        ("1/phi^2", QuadScalar(QSQRT5, 3, -1, 2)),
        ("phi^2", QuadScalar(QSQRT5, 3, 1, 2)),
        ("(11-sqrt5)/2", QuadScalar(QSQRT5, 11, -1, 2)),
        ("2+sqrt2", QuadScalar(QSQRT2, 2, 1)),
        ("silver^2", QuadScalar(QSQRT2, 3, 2)),
    ],
)
def test_parse_energy(token, value):
    assert parse_energy(token) == value


def test_parse_energy_default_field():
    assert parse_energy("6", QSQRT2).field == QSQRT2


@pytest.mark.parametrize("token", ["", "phi+sqrt2", "2**phi", "x", "1/0", "1.5", "__import__('os')"])
def test_parse_energy_rejects(token):
    with pytest.raises(EnergyParseError):
        parse_energy(token)
