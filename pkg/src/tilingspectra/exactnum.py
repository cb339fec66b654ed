"""Exact arithmetic for tile geometry and spectral scalars.

Two number systems are used throughout the package:

* :class:`CycloPoint` -- an element of the cyclotomic ring Z[zeta_10] or
  Z[zeta_8], stored as four integer coefficients over the power basis
  ``1, z, z**2, z**3``.  Every tile vertex lives in one of these rings, so
  substitution (multiplication by a unit) and rotation (multiplication by
  ``z``) never leave the integers.
* :class:`QuadScalar` -- an element ``(a + b*sqrt(d)) / c`` of Q(sqrt 5) or
  Q(sqrt 2), used for energies, jump bounds and exact null spaces.

Signs of real and imaginary parts of cyclotomic points are decided exactly;
the floating embedding is only used for rendering.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable, Sequence

Z10 = "Z10"
Z8 = "Z8"
QSQRT5 = "Qsqrt5"
QSQRT2 = "Qsqrt2"

_ORDER = {Z10: 10, Z8: 8}
_ANGLE = {Z10: math.pi / 5, Z8: math.pi / 4}
# zeta**4 expressed in the power basis (minimal polynomial reduction)
_Z4 = {Z10: (-1, 1, -1, 1), Z8: (-1, 0, 0, 0)}
_FIELD_OF_RING = {Z10: QSQRT5, Z8: QSQRT2}
_RADICAND = {QSQRT5: 5, QSQRT2: 2}


class RingMismatchError(ValueError):
    pass


def _reduce(ring: str, c: Sequence[int]) -> tuple[int, int, int, int]:
    """Reduce a coefficient list of any length to the degree-4 power basis."""
    c = list(c)
    z4 = _Z4[ring]
    for k in range(len(c) - 1, 3, -1):
        t = c[k]
        if t:
            c[k] = 0
            for j in range(4):
                if z4[j]:
                    c[k - 4 + j] += t * z4[j]
    c += [0] * (4 - len(c))
    return (c[0], c[1], c[2], c[3])


def _build_powers(ring: str) -> list[tuple[int, int, int, int]]:
    n = _ORDER[ring]
    out = []
    for k in range(n):
        v = [0] * (k + 1)
        v[k] = 1
        out.append(_reduce(ring, v))
    return out


_POWERS = {r: _build_powers(r) for r in _ORDER}


def _mul_raw(ring, a, b):
    prod = [0] * 7
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] += ai * bj
    return _reduce(ring, prod)


def _rot_raw(ring, c, k):
    """Multiply coefficient tuple ``c`` by zeta**k."""
    k %= _ORDER[ring]
    if k == 0:
        return c
    return _mul_raw(ring, c, _POWERS[ring][k])


def _conj_raw(ring, c):
    n = _ORDER[ring]
    out = [0, 0, 0, 0]
    for k, ck in enumerate(c):
        if ck:
            p = _POWERS[ring][(-k) % n]
            for j in range(4):
                out[j] += ck * p[j]
    return tuple(out)


def _quad_sign(x: int, y: int, d: int) -> int:
    """Exact sign of x + y*sqrt(d) for integers x, y."""
    sx = (x > 0) - (x < 0)
    sy = (y > 0) - (y < 0)
    if sx == 0:
        return sy
    if sy == 0 or sx == sy:
        return sx
    # opposite signs: compare x**2 with d*y**2
    diff = x * x - d * y * y
    return sx if diff > 0 else (-sx if diff < 0 else 0)


def _re_parts(ring, c):
    """Return (x, y, d) with 2*Re(point) proportional to x + y*sqrt(d)."""
    c0, c1, c2, c3 = c
    if ring == Z10:
        # 2 Re = 2c0 + c1*phi + (c2 - c3)(phi - 1); phi = (1 + sqrt5)/2
        X = 2 * c0 - (c2 - c3)
        Y = c1 + c2 - c3
        return 2 * X + Y, Y, 5
    return 2 * c0, c1 - c3, 2


def _im_parts(ring, c):
    """Return (x, y, d) with Im(point) positively proportional to x + y*sqrt(d)."""
    c0, c1, c2, c3 = c
    if ring == Z10:
        # Im / sin36 = c1 + (c2 + c3) phi
        return 2 * c1 + c2 + c3, c2 + c3, 5
    return 2 * c2, c1 + c3, 2


class CycloPoint:
    """Exact point of the plane with coordinates in Z[zeta_10] or Z[zeta_8]."""

    __slots__ = ("ring", "coeffs", "_hash")

    def __init__(self, ring: str, coeffs: Iterable[int]):
        if ring not in _ORDER:
            raise ValueError(f"unknown ring {ring!r}")
        c = tuple(int(x) for x in coeffs)
        if len(c) != 4:
            c = _reduce(ring, c)
        self.ring = ring
        self.coeffs = c
        self._hash = hash((ring, c))

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, ring):
        return cls(ring, (0, 0, 0, 0))

    @classmethod
    def one(cls, ring):
        return cls(ring, (1, 0, 0, 0))

    @classmethod
    def zeta(cls, ring, k=1):
        return cls(ring, _POWERS[ring][k % _ORDER[ring]])

    @classmethod
    def integer(cls, ring, n):
        return cls(ring, (n, 0, 0, 0))

    @property
    def order(self) -> int:
        return _ORDER[self.ring]

    # arithmetic -------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, CycloPoint):
            if isinstance(other, int):
                return CycloPoint.integer(self.ring, other)
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        return CycloPoint(self.ring, (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]))

    __radd__ = __add__

    def __neg__(self):
        return CycloPoint(self.ring, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        return CycloPoint(self.ring, (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return CycloPoint(self.ring, _mul_raw(self.ring, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not ring elements in general")
        out = CycloPoint.one(self.ring)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def rotate(self, k: int) -> "CycloPoint":
        """Multiply by zeta**k (rotation by k * 36 or k * 45 degrees)."""
        return CycloPoint(self.ring, _rot_raw(self.ring, self.coeffs, k))

    def conj(self) -> "CycloPoint":
        return CycloPoint(self.ring, _conj_raw(self.ring, self.coeffs))

    def __eq__(self, other):
        return (
            isinstance(other, CycloPoint)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"CycloPoint({self.ring}, {list(self.coeffs)})"

    # exact real-valued queries ----------------------------------------
    def re_sign(self) -> int:
        return _quad_sign(*_re_parts(self.ring, self.coeffs))

    def im_sign(self) -> int:
        return _quad_sign(*_im_parts(self.ring, self.coeffs))

    def re(self) -> "QuadScalar":
        x, y, d = _re_parts(self.ring, self.coeffs)
        # 2 Re = x' + y' phi for Z10 was folded into (x + y sqrt5) / 2
        if self.ring == Z10:
            return QuadScalar(QSQRT5, x, y, 4)
        return QuadScalar(QSQRT2, x, y, 2)

    def im_scaled(self) -> "QuadScalar":
        """Imaginary part, exact for Z8 and in units of sin(pi/5) for Z10."""
        x, y, _ = _im_parts(self.ring, self.coeffs)
        if self.ring == Z10:
            return QuadScalar(QSQRT5, x, y, 2)
        return QuadScalar(QSQRT2, x, y, 2)

    def norm2(self) -> "QuadScalar":
        """|p|**2, a totally real element of the maximal real subfield."""
        return (self * self.conj()).re()

    def embed(self) -> tuple[float, float]:
        th = _ANGLE[self.ring]
        x = y = 0.0
        for k, c in enumerate(self.coeffs):
            if c:
                x += c * math.cos(k * th)
                y += c * math.sin(k * th)
        return x, y

    def to_json(self):
        return {"ring": self.ring, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["ring"], obj["coeffs"])


def golden(ring: str = Z10) -> CycloPoint:
    """phi = zeta + zeta**-1 in Z[zeta_10]."""
    if ring != Z10:
        raise RingMismatchError("phi lives in Z10")
    return CycloPoint.zeta(Z10, 1) + CycloPoint.zeta(Z10, 9)


def silver(ring: str = Z8) -> CycloPoint:
    """1 + sqrt2 = 1 + zeta + zeta**-1 in Z[zeta_8]."""
    if ring != Z8:
        raise RingMismatchError("1 + sqrt2 lives in Z8")
    return CycloPoint.one(Z8) + CycloPoint.zeta(Z8, 1) + CycloPoint.zeta(Z8, 7)


def orient(a: CycloPoint, b: CycloPoint, c: CycloPoint) -> int:
    """Sign of the cross product (b - a) x (c - a): +1 for a left turn."""
    return ((b - a).conj() * (c - a)).im_sign()


def dot_sign(u: CycloPoint, v: CycloPoint) -> int:
    """Sign of the Euclidean dot product of two vectors."""
    return (u.conj() * v).re_sign()


# ---------------------------------------------------------------------------
# quadratic field scalars
# ---------------------------------------------------------------------------


class QuadScalar:
    """Element (a + b*sqrt(d)) / c of Q(sqrt 5) or Q(sqrt 2) in lowest terms."""

    __slots__ = ("field", "a", "b", "c")

    def __init__(self, field: str, a: int, b: int = 0, c: int = 1):
        if field not in _RADICAND:
            raise ValueError(f"unknown field {field!r}")
        if c == 0:
            raise ZeroDivisionError("zero denominator")
        if c < 0:
            a, b, c = -a, -b, -c
        g = gcd(gcd(a, b), c)
        if g > 1:
            a, b, c = a // g, b // g, c // g
        self.field = field
        self.a = a
        self.b = b
        self.c = c

    @property
    def d(self) -> int:
        return _RADICAND[self.field]

    # constructors -----------------------------------------------------
    @classmethod
    def phi(cls):
        return cls(QSQRT5, 1, 1, 2)

    @classmethod
    def sqrt2(cls):
        return cls(QSQRT2, 0, 1, 1)

    @classmethod
    def rational(cls, field, q):
        q = Fraction(q)
        return cls(field, q.numerator, 0, q.denominator)

    def _coerce(self, other):
        if isinstance(other, QuadScalar):
            if other.field != self.field:
                raise RingMismatchError(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, Rational)):
            q = Fraction(other)
            return QuadScalar(self.field, q.numerator, 0, q.denominator)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadScalar(self.field, self.a * o.c + o.a * self.c, self.b * o.c + o.b * self.c, self.c * o.c)

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(self.field, -self.a, -self.b, self.c)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self.d
        return QuadScalar(
            self.field,
            self.a * o.a + d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.c * o.c,
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.a * self.a - self.d * self.b * self.b
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        # 1/((a + b r)/c) = c (a - b r) / (a^2 - d b^2)
        return QuadScalar(self.field, self.c * self.a, -self.c * self.b, n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadScalar(self.field, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def sign(self) -> int:
        return _quad_sign(self.a, self.b, self.d)

    def cmp(self, other) -> int:
        """Exact three-way comparison.  Floats are compared through their exact
        rational value, so the result never depends on rounding of ``self``."""
        if isinstance(other, float):
            q = Fraction(other)
            o = QuadScalar(self.field, q.numerator, 0, q.denominator)
        else:
            o = self._coerce(other)
        return (self - o).sign()

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, QuadScalar):
            return (self.field, self.a, self.b, self.c) == (other.field, other.a, other.b, other.c)
        if isinstance(other, (int, Rational)):
            return self.b == 0 and Fraction(self.a, self.c) == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.c))
        return hash((self.field, self.a, self.b, self.c))

    def __bool__(self):
        return bool(self.a or self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self):
        return (self.a + self.b * math.sqrt(self.d)) / self.c

    def conjugate(self):
        """Galois conjugate sqrt(d) -> -sqrt(d)."""
        return QuadScalar(self.field, self.a, -self.b, self.c)

    def __repr__(self):
        return f"QuadScalar({self.field}, {self.a}, {self.b}, {self.c})"

    def __str__(self):
        r = "sqrt5" if self.field == QSQRT5 else "sqrt2"
        if self.b == 0:
            s = str(self.a)
        elif self.a == 0:
            s = f"{self.b}*{r}"
        else:
            s = f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}*{r}"
        if self.c != 1:
            s = f"({s})/{self.c}"
        return s

    def to_json(self):
        return {"field": self.field, "a": self.a, "b": self.b, "c": self.c}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["field"], obj["a"], obj["b"], obj["c"])


def field_of_ring(ring: str) -> str:
    return _FIELD_OF_RING[ring]


def quad_arith(x: QuadScalar, y: QuadScalar, op: str):
    """Dispatch helper mirroring the operation table of the CLI grammar."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "cmp":
        return x.cmp(y)
    raise ValueError(f"unknown op {op!r}")


PHI = QuadScalar.phi()
SQRT2 = QuadScalar.sqrt2()
