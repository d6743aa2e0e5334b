"""Exact scalars: rationals inside Q[t] inside Q(t).

Rationals are plain :class:`fractions.Fraction` (ints are accepted on input).
:class:`Poly` and :class:`RatFun` sit above them.  Every arithmetic result is
normalised to the lowest level that can hold it, so ``(t**2 - t) / (t - 1)``
comes back as the ``Poly`` ``t`` and ``t - t`` as ``Fraction(0)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InconsistentData, PoleError

__all__ = [
    "Poly",
    "RatFun",
    "Scalar",
    "T",
    "arith",
    "as_scalar",
    "evaluate",
    "interpolate",
    "is_zero",
    "scalar_from_json",
    "scalar_to_json",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


def _norm_poly(coeffs: Sequence[Fraction]) -> "Scalar":
    c = _trim(coeffs)
    if len(c) <= 1:
        return c[0] if c else _ZERO
    return Poly(c, _trusted=True)


def _coeffs(x: "Scalar") -> tuple[Fraction, ...]:
    if isinstance(x, Poly):
        return x.coeffs
    x = Fraction(x)
    return (x,) if x else ()


def _padd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return out


def _pmul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    if len(b) == 1:
        y = b[0]
        return [x * y for x in a]
    if len(a) == 1:
        x = a[0]
        return [x * y for y in b]
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pdivmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(_trim(a))
    db = len(b) - 1
    lead = b[-1]
    if len(r) - 1 < db:
        return [], r
    q = [_ZERO] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] / lead
        q[k] = c
        if c:
            for j in range(db + 1):
                r[k + j] -= c * b[j]
    return q, list(_trim(r[:db]))


def _pgcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Monic gcd (empty tuple for gcd(0, 0))."""
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, tuple(r)
    if not a:
        return ()
    lead = a[-1]
    return tuple(x / lead for x in a)


class Poly:
    """Univariate polynomial over Q in the indeterminate ``t``; ascending coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable, *, _trusted: bool = False):
        if _trusted:
            self.coeffs = coeffs  # type: ignore[assignment]
        else:
            self.coeffs = _trim([Fraction(c) for c in coeffs])
        self._hash = None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t0) -> Fraction:
        acc = _ZERO
        t0 = Fraction(t0)
        for c in reversed(self.coeffs):
            acc = acc * t0 + c
        return acc

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, RatFun):
            return other + self
        if not isinstance(other, (Poly, Fraction, int)):
            return NotImplemented
        return _norm_poly(_padd(self.coeffs, _coeffs(other)))

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs), _trusted=True)

    def __sub__(self, other):
        if not isinstance(other, (Poly, RatFun, Fraction, int)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RatFun):
            return other * self
        if not isinstance(other, (Poly, Fraction, int)):
            return NotImplemented
        return _norm_poly(_pmul(self.coeffs, _coeffs(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return _divide(self, other)

    def __rtruediv__(self, other):
        return _divide(other, self)

    def __pow__(self, e: int):
        if e < 0:
            return _divide(_ONE, self**-e)
        out: Scalar = _ONE
        base: Scalar = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def shift(self, d: int) -> "Poly":
        """Multiply by t**d."""
        return Poly((_ZERO,) * d + self.coeffs, _trusted=True)

    # comparison ------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (Fraction, int)):
            return len(self.coeffs) <= 1 and (self.coeffs[0] if self.coeffs else 0) == other
        if isinstance(other, RatFun):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if len(self.coeffs) <= 1:
                self._hash = hash(self.coeffs[0] if self.coeffs else _ZERO)
            else:
                self._hash = hash(("poly", self.coeffs))
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Poly({format_scalar(self)})"

    def __str__(self):
        return format_scalar(self)


class RatFun:
    """Reduced quotient num/den with den monic of positive degree."""

    __slots__ = ("num", "den")

    def __init__(self, num: "Scalar", den: "Scalar"):
        # unreduced input is reduced by make_ratfun; direct construction is internal.
        self.num = num
        self.den = den

    def __call__(self, t0) -> Fraction:
        return evaluate(self, t0)

    def __add__(self, other):
        if not isinstance(other, (Poly, RatFun, Fraction, int)):
            return NotImplemented
        n2, d2 = _num_den(other)
        return make_ratfun(_as_coeffs_add(_pmul(_coeffs(self.num), d2), _pmul(n2, self.den.coeffs)),
                           _pmul(self.den.coeffs, d2))

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, (Poly, RatFun, Fraction, int)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (Poly, RatFun, Fraction, int)):
            return NotImplemented
        n2, d2 = _num_den(other)
        return make_ratfun(_pmul(_coeffs(self.num), n2), _pmul(self.den.coeffs, d2))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return _divide(self, other)

    def __rtruediv__(self, other):
        return _divide(other, self)

    def __pow__(self, e: int):
        if e < 0:
            return _divide(_ONE, self**-e)
        out: Scalar = _ONE
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (RatFun, Poly, Fraction, int)):
            n2, d2 = _num_den(other)
            return _trim(_pmul(_coeffs(self.num), d2)) == _trim(_pmul(n2, self.den.coeffs))
        return NotImplemented

    def __hash__(self):
        return hash(("ratfun", _coeffs(self.num), self.den.coeffs))

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return f"RatFun({format_scalar(self)})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, Poly, RatFun]

T = Poly((_ZERO, _ONE), _trusted=True)


def _as_coeffs_add(a, b):
    return _padd(a, b)


def _num_den(x: "Scalar") -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    if isinstance(x, RatFun):
        return _coeffs(x.num), x.den.coeffs
    return _coeffs(x), (_ONE,)


def make_ratfun(num: Sequence[Fraction], den: Sequence[Fraction]) -> "Scalar":
    """Reduce num/den to canonical form (and demote when the denominator is constant)."""
    num, den = _trim(num), _trim(den)
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    if not num:
        return _ZERO
    if len(den) > 1:
        g = _pgcd(num, den)
        if len(g) > 1:
            num = tuple(_pdivmod(num, g)[0])
            den = tuple(_pdivmod(den, g)[0])
    lead = den[-1]
    if lead != 1:
        num = tuple(c / lead for c in num)
        den = tuple(c / lead for c in den)
    if len(den) == 1:
        return _norm_poly(num)
    return RatFun(_norm_poly(num), Poly(den, _trusted=True))


def _divide(a, b) -> "Scalar":
    if isinstance(b, (Fraction, int)) and not isinstance(a, RatFun):
        if not b:
            raise ZeroDivisionError("division by zero scalar")
        if isinstance(a, Poly):
            b = Fraction(b)
            return Poly(tuple(c / b for c in a.coeffs), _trusted=True)
        return Fraction(a) / b
    n1, d1 = _num_den(a)
    n2, d2 = _num_den(b)
    if not n2:
        raise ZeroDivisionError("division by zero scalar")
    return make_ratfun(_pmul(n1, d2), _pmul(d1, n2))


def as_scalar(x) -> "Scalar":
    if isinstance(x, (Poly, RatFun)):
        if isinstance(x, Poly):
            return _norm_poly(x.coeffs)
        return make_ratfun(_coeffs(x.num), x.den.coeffs)
    return Fraction(x)


def is_zero(x: "Scalar") -> bool:
    return not x


def arith(a: "Scalar", b: "Scalar", op: str) -> "Scalar":
    """Exact ``a op b`` for op in add, sub, mul, div."""
    a, b = as_scalar(a), as_scalar(b)
    if op == "add":
        return as_scalar(a + b)
    if op == "sub":
        return as_scalar(a - b)
    if op == "mul":
        return as_scalar(a * b)
    if op == "div":
        return _divide(a, b)
    raise ValueError(f"unknown operation {op!r}")


def evaluate(s: "Scalar", t0) -> Fraction:
    """Substitute t := t0."""
    t0 = Fraction(t0)
    if isinstance(s, Poly):
        return s(t0)
    if isinstance(s, RatFun):
        d = s.den(t0)
        if not d:
            raise PoleError(f"pole at t = {t0}")
        num = s.num(t0) if isinstance(s.num, Poly) else Fraction(s.num)
        return num / d
    return Fraction(s)


def denominator(s: "Scalar") -> "Scalar":
    return s.den if isinstance(s, RatFun) else _ONE


def interpolate(points: Sequence[tuple], degree_bound: int) -> "Scalar":
    """Polynomial of degree <= ``degree_bound`` through ``points`` (Newton divided differences).

    Uses the first ``degree_bound + 1`` points and checks the rest.
    """
    pts = [(Fraction(x), Fraction(y)) for x, y in points]
    if len(pts) < degree_bound + 1:
        raise InconsistentData(f"need {degree_bound + 1} points, got {len(pts)}")
    xs = [p[0] for p in pts]
    if len(set(xs)) != len(xs):
        raise InconsistentData("abscissae must be distinct")
    base = pts[: degree_bound + 1]
    coef = [y for _, y in base]
    m = len(base)
    for j in range(1, m):
        for i in range(m - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (base[i][0] - base[i - j][0])
    result: Scalar = _ZERO
    for i in range(m - 1, -1, -1):
        result = result * (T - base[i][0]) + coef[i]
    for x, y in pts[m:]:
        if evaluate(result, x) != y:
            raise InconsistentData(f"point ({x}, {y}) is off the degree-{degree_bound} interpolant")
    return as_scalar(result)


def falling_factorial(k: int) -> "Scalar":
    """t (t-1) ... (t-k+1)."""
    out: Scalar = _ONE
    for i in range(k):
        out = out * (T - i)
    return out


# formatting and JSON ----------------------------------------------------------

def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_poly(coeffs: Sequence[Fraction]) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if mono and abs(c) == 1:
            body = mono
        elif mono:
            body = f"{_fmt_frac(abs(c))}*{mono}"
        else:
            body = _fmt_frac(abs(c))
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def format_scalar(s: "Scalar") -> str:
    if isinstance(s, RatFun):
        num = _fmt_poly(_coeffs(s.num))
        return f"({num})/({_fmt_poly(s.den.coeffs)})"
    if isinstance(s, Poly):
        return _fmt_poly(s.coeffs)
    return _fmt_frac(Fraction(s))


def _frac_json(c: Fraction) -> dict:
    return {"num": str(c.numerator), "den": str(c.denominator)}


def scalar_to_json(s: "Scalar") -> dict:
    s = as_scalar(s)
    if isinstance(s, RatFun):
        return {"num": {"coeffs": [_frac_json(c) for c in _coeffs(s.num)]},
                "den": {"coeffs": [_frac_json(c) for c in s.den.coeffs]}}
    if isinstance(s, Poly):
        return {"coeffs": [_frac_json(c) for c in s.coeffs]}
    return _frac_json(s)


def _frac_from_json(d: dict) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


def scalar_from_json(d: dict) -> "Scalar":
    if "coeffs" in d:
        return _norm_poly([_frac_from_json(c) for c in d["coeffs"]])
    if isinstance(d.get("num"), dict) and "coeffs" in d["num"]:
        num = [_frac_from_json(c) for c in d["num"]["coeffs"]]
        den = [_frac_from_json(c) for c in d["den"]["coeffs"]]
        return make_ratfun(num, den)
    return _frac_from_json(d)
