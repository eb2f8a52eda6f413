"""Exact arithmetic over Q(s), the field of rational functions in s = sqrt(q).

Every number the construction needs -- q itself, the scale
h = sqrt(q) - 1/sqrt(q), the metric entries, the projector weights -- is a
ratio of integer polynomials in the square root s of the deformation
parameter.  Working over s rather than q keeps all of them polynomial.

A ``Scalar`` is such a ratio in reduced canonical form:

* numerator and denominator are integer-coefficient polynomials in s,
  stored low-to-high as tuples with no trailing zeros (``()`` is the zero
  polynomial);
* they share no integer content, no polynomial factor and no power of s
  (negative powers of s are folded into the denominator);
* the leading coefficient of the denominator is positive.

Canonical form makes structural equality decide mathematical equality, so
Scalars are hashable and usable as exact dict values throughout the
package.

``Series`` is the Laurent expansion of a Scalar at s = 1 in the local
parameter t = s - 1.  It is what the commutative-limit machinery consumes:
a finite pole order plus exact rational coefficients up to a truncation
order.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction

__all__ = ["Scalar", "Series", "PoleAtOne", "ZERO", "ONE", "S", "Q", "H"]


class PoleAtOne(ArithmeticError):
    """Raised when a quantity diverges in the commutative limit s -> 1."""


# ---------------------------------------------------------------------------
# integer polynomials in s, low-to-high coefficient tuples
# ---------------------------------------------------------------------------

def _ptrim(c):
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _ptrim(out)


def _pneg(a):
    return tuple(-x for x in a)


@functools.cache
def _pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim(out)


def _pcontent(a):
    g = 0
    for x in a:
        g = math.gcd(g, x)
        if g == 1:
            return 1
    return g


def _pprim(a):
    """Primitive part with positive leading coefficient."""
    c = _pcontent(a)
    if a[-1] < 0:
        c = -c
    return tuple(x // c for x in a)


@functools.cache
def _pgcd(a, b):
    """Primitive gcd (positive leading coefficient) of two nonzero polys.

    Plain Euclid over Q; degrees stay small here so fraction blowup is a
    non-issue.
    """
    fa = [Fraction(x) for x in a]
    fb = [Fraction(x) for x in b]
    while fb:
        # fa mod fb
        db, lb = len(fb) - 1, fb[-1]
        while len(fa) - 1 >= db and fa:
            k = fa[-1] / lb
            shift = len(fa) - 1 - db
            for i, y in enumerate(fb):
                fa[shift + i] -= k * y
            while fa and fa[-1] == 0:
                fa.pop()
        fa, fb = fb, fa
    lcm = 1
    for x in fa:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    return _pprim(_ptrim([int(x * lcm) for x in fa]))


def _pdiv_exact(a, b):
    """Quotient a // b assuming exact divisibility."""
    if b == (1,):
        return a
    out = [0] * (len(a) - len(b) + 1)
    rem = list(a)
    for k in range(len(out) - 1, -1, -1):
        c = rem[k + len(b) - 1]
        if c % b[-1]:
            raise ArithmeticError("inexact polynomial division")
        c //= b[-1]
        out[k] = c
        if c:
            for i, y in enumerate(b):
                rem[k + i] -= c * y
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    return _ptrim(out)


def _peval_one(a):
    return sum(a)


@functools.cache
def _pshift_one(a):
    """Coefficients of a(1 + t) as a polynomial in t (binomial transform)."""
    out = [0] * len(a)
    for n, c in enumerate(a):
        if c:
            binom = 1
            for k in range(n + 1):
                out[k] += c * binom
                binom = binom * (n - k) // (k + 1)
    return _ptrim(out)


# ---------------------------------------------------------------------------
# the field Q(s)
# ---------------------------------------------------------------------------

class Scalar:
    """An element of Q(s) in reduced canonical form.  Immutable."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        if isinstance(num, Scalar):
            raise TypeError("use Scalar arithmetic, not the constructor")
        if isinstance(num, Fraction):
            num, den = num.numerator * den, num.denominator
        if isinstance(den, Fraction):
            num, den = num * den.denominator, den.numerator
        n, d = _reduce((num,) if isinstance(num, int) else _ptrim(num),
                       (den,) if isinstance(den, int) else _ptrim(den))
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "den", d)

    def __setattr__(self, *a):
        raise AttributeError("Scalar is immutable")

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def _raw(num, den):
        out = object.__new__(Scalar)
        object.__setattr__(out, "num", num)
        object.__setattr__(out, "den", den)
        return out

    @staticmethod
    def s_power(n):
        """s**n for any integer n."""
        if n >= 0:
            return Scalar._raw((0,) * n + (1,), (1,))
        return Scalar._raw((1,), (0,) * (-n) + (1,))

    @staticmethod
    def q_power(n):
        return Scalar.s_power(2 * n)

    # -- field operations ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return _make(_padd(self.num, other.num), self.den)
        return _make(_padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
                     _pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(_pneg(self.num), self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if self.num == (1,) and self.den == (1,):
            return other
        if other.num == (1,) and other.den == (1,):
            return self
        # fast path: pure s-power denominators multiply without re-reduction,
        # provided no s-factor appears on both sides of the result
        if _is_spower(self.den) and _is_spower(other.den) and (
                (len(self.den) == 1 and len(other.den) == 1)
                or (self.num[0] != 0 and other.num[0] != 0)):
            return Scalar._raw(_pmul(self.num, other.num), _pmul(self.den, other.den))
        return _make(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by the zero Scalar")
        if not self.num:
            return ZERO
        return _make(_pmul(self.num, other.den), _pmul(self.den, other.num))

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def inv(self):
        return ONE / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- structure -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            return self.num == ((other,) if other else ()) and self.den == (1,)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    # -- limits --------------------------------------------------------------

    def eval_limit(self):
        """Value at s = 1 as an exact Fraction; raises PoleAtOne on a pole."""
        n, d = self.num, self.den
        dv = _peval_one(d)
        if dv != 0:
            return Fraction(_peval_one(n), dv)
        # strip common (s-1) factors
        while True:
            d = _pdiv_one(d)
            if _peval_one(n) != 0:
                raise PoleAtOne(f"pole at s = 1 in {self}")
            n = _pdiv_one(n)
            dv = _peval_one(d)
            if dv != 0:
                return Fraction(_peval_one(n), dv)

    def expand_at_one(self, order):
        """Laurent expansion at s = 1 in t = s - 1, up to t**order."""
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        if not self.num:
            return Series(0, (), order)
        n = _pshift_one(self.num)
        d = _pshift_one(self.den)
        vn = next(i for i, c in enumerate(n) if c)
        vd = next(i for i, c in enumerate(d) if c)
        pole = vd - vn
        n, d = n[vn:], d[vd:]
        # series division of two power series with d[0] != 0
        terms = order + pole + 1
        if terms <= 0:
            return Series(max(pole, 0), (), order)
        cs = []
        rem = [Fraction(c) for c in n] + [Fraction(0)] * terms
        d0 = Fraction(d[0])
        for k in range(terms):
            c = rem[k] / d0
            cs.append(c)
            if c:
                for i in range(1, min(len(d), terms - k)):
                    rem[k + i] -= c * d[i]
        return Series(pole, tuple(cs), order)

    # -- rendering -----------------------------------------------------------

    def __str__(self):
        ns = _poly_str(self.num)
        if self.den == (1,):
            return ns
        ds = _poly_str(self.den)
        if "+" in ns or "-" in ns[1:]:
            ns = "(" + ns + ")"
        if "+" in ds or "-" in ds[1:] or "*" in ds:
            ds = "(" + ds + ")"
        return ns + "/" + ds

    __repr__ = __str__


@functools.cache
def _is_spower(d):
    return d[-1] == 1 and not any(d[:-1])


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, int):
        return Scalar._raw((x,), (1,)) if x else ZERO
    if isinstance(x, Fraction):
        return _make((x.numerator,), (x.denominator,))
    return NotImplemented


def _reduce(num, den):
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return (), (1,)
    vn = next(i for i, c in enumerate(num) if c)
    vd = next(i for i, c in enumerate(den) if c)
    v = min(vn, vd)
    if v:
        num, den = num[v:], den[v:]
    cn, cd = _pcontent(num), _pcontent(den)
    c = math.gcd(cn, cd)
    pn = tuple(x // cn for x in num)
    pd = tuple(x // cd for x in den)
    if len(pn) > 1 and len(pd) > 1:
        g = _pgcd(pn, pd)
        if len(g) > 1:
            pn = _pdiv_exact(pn, g)
            pd = _pdiv_exact(pd, g)
    cn //= c
    cd //= c
    num = tuple(x * cn for x in pn)
    den = tuple(x * cd for x in pd)
    if den[-1] < 0:
        num, den = _pneg(num), _pneg(den)
    return num, den


def _make(num, den):
    n, d = _reduce(num, den)
    return Scalar._raw(n, d)


def _pdiv_one(p):
    """Exact quotient p / (s - 1) by synthetic division."""
    out = [0] * (len(p) - 1)
    carry = 0
    for i in range(len(p) - 1, 0, -1):
        carry += p[i]
        out[i - 1] = carry
    if carry + p[0] != 0:
        raise ArithmeticError("(s-1) does not divide")
    return _ptrim(out)


# -- rendering in terms of q and sqrtq --------------------------------------

def _nterms(p):
    return sum(1 for c in p if c)


def _poly_str(p):
    """Render an integer polynomial in s as a sum of q / sqrtq monomials."""
    if not p:
        return "0"
    parts = []
    for n in range(len(p) - 1, -1, -1):
        c = p[n]
        if not c:
            continue
        k, odd = divmod(n, 2)
        factors = []
        if k == 1:
            factors.append("q")
        elif k > 1:
            factors.append(f"q^{k}")
        if odd:
            factors.append("sqrtq")
        mag = abs(c)
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        term = "*".join(factors)
        if not parts:
            parts.append(("-" if c < 0 else "") + term)
        else:
            parts.append(("-" if c < 0 else "+") + term)
    return "".join(parts)


ZERO = Scalar._raw((), (1,))
ONE = Scalar._raw((1,), (1,))
S = Scalar.s_power(1)          # sqrt(q)
Q = Scalar.s_power(2)
H = S - S.inv()                # sqrt(q) - 1/sqrt(q)


# ---------------------------------------------------------------------------
# Laurent series at s = 1
# ---------------------------------------------------------------------------

class Series:
    """Truncated Laurent series sum c_j t**j, j = -pole..order, at t = s - 1.

    ``coeffs[j + pole]`` holds c_j; the leading coefficient is nonzero
    (the pole order is tight) unless the series is identically zero to the
    stated order.
    """

    __slots__ = ("pole", "coeffs", "order")

    def __init__(self, pole, coeffs, order):
        coeffs = tuple(Fraction(c) for c in coeffs)
        while coeffs and coeffs[0] == 0:
            coeffs = coeffs[1:]
            pole -= 1
        n = order + pole + 1
        if len(coeffs) > n:
            coeffs = coeffs[:n]
        if not coeffs:
            pole = 0
        self.pole = max(pole, 0) if not coeffs else pole
        self.coeffs = coeffs
        self.order = order

    def coeff(self, j):
        """Coefficient of t**j (0 for absent indices within range)."""
        if j > self.order:
            raise IndexError(f"series truncated at order {self.order}")
        i = j + self.pole
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.pole, self.coeffs, self.order) == (other.pole, other.coeffs, other.order)

    def __hash__(self):
        return hash((self.pole, self.coeffs, self.order))

    def __add__(self, other):
        order = min(self.order, other.order)
        pole = max(self.pole, other.pole)
        out = []
        for j in range(-pole, order + 1):
            a = self.coeff(j) if j >= -self.pole else Fraction(0)
            b = other.coeff(j) if j >= -other.pole else Fraction(0)
            out.append(a + b)
        return Series(pole, out, order)

    def __mul__(self, other):
        order = min(self.order - other.pole, other.order - self.pole)
        pole = self.pole + other.pole
        n = order + pole + 1
        out = [Fraction(0)] * max(n, 0)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if i + j < n and b:
                        out[i + j] += a * b
        return Series(pole, out, order)

    def truncate(self, order):
        return Series(self.pole, self.coeffs[: order + self.pole + 1], order)

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            j = i - self.pole
            if j == 0:
                body = str(abs(c))
            else:
                tp = "t" if j == 1 else f"t^{j}"
                body = tp if abs(c) == 1 else f"{abs(c)}*{tp}"
            parts.append(("-" if c < 0 else "+", body))
        if not parts:
            return f"O(t^{self.order + 1})"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out + f" + O(t^{self.order + 1})"

    __repr__ = __str__
