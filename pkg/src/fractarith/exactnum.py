"""Exact scalar tower: rationals, outward-rounded rational intervals, and
real algebraic numbers.

Every comparison made anywhere in the library bottoms out here and is decided
exactly: rationals by Fraction arithmetic, algebraic quantities by polynomial
reduction modulo the defining polynomial with interval refinement as the
fallback.  Floating point never enters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from . import poly
from .errors import DivByZeroInterval, DomainError, FractarithError

#: Denominator bound used when an irrational endpoint must be outward-rounded
#: back into the rationals.
DEFAULT_DENOMINATOR_BOUND = 2 ** 64

_UNICODE_MINUS = "−"


# ---------------------------------------------------------------------------
# Rational serialization
# ---------------------------------------------------------------------------

def rat_from_str(s: str) -> Fraction:
    """Parse "p/q" (or a bare integer string) into an exact rational."""
    return Fraction(s.strip().replace(_UNICODE_MINUS, "-"))


def rat_to_str(x: Fraction) -> str:
    """Canonical "p/q" form, bare integer when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _coeff_to_obj(c: Fraction):
    return c.numerator if c.denominator == 1 else rat_to_str(c)


def _coeff_from_obj(obj) -> Fraction:
    if isinstance(obj, str):
        return rat_from_str(obj)
    return Fraction(obj)


# ---------------------------------------------------------------------------
# Integer helpers for outward rounding
# ---------------------------------------------------------------------------

def _iroot(n: int, k: int) -> int:
    """Floor k-th root of a non-negative integer, by Newton iteration."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0
    if k == 1:
        return n
    x = 1 << (n.bit_length() // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def fraction_root_bounds(r: Fraction, v: int,
                         max_den: int = DEFAULT_DENOMINATOR_BOUND) -> tuple[Fraction, Fraction]:
    """Outward rational bounds on r**(1/v) for r >= 0, denominator <= max_den."""
    if r < 0:
        raise DomainError("even/fractional root of a negative rational")
    if r == 0:
        return Fraction(0), Fraction(0)
    num = r.numerator * max_den ** v
    lo_int = _iroot(num // r.denominator, v)
    lo = Fraction(lo_int, max_den)
    hi_int = _iroot(-(-num // r.denominator), v)
    if hi_int ** v * r.denominator < num:
        hi_int += 1
    hi = Fraction(hi_int, max_den)
    if lo ** v == r:
        hi = lo
    return lo, hi


def fraction_pow_bounds(x: Fraction, e: Fraction,
                        max_den: int = DEFAULT_DENOMINATOR_BOUND) -> tuple[Fraction, Fraction]:
    """Outward rational bounds on x**e; exact when e is an integer.

    Fractional exponents require x > 0.
    """
    if e.denominator == 1:
        n = e.numerator
        if n >= 0:
            v = x ** n
        else:
            if x == 0:
                raise DomainError("0 raised to a negative power")
            v = Fraction(1) / x ** (-n)
        return v, v
    if x <= 0:
        raise DomainError("fractional power of a non-positive base")
    u, v = e.numerator, e.denominator
    r = x ** u if u >= 0 else Fraction(1) / x ** (-u)
    return fraction_root_bounds(r, v, max_den)


# ---------------------------------------------------------------------------
# Algebraic reals
# ---------------------------------------------------------------------------

class AlgebraicReal:
    """A real algebraic number: squarefree defining polynomial plus an
    isolating interval containing exactly one of its real roots.

    The isolating interval only ever shrinks (never past the root), so the
    represented number is fixed at construction.  A degenerate interval
    lo == hi encodes a rational root exactly.
    """

    __slots__ = ("_poly", "_lo", "_hi")

    def __init__(self, coeffs: Iterable, lo, hi, _trusted: bool = False):
        p = poly.make(coeffs)
        lo = Fraction(lo)
        hi = Fraction(hi)
        if poly.degree(p) < 1:
            raise FractarithError("defining polynomial must be non-constant")
        if not _trusted:
            p = poly.squarefree_part(p)
            if lo > hi:
                raise FractarithError("isolating interval is empty")
            if lo == hi:
                if poly.eval_at(p, lo) != 0:
                    raise FractarithError("degenerate interval is not a root")
            else:
                chain = poly.sturm_chain(p)
                if poly.eval_at(p, lo) == 0 or poly.eval_at(p, hi) == 0:
                    raise FractarithError("isolating interval endpoints must not be roots")
                if poly.count_roots(chain, lo, hi) != 1:
                    raise FractarithError("interval does not isolate exactly one root")
        self._poly = p
        self._lo = lo
        self._hi = hi

    @property
    def poly(self) -> poly.Poly:
        return self._poly

    @property
    def lo(self) -> Fraction:
        return self._lo

    @property
    def hi(self) -> Fraction:
        return self._hi

    @property
    def is_rational(self) -> bool:
        return self._lo == self._hi

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise FractarithError("number not resolved to a rational")
        return self._lo

    def _bisect_once(self) -> None:
        if self.is_rational:
            return
        lo, hi = self._lo, self._hi
        mid = (lo + hi) / 2
        v = poly.eval_at(self._poly, mid)
        if v == 0:
            self._lo = self._hi = mid
            return
        # keep the half with the sign change
        vlo = poly.eval_at(self._poly, lo)
        if (vlo > 0) != (v > 0):
            self._hi = mid
        else:
            self._lo = mid

    def refine(self, width) -> "Interval":
        """Shrink the isolating interval to width <= width and return it."""
        width = Fraction(width)
        if width <= 0:
            raise FractarithError("refinement width must be positive")
        while self._hi - self._lo > width:
            self._bisect_once()
        return Interval(self._lo, self._hi)

    def interval(self) -> "Interval":
        return Interval(self._lo, self._hi)

    def replace_defining_factor(self, factor: poly.Poly) -> None:
        """Swap the defining polynomial for one of its factors that still has
        the root in the isolating interval.  The number itself never moves."""
        factor = poly.monic(factor)
        if poly.degree(factor) < 1:
            raise FractarithError("factor must be non-constant")
        if self.is_rational:
            if poly.eval_at(factor, self._lo) != 0:
                raise FractarithError("factor does not vanish at the root")
        else:
            chain = poly.sturm_chain(factor)
            while poly.eval_at(factor, self._lo) == 0 or poly.eval_at(factor, self._hi) == 0:
                self._bisect_once()
                if self.is_rational:
                    return self.replace_defining_factor(factor)
            if poly.count_roots(chain, self._lo, self._hi) != 1:
                raise FractarithError("factor does not isolate the root")
        self._poly = factor

    # -- comparisons against rationals ------------------------------------

    def cmp_fraction(self, r: Fraction) -> int:
        """Exact three-way comparison with a rational."""
        r = Fraction(r)
        if self.is_rational:
            v = self._lo
            return (v > r) - (v < r)
        if self._lo <= r <= self._hi and poly.eval_at(self._poly, r) == 0:
            return 0
        while self._lo <= r <= self._hi:
            self._bisect_once()
            if self.is_rational:
                return self.cmp_fraction(r)
        if r < self._lo:
            return 1
        return -1

    def sign(self) -> int:
        return self.cmp_fraction(Fraction(0))

    def __repr__(self) -> str:
        cs = ",".join(rat_to_str(c) for c in self._poly)
        return f"AlgebraicReal([{cs}], [{rat_to_str(self._lo)}, {rat_to_str(self._hi)}])"

    def to_obj(self) -> dict:
        return {
            "poly": [_coeff_to_obj(c) for c in self._poly],
            "lo": rat_to_str(self._lo),
            "hi": rat_to_str(self._hi),
        }

    @staticmethod
    def from_obj(obj: dict) -> "AlgebraicReal":
        coeffs = [_coeff_from_obj(c) for c in obj["poly"]]
        return AlgebraicReal(coeffs, rat_from_str(obj["lo"]), rat_from_str(obj["hi"]))


def root_isolate(coeffs: Iterable, window) -> list[AlgebraicReal]:
    """Isolate every distinct real root of the polynomial inside the window.

    The polynomial is made squarefree internally; the window endpoints must
    not be roots.
    """
    p = poly.make(coeffs)
    if poly.degree(p) < 1:
        return []
    p = poly.squarefree_part(p)
    lo, hi = window
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        raise FractarithError("window must have positive width")
    if poly.eval_at(p, lo) == 0 or poly.eval_at(p, hi) == 0:
        raise FractarithError("window endpoints must not be roots")
    chain = poly.sturm_chain(p)
    out: list[AlgebraicReal] = []

    def go(a: Fraction, b: Fraction) -> None:
        k = poly.count_roots(chain, a, b)
        if k == 0:
            return
        if k == 1:
            out.append(AlgebraicReal(p, a, b, _trusted=True))
            return
        m = (a + b) / 2
        if poly.eval_at(p, m) == 0:
            # exact rational root: record it, deflate, and isolate the rest
            out.append(AlgebraicReal(p, m, m, _trusted=True))
            q = poly.divmod_poly(p, poly.make((-m, 1)))[0]
            out.extend(root_isolate(q, (a, m)))
            out.extend(root_isolate(q, (m, b)))
            return
        go(a, m)
        go(m, b)

    go(lo, hi)
    out.sort(key=lambda x: (x.lo, x.hi))
    # bisection can leave neighbors sharing an endpoint; shrink until the
    # isolating intervals are pairwise disjoint
    for a, b in zip(out, out[1:]):
        while not (a.hi < b.lo):
            a._bisect_once()
            b._bisect_once()
    return out


def refine(x: AlgebraicReal, width) -> "Interval":
    """Module-level spelling of AlgebraicReal.refine."""
    return x.refine(width)


# ---------------------------------------------------------------------------
# Number-field elements: polynomials in one algebraic generator
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class FieldElement:
    """An exact element of Q(alpha) for a fixed AlgebraicReal generator,
    stored as a polynomial in alpha reduced modulo the defining polynomial.

    Supports field arithmetic and exact sign determination, which makes it a
    drop-in exact scalar next to Fraction.  Not hashable: with a reducible
    defining polynomial, equal values can have distinct coefficient tuples.
    """

    gen: AlgebraicReal
    coeffs: poly.Poly

    __hash__ = None

    @staticmethod
    def of(gen: AlgebraicReal, coeffs: Iterable) -> "FieldElement":
        return FieldElement(gen, poly.rem(poly.make(coeffs), gen.poly))

    @staticmethod
    def generator(gen: AlgebraicReal) -> "FieldElement":
        return FieldElement.of(gen, (0, 1))

    def _coerce(self, other) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            if other.gen is not self.gen:
                raise FractarithError("field elements over different generators")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement.of(self.gen, (Fraction(other),))
        return None

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.gen, poly.rem(poly.add(self.coeffs, o.coeffs), self.gen.poly))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.gen, poly.neg(self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.gen, poly.rem(poly.mul(self.coeffs, o.coeffs), self.gen.poly))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        e = poly.rem(self.coeffs, self.gen.poly)
        g, s, _ = poly.xgcd(e, self.gen.poly)
        if poly.degree(g) == 0:
            return FieldElement(self.gen, poly.rem(s, self.gen.poly))
        # zero divisor against a reducible defining polynomial: the root lives
        # in the cofactor; shrink the defining polynomial and retry
        cof = poly.divmod_poly(self.gen.poly, g)[0]
        self.gen.replace_defining_factor(cof)
        return self.inverse()

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        acc = FieldElement.of(self.gen, (1,))
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    # -- exact decisions ------------------------------------------------------

    def is_zero(self) -> bool:
        e = poly.rem(self.coeffs, self.gen.poly)
        if poly.is_zero(e):
            return True
        g = poly.gcd(e, self.gen.poly)
        if poly.degree(g) < 1:
            return False
        # the element vanishes at alpha iff the gcd has alpha among its roots
        chain = poly.sturm_chain(g)
        while True:
            if self.gen.is_rational:
                return poly.eval_at(g, self.gen.lo) == 0
            lo, hi = self.gen.lo, self.gen.hi
            if poly.eval_at(g, lo) != 0 and poly.eval_at(g, hi) != 0:
                return poly.count_roots(chain, lo, hi) > 0
            self.gen._bisect_once()

    def sign(self) -> int:
        if self.is_zero():
            return 0
        e = poly.rem(self.coeffs, self.gen.poly)
        while True:
            enc = _interval_horner(e, Interval(self.gen.lo, self.gen.hi))
            if enc.lo > 0:
                return 1
            if enc.hi < 0:
                return -1
            self.gen._bisect_once()

    def enclosure(self, width) -> tuple[Fraction, Fraction]:
        """Rational bounds of the value, at most `width` apart."""
        width = Fraction(width)
        e = poly.rem(self.coeffs, self.gen.poly)
        while True:
            enc = _interval_horner(e, Interval(self.gen.lo, self.gen.hi))
            if enc.hi - enc.lo <= width:
                return enc.lo, enc.hi
            self.gen._bisect_once()

    def is_fraction(self) -> bool:
        return poly.degree(poly.rem(self.coeffs, self.gen.poly)) <= 0

    def to_fraction(self) -> Fraction:
        e = poly.rem(self.coeffs, self.gen.poly)
        if poly.is_zero(e):
            return Fraction(0)
        if poly.degree(e) == 0:
            return e[0]
        if self.gen.is_rational:
            return poly.eval_at(e, self.gen.lo)
        raise FractarithError("field element is not rational")

    def to_algebraic(self) -> AlgebraicReal:
        """Annihilating polynomial via the multiplication-matrix characteristic
        polynomial, with an isolating window refined from the enclosure."""
        if self.is_fraction() or self.gen.is_rational:
            v = self.to_fraction()
            return AlgebraicReal((-v, Fraction(1)), v, v, _trusted=True)
        d = poly.degree(self.gen.poly)
        e = poly.rem(self.coeffs, self.gen.poly)
        cols = []
        for j in range(d):
            basis = tuple(Fraction(0) for _ in range(j)) + (Fraction(1),)
            col = poly.rem(poly.mul(e, basis), self.gen.poly)
            cols.append([col[i] if i < len(col) else Fraction(0) for i in range(d)])
        char = _charpoly([[cols[j][i] for j in range(d)] for i in range(d)])
        char = poly.squarefree_part(char)
        chain = poly.sturm_chain(char)
        width = Fraction(1)
        while True:
            lo, hi = self.enclosure(width)
            pad = width / 4 if width < 1 else Fraction(1, 4)
            lo2, hi2 = lo - pad, hi + pad
            if poly.eval_at(char, lo2) != 0 and poly.eval_at(char, hi2) != 0 \
                    and poly.count_roots(chain, lo2, hi2) == 1:
                return AlgebraicReal(char, lo2, hi2, _trusted=True)
            width /= 16

    # -- comparisons ----------------------------------------------------------

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            return NotImplemented  # type: ignore[return-value]
        return (self - o).sign()

    def __eq__(self, other):
        try:
            c = self._cmp(other)
        except FractarithError:
            return NotImplemented
        if c is NotImplemented:
            return NotImplemented
        return c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __repr__(self) -> str:
        cs = ",".join(rat_to_str(c) for c in self.coeffs) or "0"
        return f"FieldElement([{cs}])"


def _charpoly(m: list[list[Fraction]]) -> poly.Poly:
    """Characteristic polynomial det(xI - M) by the Faddeev-LeVerrier scheme."""
    d = len(m)
    coeffs = [Fraction(0)] * (d + 1)
    coeffs[d] = Fraction(1)
    mk = [[Fraction(1) if i == j else Fraction(0) for j in range(d)] for i in range(d)]
    for k in range(1, d + 1):
        mk = _matmul(m, mk)
        tr = sum(mk[i][i] for i in range(d))
        c = -tr / k
        coeffs[d - k] = c
        for i in range(d):
            mk[i][i] += c
    return poly.strip(tuple(coeffs))


def _matmul(a: list[list[Fraction]], b: list[list[Fraction]]) -> list[list[Fraction]]:
    d = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(d)) for j in range(d)] for i in range(d)]


Scalar = Union[Fraction, FieldElement]


def scalar_sign(x: Scalar) -> int:
    if isinstance(x, FieldElement):
        return x.sign()
    x = Fraction(x)
    return (x > 0) - (x < 0)


def as_scalar(x) -> Scalar:
    if isinstance(x, FieldElement):
        return x
    if isinstance(x, AlgebraicReal):
        return FieldElement.generator(x)
    return Fraction(x)


def scalar_min(a: Scalar, b: Scalar) -> Scalar:
    return a if not (b < a) else b


def scalar_max(a: Scalar, b: Scalar) -> Scalar:
    return a if not (a < b) else b


def scalar_abs(a: Scalar) -> Scalar:
    return abs(a)


# ---------------------------------------------------------------------------
# Rational intervals with enclosure semantics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Closed interval with exact endpoints.

    Every operation returns an enclosure of the exact image set; the only
    place outward rounding can occur is pow_rational with a fractional
    exponent, where irrational endpoints are rounded out to rationals.
    """

    lo: Scalar
    hi: Scalar

    def __post_init__(self):
        if self.hi < self.lo:
            raise FractarithError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    @staticmethod
    def point(x) -> "Interval":
        x = as_scalar(x)
        return Interval(x, x)

    @staticmethod
    def make(lo, hi) -> "Interval":
        return Interval(as_scalar(lo), as_scalar(hi))

    def width(self) -> Scalar:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        x = as_scalar(x)
        return not (x < self.lo) and not (self.hi < x)

    def contains_zero(self) -> bool:
        return self.contains(0)

    def strictly_positive(self) -> bool:
        return scalar_sign(self.lo) > 0

    def strictly_negative(self) -> bool:
        return scalar_sign(self.hi) < 0

    def is_subset(self, other: "Interval") -> bool:
        return not (self.lo < other.lo) and not (other.hi < self.hi)

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "Interval") -> "Interval":
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other: "Interval") -> "Interval":
        cands = [self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi]
        lo = cands[0]
        hi = cands[0]
        for c in cands[1:]:
            lo = scalar_min(lo, c)
            hi = scalar_max(hi, c)
        return Interval(lo, hi)

    def reciprocal(self) -> "Interval":
        if self.contains_zero():
            raise DivByZeroInterval("interval contains 0")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other: "Interval") -> "Interval":
        return self * other.reciprocal()

    def abs(self) -> "Interval":
        if not (self.lo < 0):
            return self
        if self.hi < 0:
            return -self
        return Interval(as_scalar(0), scalar_max(-self.lo, self.hi))

    def pow_int(self, n: int) -> "Interval":
        if n == 0:
            return Interval.point(1)
        if n < 0:
            return self.pow_int(-n).reciprocal()
        plo, phi = self.lo ** n, self.hi ** n
        if n % 2 == 1:
            return Interval(plo, phi)
        if not (self.lo < 0):
            return Interval(plo, phi)
        if self.hi < 0:
            return Interval(phi, plo)
        return Interval(as_scalar(0), scalar_max(plo, phi))

    def pow_rational(self, e, max_den: int = DEFAULT_DENOMINATOR_BOUND) -> "Interval":
        e = Fraction(e)
        if e.denominator == 1:
            return self.pow_int(e.numerator)
        lo, hi = self.lo, self.hi
        if isinstance(lo, FieldElement) or isinstance(hi, FieldElement):
            # round the endpoints out to rationals first; still an enclosure
            flo = lo.enclosure(Fraction(1, max_den))[0] if isinstance(lo, FieldElement) else Fraction(lo)
            fhi = hi.enclosure(Fraction(1, max_den))[1] if isinstance(hi, FieldElement) else Fraction(hi)
        else:
            flo, fhi = Fraction(lo), Fraction(hi)
        if flo <= 0:
            raise DomainError("fractional power of an interval touching <= 0")
        lo_lo, lo_hi = fraction_pow_bounds(flo, e, max_den)
        hi_lo, hi_hi = fraction_pow_bounds(fhi, e, max_den)
        if e > 0:
            return Interval(lo_lo, hi_hi)
        return Interval(hi_lo, lo_hi)

    def hull(self, other: "Interval") -> "Interval":
        return Interval(scalar_min(self.lo, other.lo), scalar_max(self.hi, other.hi))

    def to_obj(self) -> list:
        return [scalar_to_obj(self.lo), scalar_to_obj(self.hi)]

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def interval_op(kind: str, i: Interval, j_or_exponent) -> Interval:
    """Dispatch by operation name; `pow_rational` takes a rational exponent."""
    if kind == "add":
        return i + j_or_exponent
    if kind == "sub":
        return i - j_or_exponent
    if kind == "mul":
        return i * j_or_exponent
    if kind == "div":
        return i / j_or_exponent
    if kind == "pow_rational":
        return i.pow_rational(Fraction(j_or_exponent))
    raise FractarithError(f"unknown interval operation {kind!r}")


def _interval_horner(p: poly.Poly, x: Interval) -> Interval:
    acc = Interval.point(0)
    for c in reversed(p):
        acc = acc * x + Interval.point(c)
    return acc


def sign_at(expr_coeffs: Iterable, x: AlgebraicReal) -> int:
    """Exact sign of a rational polynomial expression evaluated at x."""
    return FieldElement.of(x, poly.make(expr_coeffs)).sign()


def scalar_to_str(x: Scalar) -> str:
    if isinstance(x, FieldElement):
        if x.is_fraction():
            return rat_to_str(x.to_fraction())
        raise FractarithError("irrational scalar has no plain string form")
    return rat_to_str(Fraction(x))


def scalar_to_obj(x: Scalar):
    """JSON value for an exact scalar: "p/q" for rationals, a coefficient
    vector over the ambient algebraic base otherwise."""
    if isinstance(x, FieldElement) and not x.is_fraction():
        return {"coeffs": [rat_to_str(c) for c in x.coeffs]}
    return scalar_to_str(x)


# ---------------------------------------------------------------------------
# Unions of disjoint closed intervals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntervalUnion:
    """Sorted union of pairwise-disjoint closed intervals; touching intervals
    are merged at construction, so the representation is canonical."""

    intervals: tuple[tuple[Fraction, Fraction], ...]

    @staticmethod
    def empty() -> "IntervalUnion":
        return IntervalUnion(())

    @staticmethod
    def from_intervals(items: Iterable[tuple]) -> "IntervalUnion":
        pairs = sorted((as_scalar(lo), as_scalar(hi)) for lo, hi in items)
        merged: list[list] = []
        for lo, hi in pairs:
            if hi < lo:
                raise FractarithError("interval endpoints out of order")
            if merged and not (merged[-1][1] < lo):
                if merged[-1][1] < hi:
                    merged[-1][1] = hi
            else:
                merged.append([lo, hi])
        return IntervalUnion(tuple((lo, hi) for lo, hi in merged))

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def is_empty(self) -> bool:
        return not self.intervals

    def hull(self) -> Interval:
        if self.is_empty():
            raise FractarithError("empty union has no hull")
        return Interval(self.intervals[0][0], self.intervals[-1][1])

    def contains_point(self, x) -> bool:
        x = as_scalar(x)
        return any(not (x < lo) and not (hi < x) for lo, hi in self.intervals)

    def contains_interval(self, iv: Interval) -> bool:
        return any(not (iv.lo < lo) and not (hi < iv.hi) for lo, hi in self.intervals)

    def is_subset(self, other: "IntervalUnion") -> bool:
        return all(other.contains_interval(Interval(lo, hi)) for lo, hi in self.intervals)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion.from_intervals(list(self.intervals) + list(other.intervals))

    def intersect_window(self, window: Interval) -> "IntervalUnion":
        out = []
        for lo, hi in self.intervals:
            a = scalar_max(lo, window.lo)
            b = scalar_min(hi, window.hi)
            if not (b < a):
                out.append((a, b))
        return IntervalUnion.from_intervals(out)

    def gaps(self, window: Interval) -> list[Interval]:
        """Maximal open intervals inside the window missed by the union,
        returned sorted by decreasing length."""
        clipped = self.intersect_window(window)
        out: list[Interval] = []
        cur = window.lo
        for lo, hi in clipped.intervals:
            if cur < lo:
                out.append(Interval(cur, lo))
            cur = scalar_max(cur, hi)
        if cur < window.hi:
            out.append(Interval(cur, window.hi))
        out.sort(key=lambda iv: iv.width(), reverse=True)
        return out

    def inflate(self, radius) -> "IntervalUnion":
        r = as_scalar(radius)
        return IntervalUnion.from_intervals((lo - r, hi + r) for lo, hi in self.intervals)

    def to_obj(self) -> list[list[str]]:
        return [[scalar_to_str(lo), scalar_to_str(hi)] for lo, hi in self.intervals]

    @staticmethod
    def from_obj(obj: Sequence[Sequence[str]]) -> "IntervalUnion":
        return IntervalUnion.from_intervals(
            (rat_from_str(lo), rat_from_str(hi)) for lo, hi in obj)
