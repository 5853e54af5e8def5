"""Exact multivariate Laurent polynomials over the integers and localized fractions.

An exponent vector is a tuple of ``rank + 1`` integers: one slot per torus
variable ``t1 .. tk`` followed by a final slot for the grading variable ``q``.
Coefficients are Python integers, so products never wrap around.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Iterator, Mapping

Exponent = tuple[int, ...]


class RankMismatchError(ValueError):
    """Two operands live on tori of different rank."""


class NotExpandableError(ValueError):
    """A denominator factor has no positive q-exponent, so no q-series exists."""


def unit_exponent(rank: int) -> Exponent:
    return (0,) * (rank + 1)


def add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def neg_exp(a: Exponent) -> Exponent:
    return tuple(-x for x in a)


def scale_exp(a: Exponent, k: int) -> Exponent:
    return tuple(k * x for x in a)


def torus_dual_exp(a: Exponent) -> Exponent:
    """Invert the torus part of a weight; the q slot is kept."""
    return tuple(-x for x in a[:-1]) + (a[-1],)


class LaurentPoly:
    """Immutable sparse Laurent polynomial ``sum c_e x^e``.

    Zero coefficients are never stored. Iteration and serialization follow the
    lexicographic order of exponent vectors.
    """

    __slots__ = ("rank", "_terms", "_sorted", "_hash")

    def __init__(self, rank: int, terms: Mapping[Exponent, int] | None = None):
        self.rank = rank
        clean: dict[Exponent, int] = {}
        if terms:
            width = rank + 1
            for exp, coeff in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != width:
                    raise RankMismatchError(
                        f"exponent {exp} has length {len(exp)}, expected {width}"
                    )
                if not isinstance(coeff, int):
                    raise TypeError(f"coefficient {coeff!r} is not an integer")
                if coeff:
                    clean[exp] = clean.get(exp, 0) + coeff
                    if not clean[exp]:
                        del clean[exp]
        self._terms = clean
        self._sorted: tuple[tuple[Exponent, int], ...] | None = None
        self._hash: int | None = None

    @classmethod
    def _raw(cls, rank: int, terms: dict[Exponent, int]) -> "LaurentPoly":
        # trusted constructor: terms already validated and free of zeros
        obj = cls.__new__(cls)
        obj.rank = rank
        obj._terms = terms
        obj._sorted = None
        obj._hash = None
        return obj

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, rank: int) -> "LaurentPoly":
        return cls._raw(rank, {})

    @classmethod
    def one(cls, rank: int) -> "LaurentPoly":
        return cls._raw(rank, {unit_exponent(rank): 1})

    @classmethod
    def constant(cls, rank: int, c: int) -> "LaurentPoly":
        return cls._raw(rank, {unit_exponent(rank): c} if c else {})

    @classmethod
    def monomial(cls, exp: Iterable[int], coeff: int = 1) -> "LaurentPoly":
        exp = tuple(int(e) for e in exp)
        return cls._raw(len(exp) - 1, {exp: coeff} if coeff else {})

    @classmethod
    def variable(cls, rank: int, index: int) -> "LaurentPoly":
        """The torus variable ``t_{index+1}``; ``index == rank`` gives ``q``."""
        exp = [0] * (rank + 1)
        exp[index] = 1
        return cls._raw(rank, {tuple(exp): 1})

    # inspection -------------------------------------------------------

    def terms(self) -> tuple[tuple[Exponent, int], ...]:
        if self._sorted is None:
            self._sorted = tuple(sorted(self._terms.items()))
        return self._sorted

    def __iter__(self) -> Iterator[tuple[Exponent, int]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, exp: Exponent) -> int:
        return self._terms.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit_monomial(self) -> bool:
        """True for ``+-x^e``, the units of the Laurent ring."""
        return len(self._terms) == 1 and abs(next(iter(self._terms.values()))) == 1

    def leading(self) -> tuple[Exponent, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no terms")
        return self.terms()[-1]

    def q_degrees(self) -> tuple[int, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no q-degree")
        qs = [e[-1] for e in self._terms]
        return min(qs), max(qs)

    def at_one(self) -> int:
        """Specialize every variable to 1 (the rank of a virtual representation)."""
        return sum(self._terms.values())

    # arithmetic -------------------------------------------------------

    def _check(self, other: "LaurentPoly") -> None:
        if self.rank != other.rank:
            raise RankMismatchError(f"torus ranks {self.rank} and {other.rank} differ")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(self.rank, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(self.rank, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.rank, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly.zero(self.rank)
            return LaurentPoly._raw(self.rank, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self._terms) < len(other._terms):
            small, big = self._terms, other._terms
        else:
            small, big = other._terms, self._terms
        out: dict[Exponent, int] = {}
        get = out.get
        for e1, c1 in small.items():
            for e2, c2 in big.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return LaurentPoly._raw(self.rank, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_unit_monomial():
                raise ValueError("only unit monomials have negative powers")
            (e, c), = self._terms.items()
            return LaurentPoly._raw(self.rank, {scale_exp(e, n): c ** (-n)})
        result = LaurentPoly.one(self.rank)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, exp: Exponent) -> "LaurentPoly":
        """Multiply by the monomial ``x^exp``."""
        return LaurentPoly._raw(
            self.rank, {tuple(x + y for x, y in zip(e, exp)): c for e, c in self._terms.items()}
        )

    def exact_div(self, n: int) -> "LaurentPoly":
        out = {}
        for e, c in self._terms.items():
            quo, rem = divmod(c, n)
            if rem:
                raise ArithmeticError(f"coefficient {c} not divisible by {n}")
            out[e] = quo
        return LaurentPoly._raw(self.rank, out)

    def dual(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.rank, {torus_dual_exp(e): c for e, c in self._terms.items()})

    def truncate_q(self, order: int) -> "LaurentPoly":
        return LaurentPoly._raw(self.rank, {e: c for e, c in self._terms.items() if e[-1] <= order})

    def q_slice(self, k: int) -> "LaurentPoly":
        """Terms of q-degree exactly ``k`` (the q exponent is kept)."""
        return LaurentPoly._raw(self.rank, {e: c for e, c in self._terms.items() if e[-1] == k})

    def embed(self, new_rank: int) -> "LaurentPoly":
        """View as a polynomial on a larger torus; new variables are inserted before q."""
        if new_rank < self.rank:
            raise RankMismatchError("cannot embed into a smaller torus")
        pad = (0,) * (new_rank - self.rank)
        return LaurentPoly._raw(new_rank, {e[:-1] + pad + e[-1:]: c for e, c in self._terms.items()})

    def split_variables(self, positions: tuple[int, ...]) -> dict[tuple[int, ...], "LaurentPoly"]:
        """Group terms by the exponents at ``positions``; those slots are removed.

        The result maps the removed exponents to a polynomial on a torus of rank
        ``rank - len(positions)``. ``positions`` must not include the q slot.
        """
        keep = [i for i in range(self.rank + 1) if i not in positions]
        new_rank = self.rank - len(positions)
        groups: dict[tuple[int, ...], dict[Exponent, int]] = {}
        for e, c in self._terms.items():
            key = tuple(e[i] for i in positions)
            groups.setdefault(key, {})[tuple(e[i] for i in keep)] = c
        return {k: LaurentPoly._raw(new_rank, v) for k, v in groups.items()}

    # comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(self.rank, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rank, self.terms()))
        return self._hash

    # formatting -------------------------------------------------------

    def to_records(self) -> list[dict]:
        return [{"exponents": list(e), "coefficient": c} for e, c in self.terms()]

    @classmethod
    def from_records(cls, rank: int, records: Iterable[Mapping]) -> "LaurentPoly":
        terms: dict[Exponent, int] = {}
        for rec in records:
            e = tuple(rec["exponents"])
            terms[e] = terms.get(e, 0) + int(rec["coefficient"])
        return cls(rank, terms)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms()):
            mono = format_monomial(e)
            if mono == "1":
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        head_sign, head = parts[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def format_monomial(e: Exponent) -> str:
    names = [f"t{i + 1}" for i in range(len(e) - 1)] + ["q"]
    bits = []
    for name, k in zip(names, e):
        if k == 1:
            bits.append(name)
        elif k:
            bits.append(f"{name}^{k}")
    return "*".join(bits) if bits else "1"


# ---------------------------------------------------------------------------
# localized classes


def _orient(m: Exponent) -> tuple[Exponent, bool]:
    """Canonical orientation of a factor ``1 - x^m``.

    ``1 - x^m = -x^m (1 - x^{-m})``. Factors with q-dependence are kept with
    positive q-exponent so they stay expandable; otherwise the lexicographically
    positive orientation is used. Returns the oriented exponent and whether a
    flip happened.
    """
    if m[-1] > 0:
        return m, False
    if m[-1] < 0:
        return neg_exp(m), True
    for x in m:
        if x > 0:
            return m, False
        if x < 0:
            return neg_exp(m), True
    raise ZeroDivisionError("factor 1 - 1 = 0 in denominator")


def _product_of_factors(rank: int, factors: Iterable[Exponent]) -> LaurentPoly:
    out = LaurentPoly.one(rank)
    one = unit_exponent(rank)
    for m in factors:
        out = out * LaurentPoly._raw(rank, {one: 1, m: -1})
    return out


class RationalClass:
    """``numerator / prod (1 - x^m)``: an element of the fraction field of Rep(T).

    The denominator monomial is absorbed into the Laurent numerator, so only the
    ``(1 - x^m)`` factors are stored (as a sorted multiset of exponents).
    Equality is by cross-multiplication, never by normal form.
    """

    __slots__ = ("numerator", "factors")

    def __init__(self, numerator: LaurentPoly, factors: Iterable[Exponent] = ()):
        num = numerator
        oriented = []
        flips = 0
        for m in factors:
            m = tuple(m)
            if len(m) != num.rank + 1:
                raise RankMismatchError(f"factor exponent {m} does not match rank {num.rank}")
            om, flipped = _orient(m)
            if flipped:
                # 1/(1-x^m) = -x^{-m}/(1-x^{-m})
                num = num.shift(om)
                flips += 1
            oriented.append(om)
        if flips % 2:
            num = -num
        self.numerator = num
        self.factors: tuple[Exponent, ...] = tuple(sorted(oriented))

    @property
    def rank(self) -> int:
        return self.numerator.rank

    @classmethod
    def of(cls, poly: LaurentPoly) -> "RationalClass":
        return cls(poly, ())

    @classmethod
    def zero(cls, rank: int) -> "RationalClass":
        return cls(LaurentPoly.zero(rank))

    @classmethod
    def one(cls, rank: int) -> "RationalClass":
        return cls(LaurentPoly.one(rank))

    @property
    def denominator(self) -> LaurentPoly:
        return _product_of_factors(self.rank, self.factors)

    def is_polynomial(self) -> bool:
        return not self.factors

    def _coerce(self, other) -> "RationalClass":
        if isinstance(other, RationalClass):
            if other.rank != self.rank:
                raise RankMismatchError(f"torus ranks {self.rank} and {other.rank} differ")
            return other
        if isinstance(other, LaurentPoly):
            if other.rank != self.rank:
                raise RankMismatchError(f"torus ranks {self.rank} and {other.rank} differ")
            return RationalClass(other)
        if isinstance(other, int):
            return RationalClass(LaurentPoly.constant(self.rank, other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.numerator:
            return self
        if not self.numerator:
            return other
        ca, cb = Counter(self.factors), Counter(other.factors)
        joint = ca | cb
        num = self.numerator * _product_of_factors(self.rank, (cb - ca).elements()) + (
            other.numerator * _product_of_factors(self.rank, (ca - cb).elements())
        )
        return RationalClass._trusted(num, tuple(sorted(joint.elements())))

    __radd__ = __add__

    def __neg__(self) -> "RationalClass":
        return RationalClass._trusted(-self.numerator, self.factors)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalClass._trusted(
            self.numerator * other.numerator, tuple(sorted(self.factors + other.factors))
        )

    __rmul__ = __mul__

    def divide_by_factors(self, factors: Iterable[Exponent]) -> "RationalClass":
        """Multiply by ``1 / prod (1 - x^m)``."""
        return self * RationalClass(LaurentPoly.one(self.rank), factors)

    @classmethod
    def _trusted(cls, numerator: LaurentPoly, factors: tuple[Exponent, ...]) -> "RationalClass":
        obj = cls.__new__(cls)
        obj.numerator = numerator
        obj.factors = factors
        return obj

    def dual(self) -> "RationalClass":
        return RationalClass(self.numerator.dual(), [torus_dual_exp(m) for m in self.factors])

    def embed(self, new_rank: int) -> "RationalClass":
        pad = (0,) * (new_rank - self.rank)
        return RationalClass(self.numerator.embed(new_rank), [m[:-1] + pad + m[-1:] for m in self.factors])

    def __eq__(self, other) -> bool:
        if isinstance(other, (RationalClass, LaurentPoly, int)):
            return rat_eq(self, self._coerce(other))
        return NotImplemented

    __hash__ = None  # equality is not decided by a normal form

    def to_record(self) -> dict:
        return {
            "numerator": self.numerator.to_records(),
            "denominator_factors": [list(m) for m in self.factors],
        }

    def __repr__(self) -> str:
        return f"RationalClass({self})"

    def __str__(self) -> str:
        if not self.factors:
            return str(self.numerator)
        den = "*".join(f"(1 - {format_monomial(m)})" for m in self.factors)
        return f"({self.numerator}) / ({den})"


# ---------------------------------------------------------------------------
# module-level operations


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def lp_dual(a: LaurentPoly) -> LaurentPoly:
    return a.dual()


def rat_eq(a: RationalClass, b: RationalClass) -> bool:
    """``a.num * b.den == b.num * a.den``, after cancelling factors both share."""
    if a.rank != b.rank:
        raise RankMismatchError(f"torus ranks {a.rank} and {b.rank} differ")
    ca, cb = Counter(a.factors), Counter(b.factors)
    lhs = a.numerator * _product_of_factors(a.rank, (cb - ca).elements())
    rhs = b.numerator * _product_of_factors(a.rank, (ca - cb).elements())
    return lhs == rhs


def geom_inv(m: Exponent) -> RationalClass:
    """``1 / (1 - x^m)``; the unit monomial is rejected."""
    m = tuple(m)
    if not any(m):
        raise ValueError("1/(1 - 1) is undefined: trivial weight")
    return RationalClass(LaurentPoly.one(len(m) - 1), [m])


def rat_series(a: RationalClass, order: int) -> LaurentPoly:
    """Expand ``a`` as a power series in q, keeping q-degrees ``<= order``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    for m in a.factors:
        if m[-1] <= 0:
            raise NotExpandableError(f"factor 1 - {format_monomial(m)} has no positive q-exponent")
    num = a.numerator
    if not num:
        return num
    if not a.factors:
        return num.truncate_q(order)
    low, _ = num.q_degrees()
    budget = order - low
    if budget < 0:
        return LaurentPoly.zero(a.rank)
    rank = a.rank
    one = unit_exponent(rank)
    series = LaurentPoly.one(rank)
    for m in a.factors:
        step = m[-1]
        geo = {one: 1}
        power = one
        for _ in range(budget // step):
            power = add_exp(power, m)
            geo[power] = geo.get(power, 0) + 1
        series = (series * LaurentPoly._raw(rank, geo)).truncate_q(budget)
    return (num * series).truncate_q(order)
