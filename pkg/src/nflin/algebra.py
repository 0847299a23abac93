"""Exact arithmetic: Gaussian rationals, sparse multivariate polynomials, and
polynomial-exponential functions of time.

Everything here is immutable and float-free.  Rationals are ``fractions.Fraction``.
"""
from __future__ import annotations

import re
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Fraction

__all__ = [
    "Rational",
    "GaussianRational",
    "Poly",
    "PolyExp",
    "Monomial",
    "parse_rational",
    "parse_gaussian",
    "parse_poly",
    "symbol_key",
    "multiindex_degree",
    "unit_multiindex",
]


def parse_rational(text: Union[str, int]) -> Fraction:
    """Parse ``"3"``, ``"-2/5"`` or an int.  Floats are refused."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not re.fullmatch(r"\s*[+-]?\d+(\s*/\s*\d+)?\s*", text):
        raise ValueError(f"not a rational: {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den else 1)


class GaussianRational:
    """A complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re: Union[int, Fraction] = 0, im: Union[int, Fraction] = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)
        self._hash = None

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return cls(value)
        raise TypeError(f"cannot coerce {value!r} to GaussianRational")

    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        if not self.im and not other.im:
            return GaussianRational(self.re * other.re)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.abs2()
        if not n:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.re) if not self.im else hash((self.re, self.im))
        return self._hash

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def sort_key(self):
        return (self.re, self.im)

    def is_real(self) -> bool:
        return not self.im

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return _imag_str(self.im)
        im = _imag_str(self.im)
        sign = "" if im.startswith("-") else "+"
        return f"{self.re}{sign}{im}"

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, obj) -> "GaussianRational":
        if isinstance(obj, dict):
            return cls(parse_rational(obj.get("re", "0")), parse_rational(obj.get("im", "0")))
        return parse_gaussian(obj)


def _imag_str(im: Fraction) -> str:
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    return f"{im}i" if im.denominator == 1 else f"{im}*i"


def parse_gaussian(text) -> GaussianRational:
    """Parse a numeric literal such as ``"2"``, ``"-1/2"``, ``"i"``, ``"1-3i"``."""
    p = parse_poly(text) if isinstance(text, str) else Poly.constant(text)
    if not p.is_constant():
        raise ValueError(f"not a numeric literal: {text!r}")
    return p.constant_value()


ZERO = GaussianRational(0)
ONE = GaussianRational(1)

# A monomial is a tuple of (symbol, exponent) pairs, sorted by symbol_key,
# with every exponent >= 1.  The empty tuple is the constant monomial.
Monomial = tuple


@lru_cache(maxsize=None)
def symbol_key(name: str):
    """Natural ordering on symbol names so that ``x2 < x10``."""
    return tuple(int(tok) if tok.isdigit() else tok for tok in re.findall(r"\d+|\D+", name))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for s, e in b:
        d[s] = d.get(s, 0) + e
    return tuple(sorted(d.items(), key=lambda se: symbol_key(se[0])))


def _mono_degree(m: Monomial, symbols=None) -> int:
    if symbols is None:
        return sum(e for _, e in m)
    return sum(e for s, e in m if s in symbols)


def multiindex_degree(mu: Iterable[int]) -> int:
    return sum(mu)


def unit_multiindex(i: int, n: int) -> tuple:
    """The multiindex with a single 1 in (0-based) slot ``i``."""
    return tuple(1 if j == i else 0 for j in range(n))


class Poly:
    """Sparse multivariate polynomial with Gaussian-rational coefficients.

    Symbols are plain strings; there is no fixed ambient ring, so polynomials
    over different symbol sets combine freely.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, GaussianRational] = None):
        if terms is None:
            terms = {}
        self.terms = {m: c for m, c in terms.items() if c}
        self._hash = None

    # constructors ------------------------------------------------------
    @classmethod
    def constant(cls, value) -> "Poly":
        if isinstance(value, Poly):
            return value
        c = GaussianRational.coerce(value)
        return cls({(): c}) if c else cls()

    @classmethod
    def symbol(cls, name: str, power: int = 1) -> "Poly":
        if power == 0:
            return cls({(): ONE})
        return cls({((name, power),): ONE})

    @classmethod
    def monomial(cls, names: Iterable[str], exponents: Iterable[int], coeff=ONE) -> "Poly":
        m = tuple(sorted(((s, e) for s, e in zip(names, exponents) if e), key=lambda se: symbol_key(se[0])))
        return cls({m: GaussianRational.coerce(coeff)})

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def one(cls) -> "Poly":
        return cls({(): ONE})

    @staticmethod
    def _lift(other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, GaussianRational)) and not isinstance(other, bool):
            return Poly.constant(other)
        return None

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = Poly._lift(other)
        if other is None:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            out[m] = c if v is None else v + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = Poly._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Poly._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.terms or not other.terms:
            return Poly()
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m)
                c = c1 * c2
                out[m] = c if v is None else v + c
        return Poly(out)

    __rmul__ = __mul__

    def scale(self, k) -> "Poly":
        k = GaussianRational.coerce(k)
        if not k:
            return Poly()
        if k == ONE:
            return self
        return Poly({m: c * k for m, c in self.terms.items()})

    def __truediv__(self, k):
        if isinstance(k, Poly):
            if not k.is_constant():
                raise TypeError("division by a non-constant polynomial")
            k = k.constant_value()
        return self.scale(GaussianRational.coerce(k).inverse())

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # comparison --------------------------------------------------------
    def __eq__(self, other):
        other = Poly._lift(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise ValueError(f"polynomial {self} is not constant")
        return self.terms.get((), ZERO)

    def constant_term(self) -> GaussianRational:
        return self.terms.get((), ZERO)

    # structure ---------------------------------------------------------
    @property
    def symbols(self) -> tuple:
        names = {s for m in self.terms for s, _ in m}
        return tuple(sorted(names, key=symbol_key))

    def degree(self, symbols=None) -> int:
        """Total degree, optionally counting only ``symbols``; -1 for zero."""
        if not self.terms:
            return -1
        syms = None if symbols is None else set(symbols)
        return max(_mono_degree(m, syms) for m in self.terms)

    def conjugate(self) -> "Poly":
        """Conjugate the coefficients; symbols are treated as real."""
        return Poly({m: c.conjugate() for m, c in self.terms.items()})

    def diff(self, name: str) -> "Poly":
        out: dict = {}
        for m, c in self.terms.items():
            for k, (s, e) in enumerate(m):
                if s == name:
                    nm = m[:k] + ((s, e - 1),) + m[k + 1:] if e > 1 else m[:k] + m[k + 1:]
                    out[nm] = out.get(nm, ZERO) + c * e
                    break
        return Poly(out)

    def split(self, symbols: Iterable[str]) -> dict:
        """Group terms by their exponents over ``symbols``.

        Returns ``{exponent tuple over symbols: coefficient Poly in the rest}``.
        """
        symbols = tuple(symbols)
        index = {s: i for i, s in enumerate(symbols)}
        groups: dict = {}
        for m, c in self.terms.items():
            exps = [0] * len(symbols)
            rest = []
            for s, e in m:
                i = index.get(s)
                if i is None:
                    rest.append((s, e))
                else:
                    exps[i] = e
            groups.setdefault(tuple(exps), {})[tuple(rest)] = c
        return {k: Poly(v) for k, v in groups.items()}

    def subs(self, bindings: Mapping[str, "Poly"]) -> "Poly":
        """Substitute polynomials for symbols; unbound symbols are kept."""
        if not bindings or not self.terms:
            return self
        bound = {s: Poly._lift(v) for s, v in bindings.items()}
        cache: dict = {}

        def power(s, e):
            key = (s, e)
            if key not in cache:
                cache[key] = bound[s] ** e
            return cache[key]

        out = Poly()
        for m, c in self.terms.items():
            keep = tuple((s, e) for s, e in m if s not in bound)
            term = Poly({keep: c})
            for s, e in m:
                if s in bound:
                    term = term * power(s, e)
            out = out + term
        return out

    def evaluate(self, bindings: Mapping[str, complex]) -> complex:
        """Numeric value; raises ``KeyError`` naming the first unbound symbol."""
        total = 0j
        for m, c in self.terms.items():
            v = complex(c)
            for s, e in m:
                if s not in bindings:
                    raise KeyError(s)
                v *= bindings[s] ** e
            total += v
        return total

    def compose(self, values: Mapping[str, object], one, cache=None):
        """Evaluate with symbols replaced by elements of another ring.

        ``values`` maps some symbols to ring elements supporting ``+``, ``*``
        and scaling by a ``Poly``; the remaining symbols stay in the
        coefficients.  ``one`` is the ring's unit.
        """
        if cache is None:
            cache = {}
        out = None
        groups: dict = {}
        for m, c in self.terms.items():
            inner = tuple((s, e) for s, e in m if s in values)
            rest = tuple((s, e) for s, e in m if s not in values)
            groups.setdefault(inner, {})[rest] = c
        for inner, coeff_terms in groups.items():
            prod = one
            for s, e in inner:
                key = (s, e)
                if key not in cache:
                    base = values[s]
                    acc = one
                    for _ in range(e):
                        acc = acc * base
                    cache[key] = acc
                prod = prod * cache[key]
            term = prod.scale(Poly(coeff_terms))
            out = term if out is None else out + term
        if out is None:
            return one.scale(Poly())
        return out

    # rendering ---------------------------------------------------------
    def sorted_terms(self) -> list:
        """Terms in graded lexicographic order (highest degree first)."""
        def key(item):
            m, _ = item
            return (-_mono_degree(m), tuple((symbol_key(s), -e) for s, e in m))
        return sorted(self.terms.items(), key=key)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(s if e == 1 else f"{s}^{e}" for s, e in m)
            if not m:
                body, neg = _coeff_str(c)
            elif c == ONE:
                body, neg = mono, False
            elif c == -ONE:
                body, neg = mono, True
            else:
                cb, neg = _coeff_str(c)
                body = f"{cb}*{mono}"
            parts.append((neg, body))
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self):
        return f"Poly({str(self)!r})"


def _coeff_str(c: GaussianRational):
    """Render a coefficient; returns (text, negative?)."""
    if c.im and c.re:
        return f"({c})", False
    if c.im:
        s = _imag_str(abs(c.im))
        return s, c.im < 0
    return str(abs(c.re)), c.re < 0


# ---------------------------------------------------------------------------
# expression parser for the text form produced by Poly.__str__

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def parse_poly(text: str) -> Poly:
    """Parse ``+ - * / ^`` expressions over integers, ``i`` and identifiers.

    Division is only allowed by numeric constants.  This accepts everything
    ``str(Poly)`` emits.
    """
    if not isinstance(text, str):
        raise ValueError(f"expected an expression string, got {text!r}")
    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        mo = _TOKEN.match(stripped, pos)
        num, name, op = mo.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("name", name))
        elif op in "+-*/^()":
            tokens.append(("op", op))
        else:
            raise ValueError(f"unexpected character {op!r} in {text!r}")
        pos = mo.end()
    tokens.append(("end", None))
    parser = _Parser(tokens, text)
    out = parser.expr()
    if parser.peek() != ("end", None):
        raise ValueError(f"trailing input in {text!r}")
    return out


class _Parser:
    def __init__(self, tokens, text):
        self.tokens = tokens
        self.i = 0
        self.text = text

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise ValueError(f"expected {op!r} in {self.text!r}")

    def expr(self):
        sign = 1
        while self.peek() in (("op", "+"), ("op", "-")):
            if self.take()[1] == "-":
                sign = -sign
        out = self.term().scale(sign)
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            sign = 1 if op == "+" else -1
            while self.peek() in (("op", "+"), ("op", "-")):
                if self.take()[1] == "-":
                    sign = -sign
            t = self.term()
            out = out + t if sign > 0 else out - t
        return out

    def term(self):
        out = self.factor()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                out = out * self.factor()
            elif tok == ("op", "/"):
                self.take()
                d = self.factor()
                if not d.is_constant() or not d:
                    raise ValueError(f"division by non-constant or zero in {self.text!r}")
                out = out / d
            elif tok[0] in ("num", "name") or tok == ("op", "("):
                out = out * self.factor()   # implicit product, e.g. "3i"
            else:
                return out

    def factor(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "num":
                raise ValueError(f"exponent must be a nonnegative integer in {self.text!r}")
            return base ** tok[1]
        return base

    def atom(self):
        tok = self.take()
        if tok[0] == "num":
            return Poly.constant(tok[1])
        if tok[0] == "name":
            if tok[1] == "i":
                return Poly.constant(GaussianRational(0, 1))
            return Poly.symbol(tok[1])
        if tok == ("op", "("):
            out = self.expr()
            self.expect(")")
            return out
        if tok == ("op", "-"):
            return -self.factor()
        raise ValueError(f"unexpected token {tok[1]!r} in {self.text!r}")


# ---------------------------------------------------------------------------


def _tpoly_str(tp: dict) -> str:
    parts = []
    for k in sorted(tp):
        c = tp[k]
        cs = str(c)
        if len(c.terms) > 1 or cs.startswith("-") and k:
            cs = f"({cs})"
        if k == 0:
            parts.append(cs)
        else:
            tt = "t" if k == 1 else f"t^{k}"
            parts.append(tt if cs == "1" else f"{cs}*{tt}")
    return " + ".join(parts)


class PolyExp:
    """Finite sums ``sum_lam p_lam(t) * exp(lam*t)``.

    ``terms`` maps the exponent ``lam`` to ``{t-power: Poly coefficient}``.
    Coefficients are polynomials in whatever symbols (initial data,
    parameters) the caller uses.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping = None):
        clean = {}
        for lam, tp in (terms or {}).items():
            tp = {k: c for k, c in tp.items() if c}
            if tp:
                clean[GaussianRational.coerce(lam)] = tp
        self.terms = clean

    @classmethod
    def zero(cls) -> "PolyExp":
        return cls()

    @classmethod
    def term(cls, lam, coeff=1, tpower: int = 0) -> "PolyExp":
        return cls({lam: {tpower: Poly.constant(coeff) if not isinstance(coeff, Poly) else coeff}})

    @classmethod
    def one(cls) -> "PolyExp":
        return cls.term(0, 1, 0)

    def __add__(self, other):
        if not isinstance(other, PolyExp):
            return NotImplemented
        if not other.terms:
            return self
        out = {lam: dict(tp) for lam, tp in self.terms.items()}
        for lam, tp in other.terms.items():
            dst = out.setdefault(lam, {})
            for k, c in tp.items():
                dst[k] = dst[k] + c if k in dst else c
        return PolyExp(out)

    def __neg__(self):
        return PolyExp({lam: {k: -c for k, c in tp.items()} for lam, tp in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (Poly, int, Fraction, GaussianRational)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, PolyExp):
            return NotImplemented
        out: dict = {}
        for l1, tp1 in self.terms.items():
            for l2, tp2 in other.terms.items():
                dst = out.setdefault(l1 + l2, {})
                for k1, c1 in tp1.items():
                    for k2, c2 in tp2.items():
                        k = k1 + k2
                        c = c1 * c2
                        dst[k] = dst[k] + c if k in dst else c
        return PolyExp(out)

    __rmul__ = __mul__

    def scale(self, k) -> "PolyExp":
        k = Poly.constant(k) if not isinstance(k, Poly) else k
        if not k:
            return PolyExp()
        return PolyExp({lam: {p: c * k for p, c in tp.items()} for lam, tp in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, PolyExp):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((lam, frozenset(tp.items())) for lam, tp in self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def exponents(self) -> list:
        return sorted(self.terms, key=GaussianRational.sort_key)

    def tdegree(self, lam=None) -> int:
        """Largest power of t, overall or for one exponent; -1 if absent."""
        if lam is not None:
            tp = self.terms.get(GaussianRational.coerce(lam))
            return max(tp) if tp else -1
        return max((max(tp) for tp in self.terms.values()), default=-1)

    def coefficient(self, lam, tpower: int) -> Poly:
        return self.terms.get(GaussianRational.coerce(lam), {}).get(tpower, Poly())

    def derivative(self) -> "PolyExp":
        """d/dt (p(t) e^{lam t}) = (p'(t) + lam p(t)) e^{lam t}."""
        out: dict = {}
        for lam, tp in self.terms.items():
            dst: dict = {}
            for k, c in tp.items():
                if lam:
                    dst[k] = dst[k] + c.scale(lam) if k in dst else c.scale(lam)
                if k:
                    d = c.scale(k)
                    dst[k - 1] = dst[k - 1] + d if (k - 1) in dst else d
            out[lam] = dst
        return PolyExp(out)

    def antiderivative(self) -> "PolyExp":
        """A particular antiderivative (no integration constant added)."""
        out: dict = {}
        for lam, tp in self.terms.items():
            if not lam:
                out[lam] = {k + 1: c / (k + 1) for k, c in tp.items()}
            else:
                out[lam] = _exp_antiderivative(lam, tp)
        return PolyExp(out)

    def at_zero(self) -> Poly:
        """Value at t = 0."""
        out = Poly()
        for tp in self.terms.values():
            if 0 in tp:
                out = out + tp[0]
        return out

    def subs(self, bindings: Mapping[str, Poly]) -> "PolyExp":
        return PolyExp({lam: {k: c.subs(bindings) for k, c in tp.items()} for lam, tp in self.terms.items()})

    @property
    def symbols(self) -> tuple:
        names = set()
        for tp in self.terms.values():
            for c in tp.values():
                names.update(c.symbols)
        return tuple(sorted(names, key=symbol_key))

    def evaluate(self, t: float, bindings: Mapping[str, complex]) -> complex:
        import cmath

        total = 0j
        for lam, tp in self.terms.items():
            poly_t = sum(c.evaluate(bindings) * t ** k for k, c in tp.items())
            total += poly_t * cmath.exp(complex(lam) * t)
        return total

    def records(self) -> list:
        """Canonical list of ``(lam, tpower, coeff)`` sorted by exponent, then t-power."""
        return [(lam, k, self.terms[lam][k]) for lam in self.exponents() for k in sorted(self.terms[lam])]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for lam in self.exponents():
            inner = f"({_tpoly_str(self.terms[lam])})"
            parts.append(inner if not lam else f"{inner}*e^({_exp_arg(lam)})")
        return " + ".join(parts)

    def __repr__(self):
        return f"PolyExp({str(self)!r})"


def _exp_arg(lam: GaussianRational) -> str:
    if lam == ONE:
        return "t"
    if lam == -ONE:
        return "-t"
    text = str(lam)
    if lam.re and lam.im:
        text = f"({text})"
    return f"{text}*t"


def _exp_antiderivative(lam: GaussianRational, tp: dict) -> dict:
    """Antiderivative of p(t) e^{lam t}, lam != 0, by repeated parts:
    q = sum_j (-1)^j p^{(j)} / lam^{j+1}."""
    inv = lam.inverse()
    out: dict = {}
    cur = dict(tp)
    factor = inv
    while cur:
        for k, c in cur.items():
            v = c.scale(factor)
            out[k] = out[k] + v if k in out else v
        cur = {k - 1: c.scale(k) for k, c in cur.items() if k}
        factor = -factor * inv
    return out


def solve_scalar(lam, y0: Poly, forcing: PolyExp) -> PolyExp:
    """Solve y' = lam*y + g(t), y(0) = y0 by variation of constants.

    Forcing terms at the same exponent as ``lam`` raise the power of t
    (t^k -> t^(k+1)/(k+1)); the others are integrated by parts.
    """
    lam = GaussianRational.coerce(lam)
    y0 = Poly.constant(y0) if not isinstance(y0, Poly) else y0
    out: dict = {}
    correction = Poly()
    for mu, tp in forcing.terms.items():
        if mu == lam:
            dst = out.setdefault(lam, {})
            for k, c in tp.items():
                v = c / (k + 1)
                dst[k + 1] = dst[k + 1] + v if (k + 1) in dst else v
        else:
            q = _exp_antiderivative(mu - lam, tp)
            out[mu] = _merge_tp(out.get(mu, {}), q)
            correction = correction + q.get(0, Poly())
    home = out.setdefault(lam, {})
    base = y0 - correction
    home[0] = home[0] + base if 0 in home else base
    return PolyExp(out)


def _merge_tp(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        out[k] = out[k] + c if k in out else c
    return out
