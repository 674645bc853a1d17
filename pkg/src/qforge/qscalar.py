"""Exact arithmetic in the ground ring of all qforge algebras.

Every scalar is a Laurent polynomial in the half-power deformation
variable s (with q = s^2) over the rationals, stored as a canonical map
from s-exponent to nonzero Fraction coefficient.  Working in s rather
than q keeps the symplectic metric's half powers q^(1/2) inside an
ordinary Laurent ring, so no algebraic extension is ever needed.  The
deformation parameter is treated as real, hence scalars are fixed by
the conjugation anti-involution.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DivisionFailure, NonUnitInverse, ParseError, ZeroBase

_FractionLike = (int, Fraction)


class QScalar:
    """Laurent polynomial in s = q^(1/2) with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        t = {}
        if terms:
            for exp, coeff in terms.items():
                c = Fraction(coeff)
                if c:
                    t[int(exp)] = c
        self._terms = t
        self._hash = None

    # -- constructors ------------------------------------------------

    @staticmethod
    def zero() -> "QScalar":
        return QScalar()

    @staticmethod
    def one() -> "QScalar":
        return QScalar({0: 1})

    @staticmethod
    def constant(c) -> "QScalar":
        return QScalar({0: Fraction(c)})

    @staticmethod
    def s_power(k: int, coeff=1) -> "QScalar":
        return QScalar({k: Fraction(coeff)})

    @staticmethod
    def q_power(k: int, coeff=1) -> "QScalar":
        """coeff * q^k, an even power of s."""
        return QScalar({2 * k: Fraction(coeff)})

    @staticmethod
    def q() -> "QScalar":
        return QScalar({2: 1})

    @staticmethod
    def lam() -> "QScalar":
        """The combination q - q^(-1) that measures the deformation."""
        return QScalar({2: 1, -2: -1})

    @staticmethod
    def q_bracket(x: int) -> "QScalar":
        """Symmetric q-integer: q^(x-1) + q^(x-3) + ... + q^(1-x)."""
        if x < 0:
            raise ValueError("q_bracket requires a nonnegative integer")
        return QScalar({2 * (x - 1 - 2 * i): 1 for i in range(x)})

    # -- predicates and views ------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def is_one(self) -> bool:
        return self._terms == {0: Fraction(1)}

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def terms(self):
        return dict(self._terms)

    def as_fraction(self):
        """Return the constant value, or None if not a constant."""
        if not self._terms:
            return Fraction(0)
        if self._terms.keys() == {0}:
            return self._terms[0]
        return None

    def min_exp(self) -> int:
        return min(self._terms) if self._terms else 0

    def max_exp(self) -> int:
        return max(self._terms) if self._terms else 0

    def leading(self):
        """(exponent, coefficient) of the highest power of s."""
        e = self.max_exp()
        return e, self._terms.get(e, Fraction(0))

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        t = dict(self._terms)
        for e, c in other._terms.items():
            nc = t.get(e, Fraction(0)) + c
            if nc:
                t[e] = nc
            else:
                t.pop(e, None)
        r = QScalar.__new__(QScalar)
        r._terms = t
        r._hash = None
        return r

    __radd__ = __add__

    def __neg__(self):
        r = QScalar.__new__(QScalar)
        r._terms = {e: -c for e, c in self._terms.items()}
        r._hash = None
        return r

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        t = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                nc = t.get(e, Fraction(0)) + c1 * c2
                if nc:
                    t[e] = nc
                else:
                    t.pop(e, None)
        r = QScalar.__new__(QScalar)
        r._terms = t
        r._hash = None
        return r

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k == 0:
            return QScalar.one()
        if k < 0:
            return self.inverse() ** (-k)
        r = QScalar.one()
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def inverse(self) -> "QScalar":
        """Inverse of a unit monomial c*s^k; anything else has none."""
        if len(self._terms) != 1:
            raise NonUnitInverse(f"cannot invert non-monomial {self}")
        (e, c), = self._terms.items()
        return QScalar({-e: Fraction(1) / c})

    def divexact(self, other: "QScalar") -> "QScalar":
        """Exact division in the Laurent ring; raises DivisionFailure."""
        other = _coerce(other)
        if other.is_zero():
            raise DivisionFailure("division by zero")
        if other.is_monomial():
            return self * other.inverse()
        if self.is_zero():
            return QScalar.zero()
        # shift both to ordinary polynomials in s and long-divide
        sa, sb = self.min_exp(), other.min_exp()
        a = self._poly_coeffs()
        b = other._poly_coeffs()
        quot, rem = _poly_divmod(a, b)
        if any(rem):
            raise DivisionFailure(f"{self} is not divisible by {other}")
        shift = sa - sb
        return QScalar({i + shift: c for i, c in enumerate(quot) if c})

    def _poly_coeffs(self):
        lo, hi = self.min_exp(), self.max_exp()
        out = [Fraction(0)] * (hi - lo + 1)
        for e, c in self._terms.items():
            out[e - lo] = c
        return out

    # -- parameter maps ------------------------------------------------

    def subs_inverse_param(self) -> "QScalar":
        """Ring automorphism s -> s^(-1), i.e. q -> q^(-1)."""
        return QScalar({-e: c for e, c in self._terms.items()})

    def specialize(self, s0) -> Fraction:
        """Exact evaluation at a rational value of s."""
        s0 = Fraction(s0)
        if s0 == 0:
            raise ZeroBase("cannot specialize at s = 0")
        return sum((c * s0 ** e for e, c in self._terms.items()), Fraction(0))

    def conjugate(self) -> "QScalar":
        # q is real, so scalars are fixed by the anti-involution
        return self

    # -- comparisons, hashing, rendering ---------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"QScalar({self})"

    def __str__(self):
        return render_scalar(self)


def _coerce(x):
    if isinstance(x, QScalar):
        return x
    if isinstance(x, _FractionLike):
        return QScalar.constant(x)
    return NotImplemented


def _poly_divmod(a, b):
    """Long division of coefficient lists (ascending powers) over Q."""
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    if da < db:
        return [Fraction(0)], a
    quot = [Fraction(0)] * (da - db + 1)
    lead = b[-1]
    for k in range(da - db, -1, -1):
        c = a[k + db] / lead
        quot[k] = c
        if c:
            for i, bc in enumerate(b):
                a[k + i] -= c * bc
    return quot, a


# -- gcd / content ---------------------------------------------------------


def _poly_gcd(a, b):
    a, b = list(a), list(b)
    while any(b):
        _, r = _poly_divmod(a, b)
        while r and not r[-1]:
            r.pop()
        a, b = b, r
    return a


def scalar_gcd(values) -> QScalar:
    """Monic gcd of Laurent polynomials, normalized to min exponent 0.

    Zero inputs are skipped; the gcd of nothing is 1.
    """
    polys = [v for v in values if not v.is_zero()]
    if not polys:
        return QScalar.one()
    g = polys[0]._poly_coeffs()
    for v in polys[1:]:
        if len(g) == 1:
            break
        g = _poly_gcd(g, v._poly_coeffs())
        while g and not g[-1]:
            g.pop()
    lead = g[-1]
    return QScalar({i: c / lead for i, c in enumerate(g) if c})


# -- rendering -------------------------------------------------------------


def _render_power(e: int) -> str:
    """Power of s as a power of q; odd s-exponents print as q^(k/2)."""
    if e == 0:
        return "1"
    if e % 2 == 0:
        k = e // 2
        return "q" if k == 1 else f"q^{k}"
    return f"q^({e}/2)"


def render_scalar(x: QScalar) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for e in sorted(x._terms, reverse=True):
        c = x._terms[e]
        sign = "-" if c < 0 else "+"
        c = abs(c)
        pw = _render_power(e)
        if pw == "1":
            body = str(c)
        elif c == 1:
            body = pw
        else:
            body = f"{c}*{pw}"
        parts.append((sign, body))
    sign, body = parts[0]
    out = body if sign == "+" else "-" + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# -- tokenizing and parsing -------------------------------------------------

_TOKEN_CHARS = set("+-*/^()")


def tokenize(text: str):
    """Split a scalar/polynomial expression into tokens.

    Tokens: rational literals, identifiers (q, s, generator names),
    operators + - * / ^ and parentheses.  Whitespace separates tokens
    but is otherwise insignificant.
    """
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _TOKEN_CHARS:
            tokens.append(ch)
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(text[i:j])
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'†"):
                j += 1
            tokens.append(text[i:j])
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r} in {text!r}")
    return tokens


class _ScalarParser:
    """Recursive-descent parser for scalar expressions in q and s."""

    def __init__(self, tokens):
        self.toks = tokens
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of expression")
        self.pos += 1
        return t

    def parse(self) -> QScalar:
        v = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input at {self.peek()!r}")
        return v

    def expr(self) -> QScalar:
        t = self.peek()
        if t == "-":
            self.next()
            v = -self.term()
        else:
            if t == "+":
                self.next()
            v = self.term()
        while self.peek() in ("+", "-"):
            op = self.next()
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self) -> QScalar:
        v = self.factor()
        while True:
            t = self.peek()
            if t in ("*", "/"):
                op = self.next()
                rhs = self.factor()
                v = v * rhs if op == "*" else v.divexact(rhs)
            elif t is not None and t not in ("+", "-", ")", "^"):
                v = v * self.factor()
            else:
                return v

    def factor(self) -> QScalar:
        is_q = self.peek() == "q"
        v = self.atom()
        if self.peek() == "^":
            self.next()
            e = self.exponent()
            if isinstance(e, _HalfPower):
                if not is_q:
                    raise ParseError("half-integer exponents apply to q only")
                return QScalar.s_power(e.k)
            return v ** e
        return v

    def exponent(self):
        t = self.next()
        if t == "(":
            # allow q^(k/2) meaning an odd power of s
            sign = 1
            t = self.next()
            if t == "-":
                sign = -1
                t = self.next()
            if not t.isdigit():
                raise ParseError(f"bad exponent token {t!r}")
            num = sign * int(t)
            if self.peek() == "/":
                self.next()
                den = self.next()
                if den != "2":
                    raise ParseError("only half-integer exponents are supported")
                if self.next() != ")":
                    raise ParseError("unclosed exponent")
                return _HalfPower(num)
            if self.next() != ")":
                raise ParseError("unclosed exponent")
            return num
        neg = False
        if t == "-":
            neg = True
            t = self.next()
        if not t.isdigit():
            raise ParseError(f"bad exponent token {t!r}")
        return -int(t) if neg else int(t)

    def atom(self) -> QScalar:
        t = self.next()
        if t == "(":
            v = self.expr()
            if self.next() != ")":
                raise ParseError("unbalanced parentheses")
            return v
        if t == "q":
            return QScalar.q()
        if t == "s":
            return QScalar.s_power(1)
        if t.isdigit():
            v = Fraction(int(t))
            if self.peek() == "/":
                save = self.pos
                self.next()
                d = self.peek()
                if d is not None and d.isdigit():
                    self.next()
                    return QScalar.constant(v / int(d))
                self.pos = save
            return QScalar.constant(v)
        raise ParseError(f"unexpected token {t!r} in scalar expression")


class _HalfPower:
    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k


def parse_scalar(text: str) -> QScalar:
    """Parse expressions like "q - q^-1", "1/2", "q^(1/2)", "-(3/2)*q^2"."""
    return _ScalarParser(tokenize(text)).parse()


ZERO = QScalar.zero()
ONE = QScalar.one()
