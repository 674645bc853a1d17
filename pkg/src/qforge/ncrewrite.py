"""Free associative algebra over the Laurent ring with oriented rewriting.

Elements are finite linear combinations of words in named noncommuting
generators.  A presentation is a list of oriented quadratic (possibly
inhomogeneous) rules over a fixed generator order; reduction rewrites
the leftmost redex first, trying rules in their listed order, so every
normal form is reproducible byte for byte.  Termination is guaranteed
because each rule's right-hand side is strictly smaller than its lead
in the degree-lexicographic order, which is compatible with
concatenation.

Confluence is analyzed at degree 3 only: every overlap of two rule
leads is reduced both ways and the residuals are reported as witness
relations.  One bounded completion round (orienting the residuals and
adding them as rules) is available for the larger combined systems;
full Knuth-Bendix completion is deliberately out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    MissingConjugate,
    NameClash,
    NonOrientable,
    ParseError,
    ShapeMismatch,
    UnknownGenerator,
)
from .qscalar import QScalar, scalar_gcd, tokenize
from .tensorspace import TensorMatrix, _multi_indices


@dataclass(frozen=True)
class Generator:
    """A named noncommuting symbol with an optional conjugate partner."""

    name: str
    sort: str = "generic"
    conjugate: str | None = None


class NCPoly:
    """Linear combination of words; words are tuples of generator names."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for w, c in terms.items():
                if not isinstance(c, QScalar):
                    c = QScalar.constant(c)
                if not c.is_zero():
                    t[tuple(w)] = c
        self.terms = t

    # -- constructors ------------------------------------------------

    @staticmethod
    def zero() -> "NCPoly":
        return NCPoly()

    @staticmethod
    def one() -> "NCPoly":
        return NCPoly({(): QScalar.one()})

    @staticmethod
    def gen(name: str) -> "NCPoly":
        return NCPoly({(name,): QScalar.one()})

    @staticmethod
    def word(*names: str) -> "NCPoly":
        return NCPoly({tuple(names): QScalar.one()})

    @staticmethod
    def scalar(c) -> "NCPoly":
        if not isinstance(c, QScalar):
            c = QScalar.constant(c)
        return NCPoly({(): c})

    @staticmethod
    def monomial(word, coeff) -> "NCPoly":
        return NCPoly({tuple(word): coeff})

    # -- structure ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def generators(self) -> set:
        out = set()
        for w in self.terms:
            out.update(w)
        return out

    def coefficient(self, word) -> QScalar:
        return self.terms.get(tuple(word), QScalar.zero())

    # -- arithmetic ------------------------------------------------

    def __add__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        t = dict(self.terms)
        for w, c in other.terms.items():
            s = t.get(w, QScalar.zero()) + c
            if s.is_zero():
                t.pop(w, None)
            else:
                t[w] = s
        r = NCPoly.__new__(NCPoly)
        r.terms = t
        return r

    __radd__ = __add__

    def __neg__(self):
        r = NCPoly.__new__(NCPoly)
        r.terms = {w: -c for w, c in self.terms.items()}
        return r

    def __sub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        t = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                s = t.get(w, QScalar.zero()) + c1 * c2
                if s.is_zero():
                    t.pop(w, None)
                else:
                    t[w] = s
        r = NCPoly.__new__(NCPoly)
        r.terms = t
        return r

    def __rmul__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are only defined for scalars")
        r = NCPoly.one()
        for _ in range(k):
            r = r * self
        return r

    def scale(self, c) -> "NCPoly":
        if not isinstance(c, QScalar):
            c = QScalar.constant(c)
        r = NCPoly.__new__(NCPoly)
        r.terms = {}
        if not c.is_zero():
            r.terms = {w: v * c for w, v in self.terms.items()}
        return r

    def __eq__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((w, c) for w, c in self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"NCPoly({render_poly(self)})"

    def __str__(self):
        return render_poly(self)

    def map_coefficients(self, fn) -> "NCPoly":
        return NCPoly({w: fn(c) for w, c in self.terms.items()})


def _coerce_poly(x):
    if isinstance(x, NCPoly):
        return x
    if isinstance(x, QScalar):
        return NCPoly.scalar(x)
    if isinstance(x, (int, Fraction)):
        return NCPoly.scalar(QScalar.constant(x))
    return NotImplemented


@dataclass(frozen=True)
class RewriteRule:
    lead: tuple
    rhs: NCPoly


class RewriteSystem:
    """Oriented rules over an ordered generator list, with reduction.

    The term order is degree-lexicographic over the listed generator
    order.  Rule leads are pairwise distinct and every right-hand-side
    word is strictly smaller than its lead, which makes reduction
    terminating; the reduction strategy (leftmost redex, rules in
    listed order) makes it deterministic.
    """

    def __init__(self, generators, rules, name: str = "",
                 check_invariants: bool = True):
        self.name = name
        self.generators = [g if isinstance(g, Generator) else Generator(g)
                           for g in generators]
        seen = set()
        for g in self.generators:
            if g.name in seen:
                raise NameClash(f"duplicate generator {g.name!r}")
            seen.add(g.name)
        self._index = {g.name: i for i, g in enumerate(self.generators)}
        self.rules = list(rules)
        self.confluent: bool | None = None
        self.witnesses: list = []
        self._by_first = {}
        for i, r in enumerate(self.rules):
            self._by_first.setdefault(r.lead[0], []).append((i, r))
        self._cache: dict = {}
        if check_invariants:
            self._validate()

    def _validate(self):
        leads = set()
        for r in self.rules:
            if not r.lead:
                raise NonOrientable("empty rule lead")
            if r.lead in leads:
                raise NonOrientable(f"duplicate rule lead {' '.join(r.lead)}")
            leads.add(r.lead)
            lk = self.word_key(r.lead)
            for w in r.rhs.terms:
                if self.word_key(w) >= lk:
                    raise NonOrientable(
                        f"rhs word {' '.join(w)} not smaller than lead "
                        f"{' '.join(r.lead)}"
                    )

    # -- order ------------------------------------------------

    def word_key(self, word):
        try:
            return (len(word), tuple(self._index[g] for g in word))
        except KeyError as e:
            raise UnknownGenerator(f"unknown generator {e.args[0]!r}") from None

    def leading_word(self, p: NCPoly):
        if p.is_zero():
            return None
        return max(p.terms, key=self.word_key)

    def sorted_terms(self, p: NCPoly):
        return sorted(p.terms.items(), key=lambda t: self.word_key(t[0]),
                      reverse=True)

    # -- reduction ------------------------------------------------

    def _find_redex(self, word):
        for pos in range(len(word)):
            cands = self._by_first.get(word[pos])
            if not cands:
                continue
            best = None
            for idx, rule in cands:
                L = len(rule.lead)
                if L == 1 or (pos + 1 < len(word) and word[pos + 1] == rule.lead[1]):
                    best = rule
                    break  # cands are in listed order
            if best is not None:
                return pos, best
        return None

    def _nf_word(self, word, cache, counter=None):
        hit = cache.get(word)
        if hit is not None:
            return hit
        pending = {word: QScalar.one()}
        result = {}
        while pending:
            w = next(iter(pending))
            c = pending.pop(w)
            hit = cache.get(w)
            if hit is not None:
                for hw, hc in hit.terms.items():
                    s = result.get(hw, QScalar.zero()) + c * hc
                    if s.is_zero():
                        result.pop(hw, None)
                    else:
                        result[hw] = s
                continue
            m = self._find_redex(w)
            if m is None:
                cache[w] = NCPoly({w: QScalar.one()})
                s = result.get(w, QScalar.zero()) + c
                if s.is_zero():
                    result.pop(w, None)
                else:
                    result[w] = s
                continue
            if counter is not None:
                counter[0] += 1
            pos, rule = m
            prefix, suffix = w[:pos], w[pos + len(rule.lead):]
            for tw, tc in rule.rhs.terms.items():
                nw = prefix + tw + suffix
                s = pending.get(nw, QScalar.zero()) + c * tc
                if s.is_zero():
                    pending.pop(nw, None)
                else:
                    pending[nw] = s
        nf = NCPoly(result)
        cache[word] = nf
        return nf

    def reduce(self, p: NCPoly) -> NCPoly:
        """Normal form of p; deterministic and linear over the scalars."""
        for w in p.terms:
            self.word_key(w)  # raises UnknownGenerator early
        out = NCPoly.zero()
        for w, c in p.terms.items():
            out = out + self._nf_word(w, self._cache).scale(c)
        return out

    def reduce_with_steps(self, p: NCPoly):
        """Like reduce but with a fresh cache, returning (nf, step count)."""
        counter = [0]
        cache: dict = {}
        out = NCPoly.zero()
        for w, c in p.terms.items():
            out = out + self._nf_word(w, cache, counter).scale(c)
        return out, counter[0]

    def reduces_to_zero(self, p: NCPoly) -> bool:
        return self.reduce(p).is_zero()

    # -- derived data ------------------------------------------------

    def relations(self):
        """The rules as relation polynomials lead - rhs."""
        return [NCPoly({r.lead: QScalar.one()}) - r.rhs for r in self.rules]

    def normal_words(self, degree: int):
        """All irreducible words of the given length, in index order."""
        names = [g.name for g in self.generators]
        out = []

        def extend(word):
            if len(word) == degree:
                out.append(word)
                return
            for nm in names:
                w = word + (nm,)
                ok = True
                for L in (1, 2):
                    if len(w) >= L and self._lead_matches(w[-L:]):
                        ok = False
                        break
                if ok:
                    extend(w)

        extend(())
        return out

    def _lead_matches(self, tail):
        cands = self._by_first.get(tail[0])
        if not cands:
            return False
        return any(r.lead == tail for _, r in cands)

    def conjugate(self, p: NCPoly) -> NCPoly:
        """Anti-involution: reverse words, swap conjugate generators."""
        cmap = {}
        for g in self.generators:
            if g.conjugate is None:
                raise MissingConjugate(f"generator {g.name!r} has no conjugate")
            cmap[g.name] = g.conjugate
        out = {}
        for w, c in p.terms.items():
            try:
                nw = tuple(cmap[x] for x in reversed(w))
            except KeyError as e:
                raise UnknownGenerator(str(e)) from None
            s = out.get(nw, QScalar.zero()) + c
            if s.is_zero():
                out.pop(nw, None)
            else:
                out[nw] = s
        return NCPoly(out)

    def render(self) -> str:
        return render_presentation(self)

    def __repr__(self):
        gens = " ".join(g.name for g in self.generators)
        return f"<RewriteSystem {self.name or '?'}: {gens}; {len(self.rules)} rules>"


def apply_antiinvolution(p: NCPoly, images: dict) -> NCPoly:
    """General anti-involution: reverse words, substitute generator images.

    images maps generator names to NCPoly values (for example -u for an
    anti-hermitian generator).  Scalars are fixed.
    """
    out = NCPoly.zero()
    for w, c in p.terms.items():
        prod = NCPoly.scalar(c)
        for x in reversed(w):
            img = images.get(x)
            if img is None:
                raise MissingConjugate(f"no image for generator {x!r}")
            prod = prod * img
        out = out + prod
    return out


# -- orientation -------------------------------------------------------------


def canonicalize_relation(p: NCPoly) -> NCPoly:
    """Divide out scalar content and the lead coefficient's top monomial.

    After this, relations that agree up to a unit-monomial factor are
    identical, and a relation is orientable exactly when its lead
    coefficient becomes 1.  Dividing by the content is the generic-q
    reading of relations like (1 + q^2) w = 0, which force w = 0 for a
    real nonzero deformation parameter.
    """
    if p.is_zero():
        return p
    g = scalar_gcd(p.terms.values())
    if not g.is_one():
        p = p.map_coefficients(lambda c: c.divexact(g))
    lead = max(p.terms, key=lambda w: (len(w), w))
    e, c = p.terms[lead].leading()
    return p.scale(QScalar.s_power(-e, Fraction(1) / c))


def _canonical_with_order(p: NCPoly, word_key) -> NCPoly:
    if p.is_zero():
        return p
    g = scalar_gcd(p.terms.values())
    if not g.is_one():
        p = p.map_coefficients(lambda c: c.divexact(g))
    lead = max(p.terms, key=word_key)
    e, c = p.terms[lead].leading()
    return p.scale(QScalar.s_power(-e, Fraction(1) / c))


def dedup_relations(relations, word_key=None) -> list:
    key = word_key or (lambda w: (len(w), w))
    seen = set()
    out = []
    for rel in relations:
        cn = _canonical_with_order(rel, key)
        if cn.is_zero():
            continue
        sig = frozenset(cn.terms.items())
        if sig in seen:
            continue
        seen.add(sig)
        out.append(cn)
    return out


def eliminate_leads(relations, word_key) -> list:
    """Gaussian elimination on leading words.

    Relations sharing a deglex-maximal word are cross-combined until
    all leads are pairwise distinct; the surviving relations generate
    the same two-sided ideal.  Output is canonical and sorted by lead.
    """
    queue = dedup_relations(relations, word_key=word_key)
    by_lead: dict = {}
    while queue:
        rel = _canonical_with_order(queue.pop(0), word_key)
        if rel.is_zero():
            continue
        lead = max(rel.terms, key=word_key)
        old = by_lead.get(lead)
        if old is None:
            by_lead[lead] = rel
            continue
        diff = rel.scale(old.terms[lead]) - old.scale(rel.terms[lead])
        if not diff.is_zero():
            queue.append(diff)
    return [by_lead[lead] for lead in sorted(by_lead, key=word_key)]


def orient(relations, generators, name: str = "",
           interreduce_tails: bool = True) -> RewriteSystem:
    """Turn relations into rules, leads being the deglex-maximal words.

    Relations are canonicalized first (content and unit normalization),
    deduplicated, and lead-eliminated so rule leads are pairwise
    distinct.  A relation whose canonical lead coefficient is not 1
    cannot be oriented inside the Laurent ring and raises
    NonOrientable.  Rule tails are interreduced by default so the
    printed presentation is fully normalized; this never changes the
    generated ideal or the set of irreducible words.
    """
    probe = RewriteSystem(generators, [], name=name)
    key = probe.word_key
    rules = []
    for rel in eliminate_leads(relations, key):
        lead = max(rel.terms, key=key)
        lc = rel.terms[lead]
        if not lc.is_one():
            raise NonOrientable(
                f"relation {render_poly(rel)} has non-unit leading "
                f"coefficient {lc} at word {' '.join(lead)}"
            )
        rhs = NCPoly({lead: QScalar.one()}) - rel
        rules.append(RewriteRule(lead=lead, rhs=rhs))
    sys = RewriteSystem(generators, rules, name=name)
    if interreduce_tails:
        for _ in range(len(rules) + 1):
            new_rules = [RewriteRule(r.lead, sys.reduce(r.rhs)) for r in sys.rules]
            if all(a.rhs == b.rhs for a, b in zip(new_rules, sys.rules)):
                break
            sys = RewriteSystem(generators, new_rules, name=name)
    return sys


# -- confluence -------------------------------------------------------------


@dataclass
class ConfluenceReport:
    confluent: bool
    witnesses: list = field(default_factory=list)  # (word, residual NCPoly)

    def __bool__(self):
        return self.confluent


def confluence_check(sys: RewriteSystem, max_degree: int = 3) -> ConfluenceReport:
    """Resolve every overlap of two rule leads, one Knuth-Bendix step.

    For quadratic leads the ambiguities are words of length three (and
    inclusion ambiguities when a one-letter lead sits inside another
    lead).  Ambiguities are reduced both ways; nonzero residuals are
    returned as witness relations.  Nothing is iterated or added here.
    """
    residuals = {}
    for r1 in sys.rules:
        for r2 in sys.rules:
            l1, l2 = r1.lead, r2.lead
            # suffix of l1 = prefix of l2
            for s in range(1, min(len(l1), len(l2)) + 1):
                if s == len(l1) == len(l2):
                    continue  # identical leads are excluded by invariant
                if l1[-s:] != l2[:s]:
                    continue
                word = l1 + l2[s:]
                if len(word) > max_degree:
                    continue
                left = r1.rhs * NCPoly.monomial(l2[s:], QScalar.one())
                right = NCPoly.monomial(l1[:len(l1) - s], QScalar.one()) * r2.rhs
                res = sys.reduce(left) - sys.reduce(right)
                if not res.is_zero():
                    residuals.setdefault(word, res)
            # strict inclusion of l2 inside l1
            if len(l2) < len(l1):
                for p in range(len(l1) - len(l2) + 1):
                    if l1[p:p + len(l2)] != l2:
                        continue
                    via_r2 = (NCPoly.monomial(l1[:p], QScalar.one()) * r2.rhs
                              * NCPoly.monomial(l1[p + len(l2):], QScalar.one()))
                    res = sys.reduce(r1.rhs) - sys.reduce(via_r2)
                    if not res.is_zero():
                        residuals.setdefault(l1, res)
    witnesses = sorted(residuals.items(),
                       key=lambda kv: (sys.word_key(kv[0]), render_poly(kv[1])))
    rep = ConfluenceReport(confluent=not witnesses, witnesses=witnesses)
    sys.confluent = rep.confluent
    sys.witnesses = witnesses
    return rep


def complete_once(sys: RewriteSystem) -> RewriteSystem:
    """One bounded completion round: orient residuals and add them."""
    rep = confluence_check(sys)
    if rep.confluent:
        return sys
    extra = [res for _, res in rep.witnesses]
    new_sys = orient(sys.relations() + extra,
                     sys.generators, name=sys.name + "+")
    confluence_check(new_sys)
    return new_sys


# -- centrality -------------------------------------------------------------


def is_central(e: NCPoly, sys: RewriteSystem):
    """Check that e commutes with every generator after reduction.

    Returns (central, witness) where witness names the first generator
    whose commutator does not reduce to zero.
    """
    for g in sys.generators:
        gp = NCPoly.gen(g.name)
        res = sys.reduce(e * gp - gp * e)
        if not res.is_zero():
            return False, f"[e, {g.name}] = {render_poly(res)}"
    return True, None


# -- combination -------------------------------------------------------------


def combine(systems, cross_rules=None, name: str = "") -> RewriteSystem:
    """Union of presentations on disjoint generators.

    Without explicit cross rules the default is that generators of
    different subsystems commute, oriented by the combined order (later
    systems' generators rewrite past earlier ones).
    """
    gens = []
    seen = set()
    for s in systems:
        for g in s.generators:
            if g.name in seen:
                raise NameClash(f"generator {g.name!r} appears twice")
            seen.add(g.name)
            gens.append(g)
    rules = [r for s in systems for r in s.rules]
    if cross_rules is None:
        cross_rules = []
        for i, s2 in enumerate(systems):
            for s1 in systems[:i]:
                for h in s2.generators:
                    for g in s1.generators:
                        cross_rules.append(RewriteRule(
                            lead=(h.name, g.name),
                            rhs=NCPoly.word(g.name, h.name)))
    return RewriteSystem(gens, rules + list(cross_rules), name=name)


# -- operator matrices --------------------------------------------------------


class OpMatrix:
    """Dense matrix with NCPoly entries; shapes are explicit."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        self.rows = [[_as_poly(e) for e in row] for row in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ShapeMismatch("ragged operator matrix")

    @staticmethod
    def from_gens(names) -> "OpMatrix":
        return OpMatrix([[NCPoly.gen(nm) for nm in row] for row in names])

    @staticmethod
    def from_tensor(m: TensorMatrix) -> "OpMatrix":
        idx = list(_multi_indices(m.n, m.f))
        return OpMatrix([[NCPoly.scalar(m.get(r, c)) for c in idx] for r in idx])

    @staticmethod
    def identity(k: int) -> "OpMatrix":
        return OpMatrix([[NCPoly.one() if i == j else NCPoly.zero()
                          for j in range(k)] for i in range(k)])

    @staticmethod
    def zero(r: int, c: int) -> "OpMatrix":
        return OpMatrix([[NCPoly.zero() for _ in range(c)] for _ in range(r)])

    def __matmul__(self, other: "OpMatrix") -> "OpMatrix":
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"{self.nrows}x{self.ncols} @ "
                                f"{other.nrows}x{other.ncols}")
        out = [[NCPoly.zero() for _ in range(other.ncols)]
               for _ in range(self.nrows)]
        for i in range(self.nrows):
            for k in range(self.ncols):
                a = self.rows[i][k]
                if a.is_zero():
                    continue
                for j in range(other.ncols):
                    b = other.rows[k][j]
                    if b.is_zero():
                        continue
                    out[i][j] = out[i][j] + a * b
        return OpMatrix(out)

    def __add__(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ShapeMismatch("shape mismatch in sum")
        return OpMatrix([[self.rows[i][j] + other.rows[i][j]
                          for j in range(self.ncols)] for i in range(self.nrows)])

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return OpMatrix([[-e for e in row] for row in self.rows])

    def scale(self, c) -> "OpMatrix":
        return OpMatrix([[e.scale(c) for e in row] for row in self.rows])

    def transpose(self) -> "OpMatrix":
        return OpMatrix([[self.rows[i][j] for i in range(self.nrows)]
                         for j in range(self.ncols)])

    def entries(self):
        for row in self.rows:
            yield from row

    def map(self, fn) -> "OpMatrix":
        return OpMatrix([[fn(e) for e in row] for row in self.rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries())


def _as_poly(e):
    p = _coerce_poly(e)
    if p is NotImplemented:
        raise TypeError(f"cannot use {type(e).__name__} as an operator entry")
    return p


def kron(a: OpMatrix, b: OpMatrix) -> OpMatrix:
    """Kronecker product, row-major composite indices, a's entry first."""
    rows = []
    for i in range(a.nrows):
        for j in range(b.nrows):
            row = []
            for k in range(a.ncols):
                for l in range(b.ncols):
                    row.append(a.rows[i][k] * b.rows[j][l])
            rows.append(row)
    return OpMatrix(rows)


def op_space1(m: OpMatrix, n: int) -> OpMatrix:
    """m acting on the first tensor factor: m (x) I_n."""
    return kron(m, OpMatrix.identity(n))


def op_space2(m: OpMatrix, n: int) -> OpMatrix:
    """m acting on the second tensor factor: I_n (x) m."""
    return kron(OpMatrix.identity(n), m)


def relations_from_matrix_equation(lhs: OpMatrix, rhs: OpMatrix,
                                   generators=None) -> list:
    """Entrywise difference as a deduplicated list of relations.

    With a generator order given, relations are additionally
    lead-eliminated so the result is an independent generating set.
    """
    if (lhs.nrows, lhs.ncols) != (rhs.nrows, rhs.ncols):
        raise ShapeMismatch("matrix equation sides have different shapes")
    diff = lhs - rhs
    rels = dedup_relations(list(diff.entries()))
    if generators is not None:
        key = RewriteSystem(generators, []).word_key
        rels = eliminate_leads(rels, key)
    return rels


# -- rendering and parsing ----------------------------------------------------


def render_poly(p: NCPoly, word_key=None) -> str:
    if p.is_zero():
        return "0"
    key = word_key or (lambda w: (len(w), w))
    items = sorted(p.terms.items(), key=lambda t: key(t[0]), reverse=True)
    parts = []
    for w, c in items:
        _, lead_coeff = c.leading()
        if lead_coeff < 0:
            sign = "-"
            c = -c
        else:
            sign = "+"
        if not w:
            body = str(c) if c.is_monomial() else f"({c})"
        elif c.is_one():
            body = " ".join(w)
        elif c.is_monomial():
            body = f"{c} " + " ".join(w)
        else:
            body = f"({c}) " + " ".join(w)
        parts.append((sign, body))
    sign, body = parts[0]
    out = body if sign == "+" else "- " + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class _PolyParser:
    """Same grammar as the scalar parser plus generator identifiers."""

    def __init__(self, tokens, gens):
        self.toks = tokens
        self.pos = 0
        self.gens = set(gens)

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of expression")
        self.pos += 1
        return t

    def parse(self) -> NCPoly:
        v = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input at {self.peek()!r}")
        return v

    def expr(self) -> NCPoly:
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

    def term(self) -> NCPoly:
        v = self.factor()
        while True:
            t = self.peek()
            if t in ("*", "/"):
                op = self.next()
                rhs = self.factor()
                if op == "*":
                    v = v * rhs
                else:
                    v = _poly_div(v, rhs)
            elif t is not None and t not in ("+", "-", ")", "^"):
                v = v * self.factor()
            else:
                return v

    def factor(self) -> NCPoly:
        is_q = self.peek() == "q"
        v = self.atom()
        if self.peek() == "^":
            self.next()
            e = self.exponent()
            if isinstance(e, tuple):  # half power marker (k,)
                if not is_q:
                    raise ParseError("half-integer exponents apply to q only")
                return NCPoly.scalar(QScalar.s_power(e[0]))
            if e < 0:
                sc = _scalar_of(v)
                if sc is None:
                    raise ParseError("negative powers are only defined for scalars")
                return NCPoly.scalar(sc ** e)
            return v ** e
        return v

    def exponent(self):
        t = self.next()
        if t == "(":
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
                if self.next() != "2":
                    raise ParseError("only half-integer exponents are supported")
                if self.next() != ")":
                    raise ParseError("unclosed exponent")
                return (num,)
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

    def atom(self) -> NCPoly:
        t = self.next()
        if t == "(":
            v = self.expr()
            if self.next() != ")":
                raise ParseError("unbalanced parentheses")
            return v
        if t in self.gens:
            return NCPoly.gen(t)
        if t == "q":
            return NCPoly.scalar(QScalar.q())
        if t == "s":
            return NCPoly.scalar(QScalar.s_power(1))
        if t.isdigit():
            v = Fraction(int(t))
            if self.peek() == "/":
                save = self.pos
                self.next()
                d = self.peek()
                if d is not None and d.isdigit():
                    self.next()
                    return NCPoly.scalar(QScalar.constant(v / int(d)))
                self.pos = save
            return NCPoly.scalar(QScalar.constant(v))
        if t.isidentifier():
            raise UnknownGenerator(f"unknown generator {t!r}")
        raise ParseError(f"unexpected token {t!r}")


def _scalar_of(p: NCPoly):
    if p.is_zero():
        return QScalar.zero()
    if set(p.terms) == {()}:
        return p.terms[()]
    return None


def _poly_div(a: NCPoly, b: NCPoly) -> NCPoly:
    sb = _scalar_of(b)
    if sb is None:
        raise ParseError("division by a non-scalar")
    if sb.is_monomial():
        return a.scale(sb.inverse())
    return a.map_coefficients(lambda c: c.divexact(sb))


def parse_poly(text: str, generators) -> NCPoly:
    names = [g.name if isinstance(g, Generator) else g for g in generators]
    return _PolyParser(tokenize(text), names).parse()


def render_presentation(sys: RewriteSystem) -> str:
    lines = ["gens: " + " ".join(g.name for g in sys.generators),
             "order: deglex"]
    for r in sys.rules:
        lines.append(f"rule: {' '.join(r.lead)} -> "
                     f"{render_poly(r.rhs, word_key=sys.word_key)}")
    return "\n".join(lines) + "\n"


def parse_presentation(text: str, name: str = "") -> RewriteSystem:
    gens = None
    rules = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("gens:"):
            gens = line[len("gens:"):].split()
        elif line.startswith("order:"):
            if line[len("order:"):].strip() != "deglex":
                raise ParseError("only the deglex order is supported")
        elif line.startswith("rule:"):
            if gens is None:
                raise ParseError("rule before gens line")
            body = line[len("rule:"):]
            if "->" not in body:
                raise ParseError(f"rule without arrow: {line!r}")
            lhs, rhs = body.split("->", 1)
            lead = tuple(lhs.split())
            if not lead or any(g not in gens for g in lead):
                raise UnknownGenerator(f"bad rule lead in {line!r}")
            rhs_poly = (NCPoly.zero() if rhs.strip() == "0"
                        else parse_poly(rhs, gens))
            rules.append(RewriteRule(lead=lead, rhs=rhs_poly))
        else:
            raise ParseError(f"unrecognized presentation line {line!r}")
    if gens is None:
        raise ParseError("presentation has no gens line")
    return RewriteSystem(gens, rules, name=name)
