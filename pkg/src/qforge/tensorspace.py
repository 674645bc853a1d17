"""Sparse matrices over the Laurent ring acting on tensor powers.

A TensorMatrix acts on the f-fold tensor power of an n-dimensional
space.  Entries are addressed by pairs of multi-indices in {1..n}^f and
only nonzero entries are stored; the R-matrices handled here are mostly
zero.  Linearization of multi-indices is row-major in factor order, so
for n = 2, f = 2 the rows are ordered 11, 12, 21, 22.
"""

from __future__ import annotations

import itertools

from .errors import (
    BadPositions,
    DimensionMismatch,
    NonLaurentInverse,
    ParseError,
)
from .qscalar import QScalar, parse_scalar


def _multi_indices(n: int, f: int):
    return itertools.product(range(1, n + 1), repeat=f)


class TensorMatrix:
    """Square sparse matrix on (C^n)^(tensor f) over QScalar."""

    __slots__ = ("n", "f", "entries")

    def __init__(self, n: int, f: int, entries=None):
        self.n = n
        self.f = f
        self.entries = {}
        if entries:
            for (r, c), v in entries.items():
                if not isinstance(v, QScalar):
                    v = QScalar.constant(v)
                if not v.is_zero():
                    self.entries[(tuple(r), tuple(c))] = v

    # -- constructors ------------------------------------------------

    @staticmethod
    def identity(n: int, f: int = 1) -> "TensorMatrix":
        m = TensorMatrix(n, f)
        one = QScalar.one()
        for idx in _multi_indices(n, f):
            m.entries[(idx, idx)] = one
        return m

    @staticmethod
    def zero(n: int, f: int = 1) -> "TensorMatrix":
        return TensorMatrix(n, f)

    # -- basic access ------------------------------------------------

    def get(self, r, c) -> QScalar:
        return self.entries.get((tuple(r), tuple(c)), QScalar.zero())

    def dim(self) -> int:
        return self.n ** self.f

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, TensorMatrix):
            return NotImplemented
        return (self.n, self.f) == (other.n, other.f) and self.entries == other.entries

    def __hash__(self):
        raise TypeError("TensorMatrix is not hashable")

    # -- ring operations ------------------------------------------------

    def _check_same_space(self, other):
        if (self.n, self.f) != (other.n, other.f):
            raise DimensionMismatch(
                f"spaces differ: n={self.n},f={self.f} vs n={other.n},f={other.f}"
            )

    def __add__(self, other):
        self._check_same_space(other)
        out = TensorMatrix(self.n, self.f)
        out.entries = dict(self.entries)
        for k, v in other.entries.items():
            s = out.entries.get(k, QScalar.zero()) + v
            if s.is_zero():
                out.entries.pop(k, None)
            else:
                out.entries[k] = s
        return out

    def __neg__(self):
        out = TensorMatrix(self.n, self.f)
        out.entries = {k: -v for k, v in self.entries.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TensorMatrix":
        if not isinstance(c, QScalar):
            c = QScalar.constant(c)
        if c.is_zero():
            return TensorMatrix(self.n, self.f)
        out = TensorMatrix(self.n, self.f)
        out.entries = {k: v * c for k, v in self.entries.items()}
        return out

    def __matmul__(self, other):
        self._check_same_space(other)
        by_row = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc = {}
        for (r, mid), v in self.entries.items():
            for c, w in by_row.get(mid, ()):
                key = (r, c)
                s = acc.get(key, QScalar.zero()) + v * w
                if s.is_zero():
                    acc.pop(key, None)
                else:
                    acc[key] = s
        out = TensorMatrix(self.n, self.f)
        out.entries = acc
        return out

    def map_entries(self, fn) -> "TensorMatrix":
        out = TensorMatrix(self.n, self.f)
        for k, v in self.entries.items():
            w = fn(v)
            if not w.is_zero():
                out.entries[k] = w
        return out

    def subs_inverse_param(self) -> "TensorMatrix":
        """Apply q -> q^(-1) to every entry."""
        return self.map_entries(lambda v: v.subs_inverse_param())

    def specialize(self, s0) -> "TensorMatrix":
        """Evaluate every entry at a rational value of s."""
        return self.map_entries(lambda v: QScalar.constant(v.specialize(s0)))

    # -- tensor-space structure -------------------------------------------

    def transpose(self) -> "TensorMatrix":
        out = TensorMatrix(self.n, self.f)
        out.entries = {(c, r): v for (r, c), v in self.entries.items()}
        return out

    def partial_transpose(self, space: int) -> "TensorMatrix":
        """Transpose in one factor only (f = 2): swaps that index pair."""
        if self.f != 2:
            raise DimensionMismatch("partial transpose needs exactly two factors")
        if space not in (1, 2):
            raise BadPositions("space must be 1 or 2")
        out = TensorMatrix(self.n, 2)
        p = space - 1
        for ((i, j), (k, l)), v in self.entries.items():
            if p == 0:
                key = ((k, j), (i, l))
            else:
                key = ((i, l), (k, j))
            out.entries[key] = v
        return out

    def partial_trace(self, space: int) -> "TensorMatrix":
        """Trace out one factor of an f = 2 matrix."""
        if self.f != 2:
            raise DimensionMismatch("partial trace needs exactly two factors")
        if space not in (1, 2):
            raise BadPositions("space must be 1 or 2")
        out = TensorMatrix(self.n, 1)
        for ((i, j), (k, l)), v in self.entries.items():
            if space == 1 and i == k:
                key = ((j,), (l,))
            elif space == 2 and j == l:
                key = ((i,), (k,))
            else:
                continue
            s = out.entries.get(key, QScalar.zero()) + v
            if s.is_zero():
                out.entries.pop(key, None)
            else:
                out.entries[key] = s
        return out

    def trace(self) -> QScalar:
        t = QScalar.zero()
        for (r, c), v in self.entries.items():
            if r == c:
                t = t + v
        return t


def tensor_product(a: TensorMatrix, b: TensorMatrix) -> TensorMatrix:
    """Kronecker product; the first factor's indices come first."""
    if a.n != b.n:
        raise DimensionMismatch(f"space dimensions differ: {a.n} vs {b.n}")
    out = TensorMatrix(a.n, a.f + b.f)
    for (ra, ca), va in a.entries.items():
        for (rb, cb), vb in b.entries.items():
            out.entries[(ra + rb, ca + cb)] = va * vb
    return out


def permutation(n: int) -> TensorMatrix:
    """Flip of the two tensor factors: entry (ij, kl) = [i = l][j = k]."""
    m = TensorMatrix(n, 2)
    one = QScalar.one()
    for i, j in _multi_indices(n, 2):
        m.entries[((i, j), (j, i))] = one
    return m


def embed(a: TensorMatrix, positions, total: int) -> TensorMatrix:
    """Let a act on the named factors of an f = total space, identity elsewhere."""
    positions = list(positions)
    if len(positions) != a.f:
        raise BadPositions(f"need {a.f} positions, got {len(positions)}")
    if positions != sorted(set(positions)) or not positions:
        raise BadPositions("positions must be strictly increasing")
    if positions[0] < 1 or positions[-1] > total:
        raise BadPositions(f"positions out of range 1..{total}")
    rest = [p for p in range(1, total + 1) if p not in positions]
    out = TensorMatrix(a.n, total)
    for (r, c), v in a.entries.items():
        for passive in _multi_indices(a.n, len(rest)):
            row = [0] * total
            col = [0] * total
            for p, ri, ci in zip(positions, r, c):
                row[p - 1] = ri
                col[p - 1] = ci
            for p, vi in zip(rest, passive):
                row[p - 1] = vi
                col[p - 1] = vi
            out.entries[(tuple(row), tuple(col))] = v
    return out


# -- exact linear algebra ----------------------------------------------------


def _dense(m: TensorMatrix):
    idx = list(_multi_indices(m.n, m.f))
    pos = {ix: i for i, ix in enumerate(idx)}
    d = m.dim()
    rows = [[QScalar.zero()] * d for _ in range(d)]
    for (r, c), v in m.entries.items():
        rows[pos[r]][pos[c]] = v
    return rows, idx


def _from_dense(rows, idx, n, f) -> TensorMatrix:
    out = TensorMatrix(n, f)
    for i, r in enumerate(idx):
        for j, c in enumerate(idx):
            v = rows[i][j]
            if not v.is_zero():
                out.entries[(r, c)] = v
    return out


def determinant(m: TensorMatrix) -> QScalar:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a, _ = _dense(m)
    d = len(a)
    sign = 1
    prev = QScalar.one()
    for k in range(d - 1):
        if a[k][k].is_zero():
            for r in range(k + 1, d):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return QScalar.zero()
        for i in range(k + 1, d):
            for j in range(k + 1, d):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num.divexact(prev)
            a[i][k] = QScalar.zero()
        prev = a[k][k]
    det = a[d - 1][d - 1]
    return -det if sign < 0 else det


def inverse(m: TensorMatrix) -> TensorMatrix:
    """Exact inverse over the Laurent ring.

    Requires the inverse to exist inside the ring: either the
    determinant is a unit monomial or the adjugate entries divide
    exactly.  Otherwise NonLaurentInverse reports the offending entry.
    """
    a, idx = _dense(m)
    d = len(a)
    aug = [row + [QScalar.one() if i == j else QScalar.zero() for j in range(d)]
           for i, row in enumerate(a)]
    # fraction-free Gauss-Jordan: ends with det * I on the left
    prev = QScalar.one()
    for k in range(d):
        if aug[k][k].is_zero():
            for r in range(k + 1, d):
                if not aug[r][k].is_zero():
                    aug[k], aug[r] = aug[r], aug[k]
                    break
            else:
                raise NonLaurentInverse("matrix is singular")
        pivot = aug[k][k]
        for i in range(d):
            if i == k:
                continue
            factor = aug[i][k]
            for j in range(2 * d):
                num = aug[i][j] * pivot - factor * aug[k][j]
                aug[i][j] = num.divexact(prev)
        prev = pivot
    det = aug[d - 1][d - 1]
    out = TensorMatrix(m.n, m.f)
    for i in range(d):
        scale_row = aug[i][i]
        for j in range(d):
            v = aug[i][d + j]
            if v.is_zero():
                continue
            # row i of the right block is scale_row * inverse
            try:
                w = v.divexact(scale_row)
            except Exception:
                raise NonLaurentInverse(
                    f"entry ({idx[i]},{idx[j]}) of the inverse is "
                    f"({v})/({scale_row}), outside the Laurent ring"
                ) from None
            out.entries[(idx[i], idx[j])] = w
    del det
    return out


# -- exchange format ---------------------------------------------------------


def to_exchange(m: TensorMatrix) -> str:
    """Serialize in the exchange format used by the CLI."""
    lines = [f"n={m.n} f={m.f}"]
    for (r, c) in sorted(m.entries):
        v = m.entries[(r, c)]
        lines.append(
            " ".join(str(i) for i in r)
            + " , "
            + " ".join(str(i) for i in c)
            + " : "
            + str(v)
        )
    return "\n".join(lines) + "\n"


def from_exchange(text: str) -> TensorMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty exchange input")
    header = lines[0].replace("=", " = ").split()
    try:
        n = int(header[header.index("n") + 2])
        f = int(header[header.index("f") + 2])
    except (ValueError, IndexError):
        raise ParseError(f"bad exchange header {lines[0]!r}") from None
    m = TensorMatrix(n, f)
    for ln in lines[1:]:
        if ":" not in ln or "," not in ln:
            raise ParseError(f"bad exchange entry {ln!r}")
        lhs, val = ln.split(":", 1)
        rpart, cpart = lhs.split(",", 1)
        try:
            r = tuple(int(t) for t in rpart.split())
            c = tuple(int(t) for t in cpart.split())
        except ValueError:
            raise ParseError(f"bad indices in {ln!r}") from None
        if len(r) != f or len(c) != f:
            raise ParseError(f"index arity mismatch in {ln!r}")
        if any(not 1 <= i <= n for i in r + c):
            raise ParseError(f"index out of range in {ln!r}")
        v = parse_scalar(val)
        if not v.is_zero():
            m.entries[(r, c)] = v
    return m
