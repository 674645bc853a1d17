"""Quantum planes and hyperplanes, even and odd.

Even coordinates obey x_i x_j = q x_j x_i for i < j; odd ones
anticommute up to 1/q and square to zero.  Both presentations are also
derivable from the R-matrix exchange form, and that equivalence, the
vanishing symplectic norm, and invariance under the quantum-matrix
coaction are verified here by reduction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DimensionMismatch
from .ncrewrite import (
    NCPoly,
    OpMatrix,
    RewriteSystem,
    combine,
    confluence_check,
    dedup_relations,
    orient,
    render_poly,
)
from .qmatrixalg import QuantumMatrixAlgebra
from .qscalar import QScalar
from .report import VerificationReport
from .rmatrix import RMatrixBundle, epsilon_q, projectors
from .tensorspace import TensorMatrix, inverse, permutation

EVEN = "even"
ODD = "odd"


@dataclass
class QuantumPlane:
    n: int
    parity: str
    names: list
    presentation: RewriteSystem
    s0: object = None

    def q(self) -> QScalar:
        q = QScalar.q()
        return q if self.s0 is None else QScalar.constant(q.specialize(self.s0))

    def gens(self):
        return [NCPoly.gen(nm) for nm in self.names]

    def reduce(self, p: NCPoly) -> NCPoly:
        return self.presentation.reduce(p)


def plane_names(n: int, parity: str):
    if parity == EVEN:
        return ["x", "y"] if n == 2 else [f"x{i}" for i in range(1, n + 1)]
    return ["xi", "eta"] if n == 2 else [f"xi{i}" for i in range(1, n + 1)]


def plane_presentation(n: int, parity: str = EVEN, s0=None) -> QuantumPlane:
    """Defining relations of the even or odd quantum hyperplane."""
    if parity not in (EVEN, ODD):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    names = plane_names(n, parity)
    q = QScalar.q()
    if s0 is not None:
        q = QScalar.constant(q.specialize(s0))
    gens = [NCPoly.gen(nm) for nm in names]
    rels = []
    for i in range(n):
        for j in range(i + 1, n):
            if parity == EVEN:
                rels.append(gens[i] * gens[j] - (gens[j] * gens[i]).scale(q))
            else:
                rels.append(gens[i] * gens[j]
                            + (gens[j] * gens[i]).scale(q.inverse()))
    if parity == ODD:
        rels.extend(g * g for g in gens)
    sys = orient(rels, names, name=f"{parity}-plane-{n}")
    confluence_check(sys)
    return QuantumPlane(n=n, parity=parity, names=names, presentation=sys, s0=s0)


def _pair_column(gens, order=(0, 1)) -> OpMatrix:
    """Column of quadratic words x_i x_j (or flipped) over multi-indices."""
    n = len(gens)
    rows = []
    for i, j in itertools.product(range(n), repeat=2):
        a, b = (i, j) if order == (0, 1) else (j, i)
        rows.append([gens[a] * gens[b]])
    return OpMatrix(rows)


def exchange_relations(plane: QuantumPlane, r: TensorMatrix, rhs_scale: QScalar):
    """Relations from R (X1 X2) = rhs_scale (X2 X1), deduplicated."""
    gens = plane.gens()
    col = _pair_column(gens)
    flipped = _pair_column(gens, order=(1, 0))
    lhs = OpMatrix.from_tensor(r) @ col
    rhs = flipped.scale(rhs_scale)
    diff = lhs - rhs
    return dedup_relations([e for e in diff.entries()],
                           word_key=plane.presentation.word_key)


def rform_equivalence(plane: QuantumPlane, bundle: RMatrixBundle) -> VerificationReport:
    """Exchange form, its mirror, and the projector form all carve out
    the ideal of the direct presentation."""
    rep = VerificationReport("rform")
    if bundle.n != plane.n:
        raise DimensionMismatch("bundle and plane dimensions differ")
    q = plane.q()
    sign_scale = q if plane.parity == EVEN else -q.inverse()
    rels = exchange_relations(plane, bundle.R, sign_scale)
    sys_r = orient(rels, plane.names, name="rform")
    ok = (all(plane.presentation.reduces_to_zero(r) for r in rels)
          and all(sys_r.reduces_to_zero(r) for r in plane.presentation.relations()))
    rep.add("exchange-form", "R-exchange relations match the presentation", ok)

    r21_inv = inverse(permutation(bundle.n) @ bundle.R @ permutation(bundle.n))
    mirror_scale = q.inverse() if plane.parity == EVEN else -q
    rels_m = exchange_relations(plane, r21_inv, mirror_scale)
    sys_m = orient(rels_m, plane.names, name="rform-mirror")
    ok = (all(plane.presentation.reduces_to_zero(r) for r in rels_m)
          and all(sys_m.reduces_to_zero(r) for r in plane.presentation.relations()))
    rep.add("mirror-form", "flipped-inverse exchange form gives the same ideal", ok)

    if bundle.hecke:
        pr = projectors(bundle)
        proj = pr.minus if plane.parity == EVEN else pr.plus
        col = _pair_column(plane.gens())
        resmat = OpMatrix.from_tensor(proj) @ col
        bad = None
        for e in resmat.entries():
            r_ = plane.reduce(e)
            if not r_.is_zero():
                bad = render_poly(r_)
                break
        law = ("antisymmetrized coordinate products vanish"
               if plane.parity == EVEN
               else "symmetrized odd products vanish")
        rep.add("projector-form", law, bad is None, witness=bad)
    return rep


def symplectic_norm_check(plane: QuantumPlane) -> VerificationReport:
    """The metric-contracted square of an even two-vector reduces to zero."""
    rep = VerificationReport("symplectic-norm")
    if plane.n != 2 or plane.parity != EVEN:
        raise DimensionMismatch("the symplectic norm lives on the even 2-plane")
    eps = epsilon_q()
    if plane.s0 is not None:
        eps = eps.specialize(plane.s0)
    gens = plane.gens()
    norm = NCPoly.zero()
    for i, j in itertools.product((1, 2), repeat=2):
        norm = norm + (gens[i - 1] * gens[j - 1]).scale(eps.get((i,), (j,)))
    res = plane.reduce(norm)
    rep.add("norm-vanishes", "eps_ij x_i x_j reduces to zero", res.is_zero(),
            witness=None if res.is_zero() else render_poly(res))

    # contrast: on the commutative plane the contraction does not vanish
    x, y = NCPoly.gen("x"), NCPoly.gen("y")
    comm = orient([x * y - y * x], ["x", "y"], name="commutative-plane")
    res2 = comm.reduce(norm)
    rep.add("norm-fails-commutative",
            "the same contraction is nonzero on the undeformed plane",
            not res2.is_zero(),
            witness=None if not res2.is_zero() else "contraction vanished")
    return rep


def coaction_invariance(plane: QuantumPlane,
                        alg: QuantumMatrixAlgebra) -> VerificationReport:
    """Exchange relations survive the substitution X -> T X in the
    combined algebra where matrix entries commute with coordinates."""
    rep = VerificationReport("plane-coaction")
    if alg.n != plane.n:
        raise DimensionMismatch("coaction dimension mismatch")
    big = combine([alg.presentation, plane.presentation],
                  name=f"coaction-{plane.parity}-{plane.n}")
    col = OpMatrix([[NCPoly.gen(nm)] for nm in plane.names])
    xprime = alg.T @ col
    gens = [xprime[i, 0] for i in range(plane.n)]
    q = plane.q()
    scale = q if plane.parity == EVEN else -q.inverse()
    r = OpMatrix.from_tensor(alg.bundle.R)
    n = plane.n
    lhs = r @ OpMatrix([[gens[i] * gens[j]]
                        for i, j in itertools.product(range(n), repeat=2)])
    rhs = OpMatrix([[gens[j] * gens[i]]
                    for i, j in itertools.product(range(n), repeat=2)]).scale(scale)
    diff = lhs - rhs
    bad = None
    for e in diff.entries():
        res = big.reduce(e)
        if not res.is_zero():
            bad = render_poly(res)
            break
    rep.add("transformed-relations",
            "exchange relations hold for the transformed coordinates",
            bad is None, witness=bad)

    # identity coaction: substituting scalar deltas is trivially invariant
    ident = OpMatrix.identity(plane.n) @ col
    gens_i = [ident[i, 0] for i in range(plane.n)]
    lhs_i = r @ OpMatrix([[gens_i[i] * gens_i[j]]
                          for i, j in itertools.product(range(n), repeat=2)])
    rhs_i = OpMatrix([[gens_i[j] * gens_i[i]]
                      for i, j in itertools.product(range(n), repeat=2)]).scale(scale)
    ok = all(plane.reduce(e).is_zero() for e in (lhs_i - rhs_i).entries())
    rep.add("identity-coaction", "the identity matrix acts trivially", ok)
    return rep


def basis_dimensions(plane: QuantumPlane, max_degree: int = 4):
    """Number of irreducible words per degree, for flatness checks."""
    return [len(plane.presentation.normal_words(d))
            for d in range(max_degree + 1)]


def expected_dimension(n: int, parity: str, degree: int) -> int:
    if parity == EVEN:
        return len(list(itertools.combinations_with_replacement(range(n), degree)))
    return len(list(itertools.combinations(range(n), degree)))
