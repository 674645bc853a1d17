"""R-matrix constructors and their structural identity checks.

Builds the standard GL-type R-matrix family and mechanically verifies
the braid/Yang-Baxter equation, the Hecke condition, the spectral
projector identities and the symplectic-metric factorization of the
antisymmetrizer.  All checks are exact symbolic comparisons; rational
specializations are offered separately as fast spot checks.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotHecke
from .qscalar import QScalar
from .report import VerificationReport
from .tensorspace import TensorMatrix, embed, inverse, permutation


@dataclass
class RMatrixBundle:
    """An R-matrix together with its braid form and Hecke status.

    s0 records the rational specialization point when the bundle was
    built at a numeric parameter value; None means symbolic.  Scalar
    formulas involving the deformation parameter go through param() so
    that specialized bundles stay internally consistent.
    """

    R: TensorMatrix
    Rhat: TensorMatrix
    n: int
    hecke: bool
    s0: object = None

    def param(self, x: QScalar) -> QScalar:
        if self.s0 is None:
            return x
        return QScalar.constant(x.specialize(self.s0))

    def q_value(self) -> QScalar:
        return self.param(QScalar.q())

    def projectors(self) -> "Projectors":
        return projectors(self)


@dataclass
class Projectors:
    """Cleared q-(anti)symmetrizer pair.

    The true projectors have entries with denominator [2] = q + q^(-1),
    which is not a Laurent monomial, so we store the cleared numerators
    plus = [2]*P_plus and minus = [2]*P_minus together with the
    denominator.  Every projector identity is verified in this cleared
    form.
    """

    plus: TensorMatrix
    minus: TensorMatrix
    denom: QScalar


def _hecke_residual(rhat: TensorMatrix, s0=None) -> TensorMatrix:
    lam = QScalar.lam()
    if s0 is not None:
        lam = QScalar.constant(lam.specialize(s0))
    i4 = TensorMatrix.identity(rhat.n, 2)
    return rhat @ rhat - rhat.scale(lam) - i4


def r_gl(n: int, s0=None) -> RMatrixBundle:
    """R-matrix of the deformed general linear group on n letters.

    Entry (ij, kl) is [i=k][j=l](1 + [i=j](q-1)) plus lambda [i=l][j=k]
    for i > j.  With s0 given, all entries are specialized at that
    rational value of s.
    """
    q = QScalar.q()
    lam = QScalar.lam()
    one = QScalar.one()
    m = TensorMatrix(n, 2)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            m.entries[((i, j), (i, j))] = q if i == j else one
            if i > j:
                m.entries[((i, j), (j, i))] = lam
    if s0 is not None:
        m = m.specialize(s0)
    return bundle_from_r(m, s0=s0)


def bundle_from_r(r: TensorMatrix, s0=None) -> RMatrixBundle:
    rhat = permutation(r.n) @ r
    hecke = _hecke_residual(rhat, s0=s0).is_zero()
    return RMatrixBundle(R=r, Rhat=rhat, n=r.n, hecke=hecke, s0=s0)


def epsilon_q() -> TensorMatrix:
    """Deformed symplectic metric on two letters; squares to -I."""
    return TensorMatrix(2, 1, {
        ((1,), (2,)): QScalar.s_power(-1),
        ((2,), (1,)): QScalar.s_power(1, -1),
    })


def projectors(bundle: RMatrixBundle) -> Projectors:
    """Split a Hecke braid matrix into its cleared spectral projectors.

    plus = Rhat + q^(-1) I and minus = q I - Rhat are [2] times the
    rank-3 symmetrizer and rank-1 antisymmetrizer respectively.
    """
    if not bundle.hecke:
        raise NotHecke("projector split requires the Hecke condition")
    i4 = TensorMatrix.identity(bundle.n, 2)
    plus = bundle.Rhat + i4.scale(bundle.param(QScalar.q_power(-1)))
    minus = i4.scale(bundle.q_value()) - bundle.Rhat
    return Projectors(plus=plus, minus=minus,
                      denom=bundle.param(QScalar.q_bracket(2)))


def _witness_entry(m: TensorMatrix) -> str | None:
    if m.is_zero():
        return None
    (r, c) = sorted(m.entries)[0]
    return f"entry ({' '.join(map(str, r))} , {' '.join(map(str, c))}) = {m.entries[(r, c)]}"


def check_ybe(r: TensorMatrix) -> VerificationReport:
    """Compare both triple products of the braid consistency equation."""
    rep = VerificationReport("ybe")
    r12 = embed(r, [1, 2], 3)
    r13 = embed(r, [1, 3], 3)
    r23 = embed(r, [2, 3], 3)
    diff = r12 @ r13 @ r23 - r23 @ r13 @ r12
    rep.add("yang-baxter", "R12 R13 R23 = R23 R13 R12", diff.is_zero(),
            witness=_witness_entry(diff))
    return rep


def check_hecke(rhat: TensorMatrix, s0=None) -> VerificationReport:
    rep = VerificationReport("hecke")
    res = _hecke_residual(rhat, s0=s0)
    rep.add("hecke", "(Rhat - q)(Rhat + q^-1) = 0", res.is_zero(),
            witness=_witness_entry(res))
    return rep


def check_projector_identities(bundle: RMatrixBundle) -> VerificationReport:
    """All spectral identities of the projector pair, in cleared form."""
    rep = VerificationReport("projectors")
    pr = projectors(bundle)
    np_, nm = pr.plus, pr.minus
    rhat = bundle.Rhat
    two = pr.denom
    i4 = TensorMatrix.identity(bundle.n, 2)
    q = bundle.q_value()
    qi = q.inverse()

    checks = [
        ("idempotent-plus", "P+^2 = P+", np_ @ np_ - np_.scale(two)),
        ("idempotent-minus", "P-^2 = P-", nm @ nm - nm.scale(two)),
        ("orthogonal", "P+ P- = 0 = P- P+", (np_ @ nm) + (nm @ np_)),
        ("complete", "P+ + P- = I", np_ + nm - i4.scale(two)),
        ("spectral", "Rhat = q P+ - q^-1 P-",
         rhat.scale(two) - np_.scale(q) + nm.scale(qi)),
        ("spectral-inverse", "Rhat^-1 = q^-1 P+ - q P-",
         inverse(rhat).scale(two) - np_.scale(qi) + nm.scale(q)),
        ("commute", "[Rhat, P+-] = 0",
         (rhat @ np_ - np_ @ rhat) + (rhat @ nm - nm @ rhat)),
        ("cross-vanish", "P+- Rhat P-+ = 0", (np_ @ rhat @ nm) + (nm @ rhat @ np_)),
    ]
    for cid, law, residual in checks:
        rep.add(cid, law, residual.is_zero(), witness=_witness_entry(residual))
    return rep


def check_epsilon_factorization(bundle: RMatrixBundle) -> VerificationReport:
    """Antisymmetrizer as outer square of the symplectic metric (n = 2)."""
    rep = VerificationReport("epsilon")
    eps = epsilon_q()
    sq = eps @ eps + TensorMatrix.identity(2)
    rep.add("metric-squares-to-minus-identity", "eps^2 = -I", sq.is_zero(),
            witness=_witness_entry(sq))
    nm = projectors(bundle).minus
    outer = TensorMatrix(2, 2)
    for ((i,), (j,)), v in eps.entries.items():
        for ((k,), (l,)), w in eps.entries.items():
            outer.entries[((i, j), (k, l))] = v * w
    diff = nm - outer
    rep.add("antisymmetrizer-factorizes", "[2] P- = outer(eps, eps)",
            diff.is_zero(), witness=_witness_entry(diff))
    return rep


def check_inverse_symmetry(n: int) -> VerificationReport:
    """Parameter inversion vs exact inverses for the GL family."""
    rep = VerificationReport("inverse-symmetry")
    bundle = r_gl(n)
    p = permutation(n)
    r_qinv = bundle.R.subs_inverse_param()
    diff1 = r_qinv - inverse(bundle.R)
    rep.add("r-parameter-inversion", "R(q^-1) = R(q)^-1", diff1.is_zero(),
            witness=_witness_entry(diff1))
    rhat21_qinv = (p @ bundle.Rhat @ p).subs_inverse_param()
    diff2 = inverse(bundle.Rhat) - rhat21_qinv
    rep.add("rhat-flip-inversion", "Rhat12(q)^-1 = Rhat21(q^-1)", diff2.is_zero(),
            witness=_witness_entry(diff2))
    return rep
