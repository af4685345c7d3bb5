"""Symmetries of the system: simultaneous conjugation by S (x) S with independent
scalings of Q and R, and the flip M -> P M P.  Also invariant fingerprints and
the exact search restricted to diagonal/antidiagonal S."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import QQ, FpElement, FunctionField, PrimeField, RationalFunction
from .matrix import Matrix, SingularMatrixError, determinant, inverse, kron, permutation_P
from .solver import linear_operator_for_Q, null_space
from .system import YBPair


@dataclass(frozen=True)
class SymmetryElement:
    S: Matrix
    lam: object = 1
    kappa: object = 1
    flip: bool = False

    def __post_init__(self):
        if self.S.shape != (2, 2):
            raise ValueError("S must be 2x2")
        if not determinant(self.S):
            raise SingularMatrixError("S is singular")
        if not self.lam or not self.kappa:
            raise ValueError("lambda and kappa must be nonzero")

    @classmethod
    def identity(cls, field=QQ) -> "SymmetryElement":
        return cls(Matrix.identity(2, field), field.one, field.one, False)


def conjugate(M: Matrix, S: Matrix) -> Matrix:
    SS = kron(S, S)
    Si = inverse(S)
    return SS @ M @ kron(Si, Si)


def apply_symmetry(pair: YBPair, g: SymmetryElement) -> YBPair:
    """Q' = lam (S(x)S) Q (S(x)S)^-1, R' = kappa (S(x)S) R (S(x)S)^-1, then P-conjugate if flip."""
    if pair.d != 2:
        raise ValueError("symmetries are implemented for d = 2")
    field = pair.field
    S = g.S if g.S.field == field else g.S.to_field(field)
    Q = conjugate(pair.Q, S).scale(g.lam)
    R = conjugate(pair.R, S).scale(g.kappa)
    if g.flip:
        P = permutation_P(2, field)
        Q, R = P @ Q @ P, P @ R @ P
    return YBPair(R, Q, 2)


def compose(g1: SymmetryElement, g2: SymmetryElement) -> SymmetryElement:
    """Element acting as g1 followed by g2 (both without flip)."""
    if g1.flip or g2.flip:
        raise ValueError("composition is implemented for flip-free elements")
    return SymmetryElement(g2.S @ g1.S, g1.lam * g2.lam, g1.kappa * g2.kappa, False)


def fingerprint(pair: YBPair) -> list:
    """Scale- and conjugation-invariant scalars; unequal values prove non-equivalence."""
    R, Q = pair.R, pair.Q
    Ri, Qi = inverse(R), inverse(Q)
    dim = null_space(linear_operator_for_Q(R, pair.d)).dimension
    return [
        R.trace() * Ri.trace(),
        Q.trace() * Qi.trace(),
        (R @ Q).trace() * (Qi @ Ri).trace(),
        (R @ Qi).trace() * (Q @ Ri).trace(),
        pair.field(dim),
    ]


# ---------------------------------------------------------------------------
# restricted (anti)diagonal search

@dataclass(frozen=True)
class RestrictedSearch:
    """Outcome of the (anti)diagonal search.

    ``witness`` is an element over the pairs' field when one exists there.
    ``complex_solvable`` is False only when the matching equations have no
    solution even with s, lam, kappa complex (rational input only).
    """

    witness: SymmetryElement | None
    complex_solvable: bool | None
    cases_tried: int


def _s_family(kind: str, s, field) -> Matrix:
    z, one = field.zero, field.one
    if kind == "diag":
        return Matrix.from_rows([[one, z], [z, s]], field)
    return Matrix.from_rows([[z, one], [s, z]], field)


def _monomial(x: RationalFunction):
    """(coefficient, exponent) for c*s^k, the only shape conjugation by a monomial S produces."""
    if not x:
        return Fraction(0), 0
    num, den = x.num, x.den
    if len(num.terms) != 1 or len(den.terms) != 1:
        raise ValueError("entry is not a Laurent monomial in s")
    (en, cn), = num.terms.items()
    (ed, cd), = den.terms.items()
    return Fraction(cn) / Fraction(cd), en[0] - ed[0]


def _iroot(n: int, k: int):
    """Integer k-th root of n >= 0, or None."""
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** k == n else None


def rational_roots(q: Fraction, k: int) -> list[Fraction]:
    """All rational s with s^k = q, for k >= 1."""
    if q < 0 and k % 2 == 0:
        return []
    a, b = _iroot(abs(q.numerator), k), _iroot(q.denominator, k)
    if a is None or b is None:
        return []
    r = Fraction(a, b)
    if q < 0:
        return [-r]
    return [r, -r] if k % 2 == 0 else [r]


def _matching_equations(A: Matrix, B: Matrix, kind: str, flip: bool):
    """Equations mu * c * s^k = b for entries of conj(A) against B; None if a zero pattern clashes."""
    Fs = FunctionField(("s",))
    s = Fs.var("s")
    C = conjugate(A.to_field(Fs), _s_family(kind, s, Fs))
    if flip:
        P = permutation_P(2, Fs)
        C = P @ C @ P
    eqs = []
    for x, b in zip(C.entries(), B.entries()):
        c, k = _monomial(x)
        b = Fraction(b)
        if c == 0 and b == 0:
            continue
        if c == 0 or b == 0:
            return None
        eqs.append((k, b / c))
    return eqs


def _solve_s_constraints(cons):
    """cons: list of (m, q) meaning s^m = q.  Returns (g, q_g) with the system
    equivalent to s^g = q_g, (0, 1) if unconstrained, or None if inconsistent."""
    norm = []
    for m, q in cons:
        if m == 0:
            if q != 1:
                return None
            continue
        if m < 0:
            m, q = -m, 1 / q
        norm.append((m, q))
    if not norm:
        return 0, Fraction(1)
    g, qg = norm[0]
    for m, q in norm[1:]:
        # extended gcd: a*g + b*m = h
        h, a, b = _egcd(g, m)
        qg = _qpow(qg, a) * _qpow(q, b)
        g = h
    for m, q in norm:
        if _qpow(qg, m // g) != q:
            return None
    return g, qg


def _egcd(a, b):
    if b == 0:
        return a, 1, 0
    h, x, y = _egcd(b, a % b)
    return h, y, x - (a // b) * y


def _qpow(q: Fraction, e: int) -> Fraction:
    return q ** e if e >= 0 else (1 / q) ** (-e)


def _scalar_cons(eqs):
    """From mu*s^k = r equations: s-constraints and a function giving mu from s."""
    if not eqs:
        return [], (lambda s: Fraction(1))
    k0, r0 = eqs[0]
    cons = [(k - k0, r / r0) for k, r in eqs[1:]]
    return cons, (lambda s: r0 / _qpow(s, k0))


def _search_rational(pairA: YBPair, pairB: YBPair):
    complex_ok = False
    tried = 0
    for kind in ("diag", "antidiag"):
        for flip in (False, True):
            tried += 1
            eq_r = _matching_equations(pairA.R, pairB.R, kind, flip)
            eq_q = _matching_equations(pairA.Q, pairB.Q, kind, flip)
            if eq_r is None or eq_q is None:
                continue
            cons_r, kappa_of = _scalar_cons(eq_r)
            cons_q, lam_of = _scalar_cons(eq_q)
            sol = _solve_s_constraints(cons_r + cons_q)
            if sol is None:
                continue
            complex_ok = True
            g, qg = sol
            candidates = [Fraction(1)] if g == 0 else rational_roots(qg, g)
            for s in candidates:
                if s == 0:
                    continue
                elem = SymmetryElement(_s_family(kind, s, QQ), lam_of(s), kappa_of(s), flip)
                out = apply_symmetry(pairA, elem)
                if out.R == pairB.R and out.Q == pairB.Q:
                    return RestrictedSearch(elem, True, tried)
    return RestrictedSearch(None, complex_ok, tried)


def _search_prime(pairA: YBPair, pairB: YBPair):
    F = pairA.field
    tried = 0
    for kind in ("diag", "antidiag"):
        for flip in (False, True):
            for s in range(1, F.p):
                tried += 1
                S = _s_family(kind, FpElement(s, F.p), F)
                base = apply_symmetry(pairA, SymmetryElement(S, F.one, F.one, flip))
                lam = _scale_between(base.Q, pairB.Q)
                kappa = _scale_between(base.R, pairB.R)
                if lam is None or kappa is None:
                    continue
                return RestrictedSearch(SymmetryElement(S, lam, kappa, flip), None, tried)
    return RestrictedSearch(None, None, tried)


def _scale_between(A: Matrix, B: Matrix):
    """Nonzero mu with mu*A == B, or None."""
    first = A.first_nonzero()
    if first is None:
        return A.field.one if B.is_zero() else None
    i, j, a = first
    mu = B[i, j] / a
    if not mu or A.scale(mu) != B:
        return None
    return mu


def restricted_search(pairA: YBPair, pairB: YBPair) -> RestrictedSearch:
    if pairA.field != pairB.field:
        raise ValueError("pairs over different fields")
    if isinstance(pairA.field, PrimeField):
        return _search_prime(pairA, pairB)
    if pairA.field != QQ:
        raise ValueError("restricted search needs numeric pairs (Q or F_p)")
    return _search_rational(pairA, pairB)


def restricted_equivalence(pairA: YBPair, pairB: YBPair) -> SymmetryElement | None:
    """Witness g with S diagonal or antidiagonal and apply_symmetry(pairA, g) == pairB.

    Decides exactly over the pairs' field; None means no such witness exists
    there.  See :func:`restricted_search` for the over-C verdict.
    """
    return restricted_search(pairA, pairB).witness
