"""Solving for Q given R: linear equations, null space, cubic constraints, F_p enumeration."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arith import (QQ, FpElement, FunctionField, Polynomial, PrimeField,
                    RationalFunction, field_inverse, format_scalar, is_prime)
from .matrix import Matrix, determinant, embed, rref
from .system import system_residuals, triple_residual, ybe_residual

DEFAULT_BOUND = 10 ** 7
BOUND_ENV = "YBSYSTEM_ENUM_BOUND"


class EnumerationBoundError(ValueError):
    def __init__(self, required: int, bound: int):
        super().__init__(f"enumeration needs {required} points, bound is {bound}")
        self.required = required
        self.bound = bound


def default_bound() -> int:
    value = os.environ.get(BOUND_ENV)
    return int(value) if value else DEFAULT_BOUND


# ---------------------------------------------------------------------------
# linear part

@dataclass(frozen=True)
class LinearOperator:
    """Maps vec(Q) (row-major) to the stacked Q12R13R23 and R12R13Q23 residuals."""

    matrix: Matrix
    d: int

    def apply(self, Q: Matrix) -> list:
        vec = Matrix(self.matrix.cols, 1, Q.entries(), self.matrix.field)
        return list((self.matrix @ vec).entries())


def elementary(n: int, k: int, field) -> Matrix:
    e = [field.zero] * (n * n)
    e[k] = field.one
    return Matrix._raw(n, n, e, field)


def linear_operator_for_Q(R: Matrix, d: int = 2) -> LinearOperator:
    n = d * d
    if R.shape != (n, n):
        raise ValueError(f"R must be {n}x{n}, got {R.shape}")
    r12, r13, r23 = embed(R, (1, 2), d), embed(R, (1, 3), d), embed(R, (2, 3), d)
    r13r23, r23r13 = r13 @ r23, r23 @ r13
    r12r13, r13r12 = r12 @ r13, r13 @ r12
    cols = []
    for k in range(n * n):
        E = elementary(n, k, R.field)
        e12, e23 = embed(E, (1, 2), d), embed(E, (2, 3), d)
        col = (e12 @ r13r23 - r23r13 @ e12).entries() + (r12r13 @ e23 - e23 @ r13r12).entries()
        cols.append(col)
    m = len(cols[0])
    entries = [cols[j][i] for i in range(m) for j in range(n * n)]
    return LinearOperator(Matrix._raw(m, n * n, entries, R.field), d)


@dataclass(frozen=True)
class NullSpaceBasis:
    basis: tuple
    coords: tuple
    d: int = 2

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def combine(self, coeffs: Sequence) -> Matrix:
        if len(coeffs) != len(self.basis):
            raise ValueError("wrong number of coordinates")
        n = self.d * self.d
        field = self.basis[0].field
        out = Matrix.zeros(n, n, field)
        for c, B in zip(coeffs, self.basis):
            if c:
                out = out + B.scale(c)
        return out


def coordinate_names(k: int) -> tuple:
    return tuple(f"c{i + 1}" for i in range(k))


def _distinct_rows(A: Matrix) -> Matrix:
    """Drop zero rows and rows proportional to an earlier one; the kernel is unchanged."""
    symbolic = isinstance(A.field, FunctionField)
    seen, keep = set(), []
    for i in range(A.rows):
        row = A._e[i * A.cols:(i + 1) * A.cols]
        lead = next((x for x in row if x), None)
        if lead is None:
            continue
        inv = field_inverse(lead)
        key = tuple(format_scalar(x * inv) if symbolic else x * inv for x in row)
        if key not in seen:
            seen.add(key)
            keep.extend(row)
    if not keep:
        return Matrix.zeros(1, A.cols, A.field)
    return Matrix._raw(len(keep) // A.cols, A.cols, keep, A.field)


def null_space(L: LinearOperator) -> NullSpaceBasis:
    """Kernel basis from the reduced row echelon form, one vector per free column."""
    red, pivots = rref(_distinct_rows(L.matrix))
    ncols = L.matrix.cols
    free = [c for c in range(ncols) if c not in pivots]
    field = L.matrix.field
    n = L.d * L.d
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for r, pc in enumerate(pivots):
            x = red[r, f]
            if x:
                v[pc] = -x
        basis.append(Matrix._raw(n, n, v, field))
    return NullSpaceBasis(tuple(basis), coordinate_names(len(basis)), L.d)


def solve_linear(R: Matrix, d: int = 2) -> NullSpaceBasis:
    return null_space(linear_operator_for_Q(R, d))


# ---------------------------------------------------------------------------
# cubic constraints

@dataclass(frozen=True)
class PolynomialRing:
    """Polynomials in ``variables`` with coefficients from ``base``; a ring only."""

    variables: tuple
    base: object = QQ

    def __call__(self, x) -> Polynomial:
        if isinstance(x, Polynomial):
            if x.variables != self.variables:
                return x.with_variables(self.variables)
            return x
        return Polynomial.constant(self.base(x), self.variables)

    @property
    def zero(self):
        return Polynomial(self.variables)

    @property
    def one(self):
        return Polynomial.constant(self.base.one, self.variables)

    def var(self, name: str) -> Polynomial:
        exp = tuple(1 if v == name else 0 for v in self.variables)
        return Polynomial(self.variables, {exp: self.base.one})


@dataclass(frozen=True)
class ConstraintSystem:
    polynomials: tuple
    variables: tuple

    def __len__(self):
        return len(self.polynomials)

    def as_set(self) -> set:
        return set(self.polynomials)

    def evaluate(self, point: Sequence) -> list:
        b = dict(zip(self.variables, point))
        return [p.evaluate(b) for p in self.polynomials]

    def to_strings(self) -> list[str]:
        return [p.to_expr() for p in self.polynomials]


def normalize_constraint(p: Polynomial) -> Polynomial:
    lc = p.leading_term()[1]
    if isinstance(lc, (int, Fraction)):
        return p.primitive()
    return p.monic()


def _grlex_sort_key(p: Polynomial):
    return [(sum(e), e) for e, _ in p.sorted_terms()]


def _constant_coefficients(p: Polynomial) -> Polynomial:
    """Replace rational-function coefficients that are constants by Fractions."""
    out = {}
    for e, c in p.terms.items():
        if isinstance(c, RationalFunction):
            if not c.is_polynomial() or not c.as_polynomial().is_constant():
                return p
            c = Fraction(c.as_polynomial().constant_value())
        out[e] = c
    return Polynomial(p.variables, out)


def _independent(polys: list) -> list:
    """Greedy linearly independent subset, in the given order."""
    kept, echelon = [], []  # echelon: list of (pivot monomial, row dict)
    for p in polys:
        row = dict(p.terms)
        for piv, erow in echelon:
            f = row.get(piv)
            if f:
                for m, c in erow.items():
                    v = row.get(m, 0) - f * c
                    if v:
                        row[m] = v
                    else:
                        row.pop(m, None)
        if not row:
            continue
        piv = max(row, key=lambda e: (sum(e), e))
        lead = row[piv]
        row = {m: c / lead for m, c in row.items()}
        for k, (opiv, orow) in enumerate(echelon):
            f = orow.get(piv)
            if f:
                new = dict(orow)
                for m, c in row.items():
                    v = new.get(m, 0) - f * c
                    if v:
                        new[m] = v
                    else:
                        new.pop(m, None)
                echelon[k] = (opiv, new)
        echelon.append((piv, row))
        kept.append(p)
    return kept


def make_constraint_system(polys, variables) -> ConstraintSystem:
    """Normalize, drop scalar duplicates and linearly redundant members.

    Sparser polynomials are preferred when choosing which members of a
    linearly dependent set to keep; the span, hence the variety, is unchanged.
    """
    seen: list[Polynomial] = []
    for p in polys:
        if not p:
            continue
        q = normalize_constraint(_constant_coefficients(p))
        if not any(q == s for s in seen):
            seen.append(q)
    seen.sort(key=lambda p: (len(p.terms), _grlex_sort_key(p)))
    kept = _independent(seen)
    kept.sort(key=_grlex_sort_key, reverse=True)
    return ConstraintSystem(tuple(kept), tuple(variables))


def cubic_constraints(R: Matrix, basis: NullSpaceBasis, d: int = 2) -> ConstraintSystem:
    """Nonzero entries of the Q12Q13Q23 residual at Q = sum c_k B_k."""
    L = linear_operator_for_Q(R, d)
    for name, B in zip(basis.coords, basis.basis):
        if any(L.apply(B)):
            raise ValueError(f"basis element {name} is not in the kernel of the linear equations")
    ring = PolynomialRing(tuple(basis.coords), R.field)
    n = d * d
    Q = Matrix.zeros(n, n, ring)
    for name, B in zip(basis.coords, basis.basis):
        Q = Q + Matrix._raw(n, n, [ring(x) * ring.var(name) for x in B.entries()], ring)
    res = triple_residual(Q, Q, Q, d)
    return make_constraint_system(res.entries(), basis.coords)


# ---------------------------------------------------------------------------
# finite-field enumeration

@dataclass(frozen=True)
class FpSolution:
    coords: tuple
    Q: Matrix
    invertible: bool


def reduce_mod_p(M: Matrix, p: int) -> Matrix:
    F = PrimeField(p)
    if M.field == F:
        return M
    return M.map(F, F)


def _leg_index_maps(d: int):
    """Index arrays realizing Q12, Q13, Q23 directly from the tensor entries of Q.

    Entry (r, c) of the d^3 x d^3 embedding takes Q.flat[idx] when mask is set.
    """
    n3 = d ** 3
    maps = {}
    for legs in ((1, 2), (1, 3), (2, 3)):
        idx = np.zeros((n3, n3), dtype=np.int64)
        mask = np.zeros((n3, n3), dtype=bool)
        for r, (i, j, k) in enumerate(itertools.product(range(d), repeat=3)):
            for c, (i2, j2, k2) in enumerate(itertools.product(range(d), repeat=3)):
                if legs == (1, 2) and k == k2:
                    a, b = (i, j), (i2, j2)
                elif legs == (1, 3) and j == j2:
                    a, b = (i, k), (i2, k2)
                elif legs == (2, 3) and i == i2:
                    a, b = (j, k), (j2, k2)
                else:
                    continue
                idx[r, c] = (a[0] * d + a[1]) * d * d + (b[0] * d + b[1])
                mask[r, c] = True
        maps[legs] = (idx, mask)
    return maps


def _ybe_zero_mask(Qs: np.ndarray, p: int, d: int, maps) -> np.ndarray:
    """Boolean per row of ``Qs`` (N x d^4 ints mod p): does YBE hold mod p."""
    legs = {}
    for key, (idx, mask) in maps.items():
        legs[key] = np.where(mask, Qs[:, idx], 0)
    q12, q13, q23 = legs[(1, 2)], legs[(1, 3)], legs[(2, 3)]
    lhs = np.matmul(np.matmul(q12, q13) % p, q23) % p
    rhs = np.matmul(np.matmul(q23, q13) % p, q12) % p
    return np.all(lhs == rhs, axis=(1, 2))


def enumerate_fp(R: Matrix, p: int, d: int = 2, bound: int | None = None,
                 chunk: int = 1 << 15) -> list[FpSolution]:
    """All Q over F_p solving the system with R, in lexicographic coordinate order.

    The linear equations are solved exactly over F_p; every point of the
    kernel is then tested against Q12Q13Q23 = Q23Q13Q12.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if bound is None:
        bound = default_bound()
    Rp = reduce_mod_p(R, p)
    ns = solve_linear(Rp, d)
    k = ns.dimension
    required = p ** k
    if required > bound:
        raise EnumerationBoundError(required, bound)
    if not ybe_residual(Rp, d).is_zero():
        return []
    n = d * d
    B = np.array([[x.value for x in b.entries()] for b in ns.basis], dtype=np.int64).reshape(k, n * n)
    maps = _leg_index_maps(d)
    F = PrimeField(p)
    hits = []
    powers = p ** np.arange(k - 1, -1, -1, dtype=np.int64)
    for start in range(0, required, chunk):
        stop = min(start + chunk, required)
        ids = np.arange(start, stop, dtype=np.int64)
        coords = (ids[:, None] // powers[None, :]) % p
        Qs = (coords @ B) % p if k else np.zeros((len(ids), n * n), dtype=np.int64)
        ok = _ybe_zero_mask(Qs, p, d, maps)
        for row in np.nonzero(ok)[0]:
            hits.append((tuple(int(c) for c in coords[row]), tuple(int(x) for x in Qs[row])))
    out = []
    for c, q in hits:
        Q = Matrix._raw(n, n, [FpElement(x, p) for x in q], F)
        out.append(FpSolution(c, Q, bool(determinant(Q))))
    return out


# ---------------------------------------------------------------------------
# family verification

@dataclass
class FamilyReport:
    name: str
    samples: int
    passed: int = 0
    failures: list = dc_field(default_factory=list)
    symbolic: bool | None = None
    symbolic_branches: int = 0

    @property
    def ok(self) -> bool:
        return self.passed == self.samples and not self.failures and self.symbolic is not False


def verify_family(entry, samples: int = 20, seed: int = 0) -> FamilyReport:
    """Check a catalog family at seeded rational points and symbolically."""
    from .catalog import instantiate, symbolic_instances

    report = FamilyReport(entry.name, samples)
    for i in range(samples):
        pair, binding = instantiate(entry, seed + i)
        res = system_residuals(pair)
        if not res.all_zero():
            bad = [name for name, M in res.items() if not M.is_zero()]
            report.failures.append((dict(binding), f"nonzero residuals {bad}"))
            continue
        if not determinant(pair.R) or not determinant(pair.Q):
            report.failures.append((dict(binding), "singular R or Q"))
            continue
        report.passed += 1
    branches = symbolic_instances(entry)
    if branches:
        report.symbolic = all(system_residuals(pair).all_zero() for pair in branches)
        report.symbolic_branches = len(branches)
    return report


def coordinates_in_basis(M: Matrix, basis: NullSpaceBasis):
    """Coordinates of M in the given basis, or None when M is not in the span."""
    k = basis.dimension
    n2 = len(M.entries())
    field = M.field
    if k == 0:
        return () if M.is_zero() else None
    rows = []
    for i in range(n2):
        rows.append([b.entries()[i] for b in basis.basis] + [M.entries()[i]])
    aug = Matrix.from_rows(rows, field)
    red, pivots = rref(aug)
    if k in pivots:
        return None
    coords = [field.zero] * k
    for r, pc in enumerate(pivots):
        coords[pc] = red[r, k]
    return tuple(coords)
