"""Acceptance criteria 1-10.

Each criterion is a function returning ``(passed, detail)``.  Under pytest the
results are echoed as one line per criterion in the terminal summary; run the
file directly (``python3 tests/test_acceptance.py``) for the same lines
without pytest.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from ybsystem.arith import QQ, FunctionField, PrimeField, parse_scalar
from ybsystem.catalog import (
    builtin_triples,
    catalog_entries,
    eight_vertex_crossref,
    get_entry,
    instantiate,
    random_rational,
    scalar_R_rule,
    symbolic_instances,
)
from ybsystem.finite import extended_closure_mod_p, family_closure_mod_p, projective_key
from ybsystem.matrix import Matrix, determinant, embed, inverse, kron, permutation_P
from ybsystem.solver import (
    NullSpaceBasis,
    cubic_constraints,
    enumerate_fp,
    normalize_constraint,
    solve_linear,
    verify_family,
)
from ybsystem.symmetry import SymmetryElement, apply_symmetry, fingerprint, restricted_search
from ybsystem.system import YBPair, extended_residuals, qbar, system_residuals

RESULTS: dict[int, tuple[bool, str]] = {}

R_H02 = [[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0], [-1, 0, 0, 1]]
R_H12_SPECIAL = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, -1]]


def grid(text: str) -> list[list[str]]:
    return [row.split() for row in text.split("/")]


def R_H14(field, t=None):
    """Symbolic t when ``field`` is Q(t), otherwise bind t to the given value."""
    return Matrix.parse(grid("0 0 0 1 / 0 0 t 0 / 0 t 0 0 / 1 0 0 0"), field, None if t is None else {"t": t})


def R_H23(field):
    return Matrix.parse(grid("1 0 0 0 / x 1 0 0 / y 0 1 0 / z y x 1"), field)


# display gauges for the constraint regression
GAUGE_H02 = {
    "alpha": "1 0 0 0 / 0 0 1 0 / 0 1 0 0 / 0 0 0 1",
    "beta": "0 0 0 1 / 0 1 0 0 / 0 0 -1 0 / -1 0 0 0",
}
GAUGE_H12 = {
    "alpha": "1 0 0 0 / 0 1 0 0 / 0 1 0 0 / 0 0 0 0",
    "beta": "1 0 0 0 / 0 0 1 0 / 0 0 1 0 / 0 0 0 0",
    "gamma": "0 0 0 0 / 0 0 0 0 / 0 0 0 0 / 1 0 0 0",
    "delta": "0 0 0 0 / 0 -1 1 0 / 0 0 0 0 / 0 0 0 1",
}
GAUGE_H14 = {
    "alpha": "1 0 0 0 / 0 0 0 0 / 0 0 0 0 / 0 0 0 1",
    "beta": "0 0 0 0 / 0 0 1 0 / 0 1 0 0 / 0 0 0 0",
    "gamma": "0 0 0 1 / 0 0 0 0 / 0 0 0 0 / 1 0 0 0",
}


def gauge(layout: dict, field) -> NullSpaceBasis:
    names = tuple(layout)
    return NullSpaceBasis(tuple(Matrix.parse(grid(layout[n]), field) for n in names), names, 2)


def expected_polys(exprs, variables):
    F = FunctionField(variables)
    return {normalize_constraint(parse_scalar(e, F).as_polynomial()) for e in exprs}


# ---------------------------------------------------------------------------

def criterion_1():
    start = time.perf_counter()
    bad = []
    for e in catalog_entries():
        rep = verify_family(e, samples=20, seed=0)
        if not rep.ok or rep.symbolic is not True:
            bad.append(e.name)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    return ok, f"{len(catalog_entries())} families, 20 samples + symbolic each, {elapsed:.1f}s" + \
        (f"; failing {bad}" if bad else "")


def criterion_2():
    Fx = FunctionField(("x", "y", "z"))
    cases = {
        "R_H0.2": (Matrix.from_rows(R_H02, QQ), 2),
        "R_H1.2-special": (Matrix.from_rows(R_H12_SPECIAL, QQ), 4),
        "R_H1.4(t)": (R_H14(FunctionField(("t",))), 3),
        "R_H2.3(x,y,z)": (R_H23(Fx), 6),
        "I": (Matrix.identity(4, QQ), 16),
    }
    got = {k: solve_linear(R).dimension for k, (R, _) in cases.items()}
    ok = all(got[k] == want for k, (_, want) in cases.items())
    return ok, ", ".join(f"{k}={v}" for k, v in got.items())


def criterion_3():
    checks = [
        (Matrix.from_rows(R_H02, QQ), GAUGE_H02, ["beta*(beta^2-alpha^2)"]),
        (Matrix.from_rows(R_H12_SPECIAL, QQ), GAUGE_H12,
         ["alpha*gamma*(beta+delta)", "alpha*beta*(beta+delta)", "alpha*(alpha-delta)*(beta+delta)"]),
        (R_H14(FunctionField(("t",))), GAUGE_H14, ["alpha^2*gamma", "alpha*(gamma^2+alpha*beta-beta^2)"]),
    ]
    parts, ok = [], True
    for R, layout, exprs in checks:
        system = cubic_constraints(R, gauge(layout, R.field))
        same = system.as_set() == expected_polys(exprs, tuple(layout))
        ok &= same
        parts.append(f"{len(system)} polys {'match' if same else 'DIFFER'}")
    return ok, "; ".join(parts)


def _oracle_h02(p: int):
    """All (alpha, beta) over F_p with Q = alpha P + beta B checked against the full system."""
    F = PrimeField(p)
    R = Matrix.from_rows(R_H02, F)
    P, B = (Matrix.parse(grid(GAUGE_H02[k]), F) for k in ("alpha", "beta"))
    out = []
    for a in range(p):
        for b in range(p):
            Q = P.scale(a) + B.scale(b)
            if system_residuals(YBPair(R, Q)).all_zero():
                out.append(Q)
    return out


def criterion_4():
    parts, ok = [], True
    for p in (5, 7):
        F = PrimeField(p)
        R = Matrix.from_rows(R_H02, F)
        sols = enumerate_fp(R, p)
        oracle = _oracle_h02(p)
        P = permutation_P(2, F)
        lines = {projective_key(M.entries(), p) for M in (P, R, P @ inverse(R) @ P)}
        inv_lines = {projective_key(s.Q.entries(), p) for s in sols if s.invertible}
        same_set = {s.Q.entries() for s in sols} == {Q.entries() for Q in oracle}
        n_inv = sum(s.invertible for s in sols)
        n_inv_oracle = sum(bool(determinant(Q)) for Q in oracle)
        good = inv_lines == lines and same_set and len(sols) == len(oracle) and n_inv == n_inv_oracle \
            and n_inv == 3 * (p - 1)
        ok &= good
        parts.append(f"F_{p}: {len(sols)} solutions, {n_inv} invertible in {len(inv_lines)} lines, "
                     f"oracle {len(oracle)}/{n_inv_oracle}")
    return ok, "; ".join(parts)


def _criterion_5_data(p: int):
    F = PrimeField(p)
    R = R_H14(F, "1")
    sols = enumerate_fp(R, p)
    enumerated = {projective_key(s.Q.entries(), p) for s in sols if s.invertible}
    closure = set(family_closure_mod_p(R, p))
    return enumerated, closure, R


def criterion_5_soundness():
    parts, ok = [], True
    for p in (3, 5):
        enumerated, closure, _ = _criterion_5_data(p)
        missing = closure - enumerated
        ok &= not missing
        parts.append(f"F_{p}: {len(closure)} family lines, {len(missing)} absent from enumeration")
    return ok, "; ".join(parts)


def criterion_5():
    parts, ok = [], True
    for p in (3, 5):
        enumerated, closure, R = _criterion_5_data(p)
        absent = closure - enumerated
        uncovered = enumerated - closure
        beyond = enumerated - set(extended_closure_mod_p(R, p))
        ok &= not absent and not uncovered
        parts.append(f"F_{p}: {len(enumerated)} invertible lines, {len(closure)} from families, "
                     f"{len(absent)} family lines not enumerated, {len(uncovered)} enumerated lines "
                     f"outside the families ({len(beyond)} even with transpose/inverse)")
    return ok, "; ".join(parts)


def _eight_vertex_shape(Q: Matrix, six: bool = False) -> bool:
    allowed = {(0, 0), (1, 1), (2, 2), (3, 3), (1, 2), (2, 1)}
    if not six:
        allowed |= {(0, 3), (3, 0)}
    return all(not Q[i, j] for i in range(4) for j in range(4) if (i, j) not in allowed)


def criterion_6():
    parts, ok = [], True
    # case 1: scalar R with Q drawn from YBE solutions among catalog Q's
    rng = random.Random("diagonal-case-1")
    entries = catalog_entries()
    good = 0
    for seed in range(20):
        pair, _ = instantiate(entries[seed % len(entries)], seed)
        kappa = random_rational(rng)
        good += system_residuals(scalar_R_rule(pair.Q, kappa)).all_zero()
    ok &= good == 20
    parts.append(f"case 1: {good}/20")
    for case, six in ((2, False), (3, True)):
        fams = [e for e in entries if e.diagonal_case == case]
        for e in fams:
            rep = verify_family(e, samples=20, seed=0)
            shapes = all(_eight_vertex_shape(instantiate(e, s)[0].Q, six) for s in range(20))
            ok &= rep.ok and shapes
        parts.append(f"case {case}: {len(fams)} families x 20")
    ok &= sum(e.diagonal_case == 2 for e in entries) == 6
    ok &= any(s.kind == "pythagorean" for s in get_entry("signdiag/Q2").strategies)
    return ok, "; ".join(parts)


def _random_element(rng: random.Random) -> SymmetryElement:
    while True:
        S = Matrix.from_rows([[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)], QQ)
        if determinant(S):
            return SymmetryElement(S, random_rational(rng), random_rational(rng), rng.random() < 0.5)


def criterion_7():
    rng = random.Random("symmetry-invariance")
    total = bad_res = bad_fp = flips = 0
    for e in catalog_entries():
        pair, _ = instantiate(e, 0)
        fp0 = fingerprint(pair)
        for _ in range(100):
            g = _random_element(rng)
            flips += g.flip
            out = apply_symmetry(pair, g)
            total += 1
            bad_res += not system_residuals(out).all_zero()
            bad_fp += fingerprint(out) != fp0
    ok = bad_res == 0 and bad_fp == 0 and 0 < flips < total
    return ok, f"{total} transformed pairs ({flips} with flip): {bad_res} residual failures, " \
               f"{bad_fp} fingerprint changes"


def _criterion_8_pairs():
    pairs = []
    for e in catalog_entries():
        pairs += [instantiate(e, s)[0] for s in range(20)]
        pairs += symbolic_instances(e)
    for R in (Matrix.from_rows(R_H02, QQ), Matrix.from_rows(R_H12_SPECIAL, QQ), R_H14(QQ, "2")):
        pairs += builtin_triples(R)
    assert all(system_residuals(pair).all_zero() for pair in pairs)
    return pairs


def _extended_failures(pairs, reorder=False):
    return [pair for pair in pairs
            if not all(M.is_zero() for M in extended_residuals(pair.Q, qbar(pair), pair.R, reorder=reorder))]


def criterion_8():
    pairs = _criterion_8_pairs()
    bad = _extended_failures(pairs)
    bad_reordered = _extended_failures(pairs, reorder=True)
    return not bad, f"{len(pairs)} solution pairs, {len(bad)} with nonzero extended residuals " \
                    f"({len(bad_reordered)} with the R23 R13 ordering)"


def criterion_8_reordered():
    pairs = _criterion_8_pairs()
    bad = _extended_failures(pairs, reorder=True)
    return not bad, f"{len(pairs)} pairs, {len(bad)} failures"


def criterion_9():
    R = Matrix.diag([1, -1, -1, 1], QQ)
    parts, ok = [], True
    # I + X(x)X and 2I + X(x)X; conjugating by Hadamard legs gives diag(2,0,0,2), diag(3,1,1,3)
    for a, std in ((1, [2, 0, 0, 2]), (2, [3, 1, 1, 3])):
        Q24 = eight_vertex_crossref(a, 1, 1)
        A = YBPair(R, Q24)
        B = YBPair(R, Matrix.diag(std, QQ))
        both = system_residuals(A).all_zero() and system_residuals(B).all_zero()
        H = Matrix.from_rows([[1, 1], [1, -1]], QQ)
        HH = kron(H, H)
        linked = HH @ Q24 @ inverse(HH) == Matrix.diag(std, QQ)
        res = restricted_search(A, B)
        good = both and linked and res.witness is None and res.complex_solvable is False
        ok &= good
        parts.append(f"a={a}: witness {'none' if res.witness is None else 'FOUND'}, "
                     f"unsolvable over C: {res.complex_solvable is False}, {res.cases_tried} cases")
    return ok, "; ".join(parts)


# property suites ------------------------------------------------------------

CASES = 120
small = st.integers(-6, 6).map(Fraction)


def matrices(n):
    return st.lists(small, min_size=n * n, max_size=n * n).map(lambda e: Matrix(n, n, e, QQ))


PROP = settings(max_examples=CASES, deadline=None, derandomize=True,
                suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])


def _property_suites() -> dict[str, int]:
    counts = {"mixed-product": 0, "embed": 0, "P-involution": 0, "inverse": 0}

    @PROP
    @given(matrices(2), matrices(2), matrices(2), matrices(2))
    def mixed(A, B, C, D):
        counts["mixed-product"] += 1
        assert kron(A, B) @ kron(C, D) == kron(A @ C, B @ D)

    @PROP
    @given(matrices(4), matrices(4), st.sampled_from([(1, 2), (1, 3), (2, 3)]))
    def emb(A, B, legs):
        counts["embed"] += 1
        assert embed(A @ B, legs, 2) == embed(A, legs, 2) @ embed(B, legs, 2)

    @PROP
    @given(st.integers(2, 4), st.data())
    def involution(d, data):
        counts["P-involution"] += 1
        P = permutation_P(d, QQ)
        assert P @ P == Matrix.identity(d * d, QQ)
        u = data.draw(st.lists(small, min_size=d, max_size=d))
        v = data.draw(st.lists(small, min_size=d, max_size=d))
        U, V = Matrix(d, 1, u, QQ), Matrix(d, 1, v, QQ)
        assert P @ kron(U, V) == kron(V, U)

    @PROP
    @given(matrices(4).filter(lambda M: bool(determinant(M))))
    def round_trip(A):
        counts["inverse"] += 1
        Ai = inverse(A)
        assert A @ Ai == Matrix.identity(4, QQ) and Ai @ A == Matrix.identity(4, QQ)

    for fn in (mixed, emb, involution, round_trip):
        fn()
    return counts


def criterion_10():
    try:
        counts = _property_suites()
    except AssertionError as exc:
        return False, f"property violated: {exc}"
    ok = all(v >= 100 for v in counts.values())
    return ok, ", ".join(f"{k} {v} cases" for k, v in counts.items())


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}


def run(n: int) -> tuple[bool, str]:
    ok, detail = CRITERIA[n]()
    RESULTS[n] = (ok, detail)
    return ok, detail


def report_line(n: int) -> str:
    ok, detail = RESULTS[n]
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


# ---------------------------------------------------------------------------
# pytest entry points

@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 7, 9, 10])
def test_criterion(n):
    ok, detail = run(n)
    assert ok, detail


def test_criterion_5_family_members_are_enumerated():
    ok, detail = criterion_5_soundness()
    assert ok, detail


@pytest.mark.xfail(strict=True, reason="the family list misses invertible eight-vertex solutions "
                                       "for this R; see the counterexample test in test_catalog")
def test_criterion_5():
    ok, detail = run(5)
    assert ok, detail


def test_criterion_8_reordered_implication():
    ok, detail = criterion_8_reordered()
    assert ok, detail


@pytest.mark.xfail(strict=True, reason="with the R13 R23 ordering the implication fails for "
                                       "(R_H0.2, R) and (R_H0.2, P R^-1 P)")
def test_criterion_8():
    ok, detail = run(8)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n in CRITERIA:
        ok, _ = run(n)
        failed += not ok
        print(report_line(n), flush=True)
    sys.exit(1 if failed else 0)
