from ybsystem.arith import PrimeField
from ybsystem.catalog import get_entry
from ybsystem.finite import (
    extended_closure_mod_p,
    family_closure_mod_p,
    family_points_mod_p,
    pgl2,
    projective_key,
    trivial_keys,
)
from ybsystem.matrix import Matrix
from ybsystem.solver import enumerate_fp

R_H02 = [[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0], [-1, 0, 0, 1]]


def test_pgl2_order():
    for p in (2, 3, 5):
        assert len(pgl2(p)) == (p * p - 1) * (p * p - p) // (p - 1)


def test_projective_key():
    assert projective_key([0, 2, 4], 5) == (0, 1, 2)
    assert projective_key([0, 0], 5) == (0, 0)


def test_family_points_respect_constraints():
    pts = list(family_points_mod_p(get_entry("H1.4/antidiag"), 5))
    assert pts and all(b["t"] % 5 and b["a"] % 5 for b, _, _ in pts)


def test_generic_closure_is_the_three_trivial_lines():
    F = PrimeField(5)
    R = Matrix.from_rows(R_H02, F)
    closure = family_closure_mod_p(R, 5)
    assert set(closure) == trivial_keys(R, 5)
    enumerated = {projective_key(s.Q.entries(), 5) for s in enumerate_fp(R, 5) if s.invertible}
    assert enumerated == set(closure)


def test_closure_is_contained_in_enumeration_for_H14():
    F = PrimeField(5)
    R = Matrix.antidiag([1, 2, 2, 1], F)
    enumerated = {projective_key(s.Q.entries(), 5) for s in enumerate_fp(R, 5) if s.invertible}
    closure = family_closure_mod_p(R, 5)
    assert set(closure) <= enumerated
    assert any("H1.4/antidiag" in v for v in closure.values())


def test_extended_closure_grows():
    F = PrimeField(3)
    R = Matrix.antidiag([1, 1, 1, 1], F)
    small = family_closure_mod_p(R, 3)
    big = extended_closure_mod_p(R, 3)
    assert set(small) < set(big)


def test_unipotent_corner_solution_escapes_every_closure():
    F = PrimeField(5)
    R = Matrix.diag([1, -1, -1, 1], F)
    Q = Matrix.from_rows([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 1]], F)
    key = projective_key(Q.entries(), 5)
    enumerated = {projective_key(s.Q.entries(), 5) for s in enumerate_fp(R, 5) if s.invertible}
    assert key in enumerated
    assert key not in family_closure_mod_p(R, 5)
    assert key not in extended_closure_mod_p(R, 5)
