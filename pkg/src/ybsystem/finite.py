"""Catalog families reduced mod p and closed under the finite symmetry group.

Over F_p the symmetry group is finite: S ranges over PGL(2, F_p) (scalar S
acts trivially), the flip is optional, and scalings are absorbed by
comparing matrices projectively.  For a target R the closure collects every
(S (x) S) Q_E (S (x) S)^-1 (optionally P-conjugated) for which the same
transformation carries the family's R_E onto a multiple of R, together with
the lines through P, R and P R^-1 P.
"""

from __future__ import annotations

import itertools

import numpy as np

from .arith import PrimeField, identifiers, parse_scalar
from .catalog import CatalogEntry, catalog_entries
from .matrix import Matrix, determinant, inverse, permutation_P
from .solver import reduce_mod_p

Key = tuple


def projective_key(values, p: int) -> Key:
    """Scale so the first nonzero entry is 1."""
    vals = [int(v) % p for v in values]
    for v in vals:
        if v:
            inv = pow(v, -1, p)
            return tuple(x * inv % p for x in vals)
    return tuple(vals)


def _keys(batch: np.ndarray, p: int) -> list[Key]:
    """Projective keys for each row of an (N, m) array mod p."""
    inv = np.array([0] + [pow(v, -1, p) for v in range(1, p)], dtype=np.int64)
    nz = batch != 0
    first = np.argmax(nz, axis=1)
    lead = batch[np.arange(len(batch)), first]
    scaled = (batch * inv[lead][:, None]) % p
    return [tuple(int(x) for x in row) for row in scaled]


def pgl2(p: int) -> list[np.ndarray]:
    """Representatives of PGL(2, F_p): invertible, first nonzero entry 1."""
    out = []
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p == 0:
            continue
        first = next(v for v in (a, b, c, d) if v)
        if first != 1:
            continue
        out.append(np.array([[a, b], [c, d]], dtype=np.int64))
    return out


def _transforms(p: int):
    """Stacked (T, T^-1) for T = S(x)S and T = P (S(x)S), S in PGL(2, F_p)."""
    P = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.int64)
    Ts, Tis, labels = [], [], []
    for S in pgl2(p):
        a, b, c, d = (int(x) for x in S.ravel())
        det_inv = pow((a * d - b * c) % p, -1, p)
        Si = (np.array([[d, -b], [-c, a]], dtype=np.int64) * det_inv) % p
        T = np.kron(S, S) % p
        Ti = np.kron(Si, Si) % p
        for flip in (False, True):
            if flip:
                Ts.append(P @ T % p)
                Tis.append(Ti @ P % p)
            else:
                Ts.append(T)
                Tis.append(Ti)
            labels.append((tuple(int(x) for x in S.ravel()), flip))
    return np.stack(Ts), np.stack(Tis), labels


def _conj(Ts, Tis, M: np.ndarray, p: int) -> np.ndarray:
    return np.matmul(np.matmul(Ts, M) % p, Tis) % p


def _int_matrix(M: Matrix) -> np.ndarray:
    return np.array([int(x) for x in M.entries()], dtype=np.int64).reshape(M.rows, M.cols)


def _template_mod_p(grid, binding: dict, p: int) -> Matrix:
    return Matrix.parse(grid, PrimeField(p), binding)


def _admissible(exprs, binding, p, want_zero: bool) -> bool:
    F = PrimeField(p)
    for e in exprs:
        if not set(identifiers(e)) <= set(binding):
            continue
        v = parse_scalar(e, F, binding)
        if bool(v) == want_zero:
            return False
    return True


def family_points_mod_p(entry: CatalogEntry, p: int, params_R: dict | None = None):
    """Yield (binding, R, Q) over F_p for every admissible parameter tuple.

    Constraints must vanish and nondegeneracy expressions, det R and det Q be
    nonzero mod p.  ``params_R`` fixes the R parameters if given.
    """
    rnames = entry.R_params()
    qnames = entry.Q_params()
    rvalues = [tuple(params_R[n] for n in rnames)] if params_R is not None else \
        itertools.product(range(p), repeat=len(rnames))
    for rv in rvalues:
        rb = dict(zip(rnames, rv))
        if not _admissible(entry.constraints, rb, p, True) or \
                not _admissible(entry.nondegeneracy, rb, p, False):
            continue
        R = _template_mod_p(entry.R_template, rb, p)
        if not determinant(R):
            continue
        for qv in itertools.product(range(p), repeat=len(qnames)):
            b = dict(rb, **dict(zip(qnames, qv)))
            if not _admissible(entry.constraints, b, p, True) or \
                    not _admissible(entry.nondegeneracy, b, p, False):
                continue
            Q = _template_mod_p(entry.Q_template, b, p)
            if determinant(Q):
                yield b, R, Q


def trivial_keys(R: Matrix, p: int) -> set[Key]:
    Rp = reduce_mod_p(R, p)
    P = permutation_P(2, Rp.field)
    keys = {projective_key(P.entries(), p)}
    if determinant(Rp):
        keys.add(projective_key(Rp.entries(), p))
        keys.add(projective_key((P @ inverse(Rp) @ P).entries(), p))
    return keys


def family_closure_mod_p(R: Matrix, p: int, entries=None) -> dict[Key, set]:
    """Projective keys of invertible Q reachable from catalog data for this R.

    Returns key -> set of provenance labels ("trivial" or entry names).
    """
    Rp = reduce_mod_p(R, p)
    target = projective_key(Rp.entries(), p)
    Ts, Tis, _ = _transforms(p)
    closure: dict[Key, set] = {k: {"trivial"} for k in trivial_keys(Rp, p)}
    for entry in entries if entries is not None else catalog_entries():
        rnames = entry.R_params()
        for rv in itertools.product(range(p), repeat=len(rnames)):
            rb = dict(zip(rnames, rv))
            if not _admissible(entry.constraints, rb, p, True) or \
                    not _admissible(entry.nondegeneracy, rb, p, False):
                continue
            RE = _template_mod_p(entry.R_template, rb, p)
            if not determinant(RE):
                continue
            conj_R = _conj(Ts, Tis, _int_matrix(RE), p).reshape(len(Ts), 16)
            hits = [i for i, k in enumerate(_keys(conj_R, p)) if k == target]
            if not hits:
                continue
            for _, _, QE in family_points_mod_p(entry, p, rb):
                conj_Q = _conj(Ts[hits], Tis[hits], _int_matrix(QE), p).reshape(len(hits), 16)
                for k in _keys(conj_Q, p):
                    closure.setdefault(k, set()).add(entry.name)
    return closure


def _transpose_or_invert(M: Matrix, op: str) -> Matrix:
    if "T" in op:
        M = M.transpose()
    if "I" in op:
        M = inverse(M)
    return M


def extended_closure_mod_p(R: Matrix, p: int, entries=None) -> dict[Key, set]:
    """Closure enlarged by (Q, R) -> (Q^T, R^T) and (Q, R) -> (Q^-1, R^-1).

    Both maps preserve all four equations but are not among the conjugation
    and flip symmetries; this is a diagnostic for what the smaller group misses.
    """
    Rp = reduce_mod_p(R, p)
    F = PrimeField(p)
    closure = {k: set(v) for k, v in family_closure_mod_p(Rp, p, entries).items()}
    for op in ("T", "I", "TI"):
        image = family_closure_mod_p(_transpose_or_invert(Rp, op), p, entries)
        for k, labels in image.items():
            Q = Matrix(4, 4, [F(x) for x in k], F)
            back = projective_key(_transpose_or_invert(Q, op).entries(), p)
            closure.setdefault(back, set()).update(f"{name}[{op}]" for name in labels)
    return closure
