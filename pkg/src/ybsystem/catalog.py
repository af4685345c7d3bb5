"""Every exceptional (R, Q) family of the two-dimensional classification, as data.

Templates are grids of entry expressions.  Constrained parameters are
produced by named strategies so that every instantiation satisfies its
constraints exactly over Q:

``free``         seeded small nonzero rational
``sign``         +1 or -1                                  (x^2 = 1)
``pythagorean``  t = (m^2-1)/(2m), s = (m^2+1)/(2m)         (s^2 = 1 + t^2)
``plusminus``    b = +a or b = -a                          (b^2 = a^2)
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .arith import QQ, FunctionField, identifiers, parse_scalar
from .matrix import Matrix, SingularMatrixError, determinant, inverse, permutation_P
from .system import YBPair, ybe_residual


class InstantiationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Strategy:
    kind: str
    targets: tuple  # parameters produced
    sources: tuple = ()  # parameters consumed


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    R_template: tuple
    Q_template: tuple
    params: tuple
    constraints: tuple = ()
    nondegeneracy: tuple = ()
    strategies: tuple = ()
    anchor: str = ""
    notes: str = ""
    diagonal_case: int | None = None
    exceptional: bool = False

    def __post_init__(self):
        used = set()
        for grid in (self.R_template, self.Q_template):
            if len(grid) != 4 or any(len(row) != 4 for row in grid):
                raise ValueError(f"{self.name}: templates must be 4x4")
            for cell in itertools.chain.from_iterable(grid):
                used.update(identifiers(cell))
        if not used <= set(self.params):
            raise ValueError(f"{self.name}: undeclared parameters {sorted(used - set(self.params))}")

    def strategy_for(self, param: str) -> Strategy:
        for s in self.strategies:
            if param in s.targets:
                return s
        return Strategy("free", (param,))

    def ordered_strategies(self) -> list[Strategy]:
        """Free parameters first, then the dependent strategies in declaration order."""
        explicit = {p for s in self.strategies for p in s.targets}
        free = [Strategy("free", (p,)) for p in self.params if p not in explicit]
        return free + list(self.strategies)

    def R_params(self) -> tuple:
        used = set()
        for cell in itertools.chain.from_iterable(self.R_template):
            used.update(identifiers(cell))
        return tuple(p for p in self.params if p in used)

    def Q_params(self) -> tuple:
        rp = set(self.R_params())
        return tuple(p for p in self.params if p not in rp)


def _grid(text: str) -> tuple:
    """'a b c d / e f g h / ...' -> 4x4 tuple of strings."""
    return tuple(tuple(row.split()) for row in text.split("/"))


_R_DIAG = _grid("1 0 0 0 / 0 x 0 0 / 0 0 y 0 / 0 0 0 z")
_R_H23 = _grid("1 0 0 0 / x 1 0 0 / y 0 1 0 / z y x 1")
_SIGNS = (Strategy("sign", ("x",)), Strategy("sign", ("y",)), Strategy("sign", ("z",)))
_SIGN_CONSTRAINTS = ("x^2-1", "y^2-1", "z^2-1")

_ENTRIES = (
    CatalogEntry(
        name="H1.2-special/Q-tr",
        R_template=_grid("1 0 0 0 / 0 1 0 0 / 0 0 1 0 / 1 0 0 -1"),
        Q_template=_grid("1 0 0 0 / 0 1 0 0 / 0 1-t t 0 / r 0 0 -t"),
        params=("t", "r"),
        nondegeneracy=("t",),
        anchor="exceptional list: special R_H1.2",
        notes="Q is generically proportional neither to R nor to P R^-1 P.",
        exceptional=True,
    ),
    CatalogEntry(
        name="H1.4/antidiag",
        R_template=_grid("0 0 0 1 / 0 0 t 0 / 0 t 0 0 / 1 0 0 0"),
        Q_template=_grid("0 0 0 1 / 0 0 a 0 / 0 a 0 0 / 1 0 0 0"),
        params=("t", "a"),
        nondegeneracy=("t", "a"),
        anchor="exceptional list: R_H1.4 with antidiagonal Q",
        notes="Q has the shape of R with its own parameter a in place of t.",
        exceptional=True,
    ),
    CatalogEntry(
        name="H2.3/abc",
        R_template=_R_H23,
        Q_template=_grid("1 0 0 0 / a 1 0 0 / b 0 1 0 / c b a 1"),
        params=("x", "y", "z", "a", "b", "c"),
        anchor="exceptional list: R_H2.3, first lower triangular Q",
        notes="Unit lower triangular, so det Q = 1 and Q is invertible.",
        exceptional=True,
    ),
    CatalogEntry(
        name="H2.3/gh",
        R_template=_R_H23,
        Q_template=_grid("1 0 0 0 / -g 1 0 0 / g 0 1 0 / -g*h h -h 1"),
        params=("x", "y", "z", "g", "h"),
        anchor="exceptional list: R_H2.3, second lower triangular Q",
        notes="Unit lower triangular, so det Q = 1 and Q is invertible.",
        exceptional=True,
    ),
    CatalogEntry(
        name="diag/six-vertex-q",
        R_template=_R_DIAG,
        Q_template=_grid("q 0 0 0 / 0 1 0 0 / 0 q-t q*t 0 / 0 0 0 q"),
        params=("x", "y", "z", "q", "t"),
        nondegeneracy=("x", "y", "z", "q", "t"),
        anchor="diagonal R: six-vertex Q ending in q",
        diagonal_case=3,
    ),
    CatalogEntry(
        name="diag/six-vertex-qt",
        R_template=_R_DIAG,
        Q_template=_grid("q 0 0 0 / 0 1 0 0 / 0 q-t q*t 0 / 0 0 0 -t"),
        params=("x", "y", "z", "q", "t"),
        nondegeneracy=("x", "y", "z", "q", "t"),
        anchor="diagonal R: six-vertex Q ending in -t",
        diagonal_case=3,
    ),
    CatalogEntry(
        name="diag/diag-Q",
        R_template=_R_DIAG,
        Q_template=_grid("1 0 0 0 / 0 a 0 0 / 0 0 b 0 / 0 0 0 c"),
        params=("x", "y", "z", "a", "b", "c"),
        nondegeneracy=("x", "y", "z", "a", "b", "c"),
        anchor="diagonal R: diagonal Q",
        diagonal_case=3,
    ),
    CatalogEntry(
        name="signdiag/Q1",
        R_template=_R_DIAG,
        Q_template=_grid("1 0 0 1 / 0 1 1 0 / 0 1 -1 0 / -1 0 0 1"),
        params=("x", "y", "z"),
        constraints=_SIGN_CONSTRAINTS,
        strategies=_SIGNS,
        anchor="sign-diagonal R: Q = R_H0.2",
        diagonal_case=2,
    ),
    CatalogEntry(
        name="signdiag/Q2",
        R_template=_R_DIAG,
        Q_template=_grid("1+t 0 0 1 / 0 s 1 0 / 0 1 s 0 / 1 0 0 1-t"),
        params=("x", "y", "z", "t", "s"),
        constraints=_SIGN_CONSTRAINTS + ("s^2-1-t^2",),
        nondegeneracy=("t",),
        strategies=_SIGNS + (Strategy("pythagorean", ("t", "s")),),
        anchor="sign-diagonal R: eight-vertex Q with s^2 = 1 + t^2",
        notes=("No parametrization of s^2 = 1 + t^2 is given with the family; the rational "
               "one t = (m^2-1)/(2m), s = (m^2+1)/(2m) is a choice made here."),
        diagonal_case=2,
    ),
    CatalogEntry(
        name="signdiag/Q3",
        R_template=_R_DIAG,
        Q_template=_grid("1 0 0 0 / 0 1 0 0 / 0 1-t t 0 / 1 0 0 -t"),
        params=("x", "y", "z", "t"),
        constraints=_SIGN_CONSTRAINTS,
        nondegeneracy=("t",),
        strategies=_SIGNS,
        anchor="sign-diagonal R: H1.2-type Q",
        diagonal_case=2,
    ),
    CatalogEntry(
        name="signdiag/Q4",
        R_template=_R_DIAG,
        Q_template=_grid("1 0 0 0 / 0 -1 0 0 / 0 0 -1 0 / 1 0 0 1"),
        params=("x", "y", "z"),
        constraints=_SIGN_CONSTRAINTS,
        strategies=_SIGNS,
        anchor="sign-diagonal R: diag(1,-1,-1,1) plus corner",
        diagonal_case=2,
    ),
    CatalogEntry(
        name="signdiag/Q5",
        R_template=_R_DIAG,
        Q_template=_grid("0 0 0 1 / 0 0 t 0 / 0 t 0 0 / 1 0 0 0"),
        params=("x", "y", "z", "t"),
        constraints=_SIGN_CONSTRAINTS,
        nondegeneracy=("t",),
        strategies=_SIGNS,
        anchor="sign-diagonal R: R_H1.4-shaped Q",
        diagonal_case=2,
    ),
    CatalogEntry(
        name="signdiag/Q6",
        R_template=_R_DIAG,
        Q_template=_grid("a 0 0 1 / 0 b 1 0 / 0 1 b 0 / 1 0 0 a"),
        params=("x", "y", "z", "a", "b"),
        constraints=_SIGN_CONSTRAINTS + ("b^2-a^2",),
        nondegeneracy=("a^2-1",),
        strategies=_SIGNS + (Strategy("plusminus", ("b",), ("a",)),),
        anchor="sign-diagonal R: eight-vertex Q with b^2 = a^2",
        notes=("Cross-reference: the family a*I-type Q with entries a, +-a, x (x, a nonzero) "
               "found for sign-diagonal R is plausibly this family after scaling x to 1; "
               "the correspondence is not verified here."),
        diagonal_case=2,
    ),
)

# Secondary cross-reference, not normative: eight-vertex family found while
# restricting to (anti)diagonal symmetries.  sign is +1 or -1.
EIGHT_VERTEX_CROSSREF = {
    "template": _grid("a 0 0 x / 0 sign*a x 0 / 0 x sign*a 0 / x 0 0 a"),
    "params": ("a", "x", "sign"),
    "nondegeneracy": ("a", "x"),
    "linked_entry": "signdiag/Q6",
    "mapping_verified": False,
}


def catalog_entries() -> list[CatalogEntry]:
    return list(_ENTRIES)


def get_entry(name: str) -> CatalogEntry:
    for e in _ENTRIES:
        if e.name == name:
            return e
    raise KeyError(name)


def eight_vertex_crossref(a, x, sign: int, field=QQ) -> Matrix:
    b = {"a": a, "x": x, "sign": sign}
    return Matrix.parse(EIGHT_VERTEX_CROSSREF["template"], field, b)


# ---------------------------------------------------------------------------
# instantiation

def random_rational(rng: random.Random) -> Fraction:
    """Numerator and denominator uniform on [-9, 9] minus zero."""
    choices = [k for k in range(-9, 10) if k]
    return Fraction(rng.choice(choices), rng.choice(choices))


def _apply_strategy(s: Strategy, binding: dict, rng: random.Random):
    if s.kind == "free":
        binding[s.targets[0]] = random_rational(rng)
    elif s.kind == "sign":
        binding[s.targets[0]] = Fraction(rng.choice((1, -1)))
    elif s.kind == "pythagorean":
        m = random_rational(rng)
        t, u = s.targets
        binding[t] = (m * m - 1) / (2 * m)
        binding[u] = (m * m + 1) / (2 * m)
    elif s.kind == "plusminus":
        binding[s.targets[0]] = rng.choice((1, -1)) * binding[s.sources[0]]
    else:
        raise InstantiationError(f"unsupported strategy {s.kind!r}")


def _value(expr: str, binding) -> Fraction:
    return parse_scalar(expr, QQ, binding)


def check_binding(entry: CatalogEntry, binding: dict) -> bool:
    """All constraints vanish and all nondegeneracy expressions are nonzero."""
    if any(_value(c, binding) != 0 for c in entry.constraints):
        return False
    return all(_value(c, binding) != 0 for c in entry.nondegeneracy)


def build_pair(entry: CatalogEntry, binding: dict, field=QQ) -> YBPair:
    R = Matrix.parse(entry.R_template, field, binding)
    Q = Matrix.parse(entry.Q_template, field, binding)
    return YBPair(R, Q, 2)


def instantiate(entry: CatalogEntry, seed: int, budget: int = 1000):
    """Exact rational instance of ``entry`` that satisfies every constraint.

    Returns ``(pair, binding)``.  Draws are rejected when a nondegeneracy
    condition fails or R or Q is singular.
    """
    rng = random.Random(f"{entry.name}/{seed}")
    for _ in range(budget):
        binding: dict = {}
        for s in entry.ordered_strategies():
            _apply_strategy(s, binding, rng)
        if not check_binding(entry, binding):
            continue
        pair = build_pair(entry, binding)
        if not determinant(pair.R) or not determinant(pair.Q):
            continue
        return pair, binding
    raise InstantiationError(f"{entry.name}: no admissible binding in {budget} draws")


def symbolic_instances(entry: CatalogEntry) -> list[YBPair]:
    """The family over Q(parameters), one pair per discrete branch.

    Sign and plus-minus strategies are expanded into all branches; the
    Pythagorean pair is replaced by its rational parametrization in a fresh
    symbol, so every branch is an identity over a purely transcendental field.
    """
    symbols: list[str] = []
    discrete: list[tuple] = []
    for s in entry.ordered_strategies():
        if s.kind == "free":
            symbols.append(s.targets[0])
        elif s.kind == "pythagorean":
            symbols.append(f"m_{s.targets[0]}")
        elif s.kind in ("sign", "plusminus"):
            discrete.append(s)
        else:
            raise InstantiationError(f"unsupported strategy {s.kind!r}")
    F = FunctionField(symbols)
    pairs = []
    for signs in itertools.product((1, -1), repeat=len(discrete)):
        choice = dict(zip(discrete, signs))
        binding: dict = {}
        for s in entry.ordered_strategies():
            if s.kind == "free":
                binding[s.targets[0]] = F.var(s.targets[0])
            elif s.kind == "pythagorean":
                m = F.var(f"m_{s.targets[0]}")
                t, u = s.targets
                binding[t] = (m * m - 1) / (2 * m)
                binding[u] = (m * m + 1) / (2 * m)
            elif s.kind == "sign":
                binding[s.targets[0]] = F(choice[s])
            else:
                binding[s.targets[0]] = binding[s.sources[0]] * choice[s]
        pairs.append(build_pair(entry, binding, F))
    return pairs


def builtin_triples(R: Matrix, d: int = 2) -> list[YBPair]:
    """(R, P), (R, R), (R, P R^-1 P) for an invertible YBE solution R."""
    if not ybe_residual(R, d).is_zero():
        raise ValueError("R does not solve the Yang-Baxter equation")
    if not determinant(R):
        raise SingularMatrixError("R is singular")
    P = permutation_P(d, R.field)
    return [YBPair(R, P, d), YBPair(R, R, d), YBPair(R, P @ inverse(R) @ P, d)]


def scalar_R_rule(Q: Matrix, scale=1, d: int = 2) -> YBPair:
    """R proportional to the identity pairs with any YBE solution Q."""
    if not ybe_residual(Q, d).is_zero():
        raise ValueError("Q does not solve the Yang-Baxter equation")
    return YBPair(Matrix.identity(d * d, Q.field).scale(scale), Q, d)
