"""Residuals of the Yang-Baxter equation, the four-equation system and its extension."""

from __future__ import annotations

from dataclasses import dataclass

from .matrix import Matrix, SingularMatrixError, determinant, embed, inverse, permutation_P

EQUATION_LABELS = {
    "rrr": "Q12 Q13 Q23 = Q23 Q13 Q12",
    "zzz": "R12 R13 R23 = R23 R13 R12",
    "rzz": "Q12 R13 R23 = R23 R13 Q12",
    "zzr": "R12 R13 Q23 = Q23 R13 R12",
}


@dataclass(frozen=True)
class YBPair:
    R: Matrix
    Q: Matrix
    d: int = 2

    def __post_init__(self):
        n = self.d * self.d
        for name, M in (("R", self.R), ("Q", self.Q)):
            if M.shape != (n, n):
                raise ValueError(f"{name} must be {n}x{n}, got {M.shape}")
        if self.R.field != self.Q.field:
            raise ValueError(f"R and Q over different fields: {self.R.field} vs {self.Q.field}")

    @property
    def field(self):
        return self.R.field


@dataclass(frozen=True)
class SystemResiduals:
    rrr: Matrix
    zzz: Matrix
    rzz: Matrix
    zzr: Matrix

    def items(self):
        return [("rrr", self.rrr), ("zzz", self.zzz), ("rzz", self.rzz), ("zzr", self.zzr)]

    def all_zero(self) -> bool:
        return all(M.is_zero() for _, M in self.items())


@dataclass(frozen=True)
class SolutionReport:
    solves: bool
    invertible_R: bool
    invertible_Q: bool
    residuals: SystemResiduals

    def equation_status(self) -> dict:
        return {name: M.is_zero() for name, M in self.residuals.items()}


def triple_residual(A: Matrix, B: Matrix, C: Matrix, d: int) -> Matrix:
    """A12 B13 C23 - C23 B13 A12."""
    a12, b13, c23 = embed(A, (1, 2), d), embed(B, (1, 3), d), embed(C, (2, 3), d)
    return a12 @ b13 @ c23 - c23 @ b13 @ a12


def ybe_residual(R: Matrix, d: int = 2) -> Matrix:
    return triple_residual(R, R, R, d)


def system_residuals(pair: YBPair) -> SystemResiduals:
    R, Q, d = pair.R, pair.Q, pair.d
    return SystemResiduals(
        rrr=triple_residual(Q, Q, Q, d),
        zzz=triple_residual(R, R, R, d),
        rzz=triple_residual(Q, R, R, d),
        zzr=triple_residual(R, R, Q, d),
    )


def is_solution(pair: YBPair) -> SolutionReport:
    res = system_residuals(pair)
    return SolutionReport(
        solves=res.all_zero(),
        invertible_R=bool(determinant(pair.R)),
        invertible_Q=bool(determinant(pair.Q)),
        residuals=res,
    )


def qbar(pair: YBPair) -> Matrix:
    """P R P Q R^-1; raises SingularMatrixError for singular R."""
    R, Q = pair.R, pair.Q
    if not determinant(R):
        raise SingularMatrixError("qbar needs an invertible R")
    P = permutation_P(pair.d, R.field)
    return P @ R @ P @ Q @ inverse(R)


def extended_residuals(Q: Matrix, Qbar: Matrix, R: Matrix, d: int = 2,
                       reorder: bool = False) -> list[Matrix]:
    """Residuals of YBE(Q), YBE(Qbar), Qbar12 R13 R23 = R23 R13 Qbar12 and
    R12 R13 Q23 = Q23 R13 R12, in that order.

    With ``reorder`` the third equation is Qbar12 R23 R13 = R13 R23 Qbar12,
    which holds for Qbar = qbar(pair) whenever the pair solves the system and
    R is invertible.  The default ordering can fail, e.g. for Q = R when
    P R P is not an admissible Q.
    """
    if reorder:
        qb, r13, r23 = embed(Qbar, (1, 2), d), embed(R, (1, 3), d), embed(R, (2, 3), d)
        third = qb @ r23 @ r13 - r13 @ r23 @ qb
    else:
        third = triple_residual(Qbar, R, R, d)
    return [
        ybe_residual(Q, d),
        ybe_residual(Qbar, d),
        third,
        triple_residual(R, R, Q, d),
    ]
