"""Boundary homology, Chern squares and Gompf's d3 invariant.

All presentations are read as Stein-type handlebodies: every 2-handle is a
contact (-1)-surgery, so ``d3 = (c1^2 - 3 sigma - 2 chi) / 4`` holds with no
correction term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .exactalg import NoSolution, determinant, invariant_factors, signature, solve_rational
from .surgery import SurgeryPresentation, legendrian_unknot_presentation, valid_unknots

__all__ = [
    "NonTorsionChern",
    "MissingChern",
    "NotHalfInteger",
    "BoundaryHomology",
    "InvariantReport",
    "boundary_homology",
    "chern_square",
    "d3",
    "gompf_d3",
    "hopf_from_d3",
    "realized_d3_values",
    "full_report",
    "format_rational",
]


class NonTorsionChern(ValueError):
    """c1 does not restrict to a torsion class on the boundary."""


class MissingChern(ValueError):
    pass


class NotHalfInteger(ValueError):
    pass


def format_rational(q: Fraction | int | None) -> str | None:
    """``"p/q"``, or ``"p"`` when the denominator is one."""
    if q is None:
        return None
    return str(Fraction(q))


@dataclass(frozen=True)
class BoundaryHomology:
    """H1 of the boundary 3-manifold as ``Z^free_rank + sum Z/t``."""

    torsion: tuple[int, ...]
    free_rank: int

    @property
    def factors(self) -> list[int]:
        """Torsion orders followed by one ``0`` per free summand."""
        return list(self.torsion) + [0] * self.free_rank

    @property
    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    def __len__(self):
        return len(self.torsion) + self.free_rank

    def __str__(self):
        parts = [f"Z/{t}" for t in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def boundary_homology(pres: SurgeryPresentation) -> BoundaryHomology:
    """Cokernel of the linking matrix, read off its Smith normal form."""
    d = invariant_factors(pres.Q)
    return BoundaryHomology(
        torsion=tuple(x for x in d if x > 1),
        free_rank=sum(1 for x in d if x == 0),
    )


def _dual_class(pres: SurgeryPresentation) -> list[Fraction]:
    if pres.chern is None:
        if pres.handles == 0:
            return []
        raise MissingChern("presentation has no Chern vector")
    try:
        return solve_rational(pres.Q, pres.chern)
    except NoSolution:
        raise NonTorsionChern(
            f"Q a = c has no rational solution for c = {list(pres.chern)}: "
            "c1 is not torsion on the boundary"
        ) from None


def chern_square(pres: SurgeryPresentation) -> Fraction:
    """``c1^2 = c . a`` where ``Q a = c``.

    When ``Q`` is singular the value does not depend on which rational
    solution ``a`` is used, since any two differ by a kernel vector ``k``
    and ``c . k = a . Q k = 0``.
    """
    a = _dual_class(pres)
    c = pres.chern or ()
    return sum((Fraction(ci) * ai for ci, ai in zip(c, a)), Fraction(0))


def gompf_d3(c1sq, sigma: int, euler: int) -> Fraction:
    return (Fraction(c1sq) - 3 * sigma - 2 * euler) / 4


def d3(pres: SurgeryPresentation) -> Fraction:
    return gompf_d3(chern_square(pres), signature(pres.Q), pres.euler)


def hopf_from_d3(d) -> int:
    """Hopf invariant ``h`` with ``d3 = -h - 1/2``."""
    h = -Fraction(d) - Fraction(1, 2)
    if h.denominator != 1:
        raise NotHalfInteger(f"d3 = {format_rational(d)} is not in Z + 1/2")
    return h.numerator


def realized_d3_values(tb_min: int) -> list[Fraction]:
    """Sorted distinct d3 values over all Legendrian unknots with ``tb >= tb_min``."""
    if tb_min >= 0:
        raise ValueError(f"tb_min must be negative, got {tb_min}")
    return sorted(
        {d3(legendrian_unknot_presentation(inv.tb, inv.rot)) for inv in valid_unknots(tb_min)}
    )


@dataclass(frozen=True)
class InvariantReport:
    euler: int
    sigma: int
    det: int
    h1: BoundaryHomology
    chern_square: Fraction | None = None
    d3: Fraction | None = None
    hopf: int | None = None
    undefined_reason: str | None = None
    non_torsion: bool = False

    @property
    def h1_factors(self) -> list[int]:
        return self.h1.factors

    def to_dict(self) -> dict[str, Any]:
        return {
            "euler": self.euler,
            "sigma": self.sigma,
            "det": self.det,
            "h1_torsion": list(self.h1.torsion),
            "h1_free_rank": self.h1.free_rank,
            "chern_square": format_rational(self.chern_square),
            "d3": format_rational(self.d3),
            "hopf": self.hopf,
            "undefined_reason": self.undefined_reason,
        }

    def to_text(self) -> str:
        def show(v):
            return "undefined" if v is None else str(v)

        lines = [
            f"euler         {self.euler}",
            f"sigma         {self.sigma}",
            f"det           {self.det}",
            f"H1(boundary)  {self.h1}",
            f"c1^2          {show(self.chern_square)}",
            f"d3            {show(self.d3)}",
            f"hopf          {show(self.hopf)}",
        ]
        if self.undefined_reason:
            lines.append(f"note          {self.undefined_reason}")
        return "\n".join(lines)


def full_report(pres: SurgeryPresentation) -> InvariantReport:
    """Every invariant of the handlebody and its boundary.

    Chern-dependent fields are left ``None`` with ``undefined_reason`` set
    when the Chern vector is missing or c1 is not torsion on the boundary.
    """
    sigma = signature(pres.Q)
    h1 = boundary_homology(pres)
    base = dict(euler=pres.euler, sigma=sigma, det=determinant(pres.Q), h1=h1)
    try:
        c2 = chern_square(pres)
    except NonTorsionChern as exc:
        return InvariantReport(**base, undefined_reason=str(exc), non_torsion=True)
    except MissingChern as exc:
        return InvariantReport(**base, undefined_reason=str(exc))
    d = gompf_d3(c2, sigma, pres.euler)
    hopf = None
    if h1.is_trivial and (d + Fraction(1, 2)).denominator == 1:
        hopf = hopf_from_d3(d)
    return InvariantReport(**base, chern_square=c2, d3=d, hopf=hopf)
