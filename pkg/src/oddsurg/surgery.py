"""Legendrian unknot bookkeeping and 2-handle surgery presentations.

A Legendrian unknot in the standard contact 3-sphere is determined up to
Legendrian isotopy by its Thurston-Bennequin invariant ``tb`` and rotation
number ``rot``, so it is modelled here as exactly that pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exactalg import IntMatrix, NotSymmetricError, ShapeError

__all__ = [
    "InvalidInvariants",
    "LegendrianInvariants",
    "Verdict",
    "SurgeryPresentation",
    "rotation_range",
    "valid_unknots",
    "validate_unknot",
    "stabilize",
    "bennequin_slack",
    "legendrian_unknot_presentation",
    "framed_spine_presentation",
]


class InvalidInvariants(ValueError):
    pass


@dataclass(frozen=True)
class LegendrianInvariants:
    tb: int
    rot: int

    def __str__(self):
        return f"(tb={self.tb}, rot={self.rot})"


@dataclass(frozen=True)
class Verdict:
    valid: bool
    reason: str | None = None

    def __bool__(self):
        return self.valid


def rotation_range(tb: int) -> list[int]:
    """Realizable rotation numbers ``tb+1, tb+3, ..., -tb-1`` (empty if tb >= 0)."""
    if tb >= 0:
        return []
    return list(range(tb + 1, -tb, 2))


def valid_unknots(tb_min: int) -> list[LegendrianInvariants]:
    """Every realizable ``(tb, rot)`` with ``tb_min <= tb <= -1``.

    Ordered by decreasing tb, then increasing rot.
    """
    return [
        LegendrianInvariants(n, r)
        for n in range(-1, tb_min - 1, -1)
        for r in rotation_range(n)
    ]


def validate_unknot(inv: LegendrianInvariants) -> Verdict:
    tb, rot = inv.tb, inv.rot
    if tb >= 0:
        return Verdict(False, f"tb must be negative (tb < 0), got tb={tb}")
    if (rot - tb - 1) % 2:
        return Verdict(
            False,
            f"rot must have the parity of tb+1; allowed values for tb={tb} are {rotation_range(tb)}",
        )
    if abs(rot) > -tb - 1:
        return Verdict(
            False,
            f"|rot| must be at most -tb-1={-tb - 1}; allowed values for tb={tb} are {rotation_range(tb)}",
        )
    return Verdict(True)


def _check(inv: LegendrianInvariants) -> None:
    verdict = validate_unknot(inv)
    if not verdict:
        raise InvalidInvariants(f"{inv}: {verdict.reason}")


def stabilize(inv: LegendrianInvariants, sign) -> LegendrianInvariants:
    """Add one zigzag: ``(tb, rot) -> (tb - 1, rot +/- 1)``.

    ``sign`` is ``"+"``/``"-"`` or ``+1``/``-1``.
    """
    _check(inv)
    if sign in ("+", 1):
        step = 1
    elif sign in ("-", -1):
        step = -1
    else:
        raise ValueError(f"stabilization sign must be '+' or '-', got {sign!r}")
    return LegendrianInvariants(inv.tb - 1, inv.rot + step)


def bennequin_slack(inv: LegendrianInvariants) -> int:
    """How far ``tb + |rot|`` sits below the unknot bound ``-1``."""
    return -1 - (inv.tb + abs(inv.rot))


@dataclass(frozen=True)
class SurgeryPresentation:
    """Linking matrix of a 2-handlebody on the 4-ball, with optional Chern data.

    ``Q`` carries smooth framings on the diagonal and linking numbers off
    it; ``chern`` holds the evaluations of c1 on the handle spheres.
    """

    Q: IntMatrix
    chern: tuple[int, ...] | None = None
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if not isinstance(self.Q, IntMatrix):
            object.__setattr__(self, "Q", IntMatrix.of(self.Q))
        if not self.Q.is_square:
            raise ShapeError(f"linking matrix must be square, got {self.Q.rows}x{self.Q.cols}")
        if not self.Q.symmetric:
            raise NotSymmetricError("linking matrix must be symmetric")
        if self.chern is not None:
            object.__setattr__(self, "chern", tuple(int(c) for c in self.chern))
            if len(self.chern) != self.handles:
                raise ShapeError(
                    f"chern vector has length {len(self.chern)}, expected {self.handles}"
                )
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
            if len(self.labels) != self.handles:
                raise ShapeError(
                    f"labels has length {len(self.labels)}, expected {self.handles}"
                )

    @classmethod
    def empty(cls) -> "SurgeryPresentation":
        """The 4-ball itself: no handles, boundary the standard 3-sphere."""
        return cls(IntMatrix.of([]), chern=())

    @classmethod
    def from_lists(
        cls,
        matrix: Sequence[Sequence[int]],
        chern: Sequence[int] | None = None,
        labels: Sequence[str] | None = None,
    ) -> "SurgeryPresentation":
        Q = IntMatrix.of(matrix, cols=len(matrix[0]) if matrix else 0)
        return cls(
            Q,
            None if chern is None else tuple(chern),
            None if labels is None else tuple(labels),
        )

    @property
    def handles(self) -> int:
        return self.Q.rows

    @property
    def euler(self) -> int:
        # one 0-handle plus one 2-handle per row
        return 1 + self.handles


def legendrian_unknot_presentation(n: int, r: int) -> SurgeryPresentation:
    """Handlebody for contact (-1)-surgery on the unknot ``L(n, r)`` inside S1xS2.

    The first handle is the 0-framed unknot giving D2xS2; the second is the
    Legendrian, whose sphere has self-intersection ``tb - 2`` and meets the
    first sphere once.  c1 evaluates to 2 on the first sphere and ``rot - 1``
    on the second.
    """
    inv = LegendrianInvariants(n, r)
    _check(inv)
    return SurgeryPresentation(
        IntMatrix.of([[0, 1], [1, n - 2]]),
        chern=(2, r - 1),
        labels=("D2xS2", f"L(tb={n},rot={r})"),
    )


def framed_spine_presentation(k: int) -> SurgeryPresentation:
    """Integral framing-``k`` surgery on ``S1 x {*}`` in S1xS2, homologically."""
    return SurgeryPresentation(
        IntMatrix.of([[0, 1], [1, k]]),
        labels=("D2xS2", f"spine(k={k})"),
    )
