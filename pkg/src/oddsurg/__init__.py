"""Invariants of odd-symplectic forms on S3 built by contact surgery.

Exact linear algebra, Legendrian unknot bookkeeping, Gompf's d3 invariant
for 2-handlebodies, and a tracer for the perturbed characteristic flow on
S1 x S2.
"""

from .d3calc import (
    InvariantReport,
    NonTorsionChern,
    boundary_homology,
    chern_square,
    d3,
    full_report,
    hopf_from_d3,
    realized_d3_values,
)
from .exactalg import IntMatrix, NoSolution, determinant, signature, smith_normal_form, solve_rational
from .surgery import (
    InvalidInvariants,
    LegendrianInvariants,
    SurgeryPresentation,
    bennequin_slack,
    framed_spine_presentation,
    legendrian_unknot_presentation,
    stabilize,
    validate_unknot,
)

__version__ = "0.1.0"
