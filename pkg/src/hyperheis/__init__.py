"""Exact computations in hyperelliptic Heisenberg algebras and their phi-Verma modules."""

from .exact_core import LaurentPoly, ParamScalar, specialize
from .kahler import CurveSpec, OmegaClass, OneForm, RingElem, cocycle, differential, reduce, ring_mul
from .pq_tables import PQTable
from .algebra import FormChoice, GElem, HElem, bracket_canonical, bracket_paper, h_bracket
from .verma import Gen, HighestWeightData, ModuleVector, PBWMonomial, PhiSpec, VermaModule
from .irreducibility import criterion, descent_certificate, probe_irreducibility, verify_proper_submodule

__version__ = "0.1.0"
