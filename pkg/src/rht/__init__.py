"""Exact computations in rational homotopy theory of nilmanifolds and
Sasakian basic rings: Chevalley-Eilenberg cohomology, 1-minimal models,
1-formality, Massey products, Malcev towers and mixed Hodge data."""

from .cohomology import (LieAlgebra, betti_numbers, chevalley_eilenberg, cohomology, cohomology_dga, cup_product,
                         euler_characteristic, poincare_check)
from .dsl import format_source, load, lower, parse
from .errors import (FiltrationNotDStable, HypothesisViolation, InvariantViolation, JacobiViolation, NonConnected,
                     NotBigradeable, NotDefined, NotMHS, NotNilpotent, NotOneFormal, RhtError, TruncationError,
                     ValidationFailed)
from .formality import (heisenberg_check, massey_scan, massey_triple, one_formal, quadratic_presentation,
                        sasakian_obstruction, weight_count_check)
from .gca import FDGA, DGAMorphism, FreeCDGA
from .hodge import (Bicomplex, Bigrading, Filtration, bigraded_tower, bott_chern, ddbar_check, deligne_splitting,
                    filtrations_from_bigrading, mhd_check, spectral_E1)
from .malcev import dualize, invariants, malcev_summary, presented_level_dims
from .minimal import Tower, build_tower, check_tower
from .sasaki import (BasicRing, build_model, heisenberg_ring, hodge_split_check, sasaki_pipeline,
                     surface_product_ring, validate_basic_ring)

__version__ = "0.1.0"
