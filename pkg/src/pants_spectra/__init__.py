"""Length spectra of hyperbolic pairs of pants and checks of arc/curve comparison bounds."""
from .collar import C0_PRIME, EPS0_PRIME, EPS_STAR, CollarSpec, eta, inner_boundary_offset
from .counterexample import HalvingFamily, divergence_table, growth_rate_check
from .decompose import Decomposition, decompose, decompose_loop, decompose_seam
from .errors import ConvergenceError, CuspError, DomainError
from .hyptrig import hexagon_side, hexagon_side_log_domain, pentagon_side
from .ledger import ConstantLedger, build_ledger
from .pants import (
    ArcClass, CurveClass, PantsMetric, arc_length, loop_arc_length, seam_length, spectrum,
)
from .verify import (
    CheckRecord, MetricPair, RatioReport, SweepConfig, check_diff_boundary, check_lemma_suite,
    check_same_boundary, check_theorem_key, check_theorem_main, check_thick_part,
    empirical_infimum_middle, evaluate_pair, ratio_sup_arcs, ratio_sup_curves, sweep,
)

__version__ = "0.1.0"
