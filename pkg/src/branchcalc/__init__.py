"""branchcalc: numerical branch-cut functional calculus at desk scale.

Contour quadrature over Laurent loops, sectorial contours and circles
drives three layers of machinery:

* matrix functional calculus -- sectorial spectral projections, branch-cut
  logarithms, and their cross-identities (:mod:`branchcalc.funcalc`);
* half-line boundary symbol-kernels of the flat model problems -- the
  singular-Green log kernels, their scaling/decay/parity checks, normal
  traces and discretized operator norms (:mod:`branchcalc.halfline`);
* resolvent-trace expansions with the basic zeta value and the residue of
  the log-realization (:mod:`branchcalc.zeta`);

plus two worked end-to-end systems (:mod:`branchcalc.dirac`,
:mod:`branchcalc.blockmodel`) and a CLI of reproduction experiments
(:mod:`branchcalc.cli`).
"""

from . import blockmodel, dirac, errors, funcalc, halfline, zeta
from .branches import CUT_MARGIN, SectorPair, arg_branch, log_branch, pow_branch
from .contours import (
    ArcLeg,
    Circle,
    Contour,
    LaurentLoop,
    QuadratureConfig,
    RadialLeg,
    Sectorial,
    build_contour,
    integrate,
)
from .eigoracle import EigenCluster, eig_oracle
from .funcalc import (
    CalculusReport,
    log_difference_projection,
    log_theta,
    loop_limit_closed_form,
    projection_eigoracle,
    sectorial_projection,
    truncated_loop_limit_check,
    verify_keyhole,
)
from .halfline import (
    HalfLineGrid,
    SymbolKernel,
    TangentialCovariable,
    decay_estimate_check,
    even_order_split_check,
    glog_kernel_closed,
    glog_kernel_quad,
    gpm_log_kernel,
    kernel_l2_opnorm,
    log_transform_symbol,
    quasihomogeneity_check,
    resolvent_sg_kernel,
    slog_sub,
    tr_n,
    transmission_parity_check,
)
from .linalg import lu_solve, matexp_oracle, opnorm2
from .zeta import (
    ModelRealization,
    TraceExpansionFit,
    basic_zeta_value,
    fit_trace_expansion,
    interval_dirichlet_model,
    residue_integrals,
    residue_log,
    resolvent_trace,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
