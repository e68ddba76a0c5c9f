"""Exact identifiability analysis for isolated loop networks."""

from .emp import Emp, EmpClass, Verdict, counts_closed_form, enumerate_emps, necessary_check, nsc_check, table
from .exactalg import DualRat, Poly, RationalFunction, dual_lift, ffge_rank, poly_gcd, rf_arith, rf_eval, rf_normalize
from .loopnet import (
    IoMap,
    LoopNetwork,
    closed_loop_entry,
    io_map,
    loop_product,
    path_product,
    random_network,
    sensitivity,
)
from .recover import RecoveryPlan, plan, recover_edges, verify_roundtrip
from .ambiguity import indistinguishable_family, verify_counterexample
from .oracle import crosscheck, jacobian, rank_test, scalar_io_map

__version__ = "0.1.0"

__all__ = [
    "DualRat",
    "Emp",
    "EmpClass",
    "IoMap",
    "LoopNetwork",
    "Poly",
    "RationalFunction",
    "RecoveryPlan",
    "Verdict",
    "closed_loop_entry",
    "counts_closed_form",
    "crosscheck",
    "dual_lift",
    "enumerate_emps",
    "ffge_rank",
    "indistinguishable_family",
    "io_map",
    "jacobian",
    "loop_product",
    "necessary_check",
    "nsc_check",
    "path_product",
    "plan",
    "poly_gcd",
    "random_network",
    "rank_test",
    "recover_edges",
    "rf_arith",
    "rf_eval",
    "rf_normalize",
    "scalar_io_map",
    "sensitivity",
    "table",
    "verify_counterexample",
    "verify_roundtrip",
]
