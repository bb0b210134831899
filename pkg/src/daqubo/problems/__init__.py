"""Constrained problems with exact QUBO encodings.

The generic helpers dispatch on the instance type so harness code can treat
every family alike. Infeasibility is always returned as an
:class:`Infeasible` value, never raised.
"""

from __future__ import annotations

import numpy as np

from . import qap, qcpp, selcol
from ._report import Infeasible, Violation
from .qap import QapAssignment, QapInstance, decode_qap, encode_qap, qap_objective
from .qcpp import QcppInstance, QcppSolution, decode_qcpp, encode_qcpp, qcpp_objective
from .selcol import SelColInstance, SelColSolution, decode_selcol, encode_selcol, selcol_objective

_MODULES = {QapInstance: qap, QcppInstance: qcpp, SelColInstance: selcol}
FAMILIES = {QapInstance: "qap", QcppInstance: "qcpp", SelColInstance: "selcol"}


def _module(inst):
    try:
        return _MODULES[type(inst)]
    except KeyError:
        raise TypeError(f"not a problem instance: {type(inst).__name__}") from None


def family(inst) -> str:
    _module(inst)
    return FAMILIES[type(inst)]


def default_lambda(inst) -> float:
    if isinstance(inst, SelColInstance):
        return selcol.default_lambda(inst)
    return _module(inst).DEFAULT_LAMBDA


def encode(inst, lam: float | None = None):
    lam = default_lambda(inst) if lam is None else lam
    return {qap: encode_qap, qcpp: encode_qcpp, selcol: encode_selcol}[_module(inst)](inst, lam)


def decode(inst, x):
    return {qap: decode_qap, qcpp: decode_qcpp, selcol: decode_selcol}[_module(inst)](inst, x)


def objective(inst, solution) -> float:
    return float({qap: qap_objective, qcpp: qcpp_objective, selcol: selcol_objective}[_module(inst)](inst, solution))


def encode_solution(inst, solution) -> np.ndarray:
    return _module(inst).encode_state(inst, solution)


def check_feasible(inst, solution) -> tuple[bool, list[Violation]]:
    """Check a decoded solution, or a raw binary state, against the original constraints."""
    mod = _module(inst)
    if isinstance(solution, Infeasible):
        return False, list(solution.violations)
    if isinstance(solution, (np.ndarray, list)):
        decoded = decode(inst, solution)
        return (True, []) if not isinstance(decoded, Infeasible) else (False, list(decoded.violations))
    if mod is qap:
        violations = qap.assignment_violations(inst, solution)
    elif mod is qcpp:
        violations = qcpp.selection_violations(inst, solution)
    else:
        violations = selcol.solution_violations(inst, solution)
    return not violations, violations


__all__ = [
    "Infeasible",
    "Violation",
    "QapInstance",
    "QapAssignment",
    "QcppInstance",
    "QcppSolution",
    "SelColInstance",
    "SelColSolution",
    "encode_qap",
    "decode_qap",
    "qap_objective",
    "encode_qcpp",
    "decode_qcpp",
    "qcpp_objective",
    "encode_selcol",
    "decode_selcol",
    "selcol_objective",
    "encode",
    "decode",
    "objective",
    "encode_solution",
    "check_feasible",
    "default_lambda",
    "family",
]
