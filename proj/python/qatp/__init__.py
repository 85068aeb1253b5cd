"""Resolution, Wu's method and polynomial identity testing with simulated quantum backends."""

import json

from ._qatp import (
    BudgetError,
    CapacityError,
    DegenerateSystemError,
    ParseError,
    Polynomial,
    PreconditionError,
    evaluate_arith,
    fixed_point_length,
    fixed_point_success,
    kravchuk,
    prem,
    pseudo_step,
)
from . import _qatp


def _run(command, text="", filename="", **opts):
    return json.loads(_qatp._run(command, text, filename, opts))


def wu_prove(geo_text, concl_index=0):
    """Classical Wu proof of one conclusion, as a dict."""
    return json.loads(_qatp.wu_prove(geo_text, concl_index))


def prove_prop(text, filename="input.prop", **opts):
    return _run("prove-prop", text, filename, **opts)


def prove_fol(text, **opts):
    return _run("prove-fol", text, **opts)


def prove_geo(text, **opts):
    return _run("prove-geo", text, **opts)


def pit(text, **opts):
    return _run("pit", text, **opts)


def emit_circuit(text, **opts):
    return _run("emit-circuit", text, **opts)


def bench_queries(**opts):
    return _run("bench-queries", **opts)


__all__ = [
    "BudgetError",
    "CapacityError",
    "DegenerateSystemError",
    "ParseError",
    "Polynomial",
    "PreconditionError",
    "bench_queries",
    "emit_circuit",
    "evaluate_arith",
    "fixed_point_length",
    "fixed_point_success",
    "kravchuk",
    "pit",
    "prem",
    "prove_fol",
    "prove_geo",
    "prove_prop",
    "pseudo_step",
    "wu_prove",
]
