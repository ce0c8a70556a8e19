"""Open book structure workbench.

Thin convenience layer over the compiled core: scenario runs return the
parsed report, everything else passes through unchanged.
"""

import json as _json

from ._openbook import (
    PolyError,
    chart_check,
    condition_verdicts,
    invert_fiber_chi,
    list_builtins,
    morse_chi_boundary,
    morse_chi_closed,
    normalized_gradient_residual,
    omega,
    predict_link_chi,
    run_builtin,
    run_scenario,
    verify_identities,
)

__all__ = [
    "PolyError",
    "chart_check",
    "condition_verdicts",
    "invert_fiber_chi",
    "list_builtins",
    "morse_chi_boundary",
    "morse_chi_closed",
    "normalized_gradient_residual",
    "omega",
    "predict_link_chi",
    "report",
    "run_builtin",
    "run_scenario",
    "verify_identities",
]


def report(name_or_json, seed=None, n_starts=None):
    """Run a builtin (by name) or a scenario JSON string; return the parsed
    report dict with report_txt and solutions_csv attached under "_txt" and
    "_csv"."""
    runner = run_builtin if not name_or_json.lstrip().startswith("{") else run_scenario
    r = runner(name_or_json, seed=seed, n_starts=n_starts)
    out = _json.loads(r["report_json"])
    out["_txt"] = r["report_txt"]
    out["_csv"] = r["solutions_csv"]
    return out
