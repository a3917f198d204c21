"""JSON serialization of analysis reports plus a schema checker.

The report layout is documented in the README; ``validate_report`` is a
lightweight structural check used by the CLI tests (no external schema
library involved).  Serialization is deterministic for a fixed analysis
except for the ``timings`` blocks, which carry wall-clock measurements.
"""

from __future__ import annotations

import json
from typing import Optional

from . import __version__ as _pkg_version
from .simplicity import SimplicityReport, SubproblemResult


def _subproblem_to_dict(r: SubproblemResult) -> dict:
    out = {
        "objectives": None if r.subset is None else [int(i) for i in r.subset],
        "n_points": int(r.n_points),
        "status": r.status,
        "delta_max": float(r.delta_max),
        "band": None,
        "diameter": None,
        "delta_used": None if r.delta_used is None else float(r.delta_used),
        "s1": None,
        "s2": None,
        "timings": {k: round(v, 6) for k, v in r.timings.items()},
    }
    if r.band is not None:
        out["band"] = {
            "half_width": float(r.band.c),
            "alpha": float(r.band.alpha),
            "replicates": int(r.band.replicates),
            "seed": int(r.band.seed),
        }
    if r.estimate is not None:
        out["diameter"] = {
            "delta": float(r.estimate.delta),
            "max_birth": float(r.estimate.max_birth),
            "min_death": float(r.estimate.min_death),
            "consistent": bool(r.estimate.consistent),
            "overridden": bool(r.delta_overridden),
        }
    elif r.delta_used is not None:
        out["diameter"] = {
            "delta": float(r.delta_used),
            "max_birth": None,
            "min_death": None,
            "consistent": None,
            "overridden": True,
        }
    if r.s1 is not None:
        out["s1"] = {
            "delta": float(r.s1.delta_used),
            "betti": [int(b) for b in r.s1.betti],
            "violated": bool(r.s1.violated),
            "reasons": list(r.s1.reasons),
        }
    if r.s2 is not None:
        out["s2"] = {
            "violated": bool(r.s2.violated),
            "pairs_checked": int(r.s2.pairs_checked),
            "inconclusive_pairs": int(r.s2.inconclusive_pairs),
            "pairs_candidate": int(r.s2.pairs_candidate),
            "truncated": bool(r.s2.truncated),
            "degenerate_images": int(r.s2.degenerate_images),
            "pair_dim": r.s2.pair_dim,
            "witnesses": [
                {
                    "sigma": [int(v) for v in w.sigma],
                    "tau": [int(v) for v in w.tau],
                    "a": [float(x) for x in w.a],
                    "b": [float(x) for x in w.b],
                    "t_star": float(w.t_star),
                }
                for w in r.s2.witnesses
            ],
        }
    return out


def report_to_dict(report: SimplicityReport) -> dict:
    return {
        "tool": "paretotda",
        "version": _pkg_version,
        "config": report.config.to_dict(),
        "n_points": int(report.n_points),
        "n_vars": int(report.n_vars),
        "n_objectives": None
        if report.n_objectives is None
        else int(report.n_objectives),
        "subproblems": [
            _subproblem_to_dict(r) for r in report.results.values()
        ],
        "timings": {k: round(v, 6) for k, v in report.timings.items()},
    }


def report_to_json(report: SimplicityReport, indent: Optional[int] = 2) -> str:
    return json.dumps(report_to_dict(report), indent=indent, sort_keys=True)


_SUBPROBLEM_KEYS = {
    "objectives",
    "n_points",
    "status",
    "delta_max",
    "band",
    "diameter",
    "delta_used",
    "s1",
    "s2",
    "timings",
}
_TOP_KEYS = {
    "tool",
    "version",
    "config",
    "n_points",
    "n_vars",
    "n_objectives",
    "subproblems",
    "timings",
}


def validate_report(doc: dict) -> None:
    """Structural sanity check of a serialized report; raises on problems."""
    if set(doc) != _TOP_KEYS:
        raise ValueError(f"report keys mismatch: {sorted(set(doc) ^ _TOP_KEYS)}")
    if not isinstance(doc["subproblems"], list) or not doc["subproblems"]:
        raise ValueError("report has no subproblem entries")
    for sub in doc["subproblems"]:
        if set(sub) != _SUBPROBLEM_KEYS:
            raise ValueError(
                f"subproblem keys mismatch: {sorted(set(sub) ^ _SUBPROBLEM_KEYS)}"
            )
        if sub["status"] == "ok":
            if sub["s1"] is None:
                raise ValueError("ok subproblem lacks an s1 verdict")
            betti = sub["s1"]["betti"]
            violated = betti[0] != 1 or any(b != 0 for b in betti[1:])
            if violated != sub["s1"]["violated"]:
                raise ValueError("s1 verdict inconsistent with its betti vector")
        if sub["s2"] is not None:
            if sub["s2"]["violated"] != bool(sub["s2"]["witnesses"]):
                raise ValueError("s2 verdict inconsistent with witness list")
