"""Report assembly: JSON-safe case records and byte-stable serialization."""

from __future__ import annotations

import numpy as np

from .finalg import Subgroup, canonical_dumps


def jsonable(obj):
    """Recursively convert numpy scalars/arrays, tuples and subgroups to plain JSON values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Subgroup):
        return list(obj.elements)
    return obj


def case(case_id: str, ok: bool, witness=None) -> dict:
    return {"case_id": case_id, "verdict": "pass" if ok else "fail", "witness": jsonable(witness)}


def summarize(cases: list[dict]) -> dict:
    n_pass = sum(c["verdict"] == "pass" for c in cases)
    return {"total": len(cases), "pass": n_pass, "fail": len(cases) - n_pass}


def suite_block(cases: list[dict]) -> dict:
    return {"counts": summarize(cases), "cases": [jsonable(c) for c in cases]}


def dumps(report: dict) -> str:
    return canonical_dumps(jsonable(report)) + "\n"


def to_text(report: dict) -> str:
    lines = []
    for name, block in report.get("suites", {}).items():
        c = block["counts"]
        lines.append(f"[{name}] total={c['total']} pass={c['pass']} fail={c['fail']}")
        for cs in block["cases"]:
            if cs["verdict"] != "pass":
                lines.append(f"  FAIL {cs['case_id']} {canonical_dumps(cs['witness'])}")
    if "timings" in report:
        for name, sec in report["timings"].items():
            lines.append(f"time {name} {sec:.3f}s")
    return "\n".join(lines) + "\n"


__all__ = ["jsonable", "case", "summarize", "suite_block", "dumps", "to_text"]
