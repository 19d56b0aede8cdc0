"""Text rendering of reports as pandas tables."""
from typing import List, Sequence

import pandas as pd

from src.reporting.schemas import Report


def format_pair(value: Sequence[float], digits: int = 6) -> str:
    re, im = value
    if im == 0:
        return f"{re:.{digits}g}"
    return f"{re:.{digits}g}{im:+.{digits}g}i"


def certificates_table(report: Report) -> pd.DataFrame:
    rows = [
        {
            "certificate": cert["name"],
            "check": check["name"],
            "residual": check["residual"],
            "threshold": check["threshold"],
            "passed": check["passed"],
        }
        for cert in report.certificates for check in cert["checks"]
    ]
    return pd.DataFrame(rows, columns=["certificate", "check", "residual", "threshold", "passed"])


def simples_table(report: Report) -> pd.DataFrame:
    rows = []
    for row in report.simples:
        entry = {"X": row.index, "d": format_pair(row.dimension), "ω": format_pair(row.twist)}
        entry.update({f"N[{label}]": n for label, n in row.multiplicities.items()})
        entry["residual"] = f"{row.residual:.1e}"
        rows.append(entry)
    return pd.DataFrame(rows)


def matrix_table(matrix: List[List[List[float]]]) -> pd.DataFrame:
    return pd.DataFrame([[format_pair(v) for v in row] for row in matrix])


def render(report: Report) -> str:
    """Text version of ``report``: same numbers as the JSON, fewer digits."""
    lines = [f"== {report.command} :: " + ", ".join(f"{k}={v}" for k, v in report.input.items())]
    lines.append(f"tolerance={report.tolerance:g} seed={report.seed}")
    if report.certificates:
        lines += ["", certificates_table(report).to_string(index=False)]
    for cert in report.certificates:
        for key, value in cert.get("notes", {}).items():
            lines.append(f"  [{cert['name']}] {key}: {value}")
    if report.simples:
        lines += ["", f"Simple objects ({len(report.simples)}):", simples_table(report).to_string(index=False)]
    md = report.modular_data
    if md is not None:
        lines += ["", "S (unnormalized):", matrix_table(md.S).to_string()]
        lines += ["", "T: " + "  ".join(format_pair(t) for t in md.T)]
        lines.append("conjugation: " + " ".join(str(c) for c in md.conjugation))
        lines.append(f"Δ+ = {format_pair(md.delta_plus)}  Δ- = {format_pair(md.delta_minus)}  "
                     f"dim Z = {format_pair(md.dim_double)}")
    if report.values:
        lines += [""] + [f"{name} = {format_pair(v) if len(v) == 2 else v}" for name, v in report.values.items()]
    if report.timings:
        lines += ["", "timings [s]: " + ", ".join(f"{k}={v:.3f}" for k, v in report.timings.items())]
    lines += ["", "RESULT: " + ("PASSED" if report.passed else f"FAILED ({report.failure})")]
    return "\n".join(lines)
