"""Table rendering and machine-readable results.

Rendering mirrors the classic returns-to-scale table layout: one block
per cell with rows Verdoorn, Kaldor, Rowthorn1, Rowthorn2 and columns
Constant, Coefficient (t statistic in parentheses, significance stars
appended), DW, R², G.L. and, on the Verdoorn row only, E.E. = 1/(1-b).
Numbers show three decimals; coefficients significant at 5% carry one
star, at 10% two.

Everything rendered also lands, at full precision, in the results file:
one row per (cell, specification) with the columns

    cell, spec, intercept, slope, se_i, se_s, t_i, t_s, p_i, p_s,
    r2, dw, df, n, ee_value, ee_label

plus one row per cell with spec = "identities" whose first six numeric
columns hold, in order: a + c, b + d - 1, lambda1 - lambda2,
eps2 - eps1 - 1, DW(Verdoorn) - DW(Kaldor), DW(Rowthorn1) -
DW(Rowthorn2). Floats are written with repr, so reading the file back
restores them bit for bit; re-rendering from it reproduces the table
exactly.

The render scale is stamped into each block caption. "percent" scales
intercepts (and the intercept-gap entries) by 100 at render time only;
slopes, t statistics, R², DW and the scale index are dimensionless in
that respect and stay put.
"""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, TextIO

from .laws import (
    CellLabel,
    IdentityReport,
    ScaleLabel,
    ScaleVerdict,
    SpecEstimate,
    SpecKind,
    VERDOORN_REFERENCE_ELASTICITY,
    VerdoornReport,
    specification,
)
from .ols import FitResult, mark_significance

__all__ = [
    "FORMATS",
    "IDENTITY_SPEC",
    "RESULT_COLUMNS",
    "SCALES",
    "read_results",
    "render_table",
    "report_rows",
    "write_results",
]

FORMATS = ("aligned-text", "delimited", "markdown")
SCALES = ("fraction", "percent")

RESULT_COLUMNS = [
    "cell", "spec", "intercept", "slope", "se_i", "se_s", "t_i", "t_s",
    "p_i", "p_s", "r2", "dw", "df", "n", "ee_value", "ee_label",
]
IDENTITY_SPEC = "identities"

_ROW_TITLES = {
    SpecKind.VERDOORN: "Verdoorn",
    SpecKind.KALDOR: "Kaldor",
    SpecKind.ROWTHORN1: "Rowthorn1",
    SpecKind.ROWTHORN2: "Rowthorn2",
}

_HEADER = ["", "Constant", "Coefficient", "DW", "R²", "G.L.", "E.E. (1/(1-b))"]


def _nz(value: float) -> float:
    # keep "-0.000" out of the tables
    return 0.0 if value == 0.0 else value


def _num(value: float, decimals: int = 3) -> str:
    if value != value:  # nan
        return "nan"
    if value in (float("inf"), float("-inf")):
        return "inf" if value > 0 else "-inf"
    return f"{_nz(value):.{decimals}f}"


def _coef_cell(value: float, t: float, p: float) -> str:
    return f"{_num(value)}{mark_significance(p).stars} ({_num(t)})"


def _block_cells(report: VerdoornReport, scale: str) -> list[list[str]]:
    if scale not in SCALES:
        raise ValueError(f"scale must be one of {SCALES}, got {scale!r}")
    factor = 100.0 if scale == "percent" else 1.0
    rows = []
    for est in report.estimates:
        fit = est.fit
        cells = [
            _ROW_TITLES[est.spec.kind],
            _coef_cell(fit.intercept * factor, fit.t_intercept, fit.p_intercept),
            _coef_cell(fit.slope, fit.t_slope, fit.p_slope),
            _num(fit.durbin_watson),
            _num(fit.r_squared),
            str(fit.df),
            est.scale.rendered() if est.scale is not None else "",
        ]
        rows.append(cells)
    return rows


def _caption(report: VerdoornReport, scale: str) -> str:
    return f"{report.cell.caption()} | scale={scale}"


def _note(report: VerdoornReport) -> str:
    gap = report.reference_gap
    return (
        f"note: Verdoorn slope deviates from the reference elasticity "
        f"{VERDOORN_REFERENCE_ELASTICITY} by {'+' if gap >= 0 else ''}{_num(gap)}"
    )


def render_table(report: VerdoornReport, fmt: str = "aligned-text", scale: str = "fraction") -> str:
    """Render one cell's table block; a pure function of the report."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    rows = _block_cells(report, scale)
    if fmt == "aligned-text":
        widths = [
            max(len(_HEADER[i]), *(len(r[i]) for r in rows)) for i in range(len(_HEADER))
        ]
        lines = [_caption(report, scale)]
        lines.append("  ".join(_HEADER[i].ljust(widths[i]) for i in range(len(_HEADER))).rstrip())
        for r in rows:
            lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(_HEADER))).rstrip())
        lines.append(_note(report))
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        lines = [f"**{_caption(report, scale)}**", ""]
        lines.append("| " + " | ".join(_HEADER) + " |")
        lines.append("|" + "|".join(" --- " for _ in _HEADER) + "|")
        for r in rows:
            lines.append("| " + " | ".join(r) + " |")
        lines.append("")
        lines.append(_note(report))
        return "\n".join(lines) + "\n"
    # delimited: no padding, one header row, the cell key on every row
    out = []
    header = ["cell", "spec", "constant", "coefficient", "dw", "r2", "gl", "ee", "scale"]
    out.append(",".join(header))
    for r in rows:
        out.append(
            ",".join(
                [_quote(report.cell.key()), r[0], _quote(r[1]), _quote(r[2]),
                 r[3], r[4], r[5], r[6], scale]
            )
        )
    return "\n".join(out) + "\n"


def _quote(cell: str) -> str:
    if "," in cell or '"' in cell:
        return '"' + cell.replace('"', '""') + '"'
    return cell


def report_rows(report: VerdoornReport) -> list[list[str]]:
    """Full-precision machine rows for one report (four fits plus the
    identity-gap row); see the module docstring for the column map."""
    rows = []
    key = report.cell.key()
    for est in report.estimates:
        fit = est.fit
        ee_value = repr(est.scale.value) if est.scale is not None else ""
        ee_label = est.scale.label.value if est.scale is not None else ""
        rows.append(
            [key, est.spec.kind.value, repr(fit.intercept), repr(fit.slope),
             repr(fit.se_intercept), repr(fit.se_slope), repr(fit.t_intercept),
             repr(fit.t_slope), repr(fit.p_intercept), repr(fit.p_slope),
             repr(fit.r_squared), repr(fit.durbin_watson), str(fit.df),
             str(fit.n), ee_value, ee_label]
        )
    g = report.identities
    rows.append(
        [key, IDENTITY_SPEC, repr(g.intercept_negation_gap),
         repr(g.slope_complement_gap), repr(g.rowthorn_intercept_gap),
         repr(g.rowthorn_slope_gap), repr(g.dw_verdoorn_kaldor_gap),
         repr(g.dw_rowthorn_gap), "", "", "", "", "", "", "", ""]
    )
    return rows


def write_results(
    reports: Iterable[VerdoornReport],
    dest: str | Path | TextIO,
    delimiter: str = ",",
) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as handle:
            write_results(reports, handle, delimiter)
        return
    writer = csv.writer(dest, delimiter=delimiter, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    for report in reports:
        writer.writerows(report_rows(report))


def read_results(source: str | Path | TextIO, delimiter: str = ",") -> list[VerdoornReport]:
    """Rebuild reports from a results file, exactly enough to re-render.

    Residual vectors are not stored in the file, so the reconstructed
    fits carry empty residual tuples; every rendered number round-trips
    bit for bit.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return read_results(handle, delimiter)
    reader = csv.reader(source, delimiter=delimiter)
    header = next(reader, None)
    if header != RESULT_COLUMNS:
        raise ValueError(f"unexpected results header: {header}")

    cells: dict[str, dict[str, list[str]]] = {}
    order: list[str] = []
    for row in reader:
        if not row:
            continue
        key, spec = row[0], row[1]
        if key not in cells:
            cells[key] = {}
            order.append(key)
        cells[key][spec] = row

    reports = []
    for key in order:
        group = cells[key]
        estimates = []
        for kind in SpecKind:
            row = group[kind.value]
            fit = FitResult(
                intercept=float(row[2]), slope=float(row[3]),
                se_intercept=float(row[4]), se_slope=float(row[5]),
                t_intercept=float(row[6]), t_slope=float(row[7]),
                p_intercept=float(row[8]), p_slope=float(row[9]),
                r_squared=float(row[10]), durbin_watson=float(row[11]),
                df=int(row[12]), n=int(row[13]), residuals=(),
            )
            scale = None
            if row[14]:
                scale = ScaleVerdict(float(row[14]), ScaleLabel(row[15]))
            estimates.append(SpecEstimate(specification(kind), fit, scale))
        g = group[IDENTITY_SPEC]
        identities = IdentityReport(
            intercept_negation_gap=float(g[2]),
            slope_complement_gap=float(g[3]),
            rowthorn_intercept_gap=float(g[4]),
            rowthorn_slope_gap=float(g[5]),
            dw_verdoorn_kaldor_gap=float(g[6]),
            dw_rowthorn_gap=float(g[7]),
        )
        verdoorn_slope = estimates[0].fit.slope
        reports.append(
            VerdoornReport(
                cell=CellLabel.from_key(key),
                estimates=tuple(estimates),
                identities=identities,
                reference_gap=verdoorn_slope - VERDOORN_REFERENCE_ELASTICITY,
            )
        )
    return reports
