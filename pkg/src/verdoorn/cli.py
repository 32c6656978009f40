"""Command line entry point.

Ties ingestion, estimation and rendering together: load a level panel
from delimited text, build one estimation cell per requested sector (or
one merged cell), estimate the four growth-law specifications on each
and emit the rendered table blocks plus, on request, a full-precision
results file and a rejection report.

Exit codes: 0 success, 2 input or parse problem, 3 validation problem,
4 estimation problem, 5 internal error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    EstimationError,
    PanelParseError,
    PanelValidationError,
    VerdoornError,
)
from .laws import VerdoornReport, run_cell
from .panel import (
    CANONICAL_COLUMNS,
    cross_section,
    growth_rates,
    load_panel,
    pool,
    write_rejections,
)
from .report import FORMATS, SCALES, render_table, write_results

__all__ = ["RunConfig", "build_reports", "main", "run"]

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_ESTIMATION = 4
EXIT_INTERNAL = 5


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation; flags map onto these fields one to one."""

    input: Path
    columns: dict[str, str] = field(default_factory=dict)
    delimiter: str = ","
    mode: str = "pooled"  # or "cross-section"
    sectors: tuple[str, ...] = ()
    merge: bool = False
    growth: str = "log"  # or "percent"
    format: str = "aligned-text"
    scale: str = "fraction"
    output: Path | None = None  # None: stdout
    results: Path | None = None
    rejections: Path | None = None

    def __post_init__(self):
        if self.mode not in ("pooled", "cross-section"):
            raise ValueError(f"mode must be 'pooled' or 'cross-section', got {self.mode!r}")
        if self.growth not in ("log", "percent"):
            raise ValueError(f"growth must be 'log' or 'percent', got {self.growth!r}")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.scale not in SCALES:
            raise ValueError(f"scale must be one of {SCALES}")


def build_reports(config: RunConfig) -> tuple[list[VerdoornReport], tuple]:
    """Load, transform and estimate; returns (reports, rejections)."""
    loaded = load_panel(config.input, config.columns or None, config.delimiter)
    if config.rejections is not None:
        write_rejections(loaded.rejections, config.rejections, config.delimiter)
    if not loaded.observations:
        raise PanelValidationError("no valid observations in input")

    growth = growth_rates(loaded.observations, method=config.growth)
    available = sorted({o.sector for o in growth})
    wanted = list(config.sectors) if config.sectors else available
    missing = [s for s in wanted if s not in available]
    if missing:
        raise PanelValidationError(
            f"requested sectors not in data: {missing}; available: {available}"
        )

    cell_filters = [set(wanted)] if config.merge else [{s} for s in wanted]
    reports = []
    for selector in cell_filters:
        subset = [o for o in growth if o.sector in selector]
        years = [o.year_to for o in subset]
        period = f"{min(years) - 1}-{max(years)}"
        if config.mode == "pooled":
            series = pool(subset, selector, "merged" if config.merge else "per-sector")
        else:
            series = cross_section(subset)
        try:
            reports.append(run_cell(series, period=period))
        except EstimationError as exc:
            raise type(exc)(f"cell {series.label!r} ({period}): {exc}") from exc
    return reports, loaded.rejections


def run(config: RunConfig) -> int:
    """Execute one invocation; writes outputs and maps errors to exit codes."""
    try:
        reports, _ = build_reports(config)
        rendered = "\n".join(render_table(r, config.format, config.scale) for r in reports)
        if config.output is None:
            sys.stdout.write(rendered)
        else:
            config.output.write_text(rendered, encoding="utf-8")
        if config.results is not None:
            write_results(reports, config.results)
    except FileNotFoundError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PanelParseError as exc:
        print(f"error: parse: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PanelValidationError as exc:
        print(f"error: validation: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except EstimationError as exc:
        print(f"error: estimation: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    except VerdoornError as exc:  # pragma: no cover - defensive
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - invariant breach surface
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def _parse_columns(text: str) -> dict[str, str]:
    mapping = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise argparse.ArgumentTypeError(
                f"column mapping entries look like canonical=actual, got {item!r}"
            )
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in CANONICAL_COLUMNS:
            raise argparse.ArgumentTypeError(
                f"unknown canonical column {key!r}; choose from {CANONICAL_COLUMNS}"
            )
        mapping[key] = value.strip()
    return mapping


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="verdoorn",
        description=(
            "Estimate the Verdoorn, Kaldor and Rowthorn growth regressions on a "
            "regional level panel and render returns-to-scale tables."
        ),
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--input", type=Path, required=True,
                        help="delimited level panel with header row (region, sector, year, output, employment)")
    parser.add_argument("--columns", type=_parse_columns, default={},
                        help="rename columns, e.g. region=NUTS,output=GVA")
    parser.add_argument("--delimiter", default=",", help="field delimiter of the input")
    parser.add_argument("--mode", choices=["pooled", "cross-section"], default="pooled",
                        help="stack region-years or average per region first")
    parser.add_argument("--sectors", default="",
                        help="comma-separated sector ids; empty means every sector in the data")
    parser.add_argument("--merge", action="store_true",
                        help="estimate one merged cell over the selected sectors instead of one per sector")
    parser.add_argument("--growth", choices=["log", "percent"], default="log",
                        help="growth-rate scheme; log differences keep p = q - e exact")
    parser.add_argument("--format", choices=list(FORMATS), default="aligned-text",
                        help="table rendering format")
    parser.add_argument("--scale", choices=list(SCALES), default="fraction",
                        help="render growth rates as fractions or scale intercepts to percent")
    parser.add_argument("--output", type=Path, default=None,
                        help="write the rendered tables here instead of stdout")
    parser.add_argument("--results", type=Path, default=None,
                        help="write full-precision machine-readable results here")
    parser.add_argument("--rejections", type=Path, default=None,
                        help="write the rejection report (line, reason) here")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    sectors = tuple(s.strip() for s in args.sectors.split(",") if s.strip())
    config = RunConfig(
        input=args.input,
        columns=args.columns,
        delimiter=args.delimiter,
        mode=args.mode,
        sectors=sectors,
        merge=args.merge,
        growth=args.growth,
        format=args.format,
        scale=args.scale,
        output=args.output,
        results=args.results,
        rejections=args.rejections,
    )
    return run(config)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
