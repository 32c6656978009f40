"""Panel ingestion and growth-rate construction.

Level data arrive as delimited text with columns region, sector, year,
output and employment. They are validated, turned into per-transition
growth rates and stacked into the two estimation layouts: pooled
(region by year) and cross-section (one period-average observation per
region).

Growth rates default to natural-log differences, which make the
productivity identity p = q - e hold to machine precision. A simple
percentage-change scheme is available for sensitivity checks; there p
is *defined* as q - e so the identity survives by construction. Rates
are kept as plain fractions; any percent scaling happens at render
time only.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from statistics import fmean
from typing import Iterable, Sequence, TextIO

from .errors import EmptySelectionError, PanelParseError, PanelValidationError

__all__ = [
    "CANONICAL_COLUMNS",
    "GrowthObservation",
    "GrowthSeries",
    "LoadResult",
    "PanelObservation",
    "Rejection",
    "SeriesMode",
    "cross_section",
    "growth_rates",
    "load_panel",
    "load_series",
    "pool",
    "save_series",
    "write_rejections",
]

CANONICAL_COLUMNS = ("region", "sector", "year", "output", "employment")


@dataclass(frozen=True)
class PanelObservation:
    """One region x sector x year record of positive levels."""

    region: str
    sector: str
    year: int
    output: float
    employment: float


@dataclass(frozen=True)
class GrowthObservation:
    """Growth rates over one year-to-year transition ending in ``year_to``."""

    region: str
    sector: str
    year_to: int
    q: float  # output growth
    e: float  # employment growth
    p: float  # labor-productivity growth, q - e


class SeriesMode(Enum):
    POOLED = "pooled"
    CROSS_SECTION = "cross-section"


@dataclass(frozen=True)
class GrowthSeries:
    """An ordered, estimation-ready stack of growth observations.

    Ordering is part of the contract (the Durbin-Watson statistic
    depends on it): pooled series are region-major with ascending
    years, merged pools additionally sector-major outermost, and
    cross-section series hold exactly one averaged observation per
    region, sorted by region.
    """

    label: str
    mode: SeriesMode
    observations: tuple[GrowthObservation, ...]

    def __len__(self) -> int:
        return len(self.observations)

    def values(self, variable: str) -> list[float]:
        """Column extraction for the estimators; variable is q, e or p."""
        if variable not in ("q", "e", "p"):
            raise ValueError(f"unknown growth variable {variable!r}")
        return [getattr(o, variable) for o in self.observations]

    def region_run_lengths(self) -> list[int]:
        """Lengths of consecutive same-region blocks, in series order."""
        runs: list[int] = []
        last = None
        for o in self.observations:
            if o.region != last:
                runs.append(1)
                last = o.region
            else:
                runs[-1] += 1
        return runs

    def regions(self) -> list[str]:
        seen: dict[str, None] = {}
        for o in self.observations:
            seen.setdefault(o.region)
        return list(seen)


@dataclass(frozen=True)
class Rejection:
    """A rejected input row: physical line number plus the reason."""

    line: int
    reason: str


@dataclass(frozen=True)
class LoadResult:
    observations: tuple[PanelObservation, ...]
    rejections: tuple[Rejection, ...]


def _open_source(source: str | Path | TextIO) -> tuple[TextIO, bool]:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline=""), True
    return source, False


def load_panel(
    source: str | Path | TextIO,
    columns: dict[str, str] | None = None,
    delimiter: str = ",",
) -> LoadResult:
    """Read level data from delimited text with a header row.

    ``columns`` maps the canonical names (region, sector, year, output,
    employment) to the headers actually present; omitted names default
    to themselves. Structurally broken rows (wrong arity, non-numeric
    or non-finite cells) raise :class:`PanelParseError` with the line
    number. Rows breaking panel invariants (non-positive level,
    duplicate key) are not silently dropped: they are returned in the
    rejection report.
    """
    mapping = dict.fromkeys(CANONICAL_COLUMNS)
    for key in CANONICAL_COLUMNS:
        mapping[key] = (columns or {}).get(key, key)
    unknown = set(columns or {}) - set(CANONICAL_COLUMNS)
    if unknown:
        raise ValueError(f"unknown column keys in mapping: {sorted(unknown)}")

    stream, owned = _open_source(source)
    try:
        reader = csv.reader(stream, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise PanelParseError(1, "empty input: header row required") from None
        index: dict[str, int] = {}
        for key in CANONICAL_COLUMNS:
            try:
                index[key] = header.index(mapping[key])
            except ValueError:
                raise PanelParseError(
                    1, f"mapped column {mapping[key]!r} not found in header"
                ) from None

        observations: list[PanelObservation] = []
        rejections: list[Rejection] = []
        seen: set[tuple[str, str, int]] = set()
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) != len(header):
                raise PanelParseError(
                    line, f"expected {len(header)} fields, got {len(row)}"
                )
            try:
                region = row[index["region"]].strip()
                sector = row[index["sector"]].strip()
                year = int(row[index["year"]].strip())
                output = float(row[index["output"]])
                employment = float(row[index["employment"]])
            except ValueError as exc:
                raise PanelParseError(line, f"non-numeric cell: {exc}") from None
            if not (math.isfinite(output) and math.isfinite(employment)):
                raise PanelParseError(line, "non-finite level value")
            if output <= 0.0 or employment <= 0.0:
                rejections.append(Rejection(line, "non-positive level"))
                continue
            key = (region, sector, year)
            if key in seen:
                rejections.append(Rejection(line, "duplicate key"))
                continue
            seen.add(key)
            observations.append(
                PanelObservation(region, sector, year, output, employment)
            )
    finally:
        if owned:
            stream.close()
    return LoadResult(tuple(observations), tuple(rejections))


def write_rejections(
    rejections: Iterable[Rejection],
    dest: str | Path | TextIO,
    delimiter: str = ",",
) -> None:
    """Write the rejection report: one line,reason row per rejected input row."""
    _write_rows(
        dest,
        delimiter,
        ["line", "reason"],
        ([str(r.line), r.reason] for r in rejections),
    )


def growth_rates(
    panel: Sequence[PanelObservation],
    method: str = "log",
) -> list[GrowthObservation]:
    """Turn level observations into growth rates over consecutive years.

    Within each (region, sector) unit, every pair of adjacent calendar
    years yields one observation; gaps in the year sequence simply
    yield nothing (no interpolation, no multi-year bridging). With
    ``method="log"`` the rates are natural-log differences and
    p = q - e holds exactly; with ``method="percent"`` they are simple
    relative changes and p is set to q - e by definition.
    """
    if method not in ("log", "percent"):
        raise ValueError(f"growth method must be 'log' or 'percent', got {method!r}")

    units: dict[tuple[str, str], list[PanelObservation]] = {}
    for obs in panel:
        units.setdefault((obs.region, obs.sector), []).append(obs)

    result: list[GrowthObservation] = []
    for (region, sector), group in sorted(units.items()):
        group = sorted(group, key=lambda o: o.year)
        years = [o.year for o in group]
        if len(set(years)) != len(years):
            raise PanelValidationError(
                f"duplicate year within unit ({region}, {sector})"
            )
        for prev, cur in zip(group, group[1:]):
            if cur.year != prev.year + 1:
                continue
            if method == "log":
                q = math.log(cur.output / prev.output)
                e = math.log(cur.employment / prev.employment)
            else:
                q = cur.output / prev.output - 1.0
                e = cur.employment / prev.employment - 1.0
            result.append(
                GrowthObservation(region, sector, cur.year, q, e, q - e)
            )

    if not result:
        names = ", ".join(f"({r}, {s})" for r, s in sorted(units)) or "none"
        raise PanelValidationError(
            "no unit has two consecutive years of data; units seen: " + names
        )
    return result


def pool(
    growth: Sequence[GrowthObservation],
    sector_filter: set[str] | None = None,
    merge: str = "per-sector",
) -> GrowthSeries:
    """Stack growth observations into one pooled estimation series.

    ``merge="per-sector"`` builds the series for a single sector (the
    filter, or the data, must resolve to exactly one) ordered
    region-major then year-ascending. ``merge="merged"`` stacks several
    sectors into one series, sector-major outermost.
    """
    if merge not in ("per-sector", "merged"):
        raise ValueError(f"merge must be 'per-sector' or 'merged', got {merge!r}")
    selected = [
        o for o in growth if sector_filter is None or o.sector in sector_filter
    ]
    if not selected:
        wanted = sorted(sector_filter) if sector_filter else "all sectors"
        raise EmptySelectionError(f"no growth observations left after filter {wanted}")

    sectors = sorted({o.sector for o in selected})
    if merge == "per-sector":
        if len(sectors) != 1:
            raise PanelValidationError(
                "per-sector pooling needs exactly one sector; "
                f"got {sectors} (use merge='merged' or narrow the filter)"
            )
        ordered = sorted(selected, key=lambda o: (o.region, o.year_to))
        label = sectors[0]
    else:
        ordered = sorted(selected, key=lambda o: (o.sector, o.region, o.year_to))
        label = "+".join(sectors)
    return GrowthSeries(label, SeriesMode.POOLED, tuple(ordered))


def cross_section(growth: Sequence[GrowthObservation]) -> GrowthSeries:
    """Collapse growth observations to one period-average row per region.

    q and e are arithmetic means over each region's transitions and p is
    their difference, so the productivity identity survives averaging.
    The resulting observation carries the region's latest year.
    """
    if not growth:
        raise EmptySelectionError("cannot build a cross-section from no observations")
    by_region: dict[str, list[GrowthObservation]] = {}
    for o in growth:
        by_region.setdefault(o.region, []).append(o)

    sectors = sorted({o.sector for o in growth})
    label = sectors[0] if len(sectors) == 1 else "+".join(sectors)
    averaged = []
    for region in sorted(by_region):
        group = by_region[region]
        qbar = fmean(o.q for o in group)
        ebar = fmean(o.e for o in group)
        averaged.append(
            GrowthObservation(
                region=region,
                sector=label,
                year_to=max(o.year_to for o in group),
                q=qbar,
                e=ebar,
                p=qbar - ebar,
            )
        )
    return GrowthSeries(label, SeriesMode.CROSS_SECTION, tuple(averaged))


# Interchange format: the same delimited conventions as the input, with
# columns region, sector, year_to, q, e, p. Floats are written with
# repr so a round trip is bit-identical.


def save_series(
    series: GrowthSeries,
    dest: str | Path | TextIO,
    delimiter: str = ",",
) -> None:
    _write_rows(
        dest,
        delimiter,
        ["region", "sector", "year_to", "q", "e", "p"],
        (
            [o.region, o.sector, str(o.year_to), repr(o.q), repr(o.e), repr(o.p)]
            for o in series.observations
        ),
    )


def load_series(
    source: str | Path | TextIO,
    label: str,
    mode: SeriesMode,
    delimiter: str = ",",
) -> GrowthSeries:
    """Read a series saved by :func:`save_series`; label and mode are
    not stored in the file and must be supplied by the caller."""
    stream, owned = _open_source(source)
    try:
        reader = csv.reader(stream, delimiter=delimiter)
        header = next(reader, None)
        expected = ["region", "sector", "year_to", "q", "e", "p"]
        if header != expected:
            raise PanelParseError(1, f"expected header {expected}, got {header}")
        observations = []
        for row in reader:
            if not row:
                continue
            if len(row) != 6:
                raise PanelParseError(reader.line_num, f"expected 6 fields, got {len(row)}")
            try:
                observations.append(
                    GrowthObservation(
                        region=row[0],
                        sector=row[1],
                        year_to=int(row[2]),
                        q=float(row[3]),
                        e=float(row[4]),
                        p=float(row[5]),
                    )
                )
            except ValueError as exc:
                raise PanelParseError(reader.line_num, f"non-numeric cell: {exc}") from None
    finally:
        if owned:
            stream.close()
    return GrowthSeries(label, mode, tuple(observations))


def _write_rows(
    dest: str | Path | TextIO,
    delimiter: str,
    header: list[str],
    rows: Iterable[list[str]],
) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as handle:
            _write_rows(handle, delimiter, header, rows)
        return
    writer = csv.writer(dest, delimiter=delimiter, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
