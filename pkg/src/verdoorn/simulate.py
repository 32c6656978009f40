"""Synthetic panels, estimator-recovery experiments and leave-one-out
influence diagnostics.

The data-generating process is specified on growth rates: per region,
output growth q is drawn from a configured law, productivity growth is
p = a + b*q + sigma*eps with standard normal eps, and employment growth
is e = q - p. The draws are then integrated into positive level series
(base 100, exponential cumulation) so that downstream growth-rate
extraction is exercised end to end rather than bypassed.

All randomness flows through numpy's seeded PCG64 generator; region and
replication substreams are derived from the configured seed with
SeedSequence spawn keys, so every experiment is reproducible across
platforms and safe to parallelize by replication.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import InsufficientUnitsError
from .laws import ScaleVerdict, SpecKind, economies_of_scale, estimate
from .ols import t_critical
from .panel import GrowthSeries, PanelObservation, growth_rates, pool

__all__ = [
    "DgpConfig",
    "ExperimentResult",
    "InfluenceRecord",
    "QLaw",
    "RecoverySummary",
    "fixture_panel",
    "generate",
    "influence",
    "load_dgp_config",
    "recovery_experiment",
    "write_fixture",
    "write_summaries",
]


@dataclass(frozen=True)
class QLaw:
    """Distribution of the output-growth draws.

    kind "normal" takes (mean, sd); kind "uniform" takes (low, high).
    The text form, e.g. ``normal(0.03,0.02)``, is used in experiment
    config files.
    """

    kind: str
    param1: float
    param2: float

    def __post_init__(self):
        if self.kind not in ("normal", "uniform"):
            raise ValueError(f"q_law kind must be 'normal' or 'uniform', got {self.kind!r}")
        if self.kind == "normal" and self.param2 < 0:
            raise ValueError("normal q_law needs sd >= 0")
        if self.kind == "uniform" and self.param2 < self.param1:
            raise ValueError("uniform q_law needs high >= low")

    @classmethod
    def normal(cls, mean: float, sd: float) -> "QLaw":
        return cls("normal", mean, sd)

    @classmethod
    def uniform(cls, low: float, high: float) -> "QLaw":
        return cls("uniform", low, high)

    @classmethod
    def parse(cls, text: str) -> "QLaw":
        text = text.strip()
        for kind in ("normal", "uniform"):
            if text.startswith(kind + "(") and text.endswith(")"):
                inner = text[len(kind) + 1 : -1]
                parts = inner.split(",")
                if len(parts) != 2:
                    raise ValueError(f"q_law needs two parameters: {text!r}")
                return cls(kind, float(parts[0]), float(parts[1]))
        raise ValueError(f"cannot parse q_law {text!r}; use normal(m,s) or uniform(a,b)")

    def spec_string(self) -> str:
        return f"{self.kind}({self.param1!r},{self.param2!r})"

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "normal":
            return rng.normal(self.param1, self.param2, size)
        return rng.uniform(self.param1, self.param2, size)


@dataclass(frozen=True)
class DgpConfig:
    """Parameters of one synthetic-panel experiment, fully determined by
    the seed."""

    true_b: float
    true_a: float
    sigma: float
    q_law: QLaw
    regions: int
    transitions: int
    seed: int

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if self.regions < 1 or self.transitions < 1:
            raise ValueError("regions and transitions must be >= 1")


def _substream(seed: int, *path: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=path))


def generate(
    config: DgpConfig,
    *,
    sector: str = "synthetic",
    base_year: int = 1986,
    region_names: Sequence[str] | None = None,
) -> list[PanelObservation]:
    """Draw one synthetic level panel from the configured process.

    Each region gets its own substream of the seed, so panels are
    reproducible observation for observation. Levels start at 100 and
    cumulate exponentially, which makes the log growth rates recovered
    downstream equal the drawn rates up to float rounding.
    """
    if region_names is not None and len(region_names) != config.regions:
        raise ValueError("region_names length must equal config.regions")
    names = list(region_names) if region_names else [
        f"R{i + 1:02d}" for i in range(config.regions)
    ]
    panel: list[PanelObservation] = []
    for idx, name in enumerate(names):
        rng = _substream(config.seed, idx)
        q = config.q_law.draw(rng, config.transitions)
        eps = rng.standard_normal(config.transitions)
        p = config.true_a + config.true_b * q + config.sigma * eps
        e = q - p
        output, employment = 100.0, 100.0
        panel.append(PanelObservation(name, sector, base_year, output, employment))
        for t in range(config.transitions):
            output *= math.exp(q[t])
            employment *= math.exp(e[t])
            panel.append(
                PanelObservation(name, sector, base_year + 1 + t, output, employment)
            )
    return panel


@dataclass(frozen=True)
class RecoverySummary:
    mean_b: float
    sd_b: float
    coverage_95: float


def _replication_seed(seed: int, rep: int) -> int:
    return int(
        np.random.SeedSequence(entropy=seed, spawn_key=(rep,)).generate_state(
            1, np.uint64
        )[0]
    )


def recovery_experiment(config: DgpConfig, replications: int) -> RecoverySummary:
    """Replicate generate-then-estimate and summarize slope recovery.

    Each replication derives its own seed from (seed, replication
    index), generates a panel, re-extracts growth rates from the levels
    and fits the productivity-on-output regression. coverage_95 is the
    share of replications whose 95% confidence interval
    slope +- t_crit * se covers the true slope.
    """
    if replications < 100:
        raise ValueError("recovery experiments need at least 100 replications")
    slopes = np.empty(replications)
    covered = 0
    for rep in range(replications):
        rep_config = replace(config, seed=_replication_seed(config.seed, rep))
        panel = generate(rep_config)
        series = pool(growth_rates(panel))
        fit = estimate(series, SpecKind.VERDOORN).fit
        slopes[rep] = fit.slope
        half_width = t_critical(0.05, fit.df) * fit.se_slope
        if abs(fit.slope - config.true_b) <= half_width:
            covered += 1
    sd_b = float(slopes.std(ddof=1)) if replications > 1 else 0.0
    return RecoverySummary(
        mean_b=float(slopes.mean()),
        sd_b=sd_b,
        coverage_95=covered / replications,
    )


@dataclass(frozen=True)
class InfluenceRecord:
    """Effect of dropping one region from the Verdoorn fit."""

    left_out: str
    b_without: float
    delta_b: float
    ee_without: ScaleVerdict
    n_without: int


def influence(series: GrowthSeries) -> list[InfluenceRecord]:
    """Leave-one-region-out influence on the Verdoorn slope.

    Small stacked samples can be dominated by one extreme unit; this
    refits the productivity-on-output regression once per region with
    that region removed and ranks regions by |delta_b| descending.
    """
    regions = series.regions()
    if len(regions) < 3:
        raise InsufficientUnitsError(
            f"influence diagnostics need >= 3 regions, got {len(regions)}"
        )
    b_full = estimate(series, SpecKind.VERDOORN).fit.slope
    records = []
    for region in regions:
        kept = tuple(o for o in series.observations if o.region != region)
        sub = GrowthSeries(f"{series.label} w/o {region}", series.mode, kept)
        fit = estimate(sub, SpecKind.VERDOORN).fit
        records.append(
            InfluenceRecord(
                left_out=region,
                b_without=fit.slope,
                delta_b=b_full - fit.slope,
                ee_without=economies_of_scale(fit.slope),
                n_without=fit.n,
            )
        )
    records.sort(key=lambda r: (-abs(r.delta_b), r.left_out))
    return records


# Experiment config files are flat key = value text; keys are exactly
# the DgpConfig fields. Lines starting with '#' are comments.

_CONFIG_KEYS = ("true_b", "true_a", "sigma", "q_law", "regions", "transitions", "seed")


def load_dgp_config(source: str | Path | TextIO) -> DgpConfig:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            return load_dgp_config(handle)
    values: dict[str, str] = {}
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    missing = [k for k in _CONFIG_KEYS if k not in values]
    if missing:
        raise ValueError(f"experiment config missing keys: {missing}")
    return DgpConfig(
        true_b=float(values["true_b"]),
        true_a=float(values["true_a"]),
        sigma=float(values["sigma"]),
        q_law=QLaw.parse(values["q_law"]),
        regions=int(values["regions"]),
        transitions=int(values["transitions"]),
        seed=int(values["seed"]),
    )


@dataclass(frozen=True)
class ExperimentResult:
    config: DgpConfig
    replications: int
    summary: RecoverySummary


def write_summaries(
    results: Iterable[ExperimentResult],
    dest: str | Path | TextIO,
    delimiter: str = ",",
) -> None:
    """One delimited row per experiment: the config echo plus the summary."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as handle:
            write_summaries(results, handle, delimiter)
        return
    writer = csv.writer(dest, delimiter=delimiter, lineterminator="\n")
    writer.writerow(
        ["true_b", "true_a", "sigma", "q_law", "regions", "transitions", "seed",
         "replications", "mean_b", "sd_b", "coverage_95"]
    )
    for res in results:
        cfg = res.config
        writer.writerow(
            [repr(cfg.true_b), repr(cfg.true_a), repr(cfg.sigma),
             cfg.q_law.spec_string(), str(cfg.regions), str(cfg.transitions),
             str(cfg.seed), str(res.replications), repr(res.summary.mean_b),
             repr(res.summary.sd_b), repr(res.summary.coverage_95)]
        )


# Bundled synthetic fixture: five NUTS-II-like regions, six sectors,
# nine years (1986-1994), spanning regular, unbounded and unacceptable
# returns-to-scale cases.

FIXTURE_REGIONS = ("PT11", "PT15", "PT16", "PT17", "PT18")

FIXTURE_SECTORS: dict[str, DgpConfig] = {
    "agriculture": DgpConfig(0.88, 0.010, 0.015, QLaw.normal(0.020, 0.040), 5, 8, 0),
    "construction": DgpConfig(-0.13, 0.002, 0.020, QLaw.normal(0.030, 0.050), 5, 8, 0),
    "industry": DgpConfig(0.99, 0.005, 0.010, QLaw.normal(0.035, 0.045), 5, 8, 0),
    "manufacturing": DgpConfig(0.32, 0.020, 0.020, QLaw.normal(0.030, 0.050), 5, 8, 0),
    "market_services": DgpConfig(1.02, -0.015, 0.015, QLaw.normal(0.040, 0.040), 5, 8, 0),
    "services": DgpConfig(0.80, -0.010, 0.015, QLaw.normal(0.040, 0.035), 5, 8, 0),
}


def fixture_panel(seed: int = 19862) -> list[PanelObservation]:
    """The bundled 5 regions x 6 sectors x 9 years synthetic panel."""
    panel: list[PanelObservation] = []
    for idx, (sector, cfg) in enumerate(sorted(FIXTURE_SECTORS.items())):
        cfg = replace(cfg, seed=_replication_seed(seed, idx))
        panel.extend(
            generate(cfg, sector=sector, base_year=1986, region_names=FIXTURE_REGIONS)
        )
    return panel


def write_fixture(dest: str | Path | TextIO, seed: int = 19862) -> None:
    """Write the bundled fixture as loadable delimited text."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as handle:
            write_fixture(handle, seed)
        return
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(["region", "sector", "year", "output", "employment"])
    for obs in fixture_panel(seed):
        writer.writerow(
            [obs.region, obs.sector, str(obs.year), repr(obs.output), repr(obs.employment)]
        )
