"""End-to-end run: config, ingestion, per-triple model chain.

A *triple* is one (page, topic, indicator) combination. Each triple walks
the same chain: difference-to-stationarity, alignment, lag selection, VAR
fit, Granger tests in both directions, an impulse-response bootstrap, and
cointegration/whiteness diagnostics. Triples fail independently; one bad
series never aborts the run.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from datetime import date
from pathlib import Path

import numpy as np

from .causality import GrangerResult, toda_yamamoto_granger
from .corpus import (
    InterruptionSpec,
    aggregate_monthly,
    attach_labels,
    build_interruption,
    lexicon_filter,
    load_indicator,
    load_lexicon,
    load_posts,
)
from .diagnostics import JohansenResult, LjungBoxResult, johansen_trace, ljung_box
from .errors import ConfigurationError, LexivarError
from .irf import IrfResult, irf
from .months import MonthStamp
from .series import TimeSeries, align
from .stationarity import AdfResult, adf_test, ensure_stationary
from .varmodel import PanelDataset, VarModel, fit_var, select_lag

_KNOWN_SCALARS = {
    "posts",
    "labels",
    "lexicon",
    "window",
    "pages",
    "topics",
    "alpha",
    "max_lag",
    "criterion",
    "irf.horizon",
    "irf.reps",
    "irf.ci",
    "seed",
    "out",
}


@dataclass(frozen=True)
class IndicatorSpec:
    name: str
    path: Path
    kind: str


@dataclass(frozen=True)
class RunConfig:
    posts_path: Path
    lexicon_path: Path
    indicators: tuple[IndicatorSpec, ...]
    window: tuple[MonthStamp, MonthStamp]
    pages: tuple[str, ...]
    topics: tuple[str, ...]
    interruptions: tuple[InterruptionSpec, ...]
    out_dir: Path
    labels_path: Path | None = None
    alpha: float = 0.05
    max_lag: int = 6
    criterion: str = "SC"
    irf_horizon: int = 10
    irf_reps: int = 500
    irf_ci: float = 0.95
    seed: int = 0

    def indicator(self, name: str) -> IndicatorSpec:
        for spec in self.indicators:
            if spec.name == name:
                return spec
        known = ", ".join(s.name for s in self.indicators)
        raise ConfigurationError(
            f"no indicator named {name!r}; configured: {known}"
        )


def _parse_items(path: Path) -> dict[str, str]:
    items: dict[str, str] = {}
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigurationError(
                f"{path}:{lineno}: expected 'key = value', got {line!r}"
            )
        key, value = line.split("=", 1)
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigurationError(
                f"{path}:{lineno}: empty key or value"
            )
        if key in items:
            raise ConfigurationError(f"{path}:{lineno}: duplicate key {key!r}")
        items[key] = value
    return items


def _parse_window(text: str) -> tuple[MonthStamp, MonthStamp]:
    if ".." not in text:
        raise ConfigurationError(
            f"window must look like 'YYYY-MM..YYYY-MM', got {text!r}"
        )
    lo, hi = text.split("..", 1)
    try:
        start, end = MonthStamp.parse(lo.strip()), MonthStamp.parse(hi.strip())
    except ValueError as exc:
        raise ConfigurationError(f"bad window {text!r}: {exc}") from None
    if end < start:
        raise ConfigurationError(f"window end precedes start in {text!r}")
    return start, end


def _parse_list(text: str) -> tuple[str, ...]:
    parts = tuple(part.strip() for part in text.split(","))
    if any(not part for part in parts):
        raise ConfigurationError(f"empty element in list {text!r}")
    if len(set(parts)) != len(parts):
        raise ConfigurationError(f"duplicate element in list {text!r}")
    return parts


def _typed(items: dict[str, str], key: str, cast, default):
    if key not in items:
        return default
    try:
        return cast(items[key])
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"bad value for {key!r}: {exc}") from None


def load_config(path) -> RunConfig:
    """Parse a flat ``key = value`` config file.

    Relative paths are resolved against the config file's directory.
    Unknown keys are rejected, so typos fail loudly instead of silently
    running with defaults.
    """
    path = Path(path)
    items = _parse_items(path)
    base = path.resolve().parent

    indicators: dict[str, dict[str, str]] = {}
    interruptions: list[InterruptionSpec] = []
    for key in list(items):
        parts = key.split(".")
        if parts[0] == "indicator" and len(parts) == 3 and parts[2] in ("path", "kind"):
            indicators.setdefault(parts[1], {})[parts[2]] = items.pop(key)
        elif parts[0] == "interruption" and len(parts) == 2:
            try:
                cutoff = date.fromisoformat(items.pop(key))
            except ValueError:
                raise ConfigurationError(
                    f"bad date for {key!r}; expected YYYY-MM-DD"
                ) from None
            interruptions.append(InterruptionSpec(name=parts[1], cutoff=cutoff))
        elif key not in _KNOWN_SCALARS:
            raise ConfigurationError(f"unknown config key {key!r}")

    for required in ("posts", "lexicon", "window", "pages", "topics"):
        if required not in items:
            raise ConfigurationError(f"missing required config key {required!r}")
    if not indicators:
        raise ConfigurationError(
            "at least one indicator.<name>.path/.kind pair is required"
        )
    specs = []
    for name in sorted(indicators):
        entry = indicators[name]
        if "path" not in entry or "kind" not in entry:
            raise ConfigurationError(
                f"indicator {name!r} needs both .path and .kind"
            )
        specs.append(
            IndicatorSpec(name=name, path=base / entry["path"], kind=entry["kind"])
        )

    window = _parse_window(items["window"])
    for spec in interruptions:
        if not window[0].first_day() <= spec.cutoff <= window[1].last_day():
            raise ConfigurationError(
                f"interruption {spec.name!r} cutoff {spec.cutoff} is outside "
                f"the window {window[0]}..{window[1]}"
            )

    return RunConfig(
        posts_path=base / items["posts"],
        labels_path=base / items["labels"] if "labels" in items else None,
        lexicon_path=base / items["lexicon"],
        indicators=tuple(specs),
        window=window,
        pages=_parse_list(items["pages"]),
        topics=_parse_list(items["topics"]),
        interruptions=tuple(sorted(interruptions, key=lambda s: s.cutoff)),
        alpha=_typed(items, "alpha", float, 0.05),
        max_lag=_typed(items, "max_lag", int, 6),
        criterion=_typed(items, "criterion", str, "SC"),
        irf_horizon=_typed(items, "irf.horizon", int, 10),
        irf_reps=_typed(items, "irf.reps", int, 500),
        irf_ci=_typed(items, "irf.ci", float, 0.95),
        seed=_typed(items, "seed", int, 0),
        out_dir=base / items.get("out", "results"),
    )


def triple_seed(base_seed: int, page: str, topic: str, indicator: str) -> int:
    """Stable per-triple seed: independent of run order, tied to the base."""
    key = f"{base_seed}\x1f{page}\x1f{topic}\x1f{indicator}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


@dataclass(frozen=True)
class TripleResult:
    """Everything the report needs about one completed triple."""

    page: str
    topic: str
    indicator: str
    indicator_diff_order: int
    topic_diff_order: int
    adf_indicator: AdfResult
    adf_topic: AdfResult
    lag: int
    model: VarModel
    granger_forward: GrangerResult
    granger_reverse: GrangerResult
    irf: IrfResult
    johansen: JohansenResult
    ljung: tuple[LjungBoxResult, ...]
    dropped_dummies: tuple[str, ...]
    seed: int


@dataclass(frozen=True)
class TripleFailure:
    page: str
    topic: str
    indicator: str
    stage: str
    message: str


@dataclass(frozen=True)
class ReportBundle:
    config: RunConfig
    totals: dict[tuple[str, str], int]
    topic_series: dict[tuple[str, str], TimeSeries]
    results: tuple[TripleResult, ...]
    failures: tuple[TripleFailure, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


class _Stage:
    """Context tag so a failing step reports which stage broke."""

    def __init__(self):
        self.name = "setup"

    def __call__(self, name: str) -> "_Stage":
        self.name = name
        return self


def _run_triple(
    config: RunConfig,
    page: str,
    topic: str,
    indicator_name: str,
    topic_series: TimeSeries,
    indicator_ready: tuple[TimeSeries, int, AdfResult],
    dummies: list[TimeSeries],
) -> TripleResult:
    stage = _Stage()
    seed = triple_seed(config.seed, page, topic, indicator_name)
    try:
        ind_st, d_ind, adf_ind = indicator_ready

        stage("stationarity")
        top_st, d_top = ensure_stationary(
            topic_series, alpha=config.alpha, max_d=2
        )
        adf_top = adf_test(top_st)

        stage("alignment")
        ind_al, top_al = align([ind_st, top_st])

        stage("fit")
        # Differencing shortens the sample, so a break near the window
        # edge can leave a dummy constant on the aligned span; such a
        # column is collinear with the constant and is dropped, noted.
        sliced = [d.slice(ind_al.start, ind_al.end) for d in dummies]
        kept = [d for d in sliced if np.ptp(d.values) > 0]
        dropped = tuple(d.name for d in sliced if np.ptp(d.values) == 0)
        panel = PanelDataset(
            endog_names=(indicator_name, topic),
            endog=np.vstack([ind_al.values, top_al.values]),
            exog_names=tuple(d.name for d in kept),
            exog=np.vstack([d.values for d in kept]) if kept else None,
            include_constant=True,
            include_trend=True,
            start=ind_al.start,
        )
        lag = select_lag(panel, max_lag=config.max_lag, criterion=config.criterion)
        model = fit_var(panel, lag)

        stage("granger")
        forward = toda_yamamoto_granger(
            panel, lag, cause=indicator_name, effect=topic
        )
        reverse = toda_yamamoto_granger(
            panel, lag, cause=topic, effect=indicator_name
        )

        stage("irf")
        irf_result = irf(
            model,
            impulse=indicator_name,
            response=topic,
            horizon=config.irf_horizon,
            boot_reps=config.irf_reps,
            ci_level=config.irf_ci,
            seed=seed,
        )

        stage("johansen")
        johansen = johansen_trace(panel, lag=lag)

        stage("ljung_box")
        ljung = tuple(
            ljung_box(model.residuals[i], lags=10, fit_df=0)
            for i in range(model.n_series)
        )
    except (LexivarError, np.linalg.LinAlgError) as exc:
        raise _TripleError(stage.name, str(exc)) from exc

    return TripleResult(
        page=page,
        topic=topic,
        indicator=indicator_name,
        indicator_diff_order=d_ind,
        topic_diff_order=d_top,
        adf_indicator=adf_ind,
        adf_topic=adf_top,
        lag=lag,
        model=model,
        granger_forward=forward,
        granger_reverse=reverse,
        irf=irf_result,
        johansen=johansen,
        ljung=ljung,
        dropped_dummies=dropped,
        seed=seed,
    )


class _TripleError(Exception):
    def __init__(self, stage: str, message: str):
        super().__init__(message)
        self.stage = stage


def run_workflow(
    config: RunConfig, indicator_filter: str | None = None
) -> ReportBundle:
    """Run the full chain for every (page, topic, indicator) triple.

    ``indicator_filter`` restricts the run to one configured indicator.
    Ingestion problems raise immediately; per-triple model failures are
    collected into the returned bundle instead.
    """
    indicators = config.indicators
    if indicator_filter is not None and indicator_filter != "all":
        indicators = (config.indicator(indicator_filter),)

    posts = load_posts(config.posts_path, pages=config.pages, window=config.window)
    if config.labels_path is not None:
        posts = attach_labels(posts, config.labels_path)
    lexicon = load_lexicon(config.lexicon_path)
    posts = lexicon_filter(posts, lexicon)
    series_map = aggregate_monthly(
        posts, config.window, pages=config.pages, topics=config.topics
    )
    totals = {
        key: int(ts.values.sum()) for key, ts in sorted(series_map.items())
    }
    dummies = [
        build_interruption(spec, config.window) for spec in config.interruptions
    ]

    start, end = config.window
    ready: dict[str, tuple[TimeSeries, int, AdfResult]] = {}
    for spec in indicators:
        raw = load_indicator(spec.path, spec.kind, name=spec.name)
        windowed = raw.slice(start, end)
        ind_st, d_ind = ensure_stationary(windowed, alpha=config.alpha, max_d=2)
        ready[spec.name] = (ind_st, d_ind, adf_test(ind_st))

    results: list[TripleResult] = []
    failures: list[TripleFailure] = []
    for spec in indicators:
        for page in config.pages:
            for topic in config.topics:
                try:
                    results.append(
                        _run_triple(
                            config,
                            page,
                            topic,
                            spec.name,
                            series_map[(page, topic)],
                            ready[spec.name],
                            dummies,
                        )
                    )
                except _TripleError as exc:
                    failures.append(
                        TripleFailure(
                            page=page,
                            topic=topic,
                            indicator=spec.name,
                            stage=exc.stage,
                            message=str(exc),
                        )
                    )
    return ReportBundle(
        config=config,
        totals=totals,
        topic_series=dict(sorted(series_map.items())),
        results=tuple(results),
        failures=tuple(failures),
    )
