"""Table emission: one bundle of CSV or Markdown files per run.

Both formats are rendered from the same pre-formatted cell strings, so the
numbers in a Markdown bundle are byte-identical to the CSV bundle.
"""

from __future__ import annotations

import csv
import io
import os
import re
import shutil
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .series import min_max_normalize
from .varmodel import coefficient_table, significance_stars
from .workflow import ReportBundle, RunConfig

_FORMATS = {"csv": ".csv", "markdown": ".md"}


def _slug(*parts: str) -> str:
    return "__".join(
        re.sub(r"[^A-Za-z0-9._-]+", "_", part).strip("_") for part in parts
    )


def fmt_number(value) -> str:
    """Canonical cell string: integers bare, floats at 7 significant digits."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if not np.isfinite(v):
        raise ValueError(f"refusing to format non-finite value {v!r}")
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return f"{v:.7g}"


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]


def _triple_key(result) -> tuple[str, str, str]:
    return (result.indicator, result.page, result.topic)


def build_tables(bundle: ReportBundle) -> tuple[Table, ...]:
    """All report tables, fully formatted, in a stable order."""
    results = sorted(bundle.results, key=_triple_key)

    totals_rows = tuple(
        (page, topic, fmt_number(count))
        for (page, topic), count in sorted(bundle.totals.items())
    )

    share_rows = []
    for (page, topic), ts in sorted(bundle.topic_series.items()):
        normalized = min_max_normalize(ts)
        share_rows.extend(
            (page, topic, str(stamp), fmt_number(value))
            for stamp, value in zip(normalized.months(), normalized.values)
        )

    stationarity_rows = []
    lag_rows = []
    coef_rows = []
    fit_rows = []
    granger_rows = []
    irf_tables = []
    johansen_rows = []
    ljung_rows = []
    note_rows = []
    for res in results:
        key = _triple_key(res)
        for role, adf, d in (
            ("indicator", res.adf_indicator, res.indicator_diff_order),
            ("topic", res.adf_topic, res.topic_diff_order),
        ):
            stationarity_rows.append(
                key
                + (
                    role,
                    fmt_number(d),
                    fmt_number(adf.statistic),
                    fmt_number(adf.p_value),
                    fmt_number(adf.lag_order),
                    fmt_number(adf.n_obs),
                )
            )
        lag_rows.append(key + (fmt_number(res.lag), fmt_number(res.model.nobs)))
        for equation in res.model.endog_names:
            table = coefficient_table(res.model, equation)
            coef_rows.extend(
                key
                + (
                    equation,
                    cell.label,
                    fmt_number(cell.estimate),
                    fmt_number(cell.std_error),
                    fmt_number(cell.p_value),
                    cell.stars,
                )
                for cell in table.rows
            )
            fit_rows.append(
                key
                + (
                    equation,
                    fmt_number(table.nobs),
                    fmt_number(table.r2),
                    fmt_number(table.r2_adj),
                )
            )
        for g in (res.granger_forward, res.granger_reverse):
            granger_rows.append(
                key
                + (
                    g.cause,
                    g.effect,
                    fmt_number(g.lags),
                    fmt_number(g.statistic),
                    fmt_number(g.p_value),
                    significance_stars(g.p_value),
                )
            )
        irf_tables.append(
            Table(
                f"irf/{_slug(res.indicator, res.page, res.topic)}",
                ("horizon", "point", "lower", "upper"),
                tuple(
                    (
                        fmt_number(int(h)),
                        fmt_number(res.irf.point[h]),
                        fmt_number(res.irf.lower[h]),
                        fmt_number(res.irf.upper[h]),
                    )
                    for h in res.irf.horizons
                ),
            )
        )
        for row in res.johansen.rows:
            johansen_rows.append(
                key
                + (
                    fmt_number(row.rank_null),
                    fmt_number(row.statistic),
                    fmt_number(row.cv_90),
                    fmt_number(row.cv_95),
                    fmt_number(row.cv_99),
                    fmt_number(row.p_value),
                )
            )
        for equation, lb in zip(res.model.endog_names, res.ljung):
            ljung_rows.append(
                key
                + (
                    equation,
                    fmt_number(lb.lags),
                    fmt_number(lb.statistic),
                    fmt_number(lb.p_value),
                )
            )
        for name in res.dropped_dummies:
            note_rows.append(
                key + (f"interruption {name!r} constant on sample; dropped",)
            )
        if res.irf.unstable:
            note_rows.append(key + ("fitted VAR unstable; responses may diverge",))
        if res.irf.n_failed:
            note_rows.append(
                key + (f"{res.irf.n_failed} bootstrap replicate(s) discarded",)
            )

    failure_rows = tuple(
        (f.indicator, f.page, f.topic, f.stage, f.message)
        for f in sorted(
            bundle.failures, key=lambda f: (f.indicator, f.page, f.topic)
        )
    )

    triple = ("indicator", "page", "topic")
    return (
        Table("post_totals", ("page", "topic", "total"), totals_rows),
        Table(
            "topic_shares",
            ("page", "topic", "month", "value"),
            tuple(share_rows),
        ),
        Table(
            "stationarity",
            triple + ("series", "diff_order", "statistic", "p_value", "lags", "n_obs"),
            tuple(stationarity_rows),
        ),
        Table("lag_selection", triple + ("lag", "n_obs"), tuple(lag_rows)),
        Table(
            "var_coefficients",
            triple + ("equation", "term", "estimate", "std_error", "p_value", "stars"),
            tuple(coef_rows),
        ),
        Table(
            "model_fit",
            triple + ("equation", "n_obs", "r2", "r2_adj"),
            tuple(fit_rows),
        ),
        Table(
            "granger",
            triple + ("cause", "effect", "lags", "statistic", "p_value", "stars"),
            tuple(granger_rows),
        ),
        *irf_tables,
        Table(
            "johansen",
            triple + ("rank_null", "statistic", "cv_90", "cv_95", "cv_99", "p_value"),
            tuple(johansen_rows),
        ),
        Table(
            "ljung_box",
            triple + ("equation", "lags", "statistic", "p_value"),
            tuple(ljung_rows),
        ),
        Table("run_notes", triple + ("note",), tuple(note_rows)),
        Table("failures", triple + ("stage", "message"), failure_rows),
    )


def _render_csv(table: Table) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    writer.writerows(table.rows)
    return buffer.getvalue()


def _md_escape(cell: str) -> str:
    return cell.replace("|", "\\|")


def _render_markdown(table: Table) -> str:
    lines = [
        "| " + " | ".join(_md_escape(c) for c in table.columns) + " |",
        "|" + "|".join(" --- " for _ in table.columns) + "|",
    ]
    lines.extend(
        "| " + " | ".join(_md_escape(c) for c in row) + " |" for row in table.rows
    )
    return "\n".join(lines) + "\n"


def render_manifest(config: RunConfig) -> str:
    """A config file equivalent to the one that produced this run.

    Paths are absolute, versions ride along as comments, and the result
    parses with the normal config loader.
    """
    import scipy

    from . import __version__
    from ._kernels import BACKEND

    lines = [
        f"# generated_at = {datetime.now(timezone.utc).isoformat()}",
        f"# package = lexivar {__version__}",
        f"# numpy = {np.__version__}",
        f"# scipy = {scipy.__version__}",
        f"# kernel_backend = {BACKEND}",
        f"posts = {config.posts_path.resolve()}",
    ]
    if config.labels_path is not None:
        lines.append(f"labels = {config.labels_path.resolve()}")
    lines.append(f"lexicon = {config.lexicon_path.resolve()}")
    for spec in config.indicators:
        lines.append(f"indicator.{spec.name}.path = {spec.path.resolve()}")
        lines.append(f"indicator.{spec.name}.kind = {spec.kind}")
    lines.append(f"window = {config.window[0]}..{config.window[1]}")
    lines.append(f"pages = {', '.join(config.pages)}")
    lines.append(f"topics = {', '.join(config.topics)}")
    for spec in config.interruptions:
        lines.append(f"interruption.{spec.name} = {spec.cutoff.isoformat()}")
    lines.append(f"alpha = {config.alpha}")
    lines.append(f"max_lag = {config.max_lag}")
    lines.append(f"criterion = {config.criterion}")
    lines.append(f"irf.horizon = {config.irf_horizon}")
    lines.append(f"irf.reps = {config.irf_reps}")
    lines.append(f"irf.ci = {config.irf_ci}")
    lines.append(f"seed = {config.seed}")
    lines.append(f"out = {config.out_dir.resolve()}")
    return "\n".join(lines) + "\n"


def emit_tables(
    bundle: ReportBundle, out_dir=None, fmt: str = "csv"
) -> Path:
    """Write the full bundle atomically and return the output directory.

    The bundle lands all at once: files are staged in a temporary sibling
    directory and swapped in, so a crash never leaves a half-written
    report. An existing output directory is replaced only when it is empty
    or itself a bundle (it contains ``manifest.txt``).
    """
    if fmt not in _FORMATS:
        raise ConfigurationError(
            f"unknown format {fmt!r}; expected one of {sorted(_FORMATS)}"
        )
    target = Path(out_dir) if out_dir is not None else bundle.config.out_dir
    target.parent.mkdir(parents=True, exist_ok=True)
    render = _render_csv if fmt == "csv" else _render_markdown
    suffix = _FORMATS[fmt]

    staging = Path(
        tempfile.mkdtemp(prefix=".bundle-", dir=target.parent)
    )
    try:
        for table in build_tables(bundle):
            path = staging / f"{table.name}{suffix}"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(render(table), encoding="utf-8")
        (staging / "manifest.txt").write_text(
            render_manifest(bundle.config), encoding="utf-8"
        )
        if target.exists():
            if any(target.iterdir()) and not (target / "manifest.txt").exists():
                raise ConfigurationError(
                    f"refusing to replace {target}: it is not a report bundle"
                )
            shutil.rmtree(target)
        os.replace(staging, target)
    except Exception:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    return target
