"""Shared test fixtures: synthetic corpora and simulation helpers."""

from __future__ import annotations

import csv
from datetime import date, timedelta
from pathlib import Path

import numpy as np
import pytest

PAGES = ("Alpha News", "Beta Daily")
TOPICS = ("markets", "weather")


def ar1(n: int, phi: float, seed, scale: float = 1.0, drift: float = 0.0):
    """A seeded AR(1) path started at zero."""
    rng = np.random.default_rng(seed)
    shocks = rng.standard_normal(n) * scale
    x = np.empty(n)
    x[0] = shocks[0]
    for t in range(1, n):
        x[t] = drift + phi * x[t - 1] + shocks[t]
    return x


def var2_dataset():
    """The shared bivariate VAR(2)-with-dummy sample behind the frozen
    reference numbers in the estimation, causality, and response tests."""
    from lexivar import PanelDataset

    rng = np.random.default_rng(77)
    t = 180
    a1 = np.array([[0.5, 0.1], [0.2, 0.3]])
    a2 = np.array([[-0.2, 0.0], [0.1, 0.15]])
    c = np.array([1.0, -0.5])
    b = np.array([[2.0], [-1.0]])
    exog = np.zeros((t, 1))
    exog[t // 2 :, 0] = 1.0
    ex_full = np.vstack([np.zeros((100, 1)), exog])
    y = np.zeros((t + 100, 2))
    for i in range(2, t + 100):
        y[i] = c + a1 @ y[i - 1] + a2 @ y[i - 2] + b @ ex_full[i] + rng.standard_normal(2)
    y = y[100:]
    return PanelDataset(
        endog_names=("y1", "y2"),
        endog=y.T,
        exog_names=("x1",),
        exog=exog.T,
        include_trend=False,
    )


# Word-boundary matching table: (language, text, should_match) against
# BOUNDARY_LEXICON. The negatives are the traps: terms embedded in longer
# words must never fire for word-matched languages, while Arabic matches
# folded substrings by design.
BOUNDARY_LEXICON = {
    "en": ("sanctions", "ruble", "rouble", "oil price"),
    "ru": ("рубль",),
    "ar": ("روبل", "عقوبات"),
}

BOUNDARY_CASES = [
    ("en", "New sanctions announced today", True),
    ("en", "a sanctimonious statement", False),
    ("en", "Sanctions!", True),
    ("en", "The ruble fell sharply.", True),
    ("en", "we are in deep trouble now", False),  # 'rouble' inside 'trouble'
    ("en", "an oil price spike", True),
    ("en", "oil prices kept rising", False),  # boundary after 'price'
    ("en", "OIL PRICE CAP", True),
    ("en", "the ｒｏｕｂｌｅ weakened", True),  # fullwidth folds to 'rouble'
    ("en", "subsanctions regime", False),  # boundary before 'sanctions'
    ("en", "ruble-dollar trading", True),
    ("en", "Ruble rallies", True),
    ("en", "watch the ruble", True),
    ("en", "", False),
    ("ru", "курс рубль сегодня", True),
    ("ru", "рубльовый кризис", False),
    ("ar", "الروبل الروسي", True),  # substring inside the definite article
    ("ar", "رُوبِل", True),  # diacritics stripped before matching
    ("ar", "روبـــل", True),  # tatweel stripped before matching
    ("ar", "أسعار الذهب", False),
]


def hand_counted_posts():
    """Twelve labeled posts whose monthly counts were tallied by hand.

    Returns (posts, window, expected) where expected maps (page, topic)
    to the per-month count list over 2021-01..2021-04.
    """
    from datetime import date as d

    from lexivar import MonthStamp, Post

    def post(n, page, when, topic):
        return Post(
            id=f"h{n}",
            page=page,
            date=d.fromisoformat(when),
            language="en",
            text="irrelevant",
            topic_label=topic,
        )

    posts = [
        post(1, "A", "2021-01-05", "t1"),
        post(2, "A", "2021-01-17", "t1"),
        post(3, "A", "2021-03-01", "t1"),
        post(4, "A", "2021-04-15", "t1"),
        post(5, "A", "2021-02-28", "t2"),
        post(6, "B", "2021-01-31", "t1"),
        post(7, "B", "2021-03-03", "t1"),
        post(8, "B", "2021-04-30", "t1"),
        post(9, "B", "2021-02-01", "t2"),
        post(10, "B", "2021-02-14", "t2"),
        post(11, "B", "2021-02-27", "t2"),
        post(12, "B", "2021-04-01", "t2"),
    ]
    window = (MonthStamp(2021, 1), MonthStamp(2021, 4))
    expected = {
        ("A", "t1"): [2, 0, 1, 1],
        ("A", "t2"): [0, 1, 0, 0],
        ("B", "t1"): [1, 0, 1, 1],
        ("B", "t2"): [0, 3, 0, 1],
    }
    return posts, window, expected


def write_posts(path: Path, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["id", "page", "date", "language", "text", "topic_label"])
        writer.writerows(rows)


def write_indicator(path: Path, start: date, end: date, seed, base=70.0) -> None:
    rng = np.random.default_rng(seed)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["date", "value"])
        value, day = base, start
        while day <= end:
            value = max(5.0, value + rng.normal(0.0, 0.8))
            writer.writerow([day.isoformat(), f"{value:.6f}"])
            day += timedelta(days=1)


def build_corpus(
    root: Path,
    seed: int = 7,
    pages=PAGES,
    topics=TOPICS,
    irf_reps: int = 25,
    years=(2019, 2023),
    degenerate_topic: str | None = None,
    extra_config: str = "",
) -> Path:
    """Write a complete synthetic dataset + config; returns the config path.

    ``degenerate_topic`` names a topic that gets zero posts everywhere,
    producing constant count series that must fail the model chain.
    """
    root.mkdir(parents=True, exist_ok=True)
    (root / "lexicon.tsv").write_text(
        "# test lexicon\nen\truble\nen\tsanctions\nen\toil price\n",
        encoding="utf-8",
    )
    months = [
        (y, m) for y in range(years[0], years[1] + 1) for m in range(1, 13)
    ]
    rng = np.random.default_rng(seed)
    rows = []
    pid = 0
    for page in pages:
        for topic in topics:
            if topic == degenerate_topic:
                continue
            lam = 3.0
            for y, m in months:
                lam = max(0.5, 0.7 * lam + 1.2 + rng.normal(0.0, 0.8))
                for _ in range(rng.poisson(lam)):
                    pid += 1
                    day = int(rng.integers(1, 28))
                    rows.append(
                        (
                            f"p{pid}",
                            page,
                            date(y, m, day).isoformat(),
                            "en",
                            f"the ruble moved again ({pid})",
                            topic,
                        )
                    )
    write_posts(root / "posts.csv", rows)
    write_indicator(
        root / "rate.csv",
        date(years[0], 1, 1),
        date(years[1], 12, 31),
        seed=seed + 1,
    )
    config = f"""# synthetic run
posts = posts.csv
lexicon = lexicon.tsv
indicator.rate.path = rate.csv
indicator.rate.kind = inverse_rate
window = {years[0]}-01..{years[1]}-12
pages = {', '.join(pages)}
topics = {', '.join(topics)}
interruption.break_a = {years[0] + 1}-03-11
interruption.break_b = {years[1] - 1}-02-24
irf.reps = {irf_reps}
seed = {seed}
out = results
{extra_config}"""
    path = root / "run.conf"
    path.write_text(config, encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def corpus_run(tmp_path_factory):
    """One completed workflow run shared by read-only tests."""
    from lexivar import load_config, run_workflow

    root = tmp_path_factory.mktemp("corpus")
    config_path = build_corpus(root)
    config = load_config(config_path)
    bundle = run_workflow(config)
    return config_path, config, bundle


_CRITERIA = {}


def record_criterion(number: int, text: str, status: str) -> None:
    """Register an acceptance-criterion outcome for the terminal summary."""
    _CRITERIA[number] = (text, status)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(_CRITERIA):
        text, status = _CRITERIA[number]
        terminalreporter.write_line(f"{status:<5} criterion {number}: {text}")
