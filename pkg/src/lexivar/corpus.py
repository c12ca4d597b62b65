"""Post ingestion, multilingual lexicon filtering, monthly aggregation."""

from __future__ import annotations

import csv
import dataclasses
import re
import unicodedata
from dataclasses import dataclass
from datetime import date, datetime

import numpy as np

from .errors import ConfigurationError, CorpusFormatError, GapError
from .months import MonthStamp, month_range
from .series import Role, TimeSeries

_POST_COLUMNS = ("id", "page", "date", "language", "text")

# Arabic combining marks (fathatan..superscript alef) and the tatweel
# stretching character never carry lexical meaning; both are stripped
# before matching so vowelled and unvowelled spellings compare equal.
_ARABIC_STRIP = {cp: None for cp in range(0x064B, 0x0660)}
_ARABIC_STRIP[0x0670] = None
_ARABIC_STRIP[0x0640] = None

_SUBSTRING_LANGUAGES = frozenset({"ar"})


def normalize_text(text: str, language: str = "") -> str:
    """Compatibility-fold ``text`` for matching: NFKC plus casefold.

    Arabic additionally drops diacritics and tatweel.
    """
    folded = unicodedata.normalize("NFKC", text).casefold()
    if language in _SUBSTRING_LANGUAGES:
        folded = folded.translate(_ARABIC_STRIP)
    return folded


@dataclass(frozen=True)
class Post:
    id: str
    page: str
    date: date
    language: str
    text: str
    topic_label: str | None = None


@dataclass(frozen=True)
class InterruptionSpec:
    """A named structural break taking effect on ``cutoff``."""

    name: str
    cutoff: date


class Lexicon:
    """Per-language term lists with language-appropriate matching.

    Latin-script languages match whole words (a term never fires inside a
    longer word); languages in ``_SUBSTRING_LANGUAGES`` match folded
    substrings because whitespace tokenization is unreliable there.
    """

    def __init__(self, entries: dict[str, tuple[str, ...]]):
        self._terms: dict[str, tuple[str, ...]] = {}
        self._patterns: dict[str, re.Pattern | None] = {}
        self._substrings: dict[str, tuple[str, ...]] = {}
        for language, terms in entries.items():
            language = language.strip().casefold()
            folded = []
            seen = set()
            for term in terms:
                norm = normalize_text(term, language)
                if norm and norm not in seen:
                    seen.add(norm)
                    folded.append(norm)
            self._terms[language] = tuple(folded)
            if language in _SUBSTRING_LANGUAGES:
                self._patterns[language] = None
                self._substrings[language] = tuple(folded)
            else:
                alternation = "|".join(re.escape(t) for t in folded)
                self._patterns[language] = (
                    re.compile(rf"\b(?:{alternation})\b") if folded else None
                )

    @property
    def languages(self) -> tuple[str, ...]:
        return tuple(sorted(self._terms))

    def terms(self, language: str) -> tuple[str, ...]:
        return self._terms.get(language.casefold(), ())

    def matches(self, language: str, text: str) -> bool:
        language = language.casefold()
        if language not in self._terms:
            raise KeyError(f"no lexicon entries for language {language!r}")
        folded = normalize_text(text, language)
        if language in _SUBSTRING_LANGUAGES:
            return any(term in folded for term in self._substrings[language])
        pattern = self._patterns[language]
        return bool(pattern and pattern.search(folded))


def load_lexicon(path) -> Lexicon:
    """Read ``language<TAB>term`` lines; ``#`` comments and blanks skipped."""
    entries: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "\t" not in line:
                raise CorpusFormatError(
                    f"expected 'language<TAB>term' in {path}", row=lineno
                )
            language, term = line.split("\t", 1)
            language = language.strip().casefold()
            term = term.strip()
            if not language or not term:
                raise CorpusFormatError(
                    f"empty language or term in {path}", row=lineno
                )
            entries.setdefault(language, []).append(term)
    if not entries:
        raise CorpusFormatError(f"lexicon {path} contains no terms")
    return Lexicon({lang: tuple(terms) for lang, terms in entries.items()})


def _read_rows(path, required: tuple[str, ...]):
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise CorpusFormatError(
                    f"{path} is missing a required column", column=column
                )
        yield from enumerate(reader, start=2)


def _parse_post_date(text: str) -> date:
    # Posts may carry a bare date or a full timestamp; only the calendar
    # day matters for monthly counting.
    text = text.strip().replace("Z", "+00:00")
    try:
        return datetime.fromisoformat(text).date()
    except ValueError:
        return date.fromisoformat(text)


def load_posts(path, pages=None, window=None) -> list[Post]:
    """Read the post table: id, page, date, language, text [, topic_label].

    Dates are ISO-8601 (date or datetime); ids must be unique and
    non-empty. When ``pages`` or ``window`` (a MonthStamp pair) is given,
    posts outside them are row-numbered errors, so a misconfigured run
    fails at ingestion rather than deep in the model chain.
    """
    page_set = set(pages) if pages is not None else None
    posts: list[Post] = []
    seen_ids: set[str] = set()
    for lineno, row in _read_rows(path, _POST_COLUMNS):
        post_id = (row["id"] or "").strip()
        if not post_id:
            raise CorpusFormatError("empty post id", row=lineno, column="id")
        if post_id in seen_ids:
            raise CorpusFormatError(
                f"duplicate post id {post_id!r}", row=lineno, column="id"
            )
        seen_ids.add(post_id)
        page = (row["page"] or "").strip()
        language = (row["language"] or "").strip().casefold()
        if not page:
            raise CorpusFormatError("empty page", row=lineno, column="page")
        if page_set is not None and page not in page_set:
            raise CorpusFormatError(
                f"page {page!r} is not in the configured page set",
                row=lineno,
                column="page",
            )
        if not language:
            raise CorpusFormatError(
                "empty language", row=lineno, column="language"
            )
        try:
            when = _parse_post_date(row["date"] or "")
        except ValueError:
            raise CorpusFormatError(
                f"invalid date {row['date']!r}", row=lineno, column="date"
            ) from None
        if window is not None and not (
            window[0] <= MonthStamp.of(when) <= window[1]
        ):
            raise CorpusFormatError(
                f"date {when} falls outside the window "
                f"{window[0]}..{window[1]}",
                row=lineno,
                column="date",
            )
        label = (row.get("topic_label") or "").strip() or None
        posts.append(
            Post(
                id=post_id,
                page=page,
                date=when,
                language=language,
                text=row["text"] or "",
                topic_label=label,
            )
        )
    if not posts:
        raise CorpusFormatError(f"{path} contains no posts")
    return posts


def attach_labels(posts: list[Post], path) -> list[Post]:
    """Join a separate ``id, topic_label`` table onto loaded posts.

    Labels for unknown ids are ignored; conflicting duplicates are an
    error. Posts absent from the table keep whatever label they had.
    """
    labels: dict[str, str] = {}
    for lineno, row in _read_rows(path, ("id", "topic_label")):
        post_id = (row["id"] or "").strip()
        label = (row["topic_label"] or "").strip()
        if not post_id or not label:
            raise CorpusFormatError(
                "empty id or topic_label", row=lineno
            )
        if labels.get(post_id, label) != label:
            raise CorpusFormatError(
                f"conflicting labels for id {post_id!r}", row=lineno
            )
        labels[post_id] = label
    return [
        dataclasses.replace(post, topic_label=labels[post.id])
        if post.id in labels
        else post
        for post in posts
    ]


def lexicon_filter(posts: list[Post], lexicon: Lexicon) -> list[Post]:
    """Keep posts whose text matches their language's term list.

    Every post language must be covered by the lexicon; a language with no
    entries would silently drop its whole page, so that is an error.
    """
    missing = sorted(
        {post.language for post in posts} - set(lexicon.languages)
    )
    if missing:
        raise CorpusFormatError(
            f"lexicon has no entries for language(s): {', '.join(missing)}"
        )
    return [post for post in posts if lexicon.matches(post.language, post.text)]


def aggregate_monthly(
    posts: list[Post],
    window: tuple[MonthStamp, MonthStamp] | None = None,
    pages=None,
    topics=None,
) -> dict[tuple[str, str], TimeSeries]:
    """Monthly post counts per (page, topic) over an inclusive window.

    Every month in the window (default: first to last posted month)
    appears in every series, zero when no post fell there, so series
    totals equal post counts exactly. Posts outside the window, unlabeled
    posts, and posts whose page or topic is not in the requested sets are
    errors: aggregation never drops data silently.
    """
    if not posts and window is None:
        raise ValueError("cannot infer a window from an empty post list")
    if window is None:
        stamps = [MonthStamp.of(post.date) for post in posts]
        window = (min(stamps), max(stamps))
    start, end = window
    if end < start:
        raise ValueError(f"window end {end} precedes start {start}")
    unlabeled = [post.id for post in posts if post.topic_label is None]
    if unlabeled:
        shown = ", ".join(unlabeled[:5])
        more = "" if len(unlabeled) <= 5 else f" (+{len(unlabeled) - 5} more)"
        raise CorpusFormatError(
            f"{len(unlabeled)} post(s) have no topic label: {shown}{more}"
        )
    page_set = set(pages) if pages is not None else {p.page for p in posts}
    topic_set = set(topics) if topics is not None else {
        p.topic_label for p in posts
    }
    months = month_range(start, end)
    index = {stamp: i for i, stamp in enumerate(months)}
    counts = {
        (page, topic): np.zeros(len(months))
        for page in page_set
        for topic in topic_set
    }
    for post in posts:
        stamp = MonthStamp.of(post.date)
        if stamp not in index:
            raise CorpusFormatError(
                f"post {post.id!r} dated {post.date} falls outside "
                f"the window {start}..{end}"
            )
        if post.page not in page_set:
            raise CorpusFormatError(
                f"post {post.id!r} has unexpected page {post.page!r}"
            )
        if post.topic_label not in topic_set:
            raise CorpusFormatError(
                f"post {post.id!r} has unexpected topic {post.topic_label!r}"
            )
        counts[(post.page, post.topic_label)][index[stamp]] += 1.0
    return {
        key: TimeSeries(
            name=f"{key[0]} / {key[1]}",
            start=start,
            values=values,
            role=Role.TOPIC_COUNT,
        )
        for key, values in sorted(counts.items())
    }


def build_interruption(
    spec: InterruptionSpec, window: tuple[MonthStamp, MonthStamp]
) -> TimeSeries:
    """Step dummy over the window: a month is 1 iff its last day is on or
    after the cutoff, so the cutoff month and everything later read 1.

    A cutoff outside the window would make the dummy constant —
    indistinguishable from a misconfigured date — so it is rejected.
    """
    start, end = window
    if not start.first_day() <= spec.cutoff <= end.last_day():
        raise ConfigurationError(
            f"interruption {spec.name!r} cutoff {spec.cutoff} is outside "
            f"the window {start}..{end}"
        )
    values = np.array(
        [1.0 if stamp.last_day() >= spec.cutoff else 0.0
         for stamp in month_range(start, end)]
    )
    return TimeSeries(name=spec.name, start=start, values=values, role=Role.DUMMY)


def load_indicator(path, kind: str, name: str | None = None) -> TimeSeries:
    """Collapse a daily ``date,value`` table into a monthly series.

    ``kind="monthly_mean"`` averages the daily values within each month;
    ``kind="inverse_rate"`` inverts each daily value first (a quote of
    ``x`` units per dollar becomes ``1/x`` dollars per unit), then
    averages. Months must be contiguous; a hole raises :class:`GapError`.
    """
    if kind not in ("monthly_mean", "inverse_rate"):
        raise ValueError(
            f"unknown indicator kind {kind!r}; "
            "expected 'monthly_mean' or 'inverse_rate'"
        )
    daily: dict[date, float] = {}
    for lineno, row in _read_rows(path, ("date", "value")):
        try:
            when = date.fromisoformat((row["date"] or "").strip())
        except ValueError:
            raise CorpusFormatError(
                f"invalid date {row['date']!r}", row=lineno, column="date"
            ) from None
        if when in daily:
            raise CorpusFormatError(
                f"duplicate date {when}", row=lineno, column="date"
            )
        try:
            value = float(row["value"])
        except (TypeError, ValueError):
            raise CorpusFormatError(
                f"invalid value {row['value']!r}", row=lineno, column="value"
            ) from None
        if not np.isfinite(value):
            raise CorpusFormatError(
                f"non-finite value {value!r}", row=lineno, column="value"
            )
        if kind == "inverse_rate":
            if value <= 0.0:
                raise CorpusFormatError(
                    f"rate must be positive to invert, got {value}",
                    row=lineno,
                    column="value",
                )
            value = 1.0 / value
        daily[when] = value
    if not daily:
        raise CorpusFormatError(f"{path} contains no observations")

    by_month: dict[MonthStamp, list[float]] = {}
    for when, value in daily.items():
        by_month.setdefault(MonthStamp.of(when), []).append(value)
    stamps = sorted(by_month)
    expected = month_range(stamps[0], stamps[-1])
    holes = [str(stamp) for stamp in expected if stamp not in by_month]
    if holes:
        raise GapError(
            f"indicator {path} is missing months: {', '.join(holes)}"
        )
    values = np.array([float(np.mean(by_month[stamp])) for stamp in expected])
    if name is None:
        name = str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return TimeSeries(
        name=name, start=stamps[0], values=values, role=Role.INDICATOR
    )
