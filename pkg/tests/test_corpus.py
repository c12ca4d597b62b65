from datetime import date

import numpy as np
import pytest
from conftest import BOUNDARY_CASES, BOUNDARY_LEXICON, hand_counted_posts

from lexivar import (
    ConfigurationError,
    CorpusFormatError,
    GapError,
    InterruptionSpec,
    Lexicon,
    MonthStamp,
    Post,
    Role,
    aggregate_monthly,
    attach_labels,
    build_interruption,
    lexicon_filter,
    load_indicator,
    load_lexicon,
    load_posts,
    normalize_text,
)


class TestNormalizeText:
    def test_compatibility_fold(self):
        assert normalize_text("ﬁnance") == "finance"  # fi ligature
        assert normalize_text("ｒｕｂｌｅ") == "ruble"  # fullwidth forms

    def test_casefold(self):
        assert normalize_text("STRASSE") == "strasse"
        assert normalize_text("straße") == "strasse"

    def test_arabic_marks_stripped(self):
        assert normalize_text("رُوبِل", "ar") == "روبل"
        assert normalize_text("روبـــل", "ar") == "روبل"

    def test_arabic_stripping_only_for_arabic(self):
        assert "ـ" in normalize_text("xـy")
        assert "ـ" not in normalize_text("xـy", "ar")


@pytest.fixture(scope="module")
def lexicon():
    return Lexicon(BOUNDARY_LEXICON)


class TestLexiconMatching:

    @pytest.mark.parametrize("language, text, expected", BOUNDARY_CASES)
    def test_boundary_table(self, lexicon, language, text, expected):
        assert lexicon.matches(language, text) is expected

    def test_languages_sorted(self, lexicon):
        assert lexicon.languages == ("ar", "en", "ru")

    def test_terms_are_folded_and_deduped(self):
        lex = Lexicon({"EN": ("Ruble", "RUBLE", "ruble", "Oil  Price")})
        assert lex.terms("en") == ("ruble", "oil  price")
        assert lex.terms("unknown") == ()

    def test_unknown_language_raises(self, lexicon):
        with pytest.raises(KeyError, match="xx"):
            lexicon.matches("xx", "anything")

    def test_empty_term_list_never_matches(self):
        assert Lexicon({"en": ()}).matches("en", "some words") is False

    def test_regex_metacharacters_are_literal(self):
        lex = Lexicon({"en": ("a.b",)})
        assert lex.matches("en", "the a.b case")
        assert not lex.matches("en", "the axb case")


class TestLoadLexicon(object):
    def test_round_trip(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text(
            "# comment line\n"
            "en\truble\n"
            "\n"
            "en\tsanctions\n"
            "RU\tрубль\n",
            encoding="utf-8",
        )
        lex = load_lexicon(path)
        assert lex.terms("en") == ("ruble", "sanctions")
        assert lex.terms("ru") == ("рубль",)

    def test_missing_tab(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("en ruble\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="row 1"):
            load_lexicon(path)

    def test_empty_term(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("en\truble\nen\t  \n", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="row 2"):
            load_lexicon(path)

    def test_no_terms_at_all(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("# nothing here\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="no terms"):
            load_lexicon(path)


HEADER = "id,page,date,language,text,topic_label\n"


def posts_file(tmp_path, body, name="posts.csv"):
    path = tmp_path / name
    path.write_text(HEADER + body, encoding="utf-8")
    return path


class TestLoadPosts:
    def test_date_and_datetime_forms(self, tmp_path):
        path = posts_file(
            tmp_path,
            "a,P,2021-03-05,en,text one,t\n"
            "b,P,2021-03-06T14:30:00,en,text two,t\n"
            "c,P,2021-03-07T09:00:00Z,en,text three,\n",
        )
        posts = load_posts(path)
        assert [p.date for p in posts] == [
            date(2021, 3, 5),
            date(2021, 3, 6),
            date(2021, 3, 7),
        ]
        assert posts[0].topic_label == "t"
        assert posts[2].topic_label is None

    def test_language_is_folded(self, tmp_path):
        path = posts_file(tmp_path, "a,P,2021-01-01,EN,text,\n")
        assert load_posts(path)[0].language == "en"

    def test_missing_column(self, tmp_path):
        path = tmp_path / "posts.csv"
        path.write_text("id,page,date,text\na,P,2021-01-01,hi\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="language"):
            load_posts(path)

    def test_empty_id(self, tmp_path):
        path = posts_file(tmp_path, " ,P,2021-01-01,en,text,\n")
        with pytest.raises(CorpusFormatError, match=r"row 2.*'id'"):
            load_posts(path)

    def test_duplicate_id(self, tmp_path):
        path = posts_file(
            tmp_path,
            "a,P,2021-01-01,en,one,\na,P,2021-01-02,en,two,\n",
        )
        with pytest.raises(CorpusFormatError, match="row 3") as exc:
            load_posts(path)
        assert exc.value.row == 3
        assert exc.value.column == "id"

    def test_empty_page_and_language(self, tmp_path):
        with pytest.raises(CorpusFormatError, match="page"):
            load_posts(posts_file(tmp_path, "a, ,2021-01-01,en,text,\n"))
        with pytest.raises(CorpusFormatError, match="language"):
            load_posts(posts_file(tmp_path, "a,P,2021-01-01, ,text,\n", "p2.csv"))

    def test_bad_date(self, tmp_path):
        path = posts_file(tmp_path, "a,P,01/02/2021,en,text,\n")
        with pytest.raises(CorpusFormatError, match="01/02/2021"):
            load_posts(path)

    def test_unexpected_page(self, tmp_path):
        path = posts_file(tmp_path, "a,Other,2021-01-01,en,text,\n")
        with pytest.raises(CorpusFormatError, match="'Other'"):
            load_posts(path, pages=("P",))

    def test_date_outside_window(self, tmp_path):
        path = posts_file(tmp_path, "a,P,2020-12-31,en,text,\n")
        window = (MonthStamp(2021, 1), MonthStamp(2021, 6))
        with pytest.raises(CorpusFormatError, match="outside the window"):
            load_posts(path, window=window)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "posts.csv"
        path.write_text(HEADER, encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="no posts"):
            load_posts(path)


class TestAttachLabels:
    def make_posts(self):
        return [
            Post("a", "P", date(2021, 1, 1), "en", "one"),
            Post("b", "P", date(2021, 1, 2), "en", "two", topic_label="old"),
            Post("c", "P", date(2021, 1, 3), "en", "three"),
        ]

    def test_join(self, tmp_path):
        path = tmp_path / "labels.csv"
        path.write_text(
            "id,topic_label\na,markets\nb,weather\nzzz,ignored\n", encoding="utf-8"
        )
        out = attach_labels(self.make_posts(), path)
        assert [p.topic_label for p in out] == ["markets", "weather", None]

    def test_repeated_identical_label_tolerated(self, tmp_path):
        path = tmp_path / "labels.csv"
        path.write_text("id,topic_label\na,markets\na,markets\n", encoding="utf-8")
        out = attach_labels(self.make_posts(), path)
        assert out[0].topic_label == "markets"

    def test_conflict(self, tmp_path):
        path = tmp_path / "labels.csv"
        path.write_text("id,topic_label\na,markets\na,weather\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="conflicting.*'a'"):
            attach_labels(self.make_posts(), path)

    def test_empty_fields(self, tmp_path):
        path = tmp_path / "labels.csv"
        path.write_text("id,topic_label\na,\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="row 2"):
            attach_labels(self.make_posts(), path)


class TestLexiconFilter:
    def posts(self):
        return [
            Post("a", "P", date(2021, 1, 1), "en", "the ruble fell"),
            Post("b", "P", date(2021, 1, 2), "en", "nothing relevant"),
            Post("c", "P", date(2021, 1, 3), "ru", "курс рубль сегодня"),
        ]

    def test_keeps_only_matches(self):
        lex = Lexicon(BOUNDARY_LEXICON)
        out = lexicon_filter(self.posts(), lex)
        assert [p.id for p in out] == ["a", "c"]

    def test_subset_and_idempotent(self):
        lex = Lexicon(BOUNDARY_LEXICON)
        posts = self.posts()
        once = lexicon_filter(posts, lex)
        assert set(p.id for p in once) <= set(p.id for p in posts)
        assert lexicon_filter(once, lex) == once

    def test_uncovered_language_is_loud(self):
        lex = Lexicon({"en": ("ruble",)})
        with pytest.raises(CorpusFormatError, match="ru"):
            lexicon_filter(self.posts(), lex)


class TestAggregateMonthly:
    def test_hand_counted_fixture(self):
        posts, window, expected = hand_counted_posts()
        series = aggregate_monthly(posts, window=window)
        assert sorted(series) == sorted(expected)
        for key, counts in expected.items():
            np.testing.assert_array_equal(series[key].values, counts)
            assert series[key].start == window[0]
            assert series[key].role is Role.TOPIC_COUNT
            assert series[key].name == f"{key[0]} / {key[1]}"

    def test_totals_conserved(self):
        posts, window, _ = hand_counted_posts()
        series = aggregate_monthly(posts, window=window)
        assert sum(ts.values.sum() for ts in series.values()) == len(posts)

    def test_window_inferred_from_posts(self):
        posts, window, _ = hand_counted_posts()
        series = aggregate_monthly(posts)
        assert all(ts.start == window[0] and ts.end == window[1]
                   for ts in series.values())

    def test_explicit_zero_months_beyond_posts(self):
        posts, _, _ = hand_counted_posts()
        wide = (MonthStamp(2020, 11), MonthStamp(2021, 6))
        series = aggregate_monthly(posts, window=wide)
        ts = series[("A", "t1")]
        assert len(ts) == 8
        np.testing.assert_array_equal(ts.values, [0, 0, 2, 0, 1, 1, 0, 0])

    def test_requested_pairs_present_even_when_empty(self):
        posts, window, _ = hand_counted_posts()
        series = aggregate_monthly(
            posts, window=window, pages=("A", "B", "C"), topics=("t1", "t2")
        )
        assert ("C", "t1") in series
        assert series[("C", "t2")].values.sum() == 0

    def test_unlabeled_posts_listed(self):
        posts, window, _ = hand_counted_posts()
        stripped = [
            Post(p.id, p.page, p.date, p.language, p.text) for p in posts[:7]
        ] + posts[7:]
        with pytest.raises(CorpusFormatError, match=r"h1.*\+2 more"):
            aggregate_monthly(stripped, window=window)

    def test_post_outside_window(self):
        posts, _, _ = hand_counted_posts()
        narrow = (MonthStamp(2021, 1), MonthStamp(2021, 3))
        with pytest.raises(CorpusFormatError, match="outside"):
            aggregate_monthly(posts, window=narrow)

    def test_unexpected_page_or_topic(self):
        posts, window, _ = hand_counted_posts()
        with pytest.raises(CorpusFormatError, match="unexpected page"):
            aggregate_monthly(posts, window=window, pages=("A",))
        with pytest.raises(CorpusFormatError, match="unexpected topic"):
            aggregate_monthly(posts, window=window, topics=("t1",))

    def test_empty_input(self):
        with pytest.raises(ValueError, match="empty post list"):
            aggregate_monthly([])
        with pytest.raises(ValueError, match="precedes"):
            aggregate_monthly(
                hand_counted_posts()[0],
                window=(MonthStamp(2021, 4), MonthStamp(2021, 1)),
            )


class TestBuildInterruption:
    WINDOW = (MonthStamp(2021, 1), MonthStamp(2021, 6))

    def test_mid_window_cutoff(self):
        spec = InterruptionSpec("break", date(2021, 3, 11))
        ts = build_interruption(spec, self.WINDOW)
        np.testing.assert_array_equal(ts.values, [0, 0, 1, 1, 1, 1])
        assert ts.role is Role.DUMMY
        assert ts.name == "break"

    def test_first_day_cutoff_is_all_ones(self):
        spec = InterruptionSpec("break", date(2021, 1, 1))
        ts = build_interruption(spec, self.WINDOW)
        np.testing.assert_array_equal(ts.values, [1, 1, 1, 1, 1, 1])

    def test_last_day_cutoff_flags_only_the_final_month(self):
        spec = InterruptionSpec("break", date(2021, 6, 30))
        ts = build_interruption(spec, self.WINDOW)
        np.testing.assert_array_equal(ts.values, [0, 0, 0, 0, 0, 1])

    def test_month_containing_cutoff_counts_as_after(self):
        # The cutoff month itself reads 1 even when the cutoff falls on
        # its last day.
        spec = InterruptionSpec("break", date(2021, 2, 28))
        ts = build_interruption(spec, self.WINDOW)
        np.testing.assert_array_equal(ts.values, [0, 1, 1, 1, 1, 1])

    @pytest.mark.parametrize("when", [date(2020, 12, 31), date(2021, 7, 1)])
    def test_out_of_window_cutoff_rejected(self, when):
        with pytest.raises(ConfigurationError, match="outside"):
            build_interruption(InterruptionSpec("break", when), self.WINDOW)


def indicator_file(tmp_path, rows, name="rate.csv"):
    path = tmp_path / name
    path.write_text(
        "date,value\n" + "".join(f"{d},{v}\n" for d, v in rows), encoding="utf-8"
    )
    return path


class TestLoadIndicator:
    def test_monthly_mean(self, tmp_path):
        path = indicator_file(
            tmp_path,
            [("2021-01-10", "60"), ("2021-01-20", "62"), ("2021-02-05", "70")],
        )
        ts = load_indicator(path, "monthly_mean")
        np.testing.assert_allclose(ts.values, [61.0, 70.0])
        assert ts.start == MonthStamp(2021, 1)
        assert ts.name == "rate"
        assert ts.role is Role.INDICATOR

    def test_inverse_rate_inverts_daily_then_averages(self, tmp_path):
        path = indicator_file(
            tmp_path, [("2021-01-10", "80"), ("2021-01-20", "40")]
        )
        ts = load_indicator(path, "inverse_rate")
        # mean(1/80, 1/40), not 1/mean(80, 40)
        assert ts.values[0] == pytest.approx((0.0125 + 0.025) / 2, abs=1e-15)
        assert ts.values[0] != pytest.approx(1.0 / 60.0, abs=1e-6)

    def test_single_quote_month_is_exact(self, tmp_path):
        path = indicator_file(tmp_path, [("2021-01-15", "80")])
        assert load_indicator(path, "inverse_rate").values[0] == 0.0125

    def test_inverse_round_trip(self, tmp_path):
        quotes = [("2021-01-05", "73.25"), ("2021-02-05", "68.5"), ("2021-03-05", "90.125")]
        path = indicator_file(tmp_path, quotes)
        ts = load_indicator(path, "inverse_rate")
        recovered = 1.0 / ts.values
        np.testing.assert_allclose(
            recovered, [float(v) for _, v in quotes], atol=1e-12
        )

    def test_explicit_name(self, tmp_path):
        path = indicator_file(tmp_path, [("2021-01-01", "5")])
        assert load_indicator(path, "monthly_mean", name="oil").name == "oil"

    def test_gap_names_missing_months(self, tmp_path):
        path = indicator_file(
            tmp_path, [("2021-01-10", "60"), ("2021-04-10", "61")]
        )
        with pytest.raises(GapError, match="2021-02, 2021-03"):
            load_indicator(path, "monthly_mean")

    def test_rows_out_of_order_are_fine(self, tmp_path):
        path = indicator_file(
            tmp_path, [("2021-02-10", "70"), ("2021-01-10", "60")]
        )
        ts = load_indicator(path, "monthly_mean")
        np.testing.assert_allclose(ts.values, [60.0, 70.0])

    def test_duplicate_date(self, tmp_path):
        path = indicator_file(
            tmp_path, [("2021-01-10", "60"), ("2021-01-10", "61")]
        )
        with pytest.raises(CorpusFormatError, match="duplicate date"):
            load_indicator(path, "monthly_mean")

    def test_bad_values(self, tmp_path):
        with pytest.raises(CorpusFormatError, match="invalid value"):
            load_indicator(
                indicator_file(tmp_path, [("2021-01-01", "abc")], "a.csv"),
                "monthly_mean",
            )
        with pytest.raises(CorpusFormatError, match="non-finite"):
            load_indicator(
                indicator_file(tmp_path, [("2021-01-01", "inf")], "b.csv"),
                "monthly_mean",
            )
        with pytest.raises(CorpusFormatError, match="positive"):
            load_indicator(
                indicator_file(tmp_path, [("2021-01-01", "-3")], "c.csv"),
                "inverse_rate",
            )

    def test_negative_fine_for_plain_mean(self, tmp_path):
        path = indicator_file(tmp_path, [("2021-01-01", "-3")])
        assert load_indicator(path, "monthly_mean").values[0] == -3.0

    def test_unknown_kind_and_empty(self, tmp_path):
        path = indicator_file(tmp_path, [("2021-01-01", "5")])
        with pytest.raises(ValueError, match="kind"):
            load_indicator(path, "median")
        empty = tmp_path / "empty.csv"
        empty.write_text("date,value\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="no observations"):
            load_indicator(empty, "monthly_mean")
