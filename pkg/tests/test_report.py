"""CSV ingestion, the analysis pipeline, and JSON round trips."""

from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given

from flipbet import (
    AnalysisOptions,
    Bet,
    CsvFormatError,
    Face,
    Flip,
    GameConfig,
    ValidationError,
    analyze,
    load_bets,
    load_flips,
    make_trace,
    report_from_json,
    report_to_dict,
    report_to_json,
    trace_from_dict,
    trace_to_dict,
)
from conftest import traces

H, T = Face.HEADS, Face.TAILS


class TestLoadFlips:
    def test_single_row(self, tmp_path):
        path = tmp_path / "flips.csv"
        path.write_text("0.0,H\n")
        assert load_flips(path) == [Flip(0.0, H)]

    def test_duplicate_time_reported_with_line(self, tmp_path):
        path = tmp_path / "flips.csv"
        path.write_text("0.0,H\n0.0,T\n")
        with pytest.raises(CsvFormatError) as err:
            load_flips(path)
        assert err.value.line == 2
        assert "duplicate" in str(err.value)

    def test_header_row_skipped(self, tmp_path):
        path = tmp_path / "flips.csv"
        path.write_text("time,outcome\n0.0,H\n0.5,T\n")
        assert load_flips(path) == [Flip(0.0, H), Flip(0.5, T)]

    def test_crlf_accepted(self, tmp_path):
        path = tmp_path / "flips.csv"
        path.write_bytes(b"0.0,H\r\n0.5,T\r\n")
        assert load_flips(path) == [Flip(0.0, H), Flip(0.5, T)]

    def test_rows_are_time_ordered(self, tmp_path):
        path = tmp_path / "flips.csv"
        path.write_text("0.5,T\n0.0,H\n")
        assert load_flips(path) == [Flip(0.0, H), Flip(0.5, T)]

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_flips(tmp_path / "nope.csv")

    def test_malformed_time_reports_line(self, tmp_path):
        path = tmp_path / "flips.csv"
        path.write_text("0.0,H\nabc,T\n")
        with pytest.raises(CsvFormatError) as err:
            load_flips(path)
        assert err.value.line == 2 and "malformed time" in str(err.value)

    def test_negative_time_rejected(self, tmp_path):
        path = tmp_path / "flips.csv"
        path.write_text("-0.5,H\n")
        with pytest.raises(CsvFormatError, match="out of range"):
            load_flips(path)

    def test_unknown_face_token_rejected(self, tmp_path):
        path = tmp_path / "flips.csv"
        path.write_text("0.0,X\n")
        with pytest.raises(CsvFormatError, match="unknown face token"):
            load_flips(path)

    def test_wrong_field_count_rejected(self, tmp_path):
        path = tmp_path / "flips.csv"
        path.write_text("0.0,H,extra\n")
        with pytest.raises(CsvFormatError, match="expected 2 fields"):
            load_flips(path)


class TestLoadBets:
    def test_paradox_bet_plan(self, tmp_path):
        path = tmp_path / "bets.csv"
        path.write_text("0.3,H\n0.7,H\n")
        assert load_bets(path) == [Bet(0.3, H), Bet(0.7, H)]

    def test_equal_times_keep_file_order(self, tmp_path):
        path = tmp_path / "bets.csv"
        path.write_text("0.5,H\n0.5,T\n0.2,T\n")
        assert load_bets(path) == [Bet(0.2, T), Bet(0.5, H), Bet(0.5, T)]

    def test_lowercase_tokens_accepted(self, tmp_path):
        path = tmp_path / "bets.csv"
        path.write_text("0.3,h\n0.7,t\n")
        assert load_bets(path) == [Bet(0.3, H), Bet(0.7, T)]


class TestAnalyze:
    def test_canonical_record(self, paradox_trace):
        report = analyze(paradox_trace)
        assert report.bet_count == 2
        assert report.flip_count == 1
        assert report.effective_events == 1
        assert report.wins == 2
        assert report.effective_wins == 1
        assert report.naive_compound == 0.25
        assert report.true_compound == 0.5
        assert report.naive_pvalue == 0.25
        assert report.corrected_pvalue == 0.5
        assert report.randomization is None

    def test_empty_record(self):
        trace = make_trace(GameConfig(horizon=1.0), [Flip(0.0, H)], [])
        report = analyze(trace)
        assert report.bet_count == 0
        assert report.effective_events == 0
        assert report.naive_compound == 1.0
        assert report.true_compound == 1.0
        assert report.naive_pvalue == 1.0
        assert report.corrected_pvalue == 1.0

    def test_epoch_separated_winning_bets_agree(self, new_launch_trace):
        # brute force: of the 4 equally likely two-guess records a fair
        # guesser can produce, exactly 1 reproduces two wins out of two
        guesses = [
            sum(guess == actual for guess, actual in zip(combo, (H, T)))
            for combo in product((H, T), repeat=2)
        ]
        oracle = sum(w >= 2 for w in guesses) / len(guesses)
        report = analyze(new_launch_trace)
        assert report.naive_pvalue == report.corrected_pvalue == oracle == 0.25

    def test_conflicting_epoch_scores_zero_effective_wins(self):
        trace = make_trace(
            GameConfig(horizon=1.0), [Flip(0.0, H)], [Bet(0.3, H), Bet(0.7, T)]
        )
        report = analyze(trace)
        assert report.true_compound == 0.0
        assert report.effective_events == 1
        assert report.effective_wins == 0

    def test_losing_epoch_is_not_an_effective_win(self):
        trace = make_trace(
            GameConfig(horizon=1.0),
            [Flip(0.0, T), Flip(0.5, H)],
            [Bet(0.3, H), Bet(0.7, H)],
        )
        report = analyze(trace)
        assert report.effective_events == 2
        assert report.effective_wins == 1
        assert report.wins == 1

    def test_randomization_runs_per_bet_and_is_seeded(self, paradox_trace):
        options = AnalysisOptions(randomization_trials=300, seed=12)
        report = analyze(paradox_trace, options)
        again = analyze(paradox_trace, options)
        assert report == again
        assert len(report.randomization) == 2
        assert all(r.trials == 300 for r in report.randomization)
        assert report.randomization[1].change_fraction == 0.0

    @given(traces())
    def test_deflation_inequality_on_clean_records(self, trace):
        report = analyze(trace)
        assert report.effective_events <= report.bet_count
        if report.wins == report.bet_count and report.effective_wins == report.effective_events:
            assert report.corrected_pvalue >= report.naive_pvalue

    @given(traces())
    def test_one_bet_per_epoch_makes_both_estimates_agree(self, trace):
        from flipbet import group_by_epoch

        grouping = group_by_epoch(trace)
        if all(len(ix) == 1 for ix in grouping.bets_per_epoch.values()):
            report = analyze(trace)
            assert report.naive_compound == report.true_compound


class TestRoundTrips:
    def test_report_json_round_trip(self, paradox_trace):
        report = analyze(paradox_trace, AnalysisOptions(randomization_trials=100, seed=2))
        assert report_from_json(report_to_json(report)) == report

    def test_trace_dict_round_trip(self, paradox_trace):
        assert trace_from_dict(trace_to_dict(paradox_trace)) == paradox_trace

    def test_tampered_trace_document_rejected(self, paradox_trace):
        doc = trace_to_dict(paradox_trace)
        doc["resolutions"] = [False, True]
        with pytest.raises(ValidationError):
            trace_from_dict(doc)

    def test_malformed_trace_document_rejected(self):
        with pytest.raises(ValidationError, match="malformed"):
            trace_from_dict({"config": {}})

    def test_report_numbers_stay_within_12_significant_digits(self):
        trace = make_trace(
            GameConfig(horizon=1.0, coin_bias=0.6),
            [Flip(0.0, H)],
            [Bet(0.2, H), Bet(0.5, H), Bet(0.8, H)],
        )
        doc = report_to_dict(analyze(trace))
        for name in ("naive_compound", "true_compound", "naive_pvalue", "corrected_pvalue"):
            assert float(f"{doc[name]:.12g}") == doc[name]
