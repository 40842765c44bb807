from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uipref.arena import (
    AgreementRecord,
    Battle,
    RatingConfig,
    agreement,
    bootstrap_ratings,
    elo_sequence,
    rating_report,
    read_battles,
    schedule_match,
    win_rate_matrix,
    write_battles,
)
from uipref.errors import ConfigurationError, ValidationError


def oracle_elo(battles, k=4.0, scale=400.0, base=10.0, initial=1000.0, models=()):
    """Independent step-by-step recomputation of the online update."""
    ratings = {m: initial for m in models}
    for battle in battles:
        ratings.setdefault(battle.model_a, initial)
        ratings.setdefault(battle.model_b, initial)
        ra, rb = ratings[battle.model_a], ratings[battle.model_b]
        ea = 1.0 / (1.0 + base ** ((rb - ra) / scale))
        eb = 1.0 / (1.0 + base ** ((ra - rb) / scale))
        sa = 1.0 if battle.winner == "a" else 0.0
        ratings[battle.model_a] = ra + k * (sa - ea)
        ratings[battle.model_b] = rb + k * ((1.0 - sa) - eb)
    return ratings


def random_battles(rng, n, models=("m1", "m2", "m3", "m4")):
    out = []
    for i in range(n):
        a, b = rng.choice(len(models), size=2, replace=False)
        out.append(
            Battle(
                model_a=models[int(a)],
                model_b=models[int(b)],
                description_id=f"d-{i % 7}",
                winner="a" if rng.random() < 0.5 else "b",
                judge_id=f"j{i % 3}",
                timestamp=float(i),
            )
        )
    return out


# -- battles ---------------------------------------------------------------------


def test_battle_validation():
    with pytest.raises(ValidationError):
        Battle(model_a="m", model_b="m", description_id="d", winner="a")
    with pytest.raises(ValidationError):
        Battle(model_a="m1", model_b="m2", description_id="d", winner="left")


def test_battle_log_round_trip(tmp_path):
    battles = random_battles(np.random.default_rng(0), 20)
    path = tmp_path / "battles.jsonl"
    assert write_battles(battles, path) == 20
    assert read_battles(path) == battles


def test_schedule_six_models_gives_fifteen_pairings():
    models = [f"m{i}" for i in range(6)]
    rng = np.random.default_rng(0)
    seen = set()
    for _ in range(3000):
        match = schedule_match(models, ["d-1"], rng)
        seen.add(tuple(sorted((match.left_model, match.right_model))))
    assert len(seen) == 15


def test_scheduled_battles_spread_over_pairings():
    models = [f"m{i}" for i in range(6)]
    rng = np.random.default_rng(7)
    counts: dict[tuple[str, str], int] = {}
    for _ in range(405):
        match = schedule_match(models, ["d-1", "d-2"], rng)
        key = tuple(sorted((match.left_model, match.right_model)))
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 15
    assert sum(counts.values()) == 405
    assert abs(np.mean(list(counts.values())) - 27.0) < 1e-9


def test_judge_payload_is_blind():
    match = schedule_match(["m1", "m2"], ["d-1"], np.random.default_rng(0))
    payload = match.judge_payload("a page", "ref-left", "ref-right")
    blob = str(payload)
    assert "m1" not in blob and "m2" not in blob
    assert set(payload) == {"description", "left_ref", "right_ref"}


def test_schedule_requires_two_models():
    with pytest.raises(ConfigurationError):
        schedule_match(["only"], ["d-1"], np.random.default_rng(0))


def test_balancing_mode_prefers_uncovered_pairing():
    history = [
        Battle(model_a="m1", model_b="m2", description_id="d", winner="a") for _ in range(10)
    ]
    rng = np.random.default_rng(0)
    for _ in range(20):
        match = schedule_match(
            ["m1", "m2", "m3"], ["d"], rng, history=history, balance_coverage=True
        )
        assert tuple(sorted((match.left_model, match.right_model))) != ("m1", "m2")


# -- elo -------------------------------------------------------------------------


def test_single_battle_updates_to_1002_998():
    battle = Battle(model_a="A", model_b="B", description_id="d", winner="a")
    ratings = elo_sequence([battle], RatingConfig())
    assert ratings["A"] == pytest.approx(1002.0, abs=1e-12)
    assert ratings["B"] == pytest.approx(998.0, abs=1e-12)


def test_zero_battles_all_initial():
    ratings = elo_sequence([], RatingConfig(), models=["A", "B", "C"])
    assert ratings == {"A": 1000.0, "B": 1000.0, "C": 1000.0}


def test_elo_matches_independent_oracle_on_random_logs():
    rng = np.random.default_rng(99)
    for _ in range(100):
        battles = random_battles(rng, 50)
        ours = elo_sequence(battles, RatingConfig())
        oracle = oracle_elo(battles)
        assert set(ours) == set(oracle)
        for model in ours:
            assert ours[model] == oracle[model]  # exact, same arithmetic order


def test_elo_conservation_per_battle():
    rng = np.random.default_rng(5)
    battles = random_battles(rng, 80)
    cfg = RatingConfig()
    running: list[Battle] = []
    previous_sum = 4 * cfg.initial_rating
    for battle in battles:
        running.append(battle)
        ratings = elo_sequence(running, cfg, models=("m1", "m2", "m3", "m4"))
        assert sum(ratings.values()) == pytest.approx(previous_sum, abs=1e-9)


def test_elo_relabeling_invariance():
    rng = np.random.default_rng(13)
    battles = random_battles(rng, 60)
    mapping = {"m1": "x1", "m2": "x2", "m3": "x3", "m4": "x4"}
    renamed = [
        Battle(
            model_a=mapping[b.model_a],
            model_b=mapping[b.model_b],
            description_id=b.description_id,
            winner=b.winner,
        )
        for b in battles
    ]
    original = elo_sequence(battles, RatingConfig())
    relabeled = elo_sequence(renamed, RatingConfig())
    for old, new in mapping.items():
        assert original[old] == relabeled[new]


# -- bootstrap -------------------------------------------------------------------


def _dominance_log():
    battles = []
    for opponent in ("B", "C"):
        for i in range(100):
            battles.append(
                Battle(model_a="A", model_b=opponent, description_id=f"d-{i}", winner="a")
            )
    return battles


def test_bootstrap_dominant_model_separates():
    report = bootstrap_ratings(_dominance_log(), RatingConfig(rng_seed=17))
    assert report["A"].median > report["B"].median
    assert report["A"].median > report["C"].median
    assert report["A"].ci_low > report["B"].ci_high
    assert report["A"].ci_low > report["C"].ci_high


def test_bootstrap_single_round_equals_resample_rating():
    battles = random_battles(np.random.default_rng(2), 30)
    cfg = RatingConfig(bootstrap_rounds=1, rng_seed=4)
    report = bootstrap_ratings(battles, cfg)
    for model, rating in report.items():
        assert rating.median == rating.ci_low == rating.ci_high


def test_bootstrap_deterministic_under_seed():
    battles = random_battles(np.random.default_rng(3), 40)
    cfg = RatingConfig(bootstrap_rounds=200, rng_seed=11)
    assert bootstrap_ratings(battles, cfg) == bootstrap_ratings(battles, cfg)


def test_bootstrap_stochastic_dominance():
    battles = random_battles(np.random.default_rng(21), 60, models=("m1", "m2", "m3"))
    winner_takes_all = [
        Battle(
            model_a=b.model_a,
            model_b=b.model_b,
            description_id=b.description_id,
            winner="a" if "m1" == b.model_a else ("b" if b.model_b == "m1" else b.winner),
        )
        for b in battles
    ]
    report = bootstrap_ratings(winner_takes_all, RatingConfig(bootstrap_rounds=300, rng_seed=8))
    assert report["m1"].median == max(r.median for r in report.values())


# -- win rates -------------------------------------------------------------------


def test_win_rate_counts():
    battles = [
        Battle(model_a="A", model_b="B", description_id="d", winner="a"),
        Battle(model_a="B", model_b="A", description_id="d", winner="b"),
        Battle(model_a="A", model_b="B", description_id="d", winner="b"),
    ]
    rates, averages = win_rate_matrix(battles)
    assert rates[("A", "B")] == pytest.approx(2 / 3)
    assert rates[("B", "A")] == pytest.approx(1 / 3)
    assert averages["A"] == pytest.approx(2 / 3)


def test_win_rate_absent_pairings_excluded():
    battles = [Battle(model_a="A", model_b="B", description_id="d", winner="a")]
    rates, averages = win_rate_matrix(battles)
    assert ("A", "C") not in rates
    assert "C" not in averages


def test_win_rate_matches_brute_force_tally():
    rng = np.random.default_rng(14)
    models = tuple(f"m{i}" for i in range(6))
    battles = random_battles(rng, 300, models=models)
    rates, averages = win_rate_matrix(battles)

    for i in models:
        for j in models:
            if i == j:
                continue
            wins = sum(1 for b in battles if {b.model_a, b.model_b} == {i, j} and b.winner_model == i)
            total = sum(1 for b in battles if {b.model_a, b.model_b} == {i, j})
            if total == 0:
                assert (i, j) not in rates
            else:
                assert rates[(i, j)] == pytest.approx(wins / total)


@given(st.integers(0, 2**31 - 1), st.integers(2, 120))
@settings(max_examples=30, deadline=None)
def test_win_rate_antisymmetry(seed, n):
    battles = random_battles(np.random.default_rng(seed), n)
    rates, _ = win_rate_matrix(battles)
    for (i, j), value in rates.items():
        assert rates[(j, i)] == pytest.approx(1.0 - value)


# -- agreement --------------------------------------------------------------------


def _records(stratum, agree, disagree):
    return [
        AgreementRecord(pair_ref=f"{stratum}-{i}", stratum=stratum, rater_choice="chosen")
        for i in range(agree)
    ] + [
        AgreementRecord(pair_ref=f"{stratum}-d{i}", stratum=stratum, rater_choice="rejected")
        for i in range(disagree)
    ]


def test_agreement_three_of_four():
    report = agreement(_records("ranking", 3, 1))
    assert report.overall_percent == 75.0


def test_agreement_429_of_695():
    records = (
        _records("revising", 137, 180 - 137)
        + _records("ranking", 89, 181 - 89)
        + _records("sketching", 117, 184 - 117)
        + _records("commenting", 86, 150 - 86)
    )
    assert len(records) == 695
    report = agreement(records)
    assert report.overall_percent == pytest.approx(61.7, abs=0.05)
    assert report.per_stratum["revising"] == pytest.approx(76.1, abs=0.05)
    assert report.per_stratum["ranking"] == pytest.approx(49.2, abs=0.05)
    assert report.per_stratum["sketching"] == pytest.approx(63.6, abs=0.05)
    assert report.per_stratum["commenting"] == pytest.approx(57.3, abs=0.05)


def test_agreement_empty_stratum_absent():
    report = agreement(_records("ranking", 2, 2))
    assert "revising" not in report.per_stratum


def test_agreement_rejects_unknown_stratum():
    with pytest.raises(ValidationError):
        AgreementRecord(pair_ref="p", stratum="other", rater_choice="chosen")


# -- report export -------------------------------------------------------------------


def test_rating_report_csvs(tmp_path):
    battles = random_battles(np.random.default_rng(6), 50)
    report = rating_report(battles, RatingConfig(bootstrap_rounds=50, rng_seed=3))
    ratings_csv = tmp_path / "ratings.csv"
    matrix_csv = tmp_path / "matrix.csv"
    report.write_ratings_csv(ratings_csv)
    report.write_matrix_csv(matrix_csv)
    lines = ratings_csv.read_text().strip().splitlines()
    assert lines[0] == "model,median,ci_low,ci_high"
    assert len(lines) == 5
    matrix_lines = matrix_csv.read_text().strip().splitlines()
    assert matrix_lines[0].startswith("model,")
