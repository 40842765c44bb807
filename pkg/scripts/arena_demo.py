#!/usr/bin/env python3
"""Simulate an arena and print Elo medians with bootstrap CIs and win rates.

Six synthetic generators with different hidden strengths battle under a
uniform random scheduler; judges pick the stronger model with probability
proportional to the strength gap.

    python scripts/arena_demo.py --battles 405 --seed 7
"""

from __future__ import annotations

import argparse

import numpy as np

from uipref.arena import Battle, RatingConfig, rating_report, schedule_match


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--battles", type=int, default=405)
    parser.add_argument("--rounds", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    strengths = {
        "sketch-tuned": 0.80,
        "revision-tuned": 0.70,
        "stock-reward": 0.58,
        "base-coder": 0.50,
        "comment-tuned": 0.46,
        "ranking-tuned": 0.40,
    }
    models = sorted(strengths)
    descriptions = [f"d-{i:03d}" for i in range(210)]
    rng = np.random.default_rng(args.seed)

    battles = []
    for _ in range(args.battles):
        match = schedule_match(models, descriptions, rng)
        left, right = match.left_model, match.right_model
        p_left = strengths[left] / (strengths[left] + strengths[right])
        winner = "left" if rng.random() < p_left else "right"
        battles.append(match.to_battle(winner, judge_id="sim"))

    report = rating_report(battles, RatingConfig(bootstrap_rounds=args.rounds, rng_seed=args.seed))

    print(f"{args.battles} battles, {len(models)} models, {args.rounds} bootstrap rounds\n")
    print(f"{'model':<12} {'median':>8} {'2.5%':>8} {'97.5%':>8} {'avg win':>8}")
    ordered = sorted(report.ratings.items(), key=lambda kv: -kv[1].median)
    for model, rating in ordered:
        avg = report.average_win_rate.get(model, float('nan'))
        print(f"{model:<12} {rating.median:8.1f} {rating.ci_low:8.1f} {rating.ci_high:8.1f} {avg:8.2f}")


if __name__ == "__main__":
    main()
