"""Command line entry point; verbs mirror the job kinds plus ``serve``.

    uipref --store ./run gen-descriptions --target-n 20
    uipref --store ./run gen-candidates --n 32
    uipref --store ./run render
    uipref --store ./run filter --k 8
    uipref --store ./run transform-feedback
    uipref --store ./run train-reward
    uipref --store ./run score --head-path ./run/heads/reward-head.json
    uipref --store ./run build-pairs
    uipref --store ./run export-orpo --destination pairs.jsonl
    uipref --store ./run ratings
    uipref --store ./run serve --port 8000
"""

from __future__ import annotations

import argparse
import json
import sys

from ..corpus.store import CorpusStore
from ..gateway.client import GatewayClient
from ..gateway.profile import BackendProfile
from .config import ServiceConfig, load_config
from .jobs import JobRunner, JobSpec


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="YAML config file")
    parser.add_argument("--store", help="store root directory")
    parser.add_argument("--seed", type=int, help="job seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uipref")
    _add_common(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-descriptions", help="synthesize UI descriptions")
    p.add_argument("--target-n", type=int, required=True)
    p.add_argument("--split", default="train", choices=["train", "eval"])
    p.add_argument("--seed-example", action="append", dest="seed_examples")

    p = sub.add_parser("gen-candidates", help="sample candidate pages per description")
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--model", default="", help="tag outputs with a generator name")
    p.add_argument("--split", default=None, choices=["train", "eval"])

    sub.add_parser("render", help="render screenshots, geometry, and sketch docs")

    p = sub.add_parser("filter", help="retain the top-k candidates per batch")
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--head-path")

    p = sub.add_parser("transform-feedback", help="turn annotations into preference pairs")
    p.add_argument("--scale-factor", type=float, default=1.0)

    p = sub.add_parser("train-reward", help="train the reward head on stored pairs")
    p.add_argument("--max-steps", type=int, default=100)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--weight-decay", type=float, default=0.2)
    p.add_argument("--learning-rate", type=float, default=1e-3)
    p.add_argument("--margin", type=float, default=1e-2)
    p.add_argument("--aug-prob", type=float, default=0.5)
    p.add_argument("--provenance")
    p.add_argument("--head-out", default="reward-head.json")

    p = sub.add_parser("score", help="score all candidates with a reward head")
    p.add_argument("--head-path")

    p = sub.add_parser("build-pairs", help="build alignment pairs from scored batches")
    p.add_argument("--head-path")
    p.add_argument("--pairs-per-description", type=int, default=1)

    p = sub.add_parser("export-orpo", help="export alignment pairs as JSONL")
    p.add_argument("--destination", required=True)
    p.add_argument("--max-tokens", type=int, default=4096)

    p = sub.add_parser("ratings", help="compute Elo ratings from recorded battles")
    p.add_argument("--k-factor", type=float, default=4.0)
    p.add_argument("--bootstrap-rounds", type=int, default=1000)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host")
    p.add_argument("--port", type=int)

    return parser


_PARAM_KEYS = {
    "gen-descriptions": ["target_n", "split", "seed_examples"],
    "gen-candidates": ["n", "model", "split"],
    "render": [],
    "filter": ["k", "head_path"],
    "transform-feedback": ["scale_factor"],
    "train-reward": [
        "max_steps",
        "batch_size",
        "weight_decay",
        "learning_rate",
        "margin",
        "aug_prob",
        "provenance",
        "head_out",
    ],
    "score": ["head_path"],
    "build-pairs": ["head_path", "pairs_per_description"],
    "export-orpo": ["destination", "max_tokens"],
    "ratings": ["k_factor", "bootstrap_rounds"],
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = load_config(args.config)
    if args.store:
        config.store_root = args.store
    if args.seed is not None:
        config.seed = args.seed

    if args.command == "serve":
        import uvicorn

        from .app import create_app

        if args.host:
            config.host = args.host
        if args.port:
            config.port = args.port
        uvicorn.run(create_app(config), host=config.host, port=config.port)
        return 0

    store = CorpusStore(config.store_root, fsync=config.fsync)
    gateway = GatewayClient(
        BackendProfile(
            seed=config.seed,
            viewport=config.viewport,
            embedding_dim=config.embedding_dim,
            max_output_tokens=config.max_output_tokens,
        )
    )
    runner = JobRunner(store, gateway)
    parameters = {
        key: getattr(args, key)
        for key in _PARAM_KEYS[args.command]
        if getattr(args, key, None) is not None
    }
    report = runner.run(JobSpec(kind=args.command, parameters=parameters, seed=config.seed))
    json.dump(report.to_dict(), sys.stdout, indent=2)
    print()
    return 0 if report.status == "done" else 1


if __name__ == "__main__":
    sys.exit(main())
