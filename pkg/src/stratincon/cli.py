"""Command-line entry point.

Subcommands cover the full pipeline: generate synthetic matches, ingest and
validate logs, train and evaluate the predictor, build analysis bundles, run
the HTTP service, and export findings as text.

Exit codes: 0 on success, 1 on a domain error (one machine-parsable line on
stderr: ``error: <kind>: <message>``), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import matchgen, predictor, service
from .analysis import build_bundle
from .store import StoreError, Workspace
from .telemetry import (
    TelemetryError,
    compute_normalization,
    parse_match_log,
    serialize_match_log,
    validate_match_log,
)

DOMAIN_ERRORS = (
    TelemetryError,
    StoreError,
    matchgen.ConfigError,
    matchgen.SpanError,
    predictor.ShapeError,
    predictor.EmptyDataset,
    predictor.DivergenceError,
    FileNotFoundError,
)


def _fail(exc: Exception) -> int:
    kind = type(exc).__name__
    message = str(exc).replace("\n", " ")
    print(f"error: {kind}: {message}", file=sys.stderr)
    return 1


def _load_logs(workspace: Workspace, match_ids: Optional[Sequence[str]]):
    ids = list(match_ids) if match_ids else workspace.list_matches()
    if not ids:
        raise predictor.EmptyDataset("workspace has no matches")
    return [parse_match_log(workspace.get_match(mid)) for mid in ids]


def _cmd_gen(args) -> int:
    policy = (
        matchgen.structured_policy()
        if args.policy == "structured"
        else matchgen.deterministic_policy(
            {
                (role, phase): matchgen._ROLE_CYCLES[role][i % 3]
                for role in matchgen.ROLE_ORDER
                for i, phase in enumerate(matchgen.PHASES)
            }
        )
    )
    out_dir = Path(args.out) if args.out else None
    for i in range(args.matches):
        seed = args.seed + i
        config = matchgen.GenConfig(
            seed=seed,
            n_frames=args.frames,
            behavior_policy=policy,
            match_id=f"{args.prefix}{seed:08d}" if args.prefix else "",
        )
        log, truth = matchgen.generate_match(config)
        raw = serialize_match_log(log)
        if out_dir is None:
            sys.stdout.buffer.write(raw)
        else:
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / f"{log.match_id}.log").write_bytes(raw)
            sidecar = json.dumps(matchgen.ground_truth_to_json(truth), sort_keys=True)
            (out_dir / f"{log.match_id}.truth.json").write_text(sidecar + "\n")
            print(log.match_id)
    return 0


def _cmd_ingest(args) -> int:
    workspace = Workspace(args.workspace)
    workspace.ensure_dirs()
    sources = [("<stdin>", sys.stdin.buffer.read())] if not args.files else [
        (f, Path(f).read_bytes()) for f in args.files
    ]
    for name, raw in sources:
        log = parse_match_log(raw)
        report = validate_match_log(log)
        if report.findings and not args.force:
            first = report.findings[0]
            raise TelemetryError(
                f"{name}: {len(report.findings)} validation findings, "
                f"first {first.kind} at frame {first.frame_index}"
            )
        workspace.put_match(log.match_id, raw)
        print(log.match_id)
    return 0


def _cmd_validate(args) -> int:
    log = parse_match_log(Path(args.file).read_bytes())
    report = validate_match_log(log)
    for finding in report.findings:
        print(f"{finding.kind}\tframe={finding.frame_index}\t{finding.detail}")
    print(f"{len(report.findings)} findings")
    return 1 if report.findings else 0


def _cmd_train(args) -> int:
    workspace = Workspace(args.workspace)
    workspace.ensure_dirs()
    logs = _load_logs(workspace, args.matches)
    stats = compute_normalization(logs)
    samples = []
    for log in logs:
        samples.extend(predictor.build_windows(log, stats, gap_max=args.gap_max))
    config = predictor.TrainConfig(
        epochs=args.epochs, batch_size=args.batch, learning_rate=args.lr, seed=args.seed
    )
    model = predictor.init_model(stats, hidden_size=args.hidden, seed=args.seed, config=config)
    model, report = predictor.train(model, samples, config)
    workspace.put_model(args.name, predictor.save_model(model))
    print(
        f"model={args.name} samples={len(samples)} "
        f"loss={report.loss_curve[-1]:.6f} mse={report.mse:.6f} "
        f"mae={report.mae:.6f} top1={report.top1_accuracy:.4f}"
    )
    return 0


def _cmd_eval(args) -> int:
    workspace = Workspace(args.workspace)
    model = predictor.load_model(workspace.get_model(args.name))
    logs = _load_logs(workspace, args.matches)
    samples = []
    for log in logs:
        samples.extend(predictor.build_windows(log, model.stats, gap_max=args.gap_max))
    result = predictor.evaluate(model, samples)
    baseline = predictor.persistence_metrics(samples)
    print(
        f"model mse={result.mse:.6f} mae={result.mae:.6f} top1={result.top1_accuracy:.4f}"
    )
    print(
        f"persistence mse={baseline.mse:.6f} mae={baseline.mae:.6f} "
        f"top1={baseline.top1_accuracy:.4f}"
    )
    return 0


def _cmd_analyze(args) -> int:
    workspace = Workspace(args.workspace)
    workspace.ensure_dirs()
    model = predictor.load_model(workspace.get_model(args.name))
    ids = args.matches or workspace.list_matches()
    for mid in ids:
        log = parse_match_log(workspace.get_match(mid))
        bundle = build_bundle(log, model, tau=args.tau, gap_max=args.gap_max)
        workspace.put_bundle(bundle)
        print(f"{mid}\trecords={len(bundle.records)}\tevents={len(bundle.events)}")
    return 0


def _cmd_serve(args) -> int:
    argv = ["--workspace", args.workspace, "--bind", args.bind]
    return service.main(argv)


def _cmd_export(args) -> int:
    workspace = Workspace(args.workspace)
    bundle = workspace.get_bundle(args.match)
    print(f"match {bundle.match_id} model {bundle.model_version}")
    print("id\tslot\tt_start\tt_end\tobserved\tpredicted\tconfidence")
    for r in bundle.records:
        top = r["predicted_top3"][0]
        print(
            f"{r['id']}\t{r['slot']}\t{r['t_start']:g}\t{r['t_end']:g}\t"
            f"{r['observed_behavior']}\t{top['behavior']}\t{top['prob']:.4f}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stratincon")
    sub = parser.add_subparsers(dest="command", required=True)

    def ws(p):
        p.add_argument("--workspace", default=".", help="workspace root directory")

    p = sub.add_parser("gen", help="generate synthetic match logs")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--frames", type=int, default=2200)
    p.add_argument("--matches", type=int, default=1)
    p.add_argument("--policy", choices=("structured", "deterministic"), default="structured")
    p.add_argument("--prefix", default="")
    p.add_argument("--out", default=None, help="directory; omit to stream one log to stdout")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("ingest", help="validate and store match logs")
    ws(p)
    p.add_argument("files", nargs="*", help="log files; omit to read one log from stdin")
    p.add_argument("--force", action="store_true", help="store despite validation findings")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("validate", help="report integrity findings for a log file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("train", help="train the strategy predictor")
    ws(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--epochs", type=int, default=1000)
    p.add_argument("--batch", type=int, default=16)
    p.add_argument("--lr", type=float, default=3e-4)
    p.add_argument("--hidden", type=int, default=128)
    p.add_argument("--gap-max", type=float, default=2.0)
    p.add_argument("--name", default="model")
    p.add_argument("--matches", nargs="*", default=None)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a stored model")
    ws(p)
    p.add_argument("--name", default="model")
    p.add_argument("--gap-max", type=float, default=2.0)
    p.add_argument("--matches", nargs="*", default=None)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("analyze", help="build analysis bundles for stored matches")
    ws(p)
    p.add_argument("--name", default="model")
    p.add_argument("--tau", type=float, default=0.5)
    p.add_argument("--gap-max", type=float, default=2.0)
    p.add_argument("--matches", nargs="*", default=None)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("serve", help="run the read-only HTTP API")
    ws(p)
    p.add_argument("--bind", default="127.0.0.1:8080")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("export", help="print a bundle's inconsistency table")
    ws(p)
    p.add_argument("--match", required=True)
    p.set_defaults(func=_cmd_export)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DOMAIN_ERRORS as exc:
        return _fail(exc)


if __name__ == "__main__":
    raise SystemExit(main())
