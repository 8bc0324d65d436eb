"""Command-line front end.

Batch commands call the engine in-process; `serve` starts the FastAPI
session service. Exit codes: 0 success, 2 validation error, 1 runtime error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import GazeGuideError, ParseError, SceneNotFound, ValidationError
from .gaze import AgentKind, GazeAgentConfig, load_trace, save_trace
from .harness import (RunConfig, export_results, metrics_to_dict, run_baseline_comparison,
                      run_config_from_dict, run_scenario)
from .saliency import base_saliency, extract_waypoints, fuse_hazard_prior, to_pgm
from .scene import load_scene_dir, load_scene_file

HOST_ENV = "GAZEGUIDE_HOST"


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _run_cfg(args, scene_id: str) -> RunConfig:
    doc = _load_config(getattr(args, "config", None))
    cfg = run_config_from_dict(doc, scene_id=scene_id)
    if getattr(args, "agent", None):
        cfg = RunConfig(
            scene_id=scene_id,
            agent=GazeAgentConfig(
                kind=AgentKind(args.agent),
                reaction_latency_s=cfg.agent.reaction_latency_s,
                saccade_speed=cfg.agent.saccade_speed,
                landing_noise_sigma=cfg.agent.landing_noise_sigma,
                seed=cfg.agent.seed,
            ),
            escalation=cfg.escalation, saliency=cfg.saliency,
            tick_hz=cfg.tick_hz, seed=cfg.seed,
        )
    if getattr(args, "seed", None) is not None:
        cfg = RunConfig(scene_id=scene_id, agent=cfg.agent, escalation=cfg.escalation,
                        saliency=cfg.saliency, tick_hz=cfg.tick_hz, seed=args.seed)
    return cfg


def cmd_run(args) -> int:
    scene = load_scene_file(args.scene)
    cfg = _run_cfg(args, scene.id)
    replay = load_trace(args.replay) if args.replay else None
    result = run_scenario(cfg, {scene.id: scene}, replay_trace=replay)
    print(json.dumps(metrics_to_dict(result.metrics), sort_keys=True))
    if args.out:
        records_path, csv_path = export_results([result], args.out)
        print(f"wrote {records_path} and {csv_path}", file=sys.stderr)
    if args.trace_out:
        save_trace(result.samples, args.trace_out)
        print(f"wrote {args.trace_out}", file=sys.stderr)
    return 0


def cmd_sweep(args) -> int:
    scenes = load_scene_dir(args.scenes)
    if not scenes:
        raise ValidationError(f"no scenes found in {args.scenes}")
    lo, _, hi = args.seeds.partition("..")
    seed_range = range(int(lo), int(hi or lo) + 1)
    results = []
    for scene_id in sorted(scenes):
        for seed in seed_range:
            cfg = _run_cfg(args, scene_id)
            cfg = RunConfig(scene_id=scene_id, agent=cfg.agent, escalation=cfg.escalation,
                            saliency=cfg.saliency, tick_hz=cfg.tick_hz, seed=seed)
            results.append(run_scenario(cfg, scenes))
    records_path, csv_path = export_results(results, args.out)
    print(f"{len(results)} runs -> {records_path}, {csv_path}")
    return 0


def cmd_compare(args) -> int:
    scene = load_scene_file(args.scene)
    summary = run_baseline_comparison(scene.id, {scene.id: scene}, args.n)
    print(f"scene={summary.scene_id} seeds={summary.n_seeds}")
    print("seed  guided_t  unguided_t")
    for p in summary.pairs:
        g = "-" if p.guided_t is None else f"{p.guided_t:.4f}"
        u = "-" if p.unguided_t is None else f"{p.unguided_t:.4f}"
        print(f"{p.seed:>4}  {g:>8}  {u:>10}")
    print(f"guided_median={summary.guided_median:.4f} "
          f"unguided_median={summary.unguided_median:.4f} "
          f"wins={summary.guided_wins}/{summary.n_seeds}")
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            json.dump(summary.to_dict(), fh, sort_keys=True, indent=2)
    return 0


def cmd_saliency_dump(args) -> int:
    scene = load_scene_file(args.scene)
    cfg = _run_cfg(args, scene.id).saliency
    base = base_saliency(scene, cfg.grid_width, cfg.grid_height)
    fused = fuse_hazard_prior(base, scene.hazard.position, cfg.sigma_h)
    wps = extract_waypoints(fused, scene, cfg)
    os.makedirs(args.out, exist_ok=True)
    base_path = os.path.join(args.out, f"{scene.id}_base.pgm")
    fused_path = os.path.join(args.out, f"{scene.id}_fused.pgm")
    with open(base_path, "w", encoding="ascii") as fh:
        fh.write(to_pgm(base))
    with open(fused_path, "w", encoding="ascii") as fh:
        fh.write(to_pgm(fused))
    for w in wps:
        print(json.dumps({"position": [w.position.x, w.position.y], "score": w.score,
                          "snapped_object_id": w.snapped_object_id}, sort_keys=True))
    print(f"wrote {base_path} and {fused_path}", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(scenes_dir=args.scenes, runs_dir=args.out, ui_dir=args.ui)
    host = args.host or os.environ.get(HOST_ENV, "127.0.0.1")
    uvicorn.run(app, host=host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gazeguide")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario headlessly")
    run_p.add_argument("--scene", required=True, help="scenario JSON file")
    run_p.add_argument("--agent", choices=[k.value for k in AgentKind])
    run_p.add_argument("--seed", type=int)
    run_p.add_argument("--config", help="RunConfig JSON file")
    run_p.add_argument("--out", help="directory for records.jsonl + metrics.csv")
    run_p.add_argument("--trace-out", help="write the gaze trace (t,x,y,valid lines)")
    run_p.add_argument("--replay", help="replay a recorded gaze trace instead of an agent")
    run_p.set_defaults(func=cmd_run)

    sweep_p = sub.add_parser("sweep", help="run every scene in a directory over a seed range")
    sweep_p.add_argument("--scenes", required=True)
    sweep_p.add_argument("--seeds", required=True, metavar="A..B")
    sweep_p.add_argument("--agent", choices=[k.value for k in AgentKind])
    sweep_p.add_argument("--config")
    sweep_p.add_argument("--out", default="sweep_out")
    sweep_p.set_defaults(func=cmd_sweep)

    cmp_p = sub.add_parser("compare", help="guided vs unguided baseline over seeds 1..N")
    cmp_p.add_argument("--scene", required=True)
    cmp_p.add_argument("--n", type=int, default=100)
    cmp_p.add_argument("--json-out")
    cmp_p.set_defaults(func=cmd_compare)

    sal_p = sub.add_parser("saliency", help="saliency utilities")
    sal_sub = sal_p.add_subparsers(dest="saliency_command", required=True)
    dump_p = sal_sub.add_parser("dump", help="write base and fused grids as PGM")
    dump_p.add_argument("--scene", required=True)
    dump_p.add_argument("--config")
    dump_p.add_argument("--out", default="saliency_out")
    dump_p.set_defaults(func=cmd_saliency_dump)

    serve_p = sub.add_parser("serve", help="start the session service")
    serve_p.add_argument("--port", type=int, default=8000)
    serve_p.add_argument("--scenes", required=True)
    serve_p.add_argument("--host", help=f"bind address (default ${HOST_ENV} or 127.0.0.1)")
    serve_p.add_argument("--out", default="session_logs",
                         help="directory for persisted session traces")
    serve_p.add_argument("--ui", help="serve a built cockpit (frontend dir) at /ui")
    serve_p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError, SceneNotFound, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GazeGuideError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
