"""
Command-Line Entry Point.

Subcommands:
- gen: generate layouts and their manifest
- train: train a placement policy
- baseline: plan BL1 or BL2 assemblies
- eval: assemble and score layouts with a policy, a baseline or the oracle
- render: draw a layout or an assembly as SVG

Exit codes: 0 success, 1 usage error, 2 data or invariant error, 3 runtime
failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Callable, Sequence

from compactplace.agent.checkpoint import load_checkpoint
from compactplace.agent.trainer import Trainer
from compactplace.baselines.bl1 import bl1_plan
from compactplace.baselines.bl2 import bl2_plan
from compactplace.baselines.footprint import gripper_footprint
from compactplace.baselines.plan import PlacementPlan, grasp_yaws, save_plan
from compactplace.cli.config import EffectiveConfig, resolve_config
from compactplace.cli.render import render_svg, write_svg
from compactplace.core.exceptions import CompactPlaceError, ConfigError, LayoutFormatError
from compactplace.dataset.generator import generate_layout
from compactplace.dataset.meshes import export_fragment_mesh
from compactplace.dataset.storage import load_layout, save_layout
from compactplace.env.config import EnvConfig
from compactplace.evaluation.reference import format_reference_comparison
from compactplace.evaluation.sources import OracleSource, PlanSource, PolicySource
from compactplace.evaluation.suite import evaluate_suite, worker_count
from compactplace.logs.handlers import setup_compactplace_logging
from compactplace.models.assembly import AgentTag, AssemblyResult
from compactplace.models.layout import Layout

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as ConfigError so they share the exit-code contract."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="JSON config file")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--out", type=Path, required=True, help="output directory or file")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="compactplace", description="Compact fragment placement.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more log output")
    parser.add_argument("-q", "--quiet", action="store_true", help="errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate layouts")
    _add_common(gen)
    gen.add_argument("--n", type=int, default=100, help="number of layouts")
    gen.add_argument("--meshes", action="store_true", help="export one STL mesh per fragment")

    train = sub.add_parser("train", help="train a placement policy")
    _add_common(train)
    train.add_argument("--layouts", type=Path, required=True, help="layout directory or manifest")
    train.add_argument("--steps", type=int, help="environment steps")
    train.add_argument("--checkpoint", type=Path, help="resume from this checkpoint")
    train.add_argument("--no-reference-lines", action="store_true", help="train the NO-L ablation")

    baseline = sub.add_parser("baseline", help="plan baseline assemblies")
    baseline.add_argument("kind", choices=("BL1", "BL2"))
    _add_common(baseline)
    baseline.add_argument("--layouts", type=Path, required=True, help="layout directory or manifest")

    ev = sub.add_parser("eval", help="assemble and score layouts")
    ev.add_argument("agent", choices=("policy", "BL1", "BL2", "oracle"))
    _add_common(ev)
    ev.add_argument("--layouts", type=Path, required=True, help="layout directory or manifest")
    ev.add_argument("--checkpoint", type=Path, help="policy checkpoint")
    ev.add_argument("--no-reference-lines", action="store_true", help="evaluate as NO-L")
    ev.add_argument("--compare", action="store_true", help="print the reference comparison")

    render = sub.add_parser("render", help="draw a layout or assembly as SVG")
    _add_common(render)
    render.add_argument("--layout", type=Path, required=True, help="layout JSON")
    render.add_argument("--result", type=Path, help="assembly result JSON")
    render.add_argument("--footprints", action="store_true", help="outline gripper footprints")
    return parser


def load_layouts(path: Path) -> list[Layout]:
    """
    Layouts of a manifest file or directory.

    A directory with a manifest is read through it; otherwise every JSON
    file in it is a layout, in name order.
    """
    if path.is_dir() and (path / MANIFEST).exists():
        path = path / MANIFEST
    if path.is_dir():
        files = sorted(p for p in path.glob("*.json") if p.name != "effective_config.json")
    else:
        try:
            manifest = json.loads(path.read_text(encoding="utf-8"))
            files = [path.parent / name for name in manifest["layouts"]]
        except (json.JSONDecodeError, UnicodeDecodeError, KeyError, TypeError) as exc:
            raise ConfigError(f"{path} is not a layout manifest: {exc}") from exc
    return [load_layout(p) for p in files]


def cmd_gen(args: argparse.Namespace, config: EffectiveConfig) -> int:
    if args.n < 0:
        raise ConfigError("--n must be >= 0")
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    seeds = [config.generator.seed + i for i in range(args.n)]
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        layouts = list(pool.map(lambda s: generate_layout(replace(config.generator, seed=s)), seeds))

    names = []
    for layout in layouts:
        name = f"{layout.layout_id}.json"
        save_layout(layout, out / name)
        names.append(name)
        if args.meshes:
            for fragment in layout.fragments:
                export_fragment_mesh(fragment, out / "meshes" / layout.layout_id / f"fragment_{fragment.id}.stl")
    manifest = {"version": 1, "seed": config.generator.seed, "layouts": names}
    (out / MANIFEST).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    config.write(out)
    logger.info("generated %d layouts in %s", len(names), out)
    return 0


def cmd_train(args: argparse.Namespace, config: EffectiveConfig) -> int:
    layouts = load_layouts(args.layouts)
    if args.checkpoint is not None:
        trainer = Trainer.from_checkpoint(args.checkpoint, layouts, args.out, total_steps=args.steps)
    else:
        trainer = Trainer(layouts, args.out, env_config=config.env, train_config=config.train)
    replace(config, env=trainer.env_config, train=trainer.train_config, seed=trainer.train_config.seed).write(
        args.out
    )
    final = trainer.train()
    print(final)
    return 0


def _planner(kind: str, env: EnvConfig, seed: int) -> Callable[[Layout], PlacementPlan]:
    if kind == "BL1":
        return lambda layout: bl1_plan(
            layout, gripper=env.gripper, yaws=grasp_yaws(layout, seed), eps_touch=env.eps_touch
        )
    return lambda layout: bl2_plan(
        layout, gripper=env.gripper, yaws=grasp_yaws(layout, seed), seed=seed, eps_touch=env.eps_touch
    )


def cmd_baseline(args: argparse.Namespace, config: EffectiveConfig) -> int:
    layouts = load_layouts(args.layouts)
    planner = _planner(args.kind, config.env, config.seed)
    out: Path = args.out

    def attempt(layout: Layout) -> PlacementPlan | CompactPlaceError:
        try:
            plan = planner(layout)
            plan.validate(layout)
            return plan
        except CompactPlaceError as exc:
            return exc

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        outcomes = list(pool.map(attempt, layouts))

    status = 0
    for layout, outcome in zip(layouts, outcomes):
        if isinstance(outcome, CompactPlaceError):
            print(f"{layout.layout_id}: {outcome}", file=sys.stderr)
            status = max(status, outcome.exit_code)
            continue
        save_plan(outcome, out / f"{layout.layout_id}.{args.kind.lower()}.json")
    config.write(out)
    planned = sum(1 for o in outcomes if isinstance(o, PlacementPlan))
    logger.info("%s planned %d of %d layouts", args.kind, planned, len(layouts))
    return status


def cmd_eval(args: argparse.Namespace, config: EffectiveConfig) -> int:
    layouts = load_layouts(args.layouts)
    if args.agent == "policy":
        if args.checkpoint is None:
            raise ConfigError("eval policy needs --checkpoint")
        ckpt = load_checkpoint(args.checkpoint)
        env = ckpt.env_config
        if args.no_reference_lines:
            env = replace(env, reward=replace(env.reward, use_reference_lines=False))
        config = replace(config, env=env, train=ckpt.train_config)
        source = PolicySource(ckpt.build_agent(), env, seed=config.seed)
    elif args.agent == "oracle":
        source = OracleSource()
    else:
        tag = AgentTag(args.agent)
        source = PlanSource(_planner(args.agent, config.env, config.seed), tag, config.env)

    report, _ = evaluate_suite(source, layouts, args.out)
    config.write(args.out)
    print(report)
    if args.compare:
        print(format_reference_comparison([report]), end="")
    return 0


def cmd_render(args: argparse.Namespace, config: EffectiveConfig) -> int:
    layout = load_layout(args.layout)
    result = None
    if args.result is not None:
        try:
            result = AssemblyResult.from_dict(json.loads(args.result.read_text(encoding="utf-8")))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise LayoutFormatError(f"{args.result} is not an assembly result: {exc}") from exc
    footprints = None
    if args.footprints:
        yaws = grasp_yaws(layout, config.seed)
        footprints = {
            f.id: gripper_footprint(f, yaws[f.id], config.env.gripper).polygon for f in layout.fragments
        }
    write_svg(args.out, render_svg(layout, result, footprints))
    return 0


COMMANDS = {
    "gen": cmd_gen,
    "train": cmd_train,
    "baseline": cmd_baseline,
    "eval": cmd_eval,
    "render": cmd_render,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return exc.exit_code

    if args.quiet:
        setup_compactplace_logging(logging.ERROR, logging.ERROR)
    else:
        setup_compactplace_logging(max(logging.DEBUG, logging.WARNING - 10 * args.verbose), logging.INFO)

    try:
        config = resolve_config(
            args.config,
            seed=args.seed,
            steps=getattr(args, "steps", None),
            no_reference_lines=getattr(args, "no_reference_lines", False),
        )
        return COMMANDS[args.command](args, config)
    except CompactPlaceError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    except OSError as exc:
        logger.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
