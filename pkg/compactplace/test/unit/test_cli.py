import json

import pytest

from compactplace.cli.config import EFFECTIVE_CONFIG, load_config_file, resolve_config
from compactplace.cli.main import build_parser, load_layouts, main
from compactplace.cli.render import COLLISION_STROKE, render_svg
from compactplace.core.exceptions import ConfigError
from compactplace.dataset.storage import save_layout
from compactplace.models.assembly import AgentTag, AssemblyResult
from compactplace.models.episode import ContactType
from compactplace.models.geometry import Pose2
from compactplace.test.unit.helpers import two_squares

TINY_TRAIN = {
    "hidden": [16],
    "n_quantiles": 5,
    "drop_per_critic": 1,
    "batch_size": 8,
    "buffer_size": 200,
    "warmup_steps": 10,
    "eval_every": 1000,
}


@pytest.fixture
def layouts_dir(tmp_path):
    out = tmp_path / "layouts"
    assert main(["-q", "gen", "--n", "2", "--seed", "3", "--out", str(out)]) == 0
    return out


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_gen_without_layouts(tmp_path):
    out = tmp_path / "empty"
    assert main(["-q", "gen", "--n", "0", "--out", str(out)]) == 0
    assert json.loads((out / "manifest.json").read_text()) == {"version": 1, "seed": 0, "layouts": []}
    assert (out / EFFECTIVE_CONFIG).exists()
    assert load_layouts(out) == []


def test_gen_is_deterministic(tmp_path, layouts_dir):
    again = tmp_path / "again"
    assert main(["-q", "gen", "--n", "2", "--seed", "3", "--out", str(again)]) == 0
    manifest = json.loads((layouts_dir / "manifest.json").read_text())
    assert manifest["layouts"] == ["layout-3.json", "layout-4.json"]
    for name in manifest["layouts"] + ["manifest.json", EFFECTIVE_CONFIG]:
        assert (layouts_dir / name).read_bytes() == (again / name).read_bytes()
    assert [l.layout_id for l in load_layouts(layouts_dir / "manifest.json")] == ["layout-3", "layout-4"]


def test_gen_exports_meshes(tmp_path):
    out = tmp_path / "meshes"
    assert main(["-q", "gen", "--n", "1", "--meshes", "--out", str(out)]) == 0
    layout = load_layouts(out)[0]
    for fragment in layout.fragments:
        assert (out / "meshes" / layout.layout_id / f"fragment_{fragment.id}.stl").exists()


@pytest.mark.parametrize(
    "config",
    [
        {"env": {"max_step": 3}},
        {"train": {"gamma": 2.0}},
        {"generator": {"n_cuts": 0}},
        {"rewards": {}},
        [1, 2],
    ],
)
def test_invalid_config_exits_with_usage_code(tmp_path, config):
    path = write_json(tmp_path / "bad.json", config)
    assert main(["-q", "gen", "--n", "1", "--config", str(path), "--out", str(tmp_path / "o")]) == 1


def test_usage_errors(tmp_path, capsys):
    assert main(["gen", "--n", "1"]) == 1
    assert main(["eval", "robot", "--layouts", "x", "--out", "y"]) == 1
    assert main([]) == 1
    assert "usage" in capsys.readouterr().err


def test_missing_layouts_are_data_errors(tmp_path):
    assert main(["-q", "eval", "oracle", "--layouts", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 2
    broken = tmp_path / "broken"
    broken.mkdir()
    (broken / "layout-0.json").write_text("{", encoding="utf-8")
    assert main(["-q", "eval", "oracle", "--layouts", str(broken), "--out", str(tmp_path / "o")]) == 2
    undecodable = tmp_path / "undecodable"
    undecodable.mkdir()
    (undecodable / "layout-0.json").write_bytes(b"\xff\xfe{}")
    assert main(["-q", "eval", "oracle", "--layouts", str(undecodable), "--out", str(tmp_path / "u")]) == 2
    layout_path = save_layout(two_squares(), tmp_path / "two.json")
    bad_result = tmp_path / "result.json"
    bad_result.write_bytes(b"\xff\xfe{}")
    assert main(["-q", "render", "--layout", str(layout_path), "--result", str(bad_result), "--out", str(tmp_path / "r.svg")]) == 2


def test_baseline_writes_plans(tmp_path, layouts_dir):
    out = tmp_path / "plans"
    assert main(["-q", "baseline", "BL1", "--layouts", str(layouts_dir), "--out", str(out)]) == 0
    plan = json.loads((out / "layout-3.bl1.json").read_text())
    assert plan["kind"] == "BL1"
    assert plan["metadata"]["k"] >= 1
    assert (out / "layout-4.bl1.json").exists()
    assert main(["-q", "baseline", "BL2", "--layouts", str(layouts_dir), "--out", str(out)]) == 0
    assert json.loads((out / "layout-3.bl2.json").read_text())["kind"] == "BL2"


def test_eval_oracle(tmp_path, layouts_dir, capsys):
    out = tmp_path / "eval"
    assert main(["-q", "eval", "oracle", "--layouts", str(layouts_dir), "--out", str(out)]) == 0
    summary = json.loads((out / "oracle_summary.json").read_text())
    assert summary["bb_increase_pct"]["mean"] == pytest.approx(0.0, abs=1e-9)
    assert (out / "results" / "oracle" / "layout-4.json").exists()
    assert (out / EFFECTIVE_CONFIG).exists()
    assert "ORACLE" in capsys.readouterr().out


def test_eval_baseline_with_comparison(tmp_path, layouts_dir, capsys):
    out = tmp_path / "eval"
    assert main(["-q", "eval", "BL2", "--layouts", str(layouts_dir), "--out", str(out), "--compare"]) == 0
    summary = json.loads((out / "bl2_summary.json").read_text())
    assert summary["collision_rate_pct"]["mean"] == 0.0
    assert "330.46" in capsys.readouterr().out


def test_eval_policy_needs_checkpoint(tmp_path, layouts_dir):
    args = ["-q", "eval", "policy", "--layouts", str(layouts_dir), "--out", str(tmp_path / "e")]
    assert main(args) == 1
    assert main(args + ["--checkpoint", str(tmp_path / "missing.pt")]) == 2


def test_train_then_eval_policy(tmp_path, layouts_dir, capsys):
    config = write_json(tmp_path / "cfg.json", {"train": TINY_TRAIN})
    run = tmp_path / "run"
    assert main(["-q", "train", "--layouts", str(layouts_dir), "--config", str(config), "--steps", "30", "--out", str(run)]) == 0
    final = run / "final.pt"
    assert final.exists()
    assert str(final) in capsys.readouterr().out
    effective = json.loads((run / EFFECTIVE_CONFIG).read_text())
    assert effective["train"]["total_steps"] == 30

    out = tmp_path / "eval"
    args = ["-q", "eval", "policy", "--layouts", str(layouts_dir), "--checkpoint", str(final), "--out", str(out)]
    assert main(args + ["--no-reference-lines"]) == 0
    assert (out / "no_l_summary.json").exists()
    assert sorted(p.name for p in (out / "results" / "no_l").iterdir()) == ["layout-3.json", "layout-4.json"]


def test_render_is_byte_stable(tmp_path):
    layout_path = save_layout(two_squares(), tmp_path / "two.json")
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["-q", "render", "--layout", str(layout_path), "--out", str(a)]) == 0
    assert main(["-q", "render", "--layout", str(layout_path), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    svg = a.read_text()
    assert svg.count("<polygon") == 2
    assert 'id="fragment-1"' in svg
    # one dot per corner of the single adjacent pair
    assert svg.count("<circle") == 4


def test_render_result_marks_collisions(tmp_path):
    layout = two_squares()
    layout_path = save_layout(layout, tmp_path / "two.json")
    result = AssemblyResult(
        layout_id=layout.layout_id,
        agent=AgentTag.OUR,
        placed_poses={0: Pose2(50.0, 50.0), 1: Pose2(160.0, 50.0)},
        collision_events=[(1, ContactType.OBJECT_TABLE_OBJECT)],
        placement_order=[0, 1],
    )
    result_path = write_json(tmp_path / "result.json", result.to_dict())
    out = tmp_path / "r.svg"
    assert main(["-q", "render", "--layout", str(layout_path), "--result", str(result_path), "--footprints", "--out", str(out)]) == 0
    svg = out.read_text()
    assert COLLISION_STROKE in svg
    assert 'stroke-dasharray="4,2"' in svg
    assert 'id="footprints"' in svg


def test_render_skips_unplaced_fragments():
    layout = two_squares()
    result = AssemblyResult(layout.layout_id, AgentTag.BL1, placed_poses={0: Pose2(50.0, 50.0)})
    svg = render_svg(layout, result)
    assert svg.count("<polygon") == 1
    assert "<circle" not in svg


def test_resolve_config_layers(tmp_path):
    path = write_json(tmp_path / "c.json", {"train": {"total_steps": 500, "seed": 1}, "env": {"max_steps": 40}})
    cfg = resolve_config(path, seed=9, steps=70, no_reference_lines=True)
    assert cfg.train.total_steps == 70
    assert cfg.train.seed == 9 and cfg.generator.seed == 9 and cfg.seed == 9
    assert cfg.env.max_steps == 40
    assert not cfg.env.reward.use_reference_lines
    assert resolve_config(path).train.total_steps == 500
    assert load_config_file(None) == {}
    with pytest.raises(ConfigError):
        load_config_file(tmp_path / "missing.json")


def test_parser_defaults():
    args = build_parser().parse_args(["gen", "--out", "x"])
    assert args.n == 100 and not args.meshes and args.verbose == 0
