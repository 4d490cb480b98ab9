"""Smoke test for the `bimanual` Python extension.

Builds the extension with cargo (unless BIMANUAL_EXT points at a built
library), imports it and exercises the main entry points.

    python3 python/smoke_test.py
"""

import importlib.util
import math
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_extension() -> Path:
    override = os.environ.get("BIMANUAL_EXT")
    if override:
        return Path(override)
    subprocess.run(
        ["cargo", "build", "--release", "-p", "bimanual-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    target = Path(os.environ.get("CARGO_TARGET_DIR", ROOT / "target"))
    for name in ("libbimanual.so", "libbimanual.dylib", "bimanual.dll"):
        lib = target / "release" / name
        if lib.exists():
            return lib
    sys.exit("built library not found under " + str(target / "release"))


def load(lib: Path):
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    staged = Path(tempfile.mkdtemp()) / ("bimanual" + suffix)
    shutil.copy(lib, staged)
    spec = importlib.util.spec_from_file_location("bimanual", staged)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main() -> None:
    bm = load(build_extension())

    assert math.isclose(bm.normalize_angle(3 * math.pi), math.pi)
    assert abs(bm.reach_distance((-5, 70), (-15, 0)) - 70.7) < 0.05
    assert abs(math.degrees(bm.base_angle((30, 75), (15, 0))) - 78.7) < 0.05

    f1 = bm.Finger((-15, 0), (40, 30, 25), "finger_one")
    f2 = bm.Finger((15, 0), (42, 32, 26), "finger_two")
    print(f1)

    sol = bm.solve_finger_ik(f2, (30, 85))
    tip, _ = bm.forward_kinematics(f2, sol.joints)
    assert sol.converged and math.dist(tip, (30, 85)) < 1e-6, sol
    t1, t2, t3 = sol.joints
    assert t2 == t3
    print(sol)

    j = bm.equal_split_joints(0.5, 0.9, "alpha_less", "finger_one")
    tip, _ = bm.forward_kinematics(f1, j)
    rhs = bm.closure_rhs(f1, 0.5, 0.9)
    assert math.dist((tip[0] + 15, tip[1]), rhs) < 1e-9

    a, b, desired, branch = bm.solve_bimanual(
        f1, f2, ((-5, 70), (30, 75)), (12.5, 72.5, 0.0), (12.5, 82.5, 0.0), (math.radians(30), math.radians(120))
    )
    assert a.converged and b.converged
    assert desired == ((-5, 80), (30, 85)), desired
    print("bimanual branch:", branch)

    joints, residual = bm.brute_force_oracle(f2, (30, 85), 40)
    assert residual <= sol.residual + bm.grid_resolution_bound(f2, 40) + 1e-9
    assert sol.residual <= residual + bm.grid_resolution_bound(f2, 40)

    try:
        bm.solve_finger_ik(f2, (15, 500))
    except bm.SolverError as e:
        print("unreachable target rejected:", e)
    else:
        raise AssertionError("expected SolverError")

    for name in bm.preset_names():
        traj = bm.run_preset(name)
        report = traj.error_report()
        assert report["finger1"]["computed"]["max"] < 0.71
        assert len(traj.rows()[0]) == len(bm.Trajectory.columns) == 24
        print(f"{name}: {len(traj)} records, signature {traj.verify_signature()}")
    vertical = bm.run_preset("table1_vertical")
    assert vertical.verify_signature("simultaneous")[0]
    assert vertical.to_csv().splitlines()[0] == ",".join(bm.Trajectory.columns)
    assert "<svg" in vertical.svg_paths() and "<svg" in vertical.svg_errors()

    config = (ROOT / "crates" / "core" / "fixtures" / "table1_rotation.json").read_text()
    rotation = bm.run_config(config)
    assert rotation.verify_signature("interleaved")[0]

    passed, text = bm.validate_fixtures()
    assert passed and "MISMATCH" in text

    try:
        bm.run_config('{"schema": "bimanual-scenario/0"}')
    except ValueError as e:
        print("bad config rejected:", e)
    else:
        raise AssertionError("expected ValueError")

    print("python smoke test: OK")


if __name__ == "__main__":
    main()
