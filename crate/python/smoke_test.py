#!/usr/bin/env python3
"""Build the `friedlab` extension module and exercise it from Python.

Usage:
    python3 python/smoke_test.py            # builds with cargo, then tests
    python3 python/smoke_test.py path.so    # tests an already built library
"""

import importlib.util
import json
import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def build() -> str:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "friedlab-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    target = os.environ.get("CARGO_TARGET_DIR", os.path.join(ROOT, "target"))
    for name in ("libfriedlab.so", "libfriedlab.dylib", "friedlab.dll"):
        path = os.path.join(target, "release", name)
        if os.path.exists(path):
            return path
    raise SystemExit("built library not found under " + target)


def load(lib: str):
    # the interpreter only imports extension modules named after the module
    tmp = tempfile.mkdtemp()
    ext = ".pyd" if lib.endswith(".dll") else ".so"
    dest = os.path.join(tmp, "friedlab" + ext)
    shutil.copy(lib, dest)
    spec = importlib.util.spec_from_file_location("friedlab", dest)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def main() -> int:
    lib = sys.argv[1] if len(sys.argv) > 1 else build()
    fl = load(lib)
    failures = []

    def check(name, cond):
        print(("PASS " if cond else "FAIL ") + name)
        if not cond:
            failures.append(name)

    check("presets listed", "sl2c" in fl.presets() and "rline_x_su2" in fl.presets())
    check("model validates", all(ok for _, ok, _ in fl.validate("sl2c")))
    check("corruption detected", not all(ok for _, ok, _ in fl.validate("sl2c", "negate-form")))
    check("casimir of V(1,0)", fl.casimir("sl2c", "1,0") == "-3")
    check("dirac identity exact", fl.dirac_residual("sl2c", "2,1", "p") == 0.0)
    rows = fl.eta_family("sl2c", "1,0+0,1")
    check("eta family kernel", sum(p + m for _, p, m, _ in rows) == 8)
    text = fl.synthesize(5, 30)
    series = fl.ruelle_series(text, "sl2c", "1,1")
    check("ruelle series", 0 < len(series) <= 30)
    report = json.loads(fl.verify_all("sl2c", "1,0+0,1"))
    check("verify_all", report["exit_code"] == 0)
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
        f.write(text)
    zeta = json.loads(fl.zeta_report(f.name))
    os.unlink(f.name)
    check("zeta factorization", zeta["exit_code"] == 0)
    try:
        fl.casimir("sl2c", "bogus")
        check("bad rep spec raises", False)
    except ValueError:
        check("bad rep spec raises", True)

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
