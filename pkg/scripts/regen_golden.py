"""Rewrites tests/golden/cli/ from the current build, then reruns the CLI suite against it."""

import os
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    env = dict(os.environ, DISTFEAT_REGEN_GOLDEN="1")
    cmd = [sys.executable, "-m", "pytest", "-q", str(ROOT / "tests" / "test_cli.py")]
    code = subprocess.call(cmd, env=env, cwd=ROOT)
    if code:
        return code
    env.pop("DISTFEAT_REGEN_GOLDEN")
    return subprocess.call(cmd, env=env, cwd=ROOT)


if __name__ == "__main__":
    sys.exit(main())
