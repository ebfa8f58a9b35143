"""Run the ten acceptance criteria and print one PASS/FAIL line each."""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    cmd = [sys.executable, "-m", "pytest", "-q", "-m", "acceptance", str(ROOT / "tests" / "test_acceptance.py")]
    raise SystemExit(subprocess.call(cmd + sys.argv[1:], cwd=ROOT))
