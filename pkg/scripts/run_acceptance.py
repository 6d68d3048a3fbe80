"""Run the acceptance suite and print only its PASS/FAIL lines."""
import subprocess
import sys
from pathlib import Path

root = Path(__file__).resolve().parent.parent
proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(root / "tests" / "test_acceptance.py")],
                      capture_output=True, text=True, cwd=root)
lines = [ln for ln in proc.stdout.splitlines() if ln.startswith(("[PASS]", "[FAIL]"))]
print("\n".join(lines))
print(proc.stdout.strip().splitlines()[-1])
sys.exit(proc.returncode)
