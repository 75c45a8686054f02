"""Drive the command line interface end to end on the synthetic dataset.

Runs every subcommand against demos/data/institutions.csv and collects
tables (TSV + JSON), the percentile assignment CSV, and the three SVG
charts under demos/output/. Building the dataset first if needed.
"""

import importlib.util
import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).parent
DATA = HERE / "data" / "institutions.csv"
OUT = HERE / "output"

if not DATA.exists():
    spec = importlib.util.spec_from_file_location("build", HERE / "00_build_dataset.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    mod.build()

COMMANDS = [
    ["percentiles", "--scheme", "incites", "--inverted", "--zero-adjust"],
    ["summary", "--format", "tsv,json,svg"],
    ["compare", "--pairs", "1:2,1:3,3:2", "--welch", "--mann-whitney",
     "--format", "tsv,json,svg"],
    ["topshare", "--format", "tsv,json,svg"],
    ["topcompare", "--pairs", "1:2,1:3,3:2", "--format", "tsv,json"],
    ["robustness", "--format", "json"],
    ["bootstrap", "--statistic", "mean", "--institution", "2",
     "--bootstrap-reps", "1000", "--seed", "99", "--format", "json"],
]

for args in COMMANDS:
    cmd = [sys.executable, "-m", "pct_impact.cli", args[0],
           "--input", str(DATA), "--out-dir", str(OUT), *args[1:]]
    print(f"\n$ pct-impact {' '.join(args)}")
    result = subprocess.run(cmd, text=True, capture_output=True)
    if result.returncode != 0:
        print(result.stderr)
        sys.exit(result.returncode)
    print(result.stdout.rstrip())

print(f"\nartifacts in {OUT}:")
for path in sorted(OUT.iterdir()):
    print(f"  {path.name}  ({path.stat().st_size} bytes)")
