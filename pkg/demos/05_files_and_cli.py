"""Problem files, convergence traces, and the command line front end.

Problems serialize to a small JSON schema (dense lower triangle, diagonal,
or eigendecomposition-plus-shift forms for A), solvers emit per-iteration
CSV traces with restart markers, and every capability is also reachable
through the `spheretrs` console command.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from spheretrs import GenSpec, SolverConfig, double_start, generate, save_problem

tmp = Path(tempfile.mkdtemp())

# Library route: generate, save, solve, dump the trace.
p, planted = generate(GenSpec(n=30, gap=1e-2, seed=7))
save_problem(p, tmp / "p.json")
res = double_start(p, SolverConfig(rng_seed=7))
res.trace.to_csv(tmp / "trace.csv")
print("trace head:")
for line in (tmp / "trace.csv").read_text().splitlines()[:4]:
    print(" ", line)

# CLI route: the same problem file through the console entry points.
run = lambda *args: subprocess.run(
    [sys.executable, "-m", "spheretrs.cli", *args], capture_output=True, text=True
)

out = run("solve", str(tmp / "p.json"), "--solver", "lpr", "--trace", str(tmp / "t.csv"))
print("solve exit", out.returncode, "->", json.loads(out.stdout)["status"])

out = run("oracle", str(tmp / "p.json"))
report = json.loads(out.stdout)
print("oracle case", report["case"], "mu_star", report["mu_star"])

out = run("trs", str(tmp / "p.json"), "--strategy", "decide")
print("trs route", json.loads(out.stdout)["route"])

# Each trace gets a manifest sidecar recording the exact configuration
# and a hash of the input, for reproducibility.
manifest = json.loads((tmp / "t.csv.manifest.json").read_text())
print("manifest keys:", sorted(manifest))
