"""
Saving measures and using the command line
==========================================

Measures are stored as line-oriented text with exact rationals.
"""

import tempfile
from pathlib import Path

from madic import build_random, is_uniform, load, save, serialize
from madic.cli import run

mu = build_random(3, 2, seed=5)
print(serialize(mu))

path = Path(tempfile.mkdtemp()) / "r.madic"
save(mu, path)
assert load(path) == mu
print("uniform?", bool(is_uniform(mu)))

###############################################################################
# The same file through the CLI.
run(["analyze", "oscillation", "--in", str(path), "--alpha", "1/2"])
code = run(["verify", "uniform", "--in", str(path)])
print("exit code", code)
