"""
A batch experiment with CSV output
==================================

"""

import tempfile
from pathlib import Path

from pointca import ExperimentSpec, experiment

out = Path(tempfile.mkdtemp())

# 200 ABC1 runs on 10x10; run i uses seed 7 + i.
spec = ExperimentSpec(n=10, pipeline="ABC1", order="sweep", runs=200, seed=7, workers=2,
                      csv=str(out / "runs.csv"), pattern_dir=str(out / "patterns"))
res = experiment(spec)
print(res.summary)
print((out / "runs.csv").read_text().splitlines()[:4])

# The same spec replays to an identical file.
spec.csv = str(out / "again.csv")
experiment(spec)
print("identical:", (out / "runs.csv").read_bytes() == (out / "again.csv").read_bytes())
