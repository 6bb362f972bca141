"""
Maximal patterns for even sizes
===============================

"""

import tempfile
from pathlib import Path

from pointca import Pipeline, canonicalize, cover_distribution, make_rng, new_grid, quad_export, render, run
from pointca.scheduler import StopSpec

# The full rule set adds noise where cells are uncovered (B), singly covered
# (C1) or sit in a square of doubly covered zeros (C2).
rng = make_rng(2024)
tr = run(new_grid(12, "random", rng), Pipeline.parse("ABC1C2"), order="sweep", stop=StopSpec(2000), rng=rng)
print(f"stable after {tr.t_stable} time-steps with {tr.points} points (n^2/4 = 36)")
print(tr.final)
print("cover levels:", cover_distribution(tr.final))

# The points-per-time-step curve shows the search settling.
print([row.points for row in tr.rows[:: max(1, len(tr.rows) // 15)]])

# Its symmetry class representative and a 2 x 2 repetition.
print(canonicalize(tr.final))
print(quad_export(tr.final, 2, 2))

# A cover-level image.
out = Path(tempfile.mkdtemp()) / "n12.ppm"
render(tr.final, out, mode="cover", scale=16)
print("image written to", out)
