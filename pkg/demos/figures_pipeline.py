"""End-to-end: run a preset, then render its figure from the CSV.

Requires both packages installed (the simulator and crowdmatch-figures).
"""
import tempfile
from pathlib import Path

from crowdmatch.cli import main as crowdmatch_main
from crowdmatch_figures.render import main as render_main

workdir = Path(tempfile.mkdtemp(prefix="crowdmatch-demo-"))
out = workdir / "fig10"

code = crowdmatch_main([
    "preset", "fig10", "--out", str(out), "--replications", "4", "--rounds", "80",
])
assert code == 0

image = workdir / "fig10.png"
code = render_main(["--figure", "fig10", "--csv", str(out / "metrics.csv"),
                    "--out", str(image)])
assert code == 0
print(f"data in {out}, figure at {image}")
