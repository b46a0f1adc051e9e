"""Runs `assetdva report --format svg` and checks the output is well-formed XML
with one panel group per bank."""
import subprocess
import sys
import xml.etree.ElementTree as ET

cli, data_dir, out = sys.argv[1:4]
subprocess.run([cli, "report", "--data-dir", data_dir, "--format", "svg", "--out", out], check=True)
root = ET.parse(out).getroot()
ns = "{http://www.w3.org/2000/svg}"
panels = [g for g in root.iter(ns + "g") if g.get("class") == "panel"]
ids = sorted(g.get("id") for g in panels)
expected = sorted("panel-" + b for b in ["BAC", "WFC", "JPM", "C", "COF", "MS", "GS"])
if ids != expected:
    sys.exit(f"panels {ids} != {expected}")
for g in panels:
    lines = [p for p in g.iter(ns + "polyline")]
    if len(lines) != 2 or any(len(p.get("points").split()) != 18 for p in lines):
        sys.exit(f"{g.get('id')}: expected two 18-point series")
print("svg ok:", len(panels), "panels")
