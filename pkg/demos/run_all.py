"""Run every scenario under demos/scenarios and print the check lines."""

import pathlib
import sys

from nonsep.cli import main

here = pathlib.Path(__file__).parent
failed = []
for path in sorted((here / "scenarios").glob("*.json")):
    print(f"== {path.name}")
    if main(["run", str(path)]) != 0:
        failed.append(path.name)
if failed:
    print("failed:", ", ".join(failed))
sys.exit(1 if failed else 0)
