"""Regenerate the golden CSV fixtures in golden/ through the CLI.

The sweep drivers emit byte-identical output for identical configs, so a
clean regeneration must leave `git status` untouched.
"""

import sys
from pathlib import Path

from fastgates.cli import main

GOLDEN = Path(__file__).resolve().parent.parent / "golden"

JOBS = (
    ("sweep-duration", "duration"),
    ("sweep-xi", "xi"),
    ("populations", "populations"),
    ("trajectory", "trajectory"),
)


def run() -> int:
    for command, stem in JOBS:
        config = GOLDEN / f"{stem}_config.json"
        out = GOLDEN / f"{stem}.csv"
        code = main([command, "--config", str(config), "--out", str(out)])
        if code != 0:
            return code
        print(f"wrote {out.name}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
