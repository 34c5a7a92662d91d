#!/usr/bin/env python3
"""Generate a sample team catalog (teams.json) for study-mode sessions.

Real quadrant labels come from human ratings, which this artifact collects but
cannot synthesize. The sample groups the grid by the two parameters that move
the social ratings: long broadcasts read as warm, wide separations as
competent. Ten teams per quadrant, mirroring the selection size of the study.
"""

import argparse
import json
from pathlib import Path

from swarmsearch.config import SPEED_LEVELS, BehaviorParams

QUADRANTS = {
    "HighWarmth_HighCompetence": {"broadcast": (12.0, 16.0), "separation": (28.0, 36.0)},
    "LowWarmth_HighCompetence": {"broadcast": (0.0, 4.0), "separation": (28.0, 36.0)},
    "HighWarmth_LowCompetence": {"broadcast": (12.0, 16.0), "separation": (4.0, 12.0)},
    "LowWarmth_LowCompetence": {"broadcast": (0.0, 4.0), "separation": (4.0, 12.0)},
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(Path(__file__).parents[1] / "data" / "teams.sample.json"))
    args = parser.parse_args()

    entries = []
    for label, bounds in QUADRANTS.items():
        picked = 0
        for speed in SPEED_LEVELS:
            for separation in bounds["separation"]:
                if picked >= 10:
                    break
                broadcast = bounds["broadcast"][picked % 2]
                params = BehaviorParams(speed=speed, separation=separation, broadcast=broadcast)
                entries.append(
                    {
                        "config_id": params.config_id,
                        "speed": speed,
                        "separation": separation,
                        "broadcast": broadcast,
                        "group_label": label,
                    }
                )
                picked += 1

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(entries, indent=2) + "\n", encoding="utf-8")
    print(f"{len(entries)} teams written to {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
