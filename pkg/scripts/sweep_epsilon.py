#!/usr/bin/env python3
"""Phase-space record of the field as the classical drive grows.

For each internal level sent down the top path, writes the post-interaction
Husimi grids and a summary of the field's overlap with its initial state
across epsilon in {0, 1, 3, 5, 9}.  The dark level (|b>) loses overlap as
epsilon rises (the drive writes path information); the bright level (|c>)
recovers it (the drive erases the pi kick).
"""

import json
from pathlib import Path

from duality_sim.runner import ExperimentConfig, epsilon_sweep

OUT = Path("out/epsilon-sweep")
EPSILONS = [0.0, 1.0, 3.0, 5.0, 9.0]


def main():
    base = ExperimentConfig.from_dict({"stage": 3, "case": "V1"})
    for level in ("b", "c"):
        points = epsilon_sweep(base, EPSILONS, level)
        out = OUT / f"level-{level}"
        out.mkdir(parents=True, exist_ok=True)
        summary = []
        for point in points:
            point.qgrid.to_csv(out / f"qgrid_eps_{point.epsilon:g}.csv")
            summary.append({"epsilon": point.epsilon,
                            "overlap_with_initial": point.overlap_with_initial})
        (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
        trend = " -> ".join(f"{p['overlap_with_initial']:.3f}" for p in summary)
        print(f"level {level}: overlap {trend}")


if __name__ == "__main__":
    main()
