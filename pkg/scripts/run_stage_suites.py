#!/usr/bin/env python3
"""Reproduce the screen patterns of all three stages for the seven cases.

Writes one directory per (stage, case) under out/stages/, each holding
pattern.csv, metrics.json and diagnostics.json.  Stage 2 is also run with
the phase-quadrature eraser readout, whose patterns should coincide with
stage 1.
"""

import math
from pathlib import Path

from duality_sim.runner import ExperimentConfig, run, sphere_suite

OUT = Path("out/stages")
ALPHA = math.sqrt(8.0)


def main():
    for stage, label, epsilon in ((1, "stage1", 0.0), (2, "stage2", 0.0), (3, "stage3", 3.0)):
        results = sphere_suite(t_prime=3.0, stage=stage, alpha=ALPHA, epsilon=epsilon)
        for name, result in results.items():
            result.write(OUT / label / name)
        print(f"{label}: wrote {len(results)} cases")

    # eraser readout: stage 2 conditioned on the most probable phase-quadrature outcome
    for name in ("V1", "VD", "D1", "DC", "C1", "CV", "VDC"):
        cfg = ExperimentConfig.from_dict({
            "stage": 2,
            "case": name,
            "readout": {"type": "quadrature", "theta": math.pi / 2, "chi": "most-probable"},
        })
        run(cfg).write(OUT / "stage2-erased" / name)
    print("stage2-erased: wrote 7 cases")


if __name__ == "__main__":
    main()
