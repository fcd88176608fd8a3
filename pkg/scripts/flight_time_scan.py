#!/usr/bin/env python3
"""Screen patterns at several flight times, with and without the drive.

Useful for inspecting how quickly the two packets merge: the classical
drive adds position-dependent phases during the interaction, so patterns
taken at the same flight time can differ in how far their envelopes have
developed.  Uses the locally-evaluated kick so that intra-packet structure
is retained.
"""

from pathlib import Path

from duality_sim.runner import ExperimentConfig, run

OUT = Path("out/flight-scan")
T_PRIMES = [0.5, 1.0, 2.0, 3.0]

# the locally-evaluated kick adds momentum, so the packets outgrow the
# default grid before t' = 3; give them room
NUMERIC = {"grid": {"x_min": -40.0, "x_max": 42.0, "n_points": 16384}}


def main():
    for epsilon in (0.0, 3.0):
        for t_prime in T_PRIMES:
            cfg = ExperimentConfig.from_dict({
                "stage": 3,
                "case": "C1",
                "epsilon": epsilon,
                "t_prime": t_prime,
                "kick": "local",
                "numeric": NUMERIC,
            })
            result = run(cfg)
            result.write(OUT / f"eps{epsilon:g}" / f"t{t_prime:g}")
        print(f"epsilon={epsilon:g}: wrote {len(T_PRIMES)} flight times")


if __name__ == "__main__":
    main()
