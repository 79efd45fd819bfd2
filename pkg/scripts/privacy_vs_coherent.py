#!/usr/bin/env python
"""Compare the best Holevo difference over pure-state ensembles with the best
coherent information, along a channel family."""
from __future__ import annotations

import argparse
import csv
import sys

from qprivacy.channels import family_channel
from qprivacy.optimize import OptimizerConfig, maximize_coherent_information, maximize_privacy_bound, uniform_grid


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--family", default="amplitude_damping")
    p.add_argument("--from", dest="start", type=float, default=0.0)
    p.add_argument("--to", dest="stop", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=6)
    p.add_argument("--signals", type=int, default=2)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    cfg = OptimizerConfig(restarts=args.restarts, seed=args.seed)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["param", "max_coherent_info", "max_delta_chi", "gap"])
    for param in uniform_grid(args.start, args.stop, args.steps):
        ch = family_channel(args.family, param)
        coh = maximize_coherent_information(ch, cfg).best_value
        dchi = maximize_privacy_bound(ch, args.signals, cfg).delta_chi
        w.writerow([f"{param:.12g}", f"{coh:.12g}", f"{dchi:.12g}", f"{abs(coh - dchi):.3g}"])


if __name__ == "__main__":
    main()
