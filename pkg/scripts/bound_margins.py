#!/usr/bin/env python3
"""Margins of the Green-kernel mass bounds across the disk.

Sweeps |z| over a radius grid and reports how much slack each certified
integral bound leaves:

    int |G(z, .)| dA      <= 3/4
    int |G_z(z, .)| dA    <= 23/6
    int |H2(z, .)| dA     <= 5 (2 - |z|^2)
    int |H3(z, .)| dA     <= 7/3

The gradient-mass bound 23/6 is the one entering the certified Lipschitz
constant, so its worst margin over the sweep is printed last.

    python3 scripts/bound_margins.py --radii 0,0.2,0.4,0.6,0.8,0.9
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, replace

import numpy as np

from biharmonic_disk import green
from biharmonic_disk.quadrature import DEFAULT_RULES, disk_integrate


@dataclass(frozen=True)
class SweepConfig:
    radii: tuple = (0.0, 0.2, 0.4, 0.6, 0.8, 0.9)
    resolution_factor: int = 2


BOUNDS = (
    ("int |G|", lambda z, zeta: np.abs(green.g_eval(z, zeta)), lambda z: 0.75),
    ("int |G_z|", lambda z, zeta: np.abs(green.g_dz(z, zeta).d_z), lambda z: 23.0 / 6.0),
    ("int |H2|", lambda z, zeta: np.abs(green.h2_eval(z, zeta)), lambda z: 5.0 * (2.0 - abs(z) ** 2)),
    ("int |H3|", lambda z, zeta: np.abs(green.h3_eval(z, zeta)), lambda z: 7.0 / 3.0),
)


def sweep(cfg: SweepConfig) -> float:
    base = DEFAULT_RULES.disk
    # |.| integrands lose smoothness on the sign/branch locus, so boost the
    # plain rule instead of recentring
    rule = replace(
        base,
        scheme="plain",
        center=0j,
        n_radial=cfg.resolution_factor * base.n_radial,
        n_angular=cfg.resolution_factor * base.n_angular,
    )
    print(f"{'|z|':>5}  " + "".join(f"{name + ' margin':>18}" for name, _, _ in BOUNDS))
    worst_grad = np.inf
    for r in cfg.radii:
        z = complex(r)
        margins = []
        for name, integrand, limit in BOUNDS:
            mass = disk_integrate(rule, lambda zeta: integrand(z, zeta)).real
            margins.append(limit(z) - mass)
            if name == "int |G_z|":
                worst_grad = min(worst_grad, margins[-1])
        print(f"{r:5.2f}  " + "".join(f"{m:18.6f}" for m in margins))
    print(f"\nsmallest gradient-mass margin: {worst_grad:.6f} (must stay positive)")
    return worst_grad


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--radii", default="0,0.2,0.4,0.6,0.8,0.9",
                        help="comma-separated |z| values to sweep")
    parser.add_argument("--resolution-factor", type=int, default=2,
                        help="multiplier on the default disk rule resolution")
    args = parser.parse_args()
    cfg = SweepConfig(
        radii=tuple(float(r) for r in args.radii.split(",")),
        resolution_factor=args.resolution_factor,
    )
    worst = sweep(cfg)
    raise SystemExit(0 if worst > 0 else 1)


if __name__ == "__main__":
    main()
