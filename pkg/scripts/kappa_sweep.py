"""Sweep kappa for fixed wavenumbers and tabulate the resulting streets.

For each kappa on the grid (critical values skipped) the street is built,
checked, and its multiple vortices tested against the generalized
Stieltjes relations.  Grid points run in parallel worker processes; rows
come back in grid order.  Output is CSV on stdout or ``--out``.

    python3 scripts/kappa_sweep.py --k 7,8 --start -10 --stop 10 --num 201
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from vortexstreets.equilibrium import generalized_stieltjes, residuals_periodic
from vortexstreets.streets import build_street, critical_index
from vortexstreets.trigpoly import StreetSpec

COLUMNS = ["kappa", "vortices", "positive", "negative", "max_multiplicity", "velocity", "residual", "stieltjes"]


def sweep_point(k: tuple[int, ...], phi: tuple[complex, ...], kappa: float) -> dict | None:
    spec = StreetSpec(k, phi, kappa)
    if critical_index(spec, tol=1e-3) is not None:
        return None
    config, wave = build_street(spec)
    nn = config.nearest_distances()
    stil = 0.0
    for j in np.flatnonzero(np.abs(config.circulations) > 1):
        res = generalized_stieltjes(wave, config.positions[j], int(config.circulations[j]), radius=0.25 * nn[j])
        stil = max(stil, max(abs(r) for r in res))
    gam = config.circulations
    return {
        "kappa": kappa,
        "vortices": config.n,
        "positive": int(np.sum(gam > 0)),
        "negative": int(np.sum(gam < 0)),
        "max_multiplicity": int(np.max(np.abs(gam))),
        "velocity": config.velocity.real,
        "residual": residuals_periodic(config).max_residual,
        "stieltjes": stil,
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--k", default="7,8")
    parser.add_argument("--phi", default=None, help="comma-separated phases (default zeros)")
    parser.add_argument("--start", type=float, default=-10.0)
    parser.add_argument("--stop", type=float, default=10.0)
    parser.add_argument("--num", type=int, default=201)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--out", default=None)
    args = parser.parse_args(argv)

    k = tuple(int(x) for x in args.k.split(","))
    phi = tuple(complex(x) for x in args.phi.split(",")) if args.phi else (0.0,) * len(k)
    grid = np.linspace(args.start, args.stop, args.num)
    with ProcessPoolExecutor(max_workers=args.workers) as pool:
        rows = list(pool.map(sweep_point, [k] * len(grid), [phi] * len(grid), grid.tolist()))

    buf = io.StringIO()
    writer = csv.DictWriter(buf, COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        if row is not None:
            writer.writerow({c: repr(v) if isinstance(v, float) else v for c, v in row.items()})
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
