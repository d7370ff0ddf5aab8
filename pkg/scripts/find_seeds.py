"""Search for periodic initial data and write the shipped seed file.

Each search starts at a turning point (real positive ``w``, ``theta = -pi/2``)
and solves for radii whose phase advances over one return of the moduli are
prescribed rationals with denominator ``m``; the orbit then closes after
``m`` returns.  Every result is confirmed with ``find_periodic`` before it
is written.

    python scripts/find_seeds.py [--out src/lagflow/data/periodic_seeds.json]
"""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import least_squares

from lagflow.ode_family import OdeParams, OdeState, SeedRecord, find_periodic, reduced_return


@dataclass(frozen=True)
class SeedTarget:
    name: str
    lambdas: tuple[float, ...]
    radii_guess: tuple[float, ...]
    advance: tuple[float, ...]
    returns: int


TARGETS = (
    SeedTarget("n2k1", (1.0, -1.0), (1.12, 2.13), (-0.2, 0.6), 5),
    SeedTarget("n3k2", (1.0, 1.0, -1.0), (0.79, 0.79, 1.28), (-0.2, -0.2, 0.6), 5),
    SeedTarget("n3k1", (2.0, -1.0, -1.0), (1.10, 1.30, 1.30), (-0.4, 0.4, 0.4), 5),
)


def solve_radii(target: SeedTarget) -> tuple[np.ndarray, float]:
    params = OdeParams(target.lambdas)
    goal = np.asarray(target.advance)

    def misfit(log_r):
        return reduced_return(params, np.exp(log_r))[1] - goal

    sol = least_squares(
        misfit, np.log(target.radii_guess), xtol=1e-15, ftol=1e-15, gtol=1e-15, diff_step=1e-7, max_nfev=80
    )
    radii = np.exp(sol.x)
    t_y, _ = reduced_return(params, radii)
    return radii, t_y


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src/lagflow/data/periodic_seeds.json"))
    args = ap.parse_args(argv)

    records = []
    for target in TARGETS:
        radii, t_y = solve_radii(target)
        params = OdeParams(target.lambdas)
        seed = OdeState.turning_point(radii)
        hint = target.returns * t_y
        orbit = find_periodic(params, seed, period_hint=hint)
        lo, hi = orbit.r_bounds
        print(
            f"{target.name}: lambdas={target.lambdas} radii={radii.tolist()} T={orbit.period:.10f} "
            f"closure={orbit.closure_residual:.2e} r in [{lo.min():.4f}, {hi.max():.4f}]"
        )
        records.append(SeedRecord(target.name, params, orbit.initial, orbit.period).to_dict())
    doc = {"schema": 1, "seeds": records}
    Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
