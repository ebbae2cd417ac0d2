"""Fit the Virasoro defects [L_m, L_-m] - 2m L_0 to alpha m^3 + beta m.

    python3 scripts/central_charge_fit.py --mmax 5
"""
from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass

from tate.fock import central_charge_fit, virasoro_defect


@dataclass
class FitConfig:
    mmax: int = 4
    window: int = 10  # largest doubled weight probed per defect
    json: bool = False


def run(cfg: FitConfig) -> dict:
    fit = central_charge_fit(cfg.mmax)
    rows = []
    for m in range(1, cfg.mmax + 1):
        value, weights = virasoro_defect(m, cfg.window + 2 * m)
        rows.append({"m": m, "defect": str(value), "weights2": weights, "fit": str(fit.alpha * m**3 + fit.beta * m)})
    return {"config": asdict(cfg), "alpha": str(fit.alpha), "beta": str(fit.beta), "central_charge": str(fit.central_charge), "rows": rows}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mmax", type=int, default=FitConfig.mmax)
    ap.add_argument("--window", type=int, default=FitConfig.window)
    ap.add_argument("--json", action="store_true")
    cfg = FitConfig(**vars(ap.parse_args()))
    out = run(cfg)
    if cfg.json:
        print(json.dumps(out, indent=2))
        return
    print(f"alpha = {out['alpha']}  beta = {out['beta']}  c = {out['central_charge']}")
    for r in out["rows"]:
        print(f"m={r['m']}: defect {r['defect']} (fit {r['fit']}) on {len(r['weights2'])} weights")


if __name__ == "__main__":
    main()
