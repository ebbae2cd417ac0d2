"""Tabulate the trace check over small eigenvalue tuples and k."""
from __future__ import annotations

import argparse
import itertools
from dataclasses import dataclass

from tate.fock import kontsevich_check


@dataclass
class GridConfig:
    max_eig: int = 3
    size: int = 2
    kmax: int = 3


def grid(cfg: GridConfig):
    for eigs in itertools.combinations_with_replacement(range(1, cfg.max_eig + 1), cfg.size):
        for k in range(1, cfg.kmax + 1):
            yield eigs, k, kontsevich_check(eigs, k)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(GridConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", dest=name, type=int, default=default)
    cfg = GridConfig(**vars(ap.parse_args()))
    bad = 0
    for eigs, k, res in grid(cfg):
        bad += not res.match
        print(f"{'ok ' if res.match else 'BAD'} eigs={eigs} k={k}: {res.lhs}")
    print(f"{bad} mismatches")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
