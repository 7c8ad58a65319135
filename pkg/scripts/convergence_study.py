"""Empirical code rate of simulated patches against the two growth algebras.

For each pair and seed the patch is grown until its perimeter passes
``stop_above``. The final cumulative-tiles / perimeter ratio is compared with
the published closed-form rate and with the rate of the census algebra (the
matrix that actually maps one layer's class counts to the next).

    python scripts/convergence_study.py --stop-above 100000
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

from holocode.inflation import census_code_rate, census_system, code_rate, growth_system
from holocode.tiling import SeedKind, simulate, verify_growth_matrix

COLUMNS = ("p", "q", "seed", "layers", "perimeter", "empirical", "published", "census",
           "err_published", "err_census", "published_matrix_ok", "census_matrix_ok", "seconds")


@dataclass
class Config:
    pairs: list[tuple[int, int]] = field(
        default_factory=lambda: [(3, 7), (3, 8), (4, 5), (5, 4), (6, 4), (4, 6), (5, 5), (7, 3), (8, 3), (9, 3)])
    seeds: list[SeedKind] = field(default_factory=lambda: list(SeedKind))
    stop_above: int = 10**4
    max_layers: int = 60
    validate: bool = False


def study(cfg: Config):
    for pq in cfg.pairs:
        published, census = code_rate(pq), census_code_rate(pq)
        for kind in cfg.seeds:
            t0 = time.perf_counter()
            _, censuses = simulate(pq, kind, max_layers=cfg.max_layers,
                                   stop_above=cfg.stop_above, validate=cfg.validate)
            last = censuses[-1]
            yield {
                "p": pq[0], "q": pq[1], "seed": kind.value,
                "layers": last.layer, "perimeter": last.perimeter_edges,
                "empirical": f"{last.empirical_rate:.6f}",
                "published": f"{published:.6f}", "census": f"{census:.6f}",
                "err_published": f"{last.empirical_rate / published - 1:+.2e}",
                "err_census": f"{last.empirical_rate / census - 1:+.2e}",
                "published_matrix_ok": verify_growth_matrix(censuses, growth_system(pq)).ok,
                "census_matrix_ok": verify_growth_matrix(censuses, census_system(pq)).ok,
                "seconds": f"{time.perf_counter() - t0:.2f}",
            }


def parse_args() -> Config:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--stop-above", type=int, default=Config.stop_above)
    parser.add_argument("--max-layers", type=int, default=Config.max_layers)
    parser.add_argument("--validate", action="store_true", help="check every layer's topology")
    parser.add_argument("--pair", action="append", nargs=2, type=int, metavar=("P", "Q"),
                        help="repeatable; defaults to a fixed set of ten pairs")
    args = parser.parse_args()
    cfg = Config(stop_above=args.stop_above, max_layers=args.max_layers, validate=args.validate)
    if args.pair:
        cfg.pairs = [tuple(pq) for pq in args.pair]
    return cfg


if __name__ == "__main__":
    writer = csv.DictWriter(sys.stdout, COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in study(parse_args()):
        writer.writerow(row)
        sys.stdout.flush()
