"""Randomized three-way agreement campaign over Kronecker-symmetric and perturbed operators.

    python3 scripts/symmetry_campaign.py --cases 100 --d 2 3 4 5 --eps 0.05
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field

import numpy as np

from nucspec.constructions import kronecker_symmetrize, perturb_break_symmetry, random_operator
from nucspec.core import Tolerance
from nucspec.symmetry import RouteDisagreementError, equivalence_harness, threshold_collapse_check


@dataclass
class CampaignConfig:
    d_values: tuple[int, ...] = (2, 3, 4, 5)
    cases: int = 50
    max_base_dim: int = 6
    eps: float = 0.05
    seed: int = 0
    collapse_K: tuple[int, ...] = (1, 2, 3)
    tol: Tolerance = field(default_factory=Tolerance)


def run(cfg: CampaignConfig) -> None:
    print("d,cases,agree,disagreements,wrong,collapse_vacuous,collapse_failures,seconds")
    for d in cfg.d_values:
        t0 = time.perf_counter()
        rng = np.random.default_rng([cfg.seed, d])
        agree = dis = wrong = vac = fail = 0
        for i in range(cfg.cases):
            t = kronecker_symmetrize(random_operator(int(rng.integers(1, cfg.max_base_dim + 1)), rng), d)
            broken = bool(i % 2)
            op = perturb_break_symmetry(t, cfg.eps, [cfg.seed, d, i]) if broken else t
            try:
                res = equivalence_harness(op, d, cfg.tol)
            except RouteDisagreementError:
                dis += 1
                continue
            agree += 1
            wrong += res.verdict is broken
            if not broken:
                for K in cfg.collapse_K:
                    c = threshold_collapse_check(t, d, K, cfg.tol)
                    vac += c.vacuous
                    fail += not c.holds
        dt = time.perf_counter() - t0
        print(f"{d},{cfg.cases},{agree},{dis},{wrong},{vac},{fail},{dt:.2f}")


def parse_args() -> CampaignConfig:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, nargs="+", default=[2, 3, 4, 5])
    ap.add_argument("--cases", type=int, default=50)
    ap.add_argument("--max-base-dim", type=int, default=6)
    ap.add_argument("--eps", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--rel-tol", type=float, default=1e-8)
    ap.add_argument("--abs-tol", type=float, default=1e-12)
    a = ap.parse_args()
    return CampaignConfig(tuple(a.d), a.cases, a.max_base_dim, a.eps, a.seed, tol=Tolerance(a.rel_tol, a.abs_tol))


if __name__ == "__main__":
    run(parse_args())
