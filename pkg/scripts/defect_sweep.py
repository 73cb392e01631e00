"""Trace-one shrinking family: every recorded quantity per N, then log-log quasinorm slopes.

    python3 scripts/defect_sweep.py --N 4 16 64 256 1024
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from nucspec.cli import fmt
from nucspec.constructions import DEFAULT_S_GRID, loglog_slopes, quasinorm_sweep, trace_one_shrinking_family


@dataclass
class SweepConfig:
    N_grid: tuple[int, ...] = (4, 16, 64, 256)
    s_grid: tuple[float, ...] = DEFAULT_S_GRID


def run(cfg: SweepConfig) -> None:
    print("N,nuclear_trace,trace_sq,op_norm,spectral_radius,eigen_l1_mass," + ",".join(f"q_s={fmt(s)}" for s in cfg.s_grid))
    for N in cfg.N_grid:
        _, p = trace_one_shrinking_family(N, cfg.s_grid)
        vals = [p.nuclear_trace.real, p.trace_sq, p.op_norm, p.spectral_radius, p.eigen_l1_mass]
        vals += [v for _, v in p.s_quasinorms]
        print(f"{N}," + ",".join(fmt(v) for v in vals))
    print()
    print("s,slope,expected")
    for s, slope in loglog_slopes(quasinorm_sweep(s_grid=cfg.s_grid, N_grid=cfg.N_grid)).items():
        print(f"{fmt(s)},{fmt(slope)},{fmt(1 / s - 1)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, nargs="+", default=[4, 16, 64, 256])
    ap.add_argument("--s", type=float, nargs="+", default=list(DEFAULT_S_GRID))
    a = ap.parse_args()
    run(SweepConfig(tuple(a.N), tuple(a.s)))
