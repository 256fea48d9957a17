"""Fit decay rates of small single-mode perturbations of the unit disk and
compare them with the linear rate -k(k^2 - 1)."""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from domainflow import flow
from domainflow.corpus import perturbed_disk


@dataclass
class FitConfig:
    modes: tuple = (2, 3, 4, 5)
    eps: float = 1e-3
    n: int = 128
    dt: float = 2e-4
    steps: int = 100


def fit_rate(k: int, cfg: FitConfig) -> float:
    ts, amps = [], []

    def record(state, recharted):
        ts.append(state.t)
        amps.append(2 * np.mean(state.dom.rho.values * np.cos(k * state.dom.curve.s)))

    # integrate over a fixed fraction of the mode's e-folding time
    T = 0.5 / (k * (k * k - 1))
    flow.simulate(perturbed_disk(k, cfg.eps, cfg.n), flow.FlowConfig(dt=T / cfg.steps, T=T), record)
    return float(np.polyfit(ts, np.log(amps), 1)[0])


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--modes", type=int, nargs="+", default=list(FitConfig.modes))
    p.add_argument("--eps", type=float, default=FitConfig.eps)
    p.add_argument("--n", type=int, default=FitConfig.n)
    p.add_argument("--steps", type=int, default=FitConfig.steps)
    a = p.parse_args()
    cfg = FitConfig(tuple(a.modes), a.eps, a.n, steps=a.steps)
    print(" k   fitted      linear     rel. error")
    for k in cfg.modes:
        rate, lin = fit_rate(k, cfg), -k * (k * k - 1)
        print(f"{k:2d}  {rate:10.4f}  {lin:8d}   {abs(rate - lin) / abs(lin):.2e}")


if __name__ == "__main__":
    main()
