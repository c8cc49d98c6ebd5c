"""Distance of the best CO approximant to a target over a range of period budgets."""

import argparse
from dataclasses import dataclass

from dyckshift import (AlphabetParams, Bernoulli, Pushforward, WeakStarConfig, co_approx,
                       weakstar_distance)


@dataclass
class Config:
    budgets: tuple = (5, 10, 20, 40, 60, 80)
    seeds: tuple = (0, 1, 2)
    L: int = 2
    gamma: str = "alpha"


def main(cfg: Config) -> None:
    target = Pushforward(cfg.gamma, Bernoulli.uniform(AlphabetParams(2, 1), cfg.gamma))
    wcfg = WeakStarConfig(cfg.L)
    print("seed,budget,period,distance")
    for seed in cfg.seeds:
        for b in cfg.budgets:
            got = co_approx(target, b, seed=seed, cfg=wcfg, gamma=cfg.gamma)
            d = weakstar_distance(got, target, wcfg)[0]
            print(f"{seed},{b},{got.point.period},{float(d):.6g}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gamma", choices=("alpha", "beta"), default=Config.gamma)
    ap.add_argument("--L", type=int, default=Config.L)
    a = ap.parse_args()
    main(Config(gamma=a.gamma, L=a.L))
