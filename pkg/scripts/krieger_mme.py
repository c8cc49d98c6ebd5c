"""Compare the two transported uniform measures: exact cylinders, Monte Carlo, distance."""

import argparse
import math
from dataclasses import dataclass

from dyckshift import (AlphabetParams, Bernoulli, Pushforward, WeakStarConfig, entropy,
                       weakstar_distance)
from dyckshift.sampling import sample_many


@dataclass
class Config:
    params: tuple = ((2, 0), (2, 1), (3, 2))
    samples: int = 100_000
    seed: int = 0
    L: int = 2


def main(cfg: Config) -> None:
    print("M,N,gamma,exact_A1,mc_A1,z,entropy,distance_L")
    for M, N in cfg.params:
        p = AlphabetParams(M, N)
        mus = {g: Pushforward(g, Bernoulli.uniform(p, g)) for g in ("alpha", "beta")}
        d = float(weakstar_distance(mus["alpha"], mus["beta"], WeakStarConfig(cfg.L))[0])
        for i, (g, mu) in enumerate(mus.items()):
            exact = mu.cylinder(("A1",))
            wins = sample_many(mu, 1, cfg.samples, seed=cfg.seed + i)
            freq = sum(w == ("A1",) for w in wins) / cfg.samples
            x = float(exact)
            z = (freq - x) / math.sqrt(x * (1 - x) / cfg.samples)
            print(f"{M},{N},{g},{exact},{freq:.5f},{z:+.2f},{entropy(mu):.6f},{d:.6g}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    main(Config(samples=a.samples, seed=a.seed))
