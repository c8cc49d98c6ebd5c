"""Word counts and entropy estimates against log(M+N+1)."""

import argparse
import math
from dataclasses import dataclass

from dyckshift import AlphabetParams, count_words, entropy_estimate


@dataclass
class Config:
    params: tuple = ((2, 0), (2, 1), (3, 2))
    n_max: int = 24


def main(cfg: Config) -> None:
    print("M,N,n,count,estimate,gap")
    for M, N in cfg.params:
        p = AlphabetParams(M, N)
        h = math.log(M + N + 1)
        for n in range(1, cfg.n_max + 1):
            est = entropy_estimate(p, n)
            print(f"{M},{N},{n},{count_words(p, n)},{est:.6f},{est - h:.6f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=Config.n_max)
    main(Config(n_max=ap.parse_args().n_max))
