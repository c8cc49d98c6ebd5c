"""Build a path between two measures and report structure and refinement."""

import argparse
import json
from dataclasses import dataclass

from dyckshift import CO, AlphabetParams, Bernoulli, Pushforward, build_path, verify_path


@dataclass
class Config:
    grids: tuple = (17, 33, 65, 129)
    seed: int = 0
    levels: int = 8
    save: str | None = None


def endpoints():
    return CO.of("A1", 2, 1), Pushforward("alpha", Bernoulli.uniform(AlphabetParams(2, 1), "alpha"))


def main(cfg: Config) -> None:
    plus, minus = endpoints()
    path = build_path(plus, minus, levels=cfg.levels, seed=cfg.seed)
    if cfg.save:
        with open(cfg.save, "w") as fh:
            json.dump(path.to_json(), fh, indent=2)
    print("grid,max_gap,min_pairwise,endpoint_exact,interior_structure,pairwise_distinct")
    for g in cfg.grids:
        r = verify_path(path, g)
        print(f"{g},{r.max_gap:.6g},{r.min_pairwise:.3g},{int(r.endpoint_exact)},"
              f"{int(r.interior_structure)},{int(r.pairwise_distinct)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--levels", type=int, default=Config.levels)
    ap.add_argument("--save")
    a = ap.parse_args()
    main(Config(seed=a.seed, levels=a.levels, save=a.save))
