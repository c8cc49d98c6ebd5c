"""Periodic maximization for a few functions, with the Markov lower bound for contrast."""

import argparse
from dataclasses import dataclass

from dyckshift import (AlphabetParams, Bernoulli, PeriodicPoint, Pushforward, degenerate_fn,
                       drift_function, indicator, lambda_markov_lower, lambda_periodic,
                       maximizer_probe)


@dataclass
class Config:
    p: int = 8
    tol: float = 0.0


def functions(params):
    return {
        "ind(A1 B1)": indicator(("A1", "B1"), params),
        "ind(U1 A2)": indicator(("U1", "A2"), params),
        "drift": drift_function(params),
        "degenerate(A1,A2)": degenerate_fn([PeriodicPoint.of("A1", 2, 1),
                                            PeriodicPoint.of("A2", 2, 1)], 0),
    }


def main(cfg: Config) -> None:
    params = AlphabetParams(2, 1)
    ka = Pushforward("alpha", Bernoulli.uniform(params, "alpha"))
    print("function,lambda_p,upper,markov_lower,maximizers,first_orbit")
    for name, f in functions(params).items():
        r = lambda_periodic(f, cfg.p)
        probe = maximizer_probe(f, cfg.p, tol=cfg.tol, result=r)
        first = " ".join(r.argmax_orbits[0].cycle)
        print(f"{name},{r.lower_bound},{r.upper_bound},{float(lambda_markov_lower(f, ka)):.4f},"
              f"{len(probe.witnesses)}{'+' if probe.truncated else ''},{first}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=Config.p)
    ap.add_argument("--tol", type=float, default=Config.tol)
    a = ap.parse_args()
    main(Config(p=a.p, tol=a.tol))
