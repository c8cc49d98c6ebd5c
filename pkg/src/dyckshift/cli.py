"""Command-line front end: `python -m dyckshift <subcommand> ...`.

Exit codes: 0 ok, 1 a path check failed, 2 parse/schema error,
3 size limit, 4 transport condition violated, 5 resource cap hit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from .approx import co_approx
from .embeddings import PeriodicPoint, collapse, reconstruct
from .errors import InvalidInput, PreconditionError, ResourceError, TransportError
from .functions import LocallyConstantFn
from .measures import (classify_measure, cylinder_prob, describe, entropy, integral,
                       spec_from_json)
from .metric import WeakStarConfig, weakstar_distance
from .numbers import display, format_number
from .optimize import lambda_periodic, maximizer_probe
from .paths import build_path, verify_path
from .symbolic import (AlphabetParams, Ambient, classify, count_words, entropy_estimate,
                       enumerate_words, format_word, parse_word, periodic_admissible,
                       periodic_class, reduce)

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_SIZE, EXIT_TRANSPORT, EXIT_RESOURCE = 0, 1, 2, 3, 4, 5
ENTROPY_N_MAX = 40


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str, partial=None):
        super().__init__(message)
        self.code = code
        self.kind = kind
        self.partial = partial


@dataclass(frozen=True)
class RunConfig:
    M: int
    N: int
    seed: int | None
    fmt: str
    precision: int

    @property
    def params(self) -> AlphabetParams:
        return AlphabetParams(self.M, self.N)

    def need_seed(self, command: str) -> int:
        if self.seed is None:
            raise CliError(EXIT_INPUT, "missing_seed", f"{command} is stochastic: pass --seed")
        return self.seed


class Out:
    """Collects the command's output; rendered once at the end."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.chunks: list[str] = []

    def text(self, line: str):
        self.chunks.append(line + "\n")

    def raw(self, blob: str):
        self.chunks.append(blob)

    def json(self, obj):
        self.chunks.append(json.dumps(obj, indent=2, sort_keys=True) + "\n")

    def rows(self, header, rows):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        self.chunks.append(buf.getvalue())


def _num(x, cfg: RunConfig):
    return format_number(x, cfg.precision)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_INPUT, "io", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, "schema", f"{path}: invalid JSON ({exc.msg})") from None


def _measure(path: str, cfg: RunConfig):
    return spec_from_json(_load_json(path), cfg.M, cfg.N)


def _function(path: str, cfg: RunConfig) -> LocallyConstantFn:
    return LocallyConstantFn.from_json(_load_json(path), cfg.M, cfg.N)


def _word(text: str, cfg: RunConfig, ambient=Ambient.SIGMA_D) -> tuple:
    return parse_word(text, cfg.params.alphabet(ambient))


# --------------------------------------------------------------------------
# subcommands


def cmd_reduce(args, cfg: RunConfig, out: Out):
    red = reduce(_word(args.word, cfg))
    if cfg.fmt == "json":
        out.json({"word": args.word, "zero": red.zero, "rights": format_word(red.rights),
                  "lefts": format_word(red.lefts), "normal_form": str(red)})
    else:
        out.text(str(red))


def cmd_classify(args, cfg: RunConfig, out: Out):
    w = _word(args.word, cfg)
    info = {"word": format_word(w), "class": classify(w).value}
    if args.periodic:
        info["periodic_admissible"] = periodic_admissible(w)
        info["periodic_class"] = periodic_class(w).value if info["periodic_admissible"] else None
    if cfg.fmt == "json":
        out.json(info)
    elif cfg.fmt == "csv":
        out.rows(list(info), [list(info.values())])
    else:
        for k, v in info.items():
            out.text(f"{k}: {v}")


def cmd_count(args, cfg: RunConfig, out: Out):
    if args.n < 0:
        raise CliError(EXIT_INPUT, "range", "n must be >= 0")
    c = count_words(cfg.params, args.n)
    if cfg.fmt == "json":
        out.json({"M": cfg.M, "N": cfg.N, "n": args.n, "count": c})
    else:
        out.text(str(c))


def cmd_enumerate(args, cfg: RunConfig, out: Out):
    words = [format_word(w) for w in enumerate_words(cfg.params, args.n, cap=args.cap)]
    if cfg.fmt == "json":
        out.json({"n": args.n, "count": len(words), "words": words})
    else:
        for w in words:
            out.text(w)


def cmd_entropy(args, cfg: RunConfig, out: Out):
    if args.n_max > ENTROPY_N_MAX:
        raise CliError(EXIT_SIZE, "too_large", f"n-max {args.n_max} exceeds {ENTROPY_N_MAX}")
    if args.n_max < 1:
        raise CliError(EXIT_INPUT, "range", "n-max must be >= 1")
    p = cfg.precision
    rows = [(n, count_words(cfg.params, n), f"{entropy_estimate(cfg.params, n):.{p}f}")
            for n in range(1, args.n_max + 1)]
    limit = f"{math.log(cfg.M + cfg.N + 1):.{p}f}"
    if cfg.fmt == "json":
        out.json({"rows": [{"n": n, "count": c, "estimate": float(e)} for n, c, e in rows],
                  "log_M_N_1": float(limit)})
    else:
        out.rows(["n", "count", "estimate"], rows + [("log(M+N+1)", "", limit)])


def cmd_embed(args, cfg: RunConfig, out: Out):
    if args.op == "collapse":
        x = PeriodicPoint(_word(args.cycle, cfg), cfg.params, Ambient.SIGMA_D)
        y = collapse(x, args.gamma)
    else:
        amb = Ambient.SIGMA_ALPHA if args.gamma == "alpha" else Ambient.SIGMA_BETA
        x = PeriodicPoint(_word(args.cycle, cfg, amb), cfg.params, amb)
        y = reconstruct(x, args.gamma)
    if cfg.fmt == "json":
        out.json({"op": args.op, "gamma": args.gamma, "input": x.to_json(), "output": y.to_json()})
    else:
        out.text(str(y))


def cmd_measure(args, cfg: RunConfig, out: Out):
    mu = _measure(args.spec, cfg)
    if args.op == "cylinder":
        if not args.word:
            raise CliError(EXIT_INPUT, "missing", "measure cylinder needs --word")
        v = cylinder_prob(mu, _word(args.word, cfg, mu.ambient))
        res = {"word": args.word, "value": _num(v, cfg), "display": display(v, cfg.precision)}
    elif args.op == "integral":
        if not args.fn:
            raise CliError(EXIT_INPUT, "missing", "measure integral needs --fn")
        v = integral(mu, _function(args.fn, cfg))
        res = {"value": _num(v, cfg), "display": display(v, cfg.precision)}
    elif args.op == "entropy":
        res = {"value": _num(entropy(mu), cfg)}
    elif args.op == "classify":
        res = {"class": classify_measure(mu).value}
    else:
        if not args.other:
            raise CliError(EXIT_INPUT, "missing", "measure distance needs --other")
        d, bound = weakstar_distance(mu, _measure(args.other, cfg), WeakStarConfig(args.L))
        res = {"value": _num(d, cfg), "display": display(d, cfg.precision),
               "tail_bound": _num(bound, cfg), "L": args.L}
    res = {"op": args.op, "measure": describe(mu), **res}
    if cfg.fmt == "json":
        out.json(res)
    elif cfg.fmt == "csv":
        out.rows(list(res), [list(res.values())])
    else:
        out.text(str(res.get("display", res.get("value", res.get("class")))))


def cmd_approx(args, cfg: RunConfig, out: Out):
    seed = cfg.need_seed("approx")
    mu = _measure(args.spec, cfg)
    wcfg = WeakStarConfig(args.L)
    rows = []
    for b in args.budget:
        a = co_approx(mu, b, seed=seed, cfg=wcfg, gamma=args.gamma, with_distance=True)
        exact, _ = weakstar_distance(a.measure, mu, wcfg)
        rows.append({"budget": b, "cycle": format_word(a.measure.point.cycle),
                     "period": a.measure.point.period, "distance": _num(exact, cfg),
                     "distance_decimal": round(float(exact), cfg.precision + 6)})
    if cfg.fmt == "json":
        out.json({"target": describe(mu), "seed": seed, "L": args.L, "results": rows})
    else:
        out.rows(["budget", "period", "distance", "distance_decimal", "cycle"],
                 [[r["budget"], r["period"], r["distance"], f"{r['distance_decimal']:.{cfg.precision}e}",
                   r["cycle"]] for r in rows])


def cmd_path(args, cfg: RunConfig, out: Out):
    seed = cfg.need_seed("path")
    plus = _measure(args.plus, cfg)
    minus = _measure(args.minus, cfg)
    for mu, name in ((plus, "--plus"), (minus, "--minus")):
        if mu.ambient is not Ambient.SIGMA_D:
            raise CliError(EXIT_INPUT, "schema", f"{name} must be a measure on SigmaD")
    if plus == minus:
        raise CliError(EXIT_INPUT, "schema", "path endpoints must differ")
    p = build_path(plus, minus, gamma=args.gamma, levels=args.levels, seed=seed)
    if args.save:
        with open(args.save, "w") as fh:
            json.dump(p.to_json(), fh, indent=2, sort_keys=True)
    report = verify_path(p, args.grid)
    fine = verify_path(p, 2 * args.grid - 1)
    ok = report.endpoint_exact and fine.max_gap < report.max_gap
    if cfg.fmt == "json":
        out.json({"summary": {**report.summary(), "refined_max_gap": fine.max_gap,
                              "refinement_ok": fine.max_gap < report.max_gap},
                  "rows": [{k: v for k, v in r.items()} for r in report.rows]})
    else:
        out.raw(report.to_csv(cfg.precision))
    return EXIT_OK if ok else EXIT_CHECK


def _opt_json(res, probe, cfg: RunConfig):
    obj = res.to_json()
    obj["value"] = obj["lower_bound"]
    if probe is not None:
        obj["probe"] = probe.to_json()
    return obj


def cmd_optimize(args, cfg: RunConfig, out: Out):
    f = _function(args.fn, cfg)
    try:
        res = lambda_periodic(f, args.p, d_max=args.d_max, max_states=args.max_states)
    except ResourceError as exc:
        partial = getattr(exc, "partial", None)
        raise CliError(EXIT_RESOURCE, "resource", str(exc),
                       partial=None if partial is None else _opt_json(partial, None, cfg)) from None
    probe = maximizer_probe(f, args.p, Fraction(args.tol), res) if args.tol is not None else None
    if cfg.fmt == "json":
        out.json(_opt_json(res, probe, cfg))
    else:
        out.rows(["value", "upper_bound", "period_budget", "witness"],
                 [[format_number(res.lower_bound), format_number(res.upper_bound),
                   res.period_budget, format_word(o.cycle)] for o in res.argmax_orbits])


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--M", type=int, default=2, help="number of bracket pairs (>= 2)")
    common.add_argument("--N", type=int, default=1, help="number of unit symbols (>= 0)")
    common.add_argument("--seed", type=int, default=None, help="seed for stochastic commands")
    common.add_argument("--format", choices=["text", "json", "csv"], default="text", dest="fmt")
    common.add_argument("--precision", type=int, default=6)

    ap = argparse.ArgumentParser(prog="dyckshift", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    p = add("reduce", cmd_reduce, "normal form of a word")
    p.add_argument("word")
    p = add("classify", cmd_classify, "neutral / negative / positive / zero")
    p.add_argument("word")
    p.add_argument("--periodic", action="store_true", help="also classify the repeated word")
    p = add("count", cmd_count, "number of admissible words of length n")
    p.add_argument("--n", type=int, required=True)
    p = add("enumerate", cmd_enumerate, "admissible words of length n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cap", type=int, default=12)
    p = add("entropy", cmd_entropy, "word counts and entropy estimates")
    p.add_argument("--n-max", type=int, required=True)
    p = add("embed", cmd_embed, "collapse or reconstruct a periodic point")
    p.add_argument("op", choices=["collapse", "reconstruct"])
    p.add_argument("cycle")
    p.add_argument("--gamma", choices=["alpha", "beta"], default="alpha")
    p = add("measure", cmd_measure, "queries on a measure spec")
    p.add_argument("op", choices=["cylinder", "integral", "entropy", "classify", "distance"])
    p.add_argument("--spec", required=True)
    p.add_argument("--word")
    p.add_argument("--fn")
    p.add_argument("--other")
    p.add_argument("--L", type=int, default=2)
    p = add("approx", cmd_approx, "CO-measure approximation")
    p.add_argument("--spec", required=True)
    p.add_argument("--budget", type=int, nargs="+", default=[10, 20, 40, 60])
    p.add_argument("--gamma", choices=["alpha", "beta"], default="alpha")
    p.add_argument("--L", type=int, default=2)
    p = add("path", cmd_path, "build and check a path of measures")
    p.add_argument("--plus", required=True)
    p.add_argument("--minus", required=True)
    p.add_argument("--grid", type=int, default=65)
    p.add_argument("--gamma", choices=["alpha", "beta"], default="alpha")
    p.add_argument("--levels", type=int, default=8)
    p.add_argument("--save", help="write the PathSpec JSON here")
    p = add("optimize", cmd_optimize, "maximize a locally constant function")
    p.add_argument("--fn", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d-max", type=int, default=None)
    p.add_argument("--tol", default=None, help="also list witnesses within this tolerance")
    p.add_argument("--max-states", type=int, default=3_000_000)
    return ap


def _emit_error(err: CliError, fmt: str):
    if fmt == "json":
        obj = {"error": err.kind, "message": str(err), "exit_code": err.code}
        if err.partial is not None:
            obj["partial"] = err.partial
        sys.stderr.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        sys.stderr.write(f"error: {err}\n")
        if err.partial is not None:
            sys.stderr.write("partial: " + json.dumps(err.partial, sort_keys=True) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    out = None
    try:
        cfg = RunConfig(args.M, args.N, args.seed, args.fmt, args.precision)
        cfg.params  # validates M, N
        out = Out(cfg)
        code = args.func(args, cfg, out) or EXIT_OK
    except CliError as err:
        _emit_error(err, args.fmt)
        return err.code
    except TransportError as exc:
        _emit_error(CliError(EXIT_TRANSPORT, "transport", str(exc)), args.fmt)
        return EXIT_TRANSPORT
    except (InvalidInput, PreconditionError) as exc:
        _emit_error(CliError(EXIT_INPUT, "input", str(exc)), args.fmt)
        return EXIT_INPUT
    except ResourceError as exc:
        _emit_error(CliError(EXIT_RESOURCE, "resource", str(exc)), args.fmt)
        return EXIT_RESOURCE
    sys.stdout.write("".join(out.chunks))
    return code


if __name__ == "__main__":
    sys.exit(main())
