"""Command-line interface: ``hyperpoly <command> ...``.

Exit status 0 on success, 1 on usage or input errors, 2 when a checked
identity fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .battery import selftest
from .claims import expand_vS, verify_claims
from .combinat import Alpha, Subset, core_index_set, enumerate_shorts, format_rational, is_short, validate_alpha
from .coregeom import classify_intersection, emit_core_graph, euler_cross_check
from .errors import ClaimViolation, HyperpolyError, NonGenericAlpha, ParseError
from .intersection import intersection_form
from .momentmap import (
    DEFAULT_TOL,
    PointPQ,
    is_stable,
    moment_residuals,
    phi_moment,
    random_polygon_pair,
    round_trip,
)
from .presentations import (
    b_ring,
    betti,
    konno_ideal,
    equivariant_ideal,
    core_equivariant_ideal,
    core_ordinary_ideal,
    polygon_subspace_kernel,
    relabel_one_in_s,
    specialize_x,
)

TARGETS = ("x", "x-eq", "core", "core-eq", "polygon-sub")


class UsageError(HyperpolyError, ValueError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    alpha: Alpha
    subset: Optional[Subset]
    fmt: str
    max_degree: Optional[int]
    tol: float
    seed: int


def parse_subset(text: str, n: int) -> Subset:
    try:
        elems = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ParseError(f"cannot parse subset {text!r}") from exc
    return Subset.of(n, elems)


def load_alpha(args) -> Alpha:
    if (args.alpha is None) == (args.alpha_file is None):
        raise UsageError("give exactly one of --alpha and --alpha-file")
    if args.alpha is not None:
        return validate_alpha([t for t in args.alpha.split(",")])
    try:
        with open(args.alpha_file) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {args.alpha_file}: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("alpha")
    if not isinstance(data, list):
        raise ParseError("alpha file must hold a list or an object with key 'alpha'")
    return validate_alpha([v if isinstance(v, (int, str)) else str(v) for v in data])


def config(args) -> RunConfig:
    a = load_alpha(args)
    s = parse_subset(args.s, a.n) if getattr(args, "s", None) else None
    return RunConfig(a, s, args.format, getattr(args, "max_degree", None), args.tol, args.seed)


def dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=False) + "\n"


def _need_subset(cfg: RunConfig) -> Subset:
    if cfg.subset is None:
        raise UsageError("this command needs --s")
    return cfg.subset


def _relabel(cfg: RunConfig):
    rl = relabel_one_in_s(cfg.alpha, _need_subset(cfg))
    return rl, rl.alpha, rl.subset


def _relabel_note(rl, out):
    if not rl.is_identity:
        moved = ", ".join(f"{i}->{p}" for i, p in enumerate(rl.perm, 1) if p != i)
        out.write(f"relabeled edges {moved}: alpha = {rl.alpha}, S = {rl.subset}\n")


def build_presentation(cfg: RunConfig, target: str):
    a = cfg.alpha
    if target == "x":
        return konno_ideal(a), None
    if target == "x-eq":
        return equivariant_ideal(a), None
    rl, b, t = _relabel(cfg)
    if target == "core":
        return core_ordinary_ideal(b, t), rl
    if target == "core-eq":
        return core_equivariant_ideal(b, t), rl
    if target == "polygon-sub":
        return specialize_x(polygon_subspace_kernel(b, t)), rl
    raise UsageError(f"unknown target {target!r}")


def cmd_shorts(cfg: RunConfig, args, out):
    a = cfg.alpha
    shorts = enumerate_shorts(a, args.min_size)
    if cfg.fmt == "json":
        out.write(dump({
            "alpha": a.to_json(),
            "total": format_rational(a.total),
            "shorts": [s.to_json() for s in shorts],
            "core_index_set": [s.to_json() for s in core_index_set(a)],
        }))
        return 0
    out.write(f"alpha = {a}, total = {format_rational(a.total)}\n")
    for s in shorts:
        out.write(f"{s}\t{format_rational(a.weight(s))}\n")
    out.write(f"{len(shorts)} short subsets of size >= {args.min_size}\n")
    return 0


def cmd_betti(cfg: RunConfig, args, out):
    pres, rl = build_presentation(cfg, args.target)
    table = betti(pres, cfg.max_degree)
    if cfg.fmt == "json":
        obj = table.to_json()
        if rl is not None and not rl.is_identity:
            obj["relabeling"] = rl.to_json()
        out.write(dump(obj))
        return 0
    if rl is not None:
        _relabel_note(rl, out)
    out.write("degree\tdim\n")
    for d, v in enumerate(table.dims):
        out.write(f"{d}\t{v}\n")
    out.write(f"poincare {table.poincare()}\neuler {table.euler}\n")
    return 0


def cmd_presentation(cfg: RunConfig, args, out):
    pres, rl = build_presentation(cfg, args.target)
    if cfg.fmt == "json":
        obj = pres.to_json()
        if rl is not None and not rl.is_identity:
            obj["relabeling"] = rl.to_json()
        out.write(dump(obj))
        return 0
    if rl is not None:
        _relabel_note(rl, out)
    R = pres.ring
    ring = ", ".join(n if d == 1 else f"{n} (deg {d})" for n, d in R.variables)
    out.write(f"{pres.provenance.value}  Q[{ring}]\n")
    if pres.ideal.truncation is not None:
        out.write(f"plus everything of degree >= {pres.ideal.truncation}\n")
    for g in pres.ideal.generators:
        out.write(f"  {g}\n")
    return 0


def cmd_claims(cfg: RunConfig, args, out):
    a = cfg.alpha
    if cfg.subset is not None:
        exp = expand_vS(cfg.subset, a.n)
        if cfg.fmt == "json":
            out.write(dump(exp.to_json()))
        else:
            for A, c in sorted(exp.coefficients.items(), key=lambda t: t[0].sort_key()):
                out.write(f"{A}\t{format_rational(c)}\n")
        return 0
    report = verify_claims(a)
    if cfg.fmt == "json":
        out.write(dump(report.to_json()))
    else:
        for k, v in report.to_json().items():
            out.write(f"{k}\t{v}\n")
        out.write("all identities hold\n")
    return 0


def cmd_core_graph(cfg: RunConfig, args, out):
    fmt = "dot" if cfg.fmt == "table" else cfg.fmt
    if args.scope == "component":
        out.write(emit_core_graph(cfg.alpha, "component", fmt, _need_subset(cfg)))
    else:
        out.write(emit_core_graph(cfg.alpha, "global", fmt))
    return 0


def cmd_core_euler(cfg: RunConfig, args, out):
    subsets = [cfg.subset] if cfg.subset is not None else core_index_set(cfg.alpha)
    checks = [euler_cross_check(cfg.alpha, s) for s in subsets]
    if cfg.fmt == "json":
        out.write(dump([c.to_json() for c in checks]))
        return 0
    for c in checks:
        out.write(f"{c.S}\t{c.euler_core} = {c.euler_polygon} + {c.weight}*{c.fixed_points}\n")
    return 0


def default_basis(a: Alpha, s: Subset):
    """``b_1 - sum b_j`` followed by each ``b_j``, ``j`` the surviving variables."""
    R = b_ring(a.n)
    js = [j for j in s.complement() if is_short(a, s.add(j))]
    first = R.var("b1")
    for j in js:
        first = first - R.var(f"b{j}")
    return [first] + [R.var(f"b{j}") for j in js]


def cmd_intersection(cfg: RunConfig, args, out):
    rl, b, t = _relabel(cfg)
    form = intersection_form(b, t, default_basis(b, t), normalized=not args.unnormalized)
    if cfg.fmt == "json":
        obj = form.to_json()
        if not rl.is_identity:
            obj["relabeling"] = rl.to_json()
        out.write(dump(obj))
        return 0
    _relabel_note(rl, out)
    out.write("basis " + ", ".join(str(v) for v in form.basis) + "\n")
    out.write(f"normalization {form.reference} = 1\n" if form.normalized else f"unnormalized, reference {form.reference}\n")
    out.write(form.table())
    return 0


def cmd_point(cfg: RunConfig, args, out):
    a = cfg.alpha
    if args.action == "check":
        if not args.point:
            raise UsageError("point check needs --point FILE")
        try:
            with open(args.point) as fh:
                x = PointPQ.from_json(json.load(fh))
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"cannot read point: {exc}") from exc
        verdict = is_stable(a, x, cfg.tol)
        witness = verdict.witness.to_json() if isinstance(verdict.witness, Subset) else verdict.witness
        obj = {
            "residuals": {k: f"{v:.3e}" for k, v in moment_residuals(a, x).items()},
            "stable": verdict.stable,
            "failed_condition": verdict.condition,
            "witness": witness,
            "phi": f"{phi_moment(x):.12g}",
        }
        out.write(dump(obj) if cfg.fmt == "json" else "".join(f"{k}\t{v}\n" for k, v in obj.items()))
        return 0
    s = _need_subset(cfg)
    rng = np.random.default_rng(cfg.seed)
    worst: dict[str, float] = {}
    for _ in range(args.samples):
        rt = round_trip(a, s, random_polygon_pair(rng, a, s), cfg.tol)
        for k, v in rt.residuals.items():
            key = "norm_u" if k.startswith("norm_u") else k
            worst[key] = max(worst.get(key, 0.0), v)
    ok = all(v <= cfg.tol for v in worst.values())
    obj = {"samples": args.samples, "seed": cfg.seed, "max_residuals": {k: f"{v:.3e}" for k, v in sorted(worst.items())}, "ok": ok}
    out.write(dump(obj) if cfg.fmt == "json" else "".join(f"{k}\t{v}\n" for k, v in obj.items()))
    if not ok:
        raise ClaimViolation("round-trip residual above tolerance")
    return 0


def cmd_selftest(args, out):
    report = selftest(seed=args.seed, samples=args.samples, tol=args.tol)
    out.write(json.dumps(report, indent=1, sort_keys=True) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", help="comma-separated edge lengths, e.g. 1,1,3,3,3 or 1/2,1,1")
    common.add_argument("--alpha-file", help="JSON file holding the edge lengths")
    common.add_argument("--s", help="subset as comma-separated 1-based indices")
    common.add_argument("--t", help="second subset (core classify)")
    common.add_argument("--format", choices=("table", "json", "dot"), default="table")
    common.add_argument("--max-degree", type=int)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="hyperpoly", description="Cohomology presentations and core geometry of hyperpolygon spaces.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("shorts", parents=[common], help="list short subsets")
    sp.add_argument("--min-size", type=int, default=1)
    for name in ("betti", "presentation"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--target", choices=TARGETS, required=True)
    sp = sub.add_parser("claims", parents=[common], help="check the spanning identities")
    sp.add_argument("action", choices=("verify",))
    sp = sub.add_parser("core", parents=[common], help="core components")
    sp.add_argument("action", choices=("graph", "euler-check", "classify"))
    sp.add_argument("--scope", choices=("global", "component"), default="global")
    sp = sub.add_parser("intersection-form", parents=[common])
    sp.add_argument("--unnormalized", action="store_true")
    sp = sub.add_parser("point", parents=[common], help="moment-map numerics")
    sp.add_argument("action", choices=("check", "roundtrip"))
    sp.add_argument("--point", help="JSON file with p and q")
    sp.add_argument("--samples", type=int, default=100)
    sp = sub.add_parser("selftest", help="exhaustive sweep over the test battery")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    return p


def cmd_core_classify(cfg: RunConfig, args, out):
    if args.t is None:
        raise UsageError("core classify needs --s and --t")
    inter = classify_intersection(cfg.alpha, _need_subset(cfg), parse_subset(args.t, cfg.alpha.n))
    if cfg.fmt == "json":
        out.write(dump({
            "kind": inter.kind.value,
            "container": inter.container.to_json() if inter.container else None,
            "nonempty": inter.nonempty,
            "description": inter.description,
        }))
    else:
        out.write(f"{inter.kind.value}\n{inter.description}\n")
    return 0


def dispatch(args, out) -> int:
    if args.command == "selftest":
        return cmd_selftest(args, out)
    cfg = config(args)
    if args.command == "shorts":
        return cmd_shorts(cfg, args, out)
    if args.command == "betti":
        return cmd_betti(cfg, args, out)
    if args.command == "presentation":
        return cmd_presentation(cfg, args, out)
    if args.command == "claims":
        return cmd_claims(cfg, args, out)
    if args.command == "core":
        if args.action == "graph":
            return cmd_core_graph(cfg, args, out)
        if args.action == "classify":
            return cmd_core_classify(cfg, args, out)
        return cmd_core_euler(cfg, args, out)
    if args.command == "intersection-form":
        return cmd_intersection(cfg, args, out)
    if args.command == "point":
        return cmd_point(cfg, args, out)
    raise UsageError(f"unknown command {args.command}")


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return dispatch(args, out)
    except ClaimViolation as exc:
        err.write(f"error [{exc.code}]: {exc}\n")
        if exc.witness is not None:
            err.write(f"witness: {exc.witness}\n")
        return 2
    except NonGenericAlpha as exc:
        err.write(f"error [{exc.code}]: {exc}\nwitness: {{{exc.witness.label()}}}\n")
        return 1
    except HyperpolyError as exc:
        err.write(f"error [{exc.code}]: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
