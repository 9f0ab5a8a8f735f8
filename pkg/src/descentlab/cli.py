"""Command line interface.

    descentlab lattice info --tau i --prec 50
    descentlab descent torus --b "1+1i"
    descentlab descent elliptic --tau "sqrt3*(1+1i)"
    descentlab ext kernel --kind ga --param 1 --tau i --prec 50
    descentlab relations find --file values.json --maxcoeff 100 --prec 200
    descentlab weil restrict --object "Gm"
    descentlab groupcat delta --object "ExtGa(E(tau=i),t=1) x Gm"

Exit codes: 0 ok, 1 usage or parse error, 2 domain error, 3 insufficient precision.
The default precision comes from $DESCENTLAB_PREC (else 50 digits).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import mpmath

from . import descent, extensions, groupcat, relations, weierstrass
from .arith import ExactComplex, PrecisionContext
from .errors import DomainError, InsufficientPrecisionError, ParseError
from .textformat import eval_numeric, exact_to_json, parse_exact

PREC_ENV = "DESCENTLAB_PREC"
MAXCOEFF_ENV = "DESCENTLAB_MAXCOEFF"


@dataclass(frozen=True)
class Config:
    default_precision: int = 50
    maxcoeff_default: int = 100
    output: str = "json"

    def __post_init__(self):
        if self.default_precision < 15:
            raise ParseError("precision must be at least 15 digits")
        if self.output not in ("json", "table"):
            raise ParseError("output must be json or table")

    @classmethod
    def from_env(cls, environ=None) -> "Config":
        env = os.environ if environ is None else environ
        try:
            prec = int(env.get(PREC_ENV, 50))
            maxc = int(env.get(MAXCOEFF_ENV, 100))
        except ValueError:
            raise ParseError(f"{PREC_ENV}/{MAXCOEFF_ENV} must be integers") from None
        return cls(prec, maxc)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# serialization


def num_json(x, digits: int):
    """mpc/mpf -> {"re": str, "im": str}; plain numbers pass through."""
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, Fraction):
        return str(x)
    if hasattr(x, "_mpc_"):
        return {"re": mpmath.nstr(x.real, digits), "im": mpmath.nstr(x.imag, digits)}
    if hasattr(x, "_mpf_"):
        return mpmath.nstr(x, digits)
    return x


def ctx_json(ctx: PrecisionContext) -> dict:
    return {"decimal_digits": ctx.decimal_digits, "guard_digits": ctx.guard_digits,
            "series_tail_target": mpmath.nstr(ctx.tail, 3)}


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            yield prefix[:-1], ", ".join(json.dumps(v) if not isinstance(v, str) else v for v in obj)
        else:
            for i, v in enumerate(obj):
                yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix[:-1], "null" if obj is None else (json.dumps(obj) if isinstance(obj, bool) else str(obj))


def render(obj: dict, output: str) -> str:
    if output == "json":
        return json.dumps(obj, indent=2)
    rows = list(_flatten(obj))
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


# input helpers


def _number(text: str):
    """Exact shorthand if it parses as such, else a decimal/complex literal."""
    return parse_exact(text)


def lattice_from_json(obj: dict) -> weierstrass.Lattice:
    if "tau" in obj:
        tau = obj["tau"]
        if isinstance(tau, (int, float)):
            return weierstrass.Lattice.from_tau(mpmath.mpc(tau))
        if isinstance(tau, list) and len(tau) == 2:
            return weierstrass.Lattice.from_tau(mpmath.mpc(*tau))
        return weierstrass.Lattice.from_tau(parse_exact(tau))
    if "lambda1" in obj and "lambda2" in obj:
        return weierstrass.Lattice.from_basis(parse_exact(obj["lambda1"]), parse_exact(obj["lambda2"]))
    raise ParseError("lattice JSON needs 'tau' or 'lambda1'/'lambda2'")


def lattice_from_args(args) -> weierstrass.Lattice:
    if getattr(args, "lattice_json", None):
        try:
            return lattice_from_json(json.loads(args.lattice_json))
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid lattice JSON: {e}") from None
    if getattr(args, "tau", None) is not None:
        return weierstrass.Lattice.from_tau(parse_exact(args.tau))
    if getattr(args, "lambda1", None) is not None and getattr(args, "lambda2", None) is not None:
        return weierstrass.Lattice.from_basis(parse_exact(args.lambda1), parse_exact(args.lambda2))
    raise UsageError("give --tau, --lambda1/--lambda2 or --lattice-json")


def _ctx(args, cfg: Config) -> PrecisionContext:
    prec = args.prec if getattr(args, "prec", None) is not None else cfg.default_precision
    try:
        return PrecisionContext(int(prec), int(getattr(args, "guard", None) or 10))
    except DomainError as e:
        raise UsageError(str(e)) from None


# commands


def cmd_lattice_info(args, cfg):
    L = lattice_from_args(args)
    ctx = _ctx(args, cfg)
    d = ctx.decimal_digits
    inv = weierstrass.invariants(L, ctx)
    R = weierstrass.reduce_basis(L, ctx)
    out = {
        "lattice": {"lambda1": _lat_entry(L.lambda1, d), "lambda2": _lat_entry(L.lambda2, d)},
        "reduced": {"lambda1": _lat_entry(R.lambda1, d), "lambda2": _lat_entry(R.lambda2, d)},
        "g2": num_json(inv.g2, d), "g3": num_json(inv.g3, d),
        "discriminant": num_json(inv.discriminant, d), "j": num_json(inv.j, d),
        "eta1": num_json(inv.eta1, d), "eta2": num_json(inv.eta2, d),
        "legendre_residual": num_json(weierstrass.legendre_residual(L, ctx), 5),
        "precision": ctx_json(ctx),
    }
    return out


def _lat_entry(x, digits):
    if isinstance(x, ExactComplex):
        return str(x)
    return num_json(x, digits)


def _split_list(values):
    out = []
    for v in values:
        out.extend(p for p in v.split(",") if p.strip())
    return out


def cmd_descent_torus(args, cfg):
    bs = [parse_exact(b) for b in _split_list(args.b)]
    return descent.torus_verdict(bs).to_json()


def cmd_descent_elliptic(args, cfg):
    tau = parse_exact(args.tau)
    v = descent.elliptic_real_model(tau)
    out = v.to_json()
    out["tau"] = str(descent.normalize_tau(tau))
    out["weil_restriction"] = descent.weil_restriction_simple(tau).to_json()
    return out


def cmd_descent_hom(args, cfg):
    return descent.hom_module(parse_exact(args.tau), parse_exact(args.tau2), args.degree_bound).to_json()


def cmd_descent_twin(args, cfg):
    L = lattice_from_args(args)
    T = descent.complex_twin(L)
    return {"lambda1": str(T.lambda1), "lambda2": str(T.lambda2)}


def cmd_ext_kernel(args, cfg):
    L = lattice_from_args(args)
    ctx = _ctx(args, cfg)
    d = ctx.decimal_digits
    param = parse_exact(args.param)
    spec = extensions.ExtensionSpec(args.kind, param, L, args.normalization)
    mp = ctx.mp
    z1 = ctx.big(parse_exact(args.z1)) if args.z1 else mp.mpc("0.1234", "0.0567")
    z2 = ctx.big(parse_exact(args.z2)) if args.z2 else mp.mpc("0.3141", "0.2718") * ctx.big(L.lambda1)
    gens = extensions.kernel_generators(spec, ctx)
    res = extensions.periodicity_residual(spec, (z1, z2), ctx, gens)
    return {
        "kind": spec.kind, "normalization": spec.normalization,
        "generators": [[num_json(a, d), num_json(b, d)] for a, b in gens],
        "z": [num_json(z1, d), num_json(z2, d)],
        "residual": num_json(res, 5),
        "precision": ctx_json(ctx),
    }


def _lattice_names(L: weierstrass.Lattice):
    def inv(ctx):
        return weierstrass.invariants(L, ctx)
    return {
        "lambda1": lambda c: L.numeric_basis(c)[0],
        "lambda2": lambda c: L.numeric_basis(c)[1],
        "tau": lambda c: L.numeric_basis(c)[1] / L.numeric_basis(c)[0],
        "eta1": lambda c: inv(c).eta1, "eta2": lambda c: inv(c).eta2,
        "g2": lambda c: inv(c).g2, "g3": lambda c: inv(c).g3, "j": lambda c: inv(c).j,
    }


def cmd_relations_find(args, cfg):
    try:
        with open(args.file) as fh:
            data = json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {args.file}: {e}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON in {args.file}: {e}") from None
    names = {}
    if isinstance(data, dict):
        if "lattice" in data:
            names = _lattice_names(lattice_from_json(data["lattice"]))
        data = data.get("values")
    elif args.tau or args.lambda1:
        names = _lattice_names(lattice_from_args(args))
    if not isinstance(data, list):
        raise ParseError("values file must be a JSON list or {'values': [...]} object")
    if (args.tau or args.lambda1) and not names:
        names = _lattice_names(lattice_from_args(args))
    exprs = [str(v) for v in data]
    ctx = _ctx(args, cfg)

    def values(c):
        return [eval_numeric(e, names, c) for e in exprs]

    values(ctx)  # surface parse errors before the search
    H = args.maxcoeff if args.maxcoeff is not None else cfg.maxcoeff_default
    res = relations.find_integer_relation(relations.RelationQuery(values, H, ctx))
    out = res.to_json()
    out["values"] = exprs
    out["precision"] = ctx_json(ctx)
    return out


def cmd_relations_masser(args, cfg):
    ctx = _ctx(args, cfg)
    base = lattice_from_args(args)
    g2 = parse_exact(args.normalize_g2) if args.normalize_g2 is not None else None
    rot = parse_exact(args.rotate) if args.rotate is not None else None

    def build(c):
        # rebuilt per precision so relation re-verification gets fresh digits
        L = base if g2 is None else weierstrass.normalize_g2(base, g2, c)
        return L if rot is None else L.scaled(c.big(rot))
    H = args.maxcoeff if args.maxcoeff is not None else cfg.maxcoeff_default
    out = relations.masser_probe(build, ctx, H).to_json()
    out["precision"] = ctx_json(ctx)
    return out


def cmd_weil_restrict(args, cfg):
    G = groupcat.parse_object(args.object)
    rep = groupcat.weil_restrict_object(G)
    out = rep.to_json()
    out["object"] = str(G)
    return out


def cmd_weil_simple(args, cfg):
    return descent.weil_restriction_simple(parse_exact(args.tau)).to_json()


def cmd_groupcat_delta(args, cfg):
    G = groupcat.parse_object(args.object)
    return {"object": str(G), "delta": groupcat.delta_invariant(G)}


def cmd_groupcat_quotient(args, cfg):
    G = groupcat.parse_object(args.object)
    return {"object": str(G), "quotient": str(groupcat.max_plurisimple_quotient(G))}


def cmd_groupcat_conj(args, cfg):
    G = groupcat.parse_object(args.object)
    return {"object": str(G), "conjugate": str(groupcat.conj_object(G))}


def cmd_groupcat_check(args, cfg):
    G = groupcat.parse_object(args.object)
    try:
        kernel = [int(k) for k in _split_list(args.kernel)]
    except ValueError:
        raise ParseError("--kernel takes factor indices, e.g. 1,2") from None
    return {"object": str(G), "kernel": kernel,
            "result": groupcat.inherited_hypothesis_check(G, kernel)}


def cmd_groupcat_hom(args, cfg):
    A = groupcat.parse_object(args.source)
    B = groupcat.parse_object(args.target)
    if len(A.factors) != 1 or len(B.factors) != 1 or A.extensions or B.extensions:
        raise DomainError("hom takes two simple factors")
    r = groupcat.hom_rank(A.factors[0], B.factors[0])
    return {"rank": r.rank, "note": r.note}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="descentlab", description="Descent to real subfields, Weierstrass functions, relation probes")
    p.add_argument("--output", choices=["json", "table"], default="json")
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def lattice_args(sp, prec=True):
        sp.add_argument("--tau")
        sp.add_argument("--lambda1")
        sp.add_argument("--lambda2")
        sp.add_argument("--lattice-json", dest="lattice_json")
        if prec:
            sp.add_argument("--prec", type=int)
            sp.add_argument("--guard", type=int)

    lat = sub.add_parser("lattice").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sp = lat.add_parser("info")
    lattice_args(sp)
    sp.set_defaults(func=cmd_lattice_info)

    des = sub.add_parser("descent").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sp = des.add_parser("torus")
    sp.add_argument("--b", action="append", required=True, help="exponent(s); repeat or comma-separate")
    sp.set_defaults(func=cmd_descent_torus)
    sp = des.add_parser("elliptic")
    sp.add_argument("--tau", required=True)
    sp.set_defaults(func=cmd_descent_elliptic)
    sp = des.add_parser("hom")
    sp.add_argument("--tau", required=True)
    sp.add_argument("--tau2", required=True)
    sp.add_argument("--degree-bound", dest="degree_bound", type=int, default=32)
    sp.set_defaults(func=cmd_descent_hom)
    sp = des.add_parser("twin")
    lattice_args(sp, prec=False)
    sp.set_defaults(func=cmd_descent_twin)

    ext = sub.add_parser("ext").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sp = ext.add_parser("kernel")
    sp.add_argument("--kind", choices=["ga", "gm"], required=True)
    sp.add_argument("--param", required=True)
    sp.add_argument("--normalization", choices=["lemma", "printed"], default="lemma")
    sp.add_argument("--z1")
    sp.add_argument("--z2")
    lattice_args(sp)
    sp.set_defaults(func=cmd_ext_kernel)

    rel = sub.add_parser("relations").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sp = rel.add_parser("find")
    sp.add_argument("--file", required=True)
    sp.add_argument("--maxcoeff", type=int)
    lattice_args(sp)
    sp.set_defaults(func=cmd_relations_find)
    sp = rel.add_parser("masser")
    sp.add_argument("--maxcoeff", type=int)
    sp.add_argument("--normalize-g2", dest="normalize_g2")
    sp.add_argument("--rotate")
    lattice_args(sp)
    sp.set_defaults(func=cmd_relations_masser)

    weil = sub.add_parser("weil").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sp = weil.add_parser("restrict")
    sp.add_argument("--object", required=True)
    sp.set_defaults(func=cmd_weil_restrict)
    sp = weil.add_parser("simple")
    sp.add_argument("--tau", required=True)
    sp.set_defaults(func=cmd_weil_simple)

    gc = sub.add_parser("groupcat").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, fn in (("delta", cmd_groupcat_delta), ("quotient", cmd_groupcat_quotient),
                     ("conj", cmd_groupcat_conj)):
        sp = gc.add_parser(name)
        sp.add_argument("--object", required=True)
        sp.set_defaults(func=fn)
    sp = gc.add_parser("check")
    sp.add_argument("--object", required=True)
    sp.add_argument("--kernel", action="append", required=True)
    sp.set_defaults(func=cmd_groupcat_check)
    sp = gc.add_parser("hom")
    sp.add_argument("--source", required=True)
    sp.add_argument("--target", required=True)
    sp.set_defaults(func=cmd_groupcat_hom)
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg = Config.from_env()
        args = build_parser().parse_args(argv)
        cfg = Config(cfg.default_precision, cfg.maxcoeff_default, args.output)
        out = args.func(args, cfg)
    except (UsageError, ParseError) as e:
        print(f"error: {e}", file=stderr)
        return 1
    except InsufficientPrecisionError as e:
        print(f"insufficient precision: {e}", file=stderr)
        return 3
    except (DomainError, ZeroDivisionError) as e:
        print(f"domain error: {e}", file=stderr)
        return 2
    print(render(out, args.output), file=stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
