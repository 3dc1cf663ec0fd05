"""Command-line entry point: ``synkernel <verb> [names...] [options]``."""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import io as wsio
from .complexes import ComplexError
from .examples import EXAMPLE_NAMES, named_module, default_tower
from .hodge import PadicHodgeComplex, ext_phc, lambda_data, theta_embed, validate_phc
from .linalg import to_q
from .mfcomplex import MFComplex, as_complex, chain_map_to_ext_class, ext_groups, ext_range, gamma, validate_complex
from .modules import (
    AdmissibilityError,
    FilteredPhiNModule,
    admissibility,
    hodge_number,
    newton_number,
    validate,
)
from .selftest import selftest
from .syntomic import MFDoubleComplex, SyntomicError, les_check, leray, simplicial_total, smooth_split, syn_cohomology
from .witnesses import (
    WitnessError,
    hat_witness,
    hat_witness_phc,
    random_tilde_cocycle,
    tilde_witness,
    tilde_witness_phc,
)

VERBS = ["validate", "invariants", "ext", "syn", "les", "leray", "split", "simplicial", "witness", "examples",
         "selftest"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _resolve(ws, name: str, seed: int):
    if ws is not None:
        try:
            obj = ws.lookup(name)
        except KeyError:
            pass
        else:
            return obj.chain if isinstance(obj, wsio.NamedChainMap) else obj
    tower = ws.tower if ws is not None else None
    try:
        return named_module(name, tower, seed)
    except KeyError:
        raise UsageError(f"unknown name {name!r}") from None


def _as_phc(obj) -> PadicHodgeComplex:
    if isinstance(obj, PadicHodgeComplex):
        return obj
    if isinstance(obj, (FilteredPhiNModule, MFComplex)):
        return theta_embed(obj)
    if isinstance(obj, MFDoubleComplex):
        return theta_embed(simplicial_total(obj))
    raise UsageError(f"cannot use a {type(obj).__name__} here")


def _as_mf(obj) -> MFComplex:
    if isinstance(obj, (FilteredPhiNModule, MFComplex)):
        return as_complex(obj)
    if isinstance(obj, MFDoubleComplex):
        return simplicial_total(obj)
    raise UsageError(f"expected a module or complex, got {type(obj).__name__}")


def _need(names, k: int, verb: str):
    if len(names) != k:
        raise UsageError(f"{verb} takes {k} name(s), got {len(names)}")


def _degrees(default, degree):
    return [degree] if degree is not None else list(default)


# verbs: each returns (report, verdict)


def do_validate(args, ws):
    names = args.names or (ws.names() if ws is not None else [])
    if not names:
        raise UsageError("validate needs names or --file")
    out, ok = {}, True
    for name in names:
        obj = _resolve(ws, name, args.seed)
        if isinstance(obj, FilteredPhiNModule):
            rep = validate(obj).as_dict()
        elif isinstance(obj, MFComplex):
            rep = validate_complex(obj).as_dict()
        elif isinstance(obj, PadicHodgeComplex):
            rep = validate_phc(obj).as_dict()
        elif isinstance(obj, MFDoubleComplex):
            try:
                simplicial_total(obj)
                rep = {"ok": True, "failure": None}
            except ComplexError as exc:
                rep = {"ok": False, "failure": "double-complex", "detail": str(exc)}
        else:
            good = obj.is_valid()
            rep = {"ok": good, "failure": None if good else "chain-map"}
            if good:
                vec, cocycle = chain_map_to_ext_class(obj)
                rep["ext_class"] = {"cochain": [str(v) for v in vec], "cocycle": cocycle}
                rep["ok"] = cocycle
        out[name] = rep
        ok = ok and rep["ok"]
    return {"validate": out}, ok


def _module_invariants(m: FilteredPhiNModule, args) -> tuple[dict, bool]:
    rep = {"dim": m.dim, "t_N": str(newton_number(m)), "t_H": str(hodge_number(m))}
    try:
        verdict = admissibility(m, args.mode, trials=args.trials, seed=args.seed)
        rep["admissibility"] = verdict.as_dict()
        return rep, verdict.admissible
    except AdmissibilityError as exc:
        rep["admissibility"] = {"error": str(exc)}
        return rep, False


def do_invariants(args, ws):
    if not args.names:
        raise UsageError("invariants needs at least one name")
    out, ok = {}, True
    for name in args.names:
        obj = _resolve(ws, name, args.seed)
        if isinstance(obj, FilteredPhiNModule):
            rep, good = _module_invariants(obj, args)
        else:
            c = _as_mf(obj)
            rep, good = {}, True
            for n in c.degrees():
                r, g = _module_invariants(c.module(n), args)
                rep[str(n)] = r
                good = good and g
        out[name] = rep
        ok = ok and good
    return {"invariants": out}, ok


def do_ext(args, ws):
    _need(args.names, 2, "ext")
    a, b = (_resolve(ws, n, args.seed) for n in args.names)
    if isinstance(a, PadicHodgeComplex) or isinstance(b, PadicHodgeComplex):
        la, lb = _as_phc(a), _as_phc(b)
        degs = _degrees(range(lb.degrees().start - la.degrees().stop + 1, lb.degrees().stop - la.degrees().start + 2),
                        args.degree)
        return {"ext": {"degrees": degs, "H": ext_phc(la, lb, degs), "via": "Lambda"}}, True
    la, lb = _as_mf(a), _as_mf(b)
    res = ext_groups(la, lb, _degrees(ext_range(la, lb), args.degree))
    rep = res.as_dict()
    rep["via"] = "Gamma"
    return rep, True


def do_syn(args, ws):
    _need(args.names, 1, "syn")
    m = _as_phc(_resolve(ws, args.names[0], args.seed))
    degs = None if args.degree is None else [args.degree]
    return syn_cohomology(m, args.twist, degs).as_dict(), True


def do_les(args, ws):
    _need(args.names, 1, "les")
    m = _as_phc(_resolve(ws, args.names[0], args.seed))
    rep = les_check(m, args.twist, None if args.degree is None else [args.degree])
    return rep.as_dict(), rep.ok


def do_leray(args, ws):
    _need(args.names, 1, "leray")
    rep = leray(_as_phc(_resolve(ws, args.names[0], args.seed)), args.twist)
    return rep.as_dict(), rep.ok


def do_split(args, ws):
    _need(args.names, 1, "split")
    m = _as_phc(_resolve(ws, args.names[0], args.seed))
    try:
        rep = smooth_split(m, args.twist, None if args.degree is None else [args.degree])
    except SyntomicError as exc:
        return {"split": {"error": str(exc)}}, False
    return rep.as_dict(), rep.ok


def do_simplicial(args, ws):
    _need(args.names, 1, "simplicial")
    obj = _resolve(ws, args.names[0], args.seed)
    if not isinstance(obj, MFDoubleComplex):
        raise UsageError("simplicial needs a double complex from --file")
    try:
        tot = simplicial_total(obj)
    except ComplexError as exc:
        return {"simplicial": {"error": str(exc)}}, False
    vc = tot.vector_complex()
    syn = syn_cohomology(theta_embed(tot), args.twist)
    return {"lo": tot.lo, "dims": [m.dim for m in tot.modules], "cohomology": vc.betti(),
            "validate": validate_complex(tot).as_dict(), "syn": syn.as_dict(),
            "total": wsio.emit_complex(tot)}, validate_complex(tot).ok


def do_witness(args, ws):
    _need(args.names, 2, "witness")
    a, b = (_resolve(ws, n, args.seed) for n in args.names)
    rng = random.Random(args.seed)
    try:
        if isinstance(a, PadicHodgeComplex) or isinstance(b, PadicHodgeComplex):
            la, lb = _as_phc(a), _as_phc(b)
            data = lambda_data(la, lb)
            z = random_tilde_cocycle(data, rng)
            w1 = tilde_witness_phc(la, lb, z)
            x = [to_q(rng.randint(-2, 2)) for _ in range(data.hom_rig.vc.dim(0))]
            w2 = hat_witness_phc(la, lb, x_vec=x)
        else:
            la, lb = _as_mf(a), _as_mf(b)
            data = gamma(la, lb)
            z = random_tilde_cocycle(data, rng)
            w1 = tilde_witness(la, lb, z)
            x = [to_q(rng.randint(-2, 2)) for _ in range(data.hom.vc.dim(0))]
            w2 = hat_witness(la, lb, x_vec=x)
    except (WitnessError, ComplexError) as exc:
        return {"witness": {"error": str(exc)}}, False
    return {"tilde": w1.as_dict(), "hat": w2.as_dict()}, w1.ok and w2.ok


def do_examples(args, ws):
    if not args.names:
        return {"examples": EXAMPLE_NAMES}, True
    tower = ws.tower if ws is not None else default_tower()
    out = wsio.WorkspaceDocument(tower)
    for name in args.names:
        try:
            obj = named_module(name, tower, args.seed)
        except KeyError:
            raise UsageError(f"unknown example {name!r}") from None
        if isinstance(obj, FilteredPhiNModule):
            out.modules[name] = obj
        else:
            out.complexes[name] = obj
    return wsio.emit_obj(out), True


def do_selftest(args, ws):
    rep = selftest(args.seed, args.trials)
    return rep, rep["ok"]


DISPATCH = {
    "validate": do_validate, "invariants": do_invariants, "ext": do_ext, "syn": do_syn, "les": do_les,
    "leray": do_leray, "split": do_split, "simplicial": do_simplicial, "witness": do_witness,
    "examples": do_examples, "selftest": do_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="synkernel", description="Exact Ext and syntomic cohomology computations.")
    ap.add_argument("verb", choices=VERBS)
    ap.add_argument("names", nargs="*")
    ap.add_argument("--twist", type=int, default=0)
    ap.add_argument("--degree", type=int, default=None)
    ap.add_argument("--mode", choices=["eigen", "oracle", "random"], default="eigen")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=25)
    ap.add_argument("--file", default=None, help="JSON workspace document")
    return ap


def dispatch(argv=None) -> tuple[dict, int]:
    args = build_parser().parse_args(argv)
    ws = None
    try:
        if args.file:
            with open(args.file, "rb") as fh:
                ws = wsio.parse(fh.read())
        report, ok = DISPATCH[args.verb](args, ws)
    except wsio.DocumentError as exc:
        return {"error": exc.as_dict()}, EXIT_USAGE
    except (UsageError, OSError) as exc:
        return {"error": str(exc)}, EXIT_USAGE
    report = dict(report)
    report["verdict"] = "pass" if ok else "fail"
    return report, EXIT_OK if ok else EXIT_FAIL


def main(argv=None) -> int:
    report, code = dispatch(argv)
    stream = sys.stdout if code != EXIT_USAGE else sys.stderr
    json.dump(report, stream, indent=2, sort_keys=True, default=str)
    stream.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
