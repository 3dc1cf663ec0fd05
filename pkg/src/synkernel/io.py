"""JSON workspace documents: parsing with JSON-pointer diagnostics and canonical emission.

Conventions: rationals are ``"a/b"`` strings (integers allowed), a K0 or K
element with more than one prime-field coordinate is a list of them, and
every matrix is given in the row convention ``f(e_i) = sum_j A[i][j] e'_j``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import ComplexError
from .fields import K, K0, CoefficientTower, FieldError
from .filtration import Filtration, FiltrationError
from .hodge import PadicHodgeComplex, theta_embed, validate_phc
from .homcomplex import LayerComplex
from .linalg import Matrix, q_str, to_q
from .mfcomplex import MFChainMap, MFComplex, validate_complex
from .modules import FilteredPhiNModule, ModuleError, validate
from .restriction import layer_entries, layer_matrix, linear_part, sigma_block
from .syntomic import MFDoubleComplex, simplicial_total


class DocumentError(ValueError):
    def __init__(self, pointer: str, message: str, axiom: str | None = None):
        self.pointer = pointer or "/"
        self.message = message
        self.axiom = axiom
        super().__init__(f"{self.pointer}: {message}")

    def as_dict(self) -> dict:
        out = {"pointer": self.pointer, "error": self.message}
        if self.axiom:
            out["axiom"] = self.axiom
        return out


def _ptr(base: str, *keys) -> str:
    out = base
    for k in keys:
        out += "/" + str(k).replace("~", "~0").replace("/", "~1")
    return out


@dataclass
class WorkspaceDocument:
    tower: CoefficientTower
    modules: dict = field(default_factory=dict)
    complexes: dict = field(default_factory=dict)
    phcs: dict = field(default_factory=dict)
    double_complexes: dict = field(default_factory=dict)
    chain_maps: dict = field(default_factory=dict)

    def lookup(self, name: str):
        for table in (self.phcs, self.complexes, self.modules, self.double_complexes, self.chain_maps):
            if name in table:
                return table[name]
        raise KeyError(name)

    def names(self) -> list:
        out = []
        for table in (self.modules, self.complexes, self.phcs, self.double_complexes, self.chain_maps):
            out.extend(table)
        return out


# scalars and matrices


def _scalar(v, ptr: str):
    if isinstance(v, bool) or isinstance(v, float):
        raise DocumentError(ptr, "rationals must be integers or \"a/b\" strings")
    if isinstance(v, int):
        return to_q(v)
    if isinstance(v, str):
        try:
            Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise DocumentError(ptr, f"not a rational: {v!r}") from None
        if "." in v or "e" in v.lower():
            raise DocumentError(ptr, "decimal notation is not allowed; use \"a/b\"")
        return to_q(v)
    raise DocumentError(ptr, f"expected a rational, got {type(v).__name__}")


def _element(t: CoefficientTower, layer: str, v, ptr: str) -> tuple:
    n = t.deg(layer)
    if isinstance(v, list):
        if len(v) != n:
            raise DocumentError(ptr, f"{layer} element needs {n} coordinates, got {len(v)}")
        return tuple(_scalar(x, _ptr(ptr, i)) for i, x in enumerate(v))
    return (_scalar(v, ptr),) + (to_q(0),) * (n - 1)


def _emit_element(coords) -> object:
    if len(coords) == 1:
        return q_str(coords[0])
    return [q_str(c) for c in coords]


def _rows(t: CoefficientTower, layer: str, rows, nsrc: int, ntgt: int, ptr: str) -> list:
    """Row-convention entries -> column-convention coordinate grid (target x source)."""
    if not isinstance(rows, list) or len(rows) != nsrc:
        raise DocumentError(ptr, f"expected {nsrc} rows")
    grid = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != ntgt:
            raise DocumentError(_ptr(ptr, i), f"expected {ntgt} entries")
        grid.append([_element(t, layer, v, _ptr(ptr, i, j)) for j, v in enumerate(row)])
    return [[grid[i][j] for i in range(nsrc)] for j in range(ntgt)]


def _linear(t: CoefficientTower, layer: str, rows, nsrc: int, ntgt: int, ptr: str) -> Matrix:
    if nsrc == 0 or ntgt == 0:
        if rows not in (None, []) and not (isinstance(rows, list) and all(r == [] for r in rows)):
            raise DocumentError(ptr, "matrix for a zero-dimensional space must be empty")
        return Matrix.zeros(ntgt * t.deg(layer), nsrc * t.deg(layer))
    return layer_matrix(t, layer, _rows(t, layer, rows, nsrc, ntgt, ptr))


def _emit_linear(t: CoefficientTower, layer: str, m: Matrix) -> list:
    ent = layer_entries(t, layer, m)
    ntgt, nsrc = len(ent), (len(ent[0]) if ent else m.ncols // t.deg(layer))
    return [[_emit_element(ent[j][i]) for j in range(ntgt)] for i in range(nsrc)]


def _filtration(t: CoefficientTower, dim: int, jumps, ptr: str) -> Filtration:
    if dim == 0:
        return Filtration(t, 0, 0, 0)
    if jumps is None:
        return Filtration.trivial(t, dim, 0)
    if not isinstance(jumps, list) or not jumps:
        raise DocumentError(ptr, "filtration must be a non-empty jump list")
    out = []
    for k, jp in enumerate(jumps):
        p = _ptr(ptr, k)
        if not isinstance(jp, dict) or "index" not in jp or "basis" not in jp:
            raise DocumentError(p, "jump needs 'index' and 'basis'")
        if not isinstance(jp["index"], int) or isinstance(jp["index"], bool):
            raise DocumentError(_ptr(p, "index"), "jump index must be an integer")
        vecs = []
        for i, v in enumerate(jp["basis"]):
            if not isinstance(v, list) or len(v) != dim:
                raise DocumentError(_ptr(p, "basis", i), f"basis vector needs {dim} entries")
            vecs.append([_element(t, K, x, _ptr(p, "basis", i, j)) for j, x in enumerate(v)])
        out.append((jp["index"], vecs))
    try:
        return Filtration.from_jumps(t, dim, out)
    except FiltrationError as exc:
        raise DocumentError(ptr, str(exc), "filtration-well-formed") from None


def _emit_filtration(f: Filtration) -> list:
    return [{"index": k, "basis": [[_emit_element(c) for c in v] for v in vecs]} for k, vecs in f.jump_vectors()]


# tower


def parse_tower(obj, ptr: str = "/tower") -> CoefficientTower:
    if not isinstance(obj, dict) or "p" not in obj:
        raise DocumentError(ptr, "tower needs at least 'p'")
    try:
        kw = {"p": obj["p"], "f": obj.get("f", 1), "e": obj.get("e", 1)}
        for key in ("p", "f", "e"):
            if not isinstance(kw[key], int) or isinstance(kw[key], bool):
                raise DocumentError(_ptr(ptr, key), "must be an integer")
        if obj.get("k0_modulus") is not None:
            kw["k0_modulus"] = tuple(_scalar(v, _ptr(ptr, "k0_modulus", i)) for i, v in enumerate(obj["k0_modulus"]))
        if obj.get("sigma_matrix") is not None:
            kw["sigma_matrix"] = Matrix([[_scalar(v, _ptr(ptr, "sigma_matrix", i, j)) for j, v in enumerate(r)]
                                         for i, r in enumerate(obj["sigma_matrix"])])
        if obj.get("eisenstein") is not None:
            kw["eisenstein"] = tuple(
                tuple(_scalar(v, _ptr(ptr, "eisenstein", i, j)) for j, v in enumerate(c if isinstance(c, list) else [c]))
                for i, c in enumerate(obj["eisenstein"]))
        return CoefficientTower(**kw)
    except FieldError as exc:
        raise DocumentError(ptr, str(exc)) from None


def emit_tower(t: CoefficientTower) -> dict:
    return t.describe()


# modules


def parse_module(t: CoefficientTower, obj, ptr: str, name: str = "") -> FilteredPhiNModule:
    if not isinstance(obj, dict) or "phi" not in obj:
        raise DocumentError(ptr, "module needs 'phi'")
    phi_rows = obj["phi"]
    if not isinstance(phi_rows, list):
        raise DocumentError(_ptr(ptr, "phi"), "phi must be a list of rows")
    d = len(phi_rows)
    if "dim" in obj and obj["dim"] != d:
        raise DocumentError(_ptr(ptr, "dim"), f"dim {obj['dim']} does not match phi ({d} rows)")
    phi = _linear(t, K0, phi_rows, d, d, _ptr(ptr, "phi")) @ sigma_block(t, d) if d else Matrix.zeros(0, 0)
    nmat = _linear(t, K0, obj["N"], d, d, _ptr(ptr, "N")) if obj.get("N") is not None else None
    filt = _filtration(t, d, obj.get("filtration"), _ptr(ptr, "filtration"))
    try:
        m = FilteredPhiNModule(t, d, phi, nmat, filt, name)
    except ModuleError as exc:
        raise DocumentError(ptr, str(exc)) from None
    rep = validate(m)
    if not rep.ok:
        raise DocumentError(ptr, f"module fails axiom {rep.failure}: {rep.detail}", rep.failure)
    return m


def emit_module(m: FilteredPhiNModule) -> dict:
    t = m.tower
    out = {"dim": m.dim, "phi": _emit_linear(t, K0, linear_part(t, m.phi)) if m.dim else []}
    out["N"] = _emit_linear(t, K0, m.nmat) if m.dim else []
    out["filtration"] = _emit_filtration(m.filt)
    return out


# complexes


def _term(ws: WorkspaceDocument, t, obj, ptr):
    if isinstance(obj, str):
        if obj not in ws.modules:
            raise DocumentError(ptr, f"unknown module {obj!r}")
        return ws.modules[obj]
    return parse_module(t, obj, ptr)


def parse_complex(ws: WorkspaceDocument, obj, ptr: str, name: str = "") -> MFComplex:
    t = ws.tower
    if not isinstance(obj, dict) or "terms" not in obj:
        raise DocumentError(ptr, "complex needs 'terms'")
    lo = obj.get("lo", 0)
    if not isinstance(lo, int) or isinstance(lo, bool):
        raise DocumentError(_ptr(ptr, "lo"), "lo must be an integer")
    terms = [_term(ws, t, x, _ptr(ptr, "terms", i)) for i, x in enumerate(obj["terms"])]
    if not terms:
        raise DocumentError(_ptr(ptr, "terms"), "a complex needs at least one term")
    diffs_in = obj.get("differentials", [None] * (len(terms) - 1))
    if len(diffs_in) != len(terms) - 1:
        raise DocumentError(_ptr(ptr, "differentials"), f"expected {len(terms) - 1} differentials")
    diffs = []
    for i, rows in enumerate(diffs_in):
        a, b = terms[i], terms[i + 1]
        if rows is None:
            diffs.append(Matrix.zeros(b.qdim, a.qdim))
        else:
            diffs.append(_linear(t, K0, rows, a.dim, b.dim, _ptr(ptr, "differentials", i)))
    c = MFComplex(t, lo, terms, diffs, name)
    rep = validate_complex(c)
    if not rep.ok:
        raise DocumentError(ptr, f"complex fails axiom {rep.failure}: {rep.detail}", rep.failure)
    return c


def emit_complex(c: MFComplex) -> dict:
    t = c.tower
    return {"lo": c.lo, "terms": [emit_module(m) for m in c.modules],
            "differentials": [_emit_linear(t, K0, d) if d.ncols and d.nrows else [] for d in c.diffs]}


# p-adic Hodge complexes


def _layer_block(t, layer, obj, ptr, lo, structure: str):
    if not isinstance(obj, dict) or "dims" not in obj:
        raise DocumentError(ptr, "specialization needs 'dims'")
    dims = obj["dims"]
    if not isinstance(dims, list) or any(not isinstance(x, int) or x < 0 for x in dims):
        raise DocumentError(_ptr(ptr, "dims"), "dims must be a list of nonnegative integers")
    dins = obj.get("differentials", [None] * max(len(dims) - 1, 0))
    if len(dins) != max(len(dims) - 1, 0):
        raise DocumentError(_ptr(ptr, "differentials"), f"expected {max(len(dims) - 1, 0)} differentials")
    deg = t.deg(layer)
    diffs = tuple(Matrix.zeros(dims[i + 1] * deg, dims[i] * deg) if rows is None else
                  _linear(t, layer, rows, dims[i], dims[i + 1], _ptr(ptr, "differentials", i))
                  for i, rows in enumerate(dins))
    phi = nmat = filts = None
    if structure == "rig":
        if len(obj.get("phi", [])) != len(dims):
            raise DocumentError(_ptr(ptr, "phi"), "one Frobenius matrix per degree")
        phi = tuple(_linear(t, K0, r, d, d, _ptr(ptr, "phi", i)) @ sigma_block(t, d) if d else Matrix.zeros(0, 0)
                    for i, (r, d) in enumerate(zip(obj["phi"], dims)))
        ns = obj.get("N") or [None] * len(dims)
        nmat = tuple(Matrix.zeros(d * deg, d * deg) if r is None else _linear(t, K0, r, d, d, _ptr(ptr, "N", i))
                     for i, (r, d) in enumerate(zip(ns, dims)))
    if structure == "dR":
        fs = obj.get("filtrations") or [None] * len(dims)
        if len(fs) != len(dims):
            raise DocumentError(_ptr(ptr, "filtrations"), "one filtration per degree")
        filts = tuple(_filtration(t, d, f, _ptr(ptr, "filtrations", i)) for i, (f, d) in enumerate(zip(fs, dims)))
    return LayerComplex(t, layer, lo, tuple(dims), diffs, phi, nmat, filts)


def parse_phc(ws: WorkspaceDocument, obj, ptr: str, name: str = "") -> PadicHodgeComplex:
    t = ws.tower
    if isinstance(obj, dict) and "theta" in obj:
        src = obj["theta"]
        if isinstance(src, str):
            if src in ws.complexes:
                m = theta_embed(ws.complexes[src])
            elif src in ws.modules:
                m = theta_embed(ws.modules[src])
            else:
                raise DocumentError(_ptr(ptr, "theta"), f"unknown complex or module {src!r}")
        else:
            m = theta_embed(parse_complex(ws, src, _ptr(ptr, "theta")))
        m.name = name
        return m
    if not isinstance(obj, dict) or not all(k in obj for k in ("rig", "K", "dR")):
        raise DocumentError(ptr, "pHC needs 'theta' or all of 'rig', 'K', 'dR'")
    lo = obj.get("lo", 0)
    rig = _layer_block(t, K0, obj["rig"], _ptr(ptr, "rig"), lo, "rig")
    ks = _layer_block(t, K, obj["K"], _ptr(ptr, "K"), lo, "K")
    dr = _layer_block(t, K, obj["dR"], _ptr(ptr, "dR"), lo, "dR")
    if not (len(rig.dims) == len(ks.dims) == len(dr.dims)):
        raise DocumentError(ptr, "specializations must share a degree range")
    alpha, beta = {}, {}
    for key, src, table in (("alpha", rig, alpha), ("beta", dr, beta)):
        mats = obj.get(key, [])
        if len(mats) != len(ks.dims):
            raise DocumentError(_ptr(ptr, key), "one comparison matrix per degree")
        for i, rows in enumerate(mats):
            table[lo + i] = _linear(t, K, rows, src.dims[i], ks.dims[i], _ptr(ptr, key, i))
    try:
        m = PadicHodgeComplex(t, rig, ks, dr, alpha, beta, name)
    except ComplexError as exc:
        raise DocumentError(ptr, str(exc)) from None
    rep = validate_phc(m)
    if not rep.ok:
        raise DocumentError(ptr, f"pHC fails axiom {rep.failure}: {rep.detail}", rep.failure)
    return m


def emit_phc(m: PadicHodgeComplex) -> dict:
    t = m.tower
    degs = m.degrees()

    def lin(layer, mat):
        return _emit_linear(t, layer, mat) if mat.nrows and mat.ncols else []

    rig = {"dims": [m.rig.dim(n) for n in degs], "differentials": [lin(K0, m.rig.d(n)) for n in degs[:-1]],
           "phi": [lin(K0, linear_part(t, m.rig.phi_at(n))) if m.rig.dim(n) else [] for n in degs],
           "N": [lin(K0, m.rig.n_at(n)) if m.rig.dim(n) else [] for n in degs]}
    ks = {"dims": [m.k_spec.dim(n) for n in degs], "differentials": [lin(K, m.k_spec.d(n)) for n in degs[:-1]]}
    dr = {"dims": [m.dr.dim(n) for n in degs], "differentials": [lin(K, m.dr.d(n)) for n in degs[:-1]],
          "filtrations": [_emit_filtration(m.dr.filt_at(n)) if m.dr.dim(n) else None for n in degs]}
    return {"lo": degs.start, "rig": rig, "K": ks, "dR": dr,
            "alpha": [lin(K, m.alpha_at(n)) for n in degs], "beta": [lin(K, m.beta_at(n)) for n in degs]}


# double complexes and chain maps


def _cell(obj, ptr):
    at = obj.get("at") if isinstance(obj, dict) else None
    if not isinstance(at, list) or len(at) != 2 or not all(isinstance(x, int) for x in at):
        raise DocumentError(_ptr(ptr, "at"), "'at' must be [col, row]")
    return tuple(at)


def parse_double_complex(ws: WorkspaceDocument, obj, ptr: str) -> MFDoubleComplex:
    t = ws.tower
    if not isinstance(obj, dict) or "cells" not in obj:
        raise DocumentError(ptr, "double complex needs 'cells'")
    mods = {}
    for i, c in enumerate(obj["cells"]):
        p = _ptr(ptr, "cells", i)
        key = _cell(c, p)
        if key in mods:
            raise DocumentError(p, f"cell {list(key)} listed twice")
        mods[key] = _term(ws, t, c.get("module"), _ptr(p, "module"))
    maps = {"horizontal": {}, "vertical": {}}
    for kind, step in (("horizontal", (1, 0)), ("vertical", (0, 1))):
        for i, e in enumerate(obj.get(kind, [])):
            p = _ptr(ptr, kind, i)
            a, b = _cell(e, p)
            src, tgt = mods.get((a, b)), mods.get((a + step[0], b + step[1]))
            if src is None or tgt is None:
                raise DocumentError(p, "map between missing cells")
            maps[kind][(a, b)] = _linear(t, K0, e.get("matrix"), src.dim, tgt.dim, _ptr(p, "matrix"))
    dc = MFDoubleComplex(mods, maps["horizontal"], maps["vertical"])
    try:
        simplicial_total(dc, t)
    except ComplexError as exc:
        raise DocumentError(ptr, str(exc), "double-complex") from None
    return dc


def emit_double_complex(dc: MFDoubleComplex) -> dict:
    def maps(table, step):
        out = []
        for (a, b), m in sorted(table.items()):
            src = dc.modules[(a, b)]
            tgt = dc.modules[(a + step[0], b + step[1])]
            out.append({"at": [a, b], "matrix": _emit_linear(src.tower, K0, m) if src.dim and tgt.dim else []})
        return out

    return {"cells": [{"at": [a, b], "module": emit_module(m)} for (a, b), m in sorted(dc.modules.items())],
            "horizontal": maps(dc.horizontal, (1, 0)), "vertical": maps(dc.vertical, (0, 1))}


@dataclass
class NamedChainMap:
    source: str
    target: str
    chain: MFChainMap


def parse_chain_map(ws: WorkspaceDocument, obj, ptr: str) -> NamedChainMap:
    t = ws.tower
    if not isinstance(obj, dict) or "source" not in obj or "target" not in obj:
        raise DocumentError(ptr, "chain map needs 'source' and 'target'")
    for key in ("source", "target"):
        if obj[key] not in ws.complexes:
            raise DocumentError(_ptr(ptr, key), f"unknown complex {obj[key]!r}")
    src, tgt = ws.complexes[obj["source"]], ws.complexes[obj["target"]]
    maps = {}
    for i, comp in enumerate(obj.get("components", [])):
        p = _ptr(ptr, "components", i)
        n = comp.get("degree") if isinstance(comp, dict) else None
        if not isinstance(n, int):
            raise DocumentError(_ptr(p, "degree"), "degree must be an integer")
        a, b = src.module(n), tgt.module(n)
        if a is None or b is None:
            raise DocumentError(p, f"degree {n} outside source or target")
        maps[n] = _linear(t, K0, comp.get("matrix"), a.dim, b.dim, _ptr(p, "matrix"))
    f = MFChainMap(src, tgt, maps)
    if not f.is_valid():
        raise DocumentError(ptr, "not a chain map of filtered (phi, N)-modules", "chain-map")
    return NamedChainMap(obj["source"], obj["target"], f)


def emit_chain_map(nm: NamedChainMap) -> dict:
    t = nm.chain.src.tower
    comps = []
    for n in sorted(nm.chain.maps):
        m = nm.chain.maps[n]
        comps.append({"degree": n, "matrix": _emit_linear(t, K0, m) if m.nrows and m.ncols else []})
    return {"source": nm.source, "target": nm.target, "components": comps}


# documents


_SECTIONS = ("modules", "complexes", "phcs", "double_complexes", "chain_maps")


def parse_obj(doc) -> WorkspaceDocument:
    if not isinstance(doc, dict):
        raise DocumentError("/", "document must be a JSON object")
    # "verdict" is tolerated so that CLI output can be fed back in
    unknown = [k for k in doc if k not in ("tower", "verdict") + _SECTIONS]
    if unknown:
        raise DocumentError(_ptr("", unknown[0]), "unknown top-level field")
    ws = WorkspaceDocument(parse_tower(doc.get("tower", {"p": 5})))
    for sec in _SECTIONS:
        if not isinstance(doc.get(sec, {}), dict):
            raise DocumentError(_ptr("", sec), "section must be an object of named entries")
    for name, obj in doc.get("modules", {}).items():
        ws.modules[name] = parse_module(ws.tower, obj, _ptr("", "modules", name), name)
    for name, obj in doc.get("complexes", {}).items():
        ws.complexes[name] = parse_complex(ws, obj, _ptr("", "complexes", name), name)
    for name, obj in doc.get("phcs", {}).items():
        ws.phcs[name] = parse_phc(ws, obj, _ptr("", "phcs", name), name)
    for name, obj in doc.get("double_complexes", {}).items():
        ws.double_complexes[name] = parse_double_complex(ws, obj, _ptr("", "double_complexes", name))
    for name, obj in doc.get("chain_maps", {}).items():
        ws.chain_maps[name] = parse_chain_map(ws, obj, _ptr("", "chain_maps", name))
    return ws


def parse(data: bytes | str) -> WorkspaceDocument:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentError("/", f"not UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DocumentError("/", f"JSON syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_obj(doc)


def emit_obj(ws: WorkspaceDocument) -> dict:
    out = {"tower": emit_tower(ws.tower)}
    if ws.modules:
        out["modules"] = {k: emit_module(v) for k, v in ws.modules.items()}
    if ws.complexes:
        out["complexes"] = {k: emit_complex(v) for k, v in ws.complexes.items()}
    if ws.phcs:
        out["phcs"] = {k: emit_phc(v) for k, v in ws.phcs.items()}
    if ws.double_complexes:
        out["double_complexes"] = {k: emit_double_complex(v) for k, v in ws.double_complexes.items()}
    if ws.chain_maps:
        out["chain_maps"] = {k: emit_chain_map(v) for k, v in ws.chain_maps.items()}
    return out


def emit(ws: WorkspaceDocument) -> str:
    return json.dumps(emit_obj(ws), indent=2, sort_keys=True) + "\n"


def module_document(name: str, obj) -> WorkspaceDocument:
    """Single-object workspace around a module or complex."""
    t = obj.tower
    ws = WorkspaceDocument(t)
    if isinstance(obj, FilteredPhiNModule):
        ws.modules[name] = obj
    elif isinstance(obj, MFComplex):
        ws.complexes[name] = obj
    elif isinstance(obj, PadicHodgeComplex):
        ws.phcs[name] = obj
    else:
        raise TypeError(f"cannot wrap {type(obj).__name__}")
    return ws


__all__ = ["DocumentError", "WorkspaceDocument", "parse", "parse_obj", "emit", "emit_obj", "module_document",
           "NamedChainMap"]


def builtin_path(name: str):
    """Path of a document shipped under ``synkernel/data`` (e.g. ``unit.json``)."""
    from importlib.resources import files
    return files("synkernel") / "data" / name


def load_builtin(name: str) -> WorkspaceDocument:
    return parse(builtin_path(name).read_bytes())
