"""Problem-file parsing and validation.

A problem file is JSON with a version tag, an ambient norm spec, a cone spec,
optional generating element, and exactly one program block (gauge, scalarize,
penalty, duality, or lattice). Validation happens before any computation;
unknown keys are rejected with the offending location.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .cones import InvalidCone, PolyhedralCone, UnsupportedRepresentation

BLOCKS = ("gauge", "scalarize", "penalty", "duality", "lattice")


class ProblemFormatError(ValueError):
    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


@dataclass
class NormSpec:
    p: float = 2
    weights: np.ndarray | None = None


@dataclass
class ProblemFile:
    version: int
    norm: NormSpec
    cone: PolyhedralCone | None
    generating_element: np.ndarray | None
    block_name: str
    block: dict = field(default_factory=dict)


def _expect_keys(obj: dict, allowed: set, location: str):
    for key in obj:
        if key not in allowed:
            raise ProblemFormatError(f"unknown key {key!r}", location)


def _matrix(value, location: str) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ProblemFormatError(f"not a numeric array: {exc}", location)
    if not np.all(np.isfinite(arr)):
        raise ProblemFormatError("entries must be finite", location)
    return arr


def _parse_norm(obj, location: str) -> NormSpec:
    if obj is None:
        return NormSpec()
    if not isinstance(obj, dict):
        raise ProblemFormatError("norm spec must be an object", location)
    _expect_keys(obj, {"p", "weights"}, location)
    p = obj.get("p", 2)
    if p == "inf":
        p = math.inf
    if p not in (1, 2, math.inf):
        raise ProblemFormatError("p must be 1, 2 or \"inf\"", f"{location}.p")
    weights = None
    if "weights" in obj:
        weights = _matrix(obj["weights"], f"{location}.weights")
        if weights.ndim != 1 or np.any(weights <= 0):
            raise ProblemFormatError("weights must be positive", f"{location}.weights")
    return NormSpec(p=p, weights=weights)


def parse_cone(obj, location: str = "$.cone") -> PolyhedralCone:
    if not isinstance(obj, dict):
        raise ProblemFormatError("cone spec must be an object", location)
    kind = obj.get("kind")
    if kind == "coordinate":
        _expect_keys(obj, {"kind", "dim"}, location)
        if "dim" not in obj:
            raise ProblemFormatError("coordinate cone needs \"dim\"", location)
        return PolyhedralCone(int(obj["dim"]), kind="coordinate")
    if kind == "weighted-coordinate":
        _expect_keys(obj, {"kind", "weights"}, location)
        w = _matrix(obj.get("weights"), f"{location}.weights")
        return PolyhedralCone(w.shape[0], kind="weighted-coordinate", weights=w)
    if kind == "general":
        _expect_keys(obj, {"kind", "dim", "halfspaces", "generators"}, location)
        H = _matrix(obj["halfspaces"], f"{location}.halfspaces") \
            if "halfspaces" in obj else None
        G = _matrix(obj["generators"], f"{location}.generators") \
            if "generators" in obj else None
        if H is None and G is None:
            raise ProblemFormatError("general cone needs halfspaces or generators",
                                     location)
        dim = int(obj.get("dim", (H if H is not None else G).shape[-1]))
        try:
            return PolyhedralCone(dim, halfspaces=H, generators=G, kind="general")
        except (InvalidCone, UnsupportedRepresentation, ValueError) as exc:
            raise ProblemFormatError(str(exc), location)
    raise ProblemFormatError(
        "kind must be \"coordinate\", \"weighted-coordinate\" or \"general\"",
        f"{location}.kind")


_BLOCK_KEYS = {
    "gauge": {"u"},
    "scalarize": {"e"},
    "penalty": {"points", "feasible", "values", "rank", "e"},
    "duality": {"n", "Q", "q", "c", "box", "G", "g0", "H", "h0", "e"},
    "lattice": {"a_vertices", "b_vertices", "directions"},
}


def parse_problem(path: str) -> ProblemFile:
    """Read, validate and assemble a problem file; diagnostics carry the
    offending key and location."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ProblemFormatError(f"cannot read file: {exc}")
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"invalid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ProblemFormatError("top level must be an object")
    allowed = {"version", "norm", "cone", "generating_element", *BLOCKS}
    _expect_keys(raw, allowed, "$")
    version = raw.get("version", 1)
    if version != 1:
        raise ProblemFormatError(f"unsupported version {version!r}", "$.version")
    present = [b for b in BLOCKS if b in raw]
    if len(present) != 1:
        raise ProblemFormatError(
            f"exactly one program block required, found {present or 'none'}")
    name = present[0]
    block = raw[name]
    if not isinstance(block, dict):
        raise ProblemFormatError("block must be an object", f"$.{name}")
    _expect_keys(block, _BLOCK_KEYS[name], f"$.{name}")

    norm = _parse_norm(raw.get("norm"), "$.norm")
    cone = None
    if "cone" in raw:
        cone = parse_cone(raw["cone"])
    elif name in ("gauge", "scalarize", "penalty", "duality"):
        raise ProblemFormatError(f"block {name!r} requires a cone", "$.cone")
    gen = None
    if "generating_element" in raw:
        gen = _matrix(raw["generating_element"], "$.generating_element")
        if cone is not None and gen.shape != (cone.dim,):
            raise ProblemFormatError(
                f"generating element has dimension {gen.shape[0]}, cone has {cone.dim}",
                "$.generating_element")
    pf = ProblemFile(version=version, norm=norm, cone=cone,
                     generating_element=gen, block_name=name, block=block)
    _validate_block(pf)
    return pf


def _validate_block(pf: ProblemFile):
    name, block = pf.block_name, pf.block
    loc = f"$.{name}"
    if name == "gauge":
        u = pf.generating_element if "u" not in block else \
            _matrix(block["u"], f"{loc}.u")
        if u is None:
            raise ProblemFormatError("gauge needs u or a generating element", loc)
        if u.shape != (pf.cone.dim,):
            raise ProblemFormatError("u has wrong dimension", f"{loc}.u")
        block["u"] = u
    elif name == "scalarize":
        e = pf.generating_element if "e" not in block else \
            _matrix(block["e"], f"{loc}.e")
        if e is None:
            raise ProblemFormatError("scalarize needs e or a generating element", loc)
        if e.shape != (pf.cone.dim,):
            raise ProblemFormatError("e has wrong dimension", f"{loc}.e")
        block["e"] = e
    elif name == "penalty":
        for key in ("points", "values", "rank"):
            if key not in block:
                raise ProblemFormatError(f"missing key {key!r}", loc)
        pts = np.atleast_2d(_matrix(block["points"], f"{loc}.points"))
        vals = np.atleast_2d(_matrix(block["values"], f"{loc}.values"))
        if pts.shape[0] != vals.shape[0]:
            raise ProblemFormatError("points/values length mismatch", loc)
        if vals.shape[1] != pf.cone.dim:
            raise ProblemFormatError("values do not match the cone dimension",
                                     f"{loc}.values")
        if "feasible" not in block:
            raise ProblemFormatError("missing key 'feasible'", loc)
        feas = np.asarray(block["feasible"])
        if feas.dtype == bool:
            # JSON booleans form a mask; integers are indices into the points
            if feas.shape[0] != pts.shape[0]:
                raise ProblemFormatError("feasible mask length mismatch",
                                         f"{loc}.feasible")
            mask = feas
        else:
            mask = np.zeros(pts.shape[0], dtype=bool)
            try:
                mask[np.asarray(feas, dtype=int)] = True
            except (IndexError, ValueError, TypeError):
                raise ProblemFormatError("feasible must be a boolean mask or "
                                         "an index list", f"{loc}.feasible")
        e = block.get("e", pf.generating_element)
        if e is None:
            raise ProblemFormatError("penalty needs e or a generating element", loc)
        block.update(points=pts, values=vals, feasible=mask,
                     rank=float(block["rank"]), e=_matrix(e, f"{loc}.e"))
    elif name == "duality":
        for key in ("n", "q", "box"):
            if key not in block:
                raise ProblemFormatError(f"missing key {key!r}", loc)
        n = int(block["n"])
        box = block["box"]
        if not isinstance(box, dict):
            raise ProblemFormatError("box must be an object", f"{loc}.box")
        _expect_keys(box, {"lower", "upper"}, f"{loc}.box")
        lower = _matrix(box.get("lower"), f"{loc}.box.lower")
        upper = _matrix(box.get("upper"), f"{loc}.box.upper")
        if lower.shape != (n,) or upper.shape != (n,):
            raise ProblemFormatError("box bounds must have length n", f"{loc}.box")
        for key in ("Q", "G", "H"):
            if key in block:
                block[key] = _matrix(block[key], f"{loc}.{key}")
        for key in ("q", "g0", "h0"):
            if key in block:
                block[key] = _matrix(block[key], f"{loc}.{key}")
        if "G" in block and block["G"].shape[0] != pf.cone.dim:
            raise ProblemFormatError("G rows must match the cone dimension",
                                     f"{loc}.G")
        block["box"] = {"lower": lower, "upper": upper}
        block["e"] = _matrix(block["e"], f"{loc}.e") if "e" in block \
            else pf.generating_element
    elif name == "lattice":
        for key in ("a_vertices", "b_vertices"):
            if key not in block:
                raise ProblemFormatError(f"missing key {key!r}", loc)
            block[key] = np.atleast_2d(_matrix(block[key], f"{loc}.{key}"))
        if block["a_vertices"].shape[1] != block["b_vertices"].shape[1]:
            raise ProblemFormatError("vertex arrays have different dimensions", loc)
        if "directions" in block:
            D = np.atleast_2d(_matrix(block["directions"], f"{loc}.directions"))
            if D.shape[1] != block["a_vertices"].shape[1]:
                raise ProblemFormatError("directions have the wrong dimension",
                                         f"{loc}.directions")
            block["directions"] = D


def build_box_program(pf: ProblemFile):
    """Assemble the BoxProgram of a duality block."""
    from .duality import BoxProgram

    block = pf.block
    n = int(block["n"])
    return BoxProgram(
        n=n,
        Q=block.get("Q"),
        q=block["q"],
        c=float(block.get("c", 0.0)),
        x_lo=block["box"]["lower"],
        x_hi=block["box"]["upper"],
        G=block.get("G"),
        g0=block.get("g0"),
        cone_y=pf.cone if "G" in block else None,
        H=block.get("H"),
        h0=block.get("h0"),
    )
