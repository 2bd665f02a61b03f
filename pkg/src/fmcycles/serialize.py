"""JSON encodings of curves, line bundles, descriptors and moduli points.

Rationals are {"num": p, "den": q} objects in files and "p/q" strings on
the command line.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .curves import ChainCurve, CycleCurve
from .errors import MalformedInput
from .moduli import ModuliPointE1, NodePoint, Smooth
from .sheaves import NLF, VB, SheafDescriptor, nlf, vb


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise MalformedInput(f"not a rational number: {text!r}") from None


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise MalformedInput(f"not a comma-separated list of integers: {text!r}") from None


def rational_to_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def rational_from_json(obj: Any) -> Fraction:
    if isinstance(obj, int) and not isinstance(obj, bool):
        return Fraction(obj)
    if isinstance(obj, str):
        return parse_rational(obj)
    if not isinstance(obj, dict) or set(obj) != {"num", "den"}:
        raise MalformedInput(f"expected a rational {{num, den}}, got {obj!r}")
    num, den = obj["num"], obj["den"]
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (num, den)) or den == 0:
        raise MalformedInput(f"bad rational {obj!r}")
    return Fraction(num, den)


def _int(obj: dict, key: str) -> int:
    if key not in obj:
        raise MalformedInput(f"missing field {key!r}")
    v = obj[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise MalformedInput(f"field {key!r} must be an integer, got {v!r}")
    return v


def _int_list(obj: dict, key: str) -> tuple[int, ...]:
    if key not in obj:
        raise MalformedInput(f"missing field {key!r}")
    v = obj[key]
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise MalformedInput(f"field {key!r} must be a list of integers, got {v!r}")
    return tuple(v)


def curve_to_json(curve) -> dict:
    if isinstance(curve, CycleCurve):
        return {"type": "cycle", "components": curve.n_components, "polarization": list(curve.polarization)}
    return {"type": "chain", "components": curve.length}


def curve_from_json(obj: Any):
    if not isinstance(obj, dict):
        raise MalformedInput(f"curve must be an object, got {obj!r}")
    kind = obj.get("type", "cycle")
    n = _int(obj, "components")
    if kind == "cycle":
        pol = _int_list(obj, "polarization") if "polarization" in obj else ()
        return CycleCurve(n, pol)
    if kind == "chain":
        return ChainCurve(n)
    raise MalformedInput(f"unknown curve type {kind!r}")


def summand_to_json(x) -> dict:
    if isinstance(x, VB):
        return {
            "kind": "vb",
            "cover": x.cover,
            "m": x.m,
            "multidegree": list(x.bundle.multidegree),
            "gluing": rational_to_json(x.bundle.gluing),
        }
    return {
        "kind": "nlf",
        "length": x.map.length,
        "start": x.map.start,
        "multidegree": list(x.bundle.multidegree),
    }


def summand_from_json(obj: Any, host: CycleCurve):
    if not isinstance(obj, dict):
        raise MalformedInput(f"summand must be an object, got {obj!r}")
    kind = obj.get("kind")
    md = _int_list(obj, "multidegree")
    if kind == "vb":
        gluing = rational_from_json(obj.get("gluing", 1))
        cover = _int(obj, "cover") if "cover" in obj else 1
        m = _int(obj, "m") if "m" in obj else 1
        return vb(host, md, gluing, cover=cover, m=m)
    if kind == "nlf":
        start = _int(obj, "start") if "start" in obj else 0
        if "length" in obj and _int(obj, "length") != len(md):
            raise MalformedInput(f"chain length {obj['length']} does not match multidegree {list(md)}")
        return nlf(host, md, start)
    raise MalformedInput(f"unknown summand kind {kind!r}")


def descriptor_to_json(d: SheafDescriptor) -> dict:
    return {"curve": curve_to_json(d.host), "summands": [summand_to_json(x) for x in d.summands]}


def descriptor_from_json(obj: Any) -> SheafDescriptor:
    if not isinstance(obj, dict) or "curve" not in obj or "summands" not in obj:
        raise MalformedInput("a descriptor needs 'curve' and 'summands'")
    host = curve_from_json(obj["curve"])
    if not isinstance(host, CycleCurve):
        raise MalformedInput("descriptors live on a cycle")
    if not isinstance(obj["summands"], list):
        raise MalformedInput("'summands' must be a list")
    return SheafDescriptor(host, tuple(summand_from_json(s, host) for s in obj["summands"]))


def moduli_point_to_json(p: ModuliPointE1) -> dict:
    points: list[dict] = [
        {"type": "smooth", "lambda": rational_to_json(q.lam)} for q in p.points if isinstance(q, Smooth)
    ]
    if p.node_multiplicity:
        points.append({"type": "node", "mult": p.node_multiplicity})
    return {"points": points}


def moduli_point_from_json(obj: Any) -> ModuliPointE1:
    if not isinstance(obj, dict) or not isinstance(obj.get("points"), list):
        raise MalformedInput("a moduli point needs a 'points' list")
    pts: list = []
    for entry in obj["points"]:
        if not isinstance(entry, dict):
            raise MalformedInput(f"bad point entry {entry!r}")
        mult = _int(entry, "mult") if "mult" in entry else 1
        if mult < 0:
            raise MalformedInput(f"negative multiplicity in {entry!r}")
        if entry.get("type") == "smooth":
            if "lambda" not in entry:
                raise MalformedInput("smooth point needs 'lambda'")
            pts += [Smooth(rational_from_json(entry["lambda"]))] * mult
        elif entry.get("type") == "node":
            pts += [NodePoint()] * mult
        else:
            raise MalformedInput(f"unknown point type {entry.get('type')!r}")
    return ModuliPointE1(tuple(pts))


def load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path} is not valid JSON: {exc}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
