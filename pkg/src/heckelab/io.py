"""JSON configuration loading for the CLI and the verification suites."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .bernstein import AffineHecke, LabelFunctions, check_labels
from .errors import BadInput, ParseError
from .maps import (ComparisonConfig, HomSpec, StandardBernstein, a1_spec,
                   half_integer, negated_basis)
from .quotient import build_quotient, load_marked, morris_datum
from .rootdatum import BasedRootDatum, cartan_datum
from .scalar import ONE, parse_scalar


class ConfigError(BadInput):
    """Missing or unreadable configuration file."""


def read_config(path: str | Path) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {p}: {exc.strerror}", witness=str(p)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}: invalid JSON ({exc.msg} at line {exc.lineno})", witness=exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError(f"{p}: top level must be an object")
    return data


_CARTAN = re.compile(r"^\s*([A-Ga-g])\s*(\d+)\s*$")


def load_datum(spec: Any) -> BasedRootDatum:
    """A datum from "C2", {"cartan": "C2"} or the explicit pairing/roots/coroots/basis form."""
    if isinstance(spec, dict) and "cartan" in spec:
        spec = spec["cartan"]
    if isinstance(spec, str):
        m = _CARTAN.match(spec)
        if not m:
            raise BadInput(f"unknown Cartan type {spec!r}", witness=spec)
        return cartan_datum(m.group(1).upper(), int(m.group(2)))
    if isinstance(spec, dict):
        return BasedRootDatum.from_json(spec)
    raise BadInput("datum must be a Cartan type or an explicit datum")


def load_algebra(cfg: dict) -> AffineHecke:
    if "datum" not in cfg:
        raise BadInput("algebra configuration needs a 'datum'")
    datum = load_datum(cfg["datum"])
    labels = LabelFunctions.from_json(cfg.get("labels", {}), len(datum.basis))
    check_labels(datum, labels)
    return AffineHecke(datum, labels)


def load_iwahori(cfg: dict):
    """The standard presentation matching an algebra configuration."""
    return StandardBernstein(load_algebra(cfg)).hecke


def _parse_meta_scalar(v):
    return ONE if v is None else parse_scalar(str(v))


def _image_key(name: str) -> tuple:
    m = re.fullmatch(r"\s*T\[s(\d+)\]\s*", name)
    if m:
        return ("T", int(m.group(1)) - 1)
    m = re.fullmatch(r"\s*th\[e(\d+)\]\s*", name)
    if m:
        return ("th", int(m.group(1)) - 1)
    raise ParseError(f"image key {name!r} must look like T[s1] or th[e1]", witness=name)


def load_homspec(cfg: dict) -> HomSpec:
    """A homomorphism between two algebras, given by explicit images or by rank-one metadata."""
    src = load_algebra(cfg["source"])
    tgt = load_algebra(cfg["target"]) if "target" in cfg else src
    meta = dict(cfg.get("meta", {}))
    if "images" in cfg:
        images = {_image_key(k): tgt.parse(str(v)) for k, v in cfg["images"].items()}
        spec = HomSpec(src, tgt, images)
        if meta:
            spec.meta = {"k": half_integer(str(meta["k"])), "n": half_integer(str(meta["n"])),
                         "c": _parse_meta_scalar(meta.get("c")),
                         "cprime": _parse_meta_scalar(meta.get("cprime"))}
        return spec
    bprime = meta.get("bprime")
    if bprime is not None and bprime not in ("even", "odd"):
        bprime = tgt.parse(str(bprime))
    cprime = meta.get("cprime")
    return a1_spec(src, tgt, str(meta["k"]), str(meta["n"]), _parse_meta_scalar(meta.get("c")),
                   None if cprime is None else parse_scalar(str(cprime)), bprime)


def _side(cfg: dict, other: BasedRootDatum | None) -> AffineHecke:
    if cfg.get("negate"):
        if other is None:
            raise BadInput("'negate' needs the other side of the comparison to be explicit")
        datum = negated_basis(other)
        labels = LabelFunctions.from_json(cfg.get("labels", {}), len(datum.basis))
        check_labels(datum, labels)
        return AffineHecke(datum, labels)
    if "quotient" in cfg:
        q = cfg["quotient"]
        qs = build_quotient(load_marked(q), int(q.get("window", 3)))
        return morris_datum(qs, [Fraction(str(x)) for x in q["e"]]).hecke()
    return load_algebra(cfg)


def load_comparison(cfg: dict) -> ComparisonConfig:
    mor_cfg, sol_cfg = cfg["morris"], cfg["solleveld"]
    if mor_cfg.get("negate"):
        sol = _side(sol_cfg, None)
        mor = _side(mor_cfg, sol.datum)
    else:
        mor = _side(mor_cfg, None)
        sol = _side(sol_cfg, mor.datum)
    eps = tuple(int(x) for x in cfg.get("epsilon", [0] * len(sol.datum.basis)))
    return ComparisonConfig(mor, sol, eps)
