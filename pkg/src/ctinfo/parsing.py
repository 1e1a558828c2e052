"""Distribution-spec strings.

Grammar::

    spec      := baseline | ct | component
    baseline  := family [":" kv ("," kv)*]
    ct        := ("ct" ":" kv "," kv | "ct1" ":" kv | "qt" ":" kv) ["@" baseline]
    component := ("beta21" | "beta31" | "os13:min" | "os13:med" | "os13:max") ["@" baseline]
    kv        := name "=" number

``ct`` takes ``l1`` and ``l2``; ``ct1`` and ``qt`` take ``l``. The baseline
after ``@`` defaults to ``uniform``.

>>> parse_dist("ct:l1=0.4,l2=0.6@exp:beta=2").dist
CTDistribution('ct:l1=0.40000000000000002,l2=0.59999999999999998@exp:beta=2')
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .baselines import FAMILIES, Baseline, ParameterDomainError, Uniform
from .ct_model import (CTDistribution, CTParams, InvalidParametersError, OrderStatComponent, PolyTransform,
                       make_ct, make_one_param_cubic, make_quadratic)

__all__ = ["DistSpecError", "ParsedDist", "parse_dist", "parse_baseline", "parse_kv", "parse_floats"]

_NUMBER = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_COMPONENTS = {"beta21": "beta21", "beta31": "beta31", "os13:min": "min", "os13:med": "median",
               "os13:max": "max"}
_BASELINE_PARAMS = {"uniform": (), "exp": ("beta",), "exponential": ("beta",), "pareto": ("alpha",),
                    "power": ("b", "c"), "weibull": ("k",)}


class DistSpecError(ValueError):
    """Malformed spec; ``position`` is the 0-based offset of the problem."""

    def __init__(self, message: str, spec: str, position: int):
        self.spec = spec
        self.position = position
        super().__init__(f"{message} at position {position}")

    def __str__(self):
        return f"{self.args[0]}\n  {self.spec}\n  {' ' * self.position}^"


@dataclass(frozen=True)
class ParsedDist:
    """A parsed spec: the distribution, its baseline and what kind it is."""

    dist: object
    baseline: Baseline
    kind: str
    text: str

    @property
    def is_ct(self) -> bool:
        return isinstance(self.dist, CTDistribution)


def parse_kv(text: str, spec: str, offset: int, allowed: tuple[str, ...] | None = None) -> dict[str, float]:
    """``k=v,k=v`` into a dict, reporting the offset of any error."""
    out: dict[str, float] = {}
    pos = offset
    if text == "":
        raise DistSpecError("expected name=value", spec, pos)
    for part in text.split(","):
        if "=" not in part:
            raise DistSpecError(f"expected name=value, got {part!r}", spec, pos)
        k, v = part.split("=", 1)
        k = k.strip()
        if allowed is not None and k not in allowed:
            raise DistSpecError(f"unknown parameter {k!r}; expected one of {list(allowed)}", spec, pos)
        if k in out:
            raise DistSpecError(f"duplicate parameter {k!r}", spec, pos)
        if not _NUMBER.match(v.strip()):
            raise DistSpecError(f"not a number: {v!r}", spec, pos + len(k) + 1)
        out[k] = float(v)
        pos += len(part) + 1
    return out


def parse_floats(text: str, name: str = "value") -> list[float]:
    """Comma-separated floats (used for ``--mix``, ``--n``, ``--level``)."""
    vals = []
    for i, part in enumerate(text.split(",")):
        if not _NUMBER.match(part.strip()):
            raise DistSpecError(f"{name} item {i + 1} is not a number", text, text.find(part))
        vals.append(float(part))
    return vals


def parse_baseline(text: str, spec: str | None = None, offset: int = 0) -> Baseline:
    spec = text if spec is None else spec
    family, _, rest = text.partition(":")
    if family not in _BASELINE_PARAMS:
        raise DistSpecError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}", spec, offset)
    params = parse_kv(rest, spec, offset + len(family) + 1, _BASELINE_PARAMS[family]) if rest else {}
    try:
        return FAMILIES[family](**params)
    except ParameterDomainError as exc:
        raise DistSpecError(str(exc), spec, offset) from exc


def parse_dist(text: str) -> ParsedDist:
    """Parse a spec string into a :class:`ParsedDist`."""
    spec = text.strip()
    if not spec:
        raise DistSpecError("empty distribution spec", text, 0)
    head, at, tail = spec.partition("@")
    if at and not tail:
        raise DistSpecError("missing baseline after '@'", spec, len(head) + 1)
    base = parse_baseline(tail, spec, len(head) + 1) if at else Uniform()

    if head in _COMPONENTS:
        comp = OrderStatComponent(_COMPONENTS[head], base)
        return ParsedDist(comp.dist, base, "component", spec)
    kind, _, rest = head.partition(":")
    try:
        if kind == "ct":
            kv = parse_kv(rest, spec, len(kind) + 1, ("l1", "l2"))
            if set(kv) != {"l1", "l2"}:
                raise DistSpecError("ct needs l1 and l2", spec, len(kind) + 1)
            return ParsedDist(make_ct(base, CTParams(kv["l1"], kv["l2"])), base, "ct", spec)
        if kind in ("ct1", "qt"):
            kv = parse_kv(rest, spec, len(kind) + 1, ("l",))
            if "l" not in kv:
                raise DistSpecError(f"{kind} needs l", spec, len(kind) + 1)
            make = make_one_param_cubic if kind == "ct1" else make_quadratic
            return ParsedDist(make(base, kv["l"]), base, kind, spec)
    except InvalidParametersError as exc:
        raise DistSpecError(str(exc), spec, len(kind) + 1) from exc
    if at:
        raise DistSpecError("only ct, ct1, qt and order-statistic components take '@baseline'", spec, 0)
    b = parse_baseline(head, spec, 0)
    return ParsedDist(PolyTransform(b, [0.0, 1.0]), b, "baseline", spec)
