"""Reading and writing algebra and cover descriptors (JSON).

Algebra descriptor::

    {"name": "A3", "variables": ["x", "y", "z"], "denominators": [],
     "bases": {"coords": {"rows": [["1", "0", "0"], ...]},
               "shear": {"coordinates": ["x", "y + x^2", "z + x*y"]}},
     "twists": {"cubic": {"degree": 3, "terms": [[[0, 1, 2], "x*y + 1"]]}}}

Cover descriptor::

    {"name": "P2", "charts": 3, "variables": ["x", "y"],
     "overlaps": {"1": ["x"], "2": ["y"]},
     "transitions": {"0,1": [["-1/x^2", "-y/x^2"], ["0", "1/x"]], ...},
     "bases": {"0": {"coordinates": ["x", "y"]}, ...},
     "gauge": [[["1", "x"], ["0", "1"]], ...]}

Overlap and transition keys are comma-separated chart indices.  A basis
block is either ``{"rows": grid}`` or ``{"coordinates": [functions]}``; a
bare grid is read as rows.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .algebroid import AbelianBasis
from .cech import CechCochain, CoverDescriptor, GaugeCochain, TotalCochain, TransitionCocycle
from .errors import DescriptorError, DivisionError, MembershipError
from .forms import PForm
from .matrix import MatrixA
from .poly import PolyRing
from .ratfunc import AlgebraDescriptor

CORPUS_PACKAGE = "vxd.corpus"


@dataclass
class AlgebraSpec:
    name: str
    ambient: AlgebraDescriptor
    bases: Dict[str, AbelianBasis]
    twists: Dict[str, PForm] = field(default_factory=dict)

    def basis(self, name: str) -> AbelianBasis:
        if name == "coords" and "coords" not in self.bases:
            return AbelianBasis.coordinate(self.ambient)
        try:
            return self.bases[name]
        except KeyError:
            known = ", ".join(sorted(self.bases)) or "none"
            raise DescriptorError(f"unknown basis {name!r} (known: {known})") from None


@dataclass
class CoverSpec:
    name: str
    cover: CoverDescriptor
    transitions: Optional[Dict[Tuple[int, int], MatrixA]]
    bases: Optional[List[AbelianBasis]]
    gauge: Optional[List[MatrixA]]
    rank: Optional[int] = None

    def cocycle(self, validate: bool = True) -> TransitionCocycle:
        if self.transitions is None:
            if self.bases is None:
                raise DescriptorError(f"cover {self.name!r} has neither transitions nor bases")
            from .cech import transitions_from_bases

            return transitions_from_bases(self.cover, self.bases)
        return TransitionCocycle(self.cover, self.transitions, self.rank, validate=validate)

    def gauge_cochain(self) -> Optional[GaugeCochain]:
        if self.gauge is None:
            return None
        return GaugeCochain(self.cover, self.gauge)


# ---------------------------------------------------------------------------
# raw loading


def corpus_names() -> List[str]:
    root = resources.files(CORPUS_PACKAGE)
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_json(source: str | Path | Mapping[str, Any]) -> Dict[str, Any]:
    """A descriptor from a mapping, a file path, or the name of a corpus entry."""
    if isinstance(source, Mapping):
        return dict(source)
    path = Path(source)
    try:
        if path.exists():
            text = path.read_text()
        else:
            entry = resources.files(CORPUS_PACKAGE) / f"{source}.json"
            if not entry.is_file():
                raise DescriptorError(f"no descriptor file or corpus entry named {str(source)!r}")
            text = entry.read_text()
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DescriptorError(f"{source}: invalid JSON: {e}") from None
    if not isinstance(data, dict):
        raise DescriptorError(f"{source}: descriptor must be a JSON object")
    return data


def _require(data: Mapping[str, Any], key: str, kind, where: str):
    if key not in data:
        raise DescriptorError(f"{where}: missing field {key!r}")
    value = data[key]
    if not isinstance(value, kind):
        raise DescriptorError(f"{where}: field {key!r} has the wrong type")
    return value


def _simplex(key: str) -> Tuple[int, ...]:
    try:
        return tuple(int(k) for k in str(key).split(","))
    except ValueError:
        raise DescriptorError(f"bad overlap key {key!r}") from None


def _ring_and_dens(variables: Sequence[str], dens: Sequence[str]):
    if not variables or len(set(variables)) != len(variables):
        raise DescriptorError("variables must be a nonempty list of distinct names")
    ring = PolyRing(variables)
    plain = AlgebraDescriptor(ring)
    polys = []
    for d in dens:
        polys.append(_polynomial(plain, d, "denominator generator"))
    return ring, polys


def _polynomial(plain: AlgebraDescriptor, text: Any, what: str):
    try:
        f = plain.parse(str(text))
    except (MembershipError, DivisionError):
        f = None
    if f is None or not f.den.is_constant():
        raise DescriptorError(f"{what} {text!r} is not a polynomial")
    return f.num


def parse_basis(ambient: AlgebraDescriptor, block: Any, name: str = "") -> AbelianBasis:
    if isinstance(block, list):
        return AbelianBasis.parse(ambient, block, name=name)
    if isinstance(block, dict):
        if "rows" in block:
            return AbelianBasis.parse(ambient, block["rows"], name=name)
        if "coordinates" in block:
            return AbelianBasis.from_coordinates(ambient, [str(f) for f in block["coordinates"]],
                                                 name=name)
    raise DescriptorError(f"basis {name!r}: expected a grid, {{'rows': ...}} or {{'coordinates': ...}}")


def parse_form(ambient: AlgebraDescriptor, block: Any, degree: int | None = None) -> PForm:
    """A form block ``{"degree": p, "terms": [[[i, ...], expr], ...]}``."""
    if not isinstance(block, dict) or "terms" not in block:
        raise DescriptorError("form block needs 'terms'")
    deg = block.get("degree", degree)
    if deg is None:
        raise DescriptorError("form block needs 'degree'")
    if degree is not None and deg != degree:
        raise DescriptorError(f"expected a {degree}-form, got degree {deg}")
    return PForm.parse(ambient, int(deg), [(tuple(idx), str(e)) for idx, e in block["terms"]])


def load_algebra(source: str | Path | Mapping[str, Any]) -> AlgebraSpec:
    data = load_json(source)
    where = str(data.get("name", source if isinstance(source, (str, Path)) else "algebra"))
    variables = _require(data, "variables", list, where)
    ring, dens = _ring_and_dens([str(v) for v in variables], data.get("denominators", []))
    amb = AlgebraDescriptor(ring, dens)
    bases = {name: parse_basis(amb, block, name) for name, block in data.get("bases", {}).items()}
    twists = {name: parse_form(amb, block, 3) for name, block in data.get("twists", {}).items()}
    return AlgebraSpec(where, amb, bases, twists)


def load_cover(source: str | Path | Mapping[str, Any]) -> CoverSpec:
    data = load_json(source)
    where = str(data.get("name", source if isinstance(source, (str, Path)) else "cover"))
    charts = _require(data, "charts", int, where)
    variables = _require(data, "variables", list, where)
    ring, _ = _ring_and_dens([str(v) for v in variables], [])
    plain = AlgebraDescriptor(ring)
    overlaps = {}
    for key, dens in data.get("overlaps", {}).items():
        overlaps[_simplex(key)] = [_polynomial(plain, d, f"{where}: overlap denominator")
                                   for d in dens]
    cover = CoverDescriptor(charts, ring, overlaps)
    transitions = None
    if "transitions" in data:
        transitions = {}
        for key, grid in data["transitions"].items():
            s = _simplex(key)
            if len(s) != 2:
                raise DescriptorError(f"{where}: transition key {key!r} must name two charts")
            transitions[s] = MatrixA.parse(cover.ambient(s), grid)
    bases = None
    if "bases" in data:
        blocks = data["bases"]
        if isinstance(blocks, dict):
            blocks = [blocks[str(i)] for i in range(charts)] if all(
                str(i) in blocks for i in range(charts)) else None
        if not isinstance(blocks, list) or len(blocks) != charts:
            raise DescriptorError(f"{where}: 'bases' needs one block per chart")
        bases = [parse_basis(cover.ambient((i,)), b, f"chart{i}") for i, b in enumerate(blocks)]
    gauge = None
    if "gauge" in data:
        gauge = parse_gauge(cover, data["gauge"], where)
    rank = data.get("rank")
    if rank is not None and (not isinstance(rank, int) or rank < 1):
        raise DescriptorError(f"{where}: 'rank' must be a positive integer")
    return CoverSpec(where, cover, transitions, bases, gauge, rank)


def parse_gauge(cover: CoverDescriptor, block: Any, where: str = "gauge") -> List[MatrixA]:
    if isinstance(block, dict) and "gauge" in block:
        block = block["gauge"]
    if not isinstance(block, list) or len(block) != cover.chart_count:
        raise DescriptorError(f"{where}: gauge needs one matrix per chart")
    return [MatrixA.parse(cover.ambient((i,)), g) for i, g in enumerate(block)]


def load_gauges(cover: CoverDescriptor, source: str | Path | Mapping[str, Any]) -> List[GaugeCochain]:
    """Gauges from ``{"gauge": [per-chart grids]}`` or ``{"gauges": [[per-chart grids], ...]}``."""
    data = load_json(source)
    where = str(data.get("name", source))
    if "gauges" in data:
        blocks = data["gauges"]
        if not isinstance(blocks, list):
            raise DescriptorError(f"{where}: 'gauges' must be a list")
    elif "gauge" in data:
        blocks = [data["gauge"]]
    else:
        raise DescriptorError(f"{where}: no 'gauge' or 'gauges' block")
    return [GaugeCochain(cover, parse_gauge(cover, b, where)) for b in blocks]


def load_trivialization(cover: CoverDescriptor, source: str | Path | Mapping[str, Any]) -> TotalCochain:
    """A 1-cochain ``{"two": {"i,j": form terms}, "three": {"i": form terms}}``."""
    data = load_json(source)
    two = {}
    for key, terms in data.get("two", {}).items():
        s = _simplex(key)
        two[s] = PForm.parse(cover.ambient(s), 2, [(tuple(i), str(e)) for i, e in terms])
    three = {}
    for key, terms in data.get("three", {}).items():
        s = _simplex(key)
        three[s] = PForm.parse(cover.ambient(s), 3, [(tuple(i), str(e)) for i, e in terms])
    return CechCochain(cover, 1, 2, two), CechCochain(cover, 0, 3, three)


def trivialization_to_dict(omega: TotalCochain) -> Dict[str, Any]:
    two, three = omega
    return {"two": {",".join(map(str, s)): w.to_pairs() for s, w in sorted(two.values.items())},
            "three": {",".join(map(str, s)): w.to_pairs() for s, w in sorted(three.values.items())}}
