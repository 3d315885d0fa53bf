"""Regenerate the JSON corpus under src/vxd/corpus.

Transition grids of the covers are computed from the per-chart coordinate
bases, so the files never carry hand-typed matrices except the broken one.
"""
import json
from pathlib import Path

from vxd.algebroid import AbelianBasis
from vxd.cech import CoverDescriptor, transitions_from_bases
from vxd.poly import PolyRing
from vxd.ratfunc import AlgebraDescriptor

OUT = Path(__file__).resolve().parent.parent / "src" / "vxd" / "corpus"


def coords(*fs):
    return {"coordinates": list(fs)}


ALGEBRAS = {
    "A1": {"variables": ["x"], "denominators": [],
           "bases": {"coords": coords("x"), "scaled": coords("2*x"), "shifted": coords("x + 1")}},
    "A2": {"variables": ["x", "y"], "denominators": [],
           "bases": {"coords": coords("x", "y"),
                     "shear": coords("x", "y + x^2"),
                     "shear_y": coords("x + y^2", "y"),
                     "cubic": coords("x", "y + x^3"),
                     "linear": coords("2*x + y", "x + y"),
                     "nested": coords("x + (y + x^2)^2", "y + x^2"),
                     "mixed": coords("x + y^3", "y + 2*x + 2*y^3")}},
    "A3": {"variables": ["x", "y", "z"], "denominators": [],
           "bases": {"coords": coords("x", "y", "z"),
                     "shear": coords("x", "y + x^2", "z + x*y"),
                     "shear_z": coords("x + z^2", "y", "z"),
                     "tower": coords("x", "y + x^3", "z + y^2 - x*y"),
                     "linear": coords("x + y", "y + z", "z"),
                     "twisted": coords("x", "y + z^2", "z + x"),
                     "nested": coords("x + (y + z^2)^2", "y + z^2", "z")},
           "twists": {"cubic": {"degree": 3, "terms": [[[0, 1, 2], "x*y + 1"]]}}},
    "A4": {"variables": ["x", "y", "z", "w"], "denominators": [],
           "bases": {"coords": coords("x", "y", "z", "w")},
           "twists": {"nonclosed": {"degree": 3, "terms": [[[0, 1, 2], "w"]]},
                      "closed": {"degree": 3, "terms": [[[0, 1, 2], "w"], [[0, 1, 3], "z"]]}}},
    "T1": {"variables": ["x"], "denominators": ["x"],
           "bases": {"coords": coords("x"), "euler": {"rows": [["x"]]}, "inverse": coords("1/x")}},
}

COVERS = {
    "Aff2": {"charts": 1, "variables": ["x", "y"], "overlaps": {},
             "bases": [coords("x", "y")]},
    "Torus": {"charts": 1, "variables": ["x"], "overlaps": {"0": ["x"]},
              "bases": [{"rows": [["x"]]}]},
    "P1": {"charts": 2, "variables": ["x"], "overlaps": {"1": ["x"]},
           "bases": [coords("x"), coords("1/x")]},
    "P2": {"charts": 3, "variables": ["x", "y"], "overlaps": {"1": ["x"], "2": ["y"]},
           "bases": [coords("x", "y"), coords("1/x", "y/x"), coords("x/y", "1/y")],
           "gauge": [[["1", "x"], ["0", "1"]], [["1", "0"], ["y/x", "1"]], [["1", "1/y"], ["0", "1"]]]},
    "P1xP1": {"charts": 4, "variables": ["x", "y"],
              "overlaps": {"1": ["x"], "2": ["y"], "3": ["x", "y"]},
              "bases": [coords("x", "y"), coords("1/x", "y"), coords("x", "1/y"), coords("1/x", "1/y")]},
}

GAUGES = {
    "P2_gauges": {"gauges": [
        [[["1", "x"], ["0", "1"]], [["1", "0"], ["y/x", "1"]], [["1", "1/y"], ["0", "1"]]],
        [[["-1", "0"], ["0", "2"]], [["1/x", "0"], ["0", "1"]], [["1", "0"], ["0", "1/y^2"]]],
        [[["1", "x^2 + y"], ["0", "1"]], [["1", "0"], ["0", "1"]], [["1", "0"], ["x/y", "1"]]],
    ]},
}

TRIVIALIZATIONS = {"zero_trivialization": {"two": {}, "three": {}}}


def transition_grids(spec):
    ring = PolyRing(spec["variables"])
    plain = AlgebraDescriptor(ring)
    overlaps = {tuple(int(k) for k in key.split(",")): [plain.parse(d).num for d in dens]
                for key, dens in spec["overlaps"].items()}
    cover = CoverDescriptor(spec["charts"], ring, overlaps)
    bases = [AbelianBasis.from_coordinates(cover.ambient((i,)), b["coordinates"])
             if "coordinates" in b else AbelianBasis.parse(cover.ambient((i,)), b["rows"])
             for i, b in enumerate(spec["bases"])]
    phi = transitions_from_bases(cover, bases)
    return {",".join(map(str, k)): m.to_strings() for k, m in sorted(phi.matrices.items())}


def write(name, data):
    data = {"name": name, **data}
    body = ",\n".join(f" {json.dumps(k)}: {json.dumps(v)}" for k, v in data.items())
    (OUT / f"{name}.json").write_text("{\n" + body + "\n}\n")


def main():
    for name, data in ALGEBRAS.items():
        write(name, data)
    for name, data in COVERS.items():
        data = dict(data)
        data["rank"] = len(data["variables"])
        data["transitions"] = transition_grids(data)
        write(name, data)
    broken = json.loads((OUT / "P2.json").read_text())
    broken.pop("bases")
    broken.pop("gauge")
    broken["transitions"]["0,2"][0][0] = "2/y"
    write("P2_broken", {k: v for k, v in broken.items() if k != "name"})
    for name, data in {**GAUGES, **TRIVIALIZATIONS}.items():
        write(name, data)


if __name__ == "__main__":
    main()
