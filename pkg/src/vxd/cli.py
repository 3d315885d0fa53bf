"""Command-line front end: ``vxd axioms|transition|pacs|gerbe|selftest``.

Every subcommand prints a report of ``CHECK <id> PASS|FAIL[ <witness>]``
lines sorted by id, optional ``NOTE`` lines, and a closing
``SUMMARY pass=<n> fail=<m>``.  Exit status is 0 when every check passes,
1 on any FAIL and 2 on unreadable or invalid input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence

from .algebroid import SplitAlgebroid
from .cech import (CechCochain, CoverDescriptor, TransitionCocycle, cech_d, gauge_identity_defect,
                   gerbe_cocycle, pacs, pacs_duality_check, pacs_identities, total_d, total_is_zero,
                   total_witness, transitions_from_bases, verify_trivialization)
from .descriptors import (AlgebraSpec, CoverSpec, corpus_names, load_algebra, load_cover,
                          load_gauges, load_json, load_trivialization, parse_form)
from .errors import (BasisError, CocycleError, DegreeError, DescriptorError, DimensionError,
                     ExprSyntaxError, MembershipError, NotClosedError, UnitError,
                     UnknownVariableError)
from .forms import PForm, de_rham
from .report import CheckResult, Report
from .suites import (axiom_suite, random_derivation, random_element, random_form, run_trials,
                     transition_suite, twisted_axiom_suite)
from .transition import MorphismDatum, mor_difference, transition_h

INPUT_ERRORS = (DescriptorError, ExprSyntaxError, UnknownVariableError, BasisError, DegreeError,
                DimensionError, MembershipError, UnitError, OSError)

SELFTEST_TRIALS = 10


@dataclass
class RunConfig:
    subcommand: str
    inputs: Dict[str, Optional[str]] = field(default_factory=dict)
    seed: int = 0
    degree: int = 3
    trials: int = 50
    emit_symbolic: bool = False
    flags: Dict[str, bool] = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise DescriptorError("--trials must be at least 1")
        if self.degree < 0:
            raise DescriptorError("--degree must be nonnegative")


class InputError(Exception):
    """Raised for anything the user has to fix in the invocation or its files."""


def _load(what: str, fn: Callable, *args):
    try:
        return fn(*args)
    except INPUT_ERRORS as e:
        raise InputError(f"{what}: {e}") from None


# ---------------------------------------------------------------------------
# subcommands


def _twist(alg: AlgebraSpec, ref: str) -> PForm:
    if ref in alg.twists:
        return alg.twists[ref]
    data = load_json(ref)
    block = data.get("twist", data)
    return parse_form(alg.ambient, block, 3)


def cmd_axioms(cfg: RunConfig) -> Report:
    alg = _load("algebra", load_algebra, cfg.inputs["algebra"])
    name = cfg.inputs.get("basis") or "coords"
    basis = _load("basis", alg.basis, name)
    label = f"{alg.name}.{name}"
    twist_ref = cfg.inputs.get("twist")
    if twist_ref is None:
        return twisted_axiom_suite(basis, label, cfg.seed, cfg.trials, cfg.degree)
    w = _load("twist", _twist, alg, twist_ref)
    rep = Report()
    dw = de_rham(w)
    rep.add(CheckResult.from_difference(f"{label}.twist_closed", dw))
    B = SplitAlgebroid(basis, w, check_closed=False)
    rep.merge(axiom_suite(B, f"{label}.twist", cfg.seed, cfg.trials, cfg.degree))
    if cfg.emit_symbolic:
        rep.notes.append(f"{label} twist = {w.to_str()}")
    return rep


def cmd_transition(cfg: RunConfig) -> Report:
    alg = _load("algebra", load_algebra, cfg.inputs["algebra"])
    names = [cfg.inputs.get("from"), cfg.inputs.get("to") or "coords"]
    if names[0] is None:
        raise InputError("transition needs --from")
    b_from, b_to = (_load("basis", alg.basis, n) for n in names)
    via = cfg.inputs.get("via")
    b_via = _load("basis", alg.basis, via) if via else None
    label = f"{alg.name}.{names[0]}" + (f".{via}" if via else "") + f".{names[1]}"
    return transition_suite(b_from, b_to, label, b_via, cfg.seed, cfg.trials, cfg.degree,
                            cfg.emit_symbolic)


def _cocycle_check(spec: CoverSpec, label: str, rep: Report) -> Optional[TransitionCocycle]:
    try:
        phi = spec.cocycle()
    except CocycleError as e:
        rep.add(CheckResult(f"{label}.cocycle", False, str(e)))
        return None
    rep.add(CheckResult(f"{label}.cocycle", True))
    return phi


def cmd_pacs(cfg: RunConfig) -> Report:
    spec = _load("cover", load_cover, cfg.inputs["cover"])
    label = spec.name
    rep = Report()
    phi = _cocycle_check(spec, label, rep)
    if phi is None:
        return rep
    rep.merge(pacs_identities(phi, label))
    gauges = []
    if spec.gauge is not None:
        gauges.append(spec.gauge_cochain())
    if cfg.inputs.get("gauge"):
        gauges.extend(_load("gauge", load_gauges, spec.cover, cfg.inputs["gauge"]))
    for k, g in enumerate(gauges):
        diff = gauge_identity_defect(phi, g)
        cid = f"{label}.gauge{k}"
        rep.add(CheckResult(cid, True) if total_is_zero(diff)
                else CheckResult(cid, False, total_witness(diff)))
    if cfg.flags.get("dual"):
        rep.merge(pacs_duality_check(phi, f"{label}.duality"))
    if cfg.emit_symbolic:
        p2, p3 = pacs(phi)
        rep.notes.append(f"{label} p2 = {p2}")
        rep.notes.append(f"{label} p3 = {p3}")
    return rep


def _equal_check(check_id: str, a: CechCochain, b: CechCochain) -> CheckResult:
    d = a - b
    return CheckResult(check_id, True) if d.is_zero() else CheckResult(check_id, False, d.witness())


def cmd_gerbe(cfg: RunConfig) -> Report:
    spec = _load("cover", load_cover, cfg.inputs["cover"])
    label = spec.name
    rep = Report()
    if spec.bases is None:
        raise InputError(f"cover {label!r} has no per-chart bases")
    phi = _cocycle_check(spec, label, rep)
    if phi is None:
        return rep
    beta, alpha = gerbe_cocycle(spec.cover, spec.bases)
    p2, p3 = pacs(phi)
    rep.add(_equal_check(f"{label}.gerbe_beta_eq_p2", beta, p2))
    rep.add(_equal_check(f"{label}.gerbe_alpha_eq_p3", alpha, p3))
    if spec.transitions is not None:
        derived = transitions_from_bases(spec.cover, spec.bases)
        bad = [k for k in sorted(derived.matrices) if derived.matrices[k] != phi.matrices.get(k)]
        rep.add(CheckResult.from_bool(f"{label}.transitions_match_bases", not bad,
                                      f"overlaps {bad}"))
    rep.notes.append(f"{label} class representative is "
                     + ("the zero cochain" if total_is_zero((p2, p3)) else "a nonzero cochain"))
    if cfg.inputs.get("trivialization"):
        omega = _load("trivialization", load_trivialization, spec.cover, cfg.inputs["trivialization"])
        rep.merge(verify_trivialization((beta, alpha), omega, f"{label}.trivialization"))
    if cfg.emit_symbolic:
        rep.notes.append(f"{label} beta = {beta}")
        rep.notes.append(f"{label} alpha = {alpha}")
    return rep


# ---------------------------------------------------------------------------
# selftest


AXIOM_ALGEBRAS = ("A1", "A2", "A3", "T1")
# (from, to, via) per algebra; changes between two non-coordinate bases give nonzero alpha
TRANSITIONS = {
    "A3": [("shear", "coords", None), ("shear_z", "coords", None), ("tower", "coords", None),
           ("linear", "coords", None), ("twisted", "coords", None), ("nested", "coords", None),
           ("shear", "coords", "twisted"), ("nested", "shear", None), ("tower", "shear_z", None),
           ("nested", "tower", "shear")],
    "A2": [("shear", "coords", "nested"), ("nested", "coords", "shear"),
           ("mixed", "coords", "linear"), ("cubic", "coords", "shear_y"),
           ("linear", "coords", "mixed"), ("nested", "coords", "cubic"),
           ("mixed", "cubic", "linear")],
    "A1": [("scaled", "coords", "shifted")],
    "T1": [("euler", "coords", None), ("inverse", "coords", "euler")],
}
COVERS = ("Aff2", "Torus", "P1", "P2", "P1xP1")


def _negative_controls(cfg: RunConfig) -> Report:
    """Each control passes when the corrupted input is caught with a nonzero witness."""
    rep = Report()
    a4 = load_algebra("A4")
    w = a4.twists["nonclosed"]
    B = SplitAlgebroid(a4.basis("coords"), w, check_closed=False)
    sub = axiom_suite(B, "A4.nonclosed", cfg.seed, cfg.trials, cfg.degree)
    fails = {r.check_id: r for r in sub.results if not r.passed}
    r3 = fails.get("A4.nonclosed.algscind3")
    rep.add(CheckResult.from_bool("control.nonclosed_twist_breaks_algscind3", r3 is not None,
                                  "AlgScind3 passed on a non-closed twist"))
    if r3 is not None:
        rep.notes.append(f"control nonclosed twist witness: {r3.witness}")
    a3 = load_algebra("A3")
    h = transition_h(a3.basis("shear"), a3.basis("coords"))
    rng = random.Random(f"{cfg.seed}:perturb")
    amb = h.source.ambient
    bump = random_form(amb, rng, 2, 1)
    bad = MorphismDatum(h.source, h.target, [h.basis_values[0] + bump] + list(h.basis_values[1:]),
                        h.evaluation_basis)
    t = random_derivation(amb, rng, 2)
    diff = mor_difference(bad, 2, h.evaluation_basis.vectors[0], t, random_element(amb, rng, 2))
    rep.add(CheckResult.from_bool("control.perturbed_h_breaks_mor2", bool(diff),
                                  "Mor2 passed on a perturbed morphism"))
    if diff:
        rep.notes.append(f"control perturbed h witness: {diff}")
    try:
        load_cover("P2_broken").cocycle()
        rep.add(CheckResult("control.broken_cocycle_rejected", False, "cocycle accepted"))
    except CocycleError as e:
        rep.add(CheckResult("control.broken_cocycle_rejected", True))
        rep.notes.append(f"control broken cocycle witness: {e}")
    return rep


def _cochain_invariants(cfg: RunConfig) -> Report:
    """d_C d_C = 0 and total d d = 0 on random cochains over 3- and 4-chart covers."""
    rep = Report()
    covers = {"P2": load_cover("P2").cover, "P1xP1": load_cover("P1xP1").cover,
              "X3": load_cover({"name": "X3", "charts": 3, "variables": ["x", "y", "z"],
                                "overlaps": {"1": ["x"], "2": ["y"]}}).cover}
    deg = min(cfg.degree, 2)
    for name, cover in covers.items():
        def trial(i, cover=cover, name=name):
            rng = random.Random(f"{cfg.seed}:cech:{name}:{i}")
            c = random_cochain(cover, rng, 0, 1, deg)
            pair = (random_cochain(cover, rng, 1, 2, deg), random_cochain(cover, rng, 0, 3, deg))
            return [cech_d(cech_d(c)), *total_d(total_d(pair))]

        rep.add(run_trials(f"cech.{name}.d_squared", max(1, cfg.trials // 5), trial))
    return rep


def random_cochain(cover: CoverDescriptor, rng: random.Random, p: int, q: int,
                   degree: int) -> CechCochain:
    vals = {s: random_form(cover.ambient(s), rng, degree, q) for s in cover.simplices(p)}
    return CechCochain(cover, p, q, vals)


def cmd_selftest(cfg: RunConfig) -> Report:
    rep = Report()
    for name in AXIOM_ALGEBRAS:
        alg = load_algebra(name)
        rep.merge(twisted_axiom_suite(alg.basis("coords"), f"axioms.{name}", cfg.seed, cfg.trials,
                                      cfg.degree))
    a3 = load_algebra("A3")
    rep.merge(axiom_suite(SplitAlgebroid(a3.basis("shear"), a3.twists["cubic"]),
                          "axioms.A3.shear.cubic", cfg.seed, cfg.trials, cfg.degree))
    for name, pairs in TRANSITIONS.items():
        alg = load_algebra(name)
        for src, dst, via in pairs:
            label = f"transition.{name}.{src}.{dst}" + (f".{via}" if via else "")
            rep.merge(transition_suite(alg.basis(src), alg.basis(dst), label,
                                       alg.basis(via) if via else None, cfg.seed,
                                       max(1, cfg.trials // 5), cfg.degree))
    for name in COVERS:
        spec = load_cover(name)
        phi = _cocycle_check(spec, f"pacs.{name}", rep)
        if phi is None:
            continue
        rep.merge(pacs_identities(phi, f"pacs.{name}"))
        rep.merge(pacs_duality_check(phi, f"pacs.{name}.duality"))
        beta, alpha = gerbe_cocycle(spec.cover, spec.bases)
        p2, p3 = pacs(phi)
        rep.add(_equal_check(f"gerbe.{name}.beta_eq_p2", beta, p2))
        rep.add(_equal_check(f"gerbe.{name}.alpha_eq_p3", alpha, p3))
    p2spec = load_cover("P2")
    phi = p2spec.cocycle()
    for k, g in enumerate(load_gauges(p2spec.cover, "P2_gauges")):
        diff = gauge_identity_defect(phi, g)
        rep.add(CheckResult.from_bool(f"pacs.P2.gauge{k}", total_is_zero(diff), total_witness(diff)))
    for name in ("P1", "Torus", "Aff2"):
        spec = load_cover(name)
        omega = load_trivialization(spec.cover, "zero_trivialization")
        rep.merge(verify_trivialization(gerbe_cocycle(spec.cover, spec.bases), omega,
                                        f"gerbe.{name}.trivialization"))
    rep.merge(_cochain_invariants(cfg))
    rep.merge(_negative_controls(cfg))
    return rep


COMMANDS = {
    "axioms": cmd_axioms,
    "transition": cmd_transition,
    "pacs": cmd_pacs,
    "gerbe": cmd_gerbe,
    "selftest": cmd_selftest,
}


# ---------------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vxd", description="Exact verification of split vertex algebroids and their "
        "characteristic-class cocycles.",
        epilog="Descriptor arguments take a JSON file path or a corpus name: "
        + ", ".join(corpus_names()))
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, trials_default=50):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=trials_default)
        p.add_argument("--degree", type=int, default=3)
        p.add_argument("--emit-symbolic", action="store_true",
                       help="append NOTE lines with the computed symbolic values")
        p.add_argument("--json", metavar="PATH", help="also write the report as JSON")

    p = sub.add_parser("axioms", help="split and vertex algebroid axioms on random inputs")
    p.add_argument("--algebra", required=True)
    p.add_argument("--basis", default="coords")
    p.add_argument("--twist", help="twist name in the algebra file, or a form file")
    common(p)
    p = sub.add_parser("transition", help="alpha, beta and h for a change of basis")
    p.add_argument("--algebra", required=True)
    p.add_argument("--from", dest="from_", required=True, metavar="B1",
                   help="new basis b' (the source of h)")
    p.add_argument("--to", default="coords", metavar="B2", help="old basis b")
    p.add_argument("--via", metavar="B3", help="middle basis for the triple from -> via -> to")
    common(p)
    p = sub.add_parser("pacs", help="cocycle identities of the trace cochains")
    p.add_argument("--cover", required=True)
    p.add_argument("--gauge", help="file with a 'gauge' or 'gauges' block")
    p.add_argument("--dual", action="store_true", help="compare with the dual cocycle")
    common(p)
    p = sub.add_parser("gerbe", help="gerbe cocycle from chart bases against the trace cochains")
    p.add_argument("--cover", required=True)
    p.add_argument("--trivialization", help="1-cochain file to test as a trivialization")
    common(p)
    p = sub.add_parser("selftest", help="every built-in suite over the shipped corpus")
    common(p, SELFTEST_TRIALS)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    inputs = {}
    for key in ("algebra", "basis", "twist", "to", "via", "cover", "gauge", "trivialization"):
        if hasattr(ns, key):
            inputs[key] = getattr(ns, key)
    if hasattr(ns, "from_"):
        inputs["from"] = ns.from_
    return RunConfig(ns.subcommand, inputs, ns.seed, ns.degree, ns.trials, ns.emit_symbolic,
                     {"dual": bool(getattr(ns, "dual", False))})


def run(cfg: RunConfig) -> Report:
    return COMMANDS[cfg.subcommand](cfg)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        cfg = config_from_args(ns)
        rep = run(cfg)
    except (InputError, DescriptorError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except NotClosedError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    sys.stdout.write(rep.render())
    if ns.json:
        with open(ns.json, "w") as fh:
            json.dump(rep.to_dict(), fh, indent=1, sort_keys=True)
            fh.write("\n")
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
