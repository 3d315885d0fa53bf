"""Seeded randomized verification suites shared by the CLI and the tests.

Each suite returns a :class:`Report`.  One check id aggregates all trials of
one identity; the first failing trial supplies the witness.
"""
from __future__ import annotations

import random
from itertools import combinations
from typing import Callable, Iterable, List, Sequence

from .algebroid import (AbelianBasis, AlgebroidElement, SplitAlgebroid, alg_difference,
                        algscind_difference)
from .errors import VxdError
from .forms import Derivation, PForm, de_rham
from .poly import random_poly
from .ratfunc import AlgebraDescriptor, RatFunc
from .report import CheckResult, Report, is_zero, witness_string
from .transition import (alpha_trace, beta_trace, change_matrix, curve_uniqueness, h_trace,
                         mor_difference, morphism_eval, transition_alpha, transition_beta,
                         transition_h)


def random_element(amb: AlgebraDescriptor, rng: random.Random, degree: int) -> RatFunc:
    """A random element of the algebra: a polynomial over a random monomial in the generators."""
    f = amb.poly(random_poly(rng, degree, amb.n, ring=amb.ring))
    for g in amb.denominator_generators:
        e = rng.randint(0, max(degree, 0))
        if e:
            f = f / amb.poly(g) ** e
    return f


def random_derivation(amb: AlgebraDescriptor, rng: random.Random, degree: int) -> Derivation:
    return Derivation(amb, [random_element(amb, rng, degree) for _ in range(amb.n)])


def random_form(amb: AlgebraDescriptor, rng: random.Random, degree: int, p: int) -> PForm:
    terms = {idx: random_element(amb, rng, degree) for idx in combinations(range(amb.n), p)}
    return PForm(amb, p, terms)


def random_closed_form(amb: AlgebraDescriptor, rng: random.Random, degree: int, p: int) -> PForm:
    """A random closed p-form: arbitrary in top degree, otherwise exact."""
    if p > amb.n:
        return PForm.zero(amb, p)
    if p == amb.n:
        return random_form(amb, rng, degree, p)
    return de_rham(random_form(amb, rng, degree, p - 1))


def random_algebroid_element(amb: AlgebraDescriptor, rng: random.Random, degree: int) -> AlgebroidElement:
    return AlgebroidElement(random_derivation(amb, rng, degree), random_form(amb, rng, degree, 1))


def run_trials(check_id: str, trials: int, trial: Callable[[int], object]) -> CheckResult:
    """Run ``trial(k)`` for k < trials; the first nonzero difference fails the check."""
    for k in range(trials):
        diff = trial(k)
        if not is_zero(diff):
            return CheckResult(check_id, False, f"trial={k} {witness_string(diff)}")
    return CheckResult(check_id, True)


def axiom_suite(B: SplitAlgebroid, label: str, seed: int = 0, trials: int = 50,
                degree: int = 3) -> Report:
    """All split-algebroid and vertex-algebroid axioms of B on seeded random inputs."""
    amb = B.ambient
    rep = Report()
    for k in (1, 2, 3):
        def scind(i, k=k):
            rng = random.Random(f"{seed}:algscind{k}:{i}")
            t, u, v = (random_derivation(amb, rng, degree) for _ in range(3))
            a, b = random_element(amb, rng, degree), random_element(amb, rng, degree)
            return algscind_difference(B, k, t, u, v, a, b)

        rep.add(run_trials(f"{label}.algscind{k}", trials, scind))
    for k in (1, 2, 3):
        def alg(i, k=k):
            rng = random.Random(f"{seed}:alg{k}:{i}")
            x, y, z = (random_algebroid_element(amb, rng, degree) for _ in range(3))
            return alg_difference(B, k, x, y, z, random_element(amb, rng, degree))

        rep.add(run_trials(f"{label}.alg{k}", trials, alg))
    return rep


def twisted_axiom_suite(basis: AbelianBasis, label: str, seed: int = 0, trials: int = 50,
                        degree: int = 3) -> Report:
    """Axioms for the untwisted algebroid and for one random closed twist of it."""
    rep = axiom_suite(SplitAlgebroid(basis), f"{label}.plain", seed, trials, degree)
    rng = random.Random(f"{seed}:twist:{label}")
    w = random_closed_form(basis.ambient, rng, min(degree, 2), 3)
    rep.merge(axiom_suite(SplitAlgebroid(basis, w), f"{label}.twisted", seed, trials, degree))
    return rep


def mor_suite(h, label: str, seed: int = 0, trials: int = 50, degree: int = 3) -> Report:
    """Mor1..Mor3 for the morphism h on seeded random (t, u, a)."""
    amb = h.source.ambient
    rep = Report()
    for k in (1, 2, 3):
        def trial(i, k=k):
            rng = random.Random(f"{seed}:mor{k}:{i}")
            t, u = random_derivation(amb, rng, degree), random_derivation(amb, rng, degree)
            return mor_difference(h, k, t, u, random_element(amb, rng, degree))

        rep.add(run_trials(f"{label}.mor{k}", trials, trial))
    return rep


def transition_suite(b_from: AbelianBasis, b_to: AbelianBasis, label: str,
                     via: AbelianBasis | None = None, seed: int = 0, trials: int = 50,
                     degree: int = 3, emit_symbolic: bool = False) -> Report:
    """Checks for the change b_from = phi b_to, and with ``via`` the triple from -> via -> to.

    Compares the constructive alpha and h with their trace formulas, checks
    closedness of alpha and the morphism axioms of h; with ``via`` also the
    beta trace formula and the three-basis form of h.
    """
    rep = Report()
    phi = change_matrix(b_from, b_to)
    h = transition_h(b_from, b_to)
    alpha = transition_alpha(b_from, b_to, h.basis_values)
    rep.add(CheckResult.from_difference(f"{label}.alpha_trace", alpha - alpha_trace(phi)))
    rep.add(CheckResult.from_difference(f"{label}.alpha_closed", de_rham(alpha)))
    rep.add(CheckResult.from_difference(
        f"{label}.h_trace", [v - h_trace(phi, t) for t, v in zip(b_from.vectors, h.basis_values)]))
    rep.merge(mor_suite(h, label, seed, trials, degree))
    if b_from.ambient.n == 1:
        try:
            u = curve_uniqueness(b_to, b_from)
            rep.add(CheckResult.from_difference(
                f"{label}.curve_unique", [a - b for a, b in zip(u.basis_values, h.basis_values)]))
        except VxdError as e:
            rep.add(CheckResult(f"{label}.curve_unique", False, str(e)))
    if emit_symbolic:
        rep.notes.append(f"{label} phi = {phi.to_strings()}")
        rep.notes.append(f"{label} alpha = {alpha.to_str()}")
        for i, v in enumerate(h.basis_values):
            rep.notes.append(f"{label} h(t'_{i}) = {v.to_str()}")
    if via is not None:
        # b'' = from, b' = via, b = to; b' = phi1 b and b'' = psi b'
        phi1 = change_matrix(via, b_to)
        psi = change_matrix(b_from, via)
        beta = transition_beta(b_from, via, b_to)
        rep.add(CheckResult.from_difference(f"{label}.beta_trace", beta - beta_trace(phi1, psi)))
        h1 = transition_h(via, b_to)
        rep.add(CheckResult.from_difference(
            f"{label}.h_trace_via",
            [morphism_eval(h1, t) - h_trace(phi1, t, psi) for t in b_from.vectors]))
        if emit_symbolic:
            rep.notes.append(f"{label} beta = {beta.to_str()}")
    return rep


def bases_for(amb: AlgebraDescriptor, rows: Iterable[Sequence[Sequence[str]]]) -> List[AbelianBasis]:
    return [AbelianBasis.parse(amb, r) for r in rows]
