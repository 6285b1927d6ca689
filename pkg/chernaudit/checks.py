"""
Registry of named checks.

Each check computes a value from the presentations in a CheckContext; the
runner renders it canonically and compares with the expected text stored
here next to its citation.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import sympy as sp

from . import chern_engine, curves, kummer, localforms, varieties
from .ring import A, B, D, M, integrate, inverse_unit, mul
from .varieties import Presentations


logger = logging.getLogger(__name__)

DEFAULT_SAMPLE_RANGE = (-6, 6)


@dataclass
class CheckContext:
    """Inputs shared by every check in one run"""
    presentations: Presentations
    sample_range: Tuple[int, int] = DEFAULT_SAMPLE_RANGE
    configured_curves: Tuple[str, ...] = ()

    def cover(self, name: str) -> varieties.CoverPresentation:
        return self.presentations.cover(name)

    def variety(self, name: str) -> varieties.VarietyPresentation:
        return self.presentations.variety(name)

    def samples(self) -> range:
        lo, hi = self.sample_range
        return range(lo, hi + 1)


@dataclass(frozen=True)
class Check:
    id: str
    citation: str
    expected: str
    compute: Callable[[CheckContext], Any] = field(compare=False)


_REGISTRY: List[Check] = []


def register(check_id: str, citation: str, expected: str):
    """Decorator adding a check; ids are unique and keep registration order"""
    def decorator(fn: Callable[[CheckContext], Any]) -> Callable[[CheckContext], Any]:
        if any(check.id == check_id for check in _REGISTRY):
            raise ValueError(f"check {check_id} registered twice")
        _REGISTRY.append(Check(check_id, citation, expected, fn))
        return fn
    return decorator


def registered_checks(context: Optional[CheckContext] = None) -> List[Check]:
    """Built-in checks followed by one genus check per configured curve cover"""
    checks = list(_REGISTRY)
    if context is None:
        return checks
    for name in context.configured_curves:
        spec = context.presentations.curves[name]
        if spec.expected_genus is None:
            continue
        checks.append(Check(
            f"config.curve.{name}",
            "config file",
            str(spec.expected_genus),
            lambda ctx, name=name: curves.riemann_hurwitz(ctx.presentations.curves[name]),
        ))
        logger.debug(f"Added genus check for configured curve {name}")
    return checks


def _pairings(ring) -> Dict[str, sp.Expr]:
    return {ring.render_monomial(m): v for m, v in ring.top_table}


# Intersection tables and Todd classes


@register("deg1.triple_intersections", "triple intersections, degree one",
          "{E^3+2E^2F+EF^2: 0, F^3/H^3: 8}")
def _deg1_triple(ctx: CheckContext):
    cover = ctx.cover("deg1")
    e, f = cover.source.ring.gen("E"), cover.source.ring.gen("F")
    relation = integrate(e ** 3 + mul(e, e) * f * 2 + mul(e, f * f))
    lhs, rhs = cover.degree_consistency()
    return {"E^3+2E^2F+EF^2": relation, "F^3/H^3": lhs / (rhs / cover.degree)}


@register("deg0.triple_intersections", "triple intersections, degree zero",
          "{E^3: 16, E^2F: -16, EF^2: 16, F^3: 8}")
def _deg0_triple(ctx: CheckContext):
    return _pairings(ctx.cover("deg0").source.ring)


@register("todd.x1", "Todd classes, degree one", "{todd: 1+H+7/12H^2, inverse: 1-H+5/12H^2, product: 1}")
def _todd_x1(ctx: CheckContext):
    todd = ctx.variety("X1").todd
    inverse = inverse_unit(todd)
    return {"todd": todd.truncate(2), "inverse": inverse.truncate(2), "product": mul(todd, inverse).truncate(2)}


@register("todd.x0", "Todd classes, degree zero", "{todd: 1+2H+11/6H^2, inverse: 1-2H+13/6H^2, product: 1}")
def _todd_x0(ctx: CheckContext):
    todd = ctx.variety("X0").todd
    inverse = inverse_unit(todd)
    return {"todd": todd.truncate(2), "inverse": inverse.truncate(2), "product": mul(todd, inverse).truncate(2)}


@register("todd.y1", "Todd class of the blown-up Prym, degree one", "1-1/2E+1/9E^2+1/9EF")
def _todd_y1(ctx: CheckContext):
    return ctx.variety("Y1").todd.truncate(2)


@register("todd.relative_deg1", "relative Todd class, degree one", "1-1/2E-F+1/9E^2+11/18EF+5/12F^2")
def _relative_deg1(ctx: CheckContext):
    return ctx.cover("deg1").relative_todd.truncate(2)


@register("todd.relative_deg0", "relative Todd class, degree zero", "1-E-2F+1/3E^2+2EF+13/6F^2")
def _relative_deg0(ctx: CheckContext):
    return ctx.cover("deg0").relative_todd.truncate(2)


@register("varieties.x1_chern", "complete intersection of two quadrics", "{c1: 2H, c2: 3H^2}")
def _x1_chern(ctx: CheckContext):
    x1 = ctx.variety("X1")
    return {"c1": x1.tangent_c1, "c2": x1.tangent_c2}


@register("varieties.y1_c2", "second Chern class of the blown-up Prym", "1/3E^2+4/3EF")
def _y1_c2(ctx: CheckContext):
    return varieties.derive_degree1_tangent_c2()


@register("varieties.normal_bundle", "normal bundle of the blown-up curve", "{from_genus: 128, from_E3: 128}")
def _normal_bundle(ctx: CheckContext):
    return varieties.normal_bundle_degree()


@register("varieties.e3_ruled_surface", "self-intersection of the exceptional divisor",
          "{E3: -128, section_square: 64}")
def _e3_ruled(ctx: CheckContext):
    return varieties.verify_e3_from_ruled_surface()


@register("varieties.wobbly_class", "class of the wobbly divisor", "{class: 8H, H^2.Wob: 32}")
def _wobbly_class(ctx: CheckContext):
    cover = ctx.cover("deg1")
    wob = varieties.wobbly_class(cover)
    h = cover.hyperplane()
    return {"class": wob, "H^2.Wob": integrate(mul(h * h, wob))}


# Grothendieck-Riemann-Roch


@register("deg1.ch_Vab", "Chern character of V_{a,b}", "8+(8a+16b)H+(4a^2+16ab+4b^2-12b-2)H^2")
def _ch_vab(ctx: CheckContext):
    cover = ctx.cover("deg1")
    return chern_engine.grr_ch(cover, chern_engine.degree1_bundle(cover))


@register("deg1.ch_Vab_samples", "Chern character of V_{a,b}", "true")
def _ch_vab_samples(ctx: CheckContext):
    cover = ctx.cover("deg1")
    symbolic = chern_engine.grr_ch(cover, chern_engine.degree1_bundle(cover))
    samples = list(ctx.samples())
    pairs = list(zip(samples, samples)) + list(zip(samples, reversed(samples)))
    return all(
        chern_engine.grr_ch(cover, chern_engine.degree1_bundle(cover, a, b)) == symbolic.substitute({A: a, B: b})
        for a, b in pairs
    )


@register("deg0.ch_L", "direct image of a line bundle, degree zero",
          "8+(8a+16b-32)H+(4a^2+16ab-8b^2-32a-16b+44)H^2")
def _ch_deg0(ctx: CheckContext):
    cover = ctx.cover("deg0")
    return chern_engine.grr_ch(cover, chern_engine.degree0_bundle(cover))


@register("deg0.ch2_line", "ch2 along the pencil E + 2F + m(E - 2F)", "{ch2: -24m^2+4, max: 4, at: [0]}")
def _deg0_line(ctx: CheckContext):
    value = chern_engine.degree0_ch2(ctx.cover("deg0"), M)
    best, where = chern_engine.integer_extremum(value, M)
    return {"ch2": value, "max": best, "at": where}


# Parabolic corrections


@register("deg1.ch1_par", "parabolic first Chern character, degree one", "(8a+16b-8)H")
def _ch1_par(ctx: CheckContext):
    cover = ctx.cover("deg1")
    return chern_engine.parabolic_ch1(chern_engine.degree1_family(cover), cover)


@register("deg1.delta", "discriminant of V_{0,b}", "{delta: (12b^2+12b+2)H^2, min: 2, at: [-1, 0], half: -H^2}")
def _deg1_delta(ctx: CheckContext):
    cover = ctx.cover("deg1")
    delta = chern_engine.delta_invariant(chern_engine.grr_ch(cover, chern_engine.degree1_bundle(cover, 0, B)))
    h = cover.target.ring.generators[0]
    best, where = chern_engine.integer_extremum(delta.coefficient(f"{h}^2"), B)
    return {"delta": delta, "min": best, "at": where, "half": delta.substitute({B: sp.Rational(-1, 2)})}


@register("deg1.delta_scan", "discriminant of V_{0,b}", "{min: 2, at: [-1, 0]}")
def _deg1_delta_scan(ctx: CheckContext):
    cover = ctx.cover("deg1")
    h = cover.target.ring.generators[0]
    values = {
        b: chern_engine.delta_invariant(
            chern_engine.grr_ch(cover, chern_engine.degree1_bundle(cover, 0, b))
        ).coefficient(f"{h}^2")
        for b in ctx.samples()
    }
    best = min(values.values())
    return {"min": best, "at": [b for b, v in values.items() if v == best]}


@register("deg1.twist_invariance", "discriminant is unchanged by twisting", "true")
def _twist_invariance(ctx: CheckContext):
    cover = ctx.cover("deg1")
    base = chern_engine.degree1_bundle(cover)
    delta = chern_engine.delta_invariant(chern_engine.grr_ch(cover, base))
    return all(
        chern_engine.delta_invariant(
            chern_engine.grr_ch(cover, chern_engine.twist_by_hyperplane(cover, base, k))
        ) == delta
        for k in ctx.samples()
    )


@register("tacnode.local", "local contribution at a tacnode", "-1/8")
def _tacnode_local(ctx: CheckContext):
    lattice = chern_engine.tacnode_lattice()
    return chern_engine.tacnode_local_ch2(chern_engine.tacnode_pieces(lattice), lattice)


@register("deg0.global_ch2", "tacnode corrections cancel the extremal ch2", "{raw: 4, correction: -4, total: 0}")
def _deg0_global(ctx: CheckContext):
    return chern_engine.degree0_global_ch2(ctx.cover("deg0"))


@register("uniqueness.ch1_par", "choices of parabolic level", "{mu_half: -2b+1, mu_one: -2b+2, admissible: [1/2, 1]}")
def _uniqueness_ch1(ctx: CheckContext):
    return chern_engine.ch1_constraints(ctx.cover("deg1"))


@register("uniqueness.ch1_relation", "choices of parabolic level", "8a+16b-16mu")
def _ch1_relation(ctx: CheckContext):
    return chern_engine.ch1_relation(ctx.cover("deg1"))


@register("uniqueness.parabolic_ch2", "uniqueness of the parabolic structure",
          "{c: -48b^2+48b+8, c_prime: -48b^2-48b+8, value: -48b^2+8, max: 8, at: [0]}")
def _uniqueness_ch2(ctx: CheckContext):
    values = chern_engine.parabolic_ch2_deg1(ctx.cover("deg1"))
    best, where = chern_engine.integer_extremum(values["value"], B)
    return {"c": values["c"], "c_prime": values["c_prime"], "value": values["value"], "max": best, "at": where}


@register("uniqueness.drinfeld", "Drinfeld bundles with trivial parabolic structure",
          "{value: -48m^2-48m-8, square_form: true, max: -8, at: [-1, 0]}")
def _drinfeld(ctx: CheckContext):
    values = chern_engine.drinfeld_mu1_ch2(ctx.cover("deg1"))
    return {
        "value": values["value"],
        "square_form": values["value"] == values["completed_square"],
        "max": values["max_on_integers"],
        "at": values["argmax"],
    }


# Wobbly normalization and the Kawamata cover


@register("wobbly.hyperplane_class", "hyperplane class on the normalization", "{H_D: C+16P, H_D_perp: C-16P, pairing: 0}")
def _wobbly_hyperplane(ctx: CheckContext):
    return chern_engine.hyperplane_class_on_wobbly_normalization()


@register("wobbly.u_degree", "degree of U_{a,b} on a hyperplane curve", "{degree: 64a+32b, at_origin: 0}")
def _u_degree(ctx: CheckContext):
    return {"degree": chern_engine.u_degree_on_section(), "at_origin": chern_engine.u_degree_on_section(0, 0)}


@register("kawamata.points", "singular points on the Kawamata cover",
          "{triple_pts: 8d, double_pts: 12d, R2: 64d, deg_N: -8d}")
def _kawamata_points(ctx: CheckContext):
    ledger = chern_engine.kawamata_bookkeeping(ctx.cover("deg1"), D)
    return {key: ledger[key] for key in ("triple_pts", "double_pts", "R2", "deg_N")}


@register("kawamata.characters", "Chern characters on the Kawamata cover",
          "{ch_iU: 8H+8d, ch_U_sharp: 8H-24d, ch2_VZ: -8d, ch_VZ_prime: 8-8H+16d, matches_flat: true}")
def _kawamata_characters(ctx: CheckContext):
    ledger = chern_engine.kawamata_bookkeeping(ctx.cover("deg1"), D)
    return {key: ledger[key] for key in ("ch_iU", "ch_U_sharp", "ch2_VZ", "ch_VZ_prime", "matches_flat")}


@register("kawamata.sharp", "length of the quotient in the sharp construction", "[false, true, true, true]")
def _kawamata_sharp(ctx: CheckContext):
    return [chern_engine.sharp_length_bound(ctx.cover("deg1"), ell, 1)[1] for ell in range(4)]


# Critical locus


@register("critical.discriminant", "relative critical locus", "{discriminant: r^4-4r^2, in_c: 0}")
def _critical_discriminant(ctx: CheckContext):
    r = sp.Symbol("r")
    quadratic = localforms.critical_quadratic(r, 1)
    c = quadratic.c
    return {"discriminant": quadratic.discriminant, "in_c": sp.expand(quadratic.discriminant - (c ** 2 - 4 * c))}


@register("critical.branches", "relative critical locus", "{0: 1, 1: 2, 2: 1, -2: 1, 3: 2, 1/2: 2}")
def _critical_branches(ctx: CheckContext):
    ratios = [0, 1, 2, -2, 3, sp.Rational(1, 2)]
    return {sp.sstr(r): localforms.critical_quadratic(r, 1).branch_count for r in ratios}


@register("critical.second_point", "relative critical locus at the second point", "{2: 1, -2: 1, 1: 2, 0: 2}")
def _critical_second(ctx: CheckContext):
    return {str(r): localforms.critical_quadratic_q_prime(r)["branch_count"] for r in (2, -2, 1, 0)}


@register("critical.leading_form", "relative critical locus", "{matches: true, lowest_degree: 2}")
def _critical_leading(ctx: CheckContext):
    values = localforms.critical_leading_form()
    return {"matches": sp.expand(values["leading"] - values["expected"]) == 0, "lowest_degree": values["lowest_degree"]}


# Local forms


def _pole_summary(report: localforms.LogReport) -> Dict[str, sp.Expr]:
    """Worst pole order per (entry, divisor)"""
    summary: Dict[str, sp.Expr] = {}
    for failure in report.failures:
        key = f"({failure.row},{failure.col}) {failure.divisor}"
        summary[key] = max(summary.get(key, 0), failure.pole_order)
    return dict(sorted(summary.items()))


@register("localforms.derivation", "the matrices of u, v, du and dv", "[]")
def _derivation(ctx: CheckContext):
    return [check.name for check in localforms.verify_derivation_identities() if not check.passed]


@register("localforms.corner_xa", "blow-up chart (x, a)", "{}")
def _corner_xa(ctx: CheckContext):
    return _pole_summary(localforms.corner_pole_report("xa"))


@register("localforms.corner_ab", "blow-up chart (a, b)", "{(1,1) a: 1}")
def _corner_ab(ctx: CheckContext):
    return _pole_summary(localforms.corner_pole_report("ab"))


@register("localforms.corner_alpha_beta", "root cover chart", "{(1,1) alpha: 2}")
def _corner_alpha_beta(ctx: CheckContext):
    return _pole_summary(localforms.corner_pole_report("alpha_beta"))


@register("localforms.unframed_du", "du before the change of frame", "{(4,1) alpha: 2}")
def _unframed(ctx: CheckContext):
    du = localforms.root_cover_matrices()["du_pulled"]
    return _pole_summary(localforms.is_logarithmic(du, (localforms.alpha, localforms.beta)))


@register("localforms.closure", "logarithmic Higgs field in the new frame", "{logarithmic: 8, total: 8}")
def _closure(ctx: CheckContext):
    reports = localforms.verify_full_higgs_closure()
    return {"logarithmic": sum(1 for r in reports.values() if r.passed), "total": len(reports)}


@register("localforms.framed_corner", "corner entry in the new frame",
          "{dalpha_part: 0, beta_part_times_denominator: 4, alpha_order: 0}")
def _framed_corner(ctx: CheckContext):
    alpha, beta = localforms.alpha, localforms.beta
    parts = localforms.root_cover_matrices()["du_f"].entry(3, 0)
    coefficient = 4 * parts.get(beta, 0)
    return {
        "dalpha_part": sp.cancel(4 * parts.get(alpha, 0)),
        "beta_part_times_denominator": sp.cancel(coefficient * (beta ** 4 - 1) / beta ** 2),
        "alpha_order": localforms.valuation(coefficient, alpha),
    }


# Genus bookkeeping


def _genus_check(label: str):
    def compute(ctx: CheckContext):
        return curves.riemann_hurwitz(ctx.presentations.curves[label])
    return compute


for _spec in curves.builtin_covers().values():
    register(f"curves.genus.{_spec.label}", "Riemann-Hurwitz", str(_spec.expected_genus))(
        _genus_check(_spec.label)
    )
del _spec


@register("curves.trigonal_branch_points", "trigonal map of the genus two curve", "8")
def _trigonal(ctx: CheckContext):
    return curves.ramification_points_required(0, 3, 2)


@register("curves.wobbly_section", "hyperplane section of the wobbly divisor",
          "{g_arith: 113, nodes: 48, cusps: 48, cusps_from_genus: 48, normalization: 17}")
def _wobbly_section(ctx: CheckContext):
    x1 = ctx.variety("X1")
    g_arith = curves.adjunction_genus(curves.wobbly_section(x1.ring.gen("H")))
    nodes = curves.node_count_on_section()
    cusps = curves.cusp_count_on_section()
    return {
        "g_arith": g_arith,
        "nodes": nodes,
        "cusps": cusps,
        "cusps_from_genus": curves.cusp_count_from_genus_deficit(g_arith, nodes),
        "normalization": curves.normalization_genus(g_arith, nodes, cusps),
    }


@register("curves.spectral_line", "spectral curve over a line",
          "{canonical_degree: 48, genus_adjunction: 25, genus_hurwitz: 25, branch_points: 64}")
def _spectral_line(ctx: CheckContext):
    return curves.spectral_curve_over_line_genus(ctx.cover("deg0"))


@register("curves.fiber_product", "the genus 65 curve both ways", "{via_ctilde: 65, via_cbar: 65}")
def _fiber_product(ctx: CheckContext):
    return curves.fiber_product_consistency()


# Kummer configuration


@register("kummer.16_6", "Kummer 16_6 configuration",
          "{nodes: 16, tropes: 16, row_sums: [6], column_sums: [6], incidences: 96, passed: true}")
def _kummer_16_6(ctx: CheckContext):
    return kummer.verify_16_6()


@register("kummer.lines", "lines through pairs of nodes on a trope",
          "[{lines: 15, distinct_partners: 15, partners_exclude_self: true}]")
def _kummer_lines(ctx: CheckContext):
    results = []
    for t in kummer.enumerate_tropes():
        result = kummer.trope_line_count(t)
        if result not in results:
            results.append(result)
    return results


@register("kummer.shared_nodes", "pairs of tropes", "{2: 120}")
def _kummer_shared(ctx: CheckContext):
    return dict(kummer.shared_node_counts())


@register("kummer.translation", "translation by 2-torsion points", "true")
def _kummer_translation(ctx: CheckContext):
    return kummer.translation_invariant()


@register("kummer.group", "2-torsion points as a group", "{order: 16, closed: true, involutions: true}")
def _kummer_group(ctx: CheckContext):
    nodes = kummer.enumerate_nodes()
    members = set(nodes)
    zero = kummer.node()
    return {
        "order": len(members),
        "closed": all(kummer.translate_node(n, g) in members for n, g in itertools.product(nodes, nodes)),
        "involutions": all(kummer.translate_node(n, n) == zero for n in nodes),
    }
