"""
Presentations of X0, X1, Y0, Y1 and the degree-8 modular spectral covers Y -> X
"""

import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, Iterable, List, Optional, Tuple

import sympy as sp

from .curves import CoverSpec, builtin_covers
from .exceptions import RingConstructionError, RingMismatchError
from .ring import (
    ONE,
    ChowPresentation,
    GradedClass,
    LocalSurfaceLattice,
    Monomial,
    RingMap,
    chern_from_ch,
    integrate,
    inverse_unit,
    make_ring,
    mul,
    pullback_map,
    todd_from_chern,
)


logger = logging.getLogger(__name__)

SPECTRAL_COVER_DEGREE = 8
# Genus of the curve Chat over which the exceptional divisor of Y1 is ruled
CHAT_GENUS = 65


@dataclass(frozen=True)
class VarietyPresentation:
    """Chow presentation together with the Chern data of the tangent bundle"""
    name: str
    ring: ChowPresentation
    tangent_c1: GradedClass
    tangent_c2: GradedClass
    todd: GradedClass

    @classmethod
    def from_chern(cls, name: str, ring: ChowPresentation, c1: GradedClass, c2: GradedClass,
                   todd: Optional[GradedClass] = None) -> "VarietyPresentation":
        computed = todd_from_chern(c1, c2)
        if todd is not None and todd.truncate(2) != computed.truncate(2):
            raise RingConstructionError(
                f"declared Todd class {todd} of {name} disagrees with {computed.truncate(2)}"
            )
        return cls(name, ring, c1, c2, computed)

    @property
    def dimension(self) -> int:
        return self.ring.dimension

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "generators": list(self.ring.generators),
            "dimension": self.dimension,
            "pairings": {self.ring.render_monomial(m): str(v) for m, v in self.ring.top_table},
            "c1": self.tangent_c1.render(),
            "c2": self.tangent_c2.render(),
            "todd": self.todd.render(),
        }


@dataclass(frozen=True)
class CoverPresentation:
    """Finite map f: Y -> X of the given degree with f*H and td(Y/X)"""
    name: str
    source: VarietyPresentation
    target: VarietyPresentation
    degree: int
    pullback_H: GradedClass
    relative_todd: GradedClass

    @classmethod
    def build(cls, name: str, source: VarietyPresentation, target: VarietyPresentation,
              degree: int, pullback_H: GradedClass) -> "CoverPresentation":
        if len(target.ring.generators) != 1:
            raise RingConstructionError(f"cover target {target.name} must have a single generator")
        if source.dimension != target.dimension:
            raise RingConstructionError(
                f"{source.name} and {target.name} have different dimensions"
            )
        if pullback_H.ring != source.ring:
            raise RingMismatchError(f"pullback class for {name} does not live on {source.name}")
        f_star = pullback_map(target.ring, source.ring, {target.ring.generators[0]: pullback_H})
        relative = mul(source.todd, f_star(inverse_unit(target.todd)))
        cover = cls(name, source, target, degree, pullback_H, relative)

        lhs, rhs = cover.degree_consistency()
        if lhs != rhs:
            logger.warning(
                f"Cover {name}: F^{source.dimension} = {lhs} but degree x H^{target.dimension} = {rhs}"
            )
        return cover

    @property
    def pullback(self) -> RingMap:
        return pullback_map(self.target.ring, self.source.ring,
                            {self.target.ring.generators[0]: self.pullback_H})

    def hyperplane(self) -> GradedClass:
        return self.target.ring.gen(self.target.ring.generators[0])

    def degree_consistency(self) -> Tuple[sp.Expr, sp.Expr]:
        n = self.source.dimension
        return integrate(self.pullback_H ** n), self.degree * integrate(self.hyperplane() ** n)

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "source": self.source.name,
            "target": self.target.name,
            "degree": self.degree,
            "pullback": self.pullback_H.render(),
        }


def pushforward(cover: CoverPresentation, a: GradedClass) -> GradedClass:
    """f_* by pairing duality: c0 = deg a0, c_k H^n = integral of a_k F^(n-k), normalised by H^n"""
    if a.ring != cover.source.ring:
        raise RingMismatchError(f"class lives on {a.ring.name}, cover starts at {cover.source.name}")
    x_ring = cover.target.ring
    h = x_ring.generators[0]
    n = x_ring.dimension
    top = integrate(cover.hyperplane() ** n)

    terms = {ONE: cover.degree * a.constant}
    for k in range(1, n + 1):
        pairing = integrate(mul(a.part(k), cover.pullback_H ** (n - k)))
        terms[Monomial.of(*[h] * k)] = pairing / top
    return x_ring.element(terms)


def projective_space(n: int, name: str = "") -> VarietyPresentation:
    """P^n with c(T) = (1 + H)^(n+1)"""
    return complete_intersection(n, (), name=name or f"P{n}")


def complete_intersection(n: int, degrees: Iterable[int], name: str = "") -> VarietyPresentation:
    """Complete intersection of the given degrees in P^n, c(T) = (1+H)^(n+1) / prod(1 + d_i H)"""
    degrees = tuple(degrees)
    dimension = n - len(degrees)
    top = reduce(lambda x, y: x * y, degrees, 1)
    ring = make_ring(["H"], dimension, {f"H^{dimension}": top}, name=name or f"CI{degrees}")
    h = ring.gen("H")
    ambient = (ring.one() + h) ** (n + 1)
    normal = reduce(mul, [ring.one() + h * d for d in degrees], ring.one())
    total = mul(ambient, inverse_unit(normal))
    return VarietyPresentation.from_chern(ring.name, ring, total.part(1), total.part(2))


def _degree1_ring() -> ChowPresentation:
    return make_ring(["E", "F"], 3, {"F^3": 32, "EF^2": 64, "E^2F": 32, "E^3": -128}, name="Y1")


def _degree0_ring() -> ChowPresentation:
    return make_ring(["E", "F"], 3, {"F^3": 8, "EF^2": 16, "E^2F": -16, "E^3": 16}, name="Y0")


def normal_bundle_degree() -> Dict[str, sp.Expr]:
    """delta = deg N of the curve Chat in the Prym, from its genus and from -E^3"""
    y1 = _degree1_ring()
    e = y1.gen("E")
    return {"from_genus": sp.Integer(2 * CHAT_GENUS - 2), "from_E3": -integrate(e ** 3)}


def fibre_class_pairing(ring: ChowPresentation) -> sp.Expr:
    """(E + F).E is a sum of ruling fibres; each meets F once, so this counts them"""
    e, f = ring.gen("E"), ring.gen("F")
    return integrate(mul(mul(e + f, e), f))


def derive_degree1_tangent_c2() -> GradedClass:
    """c2(TY1) = delta fib - E^2 with fib = (E+F).E / 96"""
    ring = _degree1_ring()
    e, f = ring.gen("E"), ring.gen("F")
    delta = normal_bundle_degree()["from_genus"]
    fib = mul(e + f, e) / fibre_class_pairing(ring)
    return fib * delta - mul(e, e)


def _degree0_tangent() -> Tuple[GradedClass, GradedClass]:
    ring = _degree0_ring()
    e = ring.gen("E")
    # ch(TY0) = 3 - 2E + 2E^2
    return chern_from_ch(ring.scalar(3) - e * 2 + mul(e, e) * 2)


@dataclass
class Presentations:
    """Named varieties, finite covers and curve covers available to checks"""
    varieties: Dict[str, VarietyPresentation] = field(default_factory=dict)
    covers: Dict[str, CoverPresentation] = field(default_factory=dict)
    curves: Dict[str, CoverSpec] = field(default_factory=dict)

    def variety(self, name: str) -> VarietyPresentation:
        try:
            return self.varieties[name]
        except KeyError:
            raise KeyError(f"no variety named {name}") from None

    def cover(self, name: str) -> CoverPresentation:
        try:
            return self.covers[name]
        except KeyError:
            raise KeyError(f"no cover named {name}") from None

    def merge(self, other: "Presentations") -> "Presentations":
        """Entries of other replace entries of the same name"""
        return Presentations(
            varieties={**self.varieties, **other.varieties},
            covers={**self.covers, **other.covers},
            curves={**self.curves, **other.curves},
        )

    def pairs(self) -> List[Tuple[VarietyPresentation, CoverPresentation]]:
        """(source variety, cover) for every cover"""
        return [(cover.source, cover) for cover in self.covers.values()]


def builtin_presentations() -> Presentations:
    """X1 = (2,2) in P5, X0 = P3, the blown-up Pryms Y1, Y0 and both degree-8 covers"""
    x1 = complete_intersection(5, (2, 2), name="X1")
    x0 = projective_space(3, name="X0")

    y1_ring = _degree1_ring()
    e = y1_ring.gen("E")
    y1 = VarietyPresentation.from_chern("Y1", y1_ring, -e, derive_degree1_tangent_c2())

    y0_ring = _degree0_ring()
    c1, c2 = _degree0_tangent()
    y0 = VarietyPresentation.from_chern("Y0", y0_ring, c1, c2)

    deg1 = CoverPresentation.build("deg1", y1, x1, SPECTRAL_COVER_DEGREE, y1_ring.gen("F"))
    deg0 = CoverPresentation.build("deg0", y0, x0, SPECTRAL_COVER_DEGREE, y0_ring.gen("F"))

    logger.debug("Built-in presentations ready")
    return Presentations(
        varieties={v.name: v for v in (x0, x1, y0, y1)},
        covers={c.name: c for c in (deg1, deg0)},
        curves=builtin_covers(),
    )


def wobbly_class(cover: CoverPresentation) -> GradedClass:
    """[Wob] = f_*(E) / 2, the exceptional divisor mapping 2:1 onto the wobbly locus"""
    e = cover.source.ring.gen("E")
    return pushforward(cover, e) / 2


def ruled_surface_lattice() -> LocalSurfaceLattice:
    """Classes fib and chat on the ruled surface over Chat: fib^2 = chat^2 = 0, fib.chat = 1"""
    return LocalSurfaceLattice.build(("f", "c"), ((0, 1), (1, 0)))


def verify_e3_from_ruled_surface(fibres: int = 64) -> Dict[str, sp.Expr]:
    """E|_E = (64 fib - chat), so E^3 is its self-intersection"""
    lattice = ruled_surface_lattice()
    restriction = lattice.element({"f": fibres, "c": -1})
    section = lattice.element({"c": 1, "f": fibres // 2})
    return {
        "E3": lattice.square(restriction),
        "section_square": lattice.square(section),
    }
