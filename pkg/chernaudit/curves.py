"""
Genus bookkeeping: Riemann-Hurwitz, adjunction, and nodes/cusps on hyperplane sections
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import sympy as sp

from .exceptions import GenusError, ParityError
from .ring import GradedClass, LocalSurfaceLattice, integrate, mul


logger = logging.getLogger(__name__)

# Singular points of the wobbly hyperplane section (one delta each)
WOBBLY_SECTION_NODES = 48
WOBBLY_SECTION_CUSPS = 48
WOBBLY_NORMALIZATION_GENUS = 17


@dataclass(frozen=True)
class CoverSpec:
    """Branched cover of curves: base genus, degree and the ramification indices upstairs"""
    base_genus: int
    degree: int
    ram_indices: Tuple[int, ...] = ()
    label: str = ""
    expected_genus: Optional[int] = None

    def __post_init__(self):
        if self.base_genus < 0:
            raise ValueError(f"base genus must be nonnegative, got {self.base_genus}")
        if self.degree < 1:
            raise ValueError(f"degree must be positive, got {self.degree}")
        for e in self.ram_indices:
            if e < 2 or e > self.degree:
                raise ValueError(f"ramification index {e} outside 2..{self.degree}")

    @property
    def ramification_total(self) -> int:
        return sum(e - 1 for e in self.ram_indices)

    def euler_term(self) -> int:
        """2g - 2 of the cover"""
        return self.degree * (2 * self.base_genus - 2) + self.ramification_total

    def render(self) -> str:
        return f"CoverSpec(g={self.base_genus}, n={self.degree}, ram={list(self.ram_indices)})"


def riemann_hurwitz(spec: CoverSpec) -> int:
    """Genus g with 2g - 2 = n(2g_base - 2) + sum(e - 1)"""
    total = spec.euler_term()
    if total % 2:
        raise ParityError(f"2g-2 = {total} is odd for {spec.render()}")
    genus = total // 2 + 1
    if genus < 0:
        raise GenusError(f"negative genus {genus} for {spec.render()}")
    logger.debug(f"Riemann-Hurwitz {spec.render()} -> g={genus}")
    return genus


def ramification_points_required(base_genus: int, degree: int, genus: int) -> int:
    """Number of simple ramification points a cover with these genera must have"""
    count = (2 * genus - 2) - degree * (2 * base_genus - 2)
    if count < 0:
        raise GenusError(f"no cover of degree {degree} from genus {genus} to genus {base_genus}")
    return count


@dataclass(frozen=True)
class PlaneCurveOnSurface:
    """Curve class S on a surface with canonical class K.

    When section is given, the surface is the hyperplane section of a
    threefold and D1.D2 on the surface is the threefold pairing of
    section.D1.D2; otherwise the classes live on a surface presentation.
    """
    surface_canonical: GradedClass
    curve_class: GradedClass
    section: Optional[GradedClass] = None

    def pair(self, x: GradedClass, y: GradedClass) -> sp.Expr:
        product = mul(x, y)
        if self.section is not None:
            product = mul(self.section, product)
        return integrate(product)

    def canonical_degree(self) -> sp.Expr:
        """deg K_S = (K + S).S"""
        return self.pair(self.surface_canonical + self.curve_class, self.curve_class)


def adjunction_genus(curve: PlaneCurveOnSurface) -> int:
    degree = curve.canonical_degree()
    if not degree.is_Integer or degree % 2:
        raise GenusError(f"(K+S).S = {degree} does not give an integral genus")
    genus = int(degree) // 2 + 1
    if genus < 0:
        raise GenusError(f"negative arithmetic genus {genus}")
    return genus


def normalization_genus(g_arith: int, nodes: int, cusps: int) -> int:
    """Geometric genus after resolving ordinary nodes and cusps"""
    genus = g_arith - nodes - cusps
    if genus < 0:
        raise GenusError(f"{nodes} nodes and {cusps} cusps exceed arithmetic genus {g_arith}")
    return genus


def wobbly_section(ambient_hyperplane: GradedClass, multiple: int = 8) -> PlaneCurveOnSurface:
    """The wobbly curve in |8H| on a hyperplane section X_H with K = -H"""
    h = ambient_hyperplane
    return PlaneCurveOnSurface(surface_canonical=-h, curve_class=h * multiple, section=h)


def normalization_lattice() -> LocalSurfaceLattice:
    """Curve classes [Cbar] and [P1] on Cbar x P1"""
    return LocalSurfaceLattice.build(("C", "P"), ((0, 1), (1, 0)))


def cusp_count_on_section(graph_degree: int = 32, hd_coefficients: Tuple[int, int] = (1, 16)) -> int:
    """Graph of the degree-32 map Cbar -> P1 meets H_D = [Cbar] + 16[P1] in the cusps"""
    lattice = normalization_lattice()
    graph = lattice.element({"C": 1, "P": graph_degree})
    hd = lattice.element({"C": hd_coefficients[0], "P": hd_coefficients[1]})
    return int(lattice.pair(graph, hd))


def node_count_on_section(curves: int = 6, points_per_curve: int = 16) -> int:
    """Each Cbar x {x_i} meets the section in 16 points, glued in pairs"""
    total = curves * points_per_curve
    if total % 2:
        raise GenusError(f"{total} points cannot be glued in pairs")
    return total // 2


def cusp_count_from_genus_deficit(g_arith: int = 113, nodes: int = WOBBLY_SECTION_NODES,
                                  normalized: int = WOBBLY_NORMALIZATION_GENUS) -> int:
    return (g_arith - nodes) - normalized


def spectral_curve_over_line_genus(cover) -> Dict[str, int]:
    """Genus of the preimage of a general line under the modular spectral cover Y0 -> X0.

    First derivation: 2g - 2 = (K_Y + N).curve with K_Y = -c1(TY) and
    N = O(F) + O(F), the curve being F^2. Second derivation: Riemann-Hurwitz
    over the line with 64 simple branch points.
    """
    f = cover.pullback_H
    curve = mul(f, f)
    canonical = integrate(mul(-cover.source.tangent_c1, curve))
    normal = integrate(mul(f * 2, curve))
    euler = int(canonical + normal)
    if euler % 2:
        raise ParityError(f"canonical degree {euler} of the spectral curve is odd")
    by_adjunction = euler // 2 + 1

    branch_points = spectral_branch_points()
    by_hurwitz = riemann_hurwitz(CoverSpec(0, cover.degree, (2,) * branch_points))
    return {
        "canonical_degree": euler,
        "genus_adjunction": by_adjunction,
        "genus_hurwitz": by_hurwitz,
        "branch_points": branch_points,
    }


def spectral_branch_points(tropes: int = 16, kummer_points: int = 4, kummer_weight: int = 4,
                           movable: int = 32) -> int:
    """Branch points over a line: trope planes, the Kummer quartic counted 4 times, and the rest"""
    return tropes + kummer_points * kummer_weight + movable


def fiber_product_consistency() -> Dict[str, int]:
    """Both routes to the genus-65 curve in the fiber square must agree"""
    etale = riemann_hurwitz(CoverSpec(5, 16, (), label="Chat -> Ctilde"))
    double = riemann_hurwitz(CoverSpec(17, 2, (2,) * 64, label="Chat -> Cbar"))
    return {"via_ctilde": etale, "via_cbar": double}


def builtin_covers() -> Dict[str, CoverSpec]:
    """The curve covers whose genera the moduli computations rely on"""
    specs = [
        CoverSpec(2, 2, (2,) * 4, label="spectral", expected_genus=5),
        CoverSpec(2, 16, (), label="cbar", expected_genus=17),
        CoverSpec(5, 16, (), label="chat", expected_genus=65),
        CoverSpec(17, 2, (2,) * 64, label="chat_over_cbar", expected_genus=65),
        CoverSpec(0, 3, (2,) * 8, label="trigonal", expected_genus=2),
        CoverSpec(0, 8, (2,) * 64, label="spectral_line", expected_genus=25),
    ]
    return {spec.label: spec for spec in specs}
