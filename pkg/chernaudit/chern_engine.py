"""
Grothendieck-Riemann-Roch for the spectral covers and the parabolic corrections built on it
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy as sp
from sympy.solvers.diophantine import diophantine

from .curves import WOBBLY_SECTION_CUSPS, WOBBLY_SECTION_NODES, normalization_lattice
from .exceptions import DegreeError, ParabolicFamilyError
from .ring import (
    A,
    B,
    D,
    M,
    MU,
    ChowPresentation,
    GradedClass,
    LocalSurfaceLattice,
    Scalar,
    exp_class,
    integrate,
    make_ring,
    mul,
    render_scalar,
    to_coefficient,
)
from .varieties import CoverPresentation, pushforward


logger = logging.getLogger(__name__)

# Tacnodes where trope conics touch the Kummer quartic, per plane section
TACNODES_PER_SECTION = 32
# Rank of U_{a,b} and of the direct image V_{a,b}
U_RANK = 2
V_RANK = 8


@dataclass(frozen=True)
class LineBundleClass:
    """Line bundle on Y given by an integral divisor class in E and F"""
    divisor: GradedClass
    label: str = ""

    def __post_init__(self):
        if not self.divisor.is_homogeneous(1):
            raise DegreeError(f"line bundle divisor must have degree 1, got {self.divisor}")
        for _, coefficient in self.divisor.terms:
            if not _is_integral(coefficient):
                raise DegreeError(f"non-integral coefficient {coefficient} in {self.label or self.divisor}")

    def twist(self, other: GradedClass, label: str = "") -> "LineBundleClass":
        return LineBundleClass(self.divisor + other, label or self.label)

    def render(self) -> str:
        return self.label or self.divisor.render()


def _is_integral(coefficient: sp.Expr) -> bool:
    if coefficient.is_Rational:
        return coefficient.is_Integer
    symbols = sorted(coefficient.free_symbols, key=str)
    try:
        return all(c.is_Integer for c in sp.Poly(coefficient, *symbols).coeffs())
    except sp.PolynomialError:
        return False


def line_bundle(cover: CoverPresentation, f_coefficient: Scalar, e_coefficient: Scalar,
                label: str = "") -> LineBundleClass:
    """O_Y(f F + e E)"""
    ring = cover.source.ring
    divisor = ring.gen("F") * f_coefficient + ring.gen("E") * e_coefficient
    return LineBundleClass(divisor, label)


def degree1_bundle(cover: CoverPresentation, a: Scalar = A, b: Scalar = B) -> LineBundleClass:
    """L_{a,b} = O(aF + (b+1)E) on Y1, whose direct image is V_{a,b}"""
    return line_bundle(cover, a, to_coefficient(b) + 1, label=f"L_{{{a},{b}}}")


def degree0_bundle(cover: CoverPresentation, a: Scalar = A, b: Scalar = B) -> LineBundleClass:
    """O(aF + bE) on Y0"""
    return line_bundle(cover, a, b, label=f"O({a}F+{b}E)")


@dataclass(frozen=True)
class ParabolicPiece:
    """Filtration step at a weight in [0, 1); twist holds a rational divisor, if any"""
    level: sp.Rational
    bundle: LineBundleClass
    twist: Optional[GradedClass] = None

    @property
    def divisor(self) -> GradedClass:
        if self.twist is None:
            return self.bundle.divisor
        return self.bundle.divisor + self.twist


@dataclass(frozen=True)
class ParabolicFamily:
    pieces: Tuple[ParabolicPiece, ...]

    @classmethod
    def of(cls, *pairs: Tuple[Union[int, Fraction, sp.Expr], LineBundleClass]) -> "ParabolicFamily":
        return cls(tuple(ParabolicPiece(sp.Rational(level), bundle) for level, bundle in pairs))

    def __post_init__(self):
        if not self.pieces:
            raise ParabolicFamilyError("parabolic family has no pieces")
        levels = [p.level for p in self.pieces]
        for level in levels:
            if not (0 <= level < 1):
                raise ParabolicFamilyError(f"level {level} outside [0, 1)")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ParabolicFamilyError(f"levels {levels} are not strictly increasing")

    def lengths(self) -> List[sp.Rational]:
        """Measure of the weight interval on which each piece is the graded part"""
        levels = [p.level for p in self.pieces] + [sp.Integer(1) + self.pieces[0].level]
        return [b - a for a, b in zip(levels, levels[1:])]


def grr_ch(cover: CoverPresentation, bundle: LineBundleClass, full: bool = False) -> GradedClass:
    """ch(f_* L) = f_*(td(Y/X) ch(L)), by default through codimension two"""
    integrand = mul(cover.relative_todd, exp_class(bundle.divisor))
    ch = pushforward(cover, integrand)
    logger.debug(f"GRR on {cover.name} for {bundle.render()}: {ch}")
    return ch if full else ch.truncate(2)


def parabolic_ch1(family: ParabolicFamily, cover: CoverPresentation) -> GradedClass:
    """Average of ch1 of the graded pieces over the weight interval"""
    total = cover.target.ring.zero()
    for piece, length in zip(family.pieces, family.lengths()):
        total = total + grr_ch(cover, piece.bundle).part(1) * length
    return total


def parabolic_ch2(family: ParabolicFamily, cover: CoverPresentation) -> GradedClass:
    """Step-function average of ch2 (the midpoint rule for two levels 0 and 1/2)"""
    total = cover.target.ring.zero()
    for piece, length in zip(family.pieces, family.lengths()):
        total = total + grr_ch(cover, piece.bundle).part(2) * length
    return total


def degree1_family(cover: CoverPresentation, a: Scalar = A, b: Scalar = B,
                   level: Scalar = sp.Rational(1, 2)) -> ParabolicFamily:
    """{0: V'_{a,b} = V_{a,b-1}, level: V_{a,b}}"""
    b = to_coefficient(b)
    return ParabolicFamily.of(
        (0, degree1_bundle(cover, a, b - 1)),
        (level, degree1_bundle(cover, a, b)),
    )


def hyperplane_degree(ch: GradedClass, k: int) -> sp.Expr:
    """H^(n-k).ch_k as a number"""
    ring = ch.ring
    h = ring.gen(ring.generators[0])
    return integrate(mul(h ** (ring.dimension - k), ch.part(k)))


def delta_invariant(ch: GradedClass, rank: Scalar = V_RANK) -> GradedClass:
    """c1^2/(2r) - ch2, unchanged by twisting with a line bundle"""
    c1 = ch.part(1)
    return (mul(c1, c1) / (2 * sp.sympify(rank))).part(2) - ch.part(2)


def twist_by_hyperplane(cover: CoverPresentation, bundle: LineBundleClass, k: Scalar) -> LineBundleClass:
    """L tensor f^* O_X(k)"""
    return bundle.twist(cover.pullback_H * k)


def integer_extremum(polynomial: sp.Expr, variable: sp.Symbol) -> Tuple[sp.Expr, List[int]]:
    """Extreme value of a quadratic over the integers and where it is attained"""
    poly = sp.Poly(polynomial, variable)
    if poly.degree() != 2:
        raise DegreeError(f"expected a quadratic in {variable}, got {polynomial}")
    lead = poly.LC()
    vertex = -poly.coeff_monomial(variable) / (2 * lead)
    candidates = sorted({int(sp.floor(vertex)), int(sp.ceiling(vertex))})
    values = {n: polynomial.subs(variable, n) for n in candidates}
    best = max(values.values()) if lead < 0 else min(values.values())
    return best, [n for n in candidates if values[n] == best]


def parabolic_ch2_deg1(cover: CoverPresentation, b: Scalar = B) -> Dict[str, sp.Expr]:
    """H.ch2^par along the line a = 1 - 2b, as c(b) + dc(b)/2"""
    a = 1 - 2 * B
    c = hyperplane_degree(grr_ch(cover, degree1_bundle(cover, a, B - 1)), 2)
    c_prime = hyperplane_degree(grr_ch(cover, degree1_bundle(cover, a, B)), 2)
    delta_c = to_coefficient(c_prime - c)
    midpoint = to_coefficient(c + delta_c / 2)
    # the family is only determined up to terms constant in b
    values = {
        "c": c,
        "c_prime": c_prime,
        "delta_c": delta_c,
        "value": midpoint,
        "modulo_constants": to_coefficient(midpoint - midpoint.subs(B, 0)),
    }
    b = to_coefficient(b)
    if b == B:
        return values
    return {key: to_coefficient(value.subs(B, b)) for key, value in values.items()}


def drinfeld_mu1_ch2(cover: CoverPresentation, m: Scalar = M) -> Dict[str, object]:
    """H.ch2 of the direct image of O(-2mF + (m+1)E), trivial parabolic structure"""
    m = to_coefficient(m)
    bundle = line_bundle(cover, -2 * m, m + 1)
    family = ParabolicFamily.of((0, bundle))
    ch2 = parabolic_ch2(family, cover)
    value = hyperplane_degree(ch2, 2)
    result: Dict[str, object] = {"value": value}
    if value.has(M):
        result["completed_square"] = to_coefficient(-48 * (M + sp.Rational(1, 2)) ** 2 + 4)
        result["max_on_integers"], result["argmax"] = integer_extremum(value, M)
    return result


def ch1_relation(cover: CoverPresentation) -> sp.Expr:
    """H-coefficient of ch1^par for the family {0: V_{a,b-1}, mu: V_{a,b}}, mu symbolic"""
    lower = grr_ch(cover, degree1_bundle(cover, A, B - 1)).part(1)
    upper = grr_ch(cover, degree1_bundle(cover, A, B)).part(1)
    h = cover.target.ring.generators[0]
    combined = lower * MU + upper * (1 - MU)
    return combined.coefficient(h)


def admissible_levels(cover: CoverPresentation, max_denominator: int = 12) -> List[sp.Rational]:
    """Levels mu in (0, 1] for which ch1^par = 0 has an integral solution (a, b)"""
    relation = ch1_relation(cover)
    found = set()
    for q in range(1, max_denominator + 1):
        for p in range(1, q + 1):
            mu = sp.Rational(p, q)
            numerator, _ = sp.fraction(sp.together(relation.subs(MU, mu)))
            if diophantine(sp.expand(numerator), syms=(A, B)):
                found.add(mu)
    levels = sorted(found)
    logger.debug(f"Admissible parabolic levels: {levels}")
    return levels


def ch1_constraints(cover: CoverPresentation) -> Dict[str, object]:
    """Solve ch1^par = 0 for a at mu = 1/2 and mu = 1"""
    relation = ch1_relation(cover)
    mu_half = sp.solve(relation.subs(MU, sp.Rational(1, 2)), A)[0]
    mu_one = sp.solve(relation.subs(MU, 1), A)[0]
    return {
        "mu_half": to_coefficient(mu_half),
        "mu_one": to_coefficient(mu_one),
        "admissible": admissible_levels(cover),
    }


def tacnode_lattice() -> LocalSurfaceLattice:
    """Curves A and B at a blown-up tacnode: A^2 = -2, B^2 = -1, AB = 1"""
    return LocalSurfaceLattice.build(("A", "B"), ((-2, 1), (1, -1)))


def tacnode_pieces(lattice: LocalSurfaceLattice, scale: Scalar = 1) -> Tuple[ParabolicPiece, ...]:
    """P1 = -A/4 - B/2, P2 = P3 = 0, P4 = A/4 + B/2 at levels 0, 1/4, 1/2, 3/4"""
    trivial = LineBundleClass(lattice.ring.zero(), label="O")
    p = lattice.element({"A": sp.Rational(1, 4), "B": sp.Rational(1, 2)}) * scale
    twists = (-p, lattice.ring.zero(), lattice.ring.zero(), p)
    return tuple(
        ParabolicPiece(sp.Rational(i, 4), trivial, twist) for i, twist in enumerate(twists)
    )


def tacnode_local_ch2(pieces: Sequence[ParabolicPiece], lattice: LocalSurfaceLattice) -> sp.Expr:
    """Sum of P_i^2 / 2 in the local lattice"""
    return to_coefficient(sum((lattice.square(piece.divisor) / 2 for piece in pieces), sp.Integer(0)))


def degree0_ch2(cover: CoverPresentation, m: Scalar = M) -> sp.Expr:
    """H^2-coefficient of ch2 of the direct image of O(E + 2F + m(E - 2F))"""
    m = to_coefficient(m)
    ch = grr_ch(cover, line_bundle(cover, 2 - 2 * m, 1 + m))
    return hyperplane_degree(ch, 2) / integrate(cover.hyperplane() ** cover.target.dimension)


def degree0_global_ch2(cover: CoverPresentation, m: Scalar = 0) -> Dict[str, sp.Expr]:
    """Raw ch2 plus one local tacnode correction per tacnode"""
    raw = degree0_ch2(cover, m)
    local = tacnode_local_ch2(tacnode_pieces(tacnode_lattice()), tacnode_lattice())
    correction = TACNODES_PER_SECTION * local
    return {"raw": raw, "correction": correction, "total": to_coefficient(raw + correction)}


# Restrictions to the normalization D = Cbar x P1 of the wobbly divisor


def hyperplane_class_on_wobbly_normalization() -> Dict[str, GradedClass]:
    """H_D = [Cbar] + y[P1] from H_D.[P1] = 1 and H_D^2 = 32, and its orthogonal complement"""
    lattice = normalization_lattice()
    x, y, z = sp.symbols("x y z")
    cbar, line = lattice.ring.gen("C"), lattice.ring.gen("P")
    candidate = cbar * x + line * y
    solutions = sp.solve(
        [lattice.pair(candidate, line) - 1, lattice.square(candidate) - 32], [x, y], dict=True
    )
    hd = candidate.substitute(solutions[0])
    perp_candidate = cbar + line * z
    z_value = sp.solve(lattice.pair(hd, perp_candidate), z)[0]
    perp = perp_candidate.substitute({z: z_value})
    return {"H_D": hd, "H_D_perp": perp, "pairing": lattice.pair(hd, perp)}


def u_character_on_normalization(a: Scalar = A, b: Scalar = B) -> GradedClass:
    """ch(U_{a,b}) = 2 + (2a+b) H_D - (3b+2) H_D_perp on D"""
    classes = hyperplane_class_on_wobbly_normalization()
    a, b = to_coefficient(a), to_coefficient(b)
    return classes["H_D"] * (2 * a + b) - classes["H_D_perp"] * (3 * b + 2) + U_RANK


def u_degree_on_section(a: Scalar = A, b: Scalar = B, k: Scalar = 1) -> sp.Expr:
    """deg U_{a,b} restricted to a curve in |k H_D|"""
    lattice = normalization_lattice()
    hd = hyperplane_class_on_wobbly_normalization()["H_D"]
    c1 = u_character_on_normalization(a, b).part(1)
    return lattice.pair(c1, hd * k)


# Kawamata cover Z -> X_H of degree d


@dataclass(frozen=True)
class SurfaceCharacter:
    """Chern character on Z: rank + h H + (points) [pt]"""
    rank: sp.Expr
    h: sp.Expr
    points: sp.Expr

    @classmethod
    def of(cls, rank: Scalar = 0, h: Scalar = 0, points: Scalar = 0) -> "SurfaceCharacter":
        return cls(to_coefficient(rank), to_coefficient(h), to_coefficient(points))

    def __add__(self, other: "SurfaceCharacter") -> "SurfaceCharacter":
        return SurfaceCharacter.of(self.rank + other.rank, self.h + other.h, self.points + other.points)

    def __sub__(self, other: "SurfaceCharacter") -> "SurfaceCharacter":
        return SurfaceCharacter.of(self.rank - other.rank, self.h - other.h, self.points - other.points)

    def add_points(self, length: Scalar) -> "SurfaceCharacter":
        return SurfaceCharacter.of(self.rank, self.h, self.points + to_coefficient(length))

    def as_class(self, ring) -> GradedClass:
        """rank + hH + points/H^2 . H^2 on a ring with a single generator H"""
        h = ring.gen("H")
        h_squared = integrate(mul(h, h))
        return ring.scalar(self.rank) + h * self.h + mul(h, h) * (self.points / h_squared)

    def render(self) -> str:
        z = ring_z()
        head = (z.scalar(self.rank) + z.gen("H") * self.h).render()
        if self.points == 0:
            return head
        points = render_scalar(self.points)
        if head == "0":
            return points
        return head + (points if points.startswith("-") else f"+{points}")


def ring_z(degree: Scalar = D) -> ChowPresentation:
    """The surface Z with H^2 = 4d points"""
    return make_ring(["H"], 2, {"H^2": 4 * to_coefficient(degree)}, name="Z")


def kawamata_bookkeeping(cover: CoverPresentation, d: Scalar = D) -> Dict[str, object]:
    """Chern character ledger on the Kawamata cover Z of the hyperplane section"""
    d = to_coefficient(d)
    triple_pts = WOBBLY_SECTION_CUSPS * d / 6
    double_pts = WOBBLY_SECTION_NODES * d / 4
    hyperplane_points = integrate(cover.hyperplane() ** cover.target.dimension)
    r_squared = 16 * hyperplane_points * d
    deg_n = r_squared - 2 * double_pts - 6 * triple_pts

    # (a, b) = (0, 0)
    u_degree = u_degree_on_section(0, 0)
    ch_iu = SurfaceCharacter.of(0, 8, u_degree - U_RANK * deg_n / 2)
    ch_u_sharp = ch_iu.add_points(-2 * U_RANK * triple_pts)

    v00 = grr_ch(cover, degree1_bundle(cover, 0, 0))
    h = cover.target.ring.generators[0]
    ch_vz = SurfaceCharacter.of(
        V_RANK, v00.coefficient(h), v00.coefficient(f"{h}^2") * hyperplane_points * d
    )
    ch_vz_prime = ch_vz - ch_u_sharp

    z = ring_z(d)
    flat = exp_class(-z.gen("H")) * V_RANK
    return {
        "triple_pts": to_coefficient(triple_pts),
        "double_pts": to_coefficient(double_pts),
        "R2": to_coefficient(r_squared),
        "deg_N": to_coefficient(deg_n),
        "ch_iU": ch_iu,
        "ch_U_sharp": ch_u_sharp,
        "ch2_VZ": ch_vz.points,
        "ch_VZ_prime": ch_vz_prime,
        "matches_flat": ch_vz_prime.as_class(z) == flat,
    }


def sharp_length_bound(cover: CoverPresentation, ell: int, d: Scalar = D) -> Tuple[SurfaceCharacter, bool]:
    """ch(V'_Z) if the image misses a quotient of total length ell; True flags a Bogomolov-Gieseker violation"""
    if ell < 0:
        raise ValueError(f"length must be nonnegative, got {ell}")
    ledger = kawamata_bookkeeping(cover, d)
    character = ledger["ch_VZ_prime"].add_points(ell)
    z = ring_z(d)
    as_class = character.as_class(z)
    discriminant = integrate(delta_invariant(as_class, V_RANK))
    violation = bool(sp.simplify(discriminant) < 0) if discriminant.is_number else ell > 0
    return character, violation
