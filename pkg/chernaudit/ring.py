"""
Truncated graded commutative algebra over exact rationals.

A ChowPresentation fixes divisor generators (all of degree 1), a
truncation degree equal to the variety dimension, and the intersection
numbers of every top-degree monomial. GradedClass values are formal sums
of monomials with exact coefficients; coefficients may also be
polynomials in the parameters a, b, m, d, mu so that identities can be
checked symbolically rather than at sample points.
"""

import itertools
import logging
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

import sympy as sp
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)

from .exceptions import (
    DegreeError,
    NotAUnitError,
    RingConstructionError,
    RingMismatchError,
)


logger = logging.getLogger(__name__)

# Parameters that may appear inside coefficients as polynomial indeterminates
A, B, M, D, MU = sp.symbols("a b m d mu")
PARAMETERS: Tuple[sp.Symbol, ...] = (A, B, M, D, MU)
PARAMETER_NAMES: Dict[str, sp.Symbol] = {str(p): p for p in PARAMETERS}

Scalar = Union[int, Fraction, sp.Expr]

_TRANSFORMATIONS = standard_transformations + (implicit_multiplication_application, convert_xor)

# "2E" would reach the tokenizer as the float literal 2E+1
_COEFFICIENT_ADJACENCY = re.compile(r"(?<![A-Za-z_\d.])(\d+)\s*(?=[A-Za-z_(])")


def _explicit_products(text: str) -> str:
    """'1-1/2E+1/9E^2F' -> '1-1/2*E+1/9*E^2*F'"""
    return _COEFFICIENT_ADJACENCY.sub(r"\1*", text)


def to_coefficient(value: Scalar) -> sp.Expr:
    """Sympify a coefficient and bring it to canonical (expanded) form"""
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not allowed")
    coefficient = sp.sympify(value)
    if coefficient.is_Rational:
        return coefficient
    if coefficient.has(sp.Float):
        raise TypeError(f"floating point inside coefficient {coefficient}")
    return sp.expand(coefficient)


def _is_scalar(value) -> bool:
    return isinstance(value, (int, Fraction, sp.Basic)) and not isinstance(value, bool)


def render_scalar(value: Scalar) -> str:
    """Canonical text for a coefficient: p/q, or a parameter polynomial"""
    value = to_coefficient(value)
    if value.is_Rational:
        return str(value)
    ordered = [p for p in PARAMETERS if value.has(p)]
    extra = sorted((s for s in value.free_symbols if s not in PARAMETERS), key=str)
    gens = ordered + extra
    try:
        poly = sp.Poly(value, *gens)
    except sp.PolynomialError:
        return sp.sstr(value)
    if not all(c.is_Rational for c in poly.coeffs()):
        return sp.sstr(value)

    pieces = []
    for exponents, coefficient in sorted(
        poly.terms(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0]))
    ):
        monomial = "".join(
            str(g) if e == 1 else f"{g}^{e}" for g, e in zip(gens, exponents) if e
        )
        if not monomial:
            pieces.append(str(coefficient))
        elif coefficient == 1:
            pieces.append(monomial)
        elif coefficient == -1:
            pieces.append(f"-{monomial}")
        else:
            pieces.append(f"{coefficient}{monomial}")
    return _join_signed(pieces)


def _join_signed(pieces: Sequence[str]) -> str:
    if not pieces:
        return "0"
    text = pieces[0]
    for piece in pieces[1:]:
        text += piece if piece.startswith("-") else f"+{piece}"
    return text


@dataclass(frozen=True)
class Monomial:
    """Product of generators; exponents stored as sorted (symbol, power) pairs"""
    exponents: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def from_mapping(cls, powers: Mapping[str, int]) -> "Monomial":
        items = []
        for symbol, power in powers.items():
            power = int(power)
            if power < 0:
                raise DegreeError(f"negative exponent {power} on {symbol}")
            if power:
                items.append((symbol, power))
        return cls(tuple(sorted(items)))

    @classmethod
    def of(cls, *symbols: str) -> "Monomial":
        """Monomial from a list of factors, e.g. of('E', 'E', 'F') is E^2F"""
        return cls.from_mapping(Counter(symbols))

    @classmethod
    def parse(cls, text: str, generators: Sequence[str]) -> "Monomial":
        """Parse 'E^2F' or 'H^3' (optionally with '*' separators)"""
        powers: Counter = Counter()
        remaining = text.replace("*", " ").strip()
        names = sorted(generators, key=len, reverse=True)
        while remaining:
            remaining = remaining.lstrip()
            name = next((g for g in names if remaining.startswith(g)), None)
            if name is None:
                raise ValueError(f"unknown generator in monomial '{text}'")
            remaining = remaining[len(name):]
            power = 1
            match = re.match(r"\^(\d+)", remaining)
            if match:
                power = int(match.group(1))
                remaining = remaining[match.end():]
            powers[name] += power
        return cls.from_mapping(powers)

    @property
    def degree(self) -> int:
        return sum(power for _, power in self.exponents)

    def power(self, symbol: str) -> int:
        for name, power in self.exponents:
            if name == symbol:
                return power
        return 0

    def as_dict(self) -> Dict[str, int]:
        return dict(self.exponents)

    def __mul__(self, other: "Monomial") -> "Monomial":
        powers = Counter(self.as_dict())
        powers.update(other.as_dict())
        return Monomial.from_mapping(powers)

    def render(self, generators: Sequence[str]) -> str:
        if not self.exponents:
            return "1"
        separator = "" if all(len(g) == 1 for g in generators) else "*"
        parts = []
        for g in generators:
            power = self.power(g)
            if power == 1:
                parts.append(g)
            elif power > 1:
                parts.append(f"{g}^{power}")
        return separator.join(parts)


ONE = Monomial()


@dataclass(frozen=True)
class ChowPresentation:
    """Generators, truncation degree and the top-degree intersection table"""
    name: str
    generators: Tuple[str, ...]
    dimension: int
    top_table: Tuple[Tuple[Monomial, sp.Expr], ...]

    def __post_init__(self):
        object.__setattr__(self, "_table", dict(self.top_table))

    @property
    def table(self) -> Dict[Monomial, sp.Expr]:
        return self._table

    def monomial_key(self, monomial: Monomial) -> Tuple:
        return (monomial.degree, tuple(-monomial.power(g) for g in self.generators))

    def monomials_of_degree(self, degree: int) -> List[Monomial]:
        monomials = {
            Monomial.of(*combo)
            for combo in itertools.combinations_with_replacement(self.generators, degree)
        }
        return sorted(monomials, key=self.monomial_key)

    def render_monomial(self, monomial: Monomial) -> str:
        return monomial.render(self.generators)

    # Construction helpers

    def element(self, terms: Mapping[Monomial, Scalar]) -> "GradedClass":
        return GradedClass.build(self, terms.items())

    def zero(self) -> "GradedClass":
        return GradedClass(self, ())

    def one(self) -> "GradedClass":
        return self.scalar(1)

    def scalar(self, value: Scalar) -> "GradedClass":
        return GradedClass.build(self, [(ONE, value)])

    def gen(self, symbol: str) -> "GradedClass":
        if symbol not in self.generators:
            raise KeyError(f"{symbol} is not a generator of {self.name}")
        return GradedClass.build(self, [(Monomial.of(symbol), 1)])

    def gens(self) -> Tuple["GradedClass", ...]:
        return tuple(self.gen(g) for g in self.generators)

    def symbols(self) -> Dict[str, sp.Symbol]:
        return {g: sp.Symbol(g) for g in self.generators}

    def parse(self, text: str) -> "GradedClass":
        """Parse '1 + H + 7/12 H^2' or '(8*a+16*b)*H' into a class on this ring"""
        symbols = self.symbols()
        local = dict(PARAMETER_NAMES)
        local.update(symbols)
        expression = parse_expr(_explicit_products(text), local_dict=local, transformations=_TRANSFORMATIONS)
        return self.from_expr(expression)

    def from_expr(self, expression: sp.Expr) -> "GradedClass":
        symbols = [sp.Symbol(g) for g in self.generators]
        try:
            poly = sp.Poly(sp.sympify(expression), *symbols)
        except sp.PolynomialError as exc:
            raise DegreeError(f"not a polynomial in {', '.join(self.generators)}: {exc}") from exc
        terms = []
        for exponents, coefficient in poly.terms():
            monomial = Monomial.from_mapping(dict(zip(self.generators, exponents)))
            if coefficient.free_symbols & set(symbols):
                raise DegreeError(f"generator left inside coefficient {coefficient}")
            terms.append((monomial, coefficient))
        return GradedClass.build(self, terms)


def make_ring(generators: Sequence[str], dimension: int,
              top_table: Mapping[Union[Monomial, str], Scalar], name: str = "") -> ChowPresentation:
    """Build a ChowPresentation, checking the top table is total on top-degree monomials"""
    generators = tuple(generators)
    if dimension < 0:
        raise RingConstructionError(f"negative dimension {dimension}")
    if len(set(generators)) != len(generators):
        raise RingConstructionError(f"repeated generator in {generators}")

    table: Dict[Monomial, sp.Expr] = {}
    for key, value in top_table.items():
        monomial = Monomial.parse(key, generators) if isinstance(key, str) else key
        unknown = set(monomial.as_dict()) - set(generators)
        if unknown:
            raise RingConstructionError(f"top table entry uses unknown generator(s) {sorted(unknown)}")
        if monomial.degree != dimension:
            raise RingConstructionError(
                f"top table entry {monomial.render(generators)} has degree {monomial.degree}, "
                f"expected {dimension}"
            )
        table[monomial] = to_coefficient(value)

    bare = ChowPresentation(name, generators, dimension, ())
    for monomial in bare.monomials_of_degree(dimension):
        if monomial not in table:
            raise RingConstructionError(
                f"missing top table entry {monomial.render(generators)} in {name or 'ring'}"
            )

    ordered = tuple(sorted(table.items(), key=lambda item: bare.monomial_key(item[0])))
    logger.debug(f"Built ring {name or '?'} on {generators} with dimension {dimension}")
    return ChowPresentation(name, generators, dimension, ordered)


@dataclass(frozen=True)
class GradedClass:
    """Formal sum monomial -> coefficient, truncated above the ring dimension"""
    ring: ChowPresentation
    terms: Tuple[Tuple[Monomial, sp.Expr], ...]

    @classmethod
    def build(cls, ring: ChowPresentation, terms: Iterable[Tuple[Monomial, Scalar]]) -> "GradedClass":
        collected: Dict[Monomial, sp.Expr] = {}
        for monomial, value in terms:
            if monomial.degree > ring.dimension:
                continue
            if monomial in collected:
                collected[monomial] = to_coefficient(collected[monomial] + sp.sympify(value))
            else:
                collected[monomial] = to_coefficient(value)
        kept = [(mon, c) for mon, c in collected.items() if c != 0]
        kept.sort(key=lambda item: ring.monomial_key(item[0]))
        return cls(ring, tuple(kept))

    # Views

    def as_dict(self) -> Dict[Monomial, sp.Expr]:
        return dict(self.terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, sp.Expr]]:
        return iter(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, monomial: Union[Monomial, str]) -> sp.Expr:
        if isinstance(monomial, str):
            monomial = Monomial.parse(monomial, self.ring.generators) if monomial != "1" else ONE
        return self.as_dict().get(monomial, sp.Integer(0))

    @property
    def constant(self) -> sp.Expr:
        return self.coefficient(ONE)

    def part(self, degree: int) -> "GradedClass":
        return GradedClass(self.ring, tuple(t for t in self.terms if t[0].degree == degree))

    def truncate(self, degree: int) -> "GradedClass":
        return GradedClass(self.ring, tuple(t for t in self.terms if t[0].degree <= degree))

    def degrees(self) -> List[int]:
        return sorted({mon.degree for mon, _ in self.terms})

    def is_homogeneous(self, degree: int) -> bool:
        return all(mon.degree == degree for mon, _ in self.terms)

    @property
    def free_parameters(self) -> set:
        symbols = set()
        for _, c in self.terms:
            symbols |= c.free_symbols
        return symbols

    def substitute(self, values: Mapping[sp.Symbol, Scalar]) -> "GradedClass":
        """Specialise parameters, e.g. {a: 1, b: 0}"""
        subs = {k: sp.sympify(v) for k, v in values.items()}
        return GradedClass.build(self.ring, [(mon, c.subs(subs)) for mon, c in self.terms])

    def map_coefficients(self, fn) -> "GradedClass":
        return GradedClass.build(self.ring, [(mon, fn(c)) for mon, c in self.terms])

    # Arithmetic

    def _check_ring(self, other: "GradedClass") -> None:
        if other.ring != self.ring:
            raise RingMismatchError(f"cannot combine classes on {self.ring.name} and {other.ring.name}")

    def __add__(self, other) -> "GradedClass":
        if _is_scalar(other):
            other = self.ring.scalar(other)
        if not isinstance(other, GradedClass):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "GradedClass":
        return GradedClass(self.ring, tuple((mon, -c) for mon, c in self.terms))

    def __sub__(self, other) -> "GradedClass":
        if _is_scalar(other):
            other = self.ring.scalar(other)
        if not isinstance(other, GradedClass):
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other) -> "GradedClass":
        return (-self) + other

    def __mul__(self, other) -> "GradedClass":
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, GradedClass):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other) -> "GradedClass":
        if _is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other) -> "GradedClass":
        if not _is_scalar(other):
            return NotImplemented
        return self.scale(1 / sp.sympify(other))

    def __pow__(self, exponent: int) -> "GradedClass":
        if exponent < 0:
            raise ValueError("negative powers are only available through inverse_unit")
        result = self.ring.one()
        for _ in range(exponent):
            result = mul(result, self)
        return result

    def scale(self, factor: Scalar) -> "GradedClass":
        factor = sp.sympify(factor)
        return GradedClass.build(self.ring, [(mon, c * factor) for mon, c in self.terms])

    # Rendering

    def render(self) -> str:
        pieces = []
        for monomial, coefficient in self.terms:
            if monomial == ONE:
                pieces.append(render_scalar(coefficient))
                continue
            label = self.ring.render_monomial(monomial)
            if coefficient.is_Rational:
                if coefficient == 1:
                    pieces.append(label)
                elif coefficient == -1:
                    pieces.append(f"-{label}")
                else:
                    pieces.append(f"{coefficient}{label}")
            else:
                pieces.append(f"({render_scalar(coefficient)}){label}")
        return _join_signed(pieces)

    def __str__(self) -> str:
        return self.render()


def add(a: GradedClass, b: GradedClass) -> GradedClass:
    """Coefficient-wise sum"""
    a._check_ring(b)
    return GradedClass.build(a.ring, list(a.terms) + list(b.terms))


def mul(a: GradedClass, b: GradedClass) -> GradedClass:
    """Distributive product; monomials above the truncation degree are discarded"""
    a._check_ring(b)
    limit = a.ring.dimension
    products = []
    for mon_a, c_a in a.terms:
        for mon_b, c_b in b.terms:
            if mon_a.degree + mon_b.degree > limit:
                continue
            products.append((mon_a * mon_b, c_a * c_b))
    return GradedClass.build(a.ring, products)


def exp_class(divisor: GradedClass) -> GradedClass:
    """Truncated exponential 1 + d + d^2/2 + ... of a degree-1 class"""
    if not divisor.is_homogeneous(1):
        raise DegreeError(f"exp_class needs a degree-1 class, got degrees {divisor.degrees()}")
    ring = divisor.ring
    result = ring.one()
    power = ring.one()
    for k in range(1, ring.dimension + 1):
        power = mul(power, divisor)
        if power.is_zero():
            break
        result = add(result, power / sp.factorial(k))
    return result


def inverse_unit(unit: GradedClass) -> GradedClass:
    """Inverse of a class with constant term 1, as the finite geometric series in 1 - u"""
    if unit.constant != 1:
        raise NotAUnitError(f"constant term is {unit.constant}, expected 1")
    ring = unit.ring
    nilpotent = ring.one() - unit
    result = ring.one()
    power = ring.one()
    for _ in range(ring.dimension):
        power = mul(power, nilpotent)
        if power.is_zero():
            break
        result = add(result, power)
    return result


def integrate(cls: GradedClass) -> sp.Expr:
    """Pair the top-degree part against the intersection table"""
    table = cls.ring.table
    total = sp.Integer(0)
    for monomial, coefficient in cls.terms:
        if monomial.degree == cls.ring.dimension:
            total += coefficient * table[monomial]
    return to_coefficient(total)


def todd_from_chern(c1: GradedClass, c2: GradedClass) -> GradedClass:
    """1 + c1/2 + (c1^2 + c2)/12 + c1 c2/24, truncated to the ring dimension"""
    if not c1.is_homogeneous(1):
        raise DegreeError(f"c1 must have degree 1, got degrees {c1.degrees()}")
    if not c2.is_homogeneous(2):
        raise DegreeError(f"c2 must have degree 2, got degrees {c2.degrees()}")
    c1._check_ring(c2)
    ring = c1.ring
    return (
        ring.one()
        + c1 / 2
        + (mul(c1, c1) + c2) / 12
        + mul(c1, c2) / 24
    )


def chern_character(rank: Scalar, c1: GradedClass, c2: GradedClass) -> GradedClass:
    """rank + c1 + (c1^2/2 - c2), truncated at codimension two"""
    return c1.ring.scalar(rank) + c1 + mul(c1, c1) / 2 - c2


def chern_from_ch(ch: GradedClass) -> Tuple[GradedClass, GradedClass]:
    """Recover (c1, c2) from a Chern character through codimension two"""
    c1 = ch.part(1)
    c2 = mul(c1, c1).part(2) / 2 - ch.part(2)
    return c1, c2


@dataclass(frozen=True)
class RingMap:
    """Ring homomorphism determined by the images of the source generators"""
    source: ChowPresentation
    target: ChowPresentation
    images: Tuple[Tuple[str, GradedClass], ...]

    def __post_init__(self):
        names = {g for g, _ in self.images}
        if names != set(self.source.generators):
            raise RingConstructionError(
                f"ring map must send every generator of {self.source.name}, got {sorted(names)}"
            )
        for g, image in self.images:
            if image.ring != self.target:
                raise RingMismatchError(f"image of {g} does not live on {self.target.name}")
            if not image.is_homogeneous(1):
                raise DegreeError(f"image of {g} must be a degree-1 class")

    def __call__(self, cls: GradedClass) -> GradedClass:
        if cls.ring != self.source:
            raise RingMismatchError(f"class lives on {cls.ring.name}, map starts at {self.source.name}")
        images = dict(self.images)
        result = self.target.zero()
        for monomial, coefficient in cls.terms:
            term = self.target.scalar(coefficient)
            for g, power in monomial.exponents:
                term = mul(term, images[g] ** power)
            result = add(result, term)
        return result


def pullback_map(source: ChowPresentation, target: ChowPresentation,
                 images: Mapping[str, GradedClass]) -> RingMap:
    return RingMap(source, target, tuple(sorted(images.items())))


@dataclass(frozen=True)
class LocalSurfaceLattice:
    """Curve classes on a surface with their intersection form, as a dimension-2 presentation"""
    generators: Tuple[str, ...]
    gram: Tuple[Tuple[sp.Expr, ...], ...]

    @classmethod
    def build(cls, generators: Sequence[str], gram: Sequence[Sequence[Scalar]]) -> "LocalSurfaceLattice":
        rows = tuple(tuple(to_coefficient(v) for v in row) for row in gram)
        return cls(tuple(generators), rows)

    def __post_init__(self):
        n = len(self.generators)
        if len(self.gram) != n or any(len(row) != n for row in self.gram):
            raise RingConstructionError(f"gram matrix must be {n}x{n}")
        for i in range(n):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise RingConstructionError(
                        f"gram matrix not symmetric at {self.generators[i]}.{self.generators[j]}"
                    )
        table = {}
        for i, j in itertools.combinations_with_replacement(range(n), 2):
            table[Monomial.of(self.generators[i], self.generators[j])] = self.gram[i][j]
        object.__setattr__(self, "_ring", make_ring(self.generators, 2, table, name="lattice"))

    @property
    def ring(self) -> ChowPresentation:
        return self._ring

    def element(self, coefficients: Mapping[str, Scalar]) -> GradedClass:
        """Integer or rational combination of the generators"""
        result = self.ring.zero()
        for symbol, value in coefficients.items():
            result = result + self.ring.gen(symbol) * value
        return result

    def pair(self, x: GradedClass, y: GradedClass) -> sp.Expr:
        return integrate(mul(x, y))

    def square(self, x: GradedClass) -> sp.Expr:
        return self.pair(x, x)
