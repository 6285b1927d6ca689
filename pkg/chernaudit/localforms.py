"""
Local matrices of the Higgs field near a tacnode and the logarithmic-pole check.

Multiplication by u and v acts on the basis 1, u, v, uv over functions of
(x, y) with x = u^2 + v and y = v^2. One-form valued matrices are kept in
the dlog basis: a FormMatrix is a sum over basis variables w of M_w dw/w,
with M_w a matrix of rational functions. Pulling back along a monomial
substitution is then linear in the exponents, and logarithmicity along
w = 0 is a valuation condition on the coefficient matrices.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import sympy as sp

from .exceptions import RootOrderError
from .ring import to_coefficient


logger = logging.getLogger(__name__)

# Denominators allowed in exponents (a = alpha^2, b = beta^4)
ROOT_ORDER = 4

x, y = sp.symbols("x y", positive=True)
a, b = sp.symbols("a b", positive=True)
alpha, beta = sp.symbols("alpha beta", positive=True)
DELTA = x ** 2 - y

FunctionMatrix = sp.ImmutableMatrix


@dataclass(frozen=True)
class PuiseuxMonomial:
    """coeff * prod v^e with rational exponents whose denominators divide the root order"""
    coeff: sp.Rational
    exponents: Tuple[Tuple[sp.Symbol, sp.Rational], ...]
    root_order: int = ROOT_ORDER

    @classmethod
    def of(cls, coeff=1, root_order: int = ROOT_ORDER, **powers) -> "PuiseuxMonomial":
        """PuiseuxMonomial.of(1, alpha=2, beta=4) is alpha^2 beta^4"""
        symbols = {str(s): s for s in (x, y, a, b, alpha, beta)}
        items = []
        for name, power in powers.items():
            power = sp.Rational(to_coefficient(power))
            if power != 0:
                items.append((symbols.get(name) or sp.Symbol(name, positive=True), power))
        return cls(sp.Rational(to_coefficient(coeff)), tuple(sorted(items, key=lambda item: str(item[0]))), root_order)

    def __post_init__(self):
        if self.coeff == 0:
            raise ValueError("a Puiseux monomial needs a nonzero coefficient")
        for symbol, power in self.exponents:
            if self.root_order % sp.Rational(power).q:
                raise RootOrderError(
                    f"exponent {power} of {symbol} has denominator outside root order {self.root_order}"
                )

    def power(self, symbol: sp.Symbol) -> sp.Rational:
        for s, p in self.exponents:
            if s == symbol:
                return p
        return sp.Integer(0)

    @property
    def variables(self) -> Tuple[sp.Symbol, ...]:
        return tuple(s for s, _ in self.exponents)

    def as_expr(self) -> sp.Expr:
        return self.coeff * sp.Mul(*[s ** p for s, p in self.exponents])

    def __mul__(self, other: "PuiseuxMonomial") -> "PuiseuxMonomial":
        powers: Dict[sp.Symbol, sp.Rational] = dict(self.exponents)
        for s, p in other.exponents:
            powers[s] = powers.get(s, 0) + p
        items = tuple(sorted(((s, p) for s, p in powers.items() if p != 0), key=lambda i: str(i[0])))
        return PuiseuxMonomial(self.coeff * other.coeff, items, int(sp.ilcm(self.root_order, other.root_order)))

    def inverse(self) -> "PuiseuxMonomial":
        return PuiseuxMonomial(1 / self.coeff, tuple((s, -p) for s, p in self.exponents), self.root_order)

    def dlog(self) -> Dict[sp.Symbol, sp.Rational]:
        """d(m)/m = sum e_v dv/v"""
        return dict(self.exponents)

    def render(self) -> str:
        return sp.sstr(self.as_expr())


Substitution = Mapping[sp.Symbol, PuiseuxMonomial]


def _clean(expr: sp.Expr) -> sp.Expr:
    return sp.factor(sp.cancel(sp.together(expr)))


def _clean_matrix(matrix: sp.MatrixBase) -> FunctionMatrix:
    return sp.ImmutableMatrix(matrix.shape[0], matrix.shape[1], [_clean(e) for e in matrix])


@dataclass(frozen=True)
class FormMatrix:
    """Matrix of one-forms sum_w M_w dw/w"""
    basis: Tuple[sp.Symbol, ...]
    coefficients: Tuple[FunctionMatrix, ...]

    @classmethod
    def from_dict(cls, parts: Mapping[sp.Symbol, sp.MatrixBase]) -> "FormMatrix":
        basis = tuple(sorted(parts, key=str))
        if not basis:
            return cls((), ())
        return cls(basis, tuple(_clean_matrix(sp.Matrix(parts[w])) for w in basis))

    @classmethod
    def zero(cls, basis: Sequence[sp.Symbol], size: int = 4) -> "FormMatrix":
        return cls.from_dict({w: sp.zeros(size, size) for w in basis})

    @property
    def size(self) -> int:
        return self.coefficients[0].shape[0] if self.coefficients else 0

    def coefficient(self, w: sp.Symbol) -> FunctionMatrix:
        return self.as_dict()[w]

    def as_dict(self) -> Dict[sp.Symbol, FunctionMatrix]:
        return dict(zip(self.basis, self.coefficients))

    def entry(self, row: int, col: int) -> Dict[sp.Symbol, sp.Expr]:
        return {w: m[row, col] for w, m in self.as_dict().items()}

    def _combine(self, other: "FormMatrix", sign: int) -> "FormMatrix":
        parts: Dict[sp.Symbol, sp.Matrix] = {w: sp.Matrix(m) for w, m in self.as_dict().items()}
        for w, m in other.as_dict().items():
            parts[w] = parts[w] + sign * m if w in parts else sign * sp.Matrix(m)
        return FormMatrix.from_dict(parts)

    def __add__(self, other: "FormMatrix") -> "FormMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "FormMatrix") -> "FormMatrix":
        return self._combine(other, -1)

    def scale(self, factor: sp.Expr) -> "FormMatrix":
        return FormMatrix.from_dict({w: m * factor for w, m in self.as_dict().items()})

    def left_mul(self, matrix: sp.MatrixBase) -> "FormMatrix":
        """matrix . self"""
        return FormMatrix.from_dict({w: sp.Matrix(matrix) * m for w, m in self.as_dict().items()})

    def right_mul(self, matrix: sp.MatrixBase) -> "FormMatrix":
        """self . matrix"""
        return FormMatrix.from_dict({w: m * sp.Matrix(matrix) for w, m in self.as_dict().items()})

    def is_zero(self) -> bool:
        return all(e == 0 for m in self.coefficients for e in m)

    def equals(self, other: "FormMatrix") -> bool:
        return (self - other).is_zero()

    def mismatches(self, other: "FormMatrix") -> List[Tuple[int, int, sp.Symbol]]:
        """Entries (1-based) and basis forms where two form matrices differ"""
        difference = self - other
        return [
            (i + 1, j + 1, w)
            for w, m in difference.as_dict().items()
            for i in range(m.shape[0])
            for j in range(m.shape[1])
            if m[i, j] != 0
        ]


MatrixLike = Union[sp.MatrixBase, FormMatrix]


def build_local_matrices() -> Dict[str, MatrixLike]:
    """u, v, Delta.u^-1 as function matrices, dv and du as form matrices in dx/x, dy/y"""
    u = sp.ImmutableMatrix([
        [0, x, 0, -y],
        [1, 0, 0, 0],
        [0, -1, 0, x],
        [0, 0, 1, 0],
    ])
    v = sp.ImmutableMatrix([
        [0, 0, y, 0],
        [0, 0, 0, y],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
    ])
    u_inv_times_delta = sp.ImmutableMatrix([
        [0, DELTA, 0, 0],
        [x, 0, y, 0],
        [0, 0, 0, DELTA],
        [1, 0, x, 0],
    ])
    u_inv = u_inv_times_delta / DELTA

    # v^2 = y gives dv = v dy / 2y; x = u^2 + v gives du = u^-1 (dx - dv) / 2
    dv = FormMatrix.from_dict({y: v / 2})
    dx = FormMatrix.from_dict({x: sp.eye(4) * x})
    du = (dx - dv).left_mul(u_inv / 2)
    return {
        "u": u,
        "v": v,
        "u_inv_times_delta": u_inv_times_delta,
        "u_inv": _clean_matrix(u_inv),
        "dv": dv,
        "du": du,
    }


def _from_differentials(dx_part: sp.MatrixBase, dy_part: sp.MatrixBase) -> FormMatrix:
    """Convert P dx + Q dy to the dlog basis"""
    return FormMatrix.from_dict({x: sp.Matrix(dx_part) * x, y: sp.Matrix(dy_part) * y})


def explicit_du() -> FormMatrix:
    """du as displayed: (1/4 Delta) times a matrix of dx and dy entries"""
    d = DELTA
    dx_part = sp.Matrix([
        [0, 2 * d, 0, 0],
        [2 * x, 0, 2 * y, 0],
        [0, 0, 0, 2 * d],
        [2, 0, 2 * x, 0],
    ]) / (4 * d)
    dy_part = sp.Matrix([
        [0, 0, 0, -d],
        [-1, 0, -x, 0],
        [0, -d / y, 0, 0],
        [-x / y, 0, -1, 0],
    ]) / (4 * d)
    return _from_differentials(dx_part, dy_part)


def dlog_delta() -> Dict[sp.Symbol, sp.Expr]:
    """dDelta/Delta = (2x dx - dy)/Delta in the dlog basis"""
    return {x: 2 * x ** 2 / DELTA, y: -y / DELTA}


def du_decomposition() -> Tuple[FormMatrix, FormMatrix, FormMatrix]:
    """The corner term, the dDelta/Delta terms and the holomorphic/dy/y terms of du"""
    dl = dlog_delta()

    def single(row: int, col: int, parts: Mapping[sp.Symbol, sp.Expr], target: Dict) -> None:
        for w, value in parts.items():
            target.setdefault(w, sp.zeros(4, 4))
            target[w][row, col] += value

    corner: Dict[sp.Symbol, sp.Matrix] = {}
    # (x/y) dDelta/Delta - 2 dx/y
    single(3, 0, {w: c * x / y / 4 for w, c in dl.items()}, corner)
    single(3, 0, {x: -2 * x / y / 4}, corner)

    residues: Dict[sp.Symbol, sp.Matrix] = {}
    single(1, 0, {w: c / 4 for w, c in dl.items()}, residues)
    single(1, 2, {w: c * x / 4 for w, c in dl.items()}, residues)
    single(3, 2, {w: c / 4 for w, c in dl.items()}, residues)

    regular: Dict[sp.Symbol, sp.Matrix] = {}
    single(0, 1, {x: 2 * x / 4}, regular)
    single(0, 3, {y: -y / 4}, regular)
    single(1, 2, {x: -2 * x / 4}, regular)
    single(2, 1, {y: -sp.Rational(1, 4)}, regular)
    single(2, 3, {x: 2 * x / 4}, regular)
    return FormMatrix.from_dict(corner), FormMatrix.from_dict(residues), FormMatrix.from_dict(regular)


@dataclass
class DerivationCheck:
    """Comparison of a reconstructed matrix with the displayed one"""
    name: str
    mismatches: List[Tuple[int, int, sp.Symbol]]

    @property
    def passed(self) -> bool:
        return not self.mismatches


def verify_derivation_identities() -> List[DerivationCheck]:
    """du from u^-1, dx and dv against its explicit form and its three-term split"""
    matrices = build_local_matrices()
    checks = []

    product = sp.Matrix(matrices["u"]) * sp.Matrix(matrices["u_inv_times_delta"])
    identity = FormMatrix.from_dict({x: _clean_matrix(product - sp.eye(4) * DELTA)})
    checks.append(DerivationCheck("u.(Delta u^-1) = Delta", identity.mismatches(FormMatrix.zero([x]))))

    v_squared = sp.Matrix(matrices["v"]) ** 2 - sp.eye(4) * y
    checks.append(DerivationCheck("v.v = y", FormMatrix.from_dict({y: v_squared}).mismatches(FormMatrix.zero([y]))))

    explicit_dv = _from_differentials(sp.zeros(4, 4), sp.Matrix(matrices["v"]) / (2 * y))
    checks.append(DerivationCheck("dv = v dy / 2y", matrices["dv"].mismatches(explicit_dv)))

    du = matrices["du"]
    checks.append(DerivationCheck("du = u^-1 (dx - dv) / 2", du.mismatches(explicit_du())))

    corner, residues, regular = du_decomposition()
    checks.append(DerivationCheck("du = corner + residues + regular", du.mismatches(corner + residues + regular)))

    for check in checks:
        logger.debug(f"{check.name}: {'ok' if check.passed else check.mismatches}")
    return checks


# Substitutions


def chart_substitutions() -> Dict[str, Dict[sp.Symbol, PuiseuxMonomial]]:
    """Blow-up charts (x, a) and (a, b), the root cover from (a, b), and the composite"""
    return {
        "xa": {x: PuiseuxMonomial.of(x=1), y: PuiseuxMonomial.of(a=1, x=1)},
        "ab": {x: PuiseuxMonomial.of(a=1, b=1), y: PuiseuxMonomial.of(a=2, b=1)},
        "root": {a: PuiseuxMonomial.of(alpha=2), b: PuiseuxMonomial.of(beta=4)},
        "alpha_beta": {x: PuiseuxMonomial.of(alpha=2, beta=4), y: PuiseuxMonomial.of(alpha=4, beta=4)},
    }


def _expr_substitution(sub: Substitution) -> Dict[sp.Symbol, sp.Expr]:
    return {w: m.as_expr() for w, m in sub.items()}


def substitute_function(expr: sp.Expr, sub: Substitution) -> sp.Expr:
    return _clean(sp.sympify(expr).subs(_expr_substitution(sub), simultaneous=True))


def substitute(m: MatrixLike, sub: Substitution) -> MatrixLike:
    """Pull back along a monomial substitution; dw/w becomes sum e_v dv/v"""
    for w, target in sub.items():
        if not isinstance(target, PuiseuxMonomial):
            raise TypeError(f"substitution for {w} must be a PuiseuxMonomial")
    exprs = _expr_substitution(sub)

    if not isinstance(m, FormMatrix):
        matrix = sp.Matrix(m).subs(exprs, simultaneous=True)
        return _clean_matrix(matrix)

    parts: Dict[sp.Symbol, sp.Matrix] = {}
    for w, coefficient in m.as_dict().items():
        pulled = sp.Matrix(coefficient).subs(exprs, simultaneous=True)
        weights = sub[w].dlog() if w in sub else {w: sp.Integer(1)}
        for v, weight in weights.items():
            parts[v] = parts.get(v, sp.zeros(*pulled.shape)) + pulled * weight
    return FormMatrix.from_dict(parts)


def frame_conjugate(m: MatrixLike, frame: Sequence[PuiseuxMonomial]) -> MatrixLike:
    """F m F^-1 for F = diag(frame)"""
    f = sp.diag(*[p.as_expr() for p in frame])
    f_inv = sp.diag(*[p.inverse().as_expr() for p in frame])
    if isinstance(m, FormMatrix):
        return m.left_mul(f).right_mul(f_inv)
    return _clean_matrix(f * sp.Matrix(m) * f_inv)


def multiply(left: MatrixLike, right: MatrixLike) -> MatrixLike:
    """Product where at most one factor is a form matrix"""
    if isinstance(left, FormMatrix) and isinstance(right, FormMatrix):
        raise TypeError("products of two form matrices are not one-forms")
    if isinstance(right, FormMatrix):
        return right.left_mul(sp.Matrix(left))
    if isinstance(left, FormMatrix):
        return left.right_mul(sp.Matrix(right))
    return _clean_matrix(sp.Matrix(left) * sp.Matrix(right))


def root_cover_frame() -> Tuple[PuiseuxMonomial, ...]:
    """f1 = (alpha beta)^-1 e1, f2 = e2, f3 = e3, f4 = alpha beta e4"""
    one = PuiseuxMonomial.of()
    return (PuiseuxMonomial.of(alpha=-1, beta=-1), one, one, PuiseuxMonomial.of(alpha=1, beta=1))


# Valuations and the logarithmic predicate


def _lowest_degree(polynomial: sp.Expr, t: sp.Symbol) -> int:
    try:
        poly = sp.Poly(sp.expand(polynomial), t)
    except sp.PolynomialError as exc:
        raise RootOrderError(f"exponents of {polynomial} are not integral after clearing roots") from exc
    return min(monomial[0] for monomial in poly.monoms())


def valuation(expr: sp.Expr, variable: sp.Symbol, root_order: int = ROOT_ORDER) -> Optional[sp.Rational]:
    """Order of vanishing along variable = 0, None for the zero function"""
    expr = sp.cancel(sp.together(sp.sympify(expr)))
    if expr == 0:
        return None
    t = sp.Dummy("t", positive=True)
    numerator, denominator = sp.fraction(sp.together(expr.subs(variable, t ** root_order)))
    if sp.expand(numerator) == 0:
        return None
    order = _lowest_degree(numerator, t) - _lowest_degree(denominator, t)
    return sp.Rational(order, root_order)


@dataclass
class PoleReport:
    """A coefficient of dw/w with a pole along divisor = 0"""
    row: int
    col: int
    form: sp.Symbol
    divisor: sp.Symbol
    pole_order: sp.Rational
    form_pole_order: sp.Rational
    coefficient: sp.Expr

    def render(self) -> str:
        return (f"({self.row},{self.col}) d{self.form}/{self.form}: pole of order {self.pole_order} "
                f"along {self.divisor}=0 (form order {self.form_pole_order})")


@dataclass
class LogReport:
    passed: bool
    failures: List[PoleReport]

    def render(self) -> str:
        if self.passed:
            return "logarithmic"
        return "; ".join(f.render() for f in self.failures)


def is_logarithmic(m: FormMatrix, divisors: Sequence[sp.Symbol]) -> LogReport:
    """Every coefficient regular along each divisor; dw/w with w not a divisor needs a zero along w"""
    failures: List[PoleReport] = []
    for w, coefficient in m.as_dict().items():
        for i in range(coefficient.shape[0]):
            for j in range(coefficient.shape[1]):
                entry = coefficient[i, j]
                if entry == 0:
                    continue
                for divisor in divisors:
                    order = valuation(entry, divisor)
                    if order is not None and order < 0:
                        extra = 1 if divisor == w else 0
                        failures.append(PoleReport(i + 1, j + 1, w, divisor, -order, -order + extra, entry))
                if w not in divisors:
                    order = valuation(entry, w)
                    if order is not None and order < 1:
                        failures.append(PoleReport(i + 1, j + 1, w, w, 1 - order, 1 - order, entry))
    return LogReport(not failures, failures)


def root_cover_matrices() -> Dict[str, MatrixLike]:
    """u, v, du, dv pulled back to (alpha, beta) and written in the new frame"""
    matrices = build_local_matrices()
    sub = chart_substitutions()["alpha_beta"]
    frame = root_cover_frame()
    result: Dict[str, MatrixLike] = {}
    for name in ("u", "v", "du", "dv"):
        pulled = substitute(matrices[name], sub)
        result[f"{name}_pulled"] = pulled
        result[f"{name}_f"] = frame_conjugate(pulled, frame)
    return result


def corner_term(chart: str = "alpha_beta") -> Dict[sp.Symbol, sp.Expr]:
    """4 du(4,1) = (x/y) dDelta/Delta - 2dx/y in the given chart"""
    du = build_local_matrices()["du"]
    pulled = substitute(du, chart_substitutions()[chart])
    return {w: _clean(4 * c) for w, c in pulled.entry(3, 0).items() if c != 0}


def corner_pole_report(chart: str = "alpha_beta") -> LogReport:
    """Pole orders of the corner term along the exceptional divisors of the chart"""
    divisors = {"xa": (x, a), "ab": (a, b), "alpha_beta": (alpha, beta)}[chart]
    term = corner_term(chart)
    form = FormMatrix.from_dict({w: sp.Matrix([[c]]) for w, c in term.items()})
    return is_logarithmic(form, divisors)


def verify_full_higgs_closure() -> Dict[str, LogReport]:
    """is_logarithmic along alpha, beta for {1, u_f, v_f, u_f v_f} x {du_f, dv_f}"""
    matrices = root_cover_matrices()
    u_f, v_f = matrices["u_f"], matrices["v_f"]
    left = {
        "1": sp.eye(4),
        "u_f": u_f,
        "v_f": v_f,
        "u_f.v_f": multiply(u_f, v_f),
    }
    reports = {}
    for left_name, left_matrix in left.items():
        for form_name in ("du_f", "dv_f"):
            product = multiply(left_matrix, matrices[form_name])
            report = is_logarithmic(product, (alpha, beta))
            reports[f"{left_name}.{form_name}"] = report
            logger.debug(f"{left_name}.{form_name}: {report.render()}")
    return reports


def render_matrix(m: MatrixLike) -> str:
    """Deterministic text for golden-file comparison"""
    if isinstance(m, FormMatrix):
        blocks = []
        for w, coefficient in m.as_dict().items():
            blocks.append(f"d{w}/{w}:")
            blocks.append(render_matrix(coefficient))
        return "\n".join(blocks)
    rows = []
    for i in range(m.shape[0]):
        rows.append("[" + ", ".join(sp.sstr(_clean(m[i, j])) for j in range(m.shape[1])) + "]")
    return "\n".join(rows)


# Relative critical locus on the blown-up Hecke correspondence


@dataclass(frozen=True)
class CriticalQuadratic:
    """x^2 + (2 - c) xv + v^2 with c = (a+/b+)^2"""
    c: sp.Expr
    coefficients: Tuple[sp.Expr, sp.Expr, sp.Expr]
    discriminant: sp.Expr
    branch_count: int
    degenerate: bool

    def to_dict(self) -> Dict[str, str]:
        return {
            "c": sp.sstr(self.c),
            "coefficients": [sp.sstr(c) for c in self.coefficients],
            "discriminant": sp.sstr(self.discriminant),
            "branch_count": self.branch_count,
            "degenerate": self.degenerate,
        }


def critical_quadratic(aplus, bplus) -> CriticalQuadratic:
    aplus, bplus = to_coefficient(aplus), to_coefficient(bplus)
    if bplus == 0:
        raise ZeroDivisionError("b+ must be nonzero")
    c = sp.cancel(aplus / bplus) ** 2
    discriminant = sp.expand((2 - c) ** 2 - 4)
    two_branches = c not in (0, 4)
    return CriticalQuadratic(
        c=c,
        coefficients=(sp.Integer(1), 2 - c, sp.Integer(1)),
        discriminant=discriminant,
        branch_count=2 if two_branches else 1,
        degenerate=(c == 0),
    )


def critical_quadratic_q_prime(ratio) -> Dict[str, sp.Expr]:
    """1 + r u + u^2 at the second point; two branches iff r^2 != 4"""
    r = to_coefficient(ratio)
    discriminant = sp.expand(r ** 2 - 4)
    return {"discriminant": discriminant, "branch_count": 1 if discriminant == 0 else 2}


def critical_leading_form() -> Dict[str, sp.Expr]:
    """Degree-2 part of xv.det of the relative Higgs matrix at the blown-up point"""
    xs, vs = sp.symbols("x v")
    ap, am, bp, bm = sp.symbols("a_p a_m b_p b_m")
    phi = sp.Matrix([
        [ap + vs * bm + xs * bm, xs * vs * am + (xs + vs) * bp],
        [am + bp / xs + bp / vs, ap + vs * bm + xs ** 2 * vs * bm],
    ])
    scaled = sp.expand(sp.cancel(xs * vs * phi.det()))
    poly = sp.Poly(scaled, xs, vs)
    leading = sum(
        (coeff * xs ** i * vs ** j for (i, j), coeff in poly.terms() if i + j == 2),
        sp.Integer(0),
    )
    expected = -(bp ** 2 * xs ** 2 + (2 * bp ** 2 - ap ** 2) * xs * vs + bp ** 2 * vs ** 2)
    lowest = min(i + j for (i, j), _ in poly.terms())
    return {"leading": sp.expand(leading), "expected": sp.expand(expected), "lowest_degree": lowest}
