"""
Line-oriented text config for varieties, finite covers and curve covers.

    [variety NAME] dim=3
    gen H
    pair H^3 = 4
    c1 = 2H
    c2 = 3H^2
    todd = 1 + H + 7/12 H^2
    [cover NAME] source=Y1 target=X1 degree=8 pullback=F
    [curve NAME] base_genus=2 degree=2 ram=2*4 genus=5
"""

import logging
import re
from dataclasses import dataclass, field
from itertools import groupby
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import sympy as sp

from .curves import CoverSpec
from .exceptions import ChernAuditError, ConfigError
from .ring import GradedClass, make_ring
from .varieties import CoverPresentation, Presentations, VarietyPresentation


logger = logging.getLogger(__name__)

_HEADER = re.compile(r"^\[(variety|cover|curve)\s+([A-Za-z_][\w.]*)\]")
_OPTION = re.compile(r"([A-Za-z_]\w*)=(\S*)")
_RATIONAL = re.compile(r"[+-]?\d+(/[1-9]\d*)?")

_COVER_KEYS = ("source", "target", "degree", "pullback")
_CURVE_KEYS = ("base_genus", "degree", "ram", "genus")


@dataclass
class _Section:
    kind: str
    name: str
    line: int
    options: Dict[str, Tuple[str, int]] = field(default_factory=dict)
    generators: List[str] = field(default_factory=list)
    pairs: Dict[str, Tuple[str, int, int]] = field(default_factory=dict)
    classes: Dict[str, Tuple[str, int, int]] = field(default_factory=dict)


def _strip_comment(raw: str) -> str:
    return raw.split("#", 1)[0].rstrip()


def _parse_options(text: str, offset: int, line: int) -> Dict[str, Tuple[str, int]]:
    """key=value tokens, each remembered with its 1-based column"""
    options: Dict[str, Tuple[str, int]] = {}
    position = 0
    for match in _OPTION.finditer(text):
        gap = text[position:match.start()]
        if gap.strip():
            raise ConfigError(f"expected key=value, got '{gap.strip()}'", line, offset + position + 1)
        key = match.group(1)
        if key in options:
            raise ConfigError(f"duplicate option '{key}'", line, offset + match.start() + 1)
        options[key] = (match.group(2), offset + match.start(2) + 1)
        position = match.end()
    rest = text[position:]
    if rest.strip():
        raise ConfigError(f"expected key=value, got '{rest.strip()}'", line, offset + position + 1)
    return options


def _tokenize(text: str) -> List[_Section]:
    sections: List[_Section] = []
    current: Optional[_Section] = None

    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()

        if body.startswith("["):
            match = _HEADER.match(body)
            if not match:
                raise ConfigError(f"malformed section header '{body}'", number, indent + 1)
            current = _Section(match.group(1), match.group(2), number)
            current.options = _parse_options(body[match.end():], indent + match.end(), number)
            sections.append(current)
            continue

        if current is None:
            raise ConfigError("entry outside of any section", number, indent + 1)
        if current.kind != "variety":
            raise ConfigError(f"{current.kind} sections take options on the header line only",
                              number, indent + 1)

        keyword = body.split(None, 1)[0]
        if keyword == "gen":
            names = body.split()[1:]
            if not names:
                raise ConfigError("gen needs at least one generator name", number, indent + 1)
            current.generators.extend(names)
        elif keyword == "pair":
            rest = body[len("pair"):]
            if "=" not in rest:
                raise ConfigError("pair entries look like 'pair E^2F = 32'", number, indent + 1)
            monomial, value = rest.split("=", 1)
            column = indent + len("pair") + len(rest.split("=", 1)[0]) + 2
            current.pairs[monomial.strip()] = (value.strip(), number, column)
        elif "=" in body:
            key, value = body.split("=", 1)
            key = key.strip()
            if key not in ("c1", "c2", "todd"):
                raise ConfigError(f"unknown variety entry '{key}'", number, indent + 1)
            current.classes[key] = (value.strip(), number, indent + len(body.split("=", 1)[0]) + 2)
        else:
            raise ConfigError(f"unknown variety entry '{keyword}'", number, indent + 1)
    return sections


def _rational(text: str, line: int, column: int) -> sp.Rational:
    """'-128' or '7/12'; decimals are refused"""
    if not _RATIONAL.fullmatch(text):
        raise ConfigError(f"'{text}' is not an exact rational", line, column)
    return sp.Rational(text)


def _integer(text: str, key: str, line: int, column: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got '{text}'", line, column) from None


def _require(section: _Section, keys: Tuple[str, ...], optional: Tuple[str, ...] = ()) -> None:
    for key, (_, column) in section.options.items():
        if key not in keys:
            raise ConfigError(f"unknown {section.kind} option '{key}'", section.line, column)
    for key in keys:
        if key not in section.options and key not in optional:
            raise ConfigError(f"{section.kind} {section.name} is missing '{key}'", section.line)


def _parse_class(ring, key: str, entry: Tuple[str, int, int]) -> GradedClass:
    text, line, column = entry
    try:
        return ring.parse(text)
    except (ChernAuditError, SyntaxError, TypeError, ValueError, sp.SympifyError) as exc:
        raise ConfigError(f"cannot read {key} '{text}': {exc}", line, column) from None


def _build_variety(section: _Section) -> VarietyPresentation:
    _require(section, ("dim",))
    dim_text, dim_column = section.options["dim"]
    dimension = _integer(dim_text, "dim", section.line, dim_column)
    if not section.generators:
        raise ConfigError(f"variety {section.name} declares no generators", section.line)

    table = {}
    for monomial, (value, line, column) in section.pairs.items():
        table[monomial] = _rational(value, line, column)
    try:
        ring = make_ring(section.generators, dimension, table, name=section.name)
    except (ChernAuditError, ValueError) as exc:
        raise ConfigError(str(exc), section.line) from None

    for key in ("c1", "c2"):
        if key not in section.classes:
            raise ConfigError(f"variety {section.name} is missing '{key}'", section.line)
    c1 = _parse_class(ring, "c1", section.classes["c1"])
    c2 = _parse_class(ring, "c2", section.classes["c2"])
    todd = _parse_class(ring, "todd", section.classes["todd"]) if "todd" in section.classes else None
    try:
        return VarietyPresentation.from_chern(section.name, ring, c1, c2, todd)
    except ChernAuditError as exc:
        _, line, column = section.classes.get("todd", ("", section.line, None))
        raise ConfigError(str(exc), line, column) from None


def _lookup(name: str, column: int, section: _Section,
            varieties: Dict[str, VarietyPresentation], base: Presentations) -> VarietyPresentation:
    if name in varieties:
        return varieties[name]
    if name in base.varieties:
        return base.varieties[name]
    raise ConfigError(f"cover {section.name} refers to unknown variety '{name}'", section.line, column)


def _build_cover(section: _Section, varieties: Dict[str, VarietyPresentation],
                 base: Presentations) -> CoverPresentation:
    _require(section, _COVER_KEYS)
    options = section.options
    source = _lookup(*options["source"], section, varieties, base)
    target = _lookup(*options["target"], section, varieties, base)
    degree = _integer(options["degree"][0], "degree", section.line, options["degree"][1])
    pullback_text, pullback_column = options["pullback"]
    pullback = _parse_class(source.ring, "pullback", (pullback_text, section.line, pullback_column))
    try:
        return CoverPresentation.build(section.name, source, target, degree, pullback)
    except ChernAuditError as exc:
        raise ConfigError(str(exc), section.line) from None


def parse_ramification(text: str, line: Optional[int] = None, column: Optional[int] = None) -> Tuple[int, ...]:
    """'2*4,3' -> (2, 2, 2, 2, 3); empty text is unramified"""
    indices: List[int] = []
    for item in filter(None, (part.strip() for part in text.split(","))):
        index, _, count = item.partition("*")
        try:
            indices.extend([int(index)] * (int(count) if count else 1))
        except ValueError:
            raise ConfigError(f"bad ramification entry '{item}'", line, column) from None
    return tuple(indices)


def render_ramification(indices: Tuple[int, ...]) -> str:
    parts = []
    for index, run in groupby(indices):
        count = len(list(run))
        parts.append(str(index) if count == 1 else f"{index}*{count}")
    return ",".join(parts)


def _build_curve(section: _Section) -> CoverSpec:
    _require(section, _CURVE_KEYS, optional=("ram", "genus"))
    options = section.options
    base_genus = _integer(options["base_genus"][0], "base_genus", section.line, options["base_genus"][1])
    degree = _integer(options["degree"][0], "degree", section.line, options["degree"][1])
    ram_text, ram_column = options.get("ram", ("", None))
    ram = parse_ramification(ram_text, section.line, ram_column)
    genus = None
    if "genus" in options:
        genus = _integer(options["genus"][0], "genus", section.line, options["genus"][1])
    try:
        return CoverSpec(base_genus, degree, ram, label=section.name, expected_genus=genus)
    except ValueError as exc:
        raise ConfigError(str(exc), section.line) from None


def loads_config(text: str, base: Optional[Presentations] = None) -> Presentations:
    """Parse config text; covers may refer to varieties of base"""
    base = base or Presentations()
    loaded = Presentations()
    for section in _tokenize(text):
        target = {"variety": loaded.varieties, "cover": loaded.covers, "curve": loaded.curves}[section.kind]
        if section.name in target:
            raise ConfigError(f"{section.kind} {section.name} defined twice", section.line)
        if section.kind == "variety":
            loaded.varieties[section.name] = _build_variety(section)
        elif section.kind == "cover":
            loaded.covers[section.name] = _build_cover(section, loaded.varieties, base)
        else:
            loaded.curves[section.name] = _build_curve(section)
    logger.info(
        f"Loaded {len(loaded.varieties)} varieties, {len(loaded.covers)} covers, "
        f"{len(loaded.curves)} curves from config"
    )
    return loaded


def load_config(path: Union[str, Path], base: Optional[Presentations] = None) -> Presentations:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return loads_config(text, base)


def apply_config(base: Presentations, loaded: Presentations) -> Presentations:
    """Merge loaded over base, rebuilding base covers whose varieties were replaced"""
    merged = base.merge(loaded)
    for name, cover in base.covers.items():
        if name in loaded.covers:
            continue
        if cover.source.name not in loaded.varieties and cover.target.name not in loaded.varieties:
            continue
        source = merged.variety(cover.source.name)
        target = merged.variety(cover.target.name)
        pullback = source.ring.parse(cover.pullback_H.render())
        merged.covers[name] = CoverPresentation.build(name, source, target, cover.degree, pullback)
        logger.info(f"Rebuilt cover {name} against configured {source.name} -> {target.name}")
    return merged


def _dump_variety(variety: VarietyPresentation) -> List[str]:
    ring = variety.ring
    lines = [f"[variety {variety.name}] dim={ring.dimension}", "gen " + " ".join(ring.generators)]
    for monomial, value in ring.top_table:
        lines.append(f"pair {ring.render_monomial(monomial)} = {value}")
    lines.append(f"c1 = {variety.tangent_c1.render()}")
    lines.append(f"c2 = {variety.tangent_c2.render()}")
    lines.append(f"todd = {variety.todd.render()}")
    return lines


def dumps_config(presentations: Presentations) -> str:
    lines: List[str] = ["# chernaudit presentations"]
    for variety in presentations.varieties.values():
        lines.append("")
        lines.extend(_dump_variety(variety))
    if presentations.covers:
        lines.append("")
    for cover in presentations.covers.values():
        lines.append(
            f"[cover {cover.name}] source={cover.source.name} target={cover.target.name} "
            f"degree={cover.degree} pullback={cover.pullback_H.render()}"
        )
    if presentations.curves:
        lines.append("")
    for name, spec in presentations.curves.items():
        line = (f"[curve {name}] base_genus={spec.base_genus} degree={spec.degree} "
                f"ram={render_ramification(spec.ram_indices)}")
        if spec.expected_genus is not None:
            line += f" genus={spec.expected_genus}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def dump_config(presentations: Presentations, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_config(presentations), encoding="utf-8")
    logger.info(f"Config written to {path}")
