"""Conic Lagrangian cycles on (C*)^n and the Euler characteristic they determine.

A cycle is a finite integer combination of conormal varieties, each given by
the subvariety it lives over: the whole torus (zero section), a point, a
hypersurface V(f) or a complete intersection V(f_1, ..., f_c). The Euler
characteristic of a constructible complex with that characteristic cycle is
sum_k mult_k * gdeg(component_k).

Document schema (JSON or YAML)::

    {"n": 2, "components": [
        {"hypersurface": "1+x+y", "mult": 2},
        {"point": [[1, 0], 2], "mult": -1},
        {"zero_section": true, "mult": 1},
        {"complete_intersection": ["x-2", "y-3"], "mult": 1}]}
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Mapping, Union

import yaml

from .euler import NONDEGENERATE, chi_curve_pick, chi_nondegenerate_hypersurface, nondegeneracy_check
from .gauss import (
    GaussDegreeReport,
    GaussError,
    Point,
    ZeroSection,
    gaussian_degree_1d,
    gaussian_degree_complete_intersection,
    gaussian_degree_hypersurface,
    gaussian_degree_special,
)
from .homotopy import TrackerConfig
from .laurent import LaurentPolynomial, ParseError, format_polynomial, parse

log = logging.getLogger(__name__)

SCHEMA_KINDS = ("zero_section", "point", "hypersurface", "complete_intersection")


class CycleError(ValueError):
    pass


@dataclass(frozen=True)
class Hypersurface:
    polynomial: LaurentPolynomial

    @property
    def dimension(self) -> int:
        return self.polynomial.dimension


@dataclass(frozen=True)
class CompleteIntersection:
    equations: tuple[LaurentPolynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(self.equations))
        if not self.equations:
            raise CycleError("a complete intersection needs at least one equation")
        n = self.equations[0].dimension
        if any(f.dimension != n for f in self.equations):
            raise CycleError("complete intersection equations differ in dimension")
        if len(self.equations) > n:
            raise CycleError(f"{len(self.equations)} equations exceed the torus dimension {n}")

    @property
    def dimension(self) -> int:
        return self.equations[0].dimension


Descriptor = Union[ZeroSection, Point, Hypersurface, CompleteIntersection]


def _kind(d: Descriptor) -> str:
    return {
        ZeroSection: "zero_section",
        Point: "point",
        Hypersurface: "hypersurface",
        CompleteIntersection: "complete_intersection",
    }[type(d)]


def _number(c: complex):
    if c.imag == 0:
        x = c.real
        return int(x) if x == int(x) and abs(x) < 1e15 else x
    return [c.real, c.imag]


def descriptor_content(d: Descriptor):
    """JSON-ready payload of a descriptor, as it appears in documents."""
    if isinstance(d, ZeroSection):
        return True
    if isinstance(d, Point):
        return [_number(c) for c in d.coordinates]
    if isinstance(d, Hypersurface):
        return format_polynomial(d.polynomial)
    return [format_polynomial(f) for f in d.equations]


def _sort_key(d: Descriptor):
    return (SCHEMA_KINDS.index(_kind(d)), json.dumps(descriptor_content(d), sort_keys=True))


@dataclass(frozen=True)
class CycleComponent:
    descriptor: Descriptor
    multiplicity: int

    @property
    def kind(self) -> str:
        return _kind(self.descriptor)


@dataclass(frozen=True)
class LagrangianCycle:
    n: int
    components: tuple[CycleComponent, ...]

    def __post_init__(self):
        comps = tuple(sorted(self.components, key=lambda c: _sort_key(c.descriptor)))
        seen = set()
        for c in comps:
            if c.multiplicity == 0:
                raise CycleError("multiplicities must be nonzero")
            if c.descriptor.dimension != self.n:
                raise CycleError(f"component {descriptor_content(c.descriptor)!r} is not in dimension {self.n}")
            if c.descriptor in seen:
                raise CycleError(f"duplicate component {descriptor_content(c.descriptor)!r}")
            seen.add(c.descriptor)
        object.__setattr__(self, "components", comps)

    def __add__(self, other: "LagrangianCycle") -> "LagrangianCycle":
        return combine([(1, self), (1, other)])

    def scaled(self, k: int) -> "LagrangianCycle":
        if k == 0:
            return LagrangianCycle(self.n, ())
        return LagrangianCycle(self.n, tuple(CycleComponent(c.descriptor, k * c.multiplicity) for c in self.components))

    def to_document(self) -> dict:
        return {
            "n": self.n,
            "components": [
                {_kind(c.descriptor): descriptor_content(c.descriptor), "mult": c.multiplicity} for c in self.components
            ],
        }

    def dumps(self) -> str:
        """Canonical serialization (components sorted by kind, then content)."""
        return json.dumps(self.to_document(), sort_keys=True, separators=(",", ":"))


def combine(terms) -> LagrangianCycle:
    """Integer combination sum a_k * C_k; components with zero total multiplicity vanish."""
    terms = list(terms)
    if not terms:
        raise CycleError("empty combination")
    n = terms[0][1].n
    acc: dict = {}
    for a, cyc in terms:
        if cyc.n != n:
            raise CycleError("cycles live in different dimensions")
        for c in cyc.components:
            acc[c.descriptor] = acc.get(c.descriptor, 0) + a * c.multiplicity
    return LagrangianCycle(n, tuple(CycleComponent(d, m) for d, m in acc.items() if m != 0))


def _parse_complex(v, where: str) -> complex:
    if isinstance(v, bool):
        raise CycleError(f"{where}: expected a number")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        return complex(v[0], v[1])
    raise CycleError(f"{where}: expected a number or [re, im]")


def parse_descriptor(entry: Mapping[str, Any], n: int, where: str = "component") -> Descriptor:
    kinds = [k for k in SCHEMA_KINDS if k in entry]
    unknown = set(entry) - set(SCHEMA_KINDS) - {"mult"}
    if unknown:
        raise CycleError(f"{where}: unknown field(s) {sorted(unknown)}")
    if len(kinds) != 1:
        raise CycleError(f"{where}: exactly one of {', '.join(SCHEMA_KINDS)} is required")
    kind = kinds[0]
    val = entry[kind]
    try:
        if kind == "zero_section":
            if val is not True:
                raise CycleError(f"{where}: zero_section must be true")
            return ZeroSection(n)
        if kind == "point":
            if not isinstance(val, list) or len(val) != n:
                raise CycleError(f"{where}: point needs {n} coordinates")
            return Point(tuple(_parse_complex(v, where) for v in val))
        if kind == "hypersurface":
            if not isinstance(val, str):
                raise CycleError(f"{where}: hypersurface must be a polynomial string")
            return Hypersurface(parse(val, n))
        if not isinstance(val, list) or not all(isinstance(v, str) for v in val):
            raise CycleError(f"{where}: complete_intersection must be a list of polynomial strings")
        return CompleteIntersection(tuple(parse(v, n) for v in val))
    except (GaussError, ParseError) as exc:
        raise CycleError(f"{where}: {exc}") from exc


def parse_cycle(document) -> LagrangianCycle:
    """Validate a cycle document (mapping, or JSON/YAML text)."""
    if isinstance(document, (str, bytes)):
        try:
            document = yaml.safe_load(document)
        except yaml.YAMLError as exc:
            raise CycleError(f"cannot read cycle document: {exc}") from exc
    if not isinstance(document, Mapping):
        raise CycleError("cycle document must be a mapping")
    extra = set(document) - {"n", "components"}
    if extra:
        raise CycleError(f"unknown top-level field(s) {sorted(extra)}")
    n = document.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise CycleError("field n must be a positive integer")
    comps = document.get("components")
    if not isinstance(comps, list):
        raise CycleError("field components must be a list")
    out = []
    for i, entry in enumerate(comps):
        where = f"component {i}"
        if not isinstance(entry, Mapping):
            raise CycleError(f"{where}: must be a mapping")
        mult = entry.get("mult")
        if not isinstance(mult, int) or isinstance(mult, bool):
            raise CycleError(f"{where}: mult must be an integer")
        if mult == 0:
            raise CycleError(f"{where}: zero multiplicity")
        out.append(CycleComponent(parse_descriptor(entry, n, where), mult))
    return LagrangianCycle(n, tuple(out))


def cc_of_constant_on_smooth(descriptor: Descriptor) -> LagrangianCycle:
    """Characteristic cycle of the shifted constant sheaf on a smooth closed Z: [T*_Z] once."""
    return LagrangianCycle(descriptor.dimension, (CycleComponent(descriptor, 1),))


@dataclass
class ComponentReport:
    kind: str
    content: Any
    multiplicity: int
    gdeg: int
    agreed: bool
    report: GaussDegreeReport | None = None

    def as_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "content": self.content,
            "mult": self.multiplicity,
            "gdeg": self.gdeg,
            "agreed": self.agreed,
        }
        if self.report is not None:
            out["gauss"] = self.report.as_dict()
        return out


@dataclass
class ChiViaCCReport:
    chi: int
    components: list[ComponentReport] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"chi": self.chi, "components": [c.as_dict() for c in self.components]}


class CycleEvaluationError(RuntimeError):
    def __init__(self, message: str, partial: ChiViaCCReport | None = None):
        super().__init__(message)
        self.partial = partial


def component_gdeg(descriptor: Descriptor, cfg: TrackerConfig, samples: int = 3) -> tuple[int, bool, GaussDegreeReport | None]:
    if isinstance(descriptor, (ZeroSection, Point)):
        return gaussian_degree_special(descriptor), True, None
    if isinstance(descriptor, Hypersurface):
        f = descriptor.polynomial
        if f.dimension == 1:
            return gaussian_degree_1d(f), True, None
        rep = gaussian_degree_hypersurface(f, cfg, samples)
        return rep.gdeg, rep.agreed, rep
    rep = gaussian_degree_complete_intersection(list(descriptor.equations), cfg, samples)
    return rep.gdeg, rep.agreed, rep


def chi_via_cc(cycle: LagrangianCycle, cfg: TrackerConfig | None = None, samples: int = 3, cache: dict | None = None) -> ChiViaCCReport:
    """sum of multiplicity * Gaussian degree over the components.

    Raises CycleEvaluationError if any component's samples did not agree.
    ``cache`` maps descriptors to (gdeg, agreed, report) and may be shared
    across calls with the same configuration.
    """
    cfg = cfg or TrackerConfig()
    cache = {} if cache is None else cache
    total = 0
    comps = []
    for c in cycle.components:
        key = c.descriptor
        if key not in cache:
            cache[key] = component_gdeg(c.descriptor, cfg, samples)
        g, agreed, rep = cache[key]
        comps.append(ComponentReport(c.kind, descriptor_content(c.descriptor), c.multiplicity, g, agreed, rep))
        total += c.multiplicity * g
    report = ChiViaCCReport(total, comps)
    bad = [c for c in comps if not c.agreed]
    if bad:
        raise CycleEvaluationError(
            f"Gaussian degree samples disagree for {', '.join(repr(c.content) for c in bad)}", report
        )
    return report


@dataclass
class Cor15Verdict:
    """Comparison of gdeg(V(f)) with (-1)^dim chi(V(f)) for a nondegenerate f."""

    polynomial: str
    n: int
    status: str  # "equal" | "unequal" | "not applicable"
    gdeg: int | None = None
    signed_chi: int | None = None
    chi: int | None = None
    pick_chi: int | None = None
    nondegeneracy: str = ""
    agreed: bool | None = None
    bkk: int | None = None
    gauss: GaussDegreeReport | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def equal(self) -> bool:
        return self.status == "equal"

    def as_dict(self) -> dict:
        return {
            "polynomial": self.polynomial,
            "n": self.n,
            "status": self.status,
            "gdeg": self.gdeg,
            "signed_chi": self.signed_chi,
            "chi": self.chi,
            "pick_chi": self.pick_chi,
            "nondegeneracy": self.nondegeneracy,
            "agreed": self.agreed,
            "bkk": self.bkk,
            "notes": list(self.notes),
        }


def verify_cor_1_5(f: LaurentPolynomial, cfg: TrackerConfig | None = None, samples: int = 3) -> Cor15Verdict:
    """Numerical Gaussian degree against the combinatorial Euler characteristic."""
    cfg = cfg or TrackerConfig()
    n = f.dimension
    text = format_polynomial(f)
    verdict = nondegeneracy_check(f, cfg)
    out = Cor15Verdict(text, n, "not applicable", nondegeneracy=str(verdict))
    if verdict.status != NONDEGENERATE:
        out.notes.append("input is not Newton nondegenerate; the volume formula does not apply")
        return out
    chi = chi_nondegenerate_hypersurface(f)
    out.chi = chi.chi
    out.signed_chi = (-1) ** (n - 1) * chi.chi
    if n == 2:
        out.pick_chi = chi_curve_pick(f).chi
    if n == 1:
        out.gdeg = gaussian_degree_1d(f)
        out.agreed = True
    else:
        rep = gaussian_degree_hypersurface(f, cfg, samples)
        out.gauss = rep
        out.gdeg, out.agreed, out.bkk = rep.gdeg, rep.agreed, rep.bkk
        out.notes.extend(rep.warnings)
    if out.signed_chi < 0:
        out.notes.append("signed Euler characteristic is negative")
    out.status = "equal" if out.gdeg == out.signed_chi else "unequal"
    return out
