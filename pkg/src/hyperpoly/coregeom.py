"""Core components, their fixed loci and intersections, and the incidence graph."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .combinat import Alpha, Subset, core_index_set, enumerate_shorts, is_short
from .errors import ClaimViolation, NotShort, SubsetTooSmall
from .presentations import (
    betti,
    core_ordinary_ideal,
    euler_of_polygon_space,
    relabel_one_in_s,
)


@dataclass(frozen=True)
class CoreComponent:
    kind: str  # "M" or "U_S"
    S: Optional[Subset]
    complex_dimension: int

    @property
    def ident(self) -> str:
        return "M" if self.S is None else "U_" + self.S.label("_")


@dataclass(frozen=True)
class FixedLocus:
    kind: str  # "M_S" or "XT_CAP_US"
    S: Subset
    T: Optional[Subset]
    model: str
    complex_dimension: int

    @property
    def ident(self) -> str:
        if self.kind == "M_S":
            return "M_S_" + self.S.label("_")
        return "XT_" + self.T.label("_")


def polygon_space_nonempty(a: Alpha, merged: Sequence[Subset] = ()) -> bool:
    """Whether the polygon space with the given blocks of edges merged is nonempty.

    A generic polygon closes exactly when every edge is shorter than the sum of
    the others, i.e. every block and every remaining single edge is short.
    """
    used = Subset(0, a.n)
    for block in merged:
        if not is_short(a, block):
            return False
        used = used | block
    return all(is_short(a, Subset.of(a.n, [j])) for j in used.complement())


def core_components(a: Alpha) -> list[CoreComponent]:
    """``M`` (when nonempty) followed by ``U_S`` for each short ``S`` with ``|S| >= 2``."""
    dim = a.n - 3
    out = [CoreComponent("M", None, dim)] if polygon_space_nonempty(a) else []
    out += [CoreComponent("U_S", s, dim) for s in core_index_set(a)]
    return out


def _check_core(a: Alpha, s: Subset):
    if not is_short(a, s):
        raise NotShort(f"S={s} is long")
    if len(s) < 2:
        raise SubsetTooSmall(f"S={s} has fewer than two elements")


def short_supersets(a: Alpha, s: Subset, strict: bool = False) -> list[Subset]:
    return [t for t in enumerate_shorts(a, len(s)) if s.issubset(t) and not (strict and t == s)]


def fixed_loci(a: Alpha, s: Subset) -> list[FixedLocus]:
    _check_core(a, s)
    edges = [f"alpha_{j}" for j in s.complement()] + ["sum_S"]
    out = [FixedLocus("M_S", s, None, "polygon space with edges {" + ", ".join(edges) + "}", a.n - len(s) - 2)]
    for t in short_supersets(a, s):
        k = len(s) - 2
        out.append(FixedLocus("XT_CAP_US", s, t, f"CP^{k}", k))
    return out


class IntersectionKind(str, enum.Enum):
    POLYGON_SUBSPACE = "POLYGON_SUBSPACE"
    EMPTY = "EMPTY"
    SUBBUNDLE_IN_U_UNION = "SUBBUNDLE_IN_U_UNION"


@dataclass(frozen=True)
class Intersection:
    kind: IntersectionKind
    subsets: tuple[Subset, ...]
    container: Optional[Subset]  # the union, for SUBBUNDLE_IN_U_UNION
    description: str
    nonempty: bool = True  # a polygon subspace may be empty


def classify_family(a: Alpha, family: Iterable[Subset]) -> Intersection:
    """Three-way rule for ``U_S1 & ... & U_Sk`` via the common part and the union."""
    family = tuple(family)
    for s in family:
        _check_core(a, s)
    common = family[0]
    union = family[0]
    for s in family[1:]:
        common = common & s
        union = union | s
    names = " & ".join(f"U_{{{s.label()}}}" for s in family)
    if common.mask == 0:
        nonempty = polygon_space_nonempty(a, family) if _pairwise_disjoint(family) else True
        desc = f"{names} = intersection of the polygon subspaces M_S"
        return Intersection(IntersectionKind.POLYGON_SUBSPACE, family, None, desc, nonempty)
    if not is_short(a, union):
        return Intersection(IntersectionKind.EMPTY, family, None, f"{names} is empty: union {{{union.label()}}} is long", False)
    desc = (
        f"{names} lies in U_{{{union.label()}}}: {{{union.label()}}} straight, "
        f"p_j = 0 off {{{common.label()}}}"
    )
    return Intersection(IntersectionKind.SUBBUNDLE_IN_U_UNION, family, union, desc)


def _pairwise_disjoint(family: Sequence[Subset]) -> bool:
    seen = 0
    for s in family:
        if seen & s.mask:
            return False
        seen |= s.mask
    return True


def classify_intersection(a: Alpha, s: Subset, t: Subset) -> Intersection:
    if s == t:
        raise ValueError("classify_intersection needs two distinct subsets")
    return classify_family(a, (s, t))


@dataclass(frozen=True)
class EulerCheck:
    S: Subset
    euler_core: int
    euler_polygon: int
    fixed_points: int  # number of short T containing S
    weight: int  # Euler characteristic of each CP^(|S|-2) locus

    @property
    def rhs(self) -> int:
        return self.euler_polygon + self.weight * self.fixed_points

    @property
    def ok(self) -> bool:
        return self.euler_core == self.rhs

    def to_json(self) -> dict:
        return {
            "s": self.S.to_json(),
            "euler_core": self.euler_core,
            "euler_polygon_subspace": self.euler_polygon,
            "short_supersets": self.fixed_points,
            "rhs": self.rhs,
            "ok": self.ok,
        }


def euler_cross_check(a: Alpha, s: Subset) -> EulerCheck:
    """Euler characteristic of ``U_S`` against its fixed loci.

    Raises ``ClaimViolation`` when the two sides differ.
    """
    _check_core(a, s)
    rl = relabel_one_in_s(a, s)
    b, t = rl.alpha, rl.subset
    chk = EulerCheck(
        s,
        betti(core_ordinary_ideal(b, t)).euler,
        euler_of_polygon_space(b, t),
        len(short_supersets(b, t)),
        len(t) - 1,
    )
    if not chk.ok:
        raise ClaimViolation(f"Euler check for S={s}: {chk.euler_core} != {chk.euler_polygon} + {chk.weight}*{chk.fixed_points}", witness=s)
    return chk


@dataclass(frozen=True)
class CoreGraph:
    nodes: tuple[tuple[str, dict], ...]
    edges: tuple[tuple[str, str, dict], ...]

    def to_json(self) -> dict:
        return {
            "nodes": [{"id": i, **attrs} for i, attrs in self.nodes],
            "edges": [{"source": u, "target": v, **attrs} for u, v, attrs in self.edges],
        }

    def to_dot(self, name: str = "core") -> str:
        lines = [f"graph {name} {{"]
        for i, attrs in self.nodes:
            lines.append(f'  {i} [label="{attrs["label"]}", dim={attrs["dim"]}];')
        for u, v, attrs in self.edges:
            lines.append(f'  {u} -- {v} [kind="{attrs["kind"]}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def global_graph(a: Alpha) -> CoreGraph:
    comps = core_components(a)
    nodes = []
    for c in comps:
        label = "M" if c.S is None else f"U_{{{c.S.label()}}}"
        nodes.append((c.ident, {"label": label, "dim": c.complex_dimension}))
    edges = []
    has_m = bool(comps) and comps[0].S is None
    subsets = [c.S for c in comps if c.S is not None]
    if has_m:
        for s in subsets:
            if polygon_space_nonempty(a, [s]):
                edges.append(("M", "U_" + s.label("_"), {"kind": "M_S"}))
    for i, s in enumerate(subsets):
        for t in subsets[i + 1:]:
            inter = classify_intersection(a, s, t)
            if inter.nonempty:
                edges.append(("U_" + s.label("_"), "U_" + t.label("_"), {"kind": inter.kind.value}))
    return CoreGraph(tuple(nodes), tuple(edges))


def component_graph(a: Alpha, s: Subset) -> CoreGraph:
    """Fixed loci of ``U_S`` with the incidences ``M_S -- (X_T & U_S)``.

    Only the edges documented for the example surface are emitted: one from
    ``M_S`` to ``X_S`` and one to each ``X_T & U_S`` with ``T`` a strict short
    superset (the curve ``U_S & U_T`` touching ``M_S`` at ``M_T``).
    """
    loci = fixed_loci(a, s)
    nodes = []
    for f in loci:
        label = f"M_{{{s.label()}}}" if f.kind == "M_S" else f"X_{{{f.T.label()}}} & U_S"
        nodes.append((f.ident, {"label": label, "dim": f.complex_dimension, "model": f.model}))
    m_id = loci[0].ident
    edges = []
    for f in loci[1:]:
        kind = "flow_to_X_S" if f.T == s else "closure_U_T"
        edges.append((m_id, f.ident, {"kind": kind}))
    return CoreGraph(tuple(nodes), tuple(edges))


def emit_core_graph(a: Alpha, scope: str = "global", fmt: str = "dot", s: Subset | None = None) -> str:
    scope = scope.lower()
    if scope == "global":
        g = global_graph(a)
    elif scope == "component":
        if s is None:
            raise ValueError("component scope needs a subset S")
        g = component_graph(a, s)
    else:
        raise ValueError(f"unknown scope {scope!r}")
    if fmt == "dot":
        return g.to_dot()
    if fmt == "json":
        return json.dumps(g.to_json(), indent=2, sort_keys=True) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
