"""Ring presentations for hyperpolygon spaces and their core components.

Rings used here:

* ``Q[c_1..c_n, p]`` (and ``x`` for the circle-equivariant version), with
  ``deg c_i = 1`` and ``deg p = 2``.
* ``Q[b_1..b_n]`` (and ``x``) for the core components, where
  ``b_k = (c_1 + c_k) / 2``.

Presentations attached to a subset ``S`` follow the convention ``1 in S``;
``relabel_one_in_s`` produces an explicit relabeling when that fails.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from typing import Optional

from .combinat import (
    Alpha,
    Subset,
    all_subsets,
    enumerate_shorts,
    is_long,
    is_short,
    subset_markers,
)
from .errors import NotShort, RequiresOneInS, SubsetTooSmall
from .exactalg import (
    GradedIdeal,
    HilbertTable,
    PolyRing,
    Polynomial,
    hilbert_function,
    ideal_slices_equal,
    prod,
)


class Provenance(str, enum.Enum):
    KONNO_I = "KONNO_I"
    MAIN_J = "MAIN_J"
    EQCORE_J_S = "EQCORE_J_S"
    ORDCORE_I_S = "ORDCORE_I_S"
    POLS_KER = "POLS_KER"
    DERIVED = "DERIVED"


@dataclass(frozen=True)
class Relabeling:
    """Edge relabeling ``old -> perm[old - 1]`` that puts edge 1 into ``S``."""

    perm: tuple[int, ...]
    alpha: Alpha
    subset: Subset

    @property
    def is_identity(self) -> bool:
        return all(p == i for i, p in enumerate(self.perm, 1))

    def to_json(self) -> dict:
        return {
            "permutation": {str(i): p for i, p in enumerate(self.perm, 1) if p != i},
            "alpha": self.alpha.to_json(),
            "s": self.subset.to_json(),
        }


def relabel_one_in_s(a: Alpha, s: Subset) -> Relabeling:
    """Swap edge 1 with ``min S`` when ``1 not in S``."""
    perm = list(range(1, a.n + 1))
    if 1 not in s and s.mask:
        m = s.elements()[0]
        perm[0], perm[m - 1] = m, 1
    mapping = {i: p for i, p in enumerate(perm, 1)}
    return Relabeling(tuple(perm), a.permuted(mapping), Subset.of(a.n, (mapping[i] for i in s)))


@dataclass(frozen=True)
class Presentation:
    ideal: GradedIdeal
    provenance: Provenance
    alpha: Alpha
    subset: Optional[Subset] = None
    note: str = ""
    relabeling: Optional[Relabeling] = field(default=None, compare=False)

    @property
    def ring(self) -> PolyRing:
        return self.ideal.ring

    def to_json(self) -> dict:
        out = {
            "provenance": self.provenance.value,
            "alpha": self.alpha.to_json(),
            "s": self.subset.to_json() if self.subset is not None else None,
            **self.ideal.to_json(),
        }
        if self.note:
            out["note"] = self.note
        if self.relabeling is not None and not self.relabeling.is_identity:
            out["relabeling"] = self.relabeling.to_json()
        return out


def c_ring(n: int, equivariant: bool = False) -> PolyRing:
    names = [f"c{i}" for i in range(1, n + 1)] + ["p"] + (["x"] if equivariant else [])
    return PolyRing.build(names, degrees={"p": 2})


def b_ring(n: int, equivariant: bool = False) -> PolyRing:
    return PolyRing.build([f"b{i}" for i in range(1, n + 1)] + (["x"] if equivariant else []))


@functools.lru_cache(maxsize=256)
def konno_ideal(a: Alpha) -> Presentation:
    """``p - c_i^2`` for every edge, truncated at algebraic degree ``n - 2``."""
    n = a.n
    R = c_ring(n)
    p = R.var("p")
    gens = [p - R.var(f"c{i}") ** 2 for i in range(1, n + 1)]
    return Presentation(GradedIdeal(R, gens, truncation=n - 2), Provenance.KONNO_I, a)


def _main_family2(R: PolyRing, s: Subset, x: Polynomial) -> Polynomial:
    mk = subset_markers(s)
    c = lambda i: R.var(f"c{i}")  # noqa: E731
    return prod((c(j) + c(mk.n) for j in mk.sc_bar), R) * prod((c(i) + x for i in mk.s_bar), R)


@functools.lru_cache(maxsize=256)
def equivariant_ideal(a: Alpha) -> Presentation:
    n = a.n
    R = c_ring(n, equivariant=True)
    p, x = R.var("p"), R.var("x")
    gens = [p - R.var(f"c{i}") ** 2 for i in range(1, n + 1)]
    gens += [_main_family2(R, s, x) for s in enumerate_shorts(a, 1)]
    return Presentation(GradedIdeal(R, gens), Provenance.MAIN_J, a)


def _check_core_subset(a: Alpha, s: Subset, min_size: int):
    if not is_short(a, s):
        raise NotShort(f"S={s} is long for alpha={a}")
    if len(s) < min_size:
        raise SubsetTooSmall(f"S={s} needs at least {min_size} elements")
    if 1 not in s:
        raise RequiresOneInS(f"S={s} must contain 1; relabel first")


def long_completions(a: Alpha, s: Subset, minimal: bool = True) -> list[Subset]:
    """``R`` inside ``S^c`` with ``R | S`` long, inclusion-minimal by default."""
    sc = s.complement()
    out: list[Subset] = []
    for r in all_subsets(a.n):
        if not r.issubset(sc) or not is_long(a, r | s):
            continue
        if minimal and any(prev.issubset(r) for prev in out):
            continue
        out.append(r)
    return out


def long_subsets_of_complement(a: Alpha, s: Subset) -> list[Subset]:
    sc = s.complement()
    return [L for L in all_subsets(a.n) if L.issubset(sc) and is_long(a, L)]


def _core_base_families(a: Alpha, s: Subset, R: PolyRing, minimal: bool) -> list[Polynomial]:
    b = lambda i: R.var(f"b{i}")  # noqa: E731
    gens = [b(1) - b(i) for i in s if i != 1]
    gens += [b(j) * (b(1) - b(j)) for j in s.complement()]
    gens += [prod((b(j) for j in r), R) for r in long_completions(a, s, minimal)]
    return gens


def _polygon_relation(R: PolyRing, L: Subset) -> Polynomial:
    """``(prod_L (b_j - b_1) - prod_L b_j) / b_1``."""
    b = lambda i: R.var(f"b{i}")  # noqa: E731
    diff = prod((b(j) - b(1) for j in L), R) - prod((b(j) for j in L), R)
    return diff.divide_by_variable("b1")


@functools.lru_cache(maxsize=256)
def core_equivariant_ideal(a: Alpha, s: Subset, minimal: bool = True) -> Presentation:
    _check_core_subset(a, s, 2)
    R = b_ring(a.n, equivariant=True)
    gens = _core_base_families(a, s, R, minimal)
    lift = (R.var("b1") + R.var("x")) ** (len(s) - 1)
    gens += [lift * _polygon_relation(R, L) for L in long_subsets_of_complement(a, s)]
    return Presentation(GradedIdeal(R, gens), Provenance.EQCORE_J_S, a, s)


@functools.lru_cache(maxsize=256)
def core_ordinary_ideal(a: Alpha, s: Subset, minimal: bool = True) -> Presentation:
    _check_core_subset(a, s, 2)
    R = b_ring(a.n)
    b = lambda i: R.var(f"b{i}")  # noqa: E731
    gens = _core_base_families(a, s, R, minimal)
    lead = b(1) ** (len(s) - 2)
    gens += [lead * prod((b(j) - b(1) for j in L), R) for L in long_subsets_of_complement(a, s)]
    return Presentation(GradedIdeal(R, gens), Provenance.ORDCORE_I_S, a, s)


@functools.lru_cache(maxsize=256)
def polygon_subspace_kernel(a: Alpha, s: Subset, equivariant_factor: bool = False, minimal: bool = True) -> Presentation:
    """Relations of the polygon subspace ``M_S`` in ``Q[b_1..b_n, x]``.

    The fourth family is ``(prod_L (b_j - b_1) - prod_L b_j) / b_1`` for long
    ``L`` inside ``S^c``; ``x`` stays free because the circle fixes ``M_S``
    pointwise.  ``equivariant_factor=True`` multiplies that family by
    ``(b_1 + x)^(|S|-1)``, which reproduces the core-component ideal instead.
    """
    _check_core_subset(a, s, 1)
    R = b_ring(a.n, equivariant=True)
    gens = _core_base_families(a, s, R, minimal)
    lift = (R.var("b1") + R.var("x")) ** (len(s) - 1) if equivariant_factor else R.one()
    gens += [lift * _polygon_relation(R, L) for L in long_subsets_of_complement(a, s)]
    return Presentation(GradedIdeal(R, gens), Provenance.POLS_KER, a, s)


@functools.lru_cache(maxsize=256)
def specialize_x(pres: Presentation) -> Presentation:
    """Set ``x = 0`` and drop it from the ring."""
    R = pres.ring.without("x")
    gens = [g.set_zero("x", R) for g in pres.ideal.generators]
    note = f"{pres.provenance.value} at x=0"
    return Presentation(GradedIdeal(R, gens, pres.ideal.truncation), Provenance.DERIVED, pres.alpha, pres.subset, note)


@functools.lru_cache(maxsize=256)
def eliminate_forced(pres: Presentation) -> Presentation:
    """Substitute the linear relations forced on a core component.

    ``b_i -> b_1`` for ``i in S`` and ``b_j -> 0`` when ``S | {j}`` is long.
    The quotient ring is unchanged; only the surviving variables remain.
    """
    a, s = pres.alpha, pres.subset
    killed = [j for j in s.complement() if is_long(a, s.add(j))]
    drop = [f"b{i}" for i in s if i != 1] + [f"b{j}" for j in killed]
    R = pres.ring.without(*drop)
    mapping = {f"b{i}": R.var("b1") for i in s if i != 1}
    mapping.update({f"b{j}": 0 for j in killed})
    gens = [g.substitute(mapping, R) for g in pres.ideal.generators]
    note = f"{pres.provenance.value} on surviving variables"
    return Presentation(GradedIdeal(R, gens, pres.ideal.truncation), Provenance.DERIVED, a, s, note)


def default_max_degree(a: Alpha) -> int:
    return a.n


def forced_linear_forms(pres: Presentation) -> list[Polynomial]:
    a, s = pres.alpha, pres.subset
    R = pres.ring
    b = lambda i: R.var(f"b{i}")  # noqa: E731
    forms = [b(1) - b(i) for i in s if i != 1]
    return forms + [b(j) for j in s.complement() if is_long(a, s.add(j))]


def reduced_ideal(pres: Presentation) -> GradedIdeal:
    """An ideal with the same quotient, on fewer variables when possible.

    When the ideal contains the forced linear forms, substituting them out
    gives an isomorphic graded quotient.
    """
    if pres.subset is None or "b1" not in pres.ring.names:
        return pres.ideal
    if any(f"b{i}" not in pres.ring.names for i in range(1, pres.alpha.n + 1)):
        return pres.ideal
    if not all(pres.ideal.contains(f) for f in forced_linear_forms(pres)):
        return pres.ideal
    return eliminate_forced(pres).ideal


def betti(pres: Presentation, max_degree: int | None = None) -> HilbertTable:
    """Graded dimensions of the quotient, trailing zeros removed."""
    if max_degree is None:
        max_degree = default_max_degree(pres.alpha)
    return hilbert_function(reduced_ideal(pres), max_degree).trimmed()


@dataclass(frozen=True)
class FreenessReport:
    ok: bool
    equivariant_dims: tuple[int, ...]
    partial_sums: tuple[int, ...]
    divergence: Optional[int]

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "free": self.ok,
            "equivariant_dims": list(self.equivariant_dims),
            "ordinary_partial_sums": list(self.partial_sums),
            "divergence_degree": self.divergence,
        }


def freeness_between(equivariant: GradedIdeal, ordinary: GradedIdeal, max_degree: int) -> FreenessReport:
    """Check that the equivariant quotient is free over ``Q[x]`` with fiber the ordinary one."""
    eq = hilbert_function(equivariant, max_degree).dims
    od = hilbert_function(ordinary, max_degree).dims
    sums, acc = [], 0
    for v in od:
        acc += v
        sums.append(acc)
    div = next((d for d in range(max_degree + 1) if eq[d] != sums[d]), None)
    return FreenessReport(div is None, eq, tuple(sums), div)


def freeness_check(a: Alpha, s: Subset | None = None, max_degree: int | None = None) -> FreenessReport:
    if max_degree is None:
        max_degree = default_max_degree(a)
    if s is None:
        return freeness_between(equivariant_ideal(a).ideal, konno_ideal(a).ideal, max_degree)
    return freeness_between(
        reduced_ideal(core_equivariant_ideal(a, s)), reduced_ideal(core_ordinary_ideal(a, s)), max_degree
    )


def kirwan_image_check(a: Alpha, s: Subset | None = None):
    """Compare the ``x = 0`` image of the equivariant ideal with the ordinary one.

    Through degree ``n - 2`` for the whole space and ``n - 1`` for a core
    component.  Both core ideals contain the same forced linear forms, so they
    agree exactly when their images on the surviving variables agree.
    """
    if s is None:
        image = specialize_x(equivariant_ideal(a)).ideal
        target = konno_ideal(a).ideal
        top = a.n - 2
    else:
        image = reduced_ideal(specialize_x(core_equivariant_ideal(a, s)))
        target = reduced_ideal(core_ordinary_ideal(a, s))
        top = a.n - 1
    return ideal_slices_equal(image, target, top)


def top_degree_dimension(a: Alpha) -> int:
    """Dimension of the degree ``n - 3`` piece of the ordinary cohomology of X."""
    return hilbert_function(konno_ideal(a).ideal, max(a.n - 3, 0)).dims[-1]


def euler_of_polygon_space(a: Alpha, s: Subset) -> int:
    """Euler characteristic of ``M_S`` from the ``x = 0`` polygon-subspace quotient."""
    return betti(specialize_x(polygon_subspace_kernel(a, s))).euler
