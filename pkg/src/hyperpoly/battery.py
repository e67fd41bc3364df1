"""Fixed test battery and the exhaustive self-test sweep."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .claims import verify_claims
from .combinat import Alpha, Subset, core_index_set, enumerate_shorts, validate_alpha
from .coregeom import classify_intersection, core_components, euler_cross_check
from .errors import ClaimViolation
from .momentmap import is_stable, random_polygon_pair, round_trip
from .presentations import (
    betti,
    euler_of_polygon_space,
    freeness_check,
    kirwan_image_check,
    konno_ideal,
    relabel_one_in_s,
    top_degree_dimension,
)

BATTERY_LENGTHS: tuple[tuple[int, ...], ...] = (
    (1, 2, 2),
    (1, 1, 1, 2),
    (1, 2, 2, 2),
    (1, 1, 1, 1, 1),
    (1, 1, 3, 3, 3),
    (1, 1, 1, 1, 3),
    (1, 2, 3, 4, 5),
    (1, 1, 1, 1, 1, 2),
    (1, 1, 2, 2, 3, 4),
    (1, 2, 3, 4, 5, 6),
    (1, 1, 1, 1, 1, 4),
    (1, 1, 1, 2, 2, 2),
)

# (alpha, S) pairs for the floating-point checks
REDUCED_BATTERY: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = (
    ((1, 1, 3, 3, 3), (1, 2)),
    ((1, 1, 3, 3, 3), (1, 3)),
    ((1, 1, 3, 3, 3), (1, 2, 3)),
    ((1, 1, 1, 2), (2, 3)),
    ((1, 2, 3, 4, 5, 6), (1, 2, 3)),
    ((1, 1, 1, 1, 1, 2), (3, 5)),
)


def battery() -> list[Alpha]:
    return [validate_alpha(v) for v in BATTERY_LENGTHS]


def reduced_battery() -> list[tuple[Alpha, Subset]]:
    out = []
    for v, s in REDUCED_BATTERY:
        a = validate_alpha(v)
        out.append((a, Subset.of(a.n, s)))
    return out


def _require(cond: bool, message: str, witness=None):
    if not cond:
        raise ClaimViolation(message, witness)


def check_alpha(a: Alpha) -> dict:
    """Every exact identity for one edge-length vector; raises ``ClaimViolation``."""
    n = a.n
    shorts = enumerate_shorts(a, 1)
    _require(len(shorts) == 2 ** (n - 1) - 1, f"{len(shorts)} nonempty shorts for {a}")
    core = core_index_set(a)
    comps = core_components(a)
    _require(len(comps) == len(core) + 1, f"M is empty for {a}")
    hx = betti(konno_ideal(a))
    top = top_degree_dimension(a)
    _require(top == len(comps), f"top degree {top} != {len(comps)} components", a)
    fx = freeness_check(a)
    _require(fx.ok, f"freeness fails for X at degree {fx.divergence}", a)
    _require(bool(kirwan_image_check(a)), "x = 0 image differs from the ordinary ideal", a)
    euler_m = euler_of_polygon_space(a, Subset.of(n, [1]))
    weight = sum(len(s) - 1 for s in core)
    _require(hx.euler == euler_m + weight, f"euler(X) {hx.euler} != {euler_m} + {weight}", a)

    components = []
    for s in core:
        rl = relabel_one_in_s(a, s)
        b, t = rl.alpha, rl.subset
        fr = freeness_check(b, t)
        _require(fr.ok, f"freeness fails for U_{s} at degree {fr.divergence}", s)
        _require(bool(kirwan_image_check(b, t)), f"x = 0 image differs for U_{s}", s)
        chk = euler_cross_check(a, s)
        components.append({"s": s.to_json(), "euler": chk.euler_core, "euler_polygon_subspace": chk.euler_polygon})

    kinds: dict[str, int] = {}
    for i, s in enumerate(core):
        for t in core[i + 1:]:
            k1 = classify_intersection(a, s, t).kind
            _require(k1 == classify_intersection(a, t, s).kind, f"classification not symmetric for {s}, {t}")
            kinds[k1.value] = kinds.get(k1.value, 0) + 1

    claims = verify_claims(a)
    return {
        "alpha": a.to_json(),
        "nonempty_shorts": len(shorts),
        "core_components": len(comps),
        "hilbert_x": hx.to_json(),
        "equivariant_x": list(fx.equivariant_dims),
        "euler_m": euler_m,
        "components": components,
        "intersections": dict(sorted(kinds.items())),
        "claims": claims.to_json(),
    }


def check_moment_map(a: Alpha, s: Subset, rng: np.random.Generator, samples: int, tol: float) -> dict:
    worst = 0.0
    for k in range(samples):
        rt = round_trip(a, s, random_polygon_pair(rng, a, s, with_u=k % 10 != 0), tol)
        worst = max(worst, rt.max_residual)
        _require(rt.max_residual <= tol, f"round-trip residual {rt.max_residual:.3e} for S={s}")
        _require(is_stable(a, rt.point, tol).stable, f"constructed point over S={s} is unstable")
    return {"alpha": a.to_json(), "s": s.to_json(), "samples": samples, "max_residual": f"{worst:.1e}"}


def selftest(seed: int = 0, samples: int = 20, tol: float = 1e-9, alphas: Iterable[Alpha] | None = None) -> dict:
    alphas = list(battery() if alphas is None else alphas)
    rng = np.random.default_rng(seed)
    return {
        "seed": seed,
        "exact": [check_alpha(a) for a in alphas],
        "moment_map": [check_moment_map(a, s, rng, samples, tol) for a, s in reduced_battery()],
        "ok": True,
    }
