"""Floating-point side: group action, moment maps, stability and polygon pairs.

Points of ``T*C^{2n}`` are pairs ``(p, q)`` with ``q`` an ``(n, 2)`` array of
column vectors and ``p`` an ``(n, 2)`` array of row vectors.  Traceless
Hermitian 2x2 matrices are identified with ``R^3`` through the Pauli basis,
under which the pairing ``A.B = tr(AB)/2`` is the Euclidean dot product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .combinat import Alpha, Subset, is_short
from .errors import (
    ConditionViolated,
    DimensionMismatch,
    PreconditionViolated,
    SingularGroupElement,
    ZeroW,
)

DEFAULT_TOL = 1e-9

SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
I2 = np.eye(2, dtype=complex)


def traceless(m: np.ndarray) -> np.ndarray:
    return m - np.trace(m) / 2 * I2


@dataclass(frozen=True)
class Su2Vector:
    x: float
    y: float
    z: float

    @classmethod
    def from_matrix(cls, h: np.ndarray, tol: float = DEFAULT_TOL) -> "Su2Vector":
        h = np.asarray(h, dtype=complex)
        scale = max(1.0, float(np.abs(h).max()))
        if abs(np.trace(h)) > tol * scale or np.abs(h - h.conj().T).max() > tol * scale:
            raise PreconditionViolated("matrix is not traceless Hermitian")
        return cls(float(h[0, 1].real), float(-h[0, 1].imag), float(h[0, 0].real))

    @classmethod
    def from_array(cls, v) -> "Su2Vector":
        x, y, z = (float(t) for t in v)
        return cls(x, y, z)

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def matrix(self) -> np.ndarray:
        return np.tensordot(self.array, SIGMA, axes=1)

    def dot(self, other: "Su2Vector") -> float:
        return float(self.array @ other.array)

    def norm(self) -> float:
        return float(np.linalg.norm(self.array))

    def conjugate_by(self, u: np.ndarray) -> "Su2Vector":
        """``U H U^*`` for unitary ``U``."""
        return Su2Vector.from_matrix(u @ self.matrix() @ u.conj().T)

    def __add__(self, other):
        return Su2Vector.from_array(self.array + other.array)

    def __sub__(self, other):
        return Su2Vector.from_array(self.array - other.array)

    def __neg__(self):
        return Su2Vector.from_array(-self.array)

    def to_json(self) -> list:
        return [self.x, self.y, self.z]


def _complex_pairs(a: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def _from_pairs(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex).reshape(-1, 2)


@dataclass(frozen=True, eq=False)
class PointPQ:
    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=complex)
        q = np.asarray(self.q, dtype=complex)
        if p.shape != q.shape or p.ndim != 2 or p.shape[1] != 2:
            raise DimensionMismatch(f"p has shape {p.shape}, q has shape {q.shape}; expected (n, 2)")
        if not (np.isfinite(p).all() and np.isfinite(q).all()):
            raise PreconditionViolated("non-finite entries")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.p.shape[0]

    def to_json(self) -> dict:
        return {"p": _complex_pairs(self.p), "q": _complex_pairs(self.q)}

    @classmethod
    def from_json(cls, data: Mapping) -> "PointPQ":
        return cls(_from_pairs(data["p"]), _from_pairs(data["q"]))


@dataclass(frozen=True, eq=False)
class GroupElement:
    A: np.ndarray
    e: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        e = np.asarray(self.e, dtype=complex).reshape(-1)
        if A.shape != (2, 2):
            raise DimensionMismatch(f"A has shape {A.shape}")
        det = np.linalg.det(A)
        if abs(det) <= self.tol or np.any(np.abs(e) <= self.tol):
            raise SingularGroupElement(f"det A = {det:.3e}")
        if abs(det - 1) > self.tol * max(1.0, float(np.abs(A).max()) ** 2):
            raise PreconditionViolated(f"det A = {det} is not 1", {"det": abs(det - 1)})
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "e", e)

    @property
    def n(self) -> int:
        return self.e.shape[0]

    @property
    def compact(self) -> bool:
        return bool(
            np.abs(self.A @ self.A.conj().T - I2).max() <= self.tol and np.abs(np.abs(self.e) - 1).max() <= self.tol
        )

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.A @ other.A, self.e * other.e, self.tol)

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(I2, np.ones(n))


def group_act(x: PointPQ, g: GroupElement) -> PointPQ:
    """Right action ``p_i -> e_i^-1 p_i A``, ``q_i -> A^-1 q_i e_i``."""
    if x.n != g.n:
        raise DimensionMismatch(f"point has {x.n} edges, group element {g.n}")
    a_inv = np.linalg.inv(g.A)
    p = (x.p @ g.A) / g.e[:, None]
    q = (x.q @ a_inv.T) * g.e[:, None]
    return PointPQ(p, q)


def _outer_qq(q: np.ndarray) -> np.ndarray:
    return np.einsum("ia,ib->iab", q, q.conj())


def _outer_pp(p: np.ndarray) -> np.ndarray:
    return np.einsum("ia,ib->iab", p.conj(), p)


def mu_real(x: PointPQ) -> tuple[Su2Vector, np.ndarray]:
    """``(H, t)`` with ``H = sum (q q^* - p^* p)_0 / 2`` and ``t_i = (|q_i|^2 - |p_i|^2) / 2``.

    The su(2) part itself is ``sqrt(-1) * H``.
    """
    h = traceless((_outer_qq(x.q) - _outer_pp(x.p)).sum(axis=0)) / 2
    t = (np.sum(np.abs(x.q) ** 2, axis=1) - np.sum(np.abs(x.p) ** 2, axis=1)) / 2
    return Su2Vector.from_matrix(h), t


def mu_complex(x: PointPQ) -> tuple[np.ndarray, np.ndarray]:
    """``(-sum (q_i p_i)_0, sqrt(-1) p_i q_i)``."""
    qp = np.einsum("ia,ib->iab", x.q, x.p)
    return -traceless(qp.sum(axis=0)), 1j * np.einsum("ia,ia->i", x.p, x.q)


def phi_moment(x: PointPQ) -> float:
    return float(np.sum(np.abs(x.p) ** 2) / 2)


def moment_residuals(a: Alpha, x: PointPQ) -> dict[str, float]:
    h, t = mu_real(x)
    m, c = mu_complex(x)
    target = np.array([float(v) for v in a.lengths])
    return {
        "mu_real_su2": h.norm(),
        "mu_real_u1": float(np.abs(t - target).max()),
        "mu_complex_sl2": float(np.abs(m).max()),
        "mu_complex_u1": float(np.abs(c).max()),
    }


def proportional(u: np.ndarray, v: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Relative determinant test ``|det(u v)| <= tol |u| |v|``."""
    return abs(u[0] * v[1] - u[1] * v[0]) <= tol * np.linalg.norm(u) * np.linalg.norm(v)


def straight_classes(q: np.ndarray, tol: float = DEFAULT_TOL) -> list[list[int]]:
    """Proportionality classes of the ``q_i`` (1-based), closed transitively."""
    n = q.shape[0]
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if proportional(q[i], q[j], tol):
                parent[find(j)] = find(i)
    classes: dict[int, list[int]] = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i + 1)
    return sorted(classes.values())


def _vector_scale(x: PointPQ) -> float:
    return max(1.0, float(np.abs(x.q).max()), float(np.abs(x.p).max()))


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    condition: Optional[int] = None  # 1 or 2
    witness: object = None  # an index for (1), a Subset for (2)

    def __bool__(self):
        return self.stable


def is_stable(a: Alpha, x: PointPQ, tol: float = DEFAULT_TOL) -> StabilityVerdict:
    if a.n != x.n:
        raise DimensionMismatch(f"alpha has {a.n} edges, point {x.n}")
    scale = _vector_scale(x)
    for i in range(x.n):
        if np.linalg.norm(x.q[i]) <= tol * scale:
            return StabilityVerdict(False, 1, i + 1)
    support = {i + 1 for i in range(x.n) if np.linalg.norm(x.p[i]) > tol * scale}
    # the largest straight set containing supp(p) is a whole class
    for cls in straight_classes(x.q, tol):
        if support <= set(cls):
            s = Subset.of(a.n, cls)
            if not is_short(a, s):
                return StabilityVerdict(False, 2, s)
    return StabilityVerdict(True)


@dataclass(frozen=True)
class PolygonPairData:
    S: Subset
    u: dict[int, Su2Vector]
    v: dict[int, Su2Vector]
    w: Su2Vector

    def rotated(self, r: np.ndarray) -> "PolygonPairData":
        return PolygonPairData(
            self.S,
            {i: t.conjugate_by(r) for i, t in self.u.items()},
            {j: t.conjugate_by(r) for j, t in self.v.items()},
            self.w.conjugate_by(r),
        )

    def distance(self, other: "PolygonPairData") -> float:
        diffs = [(self.w - other.w).norm()]
        diffs += [(self.u[i] - other.u[i]).norm() for i in self.u]
        diffs += [(self.v[j] - other.v[j]).norm() for j in self.v]
        return max(diffs)

    def to_json(self) -> dict:
        return {
            "s": self.S.to_json(),
            "u": {str(i): t.to_json() for i, t in sorted(self.u.items())},
            "v": {str(j): t.to_json() for j, t in sorted(self.v.items())},
            "w": self.w.to_json(),
        }

    @classmethod
    def from_json(cls, data: Mapping, n: int) -> "PolygonPairData":
        return cls(
            Subset.of(n, data["s"]),
            {int(i): Su2Vector.from_array(t) for i, t in data["u"].items()},
            {int(j): Su2Vector.from_array(t) for j, t in data["v"].items()},
            Su2Vector.from_array(data["w"]),
        )


def condition_residuals(a: Alpha, d: PolygonPairData) -> dict[int, float]:
    """Residuals of the five defining conditions, keyed 1..5."""
    w = d.w.array
    closure = w + sum((t.array for t in d.v.values()), np.zeros(3))
    u_sum = sum((t.array for t in d.u.values()), np.zeros(3))
    perp = max((abs(t.array @ w) for t in d.u.values()), default=0.0)
    lengths = max((abs(d.v[j].norm() - float(a[j])) for j in d.v), default=0.0)
    wlen = sum(np.sqrt(float(a[i]) ** 2 + d.u[i].norm() ** 2) for i in d.u)
    return {
        1: float(np.linalg.norm(closure)),
        2: float(np.linalg.norm(u_sum)),
        3: float(perp),
        4: float(lengths),
        5: float(abs(np.linalg.norm(w) - wlen)),
    }


def _check_shape(a: Alpha, s: Subset, d: PolygonPairData):
    if s.n != a.n or set(d.u) != set(s.elements()) or set(d.v) != set(s.complement().elements()):
        raise DimensionMismatch(f"polygon-pair data does not match S={s} and n={a.n}")


def polygon_pair_from_point(a: Alpha, s: Subset, x: PointPQ, tol: float = DEFAULT_TOL) -> PolygonPairData:
    """``u_i = q_i p_i + p_i^* q_i^*``, ``v_j = (q_j q_j^*)_0``, ``w = sum_S (q q^*)_0 - (p^* p)_0``."""
    if a.n != x.n:
        raise DimensionMismatch(f"alpha has {a.n} edges, point {x.n}")
    scale = max(1.0, float(a.total))
    res = moment_residuals(a, x)
    elems = s.elements()
    res["straightness"] = max(
        (
            abs(x.q[i - 1][0] * x.q[j - 1][1] - x.q[i - 1][1] * x.q[j - 1][0])
            / (np.linalg.norm(x.q[i - 1]) * np.linalg.norm(x.q[j - 1]) or 1.0)
            for i in elems
            for j in elems
            if i < j
        ),
        default=0.0,
    )
    res["p_off_S"] = max((float(np.linalg.norm(x.p[j - 1])) for j in s.complement()), default=0.0)
    bad = {k: v for k, v in res.items() if v > tol * scale}
    if bad:
        raise PreconditionViolated("point is not a valid core point for S: " + ", ".join(sorted(bad)), res)

    qq = _outer_qq(x.q)
    pp = _outer_pp(x.p)
    u = {}
    for i in elems:
        qp = np.outer(x.q[i - 1], x.p[i - 1])
        u[i] = Su2Vector.from_matrix(qp + qp.conj().T, tol * scale**2)
    v = {j: Su2Vector.from_matrix(traceless(qq[j - 1])) for j in s.complement()}
    w = Su2Vector.from_matrix(sum(traceless(qq[i - 1]) - traceless(pp[i - 1]) for i in elems))
    d = PolygonPairData(s, u, v, w)

    checks = condition_residuals(a, d)
    for i in elems:
        q2 = float(np.linalg.norm(x.q[i - 1]) ** 2)
        checks[f"norm_u_{i}"] = abs(u[i].norm() ** 2 - q2 * (q2 - 2 * float(a[i])))
    bad = {k: v for k, v in checks.items() if v > tol * scale**2}
    if bad:
        raise PreconditionViolated("derived polygon pair fails its identities", {str(k): v for k, v in checks.items()})
    return d


def spinor(h: Su2Vector) -> np.ndarray:
    """Unit eigenvector of ``H`` for the eigenvalue ``+|H|``, first nonzero entry real positive."""
    x, y, z = h.x, h.y, h.z
    r = h.norm()
    if r == 0:
        return np.array([1, 0], dtype=complex)
    if z >= 0:
        e = np.array([r + z, x + 1j * y], dtype=complex)
    else:
        e = np.array([x - 1j * y, r - z], dtype=complex)
    e /= np.linalg.norm(e)
    k = 0 if abs(e[0]) > 1e-300 else 1
    return e * (abs(e[k]) / e[k])


def aligning_rotation(w: Su2Vector) -> np.ndarray:
    """``R`` in SU(2) with ``R W R^* = |W| sigma_3``."""
    ep = spinor(w)
    em = np.array([-ep[1].conjugate(), ep[0].conjugate()])
    return np.array([ep.conj(), em.conj()])


def point_from_polygon_pair(a: Alpha, s: Subset, d: PolygonPairData, tol: float = DEFAULT_TOL) -> PointPQ:
    """A point over the polygon pair, in a fixed gauge.

    ``w`` is rotated to a positive multiple of ``sigma_3``; there
    ``q_i = (a_i, 0)`` with ``a_i > 0`` and ``p_i = (0, lambda_i / a_i)`` for
    ``i`` in ``S``, and each ``q_j`` is the scaled spinor of ``v_j``.
    """
    _check_shape(a, s, d)
    scale = max(1.0, float(a.total))
    if d.w.norm() <= tol * scale:
        raise ZeroW("w vanishes")
    for k, r in condition_residuals(a, d).items():
        if r > tol * scale:
            raise ConditionViolated(k, r)
    rot = aligning_rotation(d.w)
    dd = d.rotated(rot)
    n = a.n
    p = np.zeros((n, 2), dtype=complex)
    q = np.zeros((n, 2), dtype=complex)
    for i in s:
        lam = complex(dd.u[i].x, -dd.u[i].y)
        ai = float(a[i])
        amp = np.sqrt(ai + np.sqrt(ai * ai + abs(lam) ** 2))
        q[i - 1] = (amp, 0)
        p[i - 1] = (0, lam / amp)
    for j in s.complement():
        q[j - 1] = np.sqrt(2 * dd.v[j].norm()) * spinor(dd.v[j])
    return group_act(PointPQ(p, q), GroupElement(rot, np.ones(n)))


# Sampling


def random_su2(rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=4)
    z /= np.linalg.norm(z)
    a, b = complex(z[0], z[1]), complex(z[2], z[3])
    return np.array([[a, -b.conjugate()], [b, a.conjugate()]])


def random_group_element(rng: np.random.Generator, n: int, compact: bool = True) -> GroupElement:
    if compact:
        return GroupElement(random_su2(rng), np.exp(1j * rng.uniform(0, 2 * np.pi, n)))
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    while abs(np.linalg.det(m)) < 0.1:
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    m /= np.sqrt(np.linalg.det(m))
    e = np.exp(rng.normal(scale=0.5, size=n) + 1j * rng.uniform(0, 2 * np.pi, n))
    return GroupElement(m, e)


def random_point(rng: np.random.Generator, n: int, scale: float = 1.0) -> PointPQ:
    shape = (n, 2)
    return PointPQ(
        scale * (rng.normal(size=shape) + 1j * rng.normal(size=shape)),
        scale * (rng.normal(size=shape) + 1j * rng.normal(size=shape)),
    )


def _unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _place(rng: np.random.Generator, target: np.ndarray, length: float, dist: float) -> np.ndarray:
    """A vector ``v`` of the given length with ``|target - v| = dist``."""
    big = np.linalg.norm(target)
    axis = target / big
    cos = np.clip((big * big + length * length - dist * dist) / (2 * big * length), -1.0, 1.0)
    perp = np.cross(axis, _unit(rng))
    while np.linalg.norm(perp) < 1e-6:
        perp = np.cross(axis, _unit(rng))
    perp /= np.linalg.norm(perp)
    return length * (cos * axis + np.sqrt(1 - cos * cos) * perp)


def random_closed_chain(rng: np.random.Generator, lengths: list[float], target: np.ndarray) -> list[np.ndarray]:
    """Vectors with the given lengths summing to ``target``, placed one at a time."""
    out = []
    rest = list(lengths)
    t = np.array(target, dtype=float)
    while len(rest) > 1:
        length = rest.pop(0)
        remaining = sum(rest)
        lo = max(0.0, 2 * max(rest) - remaining)
        big = np.linalg.norm(t)
        a, b = max(lo, abs(big - length)), min(remaining, big + length)
        if a > b:
            raise PreconditionViolated("edge lengths cannot close the chain")
        dist = rng.uniform(a, b) if len(rest) > 1 else remaining
        v = _place(rng, t, length, dist)
        out.append(v)
        t = t - v
    out.append(t)
    return out


def random_polygon_pair(
    rng: np.random.Generator, a: Alpha, s: Subset, with_u: bool = True, margin: float = 0.02
) -> PolygonPairData:
    """A random valid polygon pair for a short ``S`` whose complement edges are each short."""
    short_sum = float(a.weight(s))
    long_sum = float(a.total) - short_sum
    elems = s.elements()
    comp = s.complement().elements()
    while True:
        if with_u:
            z = rng.normal(size=len(elems)) + 1j * rng.normal(size=len(elems))
            z -= z.mean()
            z *= rng.uniform(0, 1) * (long_sum - short_sum) / max(1e-12, np.abs(z).sum())
        else:
            z = np.zeros(len(elems), dtype=complex)
        wlen = sum(np.sqrt(float(a[i]) ** 2 + abs(zi) ** 2) for i, zi in zip(elems, z))
        if wlen < long_sum * (1 - margin) and all(
            float(a[j]) < wlen + long_sum - float(a[j]) for j in comp
        ):
            break
    w = np.array([0.0, 0.0, wlen])
    vs = random_closed_chain(rng, [float(a[j]) for j in comp], -w)
    d = PolygonPairData(
        s,
        {i: Su2Vector(float(zi.real), float(zi.imag), 0.0) for i, zi in zip(elems, z)},
        {j: Su2Vector.from_array(v) for j, v in zip(comp, vs)},
        Su2Vector.from_array(w),
    )
    return d.rotated(random_su2(rng))


@dataclass(frozen=True)
class RoundTrip:
    data: PolygonPairData
    point: PointPQ
    back: PolygonPairData
    residuals: dict

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())


def round_trip(a: Alpha, s: Subset, d: PolygonPairData, tol: float = DEFAULT_TOL) -> RoundTrip:
    x = point_from_polygon_pair(a, s, d, tol)
    back = polygon_pair_from_point(a, s, x, tol)
    res = moment_residuals(a, x)
    res["round_trip"] = d.distance(back)
    for i in s:
        q2 = float(np.linalg.norm(x.q[i - 1]) ** 2)
        res[f"norm_u_{i}"] = abs(back.u[i].norm() ** 2 - q2 * (q2 - 2 * float(a[i])))
    return RoundTrip(d, x, back, res)
