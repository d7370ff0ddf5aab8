"""Hamiltonian stationary family ``(x_1 e^{i lambda_1 s}, ..., x_n e^{i lambda_n s})``.

The slice ``V_t`` sits over the quadric ``sum lambda_j x_j^2 = C`` with
``C = -2 t sum(lambda)``.  It is a shrinker for ``t < 0``, an expander for
``t > 0`` and a cone at ``t = 0`` (when ``sum(lambda) > 0``).  When
``sum(lambda) = 0`` the slices are special Lagrangian and the level ``C``
is an independent parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, reduce

import numpy as np

from .geometry import Immersion
from .quadric import ProductChart, Quadric, SigmaPoint

ON_SLICE_TOL = 1e-10


class OffSliceError(ValueError):
    pass


@dataclass(frozen=True)
class LambdaSpec:
    """Nonzero weights ``lambda_j`` with the positive entries listed first."""

    lambdas: tuple[float, ...]
    strict_integer: bool = False

    def __post_init__(self):
        lam = tuple(float(v) for v in self.lambdas)
        object.__setattr__(self, "lambdas", lam)
        if len(lam) < 1:
            raise ValueError("need at least one lambda")
        if any(v == 0 for v in lam):
            raise ValueError("lambda entries must be nonzero")
        k = sum(v > 0 for v in lam)
        if not all(v > 0 for v in lam[:k]):
            raise ValueError("positive lambdas must be listed first")
        if self.strict_integer and not all(float(v).is_integer() for v in lam):
            raise ValueError("strict-integer mode requires integer lambdas")

    @classmethod
    def parse(cls, text: str, strict_integer: bool = True) -> "LambdaSpec":
        """Parse ``"1,1,-1"``; entries are reordered with positives first."""
        vals = [float(v) for v in text.replace(" ", "").split(",") if v]
        vals = [v for v in vals if v > 0] + [v for v in vals if v <= 0]
        return cls(tuple(vals), strict_integer=strict_integer)

    @property
    def n(self) -> int:
        return len(self.lambdas)

    @property
    def k(self) -> int:
        return sum(v > 0 for v in self.lambdas)

    @property
    def total(self) -> float:
        return float(sum(self.lambdas))

    @property
    def sum_positive(self) -> bool:
        return self.total > 0

    @property
    def special_lagrangian(self) -> bool:
        return self.total == 0

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.lambdas)

    def is_integer(self) -> bool:
        return all(float(v).is_integer() for v in self.lambdas)


@dataclass(frozen=True)
class IntegerSlice:
    """The slice ``V_t`` over ``sum lambda_j x_j^2 = C``.

    Build with :meth:`at_time`; for special Lagrangian weights use
    :meth:`at_level`, where ``t`` is kept only as a label.
    """

    spec: LambdaSpec
    t: float
    C: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        expected = -2.0 * self.t * self.spec.total
        if self.C is None:
            object.__setattr__(self, "C", expected)
        elif self.spec.total != 0 and self.C != expected:
            raise ValueError(f"level {self.C} inconsistent with t={self.t}: expected {expected}")

    @classmethod
    def at_time(cls, spec: LambdaSpec, t: float) -> "IntegerSlice":
        return cls(spec, float(t))

    @classmethod
    def at_level(cls, spec: LambdaSpec, C: float) -> "IntegerSlice":
        if spec.total != 0:
            t = -C / (2.0 * spec.total)
            return cls(spec, t)
        return cls(spec, 0.0, float(C))

    @property
    def kind(self) -> str:
        if self.spec.total == 0:
            return "special-lagrangian"
        c = self.C * np.sign(self.spec.total)
        return "shrinker" if c > 0 else "expander" if c < 0 else "cone"

    @cached_property
    def quadric(self) -> Quadric:
        return Quadric(self.spec.lambdas, self.C)

    @property
    def period(self) -> float:
        return math.pi

    @property
    def alpha(self) -> float:
        # the family solves the w-system with w_j = e^{i lambda_j s}, theta = (sum lambda) s + pi/2
        return -self.spec.total

    def curve(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return np.exp(1j * s[..., None] * self.spec.array)

    def velocity(self, s) -> np.ndarray:
        return 1j * self.spec.array * self.curve(s)

    def moduli_sq(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return np.ones(s.shape + (self.spec.n,))

    def closed_angle(self, s) -> np.ndarray:
        return np.mod(self.spec.total * np.asarray(s) + np.pi / 2, 2 * np.pi)

    def check_on_slice(self, x) -> None:
        x = np.asarray(x, dtype=float)
        res = np.sum(self.spec.array * x**2) - self.C
        scale = max(1.0, abs(self.C), float(np.sum(np.abs(self.spec.array) * x**2)))
        if abs(res) > ON_SLICE_TOL * scale:
            raise OffSliceError(f"sum lambda x^2 - C = {res:.3e}")

    def chart(self, branch=(1.0, 1.0)) -> ProductChart:
        return ProductChart(self.quadric, self.curve, self.velocity, tuple(branch), self._angle_of_u)

    def _angle_of_u(self, u):
        return self.closed_angle(np.asarray(u)[..., -1])

    def immersion(self, branch=(1.0, 1.0)) -> Immersion:
        return self.chart(branch).immersion()

    def chart_at(self, x, s: float) -> tuple[Immersion, np.ndarray]:
        """Immersion and chart parameters of the point ``(x, s)``."""
        self.check_on_slice(x)
        u, br = self.quadric.locate(x)
        return self.immersion(br), np.concatenate([u, [s]])

    def evaluate(self, x: np.ndarray, s: np.ndarray, w=None):
        """Position, mean curvature and Radon density at quadrature nodes.

        ``H = -sum(lambda) Lambda x e^{i lambda s} / sum(lambda^2 x^2)`` and
        the area density per ``dS ds`` is ``sqrt(sum lambda^2 x^2)``.
        """
        lam = self.spec.array
        w = self.curve(s) if w is None else w
        lx = lam * x
        q = np.sum(lx**2, axis=-1)
        pos = x * w
        h = -self.spec.total * lx * w / q[..., None]
        return pos, h, np.sqrt(q)


def immerse(slc: IntegerSlice, x, s: float) -> np.ndarray:
    """``(x_1 e^{i lambda_1 s}, ..., x_n e^{i lambda_n s})`` for on-slice ``x``."""
    slc.check_on_slice(x)
    return np.asarray(x, dtype=float) * slc.curve(s)


def double_cover_map(spec: LambdaSpec, x) -> np.ndarray:
    """``psi(x)``: flip the sign of ``x_j`` for odd ``lambda_j``."""
    signs = np.where(np.mod(np.asarray(spec.lambdas), 2) == 1, -1.0, 1.0)
    return signs * np.asarray(x, dtype=float)


def density_closed_form(slc: IntegerSlice, x) -> tuple[float, float, float]:
    """``(|F|^2, |H|^2, Radon factor)`` at an on-slice point ``x != 0``.

    ``|H|^2 = (sum lambda)^2 / sum(lambda^2 x^2)``: the angle is
    ``(sum lambda) s + pi/2`` and ``|d_s F|^2 = sum(lambda^2 x^2)``.
    """
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        raise ValueError("the cone vertex x = 0 is singular")
    slc.check_on_slice(x)
    lam = slc.spec.array
    q = float(np.sum(lam**2 * x**2))
    return float(np.sum(x**2)), slc.spec.total**2 / q, math.sqrt(q)


def sigma_parametrize(slc: IntegerSlice, p: SigmaPoint) -> np.ndarray:
    """Point ``a(r) X1 + b(r) X2`` of the quadric under the slice."""
    if slc.C == 0 and p.r <= 0:
        raise ValueError("the cone parametrisation needs r > 0")
    return slc.quadric.parametrize(p)


def volume_form_closed(slc: IntegerSlice, p: SigmaPoint) -> float:
    """Quadric volume density per ``dr dS- dS+`` at ``p``."""
    return float(slc.quadric.volume_form(p.r, np.asarray(p.omega_plus), np.asarray(p.omega_minus)))


def volume_bound_holds(slc: IntegerSlice, p: SigmaPoint) -> bool:
    """``a^(k-1) b^(n-k-1) <= (sum lambda_j^2 x_j^2)^((n-2)/2)``.

    This dominates the quadric volume density (up to the bracket) uniformly in
    ``t``; it relies on ``|lambda_j| >= 1``.
    """
    q = slc.quadric
    a, b = q.radii(p.r)
    lhs = a ** (q.k - 1) * b ** (q.n - q.k - 1)
    x = q.parametrize(p)
    rhs = float(np.sum(q.lam**2 * x**2)) ** ((q.n - 2) / 2)
    return bool(lhs <= rhs * (1 + 1e-12))


def scale_between_slices(a: IntegerSlice, b: IntegerSlice, x_a) -> np.ndarray:
    """Map a point of ``V_{t_a}`` to ``V_{t_b}``; slices scale by ``sqrt(t_b/t_a)``."""
    if a.t == 0 or b.t == 0 or np.sign(a.t) != np.sign(b.t):
        raise ValueError("slices must have nonzero times of the same sign")
    return math.sqrt(b.t / a.t) * np.asarray(x_a, dtype=float)


@dataclass(frozen=True)
class TopologyReport:
    lambdas: tuple[float, ...]
    c_sign: int
    k: int
    oriented: bool
    topology: str
    components: int
    embedded: bool
    special_lagrangian: bool
    kind: str

    @property
    def connected(self) -> bool:
        return self.components == 1

    def summary(self) -> str:
        if self.topology == "empty":
            return "empty"
        parts = [
            self.topology,
            "orientable" if self.oriented else "non-orientable",
            "connected" if self.connected else f"{self.components} components",
            "embedded" if self.embedded else "not embedded",
        ]
        return ", ".join(parts)

    def to_dict(self) -> dict:
        return {
            "lambdas": list(self.lambdas),
            "c_sign": self.c_sign,
            "k": self.k,
            "oriented": self.oriented,
            "topology": self.topology,
            "components": self.components,
            "connected": self.connected,
            "embedded": self.embedded,
            "special_lagrangian": self.special_lagrangian,
            "kind": self.kind,
        }


def _product(*factors: str) -> str:
    return " x ".join(f for f in factors if f)


def classify(spec: LambdaSpec, c_sign: int) -> TopologyReport:
    """Topology, orientability, connectedness and embeddedness of ``L'``.

    ``L'`` is the ``0 <= s < pi`` sheet over ``sum lambda_j x_j^2 = C`` with
    ``sign(C) = c_sign``.  Embeddedness reports the sufficient conditions:
    pairwise coprime ``|lambda_j|``, together with ``lambda_j = 1`` on the
    positive block when ``C > 0`` and ``lambda_j = -1`` on the negative block
    when ``C < 0``.
    """
    if not spec.is_integer():
        raise ValueError("topology statements require integer lambdas")
    c_sign = int(np.sign(c_sign))
    lam = [int(v) for v in spec.lambdas]
    n, k = spec.n, spec.k
    total = sum(lam)
    oriented = total % 2 == 0

    if c_sign < 0:
        empty = k == n
        topo = _product(f"R^{k}" if k else "", f"S^{n - k - 1}", "S^1")
    elif c_sign > 0:
        empty = k == 0
        topo = _product(f"S^{k - 1}", f"R^{n - k}" if n - k else "", "S^1")
    else:
        empty = k in (0, n)
        topo = "cone over " + _product(f"S^{k - 1}", f"S^{n - k - 1}", "S^1")
    if empty:
        topo = "empty"

    components = 1
    if c_sign > 0 and k == 1 and lam[0] % 2 == 0:
        components = 2
    if c_sign < 0 and k == n - 1 and lam[-1] % 2 == 0:
        components = 2

    coprime = all(math.gcd(abs(a), abs(b)) == 1 for i, a in enumerate(lam) for b in lam[i + 1 :])
    embedded = coprime
    if c_sign > 0:
        embedded = embedded and all(v == 1 for v in lam[:k])
    if c_sign < 0:
        embedded = embedded and all(v == -1 for v in lam[k:])

    if total == 0:
        kind = "special Lagrangian"
    elif c_sign == 0:
        kind = "cone"
    else:
        kind = "shrinker" if c_sign * total > 0 else "expander"

    return TopologyReport(
        lambdas=tuple(float(v) for v in lam),
        c_sign=c_sign,
        k=k,
        oriented=oriented,
        topology=topo,
        components=components if not empty else 0,
        embedded=embedded and not empty,
        special_lagrangian=total == 0,
        kind=kind,
    )


def gcd_all(values) -> int:
    return reduce(math.gcd, (abs(int(v)) for v in values))
