"""Pushing defining equations forward under holomorphic coordinate changes.

For a map ``z* = f(z, w)``, ``w* = g(z, w)`` the new defining function ``F*``
is fixed by the identity

    F*(f(z, u+iF), conj f(z, u+iF), Re g(z, u+iF)) = Im g(z, u+iF)

in the formal variables ``z, zb, u``.  :func:`pushforward` solves it weight by
weight against the diagonal linear part of the map.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import NormalizationViolation, SingularLinearPart
from .scalars import ONE, ZERO, GaussianRational, Q, Rational, falling_binomial
from .series import (
    HoloMapPair,
    MultiIndex,
    WeightedSeries,
    _Powers,
    holo_eval,
    series_substitute,
)
from .surface import Hypersurface, validate_surface


@dataclass(frozen=True)
class RootOfUnity:
    """The phase ``exp(2 pi i t / n)``, kept in lowest terms."""

    n: int
    t: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("root of unity order must be positive")
        t = self.t % self.n
        g = gcd(t, self.n) or self.n
        object.__setattr__(self, "n", self.n // g)
        object.__setattr__(self, "t", t // g)

    def to_gaussian(self) -> GaussianRational | None:
        """Exact value when it lies in Q(i) (orders 1, 2, 4), else ``None``."""
        if 4 % self.n:
            return None
        return GaussianRational(0, 1) ** (self.t * (4 // self.n))

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        n = self.n * other.n // gcd(self.n, other.n)
        return RootOfUnity(n, self.t * (n // self.n) + other.t * (n // other.n))

    def __pow__(self, e: int) -> "RootOfUnity":
        return RootOfUnity(self.n, self.t * e)

    def __str__(self):
        if self.n == 1:
            return "1"
        return f"exp(2*pi*i*{self.t}/{self.n})"


def phase_value(phase) -> GaussianRational:
    """Exact Gaussian-rational value of a phase (unit or token)."""
    if isinstance(phase, RootOfUnity):
        v = phase.to_gaussian()
        if v is None:
            raise ValueError(f"phase {phase} is not a Gaussian rational")
        return v
    v = GaussianRational.coerce(phase)
    if v.norm_sq() != 1:
        raise ValueError("phase must have modulus one")
    return v


@dataclass(frozen=True)
class InitialData:
    """Dilation ``delta > 0``, rotation phase and the ``mu`` parameter."""

    delta: Rational = Q(1)
    phase: object = RootOfUnity(1, 0)
    mu: Rational = Q(0)

    def __post_init__(self):
        object.__setattr__(self, "delta", Q(self.delta))
        object.__setattr__(self, "mu", Q(self.mu))
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if not isinstance(self.phase, RootOfUnity):
            phase_value(self.phase)

    def is_trivial(self) -> bool:
        return self.delta == 1 and self.mu == 0 and phase_value_or_none(self.phase) == ONE


def phase_value_or_none(phase):
    try:
        return phase_value(phase)
    except ValueError:
        return None


def _check_map(M_k: int, m: HoloMapPair):
    if m.k != M_k:
        raise ValueError(f"mismatched grading: surface k={M_k}, map k={m.k}")
    if not m.f_z:
        raise SingularLinearPart("f_z(0) = 0: linear part of the map is not invertible")
    if not m.g_w.re:
        raise SingularLinearPart("Re g_w(0) = 0: linear part of the map is not invertible")
    if not m.is_weight_filtered():
        raise NormalizationViolation(
            "g has terms of weight below k; such maps lower the weight of u and "
            "do not act on truncated series"
        )


def solve_pushforward(F: WeightedSeries, m: HoloMapPair) -> WeightedSeries:
    """Solve the transformation identity for ``F*`` up to ``min(F.W, m.W)``."""
    _check_map(F.k, m)
    k = F.k
    W = min(F.W, m.W)
    F = F.truncate(W)
    c, lam = m.f_z, m.g_w.re
    cb = c.conj()
    Z = holo_eval(m.f, F, W)
    G = holo_eval(m.g, F, W)
    U, S = G.real_part(), G.imag_part()
    pz, pzb, pu = _Powers(Z, W), _Powers(Z.conjugate(), W), _Powers(U, W)
    pair_cache: dict = {}

    def image(idx):
        a, b, g = idx
        ab = pair_cache.get((a, b))
        if ab is None:
            ab = pair_cache[(a, b)] = pz[a] * pzb[b]
        return ab * pu[g] if g else ab

    target = dict(S._c)
    total: dict = {}
    out: dict = {}
    by_weight: dict = {}
    for idx in target:
        by_weight.setdefault(F.weight(idx), set()).add(idx)
    for nu in range(0, W + 1):
        for _ in range(W + 2):
            pending = {i for i in by_weight.get(nu, ())}
            resid = {}
            for i in pending:
                r = target.get(i, ZERO) - total.get(i, ZERO)
                if r:
                    resid[i] = r
            if not resid:
                break
            # highest gamma first: the nilpotent part of the linear action lowers gamma
            for idx in sorted(resid, key=lambda i: (-i[2], i[1], i[0])):
                r = target.get(idx, ZERO) - total.get(idx, ZERO)
                if not r:
                    continue
                diag = (c ** idx[0]) * (cb ** idx[1]) * GaussianRational(lam ** idx[2])
                x = r / diag
                out[idx] = out.get(idx, ZERO) + x
                for j, v in image(idx).scale(x)._c.items():
                    s = total.get(j, ZERO) + v
                    total[j] = s
                    by_weight.setdefault(F.weight(j), set()).add(j)
        else:
            raise ArithmeticError(f"pushforward recursion did not settle at weight {nu}")
    result = WeightedSeries({i: v for i, v in out.items() if v}, k, W)
    if not result.is_real():
        raise ArithmeticError("pushforward produced a non-real defining function")
    return result


def pushforward(M: Hypersurface, m: HoloMapPair) -> Hypersurface:
    """Defining function of ``M`` in the coordinates ``(f, g)``."""
    return validate_surface(solve_pushforward(M.F, m))


def diagonal_action(F: WeightedSeries, c, lam) -> WeightedSeries:
    """Pushforward under ``z* = c z``, ``w* = lam w`` by the closed formula.

    Each coefficient transforms individually:
    ``a*_{abg} = a_{abg} lam^(1-g) c^(-a) conj(c)^(-b)``.
    """
    c = GaussianRational.coerce(c)
    lam = Q(lam) if not isinstance(lam, GaussianRational) else lam.re
    ci, cbi = c.inverse(), c.conj().inverse()
    out = {}
    for (a, b, g), v in F.items():
        out[(a, b, g)] = v * (ci ** a) * (cbi ** b) * GaussianRational(lam ** (1 - g))
    return WeightedSeries(out, F.k, F.W)


def compose(a: HoloMapPair, b: HoloMapPair) -> HoloMapPair:
    """The map ``b o a`` (first ``a``, then ``b``)."""
    if a.k != b.k:
        raise ValueError(f"mismatched grading: k={a.k} vs k={b.k}")
    if not a.is_weight_filtered():
        raise NormalizationViolation("inner map is not weight-filtered")
    k = a.k
    W = min(a.W, b.W)
    fa = a.component_series("f").truncate(W)
    ga = a.component_series("g").truncate(W)
    nothing = WeightedSeries.zero(k, W)
    f = series_substitute(b.component_series("f").truncate(W), fa, nothing, ga)
    g = series_substitute(b.component_series("g").truncate(W), fa, nothing, ga)
    return HoloMapPair.from_series(f, g, k, W)


def ok_model_automorphism(d: InitialData, k: int, W: int) -> HoloMapPair:
    """Truncated member of the three-parameter stability group of ``v = |z|^k``.

    ``f = delta * phase * z * (1 + mu w)^(-1/l)`` and
    ``g = delta^k * w / (1 + mu w)`` with ``l = k/2``.
    """
    if k % 2:
        raise ValueError("v = |z|^k is polynomial only for even k")
    l = k // 2
    phase = phase_value(d.phase)
    lead = phase * GaussianRational(d.delta)
    expo = Q(-1, l)
    f, g = {}, {}
    j = 0
    while 1 + k * j <= W - (k - 1):
        f[(1, j)] = lead * GaussianRational(falling_binomial(expo, j) * d.mu ** j)
        j += 1
    j = 0
    while k * (j + 1) <= W:
        g[(0, j + 1)] = GaussianRational(d.delta ** k * (-d.mu) ** j)
        j += 1
    return HoloMapPair(f, g, k, W)


def is_automorphism(M: Hypersurface, m: HoloMapPair) -> bool:
    return pushforward(M, m).agrees_with(M)


__all__ = [
    "InitialData",
    "MultiIndex",
    "RootOfUnity",
    "compose",
    "diagonal_action",
    "is_automorphism",
    "ok_model_automorphism",
    "phase_value",
    "pushforward",
    "solve_pushforward",
]
