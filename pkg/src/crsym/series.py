"""Truncated weighted formal power series in ``z``, ``zb`` (z-bar) and ``u``.

A monomial ``z^a zb^b u^c`` has weight ``a + b + k*c``.  A series stores only
monomials of weight ``<= W``; every operation truncates at the smallest ``W``
among its operands, so a result is exact up to that weight.

Holomorphic maps ``(z, w) -> (f, g)`` live in :class:`HoloMapPair`, whose
coefficients are keyed by ``(i, j)`` for ``z^i w^j`` (weight ``i + k*j``).
"""
from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import NormalizationViolation, RealityViolation
from .scalars import ONE, ZERO, GaussianRational, Q

_GR = GaussianRational._raw


class MultiIndex(NamedTuple):
    alpha: int
    beta: int
    gamma: int

    def weight(self, k: int) -> int:
        return self.alpha + self.beta + k * self.gamma

    def conj(self) -> "MultiIndex":
        return MultiIndex(self.beta, self.alpha, self.gamma)


def _coerce_index(idx) -> MultiIndex:
    a, b, c = idx
    if min(a, b, c) < 0:
        raise ValueError(f"negative exponent in {tuple(idx)}")
    return MultiIndex(int(a), int(b), int(c))


class WeightedSeries:
    """Immutable sparse truncated series over the Gaussian rationals."""

    __slots__ = ("k", "W", "_c")

    def __init__(self, coeffs: Mapping, k: int, W: int):
        if k < 1 or W < 1:
            raise ValueError("grading k and truncation W must be >= 1")
        c = {}
        for idx, v in coeffs.items():
            if not v:
                continue
            idx = idx if type(idx) is MultiIndex else _coerce_index(idx)
            if idx[0] + idx[1] + k * idx[2] <= W:
                c[idx] = v if type(v) is GaussianRational else GaussianRational.coerce(v)
        self.k = k
        self.W = W
        self._c = c

    @classmethod
    def _trusted(cls, c: dict, k: int, W: int) -> "WeightedSeries":
        obj = object.__new__(cls)
        obj.k, obj.W, obj._c = k, W, c
        return obj

    @classmethod
    def zero(cls, k: int, W: int) -> "WeightedSeries":
        return cls._trusted({}, k, W)

    @classmethod
    def monomial(cls, idx, coeff=ONE, *, k: int, W: int) -> "WeightedSeries":
        return cls({_coerce_index(idx): GaussianRational.coerce(coeff)}, k, W)

    # mapping-ish access ---------------------------------------------------
    def __getitem__(self, idx) -> GaussianRational:
        return self._c.get(tuple(idx), ZERO)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(sorted(self._c, key=self.sort_key))

    def __len__(self):
        return len(self._c)

    def items(self):
        return [(idx, self._c[idx]) for idx in self]

    def support(self) -> frozenset:
        return frozenset(self._c)

    def sort_key(self, idx):
        return (idx[0] + idx[1] + self.k * idx[2], idx[2], idx[1], idx[0])

    def weight(self, idx) -> int:
        return idx[0] + idx[1] + self.k * idx[2]

    def is_zero(self) -> bool:
        return not self._c

    def min_weight(self):
        return min((self.weight(i) for i in self._c), default=None)

    def max_weight(self):
        return max((self.weight(i) for i in self._c), default=None)

    def __eq__(self, other):
        if not isinstance(other, WeightedSeries):
            return NotImplemented
        return self.k == other.k and self.W == other.W and self._c == other._c

    def __hash__(self):
        return hash((self.k, self.W, frozenset(self._c.items())))

    def agrees_with(self, other: "WeightedSeries") -> bool:
        """Coefficientwise equality up to the smaller truncation."""
        _check_k(self, other)
        W = min(self.W, other.W)
        return self.truncate(W)._c == other.truncate(W)._c

    def __repr__(self):
        from .parse import format_series

        return f"WeightedSeries({format_series(self)!r}, k={self.k}, W={self.W})"

    # structural ops --------------------------------------------------------
    def truncate(self, W: int) -> "WeightedSeries":
        W = min(W, self.W)
        k = self.k
        return WeightedSeries._trusted(
            {i: v for i, v in self._c.items() if i[0] + i[1] + k * i[2] <= W}, k, W
        )

    def with_truncation(self, W: int) -> "WeightedSeries":
        """Same terms, re-labelled truncation ``W`` (terms above ``W`` dropped).

        Raising ``W`` asserts that the stored terms are the exact series up to
        the new weight, as is the case for polynomial input.
        """
        return WeightedSeries(self._c, self.k, W)

    def regrade(self, k: int, W: int | None = None) -> "WeightedSeries":
        return WeightedSeries(self._c, k, self.W if W is None else W)

    def weight_part(self, nu: int) -> "WeightedSeries":
        k = self.k
        return WeightedSeries._trusted(
            {i: v for i, v in self._c.items() if i[0] + i[1] + k * i[2] == nu}, k, self.W
        )

    def filter(self, pred) -> "WeightedSeries":
        return WeightedSeries._trusted({i: v for i, v in self._c.items() if pred(i)}, self.k, self.W)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, WeightedSeries):
            return NotImplemented
        _check_k(self, other)
        W = min(self.W, other.W)
        k = self.k
        acc = {}
        for src in (self._c, other._c):
            for i, v in src.items():
                if i[0] + i[1] + k * i[2] > W:
                    continue
                prev = acc.get(i)
                acc[i] = v if prev is None else prev + v
        return WeightedSeries._trusted({i: v for i, v in acc.items() if v}, k, W)

    def __neg__(self):
        return WeightedSeries._trusted({i: -v for i, v in self._c.items()}, self.k, self.W)

    def __sub__(self, other):
        if not isinstance(other, WeightedSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, s) -> "WeightedSeries":
        s = GaussianRational.coerce(s)
        if not s:
            return WeightedSeries.zero(self.k, self.W)
        return WeightedSeries._trusted({i: v * s for i, v in self._c.items()}, self.k, self.W)

    def __mul__(self, other):
        if isinstance(other, WeightedSeries):
            return series_mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = WeightedSeries.monomial((0, 0, 0), k=self.k, W=self.W)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def conjugate(self) -> "WeightedSeries":
        return series_conjugate(self)

    def is_real(self) -> bool:
        return series_is_real(self)

    def real_part(self) -> "WeightedSeries":
        """``(a + conj(a)) / 2`` -- the real series ``Re a``."""
        return (self + self.conjugate()).scale(GaussianRational(Q(1, 2)))

    def imag_part(self) -> "WeightedSeries":
        """``(a - conj(a)) / (2i)`` -- the real series ``Im a``."""
        return (self - self.conjugate()).scale(GaussianRational(0, Q(-1, 2)))


def _check_k(a: WeightedSeries, b: WeightedSeries):
    if a.k != b.k:
        raise ValueError(f"mismatched grading: k={a.k} vs k={b.k}")


def series_make(terms: Iterable, k: int, W: int) -> WeightedSeries:
    """Build a series from ``(index, coefficient)`` pairs; duplicates are summed."""
    if k < 1 or W < 1:
        raise ValueError("k and W must be >= 1")
    acc: dict = {}
    for idx, coeff in terms:
        idx = _coerce_index(idx)
        acc[idx] = acc.get(idx, ZERO) + GaussianRational.coerce(coeff)
    return WeightedSeries(acc, k, W)


def series_add(a: WeightedSeries, b: WeightedSeries) -> WeightedSeries:
    return a + b


def series_mul(a: WeightedSeries, b: WeightedSeries) -> WeightedSeries:
    _check_k(a, b)
    k = a.k
    W = min(a.W, b.W)
    if not a._c or not b._c:
        return WeightedSeries.zero(k, W)
    la = sorted(((i[0] + i[1] + k * i[2], i, v.re, v.im) for i, v in a._c.items()),
                key=lambda t: t[0])
    lb = sorted(((i[0] + i[1] + k * i[2], i, v.re, v.im) for i, v in b._c.items()),
                key=lambda t: t[0])
    wb0 = lb[0][0]
    acc: dict = defaultdict(lambda: [0, 0])
    for wa, (a0, a1, a2), ar, ai in la:
        lim = W - wa
        if lim < wb0:
            break
        for wb, (b0, b1, b2), br, bi in lb:
            if wb > lim:
                break
            slot = acc[(a0 + b0, a1 + b1, a2 + b2)]
            slot[0] += ar * br - ai * bi
            slot[1] += ar * bi + ai * br
    out = {}
    for i, (re, im) in acc.items():
        if re or im:
            out[MultiIndex(*i)] = _GR(Q(re), Q(im))
    return WeightedSeries._trusted(out, k, W)


def series_conjugate(a: WeightedSeries) -> WeightedSeries:
    return WeightedSeries._trusted(
        {MultiIndex(i[1], i[0], i[2]): v.conj() for i, v in a._c.items()}, a.k, a.W
    )


def series_is_real(a: WeightedSeries) -> bool:
    c = a._c
    for i, v in c.items():
        partner = c.get((i[1], i[0], i[2]))
        if partner is None or partner != v.conj():
            return False
    return True


def unmatched_conjugates(a: WeightedSeries) -> list:
    """Index pairs violating ``a[i,j,m] == conj(a[j,i,m])``."""
    bad = set()
    for i in a:
        j = i.conj()
        if a[i] != a[j].conj():
            bad.add((tuple(min(i, j)), tuple(max(i, j))))
    return sorted(bad)


def require_real(a: WeightedSeries) -> None:
    if not series_is_real(a):
        raise RealityViolation(unmatched_conjugates(a))


def weight_part(a: WeightedSeries, nu: int) -> WeightedSeries:
    if not 0 <= nu <= a.W:
        raise ValueError(f"weight {nu} outside [0, {a.W}]")
    return a.weight_part(nu)


class _Powers:
    """Memoised powers of one series, truncated at ``W``."""

    def __init__(self, base: WeightedSeries, W: int):
        self.base = base.truncate(W)
        self.W = W
        self._p = [WeightedSeries.monomial((0, 0, 0), k=base.k, W=W)]

    def __getitem__(self, n: int) -> WeightedSeries:
        while len(self._p) <= n:
            self._p.append(self._p[-1] * self.base)
        return self._p[n]


def series_substitute(F: WeightedSeries, Z: WeightedSeries, Zbar: WeightedSeries,
                      U: WeightedSeries) -> WeightedSeries:
    """Formal composition ``F(Z, Zbar, U)``, truncated at the common weight.

    Requires the substituted series to raise weight: ``Z`` and ``Zbar`` must
    have no constant term and ``U`` no part of weight below ``k``.
    """
    for s in (Z, Zbar, U):
        _check_k(F, s)
    k = F.k
    if Z[(0, 0, 0)] or Zbar[(0, 0, 0)] or U[(0, 0, 0)]:
        raise ValueError("substituted series must have zero constant term")
    if (U.min_weight() or k) < k:
        raise ValueError("U has terms of weight below k; substitution is not weight-filtered")
    W = min(F.W, Z.W, Zbar.W, U.W)
    pz, pzb, pu = _Powers(Z, W), _Powers(Zbar, W), _Powers(U, W)
    acc = WeightedSeries.zero(k, W)
    pair_cache: dict = {}
    for (a, b, c), v in F.items():
        if a + b + k * c > W:
            continue
        ab = pair_cache.get((a, b))
        if ab is None:
            ab = pair_cache[(a, b)] = pz[a] * pzb[b]
        acc = acc + (ab * pu[c]).scale(v)
    return acc


class HoloMapPair:
    """Truncated holomorphic coordinate change ``z* = f(z, w)``, ``w* = g(z, w)``.

    ``f`` is kept to weight ``W - (k - 1)`` and ``g`` to weight ``W``; this is
    exactly what the pushforward of a type-``k`` surface needs up to ``W``.
    """

    __slots__ = ("f", "g", "k", "W")

    def __init__(self, f: Mapping, g: Mapping, k: int, W: int):
        if k < 1 or W < 1:
            raise ValueError("k and W must be >= 1")
        fw = W - (k - 1)
        ff, gg = {}, {}
        for src, dst, lim in ((f, ff, fw), (g, gg, W)):
            for (i, j), v in src.items():
                if i < 0 or j < 0:
                    raise ValueError("negative exponent in map")
                v = GaussianRational.coerce(v)
                if v and i + k * j <= lim:
                    dst[(int(i), int(j))] = v
        if ff.get((0, 0)) or gg.get((0, 0)):
            raise NormalizationViolation("map must fix the origin: f(0,0) = g(0,0) = 0")
        if gg.get((1, 0)):
            raise NormalizationViolation("g_z(0) must vanish")
        if gg.get((0, 1), ZERO).im:
            raise NormalizationViolation("Im g_w(0) must vanish")
        self.f, self.g, self.k, self.W = ff, gg, k, W

    def __setattr__(self, name, value):
        if hasattr(self, "W"):
            raise AttributeError("HoloMapPair is immutable")
        object.__setattr__(self, name, value)

    @classmethod
    def identity(cls, k: int, W: int) -> "HoloMapPair":
        return cls({(1, 0): ONE}, {(0, 1): ONE}, k, W)

    @classmethod
    def diagonal(cls, c, lam, k: int, W: int) -> "HoloMapPair":
        """``z* = c z``, ``w* = lam w`` with ``lam`` real."""
        return cls({(1, 0): c}, {(0, 1): lam}, k, W)

    @property
    def f_z(self) -> GaussianRational:
        return self.f.get((1, 0), ZERO)

    @property
    def g_w(self) -> GaussianRational:
        return self.g.get((0, 1), ZERO)

    def is_weight_filtered(self) -> bool:
        """True when ``g`` has no monomial of weight below ``k``."""
        return all(i + self.k * j >= self.k for (i, j) in self.g)

    def is_linear_diagonal(self) -> bool:
        return set(self.f) <= {(1, 0)} and set(self.g) <= {(0, 1)}

    def with_truncation(self, W: int) -> "HoloMapPair":
        return HoloMapPair(self.f, self.g, self.k, W)

    def component_series(self, which: str) -> WeightedSeries:
        """The component as a series with ``w`` stored in the ``u`` slot."""
        src = self.f if which == "f" else self.g
        return WeightedSeries({(i, 0, j): v for (i, j), v in src.items()}, self.k, self.W)

    @classmethod
    def from_series(cls, f: WeightedSeries, g: WeightedSeries, k: int, W: int) -> "HoloMapPair":
        for s in (f, g):
            if any(i[1] for i in s.support()):
                raise ValueError("holomorphic map components cannot contain zb")
        return cls({(i[0], i[2]): v for i, v in f.items()},
                   {(i[0], i[2]): v for i, v in g.items()}, k, W)

    def __eq__(self, other):
        if not isinstance(other, HoloMapPair):
            return NotImplemented
        return (self.k, self.W, self.f, self.g) == (other.k, other.W, other.f, other.g)

    def __hash__(self):
        return hash((self.k, self.W, frozenset(self.f.items()), frozenset(self.g.items())))

    def __repr__(self):
        from .parse import format_holo

        return (f"HoloMapPair(f={format_holo(self.f)!r}, g={format_holo(self.g)!r}, "
                f"k={self.k}, W={self.W})")


def w_series(F: WeightedSeries) -> WeightedSeries:
    """``u + i F`` as a series in ``(z, zb, u)``."""
    return WeightedSeries.monomial((0, 0, 1), k=F.k, W=F.W) + F.scale(GaussianRational(0, 1))


def holo_eval(coeffs: Mapping, F: WeightedSeries, W: int | None = None) -> WeightedSeries:
    """Evaluate ``sum c_ij z^i w^j`` at ``w = u + i F``."""
    k = F.k
    W = F.W if W is None else min(W, F.W)
    wpow = _Powers(w_series(F), W)
    by_j: dict = defaultdict(dict)
    for (i, j), v in coeffs.items():
        if i + k * j <= W:
            by_j[j][(i, 0, 0)] = v
    acc = WeightedSeries.zero(k, W)
    for j in sorted(by_j):
        acc = acc + WeightedSeries(by_j[j], k, W) * wpow[j]
    return acc


def map_component_eval(m: HoloMapPair, which: str, F: WeightedSeries) -> WeightedSeries:
    """``f(z, u + iF)`` or ``g(z, u + iF)`` as a series in ``(z, zb, u)``."""
    if which not in ("f", "g"):
        raise ValueError("which must be 'f' or 'g'")
    if F.k != m.k:
        raise ValueError(f"mismatched grading: map k={m.k}, series k={F.k}")
    require_real(F)
    if (F.min_weight() or 2) < 2:
        raise ValueError("F must have no terms of weight below 2")
    return holo_eval(m.f if which == "f" else m.g, F, min(m.W, F.W))
