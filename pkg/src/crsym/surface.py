"""Hypersurfaces ``v = F(z, zb, u)`` and their discrete invariants."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

from .errors import ModelSurface, NotFiniteType, NotPrepared
from .parse import detect_type
from .scalars import ONE, GaussianRational, Q
from .series import HoloMapPair, MultiIndex, WeightedSeries, require_real


@dataclass(frozen=True)
class ModelInfo:
    k: int
    model_coeffs: dict  # j -> a_j, coefficient of z^j zb^(k-j)
    l: int
    kappa: int | None
    circular: bool


@dataclass(frozen=True)
class AnchorIndex:
    alpha0: int
    beta0: int
    gamma0: int
    p: int

    @property
    def index(self) -> MultiIndex:
        return MultiIndex(self.alpha0, self.beta0, self.gamma0)


@dataclass(frozen=True, eq=False)
class Hypersurface:
    """A validated real defining function of finite type ``k``.

    Build these through :func:`validate_surface`; the constructor trusts its
    input.
    """

    F: WeightedSeries

    @property
    def k(self) -> int:
        return self.F.k

    @property
    def W(self) -> int:
        return self.F.W

    def __eq__(self, other):
        if not isinstance(other, Hypersurface):
            return NotImplemented
        return self.F == other.F

    def __hash__(self):
        return hash(self.F)

    def agrees_with(self, other: "Hypersurface") -> bool:
        return self.k == other.k and self.F.agrees_with(other.F)

    def truncate(self, W: int) -> "Hypersurface":
        return Hypersurface(self.F.truncate(W))

    @cached_property
    def info(self) -> ModelInfo:
        return model_of(self)

    def model_part(self) -> WeightedSeries:
        return self.F.weight_part(self.k)

    def perturbation(self) -> WeightedSeries:
        """``F`` minus its weight-``k`` model."""
        return self.F - self.model_part()

    def is_model(self) -> bool:
        return self.perturbation().is_zero()


def validate_surface(F: WeightedSeries) -> Hypersurface:
    """Check that ``F`` is a prepared real defining function and detect its type.

    Every term of weight ``<= k`` must be a mixed ``z^a zb^b`` term; anything
    else there (harmonic terms, a linear ``u`` term, lower-order pieces) means
    the coordinates are not prepared.  When the detected type differs from
    ``F.k`` the series is re-graded with the detected value, keeping ``W``.
    """
    require_real(F)
    try:
        k = detect_type(F)
    except NotFiniteType:
        if any(i[0] == 0 or i[1] == 0 for i in F):
            raise NotPrepared("no mixed (z, zb) term besides harmonic or u-terms; "
                              "absorb harmonic terms first") from None
        raise
    if k != F.k:
        F = F.regrade(k)
    bad = [tuple(i) for i in F if F.weight(i) <= k and not (i[0] >= 1 and i[1] >= 1 and i[2] == 0)]
    if bad:
        raise NotPrepared(
            f"terms of weight <= {k} that are not mixed (z, zb) terms: {bad}; "
            "remove harmonic terms first (absorb_harmonic)"
        )
    return Hypersurface(F)


def model_of(M: Hypersurface) -> ModelInfo:
    k = M.k
    coeffs = {j: M.F[(j, k - j, 0)] for j in range(1, k)}
    coeffs = {j: v for j, v in coeffs.items() if v}
    l = min(coeffs)
    circular = 2 * l == k
    kappa = None
    if not circular:
        kappa = 0
        for m in coeffs:
            if 2 * m < k:
                kappa = gcd(kappa, k - 2 * m)
    return ModelInfo(k=k, model_coeffs=coeffs, l=l, kappa=kappa, circular=circular)


def kappa_invariant(info: ModelInfo) -> int:
    """gcd of ``k - 2m`` over the nonzero model indices ``m < k/2``."""
    if 2 * info.l == info.k:
        raise ValueError("kappa is undefined when the essential type is k/2")
    out = 0
    for m, v in info.model_coeffs.items():
        if v and 2 * m < info.k:
            out = gcd(out, info.k - 2 * m)
    return out


def _inverse_lex_key(idx):
    # gamma first, then beta, then alpha
    return (idx[2], idx[1], idx[0])


def anchor_index(M: Hypersurface) -> AnchorIndex:
    Qp = M.perturbation()
    if Qp.is_zero():
        raise ModelSurface("surface equals its model up to the truncation; no anchor index")
    p = Qp.min_weight()
    best = min((i for i in Qp.support() if Qp.weight(i) == p), key=_inverse_lex_key)
    return AnchorIndex(best[0], best[1], best[2], p)


def is_weakly_spherical(M: Hypersurface) -> bool:
    return all(i[0] == i[1] for i in M.F.support())


def leading_rescale(F: WeightedSeries):
    """Scale ``w`` so that a circular leading term ``c |z|^k`` becomes ``|z|^k``.

    Returns ``(F', map)`` with ``map = (z, w/c)``.  Noncircular leading terms
    are left alone (identity map).
    """
    k = detect_type(F)
    if k != F.k:
        F = F.regrade(k)
    mixed = {j: F[(j, k - j, 0)] for j in range(1, k) if F[(j, k - j, 0)]}
    if k % 2 or set(mixed) != {k // 2}:
        return F, HoloMapPair.identity(k, F.W)
    c = mixed[k // 2]
    if c.im:
        raise ValueError("leading coefficient of |z|^k must be real")
    c = c.re
    if c == 1:
        return F, HoloMapPair.identity(k, F.W)
    # F'(z, zb, u) = F(z, zb, c u) / c
    out = {i: v * GaussianRational(c ** (i[2] - 1)) for i, v in F.items()}
    return WeightedSeries(out, k, F.W), HoloMapPair.diagonal(ONE, GaussianRational(Q(1) / c), k, F.W)
