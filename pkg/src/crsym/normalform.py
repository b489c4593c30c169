"""Normal form for surfaces whose model is ``v = |z|^k`` (``k = 2l``).

The perturbation ``N = F - |z|^k`` is in normal form when its slices
``Z_ij(u)`` vanish for

* ``j = 0`` (and ``i = 0``): no harmonic part,
* ``(l, l+j)`` and ``(l+j, l)`` for ``j >= 0``,
* ``(2l, 2l)``, ``(3l, 3l)``, ``(2l, 2l-1)``, ``(2l-1, 2l)``.

The normalizing map is unique once ``f_z = Re g_w = 1`` and
``Re g_ww = 0``; :func:`normalize` finds it one weight at a time by an exact
square linear solve and raises :class:`RankDefect` if a system is not
uniquely solvable.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ModelSurface, NonAffine, NotCircular, NotNormalized, NotPrepared, TruncationTooLow
from .linalg import solve_square
from .parse import detect_type
from .scalars import ONE, ZERO, GaussianRational, Q, Rational
from .series import HoloMapPair, MultiIndex, WeightedSeries, holo_eval
from .surface import AnchorIndex, Hypersurface, anchor_index, leading_rescale, validate_surface
from .transform import InitialData, RootOfUnity, ok_model_automorphism, pushforward, solve_pushforward

_I = GaussianRational(0, 1)


@dataclass(frozen=True)
class NormalFormResult:
    nf: Hypersurface
    map: HoloMapPair
    initial: InitialData


@dataclass(frozen=True)
class ResidualGroupNote:
    """What the anchor normalization leaves of the linear group.

    ``theta_order`` is ``None`` when the rotation stays free (a circle),
    otherwise the order of the finite rotation group compatible with the
    anchor.  The dilation is pinned: ``delta**(p - k) == |anchor_value|``
    turns the anchor modulus into 1.
    """

    anchor: AnchorIndex
    anchor_value: GaussianRational
    mu: Rational
    theta_order: int | None
    single_term: bool
    anchor_modulus_sq: Rational
    delta_exponent: int

    @property
    def delta_is_one(self) -> bool:
        return self.anchor_modulus_sq == 1


def _forbidden(a: int, b: int, l: int) -> bool:
    if a == 0 or b == 0:
        return True
    if (a == l and b >= l) or (b == l and a >= l):
        return True
    return (a, b) in ((2 * l, 2 * l), (3 * l, 3 * l), (2 * l, 2 * l - 1), (2 * l - 1, 2 * l))


def _circular_l(M: Hypersurface) -> int:
    info = M.info
    if not info.circular:
        raise NotCircular(f"model is not v = c|z|^k (essential type {info.l} < k/2 = {M.k / 2})")
    return info.l


def check_normal_form(M: Hypersurface) -> bool:
    l = _circular_l(M)
    if M.F[(l, l, 0)] != ONE:
        return False
    N = M.perturbation()
    return not any(_forbidden(a, b, l) for (a, b, _) in N.support())


def absorb_harmonic(F: WeightedSeries):
    """Remove pure ``z^j`` / ``zb^j`` terms with ``g = w + sum c_j z^j``, ``f = z``.

    Uses the exact relation ``F'(z, zb, u) = F(z, zb, u - Re H) + Im H`` with
    ``H = sum c_j z^j``, solved for increasing ``j``.  Harmonic terms of weight
    below ``k`` move ``u`` down in weight, so the stored terms of ``F`` are
    then taken as the exact (polynomial) defining function.
    """
    k = detect_type(F)
    if k != F.k:
        F = F.regrade(k)
    if F[(0, 0, 0)] or F[(1, 0, 0)]:
        raise NotPrepared("constant or linear harmonic term: the origin is not on the "
                          "surface or v = 0 is not tangent there")
    H: dict = {}
    cur = F
    for j in range(2, F.W + 1):
        h = cur[(j, 0, 0)]
        if h:
            H[j] = H.get(j, ZERO) - _I * h * 2
            cur = _apply_harmonic(F, H)
    g = {(0, 1): ONE}
    g.update({(j, 0): c for j, c in H.items()})
    return cur, HoloMapPair({(1, 0): ONE}, g, k, F.W)


def _apply_harmonic(F: WeightedSeries, H: dict) -> WeightedSeries:
    k, W = F.k, F.W
    Wint = max(W, F.max_weight() or W)
    Hs = WeightedSeries({(j, 0, 0): c for j, c in H.items()}, k, Wint)
    shift = WeightedSeries.monomial((0, 0, 1), k=k, W=Wint) - Hs.real_part()
    powers = [WeightedSeries.monomial((0, 0, 0), k=k, W=Wint)]
    acc = WeightedSeries.zero(k, Wint)
    for (a, b, c), v in F.with_truncation(Wint).items():
        while len(powers) <= c:
            powers.append(powers[-1] * shift)
        acc = acc + (WeightedSeries.monomial((a, b, 0), v, k=k, W=Wint) * powers[c])
    return (acc + Hs.imag_part()).truncate(W)


def _model(l: int, k: int, W: int) -> WeightedSeries:
    return WeightedSeries.monomial((l, l, 0), k=k, W=W)


def _unknowns(nu: int, k: int):
    """Real unknowns at step ``nu``: (component, (i, j), part)."""
    out = []
    for j in range(0, (nu + 1) // k + 1):
        i = nu + 1 - k * j
        if i >= 0 and (i, j) != (0, 0):
            out += [("f", (i, j), 0), ("f", (i, j), 1)]
    N = nu + k
    for j in range(0, N // k + 1):
        i = N - k * j
        if (i, j) in ((0, 0), (1, 0), (0, 1)):
            continue
        if (i, j) != (0, 2):  # Re g_ww = 0 is fixed initial data
            out.append(("g", (i, j), 0))
        out.append(("g", (i, j), 1))
    return out


def _equations(N: int, k: int, l: int):
    """Real components of forbidden coefficients at weight ``N`` (one per conjugate pair)."""
    out = []
    for c in range(0, N // k + 1):
        s = N - k * c
        for a in range(0, s // 2 + 1):
            b = s - a
            if _forbidden(a, b, l):
                out.append((MultiIndex(a, b, c), 0))
                if a != b:
                    out.append((MultiIndex(a, b, c), 1))
    return out


def _linear_response(kind: str, ij, part: int, k: int, l: int, N: int, wk: list) -> WeightedSeries:
    """Change of the weight-``N`` part of ``F*`` for a unit change of one unknown."""
    i, j = ij
    eps = ONE if part == 0 else _I
    mono = WeightedSeries.monomial((i, 0, 0), eps, k=k, W=N) * wk[j]
    if kind == "g":
        return mono.imag_part().weight_part(N)
    # f: -2 Re( l z^(l-1) zb^l * eps z^i (u + i|z|^k)^j )
    lead = WeightedSeries.monomial((l - 1, l, 0), GaussianRational(l), k=k, W=N)
    return (lead * mono).real_part().scale(-2).weight_part(N)


def normalize(M: Hypersurface) -> NormalFormResult:
    l = _circular_l(M)
    k, W = M.k, M.W
    if M.F[(l, l, 0)] != ONE:
        raise NotNormalized("leading coefficient must be 1; run leading_rescale first")
    f = {(1, 0): ONE}
    g = {(0, 1): ONE}
    model = _model(l, k, W)
    u = WeightedSeries.monomial((0, 0, 1), k=k, W=W)
    w_model = u + model.scale(_I)
    wk = [WeightedSeries.monomial((0, 0, 0), k=k, W=W)]
    for nu in range(1, W - k + 1):
        N = nu + k
        while len(wk) <= N // k:
            wk.append(wk[-1] * w_model)
        unknowns = _unknowns(nu, k)
        equations = _equations(N, k, l)
        current = solve_pushforward(M.F.truncate(N), HoloMapPair(f, g, k, N)).weight_part(N)
        rhs = [-_component(current[idx], part) for idx, part in equations]
        cols = []
        for kind, ij, part in unknowns:
            resp = _linear_response(kind, ij, part, k, l, N, [x.truncate(N) for x in wk])
            cols.append([_component(resp[idx], part_e) for idx, part_e in equations])
        A = [[cols[c][r] for c in range(len(cols))] for r in range(len(equations))]
        x = solve_square(A, rhs, context=f"normal form at weight {N}")
        for (kind, ij, part), val in zip(unknowns, x):
            if not val:
                continue
            target = f if kind == "f" else g
            delta = GaussianRational(val) if part == 0 else GaussianRational(0, val)
            target[ij] = target.get(ij, ZERO) + delta
    the_map = HoloMapPair(f, g, k, W)
    nf = pushforward(M, the_map)
    if not check_normal_form(nf):
        raise ArithmeticError("normalization finished but the result violates the normal form")
    return NormalFormResult(nf, the_map, InitialData())


def _component(v: GaussianRational, part: int):
    return v.re if part == 0 else v.im


def renormalize_with_initial_data(M_nf: Hypersurface, d: InitialData) -> Hypersurface:
    """Normal form of ``M_nf`` belonging to the initial data ``d``."""
    if d.is_trivial():
        return normalize(M_nf).nf
    moved = pushforward(M_nf, ok_model_automorphism(d, M_nf.k, M_nf.W))
    return normalize(moved).nf


def _mu_target(M: Hypersurface, a: AnchorIndex) -> MultiIndex:
    l, k = M.info.l, M.k
    if a.alpha0 + a.beta0 + l * a.gamma0 != k:
        return MultiIndex(a.alpha0, a.beta0, a.gamma0 + 1)
    return MultiIndex(a.alpha0 + k, a.beta0 + k, 0)


def special_mu(M_nf: Hypersurface) -> Rational:
    """The ``mu`` whose renormalization kills the designated real coefficient.

    The condition is read relative to the anchor coefficient,
    ``Re(a_target / a_anchor) = 0``; this is the literal condition once the
    anchor is scaled to 1 and is unchanged by the remaining linear maps.
    """
    if not check_normal_form(M_nf):
        raise NotNormalized("special_mu needs a surface in normal form")
    a = anchor_index(M_nf)
    target = _mu_target(M_nf, a)
    Wt = target.weight(M_nf.k)
    if Wt > M_nf.W:
        raise TruncationTooLow(f"target coefficient {tuple(target)} has weight {Wt} > W = {M_nf.W}")
    small = M_nf.truncate(Wt)

    def value(mu):
        R = small if mu == 0 else renormalize_with_initial_data(small, InitialData(mu=mu))
        anchor = R.F[a.index]
        if not anchor:
            raise NonAffine("anchor coefficient vanished under renormalization")
        return (R.F[target] / anchor).re

    t0, t1, t2 = value(Q(0)), value(Q(1)), value(Q(2))
    if t2 - 2 * t1 + t0:
        raise NonAffine(f"target coefficient is not affine in mu: values {t0}, {t1}, {t2}")
    slope = t1 - t0
    if not slope:
        raise NonAffine("target coefficient does not depend on mu")
    return -t0 / slope


def is_special(M_nf: Hypersurface) -> bool:
    """Whether ``mu = 0`` already satisfies the special condition."""
    if not check_normal_form(M_nf) or M_nf.is_model():
        return False
    a = anchor_index(M_nf)
    target = _mu_target(M_nf, a)
    if target.weight(M_nf.k) > M_nf.W:
        raise TruncationTooLow(f"target coefficient {tuple(target)} lies above W = {M_nf.W}")
    return (M_nf.F[target] / M_nf.F[a.index]).re == 0


def special_normalize(M_nf: Hypersurface):
    """Fix ``mu`` and describe the residual linear freedom.

    Returns ``(surface, ResidualGroupNote)``.  The anchor coefficient is left
    as it is: scaling it to 1 needs ``delta = |a|^(1/(p-k))``, usually not a
    rational number.
    """
    if M_nf.is_model():
        raise ModelSurface("the model has no special normal form")
    mu = special_mu(M_nf)
    out = M_nf if mu == 0 else renormalize_with_initial_data(M_nf, InitialData(mu=mu))
    a = anchor_index(out)
    value = out.F[a.index]
    Qp = out.perturbation().weight_part(a.p)
    single = len(Qp) == 1 and a.alpha0 == a.beta0
    order = None if a.alpha0 == a.beta0 else abs(a.alpha0 - a.beta0)
    note = ResidualGroupNote(
        anchor=a,
        anchor_value=value,
        mu=mu,
        theta_order=order,
        single_term=single,
        anchor_modulus_sq=value.norm_sq(),
        delta_exponent=a.p - out.k,
    )
    return out, note


def prepare(F: WeightedSeries):
    """Rescale the leading term and strip harmonic terms; returns ``(M, maps)``."""
    F1, m1 = leading_rescale(F)
    F2, m2 = absorb_harmonic(F1)
    return validate_surface(F2), [m1, m2]
