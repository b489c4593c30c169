"""Deciding equivalence of normalized surfaces.

Between two surfaces in special normal form only diagonal maps
``z -> c z``, ``w -> lam w`` remain.  Writing ``c = Y e^{i theta}`` and
``lam = sign * X`` the coefficient ratio of every common term is a character

    b_idx / a_idx = sign^s * X^d * Y^e * e^{i phi theta}

with ``d = 1 - g``, ``e = -(a + b)``, ``phi = b - a`` and ``s = d mod 2``.
The moduli and the phase are decided separately through integer kernels of
the exponent rows, so every step stays in exact arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import NotSpecialNormalized, OutOfScope
from .lattice import kernel_lattice, power_product
from .linalg import rank
from .normalform import check_normal_form, is_special, normalize, prepare, special_normalize
from .scalars import ONE, GaussianRational, Q, Rational, rational_root
from .series import HoloMapPair, MultiIndex, WeightedSeries
from .surface import Hypersurface
from .transform import RootOfUnity, pushforward

SCOPE_NORMAL = "normal-form"
SCOPE_LINEAR = "linear-equivalence only"


@dataclass(frozen=True)
class CharacterRow:
    idx: MultiIndex
    d: int
    e: int
    phi: int
    s: int
    ratio: GaussianRational

    @classmethod
    def build(cls, idx, a: GaussianRational, b: GaussianRational) -> "CharacterRow":
        al, be, g = idx
        return cls(MultiIndex(al, be, g), 1 - g, -(al + be), -(al - be), (1 - g) % 2, b / a)


@dataclass(frozen=True)
class ModulusRelation:
    """``X^x_exp * Y^y_exp = value`` with ``X = |lam|`` and ``Y = |c|``."""

    x_exp: int
    y_exp: int
    value: Rational

    def __str__(self):
        return f"|lam|^{self.x_exp} * |c|^{self.y_exp} = {self.value}"


@dataclass(frozen=True)
class Witness:
    """A diagonal map carrying the first surface to the second.

    ``phase_power`` is ``g`` in ``e^{i g theta} = T``; ``phase_target_sq`` is
    ``T^2``.  ``phase`` is the token of ``e^{i theta}`` when ``T`` is an eighth
    root of unity, otherwise ``None``.  ``lam_abs`` and ``c_abs`` are ``None``
    when the moduli are irrational; the relations then pin them down.
    """

    sign: int
    phase: RootOfUnity | None
    phase_power: int
    phase_target_sq: GaussianRational
    moduli: tuple
    lam_abs: Rational | None
    c_abs: Rational | None
    verified_by: str

    def map(self, k: int, W: int) -> HoloMapPair | None:
        """The exact map when every ingredient is a Gaussian rational."""
        if self.phase is None or self.lam_abs is None or self.c_abs is None:
            return None
        w = self.phase.to_gaussian()
        if w is None:
            return None
        return HoloMapPair.diagonal(w * GaussianRational(self.c_abs),
                                    GaussianRational(self.sign * self.lam_abs), k, W)


@dataclass(frozen=True)
class Refutation:
    """Why no diagonal map exists.

    ``kind`` is one of ``type``, ``model``, ``support``, ``modulus``, ``phase``.
    """

    kind: str
    detail: str
    kernel_vector: tuple = ()
    indices: tuple = ()


@dataclass(frozen=True)
class EquivalenceCertificate:
    verdict: str
    scope: str
    witness: Witness | None = None
    refutation: Refutation | None = None
    rows: tuple = field(default=(), repr=False)
    modulus_freedom: int | None = None
    phase_solutions: int | None = None

    @property
    def equivalent(self) -> bool:
        return self.verdict == "equivalent"


def _gr_power_product(values, exponents) -> GaussianRational:
    out = ONE
    for v, e in zip(values, exponents):
        if e:
            out = out * v ** e
    return out


def _sign_cos(b: int) -> int:
    return (1, 1, 0, -1, -1, -1, 0, 1)[b % 8]


def _sign_sin(b: int) -> int:
    return (0, 1, 1, 1, 0, -1, -1, -1)[b % 8]


def _sgn(q) -> int:
    return (q > 0) - (q < 0)


def unit_token(x: GaussianRational, sign: int = 1) -> RootOfUnity | None:
    """Token of ``sign * x / |x|`` when it is an eighth root of unity."""
    sq = x * x / GaussianRational(x.norm_sq())
    quarter = {ONE: 0, GaussianRational(0, 1): 1, GaussianRational(-1): 2, GaussianRational(0, -1): 3}
    a = quarter.get(sq)
    if a is None:
        return None
    re, im = sign * _sgn(x.re), sign * _sgn(x.im)
    for b in (a, a + 4):
        if _sign_cos(b) == re and _sign_sin(b) == im:
            return RootOfUnity(8, b)
    raise ArithmeticError("inconsistent unit token")


def _bezout(values) -> tuple:
    """``(g, x)`` with ``g = gcd(values) >= 0`` and ``sum x_i values_i = g``."""
    g, x = 0, [0] * len(values)
    for i, v in enumerate(values):
        if v == 0:
            continue
        if g == 0:
            g, x = abs(v), [0] * len(values)
            x[i] = 1 if v > 0 else -1
            continue
        # extended gcd of (g, v)
        r0, r1, s0, s1, t0, t1 = g, v, 1, 0, 0, 1
        while r1:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0 < 0:
            r0, s0, t0 = -r0, -s0, -t0
        x = [s0 * xi for xi in x]
        x[i] += t0
        g = r0
    return g, x


def _signs(k: int, side_swap: bool):
    return (1, -1) if side_swap or k % 2 else (1,)


def _phase_obstruction(rows, sign: int):
    """First kernel vector of the phase column violating the unit constraint."""
    ratios = [r.ratio for r in rows]
    norms = [r.ratio.norm_sq() for r in rows]
    for n in kernel_lattice([[r.phi] for r in rows]):
        P = _gr_power_product(ratios, n)
        want = sign ** (sum(ni * r.s for ni, r in zip(n, rows)) % 2)
        if not P.is_real() or _sgn(P.re) != want or P.re ** 2 != power_product(norms, n):
            return tuple(n)
    return None


def _reduced(x_exp: int, y_exp: int, q) -> ModulusRelation:
    """Divide a one-unknown relation by the largest exponent that keeps it rational."""
    D = x_exp or y_exp
    for t in sorted((t for t in range(1, D + 1) if D % t == 0), reverse=True):
        r = rational_root(q, t)
        if r is not None:
            return ModulusRelation(x_exp // t, y_exp // t, r)
    raise AssertionError("unreachable")


def _moduli(rows):
    """Solve ``X^{2d} Y^{2e} = N`` as far as rationals allow."""
    A = [(r.d, r.e) for r in rows]
    N = [r.ratio.norm_sq() for r in rows]
    rk = rank(A)
    if rk == 0:
        return (), Q(1), Q(1), 2
    if rk == 2:
        i = 0
        j = next(j for j in range(1, len(rows)) if A[0][0] * A[j][1] - A[0][1] * A[j][0])
        (di, ei), (dj, ej) = A[i], A[j]
        D = 4 * (di * ej - ei * dj)
        # Cramer in the exponents: X^D = N_i^(2 ej) N_j^(-2 ei), Y^D = N_j^(2 di) N_i^(-2 dj)
        qx = N[i] ** (2 * ej) * N[j] ** (-2 * ei)
        qy = N[j] ** (2 * di) * N[i] ** (-2 * dj)
        if D < 0:
            D, qx, qy = -D, 1 / qx, 1 / qy
        rels = (_reduced(D, 0, qx), _reduced(0, D, qy))
        return rels, rational_root(qx, D), rational_root(qy, D), 0
    # rank one: the dilation stays free, fix the first nonzero unknown to 1
    i = next(i for i in range(len(rows)) if A[i] != (0, 0))
    di, ei = A[i]
    if di:
        rel = ModulusRelation(2 * di, 2 * ei, N[i])
        q = N[i] if di > 0 else 1 / N[i]
        return (rel,), rational_root(q, 2 * abs(di)), Q(1), 1
    rel = ModulusRelation(0, 2 * ei, N[i])
    q = N[i] if ei > 0 else 1 / N[i]
    return (rel,), Q(1), rational_root(q, 2 * abs(ei)), 1


def _scope(A: Hypersurface, B: Hypersurface) -> str:
    for M in (A, B):
        if M.info.circular:
            if not check_normal_form(M):
                raise NotSpecialNormalized("surface is not in normal form")
            if not M.is_model() and not is_special(M):
                raise NotSpecialNormalized("surface is in normal form but mu is not the special one")
        elif not M.is_model():
            raise NotSpecialNormalized("noncircular surfaces are compared only as models")
    if A.info.circular != B.info.circular:
        return SCOPE_NORMAL
    return SCOPE_NORMAL if A.info.circular else SCOPE_LINEAR


def linear_equivalent(A: Hypersurface, B: Hypersurface, *, side_swap: bool = False) -> EquivalenceCertificate:
    """Is there a diagonal map taking ``A`` to ``B``?"""
    if A.k != B.k:
        return EquivalenceCertificate("inequivalent", SCOPE_NORMAL,
                                      refutation=Refutation("type", f"k = {A.k} vs k = {B.k}"))
    scope = _scope(A, B)
    W = min(A.W, B.W)
    A, B = A.truncate(W), B.truncate(W)
    sa, sb = A.F.support(), B.F.support()
    if sa != sb:
        diff = tuple(sorted(set(sa) ^ set(sb), key=lambda i: (A.F.weight(i), i[2], i[1], i[0])))
        return EquivalenceCertificate(
            "inequivalent", scope,
            refutation=Refutation("support", "nonzero supports differ", indices=diff))
    rows = tuple(CharacterRow.build(i, A.F[i], B.F[i]) for i in A.F.support())

    norms = [r.ratio.norm_sq() for r in rows]
    for n in kernel_lattice([(2 * r.d, 2 * r.e) for r in rows]):
        if power_product(norms, n) != 1:
            return EquivalenceCertificate(
                "inequivalent", scope, rows=rows,
                refutation=Refutation("modulus", "moduli of the coefficient ratios are inconsistent",
                                      tuple(n), tuple(rows[i].idx for i, v in enumerate(n) if v)))
    moduli, X, Y, freedom = _moduli(rows)

    working, obstruction = [], None
    for s in _signs(A.k, side_swap):
        bad = _phase_obstruction(rows, s)
        if bad is None:
            working.append(s)
        elif obstruction is None:
            obstruction = bad
    if not working:
        return EquivalenceCertificate(
            "inequivalent", scope, rows=rows, modulus_freedom=freedom,
            refutation=Refutation("phase", "no rotation matches the coefficient phases",
                                  obstruction, tuple(rows[i].idx for i, v in enumerate(obstruction) if v)))

    g, x = _bezout([r.phi for r in rows])
    count = None if g == 0 else g * len(working)
    s = working[0]
    if g == 0:
        Tsq, token = ONE, RootOfUnity(1, 0)
    else:
        P = _gr_power_product([r.ratio for r in rows], x)
        Tsq = P * P / GaussianRational(power_product(norms, x))
        flip = s ** (sum(xi * r.s for xi, r in zip(x, rows)) % 2)
        base = unit_token(P, flip)
        token = None if base is None else RootOfUnity(8 * g, base.t * (8 // base.n))
    witness = Witness(s, token, g, Tsq, moduli, X, Y, "lattice")
    m = witness.map(A.k, W)
    if m is not None:
        if not pushforward(A, m).agrees_with(B):
            raise ArithmeticError("equivalence witness fails the pushforward check")
        witness = Witness(s, token, g, Tsq, moduli, X, Y, "pushforward")
    elif not verify_rows(rows, witness):
        raise ArithmeticError("equivalence witness fails the lattice re-check")
    return EquivalenceCertificate("equivalent", scope, witness=witness, rows=rows,
                                  modulus_freedom=freedom, phase_solutions=count)


def verify_rows(rows, w: Witness) -> bool:
    """Re-check a witness against every row without leaving exact arithmetic.

    Moduli are checked through their relations, phases through the unit
    tokens of each ratio when available and through kernel products
    otherwise.
    """
    for r in rows:
        N = r.ratio.norm_sq()
        if w.lam_abs is not None and w.c_abs is not None:
            if w.lam_abs ** (2 * r.d) * w.c_abs ** (2 * r.e) != N:
                return False
    for rel in w.moduli:
        if w.lam_abs is not None and w.c_abs is not None:
            if w.lam_abs ** rel.x_exp * w.c_abs ** rel.y_exp != rel.value:
                return False
    norms = [r.ratio.norm_sq() for r in rows]
    for n in kernel_lattice([(2 * r.d, 2 * r.e) for r in rows]):
        if power_product(norms, n) != 1:
            return False
    if _phase_obstruction(rows, w.sign) is not None:
        return False
    if w.phase is not None:
        minus = RootOfUnity(2, 1)
        for r in rows:
            t = unit_token(r.ratio)
            if t is None:
                continue
            expect = (w.phase ** r.phi) * (minus ** r.s if w.sign < 0 else RootOfUnity(1, 0))
            if t != expect:
                return False
    return True


def _as_series(M) -> WeightedSeries:
    return M.F if isinstance(M, Hypersurface) else M


def reduce_for_comparison(M, *, special: bool = True):
    """Prepared and normalized form of a surface, with ``mu`` fixed if ``special``.

    Raises :class:`OutOfScope` for surfaces whose model is not circular and
    which are not models themselves.
    """
    P, _ = prepare(_as_series(M))
    if not P.info.circular:
        if not P.is_model():
            raise OutOfScope("normal forms for models with essential type below k/2 are not covered")
        return P
    nf = normalize(P).nf
    if nf.is_model() or not special:
        return nf
    return special_normalize(nf)[0]


def equivalent(A, B, *, side_swap: bool = False) -> EquivalenceCertificate:
    """Full pipeline: prepare, normalize, fix ``mu``, compare linearly."""
    FA, FB = _as_series(A), _as_series(B)
    if FA.k != FB.k:
        return EquivalenceCertificate("inequivalent", SCOPE_NORMAL,
                                      refutation=Refutation("type", f"k = {FA.k} vs k = {FB.k}"))
    RA = reduce_for_comparison(FA, special=False)
    RB = reduce_for_comparison(FB, special=False)
    if RA.info.circular != RB.info.circular:
        return EquivalenceCertificate("inequivalent", SCOPE_NORMAL,
                                      refutation=Refutation("model", "the model parts differ"))
    if RA.info.circular:
        if RA.is_model() != RB.is_model():
            return EquivalenceCertificate(
                "inequivalent", SCOPE_NORMAL,
                refutation=Refutation("model", "exactly one surface normalizes to the model"))
        if not RA.is_model():
            RA, RB = special_normalize(RA)[0], special_normalize(RB)[0]
    return linear_equivalent(RA, RB, side_swap=side_swap)
