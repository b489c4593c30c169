"""Stability groups of normalized surfaces.

In normal coordinates every local automorphism of a surface other than
``v = |z|^k`` is a diagonal linear map ``z -> c z``, ``w -> lam w``, which
acts on each coefficient separately::

    a*_{abg} = a_{abg} * lam^(1-g) * c^(-a) * conj(c)^(-b)

so the stabilizer is read off from the exponents of the nonzero terms.  The
sign of ``lam`` follows the ``w -> delta^k w`` parametrization with real
``delta``: negative ``lam`` occurs only for odd ``k`` unless ``side_swap`` is
requested, which admits every real ``lam``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import NotNormalized, OutOfScope
from .normalform import check_normal_form, normalize, prepare
from .scalars import ONE, GaussianRational
from .series import HoloMapPair, WeightedSeries
from .surface import Hypersurface, kappa_invariant
from .transform import RootOfUnity, is_automorphism

TAGS = ("Dim3", "RPlusCrossCyclic", "Circle", "Cyclic")


@dataclass(frozen=True)
class Generator:
    """One generator of a stability group.

    ``kind`` is ``"rotation"`` (a single map ``z -> phase z, w -> sign w``),
    or one of the continuous families ``"dilation"`` (``z -> d z,
    w -> d^k w``, ``d > 0``), ``"circle"`` (``z -> e^{it} z``) and ``"mu"``
    (the nonlinear family of ``v = |z|^k``).
    """

    kind: str
    phase: RootOfUnity | None = None
    sign: int = 1

    def __str__(self):
        if self.kind == "rotation":
            return f"z -> {self.phase}*z, w -> {'-' if self.sign < 0 else ''}w"
        return {"dilation": "z -> d*z, w -> d^k*w (d > 0)",
                "circle": "z -> exp(i*t)*z (t real)",
                "mu": "z -> z/(1 + mu*w)^(2/k), w -> w/(1 + mu*w) (mu real)"}[self.kind]


@dataclass(frozen=True)
class SymmetryGroup:
    tag: str
    order: int | None = None
    generators: tuple = field(default=())
    side_swap: bool = False

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown tag {self.tag}")

    def __str__(self):
        if self.tag in ("RPlusCrossCyclic", "Cyclic"):
            return f"{self.tag}({self.order})"
        return self.tag

    @property
    def finite_order(self) -> int | None:
        """Order of the discrete rotation part (``None`` for continuous rotations)."""
        return self.order if self.tag in ("RPlusCrossCyclic", "Cyclic") else None


def _signs(k: int, side_swap: bool):
    return (1, -1) if side_swap or k % 2 else (1,)


def rotation_solutions(F: WeightedSeries, N: int, signs) -> list:
    """All ``(t, s)`` with phase ``exp(2 pi i t / N)`` and sign ``s`` fixing every term.

    A term ``(a, b, g)`` is fixed iff ``exp(2 pi i t (a-b) / N) = s^(g-1)``.
    """
    out = []
    for s in signs:
        for t in range(N):
            ok = True
            for (a, b, g) in F.support():
                r = (t * (a - b)) % N
                want = 0 if (s == 1 or (g - 1) % 2 == 0) else N // 2
                if r != want:
                    ok = False
                    break
            if ok:
                out.append((t, s))
    return out


def rotation_order_formula(F: WeightedSeries, signs) -> int:
    """Order of the finite rotation group from the gcd of ``|a - b|``."""
    d = 0
    for (a, b, _) in F.support():
        d = gcd(d, abs(a - b))
    if d == 0:
        raise ValueError("all terms are rotation invariant")
    if -1 not in signs:
        return d
    for t in (0, 1):
        if all((t * ((a - b) // d) - (g - 1)) % 2 == 0 for (a, b, g) in F.support()):
            return 2 * d
    return d


def _rotation_group(F: WeightedSeries, k: int, signs):
    n = rotation_order_formula(F, signs)
    maxdiff = max(abs(a - b) for (a, b, _) in F.support())
    Nbf = 2 * maxdiff * k
    sols = rotation_solutions(F, Nbf, signs)
    if len(sols) != n:
        raise ArithmeticError(f"rotation order mismatch: gcd formula {n}, enumeration {len(sols)}")
    gen = None
    for t, s in sols:
        if RootOfUnity(Nbf, t) == RootOfUnity(n, 1):
            gen = Generator("rotation", RootOfUnity(n, 1), s)
            break
    if gen is None:
        raise ArithmeticError("finite rotation group is not cyclic on the phases")
    return n, gen


def diagonal_stabilizer(M_nf: Hypersurface, *, side_swap: bool = False,
                        assume_normal: bool = False) -> SymmetryGroup:
    info = M_nf.info
    F = M_nf.F
    k = M_nf.k
    if info.circular:
        if not check_normal_form(M_nf):
            raise NotNormalized("surface with circular model is not in normal form")
        if M_nf.is_model():
            return SymmetryGroup("Dim3", None,
                                 (Generator("dilation"), Generator("circle"), Generator("mu")),
                                 side_swap)
    elif not (M_nf.is_model() or assume_normal):
        raise NotNormalized("noncircular surfaces are handled only as models or in asserted "
                            "normal coordinates")
    signs = _signs(k, side_swap)
    if all(a == b for (a, b, _) in F.support()):
        return SymmetryGroup("Circle", None, (Generator("circle"),), side_swap)
    n, gen = _rotation_group(F, k, signs)
    if M_nf.is_model():
        kappa = kappa_invariant(info)
        expected = kappa if k % 2 == 0 else 2 * kappa
        if not side_swap and n != expected:
            raise ArithmeticError(f"model rotation order {n} disagrees with kappa formula {expected}")
        return SymmetryGroup("RPlusCrossCyclic", n, (Generator("dilation"), gen), side_swap)
    return SymmetryGroup("Cyclic", n, (gen,), side_swap)


def generator_map(gen: Generator, k: int, W: int) -> HoloMapPair | None:
    """The exact map for a rotation generator when its phase lies in Q(i)."""
    if gen.kind != "rotation":
        return None
    c = gen.phase.to_gaussian()
    if c is None:
        return None
    return HoloMapPair.diagonal(c, GaussianRational(gen.sign), k, W)


def verify_generator(M: Hypersurface, gen: Generator) -> bool:
    """Check that a rotation generator preserves ``M``.

    Gaussian-rational phases go through the full pushforward; other roots of
    unity are checked on the exponents of each term.
    """
    if gen.kind != "rotation":
        return True
    m = generator_map(gen, M.k, M.W)
    if m is not None:
        return is_automorphism(M, m)
    n, t = gen.phase.n, gen.phase.t
    for (a, b, g) in M.F.support():
        flips = gen.sign == -1 and (g - 1) % 2 == 1
        if flips and n % 2:
            return False
        if (t * (a - b)) % n != (n // 2 if flips else 0):
            return False
    return True


def classify(M, *, side_swap: bool = False, assume_normal: bool = False) -> SymmetryGroup:
    """Stability group of a surface given by a series or a validated surface."""
    F = M.F if isinstance(M, Hypersurface) else M
    prepared, _ = prepare(F)
    if prepared.info.circular:
        nf = normalize(prepared).nf
        return diagonal_stabilizer(nf, side_swap=side_swap)
    if prepared.is_model() or assume_normal:
        return diagonal_stabilizer(prepared, side_swap=side_swap, assume_normal=assume_normal)
    raise OutOfScope("normal forms for models with essential type below k/2 are not covered; "
                     "pass assume_normal=True if the coordinates are already normal")
