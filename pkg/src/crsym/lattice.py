"""Integer kernels and multiplicative consistency checks."""
from __future__ import annotations

from .scalars import Q


def kernel_lattice(rows) -> list:
    """Basis of ``{n in Z^m : sum_i n_i * rows[i] = 0}``.

    Integer row reduction of ``rows`` carried along with an identity block;
    the transformation rows that end up against zero rows span the kernel.
    Each basis vector is returned with a positive leading entry.
    """
    rows = [list(map(int, r)) for r in rows]
    m = len(rows)
    if m == 0:
        return []
    n = len(rows[0])
    aug = [rows[i] + [1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if aug[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(aug[i][c]))
            aug[r], aug[piv] = aug[piv], aug[r]
            clean = True
            for i in range(r + 1, m):
                if aug[i][c]:
                    q = aug[i][c] // aug[r][c]
                    aug[i] = [x - q * y for x, y in zip(aug[i], aug[r])]
                    if aug[i][c]:
                        clean = False
            if clean:
                break
        if any(aug[i][c] for i in range(r, m)):
            r += 1
    basis = []
    for row in aug[r:]:
        v = row[n:]
        lead = next(x for x in v if x)
        basis.append([-x for x in v] if lead < 0 else v)
    return basis


def power_product(values, exponents):
    out = Q(1)
    for v, e in zip(values, exponents):
        if e:
            out *= Q(v) ** e
    return out


def power_refutation(values, exponent_rows):
    """First kernel vector ``n`` with ``prod values_i^n_i != 1``, or ``None``."""
    values = [Q(v) for v in values]
    if any(v <= 0 for v in values):
        raise ValueError("values must be positive rationals")
    for vec in kernel_lattice(exponent_rows):
        if power_product(values, vec) != 1:
            return vec
    return None


def rational_power_consistent(values, exponent_rows) -> bool:
    """Whether ``X^d_i * Y^e_i = values_i`` has a positive real solution.

    ``exponent_rows[i]`` holds the exponents for ``values[i]`` (any number of
    unknowns).  Solvable iff every integer relation among the rows is
    respected by the values.
    """
    return power_refutation(values, exponent_rows) is None
