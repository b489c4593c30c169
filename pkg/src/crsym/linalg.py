"""Exact dense linear algebra over the rationals (small systems only)."""
from __future__ import annotations

from .errors import RankDefect
from .scalars import Q


def solve_square(A: list, b: list, *, context: str = "") -> list:
    """Solve ``A x = b`` exactly; ``A`` must be square and nonsingular.

    Raises :class:`RankDefect` otherwise.
    """
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        cols = len(A[0]) if A else 0
        raise RankDefect(f"{context}: system is {n} x {cols}, not square")
    M = [[Q(x) for x in row] + [Q(bi)] for row, bi in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise RankDefect(f"{context}: singular system (rank < {n})")
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        rowc = [x / p for x in M[col]]
        M[col] = rowc
        for r in range(n):
            if r != col and M[r][col]:
                fct = M[r][col]
                M[r] = [x - fct * y for x, y in zip(M[r], rowc)]
    return [M[r][n] for r in range(n)]


def rank(A: list) -> int:
    M = [[Q(x) for x in row] for row in A]
    if not M:
        return 0
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, rows):
            if M[i][c]:
                f = M[i][c] / M[r][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return r
