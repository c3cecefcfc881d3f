"""Exact linear algebra over the integers mod 10.

Z10 is not a field, so systems are solved through their prime components:
eliminate mod 2 and mod 5 independently, then recombine residues with the
Chinese remainder theorem.  A solution description carries a particular
solution and a null-space basis for each prime part, so the full solution
set (of size 2^d2 * 5^d5 when consistent) can be counted or enumerated
exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence


def crt_combine(r2: int, r5: int) -> int:
    """The unique digit congruent to r2 mod 2 and r5 mod 5."""
    return (5 * r2 + 6 * r5) % 10


@dataclass(frozen=True)
class PrimeSolution:
    """Row-reduced outcome of one prime-field elimination."""

    modulus: int
    consistent: bool
    particular: tuple[int, ...]
    null_basis: tuple[tuple[int, ...], ...]

    def enumerate(self) -> Iterator[tuple[int, ...]]:
        if not self.consistent:
            return
        p, n = self.modulus, len(self.particular)
        for coeffs in itertools.product(range(p), repeat=len(self.null_basis)):
            vec = list(self.particular)
            for c, basis in zip(coeffs, self.null_basis):
                if c:
                    for i in range(n):
                        vec[i] = (vec[i] + c * basis[i]) % p
            yield tuple(vec)


def solve_prime(rows: Sequence[Sequence[int]], rhs: Sequence[int], n_vars: int, p: int) -> PrimeSolution:
    """Gaussian elimination over GF(p) for a (possibly rectangular) system."""
    a = [[rows[i][j] % p for j in range(n_vars)] + [rhs[i] % p] for i in range(len(rows))]
    pivots: list[tuple[int, int]] = []  # (row, col)
    row = 0
    for col in range(n_vars):
        pivot = next((r for r in range(row, len(a)) if a[r][col]), None)
        if pivot is None:
            continue
        a[row], a[pivot] = a[pivot], a[row]
        inv = pow(a[row][col], -1, p)
        a[row] = [(v * inv) % p for v in a[row]]
        for r in range(len(a)):
            if r != row and a[r][col]:
                factor = a[r][col]
                a[r] = [(v - factor * w) % p for v, w in zip(a[r], a[row])]
        pivots.append((row, col))
        row += 1
        if row == len(a):
            break
    consistent = all(any(r[:-1]) or not r[-1] for r in a)
    if not consistent:
        return PrimeSolution(p, False, (), ())
    particular = [0] * n_vars
    pivot_cols = {col for _, col in pivots}
    for r, col in pivots:
        particular[col] = a[r][-1]
    basis = []
    for free in range(n_vars):
        if free in pivot_cols:
            continue
        vec = [0] * n_vars
        vec[free] = 1
        for r, col in pivots:
            vec[col] = (-a[r][free]) % p
        basis.append(tuple(vec))
    return PrimeSolution(p, True, tuple(particular), tuple(basis))


@dataclass
class LinearSystemMod10:
    """Equations sum_j coeffs[j] * x_j = rhs (mod 10)."""

    n_vars: int
    rows: list[tuple[int, ...]]
    rhs: list[int]

    def __init__(self, n_vars: int):
        self.n_vars = n_vars
        self.rows = []
        self.rhs = []

    def add_equation(self, coeffs: Sequence[int], rhs: int) -> None:
        if len(coeffs) != self.n_vars:
            raise ValueError(f"expected {self.n_vars} coefficients")
        self.rows.append(tuple(c % 10 for c in coeffs))
        self.rhs.append(rhs % 10)

    def solve(self) -> "Mod10Solutions":
        part2 = solve_prime(self.rows, self.rhs, self.n_vars, 2)
        part5 = solve_prime(self.rows, self.rhs, self.n_vars, 5)
        return Mod10Solutions(self.n_vars, part2, part5)


@dataclass(frozen=True)
class Mod10Solutions:
    """Exact solution set of a mod-10 system, in CRT-split form."""

    n_vars: int
    mod2: PrimeSolution
    mod5: PrimeSolution

    @property
    def consistent(self) -> bool:
        return self.mod2.consistent and self.mod5.consistent

    @property
    def count(self) -> int:
        if not self.consistent:
            return 0
        return (2 ** len(self.mod2.null_basis)) * (5 ** len(self.mod5.null_basis))

    def enumerate(self, limit: int | None = None) -> Iterator[tuple[int, ...]]:
        """All solutions mod 10, deterministic order."""
        if not self.consistent:
            return
        emitted = 0
        for v5 in self.mod5.enumerate():
            for v2 in self.mod2.enumerate():
                yield tuple(crt_combine(a2, a5) for a2, a5 in zip(v2, v5))
                emitted += 1
                if limit is not None and emitted >= limit:
                    return

    def solution_set(self, limit: int | None = None) -> set[tuple[int, ...]]:
        return set(self.enumerate(limit))


def solve_mod10(equations: Sequence[tuple[Sequence[int], int]], n_vars: int) -> Mod10Solutions:
    """Convenience wrapper: solve [(coeffs, rhs), ...] over ``n_vars``
    unknowns mod 10."""
    system = LinearSystemMod10(n_vars)
    for coeffs, rhs in equations:
        system.add_equation(coeffs, rhs)
    return system.solve()
