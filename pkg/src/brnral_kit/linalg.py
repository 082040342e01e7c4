"""Exact integer linear algebra: Smith normal form with transforms, solving
linear congruences, and finitely generated subquotients of Z^n.

Matrices are plain lists of lists of Python ints; vectors are lists of ints.
Nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd

Matrix = list[list[int]]
Vector = list[int]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def transpose(A: Matrix, ncols: int | None = None) -> Matrix:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def matmul(A: Matrix, B: Matrix, inner: int | None = None) -> Matrix:
    if not A:
        return []
    n = len(B[0]) if B else 0
    Bt = transpose(B, n) if B else [[] for _ in range(n)]
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Matrix, x: Vector) -> Vector:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def column(A: Matrix, j: int) -> Vector:
    return [row[j] for row in A]


def hstack(*blocks: Matrix) -> Matrix:
    rows = max((len(b) for b in blocks), default=0)
    return [sum((list(b[i]) for b in blocks), []) for i in range(rows)]


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        if v == 0:
            return 0
        out = out * v // gcd(out, v)
    return out


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == S`` with ``S`` diagonal, ``U``/``V`` unimodular.

    ``diagonal`` holds the nonzero invariant factors d_1 | d_2 | ... in order;
    ``Uinv`` is the inverse of ``U``.
    """

    U: Matrix
    S: Matrix
    V: Matrix
    Uinv: Matrix
    diagonal: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def smith(A: Matrix, ncols: int | None = None, *, track_U: bool = True,
          track_V: bool = True, rhs: Vector | None = None) -> SmithForm:
    """Smith normal form of an integer matrix, tracking the transforms.

    With ``track_U`` off, ``U``/``Uinv`` come back empty; row operations are
    still mirrored onto ``rhs`` (modified in place) so callers can read U @ b.
    """
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    S = [list(map(int, row)) for row in A]
    U = identity(m) if track_U else []
    Uinv = identity(m) if track_U else []
    V = identity(n) if track_V else []

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            S[i], S[j] = S[j], S[i]
            if rhs is not None:
                rhs[i], rhs[j] = rhs[j], rhs[i]
            if track_U:
                U[i], U[j] = U[j], U[i]
                for row in Uinv:
                    row[i], row[j] = row[j], row[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for row in S:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        if q:
            Sd, Ss = S[dst], S[src]
            for k in range(n):
                if Ss[k]:
                    Sd[k] += q * Ss[k]
            if rhs is not None:
                rhs[dst] += q * rhs[src]
            if track_U:
                Ud, Us = U[dst], U[src]
                for k in range(m):
                    if Us[k]:
                        Ud[k] += q * Us[k]
                for row in Uinv:
                    if row[dst]:
                        row[src] -= q * row[dst]

    def add_col(dst: int, src: int, q: int) -> None:
        if q:
            for row in S:
                if row[src]:
                    row[dst] += q * row[src]
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    diag: list[int] = []
    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                Si = S[i]
                for j in range(t, n):
                    v = Si[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // p
                    add_row(i, t, -q)
                    if S[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // p
                    add_col(j, t, -q)
                    if S[t][j]:
                        dirty = True
            if dirty:
                continue
            bad = None
            for i in range(t + 1, m):
                Si = S[i]
                for j in range(t + 1, n):
                    if Si[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if S[t][t] == 0:
            break
        if S[t][t] < 0:
            S[t] = [-v for v in S[t]]
            if rhs is not None:
                rhs[t] = -rhs[t]
            if track_U:
                U[t] = [-v for v in U[t]]
                for row in Uinv:
                    row[t] = -row[t]
        diag.append(S[t][t])
    return SmithForm(U, S, V, Uinv, tuple(diag))


def lattice_kernel(A: Matrix, ncols: int) -> Matrix:
    """Basis (as columns) of {x in Z^ncols : A x = 0}."""
    if not A:
        return identity(ncols)
    sf = smith(A, ncols, track_U=False)
    r = sf.rank
    return [row[r:] for row in sf.V]


def kernel_mod(A: Matrix, modulus: int, ncols: int) -> Matrix:
    """Basis (as columns) of the lattice {x in Z^ncols : A x = 0 mod modulus}."""
    if modulus == 0:
        return lattice_kernel(A, ncols)
    if not A:
        return identity(ncols)
    sf = smith(A, ncols, track_U=False)
    scale = [modulus // gcd(d, modulus) for d in sf.diagonal]
    scale += [1] * (ncols - len(scale))
    return [[v * s for v, s in zip(row, scale)] for row in sf.V]


def lattice_basis(gens: Matrix, dim: int) -> Matrix:
    """Basis (as columns, dim rows) of the lattice spanned by the columns of ``gens``."""
    if not gens or not gens[0]:
        return [[] for _ in range(dim)]
    sf = smith(gens, track_V=False)
    r = sf.rank
    # gens = Uinv S V^-1, so the column span is Uinv[:, :r] * diag
    return [[sf.Uinv[i][j] * sf.diagonal[j] for j in range(r)] for i in range(dim)]


def solve_integer(A: Matrix, b: Vector, ncols: int) -> Vector | None:
    """One integer solution of ``A x = b`` or None."""
    m = len(A)
    if m == 0:
        return [0] * ncols
    c = list(b)
    sf = smith(A, ncols, track_U=False, rhs=c)
    y = [0] * ncols
    for i, d in enumerate(sf.diagonal):
        if c[i] % d:
            return None
        y[i] = c[i] // d
    if any(c[i] for i in range(sf.rank, m)):
        return None
    return matvec(sf.V, y)


def _solve_uniform(A: Matrix, b: Vector, L: int, ncols: int) -> Vector | None:
    # A x = b (mod L), one common modulus
    c = list(b)
    sf = smith(A, ncols, track_U=False, rhs=c)
    y = [0] * ncols
    for i, d in enumerate(sf.diagonal):
        g = gcd(d, L)
        if c[i] % g:
            return None
        Lg = L // g
        y[i] = (c[i] // g) * pow(d // g, -1, Lg) % Lg if Lg > 1 else 0
    if any(c[i] % L for i in range(sf.rank, len(A))):
        return None
    return [v % L for v in matvec(sf.V, y)]


def smith_solve(A: Matrix, b: Vector, moduli: list[int] | int | None = None,
                ncols: int | None = None) -> Vector | None:
    """Solve ``A x == b`` where row ``i`` is read modulo ``moduli[i]``.

    A modulus of 0 means the row is an exact integer equation. Returns one
    solution or None when the system has none. When every modulus is nonzero
    the solution is reduced modulo their lcm.
    """
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if m else 0)
    if moduli is None:
        mods = [0] * m
    elif isinstance(moduli, int):
        mods = [moduli] * m
    else:
        mods = list(moduli)
    if m == 0:
        return [0] * n
    if all(mods):
        L = lcm(*mods)
        A2 = [[(L // mi) * v for v in row] for row, mi in zip(A, mods)]
        b2 = [(L // mi) * v for v, mi in zip(b, mods)]
        return _solve_uniform(A2, b2, L, n)
    nslack = sum(1 for v in mods if v)
    big = []
    s = 0
    for row, mi in zip(A, mods):
        slack = [0] * nslack
        if mi:
            slack[s] = mi
            s += 1
        big.append(list(row) + slack)
    sol = solve_integer(big, list(b), n + nslack)
    return None if sol is None else sol[:n]


class _BasisSolver:
    """Coordinates with respect to a full-column-rank lattice basis."""

    def __init__(self, K: Matrix, k: int):
        self.k = k
        self.sf = smith(K, k) if K and k else None

    def __call__(self, x: Vector) -> Vector | None:
        if self.sf is None:
            return [] if not any(x) else None
        sf = self.sf
        c = matvec(sf.U, x)
        y = [0] * self.k
        for i, d in enumerate(sf.diagonal):
            if c[i] % d:
                return None
            y[i] = c[i] // d
        if any(c[i] for i in range(sf.rank, len(c))):
            return None
        return matvec(sf.V, y)


@dataclass(frozen=True, eq=False)
class Subquotient:
    """A finitely generated abelian group K / L with L a sublattice of K ⊆ Z^n.

    ``invariants`` lists the cyclic factors (0 marks a free factor); the
    matching ``gens`` are ambient vectors in K. ``coords`` maps an ambient
    vector of K to its coordinates, reduced modulo the invariants.
    """

    dim: int
    invariants: tuple[int, ...]
    gens: tuple[tuple[int, ...], ...]
    _solver: _BasisSolver
    _to_factor: Matrix

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariants:
            if d == 0:
                return 0
            out *= d
        return out

    @property
    def is_finite(self) -> bool:
        return all(self.invariants)

    def coords(self, x: Vector) -> tuple[int, ...] | None:
        """Factor coordinates of ``x``, or None if ``x`` is not in K."""
        c = self._solver(list(x))
        if c is None:
            return None
        out = []
        for row, d in zip(self._to_factor, self.invariants):
            v = sum(a * b for a, b in zip(row, c))
            out.append(v % d if d else v)
        return tuple(out)

    def element(self, coeffs) -> Vector:
        vec = [0] * self.dim
        for c, g in zip(coeffs, self.gens):
            if c:
                for i, gi in enumerate(g):
                    vec[i] += c * gi
        return vec

    def elements(self):
        """All coefficient tuples of a finite group, in lexicographic order."""
        if not self.is_finite:
            raise ValueError("group is infinite")
        return product(*[range(d) for d in self.invariants])


def subquotient(basis_gens: Matrix, sub_gens: Matrix, dim: int) -> Subquotient:
    """K / L from generating columns of K and of L (L must lie in K)."""
    K = lattice_basis(basis_gens, dim)
    k = len(K[0]) if K and K[0] else 0
    solver = _BasisSolver(K, k)
    if k == 0:
        return Subquotient(dim, (), (), solver, [])
    nsub = len(sub_gens[0]) if sub_gens and sub_gens[0] else 0
    C = zeros(k, nsub)
    for j in range(nsub):
        c = solver(column(sub_gens, j))
        if c is None:
            raise ValueError("sublattice generator not contained in the lattice")
        for i in range(k):
            C[i][j] = c[i]
    if nsub:
        sf = smith(C, track_V=False)
        U, Uinv = sf.U, sf.Uinv
        diag = list(sf.diagonal) + [0] * (k - sf.rank)
    else:
        U, Uinv = identity(k), identity(k)
        diag = [0] * k
    keep = [i for i, d in enumerate(diag) if d != 1]
    gens = []
    for i in keep:
        coeff = [Uinv[r][i] for r in range(k)]
        gens.append(tuple(matvec(K, coeff)))
    return Subquotient(
        dim=dim,
        invariants=tuple(diag[i] for i in keep),
        gens=tuple(gens),
        _solver=solver,
        _to_factor=[U[i] for i in keep],
    )


def invariant_factors(orders) -> tuple[int, ...]:
    """Invariant factors (ascending, 1s dropped, 0 for Z) of ⊕ Z/orders[i]."""
    orders = list(orders)
    if not orders:
        return ()
    n = len(orders)
    D = [[orders[i] if i == j else 0 for j in range(n)] for i in range(n)]
    sf = smith(D, n)
    diag = list(sf.diagonal) + [0] * (n - sf.rank)
    return tuple(d for d in diag if d != 1)
