"""Exact linear algebra over Z, Q, and F_p.

Matrices are immutable, entries are Python ints (Z, F_p residues) or
Fractions (Q), and act on column vectors: the matrix of a composite g . f
is matrix(g) * matrix(f).  Smith normal form drives all lattice
computations; pivots are chosen with least absolute value, ties broken by
position, so every output is deterministic.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotAComplex, RingMismatch


class Ring:
    INTEGERS = "Z"
    RATIONALS = "Q"

    def __init__(self, kind, p=None):
        if kind == "Fp":
            if p is None or p < 2 or not _is_prime(p):
                raise ValueError(f"{p} is not prime")
        self.kind = kind
        self.p = p

    def __eq__(self, other):
        return (isinstance(other, Ring) and self.kind == other.kind
                and self.p == other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return f"F{self.p}" if self.kind == "Fp" else self.kind

    @property
    def is_field(self):
        return self.kind != Ring.INTEGERS

    def coerce(self, x):
        if self.kind == Ring.INTEGERS:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return int(x)
            return int(x)
        if self.kind == Ring.RATIONALS:
            return Fraction(x)
        return int(x) % self.p

    def zero(self):
        return Fraction(0) if self.kind == Ring.RATIONALS else 0

    def one(self):
        return Fraction(1) if self.kind == Ring.RATIONALS else 1

    def invert(self, x):
        if self.kind == Ring.RATIONALS:
            return Fraction(1) / x
        if self.kind == "Fp":
            return pow(x, self.p - 2, self.p)
        if x in (1, -1):
            return x
        raise ValueError(f"{x} is not invertible over Z")


ZZ = Ring(Ring.INTEGERS)
QQ = Ring(Ring.RATIONALS)


def GF(p):
    return Ring("Fp", p)


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Matrix:
    """Immutable matrix over a Ring."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring, entries, rows=None, cols=None):
        self.ring = ring
        ent = tuple(tuple(ring.coerce(x) for x in row) for row in entries)
        if rows is None:
            rows = len(ent)
        if cols is None:
            cols = len(ent[0]) if ent else 0
        if len(ent) != rows or any(len(r) != cols for r in ent):
            raise ValueError("ragged matrix data")
        self.rows = rows
        self.cols = cols
        self.entries = ent

    @classmethod
    def zeros(cls, ring, rows, cols):
        z = ring.zero()
        return cls(ring, [[z] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero(), ring.one()
        return cls(ring, [[o if i == j else z for j in range(n)]
                          for i in range(n)], n, n)

    @classmethod
    def column(cls, ring, vec):
        return cls(ring, [[x] for x in vec], len(vec), 1)

    @classmethod
    def from_columns(cls, ring, cols, rows=None):
        if rows is None:
            rows = len(cols[0]) if cols else 0
        return cls(ring, [[c[i] for c in cols] for i in range(rows)],
                   rows, len(cols))

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.ring == other.ring
                and self.entries == other.entries
                and (self.rows, self.cols) == (other.rows, other.cols))

    def __hash__(self):
        return hash((self.ring, self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({self.ring}, {self.rows}x{self.cols})"

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def row(self, i):
        return self.entries[i]

    def col(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def columns(self):
        return [self.col(j) for j in range(self.cols)]

    def tolist(self):
        return [list(r) for r in self.entries]

    def __add__(self, other):
        self._compat(other)
        return Matrix(self.ring,
                      [[a + b for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.entries, other.entries)],
                      self.rows, self.cols)

    def __sub__(self, other):
        self._compat(other)
        return Matrix(self.ring,
                      [[a - b for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.entries, other.entries)],
                      self.rows, self.cols)

    def __neg__(self):
        return Matrix(self.ring, [[-a for a in r] for r in self.entries],
                      self.rows, self.cols)

    def scale(self, c):
        c = self.ring.coerce(c)
        return Matrix(self.ring, [[c * a for a in r] for r in self.entries],
                      self.rows, self.cols)

    def __mul__(self, other):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ocols = list(zip(*other.entries)) if other.entries else []
        data = []
        for r in self.entries:
            row = []
            for c in ocols:
                row.append(sum(a * b for a, b in zip(r, c)))
            data.append(row)
        if self.ring.kind == "Fp":
            p = self.ring.p
            data = [[x % p for x in row] for row in data]
        return Matrix(self.ring, data, self.rows, other.cols)

    def transpose(self):
        return Matrix(self.ring, list(zip(*self.entries)) if self.entries
                      else [], self.cols, self.rows)

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        return Matrix(self.ring,
                      [list(a) + list(b)
                       for a, b in zip(self.entries, other.entries)],
                      self.rows, self.cols + other.cols)

    def vstack(self, other):
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return Matrix(self.ring, list(self.entries) + list(other.entries),
                      self.rows + other.rows, self.cols)

    def is_zero(self):
        z = self.ring.zero()
        return all(x == z for r in self.entries for x in r)

    def submatrix(self, rows, cols):
        return Matrix(self.ring,
                      [[self.entries[i][j] for j in cols] for i in rows],
                      len(list(rows)), len(list(cols)))

    def convert(self, ring):
        """Entrywise change of ring (Z -> Q, Z -> F_p)."""
        return Matrix(ring, [[ring.coerce(x) for x in r]
                             for r in self.entries], self.rows, self.cols)

    def _compat(self, other):
        if self.ring != other.ring or (self.rows, self.cols) != \
                (other.rows, other.cols):
            raise ValueError("incompatible matrices")


def block_diag(ring, blocks):
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[ring.zero()] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[r0 + i][c0 + j] = b.entries[i][j]
        r0 += b.rows
        c0 += b.cols
    return Matrix(ring, out, rows, cols)


# -- Smith normal form -------------------------------------------------------

def smith_normal_form(A):
    """(S, U, V) with U*A*V = S diagonal, divisibility chain, U,V unimodular.

    Only defined over Z.  Pivot selection: least |value|, ties by (row, col).
    """
    if A.ring != ZZ:
        raise RingMismatch("Smith normal form requires an integer matrix")
    n, m = A.rows, A.cols
    a = [list(r) for r in A.entries]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    V = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def addmul_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(n, m):
        # locate pivot: least nonzero |entry| in the remaining block
        piv = None
        for i in range(t, n):
            for j in range(t, m):
                x = a[i][j]
                if x != 0 and (piv is None or abs(x) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        while True:
            i, j = piv
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            if a[t][t] < 0:
                negate_row(t)
            done = True
            for i in range(t + 1, n):
                q = a[i][t] // a[t][t]
                if q:
                    addmul_row(i, t, -q)
                if a[i][t]:
                    done = False
            for j in range(t + 1, m):
                q = a[t][j] // a[t][t]
                if q:
                    addmul_col(j, t, -q)
                if a[t][j]:
                    done = False
            if done:
                # pivot must divide the rest of the block
                bad = None
                d = a[t][t]
                for i in range(t + 1, n):
                    for j in range(t + 1, m):
                        if a[i][j] % d:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                addmul_row(t, bad, 1)
            piv = None
            for i in range(t, n):
                for j in range(t, m):
                    x = a[i][j]
                    if x != 0 and (piv is None
                                   or abs(x) < abs(a[piv[0]][piv[1]])):
                        piv = (i, j)
        t += 1
    return (Matrix(ZZ, a, n, m), Matrix(ZZ, U, n, n), Matrix(ZZ, V, m, m))


def det_sign_unimodular(M):
    """Determinant of an integer matrix, intended for unimodular checks."""
    a = [list(r) for r in M.entries]
    n = M.rows
    det = Fraction(1)
    a = [[Fraction(x) for x in row] for row in a]
    for t in range(n):
        piv = next((i for i in range(t, n) if a[i][t] != 0), None)
        if piv is None:
            return 0
        if piv != t:
            a[t], a[piv] = a[piv], a[t]
            det = -det
        det *= a[t][t]
        inv = Fraction(1) / a[t][t]
        for i in range(t + 1, n):
            c = a[i][t] * inv
            if c:
                a[i] = [x - c * y for x, y in zip(a[i], a[t])]
    return int(det) if det.denominator == 1 else det


# -- elimination over fields -------------------------------------------------

def _rref(A):
    """Reduced row echelon form; returns (matrix rows, pivot columns)."""
    ring = A.ring
    a = [list(r) for r in A.entries]
    pivots = []
    r = 0
    for c in range(A.cols):
        piv = next((i for i in range(r, A.rows) if a[i][c] != ring.zero()),
                   None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = ring.invert(a[r][c])
        a[r] = [ring.coerce(x * inv) for x in a[r]]
        for i in range(A.rows):
            if i != r and a[i][c] != ring.zero():
                f = a[i][c]
                a[i] = [ring.coerce(x - f * y) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == A.rows:
            break
    return a, pivots


def rank(A):
    if A.ring.is_field:
        return len(_rref(A)[1])
    S, _, _ = smith_normal_form(A)
    return sum(1 for i in range(min(S.rows, S.cols)) if S[i, i] != 0)


def kernel_basis(A):
    """Columns form a basis of ker(A): the full kernel lattice over Z, the
    kernel space over a field."""
    ring = A.ring
    if ring.is_field:
        a, pivots = _rref(A)
        free = [c for c in range(A.cols) if c not in pivots]
        cols = []
        for fc in free:
            v = [ring.zero()] * A.cols
            v[fc] = ring.one()
            for r, pc in enumerate(pivots):
                v[pc] = ring.coerce(-a[r][fc])
            cols.append(v)
        return Matrix.from_columns(ring, cols, rows=A.cols)
    S, _, V = smith_normal_form(A)
    r = sum(1 for i in range(min(S.rows, S.cols)) if S[i, i] != 0)
    cols = [V.col(j) for j in range(r, A.cols)]
    return Matrix.from_columns(ZZ, cols, rows=A.cols)


def solve(A, b):
    """Some x with A x = b (column), or None.  Exact over every ring."""
    if isinstance(b, (list, tuple)):
        b = Matrix.column(A.ring, b)
    ring = A.ring
    if ring.is_field:
        aug = A.hstack(b)
        a, pivots = _rref(aug)
        # inconsistent if a pivot falls in the b-columns
        nb = b.cols
        for r in range(len(pivots)):
            if pivots[r] >= A.cols:
                return None
        sol_cols = []
        for k in range(nb):
            x = [ring.zero()] * A.cols
            ok = True
            for r, pc in enumerate(pivots):
                if pc < A.cols:
                    x[pc] = a[r][A.cols + k]
            # rows beyond pivots must be zero on the rhs
            for r in range(len(pivots), A.rows):
                if a[r][A.cols + k] != ring.zero():
                    ok = False
                    break
            if not ok:
                return None
            sol_cols.append(x)
        return Matrix.from_columns(ring, sol_cols, rows=A.cols)
    S, U, V = smith_normal_form(A)
    Ub = U * b
    r = min(S.rows, S.cols)
    sol_cols = []
    for k in range(b.cols):
        y = [0] * A.cols
        for i in range(S.rows):
            d = S[i, i] if i < r else 0
            rhs = Ub[i, k]
            if d == 0:
                if rhs != 0:
                    return None
            else:
                if rhs % d:
                    return None
                if i < A.cols:
                    y[i] = rhs // d
        sol_cols.append(y)
    Y = Matrix.from_columns(ZZ, sol_cols, rows=A.cols)
    return V * Y


def solve_matrix(A, B):
    """Some X with A X = B, or None."""
    return solve(A, B)


def column_basis(A):
    """A basis (as a matrix of columns) of the column lattice / column space
    spanned by the columns of A."""
    ring = A.ring
    if ring.is_field:
        a, pivots = _rref(A.transpose())
        cols = [tuple(a[r]) for r in range(len(pivots))]
        return Matrix.from_columns(ring, cols, rows=A.rows)
    S, _, V = smith_normal_form(A)
    r = sum(1 for i in range(min(S.rows, S.cols)) if S[i, i] != 0)
    # V is unimodular, so A*V spans the same column lattice as A, and its
    # first r columns (U^-1 * S truncated) are independent
    AV = A * V
    cols = [AV.col(j) for j in range(r)]
    return Matrix.from_columns(ring, cols, rows=A.rows)


# -- abelian invariants and homology ----------------------------------------

class AbelianInvariants:
    """Isomorphism type of a finitely generated module: R^free + torsion."""

    def __init__(self, ring, free_rank, torsion=()):
        self.ring = ring
        self.free_rank = free_rank
        self.torsion = tuple(int(t) for t in torsion if t not in (1,))
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("torsion must form a divisibility chain")

    @property
    def dimension(self):
        return self.free_rank

    def is_zero(self):
        return self.free_rank == 0 and not self.torsion

    def __eq__(self, other):
        return (isinstance(other, AbelianInvariants)
                and self.ring == other.ring
                and self.free_rank == other.free_rank
                and self.torsion == other.torsion)

    def __hash__(self):
        return hash((self.ring, self.free_rank, self.torsion))

    def __repr__(self):
        return f"AbelianInvariants({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        name = str(self.ring)
        parts = []
        if self.free_rank == 1:
            parts.append(name)
        elif self.free_rank > 1:
            parts.append(f"{name}^{self.free_rank}")
        parts.extend(f"{name}/{t}" for t in self.torsion)
        return " + ".join(parts)


def invariants_of_quotient(L, D):
    """Invariants of span(L)/span(D) where D's columns lie in the lattice
    (or space) spanned by the columns of the basis matrix L."""
    ring = L.ring
    k = L.cols
    if k == 0:
        return AbelianInvariants(ring, 0)
    if D.cols == 0:
        return AbelianInvariants(ring, k)
    X = solve(L, D)
    if X is None:
        raise ValueError("denominator does not lie in the numerator span")
    if ring.is_field:
        return AbelianInvariants(ring, k - rank(X))
    S, _, _ = smith_normal_form(X)
    diag = [S[i, i] for i in range(min(S.rows, S.cols)) if S[i, i] != 0]
    free = k - len(diag)
    torsion = [d for d in diag if d > 1]
    return AbelianInvariants(ring, free, torsion)


def homology_of_pair(d_out, d_in):
    """Invariants of ker(d_out)/im(d_in) for matrices with d_out*d_in = 0."""
    if not (d_out * d_in).is_zero():
        raise NotAComplex("differentials do not compose to zero")
    K = kernel_basis(d_out)
    return invariants_of_quotient(K, d_in)


class ChainComplex:
    """A complex of free modules: differentials[n]: C_n -> C_{n-1}.

    ``ranks`` lists the rank of C_n for n = 0..top; differentials[n] is the
    matrix of d_n for n = 1..top (d_0 is implicitly zero unless an
    augmentation is supplied).
    """

    def __init__(self, ring, ranks, differentials):
        self.ring = ring
        self.ranks = list(ranks)
        self.diffs = {}
        for n, d in differentials.items():
            if d.ring != ring:
                raise RingMismatch("differential over the wrong ring")
            if d.rows != self.ranks[n - 1] or d.cols != self.ranks[n]:
                raise ValueError(f"differential {n} has the wrong shape")
            self.diffs[n] = d
        for n in self.diffs:
            if n + 1 in self.diffs:
                if not (self.diffs[n] * self.diffs[n + 1]).is_zero():
                    raise NotAComplex(f"d_{n} . d_{n + 1} != 0")

    def differential(self, n):
        if n in self.diffs:
            return self.diffs[n]
        rows = self.ranks[n - 1] if 1 <= n <= len(self.ranks) else 0
        cols = self.ranks[n] if 0 <= n < len(self.ranks) else 0
        return Matrix.zeros(self.ring, rows, cols)

    def homology_at(self, n):
        return homology_of_pair(self.differential(n),
                                self.differential(n + 1))
