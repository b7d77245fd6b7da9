"""Interpretation of diagrams: pure matrices and mixed-state superoperators.

Two semantic levels live here.  A tick-free diagram n -> m denotes a plain
2^m x 2^n matrix over the cyclotomic field (`interp`).  A general diagram,
ticks allowed, denotes a Hermiticity-preserving superoperator on density
operators; it is evaluated by doubling every wire into a (plain, conjugate)
pair (`unzip`) and reading the doubled pure matrix against the interleaved
vectorization (`apply_superop`, `state_operator`).

The same superoperator also has a purely diagrammatic presentation: `hp`
rewrites a diagram n -> m into a pure diagram (n+m) -> (n+m) whose matrix
encodes the superoperator with bra lines bent to the other side; `psi` /
`psi_inv` convert between the doubled form and that bent form.  Both routes
agree exactly, which the test-suite checks entry by entry.

Basis conventions: wire 0 is the most significant bit of a basis index; a
matrix row ranges over output bitstrings, a column over input bitstrings.
The interleaved vectorization sends |x><y| to the basis vector indexed by
the bit sequence x1 y1 x2 y2 ...
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .diagram import (
    Cap,
    Compose,
    Cup,
    Diagram,
    Empty,
    Fswap,
    Generator,
    Id,
    Swap,
    Tensor,
    Tick,
    WSpider,
    ZSpider,
    compose_many,
    conjugate_term,
    dagger,
    has_tick,
    id_n,
    permutation_diagram,
    tensor_many,
)
from .scalar import MINUS_ONE, ONE, ZERO, Scalar, format_scalar, parse_scalar

DEFAULT_TOLERANCE = 1e-9


def tolerance() -> float:
    """Numeric PSD tolerance; the ZWT_TOLERANCE env var overrides the default."""
    raw = os.environ.get("ZWT_TOLERANCE")
    if raw is None:
        return DEFAULT_TOLERANCE
    try:
        return float(raw)
    except ValueError:
        return DEFAULT_TOLERANCE


class SemanticsError(ValueError):
    pass


# -- dense exact matrices (the public interchange type) -------------------


class Matrix:
    """Dense rectangular table of exact scalars."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: list[list[Scalar]]):
        self.rows = len(data)
        self.cols = len(data[0]) if data else 0
        for row in data:
            if len(row) != self.cols:
                raise ValueError("ragged matrix rows")
        self.data = data

    @staticmethod
    def zeros(rows: int, cols: int) -> "Matrix":
        return Matrix([[ZERO] * cols for _ in range(rows)])

    @staticmethod
    def identity(n: int) -> "Matrix":
        m = Matrix.zeros(n, n)
        for i in range(n):
            m.data[i][i] = ONE
        return m

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        return self.data[ij[0]][ij[1]]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):  # pragma: no cover - matrices are not dict keys
        raise TypeError("Matrix is unhashable")

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"matmul mismatch: {self.cols} vs {other.rows}")
        out = Matrix.zeros(self.rows, other.cols)
        for i in range(self.rows):
            row = self.data[i]
            acc = out.data[i]
            for k in range(self.cols):
                v = row[k]
                if v.is_zero():
                    continue
                brow = other.data[k]
                for j in range(other.cols):
                    w = brow[j]
                    if not w.is_zero():
                        acc[j] = acc[j] + v * w
        return out

    def scale(self, c: Scalar) -> "Matrix":
        return Matrix([[c * v for v in row] for row in self.data])

    def add(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ]
        )

    def transpose(self) -> "Matrix":
        return Matrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def conj(self) -> "Matrix":
        return Matrix([[v.conj() for v in row] for row in self.data])

    def dagger(self) -> "Matrix":
        return self.transpose().conj()

    def is_hermitian(self) -> bool:
        if self.rows != self.cols:
            return False
        for i in range(self.rows):
            for j in range(i, self.cols):
                if self.data[i][j] != self.data[j][i].conj():
                    return False
        return True

    def trace(self) -> Scalar:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        t = ZERO
        for i in range(self.rows):
            t = t + self.data[i][i]
        return t

    def to_numpy(self) -> np.ndarray:
        return np.array(
            [[v.to_complex() for v in row] for row in self.data], dtype=complex
        )

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols})"


# -- sparse internal representation --------------------------------------


class SMat:
    """Sparse exact matrix: {(row, col): nonzero scalar}."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: dict):
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @staticmethod
    def identity(n: int) -> "SMat":
        return SMat(n, n, {(i, i): ONE for i in range(n)})

    def matmul(self, other: "SMat") -> "SMat":
        if self.cols != other.rows:
            raise ValueError(f"matmul mismatch: {self.cols} vs {other.rows}")
        by_col: dict[int, list] = {}
        for (i, k), v in self.entries.items():
            by_col.setdefault(k, []).append((i, v))
        acc: dict[tuple[int, int], Scalar] = {}
        for (k, j), w in other.entries.items():
            hits = by_col.get(k)
            if not hits:
                continue
            for i, v in hits:
                key = (i, j)
                prod = v * w
                cur = acc.get(key)
                acc[key] = prod if cur is None else cur + prod
        return SMat(
            self.rows,
            other.cols,
            {k: v for k, v in acc.items() if not v.is_zero()},
        )

    def kron(self, other: "SMat") -> "SMat":
        out: dict[tuple[int, int], Scalar] = {}
        orows, ocols = other.rows, other.cols
        for (i1, j1), v1 in self.entries.items():
            for (i2, j2), v2 in other.entries.items():
                out[(i1 * orows + i2, j1 * ocols + j2)] = v1 * v2
        return SMat(self.rows * orows, self.cols * ocols, out)

    def to_matrix(self) -> Matrix:
        m = Matrix.zeros(self.rows, self.cols)
        for (i, j), v in self.entries.items():
            m.data[i][j] = v
        return m

    @staticmethod
    def from_matrix(m: Matrix) -> "SMat":
        entries = {}
        for i, row in enumerate(m.data):
            for j, v in enumerate(row):
                if not v.is_zero():
                    entries[(i, j)] = v
        return SMat(m.rows, m.cols, entries)


def _gen_smat(g: Diagram) -> SMat:
    if isinstance(g, ZSpider):
        rows, cols = 1 << g.m, 1 << g.n
        entries: dict[tuple[int, int], Scalar] = {}
        entries[(0, 0)] = ONE
        top = (rows - 1, cols - 1)
        entries[top] = entries.get(top, ZERO) + g.r
        return SMat(rows, cols, {k: v for k, v in entries.items() if not v.is_zero()})
    if isinstance(g, WSpider):
        rows, cols = 1 << g.m, 1 << g.n
        entries = {}
        for i in range(g.n):
            entries[(0, 1 << (g.n - 1 - i))] = ONE
        for j in range(g.m):
            key = (1 << (g.m - 1 - j), 0)
            entries[key] = ONE
        return SMat(rows, cols, entries)
    if g is Fswap:
        return SMat(
            4,
            4,
            {(0, 0): ONE, (2, 1): ONE, (1, 2): ONE, (3, 3): MINUS_ONE},
        )
    if g is Id:
        return SMat.identity(2)
    if g is Swap:
        return SMat(4, 4, {(0, 0): ONE, (2, 1): ONE, (1, 2): ONE, (3, 3): ONE})
    if g is Cup:
        return SMat(1, 4, {(0, 0): ONE, (0, 3): ONE})
    if g is Cap:
        return SMat(4, 1, {(0, 0): ONE, (3, 0): ONE})
    if g is Empty:
        return SMat(1, 1, {(0, 0): ONE})
    if g is Tick:
        raise SemanticsError("pure interpretation undefined for ticked diagram")
    raise TypeError(f"not a generator: {g!r}")


_INTERP_CACHE: dict[Diagram, SMat] = {}
_INTERP_CACHE_LIMIT = 20000
_CACHEABLE_SIZE = 64

_PERM_CACHE: dict[Diagram, "list[int] | None"] = {}


def _wire_perm(d: Diagram) -> "list[int] | None":
    """The wire routing of a pure-wiring term (Id/Swap/Empty only), else None.

    Entry i is the output position of input wire i.  Wiring layers appear at
    every composition seam, and applying them as index remaps instead of
    materialized matrices keeps wide diagrams tractable.
    """
    if d is Id:
        return [0]
    if d is Swap:
        return [1, 0]
    if d is Empty:
        return []
    if isinstance(d, Generator):
        return None
    hit = _PERM_CACHE.get(d)
    if hit is not None or d in _PERM_CACHE:
        return hit
    out: "list[int] | None"
    if isinstance(d, Compose):
        pa = _wire_perm(d.after)
        pb = _wire_perm(d.before) if pa is not None else None
        out = None if pa is None or pb is None else [pa[pb[i]] for i in range(len(pb))]
    elif isinstance(d, Tensor):
        pl = _wire_perm(d.left)
        pr = _wire_perm(d.right) if pl is not None else None
        if pl is None or pr is None:
            out = None
        else:
            k = len(pl)
            out = pl + [k + p for p in pr]
    else:
        raise TypeError(f"not a diagram: {d!r}")
    if len(_PERM_CACHE) >= _INTERP_CACHE_LIMIT:
        _PERM_CACHE.clear()
    _PERM_CACHE[d] = out
    return out


def _permute_index(idx: int, perm: list[int], w: int) -> int:
    out = 0
    for i in range(w):
        bit = (idx >> (w - 1 - i)) & 1
        if bit:
            out |= 1 << (w - 1 - perm[i])
    return out


def _perm_rows(m: SMat, perm: list[int]) -> SMat:
    w = len(perm)
    return SMat(
        m.rows,
        m.cols,
        {(_permute_index(r, perm, w), c): v for (r, c), v in m.entries.items()},
    )


def _perm_cols(m: SMat, perm: list[int]) -> SMat:
    # Composing with a routing layer on the input side selects column p(c).
    w = len(perm)
    inv = [0] * w
    for i, p in enumerate(perm):
        inv[p] = i
    return SMat(
        m.rows,
        m.cols,
        {(r, _permute_index(c, inv, w)): v for (r, c), v in m.entries.items()},
    )


def _perm_smat(perm: list[int]) -> SMat:
    w = len(perm)
    dim = 1 << w
    return SMat(dim, dim, {(_permute_index(i, perm, w), i): ONE for i in range(dim)})


def _interp_rec(d: Diagram) -> SMat:
    if isinstance(d, Generator):
        return _gen_smat(d)
    cached = _INTERP_CACHE.get(d)
    if cached is not None:
        return cached
    if isinstance(d, Compose):
        pa = _wire_perm(d.after)
        if pa is not None:
            out = _perm_rows(_interp_rec(d.before), pa)
        else:
            pb = _wire_perm(d.before)
            if pb is not None:
                out = _perm_cols(_interp_rec(d.after), pb)
            else:
                out = _interp_rec(d.after).matmul(_interp_rec(d.before))
    elif isinstance(d, Tensor):
        p = _wire_perm(d)
        if p is not None:
            out = _perm_smat(p)
        else:
            out = _interp_rec(d.left).kron(_interp_rec(d.right))
    else:
        raise TypeError(f"not a diagram: {d!r}")
    # Small subterms (routing layers, identity bundles) recur across calls;
    # large ones are one-shot and only bloat the cache.
    from .diagram import generator_count

    if generator_count(d) <= _CACHEABLE_SIZE and len(out.entries) <= 1 << 14:
        if len(_INTERP_CACHE) >= _INTERP_CACHE_LIMIT:
            _INTERP_CACHE.clear()
        _INTERP_CACHE[d] = out
    return out


def interp_sparse(d: Diagram) -> SMat:
    return _interp_rec(d)


def interp(d: Diagram) -> Matrix:
    """Pure matrix of a tick-free diagram: 2^m rows by 2^n columns."""
    if has_tick(d):
        raise SemanticsError("pure interpretation undefined for ticked diagram")
    return interp_sparse(d).to_matrix()


# -- wire doubling -------------------------------------------------------


def _uninterleave_perm(n: int) -> list[int]:
    """Route interleaved (p1,c1,...,pn,cn) to blocked (p1..pn, c1..cn)."""
    perm = [0] * (2 * n)
    for i in range(n):
        perm[2 * i] = i
        perm[2 * i + 1] = n + i
    return perm


def _interleave_perm(n: int) -> list[int]:
    perm = [0] * (2 * n)
    for i in range(n):
        perm[i] = 2 * i
        perm[n + i] = 2 * i + 1
    return perm


def unzip(d: Diagram) -> Diagram:
    """Double every wire into a (plain, conjugate) pair; ticks become swaps.

    The result is tick-free with arity 2n -> 2m; pair k occupies wires
    2k and 2k+1.  On tick-free diagrams this implements the doubling
    construction, so the doubled matrix is interp(d) (x) conj(interp(d))
    up to the pair interleaving.
    """
    if d is Tick:
        return Swap
    if d is Id:
        return Tensor(Id, Id)
    if d is Empty:
        return Empty
    if isinstance(d, Generator):
        inner = Tensor(d, conjugate_term(d))
        left = permutation_diagram(_interleave_perm(d.n_out))
        right = permutation_diagram(_uninterleave_perm(d.n_in))
        return Compose(left, Compose(inner, right))
    if isinstance(d, Compose):
        return Compose(unzip(d.after), unzip(d.before))
    if isinstance(d, Tensor):
        return Tensor(unzip(d.left), unzip(d.right))
    raise TypeError(f"not a diagram: {d!r}")


def _interleave_index(x: int, y: int, n: int) -> int:
    """Merge two n-bit indices into the 2n-bit index x1 y1 x2 y2 ..."""
    out = 0
    for k in range(n):
        xb = (x >> (n - 1 - k)) & 1
        yb = (y >> (n - 1 - k)) & 1
        out = (out << 2) | (xb << 1) | yb
    return out


def vec2(rho: Matrix) -> SMat:
    """Interleaved vectorization of a square matrix on n qubits."""
    n = _qubits_of(rho)
    entries = {}
    for i, row in enumerate(rho.data):
        for j, v in enumerate(row):
            if not v.is_zero():
                entries[(_interleave_index(i, j, n), 0)] = v
    return SMat(1 << (2 * n), 1, entries)


def unvec2(col: SMat, n: int) -> Matrix:
    out = Matrix.zeros(1 << n, 1 << n)
    rev = {}
    for i in range(1 << n):
        for j in range(1 << n):
            rev[_interleave_index(i, j, n)] = (i, j)
    for (k, _), v in col.entries.items():
        i, j = rev[k]
        out.data[i][j] = v
    return out


def _qubits_of(rho: Matrix) -> int:
    if rho.rows != rho.cols:
        raise SemanticsError(f"state matrix must be square, got {rho.rows}x{rho.cols}")
    n = rho.rows.bit_length() - 1
    if 1 << n != rho.rows:
        raise SemanticsError(f"state dimension {rho.rows} is not a power of two")
    return n


def apply_superop(d: Diagram, rho: Matrix) -> Matrix:
    """Run the superoperator of d on a density-operator-shaped input."""
    n = _qubits_of(rho)
    if n != d.n_in:
        raise SemanticsError(
            f"state has {n} qubits but diagram consumes {d.n_in}"
        )
    doubled = interp_sparse(unzip(d))
    return unvec2(doubled.matmul(vec2(rho)), d.n_out)


def state_operator(d: Diagram) -> Matrix:
    """The Hermitian operator denoted by a 0 -> m diagram."""
    if d.n_in != 0:
        raise SemanticsError(f"state_operator needs a state, got {d.n_in} inputs")
    m = d.n_out
    col = interp_sparse(unzip(d))
    out = Matrix.zeros(1 << m, 1 << m)
    cache: dict[int, tuple[int, int]] = {}
    for (k, _), v in col.entries.items():
        ij = cache.get(k)
        if ij is None:
            x = y = 0
            for b in range(m):
                pair = (k >> (2 * (m - 1 - b))) & 3
                x = (x << 1) | (pair >> 1)
                y = (y << 1) | (pair & 1)
            ij = (x, y)
            cache[k] = ij
        out.data[ij[0]][ij[1]] = v
    return out


# -- Choi matrices -------------------------------------------------------


def bend_inputs(d: Diagram) -> Diagram:
    """Turn d: n -> m into the state (id_n (x) d) applied to n Bell pairs.

    Output wires are (reference copy of the inputs, then d's outputs); the
    state operator of the result is the Choi matrix of d.
    """
    from .diagram import bend_cap

    n = d.n_in
    return Compose(Tensor(id_n(n), d), bend_cap(n))


def choi(d: Diagram) -> Matrix:
    return state_operator(bend_inputs(d))


def proper_choi(d: Diagram) -> Matrix:
    """Choi matrix with the reference side transposed (ticked Bell pairs)."""
    from .diagram import bend_cap

    n = d.n_in
    ticked_ref = Compose(
        Tensor(tensor_many([Tick] * n), id_n(n)) if n else Empty,
        bend_cap(n),
    )
    return state_operator(Compose(Tensor(id_n(n), d), ticked_ref))


def is_hermiticity_preserving(d: Diagram) -> bool:
    """Exact Hermiticity of the Choi matrix."""
    return choi(d).is_hermitian()


# -- positivity ----------------------------------------------------------


def _principal_minors_nonneg(m: Matrix) -> bool:
    idx = list(range(m.rows))
    for size in range(1, m.rows + 1):
        for subset in _subsets(idx, size):
            det = _det_exact([[m.data[i][j] for j in subset] for i in subset])
            if not det.is_real() or det.sign_real() < 0:
                return False
    return True


def _subsets(items: list[int], size: int):
    from itertools import combinations

    return combinations(items, size)


def _det_exact(rows: list[list[Scalar]]) -> Scalar:
    """Determinant by fraction-free-ish Gaussian elimination over the field."""
    n = len(rows)
    a = [row[:] for row in rows]
    det = ONE
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not a[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            return ZERO
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        inv = p.inverse()
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f.is_zero():
                continue
            for c in range(col, n):
                a[r][c] = a[r][c] - f * a[col][c]
    return det


def is_psd(m: Matrix, tol: float | None = None) -> bool | None:
    """Positive semidefiniteness of an exactly Hermitian matrix.

    Small matrices (dimension <= 4) get the exact principal-minor test;
    larger ones fall back to numeric eigenvalues with the given tolerance.
    Returns None when the numeric computation fails to converge.
    """
    if not m.is_hermitian():
        return False
    if m.rows <= 4:
        return _principal_minors_nonneg(m)
    if tol is None:
        tol = tolerance()
    try:
        eigs = np.linalg.eigvalsh(m.to_numpy())
    except np.linalg.LinAlgError:
        return None
    return bool(eigs.min(initial=0.0) >= -tol)


def is_completely_positive(d: Diagram, tol: float | None = None) -> bool | None:
    """CP test via positivity of the Choi matrix; None means indeterminate."""
    c = choi(d)
    if not c.is_hermitian():
        return False
    return is_psd(c, tol)


# -- the bent (Hermitian-preserving) presentation ------------------------


@dataclass(frozen=True)
class LinZW:
    """A superoperator n -> m presented as a pure diagram (n+m) -> (n+m).

    The pure diagram consumes (ket inputs, bra outputs) and produces
    (bra inputs, ket outputs), each side blocked with kets first.
    """

    pure: Diagram
    n: int
    m: int

    def __post_init__(self) -> None:
        if self.pure.n_in != self.n + self.m or self.pure.n_out != self.n + self.m:
            raise SemanticsError(
                f"bent presentation must be ({self.n + self.m})->({self.n + self.m}), "
                f"got {self.pure.n_in}->{self.pure.n_out}"
            )


def iota(l: LinZW) -> Diagram:
    """Forget the bookkeeping: the underlying pure diagram."""
    return l.pure


def _block_swap(n: int, m: int) -> Diagram:
    """Route (x[n], y[m]) to (y[m], x[n])."""
    perm = [m + i for i in range(n)] + list(range(m))
    return permutation_diagram(perm)


def _cap_pairs(n: int) -> Diagram:
    return tensor_many([Cap] * n) if n else Empty


def _cup_pairs(n: int) -> Diagram:
    return tensor_many([Cup] * n) if n else Empty


def hp(d: Diagram) -> LinZW:
    """Bent presentation of the superoperator of d, built by recursion.

    Tick-free generators double into (dagger beside original) across a block
    swap; the tick becomes a cup-then-cap turnaround; composition threads the
    bra line of the later factor back through the earlier one with cap/cup
    feedback; tensoring is a permutation conjugate of the side-by-side term.
    """
    if d is Tick:
        return LinZW(Compose(Cap, Cup), 1, 1)
    if isinstance(d, Generator):
        n, m = d.n_in, d.n_out
        pure = Compose(Tensor(dagger(d), d), _block_swap(n, m))
        return LinZW(pure, n, m)
    if isinstance(d, Compose):
        return _int_compose(hp(d.after), hp(d.before))
    if isinstance(d, Tensor):
        return _int_tensor(hp(d.left), hp(d.right))
    raise TypeError(f"not a diagram: {d!r}")


def _int_compose(a: LinZW, b: LinZW) -> LinZW:
    """Sequential composition in the bent presentation (a after b)."""
    if b.m != a.n:
        raise SemanticsError(f"superop compose mismatch: {b.m} vs {a.n}")
    n, mid, p = b.n, b.m, a.m
    total = n + p

    layers: list[Diagram] = []
    # Wires: (k[n], bo[p]) ++ interleaved cap pairs (u_j, v_j) for the mid cut.
    layers.append(tensor_many([id_n(total), _cap_pairs(mid)]))
    # Reorder to (k[n], u[mid], bo[p], v[mid]).
    perm = [0] * (total + 2 * mid)
    for i in range(n):
        perm[i] = i
    for i in range(p):
        perm[n + i] = n + mid + i
    for j in range(mid):
        perm[total + 2 * j] = n + j
        perm[total + 2 * j + 1] = n + mid + p + j
    layers.append(permutation_diagram(perm))
    # b consumes (k, u); spectators (bo, v).
    layers.append(tensor_many([b.pure, id_n(p + mid)]))
    # Wires are now (bi[n], w[mid], bo[p], v[mid]); a consumes (w, bo).
    layers.append(tensor_many([id_n(n), a.pure, id_n(mid)]))
    # Wires: (bi[n], z[mid], ko[p], v[mid]); cup each z_j with v_j.
    perm2 = [0] * (total + 2 * mid)
    for i in range(n):
        perm2[i] = i
    for j in range(mid):
        perm2[n + j] = total + 2 * j
    for i in range(p):
        perm2[n + mid + i] = n + i
    for j in range(mid):
        perm2[n + mid + p + j] = total + 2 * j + 1
    layers.append(permutation_diagram(perm2))
    layers.append(tensor_many([id_n(total), _cup_pairs(mid)]))
    return LinZW(compose_many(layers), n, p)


def _int_tensor(a: LinZW, b: LinZW) -> LinZW:
    """Side-by-side composition in the bent presentation."""
    n, m, p, q = a.n, a.m, b.n, b.m
    # Inputs (kA[n], kB[p], boA[m], boB[q]) -> (kA, boA, kB, boB).
    perm_in = [0] * (n + p + m + q)
    for i in range(n):
        perm_in[i] = i
    for j in range(p):
        perm_in[n + j] = n + m + j
    for i in range(m):
        perm_in[n + p + i] = n + i
    for j in range(q):
        perm_in[n + p + m + j] = n + m + p + j
    # Outputs (biA[n], koA[m], biB[p], koB[q]) -> (biA, biB, koA, koB).
    perm_out = [0] * (n + p + m + q)
    for i in range(n):
        perm_out[i] = i
    for i in range(m):
        perm_out[n + i] = n + p + i
    for j in range(p):
        perm_out[n + m + j] = n + j
    for j in range(q):
        perm_out[n + m + p + j] = n + p + m + j
    pure = compose_many(
        [
            permutation_diagram(perm_in),
            Tensor(a.pure, b.pure),
            permutation_diagram(perm_out),
        ]
    )
    return LinZW(pure, n + p, m + q)


def psi(f: Diagram, n: int, m: int) -> LinZW:
    """Bend a doubled diagram 2n -> 2m into the bent presentation."""
    if f.n_in != 2 * n or f.n_out != 2 * m:
        raise SemanticsError(
            f"doubled diagram must be ({2 * n})->({2 * m}), got {f.n_in}->{f.n_out}"
        )
    layers: list[Diagram] = []
    # Wires (k[n], bo[m]) ++ cap pairs (alpha_i, beta_i).
    layers.append(tensor_many([id_n(n + m), _cap_pairs(n)]))
    # Reorder to (k1, a1, ..., kn, an, bo[m], beta[n]).
    perm = [0] * (n + m + 2 * n)
    for i in range(n):
        perm[i] = 2 * i
    for j in range(m):
        perm[n + j] = 2 * n + j
    for i in range(n):
        perm[n + m + 2 * i] = 2 * i + 1
        perm[n + m + 2 * i + 1] = 2 * n + m + i
    layers.append(permutation_diagram(perm))
    layers.append(tensor_many([f, id_n(m + n)]))
    # Wires: interleaved (ko_j, co_j) then bo[m], beta[n].
    perm2 = [0] * (2 * m + m + n)
    for j in range(m):
        perm2[2 * j] = n + j
        perm2[2 * j + 1] = n + m + 2 * j
    for j in range(m):
        perm2[2 * m + j] = n + m + 2 * j + 1
    for i in range(n):
        perm2[3 * m + i] = i
    layers.append(permutation_diagram(perm2))
    layers.append(tensor_many([id_n(n + m), _cup_pairs(m)]))
    return LinZW(compose_many(layers), n, m)


def psi_inv(l: LinZW) -> Diagram:
    """Unbend the bent presentation back into a doubled diagram 2n -> 2m."""
    n, m = l.n, l.m
    layers: list[Diagram] = []
    layers.append(permutation_diagram(_uninterleave_perm(n)))
    layers.append(tensor_many([id_n(2 * n), _cap_pairs(m)]))
    # Wires: k[n], b[n], interleaved (bo_j, co_j); route to (k, bo, b, co).
    perm = [0] * (2 * n + 2 * m)
    for i in range(n):
        perm[i] = i
        perm[n + i] = n + m + i
    for j in range(m):
        perm[2 * n + 2 * j] = n + j
        perm[2 * n + 2 * j + 1] = 2 * n + m + j
    layers.append(permutation_diagram(perm))
    layers.append(tensor_many([l.pure, id_n(n + m)]))
    # Wires: bi[n], ko[m], b[n], co[m]; cup bi_i with b_i, emit (ko, co).
    perm2 = [0] * (2 * n + 2 * m)
    for i in range(n):
        perm2[i] = 2 * m + 2 * i
    for j in range(m):
        perm2[n + j] = j
    for i in range(n):
        perm2[n + m + i] = 2 * m + 2 * i + 1
    for j in range(m):
        perm2[n + m + n + j] = m + j
    layers.append(permutation_diagram(perm2))
    layers.append(tensor_many([id_n(2 * m), _cup_pairs(n)]))
    layers.append(permutation_diagram(_interleave_perm(m)))
    return compose_many(layers)


def superop_matrix_of_pure(p: Diagram, n: int, m: int) -> Matrix:
    """Read a bent pure diagram as a superoperator matrix on vectorized states.

    Returns the 4^m x 4^n matrix T with vec2(S(rho)) = T vec2(rho); used to
    compare the bent route against the doubling route entry by entry.
    """
    mat = interp_sparse(p)
    out = {}
    for (r, c), v in mat.entries.items():
        bi, ko = r >> m, r & ((1 << m) - 1)
        kin, bo = c >> m, c & ((1 << m) - 1)
        out[(_interleave_index(ko, bo, m), _interleave_index(kin, bi, n))] = v
    return SMat(1 << (2 * m), 1 << (2 * n), out).to_matrix()


# -- matrix text form ----------------------------------------------------


def format_matrix(m: Matrix, float_mode: bool = False) -> str:
    lines = [f"{m.rows} {m.cols}"]
    for row in m.data:
        if float_mode:
            lines.append(" ".join(_format_complex(v.to_complex()) for v in row))
        else:
            lines.append(" ".join(format_scalar(v) for v in row))
    return "\n".join(lines) + "\n"


def _format_complex(z: complex) -> str:
    re = f"{z.real:.12g}"
    if z.imag >= 0:
        return f"{re}+{z.imag:.12g}i"
    return f"{re}-{-z.imag:.12g}i"


def parse_matrix(text: str) -> Matrix:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise SemanticsError("empty matrix text")
    head = lines[0].split()
    if len(head) != 2 or not all(tok.isdigit() for tok in head):
        raise SemanticsError(f"bad matrix header {lines[0]!r}")
    rows, cols = int(head[0]), int(head[1])
    if len(lines) - 1 != rows:
        raise SemanticsError(f"expected {rows} rows, found {len(lines) - 1}")
    data: list[list[Scalar]] = []
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != cols:
            raise SemanticsError(f"expected {cols} entries in row {ln!r}")
        data.append([parse_scalar(t) for t in toks])
    if not data:
        data = []
    m = Matrix(data) if data else Matrix.zeros(0, cols)
    return m
