"""Exact sparse linear algebra over the rationals.

Everything in the cohomology pipeline reduces to ranks, kernels and linear
solves of sparse matrices with rational entries.  All arithmetic here is
exact: rows are scaled to integers once, elimination is fraction-free
(cross-multiplication followed by gcd reduction), and pivots are chosen by a
deterministic rule so that repeated runs produce identical output.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Scalar = int | Fraction


def _as_exact(value) -> Scalar:
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise TypeError(f"exact scalar required, got {type(value).__name__}")
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


def _scalar_str(value: Scalar) -> str:
    return str(Fraction(value))


class SparseMatrix:
    """Sparse exact matrix, entries keyed by ``(row, col)``; zeros are never
    stored.  Supports just enough arithmetic for the cohomology pipeline."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries=None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.nrows = nrows
        self.ncols = ncols
        self.entries: dict[tuple[int, int], Scalar] = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for (r, c), v in items:
                self.add_to(r, c, v)

    # -- construction and access ------------------------------------------

    @staticmethod
    def from_dense(rows: Sequence[Sequence]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        m = SparseMatrix(nrows, ncols)
        for r, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            for c, v in enumerate(row):
                m[r, c] = v
        return m

    def __setitem__(self, key, value):
        r, c = key
        self._check_index(r, c)
        value = _as_exact(value)
        if value:
            self.entries[r, c] = value
        else:
            self.entries.pop((r, c), None)

    def __getitem__(self, key) -> Scalar:
        self._check_index(*key)
        return self.entries.get(key, 0)

    def add_to(self, r: int, c: int, value) -> None:
        self._check_index(r, c)
        value = _as_exact(value)
        if not value:
            return
        cur = self.entries.get((r, c), 0) + value
        if cur:
            self.entries[r, c] = _as_exact(cur)
        else:
            self.entries.pop((r, c), None)

    def _check_index(self, r, c):
        if not (0 <= r < self.nrows and 0 <= c < self.ncols):
            raise IndexError(f"entry ({r}, {c}) outside {self.nrows} x {self.ncols}")

    @property
    def nnz(self) -> int:
        return len(self.entries)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix)
                and self.nrows == other.nrows
                and self.ncols == other.ncols
                and self.entries == other.entries)

    def __repr__(self):
        return f"<SparseMatrix {self.nrows}x{self.ncols}, {self.nnz} nonzero>"

    def copy(self) -> "SparseMatrix":
        m = SparseMatrix(self.nrows, self.ncols)
        m.entries = dict(self.entries)
        return m

    def triples(self) -> list[tuple[int, int, Scalar]]:
        return [(r, c, self.entries[r, c]) for (r, c) in sorted(self.entries)]

    def to_dense(self) -> list[list[Scalar]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> dict[int, dict[int, Scalar]]:
        rows: dict[int, dict[int, Scalar]] = {}
        for (r, c), v in self.entries.items():
            rows.setdefault(r, {})[c] = v
        return rows

    # -- arithmetic ---------------------------------------------------------

    def matvec(self, vec: Sequence) -> tuple:
        if len(vec) != self.ncols:
            raise ValueError("vector length does not match column count")
        acc = [0] * self.nrows
        for (r, c), v in self.entries.items():
            x = vec[c]
            if x:
                acc[r] += v * x
        return tuple(acc)

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("inner dimensions do not match")
        out = SparseMatrix(self.nrows, other.ncols)
        brows = other.row_dicts()
        acc: dict[tuple[int, int], Scalar] = {}
        for (r, c), v in self.entries.items():
            brow = brows.get(c)
            if not brow:
                continue
            for k, w in brow.items():
                acc[r, k] = acc.get((r, k), 0) + v * w
        for key, v in acc.items():
            if v:
                out.entries[key] = _as_exact(v)
        return out

    def scaled_integer_copy(self) -> "SparseMatrix":
        """The matrix multiplied by the lcm of all denominators: same rank,
        same kernel, integer entries (faster to compose and eliminate)."""
        scale = 1
        for v in self.entries.values():
            if isinstance(v, Fraction):
                scale = lcm(scale, v.denominator)
        if scale == 1:
            return self.copy()
        m = SparseMatrix(self.nrows, self.ncols)
        for key, v in self.entries.items():
            m.entries[key] = int(v * scale)
        return m

    def dump_text(self) -> str:
        """Stable text form: header ``nrows ncols nnz`` then one ``r c value``
        line per nonzero, sorted by (row, col)."""
        lines = [f"{self.nrows} {self.ncols} {self.nnz}"]
        for r, c, v in self.triples():
            lines.append(f"{r} {c} {_scalar_str(v)}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Fraction-free elimination


def _normalize_int_row(row: dict[int, int]) -> dict[int, int]:
    """Divide an integer row by the gcd of its entries (in place)."""
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        for c in row:
            row[c] //= g
    return row


def _integer_rows(matrix: SparseMatrix) -> dict[int, dict[int, int]]:
    """Rows of the matrix scaled to integers and gcd-reduced, keyed by the
    original row index."""
    out: dict[int, dict[int, int]] = {}
    for rid, row in matrix.row_dicts().items():
        scale = 1
        for v in row.values():
            if isinstance(v, Fraction):
                scale = lcm(scale, v.denominator)
        int_row = {c: int(v * scale) for c, v in row.items()}
        out[rid] = _normalize_int_row(int_row)
    return out


def _eliminate(rows: dict[int, dict[int, int]], skip_col: int | None = None):
    """Sparse fraction-free Gaussian elimination.

    Pivot rule (deterministic): the eligible column held by the fewest active
    rows, lowest column index on ties; within that column, the shortest row,
    lowest row index on ties.  Rows retired as pivots are frozen, so a pivot
    row never contains an earlier pivot's column — which is exactly what the
    reverse-order back-substitution in :meth:`Echelon.kernel_basis` relies on.

    Returns ``(pivots, leftovers)`` where pivots is a list of
    ``(pivot_col, row_dict)`` in retirement order and leftovers are the
    nonzero rows that could not be pivoted (support inside ``skip_col`` only).
    """
    col_rows: dict[int, set[int]] = {}
    for rid, row in rows.items():
        for c in row:
            if c != skip_col:
                col_rows.setdefault(c, set()).add(rid)

    pivots: list[tuple[int, dict[int, int]]] = []
    while col_rows:
        pivot_col = min(col_rows, key=lambda c: (len(col_rows[c]), c))
        candidates = col_rows[pivot_col]
        pivot_rid = min(candidates, key=lambda r: (len(rows[r]), r))
        piv = rows.pop(pivot_rid)
        for c in piv:
            if c == skip_col:
                continue
            holders = col_rows[c]
            holders.discard(pivot_rid)
            if not holders:
                del col_rows[c]
        pivots.append((pivot_col, piv))

        a = piv[pivot_col]
        for rid in sorted(col_rows.get(pivot_col, ())):
            row = rows[rid]
            b = row[pivot_col]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            new = {c: ma * v for c, v in row.items()}
            for c, pv in piv.items():
                nv = new.get(c, 0) - mb * pv
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            _normalize_int_row(new)
            for c in row:
                if c != skip_col and c != pivot_col and c not in new:
                    holders = col_rows[c]
                    holders.discard(rid)
                    if not holders:
                        del col_rows[c]
            for c in new:
                if c != skip_col and c not in row:
                    col_rows.setdefault(c, set()).add(rid)
            if new:
                rows[rid] = new
            else:
                del rows[rid]
        col_rows.pop(pivot_col, None)

    leftovers = [rows[rid] for rid in sorted(rows)]
    return pivots, leftovers


def _normalize_exact_vec(vec: dict[int, Scalar], ncols: int) -> tuple:
    """Clear denominators, gcd-reduce, make the first nonzero entry positive,
    and expand to a dense tuple of ints."""
    scale = 1
    for v in vec.values():
        if isinstance(v, Fraction):
            scale = lcm(scale, v.denominator)
    ints = {c: int(v * scale) for c, v in vec.items() if v}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    if ints and ints[min(ints)] < 0:
        ints = {c: -v for c, v in ints.items()}
    return tuple(ints.get(c, 0) for c in range(ncols))


class Echelon:
    """Outcome of eliminating a matrix: rank, pivot positions, and the frozen
    pivot rows needed to back-substitute kernel vectors."""

    def __init__(self, matrix: SparseMatrix):
        self.nrows = matrix.nrows
        self.ncols = matrix.ncols
        self._pivots, _ = _eliminate(_integer_rows(matrix))
        self.pivot_cols = tuple(c for c, _ in self._pivots)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def free_cols(self) -> tuple[int, ...]:
        taken = set(self.pivot_cols)
        return tuple(c for c in range(self.ncols) if c not in taken)

    def kernel_basis(self) -> list[tuple]:
        """One normalized integer kernel vector per free column.

        Pivot rows are processed in reverse retirement order; by the pivot
        rule each row contains no earlier pivot columns, so every column it
        touches is already assigned when its own pivot gets solved.
        """
        basis = []
        for free in self.free_cols:
            assign: dict[int, Scalar] = {free: 1}
            for pivot_col, row in reversed(self._pivots):
                s = 0
                for c, v in row.items():
                    if c != pivot_col:
                        x = assign.get(c)
                        if x:
                            s += v * x
                if s:
                    assign[pivot_col] = Fraction(-s, row[pivot_col])
            basis.append(_normalize_exact_vec(assign, self.ncols))
        return basis


def rank(matrix: SparseMatrix) -> int:
    return Echelon(matrix).rank


def kernel_basis(matrix: SparseMatrix, verify: bool = True) -> list[tuple]:
    """Basis of the right kernel {v : Mv = 0}, one vector per free column.

    Every returned vector is checked against the original matrix; a failure
    here would mean the elimination itself is broken, so it is an assert.
    """
    basis = Echelon(matrix).kernel_basis()
    if verify:
        zero = (0,) * matrix.nrows
        for vec in basis:
            assert matrix.matvec(vec) == zero, "kernel vector failed verification"
    return basis


def solve(matrix: SparseMatrix, rhs: Sequence) -> tuple | None:
    """One exact solution of ``M x = rhs``, or None when inconsistent.

    Implemented by eliminating the augmented system ``M x - rhs*t = 0`` with
    the ``t`` column barred from pivoting, then back-substituting at t = 1
    with all free columns set to zero.
    """
    if len(rhs) != matrix.nrows:
        raise ValueError("right-hand side length does not match row count")
    sentinel = matrix.ncols
    augmented = SparseMatrix(matrix.nrows, matrix.ncols + 1, dict(matrix.entries))
    for r, b in enumerate(rhs):
        b = _as_exact(b)
        if b:
            augmented[r, sentinel] = -b
    # scaling to integers happens on whole augmented rows, so the rhs column
    # stays in sync with the matrix coefficients
    rows = _integer_rows(augmented)

    pivots, leftovers = _eliminate(rows, skip_col=sentinel)
    if any(leftovers):
        return None

    assign: dict[int, Scalar] = {sentinel: 1}
    for pivot_col, row in reversed(pivots):
        s = 0
        for c, v in row.items():
            if c != pivot_col:
                x = assign.get(c)
                if x:
                    s += v * x
        assign[pivot_col] = Fraction(-s, row[pivot_col]) if s else 0

    solution = tuple(_as_exact(Fraction(assign.get(c, 0))) for c in range(matrix.ncols))
    assert matrix.matvec(solution) == tuple(rhs), "solve result failed verification"
    return solution


class RowReducer:
    """Incremental membership oracle for a growing subspace.

    Stored rows are kept mutually reduced (each contains its own pivot column
    and no other row's), so testing a vector is a single pass over the pivot
    columns it touches.  Used to pick cohomology representatives that are
    independent modulo the coboundary image, and as a general independence
    filter in tests.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _intify(self, vec) -> dict[int, int]:
        if isinstance(vec, dict):
            items = vec.items()
        else:
            if len(vec) != self.ncols:
                raise ValueError("vector length does not match")
            items = ((c, v) for c, v in enumerate(vec))
        vd: dict[int, Scalar] = {}
        scale = 1
        for c, v in items:
            v = _as_exact(v)
            if v:
                vd[c] = v
                if isinstance(v, Fraction):
                    scale = lcm(scale, v.denominator)
        return _normalize_int_row({c: int(v * scale) for c, v in vd.items()})

    def _reduce(self, row: dict[int, int]) -> dict[int, int]:
        for pivot_col in sorted(set(row) & set(self._rows)):
            if pivot_col not in row:
                continue
            piv = self._rows[pivot_col]
            a, b = piv[pivot_col], row[pivot_col]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            row = {c: ma * v for c, v in row.items()}
            for c, pv in piv.items():
                nv = row.get(c, 0) - mb * pv
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            _normalize_int_row(row)
        return row

    def contains(self, vec) -> bool:
        return not self._reduce(self._intify(vec))

    def add(self, vec) -> bool:
        """Insert ``vec``; returns True when it enlarged the subspace."""
        row = self._reduce(self._intify(vec))
        if not row:
            return False
        pivot_col = min(row)
        # keep the invariant: no stored row may contain the new pivot column
        for other_col in list(self._rows):
            other = self._rows[other_col]
            if pivot_col in other:
                a, b = row[pivot_col], other[pivot_col]
                g = gcd(a, b)
                ma, mb = a // g, b // g
                new = {c: ma * v for c, v in other.items()}
                for c, pv in row.items():
                    nv = new.get(c, 0) - mb * pv
                    if nv:
                        new[c] = nv
                    else:
                        new.pop(c, None)
                self._rows[other_col] = _normalize_int_row(new)
        self._rows[pivot_col] = row
        return True
