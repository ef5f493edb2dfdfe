"""Immutable integer matrices with arbitrary-precision entries.

Only what the group layer needs: products, sums, stacking, and a few
constructors.  Zero-sized shapes (0 x n, n x 0) are legal and carry their
dimensions explicitly, since an empty row list cannot.
"""

from __future__ import annotations

from fractions import Fraction


class IntMatrix:
    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data, rows: int | None = None, cols: int | None = None):
        data = tuple(tuple(int(x) for x in row) for row in data)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError(f"ragged or mis-sized matrix data for shape {rows}x{cols}")
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        self.rows = rows
        self.cols = cols
        self._data = data
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diagonal(cls, entries, rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        entries = list(entries)
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, e in enumerate(entries):
            out[i][i] = e
        return cls(out, rows, cols)

    @classmethod
    def from_columns(cls, columns, rows: int) -> "IntMatrix":
        columns = [list(c) for c in columns]
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    # -- access -----------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def tolist(self):
        return [list(r) for r in self._data]

    def row(self, i):
        return self._data[i]

    def column(self, j):
        return tuple(r[j] for r in self._data)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def __iter__(self):
        return iter(self._data)

    # -- algebra ----------------------------------------------------------
    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.columns()
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self._data],
            self.rows,
            other.cols,
        )

    def apply(self, vec):
        """Matrix times column vector, as a tuple."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self._data)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"cannot add {self.shape} and {other.shape}")
        return IntMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
            self.rows,
            self.cols,
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self._data], self.rows, self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix([[k * a for a in r] for r in self._data], self.rows, self.cols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix([list(c) for c in self.columns()], self.cols, self.rows)

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("hstack row mismatch")
        return IntMatrix([r + s for r, s in zip(self._data, other._data)], self.rows, self.cols + other.cols)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("vstack column mismatch")
        return IntMatrix(self._data + other._data, self.rows + other.rows, self.cols)

    def submatrix(self, rows, cols) -> "IntMatrix":
        rows = list(rows)
        cols = list(cols)
        return IntMatrix([[self._data[i][j] for j in cols] for i in rows], len(rows), len(cols))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self._data for a in r)

    def is_diagonal(self) -> bool:
        return all(a == 0 for i, r in enumerate(self._data) for j, a in enumerate(r) if i != j)

    def det(self) -> int:
        """Exact determinant (Bareiss fraction-free elimination)."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = [list(r) for r in self._data]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def inverse_unimodular(self) -> "IntMatrix":
        """Inverse of a matrix with determinant +-1, exactly."""
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self._data)]
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                raise ValueError("matrix is singular")
            a[c], a[p] = a[p], a[c]
            piv = a[c][c]
            a[c] = [x / piv for x in a[c]]
            for r in range(n):
                if r != c and a[r][c] != 0:
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        out = []
        for r in a:
            row = []
            for x in r[n:]:
                if x.denominator != 1:
                    raise ValueError("matrix is not unimodular")
                row.append(int(x))
            out.append(row)
        return IntMatrix(out, n, n)

    # -- identity ---------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r}, rows={self.rows}, cols={self.cols})"
