"""
Exact Linear Algebra
Dense matrices over GF(p) or Q with rank, kernels, intersections and Kronecker products
"""

import numpy as np

from almost_reps.utils.errors import AlmostRepError, CarrierMismatchError


class Mat:
    """Immutable dense matrix over an exact field"""

    __slots__ = ("data", "field")

    def __init__(self, data, field):
        """
        Initialize matrix

        Args:
            data: 2-D numpy array of canonical scalars of the field
            field: Field the entries live in
        """
        arr = np.array(data, dtype=field.dtype, copy=True)
        if arr.ndim != 2:
            raise AlmostRepError(f"Matrix data must be 2-D, got shape {arr.shape}")
        arr.flags.writeable = False
        self.data = arr
        self.field = field

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, field, rows, shape=None):
        return cls(field.array(rows, shape), field)

    @classmethod
    def from_columns(cls, field, columns, dim):
        """Matrix whose columns are the given vectors of length dim"""
        columns = [list(c) for c in columns]
        arr = field.zeros(dim, len(columns))
        for j, col in enumerate(columns):
            for i, value in enumerate(col):
                arr[i, j] = field.element(value)
        return cls(arr, field)

    @classmethod
    def identity(cls, field, n):
        return cls(field.eye(n), field)

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field.zeros(rows, cols), field)

    # -- shape --------------------------------------------------------------

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    @property
    def entries(self):
        """Row-major tuple of scalars"""
        return tuple(self.data.ravel().tolist())

    def is_square(self):
        return self.rows == self.cols

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if other.field != self.field:
            raise CarrierMismatchError(f"Field mismatch: {self.field.label()} vs {other.field.label()}")
        return None

    def __matmul__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        if self.cols != other.rows:
            raise AlmostRepError(f"Cannot multiply {self.shape} by {other.shape}")
        if self.cols == 0:
            return Mat.zeros(self.field, self.rows, other.cols)
        return Mat(self.field.reduce(self.data @ other.data), self.field)

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        if self.shape != other.shape:
            raise AlmostRepError(f"Cannot add {self.shape} and {other.shape}")
        return Mat(self.field.reduce(self.data + other.data), self.field)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        if self.shape != other.shape:
            raise AlmostRepError(f"Cannot subtract {self.shape} and {other.shape}")
        return Mat(self.field.reduce(self.data - other.data), self.field)

    def __neg__(self):
        return Mat(self.field.reduce(-self.data), self.field)

    def scale(self, c):
        c = self.field.element(c)
        return Mat(self.field.reduce(self.data * c), self.field)

    @property
    def T(self):
        return Mat(self.data.T, self.field)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and bool(np.all(self.data == other.data)))

    __hash__ = None

    def is_zero(self):
        return bool(np.all(self.data == 0))

    def is_identity(self):
        return self.is_square() and self == Mat.identity(self.field, self.rows)

    # -- slicing ------------------------------------------------------------

    def column(self, j):
        return tuple(self.data[:, j].tolist())

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def select_columns(self, indices):
        return Mat(self.data[:, list(indices)].reshape(self.rows, len(indices)), self.field)

    def select_rows(self, indices):
        return Mat(self.data[list(indices), :].reshape(len(indices), self.cols), self.field)

    def to_list(self):
        """Nested lists of JSON-ready scalars"""
        return [[self.field.format(x) for x in row] for row in self.data.tolist()]

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols}, {self.field.label()})"


def hstack(field, mats, rows=None):
    """Concatenate matrices side by side; rows is required when mats is empty"""
    if not mats:
        return Mat.zeros(field, rows or 0, 0)
    return Mat(np.hstack([m.data for m in mats]), field)


def vstack(field, mats, cols=None):
    if not mats:
        return Mat.zeros(field, 0, cols or 0)
    return Mat(np.vstack([m.data for m in mats]), field)


def block_matrix(field, blocks, block_rows, block_cols):
    """
    Assemble a block matrix

    Args:
        field: Field of the entries
        blocks: Grid (list of lists) of Mat or None (zero block)
        block_rows: Row count of every block
        block_cols: Column count of every block

    Returns:
        Mat of shape (len(blocks)*block_rows, len(blocks[0])*block_cols)
    """
    n_r = len(blocks)
    n_c = len(blocks[0]) if blocks else 0
    out = field.zeros(n_r * block_rows, n_c * block_cols)
    for i, row in enumerate(blocks):
        for j, block in enumerate(row):
            if block is None:
                continue
            if block.shape != (block_rows, block_cols):
                raise AlmostRepError(f"Block ({i},{j}) has shape {block.shape}")
            out[i * block_rows:(i + 1) * block_rows, j * block_cols:(j + 1) * block_cols] = block.data
    return Mat(out, field)


def block_diag(field, mats):
    if not mats:
        return Mat.zeros(field, 0, 0)
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = field.zeros(rows, cols)
    r = c = 0
    for m in mats:
        out[r:r + m.rows, c:c + m.cols] = m.data
        r += m.rows
        c += m.cols
    return Mat(out, field)


def rref(m):
    """
    Reduced row echelon form with leftmost-pivot selection

    Args:
        m: Mat

    Returns:
        Tuple (R, pivots): R is the reduced Mat, pivots the tuple of pivot columns
    """
    field = m.field
    a = np.array(m.data, dtype=field.dtype, copy=True)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        candidates = np.nonzero(a[r:, c] != 0)[0]
        if candidates.size == 0:
            continue
        p = r + int(candidates[0])
        if p != r:
            a[[r, p], :] = a[[p, r], :]
        a[r, :] = field.reduce(a[r, :] * field.inv(a[r, c]))
        factors = a[:, c].copy()
        factors[r] = 0
        if np.any(factors != 0):
            a = field.reduce(a - np.multiply.outer(factors, a[r, :]))
        pivots.append(c)
        r += 1
    return Mat(a, field), tuple(pivots)


def rank(m):
    """Exact rank over the field of m"""
    return len(rref(m)[1])


def kernel_basis(m):
    """
    Basis of the null space

    Args:
        m: Mat of shape (r, c)

    Returns:
        Mat of shape (c, c - rank(m)) whose columns span {v : m v = 0}
    """
    field = m.field
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    out = field.zeros(m.cols, len(free))
    for k, f in enumerate(free):
        out[f, k] = field.one()
        for i, p in enumerate(pivots):
            out[p, k] = field.element(-reduced.data[i, f])
    return Mat(out, field)


def column_basis(m):
    """Independent columns of m spanning its column space (pivot columns)"""
    _, pivots = rref(m)
    return m.select_columns(pivots)


def common_kernel(field, mats, dim):
    """Basis of the intersection of the kernels of all mats (each with dim columns)"""
    if not mats:
        return Mat.identity(field, dim)
    return kernel_basis(vstack(field, mats))


def intersect(spaces):
    """
    Intersection of column spans

    Args:
        spaces: Non-empty list of Mat with a common row count

    Returns:
        Mat whose columns form a basis of the intersection
    """
    if not spaces:
        raise AlmostRepError("Cannot intersect an empty list of subspaces: ambient dimension unknown")
    field = spaces[0].field
    dim = spaces[0].rows
    for s in spaces:
        if s.rows != dim:
            raise AlmostRepError(f"Ambient dimensions differ: {s.rows} vs {dim}")
    current = column_basis(spaces[0])
    for other in spaces[1:]:
        if current.cols == 0:
            break
        other = column_basis(other)
        if other.cols == 0:
            return Mat.zeros(field, dim, 0)
        # U x = W y  <=>  [U | -W] (x, y) = 0
        coeffs = kernel_basis(hstack(field, [current, -other]))
        x = coeffs.select_rows(range(current.cols))
        current = column_basis(current @ x)
    return current


def kron(a, b):
    """Kronecker product with dims (a.rows*b.rows) x (a.cols*b.cols)"""
    if a.field != b.field:
        raise CarrierMismatchError("Kronecker product of matrices over different fields")
    field = a.field
    outer = np.multiply.outer(a.data, b.data)
    out = outer.transpose(0, 2, 1, 3).reshape(a.rows * b.rows, a.cols * b.cols)
    return Mat(field.reduce(out), field)


def inverse(m):
    """
    Inverse of a square matrix by row reduction of [m | I]

    Raises:
        AlmostRepError: m is not square or is singular
    """
    if not m.is_square():
        raise AlmostRepError(f"Inverse needs a square matrix, got {m.shape}")
    n = m.rows
    reduced, pivots = rref(hstack(m.field, [m, Mat.identity(m.field, n)]))
    if pivots[:n] != tuple(range(n)):
        raise AlmostRepError("Matrix is singular")
    return reduced.select_columns(range(n, 2 * n))


def fixed_subspace(m):
    """Basis of {v : m v = v}"""
    if not m.is_square():
        raise AlmostRepError(f"Fixed subspace needs a square matrix, got {m.shape}")
    return kernel_basis(m - Mat.identity(m.field, m.rows))


def contains_span(big, small):
    """True when the column span of small lies inside the column span of big"""
    if small.cols == 0:
        return True
    return rank(hstack(big.field, [big, small])) == rank(big)


def span_equal(a, b):
    """Column-span equality by double inclusion"""
    return contains_span(a, b) and contains_span(b, a)
