"""
Almost Representations
Unital linear maps L -> End(V) with an exact multiplicative core, built from Følner subspaces
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from almost_reps.algebra.folner import product_space
from almost_reps.linalg.exactlin import (
    Mat, block_diag, block_matrix, common_kernel, contains_span, intersect, kernel_basis, kron, rank,
)
from almost_reps.linalg.field import format_ratio, make_field
from almost_reps.utils.errors import AlmostRepError, CarrierMismatchError, SpecError


@dataclass(frozen=True)
class TableEntry:
    """basis[left] * basis[right] = sum coeffs[k] * basis[k]"""

    left: int
    right: int
    coeffs: tuple

    def is_zero_product(self):
        return all(c == 0 for c in self.coeffs)


@dataclass
class MultTable:
    """Ordered basis pairs of L whose product lies in L"""

    entries: list = dc_field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def pairs(self):
        return [(e.left, e.right) for e in self.entries]


def mult_table(L):
    """
    Multiplication table of an echelonized subspace

    Args:
        L: FinSubspace containing 1

    Returns:
        MultTable listing every pair (i, j) with basis_i * basis_j in L
    """
    carrier = L.carrier
    entries = []
    for i, a in enumerate(L.basis):
        for j, b in enumerate(L.basis):
            product = carrier.mul(a, b)
            if L.contains(product):
                entries.append(TableEntry(i, j, tuple(L.projection_coordinates(product))))
    return MultTable(entries)


@dataclass
class FolnerRepBuild:
    """
    Intermediate data of the Følner construction.

    projection maps ambient coordinates onto Q coordinates along the span of the
    non-leading words; inclusion embeds Q coordinates into ambient coordinates.
    """

    Q: object
    ambient: object
    projection: Mat
    inclusion: Mat
    operators: list
    residuals: list


class AlmostRep:
    """Linear map psi from the span of labelled basis elements into End(V), with its core"""

    def __init__(self, field, labels, unit, images, core, table, L=None, build=None):
        """
        Initialize almost representation

        Args:
            field: Field of all matrices
            labels: Literal per basis element of L
            unit: Coordinates of 1 in the basis of L
            images: One square Mat per basis element
            core: Mat whose independent columns span the multiplicative core
            table: MultTable of certified basis products
            L: Optional FinSubspace the basis belongs to
            build: Optional FolnerRepBuild
        """
        self.field = field
        self.labels = list(labels)
        self.unit = tuple(field.element(c) for c in unit)
        self.images = list(images)
        self.core = core
        self.table = table
        self.L = L
        self.build = build
        if len(self.images) != len(self.labels) or len(self.unit) != len(self.labels):
            raise AlmostRepError("Labels, unit coordinates and images disagree in length")

    @property
    def v_dim(self):
        return self.core.rows

    @property
    def core_dim(self):
        return self.core.cols

    @property
    def l_dim(self):
        return len(self.labels)

    @property
    def defect(self):
        if self.v_dim == 0:
            return Fraction(0)
        return Fraction(self.v_dim - self.core_dim, self.v_dim)

    def image(self, coords):
        """psi of the element with the given coordinates in the basis of L"""
        out = Mat.zeros(self.field, self.v_dim, self.v_dim)
        for c, m in zip(coords, self.images):
            if c != 0:
                out = out + m.scale(c)
        return out

    def image_of(self, element):
        """psi of an AlgebraElement of L"""
        if self.L is None:
            raise AlmostRepError("This almost representation is not attached to a carrier subspace")
        return self.image(self.L.coordinates(element))

    def to_dict(self):
        fmt = self.field.format
        return {
            "field": self.field.descriptor(),
            "labels": self.labels,
            "unit": [fmt(c) for c in self.unit],
            "v_dim": self.v_dim,
            "images": [m.to_list() for m in self.images],
            "core": [[fmt(x) for x in col] for col in self.core.columns()],
            "core_dim": self.core_dim,
            "table": [[e.left, e.right, [fmt(c) for c in e.coeffs]] for e in self.table],
            "defect": format_ratio(self.defect),
        }

    @classmethod
    def from_dict(cls, data):
        """Rebuild from to_dict output (without carrier attachment)"""
        try:
            field = make_field(data["field"])

            def scalar(x):
                return field.parse(x) if isinstance(x, str) else field.element(x)

            v_dim = int(data["v_dim"])
            images = [Mat.from_rows(field, [[scalar(x) for x in row] for row in m], (v_dim, v_dim))
                      for m in data["images"]]
            core = Mat.from_columns(field, [[scalar(x) for x in col] for col in data["core"]], v_dim)
            table = MultTable([TableEntry(int(i), int(j), tuple(scalar(c) for c in coeffs))
                               for i, j, coeffs in data["table"]])
            unit = [scalar(c) for c in data["unit"]]
            return cls(field, data["labels"], unit, images, core, table)
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, AlmostRepError):
                raise
            raise SpecError(f"Malformed almost representation: {e}") from e

    def __repr__(self):
        return (f"AlmostRep(l_dim={self.l_dim}, v_dim={self.v_dim}, core_dim={self.core_dim}, "
                f"defect={format_ratio(self.defect)})")


def build_from_folner(L, Q):
    """
    Almost representation psi(x) v = P(x v) on a Følner subspace

    Args:
        L: FinSubspace containing 1
        Q: FinSubspace of dimension >= 1 over the same carrier

    Returns:
        AlmostRep with V = Q and core the intersection of Ker(m_x - P m_x)
    """
    if L.carrier != Q.carrier:
        raise CarrierMismatchError("L and Q live over different carriers")
    if Q.dim == 0:
        raise AlmostRepError("Følner construction needs dim Q >= 1")
    if not L.contains_one:
        raise AlmostRepError("L must contain 1")
    carrier = L.carrier
    field = carrier.field
    ambient = product_space(L, Q)

    inclusion = Mat.from_columns(field, [ambient.coordinates(q) for q in Q.basis], ambient.dim)
    projection = Mat.from_columns(field, [Q.projection_coordinates(a) for a in ambient.basis], Q.dim)
    lifted = inclusion @ projection

    operators, residuals, images = [], [], []
    for x in L.basis:
        m_x = Mat.from_columns(field, [ambient.coordinates(carrier.mul(x, q)) for q in Q.basis], ambient.dim)
        residual = m_x - lifted @ m_x
        operators.append(m_x)
        residuals.append(residual)
        images.append(projection @ m_x)

    core = intersect([kernel_basis(r) for r in residuals])
    build = FolnerRepBuild(Q=Q, ambient=ambient, projection=projection, inclusion=inclusion,
                           operators=operators, residuals=residuals)
    return AlmostRep(field, L.labels(), L.coordinates(carrier.one()), images, core, mult_table(L),
                     L=L, build=build)


def folner_defect_bound(build):
    """Sum over the basis of L of rank(m_x - P m_x) / dim Q"""
    return Fraction(sum(rank(r) for r in build.residuals), build.Q.dim)


def trivial_rep(field=None, v_dim=1, L=None):
    """Exact representation of span{1}: psi(1) = I on a v_dim-dimensional space"""
    field = make_field(field) if L is None else L.carrier.field
    if L is not None and (L.dim != 1 or not L.contains_one):
        raise AlmostRepError("The trivial representation lives on span{1}")
    identity = Mat.identity(field, v_dim)
    return AlmostRep(field, ["1"], [1], [identity], identity, MultTable([TableEntry(0, 0, (field.one(),))]), L=L)


@dataclass
class VerificationReport:
    """Outcome of re-checking both conditions of an almost representation"""

    unit_ok: bool
    core_multiplicative: bool
    core_contained: bool
    core_dim: int
    maximal_dim: int
    maximal_defect: Fraction
    injective: bool
    violations: list = dc_field(default_factory=list)
    v_dim: int = 0

    @property
    def passed(self):
        return self.unit_ok and self.core_multiplicative and self.core_contained

    def to_dict(self):
        return {
            "v_dim": self.v_dim,
            "unit_ok": self.unit_ok,
            "core_multiplicative": self.core_multiplicative,
            "core_contained": self.core_contained,
            "core_dim": self.core_dim,
            "maximal_dim": self.maximal_dim,
            "maximal_defect": format_ratio(self.maximal_defect),
            "injective": self.injective,
            "violations": self.violations,
            "pass": self.passed,
        }


def verify(rep):
    """
    Recompute the maximal core over the multiplication table

    Args:
        rep: AlmostRep

    Returns:
        VerificationReport (failed checks are entries, never exceptions)
    """
    field = rep.field
    v = rep.v_dim
    unit_ok = rep.image(rep.unit).is_identity()

    deviations = []
    violations = []
    for entry in rep.table:
        d = rep.images[entry.left] @ rep.images[entry.right] - rep.image(entry.coeffs)
        deviations.append(d)
        if not (d @ rep.core).is_zero():
            violations.append([entry.left, entry.right])

    maximal = common_kernel(field, deviations, v)
    maximal_defect = Fraction(v - maximal.cols, v) if v else Fraction(0)

    flat = Mat.from_columns(field, [m.entries for m in rep.images], v * v)
    injective = rank(flat) == rep.l_dim if rep.images else True

    return VerificationReport(
        unit_ok=unit_ok,
        core_multiplicative=not violations,
        core_contained=contains_span(maximal, rep.core),
        core_dim=rep.core_dim,
        maximal_dim=maximal.cols,
        maximal_defect=maximal_defect,
        injective=injective,
        violations=violations,
        v_dim=v,
    )


def amplify(rep, n):
    """
    Matrix amplification psi^(E_rc x) = E_rc (x) psi(x) on V^n

    Basis of the new L is indexed (r, c, k) in row-major order.

    Args:
        rep: AlmostRep
        n: Matrix size >= 1

    Returns:
        AlmostRep of dimension n * v_dim with core the n-fold sum of the core
    """
    if n < 1:
        raise AlmostRepError("Amplification size must be >= 1")
    field = rep.field
    d = rep.l_dim
    v = rep.v_dim

    def index(r, c, k):
        return (r * n + c) * d + k

    labels, images = [], []
    unit = [field.zero()] * (n * n * d)
    for r in range(n):
        for c in range(n):
            for k in range(d):
                labels.append(f"E[{r},{c}]({rep.labels[k]})")
                blocks = [[None] * n for _ in range(n)]
                blocks[r][c] = rep.images[k]
                images.append(block_matrix(field, blocks, v, v))
        for k in range(d):
            unit[index(r, r, k)] = rep.unit[k]

    by_pair = {(e.left, e.right): e.coeffs for e in rep.table}
    zero = tuple([field.zero()] * (n * n * d))
    entries = []
    for r in range(n):
        for c in range(n):
            for k in range(d):
                for r2 in range(n):
                    for c2 in range(n):
                        for k2 in range(d):
                            left, right = index(r, c, k), index(r2, c2, k2)
                            if c != r2:
                                entries.append(TableEntry(left, right, zero))
                                continue
                            coeffs = by_pair.get((k, k2))
                            if coeffs is None:
                                continue
                            out = list(zero)
                            for k3, value in enumerate(coeffs):
                                out[index(r, c2, k3)] = value
                            entries.append(TableEntry(left, right, tuple(out)))

    core = block_diag(field, [rep.core] * n)
    return AlmostRep(field, labels, unit, images, core, MultTable(entries))


def tensor(rep_a, rep_b):
    """
    Tensor product psi_A (x) psi_B acting on V (x) W

    Args:
        rep_a: AlmostRep
        rep_b: AlmostRep over the same field

    Returns:
        AlmostRep with images kron(psi_A(a), psi_B(b)) and core core_A (x) core_B
    """
    if rep_a.field != rep_b.field:
        raise CarrierMismatchError("Tensor product of almost representations over different fields")
    field = rep_a.field
    da, db = rep_a.l_dim, rep_b.l_dim

    labels, images = [], []
    unit = []
    for i in range(da):
        for j in range(db):
            labels.append(f"{rep_a.labels[i]} (x) {rep_b.labels[j]}")
            images.append(kron(rep_a.images[i], rep_b.images[j]))
            unit.append(field.element(rep_a.unit[i] * rep_b.unit[j]))

    zero = tuple([field.zero()] * (da * db))
    table_a = {(e.left, e.right): e for e in rep_a.table}
    table_b = {(e.left, e.right): e for e in rep_b.table}
    entries = []
    for i in range(da):
        for i2 in range(da):
            ea = table_a.get((i, i2))
            for j in range(db):
                for j2 in range(db):
                    eb = table_b.get((j, j2))
                    left, right = i * db + j, i2 * db + j2
                    if (ea is not None and ea.is_zero_product()) or (eb is not None and eb.is_zero_product()):
                        entries.append(TableEntry(left, right, zero))
                    elif ea is not None and eb is not None:
                        coeffs = [field.element(ca * cb) for ca in ea.coeffs for cb in eb.coeffs]
                        entries.append(TableEntry(left, right, tuple(coeffs)))

    core = kron(rep_a.core, rep_b.core)
    return AlmostRep(field, labels, unit, images, core, MultTable(entries))


def apply_matrix(rep, M):
    """
    Blockwise image of a matrix over L

    Args:
        rep: AlmostRep attached to a subspace L
        M: r x s list of lists of AlgebraElement, every entry in L

    Returns:
        Mat of shape (r * v_dim, s * v_dim) with block (i, j) = psi(M[i][j])
    """
    if rep.L is None:
        raise AlmostRepError("apply_matrix needs an almost representation attached to L")
    if not M or any(len(row) != len(M[0]) for row in M):
        raise SpecError("Matrix over L must be a non-empty rectangular grid")
    v = rep.v_dim
    blocks = [[rep.image_of(entry) for entry in row] for row in M]
    return block_matrix(rep.field, blocks, v, v)
