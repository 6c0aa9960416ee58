"""
Følner Subspaces
Finite-dimensional subspaces of a carrier, product spaces and Følner ratios over canonical exhaustions
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import pandas as pd

from almost_reps.algebra.carrier import AlgebraElement
from almost_reps.linalg.exactlin import Mat, rref
from almost_reps.linalg.field import format_ratio
from almost_reps.utils.errors import AlmostRepError, CarrierMismatchError, NotInSubspaceError, SpecError


class FinSubspace:
    """
    Finite-dimensional subspace in fully reduced echelon form.

    Every basis element has coefficient 1 at its leading word and coefficient 0
    at the leading words of all other basis elements. Leading words are
    strictly decreasing along the basis.
    """

    def __init__(self, carrier, basis):
        self.carrier = carrier
        self.basis = tuple(basis)
        self.leads = tuple(b.leading_word() for b in self.basis)
        self._index = {w: i for i, w in enumerate(self.leads)}

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def _lead_coefficients(self, element):
        """Pairs (basis index, coefficient) over the leading words in the support of element"""
        index = self._index
        return [(index[w], c) for w, c in element.terms.items() if w in index]

    def reduce(self, element):
        """Remainder of element against the basis (zero iff the element lies in the subspace)"""
        self._check(element)
        out = dict(element.terms)
        for i, c in self._lead_coefficients(element):
            for w, v in self.basis[i].terms.items():
                out[w] = out.get(w, 0) - c * v
        return AlgebraElement(self.carrier, out)

    def contains(self, element):
        return self.reduce(element).is_zero()

    @property
    def contains_one(self):
        return self.contains(self.carrier.one())

    def coordinates(self, element):
        """
        Coordinates of a member in the echelon basis

        Args:
            element: AlgebraElement lying in the subspace

        Returns:
            list of scalars, one per basis element

        Raises:
            NotInSubspaceError: element is not in the subspace
        """
        if not self.contains(element):
            raise NotInSubspaceError(f"{element} does not lie in the subspace (dim {self.dim})")
        return self.projection_coordinates(element)

    def projection_coordinates(self, element):
        """Coordinates of the projection along the span of all non-leading words"""
        self._check(element)
        coords = [self.carrier.zero_scalar] * self.dim
        for i, c in self._lead_coefficients(element):
            coords[i] = c
        return coords

    def element_of(self, coords):
        """Linear combination of the basis with the given coordinates"""
        out = {}
        for c, b in zip(coords, self.basis):
            c = self.carrier.field.element(c)
            for w, v in b.terms.items():
                out[w] = out.get(w, 0) + c * v
        return AlgebraElement(self.carrier, out)

    def is_subspace_of(self, other):
        return all(other.contains(b) for b in self.basis)

    def labels(self):
        return [str(b) for b in self.basis]

    def _check(self, element):
        if element.carrier != self.carrier:
            raise CarrierMismatchError("Element and subspace live over different carriers")

    def __eq__(self, other):
        if not isinstance(other, FinSubspace):
            return NotImplemented
        return self.carrier == other.carrier and list(self.basis) == list(other.basis)

    __hash__ = None

    def __repr__(self):
        return f"FinSubspace(dim={self.dim}, carrier={self.carrier!r})"


def span(carrier, gens):
    """
    Echelonized linear span

    Args:
        carrier: Carrier of the generators
        gens: Iterable of AlgebraElement

    Returns:
        FinSubspace
    """
    gens = [g for g in gens if not g.is_zero()]
    for g in gens:
        if g.carrier != carrier:
            raise CarrierMismatchError("Generator lives over a different carrier")
    if all(len(g.terms) == 1 for g in gens):
        words = {next(iter(g.terms)) for g in gens}
        ordered = sorted(words, key=carrier.word_key, reverse=True)
        return FinSubspace(carrier, [AlgebraElement(carrier, {w: 1}) for w in ordered])

    words = sorted({w for g in gens for w in g.terms}, key=carrier.word_key, reverse=True)
    column = {w: j for j, w in enumerate(words)}
    field = carrier.field
    data = field.zeros(len(gens), len(words))
    for i, g in enumerate(gens):
        for w, c in g.terms.items():
            data[i, column[w]] = c
    reduced, pivots = rref(Mat(data, field))
    basis = []
    for i in range(len(pivots)):
        row = reduced.data[i]
        basis.append(AlgebraElement(carrier, {words[j]: row[j] for j in range(len(words)) if row[j] != 0}))
    return FinSubspace(carrier, basis)


def span_words(carrier, words):
    return span(carrier, [carrier.basis_element(w) for w in words])


def product_space(B, Q):
    """Span of all products b*q over the bases of B and Q"""
    if B.carrier != Q.carrier:
        raise CarrierMismatchError("Product space of subspaces over different carriers")
    carrier = B.carrier
    return span(carrier, [carrier.mul(b, q) for b in B.basis for q in Q.basis])


@dataclass
class FolnerCertificate:
    """Exact Følner ratio (dim BQ - dim Q) / dim Q of a pair (B, Q)"""

    B: FinSubspace
    Q: FinSubspace
    dim_BQ: int
    dim_Q: int
    ratio: Fraction
    n: int = None

    def to_dict(self):
        return {
            "n": self.n,
            "dim_B": self.B.dim,
            "dim_Q": self.dim_Q,
            "dim_BQ": self.dim_BQ,
            "ratio": format_ratio(self.ratio),
        }


def folner_ratio(B, Q, n=None):
    """
    Følner ratio of Q relative to B

    Args:
        B: FinSubspace containing 1
        Q: FinSubspace of dimension >= 1
        n: Optional exhaustion index recorded on the certificate

    Returns:
        FolnerCertificate
    """
    if Q.dim == 0:
        raise AlmostRepError("Følner ratio needs dim Q >= 1")
    if not B.contains_one:
        raise AlmostRepError("Følner ratio needs 1 in B")
    BQ = product_space(B, Q)
    ratio = Fraction(BQ.dim - Q.dim, Q.dim)
    return FolnerCertificate(B=B, Q=Q, dim_BQ=BQ.dim, dim_Q=Q.dim, ratio=ratio, n=n)


@dataclass
class ExhaustionSpec:
    """Canonical exhaustion: "ball" | "box" | "length", translated by an optional center word"""

    type: str = "ball"
    center: object = dc_field(default=None)

    @classmethod
    def from_dict(cls, data):
        if data is None:
            return cls()
        if isinstance(data, str):
            return cls(type=data)
        if not isinstance(data, dict) or "type" not in data:
            raise SpecError(f"Invalid exhaustion spec: {data!r}")
        center = data.get("center")
        if isinstance(center, list):
            center = tuple(center)
        return cls(type=data["type"], center=center)

    def to_dict(self):
        center = list(self.center) if isinstance(self.center, tuple) else self.center
        return {"type": self.type, "center": center}


def default_exhaustion(carrier):
    """Ball exhaustion everywhere except the free algebra, which is filtered by length"""
    return ExhaustionSpec(type="length" if carrier.kind == "free" else "ball")


def exhaustion_subspace(carrier, exhaustion, n):
    """n-th member Q_n of the exhaustion, spanned by basis words"""
    return span_words(carrier, carrier.exhaustion_words(exhaustion.type, n, exhaustion.center))


def folner_scan(carrier, B, exhaustion, n_max):
    """
    Følner certificates along a canonical exhaustion

    Args:
        carrier: Carrier
        B: FinSubspace containing 1
        exhaustion: ExhaustionSpec
        n_max: Last index scanned

    Returns:
        list of FolnerCertificate for n = 1..n_max
    """
    if n_max < 1:
        raise SpecError("n_max must be >= 1")
    certificates = []
    for n in range(1, n_max + 1):
        Q = exhaustion_subspace(carrier, exhaustion, n)
        certificates.append(folner_ratio(B, Q, n=n))
    return certificates


def scan_frame(certificates):
    """Summary table of a scan with exact string ratios"""
    return pd.DataFrame([c.to_dict() for c in certificates])
