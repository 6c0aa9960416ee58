"""
Carrier Algebras
Finitely supported elements over a canonical basis with an effective multiplication oracle.

Supported kinds:
- group algebra k[Z^d] (basis words are exponent vectors)
- group algebra k[F_r] (basis words are freely reduced words)
- free associative algebra k<x_1..x_r> (basis words are words)
- translation algebra on a finite graph window (basis words are vertex pairs)
"""

import itertools
from abc import ABC, abstractmethod
from types import MappingProxyType

from almost_reps.linalg.field import make_field
from almost_reps.utils.errors import CarrierMismatchError, SpecError, UnsupportedExhaustionError

LETTERS = "abcdefghijklmnopqrs"


def default_names(prefix, count, short):
    """Generator names: the short list when it is long enough, else prefix1..prefixN"""
    if count <= len(short):
        return tuple(short[:count])
    return tuple(f"{prefix}{i + 1}" for i in range(count))


class AlgebraElement:
    """Finite linear combination of basis words of a carrier"""

    __slots__ = ("carrier", "_terms")

    def __init__(self, carrier, terms=None):
        """
        Initialize element

        Args:
            carrier: Carrier the element lives in
            terms: Mapping word -> scalar; zero coefficients are dropped
        """
        field = carrier.field
        clean = {}
        for word, coeff in (terms or {}).items():
            c = field.element(coeff)
            if not field.is_zero(c):
                clean[word] = c
        self.carrier = carrier
        self._terms = clean

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def coefficient(self, word):
        return self._terms.get(word, self.carrier.zero_scalar)

    def support(self):
        """Words of the support, largest (leading) first"""
        return sorted(self._terms, key=self.carrier.word_key, reverse=True)

    def leading_word(self):
        if not self._terms:
            return None
        return max(self._terms, key=self.carrier.word_key)

    def is_zero(self):
        return not self._terms

    def _same_carrier(self, other):
        if not isinstance(other, AlgebraElement):
            return False
        if other.carrier != self.carrier:
            raise CarrierMismatchError("Operands live over different carriers")
        return True

    def __add__(self, other):
        if not self._same_carrier(other):
            return NotImplemented
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, 0) + c
        return AlgebraElement(self.carrier, out)

    def __neg__(self):
        return AlgebraElement(self.carrier, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        if not self._same_carrier(other):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.carrier.mul(self, other)
        return self.scale(other)

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def scale(self, scalar):
        c = self.carrier.field.element(scalar)
        return AlgebraElement(self.carrier, {w: v * c for w, v in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.carrier == other.carrier and self._terms == other._terms

    __hash__ = None

    def __str__(self):
        return self.carrier.format_element(self)

    def __repr__(self):
        return f"AlgebraElement({self})"


class Carrier(ABC):
    """Base class of all carriers; instances are immutable after construction"""

    kind = None

    def __init__(self, field=None):
        self.field = make_field(field)
        self.zero_scalar = self.field.zero()

    # -- word level ---------------------------------------------------------

    @abstractmethod
    def validate(self, word):
        """Return the normal form of word or raise SpecError"""

    @abstractmethod
    def multiply_words(self, u, v):
        """Normal form of the product of two basis words, or None for zero"""

    @abstractmethod
    def identity_terms(self):
        """Terms of the unit element"""

    @abstractmethod
    def word_key(self, word):
        """Sort key realizing the total basis order (larger = leading)"""

    @abstractmethod
    def format_word(self, word):
        """Literal for a basis word"""

    @abstractmethod
    def descriptor(self):
        """JSON description of the carrier (without the field)"""

    def letter(self, name, power):
        """Basis word for a named generator raised to an integer power"""
        raise SpecError(f"Carrier {self.kind} has no generator named {name!r}")

    def matrix_unit(self, x, y):
        raise SpecError(f"Matrix units E[{x},{y}] are only defined on translation algebras")

    # -- element level ------------------------------------------------------

    def element(self, terms):
        return AlgebraElement(self, {self.validate(w): c for w, c in terms.items()})

    def basis_element(self, word, coeff=1):
        return AlgebraElement(self, {self.validate(word): coeff})

    def zero(self):
        return AlgebraElement(self, {})

    def one(self):
        return AlgebraElement(self, self.identity_terms())

    def mul_basis(self, u, v):
        """
        Product of two basis words as an element

        Args:
            u: Basis word
            v: Basis word

        Returns:
            AlgebraElement (zero when the product vanishes)
        """
        w = self.multiply_words(self.validate(u), self.validate(v))
        if w is None:
            return self.zero()
        return AlgebraElement(self, {w: 1})

    def mul(self, a, b):
        """Bilinear extension of mul_basis"""
        if a.carrier != self or b.carrier != self:
            raise CarrierMismatchError("Cannot multiply elements of different carriers")
        acc = {}
        for u, cu in a.terms.items():
            for v, cv in b.terms.items():
                w = self.multiply_words(u, v)
                if w is None:
                    continue
                acc[w] = acc.get(w, 0) + cu * cv
        return AlgebraElement(self, acc)

    def format_element(self, element):
        if element.is_zero():
            return "0"
        parts = []
        for word in sorted(element.terms, key=self.word_key):
            coeff = self.field.signed(element.coefficient(word))
            name = self.format_word(word)
            negative = coeff < 0
            magnitude = -coeff if negative else coeff
            if name == "1":
                body = str(magnitude)
            elif magnitude == 1:
                body = name
            else:
                body = f"{magnitude}*{name}"
            if not parts:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(parts)

    # -- exhaustions ----------------------------------------------------------

    def exhaustion_words(self, kind, n, center=None):
        """
        Basis words spanning the n-th member of a canonical exhaustion

        Args:
            kind: Exhaustion type ("ball", "box" or "length")
            n: Index (radius, side length or word length)
            center: Optional basis word the exhaustion is translated by

        Returns:
            list of basis words
        """
        raise UnsupportedExhaustionError(f"Exhaustion {kind!r} is not supported on {self.kind} carriers")

    def generator_ball(self):
        """Default B / L: the unit together with the generators (and their inverses)"""
        raise NotImplementedError

    def full_descriptor(self):
        out = dict(self.descriptor())
        out["field"] = self.field.descriptor()
        return out

    def __eq__(self, other):
        if other is self:
            return True
        return isinstance(other, Carrier) and self.full_descriptor() == other.full_descriptor()

    def __hash__(self):
        return hash(repr(sorted(self.full_descriptor().items(), key=str)))

    def __repr__(self):
        return f"{type(self).__name__}({self.descriptor()}, {self.field.label()})"


class LatticeGroupAlgebra(Carrier):
    """k[Z^d]; basis words are exponent vectors"""

    kind = "group-Zd"

    def __init__(self, d=1, field=None, names=None):
        super().__init__(field)
        if int(d) < 1:
            raise SpecError("Lattice rank d must be >= 1")
        self.d = int(d)
        if names is None:
            names = ("t",) if self.d == 1 else default_names("x", self.d, ("x", "y", "z"))
        if len(names) != self.d:
            raise SpecError(f"Expected {self.d} generator names, got {len(names)}")
        self.names = tuple(names)

    def validate(self, word):
        try:
            word = tuple(int(e) for e in word)
        except TypeError as e:
            raise SpecError(f"Invalid Z^{self.d} word: {word!r}") from e
        if len(word) != self.d:
            raise SpecError(f"Z^{self.d} word must have {self.d} exponents: {word!r}")
        return word

    def multiply_words(self, u, v):
        return tuple(a + b for a, b in zip(u, v))

    def identity_terms(self):
        return {(0,) * self.d: 1}

    def word_key(self, word):
        letters = []
        for i, e in enumerate(word):
            letters.extend([2 * i + (e < 0)] * abs(e))
        return (len(letters), tuple(letters))

    def format_word(self, word):
        factors = []
        for name, e in zip(self.names, word):
            if e == 0:
                continue
            factors.append(name if e == 1 else f"{name}^{e}")
        return "*".join(factors) if factors else "1"

    def letter(self, name, power):
        if name not in self.names:
            return super().letter(name, power)
        word = [0] * self.d
        word[self.names.index(name)] = power
        return tuple(word)

    def descriptor(self):
        return {"carrier": "group", "group": "Z^d", "d": self.d}

    def exhaustion_words(self, kind, n, center=None):
        center = self.validate(center) if center is not None else (0,) * self.d
        if kind == "ball":
            words = [w for w in itertools.product(range(-n, n + 1), repeat=self.d)
                     if sum(abs(e) for e in w) <= n]
        elif kind == "box":
            words = list(itertools.product(range(n), repeat=self.d))
        else:
            return super().exhaustion_words(kind, n, center)
        return [self.multiply_words(w, center) for w in words]

    def generator_ball(self):
        gens = [self.one()]
        for i in range(self.d):
            for sign in (1, -1):
                word = [0] * self.d
                word[i] = sign
                gens.append(self.basis_element(tuple(word)))
        return gens


def free_reduce(letters):
    """Freely reduce a sequence of nonzero letters (+i generator, -i its inverse)"""
    stack = []
    for letter in letters:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def reduced_words(rank, length):
    """All freely reduced words of exactly the given length over rank generators"""
    letters = [s * (i + 1) for i in range(rank) for s in (1, -1)]
    layer = [()]
    for _ in range(length):
        layer = [w + (a,) for w in layer for a in letters if not w or w[-1] != -a]
    return layer


def _power_groups(word):
    """Group consecutive equal letters: ((letter, count), ...)"""
    return [(letter, len(list(run))) for letter, run in itertools.groupby(word)]


class FreeGroupAlgebra(Carrier):
    """k[F_r]; basis words are freely reduced letter tuples"""

    kind = "group-free"

    def __init__(self, rank=2, field=None, names=None):
        super().__init__(field)
        if int(rank) < 1:
            raise SpecError("Free group rank must be >= 1")
        self.rank = int(rank)
        self.names = tuple(names) if names else default_names("g", self.rank, LETTERS)
        if len(self.names) != self.rank:
            raise SpecError(f"Expected {self.rank} generator names, got {len(self.names)}")

    def validate(self, word):
        word = tuple(int(a) for a in word)
        for a in word:
            if a == 0 or abs(a) > self.rank:
                raise SpecError(f"Invalid letter {a} for F_{self.rank}")
        return free_reduce(word)

    def multiply_words(self, u, v):
        return free_reduce(u + v)

    def identity_terms(self):
        return {(): 1}

    def word_key(self, word):
        return (len(word), tuple(2 * (abs(a) - 1) + (a < 0) for a in word))

    def format_word(self, word):
        if not word:
            return "1"
        factors = []
        for letter, count in _power_groups(word):
            name = self.names[abs(letter) - 1]
            power = count if letter > 0 else -count
            factors.append(name if power == 1 else f"{name}^{power}")
        return "*".join(factors)

    def letter(self, name, power):
        if name not in self.names:
            return super().letter(name, power)
        g = self.names.index(name) + 1
        return (g if power > 0 else -g,) * abs(power)

    def descriptor(self):
        return {"carrier": "group", "group": "free", "rank": self.rank}

    def exhaustion_words(self, kind, n, center=None):
        if kind != "ball":
            return super().exhaustion_words(kind, n, center)
        center = self.validate(center) if center is not None else ()
        words = [w for length in range(n + 1) for w in reduced_words(self.rank, length)]
        return [self.multiply_words(w, center) for w in words]

    def generator_ball(self):
        gens = [self.one()]
        for i in range(self.rank):
            gens.append(self.basis_element((i + 1,)))
            gens.append(self.basis_element((-(i + 1),)))
        return gens


class FreeAlgebra(Carrier):
    """k<x_1..x_r>; basis words are tuples of generator indices"""

    kind = "free"

    def __init__(self, rank=2, field=None, names=None):
        super().__init__(field)
        if int(rank) < 1:
            raise SpecError("Free algebra rank must be >= 1")
        self.rank = int(rank)
        self.names = tuple(names) if names else default_names("x", self.rank, ("x", "y", "z", "w"))
        if len(self.names) != self.rank:
            raise SpecError(f"Expected {self.rank} generator names, got {len(self.names)}")

    def validate(self, word):
        word = tuple(int(a) for a in word)
        for a in word:
            if not 0 <= a < self.rank:
                raise SpecError(f"Invalid letter {a} for a free algebra of rank {self.rank}")
        return word

    def multiply_words(self, u, v):
        return u + v

    def identity_terms(self):
        return {(): 1}

    def word_key(self, word):
        return (len(word), word)

    def format_word(self, word):
        if not word:
            return "1"
        factors = []
        for letter, count in _power_groups(word):
            name = self.names[letter]
            factors.append(name if count == 1 else f"{name}^{count}")
        return "*".join(factors)

    def letter(self, name, power):
        if name not in self.names:
            return super().letter(name, power)
        if power < 0:
            raise SpecError(f"Negative power {name}^{power} in a free algebra")
        return (self.names.index(name),) * power

    def descriptor(self):
        return {"carrier": "free", "rank": self.rank}

    def exhaustion_words(self, kind, n, center=None):
        if kind != "length":
            return super().exhaustion_words(kind, n, center)
        center = self.validate(center) if center is not None else ()
        words = [w for length in range(n + 1)
                 for w in itertools.product(range(self.rank), repeat=length)]
        return [tuple(w) + center for w in words]

    def generator_ball(self):
        return [self.one()] + [self.basis_element((i,)) for i in range(self.rank)]


class TranslationAlgebra(Carrier):
    """
    Translation algebra on a finite graph window.

    Basis words are vertex pairs (x, y) standing for matrix units E_xy. The
    declared propagation bound constrains words supplied from outside;
    products are never capped and report their own propagation.
    """

    kind = "translation"

    def __init__(self, graph, field=None, propagation=None):
        super().__init__(field)
        self.graph = graph
        self.propagation_bound = None if propagation is None else int(propagation)

    def validate(self, word):
        try:
            x, y = (int(v) for v in word)
        except (TypeError, ValueError) as e:
            raise SpecError(f"Translation basis word must be a vertex pair: {word!r}") from e
        n = self.graph.n
        if not (0 <= x < n and 0 <= y < n):
            raise SpecError(f"Vertex pair ({x},{y}) outside the window of {n} vertices")
        if self.propagation_bound is not None and self.graph.distance(x, y) > self.propagation_bound:
            raise SpecError(f"E[{x},{y}] exceeds the propagation bound {self.propagation_bound}")
        return (x, y)

    def multiply_words(self, u, v):
        return (u[0], v[1]) if u[1] == v[0] else None

    def identity_terms(self):
        return {(x, x): 1 for x in range(self.graph.n)}

    def word_key(self, word):
        return word

    def format_word(self, word):
        return f"E[{word[0]},{word[1]}]"

    def format_element(self, element):
        if element == self.one() and not element.is_zero():
            return "1"
        return super().format_element(element)

    def matrix_unit(self, x, y):
        return self.validate((x, y))

    def propagation(self, element):
        """Largest graph distance d(x, y) over the support (0 for the zero element)"""
        return max((self.graph.distance(x, y) for x, y in element.terms), default=0)

    def from_map(self, mapping):
        """Element sum of E[image, source] over a vertex map source -> image"""
        return AlgebraElement(self, {(image, source): 1 for source, image in mapping.items()})

    def transpose(self, element):
        return AlgebraElement(self, {(y, x): c for (x, y), c in element.terms.items()})

    def diagonal(self, vertices):
        return AlgebraElement(self, {(x, x): 1 for x in vertices})

    def descriptor(self):
        out = {"carrier": "translation", "graph": self.graph.spec}
        if self.propagation_bound is not None:
            out["propagation"] = self.propagation_bound
        return out

    def full_descriptor(self):
        # equal translation carriers share the vertex count and the edge set
        out = super().full_descriptor()
        out["window"] = (self.graph.n, self.graph.edges())
        return out

    def exhaustion_words(self, kind, n, center=None):
        column = self.graph.center if center is None else int(center)
        if kind == "ball":
            vertices = self.graph.ball([column], n)
        elif kind == "box":
            vertices = self.graph.box(column, n)
        else:
            return super().exhaustion_words(kind, n, center)
        return [(x, column) for x in sorted(vertices)]

    def generator_ball(self):
        """Span of all matrix units of propagation <= 1 (contains the unit)"""
        words = []
        for x in range(self.graph.n):
            words.append((x, x))
            words.extend((x, y) for y in self.graph.adjacency[x])
        return [AlgebraElement(self, {w: 1}) for w in sorted(set(words))]


def matrix_product(carrier, a, b):
    """
    Product of matrices with carrier entries

    Args:
        carrier: Carrier of all entries
        a: r x s list of lists of AlgebraElement
        b: s x t list of lists of AlgebraElement

    Returns:
        r x t list of lists of AlgebraElement
    """
    inner = len(b)
    if any(len(row) != inner for row in a):
        raise SpecError(f"Shape mismatch: left has rows of length != {inner}")
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new_row = []
        for j in range(cols):
            acc = carrier.zero()
            for k in range(inner):
                acc = acc + carrier.mul(row[k], b[k][j])
            new_row.append(acc)
        out.append(new_row)
    return out


def identity_matrix(carrier, n, unit=None):
    """n x n identity with the given diagonal entry (default the carrier unit)"""
    unit = carrier.one() if unit is None else unit
    return [[unit if i == j else carrier.zero() for j in range(n)] for i in range(n)]
