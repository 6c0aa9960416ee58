"""
Pathology Audits
Witness subspaces, rank-condition counting, stable finiteness and the commutator rank lemma
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from almost_reps.algebra.carrier import identity_matrix, matrix_product
from almost_reps.algebra.folner import span
from almost_reps.analysis.almostrep import apply_matrix
from almost_reps.linalg.exactlin import Mat, block_diag, contains_span, fixed_subspace, inverse, rank
from almost_reps.linalg.field import format_ratio
from almost_reps.utils.errors import AlmostRepError, SpecError


def _shape(M, name):
    if not M or any(len(row) != len(M[0]) for row in M) or not M[0]:
        raise SpecError(f"Matrix {name} must be a non-empty rectangular grid")
    return len(M), len(M[0])


def _entries(M):
    return [x for row in M for x in row]


def witness_subspace(carrier, A, B, include_reverse=False):
    """
    Finite subspace carrying the products needed by a pair of matrices

    Args:
        carrier: Carrier of the entries
        A: m x n matrix over the carrier
        B: n x m matrix over the carrier
        include_reverse: Also span the products y*x (needed for BA)

    Returns:
        FinSubspace spanned by 1, the entries of A and B and all products x*y
    """
    m, n = _shape(A, "A")
    n_b, m_b = _shape(B, "B")
    if (n_b, m_b) != (n, m):
        raise SpecError(f"Shapes {m}x{n} and {n_b}x{m_b} are not composable both ways")
    xs, ys = _entries(A), _entries(B)
    gens = [carrier.one()] + xs + ys
    gens += [carrier.mul(x, y) for x in xs for y in ys]
    if include_reverse:
        gens += [carrier.mul(y, x) for x in xs for y in ys]
    return span(carrier, gens)


@dataclass
class RankAudit:
    """Counting step m * dim V_eps > n * dim V behind the rank condition"""

    m: int
    n: int
    v_dim: int
    core_dim: int
    lhs: int
    rhs: int
    contradiction: bool
    rank_product: int = None
    rank_bound_ok: bool = True
    ab_identity: bool = None
    fixed_dim: int = None
    fixed_ok: bool = True

    @classmethod
    def from_dims(cls, m, n, v_dim, core_dim):
        if not m > n >= 1:
            raise SpecError(f"Rank audit needs m > n >= 1, got m={m}, n={n}")
        lhs, rhs = m * core_dim, n * v_dim
        return cls(m=m, n=n, v_dim=v_dim, core_dim=core_dim, lhs=lhs, rhs=rhs, contradiction=lhs > rhs)

    @property
    def passed(self):
        return self.rank_bound_ok and self.fixed_ok

    def to_dict(self):
        return {
            "m": self.m, "n": self.n, "v_dim": self.v_dim, "core_dim": self.core_dim,
            "lhs": self.lhs, "rhs": self.rhs, "contradiction": self.contradiction,
            "rank_product": self.rank_product, "rank_bound_ok": self.rank_bound_ok,
            "ab_identity": self.ab_identity, "fixed_dim": self.fixed_dim, "fixed_ok": self.fixed_ok,
            "pass": self.passed,
        }


def _products_in(L, A, B):
    """True when every product A[i][k] * B[k][j] lies in L"""
    carrier = L.carrier
    return all(L.contains(carrier.mul(row[k], B[k][j]))
               for row in A for k in range(len(B)) for j in range(len(B[0])))


def rank_condition_audit(rep, A, B):
    """
    Evaluate the rank-condition counting argument on an almost representation

    Args:
        rep: AlmostRep attached to L
        A: m x n matrix over L
        B: n x m matrix over L, with m > n

    Returns:
        RankAudit with the exact rank of psi^(A) psi^(B)
    """
    m, n = _shape(A, "A")
    if _shape(B, "B") != (n, m):
        raise SpecError(f"B must be {n}x{m}")
    audit = RankAudit.from_dims(m, n, rep.v_dim, rep.core_dim)
    product = apply_matrix(rep, A) @ apply_matrix(rep, B)
    audit.rank_product = rank(product)
    audit.rank_bound_ok = audit.rank_product <= audit.rhs

    carrier = rep.L.carrier
    audit.ab_identity = matrix_product(carrier, A, B) == identity_matrix(carrier, m)
    fixed = fixed_subspace(product)
    audit.fixed_dim = fixed.cols
    if audit.ab_identity and rep.build is not None and _products_in(rep.L, A, B):
        audit.fixed_ok = contains_span(fixed, block_diag(rep.field, [rep.core] * m))
    return audit


@dataclass
class StableFinitenessReport:
    size: int
    ab_identity: bool
    ba_identity: bool
    commutator_rank: int

    @property
    def implication_ok(self):
        return self.ba_identity or not self.ab_identity

    def to_dict(self):
        return {
            "size": self.size, "ab_identity": self.ab_identity, "ba_identity": self.ba_identity,
            "commutator_rank": self.commutator_rank, "pass": self.implication_ok,
        }


def _check_square_pair(A, B):
    if not A.is_square() or not B.is_square() or A.shape != B.shape:
        raise AlmostRepError(f"Need two square matrices of equal size, got {A.shape} and {B.shape}")


def finite_stable_check(A, B):
    """AB = I implies BA = I for square matrices over a field"""
    _check_square_pair(A, B)
    ab, ba = A @ B, B @ A
    return StableFinitenessReport(size=A.rows, ab_identity=ab.is_identity(), ba_identity=ba.is_identity(),
                                  commutator_rank=rank(ab - ba))


@dataclass
class CommutatorReport:
    """rank(TS - ST) <= 2 * (l - dim Fix(TS))"""

    l: int
    v_dim: int
    epsilon_l: int
    rank_commutator: int
    bound: int

    @property
    def passed(self):
        return self.rank_commutator <= self.bound

    def to_dict(self):
        return {
            "l": self.l, "v_dim": self.v_dim, "epsilon_l": self.epsilon_l,
            "rank_TS_minus_ST": self.rank_commutator, "bound": self.bound, "pass": self.passed,
        }


def commutator_bound_check(T, S):
    """
    Commutator rank lemma for a nearly invertible pair

    Args:
        T: Square Mat of size l
        S: Square Mat of size l

    Returns:
        CommutatorReport comparing rank(TS - ST) with 2 * (l - dim Fix(TS))
    """
    _check_square_pair(T, S)
    ts, st = T @ S, S @ T
    v_dim = fixed_subspace(ts).cols
    eps_l = T.rows - v_dim
    return CommutatorReport(l=T.rows, v_dim=v_dim, epsilon_l=eps_l, rank_commutator=rank(ts - st), bound=2 * eps_l)


@dataclass
class IdealBoundReport:
    rank_p: int
    rank_ap: int
    v_dim: int
    epsilon: Fraction
    bound: Fraction
    delta: Fraction = None
    delta_bound: Fraction = None

    @property
    def passed(self):
        return self.rank_ap <= self.bound

    @property
    def delta_passed(self):
        if self.delta_bound is None:
            return None
        return self.rank_ap <= self.delta_bound

    def to_dict(self):
        return {
            "rank_p": self.rank_p, "rank_ap": self.rank_ap, "v_dim": self.v_dim,
            "epsilon": format_ratio(self.epsilon), "bound": format_ratio(self.bound),
            "delta": None if self.delta is None else format_ratio(self.delta),
            "delta_bound": None if self.delta_bound is None else format_ratio(self.delta_bound),
            "delta_pass": self.delta_passed, "pass": self.passed,
        }


def rr_ideal_bound(rank_p, v_dim, epsilon, rank_ap, delta=None):
    """
    Rank of a product through psi exceeds rank psi(p) by at most the defect dimension

    Args:
        rank_p: rank psi(p)
        v_dim: dim V
        epsilon: Defect of the almost representation
        rank_ap: rank psi(a p)
        delta: Optional threshold; adds the check rank_ap <= delta/2 * dim V + epsilon * dim V

    Returns:
        IdealBoundReport
    """
    epsilon = Fraction(epsilon)
    bound = rank_p + epsilon * v_dim
    report = IdealBoundReport(rank_p=rank_p, rank_ap=rank_ap, v_dim=v_dim, epsilon=epsilon, bound=bound)
    if delta is not None:
        report.delta = Fraction(delta)
        report.delta_bound = report.delta / 2 * v_dim + epsilon * v_dim
    return report


@dataclass
class StableFinitenessAudit:
    """Fixed subspace of psi^(A) psi^(B) and the commutator data for square A, B over L"""

    n: int
    v_dim: int
    ab_identity: bool
    fixed_dim: int
    fixed_contains_core: bool
    commutator: CommutatorReport
    commutator_in_L: bool
    rank_commutator_image: int = None
    commutator_ratio: Fraction = None

    @property
    def passed(self):
        return self.commutator.passed and self.fixed_contains_core is not False

    def to_dict(self):
        return {
            "n": self.n, "v_dim": self.v_dim, "ab_identity": self.ab_identity,
            "fixed_dim": self.fixed_dim, "fixed_contains_core": self.fixed_contains_core,
            "commutator": self.commutator.to_dict(), "commutator_in_L": self.commutator_in_L,
            "rank_commutator_image": self.rank_commutator_image,
            "commutator_ratio": None if self.commutator_ratio is None else format_ratio(self.commutator_ratio),
            "pass": self.passed,
        }


def stable_finiteness_audit(rep, A, B):
    """
    Quantitative steps of the stable finiteness argument for square A, B over L

    Args:
        rep: Følner-built AlmostRep attached to L
        A: n x n matrix over L
        B: n x n matrix over L

    Returns:
        StableFinitenessAudit
    """
    n, n2 = _shape(A, "A")
    if n != n2 or _shape(B, "B") != (n, n):
        raise SpecError("stable finiteness audit needs square matrices of equal size")
    carrier = rep.L.carrier
    psi_a, psi_b = apply_matrix(rep, A), apply_matrix(rep, B)
    fixed = fixed_subspace(psi_a @ psi_b)
    ab = matrix_product(carrier, A, B)
    ab_identity = ab == identity_matrix(carrier, n)
    # only asserted where the core is multiplicative for every pair with product in L
    contains_core = None
    if ab_identity and rep.build is not None and _products_in(rep.L, A, B):
        contains_core = contains_span(fixed, block_diag(rep.field, [rep.core] * n))

    ba = matrix_product(carrier, B, A)
    diff = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]
    in_L = all(rep.L.contains(x) for row in diff for x in row)
    audit = StableFinitenessAudit(
        n=n, v_dim=rep.v_dim, ab_identity=ab_identity, fixed_dim=fixed.cols, fixed_contains_core=contains_core,
        commutator=commutator_bound_check(psi_a, psi_b), commutator_in_L=in_L,
    )
    if in_L:
        audit.rank_commutator_image = rank(apply_matrix(rep, diff))
        audit.commutator_ratio = Fraction(audit.rank_commutator_image, n * rep.v_dim)
    return audit


def random_element(L, rng, coeff_bound=2):
    """Random combination of the basis of L with integer coefficients in [-coeff_bound, coeff_bound]"""
    coeffs = rng.integers(-coeff_bound, coeff_bound + 1, size=L.dim)
    return L.element_of([int(c) for c in coeffs])


def random_matrix_over(L, rows, cols, rng, coeff_bound=2):
    return [[random_element(L, rng, coeff_bound) for _ in range(cols)] for _ in range(rows)]


def random_rectangular(field, rows, cols, rng, bound=None):
    """Uniform rows x cols Mat over GF(p), or entries in [-bound, bound] over Q"""
    if field.kind == "gfp":
        data = rng.integers(0, min(field.p, 2**62), size=(rows, cols), dtype=np.int64)
    else:
        bound = bound or 5
        data = rng.integers(-bound, bound + 1, size=(rows, cols))
    return Mat.from_rows(field, data.tolist(), (rows, cols))


def random_square(field, size, rng, bound=None):
    """Uniform square Mat over GF(p), or small-integer entries over Q"""
    return random_rectangular(field, size, size, rng, bound)


def random_invertible(field, size, rng, bound=None):
    """Uniform square Mat conditioned on being invertible"""
    while True:
        T = random_square(field, size, rng, bound)
        if rank(T) == size:
            return T


def random_near_inverse_pair(field, size, rng, perturbation_rank=1, bound=None):
    """
    Pair (T, S) with S = T^-1 + U V^T for random U, V of width perturbation_rank

    TS = I + T U V^T fixes the kernel of V^T, so dim Fix(TS) >= size - perturbation_rank
    and the commutator bound is at most 2 * perturbation_rank.

    Args:
        field: Field of the entries
        size: Matrix size l
        rng: numpy Generator
        perturbation_rank: Width of U and V (0 gives an exact inverse pair)
        bound: Entry bound over Q

    Returns:
        Tuple (T, S) of square Mats
    """
    if not 0 <= perturbation_rank <= size:
        raise SpecError(f"Perturbation rank {perturbation_rank} outside 0..{size}")
    T = random_invertible(field, size, rng, bound)
    U = random_rectangular(field, size, perturbation_rank, rng, bound)
    V = random_rectangular(field, size, perturbation_rank, rng, bound)
    return T, inverse(T) + U @ V.T
