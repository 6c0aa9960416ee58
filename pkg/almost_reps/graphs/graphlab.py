"""
Graph Windows
Finite windows of bounded-degree graphs, metric balls, isoperimetric profiles and paradoxical pairs
"""

import math
from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from almost_reps.algebra.carrier import TranslationAlgebra, free_reduce, identity_matrix, matrix_product, reduced_words
from almost_reps.graphs.matching import BipartiteGraph, HopcroftKarp
from almost_reps.linalg.exactlin import Mat
from almost_reps.linalg.field import format_ratio, make_field
from almost_reps.parsers.graph_parser import GraphFileParser
from almost_reps.utils.errors import InvariantError, SpecError, UnsupportedExhaustionError, WindowMarginError


class WindowGraph:
    """Undirected connected graph on vertices 0..n-1, immutable after construction"""

    def __init__(self, n, edges, spec=None, center=0, coords=None, words=None):
        """
        Initialize graph window

        Args:
            n: Number of vertices
            edges: Iterable of (u, v) pairs
            spec: Generator spec the window was built from
            center: Vertex the window is centered at
            coords: Optional grid coordinates per vertex
            words: Optional free-group word per vertex (Cayley windows)
        """
        adjacency = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise SpecError(f"Edge ({u},{v}) outside 0..{n - 1}")
            if u == v:
                continue
            adjacency[u].add(v)
            adjacency[v].add(u)
        self.n = n
        self.adjacency = [tuple(sorted(a)) for a in adjacency]
        self.spec = dict(spec or {"type": "edges"})
        self.center = center
        self.coords = coords
        self.words = words
        self._distances = {}
        self._boundary_distance = None
        self._edges = None
        if n and not 0 <= center < n:
            raise SpecError(f"Center {center} outside the window")
        if n and len(self.distances(center)) != n:
            raise SpecError("Graph window must be connected")

    @property
    def max_degree(self):
        return max((len(a) for a in self.adjacency), default=0)

    def degree(self, v):
        return len(self.adjacency[v])

    def edges(self):
        """Edges (u, v) with u < v, in increasing order"""
        if self._edges is None:
            self._edges = tuple((u, v) for u in range(self.n) for v in self.adjacency[u] if u < v)
        return self._edges

    def _check_vertex(self, v):
        if not 0 <= v < self.n:
            raise SpecError(f"Vertex {v} outside the window of {self.n} vertices")

    def distances(self, source):
        """BFS distances from source (dict vertex -> distance), cached"""
        self._check_vertex(source)
        if source not in self._distances:
            dist = {source: 0}
            queue = deque([source])
            while queue:
                u = queue.popleft()
                for v in self.adjacency[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        queue.append(v)
            self._distances[source] = dist
        return self._distances[source]

    def distance(self, x, y):
        self._check_vertex(y)
        return self.distances(x).get(y, math.inf)

    def ball(self, F, k):
        """
        k-neighborhood of a vertex set

        Args:
            F: Iterable of vertices
            k: Radius

        Returns:
            set of vertices at distance <= k from F
        """
        seen = {}
        queue = deque()
        for v in F:
            self._check_vertex(v)
            if v not in seen:
                seen[v] = 0
                queue.append(v)
        while queue:
            u = queue.popleft()
            if seen[u] == k:
                continue
            for v in self.adjacency[u]:
                if v not in seen:
                    seen[v] = seen[u] + 1
                    queue.append(v)
        return set(seen)

    def boundary(self):
        """Vertices whose degree falls below the maximum degree (cut by the window)"""
        top = self.max_degree
        return [v for v in range(self.n) if len(self.adjacency[v]) < top]

    def boundary_distances(self):
        """Distance of every vertex to the boundary (inf when the window has none)"""
        if self._boundary_distance is None:
            boundary = self.boundary()
            dist = [math.inf] * self.n
            queue = deque(boundary)
            for v in boundary:
                dist[v] = 0
            while queue:
                u = queue.popleft()
                for v in self.adjacency[u]:
                    if dist[v] == math.inf:
                        dist[v] = dist[u] + 1
                        queue.append(v)
            self._boundary_distance = dist
        return self._boundary_distance

    def interior(self, k):
        """Vertices whose whole k-ball in the underlying infinite graph lies inside the window"""
        return [v for v, d in enumerate(self.boundary_distances()) if d >= k]

    def box(self, column, n):
        """n x n grid box around a vertex (grid windows only)"""
        if self.coords is None:
            raise UnsupportedExhaustionError("Box exhaustions need a grid window")
        ci, cj = self.coords[column]
        top, left = ci - n // 2, cj - n // 2
        return grid_box(self, top, left, n)

    def __repr__(self):
        return f"WindowGraph(n={self.n}, spec={self.spec})"


def grid_box(g, top, left, n):
    """Vertices (i, j) of a grid window with top <= i < top+n and left <= j < left+n"""
    side = g.spec["d"]
    if top < 0 or left < 0 or top + n > side or left + n > side:
        raise WindowMarginError(f"Box of side {n} at ({top},{left}) leaves the {side}x{side} window")
    return [i * side + j for i in range(top, top + n) for j in range(left, left + n)]


def centered_grid_box(g, n):
    ci, cj = g.coords[g.center]
    return grid_box(g, ci - n // 2, cj - n // 2, n)


def cycle_arc(g, m, start=0):
    """m consecutive vertices of a cycle window"""
    if m > g.n:
        raise WindowMarginError(f"Arc of length {m} does not fit a cycle of {g.n} vertices")
    return [(start + i) % g.n for i in range(m)]


def _grid(spec):
    d = int(spec.get("d", 0))
    if d < 1:
        raise SpecError("Grid side d must be >= 1")
    edges = []
    for i in range(d):
        for j in range(d):
            v = i * d + j
            if j + 1 < d:
                edges.append((v, v + 1))
            if i + 1 < d:
                edges.append((v, v + d))
    coords = [divmod(v, d) for v in range(d * d)]
    center = (d // 2) * d + d // 2
    return WindowGraph(d * d, edges, {"type": "grid", "d": d}, center=center, coords=coords)


def _tree(spec):
    degree = int(spec.get("degree", 3))
    radius = int(spec.get("radius", 0))
    if degree < 2 or radius < 0:
        raise SpecError("Tree needs degree >= 2 and radius >= 0")
    edges = []
    layer = [0]
    count = 1
    for depth in range(radius):
        next_layer = []
        for v in layer:
            for _ in range(degree if depth == 0 else degree - 1):
                edges.append((v, count))
                next_layer.append(count)
                count += 1
        layer = next_layer
    return WindowGraph(count, edges, {"type": "tree", "degree": degree, "radius": radius})


def _cycle(spec):
    n = int(spec.get("n", 0))
    if n < 3:
        raise SpecError("Cycle needs n >= 3")
    return WindowGraph(n, [(i, (i + 1) % n) for i in range(n)], {"type": "cycle", "n": n})


def _cayley(spec):
    rank = int(spec.get("rank", 2))
    radius = int(spec.get("radius", 0))
    if rank < 1 or radius < 0:
        raise SpecError("Cayley window needs rank >= 1 and radius >= 0")
    words = [w for length in range(radius + 1) for w in reduced_words(rank, length)]
    index = {w: i for i, w in enumerate(words)}
    edges = []
    for w, i in index.items():
        for g in range(1, rank + 1):
            neighbor = free_reduce(w + (g,))
            if neighbor in index:
                edges.append((i, index[neighbor]))
    return WindowGraph(len(words), edges, {"type": "cayley", "rank": rank, "radius": radius}, words=words)


def _file(spec):
    if "path" not in spec:
        raise SpecError("File graph spec needs a path")
    n, edges = GraphFileParser(spec["path"]).parse()
    return WindowGraph(n, edges, {"type": "file", "path": str(spec["path"])}, center=int(spec.get("center", 0)))


GENERATORS = {
    "grid": _grid,
    "tree": _tree,
    "cycle": _cycle,
    "cayley": _cayley,
    "file": _file,
}


def gen_graph(spec):
    """
    Deterministic graph window from a generator spec

    Args:
        spec: dict such as {"type": "grid", "d": 5}, {"type": "tree", "degree": 3, "radius": 3},
            {"type": "cycle", "n": 10}, {"type": "cayley", "rank": 2, "radius": 3}
            or {"type": "file", "path": "graph.txt"}; a plain string is read as a file path

    Returns:
        WindowGraph
    """
    if isinstance(spec, str):
        spec = {"type": "file", "path": spec}
    if not isinstance(spec, dict) or spec.get("type") not in GENERATORS:
        raise SpecError(f"Invalid graph generator spec: {spec!r}")
    try:
        return GENERATORS[spec["type"]](spec)
    except (TypeError, ValueError) as e:
        if isinstance(e, SpecError):
            raise
        raise SpecError(f"Invalid graph generator spec {spec!r}: {e}") from e


def iso_profile(g, exhaustion, k):
    """
    Isoperimetric ratios |B_k(F)| / |F|

    Args:
        g: WindowGraph
        exhaustion: List of vertex sets, each inside interior(k)
        k: Radius

    Returns:
        list of Fraction
    """
    interior = set(g.interior(k))
    ratios = []
    for F in exhaustion:
        F = set(F)
        if not F:
            raise SpecError("Isoperimetric ratio of an empty set")
        outside = F - interior
        if outside:
            raise WindowMarginError(f"{len(outside)} vertices lie within distance {k} of the window boundary")
        ratios.append(Fraction(len(g.ball(F, k)), len(F)))
    return ratios


@dataclass
class ParadoxicalPair:
    """
    Bounded-displacement maps phi1, phi2 with disjoint images.

    The domain is the set of interior vertices whose two copies were both matched;
    phi1 and phi2 are restricted to it.
    """

    graph: WindowGraph
    K: int
    phi1: dict
    phi2: dict
    interior: list = dc_field(default_factory=list)
    core: list = dc_field(default_factory=list)
    deficiency: int = 0
    deficient_vertices: list = dc_field(default_factory=list)
    success: bool = True
    boundary_shells: int = 2

    @property
    def domain(self):
        return sorted(set(self.phi1) & set(self.phi2))

    @property
    def V1(self):
        return sorted({self.phi1[y] for y in self.domain})

    @property
    def V2(self):
        return sorted({self.phi2[y] for y in self.domain})

    @property
    def matched_region(self):
        return sorted(set(self.V1) | set(self.V2))

    @property
    def normalized_deficiency(self):
        if not self.interior:
            return Fraction(0)
        return Fraction(self.deficiency, len(self.interior))

    @property
    def max_displacement(self):
        d = [self.graph.distance(y, self.phi1[y]) for y in self.domain]
        d += [self.graph.distance(y, self.phi2[y]) for y in self.domain]
        return max(d, default=0)

    @property
    def deficiency_confined(self):
        """Every deficient vertex lies in the outermost boundary shells of the interior"""
        limit = self.K + self.boundary_shells
        dist = self.graph.boundary_distances()
        return all(dist[v] < limit for v in self.deficient_vertices)

    def matrix(self, which, field=None):
        """0/1 matrix with entry (x, y) = 1 iff x = phi(y), y in the domain"""
        field = make_field(field)
        phi = self.phi1 if which == 1 else self.phi2
        data = field.zeros(self.graph.n, self.graph.n)
        for y in self.domain:
            data[phi[y], y] = 1
        return Mat(data, field)

    def to_dict(self):
        domain = self.domain
        return {
            "graph": self.graph.spec,
            "K": self.K,
            "success": self.success,
            "interior_size": len(self.interior),
            "window_size": self.graph.n,
            "domain_size": len(domain),
            "deficiency": self.deficiency,
            "normalized_deficiency": format_ratio(self.normalized_deficiency),
            "deficiency_confined": self.deficiency_confined,
            "max_displacement": self.max_displacement,
            "V1": self.V1,
            "V2": self.V2,
            "phi1": [[y, self.phi1[y]] for y in domain],
            "phi2": [[y, self.phi2[y]] for y in domain],
            "A": [[self.phi1[y], y] for y in domain],
            "B": [[self.phi2[y], y] for y in domain],
        }


def paradoxical_pair(g, K, boundary_shells=2):
    """
    Doubling maps of the interior by maximum bipartite matching

    Left side: two tagged copies of interior(K); right side: all window vertices;
    edges join a copy of y to every x with d(x, y) <= K. Vertices deep inside the
    window (boundary distance >= K + boundary_shells) are matched first, the rest
    are then added by augmenting paths that never unmatch them.

    Args:
        g: WindowGraph
        K: Displacement bound >= 1
        boundary_shells: Depth of the shells next to the interior boundary where deficiency is tolerated

    Returns:
        ParadoxicalPair; success means every core copy is matched
    """
    if g.n == 0:
        raise SpecError("Cannot build a paradoxical pair on an empty graph")
    if K < 1:
        raise SpecError("Displacement bound K must be >= 1")
    from_center = g.distances(g.center)
    interior = sorted(g.interior(K), key=lambda v: (from_center.get(v, math.inf), v))
    dist_boundary = g.boundary_distances()
    core = [v for v in interior if dist_boundary[v] >= K + boundary_shells]

    adj = []
    for y in interior:
        dist = g.distances(y)
        targets = sorted((x for x, d in dist.items() if d <= K),
                         key=lambda x: (dist[x], from_center.get(x, math.inf), x))
        adj.append(targets)
        adj.append(targets)
    matcher = HopcroftKarp(BipartiteGraph(2 * len(interior), g.n, adj))
    position = {v: i for i, v in enumerate(interior)}
    matcher.maximize(active={2 * position[v] + t for v in core for t in (0, 1)})
    matcher.maximize()

    phi1, phi2 = {}, {}
    deficient = []
    deficiency = 0
    for i, y in enumerate(interior):
        a, b = matcher.match_u[2 * i], matcher.match_u[2 * i + 1]
        if a >= 0:
            phi1[y] = a
        if b >= 0:
            phi2[y] = b
        missing = (a < 0) + (b < 0)
        if missing:
            deficiency += missing
            deficient.append(y)
    core_set = set(core)
    success = not any(y in core_set for y in deficient)
    return ParadoxicalPair(graph=g, K=K, phi1=phi1, phi2=phi2, interior=interior, core=core,
                           deficiency=deficiency, deficient_vertices=deficient, success=success,
                           boundary_shells=boundary_shells)


def paradox_scan(g, ks=(1, 2, 3), boundary_shells=2):
    return [paradoxical_pair(g, K, boundary_shells) for K in ks]


@dataclass
class IdentityReport:
    """Exact identity checks of a pair, restricted to its domain D and matched region M"""

    checks: dict
    violations: dict
    as_written: dict
    empty: bool
    displacement_ok: bool

    @property
    def passed(self):
        return all(self.checks.values()) and self.displacement_ok

    def to_dict(self):
        return {
            "checks": self.checks,
            "violations": self.violations,
            "as_written": self.as_written,
            "empty": self.empty,
            "displacement_ok": self.displacement_ok,
            "pass": self.passed,
        }


def _indicator(field, n, vertices):
    data = field.zeros(n, n)
    for v in vertices:
        data[v, v] = 1
    return Mat(data, field)


def _violating(diff):
    return sorted(int(i) for i in np.nonzero(np.any(diff.data != 0, axis=1))[0])


def verify_pair(pair, field=None):
    """
    Check AᵀA = I_D, BᵀB = I_D, AAᵀ + BBᵀ = I_M, AᵀB = 0 and BᵀA = 0 exactly

    The identities as literally stated with A(x, y) = 1 iff x = phi1(y), namely
    AAᵀ = I, BBᵀ = I and AᵀA + BᵀB = I on the matched region, are evaluated too
    and recorded under as_written.

    Args:
        pair: ParadoxicalPair
        field: Field for the 0/1 arithmetic (default GF(32003))

    Returns:
        IdentityReport
    """
    field = make_field(field)
    n = pair.graph.n
    A, B = pair.matrix(1, field), pair.matrix(2, field)
    I_D = _indicator(field, n, pair.domain)
    I_M = _indicator(field, n, pair.matched_region)
    zero = Mat.zeros(field, n, n)

    diffs = {
        "AtA=I": A.T @ A - I_D,
        "BtB=I": B.T @ B - I_D,
        "AAt+BBt=I": A @ A.T + B @ B.T - I_M,
        "AtB=0": A.T @ B - zero,
        "BtA=0": B.T @ A - zero,
    }
    checks = {name: d.is_zero() for name, d in diffs.items()}
    violations = {name: _violating(d) for name, d in diffs.items() if not d.is_zero()}

    region = sorted(set(pair.domain) | set(pair.matched_region))
    I_R = _indicator(field, n, region)
    as_written = {
        "AAt=I": (A @ A.T - I_R).is_zero(),
        "BBt=I": (B @ B.T - I_R).is_zero(),
        "AtA+BtB=I": (A.T @ A + B.T @ B - I_R).is_zero(),
    }
    return IdentityReport(checks=checks, violations=violations, as_written=as_written,
                          empty=not pair.domain, displacement_ok=pair.max_displacement <= pair.K)


@dataclass
class NonIBNWitness:
    """U = [Aᵀ; Bᵀ] (2x1) and W = [A, B] (1x2) over a translation algebra with WU = 1 and UW = 1"""

    carrier: TranslationAlgebra
    U: list
    W: list
    WU: list
    UW: list
    wu_identity: bool
    uw_identity: bool

    @property
    def passed(self):
        return self.wu_identity and self.uw_identity

    def to_dict(self):
        return {
            "propagation": self.carrier.propagation_bound,
            "entry_propagation": [self.carrier.propagation(e) for row in self.W for e in row],
            "WU=I1": self.wu_identity,
            "UW=I2": self.uw_identity,
            "pass": self.passed,
        }


def non_ibn_witness(pair, field=None):
    """
    Matrices over the translation algebra certifying R = R^2 on the matched region

    Args:
        pair: ParadoxicalPair passing verify_pair
        field: Field of the translation algebra

    Returns:
        NonIBNWitness

    Raises:
        InvariantError: the pair failed or its identities do not hold
    """
    if not pair.success:
        raise InvariantError(f"No valid paradoxical pair: deficiency {pair.deficiency} reaches the core")
    report = verify_pair(pair, field)
    if not report.passed:
        raise InvariantError(f"Pair identities fail: {sorted(k for k, v in report.checks.items() if not v)}")
    if report.empty:
        raise InvariantError("Paradoxical pair has an empty domain")

    carrier = TranslationAlgebra(pair.graph, field, propagation=pair.K)
    domain = pair.domain
    A = carrier.from_map({y: pair.phi1[y] for y in domain})
    B = carrier.from_map({y: pair.phi2[y] for y in domain})
    U = [[carrier.transpose(A)], [carrier.transpose(B)]]
    W = [[A, B]]
    WU = matrix_product(carrier, W, U)
    UW = matrix_product(carrier, U, W)
    wu_identity = WU == identity_matrix(carrier, 1, carrier.diagonal(pair.matched_region))
    uw_identity = UW == identity_matrix(carrier, 2, carrier.diagonal(domain))
    return NonIBNWitness(carrier=carrier, U=U, W=W, WU=WU, UW=UW, wu_identity=wu_identity, uw_identity=uw_identity)
