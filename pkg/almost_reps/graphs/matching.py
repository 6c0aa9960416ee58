"""
Bipartite Matching
Hopcroft-Karp maximum matching with deterministic vertex order and warm starts
"""

from collections import deque

NIL = -1


class BipartiteGraph:
    """
    Bipartite graph with left vertices 0..num_u-1 and right vertices 0..num_v-1.

    Adjacency order is kept as given; it decides which maximum matching is found.
    """

    def __init__(self, num_u, num_v, adj_u):
        """
        Initialize bipartite graph

        Args:
            num_u: Number of left vertices
            num_v: Number of right vertices
            adj_u: Per left vertex, the ordered list of adjacent right vertices
        """
        if len(adj_u) != num_u:
            raise ValueError(f"Expected {num_u} adjacency lists, got {len(adj_u)}")
        for u, row in enumerate(adj_u):
            for v in row:
                if not 0 <= v < num_v:
                    raise ValueError(f"Right vertex {v} of left vertex {u} out of range")
        self.num_u = num_u
        self.num_v = num_v
        self.adj_u = [list(row) for row in adj_u]


class HopcroftKarp:
    """Maximum-cardinality matching; matched left vertices stay matched across calls"""

    def __init__(self, graph):
        self.graph = graph
        self.match_u = [NIL] * graph.num_u
        self.match_v = [NIL] * graph.num_v
        self._inf = graph.num_u + 1
        self._dist = [0] * graph.num_u
        self._ptr = [0] * graph.num_u

    def _layer(self, active):
        """BFS layering from the free active left vertices; True if a free right vertex is reachable"""
        inf = self._inf
        queue = deque()
        for u in range(self.graph.num_u):
            if self.match_u[u] == NIL and active[u]:
                self._dist[u] = 0
                queue.append(u)
            else:
                self._dist[u] = inf
        found = False
        while queue:
            u = queue.popleft()
            for v in self.graph.adj_u[u]:
                w = self.match_v[v]
                if w == NIL:
                    found = True
                elif self._dist[w] == inf:
                    self._dist[w] = self._dist[u] + 1
                    queue.append(w)
        return found

    def _augment(self, root):
        """Iterative DFS along the layering; flips the path when a free right vertex is hit"""
        stack = [root]
        path = []
        while stack:
            u = stack[-1]
            adj = self.graph.adj_u[u]
            advanced = False
            while self._ptr[u] < len(adj):
                v = adj[self._ptr[u]]
                self._ptr[u] += 1
                w = self.match_v[v]
                if w == NIL:
                    path.append(v)
                    for uu, vv in zip(stack, path):
                        self.match_u[uu] = vv
                        self.match_v[vv] = uu
                    return True
                if self._dist[w] == self._dist[u] + 1:
                    path.append(v)
                    stack.append(w)
                    advanced = True
                    break
            if not advanced:
                self._dist[u] = self._inf
                stack.pop()
                if path:
                    path.pop()
        return False

    def maximize(self, active=None):
        """
        Grow the current matching to a maximum one

        Args:
            active: Optional set of left vertices allowed to start augmenting paths;
                None means all of them

        Returns:
            int: Number of matched left vertices
        """
        n = self.graph.num_u
        flags = [True] * n if active is None else [u in active for u in range(n)]
        while self._layer(flags):
            self._ptr = [0] * n
            progressed = False
            for u in range(n):
                if self.match_u[u] == NIL and flags[u] and self._augment(u):
                    progressed = True
            if not progressed:
                break
        return self.size()

    def size(self):
        return sum(1 for v in self.match_u if v != NIL)

    def pairs(self):
        return [(u, v) for u, v in enumerate(self.match_u) if v != NIL]
