"""Immutable simple graphs on dense vertex indices 0..n-1.

Adjacency is kept twice: a bitmask per vertex (bit ``u`` of ``adj[v]`` set iff
``uv`` is an edge) for the set-heavy oracles, and sorted neighbour tuples for
traversal.  Every operation returns a fresh graph.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

__all__ = [
    "Graph",
    "GraphFormatError",
    "parse_graph6",
    "emit_graph6",
    "parse_edge_list",
    "emit_edge_list",
    "emit_dot",
    "parse_graphs",
    "bits",
    "mask_of",
]


class GraphFormatError(ValueError):
    """Malformed graph6 or edge-list input."""


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _canon(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected graph.

    Equality and hashing consider only the order and the edge set; labels and
    the parent map are carried along as metadata.
    """

    __slots__ = ("n", "adj", "labels", "parent", "_edges", "_nbrs")

    def __init__(
        self,
        n: int,
        edges: Iterable[Sequence[int]] = (),
        labels: Sequence[str] | None = None,
        parent: Sequence[int] | None = None,
    ):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        adj = [0] * n
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self._setup(n, tuple(adj), labels, parent)

    def _setup(self, n, adj, labels, parent):
        self.n = n
        self.adj = adj
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise ValueError("one label per vertex required")
        self.labels = labels
        self.parent = tuple(parent) if parent is not None else None
        self._edges = None
        self._nbrs = None

    @classmethod
    def from_masks(cls, n: int, adj: Sequence[int], labels=None, parent=None) -> "Graph":
        """Build from adjacency bitmasks; trusted input (symmetric, loop-free)."""
        g = cls.__new__(cls)
        g._setup(n, tuple(adj), labels, parent)
        return g

    # basic queries ---------------------------------------------------------

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        if self._edges is None:
            out = []
            for u in range(self.n):
                for v in bits(self.adj[u] >> (u + 1)):
                    out.append((u, u + 1 + v))
            self._edges = tuple(out)
        return self._edges

    @property
    def m(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> tuple[int, ...]:
        if self._nbrs is None:
            self._nbrs = tuple(tuple(bits(a)) for a in self.adj)
        return self._nbrs[v]

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and 0 <= v < self.n and bool(self.adj[u] >> v & 1)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    # subgraph algebra --------------------------------------------------------

    def _check_vertices(self, vs: Iterable[int]) -> list[int]:
        out = sorted(set(int(v) for v in vs))
        for v in out:
            if not 0 <= v < self.n:
                raise ValueError(f"vertex {v} out of range for n={self.n}")
        return out

    def induced_subgraph(self, vertices: Iterable[int]) -> "Graph":
        """Subgraph induced on ``vertices``, reindexed densely in sorted order.

        ``parent[i]`` of the result is the index in ``self`` of new vertex i
        (composed with ``self.parent`` when present).
        """
        keep = self._check_vertices(vertices)
        pos = {v: i for i, v in enumerate(keep)}
        adj = []
        for v in keep:
            a = 0
            for u in bits(self.adj[v]):
                i = pos.get(u)
                if i is not None:
                    a |= 1 << i
            adj.append(a)
        labels = [self.labels[v] for v in keep] if self.labels else None
        parent = [self.parent[v] for v in keep] if self.parent else keep
        return Graph.from_masks(len(keep), adj, labels, parent)

    def delete_vertices(self, vertices: Iterable[int]) -> "Graph":
        drop = set(self._check_vertices(vertices))
        return self.induced_subgraph(v for v in range(self.n) if v not in drop)

    def delete_edge(self, e: Sequence[int]) -> "Graph":
        u, v = e
        if not self.has_edge(u, v):
            raise ValueError(f"edge {u}-{v} not in graph")
        adj = list(self.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        return Graph.from_masks(self.n, adj, self.labels, self.parent)

    def delete_edges(self, es: Iterable[Sequence[int]]) -> "Graph":
        adj = list(self.adj)
        for u, v in es:
            if not adj[u] >> v & 1:
                raise ValueError(f"edge {u}-{v} not in graph")
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        return Graph.from_masks(self.n, adj, self.labels, self.parent)

    def add_edges(self, es: Iterable[Sequence[int]]) -> "Graph":
        adj = list(self.adj)
        for u, v in es:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"bad edge {u}-{v}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph.from_masks(self.n, adj, self.labels, self.parent)

    def edge_subgraph(self, es: Iterable[Sequence[int]]) -> "Graph":
        """Spanning subgraph keeping only the listed edges (all must exist)."""
        adj = [0] * self.n
        for u, v in es:
            if not self.adj[u] >> v & 1:
                raise ValueError(f"edge {u}-{v} not in graph")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph.from_masks(self.n, adj, self.labels, self.parent)

    def disjoint_union(self, other: "Graph") -> "Graph":
        s = self.n
        adj = list(self.adj) + [a << s for a in other.adj]
        return Graph.from_masks(self.n + other.n, adj)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def components(self) -> list[list[int]]:
        seen = 0
        out = []
        for s in range(self.n):
            if seen >> s & 1:
                continue
            comp = 1 << s
            frontier = comp
            while frontier:
                nxt = 0
                for v in bits(frontier):
                    nxt |= self.adj[v]
                frontier = nxt & ~comp
                comp |= nxt
            seen |= comp
            out.append(bits(comp))
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def is_bipartite(self) -> bool:
        return bipartition(self) is not None

    # serialisation shortcuts -------------------------------------------------

    def to_graph6(self) -> str:
        return emit_graph6(self)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


def bipartition(g: Graph) -> tuple[list[int], list[int]] | None:
    """Two colour classes if ``g`` is bipartite, else None (lowest index gets side 0)."""
    side = [-1] * g.n
    for s in range(g.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                if side[u] < 0:
                    side[u] = 1 - side[v]
                    stack.append(u)
                elif side[u] == side[v]:
                    return None
    return [v for v in range(g.n) if side[v] == 0], [v for v in range(g.n) if side[v] == 1]


# graph6 --------------------------------------------------------------------

_G6_HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n < 68719476736:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise ValueError("graph too large for graph6")


def emit_graph6(g: Graph) -> str:
    """graph6 string (no header, no newline)."""
    out = [_encode_n(g.n)]
    acc = 0
    nbits = 0
    adj = g.adj
    for j in range(1, g.n):
        aj = adj[j]
        for i in range(j):
            acc = (acc << 1) | (aj >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 line.  Errors name the 0-based byte offset."""
    s = text.strip()
    off = 0
    if s.startswith(_G6_HEADER):
        s = s[len(_G6_HEADER):]
        off = len(_G6_HEADER)
    if not s:
        raise GraphFormatError("empty graph6 string")
    for i, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise GraphFormatError(f"byte {off + i}: {ch!r} out of graph6 range 63..126")
    vals = [ord(c) - 63 for c in s]
    if vals[0] < 63:
        n, pos = vals[0], 1
    elif len(vals) >= 2 and vals[1] == 63:
        if len(vals) < 8:
            raise GraphFormatError(f"byte {off}: truncated 8-byte length field")
        n, pos = 0, 8
        for v in vals[2:8]:
            n = (n << 6) | v
    else:
        if len(vals) < 4:
            raise GraphFormatError(f"byte {off}: truncated 4-byte length field")
        n, pos = 0, 4
        for v in vals[1:4]:
            n = (n << 6) | v
    need = (n * (n - 1) // 2 + 5) // 6
    body = vals[pos:]
    if len(body) != need:
        raise GraphFormatError(
            f"byte {off + pos}: expected {need} data bytes for n={n}, found {len(body)}"
        )
    adj = [0] * n
    k = 0
    total = n * (n - 1) // 2
    i, j = 0, 1
    for bi, b in enumerate(body):
        for shift in range(5, -1, -1):
            bit = b >> shift & 1
            if k < total:
                if bit:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
                i += 1
                if i == j:
                    i, j = 0, j + 1
                k += 1
            elif bit:
                raise GraphFormatError(f"byte {off + pos + bi}: non-zero padding bits")
    return Graph.from_masks(n, adj)


# edge lists ----------------------------------------------------------------

_N_LINE = re.compile(r"^n\s+(\S+)$")


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines (0-based); optional first line ``n <count>``.

    Blank lines and ``#`` comments are ignored; duplicate edges collapse.
    """
    n_decl = None
    edges = set()
    seen_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _N_LINE.match(line)
        if m:
            if seen_data or n_decl is not None:
                raise GraphFormatError(f"line {lineno}: 'n' declaration must come first")
            try:
                n_decl = int(m.group(1))
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad vertex count {m.group(1)!r}")
            if n_decl < 0:
                raise GraphFormatError(f"line {lineno}: negative vertex count")
            continue
        seen_data = True
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer vertex in {line!r}")
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative vertex index")
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop at {u}")
        edges.add(_canon(u, v))
    top = max((max(e) for e in edges), default=-1) + 1
    n = top if n_decl is None else n_decl
    if n < top:
        raise GraphFormatError(f"declared n={n} but edge uses vertex {top - 1}")
    return Graph(n, sorted(edges))


def emit_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def emit_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    lines += [f"  {v};" for v in range(g.n)]
    lines += [f"  {u} -- {v};" for u, v in g.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_graphs(text: str) -> list[Graph]:
    """Auto-detect: graph6 lines (one graph each) or a single edge list."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise GraphFormatError("no graph data")
    if all(" " not in ln and "\t" not in ln for ln in lines):
        return [parse_graph6(ln) for ln in lines]
    return [parse_edge_list(text)]
