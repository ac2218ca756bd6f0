"""Tree templates, tree isomorphism, and tree-factor verification/assembly.

A *T-factor* of a host graph on n vertices (t | n) is a collection of n/t
vertex-disjoint copies of the fixed tree T whose vertex sets cover every
host vertex.  Copies carry explicit edge lists because they need not be
induced subgraphs of the host.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import FormatError
from .graphs import Graph


@dataclass(frozen=True)
class TreeTemplate:
    """A fixed tree on vertices {0..t-1}; validated connected and acyclic."""

    t: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.t <= 0:
            raise ValueError(f"tree must have at least one vertex, got t={self.t}")
        norm = []
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop ({u}, {v}) in tree edges")
            if not (0 <= u < self.t and 0 <= v < self.t):
                raise ValueError(f"tree edge ({u}, {v}) out of range for t={self.t}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate tree edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(norm))
        if len(norm) != self.t - 1:
            raise ValueError(f"a tree on {self.t} vertices needs exactly {self.t - 1} edges")
        if self.t > 1 and len(_component_of(self.t, norm, 0)) != self.t:
            raise ValueError("tree edges do not form a connected graph")

    @classmethod
    def path(cls, t: int) -> "TreeTemplate":
        return cls(t, tuple((i, i + 1) for i in range(t - 1)))

    @classmethod
    def star(cls, t: int) -> "TreeTemplate":
        return cls(t, tuple((0, i) for i in range(1, t)))

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.t)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


def _component_of(n: int, edges, start: int) -> set[int]:
    adj = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen = {start}
    todo = deque([start])
    while todo:
        x = todo.popleft()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


# -- isomorphism (canonical form rooted at the tree center) ---------------------


def _centers(tree: TreeTemplate) -> list[int]:
    """The one or two middle vertices left by repeated leaf peeling."""
    t = tree.t
    if t == 1:
        return [0]
    adj = tree.adjacency()
    degree = [len(a) for a in adj]
    layer = [v for v in range(t) if degree[v] == 1]
    remaining = t
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for leaf in layer:
            for w in adj[leaf]:
                degree[w] -= 1
                if degree[w] == 1:
                    nxt.append(w)
            degree[leaf] = 0
        layer = nxt
    return sorted(layer)


def _rooted_code(tree: TreeTemplate, root: int) -> str:
    """Canonical parenthesis encoding of the tree rooted at ``root``.

    Children codes are sorted at every vertex, so the string is invariant
    under relabeling.  Computed iteratively (reverse BFS order) to stay
    safe on path-like trees of any length.
    """
    adj = tree.adjacency()
    order = [root]
    parent = [-1] * tree.t
    parent[root] = root
    for x in order:
        for y in adj[x]:
            if parent[y] == -1:
                parent[y] = x
                order.append(y)
    code = [""] * tree.t
    children: list[list[str]] = [[] for _ in range(tree.t)]
    for x in reversed(order):
        code[x] = "(" + "".join(sorted(children[x])) + ")"
        if x != root:
            children[parent[x]].append(code[x])
    return code[root]


def canonical_form(tree: TreeTemplate) -> str:
    codes = sorted(_rooted_code(tree, c) for c in _centers(tree))
    return "|".join(codes)


def ahu_isomorphic(a: TreeTemplate, b: TreeTemplate) -> bool:
    """True iff a and b are isomorphic as unlabeled trees."""
    if a.t != b.t:
        return False
    return canonical_form(a) == canonical_form(b)


# -- tree factors ----------------------------------------------------------------


@dataclass(frozen=True)
class TFactor:
    """n/t vertex-disjoint tree copies; each copy is (vertices, edges) in
    host coordinates, with the explicit witness edges."""

    copies: tuple[tuple[tuple[int, ...], tuple[tuple[int, int], ...]], ...]

    @property
    def num_copies(self) -> int:
        return len(self.copies)

    def edge_set(self) -> set[tuple[int, int]]:
        out = set()
        for _, edges in self.copies:
            for u, v in edges:
                out.add((u, v) if u < v else (v, u))
        return out

    def vertex_list(self) -> list[int]:
        return [v for verts, _ in self.copies for v in verts]


@dataclass(frozen=True)
class FactorVerdict:
    ok: bool
    code: str  # "ok", "size_mismatch", "malformed_copy", "overlap",
    #            "not_spanning", "missing_host_edge", "not_isomorphic"
    copy_index: int | None = None
    witness: tuple | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "code": self.code,
            "copy_index": self.copy_index,
            "witness": list(self.witness) if self.witness is not None else None,
            "message": self.message,
        }


_OK = FactorVerdict(True, "ok", message="valid factor")


def verify_tfactor(g: Graph, template: TreeTemplate, factor: TFactor) -> FactorVerdict:
    """Check the three factor invariants against g, reporting the first
    violation with a witness.

    Order of checks: copy count (n/t), per-copy shape, vertex disjointness
    and coverage, edge membership (copy edges must join copy vertices and
    exist in g), isomorphism of each copy to the template.
    """
    t = template.t
    if g.n % t != 0:
        return FactorVerdict(False, "size_mismatch", message=f"t={t} does not divide n={g.n}")
    expected = g.n // t
    if factor.num_copies != expected:
        return FactorVerdict(
            False,
            "size_mismatch",
            message=f"expected {expected} copies, got {factor.num_copies}",
        )
    for ci, (verts, edges) in enumerate(factor.copies):
        if len(verts) != t or len(set(verts)) != t or len(edges) != t - 1:
            return FactorVerdict(
                False, "malformed_copy", ci, message=f"copy {ci} is not t vertices / t-1 edges"
            )
        if any(not 0 <= v < g.n for v in verts):
            return FactorVerdict(
                False, "malformed_copy", ci, message=f"copy {ci} has an out-of-range vertex"
            )
    seen: dict[int, int] = {}
    for ci, (verts, _) in enumerate(factor.copies):
        for v in verts:
            if v in seen:
                return FactorVerdict(
                    False,
                    "overlap",
                    ci,
                    witness=(v,),
                    message=f"vertex {v} appears in copies {seen[v]} and {ci}",
                )
            seen[v] = ci
    if len(seen) != g.n:
        missing = min(set(range(g.n)) - seen.keys())
        return FactorVerdict(
            False, "not_spanning", witness=(missing,), message=f"vertex {missing} uncovered"
        )
    for ci, (verts, edges) in enumerate(factor.copies):
        index = {v: k for k, v in enumerate(verts)}
        local = []
        for u, v in edges:
            if u not in index or v not in index:
                return FactorVerdict(
                    False,
                    "missing_host_edge",
                    ci,
                    witness=(u, v),
                    message=f"copy {ci} edge ({u}, {v}) leaves its vertex set",
                )
            if not g.has_edge(u, v):
                return FactorVerdict(
                    False,
                    "missing_host_edge",
                    ci,
                    witness=(u, v),
                    message=f"copy {ci} edge ({u}, {v}) is not a host edge",
                )
            local.append((index[u], index[v]))
        try:
            copy_tree = TreeTemplate(t, tuple(local))
        except ValueError:
            return FactorVerdict(
                False, "not_isomorphic", ci, message=f"copy {ci} edges do not form a tree"
            )
        if not ahu_isomorphic(copy_tree, template):
            return FactorVerdict(
                False, "not_isomorphic", ci, message=f"copy {ci} is not isomorphic to the template"
            )
    return _OK


def _assemble_copies(part_vertices, template: TreeTemplate, matchings) -> list:
    """Combine one perfect matching per tree edge into tree copies.

    ``part_vertices[a]`` lists the host vertices standing for tree vertex a;
    ``matchings[k]`` is the matching for ``template.edges[k]`` given as
    (u, v) pairs with u on the lower-indexed tree side.  Returns the copies
    as (vertices, edges) tuples; copy vertices are ordered by tree vertex,
    which downstream assembly relies on.
    """
    t = template.t
    size = len(part_vertices[0])
    maps = []
    for k, (a, b) in enumerate(template.edges):
        part_a = set(part_vertices[a])
        part_b = set(part_vertices[b])
        fwd = {}
        for u, v in matchings[k]:
            if u in part_a and v in part_b:
                pass
            elif v in part_a and u in part_b:
                u, v = v, u
            else:
                raise ValueError(
                    f"matching {k} pairs ({u}, {v}) outside parts of tree edge ({a}, {b})"
                )
            if u in fwd:
                raise ValueError(f"matching {k} uses vertex {u} twice")
            fwd[u] = v
        if len(fwd) != size or set(fwd.values()) != part_b:
            raise ValueError(f"matching {k} is not a perfect matching for tree edge ({a}, {b})")
        maps.append(fwd)

    # walk the template from vertex 0; matchings are bijections, so each
    # start vertex extends to exactly one copy
    bfs_edges = []
    adj = [[] for _ in range(t)]
    for k, (a, b) in enumerate(template.edges):
        adj[a].append((b, k, True))
        adj[b].append((a, k, False))
    placed = [False] * t
    placed[0] = True
    todo = deque([0])
    while todo:
        x = todo.popleft()
        for y, k, forward in adj[x]:
            if not placed[y]:
                placed[y] = True
                bfs_edges.append((x, y, k, forward))
                todo.append(y)

    inv_maps = [{v: u for u, v in m.items()} for m in maps]
    copies = []
    for start in sorted(part_vertices[0]):
        member = [-1] * t
        member[0] = int(start)
        for x, y, k, forward in bfs_edges:
            step = maps[k] if forward else inv_maps[k]
            member[y] = step[member[x]]
        edges = tuple((member[a], member[b]) for a, b in template.edges)
        copies.append((tuple(member), edges))
    return copies


def assemble_factor(layout, template: TreeTemplate, matchings) -> TFactor:
    """Union one perfect matching per tree edge into a full T-factor.

    ``matchings`` aligns with ``template.edges``; the matching for tree
    edge (a, b) must be perfect between layout parts a and b.  The copies
    are the connected components of the union, one vertex per part.
    """
    if layout.t != template.t:
        raise ValueError(f"layout has {layout.t} parts, template has {template.t} vertices")
    if len(matchings) != len(template.edges):
        raise ValueError(f"need {len(template.edges)} matchings, got {len(matchings)}")
    parts = [layout.parts[i].tolist() for i in range(layout.t)]
    copies = _assemble_copies(parts, template, matchings)
    return TFactor(tuple(copies))


# -- tree file format --------------------------------------------------------------
#
# First line "t", then t-1 lines "i j" with 0 <= i < j < t.


def read_tree(path) -> TreeTemplate:
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise FormatError("empty file", line=1)
    try:
        t = int(lines[0].strip())
    except ValueError:
        raise FormatError("expected vertex count 't'", line=1) from None
    edges = []
    for idx, text in enumerate(lines[1:], start=2):
        parts = text.split()
        if len(parts) != 2:
            raise FormatError(f"expected 'i j', got {text!r}", line=idx)
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise FormatError(f"non-integer endpoint in {text!r}", line=idx) from None
    try:
        return TreeTemplate(t, tuple(edges))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def write_tree(template: TreeTemplate, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{template.t}\n")
        for u, v in template.edges:
            fh.write(f"{u} {v}\n")
