"""Independent brute-force oracles used by the test suite.

Everything here recomputes passage times from first principles: weights are
read edge by edge through the scalar API, passage times come from exhaustive
self-avoiding-path enumeration or plain Bellman-Ford value iteration, and
geodesic-graph markings follow the defining relation directly.  None of it
shares code with the library's search engine.
"""

from fpplab.geometry import HORIZONTAL, VERTICAL, Edge, Window, edge_between


def weight_table(env, box: Window, membership=None) -> dict:
    """Edge -> weight for all in-box edges (scalar queries only)."""
    def inside(v):
        return box.contains(v) and (membership is None or membership.contains(v))

    wt = {}
    for x in range(box.x0, box.x1 + 1):
        for y in range(box.y0, box.y1 + 1):
            if not inside((x, y)):
                continue
            if inside((x + 1, y)):
                e = Edge((x, y), HORIZONTAL)
                wt[e] = env.weight(e)
            if inside((x, y + 1)):
                e = Edge((x, y), VERTICAL)
                wt[e] = env.weight(e)
    return wt


def adjacency(wt: dict) -> dict:
    adj: dict = {}
    for e in wt:
        a, b = e.endpoints
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    return adj


def enumerate_sap_times(wt: dict, x, y):
    """All self-avoiding paths x ~> y with times summed in path order."""
    adj = adjacency(wt)
    if x not in adj and x != y:
        return []
    out = []
    path = [x]
    on_path = {x}

    def visit(v, t):
        if v == y:
            out.append((tuple(path), t))
            return
        for nb in adj.get(v, ()):
            if nb in on_path:
                continue
            path.append(nb)
            on_path.add(nb)
            visit(nb, t + wt[edge_between(v, nb)])
            path.pop()
            on_path.remove(nb)

    if x == y:
        return [((x,), 0.0)]
    visit(x, 0.0)
    return out


def sap_passage(wt: dict, x, y):
    """(min time, list of optimal vertex tuples) by full enumeration."""
    times = enumerate_sap_times(wt, x, y)
    if not times:
        return None, []
    best = min(t for _, t in times)
    return best, [p for p, t in times if t == best]


def bellman_ford(wt: dict, root) -> dict:
    """Exact distances to root by value iteration (no priority queue)."""
    adj = adjacency(wt)
    dist = {v: float("inf") for v in adj}
    dist[root] = 0.0
    changed = True
    while changed:
        changed = False
        for e, w in wt.items():
            a, b = e.endpoints
            if dist[a] + w < dist[b]:
                dist[b] = dist[a] + w
                changed = True
            if dist[b] + w < dist[a]:
                dist[a] = dist[b] + w
                changed = True
    return dist


def eta_marks(wt: dict, dist: dict) -> set:
    """Directed geodesic-graph edges: (x, y) iff dist[x] == w + dist[y].

    This is the defining relation: a geodesic from x through {x, y} shows the
    'if', and suffix-optimality of geodesics shows the 'only if'.
    """
    marks = set()
    for e, w in wt.items():
        a, b = e.endpoints
        da, db = dist[a], dist[b]
        if da == w + db and da != float("inf"):
            marks.add((a, b))
        if db == w + da and db != float("inf"):
            marks.add((b, a))
    return marks


def lex_tie_break_path(wt: dict, dist: dict, x, y):
    """Documented backtrack for atomless laws: lex-min strict parent."""
    path = [y]
    cur = y
    guard = len(dist) + 1
    while cur != x:
        cands = []
        for nb in adjacency(wt).get(cur, ()):
            if dist[nb] < dist[cur] and dist[nb] + wt[edge_between(nb, cur)] == dist[cur]:
                cands.append(nb)
        if not cands:
            raise AssertionError(f"no strict parent at {cur}")
        cur = min(cands)
        path.append(cur)
        guard -= 1
        if guard < 0:
            raise AssertionError("backtrack cycled")
    return tuple(reversed(path))
