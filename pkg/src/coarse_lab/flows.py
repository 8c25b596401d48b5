"""Integer maximum flow on small directed graphs (Dinic's algorithm).

Nodes are arbitrary hashable labels added in a deterministic order; all
capacities are nonnegative integers, so every maximum flow found here is
integral.  This backs both the doubling matchings and the transshipment
feasibility solves.
"""

from __future__ import annotations

from collections import deque


class FlowNetwork:
    def __init__(self):
        self._id: dict = {}
        self.labels: list = []
        self.adj: list[list[int]] = []
        # parallel arrays: to[e], cap[e]; e ^ 1 is the reverse arc
        self.to: list[int] = []
        self.cap: list[int] = []

    def node(self, label) -> int:
        i = self._id.get(label)
        if i is None:
            i = len(self.labels)
            self._id[label] = i
            self.labels.append(label)
            self.adj.append([])
        return i

    def add_edge(self, u, v, capacity: int) -> int:
        """Add a directed arc u -> v; returns the arc index for flow queries."""
        if capacity < 0:
            raise ValueError("capacity must be nonnegative")
        iu, iv = self.node(u), self.node(v)
        e = len(self.to)
        self.to.append(iv)
        self.cap.append(capacity)
        self.adj[iu].append(e)
        self.to.append(iu)
        self.cap.append(0)
        self.adj[iv].append(e + 1)
        return e

    def flow_on(self, e: int) -> int:
        return self.cap[e ^ 1]

    def max_flow(self, source, sink) -> int:
        s, t = self.node(source), self.node(sink)
        n = len(self.labels)
        total = 0
        INF = float("inf")
        while True:
            level = [-1] * n
            level[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for e in self.adj[u]:
                    v = self.to[e]
                    if self.cap[e] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        queue.append(v)
            if level[t] < 0:
                return total
            it = [0] * n

            def dfs(u: int, pushed):
                if u == t:
                    return pushed
                while it[u] < len(self.adj[u]):
                    e = self.adj[u][it[u]]
                    v = self.to[e]
                    if self.cap[e] > 0 and level[v] == level[u] + 1:
                        got = dfs(v, min(pushed, self.cap[e]))
                        if got:
                            self.cap[e] -= got
                            self.cap[e ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                pushed = dfs(s, INF)
                if not pushed:
                    break
                total += pushed

    def source_side(self, source) -> set:
        """Labels reachable from the source in the residual graph (a min cut)."""
        s = self.node(source)
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = self.to[e]
                if self.cap[e] > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return {self.labels[i] for i in seen}
