"""Random graph generation: Erdos-Renyi and static-model scale-free ensembles.

Every generator is a pure function of (spec, seed): the same spec always
produces the same edge list, on any machine and with any worker count.
Node indices are 0-based; self-pairs never appear in a Topology (self-dynamics
are handled by the dynamics module, not the topology).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class InvalidSpecError(ValueError):
    """The graph spec asks for something impossible (e.g. edge probability > 1)."""


class GenerationStalledError(RuntimeError):
    """Edge-count target could not be reached within the retry cap."""


@dataclass(frozen=True)
class Topology:
    """A simple graph: N nodes plus an edge list of (source, target) pairs.

    Undirected graphs store each unordered pair exactly once, as (min, max).
    """

    n_nodes: int
    directed: bool
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for s, t in self.edges:
            if s == t:
                raise ValueError(f"self-pair ({s},{s}) not allowed in a Topology")
            if not (0 <= s < self.n_nodes and 0 <= t < self.n_nodes):
                raise ValueError(f"edge ({s},{t}) out of range for N={self.n_nodes}")
            key = (s, t) if self.directed else (min(s, t), max(s, t))
            if key in seen:
                raise ValueError(f"duplicate edge ({s},{t})")
            if not self.directed and (s, t) != key:
                raise ValueError(f"undirected edge ({s},{t}) not stored as (min,max)")
            seen.add(key)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class GraphSpec:
    model: str  # "er" or "sf"
    n_nodes: int
    mean_degree: float
    gamma: float = 3.0  # SF power-law exponent, must be > 2
    directed: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.model not in ("er", "sf"):
            raise InvalidSpecError(f"unknown model {self.model!r}")
        if self.n_nodes < 1:
            raise InvalidSpecError("n_nodes must be >= 1")
        if self.mean_degree < 0:
            raise InvalidSpecError("mean_degree must be >= 0")
        if self.n_nodes > 1 and self.mean_degree > self.n_nodes - 1:
            raise InvalidSpecError(
                f"mean_degree {self.mean_degree} too large for N={self.n_nodes}"
            )
        if self.model == "sf" and self.gamma <= 2:
            raise InvalidSpecError("gamma must be > 2 for scale-free graphs")


def generate_er(spec: GraphSpec) -> Topology:
    """G(N, p) with p chosen so the mean total degree is spec.mean_degree.

    Undirected: each unordered pair independently with p = <k>/(N-1).
    Directed: each ordered pair with p = <k>/(2(N-1)), so in+out degree
    still averages <k>.
    """
    if spec.model != "er":
        raise InvalidSpecError("generate_er requires model='er'")
    n = spec.n_nodes
    if n == 1 or spec.mean_degree == 0:
        return Topology(n, spec.directed, ())
    p = spec.mean_degree / (n - 1)
    if spec.directed:
        p /= 2.0
    if p > 1.0:
        raise InvalidSpecError(f"edge probability {p} > 1")
    rng = np.random.default_rng(spec.seed)
    edges = []
    if spec.directed:
        for i in range(n):
            mask = rng.random(n) < p
            mask[i] = False
            for j in np.flatnonzero(mask):
                edges.append((i, int(j)))
    else:
        for i in range(n - 1):
            mask = rng.random(n - 1 - i) < p
            for off in np.flatnonzero(mask):
                edges.append((i, i + 1 + int(off)))
    return Topology(n, spec.directed, tuple(edges))


# Multiplier on the target edge count before generate_sf gives up.
SF_RETRY_FACTOR = 500


def generate_sf(spec: GraphSpec) -> Topology:
    """Static-model scale-free graph with tunable exponent gamma.

    Node i carries fitness (i+1)^(-alpha) with alpha = 1/(gamma-1); node
    pairs are sampled with probability proportional to the fitness product
    and inserted (skipping duplicates and self-pairs) until the target count
    floor(N*<k>/2) is reached.
    """
    if spec.model != "sf":
        raise InvalidSpecError("generate_sf requires model='sf'")
    n = spec.n_nodes
    target = int(n * spec.mean_degree // 2)
    if target == 0:
        return Topology(n, spec.directed, ())
    max_pairs = n * (n - 1) // 2
    if target > max_pairs:
        raise InvalidSpecError(f"target edge count {target} exceeds C(N,2)={max_pairs}")
    alpha = 1.0 / (spec.gamma - 1.0)
    w = (np.arange(1, n + 1, dtype=float)) ** (-alpha)
    w /= w.sum()
    rng = np.random.default_rng(spec.seed)
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    budget = SF_RETRY_FACTOR * target
    while len(edges) < target:
        batch = min(4 * (target - len(edges)) + 64, budget)
        if batch <= 0:
            break
        budget -= batch
        src = rng.choice(n, size=batch, p=w)
        dst = rng.choice(n, size=batch, p=w)
        for i, j in zip(src, dst):
            if i == j:
                continue
            key = (min(i, j), max(i, j))
            if key in seen:
                continue
            seen.add(key)
            edges.append((int(key[0]), int(key[1])) if not spec.directed else (int(i), int(j)))
            if len(edges) == target:
                break
    if len(edges) < target:
        raise GenerationStalledError(
            f"could not place {target} edges within {SF_RETRY_FACTOR}x retry budget "
            f"(got {len(edges)}); mean_degree too large for fitness skew"
        )
    return Topology(n, spec.directed, tuple(edges))


def generate(spec: GraphSpec) -> Topology:
    return generate_er(spec) if spec.model == "er" else generate_sf(spec)


@dataclass(frozen=True)
class DegreeStats:
    mean_degree: float
    min_degree: int
    max_degree: int
    isolated: int


def degree_stats(t: Topology) -> DegreeStats:
    """Total-degree summary (in + out for directed graphs)."""
    deg = np.zeros(t.n_nodes, dtype=int)
    for s, d in t.edges:
        deg[s] += 1
        deg[d] += 1
    return DegreeStats(
        mean_degree=float(deg.mean()) if t.n_nodes else 0.0,
        min_degree=int(deg.min()) if t.n_nodes else 0,
        max_degree=int(deg.max()) if t.n_nodes else 0,
        isolated=int((deg == 0).sum()),
    )


def degrees(t: Topology) -> np.ndarray:
    deg = np.zeros(t.n_nodes, dtype=int)
    for s, d in t.edges:
        deg[s] += 1
        deg[d] += 1
    return deg


def write_edgelist(t: Topology, path) -> None:
    """Text format: header ``N <n> directed <0|1>``, then one ``src dst`` per line."""
    with open(path, "w") as fh:
        fh.write(f"N {t.n_nodes} directed {1 if t.directed else 0}\n")
        for s, d in t.edges:
            fh.write(f"{s} {d}\n")


def read_edgelist(path) -> Topology:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 4 or header[0] != "N" or header[2] != "directed":
            raise ValueError(f"{path}: bad edge-list header {' '.join(header)!r}")
        n = int(header[1])
        directed = bool(int(header[3]))
        edges = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            s, d = line.split()
            edges.append((int(s), int(d)))
    return Topology(n, directed, tuple(edges))
