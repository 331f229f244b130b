"""Driver-count computations.

Four routes to N_D, the minimum number of independent control inputs:

* nd_et            candidate-eigenvalue min-rank over the finite field (fast,
                   works on the structured matrix directly);
* nd_ect_numeric   dense eigensolve + geometric multiplicities of a numeric
                   realization;
* nd_ect_symmetric algebraic multiplicities of a symmetric realization;
* nd_sct_matching  maximum-matching count (the independent-parameter
                   baseline, known to be over-optimistic when self-dynamics
                   repeat);
* nd_oracle        brute-force minimal input count via exact Kalman rank
                   tests on a rational realization (small systems only).

N_D counts independent input signals with an unconstrained input matrix;
identifying which nodes to drive is out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse
from scipy.sparse.csgraph import maximum_bipartite_matching

from .dynamics import Assignment, Const, FreeParam, StateMatrix
from .netgen import Topology
from .rank import DEFAULT_TRIALS, generic_rank, rank_exact, rank_fp

ORACLE_DIM_CAP = 12
ECT_DIM_CAP = 500


class NumericFailureError(RuntimeError):
    pass


class ContractViolationError(ValueError):
    pass


@dataclass(frozen=True)
class DriverResult:
    n_d: int
    dim: int
    n_nodes: int
    method: str  # ET | ECT_NUMERIC | ECT_SYMMETRIC | SCT_MATCHING | ORACLE
    achieving_eigenvalue: Fraction | complex | None = None
    candidate_ranks: dict = field(default_factory=dict)

    @property
    def n_d_frac(self) -> float:
        """N_D / (dN), the per-state fraction."""
        return self.n_d / self.dim

    @property
    def n_d_per_node(self) -> float:
        return self.n_d / self.n_nodes

    def to_json_dict(self) -> dict:
        ach = self.achieving_eigenvalue
        if isinstance(ach, Fraction):
            ach = f"{ach.numerator}/{ach.denominator}" if ach.denominator != 1 else str(ach.numerator)
        elif isinstance(ach, complex):
            ach = {"re": ach.real, "im": ach.imag}
        return {
            "n_d": self.n_d,
            "dim": self.dim,
            "n_nodes": self.n_nodes,
            "n_d_frac": self.n_d_frac,
            "n_d_per_node": self.n_d_per_node,
            "method": self.method,
            "achieving_eigenvalue": ach,
            "candidate_ranks": {str(k): v for k, v in self.candidate_ranks.items()},
        }


def nd_et(
    m: StateMatrix,
    seed: int = 0,
    trials: int = DEFAULT_TRIALS,
    extra_candidates: tuple[Fraction, ...] = (),
) -> DriverResult:
    """Efficient-tool driver count: dN - min over candidate shifts of the
    generic rank of (Phi - lambda I), floored at 1.

    Candidates are 0 plus every unit-type eigenvalue (0 is always included:
    topology-induced nullspace degeneracy dominates sparse graphs even with
    no zero-weight type; a non-eigenvalue candidate is harmless since its
    shifted matrix has full generic rank).
    """
    candidates = sorted({Fraction(0), *m.unit_eigenvalues, *map(Fraction, extra_candidates)})
    ranks: dict[Fraction, int] = {}
    for lam in candidates:
        ranks[lam] = generic_rank(m, lam, trials=trials, seed=seed).rank
    min_rank = min(ranks.values())
    achieving = min(lam for lam, r in ranks.items() if r == min_rank)
    return DriverResult(
        n_d=max(1, m.dim - min_rank),
        dim=m.dim,
        n_nodes=m.n_nodes,
        method="ET",
        achieving_eigenvalue=achieving,
        candidate_ranks=ranks,
    )


def cluster_eigenvalues(eigs: np.ndarray, tol: float) -> list[np.ndarray]:
    """Greedy absolute-tolerance clustering of (possibly complex) eigenvalues."""
    order = np.lexsort((eigs.imag, eigs.real))
    clusters: list[list[complex]] = []
    for idx in order:
        lam = eigs[idx]
        if clusters and abs(lam - clusters[-1][-1]) <= tol:
            clusters[-1].append(lam)
        else:
            clusters.append([lam])
    return [np.array(c) for c in clusters]


def nd_ect_numeric(
    phi: np.ndarray,
    rel_tol: float = 1e-10,
    cluster_tol_scale: float = 1e-6,
    dim_cap: int = ECT_DIM_CAP,
) -> DriverResult:
    """Full ECT driver count of a numeric state matrix.

    All eigenvalues are computed, clustered with absolute tolerance
    cluster_tol_scale * max(1, spectral radius), and N_D is the maximum
    geometric multiplicity dim - rank(lambda I - Phi) over cluster
    representatives, floored at 1.
    """
    phi = np.asarray(phi, dtype=complex)
    n = phi.shape[0]
    if n > dim_cap:
        raise ContractViolationError(f"dim {n} exceeds ECT cap {dim_cap}")
    try:
        eigs = np.linalg.eigvals(phi)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericFailureError(f"eigensolver failed: {exc}") from exc
    tol = cluster_tol_scale * max(1.0, float(np.max(np.abs(eigs))) if n else 1.0)
    best_mu, best_lam = 0, None
    for cluster in cluster_eigenvalues(eigs, tol):
        lam = complex(cluster.mean())
        mu = n - rank_fp(lam * np.eye(n) - phi, rel_tol)
        if mu > best_mu:
            best_mu, best_lam = mu, lam
    return DriverResult(
        n_d=max(1, best_mu),
        dim=n,
        n_nodes=n,
        method="ECT_NUMERIC",
        achieving_eigenvalue=best_lam,
    )


def nd_ect_symmetric(phi: np.ndarray, cluster_tol_scale: float = 1e-6) -> DriverResult:
    """Symmetric shortcut: N_D is the largest eigenvalue-cluster size
    (geometric = algebraic multiplicity for symmetric matrices)."""
    phi = np.asarray(phi, dtype=float)
    scale = max(1.0, float(np.max(np.abs(phi))) if phi.size else 1.0)
    if not np.allclose(phi, phi.T, atol=1e-12 * scale, rtol=1e-12):
        raise ContractViolationError("matrix is not symmetric to within 1e-12 relative")
    eigs = np.linalg.eigvalsh(phi).astype(complex)
    n = phi.shape[0]
    tol = cluster_tol_scale * max(1.0, float(np.max(np.abs(eigs))) if n else 1.0)
    best = None
    for cluster in cluster_eigenvalues(eigs, tol):
        if best is None or len(cluster) > len(best):
            best = cluster
    return DriverResult(
        n_d=max(1, len(best) if best is not None else 0),
        dim=n,
        n_nodes=n,
        method="ECT_SYMMETRIC",
        achieving_eigenvalue=complex(best.mean()) if best is not None else None,
    )


def nd_sct_matching(t: Topology, a: Assignment | None = None) -> DriverResult:
    """Structural-control baseline: N - |maximum matching| on the out/in
    bipartite copy of the graph, floored at 1.

    A node's self-pair (i_out, i_in) is matchable when the assignment gives
    it a nonzero first-order self-dynamic; with no assignment only topology
    edges are matchable. Undirected edges count in both orientations.
    """
    n = t.n_nodes
    rows, cols = [], []
    for s, d in t.edges:
        rows.append(s)
        cols.append(d)
        if not t.directed:
            rows.append(d)
            cols.append(s)
    if a is not None:
        if a.order != 1:
            raise ContractViolationError("matching baseline takes first-order assignments")
        for v, ti in enumerate(a.node_type):
            if a.types[ti].eigenvalues[0] != 0:
                rows.append(v)
                cols.append(v)
    biadj = scipy.sparse.csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n)
    )
    match = maximum_bipartite_matching(biadj, perm_type="column")
    matched = int(np.sum(match >= 0))
    return DriverResult(
        n_d=max(1, n - matched), dim=n, n_nodes=n, method="SCT_MATCHING"
    )


def instantiate_rational(
    m: StateMatrix, seed: int = 0, lo: int = 1, hi: int = 1000
) -> list[list[Fraction]]:
    """Dense exact realization: free parameters drawn as random integers in
    [lo, hi], shared param_ids kept equal, constants taken verbatim."""
    rng = np.random.default_rng(seed)
    params = [Fraction(int(x)) for x in rng.integers(lo, hi + 1, size=m.n_params)]
    A = [[Fraction(0)] * m.dim for _ in range(m.dim)]
    for r, c, e in m.entries:
        A[r][c] += params[e.param_id] if isinstance(e, FreeParam) else e.value
    return A


def _mat_mul(A: list[list[Fraction]], B: list[list[Fraction]]) -> list[list[Fraction]]:
    n, k, mcols = len(A), len(B), len(B[0])
    out = [[Fraction(0)] * mcols for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        oi = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(mcols):
                    oi[j] += a * Bt[j]
    return out


def kalman_matrix(A: list[list[Fraction]], B: list[list[Fraction]]) -> list[list[Fraction]]:
    """[B, AB, ..., A^(n-1)B] as a dense rational matrix."""
    n = len(A)
    blocks = [B]
    cur = B
    for _ in range(n - 1):
        cur = _mat_mul(A, cur)
        blocks.append(cur)
    return [[x for blk in blocks for x in blk[i]] for i in range(n)]


def kalman_rank(A: list[list[Fraction]], B: list[list[Fraction]]) -> int:
    return rank_exact(kalman_matrix(A, B))


def nd_oracle(
    m: StateMatrix,
    seed: int = 0,
    lo: int = 1,
    hi: int = 1000,
    draws_per_m: int = 3,
) -> DriverResult:
    """Brute-force minimal input count by Kalman's rank condition.

    Realizes Phi exactly, then for M = 1..dim draws dense random integer
    input matrices B and tests whether [B, Phi B, ...] reaches full rank;
    the smallest M with any successful draw is N_D. Multiple draws guard
    against unlucky (non-generic) B.
    """
    if m.dim > ORACLE_DIM_CAP:
        raise ContractViolationError(f"dim {m.dim} exceeds oracle cap {ORACLE_DIM_CAP}")
    A = instantiate_rational(m, seed=seed, lo=lo, hi=hi)
    rng = np.random.default_rng(np.random.SeedSequence([seed & (2**63 - 1), 0xB]))
    for ninputs in range(1, m.dim + 1):
        for _ in range(draws_per_m):
            B = [
                [Fraction(int(x)) for x in row]
                for row in rng.integers(-9, 10, size=(m.dim, ninputs))
            ]
            if kalman_rank(A, B) == m.dim:
                return DriverResult(
                    n_d=ninputs, dim=m.dim, n_nodes=m.n_nodes, method="ORACLE"
                )
    return DriverResult(n_d=m.dim, dim=m.dim, n_nodes=m.n_nodes, method="ORACLE")


def kalman_shift_check(
    m: StateMatrix, B: list[list[Fraction]], w: Fraction | int, seed: int = 0
) -> bool:
    """Shift identity for first-order systems without self-dynamics: adding
    identical self-loops w*I to a coupling matrix leaves the Kalman rank
    unchanged. Returns the comparison outcome (expected always true)."""
    if m.dim > ORACLE_DIM_CAP:
        raise ContractViolationError(f"dim {m.dim} exceeds oracle cap {ORACLE_DIM_CAP}")
    if m.order != 1:
        raise ContractViolationError("shift check is defined for first-order systems")
    A = instantiate_rational(m, seed=seed)
    w = Fraction(w)
    Aw = [[A[i][j] + (w if i == j else 0) for j in range(m.dim)] for i in range(m.dim)]
    return kalman_rank(A, B) == kalman_rank(Aw, B)
