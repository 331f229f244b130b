"""Matrix rank three ways: exact mod-p generic rank, floating-point SVD rank,
and exact rational rank for small oracles.

The generic-rank path substitutes i.i.d. uniform nonzero residues mod
p = 2^31 - 1 for the free parameters of a structured matrix and eliminates
exactly over GF(p). A random substitution can only undershoot the generic
rank (Schwartz-Zippel), never overshoot, so repeated trials take the max and
the failure probability is at most (dim/p)^trials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dynamics import Const, FreeParam, StateMatrix

P = (1 << 31) - 1  # Mersenne prime: products of residues fit in int64

DEFAULT_TRIALS = 3
EXACT_DIM_CAP = 64


class UnrepresentableConstantError(ValueError):
    """A rational constant has denominator divisible by p."""


class OracleTooLargeError(ValueError):
    """Exact rational elimination requested above its dimension cap."""


@dataclass(frozen=True)
class FieldMatrix:
    """Dense square matrix of residues mod p."""

    dim: int
    data: np.ndarray  # int64, entries in [0, p)

    def dump(self) -> str:
        return "\n".join(" ".join(str(int(x)) for x in row) for row in self.data) + "\n"


@dataclass(frozen=True)
class RankResult:
    rank: int
    method: str  # FF_GENERIC | FP_SVD | EXACT_RATIONAL
    trials: int = 1
    failure_bound: float = 0.0


def _rational_mod_p(x: Fraction) -> int:
    num, den = x.numerator, x.denominator
    if den % P == 0:
        raise UnrepresentableConstantError(f"denominator of {x} divisible by p")
    return (num % P) * pow(den, P - 2, P) % P


def instantiate(m: StateMatrix, shift: Fraction | int, seed: int) -> FieldMatrix:
    """Realize the structured matrix (Phi - shift*I) over GF(p).

    Entries sharing a param_id receive the same residue (dependent
    parameters stay dependent); constants map to their exact residue.
    """
    rng = np.random.default_rng(seed)
    # one uniform nonzero residue per parameter
    params = rng.integers(1, P, size=m.n_params, dtype=np.int64)
    A = np.zeros((m.dim, m.dim), dtype=np.int64)
    for r, c, e in m.entries:
        if isinstance(e, FreeParam):
            A[r, c] = (A[r, c] + params[e.param_id]) % P
        else:
            A[r, c] = (A[r, c] + _rational_mod_p(e.value)) % P
    s = _rational_mod_p(Fraction(shift))
    if s:
        idx = np.arange(m.dim)
        A[idx, idx] = (A[idx, idx] - s) % P
    return FieldMatrix(m.dim, A)


try:
    import numba

    @numba.njit(cache=True, parallel=True)
    def _elim_mod_p(M):  # pragma: no cover - exercised via rank_ff
        n, ncols = M.shape
        rank = 0
        for col in range(ncols):
            if rank >= n:
                break
            piv = -1
            for r in range(rank, n):
                if M[r, col] != 0:
                    piv = r
                    break
            if piv < 0:
                continue
            if piv != rank:
                for c in range(col, ncols):
                    t = M[rank, c]
                    M[rank, c] = M[piv, c]
                    M[piv, c] = t
            # modular inverse of the pivot by binary exponentiation
            inv = 1
            b = M[rank, col]
            e = P - 2
            while e:
                if e & 1:
                    inv = (inv * b) % P
                b = (b * b) % P
                e >>= 1
            for r in numba.prange(rank + 1, n):
                f = (M[r, col] * inv) % P
                if f:
                    for c in range(col, ncols):
                        M[r, c] = (M[r, c] - f * M[rank, c]) % P
            rank += 1
        return rank

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


def _elim_mod_p_numpy(M: np.ndarray) -> int:
    n, ncols = M.shape
    rank = 0
    for col in range(ncols):
        if rank >= n:
            break
        nz = np.flatnonzero(M[rank:, col])
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            M[[rank, piv], col:] = M[[piv, rank], col:]
        inv = pow(int(M[rank, col]), P - 2, P)
        f = (M[rank + 1 :, col] * inv) % P
        M[rank + 1 :, col:] = (M[rank + 1 :, col:] - np.outer(f, M[rank, col:])) % P
        rank += 1
    return rank


def rank_ff(fm: FieldMatrix) -> int:
    """Exact rank over GF(p) by Gaussian elimination with row pivoting."""
    M = np.array(fm.data, dtype=np.int64)
    if _HAVE_NUMBA:
        return int(_elim_mod_p(M))
    return _elim_mod_p_numpy(M)


def generic_rank(
    m: StateMatrix,
    shift: Fraction | int = 0,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
) -> RankResult:
    """Generic rank of (Phi - shift*I): max of rank_ff over independent trials."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    best = 0
    for trial in range(trials):
        fm = instantiate(m, shift, np.random.SeedSequence([int(seed) & (2**63 - 1), trial]))
        best = max(best, rank_ff(fm))
        if best == m.dim:
            break
    return RankResult(best, "FF_GENERIC", trials, float((m.dim / P) ** trials))


def rank_fp(a: np.ndarray, rel_tol: float = 1e-10) -> int:
    """Numerical rank: singular values above rel_tol * sigma_max * max(dims)."""
    a = np.asarray(a)
    if a.size == 0:
        return 0
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    sv = np.linalg.svd(a, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > rel_tol * sv[0] * max(a.shape)))


def rank_exact(rows: Sequence[Sequence[Fraction | int]], cap: int = EXACT_DIM_CAP) -> int:
    """Exact rank over Q via fraction-free (Bareiss) elimination.

    Rows may be longer than the row count (rectangular is fine); the cap
    applies to the row dimension.
    """
    nrows = len(rows)
    if nrows == 0:
        return 0
    if nrows > cap:
        raise OracleTooLargeError(f"{nrows} rows exceeds exact-elimination cap {cap}")
    ncols = len(rows[0])
    # scale each row to integers (rank-preserving)
    M: list[list[int]] = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        lcm = 1
        for x in fr:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        M.append([int(x * lcm) for x in fr])
    rank = 0
    prev = 1
    for col in range(ncols):
        if rank >= nrows:
            break
        piv = next((r for r in range(rank, nrows) if M[r][col] != 0), None)
        if piv is None:
            continue
        if piv != rank:
            M[rank], M[piv] = M[piv], M[rank]
        pv = M[rank][col]
        for r in range(rank + 1, nrows):
            mr = M[r]
            f = mr[col]
            for c in range(col, ncols):
                mr[c] = (mr[c] * pv - f * M[rank][c]) // prev
        prev = pv
        rank += 1
    return rank
