"""Eigenvalue ladders, spectral projectors, and gap-condition audits.

The operator model is a finite nondecreasing positive eigenvalue ladder
(diagonalized coordinates).  Ladder construction picks the minimal dimension
at every level and a theta-chain such that each summed exponent used by the
jet recursion stays inside its admissible window.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import CapabilityError, InputError

__all__ = [
    "SpectralOperator",
    "GapLadder",
    "project_low",
    "project_high",
    "first_gap_index",
    "gap_ladder",
    "check_holder_gap",
]


@dataclass(frozen=True)
class SpectralOperator:
    """Positive self-adjoint operator, reduced to its eigenvalue ladder."""

    eigenvalues: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        if lam.ndim != 1 or lam.size < 2:
            raise InputError("need at least two eigenvalues")
        if lam[0] <= 0 or np.any(np.diff(lam) < 0):
            raise InputError("eigenvalues must be positive and nondecreasing")
        lam = lam.copy()
        lam.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def lam(self, n: int) -> float:
        """1-based eigenvalue access, matching the ladder indexing."""
        if not 1 <= n <= self.dim:
            raise InputError(f"eigenvalue index {n} outside 1..{self.dim}")
        return float(self.eigenvalues[n - 1])

    @classmethod
    def quadratic(cls, a: float, K: int) -> "SpectralOperator":
        """lambda_k = a k^2 (1D second-order elliptic ladder)."""
        return cls(a * np.arange(1, K + 1, dtype=float) ** 2)

    @classmethod
    def dyadic(cls, K: int) -> "SpectralOperator":
        """lambda_k = 2^(k-1) (the resonant counterexample ladder)."""
        return cls(2.0 ** np.arange(K, dtype=float))


def project_low(u: np.ndarray, N: int) -> np.ndarray:
    """Coordinate mask onto modes 1..N."""
    u = np.asarray(u, dtype=float)
    if not 0 <= N <= u.shape[-1]:
        raise InputError(f"N={N} outside 0..{u.shape[-1]}")
    out = np.zeros_like(u)
    out[..., :N] = u[..., :N]
    return out


def project_high(u: np.ndarray, N: int) -> np.ndarray:
    """Coordinate mask onto modes N+1..K; project_low + project_high = id."""
    u = np.asarray(u, dtype=float)
    if not 0 <= N <= u.shape[-1]:
        raise InputError(f"N={N} outside 0..{u.shape[-1]}")
    out = np.zeros_like(u)
    out[..., N:] = u[..., N:]
    return out


def first_gap_index(A: SpectralOperator, L: float) -> int | None:
    """Smallest N with lambda_{N+1} - lambda_N > 2L, None if absent in truncation."""
    if L < 0:
        raise InputError("Lipschitz bound must be nonnegative")
    lam = A.eigenvalues
    gaps = np.diff(lam)
    hits = np.nonzero(gaps > 2.0 * L)[0]
    return int(hits[0]) + 1 if hits.size else None


def check_holder_gap(A: SpectralOperator, N: int, L: float, n: int, eps: float) -> bool:
    """Single-gap C^{n,eps} condition: lambda_{N+1} - (n+eps) lambda_N > (n+1+eps) L."""
    if not (0 < eps <= 1.0) or n < 1:
        raise InputError("need eps in (0,1] and n >= 1")
    return A.lam(N + 1) - (n + eps) * A.lam(N) > (n + 1 + eps) * L


@dataclass(frozen=True)
class GapLadder:
    """Nested gap levels N_1 < ... < N_n with an admissible theta-chain.

    Windows are (lambda_{N_k} + L, lambda_{N_k+1} - L); every summed exponent
    theta_{k+1} + k*theta_k (+eps) used by the level-(k+1) jet solves must sit
    strictly inside the level-(k+1) window.
    """

    operator: SpectralOperator
    L: float
    dims: tuple[int, ...]
    thetas: tuple[float, ...]
    epsilon: float
    policy: str = field(default="midpoint")
    margin: float = field(default=0.0)

    @property
    def depth(self) -> int:
        return len(self.dims)

    def window(self, k: int) -> tuple[float, float]:
        """Admissible exponent window at level k (1-based)."""
        N = self.dims[k - 1]
        return (self.operator.lam(N) + self.L, self.operator.lam(N + 1) - self.L)

    def contraction_margin(self, k: int, theta: float | None = None) -> float:
        """min(theta - lambda_N, lambda_{N+1} - theta) - L for a level-k solve."""
        N = self.dims[k - 1]
        th = self.thetas[k - 1] if theta is None else theta
        return min(th - self.operator.lam(N), self.operator.lam(N + 1) - th) - self.L

    def jet_exponent(self, level: int, degree: int) -> float:
        """Weighted exponent theta_level + (degree-1) * theta_{level-1}."""
        th = self.thetas[level - 1]
        if degree > 1:
            if level < 2:
                raise InputError("degree >= 2 jets need a previous level")
            th += (degree - 1) * self.thetas[level - 2]
        return th

    def solve_exponents(self) -> list[tuple[int, float]]:
        """All (level, exponent) pairs the solvers run at, jets included."""
        out = []
        for level in range(1, self.depth + 1):
            for degree in range(1, level + 1):
                out.append((level, self.jet_exponent(level, degree)))
        return out

    def tail_rate(self, level: int, exponent: float) -> float:
        """min(e - lambda_N, lambda_{N+1} - e): decay rate of truncation tails."""
        N = self.dims[level - 1]
        return min(exponent - self.operator.lam(N), self.operator.lam(N + 1) - exponent)

    def required_truncation(self, margin: float = 2.0) -> int:
        return int(np.ceil(margin * self.dims[-1]))

    def to_json_dict(self) -> dict:
        lam = self.operator
        levels = []
        for k, (N, th) in enumerate(zip(self.dims, self.thetas), start=1):
            levels.append(
                {
                    "N": N,
                    "gap": lam.lam(N + 1) - lam.lam(N),
                    "theta_window": list(self.window(k)),
                    "theta": th,
                }
            )
        return {
            "L": self.L,
            "levels": levels,
            "epsilon": self.epsilon,
            "theta_policy": self.policy,
            "margin": self.margin,
            "feasible": True,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def _strictly_less(a: float, b: float) -> bool:
    """Strict inequality with a scale-relative guard.

    Ladder conditions sit on exact-equality boundaries for clean ladders
    (e.g. dyadic); float rounding must not promote equality to strictness.
    """
    return a < b - 1e-9 * max(1.0, abs(a), abs(b))


def _minimal_dims(A: SpectralOperator, L: float, n: int) -> list[int]:
    """Minimal N at each level: (2.sg)-type at level 1, then the ladder conditions."""
    lam = A.eigenvalues
    N1 = None
    for N in range(1, A.dim):
        if _strictly_less(2.0 * L, lam[N] - lam[N - 1]):
            N1 = N
            break
    if N1 is None:
        raise CapabilityError(
            f"level 1 infeasible: no gap > {2 * L} within truncation K={A.dim}"
        )
    dims = [N1]
    for level in range(2, n + 1):
        found = None
        for N in range(dims[-1] + 1, A.dim):
            gap = lam[N] - lam[N - 1]  # lambda_{N+1} - lambda_N, 0-based array
            if level == 2:
                ok = _strictly_less(3.0 * L + A.lam(dims[0]), gap)
            else:
                k = level - 1
                ok = _strictly_less(
                    A.lam(N) + L + k * (A.lam(dims[-1] + 1) - L), A.lam(N + 1) - L
                )
            if ok:
                found = N
                break
        if found is None:
            raise CapabilityError(
                f"level {level} infeasible within truncation K={A.dim}; "
                "increase the truncation or lower the Lipschitz bound"
            )
        dims.append(found)
    return dims


def _theta_chain(
    A: SpectralOperator, L: float, dims: list[int], eps: float, guard: float = 1e-9
) -> tuple[list[float], str, float] | None:
    """Midpoints if the whole chain fits; otherwise shrink toward the window
    low ends by bisecting the largest common contraction margin.

    A margin m means every solve exponent e (the thetas themselves and the
    summed jet exponents theta_{k+1} + j theta_k) keeps
    min(e - lambda_N, lambda_{N+1} - e) >= L + m, i.e. every fixed-point
    ratio is at most L / (L + m).  Equalizing m across levels is what the
    bisection optimizes; a uniform shrink factor would dump all the slack
    into the widest window and starve the narrow first one.
    """
    lows = [A.lam(N) + L for N in dims]
    ups = [A.lam(N + 1) - L for N in dims]
    widths = [u - lo for lo, u in zip(lows, ups)]
    if any(w <= guard for w in widths):
        return None

    # Hölder headroom per level: the window low end must leave room for some
    # theta' with (1+eps) theta' < up (the C^{1,eps} bootstrap).
    for lo, up in zip(lows, ups):
        if (1.0 + eps) * lo >= up - guard:
            return None

    def chain_ok(th: list[float], m: float) -> bool:
        for k in range(1, len(dims)):
            if th[k] + k * th[k - 1] + eps > ups[k] - m:
                return False
        return True

    mids = [lo + w / 2.0 for lo, w in zip(lows, widths)]
    if chain_ok(mids, guard):
        return mids, "midpoint", min(widths) / 2.0

    def feasible(m: float) -> bool:
        th = [lo + m for lo in lows]
        return chain_ok(th, m)

    if not feasible(guard):
        return None
    lo_m, hi_m = guard, min(widths) / 2.0
    for _ in range(60):
        mid = 0.5 * (lo_m + hi_m)
        if feasible(mid):
            lo_m = mid
        else:
            hi_m = mid
    thetas = _recenter([lo + lo_m for lo in lows], lows, ups, eps, lo_m)
    return thetas, "equalized-margin", lo_m


def _recenter(
    thetas: list[float], lows: list[float], ups: list[float], eps: float, m: float
) -> list[float]:
    """Push each theta back toward its window midpoint where the chain allows.

    The equalized solution parks every theta at low + m; wide windows (upper
    ladder levels) can afford to sit much higher, which shortens the truncated
    half-line their solves need (tail rate min(theta - lambda_N, ...)).
    Top level first: raising theta_k is limited by its own chain constraint
    and by the one it feeds at level k+1.
    """
    n = len(thetas)
    out = list(thetas)
    for k in reversed(range(n)):
        hi = min(ups[k] - m, lows[k] + (ups[k] - lows[k]) / 2.0)
        if k >= 1:  # own chain: theta_k + k*theta_{k-1} + eps <= up_k - m
            hi = min(hi, ups[k] - m - eps - k * out[k - 1])
        if k + 1 < n:  # feeds level k+2's chain
            hi = min(hi, (ups[k + 1] - m - eps - out[k + 1]) / (k + 1))
        out[k] = max(out[k], hi)
    return out


def gap_ladder(A: SpectralOperator, L: float, n: int, eps: float = 0.05) -> GapLadder:
    """Build the n-level ladder: minimal dims, midpoint-then-shrink theta-chain.

    eps is halved until the strict chain inequalities hold with margin 1e-9;
    the realized eps and shrink factor are recorded for reproducibility.
    """
    if n < 1:
        raise InputError("need at least one level")
    dims = _minimal_dims(A, L, n)
    work_eps = eps
    for _ in range(24):
        res = _theta_chain(A, L, dims, work_eps)
        if res is not None:
            thetas, policy, margin = res
            return GapLadder(A, L, tuple(dims), tuple(thetas), work_eps, policy, margin)
        work_eps *= 0.5
    raise CapabilityError(
        f"theta-chain infeasible at level {n} even with eps={work_eps:.2e}; "
        f"dims={dims}"
    )
