"""Time integration on the truncated negative half-line.

Contains the forward exponential integrator, the weighted Green operator
(low modes integrated backward from t=0, high modes forward from -T), the
homogeneous operator, weighted norms, and the variational fixed-point
solver.  All mode-wise recurrences funnel through the scan kernel.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from ._kernels import linear_recurrence
from .errors import ConvergenceError, InputError, PreconditionError, StiffnessError
from .spectral import SpectralOperator

__all__ = [
    "WeightedTrajectory",
    "SemilinearProblem",
    "SolverConfig",
    "half_line_grid",
    "plan_half_line",
    "forward_solve",
    "green_apply",
    "homog_apply",
    "operator_norm_estimate",
    "variational_solve",
]

_CACHE_MAGIC = b"IMJT"


@dataclass(frozen=True)
class SolverConfig:
    """Discretization and iteration policy shared by the half-line solvers."""

    tol: float = 1e-8
    dt_factor: float = 0.25       # dt <= dt_factor / lambda_K
    tail_fraction: float = 0.01   # exp(-c T) <= tail_fraction * tol
    max_iter: int = 600
    anderson_depth: int = 3
    anderson_threshold: float = 0.9
    dt_override: float | None = None
    t_override: float | None = None
    t_min: float = 1.0
    growth_exponent_cap: float = 620.0  # keep exp(lambda*T) representable

    def dt_for(self, lam_max: float) -> float:
        if self.dt_override is not None:
            return self.dt_override
        return self.dt_factor / max(lam_max, 1.0)

    def horizon_for(self, tail_rate: float, growth_rate: float = 0.0) -> float:
        """Truncation time from exp(-c T) <= tail_fraction * tol, capped so
        that exp(growth_rate * T) stays inside float64."""
        if self.t_override is not None:
            return self.t_override
        target = np.log(1.0 / (self.tail_fraction * self.tol)) / max(tail_rate, 1e-12)
        if growth_rate > 0:
            target = min(target, self.growth_exponent_cap / growth_rate)
        return max(target, self.t_min)


def half_line_grid(T: float, dt: float) -> np.ndarray:
    """Uniform grid -T = t_0 < ... < t_M = 0 with step <= dt."""
    M = max(int(np.ceil(T / dt)), 8)
    return np.linspace(-T, 0.0, M + 1)


def plan_half_line(
    op: SpectralOperator, tail_rate: float, cfg: SolverConfig, growth_rate: float = 0.0
) -> np.ndarray:
    return half_line_grid(
        cfg.horizon_for(tail_rate, growth_rate), cfg.dt_for(op.lam(op.dim))
    )


@dataclass(frozen=True)
class WeightedTrajectory:
    """Time-sampled path with an exponential weight e^{theta t}.

    Weighted norms multiply values by the weight *before* squaring; raw values
    may legitimately reach e^{600} on long backward grids.
    """

    times: np.ndarray
    values: np.ndarray
    theta: float

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or v.ndim != 2 or v.shape[0] != t.size:
            raise InputError("times (M+1,) and values (M+1, K) expected")
        if np.any(np.diff(t) <= 0):
            raise InputError("times must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise InputError("trajectory values must be finite")
        t = t.copy()
        t.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def dt(self) -> float:
        steps = np.diff(self.times)
        if steps.max() - steps.min() > 1e-9 * steps.max():
            raise InputError("grid is not uniform")
        return float(steps[0])

    @property
    def value0(self) -> np.ndarray:
        """Value at the right endpoint (t = 0 for half-line grids)."""
        return self.values[-1].copy()

    def weighted_values(self, theta: float | None = None) -> np.ndarray:
        th = self.theta if theta is None else theta
        return np.exp(th * self.times)[:, None] * self.values

    def weighted_sup(self, theta: float | None = None) -> float:
        wv = self.weighted_values(theta)
        return float(np.linalg.norm(wv, axis=1).max())

    def weighted_l2(self, theta: float | None = None) -> float:
        wv = self.weighted_values(theta)
        sq = (wv * wv).sum(axis=1)
        return float(np.sqrt(np.trapezoid(sq, self.times)))

    def restrict(self, T: float) -> "WeightedTrajectory":
        """Suffix of the grid with times >= -T (right endpoint kept)."""
        i0 = int(np.searchsorted(self.times, -T - 1e-12))
        return WeightedTrajectory(self.times[i0:], self.values[i0:], self.theta)

    def with_theta(self, theta: float) -> "WeightedTrajectory":
        return WeightedTrajectory(self.times, self.values, theta)

    def to_csv(self, path):
        header = "t," + ",".join(f"u{i+1}" for i in range(self.dim))
        np.savetxt(
            path,
            np.column_stack([self.times, self.values]),
            delimiter=",",
            header=header,
            comments="",
        )

    def to_cache(self, path):
        """Binary cache: magic, K, M, theta, T, then row-major doubles."""
        with open(path, "wb") as fh:
            fh.write(_CACHE_MAGIC)
            fh.write(
                struct.pack(
                    "<iidd", self.dim, self.times.size - 1, self.theta, -float(self.times[0])
                )
            )
            fh.write(self.times.astype("<f8").tobytes())
            fh.write(self.values.astype("<f8").tobytes())

    @classmethod
    def from_cache(cls, path) -> "WeightedTrajectory":
        with open(path, "rb") as fh:
            if fh.read(4) != _CACHE_MAGIC:
                raise InputError("not a trajectory cache file")
            K, M, theta, _T = struct.unpack("<iidd", fh.read(24))
            times = np.frombuffer(fh.read(8 * (M + 1)), dtype="<f8")
            values = np.frombuffer(fh.read(8 * (M + 1) * K), dtype="<f8").reshape(M + 1, K)
        return cls(times, values, theta)


class Nonlinearity:
    """Smooth map on K-vectors with derivative evaluators up to `order`.

    value/jac_apply/deriv_apply all accept a leading batch axis (time nodes).
    Subclasses override _value, _jac_apply, _deriv_apply on 2D arrays.
    """

    order: int = 4

    def value(self, u: np.ndarray) -> np.ndarray:
        u2 = np.atleast_2d(np.asarray(u, dtype=float))
        out = self._value(u2)
        return out[0] if np.asarray(u).ndim == 1 else out

    def jac_apply(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        u2 = np.atleast_2d(np.asarray(u, dtype=float))
        v2 = np.atleast_2d(np.asarray(v, dtype=float))
        out = self._jac_apply(u2, np.broadcast_to(v2, u2.shape))
        return out[0] if np.asarray(u).ndim == 1 else out

    def deriv_apply(self, u: np.ndarray, args: Sequence[np.ndarray]) -> np.ndarray:
        k = len(args)
        if k < 2:
            raise InputError("deriv_apply is for k >= 2; use jac_apply")
        if k > self.order:
            raise InputError(f"derivative order {k} beyond declared order {self.order}")
        u2 = np.atleast_2d(np.asarray(u, dtype=float))
        a2 = [np.broadcast_to(np.atleast_2d(np.asarray(a, dtype=float)), u2.shape) for a in args]
        out = self._deriv_apply(u2, a2)
        return out[0] if np.asarray(u).ndim == 1 else out

    def _value(self, u):
        raise NotImplementedError

    def _jac_apply(self, u, v):
        raise NotImplementedError

    def _deriv_apply(self, u, args):
        raise NotImplementedError


class ZeroNonlinearity(Nonlinearity):
    def _value(self, u):
        return np.zeros_like(u)

    def _jac_apply(self, u, v):
        return np.zeros_like(u)

    def _deriv_apply(self, u, args):
        return np.zeros_like(u)


class ConstantNonlinearity(Nonlinearity):
    """F(u) = g: the decoupled linear benchmark with closed-form manifolds."""

    def __init__(self, g: np.ndarray):
        self.g = np.asarray(g, dtype=float)

    def _value(self, u):
        return np.broadcast_to(self.g, u.shape).copy()

    def _jac_apply(self, u, v):
        return np.zeros_like(u)

    def _deriv_apply(self, u, args):
        return np.zeros_like(u)


@dataclass(frozen=True)
class SemilinearProblem:
    """du/dt + A u = F(u) at truncation dimension K = operator.dim."""

    operator: SpectralOperator
    nonlinearity: Nonlinearity
    lipschitz: float

    @property
    def dim(self) -> int:
        return self.operator.dim

    def validate(self, rng: np.random.Generator, samples: int = 5, scale: float = 1.0) -> None:
        """Spot-check derivative symmetry and the certified Lipschitz bound."""
        K = self.dim
        for _ in range(samples):
            u = scale * rng.standard_normal(K)
            a, b = rng.standard_normal((2, K))
            if self.nonlinearity.order >= 2:
                ab = self.nonlinearity.deriv_apply(u, [a, b])
                ba = self.nonlinearity.deriv_apply(u, [b, a])
                if np.linalg.norm(ab - ba) > 1e-8 * max(np.linalg.norm(ab), 1.0):
                    raise InputError("second derivative is not symmetric")
            jv = self.nonlinearity.jac_apply(u, a)
            if np.linalg.norm(jv) > self.lipschitz * np.linalg.norm(a) * (1 + 1e-9):
                raise InputError("Jacobian exceeds the certified Lipschitz bound")


def _phi1(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = np.abs(z) < 1e-6
    zs = z[small]
    out[small] = 1.0 + zs / 2.0 + zs * zs / 6.0
    zb = z[~small]
    out[~small] = np.expm1(zb) / zb
    return out


def _phi2(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = np.abs(z) < 1e-4
    zs = z[small]
    out[small] = 0.5 + zs / 6.0 + zs * zs / 24.0
    zb = z[~small]
    out[~small] = (np.expm1(zb) - zb) / (zb * zb)
    return out


def forward_solve(
    prob: SemilinearProblem,
    u0: np.ndarray,
    horizon: float,
    cfg: SolverConfig = SolverConfig(),
    theta: float = 0.0,
    t0: float = 0.0,
) -> WeightedTrajectory:
    """Exponential-trapezoidal (ETD2RK) forward integration of du/dt + Au = F(u).

    Each mode uses the exact factor e^{-lambda dt}; the nonlinearity enters
    through phi1/phi2 weights, second order in dt.  Local error is estimated
    against the Euler predictor; a step is halved on rejection, up to 20 times.
    """
    if horizon <= 0:
        raise InputError("horizon must be positive")
    lam = prob.operator.eigenvalues
    u0 = np.asarray(u0, dtype=float)
    if u0.shape != (prob.dim,):
        raise InputError("initial data dimension mismatch")

    dt = cfg.dt_for(lam[-1])
    M = max(int(np.ceil(horizon / dt)), 4)
    dt = horizon / M

    def coeffs(h):
        z = -lam * h
        e = np.exp(z)
        p1, p2 = _phi1(z), _phi2(z)
        return e, h * (p1 - p2), h * p2, h * p1

    times = t0 + np.linspace(0.0, horizon, M + 1)
    out = np.empty((M + 1, prob.dim))
    out[0] = u0
    u = u0.copy()
    F = prob.nonlinearity.value

    def march(u, h, steps, ef, c0, c1, cp):
        """ETD2RK substeps; returns (state, worst predictor/corrector gap)."""
        worst = 0.0
        for _ in range(steps):
            fu = F(u)
            pred = ef * u + cp * fu                 # ETD1 predictor
            u = ef * u + c0 * fu + c1 * F(pred)     # trapezoidal corrector
            worst = max(worst, float(np.linalg.norm(u - pred)))
        return u, worst

    for i in range(M):
        halvings = 0
        h = dt
        while True:
            ef, c0, c1, cp = coeffs(h)
            unew, err = march(u, h, int(round(dt / h)), ef, c0, c1, cp)
            # reject only near-blowup steps; accuracy is owned by the dt rule
            # and checked globally by Richardson halving
            if np.all(np.isfinite(unew)) and err <= 0.05 * max(1.0, np.linalg.norm(u)):
                break
            halvings += 1
            if halvings > 20:
                raise StiffnessError("step rejection cascade: more than 20 halvings")
            h /= 2.0
        u = unew
        out[i + 1] = u
    return WeightedTrajectory(times, out, theta)


def _green_drive(lam, dt, h_vals, backward: bool):
    """Per-step quadrature increments for the variation-of-constants formula."""
    if backward:
        z = lam * dt
        p1, p2 = _phi1(z), _phi2(z)
        c0, c1 = p1 - p2, p2
        # s_i = dt*(c0 h_i + c1 h_{i+1}) over step [t_i, t_{i+1}]
        return dt * (c0 * h_vals[:-1] + c1 * h_vals[1:])
    z = -lam * dt
    p1, p2 = _phi1(z), _phi2(z)
    c0, c1 = p1 - p2, p2
    return dt * (c0 * h_vals[:-1] + c1 * h_vals[1:])


def green_apply(
    op: SpectralOperator, N: int, theta: float, h: WeightedTrajectory
) -> WeightedTrajectory:
    """Apply the weighted solution operator of dv/dt + Av = h on the grid of h.

    Modes 1..N integrate backward from t=0 with zero terminal data (h extended
    by zero for t > 0); modes N+1..K integrate forward from -T with zero
    initial data.  This is the discrete compression of the full-line operator
    whose norm is 1 / min(theta - lambda_N, lambda_{N+1} - theta).
    """
    lam = op.eigenvalues
    if h.dim != op.dim:
        raise InputError("trajectory dimension != operator dimension")
    if N < 0 or N >= op.dim:
        raise PreconditionError(f"N={N} outside 0..{op.dim - 1}")
    lo = lam[N - 1] if N >= 1 else 0.0
    if not lo < theta < lam[N]:
        raise PreconditionError(
            f"theta={theta} outside (lambda_N, lambda_N+1) = ({lo}, {lam[N]})"
        )
    dt = h.dt
    M1 = h.values.shape[0]
    v = np.zeros_like(h.values)

    if N >= 1:
        lam_lo = lam[:N]
        s = _green_drive(lam_lo, dt, h.values[:, :N], backward=True)  # (M, N)
        g = np.exp(lam_lo * dt)
        # reversed recurrence v_i = g v_{i+1} - s_i, terminal v_M = 0
        drive = np.zeros((M1, N))
        drive[1:] = -s[::-1]
        vr = linear_recurrence(np.ascontiguousarray(g), np.ascontiguousarray(drive))
        v[:, :N] = vr[::-1]

    if N < op.dim:
        lam_hi = lam[N:]
        b = _green_drive(lam_hi, dt, h.values[:, N:], backward=False)
        a = np.exp(-lam_hi * dt)
        drive = np.zeros((M1, op.dim - N))
        drive[1:] = b
        v[:, N:] = linear_recurrence(np.ascontiguousarray(a), np.ascontiguousarray(drive))

    return WeightedTrajectory(h.times, v, theta)


class ConjugatedGreen:
    """The Green operator conjugated by the weight e^{theta t}.

    Acts on weighted values x = e^{theta t} u; every recurrence coefficient is
    then e^{-|lambda - theta| dt} < 1, so arbitrarily long horizons neither
    overflow nor underflow.  Its plain operator norm (with trapezoid mass)
    equals the weighted-space norm of the Green operator.
    """

    def __init__(self, op: SpectralOperator, N: int, theta: float, times: np.ndarray):
        lam = op.eigenvalues
        self.N, self.K = N, op.dim
        self.M1 = times.size
        dt = float(times[1] - times[0])
        self.edt = np.exp(-theta * dt)  # e^{theta t_i} = e^{theta t_{i+1}} * edt
        if N >= 1:
            z = lam[:N] * dt
            p1, p2 = _phi1(z), _phi2(z)
            self.g = np.exp((lam[:N] - theta) * dt)  # < 1: lambda_n < theta
            self.c0_lo = dt * (p1 - p2)
            self.c1_lo = dt * p2 * self.edt
        if N < self.K:
            z = -lam[N:] * dt
            p1, p2 = _phi1(z), _phi2(z)
            self.a = np.exp(-(lam[N:] - theta) * dt)  # < 1: lambda_n > theta
            self.c0_hi = dt * (p1 - p2) / self.edt  # e^{theta t_i} h_{i-1} term
            self.c1_hi = dt * p2

    def matvec(self, x: np.ndarray) -> np.ndarray:
        N, M1 = self.N, self.M1
        out = np.zeros_like(x)
        if N >= 1:
            s = self.c0_lo * x[:-1, :N] + self.c1_lo * x[1:, :N]
            drive = np.zeros((M1, N))
            drive[1:] = -s[::-1]
            vr = linear_recurrence(np.ascontiguousarray(self.g), np.ascontiguousarray(drive))
            out[:, :N] = vr[::-1]
        if N < self.K:
            b = self.c0_hi * x[:-1, N:] + self.c1_hi * x[1:, N:]
            drive = np.zeros((M1, self.K - N))
            drive[1:] = b
            out[:, N:] = linear_recurrence(np.ascontiguousarray(self.a), np.ascontiguousarray(drive))
        return out

    def rmatvec(self, y: np.ndarray) -> np.ndarray:
        N, M1 = self.N, self.M1
        out = np.zeros_like(y)
        if N >= 1:
            # v = -G s, G_{ij} = g^{j-i} (j>=i, v_M = 0); G^T = forward scan
            w = np.ascontiguousarray(y[:-1, :N])
            gy = linear_recurrence(np.ascontiguousarray(self.g), w)
            out[:-1, :N] -= self.c0_lo * gy
            out[1:, :N] -= self.c1_lo * gy
        if N < self.K:
            # v = L b, L_{ij} = a^{i-j}; L^T = reversed scan
            w = y[1:, N:][::-1]
            lt = linear_recurrence(np.ascontiguousarray(self.a), np.ascontiguousarray(w))[::-1]
            out[:-1, N:] += self.c0_hi * lt
            out[1:, N:] += self.c1_hi * lt
        return out


def homog_apply(
    op: SpectralOperator, N: int, p: np.ndarray, times: np.ndarray, theta: float
) -> WeightedTrajectory:
    """H(p, t) = sum_{n<=N} p_n e^{-lambda_n t}: exact on the grid."""
    p = np.asarray(p, dtype=float)
    if p.shape != (op.dim,):
        raise InputError("p dimension mismatch")
    hi = np.linalg.norm(p[N:])
    if hi > 1e-12 * max(np.linalg.norm(p), 1.0):
        raise PreconditionError("p has high-mode content above tolerance")
    times = np.asarray(times, dtype=float)
    vals = np.zeros((times.size, op.dim))
    lam_lo = op.eigenvalues[:N]
    vals[:, :N] = p[None, :N] * np.exp(-np.outer(times, lam_lo))
    return WeightedTrajectory(times, vals, theta)


def operator_norm_estimate(
    op: SpectralOperator,
    N: int,
    theta: float,
    times: np.ndarray,
    max_iter: int = 200,
    seed: int = 0,
) -> tuple[float, bool]:
    """Randomized power iteration for ||T|| on the discrete weighted L^2 space.

    Works on the weight-conjugated operator (all coefficients O(1)) and the
    trapezoid mass matrix; iterates the self-adjoint T*T and reports the
    Rayleigh-quotient square root.  Returns (estimate, converged).
    """
    times = np.asarray(times, dtype=float)
    M1 = times.size
    w = np.full(M1, times[1] - times[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    sw = np.sqrt(w)[:, None]

    A = ConjugatedGreen(op, N, theta, times)

    def c_matvec(x):
        return sw * A.matvec(x / sw)

    def c_rmatvec(x):
        return A.rmatvec(sw * x) / sw

    rng = np.random.default_rng(seed)
    z = rng.standard_normal((M1, op.dim))
    z /= np.linalg.norm(z)
    est_prev = 0.0
    converged = False
    for _ in range(max_iter):
        tz = c_matvec(z)
        est = float(np.linalg.norm(tz))  # ||C z|| with ||z|| = 1
        znew = c_rmatvec(tz)
        nrm = np.linalg.norm(znew)
        if nrm == 0.0:
            break
        z = znew / nrm
        if abs(est - est_prev) <= 1e-7 * max(est, 1e-30):
            converged = True
            est_prev = est
            break
        est_prev = est
    return est_prev, converged


class _Anderson:
    """Type-II Anderson mixing on flattened iterates (small depth)."""

    def __init__(self, depth: int):
        self.depth = depth
        self.xs: list[np.ndarray] = []
        self.gs: list[np.ndarray] = []

    def push(self, x: np.ndarray, gx: np.ndarray) -> np.ndarray:
        self.xs.append(x)
        self.gs.append(gx)
        if len(self.xs) > self.depth + 1:
            self.xs.pop(0)
            self.gs.pop(0)
        m = len(self.xs) - 1
        if m == 0:
            return gx
        F = np.stack([g - x for g, x in zip(self.gs, self.xs)], axis=1)  # residuals
        dF = F[:, 1:] - F[:, :-1]
        try:
            gamma, *_ = np.linalg.lstsq(dF, F[:, -1], rcond=None)
        except np.linalg.LinAlgError:
            return gx
        G = np.stack(self.gs, axis=1)
        dG = G[:, 1:] - G[:, :-1]
        return gx - dG @ gamma


def variational_solve(
    prob: SemilinearProblem,
    base: WeightedTrajectory | None,
    N: int,
    theta: float,
    h: WeightedTrajectory | None,
    p: np.ndarray | None,
    cfg: SolverConfig = SolverConfig(),
    jac_scale_bound: float | None = None,
) -> WeightedTrajectory:
    """Solve dv/dt + Av - F'(u(t)) v = h, P_N v(0) = p, on the grid of base/h.

    Fixed point v <- T(F'(u)v + h) + H(p); the gap window
    lambda_N + L < theta < lambda_{N+1} - L makes it a contraction with ratio
    <= L / min(theta - lambda_N, lambda_{N+1} - theta).  Anderson mixing kicks
    in when that bound exceeds the configured threshold.
    """
    lam = prob.operator.eigenvalues
    L = prob.lipschitz if jac_scale_bound is None else jac_scale_bound
    lo = lam[N - 1] if N >= 1 else 0.0
    gap_min = min(theta - lo, lam[N] - theta)
    if gap_min <= L:
        raise PreconditionError(
            f"theta={theta} violates the gap window (lambda_N + L, lambda_N+1 - L)"
        )
    ratio_bound = L / gap_min

    if base is None and h is None:
        raise InputError("need a base trajectory or a right-hand side to set the grid")
    grid_src = base if base is not None else h
    times = grid_src.times
    K = prob.dim

    hp = homog_apply(prob.operator, N, np.zeros(K) if p is None else _pad(p, K, N), times, theta)
    h_vals = np.zeros((times.size, K)) if h is None else h.values
    if h is not None and not np.array_equal(h.times, times):
        raise InputError("h and base grids differ")

    jac = None
    if base is not None:
        u_vals = base.values

        def jac(v_vals):
            return prob.nonlinearity.jac_apply(u_vals, v_vals)

    v = hp.values.copy()
    anderson = _Anderson(cfg.anderson_depth) if ratio_bound > cfg.anderson_threshold else None
    weight = np.exp(theta * times)[:, None]
    prev_inc = None
    for it in range(cfg.max_iter):
        rhs = h_vals if jac is None else h_vals + jac(v)
        tv = green_apply(prob.operator, N, theta, WeightedTrajectory(times, rhs, theta))
        gx = tv.values + hp.values
        if anderson is not None:
            vnew = anderson.push(v.ravel().copy(), gx.ravel().copy()).reshape(v.shape)
        else:
            vnew = gx
        inc = float(np.abs(weight * (vnew - v)).max())
        v = vnew
        if jac is None:
            break  # linear case: one application is exact
        if inc <= cfg.tol * 0.1:
            break
        if prev_inc is not None and anderson is None and inc > prev_inc * 1.001 and it > 3:
            raise ConvergenceError(
                f"fixed point diverging: increment {inc:.3e} after {it} iterations "
                f"(ratio bound {ratio_bound:.3f})"
            )
        prev_inc = inc
    else:
        raise ConvergenceError(
            f"no convergence in {cfg.max_iter} iterations (ratio bound {ratio_bound:.3f})"
        )
    return WeightedTrajectory(times, v, theta)


def _pad(p: np.ndarray, K: int, N: int) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape == (K,):
        return p
    if p.shape == (N,):
        out = np.zeros(K)
        out[:N] = p
        return out
    raise InputError(f"boundary data must have dim {N} or {K}")
