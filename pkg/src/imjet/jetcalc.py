"""Exact finite-dimensional multilinear and polynomial algebra.

Symmetric k-linear forms are stored as compressed monomial coefficient
tables (graded-lex multiset order), so symmetry is structural.  A jet is
a list of such forms P_0..P_n with the convention that evaluation applies
the 1/k! factors, i.e. jet(xi) = sum_k (1/k!) P_k(xi,...,xi).

Everything here is immutable after construction and free of global state.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable, Sequence

import numpy as np

from .errors import CapabilityError, InputError

__all__ = [
    "SymMultiForm",
    "Jet",
    "monomial_exponents",
    "eval_polynomial",
    "polarize",
    "extract_components",
    "binomial_expand",
    "compose_truncate",
    "compat_residual",
    "compat_residual_components",
    "converse_taylor_check",
]

MAX_EXTRACT_ORDER = 6  # scalar Vandermonde on nodes j/n degrades fast beyond this


def monomial_exponents(dim: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent multi-indices of the degree-`degree` monomials in `dim` variables.

    Order is graded-lex on the underlying variable multiset, i.e. the order
    of itertools.combinations_with_replacement on variable indices.  This is
    the canonical coefficient layout used everywhere, including JSON output.
    """
    if degree == 0:
        return [(0,) * dim]
    out = []
    for combo in combinations_with_replacement(range(dim), degree):
        alpha = [0] * dim
        for i in combo:
            alpha[i] += 1
        out.append(tuple(alpha))
    return out


def _monomial_count(dim: int, degree: int) -> int:
    return math.comb(dim + degree - 1, degree) if degree > 0 else 1


def _eval_monomials(exponents: Sequence[tuple[int, ...]], xi: np.ndarray) -> np.ndarray:
    """Values xi^alpha for each exponent; xi may be (d,) or a batch (..., d)."""
    xi = np.asarray(xi, dtype=float)
    cols = [np.prod(xi ** np.asarray(alpha, dtype=float), axis=-1) for alpha in exponents]
    return np.stack(cols, axis=-1)


@dataclass(frozen=True)
class SymMultiForm:
    """Symmetric k-linear form, kept as the coefficients of its diagonal polynomial.

    coeffs has shape (dim_out, n_monomials); P(xi) = coeffs @ monomials(xi).
    The multilinear map is recovered on demand (dense tensor or polarization).
    """

    degree: int
    dim_in: int
    dim_out: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        want = (self.dim_out, _monomial_count(self.dim_in, self.degree))
        if c.shape != want:
            raise InputError(f"coeff shape {c.shape} != {want} for degree {self.degree}")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def exponents(self) -> list[tuple[int, ...]]:
        return monomial_exponents(self.dim_in, self.degree)

    @classmethod
    def zero(cls, degree: int, dim_in: int, dim_out: int) -> "SymMultiForm":
        return cls(degree, dim_in, dim_out, np.zeros((dim_out, _monomial_count(dim_in, degree))))

    @classmethod
    def from_monomials(cls, degree, dim_in, dim_out, table: dict) -> "SymMultiForm":
        """Build from {exponent tuple: output vector}."""
        exps = monomial_exponents(dim_in, degree)
        index = {a: j for j, a in enumerate(exps)}
        coeffs = np.zeros((dim_out, len(exps)))
        for alpha, vec in table.items():
            coeffs[:, index[tuple(alpha)]] = np.asarray(vec, dtype=float).reshape(dim_out)
        return cls(degree, dim_in, dim_out, coeffs)

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        """Evaluate the diagonal polynomial P(xi) = M(xi,...,xi)."""
        xi = np.asarray(xi, dtype=float)
        if xi.shape[-1] != self.dim_in:
            raise InputError(f"argument dim {xi.shape[-1]} != {self.dim_in}")
        if self.degree == 0:
            shape = xi.shape[:-1] + (self.dim_out,)
            return np.broadcast_to(self.coeffs[:, 0], shape).copy()
        return _eval_monomials(self.exponents, xi) @ self.coeffs.T

    def dense_tensor(self) -> np.ndarray:
        """Full symmetric tensor T with shape (dim_out, d, d, ..., d) [k axes].

        T[alpha-position] = (alpha!/k!) * monomial coefficient, replicated over
        all index permutations.  Only sensible for small d**k.
        """
        k, d = self.degree, self.dim_in
        T = np.zeros((self.dim_out,) + (d,) * k)
        if k == 0:
            return self.coeffs[:, 0].copy()
        for j, alpha in enumerate(self.exponents):
            fac = np.prod([math.factorial(a) for a in alpha]) / math.factorial(k)
            val = self.coeffs[:, j] * fac
            idx = []
            for i, a in enumerate(alpha):
                idx.extend([i] * a)
            # write the same value to every distinct permutation of idx
            from itertools import permutations

            for perm in set(permutations(idx)):
                T[(slice(None),) + perm] = val
        return T

    def apply(self, args: Sequence[np.ndarray]) -> np.ndarray:
        """Multilinear evaluation M(v_1, ..., v_k) via dense-tensor contraction."""
        if len(args) != self.degree:
            raise InputError(f"need {self.degree} arguments, got {len(args)}")
        if self.degree == 0:
            return self.coeffs[:, 0].copy()
        T = self.dense_tensor()
        for v in args:
            v = np.asarray(v, dtype=float)
            if v.shape != (self.dim_in,):
                raise InputError("argument dimension mismatch")
            T = T @ v
        return T

    def norm_estimate(self, samples: int = 256, rng: np.random.Generator | None = None) -> float:
        """Sampled sup of |P(xi)|/|xi|^k over random unit directions.

        Exact injective norms are NP-hard in general; a sampled lower bound is
        what the residual tests actually need.
        """
        if self.degree == 0:
            return float(np.linalg.norm(self.coeffs[:, 0]))
        rng = rng or np.random.default_rng(0)
        xi = rng.standard_normal((samples, self.dim_in))
        xi /= np.linalg.norm(xi, axis=1, keepdims=True)
        vals = np.linalg.norm(self(xi), axis=-1)
        return float(vals.max())

    def scale(self, c: float) -> "SymMultiForm":
        return SymMultiForm(self.degree, self.dim_in, self.dim_out, self.coeffs * c)

    def add(self, other: "SymMultiForm") -> "SymMultiForm":
        if (other.degree, other.dim_in, other.dim_out) != (self.degree, self.dim_in, self.dim_out):
            raise InputError("incompatible forms")
        return SymMultiForm(self.degree, self.dim_in, self.dim_out, self.coeffs + other.coeffs)


@dataclass(frozen=True)
class Jet:
    """Polynomial of degree <= order: components P_0..P_n, 1/k! applied at eval.

    `normalized` records that convention; it is part of the serialized schema
    so readers cannot misinterpret stored coefficients.
    """

    order: int
    components: tuple[SymMultiForm, ...]
    normalized: bool = field(default=True)

    def __post_init__(self):
        if len(self.components) != self.order + 1:
            raise InputError("need one component per degree 0..order")
        for k, P in enumerate(self.components):
            if P.degree != k:
                raise InputError(f"component {k} has degree {P.degree}")
            if P.dim_in != self.dim_in or P.dim_out != self.dim_out:
                raise InputError("component dimensions disagree")
        object.__setattr__(self, "components", tuple(self.components))

    @property
    def dim_in(self) -> int:
        return self.components[0].dim_in

    @property
    def dim_out(self) -> int:
        return self.components[0].dim_out

    @classmethod
    def from_components(cls, comps: Sequence[SymMultiForm]) -> "Jet":
        return cls(len(comps) - 1, tuple(comps))

    @classmethod
    def zero(cls, order: int, dim_in: int, dim_out: int) -> "Jet":
        return cls(order, tuple(SymMultiForm.zero(k, dim_in, dim_out) for k in range(order + 1)))

    @classmethod
    def identity(cls, dim: int, order: int = 1) -> "Jet":
        """Jet of the identity map: P_1 = I, everything else zero."""
        comps = [SymMultiForm.zero(k, dim, dim) for k in range(order + 1)]
        comps[1] = SymMultiForm(1, dim, dim, np.eye(dim))
        return cls(order, tuple(comps))

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        return eval_polynomial(self, xi)

    def truncate(self, m: int) -> "Jet":
        if not 0 <= m <= self.order:
            raise InputError("truncation order out of range")
        return Jet(m, self.components[: m + 1])

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "dim_in": self.dim_in,
            "dim_out": self.dim_out,
            "convention": "P_k stored raw; eval applies 1/k!",
            "components": [
                {"degree": k, "coeffs": P.coeffs.ravel().tolist()}
                for k, P in enumerate(self.components)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, d: dict) -> "Jet":
        comps = []
        for entry in d["components"]:
            k = entry["degree"]
            coeffs = np.asarray(entry["coeffs"], dtype=float).reshape(
                d["dim_out"], _monomial_count(d["dim_in"], k)
            )
            comps.append(SymMultiForm(k, d["dim_in"], d["dim_out"], coeffs))
        return cls(d["order"], tuple(comps))

    @classmethod
    def from_json(cls, s: str) -> "Jet":
        return cls.from_json_dict(json.loads(s))


def eval_polynomial(J: Jet, xi: np.ndarray) -> np.ndarray:
    """sum_k (1/k!) P_k(xi, ..., xi); xi may be batched on leading axes."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1] != J.dim_in:
        raise InputError(f"argument dim {xi.shape[-1]} != jet dim_in {J.dim_in}")
    out = J.components[0](xi)
    for k in range(1, J.order + 1):
        out = out + J.components[k](xi) / math.factorial(k)
    return out


def polarize(P: SymMultiForm, args: Sequence[np.ndarray]) -> np.ndarray:
    """Recover M_P(xi_1..xi_k) from diagonal values by the signed 2^k-term sum.

    M_P = (1/(2^k k!)) sum_{eps in {-1,1}^k} eps_1...eps_k P(sum eps_j xi_j),
    with base point a = 0.
    """
    k = P.degree
    if len(args) != k:
        raise InputError(f"degree {k} form needs {k} arguments, got {len(args)}")
    if k == 0:
        return P.coeffs[:, 0].copy()
    args = [np.asarray(a, dtype=float) for a in args]
    acc = np.zeros(P.dim_out)
    for bits in range(2**k):
        signs = [1.0 if (bits >> j) & 1 else -1.0 for j in range(k)]
        point = sum(s * a for s, a in zip(signs, args))
        acc += np.prod(signs) * P(point)
    return acc / (2**k * math.factorial(k))


def extract_components(
    P: Callable[[np.ndarray], np.ndarray],
    n: int,
    dim_in: int,
    dim_out: int,
    max_order: int = MAX_EXTRACT_ORDER,
) -> list[SymMultiForm]:
    """Split a polynomial evaluator of degree <= n into homogeneous components.

    Per probe direction xi the values P(j/n * xi), j = 0..n, are resolved
    against the scalar Vandermonde on nodes j/n, giving (1/k!) P_k(xi).  The
    forms themselves are then fitted on the degree-n simplex lattice nodes,
    which are unisolvent for every homogeneous degree k <= n.

    Accuracy degrades with the Vandermonde condition number; orders beyond
    `max_order` (default 6) are refused rather than silently wrong.
    """
    if n > max_order:
        raise CapabilityError(
            f"extraction order {n} exceeds supported maximum {max_order} "
            "(Vandermonde conditioning cliff)"
        )
    if n == 0:
        val = np.asarray(P(np.zeros(dim_in)), dtype=float).reshape(dim_out, 1)
        return [SymMultiForm(0, dim_in, dim_out, val)]

    nodes = np.asarray(monomial_exponents(dim_in, n), dtype=float)
    norms = np.linalg.norm(nodes, axis=1)
    nodes = nodes / norms[:, None]

    s = np.arange(n + 1) / n
    V = np.vander(s, n + 1, increasing=True)  # V[j, k] = (j/n)^k; invertible, distinct nodes
    assert abs(np.linalg.det(V)) > 0.0

    # per node: solve for (1/k!) P_k(node), all k at once
    vals = np.empty((len(nodes), n + 1, dim_out))
    for i, node in enumerate(nodes):
        samples = np.stack([np.asarray(P(sj * node), dtype=float).reshape(dim_out) for sj in s])
        vals[i] = np.linalg.solve(V, samples)

    comps = []
    for k in range(n + 1):
        exps = monomial_exponents(dim_in, k)
        A = _eval_monomials(exps, nodes)  # (n_nodes, n_monomials)
        target = vals[:, k, :] * math.factorial(k)  # raw P_k values at nodes
        coeffs, *_ = np.linalg.lstsq(A, target, rcond=None)
        comps.append(SymMultiForm(k, dim_in, dim_out, coeffs.T))
    return comps


def binomial_expand(P: SymMultiForm, j: int) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Mixed-slot evaluator (xi, eta) -> P({xi}^j, {eta}^{n-j}).

    Summing C(n, j) * binomial_expand(P, j)(xi, eta) over j reproduces
    P(xi + eta) (the polynomial binomial identity).
    """
    n = P.degree
    if not 0 <= j <= n:
        raise InputError(f"slot split {j} outside 0..{n}")
    T = P.dense_tensor()

    def evaluator(xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
        out = T
        for _ in range(j):
            out = out @ np.asarray(xi, dtype=float)
        for _ in range(n - j):
            out = out @ np.asarray(eta, dtype=float)
        return out

    return evaluator


class _PolyDict:
    """Tiny helper: polynomial with vector coefficients as {exponent: vector}."""

    __slots__ = ("dim_in", "dim_out", "terms")

    def __init__(self, dim_in: int, dim_out: int, terms: dict | None = None):
        self.dim_in = dim_in
        self.dim_out = dim_out
        self.terms: dict[tuple[int, ...], np.ndarray] = terms or {}

    def add_term(self, alpha: tuple[int, ...], vec: np.ndarray):
        if alpha in self.terms:
            self.terms[alpha] = self.terms[alpha] + vec
        else:
            self.terms[alpha] = np.array(vec, dtype=float)

    @classmethod
    def from_jet(cls, J: Jet) -> "_PolyDict":
        p = cls(J.dim_in, J.dim_out)
        for k, P in enumerate(J.components):
            w = 1.0 / math.factorial(k)
            for jcol, alpha in enumerate(P.exponents):
                vec = P.coeffs[:, jcol] * w
                if np.any(vec != 0.0) or k == 0:
                    p.add_term(alpha, vec)
        return p


def _mul_scalar_polys(a: dict, b: dict, max_deg: int) -> dict:
    """Multiply scalar-coefficient exponent dicts, dropping degree > max_deg."""
    out: dict[tuple[int, ...], float] = {}
    for aa, ca in a.items():
        da = sum(aa)
        for bb, cb in b.items():
            if da + sum(bb) > max_deg:
                continue
            key = tuple(x + y for x, y in zip(aa, bb))
            out[key] = out.get(key, 0.0) + ca * cb
    return out


def compose_truncate(outer: Jet, inners: Sequence[Jet], order: int) -> Jet:
    """Substitute inner jets into the outer jet and drop monomials of degree > order.

    The inner jets share an input space; their outputs are stacked to feed the
    outer jet's input slots.  Coefficients of the dropped-term bookkeeping are
    produced by direct multinomial expansion, never by closed-form chain-rule
    (Faa di Bruno) tables.
    """
    if not inners:
        raise InputError("need at least one inner jet")
    d = inners[0].dim_in
    for J in inners:
        if J.dim_in != d:
            raise InputError("inner jets must share dim_in")
    stacked = sum(J.dim_out for J in inners)
    if outer.dim_in != stacked:
        raise InputError(f"outer dim_in {outer.dim_in} != stacked inner dim_out {stacked}")

    # scalar polynomial (in xi) for each stacked y-coordinate
    y_polys: list[dict[tuple[int, ...], float]] = []
    for J in inners:
        p = _PolyDict.from_jet(J)
        for row in range(J.dim_out):
            y_polys.append(
                {alpha: vec[row] for alpha, vec in p.terms.items() if vec[row] != 0.0 or sum(alpha) == 0}
            )

    one = {(0,) * d: 1.0}
    out = _PolyDict(d, outer.dim_out)
    for k, P in enumerate(outer.components):
        wk = 1.0 / math.factorial(k)
        for jcol, beta in enumerate(P.exponents):
            cvec = P.coeffs[:, jcol]
            if not np.any(cvec != 0.0):
                continue
            mono = one
            for var, power in enumerate(beta):
                for _ in range(power):
                    mono = _mul_scalar_polys(mono, y_polys[var], order)
            for alpha, c in mono.items():
                out.add_term(alpha, cvec * (wk * c))

    comps = []
    for k in range(order + 1):
        table = {
            alpha: vec * math.factorial(k) for alpha, vec in out.terms.items() if sum(alpha) == k
        }
        comps.append(
            SymMultiForm.from_monomials(k, d, outer.dim_out, table)
            if table
            else SymMultiForm.zero(k, d, outer.dim_out)
        )
    return Jet(order, tuple(comps))


def compat_residual(J_at_p1: Jet, J_at_p: Jet, delta: np.ndarray, xi: np.ndarray) -> float:
    """|| J_p(xi + delta) - J_p1(xi) ||, the raw two-point jet mismatch.

    Callers fit the exponent in residual <= C (|xi| + |delta|)^(n + alpha).
    """
    if J_at_p1.dim_in != J_at_p.dim_in or J_at_p1.dim_out != J_at_p.dim_out:
        raise InputError("jets live on different spaces")
    delta = np.asarray(delta, dtype=float)
    xi = np.asarray(xi, dtype=float)
    return float(np.linalg.norm(eval_polynomial(J_at_p, xi + delta) - eval_polynomial(J_at_p1, xi)))


def compat_residual_components(
    J_at_p1: Jet,
    J_at_p: Jet,
    delta: np.ndarray,
    l: int,
    xi_samples: np.ndarray,
) -> float:
    """Degree-l component defect, sampled as a P_l-norm estimate.

    defect(xi) = P_l({xi}^l at p1) - sum_{k<=n-l} (1/k!) P_{l+k}({xi}^l, {delta}^k at p).
    Returns max over samples of ||defect|| / ||xi||^l.
    """
    n = J_at_p.order
    if not 0 <= l <= n:
        raise InputError(f"component index {l} outside 0..{n}")
    delta = np.asarray(delta, dtype=float)
    xi_samples = np.atleast_2d(np.asarray(xi_samples, dtype=float))

    best = 0.0
    for xi in xi_samples:
        acc = J_at_p1.components[l].apply([xi] * l)
        for k in range(n - l + 1):
            mixed = binomial_expand(J_at_p.components[l + k], l)(xi, delta)
            acc = acc - mixed / math.factorial(k)
        denom = np.linalg.norm(xi) ** l if l > 0 else 1.0
        if denom > 0:
            best = max(best, float(np.linalg.norm(acc)) / denom)
    return best


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares log-log slope with the degeneracy sentinel."""

    slope: float
    intercept: float
    degenerate: bool
    radii: np.ndarray
    residuals: np.ndarray


def fit_loglog_slope(radii: np.ndarray, residuals: np.ndarray, floor: float = 1e-14) -> SlopeFit:
    """Slope of log(residual) against log(radius), ignoring sub-floor residuals."""
    radii = np.asarray(radii, dtype=float)
    residuals = np.asarray(residuals, dtype=float)
    keep = residuals > floor
    if keep.sum() < 2:
        return SlopeFit(math.inf, -math.inf, True, radii, residuals)
    x = np.log(radii[keep])
    y = np.log(residuals[keep])
    slope, intercept = np.polyfit(x, y, 1)
    return SlopeFit(float(slope), float(intercept), False, radii, residuals)


def converse_taylor_check(
    F: Callable[[np.ndarray], np.ndarray],
    u: np.ndarray,
    jet: Jet,
    radii: Sequence[float],
    directions: np.ndarray | None = None,
    rng: np.random.Generator | None = None,
) -> SlopeFit:
    """Fit the remainder exponent ||F(u+xi) - jet(xi)|| ~ |xi|^s.

    A slope >= n + alpha - 0.1 certifies C^{n,alpha}-consistency of the jet
    data at u; if every residual sits below 1e-14 the fit is degenerate and
    the +inf sentinel is returned with the flag set.
    """
    u = np.asarray(u, dtype=float)
    radii = np.asarray(sorted(radii), dtype=float)
    if len(radii) < 8 or radii[-1] / radii[0] < 99.0:
        raise InputError("need >= 8 radii spanning >= 2 decades")
    if directions is None:
        rng = rng or np.random.default_rng(7)
        directions = rng.standard_normal((4, jet.dim_in))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    directions = np.atleast_2d(directions)

    rs, res = [], []
    for r in radii:
        for e in directions:
            xi = r * e
            val = np.asarray(F(u + xi), dtype=float)
            rs.append(r)
            res.append(np.linalg.norm(val - eval_polynomial(jet, xi)))
    return fit_loglog_slope(np.asarray(rs), np.asarray(res))
