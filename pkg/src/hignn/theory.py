"""Closed-form prediction of rewired-graph homophily, with a Monte-Carlo check.

Model: each node's neighbor-label distribution is its class prototype
(own-class entry h, every other entry (1-h)/(c-1)) with independent
Gaussian noise of standard deviation sigma on every entry. Two nodes get
connected when the cosine similarity of their noisy distributions exceeds
delta. The closed form predicts the homophily degree of the resulting
graph by a first-order tail computation:

    t_plus  = (m_intra - delta * h_norm) / (sqrt(h_norm) * sqrt(2) * sigma)
    t_minus = (m_inter - delta * h_norm) / (sqrt(h_norm) * sqrt(2) * sigma)
    h_hat   = 1 / (1 + (c - 1) * Phi(t_minus) / Phi(t_plus))

where m_intra / m_inter are the noiseless prototype dot products and
h_norm = m_intra is the noiseless squared prototype norm. The Phi ratio is
evaluated in log space so small-sigma tails never underflow to 0/0.

``mc_simulate_hhat`` is the independent check: it samples noisy
distribution pairs and computes their exact cosine similarity, keeping
the squared-noise terms and per-sample norms that the closed form drops.
The two agree well at small noise but visibly diverge for large sigma or
thresholds close to 1, where the dropped terms matter; see the test suite
for measured gaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TheoryParams",
    "TheoryResult",
    "McEstimate",
    "SignReport",
    "DerivativeSigns",
    "std_normal_cdf",
    "log_std_normal_cdf",
    "closed_form_hhat",
    "mc_simulate_hhat",
    "sweep",
    "derivative_signs",
]

_SQRT2 = math.sqrt(2.0)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
# Below this argument the direct erfc evaluation of Phi loses precision to
# subnormals, so the log branch switches to an asymptotic tail expansion.
_TAIL_SWITCH = -8.0


@dataclass(frozen=True)
class TheoryParams:
    """Inputs of the prediction: original homophily, noise level, threshold, classes."""

    h: float
    sigma: float
    delta: float
    c: int

    def __post_init__(self):
        if not 0.0 <= self.h <= 1.0:
            raise ValueError(f"h must lie in [0, 1], got {self.h}")
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {self.delta}")
        if self.c < 2:
            raise ValueError(f"c must be at least 2, got {self.c}")


@dataclass(frozen=True)
class TheoryResult:
    h_hat: float
    t_plus: float
    t_minus: float
    p_intra: float
    p_inter: float
    h_norm: float


@dataclass(frozen=True)
class McEstimate:
    h_hat_mc: float
    p_intra_mc: float
    p_inter_mc: float
    n_pairs: int
    seed: int
    std_err: float


def std_normal_cdf(x: float) -> float:
    """Phi(x) through the complementary error function (<= 1e-12 absolute)."""
    if not math.isfinite(x):
        raise ValueError(f"argument must be finite, got {x}")
    return 0.5 * math.erfc(-x / _SQRT2)


def log_std_normal_cdf(x: float) -> float:
    """log Phi(x), switching to an asymptotic tail expansion below -8.

    The expansion is Phi(x) = phi(|x|)/|x| * (1 - 1/x^2 + 3/x^4 - ...),
    whose truncation error is far below the direct branch's subnormal loss
    for |x| >= 8.
    """
    if not math.isfinite(x):
        raise ValueError(f"argument must be finite, got {x}")
    if x >= _TAIL_SWITCH:
        return math.log(std_normal_cdf(x))
    ax = -x
    inv2 = 1.0 / (ax * ax)
    series = 1.0
    term = 1.0
    for k in range(1, 13):
        term *= -(2 * k - 1) * inv2
        series += term
        if abs(term) < 1e-17 * series:
            break
    return -0.5 * ax * ax - _LOG_SQRT_2PI - math.log(ax) + math.log(series)


def _prototype_terms(h: float, c: int) -> tuple[float, float, float]:
    """(own entry, other entry, squared prototype norm)."""
    a = h
    b = (1.0 - h) / (c - 1)
    h_norm = a * a + (1.0 - h) ** 2 / (c - 1)
    return a, b, h_norm


def closed_form_hhat(params: TheoryParams) -> TheoryResult:
    """First-order prediction of the rewired graph's homophily degree.

    t_minus is computed as t_plus - (a - b)^2 / s, which is algebraically
    identical to the direct inter-class numerator but makes the h = 1/c
    symmetry (t_plus == t_minus, h_hat == 1/c) exact to rounding.
    """
    h, sigma, delta, c = params.h, params.sigma, params.delta, params.c
    a, b, h_norm = _prototype_terms(h, c)
    s = math.sqrt(h_norm) * _SQRT2 * sigma
    t_plus = h_norm * (1.0 - delta) / s
    t_minus = t_plus - (a - b) ** 2 / s
    log_ratio = log_std_normal_cdf(t_minus) - log_std_normal_cdf(t_plus)
    h_hat = 1.0 / (1.0 + (c - 1) * math.exp(log_ratio))
    return TheoryResult(
        h_hat=h_hat,
        t_plus=t_plus,
        t_minus=t_minus,
        p_intra=std_normal_cdf(t_plus),
        p_inter=std_normal_cdf(t_minus),
        h_norm=h_norm,
    )


def mc_simulate_hhat(params: TheoryParams, n_pairs: int, seed: int) -> McEstimate:
    """Monte-Carlo estimate over the noisy-distribution model.

    Draws ``n_pairs`` intra-class and ``n_pairs`` inter-class pairs of
    noisy prototype vectors and thresholds their exact cosine similarity.
    No linearization: squared-noise terms and per-sample norms are kept,
    and entries are neither clipped nor renormalized. Deterministic for a
    fixed seed (single stream, fixed draw order).

    The standard error of the homophily estimate comes from the delta
    method over the two independent binomial tail estimates.
    """
    if n_pairs < 1000:
        raise ValueError(f"n_pairs must be at least 1000, got {n_pairs}")
    h, sigma, delta, c = params.h, params.sigma, params.delta, params.c
    a, b, _ = _prototype_terms(h, c)
    protos = np.full((c, c), b)
    np.fill_diagonal(protos, a)
    rng = np.random.default_rng(seed)

    y = rng.integers(0, c, size=n_pairs)
    u = protos[y] + rng.normal(0.0, sigma, size=(n_pairs, c))
    v = protos[y] + rng.normal(0.0, sigma, size=(n_pairs, c))
    s_plus = _cosine_rows(u, v)

    y1 = rng.integers(0, c, size=n_pairs)
    y2 = (y1 + rng.integers(1, c, size=n_pairs)) % c
    u2 = protos[y1] + rng.normal(0.0, sigma, size=(n_pairs, c))
    w = protos[y2] + rng.normal(0.0, sigma, size=(n_pairs, c))
    s_minus = _cosine_rows(u2, w)

    p = float((s_plus > delta).mean())
    q = float((s_minus > delta).mean())
    denom = p + (c - 1) * q
    if denom == 0.0:
        return McEstimate(
            h_hat_mc=float("nan"),
            p_intra_mc=p,
            p_inter_mc=q,
            n_pairs=n_pairs,
            seed=seed,
            std_err=float("inf"),
        )
    h_hat = p / denom
    dfdp = (c - 1) * q / denom**2
    dfdq = -(c - 1) * p / denom**2
    var = dfdp**2 * p * (1 - p) / n_pairs + dfdq**2 * q * (1 - q) / n_pairs
    return McEstimate(
        h_hat_mc=h_hat,
        p_intra_mc=p,
        p_inter_mc=q,
        n_pairs=n_pairs,
        seed=seed,
        std_err=math.sqrt(max(var, 0.0)),
    )


def _cosine_rows(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    nu = np.linalg.norm(u, axis=1)
    nv = np.linalg.norm(v, axis=1)
    denom = nu * nv
    out = np.zeros(u.shape[0])
    nz = denom > 0.0
    out[nz] = (u[nz] * v[nz]).sum(axis=1) / denom[nz]
    return out


def sweep(h_grid, sigma_grid, delta_grid, c_grid) -> list[tuple[TheoryParams, TheoryResult]]:
    """Closed form over the cartesian grid, in (h, sigma, delta, c) order."""
    rows = []
    grids = [list(g) for g in (h_grid, sigma_grid, delta_grid, c_grid)]
    if any(len(g) == 0 for g in grids):
        raise ValueError("all parameter grids must be nonempty")
    for h in grids[0]:
        for sigma in grids[1]:
            for delta in grids[2]:
                for c in grids[3]:
                    params = TheoryParams(h=float(h), sigma=float(sigma), delta=float(delta), c=int(c))
                    rows.append((params, closed_form_hhat(params)))
    return rows


@dataclass(frozen=True)
class SignReport:
    derivative: float
    sign: int
    ok: bool


@dataclass(frozen=True)
class DerivativeSigns:
    d_delta: SignReport
    d_sigma: SignReport
    d_h: SignReport

    @property
    def all_ok(self) -> bool:
        return self.d_delta.ok and self.d_sigma.ok and self.d_h.ok


def derivative_signs(params: TheoryParams, step: float = 1e-5, slack: float = 1e-9) -> DerivativeSigns:
    """Central finite-difference signs of h_hat in delta, sigma, and h.

    Checks, up to ``slack``: nondecreasing in delta, nonincreasing in
    sigma when h != 1/c, and increasing in h exactly when h >= 1/c. The
    difference is re-evaluated at half step; if the two estimates disagree
    both in slacked sign and by a large margin the step cannot resolve the
    derivative and a ValueError is raised instead of guessing.
    """
    h, sigma, delta, c = params.h, params.sigma, params.delta, params.c
    for name, lo, hi, x in (
        ("delta", 0.0, 1.0, delta),
        ("h", 0.0, 1.0, h),
    ):
        if x - step < lo or x + step > hi:
            raise ValueError(f"{name}={x} is within {step} of the domain boundary")
    if sigma - step <= 0.0:
        raise ValueError(f"sigma={sigma} is within {step} of 0")

    def hhat(hh, ss, dd):
        return closed_form_hhat(TheoryParams(h=hh, sigma=ss, delta=dd, c=c)).h_hat

    def central(f, x):
        def fd(e):
            return (f(x + e) - f(x - e)) / (2.0 * e)

        d1, d2 = fd(step), fd(step / 2.0)
        s1, s2 = _slacked_sign(d1, slack), _slacked_sign(d2, slack)
        if s1 != s2 and abs(d1 - d2) > max(1e-6, 0.5 * max(abs(d1), abs(d2))):
            raise ValueError(
                f"step {step} cannot resolve the derivative at x={x}: "
                f"{d1:+.3e} vs {d2:+.3e} at half step"
            )
        return d2

    dd = central(lambda x: hhat(h, sigma, x), delta)
    ds = central(lambda x: hhat(h, x, delta), sigma)
    dh = central(lambda x: hhat(x, sigma, delta), h)

    at_center = abs(h - 1.0 / c) <= slack
    ok_delta = dd >= -slack
    ok_sigma = True if at_center else ds <= slack
    if at_center:
        ok_h = abs(dh) <= max(slack, 1e-6)
    elif h > 1.0 / c:
        ok_h = dh >= -slack
    else:
        ok_h = dh < slack
    return DerivativeSigns(
        d_delta=SignReport(dd, _slacked_sign(dd, slack), ok_delta),
        d_sigma=SignReport(ds, _slacked_sign(ds, slack), ok_sigma),
        d_h=SignReport(dh, _slacked_sign(dh, slack), ok_h),
    )


def _slacked_sign(x: float, slack: float) -> int:
    if x > slack:
        return 1
    if x < -slack:
        return -1
    return 0
