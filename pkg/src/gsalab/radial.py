"""Radial reduction of the expected influence of random halfspace polytopes.

Averaging the dilation derivative over both the body and the Gaussian point
collapses to a one-dimensional integral over the radius rho:

    E[influence] = integral  chi_n(rho) * s * tau_n * F(rho) * P(rho)^(s-1) drho,

with F the dilation-derivative factor and P the cap measure at ratio r/rho.
Everything here is assembled in log space per node, because s reaches 1e7
and beyond while P sits just below one.  The module also evaluates the
step-by-step lower-bound chain on the radius shell, the facet-count
selection rule, and the scalar optimization recovering the limiting
constant e^(-5/4).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cap import (cap_log_complement_from_ratio, log_complement_upper_from_ratio,
                  log_F_dilation)
from .golden import golden_section_max, grid_then_golden_min
from .quadrature import QuadratureConvergenceError, composite_nodes, integrate_doubling
from .specfun import chi_log_density, log1mexp, log_gaussian_cdf, log_tau_n

SQRT_2PI = math.sqrt(2.0 * math.pi)
_REL_TOL = 1e-8
_GIVE_UP_TOL = 1e-6
_MAX_DOUBLINGS = 12
_CHAIN_SLACK = 1e-10


class ChainViolationError(RuntimeError):
    """A step of the lower-bound chain came out above its predecessor.

    Every step is an inequality, so a numerical violation beyond slack means
    an implementation bug, not an unlucky configuration.
    """


@dataclass(frozen=True)
class QuadratureSpec:
    """Radial integration window and rule.

    The default window covers [sqrt(n) - 12, sqrt(n) + 12] clipped to the
    positive axis; the Gaussian-norm density outside is below e^-70 of its
    peak, far under the convergence tolerance.
    """

    rho_lo: float
    rho_hi: float
    nodes: int = 128
    rule: str = "gauss-legendre"

    def __post_init__(self):
        if not (self.rho_lo >= 0.0 and self.rho_hi > self.rho_lo):
            raise ValueError(f"invalid window [{self.rho_lo}, {self.rho_hi}]")
        if self.nodes < 16:
            raise ValueError(f"need at least 16 nodes, got {self.nodes}")
        if self.rule not in ("gauss-legendre", "adaptive"):
            raise ValueError(f"unknown rule: {self.rule}")

    @classmethod
    def for_dimension(cls, n: int, nodes: int = 128, rule: str = "gauss-legendre"):
        root = math.sqrt(n)
        return cls(rho_lo=max(root - 12.0, 0.0), rho_hi=root + 12.0,
                   nodes=nodes, rule=rule)


@dataclass(frozen=True)
class ShellA:
    """Radius band [sqrt(n) - t, sqrt(n) + t] carrying nearly all Gaussian mass."""

    n: int
    t: float
    rho_min: float
    rho_max: float

    def __post_init__(self):
        if not self.rho_min > 0.0:
            raise ValueError(f"shell reaches nonpositive radii: rho_min={self.rho_min}")


def shell_for(n: int, t: float | None = None) -> ShellA:
    """Shell with half-width t, defaulting to n^(1/4)."""
    if t is None:
        t = n**0.25
    if not t > 0.0:
        raise ValueError(f"shell half-width must be > 0, got {t}")
    root = math.sqrt(n)
    return ShellA(n=n, t=t, rho_min=root - t, rho_max=root + t)


@dataclass(frozen=True)
class LowerBoundReport:
    """Per-configuration record of the exact integral and the chain of bounds.

    chain_value is the shell infimum bound with the exact cap complement
    replaced by its closed-form upper bound; bernoulli_value additionally
    relaxes (1-G)^s through exp(-sG)(1 - s G^2 e^G).  Both come with log
    fields because at large n they underflow linear doubles long before the
    ordering checks lose meaning.
    """

    n: int
    r: float
    s: float
    alpha: float
    c1: float
    exact_quadrature: float
    chain_value: float
    bernoulli_value: float
    gsa_lower: float
    ratio_to_n14: float
    log_chain_value: float
    log_bernoulli_value: float
    vol_shell: float
    inf_F: float
    inf_G: float
    sup_G: float
    stitch_factor_min: float


def _logsumexp(values: np.ndarray) -> float:
    top = float(np.max(values)) if values.size else -math.inf
    if not math.isfinite(top):
        return top
    return top + math.log(float(np.sum(np.exp(values - top))))


@lru_cache(maxsize=256)
def _node_table(n: int, r: float, lo: float, hi: float, nodes: int):
    """Cached per-node pieces of the log integrand that do not involve s."""
    x, w = composite_nodes(lo, hi, nodes)
    base = (np.log(w) + chi_log_density(n, x) + log_tau_n(n)
            + log_F_dilation(n, r, x))
    log_p = log1mexp(cap_log_complement_from_ratio(n, r / x))
    return base, log_p


def influence_log_integrand(n: int, r: float, s: float, rho):
    """log of the radial integrand; finite or -inf for any admissible input.

    Exposed for overflow auditing: with s up to 1e9 and n up to 1e5 every
    intermediate stays in log space.
    """
    rho_arr = np.atleast_1d(np.asarray(rho, dtype=float))
    out = (chi_log_density(n, rho_arr) + math.log(s) + log_tau_n(n)
           + log_F_dilation(n, r, rho_arr)
           + (s - 1.0) * log1mexp(cap_log_complement_from_ratio(n, r / rho_arr)))
    return float(out[0]) if np.isscalar(rho) else out


def expected_influence_quadrature(n: int, r: float, s: float,
                                  spec: QuadratureSpec | None = None) -> float:
    """E[influence] of the random polytope by radial quadrature.

    Composite Gauss-Legendre with node doubling until successive values agree
    to 1e-8 relative (in the log); failure to reach 1e-6 raises with the node
    ladder attached.  F vanishes identically below rho = r, so integration
    starts at max(window_lo, r) and the clamp kink never sits inside a panel.
    """
    if n < 4:
        raise ValueError(f"radial reduction needs n >= 4, got {n}")
    if not r > 0.0:
        raise ValueError(f"offset r must be > 0, got {r}")
    if not s >= 1.0:
        raise ValueError(f"facet count must be >= 1, got {s}")
    if spec is None:
        spec = QuadratureSpec.for_dimension(n)
    lo = max(spec.rho_lo, r)
    if lo >= spec.rho_hi:
        return 0.0

    if spec.rule == "adaptive":
        from .quadrature import adaptive_quad

        def integrand(x):
            return np.exp(influence_log_integrand(n, r, s, x))

        return adaptive_quad(integrand, lo, spec.rho_hi, abs_tol=1e-10)

    log_s = math.log(s)
    history = []
    prev = None
    nodes = spec.nodes
    for _ in range(_MAX_DOUBLINGS + 1):
        base, log_p = _node_table(n, r, lo, spec.rho_hi, nodes)
        log_val = _logsumexp(base + log_s + (s - 1.0) * log_p)
        history.append((nodes, log_val))
        if prev is not None:
            if (prev == -math.inf and log_val == -math.inf) or \
               abs(log_val - prev) <= _REL_TOL:
                return math.exp(log_val)
        prev = log_val
        nodes *= 2
    if abs(history[-1][1] - history[-2][1]) <= _GIVE_UP_TOL:
        return math.exp(history[-1][1])
    raise QuadratureConvergenceError(
        f"influence quadrature at (n={n}, r={r}, s={s}) did not stabilize; "
        f"log-value ladder {history}", history=history)


def expected_gsa(n: int, r: float, s: float,
                 spec: QuadratureSpec | None = None) -> float:
    """E[surface area] = E[influence] / r; every boundary point has x.normal = r."""
    return expected_influence_quadrature(n, r, s, spec) / r


def choose_s(n: int, r: float, c1: float, t: float | None = None,
             monotonicity_grid: int = 257) -> int:
    """Facet count from the selection rule s * inf_shell(F) = c1.

    F must be increasing across the shell so its infimum sits at the inner
    edge; that holds whenever the shell stays below r * sqrt(n - 2) and is
    re-verified numerically on every call.
    """
    if not c1 > 0.0:
        raise ValueError(f"c1 must be > 0, got {c1}")
    shell = shell_for(n, t)
    if shell.rho_min <= r:
        raise ValueError(
            f"degenerate shell: inner radius {shell.rho_min} does not clear r={r}")
    grid = np.linspace(shell.rho_min, shell.rho_max, monotonicity_grid)
    log_f = log_F_dilation(n, r, grid)
    if not np.all(np.diff(log_f) > 0.0):
        raise RuntimeError(
            f"F is not increasing on the shell at (n={n}, r={r}); "
            "the inner-edge infimum rule does not apply")
    inf_f = math.exp(float(log_f[0]))
    return max(1, int(round(c1 / inf_f)))


def optimal_c1():
    """Maximize (c/sqrt(2 pi)) exp(-c e^(1/4) / sqrt(2 pi)) over c in [0.1, 10].

    Returns (argmax, max value).  Golden section brackets the peak; a short
    derivative-sign bisection on central differences then pins the argmax
    past the flat-comparison noise floor of the raw search.  The closed forms
    are sqrt(2 pi) e^(-1/4) and e^(-5/4).
    """
    rate = math.exp(0.25) / SQRT_2PI

    def log_f(c):
        return math.log(c) - math.log(SQRT_2PI) - rate * c

    x0, _ = golden_section_max(log_f, 0.1, 10.0, tol=1e-6)

    h = 1e-5

    def slope(c):
        return log_f(c + h) - log_f(c - h)

    lo, hi = x0 - 1e-3, x0 + 1e-3
    widen = 0
    while not (slope(lo) > 0.0 > slope(hi)):
        lo, hi = x0 - 10 * (x0 - lo), x0 + 10 * (hi - x0)
        widen += 1
        if widen > 5:
            raise RuntimeError("stationary point of the c1 objective not bracketed")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if slope(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    c_star = 0.5 * (lo + hi)
    return c_star, math.exp(log_f(c_star))


def optimize_s(n: int, r: float, spec: QuadratureSpec | None = None,
               coarse_grid: int = 48):
    """Directly maximize expected surface area over the facet count.

    Works on ln s (continuous relaxation, rounded at the end): a coarse scan
    brackets the peak, golden section refines it.  The bracket is centered
    where s times the cap-complement bound at radius sqrt(n) is order one,
    which is where the integrand stops being killed by either factor.
    """
    if n < 7:
        raise ValueError(f"optimize_s needs n >= 7, got {n}")
    if not r > 0.0:
        raise ValueError(f"offset r must be > 0, got {r}")
    log_g_center = float(log_complement_upper_from_ratio(n, r / math.sqrt(n)))

    def objective(ln_s):
        return expected_gsa(n, r, math.exp(ln_s), spec)

    half_width = math.log(1e3)
    for attempt in range(4):
        lo = max(0.0, -log_g_center - half_width)
        hi = max(lo + 1.0, -log_g_center + half_width)
        grid = np.linspace(lo, hi, coarse_grid)
        vals = np.array([objective(g) for g in grid])
        k = int(np.argmax(vals))
        if 0 < k < coarse_grid - 1 or (k == 0 and lo == 0.0):
            break
        half_width *= 2.0
    else:
        raise RuntimeError(f"facet-count optimum not bracketed at (n={n}, r={r})")
    a = grid[max(0, k - 1)]
    b = grid[min(coarse_grid - 1, k + 1)]
    ln_star, _ = golden_section_max(objective, a, b, tol=1e-6)
    s_star = max(1, int(round(math.exp(ln_star))))
    return s_star, expected_gsa(n, r, float(s_star), spec)


def _shell_min(fn, shell: ShellA) -> float:
    _, val = grid_then_golden_min(fn, shell.rho_min, shell.rho_max, grid=513, tol=1e-9)
    return val


def lower_bound_chain(n: int, r: float, s: float,
                      spec: QuadratureSpec | None = None,
                      t: float | None = None) -> LowerBoundReport:
    """Evaluate every step of the shell lower bound at finite n.

    Steps, each a pointwise theorem on the shell (no asymptotics):

      exact >= vol(shell) * inf{ s tau F P^(s-1) }                    (v1)
            >= vol(shell) * tau * inf{ s F (1-G)^(s-1) }             (v2, cap bound)
            >= vol(shell) * tau * c1 * inf{ (1-G)^s }                (v3, c1 = s inf F)
            >= vol(shell) * tau * c1 * inf{ e^(-sG) (1 - s G^2 e^G) } (v4, Bernoulli)

    Any ordering violation beyond 1e-10 relative slack raises.  chain_value
    is v2, bernoulli_value is v4.
    """
    exact = expected_influence_quadrature(n, r, s, spec)
    shell = shell_for(n, t)
    log_tau = log_tau_n(n)
    log_s = math.log(s)

    vol_shell = integrate_doubling(
        lambda x: np.exp(chi_log_density(n, x)), shell.rho_min, shell.rho_max,
        nodes=128, rel_tol=1e-12)
    log_vol = math.log(vol_shell)

    def lF(rho):
        return float(log_F_dilation(n, r, rho))

    def lG(rho):
        return float(log_complement_upper_from_ratio(n, r / rho))

    def lP(rho):
        return float(log1mexp(cap_log_complement_from_ratio(n, r / rho)))

    def l1mG(rho):
        g = lG(rho)
        return float(log1mexp(g)) if g < 0.0 else -math.inf

    log_inf_F = _shell_min(lF, shell)
    log_inf_G = _shell_min(lG, shell)
    log_sup_G = -_shell_min(lambda rho: -lG(rho), shell)
    log_c1 = log_s + log_inf_F

    def stitch_log(rho):
        g_log = lG(rho)
        sg_log = log_s + g_log
        if sg_log > 700.0:
            return -math.inf
        sg = math.exp(sg_log)
        g = math.exp(g_log)
        factor = 1.0 - sg * g * math.exp(min(g, 700.0))
        if factor <= 0.0:
            return -math.inf
        return -sg + math.log(factor)

    def stitch_factor(rho):
        g = math.exp(lG(rho))
        sg2 = math.exp(min(log_s + 2.0 * lG(rho), 700.0))
        return 1.0 - sg2 * math.exp(min(g, 700.0))

    log_v1 = log_vol + _shell_min(lambda rho: log_s + log_tau + lF(rho)
                                  + (s - 1.0) * lP(rho), shell)
    log_v2 = log_vol + log_tau + _shell_min(lambda rho: log_s + lF(rho)
                                            + (s - 1.0) * l1mG(rho), shell)
    log_v3 = log_vol + log_tau + log_c1 + _shell_min(lambda rho: s * l1mG(rho), shell)
    log_v4 = log_vol + log_tau + log_c1 + _shell_min(stitch_log, shell)
    stitch_min = _shell_min(stitch_factor, shell)

    def check(name, larger_log, smaller_log):
        if smaller_log == -math.inf:
            return
        if math.exp(smaller_log) > math.exp(min(larger_log, 700.0)) * (1.0 + _CHAIN_SLACK) \
           + _CHAIN_SLACK:
            raise ChainViolationError(
                f"chain step {name} violated at (n={n}, r={r}, s={s}): "
                f"log {larger_log} < log {smaller_log}")

    log_exact = math.log(exact) if exact > 0.0 else -math.inf
    check("exact >= v1", log_exact, log_v1)
    check("v1 >= v2", log_v1, log_v2)
    check("v2 >= v3", log_v2, log_v3)
    check("v3 >= v4", log_v3, log_v4)

    chain_value = math.exp(log_v2) if log_v2 > -math.inf else 0.0
    bernoulli_value = math.exp(log_v4) if log_v4 > -math.inf else 0.0
    return LowerBoundReport(
        n=n, r=r, s=s, alpha=r / n**0.25,
        c1=math.exp(log_c1),
        exact_quadrature=exact,
        chain_value=chain_value,
        bernoulli_value=bernoulli_value,
        gsa_lower=chain_value / r,
        ratio_to_n14=(exact / r) / n**0.25,
        log_chain_value=log_v2,
        log_bernoulli_value=log_v4,
        vol_shell=vol_shell,
        inf_F=math.exp(log_inf_F),
        inf_G=math.exp(log_inf_G),
        sup_G=math.exp(log_sup_G),
        stitch_factor_min=stitch_min,
    )


def scan_report(n_list, alpha_list, spec: QuadratureSpec | None = None,
                threads: int = 1) -> list[LowerBoundReport]:
    """Optimize the facet count and run the chain for each (n, alpha) cell.

    r = alpha * n^(1/4) per cell.  Cells are pure computations; with
    threads > 1 they run on a pool, and results come back in (n, alpha)
    order either way.
    """
    cells = [(n, alpha) for n in n_list for alpha in alpha_list]

    def run(cell):
        n, alpha = cell
        if n < 7:
            raise ValueError(f"scan needs n >= 7, got {n}")
        r = alpha * n**0.25
        per_n_spec = spec if spec is not None else QuadratureSpec.for_dimension(n)
        s_star, _ = optimize_s(n, r, per_n_spec)
        return lower_bound_chain(n, r, float(s_star), per_n_spec)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, cells))
    return [run(cell) for cell in cells]


def ball_influence_quadrature(n: int, R: float) -> float:
    """Influence of the radius-R ball as the radial moment integral.

    integral_0^R chi_n(rho) (n - rho^2) drho; the independent oracle for the
    exact sphere surface-area formula via influence = R * GSA.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if not R > 0.0:
        raise ValueError(f"radius must be > 0, got {R}")

    def integrand(rho):
        return np.exp(chi_log_density(n, rho)) * (n - rho**2)

    return integrate_doubling(integrand, 0.0, R, nodes=64, rel_tol=1e-12)


def expected_influence_naz_prime(n: int, w: float, s: float,
                                 spec: QuadratureSpec | None = None) -> float:
    """E[influence] for the Gaussian-normal variant, by the same reduction.

    A point at radius rho survives one Gaussian halfspace {x.g <= w} with
    probability Phi(w/rho), so E[influence] integrates
    chi_n(rho) Phi(w/rho)^s (n - rho^2).  The sign change of (n - rho^2)
    keeps this one out of pure log space; the survival factor is still
    assembled as s * log Phi.
    """
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    if not w > 0.0:
        raise ValueError(f"offset w must be > 0, got {w}")
    if not s >= 1.0:
        raise ValueError(f"facet count must be >= 1, got {s}")
    if spec is None:
        spec = QuadratureSpec.for_dimension(n)
    lo = max(spec.rho_lo, 1e-9)

    def integrand(rho):
        log_surv = s * np.array([log_gaussian_cdf(w / p) for p in rho])
        return np.exp(chi_log_density(n, rho) + log_surv) * (n - rho**2)

    return integrate_doubling(integrand, lo, spec.rho_hi, nodes=spec.nodes,
                              rel_tol=1e-10)
