"""Scalar evaluators for the semicontinuity/continuity bounds, keyed by
proposition-style tags, plus the rank/energy constraint records and the
BoundReport evidence type.

Every evaluator is total over its guarded domain, returns 0 at zero closeness,
and is nondecreasing in its closeness parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import EnergyRangeError, ValidationError
from .linalg import binary_entropy, g_func
from .energy import HamiltonianSpec, f_h

HOLDS_SLACK = 1e-8


@dataclass(frozen=True)
class BoundReport:
    """One verified inequality: lhs <= rhs at closeness epsilon."""

    tag: str
    rhs: float
    epsilon: float
    lhs: float | None = None
    params: dict = field(default_factory=dict)

    @property
    def holds(self):
        if self.lhs is None:
            return None
        return self.lhs <= self.rhs + HOLDS_SLACK

    @property
    def slack(self):
        if self.lhs is None:
            return None
        return self.rhs - self.lhs


@dataclass(frozen=True)
class RankConstraint:
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValidationError(f"rank must be >= 1, got {self.rank}")


@dataclass(frozen=True)
class EnergyConstraint:
    energy: float
    ham: HamiltonianSpec


def scb_rank(eps, rank):
    """eps ln(r-1) + h2(eps) for eps <= 1 - 1/r, else ln r (rank-constrained form)."""
    if rank < 2:
        raise ValidationError(f"rank case needs r >= 2, got {rank}")
    eps = float(eps)
    if eps < 0.0:
        raise ValidationError(f"eps must be nonnegative, got {eps}")
    if eps <= 1.0 - 1.0 / rank:
        return eps * math.log(rank - 1) + binary_entropy(eps)
    return math.log(rank)


def scb_energy(eps, energy, ham):
    """eps F_H(E/eps) + g(eps) (energy-constrained form; oscillator F_H = g)."""
    eps = float(eps)
    if eps <= 0.0:
        if eps == 0.0:
            return 0.0
        raise ValidationError(f"eps must be nonnegative, got {eps}")
    if not ham.ground_shifted:
        raise ValidationError("energy bound requires a ground-shifted spectrum")
    return eps * f_h(ham, energy / eps) + g_func(eps)


def _case_term(eps, constraint):
    if isinstance(constraint, RankConstraint):
        return scb_rank(eps, constraint.rank)
    if isinstance(constraint, EnergyConstraint):
        return scb_energy(eps, constraint.energy, constraint.ham)
    raise ValidationError(f"unsupported constraint {constraint!r}")


def scb_holevo(eps, case_a, case_b):
    """A_i(eps) + B_j(eps): one rank/energy term per side of the Holevo bound."""
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise ValidationError(f"eps must lie in [0, 1], got {eps}")
    return _case_term(eps, case_a) + _case_term(eps, case_b)


def cb_holevo_rank(eps, rank_mu, rank_nu):
    """Two-sided rank continuity bound C_mu(eps) + C_nu(eps)."""
    return scb_holevo(eps, RankConstraint(rank_mu), RankConstraint(rank_nu))


def cb_holevo_energy(eps, e_mu, ham_mu, e_nu, ham_nu):
    """Two-sided energy continuity bound eps F(E_mu/eps) + eps F(E_nu/eps) + 2g(eps)."""
    return scb_holevo(
        eps, EnergyConstraint(e_mu, ham_mu), EnergyConstraint(e_nu, ham_nu)
    )


def chi_cb_prior_dim(eps, dim):
    """Prior dimension-constrained Holevo continuity bound: eps ln d + 2g(eps)."""
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise ValidationError(f"eps must lie in (0, 1], got {eps}")
    if dim < 2:
        raise ValidationError(f"dim must be >= 2, got {dim}")
    return eps * math.log(dim) + 2.0 * g_func(eps)


def _h2_clamped(x):
    return binary_entropy(min(max(x, 0.0), 1.0))


def chi_cb_prior_energy(eps, energy, ham, grid=1000):
    """Prior energy-constrained Holevo continuity bound, minimized over its

    free parameter t in (0, 1/(2 eps)] by a log-spaced grid plus golden-section
    refinement. Returns (value, minimizer).
    """
    eps = float(eps)
    if not 0.0 < eps <= 1.0:
        raise ValidationError(f"eps must lie in (0, 1], got {eps}")
    t_hi = 1.0 / (2.0 * eps)
    t_lo = min(1e-6, t_hi * 1e-6)
    if t_lo >= t_hi:
        raise ValidationError("empty feasible interval for the free parameter")

    def objective(t):
        r_t = (1.0 + t / 2.0) / (1.0 - eps * t)
        try:
            f_val = f_h(ham, energy / (eps * t))
        except EnergyRangeError:
            return math.inf
        return (
            eps * (2.0 * t + r_t) * f_val
            + 2.0 * g_func(eps * r_t)
            + 2.0 * _h2_clamped(eps * t)
        )

    ts = [t_lo * (t_hi / t_lo) ** (k / (grid - 1)) for k in range(grid)]
    vals = [objective(t) for t in ts]
    k_best = min(range(grid), key=lambda k: vals[k])
    lo = ts[max(k_best - 1, 0)]
    hi = ts[min(k_best + 1, grid - 1)]
    phi_ratio = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi_ratio * (b - a)
    d = a + phi_ratio * (b - a)
    fc, fd = objective(c), objective(d)
    for _ in range(80):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi_ratio * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi_ratio * (b - a)
            fd = objective(d)
    t_star = 0.5 * (a + b)
    return min(objective(t_star), vals[k_best]), t_star


def u_func(eps):
    """u(eps) = (1-eps^2)^(2/eps) ((1+eps)/(1-eps))^2, via the stable product
    (1+eps)^(2/eps+2) (1-eps)^(2/eps-2); u(1) = 16 exactly."""
    eps = float(eps)
    if not 0.0 < eps <= 1.0:
        raise ValidationError(f"u defined on (0, 1], got {eps}")
    return (1.0 + eps) ** (2.0 / eps + 2.0) * (1.0 - eps) ** (2.0 / eps - 2.0)


def v_func(dim):
    """v(d) = d (1 - 1/d)^2 = (d-1)^2 / d."""
    if dim < 2:
        raise ValidationError(f"v defined for d >= 2, got {dim}")
    return (dim - 1) ** 2 / dim


def crossover_eps(dim):
    """Crossover closeness where the paired rank bound overtakes the prior
    dimension bound: 0 for d=2, the root of u(eps) = v(d) for 3 <= d <= 17,
    None for d >= 18 (u tops out at 16 < v(18))."""
    if dim < 2:
        raise ValidationError(f"dim must be >= 2, got {dim}")
    if dim == 2:
        return 0.0
    if dim >= 18:
        return None
    target = v_func(dim)
    lo, hi = 1e-12, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if u_func(mid) > target:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-10 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def ae_upper(delta, constraint):
    """Upper bound on the average entropy from closeness delta to pure ensembles."""
    delta = float(delta)
    if delta < 0.0:
        raise ValidationError(f"delta must be nonnegative, got {delta}")
    if isinstance(constraint, RankConstraint):
        r = constraint.rank
        if r < 2:
            raise ValidationError(f"rank case needs r >= 2, got {r}")
        if delta > 1.0 - 1.0 / r:
            raise ValidationError(f"rank case needs delta <= 1 - 1/r, got {delta}")
        return delta * math.log(r - 1) + binary_entropy(delta)
    if isinstance(constraint, EnergyConstraint):
        if delta == 0.0:
            return 0.0
        return delta * f_h(constraint.ham, constraint.energy / delta) + g_func(delta)
    raise ValidationError(f"unsupported constraint {constraint!r}")


def aoe_upper(rank, delta_r, e_psv, ham):
    """ln r + delta F_H(E/delta) + g(delta): AOE cap from the Choi-rank-r distance."""
    if rank < 1:
        raise ValidationError(f"rank must be >= 1, got {rank}")
    delta_r = float(delta_r)
    if delta_r < 0.0:
        raise ValidationError(f"delta must be nonnegative, got {delta_r}")
    if delta_r == 0.0:
        return math.log(rank)
    return math.log(rank) + delta_r * f_h(ham, e_psv / delta_r) + g_func(delta_r)


def eof_scb(eps, rank):
    """EoF semicontinuity bound from trace distance: delta = sqrt(eps(2-eps))."""
    eps = float(eps)
    if rank < 2:
        raise ValidationError(f"rank must be >= 2, got {rank}")
    guard = 1.0 - math.sqrt(2.0 * rank - 1.0) / rank
    if not 0.0 <= eps <= guard + 1e-15:
        raise ValidationError(
            f"eps {eps} outside [0, {guard:.6f}] (delta must stay <= 1 - 1/r)"
        )
    delta = math.sqrt(eps * (2.0 - eps))
    return delta * math.log(rank - 1) + binary_entropy(delta)


def eof_scb_fid(fid, rank):
    """EoF semicontinuity bound from fidelity: delta = sqrt(1 - F)."""
    fid = float(fid)
    if rank < 2:
        raise ValidationError(f"rank must be >= 2, got {rank}")
    if not 0.0 <= fid <= 1.0:
        raise ValidationError(f"fidelity {fid} outside [0, 1]")
    delta = math.sqrt(1.0 - fid)
    if delta > 1.0 - 1.0 / rank + 1e-15:
        raise ValidationError(f"delta {delta} exceeds 1 - 1/r for r = {rank}")
    return delta * math.log(rank - 1) + binary_entropy(min(delta, 1.0))


def eof_upper_sep(delta_f, rank):
    """EoF cap from distance-to-separable: delta ln(r-1) + h2(delta)."""
    delta_f = float(delta_f)
    if rank < 2:
        raise ValidationError(f"rank must be >= 2, got {rank}")
    if not 0.0 <= delta_f <= 1.0 - 1.0 / rank + 1e-15:
        raise ValidationError(f"delta {delta_f} outside [0, 1 - 1/r] for r = {rank}")
    return delta_f * math.log(rank - 1) + binary_entropy(min(delta_f, 1.0))


def discretization_bounds(delta, n_mean):
    """(loss, gain) caps on the AOE change under a grid discretization of a
    Gaussian coherent ensemble with mean photon number n_mean."""
    delta = float(delta)
    n_mean = float(n_mean)
    if delta <= 0.0 or n_mean <= 0.0:
        raise ValidationError("delta and n_mean must be positive")
    d = delta / math.sqrt(2.0)
    loss = d * g_func(math.sqrt(2.0) * n_mean / delta) + g_func(d)
    gain = d * g_func(
        math.sqrt(2.0) * n_mean / delta + d + math.sqrt(math.pi * n_mean)
    ) + g_func(d)
    return loss, gain


def s_ineq_check(eps, n_mean, slack=1e-9):
    """Check eps g(N/eps) - eps g(N) <= -eps ln eps + eps(1 + eps/N) <= 1/e + 1 + 1/N."""
    eps = float(eps)
    n_mean = float(n_mean)
    if not 0.0 < eps <= 1.0 or n_mean <= 0.0:
        raise ValidationError("need eps in (0, 1] and N > 0")
    left = eps * g_func(n_mean / eps) - eps * g_func(n_mean)
    mid = -eps * math.log(eps) + eps * (1.0 + eps / n_mean)
    right = 1.0 / math.e + 1.0 + 1.0 / n_mean
    return left <= mid + slack and mid <= right + slack


# ---------------------------------------------------------------------------
# Tag registry for the CLI
# ---------------------------------------------------------------------------

def _ham_from_params(params, prefix=""):
    tag = params.get(prefix + "closed_form")
    levels = params.get(prefix + "levels")
    eigenvalues = params.get(prefix + "eigenvalues")
    if eigenvalues is not None:
        return HamiltonianSpec(eigenvalues, closed_form=tag)
    return HamiltonianSpec.oscillator(int(levels if levels else 200))


def evaluate_tag(tag, params):
    """Evaluate a bound by its tag with a flat parameter record (CLI surface)."""
    tag = tag.lower()
    if tag in ("prop2", "lemma3", "scb-rank"):
        return scb_rank(params["eps"], int(params["rank"]))
    if tag in ("prop3", "lemma4", "scb-energy"):
        return scb_energy(params["eps"], params["energy"], _ham_from_params(params))
    if tag in ("prop4", "scb-holevo"):
        case_a = (
            RankConstraint(int(params["rank_mu"]))
            if "rank_mu" in params
            else EnergyConstraint(params["energy_mu"], _ham_from_params(params, "mu_"))
        )
        case_b = (
            RankConstraint(int(params["rank_nu"]))
            if "rank_nu" in params
            else EnergyConstraint(params["energy_nu"], _ham_from_params(params, "nu_"))
        )
        return scb_holevo(params["eps"], case_a, case_b)
    if tag == "cor2a":
        return cb_holevo_rank(params["eps"], int(params["rank_mu"]), int(params["rank_nu"]))
    if tag == "cor2b":
        ham = _ham_from_params(params)
        return cb_holevo_energy(
            params["eps"], params["energy_mu"], ham, params["energy_nu"], ham
        )
    if tag == "chi-cb-1":
        return chi_cb_prior_dim(params["eps"], int(params["dim"]))
    if tag == "chi-cb-2":
        return chi_cb_prior_energy(
            params["eps"], params["energy"], _ham_from_params(params)
        )[0]
    if tag == "crossover":
        return crossover_eps(int(params["dim"]))
    if tag == "prop6":
        if "rank" in params:
            return ae_upper(params["delta"], RankConstraint(int(params["rank"])))
        return ae_upper(
            params["delta"],
            EnergyConstraint(params["energy"], _ham_from_params(params)),
        )
    if tag == "prop7":
        return aoe_upper(
            int(params["rank"]), params["delta"], params["energy"],
            _ham_from_params(params),
        )
    if tag == "prop8":
        return eof_scb(params["eps"], int(params["rank"]))
    if tag == "remark3":
        return eof_scb_fid(params["fidelity"], int(params["rank"]))
    if tag == "cor3":
        return eof_upper_sep(params["delta"], int(params["rank"]))
    if tag == "discretization":
        loss, gain = discretization_bounds(params["delta"], params["n_mean"])
        return {"loss": loss, "gain": gain}
    if tag == "s-ineq":
        return s_ineq_check(params["eps"], params["n_mean"])
    raise ValidationError(f"unknown bound tag {tag!r}")


BOUND_TAGS = (
    "prop2", "prop3", "prop4", "lemma3", "lemma4", "cor2a", "cor2b",
    "chi-cb-1", "chi-cb-2", "crossover", "prop6", "prop7", "prop8",
    "remark3", "cor3", "discretization", "s-ineq", "scb-rank",
    "scb-energy", "scb-holevo",
)
