"""Randomized bound-verification experiments, worked-number reproductions, and
tightness-witness checks.

Every experiment consumes an ExperimentConfig and returns an ExperimentResult
whose records are BoundReports; the suite-level assertion is "zero holds=False
records". Trials derive per-index seeds from the config seed, so reports are
byte-identical across runs (timing is kept in memory only).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm as normal_dist

from . import bounds as B
from .channels import (
    coherent_state,
    displacement_operator,
    erasure_channel,
    erasure_pair_diamond,
    holevo_chi,
    identity_channel,
    mix_channels,
    mix_with_state,
    aoe,
    poisson_entropy,
)
from .energy import (
    HamiltonianSpec,
    avg_passive_energy,
    mean_energy,
    passive_energy,
    solve_gibbs,
    truncated_passive_energy,
    f_h,
)
from .ensembles import (
    Ensemble,
    average_state,
    mix_members_toward,
    perturb_weights,
    pure_ensemble,
    singleton,
    steer_to_average,
)
from .errors import ValidationError
from .linalg import (
    binary_entropy,
    fidelity,
    g_func,
    outer,
    trace_norm,
    von_neumann_entropy,
)
from .metrics import PointMeasure, d0, d_ehs, d_kantorovich, kr_distance, kr_modified
from .randomgen import (
    derive_rng,
    random_ensemble,
    random_pure,
    random_pure_ensemble,
    random_state,
)
from .randomgen import random_channel as _random_channel


@dataclass
class ExperimentConfig:
    seed: int = 2024
    trials: int = 100
    dims: tuple = (2, 3, 4, 5)
    tolerance: float = 1e-8
    experiment: str = ""
    output_path: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise ValidationError("trials must be >= 1")
        if any(d < 2 for d in self.dims):
            raise ValidationError("dims must all be >= 2")


@dataclass
class TrialRecord:
    index: int
    report: B.BoundReport
    seconds: float = 0.0


@dataclass
class ExperimentResult:
    name: str
    records: list
    tables: dict = field(default_factory=dict)

    @property
    def violations(self):
        return [r for r in self.records if r.report.holds is False]

    @property
    def passed(self):
        return not self.violations


class _Recorder:
    def __init__(self, name):
        self.name = name
        self.records = []
        self._t0 = time.perf_counter()

    def add(self, tag, lhs, rhs, eps, **params):
        now = time.perf_counter()
        report = B.BoundReport(tag=tag, rhs=float(rhs), epsilon=float(eps),
                               lhs=None if lhs is None else float(lhs),
                               params=params)
        self.records.append(TrialRecord(len(self.records), report, now - self._t0))
        self._t0 = now
        return report

    def add_equality(self, tag, value_a, value_b, eps, tol=1e-10, **params):
        """Record |a - b| <= tol as a bound (holds=False on violation)."""
        gap = abs(float(value_a) - float(value_b))
        return self.add(tag, gap, tol, eps, check="equality", **params)

    def result(self, tables=None):
        tables = dict(tables or {})
        ratios = [
            r.report.lhs / r.report.rhs
            for r in self.records
            if r.report.lhs is not None and r.report.rhs > 1e-12
            and r.report.params.get("check") is None
        ]
        # tightness statistics are reported, never asserted
        tables["tightness"] = [{
            "records": len(self.records),
            "max_lhs_over_rhs": max(ratios) if ratios else None,
        }]
        return ExperimentResult(self.name, self.records, tables)


def _perturbed_ensemble(mu, rng, strength=0.3):
    targets = [random_state(mu.dim, mu.dim, rng) for _ in mu.members]
    nu = mix_members_toward(mu, targets, float(rng.uniform(0.0, strength)))
    direction = rng.normal(size=len(nu))
    return perturb_weights(nu, direction, float(rng.uniform(0.0, 0.15)))


def _mixed_channel_pair(chan, rng, t_max=0.25):
    """(Psi, half-diamond upper bound): Psi = (1-t) chan + t random channel.

    Half the diamond distance is at most t regardless of the mixed-in channel,
    so t is a closed-form epsilon contribution safe to assert against.
    """
    t = float(rng.uniform(0.0, t_max))
    other = _random_channel(chan.dim_in, chan.dim_out,
                            int(rng.integers(1, 3)), rng)
    return mix_channels(t, chan, other), t


# ---------------------------------------------------------------------------
# Proposition 2: rank-constrained AOE semicontinuity
# ---------------------------------------------------------------------------

def verify_scb_rank(cfg):
    rec = _Recorder("scb-rank")
    dims = [d for d in cfg.dims if d <= 5] or [2, 3]
    dehs_tol = cfg.extra.get("dehs_tol", 1e-7)
    for i in range(cfg.trials):
        rng = derive_rng(cfg.seed, i)
        d = dims[i % len(dims)]
        r_b = d
        phi = _random_channel(d, r_b, int(rng.integers(1, 3)), rng)
        mu = random_ensemble(d, int(rng.integers(1, 4)), rng)
        nu = _perturbed_ensemble(mu, rng)

        mode = i % 3
        if mode == 0:
            psi_chan, half_norm = phi, 0.0
            phi_full, psi_full, rank = phi, phi, r_b
        elif mode == 1:
            psi_chan, half_norm = _mixed_channel_pair(phi, rng)
            phi_full, psi_full, rank = phi, psi_chan, r_b
        else:
            p, q = sorted(rng.uniform(0.0, 0.3, size=2))
            phi_full = erasure_channel(r_b, float(p)).compose(phi)
            psi_full = erasure_channel(r_b, float(q)).compose(phi)
            half_norm = 0.5 * erasure_pair_diamond(p, q).value
            rank = r_b + 1

        lhs = aoe(phi_full, mu) - aoe(psi_full, nu)
        metrics = {
            "dehs": d_ehs(mu, nu, tol=dehs_tol).value,
            "d0": d0(mu, nu),
            "dk": d_kantorovich(mu, nu).value,
        }
        for name, dist in metrics.items():
            eps = dist + half_norm
            rec.add(f"prop2/{name}", lhs, B.scb_rank(eps, rank) + cfg.tolerance,
                    eps, dim=d, rank=rank, mode=mode)
    _scb_rank_witnesses(rec, cfg)
    return rec.result()


def _scb_rank_witnesses(rec, cfg):
    for r_b in (2, 3, 5):
        for eps in (0.1, 0.3, 1.0 - 1.0 / r_b):
            # C-1: perturbed basis state against a basis state, identity channel
            rho = np.zeros((r_b, r_b), dtype=complex)
            rho[0, 0] = 1.0 - eps
            for k in range(1, r_b):
                rho[k, k] = eps / (r_b - 1)
            sigma = np.zeros_like(rho)
            sigma[0, 0] = 1.0
            lhs = von_neumann_entropy(rho) - von_neumann_entropy(sigma)
            dist = d0(singleton(rho), singleton(sigma))
            rec.add_equality("prop2/C1", lhs, B.scb_rank(eps, r_b), eps, rank=r_b)
            rec.add_equality("prop2/C1-metric", dist, eps, eps, rank=r_b)
            # C-2: mixing channel against the identity on a basis-state input
            omega = np.zeros_like(rho)
            for k in range(1, r_b):
                omega[k, k] = 1.0 / (r_b - 1)
            phi = mix_with_state(r_b, eps, omega)
            psi_chan = identity_channel(r_b)
            mu = singleton(sigma)
            lhs2 = aoe(phi, mu) - aoe(psi_chan, mu)
            rec.add_equality("prop2/C2", lhs2, B.scb_rank(eps, r_b), eps, rank=r_b)


# ---------------------------------------------------------------------------
# Proposition 3: energy-constrained AOE semicontinuity
# ---------------------------------------------------------------------------

def verify_scb_energy(cfg):
    rec = _Recorder("scb-energy")
    dims = [d for d in cfg.dims if d <= 6] or [2, 3]
    dehs_tol = cfg.extra.get("dehs_tol", 1e-7)
    for i in range(cfg.trials):
        rng = derive_rng(cfg.seed, i)
        d = dims[i % len(dims)]
        ham = HamiltonianSpec.oscillator(d)
        phi = _random_channel(d, d, int(rng.integers(1, 3)), rng)
        mu = random_ensemble(d, int(rng.integers(1, 4)), rng)
        nu = _perturbed_ensemble(mu, rng)
        if i % 2 == 0:
            psi_chan, half_norm = phi, 0.0
        else:
            psi_chan, half_norm = _mixed_channel_pair(phi, rng)

        out_mu = phi.apply_ensemble(mu)
        e_b = avg_passive_energy(out_mu, ham)
        e_b2 = mean_energy(phi.apply(average_state(mu)), ham)
        lhs = aoe(phi, mu) - aoe(psi_chan, nu)

        eps_ehs = d_ehs(mu, nu, tol=dehs_tol).value + half_norm
        eps_d0 = d0(mu, nu) + half_norm
        if eps_ehs > 0.0:
            rec.add("prop3/dehs", lhs, B.scb_energy(eps_ehs, e_b, ham) + cfg.tolerance,
                    eps_ehs, dim=d, e_b=e_b)
            rec.add("prop3/B2", lhs, B.scb_energy(eps_ehs, e_b2, ham) + cfg.tolerance,
                    eps_ehs, dim=d, e_b=e_b2)
            # B-2 is the weaker bound: E_B <= Tr H Phi(avg)
            rec.add("prop3/B2-dominates", B.scb_energy(eps_ehs, e_b, ham),
                    B.scb_energy(eps_ehs, e_b2, ham) + cfg.tolerance, eps_ehs, dim=d)
        if eps_d0 > 0.0:
            e_cut = truncated_passive_energy(out_mu, ham, eps_d0)
            refined = B.scb_energy(eps_d0, max(e_b - e_cut, 0.0), ham)
            plain = B.scb_energy(eps_d0, e_b, ham)
            rec.add("prop3/refined", lhs, refined + cfg.tolerance, eps_d0,
                    dim=d, e_cut=e_cut)
            rec.add("prop3/refined-le-plain", refined, plain + cfg.tolerance,
                    eps_d0, dim=d)
    _scb_energy_witnesses(rec, cfg)
    return rec.result()


def _gibbs_witness_state(energy_over_eps, eps):
    ham = HamiltonianSpec.oscillator(64)
    sol = solve_gibbs(ham, energy_over_eps)
    k = sol.state.shape[0]
    tau0 = np.zeros((k, k), dtype=complex)
    tau0[0, 0] = 1.0
    rho = eps * sol.state + (1.0 - eps) * tau0
    return rho, tau0, k


def _scb_energy_witnesses(rec, cfg):
    ham_osc = HamiltonianSpec.oscillator(64)
    for eps, energy in ((0.1, 1.0), (0.25, 0.5), (0.5, 2.0)):
        rho, tau0, k = _gibbs_witness_state(energy / eps, eps)
        ham_k = HamiltonianSpec.oscillator(k)
        lhs = von_neumann_entropy(rho)
        floor = eps * f_h(ham_osc, energy / eps)
        cap = B.scb_energy(eps, energy, ham_osc)
        # 3C-1: strict exceedance of the first term, within the full bound
        rec.add("prop3/C1-exceeds", floor + 1e-12, lhs, eps, energy=energy,
                check="strict-exceedance")
        rec.add("prop3/C1-within", lhs, cap + cfg.tolerance, eps, energy=energy)
        rec.add_equality("prop3/C1-energy", mean_energy(rho, ham_k), energy,
                         eps, tol=1e-8)
        # 3C-2: the same output reached by the mixing channel (1-eps) id + eps
        # (gamma Tr); its half-diamond distance to the identity is <= eps, so
        # the same exceedance/cap pair applies with the channel perturbed
        # instead of the ensemble. Evaluated in closed form (the mixed output
        # equals rho above); a small-dimension Kraus instance of the same
        # channel family is exercised in verify_scb_rank's C-2 witness.
        dist = 0.5 * trace_norm(rho - tau0)
        rec.add("prop3/C2-halfdist", dist, eps + 1e-12, eps, energy=energy)
        rec.add("prop3/C2-exceeds", floor + 1e-12, lhs, eps, energy=energy,
                check="strict-exceedance")
        rec.add("prop3/C2-within", lhs, cap + cfg.tolerance, eps, energy=energy)


# ---------------------------------------------------------------------------
# Proposition 4 / Corollary 2: Holevo information
# ---------------------------------------------------------------------------

def verify_holevo(cfg):
    rec = _Recorder("holevo")
    dims = [d for d in cfg.dims if d <= 5] or [2, 3]
    dehs_tol = cfg.extra.get("dehs_tol", 1e-7)
    for i in range(cfg.trials):
        rng = derive_rng(cfg.seed, i)
        d = dims[i % len(dims)]
        ham = HamiltonianSpec.oscillator(d)
        phi = _random_channel(d, d, int(rng.integers(1, 3)), rng)
        mu = random_ensemble(d, int(rng.integers(1, 4)), rng)
        nu = _perturbed_ensemble(mu, rng)
        if i % 2 == 0:
            psi_chan, half_norm = phi, 0.0
        else:
            psi_chan, half_norm = _mixed_channel_pair(phi, rng)

        eps = min(d_ehs(mu, nu, tol=dehs_tol).value + half_norm, 1.0)
        if eps <= 0.0:
            continue
        lhs = holevo_chi(phi, mu) - holevo_chi(psi_chan, nu)

        e_mu = mean_energy(phi.apply(average_state(mu)), ham)
        e_nu_psv = avg_passive_energy(psi_chan.apply_ensemble(nu), ham)
        case_a = (B.RankConstraint(d), B.EnergyConstraint(e_mu, ham))
        case_b = (B.RankConstraint(d), B.EnergyConstraint(e_nu_psv, ham))
        combo = i % 4
        a_i = case_a[combo // 2]
        b_j = case_b[combo % 2]
        rhs = B.scb_holevo(eps, a_i, b_j)
        rec.add(f"prop4/case{combo // 2 + 1}{combo % 2 + 1}", lhs,
                rhs + cfg.tolerance, eps, dim=d)

        # Corollary 2 two-sided variants with symmetric constraints
        e_nu_avg = mean_energy(psi_chan.apply(average_state(nu)), ham)
        rec.add("cor2a/abs", abs(lhs), B.cb_holevo_rank(eps, d, d) + cfg.tolerance,
                eps, dim=d)
        rec.add("cor2b/abs", abs(lhs),
                B.cb_holevo_energy(eps, e_mu, ham, e_nu_avg, ham) + cfg.tolerance,
                eps, dim=d)
    return rec.result()


def example7_fock_check(eps, n_mean=1.0, n_max=60, nodes=64):
    """Coherent-vs-smeared ensembles through the identity: exact Holevo gap and
    its energy-case cap; returns (gap, cap).

    The gap chi(mu) - chi(nu) equals the average entropy of nu's members,
    integrated radially against the Gaussian weight by Gauss-Legendre.
    """
    ham = HamiltonianSpec.oscillator(n_max + 1)
    gibbs = solve_gibbs(ham, n_mean, auto_extend=False).state
    s_hi = n_max / 4.0
    xs, ws = np.polynomial.legendre.leggauss(nodes)
    s_nodes = 0.5 * s_hi * (xs + 1.0)
    s_weights = 0.5 * s_hi * ws
    total = 0.0
    for s, w in zip(s_nodes, s_weights):
        vec = coherent_state(math.sqrt(s), n_max)
        state = (1.0 - eps) * outer(vec) + eps * gibbs
        total += w * von_neumann_entropy(state) * math.exp(-s / n_mean) / n_mean
    gap = total
    cap = eps * (g_func(n_mean / eps) + g_func(2.0 * n_mean)) + 2.0 * g_func(eps)
    return gap, cap


# ---------------------------------------------------------------------------
# Steering (openness of the barycenter map)
# ---------------------------------------------------------------------------

def verify_steering(cfg):
    rec = _Recorder("steering")
    dims = [d for d in cfg.dims if d <= 3] or [2, 3]
    for i in range(cfg.trials):
        rng = derive_rng(cfg.seed, i)
        d = dims[i % len(dims)]
        pure_case = i % 2 == 1
        if pure_case:
            mu = random_pure_ensemble(d, int(rng.integers(d, d + 3)), rng)
        else:
            mu = random_ensemble(d, int(rng.integers(1, 4)), rng)
        t = float(rng.uniform(0.05, 0.5))
        sigma = (1.0 - t) * average_state(mu) + t * random_state(d, d, rng)
        nu, mu_prime = steer_to_average(mu, sigma)

        resid = trace_norm(average_state(nu) - sigma)
        rec.add("prop1a/average", resid, 1e-8, t, dim=d, pure=pure_case)
        delta = math.sqrt(max(1.0 - fidelity(average_state(mu), sigma), 0.0))
        rec.add("prop1a/d0", d0(mu_prime, nu), delta + 1e-8, delta, dim=d,
                pure=pure_case)
        if pure_case:
            worst = min(
                max(np.linalg.eigvalsh(s)) for w, s in nu.members if w > 1e-12
            )
            rec.add("prop1a/purity", 1.0 - worst, 1e-8, delta, dim=d)
    return rec.result()


# ---------------------------------------------------------------------------
# Lemmas on q-c conditional entropy
# ---------------------------------------------------------------------------

def verify_lemmas(cfg):
    rec = _Recorder("lemmas")
    dims = [d for d in cfg.dims if d <= 6] or [4, 6]
    for i in range(cfg.trials):
        rng = derive_rng(cfg.seed, i)
        d = max(dims[i % len(dims)], 3)
        r = int(rng.integers(2, d))
        n = int(rng.integers(1, 4))
        mu = random_ensemble(d, n, rng, rank=r)
        nu = random_ensemble(d, n, rng)
        lhs = sum(w * von_neumann_entropy(s) for w, s in mu.members) - sum(
            w * von_neumann_entropy(s) for w, s in nu.members
        )
        eps = d0(mu, nu)
        rec.add("lemma3/rank", lhs, B.scb_rank(eps, r) + cfg.tolerance, eps,
                dim=d, rank=r)

        ham = HamiltonianSpec.oscillator(d)
        energy = avg_passive_energy(mu, ham)
        if eps > 0.0:
            e_cut = truncated_passive_energy(mu, ham, eps)
            refined = B.scb_energy(eps, max(energy - e_cut, 0.0), ham)
            plain = B.scb_energy(eps, energy, ham)
            rec.add("lemma4/refined", lhs, refined + cfg.tolerance, eps, dim=d)
            rec.add("lemma4/chain", refined, plain + cfg.tolerance, eps, dim=d)

        if i % 5 == 0:
            # branch coverage: nearly orthogonal sides push eps past 1 - 1/r
            half = d // 2
            vecs_a = [random_pure(half, rng) for _ in range(2)]
            vecs_b = [random_pure(d - half, rng) for _ in range(2)]
            pad_a = [np.concatenate([v, np.zeros(d - half)]) for v in vecs_a]
            pad_b = [np.concatenate([np.zeros(half), v]) for v in vecs_b]
            mu2 = pure_ensemble(pad_a)
            nu2 = pure_ensemble(pad_b)
            eps2 = d0(mu2, nu2)
            rec.add("lemma3/branch", 0.0, B.scb_rank(eps2, 2) + cfg.tolerance,
                    eps2, dim=d, branch=eps2 > 0.5)
        if i % 7 == 0:
            # sign case: pure blocks against maximally mixed blocks make the
            # entropy difference strongly negative, trivially inside the bound
            mu3 = random_pure_ensemble(d, 2, rng)
            mixed = np.eye(d, dtype=complex) / d
            nu3 = Ensemble(d, mu3.weights.copy(), (mixed, mixed))
            lhs3 = -math.log(d)
            eps3 = d0(mu3, nu3)
            rec.add("lemma3/sign-case", lhs3, B.scb_rank(eps3, 2) + cfg.tolerance,
                    eps3, dim=d, negative_lhs=True)
    return rec.result()


# ---------------------------------------------------------------------------
# Entanglement of formation witnesses
# ---------------------------------------------------------------------------

def eof_witness_values(rank, delta):
    """Exact EoF drop and its fidelity-form cap on the tilted-vector family.

    Family: theta_p = sqrt(1-p) phi + sqrt(p) alpha x beta with phi maximally
    entangled of Schmidt rank `rank` and alpha, beta orthogonal to its
    marginal supports; rho, sigma are theta at p = 1/2 - delta and 1/2.
    """
    if not 0.0 < delta < 0.5:
        raise ValidationError("delta must lie in (0, 1/2)")
    lhs = delta * math.log(rank) + binary_entropy(0.5 + delta) - binary_entropy(0.5)
    overlap = math.sqrt((0.5 + delta) * 0.5) + math.sqrt((0.5 - delta) * 0.5)
    fid = overlap**2
    rhs = B.eof_scb_fid(fid, rank + 1)
    return lhs, rhs, fid


def verify_eof(cfg):
    rec = _Recorder("eof")
    ratios = {}
    for rank in (4, 16, 64):
        for delta in (0.01, 0.05):
            lhs, rhs, fid = eof_witness_values(rank, delta)
            rec.add("prop8/witness", lhs, rhs + cfg.tolerance, delta,
                    rank=rank, fidelity=fid)
            ratios[(rank, delta)] = lhs / rhs
    for delta in (0.01, 0.05):
        rec.add("prop8/ratio-trend", ratios[(4, delta)],
                ratios[(64, delta)], delta, check="ratio grows with rank")
    # Stated tightness threshold at (r=64, delta=0.01); see the repro table.
    rec.add("prop8/ratio-0.8", 0.8, ratios[(64, 0.01)], 0.01,
            check="lhs/rhs exceeds 0.8")

    # Corollary 3 sanity: pure states against a product reference
    for rank in (3, 4):
        lam = np.full(rank, 0.1 / (rank - 1))
        lam[0] = 0.9
        schmidt = np.sqrt(lam)
        theta = np.zeros((rank, rank), dtype=complex)
        for k in range(rank):
            theta[k, k] = schmidt[k]
        rho = outer(theta.reshape(-1))
        sigma0 = np.zeros_like(rho)
        sigma0[0, 0] = 1.0
        delta_f = math.sqrt(max(1.0 - fidelity(rho, sigma0), 0.0))
        e_f = von_neumann_entropy(np.diag(lam).astype(complex))
        rec.add("cor3/pure", e_f,
                B.eof_upper_sep(delta_f, rank) + cfg.tolerance, delta_f, rank=rank)
        # separable pure state: E_F = 0 <= any admissible cap
        rec.add("cor3/separable", 0.0, B.eof_upper_sep(0.0, rank), 0.0, rank=rank)
    return rec.result()


# ---------------------------------------------------------------------------
# Crossover table (reproduction)
# ---------------------------------------------------------------------------

REPORTED_CROSSOVER_BANDS = {2: (0.0, 0.0), 3: (0.10, 0.12), 4: (0.44, 0.46),
                         5: (0.54, 0.56)}


def repro_crossover(cfg):
    rec = _Recorder("crossover")
    rows = []
    for d in range(2, 21):
        eps_d = B.crossover_eps(d)
        rows.append({"d": d, "v": B.v_func(d),
                     "crossover_eps": "" if eps_d is None else eps_d})
        if d >= 18:
            rec.add("crossover/none", 0.0 if eps_d is None else 1.0, 0.0, 0.0, d=d)
        elif d in REPORTED_CROSSOVER_BANDS:
            lo, hi = REPORTED_CROSSOVER_BANDS[d]
            rec.add("crossover/band-lo", lo, eps_d, eps_d, d=d)
            rec.add("crossover/band-hi", eps_d, hi, eps_d, d=d)
    rec.add_equality("crossover/u1", B.u_func(1.0), 16.0, 1.0, tol=1e-12)
    rec.add_equality("crossover/v18", B.v_func(18), 289.0 / 18.0, 0.0, tol=1e-12)
    return rec.result(tables={"crossover": rows})


# ---------------------------------------------------------------------------
# Erasure sandwich (reproduction)
# ---------------------------------------------------------------------------

def repro_erasure(cfg):
    rec = _Recorder("erasure")
    rows = []
    ranks = cfg.extra.get("ranks", (4, 8, 16))
    grid = cfg.extra.get("grid", (0.02, 0.05))
    for r in ranks:
        basis = np.eye(r, dtype=complex)
        mu = pure_ensemble([basis[:, k] for k in range(r)])
        sigma = outer(basis[:, 0])
        for p in grid:
            for eps in grid:
                nu = mix_members_toward(mu, [sigma] * r, eps)
                phi = erasure_channel(r, 0.0)
                psi_chan = erasure_channel(r, p)
                lhs = holevo_chi(phi, mu) - holevo_chi(psi_chan, nu)
                eps_tot = p + eps
                upper = B.scb_holevo(eps_tot, B.RankConstraint(r),
                                     B.RankConstraint(3))
                closed = (eps_tot * math.log(2 * (r - 1))
                          + 2.0 * binary_entropy(eps_tot))
                lower = (p + eps - p * eps) * math.log(r) - (1 - p) * binary_entropy(eps)
                rec.add("example6/upper", lhs, upper + cfg.tolerance, eps_tot,
                        r=r, p=p, eps_state=eps)
                rec.add("example6/lower", lower, lhs + cfg.tolerance, eps_tot,
                        r=r, p=p, eps_state=eps)
                rec.add_equality("example6/closed-form", upper, closed, eps_tot)
                rows.append({"r": r, "p": p, "eps": eps, "chi_gap": lhs,
                             "lower": lower, "upper": upper})
    return rec.result(tables={"erasure": rows})


# ---------------------------------------------------------------------------
# Coherent-ensemble discretization (reproduction)
# ---------------------------------------------------------------------------

def _dephased_coherent_aoe(n_mean, panels, order=32, s_max=45.0):
    """(1/N) integral of H_P(s) e^(-s/N) ds by composite Gauss-Legendre."""
    xs, ws = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, s_max, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        for x, w in zip(xs, ws):
            s = mid + half * x
            total += half * w * poisson_entropy(s) * math.exp(-s / n_mean) / n_mean
    return total


def gaussian_grid_measure(n_mean, delta, half_cells):
    """Delta-discretization of the Gaussian measure: cell masses from 1-D
    normal CDF products (variance N/2 per coordinate), cell-center atoms."""
    sigma = math.sqrt(n_mean / 2.0)
    ks = np.arange(-half_cells, half_cells)
    edges_lo = delta * ks
    edges_hi = delta * (ks + 1)
    mass_1d = normal_dist.cdf(edges_hi / sigma) - normal_dist.cdf(edges_lo / sigma)
    centers = delta * (ks + 0.5)
    pts, wts = [], []
    for i, ck in enumerate(centers):
        for j, cj in enumerate(centers):
            pts.append((ck, cj))
            wts.append(mass_1d[i] * mass_1d[j])
    pts = np.array(pts)
    wts = np.array(wts)
    return pts, wts / np.sum(wts)


def _discretized_aoe(n_mean, delta, half_cells):
    pts, wts = gaussian_grid_measure(n_mean, delta, half_cells)
    s_vals = np.sum(pts**2, axis=1)
    return float(sum(w * poisson_entropy(s) for w, s in zip(wts, s_vals)))


def _subsampled_measure(pts, wts, radius):
    keep = np.sum(pts**2, axis=1) <= radius**2
    removed = float(np.sum(wts[~keep]))
    w = wts[keep] / np.sum(wts[keep])
    return PointMeasure(points=pts[keep], weights=w), removed


def repro_coherent_discretization(cfg):
    rec = _Recorder("coherent")
    n_mean = cfg.extra.get("n_mean", 1.0)
    deltas = cfg.extra.get("deltas", (0.5, 0.25))
    rows = []

    base = _dephased_coherent_aoe(n_mean, panels=32)
    refined = _dephased_coherent_aoe(n_mean, panels=64)
    rec.add("coherent/quadrature", abs(base - refined), 1e-6, 0.0,
            check="self-convergence")
    aoe_cont = refined

    gaps = {}
    for delta in deltas:
        half_cells = int(math.ceil(6.0 * math.sqrt(n_mean / 2.0) / delta))
        aoe_disc = _discretized_aoe(n_mean, delta, half_cells)
        loss_cap, gain_cap = B.discretization_bounds(delta, n_mean)
        rec.add("coherent/loss", aoe_cont - aoe_disc, loss_cap + cfg.tolerance,
                delta, n_mean=n_mean)
        rec.add("coherent/gain", aoe_disc - aoe_cont, gain_cap + cfg.tolerance,
                delta, n_mean=n_mean)
        gaps[delta] = abs(aoe_cont - aoe_disc)
        rows.append({"delta": delta, "aoe_continuous": aoe_cont,
                     "aoe_discretized": aoe_disc, "loss_cap": loss_cap,
                     "gain_cap": gain_cap})

    ds = sorted(deltas)
    for fine, coarse in zip(ds[:-1], ds[1:]):
        rec.add("coherent/monotone-gap", gaps[fine], gaps[coarse] + cfg.tolerance,
                fine, coarse=coarse)

    # KR distance between successive discretizations, on subsampled supports
    delta = max(deltas)
    half = int(math.ceil(6.0 * math.sqrt(n_mean / 2.0) / delta))
    pts_a, wts_a = gaussian_grid_measure(n_mean, delta, half)
    pts_b, wts_b = gaussian_grid_measure(n_mean, delta / 2.0, 2 * half)
    radius = math.sqrt(n_mean * math.log(1000.0))
    pm_a, rem_a = _subsampled_measure(pts_a, wts_a, radius)
    pm_b, rem_b = _subsampled_measure(pts_b, wts_b, radius)
    dist = kr_distance(pm_a, pm_b)
    cap = delta / math.sqrt(2.0) + delta / (2.0 * math.sqrt(2.0))
    rec.add("coherent/kr-triangle", dist, cap + 3.0 * (rem_a + rem_b) + 1e-9,
            delta, removed_a=rem_a, removed_b=rem_b)

    # Lipschitz transfer: coherent map has constant 2, so D_K <= D*_KR
    rng = derive_rng(cfg.seed, 7)
    n_max = 40
    for k in range(3):
        pts1 = rng.uniform(-1.5, 1.5, size=(3, 2))
        pts2 = rng.uniform(-1.5, 1.5, size=(3, 2))
        w1 = rng.dirichlet(np.ones(3))
        w2 = rng.dirichlet(np.ones(3))
        pm1 = PointMeasure(points=pts1, weights=w1)
        pm2 = PointMeasure(points=pts2, weights=w2)
        mu = Ensemble.from_members(
            [(w, outer(coherent_state(complex(x, y), n_max)))
             for w, (x, y) in zip(w1, pts1)]
        )
        nu = Ensemble.from_members(
            [(w, outer(coherent_state(complex(x, y), n_max)))
             for w, (x, y) in zip(w2, pts2)]
        )
        dk = d_kantorovich(mu, nu).value
        rec.add("lemma9/transfer", dk, kr_modified(pm1, pm2) + cfg.tolerance,
                0.0, case=k)
    return rec.result(tables={"coherent": rows})


# ---------------------------------------------------------------------------
# EoF witness table and displaced-Gibbs reproduction
# ---------------------------------------------------------------------------

def repro_eof_witness(cfg):
    rec = _Recorder("eof-witness")
    rows = []
    for rank in (4, 16, 64):
        for delta in (0.01, 0.05):
            lhs, rhs, fid = eof_witness_values(rank, delta)
            rows.append({"rank": rank, "delta": delta, "lhs": lhs, "rhs": rhs,
                         "ratio": lhs / rhs})
            rec.add("prop8/witness", lhs, rhs + cfg.tolerance, delta, rank=rank)
    lhs, rhs, _ = eof_witness_values(64, 0.01)
    rec.add("prop8/ratio-0.8", 0.8, lhs / rhs, 0.01,
            check="lhs/rhs exceeds 0.8")
    return rec.result(tables={"eof_witness": rows})


def repro_gibbs_displaced(cfg):
    """Displaced-Gibbs ensemble: passive energies stay at N_0; the quadrature
    average approaches the Gibbs state at N + N_0 (error reported, not asserted)."""
    rec = _Recorder("gibbs-displaced")
    n0 = cfg.extra.get("n0", 0.5)
    n_mean = cfg.extra.get("n_mean", 0.4)
    n_max = int(cfg.extra.get("n_max", 48))
    ham = HamiltonianSpec.oscillator(n_max + 1)
    gibbs = solve_gibbs(ham, n0, auto_extend=False).state

    for mag in (0.5, 1.0, 1.5, 2.0):
        d_op = displacement_operator(mag, n_max)
        rho = d_op @ gibbs @ d_op.conj().T
        rho = rho / np.trace(rho).real
        rec.add("ape/passive", abs(passive_energy(rho, ham) - n0), 1e-6, mag,
                n0=n0)

    # polar quadrature of the average state against gamma(N + N_0)
    radial, angular = 20, 16
    xs, ws = np.polynomial.legendre.leggauss(radial)
    r_hi = math.sqrt(n_mean) * 4.0
    avg = np.zeros_like(gibbs)
    total_w = 0.0
    for x, w in zip(xs, ws):
        r = 0.5 * r_hi * (x + 1.0)
        wr = 0.5 * r_hi * w * (2.0 * r / n_mean) * math.exp(-r * r / n_mean)
        for k in range(angular):
            zeta = r * np.exp(2j * np.pi * k / angular)
            d_op = displacement_operator(zeta, n_max)
            avg += (wr / angular) * (d_op @ gibbs @ d_op.conj().T)
            total_w += wr / angular
    avg = avg / np.trace(avg).real
    target = solve_gibbs(ham, n_mean + n0, auto_extend=False).state
    err = trace_norm(avg - target)
    rec.add("ape/average-state", None, err, n_mean, captured_weight=total_w,
            note="truncation error reported, not asserted")
    return rec.result(tables={"gibbs_displaced": [
        {"n0": n0, "n_mean": n_mean, "trace_error": err, "captured": total_w}
    ]})


EXPERIMENTS = {
    "scb-rank": verify_scb_rank,
    "scb-energy": verify_scb_energy,
    "holevo": verify_holevo,
    "steering": verify_steering,
    "lemmas": verify_lemmas,
    "eof": verify_eof,
}

REPROS = {
    "crossover": repro_crossover,
    "erasure": repro_erasure,
    "coherent": repro_coherent_discretization,
    "eof-witness": repro_eof_witness,
    "gibbs-displaced": repro_gibbs_displaced,
}
