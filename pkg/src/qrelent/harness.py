"""Verification suites, parameter sweeps, single-pair evaluation, and state
generation with deterministic CSV/JSON artifacts.

Randomness policy: every trial draws from a private SFC64 stream seeded with
``root_seed XOR trial_index`` (suites additionally fold in a fixed per-suite
salt), so outputs are byte-identical across runs for a given configuration.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import quadrature
from .bounds import (
    BoundReport,
    TOL_BOUND,
    frechet_check,
    lemma3_bound,
    lower_bounds,
    power_diff_bound,
    thm1_bounds,
    thm2_bound,
    thm3_bound,
)
from .entropy import (
    classical_relative_q,
    extended_to_json,
    quantum_relative_q,
    relative_entropy_vn,
)
from .errors import ConfigError, DimensionMismatch, PreconditionFailed
from .linalg import HermitianOperator, apply_function, schatten_norm
from .states import (
    DensityMatrix,
    SpectralSummary,
    TOL_INCL,
    density_with_spectrum,
    haar_unitary,
    kernel_included,
    partial_trace,
    read_state,
    sample_common_support_pair,
    sample_density,
    tensor,
    trial_stream,
    write_state,
)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Tolerances:
    tol_incl: float = TOL_INCL
    tol_bound: float = TOL_BOUND
    tol_psd: float = 1e-8
    quad_nodes: int = 64

    def validate(self) -> None:
        for name in ("tol_incl", "tol_bound", "tol_psd"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.quad_nodes < 4:
            raise ConfigError(f"quad_nodes must be at least 4, got {self.quad_nodes}")


@dataclass(frozen=True)
class SweepConfig:
    dims: tuple[int, ...] = (2, 3, 4, 5, 6, 7, 8)
    q_grid: tuple[float, ...] = (1.5, 2.0)
    b0_grid: tuple[float, ...] = (0.1, 0.01)
    trials: int = 1000
    seed: int = 1
    tolerances: Tolerances = field(default_factory=Tolerances)
    output_path: str | None = None

    def validate(self, require_grids: bool = False) -> None:
        if not self.dims or any(not 1 <= d <= 256 for d in self.dims):
            raise ConfigError(f"dims must be nonempty integers in [1, 256], got {self.dims!r}")
        if self.trials < 1:
            raise ConfigError(f"trials must be at least 1, got {self.trials}")
        if any(q <= 1.0 for q in self.q_grid):
            raise ConfigError(f"all q values must exceed 1, got {self.q_grid!r}")
        d_max = max(self.dims)
        if any(not 0.0 < b <= 1.0 / d_max for b in self.b0_grid):
            raise ConfigError(
                f"all b0 values must lie in (0, 1/{d_max}], got {self.b0_grid!r}"
            )
        self.tolerances.validate()
        if require_grids:
            if not self.q_grid:
                raise ConfigError("q_grid must be nonempty")
            if not self.b0_grid:
                raise ConfigError("b0_grid must be nonempty")
            if self.output_path is None:
                raise ConfigError("output_path is required")

    def echo_dict(self) -> dict:
        """Configuration echo for artifact headers; excludes the output path so
        identical runs to different files stay byte-identical."""
        return {
            "dims": list(self.dims),
            "q_grid": list(self.q_grid),
            "b0_grid": list(self.b0_grid),
            "trials": self.trials,
            "seed": self.seed,
            "tolerances": asdict(self.tolerances),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SweepConfig":
        known = {"dims", "q_grid", "b0_grid", "trials", "seed", "tolerances", "output_path"}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(doc)
        if "dims" in kwargs:
            kwargs["dims"] = tuple(int(d) for d in kwargs["dims"])
        if "q_grid" in kwargs:
            kwargs["q_grid"] = tuple(float(q) for q in kwargs["q_grid"])
        if "b0_grid" in kwargs:
            kwargs["b0_grid"] = tuple(float(b) for b in kwargs["b0_grid"])
        if "tolerances" in kwargs and not isinstance(kwargs["tolerances"], Tolerances):
            kwargs["tolerances"] = Tolerances(**kwargs["tolerances"])
        return cls(**kwargs)


@dataclass
class SuiteResult:
    name: str
    instances_run: int
    failures: int
    worst_slack: float | None
    counterexample_path: str | None = None


@dataclass
class VerifyReport:
    seed: int
    suites: list[SuiteResult]

    @property
    def passed(self) -> bool:
        return all(s.failures == 0 for s in self.suites)

    def suite(self, name: str) -> SuiteResult:
        for s in self.suites:
            if s.name == name:
                return s
        raise KeyError(name)


class _SuiteRun:
    """Accumulates margins for one suite; a negative margin is a failure and
    serializes the offending instance to disk (first failure only)."""

    def __init__(self, name: str, out_dir: Path | None, seed: int):
        self.name = name
        self.out_dir = out_dir
        self.seed = seed
        self.instances = 0
        self.failures = 0
        self.worst: float | None = None
        self.counterexample_path: str | None = None

    def check(self, margin: float, states=None, context: dict | None = None) -> None:
        margin = float(margin)
        if math.isfinite(margin):
            self.worst = margin if self.worst is None else min(self.worst, margin)
        if margin < 0.0:
            self.failures += 1
            self._record(states, context, margin)

    def check_bool(self, ok: bool, states=None, context: dict | None = None) -> None:
        if not ok:
            self.failures += 1
            self._record(states, context, None)

    def _record(self, states, context, margin) -> None:
        if self.counterexample_path is not None or self.out_dir is None:
            return
        self.out_dir.mkdir(parents=True, exist_ok=True)
        stem = self.out_dir / f"counterexample_{self.name}"
        doc = {"suite": self.name, "seed": self.seed, "margin": margin}
        doc.update(context or {})
        if states is not None:
            for label, state in zip(("rho", "sigma"), states):
                write_state(f"{stem}_{label}.json", state)
            doc["rho_path"] = f"{stem}_rho.json"
            doc["sigma_path"] = f"{stem}_sigma.json"
        with open(f"{stem}_context.json", "w", encoding="ascii") as fh:
            json.dump(doc, fh, sort_keys=True, indent=2)
        self.counterexample_path = f"{stem}_context.json"

    def result(self) -> SuiteResult:
        return SuiteResult(
            self.name, self.instances, self.failures, self.worst, self.counterexample_path
        )


def sigma_family(d: int, b0: float) -> DensityMatrix:
    """The diagonal family (1 - b0 (d-1)) |0><0| + b0 (I - |0><0|).

    Its smallest eigenvalue equals b0 for b0 <= 1/d, which makes it the
    canonical probe for divergence rates as b0 -> 0.
    """
    if not 0.0 < b0 <= 1.0 / d:
        raise ConfigError(f"b0 must lie in (0, 1/{d}], got {b0}")
    spec = np.full(d, b0)
    spec[0] = 1.0 - b0 * (d - 1)
    return DensityMatrix.from_eigensystem(spec, np.eye(d, dtype=np.complex128))


def _rand_complex(rng, d: int) -> np.ndarray:
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def _rand_herm(rng, d: int) -> HermitianOperator:
    return HermitianOperator((lambda g: (g + g.conj().T) / 2.0)(_rand_complex(rng, d)))


def _rand_pd(rng, d: int, trace_one: bool = False) -> HermitianOperator:
    g = _rand_complex(rng, d)
    m = g @ g.conj().T / d
    if trace_one:
        m /= np.trace(m).real
    return HermitianOperator(m)


def _conditioned_pd(rng, d: int, log10_cond: float) -> HermitianOperator:
    """Strictly positive matrix with condition number 10^log10_cond exactly."""
    exponents = -log10_cond * rng.uniform(0.0, 1.0, size=d)
    exponents[0] = 0.0
    if d > 1:
        exponents[1] = -log10_cond
    scale = 10.0 ** rng.uniform(-2.0, 2.0)
    w = scale * 10.0**exponents
    u = haar_unitary(d, rng)
    return HermitianOperator.from_eigensystem(w, u)


def _sample_pair(rng, d: int, rank_deficient: bool) -> tuple[DensityMatrix, DensityMatrix]:
    """Instance family for the bound sweeps: either a full-rank pair or a
    pair with an exact common kernel (sigma full-rank on the shared support)."""
    if not rank_deficient or d < 2:
        return sample_density(d, d, rng), sample_density(d, d, rng)
    k = int(rng.integers(1, d))
    rho_rank = int(rng.integers(1, k + 1))
    return sample_common_support_pair(d, k, rng, rho_rank=rho_rank)


def _sample_q(rng, exact_every: int, i: int, lo: float = 1.0, hi: float = 2.0) -> float:
    if exact_every and i % exact_every == 0:
        return hi
    return float(lo + (hi - lo) * rng.uniform(np.nextafter(0.0, 1.0), 1.0))


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------


def _suite_linalg_norms(run: _SuiteRun, config: SweepConfig, count: int) -> None:
    tol = 1e-10
    dims = [d for d in config.dims if d >= 2] or [2]
    for i in range(count):
        rng = trial_stream(config.seed, i, salt=1)
        d = int(rng.choice(dims))
        run.instances += 1
        x, y, z = (_rand_complex(rng, d) for _ in range(3))
        for p in (1.0, 2.0, math.inf):
            rhs = schatten_norm(x, math.inf) * schatten_norm(y, p) * schatten_norm(z, math.inf)
            scale = max(1.0, rhs)
            run.check(rhs + tol * scale - schatten_norm(x @ y @ z, p),
                      context={"check": "holder", "p": p, "trial": i})
            sub_rhs = schatten_norm(x, p) * schatten_norm(y, p)
            run.check(sub_rhs + tol * max(1.0, sub_rhs) - schatten_norm(x @ y, p),
                      context={"check": "submultiplicative", "p": p, "trial": i})
        tr_rhs = schatten_norm(x, math.inf) * schatten_norm(z, math.inf) * schatten_norm(y, 1.0)
        run.check(tr_rhs + tol * max(1.0, tr_rhs) - abs(np.trace(x @ y @ z)),
                  context={"check": "trace_bound", "trial": i})
        for p_lo, p_hi in ((1.0, 2.0), (2.0, math.inf), (1.0, math.inf)):
            run.check(schatten_norm(x, p_lo) + tol - schatten_norm(x, p_hi),
                      context={"check": "p_monotone", "trial": i})
        h = _rand_herm(rng, d)
        delta = HermitianOperator(h.matrix - (h.trace() / d) * np.eye(d))
        run.check(0.5 * schatten_norm(delta, 1.0) + tol - schatten_norm(delta, math.inf),
                  context={"check": "traceless_half", "trial": i})
        composed = apply_function(h, lambda lam: math.exp(lam / 2.0) ** 2)
        stepped = apply_function(apply_function(h, lambda lam: math.exp(lam / 2.0)),
                                 lambda lam: lam**2)
        scale = max(1.0, schatten_norm(composed, math.inf))
        err = float(np.max(np.abs(composed.matrix - stepped.matrix)))
        run.check(1e-10 * scale - err, context={"check": "composition", "trial": i})


def _suite_quadrature(run: _SuiteRun, config: SweepConfig, count: int) -> None:
    nodes = config.tolerances.quad_nodes
    r_values = (0.1, 0.5, 0.9)
    # deterministic scalar fixtures
    run.instances += 1
    for a, r, expect in ((4.0, 0.5, 2.0), (8.0, 1.0 / 3.0, 2.0), (1.0, 0.7, 1.0)):
        rule = quadrature.QuadratureRule(r=r, nodes_per_panel=nodes)
        for form in ("first", "second"):
            got = quadrature.frac_power_scalar(a, r, rule, form=form)
            run.check(1e-10 - abs(got - expect) / expect,
                      context={"check": "scalar_fixture", "a": a, "r": r, "form": form})
    dims = [d for d in config.dims if 2 <= d <= 8] or [2]
    for i in range(count):
        rng = trial_stream(config.seed, i, salt=2)
        d = int(rng.choice(dims))
        a_op = _conditioned_pd(rng, d, log10_cond=float(rng.uniform(0.0, 6.0)))
        norm_inf = schatten_norm(a_op, math.inf)
        run.instances += 1
        for r in r_values:
            rule = quadrature.QuadratureRule(r=r, nodes_per_panel=nodes)
            spectral = apply_function(a_op, lambda lam: lam**r)
            first = quadrature.frac_power_operator(a_op, r, rule, form="first")
            budget = 1e-8 * norm_inf**r
            err = float(np.max(np.abs(first.matrix - spectral.matrix)))
            run.check(budget - err, context={"check": "oracle_first", "r": r, "trial": i})
            if i % 4 == 0:
                second = quadrature.frac_power_operator(a_op, r, rule, form="second")
                err2 = float(np.max(np.abs(second.matrix - first.matrix)))
                run.check(1e-8 * max(1.0, norm_inf**r) - err2,
                          context={"check": "forms_agree", "r": r, "trial": i})
        # scalar resolvent-pair identity against its closed form; scales are
        # kept at the density-eigenvalue range and well separated, so the
        # closed-form value stays O(100) and the absolute 1e-10 comparison is
        # meaningful in float64
        a0 = float(rng.uniform(0.2, 1.0))
        b0 = a0 * float(rng.uniform(0.25, 0.8))
        for r in r_values:
            closed = quadrature.resolvent_pair_closed_form(a0, b0, r)
            got = quadrature.resolvent_pair_integral(
                a0, b0, r, quadrature.QuadratureRule(r=r, nodes_per_panel=nodes)
            )
            run.check(1e-10 - abs(got - closed),
                      context={"check": "pair_identity", "r": r, "trial": i})
            lam0 = min(a0, b0)
            envelope = lam0 ** (-(r + 1.0))
            run.check(envelope + 1e-12 * envelope - closed,
                      context={"check": "pair_envelope", "r": r, "trial": i})
        limit_base = float(rng.uniform(0.1, 1.0))
        got = quadrature.resolvent_pair_integral(
            limit_base, limit_base, 0.5,
            quadrature.QuadratureRule(r=0.5, nodes_per_panel=nodes),
        )
        run.check(1e-10 - abs(got - 0.5 * limit_base**-1.5),
                  context={"check": "pair_limit", "trial": i})


def _suite_states(run: _SuiteRun, config: SweepConfig, count: int) -> None:
    dims = [d for d in config.dims if d >= 2] or [2]
    for i in range(count):
        rng = trial_stream(config.seed, i, salt=3)
        d = int(rng.choice(dims))
        rank = int(rng.integers(1, d + 1))
        rho = sample_density(d, rank, rng)
        run.instances += 1
        run.check(float(np.min(rho.spectrum)), context={"check": "psd", "trial": i})
        run.check(1e-10 - abs(math.fsum(rho.spectrum) - 1.0),
                  context={"check": "unit_trace", "trial": i})
        run.check_bool(rho.rank == rank, states=(rho, rho),
                       context={"check": "rank", "trial": i, "expected": rank})
        proj = rho.support_projector.matrix
        run.check(config.tolerances.tol_psd - float(np.max(np.abs(proj @ proj - proj))),
                  context={"check": "projector_idempotent", "trial": i})
        run.check(1e-10 - abs(float(np.trace(proj).real) - rho.rank),
                  context={"check": "projector_trace", "trial": i})
        run.check_bool(kernel_included(rho, rho), context={"check": "kernel_reflexive"})
        # exact-spectrum construction round-trips
        raw = rng.exponential(size=d)
        zeros = int(rng.integers(0, d))
        if zeros:
            raw[np.argsort(raw)[:zeros]] = 0.0
        spec = np.sort(raw / math.fsum(raw))
        controlled = density_with_spectrum(spec, rng)
        run.check(1e-10 - float(np.max(np.abs(controlled.spectrum - spec))),
                  context={"check": "spectrum_roundtrip", "trial": i})
        # mixing closure
        lam = float(rng.uniform(0.0, 1.0))
        other = sample_density(d, d, rng)
        mix = DensityMatrix(lam * rho.matrix + (1.0 - lam) * other.matrix)
        run.check_bool(mix.dim == d, context={"check": "mixing_closure"})
        if d >= 2:
            deficient = sample_density(d, d - 1, rng)
            full = sample_density(d, d, rng)
            run.check_bool(not kernel_included(deficient, full),
                           context={"check": "kernel_excluded", "trial": i})


def _suite_entropy(run: _SuiteRun, config: SweepConfig, count: int) -> None:
    tols = config.tolerances
    dims = [d for d in config.dims if 2 <= d <= 8] or [2]
    for i in range(count):
        rng = trial_stream(config.seed, i, salt=4)
        d = int(rng.choice(dims))
        rho, sigma = _sample_pair(rng, d, rank_deficient=(i % 3 == 2))
        q = _sample_q(rng, exact_every=10, i=i)
        value = quantum_relative_q(rho, sigma, q, tols.tol_incl).as_float()
        run.instances += 1
        run.check(value + 1e-10, states=(rho, sigma),
                  context={"check": "positivity", "q": q, "trial": i})
        dist = schatten_norm(rho.matrix - sigma.matrix, 1.0)
        if dist > 1e-4:
            run.check_bool(value > 1e-10, states=(rho, sigma),
                           context={"check": "zero_only_at_equality", "q": q, "trial": i})
        if i % 25 == 0:
            self_val = quantum_relative_q(rho, rho, q, tols.tol_incl).as_float()
            run.check(1e-10 - abs(self_val), context={"check": "self_zero", "q": q})

    small = max(1, count // 5)
    for i in range(small):
        rng = trial_stream(config.seed, i, salt=5)
        q = _sample_q(rng, exact_every=7, i=i)
        run.instances += 1
        # pseudoadditivity on tensor products
        d1, d2 = int(rng.choice([2, 3])), int(rng.choice([2, 3]))
        r1, s1 = sample_density(d1, d1, rng), sample_density(d1, d1, rng)
        r2, s2 = sample_density(d2, d2, rng), sample_density(d2, d2, rng)
        v1 = quantum_relative_q(r1, s1, q).as_float()
        v2 = quantum_relative_q(r2, s2, q).as_float()
        joint = quantum_relative_q(tensor(r1, r2), tensor(s1, s2), q).as_float()
        expect = v1 + v2 + (q - 1.0) * v1 * v2
        run.check(1e-9 - abs(joint - expect),
                  context={"check": "pseudoadditive", "q": q, "trial": i})
        # joint convexity
        d = int(rng.choice(dims))
        ra, sa = sample_density(d, d, rng), sample_density(d, d, rng)
        rb, sb = sample_density(d, d, rng), sample_density(d, d, rng)
        lam = float(rng.uniform(0.0, 1.0))
        mix_r = DensityMatrix(lam * ra.matrix + (1.0 - lam) * rb.matrix)
        mix_s = DensityMatrix(lam * sa.matrix + (1.0 - lam) * sb.matrix)
        mixed = quantum_relative_q(mix_r, mix_s, q).as_float()
        averaged = (
            lam * quantum_relative_q(ra, sa, q).as_float()
            + (1.0 - lam) * quantum_relative_q(rb, sb, q).as_float()
        )
        run.check(averaged + 1e-9 - mixed, states=(mix_r, mix_s),
                  context={"check": "joint_convexity", "q": q, "trial": i})
        # monotonicity under partial trace
        da, db = int(rng.choice([2, 3])), int(rng.choice([2, 3]))
        rho_ab = sample_density(da * db, da * db, rng)
        sigma_ab = sample_density(da * db, da * db, rng)
        whole = quantum_relative_q(rho_ab, sigma_ab, q).as_float()
        reduced = quantum_relative_q(
            partial_trace(rho_ab, da, db, "A"), partial_trace(sigma_ab, da, db, "A"), q
        ).as_float()
        run.check(whole + 1e-9 - reduced, states=(rho_ab, sigma_ab),
                  context={"check": "partial_trace_monotone", "q": q, "trial": i})
        # unitary invariance
        u = haar_unitary(d, rng)
        rot = quantum_relative_q(
            DensityMatrix(u @ ra.matrix @ u.conj().T),
            DensityMatrix(u @ sa.matrix @ u.conj().T),
            q,
        ).as_float()
        base = quantum_relative_q(ra, sa, q).as_float()
        run.check(1e-9 * (1.0 + abs(base)) - abs(rot - base),
                  context={"check": "unitary_invariance", "q": q, "trial": i})
        # reduction to the classical formula for commuting states; pairing of
        # the two spectra follows the shared eigenbasis columns
        spec_a = rng.dirichlet(np.ones(d)) * 0.8 + 0.2 / d
        spec_b = rng.dirichlet(np.ones(d)) * 0.8 + 0.2 / d
        basis = haar_unitary(d, rng)
        qa = DensityMatrix.from_eigensystem(spec_a, basis)
        qb = DensityMatrix.from_eigensystem(spec_b, basis)
        quantum = quantum_relative_q(qa, qb, q).as_float()
        classical = classical_relative_q(spec_a, spec_b, q).as_float()
        run.check(1e-10 - abs(quantum - classical),
                  context={"check": "classical_reduction", "q": q, "trial": i})

    # q -> 1 consistency on fixed pairs
    for pair_idx in range(2):
        rng = trial_stream(config.seed, pair_idx, salt=6)
        d = 2 + 2 * pair_idx
        rho, sigma = sample_density(d, d, rng), sample_density(d, d, rng)
        d1 = relative_entropy_vn(rho, sigma).as_float()
        ratios = []
        for k in range(2, 6):
            q = 1.0 + 10.0**-k
            dq = quantum_relative_q(rho, sigma, q).as_float()
            ratios.append(abs(dq - d1) / (q - 1.0))
        bound = 2.0 * ratios[0] + 1e-9
        run.instances += 1
        for ratio in ratios[1:]:
            run.check(bound - ratio, states=(rho, sigma),
                      context={"check": "q_to_1", "pair": pair_idx})


def _bound_margin(report: BoundReport) -> float:
    if report.vacuous or math.isinf(report.rhs):
        return math.inf
    return report.rhs + TOL_BOUND * (1.0 + report.rhs) - report.lhs.as_float()


def _suite_thm1(run: _SuiteRun, config: SweepConfig, count: int) -> None:
    dims = [d for d in config.dims if 2 <= d <= 8] or [2]
    for i in range(count):
        rng = trial_stream(config.seed, i, salt=7)
        d = int(rng.choice(dims))
        rho, sigma = sample_density(d, d, rng), sample_density(d, d, rng)
        q = _sample_q(rng, exact_every=10, i=i)
        reports = thm1_bounds(rho, sigma, q, config.tolerances.tol_bound,
                              config.tolerances.tol_incl)
        run.instances += 1
        for rep in reports:
            run.check(_bound_margin(rep), states=(rho, sigma),
                      context={"check": rep.name, "q": q, "trial": i})
        # the spectral-norm bound is never looser than the halved trace-norm one
        run.check(reports[1].rhs + 1e-12 * (1.0 + reports[1].rhs) - reports[0].rhs,
                  states=(rho, sigma), context={"check": "rhs1_le_rhs2", "q": q, "trial": i})


def _suite_thm2(run: _SuiteRun, config: SweepConfig, count: int) -> None:
    dims = [d for d in config.dims if 2 <= d <= 8] or [2]
    for i in range(count):
        rng = trial_stream(config.seed, i, salt=8)
        d = int(rng.choice(dims))
        rho, sigma = _sample_pair(rng, d, rank_deficient=(i % 2 == 1))
        q = _sample_q(rng, exact_every=10, i=i)
        run.instances += 1
        for variant in ("general", "traceless"):
            rep = thm2_bound(rho, sigma, q, variant, config.tolerances.tol_bound,
                             config.tolerances.tol_incl)
            run.check(_bound_margin(rep), states=(rho, sigma),
                      context={"check": rep.name, "q": q, "trial": i})


def _suite_thm3(run: _SuiteRun, config: SweepConfig, count: int) -> None:
    dims = [d for d in config.dims if 2 <= d <= 8] or [2]
    for i in range(count):
        rng = trial_stream(config.seed, i, salt=9)
        d = int(rng.choice(dims))
        rho, sigma = _sample_pair(rng, d, rank_deficient=(i % 2 == 1))
        if i % 5 == 4:
            q = float(rng.choice([2.0, 3.0, 4.0]))
        elif i % 2 == 0:
            q = _sample_q(rng, exact_every=0, i=i)
        else:
            q = _sample_q(rng, exact_every=0, i=i, lo=2.0, hi=6.0)
        run.instances += 1
        rep = thm3_bound(rho, sigma, q, "general", config.tolerances.tol_bound,
                         config.tolerances.tol_incl)
        run.check(_bound_margin(rep), states=(rho, sigma),
                  context={"check": rep.name, "q": q, "trial": i})
        q2 = _sample_q(rng, exact_every=10, i=i)
        rep2 = thm3_bound(rho, sigma, q2, "q2", config.tolerances.tol_bound,
                          config.tolerances.tol_incl)
        run.check(_bound_margin(rep2), states=(rho, sigma),
                  context={"check": rep2.name, "q": q2, "trial": i})


def _suite_lower(run: _SuiteRun, config: SweepConfig, count: int) -> None:
    dims = [d for d in config.dims if 2 <= d <= 8] or [2]
    for i in range(count):
        rng = trial_stream(config.seed, i, salt=10)
        d = int(rng.choice(dims))
        rho, sigma = _sample_pair(rng, d, rank_deficient=(i % 4 == 3))
        q = _sample_q(rng, exact_every=10, i=i)
        p = 0.0 if i % 10 == 5 else float(rng.uniform(0.0, 1.0))
        run.instances += 1
        for rep in lower_bounds(rho, sigma, q, p, config.tolerances.tol_bound,
                                config.tolerances.tol_incl):
            run.check_bool(rep.holds, states=(rho, sigma),
                           context={"check": rep.name, "q": q, "p": p, "trial": i})
            if rep.slack is not None and math.isfinite(rep.slack):
                run.check(rep.slack + TOL_BOUND, states=(rho, sigma),
                          context={"check": rep.name + "_slack", "q": q, "p": p})


def _suite_lemma1(run: _SuiteRun, config: SweepConfig, count: int) -> None:
    dims = [d for d in config.dims if 2 <= d <= 8] or [2]
    nodes = config.tolerances.quad_nodes
    for i in range(count):
        rng = trial_stream(config.seed, i, salt=11)
        d = int(rng.choice(dims))
        a_op = _rand_pd(rng, d)
        b_op = _rand_pd(rng, d)
        run.instances += 1
        for r in (0.1, 0.5, 0.9):
            rule = quadrature.QuadratureRule(r=r, nodes_per_panel=nodes)
            rep = frechet_check(a_op, b_op, r, rule, config.tolerances.tol_psd)
            run.check(rep.rhs + 1e-7, context={"check": "psd_gap", "r": r, "trial": i})


def _suite_lemma2(run: _SuiteRun, config: SweepConfig, count: int) -> None:
    dims = [d for d in config.dims if 2 <= d <= 8] or [2]
    for i in range(count):
        rng = trial_stream(config.seed, i, salt=12)
        d = int(rng.choice(dims))
        x, y = _rand_herm(rng, d), _rand_herm(rng, d)
        run.instances += 1
        for n in range(1, 7):
            for p in (1.0, 2.0, math.inf):
                rep = power_diff_bound(x, y, n, p)
                run.check(_bound_margin(rep),
                          context={"check": "power_diff", "n": n, "p": p, "trial": i})
                if n == 1:
                    scale = max(1.0, rep.rhs)
                    run.check(1e-10 * scale - abs(rep.rhs - rep.lhs.as_float()),
                              context={"check": "n1_equality", "p": p, "trial": i})


def _suite_lemma3(run: _SuiteRun, config: SweepConfig, count: int) -> None:
    dims = [d for d in config.dims if 2 <= d <= 8] or [2]
    for i in range(count):
        rng = trial_stream(config.seed, i, salt=13)
        d = int(rng.choice(dims))
        rank = d if i % 3 else max(1, d - 1)
        g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
        a_m = g @ g.conj().T
        a_op = HermitianOperator(a_m / np.trace(a_m).real)
        b_op = _rand_pd(rng, d, trace_one=True)
        run.instances += 1
        for s in (0.25, 0.5, 0.75):
            rep = lemma3_bound(a_op, b_op, s)
            run.check(_bound_margin(rep), context={"check": "lemma3", "s": s, "trial": i})


ENVELOPE_B0 = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
ENVELOPE_Q = (1.5, 2.0, 3.0)


def divergence_envelope(seed: int, d: int = 4, tolerances: Tolerances | None = None) -> list[dict]:
    """Divergence-rate probe on the sigma_family grid with one fixed random rho.

    Each record carries D_q, the general b0^(1-q) bound, and the rescaled
    ratio D_q * b0^(q-1) next to its b0-free envelope constant.
    """
    tols = tolerances or Tolerances()
    rng = trial_stream(seed, 0, salt=14)
    rho = sample_density(d, d, rng)
    records = []
    for q in ENVELOPE_Q:
        for b0 in ENVELOPE_B0:
            sigma = sigma_family(d, b0)
            rep = thm3_bound(rho, sigma, q, "general", tols.tol_bound, tols.tol_incl)
            dq = rep.lhs.as_float()
            ratio = dq * b0 ** (q - 1.0)
            constant = rep.extras["ceiling_factor"] * rep.constants.lambda1 ** (
                q - 1.0
            ) * rep.distances["trace_norm"]
            records.append(
                {
                    "q": q,
                    "b0": b0,
                    "Dq": dq,
                    "thm3_rhs": rep.rhs,
                    "ratio": ratio,
                    "envelope_constant": constant,
                    "holds": rep.holds,
                }
            )
    return records


CROSSOVER_B0 = (1e-3, 1e-4, 1e-5, 1e-6)


def tightness_crossover(seed: int, trials: int, d: int = 4,
                        tolerances: Tolerances | None = None) -> list[dict]:
    """Compare the quadratic-in-b0 bound against the b0^(1-q) one at q = 2 for
    small b0, where the latter must win in every trial."""
    tols = tolerances or Tolerances()
    records = []
    for trial in range(trials):
        rng = trial_stream(seed, trial, salt=15)
        rho = sample_density(d, d, rng)
        for b0 in CROSSOVER_B0:
            sigma = sigma_family(d, b0)
            rep2 = thm2_bound(rho, sigma, 2.0, "general", tols.tol_bound, tols.tol_incl)
            rep3 = thm3_bound(rho, sigma, 2.0, "q2", tols.tol_bound, tols.tol_incl)
            records.append(
                {
                    "trial": trial,
                    "b0": b0,
                    "thm2_rhs": rep2.rhs,
                    "thm3q2_rhs": rep3.rhs,
                    "tighter": rep3.rhs < rep2.rhs,
                }
            )
    return records


def _suite_envelope(run: _SuiteRun, config: SweepConfig, count: int) -> None:
    del count
    for rec in divergence_envelope(config.seed, d=4, tolerances=config.tolerances):
        run.instances += 1
        run.check_bool(rec["holds"], context={"check": "dq_le_thm3", **{k: rec[k] for k in ("q", "b0")}})
        tol = config.tolerances.tol_bound
        run.check(rec["envelope_constant"] * (1.0 + tol) + tol - rec["ratio"],
                  context={"check": "ratio_bounded", "q": rec["q"], "b0": rec["b0"]})


def _suite_crossover(run: _SuiteRun, config: SweepConfig, count: int) -> None:
    trials = max(5, count // 40)
    for rec in tightness_crossover(config.seed, trials, d=4, tolerances=config.tolerances):
        run.instances += 1
        run.check(rec["thm2_rhs"] - rec["thm3q2_rhs"],
                  context={"check": "crossover", "trial": rec["trial"], "b0": rec["b0"]})


# suite name -> (builder, count as a function of config.trials)
_SUITES = (
    ("linalg_norms", _suite_linalg_norms, lambda t: max(1, t // 5)),
    ("quadrature_oracle", _suite_quadrature, lambda t: max(1, t // 5)),
    ("state_invariants", _suite_states, lambda t: t),
    ("entropy_properties", _suite_entropy, lambda t: t),
    ("thm1_soundness", _suite_thm1, lambda t: t),
    ("thm2_soundness", _suite_thm2, lambda t: t),
    ("thm3_soundness", _suite_thm3, lambda t: t),
    ("lower_bound_soundness", _suite_lower, lambda t: t),
    ("lemma1_psd_gap", _suite_lemma1, lambda t: max(1, t // 5)),
    ("lemma2_power_diff", _suite_lemma2, lambda t: max(1, t // 2)),
    ("lemma3_frac_trace", _suite_lemma3, lambda t: max(1, t // 2)),
    ("divergence_envelope", _suite_envelope, lambda t: t),
    ("tightness_crossover", _suite_crossover, lambda t: t),
)


def default_verify_config(seed: int = 1, trials: int = 1000,
                          output_path: str | None = None) -> SweepConfig:
    """Configuration whose suite counts reproduce the standard acceptance run."""
    return SweepConfig(trials=trials, seed=seed, output_path=output_path)


def cmd_verify(config: SweepConfig) -> VerifyReport:
    """Run every property suite; counterexamples are serialized next to the
    report when an output path is configured."""
    config.validate()
    quadrature.self_test(config.tolerances.quad_nodes)
    out_dir = Path(config.output_path).parent if config.output_path else None
    results = []
    for name, builder, count_fn in _SUITES:
        run = _SuiteRun(name, out_dir, config.seed)
        builder(run, config, count_fn(config.trials))
        results.append(run.result())
    report = VerifyReport(seed=config.seed, suites=results)
    if config.output_path:
        doc = {
            "seed": config.seed,
            "config": config.echo_dict(),
            "all_passed": report.passed,
            "suites": [asdict(s) for s in report.suites],
        }
        Path(config.output_path).parent.mkdir(parents=True, exist_ok=True)
        with open(config.output_path, "w", encoding="ascii") as fh:
            json.dump(doc, fh, sort_keys=True, indent=2)
            fh.write("\n")
    return report


CSV_COLUMNS = (
    "d", "q", "b0", "trial", "seed", "Dq", "D1", "dist_tr", "dist_sp",
    "thm1_rhs1", "thm1_rhs2", "thm1_rhs3", "thm2_rhs", "thm2tl_rhs",
    "thm3_rhs", "thm3q2_rhs", "pinsker_lhs", "ratio_dq_b0", "vacuous",
)


def _csv_num(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def sweep_row(rho: DensityMatrix, sigma: DensityMatrix, q: float, b0: float,
              trial: int, stream_seed: int, tols: Tolerances) -> dict:
    """One record of the sweep CSV for a given state pair."""
    d = rho.dim
    dq = quantum_relative_q(rho, sigma, q, tols.tol_incl)
    d1 = relative_entropy_vn(rho, sigma, tols.tol_incl)
    dist_tr = schatten_norm(rho.matrix - sigma.matrix, 1.0)
    dist_sp = schatten_norm(rho.matrix - sigma.matrix, math.inf)
    vacuous: list[str] = []

    def rhs_of(label: str, evaluate) -> float:
        try:
            rep = evaluate()
        except PreconditionFailed:
            vacuous.append(label)
            return math.nan
        if rep.vacuous:
            vacuous.append(label)
            return math.nan
        return rep.rhs

    thm1_vals = [math.nan] * 3
    try:
        reports = thm1_bounds(rho, sigma, q, tols.tol_bound, tols.tol_incl)
        if reports[0].vacuous:
            vacuous.append("thm1")
        else:
            thm1_vals = [rep.rhs for rep in reports]
    except PreconditionFailed:
        vacuous.append("thm1")

    row = {
        "d": d,
        "q": q,
        "b0": b0,
        "trial": trial,
        "seed": stream_seed,
        "Dq": dq.as_float(),
        "D1": d1.as_float(),
        "dist_tr": dist_tr,
        "dist_sp": dist_sp,
        "thm1_rhs1": thm1_vals[0],
        "thm1_rhs2": thm1_vals[1],
        "thm1_rhs3": thm1_vals[2],
        "thm2_rhs": rhs_of("thm2", lambda: thm2_bound(
            rho, sigma, q, "general", tols.tol_bound, tols.tol_incl)),
        "thm2tl_rhs": rhs_of("thm2tl", lambda: thm2_bound(
            rho, sigma, q, "traceless", tols.tol_bound, tols.tol_incl)),
        "thm3_rhs": rhs_of("thm3", lambda: thm3_bound(
            rho, sigma, q, "general", tols.tol_bound, tols.tol_incl)),
        "thm3q2_rhs": rhs_of("thm3q2", lambda: thm3_bound(
            rho, sigma, q, "q2", tols.tol_bound, tols.tol_incl)),
        "pinsker_lhs": 0.5 * dist_tr**2,
        "ratio_dq_b0": dq.as_float() * b0 ** (q - 1.0),
        "vacuous": ";".join(vacuous),
    }
    return row


def cmd_sweep(config: SweepConfig) -> Path:
    """Grid sweep over (d, q, b0, trial) against the sigma_family states.

    Every row pairs sigma_family(d, b0) with a random full-rank rho drawn from
    the per-trial stream, so rows with equal (d, trial) share the same rho
    across the whole (q, b0) grid.
    """
    config.validate(require_grids=True)
    quadrature.self_test(config.tolerances.quad_nodes)
    out = Path(config.output_path)
    lines = [
        "# config: " + json.dumps(config.echo_dict(), sort_keys=True),
        f"# seed: {config.seed}",
        ",".join(CSV_COLUMNS),
    ]
    for d in config.dims:
        for q in config.q_grid:
            for b0 in config.b0_grid:
                sigma = sigma_family(d, b0)
                for trial in range(config.trials):
                    stream_seed = (config.seed ^ trial) & _MASK64
                    rng = trial_stream(config.seed, trial)
                    rho = sample_density(d, d, rng)
                    row = sweep_row(rho, sigma, q, b0, trial, stream_seed,
                                    config.tolerances)
                    cells = []
                    for col in CSV_COLUMNS:
                        val = row[col]
                        if col in ("d", "trial", "seed"):
                            cells.append(str(val))
                        elif col == "vacuous":
                            cells.append(val)
                        else:
                            cells.append(_csv_num(float(val)))
                    lines.append(",".join(cells))
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = out.with_suffix(out.suffix + ".tmp")
    with open(tmp, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, out)
    return out


def _report_to_json(rep: BoundReport) -> dict:
    return {
        "lhs": extended_to_json(rep.lhs),
        "rhs": rep.rhs if math.isfinite(rep.rhs) else "inf",
        "slack": rep.slack,
        "holds": rep.holds,
        "vacuous": rep.vacuous,
    }


def cmd_eval(rho_path, sigma_path, q_list, tolerances: Tolerances | None = None) -> dict:
    """Evaluate D_q, the q -> 1 anchor, and every applicable bound for a state
    pair loaded from JSON files; returns a JSON-serializable report."""
    tols = tolerances or Tolerances()
    tols.validate()
    quadrature.self_test(tols.quad_nodes)
    rho = read_state(rho_path)
    sigma = read_state(sigma_path)
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    summary = SpectralSummary.from_states(rho, sigma)
    dist_tr = schatten_norm(rho.matrix - sigma.matrix, 1.0)
    dist_sp = schatten_norm(rho.matrix - sigma.matrix, math.inf)
    d1 = relative_entropy_vn(rho, sigma, tols.tol_incl)
    per_q = []
    for q in q_list:
        q = float(q)
        dq = quantum_relative_q(rho, sigma, q, tols.tol_incl)
        reports: dict[str, dict] = {}

        def add(evaluate) -> None:
            try:
                result = evaluate()
            except PreconditionFailed:
                return
            for rep in result if isinstance(result, list) else [result]:
                reports[rep.name] = _report_to_json(rep)

        add(lambda: thm1_bounds(rho, sigma, q, tols.tol_bound, tols.tol_incl))
        add(lambda: thm2_bound(rho, sigma, q, "general", tols.tol_bound, tols.tol_incl))
        add(lambda: thm2_bound(rho, sigma, q, "traceless", tols.tol_bound, tols.tol_incl))
        add(lambda: thm3_bound(rho, sigma, q, "general", tols.tol_bound, tols.tol_incl))
        add(lambda: thm3_bound(rho, sigma, q, "q2", tols.tol_bound, tols.tol_incl))
        add(lambda: lower_bounds(rho, sigma, q, 0.5, tols.tol_bound, tols.tol_incl))
        per_q.append({"q": q, "Dq": extended_to_json(dq), "reports": reports})
    return {
        "rho_path": str(rho_path),
        "sigma_path": str(sigma_path),
        "dim": rho.dim,
        "spectral_summary": asdict(summary),
        "distances": {"trace_norm": dist_tr, "spectral_norm": dist_sp},
        "D1": extended_to_json(d1),
        "per_q": per_q,
    }


def cmd_gen(d: int, rank: int, seed: int, out) -> Path:
    """Sample one random state and write it to the JSON state format."""
    if not 1 <= rank <= d:
        raise ConfigError(f"rank must satisfy 1 <= rank <= d, got rank={rank}, d={d}")
    if not 1 <= d <= 256:
        raise ConfigError(f"dimension must lie in [1, 256], got {d}")
    rho = sample_density(d, rank, trial_stream(seed, 0))
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_state(out, rho)
    return out
