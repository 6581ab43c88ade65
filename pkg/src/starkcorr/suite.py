"""Closed form vs oracle comparisons, bundled into one JSON-serialisable report."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .measures import concurrence_x, lqu_model, tdd
from .model import ModelParams, Scenario, StatePrep, XState, amplitudes, state_from_amplitudes
from .oracles import (
    DEFAULT_SEED,
    KernelSign,
    OracleReport,
    concurrence_oracle,
    determine_kernel_sign,
    kernel_residual_excited,
    kernel_residual_vacuum,
    lqu_oracle,
    tdd_oracle,
)

CONCURRENCE_TOL = 1e-9
LQU_TOL = 1e-3
TDD_REL = 0.02
LOWER_SLACK = 1e-9
VACUUM_RESIDUAL_TOL = 1e-6
EXCITED_RESIDUAL_TOL = 1e-5
RESIDUAL_STEPS = 2**18
RESIDUAL_WINDOW = 10.0


@dataclass(frozen=True)
class SuiteScale:
    lqu_states: int
    lqu_grid: tuple[int, int]
    tdd_states: int
    tdd_budget: int
    tdd_restarts: int


SCALES = {
    "quick": SuiteScale(lqu_states=12, lqu_grid=(200, 400), tdd_states=20, tdd_budget=3000, tdd_restarts=3),
    "full": SuiteScale(lqu_states=40, lqu_grid=(400, 800), tdd_states=40, tdd_budget=12000, tdd_restarts=5),
}


def concurrence_grid() -> list[XState]:
    """2000 model states: 2 widths x 10 x-values x 20 times x 5 Stark shifts."""
    states = []
    for lam in (10.0, 0.1):
        tau_max = 3.0 if lam > 2 else 50.0
        for x, tau, eta in itertools.product(
            np.linspace(0.0, 1.0, 10), np.linspace(0.0, tau_max, 20), np.linspace(0.0, 15.0, 5)
        ):
            states.append(state_from_amplitudes(amplitudes(tau, StatePrep(x), ModelParams(lam, eta))))
    return states


def sampled_amplitudes(n: int, rng: np.random.Generator):
    out = []
    for k in range(n):
        scenario = Scenario.VACUUM if k % 2 == 0 else Scenario.ONE_PHOTON
        lam = 10.0 if (k // 2) % 2 == 0 else 0.1
        tau_max = 3.0 if lam > 2 else 30.0
        eta = float(rng.uniform(0.0, 15.0))
        xi = float(rng.uniform(0.0, 5.0)) if scenario is Scenario.ONE_PHOTON else 0.0
        x = float(rng.uniform(0.05, 0.95))
        tau = float(rng.uniform(0.0, tau_max))
        p = ModelParams(lam, eta, xi, scenario)
        out.append((p, x, amplitudes(tau, StatePrep(x), p)))
    return out


def _entry(name: str, report: OracleReport, passed: bool, tolerance: str, **extra) -> dict:
    return {"name": name, **report.to_dict(), "tolerance": tolerance, "passed": bool(passed), **extra}


def run_oracle_suite(scale: str = "quick", seed: int = DEFAULT_SEED) -> dict:
    if scale not in SCALES:
        raise ValueError(f"scale must be one of {', '.join(SCALES)}")
    cfg = SCALES[scale]
    rng = np.random.default_rng(seed)
    entries = []

    # Wootters concurrence: worst gap over the whole grid
    states = concurrence_grid()
    pairs = [(concurrence_x(s), concurrence_oracle(s)) for s in states]
    closed, oracle = max(pairs, key=lambda pair: abs(pair[0] - pair[1]))
    rep = OracleReport.compare(closed, oracle, len(states))
    entries.append(_entry("concurrence/grid-worst", rep, rep.gap <= CONCURRENCE_TOL,
                          f"gap <= {CONCURRENCE_TOL:g}", states=len(states)))

    for i, (p, x, amp) in enumerate(sampled_amplitudes(cfg.lqu_states, rng)):
        closed = lqu_model(amp).q
        value, evals = lqu_oracle(state_from_amplitudes(amp), *cfg.lqu_grid)
        rep = OracleReport.compare(closed, value, evals)
        ok = rep.gap <= LQU_TOL and value >= closed - LOWER_SLACK
        entries.append(_entry(f"lqu/{i:02d}", rep, ok, f"oracle in [closed-{LOWER_SLACK:g}, closed+{LQU_TOL:g}]",
                              **_describe(p, x, amp.tau)))

    for i, (p, x, amp) in enumerate(sampled_amplitudes(cfg.tdd_states, rng)):
        state = state_from_amplitudes(amp)
        closed = tdd(state)
        value, _, evals = tdd_oracle(state, cfg.tdd_budget, seed=seed + i, restarts=cfg.tdd_restarts)
        rep = OracleReport.compare(closed, value, evals)
        ok = closed - LOWER_SLACK <= value <= closed * (1 + TDD_REL)
        entries.append(_entry(f"tdd/{i:02d}", rep, ok, f"oracle in [closed-{LOWER_SLACK:g}, closed*{1 + TDD_REL:g}]",
                              **_describe(p, x, amp.tau)))

    for lam, eta in itertools.product((10.0, 0.1), (0.0, 0.5, 15.0)):
        p = ModelParams(lam, eta)
        r = kernel_residual_vacuum(p, RESIDUAL_WINDOW, RESIDUAL_STEPS)
        rep = OracleReport.compare(0.0, r, RESIDUAL_STEPS + 1)
        entries.append(_entry(f"kernel/vacuum/lam={lam:g}/eta={eta:g}", rep, r <= VACUUM_RESIDUAL_TOL,
                              f"residual <= {VACUUM_RESIDUAL_TOL:g}"))

    signs = []
    for lam, eta, xi in ((10.0, 0.0, 0.0), (10.0, 5.0, 2.0), (0.1, 1.5, 0.0), (0.1, 3.0, 1.0)):
        p = ModelParams(lam, eta, xi, Scenario.ONE_PHOTON)
        found = determine_kernel_sign(p)
        signs.append(found["satisfied_sign"])
        r = kernel_residual_excited(p, RESIDUAL_WINDOW, RESIDUAL_STEPS, KernelSign(found["satisfied_sign"]))
        rep = OracleReport.compare(0.0, r, RESIDUAL_STEPS + 1)
        entries.append(_entry(f"kernel/one-photon/lam={lam:g}/eta={eta:g}/xi={xi:g}", rep,
                              r <= EXCITED_RESIDUAL_TOL, f"residual <= {EXCITED_RESIDUAL_TOL:g}",
                              kernel_sign=found["satisfied_sign"],
                              sign_residuals=found["residuals"]))

    failures = [e["name"] for e in entries if not e["passed"]]
    return {
        "scale": scale,
        "seed": seed,
        "kernel_sign": signs[0] if len(set(signs)) == 1 else "inconsistent",
        "entries": entries,
        "failures": failures,
        "passed": not failures,
    }


def _describe(p: ModelParams, x: float, tau: float) -> dict:
    return {"scenario": p.scenario.value, "lam": p.lam, "eta": p.eta, "xi": p.xi,
            "x": x, "tau": tau}
