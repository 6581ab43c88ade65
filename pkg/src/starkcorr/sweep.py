"""Time and (x, tau) sweeps, figure presets and deterministic CSV/JSON output."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .measures import CorrelationSample, evaluate_all
from .model import ModelParams, Scenario, StatePrep

MEASURES = ("C", "B", "D", "Q")
CSV_HEADER = ("tau", "eta", "xi", "x", "C", "B", "D", "Q", "M11", "M33")
BELL_X = 1.0 / math.sqrt(2.0)

MARKOV_WINDOW = (3.0, 601)
NON_MARKOV_WINDOW = (50.0, 1001)
SURFACE_POINTS = 101


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    scenario: Scenario = Scenario.VACUUM
    lam: float = 10.0
    eta_list: tuple[float, ...] = (0.0,)
    xi_list: tuple[float, ...] = (0.0,)
    x_list: tuple[float, ...] = (BELL_X,)
    tau_max: float = 3.0
    n_points: int = 601
    measures: tuple[str, ...] = MEASURES
    output_path: str | None = None
    format: str = "csv"
    seed: int = 0
    name: str = field(default="sweep", compare=False)

    def validate(self) -> "SweepConfig":
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ConfigError(f"lambda must be > 0, got {self.lam}")
        if self.n_points < 2:
            raise ConfigError(f"points must be >= 2, got {self.n_points}")
        if not (math.isfinite(self.tau_max) and self.tau_max > 0):
            raise ConfigError(f"tau-max must be > 0, got {self.tau_max}")
        if not self.eta_list or not self.x_list or not self.xi_list:
            raise ConfigError("eta, xi and x lists must be non-empty")
        for name, values in (("eta", self.eta_list), ("xi", self.xi_list), ("x", self.x_list)):
            if not all(math.isfinite(v) for v in values):
                raise ConfigError(f"{name} values must be finite")
        bad = [x for x in self.x_list if not 0.0 <= x <= 1.0]
        if bad:
            raise ConfigError(f"x values outside [0, 1]: {bad}")
        if self.scenario is Scenario.VACUUM and tuple(self.xi_list) != (0.0,):
            raise ConfigError("xi does not enter the vacuum scenario; leave it at 0")
        unknown = [m for m in self.measures if m not in MEASURES]
        if unknown or not self.measures:
            raise ConfigError(f"measures must be a non-empty subset of {','.join(MEASURES)}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        return self


def _preset_table() -> dict[str, SweepConfig]:
    markov = dict(lam=10.0, tau_max=MARKOV_WINDOW[0], n_points=MARKOV_WINDOW[1])
    non_markov = dict(lam=0.1, tau_max=NON_MARKOV_WINDOW[0], n_points=NON_MARKOV_WINDOW[1])
    surface_x = tuple(float(v) for v in np.linspace(0.0, 1.0, SURFACE_POINTS))
    table = {}
    for fig, measure in (("1", "B"), ("3", "D"), ("5", "Q")):
        table[f"fig{fig}a"] = SweepConfig(eta_list=(0.0, 5.0, 10.0, 15.0), measures=(measure,), **markov)
        table[f"fig{fig}b"] = SweepConfig(eta_list=(0.0, 0.5, 1.0, 1.5), measures=(measure,), **non_markov)
    for fig, measure in (("2", "B"), ("4", "D"), ("6", "Q")):
        table[f"fig{fig}a"] = SweepConfig(
            lam=10.0, eta_list=(15.0,), x_list=surface_x, tau_max=MARKOV_WINDOW[0],
            n_points=SURFACE_POINTS, measures=(measure,),
        )
        table[f"fig{fig}b"] = SweepConfig(
            lam=0.1, eta_list=(0.2,), x_list=surface_x, tau_max=NON_MARKOV_WINDOW[0],
            n_points=SURFACE_POINTS, measures=(measure,),
        )
    # one-photon reservoir: xi = 0, so eta is the detuning eta - xi
    for sub, measure in zip("abc", "BDQ"):
        table[f"fig7{sub}"] = SweepConfig(
            scenario=Scenario.ONE_PHOTON, eta_list=(0.0, 5.0, 10.0, 15.0), measures=(measure,), **markov
        )
    for sub, measure in zip("def", "BDQ"):
        table[f"fig7{sub}"] = SweepConfig(
            scenario=Scenario.ONE_PHOTON, eta_list=(0.0, 1.5, 3.0, 10.0), measures=(measure,), **non_markov
        )
    return {k: replace(v, name=k) for k, v in sorted(table.items())}


PRESETS = _preset_table()


def expand_preset(preset_id: str) -> SweepConfig:
    try:
        return PRESETS[preset_id]
    except KeyError:
        raise ConfigError(
            f"unknown preset {preset_id!r}; valid ids: {', '.join(PRESETS)}"
        ) from None


def fmt(value: float) -> str:
    """12 significant digits, trailing zeros kept."""
    return format(float(value), "#.12g")


def tau_grid(cfg: SweepConfig) -> np.ndarray:
    return np.linspace(0.0, cfg.tau_max, cfg.n_points)


def iter_samples(cfg: SweepConfig):
    """Yield ``(eta, xi, x, sample)`` in lexicographic (eta, xi, x, tau) order."""
    taus = tau_grid(cfg)
    for eta in sorted(set(cfg.eta_list)):
        for xi in sorted(set(cfg.xi_list)):
            params = ModelParams(cfg.lam, eta, xi, cfg.scenario)
            for x in sorted(set(cfg.x_list)):
                prep = StatePrep(x)
                for tau in taus:
                    yield eta, xi, x, evaluate_all(float(tau), prep, params)


def _row(cfg: SweepConfig, eta: float, xi: float, x: float, s: CorrelationSample) -> dict:
    chosen = set(cfg.measures)
    values = {"C": s.concurrence, "B": s.bures, "D": s.tdd, "Q": s.lqu}
    row = {"tau": s.tau, "eta": eta, "xi": xi, "x": x}
    for m in MEASURES:
        row[m] = values[m] if m in chosen else None
    # the LQU branch values only make sense alongside Q
    row["M11"] = s.m11 if "Q" in chosen else None
    row["M33"] = s.m33 if "Q" in chosen else None
    return row


def sweep_rows(cfg: SweepConfig) -> list[dict]:
    cfg.validate()
    return [_row(cfg, eta, xi, x, s) for eta, xi, x, s in iter_samples(cfg)]


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(["NA" if row[k] is None else fmt(row[k]) for k in CSV_HEADER])
    return buf.getvalue()


def render_json(rows: list[dict]) -> str:
    out = [
        {k: None if row[k] is None else float(fmt(row[k])) for k in CSV_HEADER}
        for row in rows
    ]
    return json.dumps(out, indent=1) + "\n"


def render(cfg: SweepConfig, rows: list[dict] | None = None) -> str:
    rows = sweep_rows(cfg) if rows is None else rows
    return render_csv(rows) if cfg.format == "csv" else render_json(rows)
