"""Closed-form correlation measures for X states and for the model's amplitudes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .model import (
    AmplitudePair,
    ModelParams,
    StatePrep,
    XState,
    amplitudes,
    state_from_amplitudes,
)

BURES_MAX = math.sqrt(2.0 - math.sqrt(2.0))
DECAYED = 1e-14
_DEGENERATE = 1e-12
_SLACK = 1e-9


class DegenerateStateError(ValueError):
    pass


@dataclass(frozen=True)
class FanoBloch:
    """Non-zero correlation-tensor entries of an X state."""

    r00: float
    r03: float
    r30: float
    r11c: float
    r22c: float
    r33c: float

    @property
    def r_max_sq(self) -> float:
        return max(self.r33c**2, self.r22c**2 + self.r30**2)

    @property
    def r_min_sq(self) -> float:
        return min(self.r11c**2, self.r33c**2)


class LquResult(NamedTuple):
    q: float
    m11: float
    m33: float
    decayed: bool = False


@dataclass(frozen=True)
class CorrelationSample:
    tau: float
    concurrence: float
    bures: float
    tdd: float
    lqu: float
    m11: float
    m33: float
    decayed: bool = False


def _clamp(value: float, lo: float, hi: float) -> float:
    if value < lo - _SLACK or value > hi + _SLACK:
        raise ValueError(f"value {value!r} outside [{lo}, {hi}] beyond round-off")
    return min(max(value, lo), hi)


def concurrence_x(s: XState) -> float:
    c = 2.0 * max(
        0.0,
        abs(s.r23) - math.sqrt(max(0.0, s.r11 * s.r44)),
        abs(s.r14) - math.sqrt(max(0.0, s.r22 * s.r33)),
    )
    return _clamp(c, 0.0, 1.0)


def bures_entanglement(c: float) -> float:
    """Bures-distance entanglement as a function of concurrence."""
    if not -1e-12 <= c <= 1.0 + 1e-12:
        raise ValueError(f"concurrence {c!r} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    inner = 2.0 + 2.0 * math.sqrt(1.0 - c * c)
    return math.sqrt(max(0.0, 2.0 - math.sqrt(inner)))


def fano_bloch(s: XState) -> FanoBloch:
    a23, a14 = abs(s.r23), abs(s.r14)
    return FanoBloch(
        r00=1.0,
        r03=1.0 - 2.0 * (s.r22 + s.r44),
        r30=1.0 - 2.0 * (s.r33 + s.r44),
        r11c=2.0 * (a23 + a14),
        r22c=2.0 * (a23 - a14),
        r33c=1.0 - 2.0 * (s.r22 + s.r33),
    )


def tdd(s: XState) -> float:
    """Trace-distance discord of an X state (measurement on the first qubit)."""
    fb = fano_bloch(s)
    r11s, r22s = fb.r11c**2, fb.r22c**2
    if abs(r11s - r22s) <= _DEGENERATE:
        # numerator and denominator share the factor r_max^2 - r_min^2
        return _clamp(abs(fb.r11c), 0.0, 1.0)
    num = r11s * fb.r_max_sq - r22s * fb.r_min_sq
    den = fb.r_max_sq - fb.r_min_sq + r11s - r22s
    if abs(den) < _DEGENERATE:
        raise DegenerateStateError("trace-distance discord formula is 0/0 for this state")
    return _clamp(math.sqrt(max(0.0, num / den)), 0.0, 1.0)


def lqu_model(a: AmplitudePair) -> LquResult:
    """LQU of the model state, probing the qubit that carries ``b1``."""
    p1, p2 = a.populations
    excited = p1 + p2
    if excited <= DECAYED:
        return LquResult(0.0, 0.0, 1.0, decayed=True)
    ground = max(0.0, 1.0 - excited)
    m11 = 2.0 * p1 * math.sqrt(ground) / math.sqrt(excited)
    m33 = (excited - 4.0 * p1 * p2) / excited
    q = _clamp(1.0 - max(m11, m33), 0.0, 1.0)
    return LquResult(q, m11, m33)


def sudden_change_times(
    prep: StatePrep, p: ModelParams, tau_max: float, step: float
) -> list[float]:
    """Times in (0, tau_max] where M11 - M33 changes sign, bisected to 1e-9."""
    if tau_max <= 0 or step <= 0:
        raise ValueError("tau_max and step must be positive")

    def gap(tau: float) -> float:
        r = lqu_model(amplitudes(tau, prep, p))
        return r.m11 - r.m33

    def sign(v: float) -> int:
        return 0 if abs(v) <= 1e-13 else (1 if v > 0 else -1)

    n = max(1, math.ceil(tau_max / step))
    grid = [min(tau_max, k * step) for k in range(n + 1)]
    roots = []
    prev_tau, prev_sign = None, 0
    for tau in grid:
        s = sign(gap(tau))
        if s == 0:
            continue
        if prev_sign and s != prev_sign:
            lo, hi, s_lo = prev_tau, tau, prev_sign
            while hi - lo > 1e-9:
                mid = 0.5 * (lo + hi)
                s_mid = sign(gap(mid))
                if s_mid == 0:
                    lo = hi = mid
                    break
                if s_mid == s_lo:
                    lo = mid
                else:
                    hi = mid
            roots.append(0.5 * (lo + hi))
        prev_tau, prev_sign = tau, s
    return roots


def sample_from_amplitudes(a: AmplitudePair) -> CorrelationSample:
    state = state_from_amplitudes(a)
    lqu = lqu_model(a)
    if lqu.decayed:
        return CorrelationSample(a.tau, 0.0, 0.0, 0.0, 0.0, lqu.m11, lqu.m33, decayed=True)
    c = concurrence_x(state)
    return CorrelationSample(
        tau=a.tau,
        concurrence=c,
        bures=bures_entanglement(c),
        tdd=tdd(state),
        lqu=lqu.q,
        m11=lqu.m11,
        m33=lqu.m33,
    )


def evaluate_all(tau: float, prep: StatePrep, p: ModelParams) -> CorrelationSample:
    return sample_from_amplitudes(amplitudes(tau, prep, p))
