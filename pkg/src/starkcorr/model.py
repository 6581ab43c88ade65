"""Exact amplitude evolution of two Stark-shifted atoms in Lorentzian reservoirs.

Everything is in units of the bare decay rate (gamma_0 = 1); time is the
scaled time ``tau = gamma_0 * t``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

SIGMA_ZERO = 1e-8
STATE_TOL = 1e-10


class Scenario(enum.Enum):
    VACUUM = "vacuum"
    ONE_PHOTON = "one-photon"

    @classmethod
    def parse(cls, text: str) -> "Scenario":
        key = text.strip().lower().replace("_", "-")
        aliases = {"vacuum": cls.VACUUM, "onephoton": cls.ONE_PHOTON,
                   "one-photon": cls.ONE_PHOTON, "excited": cls.ONE_PHOTON}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown scenario {text!r}; use 'vacuum' or 'one-photon'") from None


class Regime(enum.Enum):
    MARKOVIAN = "markovian"
    NON_MARKOVIAN = "non-markovian"


class InvalidStateError(ValueError):
    """A density matrix failed its positivity or normalisation checks."""


@dataclass(frozen=True)
class ModelParams:
    """Reservoir width ``lam`` and Stark shifts ``eta``, ``xi`` (units of gamma_0)."""

    lam: float
    eta: float = 0.0
    xi: float = 0.0
    scenario: Scenario = Scenario.VACUUM

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"lam must be finite and > 0, got {self.lam}")
        if not math.isfinite(self.eta):
            raise ValueError(f"eta must be finite, got {self.eta}")
        if not math.isfinite(self.xi):
            raise ValueError(f"xi must be finite, got {self.xi}")


@dataclass(frozen=True)
class StatePrep:
    """Initial atomic state x|0,1> + sqrt(1-x^2)|1,0>."""

    x: float

    def __post_init__(self):
        if not 0.0 <= self.x <= 1.0:
            raise ValueError(f"x must lie in [0, 1], got {self.x}")

    @property
    def weights(self) -> tuple[float, float]:
        return self.x, math.sqrt(max(0.0, 1.0 - self.x * self.x))


@dataclass(frozen=True)
class AmplitudePair:
    b1: complex
    b2: complex
    tau: float

    @property
    def populations(self) -> tuple[float, float]:
        return abs(self.b1) ** 2, abs(self.b2) ** 2


@dataclass(frozen=True)
class XState:
    """Two-qubit X state in the basis |11>, |10>, |01>, |00>."""

    r11: float
    r22: float
    r33: float
    r44: float
    r23: complex = 0j
    r14: complex = 0j

    def __post_init__(self):
        diag = (self.r11, self.r22, self.r33, self.r44)
        if not all(math.isfinite(d) for d in diag) or not all(
            cmath.isfinite(c) for c in (self.r23, self.r14)
        ):
            raise InvalidStateError("non-finite density-matrix entry")
        if abs(sum(diag) - 1.0) > STATE_TOL:
            raise InvalidStateError(f"trace {sum(diag)!r} differs from 1")
        if min(diag) < -STATE_TOL:
            raise InvalidStateError(f"negative population {min(diag)!r}")
        if abs(self.r23) ** 2 > self.r22 * self.r33 + STATE_TOL:
            raise InvalidStateError("|r23|^2 exceeds r22*r33")
        if abs(self.r14) ** 2 > self.r11 * self.r44 + STATE_TOL:
            raise InvalidStateError("|r14|^2 exceeds r11*r44")

    def matrix(self) -> np.ndarray:
        rho = np.diag(np.array([self.r11, self.r22, self.r33, self.r44], dtype=complex))
        rho[1, 2] = self.r23
        rho[2, 1] = self.r23.conjugate()
        rho[0, 3] = self.r14
        rho[3, 0] = self.r14.conjugate()
        return rho


def principal_sqrt(z: complex) -> complex:
    """Principal square root; purely imaginary results get a positive imaginary part."""
    w = cmath.sqrt(complex(z))
    if w.real == 0.0 and w.imag < 0.0:
        w = -w
    return w + 0.0  # normalise -0.0


def sigma_vacuum(p: ModelParams) -> complex:
    z = complex(p.lam, 2.0 * p.eta)
    return principal_sqrt(-4.0 * p.lam + z * z)


def sigma_excited(p: ModelParams) -> complex:
    """Root for the one-photon reservoir, evaluated in its expanded form."""
    lam, eta, xi = p.lam, p.eta, p.xi
    drift = complex(lam, xi + 7.0 * eta)
    return principal_sqrt(
        -12.0 * lam - 4j * complex(lam, 4.0 * eta) * (xi + 3.0 * eta) + drift * drift
    )


def sigma_excited_reduced(p: ModelParams) -> complex:
    """Same root written through the detuning ``eta - xi`` only."""
    z = complex(p.lam, p.eta - p.xi)
    return principal_sqrt(-12.0 * p.lam + z * z)


def _envelope(tau: float, decay: complex, z: complex, sigma: complex) -> complex:
    # exp(-decay*tau/2) * [cosh(sigma*tau/2) + (z/sigma) sinh(sigma*tau/2)],
    # regrouped into two exponentials so large tau cannot overflow cosh.
    if tau == 0.0:
        return 1.0 + 0j
    if abs(sigma) < SIGMA_ZERO:
        return cmath.exp(-decay * tau / 2.0) * (1.0 + z * tau / 2.0)
    r = z / sigma
    grow = cmath.exp((sigma - decay) * tau / 2.0)
    fall = cmath.exp(-(sigma + decay) * tau / 2.0)
    return 0.5 * ((1.0 + r) * grow + (1.0 - r) * fall)


def phi(tau: float, p: ModelParams) -> complex:
    """Vacuum-reservoir amplitude factor phi(tau), phi(0) = 1."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    z = complex(p.lam, 2.0 * p.eta)
    return _envelope(float(tau), z, z, sigma_vacuum(p))


def theta(tau: float, p: ModelParams) -> complex:
    """One-photon-reservoir amplitude factor Theta(tau), Theta(0) = 1."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    decay = complex(p.lam, p.xi + 7.0 * p.eta)
    z = complex(p.lam, p.eta - p.xi)
    return _envelope(float(tau), decay, z, sigma_excited(p))


def amplitude_factor(tau: float, p: ModelParams) -> complex:
    if p.scenario is Scenario.VACUUM:
        return phi(tau, p)
    return theta(tau, p)


def amplitudes(tau: float, prep: StatePrep, p: ModelParams) -> AmplitudePair:
    f = amplitude_factor(tau, p)
    w1, w2 = prep.weights
    return AmplitudePair(b1=w1 * f, b2=w2 * f, tau=float(tau))


def state_from_amplitudes(a: AmplitudePair) -> XState:
    """Reduced atomic state; r11 and r14 vanish for this model."""
    p1, p2 = a.populations
    return XState(
        r11=0.0,
        r22=p1,
        r33=p2,
        r44=1.0 - p1 - p2,
        r23=a.b1 * a.b2.conjugate(),
        r14=0j,
    )


def density_matrix(tau: float, prep: StatePrep, p: ModelParams) -> XState:
    return state_from_amplitudes(amplitudes(tau, prep, p))


def regime(p: ModelParams) -> Regime:
    """Markovian when lam >= 2 (gamma_0 < lam/2); the boundary counts as Markovian."""
    return Regime.MARKOVIAN if p.lam >= 2.0 else Regime.NON_MARKOVIAN
