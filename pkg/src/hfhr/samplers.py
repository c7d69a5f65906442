"""One-step transition kernels and chain simulation.

Four kernels are provided:

``hfhr_strang``
    Symmetric splitting of the accelerated dynamics: an exact
    Ornstein-Uhlenbeck half step, one Euler-Maruyama step of the
    position-dissipation flow, and a second OU half step.  One gradient
    evaluation and 2d + d + 2d normal draws per step, in that order.
``uld_klmc``
    First-order KLMC: the underdamped Langevin update integrated exactly
    over one step with the gradient frozen at the incoming position.
``ula``
    Euler-Maruyama on overdamped Langevin; momentum is carried untouched.
``hfhr_em``
    Plain Euler-Maruyama on the accelerated dynamics (the forward-Euler
    mean process analyzed in the spectral module).

All kernels are pure functions of (state, rng) and broadcast over leading
axes of the state arrays, so a batch of chains steps as one call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .potentials import PotentialModel
from .rng import RandomSource

KINDS = ("hfhr_strang", "uld_klmc", "ula", "hfhr_em")


class DivergenceError(RuntimeError):
    """Raised when a chain leaves the finite floats."""

    def __init__(self, step: int):
        super().__init__(f"non-finite state at step {step}")
        self.step = step


@dataclass(frozen=True)
class ChainState:
    """Position/momentum pair, shapes (..., d) each."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        if np.shape(self.q) != np.shape(self.p):
            raise ValueError("q and p must have identical shapes")


@dataclass(frozen=True)
class SamplerConfig:
    kind: str
    step: float
    gamma: float = 1.0
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sampler kind '{self.kind}'; valid: {KINDS}")
        if self.step <= 0:
            raise ValueError("step must be > 0")
        if self.kind != "ula" and self.gamma <= 0:
            raise ValueError("gamma must be > 0")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")


def phi_covariance(gamma: float, t: float) -> np.ndarray:
    """Per-coordinate 2x2 covariance of the exact OU flow over duration t.

    Returns [[v_qq, v_qp], [v_qp, v_pp]] with
        v_pp = 1 - e^{-2 gamma t},
        v_qp = (1 - e^{-gamma t})^2 / gamma,
        v_qq = (2 gamma t + 4 e^{-gamma t} - e^{-2 gamma t} - 3) / gamma^2.
    """
    if gamma <= 0 or t <= 0:
        raise ValueError("gamma and t must be > 0")
    x = gamma * t
    if x >= 700.0:
        raise ValueError("gamma * t too large for stable exponentials")
    u = math.expm1(-x)  # e^{-x} - 1, no cancellation
    w = math.expm1(-2.0 * x)
    v_pp = -w
    v_qp = u * u / gamma
    if x < 1e-4:
        # the closed form for v_qq cancels to O(x^3); use its expansion
        v_qq = (x**3) * (2.0 / 3.0 - 0.5 * x + (7.0 / 30.0) * x * x) / gamma**2
    else:
        v_qq = (2.0 * x + 4.0 * u - w) / gamma**2
    return np.array([[v_qq, v_qp], [v_qp, v_pp]])


@dataclass(frozen=True)
class PhiFlowKernel:
    """Exact OU substep: drift coefficients plus per-coordinate noise factor.

    ``chol`` is the lower-triangular 2x2 M with M M^T equal to
    phi_covariance(gamma, t) per coordinate.
    """

    gamma: float
    t: float
    drift: float  # (1 - e^{-gamma t}) / gamma
    decay: float  # e^{-gamma t}
    cov: np.ndarray
    chol: np.ndarray


def phi_kernel(gamma: float, t: float) -> PhiFlowKernel:
    cov = phi_covariance(gamma, t)
    m11 = math.sqrt(cov[0, 0])
    m21 = cov[0, 1] / m11
    m22 = math.sqrt(max(cov[1, 1] - m21 * m21, 0.0))
    chol = np.array([[m11, 0.0], [m21, m22]])
    return PhiFlowKernel(
        gamma=gamma,
        t=t,
        drift=-math.expm1(-gamma * t) / gamma,
        decay=math.exp(-gamma * t),
        cov=cov,
        chol=chol,
    )


def phi_half_step(state: ChainState, kernel: PhiFlowKernel, rng) -> ChainState:
    """Exact-in-distribution OU substep; draws 2 normals per coordinate.

    The noise pairs (q_i, p_i) per coordinate i through the 2x2 factor.
    """
    z = rng.normals((2,) + np.shape(state.q))
    m = kernel.chol
    q = state.q + kernel.drift * state.p + m[0, 0] * z[0]
    p = kernel.decay * state.p + m[1, 0] * z[0] + m[1, 1] * z[1]
    return ChainState(q=q, p=p)


def psi_tilde_step(
    state: ChainState, model: PotentialModel, alpha: float, h: float, rng
) -> ChainState:
    """One Euler-Maruyama step of the position-dissipation flow.

    The gradient is evaluated once, at the incoming position.  With
    alpha = 0 the position update is exactly the identity.
    """
    if h <= 0:
        raise ValueError("h must be > 0")
    g = model.grad(state.q)
    eta = rng.normals(np.shape(state.q))
    q = state.q - alpha * h * g + math.sqrt(2.0 * alpha * h) * eta
    p = state.p - h * g
    return ChainState(q=q, p=p)


def hfhr_step(state: ChainState, model: PotentialModel, config: SamplerConfig, rng) -> ChainState:
    if config.kind != "hfhr_strang":
        raise ValueError("hfhr_step requires kind 'hfhr_strang'")
    kernel = phi_kernel(config.gamma, 0.5 * config.step)
    s = phi_half_step(state, kernel, rng)
    s = psi_tilde_step(s, model, config.alpha, config.step, rng)
    return phi_half_step(s, kernel, rng)


def uld_step(state: ChainState, model: PotentialModel, config: SamplerConfig, rng) -> ChainState:
    """First-order KLMC: exact OU transition with the gradient frozen at q0."""
    if config.kind != "uld_klmc":
        raise ValueError("uld_step requires kind 'uld_klmc'")
    h = config.step
    kernel = phi_kernel(config.gamma, h)
    c1 = kernel.drift
    c2 = (h - c1) / config.gamma
    g = model.grad(state.q)
    z = rng.normals((2,) + np.shape(state.q))
    m = kernel.chol
    q = state.q + c1 * state.p - c2 * g + m[0, 0] * z[0]
    p = kernel.decay * state.p - c1 * g + m[1, 0] * z[0] + m[1, 1] * z[1]
    return ChainState(q=q, p=p)


def ula_step(state: ChainState, model: PotentialModel, config: SamplerConfig, rng) -> ChainState:
    if config.kind != "ula":
        raise ValueError("ula_step requires kind 'ula'")
    h = config.step
    g = model.grad(state.q)
    eta = rng.normals(np.shape(state.q))
    q = state.q - h * g + math.sqrt(2.0 * h) * eta
    return ChainState(q=q, p=state.p)


def em_hfhr_step(state: ChainState, model: PotentialModel, config: SamplerConfig, rng) -> ChainState:
    if config.kind != "hfhr_em":
        raise ValueError("em_hfhr_step requires kind 'hfhr_em'")
    h, alpha, gamma = config.step, config.alpha, config.gamma
    g = model.grad(state.q)
    eta = rng.normals(np.shape(state.q))
    xi = rng.normals(np.shape(state.q))
    q = state.q + (state.p - alpha * g) * h + math.sqrt(2.0 * alpha * h) * eta
    p = state.p - (gamma * state.p + g) * h + math.sqrt(2.0 * gamma * h) * xi
    return ChainState(q=q, p=p)


def make_stepper(
    model: PotentialModel, config: SamplerConfig
) -> Callable[[ChainState, object], ChainState]:
    """Bind model and config into a (state, rng) -> state closure.

    Substep kernels are precomputed once, which matters in long loops.
    """
    if config.kind == "hfhr_strang":
        kernel = phi_kernel(config.gamma, 0.5 * config.step)
        alpha, h = config.alpha, config.step
        noise_scale = math.sqrt(2.0 * alpha * h)

        def step(state, rng):
            s = phi_half_step(state, kernel, rng)
            g = model.grad(s.q)
            eta = rng.normals(np.shape(s.q))
            s = ChainState(
                q=s.q - alpha * h * g + noise_scale * eta, p=s.p - h * g
            )
            return phi_half_step(s, kernel, rng)

        return step
    if config.kind == "uld_klmc":
        return lambda state, rng: uld_step(state, model, config, rng)
    if config.kind == "ula":
        return lambda state, rng: ula_step(state, model, config, rng)
    return lambda state, rng: em_hfhr_step(state, model, config, rng)


def simulate_chain(
    init: ChainState,
    model: PotentialModel,
    config: SamplerConfig,
    steps: int,
    rng,
    observer: Optional[Callable[[int, ChainState], None]] = None,
) -> ChainState:
    """Apply the configured kernel ``steps`` times.

    The observer is invoked after each step with (index, state).  Any
    non-finite coordinate aborts with a DivergenceError naming the step;
    stability-limit experiments probe blow-up on purpose.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if np.shape(init.q)[-1] != model.dim:
        raise ValueError("state dimension does not match the potential")
    stepper = make_stepper(model, config)
    state = init
    # blow-up is detected explicitly, so numpy's overflow chatter is noise
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, steps + 1):
            state = stepper(state, rng)
            if not (np.all(np.isfinite(state.q)) and np.all(np.isfinite(state.p))):
                raise DivergenceError(k)
            if observer is not None:
                observer(k, state)
    return state


__all__ = [
    "KINDS",
    "ChainState",
    "SamplerConfig",
    "PhiFlowKernel",
    "DivergenceError",
    "RandomSource",
    "phi_covariance",
    "phi_kernel",
    "phi_half_step",
    "psi_tilde_step",
    "hfhr_step",
    "uld_step",
    "ula_step",
    "em_hfhr_step",
    "make_stepper",
    "simulate_chain",
]
