"""Sampling laws for mean-power detection statistics.

Everything here lives on the scale of the power estimate (1/N)Σ|x[k]|² of N
complex circular Gaussian samples.  Four law families cover all cases that
arise for the ON/OFF detectors:

* :class:`ScaledGamma` — the estimate under pure Gaussian input.
* :class:`NoncentralChi2C` — Gaussian input plus a deterministic component
  of energy E (sinusoid/chirp), a scaled non-central χ².
* :class:`FLaw` — a scaled, possibly doubly non-central F: the ratio of two
  independent power estimates.
* :class:`GammaDifference` — the difference of two independent power
  estimates, evaluated by characteristic-function inversion.

Conventions:  a complex sample CN(0, σ²) contributes two real Gaussian
degrees of freedom of variance σ²/2 each, so N complex samples give a real
χ² with 2N degrees of freedom, and a deterministic component of total energy
E = Σ|μ[k]|² gives non-centrality λ = 2E/σ².  Classes expose the complex
sample count N; :class:`FLaw` alone speaks real degrees of freedom (2N),
matching how F tables are usually written.

All evaluation functions are pure; sampling takes an explicit
`numpy.random.Generator` (or a seed), never global state.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np
from scipy import special
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

__all__ = [
    "ComputationError",
    "FLaw",
    "GammaDifference",
    "NoncentralChi2C",
    "ScaledGamma",
    "f_law_cdf",
    "gamma_diff_pdf_cdf",
    "law_quantile",
    "law_sample",
    "log_gamma",
    "nc_chi2_cdf",
    "reg_inc_beta",
    "reg_inc_gamma_lower",
]

# ---------------------------------------------------------------------------
# module tolerances (defaults; every evaluation call accepts an override)
# ---------------------------------------------------------------------------

#: Poisson tail mass allowed to be dropped in the non-central χ² series.
POISSON_TAIL_CHI2 = 1e-12
#: Combined Poisson tail mass allowed to be dropped in the double F series.
POISSON_TAIL_F = 1e-10
#: |∫pdf − 1| required of the characteristic-function inversion grid.
CF_NORM_TOL = 1e-6
#: |cdf(quantile(p)) − p| required of quantile inversion.
QUANTILE_TOL = 1e-10

_MAX_WINDOW_WIDEN = 6
_EVAL_CHUNK_FLOPS = 4_000_000  # bounds temporary arrays in the series evaluators


class ComputationError(RuntimeError):
    """A series or grid failed to reach its error target.

    The bound that was actually achieved is kept in :attr:`achieved` so
    callers can report how far off the computation ended up.
    """

    def __init__(self, message: str, achieved: float | None = None):
        super().__init__(message)
        self.achieved = achieved


# ---------------------------------------------------------------------------
# special-function core
# ---------------------------------------------------------------------------


def _as_float_or_array(out, like):
    if np.ndim(like) == 0:
        return float(out)
    return out


def log_gamma(x):
    """Natural log of the Gamma function for x > 0.

    Accepts a scalar or array; relative error stays below 1e-12 across
    [1e-3, 1e6].
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0) or not np.all(np.isfinite(arr)):
        raise ValueError("log_gamma requires finite x > 0")
    return _as_float_or_array(special.gammaln(arr), x)


def reg_inc_beta(x, a, b):
    """Regularized incomplete beta I_x(a, b) for x in [0, 1], a > 0, b > 0."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(xa > 1) or not np.all(np.isfinite(xa)):
        raise ValueError("reg_inc_beta requires 0 <= x <= 1")
    if not (np.all(np.asarray(a) > 0) and np.all(np.asarray(b) > 0)):
        raise ValueError("reg_inc_beta requires a > 0 and b > 0")
    return _as_float_or_array(special.betainc(a, b, xa), x)


def reg_inc_gamma_lower(s, x):
    """Regularized lower incomplete gamma P(s, x) for s > 0, x >= 0."""
    if not np.all(np.asarray(s) > 0):
        raise ValueError("reg_inc_gamma_lower requires s > 0")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or not np.all(np.isfinite(xa)):
        raise ValueError("reg_inc_gamma_lower requires finite x >= 0")
    return _as_float_or_array(special.gammainc(s, xa), x)


# ---------------------------------------------------------------------------
# Poisson mixture weights
# ---------------------------------------------------------------------------


def _poisson_weights(mu: float, tail: float):
    """Indices and weights of a Poisson(mu) window holding all but < tail mass.

    The window is centred on mu with half-width 8·√mu + 25, which leaves far
    less than 1e-12 outside for any mu; the mass check below is still
    enforced, widening geometrically if it ever fails.
    """
    if mu <= 0:
        return np.arange(1), np.ones(1)
    miss = np.inf
    for widen in range(_MAX_WINDOW_WIDEN):
        half = int(np.ceil(8.0 * (2.0**widen) * np.sqrt(mu) + 25))
        lo = max(int(np.floor(mu)) - half, 0)
        hi = int(np.ceil(mu)) + half
        j = np.arange(lo, hi + 1)
        w = np.exp(-mu + j * np.log(mu) - special.gammaln(j + 1.0))
        miss = 1.0 - w.sum()
        if miss < tail:
            return j, w
    raise ComputationError(
        f"Poisson window around mu={mu:g} left {miss:.3e} mass, target {tail:.3e}",
        achieved=miss,
    )


# ---------------------------------------------------------------------------
# mixture evaluators
#
# Both series below avoid calling an incomplete beta/gamma per mixture term.
# Only the corner term is evaluated by scipy; neighbouring terms follow from
# the exact one-step recurrences
#
#   P(a+1, x) = P(a, x) − x^a e^{−x} / Γ(a+1)
#   I_u(a+1, b) = I_u(a, b) − u^a (1−u)^b Γ(a+b) / (Γ(a+1) Γ(b))
#   I_u(a, b+1) = I_u(a, b) + u^a (1−u)^b Γ(a+b) / (Γ(a) Γ(b+1))
#
# whose correction terms themselves march by scalar ratios, so a whole
# rectangular window costs one scipy call plus cumulative products.
# ---------------------------------------------------------------------------


def _gamma_mixture_cdf(x: np.ndarray, a0: float, wj: np.ndarray) -> np.ndarray:
    """Σ_j wj[j] · P(a0 + j, x) on a grid of x ≥ 0."""
    if wj.size == 1:
        return wj[0] * special.gammainc(a0, x)
    out = np.empty_like(x)
    chunk = max(1, _EVAL_CHUNK_FLOPS // wj.size)
    offsets = np.arange(wj.size, dtype=float)
    for s in range(0, x.size, chunk):
        xs = x[s : s + chunk]
        with np.errstate(divide="ignore", invalid="ignore"):
            d0 = np.exp(a0 * np.log(xs) - xs - special.gammaln(a0 + 1.0))
        d0 = np.where(xs > 0, d0, 0.0)
        # d_j = x^{a0+j} e^{-x} / Γ(a0+j+1), marching by x / (a0+j+1)
        ratios = xs[None, :] / (a0 + offsets[1:, None] )
        np.cumprod(ratios, axis=0, out=ratios)
        dj = np.empty((wj.size, xs.size))
        dj[0] = d0
        dj[1:] = d0[None, :] * ratios
        pj = special.gammainc(a0, xs)[None, :] - np.concatenate(
            [np.zeros((1, xs.size)), np.cumsum(dj[:-1], axis=0)], axis=0
        )
        np.clip(pj, 0.0, 1.0, out=pj)
        out[s : s + chunk] = wj @ pj
    return out


def _beta_mixture_cdf(
    u: np.ndarray, a0: float, b0: float, wj: np.ndarray, wk: np.ndarray
) -> np.ndarray:
    """Σ_{j,k} wj[j] wk[k] · I_u(a0 + j, b0 + k) on a grid of u in [0, 1)."""
    if wj.size == 1 and wk.size == 1:
        return wj[0] * wk[0] * special.betainc(a0, b0, u)
    a = a0 + np.arange(wj.size, dtype=float)
    b = b0 + np.arange(wk.size, dtype=float)
    W = wk.sum()
    # R[m] = Σ_{k > m} wk[k]; swapping the order of the k-sum and the
    # telescoping I-recurrence turns the inner sum into Σ_m R[m]·g(a_j, b_m).
    R = np.concatenate([np.cumsum(wk[::-1])[::-1][1:], [0.0]])
    out = np.empty_like(u)
    chunk = max(1, _EVAL_CHUNK_FLOPS // max(wk.size, wj.size))
    for s in range(0, u.size, chunk):
        us = u[s : s + chunk]
        with np.errstate(divide="ignore"):
            lu = np.log(us)
            l1u = np.log1p(-us)
        lcorner = a[0] * lu + b[0] * l1u + special.gammaln(a[0] + b[0])
        corner = special.betainc(a[0], b[0], us)
        with np.errstate(invalid="ignore"):
            f0 = np.exp(lcorner - special.gammaln(a[0] + 1.0) - special.gammaln(b[0]))
            g0 = np.exp(lcorner - special.gammaln(a[0]) - special.gammaln(b[0] + 1.0))
        f0 = np.where(us > 0, f0, 0.0)
        g0 = np.where(us > 0, g0, 0.0)
        # march I(a_j, b0) down the j axis
        if wj.size > 1:
            rf = us[None, :] * ((a[:-1, None] + b[0]) / a[1:, None])
            np.cumprod(rf, axis=0, out=rf)
            fj = np.concatenate([f0[None, :], f0[None, :] * rf], axis=0)
            Ij = corner[None, :] - np.concatenate(
                [np.zeros((1, us.size)), np.cumsum(fj[:-1], axis=0)], axis=0
            )
            np.clip(Ij, 0.0, 1.0, out=Ij)
            rg = us[None, :] * ((a[:-1, None] + b[0]) / a[:-1, None])
            np.cumprod(rg, axis=0, out=rg)
            gj0 = np.concatenate([g0[None, :], g0[None, :] * rg], axis=0)
        else:
            Ij = corner[None, :]
            gj0 = g0[None, :]
        acc = W * (wj @ Ij)
        if wk.size > 1:
            one_minus_u = 1.0 - us
            for jj in range(wj.size):
                rk = one_minus_u[None, :] * ((a[jj] + b[:-1, None]) / b[1:, None])
                np.cumprod(rk, axis=0, out=rk)
                gm = np.concatenate([gj0[jj][None, :], gj0[jj][None, :] * rk], axis=0)
                acc += wj[jj] * (R @ gm)
        out[s : s + chunk] = acc
    return np.clip(out, 0.0, 1.0)


def _beta_mixture_pdf(
    u: np.ndarray, a0: float, b0: float, wj: np.ndarray, wk: np.ndarray
) -> np.ndarray:
    """Σ_{j,k} wj[j] wk[k] · Beta pdf(u; a0 + j, b0 + k) on a grid of u in (0, 1)."""
    a = a0 + np.arange(wj.size, dtype=float)
    b = b0 + np.arange(wk.size, dtype=float)
    out = np.empty_like(u)
    chunk = max(1, _EVAL_CHUNK_FLOPS // max(wk.size, wj.size))
    for s in range(0, u.size, chunk):
        us = u[s : s + chunk]
        with np.errstate(divide="ignore"):
            lu = np.log(us)
            l1u = np.log1p(-us)
        lcorner = (
            (a[0] - 1.0) * lu
            + (b[0] - 1.0) * l1u
            + special.gammaln(a[0] + b[0])
            - special.gammaln(a[0])
            - special.gammaln(b[0])
        )
        h0 = np.exp(lcorner)
        # h(a+1,b)/h(a,b) = u(a+b)/a along j
        if wj.size > 1:
            rj = us[None, :] * ((a[:-1, None] + b[0]) / a[:-1, None])
            np.cumprod(rj, axis=0, out=rj)
            hj0 = np.concatenate([h0[None, :], h0[None, :] * rj], axis=0)
        else:
            hj0 = h0[None, :]
        acc = np.zeros_like(us)
        one_minus_u = 1.0 - us
        for jj in range(wj.size):
            if wk.size > 1:
                rk = one_minus_u[None, :] * ((a[jj] + b[:-1, None]) / b[:-1, None])
                np.cumprod(rk, axis=0, out=rk)
                hm = np.concatenate([hj0[jj][None, :], hj0[jj][None, :] * rk], axis=0)
                acc += wj[jj] * (wk @ hm)
            else:
                acc += wj[jj] * wk[0] * hj0[jj]
        out[s : s + chunk] = acc
    return np.clip(out, 0.0, None)


# ---------------------------------------------------------------------------
# law classes
# ---------------------------------------------------------------------------


def _as_generator(rng_state) -> np.random.Generator:
    if isinstance(rng_state, np.random.Generator):
        return rng_state
    return np.random.default_rng(rng_state)


def _eval_1d(fn, t):
    """Apply a 1-d array evaluator to scalar or array input, preserving kind."""
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    if not np.all(np.isfinite(arr)):
        raise ValueError("evaluation points must be finite")
    out = fn(arr.ravel()).reshape(arr.shape)
    if np.ndim(t) == 0:
        return float(out[0])
    return out


@dataclass(frozen=True)
class ScaledGamma:
    """Law of the mean-power estimate of N complex Gaussian samples.

    The estimate (1/N)Σ|x[k]|² of N i.i.d. CN(0, σ²) samples is
    ScaledGamma(shape=N, scale=σ²/N): mean = shape·scale = σ² and
    variance = shape·scale² = σ⁴/N.
    """

    shape: float
    scale: float

    def __post_init__(self):
        if not (np.isfinite(self.shape) and self.shape > 0):
            raise ValueError("shape must be a positive real")
        if not (np.isfinite(self.scale) and self.scale > 0):
            raise ValueError("scale must be a positive real")

    support_lo = 0.0

    @property
    def mean(self) -> float:
        return self.shape * self.scale

    @property
    def variance(self) -> float:
        return self.shape * self.scale**2

    def _bracket_seeds(self):
        sd = np.sqrt(self.variance)
        return max(self.mean - 4.0 * sd, 0.0), self.mean + 4.0 * sd

    def pdf(self, t):
        def eval_(x):
            out = np.zeros_like(x)
            pos = x > 0
            xs = x[pos] / self.scale
            out[pos] = np.exp(
                (self.shape - 1.0) * np.log(xs)
                - xs
                - special.gammaln(self.shape)
            ) / self.scale
            return out

        return _eval_1d(eval_, t)

    def cdf(self, t):
        return _eval_1d(
            lambda x: special.gammainc(self.shape, np.maximum(x, 0.0) / self.scale), t
        )

    def quantile(self, p, tol: float = QUANTILE_TOL):
        return law_quantile(self, p, tol=tol)

    def sample(self, rng_state, count: int) -> np.ndarray:
        return _as_generator(rng_state).gamma(self.shape, self.scale, int(count))


@dataclass(frozen=True)
class NoncentralChi2C:
    """Mean-power estimate of N complex Gaussian samples plus a deterministic part.

    With samples x[k] = μ[k] + n[k], n[k] ~ CN(0, power) i.i.d. and total
    deterministic energy E = Σ|μ[k]|², the estimate (1/N)Σ|x[k]|² equals
    (power/(2N))·χ²_{2N}(λ) with λ = 2E/power.  Mean = power + E/N; the
    un-normalized sum therefore has mean N·power + E.
    """

    shape: float
    power: float
    noncentrality_energy: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.shape) and self.shape > 0):
            raise ValueError("shape must be a positive real")
        if not (np.isfinite(self.power) and self.power > 0):
            raise ValueError("power must be a positive real")
        if not (
            np.isfinite(self.noncentrality_energy) and self.noncentrality_energy >= 0
        ):
            raise ValueError("noncentrality_energy must be non-negative")

    support_lo = 0.0

    @property
    def noncentrality(self) -> float:
        """λ of the underlying real χ²_{2N}."""
        return 2.0 * self.noncentrality_energy / self.power

    @property
    def mean(self) -> float:
        return self.power + self.noncentrality_energy / self.shape

    @property
    def variance(self) -> float:
        return (
            self.power**2 / self.shape
            + 2.0 * self.noncentrality_energy * self.power / self.shape**2
        )

    def _bracket_seeds(self):
        sd = np.sqrt(self.variance)
        return max(self.mean - 4.0 * sd, 0.0), self.mean + 4.0 * sd

    def as_scaled_gamma(self) -> ScaledGamma:
        if self.noncentrality_energy != 0:
            raise ValueError("only the central case reduces to ScaledGamma")
        return ScaledGamma(self.shape, self.power / self.shape)

    def cdf(self, t, tail: float = POISSON_TAIL_CHI2):
        wj_idx, wj = _poisson_weights(self.noncentrality / 2.0, tail)

        def eval_(x):
            xs = np.maximum(x, 0.0) * self.shape / self.power
            return np.clip(_gamma_mixture_cdf(xs, self.shape + wj_idx[0], wj), 0.0, 1.0)

        return _eval_1d(eval_, t)

    def pdf(self, t, tail: float = POISSON_TAIL_CHI2):
        wj_idx, wj = _poisson_weights(self.noncentrality / 2.0, tail)
        shapes = self.shape + wj_idx.astype(float)
        theta = self.power / self.shape

        def eval_(x):
            out = np.zeros_like(x)
            pos = x > 0
            xs = x[pos] / theta
            # mixture of Gamma(shape + j, θ) densities, evaluated in log space
            terms = np.exp(
                (shapes[:, None] - 1.0) * np.log(xs)[None, :]
                - xs[None, :]
                - special.gammaln(shapes)[:, None]
            )
            out[pos] = (wj @ terms) / theta
            return out

        return _eval_1d(eval_, t)

    def quantile(self, p, tol: float = QUANTILE_TOL):
        return law_quantile(self, p, tol=tol)

    def sample(self, rng_state, count: int) -> np.ndarray:
        rng = _as_generator(rng_state)
        n = int(count)
        if self.noncentrality_energy == 0:
            return rng.gamma(self.shape, self.power / self.shape, n)
        c = self.power / (2.0 * self.shape)
        return c * rng.noncentral_chisquare(2.0 * self.shape, self.noncentrality, n)


@dataclass(frozen=True)
class FLaw:
    """Scaled, possibly doubly non-central F law.

    The variate is scale·(X₁/ν₁)/(X₂/ν₂) with independent Xᵢ ~ χ²_{νᵢ}(λᵢ).
    Degrees of freedom here are the real ones: a ratio of two mean-power
    estimates over N complex samples each has dof_num = dof_den = 2N.
    The cdf satisfies cdf(scale·t) = unit-scale cdf(t).
    """

    dof_num: float
    dof_den: float
    scale: float = 1.0
    lambda_num: float = 0.0
    lambda_den: float = 0.0

    def __post_init__(self):
        for name in ("dof_num", "dof_den", "scale"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive real")
        for name in ("lambda_num", "lambda_den"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be non-negative")

    support_lo = 0.0

    def _windows(self, tail: float):
        # Half the combined budget per side keeps the total dropped mass
        # (m₁ + m₂ − m₁m₂) under `tail`.
        ij, wj = _poisson_weights(self.lambda_num / 2.0, tail / 2.0)
        ik, wk = _poisson_weights(self.lambda_den / 2.0, tail / 2.0)
        return ij, wj, ik, wk

    def cdf(self, t, tail: float = POISSON_TAIL_F):
        ij, wj, ik, wk = self._windows(tail)
        a0 = self.dof_num / 2.0 + ij[0]
        b0 = self.dof_den / 2.0 + ik[0]

        def eval_(x):
            xs = np.maximum(x, 0.0) / self.scale
            u = self.dof_num * xs / (self.dof_num * xs + self.dof_den)
            return _beta_mixture_cdf(u, a0, b0, wj, wk)

        return _eval_1d(eval_, t)

    def pdf(self, t, tail: float = POISSON_TAIL_F):
        ij, wj, ik, wk = self._windows(tail)
        a0 = self.dof_num / 2.0 + ij[0]
        b0 = self.dof_den / 2.0 + ik[0]
        r = self.dof_num / self.dof_den

        def eval_(x):
            out = np.zeros_like(x)
            pos = x > 0
            xs = x[pos] / self.scale
            u = r * xs / (r * xs + 1.0)
            dens = _beta_mixture_pdf(u, a0, b0, wj, wk)
            # du/dx = r / (r x + 1)², then the outer 1/scale
            out[pos] = dens * r / (r * xs + 1.0) ** 2 / self.scale
            return out

        return _eval_1d(eval_, t)

    def quantile(self, p, tol: float = QUANTILE_TOL):
        return law_quantile(self, p, tol=tol)

    def sample(self, rng_state, count: int) -> np.ndarray:
        rng = _as_generator(rng_state)
        n = int(count)
        if self.lambda_num > 0:
            x1 = rng.noncentral_chisquare(self.dof_num, self.lambda_num, n)
        else:
            x1 = rng.chisquare(self.dof_num, n)
        if self.lambda_den > 0:
            x2 = rng.noncentral_chisquare(self.dof_den, self.lambda_den, n)
        else:
            x2 = rng.chisquare(self.dof_den, n)
        return self.scale * (x1 / self.dof_num) / (x2 / self.dof_den)

    def _bracket_seeds(self):
        # ratio-of-means centre with a log-symmetric spread; seeds only,
        # refined by expansion in law_quantile
        centre = (
            self.scale
            * (1.0 + self.lambda_num / self.dof_num)
            / (1.0 + self.lambda_den / self.dof_den)
        )
        rel = np.sqrt(
            2.0 * (self.dof_num + 2.0 * self.lambda_num) / (self.dof_num + self.lambda_num) ** 2
            + 2.0 * (self.dof_den + 2.0 * self.lambda_den) / (self.dof_den + self.lambda_den) ** 2
        )
        return centre * np.exp(-4.0 * rel), centre * np.exp(4.0 * rel)


LawSide = Union[ScaledGamma, NoncentralChi2C]


def _side_params(side: LawSide):
    """(N, σ², E) of either admissible component law."""
    if isinstance(side, NoncentralChi2C):
        return side.shape, side.power, side.noncentrality_energy
    if isinstance(side, ScaledGamma):
        return side.shape, side.shape * side.scale, 0.0
    raise ValueError("GammaDifference sides must be ScaledGamma or NoncentralChi2C")


def _phi_mean_power(omega: np.ndarray, n: float, sigma2: float, energy: float):
    """Characteristic function of the mean-power estimate (N, σ², E)."""
    c = sigma2 / (2.0 * n)
    lam = 2.0 * energy / sigma2
    z = 1.0 - 2.0j * c * omega
    return np.exp(1j * c * lam * omega / z) * z ** (-n)


@dataclass(frozen=True)
class GammaDifference:
    """Law of pos − neg for independent mean-power estimates.

    No closed form covers the non-central cases uniformly, so the pdf is
    recovered by FFT inversion of the product characteristic function
    φ_pos(ω)·conj(φ_neg(ω)) on a grid wide enough that the wrapped tail mass
    is negligible; the cdf integrates that grid and both are interpolated
    monotonically.  The grid is refined until |∫pdf − 1| meets its target.
    """

    pos: LawSide
    neg: LawSide

    def __post_init__(self):
        _side_params(self.pos)
        _side_params(self.neg)

    support_lo = -np.inf

    @property
    def mean(self) -> float:
        return self.pos.mean - self.neg.mean

    @property
    def variance(self) -> float:
        return self.pos.variance + self.neg.variance

    def _bracket_seeds(self):
        sd = np.sqrt(self.variance)
        return self.mean - 4.0 * sd, self.mean + 4.0 * sd

    def _invert(self, m: int, kspan: float):
        np_, s2p, ep = _side_params(self.pos)
        nn_, s2n, en = _side_params(self.neg)
        sp = np.sqrt(self.pos.variance)
        sn = np.sqrt(self.neg.variance)
        t_lo = (self.pos.mean - kspan * sp) - (self.neg.mean + kspan * sn)
        t_hi = (self.pos.mean + kspan * sp) - (self.neg.mean - kspan * sn)
        dt = (t_hi - t_lo) / m
        dw = 2.0 * np.pi / (m * dt)
        idx = np.arange(m)
        w = (idx - m / 2) * dw
        phi = _phi_mean_power(w, np_, s2p, ep) * np.conj(
            _phi_mean_power(w, nn_, s2n, en)
        )
        psi = phi * np.exp(-1j * w * t_lo)
        sign = np.where(idx % 2 == 0, 1.0, -1.0)  # e^{iπ idx}, recentres ω = 0
        pdf = (dw / (2.0 * np.pi)) * np.real(sign * np.fft.fft(psi))
        return t_lo + idx * dt, pdf

    @cached_property
    def _grid(self):
        achieved = np.inf
        for m, kspan in ((1 << 15, 20.0), (1 << 16, 28.0), (1 << 17, 40.0)):
            t, pdf = self._invert(m, kspan)
            pdf = np.clip(pdf, 0.0, None)
            dt = t[1] - t[0]
            norm = float(np.sum(0.5 * (pdf[1:] + pdf[:-1])) * dt)
            achieved = abs(norm - 1.0)
            if achieved <= CF_NORM_TOL:
                cdf = np.concatenate(
                    [[0.0], np.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * dt)]
                )
                cdf /= cdf[-1]
                return {
                    "t": t,
                    "pdf": pdf / norm,
                    "cdf": cdf,
                    "pdf_ip": PchipInterpolator(t, pdf / norm, extrapolate=False),
                    "cdf_ip": PchipInterpolator(t, cdf, extrapolate=False),
                    "norm_err": achieved,
                }
        raise ComputationError(
            f"characteristic-function grid refinement exhausted; |∫pdf−1| = {achieved:.3e}",
            achieved=achieved,
        )

    @property
    def norm_error(self) -> float:
        return self._grid["norm_err"]

    def pdf(self, t, norm_tol: float = CF_NORM_TOL):
        g = self._grid
        self._check_norm(norm_tol)

        def eval_(x):
            out = g["pdf_ip"](x)
            return np.where(np.isnan(out), 0.0, np.clip(out, 0.0, None))

        return _eval_1d(eval_, t)

    def cdf(self, t, norm_tol: float = CF_NORM_TOL):
        g = self._grid
        self._check_norm(norm_tol)
        t0, t1 = g["t"][0], g["t"][-1]

        def eval_(x):
            out = g["cdf_ip"](x)
            out = np.where(x <= t0, 0.0, np.where(x >= t1, 1.0, out))
            return np.clip(out, 0.0, 1.0)

        return _eval_1d(eval_, t)

    def _check_norm(self, norm_tol: float):
        if self._grid["norm_err"] > norm_tol:
            raise ComputationError(
                f"pdf normalization error {self._grid['norm_err']:.3e} exceeds {norm_tol:.1e}",
                achieved=self._grid["norm_err"],
            )

    def quantile(self, p, tol: float = QUANTILE_TOL):
        return law_quantile(self, p, tol=tol)

    def sample(self, rng_state, count: int) -> np.ndarray:
        rng = _as_generator(rng_state)
        return self.pos.sample(rng, count) - self.neg.sample(rng, count)


Law = Union[ScaledGamma, NoncentralChi2C, FLaw, GammaDifference]


# ---------------------------------------------------------------------------
# operations on any law
# ---------------------------------------------------------------------------


def nc_chi2_cdf(law: NoncentralChi2C, t, tail: float = POISSON_TAIL_CHI2):
    """CDF of the mean-power estimate with a deterministic component.

    Evaluated as the Poisson(λ/2)-weighted series of central Gamma cdfs,
    truncated once the remaining Poisson mass drops below `tail`.
    """
    if not isinstance(law, NoncentralChi2C):
        raise TypeError("nc_chi2_cdf expects a NoncentralChi2C law")
    return law.cdf(t, tail=tail)


def f_law_cdf(law: FLaw, t, tail: float = POISSON_TAIL_F):
    """CDF of a scaled (doubly non-central) F law.

    Evaluated as the double Poisson mixture
    P(F ≤ x) = Σ_j Σ_k w_j(λ₁/2) w_k(λ₂/2) I_u(ν₁/2+j, ν₂/2+k) with
    u = ν₁x/(ν₁x+ν₂), truncated once the combined dropped mass is < `tail`.
    """
    if not isinstance(law, FLaw):
        raise TypeError("f_law_cdf expects an FLaw")
    return law.cdf(t, tail=tail)


def gamma_diff_pdf_cdf(law: GammaDifference, t, norm_tol: float = CF_NORM_TOL):
    """(pdf, cdf) of pos − neg via characteristic-function inversion."""
    if not isinstance(law, GammaDifference):
        raise TypeError("gamma_diff_pdf_cdf expects a GammaDifference law")
    return law.pdf(t, norm_tol=norm_tol), law.cdf(t, norm_tol=norm_tol)


def law_quantile(law, p, tol: float = QUANTILE_TOL):
    """Value t with |cdf(t) − p| ≤ tol, by bracket expansion plus Brent root finding."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError("quantile order must lie strictly inside (0, 1)")
    lo_support = getattr(law, "support_lo", -np.inf)
    lo, hi = law._bracket_seeds()
    lo = max(lo, lo_support)
    width = max(hi - lo, np.sqrt(np.finfo(float).eps))

    step = width
    for _ in range(80):
        if law.cdf(hi) >= p:
            break
        hi += step
        step *= 2.0
    else:
        raise ComputationError("quantile bracket expansion diverged above")
    step = width
    for _ in range(80):
        if lo <= lo_support or law.cdf(lo) <= p:
            break
        lo = max(lo - step, lo_support)
        step *= 2.0
    else:
        raise ComputationError("quantile bracket expansion diverged below")

    root = brentq(lambda t: law.cdf(t) - p, lo, hi, xtol=1e-14, rtol=8.9e-16, maxiter=200)
    err = abs(law.cdf(root) - p)
    if err > tol:
        raise ComputationError(
            f"quantile inversion achieved |cdf−p| = {err:.2e} > {tol:.1e}", achieved=err
        )
    return float(root)


def law_sample(law, rng_state, count: int) -> np.ndarray:
    """`count` i.i.d. draws of any law, using an explicit generator or seed."""
    if int(count) < 1:
        raise ValueError("count must be at least 1")
    return law.sample(_as_generator(rng_state), int(count))
