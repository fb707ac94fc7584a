"""Traveling-wave profiles and the free-boundary speed c_nu.

In the frame moving with the right front, steady profiles (u(s), v(s))
with s the distance behind the front satisfy

    D1 u'' - c u' + a1 (N1 - u) v - gamma u = 0
    D2 v'' - c v' + a2 (N2 - v) u - d v = 0

on s > 0 with u(0) = v(0) = 0 and (u, v) -> (U*, V*) far behind.  The
half-line is truncated to [0, S] with Dirichlet pinning at the endemic
equilibrium.  The free-boundary speed is the c solving nu * u_c'(0) = c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import solve_banded

from .model import DerivedParams, RawParams, derive_params

_DEFAULT_N = 2001
_MONOTONE_SAMPLES = (1.0, 2.0, 4.0, 8.0)


class PreconditionError(ValueError):
    """The endemic equilibrium is degenerate; no nontrivial profile exists."""


class NewtonDivergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


class NoBracketError(RuntimeError):
    """nu * u'(0) - c kept one sign over all sampled speeds."""

    def __init__(self, samples):
        lines = ", ".join(f"F({c:.4g}) = {f:.4g}" for c, f in samples)
        super().__init__(f"no sign change found for the speed equation: {lines}")
        self.samples = tuple(samples)


@dataclass(frozen=True)
class WaveProfile:
    c: float
    s_grid: np.ndarray
    u: np.ndarray
    v: np.ndarray
    uprime0: float
    converged: bool
    newton_residual: float


def default_truncation(raw: RawParams) -> float:
    """Domain length 40 sqrt(D1/gamma): dozens of decay lengths past the ramp."""
    return 40.0 * math.sqrt(raw.D1 / raw.gamma)


def reaction_scale(raw: RawParams, dp: DerivedParams) -> float:
    """Magnitude of the reaction terms at the plateau; sets residual tolerances."""
    return max(raw.gamma * dp.U_star, raw.d * dp.V_star,
               dp.a1 * raw.N1 * dp.V_star, dp.a2 * raw.N2 * dp.U_star)


def _interior_residual(raw: RawParams, dp: DerivedParams, c: float,
                       u: np.ndarray, v: np.ndarray, ds: float) -> np.ndarray:
    fu = (raw.D1 * (u[2:] - 2.0 * u[1:-1] + u[:-2]) / ds**2
          - c * (u[2:] - u[:-2]) / (2.0 * ds)
          + dp.a1 * (raw.N1 - u[1:-1]) * v[1:-1] - raw.gamma * u[1:-1])
    fv = (raw.D2 * (v[2:] - 2.0 * v[1:-1] + v[:-2]) / ds**2
          - c * (v[2:] - v[:-2]) / (2.0 * ds)
          + dp.a2 * (raw.N2 - v[1:-1]) * u[1:-1] - raw.d * v[1:-1])
    out = np.empty(2 * fu.size)
    out[0::2] = fu
    out[1::2] = fv
    return out


def _jacobian_banded(raw: RawParams, dp: DerivedParams, c: float,
                     u: np.ndarray, v: np.ndarray, ds: float) -> np.ndarray:
    m = u.size - 2
    ab = np.zeros((5, 2 * m))
    ab[0, 2::2] = raw.D1 / ds**2 - c / (2.0 * ds)
    ab[0, 3::2] = raw.D2 / ds**2 - c / (2.0 * ds)
    ab[1, 1::2] = dp.a1 * (raw.N1 - u[1:-1])
    ab[2, 0::2] = -2.0 * raw.D1 / ds**2 - dp.a1 * v[1:-1] - raw.gamma
    ab[2, 1::2] = -2.0 * raw.D2 / ds**2 - dp.a2 * u[1:-1] - raw.d
    ab[3, 0::2] = dp.a2 * (raw.N2 - v[1:-1])
    if m > 1:
        ab[4, 0:2 * m - 2:2] = raw.D1 / ds**2 + c / (2.0 * ds)
        ab[4, 1:2 * m - 2:2] = raw.D2 / ds**2 + c / (2.0 * ds)
    return ab


def _ramp_guess(raw: RawParams, dp: DerivedParams, s: np.ndarray):
    ell = math.sqrt(raw.D1 / raw.gamma)
    shape = 1.0 - np.exp(-s / ell)
    return dp.U_star * shape, dp.V_star * shape


def solve_profile(raw: RawParams, dp: DerivedParams, c: float,
                  S: float | None = None, n: int | None = None, *,
                  guess=None, max_newton: int = 60) -> WaveProfile:
    """Damped-Newton solve of the truncated profile problem at fixed speed c.

    Always returns a solution of the discrete equations when Newton
    converges; `converged` additionally certifies strict monotonicity of
    both components, which fails for speeds past the existence range
    (the discrete solution then oscillates near the pinned end).
    """
    if not (math.isfinite(c) and c >= 0.0):
        raise ValueError(f"wave speed must be finite and >= 0, got {c}")
    if dp.U_star <= 0.0 or dp.V_star <= 0.0:
        raise PreconditionError(
            "endemic equilibrium is zero (a1*a2*N1*N2 <= gamma*d); "
            "the profile boundary condition degenerates")
    if S is None:
        S = default_truncation(raw)
    if n is None:
        n = _DEFAULT_N
    if not (math.isfinite(S) and S > 0.0):
        raise ValueError(f"truncation length must be positive, got {S}")
    if n < 201:
        raise ValueError(f"need at least 201 grid points, got {n}")

    s = np.linspace(0.0, S, n)
    ds = s[1] - s[0]
    if guess is None:
        u, v = _ramp_guess(raw, dp, s)
        u = u.copy()
        v = v.copy()
    else:
        gu, gv = guess
        u = np.asarray(gu, dtype=float).copy()
        v = np.asarray(gv, dtype=float).copy()
        if u.shape != s.shape or v.shape != s.shape:
            raise ValueError("guess arrays must match the grid size")
    u[0] = v[0] = 0.0
    u[-1] = dp.U_star
    v[-1] = dp.V_star

    tol = 1e-9 * reaction_scale(raw, dp)
    fvec = _interior_residual(raw, dp, c, u, v, ds)
    fnorm = float(np.abs(fvec).max())
    for _ in range(max_newton):
        if fnorm <= tol:
            break
        ab = _jacobian_banded(raw, dp, c, u, v, ds)
        step = solve_banded((2, 2), ab, -fvec)
        lam = 1.0
        for _ in range(9):
            u_try = u.copy()
            v_try = v.copy()
            u_try[1:-1] += lam * step[0::2]
            v_try[1:-1] += lam * step[1::2]
            f_try = _interior_residual(raw, dp, c, u_try, v_try, ds)
            f_try_norm = float(np.abs(f_try).max())
            if math.isfinite(f_try_norm) and f_try_norm < fnorm:
                u, v = u_try, v_try
                fvec, fnorm = f_try, f_try_norm
                break
            lam *= 0.5
        else:
            raise NewtonDivergenceError(
                f"Newton step gave no residual decrease at c = {c:.6g}", fnorm)
    else:
        raise NewtonDivergenceError(
            f"Newton did not converge in {max_newton} iterations at c = {c:.6g}",
            fnorm)

    uprime0 = (4.0 * u[1] - u[2]) / (2.0 * ds)
    # roundoff slack: the saturated tail has increments at machine level,
    # while past the existence range the oscillations are macroscopic
    monotone = bool(np.all(np.diff(u) > -1e-10 * dp.U_star)
                    and np.all(np.diff(v) > -1e-10 * dp.V_star))
    return WaveProfile(c=float(c), s_grid=s, u=u, v=v, uprime0=float(uprime0),
                       converged=monotone, newton_residual=fnorm)


def speed_ladder_scale(raw: RawParams, dp: DerivedParams) -> float:
    """2 sqrt(D1 lambda+): linear-spreading speed bound from the bulk growth rate."""
    p = dp.a1 * dp.a2 * raw.N1 * raw.N2
    lam_plus = 0.5 * (-(raw.gamma + raw.d)
                      + math.sqrt((raw.gamma - raw.d) ** 2 + 4.0 * p))
    return 2.0 * math.sqrt(raw.D1 * max(lam_plus, 0.0))


def c_nu(raw: RawParams, dp: DerivedParams, nu: float,
         S: float | None = None, n: int | None = None, *,
         tol: float = 1e-4) -> tuple[float, WaveProfile]:
    """Bisection for the root of F(c) = nu * u_c'(0) - c.

    The upper end of the bracket is either a sampled speed with F < 0 or
    the first speed where no monotone profile exists; both sit above the
    root, so treating them alike keeps the bisection valid.
    """
    if not (math.isfinite(nu) and nu > 0.0):
        raise PreconditionError(f"front response coefficient must be > 0, got {nu}")
    if dp.U_star <= 0.0 or dp.V_star <= 0.0:
        raise PreconditionError(
            "endemic equilibrium is zero (a1*a2*N1*N2 <= gamma*d); no front speed")

    def attempt(c, warm):
        try:
            return solve_profile(raw, dp, c, S, n, guess=warm)
        except NewtonDivergenceError:
            return None

    p0 = solve_profile(raw, dp, 0.0, S, n)
    f0 = nu * p0.uprime0
    samples = [(0.0, f0)]
    lo, p_lo = 0.0, p0
    hi = None
    step = speed_ladder_scale(raw, dp) / 8.0
    if step <= 0.0:
        raise PreconditionError("bulk growth rate is not positive; no front speed")
    for k in range(1, 41):
        c_k = k * step
        prof = attempt(c_k, (p_lo.u, p_lo.v))
        if prof is None or not prof.converged:
            hi = c_k
            break
        f_k = nu * prof.uprime0 - c_k
        samples.append((c_k, f_k))
        if f_k < 0.0:
            hi = c_k
            break
        lo, p_lo = c_k, prof
    if hi is None:
        raise NoBracketError(samples)

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        prof = attempt(mid, (p_lo.u, p_lo.v))
        if prof is None or not prof.converged or nu * prof.uprime0 - mid < 0.0:
            hi = mid
        else:
            lo, p_lo = mid, prof
    root = 0.5 * (lo + hi)
    prof = attempt(root, (p_lo.u, p_lo.v))
    if prof is not None and prof.converged:
        return root, prof
    return root, p_lo


def cnu_shift_sweep(raw: RawParams, nu: float, omega: float,
                    S: float | None = None, n: int | None = None) -> dict:
    """c_nu under removal-rate shifts gamma, d -> gamma +/- 2 omega, d -/+ ...

    Robustness probe only: reports how the front speed moves when both
    removal rates are perturbed by +/- 2 omega.
    """
    if not (math.isfinite(omega) and omega >= 0.0):
        raise ValueError(f"shift must be finite and >= 0, got {omega}")
    out = {}
    for label, sign in (("minus", -1.0), ("base", 0.0), ("plus", 1.0)):
        shift = 2.0 * omega * sign
        shifted = replace(raw, gamma=raw.gamma + shift, d=raw.d + shift)
        shifted.validate()
        dp_s = derive_params(shifted)
        c, _ = c_nu(shifted, dp_s, nu, S, n)
        out[label] = c
    return out
