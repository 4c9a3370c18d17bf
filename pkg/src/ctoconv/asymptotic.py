"""Free-energy functionals and the asymptotic interconversion rate.

Free energies are computed in floating point even in rational mode (they
involve logarithms).  Rates use the Gibbs-relative value by default, which
vanishes exactly on free states; the literal functional remains available
via relative=False.
"""

from __future__ import annotations

import math

from .core import CQState, GibbsContext, StateVector
from .errors import FreeTarget, NotNormalized

_RATE_TOL = 1e-12


def free_energy(u: StateVector, ctx: GibbsContext) -> float:
    """F(u) = sum_i u_i (E_i + ln(u_i)/beta), with 0 ln 0 = 0."""
    policy = ctx.policy
    if not policy.close(u.mass, policy.one()):
        raise NotNormalized(f"free energy needs a normalized state, mass {u.mass}")
    energies = ctx.energy_levels()
    beta = float(ctx.beta)
    total = 0.0
    for ui, ei in zip(u.w, energies):
        x = float(ui)
        if x > 0:
            total += x * (ei + math.log(x) / beta)
    return total


def gibbs_free_energy(ctx: GibbsContext) -> float:
    """F(g) = -ln(Z)/beta."""
    return -math.log(float(ctx.partition)) / float(ctx.beta)


def resource_value(state: CQState, ctx: GibbsContext, relative: bool = True) -> float:
    """Branch-mass-weighted free energy of the conditionals.

    relative=True subtracts F(g) per branch, so free states score exactly 0.
    """
    state.validate(ctx.policy)
    base = gibbs_free_energy(ctx) if relative else 0.0
    total = 0.0
    for col in state.columns:
        p_x = float(col.mass)
        if p_x == 0:
            continue
        total += p_x * (free_energy(col.normalized(), ctx) - base)
    return total


def asymptotic_rate(source: CQState, target: CQState, ctx: GibbsContext) -> float:
    """Optimal copies-out per copy-in in the many-copy limit: f(U)/f(V)."""
    f_u = resource_value(source, ctx, relative=True)
    f_v = resource_value(target, ctx, relative=True)
    if abs(f_v) <= _RATE_TOL:
        raise FreeTarget("target is a free state; the rate is unbounded")
    if abs(f_u) <= _RATE_TOL:
        return 0.0
    return f_u / f_v
