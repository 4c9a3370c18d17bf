"""Random-instance generators and brute-force oracles for tests and fuzzing.

Generators take explicit seeds (or random.Random instances) and are
deterministic given the seed; in rational mode every sampled quantity is a
Fraction so reruns are bit-for-bit identical.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .core import (
    CQState,
    CTOPlan,
    GibbsContext,
    NumericPolicy,
    StateVector,
    canonicalize_cq,
)
from .convert import WitnessMatrix, check_cto
from .errors import NotThermoMajorizing
from .lorenz import thermo_majorizes
from .synth import apply_cto
from .core import TOMatrix

_DEN = 48  # denominator for rational-mode sampling


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _unit(rng: random.Random, policy: NumericPolicy):
    """A number in [0, 1]."""
    if policy.exact:
        return Fraction(rng.randint(0, _DEN), _DEN)
    return rng.random()


def _positive_unit(rng: random.Random, policy: NumericPolicy):
    if policy.exact:
        return Fraction(rng.randint(1, _DEN), _DEN)
    return rng.random() * (1 - 1e-6) + 1e-6


def random_context(d: int, seed, policy: NumericPolicy | None = None) -> GibbsContext:
    policy = policy or NumericPolicy()
    rng = _rng(seed)
    if policy.exact:
        raw = [Fraction(rng.randint(1, _DEN)) for _ in range(d)]
        total = sum(raw)
        return GibbsContext.from_weights([x / total for x in raw], policy)
    energies = [rng.uniform(0.0, 2.0) for _ in range(d)]
    return GibbsContext.from_energies(energies, beta=1.0, policy=policy)


def random_distribution(n: int, seed, policy: NumericPolicy) -> list:
    rng = _rng(seed)
    raw = [_positive_unit(rng, policy) for _ in range(n)]
    total = sum(raw)
    return [x / total for x in raw]


def random_state(ctx: GibbsContext, seed) -> StateVector:
    return StateVector(tuple(random_distribution(ctx.dim, seed, ctx.policy)))


def random_cq(ctx: GibbsContext, n_branches: int, seed) -> CQState:
    rng = _rng(seed)
    masses = random_distribution(n_branches, rng, ctx.policy)
    cols = [
        StateVector(tuple(
            m * x for x in random_distribution(ctx.dim, rng, ctx.policy)
        ))
        for m in masses
    ]
    return canonicalize_cq(CQState(tuple(cols)), ctx.policy)


def random_gibbs_stochastic(ctx: GibbsContext, steps: int, seed) -> TOMatrix:
    """Product of random partial level thermalizations, optionally mixed with
    the full-thermalization map; exactly Gibbs-stochastic by construction."""
    rng = _rng(seed)
    policy = ctx.policy
    d = ctx.dim
    t = _identity_rows(d, policy)
    for _ in range(steps):
        if d < 2:
            break
        i, j = rng.sample(range(d), 2)
        lam = _unit(rng, policy)
        t = _matmul(_plt_rows(ctx, i, j, lam), t)
    if d >= 1 and rng.random() < 0.3:
        w = _unit(rng, policy)
        full = [[ctx.gibbs[i] for _ in range(d)] for i in range(d)]
        one = policy.one()
        t = [
            [(one - w) * t[i][j] + w * full[i][j] for j in range(d)]
            for i in range(d)
        ]
    return TOMatrix(tuple(tuple(row) for row in t))


def _identity_rows(d: int, policy: NumericPolicy):
    one, zero = policy.one(), policy.zero()
    return [[one if i == j else zero for j in range(d)] for i in range(d)]


def _plt_rows(ctx: GibbsContext, i: int, j: int, lam):
    """Partial level thermalization on levels {i, j} with strength lam."""
    policy = ctx.policy
    d = ctx.dim
    g_i, g_j = ctx.gibbs[i], ctx.gibbs[j]
    block_i = g_i / (g_i + g_j)
    block_j = g_j / (g_i + g_j)
    one = policy.one()
    t = _identity_rows(d, policy)
    t[i][i] = (one - lam) + lam * block_i
    t[j][i] = lam * block_j
    t[i][j] = lam * block_i
    t[j][j] = (one - lam) + lam * block_j
    return t


def _matmul(a, b):
    n = len(a)
    k = len(b)
    m = len(b[0])
    return [
        [sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
        for i in range(n)
    ]


def random_cto(ctx: GibbsContext, n_in: int, n_out: int, seed) -> CTOPlan:
    """Random plan: renormalized-uniform control rows, random branch maps."""
    rng = _rng(seed)
    policy = ctx.policy
    control = tuple(
        tuple(random_distribution(n_out, rng, policy)) for _ in range(n_in)
    )
    branch_maps = {
        (x, y): random_gibbs_stochastic(ctx, rng.randint(0, 4), rng)
        for x in range(n_in)
        for y in range(n_out)
    }
    return CTOPlan(control=control, branch_maps=branch_maps)


def reachable_sample(state: CQState, ctx: GibbsContext, count: int, seed) -> list:
    """Outputs of random plans applied to the state; all CTO-reachable."""
    rng = _rng(seed)
    out = []
    for _ in range(count):
        plan = random_cto(ctx, state.n_branches, rng.randint(1, 3), rng)
        out.append(apply_cto(plan, state, ctx))
    return out


def random_witness(n_rows: int, n_cols: int, seed,
                   policy: NumericPolicy | None = None) -> WitnessMatrix:
    """Uniform multipliers, reverse-cumsummed per column, normalized: the
    exact image of the certificate construction."""
    policy = policy or NumericPolicy()
    rng = _rng(seed)
    lam = [[_unit(rng, policy) for _ in range(n_cols)] for _ in range(n_rows)]
    a = [[policy.zero()] * n_cols for _ in range(n_rows)]
    for y in range(n_cols):
        acc = policy.zero()
        for i in range(n_rows - 1, -1, -1):
            acc = acc + lam[i][y]
            a[i][y] = acc
    total = sum(sum(row) for row in a)
    if total == 0:
        a[0][0] = policy.one()
        total = policy.one()
    return WitnessMatrix(tuple(tuple(v / total for v in row) for row in a))


def two_column_source(u: StateVector, p, ctx: GibbsContext) -> CQState:
    """The threshold construction: weight p on u, weight 1-p on the Gibbs state."""
    g = StateVector(ctx.gibbs)
    cols = [u.scaled(p), g.scaled(ctx.policy.one() - p)]
    return canonicalize_cq(CQState(tuple(cols)), ctx.policy)


def pmin_grid_oracle(u: StateVector, v: StateVector, ctx: GibbsContext,
                     step, bisect: bool = False):
    """Smallest grid multiple of step whose two-column source converts to v.

    Linear scan by default; bisect=True exploits monotonicity in p and
    verifies the flip by also checking the preceding grid point.
    """
    if not thermo_majorizes(u, v, ctx):
        raise NotThermoMajorizing("source does not thermo-majorize the target")
    target = canonicalize_cq(CQState((v,)), ctx.policy)
    n_steps = math.ceil(1 / Fraction(str(step)) if not isinstance(step, Fraction)
                        else 1 / step)

    def feasible(k: int) -> bool:
        p = min(ctx.policy.one(), k * step)
        src = two_column_source(u, p, ctx)
        return check_cto(src, target, ctx).convertible

    if bisect:
        lo, hi = 0, n_steps  # feasible(n_steps) holds: p = 1 thermo-majorizes
        if feasible(0):
            return 0 * step
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if feasible(mid):
                hi = mid
            else:
                lo = mid
        return min(ctx.policy.one(), hi * step)
    for k in range(n_steps + 1):
        if feasible(k):
            return min(ctx.policy.one(), k * step)
    raise NotThermoMajorizing("no grid weight converts; inconsistent inputs")


def perturb_to_infeasible(source: CQState, ctx: GibbsContext, seed,
                          max_steps: int = 10):
    """Sharpen the target's branches toward the steepest pure state until the
    pair stops being convertible; None when the source is already maximal."""
    rng = _rng(seed)
    policy = ctx.policy
    d = ctx.dim
    top = min(range(d), key=lambda i: ctx.gibbs[i])
    pure = [policy.zero()] * d
    pure[top] = policy.one()
    base = [c.normalized().w for c in source.columns]
    masses = source.branch_masses
    for k in range(1, max_steps + 1):
        if policy.exact:
            t = Fraction(k, max_steps)
        else:
            t = k / max_steps
        one = policy.one()
        cols = [
            StateVector(tuple(
                m * ((one - t) * b[i] + t * pure[i]) for i in range(d)
            ))
            for m, b in zip(masses, base)
        ]
        target = canonicalize_cq(CQState(tuple(cols)), policy)
        if not check_cto(source, target, ctx).convertible:
            return target
    return None
