"""Constructive side: explicit Gibbs-stochastic matrices and full CTO plans.

Branch maps are found directly as Gibbs-stochastic matrices by LP
feasibility, which covers every reachable quasiclassical transition.  In
float mode the mixing equalities of the per-branch LP are relaxed to a
narrow band well inside eps_lp, absorbing rounding noise in the control
map from the decision LP.
"""

from __future__ import annotations

from .core import CQState, CTOPlan, GibbsContext, StateVector, TOMatrix, canonicalize_cq
from .errors import (
    DimensionMismatch,
    NotConvertible,
    NotStochasticSum,
    NotThermoMajorizing,
    NumericBreakdown,
    ValidationError,
)
from .convert import Decision, check_cto
from .lorenz import thermo_majorizes
from .lp import FEASIBLE, LinearSystem, solve_feasibility


def synthesize_to(u: StateVector, v: StateVector, ctx: GibbsContext) -> TOMatrix:
    """A Gibbs-stochastic matrix mapping u to v; needs u to thermo-majorize v."""
    policy = ctx.policy
    if u.dim != ctx.dim or v.dim != ctx.dim:
        raise DimensionMismatch("states do not match the context dimension")
    if u.mass == 0 and v.mass == 0:
        return TOMatrix.identity(ctx.dim, policy)
    un, vn = u.normalized(), v.normalized()
    if not thermo_majorizes(un, vn, ctx):
        raise NotThermoMajorizing("source does not thermo-majorize the target")
    sys = _gibbs_map_system([un.w], [policy.one()], vn.w, ctx, delta=None)
    res = _solve_with_relaxation(sys, ctx, [un.w], [policy.one()], vn.w)
    return _extract_matrices(res.point, 1, ctx)[0]


def _gibbs_map_system(sources, coeffs, target, ctx: GibbsContext, delta):
    """Variables: one d x d matrix per source, flattened source-major.

    Equalities: column-stochasticity and the Gibbs fixed point per matrix.
    Mixing rows sum_k coeffs[k] * (M_k sources[k])_i = target_i are exact
    equalities when delta is None, else a +-delta inequality band.
    """
    d = ctx.dim
    policy = ctx.policy
    n_mat = len(sources)
    n_vars = n_mat * d * d
    zero, one = policy.zero(), policy.one()

    def var(k, i, j):
        return k * d * d + i * d + j

    eq = []
    ineq = []
    for k in range(n_mat):
        for j in range(d):  # columns sum to one
            row = [zero] * n_vars
            for i in range(d):
                row[var(k, i, j)] = one
            eq.append((row, one))
        for i in range(d):  # Gibbs fixed point
            row = [zero] * n_vars
            for j in range(d):
                row[var(k, i, j)] = ctx.gibbs[j]
            eq.append((row, ctx.gibbs[i]))
    for i in range(d):  # mixing rows
        row = [zero] * n_vars
        for k in range(n_mat):
            for j in range(d):
                row[var(k, i, j)] = coeffs[k] * sources[k][j]
        if delta is None:
            eq.append((row, target[i]))
        else:
            ineq.append((row, target[i] - delta))
            ineq.append(([-x for x in row], -(target[i] + delta)))
    return LinearSystem(n_vars=n_vars, eq=tuple(eq), ineq=tuple(ineq))


def _solve_with_relaxation(sys, ctx, sources, coeffs, target):
    policy = ctx.policy
    if policy.exact:
        res = solve_feasibility(sys, policy)
        if res.status != FEASIBLE:
            raise NotConvertible("no Gibbs-stochastic realization exists")
        return res
    for delta in (None, 1e-10, 1e-9, policy.eps_lp / 2):
        trial = sys if delta is None else _gibbs_map_system(
            sources, coeffs, target, ctx, delta
        )
        try:
            res = solve_feasibility(trial, policy)
        except NumericBreakdown:
            continue
        if res.status == FEASIBLE:
            return res
    raise NotConvertible("no Gibbs-stochastic realization within tolerance")


def _extract_matrices(point, n_mat: int, ctx: GibbsContext):
    d = ctx.dim
    policy = ctx.policy
    out = []
    for k in range(n_mat):
        rows = []
        for i in range(d):
            row = [point[k * d * d + i * d + j] for j in range(d)]
            if not policy.exact:
                row = [max(0.0, v) for v in row]
            rows.append(row)
        if not policy.exact:  # re-normalize columns against clamp noise
            for j in range(d):
                col_sum = sum(rows[i][j] for i in range(d))
                for i in range(d):
                    rows[i][j] /= col_sum
        out.append(TOMatrix(tuple(tuple(r) for r in rows)))
    return out


def synthesize_cto(source: CQState, target: CQState, ctx: GibbsContext,
                   decision: Decision | None = None) -> CTOPlan:
    """A full plan realizing a convertible pair: control map plus branch maps."""
    policy = ctx.policy
    if decision is None:
        decision = check_cto(source, target, ctx)
    if not decision.convertible:
        raise NotConvertible("pair is not convertible under CTO")
    control = decision.plan_seed
    ell = source.n_branches
    m = target.n_branches
    p = source.branch_masses
    u_cond = [c.w for c in source.conditionals()]

    branch_maps = {}
    for y in range(m):
        weights = [p[x] * control[x][y] for x in range(ell)]
        q_y = sum(weights)
        support = [x for x in range(ell) if weights[x] > 0]
        if not support:
            raise NotConvertible(f"target branch {y} receives no mass")
        v_cond = target.columns[y].normalized().w
        coeffs = [weights[x] / q_y for x in support]
        sources = [u_cond[x] for x in support]
        sys = _gibbs_map_system(sources, coeffs, v_cond, ctx, delta=None)
        res = _solve_with_relaxation(sys, ctx, sources, coeffs, v_cond)
        mats = _extract_matrices(res.point, len(support), ctx)
        for x, t in zip(support, mats):
            branch_maps[(x, y)] = t
    ident = TOMatrix.identity(ctx.dim, policy)
    for x in range(ell):
        for y in range(m):
            branch_maps.setdefault((x, y), ident)
    return CTOPlan(control=control, branch_maps=branch_maps)


def apply_cto(plan: CTOPlan, state: CQState, ctx: GibbsContext) -> CQState:
    """Output branches: v^y = sum_x R[x][y] T^(x,y) u^x, then canonicalize."""
    if plan.n_in != state.n_branches:
        raise DimensionMismatch(
            f"plan expects {plan.n_in} source branches, state has "
            f"{state.n_branches}"
        )
    policy = ctx.policy
    d = state.dim
    cols = []
    for y in range(plan.n_out):
        acc = [policy.zero()] * d
        for x in range(plan.n_in):
            r = plan.control[x][y]
            if r == 0:
                continue
            mapped = plan.branch_maps[(x, y)].apply(state.columns[x])
            acc = [a + r * b for a, b in zip(acc, mapped.w)]
        cols.append(StateVector(tuple(acc)))
    return canonicalize_cq(CQState(tuple(cols)), policy)


def canonicalize_cto(terms, ctx: GibbsContext) -> CTOPlan:
    """Average an arbitrary indexed decomposition into the (x, y)-indexed form.

    terms: iterable of (sub-stochastic control part, TOMatrix) pairs whose
    control parts sum to a row-stochastic matrix.
    """
    policy = ctx.policy
    terms = [(tuple(tuple(r) for r in part), t) for part, t in terms]
    if not terms:
        raise NotStochasticSum("empty decomposition")
    ell = len(terms[0][0])
    m = len(terms[0][0][0])
    d = ctx.dim
    total = [[policy.zero()] * m for _ in range(ell)]
    for part, t in terms:
        if len(part) != ell or any(len(r) != m for r in part):
            raise DimensionMismatch("ragged decomposition parts")
        if t.dim != d:
            raise DimensionMismatch("branch map dimension mismatch")
        for x in range(ell):
            for y in range(m):
                if not policy.nonneg(part[x][y]):
                    raise ValidationError("negative sub-stochastic entry")
                total[x][y] += part[x][y]
    for x in range(ell):
        if not policy.close(sum(total[x]), policy.one()):
            raise NotStochasticSum(
                f"row {x} of the summed control parts is not stochastic"
            )
    ident = TOMatrix.identity(d, policy)
    branch_maps = {}
    for x in range(ell):
        for y in range(m):
            r_xy = total[x][y]
            if r_xy == 0:
                branch_maps[(x, y)] = ident
                continue
            acc = [[policy.zero()] * d for _ in range(d)]
            for part, t in terms:
                c = part[x][y]
                if c == 0:
                    continue
                for i in range(d):
                    for j in range(d):
                        acc[i][j] += c * t.t[i][j]
            branch_maps[(x, y)] = TOMatrix(
                tuple(tuple(v / r_xy for v in row) for row in acc)
            )
    return CTOPlan(control=tuple(tuple(r) for r in total), branch_maps=branch_maps)
