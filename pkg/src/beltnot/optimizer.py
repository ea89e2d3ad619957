"""Optimal Gram diagonals for the belt NOT gate.

The belt-averaged fidelity depends on the gate only through the diagonal
weights ``a_0 .. a_{2M+1}`` (two probability vectors, one per input basis
state) once every coupling ``a_{M+k+1, M-k-1}`` saturates its Cauchy-Schwarz
bound. Writing ``x_i = a_i`` and ``y_i = a_{2M-i}`` for ``i = 0 .. M-1``,
the objective separates into coupled pairs::

    F = 1/2 + K/6 + sum_i [ P w_i sqrt(x_i y_i) - alpha_i x_i - beta_i y_i ]

    w_i = sqrt((i+1)(M-i))/M,  alpha_i = Q (M-i)/M,  beta_i = R (i+1)/M

with ``sum x <= 1`` and ``sum y <= 1`` (the slack sits in ``a_M`` and
``a_{2M+1}``, which carry no weight). Three solvers live here:

* :func:`case_formula_optimum` -- the four closed-form case families.
* :func:`analytic_optimum` -- the exact maximum, found by enumerating the
  finitely many stationary points of the two-variable dual and recovering
  a primal point with zero duality gap.
* :func:`oracle_optimum` -- exhaustive grid search plus coordinate ascent,
  sharing nothing with the other two beyond the objective.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .belt import BeltConstants, BeltRegion, CaseId, belt_constants, classify_case, latitude_tie

DENOM_EPS = 1e-12


def diagonal_objective(a_diag: np.ndarray, constants: BeltConstants, m: int,
                       coupling_factor: float = 1.0) -> float:
    """Belt-averaged fidelity for diagonal weights ``a_diag`` (length 2M+2).

    Couplings take the saturated value ``-coupling_factor * sqrt(a a)``.
    """
    a = np.asarray(a_diag, dtype=float)
    if a.shape != (2 * m + 2,):
        raise ValueError(f"need {2 * m + 2} diagonal weights, got shape {a.shape}")
    k = np.arange(m)
    coup = np.sqrt((m - k) * (k + 1)) / m
    lin = (m - k) / m
    cross = np.sqrt(np.clip(a[m + k + 1] * a[m - k - 1], 0.0, None))
    return float(
        0.5 + constants.k_const / 6.0
        + constants.p_const * coupling_factor * np.sum(coup * cross)
        - constants.q_const * np.sum(lin * a[k])
        - constants.r_const * np.sum(lin * a[m + k + 1])
    )


def pair_coefficients(constants: BeltConstants, m: int):
    """``(w, alpha, beta)`` for pairs ``i = 0 .. m-1`` (pair i couples a_i with a_{2m-i})."""
    i = np.arange(m)
    w = np.sqrt((i + 1) * (m - i)) / m
    alpha = constants.q_const * (m - i) / m
    beta = constants.r_const * (i + 1) / m
    return w, alpha, beta


def diagonals_from_pairs(m: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    a = np.zeros(2 * m + 2)
    i = np.arange(m)
    a[i] = x
    a[2 * m - i] = y
    a[m] = max(0.0, 1.0 - float(np.sum(x)))
    a[2 * m + 1] = max(0.0, 1.0 - float(np.sum(y)))
    return a


# -- closed-form case families ---------------------------------------------

@dataclass(frozen=True, eq=False)
class CaseFormulaResult:
    case_id: CaseId
    a_star: float
    boundary_hit: bool
    a_diagonals: np.ndarray
    f_bar: float


def case_indices(case_id: CaseId, m: int) -> tuple[int, int, int]:
    """``(free, coupled, slack)`` diagonal indices used by a case family.

    ``free`` carries ``a_star``, ``coupled`` is its partner fixed at 1 and
    ``slack`` takes ``1 - a_star``.
    """
    if case_id is CaseId.CASE1:
        return (m - 1) // 2, (3 * m + 1) // 2, m
    if case_id is CaseId.CASE2:
        return (3 * m + 1) // 2, (m - 1) // 2, 2 * m + 1
    if case_id is CaseId.CASE3:
        return m // 2, 3 * m // 2, m
    return 3 * m // 2 + 1, m // 2 - 1, 2 * m + 1


def case_formula_for(case_id: CaseId, constants: BeltConstants, m: int) -> CaseFormulaResult:
    if case_id.odd_m != (m % 2 == 1):
        raise ValueError(f"{case_id.name} does not apply to m={m}")
    K, P, Q, R = constants.k_const, constants.p_const, constants.q_const, constants.r_const
    base = 0.5 + K / 6.0
    denom = Q if case_id.upper_dominant else R
    other = R if case_id.upper_dominant else Q
    if case_id.odd_m:
        ratio = math.inf if denom <= DENOM_EPS else (P / (2.0 * denom)) ** 2
    else:
        ratio = math.inf if denom <= DENOM_EPS else P * P * (m + 2) / (4.0 * denom * denom * m)
    boundary = ratio >= 1.0
    a_star = 1.0 if boundary else ratio
    if case_id.odd_m:
        weight = (m + 1) / (2.0 * m)
        f_bar = base + weight * ((P - Q - R) if boundary else (P * P / (4.0 * denom) - other))
    elif boundary:
        f_bar = (base + P * math.sqrt(m / 2 * (1 + m / 2)) / m
                 - other * (m + 2) / (2.0 * m) - denom / 2.0)
    else:
        f_bar = base + (m + 2) / (2.0 * m) * (P * P / (4.0 * denom) - other)
    free, coupled, slack = case_indices(case_id, m)
    a = np.zeros(2 * m + 2)
    a[free] = a_star
    a[coupled] = 1.0
    a[slack] = 1.0 - a_star
    return CaseFormulaResult(case_id, a_star, boundary, a, f_bar)


def case_formula_optimum(region: BeltRegion, m: int) -> CaseFormulaResult:
    """The closed-form case family selected by :func:`classify_case`."""
    return case_formula_for(classify_case(region, m), belt_constants(region), m)


# -- exact optimum -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OptimalGateReport:
    """Exact maximizer of the belt-averaged fidelity.

    ``pairs`` lists the coupled pairs carrying weight; ``mu`` and ``nu`` are
    the optimal dual prices of the two budgets and ``mu + nu`` is a
    certified upper bound on ``f_bar - 1/2 - K/6``. ``case_formula`` holds
    the closed-form case family for the same belt, for comparison.
    """

    region: BeltRegion
    m: int
    constants: BeltConstants
    case_id: CaseId
    f_bar: float
    a_diagonals: np.ndarray
    pairs: tuple
    mu: float
    nu: float
    duality_gap: float
    case_formula: CaseFormulaResult

    @property
    def a_star(self) -> float:
        """Pair weight carried by the less-used branch (``min(sum x, sum y)``)."""
        m = self.m
        return float(min(self.a_diagonals[:m].sum(), self.a_diagonals[m + 1:2 * m + 1].sum()))

    @property
    def boundary_hit(self) -> bool:
        """Both branches spend their whole budget on coupled pairs."""
        m = self.m
        return bool(self.a_diagonals[m] < 1e-12 and self.a_diagonals[2 * m + 1] < 1e-12)

    @property
    def case_formula_gap(self) -> float:
        return self.f_bar - self.case_formula.f_bar


def _dual_value(mu: float, c, alpha, beta) -> float:
    with np.errstate(divide="ignore", invalid="ignore"):
        shift = alpha + mu
        f = np.where(c > 0, c / shift, 0.0) - beta
        bad = (shift < 0) | ((shift == 0) & (c > 0))
    if np.any(bad):
        return math.inf
    return mu + max(0.0, float(np.max(f)))


def _polished_dual(mu: float, c, alpha, beta, ulps: int = 16):
    probes = mu + np.arange(-ulps, ulps + 1) * np.spacing(mu)
    vals = [_dual_value(float(p), c, alpha, beta) for p in probes]
    k = int(np.argmin(vals))
    return float(probes[k]), vals[k]


def _dual_candidates(c, alpha, beta) -> list[float]:
    m = len(c)
    lo = max(0.0, float(np.max(-alpha)))
    cands = [lo]
    cands.extend(np.sqrt(c) - alpha)
    for i in range(m):
        if beta[i] > 0:
            cands.append(c[i] / beta[i] - alpha[i])
    for i, j in itertools.combinations(range(m), 2):
        # c_i/(alpha_i+mu) - beta_i == c_j/(alpha_j+mu) - beta_j, cleared of denominators
        db = beta[j] - beta[i]
        quad = db
        lin = db * (alpha[i] + alpha[j]) + (c[i] - c[j])
        const = db * alpha[i] * alpha[j] + c[i] * alpha[j] - c[j] * alpha[i]
        if abs(quad) > 1e-300:
            disc = lin * lin - 4 * quad * const
            if disc >= 0:
                sq = math.sqrt(disc)
                cands.extend([(-lin - sq) / (2 * quad), (-lin + sq) / (2 * quad)])
        elif abs(lin) > 1e-300:
            cands.append(-const / lin)
    return [float(u) for u in cands if np.isfinite(u) and u >= lo]


def _single_pair_best(P: float, w: float, alpha: float, beta: float):
    """Best ``(value, x, y)`` for one pair alone on the unit box."""
    options = [(0.0, 0.0, 0.0)]
    for fix_x in (True, False):
        lin_fixed, lin_free = (alpha, beta) if fix_x else (beta, alpha)
        if lin_free <= 0:
            v = 1.0
        elif P * w == 0:
            v = 0.0
        else:
            v = min((P * w / (2.0 * lin_free)) ** 2, 1.0)
        val = P * w * math.sqrt(v) - lin_fixed - lin_free * v
        options.append((val, 1.0, v) if fix_x else (val, v, 1.0))
    top = max(o[0] for o in options)
    near = [o for o in options if o[0] >= top - 1e-14]
    return max(near, key=lambda o: o[1] + o[2])


def _pair_value(P, w, alpha, beta, x, y) -> float:
    return float(np.sum(P * w * np.sqrt(x * y) - alpha * x - beta * y))


def analytic_optimum(region: BeltRegion, m: int) -> OptimalGateReport:
    """Exact optimum over both weight vectors, with a dual certificate."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    consts = belt_constants(region)
    P = consts.p_const
    w, alpha, beta = pair_coefficients(consts, m)
    c = (P * w) ** 2 / 4.0

    # When alpha + mu is tiny the dual term moves by up to ~1e-8 per ulp of
    # mu, so a rounded candidate can land on the wrong side of its kink:
    # score each candidate by its best value over nearby floats.
    best_mu, best_dual = None, math.inf
    for mu in sorted(_dual_candidates(c, alpha, beta)):
        mu, val = _polished_dual(mu, c, alpha, beta)
        if val < best_dual - 1e-15:
            best_mu, best_dual = mu, val
    mu = best_mu
    with np.errstate(divide="ignore", invalid="ignore"):
        f = np.where(c > 0, c / (alpha + mu), 0.0) - beta
    nu = max(0.0, float(np.max(f)))

    # Primal candidates: every pair on its own, plus two-pair splits along
    # the dual-optimal rays of the tight pairs.
    candidates = []
    for i in range(m):
        val, xi, yi = _single_pair_best(P, w[i], alpha[i], beta[i])
        x = np.zeros(m)
        y = np.zeros(m)
        x[i], y[i] = xi, yi
        pairs = (i,) if (xi > 0 or yi > 0) else ()
        candidates.append((val, pairs, x, y))
    candidates.append((0.0, (), np.zeros(m), np.zeros(m)))
    if P > 0:
        tol = 1e-9 * max(1.0, abs(nu))
        tight = [i for i in range(m) if f[i] >= nu - tol]
        rays = {i: (2.0 * (alpha[i] + mu) / (P * w[i])) ** 2 for i in tight}
        for i, j in itertools.combinations(tight, 2):
            ri, rj = rays[i], rays[j]
            if ri == rj:
                continue
            ti = (rj - 1.0) / (rj - ri)
            tj = 1.0 - ti
            if ti < 0 or tj < 0:
                continue
            x = np.zeros(m)
            y = np.zeros(m)
            x[i], x[j] = ti, tj
            y[i], y[j] = min(ti * ri, 1.0), min(tj * rj, 1.0)
            s = y.sum()
            if s > 1.0:
                y /= s
            candidates.append((_pair_value(P, w, alpha, beta, x, y), (i, j), x, y))
    # Ties: one pair before two, two before none; then more weight, then
    # the more central pair.
    top = max(cand[0] for cand in candidates)

    def preference(cand):
        _, pairs, x, y = cand
        rank = {1: 0, 2: 1, 0: 2}[len(pairs)]
        centre = -max((w[i] for i in pairs), default=0.0)
        return (rank, -(x.sum() + y.sum()), centre, pairs)

    eligible = [cand for cand in candidates if cand[0] >= top - 1e-14 * max(1.0, abs(top))]
    val, pairs, x, y = min(eligible, key=preference)
    a = diagonals_from_pairs(m, x, y)
    f_bar = diagonal_objective(a, consts, m)
    gap = (0.5 + consts.k_const / 6.0 + best_dual) - f_bar
    return OptimalGateReport(
        region=region, m=m, constants=consts, case_id=classify_case(region, m),
        f_bar=f_bar, a_diagonals=a, pairs=tuple(int(p) for p in pairs),
        mu=float(mu), nu=nu, duality_gap=float(gap),
        case_formula=case_formula_optimum(region, m),
    )


# -- numerical oracle --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OracleResult:
    best_a_diagonals: tuple  # (branch-0 vector, branch-1 vector), each length m+1
    best_f: float
    evaluations: int
    resolution: float
    grid_f: float
    grid_points: int
    coarse: bool
    coupling_factor: float = 1.0
    paranoid: Optional[dict] = field(default=None)

    @property
    def a_diagonals(self) -> np.ndarray:
        return np.concatenate(self.best_a_diagonals)


def _pair_tables(consts: BeltConstants, m: int, n: int, coupling_factor: float):
    g = np.arange(n + 1) / n
    x = g[:, None]
    y = g[None, :]
    k = np.arange(m)
    coup = np.sqrt((m - k) * (k + 1)) / m
    lin = (m - k) / m
    tables = []
    # Pair for sum index k couples a_{M-k-1} (branch 0) with a_{M+k+1} (branch 1).
    for kk in range(m):
        j0 = m - kk - 1
        lin0 = (m - j0) / m
        tables.append(
            consts.p_const * coupling_factor * coup[kk] * np.sqrt(x * y)
            - consts.q_const * lin0 * x
            - consts.r_const * lin[kk] * y
        )
    return tables


def _grid_search(consts: BeltConstants, m: int, n: int, coupling_factor: float):
    """Exact maximum of the objective over the resolution-1/n lattice.

    Equivalent to enumerating every lattice point of both simplices; the
    separable structure lets a max-plus recursion over the pairs do it
    without materializing the product grid.
    """
    tables = _pair_tables(consts, m, n, coupling_factor)
    best = tables[0].copy()
    picks = []
    evaluations = (n + 1) ** 2
    for t in tables[1:]:
        new = np.full_like(best, -np.inf)
        arg_p = np.zeros(best.shape, dtype=int)
        arg_q = np.zeros(best.shape, dtype=int)
        for p in range(n + 1):
            for q in range(n + 1):
                cand = best[: n + 1 - p, : n + 1 - q] + t[p, q]
                view = new[p:, q:]
                better = cand > view
                view[better] = cand[better]
                arg_p[p:, q:][better] = p
                arg_q[p:, q:][better] = q
                evaluations += cand.size
        picks.append((arg_p, arg_q))
        best = new
    X, Y = np.unravel_index(int(np.argmax(best)), best.shape)
    units = []
    for arg_p, arg_q in reversed(picks):
        p, q = int(arg_p[X, Y]), int(arg_q[X, Y])
        units.append((p, q))
        X, Y = X - p, Y - q
    units.append((int(X), int(Y)))
    units.reverse()
    a = np.zeros(2 * m + 2)
    for kk, (p, q) in enumerate(units):
        a[m - kk - 1] = p / n
        a[m + kk + 1] = q / n
    a[m] = 1.0 - a[:m].sum()
    a[2 * m + 1] = 1.0 - a[m + 1: 2 * m + 1].sum()
    return a, evaluations


def _ascent(a: np.ndarray, consts: BeltConstants, m: int, step: float,
            coupling_factor: float, min_step: float = 1e-6):
    a = a.copy()
    f = diagonal_objective(a, consts, m, coupling_factor)
    evals = 1
    blocks = (range(0, m + 1), range(m + 1, 2 * m + 2))
    h = step
    while h >= min_step:
        improved = True
        while improved:
            improved = False
            for block in blocks:
                for src, dst in itertools.permutations(block, 2):
                    move = min(h, a[src])
                    if move <= 0:
                        continue
                    trial = a.copy()
                    trial[src] -= move
                    trial[dst] += move
                    ft = diagonal_objective(trial, consts, m, coupling_factor)
                    evals += 1
                    if ft > f + 1e-15:
                        a, f, improved = trial, ft, True
        h /= 2.0
    return a, f, evals


def simplex_points(parts: int, n: int) -> int:
    """Number of lattice points with ``parts`` nonnegative coordinates summing to ``n``."""
    return math.comb(n + parts - 1, parts - 1)


def oracle_optimum(region: BeltRegion, m: int, resolution: float = 0.01,
                   paranoid: bool = False, coupling_factor: float = 1.0) -> OracleResult:
    """Grid search at ``resolution`` followed by coordinate ascent to step 1e-6.

    With ``paranoid=True`` (m <= 2) the coupling factor is also swept over
    [-1, 1] to confirm that saturated couplings are optimal.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    n = int(round(1.0 / resolution))
    if n < 1 or abs(n * resolution - 1.0) > 1e-9:
        raise ValueError(f"resolution must divide 1 evenly, got {resolution}")
    consts = belt_constants(region)
    a_grid, evals = _grid_search(consts, m, n, coupling_factor)
    grid_f = diagonal_objective(a_grid, consts, m, coupling_factor)
    a_best, f_best, more = _ascent(a_grid, consts, m, resolution / 2.0, coupling_factor)
    sweep = None
    if paranoid:
        if m > 2:
            raise ValueError("paranoid coupling sweep is limited to m <= 2")
        sweep = {}
        for t in np.linspace(-1.0, 1.0, 21):
            sub = oracle_optimum(region, m, resolution, coupling_factor=float(t))
            sweep[round(float(t), 10)] = sub.best_f
            evals += sub.evaluations
        top = max(sweep.values())
        sweep = {"values": sweep, "saturated_optimal": sweep[1.0] >= top - 1e-12}
    return OracleResult(
        best_a_diagonals=(a_best[: m + 1].copy(), a_best[m + 1:].copy()),
        best_f=f_best,
        evaluations=evals + more,
        resolution=resolution,
        grid_f=grid_f,
        grid_points=simplex_points(m + 1, n) ** 2,
        coarse=resolution > 0.05,
        coupling_factor=coupling_factor,
        paranoid=sweep,
    )


# -- consistency guard -------------------------------------------------------

@dataclass(frozen=True)
class ConsistencyReport:
    ok: bool
    checks: dict
    messages: tuple


def verify_case_consistency(region: BeltRegion, m: int, tol: float = 1e-12) -> ConsistencyReport:
    """Cross-check reported fidelities against the realized gates.

    Failures are collected, never raised. At latitude ties the two eligible
    case families are both evaluated; they agree only when ``Q == R``.
    """
    from .fidelity import avg_fidelity_closed
    from .gate import realize_case_formula, realize_optimal, validate

    report = analytic_optimum(region, m)
    checks = {}
    messages = []

    case_gate = realize_case_formula(region, m)
    case_avg = avg_fidelity_closed(case_gate, region)
    checks["case_gate_valid"] = validate(case_gate).valid
    checks["case_gate_vs_formula"] = abs(case_avg - report.case_formula.f_bar)
    opt_gate = realize_optimal(region, m)
    opt_avg = avg_fidelity_closed(opt_gate, region)
    checks["optimal_gate_valid"] = validate(opt_gate).valid
    checks["optimal_gate_vs_report"] = abs(opt_avg - report.f_bar)
    checks["duality_gap"] = report.duality_gap
    checks["case_formula_gap"] = report.case_formula_gap

    for key in ("case_gate_vs_formula", "optimal_gate_vs_report"):
        if checks[key] > tol:
            messages.append(f"{key}: residual {checks[key]:.3e} exceeds {tol:g}")
    for key in ("case_gate_valid", "optimal_gate_valid"):
        if not checks[key]:
            messages.append(f"{key}: realized gate fails isometry checks")
    if abs(report.duality_gap) > tol:
        messages.append(f"duality gap {report.duality_gap:.3e} exceeds {tol:g}")
    if report.case_formula_gap < -tol:
        messages.append(f"case formula {report.case_formula.f_bar!r} beats exact {report.f_bar!r}")

    if latitude_tie(region):
        here = report.case_formula
        there = case_formula_for(report.case_id.partner(), report.constants, m)
        checks["tie_branches"] = {here.case_id.name: here.f_bar, there.case_id.name: there.f_bar}
        agree = abs(here.f_bar - there.f_bar) <= tol
        checks["tie_branches_agree"] = agree
        if not agree:
            messages.append(
                f"tie branches disagree: {here.case_id.name}={here.f_bar!r}, "
                f"{there.case_id.name}={there.f_bar!r}"
            )
    return ConsistencyReport(ok=not messages, checks=checks, messages=tuple(messages))
