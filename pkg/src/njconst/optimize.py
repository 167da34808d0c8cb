"""Estimation of the four constants: sup/inf of the sign-average ratio.

Methods, chosen per space and constant kind:

* extreme-enumeration -- exact, for the upper modified constant under a
  polyhedral norm (p in {1, inf}): the numerator is convex, so its maximum
  over the product of unit balls is attained at tuples of extreme points.
* multistart-gradient -- projected gradient ascent/descent for smooth p,
  a random coordinate-pivot hill climb for p in {1, inf}; the restart pool
  always contains the analytic candidate tuples, so every known optimum is
  evaluated even when the local search cannot reach it.
* seeded-candidates-only -- evaluate the analytic candidates, no search.

Estimates of suprema are certified lower bounds, estimates of infima are
certified upper bounds; bound status records which. All randomness derives
from the config seed through a fixed spawning scheme, so results are
identical for any worker count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import (
    BudgetExceededError,
    CapExceededError,
    DegenerateInputError,
    UnsupportedNormError,
)
from .functional import evaluate_cn, evaluate_cn_batch, grad_cn_with_value
from .hadamard import DEFAULT_N_CAP, extremal_linf_tuple
from .spaces import SpaceSpec, extreme_points, project_to_sphere, tuple_l2X_norm

KINDS = ("upper", "lower", "upper-modified", "lower-modified")

_KIND_STREAM = {"upper": 1, "lower": 2, "upper-modified": 3, "lower-modified": 4}

# Candidates whose values differ by less than this (relative) are ties and
# the earlier pool entry wins; keeps certificates at the analytic optima
# instead of float-level perturbations of them.
_TIE_REL = 1e-12

_ENUM_CHUNK = 1 << 15


@dataclass(frozen=True)
class OptimizerConfig:
    """Search parameters; seed fully determines all stochastic behavior."""

    restarts: int = 200
    max_iters: int = 500
    step_init: float = 1.0
    backtracks: int = 30
    tol: float = 1e-10
    eps: float = 1e-12
    seed: int = 0
    enum_budget: int = 10_000_000
    n_cap: int = DEFAULT_N_CAP

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1 or self.backtracks < 1:
            raise ValueError("restarts, max_iters and backtracks must be >= 1")
        if not (self.tol > 0 and self.eps > 0 and self.step_init > 0):
            raise ValueError("tolerances and the initial step must be positive")


@dataclass(frozen=True)
class ConstantEstimate:
    """A constant estimate with its witnessing tuple.

    value always equals evaluate_cn(certificate); bound_status is "exact"
    only for extreme-point enumeration of the upper modified constant.
    """

    kind: str
    value: float
    certificate: np.ndarray
    method: str
    bound_status: str
    restarts_used: int
    iterations_total: int
    seed: int


def _validate_kind(kind: str) -> None:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")


def _is_modified(kind: str) -> bool:
    return kind.endswith("modified")


def _sign(kind: str) -> float:
    return 1.0 if kind.startswith("upper") else -1.0


def seeded_candidates(space: SpaceSpec, n: int) -> List[np.ndarray]:
    """Analytic candidate tuples on S(X)^n, in fixed order.

    1. the identical tuple (e_1, ..., e_1);
    2. the canonical basis tuple (e_1, ..., e_n), when d >= n;
    3. the normalized sign-matrix columns, when d >= 2**(n-1).

    Between them these witness every closed-form optimum handled here:
    the basis tuple attains the power-law value, the sign-matrix columns
    attain the sup-norm extreme value n and the sign-moment value for
    p > 2, and the identical tuple pins the value 1.
    """
    d = space.dim
    out = []
    e1 = np.zeros(d)
    e1[0] = 1.0
    out.append(np.tile(e1, (n, 1)))
    if d >= n:
        basis = np.zeros((n, d))
        for j in range(n):
            basis[j, j] = 1.0
        out.append(basis)
    r = 2 ** (n - 1)
    if d >= r:
        cols = extremal_linf_tuple(n)
        emb = np.zeros((n, d))
        emb[:, :r] = cols
        emb = np.vstack([project_to_sphere(space, row) for row in emb])
        out.append(emb)
    return out


def _project_tuple(space: SpaceSpec, t: np.ndarray, kind: str) -> np.ndarray:
    if _is_modified(kind):
        return np.vstack([project_to_sphere(space, row) for row in t])
    nrm = tuple_l2X_norm(space, t)
    if nrm == 0.0:
        raise DegenerateInputError("cannot project the zero tuple")
    return t / nrm


def _try_project(space: SpaceSpec, t: np.ndarray, kind: str) -> Optional[np.ndarray]:
    try:
        return _project_tuple(space, t, kind)
    except DegenerateInputError:
        return None


def _frob(g: np.ndarray) -> float:
    return float(np.sqrt((g * g).sum()))


def _search_smooth_modified(space, t, sgn, cfg):
    """Projected gradient on the product of spheres; monotone in the value."""
    val = evaluate_cn(space, t)
    step = cfg.step_init
    iters = 0
    for _ in range(cfg.max_iters):
        iters += 1
        _, g = grad_cn_with_value(space, t, eps=cfg.eps)
        gn = _frob(g)
        if gn == 0.0:
            break
        direction = g / gn
        s = step
        gain = 0.0
        for _ in range(cfg.backtracks):
            cand = _try_project(space, t + (sgn * s) * direction, "upper-modified")
            if cand is not None:
                cval = evaluate_cn(space, cand)
                if sgn * (cval - val) > 0.0:
                    gain = sgn * (cval - val)
                    t, val = cand, cval
                    break
            s *= 0.5
        if gain == 0.0:
            break
        step = min(cfg.step_init, 2.0 * s)
        if gain < cfg.tol:
            break
    return t, iters


def _search_smooth_plain(space, t, sgn, cfg):
    """Alternating search on S(l_n^2(X)): unit directions times Euclidean radii.

    The tuple is kept as (r_1 u_1, ..., r_n u_n) with each u_j on S(X) and
    the radius vector on the Euclidean unit sphere; direction and radius
    substeps alternate, each with backtracking and accept-only-improving
    steps.
    """
    from .spaces import norm as _norm

    t = t / tuple_l2X_norm(space, t)
    val = evaluate_cn(space, t)
    step_u = cfg.step_init
    step_r = cfg.step_init
    iters = 0
    for _ in range(cfg.max_iters):
        iters += 1
        gain_total = 0.0

        radii = np.array([_norm(space, row) for row in t])
        safe = radii > 1e-300
        dirs = np.where(safe[:, None], t / np.where(safe, radii, 1.0)[:, None], 0.0)

        # direction substep: move each u_j on S(X), radii fixed
        _, g = grad_cn_with_value(space, t, eps=cfg.eps)
        gu = radii[:, None] * g
        gn = _frob(gu)
        if gn > 0.0:
            s = step_u
            for _ in range(cfg.backtracks):
                cand_dirs = _try_project(
                    space, dirs + (sgn * s) * gu / gn, "upper-modified"
                )
                if cand_dirs is not None:
                    cand = radii[:, None] * cand_dirs
                    cand = _try_project(space, cand, "upper")
                    if cand is not None:
                        cval = evaluate_cn(space, cand)
                        if sgn * (cval - val) > 0.0:
                            gain_total += sgn * (cval - val)
                            t, val = cand, cval
                            step_u = min(cfg.step_init, 2.0 * s)
                            radii = np.array([_norm(space, row) for row in t])
                            safe = radii > 1e-300
                            dirs = np.where(
                                safe[:, None],
                                t / np.where(safe, radii, 1.0)[:, None],
                                0.0,
                            )
                            break
                s *= 0.5
            else:
                step_u = s

        # radius substep: move the radius vector on the Euclidean sphere
        _, g = grad_cn_with_value(space, t, eps=cfg.eps)
        gr = (g * dirs).sum(axis=1)
        gn = float(np.sqrt((gr * gr).sum()))
        if gn > 0.0:
            s = step_r
            for _ in range(cfg.backtracks):
                cand_radii = radii + (sgn * s) * gr / gn
                cand = _try_project(space, cand_radii[:, None] * dirs, "upper")
                if cand is not None:
                    cval = evaluate_cn(space, cand)
                    if sgn * (cval - val) > 0.0:
                        gain_total += sgn * (cval - val)
                        t, val = cand, cval
                        step_r = min(cfg.step_init, 2.0 * s)
                        break
                s *= 0.5
            else:
                step_r = s

        if gain_total < cfg.tol:
            break
    return t, iters


def _search_smooth_ball(space, t, sgn, cfg):
    """Joint gradient search over the punctured ball of l_n^2(X).

    Cross-check parameterization for the domain-equivalence property: the
    ratio is scale invariant, so searching the ball interior and searching
    the sphere must agree.
    """
    nrm = tuple_l2X_norm(space, t)
    if nrm == 0.0:
        raise DegenerateInputError("cannot search from the zero tuple")
    t = t / max(1.0, nrm)
    val = evaluate_cn(space, t)
    step = cfg.step_init
    iters = 0
    for _ in range(cfg.max_iters):
        iters += 1
        _, g = grad_cn_with_value(space, t, eps=cfg.eps)
        gn = _frob(g)
        if gn == 0.0:
            break
        direction = g / gn
        s = step
        gain = 0.0
        for _ in range(cfg.backtracks):
            cand = t + (sgn * s) * direction
            cnrm = tuple_l2X_norm(space, cand)
            if cnrm > 0.0:
                cand = cand / max(1.0, cnrm)
                cval = evaluate_cn(space, cand)
                if sgn * (cval - val) > 0.0:
                    gain = sgn * (cval - val)
                    t, val = cand, cval
                    break
            s *= 0.5
        if gain == 0.0:
            break
        step = min(cfg.step_init, 2.0 * s)
        if gain < cfg.tol:
            break
    return t, iters


def _search_polyhedral(space, t, sgn, kind, cfg, rng):
    """Random coordinate pivots with projection, for p in {1, inf}."""
    val = evaluate_cn(space, t)
    n, d = t.shape
    h = 0.5
    iters = 0
    stall = 0
    max_stall = 4 * n * d
    while iters < cfg.max_iters and h >= 1e-9:
        iters += 1
        j = int(rng.integers(n))
        k = int(rng.integers(d))
        first = 1.0 if int(rng.integers(2)) == 0 else -1.0
        accepted = False
        for delta in (first * h, -first * h):
            raw = t.copy()
            raw[j, k] += delta
            cand = _try_project(space, raw, kind)
            if cand is None:
                continue
            cval = evaluate_cn(space, cand)
            if sgn * (cval - val) > 0.0:
                t, val = cand, cval
                accepted = True
                break
        if accepted:
            stall = 0
        else:
            stall += 1
            if stall >= max_stall:
                h *= 0.5
                stall = 0
    return t, iters


def local_search(space, start, direction, kind, cfg=None, rng=None):
    """One local search pass; returns the final tuple on its feasible set.

    direction is "ascend" or "descend"; the value sequence is monotone
    because only strictly improving steps are accepted.
    """
    if cfg is None:
        cfg = OptimizerConfig()
    _validate_kind(kind)
    if direction not in ("ascend", "descend"):
        raise ValueError(f"direction must be 'ascend' or 'descend', got {direction!r}")
    sgn = 1.0 if direction == "ascend" else -1.0
    t = _project_tuple(space, np.asarray(start, dtype=np.float64), kind)
    if space.p == 1 or space.is_inf:
        if rng is None:
            rng = np.random.default_rng(cfg.seed)
        t, _ = _search_polyhedral(space, t, sgn, kind, cfg, rng)
    elif _is_modified(kind):
        t, _ = _search_smooth_modified(space, t, sgn, cfg)
    else:
        t, _ = _search_smooth_plain(space, t, sgn, cfg)
    return t


def local_search_ball(space, start, direction, cfg=None):
    """Ball-domain variant of the plain-kind search (smooth p only)."""
    if cfg is None:
        cfg = OptimizerConfig()
    if direction not in ("ascend", "descend"):
        raise ValueError(f"direction must be 'ascend' or 'descend', got {direction!r}")
    if space.p == 1 or space.is_inf:
        raise UnsupportedNormError("ball search needs a smooth exponent")
    sgn = 1.0 if direction == "ascend" else -1.0
    t, _ = _search_smooth_ball(space, np.asarray(start, dtype=np.float64), sgn, cfg)
    return t


def _enum_geometry(space: SpaceSpec, n: int):
    """(#representatives for x_1, #points, tuple count) without materializing."""
    d = space.dim
    if space.p == 1:
        m = 2 * d
        reps = d
    elif space.is_inf:
        m = 2**d
        reps = 2 ** (d - 1)
    else:
        raise UnsupportedNormError(
            "extreme-point enumeration needs p in {1, inf}; "
            "strictly convex balls have infinitely many extreme points"
        )
    return reps, m, reps * m ** (n - 1)


def _merge_pool(candidates, sgn):
    """Best (value, tuple) with earlier entries winning near-ties."""
    best_idx = -1
    best_val = None
    best_t = None
    for idx, (val, t) in enumerate(candidates):
        if best_val is None or sgn * (val - best_val) > _TIE_REL * max(
            1.0, abs(best_val)
        ):
            best_idx, best_val, best_t = idx, val, t
    return best_idx, best_val, best_t


def enumerate_extreme(space: SpaceSpec, n: int, kind: str = "upper-modified", cfg=None):
    """Exact upper modified constant by extreme-point enumeration.

    Valid because the numerator is a convex function of the tuple, so its
    maximum over the product of balls is attained at a tuple of extreme
    points, all of which lie on the sphere where the denominator is fixed.
    Negation symmetry halves the work: x_1 ranges over one representative
    per antipodal pair. The analytic candidates are evaluated first, so a
    tie keeps the analytic certificate.
    """
    if cfg is None:
        cfg = OptimizerConfig()
    if kind != "upper-modified":
        raise ValueError(
            "extreme-point enumeration certifies only the upper modified constant"
        )
    if not 2 <= n <= cfg.n_cap:
        raise CapExceededError(f"n must satisfy 2 <= n <= {cfg.n_cap}, got {n!r}")
    reps, m, count = _enum_geometry(space, n)
    if count > cfg.enum_budget:
        raise BudgetExceededError(
            f"enumeration needs {count} evaluations, budget is {cfg.enum_budget}"
        )
    pts = extreme_points(space)
    if space.p == 1:
        rep_idx = np.arange(0, 2 * space.dim, 2, dtype=np.int64)
    else:
        rep_idx = np.arange(reps, dtype=np.int64)

    pool = []
    for seed in seeded_candidates(space, n):
        t = _project_tuple(space, seed, kind)
        pool.append((evaluate_cn(space, t), t))
    best_idx, best_val, best_t = _merge_pool(pool, 1.0)

    for lo in range(0, count, _ENUM_CHUNK):
        hi = min(lo + _ENUM_CHUNK, count)
        flat = np.arange(lo, hi, dtype=np.int64)
        digits = np.empty((hi - lo, n), dtype=np.int64)
        rest = flat
        for pos in range(n - 1, 0, -1):
            digits[:, pos] = rest % m
            rest = rest // m
        digits[:, 0] = rep_idx[rest]
        tuples = pts[digits]  # (chunk, n, d)
        vals = evaluate_cn_batch(space, tuples)
        k = int(np.argmax(vals))
        if vals[k] - best_val > _TIE_REL * max(1.0, abs(best_val)):
            best_val = float(vals[k])
            best_t = np.ascontiguousarray(tuples[k])

    value = evaluate_cn(space, best_t)
    return ConstantEstimate(
        kind=kind,
        value=value,
        certificate=best_t,
        method="extreme-enumeration",
        bound_status="exact",
        restarts_used=0,
        iterations_total=count + len(pool),
        seed=cfg.seed,
    )


def _random_start(space, n, kind, rng):
    while True:
        raw = rng.standard_normal((n, space.dim))
        t = _try_project(space, raw, kind)
        if t is not None:
            return t


def _one_restart(space, n, kind, sgn, cfg, smooth, child, start):
    rng = np.random.default_rng(child)
    if start is None:
        t = _random_start(space, n, kind, rng)
    else:
        t = _project_tuple(space, start, kind)
    if not smooth:
        t, iters = _search_polyhedral(space, t, sgn, kind, cfg, rng)
    elif _is_modified(kind):
        t, iters = _search_smooth_modified(space, t, sgn, cfg)
    else:
        t, iters = _search_smooth_plain(space, t, sgn, cfg)
    return evaluate_cn(space, t), t, iters


def estimate_constant(
    space: SpaceSpec,
    n: int,
    kind: str,
    cfg: Optional[OptimizerConfig] = None,
    method: str = "auto",
    workers: int = 1,
):
    """Estimate one constant of the space; deterministic given cfg.seed.

    method "auto" picks extreme-point enumeration where it is exact (upper
    modified constant, p in {1, inf}, within budget) and multistart search
    otherwise; "enumerate", "multistart" and "seeds" force the choice.
    Upper kinds return certified lower bounds of the supremum, lower kinds
    certified upper bounds of the infimum.
    """
    if cfg is None:
        cfg = OptimizerConfig()
    _validate_kind(kind)
    if not 2 <= n <= cfg.n_cap:
        raise CapExceededError(f"n must satisfy 2 <= n <= {cfg.n_cap}, got {n!r}")
    if method not in ("auto", "enumerate", "multistart", "seeds"):
        raise ValueError(f"unknown method {method!r}")

    polyhedral = space.p == 1 or space.is_inf
    if method == "auto":
        use_enum = False
        if kind == "upper-modified" and polyhedral:
            try:
                use_enum = _enum_geometry(space, n)[2] <= cfg.enum_budget
            except UnsupportedNormError:  # pragma: no cover - polyhedral guard
                use_enum = False
        method = "enumerate" if use_enum else "multistart"
    if method == "enumerate":
        return enumerate_extreme(space, n, kind=kind, cfg=cfg)

    sgn = _sign(kind)
    seeds = seeded_candidates(space, n)
    pool = []
    for seed in seeds:
        t = _project_tuple(space, seed, kind)
        pool.append((evaluate_cn(space, t), t))

    if method == "seeds":
        _, best_val, best_t = _merge_pool(pool, sgn)
        return ConstantEstimate(
            kind=kind,
            value=evaluate_cn(space, best_t),
            certificate=best_t,
            method="seeded-candidates-only",
            bound_status="lower-bound-of-sup" if sgn > 0 else "upper-bound-of-inf",
            restarts_used=0,
            iterations_total=len(pool),
            seed=cfg.seed,
        )

    total = max(cfg.restarts, len(seeds))
    children = np.random.SeedSequence(
        entropy=(int(cfg.seed) & 0xFFFFFFFFFFFFFFFF, _KIND_STREAM[kind])
    ).spawn(total)
    smooth = not polyhedral

    def task(i):
        start = seeds[i] if i < len(seeds) else None
        return _one_restart(space, n, kind, sgn, cfg, smooth, children[i], start)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(task, range(total)))
    else:
        results = [task(i) for i in range(total)]

    iterations = sum(r[2] for r in results)
    pool.extend((val, t) for val, t, _ in results)
    _, best_val, best_t = _merge_pool(pool, sgn)

    return ConstantEstimate(
        kind=kind,
        value=evaluate_cn(space, best_t),
        certificate=best_t,
        method="multistart-gradient",
        bound_status="lower-bound-of-sup" if sgn > 0 else "upper-bound-of-inf",
        restarts_used=total,
        iterations_total=iterations + len(seeds),
        seed=cfg.seed,
    )
