"""Identity checks: each computes both sides of one equation by
independent routes and reports the worst residual.

The 4-D checks (wigner-from-matel, wigner-decomp) use an auxiliary
lattice with fixed spacing and a window that grows with the node count,
so refinement runs shrink the dominant truncation error.  All sampling
is seeded; identical config yields identical reports.
"""

import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, PhaseSpaceFn, omega_matrix, symplectic_form, symplectic_fourier
from .multiindex import as_index, binom, box, monomial, order, sub
from .seminorms import seminorm
from .states import (
    as_mixed,
    displaced_overlaps,
    pure_overlap,
    random_pure_state,
    vacuum_state,
)
from .transforms import (
    MatelSampler,
    husimi,
    matel,
    momentum_density,
    momentum_marginal,
    quasichar,
    twisted_convolution,
    twisted_convolution_grid,
    wigner,
    wigner_pointwise,
)

DEFAULT_TOLERANCES = {
    "duality": 1e-6,
    "trace": 1e-7,
    "overlap": 1e-7,
    "husimi": 1e-6,
    "cauchy-schwarz": 1e-9,
    "offdiag": 1e-7,
    "reproducing": 1e-5,
    "wigner-from-matel": 2e-3,
    "wigner-decomp": 5e-3,
    "marginal": 1e-8,
    "marginal-pointwise": 5e-3,
    "twisted-expansion": 1e-5,
}

FOUR_D_SPACING = 0.4
FOUR_D_NODES = 48


@dataclass(frozen=True)
class VerifyReport:
    name: str
    residual: float
    tolerance: float
    samples: int
    n_points: int
    half_extent: float
    seed: int
    info: dict = field(default_factory=dict)

    @property
    def passed(self):
        return bool(self.residual <= self.tolerance)

    def row(self):
        return (
            f"{self.name},{self.residual:.17g},{self.tolerance:.17g},"
            f"{self.samples},{int(self.passed)},{self.n_points},"
            f"{self.half_extent:.17g},{self.seed}"
        )


CSV_HEADER = "name,residual,tolerance,samples,passed,N,L,seed"


def check_seed(name, base_seed):
    """Stable per-check seed; crc32 keeps it independent of hash salting."""
    return (zlib.crc32(name.encode()) ^ (base_seed * 0x9E3779B1)) & 0x7FFFFFFF


def _default_grid():
    return Grid(2, 256, 12.0)


def suggest_grid(state, base_n=256, base_l=12.0):
    """Grid containing the state: default box unless its extent is larger."""
    rho = as_mixed(state)
    need = rho.extent() + 6.0
    if not np.isfinite(need) or need <= base_l:
        return Grid(2 * rho.n, base_n, base_l)
    half = 4.0 * np.ceil(need / 4.0)
    n_pts = base_n
    while n_pts * base_l < base_n * half:
        n_pts *= 2
    return Grid(2 * rho.n, n_pts, half)


def _report(name, residual, tol, samples, grid, seed, info=None):
    return VerifyReport(
        name,
        float(residual),
        float(tol),
        int(samples),
        grid.n_points if grid is not None else 0,
        float(grid.half_extent) if grid is not None else 0.0,
        seed,
        info or {},
    )


# ---------------------------------------------------------------------------
# grid-route identity checks


def check_duality(state, grid=None, tol=None, seed=0):
    """wigner(rho) against the symplectic Fourier transform of quasichar."""
    grid = grid or _default_grid()
    tol = DEFAULT_TOLERANCES["duality"] if tol is None else tol
    w_fn = wigner(state, grid)
    x_fn = quasichar(state, grid, cross_check=False)
    dual = symplectic_fourier(x_fn, "forward")
    mask = grid.interior_mask()
    resid = np.abs(dual.values - w_fn.values)[mask].max()
    return _report("duality", resid, tol, int(mask.sum()), grid, seed)


def check_trace(state, chi=None, grid=None, tol=None, seed=0):
    """quadrature(W) and (2pi)^{-n} quadrature(Q) against trace rho."""
    grid = grid or _default_grid()
    tol = DEFAULT_TOLERANCES["trace"] if tol is None else tol
    rho = as_mixed(state)
    chi = chi or vacuum_state(rho.n)
    tr = rho.trace()
    w_fn = wigner(rho, grid)
    q_fn = husimi(rho, chi, grid, cross_check=False)
    scale = (2.0 * np.pi) ** rho.n
    resid = max(
        abs(grid.quadrature(w_fn.values) - tr),
        abs(grid.quadrature(q_fn.values) / scale - tr),
    )
    return _report("trace", resid, tol, 2, grid, seed)


def check_overlap(state, grid=None, tol=None, seed=0, n_partners=3):
    """tr[rho eta] = (2pi)^n int W_rho W_eta for random partner states."""
    grid = grid or _default_grid()
    tol = DEFAULT_TOLERANCES["overlap"] if tol is None else tol
    rho = as_mixed(state)
    rng = np.random.default_rng(seed)
    w_rho = wigner(rho, grid)
    resid = 0.0
    for _ in range(n_partners):
        eta = random_pure_state(rng)
        closed = sum(
            w * abs(pure_overlap(ps, eta)) ** 2
            for w, ps in zip(rho.weights, rho.pure_states)
        )
        w_eta = wigner(eta, grid)
        quad = (2.0 * np.pi) ** rho.n * grid.quadrature(
            w_rho.values * w_eta.values
        )
        resid = max(resid, abs(closed - quad))
    return _report("overlap", resid, tol, n_partners, grid, seed)


def check_husimi(state, chi=None, grid=None, tol=None, seed=0, n_samples=40):
    """Convolution-route Husimi against direct matrix elements."""
    grid = grid or _default_grid()
    tol = DEFAULT_TOLERANCES["husimi"] if tol is None else tol
    rho = as_mixed(state)
    chi = chi or vacuum_state(rho.n)
    q_fn = husimi(rho, chi, grid, cross_check=False)
    rng = np.random.default_rng(seed)
    idx = rng.integers(
        grid.n_points // 4, 3 * grid.n_points // 4, (n_samples, grid.dim)
    )
    pts = -grid.half_extent + grid.spacing * idx
    direct = matel(rho, chi, pts, pts).real
    grid_vals = q_fn.values[tuple(idx[:, i] for i in range(grid.dim))]
    resid = np.abs(grid_vals - direct).max()
    return _report("husimi", resid, tol, n_samples, grid, seed)


def check_cauchy_schwarz(state, chi=None, grid=None, tol=None, seed=0, n_pairs=1000):
    """|M(a,b)|^2 <= Q(a)Q(b); residual is the worst constraint violation."""
    tol = DEFAULT_TOLERANCES["cauchy-schwarz"] if tol is None else tol
    rho = as_mixed(state)
    chi = chi or vacuum_state(rho.n)
    rng = np.random.default_rng(seed)
    sampler = MatelSampler(rho, chi)
    pts = rng.uniform(-2.0, 2.0, (n_pairs, 2, 2 * rho.n))
    resid = 0.0
    for alpha, beta in pts:
        m2 = abs(sampler(alpha, beta)) ** 2
        q_ab = sampler(alpha, alpha).real * sampler(beta, beta).real
        if q_ab > 0:
            resid = max(resid, m2 / q_ab - 1.0)
        else:
            resid = max(resid, m2)
        # equality case at alpha = beta
    for alpha, _ in pts[:20]:
        m2 = abs(sampler(alpha, alpha)) ** 2
        q2 = sampler(alpha, alpha).real ** 2
        resid = max(resid, abs(m2 / q2 - 1.0) if q2 > 0 else m2)
    resid = max(resid, 0.0)
    return _report("cauchy-schwarz", resid, tol, n_pairs, None, seed)


def _offdiag_direct(chi, alpha, beta, gamma, n_nodes=16384):
    """Independent route: quadrature of the partial Fourier transform of
    the rank-one kernel chi_alpha(x) conj(chi_beta(y))."""
    chi_a = chi.displaced(alpha)
    chi_b = chi.displaced(beta)
    y_half = 2.0 * max(chi_a.reach(), chi_b.reach()) + 2.0
    step = 2.0 * y_half / n_nodes
    ys = -y_half + step * np.arange(n_nodes)
    x, p = gamma
    va = chi_a.evaluate((x - 0.5 * ys)[:, None])
    vb = chi_b.evaluate((x + 0.5 * ys)[:, None])
    return step / (2.0 * np.pi) * (np.exp(1j * p * ys) * va * np.conj(vb)).sum()


def check_offdiag(chi=None, tol=None, seed=0, n_triples=50):
    """Closed-form off-diagonal Wigner values against direct quadrature."""
    from .transforms import offdiag_wigner

    tol = DEFAULT_TOLERANCES["offdiag"] if tol is None else tol
    chi = chi or vacuum_state(1)
    rng = np.random.default_rng(seed)
    resid = 0.0
    for _ in range(n_triples):
        alpha = rng.uniform(-1.5, 1.5, 2)
        beta = rng.uniform(-1.5, 1.5, 2)
        gamma = rng.uniform(-2.0, 2.0, 2)
        closed = offdiag_wigner(chi, alpha, beta, gamma)
        direct = _offdiag_direct(chi, alpha, beta, gamma)
        resid = max(resid, abs(closed - direct))
    return _report("offdiag", resid, tol, n_triples, None, seed)


# ---------------------------------------------------------------------------
# reproducing formula (one-sided form, both slots)


def _coherent_overlaps(chi, fixed, mesh):
    """<chi_fixed | chi_m> for every mesh point m."""
    return np.conj(displaced_overlaps(chi, mesh, chi.displaced(fixed)))


def check_reproducing(
    state, chi=None, samples=None, tol=None, seed=0, spacing=0.5, half=12.0
):
    """M(a,b) against the coherent-resolution quadrature in each slot."""
    tol = DEFAULT_TOLERANCES["reproducing"] if tol is None else tol
    rho = as_mixed(state)
    if rho.n != 1:
        raise ValueError("reproducing check implemented for n=1")
    chi = chi or vacuum_state(1)
    rng = np.random.default_rng(seed)
    if samples is None:
        samples = list(rng.uniform(-1.5, 1.5, (10, 2, 2)))
    n_nodes = int(round(2.0 * half / spacing))
    axis = -half + spacing * np.arange(n_nodes)
    mesh = np.stack(np.meshgrid(axis, axis, indexing="ij"), -1).reshape(-1, 2)
    cell = spacing**2
    resid = 0.0
    for alpha, beta in samples:
        direct = matel(rho, chi, alpha, beta)
        m_mesh_beta = matel(rho, chi, mesh, np.asarray(beta))
        lhs_a = cell / (2.0 * np.pi) * (
            _coherent_overlaps(chi, alpha, mesh) * m_mesh_beta
        ).sum()
        m_alpha_mesh = matel(rho, chi, np.asarray(alpha), mesh)
        lhs_b = cell / (2.0 * np.pi) * (
            m_alpha_mesh * np.conj(_coherent_overlaps(chi, beta, mesh))
        ).sum()
        resid = max(resid, abs(lhs_a - direct), abs(lhs_b - direct))
    return _report(
        "reproducing", resid, tol, len(samples), None, seed,
        {"spacing": spacing, "half": half},
    )


# ---------------------------------------------------------------------------
# 4-D identity checks (n = 1)


def _four_d_points(grid):
    steps = np.array(
        [[0, 0], [10, 0], [0, 10], [-10, 10], [10, 10], [-8, -4], [4, -12], [16, 8]]
    )
    return grid.spacing * steps


def _grid_values_at(fn, points):
    g = fn.grid
    idx = np.rint((points + g.half_extent) / g.spacing).astype(int)
    return fn.values[tuple(idx[..., i] for i in range(g.dim))]


def check_wigner_from_matel(
    state, chi=None, points=None, grid=None, tol=None, seed=0, n_nodes=FOUR_D_NODES
):
    """W(alpha) from the doubled-phase-space matrix-element integral."""
    tol = DEFAULT_TOLERANCES["wigner-from-matel"] if tol is None else tol
    rho = as_mixed(state)
    if rho.n != 1:
        raise ValueError("4-D checks implemented for n=1")
    chi = chi or vacuum_state(1)
    grid = grid or _default_grid()
    if points is None:
        points = _four_d_points(grid)
    if len(points) > 8:
        raise ValueError("at most 8 sample points")
    s = FOUR_D_SPACING
    axis = s * (np.arange(n_nodes) - n_nodes // 2)
    half_axis = 0.5 * s * (np.arange(3 * n_nodes) - 3 * n_nodes // 2)
    u_mesh = np.stack(
        np.meshgrid(half_axis, half_axis, indexing="ij"), -1
    )
    f_half = [
        displaced_overlaps(chi, u_mesh, ps) for ps in rho.pure_states
    ]
    weights = np.asarray(rho.weights)
    g_vals = np.empty((n_nodes, n_nodes), dtype=complex)
    for mx in range(n_nodes):
        for mp in range(n_nodes):
            col = np.zeros((n_nodes, n_nodes), dtype=complex)
            for w, f in zip(weights, f_half):
                left = f[
                    n_nodes - mx : 3 * n_nodes - mx : 2,
                    n_nodes - mp : 3 * n_nodes - mp : 2,
                ]
                right = f[mx : mx + 2 * n_nodes : 2, mp : mp + 2 * n_nodes : 2]
                col += w * left * np.conj(right)
            vx = np.exp(0.5j * axis * axis[mp])
            vp = np.exp(-0.5j * axis * axis[mx])
            g_vals[mx, mp] = s * s * (vx @ col @ vp)
    w_ref = wigner(rho, grid)
    resid = 0.0
    for pt in np.asarray(points, dtype=float):
        wx = np.exp(1j * pt[1] * axis)
        wp = np.exp(-1j * pt[0] * axis)
        val = s * s / (2.0 * np.pi) ** 3 * (wx @ g_vals @ wp)
        ref = _grid_values_at(w_ref, pt)
        resid = max(resid, abs(val - ref))
    return _report(
        "wigner-from-matel", resid, tol, len(points), grid, seed,
        {"nodes": n_nodes, "spacing": s},
    )


def check_wigner_decomp(
    state, chi=None, points=None, grid=None, tol=None, seed=0, n_nodes=FOUR_D_NODES
):
    """W(gamma) from the off-diagonal decomposition over coherent pairs."""
    from .transforms import gaussian_atom_wigner

    tol = DEFAULT_TOLERANCES["wigner-decomp"] if tol is None else tol
    rho = as_mixed(state)
    if rho.n != 1:
        raise ValueError("4-D checks implemented for n=1")
    chi = chi or vacuum_state(1)
    w_chi_eval = gaussian_atom_wigner(chi)
    if w_chi_eval is None:
        raise ValueError("decomposition check needs a single-Gaussian chi")
    grid = grid or _default_grid()
    if points is None:
        points = _four_d_points(grid)
    if len(points) > 8:
        raise ValueError("at most 8 sample points")
    s = FOUR_D_SPACING
    axis = s * (np.arange(n_nodes) - n_nodes // 2)
    mesh = np.stack(np.meshgrid(axis, axis, indexing="ij"), -1).reshape(-1, 2)
    f_mesh = np.stack(
        [displaced_overlaps(chi, mesh, ps) for ps in rho.pure_states]
    )
    weights = np.asarray(rho.weights)
    w_ref = wigner(rho, grid)
    points = np.asarray(points, dtype=float)
    totals = np.zeros(len(points), dtype=complex)
    chunk = max(1, 2_000_000 // mesh.shape[0])
    for start in range(0, mesh.shape[0], chunk):
        rows = mesh[start : start + chunk]
        m_chunk = np.einsum(
            "j,ja,jb->ab", weights, f_mesh[:, start : start + chunk],
            np.conj(f_mesh),
        )
        abar = 0.5 * (rows[:, None, :] + mesh[None, :, :])
        delta = rows[:, None, :] - mesh[None, :, :]
        for k, gamma in enumerate(points):
            phase = np.exp(
                1j * symplectic_form(gamma[None, None, :] - 0.5 * abar, delta)
            )
            totals[k] += (phase * w_chi_eval(gamma[None, None, :] - abar) * m_chunk).sum()
    totals *= s**4 / (2.0 * np.pi) ** 2
    refs = _grid_values_at(w_ref, points)
    resid = float(np.abs(totals - refs).max())
    return _report(
        "wigner-decomp", resid, tol, len(points), grid, seed,
        {"nodes": n_nodes, "spacing": s},
    )


# ---------------------------------------------------------------------------
# marginals


def check_marginal(state, grid=None, tol=None, seed=0):
    """Momentum marginal of W against the weighted momentum densities."""
    grid = grid or _default_grid()
    tol = DEFAULT_TOLERANCES["marginal"] if tol is None else tol
    rho = as_mixed(state)
    if rho.n != 1:
        raise ValueError("marginal check implemented for n=1")
    w_fn = wigner(rho, grid)
    p_axis, marg = momentum_marginal(w_fn)
    dens = np.zeros_like(marg)
    for w, ps in zip(rho.weights, rho.pure_states):
        dens += w * momentum_density(ps, p_axis)
    resid = np.abs(marg - dens).max()
    resid = max(resid, abs(grid.spacing * marg.sum() - rho.trace()))
    return _report("marginal", resid, tol, p_axis.size, grid, seed)


def check_marginal_pointwise(state, tol=None, seed=0, p_max=10.0, n_p=41, step=0.005):
    """Marginal via direct pointwise Wigner quadrature (non-smooth states).

    The x-quadrature uses midpoint cells aligned to half-integers so
    indicator-type supports are integrated without edge bias.
    """
    tol = DEFAULT_TOLERANCES["marginal-pointwise"] if tol is None else tol
    rho = as_mixed(state)
    if rho.n != 1:
        raise ValueError("marginal check implemented for n=1")
    reach = rho.reach()
    xs = -reach + step * (np.arange(int(round(2 * reach / step))) + 0.5)
    ps = np.linspace(-p_max, p_max, n_p)
    pts = np.stack(np.meshgrid(xs, ps, indexing="ij"), -1)
    w_vals = wigner_pointwise(rho, pts.reshape(-1, 2)).real.reshape(xs.size, ps.size)
    marg = step * w_vals.sum(axis=0)
    dens = np.zeros_like(marg)
    for w, ps_state in zip(rho.weights, rho.pure_states):
        dens += w * momentum_density(ps_state, ps, n_nodes=32768)
    resid = np.abs(marg - dens).max()
    return _report("marginal-pointwise", resid, tol, ps.size, None, seed)


# ---------------------------------------------------------------------------
# twisted-convolution derivative expansion


def _weighted_g_values(g_fn, form, power):
    axis = g_fn.grid.axis()
    mesh = np.stack(
        np.meshgrid(*(axis,) * g_fn.grid.dim, indexing="ij"), -1
    )
    rotated = np.tensordot(mesh, form.T, axes=(-1, 0))
    weight = np.ones(mesh.shape[:-1], dtype=complex)
    for k, pw in enumerate(power):
        if pw:
            weight = weight * (1j * rotated[..., k]) ** pw
    return PhaseSpaceFn(g_fn.grid, weight * g_fn.values, "weighted")


def check_twisted_expansion(
    state, chi=None, tol=None, seed=0, orders=((1, 0), (0, 1), (2, 0), (1, 1)),
    grid=None, n_samples=25,
):
    """d^a of a twisted convolution against its binomial expansion."""
    from .grid import spectral_derivative

    tol = DEFAULT_TOLERANCES["twisted-expansion"] if tol is None else tol
    rho = as_mixed(state)
    if rho.n != 1:
        raise ValueError("twisted expansion check implemented for n=1")
    chi = chi or vacuum_state(1)
    grid = grid or Grid(2, 64, 8.0)
    form = 2.0 * omega_matrix(1)
    f_fn = wigner(as_mixed(chi), grid)
    g_fn = wigner(rho, grid)
    conv = twisted_convolution_grid(f_fn, g_fn, form)
    rng = np.random.default_rng(seed)
    idx = rng.integers(grid.n_points // 4, 3 * grid.n_points // 4, (n_samples, 2))
    pts = -grid.half_extent + grid.spacing * idx
    resid = 0.0
    for a in orders:
        a = as_index(a)
        lhs = _grid_values_at(spectral_derivative(conv, a), pts)
        rhs = np.zeros(len(pts), dtype=complex)
        for a_sub in box(a):
            extra = sub(a, a_sub)
            coeff = binom(a, a_sub) * 2.0 ** (-order(extra))
            f_deriv = spectral_derivative(f_fn, a_sub)
            g_weighted = _weighted_g_values(g_fn, form, extra)
            rhs += coeff * twisted_convolution(f_deriv, g_weighted, form, pts)
        resid = max(resid, float(np.abs(lhs - rhs).max()))
    return _report(
        "twisted-expansion", resid, tol, n_samples * len(orders), grid, seed
    )


# ---------------------------------------------------------------------------
# counterexample diagnostics


def heavy_tail_first_seminorms(k_max=6, sweep_step=0.05):
    """sup_x |x W(x, 0)| for the heavy-tail family, K = 1..k_max.

    The supremum over p sits at p = 0 for these states, so a 1-D sweep
    suffices and works far outside any fixed grid box.
    """
    from .states import demo_state

    values = []
    for k in range(1, k_max + 1):
        rho = demo_state("heavy_tail", K=k)
        hi = float(k**3) + 4.0
        xs = np.arange(-4.0, hi, sweep_step)
        pts = np.stack([xs, np.zeros_like(xs)], -1)
        vals = np.abs(xs * wigner_pointwise(rho, pts).real)
        i = int(np.argmax(vals))
        best, center = float(vals[i]), float(xs[i])
        width = sweep_step
        for _ in range(5):
            local = np.linspace(center - width, center + width, 17)
            lv = np.abs(
                local * wigner_pointwise(
                    rho, np.stack([local, np.zeros_like(local)], -1)
                ).real
            )
            j = int(np.argmax(lv))
            if lv[j] > best:
                best, center = float(lv[j]), float(local[j])
            width /= 3.0
        values.append(best)
    return values


def check_heavy_tail_trend(k_max=6, seed=0):
    values = heavy_tail_first_seminorms(k_max)
    diffs = np.diff(values)
    resid = float(max(0.0, -diffs.min()))
    return VerifyReport(
        "heavy-tail-trend", resid, 0.0, k_max, 0, 0.0, seed,
        {f"K={k+1}": v for k, v in enumerate(values)},
    )


def plateau_decay_exponent(p_lo=4.0, p_hi=10.0, n_p=13, n_x=401):
    """Fitted polynomial decay exponent of sup_x |W(x, p)| on [p_lo, p_hi]."""
    from .states import demo_state

    rho = demo_state("plateau")
    ps = np.geomspace(p_lo, p_hi, n_p)
    xs = np.linspace(0.0025, 0.9975, n_x)
    pts = np.stack(np.meshgrid(xs, ps, indexing="ij"), -1)
    vals = np.abs(wigner_pointwise(rho, pts.reshape(-1, 2)).real)
    sups = vals.reshape(n_x, n_p).max(axis=0)
    slope = np.polyfit(np.log(ps), np.log(sups), 1)[0]
    return float(-slope)


def check_plateau_decay(seed=0):
    exponent = plateau_decay_exponent()
    resid = float(max(0.0, 0.5 - exponent, exponent - 2.0))
    return VerifyReport(
        "plateau-decay", resid, 0.0, 13, 0, 0.0, seed, {"exponent": exponent}
    )


# ---------------------------------------------------------------------------
# suite driver


def worker_count():
    env = os.environ.get("PHASESPACE_THREADS", "0")
    try:
        n_workers = int(env)
    except ValueError:
        n_workers = 0
    if n_workers <= 0:
        n_workers = os.cpu_count() or 1
    return n_workers


def suite_plan(state, demo=None):
    """Names of the checks applicable to this state."""
    rho = as_mixed(state)
    if not rho.is_analytic:
        return ["marginal-pointwise", "plateau-decay"]
    plan = ["duality", "trace", "husimi", "cauchy-schwarz", "marginal"]
    if rho.extent() + 6.0 <= 12.0:
        plan += [
            "overlap",
            "offdiag",
            "reproducing",
            "wigner-from-matel",
            "wigner-decomp",
            "twisted-expansion",
        ]
    if demo == "heavy_tail":
        plan.append("heavy-tail-trend")
    return plan


def run_suite(state, chi=None, config=None, demo=None):
    """Run every applicable check concurrently; never abort on failure.

    Results are returned in plan order regardless of completion order,
    so identical inputs yield identical report tables.
    """
    rho = as_mixed(state)
    chi = chi or vacuum_state(rho.n)
    grid_n = getattr(config, "grid_n", 256)
    grid_l = getattr(config, "grid_l", 12.0)
    seed = getattr(config, "seed", 0)
    tols = dict(DEFAULT_TOLERANCES)
    tols.update(getattr(config, "tolerances", {}) or {})
    grid = suggest_grid(rho, grid_n, grid_l)

    def make_job(name):
        tol = tols.get(name)
        job_seed = check_seed(name, seed)
        table = {
            "duality": lambda: check_duality(rho, grid, tol, job_seed),
            "trace": lambda: check_trace(rho, chi, grid, tol, job_seed),
            "husimi": lambda: check_husimi(rho, chi, grid, tol, job_seed),
            "cauchy-schwarz": lambda: check_cauchy_schwarz(
                rho, chi, None, tol, job_seed
            ),
            "marginal": lambda: check_marginal(rho, grid, tol, job_seed),
            "marginal-pointwise": lambda: check_marginal_pointwise(
                rho, tol, job_seed
            ),
            "overlap": lambda: check_overlap(rho, grid, tol, job_seed),
            "offdiag": lambda: check_offdiag(chi, tol, job_seed),
            "reproducing": lambda: check_reproducing(
                rho, chi, None, tol, job_seed
            ),
            "wigner-from-matel": lambda: check_wigner_from_matel(
                rho, chi, None, grid, tol, job_seed
            ),
            "wigner-decomp": lambda: check_wigner_decomp(
                rho, chi, None, grid, tol, job_seed
            ),
            "twisted-expansion": lambda: check_twisted_expansion(
                rho, chi, tol, job_seed
            ),
            "plateau-decay": lambda: check_plateau_decay(job_seed),
            "heavy-tail-trend": lambda: check_heavy_tail_trend(6, job_seed),
        }
        return table[name]

    def run_job(job, name, job_seed):
        try:
            return job()
        except Exception as exc:  # recorded, never aborts the suite
            return VerifyReport(
                name, np.inf, 0.0, 0, 0, 0.0, job_seed, {"error": str(exc)}
            )

    plan = suite_plan(rho, demo)
    n_workers = getattr(config, "threads", 0) or worker_count()
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        futures = [
            pool.submit(run_job, make_job(name), name, check_seed(name, seed))
            for name in plan
        ]
        return [f.result() for f in futures]
