"""Representation maps between states and phase-space functions.

All grid transforms evaluate state kernels analytically at the exact
sample points (never by interpolation) and integrate with rectangle
sums, which are spectrally accurate for box-contained smooth states.
Momentum-side output is needed at the grid's own lattice, which is not
the FFT's natural frequency lattice, so partial transforms use
semidiscrete DFT matrices like the grid module does.
"""

import numpy as np

from .grid import (
    GridResolutionError,
    PhaseSpaceFn,
    symplectic_form,
    symplectic_fourier,
)
from .states import as_mixed, displaced_overlaps

QUASICHAR_CROSS_TOL = 1e-6
HUSIMI_CROSS_TOL = 1e-6
HUSIMI_NEGATIVITY_FLOOR = -1e-7


def _aux_lattice(grid):
    """Integration lattice: 2N nodes with grid spacing on [-2L, 2L)."""
    h = grid.spacing
    return -2.0 * grid.half_extent + h * np.arange(2 * grid.n_points)


def _mesh(axis, n):
    pts = np.meshgrid(*(axis,) * n, indexing="ij")
    return np.stack(pts, axis=-1).reshape(-1, n)


def _rep_on_grid(rho, grid, rep):
    """Shared Wigner/quasicharacteristic partial transform.

    wigner rows r: integral over y of e^{i p.y} K(r - y/2, r + y/2),
    quasichar rows r: integral over u of e^{i p.u} K(u - r/2, u + r/2).
    """
    n = grid.dim // 2
    axis = grid.axis()
    h = grid.spacing
    aux = _aux_lattice(grid)
    rows = _mesh(axis, n)
    nodes = _mesh(aux, n)
    kernel_mat = h * np.exp(1j * np.outer(axis, aux))
    out = np.empty((rows.shape[0],) + (grid.n_points,) * n, dtype=complex)
    chunk = max(1, 4_000_000 // nodes.shape[0])
    for start in range(0, rows.shape[0], chunk):
        r = rows[start : start + chunk, None, :]
        y = nodes[None, :, :]
        if rep == "wigner":
            kv = rho.kernel(r - 0.5 * y, r + 0.5 * y)
        else:
            kv = rho.kernel(y - 0.5 * r, y + 0.5 * r)
        kv = kv.reshape((r.shape[0],) + (aux.size,) * n)
        for _ in range(n):
            # transform the leading node axis against the momentum lattice
            kv = np.tensordot(kv, kernel_mat, axes=(1, 1))
        out[start : start + chunk] = kv
    return out.reshape((grid.n_points,) * (2 * n))


def wigner(state, grid, reality_tol=1e-10):
    """Wigner function (2pi)^{-n} int e^{i a_p.y} K(a_x - y/2, a_x + y/2) dy."""
    rho = as_mixed(state)
    if grid.kind != "phase" or grid.dim != 2 * rho.n:
        raise ValueError("grid must be phase-space with dim 2n")
    vals = _rep_on_grid(rho, grid, "wigner") / (2.0 * np.pi) ** rho.n
    tol = reality_tol if rho.is_analytic else max(reality_tol, 0.05)
    resid = np.abs(vals.imag).max()
    if resid > tol * max(1.0, np.abs(vals.real).max()):
        raise GridResolutionError(
            f"Wigner imaginary residue {resid:.2e} exceeds tolerance"
        )
    return PhaseSpaceFn(grid, vals.real.copy(), "wigner")


def quasichar(state, grid, cross_check=True):
    """tr[rho D_xi] on the grid, cross-checked against the dual route."""
    rho = as_mixed(state)
    if grid.kind != "phase" or grid.dim != 2 * rho.n:
        raise ValueError("grid must be phase-space with dim 2n")
    vals = _rep_on_grid(rho, grid, "quasichar")
    fn = PhaseSpaceFn(grid, vals, "quasichar")
    if cross_check:
        dual = symplectic_fourier(wigner(state, grid), "inverse")
        mask = grid.interior_mask()
        resid = np.abs(vals - dual.values)[mask].max()
        if resid > QUASICHAR_CROSS_TOL:
            raise GridResolutionError(
                f"quasicharacteristic dual-route residual {resid:.2e} > "
                f"{QUASICHAR_CROSS_TOL:.0e}; refine the grid or contain the state"
            )
    return fn


def _reflect(values):
    """values(alpha) -> values(-alpha) on the [-L, L) lattice."""
    out = values
    for ax in range(values.ndim):
        out = np.roll(np.flip(out, axis=ax), 1, axis=ax)
    return out


def _interior_samples(grid, count=9):
    """A few well-interior lattice points: origin plus a small ring."""
    radius = min(2.0, 0.25 * grid.half_extent)
    angles = 2.0 * np.pi * np.arange(count - 1) / (count - 1)
    ring = radius * np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    pts = np.vstack([np.zeros((1, 2)), ring])
    n = grid.dim // 2
    full = np.zeros((pts.shape[0], grid.dim))
    full[:, 0] = pts[:, 0]
    full[:, n] = pts[:, 1]
    idx = np.rint((full + grid.half_extent) / grid.spacing)
    return -grid.half_extent + grid.spacing * idx


def husimi(state, chi, grid, cross_check=True):
    """Q(alpha) = <chi_alpha| rho |chi_alpha> via (2pi)^n (W_rho * W_chi^-)."""
    rho = as_mixed(state)
    if not chi.is_analytic:
        raise ValueError("reference chi must be an analytic state")
    n = rho.n
    w_rho = wigner(rho, grid).values
    w_chi = wigner(as_mixed(chi), grid).values
    h = grid.spacing
    conv = np.fft.fftn(np.fft.ifftshift(w_rho)) * np.fft.fftn(
        np.fft.ifftshift(_reflect(w_chi))
    )
    conv = np.fft.fftshift(np.fft.ifftn(conv)) * h**grid.dim
    vals = (2.0 * np.pi) ** n * conv.real
    low = vals.min()
    if low < HUSIMI_NEGATIVITY_FLOOR:
        raise GridResolutionError(
            f"Husimi negativity {low:.2e} signals truncation error"
        )
    fn = PhaseSpaceFn(grid, vals, "husimi")
    if cross_check:
        pts = _interior_samples(grid)
        direct = matel(rho, chi, pts, pts).real
        resid = np.abs(husimi_at(fn, pts) - direct).max()
        if resid > HUSIMI_CROSS_TOL:
            raise GridResolutionError(
                f"Husimi convolution vs direct residual {resid:.2e}"
            )
    return fn


def husimi_at(fn, points):
    """Read PhaseSpaceFn values at points that lie on the lattice."""
    g = fn.grid
    idx = np.rint((np.asarray(points) + g.half_extent) / g.spacing).astype(int)
    snapped = -g.half_extent + g.spacing * idx
    if np.abs(snapped - points).max() > 1e-9:
        raise ValueError("sample points must lie on the grid lattice")
    return fn.values[tuple(idx[..., i] for i in range(g.dim))]


def _displaced_overlaps_quadrature(chi, alphas, psi, n_nodes=8192):
    """<D_alpha chi | psi> by quadrature; n=1 pointwise fallback."""
    if chi.n != 1 or psi.n != 1:
        raise ValueError("quadrature matrix elements implemented for n=1")
    half = max(chi.reach() + float(np.abs(alphas).max(initial=0.0)), psi.reach())
    step = 2.0 * half / n_nodes
    ys = -half + step * np.arange(n_nodes)
    psi_vals = psi.evaluate(ys[:, None])
    alphas = np.asarray(alphas, dtype=float)
    flat = alphas.reshape(-1, 2)
    out = np.empty(flat.shape[0], dtype=complex)
    chunk = max(1, 2_000_000 // n_nodes)
    for start in range(0, flat.shape[0], chunk):
        a = flat[start : start + chunk]
        shifted = ys[None, :] - a[:, :1]
        chi_vals = chi.evaluate(shifted[..., None])
        disp = np.exp(1j * (ys[None, :] - 0.5 * a[:, :1]) * a[:, 1:2]) * chi_vals
        out[start : start + chunk] = step * (np.conj(disp) * psi_vals[None, :]).sum(1)
    return out.reshape(alphas.shape[:-1])


def matel(state, chi, alphas, betas):
    """M(alpha, beta) = <chi_alpha| rho |chi_beta>, batched and broadcast."""
    rho = as_mixed(state)
    if not chi.is_analytic:
        raise ValueError("reference chi must be an analytic state")
    alphas = np.asarray(alphas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    shape = np.broadcast_shapes(alphas.shape[:-1], betas.shape[:-1])
    out = np.zeros(shape, dtype=complex)
    for w, ps in zip(rho.weights, rho.pure_states):
        if w == 0.0:
            continue
        if ps.is_analytic:
            fa = displaced_overlaps(chi, alphas, ps)
            fb = displaced_overlaps(chi, betas, ps)
        else:
            fa = _displaced_overlaps_quadrature(chi, alphas, ps)
            fb = _displaced_overlaps_quadrature(chi, betas, ps)
        out = out + w * fa * np.conj(fb)
    return out if out.ndim else complex(out)


class MatelSampler:
    """Lazy M(alpha, beta) evaluation with a per-point overlap cache."""

    def __init__(self, state, chi):
        self.rho = as_mixed(state)
        self.chi = chi
        self._cache = {}

    def _overlaps(self, point):
        key = tuple(float(v) for v in point)
        got = self._cache.get(key)
        if got is None:
            pt = np.asarray(key)
            got = tuple(
                displaced_overlaps(self.chi, pt, ps)
                if ps.is_analytic
                else complex(_displaced_overlaps_quadrature(self.chi, pt[None], ps)[0])
                for ps in self.rho.pure_states
            )
            self._cache[key] = got
        return got

    def __call__(self, alpha, beta):
        fa = self._overlaps(alpha)
        fb = self._overlaps(beta)
        return complex(
            sum(
                w * fa[j] * np.conj(fb[j])
                for j, w in enumerate(self.rho.weights)
                if w != 0.0
            )
        )


def wigner_pointwise(state, points, n_nodes=4096, y_half=None):
    """Direct quadrature of the Wigner integral at arbitrary points (n=1)."""
    rho = as_mixed(state)
    if rho.n != 1:
        raise ValueError("pointwise Wigner implemented for n=1")
    pts = np.asarray(points, dtype=float)
    flat = pts.reshape(-1, 2)
    if y_half is None:
        y_half = 2.0 * rho.reach() + 2.0
    step = 2.0 * y_half / n_nodes
    ys = -y_half + step * np.arange(n_nodes)
    out = np.empty(flat.shape[0], dtype=complex)
    chunk = max(1, 2_000_000 // n_nodes)
    for start in range(0, flat.shape[0], chunk):
        blk = flat[start : start + chunk]
        x = blk[:, :1]
        p = blk[:, 1:2]
        kv = rho.kernel(
            (x - 0.5 * ys[None, :])[..., None], (x + 0.5 * ys[None, :])[..., None]
        )
        out[start : start + chunk] = (
            step / (2.0 * np.pi) * (np.exp(1j * p * ys[None, :]) * kv).sum(1)
        )
    return out.reshape(pts.shape[:-1])


def gaussian_atom_wigner(chi):
    """Closed-form Wigner evaluator when chi is a single m=0 atom, else None.

    For chi = c D_g phi_0 the Wigner function of |chi><chi| is
    |c|^2 pi^{-n} exp(-|u - g|^2).
    """
    if not getattr(chi, "is_analytic", False) or len(chi.atoms) != 1:
        return None
    atom = chi.atoms[0]
    if any(atom.m):
        return None
    weight = abs(atom.coeff) ** 2 / np.pi ** len(atom.m)
    center = np.asarray(atom.alpha, dtype=float)

    def evaluator(points):
        diff = np.asarray(points, dtype=float) - center
        return weight * np.exp(-(diff**2).sum(-1))

    return evaluator


def offdiag_wigner(chi, alpha, beta, gammas):
    """Wigner transform of |chi_alpha><chi_beta| at points gammas.

    Closed form: e^{i (gamma - abar/2) /\\ dalpha} W_chi(gamma - abar)
    with abar = (alpha+beta)/2 and dalpha = alpha - beta.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    gammas = np.asarray(gammas, dtype=float)
    abar = 0.5 * (alpha + beta)
    dalpha = alpha - beta
    phase = np.exp(1j * symplectic_form(gammas - 0.5 * abar, dalpha))
    closed = gaussian_atom_wigner(chi)
    if closed is not None:
        base = closed(gammas - abar)
    else:
        base = wigner_pointwise(as_mixed(chi), gammas - abar).real
    return phase * base


def twisted_convolution(f, g, form, alphas, f_eval=None):
    """(f (x)_form g)(alpha) = int e^{i alpha.form.beta/2} f(alpha-beta) g(beta).

    f(alpha - beta) comes from `f_eval` when given (exact re-evaluation);
    otherwise alpha must lie on the lattice and shifted samples of f are
    used with zero padding outside the box.
    """
    gd = g.grid
    if f.grid != gd:
        raise ValueError("f and g must share a grid")
    form = np.asarray(form, dtype=float)
    if form.shape != (gd.dim, gd.dim) or np.abs(form + form.T).max() > 1e-12:
        raise ValueError("form must be an antisymmetric dim x dim matrix")
    alphas = np.asarray(alphas, dtype=float)
    flat = alphas.reshape(-1, gd.dim)
    beta = _mesh(gd.axis(), gd.dim)
    phase_arg = beta @ form.T  # row b -> form.b evaluated at mesh points
    gvals = np.asarray(g.values).reshape(-1)
    n_pts = gd.n_points
    if f_eval is None:
        pad = np.zeros((2 * n_pts,) * gd.dim, dtype=complex)
        pad[(slice(n_pts // 2, n_pts // 2 + n_pts),) * gd.dim] = f.values
        beta_idx = np.rint((beta + gd.half_extent) / gd.spacing).astype(int)
    out = np.empty(flat.shape[0], dtype=complex)
    for i, a in enumerate(flat):
        phases = np.exp(0.5j * phase_arg @ a)
        if f_eval is not None:
            fv = np.asarray(f_eval(a[None, :] - beta), dtype=complex)
        else:
            ai = np.rint((a + gd.half_extent) / gd.spacing).astype(int)
            if np.abs(-gd.half_extent + gd.spacing * ai - a).max() > 1e-9:
                raise ValueError(
                    "alpha off the lattice; pass f_eval for exact re-evaluation"
                )
            shift = ai[None, :] - beta_idx + n_pts
            fv = pad[tuple(shift[:, k] for k in range(gd.dim))]
        out[i] = (phases * fv * gvals).sum()
    return (gd.spacing**gd.dim) * out.reshape(alphas.shape[:-1])


def twisted_convolution_grid(f, g, form, f_eval=None):
    """Twisted convolution sampled at every lattice point."""
    pts = _mesh(f.grid.axis(), f.grid.dim)
    vals = twisted_convolution(f, g, form, pts, f_eval=f_eval)
    return PhaseSpaceFn(f.grid, vals.reshape(f.grid.shape()), "twisted-conv")


def momentum_marginal(fn):
    """h^n sum over position axes; returns (p lattice, marginal values)."""
    n = fn.grid.dim // 2
    marg = fn.grid.spacing**n * np.asarray(fn.values).real.sum(
        axis=tuple(range(n))
    )
    return fn.grid.axis(), marg


def momentum_density(psi, p_points, n_nodes=4096, half=None):
    """|psi_hat(p)|^2 by quadrature of the unitary Fourier transform (n=1)."""
    if psi.n != 1:
        raise ValueError("momentum density implemented for n=1")
    if half is None:
        half = psi.reach()
    step = 2.0 * half / n_nodes
    xs = -half + step * np.arange(n_nodes)
    vals = psi.evaluate(xs[:, None])
    p_points = np.asarray(p_points, dtype=float)
    hat = (
        step
        / np.sqrt(2.0 * np.pi)
        * np.exp(-1j * np.outer(p_points, xs)) @ vals
    )
    return (hat * np.conj(hat)).real
