"""Inequality evaluators: the matrix-element Cauchy-Schwarz bound, the
off-diagonal Wigner seminorm bounds (tight and loose variants), the main
seminorm bound, and its Husimi-route intermediate.

A BoundContext caches the grid functions and seminorm tables shared by
a sweep; lhs and rhs norms always come from the same grid so truncation
error largely cancels in the ratio.
"""

from dataclasses import dataclass

import numpy as np

from .grid import Grid
from .multiindex import (
    add,
    add_scalar,
    binom,
    box,
    monomial,
    order,
    scale,
    sub,
    swap_xp,
)
from .seminorms import (
    decay_norm_from_table,
    norm_sum_from_table,
    seminorm,
    seminorm_table,
)
from .states import as_mixed, vacuum_state
from .transforms import MatelSampler, husimi, offdiag_wigner, wigner

DEFAULT_TOL = 1e-6
CS_TOL = 1e-9


@dataclass(frozen=True)
class BoundReport:
    name: str
    indices: tuple
    lhs: float
    rhs: float
    tol: float = DEFAULT_TOL

    @property
    def ratio(self):
        if self.rhs == 0.0:
            return 0.0 if self.lhs == 0.0 else np.inf
        return self.lhs / self.rhs

    @property
    def passed(self):
        return bool(self.ratio <= 1.0 + self.tol)

    def row(self):
        """CSV record: a,b,lhs,rhs,ratio,pass (indices space-separated)."""
        idx = ",".join(
            '"' + " ".join(str(v) for v in part) + '"' for part in self.indices
        )
        return (
            f"{idx},{self.lhs:.17g},{self.rhs:.17g},"
            f"{self.ratio:.17g},{int(self.passed)}"
        )


def cauchy_schwarz_reports(state, chi, pairs):
    """|M(alpha,beta)|^2 <= Q(alpha) Q(beta), one report per pair."""
    sampler = MatelSampler(state, chi)
    reports = []
    for alpha, beta in pairs:
        m = sampler(alpha, beta)
        q_a = sampler(alpha, alpha).real
        q_b = sampler(beta, beta).real
        reports.append(
            BoundReport(
                "cauchy-schwarz",
                (tuple(alpha), tuple(beta)),
                abs(m) ** 2,
                q_a * q_b,
                CS_TOL,
            )
        )
    return reports


# ---------------------------------------------------------------------------
# off-diagonal Wigner seminorm bounds


def chi_seminorm_table(chi, a_max, b_max, grid=None, band=None):
    """Seminorm table of W_chi used by the off-diagonal bound formulas."""
    if grid is None:
        grid = Grid(2, 256, 12.0)
    w_chi = wigner(as_mixed(chi), grid)
    return seminorm_table(w_chi, a_max, b_max, band=band)


def offdiag_tight_rhs(table, a, b, alpha, beta):
    alpha = np.abs(np.asarray(alpha, dtype=float))
    beta = np.abs(np.asarray(beta, dtype=float))
    total = 0.0
    for c in box(b):
        w_bc = binom(b, c)
        for d in box(a):
            w_ad = w_bc * binom(a, d) * 2.0 ** (-order(d))
            w_chi = table[(sub(a, d), sub(b, c))]
            if w_chi == 0.0:
                continue
            for e in box(c):
                w_ce = w_ad * binom(c, e)
                for f in box(d):
                    g_alpha = add(swap_xp(e), f)
                    g_beta = add(sub(swap_xp(c), swap_xp(e)), sub(d, f))
                    total += (
                        w_ce
                        * binom(d, f)
                        * w_chi
                        * monomial(alpha, g_alpha)
                        * monomial(beta, g_beta)
                    )
    return float(total)


def offdiag_loose_rhs(table, a, b, alpha, beta):
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    reach = 1.0 + np.linalg.norm(alpha) + np.linalg.norm(beta)
    total_order = order(a) + order(b)
    return float(
        4.0**total_order
        * reach**total_order
        * norm_sum_from_table(table, a, b)
    )


def offdiag_bound_rhs(chi, a, b, alpha, beta, variant, table=None, grid=None):
    """Right-hand side of the chosen off-diagonal seminorm bound."""
    if table is None:
        table = chi_seminorm_table(chi, a, b, grid=grid)
    if variant == "tight":
        return offdiag_tight_rhs(table, a, b, alpha, beta)
    if variant == "loose":
        return offdiag_loose_rhs(table, a, b, alpha, beta)
    raise ValueError(f"unknown variant {variant!r}; use 'tight' or 'loose'")


def offdiag_grid_fn(chi, alpha, beta, grid):
    """Off-diagonal Wigner transform sampled on the grid via closed form."""
    from .grid import PhaseSpaceFn

    axis = grid.axis()
    mesh = np.stack(
        np.meshgrid(*(axis,) * grid.dim, indexing="ij"), axis=-1
    )
    vals = offdiag_wigner(chi, alpha, beta, mesh)
    return PhaseSpaceFn(grid, vals, "offdiag-wigner")


# ---------------------------------------------------------------------------
# main theorem bound and Husimi intermediate


class BoundContext:
    """Caches W_rho, W_chi, Q and their seminorm tables for one (rho, chi).

    max_total_order caps |a|+|b| of the sweep; the cached index boxes are
    sized so that every norm the bounds need is a table lookup.
    """

    def __init__(self, state, chi=None, grid=None, band=None, max_total_order=4):
        self.rho = as_mixed(state)
        self.chi = chi if chi is not None else vacuum_state(self.rho.n)
        self.grid = grid if grid is not None else Grid(2 * self.rho.n, 256, 12.0)
        self.band = band
        self.max_total_order = max_total_order
        self._cache = {}

    def _get(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    @property
    def dim(self):
        return self.grid.dim

    def w_rho(self):
        return self._get("w_rho", lambda: wigner(self.rho, self.grid))

    def w_chi(self):
        return self._get(
            "w_chi", lambda: wigner(as_mixed(self.chi), self.grid)
        )

    def q_rho(self):
        return self._get(
            "q", lambda: husimi(self.rho, self.chi, self.grid, cross_check=False)
        )

    def chi_table(self):
        cap = (self.max_total_order,) * self.dim
        return self._get(
            "chi_table",
            lambda: seminorm_table(self.w_chi(), cap, cap, band=self.band),
        )

    def chi_decay_table(self):
        cap = (2 * self.max_total_order + 6,) * self.dim
        zero = (0,) * self.dim
        return self._get(
            "chi_decay",
            lambda: seminorm_table(self.w_chi(), cap, zero, band=self.band),
        )

    def rho_decay_table(self):
        cap = (2 * self.max_total_order + 4,) * self.dim
        zero = (0,) * self.dim
        return self._get(
            "rho_decay",
            lambda: seminorm_table(self.w_rho(), cap, zero, band=self.band),
        )

    def q_decay_table(self):
        cap = (2 * self.max_total_order + 4,) * self.dim
        zero = (0,) * self.dim
        return self._get(
            "q_decay",
            lambda: seminorm_table(self.q_rho(), cap, zero, band=self.band),
        )

    def adopt_chi_tables(self, other):
        """Reuse another context's window-side caches in a sweep.

        Both contexts must hold the same chi object and matching grid
        geometry; the rho-side tables stay per-context.
        """
        if other.chi is not self.chi:
            raise ValueError("contexts must share the same chi object")
        if (
            other.grid.n_points != self.grid.n_points
            or other.grid.half_extent != self.grid.half_extent
            or other.grid.dim != self.grid.dim
            or other.band != self.band
            or other.max_total_order != self.max_total_order
        ):
            raise ValueError("contexts must share grid, band, and order cap")
        for key in ("w_chi", "chi_table", "chi_decay"):
            if key in other._cache:
                self._cache[key] = other._cache[key]
        return self

    def lhs_seminorm(self, a, b):
        return self._get(
            ("lhs", a, b),
            lambda: seminorm(self.w_rho(), a, b, band=self.band),
        )

    def _check_order(self, a, b):
        if order(a) + order(b) > self.max_total_order:
            raise ValueError(
                f"|a|+|b| = {order(a) + order(b)} exceeds context cap "
                f"{self.max_total_order}"
            )

    def index_pairs(self):
        """Every (a, b) with |a|+|b| <= max_total_order, in box order."""
        cap = (self.max_total_order,) * self.dim
        return [
            (a, b)
            for a in box(cap)
            for b in box(cap)
            if order(a) + order(b) <= self.max_total_order
        ]

    def theorem_report(self, a, b):
        """lhs = |W_rho|_{a,b}; rhs = the full product bound."""
        self._check_order(a, b)
        n = self.dim // 2
        flip = add(a, swap_xp(b))
        idx_chi = add_scalar(scale(flip, 2), 6)
        idx_rho = add_scalar(scale(flip, 2), 4)
        rhs = (
            (2.0 * np.pi) ** (5 * n)
            * 2.0 ** (4 * (order(a) + order(b) + n))
            * norm_sum_from_table(self.chi_table(), a, b)
            * decay_norm_from_table(self.chi_decay_table(), idx_chi)
            * decay_norm_from_table(self.rho_decay_table(), idx_rho)
        )
        return BoundReport("theorem", (a, b), self.lhs_seminorm(a, b), rhs)

    def husimi_report(self, a, b):
        """Intermediate bound routed through the Husimi decay norms."""
        self._check_order(a, b)
        n = self.dim // 2
        idx_q = add_scalar(scale(add(a, swap_xp(b)), 2), 4)
        rhs = (
            (np.pi / 2.0) ** (2 * n)
            * 2.0 ** (2 * (order(a) + order(b)))
            * norm_sum_from_table(self.chi_table(), a, b)
            * decay_norm_from_table(self.q_decay_table(), idx_q)
        )
        return BoundReport("husimi-route", (a, b), self.lhs_seminorm(a, b), rhs)
