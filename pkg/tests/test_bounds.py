"""Inequality evaluators: Cauchy-Schwarz reports, off-diagonal seminorm
bounds, and the main product bound with its Husimi-route intermediate."""

import math

import numpy as np
import pytest

from phasespace import (
    BoundContext,
    BoundReport,
    Grid,
    cauchy_schwarz_reports,
    offdiag_bound_rhs,
    offdiag_grid_fn,
    seminorm,
    seminorm_table,
    vacuum_state,
    wigner,
)
from phasespace.bounds import chi_seminorm_table, offdiag_loose_rhs, offdiag_tight_rhs
from phasespace.multiindex import add, add_scalar, order, scale, swap_xp

Z = (0, 0)


# --- Cauchy-Schwarz --------------------------------------------------------


def test_cs_vacuum_closed_form():
    # rank-one rho makes the bound an equality; at alpha=(2,0), beta=0
    # both sides equal exp(-2)
    chi = vacuum_state(1)
    pairs = [(np.array([2.0, 0.0]), np.array([0.0, 0.0]))]
    (report,) = cauchy_schwarz_reports(vacuum_state(1), chi, pairs)
    assert abs(report.lhs - math.exp(-2.0)) < 1e-9
    assert abs(report.ratio - 1.0) < 1e-9
    assert report.passed


def test_cs_equality_on_diagonal(mixture):
    rng = np.random.default_rng(7)
    pts = rng.uniform(-2.5, 2.5, size=(20, 2))
    pairs = [(p, p.copy()) for p in pts]
    for report in cauchy_schwarz_reports(mixture, vacuum_state(1), pairs):
        assert abs(report.ratio - 1.0) < 1e-12


def test_cs_strict_for_mixtures(mixture):
    rng = np.random.default_rng(11)
    draws = rng.uniform(-2.5, 2.5, size=(100, 2, 2))
    pairs = [(row[0], row[1]) for row in draws]
    reports = cauchy_schwarz_reports(mixture, vacuum_state(1), pairs)
    ratios = [r.ratio for r in reports]
    assert all(r <= 1.0 + 1e-9 for r in ratios)
    # a rank >= 2 state cannot saturate the bound at generic off-diagonal
    # pairs, so the sweep must see genuinely strict cases
    assert min(ratios) < 0.99


# --- report mechanics ------------------------------------------------------


def test_report_ratio_zero_rhs():
    assert BoundReport("t", (Z, Z), 0.0, 0.0).ratio == 0.0
    degenerate = BoundReport("t", (Z, Z), 1.0, 0.0)
    assert degenerate.ratio == np.inf
    assert not degenerate.passed


def test_report_row_format():
    report = BoundReport("theorem", ((1, 0), (0, 2)), 0.5, 2.0)
    fields = report.row().split(",")
    assert fields[0] == '"1 0"'
    assert fields[1] == '"0 2"'
    assert float(fields[2]) == 0.5
    assert float(fields[3]) == 2.0
    assert float(fields[4]) == 0.25
    assert fields[5] == "1"


# --- off-diagonal bounds ---------------------------------------------------


def test_loose_rhs_zero_order_is_chi_sup():
    # with a = b = 0 the loose rhs collapses to |W_chi|_{0,0} = 1/pi
    chi = vacuum_state(1)
    table = chi_seminorm_table(chi, Z, Z)
    value = offdiag_loose_rhs(table, Z, Z, [1.0, -2.0], [0.5, 3.0])
    assert abs(value - 1.0 / math.pi) < 1e-8
    tight = offdiag_tight_rhs(table, Z, Z, [1.0, -2.0], [0.5, 3.0])
    assert abs(tight - 1.0 / math.pi) < 1e-8


def test_tight_below_loose():
    # same seminorm table on both sides, so the comparison is algebraic;
    # skip refinement to keep the sweep cheap
    chi = vacuum_state(1)
    grid = Grid(2, 256, 12.0)
    table = seminorm_table(wigner(chi, grid), (4, 4), (4, 4), refine=False)
    rng = np.random.default_rng(23)
    cap = (4, 4)
    from phasespace.multiindex import box

    pairs = [
        (a, b)
        for a in box(cap)
        for b in box(cap)
        if order(a) + order(b) <= 4
    ]
    for _ in range(3):
        alpha = rng.uniform(-3.0, 3.0, 2)
        beta = rng.uniform(-3.0, 3.0, 2)
        for a, b in pairs:
            tight = offdiag_tight_rhs(table, a, b, alpha, beta)
            loose = offdiag_loose_rhs(table, a, b, alpha, beta)
            assert tight <= loose * (1.0 + 1e-12)


def test_grid_seminorm_below_tight(grid):
    chi = vacuum_state(1)
    table = chi_seminorm_table(chi, (1, 1), (1, 1), grid=grid)
    rng = np.random.default_rng(31)
    for _ in range(3):
        alpha = rng.uniform(-2.0, 2.0, 2)
        beta = rng.uniform(-2.0, 2.0, 2)
        fn = offdiag_grid_fn(chi, alpha, beta, grid)
        for a, b in [(Z, Z), ((1, 0), Z), (Z, (0, 1)), ((1, 0), (0, 1))]:
            lhs = seminorm(fn, a, b)
            rhs = offdiag_bound_rhs(chi, a, b, alpha, beta, "tight", table=table)
            assert lhs <= rhs * (1.0 + 1e-7)


def test_offdiag_at_origin_is_chi_wigner(grid):
    chi = vacuum_state(1)
    zero = np.zeros(2)
    fn = offdiag_grid_fn(chi, zero, zero, grid)
    assert abs(seminorm(fn, Z, Z) - 1.0 / math.pi) < 1e-8


def test_offdiag_unknown_variant():
    with pytest.raises(ValueError, match="variant"):
        offdiag_bound_rhs(vacuum_state(1), Z, Z, [0, 0], [0, 0], "snug")


# --- main bound and Husimi intermediate ------------------------------------


@pytest.fixture(scope="module")
def vacuum_ctx():
    return BoundContext(vacuum_state(1))


@pytest.fixture(scope="module")
def mixture_ctx(mixture):
    return BoundContext(mixture)


SPOT_PAIRS = [(Z, Z), ((1, 0), (0, 1)), ((2, 2), Z), (Z, (2, 1))]


def test_theorem_holds_on_vacuum(vacuum_ctx):
    for a, b in SPOT_PAIRS:
        report = vacuum_ctx.theorem_report(a, b)
        assert report.passed, (a, b, report.ratio)
        assert report.lhs > 0.0
        assert np.isfinite(report.rhs)


def test_theorem_holds_on_mixture(mixture_ctx):
    for a, b in SPOT_PAIRS:
        assert mixture_ctx.theorem_report(a, b).passed


def test_husimi_route_holds(vacuum_ctx, mixture_ctx):
    for ctx in (vacuum_ctx, mixture_ctx):
        for a, b in SPOT_PAIRS:
            assert ctx.husimi_report(a, b).passed


def test_theorem_constants(vacuum_ctx):
    # lock the prefactor and index bookkeeping against accidental edits
    from phasespace.seminorms import decay_norm_from_table, norm_sum_from_table

    a, b = (1, 0), (0, 1)
    report = vacuum_ctx.theorem_report(a, b)
    flip = add(a, swap_xp(b))
    expected = (
        (2.0 * np.pi) ** 5
        * 2.0 ** (4 * (order(a) + order(b) + 1))
        * norm_sum_from_table(vacuum_ctx.chi_table(), a, b)
        * decay_norm_from_table(vacuum_ctx.chi_decay_table(), add_scalar(scale(flip, 2), 6))
        * decay_norm_from_table(vacuum_ctx.rho_decay_table(), add_scalar(scale(flip, 2), 4))
    )
    assert abs(report.rhs - expected) < 1e-9 * expected


def test_theorem_swaps_derivative_index(mixture_ctx):
    # the decay orders track the x<->p swap of b; dropping the swap must
    # change the rhs on an x/p-asymmetric state
    from phasespace.seminorms import decay_norm_from_table, norm_sum_from_table

    a, b = Z, (1, 0)
    report = mixture_ctx.theorem_report(a, b)
    unswapped = add(a, b)
    wrong = (
        (2.0 * np.pi) ** 5
        * 2.0 ** (4 * (order(a) + order(b) + 1))
        * norm_sum_from_table(mixture_ctx.chi_table(), a, b)
        * decay_norm_from_table(
            mixture_ctx.chi_decay_table(), add_scalar(scale(unswapped, 2), 6)
        )
        * decay_norm_from_table(
            mixture_ctx.rho_decay_table(), add_scalar(scale(unswapped, 2), 4)
        )
    )
    assert abs(wrong - report.rhs) > 1e-6 * report.rhs


def test_context_order_cap(vacuum_ctx):
    with pytest.raises(ValueError, match="exceeds"):
        vacuum_ctx.theorem_report((3, 2), Z)
    with pytest.raises(ValueError, match="exceeds"):
        vacuum_ctx.husimi_report(Z, (2, 3))


def test_index_pairs_enumeration(vacuum_ctx):
    pairs = vacuum_ctx.index_pairs()
    assert len(pairs) == 70
    assert (Z, Z) in pairs
    assert (((2, 2)), Z) in pairs
    assert all(order(a) + order(b) <= 4 for a, b in pairs)


def test_context_defaults(mixture_ctx):
    assert mixture_ctx.grid.dim == 2
    assert mixture_ctx.chi.atoms[0].m == (0,)


def test_adopt_chi_tables(mixture):
    chi = vacuum_state(1)
    grid = Grid(2, 256, 12.0)
    base = BoundContext(vacuum_state(1), chi=chi, grid=grid)
    base.chi_table()
    shared = BoundContext(mixture, chi=chi, grid=grid).adopt_chi_tables(base)
    assert shared._cache["chi_table"] is base._cache["chi_table"]
    assert shared.theorem_report((1, 0), (0, 1)).passed
    # a context holding its own chi object must refuse the handoff
    with pytest.raises(ValueError, match="chi"):
        BoundContext(mixture, grid=grid).adopt_chi_tables(base)
