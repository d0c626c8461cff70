"""Seminorm families against closed forms on Gaussian and Fock states.

Every expected value here is computed in the test itself (calculus on
the explicit densities), never read back from the module under test.
"""

import math

import numpy as np
import pytest

from phasespace import (
    Grid,
    GridResolutionError,
    MixedState,
    decay_norm_from_table,
    fock_state,
    joint_seminorm,
    kernel_seminorm,
    norm_sum,
    norm_sum_from_table,
    operator_seminorm,
    scaled_components,
    seminorm,
    seminorm_table,
    SeminormReport,
    vacuum_state,
    wigner,
)

Z = (0, 0)


# --- grid seminorms -------------------------------------------------------


def test_seminorm_vacuum_sup(vacuum_wigner):
    # sup of exp(-x^2-p^2)/pi is attained at the origin
    assert abs(seminorm(vacuum_wigner, Z, Z) - 1.0 / math.pi) < 1e-8


def test_seminorm_vacuum_first_moment(vacuum_wigner):
    # max of x exp(-x^2) sits at x = 1/sqrt(2)
    expected = math.exp(-0.5) / (math.sqrt(2.0) * math.pi)
    assert abs(seminorm(vacuum_wigner, (1, 0), Z) - expected) < 1e-8


def test_seminorm_vacuum_derivative(vacuum_wigner):
    # d_p W = -2p W; max of 2|p| exp(-p^2) is sqrt(2) e^{-1/2}
    expected = math.sqrt(2.0) * math.exp(-0.5) / math.pi
    assert abs(seminorm(vacuum_wigner, Z, (0, 1)) - expected) < 1e-8


def test_seminorm_zoom_beats_lattice(vacuum_wigner):
    # the analytic argmax 1/sqrt(2) is off-lattice, so the unrefined sup
    # undershoots and the trig-interpolant zoom must close the gap
    expected = math.exp(-0.5) / (math.sqrt(2.0) * math.pi)
    coarse = seminorm(vacuum_wigner, (1, 0), Z, refine=False)
    fine = seminorm(vacuum_wigner, (1, 0), Z, refine=True)
    assert coarse <= fine + 1e-15
    assert abs(fine - expected) < abs(coarse - expected)


def test_seminorm_reflection_invariance(grid):
    plus = wigner(vacuum_state(1).displaced(np.array([1.5, -0.5])), grid)
    minus = wigner(vacuum_state(1).displaced(np.array([-1.5, 0.5])), grid)
    for a, b in [(Z, Z), ((2, 0), Z), (Z, (1, 1)), ((1, 1), (2, 0))]:
        assert abs(seminorm(plus, a, b) - seminorm(minus, a, b)) < 1e-8


def test_seminorm_band_excludes_boundary(vacuum_wigner):
    # a wide band still contains the central maximum
    assert abs(seminorm(vacuum_wigner, Z, Z, band=0.45) - 1.0 / math.pi) < 1e-8
    with pytest.raises(ValueError):
        seminorm(vacuum_wigner, Z, Z, band=0.5)


def test_seminorm_rejects_high_derivative(vacuum_wigner):
    with pytest.raises(ValueError, match="12"):
        seminorm(vacuum_wigner, Z, (13, 0))


def test_seminorm_rejects_wrong_index_length(vacuum_wigner):
    with pytest.raises(ValueError):
        seminorm(vacuum_wigner, (1, 0, 0), Z)


def test_norm_sum_is_box_sum(vacuum_wigner):
    expected = seminorm(vacuum_wigner, Z, Z) + seminorm(vacuum_wigner, (1, 0), Z)
    assert abs(norm_sum(vacuum_wigner, (1, 0), Z) - expected) < 1e-10


def test_table_matches_direct_calls(vacuum_wigner):
    table = seminorm_table(vacuum_wigner, (1, 0), (0, 1))
    assert set(table) == {
        (a, b) for a in [(0, 0), (1, 0)] for b in [(0, 0), (0, 1)]
    }
    for (a, b), value in table.items():
        assert abs(value - seminorm(vacuum_wigner, a, b)) < 1e-12
    direct = norm_sum(vacuum_wigner, (1, 0), (0, 1))
    assert abs(norm_sum_from_table(table, (1, 0), (0, 1)) - direct) < 1e-10
    decay = decay_norm_from_table(table, (1, 0))
    assert abs(decay - (table[((0, 0), (0, 0))] + table[((1, 0), (0, 0))])) < 1e-15


def test_report_record_roundtrip():
    report = SeminormReport("decay", ((1, 0), (0, 1)), 0.25, 256, 12.0, 0.1)
    fields = report.record().split(",")
    assert fields[0] == "decay"
    assert fields[1] == '"1 0"'
    assert fields[2] == '"0 1"'
    assert float(fields[3]) == 0.25
    assert int(fields[4]) == 256


# --- jointly-Schwartz family seminorm -------------------------------------


def test_joint_vacuum_sup():
    # sup |psi_0| = pi^{-1/4} at the origin
    value = joint_seminorm([vacuum_state(1)], (0,), (0,))
    assert abs(value - math.pi ** -0.25) < 1e-10


def test_joint_vacuum_first_moment():
    # sup |x psi_0| = pi^{-1/4} e^{-1/2} at x = 1
    value = joint_seminorm([vacuum_state(1)], (1,), (0,))
    assert abs(value - math.pi ** -0.25 * math.exp(-0.5)) < 1e-10


def test_joint_fock_mixture_components():
    # sum of weighted densities 0.5(psi_0^2 + psi_1^2) peaks at x = 1/sqrt(2)
    rho = MixedState([0.5, 0.5], [vacuum_state(1), fock_state(1, 1)])
    value = joint_seminorm(scaled_components(rho), (0,), (0,))
    expected = math.sqrt(math.exp(-0.5) / math.sqrt(math.pi))
    assert abs(value - expected) < 1e-10


def test_joint_empty_family_is_zero():
    assert joint_seminorm([], (0,), (0,)) == 0.0


def test_joint_rejects_non_analytic():
    from phasespace import demo_state

    with pytest.raises(ValueError, match="analytic"):
        joint_seminorm([demo_state("plateau")], (0,), (0,))


# --- operator sandwich seminorm -------------------------------------------


def test_operator_vacuum_projector():
    # |0><0| has a single unit singular value
    value = operator_seminorm(vacuum_state(1), (0,), (0,), (0,), (0,))
    assert abs(value - 1.0) < 1e-8


def test_operator_position_sandwich():
    # ||X|0>|| = sqrt(<0|X^2|0>) = 1/sqrt(2)
    value = operator_seminorm(vacuum_state(1), (1,), (0,), (0,), (0,))
    assert abs(value - 2.0 ** -0.5) < 1e-8


def test_operator_momentum_sandwich():
    # <0|P^2|0> = 1/2 as well, by x<->p symmetry of the ground state
    value = operator_seminorm(vacuum_state(1), (0,), (1,), (0,), (0,))
    assert abs(value - 2.0 ** -0.5) < 1e-8


def test_operator_two_sided_sandwich():
    # X|0><0|X has singular value <0|X^2|0> = 1/2
    value = operator_seminorm(vacuum_state(1), (1,), (0,), (0,), (1,))
    assert abs(value - 0.5) < 1e-8


def test_operator_quartic_moment():
    # ||X^2|0>|| = sqrt(<0|X^4|0>) = sqrt(3)/2
    value = operator_seminorm(vacuum_state(1), (2,), (0,), (0,), (0,))
    assert abs(value - math.sqrt(3.0) / 2.0) < 1e-8


def test_operator_mixture_singular_value():
    # for rho = sum_m w_m |m><m| the top singular value is max w_m
    rho = MixedState([0.7, 0.3], [vacuum_state(1), fock_state(1, 1)])
    value = operator_seminorm(rho, (0,), (0,), (0,), (0,))
    assert abs(value - 0.7) < 1e-8


def test_operator_order_cap():
    with pytest.raises(ValueError, match="cap"):
        operator_seminorm(vacuum_state(1), (0,), (5,), (4,), (0,))


def test_operator_flags_coarse_grid():
    coarse = Grid(1, 8, 12.0, kind="config")
    with pytest.raises(GridResolutionError):
        operator_seminorm(vacuum_state(1), (0,), (0,), (0,), (0,), grid=coarse)


def test_operator_rejects_phase_space_grid():
    with pytest.raises(ValueError, match="config"):
        operator_seminorm(
            vacuum_state(1), (0,), (0,), (0,), (0,), grid=Grid(2, 64, 8.0)
        )


# --- kernel seminorm and the factorized envelope --------------------------


def test_kernel_vacuum_values():
    # K(x,y) = psi_0(x) psi_0(y); separable sups multiply
    base = kernel_seminorm(vacuum_state(1), (0,), (0,), (0,), (0,))
    assert abs(base - 1.0 / math.sqrt(math.pi)) < 1e-10
    moment = kernel_seminorm(vacuum_state(1), (1,), (0,), (1,), (0,))
    assert abs(moment - math.exp(-1.0) / math.sqrt(math.pi)) < 1e-10


def test_kernel_bounded_by_joint_product(mixture):
    comps = scaled_components(mixture)
    for a, b, c, d in [
        ((0,), (0,), (0,), (0,)),
        ((1,), (0,), (0,), (1,)),
        ((2,), (1,), (1,), (2,)),
    ]:
        lhs = kernel_seminorm(mixture, a, b, c, d)
        rhs = joint_seminorm(comps, a, b) * joint_seminorm(comps, c, d)
        assert lhs <= rhs * (1.0 + 1e-9)


def test_kernel_rejects_non_analytic():
    from phasespace import demo_state

    with pytest.raises(ValueError, match="analytic"):
        kernel_seminorm(demo_state("plateau"), (0,), (0,), (0,), (0,))
