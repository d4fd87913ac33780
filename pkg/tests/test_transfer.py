import dataclasses
import json
import math

import numpy as np
import pytest

from ifsdim.measures import conformal_cylinder_measure
from ifsdim.pressure import ConvergenceFailure, bowen_solve, pressure
from ifsdim.systems import (
    MapDescriptor,
    cantor_system,
    continued_fraction_system,
    gdms_system,
    golden_family,
)
from ifsdim.transfer import (
    DegenerateSystemError,
    PotentialSpec,
    ReducibilityError,
    build_operator,
    eigenmeasure,
    entropy_lyapunov,
    operator_bowen_solve,
)

PHI = (1.0 + math.sqrt(5.0)) / 2.0
TERNARY_H = math.log(2.0) / math.log(3.0)


def fibonacci_system():
    maps = (
        MapDescriptor("similitude", ratio=0.4, offset=0.0),
        MapDescriptor("similitude", ratio=0.3, offset=0.5),
    )
    return gdms_system(((0.0, 1.0),), maps, incidence=((1, 1), (1, 0)), label="fibonacci")


# ---------------------------------------------------------------------------
# operator assembly


def test_zero_potential_full_shift_gives_all_ones_matrix():
    op = build_operator(cantor_system((1 / 3, 1 / 3)), PotentialSpec(0.0), depth=1)
    assert op.matrix.tolist() == [[1.0, 1.0], [1.0, 1.0]]
    assert op.variation_bound == 0.0


def test_state_enumeration_matches_admissible_words():
    op = build_operator(fibonacci_system(), PotentialSpec(0.5), depth=3)
    symbols = [w.symbols for w in op.words]
    # lexicographic, and no word contains the forbidden 1->1 junction
    assert symbols == sorted(symbols)
    assert all((1, 1) not in zip(s, s[1:]) for s in symbols)
    assert len(symbols) == 5  # Fibonacci count at depth 3


def test_similitude_weights_are_exact_ratio_powers():
    t = 0.7
    op = build_operator(cantor_system((1 / 3, 1 / 3)), PotentialSpec(t), depth=2)
    nonzero = op.matrix[op.matrix > 0]
    assert nonzero == pytest.approx([3.0**-t] * nonzero.size, rel=1e-15)


def test_reducible_incidence_is_rejected():
    maps = (
        MapDescriptor("similitude", ratio=0.4, offset=0.0),
        MapDescriptor("similitude", ratio=0.4, offset=0.6),
    )
    two_islands = gdms_system(((0.0, 1.0),), maps, incidence=((1, 0), (0, 1)))
    with pytest.raises(ReducibilityError):
        build_operator(two_islands, PotentialSpec(0.5))


def test_operator_argument_validation():
    sys_ = cantor_system((1 / 3, 1 / 3))
    with pytest.raises(ValueError):
        build_operator(sys_, PotentialSpec(0.5), depth=0)
    with pytest.raises(ValueError):
        PotentialSpec(math.inf)
    with pytest.raises(ValueError):
        PotentialSpec(0.5, holder_alpha=0.0)


def test_summability_bound_is_ratio_power_sum():
    fam = golden_family()
    sys5 = fam.truncate(5)
    t = 0.8
    want = sum(0.5 ** ((i + 2) * t) for i in range(5))
    assert PotentialSpec(t).summability_bound(sys5) == pytest.approx(want, rel=1e-15)


def test_variation_bound_shrinks_with_state_depth():
    cf = continued_fraction_system(2)
    bounds = [
        build_operator(cf, PotentialSpec(0.5), depth=k).variation_bound
        for k in (1, 2, 3, 4)
    ]
    assert all(b > 0 for b in bounds)
    assert bounds == sorted(bounds, reverse=True)


# ---------------------------------------------------------------------------
# eigenpairs


def test_zero_potential_eigenvalue_counts_branches():
    state = eigenmeasure(build_operator(cantor_system((1 / 3, 1 / 3)), PotentialSpec(0.0), depth=1))
    assert state.eigenvalue == pytest.approx(2.0, abs=1e-12)
    assert state.eigenmeasure == pytest.approx([0.5, 0.5], abs=1e-12)


def test_fibonacci_zero_potential_eigenpair_is_golden_ratio():
    state = eigenmeasure(build_operator(fibonacci_system(), PotentialSpec(0.0), depth=1))
    assert state.eigenvalue == pytest.approx(PHI, abs=1e-8)
    assert state.eigenmeasure[0] / state.eigenmeasure[1] == pytest.approx(PHI, abs=1e-8)
    assert state.density[0] / state.density[1] == pytest.approx(PHI, abs=1e-8)


def test_eigenvalue_is_one_at_the_dimension_exponent():
    state = eigenmeasure(
        build_operator(cantor_system((1 / 3, 1 / 3)), PotentialSpec(TERNARY_H), depth=1)
    )
    assert state.eigenvalue == pytest.approx(1.0, abs=1e-12)
    assert state.residual < 1e-8 and state.density_residual < 1e-8


@pytest.mark.parametrize("n", [2, 5, 8])
def test_golden_truncations_cross_one_at_their_bowen_roots(n):
    sys_n = golden_family().truncate(n)
    h_n = bowen_solve(sys_n, depth=1).h
    state = eigenmeasure(build_operator(sys_n, PotentialSpec(h_n), depth=1))
    assert abs(state.eigenvalue - 1.0) < 1e-6


def test_invariant_masses_match_conformal_cylinders_for_similitudes():
    sys3 = golden_family().truncate(3)
    h3 = bowen_solve(sys3, depth=1).h
    state = eigenmeasure(build_operator(sys3, PotentialSpec(h3), depth=2))
    conformal = conformal_cylinder_measure(sys3, h3, depth=2)
    masses = np.array([conformal.mass_of(w) for w in state.words])
    assert np.abs(state.invariant - masses).max() < 1e-12
    # for a Bernoulli similitude system the eigenmeasure itself is conformal
    assert np.abs(state.eigenmeasure - masses).max() < 1e-12


@pytest.mark.parametrize(
    "system", [cantor_system((0.4, 0.25)), continued_fraction_system(2)], ids=["sim", "cf"]
)
def test_invariant_mass_is_shift_stationary(system):
    state = eigenmeasure(build_operator(system, PotentialSpec(0.6), depth=2))
    assert state.invariant.sum() == pytest.approx(1.0, abs=1e-12)
    assert state.shift_invariance_defect() < 1e-8
    rows = state.transition.sum(axis=1)
    assert rows == pytest.approx(np.ones_like(rows), abs=1e-12)


def test_spectral_and_word_pressure_agree_within_bracket():
    cf3 = continued_fraction_system(3)
    for t in (0.55, 0.7):
        state = eigenmeasure(build_operator(cf3, PotentialSpec(t), depth=2))
        est = pressure(cf3, t, depth=8)
        assert abs(state.log_eigenvalue - est.value) <= est.gap + 1e-6


def test_eigenmeasure_iteration_budget_is_enforced():
    op = build_operator(continued_fraction_system(2), PotentialSpec(0.5), depth=2)
    with pytest.raises(ConvergenceFailure):
        eigenmeasure(op, max_iters=2)


def test_truncated_eigenmeasures_stabilise_as_the_alphabet_grows():
    # same potential, growing truncation: the per-state masses settle down
    fam = golden_family()
    t = 0.694241913630617
    states = {n: eigenmeasure(build_operator(fam.truncate(n), PotentialSpec(t), depth=1)) for n in (3, 4, 5, 6, 7)}
    diffs = []
    for n in (3, 4, 5, 6):
        a = states[n].eigenmeasure
        b = states[n + 1].eigenmeasure[: len(a)]
        diffs.append(np.abs(a - b).max())
    assert diffs == sorted(diffs, reverse=True)
    assert diffs[-1] < diffs[0] / 2


# ---------------------------------------------------------------------------
# entropy / Lyapunov


def test_ternary_entropy_and_lyapunov_are_the_classic_logs():
    state = eigenmeasure(
        build_operator(cantor_system((1 / 3, 1 / 3)), PotentialSpec(TERNARY_H), depth=1)
    )
    el = entropy_lyapunov(state)
    assert el.entropy == pytest.approx(math.log(2.0), abs=1e-12)
    assert el.lyapunov == pytest.approx(math.log(3.0), abs=1e-12)
    assert el.ratio == pytest.approx(TERNARY_H, abs=1e-12)


def test_unequal_bernoulli_ratio_matches_closed_form():
    # weights (0.4, 0.2) at exponent one give branch probabilities (2/3, 1/3)
    sys_ = cantor_system((0.4, 0.2))
    state = eigenmeasure(build_operator(sys_, PotentialSpec(1.0), depth=1))
    assert state.eigenvalue == pytest.approx(0.6, abs=1e-12)
    p = np.array([2 / 3, 1 / 3])
    want_entropy = float(-(p * np.log(p)).sum())
    want_lyapunov = float(-(p * np.log([0.4, 0.2])).sum())
    el = entropy_lyapunov(state)
    assert el.entropy == pytest.approx(want_entropy, abs=1e-10)
    assert el.lyapunov == pytest.approx(want_lyapunov, abs=1e-10)


@pytest.mark.parametrize("n", [2, 5, 8])
def test_dimension_ratio_reproduces_the_bowen_root(n):
    sys_n = golden_family().truncate(n)
    h_n = bowen_solve(sys_n, depth=1).h
    el = entropy_lyapunov(eigenmeasure(build_operator(sys_n, PotentialSpec(h_n), depth=1)))
    assert abs(el.ratio - h_n) < 1e-6
    assert el.entropy >= 0.0
    assert 0.0 <= el.ratio <= 1.0


def test_deep_truncation_ratio_approaches_the_family_limit():
    sys12 = golden_family().truncate(12)
    h12 = bowen_solve(sys12, depth=1).h
    el = entropy_lyapunov(eigenmeasure(build_operator(sys12, PotentialSpec(h12), depth=1)))
    assert abs(el.ratio - 0.694241913630617) < 1e-2


def test_zero_contraction_is_reported_as_degenerate():
    op = build_operator(cantor_system((1 / 3, 1 / 3)), PotentialSpec(0.0), depth=1)
    flat = dataclasses.replace(op, state_log_mid=np.zeros(len(op)))
    with pytest.raises(DegenerateSystemError):
        entropy_lyapunov(eigenmeasure(flat))


# ---------------------------------------------------------------------------
# operator-side Bowen root


def test_operator_root_of_similitude_system_matches_word_root():
    sys5 = golden_family().truncate(5)
    assert operator_bowen_solve(sys5, depth=1).h == pytest.approx(
        bowen_solve(sys5, depth=1).h, abs=1e-9
    )


@pytest.mark.parametrize("n", [2, 3])
def test_operator_root_brings_the_eigenvalue_to_one(n):
    cf = continued_fraction_system(n)
    sol = operator_bowen_solve(cf, depth=2)
    state = eigenmeasure(build_operator(cf, PotentialSpec(sol.h), depth=2))
    assert abs(state.eigenvalue - 1.0) < 1e-6
    assert sol.method == "operator"


def test_operator_root_sharpens_as_states_deepen():
    # reference value from the depth-16 cylinder-refinement solve
    target = 0.531280506367
    errs = [
        abs(operator_bowen_solve(continued_fraction_system(2), depth=k).h - target)
        for k in (2, 4, 6)
    ]
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] < 1e-3


# ---------------------------------------------------------------------------
# export


def test_gibbs_state_json_export_is_complete_and_loadable():
    sys_ = cantor_system((1 / 3, 1 / 3))
    state = eigenmeasure(build_operator(sys_, PotentialSpec(TERNARY_H), depth=2))
    blob = json.loads(state.to_json())
    assert set(blob) == {
        "eigenvalue",
        "depth",
        "exponent",
        "masses",
        "invariant_masses",
        "residuals",
    }
    assert blob["eigenvalue"] == pytest.approx(1.0, abs=1e-12)
    assert set(blob["masses"]) == {"0.0", "0.1", "1.0", "1.1"}
    assert sum(blob["masses"].values()) == pytest.approx(1.0, abs=1e-12)
    assert blob["residuals"]["eigenmeasure"] < 1e-8
