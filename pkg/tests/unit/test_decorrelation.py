"""Unit tests for TV functionals, the phase deficit and the FKG-type bounds."""

import numpy as np
import pytest

from entanglab.core.errors import CapacityError, RegionError
from entanglab.models import Region, Tripartition
from entanglab.physics.decorrelation import (
    fkg_audit,
    fkg_rhs,
    influence_kernel,
    kernel_bound_audit,
    merged,
    phase_deficit,
    phase_deficit_multi,
    phase_grid_oracle,
    single_flip_audit,
    single_flip_tv,
    split_objective,
    tv,
    tv_algebra_audit,
    tv_conditional,
)
from entanglab.physics.generators import chain, gibbs_measure, gibbs_state, random_probability_table, random_state
from entanglab.physics.ising import build_hamiltonian, ground_state
from entanglab.physics.lattice import buffer
from entanglab.physics.states import probability_table
from entanglab.schemas import GibbsSpec
from tests.test_data import Models, TestHelpers, Tolerances


def regions(window, *groups):
    return [Region(window, tuple(group)) for group in groups]


@pytest.fixture
def ising_measure(ising_small):
    return probability_table(ground_state(build_hamiltonian(ising_small)).state)


class TestTv:
    """Test the plain and buffer-conditioned TV functionals."""

    def test_bell(self, bell_measure):
        """Test TV(A|C) = 1/2 for a Bell pair."""
        a, c = regions(bell_measure.window, [0], [1])

        assert tv(bell_measure, a, c).value == pytest.approx(0.5)

    def test_ghz_ends(self, ghz3_measure):
        """Test that the GHZ ends are correlated but independent given the middle."""
        a, b, c = regions(ghz3_measure.window, [0], [1], [2])

        assert tv(ghz3_measure, a, c).value == pytest.approx(0.5)
        assert tv_conditional(ghz3_measure, a, b, c).value == pytest.approx(0.0, abs=Tolerances.EXACT)

    def test_empty_buffer(self, rng):
        """Test that conditioning on the empty region gives the plain functional."""
        p = random_probability_table(chain(4).everything, rng)
        a, b, c = regions(p.window, [0], [], [2, 3])

        assert tv_conditional(p, a, b, c).value == pytest.approx(tv(p, a, c).value, abs=Tolerances.EXACT)

    def test_markov_chain(self):
        """Test that a nearest-neighbor Gibbs chain is Markov across any one-site buffer."""
        p = gibbs_measure(GibbsSpec(**Models.GIBBS_CHAIN))
        a, b, c = regions(p.window, [0, 1], [2], range(3, 8))

        assert tv_conditional(p, a, b, c).value < Tolerances.AUDIT

    def test_parts(self, ghz3_measure):
        """Test per-sector weights and parts of the conditional functional."""
        a, b, c = regions(ghz3_measure.window, [0], [2], [1])
        report = tv_conditional(ghz3_measure, a, b, c)

        assert report.weights == pytest.approx([0.5, 0.5])
        assert report.parts == pytest.approx([0.0, 0.0], abs=Tolerances.EXACT)

    def test_null_sector(self, ghz3_measure):
        """Test that null buffer configurations contribute nothing."""
        a, b, c = regions(ghz3_measure.window, [0], [1, 2], [])

        assert tv_conditional(ghz3_measure, a, b, c).value == pytest.approx(0.0, abs=Tolerances.EXACT)

    def test_overlapping_regions(self, ghz3_measure):
        """Test that overlapping regions are rejected."""
        a, c = regions(ghz3_measure.window, [0, 1], [1])

        with pytest.raises(RegionError):
            tv(ghz3_measure, a, c)

    def test_single_flip(self, bell_measure):
        """Test the single-flip influence of a Bell pair."""
        a, b = regions(bell_measure.window, [0], [])

        assert single_flip_tv(bell_measure, a, b, 1) == pytest.approx(0.5)
        TestHelpers.assert_passes(single_flip_audit(bell_measure, a, b, 1))


class TestTvAlgebra:
    """Test the algebraic bounds on random measures."""

    def test_random_measures(self, rng):
        """Test every binding check on random five-site measures."""
        window = chain(5)
        a, b, c, d = regions(window, [0], [1], [2, 3], [4])
        for _ in range(20):
            p = random_probability_table(window.everything, rng, concentration=0.5)
            TestHelpers.assert_all_pass(tv_algebra_audit(p, a, b, c, d))

    def test_report_order(self, rng):
        """Test the names and order of the reports."""
        p = random_probability_table(chain(5).everything, rng)
        a, b, c, d = regions(p.window, [0], [1], [2, 3], [4])
        names = [report.inequality for report in tv_algebra_audit(p, a, b, c, d)]

        assert names == [
            "symmetry",
            "monotonicity",
            "sub_cocycle",
            "sub_cocycle_conditional",
            "telescoping",
            "four_term",
            "four_term_literal",
            "single_flip",
        ]

    def test_literal_four_term_is_informational(self, rng):
        """Test that the uncorrected four-term check never fails a run."""
        p = random_probability_table(chain(4).everything, rng)
        a, b, c, d = regions(p.window, [0], [1], [2], [3])
        literal = TestHelpers.report_by_name(tv_algebra_audit(p, a, b, c, d), "four_term_literal")[0]

        assert literal.informational
        assert not literal.failed


class TestPhaseDeficit:
    """Test the alternating phase-split minimization."""

    def test_real_state(self, ghz3):
        """Test that a real nonnegative state splits exactly."""
        tri = Tripartition(*regions(ghz3.window, [0], [1], [2]))

        assert phase_deficit(ghz3, tri).objective == pytest.approx(0.0, abs=Tolerances.EXACT)

    def test_markov_gibbs_state(self, gibbs_chain):
        """Test a vanishing deficit for the unphased Gibbs chain."""
        tri = buffer(Region(gibbs_chain.window, (0, 1)), 1)

        assert phase_deficit(gibbs_chain, tri).objective < Tolerances.AUDIT

    def test_additive_phase(self):
        """Test that a nearest-neighbor additive phase splits across a width-one buffer."""
        state = gibbs_state(GibbsSpec(**Models.GIBBS_PHASED))
        tri = buffer(Region(state.window, (0, 1)), 1)
        split = phase_deficit(state, tri)

        assert split.objective < Tolerances.AUDIT
        assert split.converged

    def test_history_nonincreasing(self, rng):
        """Test monotone descent on a random complex state."""
        state = random_state(chain(5), rng)
        split = phase_deficit(state, Tripartition(*regions(state.window, [0], [1], [2, 3, 4])))
        history = np.asarray(split.history)

        assert (np.diff(history) <= Tolerances.EXACT).all()
        assert split.objective == pytest.approx(history[-1])
        assert split.objective <= np.sqrt(2.0)

    def test_stored_tables(self, rng):
        """Test that the stored tables reproduce the reported objective."""
        state = random_state(chain(4), rng)
        split = phase_deficit(state, Tripartition(*regions(state.window, [0], [1], [2, 3])))

        assert split_objective(state, split) == pytest.approx(split.objective, abs=Tolerances.EXACT)
        assert split.alpha.shape == (2, 2)
        assert split.gamma.shape == (4, 2)

    def test_seeded_polish(self, rng):
        """Test that polishing a grid split never increases its objective."""
        state = random_state(chain(3), rng)
        tri = Tripartition(*regions(state.window, [0], [1], [2]))
        grid = phase_grid_oracle(state, tri, steps=16)
        polished = phase_deficit(state, tri, initial=grid)

        assert polished.objective <= grid.objective + Tolerances.EXACT

    def test_seed_shape_mismatch(self, rng):
        """Test that a seed from another partition is rejected."""
        state = random_state(chain(4), rng)
        seed = phase_deficit(state, Tripartition(*regions(state.window, [0], [1], [2, 3])))

        with pytest.raises(ValueError):
            phase_deficit(state, Tripartition(*regions(state.window, [0, 1], [2], [3])), initial=seed)


class TestPhaseDeficitMulti:
    """Test multi-component phase splits."""

    def test_single_component_matches(self, rng):
        """Test that one component reproduces the single-split minimization."""
        state = random_state(chain(4), rng)
        a, b, c = regions(state.window, [0], [1], [2, 3])

        assert phase_deficit_multi(state, [(a, b)], c).objective == pytest.approx(
            phase_deficit(state, Tripartition(a, b, c)).objective, abs=Tolerances.EXACT
        )

    def test_merged_split(self, rng):
        """Test that merging components keeps the objective."""
        state = random_state(chain(6), rng)
        a1, b1, a2, b2, c = regions(state.window, [0], [1], [5], [4], [2, 3])
        split = phase_deficit_multi(state, [(a1, b1), (a2, b2)], c)
        combined = merged(split)

        assert len(combined.components) == 1
        assert combined.a.sites == (0, 5)
        assert split_objective(state, combined) == pytest.approx(split.objective, abs=1e-10)

    def test_component_count(self, rng):
        """Test the component limits."""
        state = random_state(chain(4), rng)
        c = Region(state.window, (3,))

        with pytest.raises(ValueError):
            phase_deficit_multi(state, [], c)

    def test_overlapping_components(self, rng):
        """Test that components must be disjoint."""
        state = random_state(chain(4), rng)
        a1, b1, a2, b2, c = regions(state.window, [0], [1], [1], [2], [3])

        with pytest.raises(RegionError):
            phase_deficit_multi(state, [(a1, b1), (a2, b2)], c)


class TestPhaseGridOracle:
    """Test the exhaustive phase grid."""

    def test_exact_on_real_state(self, ghz3):
        """Test that the grid finds the zero split of a real state."""
        tri = Tripartition(*regions(ghz3.window, [0], [1], [2]))

        assert phase_grid_oracle(ghz3, tri, steps=8).objective == pytest.approx(0.0, abs=Tolerances.EXACT)

    def test_swapped_roles(self, rng):
        """Test a tripartition whose C side is the smaller one."""
        state = random_state(chain(4), rng)
        tri = Tripartition(*regions(state.window, [0, 1], [2], [3]))
        split = phase_grid_oracle(state, tri, steps=8)

        assert split_objective(state, split) == pytest.approx(split.objective, abs=Tolerances.EXACT)

    def test_capacity(self, rng):
        """Test that the oracle refuses windows above its site limit."""
        state = random_state(chain(9), rng)
        tri = Tripartition(*regions(state.window, [0], [1], range(2, 9)))

        with pytest.raises(CapacityError):
            phase_grid_oracle(state, tri)


class TestInfluenceKernel:
    """Test the conditional influence kernel."""

    def test_bell(self, bell_measure):
        """Test K(0, 1) = 1 for a Bell pair."""
        b = Region(bell_measure.window)

        assert influence_kernel(bell_measure, b, 0, 1) == pytest.approx(1.0)

    def test_restricted_is_lower_bound(self, ising_measure):
        """Test that the restricted search never exceeds the exhaustive one."""
        b = Region(ising_measure.window, (1,))
        exact = influence_kernel(ising_measure, b, 0, 3)
        restricted = influence_kernel(ising_measure, b, 0, 3, mode="restricted")

        assert restricted <= exact + Tolerances.EXACT

    def test_site_in_buffer(self, ghz3_measure):
        """Test that kernel sites must avoid the buffer."""
        with pytest.raises(RegionError):
            influence_kernel(ghz3_measure, Region(ghz3_measure.window, (0,)), 0, 2)

    def test_unknown_mode(self, ghz3_measure):
        """Test that unknown modes are rejected."""
        with pytest.raises(ValueError):
            influence_kernel(ghz3_measure, Region(ghz3_measure.window), 0, 2, mode="greedy")

    def test_exact_capacity(self, rng):
        """Test that exhaustive enumeration is capped by the free-site limit."""
        p = random_probability_table(chain(16).everything, rng)

        with pytest.raises(CapacityError, match="free sites"):
            influence_kernel(p, Region(p.window), 0, 15)

    def test_extra_domain_must_contain_buffer(self, ghz3_measure):
        """Test validation of extra candidate domains."""
        window = ghz3_measure.window

        with pytest.raises(RegionError):
            influence_kernel(
                ghz3_measure, Region(window, (1,)), 0, 2, mode="restricted", domains=[Region(window)]
            )


class TestFkg:
    """Test the FKG covariance bound."""

    def test_bell(self, bell_measure):
        """Test that kappa = 1/2 is tight on a Bell pair and kappa = 1/4 fails informationally."""
        a, b = regions(bell_measure.window, [0], [])
        binding, literal = fkg_audit(bell_measure, a, b, 1)

        assert fkg_rhs(bell_measure, a, b, 1, kappa=1.0) == pytest.approx(1.0)
        assert binding.passed
        assert binding.kappa == 0.5
        assert not literal.passed
        assert literal.informational
        assert not literal.failed

    def test_ising_ground_state(self, ising_measure):
        """Test the binding bound on an Ising ground-state measure."""
        a, b = regions(ising_measure.window, [0, 1], [2])

        TestHelpers.assert_passes(fkg_audit(ising_measure, a, b, 3)[0])

    def test_kernel_bound(self, ising_measure):
        """Test the kernel bound in exact and restricted modes."""
        a, b, c = regions(ising_measure.window, [0], [1], [3, 4])
        for mode in ("exact", "restricted"):
            reports = kernel_bound_audit(ising_measure, a, b, c, mode=mode)
            TestHelpers.assert_passes(reports[0])
            assert reports[0].inputs["mode"] == mode
            assert reports[1].informational

    def test_kernel_bound_excluding_targets(self, ising_measure):
        """Test that keeping domains clear of C still yields a valid report."""
        a, b, c = regions(ising_measure.window, [0], [1], [3, 4])
        reports = kernel_bound_audit(ising_measure, a, b, c, exclude_targets=True)

        assert reports[0].inputs["exclude_targets"] is True
        assert reports[0].rhs >= 0.0
