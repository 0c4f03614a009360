"""Exponential decorrelation and area-law saturation in the subcritical Ising chain."""

import numpy as np
import pytest

from entanglab.models import Region
from entanglab.physics.approximation import mutual_information, pinsker_audit, site_observable
from entanglab.physics.bounds import decoupling_verify, fit_column
from entanglab.physics.generators import chain, ghz_state
from entanglab.physics.lattice import end_block
from entanglab.physics.states import entanglement_entropy
from tests.test_data import Expected, Suites, Tolerances, TestHelpers

pytestmark = pytest.mark.slow

CERTIFIED_COLUMNS = ("delta", "one_minus_overlap", "tau")


@pytest.fixture(scope="module")
def sweeps(chain_ground):
    """Decoupling sweep of the end block for every chain length."""
    tables = {}
    for n in Suites.DECAY_SIZES:
        state = chain_ground(n, Suites.DECAY_FIELD).state
        tables[n] = decoupling_verify(state, end_block(state.window, Suites.DECAY_BLOCK), Suites.DECAY_WIDTHS)
    return tables


def blocks(window, size: int, separation: int) -> tuple[Region, Region]:
    """Two blocks of ``size`` sites at the left end, ``separation`` steps apart."""
    start = size - 1 + separation
    return Region(window, tuple(range(size))), Region(window, tuple(range(start, start + size)))


def pair(window, separation: int) -> tuple[Region, Region]:
    return blocks(window, 1, separation)


@pytest.fixture(scope="module")
def information_series(chain_ground):
    """I(A1:A2) against the separation, per block size and chain length."""
    series = {}
    for size in Suites.MI_BLOCKS:
        for n in Suites.DECAY_SIZES:
            state = chain_ground(n, Suites.DECAY_FIELD).state
            series[size, n] = [mutual_information(state, *blocks(state.window, size, s)) for s in Suites.SEPARATIONS]
    return series


def assert_stable(xis: np.ndarray):
    reference = xis[-1]
    assert np.all(np.abs(xis - reference) <= Suites.XI_SPREAD * reference), xis


class TestDecouplingSweep:
    """Test the sweep columns of the end block."""

    def test_certificates(self, sweeps):
        """Test exponential certificates on the longest chain."""
        fits = sweeps[max(Suites.DECAY_SIZES)].fits

        for name in CERTIFIED_COLUMNS:
            assert fits[name].certificate, f"{name}: {fits[name].reason or fits[name].max_relative_residual}"
            assert fits[name].model.kind == "exponential"

    @pytest.mark.parametrize("name", CERTIFIED_COLUMNS)
    def test_correlation_length_stable(self, sweeps, name):
        """Test that the fitted xi of each column moves by less than the allowed spread across lengths."""
        fits = [sweeps[n].fits[name] for n in Suites.DECAY_SIZES]

        assert all(fit.certificate for fit in fits), [fit.reason or fit.max_relative_residual for fit in fits]
        assert_stable(np.array([fit.model.xi for fit in fits]))

    def test_attached_model(self, sweeps):
        """Test that the attached model respects the decoupling distance."""
        table = sweeps[max(Suites.DECAY_SIZES)]

        assert table.model.kind == "exponential"
        assert table.model.l0 >= 1
        assert table.model.xi == table.fits["delta"].model.xi


class TestMutualInformation:
    """Test the decay of I(A1:A2) with the separation."""

    @pytest.mark.parametrize("size", Suites.MI_BLOCKS)
    @pytest.mark.parametrize("n", Suites.DECAY_SIZES)
    def test_certificate(self, information_series, size, n):
        """Test a strictly decreasing series with an exponential certificate."""
        values = information_series[size, n]
        fit = fit_column(Suites.SEPARATIONS, values)

        assert fit.certificate, fit.reason or fit.max_relative_residual
        assert fit.model.kind == "exponential"
        assert np.all(np.diff(values) < 0)

    @pytest.mark.parametrize("size", Suites.MI_BLOCKS)
    def test_correlation_length_stable(self, information_series, size):
        """Test that the fitted xi moves by less than the allowed spread across lengths."""
        fits = [fit_column(Suites.SEPARATIONS, information_series[size, n]) for n in Suites.DECAY_SIZES]

        assert_stable(np.array([fit.model.xi for fit in fits]))


class TestAreaLaw:
    """Test saturation of end-block entropies."""

    @pytest.mark.parametrize("n", Suites.DECAY_SIZES)
    def test_end_blocks(self, chain_ground, n):
        """Test that S(rho_A) varies by less than the allowed spread for |A| from 3 to N/2."""
        state = chain_ground(n, Suites.DECAY_FIELD).state
        entropies = np.array([entanglement_entropy(state, end_block(state.window, k)) for k in range(3, n // 2 + 1)])

        assert entropies.min() > 0
        assert (entropies.max() - entropies.min()) / entropies.max() < Suites.ENTROPY_SPREAD


class TestPinsker:
    """Test the covariance bound by the mutual information."""

    def test_ghz_near_tight(self, ghz3):
        """Test 1 <= sqrt(2 ln 2) on GHZ with z observables."""
        a1, a2 = pair(ghz3.window, 1)
        report = pinsker_audit(ghz3, a1, a2, site_observable(a1, 0, "z"), site_observable(a2, 1, "z"))

        TestHelpers.assert_passes(report)
        assert report.lhs == pytest.approx(1.0, abs=Tolerances.EXACT)
        assert report.rhs == pytest.approx(Expected.GHZ_PINSKER_RHS, abs=Tolerances.HAND)
        assert report.inputs["mutual_information"] == pytest.approx(Expected.LN2)

    @pytest.mark.parametrize("n", Suites.DECAY_SIZES)
    def test_sweep_instances(self, chain_ground, n):
        """Test every separation with x and z observables."""
        state = chain_ground(n, Suites.DECAY_FIELD).state
        reports = []
        for separation in Suites.SEPARATIONS:
            a1, a2 = pair(state.window, separation)
            for axis in ("x", "z"):
                reports.append(
                    pinsker_audit(state, a1, a2, site_observable(a1, 0, axis), site_observable(a2, separation, axis))
                )

        TestHelpers.assert_all_pass(reports)

    def test_two_site_blocks(self, chain_ground):
        """Test blocks of two sites with the observable on their inner edge."""
        state = chain_ground(10, Suites.DECAY_FIELD).state
        window = state.window
        for start in (3, 5, 7):
            a1, a2 = Region(window, (0, 1)), Region(window, (start, start + 1))
            report = pinsker_audit(state, a1, a2, site_observable(a1, 1, "z"), site_observable(a2, start, "z"))
            TestHelpers.assert_passes(report)

    def test_larger_ghz(self):
        """Test that GHZ stays within the bound on more sites."""
        state = ghz_state(chain(6))
        a1, a2 = pair(state.window, 5)

        TestHelpers.assert_passes(
            pinsker_audit(state, a1, a2, site_observable(a1, 0, "z"), site_observable(a2, 5, "z"))
        )
