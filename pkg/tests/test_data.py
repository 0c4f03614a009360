"""Shared test data, constants, and helper functions for tests."""

import json
import math
from pathlib import Path

from entanglab.models import DensityMatrix


class Seeds:
    """Seeds for reproducible randomized cases."""

    DEFAULT = 20240611
    SWEEP = 7


class Tolerances:
    """Numerical tolerances used in assertions."""

    EXACT = 1e-12
    AUDIT = 1e-10
    HAND = 1e-5
    SOLVER = 1e-9


class Expected:
    """Hand-evaluated reference values."""

    LN2 = math.log(2.0)
    # diag(0.5, 0.3, 0.2)
    SPECTRUM = (0.5, 0.3, 0.2)
    SPECTRUM_ENTROPY = 1.02965
    SPECTRUM_RENYI2 = 0.96758
    SPECTRUM_TAIL1 = 0.5
    # Bell pair against the product of its marginal square roots
    BELL_OVERLAP = 1.0 / math.sqrt(2.0)
    BELL_FIDELITY_GAP = 0.58579
    # GHZ Pinsker: 1 <= sqrt(2 ln 2)
    GHZ_PINSKER_RHS = 1.17741
    # Fannes: diag(1, 0) vs diag(1/2, 1/2)
    FANNES_LHS = 0.69315
    FANNES_RHS = 1.19315
    # sum_k e^{-k} (1 + k)
    EXPONENTIAL_I1 = 2.50265
    # two-site chain, J = 1, b = 1
    TWO_SITE_ENERGY = -math.sqrt(5.0)


class Suites:
    """Instance counts and parameter grids of the slow acceptance suites."""

    RANDOM_STATES = 200
    RANDOM_MEASURES = 500
    CONTINUITY_INSTANCES = 1000
    PHASE_STATES = 50
    GRID_STEPS = 64
    FKG_FIELDS = (1.5, 2.0, 4.0)
    DSS_FIELDS = (1.5, 2.0)
    DSS_MAX_DOMAIN = 3
    DECAY_FIELD = 2.0
    DECAY_SIZES = (10, 12, 14)
    DECAY_WIDTHS = (1, 2, 3, 4, 5)
    DECAY_BLOCK = 4
    SEPARATIONS = (1, 2, 3, 4, 5, 6)
    MI_BLOCKS = (1, 2)
    XI_SPREAD = 0.15
    ENTROPY_SPREAD = 0.05


class Models:
    """Model spec payloads."""

    ISING_SINGLE = {"kind": "ising", "dims": [1], "couplings": [], "b": 1.0}
    ISING_PAIR_CLASSICAL = {"kind": "ising", "dims": [2], "couplings": [{"offset": [1], "J": 1.0}], "b": 0.0}
    ISING_PAIR = {"kind": "ising", "dims": [2], "couplings": [{"offset": [1], "J": 1.0}], "b": 1.0}
    ISING_SMALL = {"kind": "ising", "dims": [6], "couplings": [{"offset": [1], "J": 1.0}], "b": 2.0}
    ISING_SQUARE = {
        "kind": "ising",
        "dims": [2, 2],
        "couplings": [{"offset": [1, 0], "J": 1.0}, {"offset": [0, 1], "J": 0.5}],
        "b": 1.5,
        "hz": 0.3,
        "boundary_hz": 0.2,
    }
    GIBBS_CHAIN = {"kind": "gibbs", "dims": [8], "couplings": [{"offset": [1], "J": 1.0}], "beta": 0.7, "h": 0.2}
    GIBBS_PHASED = {
        "kind": "gibbs",
        "dims": [6],
        "couplings": [{"offset": [1], "J": 1.0}],
        "beta": 0.5,
        "phase_couplings": [{"offset": [1], "J": 0.9}],
        "phase_field": 0.4,
    }


class Configs:
    """Experiment config payloads for schema and CLI tests."""

    GHZ_AUDIT = {
        "model": {"kind": "hand", "name": "ghz", "dims": [4]},
        "regions": {"a": {"sites": [0]}},
        "widths": [1, 2],
        "seed": 3,
    }
    ISING_SCAN = {
        "model": Models.ISING_SMALL,
        "regions": {"a": {"lo": [0], "hi": [1]}},
        "widths": [1, 2, 3],
        "block": 1,
        "separations": [1, 2, 3],
        "seed": 5,
    }
    RANDOM_ORACLE = {
        "model": {"kind": "random", "dims": [4]},
        "regions": {"a": {"sites": [1]}},
        "widths": [1],
        "grid_steps": 16,
        "seed": 11,
    }
    ISING_ORACLE = {
        "model": Models.ISING_SMALL,
        "regions": {"a": {"sites": [2]}},
        "widths": [1],
        "grid_steps": 16,
        "seed": 11,
    }
    GIBBS_MARKOV = {
        "model": Models.GIBBS_CHAIN,
        "regions": {"a": {"lo": [0], "hi": [1]}},
        "widths": [1, 2, 3],
        "seed": 1,
    }


class TestHelpers:
    """Helper functions for tests."""

    @staticmethod
    def write_config(directory: Path, payload: dict, name: str = "config.json") -> Path:
        """Write a config payload as JSON and return its path."""
        path = directory / name
        path.write_text(json.dumps(payload, indent=2))
        return path

    @staticmethod
    def assert_all_pass(reports):
        """Assert that no non-informational report failed."""
        failed = [(report.inequality, report.lhs, report.rhs) for report in reports if report.failed]
        assert not failed, f"failed audits: {failed}"

    @staticmethod
    def assert_passes(report):
        assert report.passed, f"{report.inequality}: {report.lhs} > {report.rhs}"

    @staticmethod
    def assert_valid_density_matrix(rho: DensityMatrix):
        """Assert that rho is Hermitian, unit trace and positive."""
        assert abs(rho.matrix.trace().real - 1.0) < Tolerances.AUDIT
        assert (rho.spectrum >= 0).all()
        assert abs(rho.matrix - rho.matrix.conj().T).max() < Tolerances.EXACT

    @staticmethod
    def assert_validation_error_on_field(exc_info, field: str):
        """Assert that a pydantic ValidationError mentions the field."""
        errors = exc_info.value.errors()
        locations = [".".join(str(part) for part in error["loc"]) for error in errors]
        assert any(field in location for location in locations), f"no error on {field}: {locations}"

    @staticmethod
    def report_by_name(reports, inequality: str):
        """Reports of one inequality, in order."""
        return [report for report in reports if report.inequality == inequality]
