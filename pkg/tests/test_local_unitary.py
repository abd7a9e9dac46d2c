"""Unit tests for the local-unitary bound optimizer."""

import math

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st
from pydantic import ValidationError

from geometry.egn import triple_of
from optimization.local_unitary import (
    TABLE_ANGLES,
    LocalUnitaryParams,
    OptimizerConfig,
    _select_starts,
    _shared_grid,
    bound_report,
    canonicalize,
    ghz_table,
    optimize,
    pauli_frame,
    rotated_triple,
    su2,
    su2_angles,
    table_angles,
)
from quantum.pauli import PAULI_MATRICES
from quantum.state import apply_local_unitary, ghz, maximally_mixed, random_state
from utils.errors import ArgumentError

SQRT_HALF = 1 / math.sqrt(2)

EXPECTED_TABLE = {
    3: (1.0, -1.0, 1.0),
    4: (SQRT_HALF, SQRT_HALF, 0.0),
    5: (1.0, 1.0, 1.0),
    6: (SQRT_HALF, -SQRT_HALF, 0.0),
    7: (1.0, -1.0, 1.0),
}

ANGLES = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def with_paulis(rho, frame):
    """Conjugate rho by the product of Pauli matrices with the given indices."""
    return apply_local_unitary(rho, [PAULI_MATRICES[p] for p in frame])


@pytest.fixture
def small_search():
    """A coarse search that keeps tests fast."""
    return OptimizerConfig(grid_points=6, top_k=2, max_iterations=200)


class TestSu2:
    """Test the angle parametrization."""

    def test_identity(self):
        """Test zero angles give the identity."""
        np.testing.assert_allclose(su2(0, 0, 0), np.eye(2))

    @hypothesis_settings(max_examples=50, deadline=None)
    @given(ANGLES, ANGLES, ANGLES)
    def test_special_unitary(self, theta, psi, phi):
        """Test every angle triple gives a determinant-one unitary."""
        u = su2(theta, psi, phi)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-12)
        assert np.linalg.det(u) == pytest.approx(1.0)

    @hypothesis_settings(max_examples=50, deadline=None)
    @given(ANGLES, ANGLES, ANGLES)
    def test_canonical_angles_same_rotation(self, theta, psi, phi):
        """Test canonical angles lie in range and change U by a sign at most."""
        params = canonicalize(LocalUnitaryParams.shared(theta, psi, phi, 1))
        t, p, f = params.angles[0]
        assert 0 <= t <= math.pi
        assert 0 <= p < 2 * math.pi and 0 <= f < 2 * math.pi
        u, v = su2(theta, psi, phi), su2(t, p, f)
        assert np.allclose(u, v, atol=1e-9) or np.allclose(u, -v, atol=1e-9)

    def test_non_finite_angles(self):
        """Test NaN angles are refused."""
        with pytest.raises(ArgumentError):
            su2(float("nan"), 0, 0)

    @hypothesis_settings(max_examples=50, deadline=None)
    @given(ANGLES, ANGLES, ANGLES, st.integers(0, 3))
    def test_angles_recovered_from_matrix(self, theta, psi, phi, pauli):
        """Test su2_angles inverts su2 up to a phase, Pauli factors included."""
        u = su2(theta, psi, phi) @ PAULI_MATRICES[pauli]
        t, p, f = su2_angles(u)
        assert 0 <= t <= math.pi
        assert abs(np.trace(su2(t, p, f).conj().T @ u)) == pytest.approx(2.0, abs=1e-9)

    def test_pauli_angles(self):
        """Test sigma_1 is a half turn."""
        assert su2_angles(PAULI_MATRICES[1])[0] == pytest.approx(math.pi, abs=1e-12)


class TestLocalUnitaryParams:
    """Test parameter containers."""

    def test_shared_vector(self):
        """Test symmetric parameters pack into three numbers."""
        params = LocalUnitaryParams.shared(0.1, 0.2, 0.3, 4)
        assert params.n_qubits == 4
        assert params.to_vector().tolist() == [0.1, 0.2, 0.3]
        assert params.to_dict()["theta"] == 0.1

    def test_per_qubit_vector(self):
        """Test per-qubit parameters unpack three angles per qubit."""
        params = LocalUnitaryParams.from_vector(range(6), 2, symmetric=False)
        assert params.angles == ((0.0, 1.0, 2.0), (3.0, 4.0, 5.0))
        assert "theta" not in params.to_dict()

    def test_symmetric_must_share(self):
        """Test symmetric parameters with different triples are refused."""
        with pytest.raises(ArgumentError):
            LocalUnitaryParams(((0, 0, 0), (1, 0, 0)), symmetric=True)

    def test_table_angles(self):
        """Test pi/(4N) for odd N and pi/(8N) for even N."""
        assert table_angles(3) == (0.0, math.pi / 12, math.pi / 12)
        assert table_angles(4) == (0.0, math.pi / 32, math.pi / 32)
        assert sorted(TABLE_ANGLES) == [3, 4, 5, 6, 7]
        with pytest.raises(ArgumentError):
            table_angles(1)


class TestRotatedTriple:
    """Test the two rotation paths."""

    def test_paths_agree(self):
        """Test rotating operators equals rotating the state."""
        rho = random_state(3, seed=4)
        params = LocalUnitaryParams.from_vector(np.linspace(0.1, 2.5, 9), 3, symmetric=False)
        by_operator = rotated_triple(rho, params, method="operator")
        by_state = rotated_triple(rho, params, method="state")
        np.testing.assert_allclose(by_operator.as_array(), by_state.as_array(), atol=1e-12)

    def test_identity_frame(self):
        """Test the identity frame reads the unrotated triple."""
        rho = random_state(4, seed=2)
        np.testing.assert_allclose(
            rotated_triple(rho, LocalUnitaryParams.identity(4)).as_array(),
            triple_of(rho).as_array(),
            atol=1e-14,
        )

    def test_qubit_mismatch(self):
        """Test parameters for the wrong qubit count are refused."""
        with pytest.raises(ArgumentError):
            rotated_triple(ghz(3), LocalUnitaryParams.identity(2))

    def test_unknown_method(self):
        """Test an unknown rotation method is refused."""
        with pytest.raises(ArgumentError):
            rotated_triple(ghz(3), LocalUnitaryParams.identity(3), method="matrix")

    @pytest.mark.parametrize("n", [3, 4])
    def test_table_angles_rotate_state(self, n):
        """Test rotating GHZ_N itself by the table angles gives the known triple."""
        u = su2(*table_angles(n))
        rotated = apply_local_unitary(ghz(n), [u] * n)
        expected = list(EXPECTED_TABLE[n])
        assert triple_of(rotated).as_array().tolist() == pytest.approx(expected, abs=1e-12)


class TestGhzTable:
    """Test the rotated GHZ reproduction."""

    def test_known_angles(self):
        """Test N = 3..7 reproduce the known triples and sums."""
        rows = ghz_table(3, 7)
        assert [row["n"] for row in rows] == [3, 4, 5, 6, 7]
        for row in rows:
            expected = EXPECTED_TABLE[row["n"]]
            assert (row["d1"], row["d2"], row["d3"]) == pytest.approx(expected, abs=1e-9)
            assert row["abs_sum"] == pytest.approx(sum(abs(x) for x in expected), abs=1e-9)
            assert row["theta"] == 0.0

    def test_invalid_range(self):
        """Test ranges starting below N = 2 are refused."""
        with pytest.raises(ArgumentError):
            ghz_table(1, 3)
        with pytest.raises(ArgumentError):
            ghz_table(5, 4)

    @pytest.mark.slow
    def test_search_reaches_table(self, small_search):
        """Test the shared-angle search finds sum 3 for GHZ_3 and sqrt2 for GHZ_4."""
        rows = ghz_table(3, 4, search=True, config=small_search)
        assert rows[0]["abs_sum"] == pytest.approx(3.0, abs=1e-6)
        assert rows[1]["abs_sum"] >= math.sqrt(2) - 1e-9

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
    def test_search_without_table_seeds(self, n):
        """Test the default search alone reaches the known sum for N = 3..7."""
        report = optimize(ghz(n), OptimizerConfig(include_table_seeds=False))
        expected = sum(abs(x) for x in EXPECTED_TABLE[n])
        assert report.abs_sum >= expected - 1e-6
        np.testing.assert_allclose(
            rotated_triple(ghz(n), report.best_params).as_array(),
            report.best_triple.as_array(),
            atol=1e-12,
        )


class TestStartSelection:
    """Test the grid and the choice of refinement starts."""

    def test_phase_grid_offset(self):
        """Test psi + phi at theta = 0 runs over odd multiples of pi / points."""
        grid = _shared_grid(lambda x: 0.0, 4)
        assert len(grid) == 64
        sums = sorted({round(x[1] + x[2], 12) for _, x in grid if x[0] == 0.0})
        assert sums == pytest.approx([(2 * m + 1) * math.pi / 4 for m in range(7)])

    def test_equal_values_refined_once(self):
        """Test grid points sharing one objective value give a single start."""
        grid = [(2.0, np.array([1.0, a, 0.0])) for a in (0.1, 0.2, 0.3)]
        grid += [(1.5, np.array([0.0, 0.1, 0.0])), (1.0, np.array([0.0, 0.2, 0.0]))]
        starts = _select_starts(grid, top_k=2)
        assert [x.tolist() for x in starts] == [[1.0, 0.1, 0.0], [0.0, 0.1, 0.0]]

    def test_theta_zero_level_always_refined(self):
        """Test the best theta = 0 point is a start even outside the top values."""
        grid = [(2.0, np.array([1.0, 0.1, 0.0])), (1.9, np.array([1.0, 0.2, 0.0]))]
        grid += [(1.5, np.array([0.0, 0.1, 0.0])), (1.0, np.array([0.0, 0.2, 0.0]))]
        starts = _select_starts(grid, top_k=1)
        assert [x.tolist() for x in starts] == [[1.0, 0.1, 0.0], [0.0, 0.1, 0.0]]


class TestPauliFrame:
    """Test the canonical Pauli frame."""

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_ghz_already_canonical(self, n):
        """Test GHZ states need no Pauli correction."""
        assert pauli_frame(ghz(n)) == (0,) * n

    def test_flipped_ghz_restored(self):
        """Test sigma_1 on the first qubit of GHZ_3 is undone by the frame."""
        shifted = with_paulis(ghz(3), (1, 0, 0))
        restored = with_paulis(shifted, pauli_frame(shifted))
        np.testing.assert_allclose(restored.matrix, ghz(3).matrix, atol=1e-12)

    @pytest.mark.parametrize("frame", [(1, 0, 0), (0, 2, 3), (3, 3, 1)])
    def test_frame_class_shares_canonical_state(self, frame):
        """Test states differing by Pauli factors reach one canonical state."""
        rho = random_state(3, seed=4)
        shifted = with_paulis(rho, frame)
        np.testing.assert_allclose(
            with_paulis(shifted, pauli_frame(shifted)).matrix,
            with_paulis(rho, pauli_frame(rho)).matrix,
            atol=1e-12,
        )


class TestOptimize:
    """Test the frame search."""

    def test_two_qubit_warning_logged_once(self, monkeypatch):
        """Test a 2-qubit report logs the EG_2 warning exactly once."""
        calls = []
        monkeypatch.setattr("geometry.egn.logger.warning", calls.append)
        monkeypatch.setattr("optimization.local_unitary.logger.warning", calls.append)
        report = bound_report(ghz(2), LocalUnitaryParams.identity(2))
        assert len(calls) == 1
        assert report.bounds[2].warning == calls[0]

    def test_never_worse_than_identity(self, small_search):
        """Test the optimum is at least the unrotated sum."""
        rho = random_state(3, seed=21)
        report = optimize(rho, small_search)
        assert report.abs_sum >= triple_of(rho).abs_sum - 1e-12

    def test_report_recomputed_from_angles(self, small_search):
        """Test the reported triple is the triple of the reported frame."""
        report = optimize(ghz(3), small_search)
        np.testing.assert_allclose(
            rotated_triple(ghz(3), report.best_params).as_array(),
            report.best_triple.as_array(),
            atol=1e-12,
        )
        assert report.abs_sum == pytest.approx(3.0, abs=1e-6)
        assert sorted(report.bounds) == [2, 3]
        assert report.bounds[3].robustness == pytest.approx(1.0, abs=1e-6)

    def test_deterministic(self, small_search):
        """Test identical inputs give identical frames."""
        rho = random_state(3, seed=8)
        first, second = optimize(rho, small_search), optimize(rho, small_search)
        assert first.best_params == second.best_params
        assert first.evaluations == second.evaluations

    def test_per_qubit_refinement(self, small_search):
        """Test the per-qubit stage never loses to the shared optimum."""
        rho = random_state(3, seed=13)
        shared = optimize(rho, small_search)
        per_qubit = optimize(
            rho, small_search.model_copy(update={"symmetric": False, "random_starts": 1})
        )
        assert per_qubit.abs_sum >= shared.abs_sum - 1e-9

    @pytest.mark.parametrize("frame", [(1, 0, 0), (0, 2, 3), (3, 3, 1)])
    def test_pauli_frame_invariance(self, small_search, frame):
        """Test Pauli factors on the input leave the optimized sum unchanged."""
        rho = random_state(3, seed=4)
        shifted = with_paulis(rho, frame)
        assert optimize(shifted, small_search).abs_sum == pytest.approx(
            optimize(rho, small_search).abs_sum, abs=1e-6
        )

    def test_pauli_frame_invariance_per_qubit(self, small_search):
        """Test the per-qubit search absorbs Pauli factors too."""
        config = small_search.model_copy(update={"symmetric": False, "random_starts": 1})
        rho = random_state(3, seed=9)
        shifted = with_paulis(rho, (2, 0, 1))
        assert optimize(shifted, config).abs_sum == pytest.approx(
            optimize(rho, config).abs_sum, abs=1e-6
        )

    def test_flipped_ghz_reaches_table(self, small_search):
        """Test GHZ_3 with sigma_1 on one qubit still reaches sum 3 in shared mode."""
        shifted = with_paulis(ghz(3), (1, 0, 0))
        report = optimize(shifted, small_search)
        assert report.abs_sum == pytest.approx(3.0, abs=1e-6)
        assert not report.best_params.symmetric
        np.testing.assert_allclose(
            rotated_triple(shifted, report.best_params).as_array(),
            report.best_triple.as_array(),
            atol=1e-12,
        )

    def test_distance_objective(self, small_search):
        """Test the even-N distance objective still certifies the GHZ_4 frame."""
        config = small_search.model_copy(update={"objective": "octahedron_distance"})
        report = optimize(ghz(4), config)
        assert report.objective == "octahedron_distance"
        assert report.bounds[4].trace_distance_measure >= (1 - SQRT_HALF) / 2 - 1e-9

    def test_maximally_mixed(self):
        """Test the maximally mixed state certifies nothing."""
        report = bound_report(maximally_mixed(3), LocalUnitaryParams.identity(3))
        assert report.abs_sum == 0.0
        assert all(result.robustness == 0.0 for result in report.bounds.values())

    def test_config_validation(self):
        """Test non-positive tolerances are refused."""
        with pytest.raises(ValidationError):
            OptimizerConfig(tolerance=0)
