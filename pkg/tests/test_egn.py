"""Unit tests for EG_N triples, spectra and entanglement measures."""

import math

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from geometry.egn import (
    TRIVIAL_N2_WARNING,
    EgnTriple,
    ball_robustness_feasible,
    corner_images,
    distance_to_octahedron,
    egn_eigenvalues,
    egn_state,
    eigenvalue_spectrum,
    height,
    is_physical,
    measures,
    project_onto_octahedron,
    robustness,
    trace_distance_measure,
    triple_of,
)
from geometry.separability import physical_region, sample_region
from quantum.state import ghz
from utils.errors import ArgumentError, DomainError, UnphysicalTensorError

SQRT_HALF = 1 / math.sqrt(2)


@pytest.fixture
def ghz3_corner():
    """The rotated GHZ_3 triple, a vertex of the tetrahedron."""
    return EgnTriple(1.0, -1.0, 1.0, 3)


@pytest.fixture
def ghz4_rotated():
    """The rotated GHZ_4 triple, on the unit sphere."""
    return EgnTriple(SQRT_HALF, SQRT_HALF, 0.0, 4)


def physical_triples(n, seed, count):
    """Seeded physical triples of an N-qubit region."""
    return [
        EgnTriple.from_array(np.clip(p, -1, 1), n)
        for p in sample_region(physical_region(n), seed, count)
    ]


class TestEgnTriple:
    """Test triple construction and state conversion."""

    def test_needs_two_qubits(self):
        """Test N = 1 triples are refused."""
        with pytest.raises(ArgumentError):
            EgnTriple(0, 0, 0, 1)

    def test_coordinates_bounded(self):
        """Test coordinates outside [-1, 1] are refused."""
        with pytest.raises(ArgumentError):
            EgnTriple(1.5, 0, 0, 3)

    def test_abs_sum(self, ghz3_corner):
        """Test |d1| + |d2| + |d3|."""
        assert ghz3_corner.abs_sum == 3.0

    def test_ghz3_reads_zz(self):
        """Test the triple of GHZ_3 is (0, 0, 1)."""
        t = triple_of(ghz(3))
        np.testing.assert_allclose(t.as_array(), [0, 0, 1], atol=1e-12)

    def test_state_round_trip(self, ghz4_rotated):
        """Test the triple of an EG_N state is the triple it was built from."""
        t = triple_of(egn_state(ghz4_rotated))
        np.testing.assert_allclose(t.as_array(), ghz4_rotated.as_array(), atol=1e-12)

    def test_unphysical_state(self):
        """Test a triple outside the tetrahedron has no state."""
        with pytest.raises(UnphysicalTensorError):
            egn_state(EgnTriple(1.0, 1.0, 1.0, 3))

    def test_corner_images(self):
        """Test the four sign patterns generated by Paulis on qubit 1."""
        images = [t.as_array().tolist() for t in corner_images(EgnTriple(0.1, 0.2, 0.3, 3))]
        assert images == [
            [0.1, 0.2, 0.3],
            [0.1, -0.2, -0.3],
            [-0.1, 0.2, -0.3],
            [-0.1, -0.2, 0.3],
        ]

    @pytest.mark.parametrize("n,m", [(3, 3), (4, 4), (5, 4), (5, 5), (6, 5)])
    def test_measures_equal_on_corner_images(self, n, m):
        """Test Pauli corner images share robustness and trace-distance measure."""
        for t in physical_triples(n, seed=40 + n, count=8):
            values = [(robustness(i, m), trace_distance_measure(i, m)) for i in corner_images(t)]
            for value in values[1:]:
                assert value == pytest.approx(values[0], abs=1e-9)


class TestSpectrum:
    """Test the closed-form eigenvalues."""

    def test_tetra_vertex(self, ghz3_corner):
        """Test a tetrahedron vertex is a rank-two state."""
        assert egn_eigenvalues(ghz3_corner) == [(0.0, 6), (0.5, 2)]

    def test_odd_n_has_four_values(self):
        """Test a generic odd-N triple has four distinct eigenvalues."""
        pairs = egn_eigenvalues(EgnTriple(0.1, 0.2, 0.3, 5))
        assert len(pairs) == 4
        assert all(k == 8 for _, k in pairs)

    def test_even_n_pairs(self, ghz4_rotated):
        """Test even N gives 2^-N (1 +- |d|) with multiplicity 2^(N-1)."""
        assert egn_eigenvalues(ghz4_rotated) == [
            (pytest.approx(0.0, abs=1e-15), 8),
            (pytest.approx(2 / 16), 8),
        ]

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_matches_dense_spectrum(self, n):
        """Test the formula against LAPACK on sampled triples."""
        for t in physical_triples(n, seed=n, count=20):
            np.testing.assert_allclose(
                eigenvalue_spectrum(t), egn_state(t).eigenvalues(), atol=1e-12
            )

    def test_physicality(self, ghz3_corner):
        """Test vertices are physical and points beyond them are not."""
        assert is_physical(ghz3_corner)
        assert not is_physical(EgnTriple(1.0, 1.0, 1.0, 3))
        assert is_physical(EgnTriple(1.0, 1.0, 1.0, 5))


class TestOctahedron:
    """Test projection onto the unit octahedron."""

    def test_inside_unchanged(self):
        """Test interior points are fixed."""
        assert project_onto_octahedron([0.2, -0.3, 0.1]).tolist() == [0.2, -0.3, 0.1]
        assert distance_to_octahedron([0.2, -0.3, 0.1]) == 0.0

    def test_cube_corner(self):
        """Test (1, 1, 1) projects to (1/3, 1/3, 1/3) at distance 2/sqrt(3)."""
        np.testing.assert_allclose(project_onto_octahedron([1, 1, 1]), [1 / 3] * 3)
        assert distance_to_octahedron([1, 1, 1]) == pytest.approx(2 / math.sqrt(3))

    def test_sphere_point(self):
        """Test (1/sqrt2, 1/sqrt2, 0) lies 1 - 1/sqrt2 from the octahedron."""
        assert distance_to_octahedron([SQRT_HALF, SQRT_HALF, 0]) == pytest.approx(1 - SQRT_HALF)

    def test_signs_restored(self):
        """Test the projection keeps the signs of the input."""
        np.testing.assert_allclose(project_onto_octahedron([-2, 0, 0]), [-1, 0, 0])

    @hypothesis_settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(-3, 3), min_size=3, max_size=3))
    def test_projection_is_nearest(self, p):
        """Test the projection lies on the octahedron and beats its vertices."""
        x = project_onto_octahedron(p)
        assert np.abs(x).sum() <= 1 + 1e-12
        gap = np.linalg.norm(np.asarray(p) - x)
        for vertex in np.vstack([np.eye(3), -np.eye(3)]):
            assert gap <= np.linalg.norm(np.asarray(p) - vertex) + 1e-12


class TestMeasures:
    """Test robustness and trace-distance measures."""

    def test_odd_vertex_robustness(self, ghz3_corner):
        """Test the GHZ_3 vertex has robustness 1 for M = 3."""
        assert robustness(ghz3_corner, 3) == pytest.approx(1.0, abs=1e-9)
        assert trace_distance_measure(ghz3_corner, 3) == pytest.approx(0.5)

    def test_trivial_regime(self, ghz3_corner):
        """Test every measure vanishes for M <= floor(N/2) + 1."""
        assert robustness(ghz3_corner, 2) == 0.0
        assert trace_distance_measure(ghz3_corner, 2) == 0.0

    def test_even_robustness(self, ghz4_rotated):
        """Test the sphere point (1/sqrt2, 1/sqrt2, 0) has robustness 3 - 2 sqrt2."""
        assert robustness(ghz4_rotated, 4) == pytest.approx(3 - 2 * math.sqrt(2), abs=1e-8)

    def test_even_trace_distance(self, ghz4_rotated):
        """Test half the distance to the octahedron, (1 - 1/sqrt2) / 2."""
        assert trace_distance_measure(ghz4_rotated, 4) == pytest.approx((1 - SQRT_HALF) / 2)

    def test_inside_octahedron_is_zero(self):
        """Test separable triples certify nothing."""
        t = EgnTriple(0.2, 0.2, 0.2, 4)
        assert robustness(t, 4) == 0.0
        assert trace_distance_measure(t, 4) == 0.0

    def test_even_feasibility_boundary(self, ghz4_rotated):
        """Test feasibility switches at 3 - 2 sqrt2."""
        d = ghz4_rotated.as_array()
        assert not ball_robustness_feasible(d, 0.17)
        assert ball_robustness_feasible(d, 0.172)

    def test_m_out_of_range(self, ghz3_corner):
        """Test M outside [2, N] raises ArgumentError."""
        with pytest.raises(ArgumentError):
            robustness(ghz3_corner, 4)
        with pytest.raises(ArgumentError):
            measures(ghz3_corner, 1)

    def test_unphysical_triple(self):
        """Test measures of unphysical triples raise DomainError."""
        with pytest.raises(DomainError):
            trace_distance_measure(EgnTriple(1.0, 1.0, 1.0, 3), 3)

    def test_odd_height_relation(self):
        """Test odd-N robustness is the height and trace distance half of it."""
        for t in physical_triples(5, seed=2, count=50):
            result = measures(t, 5)
            assert result.robustness == pytest.approx(max(height(t), 0.0))
            assert result.trace_distance_measure == pytest.approx(result.robustness / 2)

    def test_two_qubit_warning(self):
        """Test N = 2 results carry the warning and certify nothing."""
        result = measures(EgnTriple(0.0, 0.0, 1.0, 2), 2)
        assert result.warning == TRIVIAL_N2_WARNING
        assert result.robustness == 0.0
        assert not result.nontrivial

    def test_two_qubit_warning_silenced(self, monkeypatch):
        """Test warn=False keeps the warning on the result without logging it."""
        calls = []
        monkeypatch.setattr("geometry.egn.logger.warning", calls.append)
        result = measures(EgnTriple(0.0, 0.0, 1.0, 2), 2, warn=False)
        assert result.warning == TRIVIAL_N2_WARNING
        assert calls == []
        measures(EgnTriple(0.0, 0.0, 1.0, 2), 2)
        assert calls == [TRIVIAL_N2_WARNING]

    def test_result_dict(self, ghz3_corner):
        """Test the serialized result."""
        payload = measures(ghz3_corner, 3).to_dict()
        assert payload["m"] == 3
        assert payload["nontrivial"] is True
        assert "warning" not in payload
