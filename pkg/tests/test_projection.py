"""Unit tests for Pauli-generated projections and spec verification."""

import json

import numpy as np
import pytest

from evaluation.oracles import dense_projection_oracle
from quantum import projection
from quantum.pauli import PauliString, all_strings, commutes, dense_matrix, generate_group
from quantum.projection import (
    EnipSpec,
    egn_readout_strings,
    load_spec,
    parse_spec,
    project_group_average,
    project_recursive,
    standard_egn_spec,
    verify_spec,
)
from quantum.state import correlation, ghz, mix, random_state, to_bloch
from utils.errors import (
    ArgumentError,
    DimensionError,
    InvalidSpecError,
    SizeLimitError,
    SpecConstructionError,
    StateFileError,
)


def strings(*indices):
    """Frozen set of Pauli strings from index tuples."""
    return frozenset(PauliString(tuple(i)) for i in indices)


@pytest.fixture
def zz_only_spec():
    """A spec whose surviving set is too small for its single generator."""
    return EnipSpec(
        n_qubits=2,
        surviving=strings((0, 0), (3, 3)),
        generators=(PauliString((3, 3)),),
    )


class TestStandardSpec:
    """Test the standard EG_N generator family."""

    def test_three_qubit_survivors(self):
        """Test EG_3 keeps exactly the identity and the three readout strings."""
        spec = standard_egn_spec(3)
        assert spec.surviving == strings((0, 0, 0), (1, 1, 2), (2, 2, 2), (3, 3, 0))
        assert len(spec.generators) == 4
        assert spec.label == "egn_standard:single_site"

    def test_two_qubit_family(self):
        """Test EG_2 uses {sigma_3 sigma_3, identity sigma_2}."""
        spec = standard_egn_spec(2)
        assert spec.generators == (PauliString((3, 3)), PauliString((0, 2)))

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7])
    def test_exhaustive_verification(self, n):
        """Test the standard spec passes the full 4^N scan."""
        report = verify_spec(standard_egn_spec(n))
        assert report.passed
        assert report.method == "exhaustive"
        assert report.matches_surviving
        assert set(report.commutant) == {PauliString.identity(n), *egn_readout_strings(n)}

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [8, 9, 10])
    def test_counting_verification(self, n):
        """Test larger specs are certified by counting the commutant."""
        report = verify_spec(standard_egn_spec(n))
        assert report.passed
        assert report.method == "counting"
        assert report.group_size == 2 ** (2 * n - 2)
        assert len(report.surviving) == 4

    def test_too_few_qubits(self):
        """Test N = 1 is refused."""
        with pytest.raises(ArgumentError):
            standard_egn_spec(1)

    def test_too_many_qubits(self):
        """Test N above EGN_MAX_QUBITS is refused."""
        with pytest.raises(SizeLimitError):
            standard_egn_spec(11)

    def test_construction_failure_reports_condition(self, monkeypatch):
        """Test a family that never verifies raises SpecConstructionError."""
        monkeypatch.setattr(
            projection,
            "_standard_generators",
            lambda n, variant: [PauliString.single(n, 0, 3)],
        )
        with pytest.raises(SpecConstructionError) as excinfo:
            standard_egn_spec.__wrapped__(3)
        assert "anticommutes" in excinfo.value.condition


class TestVerifySpec:
    """Test failure reporting of verify_spec."""

    def test_commutant_larger_than_survivors(self, zz_only_spec):
        """Test extra commuting strings are reported, not raised."""
        report = verify_spec(zz_only_spec)
        assert not report.passed
        assert not report.matches_surviving
        assert len(report.commutant) == 8
        assert "outside the surviving set" in report.first_violation

    def test_missing_identity(self):
        """Test the all-zero string must survive."""
        spec = EnipSpec(2, strings((3, 3)), (PauliString((3, 3)),))
        assert "all-zero" in verify_spec(spec).first_violation

    def test_repeated_group_strings(self):
        """Test dependent generators are reported."""
        spec = EnipSpec(
            2,
            strings((0, 0)),
            (PauliString((1, 1)), PauliString((2, 2)), PauliString((3, 3))),
        )
        report = verify_spec(spec)
        assert not report.distinct
        assert "pairwise distinct" in report.first_violation

    def test_anticommuting_survivor(self):
        """Test a surviving string must commute with every generator."""
        spec = EnipSpec(2, strings((0, 0), (1, 0)), (PauliString((3, 3)),))
        assert "anticommutes" in verify_spec(spec).first_violation

    def test_report_dict(self):
        """Test the report serializes strings as index lists."""
        payload = verify_spec(standard_egn_spec(2)).to_dict()
        assert payload["passed"] is True
        assert payload["commutant"] == [[0, 0], [1, 2], [2, 2], [3, 0]]
        assert payload["group_size"] == 4

    def test_mismatched_dimensions(self):
        """Test strings on the wrong qubit count raise DimensionError."""
        with pytest.raises(DimensionError):
            EnipSpec(2, strings((0, 0, 0)), ())


class TestProjection:
    """Test the group-average and sequential projections."""

    def test_ghz3_projection(self):
        """Test GHZ_3 projects onto the triple (0, 0, 1)."""
        spec = standard_egn_spec(3)
        projected = project_group_average(ghz(3), spec)
        values = {alpha: correlation(projected, alpha) for alpha in spec.surviving}
        assert values[PauliString((3, 3, 0))] == pytest.approx(1.0)
        assert values[PauliString((1, 1, 2))] == pytest.approx(0.0, abs=1e-12)
        assert values[PauliString((2, 2, 2))] == pytest.approx(0.0, abs=1e-12)

    def test_ghz4_projection(self):
        """Test GHZ_4 keeps sigma_2^4 = +1 and loses the other readouts."""
        projected = project_recursive(ghz(4), standard_egn_spec(4))
        d1, d2, d3 = (correlation(projected, s) for s in egn_readout_strings(4))
        assert (d1, d2, d3) == pytest.approx((0.0, 1.0, 0.0), abs=1e-12)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_paths_agree_with_dense_oracle(self, n):
        """Test group average, sequential and tensor-zeroing projections agree."""
        spec = standard_egn_spec(n)
        rho = random_state(n, seed=n)
        by_group = project_group_average(rho, spec)
        np.testing.assert_allclose(by_group.matrix, project_recursive(rho, spec).matrix, atol=1e-12)
        np.testing.assert_allclose(
            by_group.matrix, dense_projection_oracle(rho, spec.surviving).matrix, atol=1e-12
        )

    def test_idempotent(self):
        """Test projecting twice changes nothing."""
        spec = standard_egn_spec(3)
        once = project_group_average(random_state(3, seed=5), spec)
        np.testing.assert_allclose(project_group_average(once, spec).matrix, once.matrix, atol=1e-12)

    def test_only_survivors_remain(self):
        """Test every non-surviving correlation vanishes."""
        spec = standard_egn_spec(3)
        support = to_bloch(project_group_average(random_state(3, seed=9), spec)).support(1e-12)
        assert set(support) <= spec.surviving

    def test_large_group_average_switches_to_sequential(self):
        """Test the group average above the threshold still equals the sequential map."""
        spec = standard_egn_spec(6)
        rho = random_state(6, seed=1)
        np.testing.assert_allclose(
            project_group_average(rho, spec).matrix,
            project_recursive(rho, spec).matrix,
            atol=1e-12,
        )

    def test_invalid_spec_refused(self, zz_only_spec):
        """Test projecting with a failing spec raises InvalidSpecError."""
        with pytest.raises(InvalidSpecError):
            project_group_average(ghz(2), zz_only_spec)

    def test_dimension_mismatch(self):
        """Test a spec on a different qubit count raises DimensionError."""
        with pytest.raises(DimensionError):
            project_recursive(ghz(3), standard_egn_spec(2))

    def test_convex(self):
        """Test projecting a mixture gives the same mixture of projections."""
        spec = standard_egn_spec(3)
        a, b = random_state(3, seed=2), random_state(3, seed=3)
        projected = project_group_average(mix([a, b], [0.3, 0.7]), spec)
        expected = (
            0.3 * project_group_average(a, spec).matrix
            + 0.7 * project_group_average(b, spec).matrix
        )
        np.testing.assert_allclose(projected.matrix, expected, atol=1e-12)


class TestGroupStructure:
    """Test the Pauli group behind the standard EG_3 projection."""

    @pytest.fixture
    def group3(self):
        """Subset-products of the standard EG_3 generators."""
        return generate_group(standard_egn_spec(3).generators)

    def test_group_size(self, group3):
        """Test n generators give 2^n elements with distinct strings."""
        assert len(group3) == 2 ** len(standard_egn_spec(3).generators)
        assert len({g.string for g in group3}) == len(group3)

    def test_commutes_with_all_or_half(self, group3):
        """Test every string commutes with the whole group or with exactly half of it."""
        surviving = standard_egn_spec(3).surviving
        for alpha in all_strings(3):
            count = sum(commutes(alpha, g) for g in group3)
            assert count in (len(group3), len(group3) // 2)
            assert (count == len(group3)) == (alpha in surviving)

    def test_average_of_conjugations(self, group3):
        """Test the group average equals the mean of g rho g^dagger over dense matrices."""
        rho = random_state(3, seed=12)
        conjugations = [dense_matrix(g) @ rho.matrix @ dense_matrix(g).conj().T for g in group3]
        np.testing.assert_allclose(
            project_group_average(rho, standard_egn_spec(3)).matrix,
            sum(conjugations) / len(group3),
            atol=1e-12,
        )


class TestSpecFiles:
    """Test JSON spec files."""

    def test_load_standard_spec(self, tmp_path):
        """Test a saved standard spec loads and verifies."""
        path = tmp_path / "egn3.json"
        path.write_text(json.dumps(standard_egn_spec(3).to_dict()))
        spec = load_spec(path)
        assert spec.label == "egn3"
        assert verify_spec(spec).passed

    def test_malformed_spec(self):
        """Test a document missing fields raises StateFileError."""
        with pytest.raises(StateFileError):
            parse_spec({"n_qubits": 2, "surviving": [[0, 0]]})

    def test_bad_indices(self):
        """Test Pauli indices outside {0,1,2,3} raise StateFileError."""
        with pytest.raises(StateFileError):
            parse_spec({"n_qubits": 1, "surviving": [[0]], "generators": [[5]]})

    def test_unreadable_file(self, tmp_path):
        """Test a missing spec file raises StateFileError."""
        with pytest.raises(StateFileError):
            load_spec(tmp_path / "missing.json")
