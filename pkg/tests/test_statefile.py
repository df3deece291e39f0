import json

import numpy as np
import pytest

from ssr_ent.cli.statefile import load_state, parse_state, state_to_dict, write_state
from ssr_ent.core.fock import ModeLayout, enumerate_basis
from ssr_ent.core.operators import DensityOperator
from ssr_ent.core.ssr import two_orbital_state
from ssr_ent.engine.catalysis import CatalystSpec, build_catalyst, wedge_density
from ssr_ent.errors import StateFileError

SHIPPED = {
    "example2_rho.json": lambda: two_orbital_state(1.0, 0.16, 0.5),
    "example2_sigma.json": lambda: two_orbital_state(0.0, 0.5, 0.09),
    "example2_tau.json": lambda: build_catalyst(CatalystSpec(0.5, 0.25, 0.25)),
    "example1_rho.json": lambda: two_orbital_state(0.5, 0.16, 0.1),
    "example1_sigma.json": lambda: two_orbital_state(0.5, 0.09, 0.3),
}

WIDE_LAYOUT = {"A": [f"a{i}" for i in range(12)], "B": [f"b{i}" for i in range(12)]}
WIDE_VACUUM = "0" * 12 + "," + "0" * 12


def parse_error(document):
    with pytest.raises(StateFileError) as excinfo:
        parse_state(document, "bad.json")
    return excinfo.value


@pytest.mark.parametrize("name", sorted(SHIPPED))
def test_shipped_states_match_builders(states_dir, name):
    loaded = load_state(states_dir / name)
    expected = SHIPPED[name]()
    assert loaded.layout == expected.layout
    assert loaded.basis == expected.basis
    np.testing.assert_allclose(loaded.matrix, expected.matrix, atol=1e-12)


class TestRoundTrip:
    def test_complex_entries(self, tmp_path):
        rho = two_orbital_state(0.5, 0.3, 0.6, alpha1=0.2j, alpha2=0.1 + 0.2j)
        path = write_state(tmp_path / "rho.json", rho)
        loaded = load_state(path)
        assert loaded.basis == rho.basis
        np.testing.assert_allclose(loaded.matrix, rho.matrix, atol=1e-12)
        assert json.loads(path.read_text())["layout"] == "two-orbital"

    def test_joint_state(self, tmp_path, example2):
        rho, _, tau = example2
        joint = wedge_density(rho, tau)
        path = write_state(tmp_path / "nested" / "joint.json", joint)
        data = json.loads(path.read_text())
        assert data["layout"] == "two-orbital-joint"
        assert data["basis"][0] == joint.basis[0].label
        loaded = load_state(path)
        np.testing.assert_allclose(loaded.matrix, joint.matrix, atol=1e-12)

    def test_custom_layout(self, tmp_path):
        layout = ModeLayout.build({"L": ["x"], "R": ["y"]})
        basis = tuple(enumerate_basis(layout))
        rho = DensityOperator(basis, np.diag([0.1, 0.2, 0.3, 0.4]), layout)
        loaded = load_state(write_state(tmp_path / "custom.json", rho))
        assert loaded.layout == layout
        np.testing.assert_allclose(loaded.matrix, rho.matrix)

    def test_pairs_stay_on_one_line(self, tmp_path):
        rho = two_orbital_state(0.5, 0.5, 0.5, alpha1=0.25j)
        text = write_state(tmp_path / "rho.json", rho).read_text()
        assert "[0.0, 0.125]" in text

    def test_state_to_dict(self, example2):
        data = state_to_dict(example2[2])
        assert data["layout"] == "two-orbital-catalyst"
        assert data["basis"] == ["00,11", "01,10", "10,01", "11,00"]
        assert len(data["matrix"]) == 4


class TestForms:
    def test_basis_list(self):
        rho = parse_state(
            '{"layout": "two-orbital", "basis": ["00,11", "11,00"],'
            ' "pure": [[0.6, "00,11"], [0.8, "11,00"]]}'
        )
        assert rho.dim == 2
        assert rho.matrix[0, 1].real == pytest.approx(0.48)

    def test_mapping_layout_defaults_to_full_space(self):
        rho = parse_state('{"layout": {"L": ["l"], "R": ["r"]}, "pure": [[1, "1,0"]]}')
        assert rho.dim == 4
        assert rho.layout.parties == ("L", "R")

    def test_segments_layout(self):
        rho = parse_state(
            json.dumps(
                {
                    "layout": {
                        "parties": ["A", "B"],
                        "segments": [[["a"], ["b"]], [["c"], ["d"]]],
                    },
                    "basis": {"number": 2},
                    "pure": [[[0.0, 1.0], "1,0;0,1"]],
                }
            )
        )
        assert rho.dim == 6
        assert rho.layout.modes_of("B") == ("b", "d")
        assert np.trace(rho.matrix).real == pytest.approx(1.0)

    def test_mixed(self):
        rho = parse_state(
            '{"layout": "two-orbital", "mixed": ['
            '{"weight": 0.25, "pure": [[1.0, "00,11"]]},'
            '{"weight": 0.75, "pure": [[1.0, "01,10"]]}]}'
        )
        assert sorted(np.diag(rho.matrix).real) == pytest.approx([0, 0, 0.25, 0.75])


class TestErrors:
    def test_invalid_json_line(self):
        error = parse_error(
            '{\n  "layout": "two-orbital",\n  "pure": [[1.0, "00,11"]],\n  oops\n}\n'
        )
        assert error.line == 4
        assert str(error).startswith("bad.json:4: invalid JSON")

    def test_bad_occupation_line(self):
        error = parse_error(
            '{\n  "layout": "two-orbital",\n  "pure": [\n    [1.0, "0x,11"]\n  ]\n}\n'
        )
        assert error.line == 4

    def test_unnormalized_amplitudes(self):
        error = parse_error('{\n  "layout": "two-orbital",\n  "pure": [[0.5, "00,11"]]\n}\n')
        assert error.line == 3
        assert "normalized" in str(error)

    def test_two_forms(self):
        error = parse_error(
            '{"layout": "two-orbital", "pure": [[1.0, "00,11"]], "matrix": [[1.0]]}'
        )
        assert "exactly one" in str(error)

    def test_unknown_preset(self):
        error = parse_error('{\n  "layout": "three-orbital",\n  "pure": [[1.0, "00,11"]]\n}')
        assert error.line == 2
        assert "unknown layout preset" in str(error)

    def test_matrix_dimension(self):
        error = parse_error('{\n  "layout": "two-orbital",\n  "matrix": [[1.0]]\n}')
        assert error.line == 3
        assert "4x4" in str(error)

    def test_matrix_not_positive(self):
        rows = [[1.2, 0, 0, 0], [0, -0.2, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
        error = parse_error(
            '{\n  "layout": "two-orbital",\n  "matrix": ' + json.dumps(rows) + "\n}"
        )
        assert error.line == 3
        assert "positive" in str(error)

    def test_ket_outside_basis(self):
        error = parse_error('{"layout": "two-orbital", "pure": [[1.0, "00,00"]]}')
        assert "not in the declared basis" in str(error)

    def test_boolean_amplitude(self):
        parse_error('{"layout": "two-orbital", "pure": [[true, "00,11"]]}')

    def test_duplicate_basis_ket(self):
        error = parse_error(
            '{"layout": "two-orbital", "basis": ["00,11", "00,11"], "pure": [[1.0, "00,11"]]}'
        )
        assert "twice" in str(error)

    def test_top_level_list(self):
        assert parse_error("[1, 2]").line == 1

    def test_missing_file(self, tmp_path):
        with pytest.raises(StateFileError) as excinfo:
            load_state(tmp_path / "absent.json")
        assert excinfo.value.line is None

    @pytest.mark.parametrize(
        "layout",
        [
            '{"A": 5, "B": ["b"]}',
            '{"parties": ["A", "B"], "segments": 5}',
            '{"parties": ["A", "B"], "segments": [[["a", 1], ["b"]]]}',
        ],
    )
    def test_malformed_layout(self, layout):
        error = parse_error('{\n  "layout": ' + layout + ',\n  "pure": [[1.0, "0,1"]]\n}\n')
        assert error.line == 2

    def test_basis_above_dense_limit(self):
        document = json.dumps({"layout": WIDE_LAYOUT, "pure": [[1.0, WIDE_VACUUM]]}, indent=2)
        error = parse_error(document)
        assert "16777216" in str(error)
        assert "dense limit" in str(error)

    def test_constrained_basis_above_dense_limit(self):
        pair = "1" + "0" * 11 + ",1" + "0" * 11
        document = json.dumps(
            {"layout": WIDE_LAYOUT, "basis": {"number": 2}, "pure": [[1.0, pair]]}
        )
        assert "276" in str(parse_error(document))

    def test_small_constrained_basis_over_many_modes(self):
        single = "1" + "0" * 11 + "," + "0" * 12
        document = json.dumps(
            {"layout": WIDE_LAYOUT, "basis": {"number": 1}, "pure": [[1.0, single]]}
        )
        rho = parse_state(document)
        assert rho.dim == 24
        assert rho.matrix[0, 0] == 0.0
