"""CLI commands and their exit-code contract."""

import json
import shutil

import pytest

from dacmatrix.cli import main

from conftest import FIXTURES


@pytest.fixture
def example1(tmp_path):
    target = tmp_path / "example1.policy.json"
    shutil.copy(FIXTURES / "example1.policy.json", target)
    return str(target)


@pytest.fixture
def q12(tmp_path):
    target = tmp_path / "example1_q12.policy.json"
    shutil.copy(FIXTURES / "example1_q12.policy.json", target)
    return str(target)


def _write(tmp_path, payload) -> str:
    path = tmp_path / "doc.policy.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def _conflicting_doc(tmp_path, strategy="reject-new") -> str:
    payload = json.loads((FIXTURES / "example1.policy.json").read_text())
    payload["precedents"].append(
        {"subject": "S1", "object": "O1", "effect": "deny", "rights": ["all"]}
    )
    payload["settings"]["collision_strategy"] = strategy
    return _write(tmp_path, payload)


class TestInterpolate:
    def test_partial_table2(self, q12, capsys):
        assert main(["interpolate", q12, "--mode", "partial"]) == 0
        out = capsys.readouterr().out
        assert "[1]" in out and "[0]" in out
        assert out.count("?") == 2

    def test_sequential_table5(self, q12, capsys):
        assert main(["interpolate", q12, "--mode", "sequential"]) == 0
        out = capsys.readouterr().out
        assert ">0<" in out
        assert "?" not in out

    def test_empty_fixture_summary(self, tmp_path, capsys):
        payload = json.loads((FIXTURES / "empty.policy.json").read_text())
        path = _write(tmp_path, payload)
        assert main(["interpolate", path]) == 0
        err = capsys.readouterr().err
        assert "0 explicit, 0 implicit, 9 undefined" in err

    def test_structured_output_and_out_file(self, example1, tmp_path, capsys):
        out_file = tmp_path / "m.matrix.json"
        code = main(["interpolate", example1, "--format", "structured",
                     "--out", str(out_file)])
        assert code == 0
        payload = json.loads(out_file.read_text())
        assert payload["mode"] == "partial"
        assert len(payload["cells"]) == 9

    def test_structured_stdout_byte_identical(self, example1, capsys):
        outputs = set()
        for _ in range(3):
            assert main(["interpolate", example1, "--format", "structured"]) == 0
            outputs.add(capsys.readouterr().out)
        assert len(outputs) == 1

    def test_parse_failure_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.policy.json"
        bad.write_text("{broken", encoding="utf-8")
        assert main(["interpolate", str(bad)]) == 2

    def test_missing_file_exits_2(self, tmp_path):
        assert main(["interpolate", str(tmp_path / "none.policy.json")]) == 2

    def test_conflict_under_reject_new_exits_1(self, tmp_path, capsys):
        path = _conflicting_doc(tmp_path)
        assert main(["interpolate", path]) == 1
        assert "not admissible" in capsys.readouterr().err

    def test_interactive_degrades_with_warning(self, tmp_path, capsys):
        path = _conflicting_doc(tmp_path, strategy="interactive")
        assert main(["interpolate", path]) == 1
        err = capsys.readouterr().err
        assert "degrades to reject-new" in err

    def test_usage_error_exits_2(self):
        assert main(["interpolate"]) == 2


class TestExplain:
    def test_dominant_trace(self, q12, capsys):
        assert main(["explain", q12, "S1", "O2"]) == 0
        out = capsys.readouterr().out
        assert "dominant q2 via B2" in out
        assert "defeated q1 via B3" in out

    def test_explicit_cell(self, q12, capsys):
        assert main(["explain", q12, "S1", "O1"]) == 0
        assert "explicit precedent q1" in capsys.readouterr().out

    def test_ambiguous_cell_exits_1(self, tmp_path, capsys):
        target = tmp_path / "table7.policy.json"
        shutil.copy(FIXTURES / "table7.policy.json", target)
        assert main(["explain", str(target), "S1", "O7"]) == 1
        out = capsys.readouterr().out
        assert "tie on B1" in out

    def test_undefined_cell_exits_1(self, q12, capsys):
        assert main(["explain", q12, "S2", "O2"]) == 1
        assert "no influencing precedent" in capsys.readouterr().out

    def test_unknown_entity_exits_2(self, q12):
        assert main(["explain", q12, "S9", "O1"]) == 2


class TestValidate:
    def test_valid_document(self, example1, capsys):
        assert main(["validate", example1]) == 0
        out = capsys.readouterr().out
        assert out.startswith("OK")
        assert "3 precedents admitted" in out

    def test_duplicate_precedent_conflict_listed(self, tmp_path, capsys):
        path = _conflicting_doc(tmp_path)
        assert main(["validate", path]) == 1
        assert "collides with q1" in capsys.readouterr().out

    def test_unknown_right_reported(self, tmp_path, capsys):
        payload = json.loads((FIXTURES / "example1.policy.json").read_text())
        payload["precedents"][0]["rights"] = ["root"]
        path = _write(tmp_path, payload)
        assert main(["validate", path]) == 1
        assert "unknown right name" in capsys.readouterr().out

    def test_unreadable_file_exits_2(self, tmp_path):
        assert main(["validate", str(tmp_path / "missing.json")]) == 2

    def test_overwrite_strategy_admits_with_notes(self, tmp_path, capsys):
        path = _conflicting_doc(tmp_path, strategy="overwrite-old")
        assert main(["validate", path]) == 0
        assert "overwritten" in capsys.readouterr().out


class TestCheckOrder:
    def test_example1_passes(self, example1, capsys):
        assert main(["check-order", example1, "--trials", "100", "--seed", "7"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("PASS")
        assert "seed 7" in out

    def test_single_precedent_passes(self, tmp_path, capsys):
        payload = json.loads((FIXTURES / "example1.policy.json").read_text())
        payload["precedents"] = payload["precedents"][:1]
        path = _write(tmp_path, payload)
        assert main(["check-order", path, "--trials", "5"]) == 0

    def test_zero_trials_usage_error(self, example1):
        assert main(["check-order", example1, "--trials", "0"]) == 2

    def test_mutant_engine_detected(self, tmp_path):
        # A tie-handling mutant that picks whichever tied candidate was
        # admitted first must be caught by the permutation check.
        from dacmatrix import interpolate, parse_policy
        from dacmatrix.engine import ImplicitCell, Provenance, UndefinedCell
        from dacmatrix.verify import check_order_independence

        doc = parse_policy((FIXTURES / "table7.policy.json").read_text())
        universe = doc.universe()

        def mutant(uni, admitted, mode, depth):
            matrix = interpolate(uni, admitted, mode, depth)
            cells = dict(matrix.cells)
            for coord, cell in cells.items():
                if isinstance(cell, UndefinedCell) and cell.reason == "ambiguous":
                    ranked = {
                        (universe.rep_id(p.subject_id), universe.rep_id(p.object_id)): i
                        for i, p in enumerate(admitted)
                    }
                    first = min(
                        cell.candidates,
                        key=lambda c: ranked.get(
                            (c.source.subject_id, c.source.object_id), 99
                        ),
                    )
                    cells[coord] = ImplicitCell(
                        decision=first.source.decision,
                        provenance=Provenance(
                            rule="row", source=first.source,
                            key=first.key, families=first.families,
                        ),
                    )
            return type(matrix)(
                mode=matrix.mode, dominance_depth=matrix.dominance_depth,
                default_policy=matrix.default_policy, rights=matrix.rights,
                subjects=matrix.subjects, objects=matrix.objects, cells=cells,
            )

        result = check_order_independence(
            universe, doc.precedents, trials=50, seed=3, interpolate_fn=mutant
        )
        assert not result.ok
        assert (result.mismatch.subject_id, result.mismatch.object_id) == ("S1", "O7")
