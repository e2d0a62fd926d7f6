import io
import json
import random

import pytest

from opetopic.cli import EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_VIOLATION, run
from opetopic.genmult import FiniteGenMulticat
from opetopic.opetopes import chain_term
from opetopic.samples import commutative_sym, random_gen_multicat
from opetopic.symmult import FiniteSymMulticat


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


@pytest.fixture
def gen_file(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(random_gen_multicat(random.Random(3)).encode()))
    return str(path)


def test_verify_dimension_zero():
    status, out, _ = call("verify", "--dim", "0", "--bound", "1")
    assert status == EXIT_OK
    assert json.loads(out)["ok"] is True


def test_enumerate_two_multitopes():
    status, out, _ = call("enumerate", "--kind", "multitope", "--dim", "2", "--bound", "3")
    lines = out.splitlines()
    assert status == EXIT_OK
    assert [json.loads(l) for l in lines[:-1]] == [chain_term(n) for n in range(4)]
    assert json.loads(lines[-1])["summary"]["count"] == 4


def test_enumerate_opetopes_round_trip_and_text_summary():
    status, out, _ = call("enumerate", "--dim", "3", "--bound", "3", "--format", "text")
    lines = out.splitlines()
    assert status == EXIT_OK and lines[-1] == "# kind=opetope dim=3 bound=3 count=9"
    for line in lines[:-1]:
        seed = line
        status, count, _ = call("manifestations", "--dim", "3", "--seed", seed, "--format", "text")
        assert status == EXIT_OK and int(count) >= 1


def test_manifestations_of_ternary_two_opetope():
    status, out, _ = call("manifestations", "--dim", "2", "--seed", json.dumps(chain_term(3)), "--format", "text")
    assert status == EXIT_OK and out == "6\n"
    status, out, _ = call("manifestations", "--dim", "2", "--seed", json.dumps(chain_term(3)))
    assert json.loads(out)["count"] == 6


def test_output_is_deterministic():
    a = call("enumerate", "--dim", "2", "--bound", "3")
    b = call("enumerate", "--dim", "2", "--bound", "3")
    assert a == b


def test_check_and_xi_round_trip(gen_file, tmp_path):
    status, out, _ = call("check", gen_file)
    assert status == EXIT_OK and json.loads(out)["kind"] == "generalised"
    status, out, _ = call("xi", gen_file)
    assert status == EXIT_OK
    q = FiniteSymMulticat.decode(json.loads(out))
    sym_path = tmp_path / "q.json"
    sym_path.write_text(out)
    status, report, _ = call("check", str(sym_path))
    assert status == EXIT_OK and json.loads(report)["kind"] == "symmetric"
    status, back, _ = call("xi-inverse", str(sym_path))
    assert status == EXIT_OK
    m = FiniteGenMulticat.decode(json.loads(back))
    assert len(m.arrows()) * 1 <= len(q.arrows())


def test_slice_documents_check_clean(gen_file, tmp_path):
    status, out, _ = call("slice", gen_file, "--bound", "2")
    assert status == EXIT_OK
    doc = json.loads(out)
    assert doc["truncatedAt"] == 2
    path = tmp_path / "s.json"
    path.write_text(out)
    assert call("check", str(path))[0] == EXIT_OK


def test_precondition_violation(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(commutative_sym([2]).encode()))
    status, out, err = call("xi-inverse", str(path))
    assert status == EXIT_PRECONDITION
    assert json.loads(out)["error"] == "precondition" and "fixed" in err


def test_violations_give_status_one(tmp_path):
    doc = commutative_sym([2]).encode()
    doc["compose"] = [e for e in doc["compose"] if e["f"] != "c2"]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    status, out, _ = call("check", str(path), "--format", "text")
    assert status == EXIT_VIOLATION and "FAILED" in out


@pytest.mark.parametrize(
    "argv",
    [
        ("check", "/nonexistent.json"),
        ("enumerate", "--dim", "2"),
        ("manifestations", "--dim", "2"),
        ("manifestations", "--dim", "2", "--seed", "[1,2]"),
        ("verify", "--dim", "-1", "--bound", "2"),
        ("frobnicate",),
    ],
)
def test_parse_errors(argv):
    assert call(*argv)[0] == EXIT_PARSE


def test_wrong_document_kind(gen_file):
    assert call("xi-inverse", gen_file)[0] == EXIT_PARSE
