import json

from unitary_forge.cli import main
from unitary_forge.harness import RunConfig, VerificationReport, run_suite


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_catalog_listing(capsys):
    code, out, _ = run(capsys, "catalog", "--order", "16", "--filter", "nonabelian", "--format", "json")
    assert code == 0 and len(json.loads(out)) == 9
    code, out, _ = run(capsys, "catalog", "--order", "8", "--format", "json")
    assert len(json.loads(out)) == 5


def test_catalog_bad_order_is_usage_error(capsys):
    code, _, err = run(capsys, "catalog", "--order", "12")
    assert code == 2 and "unsupported" in err


def test_unitary_command(capsys):
    code, out, _ = run(capsys, "unitary", "--group", "D16", "--format", "json")
    assert code == 0 and json.loads(out)["order"] == 2**12
    code, out, _ = run(capsys, "unitary", "--group", "C8", "--format", "json")
    assert json.loads(out)["order"] == 32
    code, out, _ = run(capsys, "unitary", "--group", "C9", "--p", "3", "--format", "json")
    doc = json.loads(out)
    assert doc["order"] == 81 and doc["abelian_type"] == "C9xC3^2"


def test_unitary_capacity_and_bad_names(capsys):
    assert run(capsys, "unitary", "--group", "C2^5")[0] == 2
    code, _, err = run(capsys, "unitary", "--group", "D12")
    assert code == 2 and "valid" in err
    assert run(capsys, "unitary", "--group", "C9", "--p", "2")[0] == 2


def test_reconstruct_roundtrip(capsys):
    for name, want in (("C4", "C4"), ("C2xC4", "C4xC2")):
        _, out, _ = run(capsys, "unitary", "--group", name, "--invariants", "--format", "json")
        inv = json.dumps(json.loads(out)["invariants"])
        code, out, _ = run(capsys, "reconstruct", inv, "--format", "json")
        assert code == 0 and json.loads(out)["base_type"]["name"] == want


def test_reconstruct_corrupted_order(capsys):
    bad = json.dumps({"order": 64, "rank": 2, "abelian_type": {"p": 2, "f": [1, 1]}})
    code, _, err = run(capsys, "reconstruct", bad)
    assert code == 2 and "inconsistent" in err
    code, _, _ = run(capsys, "reconstruct", json.dumps({"order": 7, "rank": 1}))
    assert code == 2


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "lemma6", "--format", "json")
    assert code == 0
    assert VerificationReport.from_json(out).counts()["pass"] == 3
    assert run(capsys, "verify", "nosuch")[0] == 2
    assert run(capsys, "verify", "lemma1", "--m", "3")[0] == 2


def test_verify_theta_counts(capsys):
    code, out, _ = run(capsys, "verify", "theta", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert sum(c["status"] == "pass" for c in doc["checks"]) == 10
    assert set(doc) == {"suite", "config", "checks"}
    assert set(doc["checks"][0]) == {"id", "anchor", "expected", "computed", "provenance", "status", "ms"}


def test_parallel_env_fallback(monkeypatch):
    monkeypatch.setenv("UNITARY_FORGE_PARALLEL", "3")
    assert RunConfig.from_env().parallel == 3
    assert RunConfig.from_env(parallel=2).parallel == 2


def test_report_roundtrip_and_determinism():
    a = run_suite("lemma7")
    b = VerificationReport.from_json(a.to_json())
    assert a == b
    strip = lambda r: [(c.id, c.expected, c.computed, c.status) for c in r.checks]
    assert strip(run_suite("lemma7", RunConfig(parallel=3))) == strip(a)
