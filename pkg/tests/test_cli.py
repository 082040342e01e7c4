import json
import subprocess
import sys

import pytest

from brnral_kit.cli import main
from brnral_kit.corpus import corpus_dir, generate, load_corpus
from brnral_kit.io import (FORMAT, Instance, ParseError, brnral_to_dict, check_schema, dumps,
                           torf_to_dict)

DATA = corpus_dir()
Z2 = str(DATA / "br-C2-C2-triv-q1-dual.json")
S3 = str(DATA / "br-S3-C2-triv-q1-dual.json")
CARRY = str(DATA / "torf-nonsplit-C2-carry.json")
SIGN = str(DATA / "torf-split-C2-sign-galois-sign.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, obj, name="inst.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
    return str(p)


# --- commands ---------------------------------------------------------------------

def test_brnral_ff_example(tmp_path, capsys):
    out = tmp_path / "out.json"
    code, _, _ = run(capsys, "brnral", "ff", "-i", Z2, "-o", str(out))
    assert code == 0
    res = json.loads(out.read_text())
    assert res["format"] == FORMAT
    assert res["members"]["invariants"] == []
    assert res["ambient"]["invariants"] == [2]
    assert res["witnesses"] == [{"generator": 0, "sigma": 1, "b": 1, "norm": [1], "value": "1/2"}]


def test_brnral_char0_has_certificate(capsys):
    code, out, _ = run(capsys, "brnral", "char0", "-i", S3)
    assert code == 0
    res = json.loads(out)
    assert res["certificate"]["vanishing"] is True


def test_cohomology_h1_trivial_gamma(capsys):
    name = next(n for n in load_corpus("h1-") if n.endswith("-C1-0"))
    code, out, _ = run(capsys, "cohomology", "h1", "-i", str(DATA / f"{name}.json"))
    assert code == 0
    res = json.loads(out)
    assert res["invariants"] == [] and res["order"] == 1


def test_cohomology_h1_cyclic_block(capsys):
    code, out, _ = run(capsys, "cohomology", "h1", "-i", str(DATA / "h1-M4-C2-0.json"))
    res = json.loads(out)
    assert code == 0 and res["cyclic"]["invariants"] == res["invariants"]


def test_cohomology_h1_nonab(capsys):
    code, out, _ = run(capsys, "cohomology", "h1-nonab", "-i", S3)
    assert code == 0 and json.loads(out)["classes"] == 2


def test_norm_table(capsys):
    code, out, _ = run(capsys, "norm-table", "-i", Z2)
    res = json.loads(out)
    assert code == 0 and res["hab"] == [2] and len(res["rows"]) == 4


def test_real_orthogonality(capsys):
    code, out, _ = run(capsys, "check", "real-orthogonality", "-i", S3)
    assert code == 0 and json.loads(out)["verdict"] == "all orthogonal"


def test_subgroup_build_and_ladder(capsys):
    code, out, _ = run(capsys, "subgroup", "build", "-i", SIGN, "--ladder", "4,8")
    res = json.loads(out)
    assert code == 0
    assert res["certificate"]["passed"] and res["order"] == 8
    assert res["surjectivity"]["label"] == "finite-level evidence"
    assert [row["level"] for row in res["surjectivity"]["levels"]] == [4, 8]


def test_subgroup_build_nonsplit(capsys):
    code, out, _ = run(capsys, "subgroup", "build", "-i", CARRY, "--n", "2", "--d", "1")
    assert code == 0 and json.loads(out)["order"] == 4


def test_subgroup_enlarge(capsys):
    code, out, _ = run(capsys, "subgroup", "enlarge", "-i", CARRY)
    res = json.loads(out)
    assert code == 0 and res["m"] == 2 and res["stated_order"] == 8
    code, out, _ = run(capsys, "subgroup", "enlarge", "-i", CARRY, "--m", "3")
    res = json.loads(out)
    assert code == 0 and res["order"] == 3 * 4


def test_oracle_verify_single(capsys):
    code, out, _ = run(capsys, "oracle", "verify", "-i", S3)
    res = json.loads(out)
    assert code == 0 and res["ok"]
    assert {c["check"] for c in res["checks"]} >= {"brnral.char-zero.oracle", "h1.order"}


def test_oracle_verify_several_in_parallel(capsys):
    code, out, _ = run(capsys, "oracle", "verify", "-i", Z2, "-i", CARRY, "--jobs", "2")
    res = json.loads(out)
    assert code == 0 and res["ok"] and len(res["instances"]) == 2


# --- exit codes -------------------------------------------------------------------

def test_usage_errors_exit_2(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["brnral", "ff"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["brnral", "ff", "-i", Z2, "--jobs", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["subgroup", "build", "-i", CARRY, "--ladder", "4,x"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_parse_errors_exit_2(tmp_path, capsys):
    code, _, err = run(capsys, "brnral", "ff", "-i", str(tmp_path / "missing.json"))
    assert code == 2 and "cannot read" in err
    code, _, err = run(capsys, "brnral", "ff", "-i", write(tmp_path, "{not json"))
    assert code == 2 and "invalid JSON" in err
    raw = load_corpus("br-C2-C2-triv-q1-dual")["br-C2-C2-triv-q1-dual"]
    bad = dict(raw, version="other/9")
    code, _, err = run(capsys, "brnral", "ff", "-i", write(tmp_path, bad))
    assert code == 2 and "schema violation at version" in err
    code, _, err = run(capsys, "subgroup", "build", "-i", Z2)
    assert code == 2 and "torf" in err
    code, _, _ = run(capsys, "oracle", "verify")
    assert code == 2


def test_invariant_failure_exit_1_with_witness(tmp_path, capsys):
    raw = json.loads(open(S3).read())
    # an action that is not a homomorphism
    raw["H"]["action"] = {"1": [0, 2, 1, 3, 4, 5]}
    code, out, err = run(capsys, "brnral", "char0", "-i", write(tmp_path, raw))
    assert code == 1 and out == ""
    payload = json.loads(err)
    assert payload["format"] == FORMAT
    assert payload["error"]["violated"] and payload["error"]["witness"]


def test_finite_field_without_frobenius_exit_1(tmp_path, capsys):
    raw = json.loads(open(Z2).read())
    del raw["gamma"]["frobenius"]
    code, _, err = run(capsys, "brnral", "ff", "-i", write(tmp_path, raw))
    assert code == 1 and "frobenius" in err
    code, _, _ = run(capsys, "brnral", "char0", "-i", write(tmp_path, raw, "b.json"))
    assert code == 0


def test_dual_pairing_with_M_is_parse_error(tmp_path, capsys):
    raw = json.loads(open(Z2).read())
    raw["pairing"] = "dual"
    code, _, err = run(capsys, "brnral", "ff", "-i", write(tmp_path, raw))
    assert code == 2 and "must be omitted" in err
    del raw["M"]
    code, _, _ = run(capsys, "brnral", "ff", "-i", write(tmp_path, raw, "b.json"))
    assert code == 0


# --- determinism and files ---------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["brnral", "char0", "-i", S3],
    ["subgroup", "build", "-i", CARRY, "--ladder", "4"],
    ["oracle", "verify", "-i", Z2],
])
def test_output_is_byte_identical_across_processes(argv, tmp_path):
    outs = []
    for k in range(2):
        target = tmp_path / f"out{k}.json"
        subprocess.run([sys.executable, "-m", "brnral_kit.cli", *argv, "-o", str(target)],
                       check=True)
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].endswith(b"\n")


def test_console_script_matches_module(tmp_path):
    exe = [sys.executable, "-c", "import sys; from brnral_kit.cli import main; sys.exit(main())"]
    a = subprocess.run([*exe, "norm-table", "-i", Z2], capture_output=True, check=True).stdout
    b = subprocess.run([sys.executable, "-m", "brnral_kit.cli", "norm-table", "-i", Z2],
                       capture_output=True, check=True).stdout
    assert a == b


def test_bundled_corpus_matches_generator():
    bundled = load_corpus()
    fresh = generate()
    assert sorted(bundled) == sorted(fresh)
    for name, inst in fresh.items():
        assert (DATA / f"{name}.json").read_text(encoding="utf-8") == dumps(inst), name


def test_corpus_meets_size_requirements():
    names = list(load_corpus())
    assert sum(n.startswith("h1-") for n in names) >= 50
    assert any(n.startswith("torf-split") for n in names)
    assert any(n.startswith("torf-nonsplit") for n in names)


@pytest.mark.parametrize("name", ["br-S3-C2-triv-q1-dual", "br-D4-C4-aut-q1-sign",
                                  "br-C2xC2-C2xC2-noncyclic", "br-C1-C2-trivialH"])
def test_membership_instances_roundtrip(name):
    raw = load_corpus(name)[name]
    inst = Instance(raw)
    assert brnral_to_dict(inst.brnral(), raw.get("mode")) == raw


@pytest.mark.parametrize("name", ["torf-nonsplit-C3-diag-swap-perturbed", "torf-split-S3-A2"])
def test_torf_instances_roundtrip(name):
    raw = load_corpus(name)[name]
    assert torf_to_dict(Instance(raw).torf()) == raw


def test_schema_rejects_unknown_gamma_keys():
    raw = load_corpus("br-C2-C2-triv-q1-dual")["br-C2-C2-triv-q1-dual"]
    with pytest.raises(ParseError):
        check_schema(dict(raw, gamma=dict(raw["gamma"], colour="red")))
    with pytest.raises(ParseError):
        check_schema(dict(raw, mode="p-adic"))
