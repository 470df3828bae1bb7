import json

from idealfam import FamilyParams, IdealPresentation, buchberger, build_ideal
from idealfam.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_text(capsys):
    code, out, _ = run(capsys, "construct", "2:(2,2,2)")
    assert code == 0
    assert "x[1,1]^7" in out
    assert "pd formula: 9" in out
    assert "y[[1,1,2],[1,1,0]]" in out


def test_construct_round_trip(capsys):
    code, out, _ = run(capsys, "construct", "2:(2,1,2)")
    assert code == 0
    lines = [l.strip() for l in out.splitlines()]
    gens = lines[lines.index("generators:") + 1 :]
    ideal = build_ideal(FamilyParams.parse("2:(2,1,2)"))
    parsed = IdealPresentation(ideal.ring, [ideal.ring.parse(g) for g in gens])
    assert buchberger(parsed).elements == buchberger(ideal).elements


def test_construct_json_schema(capsys):
    code, out, _ = run(capsys, "construct", "2:(3,1)", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) >= {"params", "constants", "generators", "report"}
    assert payload["params"] == "2:(3,1)"
    assert payload["constants"]["pd_formula"] == 8
    assert payload["constants"]["A_sizes"] == [1, 2, 4]
    assert len(payload["generators"]) == 3


def test_construct_m2_export(capsys):
    code, out, _ = run(capsys, "construct", "2:(2,1,2)", "--format", "m2")
    assert code == 0
    assert "R = ZZ/32003[v_0..v_5];" in out
    assert "I = ideal(" in out
    assert "v_0^6" in out
    assert "--   v_0 = x[1,1]" in out


def test_construct_invalid_params_exit_2(capsys):
    code, _, err = run(capsys, "construct", "1:(2)")
    assert code == 2
    assert "g must be" in err


def test_verify_small_family(capsys):
    code, out, _ = run(capsys, "verify", "2:(1,1)")
    assert code == 0
    assert "depth-zero verified: True; implied pd = 4" in out


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "2:(2,0)", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["report"]["socle"]["conclusion"] is True
    assert payload["report"]["lemma"]["ok"] is True


def test_verify_mccullough(capsys):
    code, out, _ = run(capsys, "verify", "mccullough", "2", "1", "3")
    assert code == 0
    assert "implied pd = 5" in out


def test_verify_caviglia(capsys):
    code, out, _ = run(capsys, "verify", "caviglia", "3")
    assert code == 0
    assert "implied pd = 4" in out


def test_pd_values_and_presets(capsys):
    code, out, _ = run(capsys, "pd", "2:(2,2,2)")
    assert code == 0
    assert "pd formula: 9" in out

    code, out, _ = run(capsys, "pd", "2:(4,4,0)")
    assert code == 0
    assert "pd formula: 15" in out
    assert "p=3" in out and "9 = p^(p-1)" in out

    code, out, _ = run(capsys, "pd", "4:(2,2)")
    assert code == 0
    assert "pd formula: 68" in out
    assert "16 = p^(2p)" in out


def test_betti_small(capsys):
    code, out, _ = run(capsys, "betti", "2:(1,0)")
    assert code == 0
    assert "pd = 4" in out
    assert "total:" in out


def test_betti_caviglia_json(capsys):
    code, out, _ = run(capsys, "betti", "caviglia", "3", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["report"]["reg"] == 7
    assert payload["report"]["pd"] == 4
    triples = {tuple(t[:2]): t[2] for t in payload["report"]["betti"]}
    assert triples[(0, 0)] == 1


def test_betti_degree_limit_banner(capsys):
    code, out, _ = run(capsys, "betti", "caviglia", "3", "--degree-limit", "6")
    assert code == 0
    assert "truncated" in out


def test_betti_m2_export(capsys):
    code, out, _ = run(capsys, "betti", "caviglia", "2", "--format", "m2")
    assert code == 0
    assert "betti res I" in out


def test_resource_limit_exit_3(capsys):
    code, _, err = run(capsys, "verify", "2:(1,1)", "--pair-limit", "0")
    assert code == 3
    assert "resource limit" in err


def test_unknown_target_exit_2(capsys):
    code, _, err = run(capsys, "construct", "nonsense")
    assert code == 2


def test_sweep_text(capsys):
    code, out, _ = run(capsys, "sweep", "--max-g", "3", "--max-n", "2", "--max-m", "2")
    assert code == 0
    assert "all consistent: True" in out


def test_sweep_verify_parallel(capsys):
    code, out, _ = run(
        capsys,
        "sweep", "--max-g", "2", "--max-n", "2", "--max-m", "1", "--verify",
        "--jobs", "2", "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    assert all(row["socle"] and row["lemma"] for row in payload["rows"])


def test_out_file(tmp_path, capsys):
    target = tmp_path / "ideal.json"
    code, out, _ = run(
        capsys, "construct", "2:(1,1)", "--format", "json", "--out", str(target)
    )
    assert code == 0
    assert out == ""
    payload = json.loads(target.read_text())
    assert payload["params"] == "2:(1,1)"


def test_verification_failure_exit_1(monkeypatch, capsys):
    import idealfam.cli as cli

    def fake_verify_socle(params, basis=None, field=None):
        real = cli.verify_socle.__wrapped__ if hasattr(cli.verify_socle, "__wrapped__") else None
        from idealfam.family import SocleReport, socle_witness

        return SocleReport(
            params=params,
            witness=socle_witness(params),
            not_in_ideal=False,
            killed_by=(("x[1,1]", False),),
            conclusion=False,
            implied_pd=4,
        )

    monkeypatch.setattr(cli, "verify_socle", fake_verify_socle)
    code, out, _ = run(capsys, "verify", "2:(1,1)")
    assert code == 1
    assert "depth-zero verified: False" in out
