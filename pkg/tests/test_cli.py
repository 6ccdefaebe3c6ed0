import json
import math

import pytest
from click.testing import CliRunner

from qtopo.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def test_poly_unknot(runner):
    result = runner.invoke(main, ["poly", "--braid", "", "--strands", "2",
                                  "--k", "3", "--color", "1"])
    assert result.exit_code == 0, result.output
    body = json.loads(result.output)
    want = math.sin(3 * math.pi / 5) / math.sin(math.pi / 5)
    assert body["value_re"] == pytest.approx(want, abs=1e-9)


def test_poly_catalog(runner):
    result = runner.invoke(main, ["poly", "--catalog", "trefoil", "--k", "5",
                                  "--color", "1/2", "--normalize"])
    assert result.exit_code == 0
    body = json.loads(result.output)
    assert body["normalized"] is True
    assert body["writhe"] == 3


def test_poly_bad_color_exit_3(runner):
    result = runner.invoke(main, ["poly", "--catalog", "hopf", "--k", "3",
                                  "--color", "9/2"])
    assert result.exit_code == 3


def test_poly_parse_error_exit_2(runner):
    result = runner.invoke(main, ["poly", "--braid", "7", "--strands", "4",
                                  "--k", "3"])
    assert result.exit_code == 2


def test_invariant_inline_json(runner):
    spec = json.dumps({"strands": 2, "word": "", "framings": [0]})
    result = runner.invoke(main, ["invariant", "--link", spec, "--k", "1"])
    assert result.exit_code == 0, result.output
    body = json.loads(result.output)
    assert body["value_re"] == pytest.approx(math.sqrt(2), abs=1e-9)


def test_invariant_catalog_with_framings(runner):
    result = runner.invoke(main, ["invariant", "--catalog", "hopf",
                                  "--framings", "0,1", "--k", "2"])
    assert result.exit_code == 0, result.output
    body = json.loads(result.output)
    assert body["components"] == 2
    assert body["signature"] != 0 or body["components"] == 2


def test_invariant_file(runner, tmp_path):
    path = tmp_path / "link.json"
    path.write_text(json.dumps(
        {"strands": 4, "word": "2 2", "framings": [0, 0], "name": "hopf"}))
    result = runner.invoke(main, ["invariant", "--file", str(path),
                                  "--k", "1"])
    assert result.exit_code == 0
    assert json.loads(result.output)["components"] == 2


def test_verify_pass_and_unknown(runner):
    result = runner.invoke(main, ["verify", "orthogonality"])
    assert result.exit_code == 0
    assert json.loads(result.output)["passed"] is True
    result = runner.invoke(main, ["verify", "definitely-not-a-suite"])
    assert result.exit_code == 2


def test_volume_scan(runner):
    result = runner.invoke(main, ["volume-scan", "--nmax", "6"])
    assert result.exit_code == 0
    body = json.loads(result.output)
    assert body["rows"][-1]["n"] == 6


def test_bench_csv(runner):
    result = runner.invoke(main, ["bench", "--n", "2", "--k", "2",
                                  "--kappas", "5,10", "--csv"])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0] == "kappa,steps,seconds"
    assert len(lines) == 3


def test_bench_steps_match_audit(runner):
    result = runner.invoke(main, ["bench", "--n", "3", "--k", "2",
                                  "--kappas", "8"])
    body = json.loads(result.output)
    from qtopo.braidrep import step_count
    from qtopo.service.handlers import _bench_word
    word = _bench_word(3, 8, 0)
    assert body["rows"][0]["steps"] == step_count(word, 3)


def test_catalog_command(runner):
    result = runner.invoke(main, ["catalog"])
    assert result.exit_code == 0
    assert "figure_eight" in json.loads(result.output)["links"]


def test_byte_identical_reruns(runner):
    args = ["invariant", "--catalog", "trefoil", "--k", "2", "--circuit",
            "--shots", "256", "--seed", "7"]
    a = runner.invoke(main, args).output
    b = runner.invoke(main, args).output
    assert a == b


def test_url_dispatch_round_trips(runner, monkeypatch):
    # the thin-client path: requests serialized over HTTP must reproduce
    # the in-process result exactly
    import httpx
    from fastapi.testclient import TestClient

    from qtopo.service import create_app

    test_client = TestClient(create_app())

    def fake_post(url, json=None, timeout=None):
        path = url.rsplit("/", 1)[-1]
        return test_client.post(f"/{path}", json=json)

    monkeypatch.setattr(httpx, "post", fake_post)
    args = ["poly", "--catalog", "trefoil", "--k", "3", "--normalize"]
    local = runner.invoke(main, args).output
    remote = runner.invoke(main, args + ["--url", "http://fake"]).output
    assert local == remote

    bad = runner.invoke(main, ["poly", "--catalog", "hopf", "--k", "3",
                               "--color", "9/2", "--url", "http://fake"])
    assert bad.exit_code == 3
