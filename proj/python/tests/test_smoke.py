import json
import pathlib

import jsonschema
import pytest

import hopf

ROOT = pathlib.Path(__file__).resolve().parents[2]
EXAMPLES = ROOT / "docs" / "examples"
SCHEMAS = ROOT / "docs" / "schemas"


def example(name):
    return hopf.load(EXAMPLES / f"{name}.json")


@pytest.mark.parametrize("path", sorted(EXAMPLES.glob("*.json")), ids=lambda p: p.stem)
def test_goldens_match_schema_and_are_canonical(path):
    text = path.read_text()
    doc = json.loads(text)
    schema = json.loads((SCHEMAS / f"{doc['kind']}.schema.json").read_text())
    jsonschema.validate(doc, schema)
    assert hopf.dumps(text) == text


def test_validate_process_functions():
    assert hopf.validate(example("process_function_1"))["valid"]

    loop = json.loads((ROOT / "tests" / "data" / "pf1_loop.json").read_text())
    verdict = hopf.validate(loop)
    assert not verdict["valid"]
    assert verdict["witness"]["solutions"] == [[0], [1]]

    verdict = hopf.validate(example("process_function_n"))
    assert verdict["valid"] and verdict["causal_order"] == [0, 1]


def test_validate_environment():
    verdict = hopf.validate(hopf.gyni_env(3))
    assert verdict["valid"] and verdict["counterexample"] is None


def test_conversion_round_trip():
    w = example("process_function_1")
    agent = hopf.pf_to_agent(w)
    assert agent["kind"] == "agent"
    assert hopf.agent_to_pf(agent) == w
    assert hopf.agent_to_pf(example("agent")) == w


def test_simulate_matches_golden():
    golden = example("trajectory")["payload"]
    run = hopf.simulate(example("pomdp"), example("agent"), horizon=6, gamma=0.9, exact=True)
    assert run["value"] == golden["discounted"]["value"]
    assert run["rewards"] == golden["rewards"]
    assert run["error_bound"] is None

    truncated = hopf.simulate(example("pomdp"), example("agent"), horizon=40, gamma=0.5, exact=False)
    exact = hopf.simulate(example("pomdp"), example("agent"), horizon=40, gamma=0.5)
    assert abs(truncated["value"] - exact["value"]) <= truncated["error_bound"] + 1e-12


def test_search_gyni():
    report, witness = hopf.search(hopf.gyni_env(2), gamma=0.5, environment_id="gyni-2")
    assert report == example("search_report")
    assert report["payload"]["advantage"] == 0
    assert witness is None

    report, witness = hopf.search(hopf.gyni_env(3), gamma=0.5, mode="ordered")
    counts = report["payload"]["counts"]
    assert (counts["valid"], counts["ordered"]) == (744, 488)
    verdict = hopf.validate(witness)
    assert verdict["valid"] and verdict["causal_order"] is None
    assert hopf.report_csv(report).startswith("environment_id,")


def test_errors_map_to_exceptions():
    with pytest.raises(hopf.ParseError):
        hopf.canonical("{")
    with pytest.raises(hopf.TypeMismatch):
        hopf.agent_to_pf(example("pomdp"))
    with pytest.raises(hopf.BudgetExceeded):
        hopf.search(hopf.gyni_env(2), budget=10, allow_sampling=False)
    assert issubclass(hopf.NoStrategy, hopf.Error)


def test_cli_in_process():
    code, out, _ = hopf.run_cli(["validate", str(EXAMPLES / "dec_pomdp.json")])
    assert code == 0 and "observation independent" in out
    code, _, err = hopf.run_cli(["frobnicate"])
    assert code == 2 and err
