"""Writes docs/schemas/<kind>.schema.json (draft 2020-12)."""

import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parents[2]

index = {"type": "integer", "minimum": 0}
real = {"type": "number"}
indices = {"type": "array", "items": {"$ref": "#/$defs/index"}}
reals = {"type": "array", "items": {"$ref": "#/$defs/real"}}
finite_set = {
    "type": "object",
    "required": ["size"],
    "additionalProperties": False,
    "properties": {
        "size": {"type": "integer", "minimum": 1},
        "labels": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
    },
}
witness = {
    "type": "object",
    "required": ["p", "inserted", "solutions"],
    "additionalProperties": False,
    "properties": {
        "p": {"$ref": "#/$defs/index"},
        "inserted": {"type": "array", "items": {"$ref": "#/$defs/indices"}},
        "solutions": {"type": "array", "items": {"$ref": "#/$defs/indices"}},
    },
}
status = {"enum": ["unchecked", "valid", "invalid"]}


def obj(required, props, optional=None):
    properties = dict(props)
    properties.update(optional or {})
    return {
        "type": "object",
        "required": required,
        "additionalProperties": False,
        "properties": properties,
    }


S = {"$ref": "#/$defs/finite_set"}

pomdp = obj(["S", "A", "Omega", "T", "O", "R"],
            {"S": S, "A": S, "Omega": S, "T": {"$ref": "#/$defs/indices"},
             "O": {"$ref": "#/$defs/indices"}, "R": {"$ref": "#/$defs/reals"}})

dec_pomdp = obj(
    ["parties", "T", "O", "R"],
    {"parties": {"type": "array", "minItems": 1,
                 "items": obj(["S", "A", "Omega"], {"S": S, "A": S, "Omega": S})},
     "T": {"$ref": "#/$defs/indices", "description": "per (s, a) row, one next-state index per party"},
     "O": {"$ref": "#/$defs/indices", "description": "per (s, a) row, one observation index per party"},
     "R": {"$ref": "#/$defs/reals"}},
    {"factored_obs": {"type": "array", "items": {"$ref": "#/$defs/indices"},
                      "description": "party i: table S x A_i -> Omega_i"}})

agent = obj(["M", "A", "Omega", "policy", "update"],
            {"M": S, "A": S, "Omega": S, "policy": {"$ref": "#/$defs/indices"},
             "update": {"$ref": "#/$defs/indices"}})

pf1 = obj(["P", "Obs", "F", "I", "w"],
          {"P": S, "Obs": S, "F": S, "I": S,
           "w": {"$ref": "#/$defs/indices", "description": "per (p, o) row: (f, i)"}},
          {"status": {"$ref": "#/$defs/status"}, "witness": {"$ref": "#/$defs/witness"}})

pfn_def = obj(["P", "F", "parties", "w"],
              {"P": S, "F": S,
               "parties": {"type": "array", "minItems": 1,
                           "items": obj(["A", "Omega"], {"A": S, "Omega": S})},
               "w": {"$ref": "#/$defs/indices",
                     "description": "per (p, o_1..o_n) row: (f, a_1..a_n)"}},
              {"status": {"$ref": "#/$defs/status"}, "witness": {"$ref": "#/$defs/witness"}})

result = {"oneOf": [{"type": "null"},
                    obj(["w", "value"],
                        {"w": {"$ref": "#/$defs/process_function_n"},
                         "value": {"$ref": "#/$defs/real"}},
                        {"order": {"oneOf": [{"type": "null"},
                                             {"type": "array",
                                              "items": {"type": "integer", "minimum": 1}}]}})]}

search_report = obj(
    ["shape", "environment_id", "gamma", "m0", "counts", "seed", "budget", "sampled"],
    {"shape": obj(["memory", "parties"],
                  {"memory": {"type": "integer", "minimum": 1},
                   "parties": {"type": "array", "minItems": 1,
                               "items": obj(["actions", "observations"],
                                            {"actions": {"type": "integer", "minimum": 1},
                                             "observations": {"type": "integer", "minimum": 1}})}}),
     "environment_id": {"type": "string"},
     "gamma": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
     "m0": {"$ref": "#/$defs/index"},
     "counts": obj(["total", "valid", "ordered"],
                   {"total": {"$ref": "#/$defs/index"}, "valid": {"$ref": "#/$defs/index"},
                    "ordered": {"$ref": "#/$defs/index"}}),
     "seed": {"$ref": "#/$defs/index"},
     "budget": {"$ref": "#/$defs/index"},
     "sampled": {"type": "boolean"}},
    {"advantage": {"oneOf": [{"type": "null"}, {"$ref": "#/$defs/real"}]},
     "best_general": result,
     "best_ordered": result})

trajectory = obj(
    ["memories", "states", "rewards"],
    {"memories": {"$ref": "#/$defs/indices"}, "states": {"$ref": "#/$defs/indices"},
     "rewards": {"$ref": "#/$defs/reals"}},
    {"discounted": obj(["gamma", "value", "exact"],
                       {"gamma": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
                        "value": {"$ref": "#/$defs/real"}, "exact": {"type": "boolean"}},
                       {"error_bound": {"$ref": "#/$defs/real"},
                        "steps": {"type": "integer", "minimum": 1}})})

KINDS = {
    "pomdp": pomdp,
    "dec_pomdp": dec_pomdp,
    "agent": agent,
    "process_function_1": pf1,
    "process_function_n": pfn_def,
    "search_report": search_report,
    "trajectory": trajectory,
}


def schema(kind, payload):
    defs = {"index": index, "real": real, "indices": indices, "reals": reals,
            "finite_set": finite_set, "witness": witness, "status": status,
            "process_function_n": pfn_def}
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "$id": f"hopf/{kind}.schema.json",
        "title": f"hopf {kind} document",
        "type": "object",
        "required": ["format_version", "kind", "payload"],
        "additionalProperties": False,
        "properties": {
            "format_version": {"const": "1"},
            "kind": {"const": kind},
            "payload": payload,
        },
        "$defs": defs,
    }


def main():
    out = ROOT / "docs" / "schemas"
    out.mkdir(parents=True, exist_ok=True)
    for kind, payload in KINDS.items():
        text = json.dumps(schema(kind, payload), indent=2, sort_keys=True) + "\n"
        (out / f"{kind}.schema.json").write_text(text)


if __name__ == "__main__":
    main()
