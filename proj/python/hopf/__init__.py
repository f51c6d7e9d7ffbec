"""Process functions, agents and deterministic POMDPs.

Documents are exchanged as dicts (or JSON text) in the same envelope the
command-line tool reads and writes.
"""

import json

from . import _core
from ._core import (
    BudgetExceeded,
    ConsistencyViolation,
    DomainError,
    Error,
    InvariantViolation,
    NoStrategy,
    NotObservationIndependent,
    ParseError,
    PreconditionError,
    TypeMismatch,
    run_cli,
)

__all__ = [
    "BudgetExceeded", "ConsistencyViolation", "DomainError", "Error", "InvariantViolation",
    "NoStrategy", "NotObservationIndependent", "ParseError", "PreconditionError", "TypeMismatch",
    "agent_to_pf", "canonical", "dumps", "gyni_env", "load", "pf_to_agent", "report_csv",
    "run_cli", "save", "search", "simulate", "validate",
]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def dumps(doc):
    """Canonical text of a document."""
    return _core.canonical(_text(doc))


def canonical(doc):
    """Round trip through the native parser; returns the validated dict."""
    return json.loads(dumps(doc))


def load(path):
    with open(path, encoding="utf-8") as f:
        return canonical(f.read())


def save(doc, path):
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(doc))


def validate(doc, budget=0):
    """Dict with `kind`, `valid` and kind-specific evidence.

    process_function_1: `witness`. process_function_n: `witness` and
    `causal_order` (0-based party indices, None when there is none).
    dec_pomdp: `counterexample` when a party's observation depends on
    another party's action.
    """
    return _core.validate(_text(doc), budget)


def agent_to_pf(agent):
    return json.loads(_core.agent_to_pf(_text(agent)))


def pf_to_agent(w):
    return json.loads(_core.pf_to_agent(_text(w)))


def simulate(environment, strategy, m0=0, s0=0, horizon=10, gamma=0.9, exact=True):
    return _core.simulate(_text(environment), _text(strategy), m0, s0, horizon, gamma, exact)


def search(environment, memory=1, gamma=0.9, mode="advantage", budget=0, seed=0,
           samples=100000, allow_sampling=True, threads=0, environment_id=""):
    """Search report dict; `witness` holds an unordered strategy if one exists."""
    out = _core.search(_text(environment), memory, gamma, mode, budget, seed, samples,
                       allow_sampling, threads, environment_id)
    report = json.loads(out["report"])
    witness = json.loads(out["witness"]) if out["witness"] else None
    return report, witness


def gyni_env(parties):
    return json.loads(_core.gyni_env(parties))


def report_csv(report):
    return _core.report_csv(_text(report))
