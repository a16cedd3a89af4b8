"""Mutually unbiased bases, complex Hadamard matrices and the N = 6 census."""

import json

from ._mubs import *  # noqa: F401,F403
from ._mubs import (
    assemble_json,
    newton_census_json,
    report_summary,
    root_census_json,
    search_jsonl,
)

__version__ = "0.1.0"


def newton_census(n, restarts=20000, seed=1):
    return json.loads(newton_census_json(n, restarts, seed))


def root_census(n, k):
    return json.loads(root_census_json(n, k))


def assemble(census):
    return json.loads(assemble_json(json.dumps(census)))


def report(census):
    return report_summary(json.dumps(census))


def search(depth, n, k, budget=0):
    """Returns (records, summary) from a root-restricted search."""
    lines = [json.loads(line) for line in search_jsonl(depth, n, k, budget).splitlines()]
    return lines[:-1], lines[-1]
