import functools
import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from genus_dp.generators import nonorientable_corpus, planar_corpus, toroidal_corpus
from genus_dp.surface_cut import surface_cut_decomposition, verify_scd

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GOLDENS = json.loads((Path(__file__).parent / "goldens.json").read_text())

# (criterion number, "PASS ..." / "FAIL ...") lines filled by test_acceptance
ACCEPTANCE = []


@functools.lru_cache(maxsize=None)
def corpus(name):
    return {"planar": planar_corpus, "toroidal": toroidal_corpus, "nonorientable": nonorientable_corpus}[name]()


@functools.lru_cache(maxsize=None)
def pipeline(name):
    """(graph name, graph, scd, report) for every graph of a corpus."""
    out = []
    for gname, g in corpus(name):
        scd = surface_cut_decomposition(g)
        out.append((gname, g, scd, verify_scd(scd)))
    return out


def all_graphs():
    return [(f"{c}/{n}", g) for c in ("planar", "toroidal", "nonorientable") for n, g in corpus(c)]


@pytest.fixture(scope="session")
def goldens():
    return GOLDENS


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
