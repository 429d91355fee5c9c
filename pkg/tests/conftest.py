import sys

import pytest
from hypothesis import settings

from incicolor import graphs

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def corpus():
    """Named fixture graphs small enough for every exact solver."""
    items = []
    items += [(f"C{n}", graphs.cycle(n)) for n in range(3, 9)]
    items += [(f"P{n}", graphs.path(n)) for n in range(1, 6)]
    items += [(f"K{n}", graphs.complete(n)) for n in range(1, 7)]
    items += [(f"K{m},{n}", graphs.complete_bipartite(m, n)) for m, n in [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3)]]
    items += [(f"star{k}", graphs.star(k)) for k in (1, 3, 5)]
    items += [(f"W{n}", graphs.wheel(n)) for n in range(3, 10)]
    items += [(f"prism{n}", graphs.prism(n)) for n in (3, 4, 5)]
    items += [("grid2x3", graphs.grid(2, 3)), ("grid3x3", graphs.grid(3, 3))]
    items += [("petersen", graphs.petersen())]
    items += [("C3xC3", graphs.cartesian_product(graphs.cycle(3), graphs.cycle(3)))]
    items += [(f"gnp{s}", graphs.random_gnp(7, 0.45, s, connected=True)) for s in range(6)]
    items += [(f"2tree{s}", graphs.random_ktree(2, 7, s)[0]) for s in range(3)]
    items += [("null3", graphs.null_graph(3)), ("matching6a", graphs.matching_pair(6, "a"))]
    return items


CORPUS = corpus()


@pytest.fixture(params=CORPUS, ids=[name for name, _ in CORPUS])
def corpus_graph(request):
    return request.param[1]


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
