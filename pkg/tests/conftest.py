import pytest

from smartselect import _backend
from smartselect.graph import build_graph


def star(n=5):
    return build_graph([(0, i) for i in range(1, n)], n)


def cycle(n):
    return build_graph([(i, (i + 1) % n) for i in range(n)], n)


def path(n):
    return build_graph([(i, i + 1) for i in range(n - 1)], n)


def complete(n):
    return build_graph([(i, j) for i in range(n) for j in range(i + 1, n)], n)


def random_graph(rng, n, p=0.3, connected=False):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    if connected:
        perm = rng.permutation(n)
        edges += [(int(perm[i]), int(perm[rng.integers(0, i)])) for i in range(1, n)]
    return build_graph(edges, n)


BACKENDS = ["python"] + (["cython"] if _backend.compiled_kernels is not None else [])


@pytest.fixture(params=BACKENDS)
def kernels(request, monkeypatch):
    """Run a test once per available kernel backend."""
    mod = _backend.python_kernels if request.param == "python" else _backend.compiled_kernels
    import smartselect.centrality as c
    monkeypatch.setattr(c, "kernels", mod)
    return mod


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, in criterion order."""
    rows = []
    for outcome in ("passed", "failed", "skipped", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::" not in nodeid or rep.when not in ("call", "setup"):
                continue
            if rep.when == "setup" and outcome == "passed":
                continue
            name = nodeid.split("::")[-1]
            rows.append((name, outcome.upper()))
    if rows:
        terminalreporter.section("acceptance criteria")
        for name, outcome in sorted(rows):
            terminalreporter.write_line(f"{outcome:8s} {name}")
