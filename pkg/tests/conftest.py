import pytest

from mixsd.kgfact import default_graph_config, generate_world_graph, render_qa
from mixsd.toy import ToyBackend, ToyConfig, uniform_backend


@pytest.fixture(scope="session")
def small_graph():
    return generate_world_graph(default_graph_config(5, 10), seed=1)


@pytest.fixture(scope="session")
def small_qa(small_graph):
    return render_qa(small_graph)


@pytest.fixture()
def toy():
    return ToyBackend()


@pytest.fixture()
def uniform():
    return uniform_backend()


@pytest.fixture()
def static_toy():
    """Pure static-bigram toy: no sentinel copy, no lookup blending."""
    return ToyBackend(
        ToyConfig(
            alphabet="ab.",
            sentinel=None,
            priming_text="",
            induction_mass=0.0,
            smoothing=0.5,
            bigram={"a": {"b": 3.0}, "b": {"a": 2.0, ".": 1.0}, ".": {"</s>": 4.0}},
            fit_bigram_on_priming=False,
        )
    )
