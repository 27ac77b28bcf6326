import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

import pricedquery as pq
from pricedquery import kernels, trees

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def tables(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n))
    return pq.from_table(n, bits)


@st.composite
def function_and_costs(draw, min_n=1, max_n=5, max_cost=8):
    f = draw(tables(min_n, max_n))
    costs = draw(st.lists(st.integers(1, max_cost), min_size=f.n, max_size=f.n))
    return f, costs


@st.composite
def function_tree_costs(draw, min_n=1, max_n=5):
    f, costs = draw(function_and_costs(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    tree = trees.random_tree(range(f.n), np.random.default_rng(seed), stop_prob=0.3)
    return f, tree, costs


def full_tree(order, f):
    """Tree querying ``order`` completely, leaves labelled by ``f``."""
    def build(depth, x):
        if depth == len(order):
            return trees.Leaf(f.evaluate(x))
        i = order[depth]
        x0, x1 = list(x), list(x)
        x1[i] = 1
        return trees.Query(i, build(depth + 1, x0), build(depth + 1, x1))
    return build(0, [0] * f.n)


@pytest.fixture(params=["compiled", "python"])
def backend(request, monkeypatch):
    """Route every kernel call through one backend."""
    mod = kernels.compiled_backend if request.param == "compiled" else kernels.python_backend
    if mod is None:
        pytest.skip("compiled kernels are not built")
    for name in ("flip_counts", "subcube_ones", "opt_table"):
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return request.param
