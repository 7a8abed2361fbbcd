import pytest

from hallforge.backend import make_backend
from hallforge.suites import (RunConfig, _BUILDERS, _index_window,
                              run_suite)

BE = make_backend("a2", 2)


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_suite(RunConfig(suite="nonesuch"))


def test_index_window_defaults():
    assert _index_window(RunConfig(suite="kappa", m=0)) == [-1, 0, 1]
    assert _index_window(RunConfig(suite="kappa", m=4)) == [1, 3]
    assert _index_window(RunConfig(suite="psi", m=7, i=2)) == [2]


def test_alphas_window_is_configurable():
    narrow = RunConfig(suite="kashaev", max_dim=2,
                       alphas=((0, 0), (1, 0)))
    wide = RunConfig(suite="kashaev", max_dim=2)
    n_narrow = len(_BUILDERS["kashaev"](BE, narrow))
    n_wide = len(_BUILDERS["kashaev"](BE, wide))
    assert n_narrow < n_wide


def test_instance_order_is_stable():
    cfg = RunConfig(suite="heis-oracle", max_dim=2)
    a = [(i.rel, i.params) for i in _BUILDERS["heis-oracle"](BE, cfg)]
    b = [(i.rel, i.params) for i in _BUILDERS["heis-oracle"](BE, cfg)]
    assert a == b


def test_backend_oracle_defaults_to_dim_four():
    rep = run_suite(RunConfig(suite="backend-oracle", q=2))
    # 5 aut checks, 25 hom/euler pairs, 125 hall triples
    assert rep["instances"] == 155
    assert rep["params"]["max_dim"] == 4


def test_report_params_skip_thread_count():
    rep = run_suite(RunConfig(suite="backend-oracle", q=2, threads=3))
    assert "threads" not in rep["params"]
