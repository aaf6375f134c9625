import dataclasses

import pytest

from delsarte.errors import ReproductionMismatch
from delsarte.reproduce import (
    EXAMPLE_KEYS,
    _examples,
    reproduce,
    resolve,
    run_p_example,
    run_q_example,
)


def test_resolve_aliases():
    assert resolve(["golay23"]) == ["p-golay23"]
    assert resolve(["all"]) == list(EXAMPLE_KEYS)
    assert resolve(["P", "p-pair"]) == [k for k in EXAMPLE_KEYS if k.startswith("p-")]
    assert len(resolve(["Q"])) == 6
    with pytest.raises(KeyError):
        resolve(["golay25"])


@pytest.mark.parametrize("key", ["pair", "hamming", "ext-hamming", "golay23", "golay23x2",
                                 "golay24"])
def test_p_examples(key):
    (res,) = reproduce([f"p-{key}"])
    assert all(res.checks.values())
    assert res.conclusion["completely_regular"]
    assert res.conclusion["rank_B"] == res.degree + 1


@pytest.mark.parametrize("key", ["pair", "hamming", "ext-hamming"])
def test_small_q_examples(key):
    (res,) = reproduce([f"q-{key}"])
    assert all(res.checks.values())
    assert res.conclusion["q_polynomial"] and res.conclusion["verification"] == "full"


@pytest.mark.parametrize("m,n", [(4, 4), (4, 5)])
def test_other_parameters(m, n):
    results = reproduce(["p-pair", "p-hamming", "p-ext-hamming", "q-pair", "q-ext-hamming"],
                        m=m, n=n)
    assert len(results) == 5 and all(all(r.checks.values()) for r in results)


def test_pair_code_relation():
    for n in (3, 4, 5):
        ex = _examples(n=n)[0]
        res = run_p_example(ex)
        assert res.relation == ["t = 2s*-1"]
        assert res.degree == n - 1


def test_tampered_expectation_raises():
    ex = _examples()[1]
    with pytest.raises(ReproductionMismatch):
        run_p_example(dataclasses.replace(ex, s_star=2))
    with pytest.raises(ReproductionMismatch):
        run_p_example(dataclasses.replace(ex, intervals=((4, 3),)))
    with pytest.raises(ReproductionMismatch):
        run_q_example(dataclasses.replace(ex, intervals=((3, 2),)))


def test_report_is_reproducible():
    a = [r.as_dict() for r in reproduce(["p-ext-hamming", "q-pair"])]
    b = [r.as_dict() for r in reproduce(["p-ext-hamming", "q-pair"])]
    assert a == b
