"""The finite partial-function model and the oracles built on it."""
import pytest

from attrcat.diagram import build_diagram, iso_check
from attrcat.semantics import FiniteModel, canonical_model, denotation, evaluate, leq_denotation

from helpers import DATA_SIG
from oracles import (action_law_failures, comonoid_actions, derived_filter,
                     filter_candidates_satisfying, order_violations, spider_disagreements, spider_pairs)

D3 = canonical_model({"D": (0, 1, 2)})


def test_primitives():
    assert evaluate(build_diagram("mu[D]", DATA_SIG), D3, (1, 1)) == (1,)
    assert evaluate(build_diagram("mu[D]", DATA_SIG), D3, (1, 2)) is None
    assert evaluate(build_diagram("delta[D]", DATA_SIG), D3, (2,)) == (2, 2)
    assert evaluate(build_diagram("eps[D]", DATA_SIG), D3, (0,)) == ()


def test_order():
    f = {(0,): None, (1,): (1,)}
    g = {(0,): (0,), (1,): (1,)}
    assert leq_denotation(f, g) and not leq_denotation(g, f)


def test_spiders_agree_with_denotations():
    assert spider_disagreements(spider_pairs(150, seed=7)) == []


def test_oracle_catches_unnormalised_comparison():
    """Sanity check of the oracle: comparing without normalising disagrees."""
    pairs = spider_pairs(150, seed=7)
    bad = 0
    for d1, d2, size in pairs:
        m = FiniteModel({"D": tuple(range(size))})
        bad += iso_check(d1, d2) != (denotation(d1, m) == denotation(d2, m))
    assert bad > 0


@pytest.mark.parametrize("nm,nd", [(m, d) for m in (1, 2, 3) for d in (1, 2, 3)])
def test_filter_is_unique(nm, nd):
    actions = list(comonoid_actions(nm, nd))
    # the laws pin retrieval down to "keep the entity, report some value"
    assert len(actions) == nd ** nm
    for gamma in actions:
        phi = derived_filter(gamma, nm, nd)
        assert action_law_failures(gamma, phi, nm, nd) == []
        assert filter_candidates_satisfying(gamma, nm, nd) == [phi]


def test_broken_filter_is_caught():
    gamma = ((0, 0), (1, 1))
    phi = derived_filter(gamma, 2, 2)
    phi[(0, 1)] = 0
    assert action_law_failures(gamma, phi, 2, 2)


def test_filter_then_retrieve_below_identity():
    assert order_violations("set[a] ; get[a]", "id[M] * id[D]") == 0


def test_agreement_filter_below_identity():
    assert order_violations("chi[a,b]", "id[M] * id[N]") == 0


def test_order_oracle_detects_reversal():
    assert order_violations("id[M] * id[N]", "chi[a,b]") > 0
