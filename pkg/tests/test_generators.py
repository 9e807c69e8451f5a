import pytest

from semimonotone.connectivity import component_count
from semimonotone.documents import family_json
from semimonotone.generators import KINDS, disconnected_pair, generate, minimal_empty_triple
from semimonotone.helly import check_hypotheses, intersect_family
from semimonotone.predicates import is_semi_monotone


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_disconnected_pair(m):
    fam = disconnected_pair(m)
    for member in fam.members:
        assert is_semi_monotone(member.domain).verdict
    assert component_count(intersect_family(fam, (0, 1))) == m


def test_minimal_empty_triple():
    fam = minimal_empty_triple()
    for J in [(0, 1), (0, 2), (1, 2)]:
        assert not intersect_family(fam, J).is_empty
    assert intersect_family(fam, (0, 1, 2)).is_empty


@pytest.mark.parametrize("kind", KINDS)
def test_generate_is_reproducible(kind):
    a = generate(kind, {"s": 4, "dim": 2}, 7)
    b = generate(kind, {"s": 4, "dim": 2}, 7)
    assert family_json(a) == family_json(b)


def test_nested_boxes_satisfy_hypotheses():
    assert check_hypotheses(generate("nested_boxes", {"s": 4}, 0)).hypothesis_ok


@pytest.mark.parametrize("params", [{"s": 0}, {"s": 13}, {"dim": 0}, {"dim": 5}])
def test_bad_params(params):
    with pytest.raises(ValueError):
        generate("nested_boxes", params, 0)


def test_unknown_kind():
    with pytest.raises(ValueError):
        generate("spirals", {}, 0)
