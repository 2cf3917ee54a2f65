from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from postselect_ft.distributions import RATIONAL, DomainError, as_mode, make_distribution, weight
from postselect_ft.mixing import check_hull_membership, mixing_coefficients
from postselect_ft.quotient import (
    ALL_FLIP,
    CLASS_NAMES,
    QuotientDistribution,
    canonicalize,
    embed_distribution,
    lift_decomposition,
    make_quotient,
    quotient_of,
    verify_embedding_properties,
    xstring_to_pattern,
)


@st.composite
def quotients(draw):
    w = draw(st.lists(st.integers(0, 30), min_size=8, max_size=8))
    if sum(w) == 0:
        w[0] = 1
    tot = sum(w)
    return QuotientDistribution(as_mode([Fraction(v, tot) for v in w], RATIONAL))


def test_eight_classes_cover_sixteen_patterns():
    seen = {}
    for x in range(16):
        c = canonicalize(x)
        assert x in c.members()
        seen.setdefault(c.name, set()).add(x)
    assert sorted(seen, key=CLASS_NAMES.index) == list(CLASS_NAMES)
    assert all(len(v) == 2 for v in seen.values())


@pytest.mark.parametrize("x, name", [
    ("0000", "IIII"), ("1111", "IIII"),
    ("0111", "XIII"), ("1011", "IXII"), ("1110", "IIIX"),
    ("0011", "XXII"), ("0101", "XIXI"), ("0110", "XIIX"),
])
def test_canonical_names(x, name):
    assert canonicalize(x).name == name


def test_canonical_rep_has_minimum_weight():
    for x in range(16):
        rep = canonicalize(x).rep
        assert weight(rep) == min(weight(x), weight(x ^ ALL_FLIP))


def test_canonicalize_rejects_other_lengths():
    with pytest.raises(DomainError):
        canonicalize("101")
    with pytest.raises(DomainError):
        xstring_to_pattern("XYII")


@given(quotients())
def test_embedding_is_right_inverse_of_quotient(qd):
    e = embed_distribution(qd)
    assert e.total() == qd.total() == 1
    assert quotient_of(e) == qd
    assert all(e.probs[x] == 0 for x in range(16) if weight(x) >= 3)


@given(quotients())
def test_weight_two_mass_split_evenly(qd):
    e = embed_distribution(qd)
    for name in ("XXII", "XIXI", "XIIX"):
        x = xstring_to_pattern(name)
        assert e.probs[x] == e.probs[x ^ ALL_FLIP] == qd[name] / 2


@given(quotients(), quotients(), st.fractions(min_value=0, max_value=1, max_denominator=20))
def test_embedding_is_linear(a, b, lam):
    mixed = QuotientDistribution(lam * a.probs + (1 - lam) * b.probs)
    lhs = embed_distribution(mixed).probs
    rhs = lam * embed_distribution(a).probs + (1 - lam) * embed_distribution(b).probs
    assert list(lhs) == list(rhs)


def test_quotient_folds_complements():
    d = make_distribution(4, {"0000": Fraction(1, 2), "1111": Fraction(1, 4), "0111": Fraction(1, 4)})
    q = quotient_of(d)
    assert q["IIII"] == Fraction(3, 4) and q["XIII"] == Fraction(1, 4)


def test_make_quotient_validates():
    with pytest.raises(DomainError):
        make_quotient({"IXIX": Fraction(1)})
    with pytest.raises(DomainError):
        make_quotient([Fraction(-1, 2)] + [Fraction(3, 14)] * 7)


def test_quotient_json_uses_xstrings():
    q = make_quotient({"IIII": Fraction(9, 10), "XIXI": Fraction(1, 10)})
    assert q.to_json() == {"IIII": "9/10", "XIXI": "1/10"}


def test_lift_of_member_recovers_classes():
    p = [Fraction(1, 5)] * 4
    q = make_quotient({"IIII": Fraction(9, 10), "XIII": Fraction(1, 20), "IIIX": Fraction(1, 20)})
    e = embed_distribution(q)
    assert check_hull_membership(e, p).member
    comps, combined = lift_decomposition(mixing_coefficients(e, p))
    assert combined == q
    assert sum(c for c, _ in comps) == 1


def test_lift_refuses_negative_coefficients():
    q = make_quotient({"IIII": Fraction(99, 100), "XIXI": Fraction(1, 100)})
    decomp = mixing_coefficients(embed_distribution(q), [Fraction(1, 10)] * 4)
    with pytest.raises(DomainError):
        lift_decomposition(decomp)


def test_embedding_suite_passes():
    report = verify_embedding_properties(samples=30, seed=5)
    assert report["passed"], report["violations"]
    assert report["checked"]["vertex_images"] == 16


def test_quotient_needs_four_wires():
    with pytest.raises(DomainError):
        quotient_of(make_distribution(2, {"00": 1.0}))


def test_float_embedding_matches_rational():
    q = make_quotient({"IIII": Fraction(7, 8), "XXII": Fraction(1, 8)})
    ef = embed_distribution(make_quotient([float(v) for v in q.probs]))
    er = embed_distribution(q)
    assert np.allclose(ef.probs.astype(float), er.probs.astype(float), atol=0)
