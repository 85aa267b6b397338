import random

import pytest

from green.typesys import (DEFAULT_EXC, Sig, StepLimitExceeded, TypeDesc, TypeTable,
                           is_subtype, type_equal)

from gen import random_table, unrolled_equal


def table(**classes):
    tt = TypeTable()
    tt.add(TypeDesc(DEFAULT_EXC, "class"))
    for name, sigs in classes.items():
        tt.add(TypeDesc(name, "class", tuple(sigs)))
    return tt


def test_recursive_types_are_equal():
    # List has next() : List, Chain has next() : Chain
    tt = table(List=[Sig("next", (), ret="List")], Chain=[Sig("next", (), ret="Chain")])
    assert type_equal(tt, "List", "Chain")


def test_mutually_recursive_types():
    tt = table(A=[Sig("f", ("B",))], B=[Sig("g", (), ret="A")],
               C=[Sig("f", ("D",))], D=[Sig("g", (), ret="C")])
    assert type_equal(tt, "A", "C")
    assert type_equal(tt, "B", "D")


def test_parameters_are_invariant():
    tt = table(Big=[Sig("a", ()), Sig("b", ())], Small=[Sig("a", ())],
               UsesBig=[Sig("f", ("Big",))], UsesSmall=[Sig("f", ("Small",))])
    assert is_subtype(tt, "Big", "Small")
    assert not is_subtype(tt, "Small", "Big")
    assert not is_subtype(tt, "UsesBig", "UsesSmall")
    assert not is_subtype(tt, "UsesSmall", "UsesBig")


def test_subtype_does_not_assume_itself():
    # {m(S), n()} is not a subtype of {m(T)} since S and T differ
    tt = table(S=[Sig("m", ("S",)), Sig("n", ())], T=[Sig("m", ("T",))])
    assert not is_subtype(tt, "S", "T")


def test_equality_counts_duplicate_overloads_both_ways():
    tt = table(X=[Sig("m", ("X",)), Sig("m", ("Y",))], Y=[Sig("m", ("Y",))])
    assert type_equal(tt, "X", "Y") == type_equal(tt, "Y", "X")


def test_exception_signature_matters():
    tt = table(E=[Sig("fix", ())], A=[Sig("f", (), exc="E")], B=[Sig("f", ())])
    assert not type_equal(tt, "A", "B")


def test_basic_types_and_nil():
    tt = table(A=[])
    assert not is_subtype(tt, "integer", "A")
    assert is_subtype(tt, "Nil", "A")
    assert not is_subtype(tt, "A", "Nil")


def test_arrays_are_invariant():
    tt = table(A=[Sig("a", ())], B=[Sig("a", ()), Sig("b", ())])
    assert is_subtype(tt, "B", "A")
    assert not is_subtype(tt, "array(B)[]", "array(A)[]")
    assert is_subtype(tt, "array(A)[]", "array(A)[]")


def test_step_limit_is_enforced():
    tt = table(A=[Sig("m", ("A",))], B=[Sig("m", ("B",))])
    tt.step_limit = 1
    with pytest.raises(StepLimitExceeded):
        tt.equal("A", "B")


@pytest.mark.parametrize("seed", range(40))
def test_random_tables_small_sample(seed):
    rng = random.Random(seed)
    rt = random_table(rng)
    tt, names = rt.table, rt.names
    for s in names:
        for t in names:
            assert tt.equal(s, t) == tt.equal(t, s)
            assert tt.equal(s, t) == unrolled_equal(tt, s, t, len(names) + 1)
            if rt.is_subclass(s, t):
                assert tt.subtype(s, t)
