import itertools

import pytest

from levikit.diagrams import GroupElem
from levikit.tensor import CategoryTruncation, TensorCategory
from levikit.zappa import (
    AXIOMS,
    Path,
    SelfSimilarAction,
    ZSElement,
    agrees_with_normal_forms,
    check_axioms,
    derive_action,
    from_zs,
    to_zs,
    zs_iso_check,
    zs_product,
)


def test_trivial_groups_act_trivially(free):
    action = derive_action(free)
    for p in action.paths(3):
        one = free.identity(p.start)
        q, h = action.act_restrict(one, p)
        assert q == p and h == free.identity(p.end)


@pytest.mark.parametrize("g, image, restriction", [(2, ("x", 0), 2), (1, ("x", 1), 0), (0, ("x", 0), 0)])
def test_hnn_action_on_atom(hnn, g, image, restriction):
    action = derive_action(hnn)
    p = action.atom_path(("x", 0))
    q, h = action.act_restrict(GroupElem("v", g), p)
    assert q.atoms == (image,)
    assert h == GroupElem("v", restriction)


def test_axioms_hold(diagram):
    report = check_axioms(derive_action(diagram), 3)
    assert report.ok, report.lines()
    assert tuple(report.checks) == AXIOMS
    assert all(c.checked > 0 for c in report.checks.values())


def test_path_extension_matches_normal_forms(diagram):
    assert agrees_with_normal_forms(derive_action(diagram), 3)


def test_identity_path_bookkeeping(hnn):
    action = derive_action(hnn)
    for k in range(4):
        g = GroupElem("v", k)
        ident = action.identity_path("v")
        assert action.act(g, ident) == ident
        assert action.restrict(g, ident) == g


def _mutated(diagram, restrict=None, act=None):
    base = derive_action(diagram)
    a = SelfSimilarAction(diagram, base.act_table, base.restrict_table)
    a.restrict_table.update(restrict or {})
    a.act_table.update(act or {})
    return a


def test_fault_in_restriction_names_ss7(hnn):
    report = check_axioms(_mutated(hnn, restrict={(3, ("x", 1)): GroupElem("v", 2)}), 2)
    assert "SS7" in report.failures()
    assert report.checks["SS7"].counterexample is not None


def test_fault_in_action_names_ss2(hnn):
    report = check_axioms(_mutated(hnn, act={(1, ("x", 1)): ("x", 1)}), 2)
    assert "SS2" in report.failures()


def test_missing_table_entry_fails_cleanly(hnn):
    a = _mutated(hnn)
    del a.restrict_table[(3, ("x", 0))]
    assert not check_axioms(a, 1).ok


def test_zs_identity_and_factorisation(hnn):
    zs = zs_product(derive_action(hnn))
    for z in zs.elements(2):
        assert zs.compose(zs.identity(z.path.start), z) == z
        assert zs.compose(z, zs.identity(z.group.vertex)) == z
        # (x, g) = (x, 1) (1, g)
        assert zs.compose(zs.from_path(z.path), zs.from_group(z.group)) == z


def test_zs_associative(hnn):
    zs = zs_product(derive_action(hnn))
    elems = zs.elements(1)
    for a, b, c in itertools.product(elems, repeat=3):
        assert zs.compose(zs.compose(a, b), c) == zs.compose(a, zs.compose(b, c))


def test_zs_inverse(hnn):
    zs = zs_product(derive_action(hnn))
    for k in range(4):
        z = zs.from_group(GroupElem("v", k))
        inv = zs.inverse(z)
        assert zs.compose(z, inv) == zs.identity("v") == zs.compose(inv, z)
    with pytest.raises(ValueError):
        zs.inverse(zs.from_path(Path("v", "v", (("x", 0),))))


def test_zs_mu_is_length(hnn):
    zs = zs_product(derive_action(hnn))
    for z in zs.elements(3):
        assert zs.mu(z) == len(z.path)
        assert zs.is_invertible(z) == (zs.mu(z) == 0)


def test_zs_conversion_round_trip(diagram):
    for u in CategoryTruncation(TensorCategory(diagram), 2):
        assert from_zs(to_zs(u)) == u


def test_zs_isomorphism(diagram):
    assert zs_iso_check(diagram, 3)


def test_zs_element_type():
    z = ZSElement(Path("v", "v"), GroupElem("v", 0))
    assert len(z.path) == 0
