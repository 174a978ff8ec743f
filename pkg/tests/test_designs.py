import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from designforge import designs
from designforge.constructions import cyclotomic_family, szekeres_family
from designforge.designs import (
    Block,
    DesignParams,
    DifferenceFamily,
    develop,
    difference_count,
    difference_table,
    one_rotational_design,
    verify,
    verify_gdd,
)
from designforge.field import FieldCtx
from designforge.groups import FiniteAbelianGroup, Subgroup


def _family(moduli, blocks, forbidden=None, declared=None):
    g = FiniteAbelianGroup(moduli)
    forb = Subgroup(g, forbidden) if forbidden else Subgroup.trivial(g)
    return DifferenceFamily(
        g, forb, [Block(g, frozenset(tuple(e) for e in b)) for b in blocks], declared
    )


# ---------------------------------------------------------------------------
# the difference-count oracle
# ---------------------------------------------------------------------------


def test_singleton_block_has_no_differences():
    fam = _family((6,), [[(0,)]])
    for d in range(1, 6):
        assert difference_count(fam, (d,)) == 0


def test_difference_count_rejects_zero():
    fam = _family((6,), [[(1,), (2,)]])
    with pytest.raises(ValueError):
        difference_count(fam, (0,))


def test_szekeres_q11_theta_constant_one():
    # the multiplicative family {3,4},{4,5} in F_11 maps onto Z_5
    fam = szekeres_family(FieldCtx(11)).family
    for d in range(1, 5):
        assert difference_count(fam, (d,)) == 1


def test_difference_table_matches_naive_counting():
    fam = _family((4, 3), [[(0, 0), (1, 2), (3, 1)], [(2, 0), (0, 1)]])
    g = fam.ambient
    naive = {}
    for block in fam.blocks:
        for x in block.elements:
            for y in block.elements:
                if x != y:
                    d = g.sub(x, y)
                    naive[d] = naive.get(d, 0) + 1
    assert difference_table(fam) == naive


def test_theta_total_mass():
    fam = _family((7,), [[(1,), (2,), (4,)], [(0,), (3,)]])
    table = difference_table(fam)
    assert sum(table.values()) == 3 * 2 + 2 * 1


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_difference_table_matches_naive_on_random_families(data):
    moduli = data.draw(
        st.lists(st.integers(min_value=2, max_value=5), min_size=1, max_size=2)
    )
    g = FiniteAbelianGroup(moduli)
    elems = list(g.elements())
    blocks = []
    for _ in range(data.draw(st.integers(min_value=1, max_value=3))):
        size = data.draw(st.integers(min_value=0, max_value=min(5, g.order)))
        blocks.append(frozenset(data.draw(st.permutations(elems))[:size]))
    fam = DifferenceFamily(
        g, Subgroup.trivial(g), [Block(g, b) for b in blocks]
    )
    naive = {}
    for b in blocks:
        for x in b:
            for y in b:
                if x != y:
                    d = g.sub(x, y)
                    naive[d] = naive.get(d, 0) + 1
    table = difference_table(fam)
    assert table == naive
    assert sum(table.values()) == sum(len(b) * (len(b) - 1) for b in blocks)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def test_verify_z6_ddf():
    fam = _family((6,), [[(1,), (5,)], [(1,), (2,)]], forbidden=[(0,), (3,)])
    rep = verify(fam)
    assert rep.ok and rep.lam == 0 and rep.mu == 1 and rep.sizes == (2, 2)


def test_verify_against_declared_parameters():
    fam = _family(
        (6,),
        [[(1,), (5,)], [(1,), (2,)]],
        forbidden=[(0,), (3,)],
        declared=DesignParams(0, 1, (2, 2)),
    )
    assert verify(fam).ok
    fam.declared = DesignParams(1, 1, (2, 2))
    assert not verify(fam).ok


def test_verify_corrupted_family_reports_witness():
    fam = _family((6,), [[(1,), (5,)], [(1,), (4,)]], forbidden=[(0,), (3,)])
    rep = verify(fam)
    assert not rep.ok
    assert rep.witness is not None
    d, got, expected = rep.witness
    assert difference_table(fam).get(d, 0) == got


def test_verify_flags_degenerate_blocks():
    fam = _family((3,), [[(0,)], [(1,)]])
    rep = verify(fam)
    assert rep.ok and rep.degenerate_blocks == 2


# ---------------------------------------------------------------------------
# development
# ---------------------------------------------------------------------------


def test_develop_counts():
    fam = _family((3,), [[(0,)]])
    assert len(develop(fam)) == 3
    szek = szekeres_family(FieldCtx(7)).family
    assert len(develop(szek)) == 6


def test_develop_z6_into_gdd():
    fam = _family((6,), [[(1,), (5,)], [(1,), (2,)]], forbidden=[(0,), (3,)])
    blocks = [b.elements for b in develop(fam)]
    groups = [[(0,), (3,)], [(1,), (4,)], [(2,), (5,)]]
    rep = verify_gdd(blocks, groups)
    assert rep.ok and rep.lam == 0 and rep.mu == 1


def test_gdd_negative_control_dropped_block():
    fam = _family((6,), [[(1,), (5,)], [(1,), (2,)]], forbidden=[(0,), (3,)])
    blocks = [b.elements for b in develop(fam)]
    rep = verify_gdd(blocks[:-1], [[(0,), (3,)], [(1,), (4,)], [(2,), (5,)]])
    assert not rep.ok
    assert rep.witness is not None


def test_gdd_rejects_bad_partition():
    rep = verify_gdd([[(0,), (1,)]], [[(0,)], [(0,), (1,)]])
    assert not rep.ok


def test_gdd_type_one_is_two_design():
    # Fano plane as a development of the (7,3,1) difference set
    fam = _family((7,), [[(1,), (2,), (4,)]])
    blocks = [b.elements for b in develop(fam)]
    rep = verify_gdd(blocks, [[(i,)] for i in range(7)])
    assert rep.ok and rep.mu == 1


# ---------------------------------------------------------------------------
# one-rotational development
# ---------------------------------------------------------------------------


def test_one_rotational_q11():
    fam = cyclotomic_family(FieldCtx(11), 2, with_zero=True).family
    design = one_rotational_design(fam)
    assert design.lam == 2
    assert len(design.points) == 6
    assert len(design.blocks) == 10
    assert all(len(b) == 3 for b in design.blocks)
    assert design.report.ok


def test_one_rotational_rejects_lam_zero():
    fam = cyclotomic_family(FieldCtx(13), 4, with_zero=True).family
    assert verify(fam).mu == 0
    with pytest.raises(ValueError):
        one_rotational_design(fam)


def test_one_rotational_rejects_wrong_shape():
    fam = szekeres_family(FieldCtx(11)).family  # equal block sizes
    with pytest.raises(ValueError):
        one_rotational_design(fam)


def test_one_rotational_negative_control_without_infinity():
    fam = cyclotomic_family(FieldCtx(11), 2, with_zero=True).family
    plain = [b.elements for b in develop(fam)]
    points = [(i,) for i in range(5)] + [designs.INFINITY]
    rep = verify_gdd(plain, [[p] for p in points])
    assert not rep.ok  # pairs through the new point are never covered
    assert rep.witness is not None


# ---------------------------------------------------------------------------
# bookkeeping
# ---------------------------------------------------------------------------


def test_counting_identity_on_verified_families():
    fam = _family((6,), [[(1,), (5,)], [(1,), (2,)]], forbidden=[(0,), (3,)])
    rep = verify(fam)
    params = DesignParams(rep.lam, rep.mu, rep.sizes)
    assert params.counting_identity_holds(6, 2)
    assert not params.counting_identity_holds(6, 3)


def test_family_json_roundtrip():
    fam = _family(
        (6,),
        [[(1,), (5,)], [(1,), (2,)]],
        forbidden=[(0,), (3,)],
        declared=DesignParams(0, 1, (2, 2)),
    )
    fam.provenance = {"construction": "test"}
    again = DifferenceFamily.from_json(fam.to_json())
    assert again.ambient == fam.ambient
    assert again.forbidden == fam.forbidden
    assert again.canonical_blocks() == fam.canonical_blocks()
    assert again.declared == fam.declared
    assert again.provenance == {"construction": "test"}


def test_blocks_must_live_in_ambient():
    g = FiniteAbelianGroup((6,))
    with pytest.raises(ValueError):
        Block(g, frozenset({(7,)}))
