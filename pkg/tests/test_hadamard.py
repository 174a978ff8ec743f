import random

import numpy as np
import pytest

from designforge import designs
from designforge.constructions import (
    PreconditionError,
    galois_ring_data,
    galois_ring_ddf,
    szekeres_family,
)
from designforge.designs import Block, DifferenceFamily
from designforge.field import FieldCtx
from designforge.galois import RingCtx
from designforge.groups import FiniteAbelianGroup, Subgroup
from designforge.hadamard import (
    SignMatrix,
    build_symmetric_parts,
    check_symmetric_conditions,
    equivalence_invariants,
    hadamard_failure,
    hadamard_from_difference_set,
    identity_checks,
    is_hadamard,
    is_skew,
    is_symmetric,
    normalize,
    skew_from_df,
    sylvester,
    symmetric_from_ddf,
)


def z6_family():
    g = FiniteAbelianGroup((6,))
    n = Subgroup(g, [(0,), (3,)])
    return DifferenceFamily(
        g,
        n,
        [Block(g, frozenset({(1,), (5,)})), Block(g, frozenset({(1,), (2,)}))],
    )


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------


def test_predicates_on_order_two():
    M = SignMatrix(np.array([[1, 1], [1, -1]]))
    assert is_hadamard(M) and is_symmetric(M) and not is_skew(M)


def test_sylvester_orders():
    assert sylvester(0).entries.tolist() == [[1]]
    s4 = sylvester(2)
    assert s4.order == 4 and is_hadamard(s4)
    s8 = sylvester(3)
    assert is_hadamard(s8)
    assert (s8.entries[0] == 1).all() and (s8.entries[:, 0] == 1).all()
    assert all(int(s8.entries[i].sum()) == 0 for i in range(1, 8))


def test_all_ones_is_not_hadamard():
    M = SignMatrix(np.ones((2, 2), dtype=int))
    assert not is_hadamard(M)
    assert "inner product" in hadamard_failure(M)


def test_rejects_non_sign_entries():
    with pytest.raises(ValueError):
        SignMatrix(np.array([[1, 0], [1, 1]]))


def test_normalize():
    rng = random.Random(3)
    A = sylvester(3).entries.copy()
    for i in range(8):
        if rng.random() < 0.5:
            A[i] *= -1
        if rng.random() < 0.5:
            A[:, i] *= -1
    norm, _, _ = normalize(SignMatrix(A))
    assert (norm.entries[0] == 1).all() and (norm.entries[:, 0] == 1).all()
    assert is_hadamard(norm)


def test_text_roundtrip():
    s = sylvester(2)
    assert SignMatrix.from_text(s.to_text()) == s
    assert SignMatrix.from_json(s.to_json()) == s


# ---------------------------------------------------------------------------
# the skew array
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("q,order", [(7, 8), (11, 12), (19, 20), (23, 24)])
def test_skew_from_szekeres(q, order):
    fam = szekeres_family(FieldCtx(q)).family
    res = skew_from_df(fam)
    M = res.matrix
    assert M.order == order
    A = M.entries
    assert np.array_equal(A @ A.T, order * np.eye(order, dtype=np.int64))
    assert np.array_equal(A.T @ A, order * np.eye(order, dtype=np.int64))
    assert np.array_equal(A + A.T, 2 * np.eye(order, dtype=np.int64))


def test_skew_rejects_wrong_parameters():
    g = FiniteAbelianGroup((7,))
    fam = DifferenceFamily(
        g,
        Subgroup.trivial(g),
        [Block(g, frozenset({(1,), (2,)})), Block(g, frozenset({(1,), (3,)}))],
    )
    with pytest.raises(PreconditionError):
        skew_from_df(fam)  # |G| = 7 needs blocks of size 3


def test_skew_requires_a_skew_block():
    # {1,4} and {2,3} in Z_5 form a (Z_5,2,1)-DF but both blocks are
    # negation-closed, so the skewness condition fails
    g = FiniteAbelianGroup((5,))
    fam = DifferenceFamily(
        g,
        Subgroup.trivial(g),
        [Block(g, frozenset({(1,), (4,)})), Block(g, frozenset({(2,), (3,)}))],
    )
    assert designs.verify(fam).ok
    with pytest.raises(PreconditionError, match="skewness"):
        skew_from_df(fam)


# ---------------------------------------------------------------------------
# the symmetric array
# ---------------------------------------------------------------------------


def test_conditions_z6():
    rep = check_symmetric_conditions(z6_family())
    assert rep.ok and rep.m == 4


def test_conditions_gr43():
    fam = galois_ring_ddf(RingCtx(3)).family
    rep = check_symmetric_conditions(fam, 8)
    assert rep.ok
    assert (rep.lam, rep.mu) == (8, 10) and rep.sizes == (12, 12)


def test_conditions_orient_blocks_after_serialization():
    # serialization sorts blocks, so the checker may find the negation-closed
    # block in either slot; the report records the orientation
    fam = galois_ring_ddf(RingCtx(3)).family
    fam.blocks = [fam.blocks[1], fam.blocks[0]]
    assert designs.verify(fam).ok
    rep = check_symmetric_conditions(fam)
    assert rep.ok and rep.block_order == (1, 0)
    res = symmetric_from_ddf(fam)
    assert is_hadamard(res.matrix) and is_symmetric(res.matrix)


def test_conditions_negative_control_symmetry():
    # doubling the skew block leaves no negation-closed block at all
    fam = galois_ring_ddf(RingCtx(3)).family
    fam.blocks = [fam.blocks[1], fam.blocks[1]]
    rep = check_symmetric_conditions(fam)
    assert not rep.ok
    assert any("negation-closed" in f for f in rep.failures)


def test_symmetric_from_z6():
    res = symmetric_from_ddf(z6_family())
    M = res.matrix
    assert M.order == 16 and is_hadamard(M) and is_symmetric(M)
    assert np.array_equal(
        M.entries.T @ M.entries, 16 * np.eye(16, dtype=np.int64)
    )


def test_symmetric_from_gr43_with_checks():
    res = symmetric_from_ddf(galois_ring_ddf(RingCtx(3)).family)
    assert res.matrix.order == 64
    assert is_hadamard(res.matrix) and is_symmetric(res.matrix)
    checks = identity_checks(res.parts)
    assert all(c.ok for c in checks)
    numbers = sorted({c.number for c in checks})
    assert numbers == list(range(1, 11))


def test_identity_check_reported_values():
    # spot values: C C^T diagonal is m/2 = 4, A'A'^T+B'B'^T diagonal is m(m-1) = 56
    parts = build_symmetric_parts(
        galois_ring_ddf(RingCtx(3)).family, sylvester(3)
    )
    m = parts.m
    CCt = parts.C @ parts.C.T
    assert set(np.diag(CCt)) == {m // 2}
    S = parts.Ap @ parts.Ap.T + parts.Bp @ parts.Bp.T
    assert set(np.diag(S)) == {m * (m - 1)}
    Z = parts.Bp @ parts.H1 + parts.Ap @ parts.H2
    assert not Z.any()


def test_identity_checks_zero_claim_on_z6():
    parts = build_symmetric_parts(z6_family(), sylvester(2))
    Z = parts.Bp @ parts.H1 + parts.Ap @ parts.H2
    assert not Z.any()


def test_symmetric_seed_must_match():
    with pytest.raises(PreconditionError):
        symmetric_from_ddf(z6_family(), H=sylvester(3))  # order 8 seed for m=4


def test_symmetric_rejects_unqualified_family():
    fam = szekeres_family(FieldCtx(11)).family
    with pytest.raises(PreconditionError):
        symmetric_from_ddf(fam)


def test_coset_assignment_variants():
    fam = z6_family()
    base = symmetric_from_ddf(fam).matrix
    for perm in ([1, 0, 2], [2, 1, 0], 7, random.Random(9)):
        M = symmetric_from_ddf(fam, coset_assignment=perm).matrix
        assert is_hadamard(M) and is_symmetric(M)
    with pytest.raises(ValueError):
        symmetric_from_ddf(fam, coset_assignment=[0, 0, 1])
    assert is_hadamard(base)


def test_identity_checks_fail_with_witness_on_perturbation():
    parts = build_symmetric_parts(z6_family(), sylvester(2))
    parts.Ap[0, 1] *= -1  # single-entry perturbation
    checks = identity_checks(parts)
    bad = [c for c in checks if not c.ok]
    assert bad
    assert all("mismatch at" in c.detail for c in bad)


# ---------------------------------------------------------------------------
# difference-set route and fingerprints
# ---------------------------------------------------------------------------


def test_hadamard_from_difference_set():
    ring = RingCtx(3)
    data = galois_ring_data(ring)
    group = ring.additive_group()
    fam = DifferenceFamily(
        group, Subgroup.trivial(group), [Block(group, frozenset(data.D))]
    )
    M = hadamard_from_difference_set(fam)
    assert M.order == 64 and is_hadamard(M) and is_symmetric(M)


def test_fingerprint_invariance_under_signed_permutations():
    rng = random.Random(11)
    M = sylvester(3)
    fp = equivalence_invariants(M)
    for _ in range(5):
        A = M.entries.copy()
        pr = list(range(8))
        pc = list(range(8))
        rng.shuffle(pr)
        rng.shuffle(pc)
        A = A[pr][:, pc]
        for i in range(8):
            if rng.random() < 0.5:
                A[i] *= -1
            if rng.random() < 0.5:
                A[:, i] *= -1
        assert equivalence_invariants(SignMatrix(A)) == fp


def test_fingerprints_recorded_for_both_order64_routes():
    # recorded, not compared: equivalence deciding is out of scope
    ring = RingCtx(3)
    res = symmetric_from_ddf(galois_ring_ddf(ring).family)
    group = ring.additive_group()
    fam = DifferenceFamily(
        group,
        Subgroup.trivial(group),
        [Block(group, frozenset(galois_ring_data(ring).D))],
    )
    direct = hadamard_from_difference_set(fam)
    fp_array = equivalence_invariants(res.matrix)
    fp_direct = equivalence_invariants(direct)
    assert fp_array.order == fp_direct.order == 64
    assert fp_array.as_tuple() and fp_direct.as_tuple()


def test_fingerprint_rejects_non_hadamard_and_big_orders():
    with pytest.raises(ValueError):
        equivalence_invariants(SignMatrix(np.ones((2, 2), dtype=int)))
    big = SignMatrix(np.kron(sylvester(3).entries, sylvester(5).entries))
    with pytest.raises(ValueError):
        equivalence_invariants(big)


# ---------------------------------------------------------------------------
# negative controls on the predicates
# ---------------------------------------------------------------------------


def test_single_entry_perturbation_breaks_hadamard():
    M = sylvester(3)
    A = M.entries.copy()
    A[2, 5] *= -1
    bad = SignMatrix(A)
    assert not is_hadamard(bad)
    witness = hadamard_failure(bad)
    assert witness is not None and "rows" in witness
