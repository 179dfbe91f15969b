import cmath
import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dessin_rh import (
    Chain,
    Dessin,
    NotATreeError,
    NotConnectedError,
    Permutation,
    Star,
    TwoStar,
    canonical_form,
    classify_tree,
    dessins_isomorphic,
    enumerate_plane_trees,
    euler_data,
    has_linear_rep_dim_le_2,
    is_plane_tree,
    moebius_representation,
)
from dessin_rh.dessin import orbits

STAR4 = Dessin.from_cycles([[0, 1, 2, 3]], [], 4)
CHAIN3 = Dessin.from_cycles([[0], [1, 2]], [[0, 1], [2]], 3)
TWO_STAR4 = Dessin.from_cycles([[0, 4], [1, 5], [2, 6], [3, 7]], [[0, 1, 2, 3]], 8)
FOUR_EDGE = Dessin.from_cycles([[0, 1, 2], [3]], [[2, 3]], 4)
FIVE_EDGE_FOUR_ENDS = Dessin.from_cycles([[0, 1, 2]], [[2, 3, 4]], 5)
TORUS = Dessin.from_cycles([[0, 1, 2]], [[0, 1, 2]], 3)


def chain(n: int) -> Dessin:
    black = [[i, i + 1] for i in range(0, n - 1, 2)]
    white = [[i, i + 1] for i in range(1, n - 1, 2)]
    return Dessin.from_cycles(black, white, n)


# -- permutations ------------------------------------------------------------------


@pytest.mark.parametrize(
    "images, cycles",
    [
        ([1, 2, 0, 3], [[0, 1, 2], [3]]),
        ([0, 1, 2, 3], [[0], [1], [2], [3]]),
        ([1, 0, 3, 2], [[0, 1], [2, 3]]),
    ],
)
def test_orbits(images, cycles):
    assert orbits(Permutation(images)) == cycles


def test_permutation_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))
    with pytest.raises(ValueError):
        Permutation.from_cycles([[0, 1], [1, 2]], 3)


def test_compose_applies_right_factor_first():
    a = Permutation((1, 2, 0))
    b = Permutation((1, 0, 2))
    assert a.compose(b)(0) == a(b(0))


perms = st.integers(1, 9).flatmap(lambda e: st.permutations(range(e)))


@given(perms)
def test_cycles_partition_domain(images):
    p = Permutation(tuple(images))
    cyc = orbits(p)
    assert sorted(i for c in cyc for i in c) == list(range(len(p)))
    for c in cyc:
        for a, b in zip(c, c[1:] + c[:1]):
            assert p(a) == b
    assert p.compose(p.inverse()).is_identity()


# -- Euler data --------------------------------------------------------------------


def test_euler_data_examples():
    assert tuple(vars(euler_data(STAR4)).values()) == (5, 4, 1, 0)
    assert tuple(vars(euler_data(TORUS)).values()) == (2, 3, 1, 1)
    single = Dessin(Permutation((0,)), Permutation((0,)))
    assert tuple(vars(euler_data(single)).values()) == (2, 1, 1, 0)


def test_disconnected_dessin_is_rejected():
    d = Dessin.from_cycles([[0, 1], [2, 3]], [], 4)
    with pytest.raises(NotConnectedError, match="not connected"):
        euler_data(d)


def test_is_plane_tree():
    assert is_plane_tree(STAR4)
    assert not is_plane_tree(TORUS)
    assert is_plane_tree(CHAIN3)


def dessin_pairs(max_e=6):
    return st.integers(1, max_e).flatmap(
        lambda e: st.tuples(st.permutations(range(e)), st.permutations(range(e)))
    ).map(lambda pw: Dessin(Permutation(tuple(pw[0])), Permutation(tuple(pw[1]))))


@given(dessin_pairs(7))
def test_euler_formula(d):
    for p in (d.black, d.white):
        assert sum(len(c) for c in orbits(p)) == d.edges
    if not d.is_transitive():
        return
    data = euler_data(d)
    assert data.vertices - data.edges + data.faces == 2 - 2 * data.genus
    assert data.genus >= 0


def test_euler_formula_exhaustive_small():
    for e in range(1, 5):
        for b in itertools.permutations(range(e)):
            for w in itertools.permutations(range(e)):
                d = Dessin(Permutation(b), Permutation(w))
                if d.is_transitive():
                    data = euler_data(d)
                    assert (data.vertices - e + data.faces) % 2 == 0 and data.genus >= 0


# -- classification --------------------------------------------------------------


def test_classify_examples():
    assert classify_tree(STAR4) == Star(4)
    assert classify_tree(CHAIN3) == Chain(3)
    assert classify_tree(TWO_STAR4) == TwoStar(4)
    assert classify_tree(FOUR_EDGE).kind == "other"
    assert str(classify_tree(TWO_STAR4)) == "TwoStar(4)"


def test_degenerate_classification():
    assert classify_tree(Dessin(Permutation((0,)), Permutation((0,)))) == Star(1)
    assert classify_tree(chain(2)) == Chain(2)
    assert classify_tree(chain(2).swapped()) == Chain(2)
    assert classify_tree(chain(4)) == Chain(4)


def test_classify_rejects_non_tree():
    with pytest.raises(NotATreeError):
        classify_tree(TORUS)
    with pytest.raises(NotATreeError):
        moebius_representation(TORUS)
    with pytest.raises(NotATreeError):
        has_linear_rep_dim_le_2(TORUS)


def test_tree_class_edge_counts():
    for cls in (Star(5), Chain(5), TwoStar(3)):
        assert cls.edges == (6 if cls.kind == "two_star" else 5)


@pytest.mark.parametrize("e", range(1, 9))
def test_classes_are_trees_and_consistent(e):
    for d in enumerate_plane_trees(e):
        cls = classify_tree(d)
        assert is_plane_tree(d)
        assert cls.edges == e
        assert classify_tree(d.swapped()) == cls


def test_linear_representation_examples():
    assert has_linear_rep_dim_le_2(TWO_STAR4)
    assert not has_linear_rep_dim_le_2(FOUR_EDGE)
    assert has_linear_rep_dim_le_2(chain(7))


# -- Moebius representations -------------------------------------------------------


def test_chain3_moebius_model():
    rep = moebius_representation(CHAIN3)
    theta = cmath.exp(2j * cmath.pi / 3)
    pts = rep.points
    assert pts[0] == pytest.approx(1)
    assert abs(pts[1] - theta) < 1e-12 and abs(pts[2] - theta**2) < 1e-12
    maps = {rep.black, rep.white}
    inv = [t for t in maps if abs(t.b) > 0 and abs(t(theta) - 1 / theta) < 1e-12]
    assert inv, "one transform is z -> 1/z"
    other = (maps - {inv[0]}).pop() if len(maps) == 2 else inv[0]
    assert abs(other(1) - theta) < 1e-12  # z -> theta/z swaps 1 and theta
    assert dessins_isomorphic(rep.induced_dessin(), CHAIN3, allow_swap=False)


def test_star5_moebius_model():
    d = Dessin.from_cycles([[0, 1, 2, 3, 4]], [], 5)
    rep = moebius_representation(d)
    assert rep.white.a == 1 and rep.white.b == 0 and rep.white.c == 0 and rep.white.d == 1
    rot = rep.black
    z = 0.3 + 0.1j
    w = z
    for _ in range(5):
        w = rot(w)
    assert abs(w - z) < 1e-12 and abs(rot(z) - z) > 1e-3


def test_non_moebius_tree():
    assert classify_tree(FIVE_EDGE_FOUR_ENDS).kind == "other"
    assert moebius_representation(FIVE_EDGE_FOUR_ENDS) is None


def test_moebius_transform_handles_infinity():
    from dessin_rh import MoebiusTransform

    inv = MoebiusTransform(0, 1, 1, 0)
    assert inv(0) is None and inv(None) == 0
    with pytest.raises(ValueError):
        MoebiusTransform(1, 2, 2, 4)


# -- isomorphism -------------------------------------------------------------------


def test_isomorphism_examples():
    star3 = Dessin.from_cycles([[0, 1, 2]], [], 3)
    iso = dessins_isomorphic(star3, star3)
    assert iso.relabeling == (0, 1, 2) and not iso.swapped
    assert dessins_isomorphic(star3, CHAIN3) is None
    iso = dessins_isomorphic(chain(2), chain(2).swapped())
    assert iso is not None and iso.swapped
    assert dessins_isomorphic(chain(2), chain(2).swapped(), allow_swap=False) is None


def relabel_pairs(max_e=7):
    return st.integers(1, max_e).flatmap(
        lambda e: st.tuples(st.sampled_from(enumerate_plane_trees(e)), st.permutations(range(e)))
    )


@given(relabel_pairs())
def test_isomorphism_is_relabeling_invariant(pair):
    d, relabel = pair
    other = d.relabeled(relabel)
    iso = dessins_isomorphic(d, other, allow_swap=False)
    assert iso is not None
    assert d.relabeled(iso.relabeling) == other
    back = dessins_isomorphic(other, d, allow_swap=False)
    assert back is not None
    assert dessins_isomorphic(d, d).relabeling == tuple(range(d.edges))
    assert canonical_form(d) == canonical_form(other) == canonical_form(other.swapped())


# -- enumeration -------------------------------------------------------------------


def _brute_force_iso(d1: Dessin, d2: Dessin) -> bool:
    e = d1.edges
    for cand in (d1, d1.swapped()):
        for relabel in itertools.permutations(range(e)):
            if cand.relabeled(relabel) == d2:
                return True
    return False


def _cycle_type_representatives(e: int):
    """One permutation per cycle type (every dessin is conjugate to one with such a black)."""

    def partitions(n, largest):
        if n == 0:
            yield ()
            return
        for k in range(min(n, largest), 0, -1):
            for rest in partitions(n - k, k):
                yield (k,) + rest

    for part in partitions(e, e):
        cycles, start = [], 0
        for k in part:
            cycles.append(list(range(start, start + k)))
            start += k
        yield Permutation.from_cycles(cycles, e)


def brute_force_tree_count(e: int, iso) -> int:
    classes: list = []
    for black in _cycle_type_representatives(e):
        for w in itertools.permutations(range(e)):
            d = Dessin(black, Permutation(w))
            if not d.is_transitive() or not is_plane_tree(d):
                continue
            if not any(c.valencies() in (d.valencies(), d.swapped().valencies()) and iso(c, d) for c in classes):
                classes.append(d)
    return len(classes)


@pytest.mark.parametrize("e", range(1, 6))
def test_enumeration_matches_brute_force(e):
    assert len(enumerate_plane_trees(e)) == brute_force_tree_count(e, _brute_force_iso)


@pytest.mark.slow
@pytest.mark.parametrize("e", [6, 7, 8])
def test_enumeration_matches_search_with_matcher(e):
    count = brute_force_tree_count(e, lambda a, b: dessins_isomorphic(a, b) is not None)
    assert len(enumerate_plane_trees(e)) == count


def test_enumeration_counts():
    # each count is also confirmed by the permutation searches above
    assert [len(enumerate_plane_trees(e)) for e in range(1, 9)] == [1, 1, 2, 3, 6, 14, 34, 95]


def test_enumeration_is_exhaustive_and_distinct():
    for e in range(1, 9):
        trees = enumerate_plane_trees(e)
        keys = {canonical_form(d) for d in trees}
        assert len(keys) == len(trees)
        assert all(is_plane_tree(d) for d in trees)


def test_enumeration_range():
    with pytest.raises(ValueError):
        enumerate_plane_trees(0)
    with pytest.raises(ValueError):
        enumerate_plane_trees(9)
