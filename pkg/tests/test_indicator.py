import pytest

from conftest import all_families, random_family
from extset.family import Family, sets_up_to
from extset.indicator import Kernel, from_indicator, iter_members, submasks, to_indicator
from extset.nip import compress_step, compress_to_terminal, max_nip
from extset.predicates import is_cross_t_intersecting
from extset.separated import WeightTable
from extset.shifting import all_pairs, is_shifted, shift_once, shift_pair_to_fixpoint

UNIT = WeightTable((1, 1, 1, 1, 1))
DECR = WeightTable((5, 3, 2, 1, 0))


def _fam(n, ind):
    return from_indicator(n, ind)


def test_roundtrip():
    f = Family.of(4, [(), (1, 3), (2, 3, 4)])
    assert from_indicator(4, to_indicator(f)) == f
    assert sorted(iter_members(0b1011)) == [0, 1, 3]
    assert sorted(submasks(0b101)) == [0, 1, 4, 5]


def test_kernel_bounds():
    with pytest.raises(ValueError):
        Kernel(7)


@pytest.mark.parametrize("n", [2, 3])
def test_shift_matches_family_exhaustive(n):
    kern = Kernel(n)
    pairs = all_pairs(n)
    for f in all_families(n):
        ind = to_indicator(f)
        for op, p in zip(kern.ops, pairs):
            assert _fam(n, kern.shift(ind, op)) == shift_once(f, p)
        assert kern.is_shifted(ind) == is_shifted(f, pairs)


@pytest.mark.parametrize("t", [1, 2])
def test_cross_pairs_exhaustive_n3(t):
    kern = Kernel(3, t)
    pairs = list(kern.iter_cross_pairs())
    assert len(pairs) == {1: 1920, 2: 552}[t]
    for f, g in pairs:
        ff, gg = _fam(3, f), _fam(3, g)
        assert is_cross_t_intersecting(ff, gg, t)
        fi, gi, log = kern.fixpoint(f, g)
        res = shift_pair_to_fixpoint(ff, gg)
        assert (_fam(3, fi), _fam(3, gi)) == (res.f, res.g)
        assert log == [(p.i, p.j) for p in res.log]
        if f and g:
            assert kern.max_nip(f, g) == max_nip(ff, gg, t).max_nip


def test_cross_pair_count_by_brute_force():
    kern = Kernel(2, 1)
    got = set(kern.iter_cross_pairs())
    want = {
        (f, g)
        for f in range(16)
        for g in range(16)
        if is_cross_t_intersecting(_fam(2, f), _fam(2, g), 1)
    }
    assert got == want


@pytest.mark.parametrize("t", [1, 2])
def test_kernel_vs_family_random_n4(rng, t):
    kern = Kernel(4, t)
    w = [DECR.values[s] for s in range(5)]
    done = 0
    while done < 1000:
        f = random_family(rng, 4, 0.3)
        if not f.members:
            continue
        g = Family.of(4, iter_members(kern.partner(to_indicator(f))))
        g = g.filter(lambda m: rng.random() < 0.6)
        if not g.members:
            continue
        done += 1
        fi, gi = to_indicator(f), to_indicator(g)
        assert kern.cross_ok(fi, gi)
        rep = max_nip(f, g, t)
        assert kern.max_nip(fi, gi) == rep.max_nip
        fw, gw = kern.witnesses(fi, gi, rep.max_nip)
        assert (_fam(4, fw), _fam(4, gw)) == (rep.f_witnesses, rep.g_witnesses)
        step = kern.compress(fi, gi, w, w)
        if step is not None:
            ref = compress_step(f, g, t, DECR, DECR)
            assert (_fam(4, step[0]), _fam(4, step[1]), step[2], step[3]) == (ref.f, ref.g, ref.branch, ref.a)
        ft, gt, label, a, _ = kern.to_terminal(fi, gi, w, w)
        term = compress_to_terminal(f, g, t, DECR, DECR)
        assert (_fam(4, ft), _fam(4, gt), label, a) == (term.f, term.g, term.label, term.a)


def test_weight_and_drop():
    kern = Kernel(3)
    f = Family.of(3, [(1,), (1, 2), (1, 2, 3)])
    assert kern.weight(to_indicator(f), [9, 5, 3, 1]) == 9
    g = Family.of(3, [(2,), (2, 3)])
    assert _fam(3, kern.drop_element(to_indicator(g), 2)) == Family.of(3, [(), (3,)])


def test_partner_is_best_partner():
    from extset.search import best_partner

    kern = Kernel(3, 1)
    uni = sets_up_to(3, 2)
    within = to_indicator(uni)
    for f in range(1, 256):
        ff = _fam(3, f)
        assert _fam(3, kern.partner(f, within)) == best_partner(ff, uni, 1)
