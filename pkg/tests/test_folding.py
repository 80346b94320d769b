import random

from gogroups.folding import FoldedSubgroup, free_inv, free_mul, free_reduce


def evaluate(images, word):
    out = ()
    for s in word:
        out = free_mul(out, images[abs(s) - 1] if s > 0 else free_inv(images[abs(s) - 1]))
    return out


def random_word(rng, rank, maxlen):
    w = []
    for _ in range(rng.randint(0, maxlen)):
        w.append(rng.choice([1, -1]) * rng.randint(1, rank))
    return free_reduce(tuple(w))


def test_preimage_lift_round_trips_300_random_subgroups():
    rng = random.Random(7)
    for _ in range(300):
        rank = rng.randint(1, 3)
        k = rng.randint(1, 4)
        images = [random_word(rng, rank, 5) for _ in range(k)]
        fold = FoldedSubgroup(rank, images)
        w = random_word(rng, k, 6)
        ambient = evaluate(images, w)
        assert fold.contains(ambient)
        pre = fold.preimage(ambient)
        assert pre is not None
        assert evaluate(images, pre) == ambient
        cog = fold.cogenerator()
        if cog is not None:
            assert not fold.contains(cog)


def test_rank_of_standard_subgroups():
    # [F2, F2] has infinite rank, but finite pieces behave predictably
    assert FoldedSubgroup(2, [(1,), (2,)]).rank() == 2
    assert FoldedSubgroup(2, [(1, 1), (2,), (1, 2)]).rank() == 2
    assert FoldedSubgroup(1, [(1, 1), (1, 1, 1)]).rank() == 1  # <a^2, a^3> = <a>
    assert FoldedSubgroup(3, []).rank() == 0


def test_identity_images_are_ignored():
    fold = FoldedSubgroup(2, [(), (1,)])
    assert fold.contains((1,))
    pre = fold.preimage((1, 1))
    assert evaluate([(), (1,)], pre) == (1, 1)


def test_whole_group_detection():
    assert FoldedSubgroup(2, [(1,), (2,)]).is_all()
    assert FoldedSubgroup(2, [(1,), (2,), (1, 2)]).is_all()
    assert not FoldedSubgroup(2, [(1,), (2, 2)]).is_all()
    assert FoldedSubgroup(0, []).is_all()
    # index-2 subgroup: every letter readable, yet proper
    sq = FoldedSubgroup(1, [(1, 1)])
    assert not sq.is_all()
    assert sq.cogenerator() == (1,)


def test_conjugated_generator_creates_tail():
    # a b a^-1 folds into a path with a hanging a-edge; membership and
    # preimages must still work through the tail
    images = [(1, 2, -1)]
    fold = FoldedSubgroup(2, images)
    assert fold.rank() == 1
    word = (1, 2, 2, -1)
    assert fold.contains(word)
    assert evaluate(images, fold.preimage(word)) == word
    assert not fold.contains((2,))
