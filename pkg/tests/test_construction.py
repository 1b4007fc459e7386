"""Dump construction: stage rules, invariants, stability, decoding."""

import pytest

from chordlab.construction import (
    StageState,
    build_decode_context,
    check_history_lemmas,
    check_no_chordless4,
    check_stage_lemmas,
    coding_change_law,
    decode_range,
    embed_via_coding,
    find_chordless_4path,
    history_has_no_chordless4,
    init,
    run,
    seeded_injective,
    stable_coding,
    stable_coding_prefix,
    step,
)
from chordlab.errors import CapacityError, InvalidInputError
from chordlab.graphs import check_traceable, pattern_A, pattern_Kkk, embedding_is_valid

from oracles import naive_stage_lemmas, seeded_permutation


def test_init():
    s = init()
    assert (s.stage, s.k, s.coding) == (0, 0, (0,))
    assert [list(b) for b in s.blocks()] == [[0]]
    assert check_traceable(s.graph())


def test_step_large_case():
    s1 = step(init(), 5)
    assert (s1.stage, s1.k, s1.coding) == (1, 1, (0, 1))
    assert s1.edges() == [(0, 1)]


def test_step_small_case_dumps():
    s2 = step(step(init(), 5), 0)
    assert (s2.stage, s2.k, s2.coding) == (2, 4, (2, 3, 4))
    assert sorted(s2.edges()) == [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]
    assert [list(b) for b in s2.blocks()] == [[0, 1, 2], [3], [4]]


def test_run_matches_stepping():
    f = seeded_injective(3, 15)
    h = run(f, 15)
    s = init()
    for i in range(15):
        s = step(s, f[i])
        hs = h.state(i + 1)
        assert hs.coding == s.coding
        assert hs.rows == s.rows
    assert h.final_k == s.k


def test_run_examples():
    assert run([5, 0], 2).final_k == 4
    assert run([], 0).final_k == 0
    # identity sequence: every stage is a dump with n == s, adding 2 vertices
    h = run(range(8), 8)
    assert h.final_k == 16
    for s in range(8):
        assert h.k_at(s + 1) == h.k_at(s) + 2


def test_run_rejects_bad_f():
    with pytest.raises(InvalidInputError):
        run([1, 1], 2)
    with pytest.raises(InvalidInputError):
        run([1], 2)


def test_every_stage_is_traceable():
    h = run(seeded_injective(9, 12), 12)
    for s in range(13):
        assert check_traceable(h.stage_graph(s))


def test_stage_lemmas_match_naive_oracle():
    for seed in range(10):
        h = run(seeded_injective(seed, 14), 14)
        for s in range(15):
            state = h.state(s)
            assert check_stage_lemmas(state).ok
            assert naive_stage_lemmas(state) == []


def test_history_checker_equals_per_stage_checker():
    for seed in range(10):
        h = run(seeded_injective(seed, 18), 18)
        hist = check_history_lemmas(h)
        assert hist.ok
        for s, report in enumerate(hist.stage_reports):
            solo = check_stage_lemmas(h.state(s))
            assert [c.passed for c in report.checks] == [c.passed for c in solo.checks]


def test_adversarial_state_fails_codeconnection():
    s2 = step(step(init(), 5), 0)
    rows = list(s2.rows)
    c0, c1 = s2.coding[0], s2.coding[1]
    rows[c0] &= ~(1 << c1)
    rows[c1] &= ~(1 << c0)
    bad = StageState(stage=s2.stage, k=s2.k, coding=s2.coding, rows=tuple(rows))
    report = check_stage_lemmas(bad)
    failed = {c.name for c in report.failures()}
    assert "codeconnection" in failed
    assert report.checks[1].witness == (c0, c1)


def test_stage2_components_cross_block_edges_only_from_coding():
    s2 = step(step(init(), 5), 0)
    blocks = [list(b) for b in s2.blocks()]
    coding = set(s2.coding)
    block_of = {x: j for j, b in enumerate(blocks) for x in b}
    cross = [(x, y) for x, y in s2.edges() if block_of[x] != block_of[y]]
    assert cross and all(x in coding for x, y in cross)


def test_no_chordless4_on_construction_states():
    for seed in range(6):
        h = run(seeded_injective(seed, 20), 20)
        assert history_has_no_chordless4(h)
        assert check_no_chordless4(h.state(20)) is None


def test_chordless4_found_on_plain_path():
    s = StageState(
        stage=0,
        k=3,
        coding=(3,),
        rows=(0b0010, 0b0101, 0b1010, 0b0100),
    )
    assert check_no_chordless4(s) == (0, 1, 2, 3)


def test_find_chordless_4path_direct():
    # 4-cycle has no chordless 4-path
    rows = [0b1010, 0b0101, 0b1010, 0b0101]
    assert find_chordless_4path(rows, 3) is None


def test_monotone_growth_and_restriction():
    h = run(seeded_injective(4, 12), 12)
    for s in range(12):
        assert h.k_at(s + 1) > h.k_at(s)
        prev = set(h.state(s).edges())
        cur = set(h.state(s + 1).edges())
        assert prev <= cur
        # restriction: no new edges among old vertices
        k = h.k_at(s)
        assert all(v > k or u > k for u, v in cur - prev)
        # coding vertices never decrease at a fixed index
        before, after = h.coding_at(s), h.coding_at(s + 1)
        assert all(after[i] >= before[i] for i in range(len(before)))


def test_size_growth_bound():
    for seed in range(5):
        T = 25
        h = run(seeded_injective(seed, T), T)
        assert h.final_k <= sum(s + 2 for s in range(T))


def test_degree_growth_only_through_coding_vertices():
    # A vertex gains edges at a stage only while it is a coding vertex, or as
    # the single wire to the fresh coding vertex of a dump that swallows its
    # block; once no remaining value can reach its block, its degree freezes.
    import bisect

    T = 30
    h = run(seeded_injective(12, T), T)
    degs = [
        [bin(h.state(s).rows[x]).count("1") if x <= h.k_at(s) else 0
         for x in range(h.final_k + 1)]
        for s in range(T + 1)
    ]
    f = h.consumed
    for s in range(T):
        coding_after = set(h.coding_at(s + 1))
        n = f[s]
        dumped = n <= s
        new_coding = h.coding_at(s + 1)[n] if dumped else None
        for x in range(h.k_at(s) + 1):
            grew = degs[s + 1][x] - degs[s][x]
            if grew == 0 or x in coding_after:
                continue
            # non-coding growth: exactly the one edge to the dump's coding vertex
            assert dumped and grew == 1
            assert h.state(s + 1).has_edge(x, new_coding)
    # freeze: a non-coding vertex whose block no remaining value can reach
    # gains nothing more (stable coding vertices keep acquiring edges instead)
    for x in range(h.final_k + 1):
        born = next(s for s in range(T + 1) if h.k_at(s) >= x)
        for s in range(born, T):
            if x in h.coding_at(s):
                continue
            idx = bisect.bisect_left(h.coding_at(s), x)
            if all(v > idx for v in f[s:]):
                assert degs[s][x] == degs[T][x]
                break


def test_coding_change_law():
    assert coding_change_law(run([5, 0], 2))
    assert coding_change_law(run([1, 0, 2], 3))
    for seed in range(20):
        assert coding_change_law(run(seeded_injective(seed, 40), 40))


def test_coding_change_law_rejects_tampered_history():
    h = run([5, 0, 7], 3)
    k, coding = h._snapshots[2]
    h._snapshots[2] = (k, (coding[0] + 1,) + coding[1:])
    assert not coding_change_law(h)


def test_stable_coding_examples():
    h = run([5, 0], 2)
    assert stable_coding(h, 0) == 2
    assert stable_coding(h, 3) is None
    # permutation input: every created index is stable after the last stage
    h2 = run(seeded_permutation(1, 12), 12)
    assert len(stable_coding_prefix(h2)) == 13


def test_stable_coding_respects_unconsumed_tail():
    # only 2 of 3 entries consumed; the pending 1 keeps indices >= 1 unstable
    h = run([5, 3, 1], 2)
    assert stable_coding(h, 0) == h.final_coding[0]
    assert stable_coding(h, 1) is None
    assert stable_coding(h, 2) is None
    assert stable_coding_prefix(h) == (h.final_coding[0],)


def test_embed_via_coding():
    h = run(seeded_permutation(7, 20), 20)
    emb = embed_via_coding(h, pattern_Kkk(3))
    host = h.final_graph()
    assert embedding_is_valid(host, emb)
    emb_a = embed_via_coding(h, pattern_A(3))
    assert embedding_is_valid(host, emb_a)
    with pytest.raises(CapacityError) as exc:
        embed_via_coding(run([5, 0], 2), pattern_Kkk(2))
    assert exc.value.shortfall == 1


def test_decode_range_examples():
    h = run([5, 0], 2)
    ctx = build_decode_context(h, pattern_A(1))
    assert ctx.gprime[0] >= 2
    assert decode_range(ctx, h.f, 0) is True
    h2 = run([5, 0, 7, 1], 4)
    ctx2 = build_decode_context(h2, pattern_A(2))
    assert decode_range(ctx2, h2.f, 0) is True
    assert decode_range(ctx2, h2.f, 1) is True
    with pytest.raises(InvalidInputError):
        decode_range(ctx2, h2.f, 3)  # outside the table


def test_decode_matches_range_membership():
    for seed in range(15):
        h = run(seeded_permutation(seed, 30), 30)
        ctx = build_decode_context(h, pattern_A(6))
        assert all(a <= b for a, b in zip(ctx.gprime, ctx.gprime[1:]))
        for k in range(6):
            assert decode_range(ctx, h.f, k) == (k in h.consumed)


def test_decode_false_for_missing_values():
    # f skips small values entirely: decode must say no
    f = [10, 11, 12, 13, 14, 15, 16, 17, 2, 3]
    h = run(f, 10)
    ctx = build_decode_context(h, pattern_A(2))
    assert decode_range(ctx, h.f, 0) is False
    assert decode_range(ctx, h.f, 1) is False


def test_stage_trace():
    h = run([5, 0], 2)
    t = h.stage_trace(2)
    assert t["stage"] == 2 and t["k"] == 4
    assert t["new_edges"] == [[0, 2], [1, 2], [2, 3], [2, 4], [3, 4]]


def test_seeded_injective_is_deterministic_permutation():
    a = seeded_injective(5, 50)
    assert a == seeded_injective(5, 50)
    assert sorted(a) == list(range(50))
