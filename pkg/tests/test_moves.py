import random

import pytest

from ribbonlab import (
    CancelDelete,
    CancelInsert,
    CrossSlide,
    Destab,
    Handle,
    MoveError,
    MoveScript,
    RemoveTrivialHandle,
    ReverseHandle,
    RibbonData,
    SignedLetter,
    Slide,
    Stab,
    TrivialHandle,
    apply_cancel_delete,
    apply_cancel_insert,
    apply_cross_slide,
    apply_destabilize,
    apply_move,
    apply_script,
    apply_slide,
    apply_stabilize,
    apply_trivial_handle,
    canonical_form,
    component_count,
    dihedral_quandle,
    enumerate_moves,
    genus,
    parse_script,
    remove_trivial_handle,
    reverse_handle,
    serialize_script,
    trivial_quandle,
)
from ribbonlab.cli import generate

from oracles import (
    all_moves_pool,
    brute_profile,
    graph_components,
    random_ribbon,
    stable_walk_pool,
)

UNKNOT = generate("unknot")
SPUN_TREFOIL = generate("spun-trefoil")
ORACLE_QUANDLES = (dihedral_quandle(3), dihedral_quandle(5), trivial_quandle(2))


def connected_random(rng, max_extra=2, max_len=4):
    b = rng.randint(1, 4)
    h = b - 1 + rng.randint(0, max_extra)
    seed = rng.randint(0, 10**6)
    return generate(f"random:{b}:{h}:{max_len}:{seed}")


# ---------------------------------------------------------------------------
# stabilize / destabilize


def test_stabilize_unknot():
    data = apply_stabilize(UNKNOT, 1)
    assert data == RibbonData(2, 2, (Handle(2, 1, ()),))


def test_stabilize_preserves_genus():
    rng = random.Random(40)
    checked = 0
    while checked < 500:
        data = random_ribbon(rng)
        if graph_components(data) != 1:
            continue
        target = rng.randint(1, data.base_count)
        assert genus(apply_stabilize(data, target)) == genus(data)
        checked += 1


def test_stabilize_preserves_colorings():
    rng = random.Random(41)
    q = dihedral_quandle(3)
    for _ in range(30):
        data = random_ribbon(rng, max_bases=3, max_handles=3, max_len=3)
        stabbed = apply_stabilize(data, rng.randint(1, data.base_count))
        assert brute_profile(stabbed, (q,)) == brute_profile(data, (q,))


def test_destabilize_undoes_stabilize():
    rng = random.Random(42)
    for _ in range(50):
        data = random_ribbon(rng)
        target = rng.randint(1, data.base_count)
        stabbed = apply_stabilize(data, target)
        assert apply_destabilize(stabbed, stabbed.base_count) == data


def test_destabilize_rejects_crossed_base():
    data = RibbonData(2, 2, (Handle(1, 2, ()), Handle(1, 1, ((2, 1),))))
    with pytest.raises(MoveError, match="base occurs in handle words"):
        apply_destabilize(data, 2)


def test_destabilize_rejects_degree_two():
    data = RibbonData(2, 2, (Handle(1, 2, ()), Handle(1, 2, ())))
    with pytest.raises(MoveError, match="degree != 1"):
        apply_destabilize(data, 2)


def test_destabilize_rejects_nonempty_word():
    data = RibbonData(2, 2, (Handle(1, 2, ((1, 1),)),))
    with pytest.raises(MoveError, match="word not empty"):
        apply_destabilize(data, 2)


# ---------------------------------------------------------------------------
# cancel insert / delete


def test_cancel_insert_into_empty_word():
    data = RibbonData(2, 1, (Handle(1, 1, ()),))
    out = apply_cancel_insert(data, 1, 0, 1, 1)
    assert out.handles[0].word == (SignedLetter(1, 1), SignedLetter(1, -1))


def test_cancel_delete_inverts_insert():
    rng = random.Random(43)
    for _ in range(100):
        data = random_ribbon(rng)
        if not data.handles:
            continue
        i = rng.randint(1, len(data.handles))
        pos = rng.randint(0, len(data.handles[i - 1].word))
        base = rng.randint(1, data.base_count)
        sign = rng.choice((1, -1))
        inserted = apply_cancel_insert(data, i, pos, base, sign)
        assert apply_cancel_delete(inserted, i, pos) == data


def test_cancel_delete_requires_cancelling_pair():
    data = RibbonData(2, 2, (Handle(1, 2, ((1, 1), (2, 1))),))
    with pytest.raises(MoveError, match="do not cancel"):
        apply_cancel_delete(data, 1, 0)


def test_cancel_moves_preserve_colorings():
    rng = random.Random(44)
    for _ in range(60):
        data = random_ribbon(rng, max_bases=3, max_handles=3, max_len=3)
        if not data.handles:
            continue
        before = brute_profile(data, ORACLE_QUANDLES)
        i = rng.randint(1, len(data.handles))
        out = apply_cancel_insert(
            data, i, rng.randint(0, len(data.handles[i - 1].word)),
            rng.randint(1, data.base_count), rng.choice((1, -1)),
        )
        assert brute_profile(out, ORACLE_QUANDLES) == before


# ---------------------------------------------------------------------------
# slides


def test_slide_empty_word():
    data = RibbonData(2, 2, (Handle(1, 1, ()), Handle(1, 2, ())))
    out = apply_slide(data, 1, "end", 2, "fwd")
    assert out.handles[0] == Handle(1, 2, ())


def test_slide_end_appends_traversed_word():
    data = RibbonData(2, 3, (Handle(2, 1, ()), Handle(1, 2, ((3, 1),))))
    out = apply_slide(data, 1, "end", 2, "fwd")
    assert out.handles[0] == Handle(2, 2, ((3, 1),))


def test_slide_start_prepends_reversed_flipped_word():
    data = RibbonData(2, 3, (Handle(1, 2, ((3, -1),)), Handle(1, 2, ((3, 1),))))
    out = apply_slide(data, 1, "start", 2, "fwd")
    assert out.handles[0] == Handle(2, 2, ((3, -1), (3, -1)))


def test_slide_rejects_self_and_wrong_base():
    data = RibbonData(2, 2, (Handle(1, 2, ()), Handle(2, 2, ())))
    with pytest.raises(MoveError, match="along itself"):
        apply_slide(data, 1, "end", 1, "fwd")
    with pytest.raises(MoveError, match="not on the traversal start"):
        apply_slide(data, 1, "start", 2, "fwd")


def test_slides_preserve_coloring_profile():
    # validates the slide word convention against the enumeration oracle
    rng = random.Random(45)
    applied = 0
    while applied < 200:
        data = connected_random(rng)
        pool = [m for m in stable_walk_pool(data, rng) if isinstance(m, Slide)]
        if not pool:
            continue
        move = rng.choice(pool)
        out = apply_move(data, move)
        assert brute_profile(out, ORACLE_QUANDLES) == brute_profile(data, ORACLE_QUANDLES)
        applied += 1


# ---------------------------------------------------------------------------
# cross slides


def test_cross_slide_empty_via():
    data = RibbonData(2, 2, (Handle(2, 2, ((1, 1),)), Handle(1, 2, ())))
    out = apply_cross_slide(data, 1, 0, 2, "fwd")
    assert out.handles[0].word == (SignedLetter(2, 1),)


def test_cross_slide_wraps_with_via_word():
    data = RibbonData(2, 3, (Handle(2, 2, ((1, -1),)), Handle(1, 2, ((3, 1),))))
    out = apply_cross_slide(data, 1, 0, 2, "fwd")
    assert out.handles[0].word == (
        SignedLetter(3, 1),
        SignedLetter(2, -1),
        SignedLetter(3, -1),
    )


def test_cross_slide_rejects_mismatch_and_self():
    data = RibbonData(2, 2, (Handle(2, 2, ((2, 1),)), Handle(1, 2, ())))
    with pytest.raises(MoveError, match="starts at 1"):
        apply_cross_slide(data, 1, 0, 2, "fwd")
    with pytest.raises(MoveError, match="through itself"):
        apply_cross_slide(data, 1, 0, 1, "fwd")


def test_cross_slides_preserve_coloring_profile():
    rng = random.Random(46)
    applied = 0
    while applied < 120:
        data = connected_random(rng)
        pool = [m for m in all_moves_pool(data, rng) if isinstance(m, CrossSlide)]
        if not pool:
            continue
        move = rng.choice(pool)
        out = apply_move(data, move)
        assert brute_profile(out, ORACLE_QUANDLES) == brute_profile(data, ORACLE_QUANDLES)
        applied += 1


def test_cross_slide_collapse_inverts_expansion():
    rng = random.Random(47)
    inverted = 0
    while inverted < 40:
        data = connected_random(rng)
        pool = [m for m in all_moves_pool(data, rng) if isinstance(m, CrossSlide)]
        if not pool:
            continue
        move = rng.choice(pool)
        expanded = apply_move(data, move)
        via = expanded.handles[move.via - 1]
        shift = len(via.word)
        back = "rev" if move.direction == "fwd" else "fwd"
        collapsed = apply_cross_slide(expanded, move.handle, move.position + shift, move.via, back)
        assert canonical_form(collapsed) == canonical_form(data)
        inverted += 1


# ---------------------------------------------------------------------------
# trivial handles and reversal


def test_trivial_handle_examples():
    out = apply_trivial_handle(UNKNOT, 1)
    assert out == RibbonData(2, 1, (Handle(1, 1, ()),))
    assert genus(out) == genus(UNKNOT) + 1
    assert remove_trivial_handle(out, 1) == UNKNOT


def test_trivial_handle_preserves_colorings():
    rng = random.Random(48)
    for _ in range(30):
        data = random_ribbon(rng, max_bases=3, max_handles=3, max_len=3)
        out = apply_trivial_handle(data, rng.randint(1, data.base_count))
        assert brute_profile(out, ORACLE_QUANDLES) == brute_profile(data, ORACLE_QUANDLES)


def test_remove_trivial_handle_rejects_nontrivial():
    with pytest.raises(MoveError, match="not a trivial handle"):
        remove_trivial_handle(SPUN_TREFOIL, 1)
    data = RibbonData(2, 1, (Handle(1, 1, ((1, 1), (1, -1))),))
    with pytest.raises(MoveError, match="not a trivial handle"):
        remove_trivial_handle(data, 1)


def test_reverse_handle_spun_trefoil():
    out = reverse_handle(SPUN_TREFOIL, 1)
    assert out.handles[0] == Handle(2, 1, ((1, 1), (2, 1)))
    assert reverse_handle(out, 1) == SPUN_TREFOIL
    assert canonical_form(out) == canonical_form(SPUN_TREFOIL)


# ---------------------------------------------------------------------------
# scripts


def test_script_stab_destab_roundtrip():
    script = MoveScript((Stab(1), Destab(2)))
    assert apply_script(UNKNOT, script) == UNKNOT


def test_empty_script_is_identity():
    rng = random.Random(49)
    for _ in range(10):
        data = random_ribbon(rng)
        assert apply_script(data, MoveScript()) == data


def test_recorded_random_walk_replays():
    rng = random.Random(50)
    data = generate("random:3:3:3:99")
    moves = []
    current = data
    for _ in range(50):
        pool = all_moves_pool(current, rng)
        if not pool:
            break
        move = rng.choice(pool)
        moves.append(move)
        current = apply_move(current, move)
    script = MoveScript(tuple(moves))
    assert apply_script(data, script) == current
    # the text form replays identically too
    assert apply_script(data, parse_script(serialize_script(script))) == current


def test_script_composition_associates():
    rng = random.Random(51)
    data = generate("random:3:3:2:5")
    moves = []
    current = data
    for _ in range(8):
        pool = stable_walk_pool(current, rng)
        move = rng.choice(pool)
        moves.append(move)
        current = apply_move(current, move)
    s1, s2 = MoveScript(tuple(moves[:4])), MoveScript(tuple(moves[4:]))
    whole = MoveScript(tuple(moves))
    assert apply_script(data, whole) == apply_script(apply_script(data, s1), s2)


def test_script_failure_reports_position():
    script = MoveScript((Stab(1), CancelDelete(1, 0)))
    with pytest.raises(MoveError, match="move 1:") as info:
        apply_script(UNKNOT, script)
    assert info.value.script_index == 1


def test_script_text_round_trip_all_moves():
    script = MoveScript(
        (
            Stab(2),
            Destab(1),
            CancelInsert(1, 0, 3, -1),
            CancelDelete(2, 4),
            Slide(1, "start", 2, "rev"),
            CrossSlide(2, 3, 1, "fwd"),
            TrivialHandle(1),
            RemoveTrivialHandle(2),
            ReverseHandle(1),
        )
    )
    assert parse_script(serialize_script(script)) == script


def test_weak_count():
    script = MoveScript((TrivialHandle(1), Stab(1), TrivialHandle(2), RemoveTrivialHandle(1)))
    assert script.weak_count == 1


# ---------------------------------------------------------------------------
# bookkeeping invariants across all move types


def test_handle_base_difference_accounting():
    rng = random.Random(52)
    steps = 0
    while steps < 300:
        data = connected_random(rng)
        for _ in range(6):
            pool = all_moves_pool(data, rng)
            if not pool:
                break
            move = rng.choice(pool)
            out = apply_move(data, move)
            delta = (len(out.handles) - out.base_count) - (len(data.handles) - data.base_count)
            if isinstance(move, TrivialHandle):
                assert delta == 1
            elif isinstance(move, RemoveTrivialHandle):
                assert delta == -1
            else:
                assert delta == 0
            assert component_count(out) == component_count(data)
            data = out
            steps += 1


def test_each_move_type_has_inverse_up_to_canonical_form():
    rng = random.Random(53)
    data = generate("random:3:3:3:17")
    canon = canonical_form(data)

    # stab / destab
    out = apply_stabilize(data, 2)
    assert canonical_form(apply_destabilize(out, out.base_count)) == canon
    # trivial handle pair
    out = apply_trivial_handle(data, 1)
    assert canonical_form(remove_trivial_handle(out, len(out.handles))) == canon
    # insert / delete pair
    out = apply_cancel_insert(data, 1, 0, 2, 1)
    assert canonical_form(apply_cancel_delete(out, 1, 0)) == canon
    # reversal is an involution
    out = reverse_handle(data, 2)
    assert canonical_form(reverse_handle(out, 2)) == canon
    # slide forward then backward along the same handle
    slides = [m for m in stable_walk_pool(data, rng) if isinstance(m, Slide)]
    move = slides[0]
    out = apply_move(data, move)
    back = "rev" if move.direction == "fwd" else "fwd"
    undone = apply_slide(out, move.handle, move.which, move.along, back)
    assert canonical_form(undone) == canon


# ---------------------------------------------------------------------------
# neighbor enumeration


def test_enumerate_unknot_budgets():
    zero = enumerate_moves(UNKNOT, 0)
    assert len(zero) == 1
    move, succ = zero[0]
    assert move == Stab(1)
    assert succ == RibbonData(2, 2, (Handle(1, 2, ()),))

    one = enumerate_moves(UNKNOT, 1)
    assert [m for m, _ in one] == [Stab(1), TrivialHandle(1)]


def test_enumerate_successors_are_canonical_and_unique():
    rng = random.Random(54)
    for _ in range(40):
        data = canonical_form(connected_random(rng))
        successors = enumerate_moves(data, 1)
        keys = [canonical_form(s) for _, s in successors]
        assert keys == [s for _, s in successors]
        assert len({id(k) for k in keys}) == len(keys)
        assert len(set(keys)) == len(keys)


def test_enumerate_successor_profiles_match_parent():
    rng = random.Random(55)
    quandles = (dihedral_quandle(3), trivial_quandle(2))
    checked_states = 0
    while checked_states < 200:
        data = canonical_form(connected_random(rng, max_extra=1, max_len=3))
        if data.base_count > 3:
            continue
        parent = brute_profile(data, quandles)
        for _, succ in enumerate_moves(data, 1):
            if succ.base_count > 3:
                continue
            assert brute_profile(succ, quandles) == parent
        checked_states += 1
