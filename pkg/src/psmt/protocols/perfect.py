"""Perfectly reliable and perfectly private transmission protocols.

These protocols never fail against an adversary within the tolerated
corruption bound: the receiver always outputs exactly the sent message.
All of them combine bounded-distance decoding of fresh MDS sharings with
feedback-channel echoes; when the sender can pin a fault down to one
forward/backward channel pair, both ends drop the pair and fall back to
a protocol tolerating one corruption fewer.
"""

from __future__ import annotations

from itertools import permutations

from ..errors import PreconditionError
from ..field import FieldElement
from ..netsim import AdversarySpec, Outcome, PathNetwork, majority_of
from ..randomness import Randomness
from ..sharing import CLEAN, SharingParams, ReceivedWord, correct_errors, \
    detect_errors, reconstruct, share
from .common import as_field, as_field_vec


def _rngs(rng_a, rng_b, seed):
    if rng_a is None:
        rng_a = Randomness((seed, "A"))
    if rng_b is None:
        rng_b = Randomness((seed, "B"))
    return rng_a, rng_b


def _share_on(net, fwd, secret, k, rng_a):
    """One round: fresh (k+1)-out-of-len(fwd) shares, one per channel."""
    params = SharingParams(len(fwd), k, secret.spec)
    shares = share(secret, params, rng_a).shares
    for pos, ch in enumerate(fwd):
        net.send_ab(ch, shares[pos])
    return shares, params


def _recv_word(spec, delivered, fwd, k) -> ReceivedWord:
    params = SharingParams(len(fwd), k, spec)
    entries = tuple(as_field(spec, delivered.get(("AB", ch))) for ch in fwd)
    return ReceivedWord(entries, params)


def _broadcast(net, fwd, value, extras=None) -> None:
    """Public value on every forward channel, optionally with per-channel
    private extras bundled alongside."""
    for ch in fwd:
        net.send_ab(ch, (value, extras.get(ch) if extras else None))
    net.view.announce(net.round, "AB", value)


def _recv_bcast(delivered, fwd, tie_rng):
    values = [delivered.get(("AB", ch)) for ch in fwd]
    firsts = [v[0] if isinstance(v, tuple) and len(v) == 2 else None
              for v in values]
    winner = majority_of(firsts, tie_rng)
    extras = {ch: v[1] for ch, v in zip(fwd, values)
              if isinstance(v, tuple) and len(v) == 2 and v[0] == winner}
    return winner, extras


# ---------------------------------------------------------------------------
# forward-only base case: 3k+1 channels, single round


def _oneway_perfect(message, k, net, fwd, rng_a, rng_b):
    n = 3 * k + 1
    fwd = fwd[:n]
    if len(fwd) < n:
        raise PreconditionError(f"need {n} forward channels, have {len(fwd)}")
    spec = message.spec
    _share_on(net, fwd, message, k, rng_a)
    delivered = net.end_round()
    word = _recv_word(spec, delivered, fwd, k)
    decoded = correct_errors(word, k)
    return decoded.secret if decoded else None


# ---------------------------------------------------------------------------
# single feedback channel, 3k forward channels, any k >= 1


def _threek_one_feedback(message, k, net, fwd, q, rng_a, rng_b):
    n = 3 * k
    fwd = fwd[:n]
    if len(fwd) < n:
        raise PreconditionError(f"need {n} forward channels, have {len(fwd)}")
    spec = message.spec
    shares, _ = _share_on(net, fwd, message, k, rng_a)
    delivered = net.end_round()
    word = _recv_word(spec, delivered, fwd, k)
    decoded = correct_errors(word, k - 1)
    b_result = None
    if decoded is not None:
        b_result = decoded.secret
        net.send_ba(q, "stop")
    else:
        net.send_ba(q, ("vec", word.entries))
    delivered = net.end_round()
    fb = delivered.get(("BA", q))
    if isinstance(fb, tuple) and len(fb) == 2 and fb[0] == "vec":
        echoed = as_field_vec(spec, fb[1], n)
        bad = tuple(i for i in range(n) if echoed[i] != shares[i])
        _broadcast(net, fwd, ("drop", bad))
    else:
        _broadcast(net, fwd, ("done",))
    delivered = net.end_round()
    if b_result is not None:
        return b_result
    verdict, _ = _recv_bcast(delivered, fwd, rng_b)
    if not (isinstance(verdict, tuple) and verdict and verdict[0] == "drop"):
        return None
    bad = set(verdict[1])
    keep = [(i, word.entries[i]) for i in range(n) if i not in bad]
    params = SharingParams(n, k, spec)
    entries = [None] * n
    for i, e in keep:
        entries[i] = e
    return reconstruct(ReceivedWord(tuple(entries), params))


# ---------------------------------------------------------------------------
# 3k-1 forward channels plus one feedback channel, k >= 2


def _u1_protocol(message, k, net, fwd, q, rng_a, rng_b):
    n = 3 * k - 1
    fwd = fwd[:n]
    if len(fwd) < n:
        raise PreconditionError(f"need {n} forward channels, have {len(fwd)}")
    spec = message.spec
    guesses = []
    last_word = None
    last_shares = None
    for big_i in range(n):
        shares, _ = _share_on(net, fwd, message, k, rng_a)
        delivered = net.end_round()
        word = _recv_word(spec, delivered, fwd, k)
        last_word, last_shares = word, shares
        decoded = correct_errors(word, k - 1)
        guesses.append(decoded.secret if decoded else None)
        net.send_ba(q, word.entries[big_i])
        delivered = net.end_round()
        echo = as_field(spec, delivered.get(("BA", q)))
        if echo == shares[big_i]:
            _broadcast(net, fwd, ("ok", big_i))
            delivered = net.end_round()
            _recv_bcast(delivered, fwd, rng_b)
            continue
        # the sender pins the fault to this forward channel or the
        # feedback channel; reshare with threshold k over the others
        others = [ch for pos, ch in enumerate(fwd) if pos != big_i]
        params = SharingParams(n - 1, k - 1, spec)
        reshares = share(message, params, rng_a).shares
        extras = {ch: reshares[pos] for pos, ch in enumerate(others)}
        _broadcast(net, fwd, ("faulty", big_i), extras)
        delivered = net.end_round()
        verdict, got = _recv_bcast(delivered, fwd, rng_b)
        entries = tuple(as_field(spec, got.get(ch)) for ch in others)
        decoded = correct_errors(ReceivedWord(entries, params), k - 1)
        return decoded.secret if decoded else None
    # every echo matched: the receiver decides from its round guesses
    if guesses[0] is not None and all(g == guesses[0] for g in guesses):
        net.send_ba(q, "stop")
        net.end_round()
        _broadcast(net, fwd, ("done",))
        net.end_round()
        return guesses[0]
    net.send_ba(q, ("vec", last_word.entries))
    delivered = net.end_round()
    fb = delivered.get(("BA", q))
    if isinstance(fb, tuple) and len(fb) == 2 and fb[0] == "vec":
        echoed = as_field_vec(spec, fb[1], n)
        bad = tuple(i for i in range(n) if echoed[i] != last_shares[i])
        _broadcast(net, fwd, ("drop", bad))
    else:
        _broadcast(net, fwd, ("done",))
    delivered = net.end_round()
    verdict, _ = _recv_bcast(delivered, fwd, rng_b)
    if not (isinstance(verdict, tuple) and verdict and verdict[0] == "drop"):
        return None
    bad = set(verdict[1])
    params = SharingParams(n, k, spec)
    entries = tuple(e if i not in bad else None
                    for i, e in enumerate(last_word.entries))
    return reconstruct(ReceivedWord(entries, params))


# ---------------------------------------------------------------------------
# shared pad phase: two additive pads, error detection, fault isolation


def _pad_phase(message, k, net, fwd, back, rng_a, rng_b, recurse, b_prior):
    spec = message.spec
    n = len(fwd)
    r1_a = spec.sample(rng_a)
    stage_vals_a = (r1_a, message - r1_a)
    recovered_b = []
    for stage in range(2):
        shares, params = _share_on(net, fwd, stage_vals_a[stage], k, rng_a)
        delivered = net.end_round()
        word = _recv_word(spec, delivered, fwd, k)
        clean = detect_errors(word) == CLEAN
        if clean:
            recovered_b.append(reconstruct(word))
            for q in back:
                net.send_ba(q, "OK")
        else:
            for q in back:
                net.send_ba(q, ("vec", word.entries))
        delivered = net.end_round()
        fault = None
        for pos_q, q in enumerate(back):
            fb = delivered.get(("BA", q))
            if isinstance(fb, tuple) and len(fb) == 2 and fb[0] == "vec":
                echoed = as_field_vec(spec, fb[1], n)
                for pos_p in range(n):
                    if echoed[pos_p] != shares[pos_p]:
                        fault = (pos_p, pos_q)
                        break
            if fault:
                break
        if fault is not None:
            _broadcast(net, fwd, ("faulty", fault[0], fault[1]))
            delivered = net.end_round()
            _recv_bcast(delivered, fwd, rng_b)
            sub_fwd = [ch for pos, ch in enumerate(fwd) if pos != fault[0]]
            sub_back = [q for pos, q in enumerate(back) if pos != fault[1]]
            result = recurse(message, k - 1, net, sub_fwd, sub_back,
                             rng_a, rng_b)
            return b_prior if b_prior is not None else result
        _broadcast(net, fwd, ("continue",))
        delivered = net.end_round()
        _recv_bcast(delivered, fwd, rng_b)
        if not clean:
            # the receiver's plea for help was suppressed; only possible
            # outside the tolerated corruption bound
            return b_prior
    if b_prior is not None:
        return b_prior
    return recovered_b[0] + recovered_b[1]


# ---------------------------------------------------------------------------
# general protocol: max(3k+1-2u, 2k+1) forward, u backward, exponential


def _general_protocol(message, k, net, fwd, back, rng_a, rng_b):
    u = len(back)
    if u == 1 or k == 2:
        return _u1_protocol(message, k, net, fwd, back[0], rng_a, rng_b)
    n = max(3 * k + 1 - 2 * u, 2 * k + 1)
    fwd = fwd[:n]
    if len(fwd) < n:
        raise PreconditionError(f"need {n} forward channels, have {len(fwd)}")
    spec = message.spec
    guesses = []
    for h in permutations(range(n), u):
        shares, _ = _share_on(net, fwd, message, k, rng_a)
        delivered = net.end_round()
        word = _recv_word(spec, delivered, fwd, k)
        decoded = correct_errors(word, k - u)
        guesses.append(decoded.secret if decoded else None)
        for i, q in enumerate(back):
            net.send_ba(q, word.entries[h[i]])
        delivered = net.end_round()
        mismatch = None
        for i, q in enumerate(back):
            echo = as_field(spec, delivered.get(("BA", q)))
            if echo != shares[h[i]]:
                mismatch = (h[i], i)
                break
        if mismatch is None:
            _broadcast(net, fwd, ("ok",) + h)
            delivered = net.end_round()
            _recv_bcast(delivered, fwd, rng_b)
            continue
        _broadcast(net, fwd, ("faulty", mismatch[0], mismatch[1]))
        delivered = net.end_round()
        _recv_bcast(delivered, fwd, rng_b)
        sub_fwd = [ch for pos, ch in enumerate(fwd) if pos != mismatch[0]]
        sub_back = [q for pos, q in enumerate(back) if pos != mismatch[1]]
        return _general_protocol(message, k - 1, net, sub_fwd, sub_back,
                                 rng_a, rng_b)
    b_prior = None
    if guesses[0] is not None and all(g == guesses[0] for g in guesses):
        b_prior = guesses[0]
        for q in back:
            net.send_ba(q, "stop")
    else:
        for q in back:
            net.send_ba(q, "go")
    delivered = net.end_round()
    if all(delivered.get(("BA", q)) == "stop" for q in back):
        _broadcast(net, fwd, ("done",))
        net.end_round()
        return b_prior
    _broadcast(net, fwd, ("pad",))
    delivered = net.end_round()
    _recv_bcast(delivered, fwd, rng_b)
    return _pad_phase(message, k, net, fwd, back, rng_a, rng_b,
                      _general_protocol, b_prior)


# ---------------------------------------------------------------------------
# efficient protocol: 3k+1-u forward, u backward, linear in u


def _efficient_protocol(message, k, net, fwd, back, rng_a, rng_b):
    u = len(back)
    if u == 0:
        return _oneway_perfect(message, k, net, fwd, rng_a, rng_b)
    n = 3 * k + 1 - u
    fwd = fwd[:n]
    if len(fwd) < n:
        raise PreconditionError(f"need {n} forward channels, have {len(fwd)}")
    spec = message.spec
    _, params = None, None
    shares, params = _share_on(net, fwd, message, k, rng_a)
    delivered = net.end_round()
    word = _recv_word(spec, delivered, fwd, k)
    decoded = correct_errors(word, k - u)
    b_prior = None
    if decoded is not None:
        b_prior = decoded.secret
        for q in back:
            net.send_ba(q, "stop")
    else:
        for q in back:
            net.send_ba(q, "go")
    delivered = net.end_round()
    if all(delivered.get(("BA", q)) == "stop" for q in back):
        _broadcast(net, fwd, ("done",))
        net.end_round()
        return b_prior
    _broadcast(net, fwd, ("pad",))
    delivered = net.end_round()
    _recv_bcast(delivered, fwd, rng_b)
    return _pad_phase(message, k, net, fwd, back, rng_a, rng_b,
                      _efficient_protocol, b_prior)


# ---------------------------------------------------------------------------
# public entry points


def _finish(message, net, result) -> Outcome:
    if result is None:
        return Outcome(None, False, True, net.round, net.view, net.transcript,
                       "receiver could not determine the message")
    return Outcome(result, result == message, False, net.round, net.view,
                   net.transcript)


def perfect_oneway(message: FieldElement, k: int,
                   adversary: AdversarySpec | None = None,
                   rng_a=None, rng_b=None, seed=0) -> Outcome:
    """3k+1 forward channels, no feedback, single round."""
    rng_a, rng_b = _rngs(rng_a, rng_b, seed)
    net = PathNetwork(3 * k + 1, 0, adversary)
    result = _oneway_perfect(message, k, net, list(range(3 * k + 1)),
                             rng_a, rng_b)
    return _finish(message, net, result)


def perfect_3k(message: FieldElement, k: int,
               adversary: AdversarySpec | None = None,
               rng_a=None, rng_b=None, seed=0) -> Outcome:
    """3k forward channels plus one feedback channel, any k >= 1."""
    rng_a, rng_b = _rngs(rng_a, rng_b, seed)
    net = PathNetwork(3 * k, 1, adversary)
    result = _threek_one_feedback(message, k, net, list(range(3 * k)), 0,
                                  rng_a, rng_b)
    return _finish(message, net, result)


def perfect_u1(message: FieldElement, k: int,
               adversary: AdversarySpec | None = None,
               rng_a=None, rng_b=None, seed=0) -> Outcome:
    """3k-1 forward channels plus one feedback channel, k >= 2."""
    if k < 2:
        raise PreconditionError("this construction needs k >= 2")
    rng_a, rng_b = _rngs(rng_a, rng_b, seed)
    net = PathNetwork(3 * k - 1, 1, adversary)
    result = _u1_protocol(message, k, net, list(range(3 * k - 1)), 0,
                          rng_a, rng_b)
    return _finish(message, net, result)


def perfect_general(message: FieldElement, k: int, u: int,
                    adversary: AdversarySpec | None = None,
                    rng_a=None, rng_b=None, seed=0) -> Outcome:
    """max(3k+1-2u, 2k+1) forward and u backward channels, k >= 2."""
    if k < 2 or u < 1:
        raise PreconditionError("this construction needs k >= 2 and u >= 1")
    n = max(3 * k + 1 - 2 * u, 2 * k + 1)
    rng_a, rng_b = _rngs(rng_a, rng_b, seed)
    net = PathNetwork(n, u, adversary)
    result = _general_protocol(message, k, net, list(range(n)),
                               list(range(u)), rng_a, rng_b)
    return _finish(message, net, result)


def perfect_efficient(message: FieldElement, k: int, u: int,
                      adversary: AdversarySpec | None = None,
                      rng_a=None, rng_b=None, seed=0) -> Outcome:
    """3k+1-u forward and u backward channels, rounds linear in u."""
    if not 0 <= u <= k:
        raise PreconditionError("need 0 <= u <= k")
    n = 3 * k + 1 - u
    rng_a, rng_b = _rngs(rng_a, rng_b, seed)
    net = PathNetwork(n, u, adversary)
    result = _efficient_protocol(message, k, net, list(range(n)),
                                 list(range(u)), rng_a, rng_b)
    return _finish(message, net, result)


# ---------------------------------------------------------------------------
# shared-feedback protocol: 3k+1-u forward channels of which 3k+1-2u are
# disjoint from the u backward channels


def _shared_sub(message, k, u, net, fwd_all, q, rng_a, rng_b):
    """One feedback channel's sub-protocol.

    Returns (recovered_message_or_None, channel_written_off).  The
    receiver keeps tracking the sender's reliable broadcasts after
    writing the channel off, so both ends stay in lock-step.
    """
    spec = message.spec
    ab_a = list(fwd_all)
    ab_b = list(fwd_all)
    j_cnt = 0
    b_active = True
    b_asked_r0 = False
    b_r0 = None

    def bcast(value):
        _broadcast(net, fwd_all, value)
        delivered = net.end_round()
        verdict, _ = _recv_bcast(delivered, fwd_all, rng_b)
        return verdict

    for _ in range(u + 1):
        r0_a = spec.sample(rng_a)
        sub_done = False
        b_result = None
        for stage in range(2):  # stage 0 carries a pad, stage 1 the rest
            n_j = len(ab_a)
            if n_j < k + 1:
                bcast(("bail",))
                return None, True
            value_a = r0_a if stage == 0 else message - r0_a
            params = SharingParams(n_j, k, spec)
            shares = share(value_a, params, rng_a).shares
            for pos, ch in enumerate(ab_a):
                net.send_ab(ch, shares[pos])
            delivered = net.end_round()

            b_sent = None
            b_entries = None
            b_val = None
            if b_active:
                b_entries = tuple(as_field(spec, delivered.get(("AB", ch)))
                                  for ch in ab_b)
                word = ReceivedWord(b_entries,
                                    SharingParams(len(ab_b), k, spec))
                if stage == 0 and j_cnt == 0:
                    decoded = correct_errors(word, k - u)
                    b_val = decoded.secret if decoded else None
                elif detect_errors(word) == CLEAN:
                    b_val = reconstruct(word)
                if b_val is not None:
                    b_sent = "ok"
                elif stage == 1 and b_asked_r0:
                    b_sent = "continue"
                else:
                    b_sent = ("vec", b_entries)
                    if stage == 0:
                        b_asked_r0 = True
                net.send_ba(q, b_sent)
            delivered = net.end_round()

            # the sender turns the raw feedback into a reliable verdict
            fb = delivered.get(("BA", q))
            if fb == "ok":
                verdict = bcast(("ok",))
                if stage == 1:
                    sub_done = True
            elif stage == 1 and fb == "continue":
                verdict = bcast(("continue",))
            else:
                vec = fb[1] if isinstance(fb, tuple) and len(fb) == 2 else None
                echoed = as_field_vec(spec, vec, n_j)
                bad = tuple(ch for pos, ch in enumerate(ab_a)
                            if echoed[pos] != shares[pos])
                ab_a = [ch for ch in ab_a if ch not in bad]
                verdict = bcast(("help", echoed, bad))
                if stage == 1:
                    sub_done = True

            if not b_active:
                continue
            # receiver-side handling of the verdict
            if verdict == ("ok",):
                if b_sent == "ok":
                    if stage == 0:
                        b_r0 = b_val
                    else:
                        b_result = b_r0 + b_val
                else:
                    b_active = False
            elif verdict == ("continue",):
                if b_sent == "continue":
                    j_cnt += 1
                else:
                    b_active = False
            elif isinstance(verdict, tuple) and len(verdict) == 3 \
                    and verdict[0] == "help":
                _, echoed_v, bad_v = verdict
                if (isinstance(b_sent, tuple) and b_sent[0] == "vec"
                        and tuple(echoed_v) == b_entries):
                    keep = [(pos, e) for pos, (ch, e) in
                            enumerate(zip(ab_b, b_entries))
                            if ch not in set(bad_v)]
                    ab_b = [ch for ch in ab_b if ch not in set(bad_v)]
                    if len(keep) < k + 1:
                        b_active = False
                    else:
                        entries = [None] * len(b_entries)
                        for pos, e in keep:
                            entries[pos] = e
                        word = ReceivedWord(
                            tuple(entries),
                            SharingParams(len(b_entries), k, spec))
                        val = reconstruct(word)
                        if stage == 0:
                            b_r0 = val
                        else:
                            b_result = b_r0 + val
                else:
                    b_active = False
            else:
                b_active = False
        if sub_done:
            return (b_result, False) if b_result is not None else (None, True)
    bcast(("bail",))
    return None, True


def _shared_protocol(message, k, u, net, rng_a, rng_b):
    spec = message.spec
    n = 3 * k + 1 - u
    disjoint = list(range(3 * k + 1 - 2 * u))
    fwd_all = list(range(n))
    result = None
    bad_count = 0
    for q in range(u):
        got, bad = _shared_sub(message, k, u, net, fwd_all, q, rng_a, rng_b)
        if got is not None and result is None:
            result = got
        if bad:
            bad_count += 1
    # final phase: message shares over the channels disjoint from feedback
    params = SharingParams(len(disjoint), k, spec)
    shares = share(message, params, rng_a).shares
    for pos, ch in enumerate(disjoint):
        net.send_ab(ch, shares[pos])
    delivered = net.end_round()
    if result is None and bad_count == u:
        entries = tuple(as_field(spec, delivered.get(("AB", ch)))
                        for ch in disjoint)
        decoded = correct_errors(ReceivedWord(entries, params), k - u)
        result = decoded.secret if decoded else None
    return result


def perfect_shared_feedback(message: FieldElement, k: int, u: int,
                            adversary: AdversarySpec | None = None,
                            rng_a=None, rng_b=None, seed=0) -> Outcome:
    """3k+1-u forward channels, u feedback channels that may intersect
    the last u forward paths.

    A feedback channel sharing nodes with a forward path means one
    corruption can take out both; callers model that by corrupting the
    channel pair ("AB", 3k+1-2u+j) together with ("BA", j).
    """
    if not 1 <= u <= k:
        raise PreconditionError("need 1 <= u <= k")
    rng_a, rng_b = _rngs(rng_a, rng_b, seed)
    net = PathNetwork(3 * k + 1 - u, u, adversary)
    result = _shared_protocol(message, k, u, net, rng_a, rng_b)
    return _finish(message, net, result)
