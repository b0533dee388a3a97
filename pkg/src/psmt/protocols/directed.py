"""Probabilistically reliable, perfectly private transmission protocols.

All protocols here run over atomic forward/backward channels and deliver
the sender's message with probability 1 - O(poly(k)/|F|) while keeping
the adversary's view independent of the message.
"""

from __future__ import annotations

import itertools

from ..authcodes import LinearKey, QuadKey, auth, auth_linear, auth_quad, verify
from ..errors import PreconditionError
from ..field import ExtElement, FieldElement, encode_tuple
from ..netsim import AdversarySpec, Outcome, PathNetwork
from ..randomness import Randomness
from ..sharing import reconstruct
from .common import (
    as_field,
    as_field_vec,
    as_linear_key,
    as_quad_key,
    received_word,
    share_vector,
    subset_word,
)


def _rngs(rng_a, rng_b, seed):
    if rng_a is None:
        rng_a = Randomness((seed, "A"))
    if rng_b is None:
        rng_b = Randomness((seed, "B"))
    return rng_a, rng_b


def oneway(message: FieldElement, k: int, adversary: AdversarySpec | None = None,
           rng_a=None, rng_b=None, seed=0, n_forward: int | None = None) -> Outcome:
    """Forward-only transmission over 2k+1 channels.

    The message is shared (k+1)-out-of-n once; round i delivers share i
    together with n authentication tags, while every channel j carries
    the matching key.  A share is accepted with at least k+1 valid tags.
    """
    spec = message.spec
    rng_a, rng_b = _rngs(rng_a, rng_b, seed)
    n = n_forward if n_forward is not None else 2 * k + 1
    if n < 2 * k + 1:
        raise PreconditionError(f"need {2 * k + 1} forward channels, have {n}")
    net = PathNetwork(n, 0, adversary)
    shares = share_vector(message, n, k, rng_a)
    valid: dict[int, FieldElement] = {}
    for i in range(n):
        keys = [LinearKey.random(spec, rng_a) for _ in range(n)]
        tags = tuple(auth_linear(shares[i], keys[j]) for j in range(n))
        for j in range(n):
            carried = (shares[i], tags) if j == i else None
            net.send_ab(j, ((keys[j].a, keys[j].b), carried))
        delivered = net.end_round()
        # receiver side for round i
        got = [delivered.get(("AB", j)) for j in range(n)]
        rkeys = [as_linear_key(spec, g[0] if isinstance(g, tuple) and g else None)
                 for g in got]
        carried = got[i][1] if isinstance(got[i], tuple) and len(got[i]) > 1 else None
        s_i = as_field(spec, carried[0] if isinstance(carried, tuple) and carried else None)
        rtags = as_field_vec(spec, carried[1] if isinstance(carried, tuple)
                             and len(carried) > 1 else None, n)
        hits = sum(1 for j in range(n) if verify(s_i, rtags[j], rkeys[j]))
        if hits >= k + 1:
            valid[i] = s_i
    if len(valid) <= k:
        return Outcome(None, False, True, net.round, net.view, net.transcript,
                       "fewer than k+1 valid shares")
    word = subset_word(spec, sorted(valid.items()), n, k)
    recovered = reconstruct(word)
    return Outcome(recovered, recovered == message, False, net.round,
                   net.view, net.transcript)


def single_feedback(message: FieldElement, adversary: AdversarySpec | None = None,
                    rng_a=None, rng_b=None, seed=0) -> Outcome:
    """Two forward channels plus one feedback channel, one corruption.

    The message is split into two additive shares, each authenticated
    under the other channel's key.  On a verification failure the
    receiver echoes everything back with a fresh key, letting the sender
    identify the clean channel and retransmit over it.
    """
    spec = message.spec
    rng_a, rng_b = _rngs(rng_a, rng_b, seed)
    net = PathNetwork(2, 1, adversary)

    s = [spec.sample(rng_a), None]
    s[1] = message - s[0]
    keys = [LinearKey.random(spec, rng_a) for _ in range(2)]
    sent_triples = []
    for i in range(2):
        triple = (s[i], (keys[i].a, keys[i].b), auth_linear(s[i], keys[1 - i]))
        sent_triples.append(triple)
        net.send_ab(i, triple)
    delivered = net.end_round()

    # receiver checks both cross-authenticated triples
    got = []
    for i in range(2):
        g = delivered.get(("AB", i))
        si = as_field(spec, g[0] if isinstance(g, tuple) and g else None)
        ki = as_linear_key(spec, g[1] if isinstance(g, tuple) and len(g) > 1 else None)
        ci = as_field(spec, g[2] if isinstance(g, tuple) and len(g) > 2 else None)
        got.append((si, ki, ci))
    ok = all(verify(got[i][0], got[i][2], got[1 - i][1]) for i in range(2))
    b_key = None
    b_result = None
    if ok:
        b_result = got[0][0] + got[1][0]
        net.send_ba(0, "OK")
    else:
        b_key = LinearKey.random(spec, rng_b)
        echo = tuple((g[0], (g[1].a, g[1].b), g[2]) for g in got)
        net.send_ba(0, ((b_key.a, b_key.b), echo))
    delivered = net.end_round()

    feedback = delivered.get(("BA", 0))
    if feedback == "OK":
        return Outcome(b_result, b_result == message, b_result is None,
                       net.round, net.view, net.transcript)
    # sender identifies the clean forward channel from the echo
    fb = feedback if isinstance(feedback, tuple) else ((), ())
    a_key = as_linear_key(spec, fb[0] if fb else None)
    echoed = fb[1] if len(fb) > 1 and isinstance(fb[1], tuple) else ((), ())
    matches = []
    for i in range(2):
        e = echoed[i] if i < len(echoed) and isinstance(echoed[i], tuple) else ()
        e_si = as_field(spec, e[0] if e else None)
        e_ki = as_linear_key(spec, e[1] if len(e) > 1 else None)
        e_ci = as_field(spec, e[2] if len(e) > 2 else None)
        matches.append((e_si, (e_ki.a, e_ki.b), e_ci) == sent_triples[i])
    # exactly one mismatch identifies the corrupted channel; anything
    # else means the feedback channel itself lied (receiver already done)
    good = matches.index(True) if matches.count(True) == 1 else 0
    net.send_ab(good, (message, auth_linear(message, a_key)))
    delivered = net.end_round()

    if b_result is not None:
        return Outcome(b_result, b_result == message, False, net.round,
                       net.view, net.transcript)
    g = delivered.get(("AB", good))
    m2 = as_field(spec, g[0] if isinstance(g, tuple) and g else None)
    t2 = as_field(spec, g[1] if isinstance(g, tuple) and len(g) > 1 else None)
    if verify(m2, t2, b_key):
        return Outcome(m2, m2 == message, False, net.round, net.view,
                       net.transcript)
    return Outcome(None, False, True, net.round, net.view, net.transcript,
                   "retransmission failed authentication")


def subset_exchange(message: FieldElement, k: int, n_forward: int, n_backward: int,
                    adversary: AdversarySpec | None = None,
                    rng_a=None, rng_b=None, seed=0) -> Outcome:
    """Key agreement over every (k+1)-subset of all channels.

    For each subset both ends accumulate pad components over the member
    channels (forward components chosen by the sender, backward by the
    receiver) and the sender delivers the padded message on the subset's
    forward members.  At least one subset is entirely honest.
    """
    spec = message.spec
    rng_a, rng_b = _rngs(rng_a, rng_b, seed)
    if n_forward < k + 1 or n_forward + n_backward < 2 * k + 1:
        raise PreconditionError(
            "need k+1 forward channels and 2k+1 channels in total")
    net = PathNetwork(n_forward, n_backward, adversary)
    lines = ([("p", i) for i in range(n_forward)] +
             [("q", j) for j in range(n_backward)])
    result = None
    for subset in itertools.combinations(lines, k + 1):
        fwd = [i for d, i in subset if d == "p"]
        back = [j for d, j in subset if d == "q"]
        if not fwd:
            continue
        # round 1: keys in both directions on the member channels
        a_keys = {i: (spec.sample(rng_a), spec.sample(rng_a)) for i in fwd}
        b_keys = {j: (spec.sample(rng_b), spec.sample(rng_b)) for j in back}
        for i in fwd:
            net.send_ab(i, a_keys[i])
        for j in back:
            net.send_ba(j, b_keys[j])
        delivered = net.end_round()
        a_back = {j: as_field_vec(spec, delivered.get(("BA", j)), 2) for j in back}
        b_fwd = {i: as_field_vec(spec, delivered.get(("AB", i)), 2) for i in fwd}
        # round 2: padded message on the forward members
        c_a = sum((a_keys[i][0] for i in fwd), spec.zero()) + \
            sum((a_back[j][0] for j in back), spec.zero())
        d_a = sum((a_keys[i][1] for i in fwd), spec.zero()) + \
            sum((a_back[j][1] for j in back), spec.zero())
        e = message + c_a
        f = auth_linear(e, LinearKey(c_a, d_a))
        for i in fwd:
            net.send_ab(i, (e, f))
        delivered = net.end_round()
        copies = {i: delivered.get(("AB", i)) for i in fwd}
        if result is not None:
            continue
        vals = set(copies.values())
        if len(vals) != 1:
            continue
        got = vals.pop()
        e_b = as_field(spec, got[0] if isinstance(got, tuple) and got else None)
        f_b = as_field(spec, got[1] if isinstance(got, tuple) and len(got) > 1 else None)
        c_b = sum((b_fwd[i][0] for i in fwd), spec.zero()) + \
            sum((b_keys[j][0] for j in back), spec.zero())
        d_b = sum((b_fwd[i][1] for i in fwd), spec.zero()) + \
            sum((b_keys[j][1] for j in back), spec.zero())
        if verify(e_b, f_b, LinearKey(c_b, d_b)):
            result = e_b - c_b
    if result is None:
        return Outcome(None, False, True, net.round, net.view, net.transcript,
                       "no subset produced a verified pad")
    return Outcome(result, result == message, False, net.round, net.view,
                   net.transcript)


def feedback_efficient(message: FieldElement, k: int, u: int,
                       adversary: AdversarySpec | None = None,
                       rng_a=None, rng_b=None, seed=0) -> Outcome:
    """Efficient transmission over 2k+1-u forward and u backward channels.

    Phase one runs the forward-only protocol over the reduced channel
    set.  If too few shares validate, the receiver raises random nonces
    authenticated under fresh sender keys; the sender clusters the
    feedback channels into mutually consistent classes and delivers the
    message under a pad known only along an honest class.
    """
    spec = message.spec
    rng_a, rng_b = _rngs(rng_a, rng_b, seed)
    if not 1 <= u <= k:
        raise PreconditionError("need 1 <= u <= k")
    n = 2 * k + 1 - u
    net = PathNetwork(n, u, adversary)

    # phase one: n rounds of authenticated share delivery
    shares = share_vector(message, n, k, rng_a)
    valid: dict[int, FieldElement] = {}
    for i in range(n):
        keys = [LinearKey.random(spec, rng_a) for _ in range(n)]
        tags = tuple(auth_linear(shares[i], keys[j]) for j in range(n))
        for j in range(n):
            carried = (shares[i], tags) if j == i else None
            net.send_ab(j, ((keys[j].a, keys[j].b), carried))
        delivered = net.end_round()
        got = [delivered.get(("AB", j)) for j in range(n)]
        rkeys = [as_linear_key(spec, g[0] if isinstance(g, tuple) and g else None)
                 for g in got]
        carried = got[i][1] if isinstance(got[i], tuple) and len(got[i]) > 1 else None
        s_i = as_field(spec, carried[0] if isinstance(carried, tuple) and carried else None)
        rtags = as_field_vec(spec, carried[1] if isinstance(carried, tuple)
                             and len(carried) > 1 else None, n)
        if sum(1 for j in range(n) if verify(s_i, rtags[j], rkeys[j])) >= k + 1:
            valid[i] = s_i
    b_result = None
    if len(valid) >= k + 1:
        b_result = reconstruct(subset_word(spec, sorted(valid.items()), n, k))
        # the receiver is done but keeps responding honestly below so
        # that both ends stay in lock-step

    # fallback round: fresh two-time keys forward
    quads_a = [QuadKey.random(spec, rng_a) for _ in range(n)]
    for i in range(n):
        net.send_ab(i, (quads_a[i].a, quads_a[i].b, quads_a[i].c))
    delivered = net.end_round()
    quads_b = [as_quad_key(spec, delivered.get(("AB", i))) for i in range(n)]
    r_b = [spec.sample(rng_b) for _ in range(n)]
    beta_b = tuple((r_b[i], auth_quad(r_b[i], quads_b[i])) for i in range(n))

    # u feedback rounds: nonces plus cross-authenticated pad components
    de_b = [(spec.sample(rng_b), spec.sample(rng_b)) for _ in range(u)]
    vw_b = [[LinearKey.random(spec, rng_b) for _ in range(u)] for _ in range(u)]
    # one round per feedback channel j: the nonce bundle travels on
    # channel j while the cross keys (v, w) for j travel on channel l
    fb: list = [None] * u
    keys_at_a: list = [[None] * u for _ in range(u)]
    for j in range(u):
        de_enc = encode_tuple(spec, list(de_b[j]))
        alphas = tuple(auth(de_enc, vw_b[j][l]) for l in range(u))
        for l in range(u):
            bundle = ((de_b[j][0], de_b[j][1]), beta_b, alphas) if l == j else None
            net.send_ba(l, (bundle, (vw_b[j][l].a, vw_b[j][l].b)))
        delivered = net.end_round()
        for l in range(u):
            g = delivered.get(("BA", l))
            g = g if isinstance(g, tuple) and len(g) == 2 else (None, None)
            if l == j:
                fb[j] = g[0]
            keys_at_a[j][l] = as_linear_key(spec, g[1])

    # sender parses the feedback
    de_a, beta_a, alpha_a = [], [], []
    for j in range(u):
        g = fb[j] if isinstance(fb[j], tuple) and len(fb[j]) == 3 else (None, None, None)
        de_a.append(as_field_vec(spec, g[0], 2))
        beta = g[1] if isinstance(g[1], tuple) else ()
        beta_a.append(tuple(as_field_vec(spec, beta[i] if i < len(beta) else None, 2)
                            for i in range(n)))
        alpha_a.append(g[2] if isinstance(g[2], tuple) else ())

    def cross_ok(m: int, l: int) -> bool:
        """Does channel m's tag for channel l's nonce pair verify?"""
        tag = alpha_a[m][l] if l < len(alpha_a[m]) else None
        de_enc = encode_tuple(spec, list(de_a[m]))
        want = auth(de_enc, keys_at_a[m][l])
        return tag == want

    # greedy partition of feedback channels into consistent classes
    classes: list[list[int]] = []
    for j in range(u):
        placed = False
        for cls in classes:
            m = cls[0]
            if (beta_a[j] == beta_a[m] and
                    all(cross_ok(j, l) and cross_ok(l, j) for l in cls)):
                cls.append(j)
                placed = True
                break
        if not placed:
            classes.append([j])

    # u delivery rounds, one candidate class per round
    accepted = b_result
    for l in range(u):
        cls = classes[l] if l < len(classes) else None
        if cls is not None:
            m = cls[0]
            good_p = [i for i in range(n)
                      if beta_a[m][i][1] == auth_quad(beta_a[m][i][0], quads_a[i])]
            t_l = len(good_p) + len(cls)
        if cls is None or t_l <= k:
            net.end_round()
            continue
        c_a = sum((quads_a[i].a for i in good_p), spec.zero()) + \
            sum((de_a[j][0] for j in cls), spec.zero())
        d_a = sum((quads_a[i].b for i in good_p), spec.zero()) + \
            sum((de_a[j][1] for j in cls), spec.zero())
        # the tag covers only the padded message; a single linear
        # equation in (c_a, d_a) reveals nothing about the pad, while
        # tampered index lists change the receiver's key and fail the
        # check.  Tagging the (public) index lists under the same key
        # would hand the adversary equations that solve for the pad.
        tag = auth_linear(message + c_a, LinearKey(c_a, d_a))
        payload = (tuple(cls), tuple(good_p), message + c_a, tag)
        for i in good_p:
            net.send_ab(i, payload)
        delivered = net.end_round()
        if accepted is not None:
            continue
        for i in range(n):
            g = delivered.get(("AB", i))
            if not (isinstance(g, tuple) and len(g) == 4):
                continue
            qs = g[0] if isinstance(g[0], tuple) else ()
            ps = g[1] if isinstance(g[1], tuple) else ()
            if not all(isinstance(x, int) and 0 <= x < u for x in qs):
                continue
            if not all(isinstance(x, int) and 0 <= x < n for x in ps):
                continue
            e_b = as_field(spec, g[2])
            c_b = sum((quads_b[i2].a for i2 in ps), spec.zero()) + \
                sum((de_b[j2][0] for j2 in qs), spec.zero())
            d_b = sum((quads_b[i2].b for i2 in ps), spec.zero()) + \
                sum((de_b[j2][1] for j2 in qs), spec.zero())
            if auth_linear(e_b, LinearKey(c_b, d_b)) == g[3]:
                accepted = e_b - c_b
                break
    if accepted is None:
        return Outcome(None, False, True, net.round, net.view, net.transcript,
                       "no acceptable feedback class delivered the message")
    return Outcome(accepted, accepted == message, False, net.round, net.view,
                   net.transcript)
