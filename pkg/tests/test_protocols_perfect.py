"""Perfectly reliable protocols: zero failures under any placement/strategy."""

import itertools

import pytest

from psmt.errors import PreconditionError
from psmt.field import GF
from psmt.netsim import AdversarySpec
from psmt.protocols.perfect import (
    perfect_3k,
    perfect_efficient,
    perfect_general,
    perfect_oneway,
    perfect_shared_feedback,
    perfect_u1,
)
from psmt.randomness import Randomness
from psmt.strategies import (
    constant_replacer,
    format_corruptor,
    random_tamperer,
    shift_tamperer,
    stop_forger,
)


def _strategies(spec):
    return [shift_tamperer(), random_tamperer(spec), format_corruptor(),
            stop_forger(), constant_replacer(spec.element(0))]


def _units(n_forward, n_backward, shared=0):
    """Corruptible units: single channels, plus joint pairs for shared
    relay nodes (a forward path carrying a feedback channel)."""
    units = [frozenset({("AB", i)}) for i in range(n_forward - shared)]
    if shared:
        units += [frozenset({("AB", n_forward - shared + j), ("BA", j)})
                  for j in range(shared)]
    else:
        units += [frozenset({("BA", j)}) for j in range(n_backward)]
    return units


def _placements(units, k):
    for size in range(1, k + 1):
        for combo in itertools.combinations(units, size):
            yield frozenset().union(*combo)


def _sweep(run, spec, k, units, trials_per=1):
    rng = Randomness(("perfect-sweep", run.__name__, k))
    for corrupted in _placements(units, k):
        for s, strategy in enumerate(_strategies(spec)):
            m = spec.sample(rng)
            out = run(m, AdversarySpec(corrupted, strategy, seed=s))
            assert out.succeeded and out.delivered == m, (
                f"{run.__name__} failed at {sorted(map(sorted, [corrupted]))} "
                f"strategy {s}: {out.detail}")


def test_perfect_oneway():
    spec = GF(11)
    for k in (1, 2):
        out = perfect_oneway(spec.element(6), k, seed=1)
        assert out.succeeded and out.rounds == 1
        _sweep(lambda m, a, k=k: perfect_oneway(m, k, a), spec, k,
               _units(3 * k + 1, 0))


def test_perfect_3k():
    spec = GF(11)
    for k in (1, 2):
        out = perfect_3k(spec.element(3), k, seed=1)
        assert out.succeeded and out.rounds <= 3
        _sweep(lambda m, a, k=k: perfect_3k(m, k, a), spec, k,
               _units(3 * k, 1))


def test_perfect_u1():
    spec = GF(11)
    k = 2
    out = perfect_u1(spec.element(9), k, seed=1)
    assert out.succeeded
    _sweep(lambda m, a: perfect_u1(m, k, a), spec, k, _units(3 * k - 1, 1))
    with pytest.raises(PreconditionError):
        perfect_u1(spec.element(1), 1)


def test_perfect_general():
    spec = GF(11)
    k, u = 2, 1
    out = perfect_general(spec.element(2), k, u, seed=1)
    assert out.succeeded
    n = max(3 * k + 1 - 2 * u, 2 * k + 1)
    _sweep(lambda m, a: perfect_general(m, k, u, a), spec, k, _units(n, u))
    with pytest.raises(PreconditionError):
        perfect_general(spec.element(1), 1, 1)
    with pytest.raises(PreconditionError):
        perfect_general(spec.element(1), 2, 0)


def test_perfect_efficient():
    spec = GF(11)
    for k, u in ((1, 1), (2, 1), (2, 2)):
        out = perfect_efficient(spec.element(8), k, u, seed=1)
        assert out.succeeded
        assert out.rounds <= 11 * max(u, 1)
        _sweep(lambda m, a, k=k, u=u: perfect_efficient(m, k, u, a), spec, k,
               _units(3 * k + 1 - u, u))
    # u = 0 degenerates to the single-round protocol
    out = perfect_efficient(spec.element(8), 1, 0, seed=1)
    assert out.succeeded
    with pytest.raises(PreconditionError):
        perfect_efficient(spec.element(1), 1, 2)


def test_perfect_shared_feedback():
    spec = GF(11)
    for k, u in ((1, 1), (2, 1), (2, 2)):
        out = perfect_shared_feedback(spec.element(5), k, u, seed=1)
        assert out.succeeded
        # node-level corruption: the last u forward channels each share a
        # relay with one feedback channel and fall jointly
        _sweep(lambda m, a, k=k, u=u: perfect_shared_feedback(m, k, u, a),
               spec, k, _units(3 * k + 1 - u, u, shared=u))
    with pytest.raises(PreconditionError):
        perfect_shared_feedback(spec.element(1), 2, 0)


def test_perfect_protocols_never_report_failure_under_bound():
    # the failed flag must stay unset for every placement within k: a
    # perfectly reliable protocol is not allowed to give up
    spec = GF(11)
    k = 1
    for corrupted in _placements(_units(3 * k, 1), k):
        out = perfect_3k(spec.element(7), k,
                         AdversarySpec(corrupted, stop_forger()))
        assert not out.failed


def test_determinism():
    spec = GF(11)
    a = perfect_efficient(spec.element(4), 2, 1, seed=42)
    b = perfect_efficient(spec.element(4), 2, 1, seed=42)
    assert a.view.canonical() == b.view.canonical()
    assert a.rounds == b.rounds and a.delivered == b.delivered
