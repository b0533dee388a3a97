"""Adversary tampering strategies for the simulators.

A strategy is a callable ``f(ctx) -> payload`` applied to every payload
crossing a corrupted channel or node; ``ctx`` carries the round, the
location, the original payload, the accumulated adversary view, a
seeded adversary randomness source, and a scratch state dict.
"""

from __future__ import annotations

from .errors import ParamError
from .field import FieldElement, FieldSpec


def passive():
    """No tampering; the adversary only records.  (Passive corruption is
    expressed by leaving the strategy unset; this helper exists for the
    CLI's benefit and simply forwards payloads.)"""
    def strategy(ctx):
        return ctx.payload
    return strategy


def random_tamperer(spec: FieldSpec):
    """Replace every field element with a fresh uniform one, keeping shape."""
    def strategy(ctx):
        def mess(x):
            if isinstance(x, FieldElement):
                v, _ = ctx.rng.draw(spec.order)
                return spec.element(v)
            if isinstance(x, tuple):
                return tuple(mess(v) for v in x)
            return x
        return mess(ctx.payload)
    return strategy


def shift_tamperer():
    """Add one to every field element; minimal, always-detectable damage."""
    def strategy(ctx):
        def mess(x):
            if isinstance(x, FieldElement):
                return x + x.spec.one()
            if isinstance(x, tuple):
                return tuple(mess(v) for v in x)
            return x
        return mess(ctx.payload)
    return strategy


def constant_replacer(value):
    """Replace the whole payload with a fixed value.

    With half the channels of an even-sized majority vote, this stages
    the coin-flip split: the receiver sees two equal-weight candidate
    values and can only guess.
    """
    def strategy(ctx):
        return value
    return strategy


def format_corruptor():
    """Replace payloads with shape-violating garbage."""
    def strategy(ctx):
        return ("garbage", ctx.round)
    return strategy


def stop_forger():
    """Replace everything with the literal acknowledgement "stop"."""
    def strategy(ctx):
        return "stop"
    return strategy


def scripted(script: dict, default=None):
    """Replay a {(round, where): payload} script, else forward or default."""
    def strategy(ctx):
        key = (ctx.round, ctx.where)
        if key in script:
            return script[key]
        return ctx.payload if default is None else default
    return strategy


def simulation_attack(spec: FieldSpec, decoy: FieldElement):
    """Simulate an honest sender transmitting a different message.

    On the first tampered round the adversary commits to the decoy and
    thereafter answers every single-field-element payload with a share
    of its own simulated run; structured payloads pass through with
    their field elements replaced by simulated uniform values.
    """
    def strategy(ctx):
        def mess(x):
            if isinstance(x, FieldElement):
                v, _ = ctx.rng.draw(spec.order)
                return spec.element(v)
            if isinstance(x, tuple):
                return tuple(mess(v) for v in x)
            return x
        if isinstance(ctx.payload, FieldElement):
            return decoy if ctx.state.setdefault("plain", True) else mess(ctx.payload)
        return mess(ctx.payload)
    return strategy


BUILTIN = {
    "passive": lambda spec, **kw: None,
    "random": lambda spec, **kw: random_tamperer(spec),
    "shift": lambda spec, **kw: shift_tamperer(),
    "junk": lambda spec, **kw: format_corruptor(),
    "stop": lambda spec, **kw: stop_forger(),
}


def build(name: str, spec: FieldSpec, **kw):
    """Look up a named strategy; ``constant:<int>`` replays one element."""
    if name in BUILTIN:
        return BUILTIN[name](spec, **kw)
    if name.startswith("constant:"):
        return constant_replacer(spec.element(int(name.split(":", 1)[1])))
    raise ParamError(f"unknown adversary strategy {name!r}")
