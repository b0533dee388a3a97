"""Finite field arithmetic and the injective tuple encoding.

Fields GF(p^m) are represented with elements packed into integers in
[0, p^m): the base-p digits of the integer are the coefficients of the
residue polynomial (little-endian).  Prime fields use plain modular
arithmetic; small extension fields build log/exp tables once.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    DecodeError,
    DivisionByZero,
    ParamError,
    SpecMismatch,
    TupleTooLong,
)

# ---------------------------------------------------------------------------
# polynomial helpers over GF(p), little-endian coefficient tuples


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_modred(prod, f, p)


def _poly_modred(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    a = list(a)
    deg_f = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    for i in range(len(a) - 1, deg_f - 1, -1):
        if a[i] == 0:
            continue
        factor = (a[i] * inv_lead) % p
        for j, fj in enumerate(f):
            a[i - deg_f + j] = (a[i - deg_f + j] - factor * fj) % p
    del a[deg_f:]
    return _poly_trim(a)


def _poly_powmod(a: Sequence[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_modred(a, f, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        inv_lead = pow(b[-1], p - 2, p)
        r = list(a)
        for i in range(len(r) - 1, len(b) - 2, -1):
            if r[i] == 0:
                continue
            factor = (r[i] * inv_lead) % p
            for j, bj in enumerate(b):
                r[i - len(b) + 1 + j] = (r[i - len(b) + 1 + j] - factor * bj) % p
        a, b = b, _poly_trim(r)
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test for a monic-able polynomial over GF(p)."""
    f = _poly_trim(list(f))
    m = len(f) - 1
    if m < 1:
        return False
    x = [0, 1]
    # x^(p^m) == x mod f
    h = _poly_powmod(x, p**m, f, p)
    diff = _poly_trim([(hi - xi) % p for hi, xi in
                       zip(h + [0] * 2, x + [0] * len(h))])
    if diff:
        return False
    for q in _prime_factors(m):
        h = _poly_powmod(x, p ** (m // q), f, p)
        diff = _poly_trim([(hi - xi) % p for hi, xi in
                           zip(h + [0] * 2, x + [0] * len(h))])
        if len(_poly_gcd(f, diff, p)) != 1:
            return False
    return True


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _factor_prime_power(order: int) -> tuple[int, int]:
    for p in range(2, order + 1):
        if not _is_prime(p):
            continue
        if order % p == 0:
            m = 0
            n = order
            while n % p == 0:
                n //= p
                m += 1
            if n != 1:
                raise ParamError(f"order {order} is not a prime power")
            return p, m
    raise ParamError(f"order {order} is not a prime power")


def _int_to_digits(value: int, p: int, m: int) -> list[int]:
    digits = []
    for _ in range(m):
        digits.append(value % p)
        value //= p
    return digits


def _digits_to_int(digits: Sequence[int], p: int) -> int:
    value = 0
    for d in reversed(digits):
        value = value * p + d
    return value


def _default_reduction(p: int, m: int) -> tuple[int, ...]:
    """Smallest (by packed value) monic irreducible polynomial of degree m."""
    for low in range(p**m):
        coeffs = _int_to_digits(low, p, m) + [1]
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise ParamError(f"no irreducible polynomial found for GF({p}^{m})")


# ---------------------------------------------------------------------------


_TABLE_LIMIT = 1 << 16


class FieldSpec:
    """A finite field GF(p^m) with a fixed reduction polynomial (m > 1)."""

    def __init__(self, order: int, reduction: Sequence[int] | None = None):
        if order < 2:
            raise ParamError("field order must be at least 2")
        p, m = _factor_prime_power(order)
        self.order = order
        self.p = p
        self.m = m
        if m == 1:
            if reduction is not None:
                raise ParamError("prime fields take no reduction polynomial")
            self.reduction: tuple[int, ...] | None = None
        else:
            if reduction is None:
                reduction = _default_reduction(p, m)
            reduction = tuple(int(c) % p for c in reduction)
            if len(reduction) != m + 1 or reduction[-1] != 1:
                raise ParamError("reduction polynomial must be monic of degree m")
            if not _is_irreducible(reduction, p):
                raise ParamError("reduction polynomial is not irreducible")
            self.reduction = reduction
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        if m > 1 and order <= _TABLE_LIMIT:
            self._build_tables()

    # -- raw integer arithmetic ------------------------------------------

    def add_raw(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        da, db = _int_to_digits(a, self.p, self.m), _int_to_digits(b, self.p, self.m)
        return _digits_to_int([(x + y) % self.p for x, y in zip(da, db)], self.p)

    def neg_raw(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        da = _int_to_digits(a, self.p, self.m)
        return _digits_to_int([(-x) % self.p for x in da], self.p)

    def sub_raw(self, a: int, b: int) -> int:
        return self.add_raw(a, self.neg_raw(b))

    def mul_raw(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            q1 = self.order - 1
            return self._exp[(self._log[a] + self._log[b]) % q1]
        return self._mul_poly(a, b)

    def _mul_poly(self, a: int, b: int) -> int:
        da = _int_to_digits(a, self.p, self.m)
        db = _int_to_digits(b, self.p, self.m)
        prod = _poly_mulmod(da, db, self.reduction, self.p)
        return _digits_to_int(prod + [0] * (self.m - len(prod)), self.p)

    def inv_raw(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        if self._exp is not None:
            q1 = self.order - 1
            return self._exp[(q1 - self._log[a]) % q1]
        return self.pow_raw(a, self.order - 2)

    def pow_raw(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow_raw(self.inv_raw(a), -e)
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul_raw(result, base)
            base = self.mul_raw(base, base)
            e >>= 1
        return result

    def _build_tables(self) -> None:
        q1 = self.order - 1
        factors = _prime_factors(q1)
        gen = None
        for cand in range(2, self.order):
            if all(self._pow_slow(cand, q1 // f) != 1 for f in factors):
                gen = cand
                break
        assert gen is not None
        exp = [0] * q1
        log = [0] * self.order
        x = 1
        for i in range(q1):
            exp[i] = x
            log[x] = i
            x = self._mul_poly(x, gen)
        self._exp = exp
        self._log = log

    def _pow_slow(self, a: int, e: int) -> int:
        result = 1
        base = a
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            base = self._mul_poly(base, base)
            e >>= 1
        return result

    # -- element constructors --------------------------------------------

    def element(self, value: int, taint: frozenset[int] | None = None) -> "FieldElement":
        return FieldElement(self, value % self.order if self.m == 1 else self._coerce(value), taint)

    def _coerce(self, value: int) -> int:
        if 0 <= value < self.order:
            return value
        raise ParamError(f"value {value} out of range for field of order {self.order}")

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self) -> Iterable["FieldElement"]:
        return (FieldElement(self, v) for v in range(self.order))

    def sample(self, rng) -> "FieldElement":
        """Uniform element from a seeded randomness source."""
        value, taint = rng.draw(self.order)
        return FieldElement(self, value, taint)

    # -- misc --------------------------------------------------------------

    def to_config(self) -> dict:
        cfg: dict = {"order": self.order}
        if self.reduction is not None:
            cfg["reduction"] = "".join(str(c) for c in self.reduction)
        return cfg

    @classmethod
    def from_config(cls, cfg: dict) -> "FieldSpec":
        reduction = cfg.get("reduction")
        if reduction is not None:
            reduction = [int(ch) for ch in str(reduction)]
        return GF(int(cfg["order"]), reduction)

    def __repr__(self) -> str:
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldSpec)
            and self.order == other.order
            and self.reduction == other.reduction
        )

    def __hash__(self) -> int:
        return hash((self.order, self.reduction))


@lru_cache(maxsize=None)
def _gf_cached(order: int, reduction: tuple[int, ...] | None) -> FieldSpec:
    return FieldSpec(order, reduction)


def GF(order: int, reduction: Sequence[int] | None = None) -> FieldSpec:
    """Field constructor with caching so repeated GF(q) share tables."""
    return _gf_cached(order, tuple(reduction) if reduction is not None else None)


class FieldElement:
    """Immutable element of a FieldSpec, with optional provenance taint.

    The taint is the set of randomness-draw indices the value depends on;
    it is carried through arithmetic and used by the privacy analyzer.
    Equality and hashing ignore taint.
    """

    __slots__ = ("spec", "value", "taint")

    def __init__(self, spec: FieldSpec, value: int, taint: frozenset[int] | None = None):
        self.spec = spec
        self.value = value
        self.taint = taint

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise SpecMismatch(f"expected FieldElement, got {type(other).__name__}")
        if other.spec != self.spec:
            raise SpecMismatch(f"mixed field specs {self.spec} and {other.spec}")

    @staticmethod
    def _merge(a: frozenset | None, b: frozenset | None) -> frozenset | None:
        if a is None:
            return b
        if b is None:
            return a
        return a | b

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.add_raw(self.value, other.value),
                            self._merge(self.taint, other.taint))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.sub_raw(self.value, other.value),
                            self._merge(self.taint, other.taint))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.mul_raw(self.value, other.value),
                            self._merge(self.taint, other.taint))

    def __truediv__(self, other):
        self._check(other)
        return FieldElement(self.spec,
                            self.spec.mul_raw(self.value, self.spec.inv_raw(other.value)),
                            self._merge(self.taint, other.taint))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg_raw(self.value), self.taint)

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow_raw(self.value, e), self.taint)

    def inv(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv_raw(self.value), self.taint)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElement)
            and self.spec == other.spec
            and self.value == other.value
        )

    def __hash__(self) -> int:
        return hash((self.spec.order, self.value))

    def __repr__(self) -> str:
        return f"{self.value}:{self.spec!r}"

    def __bool__(self) -> bool:
        return self.value != 0


# ---------------------------------------------------------------------------
# tuple encoding <...>


class ExtElement:
    """Image of the injective encoding of an ordered tuple of field elements.

    Structurally a length-tagged vector; injectivity and exact round-trips
    are immediate from the representation.
    """

    __slots__ = ("spec", "payload")

    def __init__(self, spec: FieldSpec, payload: tuple[FieldElement, ...]):
        self.spec = spec
        self.payload = payload

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExtElement)
            and self.spec == other.spec
            and self.payload == other.payload
        )

    def __hash__(self) -> int:
        return hash((self.spec.order, tuple(e.value for e in self.payload)))

    def __len__(self) -> int:
        return len(self.payload)

    def __repr__(self) -> str:
        return f"<{','.join(str(e.value) for e in self.payload)}>"


def encode_tuple(spec: FieldSpec, items: Sequence[FieldElement],
                 bound: int | None = None) -> ExtElement:
    if bound is not None and len(items) > bound:
        raise TupleTooLong(f"tuple of length {len(items)} exceeds bound {bound}")
    for item in items:
        if not isinstance(item, FieldElement) or item.spec != spec:
            raise SpecMismatch("tuple items must belong to the given field")
    return ExtElement(spec, tuple(items))


def decode_tuple(spec: FieldSpec, e) -> tuple[FieldElement, ...]:
    if not isinstance(e, ExtElement) or e.spec != spec:
        raise DecodeError("payload is not a valid tuple encoding")
    for item in e.payload:
        if not isinstance(item, FieldElement) or item.spec != spec:
            raise DecodeError("payload is not a valid tuple encoding")
    return e.payload
