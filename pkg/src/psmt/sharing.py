"""(k+1)-out-of-n MDS secret sharing (Reed-Solomon construction).

A secret is the constant term of a uniformly random polynomial of degree
at most k, evaluated at n distinct nonzero points.  Decoding offers
plain reconstruction, error detection, and bounded-distance correction
with guaranteed simultaneous detection (never a wrong secret inside the
n-k-e-1 detection range).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import (
    InsufficientShares,
    MissingEntries,
    OracleTooLarge,
    ParamError,
)
from .field import FieldElement, FieldSpec

_ORACLE_LIMIT = 10**7


@dataclass(frozen=True)
class SharingParams:
    n: int
    k: int
    field: FieldSpec
    points: tuple[FieldElement, ...] = dc_field(default=())

    def __post_init__(self):
        if not (0 <= self.k < self.n):
            raise ParamError(f"need 0 <= k < n, got k={self.k}, n={self.n}")
        if self.n > self.field.order - 1:
            raise ParamError(
                f"n={self.n} exceeds the {self.field.order - 1} nonzero points of {self.field}")
        if not self.points:
            object.__setattr__(
                self, "points",
                tuple(self.field.element(i) for i in range(1, self.n + 1)))
        if len(self.points) != self.n:
            raise ParamError("need exactly n evaluation points")
        seen = {pt.value for pt in self.points}
        if len(seen) != self.n or 0 in seen:
            raise ParamError("evaluation points must be distinct and nonzero")

    @property
    def max_detect(self) -> int:
        return self.n - self.k - 1

    @property
    def max_correct(self) -> int:
        return (self.n - self.k - 1) // 2


@dataclass(frozen=True)
class Codeword:
    shares: tuple[FieldElement, ...]
    params: SharingParams


@dataclass(frozen=True)
class ReceivedWord:
    """n slots, each a FieldElement or None for an explicitly missing entry."""

    entries: tuple
    params: SharingParams

    def present(self) -> list[tuple[int, FieldElement]]:
        return [(i, e) for i, e in enumerate(self.entries) if e is not None]

    def filled(self, default: FieldElement | None = None) -> "ReceivedWord":
        """Substitute the field's zero (or a given default) for missing slots."""
        if default is None:
            default = self.params.field.zero()
        return ReceivedWord(
            tuple(e if e is not None else default for e in self.entries),
            self.params)


def _poly_eval(coeffs: Sequence[FieldElement], x: FieldElement) -> FieldElement:
    acc = x.spec.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def share(secret: FieldElement, params: SharingParams, rng) -> Codeword:
    if secret.spec != params.field:
        raise ParamError("secret must belong to the sharing field")
    coeffs = [secret] + [params.field.sample(rng) for _ in range(params.k)]
    return Codeword(
        tuple(_poly_eval(coeffs, pt) for pt in params.points), params)


def _interpolate_at_zero(pairs: Sequence[tuple[FieldElement, FieldElement]]) -> FieldElement:
    """Lagrange interpolation evaluated at x = 0."""
    spec = pairs[0][0].spec
    acc = spec.zero()
    for i, (xi, yi) in enumerate(pairs):
        num = spec.one()
        den = spec.one()
        for j, (xj, _) in enumerate(pairs):
            if j == i:
                continue
            num = num * (-xj)
            den = den * (xi - xj)
        acc = acc + yi * num / den
    return acc


def _interpolate(pairs: Sequence[tuple[FieldElement, FieldElement]]) -> list[FieldElement]:
    """Full coefficient vector of the unique interpolant (degree < len(pairs))."""
    spec = pairs[0][0].spec
    n = len(pairs)
    coeffs = [spec.zero()] * n
    for i, (xi, yi) in enumerate(pairs):
        # basis polynomial prod_{j!=i} (x - xj) / (xi - xj)
        basis = [spec.one()]
        den = spec.one()
        for j, (xj, _) in enumerate(pairs):
            if j == i:
                continue
            nxt = [spec.zero()] * (len(basis) + 1)
            for d, c in enumerate(basis):
                nxt[d] = nxt[d] + c * (-xj)
                nxt[d + 1] = nxt[d + 1] + c
            basis = nxt
            den = den * (xi - xj)
        scale = yi / den
        for d, c in enumerate(basis):
            coeffs[d] = coeffs[d] + c * scale
    return coeffs


def reconstruct(word: ReceivedWord) -> FieldElement:
    """Recover the secret from >= k+1 entries assumed error-free."""
    params = word.params
    present = word.present()
    if len(present) < params.k + 1:
        raise InsufficientShares(
            f"have {len(present)} entries, need {params.k + 1}")
    pairs = [(params.points[i], e) for i, e in present[: params.k + 1]]
    return _interpolate_at_zero(pairs)


CLEAN = "clean"
CORRUPTED = "corrupted"


def detect_errors(word: ReceivedWord, max_detect: int | None = None) -> str:
    """CLEAN iff the full word lies on a single degree-<=k polynomial."""
    params = word.params
    if max_detect is None:
        max_detect = params.max_detect
    if max_detect > params.max_detect:
        raise ParamError(
            f"max_detect {max_detect} exceeds MDS bound {params.max_detect}")
    if any(e is None for e in word.entries):
        raise MissingEntries("substitute defaults before detection")
    pairs = [(params.points[i], e) for i, e in enumerate(word.entries)]
    coeffs = _interpolate(pairs[: params.k + 1])
    for xi, yi in pairs[params.k + 1:]:
        if _poly_eval(coeffs, xi) != yi:
            return CORRUPTED
    return CLEAN


@dataclass(frozen=True)
class Decoded:
    secret: FieldElement
    error_positions: frozenset[int]


def correct_errors(word: ReceivedWord, e: int) -> Decoded | None:
    """Bounded-distance decode at radius e (Berlekamp-Welch).

    Returns the secret and the exact corrupted positions when at most e
    entries are wrong.  Returns None (errors detected beyond the radius)
    when between e+1 and n-k-e-1 entries are wrong; never a wrong secret
    inside that range.
    """
    params = word.params
    if e > params.max_correct:
        raise ParamError(f"radius {e} exceeds MDS bound {params.max_correct}")
    if any(entry is None for entry in word.entries):
        raise MissingEntries("substitute defaults before decoding")
    codeword = _berlekamp_welch(word, e)
    if codeword is None:
        return None
    errs = frozenset(
        i for i, (got, want) in enumerate(zip(word.entries, codeword))
        if got != want)
    if len(errs) > e:
        return None
    pairs = [(params.points[i], codeword[i]) for i in range(params.k + 1)]
    return Decoded(_interpolate_at_zero(pairs), errs)


def _berlekamp_welch(word: ReceivedWord, e: int) -> tuple[FieldElement, ...] | None:
    """Find the codeword within distance e, if any (unique when e <= max_correct)."""
    params = word.params
    spec = params.field
    n, k = params.n, params.k
    if e == 0:
        return word.entries if detect_errors(word) == CLEAN else None
    # Solve Q(x) = y * E(x) with deg Q <= e+k, E monic of degree e.
    # Unknowns: q_0..q_{e+k}, e_0..e_{e-1}  (E = x^e + sum e_j x^j)
    nq = e + k + 1
    rows = []
    for i in range(n):
        x = params.points[i]
        y = word.entries[i]
        row = []
        xp = spec.one()
        for _ in range(nq):
            row.append(xp)
            xp = xp * x
        xp = spec.one()
        for _ in range(e):
            row.append(-(y * xp))
            xp = xp * x
        rhs = y * x**e
        rows.append(row + [rhs])
    sol = _solve_linear(rows, nq + e, spec)
    if sol is None:
        return None
    q = sol[:nq]
    ecf = sol[nq:] + [spec.one()]
    # codeword_i = Q(x_i) / E(x_i); E(x_i) = 0 marks an error position
    out = []
    for i in range(n):
        x = params.points[i]
        ev = _poly_eval(ecf, x)
        if ev.value == 0:
            out.append(None)
        else:
            out.append(_poly_eval(q, x) / ev)
    # fill error positions from the interpolant through k+1 non-error slots
    good = [(params.points[i], v) for i, v in enumerate(out) if v is not None]
    if len(good) < k + 1:
        return None
    coeffs = _interpolate(good[: k + 1])
    full = tuple(
        v if v is not None else _poly_eval(coeffs, params.points[i])
        for i, v in enumerate(out))
    # verify consistency: all non-error slots must lie on the interpolant
    for i, v in enumerate(full):
        if _poly_eval(coeffs, params.points[i]) != v:
            return None
    return full


def _solve_linear(rows, ncols: int, spec: FieldSpec):
    """Gaussian elimination; returns one solution or None if inconsistent."""
    rows = [list(r) for r in rows]
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if rows[i][c].value != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inv()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c].value != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if rows[i][ncols].value != 0:
            return None
    sol = [spec.zero()] * ncols
    for i, c in enumerate(pivots):
        sol[c] = rows[i][ncols]
    return sol


def oracle_decode(word: ReceivedWord) -> list[tuple[FieldElement, tuple[FieldElement, ...], int]]:
    """All nearest codewords; ties are reported, never silently resolved.

    Returns a list of (secret, codeword, distance) triples.  Every
    codeword at distance d <= n-k-1 from the word agrees with it on at
    least k+1 positions and therefore is the interpolant of some
    (k+1)-subset of positions, so interpolating all such subsets finds
    the complete nearest set whenever the nearest distance is within the
    detection range; beyond it the oracle falls back to enumerating
    every degree-<=k polynomial.
    """
    params = word.params
    spec = params.field
    if any(e is None for e in word.entries):
        raise MissingEntries("substitute defaults before decoding")

    best: dict[tuple[int, ...], tuple[FieldElement, tuple[FieldElement, ...], int]] = {}
    best_dist = params.n + 1
    for subset in itertools.combinations(range(params.n), params.k + 1):
        pairs = [(params.points[i], word.entries[i]) for i in subset]
        coeffs = _interpolate(pairs)
        cw = tuple(_poly_eval(coeffs, pt) for pt in params.points)
        dist = sum(1 for a, b in zip(cw, word.entries) if a != b)
        if dist < best_dist:
            best = {}
            best_dist = dist
        if dist == best_dist:
            best[tuple(v.value for v in cw)] = (coeffs[0], cw, dist)
    if best_dist <= params.max_detect:
        return list(best.values())

    # nearest codeword may agree on fewer than k+1 positions: enumerate
    if spec.order ** (params.k + 1) > _ORACLE_LIMIT:
        raise OracleTooLarge("polynomial enumeration space exceeds limit")
    out: list[tuple[FieldElement, tuple[FieldElement, ...], int]] = []
    best_dist = params.n + 1
    for values in itertools.product(range(spec.order), repeat=params.k + 1):
        coeffs = [spec.element(v) for v in values]
        cw = tuple(_poly_eval(coeffs, pt) for pt in params.points)
        dist = sum(1 for a, b in zip(cw, word.entries) if a != b)
        if dist < best_dist:
            out = [(coeffs[0], cw, dist)]
            best_dist = dist
        elif dist == best_dist:
            out.append((coeffs[0], cw, dist))
    return out
