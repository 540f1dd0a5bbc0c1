"""Exact extrema of the restricted tail sets.

The points of S(-P,u) and of its two parity companions are P-values of
complemented u-run words.  Which positions get complemented depends on the
parity of the absolute position where the tail starts, so there are two
states:

    state 0  tail starts at an odd position   (the "over" set, S-bar(P,u))
    state 1  tail starts at an even position  (the "under" set, S-underbar(P,u))

A block c read in state t is an increasing affine map y -> a + b*y and moves
the chain to state (t + c) mod 2.  inf and sup therefore solve

    inf_t = min_c  a(t,c) + b(t,c) * inf_{t+c}
    sup_t = max_c  a(t,c) + b(t,c) * sup_{t+c}

which is solved exactly by policy iteration over rationals.  The positive
set S(P,u) (no complement) is the one-state version.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .digits import DigitSeq, SystemParams
from .salem import ProbVector


@dataclass(frozen=True)
class TailExtrema:
    lo: tuple[Fraction, Fraction]
    hi: tuple[Fraction, Fraction]
    lo_policy: tuple[int, int]
    hi_policy: tuple[int, int]

    def diameter(self, state: int) -> Fraction:
        return self.hi[state] - self.lo[state]


def block_digits(params: SystemParams, c: int, state: int, twisted: bool = True) -> tuple[int, ...]:
    """Digits that block c contributes to the P-word when read in ``state``."""
    s, u = params.s, params.u
    raw = (u,) * (c - 1) + (c,)
    if not twisted:
        return raw
    # absolute position of relative position i is state + i (mod 2); even -> complement
    return tuple(s - 1 - d if (state + i) % 2 == 0 else d for i, d in enumerate(raw, start=1))


def block_map(params: SystemParams, P: ProbVector, c: int, state: int,
              twisted: bool = True) -> tuple[Fraction, Fraction]:
    a, b = Fraction(0), Fraction(1)
    for d in block_digits(params, c, state, twisted):
        a += b * P.beta[d]
        b *= P.p[d]
    return a, b


def _solve(params, P, twisted, best):
    states = (0, 1) if twisted else (0,)
    nxt = (lambda t, c: (t + c) % 2) if twisted else (lambda t, c: 0)
    maps = {(t, c): block_map(params, P, c, t, twisted) for t in states for c in params.Abar}
    policy = {t: params.Abar[0] for t in states}
    for _ in range(64):
        # evaluate the policy: x_t = a + b x_{next}
        if twisted:
            (a0, b0), (a1, b1) = maps[0, policy[0]], maps[1, policy[1]]
            n0, n1 = nxt(0, policy[0]), nxt(1, policy[1])
            # x0 = a0 + b0 x_{n0}, x1 = a1 + b1 x_{n1}
            if n0 == 0 and n1 == 1:
                x = {0: a0 / (1 - b0), 1: a1 / (1 - b1)}
            elif n0 == 0:
                x0 = a0 / (1 - b0)
                x = {0: x0, 1: a1 + b1 * x0}
            elif n1 == 1:
                x1 = a1 / (1 - b1)
                x = {0: a0 + b0 * x1, 1: x1}
            else:
                x0 = (a0 + b0 * a1) / (1 - b0 * b1)
                x = {0: x0, 1: a1 + b1 * x0}
        else:
            a0, b0 = maps[0, policy[0]]
            x = {0: a0 / (1 - b0)}
        changed = False
        for t in states:
            vals = {c: maps[t, c][0] + maps[t, c][1] * x[nxt(t, c)] for c in params.Abar}
            target = best(vals.values())
            if vals[policy[t]] != target:
                policy[t] = min(c for c in params.Abar if vals[c] == target)
                changed = True
        if not changed:
            return x, policy
    raise RuntimeError("policy iteration did not converge")


@lru_cache(maxsize=256)
def tail_extrema(params: SystemParams, P: ProbVector, twisted: bool = True) -> TailExtrema:
    lo, lo_pol = _solve(params, P, twisted, min)
    hi, hi_pol = _solve(params, P, twisted, max)
    if twisted:
        return TailExtrema((lo[0], lo[1]), (hi[0], hi[1]), (lo_pol[0], lo_pol[1]), (hi_pol[0], hi_pol[1]))
    return TailExtrema((lo[0], lo[0]), (hi[0], hi[0]), (lo_pol[0], lo_pol[0]), (hi_pol[0], hi_pol[0]))


def extremal_blocks(params: SystemParams, policy: tuple[int, int], state: int,
                    twisted: bool = True) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The eventually periodic block sequence generated by following ``policy``."""
    seen: dict[int, int] = {}
    blocks: list[int] = []
    t = state
    while t not in seen:
        seen[t] = len(blocks)
        c = policy[t]
        blocks.append(c)
        t = (t + c) % 2 if twisted else 0
    first = seen[t]
    return tuple(blocks[:first]), tuple(blocks[first:])


def extremal_word(params: SystemParams, policy: tuple[int, int], state: int,
                  twisted: bool = True) -> DigitSeq:
    """P-digit word (already complemented) attaining the extremum from ``state``."""
    head, cycle = extremal_blocks(params, policy, state, twisted)
    out_head, out_cycle = [], []
    t = state
    for c in head:
        out_head.extend(block_digits(params, c, t, twisted))
        t = (t + c) % 2 if twisted else 0
    for c in cycle:
        out_cycle.extend(block_digits(params, c, t, twisted))
        t = (t + c) % 2 if twisted else 0
    return DigitSeq(tuple(out_head), tuple(out_cycle))


# Closed-form extremal words, keyed by set and side.
# These are kept to be checked against the solver, never trusted on their own.
def tabulated_word(params: SystemParams, which: str, side: str) -> DigitSeq:
    s, u = params.s, params.u
    if which == "under":
        if side == "inf":
            if u == 0:
                return DigitSeq((s - 2,), (0, s - 3))
            if u == 1:
                return DigitSeq((s - 2, 1, s - 4), (1, s - 3))
            return DigitSeq((), (s - 1 - u, 2))
        if u in (0, 1):
            return DigitSeq((), (s - 1 - u, 2))
        return DigitSeq((s - 2,), (u, s - 3))
    if which == "over":
        if side == "inf":
            if u in (0, 1):
                return DigitSeq((), (u, s - 3))
            return DigitSeq((1,), (s - 1 - u, 2))
        if u == 0:
            return DigitSeq((1,), (s - 1, 2))
        if u == 1:
            return DigitSeq((1, s - 2, 3), (s - 2, 2))
        return DigitSeq((), (u, s - 3))
    if which == "nega_s":
        if side == "inf":
            if u == 0:
                return DigitSeq((1,), (0, 2))
            if u == 1:
                return DigitSeq((1, 1, 3), (1, 2))
            return DigitSeq((), (u, 2))
        if u in (0, 1):
            return DigitSeq((), (u, 2))
        return DigitSeq((1,), (u, 2))
    raise ValueError(f"unknown set {which!r}")
