"""Countable ordinals in Cantor normal form.

An ordinal is a descending tuple of ``(exponent, coefficient)`` terms where
each exponent is itself an :class:`Ordinal`.  Only ordinals below a ceiling
(default ``w^(w+1)``) take part in arithmetic; the ceiling value itself may be
built so that it can serve as a "top" element.
"""

from __future__ import annotations

import re


class OrdinalOverflow(ArithmeticError):
    pass


class Ordinal:
    __slots__ = ("terms", "key", "_hash")

    def __init__(self, terms=()):
        terms = tuple(terms)
        prev = None
        for e, c in terms:
            if not isinstance(e, Ordinal):
                raise TypeError("exponent must be an Ordinal")
            if not isinstance(c, int) or c < 1:
                raise ValueError("coefficients must be positive integers")
            if prev is not None and not e < prev:
                raise ValueError("exponents must be strictly decreasing")
            prev = e
        self.terms = terms
        # Lexicographic CNF comparison reduces to nested tuple comparison.
        self.key = tuple((e.key, c) for e, c in terms)
        self._hash = hash(self.key)

    @classmethod
    def of(cls, n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("negative natural")
        if n < len(_NATS):
            return _NATS[n]
        return cls(((ZERO, n),))

    def __eq__(self, other):
        return isinstance(other, Ordinal) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __le__(self, other):
        return self.key <= other.key

    def __gt__(self, other):
        return self.key > other.key

    def __ge__(self, other):
        return self.key >= other.key

    def __repr__(self):
        return f"Ordinal({render(self)!r})"

    def __str__(self):
        return render(self)

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not self.terms[0][0].terms)

    def as_int(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def __add__(self, other: "Ordinal") -> "Ordinal":
        if isinstance(other, int):
            other = Ordinal.of(other)
        if not other.terms:
            return self
        lead, lc = other.terms[0]
        kept = []
        for e, c in self.terms:
            if e > lead:
                kept.append((e, c))
            elif e == lead:
                kept.append((e, c + lc))
                return Ordinal(kept + list(other.terms[1:]))
            else:
                break
        return Ordinal(kept + list(other.terms))

    def tail_split(self):
        """Split into (part with infinite exponents, part with finite exponents)."""
        big = [(e, c) for e, c in self.terms if not e.is_finite]
        small = [(e, c) for e, c in self.terms if e.is_finite]
        return Ordinal(big), Ordinal(small)


def _make_nats(k):
    zero = Ordinal()
    out = [zero]
    for n in range(1, k):
        out.append(Ordinal(((zero, n),)))
    return out


_NATS = _make_nats(64)
ZERO = _NATS[0]
ONE = _NATS[1]
OMEGA = Ordinal(((ONE, 1),))


def omega_pow(e, c: int = 1) -> Ordinal:
    if isinstance(e, int):
        e = Ordinal.of(e)
    return Ordinal(((e, c),))


OMEGA_OMEGA = omega_pow(OMEGA)
DEFAULT_CEILING = omega_pow(OMEGA + ONE)


def _check(a: Ordinal, ceiling: Ordinal):
    if not a < ceiling:
        raise OrdinalOverflow(f"{a} is not below the ceiling {ceiling}")


def _one_plus(e: Ordinal) -> Ordinal:
    return e + ONE if e.is_finite else e


def _minus_one_left(e: Ordinal) -> Ordinal:
    # the unique e' with 1 + e' = e, for e >= 1
    if e.is_finite:
        return Ordinal.of(e.as_int() - 1)
    return e


def omega_mul(a: Ordinal, ceiling: Ordinal = DEFAULT_CEILING) -> Ordinal:
    """Left multiplication by omega."""
    out = Ordinal(tuple((_one_plus(e), c) for e, c in a.terms))
    _check(out, ceiling)
    return out


_H_CACHE: dict = {}


def h_of(a: Ordinal, ceiling: Ordinal = DEFAULT_CEILING) -> Ordinal:
    """The unique g with w*g <= a < w*(g+1)."""
    hit = _H_CACHE.get(a) if ceiling is DEFAULT_CEILING else None
    if hit is not None:
        return hit
    _check(a, ceiling)
    out = Ordinal(tuple((_minus_one_left(e), c) for e, c in a.terms if e.terms))
    if ceiling is DEFAULT_CEILING and len(_H_CACHE) < 1_000_000:
        _H_CACHE[a] = out
    return out


def is_in_Ch(d: Ordinal, ceiling: Ordinal = DEFAULT_CEILING) -> bool:
    _check(d, ceiling)
    # w*d == d exactly when every exponent is infinite
    return all(not e.is_finite for e, _ in d.terms)


def next_in_Ch(a: Ordinal, ceiling: Ordinal = DEFAULT_CEILING) -> Ordinal:
    big, _ = a.tail_split()
    out = big + OMEGA_OMEGA
    _check(out, ceiling)
    return out


def block_start(height: Ordinal, ceiling: Ordinal = DEFAULT_CEILING) -> Ordinal:
    """First ordinal of the h-block of the given height."""
    return omega_mul(height, ceiling)


def ch_point(k: int) -> Ordinal:
    """The k-th nonzero member of C_h below the default ceiling, w^w * k."""
    return ZERO if k == 0 else omega_pow(OMEGA, k)


# text format ---------------------------------------------------------------

def render(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    return "+".join(_render_term(e, c) for e, c in a.terms)


def _render_term(e: Ordinal, c: int) -> str:
    if not e.terms:
        return str(c)
    if e == ONE:
        base = "w"
    elif e.is_finite or e == OMEGA:
        base = f"w^{render(e)}"
    else:
        base = f"w^({render(e)})"
    return base if c == 1 else f"{base}*{c}"


_TOKEN = re.compile(r"\s*(w|\d+|[()+*^])")


def parse(text: str) -> Ordinal:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad ordinal text {text!r}")
        tokens.append(m.group(1))
        pos = m.end()
    value, rest = _parse_sum(tokens, 0)
    if rest != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return value


def _parse_sum(toks, i):
    total, i = _parse_term(toks, i)
    while i < len(toks) and toks[i] == "+":
        t, i = _parse_term(toks, i + 1)
        total = total + t
    return total, i


def _parse_term(toks, i):
    if i >= len(toks):
        raise ValueError("unexpected end of ordinal text")
    tok = toks[i]
    if tok.isdigit():
        return Ordinal.of(int(tok)), i + 1
    if tok != "w":
        raise ValueError(f"unexpected token {tok!r}")
    i += 1
    exp = ONE
    if i < len(toks) and toks[i] == "^":
        i += 1
        if i < len(toks) and toks[i] == "(":
            exp, i = _parse_sum(toks, i + 1)
            if i >= len(toks) or toks[i] != ")":
                raise ValueError("unbalanced parenthesis")
            i += 1
        elif i < len(toks) and toks[i] == "w":
            exp, i = OMEGA, i + 1
        elif i < len(toks) and toks[i].isdigit():
            exp, i = Ordinal.of(int(toks[i])), i + 1
        else:
            raise ValueError("bad exponent")
    coef = 1
    if i < len(toks) and toks[i] == "*":
        if i + 1 >= len(toks) or not toks[i + 1].isdigit():
            raise ValueError("bad coefficient")
        coef = int(toks[i + 1])
        i += 2
    if coef == 0:
        return ZERO, i
    return omega_pow(exp, coef), i
