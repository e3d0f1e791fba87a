import random

from hypothesis import strategies as st

from forcinglab.ordinals import OMEGA, Ordinal, omega_pow

# exponents of CNF terms below w^(w+1): naturals and w itself
EXPONENTS = [Ordinal.of(k) for k in range(5)] + [OMEGA]


@st.composite
def ordinals(draw, max_terms: int = 4, max_coef: int = 4):
    picks = draw(st.lists(st.sampled_from(EXPONENTS), max_size=max_terms, unique=True))
    picks.sort(reverse=True)
    return Ordinal(tuple((e, draw(st.integers(1, max_coef))) for e in picks))


def infinite(a: Ordinal) -> bool:
    return not a.is_finite


def all_small_ordinals(max_coef: int = 2):
    """Every ordinal whose CNF uses the exponents above with coefficients up to max_coef."""
    out = [Ordinal()]
    for e in sorted(EXPONENTS):
        out = out + [omega_pow(e, c) + a for a in out if not a.terms or a.terms[0][0] < e for c in range(1, max_coef + 1)]
    return sorted(set(out))


def rng(seed=0):
    return random.Random(seed)
