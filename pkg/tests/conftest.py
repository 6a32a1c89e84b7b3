import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cobordism.algebra import Monomial, PolyF2, code_degree
from cobordism.mass import registry

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=600)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

GENS = [0] + registry(60)


@st.composite
def monomials(draw, t_max=60, max_factors=4):
    """Random monomial with t-degree at most t_max (h0 allowed)."""
    pairs = {}
    t = 0
    for _ in range(draw(st.integers(0, max_factors))):
        code = draw(st.sampled_from(GENS))
        gt = code_degree(code).t
        if t + gt > t_max:
            continue
        pairs[code] = pairs.get(code, 0) + 1
        t += gt
    return Monomial(sorted(pairs.items()))


def polys(t_max=60, max_terms=5):
    return st.lists(monomials(t_max), max_size=max_terms).map(PolyF2)
