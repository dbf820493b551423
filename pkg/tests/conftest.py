import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from gaugelie.fixtures import FIXTURES, random_basis_change
from gaugelie.graded import GradedLinearMap, GradedVectorSpace
from gaugelie.inversion import invert_linear

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

rationals = st.builds(Fraction, st.integers(-3, 3), st.sampled_from([1, 2, 3]))


@pytest.fixture(params=sorted(FIXTURES))
def fixture_name(request):
    return request.param


def random_complex(seed, max_dim=7):
    """Random finite complex: a direct sum of ``x → y`` pieces and cycles,
    put in a random basis.  Returns ``(space, d, betti)``."""
    rng = random.Random(seed)
    pairs, entries, betti = [], {}, {}
    n = 0
    while n < rng.randint(1, max_dim):
        deg = rng.randint(-1, 2)
        if rng.random() < 0.5:
            pairs += [(f"u{n}", deg), (f"v{n}", deg + 1)]
            entries[f"u{n}"] = {f"v{n}": 1}
            n += 2
        else:
            pairs.append((f"c{n}", deg))
            betti[deg] = betti.get(deg, 0) + 1
            n += 1
    space = GradedVectorSpace(pairs)
    d0 = GradedLinearMap.from_labels(space, space, 1, entries)
    T = random_basis_change(rng, space)
    d = invert_linear(T).compose(d0).compose(T)
    return space, d, betti
