import itertools

import pytest

from dirac_antidot.params import DimensionlessConfig, QuantumNumbers

# n <= 3, |m| <= 5, b in {0, 10}, alpha in {0, 8}: 4 * 11 * 2 * 2 = 176 states
SWEEP_B = (0.0, 10.0)
SWEEP_ALPHA = (0.0, 8.0)


def sweep_states(w, n_max=3, m_max=5):
    for b, alpha in itertools.product(SWEEP_B, SWEEP_ALPHA):
        cfg = DimensionlessConfig.reduced(alpha=alpha, b=b, w=w)
        for n in range(n_max + 1):
            for m in range(-m_max, m_max + 1):
                yield cfg, QuantumNumbers(n, m)


@pytest.fixture
def natural():
    """omega = 1 in natural units, no flux, no antidot."""
    return DimensionlessConfig.reduced(alpha=0.0, b=0.0, w=1.0)
