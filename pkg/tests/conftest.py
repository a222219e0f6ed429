import numpy as np
import pytest

from divider.reference_nets import negate_output, two_line_net


@pytest.fixture
def two_line():
    return two_line_net()


@pytest.fixture
def two_line_negated():
    return negate_output(two_line_net())


def random_simplified_net(seed, hidden=(32,)):
    from divider.net import PolicyNet
    rng = np.random.default_rng(seed)
    return PolicyNet.random(hidden=hidden, rng=rng, simplified=True)
