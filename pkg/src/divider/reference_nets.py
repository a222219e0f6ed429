"""Hand-built networks used as analysis fixtures and in the demos."""

import numpy as np

from .net import PolicyNet


def two_line_net(action_bound=5.0):
    """Tiny 2-2-2-1 simplified net with one strong and one weak division line.

    The first-layer rows are (1/2, sqrt(3)/2) and (0, 1), so the two division
    lines run along (sqrt(3)/2, -1/2) and (1, 0).  The later layers make the
    first line dominate the output while the second barely registers.
    """
    w1 = np.array([[0.5, np.sqrt(3.0) / 2.0],
                   [0.0, 1.0]])
    w2 = np.array([[2.0, -1.0],
                   [2.0, 0.5]])
    w3 = np.array([[-1.0, -1.0]])
    return PolicyNet([w1, w2, w3], simplified=True, action_bound=action_bound)


def negate_output(net):
    """Copy of a net with the last layer negated (flips the whole policy)."""
    flipped = net.copy()
    flipped.weights[-1] = -flipped.weights[-1]
    return flipped
