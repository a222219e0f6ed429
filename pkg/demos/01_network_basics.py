#!/usr/bin/env python3
"""Tour of the policy-network engine: forward passes, symmetry, gradients,
and the weight-file round trip."""

import numpy as np

from divider import PolicyNet, two_line_net

net = two_line_net()
print("hand-built two-line net, layers:", " -> ".join(map(str, net.dims)))

s = np.array([-10.0, 0.0])
print(f"mu({s}) = {net.mu(s):.6f}")
print(f"act({s}) = {net.act(s):.6f} m/s^2  (action bound {net.action_bound})")

# simplified nets are odd: negating the state negates the action
print("odd symmetry:", net.act(s), "vs", -net.act(-s))

# reverse-mode gradient against a finite-difference probe
grads, dmu_ds = net.gradient(s)
h = 1e-6
fd = [(net.forward(s + np.eye(2)[i] * h) - net.forward(s - np.eye(2)[i] * h))
      / (2 * h) for i in range(2)]
print("dmu/ds analytic:", dmu_ds, " finite-diff:", np.array(fd))

# fresh random nets use the paper-scale architecture by default
fresh = PolicyNet.random(rng=np.random.default_rng(0))
print("fresh net layers:", fresh.dims, "simplified:", fresh.simplified)

# weights round-trip through a self-describing JSON document
fresh.save("/tmp/demo_net.json")
again = PolicyNet.load("/tmp/demo_net.json")
probe = np.random.default_rng(1).uniform(-5, 5, size=(4, 2))
print("round trip exact:", np.array_equal(fresh.act(probe), again.act(probe)))
