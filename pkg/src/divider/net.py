"""Minimal fully connected network engine.

Implements the two network families used throughout the package: the
simplified policy network (bias-free, tanh everywhere, odd in its input)
and the general biased network with ReLU hidden layers.  Forward passes
are vectorised over batches of states; gradients are plain reverse-mode
backprop.  Everything is float64.
"""

import json

import numpy as np

SCHEMA_VERSION = "v1"
DEFAULT_ACTION_BOUND = 5.0


def _activate(name, x):
    if name == "tanh":
        return np.tanh(x)
    if name == "relu":
        return np.maximum(x, 0.0)
    if name == "linear":
        return x
    raise ValueError("unknown activation '%s'" % name)


class Mlp:
    """Stack of fully connected layers z_i = act(W_i z_{i-1} + b_i).

    `activation` applies to every layer except the last; the last layer
    uses `output_activation` ('tanh' for bounded policy heads, 'linear'
    for critics/value functions).  Weight matrices have shape
    (n_i, n_{i-1}); a bias entry of None means no bias in that layer.
    """

    def __init__(self, weights, biases=None, activation="tanh",
                 output_activation="tanh"):
        if activation not in ("tanh", "relu"):
            raise ValueError("activation must be 'tanh' or 'relu'")
        if output_activation not in ("tanh", "linear"):
            raise ValueError("output_activation must be 'tanh' or 'linear'")
        self.weights = [np.asarray(w, dtype=np.float64) for w in weights]
        if not self.weights:
            raise ValueError("network needs at least one layer")
        if biases is None:
            biases = [None] * len(self.weights)
        if len(biases) != len(self.weights):
            raise ValueError("bias list length does not match layer count")
        self.biases = [None if b is None else np.asarray(b, dtype=np.float64)
                       for b in biases]
        self.activation = activation
        self.output_activation = output_activation
        self._validate_shapes()

    def _validate_shapes(self):
        for i, w in enumerate(self.weights):
            if w.ndim != 2 or w.shape[0] < 1:
                raise ValueError("layer %d weight matrix must be 2-d" % i)
            if not np.isfinite(w).all():
                raise ValueError("layer %d has non-finite weights" % i)
            if i > 0 and w.shape[1] != self.weights[i - 1].shape[0]:
                raise ValueError("shape mismatch between layers %d and %d"
                                 % (i - 1, i))
            b = self.biases[i]
            if b is not None:
                if b.shape != (w.shape[0],):
                    raise ValueError("layer %d bias shape mismatch" % i)
                if not np.isfinite(b).all():
                    raise ValueError("layer %d has non-finite bias" % i)

    @property
    def dims(self):
        return [self.weights[0].shape[1]] + [w.shape[0] for w in self.weights]

    @property
    def n_layers(self):
        return len(self.weights)

    def _layer_activation(self, i):
        return self.output_activation if i == self.n_layers - 1 else self.activation

    def forward(self, x):
        """Evaluate the network; accepts a single input or an (N, n0) batch."""
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        z = x[None, :] if single else x
        for i, w in enumerate(self.weights):
            pre = z @ w.T
            if self.biases[i] is not None:
                pre = pre + self.biases[i]
            z = _activate(self._layer_activation(i), pre)
        if z.shape[1] == 1:
            z = z[:, 0]
        return float(z[0]) if single else z

    def forward_cache(self, x):
        """Batched forward keeping the intermediates needed for backprop."""
        z = np.asarray(x, dtype=np.float64)
        if z.ndim == 1:
            z = z[None, :]
        zs = [z]
        pres = []
        for i, w in enumerate(self.weights):
            pre = zs[-1] @ w.T
            if self.biases[i] is not None:
                pre = pre + self.biases[i]
            pres.append(pre)
            zs.append(_activate(self._layer_activation(i), pre))
        out = zs[-1][:, 0] if zs[-1].shape[1] == 1 else zs[-1]
        return out, (zs, pres)

    def _deriv(self, i, zs, pres):
        # activation derivative of layer i, reusing the cached outputs
        name = self._layer_activation(i)
        if name == "tanh":
            z = zs[i + 1]
            return 1.0 - z * z
        if name == "relu":
            return (pres[i] > 0.0).astype(np.float64)
        return None  # linear

    def backprop(self, cache, dout):
        """Reverse pass.  Returns ([(dW, db), ...] per layer, dL/dinput)."""
        zs, pres = cache
        dout = np.asarray(dout, dtype=np.float64)
        if dout.ndim == 1:
            dout = dout[:, None]
        deriv = self._deriv(self.n_layers - 1, zs, pres)
        delta = dout if deriv is None else dout * deriv
        grads = [None] * self.n_layers
        for i in range(self.n_layers - 1, -1, -1):
            dw = delta.T @ zs[i]
            db = delta.sum(axis=0) if self.biases[i] is not None else None
            grads[i] = (dw, db)
            if i > 0:
                deriv = self._deriv(i - 1, zs, pres)
                delta = delta @ self.weights[i]
                if deriv is not None:
                    delta *= deriv
            else:
                din = delta @ self.weights[0]
        return grads, din

    def parameters(self):
        """Flat list of parameter arrays (weights then bias per layer)."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            if b is not None:
                out.append(b)
        return out

    def flat_grads(self, grads):
        """Flatten a backprop grad structure to match parameters() order."""
        out = []
        for (dw, db), b in zip(grads, self.biases):
            out.append(dw)
            if b is not None:
                out.append(db)
        return out

    def copy(self):
        return type(self)(**self._ctor_kwargs())

    def _ctor_kwargs(self):
        return dict(weights=[w.copy() for w in self.weights],
                    biases=[None if b is None else b.copy()
                            for b in self.biases],
                    activation=self.activation,
                    output_activation=self.output_activation)

    @staticmethod
    def _random_layers(dims, rng, with_bias):
        weights, biases = [], []
        for n_in, n_out in zip(dims[:-1], dims[1:]):
            bound = 1.0 / np.sqrt(n_in)
            weights.append(rng.uniform(-bound, bound, size=(n_out, n_in)))
            biases.append(rng.uniform(-bound, bound, size=n_out)
                          if with_bias else None)
        return weights, biases

    @classmethod
    def random(cls, dims, rng, activation="relu", output_activation="linear",
               with_bias=True):
        weights, biases = cls._random_layers(dims, rng, with_bias)
        return cls(weights, biases, activation=activation,
                   output_activation=output_activation)


class PolicyNet(Mlp):
    """Control policy (p, v) -> acceleration.

    The raw head mu(s) is a tanh output in [-1, 1]; act(s) scales it by the
    acceleration bound.  simplified=True enforces the bias-free all-tanh
    structure (which makes the policy odd in the state).  Instances are
    immutable once built except through the training loop, which is the
    single writer.
    """

    def __init__(self, weights, biases=None, activation="tanh",
                 simplified=True, action_bound=DEFAULT_ACTION_BOUND):
        super().__init__(weights, biases, activation=activation,
                         output_activation="tanh")
        if self.dims[0] != 2:
            raise ValueError("policy input dimension must be 2, got %d"
                             % self.dims[0])
        if self.dims[-1] != 1:
            raise ValueError("policy output dimension must be 1, got %d"
                             % self.dims[-1])
        if not (np.isfinite(action_bound) and action_bound > 0):
            raise ValueError("action bound must be positive and finite")
        self.action_bound = float(action_bound)
        self.simplified = bool(simplified)
        if self.simplified:
            if self.activation != "tanh":
                raise ValueError(
                    "simplified flag violation: activation must be tanh")
            normalized = []
            for i, b in enumerate(self.biases):
                if b is not None and np.any(b != 0.0):
                    raise ValueError(
                        "simplified flag violation: nonzero bias in layer %d" % i)
                normalized.append(None)
            self.biases = normalized

    def _ctor_kwargs(self):
        return dict(weights=[w.copy() for w in self.weights],
                    biases=[None if b is None else b.copy()
                            for b in self.biases],
                    activation=self.activation,
                    simplified=self.simplified,
                    action_bound=self.action_bound)

    def mu(self, state):
        """Unscaled head output in [-1, 1]; batched like forward()."""
        state = np.asarray(state, dtype=np.float64)
        if not np.isfinite(state).all():
            raise ValueError("non-finite state")
        return self.forward(state)

    def act(self, state):
        """Commanded acceleration a = action_bound * mu(state), in m/s^2."""
        mu = self.mu(state)
        return self.action_bound * mu

    def gradient(self, state):
        """d mu / d theta per layer and d mu / d state at a single state.

        Returns ([(dW, db-or-None) per layer], dmu_dstate).
        """
        state = np.asarray(state, dtype=np.float64)
        if state.shape != (2,):
            raise ValueError("gradient expects a single (p, v) state")
        if not np.isfinite(state).all():
            raise ValueError("non-finite state")
        _, cache = self.forward_cache(state)
        grads, din = self.backprop(cache, np.ones(1))
        return grads, din[0]

    @classmethod
    def random(cls, hidden=(32, 32, 32), rng=None, simplified=True,
               activation=None, action_bound=DEFAULT_ACTION_BOUND):
        """Fresh policy, entries uniform in +-1/sqrt(fan_in).

        Simplified nets are bias-free tanh; general nets default to biased
        ReLU hidden layers (the output stays tanh either way).
        """
        if rng is None:
            rng = np.random.default_rng(0)
        if activation is None:
            activation = "tanh" if simplified else "relu"
        dims = [2] + list(hidden) + [1]
        weights, biases = cls._random_layers(dims, rng, with_bias=not simplified)
        return cls(weights, biases, activation=activation,
                   simplified=simplified, action_bound=action_bound)

    def save(self, path):
        """Write the self-describing v1 weight file (17 significant digits)."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self._to_document())

    def _to_document(self):
        def fmt(x):
            return format(float(x), ".17g")

        lines = ["{"]
        lines.append('  "schema": "%s",' % SCHEMA_VERSION)
        lines.append('  "activation": "%s",' % self.activation)
        lines.append('  "simplified": %s,' % ("true" if self.simplified else "false"))
        lines.append('  "action_bound": %s,' % fmt(self.action_bound))
        lines.append('  "layers": [')
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            flat = ", ".join(fmt(x) for x in w.ravel())  # row-major
            bias = "null" if b is None else "[%s]" % ", ".join(fmt(x) for x in b)
            tail = "," if i < self.n_layers - 1 else ""
            lines.append('    {"shape": [%d, %d], "weights": [%s], "bias": %s}%s'
                         % (w.shape[0], w.shape[1], flat, bias, tail))
        lines.append("  ]")
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValueError("weight file is not valid JSON: %s" % exc)
        return cls.from_document(doc)

    @classmethod
    def from_document(cls, doc):
        if not isinstance(doc, dict) or doc.get("schema") != SCHEMA_VERSION:
            raise ValueError("schema mismatch: expected weight file schema '%s'"
                             % SCHEMA_VERSION)
        for key in ("activation", "simplified", "action_bound", "layers"):
            if key not in doc:
                raise ValueError("schema mismatch: missing field '%s'" % key)
        weights, biases = [], []
        for i, layer in enumerate(doc["layers"]):
            shape = tuple(layer.get("shape", ()))
            flat = np.asarray(layer.get("weights", []), dtype=np.float64)
            if len(shape) != 2 or flat.size != shape[0] * shape[1]:
                raise ValueError("shape mismatch in layer %d" % i)
            weights.append(flat.reshape(shape))
            bias = layer.get("bias")
            biases.append(None if bias is None
                          else np.asarray(bias, dtype=np.float64))
        return cls(weights, biases, activation=doc["activation"],
                   simplified=bool(doc["simplified"]),
                   action_bound=float(doc["action_bound"]))
