"""Desk-scale trainers: deterministic-policy-gradient (DDPG-style) and PPO.

Both run single-threaded on pure numpy with a fixed update order, so a
config plus seed reproduces the final weights bit for bit.  The actor is
the 3x32 policy network (simplified bias-free tanh by default, biased
ReLU/tanh when simplified=False); critics and value functions are biased
ReLU nets, which are plumbing and never analysed.
"""

import dataclasses
import json
import math
from dataclasses import dataclass

import numpy as np

from .env import step
from .net import DEFAULT_ACTION_BOUND, Mlp, PolicyNet

ACTOR_HIDDEN = (32, 32, 32)
CRITIC_HIDDEN = (64, 64)
TARGET_TAU = 0.005
NOISE_DECAY = 0.999
LR_DECAY = 0.9985          # per-episode DDPG lr annealing; stops late drift
WARMUP_STEPS = 6000        # uniform-random actions before DDPG updates start
CRITIC_BURN_IN = 4000      # critic-only updates before the actor moves
UPDATE_EVERY = 2           # one DDPG update per this many env steps
# deterministic evaluation for snapshot selection: fixed starts, no rng
EVAL_EVERY = 25
EVAL_STARTS = ((-10.0, 0.0), (-6.0, 0.5), (-3.0, -0.5), (5.0, 0.0),
               (9.0, -0.5))
# critic-side conditioning only; the actor always sees raw states
CRITIC_STATE_SCALE = 10.0
REWARD_SCALE = 100.0
GRAD_CLIP = 1.0
PPO_LOG_STD_INIT = -0.5
GAE_LAMBDA = 0.95
DIVERGENCE_WINDOW = 50
SATURATION_LEVEL = 0.99


class TrainingDiverged(RuntimeError):
    """Raised when the actor saturates everywhere while returns worsen."""


@dataclass
class TrainConfig:
    algorithm: str = "ddpg"            # "ddpg" | "ppo"
    seed: int = 0
    episodes: int = 2000
    steps_per_episode: int = 400
    dt: float = 0.05
    gamma: float = 0.99
    actor_lr: float = 1e-4
    critic_lr: float = 1e-3
    replay_capacity: int = 100_000
    batch_size: int = 64
    clip_ratio: float = 0.2
    epochs_per_update: int = 10
    rollout_batch: int = 2048
    exploration_noise_std: float = 0.5
    init_p_range: tuple = (-10.0, 10.0)
    init_v_range: tuple = (-1.0, 1.0)
    reward_weights: tuple = (1.0, 0.1, 0.001)
    simplified: bool = True

    def validate(self):
        if self.algorithm not in ("ddpg", "ppo"):
            raise ValueError("invariant violation: algorithm must be ddpg or ppo")
        if not (0.0 < self.gamma < 1.0):
            raise ValueError("invariant violation: discount")
        if not (self.actor_lr > 0 and self.critic_lr > 0):
            raise ValueError("invariant violation: learning rates must be positive")
        for name in ("init_p_range", "init_v_range"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ValueError("invariant violation: %s must be ordered" % name)
        if self.episodes < 0 or self.steps_per_episode < 1:
            raise ValueError("invariant violation: episode counts")
        if self.dt <= 0:
            raise ValueError("invariant violation: dt")
        if self.batch_size < 1 or self.rollout_batch < 1:
            raise ValueError("invariant violation: batch sizes")
        if not (0.0 < self.clip_ratio < 1.0):
            raise ValueError("invariant violation: clip_ratio")
        return self


def load_config(path):
    """Read a JSON key-value config file into a validated TrainConfig."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    known = {f.name for f in dataclasses.fields(TrainConfig)}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise ValueError("unknown config fields: %s" % ", ".join(unknown))
    for name in ("init_p_range", "init_v_range", "reward_weights"):
        if name in doc:
            doc[name] = tuple(doc[name])
    return TrainConfig(**doc).validate()


def save_config(config, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dataclasses.asdict(config), fh, indent=2)
        fh.write("\n")


def reward(state, a, weights=(1.0, 0.1, 0.001)):
    """Quadratic regulation cost -(w_p p^2 + w_v v^2 + w_a a^2)."""
    p, v = float(state[0]), float(state[1])
    a = float(a)
    if not (math.isfinite(p) and math.isfinite(v) and math.isfinite(a)):
        raise ValueError("non-finite reward input")
    w_p, w_v, w_a = weights
    return -(w_p * p * p + w_v * v * v + w_a * a * a)


def write_curve_csv(curve, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("episode,return\n")
        for ep, ret in curve:
            fh.write("%d,%.9g\n" % (ep, ret))


class Adam:
    """Adam over one flat parameter vector, updated in place."""

    def __init__(self, flat, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = np.zeros_like(flat)
        self.v = np.zeros_like(flat)
        self.t = 0

    def step(self, flat, grad):
        self.t += 1
        bc1 = 1.0 - self.beta1 ** self.t
        bc2 = 1.0 - self.beta2 ** self.t
        m, v = self.m, self.v
        m *= self.beta1
        m += (1.0 - self.beta1) * grad
        v *= self.beta2
        v += (1.0 - self.beta2) * (grad * grad)
        flat -= (self.lr / bc1) * m / (np.sqrt(v / bc2) + self.eps)


class FlatParams:
    """One contiguous parameter vector backing a network's layer arrays.

    The net's weight and bias arrays are rebound to views into `flat`, so
    forward/backprop see updates made on the flat vector and vice versa.
    """

    def __init__(self, net):
        self.net = net
        total = sum(a.size for a in net.parameters())
        self.flat = np.empty(total)
        off = 0
        for i, w in enumerate(net.weights):
            self.flat[off:off + w.size] = w.ravel()
            net.weights[i] = self.flat[off:off + w.size].reshape(w.shape)
            off += w.size
            b = net.biases[i]
            if b is not None:
                self.flat[off:off + b.size] = b
                net.biases[i] = self.flat[off:off + b.size]
                off += b.size
        self._grad = np.empty(total)

    def gather_grads(self, grads):
        """Pack a backprop grad structure into the flat grad buffer."""
        out = self._grad
        off = 0
        for (dw, db), b in zip(grads, self.net.biases):
            out[off:off + dw.size] = dw.ravel()
            off += dw.size
            if b is not None:
                out[off:off + db.size] = db
                off += db.size
        return out


class ReplayBuffer:
    def __init__(self, capacity):
        self.capacity = capacity
        self.s = np.zeros((capacity, 2))
        self.a = np.zeros(capacity)
        self.r = np.zeros(capacity)
        self.s2 = np.zeros((capacity, 2))
        self.idx = 0
        self.size = 0

    def __len__(self):
        return self.size

    def add(self, s, a, r, s2):
        k = self.idx
        self.s[k] = s
        self.a[k] = a
        self.r[k] = r
        self.s2[k] = s2
        self.idx = (k + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, rng, n):
        idx = rng.integers(0, self.size, size=n)
        return self.s[idx], self.a[idx], self.r[idx], self.s2[idx]


class _DivergenceGuard:
    """Aborts when the actor saturates on every probe state for a long
    stretch while the return trend worsens."""

    def __init__(self, config):
        ps = np.linspace(config.init_p_range[0], config.init_p_range[1], 5)
        vs = np.linspace(config.init_v_range[0], config.init_v_range[1], 3)
        self.probes = np.array([[p, v] for p in ps for v in vs])
        self.run = 0

    def check(self, actor, curve):
        mu = np.atleast_1d(actor.forward(self.probes))
        self.run = self.run + 1 if np.all(np.abs(mu) > SATURATION_LEVEL) else 0
        if self.run >= DIVERGENCE_WINDOW and len(curve) >= 2 * DIVERGENCE_WINDOW:
            recent = np.median([r for _, r in curve[-DIVERGENCE_WINDOW:]])
            before = np.median([r for _, r in
                                curve[-2 * DIVERGENCE_WINDOW:-DIVERGENCE_WINDOW]])
            if recent < before:
                raise TrainingDiverged("training diverged")


def _fresh_actor(config, rng):
    return PolicyNet.random(ACTOR_HIDDEN, rng=rng, simplified=config.simplified)


def _eval_score(actor, config):
    """Return of the deterministic policy over the fixed probe starts."""
    total = 0.0
    for s0 in EVAL_STARTS:
        state = s0
        for _ in range(config.steps_per_episode):
            a = actor.act(np.asarray(state))
            total += reward(state, a, config.reward_weights)
            state = step(state, a, config.dt)
    return total


class _BestSnapshot:
    """Keeps the best-scoring actor weights seen at evaluation points.

    Both trainers wander late in training (the deterministic policy orbits
    the optimum as the critic/value shifts), so the returned actor is the
    best deterministic-evaluation checkpoint, not the last-step weights.
    """

    def __init__(self, config, fp_actor):
        self.config = config
        self.fp = fp_actor
        self.best_score = -math.inf
        self.best_flat = None

    def consider(self, ep):
        if (ep + 1) % EVAL_EVERY != 0 and ep + 1 != self.config.episodes:
            return
        score = _eval_score(self.fp.net, self.config)
        if score > self.best_score:
            self.best_score = score
            self.best_flat = self.fp.flat.copy()

    def restore(self):
        if self.best_flat is not None:
            self.fp.flat[:] = self.best_flat
        return self.fp.net


def _soft_update(target, src, tau=TARGET_TAU):
    target.flat *= 1.0 - tau
    target.flat += tau * src.flat


def _clip_grad(grad, max_norm=GRAD_CLIP):
    norm = math.sqrt(float(grad @ grad))
    if norm > max_norm:
        grad *= max_norm / norm
    return grad


def train(config):
    """Run the configured trainer.

    Returns (actor, curve) where curve is a list of (episode, undiscounted
    return).  Deterministic for a fixed config and seed.
    """
    config.validate()
    if config.algorithm == "ddpg":
        return _train_ddpg(config)
    return _train_ppo(config)


# ---------------------------------------------------------------- DDPG


def _train_ddpg(config):
    rng = np.random.default_rng(config.seed)
    ab = DEFAULT_ACTION_BOUND
    actor = _fresh_actor(config, rng)
    critic = Mlp.random((3,) + CRITIC_HIDDEN + (1,), rng,
                        activation="relu", output_activation="linear")
    fp_a = FlatParams(actor)
    fp_c = FlatParams(critic)
    fp_at = FlatParams(actor.copy())
    fp_ct = FlatParams(critic.copy())
    opt_a = Adam(fp_a.flat, config.actor_lr)
    opt_c = Adam(fp_c.flat, config.critic_lr)
    buf = ReplayBuffer(config.replay_capacity)
    guard = _DivergenceGuard(config)
    snapshot = _BestSnapshot(config, fp_a)
    curve = []
    sigma = config.exploration_noise_std
    steps = 0
    updates = 0

    for ep in range(config.episodes):
        state = (rng.uniform(*config.init_p_range),
                 rng.uniform(*config.init_v_range))
        ep_ret = 0.0
        for _ in range(config.steps_per_episode):
            if steps < WARMUP_STEPS:
                a = rng.uniform(-ab, ab)
            else:
                a = actor.act(np.asarray(state)) + sigma * rng.standard_normal()
                a = min(max(a, -ab), ab)
            r = reward(state, a, config.reward_weights)
            nxt = step(state, a, config.dt)
            buf.add(state, a, r, nxt)
            ep_ret += r
            state = nxt
            steps += 1
            if steps >= WARMUP_STEPS and len(buf) >= config.batch_size \
                    and steps % UPDATE_EVERY == 0:
                _ddpg_update(config, ab, fp_a, fp_c, fp_at, fp_ct,
                             opt_a, opt_c, buf, rng,
                             update_actor=updates >= CRITIC_BURN_IN)
                updates += 1
        sigma *= NOISE_DECAY
        opt_a.lr *= LR_DECAY
        opt_c.lr *= LR_DECAY
        curve.append((ep, ep_ret))
        guard.check(actor, curve)
        snapshot.consider(ep)
    return snapshot.restore(), curve


def _critic_input(s, mu):
    # normalized (p, v, a/a_bound) keeps the ReLU critic well conditioned
    out = np.empty((len(mu), 3))
    out[:, :2] = s
    out[:, :2] /= CRITIC_STATE_SCALE
    out[:, 2] = mu
    return out


def _ddpg_update(config, ab, fp_a, fp_c, fp_at, fp_ct, opt_a, opt_c, buf, rng,
                 update_actor=True):
    actor, critic = fp_a.net, fp_c.net
    s, a, r, s2 = buf.sample(rng, config.batch_size)
    n = len(r)

    mu2 = fp_at.net.forward(s2)
    q2 = fp_ct.net.forward(_critic_input(s2, mu2))
    # rewards are nonpositive, so any feasible value is too; the cap stops
    # bootstrapped overestimation from running away
    y = np.minimum(r / REWARD_SCALE + config.gamma * q2, 0.0)

    q, cache_c = critic.forward_cache(_critic_input(s, a / ab))
    grads_c, _ = critic.backprop(cache_c, 2.0 * (q - y) / n)
    opt_c.step(fp_c.flat, _clip_grad(fp_c.gather_grads(grads_c)))
    _soft_update(fp_ct, fp_c)

    if not update_actor:
        return
    mu, cache_a = actor.forward_cache(s)
    q_pi, cache_q = critic.forward_cache(_critic_input(s, mu))
    _, din = critic.backprop(cache_q, -np.ones(n) / n)
    grads_a, _ = actor.backprop(cache_a, din[:, 2])
    opt_a.step(fp_a.flat, _clip_grad(fp_a.gather_grads(grads_a)))
    _soft_update(fp_at, fp_a)


# ----------------------------------------------------------------- PPO


def _train_ppo(config):
    rng = np.random.default_rng(config.seed)
    ab = DEFAULT_ACTION_BOUND
    actor = _fresh_actor(config, rng)
    value = Mlp.random((2,) + CRITIC_HIDDEN + (1,), rng,
                       activation="relu", output_activation="linear")
    fp_a = FlatParams(actor)
    fp_v = FlatParams(value)
    log_std = np.array(PPO_LOG_STD_INIT)
    opt_a = Adam(fp_a.flat, config.actor_lr)
    opt_s = Adam(log_std, config.actor_lr)
    opt_v = Adam(fp_v.flat, config.critic_lr)
    guard = _DivergenceGuard(config)
    snapshot = _BestSnapshot(config, fp_a)
    curve = []
    eps_per_batch = max(1, -(-config.rollout_batch // config.steps_per_episode))

    eps_done = 0
    while eps_done < config.episodes:
        n_eps = min(eps_per_batch, config.episodes - eps_done)
        states, us, logps, advs, rets, ep_returns = _ppo_collect(
            config, ab, actor, value, log_std, rng, n_eps)
        _ppo_optimize(config, fp_a, fp_v, log_std, opt_a, opt_s, opt_v, rng,
                      states, us, logps, advs, rets)
        for ret in ep_returns:
            curve.append((eps_done, ret))
            guard.check(actor, curve)
            snapshot.consider(eps_done)
            eps_done += 1
    return snapshot.restore(), curve


def _ppo_collect(config, ab, actor, value, log_std, rng, n_eps):
    std = float(np.exp(log_std))
    all_s, all_u, all_logp, all_adv, all_ret, ep_returns = [], [], [], [], [], []
    for _ in range(n_eps):
        t_states = np.empty((config.steps_per_episode, 2))
        t_u = np.empty(config.steps_per_episode)
        t_r = np.empty(config.steps_per_episode)
        state = (rng.uniform(*config.init_p_range),
                 rng.uniform(*config.init_v_range))
        for t in range(config.steps_per_episode):
            t_states[t] = state
            mu = actor.forward(np.asarray(state))
            u = mu + std * rng.standard_normal()
            a = ab * min(max(u, -1.0), 1.0)
            t_u[t] = u
            t_r[t] = reward(state, a, config.reward_weights)
            state = step(state, a, config.dt)
        mu_all = np.atleast_1d(actor.forward(t_states))
        z = (t_u - mu_all) / std
        logp = -0.5 * z * z - float(log_std) - 0.5 * math.log(2.0 * math.pi)

        # GAE with a bootstrap at the (truncated, non-terminal) episode end
        vals = np.atleast_1d(value.forward(t_states))
        v_boot = float(value.forward(np.asarray(state)))
        v_next = np.append(vals[1:], v_boot)
        deltas = t_r + config.gamma * v_next - vals
        adv = np.empty_like(deltas)
        acc = 0.0
        for t in range(len(deltas) - 1, -1, -1):
            acc = deltas[t] + config.gamma * GAE_LAMBDA * acc
            adv[t] = acc

        all_s.append(t_states)
        all_u.append(t_u)
        all_logp.append(logp)
        all_adv.append(adv)
        all_ret.append(adv + vals)
        ep_returns.append(float(t_r.sum()))
    advs = np.concatenate(all_adv)
    advs = (advs - advs.mean()) / (advs.std() + 1e-8)
    return (np.concatenate(all_s), np.concatenate(all_u),
            np.concatenate(all_logp), advs, np.concatenate(all_ret),
            ep_returns)


def _ppo_optimize(config, fp_a, fp_v, log_std, opt_a, opt_s, opt_v, rng,
                  states, us, logps_old, advs, rets):
    actor, value = fp_a.net, fp_v.net
    n = len(us)
    eps = config.clip_ratio
    for _ in range(config.epochs_per_update):
        perm = rng.permutation(n)
        for lo in range(0, n, config.batch_size):
            idx = perm[lo:lo + config.batch_size]
            if len(idx) < 2:
                continue
            s, u, lp_old, adv, ret = (states[idx], us[idx], logps_old[idx],
                                      advs[idx], rets[idx])
            m = len(idx)
            std = float(np.exp(log_std))

            mu, cache_a = actor.forward_cache(s)
            z = (u - mu) / std
            logp = -0.5 * z * z - float(log_std) - 0.5 * math.log(2.0 * math.pi)
            ratio = np.exp(np.clip(logp - lp_old, -20.0, 20.0))

            unclipped = ratio * adv
            clipped = np.clip(ratio, 1.0 - eps, 1.0 + eps) * adv
            active = unclipped <= clipped  # min() takes the unclipped branch
            dratio = np.where(active, -adv / m, 0.0)
            dlogp = dratio * ratio
            grads_a, _ = actor.backprop(cache_a, dlogp * z / std)
            opt_a.step(fp_a.flat, fp_a.gather_grads(grads_a))
            dlogstd = np.sum(dlogp * (z * z - 1.0))
            opt_s.step(log_std, dlogstd)

            v, cache_v = value.forward_cache(s)
            grads_v, _ = value.backprop(cache_v, (v - ret) / m)
            opt_v.step(fp_v.flat, fp_v.gather_grads(grads_v))
