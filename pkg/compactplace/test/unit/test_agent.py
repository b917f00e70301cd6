import copy
import csv
import os
import tempfile
import unittest

import mock
import numpy as np
import pytest
import torch

from compactplace.agent.checkpoint import CHECKPOINT_FORMAT, load_checkpoint, save_checkpoint
from compactplace.agent.config import TrainConfig
from compactplace.agent.networks import CriticNet, PolicyNet, squash_correction
from compactplace.agent.replay import Batch, ReplayBuffer
from compactplace.agent.tqc import (
    TQCAgent,
    quantile_huber_loss,
    quantile_midpoints,
    soft_update,
    truncated_mean,
    truncated_target,
)
from compactplace.agent.trainer import LOG_COLUMNS, Trainer
from compactplace.core.exceptions import CheckpointError, ConfigError, TrainingError
from compactplace.env.config import EnvConfig
from compactplace.env.observation import OBS_SIZE
from compactplace.env.placement_env import ACTION_SIZE
from compactplace.models.episode import RewardBreakdown, StepInfo
from compactplace.test.unit.helpers import square_layout

SMALL = dict(hidden=(16,), n_quantiles=5, drop_per_critic=1, batch_size=8, buffer_size=200)


def small_config(**kwargs):
    return TrainConfig(**{**SMALL, **kwargs})


def random_batch(rng, n=8, obs_dim=OBS_SIZE, action_dim=ACTION_SIZE):
    return Batch(
        obs=rng.uniform(0, 1, (n, obs_dim)).astype(np.float32),
        actions=rng.uniform(-1, 1, (n, action_dim)).astype(np.float32),
        rewards=rng.normal(size=n).astype(np.float32),
        next_obs=rng.uniform(0, 1, (n, obs_dim)).astype(np.float32),
        dones=(rng.uniform(size=n) < 0.3).astype(np.float32),
        indices=np.arange(n),
    )


class TestNetworks(unittest.TestCase):
    def setUp(self):
        torch.manual_seed(0)

    def test_policy_gradients(self):
        net = PolicyNet(3, 2, (4,)).double()
        noise = torch.randn(2, 2, dtype=torch.float64)
        obs = torch.rand(2, 3, dtype=torch.float64, requires_grad=True)
        self.assertTrue(torch.autograd.gradcheck(lambda o: net.sample(o, noise=noise)[1], (obs,)))
        self.assertTrue(torch.autograd.gradcheck(lambda o: net.sample(o, noise=noise)[0], (obs,)))

    def test_critic_gradients(self):
        net = CriticNet(3, 2, (4,), n_critics=2, n_quantiles=3).double()
        obs = torch.rand(2, 3, dtype=torch.float64, requires_grad=True)
        action = torch.rand(2, 2, dtype=torch.float64, requires_grad=True)
        self.assertTrue(torch.autograd.gradcheck(net, (obs, action)))
        self.assertEqual(tuple(net(obs, action).shape), (2, 2, 3))

    def test_squash_correction(self):
        u = torch.linspace(-3, 3, 13, dtype=torch.float64)[:, None]
        expected = torch.log(1 - torch.tanh(u) ** 2).sum(dim=-1)
        torch.testing.assert_close(squash_correction(u), expected)
        self.assertTrue(torch.isfinite(squash_correction(torch.tensor([[60.0, -60.0]]))).all())

    def test_sample_log_prob_matches_density(self):
        net = PolicyNet(3, 2, (8,)).double()
        obs = torch.rand(4, 3, dtype=torch.float64)
        action, log_prob = net.sample(obs, noise=0.1 * torch.randn(4, 2, dtype=torch.float64))
        self.assertTrue((action.abs() < 1).all())
        torch.testing.assert_close(net.log_prob(obs, action), log_prob, atol=1e-6, rtol=1e-6)

    def test_deterministic_sample_is_squashed_mean(self):
        net = PolicyNet(3, 2, (8,))
        obs = torch.rand(1, 3)
        mean, _ = net(obs)
        action, _ = net.sample(obs, deterministic=True)
        torch.testing.assert_close(action, torch.tanh(mean))


class TestTruncatedQuantiles(unittest.TestCase):
    def test_pooled_atoms_are_sorted_and_truncated(self):
        q = torch.tensor([[[1.0, 3.0], [2.0, 4.0]]])
        zero = torch.zeros(1)
        target = truncated_target(q, zero, zero, 1.0, zero, drop_total=2)
        torch.testing.assert_close(target, torch.tensor([[1.0, 2.0]]))

    def test_reward_discount_and_entropy(self):
        q = torch.tensor([[[1.0, 3.0], [2.0, 4.0]], [[1.0, 3.0], [2.0, 4.0]]])
        target = truncated_target(
            q,
            rewards=torch.tensor([1.0, 1.0]),
            dones=torch.tensor([0.0, 1.0]),
            gamma=0.5,
            entropy_term=torch.tensor([0.2, 0.2]),
            drop_total=2,
        )
        torch.testing.assert_close(target, torch.tensor([[1.4, 1.9], [1.0, 1.0]]))

    def test_quantile_huber_hand_example(self):
        pred = torch.tensor([[[0.0, 2.0]]])
        target = torch.tensor([[1.0]])
        self.assertAlmostEqual(float(quantile_huber_loss(pred, target)), 0.25, places=7)

    def test_quantile_huber_linear_tail(self):
        # |diff| = 3 > kappa: kappa * (3 - kappa / 2) weighted by tau = 0.5
        loss = quantile_huber_loss(torch.tensor([[[0.0]]]), torch.tensor([[3.0]]))
        self.assertAlmostEqual(float(loss), 0.5 * 2.5, places=6)

    def test_quantile_midpoints(self):
        torch.testing.assert_close(quantile_midpoints(4), torch.tensor([0.125, 0.375, 0.625, 0.875]))

    def test_truncated_mean(self):
        q = torch.tensor([[[1.0, 3.0], [2.0, 10.0]]])
        torch.testing.assert_close(truncated_mean(q, 1), torch.tensor([2.0]))
        torch.testing.assert_close(truncated_mean(q, 0), torch.tensor([4.0]))

    def test_soft_update_closed_form(self):
        torch.manual_seed(1)
        online = torch.nn.Linear(3, 2)
        target = torch.nn.Linear(3, 2)
        before = [p.detach().clone() for p in target.parameters()]
        soft_update(online, target, 0.25)
        for p_t, p_old, p in zip(target.parameters(), before, online.parameters()):
            torch.testing.assert_close(p_t, 0.75 * p_old + 0.25 * p)

    def test_critic_overfits_fixed_targets(self):
        torch.manual_seed(2)
        critic = CriticNet(4, 2, (32, 32), n_critics=2, n_quantiles=5)
        opt = torch.optim.Adam(critic.parameters(), lr=1e-2)
        obs = torch.rand(16, 4)
        action = torch.rand(16, 2) * 2 - 1
        target = (obs.sum(dim=1, keepdim=True) + torch.linspace(-0.2, 0.2, 8)[None, :]).detach()
        first = float(quantile_huber_loss(critic(obs, action), target))
        for _ in range(500):
            loss = quantile_huber_loss(critic(obs, action), target)
            opt.zero_grad()
            loss.backward()
            opt.step()
        self.assertLess(float(loss), 0.1 * first)


class TestReplayBuffer(unittest.TestCase):
    def test_ring_overwrites_oldest(self):
        buf = ReplayBuffer(3, 2, 1)
        for i in range(5):
            buf.add(np.full(2, i), np.full(1, i), float(i), np.full(2, i + 1), i == 4)
        self.assertEqual(len(buf), 3)
        batch = buf.sample(3, np.random.default_rng(0))
        self.assertEqual(sorted(batch.rewards.tolist()), [2.0, 3.0, 4.0])
        # rows stay aligned
        np.testing.assert_array_equal(batch.obs[:, 0], batch.rewards)
        np.testing.assert_array_equal(batch.next_obs[:, 0], batch.rewards + 1)
        np.testing.assert_array_equal(batch.dones, (batch.rewards == 4).astype(np.float32))

    def test_sampling_is_without_replacement(self):
        buf = ReplayBuffer(10, 1, 1)
        for i in range(10):
            buf.add(np.zeros(1), np.zeros(1), float(i), np.zeros(1), False)
        batch = buf.sample(10, np.random.default_rng(4))
        self.assertEqual(sorted(batch.rewards.tolist()), [float(i) for i in range(10)])

    def test_sampling_is_uniform(self):
        buf = ReplayBuffer(1000, 1, 1)
        for i in range(1000):
            buf.add(np.zeros(1), np.zeros(1), float(i), np.zeros(1), False)
        rng = np.random.default_rng(11)
        drawn = np.concatenate([buf.sample(100, rng).rewards for _ in range(1000)]).astype(int)
        counts = np.bincount(drawn, minlength=1000)
        n, p = 100_000, 1.0 / 1000
        sigma = np.sqrt(n * p * (1.0 - p))
        self.assertEqual(counts.sum(), n)
        self.assertLess(np.abs(counts - n * p).max(), 5.0 * sigma)

    def test_sample_larger_than_buffer(self):
        buf = ReplayBuffer(10, 1, 1)
        buf.add(np.zeros(1), np.zeros(1), 0.0, np.zeros(1), False)
        with self.assertRaises(TrainingError):
            buf.sample(2, np.random.default_rng(0))
        with self.assertRaises(ValueError):
            ReplayBuffer(0, 1, 1)


class TestTQCAgent(unittest.TestCase):
    def test_same_seed_same_policy(self):
        obs = np.random.default_rng(0).uniform(0, 1, OBS_SIZE)
        a = TQCAgent(OBS_SIZE, ACTION_SIZE, small_config(seed=3))
        b = TQCAgent(OBS_SIZE, ACTION_SIZE, small_config(seed=3))
        np.testing.assert_array_equal(a.act(obs), b.act(obs))
        np.testing.assert_array_equal(a.explore_action(obs), b.explore_action(obs))
        action = a.act(obs)
        self.assertEqual(action.shape, (ACTION_SIZE,))
        self.assertTrue(np.all(np.abs(action) <= 1.0))

    def test_train_step_updates_and_soft_updates(self):
        agent = TQCAgent(OBS_SIZE, ACTION_SIZE, small_config(seed=1, tau=0.1))
        old_target = copy.deepcopy(agent.critic_target)
        stats = agent.train_step(random_batch(np.random.default_rng(1)))
        self.assertEqual(agent.updates, 1)
        for key in ("critic_loss", "actor_loss", "alpha"):
            self.assertTrue(np.isfinite(stats[key]))
        for p_t, p_old, p in zip(
            agent.critic_target.parameters(), old_target.parameters(), agent.critic.parameters()
        ):
            torch.testing.assert_close(p_t, 0.9 * p_old + 0.1 * p)

    def test_target_width_follows_truncation(self):
        agent = TQCAgent(OBS_SIZE, ACTION_SIZE, small_config(n_critics=3, n_quantiles=5, drop_per_critic=2))
        target = agent.tqc_target(random_batch(np.random.default_rng(2)))
        self.assertEqual(tuple(target.shape), (8, 3 * 5 - 6))

    def test_entropy_off_means_zero_temperature(self):
        agent = TQCAgent(OBS_SIZE, ACTION_SIZE, small_config(use_entropy=False))
        self.assertEqual(agent.alpha, 0.0)
        stats = agent.train_step(random_batch(np.random.default_rng(3)))
        self.assertEqual(stats["alpha"], 0.0)

    def test_no_exploration_noise_returns_policy_sample(self):
        cfg = small_config(seed=5, use_exploration_noise=False)
        a, b = TQCAgent(OBS_SIZE, ACTION_SIZE, cfg), TQCAgent(OBS_SIZE, ACTION_SIZE, cfg)
        obs = np.full(OBS_SIZE, 0.5)
        np.testing.assert_array_equal(a.explore_action(obs), b.forward_policy(obs)[0])

    def test_exploration_noise_scale(self):
        agent = TQCAgent(OBS_SIZE, ACTION_SIZE, small_config(seed=8))
        obs = np.full(OBS_SIZE, 0.5)
        # a zero policy sample keeps the clamp 10 sigma away
        with mock.patch.object(TQCAgent, "forward_policy", return_value=(np.zeros(ACTION_SIZE), 0.0)):
            noise = np.concatenate([agent.explore_action(obs) for _ in range(20_000)])
        self.assertEqual(noise.size, 100_000)
        self.assertAlmostEqual(noise.std(), 0.1, delta=0.005)
        self.assertLess(abs(noise.mean()), 0.005)

    def test_non_finite_loss_raises_with_diagnostics(self):
        agent = TQCAgent(OBS_SIZE, ACTION_SIZE, small_config())
        batch = random_batch(np.random.default_rng(4))
        batch.rewards[0] = np.nan
        with self.assertRaises(TrainingError) as info:
            agent.train_step(batch)
        self.assertIn("critic_loss", info.exception.diagnostics)

    def test_non_finite_policy_raises(self):
        agent = TQCAgent(OBS_SIZE, ACTION_SIZE, small_config())
        with torch.no_grad():
            next(agent.policy.parameters()).fill_(float("nan"))
        with self.assertRaises(TrainingError):
            agent.act(np.zeros(OBS_SIZE))


def test_train_config_validation():
    assert TrainConfig().drop_total == 4
    with pytest.raises(ConfigError):
        TrainConfig(n_quantiles=3, drop_per_critic=3)
    with pytest.raises(ConfigError):
        TrainConfig(gamma=1.0)
    with pytest.raises(ConfigError) as info:
        TrainConfig.from_dict({"lr": 0.1})
    assert "train.lr" in str(info.value)
    cfg = TrainConfig(hidden=[32, 32])
    assert TrainConfig.from_dict(cfg.to_dict()) == cfg


class TestCheckpoint(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name
        self.agent = TQCAgent(OBS_SIZE, ACTION_SIZE, small_config(seed=7))
        self.agent.train_step(random_batch(np.random.default_rng(7)))

    def tearDown(self):
        self._tmp.cleanup()

    def test_round_trip_restores_agent_and_rng(self):
        env_cfg = EnvConfig(max_steps=40)
        path = save_checkpoint(
            os.path.join(self.tmp, "nested", "a.pt"), self.agent, env_cfg, 3, {"steps": 10, "episodes": 2}
        )
        ckpt = load_checkpoint(path)
        self.assertEqual(ckpt.curriculum_level, 3)
        self.assertEqual(ckpt.counters, {"steps": 10, "episodes": 2})
        self.assertEqual(ckpt.env_config, env_cfg)
        self.assertEqual(ckpt.train_config, self.agent.config)
        restored = ckpt.build_agent()
        self.assertEqual(restored.updates, 1)
        obs = np.linspace(0, 1, OBS_SIZE)
        np.testing.assert_array_equal(restored.act(obs), self.agent.act(obs))
        np.testing.assert_array_equal(restored.explore_action(obs), self.agent.explore_action(obs))
        self.assertAlmostEqual(restored.alpha, self.agent.alpha)

    def test_missing_and_corrupt_files(self):
        with self.assertRaises(CheckpointError):
            load_checkpoint(os.path.join(self.tmp, "missing.pt"))
        corrupt = os.path.join(self.tmp, "corrupt.pt")
        with open(corrupt, "wb") as handle:
            handle.write(b"not a checkpoint")
        with self.assertRaises(CheckpointError):
            load_checkpoint(corrupt)

    def test_foreign_format_and_version(self):
        foreign = os.path.join(self.tmp, "foreign.pt")
        torch.save({"format": "other"}, foreign)
        with self.assertRaises(CheckpointError):
            load_checkpoint(foreign)
        future = os.path.join(self.tmp, "future.pt")
        torch.save({"format": CHECKPOINT_FORMAT, "version": 99}, future)
        with self.assertRaises(CheckpointError):
            load_checkpoint(future)

    def test_shape_mismatch(self):
        path = save_checkpoint(os.path.join(self.tmp, "a.pt"), self.agent, EnvConfig())
        with self.assertRaises(CheckpointError):
            load_checkpoint(path).build_agent(small_config(hidden=(8,)))


def stacked():
    return square_layout([(50.0, 50.0), (50.0, 150.0)], layout_id="stacked")


def test_trainer_promotes_and_checkpoints(tmp_path):
    cfg = small_config(total_steps=60, warmup_steps=20, eval_every=30, eval_episodes=2, seed=2)
    trainer = Trainer([stacked()], tmp_path, train_config=cfg)
    levels, rates = [], []
    trainer.add_attribute_listener("curriculum_level", lambda _, __, v: levels.append(v))
    trainer.add_attribute_listener("eval_success_rate", lambda _, __, v: rates.append(v))

    with mock.patch.object(Trainer, "evaluate", return_value=0.9):
        final = trainer.train()

    assert final == tmp_path / "final.pt"
    assert levels == [1, 2]
    assert rates == [0.9, 0.9]
    assert (tmp_path / "level_01.pt").exists()
    assert (tmp_path / "level_02.pt").exists()
    assert trainer.agent.updates == 60 - 20 + 1
    with (tmp_path / "train_log.csv").open(newline="") as handle:
        rows = list(csv.reader(handle))
    assert tuple(rows[0]) == LOG_COLUMNS
    assert len(rows) >= 2

    resumed = Trainer.from_checkpoint(final, [stacked()], tmp_path, total_steps=90)
    assert resumed.steps == 60
    assert resumed.curriculum_level == 2
    assert resumed.train_config.total_steps == 90
    assert len(resumed.buffer) == 0


def test_trainer_without_promotion(tmp_path):
    cfg = small_config(total_steps=30, warmup_steps=30, eval_every=30, seed=4)
    trainer = Trainer([stacked()], tmp_path, train_config=cfg)
    with mock.patch.object(Trainer, "evaluate", return_value=0.8):
        trainer.train()
    assert trainer.curriculum_level == 0
    assert not (tmp_path / "level_01.pt").exists()


def test_timeouts_are_stored_as_non_terminal(tmp_path):
    cfg = small_config(total_steps=2, warmup_steps=10, eval_every=1000)
    trainer = Trainer([stacked()], tmp_path, train_config=cfg)
    trainer.env = mock.Mock()
    trainer.env.reset.return_value = np.zeros(OBS_SIZE)
    timeout = (np.zeros(OBS_SIZE), RewardBreakdown(), True, StepInfo())
    success = (np.zeros(OBS_SIZE), RewardBreakdown(r_q12=9.0), True, StepInfo(success=True, released=True))
    trainer.env.step.side_effect = [timeout, success]
    trainer.train()
    batch = trainer.buffer.sample(2, np.random.default_rng(0))
    order = np.argsort(batch.rewards)
    np.testing.assert_array_equal(batch.dones[order], [0.0, 1.0])


def test_evaluate_is_repeatable(tmp_path):
    cfg = small_config(eval_episodes=2, seed=6)
    trainer = Trainer([stacked()], tmp_path, train_config=cfg)
    first = trainer.evaluate()
    assert 0.0 <= first <= 1.0
    assert trainer.evaluate() == first


def test_trainer_needs_layouts(tmp_path):
    with pytest.raises(ConfigError):
        Trainer([], tmp_path)


@pytest.mark.skipif(os.environ.get("COMPACT_PLACE_SLOW") != "1", reason="set COMPACT_PLACE_SLOW=1")
def test_training_smoke(tmp_path):
    cfg = TrainConfig(total_steps=3000, warmup_steps=500, eval_every=1000, eval_episodes=5, seed=1)
    trainer = Trainer([stacked()], tmp_path, train_config=cfg)
    final = trainer.train()
    assert load_checkpoint(final).counters["steps"] == 3000
