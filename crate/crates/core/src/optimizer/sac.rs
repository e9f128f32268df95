//! Soft actor-critic over the single-step power environment.
//!
//! Off-policy, entropy-regularized actor-critic with twin critics and a
//! squashed-Gaussian policy. Episodes are single-step: the state is the
//! fixed node layout, the action is the power vector, and the revenue is
//! the sum secrecy capacity, so the critic target is the revenue itself
//! and no bootstrapping occurs. The temperature is tuned automatically
//! toward a configurable entropy target.
//!
//! The policy head produces a Gaussian in pre-squash space; actions map
//! through `tanh` and an affine rescale onto `[0, p_max]`, so the box
//! constraint holds structurally. Log-densities are taken in tanh space;
//! the affine rescale only shifts them by a constant, which the entropy
//! target convention absorbs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

use crate::capacity::PowerAllocation;

use super::env::PowerEnv;
use super::nn::{Adam, Mlp};
use super::SolverError;

const LOG_STD_MIN: f64 = -20.0;
const LOG_STD_MAX: f64 = 2.0;
const TANH_EPS: f64 = 1e-6;
const ALPHA_LR: f64 = 3e-4;
const INITIAL_ALPHA: f64 = 0.2;
/// Episodes of uniform random exploration before updates begin.
const WARMUP_EPISODES: usize = 256;

/// Soft actor-critic hyperparameters.
///
/// `discount` and `target_smoothing` are inert under single-step
/// episodes (there is no bootstrap term to discount or smooth) but stay
/// configurable for variants with temporal structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SacConfig {
    /// Hidden layers in actor and critics.
    pub hidden_layers: usize,
    /// Hidden units per layer; `None` picks a width from the AP count:
    /// `min(256, max(32, 32 * ceil(n_aps / 4)))`.
    pub hidden_units: Option<usize>,
    pub replay_capacity: usize,
    pub batch_size: usize,
    pub actor_lr: f64,
    pub critic_lr: f64,
    pub discount: f64,
    pub target_smoothing: f64,
    /// Entropy target in nats; `None` means `-3 * n_aps`. The optima of
    /// this objective sit near action-box corners, where the
    /// conventional `-n_aps` target leaves enough entropy pressure to
    /// pull the policy mean visibly off the corner.
    pub entropy_target: Option<f64>,
    pub train_episodes: usize,
    pub eval_episodes: usize,
}

impl Default for SacConfig {
    fn default() -> Self {
        Self {
            hidden_layers: 9,
            hidden_units: None,
            replay_capacity: 100_000,
            batch_size: 64,
            actor_lr: 3e-4,
            critic_lr: 3e-4,
            discount: 0.99,
            target_smoothing: 5e-3,
            entropy_target: None,
            train_episodes: 15_000,
            eval_episodes: 1,
        }
    }
}

impl SacConfig {
    fn validate(&self) -> Result<(), SolverError> {
        let positive_counts = [
            ("hidden_layers", self.hidden_layers),
            ("replay_capacity", self.replay_capacity),
            ("batch_size", self.batch_size),
            ("train_episodes", self.train_episodes),
            ("eval_episodes", self.eval_episodes),
        ];
        for (name, v) in positive_counts {
            if v < 1 {
                return Err(SolverError::InvalidConfig(format!("{name} >= 1")));
            }
        }
        if let Some(w) = self.hidden_units {
            if w < 1 {
                return Err(SolverError::InvalidConfig("hidden_units >= 1".to_string()));
            }
        }
        for (name, v) in [("actor_lr", self.actor_lr), ("critic_lr", self.critic_lr)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(SolverError::InvalidConfig(format!("{name} > 0")));
            }
        }
        Ok(())
    }

    fn width_for(&self, n_aps: usize) -> usize {
        self.hidden_units
            .unwrap_or_else(|| (32 * n_aps.div_ceil(4)).clamp(32, 256))
    }
}

fn config_hash(config: &SacConfig, seed: u64) -> String {
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_string(config).expect("config serializes").as_bytes());
    hasher.update(seed.to_le_bytes());
    hasher
        .finalize()
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            use std::fmt::Write;
            let _ = write!(s, "{b:02x}");
            s
        })
}

// ---------------------------------------------------------------------------
// Policy
// ---------------------------------------------------------------------------

/// A trained squashed-Gaussian policy.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    actor: Mlp,
    obs_dim: usize,
    action_dim: usize,
    p_max: f64,
    config_hash: String,
}

/// On-disk policy format: versioned and self-describing (network shape
/// and parameters are stored explicitly).
#[derive(Serialize, Deserialize)]
struct PolicyCheckpoint {
    version: u32,
    obs_dim: usize,
    action_dim: usize,
    p_max: f64,
    config_hash: String,
    actor_dims: Vec<usize>,
    actor_params: Vec<f64>,
}

const CHECKPOINT_VERSION: u32 = 1;

impl Policy {
    pub fn obs_dim(&self) -> usize {
        self.obs_dim
    }

    pub fn action_dim(&self) -> usize {
        self.action_dim
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    /// Hash of the training configuration and seed, for provenance.
    pub fn config_hash(&self) -> &str {
        &self.config_hash
    }

    fn heads(&self, observation: &[f64]) -> Result<(Vec<f64>, Vec<f64>), SolverError> {
        if observation.len() != self.obs_dim {
            return Err(SolverError::DimensionMismatch {
                expected: self.obs_dim,
                got: observation.len(),
            });
        }
        let out = self.actor.infer(observation);
        let mean = out[..self.action_dim].to_vec();
        let log_std = out[self.action_dim..]
            .iter()
            .map(|v| v.clamp(LOG_STD_MIN, LOG_STD_MAX))
            .collect();
        Ok((mean, log_std))
    }

    /// Mean action squashed into the box; identical on every call.
    pub fn act_deterministic(&self, observation: &[f64]) -> Result<PowerAllocation, SolverError> {
        let (mean, _) = self.heads(observation)?;
        let p: Vec<f64> = mean
            .iter()
            .map(|&m| (m.tanh() + 1.0) * 0.5 * self.p_max)
            .collect();
        Ok(PowerAllocation::new(p, self.p_max).expect("squashed into box"))
    }

    /// Samples from the policy distribution, squashed into the box.
    pub fn act_stochastic(
        &self,
        observation: &[f64],
        rng: &mut impl Rng,
    ) -> Result<PowerAllocation, SolverError> {
        let (mean, log_std) = self.heads(observation)?;
        let p: Vec<f64> = mean
            .iter()
            .zip(&log_std)
            .map(|(&m, &ls)| {
                let eps: f64 = StandardNormal.sample(rng);
                let u = m + ls.exp() * eps;
                (u.tanh() + 1.0) * 0.5 * self.p_max
            })
            .collect();
        Ok(PowerAllocation::new(p, self.p_max).expect("squashed into box"))
    }

    /// Writes a versioned JSON checkpoint. Loading it back reproduces
    /// deterministic actions exactly.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SolverError> {
        let ckpt = PolicyCheckpoint {
            version: CHECKPOINT_VERSION,
            obs_dim: self.obs_dim,
            action_dim: self.action_dim,
            p_max: self.p_max,
            config_hash: self.config_hash.clone(),
            actor_dims: self.actor.dims().to_vec(),
            actor_params: self.actor.params().to_vec(),
        };
        let text = serde_json::to_string(&ckpt).expect("checkpoint serializes");
        std::fs::write(path.as_ref(), text).map_err(|e| SolverError::Checkpoint(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SolverError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| SolverError::Checkpoint(e.to_string()))?;
        let ckpt: PolicyCheckpoint =
            serde_json::from_str(&text).map_err(|e| SolverError::Checkpoint(e.to_string()))?;
        if ckpt.version != CHECKPOINT_VERSION {
            return Err(SolverError::Checkpoint(format!(
                "unsupported checkpoint version {}",
                ckpt.version
            )));
        }
        let actor = Mlp::from_parts(ckpt.actor_dims, ckpt.actor_params)
            .map_err(SolverError::Checkpoint)?;
        if actor.input_dim() != ckpt.obs_dim || actor.output_dim() != 2 * ckpt.action_dim {
            return Err(SolverError::Checkpoint(
                "checkpoint dimensions are inconsistent".to_string(),
            ));
        }
        Ok(Self {
            actor,
            obs_dim: ckpt.obs_dim,
            action_dim: ckpt.action_dim,
            p_max: ckpt.p_max,
            config_hash: ckpt.config_hash,
        })
    }
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

/// One row of the training curve.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingRecord {
    pub episode: usize,
    pub revenue: f64,
    pub actor_loss: f64,
    pub critic_loss: f64,
}

/// Trained policy plus diagnostics.
#[derive(Debug, Clone)]
pub struct SacOutcome {
    pub policy: Policy,
    pub curve: Vec<TrainingRecord>,
    /// Deterministic-policy revenue after training, averaged over
    /// `eval_episodes` evaluations.
    pub eval_revenue: f64,
}

struct Experience {
    observation: Vec<f64>,
    /// Action in tanh space, elementwise in [-1, 1].
    action_t: Vec<f64>,
    revenue: f64,
}

/// Trains a soft actor-critic agent on the environment.
///
/// Deterministic given `(env, config, seed)`. Aborts with a diagnostic
/// dump if a loss turns non-finite.
pub fn sac_train(env: &PowerEnv, config: &SacConfig, seed: u64) -> Result<SacOutcome, SolverError> {
    config.validate()?;
    let obs = env.observation().to_vec();
    let obs_dim = obs.len();
    let action_dim = env.n_aps();
    let p_max = env.p_max();
    let width = config.width_for(action_dim);
    let entropy_target = config
        .entropy_target
        .unwrap_or(-3.0 * action_dim as f64);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut actor_dims = vec![obs_dim];
    actor_dims.extend(std::iter::repeat(width).take(config.hidden_layers));
    actor_dims.push(2 * action_dim);
    let mut critic_dims = vec![obs_dim + action_dim];
    critic_dims.extend(std::iter::repeat(width).take(config.hidden_layers));
    critic_dims.push(1);

    let mut actor = Mlp::new(&actor_dims, &mut rng);
    let mut critic1 = Mlp::new(&critic_dims, &mut rng);
    let mut critic2 = Mlp::new(&critic_dims, &mut rng);

    let mut actor_opt = Adam::new(config.actor_lr, actor.num_params());
    let mut critic1_opt = Adam::new(config.critic_lr, critic1.num_params());
    let mut critic2_opt = Adam::new(config.critic_lr, critic2.num_params());
    let mut log_alpha = vec![INITIAL_ALPHA.ln()];
    let mut alpha_opt = Adam::new(ALPHA_LR, 1);

    let mut buffer: Vec<Experience> = Vec::with_capacity(config.replay_capacity.min(65_536));
    let mut write_pos = 0usize;

    let mut curve = Vec::with_capacity(config.train_episodes);
    let mut actor_grads = vec![0.0; actor.num_params()];
    let mut critic_grads = vec![0.0; critic1.num_params().max(critic2.num_params())];
    let mut scratch_grads = vec![0.0; critic_grads.len()];

    let warmup = WARMUP_EPISODES.max(config.batch_size);

    for episode in 0..config.train_episodes {
        // Act: uniform exploration during warmup, policy sample after.
        let action_t: Vec<f64> = if episode < warmup {
            (0..action_dim).map(|_| rng.gen_range(-1.0..=1.0)).collect()
        } else {
            let out = actor.infer(&obs);
            (0..action_dim)
                .map(|i| {
                    let mean = out[i];
                    let std = out[action_dim + i].clamp(LOG_STD_MIN, LOG_STD_MAX).exp();
                    let eps: f64 = StandardNormal.sample(&mut rng);
                    (mean + std * eps).tanh()
                })
                .collect()
        };
        let watts: Vec<f64> = action_t.iter().map(|t| (t + 1.0) * 0.5 * p_max).collect();
        let revenue = env.revenue(&PowerAllocation::new(watts, p_max).expect("in box"));

        let exp = Experience {
            observation: obs.clone(),
            action_t,
            revenue,
        };
        if buffer.len() < config.replay_capacity {
            buffer.push(exp);
        } else {
            buffer[write_pos] = exp;
        }
        write_pos = (write_pos + 1) % config.replay_capacity;

        let mut actor_loss = 0.0;
        let mut critic_loss = 0.0;
        if episode >= warmup && buffer.len() >= config.batch_size {
            let batch: Vec<usize> = (0..config.batch_size)
                .map(|_| rng.gen_range(0..buffer.len()))
                .collect();
            let alpha = log_alpha[0].exp();
            let b = config.batch_size as f64;

            // Critic regression: targets are the observed revenues
            // (terminal single-step episodes, no bootstrap).
            for (critic, opt) in [(&mut critic1, &mut critic1_opt), (&mut critic2, &mut critic2_opt)]
            {
                let n_params = critic.num_params();
                critic_grads[..n_params].fill(0.0);
                let mut loss = 0.0;
                for &i in &batch {
                    let sample = &buffer[i];
                    let mut input = sample.observation.clone();
                    input.extend_from_slice(&sample.action_t);
                    let (q, cache) = critic.forward(&input);
                    let err = q[0] - sample.revenue;
                    loss += err * err / b;
                    critic.backward(&cache, &[2.0 * err / b], &mut critic_grads);
                }
                opt.step(critic.params_mut(), &critic_grads[..n_params]);
                critic_loss += 0.5 * loss;
            }

            // Actor: minimize alpha * log pi - min(Q1, Q2) through the
            // reparameterized sample.
            actor_grads.fill(0.0);
            let mut mean_logpi = 0.0;
            for _ in 0..config.batch_size {
                let (out, actor_cache) = actor.forward(&obs);
                let mut d_out = vec![0.0; 2 * action_dim];
                let mut t = vec![0.0; action_dim];
                let mut eps_v = vec![0.0; action_dim];
                let mut sigma = vec![0.0; action_dim];
                let mut logpi = 0.0;
                for i in 0..action_dim {
                    let raw_ls = out[action_dim + i];
                    let ls = raw_ls.clamp(LOG_STD_MIN, LOG_STD_MAX);
                    let eps: f64 = StandardNormal.sample(&mut rng);
                    let u = out[i] + ls.exp() * eps;
                    t[i] = u.tanh();
                    eps_v[i] = eps;
                    sigma[i] = ls.exp();
                    logpi += -0.5 * eps * eps
                        - ls
                        - 0.5 * (2.0 * std::f64::consts::PI).ln()
                        - (1.0 - t[i] * t[i] + TANH_EPS).ln();
                }
                mean_logpi += logpi / b;

                let mut input = obs.clone();
                input.extend_from_slice(&t);
                let (q1, c1_cache) = critic1.forward(&input);
                let (q2, c2_cache) = critic2.forward(&input);
                let (qmin, min_cache, min_critic) = if q1[0] <= q2[0] {
                    (q1[0], c1_cache, &critic1)
                } else {
                    (q2[0], c2_cache, &critic2)
                };
                actor_loss += (alpha * logpi - qmin) / b;

                // dQ/d(action) via the chosen critic's input gradient.
                scratch_grads[..min_critic.num_params()].fill(0.0);
                let d_input = min_critic.backward(&min_cache, &[1.0], &mut scratch_grads);
                for i in 0..action_dim {
                    let dq_dt = d_input[obs_dim + i];
                    let sech2 = 1.0 - t[i] * t[i];
                    let dlogpi_du = 2.0 * t[i] * sech2 / (sech2 + TANH_EPS);
                    // d loss / d mean_i
                    d_out[i] = (alpha * dlogpi_du - dq_dt * sech2) / b;
                    // d loss / d raw log_std_i, zero outside the clamp.
                    let raw_ls = out[action_dim + i];
                    if (LOG_STD_MIN..=LOG_STD_MAX).contains(&raw_ls) {
                        let du_dls = eps_v[i] * sigma[i];
                        d_out[action_dim + i] =
                            (alpha * (-1.0 + dlogpi_du * du_dls) - dq_dt * sech2 * du_dls) / b;
                    }
                }
                actor.backward(&actor_cache, &d_out, &mut actor_grads);
            }
            actor_opt.step(actor.params_mut(), &actor_grads);

            // Temperature: push entropy toward the target.
            let alpha_grad = -log_alpha[0].exp() * (mean_logpi + entropy_target);
            alpha_opt.step(&mut log_alpha, &[alpha_grad]);

            if !(actor_loss.is_finite() && critic_loss.is_finite() && log_alpha[0].is_finite()) {
                return Err(SolverError::NonFiniteLoss {
                    episode,
                    detail: format!(
                        "actor_loss={actor_loss}, critic_loss={critic_loss}, \
                         log_alpha={}, buffer_len={}, last_revenue={revenue}",
                        log_alpha[0],
                        buffer.len()
                    ),
                });
            }
        }

        curve.push(TrainingRecord {
            episode,
            revenue,
            actor_loss,
            critic_loss,
        });
    }

    let policy = Policy {
        actor,
        obs_dim,
        action_dim,
        p_max,
        config_hash: config_hash(config, seed),
    };
    let mut eval_revenue = 0.0;
    for _ in 0..config.eval_episodes {
        let action = policy.act_deterministic(&obs)?;
        eval_revenue += env.revenue(&action) / config.eval_episodes as f64;
    }

    Ok(SacOutcome {
        policy,
        curve,
        eval_revenue,
    })
}
