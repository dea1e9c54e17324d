//! Pendulum swing-up: a torque-limited pendulum must reach and hold the
//! upright position. Cost is charged on the pre-step state; episodes never
//! terminate and always run to the step limit.

use std::f64::consts::PI;

use super::{check_live, ActionSpace, EnvSpec, StepResult};
use crate::error::{Error, Result};
use crate::rng::Rng64;

const GRAVITY: f64 = 10.0;
const MASS: f64 = 1.0;
const LENGTH: f64 = 1.0;
const DT: f64 = 0.05;
const MAX_TORQUE: f64 = 2.0;
const MAX_SPEED: f64 = 8.0;
const MAX_STEPS: usize = 200;

#[derive(Debug, Clone, Default)]
pub struct Pendulum {
    theta: f64,
    theta_dot: f64,
    steps: usize,
    finished: bool,
}

/// Wrap an angle into [−π, π).
fn angle_normalize(x: f64) -> f64 {
    (x + PI).rem_euclid(2.0 * PI) - PI
}

impl Pendulum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn spec() -> EnvSpec {
        EnvSpec {
            name: "pendulum",
            obs_dim: 3,
            action_space: ActionSpace::Box { low: -MAX_TORQUE, high: MAX_TORQUE, dim: 1 },
            max_steps: MAX_STEPS,
            solved_threshold: -150.0,
        }
    }

    /// Angle uniform(−π, π), angular velocity uniform(−1, 1).
    pub fn reset(&mut self, seed: u64) -> Vec<f64> {
        let mut rng = Rng64::new(seed);
        self.theta = rng.uniform_in(-PI, PI);
        self.theta_dot = rng.uniform_in(-1.0, 1.0);
        self.steps = 0;
        self.finished = false;
        self.observation()
    }

    pub fn step(&mut self, action: &[f64]) -> Result<StepResult> {
        check_live(self.finished)?;
        if action.len() != 1 {
            return Err(Error::Dimension(format!(
                "pendulum action must have dimension 1, got {}",
                action.len()
            )));
        }
        let u = action[0].clamp(-MAX_TORQUE, MAX_TORQUE);

        let th_n = angle_normalize(self.theta);
        let cost = th_n * th_n
            + 0.1 * self.theta_dot * self.theta_dot
            + 0.001 * u * u;

        // Semi-implicit Euler: the angle advances on the updated velocity.
        let mut new_theta_dot = self.theta_dot
            + (3.0 * GRAVITY / (2.0 * LENGTH) * self.theta.sin()
                + 3.0 / (MASS * LENGTH * LENGTH) * u)
                * DT;
        new_theta_dot = new_theta_dot.clamp(-MAX_SPEED, MAX_SPEED);
        self.theta += new_theta_dot * DT;
        self.theta_dot = new_theta_dot;
        self.steps += 1;

        let truncated = self.steps >= MAX_STEPS;
        self.finished = truncated;
        Ok(StepResult { observation: self.observation(), reward: -cost, done: false, truncated })
    }

    fn observation(&self) -> Vec<f64> {
        vec![self.theta.cos(), self.theta.sin(), self.theta_dot]
    }
}
