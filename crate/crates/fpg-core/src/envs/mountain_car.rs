//! Continuous mountain car: an underpowered car in a valley must build
//! momentum to reach the flag on the right hill. Continuous throttle in
//! [−1, 1]; reaching the goal pays +100, and every step costs 0.1·a².

use super::{check_live, ActionSpace, EnvSpec, StepResult};
use crate::error::{Error, Result};
use crate::rng::Rng64;

const POWER: f64 = 0.0015;
const GRAVITY_SCALE: f64 = 0.0025;
const MIN_POSITION: f64 = -1.2;
const MAX_POSITION: f64 = 0.6;
const MAX_SPEED: f64 = 0.07;
const GOAL_POSITION: f64 = 0.45;
const MAX_STEPS: usize = 999;

#[derive(Debug, Clone, Default)]
pub struct MountainCarContinuous {
    position: f64,
    velocity: f64,
    steps: usize,
    finished: bool,
}

impl MountainCarContinuous {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn spec() -> EnvSpec {
        EnvSpec {
            name: "mountain_car",
            obs_dim: 2,
            action_space: ActionSpace::Box { low: -1.0, high: 1.0, dim: 1 },
            max_steps: MAX_STEPS,
            solved_threshold: 90.0,
        }
    }

    /// Position uniform(−0.6, −0.4), velocity 0.
    pub fn reset(&mut self, seed: u64) -> Vec<f64> {
        let mut rng = Rng64::new(seed);
        self.position = rng.uniform_in(-0.6, -0.4);
        self.velocity = 0.0;
        self.steps = 0;
        self.finished = false;
        self.observation()
    }

    pub fn step(&mut self, action: &[f64]) -> Result<StepResult> {
        check_live(self.finished)?;
        if action.len() != 1 {
            return Err(Error::Dimension(format!(
                "mountain_car action must have dimension 1, got {}",
                action.len()
            )));
        }
        let force = action[0].clamp(-1.0, 1.0);

        self.velocity += force * POWER - GRAVITY_SCALE * (3.0 * self.position).cos();
        self.velocity = self.velocity.clamp(-MAX_SPEED, MAX_SPEED);
        self.position += self.velocity;
        self.position = self.position.clamp(MIN_POSITION, MAX_POSITION);
        if self.position == MIN_POSITION && self.velocity < 0.0 {
            // The left wall is inelastic: momentum is absorbed.
            self.velocity = 0.0;
        }
        self.steps += 1;

        let done = self.position >= GOAL_POSITION;
        let mut reward = -0.1 * force * force;
        if done {
            reward += 100.0;
        }
        let truncated = !done && self.steps >= MAX_STEPS;
        self.finished = done || truncated;
        Ok(StepResult { observation: self.observation(), reward, done, truncated })
    }

    fn observation(&self) -> Vec<f64> {
        vec![self.position, self.velocity]
    }
}
