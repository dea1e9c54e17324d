//! Cart-pole balancing: a pole hinged on a cart sliding on a frictionless
//! track, controlled by a fixed-magnitude push left or right. Explicit Euler
//! at 50 Hz with the canonical constants.

use super::{check_live, ActionSpace, EnvSpec, StepResult};
use crate::error::{Error, Result};
use crate::rng::Rng64;

const GRAVITY: f64 = 9.8;
const MASS_CART: f64 = 1.0;
const MASS_POLE: f64 = 0.1;
const TOTAL_MASS: f64 = MASS_CART + MASS_POLE;
/// Half the pole length.
const LENGTH: f64 = 0.5;
const POLE_MASS_LENGTH: f64 = MASS_POLE * LENGTH;
const FORCE_MAG: f64 = 10.0;
/// Integration step, seconds.
const TAU: f64 = 0.02;
const X_THRESHOLD: f64 = 2.4;
/// 12 degrees in radians.
const THETA_THRESHOLD: f64 = 12.0 * 2.0 * std::f64::consts::PI / 360.0;
const MAX_STEPS: usize = 500;

#[derive(Debug, Clone, Default)]
pub struct CartPole {
    x: f64,
    x_dot: f64,
    theta: f64,
    theta_dot: f64,
    steps: usize,
    finished: bool,
}

impl CartPole {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn spec() -> EnvSpec {
        EnvSpec {
            name: "cartpole",
            obs_dim: 4,
            action_space: ActionSpace::Discrete(2),
            max_steps: MAX_STEPS,
            solved_threshold: 200.0,
        }
    }

    /// All four state components drawn uniformly from (−0.05, 0.05), in the
    /// order x, ẋ, θ, θ̇.
    pub fn reset(&mut self, seed: u64) -> Vec<f64> {
        let mut rng = Rng64::new(seed);
        self.x = rng.uniform_in(-0.05, 0.05);
        self.x_dot = rng.uniform_in(-0.05, 0.05);
        self.theta = rng.uniform_in(-0.05, 0.05);
        self.theta_dot = rng.uniform_in(-0.05, 0.05);
        self.steps = 0;
        self.finished = false;
        self.observation()
    }

    /// Action 0 pushes left, 1 pushes right. Reward is 1 on every step.
    pub fn step(&mut self, action: usize) -> Result<StepResult> {
        check_live(self.finished)?;
        if action > 1 {
            return Err(Error::Dimension(format!(
                "cartpole action must be 0 or 1, got {action}"
            )));
        }
        let force = if action == 1 { FORCE_MAG } else { -FORCE_MAG };
        let cos_t = self.theta.cos();
        let sin_t = self.theta.sin();
        let temp =
            (force + POLE_MASS_LENGTH * self.theta_dot * self.theta_dot * sin_t) / TOTAL_MASS;
        let theta_acc = (GRAVITY * sin_t - cos_t * temp)
            / (LENGTH * (4.0 / 3.0 - MASS_POLE * cos_t * cos_t / TOTAL_MASS));
        let x_acc = temp - POLE_MASS_LENGTH * theta_acc * cos_t / TOTAL_MASS;

        // Explicit Euler: positions advance on the pre-update velocities.
        self.x += TAU * self.x_dot;
        self.x_dot += TAU * x_acc;
        self.theta += TAU * self.theta_dot;
        self.theta_dot += TAU * theta_acc;
        self.steps += 1;

        let done = self.x.abs() > X_THRESHOLD || self.theta.abs() > THETA_THRESHOLD;
        let truncated = !done && self.steps >= MAX_STEPS;
        self.finished = done || truncated;
        Ok(StepResult { observation: self.observation(), reward: 1.0, done, truncated })
    }

    fn observation(&self) -> Vec<f64> {
        vec![self.x, self.x_dot, self.theta, self.theta_dot]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Reach the all-zero state by constructing directly (reset randomizes).
    fn zeroed() -> CartPole {
        CartPole { finished: false, ..Default::default() }
    }

    #[test]
    fn reset_within_init_bounds_and_deterministic() {
        let mut env = CartPole::new();
        let obs = env.reset(123);
        assert_eq!(obs.len(), 4);
        assert!(obs.iter().all(|&v| (-0.05..0.05).contains(&v)));
        let again = env.reset(123);
        assert_eq!(obs, again);
        assert_ne!(env.reset(124), obs);
    }

    #[test]
    fn push_right_from_rest_matches_hand_integration() {
        let mut env = zeroed();
        let r = env.step(1).unwrap();
        assert_eq!(r.observation[0], 0.0);
        assert_relative_eq!(r.observation[1], 0.1951219512195122, max_relative = 1e-15);
        assert_eq!(r.observation[2], 0.0);
        assert_relative_eq!(r.observation[3], -0.2926829268292683, max_relative = 1e-15);
        assert_eq!(r.reward, 1.0);
        assert!(!r.done && !r.truncated);
    }

    #[test]
    fn push_left_mirrors_push_right() {
        let mut right = zeroed();
        let mut left = zeroed();
        let rr = right.step(1).unwrap();
        let rl = left.step(0).unwrap();
        for (a, b) in rr.observation.iter().zip(&rl.observation) {
            assert_eq!(*a, -*b);
        }
    }

    #[test]
    fn terminates_on_angle() {
        // Constant pushes in one direction topple the pole quickly.
        let mut env = zeroed();
        let mut steps = 0;
        loop {
            let r = env.step(1).unwrap();
            steps += 1;
            if r.done {
                assert!(
                    r.observation[2].abs() > THETA_THRESHOLD
                        || r.observation[0].abs() > X_THRESHOLD
                );
                break;
            }
            assert!(steps < 200, "constant push should topple well before 200 steps");
        }
        assert!(env.step(1).is_err(), "stepping a finished episode must fail");
    }

    #[test]
    fn angle_threshold_is_twelve_degrees() {
        assert_relative_eq!(THETA_THRESHOLD, 0.20943951023931953, max_relative = 1e-15);
    }

    #[test]
    fn feedback_policy_survives_to_truncation() {
        // A linear feedback controller keeps the pole balanced; the episode
        // must then end by truncation at exactly 500 steps, not termination.
        let mut env = CartPole::new();
        let mut obs = env.reset(7);
        let mut n = 0;
        loop {
            let score = 0.5 * obs[0] + 1.0 * obs[1] + 10.0 * obs[2] + 2.0 * obs[3];
            let r = env.step(if score > 0.0 { 1 } else { 0 }).unwrap();
            obs = r.observation;
            n += 1;
            if r.done {
                panic!("feedback policy fell at step {n}");
            }
            if r.truncated {
                assert_eq!(n, 500);
                break;
            }
        }
    }

    #[test]
    fn invalid_action_rejected() {
        let mut env = CartPole::new();
        env.reset(1);
        assert!(env.step(2).is_err());
    }
}
