//! Self-contained control environments with bit-reproducible dynamics.
//!
//! Three classic benchmarks are implemented from their canonical public
//! definitions: cart-pole balancing (discrete push left/right), continuous
//! mountain car, and pendulum swing-up. All stochasticity flows through
//! [`Rng64`], so identical seed + identical action sequence gives a
//! bit-identical trajectory on every platform.

mod cartpole;
mod mountain_car;
mod pendulum;

pub use cartpole::CartPole;
pub use mountain_car::MountainCarContinuous;
pub use pendulum::Pendulum;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Action space of an environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ActionSpace {
    Discrete(usize),
    Box { low: f64, high: f64, dim: usize },
}

/// Static description of an environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvSpec {
    pub name: &'static str,
    pub obs_dim: usize,
    pub action_space: ActionSpace,
    pub max_steps: usize,
    /// Mean-return level at which the task counts as solved.
    pub solved_threshold: f64,
}

/// An action to apply. Continuous actions are clipped to the box bounds
/// inside `step`.
#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    Discrete(usize),
    Continuous(Vec<f64>),
}

/// Result of one environment transition.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub observation: Vec<f64>,
    pub reward: f64,
    /// True when the termination condition fired (a real end state).
    pub done: bool,
    /// True when the step limit cut the episode short without termination.
    pub truncated: bool,
}

/// Environment selector, parseable from its config-file name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnvKind {
    CartPole,
    MountainCar,
    Pendulum,
}

impl EnvKind {
    pub const ALL: [EnvKind; 3] = [EnvKind::CartPole, EnvKind::MountainCar, EnvKind::Pendulum];

    pub fn as_str(self) -> &'static str {
        match self {
            EnvKind::CartPole => "cartpole",
            EnvKind::MountainCar => "mountain_car",
            EnvKind::Pendulum => "pendulum",
        }
    }
}

impl fmt::Display for EnvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnvKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cartpole" => Ok(EnvKind::CartPole),
            "mountain_car" => Ok(EnvKind::MountainCar),
            "pendulum" => Ok(EnvKind::Pendulum),
            other => Err(Error::Config(format!(
                "unknown environment '{other}' (expected cartpole, mountain_car, or pendulum)"
            ))),
        }
    }
}

/// A concrete environment instance. One instance belongs to one run;
/// independent instances may advance in parallel.
#[derive(Debug, Clone)]
pub enum Env {
    CartPole(CartPole),
    MountainCar(MountainCarContinuous),
    Pendulum(Pendulum),
}

impl Env {
    pub fn new(kind: EnvKind) -> Env {
        match kind {
            EnvKind::CartPole => Env::CartPole(CartPole::new()),
            EnvKind::MountainCar => Env::MountainCar(MountainCarContinuous::new()),
            EnvKind::Pendulum => Env::Pendulum(Pendulum::new()),
        }
    }

    pub fn from_name(name: &str) -> Result<Env> {
        Ok(Env::new(name.parse()?))
    }

    pub fn kind(&self) -> EnvKind {
        match self {
            Env::CartPole(_) => EnvKind::CartPole,
            Env::MountainCar(_) => EnvKind::MountainCar,
            Env::Pendulum(_) => EnvKind::Pendulum,
        }
    }

    pub fn spec(&self) -> EnvSpec {
        match self {
            Env::CartPole(_) => CartPole::spec(),
            Env::MountainCar(_) => MountainCarContinuous::spec(),
            Env::Pendulum(_) => Pendulum::spec(),
        }
    }

    /// Start a new episode from a seed-determined initial state.
    pub fn reset(&mut self, seed: u64) -> Vec<f64> {
        match self {
            Env::CartPole(e) => e.reset(seed),
            Env::MountainCar(e) => e.reset(seed),
            Env::Pendulum(e) => e.reset(seed),
        }
    }

    /// Advance one step. Stepping a finished episode is an error.
    pub fn step(&mut self, action: &Action) -> Result<StepResult> {
        match self {
            Env::CartPole(e) => match action {
                Action::Discrete(a) => e.step(*a),
                Action::Continuous(_) => Err(Error::Dimension(
                    "cartpole takes a discrete action".into(),
                )),
            },
            Env::MountainCar(e) => match action {
                Action::Continuous(a) => e.step(a),
                Action::Discrete(_) => Err(Error::Dimension(
                    "mountain_car takes a continuous action".into(),
                )),
            },
            Env::Pendulum(e) => match action {
                Action::Continuous(a) => e.step(a),
                Action::Discrete(_) => Err(Error::Dimension(
                    "pendulum takes a continuous action".into(),
                )),
            },
        }
    }
}

/// Shared guard so every environment reports the same error when stepped
/// after the episode ended.
pub(crate) fn check_live(finished: bool) -> Result<()> {
    if finished {
        Err(Error::Domain("step called on a finished episode; reset first".into()))
    } else {
        Ok(())
    }
}
