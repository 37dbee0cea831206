//! Named initial-condition presets.

use std::f64::consts::PI;

use kirchhoff_core::Vec2;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

/// Transverse component a scalar preset is placed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    #[default]
    V,
    W,
}

impl Component {
    fn embed(self, value: f64) -> Vec2 {
        match self {
            Component::V => Vec2::new(value, 0.0),
            Component::W => Vec2::new(0.0, value),
        }
    }
}

/// An initial condition, started from rest unless random.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// `amplitude * sin(mode pi x / l)` on one component, zero velocity.
    SingleMode {
        mode: usize,
        amplitude: f64,
        component: Component,
    },
    /// `amplitude * 4 x (l - x) / l^2` on one component, zero velocity.
    PolynomialBump {
        amplitude: f64,
        component: Component,
    },
    /// Seeded uniform coefficients on the first `count` sine modes of both
    /// displacement and velocity, each scaled by `amplitude / n^2`.
    RandomModes {
        count: usize,
        seed: u64,
        amplitude: f64,
    },
}

/// Sine coefficients of a random preset, displacement and velocity.
pub fn random_coefficients(count: usize, seed: u64, amplitude: f64) -> (Vec<Vec2>, Vec<Vec2>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |scale: f64| {
        let v: f64 = rng.random_range(-1.0..=1.0);
        let w: f64 = rng.random_range(-1.0..=1.0);
        Vec2::new(scale * v, scale * w)
    };
    let mut coeffs = Vec::with_capacity(count);
    let mut rates = Vec::with_capacity(count);
    for n in 1..=count {
        let scale = amplitude / (n * n) as f64;
        coeffs.push(draw(scale));
        rates.push(draw(scale));
    }
    (coeffs, rates)
}

/// Pointwise displacement and velocity of a preset on `[0, length]`.
pub struct Profile {
    length: f64,
    sine_u: Vec<Vec2>,
    sine_ut: Vec<Vec2>,
    bump: Vec2,
}

impl Profile {
    fn series(&self, coeffs: &[Vec2], x: f64) -> Vec2 {
        coeffs.iter().enumerate().fold(Vec2::ZERO, |acc, (k, c)| {
            acc + ((k + 1) as f64 * PI * x / self.length).sin() * *c
        })
    }

    pub fn displacement(&self, x: f64) -> Vec2 {
        let l = self.length;
        self.series(&self.sine_u, x) + (4.0 * x * (l - x) / (l * l)) * self.bump
    }

    pub fn velocity(&self, x: f64) -> Vec2 {
        self.series(&self.sine_ut, x)
    }
}

impl InitialCondition {
    pub fn amplitude(&self) -> f64 {
        match *self {
            InitialCondition::SingleMode { amplitude, .. }
            | InitialCondition::PolynomialBump { amplitude, .. }
            | InitialCondition::RandomModes { amplitude, .. } => amplitude,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match *self {
            InitialCondition::RandomModes { seed, .. } => Some(seed),
            _ => None,
        }
    }

    pub fn with_amplitude(&self, value: f64) -> Self {
        let mut out = self.clone();
        match &mut out {
            InitialCondition::SingleMode { amplitude, .. }
            | InitialCondition::PolynomialBump { amplitude, .. }
            | InitialCondition::RandomModes { amplitude, .. } => *amplitude = value,
        }
        out
    }

    /// Replaces the seed of a random preset; other presets are unchanged.
    pub fn with_seed(&self, value: u64) -> Self {
        let mut out = self.clone();
        if let InitialCondition::RandomModes { seed, .. } = &mut out {
            *seed = value;
        }
        out
    }

    pub fn profile(&self, length: f64) -> Profile {
        let mut p = Profile {
            length,
            sine_u: Vec::new(),
            sine_ut: Vec::new(),
            bump: Vec2::ZERO,
        };
        match *self {
            InitialCondition::SingleMode {
                mode,
                amplitude,
                component,
            } => {
                p.sine_u = vec![Vec2::ZERO; mode];
                p.sine_u[mode - 1] = component.embed(amplitude);
            }
            InitialCondition::PolynomialBump {
                amplitude,
                component,
            } => p.bump = component.embed(amplitude),
            InitialCondition::RandomModes {
                count,
                seed,
                amplitude,
            } => {
                (p.sine_u, p.sine_ut) = random_coefficients(count, seed, amplitude);
            }
        }
        p
    }
}
