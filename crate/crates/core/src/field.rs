//! State representations of the transverse displacement `u = (v, w)`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A two-component transverse vector `(v, w)`.
///
/// The planar string is the special case `w = 0`; no separate code path
/// exists for it.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub v: f64,
    pub w: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { v: 0.0, w: 0.0 };

    pub const fn new(v: f64, w: f64) -> Self {
        Self { v, w }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.v * other.v + self.w * other.w
    }

    /// Squared Euclidean norm `v^2 + w^2`.
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.v.is_finite() && self.w.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.v + rhs.v, self.w + rhs.w)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.v += rhs.v;
        self.w += rhs.w;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.v - rhs.v, self.w - rhs.w)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.v, -self.w)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.v * rhs, self.w * rhs)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, rhs: Vec2) -> Vec2 {
        rhs * self
    }
}

/// Uniform grid on `[0, l]` including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    length: f64,
    num_points: usize,
}

impl Grid {
    pub fn new(length: f64, num_points: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::ParameterDomain {
                name: "length",
                value: length,
                reason: "must be finite and > 0",
            });
        }
        if num_points < 2 {
            return Err(Error::Config(format!(
                "a grid needs at least 2 points, got {num_points}"
            )));
        }
        Ok(Self { length, num_points })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn spacing(&self) -> f64 {
        self.length / (self.num_points - 1) as f64
    }

    /// Abscissa of node `j`; the last node is exactly `l`.
    pub fn x(&self, j: usize) -> f64 {
        if j + 1 == self.num_points {
            self.length
        } else {
            j as f64 * self.spacing()
        }
    }

    pub fn abscissae(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.num_points).map(move |j| self.x(j))
    }
}

/// Evaluates `profile` at every node of `grid`, endpoints included.
pub fn sample_function_on_grid<F>(profile: F, grid: &Grid) -> Vec<Vec2>
where
    F: Fn(f64) -> Vec2,
{
    grid.abscissae().map(profile).collect()
}

/// Sine-basis coefficients `b_n(t)` and rates `b_n'(t)`, `n = 1..=N`.
///
/// `u(x, t) = sum_n b_n(t) sin(n pi x / l)` vanishes at both ends by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalState {
    pub time: f64,
    length: f64,
    coeffs: Vec<Vec2>,
    rates: Vec<Vec2>,
}

impl ModalState {
    pub fn new(time: f64, length: f64, coeffs: Vec<Vec2>, rates: Vec<Vec2>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Config(
                "a modal state needs at least one mode".into(),
            ));
        }
        if coeffs.len() != rates.len() {
            return Err(Error::Config(format!(
                "{} coefficients but {} rates",
                coeffs.len(),
                rates.len()
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::ParameterDomain {
                name: "length",
                value: length,
                reason: "must be finite and > 0",
            });
        }
        if !coeffs.iter().chain(&rates).all(|c| c.is_finite()) {
            return Err(Error::Divergence { t: time });
        }
        Ok(Self {
            time,
            length,
            coeffs,
            rates,
        })
    }

    pub fn zeros(length: f64, num_modes: usize) -> Result<Self> {
        Self::new(
            0.0,
            length,
            vec![Vec2::ZERO; num_modes],
            vec![Vec2::ZERO; num_modes],
        )
    }

    pub fn num_modes(&self) -> usize {
        self.coeffs.len()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// `b_1, ..., b_N`.
    pub fn coeffs(&self) -> &[Vec2] {
        &self.coeffs
    }

    /// `b_1', ..., b_N'`.
    pub fn rates(&self) -> &[Vec2] {
        &self.rates
    }

    pub(crate) fn from_parts_unchecked(
        time: f64,
        length: f64,
        coeffs: Vec<Vec2>,
        rates: Vec<Vec2>,
    ) -> Self {
        Self {
            time,
            length,
            coeffs,
            rates,
        }
    }
}

/// Collocated samples of `u` and `u_t` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub time: f64,
    grid: Grid,
    u: Vec<Vec2>,
    ut: Vec<Vec2>,
}

impl GridState {
    /// Endpoint samples of both `u` and `u_t` must be exactly zero.
    pub fn new(time: f64, grid: Grid, u: Vec<Vec2>, ut: Vec<Vec2>) -> Result<Self> {
        let n = grid.num_points();
        if u.len() != n || ut.len() != n {
            return Err(Error::Config(format!(
                "grid has {n} points but got {} displacement and {} velocity samples",
                u.len(),
                ut.len()
            )));
        }
        for (j, x) in [(0, 0.0), (n - 1, grid.length())] {
            for field in [&u, &ut] {
                if field[j] != Vec2::ZERO {
                    return Err(Error::BoundaryCondition {
                        x,
                        value: field[j].norm(),
                    });
                }
            }
        }
        Ok(Self { time, grid, u, ut })
    }

    /// Samples initial displacement and velocity profiles.
    ///
    /// Endpoint values within `1e-12` of the profile's peak magnitude are
    /// treated as rounding of an exact zero (e.g. `sin(pi)`) and snapped;
    /// anything larger is a boundary-condition violation.
    pub fn from_profiles<F, G>(grid: Grid, u0: F, u1: G) -> Result<Self>
    where
        F: Fn(f64) -> Vec2,
        G: Fn(f64) -> Vec2,
    {
        let mut u = sample_function_on_grid(u0, &grid);
        let mut ut = sample_function_on_grid(u1, &grid);
        for field in [&mut u, &mut ut] {
            snap_endpoints(field, &grid)?;
        }
        Self::new(0.0, grid, u, ut)
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.num_points();
        Self {
            time: 0.0,
            grid,
            u: vec![Vec2::ZERO; n],
            ut: vec![Vec2::ZERO; n],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn num_points(&self) -> usize {
        self.grid.num_points()
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing()
    }

    pub fn u(&self) -> &[Vec2] {
        &self.u
    }

    pub fn ut(&self) -> &[Vec2] {
        &self.ut
    }

    pub(crate) fn from_parts_unchecked(time: f64, grid: Grid, u: Vec<Vec2>, ut: Vec<Vec2>) -> Self {
        Self { time, grid, u, ut }
    }
}

/// Relative threshold below which an endpoint sample counts as zero.
pub const ENDPOINT_ROUNDING: f64 = 1e-12;

pub(crate) fn snap_endpoints(field: &mut [Vec2], grid: &Grid) -> Result<()> {
    let scale = field.iter().map(|s| s.norm()).fold(1.0_f64, f64::max);
    let last = field.len() - 1;
    for (j, x) in [(0, 0.0), (last, grid.length())] {
        let magnitude = field[j].norm();
        if !(magnitude <= ENDPOINT_ROUNDING * scale) {
            return Err(Error::BoundaryCondition {
                x,
                value: magnitude,
            });
        }
        field[j] = Vec2::ZERO;
    }
    Ok(())
}
