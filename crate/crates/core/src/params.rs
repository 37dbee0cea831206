//! Physical constants of the string and the reduced coefficients of the
//! equation of motion
//!
//! ```text
//! u_tt + 2 delta u_t = (a^2 + b * integral |u_x|^2 dx) u_xx,   0 < x < l
//! ```
//!
//! with `a^2 = T0 / (rho A)` and `b = E / (2 rho l)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Material and geometric constants of a string with viscous damping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalString {
    pub tension: f64,
    pub density: f64,
    pub area: f64,
    pub youngs_modulus: f64,
    pub length: f64,
    pub damping: f64,
}

/// The four coefficients the dynamics depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParameters {
    length: f64,
    damping: f64,
    a_sq: f64,
    b_coeff: f64,
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::ParameterDomain {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::ParameterDomain {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}

impl PhysicalString {
    pub fn validate(&self) -> Result<()> {
        positive("tension", self.tension)?;
        positive("density", self.density)?;
        positive("area", self.area)?;
        // E = 0 is admitted: it switches off the Kirchhoff term.
        non_negative("youngs_modulus", self.youngs_modulus)?;
        positive("length", self.length)?;
        non_negative("damping", self.damping)
    }
}

/// `a^2 = T0/(rho A)`, `b = E/(2 rho l)`; length and damping pass through.
pub fn derive_wave_parameters(phys: &PhysicalString) -> Result<WaveParameters> {
    phys.validate()?;
    WaveParameters::new(
        phys.length,
        phys.damping,
        phys.tension / (phys.density * phys.area),
        phys.youngs_modulus / (2.0 * phys.density * phys.length),
    )
}

impl WaveParameters {
    pub fn new(length: f64, damping: f64, a_sq: f64, b_coeff: f64) -> Result<Self> {
        positive("length", length)?;
        non_negative("damping", damping)?;
        positive("a_sq", a_sq)?;
        non_negative("b_coeff", b_coeff)?;
        Ok(Self {
            length,
            damping,
            a_sq,
            b_coeff,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }

    pub fn a_sq(&self) -> f64 {
        self.a_sq
    }

    /// Wave speed `a`.
    pub fn wave_speed(&self) -> f64 {
        self.a_sq.sqrt()
    }

    pub fn b_coeff(&self) -> f64 {
        self.b_coeff
    }

    /// Frequency of the lowest linear mode, `pi a / l`.
    pub fn fundamental_frequency(&self) -> f64 {
        PI * self.wave_speed() / self.length
    }

    /// `delta l / (pi a)`.
    pub fn dimensionless_damping(&self) -> f64 {
        self.damping / self.fundamental_frequency()
    }

    pub fn with_damping(&self, damping: f64) -> Result<Self> {
        Self::new(self.length, damping, self.a_sq, self.b_coeff)
    }

    pub fn with_b_coeff(&self, b_coeff: f64) -> Result<Self> {
        Self::new(self.length, self.damping, self.a_sq, b_coeff)
    }

    /// Effective tension coefficient `a^2 + b S` for Kirchhoff scalar `S`.
    pub fn tension_factor(&self, kirchhoff_scalar: f64) -> f64 {
        self.a_sq + self.b_coeff * kirchhoff_scalar
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn phys(t0: f64, rho: f64, a: f64, e: f64, l: f64, d: f64) -> PhysicalString {
        PhysicalString {
            tension: t0,
            density: rho,
            area: a,
            youngs_modulus: e,
            length: l,
            damping: d,
        }
    }

    #[test]
    fn unit_constants() {
        let p = derive_wave_parameters(&phys(1.0, 1.0, 1.0, 2.0, 1.0, 0.1)).unwrap();
        assert_eq!(p.length(), 1.0);
        assert_eq!(p.damping(), 0.1);
        assert_eq!(p.a_sq(), 1.0);
        assert_eq!(p.b_coeff(), 1.0);
    }

    #[test]
    fn zero_modulus_is_linear() {
        let p = derive_wave_parameters(&phys(4.0, 1.0, 1.0, 0.0, 2.0, 0.0)).unwrap();
        assert_eq!(
            (p.length(), p.damping(), p.a_sq(), p.b_coeff()),
            (2.0, 0.0, 4.0, 0.0)
        );
    }

    #[test]
    fn hand_evaluated_case() {
        // a^2 = 2/(0.5*2) = 2, b = 3/(2*0.5*1.5) = 2
        let p = derive_wave_parameters(&phys(2.0, 0.5, 2.0, 3.0, 1.5, 0.2)).unwrap();
        assert_relative_eq!(p.a_sq(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(p.b_coeff(), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn rejects_non_positive_constants() {
        assert!(derive_wave_parameters(&phys(0.0, 1.0, 1.0, 1.0, 1.0, 0.1)).is_err());
        assert!(derive_wave_parameters(&phys(1.0, -1.0, 1.0, 1.0, 1.0, 0.1)).is_err());
        assert!(derive_wave_parameters(&phys(1.0, 1.0, 1.0, 1.0, 0.0, 0.1)).is_err());
        assert!(derive_wave_parameters(&phys(1.0, 1.0, 1.0, -1.0, 1.0, 0.1)).is_err());
        assert!(derive_wave_parameters(&phys(1.0, 1.0, 1.0, 1.0, 1.0, -0.1)).is_err());
        assert!(WaveParameters::new(1.0, 0.1, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn wave_speed_is_homogeneous_in_tension_and_density() {
        for scale in [0.5, 3.0, 17.0] {
            let base = derive_wave_parameters(&phys(2.0, 0.7, 1.3, 1.0, 1.0, 0.1)).unwrap();
            let scaled =
                derive_wave_parameters(&phys(2.0 * scale, 0.7 * scale, 1.3, 1.0, 1.0, 0.1))
                    .unwrap();
            assert_relative_eq!(base.a_sq(), scaled.a_sq(), max_relative = 1e-14);
        }
    }
}
