use crate::error::{Error, Result};

/// Tolerance on `M = 2ε/ω` for the integer case.
pub const INTEGER_TOL: f64 = 1e-9;

/// Physical parameters `ω, g, ε, Δ` of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    omega: f64,
    g: f64,
    epsilon: f64,
    delta: f64,
}

impl ModelParams {
    pub fn new(omega: f64, g: f64, epsilon: f64, delta: f64) -> Result<Self> {
        let all = [omega, g, epsilon, delta];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite parameter in (ω, g, ε, Δ) = {all:?}"
            )));
        }
        if omega <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "ω must be positive, got {omega}"
            )));
        }
        for (name, v) in [("g", g), ("ε", epsilon), ("Δ", delta)] {
            if v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be ≥ 0, got {v}"
                )));
            }
        }
        Ok(ModelParams {
            omega,
            g,
            epsilon,
            delta,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn with_g(&self, g: f64) -> Result<Self> {
        Self::new(self.omega, g, self.epsilon, self.delta)
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.omega, self.g, epsilon, self.delta)
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(self.omega, self.g, self.epsilon, delta)
    }

    /// `M = 2ε/ω`.
    pub fn big_m(&self) -> f64 {
        2.0 * self.epsilon / self.omega
    }

    pub fn g_tilde(&self) -> f64 {
        self.g / self.omega
    }

    pub fn delta_tilde(&self) -> f64 {
        self.delta / self.omega
    }

    /// Energy shift `g²/ω` between the rotated and the original frame.
    pub fn frame_shift(&self) -> f64 {
        self.g * self.g / self.omega
    }

    pub fn is_integer_case(&self) -> bool {
        self.integer_m().is_some()
    }

    /// `M` as an integer when it is one (within [`INTEGER_TOL`]) and at least 1.
    pub fn integer_m(&self) -> Option<u32> {
        let m = self.big_m();
        let r = m.round();
        if (m - r).abs() < INTEGER_TOL && r >= 1.0 {
            Some(r as u32)
        } else {
            None
        }
    }

    /// True for any integer `M`, including the symmetric model `M = 0`.
    pub fn m_is_integral(&self) -> bool {
        let m = self.big_m();
        (m - m.round()).abs() < INTEGER_TOL
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let p = ModelParams::new(2.0, 1.0, 0.5, 0.3).unwrap();
        assert_eq!(p.big_m(), 0.5);
        assert_eq!(p.g_tilde(), 0.5);
        assert_eq!(p.delta_tilde(), 0.15);
        assert_eq!(p.frame_shift(), 0.5);
        assert!(!p.is_integer_case());
    }

    #[test]
    fn integer_case_detection() {
        assert_eq!(
            ModelParams::new(1.0, 1.0, 1.5, 0.3).unwrap().integer_m(),
            Some(3)
        );
        assert_eq!(
            ModelParams::new(1.0, 1.0, 0.0, 0.3).unwrap().integer_m(),
            None
        );
        assert!(ModelParams::new(1.0, 1.0, 0.0, 0.3)
            .unwrap()
            .m_is_integral());
        assert_eq!(
            ModelParams::new(1.0, 1.0, 0.5 + 1e-12, 0.3)
                .unwrap()
                .integer_m(),
            Some(1)
        );
    }

    #[test]
    fn rejects_invalid() {
        assert!(ModelParams::new(0.0, 1.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, -1.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, f64::NAN, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.0, -0.1).is_err());
    }
}
