use crate::{Error, Result};

/// Model weights, ALM penalty schedule and solver controls.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparams {
    /// Weight of the reconstruction term.
    pub alpha: f64,
    /// Weight of `‖W‖²_F`.
    pub beta: f64,
    /// ℓ1 weight on the split confidence copy.
    pub mu: f64,
    /// Nuclear-norm weight on the noise component.
    pub nu: f64,
    pub lambda0: f64,
    pub rho0: f64,
    pub lambda_max: f64,
    pub rho_max: f64,
    /// Geometric penalty growth per outer iteration.
    pub tau: f64,
    /// Initial step of the backtracking line search on `W`.
    pub eta_w: f64,
    /// Initial step of the backtracking line search on `P`.
    pub eta_p: f64,
    pub inner_steps: usize,
    pub iter_max: usize,
    pub loss_tol: f64,
    pub k_neighbors: usize,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self {
            alpha: 0.02,
            beta: 1e-3,
            mu: 0.1,
            nu: 1.0,
            lambda0: 1e-6,
            rho0: 1e-6,
            lambda_max: 1e6,
            rho_max: 1e6,
            tau: 1.05,
            eta_w: 1e-2,
            eta_p: 1e-2,
            inner_steps: 5,
            iter_max: 200,
            loss_tol: 1e-6,
            k_neighbors: 10,
        }
    }
}

impl Hyperparams {
    /// Loss weights (`alpha`, `beta`, `mu`, `nu`) may be zero; everything
    /// else must be strictly positive, with `tau > 1` and initial penalties
    /// not above their caps.
    pub fn validate(&self) -> Result<()> {
        fn nonneg(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidHyperparameter { name, reason: "must be finite and nonnegative" })
            }
        }
        fn positive(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidHyperparameter { name, reason: "must be finite and positive" })
            }
        }
        nonneg("alpha", self.alpha)?;
        nonneg("beta", self.beta)?;
        nonneg("mu", self.mu)?;
        nonneg("nu", self.nu)?;
        positive("lambda0", self.lambda0)?;
        positive("rho0", self.rho0)?;
        positive("lambda_max", self.lambda_max)?;
        positive("rho_max", self.rho_max)?;
        positive("eta_w", self.eta_w)?;
        positive("eta_p", self.eta_p)?;
        positive("loss_tol", self.loss_tol)?;
        if !(self.tau.is_finite() && self.tau > 1.0) {
            return Err(Error::InvalidHyperparameter { name: "tau", reason: "must exceed 1" });
        }
        if self.lambda0 > self.lambda_max {
            return Err(Error::InvalidHyperparameter { name: "lambda0", reason: "exceeds lambda_max" });
        }
        if self.rho0 > self.rho_max {
            return Err(Error::InvalidHyperparameter { name: "rho0", reason: "exceeds rho_max" });
        }
        if self.inner_steps == 0 {
            return Err(Error::InvalidHyperparameter { name: "inner_steps", reason: "must be positive" });
        }
        if self.k_neighbors == 0 {
            return Err(Error::InvalidHyperparameter { name: "k_neighbors", reason: "must be positive" });
        }
        Ok(())
    }

    pub fn initial_penalties(&self) -> Penalties {
        Penalties { lambda: self.lambda0, rho: self.rho0 }
    }
}

/// Current ALM penalty parameters: `lambda` for `Y = P + E`, `rho` for `P = J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Penalties {
    pub lambda: f64,
    pub rho: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Hyperparams::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            Hyperparams { tau: 1.0, ..Default::default() },
            Hyperparams { lambda0: 2e6, ..Default::default() },
            Hyperparams { alpha: -1.0, ..Default::default() },
            Hyperparams { inner_steps: 0, ..Default::default() },
            Hyperparams { eta_p: f64::NAN, ..Default::default() },
        ];
        for hp in bad {
            assert!(matches!(hp.validate(), Err(Error::InvalidHyperparameter { .. })), "{hp:?}");
        }
    }
}
