use std::fmt;
use std::str::FromStr;

use crate::error::{config, ModelError, Result};

/// Which short-run equilibrium map governs the economy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    MobileBaseline,
    MobileExternalities,
    ImmobileLabour,
    NonSymmetricPreferences,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::MobileBaseline,
        Variant::MobileExternalities,
        Variant::ImmobileLabour,
        Variant::NonSymmetricPreferences,
    ];

    /// Labour moves freely across sectors (wages equalise at beta).
    pub fn is_mobile(self) -> bool {
        !matches!(self, Variant::ImmobileLabour)
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::MobileBaseline => "mobile-baseline",
            Variant::MobileExternalities => "mobile-externalities",
            Variant::ImmobileLabour => "immobile-labour",
            Variant::NonSymmetricPreferences => "non-symmetric",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "mobile-baseline" | "mobile" | "baseline" => Ok(Variant::MobileBaseline),
            "mobile-externalities" | "externalities" => Ok(Variant::MobileExternalities),
            "immobile-labour" | "immobile-labor" | "immobile" => Ok(Variant::ImmobileLabour),
            "non-symmetric" | "nonsymmetric" | "non-symmetric-preferences" => {
                Ok(Variant::NonSymmetricPreferences)
            }
            other => config(format!("unknown variant '{other}'")),
        }
    }
}

/// Structural parameters. Construct through [`ModelParams::new`] so that the
/// well-posedness conditions are always checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub beta: f64,
    pub sigma: f64,
    pub eta: f64,
    pub n: f64,
    pub c0: f64,
    pub variant: Variant,
}

impl ModelParams {
    pub fn new(beta: f64, sigma: f64, eta: f64, n: f64, c0: f64, variant: Variant) -> Result<Self> {
        let p = ModelParams { beta, sigma, eta, n, c0, variant };
        p.validate()?;
        Ok(p)
    }

    /// Baseline mobile economy on the unit circle.
    pub fn mobile(beta: f64, sigma: f64) -> Result<Self> {
        Self::new(beta, sigma, 0.0, 1.0, 0.0, Variant::MobileBaseline)
    }

    pub fn with_c0(mut self, c0: f64) -> Result<Self> {
        self.c0 = c0;
        self.validate()?;
        Ok(self)
    }

    pub fn with_variant(mut self, variant: Variant) -> Result<Self> {
        self.variant = variant;
        self.validate()?;
        Ok(self)
    }

    /// Composite exponent sigma(1-beta)+beta.
    pub fn rho(&self) -> f64 {
        self.sigma * (1.0 - self.beta) + self.beta
    }

    /// Exponent of mu inside the profit rate; negative when well posed.
    pub fn profit_exponent(&self) -> f64 {
        if self.variant.is_mobile() {
            (self.eta * (self.sigma - 1.0) - 1.0) / self.rho()
        } else {
            -((self.beta - self.eta) * (self.sigma - 1.0) + 1.0) / self.sigma
        }
    }

    /// Exponent of mu in the integrand of Z.
    pub fn z_exponent(&self) -> f64 {
        self.profit_exponent() + 1.0
    }

    /// log X = consumption_log_factor * log Z.
    pub fn consumption_log_factor(&self) -> f64 {
        let k = if self.variant.is_mobile() { self.rho() } else { self.sigma };
        k / (self.sigma - 1.0)
    }

    /// Prefactor multiplying log X in the gradient-flow functional.
    pub fn functional_prefactor(&self) -> f64 {
        (1.0 - self.beta) / (1.0 - self.beta + self.eta)
    }

    pub fn validate(&self) -> Result<()> {
        let ModelParams { beta, sigma, eta, n, c0, variant } = *self;
        for (name, v) in [("beta", beta), ("sigma", sigma), ("eta", eta), ("n", n), ("c0", c0)] {
            if !v.is_finite() {
                return config(format!("{name} must be finite, got {v}"));
            }
        }
        if !(beta > 0.0 && beta < 1.0) {
            return config(format!("beta must lie in (0,1), got {beta}"));
        }
        if sigma <= 0.0 || sigma == 1.0 {
            return config(format!("sigma must be positive and different from 1, got {sigma}"));
        }
        if n <= 0.0 {
            return config(format!("n must be positive, got {n}"));
        }
        if c0 < 0.0 {
            return config(format!("c0 must be non-negative, got {c0}"));
        }
        if variant == Variant::MobileBaseline && eta != 0.0 {
            return config("the mobile-baseline variant has no externality; use eta = 0 or mobile-externalities");
        }
        let cond = if variant.is_mobile() {
            eta * (sigma - 1.0) - 1.0
        } else {
            eta * (sigma - 1.0) - beta * (sigma - 1.0) - 1.0
        };
        if cond >= 0.0 {
            return config(format!(
                "ill-posed parameters for {variant}: exponent of mu must be negative, got {cond}"
            ));
        }
        if 1.0 - beta + eta == 0.0 {
            return config("functional prefactor undefined: 1 - beta + eta = 0");
        }
        Ok(())
    }
}
