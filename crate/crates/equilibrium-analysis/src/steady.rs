use economy_core::{effective_technology, FirmDistribution, ModelParams, SectorProfiles, Variant};

use crate::error::{AnalysisError, Result};

/// Exponent gamma_A = (sigma-1)/(1 - eta(sigma-1)) of the mobile steady state.
pub fn mobile_exponent(params: &ModelParams) -> Result<f64> {
    let den = 1.0 - params.eta * (params.sigma - 1.0);
    if den == 0.0 {
        return Err(AnalysisError::Config("steady-state exponent undefined: 1 - eta(sigma-1) = 0".into()));
    }
    Ok((params.sigma - 1.0) / den)
}

/// Exponent gamma_B = (sigma-1)/(1 + (beta-eta)(sigma-1)) of the immobile steady state.
pub fn immobile_exponent(params: &ModelParams) -> Result<f64> {
    let den = 1.0 + (params.beta - params.eta) * (params.sigma - 1.0);
    if den == 0.0 {
        return Err(AnalysisError::Config("steady-state exponent undefined: 1 + (beta-eta)(sigma-1) = 0".into()));
    }
    Ok((params.sigma - 1.0) / den)
}

/// Per-cell base B and exponent g such that mu_EQ ~ B^g and X_EQ = (int B^g)^(1/g).
fn steady_base(profiles: &SectorProfiles, params: &ModelParams) -> Result<(Vec<f64>, f64)> {
    params.validate()?;
    if params.variant.is_mobile() {
        Ok((effective_technology(profiles, params)?, mobile_exponent(params)?))
    } else {
        let l = profiles
            .labour()
            .ok_or_else(|| AnalysisError::Config("immobile labour variant needs a labour endowment L".into()))?;
        let base = profiles.a0().iter().zip(l).map(|(a, l)| a * l.powf(params.beta)).collect();
        Ok((base, immobile_exponent(params)?))
    }
}

/// Closed-form long-run equilibrium density.
pub fn steady_state(profiles: &SectorProfiles, params: &ModelParams) -> Result<FirmDistribution> {
    let (base, g) = steady_base(profiles, params)?;
    let raw = base.iter().map(|b| b.powf(g)).collect();
    Ok(FirmDistribution::normalized(*profiles.grid(), raw)?)
}

/// Closed-form aggregate consumption at the long-run equilibrium.
pub fn equilibrium_consumption(profiles: &SectorProfiles, params: &ModelParams) -> Result<f64> {
    let (base, g) = steady_base(profiles, params)?;
    let powered: Vec<f64> = base.iter().map(|b| b.powf(g)).collect();
    Ok(profiles.grid().integrate(&powered)?.powf(1.0 / g))
}

fn both_variants(profiles: &SectorProfiles, params: &ModelParams) -> Result<(ModelParams, ModelParams)> {
    if params.variant == Variant::NonSymmetricPreferences {
        return Err(AnalysisError::Config("efficiency loss compares symmetric mobile and immobile economies".into()));
    }
    let mobile = ModelParams { variant: Variant::MobileExternalities, ..*params };
    let immobile = ModelParams { variant: Variant::ImmobileLabour, ..*params };
    mobile.validate()?;
    immobile.validate()?;
    if profiles.labour().is_none() {
        return Err(AnalysisError::Config("efficiency loss needs a labour endowment L".into()));
    }
    Ok((mobile, immobile))
}

/// Long-run consumption lost to labour immobility, X_EQ(mobile) - X_EQ(immobile).
pub fn efficiency_loss(profiles: &SectorProfiles, params: &ModelParams) -> Result<f64> {
    let (mobile, immobile) = both_variants(profiles, params)?;
    Ok(equilibrium_consumption(profiles, &mobile)? - equilibrium_consumption(profiles, &immobile)?)
}

/// Labour endowment that makes immobility costless, L* ~ A0^gamma_A.
pub fn optimal_labor_allocation(profiles: &SectorProfiles, params: &ModelParams) -> Result<Vec<f64>> {
    let mobile = ModelParams { variant: Variant::MobileExternalities, ..*params };
    mobile.validate()?;
    let g = mobile_exponent(&mobile)?;
    let raw: Vec<f64> = profiles.a0().iter().map(|a| a.powf(g)).collect();
    let mass = profiles.grid().integrate(&raw)?;
    Ok(raw.into_iter().map(|v| v / mass).collect())
}
