mod common;

use common::grid;
use economy_core::{profiles, EquilibriumMap, ModelParams, SectorProfiles, Variant};
use equilibrium_analysis::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn efficiency_loss_is_nonnegative(
        beta in 0.1f64..0.95,
        sigma in prop_oneof![0.2f64..0.95, 1.05f64..5.0],
        amp_a in 0.0f64..0.6,
        amp_l in 0.0f64..0.9,
        phase in 0.0f64..1.0,
    ) {
        let g = grid(64);
        let params = ModelParams::new(beta, sigma, 0.0, 1.0, 0.0, Variant::ImmobileLabour).unwrap();
        let prof = SectorProfiles::new(g, profiles::sine(&g, amp_a, 0.0, 1.0)).unwrap()
            .with_labour_normalized(profiles::sine(&g, amp_l, phase, 1.0)).unwrap();
        prop_assert!(efficiency_loss(&prof, &params).unwrap() >= -1e-12);
    }

    #[test]
    fn closed_form_consumption_is_the_aggregate(
        beta in 0.1f64..0.95,
        sigma in prop_oneof![0.2f64..0.95, 1.05f64..4.0],
        eta in -0.2f64..0.2,
        amp in 0.0f64..0.6,
        mobile in any::<bool>(),
    ) {
        let g = grid(64);
        let variant = if mobile { Variant::MobileExternalities } else { Variant::ImmobileLabour };
        let params = ModelParams::new(beta, sigma, eta, 1.0, 0.0, variant);
        prop_assume!(params.is_ok());
        let params = params.unwrap();
        let prof = SectorProfiles::new(g, profiles::sine(&g, amp, 0.3, 1.0)).unwrap()
            .with_labour_normalized(profiles::sine(&g, 0.4, 0.1, 1.0)).unwrap();
        let mu = steady_state(&prof, &params).unwrap();
        let x = EquilibriumMap::new(&prof, &params).unwrap().consumption(mu.values()).unwrap();
        let closed = equilibrium_consumption(&prof, &params).unwrap();
        prop_assert!((x - closed).abs() <= 1e-10 * closed.max(1.0));
    }
}
