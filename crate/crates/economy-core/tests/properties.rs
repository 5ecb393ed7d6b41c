mod common;

use common::random_density;
use economy_core::{profiles, short_run_equilibrium, CircleGrid, ModelParams, SectorProfiles, Variant};
use proptest::prelude::*;

fn params_strategy() -> impl Strategy<Value = ModelParams> {
    (0.05f64..0.95, prop_oneof![0.2f64..0.9, 1.1f64..4.0], -0.3f64..0.3, 0usize..4).prop_filter_map(
        "well-posed",
        |(beta, sigma, eta, v)| {
            let variant = Variant::ALL[v];
            let eta = if variant == Variant::MobileBaseline { 0.0 } else { eta };
            ModelParams::new(beta, sigma, eta, 1.0, 0.0, variant).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn numeraire_and_profit_share(params in params_strategy(), seed in 0u64..10_000, amp in 0.0f64..1.5) {
        let g = CircleGrid::new(48, 1.0).unwrap();
        let prof = SectorProfiles::new(g, profiles::sine(&g, 0.5, 0.2, 1.0)).unwrap()
            .with_labour_normalized(profiles::sine(&g, 0.4, 0.7, 1.0)).unwrap()
            .with_gamma_normalized(profiles::sine(&g, 0.3, 0.4, 1.0)).unwrap();
        let mu = random_density(g, seed, amp);
        let eq = short_run_equilibrium(&mu, &prof, &params).unwrap();
        prop_assert!((g.integrate(&eq.y).unwrap() - 1.0).abs() < 1e-10);
        prop_assert!((eq.pi_agg - (1.0 - params.beta)).abs() < 1e-10);
        prop_assert!((eq.x * eq.price_index - 1.0).abs() < 1e-12);
        if params.variant.is_mobile() {
            for (y, l) in eq.y.iter().zip(&eq.l_used) {
                prop_assert!((y - l).abs() < 1e-10);
            }
        }
    }
}
