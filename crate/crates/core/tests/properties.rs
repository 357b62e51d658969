use std::f64::consts::PI;

use proptest::prelude::*;

use gevrey_core::experiment::parse_config;
use gevrey_core::lab::{check_embedding, sample_gevrey_field, EnsembleSpec};
use gevrey_core::solver::{linear_propagate, WaveState};
use gevrey_core::spectral::{
    gevrey_norm, lp_norm, make_grid, pure_power, Complex64, GevreyIndex, PhysicalField, SpectralField,
};

fn field_1d(values: Vec<(f64, f64)>, extent: f64) -> PhysicalField {
    let g = make_grid(1, extent, values.len()).unwrap();
    PhysicalField::new(g, values.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
}

fn samples(n: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), n)
}

/// Random trigonometric polynomial with modes `|k| <= band` on `[-pi, pi)`.
fn band_limited(band: i64, points: usize) -> impl Strategy<Value = PhysicalField> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), (2 * band + 1) as usize).prop_map(move |c| {
        let g = make_grid(1, 2.0 * PI, points).unwrap();
        SpectralField::from_wavenumber_fn(g, |k| {
            if k[0].abs() <= band {
                let (a, b) = c[(k[0] + band) as usize];
                Complex64::new(a, b)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .inverse()
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_round_trip(v in samples(48), extent in 0.5f64..50.0) {
        let f = field_1d(v, extent);
        let back = f.forward().inverse();
        prop_assert!(back.sup_distance(&f).unwrap() <= 1e-12 * f.max_abs().max(1e-300));
    }

    #[test]
    fn plancherel(v in samples(40), extent in 0.5f64..50.0) {
        let f = field_1d(v, extent);
        let spectral = gevrey_norm(&f, GevreyIndex::L2).unwrap();
        let physical = lp_norm(&f, 2.0).unwrap();
        prop_assert!(rel(spectral, physical) < 1e-12);
    }

    #[test]
    fn norm_monotone_in_sigma_and_s(
        v in samples(32),
        s1 in 0.0f64..2.0, ds in 0.0f64..1.0,
        sig in 0.0f64..1.0, dsig in 0.0f64..1.0,
    ) {
        let f = field_1d(v, 2.0 * PI);
        let n = |sigma, s| gevrey_norm(&f, GevreyIndex::new(sigma, s).unwrap()).unwrap();
        prop_assert!(n(sig, s1) <= n(sig + dsig, s1) * (1.0 + 1e-14));
        prop_assert!(n(sig, s1) <= n(sig, s1 + ds) * (1.0 + 1e-14));
    }

    #[test]
    fn embedding_never_exceeds_one(
        seed in any::<u64>(),
        sigma_to in 0.0f64..0.4, gap in 0.05f64..0.5, s in 0.0f64..3.0,
    ) {
        let spec = EnsembleSpec::new(make_grid(1, 32.0, 128).unwrap(), 0.5, 10.0, 1.0, seed).unwrap();
        let f = sample_gevrey_field(&spec).unwrap();
        let from = GevreyIndex::new(sigma_to + gap, 0.0).unwrap();
        let to = GevreyIndex::new(sigma_to, s).unwrap();
        let r = check_embedding(&f, from, to).unwrap();
        prop_assert!(r.ratio <= 1.0 + 1e-12, "ratio {}", r.ratio);
    }

    #[test]
    fn resolved_power_matches_naive(f in band_limited(4, 64), p in prop::sample::select(vec![1u32, 2, 3, 5, 7])) {
        // p * 4 < 32, so the naive power is exact on the grid
        let dealiased = pure_power(&f, p).unwrap();
        let naive = f.map(|z| z.powi(p as i32));
        let scale = naive.max_abs().max(1e-300);
        prop_assert!(dealiased.sup_distance(&naive).unwrap() <= 1e-11 * scale);
    }

    #[test]
    fn linear_group_property(
        u in samples(32), v in samples(32),
        t in -5.0f64..5.0, s in -5.0f64..5.0,
    ) {
        let state = WaveState::new(field_1d(u, 2.0 * PI), field_1d(v, 2.0 * PI), 0.0).unwrap();
        let split = linear_propagate(&linear_propagate(&state, t), s);
        let joint = linear_propagate(&state, t + s);
        let scale = joint.u.max_abs().max(joint.v.max_abs()).max(1.0);
        prop_assert!(split.sup_distance(&joint).unwrap() <= 1e-11 * scale);
    }

    #[test]
    fn linear_flow_conserves_quadratic_energy(
        u in band_limited(15, 32), v in band_limited(15, 32), t in 0.0f64..20.0,
    ) {
        // the Nyquist mode carries no gradient energy, so the data avoid it
        let state = WaveState::new(u, v, 0.0).unwrap();
        let energy = |s: &WaveState| {
            gevrey_core::solver::energy_parts(s, 0.0, 3).unwrap().linear()
        };
        prop_assert!(rel(energy(&state), energy(&linear_propagate(&state, t))) < 1e-11);
    }

    #[test]
    fn config_parser_never_panics(text in "\\PC{0,200}") {
        let _ = parse_config(&text);
    }

    #[test]
    fn config_parser_never_panics_on_near_valid_input(
        lines in prop::collection::vec(
            (
                prop::sample::select(vec![
                    "kind", "d", "L", "N", "p", "dt", "T", "eps", "sigma", "theta", "samples",
                    "band_limit", "decay_sigma", "record_every", "profile", "bogus",
                ]),
                prop::sample::select(vec![
                    "simulate", "track-radius", "1", "2", "3", "-1", "0", "1e400", "nan",
                    "0.5", "true", "gaussian", "", "= =",
                ]),
            ),
            0..16,
        )
    ) {
        let text: String = lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        let _ = parse_config(&text);
    }
}
