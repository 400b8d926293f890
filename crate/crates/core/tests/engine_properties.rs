use isac_core::power::{comm_snr, solve_power_split, vlc_gain, vlc_snr};
use isac_core::scenario::{default_config, place_users};
use isac_core::sensing::sensing_snr;
use isac_core::{run_monte_carlo, run_monte_carlo_with_threads, run_trial, trial_seed, Decision, Mode, Scenario, ScenarioConfig};
use proptest::prelude::*;

fn scenario(edit: impl FnOnce(&mut ScenarioConfig)) -> Scenario {
    let mut c = default_config();
    edit(&mut c);
    Scenario::from_config(&c).unwrap()
}

#[test]
fn relaxed_thresholds_serve_everyone() {
    let s = scenario(|c| {
        c.thresholds.gamma_sens_db = -300.0;
        c.thresholds.gamma_comm_db = -300.0;
        c.thresholds.gamma_vlc_db = -300.0;
    });
    for seed in 0..200 {
        let t = run_trial(&s, seed).unwrap();
        assert_eq!(t.metrics.unserved_count, 0, "seed {seed}");
    }
}

#[test]
fn standalone_leaves_at_least_as_many_unserved() {
    let proposed = scenario(|c| c.blockage.enabled = true);
    let standalone = scenario(|c| {
        c.blockage.enabled = true;
        c.mode = Mode::StandaloneThz;
    });
    for seed in 0..200 {
        let a = run_trial(&proposed, seed).unwrap().metrics.unserved_count;
        let b = run_trial(&standalone, seed).unwrap().metrics.unserved_count;
        assert!(b >= a, "seed {seed}");
    }
}

#[test]
fn association_respects_rules() {
    let s = scenario(|_| {});
    for seed in 0..200 {
        let t = run_trial(&s, seed).unwrap();
        let users = place_users(&s, seed);
        for (n, d) in t.association.decisions.iter().enumerate() {
            match d {
                Decision::ThzComm => assert!(t.detections[n].p_d > s.thresholds.pd_th),
                Decision::Vlc(l) => {
                    assert!(t.detections[n].p_d <= s.thresholds.pd_th);
                    let gains: Vec<f64> = s.vlc_aps.iter().map(|ap| vlc_gain(ap, &users[n], &s).unwrap()).collect();
                    let best = gains.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    assert_eq!(gains[*l], best);
                    assert!(gains[..*l].iter().all(|&g| g < best), "tie must go to the lowest index");
                    let snr = t.association.snr[n];
                    assert!(snr >= s.thresholds.gamma_vlc * (1.0 - 1e-9));
                }
                Decision::Unserved => assert_eq!(t.association.snr[n], 0.0),
            }
        }
        assert_eq!(t.metrics.total_power, t.milp.objective);
        assert!((t.metrics.avg_ee * t.metrics.total_power - t.metrics.avg_se).abs() <= 1e-12 * t.metrics.avg_se.max(1e-300));
    }
}

#[test]
fn blockage_shifts_users_off_thz() {
    let off = run_monte_carlo(&scenario(|_| {}), 200, 3).unwrap();
    let on = run_monte_carlo(&scenario(|c| c.blockage.enabled = true), 200, 3).unwrap();
    assert!(off.mean("thz_user_count") >= on.mean("thz_user_count"));
}

#[test]
fn monte_carlo_independent_of_threads() {
    let s = scenario(|c| c.blockage.enabled = true);
    let a = run_monte_carlo_with_threads(&s, 300, 17, Some(1)).unwrap();
    let b = run_monte_carlo_with_threads(&s, 300, 17, Some(8)).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn optimized_never_exceeds_all_on() {
    for n in [1, 4, 10] {
        let opt = scenario(|c| c.users.count = n);
        let non = scenario(|c| {
            c.users.count = n;
            c.mode = Mode::NonOptimized;
        });
        for seed in 0..100 {
            let a = run_trial(&opt, seed).unwrap().metrics;
            let b = run_trial(&non, seed).unwrap().metrics;
            assert!(a.total_power <= b.total_power);
            assert!(a.avg_ee >= b.avg_ee);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// At a fixed power split, blockage can only lower every link's SNR.
    #[test]
    fn blockage_never_helps_at_fixed_split(seed in any::<u64>(), rho1 in 0.0f64..1.0) {
        let off = scenario(|c| c.thz.rho1_override = Some(rho1));
        let on = scenario(|c| {
            c.thz.rho1_override = Some(rho1);
            c.blockage.enabled = true;
        });
        for u in place_users(&off, seed) {
            prop_assert!(sensing_snr(&u, &on, rho1).unwrap() <= sensing_snr(&u, &off, rho1).unwrap());
            prop_assert!(comm_snr(&u, &on, rho1).unwrap() <= comm_snr(&u, &off, rho1).unwrap());
            for ap in &off.vlc_aps {
                let p = ap.max_power;
                prop_assert!(
                    vlc_snr(vlc_gain(ap, &u, &on).unwrap(), p, &u, ap)
                        <= vlc_snr(vlc_gain(ap, &u, &off).unwrap(), p, &u, ap)
                );
            }
        }
    }

    /// With the solved split, blockage raises rho1, so THz comm SNRs still
    /// cannot grow.
    #[test]
    fn blockage_never_helps_thz_comm(seed in any::<u64>()) {
        let off = scenario(|_| {});
        let on = scenario(|c| c.blockage.enabled = true);
        let users = place_users(&off, seed);
        let r_off = solve_power_split(&off, &users).unwrap().rho1;
        let r_on = solve_power_split(&on, &users).unwrap().rho1;
        prop_assert!(r_on >= r_off);
        for u in &users {
            prop_assert!(comm_snr(u, &on, r_on).unwrap() <= comm_snr(u, &off, r_off).unwrap());
        }
    }

    #[test]
    fn trials_conserve_users(seed in any::<u64>(), n in 1usize..15, mode in 0usize..3, blockage: bool) {
        let s = scenario(|c| {
            c.users.count = n;
            c.mode = Mode::ALL[mode];
            c.blockage.enabled = blockage;
        });
        let t = run_trial(&s, trial_seed(seed, 0)).unwrap();
        prop_assert_eq!(t.metrics.user_count(), n);
        prop_assert_eq!(t.association.decisions.len(), n);
        prop_assert!((0.0..=1.0).contains(&t.metrics.sc_p));
        prop_assert!(t.metrics.avg_comm_rate >= 0.0 && t.metrics.avg_sens_rate >= 0.0);
    }
}
