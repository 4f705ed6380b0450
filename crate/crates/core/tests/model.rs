use aeroslice::channel::{compose_channel, downlink_rate, uplink_rate, ChannelRealization, FadingField, Link};
use aeroslice::energy::{compute_energy, hover_energy, movement_energy, movement_power, total_energy, transmission_energy};
use aeroslice::geometry::{Point2, Point3};
use aeroslice::scenario::{generate_scenario, Role, ScenarioShape, SystemParams};
use aeroslice::sensing::{gathered_information, marginal_information, max_information};
use aeroslice::slicer;
use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;

const L: f64 = 1e6;

fn point() -> impl Strategy<Value = Point2> {
    (0.0..1000.0f64, 0.0..1000.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

#[test]
fn information_examples() {
    let rho = 100.0;
    let a = Point2::new(0.0, 0.0);
    let b = Point2::new(0.0, 300.0);
    let far = Point2::new(900.0, 900.0);
    // users 0 and 2 active, 3 rho apart
    assert_relative_eq!(gathered_information(&[true, false, true], &[a, far, b], L, rho), 1.75 * L);
    assert_eq!(gathered_information(&[false; 3], &[a, far, b], L, rho), 0.0);
    assert_eq!(marginal_information(&[false, false], 1, &[a, b], L, rho).unwrap(), L);
    assert_eq!(marginal_information(&[true, false], 1, &[a, a], L, rho).unwrap(), 0.0);
    let c = Point2::new(100.0, 0.0);
    assert_relative_eq!(marginal_information(&[true, false], 1, &[a, c], L, rho).unwrap(), 0.5 * L);
    assert!(marginal_information(&[true, false], 0, &[a, c], L, rho).is_err());
}

proptest! {
    #[test]
    fn incremental_matches_batch(pts in prop::collection::vec(point(), 1..10), rho in 1.0..1000.0f64) {
        let mut active = vec![false; pts.len()];
        let mut sum = 0.0;
        for i in 0..pts.len() {
            sum += marginal_information(&active, i, &pts, L, rho).unwrap();
            active[i] = true;
        }
        let batch = max_information(&pts, L, rho);
        prop_assert!((sum - batch).abs() <= 1e-9 * batch);
    }

    #[test]
    fn appending_never_loses_information(
        pts in prop::collection::vec(point(), 2..10),
        mask in prop::collection::vec(any::<bool>(), 10),
        rho in 1.0..1000.0f64,
    ) {
        let n = pts.len();
        let mut active: Vec<bool> = mask[..n].to_vec();
        active[n - 1] = false;
        let before = gathered_information(&active, &pts, L, rho);
        prop_assert!(marginal_information(&active, n - 1, &pts, L, rho).unwrap() >= 0.0);
        active[n - 1] = true;
        let after = gathered_information(&active, &pts, L, rho);
        prop_assert!(after >= before);
        prop_assert!(after <= n as f64 * L);
    }

    #[test]
    fn sinr_ignores_common_phase(
        theta in 0.0..std::f64::consts::TAU,
        seed in any::<u64>(),
        x in 0.0..1000.0f64,
        y in 0.0..1000.0f64,
    ) {
        use rand::SeedableRng;
        let p = SystemParams::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let field = FadingField::sample(2, 1, p.antennas_per_uav, &mut rng);
        let uav = Point3::new(500.0, 500.0, 120.0);
        let h0 = compose_channel(Point2::new(x, y), uav, &p, field.nlos(0, 0)).unwrap();
        let h1 = compose_channel(Point2::new(y, x), uav, &p, field.nlos(1, 0)).unwrap();
        let rot = Complex64::from_polar(1.0, theta);
        let h0r = ChannelRealization { gains: h0.gains.iter().map(|g| g * rot).collect(), distance_m: h0.distance_m };
        let base = [Link { user: 0, channel: &h0, power_w: 0.4 }, Link { user: 1, channel: &h1, power_w: 0.6 }];
        let turned = [Link { user: 0, channel: &h0r, power_w: 0.4 }, Link { user: 1, channel: &h1, power_w: 0.6 }];
        for target in 0..2 {
            let (a, _) = downlink_rate(&base, target, 0, &p).unwrap();
            let (b, _) = downlink_rate(&turned, target, 0, &p).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * a);
            let (a, _) = uplink_rate(&base, target, &p).unwrap();
            let (b, _) = uplink_rate(&turned, target, &p).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * a);
        }
    }

    #[test]
    fn movement_power_is_finite_and_above_induced_floor(v in 0.0..40.0f64) {
        let p = SystemParams::default();
        let m = movement_power(v, &p).unwrap();
        prop_assert!(m.is_finite());
        prop_assert!(m >= p.profile_power_w);
    }
}

#[test]
fn energy_component_examples() {
    let p = SystemParams::default();
    let dock = Point3::new(0.0, 0.0, 0.0);
    assert_eq!(movement_energy(dock, dock, &p), 0.0);
    let m = movement_power(12.0, &p).unwrap();
    assert_relative_eq!(movement_energy(dock, Point3::new(120.0, 0.0, 0.0), &p), 10.0 * m, max_relative = 1e-12);
    assert_eq!(hover_energy(std::iter::empty(), &p), 0.0);
    assert_relative_eq!(hover_energy([5e8 / 1e6], &p), p.hover_power_w() * 500.0, max_relative = 1e-12);
    assert_relative_eq!(hover_energy([100.0, 80.0], &p), p.hover_power_w() * 100.0, max_relative = 1e-12);
    assert_eq!(compute_energy(std::iter::empty(), &p), 0.0);
    assert_relative_eq!(compute_energy([4e9], &p), 1.12, max_relative = 1e-12);
    assert_eq!(transmission_energy(std::iter::empty(), 0).unwrap(), 0.0);
    assert_relative_eq!(transmission_energy([(0, 1.0, 5e8, 1e6)], 0).unwrap(), 500.0);
    assert!(transmission_energy([(0, 1.0, 5e8, 0.0)], 0).is_err());
}

/// Re-prices every deployed UAV straight from the channel model and the
/// four energy components, then compares with the solver's own ledger.
fn independent_total(sol: &slicer::SliceSolution, sc: &aeroslice::scenario::Scenario, fading: &FadingField) -> f64 {
    let p = &sc.params;
    let mut total = 0.0;
    for &k in &sol.deployed {
        let at = sol.placements[&k];
        let users = sol.users_of(k);
        let active = |i: usize| sc.sensing_slot(i).is_none_or(|s| sol.activation[s]);
        let content: Vec<usize> = users.iter().copied().filter(|&i| sc.role(i) == Role::Content).collect();
        let uplink: Vec<usize> =
            users.iter().copied().filter(|&i| sc.role(i) != Role::Content && active(i)).collect();
        let ch = |i: usize| fading.channel(sc, i, k, at).unwrap();
        let dl: Vec<_> = content.iter().map(|&i| ch(i)).collect();
        let ul: Vec<_> = uplink.iter().map(|&i| ch(i)).collect();
        let power = |i: usize| sol.power[&k].per_user_w[&i];
        let dl_links: Vec<Link> =
            content.iter().zip(&dl).map(|(&user, channel)| Link { user, channel, power_w: power(user) }).collect();
        let ul_links: Vec<Link> = uplink
            .iter()
            .zip(&ul)
            .map(|(&user, channel)| Link { user, channel, power_w: p.user_tx_power_w })
            .collect();
        let mut times = Vec::new();
        let mut transmit = 0.0;
        for &i in &content {
            let (_, r) = downlink_rate(&dl_links, i, k, p).unwrap();
            let t = sc.demand_bits(i) / r;
            times.push(t);
            transmit += power(i) * t;
        }
        let mut cpu = 0.0;
        for &i in &uplink {
            let (_, r) = uplink_rate(&ul_links, i, p).unwrap();
            if sc.role(i) == Role::Sensing {
                times.push(p.raw_data_bits / r);
            } else {
                let f = sol.compute[&k].per_user_hz[&i];
                times.push(p.task_bits / r + p.task_bits * p.cycles_per_bit / f);
                cpu += p.switched_capacitance * p.task_bits * p.cycles_per_bit * f * f;
            }
        }
        let hover = p.hover_power_w() * times.iter().copied().fold(0.0, f64::max);
        let fly = movement_power(p.uav_speed_mps, p).unwrap() / p.uav_speed_mps
            * sc.uavs[k].docking_position.distance(&at);
        total += fly + hover + cpu + transmit;
    }
    total
}

#[test]
fn objective_matches_independent_repricing() {
    let params = SystemParams::default();
    let shape = ScenarioShape { content_users: 3, sensing_users: 3, mec_users: 3, uavs: 3, contents: 3, storage_fraction: 0.75 };
    for seed in 0..12 {
        let sc = generate_scenario(&params, &shape, seed).unwrap();
        let fading = FadingField::for_scenario(&sc);
        let sol = slicer::solve(&sc, &fading).unwrap();
        let oracle = independent_total(&sol, &sc, &fading);
        assert_relative_eq!(sol.objective_j, oracle, max_relative = 1e-9);
        let ledger = total_energy(&sol, &sc, &fading).unwrap();
        assert_relative_eq!(ledger.total_j, oracle, max_relative = 1e-9);
        let parts: f64 = ledger.per_uav.values().map(|e| e.movement_j + e.hover_j + e.compute_j + e.transmit_j).sum();
        assert_relative_eq!(parts, ledger.total_j, max_relative = 1e-12);
    }
}
