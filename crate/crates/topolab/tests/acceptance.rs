//! End-to-end acceptance checks. Each test covers one numbered criterion
//! and prints a single pass line with its elapsed time; run with
//! `--nocapture` to see the lines.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use topolab::closure::{make_mu, topology_from_closure, VerifyMode};
use topolab::nets::{check_closure_net_theorem, check_final_lemma};
use topolab::reach::{
    attainable_cloud, check_eps_density, check_mu_controllability, defaults, sine_wave, wave_norm,
    zero_wave, ControlledSystem, FeatureSpec, StateVector,
};
use topolab::set::Universe;
use topolab::topology::{enumerate_topologies, mu_topology, random_topology, FiniteTopology};

fn strict_nonempty_masks(n: usize) -> impl Iterator<Item = u64> {
    let full = (1u64 << n) - 1;
    1..full
}

#[test]
fn criterion_1_kuratowski_sweep() {
    let start = Instant::now();
    let mut cases = 0usize;
    for n in 2..=8 {
        let universe = Universe::new(n).unwrap();
        for mask in strict_nonempty_masks(n) {
            let f = universe.subset_from_mask(mask).unwrap();
            let op = make_mu(universe.clone(), f).unwrap();
            let report = op.verify_kuratowski(VerifyMode::Exhaustive).unwrap();
            assert!(
                report.all_pass(),
                "axioms failed for n={n}, F mask {mask:#b}: {:?}",
                report.failures()
            );
            cases += 1;
        }
    }
    assert_eq!(cases, 494);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "sweep took {elapsed:?}");
    println!("ACCEPTANCE 1 (kuratowski sweep, {cases} cases): PASS in {elapsed:?}");
}

#[test]
fn criterion_2_construction_equivalence() {
    let start = Instant::now();
    for n in 2..=8 {
        let universe = Universe::new(n).unwrap();
        let full = (1u64 << n) - 1;
        for mask in strict_nonempty_masks(n) {
            let f = universe.subset_from_mask(mask).unwrap();
            let op = make_mu(universe.clone(), f).unwrap();
            let from_closure = topology_from_closure(&op).unwrap();
            let direct = mu_topology(&universe, f).unwrap();
            assert_eq!(from_closure, direct, "n={n}, F mask {mask:#b}");
            for a_mask in 0..=full {
                let a = universe.subset_from_mask(a_mask).unwrap();
                assert_eq!(
                    direct.closure_of(a).unwrap(),
                    op.apply(a).unwrap(),
                    "closure mismatch at n={n}, F mask {mask:#b}, A mask {a_mask:#b}"
                );
            }
        }
    }
    let elapsed = start.elapsed();
    println!("ACCEPTANCE 2 (construction equivalence): PASS in {elapsed:?}");
}

#[test]
fn criterion_3_topology_count_oracle() {
    let start = Instant::now();
    let expected = [1usize, 4, 29, 355];
    for (n, want) in (1..=4).zip(expected) {
        let universe = Universe::new(n).unwrap();
        let got = enumerate_topologies(&universe).unwrap().len();
        assert_eq!(got, want, "topology count at n={n}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "enumeration took {elapsed:?}");
    println!("ACCEPTANCE 3 (topology counts 1, 4, 29, 355): PASS in {elapsed:?}");
}

#[test]
fn criterion_4_separation_sweep() {
    let start = Instant::now();
    for n in 2..=8 {
        let universe = Universe::new(n).unwrap();
        for mask in strict_nonempty_masks(n) {
            let f = universe.subset_from_mask(mask).unwrap();
            let topology = mu_topology(&universe, f).unwrap();
            let profile = topology.separation_profile();
            assert!(!profile.hausdorff, "n={n}, F mask {mask:#b}");
            assert!(!profile.t1, "n={n}, F mask {mask:#b}");
            let complement_is_singleton = f.complement().cardinality() == 1;
            assert_eq!(profile.t0, complement_is_singleton, "n={n}, F mask {mask:#b}");
        }
    }
    let elapsed = start.elapsed();
    println!("ACCEPTANCE 4 (separation booleans): PASS in {elapsed:?}");
}

#[test]
fn criterion_5_subspace_comparability() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..1000 {
        let n = rng.gen_range(2..=6);
        let universe = Universe::new(n).unwrap();
        let g = random_topology(&universe, &mut rng).unwrap();
        let full = (1u64 << n) - 1;
        let f = universe.subset_from_mask(rng.gen_range(1..full)).unwrap();

        let density = mu_topology(&universe, f).unwrap();
        let density_trace = density.subspace(f).unwrap();
        assert!(density_trace.is_discrete(), "trial {trial}");

        let g_trace = g.subspace(f).unwrap();
        assert!(
            g_trace.topology.is_coarser(&density_trace.topology).unwrap(),
            "trial {trial}: induced topology not refined by the density trace"
        );
        for open in g_trace.topology.opens() {
            let embedded = g_trace.embed(*open, &universe).unwrap();
            assert!(
                density.is_open(embedded).unwrap(),
                "trial {trial}: trace open {open:?} does not embed as a density open"
            );
        }
    }
    let elapsed = start.elapsed();
    println!("ACCEPTANCE 5 (1000 subspace/comparability pairs): PASS in {elapsed:?}");
}

#[test]
fn criterion_6_net_checks() {
    let start = Instant::now();
    for n in 1..=4 {
        let universe = Universe::new(n).unwrap();
        for topology in enumerate_topologies(&universe).unwrap() {
            assert!(check_closure_net_theorem(&topology).unwrap(), "n={n}");
        }
    }
    for n in 2..=6 {
        let universe = Universe::new(n).unwrap();
        for mask in strict_nonempty_masks(n) {
            let f = universe.subset_from_mask(mask).unwrap();
            let topology = mu_topology(&universe, f).unwrap();
            assert!(
                check_closure_net_theorem(&topology).unwrap(),
                "density topology n={n}, F mask {mask:#b}"
            );
        }
    }
    let universe = Universe::new(6).unwrap();
    let ambient = FiniteTopology::discrete(universe.clone()).unwrap();
    let f = universe.subset(&[0, 1, 2]).unwrap();
    assert!(check_final_lemma(&ambient, f, 1000, 0).unwrap());
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "net checks took {elapsed:?}");
    println!("ACCEPTANCE 6 (net theorem and convergence lemma): PASS in {elapsed:?}");
}

#[test]
fn criterion_7_trivial_system() {
    let start = Instant::now();
    let sys = ControlledSystem::trivial(1.0, defaults::SEGMENTS, defaults::AMPLITUDE).unwrap();
    let x0 = StateVector::point(1.0, 0.0);
    let cloud = attainable_cloud(&sys, &x0, 1.0, defaults::SAMPLES, 0).unwrap();

    for sample in cloud.samples() {
        match sample.terminal {
            StateVector::Point { x1, .. } => assert_eq!(x1.to_bits(), 1.0f64.to_bits()),
            _ => unreachable!(),
        }
    }

    let metric = check_eps_density(&cloud, &[StateVector::point(0.0, 0.0)], 0.5).unwrap();
    assert!(!metric.dense_at_eps, "metric density must fail at eps = 0.5");
    assert!(metric.targets[0].distance >= 1.0);

    let verdict = check_mu_controllability(
        &cloud,
        &FeatureSpec::TrivialGrid {
            min: -6.0,
            max: 6.0,
            step: 1.0,
        },
    )
    .unwrap();
    assert!(verdict.dense);
    assert!(!verdict.hausdorff);
    let elapsed = start.elapsed();
    println!("ACCEPTANCE 7 (trivial system contrast): PASS in {elapsed:?}");
}

#[test]
fn criterion_8_schrodinger() {
    let start = Instant::now();
    let sys = ControlledSystem::schrodinger(
        defaults::GRID_POINTS,
        defaults::TIME_STEP,
        defaults::SEGMENTS,
        defaults::AMPLITUDE,
    )
    .unwrap();

    let normalized = sine_wave(defaults::GRID_POINTS);
    let cloud = attainable_cloud(&sys, &normalized, defaults::HORIZON, 100, 1).unwrap();
    for sample in cloud.samples() {
        match &sample.terminal {
            StateVector::Wave(amps) => {
                assert!((wave_norm(amps) - 1.0).abs() <= 1e-10, "norm drift too large");
            }
            _ => unreachable!(),
        }
    }

    let rest = zero_wave(defaults::GRID_POINTS);
    let rest_cloud = attainable_cloud(&sys, &rest, defaults::HORIZON, 10, 2).unwrap();
    for sample in rest_cloud.samples() {
        match &sample.terminal {
            StateVector::Wave(amps) => {
                let max = amps.iter().map(|z| z.norm()).fold(0.0, f64::max);
                assert!(max <= 1e-14, "zero state moved: {max}");
            }
            _ => unreachable!(),
        }
    }
    let verdict = check_mu_controllability(
        &rest_cloud,
        &FeatureSpec::ProbabilityBins {
            intervals: vec![(0.0, 0.5)],
            width: 0.1,
        },
    )
    .unwrap();
    assert!(verdict.dense);
    assert!(!verdict.hausdorff);

    // Second-order step refinement on a grid whose every mode sits inside
    // the asymptotic regime.
    let n = 15;
    let control = vec![3.0, -2.0, 1.0, 4.0];
    let x0 = sine_wave(n);
    let mut terminals = Vec::new();
    for dt in [5e-4, 2.5e-4, 1.25e-4] {
        let sys = ControlledSystem::schrodinger(n, dt, 4, 5.0).unwrap();
        let states = topolab::reach::simulate(&sys, &control, &x0, 0.1).unwrap();
        match states.last().unwrap() {
            StateVector::Wave(amps) => terminals.push(amps.clone()),
            _ => unreachable!(),
        }
    }
    let delta = |a: &[num_complex::Complex64], b: &[num_complex::Complex64]| {
        let diff: Vec<num_complex::Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        wave_norm(&diff)
    };
    let ratio = delta(&terminals[0], &terminals[1]) / delta(&terminals[1], &terminals[2]);
    assert!((3.5..=4.5).contains(&ratio), "dt ratio {ratio}");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "wave checks took {elapsed:?}");
    println!("ACCEPTANCE 8 (wave system checks): PASS in {elapsed:?}");
}
