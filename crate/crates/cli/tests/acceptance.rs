//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the observed worst case (run with `--nocapture` to see them).
//!
//! Criteria 1-7 exercise the library; criterion 8 drives the binary.

use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use raman_qit::{
    build_effective_hamiltonian, build_full_hamiltonian, check_regime, coherent_amplitudes,
    evolve_analytic, evolve_numeric, hadamard_alpha, inner_product, not_alpha, project_atom,
    run_protocol, AtomLevel, AtomQubit, CatBasis, DenseOperator, FockVector, JointState,
    OutcomeRule, PhysicalParams, Propagator, ThreeLevelAtom, TruncationConfig,
};
use raman_qit_cli::config::{NMaxSetting, OutcomeSetting, RunConfig};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_qubit(rng: &mut ChaCha8Rng) -> AtomQubit {
    let draw = |rng: &mut ChaCha8Rng| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    AtomQubit::normalized(draw(rng), draw(rng)).unwrap()
}

#[test]
fn criterion_1_overlap_law() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for alpha_abs in [0.5, 1.0, 2.0, 3.0] {
        let alpha = c(alpha_abs, 0.0);
        let cfg = TruncationConfig::auto(alpha);
        let plus = coherent_amplitudes(alpha, &cfg).unwrap();
        let minus = coherent_amplitudes(-alpha, &cfg).unwrap();
        let overlap = inner_product(&plus, &minus).unwrap();
        let expected = (-2.0 * alpha_abs * alpha_abs).exp();
        let deviation = (overlap - c(expected, 0.0)).norm();
        assert!(
            deviation < 1e-8,
            "overlap deviation {deviation} at |alpha| = {alpha_abs}"
        );
        worst = worst.max(deviation);
    }
    println!(
        "acceptance 1 overlap-law: PASS (worst deviation {worst:.3e}, {:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_2_analytic_evolution_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0002);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let atom = random_qubit(&mut rng);
        let alpha = Complex64::from_polar(
            rng.gen_range(0.0..2.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let beta: f64 = rng.gen_range(-0.1..-0.01);
        let t = rng.gen_range(0.0..std::f64::consts::TAU / beta.abs());
        let delta = 10.0;
        let p = PhysicalParams::new(1.0, 0.0, delta, (beta.abs() * delta).sqrt()).unwrap();
        let cfg = TruncationConfig::auto(alpha);

        let analytic = evolve_analytic(&atom, alpha, &p, t, &cfg).unwrap();
        let field = coherent_amplitudes(alpha, &cfg)
            .unwrap()
            .normalized()
            .unwrap();
        let initial = JointState::product(&atom, &field);
        let numeric = evolve_numeric(&initial, &build_effective_hamiltonian(&p, &cfg), t).unwrap();

        let mut case_worst = 0.0f64;
        for level in 0..2 {
            for n in 0..cfg.dim() {
                case_worst = case_worst
                    .max((analytic.amplitude(level, n) - numeric.amplitude(level, n)).norm());
            }
        }
        assert!(
            case_worst < 1e-8,
            "case {case}: max amplitude difference {case_worst}"
        );
        worst = worst.max(case_worst);
    }
    println!(
        "acceptance 2 analytic-evolution-oracle: PASS \
         (100 cases, worst amplitude difference {worst:.3e}, {:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_3_measurement_closed_form() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for alpha_abs in [0.5, 1.0, 2.0] {
        let alpha = c(alpha_abs, 0.0);
        let p = PhysicalParams::new(1.0, 0.0, 25.0, 1.0).unwrap();
        let cfg = TruncationConfig::auto(alpha);
        let state =
            evolve_analytic(&AtomQubit::ground(), alpha, &p, p.protocol_time(), &cfg).unwrap();
        let pe = project_atom(&state, AtomLevel::Excited)
            .unwrap()
            .probability;
        let pg = project_atom(&state, AtomLevel::Ground).unwrap().probability;

        let expected = 0.5 * (1.0 - (-2.0 * alpha_abs * alpha_abs).exp());
        let deviation = (pe - expected).abs();
        assert!(
            deviation < 1e-8,
            "P(e) off by {deviation} at |alpha| = {alpha_abs}"
        );
        assert!((pg + pe - 1.0).abs() < 1e-10, "completeness violated");
        worst = worst.max(deviation);
    }
    println!(
        "acceptance 3 measurement-closed-form: PASS (worst P(e) deviation {worst:.3e}, {:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_4_gate_algebra() {
    let start = Instant::now();
    let alpha = c(2.0, 0.0);
    let cfg = TruncationConfig::auto(alpha);
    let basis = CatBasis::new(alpha, &cfg).unwrap();
    let identity = DenseOperator::identity(cfg.dim());

    let mut worst_unitary = 0.0f64;
    let mut worst_involution = 0.0f64;
    for gate in [hadamard_alpha(&basis), not_alpha(&basis)] {
        let unitary = gate.unitarity_deviation();
        let involution = gate.compose(&gate).unwrap().max_abs_diff(&identity);
        assert!(unitary < 1e-12, "unitarity deviation {unitary}");
        assert!(involution < 1e-12, "self-inverse deviation {involution}");
        worst_unitary = worst_unitary.max(unitary);
        worst_involution = worst_involution.max(involution);
    }

    // Action on the raw coherent vector against the advertised image.
    let plus = coherent_amplitudes(alpha, &cfg)
        .unwrap()
        .normalized()
        .unwrap();
    let minus = coherent_amplitudes(-alpha, &cfg)
        .unwrap()
        .normalized()
        .unwrap();
    let rotated = hadamard_alpha(&basis)
        .apply(&plus)
        .unwrap()
        .normalized()
        .unwrap();
    let image = FockVector::linear_combination(&[(c(1.0, 0.0), &minus), (c(-1.0, 0.0), &plus)])
        .unwrap()
        .normalized()
        .unwrap();
    let difference =
        FockVector::linear_combination(&[(c(1.0, 0.0), &rotated), (c(-1.0, 0.0), &image)])
            .unwrap()
            .norm();
    let budget = 2.0 * (-2.0 * alpha.norm_sqr()).exp();
    assert!(
        difference < budget,
        "action deviation {difference} above quasi-orthogonality budget {budget}"
    );

    println!(
        "acceptance 4 gate-algebra: PASS (unitarity {worst_unitary:.3e}, \
         involution {worst_involution:.3e}, action deviation {difference:.3e} < {budget:.3e}, {:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_5_end_to_end_transfer() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0005);
    let p = PhysicalParams::new(1.0, 0.0, 200.0, 1.0).unwrap();
    let mut lowest_at_2 = 1.0f64;
    let mut lowest_at_3 = 1.0f64;
    for _ in 0..20 {
        let atom = random_qubit(&mut rng);
        for (alpha_abs, floor, lowest) in [
            (2.0, 0.99, &mut lowest_at_2),
            (3.0, 0.9999, &mut lowest_at_3),
        ] {
            let alpha = c(alpha_abs, 0.0);
            let cfg = TruncationConfig::auto(alpha);
            for rule in [OutcomeRule::FixedG, OutcomeRule::FixedE] {
                let result = run_protocol(&atom, alpha, &p, &cfg, 10.0, rule).unwrap();
                assert!(
                    result.fidelity >= floor,
                    "fidelity {} below {floor} at |alpha| = {alpha_abs}",
                    result.fidelity
                );
                *lowest = lowest.min(result.fidelity);
            }
        }
    }
    println!(
        "acceptance 5 end-to-end-transfer: PASS \
         (20 atoms x 2 branches; min fidelity {lowest_at_2:.6} at |alpha|=2, \
         {lowest_at_3:.8} at |alpha|=3, {:?})",
        start.elapsed()
    );
}

/// Populations of both models on a shared grid; returns
/// (max |pop_eff - pop_full| over g/e, max pop_f).
fn elimination_discrepancy(
    delta: f64,
    lambda: f64,
    alpha: Complex64,
    samples: usize,
) -> (f64, f64) {
    let p = PhysicalParams::new(1.0, 0.0, delta, lambda).unwrap();
    let cfg = TruncationConfig::auto(alpha);
    let atom = AtomQubit::ground();
    let field = coherent_amplitudes(alpha, &cfg)
        .unwrap()
        .normalized()
        .unwrap();
    let eff_initial = JointState::product(&atom, &field);
    let full_initial = JointState::product_three(&ThreeLevelAtom::from_qubit(&atom), &field);
    let eff = Propagator::new(&build_effective_hamiltonian(&p, &cfg)).unwrap();
    let full = Propagator::new(&build_full_hamiltonian(&p, &cfg)).unwrap();

    let t_max = p.protocol_time();
    let mut worst_disc = 0.0f64;
    let mut worst_f = 0.0f64;
    for k in 0..samples {
        let t = t_max * k as f64 / (samples - 1) as f64;
        let eff_state = eff.evolve(&eff_initial, t).unwrap();
        let full_state = full.evolve(&full_initial, t).unwrap();
        for level in 0..2 {
            worst_disc =
                worst_disc.max((eff_state.population(level) - full_state.population(level)).abs());
        }
        worst_f = worst_f.max(full_state.population(2));
    }
    (worst_disc, worst_f)
}

#[test]
fn criterion_6_adiabatic_elimination_validity() {
    let start = Instant::now();
    let alpha = c(1.0, 0.0);

    let (disc_good, pop_f_good) = elimination_discrepancy(100.0, 1.0, alpha, 50);
    assert!(
        disc_good < 5e-2,
        "in-regime discrepancy {disc_good} too large"
    );
    assert!(
        pop_f_good < 1.6e-3,
        "in-regime upper-level population {pop_f_good}"
    );

    let (disc_bad, _) = elimination_discrepancy(2.0, 1.0, alpha, 50);
    assert!(
        disc_bad > 0.1,
        "out-of-regime discrepancy {disc_bad} should exceed 0.1"
    );

    println!(
        "acceptance 6 adiabatic-elimination-validity: PASS \
         (in-regime discrepancy {disc_good:.3e}, pop_f {pop_f_good:.3e}; \
         out-of-regime discrepancy {disc_bad:.3}, {:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_7_regime_checker_arithmetic() {
    let start = Instant::now();
    let p = PhysicalParams::new(1.0, 0.0, 20.0, 1.0).unwrap();
    let report = check_regime(&p, c(1.0, 0.0), 100.0, 10.0);
    assert_eq!(report.detuning_ratio, 50.0);
    assert_eq!(report.time_ratio, 100.0 / 6000.0);
    assert!(report.satisfied);
    println!(
        "acceptance 7 regime-checker-arithmetic: PASS \
         (detuning ratio 50 exact, time bound 6000 exact, {:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_8_cli_determinism() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let config = RunConfig {
        c_g: (0.6, 0.3),
        c_e: (0.8, -1.1),
        alpha: c(2.0, 0.0),
        lambda: 1.0,
        delta: 200.0,
        omega: 1.0,
        n_max: NMaxSetting::Auto,
        margin: 10.0,
        outcome: OutcomeSetting::Sampled,
        seed: 20260809,
        out: None,
    };
    let config_path = dir.path().join("det.cfg");
    std::fs::write(&config_path, config.serialize()).unwrap();
    let binary = env!("CARGO_BIN_EXE_raman-qit");

    // Identical config + seed: byte-identical stdout.
    let run = |i: usize| {
        let out = Command::new(binary)
            .args(["run", "--config"])
            .arg(&config_path)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "run {i} failed");
        out.stdout
    };
    assert_eq!(run(0), run(1), "run output must be byte-identical");

    // Sweep: byte-identical across repeated runs and across thread counts.
    let sweep = |threads: &str, name: &str| {
        let out_path = dir.path().join(name);
        let out = Command::new(binary)
            .env("RAMAN_QIT_THREADS", threads)
            .args(["sweep", "--config"])
            .arg(&config_path)
            .args([
                "--param",
                "alpha_abs",
                "--start",
                "0.5",
                "--stop",
                "3.0",
                "--steps",
                "24",
                "--out",
            ])
            .arg(&out_path)
            .output()
            .unwrap();
        assert_eq!(
            out.status.code(),
            Some(0),
            "sweep with {threads} threads failed"
        );
        std::fs::read(&out_path).unwrap()
    };
    let single_a = sweep("1", "sweep_1a.csv");
    let single_b = sweep("1", "sweep_1b.csv");
    let quad = sweep("4", "sweep_4.csv");
    assert_eq!(single_a, single_b, "repeated sweep must be byte-identical");
    assert_eq!(single_a, quad, "thread count must not change sweep bytes");

    println!(
        "acceptance 8 cli-determinism: PASS \
         (run + sweep byte-identical, threads 1 vs 4 identical, {:?})",
        start.elapsed()
    );
}
