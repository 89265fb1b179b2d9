//! Minimal end-to-end transfer run, mirroring the README example.

use num_complex::Complex64;
use raman_qit::{run_protocol, AtomQubit, OutcomeRule, PhysicalParams, TruncationConfig};

fn main() -> Result<(), raman_qit::Error> {
    let atom = AtomQubit::normalized(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8))?;
    let alpha = Complex64::new(2.0, 0.0);
    let params = PhysicalParams::new(1.0, 0.0, 200.0, 1.0)?; // omega, omega0, delta, lambda
    let cfg = TruncationConfig::auto(alpha);

    let result = run_protocol(&atom, alpha, &params, &cfg, 10.0, OutcomeRule::FixedE)?;
    println!(
        "detected {}, probability {:.3}, transfer fidelity {:.6}",
        result.outcome.level, result.outcome.probability, result.fidelity
    );
    Ok(())
}
