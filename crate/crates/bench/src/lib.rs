//! Shared fixtures for the criterion benchmarks.

use num_complex::Complex64;
use raman_qit::{AtomQubit, PhysicalParams};

/// Operating point used across the benchmarks: comfortably inside the
/// validity regime at `|alpha| = 2`.
pub fn bench_point() -> (AtomQubit, Complex64, PhysicalParams) {
    let atom = AtomQubit::normalized(Complex64::new(0.6, 0.2), Complex64::new(-0.4, 0.66))
        .expect("non-zero amplitudes");
    let alpha = Complex64::new(2.0, 0.0);
    let params = PhysicalParams::new(1.0, 0.0, 200.0, 1.0).expect("valid detuning");
    (atom, alpha, params)
}
