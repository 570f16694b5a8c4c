//! Dense states from stabilizer groups, partial traces, and the dense AME
//! check under local unitaries.
//!
//! cargo run --example dense_states

use nalgebra::DMatrix;
use num_complex::Complex64;

use qudit_ame::construct;
use qudit_ame::statevec::{is_maximally_mixed, reduced_density, state_from_group, verify_ame_dense};

fn fourier(d: usize) -> DMatrix<Complex64> {
    let s = 1.0 / (d as f64).sqrt();
    DMatrix::from_fn(d, d, |j, k| Complex64::from_polar(s, 2.0 * std::f64::consts::PI * (j * k) as f64 / d as f64))
}

fn main() -> qudit_ame::Result<()> {
    let psi = state_from_group(&construct::bell(6)?, 1 << 16)?;
    let rho = reduced_density(&psi, &[0])?;
    println!(
        "Bell over Z_6: ρ_0 trace {:.3}, deviation from I/6 {:.1e}",
        rho.trace().re,
        is_maximally_mixed(&rho, 1e-9).max_deviation
    );

    let moved = psi.apply_local(&[fourier(6), fourier(6).adjoint()])?;
    let r = verify_ame_dense(&moved, 1e-9, 1 << 16)?;
    println!("after F ⊗ F†: AME = {}, worst deviation {:.1e}", r.is_ame, r.worst_deviation);

    let ghz4 = state_from_group(&construct::ghz(3, 4)?, 1 << 16)?;
    let r = verify_ame_dense(&ghz4, 1e-9, 1 << 16)?;
    println!(
        "GHZ(4 parties, d=3): AME = {}, worst subset {:?}, deviation {:.3}",
        r.is_ame, r.worst_subset, r.worst_deviation
    );
    Ok(())
}
