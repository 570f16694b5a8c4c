//! Phase-tracked Weyl-Heisenberg arithmetic over Z_D and the CRT split of Z_D.
//!
//! cargo run --example pauli_algebra

use qudit_ame::pauli::PauliProduct;
use qudit_ame::ring::{crt_combine, crt_split, factorize, sylow_exponent};

fn main() -> qudit_ame::Result<()> {
    let d = 6;
    let x = PauliProduct::x_on(d, 2, 0, 1);
    let z = PauliProduct::z_on(d, 2, 0, 1);

    // ZX = ω^{-1} XZ, i.e. λ^{-2} XZ
    let zx = z.multiply(&x)?;
    let xz = x.multiply(&z)?;
    println!("X·Z = {xz}");
    println!("Z·X = {zx}");
    println!("<Z, X> = {}", z.symplectic_inner(&x)?);

    let p = PauliProduct::parse("1 | 1 2 | 3 0", d).expect("well-formed");
    println!("p = {p}, order {}", p.order());
    println!("p^3 = {}", p.power(3));

    let f = factorize(d)?;
    println!("\n{d} = {:?}", f.prime_powers());
    for i in 0..f.len() {
        println!("idempotent m_{} = {}", i + 1, sylow_exponent(&f, i)?);
    }
    for j in 0..d {
        let r = crt_split(j, &f)?;
        assert_eq!(crt_combine(&r, &f)?, j);
        println!("{j} <-> {r:?}");
    }
    Ok(())
}
