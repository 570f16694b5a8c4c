//! Modular arithmetic over `Z_D`: prime-power factorization, the CRT
//! isomorphism `Z_D ≅ ⊕ Z_{q_i}`, its idempotents, and integer Smith normal
//! form (in [`snf`]).

mod snf;

pub use snf::{determinant, smith_normal_form, IntMatrix, SmithNormalForm};

use num_integer::Integer;

use crate::{Error, Result};

/// One factor `q = p^e` of a prime-power factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimePowerFactor {
    pub prime: u64,
    pub exponent: u32,
    pub prime_power: u64,
}

/// `D = q_1 ⋯ q_m` with strictly increasing primes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimePowerFactorization {
    dimension: u64,
    factors: Vec<PrimePowerFactor>,
}

impl PrimePowerFactorization {
    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    pub fn factors(&self) -> &[PrimePowerFactor] {
        &self.factors
    }

    /// Number of prime-power factors `m`.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn prime_powers(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.prime_power).collect()
    }

    /// `q_i`, checking the index.
    pub fn prime_power(&self, index: usize) -> Result<u64> {
        self.factor(index).map(|f| f.prime_power)
    }

    pub fn factor(&self, index: usize) -> Result<&PrimePowerFactor> {
        self.factors.get(index).ok_or(Error::FactorIndex { index, count: self.factors.len() })
    }

    /// True when `D` is itself a prime power.
    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    /// Factorization of `∏_{i∈subset} q_i`. Indices must be valid; the result
    /// keeps increasing-prime order regardless of the order of `subset`.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::EmptyMerge);
        }
        let mut idx: Vec<usize> = subset.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let mut factors = Vec::with_capacity(idx.len());
        for i in idx {
            factors.push(*self.factor(i)?);
        }
        let dimension = factors.iter().map(|f| f.prime_power).product();
        Ok(Self { dimension, factors })
    }
}

/// Trial-division factorization of `d ≥ 2`.
pub fn factorize(d: u64) -> Result<PrimePowerFactorization> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut rest = d;
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest.is_multiple_of(p) {
            let mut exponent = 0;
            let mut prime_power = 1;
            while rest.is_multiple_of(p) {
                rest /= p;
                exponent += 1;
                prime_power *= p;
            }
            factors.push(PrimePowerFactor { prime: p, exponent, prime_power });
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push(PrimePowerFactor { prime: rest, exponent: 1, prime_power: rest });
    }
    Ok(PrimePowerFactorization { dimension: d, factors })
}

/// Returns `Some(p)` if `q = p^e` with `e ≥ 1`.
pub fn prime_power_base(q: u64) -> Option<u64> {
    let f = factorize(q).ok()?;
    f.is_prime_power().then(|| f.factors[0].prime)
}

/// `j ↦ (j mod q_1, …, j mod q_m)`.
pub fn crt_split(j: u64, f: &PrimePowerFactorization) -> Result<Vec<u64>> {
    if j >= f.dimension {
        return Err(Error::ResidueOutOfRange { value: j, modulus: f.dimension });
    }
    Ok(f.factors.iter().map(|q| j % q.prime_power).collect())
}

/// Inverse of [`crt_split`].
pub fn crt_combine(residues: &[u64], f: &PrimePowerFactorization) -> Result<u64> {
    if residues.len() != f.len() {
        return Err(Error::ShapeMismatch(format!("{} residues for {} factors", residues.len(), f.len())));
    }
    let d = f.dimension;
    let mut acc = 0u64;
    for (i, (&r, q)) in residues.iter().zip(&f.factors).enumerate() {
        if r >= q.prime_power {
            return Err(Error::ResidueOutOfRange { value: r, modulus: q.prime_power });
        }
        acc = (acc + mul_mod(r, sylow_exponent(f, i)?, d)) % d;
    }
    Ok(acc)
}

/// CRT idempotent `m_i`: `m_i ≡ 1 (mod q_i)`, `m_i ≡ 0 (mod q_j)` for `j ≠ i`.
pub fn sylow_exponent(f: &PrimePowerFactorization, i: usize) -> Result<u64> {
    let q = f.prime_power(i)?;
    let t = f.dimension / q;
    let c = crt_coefficient(f, i)?;
    Ok(mul_mod(t, c, f.dimension))
}

/// `c_i = (D/q_i)^{-1} mod q_i`, the exponent with which `Z_D` restricts to
/// `Z_{q_i}^{c_i}` under the CRT relabeling. For a single factor this is 1.
pub fn crt_coefficient(f: &PrimePowerFactorization, i: usize) -> Result<u64> {
    let q = f.prime_power(i)?;
    let t = f.dimension / q;
    mod_inverse(t % q, q).ok_or_else(|| Error::Inconsistency(format!("D/q = {t} is not invertible modulo q = {q}")))
}

/// Multiplicative inverse modulo `m`, if it exists. `mod_inverse(0, 1) = Some(0)`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub(crate) fn neg_mod(a: u64, m: u64) -> u64 {
    (m - a % m) % m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triples(f: &PrimePowerFactorization) -> Vec<(u64, u32, u64)> {
        f.factors().iter().map(|q| (q.prime, q.exponent, q.prime_power)).collect()
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(triples(&factorize(6).unwrap()), vec![(2, 1, 2), (3, 1, 3)]);
        assert_eq!(triples(&factorize(4).unwrap()), vec![(2, 2, 4)]);
        assert_eq!(triples(&factorize(12).unwrap()), vec![(2, 2, 4), (3, 1, 3)]);
        assert_eq!(triples(&factorize(97).unwrap()), vec![(97, 1, 97)]);
        assert!(matches!(factorize(1), Err(Error::InvalidDimension(1))));
        assert!(matches!(factorize(0), Err(Error::InvalidDimension(0))));
    }

    #[test]
    fn factorization_invariants() {
        for d in 2..=2000u64 {
            let f = factorize(d).unwrap();
            assert_eq!(f.prime_powers().iter().product::<u64>(), d);
            for w in f.factors().windows(2) {
                assert!(w[0].prime < w[1].prime);
            }
            for q in f.factors() {
                assert!(q.exponent >= 1);
                assert_eq!(q.prime.pow(q.exponent), q.prime_power);
                assert_eq!(factorize(q.prime).unwrap().len(), 1);
            }
        }
    }

    #[test]
    fn crt_examples() {
        let f6 = factorize(6).unwrap();
        let f12 = factorize(12).unwrap();
        assert_eq!(crt_split(5, &f6).unwrap(), vec![1, 2]);
        assert_eq!(crt_split(0, &f12).unwrap(), vec![0, 0]);
        assert_eq!(crt_split(7, &f12).unwrap(), vec![3, 1]);
        assert_eq!(crt_combine(&[1, 2], &f6).unwrap(), 5);
        assert_eq!(crt_combine(&[0, 0], &f12).unwrap(), 0);
        assert!(crt_split(6, &f6).is_err());
        assert!(crt_combine(&[2, 0], &f6).is_err());
        assert!(crt_combine(&[1], &f6).is_err());
    }

    #[test]
    fn crt_round_trip_exhaustive() {
        for d in 2..=60u64 {
            let f = factorize(d).unwrap();
            let mut seen = vec![false; d as usize];
            for j in 0..d {
                let r = crt_split(j, &f).unwrap();
                assert_eq!(crt_combine(&r, &f).unwrap(), j);
                seen[j as usize] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn sylow_exponent_examples() {
        let f6 = factorize(6).unwrap();
        assert_eq!(sylow_exponent(&f6, 0).unwrap(), 3);
        assert_eq!(sylow_exponent(&f6, 1).unwrap(), 4);
        assert_eq!(sylow_exponent(&factorize(12).unwrap(), 0).unwrap(), 9);
        assert!(matches!(sylow_exponent(&f6, 2), Err(Error::FactorIndex { index: 2, count: 2 })));
        assert_eq!(sylow_exponent(&factorize(7).unwrap(), 0).unwrap(), 1);
    }

    #[test]
    fn idempotents_are_orthogonal_and_complete() {
        for d in 2..=60u64 {
            let f = factorize(d).unwrap();
            let m: Vec<u64> = (0..f.len()).map(|i| sylow_exponent(&f, i).unwrap()).collect();
            assert_eq!(m.iter().sum::<u64>() % d, 1 % d, "D = {d}");
            for i in 0..m.len() {
                assert_eq!(mul_mod(m[i], m[i], d), m[i]);
                for j in 0..m.len() {
                    if i != j {
                        assert_eq!(mul_mod(m[i], m[j], d), 0);
                    }
                }
                for (j, q) in f.factors().iter().enumerate() {
                    assert_eq!(m[i] % q.prime_power, u64::from(i == j));
                }
            }
        }
    }

    #[test]
    fn inverse_and_restrict() {
        assert_eq!(mod_inverse(2, 3), Some(2));
        assert_eq!(mod_inverse(3, 4), Some(3));
        assert_eq!(mod_inverse(2, 4), None);
        let f = factorize(30).unwrap();
        let g = f.restrict(&[2, 0]).unwrap();
        assert_eq!(g.dimension(), 10);
        assert_eq!(g.prime_powers(), vec![2, 5]);
        assert!(matches!(f.restrict(&[]), Err(Error::EmptyMerge)));
        assert!(f.restrict(&[3]).is_err());
        assert_eq!(prime_power_base(8), Some(2));
        assert_eq!(prime_power_base(6), None);
        assert_eq!(prime_power_base(1), None);
    }
}
