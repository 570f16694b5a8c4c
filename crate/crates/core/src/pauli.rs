//! Phase-tracked generalized Pauli products `λ^γ X^{x_1}Z^{z_1} ⊗ ⋯ ⊗ X^{x_n}Z^{z_n}`.
//!
//! With `X = Σ|j⟩⟨j+1|` (so `X|k⟩ = |k-1⟩`) and `Z|k⟩ = ω^k|k⟩` one has
//! `ZX = ω^{-1} XZ`, hence
//!
//! ```text
//! (λ^a X^{x} Z^{z}) (λ^b X^{x'} Z^{z'}) = λ^{a + b - 2 z·x'} X^{x+x'} Z^{z+z'}
//! ```
//!
//! with `γ` reduced mod `2D` and exponents mod `D`. The sign is pinned by
//! the dense-matrix regression tests below.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::ring::{mul_mod, neg_mod};
use crate::{Error, Result};

/// Largest matrix side `dense_matrix` builds unless told otherwise.
pub const DEFAULT_MATRIX_BUDGET: usize = 2048;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliProduct {
    dim: u64,
    phase: u64,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliProduct {
    /// Builds `λ^phase X^x Z^z`, reducing `phase` mod `2D` and exponents mod `D`.
    pub fn new(dim: u64, phase: i64, x: &[i64], z: &[i64]) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        if x.len() != z.len() || x.is_empty() {
            return Err(Error::ShapeMismatch(format!(
                "x has {} entries and z has {}; need equal and nonzero",
                x.len(),
                z.len()
            )));
        }
        let d = dim as i64;
        Ok(Self {
            dim,
            phase: phase.rem_euclid(2 * d) as u64,
            x: x.iter().map(|v| v.rem_euclid(d) as u64).collect(),
            z: z.iter().map(|v| v.rem_euclid(d) as u64).collect(),
        })
    }

    pub(crate) fn from_parts(dim: u64, phase: u64, x: Vec<u64>, z: Vec<u64>) -> Self {
        debug_assert!(phase < 2 * dim && x.iter().chain(&z).all(|&v| v < dim));
        debug_assert_eq!(x.len(), z.len());
        Self { dim, phase, x, z }
    }

    pub fn identity(dim: u64, parties: usize) -> Self {
        Self { dim, phase: 0, x: vec![0; parties], z: vec![0; parties] }
    }

    /// `X^power` on `site`, identity elsewhere.
    pub fn x_on(dim: u64, parties: usize, site: usize, power: i64) -> Self {
        let mut p = Self::identity(dim, parties);
        p.x[site] = power.rem_euclid(dim as i64) as u64;
        p
    }

    /// `Z^power` on `site`, identity elsewhere.
    pub fn z_on(dim: u64, parties: usize, site: usize, power: i64) -> Self {
        let mut p = Self::identity(dim, parties);
        p.z[site] = power.rem_euclid(dim as i64) as u64;
        p
    }

    /// The same operator times `λ^delta`.
    pub fn with_phase(mut self, delta: i64) -> Self {
        let m = 2 * self.dim as i64;
        self.phase = (self.phase as i64 + delta).rem_euclid(m) as u64;
        self
    }

    pub fn dimension(&self) -> u64 {
        self.dim
    }

    pub fn parties(&self) -> usize {
        self.x.len()
    }

    /// Phase exponent `γ ∈ [0, 2D)`.
    pub fn phase(&self) -> u64 {
        self.phase
    }

    pub fn x(&self) -> &[u64] {
        &self.x
    }

    pub fn z(&self) -> &[u64] {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.is_phase_only()
    }

    /// True for `λ^γ·I`.
    pub fn is_phase_only(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&v| v == 0)
    }

    /// Sites where the operator acts nontrivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.parties()).filter(|&i| self.x[i] != 0 || self.z[i] != 0).collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.parties() != other.parties() {
            return Err(Error::ShapeMismatch(format!(
                "Pauli products over (D={}, n={}) and (D={}, n={})",
                self.dim,
                self.parties(),
                other.dim,
                other.parties()
            )));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.dim;
        let two_d = 2 * d;
        let cross = dot_mod(&self.z, &other.x, d);
        let phase = (self.phase + other.phase + neg_mod(2 * cross, two_d)) % two_d;
        let x = self.x.iter().zip(&other.x).map(|(a, b)| (a + b) % d).collect();
        let z = self.z.iter().zip(&other.z).map(|(a, b)| (a + b) % d).collect();
        Self { dim: d, phase, x, z }
    }

    /// `p^k` in closed form: `γ_k = kγ − k(k−1)·(x·z)`.
    pub fn power(&self, k: u64) -> Self {
        let d = self.dim;
        let two_d = 2 * d;
        let xz = dot_mod(&self.x, &self.z, d);
        let k2 = (k as u128 * (k as u128).saturating_sub(1)) % two_d as u128;
        let twist = ((k2 * xz as u128) % two_d as u128) as u64;
        let phase = (mul_mod(k, self.phase, two_d) + neg_mod(twist, two_d)) % two_d;
        let x = self.x.iter().map(|&v| mul_mod(v, k, d)).collect();
        let z = self.z.iter().map(|&v| mul_mod(v, k, d)).collect();
        Self { dim: d, phase, x, z }
    }

    /// Power with a possibly negative exponent; `p^{2D} = I` always.
    pub fn power_signed(&self, k: i64) -> Self {
        self.power(k.rem_euclid(2 * self.dim as i64) as u64)
    }

    /// `(z·x' − x·z') mod D`; zero exactly when the two operators commute.
    pub fn symplectic_inner(&self, other: &Self) -> Result<u64> {
        self.check_compatible(other)?;
        Ok(self.symplectic_unchecked(other))
    }

    pub(crate) fn symplectic_unchecked(&self, other: &Self) -> u64 {
        let d = self.dim;
        (dot_mod(&self.z, &other.x, d) + neg_mod(dot_mod(&self.x, &other.z, d), d)) % d
    }

    /// Smallest `k ≥ 1` with `p^k = I` (phase included). Divides `2D`.
    pub fn order(&self) -> u64 {
        (1..=2 * self.dim)
            .find(|&k| (2 * self.dim).is_multiple_of(k) && self.power(k).is_identity())
            .expect("every Pauli product satisfies p^(2D) = I")
    }

    /// `D^n`, or `None` on overflow.
    pub fn hilbert_dimension(&self) -> Option<usize> {
        hilbert_dimension(self.dim, self.parties())
    }

    /// Exact tensor product of the per-site `X^{x_i} Z^{z_i}` times `λ^γ`.
    pub fn dense_matrix(&self, budget: usize) -> Result<DMatrix<Complex64>> {
        let size = self
            .hilbert_dimension()
            .filter(|&s| s <= budget)
            .ok_or(Error::DenseBudget { size: pow_u128(self.dim, self.parties()), budget })?;
        let mut out = DMatrix::zeros(size, size);
        let roots = LambdaTable::new(self.dim);
        let mut digits = vec![0u64; self.parties()];
        for col in 0..size {
            decode(col, self.dim, &mut digits);
            let (row, phase) = self.image(&digits);
            out[(row, col)] = roots.get(phase);
        }
        Ok(out)
    }

    /// Applies the operator to a party-major amplitude vector of length `D^n`.
    pub fn apply(&self, amplitudes: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); amplitudes.len()];
        let roots = LambdaTable::new(self.dim);
        let mut digits = vec![0u64; self.parties()];
        for (col, amp) in amplitudes.iter().enumerate() {
            if *amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            decode(col, self.dim, &mut digits);
            let (row, phase) = self.image(&digits);
            out[row] += roots.get(phase) * amp;
        }
        out
    }

    /// For basis state `digits`, returns the image index and the `λ`-exponent
    /// it picks up: `X^x Z^z |k⟩ = ω^{zk} |k − x⟩`.
    fn image(&self, digits: &[u64]) -> (usize, u64) {
        let d = self.dim;
        let two_d = 2 * d;
        let mut phase = self.phase;
        let mut row = 0usize;
        for (i, &k) in digits.iter().enumerate() {
            phase = (phase + 2 * mul_mod(self.z[i], k, d)) % two_d;
            row = row * d as usize + ((k + d - self.x[i]) % d) as usize;
        }
        (row, phase)
    }

    /// Parses `gamma | x_1 … x_n | z_1 … z_n`. Values are reduced mod `2D`
    /// (phase) and `D` (exponents), so negative entries are accepted.
    pub fn parse(text: &str, dim: u64) -> Result<Self, String> {
        let blocks: Vec<&str> = text.split('|').collect();
        if blocks.len() != 3 {
            return Err(format!("expected 3 '|'-separated blocks, found {}", blocks.len()));
        }
        let nums = |s: &str| -> Result<Vec<i64>, String> {
            s.split_whitespace().map(|t| t.parse::<i64>().map_err(|e| format!("bad integer {t:?}: {e}"))).collect()
        };
        let phase = nums(blocks[0])?;
        if phase.len() != 1 {
            return Err(format!("phase block must hold one integer, found {}", phase.len()));
        }
        let x = nums(blocks[1])?;
        let z = nums(blocks[2])?;
        Self::new(dim, phase[0], &x, &z).map_err(|e| e.to_string())
    }
}

impl fmt::Display for PauliProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        write!(f, "{} | {} | {}", self.phase, join(&self.x), join(&self.z))
    }
}

impl fmt::Debug for PauliProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli[D={}]({self})", self.dim)
    }
}

/// Powers of `λ = e^{iπ/D}`, indexed by the exponent mod `2D`.
pub(crate) struct LambdaTable(Vec<Complex64>);

impl LambdaTable {
    pub(crate) fn new(dim: u64) -> Self {
        let two_d = 2 * dim;
        Self(
            (0..two_d)
                .map(|t| match 2 * t {
                    // exact values at multiples of π/2
                    0 => Complex64::new(1.0, 0.0),
                    v if v == two_d => Complex64::new(-1.0, 0.0),
                    v if v == dim => Complex64::new(0.0, 1.0),
                    v if v == 3 * dim => Complex64::new(0.0, -1.0),
                    _ => Complex64::from_polar(1.0, PI * t as f64 / dim as f64),
                })
                .collect(),
        )
    }

    #[inline]
    pub(crate) fn get(&self, exponent: u64) -> Complex64 {
        self.0[exponent as usize % self.0.len()]
    }
}

pub(crate) fn dot_mod(a: &[u64], b: &[u64], d: u64) -> u64 {
    a.iter().zip(b).fold(0, |acc, (&u, &v)| (acc + mul_mod(u, v, d)) % d)
}

pub(crate) fn hilbert_dimension(dim: u64, parties: usize) -> Option<usize> {
    let p = u32::try_from(parties).ok()?;
    usize::try_from(dim).ok()?.checked_pow(p)
}

pub(crate) fn pow_u128(dim: u64, parties: usize) -> u128 {
    (0..parties).fold(1u128, |acc, _| acc.saturating_mul(dim as u128))
}

/// Party-major digits of `index` in base `dim`.
pub(crate) fn decode(mut index: usize, dim: u64, digits: &mut [u64]) {
    for slot in digits.iter_mut().rev() {
        *slot = (index % dim as usize) as u64;
        index /= dim as usize;
    }
}
