//! Dense state vectors: synthesis from a stabilizer group, partial traces,
//! the dense AME test, and the tensor-product regrouping
//! `⊗_i (C^{q_i})^{⊗n} ≅ (C^D)^{⊗n}`.
//!
//! Amplitudes are party-major: party 0 is the most significant base-`D`
//! digit. In [`tensor`], the composite digit of each party is the mixed-radix
//! number formed from the per-factor digits, first factor most significant.

use std::fmt::Write as _;

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::pauli::{decode, hilbert_dimension, pow_u128, PauliProduct};
use crate::ring::IntMatrix;
use crate::stabgroup::{relation_basis, validate, StabilizerGroup};
use crate::{Error, Result};

/// Default cap on the number of amplitudes in a dense state.
pub const DEFAULT_DENSE_BUDGET: usize = 100_000;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    dim: u64,
    parties: usize,
    amplitudes: Vec<Complex64>,
}

impl DenseState {
    /// Normalizes `amplitudes`; rejects the zero vector and wrong lengths.
    pub fn new(dim: u64, parties: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let expected = hilbert_dimension(dim, parties)
            .ok_or(Error::DenseBudget { size: pow_u128(dim, parties), budget: usize::MAX })?;
        if amplitudes.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "{} amplitudes for {parties} qudits of dimension {dim}",
                amplitudes.len()
            )));
        }
        let norm = l2_norm(&amplitudes);
        if norm < 1e-12 {
            return Err(Error::ShapeMismatch("zero vector is not a state".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { dim, parties, amplitudes })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: u64, parties: usize, index: usize) -> Result<Self> {
        let size = hilbert_dimension(dim, parties).unwrap_or(0);
        if index >= size {
            return Err(Error::ResidueOutOfRange { value: index as u64, modulus: size as u64 });
        }
        let mut amps = vec![ZERO; size];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(dim, parties, amps)
    }

    pub fn dimension(&self) -> u64 {
        self.dim
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    /// `|⟨self|other⟩|`; equality up to global phase means this exceeds `1 − tol`.
    pub fn overlap(&self, other: &Self) -> f64 {
        if self.amplitudes.len() != other.amplitudes.len() {
            return 0.0;
        }
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm()
    }

    pub fn same_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && self.parties == other.parties && self.overlap(other) > 1.0 - tol
    }

    /// `p|ψ⟩ = |ψ⟩` up to `tol` in every amplitude.
    pub fn is_fixed_by(&self, p: &PauliProduct, tol: f64) -> bool {
        p.dimension() == self.dim
            && p.parties() == self.parties
            && p.apply(&self.amplitudes).iter().zip(&self.amplitudes).all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Applies the single-qudit permutation unitary `U|j⟩ = |perm[j]⟩` to every party.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.dim as usize {
            return Err(Error::ShapeMismatch(format!("permutation of {} for dimension {}", perm.len(), self.dim)));
        }
        let d = self.dim as usize;
        let mut out = vec![ZERO; self.amplitudes.len()];
        let mut digits = vec![0u64; self.parties];
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            decode(idx, self.dim, &mut digits);
            let target = digits.iter().fold(0usize, |acc, &j| acc * d + perm[j as usize]);
            out[target] = *amp;
        }
        Ok(Self { dim: self.dim, parties: self.parties, amplitudes: out })
    }

    /// Applies `U_0 ⊗ U_1 ⊗ ⋯ ⊗ U_{n-1}`, one `D×D` matrix per party.
    pub fn apply_local(&self, unitaries: &[DMatrix<Complex64>]) -> Result<Self> {
        let d = self.dim as usize;
        if unitaries.len() != self.parties || unitaries.iter().any(|u| u.nrows() != d || u.ncols() != d) {
            return Err(Error::ShapeMismatch(format!("need {} matrices of size {d}x{d}", self.parties)));
        }
        let mut amps = self.amplitudes.clone();
        let mut scratch = vec![ZERO; d];
        for (k, u) in unitaries.iter().enumerate() {
            let stride = d.pow((self.parties - 1 - k) as u32);
            for base in 0..amps.len() {
                if !(base / stride).is_multiple_of(d) {
                    continue;
                }
                for (r, s) in scratch.iter_mut().enumerate() {
                    *s = (0..d).map(|c| u[(r, c)] * amps[base + c * stride]).sum();
                }
                for (r, s) in scratch.iter().enumerate() {
                    amps[base + r * stride] = *s;
                }
            }
        }
        Ok(Self { dim: self.dim, parties: self.parties, amplitudes: amps })
    }

    /// `D n` followed by one `re im` line per amplitude, in index order.
    pub fn to_dump(&self) -> String {
        let mut out = format!("{} {}\n", self.dim, self.parties);
        for a in &self.amplitudes {
            writeln!(out, "{} {}", a.re, a.im).unwrap();
        }
        out
    }

    pub fn from_dump(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse { line: 0, message: "empty state dump".into() })?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let bad = |line: usize, message: String| Error::Parse { line: line + 1, message };
        if head.len() != 2 {
            return Err(bad(0, "header must be `D n`".into()));
        }
        let dim: u64 = head[0].parse().map_err(|e| bad(0, format!("{e}")))?;
        let parties: usize = head[1].parse().map_err(|e| bad(0, format!("{e}")))?;
        let mut amps = Vec::new();
        for (i, l) in lines {
            let v: Vec<f64> = l
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| bad(i, format!("{e}"))))
                .collect::<Result<_>>()?;
            if v.len() != 2 {
                return Err(bad(i, "amplitude line must be `re im`".into()));
            }
            amps.push(Complex64::new(v[0], v[1]));
        }
        Self::new(dim, parties, amps)
    }
}

fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn check_budget(dim: u64, parties: usize, budget: usize) -> Result<usize> {
    hilbert_dimension(dim, parties)
        .filter(|&s| s <= budget)
        .ok_or(Error::DenseBudget { size: pow_u128(dim, parties), budget })
}

/// The unique state fixed by a valid stabilizer group.
///
/// Each generator contributes the averaging projector `(1/ord) Σ_k g^k`; these
/// are applied in turn to a computational basis seed. Seeds are screened with
/// the diagonal subgroup (elements with `x = 0`): `⟨j|ψ⟩ ≠ 0` exactly when all
/// of them act as `+1` on `|j⟩`, so the first seed that passes the screen is
/// the first one whose projection survives.
pub fn state_from_group(g: &StabilizerGroup, budget: usize) -> Result<DenseState> {
    let report = validate(g);
    if !report.stabilizes_unique_state {
        return Err(Error::NotAStabilizerState(report));
    }
    let (dim, parties) = (g.dimension(), g.parties());
    let size = check_budget(dim, parties, budget)?;
    let diagonal = diagonal_subgroup(g);
    let orders: Vec<u64> = g.generators().iter().map(PauliProduct::order).collect();

    let mut digits = vec![0u64; parties];
    for seed in 0..size {
        decode(seed, dim, &mut digits);
        if !diagonal.iter().all(|p| fixes_basis_state(p, &digits)) {
            continue;
        }
        let mut v = vec![ZERO; size];
        v[seed] = Complex64::new(1.0, 0.0);
        for (p, &ord) in g.generators().iter().zip(&orders) {
            let mut acc = v.clone();
            let mut cur = v;
            for _ in 1..ord {
                cur = p.apply(&cur);
                acc.iter_mut().zip(&cur).for_each(|(a, c)| *a += c);
            }
            acc.iter_mut().for_each(|a| *a /= ord as f64);
            v = acc;
        }
        if l2_norm(&v) > 1e-6 {
            return DenseState::new(dim, parties, v);
        }
    }
    Err(Error::NoSurvivingSeed)
}

/// Generators of `{ s ∈ S : x(s) = 0 }`.
fn diagonal_subgroup(g: &StabilizerGroup) -> Vec<PauliProduct> {
    let rows: Vec<Vec<u64>> = g.generators().iter().map(|p| p.x().to_vec()).collect();
    let xs = IntMatrix::from_rows(&rows, g.parties());
    relation_basis(&xs, g.dimension()).iter().map(|c| g.element(c)).filter(|p| !p.is_identity()).collect()
}

/// `λ^γ ω^{z·j} = 1` for a diagonal element acting on `|j⟩`.
fn fixes_basis_state(p: &PauliProduct, digits: &[u64]) -> bool {
    let d = p.dimension();
    let zj = p.z().iter().zip(digits).fold(0u64, |acc, (&z, &j)| (acc + z * j) % d);
    (p.phase() + 2 * zj).is_multiple_of(2 * d)
}

/// `ρ_S = tr_{S^c} |ψ⟩⟨ψ|` on a sorted subset of parties.
#[derive(Clone, Debug)]
pub struct ReducedDensity {
    pub subset: Vec<usize>,
    pub matrix: DMatrix<Complex64>,
}

impl ReducedDensity {
    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Largest `|ρ_{ij} − conj(ρ_{ji})|`.
    pub fn hermiticity_error(&self) -> f64 {
        let m = &self.matrix;
        (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| (m[(i, j)] - m[(j, i)].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        // symmetrize first so tiny anti-Hermitian noise cannot leak in
        let h = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn reduced_density(psi: &DenseState, subset: &[usize]) -> Result<ReducedDensity> {
    let n = psi.parties;
    let invalid = || Error::InvalidSubset { subset: subset.to_vec(), parties: n };
    if subset.windows(2).any(|w| w[0] >= w[1]) || subset.iter().any(|&k| k >= n) {
        return Err(invalid());
    }
    let d = psi.dim as usize;
    let keep = d.pow(subset.len() as u32);
    let traced = d.pow((n - subset.len()) as u32);
    let mut in_subset = vec![false; n];
    subset.iter().for_each(|&k| in_subset[k] = true);

    let mut m = DMatrix::from_element(keep, traced, ZERO);
    let mut digits = vec![0u64; n];
    for (idx, amp) in psi.amplitudes.iter().enumerate() {
        decode(idx, psi.dim, &mut digits);
        let (mut a, mut c) = (0usize, 0usize);
        for (k, &j) in digits.iter().enumerate() {
            if in_subset[k] {
                a = a * d + j as usize;
            } else {
                c = c * d + j as usize;
            }
        }
        m[(a, c)] = *amp;
    }
    let matrix = &m * m.adjoint();
    Ok(ReducedDensity { subset: subset.to_vec(), matrix })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixednessCheck {
    pub verdict: bool,
    pub max_deviation: f64,
}

/// Elementwise distance from `I/r`.
pub fn is_maximally_mixed(rho: &ReducedDensity, tol: f64) -> MixednessCheck {
    let r = rho.matrix.nrows();
    let target = 1.0 / r as f64;
    let mut max_deviation = 0.0f64;
    for i in 0..r {
        for j in 0..r {
            let expected = if i == j { Complex64::new(target, 0.0) } else { ZERO };
            max_deviation = max_deviation.max((rho.matrix[(i, j)] - expected).norm());
        }
    }
    MixednessCheck { verdict: max_deviation <= tol, max_deviation }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseAmeReport {
    pub is_ame: bool,
    /// First subset (lexicographic) attaining the worst deviation.
    pub worst_subset: Vec<usize>,
    pub worst_deviation: f64,
}

/// Checks every `⌊n/2⌋`-party reduction for maximal mixedness.
pub fn verify_ame_dense(psi: &DenseState, tol: f64, budget: usize) -> Result<DenseAmeReport> {
    check_budget(psi.dim, psi.parties, budget)?;
    let subsets: Vec<Vec<usize>> = (0..psi.parties).combinations(psi.parties / 2).collect();
    let deviations: Vec<f64> = subsets
        .par_iter()
        .map(|s| reduced_density(psi, s).map(|rho| is_maximally_mixed(&rho, tol).max_deviation))
        .collect::<Result<_>>()?;
    let mut worst = 0;
    for (i, &dev) in deviations.iter().enumerate() {
        if dev > deviations[worst] {
            worst = i;
        }
    }
    Ok(DenseAmeReport {
        is_ame: deviations.iter().all(|&d| d <= tol),
        worst_subset: subsets[worst].clone(),
        worst_deviation: deviations[worst],
    })
}

/// Regroups `⊗_i |ψ_i⟩` (each over `C^{q_i}`, same `n`) into one state over
/// `C^D`, `D = ∏ q_i`.
pub fn tensor(states: &[DenseState]) -> Result<DenseState> {
    let first = states.first().ok_or_else(|| Error::ShapeMismatch("tensor of no states".into()))?;
    let mut acc = first.clone();
    for s in &states[1..] {
        acc = tensor_pair(&acc, s)?;
    }
    Ok(acc)
}

fn tensor_pair(a: &DenseState, b: &DenseState) -> Result<DenseState> {
    if a.parties != b.parties {
        return Err(Error::ShapeMismatch(format!("tensor of {}- and {}-party states", a.parties, b.parties)));
    }
    let n = a.parties;
    let dim = a.dim * b.dim;
    let size = hilbert_dimension(dim, n).ok_or(Error::DenseBudget { size: pow_u128(dim, n), budget: usize::MAX })?;
    let mut out = vec![ZERO; size];
    let (mut da, mut db) = (vec![0u64; n], vec![0u64; n]);
    for (ia, x) in a.amplitudes.iter().enumerate() {
        if *x == ZERO {
            continue;
        }
        decode(ia, a.dim, &mut da);
        for (ib, y) in b.amplitudes.iter().enumerate() {
            decode(ib, b.dim, &mut db);
            let idx = da.iter().zip(&db).fold(0usize, |acc, (&u, &v)| acc * dim as usize + (u * b.dim + v) as usize);
            out[idx] = x * y;
        }
    }
    Ok(DenseState { dim, parties: n, amplitudes: out })
}
