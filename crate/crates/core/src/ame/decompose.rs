use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{verify_ame_symbolic, AmeVerdict};
use crate::pauli::{hilbert_dimension, PauliProduct};
use crate::ring::{crt_split, mul_mod, sylow_exponent, PrimePowerFactorization};
use crate::stabgroup::{project_to_factor, sylow_component, validate, write_generator_file, StabilizerGroup};
use crate::statevec::{state_from_group, tensor, DenseState, DEFAULT_DENSE_BUDGET};
use crate::{factorize, Error, Result, STATE_TOL};

/// The single-qudit basis permutation `|j⟩ ↦ |j mod q_1, …, j mod q_m⟩`,
/// with factor digits read as a mixed-radix number (first factor most
/// significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrtRelabel {
    factorization: PrimePowerFactorization,
    perm: Vec<usize>,
}

impl CrtRelabel {
    pub fn factorization(&self) -> &PrimePowerFactorization {
        &self.factorization
    }

    /// `perm[j]` is the composite position of basis state `j`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (j, &p) in self.perm.iter().enumerate() {
            inv[p] = j;
        }
        inv
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &p)| j == p)
    }

    /// The permutation matrix `U` with `U[perm[j], j] = 1`.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let d = self.perm.len();
        let mut m = DMatrix::zeros(d, d);
        for (j, &p) in self.perm.iter().enumerate() {
            m[(p, j)] = Complex64::new(1.0, 0.0);
        }
        m
    }
}

pub fn crt_unitary(f: &PrimePowerFactorization) -> CrtRelabel {
    let qs = f.prime_powers();
    let perm = (0..f.dimension())
        .map(|j| {
            let digits = crt_split(j, f).expect("j < D");
            digits.iter().zip(&qs).fold(0u64, |acc, (&r, &q)| acc * q + r) as usize
        })
        .collect();
    CrtRelabel { factorization: f.clone(), perm }
}

#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    /// Synthesize factor states and check them against the relabeled input
    /// when `D^n` fits in `dense_budget`.
    pub dense: bool,
    pub dense_budget: usize,
    pub tol: f64,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self { dense: true, dense_budget: DEFAULT_DENSE_BUDGET, tol: STATE_TOL }
    }
}

#[derive(Clone, Debug)]
pub struct FactorDecomposition {
    pub factorization: PrimePowerFactorization,
    pub parties: usize,
    /// One stabilizer-state group over `Z_{q_i}` per factor.
    pub factor_groups: Vec<StabilizerGroup>,
    pub factor_states: Option<Vec<DenseState>>,
    pub crt: CrtRelabel,
    /// `|⟨U^{⊗n} Ψ | ⊗_i ψ_i⟩|` when the dense check ran.
    pub fidelity: Option<f64>,
}

pub fn decompose(g: &StabilizerGroup) -> Result<FactorDecomposition> {
    decompose_with(g, &DecomposeOptions::default())
}

/// Splits a stabilizer state over `Z_D` into stabilizer states over each
/// `Z_{q_i}`: Sylow component, then projection onto the factor.
pub fn decompose_with(g: &StabilizerGroup, opts: &DecomposeOptions) -> Result<FactorDecomposition> {
    let f = factorize(g.dimension())?;
    let factor_groups =
        (0..f.len()).map(|i| project_to_factor(&sylow_component(g, &f, i)?, &f, i)).collect::<Result<Vec<_>>>()?;

    for (fg, q) in factor_groups.iter().zip(f.prime_powers()) {
        let report = validate(fg);
        if !report.stabilizes_unique_state {
            return Err(Error::Inconsistency(format!("factor group over Z_{q} is not a stabilizer state: {report}")));
        }
    }

    let crt = crt_unitary(&f);
    let fits = hilbert_dimension(g.dimension(), g.parties()).is_some_and(|s| s <= opts.dense_budget);
    let (factor_states, fidelity) = if opts.dense && fits {
        let states =
            factor_groups.iter().map(|fg| state_from_group(fg, opts.dense_budget)).collect::<Result<Vec<_>>>()?;
        let original = state_from_group(g, opts.dense_budget)?.relabel(crt.permutation())?;
        let fidelity = original.overlap(&tensor(&states)?);
        if fidelity <= 1.0 - opts.tol {
            return Err(Error::Inconsistency(format!(
                "tensor of factor states has fidelity {fidelity} with the relabeled input"
            )));
        }
        (Some(states), Some(fidelity))
    } else {
        (None, None)
    };

    Ok(FactorDecomposition { factorization: f, parties: g.parties(), factor_groups, factor_states, crt, fidelity })
}

#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub input: AmeVerdict,
    /// `(q_i, verdict)` per factor, in factor order.
    pub factors: Vec<(u64, AmeVerdict)>,
}

/// Decomposes and verifies each factor. If the input is AME, every factor must
/// be AME too; a counterexample is reported as [`Error::Inconsistency`].
pub fn reduce_ame(g: &StabilizerGroup) -> Result<ReductionReport> {
    reduce_ame_with(g, &DecomposeOptions::default()).map(|(r, _)| r)
}

pub(crate) fn reduce_ame_with(
    g: &StabilizerGroup,
    opts: &DecomposeOptions,
) -> Result<(ReductionReport, FactorDecomposition)> {
    let input = verify_ame_symbolic(g)?;
    let dec = decompose_with(g, opts)?;
    let mut factors = Vec::with_capacity(dec.factor_groups.len());
    for (fg, q) in dec.factor_groups.iter().zip(dec.factorization.prime_powers()) {
        let v = verify_ame_symbolic(fg)?;
        if input.is_ame && !v.is_ame {
            return Err(Error::Inconsistency(format!(
                "AME input over Z_{} has a non-AME factor over Z_{q}",
                g.dimension()
            )));
        }
        factors.push((q, v));
    }
    Ok((ReductionReport { input, factors }, dec))
}

#[derive(Clone, Debug)]
pub struct MergedFactor {
    pub factorization: PrimePowerFactorization,
    pub group: StabilizerGroup,
    pub state: Option<DenseState>,
}

/// Recombines the factors in `subset` into one stabilizer state over
/// `Z_{d_M}`, `d_M = ∏_{i∈M} q_i`, by inverting the CRT relabeling for `d_M`.
///
/// A factor element `λ_q^{γ} X^{x} Z^{z}` lifts to
/// `λ_{d_M}^{tγ} X^{m x} Z^{t z}` with `t = d_M/q` and `m` the CRT idempotent,
/// which is exactly the preimage of the projection in [`project_to_factor`].
pub fn merge_factors(d: &FactorDecomposition, subset: &[usize]) -> Result<MergedFactor> {
    let fm = d.factorization.restrict(subset)?;
    let dm = fm.dimension();
    let mut indices: Vec<usize> = subset.to_vec();
    indices.sort_unstable();
    indices.dedup();

    let mut generators = Vec::new();
    for (j, &i) in indices.iter().enumerate() {
        let q = fm.prime_power(j)?;
        let t = dm / q;
        let m = sylow_exponent(&fm, j)?;
        for p in d.factor_groups[i].generators() {
            generators.push(lift_element(p, dm, t, m));
        }
    }
    let group = StabilizerGroup::new(dm, d.parties, generators)?;
    let report = validate(&group);
    if !report.stabilizes_unique_state {
        return Err(Error::Inconsistency(format!("merged group over Z_{dm} is invalid: {report}")));
    }

    let all_ame = indices
        .iter()
        .map(|&i| verify_ame_symbolic(&d.factor_groups[i]).map(|v| v.is_ame))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    if all_ame && !verify_ame_symbolic(&group)?.is_ame {
        return Err(Error::Inconsistency(format!("merge of AME factors over Z_{dm} is not AME")));
    }

    let state = match &d.factor_states {
        Some(states) => {
            let picked: Vec<DenseState> = indices.iter().map(|&i| states[i].clone()).collect();
            let inverse = crt_unitary(&fm).inverse();
            let expected = tensor(&picked)?.relabel(&inverse)?;
            let budget = expected.amplitudes().len();
            let synthesized = state_from_group(&group, budget)?;
            if !synthesized.same_up_to_phase(&expected, STATE_TOL) {
                return Err(Error::Inconsistency(format!(
                    "merged group over Z_{dm} does not stabilize the merged factor states"
                )));
            }
            Some(synthesized)
        }
        None => None,
    };

    Ok(MergedFactor { factorization: fm, group, state })
}

fn lift_element(p: &PauliProduct, dm: u64, t: u64, m: u64) -> PauliProduct {
    let x = p.x().iter().map(|&v| mul_mod(v, m, dm)).collect();
    let z = p.z().iter().map(|&v| mul_mod(v, t, dm)).collect();
    PauliProduct::from_parts(dm, mul_mod(p.phase(), t, 2 * dm), x, z)
}

impl FactorDecomposition {
    /// Text report: factorization line, one generator block per factor, then
    /// `factor q=<q> ame=<yes|no>` lines.
    pub fn report(&self, verdicts: &[(u64, AmeVerdict)]) -> String {
        let f = &self.factorization;
        let mut out = String::new();
        let parts: Vec<String> = f.factors().iter().map(|q| format!("{}^{}", q.prime, q.exponent)).collect();
        writeln!(out, "factorization D={} = {}", f.dimension(), parts.join(" * ")).unwrap();
        for (fg, q) in self.factor_groups.iter().zip(f.prime_powers()) {
            writeln!(out, "# factor q={q}").unwrap();
            out.push_str(&write_generator_file(fg));
        }
        match self.fidelity {
            Some(fid) if fid > 1.0 - STATE_TOL => writeln!(out, "# dense check: passed").unwrap(),
            Some(_) => writeln!(out, "# dense check: FAILED").unwrap(),
            None => writeln!(out, "# dense check: skipped").unwrap(),
        }
        for (q, v) in verdicts {
            writeln!(out, "factor q={q} ame={}", if v.is_ame { "yes" } else { "no" }).unwrap();
        }
        out
    }
}

/// `c_i` for every factor: `U Z_D U† = ⊗_i Z_{q_i}^{c_i}`.
#[cfg(test)]
pub(crate) fn z_coefficients(f: &PrimePowerFactorization) -> Vec<u64> {
    (0..f.len()).map(|i| crate::ring::crt_coefficient(f, i).expect("valid index")).collect()
}
