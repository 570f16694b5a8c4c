//! AME verification for stabilizer groups, and the prime-power decomposition
//! of stabilizer states over composite `D`.
//!
//! For a stabilizer state, `ρ_S` is maximally mixed exactly when the only
//! group element supported inside `S` is the identity. Counting those
//! elements needs no enumeration: they are the kernel of the projection of
//! the exponent image onto the coordinates outside `S`, so the reduction on
//! `S` is maximally mixed iff that projection still has order `D^n`.

mod decompose;

pub(crate) use decompose::reduce_ame_with;
pub use decompose::{
    crt_unitary, decompose, decompose_with, merge_factors, reduce_ame, CrtRelabel, DecomposeOptions,
    FactorDecomposition, MergedFactor, ReductionReport,
};

use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;

use crate::pauli::PauliProduct;
use crate::ring::IntMatrix;
use crate::stabgroup::{enumerate_elements, image_order, relation_basis, validate, StabilizerGroup};
use crate::statevec::{state_from_group, verify_ame_dense};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Symbolic,
    Dense,
    Both,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Symbolic => "symbolic",
            Method::Dense => "dense",
            Method::Both => "both",
        })
    }
}

/// A nonidentity stabilizer element living inside a `⌊n/2⌋`-subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportWitness {
    pub subset: Vec<usize>,
    pub element: PauliProduct,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmeVerdict {
    pub is_ame: bool,
    pub method: Method,
    pub witness: Option<SupportWitness>,
    pub worst_subset: Option<Vec<usize>>,
    pub worst_deviation: Option<f64>,
}

impl AmeVerdict {
    fn symbolic(witness: Option<SupportWitness>) -> Self {
        Self { is_ame: witness.is_none(), method: Method::Symbolic, witness, worst_subset: None, worst_deviation: None }
    }
}

fn require_state(g: &StabilizerGroup) -> Result<()> {
    let report = validate(g);
    if report.stabilizes_unique_state {
        Ok(())
    } else {
        Err(Error::NotAStabilizerState(report))
    }
}

/// Party subsets of size `⌊n/2⌋`, lexicographic.
pub fn balanced_subsets(parties: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..parties).combinations(parties / 2)
}

/// Generator exponent rows restricted to the `(x_j, z_j)` columns with `j ∉ subset`.
fn outside_rows(g: &StabilizerGroup, subset: &[usize]) -> IntMatrix {
    let outside: Vec<usize> = (0..g.parties()).filter(|j| !subset.contains(j)).collect();
    let rows: Vec<Vec<u64>> = g
        .generators()
        .iter()
        .map(|p| outside.iter().map(|&j| p.x()[j]).chain(outside.iter().map(|&j| p.z()[j])).collect())
        .collect();
    IntMatrix::from_rows(&rows, 2 * outside.len())
}

fn subset_is_clean(g: &StabilizerGroup, subset: &[usize], full: &BigUint) -> bool {
    image_order(&outside_rows(g, subset), g.dimension()) == *full
}

fn subset_witness(g: &StabilizerGroup, subset: &[usize]) -> Option<PauliProduct> {
    relation_basis(&outside_rows(g, subset), g.dimension()).iter().map(|c| g.element(c)).find(|e| !e.is_identity())
}

/// Symbolic AME test through Smith normal forms. Subsets are scanned in
/// lexicographic order and the first failing one yields the witness.
pub fn verify_ame_symbolic(g: &StabilizerGroup) -> Result<AmeVerdict> {
    require_state(g)?;
    let full = g.state_group_order();
    for subset in balanced_subsets(g.parties()) {
        if !subset_is_clean(g, &subset, &full) {
            let element = subset_witness(g, &subset).ok_or_else(|| {
                Error::Inconsistency(format!("subset {subset:?} fails the order test but has no witness"))
            })?;
            return Ok(AmeVerdict::symbolic(Some(SupportWitness { subset, element })));
        }
    }
    Ok(AmeVerdict::symbolic(None))
}

/// Early-exit boolean form of [`verify_ame_symbolic`] for hot loops; the
/// caller guarantees `g` is a valid stabilizer-state group.
pub(crate) fn is_ame_symbolic_unchecked(g: &StabilizerGroup) -> bool {
    let full = g.state_group_order();
    balanced_subsets(g.parties()).all(|s| subset_is_clean(g, &s, &full))
}

/// Same criterion by enumerating the whole group (desk scale only).
pub fn verify_ame_by_enumeration(g: &StabilizerGroup, budget: usize) -> Result<AmeVerdict> {
    require_state(g)?;
    let elems = enumerate_elements(g, budget)?;
    for subset in balanced_subsets(g.parties()) {
        let inside = elems.elements.iter().find(|e| !e.is_identity() && e.support().iter().all(|j| subset.contains(j)));
        if let Some(e) = inside {
            return Ok(AmeVerdict::symbolic(Some(SupportWitness { subset, element: e.clone() })));
        }
    }
    Ok(AmeVerdict::symbolic(None))
}

/// Runs the requested verifier(s). With [`Method::Both`], disagreement is an
/// [`Error::Inconsistency`].
pub fn verify_ame(g: &StabilizerGroup, method: Method, tol: f64, dense_budget: usize) -> Result<AmeVerdict> {
    let symbolic = match method {
        Method::Dense => None,
        _ => Some(verify_ame_symbolic(g)?),
    };
    let dense = match method {
        Method::Symbolic => None,
        _ => Some(verify_ame_dense(&state_from_group(g, dense_budget)?, tol, dense_budget)?),
    };
    match (symbolic, dense) {
        (Some(s), None) => Ok(s),
        (None, Some(d)) => Ok(AmeVerdict {
            is_ame: d.is_ame,
            method: Method::Dense,
            witness: None,
            worst_subset: Some(d.worst_subset),
            worst_deviation: Some(d.worst_deviation),
        }),
        (Some(s), Some(d)) => {
            if s.is_ame != d.is_ame {
                return Err(Error::Inconsistency(format!(
                    "symbolic verdict {} but dense verdict {} (worst deviation {:e} on {:?})",
                    s.is_ame, d.is_ame, d.worst_deviation, d.worst_subset
                )));
            }
            Ok(AmeVerdict {
                is_ame: s.is_ame,
                method: Method::Both,
                witness: s.witness,
                worst_subset: Some(d.worst_subset),
                worst_deviation: Some(d.worst_deviation),
            })
        }
        (None, None) => unreachable!("every method runs at least one verifier"),
    }
}
