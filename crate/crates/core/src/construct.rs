//! Generator lists for standard stabilizer states.

use crate::pauli::PauliProduct;
use crate::search::GraphState;
use crate::stabgroup::StabilizerGroup;
use crate::Result;

/// GHZ state `Σ_j |j…j⟩ / √D`: generators `X^{⊗n}` and `Z_k Z_{k+1}^{-1}`.
pub fn ghz(dim: u64, parties: usize) -> Result<StabilizerGroup> {
    let mut gens = vec![PauliProduct::new(dim, 0, &vec![1; parties], &vec![0; parties])?];
    for k in 0..parties.saturating_sub(1) {
        let mut z = vec![0i64; parties];
        z[k] = 1;
        z[k + 1] = -1;
        gens.push(PauliProduct::new(dim, 0, &vec![0; parties], &z)?);
    }
    StabilizerGroup::new(dim, parties, gens)
}

/// Generalized Bell pair `Σ_j |jj⟩ / √D`, an AME(2, D) state.
pub fn bell(dim: u64) -> Result<StabilizerGroup> {
    ghz(dim, 2)
}

/// `|0…0⟩`, stabilized by `Z` on every site.
pub fn zero_product(dim: u64, parties: usize) -> Result<StabilizerGroup> {
    let gens = (0..parties).map(|k| PauliProduct::z_on(dim, parties, k, 1)).collect();
    StabilizerGroup::new(dim, parties, gens)
}

/// Graph state from upper-triangle weights `a_{12} a_{13} … a_{(n-1)n}`.
pub fn graph_from_upper(dim: u64, parties: usize, upper: &[i64]) -> Result<StabilizerGroup> {
    GraphState::from_upper(dim, parties, upper)?.to_group()
}

/// Graph state number `index` in the search order.
pub fn graph_from_index(dim: u64, parties: usize, index: u128) -> Result<StabilizerGroup> {
    GraphState::from_index(dim, parties, index)?.to_group()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabgroup::validate;

    #[test]
    fn constructions_are_valid() {
        for d in 2..=7 {
            for n in 1..=4 {
                assert!(validate(&ghz(d, n).unwrap()).stabilizes_unique_state);
                assert!(validate(&zero_product(d, n).unwrap()).stabilizes_unique_state);
            }
            assert!(validate(&bell(d).unwrap()).stabilizes_unique_state);
        }
    }
}
