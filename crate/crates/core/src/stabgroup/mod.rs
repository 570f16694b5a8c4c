//! Stabilizer groups over `Z_D`.
//!
//! A generator list is never assumed to be valid; [`validate`] decides whether
//! it is abelian, phase consistent and of order `D^n`. Orders and relations
//! come from the Smith normal form of the check matrix (rows `(x | z)`), so
//! validation never enumerates the group. [`enumerate_elements`] is kept as a
//! brute-force oracle.

mod format;

pub use format::{parse_generator_file, write_generator_file};

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::pauli::PauliProduct;
use crate::ring::{crt_coefficient, smith_normal_form, sylow_exponent, IntMatrix, PrimePowerFactorization};
use crate::{Error, Result};

/// Default cap on the number of elements [`enumerate_elements`] will produce.
pub const DEFAULT_ENUMERATION_BUDGET: usize = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StabilizerGroup {
    dim: u64,
    parties: usize,
    generators: Vec<PauliProduct>,
}

impl StabilizerGroup {
    pub fn new(dim: u64, parties: usize, generators: Vec<PauliProduct>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        if parties == 0 {
            return Err(Error::ShapeMismatch("a stabilizer group needs at least one party".into()));
        }
        if let Some(bad) = generators.iter().find(|g| g.dimension() != dim || g.parties() != parties) {
            return Err(Error::ShapeMismatch(format!(
                "generator {bad:?} does not live on {parties} qudits of dimension {dim}"
            )));
        }
        Ok(Self { dim, parties, generators })
    }

    pub fn dimension(&self) -> u64 {
        self.dim
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn generators(&self) -> &[PauliProduct] {
        &self.generators
    }

    /// `D^n` as an exact integer.
    pub fn state_group_order(&self) -> BigUint {
        BigUint::from(self.dim).pow(self.parties as u32)
    }

    /// Rows `(x_1 … x_n | z_1 … z_n)` of the generators.
    pub fn check_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<u64>> = self.generators.iter().map(exponent_row).collect();
        IntMatrix::from_rows(&rows, 2 * self.parties)
    }

    /// The ordered product `∏ g_i^{c_i}`; negative coefficients are allowed.
    pub fn element(&self, coefficients: &[BigInt]) -> PauliProduct {
        let two_d = BigInt::from(2 * self.dim);
        let mut acc = PauliProduct::identity(self.dim, self.parties);
        for (g, c) in self.generators.iter().zip(coefficients) {
            let k = c.mod_floor(&two_d).to_u64().expect("reduced below 2D");
            if k != 0 {
                acc = acc.mul_unchecked(&g.power(k));
            }
        }
        acc
    }
}

impl fmt::Debug for StabilizerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "StabilizerGroup(D={}, n={}) [", self.dim, self.parties)?;
        for g in &self.generators {
            writeln!(f, "  {g}")?;
        }
        write!(f, "]")
    }
}

fn exponent_row(p: &PauliProduct) -> Vec<u64> {
    p.x().iter().chain(p.z()).copied().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub abelian: bool,
    /// Exact order of the generated group, phases included.
    pub order: BigUint,
    pub phase_consistent: bool,
    pub stabilizes_unique_state: bool,
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "abelian={} order={} phase_consistent={} unique_state={}",
            self.abelian, self.order, self.phase_consistent, self.stabilizes_unique_state
        )
    }
}

/// Relations among row vectors over `Z_modulus`: a lattice basis of
/// `{ c ∈ Z^k : Σ c_i·row_i ≡ 0 (mod modulus) }`, read off the Smith normal
/// form `U·G·V = diag(d)`: row `i` of `U` scaled by `modulus / gcd(d_i, modulus)`.
pub fn relation_basis(rows: &IntMatrix, modulus: u64) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(rows);
    let m = BigInt::from(modulus);
    (0..rows.rows())
        .map(|i| {
            let scale = match snf.diagonal.get(i) {
                Some(d) => &m / d.gcd(&m),
                None => BigInt::one(),
            };
            snf.left.row(i).iter().map(|u| u * &scale).collect()
        })
        .collect()
}

/// Order of the subgroup of `Z_modulus^cols` generated by the rows:
/// `∏ modulus / gcd(d_i, modulus)` over the elementary divisors.
pub fn image_order(rows: &IntMatrix, modulus: u64) -> BigUint {
    let m = BigInt::from(modulus);
    smith_normal_form(rows)
        .diagonal
        .iter()
        .map(|d| (&m / d.gcd(&m)).to_biguint().expect("positive"))
        .fold(BigUint::one(), |acc, f| acc * f)
}

/// Decides whether the generators stabilize a unique state.
///
/// The generated group maps onto its exponent image in `Z_D^{2n}`; the kernel
/// is the set of phase-only elements `λ^γ·I`. Those phases form the subgroup
/// of `Z_{2D}` generated by the commutator phases `−2⟨g_i, g_j⟩` together with
/// the phases of `∏ g_i^{c_i}` over a basis of the relation lattice.
pub fn validate(g: &StabilizerGroup) -> ValidityReport {
    let d = g.dim;
    let two_d = 2 * d;
    let gens = &g.generators;

    let mut phase_gcd = two_d;
    let mut abelian = true;
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let s = a.symplectic_unchecked(b);
            if s != 0 {
                abelian = false;
                phase_gcd = phase_gcd.gcd(&((2 * s) % two_d));
            }
        }
    }

    let check = g.check_matrix();
    for relation in relation_basis(&check, d) {
        let e = g.element(&relation);
        debug_assert!(e.is_phase_only());
        phase_gcd = phase_gcd.gcd(&e.phase());
    }
    let phase_group = two_d / phase_gcd;
    let order = image_order(&check, d) * BigUint::from(phase_group);
    let phase_consistent = phase_group == 1;
    let stabilizes_unique_state = abelian && phase_consistent && order == g.state_group_order();

    ValidityReport { abelian, order, phase_consistent, stabilizes_unique_state }
}

fn require_state(g: &StabilizerGroup) -> Result<()> {
    let report = validate(g);
    if report.stabilizes_unique_state {
        Ok(())
    } else {
        Err(Error::NotAStabilizerState(report))
    }
}

/// Every element of the generated group, in breadth-first order from the
/// identity.
#[derive(Clone, Debug)]
pub struct GroupElementSet {
    pub elements: Vec<PauliProduct>,
}

impl GroupElementSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &PauliProduct) -> bool {
        self.elements.contains(p)
    }

    pub fn as_set(&self) -> HashSet<&PauliProduct> {
        self.elements.iter().collect()
    }
}

pub fn enumerate_elements(g: &StabilizerGroup, budget: usize) -> Result<GroupElementSet> {
    let identity = PauliProduct::identity(g.dim, g.parties);
    let mut seen: HashSet<PauliProduct> = HashSet::from([identity.clone()]);
    let mut elements = vec![identity.clone()];
    let mut queue = VecDeque::from([identity]);
    while let Some(cur) = queue.pop_front() {
        for gen in &g.generators {
            let next = cur.mul_unchecked(gen);
            if seen.insert(next.clone()) {
                if elements.len() >= budget {
                    return Err(Error::EnumerationBudget(budget));
                }
                elements.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(GroupElementSet { elements })
}

/// The `q_i`-Sylow part of a valid group: generators raised to the CRT
/// idempotent `m_i`.
pub fn sylow_component(g: &StabilizerGroup, f: &PrimePowerFactorization, i: usize) -> Result<StabilizerGroup> {
    check_factorization(g, f)?;
    require_state(g)?;
    let m = sylow_exponent(f, i)?;
    let generators = g.generators.iter().map(|p| p.power(m)).collect();
    StabilizerGroup::new(g.dim, g.parties, generators)
}

/// Rewrites a Sylow component over `Z_D` as a group over `Z_{q_i}`.
///
/// Under the CRT relabeling, `X_D ↦ ⊗_j X_{q_j}` and `Z_D ↦ ⊗_j Z_{q_j}^{c_j}`
/// with `c_j = (D/q_j)^{-1} mod q_j`. An element whose exponents are multiples
/// of `t = D/q_i` is trivial on every other factor, so it becomes
/// `λ_{q_i}^{γ/t} X^{x mod q_i} Z^{c_i·z mod q_i}` on factor `i`. The phase
/// carries over exactly because `λ_D^t = λ_{q_i}`; a phase that is not a
/// multiple of `t` cannot arise from an element of order dividing `q_i` and is
/// reported as [`Error::PhaseMismatch`].
pub fn project_to_factor(
    component: &StabilizerGroup,
    f: &PrimePowerFactorization,
    i: usize,
) -> Result<StabilizerGroup> {
    check_factorization(component, f)?;
    let q = f.prime_power(i)?;
    let t = f.dimension() / q;
    let c = crt_coefficient(f, i)?;
    let mut generators = Vec::with_capacity(component.generators.len());
    for (k, p) in component.generators.iter().enumerate() {
        generators.push(project_element(p, q, t, c, k)?);
    }
    StabilizerGroup::new(q, component.parties, generators)
}

pub(crate) fn project_element(p: &PauliProduct, q: u64, t: u64, c: u64, index: usize) -> Result<PauliProduct> {
    for (position, &v) in p.x().iter().chain(p.z()).enumerate() {
        if v % t != 0 {
            return Err(Error::Divisibility { position, value: v, divisor: t });
        }
    }
    if !p.phase().is_multiple_of(t) {
        return Err(Error::PhaseMismatch { element: index, gamma: p.phase(), divisor: t });
    }
    let x = p.x().iter().map(|&v| v % q).collect();
    let z = p.z().iter().map(|&v| (c * (v % q)) % q).collect();
    Ok(PauliProduct::from_parts(q, (p.phase() / t) % (2 * q), x, z))
}

fn check_factorization(g: &StabilizerGroup, f: &PrimePowerFactorization) -> Result<()> {
    if f.dimension() != g.dim {
        return Err(Error::ShapeMismatch(format!(
            "factorization of {} applied to a group over Z_{}",
            f.dimension(),
            g.dim
        )));
    }
    Ok(())
}

/// True when every element of `h` lies in the group generated by `g`
/// (exponent image and phase both checked through a joint relation lattice).
pub fn generates_subgroup_of(h: &StabilizerGroup, g: &StabilizerGroup) -> bool {
    if h.dim != g.dim || h.parties != g.parties {
        return false;
    }
    let base = validate(g).order;
    let mut joined = g.generators.clone();
    joined.extend(h.generators.iter().cloned());
    let union = StabilizerGroup { dim: g.dim, parties: g.parties, generators: joined };
    validate(&union).order == base
}

/// Two generator lists generate the same group.
pub fn same_group(a: &StabilizerGroup, b: &StabilizerGroup) -> bool {
    generates_subgroup_of(a, b) && generates_subgroup_of(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct;
    use crate::ring::factorize;
    use proptest::prelude::*;

    fn pp(d: u64, g: i64, x: &[i64], z: &[i64]) -> PauliProduct {
        PauliProduct::new(d, g, x, z).unwrap()
    }

    fn bell2() -> StabilizerGroup {
        StabilizerGroup::new(2, 2, vec![pp(2, 0, &[1, 1], &[0, 0]), pp(2, 0, &[0, 0], &[1, 1])]).unwrap()
    }

    #[test]
    fn validate_examples() {
        let r = validate(&bell2());
        assert!(r.abelian && r.phase_consistent && r.stabilizes_unique_state);
        assert_eq!(r.order, BigUint::from(4u32));

        let nonabelian =
            StabilizerGroup::new(2, 2, vec![pp(2, 0, &[1, 1], &[0, 0]), pp(2, 0, &[0, 1], &[1, 0])]).unwrap();
        let r = validate(&nonabelian);
        assert!(!r.abelian && !r.stabilizes_unique_state);

        let minus = StabilizerGroup::new(2, 2, vec![pp(2, 0, &[1, 1], &[0, 0]), pp(2, 2, &[1, 1], &[0, 0])]).unwrap();
        let r = validate(&minus);
        assert!(r.abelian && !r.phase_consistent && !r.stabilizes_unique_state);
        assert_eq!(r.order, BigUint::from(4u32));
    }

    #[test]
    fn redundant_generators_are_fine() {
        let mut gens = bell2().generators().to_vec();
        gens.push(gens[0].multiply(&gens[1]).unwrap());
        gens.push(gens[0].clone());
        let r = validate(&StabilizerGroup::new(2, 2, gens).unwrap());
        assert!(r.stabilizes_unique_state);
        assert_eq!(r.order, BigUint::from(4u32));
    }

    #[test]
    fn qubit_y_needs_its_phase() {
        // XZ squares to −I; λ·XZ (i.e. Y up to convention) squares to +I.
        let bare = StabilizerGroup::new(2, 1, vec![pp(2, 0, &[1], &[1])]).unwrap();
        assert!(!validate(&bare).phase_consistent);
        let y = StabilizerGroup::new(2, 1, vec![pp(2, 1, &[1], &[1])]).unwrap();
        assert!(validate(&y).stabilizes_unique_state);
    }

    #[test]
    fn enumeration_examples() {
        let e = enumerate_elements(&bell2(), 100).unwrap();
        assert_eq!(e.len(), 4);
        let xx = pp(2, 0, &[1, 1], &[0, 0]);
        let zz = pp(2, 0, &[0, 0], &[1, 1]);
        assert!(e.contains(&xx.multiply(&zz).unwrap()));
        assert!(e.contains(&PauliProduct::identity(2, 2)));

        let x6 = StabilizerGroup::new(6, 1, vec![PauliProduct::x_on(6, 1, 0, 1)]).unwrap();
        assert_eq!(enumerate_elements(&x6, 100).unwrap().len(), 6);

        let empty = StabilizerGroup::new(3, 2, vec![]).unwrap();
        let e = enumerate_elements(&empty, 10).unwrap();
        assert_eq!(e.elements, vec![PauliProduct::identity(3, 2)]);
        assert_eq!(validate(&empty).order, BigUint::one());

        assert!(matches!(enumerate_elements(&x6, 3), Err(Error::EnumerationBudget(3))));
    }

    #[test]
    fn sylow_components_of_ghz6() {
        let g = construct::ghz(6, 3).unwrap();
        let f = factorize(6).unwrap();
        let c2 = sylow_component(&g, &f, 0).unwrap();
        for p in c2.generators() {
            assert!(p.x().iter().chain(p.z()).all(|v| v % 3 == 0));
        }
        assert_eq!(validate(&c2).order, BigUint::from(8u32));
        let c3 = sylow_component(&g, &f, 1).unwrap();
        assert_eq!(validate(&c3).order, BigUint::from(27u32));

        // distinct components commute and meet only in the identity
        let e2 = enumerate_elements(&c2, 1000).unwrap();
        let e3 = enumerate_elements(&c3, 1000).unwrap();
        for a in &e2.elements {
            for b in &e3.elements {
                assert_eq!(a.symplectic_inner(b).unwrap(), 0);
                if a == b {
                    assert!(a.is_identity());
                }
            }
        }
        // together they regenerate the group
        let mut gens = c2.generators().to_vec();
        gens.extend_from_slice(c3.generators());
        let joined = StabilizerGroup::new(6, 3, gens).unwrap();
        let lhs: HashSet<_> = enumerate_elements(&joined, 10_000).unwrap().elements.into_iter().collect();
        let rhs: HashSet<_> = enumerate_elements(&g, 10_000).unwrap().elements.into_iter().collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sylow_component_of_prime_dimension_is_the_group() {
        let g = construct::ghz(5, 3).unwrap();
        let c = sylow_component(&g, &factorize(5).unwrap(), 0).unwrap();
        assert!(same_group(&c, &g));
        assert_eq!(c, g);
    }

    #[test]
    fn sylow_component_rejects_invalid_groups() {
        let bad = StabilizerGroup::new(6, 1, vec![PauliProduct::x_on(6, 1, 0, 2)]).unwrap();
        let f = factorize(6).unwrap();
        assert!(matches!(sylow_component(&bad, &f, 0), Err(Error::NotAStabilizerState(_))));
        assert!(sylow_component(&bad, &factorize(12).unwrap(), 0).is_err());
    }

    #[test]
    fn projection_examples() {
        let f = factorize(6).unwrap();
        let one = StabilizerGroup::new(6, 1, vec![PauliProduct::identity(6, 1)]).unwrap();
        let p = project_to_factor(&one, &f, 0).unwrap();
        assert!(p.generators()[0].is_identity());
        assert_eq!(p.dimension(), 2);

        let x_cubed = StabilizerGroup::new(6, 1, vec![PauliProduct::x_on(6, 1, 0, 3)]).unwrap();
        let p = project_to_factor(&x_cubed, &f, 0).unwrap();
        assert_eq!(p.generators()[0], PauliProduct::x_on(2, 1, 0, 1));

        let c3 = sylow_component(&construct::ghz(6, 3).unwrap(), &f, 1).unwrap();
        let p = project_to_factor(&c3, &f, 1).unwrap();
        let r = validate(&p);
        assert!(r.stabilizes_unique_state);
        assert_eq!(r.order, BigUint::from(27u32));
    }

    #[test]
    fn projection_errors() {
        let f = factorize(6).unwrap();
        let x = StabilizerGroup::new(6, 1, vec![PauliProduct::x_on(6, 1, 0, 1)]).unwrap();
        assert!(matches!(project_to_factor(&x, &f, 0), Err(Error::Divisibility { value: 1, divisor: 3, .. })));
        let odd_phase = StabilizerGroup::new(6, 1, vec![PauliProduct::x_on(6, 1, 0, 3).with_phase(1)]).unwrap();
        assert!(matches!(project_to_factor(&odd_phase, &f, 0), Err(Error::PhaseMismatch { gamma: 1, .. })));
    }

    fn arb_group() -> impl Strategy<Value = StabilizerGroup> {
        (prop::sample::select(vec![2u64, 3, 4, 6]), 1usize..=3, 1usize..=3).prop_flat_map(|(d, n, k)| {
            let n = if d == 6 { n.min(2) } else { n };
            prop::collection::vec(
                (0..2 * d as i64, prop::collection::vec(0..d as i64, n), prop::collection::vec(0..d as i64, n)),
                k,
            )
            .prop_map(move |gs| {
                let gens = gs.iter().map(|(g, x, z)| PauliProduct::new(d, *g, x, z).unwrap()).collect();
                StabilizerGroup::new(d, n, gens).unwrap()
            })
        })
    }

    /// Random commuting generators: graph-state generators with random phases,
    /// random powers and products, so the phase test is exercised both ways.
    fn arb_abelian_group() -> impl Strategy<Value = StabilizerGroup> {
        (prop::sample::select(vec![2u64, 3, 4, 6]), 1usize..=3).prop_flat_map(|(d, n)| {
            let n = if d == 6 { n.min(2) } else { n };
            let m = n * (n - 1) / 2;
            (
                prop::collection::vec(0..d as i64, m),
                prop::collection::vec(0..2 * d as i64, n),
                prop::collection::vec((0..n, 0..n, 0..d as i64), 0..3),
            )
                .prop_map(move |(adj, phases, extra)| {
                    let graph = construct::graph_from_upper(d, n, &adj).unwrap();
                    let mut gens: Vec<PauliProduct> = graph
                        .generators()
                        .iter()
                        .zip(&phases)
                        .map(|(p, &ph)| if ph % 3 == 0 { p.clone().with_phase(ph) } else { p.clone() })
                        .collect();
                    for (a, b, k) in extra {
                        let e = gens[a].multiply(&gens[b].power(k as u64)).unwrap();
                        gens.push(e);
                    }
                    StabilizerGroup::new(d, n, gens).unwrap()
                })
        })
    }

    fn brute_force_agrees(g: &StabilizerGroup) -> std::result::Result<(), TestCaseError> {
        let report = validate(g);
        let elems = enumerate_elements(g, 200_000).unwrap();
        prop_assert_eq!(report.order.clone(), BigUint::from(elems.len()));
        let found_phase = elems.elements.iter().any(|e| e.is_phase_only() && !e.is_identity());
        prop_assert_eq!(report.phase_consistent, !found_phase);
        let commute = elems.elements.iter().all(|a| g.generators().iter().all(|b| a.symplectic_inner(b).unwrap() == 0));
        prop_assert_eq!(report.abelian, commute);
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn validate_matches_enumeration(g in arb_group()) {
            brute_force_agrees(&g)?;
        }

        #[test]
        fn validate_matches_enumeration_on_abelian_groups(g in arb_abelian_group()) {
            brute_force_agrees(&g)?;
        }

        #[test]
        fn relation_basis_is_in_kernel(g in arb_group()) {
            for rel in relation_basis(&g.check_matrix(), g.dimension()) {
                prop_assert!(g.element(&rel).is_phase_only());
            }
        }
    }

    #[test]
    fn sylow_completeness_and_projection_on_random_graphs() {
        for (d, n) in [(6u64, 2usize), (6, 3), (12, 2), (10, 2)] {
            let f = factorize(d).unwrap();
            let m = n * (n - 1) / 2;
            let total = (d as usize).pow(m as u32);
            for idx in (0..total).step_by((total / 25).max(1)) {
                let g = construct::graph_from_index(d, n, idx as u128).unwrap();
                let mut union = Vec::new();
                for i in 0..f.len() {
                    let comp = sylow_component(&g, &f, i).unwrap();
                    let q = f.prime_power(i).unwrap();
                    assert_eq!(validate(&comp).order, BigUint::from(q).pow(n as u32));
                    let proj = project_to_factor(&comp, &f, i).unwrap();
                    let r = validate(&proj);
                    assert!(r.stabilizes_unique_state, "{proj:?}");
                    assert_eq!(r.order, BigUint::from(q).pow(n as u32));
                    union.extend(comp.generators().iter().cloned());
                }
                assert!(same_group(&StabilizerGroup::new(d, n, union).unwrap(), &g));
            }
        }
    }
}
