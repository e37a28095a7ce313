//! Second cohomology of the real locus, the algebraic subgroup cut out by
//! restrictions of divisor classes, and the quotient obstruction group.
//!
//! `H²(X(ℝ), ℤ)` is modelled as one `ℤ` per orientable component and one
//! `ℤ/2` per nonorientable component. Quotients and membership are decided by
//! Smith normal form of the relation matrix `[2·e_torsion ; generators]`.

mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use snf::{smith_normal_form, IntMatrix, SmithForm};

use crate::bundle::{component_census, SurfaceState, Topology};
use crate::error::{Error, Result};

const MODULE: &str = "cohom";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyLattice {
    /// Orientable component ids, one `ℤ` summand each.
    pub free_slots: Vec<usize>,
    /// Nonorientable component ids, one `ℤ/2` summand each.
    pub torsion_slots: Vec<usize>,
}

/// An element of `ℤ^free ⊕ (ℤ/2)^torsion`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeElement {
    pub free: Vec<i64>,
    pub torsion: Vec<bool>,
}

impl LatticeElement {
    pub fn zero(lattice: &CohomologyLattice) -> Self {
        LatticeElement {
            free: vec![0; lattice.free_slots.len()],
            torsion: vec![false; lattice.torsion_slots.len()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|&b| !b)
    }

    pub fn add(&self, other: &LatticeElement) -> LatticeElement {
        LatticeElement {
            free: self
                .free
                .iter()
                .zip(&other.free)
                .map(|(a, b)| a + b)
                .collect(),
            torsion: self
                .torsion
                .iter()
                .zip(&other.torsion)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }
}

impl CohomologyLattice {
    pub fn rank(&self) -> usize {
        self.free_slots.len() + self.torsion_slots.len()
    }

    /// The generator `η` of the summand belonging to a component.
    pub fn eta(&self, component: usize) -> Option<LatticeElement> {
        let mut e = LatticeElement::zero(self);
        if let Some(i) = self.free_slots.iter().position(|&c| c == component) {
            e.free[i] = 1;
        } else {
            let i = self.torsion_slots.iter().position(|&c| c == component)?;
            e.torsion[i] = true;
        }
        Some(e)
    }

    fn check(&self, x: &LatticeElement) -> Result<()> {
        if x.free.len() != self.free_slots.len() || x.torsion.len() != self.torsion_slots.len() {
            return Err(Error::input(
                MODULE,
                format!(
                    "element has shape ({}, {}) but the lattice is ℤ^{} ⊕ (ℤ/2)^{}",
                    x.free.len(),
                    x.torsion.len(),
                    self.free_slots.len(),
                    self.torsion_slots.len()
                ),
            ));
        }
        Ok(())
    }

    fn coords(&self, x: &LatticeElement) -> Vec<BigInt> {
        x.free
            .iter()
            .map(|&v| BigInt::from(v))
            .chain(x.torsion.iter().map(|&b| BigInt::from(b as u8)))
            .collect()
    }

    /// Rows `2·e_i` for every torsion slot followed by the generators.
    fn relation_matrix(&self, gens: &[LatticeElement]) -> Result<IntMatrix> {
        let a = self.free_slots.len();
        let mut rows = Vec::with_capacity(self.torsion_slots.len() + gens.len());
        for i in 0..self.torsion_slots.len() {
            let mut r = vec![BigInt::zero(); self.rank()];
            r[a + i] = BigInt::from(2);
            rows.push(r);
        }
        for g in gens {
            self.check(g)?;
            rows.push(self.coords(g));
        }
        Ok(IntMatrix::from_rows(&rows, self.rank()))
    }
}

impl fmt::Display for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free: Vec<String> = self.free.iter().map(ToString::to_string).collect();
        let tors: Vec<&str> = self
            .torsion
            .iter()
            .map(|&b| if b { "1" } else { "0" })
            .collect();
        write!(f, "({}; {})", free.join(","), tors.join(","))
    }
}

pub fn lattice_of(state: &SurfaceState) -> CohomologyLattice {
    let mut l = CohomologyLattice::default();
    for c in &state.components {
        if c.topology.is_orientable() {
            l.free_slots.push(c.id);
        } else {
            l.torsion_slots.push(c.id);
        }
    }
    l
}

/// A divisor class on the complexification whose restriction is tabulated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum NsGenerator {
    /// Class `f` of a fiber.
    Fiber,
    /// Class `h` of a section.
    Section,
    /// Component `c ∈ {1, 2}` of a singular fiber over a zero of `g` bounding a spherical component.
    SingularFiberComponent { component: usize, branch: u8 },
    /// `K_X = r·f − 2h + Σ E`, with `r` an unspecified integer.
    Canonical { r: String },
    /// Real (−1)-curve of a real blow-up.
    Exceptional { component: usize, blowup: usize },
    /// Pair of conjugate (−1)-curves of a blow-up at conjugate points.
    ExceptionalPair { blowup: usize },
}

impl fmt::Display for NsGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NsGenerator::Fiber => write!(f, "f"),
            NsGenerator::Section => write!(f, "h"),
            NsGenerator::SingularFiberComponent { component, branch } => {
                write!(f, "E[{component}]^{branch}")
            }
            NsGenerator::Canonical { r } => write!(f, "K_X = {r}·f - 2h + ΣE"),
            NsGenerator::Exceptional { component, blowup } => {
                write!(f, "L[{blowup}] (meets component {component})")
            }
            NsGenerator::ExceptionalPair { blowup } => write!(f, "L[{blowup}] + σL[{blowup}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsRow {
    pub generator: NsGenerator,
    pub image: LatticeElement,
}

/// Images under restriction to the real locus of a generating set of the
/// Néron–Severi group of the complexification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsRestrictionTable {
    pub lattice: CohomologyLattice,
    pub rows: Vec<NsRow>,
}

impl NsRestrictionTable {
    pub fn row(&self, generator: &NsGenerator) -> Option<&LatticeElement> {
        self.rows
            .iter()
            .find(|r| &r.generator == generator)
            .map(|r| &r.image)
    }
}

pub fn restriction_table(state: &SurfaceState) -> NsRestrictionTable {
    let lattice = lattice_of(state);
    let zero = LatticeElement::zero(&lattice);
    let mut rows = vec![NsRow {
        generator: NsGenerator::Fiber,
        image: zero.clone(),
    }];

    // Each spherical component of the minimal model carries two singular fibers,
    // each a conjugate pair of lines meeting transversally in one real point.
    for c in state.components.iter().filter(|c| c.was_minimal_sphere()) {
        let eta = lattice.eta(c.id).expect("component has a slot");
        for branch in 1..=2 {
            rows.push(NsRow {
                generator: NsGenerator::SingularFiberComponent {
                    component: c.id,
                    branch,
                },
                image: eta.clone(),
            });
        }
    }

    // A section meets every Klein component of the minimal model an odd number of
    // times and restricts trivially to tori.
    let mut section = zero.clone();
    for c in state.components.iter().filter(|c| c.was_minimal_klein()) {
        section = section.add(&lattice.eta(c.id).expect("component has a slot"));
    }
    rows.push(NsRow {
        generator: NsGenerator::Section,
        image: section,
    });

    rows.push(NsRow {
        generator: NsGenerator::Canonical { r: "r".to_string() },
        image: zero.clone(),
    });

    for (i, t) in state.history.iter().enumerate() {
        use crate::bundle::TransformationKind::*;
        match (t.kind, t.target) {
            (BlowupReal, Some(component)) => rows.push(NsRow {
                generator: NsGenerator::Exceptional {
                    component,
                    blowup: i,
                },
                image: lattice.eta(component).expect("component has a slot"),
            }),
            (BlowupConjPair, _) => rows.push(NsRow {
                generator: NsGenerator::ExceptionalPair { blowup: i },
                image: zero.clone(),
            }),
            _ => {}
        }
    }
    NsRestrictionTable { lattice, rows }
}

/// Generators of the algebraic subgroup: sphere classes, the sum of the Klein
/// classes of the minimal model, and classes of components met by a real
/// exceptional curve. Zero and repeated images are dropped.
pub fn algebraic_generators(state: &SurfaceState) -> Vec<LatticeElement> {
    let table = restriction_table(state);
    let mut out: Vec<LatticeElement> = Vec::new();
    for r in table.rows {
        if !r.image.is_zero() && !out.contains(&r.image) {
            out.push(r.image);
        }
    }
    out
}

/// A finitely generated abelian group `ℤ^r ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_m`, `d_i | d_{i+1}`, `d_i ≥ 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupInvariants {
    pub free_rank: usize,
    pub torsion_factors: Vec<u64>,
}

impl GroupInvariants {
    pub fn trivial() -> Self {
        GroupInvariants::default()
    }

    pub fn free(rank: usize) -> Self {
        GroupInvariants {
            free_rank: rank,
            torsion_factors: Vec::new(),
        }
    }

    /// `ℤ^t ⊕ (ℤ/2)^count`.
    pub fn with_two_torsion(rank: usize, count: usize) -> Self {
        GroupInvariants {
            free_rank: rank,
            torsion_factors: vec![2; count],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion_factors.is_empty()
    }
}

impl fmt::Display for GroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion_factors.len() {
            let d = self.torsion_factors[i];
            let run = self.torsion_factors[i..]
                .iter()
                .take_while(|&&x| x == d)
                .count();
            parts.push(if run == 1 {
                format!("Z/{d}")
            } else {
                format!("(Z/{d})^{run}")
            });
            i += run;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Invariant factors of `(ℤ^a ⊕ (ℤ/2)^b) / ⟨gens⟩`.
pub fn quotient_group(
    lattice: &CohomologyLattice,
    gens: &[LatticeElement],
) -> Result<GroupInvariants> {
    let rel = lattice.relation_matrix(gens)?;
    let form = smith_normal_form(&rel);
    let factors = form.invariant_factors();
    let torsion_factors = factors
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| {
            d.to_u64()
                .ok_or_else(|| Error::input(MODULE, format!("invariant factor {d} overflows")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupInvariants {
        free_rank: lattice.rank() - factors.len(),
        torsion_factors,
    })
}

/// Membership test for a fixed subgroup `⟨gens⟩`, with the Smith form computed once.
///
/// `y·R = x` is solvable iff `z·D = x·V` is, where `R = [2·e_torsion ; gens]`,
/// `U·R·V = D` and `z = y·U⁻¹` ranges over all integer rows.
#[derive(Clone, Debug)]
pub struct SubgroupMembership {
    lattice: CohomologyLattice,
    v: IntMatrix,
    factors: Vec<BigInt>,
    /// `V` and the invariant factors as machine integers, when they fit.
    small: Option<(Vec<i128>, Vec<i128>)>,
}

impl SubgroupMembership {
    pub fn new(lattice: &CohomologyLattice, gens: &[LatticeElement]) -> Result<Self> {
        let rel = lattice.relation_matrix(gens)?;
        let form = smith_normal_form(&rel);
        let factors = form.invariant_factors();
        let n = lattice.rank();
        let small_v: Option<Vec<i128>> = (0..n * n)
            .map(|i| form.v[(i / n, i % n)].to_i64().map(i128::from))
            .collect();
        let small_f: Option<Vec<i128>> =
            factors.iter().map(|d| d.to_i64().map(i128::from)).collect();
        Ok(SubgroupMembership {
            lattice: lattice.clone(),
            v: form.v,
            factors,
            small: small_v.zip(small_f),
        })
    }

    pub fn contains(&self, x: &LatticeElement) -> Result<bool> {
        self.lattice.check(x)?;
        let n = self.lattice.rank();
        if let Some((v, factors)) = &self.small {
            let coords: Vec<i128> = x
                .free
                .iter()
                .map(|&c| i128::from(c))
                .chain(x.torsion.iter().map(|&b| i128::from(b)))
                .collect();
            let fits = coords.iter().all(|c| c.abs() < (1 << 40));
            if fits {
                return Ok((0..n).all(|j| {
                    let t: i128 = (0..n).map(|i| coords[i] * v[i * n + j]).sum();
                    match factors.get(j) {
                        Some(d) => t % d == 0,
                        None => t == 0,
                    }
                }));
            }
        }
        let target = self.v.left_mul_vec(&self.lattice.coords(x));
        Ok(target
            .iter()
            .enumerate()
            .all(|(i, t)| match self.factors.get(i) {
                Some(d) => t.is_multiple_of(d),
                None => t.is_zero(),
            }))
    }
}

/// Whether `x` lies in the subgroup generated by `gens`.
pub fn is_member(
    lattice: &CohomologyLattice,
    gens: &[LatticeElement],
    x: &LatticeElement,
) -> Result<bool> {
    lattice.check(x)?;
    SubgroupMembership::new(lattice, gens)?.contains(x)
}

/// Which closed form the quotient is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    /// `ℤ^t ⊕ (ℤ/2)^(k−1)` for relatively minimal conic bundles.
    Minimal,
    /// `ℤ^t ⊕ (ℤ/2)^(k′−1)` once blow-ups are present.
    BlownUp,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaReport {
    pub group: GroupInvariants,
    pub predicted: GroupInvariants,
    pub closed_form: ClosedForm,
    pub matches: bool,
    /// Genus-0 base: the generator rules are applied, but the classification
    /// of rational surfaces is the authoritative source.
    pub c_rational: bool,
}

/// Closed-form prediction from the component census. An exponent `k − 1` with
/// no Klein component at all is read as 0.
pub fn predicted_gamma(state: &SurfaceState) -> (GroupInvariants, ClosedForm) {
    let c = component_census(state);
    if state.minimal {
        (
            GroupInvariants::with_two_torsion(c.t, c.k.saturating_sub(1)),
            ClosedForm::Minimal,
        )
    } else {
        (
            GroupInvariants::with_two_torsion(c.t, c.k_prime.saturating_sub(1)),
            ClosedForm::BlownUp,
        )
    }
}

pub fn gamma(state: &SurfaceState) -> Result<GammaReport> {
    let lattice = lattice_of(state);
    let group = quotient_group(&lattice, &algebraic_generators(state))?;
    let (predicted, closed_form) = predicted_gamma(state);
    Ok(GammaReport {
        matches: group == predicted,
        group,
        predicted,
        closed_form,
        c_rational: state.c_rational(),
    })
}

/// Number of components of each topology, for display.
pub fn topology_summary(state: &SurfaceState) -> Vec<(Topology, usize)> {
    let mut out: Vec<(Topology, usize)> = Vec::new();
    for c in &state.components {
        match out.iter_mut().find(|(t, _)| *t == c.topology) {
            Some((_, n)) => *n += 1,
            None => out.push((c.topology, 1)),
        }
    }
    out
}
