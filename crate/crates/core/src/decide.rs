//! Decision procedures for approximating smooth maps by regular maps.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bundle::{SurfaceState, Topology};
use crate::cohom::{
    algebraic_generators, lattice_of, GroupInvariants, LatticeElement, SubgroupMembership,
};
use crate::error::{Error, Result};

const MODULE: &str = "decide";

/// Degree data of a smooth map `X(ℝ) → S²`, one entry per real component in
/// component order: the integer degree on orientable components, the mod-2
/// degree (0 or 1) on nonorientable ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDescriptor {
    pub degrees: Vec<i64>,
}

impl MapDescriptor {
    pub fn new(degrees: Vec<i64>) -> Self {
        MapDescriptor { degrees }
    }

    pub fn constant(state: &SurfaceState) -> Self {
        MapDescriptor {
            degrees: vec![0; state.components.len()],
        }
    }
}

/// The pullback of the generator of `H²(S², ℤ)`, as a lattice element.
pub fn to_lattice_element(state: &SurfaceState, f: &MapDescriptor) -> Result<LatticeElement> {
    if f.degrees.len() != state.components.len() {
        return Err(Error::input(
            MODULE,
            format!(
                "map has {} degrees but the real locus has {} components",
                f.degrees.len(),
                state.components.len()
            ),
        ));
    }
    let mut x = LatticeElement::default();
    for (c, &deg) in state.components.iter().zip(&f.degrees) {
        if c.topology.is_orientable() {
            x.free.push(deg);
        } else {
            if !(0..=1).contains(&deg) {
                return Err(Error::input(
                    MODULE,
                    format!(
                        "component {} is nonorientable; its degree is taken mod 2 and must be 0 or 1, got {deg}",
                        c.id
                    ),
                ));
            }
            x.torsion.push(deg == 1);
        }
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// Nonzero degree on a torus component.
    TorusDegree { component: usize, degree: i64 },
    /// Two dominating Klein components with different mod-2 degrees.
    KleinParity { first: usize, second: usize },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::TorusDegree { component, degree } => {
                write!(
                    f,
                    "degree {degree} on torus component {component} (must be 0)"
                )
            }
            Obstruction::KleinParity { first, second } => write!(
                f,
                "mod-2 degrees differ on dominating Klein components {first} and {second}"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub approximable: bool,
    pub reasons: Vec<Obstruction>,
}

/// The torus/Klein-parity criterion read directly off the components, with no
/// lattice computation. Spheres and components met by a real exceptional curve
/// are unconstrained.
pub fn criterion_approx_sphere(state: &SurfaceState, f: &MapDescriptor) -> Result<Decision> {
    to_lattice_element(state, f)?;
    let mut reasons = Vec::new();
    for (c, &deg) in state.components.iter().zip(&f.degrees) {
        if c.topology == Topology::Torus && deg != 0 {
            reasons.push(Obstruction::TorusDegree {
                component: c.id,
                degree: deg,
            });
        }
    }
    let kleins: Vec<(usize, i64)> = state
        .components
        .iter()
        .zip(&f.degrees)
        .filter(|(c, _)| c.topology.is_klein_bottle() && c.dominates_circle)
        .map(|(c, &d)| (c.id, d))
        .collect();
    for (i, a) in kleins.iter().enumerate() {
        for b in &kleins[i + 1..] {
            if a.1 != b.1 {
                reasons.push(Obstruction::KleinParity {
                    first: a.0,
                    second: b.0,
                });
            }
        }
    }
    Ok(Decision {
        approximable: reasons.is_empty(),
        reasons,
    })
}

/// Approximability of smooth maps `X(ℝ) → S²` on one surface, by membership of
/// the pulled-back class in the algebraic subgroup. Build once, query many maps.
pub struct SphereApproximation<'a> {
    state: &'a SurfaceState,
    membership: SubgroupMembership,
}

impl<'a> SphereApproximation<'a> {
    pub fn new(state: &'a SurfaceState) -> Result<Self> {
        Ok(SphereApproximation {
            state,
            membership: SubgroupMembership::new(&lattice_of(state), &algebraic_generators(state))?,
        })
    }

    pub fn is_approximable(&self, f: &MapDescriptor) -> Result<bool> {
        self.membership
            .contains(&to_lattice_element(self.state, f)?)
    }

    /// Rejections are explained by the direct criterion.
    pub fn decide(&self, f: &MapDescriptor) -> Result<Decision> {
        let approximable = self.is_approximable(f)?;
        let reasons = if approximable {
            Vec::new()
        } else {
            criterion_approx_sphere(self.state, f)?.reasons
        };
        Ok(Decision {
            approximable,
            reasons,
        })
    }
}

pub fn decide_approx_sphere(state: &SurfaceState, f: &MapDescriptor) -> Result<Decision> {
    to_lattice_element(state, f)?;
    SphereApproximation::new(state)?.decide(f)
}

/// Topology of a connected compact target surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "genus", rename_all = "snake_case")]
pub enum TargetTopology {
    Sphere,
    Torus,
    Klein,
    Orientable(u32),
    Nonorientable(u32),
}

impl TargetTopology {
    fn is_sphere(self) -> bool {
        matches!(self, TargetTopology::Sphere | TargetTopology::Orientable(0))
    }
}

fn is_torus_source(v: Topology) -> bool {
    v == Topology::Torus
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RationalTargetDecision {
    /// Regular maps are dense among smooth maps.
    Dense,
    /// The closure of the regular maps is exactly the null-homotopic maps.
    ClosureNullHomotopic,
}

impl fmt::Display for RationalTargetDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalTargetDecision::Dense => write!(f, "dense"),
            RationalTargetDecision::ClosureNullHomotopic => write!(f, "closure_null_homotopic"),
        }
    }
}

/// Density of regular maps from a connected real ruled surface into a connected
/// real rational surface: dense except torus → sphere.
pub fn decide_approx_rational_target(v: Topology, w: TargetTopology) -> RationalTargetDecision {
    if is_torus_source(v) && w.is_sphere() {
        RationalTargetDecision::ClosureNullHomotopic
    } else {
        RationalTargetDecision::Dense
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CRationalKind {
    TorusModel,
    MaximalDelPezzoDegree2,
    Other,
}

/// A geometrically rational surface identified by the caller.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CRationalSurfaceKind {
    pub kind: CRationalKind,
    pub components: Vec<Topology>,
}

impl CRationalSurfaceKind {
    pub fn new(kind: CRationalKind, components: Vec<Topology>) -> Result<Self> {
        let ok = match kind {
            CRationalKind::TorusModel => components == [Topology::Torus],
            CRationalKind::MaximalDelPezzoDegree2 => components == [Topology::Sphere; 4],
            CRationalKind::Other => true,
        };
        if !ok {
            return Err(Error::input(
                MODULE,
                format!("{kind:?} is incompatible with real components {components:?}"),
            ));
        }
        Ok(CRationalSurfaceKind { kind, components })
    }
}

/// The obstruction group of a geometrically rational surface, by classification.
pub fn gamma_c_rational(surface: &CRationalSurfaceKind) -> GroupInvariants {
    match surface.kind {
        CRationalKind::MaximalDelPezzoDegree2 => GroupInvariants::with_two_torsion(0, 1),
        _ if surface.components == [Topology::Torus] => GroupInvariants::free(1),
        _ => GroupInvariants::trivial(),
    }
}

/// Restriction of the canonical class vanishes iff every nonorientable component
/// has even Euler characteristic.
pub fn canonical_class_vanishes(state: &SurfaceState) -> bool {
    state
        .components
        .iter()
        .filter(|c| !c.topology.is_orientable())
        .all(|c| c.topology.euler_characteristic() % 2 == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{
        apply, build_minimal_surface, BaseCurve, CircleData, ConicBundleSpec, GData, Sign,
        Transformation,
    };

    fn state(genus: u32, circles: Vec<CircleData>, ts: Vec<Transformation>) -> SurfaceState {
        let spec = ConicBundleSpec {
            base: BaseCurve::abstract_curve(genus, circles.len() as u32).unwrap(),
            g: GData::Abstract(circles),
            transformations: vec![],
        };
        ts.iter()
            .fold(build_minimal_surface(&spec).unwrap(), |s, t| {
                apply(&s, t).unwrap()
            })
    }

    fn pos() -> CircleData {
        CircleData::signed(Sign::Positive)
    }

    #[test]
    fn lattice_element_placement() {
        let s = state(
            2,
            vec![CircleData::zeros(2), pos(), pos()],
            vec![Transformation::elm_real(1), Transformation::elm_real(2)],
        );
        assert!(to_lattice_element(&s, &MapDescriptor::constant(&s))
            .unwrap()
            .is_zero());
        let x = to_lattice_element(&s, &MapDescriptor::new(vec![5, 1, 0])).unwrap();
        assert_eq!(x.free, vec![5]);
        assert_eq!(x.torsion, vec![true, false]);
        assert!(to_lattice_element(&s, &MapDescriptor::new(vec![0, 2, 0])).is_err());
        assert!(to_lattice_element(&s, &MapDescriptor::new(vec![0, 0])).is_err());
    }

    #[test]
    fn torus_degree_blocks() {
        let s = state(1, vec![CircleData::zeros(2), pos()], vec![]);
        let d = decide_approx_sphere(&s, &MapDescriptor::new(vec![0, 1])).unwrap();
        assert!(!d.approximable);
        assert_eq!(
            d.reasons,
            vec![Obstruction::TorusDegree {
                component: 1,
                degree: 1
            }]
        );
        let d = decide_approx_sphere(&s, &MapDescriptor::new(vec![7, 0])).unwrap();
        assert!(d.approximable);
    }

    #[test]
    fn klein_parity() {
        let s = state(
            1,
            vec![pos(), pos()],
            vec![Transformation::elm_real(0), Transformation::elm_real(1)],
        );
        assert!(
            decide_approx_sphere(&s, &MapDescriptor::new(vec![1, 1]))
                .unwrap()
                .approximable
        );
        let d = decide_approx_sphere(&s, &MapDescriptor::new(vec![1, 0])).unwrap();
        assert!(!d.approximable);
        assert_eq!(
            d.reasons,
            vec![Obstruction::KleinParity {
                first: 0,
                second: 1
            }]
        );
    }

    #[test]
    fn rational_targets() {
        use RationalTargetDecision::*;
        assert_eq!(
            decide_approx_rational_target(Topology::Torus, TargetTopology::Sphere),
            ClosureNullHomotopic
        );
        assert_eq!(
            decide_approx_rational_target(Topology::Klein, TargetTopology::Torus),
            Dense
        );
        assert_eq!(
            decide_approx_rational_target(Topology::Sphere, TargetTopology::Sphere),
            Dense
        );
        assert_eq!(
            decide_approx_rational_target(Topology::Torus, TargetTopology::Torus),
            Dense
        );
    }

    #[test]
    fn c_rational_catalogue() {
        let torus =
            CRationalSurfaceKind::new(CRationalKind::TorusModel, vec![Topology::Torus]).unwrap();
        assert_eq!(gamma_c_rational(&torus), GroupInvariants::free(1));
        let dp2 = CRationalSurfaceKind::new(
            CRationalKind::MaximalDelPezzoDegree2,
            vec![Topology::Sphere; 4],
        )
        .unwrap();
        assert_eq!(gamma_c_rational(&dp2).torsion_factors, vec![2]);
        let two =
            CRationalSurfaceKind::new(CRationalKind::Other, vec![Topology::Sphere; 2]).unwrap();
        assert!(gamma_c_rational(&two).is_trivial());
        assert!(CRationalSurfaceKind::new(
            CRationalKind::MaximalDelPezzoDegree2,
            vec![Topology::Sphere; 3]
        )
        .is_err());
    }

    #[test]
    fn canonical_class_parity() {
        let klein = state(1, vec![pos()], vec![Transformation::elm_real(0)]);
        assert!(canonical_class_vanishes(&klein));
        let rp2 = state(
            1,
            vec![CircleData::zeros(2)],
            vec![Transformation::blowup_real(0)],
        );
        assert!(!canonical_class_vanishes(&rp2));
        let orientable = state(1, vec![CircleData::zeros(2), pos()], vec![]);
        assert!(canonical_class_vanishes(&orientable));
    }
}
