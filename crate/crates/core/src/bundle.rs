//! Real loci of conic bundles `x² + y² = g(z)` and their elementary
//! transformations and blow-ups.
//!
//! Component ids are assigned once, when the minimal surface is built: circles
//! in order, and on each circle the positive arcs in order (for an explicit `g`
//! on the projective line, the arc through ∞ comes last). Transformations never
//! renumber components.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{sign_arcs, validate_g, RationalFunction, DEFAULT_REFINE_BITS};

const MODULE: &str = "bundle";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    /// The projective line, with `g` given by explicit polynomials.
    ExplicitP1,
    /// A curve known only through its genus and number of real circles.
    Abstract,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCurve {
    pub kind: BaseKind,
    pub genus: u32,
    pub real_circle_count: u32,
}

impl BaseCurve {
    pub fn projective_line() -> Self {
        BaseCurve {
            kind: BaseKind::ExplicitP1,
            genus: 0,
            real_circle_count: 1,
        }
    }

    pub fn abstract_curve(genus: u32, real_circle_count: u32) -> Result<Self> {
        // Harnack: a real curve of genus g has at most g + 1 real circles.
        if real_circle_count > genus + 1 {
            return Err(Error::spec(
                MODULE,
                format!(
                    "a real curve of genus {genus} has at most {} real circles, got {real_circle_count}",
                    genus + 1
                ),
            ));
        }
        Ok(BaseCurve {
            kind: BaseKind::Abstract,
            genus,
            real_circle_count,
        })
    }

    pub fn is_c_rational(&self) -> bool {
        self.genus == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

/// Zero pattern of `g` over one real circle of an abstract base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleData {
    pub zeros: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<Sign>,
}

impl CircleData {
    pub fn zeros(count: u32) -> Self {
        CircleData {
            zeros: count,
            sign: None,
        }
    }

    pub fn signed(sign: Sign) -> Self {
        CircleData {
            zeros: 0,
            sign: Some(sign),
        }
    }

    fn check(&self, circle: usize) -> Result<()> {
        if self.zeros % 2 == 1 {
            return Err(Error::spec(
                MODULE,
                format!(
                    "circle {circle}: {} real zeros; g changes sign at each simple zero, so the count on a circle must be even",
                    self.zeros
                ),
            ));
        }
        match (self.zeros, self.sign) {
            (0, None) => Err(Error::spec(
                MODULE,
                format!("circle {circle}: a sign is required when g has no zero on the circle"),
            )),
            (z, Some(_)) if z > 0 => Err(Error::spec(
                MODULE,
                format!(
                    "circle {circle}: a sign is only meaningful when g has no zero on the circle"
                ),
            )),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GData {
    Explicit(RationalFunction),
    Abstract(Vec<CircleData>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformationKind {
    ElmReal,
    ElmConjPair,
    BlowupReal,
    BlowupConjPair,
}

impl TransformationKind {
    pub fn is_elm(self) -> bool {
        matches!(
            self,
            TransformationKind::ElmReal | TransformationKind::ElmConjPair
        )
    }

    pub fn is_real(self) -> bool {
        matches!(
            self,
            TransformationKind::ElmReal | TransformationKind::BlowupReal
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transformation {
    pub kind: TransformationKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
}

impl Transformation {
    pub fn elm_real(target: usize) -> Self {
        Transformation {
            kind: TransformationKind::ElmReal,
            target: Some(target),
        }
    }

    pub fn elm_conj_pair() -> Self {
        Transformation {
            kind: TransformationKind::ElmConjPair,
            target: None,
        }
    }

    pub fn blowup_real(target: usize) -> Self {
        Transformation {
            kind: TransformationKind::BlowupReal,
            target: Some(target),
        }
    }

    pub fn blowup_conj_pair() -> Self {
        Transformation {
            kind: TransformationKind::BlowupConjPair,
            target: None,
        }
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            TransformationKind::ElmReal => "elm_real",
            TransformationKind::ElmConjPair => "elm_conj_pair",
            TransformationKind::BlowupReal => "blowup_real",
            TransformationKind::BlowupConjPair => "blowup_conj_pair",
        };
        match self.target {
            Some(t) => write!(f, "{name}@{t}"),
            None => write!(f, "{name}"),
        }
    }
}

/// Declarative description of a surface: a minimal conic bundle plus a
/// sequence of modifications in normal form (all elms, then all blow-ups).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicBundleSpec {
    pub base: BaseCurve,
    pub g: GData,
    pub transformations: Vec<Transformation>,
}

impl ConicBundleSpec {
    /// Checks the shape constraints that do not need the surface to be built.
    pub fn check(&self) -> Result<()> {
        match (&self.g, self.base.kind) {
            (GData::Explicit(_), BaseKind::ExplicitP1) => {}
            (GData::Abstract(circles), BaseKind::Abstract) => {
                if circles.len() != self.base.real_circle_count as usize {
                    return Err(Error::spec(
                        MODULE,
                        format!(
                            "base has {} real circles but {} circle entries were given",
                            self.base.real_circle_count,
                            circles.len()
                        ),
                    ));
                }
                for (i, c) in circles.iter().enumerate() {
                    c.check(i)?;
                }
            }
            (GData::Explicit(_), BaseKind::Abstract) => {
                return Err(Error::spec(
                    MODULE,
                    "explicit g requires the projective-line base",
                ))
            }
            (GData::Abstract(_), BaseKind::ExplicitP1) => {
                return Err(Error::spec(
                    MODULE,
                    "the projective-line base requires an explicit g",
                ))
            }
        }
        if let Some(pos) = self
            .transformations
            .windows(2)
            .position(|w| !w[0].kind.is_elm() && w[1].kind.is_elm())
        {
            return Err(Error::spec(
                MODULE,
                format!(
                    "transformation {} ({}) follows a blow-up; all elementary transformations must precede all blow-ups",
                    pos + 1,
                    self.transformations[pos + 1]
                ),
            ));
        }
        for (i, t) in self.transformations.iter().enumerate() {
            match (t.kind.is_real(), t.target) {
                (true, None) => {
                    return Err(Error::spec(
                        MODULE,
                        format!("transformation {i} ({t}) needs a target component"),
                    ))
                }
                (false, Some(_)) => {
                    return Err(Error::spec(
                        MODULE,
                        format!(
                            "transformation {i} ({t}) acts on conjugate points and takes no target"
                        ),
                    ))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Diffeomorphism type of a closed connected surface as it arises here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "crosscaps", rename_all = "snake_case")]
pub enum Topology {
    Sphere,
    Torus,
    /// Klein bottle produced by elementary transformations.
    Klein,
    /// Connected sum of `q` projective planes produced by real blow-ups.
    CrossSurface(u32),
}

impl Topology {
    pub fn is_orientable(self) -> bool {
        matches!(self, Topology::Sphere | Topology::Torus)
    }

    /// Crosscap count of a nonorientable surface; 0 for orientable ones.
    pub fn crosscaps(self) -> u32 {
        match self {
            Topology::Sphere | Topology::Torus => 0,
            Topology::Klein => 2,
            Topology::CrossSurface(q) => q,
        }
    }

    pub fn euler_characteristic(self) -> i64 {
        match self {
            Topology::Sphere => 2,
            Topology::Torus => 0,
            nonorientable => 2 - nonorientable.crosscaps() as i64,
        }
    }

    pub fn is_klein_bottle(self) -> bool {
        matches!(self, Topology::Klein | Topology::CrossSurface(2))
    }

    /// Connected sum with a projective plane.
    pub fn with_crosscap(self) -> Topology {
        match self {
            Topology::Sphere => Topology::CrossSurface(1),
            // T² # ℝP² ≅ N₃
            Topology::Torus => Topology::CrossSurface(3),
            nonorientable => Topology::CrossSurface(nonorientable.crosscaps() + 1),
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Sphere => write!(f, "sphere"),
            Topology::Torus => write!(f, "torus"),
            Topology::Klein => write!(f, "Klein bottle"),
            Topology::CrossSurface(1) => write!(f, "real projective plane"),
            Topology::CrossSurface(2) => write!(f, "Klein bottle (blown up)"),
            Topology::CrossSurface(q) => write!(f, "nonorientable, {q} crosscaps"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealComponent {
    pub id: usize,
    /// Index of the base circle this component lies over.
    pub circle: usize,
    pub topology: Topology,
    /// The ruling maps this component onto its whole base circle.
    pub dominates_circle: bool,
    /// Number of real elementary-transformation centers placed on this component.
    pub real_elm_count: u32,
    pub has_real_exceptional: bool,
}

impl RealComponent {
    /// A Klein component of the relatively minimal model reached after the elm stage.
    /// Such components are exactly the dominating ones with an odd number of real centers.
    pub fn was_minimal_klein(&self) -> bool {
        self.dominates_circle && self.real_elm_count % 2 == 1
    }

    /// Spherical components of the minimal model are the non-dominating ones.
    pub fn was_minimal_sphere(&self) -> bool {
        !self.dominates_circle
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceState {
    pub base: BaseCurve,
    pub components: Vec<RealComponent>,
    /// No blow-up has been applied.
    pub minimal: bool,
    /// Every transformation applied so far, in order.
    pub history: Vec<Transformation>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub s: usize,
    pub t: usize,
    pub k: usize,
    pub k_prime: usize,
    pub orientable_ids: Vec<usize>,
    pub nonorientable_ids: Vec<usize>,
}

impl SurfaceState {
    pub fn c_rational(&self) -> bool {
        self.base.is_c_rational()
    }

    pub fn component(&self, id: usize) -> Option<&RealComponent> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    fn target_mut(&mut self, t: &Transformation) -> Result<&mut RealComponent> {
        let id = t
            .target
            .ok_or_else(|| Error::spec(MODULE, format!("{t} needs a target component")))?;
        let known = self.components.len();
        self.components.iter_mut().find(|c| c.id == id).ok_or_else(|| {
            Error::spec(
                MODULE,
                format!("{t}: no real component with id {id} (the real locus has {known} components)"),
            )
        })
    }
}

fn spheres_and_tori(
    base: &BaseCurve,
    per_circle: impl IntoIterator<Item = (usize, Option<bool>)>,
) -> SurfaceState {
    let mut components = Vec::new();
    for (circle, (spheres, torus)) in per_circle.into_iter().enumerate() {
        for _ in 0..spheres {
            components.push(RealComponent {
                id: components.len(),
                circle,
                topology: Topology::Sphere,
                dominates_circle: false,
                real_elm_count: 0,
                has_real_exceptional: false,
            });
        }
        if torus == Some(true) {
            components.push(RealComponent {
                id: components.len(),
                circle,
                topology: Topology::Torus,
                dominates_circle: true,
                real_elm_count: 0,
                has_real_exceptional: false,
            });
        }
    }
    SurfaceState {
        base: base.clone(),
        components,
        minimal: true,
        history: Vec::new(),
    }
}

/// Real locus of the minimal model: `m` spheres over a circle carrying `2m > 0`
/// zeros, one torus over a zero-free circle where `g > 0`, nothing where `g < 0`.
pub fn build_minimal_surface(spec: &ConicBundleSpec) -> Result<SurfaceState> {
    build_minimal_surface_with(spec, DEFAULT_REFINE_BITS)
}

pub fn build_minimal_surface_with(
    spec: &ConicBundleSpec,
    refine_bits: u32,
) -> Result<SurfaceState> {
    let check = ConicBundleSpec {
        transformations: Vec::new(),
        ..spec.clone()
    };
    check.check()?;
    match &spec.g {
        GData::Abstract(circles) => Ok(spheres_and_tori(
            &spec.base,
            circles.iter().map(|c| {
                if c.zeros == 0 {
                    (0, Some(c.sign == Some(Sign::Positive)))
                } else {
                    (c.zeros as usize / 2, None)
                }
            }),
        )),
        GData::Explicit(g) => {
            let v = validate_g(g, refine_bits)?;
            if let Some(why) = v.failure() {
                return Err(Error::spec(
                    MODULE,
                    format!("g = {g} is not admissible: {why}"),
                ));
            }
            if v.zero_count() % 2 == 1 {
                return Err(Error::spec(
                    MODULE,
                    format!("g = {g} has an odd number of real zeros on the circle"),
                ));
            }
            let arcs = sign_arcs(g, &v)?;
            let entry = match arcs.constant_sign {
                Some(s) => (0, Some(s > 0)),
                None => (arcs.positive_arcs(), None),
            };
            Ok(spheres_and_tori(&spec.base, [entry]))
        }
    }
}

/// Applies one elementary transformation to a minimal state.
pub fn apply_elm(state: &SurfaceState, t: &Transformation) -> Result<SurfaceState> {
    if !t.kind.is_elm() {
        return Err(Error::spec(
            MODULE,
            format!("{t} is not an elementary transformation"),
        ));
    }
    if !state.minimal {
        return Err(Error::spec(
            MODULE,
            format!("{t} applied after a blow-up; elementary transformations must come first"),
        ));
    }
    let mut next = state.clone();
    if t.kind == TransformationKind::ElmReal {
        let target = next.target_mut(t)?;
        target.topology = match target.topology {
            Topology::Sphere => Topology::Sphere,
            Topology::Torus => Topology::Klein,
            Topology::Klein if target.dominates_circle => Topology::Torus,
            other => {
                return Err(Error::spec(
                    MODULE,
                    format!(
                        "{t}: component {} is a {other}, not a minimal-model component",
                        target.id
                    ),
                ))
            }
        };
        target.real_elm_count += 1;
    }
    next.history.push(t.clone());
    Ok(next)
}

/// Applies one blow-up: a real center adds a crosscap to its component.
pub fn apply_blowup(state: &SurfaceState, t: &Transformation) -> Result<SurfaceState> {
    if t.kind.is_elm() {
        return Err(Error::spec(MODULE, format!("{t} is not a blow-up")));
    }
    let mut next = state.clone();
    if t.kind == TransformationKind::BlowupReal {
        let target = next.target_mut(t)?;
        target.topology = target.topology.with_crosscap();
        target.has_real_exceptional = true;
    }
    next.minimal = false;
    next.history.push(t.clone());
    Ok(next)
}

pub fn apply(state: &SurfaceState, t: &Transformation) -> Result<SurfaceState> {
    if t.kind.is_elm() {
        apply_elm(state, t)
    } else {
        apply_blowup(state, t)
    }
}

/// Builds the minimal surface and runs the whole transformation list.
pub fn build_surface(spec: &ConicBundleSpec, refine_bits: u32) -> Result<SurfaceState> {
    spec.check()?;
    spec.transformations
        .iter()
        .try_fold(build_minimal_surface_with(spec, refine_bits)?, |s, t| {
            apply(&s, t)
        })
}

pub fn component_census(state: &SurfaceState) -> Census {
    let mut c = Census::default();
    for m in &state.components {
        match m.topology {
            Topology::Sphere => c.s += 1,
            Topology::Torus => c.t += 1,
            top if top.is_klein_bottle() => {
                c.k += 1;
                if m.dominates_circle {
                    c.k_prime += 1;
                }
            }
            _ => {}
        }
        if m.topology.is_orientable() {
            c.orientable_ids.push(m.id);
        } else {
            c.nonorientable_ids.push(m.id);
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::Polynomial;

    fn abstract_spec(genus: u32, circles: Vec<CircleData>) -> ConicBundleSpec {
        ConicBundleSpec {
            base: BaseCurve::abstract_curve(genus, circles.len() as u32).unwrap(),
            g: GData::Abstract(circles),
            transformations: Vec::new(),
        }
    }

    fn topologies(s: &SurfaceState) -> Vec<Topology> {
        s.components.iter().map(|c| c.topology).collect()
    }

    fn worked_g() -> RationalFunction {
        RationalFunction::new(
            &Polynomial::from_ints(&[-1, 0, 1]) * &Polynomial::from_ints(&[-4, 0, 1]),
            Polynomial::from_ints(&[1, 0, 0, 0, 1]),
        )
        .unwrap()
    }

    #[test]
    fn positive_circle_gives_torus() {
        let s = build_minimal_surface(&abstract_spec(1, vec![CircleData::signed(Sign::Positive)]))
            .unwrap();
        assert_eq!(topologies(&s), vec![Topology::Torus]);
        assert!(s.components[0].dominates_circle);
    }

    #[test]
    fn four_zeros_give_two_spheres() {
        let s = build_minimal_surface(&abstract_spec(1, vec![CircleData::zeros(4)])).unwrap();
        assert_eq!(topologies(&s), vec![Topology::Sphere, Topology::Sphere]);
    }

    #[test]
    fn explicit_worked_example() {
        let spec = ConicBundleSpec {
            base: BaseCurve::projective_line(),
            g: GData::Explicit(worked_g()),
            transformations: vec![],
        };
        let s = build_minimal_surface(&spec).unwrap();
        assert_eq!(topologies(&s), vec![Topology::Sphere, Topology::Sphere]);
    }

    #[test]
    fn negative_circle_is_empty() {
        let s = build_minimal_surface(&abstract_spec(
            2,
            vec![CircleData::signed(Sign::Negative), CircleData::zeros(2)],
        ))
        .unwrap();
        assert_eq!(topologies(&s), vec![Topology::Sphere]);
        assert_eq!(s.components[0].circle, 1);
    }

    #[test]
    fn odd_zero_count_rejected() {
        let err = build_minimal_surface(&abstract_spec(1, vec![CircleData::zeros(3)])).unwrap_err();
        assert!(err.to_string().contains("even"), "{err}");
    }

    #[test]
    fn harnack_bound_enforced() {
        assert!(BaseCurve::abstract_curve(1, 3).is_err());
        assert!(BaseCurve::abstract_curve(1, 2).is_ok());
    }

    #[test]
    fn explicit_g_must_be_admissible() {
        let spec = ConicBundleSpec {
            base: BaseCurve::projective_line(),
            g: GData::Explicit(
                RationalFunction::new(Polynomial::from_ints(&[1]), Polynomial::from_ints(&[0, 1]))
                    .unwrap(),
            ),
            transformations: vec![],
        };
        let err = build_minimal_surface(&spec).unwrap_err();
        assert!(err.to_string().contains("pole"), "{err}");
    }

    fn torus_state() -> SurfaceState {
        build_minimal_surface(&abstract_spec(1, vec![CircleData::signed(Sign::Positive)])).unwrap()
    }

    #[test]
    fn elm_flips_torus_and_klein() {
        let once = apply_elm(&torus_state(), &Transformation::elm_real(0)).unwrap();
        assert_eq!(once.components[0].topology, Topology::Klein);
        assert!(once.components[0].dominates_circle);
        let twice = apply_elm(&once, &Transformation::elm_real(0)).unwrap();
        assert_eq!(twice.components[0].topology, Topology::Torus);
        assert_eq!(twice.components[0].real_elm_count, 2);
    }

    #[test]
    fn elm_keeps_sphere() {
        let s = build_minimal_surface(&abstract_spec(1, vec![CircleData::zeros(2)])).unwrap();
        let after = apply_elm(&s, &Transformation::elm_real(0)).unwrap();
        assert_eq!(after.components[0].topology, Topology::Sphere);
    }

    #[test]
    fn conj_pair_elm_changes_nothing_real() {
        let s = torus_state();
        let after = apply_elm(&s, &Transformation::elm_conj_pair()).unwrap();
        assert_eq!(after.components, s.components);
        assert_eq!(after.history.len(), 1);
    }

    #[test]
    fn elm_missing_target() {
        assert!(apply_elm(&torus_state(), &Transformation::elm_real(5)).is_err());
    }

    #[test]
    fn blowups_add_crosscaps() {
        let s = build_minimal_surface(&abstract_spec(1, vec![CircleData::zeros(2)])).unwrap();
        let once = apply_blowup(&s, &Transformation::blowup_real(0)).unwrap();
        assert_eq!(once.components[0].topology, Topology::CrossSurface(1));
        assert!(once.components[0].has_real_exceptional);
        assert!(!once.minimal);
        let twice = apply_blowup(&once, &Transformation::blowup_real(0)).unwrap();
        assert_eq!(twice.components[0].topology, Topology::CrossSurface(2));
        assert!(!twice.components[0].dominates_circle);

        let t = apply_blowup(&torus_state(), &Transformation::blowup_real(0)).unwrap();
        assert_eq!(t.components[0].topology, Topology::CrossSurface(3));
        assert!(t.components[0].dominates_circle);

        let conj = apply_blowup(&torus_state(), &Transformation::blowup_conj_pair()).unwrap();
        assert_eq!(conj.components, torus_state().components);
    }

    #[test]
    fn elm_after_blowup_rejected() {
        let b = apply_blowup(&torus_state(), &Transformation::blowup_conj_pair()).unwrap();
        assert!(apply_elm(&b, &Transformation::elm_real(0)).is_err());
        let spec = ConicBundleSpec {
            transformations: vec![
                Transformation::blowup_conj_pair(),
                Transformation::elm_real(0),
            ],
            ..abstract_spec(1, vec![CircleData::signed(Sign::Positive)])
        };
        let err = spec.check().unwrap_err();
        assert!(err.to_string().contains("precede"), "{err}");
    }

    #[test]
    fn census_examples() {
        let base = build_minimal_surface(&abstract_spec(
            1,
            vec![CircleData::zeros(4), CircleData::signed(Sign::Positive)],
        ))
        .unwrap();
        let c = component_census(&base);
        assert_eq!((c.s, c.t, c.k, c.k_prime), (2, 1, 0, 0));

        let elm = apply_elm(&base, &Transformation::elm_real(2)).unwrap();
        let c = component_census(&elm);
        assert_eq!((c.s, c.t, c.k, c.k_prime), (2, 0, 1, 1));
        assert_eq!(c.nonorientable_ids, vec![2]);

        let s = build_minimal_surface(&abstract_spec(1, vec![CircleData::zeros(2)])).unwrap();
        let s = apply_blowup(&s, &Transformation::blowup_real(0)).unwrap();
        let s = apply_blowup(&s, &Transformation::blowup_real(0)).unwrap();
        let c = component_census(&s);
        assert_eq!((c.s, c.t, c.k, c.k_prime), (0, 0, 1, 0));
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(Topology::Sphere.euler_characteristic(), 2);
        assert_eq!(Topology::Klein.euler_characteristic(), 0);
        assert_eq!(Topology::CrossSurface(1).euler_characteristic(), 1);
        assert_eq!(Topology::CrossSurface(3).euler_characteristic(), -1);
    }
}
