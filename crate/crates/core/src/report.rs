//! End-to-end analysis of a document and the reports built from it.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bundle::{
    build_minimal_surface_with, build_surface, component_census, BaseCurve, Census, GData,
    SurfaceState, Topology,
};
use crate::cohom::{
    algebraic_generators, gamma, lattice_of, restriction_table, CohomologyLattice, GammaReport,
    NsRow,
};
use crate::decide::{
    canonical_class_vanishes, decide_approx_rational_target, decide_approx_sphere, Obstruction,
    RationalTargetDecision, TargetTopology,
};
use crate::document::{SchemaErrors, SpecDocument};
use crate::error::Error;
use crate::exactpoly::{
    isolate_real_roots, squarefree_part, validate_g, GValidation, IsolatingInterval,
    DEFAULT_REFINE_BITS,
};
use crate::oracle::{refine_component_count, refine_root_count, ComponentCount};

/// Process exit codes shared by every front end.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INVALID_SPEC: i32 = 2;
    pub const CROSS_CHECK_MISMATCH: i32 = 3;
    pub const ORACLE_DISAGREEMENT: i32 = 4;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Isolating intervals are refined to width at most `2^-refine_bits`.
    pub refine_bits: u32,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            refine_bits: DEFAULT_REFINE_BITS,
        }
    }
}

#[derive(Debug)]
pub enum AnalysisError {
    Schema(SchemaErrors),
    Pipeline(Error),
}

impl AnalysisError {
    pub fn exit_code(&self) -> i32 {
        exit::INVALID_SPEC
    }
}

impl std::fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnalysisError::Schema(e) => write!(f, "{e}"),
            AnalysisError::Pipeline(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for AnalysisError {}

impl From<SchemaErrors> for AnalysisError {
    fn from(e: SchemaErrors) -> Self {
        AnalysisError::Schema(e)
    }
}

impl From<Error> for AnalysisError {
    fn from(e: Error) -> Self {
        AnalysisError::Pipeline(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRow {
    pub id: usize,
    pub circle: usize,
    pub topology: Topology,
    pub description: String,
    pub orientable: bool,
    pub euler_characteristic: i64,
    pub dominates_circle: bool,
    pub real_elm_count: u32,
    pub has_real_exceptional: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaSection {
    pub display: String,
    pub predicted_display: String,
    #[serde(flatten)]
    pub detail: GammaReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapReport {
    pub name: String,
    pub degrees: Vec<i64>,
    pub approximable: bool,
    pub reasons: Vec<Obstruction>,
    pub explanation: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetReport {
    pub name: String,
    pub target: TargetTopology,
    /// Absent when the real locus is not connected.
    pub decision: Option<RationalTargetDecision>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub base: BaseCurve,
    pub c_rational: bool,
    pub minimal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_validation: Option<GValidation>,
    pub census: Census,
    pub components: Vec<ComponentRow>,
    pub lattice: CohomologyLattice,
    pub restriction_table: Vec<NsRow>,
    pub algebraic_generators: Vec<String>,
    pub gamma: GammaSection,
    pub canonical_class_vanishes: bool,
    pub maps: Vec<MapReport>,
    pub rational_targets: Vec<TargetReport>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.gamma.detail.matches {
            exit::OK
        } else {
            exit::CROSS_CHECK_MISMATCH
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn component_rows(state: &SurfaceState) -> Vec<ComponentRow> {
    state
        .components
        .iter()
        .map(|c| ComponentRow {
            id: c.id,
            circle: c.circle,
            topology: c.topology,
            description: c.topology.to_string(),
            orientable: c.topology.is_orientable(),
            euler_characteristic: c.topology.euler_characteristic(),
            dominates_circle: c.dominates_circle,
            real_elm_count: c.real_elm_count,
            has_real_exceptional: c.has_real_exceptional,
        })
        .collect()
}

fn warnings(state: &SurfaceState, canonical_vanishes: bool) -> Vec<String> {
    let mut w = Vec::new();
    if state.c_rational() {
        w.push(
            "base has genus 0, so the surface is geometrically rational: the torus/Klein criterion for maps to the sphere is not claimed here, and for blown-up surfaces further algebraic classes may exist (for example on maximal degree-2 Del Pezzo surfaces); use the rational-surface catalogue to confirm the group"
                .to_string(),
        );
    }
    if state.is_empty() {
        w.push("empty real locus: every group is trivial".to_string());
    }
    if state
        .components
        .iter()
        .any(|c| c.dominates_circle && c.real_elm_count >= 2)
    {
        w.push(
            "a real elementary transformation was applied to a Klein component; the model assumes it turns back into a torus (parity of real centers)"
                .to_string(),
        );
    }
    if !canonical_vanishes {
        w.push(
            "a nonorientable component has odd Euler characteristic, so the canonical class restricts nontrivially to the real locus"
                .to_string(),
        );
    }
    w
}

fn explain(o: &Obstruction) -> String {
    o.to_string()
}

/// Builds the surface described by a document and computes everything about it.
pub fn analyze(doc: &SpecDocument, opts: Options) -> Result<Report, AnalysisError> {
    let problems = doc.problems();
    if !problems.is_empty() {
        return Err(SchemaErrors(problems).into());
    }
    let spec = doc.to_bundle_spec()?;
    let g_validation = match &spec.g {
        GData::Explicit(g) => Some(validate_g(g, opts.refine_bits)?),
        GData::Abstract(_) => None,
    };
    let state = build_surface(&spec, opts.refine_bits)?;
    let lattice = lattice_of(&state);
    let gamma_report = gamma(&state)?;
    let canonical = canonical_class_vanishes(&state);

    let mut maps = Vec::new();
    for m in &doc.maps {
        let f = crate::decide::MapDescriptor::new(m.degrees.clone());
        let d = decide_approx_sphere(&state, &f)?;
        maps.push(MapReport {
            name: m.name.clone(),
            degrees: m.degrees.clone(),
            approximable: d.approximable,
            explanation: d.reasons.iter().map(explain).collect(),
            reasons: d.reasons,
        });
    }

    let rational_targets = doc
        .rational_targets
        .iter()
        .map(|t| match state.components.as_slice() {
            [only] => TargetReport {
                name: t.name.clone(),
                target: t.target,
                decision: Some(decide_approx_rational_target(only.topology, t.target)),
                note: None,
            },
            comps => TargetReport {
                name: t.name.clone(),
                target: t.target,
                decision: None,
                note: Some(format!(
                    "the density decision needs a connected real locus; this one has {} components",
                    comps.len()
                )),
            },
        })
        .collect();

    Ok(Report {
        schema_version: doc.schema_version.clone(),
        base: state.base.clone(),
        c_rational: state.c_rational(),
        minimal: state.minimal,
        g_validation,
        census: component_census(&state),
        components: component_rows(&state),
        restriction_table: restriction_table(&state).rows,
        algebraic_generators: algebraic_generators(&state)
            .iter()
            .map(ToString::to_string)
            .collect(),
        lattice,
        gamma: GammaSection {
            display: gamma_report.group.to_string(),
            predicted_display: gamma_report.predicted.to_string(),
            detail: gamma_report,
        },
        canonical_class_vanishes: canonical,
        maps,
        rational_targets,
        warnings: warnings(&state, canonical),
    })
}

/// Human-readable rendering of a full report.
pub fn render_human(r: &Report) -> String {
    let mut out = String::new();
    let base = match r.base.kind {
        crate::bundle::BaseKind::ExplicitP1 => "projective line".to_string(),
        crate::bundle::BaseKind::Abstract => format!(
            "genus {} curve with {} real circle(s)",
            r.base.genus, r.base.real_circle_count
        ),
    };
    let _ = writeln!(
        out,
        "base: {base}{}",
        if r.minimal { "" } else { " (blown up)" }
    );
    if let Some(v) = &r.g_validation {
        let zeros: Vec<String> = v
            .real_zero_intervals
            .iter()
            .map(ToString::to_string)
            .collect();
        let _ = writeln!(
            out,
            "g: {} real zero(s) [{}], order at infinity {}",
            v.zero_count(),
            zeros.join(", "),
            v.order_at_infinity
        );
    }
    let c = &r.census;
    let _ = writeln!(
        out,
        "census: s={} t={} k={} k'={}",
        c.s, c.t, c.k, c.k_prime
    );
    let _ = writeln!(out, "components:");
    if r.components.is_empty() {
        let _ = writeln!(out, "  (none)");
    }
    for m in &r.components {
        let mut flags = Vec::new();
        if m.dominates_circle {
            flags.push("dominating".to_string());
        }
        if m.real_elm_count > 0 {
            flags.push(format!("{} real elm center(s)", m.real_elm_count));
        }
        if m.has_real_exceptional {
            flags.push("real exceptional curve".to_string());
        }
        let _ = writeln!(
            out,
            "  #{} over circle {}: {} (chi={}){}",
            m.id,
            m.circle,
            m.description,
            m.euler_characteristic,
            if flags.is_empty() {
                String::new()
            } else {
                format!(" [{}]", flags.join(", "))
            }
        );
    }
    let _ = writeln!(
        out,
        "H^2 lattice: Z^{} + (Z/2)^{}",
        r.lattice.free_slots.len(),
        r.lattice.torsion_slots.len()
    );
    let _ = writeln!(
        out,
        "algebraic generators: {}",
        if r.algebraic_generators.is_empty() {
            "(none)".to_string()
        } else {
            r.algebraic_generators.join(", ")
        }
    );
    let _ = writeln!(
        out,
        "Gamma = {} (closed form {}: {}){}",
        r.gamma.display,
        r.gamma.predicted_display,
        if r.gamma.detail.matches {
            "match"
        } else {
            "MISMATCH"
        },
        if r.c_rational {
            " [geometrically rational base]"
        } else {
            ""
        }
    );
    let _ = writeln!(
        out,
        "canonical class restricts to zero: {}",
        if r.canonical_class_vanishes {
            "yes"
        } else {
            "no"
        }
    );
    for m in &r.maps {
        let _ = writeln!(
            out,
            "map {}: {}",
            m.name,
            if m.approximable {
                "approximable"
            } else {
                "not approximable"
            }
        );
        for e in &m.explanation {
            let _ = writeln!(out, "  - {e}");
        }
    }
    for t in &r.rational_targets {
        match (&t.decision, &t.note) {
            (Some(d), _) => {
                let _ = writeln!(out, "target {}: {d}", t.name);
            }
            (None, Some(n)) => {
                let _ = writeln!(out, "target {}: {n}", t.name);
            }
            _ => {}
        }
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

/// Result of the `validate` command: the document is well formed and the surface builds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub errors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_validation: Option<GValidation>,
    pub components: usize,
}

pub fn validate_document(doc: &SpecDocument, opts: Options) -> ValidationReport {
    let problems = doc.problems();
    if !problems.is_empty() {
        return ValidationReport {
            valid: false,
            errors: problems.iter().map(ToString::to_string).collect(),
            g_validation: None,
            components: 0,
        };
    }
    let spec = match doc.to_bundle_spec() {
        Ok(s) => s,
        Err(e) => {
            return ValidationReport {
                valid: false,
                errors: e.0.iter().map(ToString::to_string).collect(),
                g_validation: None,
                components: 0,
            }
        }
    };
    let g_validation = match &spec.g {
        GData::Explicit(g) => validate_g(g, opts.refine_bits).ok(),
        GData::Abstract(_) => None,
    };
    match build_surface(&spec, opts.refine_bits) {
        Ok(state) => {
            let mut errors = Vec::new();
            for m in &doc.maps {
                if m.degrees.len() != state.components.len() {
                    errors.push(format!(
                        "maps.{}: {} degrees for {} components",
                        m.name,
                        m.degrees.len(),
                        state.components.len()
                    ));
                }
            }
            ValidationReport {
                valid: errors.is_empty(),
                errors,
                g_validation,
                components: state.components.len(),
            }
        }
        Err(e) => ValidationReport {
            valid: false,
            errors: vec![e.to_string()],
            g_validation,
            components: 0,
        },
    }
}

/// Floating-point confirmation of the exact topology for an explicit `g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub exact: ComponentCount,
    pub numeric: ComponentCount,
    pub grid: usize,
    pub exact_numerator_roots: usize,
    pub numeric_numerator_roots: usize,
    pub agree: bool,
}

impl OracleReport {
    pub fn exit_code(&self) -> i32 {
        if self.agree {
            exit::OK
        } else {
            exit::ORACLE_DISAGREEMENT
        }
    }
}

pub fn oracle_check(doc: &SpecDocument, opts: Options) -> Result<OracleReport, AnalysisError> {
    let problems = doc.problems();
    if !problems.is_empty() {
        return Err(SchemaErrors(problems).into());
    }
    let spec = doc.to_bundle_spec()?;
    let GData::Explicit(g) = &spec.g else {
        return Err(AnalysisError::Pipeline(Error::InvalidInput {
            module: "oracle",
            message: "oracle-check needs an explicit g".to_string(),
        }));
    };
    let state = build_minimal_surface_with(&spec, opts.refine_bits)?;
    let census = component_census(&state);
    let exact = ComponentCount {
        spheres: census.s,
        tori: census.t,
    };
    let (numeric, grid) = refine_component_count(g, exact)?;

    let sf = squarefree_part(g.numerator())?;
    let exact_roots = isolate_real_roots(&sf, opts.refine_bits)?
        .iter()
        .filter(|iv| matches!(iv, IsolatingInterval::Finite { .. }))
        .count();
    let numeric_roots = refine_root_count(&sf, exact_roots).count;
    Ok(OracleReport {
        agree: numeric == exact && numeric_roots == exact_roots,
        exact,
        numeric,
        grid,
        exact_numerator_roots: exact_roots,
        numeric_numerator_roots: numeric_roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::parse_spec;

    fn doc(extra: &str) -> SpecDocument {
        parse_spec(&format!(
            r#"{{
                "schema_version": "1",
                "base": {{"kind": "abstract", "genus": 1, "real_circle_count": 2}},
                "g": {{"abstract": [{{"zeros": 4}}, {{"zeros": 0, "sign": "+"}}]}}
                {extra}
            }}"#
        ))
        .unwrap()
    }

    #[test]
    fn spheres_and_torus() {
        let r = analyze(&doc(""), Options::default()).unwrap();
        assert_eq!((r.census.s, r.census.t, r.census.k), (2, 1, 0));
        assert_eq!(r.gamma.display, "Z");
        assert_eq!(r.exit_code(), exit::OK);
    }

    #[test]
    fn elm_on_torus() {
        let r = analyze(
            &doc(r#", "transformations": [{"kind": "elm_real", "target": 2}]"#),
            Options::default(),
        )
        .unwrap();
        assert!(r.gamma.detail.group.is_trivial());
        assert_eq!(r.census.k_prime, 1);
    }

    #[test]
    fn torus_map_rejected() {
        let r = analyze(
            &doc(r#", "maps": [{"name": "f", "degrees": [0, 0, 1]}]"#),
            Options::default(),
        )
        .unwrap();
        assert!(!r.maps[0].approximable);
        assert!(r.maps[0].explanation[0].contains("torus component 2"));
    }

    #[test]
    fn wrong_degree_count_is_invalid() {
        let e = analyze(
            &doc(r#", "maps": [{"name": "f", "degrees": [0, 1]}]"#),
            Options::default(),
        )
        .unwrap_err();
        assert_eq!(e.exit_code(), exit::INVALID_SPEC);
        assert!(e.to_string().starts_with("[decide]"));
    }

    #[test]
    fn missing_target_is_invalid() {
        let e = analyze(
            &doc(r#", "transformations": [{"kind": "elm_real", "target": 9}]"#),
            Options::default(),
        )
        .unwrap_err();
        assert!(e.to_string().contains("[bundle]"));
    }

    #[test]
    fn reports_are_deterministic() {
        let d = doc(
            r#", "transformations": [{"kind": "elm_real", "target": 2}, {"kind": "blowup_real", "target": 0}]"#,
        );
        let a = analyze(&d, Options::default()).unwrap().to_json();
        let b = analyze(&d, Options::default()).unwrap().to_json();
        assert_eq!(a, b);
        let human = render_human(&analyze(&d, Options::default()).unwrap());
        assert!(human.contains("Gamma = 0"));
    }

    #[test]
    fn oracle_check_on_explicit_g() {
        let d = parse_spec(
            r#"{
                "schema_version": "1",
                "base": {"kind": "explicit_p1"},
                "g": {"explicit": {"numerator": ["4", "0", "-5", "0", "1"], "denominator": ["1", "0", "0", "0", "1"]}}
            }"#,
        )
        .unwrap();
        let r = oracle_check(&d, Options::default()).unwrap();
        assert!(r.agree);
        assert_eq!(r.exact.spheres, 2);
        assert_eq!(r.exact_numerator_roots, 4);
    }

    #[test]
    fn genus_zero_carries_caveat() {
        let d = parse_spec(
            r#"{
                "schema_version": "1",
                "base": {"kind": "explicit_p1"},
                "g": {"explicit": {"numerator": ["1"]}},
                "rational_targets": [{"name": "s2", "target": {"type": "sphere"}}]
            }"#,
        )
        .unwrap();
        let r = analyze(&d, Options::default()).unwrap();
        assert!(r.c_rational);
        assert!(r.warnings[0].contains("geometrically rational"));
        assert_eq!(r.gamma.display, "Z");
        assert_eq!(
            r.rational_targets[0].decision,
            Some(RationalTargetDecision::ClosureNullHomotopic)
        );
    }

    #[test]
    fn mismatch_and_disagreement_exit_codes() {
        let mut r = analyze(&doc(""), Options::default()).unwrap();
        r.gamma.detail.matches = false;
        assert_eq!(r.exit_code(), exit::CROSS_CHECK_MISMATCH);

        let mut o = OracleReport {
            exact: ComponentCount {
                spheres: 2,
                tori: 0,
            },
            numeric: ComponentCount {
                spheres: 2,
                tori: 0,
            },
            grid: 4096,
            exact_numerator_roots: 4,
            numeric_numerator_roots: 4,
            agree: true,
        };
        assert_eq!(o.exit_code(), exit::OK);
        o.agree = false;
        assert_eq!(o.exit_code(), exit::ORACLE_DISAGREEMENT);
    }
}
