//! JSON input documents.
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "base": { "kind": "abstract", "genus": 1, "real_circle_count": 2 },
//!   "g": { "abstract": [ { "zeros": 4 }, { "zeros": 0, "sign": "+" } ] },
//!   "transformations": [ { "kind": "elm_real", "target": 2 } ],
//!   "maps": [ { "name": "f", "degrees": [0, 0, 1] } ]
//! }
//! ```
//!
//! Explicit `g` on the projective line is given as ascending coefficient lists
//! of exact integer or `p/q` strings:
//! `"g": { "explicit": { "numerator": ["4", "0", "-5", "0", "1"], "denominator": ["1", "0", "0", "0", "1"] } }`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bundle::{
    BaseCurve, CircleData, ConicBundleSpec, GData, Transformation, TransformationKind,
};
use crate::decide::{MapDescriptor, TargetTopology};
use crate::exactpoly::{parse_rational, Polynomial, RationalFunction};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseDoc {
    ExplicitP1,
    Abstract { genus: u32, real_circle_count: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitG {
    pub numerator: Vec<String>,
    #[serde(default = "unit_denominator")]
    pub denominator: Vec<String>,
}

fn unit_denominator() -> Vec<String> {
    vec!["1".to_string()]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GDoc {
    Explicit(ExplicitG),
    Abstract(Vec<CircleData>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedMap {
    pub name: String,
    pub degrees: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedTarget {
    pub name: String,
    pub target: TargetTopology,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub schema_version: String,
    pub base: BaseDoc,
    pub g: GDoc,
    #[serde(default)]
    pub transformations: Vec<Transformation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<NamedMap>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rational_targets: Vec<NamedTarget>,
}

/// One problem found in a document, with a location: a JSON path for semantic
/// errors, or a line and column for syntax errors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaErrors(pub Vec<SchemaError>);

impl fmt::Display for SchemaErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for SchemaErrors {}

fn err(location: impl Into<String>, message: impl Into<String>) -> SchemaError {
    SchemaError {
        location: location.into(),
        message: message.into(),
    }
}

/// Parses and validates a document. All schema problems are reported together.
pub fn parse_spec(text: &str) -> Result<SpecDocument, SchemaErrors> {
    // Check the version first so that documents for another schema get a clear message.
    if let Ok(value) = serde_json::from_str::<serde_json::Value>(text) {
        match value.get("schema_version") {
            Some(serde_json::Value::String(v)) if v == SCHEMA_VERSION => {}
            Some(v) => {
                return Err(SchemaErrors(vec![err(
                    "schema_version",
                    format!("unknown schema version {v}; expected \"{SCHEMA_VERSION}\""),
                )]))
            }
            None => {
                return Err(SchemaErrors(vec![err(
                    "schema_version",
                    "missing schema_version",
                )]))
            }
        }
    }
    let doc: SpecDocument = serde_json::from_str(text).map_err(|e| {
        SchemaErrors(vec![err(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )])
    })?;
    let errors = doc.problems();
    if errors.is_empty() {
        Ok(doc)
    } else {
        Err(SchemaErrors(errors))
    }
}

fn parse_coeffs(list: &[String], path: &str, errors: &mut Vec<SchemaError>) -> Option<Polynomial> {
    let mut out = Vec::with_capacity(list.len());
    for (i, c) in list.iter().enumerate() {
        match parse_rational(c) {
            Ok(v) => out.push(v),
            Err(_) => errors.push(err(
                format!("{path}[{i}]"),
                format!("{c:?} is not an exact integer or p/q rational"),
            )),
        }
    }
    (out.len() == list.len()).then(|| Polynomial::new(out))
}

impl SpecDocument {
    /// Every schema violation, empty for a valid document.
    pub fn problems(&self) -> Vec<SchemaError> {
        let mut errors = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            errors.push(err(
                "schema_version",
                format!("unknown schema version {:?}", self.schema_version),
            ));
        }
        match (&self.base, &self.g) {
            (
                BaseDoc::Abstract {
                    genus,
                    real_circle_count,
                },
                GDoc::Abstract(circles),
            ) => {
                if *real_circle_count > genus + 1 {
                    errors.push(err(
                        "base.real_circle_count",
                        format!(
                            "a real curve of genus {genus} has at most {} real circles",
                            genus + 1
                        ),
                    ));
                }
                if circles.len() != *real_circle_count as usize {
                    errors.push(err(
                        "g.abstract",
                        format!(
                            "{} circle entries for a base with {real_circle_count} real circles",
                            circles.len()
                        ),
                    ));
                }
                for (i, c) in circles.iter().enumerate() {
                    if c.zeros % 2 == 1 {
                        errors.push(err(
                            format!("g.abstract[{i}].zeros"),
                            format!(
                                "{} zeros: g changes sign at each simple real zero, so the number of zeros on a circle must be even",
                                c.zeros
                            ),
                        ));
                    }
                    match (c.zeros, c.sign) {
                        (0, None) => errors.push(err(
                            format!("g.abstract[{i}].sign"),
                            "sign (\"+\" or \"-\") is required when the circle carries no zeros",
                        )),
                        (z, Some(_)) if z > 0 => errors.push(err(
                            format!("g.abstract[{i}].sign"),
                            "sign is only allowed when the circle carries no zeros",
                        )),
                        _ => {}
                    }
                }
            }
            (BaseDoc::ExplicitP1, GDoc::Explicit(e)) => {
                let num = parse_coeffs(&e.numerator, "g.explicit.numerator", &mut errors);
                let den = parse_coeffs(&e.denominator, "g.explicit.denominator", &mut errors);
                if num.as_ref().is_some_and(Polynomial::is_zero) {
                    errors.push(err(
                        "g.explicit.numerator",
                        "g must not be identically zero",
                    ));
                }
                if den.as_ref().is_some_and(Polynomial::is_zero) {
                    errors.push(err("g.explicit.denominator", "denominator must be nonzero"));
                }
            }
            (BaseDoc::ExplicitP1, GDoc::Abstract(_)) => {
                errors.push(err("g", "the explicit_p1 base needs an explicit g"))
            }
            (BaseDoc::Abstract { .. }, GDoc::Explicit(_)) => errors.push(err(
                "g",
                "explicit g is only supported over the explicit_p1 base",
            )),
        }

        let mut seen_blowup = false;
        for (i, t) in self.transformations.iter().enumerate() {
            let loc = format!("transformations[{i}]");
            if t.kind.is_elm() && seen_blowup {
                errors.push(err(
                    &loc,
                    format!(
                        "{t} follows a blow-up; pipeline order is all elementary transformations, then all blow-ups"
                    ),
                ));
            }
            seen_blowup |= !t.kind.is_elm();
            match (t.kind, t.target) {
                (TransformationKind::ElmReal | TransformationKind::BlowupReal, None) => errors
                    .push(err(
                        format!("{loc}.target"),
                        "a real center needs a target component",
                    )),
                (TransformationKind::ElmConjPair | TransformationKind::BlowupConjPair, Some(_)) => {
                    errors.push(err(
                        format!("{loc}.target"),
                        "conjugate-pair transformations take no target",
                    ))
                }
                _ => {}
            }
        }

        let mut names: Vec<&str> = Vec::new();
        for (i, m) in self.maps.iter().enumerate() {
            if names.contains(&m.name.as_str()) {
                errors.push(err(
                    format!("maps[{i}].name"),
                    format!("duplicate map name {:?}", m.name),
                ));
            }
            names.push(&m.name);
        }
        errors
    }

    /// The surface description, assuming `problems()` is empty.
    pub fn to_bundle_spec(&self) -> Result<ConicBundleSpec, SchemaErrors> {
        let (base, g) = match (&self.base, &self.g) {
            (BaseDoc::ExplicitP1, GDoc::Explicit(e)) => {
                let mut errors = Vec::new();
                let num = parse_coeffs(&e.numerator, "g.explicit.numerator", &mut errors);
                let den = parse_coeffs(&e.denominator, "g.explicit.denominator", &mut errors);
                let (Some(num), Some(den)) = (num, den) else {
                    return Err(SchemaErrors(errors));
                };
                let g = RationalFunction::new(num, den)
                    .map_err(|e| SchemaErrors(vec![err("g.explicit", e.to_string())]))?;
                (BaseCurve::projective_line(), GData::Explicit(g))
            }
            (
                BaseDoc::Abstract {
                    genus,
                    real_circle_count,
                },
                GDoc::Abstract(c),
            ) => {
                let base = BaseCurve::abstract_curve(*genus, *real_circle_count)
                    .map_err(|e| SchemaErrors(vec![err("base", e.to_string())]))?;
                (base, GData::Abstract(c.clone()))
            }
            _ => return Err(SchemaErrors(self.problems())),
        };
        Ok(ConicBundleSpec {
            base,
            g,
            transformations: self.transformations.clone(),
        })
    }

    pub fn map(&self, name: &str) -> Option<MapDescriptor> {
        self.maps
            .iter()
            .find(|m| m.name == name)
            .map(|m| MapDescriptor::new(m.degrees.clone()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}
