//! Spec files for batch jobs.
//!
//! A spec file is a small TOML document with one `[ring]` table and any
//! number of `[ideal.NAME]` tables:
//!
//! ```toml
//! [ring]
//! p = 7
//! r = 3
//! d = 2
//!
//! [ideal.J]
//! generators = ["x1", "x2"]
//! ```
//!
//! A general hypersurface replaces `r`/`d` with `vars` and `relation`. See
//! `docs/spec-file.md` for the grammar.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use tight_core::ffpoly::PolyError;
use tight_core::graded_ring::{HypersurfaceRing, RIdeal, RingError, RingRef};
use toml::Spanned;

/// A problem with the spec file, positioned where possible (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct SpecError {
    pub position: Option<(usize, usize)>,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some((line, column)) => write!(f, "line {line}, column {column}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    ring: Spanned<RawRing>,
    #[serde(default)]
    ideal: BTreeMap<String, RawIdeal>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    p: u64,
    r: Option<u32>,
    d: Option<u32>,
    vars: Option<Vec<String>>,
    relation: Option<Spanned<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdeal {
    generators: Vec<Spanned<String>>,
}

/// The ring block as written.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RingSpec {
    Fermat {
        p: u64,
        r: u32,
        d: u32,
    },
    General {
        p: u64,
        vars: Vec<String>,
        relation: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealSpec {
    pub name: String,
    pub generators: Vec<String>,
}

/// A parsed and validated spec: the ring is built and every generator
/// parses in it.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub ring_spec: RingSpec,
    pub ring: RingRef,
    ideals: Vec<(IdealSpec, RIdeal)>,
}

/// Converts a byte offset into a 1-based line and column (in characters).
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn at(text: &str, span: Range<usize>, message: impl Into<String>) -> SpecError {
    SpecError {
        position: Some(line_col(text, span.start)),
        message: message.into(),
    }
}

/// Positions a polynomial parse error inside a quoted TOML string.
fn poly_error(text: &str, value: &Spanned<String>, err: PolyError) -> SpecError {
    let offset = match &err {
        PolyError::UnknownVariable { offset, .. }
        | PolyError::Syntax { offset, .. }
        | PolyError::NegativeExponent { offset } => *offset,
        _ => 0,
    };
    // skip the opening quote; exact when the string has no escapes
    let start = value.span().start + 1 + offset;
    at(
        text,
        start..start,
        format!("in \"{}\": {err}", value.get_ref()),
    )
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<JobSpec, SpecError> {
        let raw: RawSpec = toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            match e.span() {
                Some(span) => at(text, span, message),
                None => SpecError {
                    position: None,
                    message,
                },
            }
        })?;
        let ring_span = raw.ring.span();
        let ring_raw = raw.ring.into_inner();
        let ring_spec = match &ring_raw {
            RawRing {
                p,
                r: Some(r),
                d: Some(d),
                vars: None,
                relation: None,
            } => RingSpec::Fermat {
                p: *p,
                r: *r,
                d: *d,
            },
            RawRing {
                p,
                r: None,
                d: None,
                vars: Some(vars),
                relation: Some(relation),
            } => RingSpec::General {
                p: *p,
                vars: vars.clone(),
                relation: relation.get_ref().clone(),
            },
            _ => {
                return Err(at(
                    text,
                    ring_span,
                    "[ring] needs either `r` and `d` (Fermat) or `vars` and `relation`",
                ))
            }
        };
        let ring = match &ring_spec {
            RingSpec::Fermat { p, r, d } => HypersurfaceRing::fermat(*p, *r, *d)
                .map_err(|e| at(text, ring_span.clone(), e.to_string()))?,
            RingSpec::General { p, vars, relation } => {
                HypersurfaceRing::general(*p, vars.clone(), relation).map_err(|e| match e {
                    RingError::Poly(
                        pe @ (PolyError::UnknownVariable { .. }
                        | PolyError::Syntax { .. }
                        | PolyError::NegativeExponent { .. }),
                    ) => poly_error(
                        text,
                        ring_raw
                            .relation
                            .as_ref()
                            .expect("general ring has a relation"),
                        pe,
                    ),
                    other => at(text, ring_span.clone(), other.to_string()),
                })?
            }
        };

        let mut ideals = Vec::with_capacity(raw.ideal.len());
        for (name, raw_ideal) in raw.ideal {
            let mut polys = Vec::with_capacity(raw_ideal.generators.len());
            for g in &raw_ideal.generators {
                polys.push(
                    ring.parse(g.get_ref())
                        .map_err(|e| poly_error(text, g, e))?,
                );
            }
            let ideal = RIdeal::new(&ring, polys).map_err(|e| SpecError {
                position: None,
                message: e.to_string(),
            })?;
            let generators = raw_ideal
                .generators
                .into_iter()
                .map(Spanned::into_inner)
                .collect();
            ideals.push((IdealSpec { name, generators }, ideal));
        }
        Ok(JobSpec {
            ring_spec,
            ring,
            ideals,
        })
    }

    pub fn ideal_specs(&self) -> impl Iterator<Item = &IdealSpec> {
        self.ideals.iter().map(|(s, _)| s)
    }

    /// The named ideal, or the only one when `name` is `None`.
    pub fn ideal(&self, name: Option<&str>) -> Result<(&IdealSpec, &RIdeal), SpecError> {
        let found = match name {
            Some(name) => self.ideals.iter().find(|(s, _)| s.name == name),
            None if self.ideals.len() == 1 => self.ideals.first(),
            None if self.ideals.is_empty() => {
                return Err(SpecError {
                    position: None,
                    message: "the spec defines no [ideal.NAME] table".into(),
                })
            }
            None => {
                return Err(SpecError {
                    position: None,
                    message: "several ideals defined; choose one with --ideal".into(),
                })
            }
        };
        found.map(|(s, i)| (s, i)).ok_or_else(|| SpecError {
            position: None,
            message: format!("no ideal named `{}`", name.unwrap_or_default()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBIC: &str = "[ring]\np = 7\nr = 3\nd = 2\n\n[ideal.J]\ngenerators = [\"x1\", \"x2\"]\n";

    #[test]
    fn parses_a_fermat_spec() {
        let spec = JobSpec::parse(CUBIC).unwrap();
        assert_eq!(spec.ring_spec, RingSpec::Fermat { p: 7, r: 3, d: 2 });
        let (s, ideal) = spec.ideal(None).unwrap();
        assert_eq!(s.name, "J");
        assert_eq!(ideal.gens().len(), 2);
        assert!(spec.ideal(Some("K")).is_err());
    }

    #[test]
    fn parses_a_general_spec() {
        let text = "[ring]\np = 5\nvars = [\"x\", \"y\", \"z\"]\nrelation = \"x^2 + y*z\"\n";
        let spec = JobSpec::parse(text).unwrap();
        assert!(matches!(spec.ring_spec, RingSpec::General { p: 5, .. }));
        assert_eq!(spec.ring.dimension(), 2);
        assert!(spec.ideal(None).is_err());
    }

    #[test]
    fn generator_errors_point_into_the_string() {
        let text = "[ring]\np = 7\nr = 3\nd = 2\n[ideal.J]\ngenerators = [\"x1\", \"x1 + y\"]\n";
        let err = JobSpec::parse(text).unwrap_err();
        // `y` sits at byte 5 of the second string, which opens at column 21
        assert_eq!(err.position, Some((6, 27)));
        assert!(err.message.contains("unknown variable `y`"));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = JobSpec::parse("[ring]\np = 7\nr = \n").unwrap_err();
        assert_eq!(err.position.map(|(l, _)| l), Some(3));
        let err = JobSpec::parse("[ring]\np = 7\nr = 3\nd = 2\nq = 1\n").unwrap_err();
        assert!(err.message.contains("unknown field"));
        let err = JobSpec::parse("[ideal.J]\ngenerators = []\n").unwrap_err();
        assert!(err.message.contains("ring"));
    }

    #[test]
    fn ring_errors_name_the_violated_condition() {
        let err = JobSpec::parse("[ring]\np = 3\nr = 3\nd = 2\n").unwrap_err();
        assert!(err.message.contains("p divides r"));
        assert_eq!(err.position.map(|(l, _)| l), Some(1));
        let err = JobSpec::parse("[ring]\np = 8\nr = 3\nd = 2\n").unwrap_err();
        assert!(err.message.contains("not a prime"));
        let err = JobSpec::parse("[ring]\np = 7\nr = 3\n").unwrap_err();
        assert!(err.message.contains("either"));
    }
}
