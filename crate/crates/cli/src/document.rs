//! The JSON point-set format read and written by every subcommand.

use anyhow::{bail, Context, Result};
use mmp_core::{Point, PointSet};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Either `{"points": [[x, y], ...]}` or `{"red": [...], "blue": [...]}`,
/// with an optional `"name"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSetDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub red: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blue: Option<Vec<[f64; 2]>>,
}

fn to_points(raw: &[[f64; 2]]) -> Vec<Point> {
    raw.iter().map(|&[x, y]| Point::new(x, y)).collect()
}

fn to_raw(points: &[Point]) -> Vec<[f64; 2]> {
    points.iter().map(|p| [p.x, p.y]).collect()
}

impl PointSetDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).context("malformed point-set JSON")?;
        match (&doc.points, &doc.red, &doc.blue) {
            (Some(_), None, None) | (None, Some(_), Some(_)) => Ok(doc),
            _ => bail!("a point set has either \"points\" or both \"red\" and \"blue\""),
        }
    }

    pub fn from_point_set(name: Option<String>, ps: &PointSet) -> Self {
        let mut doc = Self { name, points: None, red: None, blue: None };
        if ps.is_colored() {
            use mmp_core::matching::Color;
            let pick = |c: Color| ps.indices_of(c).into_iter().map(|i| ps.point(i)).collect::<Vec<_>>();
            doc.red = Some(to_raw(&pick(Color::Red)));
            doc.blue = Some(to_raw(&pick(Color::Blue)));
        } else {
            doc.points = Some(to_raw(ps.points()));
        }
        doc
    }

    pub fn is_empty(&self) -> bool {
        [&self.points, &self.red, &self.blue].iter().all(|v| v.as_ref().is_none_or(Vec::is_empty))
    }

    /// Validates into a point set: finite, non-empty, even or color-balanced.
    pub fn point_set(&self) -> mmp_core::Result<PointSet> {
        match (&self.points, &self.red, &self.blue) {
            (Some(pts), _, _) => PointSet::uncolored(to_points(pts)),
            (None, Some(red), Some(blue)) => PointSet::colored(to_points(red), to_points(blue)),
            _ => Err(mmp_core::Error::InvalidPointSet("no points".into())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents always serialize")
    }

    /// SHA-256 of the canonical serialization, lowercase hex.
    pub fn digest(&self) -> String {
        Sha256::digest(self.to_json().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for text in [
            r#"{"points":[[0.1,2.0],[3.0,-4.5]]}"#,
            r#"{"name":"x","red":[[0.0,0.0]],"blue":[[1.0,1e-300]]}"#,
        ] {
            let doc = PointSetDocument::parse(text).unwrap();
            let again = PointSetDocument::parse(&doc.to_json()).unwrap();
            assert_eq!(doc, again);
            assert_eq!(doc.point_set().unwrap(), again.point_set().unwrap());
        }
    }

    #[test]
    fn shape_errors() {
        assert!(PointSetDocument::parse("{").is_err());
        assert!(PointSetDocument::parse(r#"{"red":[[0,0]]}"#).is_err());
        assert!(PointSetDocument::parse(r#"{"points":[[0,0]],"red":[[0,0]],"blue":[[1,1]]}"#).is_err());
        assert!(PointSetDocument::parse(r#"{"points":[[0,0]],"extra":1}"#).is_err());
        let odd = PointSetDocument::parse(r#"{"points":[[0,0],[1,1],[2,2]]}"#).unwrap();
        assert!(odd.point_set().is_err());
        let unbalanced = PointSetDocument::parse(r#"{"red":[[0,0]],"blue":[]}"#).unwrap();
        assert!(unbalanced.point_set().is_err());
    }

    #[test]
    fn digest_is_stable() {
        let doc = PointSetDocument::parse(r#"{"points": [[0, 0], [1, 1]]}"#).unwrap();
        let spaced = PointSetDocument::parse("{\n \"points\":[[0.0,0.0],\n[1.0,1.0]]}").unwrap();
        assert_eq!(doc.digest(), spaced.digest());
        assert_eq!(doc.digest().len(), 64);
    }
}
