//! File formats: point sets, body descriptions, reports and degree tables.
//!
//! Point sets are plain text, one `x y` pair of decimal integers per line.
//! Lines starting with `#` are comments; a comment of the form
//! `# scale <num>[/<den>]` sets the grid scale (default 1).

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use emptri_core::body::{ConvexBody, Shape};
use emptri_core::engine::{EmptyTriangleReport, FirstMoment, NearPairStat};
use emptri_core::{Point, PointSet, Scale};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid body description: {0}")]
    Body(String),
    #[error(transparent)]
    Data(#[from] emptri_core::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn parse_error(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

fn parse_scale(text: &str, line: usize) -> Result<Scale, FormatError> {
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text.trim(), "1"),
    };
    let num: u64 = num.parse().map_err(|_| parse_error(line, format!("bad scale numerator {num:?}")))?;
    let den: u64 = den.parse().map_err(|_| parse_error(line, format!("bad scale denominator {den:?}")))?;
    Scale::new(num, den).map_err(|e| parse_error(line, e.to_string()))
}

/// Reads a point set. Coordinates are range-checked and must be distinct;
/// general position is left to the caller.
pub fn read_point_set<R: BufRead>(reader: R) -> Result<PointSet, FormatError> {
    let mut scale = Scale::ONE;
    let mut points = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(comment) = text.strip_prefix('#') {
            let mut words = comment.split_whitespace();
            if words.next() == Some("scale") {
                let value: Vec<&str> = words.collect();
                scale = parse_scale(&value.concat(), lineno)?;
            }
            continue;
        }
        let mut fields = text.split_whitespace();
        let (Some(x), Some(y), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_error(lineno, "expected two integers \"x y\""));
        };
        let x: i64 = x.parse().map_err(|_| parse_error(lineno, format!("bad coordinate {x:?}")))?;
        let y: i64 = y.parse().map_err(|_| parse_error(lineno, format!("bad coordinate {y:?}")))?;
        let p = Point::checked(x, y).map_err(|e| parse_error(lineno, e.to_string()))?;
        points.push(p);
    }
    Ok(PointSet::new(points, scale)?)
}

/// Writes `header` lines as comments, then the scale line and the points.
pub fn write_point_set<W: Write>(mut w: W, set: &PointSet, header: &[String]) -> io::Result<()> {
    for line in header {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "# scale {}", set.scale())?;
    for p in set.points() {
        writeln!(w, "{} {}", p.x, p.y)?;
    }
    Ok(())
}

/// JSON description of a convex body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Ellipse {
        center: [f64; 2],
        semi_axes: [f64; 2],
        #[serde(default)]
        rotation: f64,
    },
}

impl BodySpec {
    /// `[0, 1]^2`.
    pub fn square() -> Self {
        BodySpec::Polygon { vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]] }
    }

    /// Unit disk; normalizes to the area-one disk.
    pub fn disk() -> Self {
        BodySpec::Ellipse { center: [0.0, 0.0], semi_axes: [1.0, 1.0], rotation: 0.0 }
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        serde_json::from_str(text).map_err(|e| FormatError::Body(e.to_string()))
    }

    /// `square`, `disk`, or a path to a JSON file.
    pub fn resolve(arg: &str) -> Result<Self, FormatError> {
        match arg {
            "square" => Ok(BodySpec::square()),
            "disk" => Ok(BodySpec::disk()),
            path => BodySpec::from_json(&std::fs::read_to_string(path)?),
        }
    }

    pub fn to_body(&self) -> Result<ConvexBody, FormatError> {
        let body = match self {
            BodySpec::Polygon { vertices } => ConvexBody::polygon(vertices.clone()),
            &BodySpec::Ellipse { center, semi_axes, rotation } => ConvexBody::ellipse(center, semi_axes, rotation),
        };
        body.map_err(|e| FormatError::Body(e.to_string()))
    }

    /// The body mapped to standard position.
    pub fn normalized(&self) -> Result<ConvexBody, FormatError> {
        let (body, _) = self.to_body()?.normalize().map_err(|e| FormatError::Body(e.to_string()))?;
        Ok(body)
    }
}

impl From<&ConvexBody> for BodySpec {
    fn from(body: &ConvexBody) -> Self {
        match body.shape() {
            Shape::Polygon(v) => BodySpec::Polygon { vertices: v.clone() },
            &Shape::Ellipse { center, semi_axes, rotation } => BodySpec::Ellipse { center, semi_axes, rotation },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NearPairJson {
    pub t: f64,
    pub threshold_sq: String,
    pub count: u64,
    pub degree_sum: u64,
    pub first_moment_holds: bool,
}

/// The JSON document printed by `emptri analyze`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub n: usize,
    pub f: u64,
    pub deg_max: u32,
    pub argmax_pair: Option<[usize; 2]>,
    pub degree_histogram: Vec<u64>,
    pub degree_sum: u64,
    pub handshake_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub near_pairs: Option<NearPairJson>,
}

impl ReportJson {
    pub fn new(report: &EmptyTriangleReport, near: Option<(&NearPairStat, FirstMoment)>) -> Self {
        let degree_sum = report.degree.total();
        ReportJson {
            n: report.n,
            f: report.f,
            deg_max: report.deg_max,
            argmax_pair: (report.n >= 2).then_some([report.argmax_pair.0, report.argmax_pair.1]),
            degree_histogram: report.degree_histogram(),
            degree_sum,
            handshake_ok: degree_sum == 3 * report.f,
            near_pairs: near.map(|(stat, fm)| NearPairJson {
                t: stat.t.unwrap_or(f64::NAN),
                threshold_sq: stat.threshold_sq.to_string(),
                count: stat.count,
                degree_sum: fm.degree_sum,
                first_moment_holds: fm.holds(),
            }),
        }
    }
}

/// Full degree table as `i,j,deg` rows, pairs in lexicographic order.
pub fn write_degree_csv<W: Write>(mut w: W, report: &EmptyTriangleReport) -> io::Result<()> {
    let mut buf = String::from("i,j,deg\n");
    for (i, j, d) in report.degree.iter() {
        let _ = writeln!(buf, "{i},{j},{d}");
        if buf.len() > 1 << 16 {
            w.write_all(buf.as_bytes())?;
            buf.clear();
        }
    }
    w.write_all(buf.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_set_round_trip() {
        let text = "# five points\n# scale 4/2\n0 0\n10 0\n\n10 10\n0 10\n5 4\n";
        let set = read_point_set(text.as_bytes()).unwrap();
        assert_eq!(set.len(), 5);
        assert_eq!(set.scale(), Scale::new(2, 1).unwrap());
        let mut out = Vec::new();
        write_point_set(&mut out, &set, &["hello".into()]).unwrap();
        let again = read_point_set(out.as_slice()).unwrap();
        assert_eq!(again, set);
        assert!(String::from_utf8(out).unwrap().starts_with("# hello\n# scale 2\n0 0\n"));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = read_point_set("0 0\n1 x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 2, .. }), "{err}");
        let err = read_point_set("# c\n0 0 0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 2, .. }));
        let err = read_point_set("3000000000 0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 1, .. }));
        let err = read_point_set("# scale 0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 1, .. }));
        assert!(matches!(read_point_set("1 1\n1 1\n".as_bytes()), Err(FormatError::Data(_))));
    }

    #[test]
    fn body_json() {
        let poly = BodySpec::from_json(r#"{"type":"polygon","vertices":[[0,0],[1,0],[1,1],[0,1]]}"#).unwrap();
        assert_eq!(poly, BodySpec::square());
        let e = BodySpec::from_json(r#"{"type":"ellipse","center":[1,2],"semi_axes":[3,1],"rotation":0.5}"#).unwrap();
        let body = e.normalized().unwrap();
        assert!((body.area() - 1.0).abs() < 1e-12);
        assert!(BodySpec::from_json(r#"{"type":"circle"}"#).is_err());
        let bad = BodySpec::Polygon { vertices: vec![[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]] };
        assert!(bad.to_body().is_err());
        let text = serde_json::to_string(&BodySpec::disk()).unwrap();
        assert_eq!(text, r#"{"type":"ellipse","center":[0.0,0.0],"semi_axes":[1.0,1.0],"rotation":0.0}"#);
    }
}
