//! The interchange format: a versioned JSON document whose payload is a
//! presentation, Stokes data or a report. Every number is an exact rational
//! string `p/q` in lowest terms and every direction is an `x/y` string.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use stokeslab_core::costokes::StokesData;
use stokeslab_core::exactplane::{Direction, GaussianRational};
use stokeslab_core::linalg::MatQ;
use stokeslab_core::presentation::{Constr0Presentation, PresentationError};
use stokeslab_core::Q;
use thiserror::Error;

pub const FORMAT: &str = "stokeslab/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Json(String),
    #[error("unsupported format {0:?}")]
    Version(String),
    #[error("expected a {expected} document, found {found}")]
    Kind { expected: &'static str, found: &'static str },
    #[error("bad rational {0:?}")]
    Rational(String),
    #[error("bad direction {0:?}")]
    Direction(String),
    #[error("bad matrix: {0}")]
    Matrix(String),
    #[error(transparent)]
    Invalid(#[from] PresentationError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub format: String,
    #[serde(flatten)]
    pub body: Body,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Body {
    Presentation(PresentationDoc),
    StokesData(StokesDoc),
    Report(Report),
}

impl Body {
    fn name(&self) -> &'static str {
        match self {
            Body::Presentation(_) => "presentation",
            Body::StokesData(_) => "stokes_data",
            Body::Report(_) => "report",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDoc {
    pub re: String,
    pub im: String,
}

pub type MatrixDoc = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub exponents: Vec<PointDoc>,
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<MatrixDoc>>,
    pub cut_direction: String,
    pub base_direction: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StokesDoc {
    pub theta: String,
    pub exponents: Vec<PointDoc>,
    pub dims: Vec<usize>,
    pub q: MatrixDoc,
    pub s: MatrixDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub verdict: String,
    pub details: BTreeMap<String, serde_json::Value>,
}

impl Report {
    pub fn new(command: &str, verdict: &str) -> Report {
        Report { command: command.into(), verdict: verdict.into(), details: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Report {
        self.details.insert(key.into(), serde_json::to_value(value).expect("serializable"));
        self
    }
}

impl Document {
    pub fn new(body: Body) -> Document {
        Document { format: FORMAT.into(), body }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Document, FormatError> {
        let d: Document = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
        if d.format != FORMAT {
            return Err(FormatError::Version(d.format));
        }
        Ok(d)
    }

    pub fn presentation(&self) -> Result<Constr0Presentation, FormatError> {
        match &self.body {
            Body::Presentation(p) => p.to_presentation(),
            other => Err(FormatError::Kind { expected: "presentation", found: other.name() }),
        }
    }

    pub fn stokes_data(&self) -> Result<StokesData, FormatError> {
        match &self.body {
            Body::StokesData(s) => s.to_stokes_data(),
            other => Err(FormatError::Kind { expected: "stokes_data", found: other.name() }),
        }
    }
}

pub fn rational_str(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Result<Q, FormatError> {
    let t = s.trim();
    let bad = || FormatError::Rational(s.into());
    match t.split_once('/') {
        Some((n, d)) => {
            let n = stokeslab_core::BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = stokeslab_core::BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d == stokeslab_core::BigInt::from(0) {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(stokeslab_core::BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

pub fn parse_direction(s: &str) -> Result<Direction, FormatError> {
    Direction::from_str(s.trim()).map_err(|_| FormatError::Direction(s.into()))
}

pub fn point_doc(z: &GaussianRational) -> PointDoc {
    PointDoc { re: rational_str(&z.re), im: rational_str(&z.im) }
}

pub fn parse_point(p: &PointDoc) -> Result<GaussianRational, FormatError> {
    Ok(GaussianRational::new(parse_rational(&p.re)?, parse_rational(&p.im)?))
}

/// A point given on the command line as `re,im`.
pub fn parse_point_arg(s: &str) -> Result<GaussianRational, FormatError> {
    let (a, b) = s.split_once(',').ok_or_else(|| FormatError::Rational(s.into()))?;
    Ok(GaussianRational::new(parse_rational(a)?, parse_rational(b)?))
}

pub fn matrix_doc(m: &MatQ) -> MatrixDoc {
    (0..m.rows()).map(|i| m.row(i).iter().map(rational_str).collect()).collect()
}

pub fn parse_matrix(m: &MatrixDoc, rows: usize, cols: usize) -> Result<MatQ, FormatError> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(FormatError::Matrix(format!("expected {rows}x{cols}")));
    }
    let data = m
        .iter()
        .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if rows == 0 {
        return Ok(MatQ::zeros(0, cols));
    }
    Ok(MatQ::from_rows(data))
}

impl PresentationDoc {
    pub fn from_presentation(p: &Constr0Presentation) -> PresentationDoc {
        PresentationDoc {
            exponents: p.exponents.iter().map(point_doc).collect(),
            dims: p.dims.clone(),
            maps: p.maps.iter().map(|r| r.iter().map(matrix_doc).collect()).collect(),
            cut_direction: p.cut_direction.to_string(),
            base_direction: p.base_direction.to_string(),
        }
    }

    /// Parses and validates.
    pub fn to_presentation(&self) -> Result<Constr0Presentation, FormatError> {
        let n = self.dims.len();
        if self.exponents.len() != n || self.maps.len() != n || self.maps.iter().any(|r| r.len() != n) {
            return Err(FormatError::Matrix("maps must form an n×n array matching dims".into()));
        }
        let mut maps = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                row.push(parse_matrix(&self.maps[i][j], self.dims[i], self.dims[j])?);
            }
            maps.push(row);
        }
        Ok(Constr0Presentation::new(
            self.exponents.iter().map(parse_point).collect::<Result<_, _>>()?,
            self.dims.clone(),
            maps,
            parse_direction(&self.cut_direction)?,
            parse_direction(&self.base_direction)?,
        )?)
    }
}

impl StokesDoc {
    pub fn from_stokes_data(d: &StokesData) -> StokesDoc {
        StokesDoc {
            theta: d.theta.to_string(),
            exponents: d.exponents.iter().map(point_doc).collect(),
            dims: d.dims.clone(),
            q: matrix_doc(&d.q),
            s: matrix_doc(&d.s),
        }
    }

    /// Parses without validating; validation happens on use.
    pub fn to_stokes_data(&self) -> Result<StokesData, FormatError> {
        let n: usize = self.dims.iter().sum();
        Ok(StokesData {
            theta: parse_direction(&self.theta)?,
            exponents: self.exponents.iter().map(parse_point).collect::<Result<_, _>>()?,
            dims: self.dims.clone(),
            q: parse_matrix(&self.q, n, n)?,
            s: parse_matrix(&self.s, n, n)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use stokeslab_core::qf;

    #[test]
    fn rationals_round_trip() {
        for (n, d) in [(1, 3), (-4, 6), (0, 5), (7, 1)] {
            let x = qf(n, d);
            assert_eq!(parse_rational(&rational_str(&x)).unwrap(), x);
        }
        assert_eq!(rational_str(&qf(-4, 6)), "-2/3");
        assert_eq!(rational_str(&qf(7, 1)), "7/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn presentation_document_round_trip() {
        let p = Constr0Presentation::two_point_example();
        let doc = Document::new(Body::Presentation(PresentationDoc::from_presentation(&p)));
        let text = doc.to_json();
        let back = Document::parse(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
        assert_eq!(back.presentation().unwrap(), p);
    }

    #[test]
    fn wrong_kind_and_version() {
        let r = Document::new(Body::Report(Report::new("x", "ok")));
        assert!(matches!(r.presentation(), Err(FormatError::Kind { .. })));
        let text = r.to_json().replace(FORMAT, "stokeslab/0");
        assert!(matches!(Document::parse(&text), Err(FormatError::Version(_))));
    }
}
