//! Closed parameter subsets: `right-ray a`, `left-ray a`, `segment a b`,
//! `point a`, with unions written by repetition.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SubsetPiece {
    RightRay(f64),
    LeftRay(f64),
    Segment(f64, f64),
    Point(f64),
}

impl SubsetPiece {
    fn contains(&self, x: f64, tol: f64) -> bool {
        match *self {
            SubsetPiece::RightRay(a) => x >= a - tol,
            SubsetPiece::LeftRay(a) => x <= a + tol,
            SubsetPiece::Segment(a, b) => x >= a - tol && x <= b + tol,
            SubsetPiece::Point(a) => (x - a).abs() <= tol,
        }
    }

    fn endpoints(&self) -> Vec<f64> {
        match *self {
            SubsetPiece::RightRay(a) | SubsetPiece::LeftRay(a) | SubsetPiece::Point(a) => vec![a],
            SubsetPiece::Segment(a, b) => vec![a, b],
        }
    }

    fn is_ray(&self) -> bool {
        matches!(self, SubsetPiece::RightRay(_) | SubsetPiece::LeftRay(_))
    }
}

impl std::fmt::Display for SubsetPiece {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SubsetPiece::RightRay(a) => write!(f, "right-ray {a}"),
            SubsetPiece::LeftRay(a) => write!(f, "left-ray {a}"),
            SubsetPiece::Segment(a, b) => write!(f, "segment {a} {b}"),
            SubsetPiece::Point(a) => write!(f, "point {a}"),
        }
    }
}

/// A finite union of closed rays, segments and points.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ParamSubset {
    pub pieces: Vec<SubsetPiece>,
}

impl ParamSubset {
    pub fn new(pieces: Vec<SubsetPiece>) -> Self {
        Self { pieces }
    }

    pub fn right_ray(a: f64) -> Self {
        Self::new(vec![SubsetPiece::RightRay(a)])
    }

    pub fn left_ray(a: f64) -> Self {
        Self::new(vec![SubsetPiece::LeftRay(a)])
    }

    pub fn segment(a: f64, b: f64) -> Self {
        Self::new(vec![SubsetPiece::Segment(a, b)])
    }

    pub fn point(a: f64) -> Self {
        Self::new(vec![SubsetPiece::Point(a)])
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn union(&self, other: &ParamSubset) -> ParamSubset {
        Self::new(self.pieces.iter().chain(&other.pieces).copied().collect())
    }

    pub fn contains(&self, x: f64) -> bool {
        let tol = 1e-12 * (1.0 + x.abs());
        self.pieces.iter().any(|p| p.contains(x, tol))
    }

    /// Contains `x` or, on a parameter circle, any lift of it.
    pub fn contains_mod(&self, x: f64, period: Option<f64>) -> bool {
        match period {
            None => self.contains(x),
            Some(p) => [-p, 0.0, p].iter().any(|s| self.contains(x + s)),
        }
    }

    pub fn endpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.pieces.iter().flat_map(SubsetPiece::endpoints).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// The subset with every endpoint moved by `f`.
    pub fn map_endpoints(&self, f: impl Fn(f64) -> f64) -> ParamSubset {
        Self::new(
            self.pieces
                .iter()
                .map(|p| match *p {
                    SubsetPiece::RightRay(a) => SubsetPiece::RightRay(f(a)),
                    SubsetPiece::LeftRay(a) => SubsetPiece::LeftRay(f(a)),
                    SubsetPiece::Segment(a, b) => SubsetPiece::Segment(f(a), f(b)),
                    SubsetPiece::Point(a) => SubsetPiece::Point(f(a)),
                })
                .collect(),
        )
    }

    pub fn has_rays(&self) -> bool {
        self.pieces.iter().any(SubsetPiece::is_ray)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let toks: Vec<&str> = s
            .split(|c: char| c.is_whitespace() || c == ',' || c == ';')
            .filter(|t| !t.is_empty())
            .collect();
        let num = |i: usize| -> Result<f64> {
            let t = toks
                .get(i)
                .ok_or_else(|| Error::InvalidSubset(format!("missing number in {s:?}")))?;
            let x: f64 = t
                .parse()
                .map_err(|_| Error::InvalidSubset(format!("{t:?} is not a number")))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(Error::InvalidSubset(format!("{t:?} is not finite")))
            }
        };
        let mut pieces = Vec::new();
        let mut i = 0;
        while i < toks.len() {
            let piece = match toks[i] {
                "right-ray" => {
                    i += 2;
                    SubsetPiece::RightRay(num(i - 1)?)
                }
                "left-ray" => {
                    i += 2;
                    SubsetPiece::LeftRay(num(i - 1)?)
                }
                "point" => {
                    i += 2;
                    SubsetPiece::Point(num(i - 1)?)
                }
                "segment" => {
                    i += 3;
                    let (a, b) = (num(i - 2)?, num(i - 1)?);
                    if a > b {
                        return Err(Error::InvalidSubset(format!("segment {a} {b} is reversed")));
                    }
                    SubsetPiece::Segment(a, b)
                }
                other => return Err(Error::InvalidSubset(format!("unknown subset keyword {other:?}"))),
            };
            pieces.push(piece);
        }
        if pieces.is_empty() {
            return Err(Error::InvalidSubset("empty subset".into()));
        }
        Ok(Self { pieces })
    }
}

impl std::fmt::Display for ParamSubset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.pieces.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl std::str::FromStr for ParamSubset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for ParamSubset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ParamSubset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}
