use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Triangular membership function with feet at `a` and `c` and its peak at `b`.
///
/// Shoulders are allowed: with `a == b` the function is 1 at the left end,
/// with `b == c` it is 1 at the right end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct TriangularMf {
    a: f64,
    b: f64,
    c: f64,
}

impl TriangularMf {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || a > b || b > c {
            return Err(Error::InvalidMembership { a, b, c });
        }
        Ok(Self { a, b, c })
    }

    pub fn left(&self) -> f64 {
        self.a
    }

    pub fn peak(&self) -> f64 {
        self.b
    }

    pub fn right(&self) -> f64 {
        self.c
    }

    pub fn degree(&self, x: f64) -> f64 {
        let Self { a, b, c } = *self;
        if x == b {
            1.0
        } else if x <= a || x >= c {
            0.0
        } else if x < b {
            (x - a) / (b - a)
        } else {
            (c - x) / (c - b)
        }
    }

    /// Closed interval on which the degree can be positive.
    pub fn support(&self) -> (f64, f64) {
        (self.a, self.c)
    }
}

impl TryFrom<[f64; 3]> for TriangularMf {
    type Error = Error;

    fn try_from([a, b, c]: [f64; 3]) -> Result<Self> {
        Self::new(a, b, c)
    }
}

impl From<TriangularMf> for [f64; 3] {
    fn from(mf: TriangularMf) -> Self {
        [mf.a, mf.b, mf.c]
    }
}
