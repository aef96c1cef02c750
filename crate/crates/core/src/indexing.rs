//! All twelve indexing conventions for spectral sequence charts, the
//! page-shift reindexing, and weight/degree bookkeeping.
//!
//! Conventions are pure view transforms: pages are computed once in the
//! internal convention (homological, decreasing filtration, Serre grading,
//! `E^1_{s,t} = H_{s+t} gr^{-s}`, `d^r` of bidegree `(-r, r-1)`) and then
//! relabeled. Every transform here is an invertible linear map of the
//! `(s,t)`-plane.

use crate::{Error, Result};
use std::fmt;

/// A 2x2 integer matrix acting on `(s, t)` column vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mat2(pub [[i64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([[1, 0], [0, 1]])
    }

    pub fn apply(&self, s: i64, t: i64) -> (i64, i64) {
        (self.0[0][0] * s + self.0[0][1] * t, self.0[1][0] * s + self.0[1][1] * t)
    }

    pub fn det(&self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Mat2 {
        let d = self.det();
        assert!(d.abs() == 1, "only unimodular matrices invert over Z");
        let [[a, b], [c, e]] = self.0;
        Mat2([[e * d, -b * d], [-c * d, a * d]])
    }

    pub fn compose(&self, other: &Mat2) -> Mat2 {
        let mut out = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.0[i][0] * other.0[0][j] + self.0[i][1] * other.0[1][j];
            }
        }
        Mat2(out)
    }
}

/// Homological (`π_*`-style) or cohomological (`H^*`-style) bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    Homology,
    Cohomology,
}

/// Whether the filtration is indexed decreasingly (`F^s`) or increasingly
/// (`F_s`); increasing filtrations are stored internally via `s ↦ -s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Decreasing,
    Increasing,
}

/// The three chart-grading schemes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Serre,
    E2Reindexed,
    Adams,
}

/// One of the twelve indexing conventions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Convention {
    pub variance: Variance,
    pub direction: Direction,
    pub scheme: Scheme,
}

impl Convention {
    pub const INTERNAL: Convention = Convention {
        variance: Variance::Homology,
        direction: Direction::Decreasing,
        scheme: Scheme::Serre,
    };

    /// All twelve conventions, in table order: scheme-major, then variance,
    /// then filtration direction.
    pub fn all() -> Vec<Convention> {
        let mut out = Vec::with_capacity(12);
        for scheme in [Scheme::Serre, Scheme::E2Reindexed, Scheme::Adams] {
            for variance in [Variance::Homology, Variance::Cohomology] {
                for direction in [Direction::Decreasing, Direction::Increasing] {
                    out.push(Convention { variance, direction, scheme });
                }
            }
        }
        out
    }

    /// The linear map taking this convention's `(s,t)` to the internal
    /// position of the same term.
    pub fn to_internal_matrix(&self) -> Mat2 {
        match (self.scheme, self.variance) {
            (Scheme::Serre, Variance::Homology) => Mat2::identity(),
            (Scheme::Serre, Variance::Cohomology) => Mat2([[-1, 0], [0, -1]]),
            (Scheme::E2Reindexed, Variance::Homology) => Mat2([[0, -1], [1, 2]]),
            (Scheme::E2Reindexed, Variance::Cohomology) => Mat2([[0, 1], [-1, -2]]),
            (Scheme::Adams, Variance::Homology) => Mat2([[0, -1], [1, 1]]),
            (Scheme::Adams, Variance::Cohomology) => Mat2([[0, 1], [-1, -1]]),
        }
    }

    pub fn to_internal(&self, s: i64, t: i64) -> (i64, i64) {
        self.to_internal_matrix().apply(s, t)
    }

    pub fn from_internal(&self, s: i64, t: i64) -> (i64, i64) {
        self.to_internal_matrix().inverse().apply(s, t)
    }

    /// Bidegree of `d^r` in this convention's coordinates (the pull-back of
    /// the internal bidegree `(-r, r-1)`).
    pub fn differential_bidegree(&self, r: u32) -> (i64, i64) {
        let r = r as i64;
        self.to_internal_matrix().inverse().apply(-r, r - 1)
    }

    /// Chart position recording `gr^s H_n` (or `gr^s π_n`) on the stable
    /// page. `s` is the convention's own filtration index; increasing
    /// conventions store weight `-s` internally.
    pub fn einfty_position(&self, s: i64, n: i64) -> (i64, i64) {
        let weight = match self.direction {
            Direction::Decreasing => s,
            Direction::Increasing => -s,
        };
        let degree = match self.variance {
            Variance::Homology => n,
            Variance::Cohomology => -n,
        };
        self.from_internal(-weight, weight + degree)
    }

    /// Stable name, e.g. `homology-decreasing-serre`.
    pub fn name(&self) -> String {
        format!("{}-{}-{}", self.variance_str(), self.direction_str(), self.scheme_str())
    }

    fn variance_str(&self) -> &'static str {
        match self.variance {
            Variance::Homology => "homology",
            Variance::Cohomology => "cohomology",
        }
    }

    fn direction_str(&self) -> &'static str {
        match self.direction {
            Direction::Decreasing => "decreasing",
            Direction::Increasing => "increasing",
        }
    }

    fn scheme_str(&self) -> &'static str {
        match self.scheme {
            Scheme::Serre => "serre",
            Scheme::E2Reindexed => "e2",
            Scheme::Adams => "adams",
        }
    }

    pub fn parse(name: &str) -> Result<Convention> {
        let parts: Vec<&str> = name.split('-').collect();
        if parts.len() != 3 {
            return Err(Error::Other(format!(
                "convention must be <variance>-<direction>-<scheme>, got {name}"
            )));
        }
        let variance = match parts[0] {
            "homology" => Variance::Homology,
            "cohomology" => Variance::Cohomology,
            other => return Err(Error::Other(format!("unknown variance {other}"))),
        };
        let direction = match parts[1] {
            "decreasing" => Direction::Decreasing,
            "increasing" => Direction::Increasing,
            other => return Err(Error::Other(format!("unknown direction {other}"))),
        };
        let scheme = match parts[2] {
            "serre" => Scheme::Serre,
            "e2" => Scheme::E2Reindexed,
            "adams" => Scheme::Adams,
            other => return Err(Error::Other(format!("unknown scheme {other}"))),
        };
        Ok(Convention { variance, direction, scheme })
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// The reindexing for the décalage comparison: `E^{r+1}_{s,t}(F)` sits at
/// `E^1` position `((-r+1)s - rt, rs + (r+1)t)` of the `r`-fold décalage.
/// Returns the matrix and its inverse; the determinant is one.
pub fn page_shift_transform(r: u32) -> (Mat2, Mat2) {
    let r = r as i64;
    let m = Mat2([[-r + 1, -r], [r, r + 1]]);
    (m, m.inverse())
}

/// Weight and cohomological degree of `E^r_{s,t}` under the line grading:
/// weight `(r-1)s + rt`, degree `(r-2)s + (r-1)t`.
pub fn weight_and_degree(r: u32, s: i64, t: i64) -> (i64, i64) {
    let r = r as i64;
    ((r - 1) * s + r * t, (r - 2) * s + (r - 1) * t)
}
