//! Bounded chain complexes of finitely generated free modules with exact
//! homology, good truncation, shift, and Hom-complex construction.
//!
//! Indexing is homological throughout; cohomological objects are stored
//! with negated degrees, so `H^n = H_{-n}`.

use crate::exact_linalg::{
    kernel_basis, solve_matrix, span_basis, subquotient, ExactMatrix, FgModule, Ring,
};
use crate::{Error, Result};
use num::Zero;

/// A bounded chain complex `M_{n_min} <- ... <- M_{n_max}` of free modules.
/// `d_n : M_n -> M_{n-1}`; the constructor rejects `d∘d ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    ring: Ring,
    min_degree: i64,
    max_degree: i64,
    /// Rank of `M_n` for `n = min_degree + i`.
    ranks: Vec<usize>,
    /// `differentials[i]` is `d` out of degree `min_degree + 1 + i`.
    differentials: Vec<ExactMatrix>,
}

impl ChainComplex {
    pub fn new(
        ring: Ring,
        min_degree: i64,
        ranks: Vec<usize>,
        differentials: Vec<ExactMatrix>,
    ) -> Result<Self> {
        if ranks.is_empty() {
            return Ok(Self::zero(ring));
        }
        let max_degree = min_degree + ranks.len() as i64 - 1;
        if differentials.len() + 1 != ranks.len() {
            return Err(Error::InvalidComplex(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.ring() != ring {
                return Err(Error::RingMismatch(ring, d.ring()));
            }
            if d.rows() != ranks[i] || d.cols() != ranks[i + 1] {
                return Err(Error::InvalidComplex(format!(
                    "d in degree {} must be {}x{}, got {}x{}",
                    min_degree + 1 + i as i64,
                    ranks[i],
                    ranks[i + 1],
                    d.rows(),
                    d.cols()
                )));
            }
        }
        for i in 0..differentials.len().saturating_sub(1) {
            let dd = differentials[i].mul(&differentials[i + 1]).expect("shapes checked");
            if !dd.is_zero() {
                return Err(Error::InvalidComplex(format!(
                    "d∘d ≠ 0 out of degree {}",
                    min_degree + 2 + i as i64
                )));
            }
        }
        Ok(ChainComplex { ring, min_degree, max_degree, ranks, differentials })
    }

    /// The zero complex.
    pub fn zero(ring: Ring) -> Self {
        ChainComplex { ring, min_degree: 0, max_degree: -1, ranks: vec![], differentials: vec![] }
    }

    /// A single free module of the given rank concentrated in one degree.
    pub fn concentrated(ring: Ring, degree: i64, rank: usize) -> Self {
        ChainComplex {
            ring,
            min_degree: degree,
            max_degree: degree,
            ranks: vec![rank],
            differentials: vec![],
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    /// Inclusive degree range `[n_min, n_max]`; empty (`min > max`) for the
    /// zero complex.
    pub fn degree_range(&self) -> (i64, i64) {
        (self.min_degree, self.max_degree)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.min_degree..=self.max_degree
    }

    pub fn rank(&self, n: i64) -> usize {
        if n < self.min_degree || n > self.max_degree {
            0
        } else {
            self.ranks[(n - self.min_degree) as usize]
        }
    }

    /// The differential `d_n : M_n -> M_{n-1}` (zero outside the range).
    pub fn differential(&self, n: i64) -> ExactMatrix {
        if n <= self.min_degree || n > self.max_degree {
            ExactMatrix::zeros(self.ring, self.rank(n - 1), self.rank(n))
        } else {
            self.differentials[(n - self.min_degree - 1) as usize].clone()
        }
    }

    /// `H_n = ker d_n / im d_{n+1}` with generator lifts into `M_n`.
    pub fn homology(&self, n: i64) -> FgModule {
        let rank = self.rank(n);
        if rank == 0 {
            return FgModule::zero(self.ring);
        }
        let cycles = self.cycle_span(n);
        let boundaries = self.differential(n + 1);
        subquotient(rank, &cycles, &boundaries).expect("spans live in M_n")
    }

    /// Cycle span `ker d_n` as columns in `M_n`.
    pub fn cycle_span(&self, n: i64) -> ExactMatrix {
        if n <= self.min_degree {
            ExactMatrix::identity(self.ring, self.rank(n))
        } else {
            kernel_basis(&self.differential(n))
        }
    }

    /// Boundary span `im d_{n+1}` as columns in `M_n`.
    pub fn boundary_span(&self, n: i64) -> ExactMatrix {
        span_basis(&self.differential(n + 1))
    }

    /// Degree shift: `C[k]_n = C_{n-k}`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let mut c = self.clone();
        c.min_degree += k;
        c.max_degree += k;
        c
    }

    /// Degreewise direct sum, with `self`'s coordinates first.
    pub fn direct_sum(&self, other: &ChainComplex) -> Result<ChainComplex> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let n_min = self.min_degree.min(other.min_degree);
        let n_max = self.max_degree.max(other.max_degree);
        let mut ranks = Vec::new();
        let mut differentials = Vec::new();
        for n in n_min..=n_max {
            ranks.push(self.rank(n) + other.rank(n));
        }
        for n in (n_min + 1)..=n_max {
            let a = self.differential(n);
            let b = other.differential(n);
            let rows = self.rank(n - 1) + other.rank(n - 1);
            let cols = self.rank(n) + other.rank(n);
            let mut d = ExactMatrix::zeros(self.ring, rows, cols);
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    d.set(i, j, a.get(i, j).clone());
                }
            }
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    d.set(self.rank(n - 1) + i, self.rank(n) + j, b.get(i, j).clone());
                }
            }
            differentials.push(d);
        }
        ChainComplex::new(self.ring, n_min, ranks, differentials)
    }

    /// Good truncation `τ_{≥a}`: full terms above `a`, cycles in degree `a`
    /// (on a saturated basis over the integers, so terms stay free), zero
    /// below. Homology is preserved in degrees `≥ a` and vanishes below.
    pub fn truncate_geq(&self, a: i64) -> ChainComplex {
        if a <= self.min_degree {
            return self.clone();
        }
        if a > self.max_degree {
            return ChainComplex::zero(self.ring);
        }
        let kernel = self.cycle_span(a);
        let mut ranks = vec![kernel.cols()];
        let mut differentials = Vec::new();
        for n in (a + 1)..=self.max_degree {
            ranks.push(self.rank(n));
            if n == a + 1 {
                // d_{a+1} rewritten in the kernel basis.
                let d = self.differential(n);
                let rebased = solve_matrix(&kernel, &d)
                    .expect("boundaries are cycles, so columns lie in the kernel");
                differentials.push(rebased);
            } else {
                differentials.push(self.differential(n));
            }
        }
        ChainComplex::new(self.ring, a, ranks, differentials).expect("truncation is a complex")
    }

    /// Alternating sum of ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|n| {
                let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
                sign * self.rank(n) as i64
            })
            .sum()
    }

    /// The Hom complex `Hom(C, M)_n = ⊕_s Hom(C_s, M_{s+n})` with the
    /// differential `(df)(x) = d_M(f(x)) - (-1)^{|f|} f(d_C x)`.
    ///
    /// Basis order: degrees `s` of `C` ascending, then the `C_s` basis index,
    /// then the `M_{s+n}` basis index; see [`hom_block_layout`].
    pub fn hom_complex(c: &ChainComplex, m: &ChainComplex) -> Result<ChainComplex> {
        if c.ring != m.ring {
            return Err(Error::RingMismatch(c.ring, m.ring));
        }
        if c.is_zero() || m.is_zero() {
            return Ok(ChainComplex::zero(c.ring));
        }
        let ring = c.ring;
        let (c_min, c_max) = c.degree_range();
        let (m_min, m_max) = m.degree_range();
        let n_min = m_min - c_max;
        let n_max = m_max - c_min;
        let offsets = |n: i64| -> (Vec<(i64, usize)>, usize) {
            let blocks = hom_block_layout(c, m, n);
            let total = blocks.iter().map(|b| b.size).sum();
            (blocks.into_iter().map(|b| (b.source_degree, b.offset)).collect(), total)
        };
        let block_of = |blocks: &[(i64, usize)], s: i64| -> usize {
            blocks.iter().find(|(w, _)| *w == s).map(|(_, o)| *o).expect("degree in range")
        };
        let mut ranks = Vec::new();
        for n in n_min..=n_max {
            let (_, total) = offsets(n);
            ranks.push(total);
        }
        let mut differentials = Vec::new();
        for n in (n_min + 1)..=n_max {
            let (src_blocks, src_total) = offsets(n);
            let (dst_blocks, dst_total) = offsets(n - 1);
            let mut d = ExactMatrix::zeros(ring, dst_total, src_total);
            let sign_positive = ((n % 2) + 2) % 2 == 0;
            for s in c_min..=c_max {
                let cs = c.rank(s);
                let ms = m.rank(s + n);
                if cs == 0 || ms == 0 {
                    continue;
                }
                let src_off = block_of(&src_blocks, s);
                let ms1 = m.rank(s + n - 1);
                // Post-compose with d_M: lands in Hom(C_s, M_{s+n-1}).
                if ms1 > 0 {
                    let dm = m.differential(s + n);
                    let dst_off = block_of(&dst_blocks, s);
                    for i in 0..cs {
                        for j in 0..ms {
                            let src_idx = src_off + i * ms + j;
                            for t in 0..ms1 {
                                let v = dm.get(t, j);
                                if !v.is_zero() {
                                    d.set(dst_off + i * ms1 + t, src_idx, v.clone());
                                }
                            }
                        }
                    }
                }
                // Pre-compose with d_C: the block at source degree s feeds
                // the block at source degree s+1 (same target module), with
                // sign -(-1)^n.
                let cs_up = c.rank(s + 1);
                if cs_up > 0 && s < c_max {
                    let dc = c.differential(s + 1);
                    let dst_off = block_of(&dst_blocks, s + 1);
                    for i_up in 0..cs_up {
                        for i in 0..cs {
                            let v = dc.get(i, i_up);
                            if v.is_zero() {
                                continue;
                            }
                            let signed = if sign_positive { ring.neg(v) } else { v.clone() };
                            for j in 0..ms {
                                let src_idx = src_off + i * ms + j;
                                let dst_idx = dst_off + i_up * ms + j;
                                let cur = d.get(dst_idx, src_idx).clone();
                                d.set(dst_idx, src_idx, ring.add(&cur, &signed));
                            }
                        }
                    }
                }
            }
            differentials.push(d);
        }
        ChainComplex::new(ring, n_min, ranks, differentials)
    }
}

/// One block `Hom(C_s, M_{s+n})` inside `Hom(C, M)_n`.
#[derive(Clone, Copy, Debug)]
pub struct HomBlock {
    pub source_degree: i64,
    pub offset: usize,
    pub size: usize,
}

/// Block layout of `Hom(C, M)_n`: for each source degree `s` of `C` in
/// ascending order, the starting coordinate and size of the block of maps
/// `C_s → M_{s+n}` (coordinate `(i, j) ↦ offset + i*rank(M_{s+n}) + j`).
pub fn hom_block_layout(c: &ChainComplex, m: &ChainComplex, n: i64) -> Vec<HomBlock> {
    let (c_min, c_max) = c.degree_range();
    let mut blocks = Vec::new();
    let mut total = 0usize;
    for s in c_min..=c_max {
        let size = c.rank(s) * m.rank(s + n);
        blocks.push(HomBlock { source_degree: s, offset: total, size });
        total += size;
    }
    blocks
}
