//! Strictly filtered chain complexes: validation, associated gradeds,
//! interval gradeds with residual filtration, standard filtration
//! generators, and the induced filtration on homology.
//!
//! A filtration is decreasing: `F^{s+1} ⊆ F^s`, with `F^s = M` below the
//! first breakpoint (exhaustive) and, above the last breakpoint, either zero
//! (complete) or constant at the last step. Steps are genuine submodule
//! spans, so strictness is automatic.

use crate::complexes::ChainComplex;
use crate::exact_linalg::{
    intersect_spans, is_saturated, preimage_span, solve_matrix, span_basis, span_contains_span,
    spans_equal, subquotient, sum_spans, ExactMatrix, FgModule, Ring, Subquotient,
};
use crate::{Error, Result};

/// Behavior of the filtration above the largest breakpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailHigh {
    /// `F^s = 0` for `s` beyond the last breakpoint (complete).
    Zero,
    /// `F^s` stays at the last step (e.g. the constant filtration).
    Constant,
}

/// A violation reported by [`FilteredComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `F^{s+1} ⊄ F^s` at the given weight and degree.
    Nesting { weight: i64, degree: i64 },
    /// `d(F^s M_n) ⊄ F^s M_{n-1}`.
    DCompat { weight: i64, degree: i64 },
    /// Over the integers: the step span is not saturated, so graded pieces
    /// of the flag carry torsion. Pages and décalage still work (they only
    /// take subquotients); free graded presentations do not.
    Saturation { weight: i64, degree: i64 },
    /// `d∘d ≠ 0` out of the given degree.
    ComplexLaw { degree: i64 },
}

impl Violation {
    /// Saturation failures do not block the subquotient-based machinery.
    pub fn blocks_pages(&self) -> bool {
        !matches!(self, Violation::Saturation { .. })
    }
}

/// A bounded strictly filtered chain complex. Step spans are stored densely
/// for every integer weight in the breakpoint window.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    complex: ChainComplex,
    /// First weight of the dense window; the window is
    /// `first_weight ..= first_weight + steps.len() - 1`.
    first_weight: i64,
    /// `steps[i][j]`: column span of `F^{first_weight+i} M_{n_min+j}`.
    steps: Vec<Vec<ExactMatrix>>,
    tail_high: TailHigh,
}

impl FilteredComplex {
    /// Build from explicit breakpoints and a step table. `step(s, n)` gives
    /// the span at breakpoint `s`, degree `n`; weights between breakpoints
    /// take the value at the largest breakpoint below.
    pub fn new(
        complex: ChainComplex,
        breakpoints: &[i64],
        step: impl Fn(i64, i64) -> ExactMatrix,
        tail_high: TailHigh,
    ) -> Result<Self> {
        let mut bps: Vec<i64> = breakpoints.to_vec();
        bps.sort_unstable();
        bps.dedup();
        if bps.is_empty() {
            return Ok(Self::constant(complex));
        }
        let first = bps[0];
        let last = *bps.last().unwrap();
        let (n_min, n_max) = complex.degree_range();
        let mut steps = Vec::new();
        for s in first..=last {
            let at = *bps.iter().filter(|&&b| b <= s).max().unwrap();
            let mut row = Vec::new();
            for n in n_min..=n_max {
                let m = step(at, n);
                if m.rows() != complex.rank(n) {
                    return Err(Error::Shape(format!(
                        "step at weight {at}, degree {n} has {} rows, expected {}",
                        m.rows(),
                        complex.rank(n)
                    )));
                }
                if m.ring() != complex.ring() {
                    return Err(Error::RingMismatch(complex.ring(), m.ring()));
                }
                row.push(span_basis(&m));
            }
            steps.push(row);
        }
        Ok(FilteredComplex { complex, first_weight: first, steps, tail_high })
    }

    /// The constant filtration: every `F^s` is the whole complex.
    pub fn constant(complex: ChainComplex) -> Self {
        let ring = complex.ring();
        let (n_min, n_max) = complex.degree_range();
        let row: Vec<ExactMatrix> =
            (n_min..=n_max).map(|n| ExactMatrix::identity(ring, complex.rank(n))).collect();
        FilteredComplex { complex, first_weight: 0, steps: vec![row], tail_high: TailHigh::Constant }
    }

    /// The insertion filtration `ins^{s0}`: full for `s ≤ s0`, zero above.
    pub fn insert(complex: ChainComplex, s0: i64) -> Self {
        let ring = complex.ring();
        let (n_min, n_max) = complex.degree_range();
        let row: Vec<ExactMatrix> =
            (n_min..=n_max).map(|n| ExactMatrix::zeros(ring, complex.rank(n), 0)).collect();
        FilteredComplex {
            complex,
            first_weight: s0 + 1,
            steps: vec![row],
            tail_high: TailHigh::Zero,
        }
    }

    /// The stupid filtration of a cochain complex (stored homologically with
    /// negated degrees): `σ^s` keeps the terms of cohomological degree
    /// `≥ s`, i.e. homological degree `≤ -s`.
    pub fn stupid(complex: ChainComplex) -> Self {
        let ring = complex.ring();
        let (n_min, n_max) = complex.degree_range();
        if complex.is_zero() {
            return Self::constant(complex);
        }
        let bps: Vec<i64> = (-n_max..=(-n_min + 1)).collect();
        Self::new(
            complex.clone(),
            &bps,
            |s, n| {
                if n <= -s {
                    ExactMatrix::identity(ring, complex.rank(n))
                } else {
                    ExactMatrix::zeros(ring, complex.rank(n), 0)
                }
            },
            TailHigh::Zero,
        )
        .expect("stupid filtration is well formed")
    }

    /// The Whitehead filtration `F^s = τ_{≥s} C` as a subcomplex: full above
    /// degree `s`, cycles in degree `s`, zero below.
    pub fn whitehead(complex: ChainComplex) -> Self {
        let ring = complex.ring();
        let (n_min, n_max) = complex.degree_range();
        if complex.is_zero() {
            return Self::constant(complex);
        }
        let bps: Vec<i64> = (n_min..=(n_max + 1)).collect();
        Self::new(
            complex.clone(),
            &bps,
            |s, n| {
                if n > s {
                    ExactMatrix::identity(ring, complex.rank(n))
                } else if n == s {
                    complex.cycle_span(n)
                } else {
                    ExactMatrix::zeros(ring, complex.rank(n), 0)
                }
            },
            TailHigh::Zero,
        )
        .expect("whitehead filtration is well formed")
    }

    /// Assemble directly from a dense window (internal constructor for
    /// décalage and friends).
    pub(crate) fn from_dense(
        complex: ChainComplex,
        first_weight: i64,
        steps: Vec<Vec<ExactMatrix>>,
        tail_high: TailHigh,
    ) -> Self {
        let mut f = FilteredComplex { complex, first_weight, steps, tail_high };
        f.trim();
        f
    }

    /// Drop redundant window rows: leading rows equal to the full complex
    /// and trailing rows equal to the tail value.
    fn trim(&mut self) {
        let (n_min, n_max) = self.complex.degree_range();
        let full_row = |row: &[ExactMatrix]| -> bool {
            (n_min..=n_max).zip(row.iter()).all(|(n, m)| {
                let id = ExactMatrix::identity(self.complex.ring(), self.complex.rank(n));
                span_contains_span(m, &id)
            })
        };
        while self.steps.len() > 1 && full_row(&self.steps[0]) && full_row(&self.steps[1]) {
            self.steps.remove(0);
            self.first_weight += 1;
        }
        match self.tail_high {
            TailHigh::Zero => {
                while self.steps.len() > 1
                    && self.steps.last().unwrap().iter().all(|m| m.cols() == 0)
                    && self.steps[self.steps.len() - 2].iter().all(|m| m.cols() == 0)
                {
                    self.steps.pop();
                }
            }
            TailHigh::Constant => {
                while self.steps.len() > 1 {
                    let last = &self.steps[self.steps.len() - 1];
                    let prev = &self.steps[self.steps.len() - 2];
                    if last.iter().zip(prev.iter()).all(|(a, b)| spans_equal(a, b)) {
                        self.steps.pop();
                    } else {
                        break;
                    }
                }
            }
        }
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn ring(&self) -> Ring {
        self.complex.ring()
    }

    pub fn tail_high(&self) -> TailHigh {
        self.tail_high
    }

    /// The dense breakpoint window (inclusive).
    pub fn breakpoints(&self) -> Vec<i64> {
        (self.first_weight..self.first_weight + self.steps.len() as i64).collect()
    }

    pub fn first_breakpoint(&self) -> i64 {
        self.first_weight
    }

    pub fn last_breakpoint(&self) -> i64 {
        self.first_weight + self.steps.len() as i64 - 1
    }

    /// Inclusive weight range outside of which every graded piece vanishes.
    pub fn weight_support(&self) -> (i64, i64) {
        let lo = self.first_weight - 1;
        let hi = match self.tail_high {
            TailHigh::Zero => self.last_breakpoint(),
            TailHigh::Constant => self.last_breakpoint() - 1,
        };
        (lo, hi)
    }

    /// Column span of `F^s M_n`, honoring tail semantics.
    pub fn step_span(&self, s: i64, n: i64) -> ExactMatrix {
        let ring = self.ring();
        let rank = self.complex.rank(n);
        if rank == 0 {
            return ExactMatrix::zeros(ring, 0, 0);
        }
        let (n_min, _) = self.complex.degree_range();
        if s < self.first_weight {
            return ExactMatrix::identity(ring, rank);
        }
        let idx = (s - self.first_weight) as usize;
        if idx < self.steps.len() {
            return self.steps[idx][(n - n_min) as usize].clone();
        }
        match self.tail_high {
            TailHigh::Zero => ExactMatrix::zeros(ring, rank, 0),
            TailHigh::Constant => self.steps.last().unwrap()[(n - n_min) as usize].clone(),
        }
    }

    /// All structural violations: nesting, differential compatibility,
    /// saturation (integers only), and the complex law. Empty means the
    /// filtration is strict, compatible, and saturated.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let (n_min, n_max) = self.complex.degree_range();
        for n in n_min..n_max {
            let d = self.complex.differential(n + 1);
            let dd = self.complex.differential(n + 2);
            let prod = d.mul(&dd).expect("complex shapes");
            if !prod.is_zero() {
                out.push(Violation::ComplexLaw { degree: n + 2 });
            }
        }
        let lo = self.first_weight - 1;
        let hi = self.last_breakpoint() + 1;
        for s in lo..=hi {
            for n in n_min..=n_max {
                let cur = self.step_span(s, n);
                let next = self.step_span(s + 1, n);
                if !span_contains_span(&cur, &next) {
                    out.push(Violation::Nesting { weight: s, degree: n });
                }
                if n > n_min {
                    let d = self.complex.differential(n);
                    let image = d.mul(&cur).expect("shapes");
                    let target = self.step_span(s, n - 1);
                    if !span_contains_span(&target, &image) {
                        out.push(Violation::DCompat { weight: s, degree: n });
                    }
                }
                if s >= self.first_weight && s <= self.last_breakpoint() && !is_saturated(&cur) {
                    out.push(Violation::Saturation { weight: s, degree: n });
                }
            }
        }
        out
    }

    /// Violations that block the page machinery (everything except
    /// saturation, which subquotients tolerate).
    pub fn page_blocking_violations(&self) -> Vec<Violation> {
        self.validate().into_iter().filter(Violation::blocks_pages).collect()
    }

    pub fn ensure_valid_for_pages(&self) -> Result<()> {
        let v = self.page_blocking_violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidFiltration(v))
        }
    }

    /// The graded piece `gr^s M_n = F^s M_n / F^{s+1} M_n` as an
    /// isomorphism class (tolerates non-saturated flags).
    pub fn graded_module(&self, s: i64, n: i64) -> FgModule {
        let rank = self.complex.rank(n);
        if rank == 0 {
            return FgModule::zero(self.ring());
        }
        subquotient(rank, &self.step_span(s, n), &self.step_span(s + 1, n))
            .expect("graded spans share the ambient module")
    }

    /// Whether every graded piece of the flag is free (always true over a
    /// field; over the integers requires saturated steps).
    pub fn has_free_gradeds(&self) -> bool {
        self.validate().iter().all(|v| !matches!(v, Violation::Saturation { .. }))
    }

    /// The graded piece `gr^s = F^s/F^{s+1}` presented as a chain complex on
    /// a free basis, with generator lifts into the ambient complex.
    pub fn graded_piece(&self, s: i64) -> Result<GradedPiece> {
        self.quotient_complex_with(|n| self.step_span(s, n), |n| self.step_span(s + 1, n), s)
    }

    /// The interval graded `gr^{[i,j)} = F^i/F^j` (with `j = None` meaning
    /// `F^∞`, i.e. the high tail) carrying the residual filtration whose
    /// graded pieces are `gr^a` for `i ≤ a < j` and zero outside.
    pub fn interval_graded(&self, i: i64, j: Option<i64>) -> Result<FilteredComplex> {
        if let Some(j) = j {
            if i > j {
                return Err(Error::BadInterval(i, Some(j)));
            }
        }
        let j_eff = match j {
            Some(j) => j,
            None => self.last_breakpoint() + 1,
        };
        let j_span = |n: i64| match j {
            Some(j) => self.step_span(j, n),
            None => match self.tail_high {
                TailHigh::Zero => ExactMatrix::zeros(self.ring(), self.complex.rank(n), 0),
                TailHigh::Constant => self.step_span(self.last_breakpoint(), n),
            },
        };
        let piece = self.quotient_complex_with(|n| self.step_span(i, n), j_span, i)?;
        let (n_min, n_max) = self.complex.degree_range();
        // Residual steps: the image of F^a in the quotient, for i ≤ a ≤ j.
        let mut steps = Vec::new();
        for a in i..=j_eff {
            let mut row = Vec::new();
            for n in n_min..=n_max {
                let idx = (n - n_min) as usize;
                let witness = &piece.witnesses[idx];
                let fa = sum_spans(&self.step_span(a.min(j_eff), n), &j_span(n));
                let basis = witness.generator_lift();
                let denom = &witness.denominator;
                // Coordinates of F^a + F^j in the quotient basis.
                let mix = basis.hcat(denom).expect("ambient");
                let sol = solve_matrix(&mix, &fa)
                    .expect("F^a lies in F^i, hence has quotient coordinates");
                let top: Vec<usize> = (0..basis.cols()).collect();
                row.push(span_basis(&sol.select_rows(&top)));
            }
            steps.push(row);
        }
        Ok(FilteredComplex::from_dense(piece.complex, i, steps, TailHigh::Zero))
    }

    /// Present the quotient of the subcomplex `big` by `small` on a free
    /// basis. Fails with `NotSaturated` over the integers when the quotient
    /// has torsion in some degree.
    fn quotient_complex_with(
        &self,
        big: impl Fn(i64) -> ExactMatrix,
        small: impl Fn(i64) -> ExactMatrix,
        weight_for_error: i64,
    ) -> Result<GradedPiece> {
        let ring = self.ring();
        let (n_min, n_max) = self.complex.degree_range();
        let mut witnesses = Vec::new();
        let mut ranks = Vec::new();
        for n in n_min..=n_max {
            let sq = Subquotient::new(self.complex.rank(n), &big(n), &small(n))?;
            if !sq.module.invariant_factors.is_empty() {
                return Err(Error::NotSaturated { weight: weight_for_error, degree: n });
            }
            ranks.push(sq.module.free_rank);
            witnesses.push(sq);
        }
        let mut differentials = Vec::new();
        for n in (n_min + 1)..=n_max {
            let idx = (n - n_min) as usize;
            let src = &witnesses[idx];
            let dst = &witnesses[idx - 1];
            let d = self.complex.differential(n);
            let m = src.induced_matrix(dst, Some(&d)).map_err(|_| {
                Error::InvalidFiltration(vec![Violation::DCompat {
                    weight: weight_for_error,
                    degree: n,
                }])
            })?;
            differentials.push(m);
        }
        let complex = ChainComplex::new(ring, n_min, ranks, differentials)?;
        Ok(GradedPiece { complex, witnesses, min_degree: n_min })
    }

    /// The induced filtration on `H_n`: step `s` is the image of
    /// `H_n(F^s) → H_n(M)`, a strict filtration by construction.
    pub fn induced_homology_filtration(&self, n: i64) -> FilteredFgModule {
        let rank = self.complex.rank(n);
        let ring = self.ring();
        let cycles = self.complex.cycle_span(n);
        let boundaries = self.complex.boundary_span(n);
        let total = subquotient(rank, &cycles, &boundaries).expect("homology spans");
        let (lo, hi) = self.weight_support();
        let mut weights = Vec::new();
        let mut step_cycles = Vec::new();
        let mut steps = Vec::new();
        for s in lo..=(hi + 1) {
            let fs_cycles = intersect_spans(&self.step_span(s, n), &cycles);
            let module = subquotient(rank, &fs_cycles, &boundaries).expect("homology spans");
            weights.push(s);
            step_cycles.push(fs_cycles);
            steps.push(module);
        }
        FilteredFgModule {
            ambient_rank: rank,
            ring,
            total,
            cycle_span: cycles,
            boundary_span: boundaries,
            weights,
            step_cycle_spans: step_cycles,
            steps,
            tail_high: self.tail_high,
        }
    }

    /// Componentwise direct sum of two filtrations with matching tails.
    pub fn direct_sum(&self, other: &FilteredComplex) -> Result<FilteredComplex> {
        if self.tail_high != other.tail_high {
            return Err(Error::Other("direct sum needs matching tail semantics".into()));
        }
        let complex = self.complex.direct_sum(&other.complex)?;
        if self.complex.is_zero() {
            return Ok(other.clone());
        }
        if other.complex.is_zero() {
            return Ok(self.clone());
        }
        let ring = complex.ring();
        let (n_min, n_max) = complex.degree_range();
        let lo = self.first_weight.min(other.first_weight);
        let hi = self.last_breakpoint().max(other.last_breakpoint());
        let mut steps = Vec::new();
        for s in lo..=hi {
            let mut row = Vec::new();
            for n in n_min..=n_max {
                let a = self.step_span(s, n);
                let b = other.step_span(s, n);
                let rows = self.complex.rank(n) + other.complex.rank(n);
                let mut block = ExactMatrix::zeros(ring, rows, a.cols() + b.cols());
                for i in 0..a.rows() {
                    for j in 0..a.cols() {
                        block.set(i, j, a.get(i, j).clone());
                    }
                }
                for i in 0..b.rows() {
                    for j in 0..b.cols() {
                        block.set(self.complex.rank(n) + i, a.cols() + j, b.get(i, j).clone());
                    }
                }
                row.push(span_basis(&block));
            }
            steps.push(row);
        }
        Ok(FilteredComplex::from_dense(complex, lo, steps, self.tail_high))
    }

    /// Exact span equality of two filtrations on the same complex.
    pub fn spans_equal_to(&self, other: &FilteredComplex) -> bool {
        if self.complex != other.complex {
            return false;
        }
        let lo = self.first_weight.min(other.first_weight) - 1;
        let hi = self.last_breakpoint().max(other.last_breakpoint()) + 1;
        let (n_min, n_max) = self.complex.degree_range();
        for s in lo..=hi {
            for n in n_min..=n_max {
                if !spans_equal(&self.step_span(s, n), &other.step_span(s, n)) {
                    return false;
                }
            }
        }
        true
    }

    /// The span `{x ∈ F^p M_n : d x ∈ F^q M_{n-1}}` — the workhorse for
    /// cycles, décalage, and interval homology.
    pub fn cycles_into(&self, p: i64, q: i64, n: i64) -> ExactMatrix {
        let fp = self.step_span(p, n);
        let (n_min, _) = self.complex.degree_range();
        if n <= n_min || self.complex.rank(n) == 0 {
            return fp;
        }
        let d = self.complex.differential(n);
        let fq = self.step_span(q, n - 1);
        intersect_spans(&fp, &preimage_span(&d, &fq))
    }
}

/// A graded or quotient piece rebased onto a free basis, remembering how
/// each degree sits inside the ambient module.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub complex: ChainComplex,
    pub witnesses: Vec<Subquotient>,
    min_degree: i64,
}

impl GradedPiece {
    pub fn witness(&self, n: i64) -> &Subquotient {
        &self.witnesses[(n - self.min_degree) as usize]
    }
}

/// A finitely generated module with a strict filtration by submodule images:
/// the induced filtration on homology.
#[derive(Clone, Debug)]
pub struct FilteredFgModule {
    pub ambient_rank: usize,
    pub ring: Ring,
    pub total: FgModule,
    pub cycle_span: ExactMatrix,
    pub boundary_span: ExactMatrix,
    pub weights: Vec<i64>,
    pub step_cycle_spans: Vec<ExactMatrix>,
    pub steps: Vec<FgModule>,
    tail_high: TailHigh,
}

impl FilteredFgModule {
    fn cycle_span_at(&self, s: i64) -> ExactMatrix {
        if self.weights.is_empty() || s < self.weights[0] {
            return self.cycle_span.clone();
        }
        if s > *self.weights.last().unwrap() {
            return match self.tail_high {
                TailHigh::Zero => ExactMatrix::zeros(self.ring, self.ambient_rank, 0),
                TailHigh::Constant => self.step_cycle_spans.last().unwrap().clone(),
            };
        }
        self.step_cycle_spans[(s - self.weights[0]) as usize].clone()
    }

    /// `F^s H_n` as an isomorphism class.
    pub fn step(&self, s: i64) -> FgModule {
        subquotient(self.ambient_rank, &self.cycle_span_at(s), &self.boundary_span)
            .expect("spans share ambient")
    }

    /// `gr^s = F^s H_n / F^{s+1} H_n` as an isomorphism class.
    pub fn graded(&self, s: i64) -> FgModule {
        let num = self.cycle_span_at(s);
        let den = sum_spans(&self.cycle_span_at(s + 1), &self.boundary_span);
        subquotient(self.ambient_rank, &num, &den).expect("spans share ambient")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num::BigInt;

    fn zm(rows: usize, cols: usize, e: &[i64]) -> ExactMatrix {
        ExactMatrix::from_i64(Ring::Integers, rows, cols, e)
    }

    #[test]
    fn generators_validate_clean() {
        let c = fixtures::rp2_cellular(Ring::Integers);
        for f in [
            FilteredComplex::stupid(c.clone()),
            FilteredComplex::whitehead(c.clone()),
            FilteredComplex::constant(c.clone()),
            FilteredComplex::insert(c, 0),
        ] {
            assert!(f.validate().is_empty(), "violations: {:?}", f.validate());
        }
        assert!(fixtures::toy_d2().validate().is_empty());
    }

    #[test]
    fn nesting_violation_detected() {
        // F^1 ⊄ F^0 in degree 0.
        let c = ChainComplex::concentrated(Ring::Integers, 0, 2);
        let f = FilteredComplex::new(
            c,
            &[0, 1, 2],
            |s, _n| match s {
                0 => zm(2, 1, &[1, 0]),
                1 => zm(2, 1, &[0, 1]),
                _ => zm(2, 0, &[]),
            },
            TailHigh::Zero,
        )
        .unwrap();
        let v = f.validate();
        assert!(v.iter().any(|x| matches!(x, Violation::Nesting { weight: 0, degree: 0 })));
    }

    #[test]
    fn d_compat_violation_detected() {
        // d(a) = b but F^1 contains a and not b.
        let c = ChainComplex::new(Ring::Integers, 0, vec![1, 1], vec![zm(1, 1, &[1])]).unwrap();
        let f = FilteredComplex::new(
            c,
            &[1, 2],
            |s, n| match (s, n) {
                (1, 1) => zm(1, 1, &[1]),
                _ => zm(1, 0, &[]),
            },
            TailHigh::Zero,
        )
        .unwrap();
        let v = f.validate();
        assert!(v.iter().any(|x| matches!(x, Violation::DCompat { weight: 1, degree: 1 })));
    }

    #[test]
    fn padic_graded_pieces_are_z_mod_p() {
        let f = fixtures::truncated_padic(3, 3);
        // gr^s = Z/3 for 0 ≤ s < 3 and Z at s = 3 (F^3 = 27Z, F^4 = 0).
        for s in 0..3 {
            let g = f.graded_module(s, 0);
            assert_eq!(g.free_rank, 0);
            assert_eq!(g.invariant_factors, vec![BigInt::from(3)]);
        }
        assert_eq!(f.graded_module(3, 0), FgModule::free(Ring::Integers, 1));
        assert_eq!(f.graded_module(-1, 0), FgModule::zero(Ring::Integers));
        // The flag is not saturated, which validate reports and pages ignore.
        assert!(!f.has_free_gradeds());
        assert!(f.page_blocking_violations().is_empty());
        assert!(f.graded_piece(1).is_err());
    }

    #[test]
    fn stupid_filtration_gradeds() {
        // Cochain complex Z -> Z in cohomological degrees 0, 1: stored in
        // homological degrees 0, -1.
        let c = ChainComplex::new(Ring::Integers, -1, vec![1, 1], vec![zm(1, 1, &[2])]).unwrap();
        let f = FilteredComplex::stupid(c);
        // gr^0 = M^0 in homological degree 0; gr^1 = M^1 in degree -1.
        let g0 = f.graded_piece(0).unwrap();
        assert_eq!(g0.complex.rank(0), 1);
        assert_eq!(g0.complex.rank(-1), 0);
        let g1 = f.graded_piece(1).unwrap();
        assert_eq!(g1.complex.rank(-1), 1);
        assert_eq!(g1.complex.rank(0), 0);
        assert!(f.validate().is_empty());
    }

    #[test]
    fn constant_filtration_has_zero_gradeds() {
        let c = fixtures::rp2_cellular(Ring::Integers);
        let f = FilteredComplex::constant(c);
        for s in -3..4 {
            for n in 0..3 {
                assert!(f.graded_module(s, n).is_zero());
            }
        }
    }

    #[test]
    fn whitehead_gradeds_concentrate_homology() {
        let c = ChainComplex::new(Ring::Integers, 0, vec![1, 1], vec![zm(1, 1, &[2])]).unwrap();
        let f = FilteredComplex::whitehead(c.clone());
        assert!(f.validate().is_empty());
        for s in -1..3 {
            let g = f.graded_piece(s).unwrap();
            for n in 0..2 {
                if n == s {
                    assert_eq!(g.complex.homology(n), c.homology(n), "H_{n} of gr^{s}");
                } else {
                    assert!(g.complex.homology(n).is_zero(), "gr^{s} has H_{n} = 0");
                }
            }
        }
    }

    #[test]
    fn interval_graded_basics() {
        let f = fixtures::toy_d2();
        // gr^{[i,i)} = 0.
        let empty = f.interval_graded(1, Some(1)).unwrap();
        assert!(empty.complex().is_zero());
        // gr^{[i,i+1)} = gr^i, degreewise.
        for i in 0..3 {
            let iv = f.interval_graded(i, Some(i + 1)).unwrap();
            let g = f.graded_piece(i).unwrap();
            for n in 0..2 {
                assert_eq!(iv.complex().homology(n), g.complex.homology(n));
            }
        }
        // gr^{[0,3)} of toy-d2 is the whole complex.
        let whole = f.interval_graded(0, Some(3)).unwrap();
        assert_eq!(whole.complex().rank(0), 1);
        assert_eq!(whole.complex().rank(1), 1);
        for n in 0..2 {
            assert_eq!(whole.complex().homology(n), f.complex().homology(n));
        }
        // Residual gradeds match the original.
        for a in -1..4 {
            for n in 0..2 {
                assert_eq!(whole.graded_module(a, n), f.graded_module(a, n), "a={a} n={n}");
            }
        }
        // Reversed interval is an error.
        assert!(f.interval_graded(2, Some(1)).is_err());
    }

    #[test]
    fn interval_graded_residual_window() {
        let f = fixtures::toy_d2();
        let iv = f.interval_graded(1, Some(3)).unwrap();
        for n in 0..2 {
            for a in -1..5 {
                let expected = if (1..3).contains(&a) {
                    f.graded_module(a, n)
                } else {
                    FgModule::zero(Ring::Integers)
                };
                assert_eq!(iv.graded_module(a, n), expected, "a={a} n={n}");
            }
        }
        assert!(iv.validate().is_empty());
    }

    #[test]
    fn interval_graded_unbounded_end() {
        // gr^{[i,∞)} with a zero tail is F^i itself, rebased.
        let f = fixtures::toy_d2();
        let iv = f.interval_graded(1, None).unwrap();
        for a in -1..5 {
            for n in 0..2 {
                let expected = if a >= 1 { f.graded_module(a, n) } else { FgModule::zero(Ring::Integers) };
                assert_eq!(iv.graded_module(a, n), expected, "a={a} n={n}");
            }
        }
        // With a constant tail the interval quotients out the limit value.
        let c = fixtures::rp2_cellular(Ring::Integers);
        let constant = FilteredComplex::constant(c);
        let iv = constant.interval_graded(0, None).unwrap();
        assert!(iv.complex().is_zero());
    }

    #[test]
    fn induced_homology_filtration_padic() {
        let f = fixtures::truncated_padic(2, 2);
        let ind = f.induced_homology_filtration(0);
        assert_eq!(ind.total, FgModule::free(Ring::Integers, 1));
        assert_eq!(ind.step(0), FgModule::free(Ring::Integers, 1));
        assert_eq!(ind.step(1), FgModule::free(Ring::Integers, 1)); // pZ ≅ Z
        assert_eq!(ind.graded(0).invariant_factors, vec![BigInt::from(2)]);
        assert_eq!(ind.step(3), FgModule::zero(Ring::Integers));
    }

    #[test]
    fn induced_homology_filtration_constant() {
        let c = fixtures::rp2_cellular(Ring::Integers);
        let f = FilteredComplex::constant(c.clone());
        for n in 0..3 {
            let ind = f.induced_homology_filtration(n);
            for s in -2..3 {
                assert_eq!(ind.step(s), c.homology(n));
            }
        }
    }

    #[test]
    fn induced_homology_filtration_toy_d2_is_zero() {
        let f = fixtures::toy_d2();
        for n in 0..2 {
            let ind = f.induced_homology_filtration(n);
            assert!(ind.total.is_zero());
            for s in -1..4 {
                assert!(ind.step(s).is_zero());
            }
        }
    }

    #[test]
    fn tail_semantics() {
        let f = fixtures::toy_d2();
        // Below the first breakpoint: full module.
        assert_eq!(f.step_span(-10, 1).cols(), 1);
        // Above the last: zero.
        assert_eq!(f.step_span(10, 1).cols(), 0);
        let c = fixtures::rp2_cellular(Ring::Integers);
        let g = FilteredComplex::constant(c);
        assert_eq!(g.step_span(100, 2).cols(), 1);
    }
}
