//! Span calculus. A "span" is the column span of a matrix: a subspace over
//! a field, a sublattice over the integers. Canonical bases make span
//! equality a matrix comparison: column-style Hermite normal form over the
//! integers, reduced column echelon form over fields. Kernels over the
//! integers are saturated (they are genuine lattice kernels), while
//! preimages of non-saturated spans are the honest preimage lattices.

use super::matrix::ExactMatrix;
use super::ring::{Ring, Scalar};
use super::snf::{smith_normal_form, SmithNormalForm};
use num::{BigInt, Integer, Signed, Zero};

/// Canonical basis of the column span. Zero columns are dropped; the result
/// depends only on the span, so equal spans produce equal matrices.
pub fn span_basis(a: &ExactMatrix) -> ExactMatrix {
    let mut rows = transpose_rows(a);
    match a.ring() {
        Ring::Integers => row_hermite(&mut rows, a.cols()),
        _ => row_rref(a.ring(), &mut rows, a.cols()),
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let cols: Vec<Vec<Scalar>> = rows;
    let mut m = ExactMatrix::zeros(a.ring(), a.rows(), cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            m.set(i, j, v.clone());
        }
    }
    m
}

fn transpose_rows(a: &ExactMatrix) -> Vec<Vec<Scalar>> {
    (0..a.cols()).map(|j| a.column(j)).collect()
}

/// In-place integer row Hermite normal form with positive pivots and
/// off-pivot entries reduced into `[0, pivot)`.
fn row_hermite(rows: &mut [Vec<Scalar>], _n: usize) {
    if rows.is_empty() {
        return;
    }
    let width = rows[0].len();
    let mut r = 0;
    for c in 0..width {
        if r >= rows.len() {
            break;
        }
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for (i, row) in rows.iter().enumerate().skip(r) {
                if !row[c].is_zero() {
                    let m = row[c].numer().abs();
                    if best.as_ref().is_none_or(|(_, b)| &m < b) {
                        best = Some((i, m));
                    }
                }
            }
            let Some((pi, _)) = best else { break };
            rows.swap(r, pi);
            let mut dirty = false;
            let pivot = rows[r][c].numer().clone();
            for i in (r + 1)..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].numer() / &pivot;
                if !q.is_zero() {
                    let q = Scalar::from(q);
                    for k in 0..width {
                        let sub = &rows[r][k] * &q;
                        rows[i][k] = &rows[i][k] - sub;
                    }
                }
                dirty |= !rows[i][c].is_zero();
            }
            if !dirty {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].numer().is_negative() {
            for k in 0..width {
                rows[r][k] = -rows[r][k].clone();
            }
        }
        // Reduce the entries above the pivot into [0, pivot).
        let pivot = rows[r][c].numer().clone();
        for i in 0..r {
            if rows[i][c].is_zero() {
                continue;
            }
            let q = rows[i][c].numer().div_floor(&pivot);
            if !q.is_zero() {
                let q = Scalar::from(q);
                for k in 0..width {
                    let sub = &rows[r][k] * &q;
                    rows[i][k] = &rows[i][k] - sub;
                }
            }
        }
        r += 1;
    }
}

/// In-place reduced row echelon form over a field.
fn row_rref(ring: Ring, rows: &mut [Vec<Scalar>], _n: usize) {
    if rows.is_empty() {
        return;
    }
    let width = rows[0].len();
    let mut r = 0;
    for c in 0..width {
        if r >= rows.len() {
            break;
        }
        let Some(pi) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, pi);
        let inv = ring.inv(&rows[r][c]).expect("nonzero field element");
        for k in 0..width {
            rows[r][k] = ring.mul(&rows[r][k], &inv);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c].clone();
            for k in 0..width {
                let sub = ring.mul(&factor, &rows[r][k]);
                rows[i][k] = ring.sub(&rows[i][k], &sub);
            }
        }
        r += 1;
    }
}

/// Basis of `ker(A)` as columns. Over the integers this is a basis of the
/// full kernel lattice, hence saturated; over fields an ordinary basis.
pub fn kernel_basis(a: &ExactMatrix) -> ExactMatrix {
    let s = smith_normal_form(a);
    let idx: Vec<usize> = (s.rank..a.cols()).collect();
    span_basis(&s.v.select_cols(&idx))
}

/// An exact linear solver for repeated right-hand sides against one matrix.
pub struct Solver {
    snf: SmithNormalForm,
    ring: Ring,
    cols: usize,
}

impl Solver {
    pub fn new(a: &ExactMatrix) -> Self {
        Solver { snf: smith_normal_form(a), ring: a.ring(), cols: a.cols() }
    }

    /// One exact solution of `A x = b`, if any.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let c = self.snf.u.mul_vec(b).expect("rhs length matches");
        let mut y = vec![Scalar::zero(); self.cols];
        let diag_len = self.snf.d.rows().min(self.snf.d.cols());
        for (i, ci) in c.iter().enumerate() {
            if i < diag_len {
                let d = self.snf.d.get(i, i);
                if d.is_zero() {
                    if !ci.is_zero() {
                        return None;
                    }
                } else {
                    y[i] = self.ring.div_exact(ci, d)?;
                }
            } else if !ci.is_zero() {
                return None;
            }
        }
        Some(self.snf.v.mul_vec(&y).expect("length matches"))
    }

    pub fn is_solvable(&self, b: &[Scalar]) -> bool {
        self.solve(b).is_some()
    }
}

/// One exact solution of `A x = b` over the ring, if any.
pub fn solve(a: &ExactMatrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    Solver::new(a).solve(b)
}

/// Solve `A X = B` column-wise; `None` if any column has no solution.
pub fn solve_matrix(a: &ExactMatrix, b: &ExactMatrix) -> Option<ExactMatrix> {
    let solver = Solver::new(a);
    let mut cols = Vec::with_capacity(b.cols());
    for j in 0..b.cols() {
        cols.push(solver.solve(&b.column(j))?);
    }
    Some(ExactMatrix::from_columns(a.ring(), a.cols(), &cols).expect("solution shape"))
}

/// Does `v` lie in the column span of `a`?
pub fn span_contains(a: &ExactMatrix, v: &[Scalar]) -> bool {
    solve(a, v).is_some()
}

/// Is every column of `b` in the span of `a`?
pub fn span_contains_span(a: &ExactMatrix, b: &ExactMatrix) -> bool {
    let solver = Solver::new(a);
    (0..b.cols()).all(|j| solver.is_solvable(&b.column(j)))
}

pub fn spans_equal(a: &ExactMatrix, b: &ExactMatrix) -> bool {
    span_basis(a) == span_basis(b)
}

/// Canonical basis of `span(a) + span(b)`.
pub fn sum_spans(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    span_basis(&a.hcat(b).expect("ambient ranks match"))
}

/// Canonical basis of `span(a) ∩ span(b)`.
pub fn intersect_spans(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let stacked = a.hcat(&b.neg()).expect("ambient ranks match");
    let k = kernel_basis(&stacked);
    let top: Vec<usize> = (0..a.cols()).collect();
    let coeffs = k.select_rows(&top);
    span_basis(&a.mul(&coeffs).expect("shape"))
}

/// Canonical generators of the preimage `{x : T x ∈ span(w)}`.
pub fn preimage_span(t: &ExactMatrix, w: &ExactMatrix) -> ExactMatrix {
    let stacked = t.hcat(&w.neg()).expect("target ranks match");
    let k = kernel_basis(&stacked);
    let top: Vec<usize> = (0..t.cols()).collect();
    span_basis(&k.select_rows(&top))
}

/// Over the integers, the saturation `(span ⊗ Q) ∩ Z^n`; over fields the
/// span itself.
pub fn saturate_span(a: &ExactMatrix) -> ExactMatrix {
    match a.ring() {
        Ring::Integers => {
            let s = smith_normal_form(a);
            let idx: Vec<usize> = (0..s.rank).collect();
            span_basis(&s.u_inv.select_cols(&idx))
        }
        _ => span_basis(a),
    }
}

/// Is the span saturated (equal to its saturation)?
pub fn is_saturated(a: &ExactMatrix) -> bool {
    match a.ring() {
        Ring::Integers => spans_equal(a, &saturate_span(a)),
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zm(rows: usize, cols: usize, e: &[i64]) -> ExactMatrix {
        ExactMatrix::from_i64(Ring::Integers, rows, cols, e)
    }

    #[test]
    fn kernel_examples() {
        // x + y = 0 over the integers: kernel is spanned by (1, -1).
        let a = zm(1, 2, &[1, 1]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 1);
        assert!(spans_equal(&k, &zm(2, 1, &[1, -1])));

        // Zero map on rank 3: kernel is everything.
        let z = ExactMatrix::zeros(Ring::Integers, 2, 3);
        assert!(spans_equal(&kernel_basis(&z), &ExactMatrix::identity(Ring::Integers, 3)));

        // Injective map: no kernel columns.
        let inj = zm(2, 1, &[1, 2]);
        assert_eq!(kernel_basis(&inj).cols(), 0);
    }

    #[test]
    fn saturated_kernels() {
        // ker of [2, -4] is spanned by (2, 1), which is saturated even
        // though (4, 2) also maps to zero "twice over".
        let a = zm(1, 2, &[2, -4]);
        let k = kernel_basis(&a);
        assert!(is_saturated(&k));
        assert!(span_contains(&k, &zm(2, 1, &[2, 1]).column(0)));
    }

    #[test]
    fn solve_over_rings() {
        let a = zm(2, 2, &[2, 0, 0, 3]);
        assert!(solve(&a, &zm(2, 1, &[4, 6]).column(0)).is_some());
        assert!(solve(&a, &zm(2, 1, &[1, 0]).column(0)).is_none());
        let aq = a.cast(Ring::Rationals).unwrap();
        assert!(solve(&aq, &zm(2, 1, &[1, 0]).cast(Ring::Rationals).unwrap().column(0)).is_some());
    }

    #[test]
    fn intersection_and_sum() {
        // span{(2,0)} ∩ span{(3,0)} = span{(6,0)} over Z.
        let a = zm(2, 1, &[2, 0]);
        let b = zm(2, 1, &[3, 0]);
        let i = intersect_spans(&a, &b);
        assert!(spans_equal(&i, &zm(2, 1, &[6, 0])));
        let s = sum_spans(&a, &b);
        assert!(spans_equal(&s, &zm(2, 1, &[1, 0])));
    }

    #[test]
    fn preimage_of_sublattice() {
        // T = [1, 0; 0, 1], W = span{(2,0)}: preimage = span{(2,0)} itself.
        let t = ExactMatrix::identity(Ring::Integers, 2);
        let w = zm(2, 1, &[2, 0]);
        let p = preimage_span(&t, &w);
        assert!(spans_equal(&p, &w));
        // T doubling: preimage of 2Z under x -> 2x is all of Z.
        let t2 = zm(1, 1, &[2]);
        let w2 = zm(1, 1, &[2]);
        assert!(spans_equal(&preimage_span(&t2, &w2), &ExactMatrix::identity(Ring::Integers, 1)));
    }

    #[test]
    fn saturation() {
        let a = zm(2, 1, &[2, 4]);
        let s = saturate_span(&a);
        assert!(spans_equal(&s, &zm(2, 1, &[1, 2])));
        assert!(!is_saturated(&a));
        assert!(is_saturated(&s));
    }

    #[test]
    fn canonical_bases_detect_equality() {
        // Same lattice, different generators.
        let a = zm(2, 2, &[1, 1, 0, 2]);
        let b = zm(2, 3, &[1, 2, 3, 2, 2, 4]);
        // span(b) contains (1,2),(2,2) => (1,0),(0,2) => lattice {(x,y): y even}... recompute:
        // b columns: (1,2),(2,2),(3,4). (2,2)-(1,2)=(1,0); (1,2)-(1,0)=(0,2).
        assert!(spans_equal(&a, &b));
    }
}
