use super::matrix::ExactMatrix;
use super::ring::{Ring, Scalar};
use num::{BigInt, Signed, Zero};

/// A full Smith decomposition `U * A * V = D` with `U`, `V` invertible over
/// the ring and `D` diagonal. Over the integers the diagonal satisfies the
/// divisibility chain `d_1 | d_2 | ...` with nonnegative entries; over a
/// field the diagonal is ones followed by zeros. The inverses of `U` and `V`
/// are tracked alongside because image and saturation bases read off them.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub u: ExactMatrix,
    pub u_inv: ExactMatrix,
    pub d: ExactMatrix,
    pub v: ExactMatrix,
    pub v_inv: ExactMatrix,
    pub rank: usize,
}

impl SmithNormalForm {
    pub fn diagonal(&self) -> Vec<Scalar> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Work {
    ring: Ring,
    d: ExactMatrix,
    u: ExactMatrix,
    u_inv: ExactMatrix,
    v: ExactMatrix,
    v_inv: ExactMatrix,
}

impl Work {
    fn new(a: &ExactMatrix) -> Self {
        let ring = a.ring();
        Work {
            ring,
            d: a.clone(),
            u: ExactMatrix::identity(ring, a.rows()),
            u_inv: ExactMatrix::identity(ring, a.rows()),
            v: ExactMatrix::identity(ring, a.cols()),
            v_inv: ExactMatrix::identity(ring, a.cols()),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row[i] += c * row[j]
    fn add_row(&mut self, i: usize, j: usize, c: &Scalar) {
        self.d.add_row_multiple(i, j, c);
        self.u.add_row_multiple(i, j, c);
        let neg = self.ring.neg(c);
        self.u_inv.add_col_multiple(j, i, &neg);
    }

    /// col[i] += c * col[j]
    fn add_col(&mut self, i: usize, j: usize, c: &Scalar) {
        self.d.add_col_multiple(i, j, c);
        self.v.add_col_multiple(i, j, c);
        let neg = self.ring.neg(c);
        self.v_inv.add_row_multiple(j, i, &neg);
    }

    /// row[i] *= unit
    fn scale_row(&mut self, i: usize, unit: &Scalar) {
        self.d.scale_row(i, unit);
        self.u.scale_row(i, unit);
        let inv = self.ring.inv(unit).expect("scaling by a unit");
        self.u_inv.scale_col(i, &inv);
    }
}

/// Compute the Smith normal form of `A`. Total: every matrix over every
/// supported ring has one. Over fields this degenerates to a rank-revealing
/// decomposition with the identical `U A V = D` contract.
pub fn smith_normal_form(a: &ExactMatrix) -> SmithNormalForm {
    match a.ring() {
        Ring::Integers => smith_integers(a),
        Ring::Rationals | Ring::PrimeField(_) => smith_field(a),
    }
}

fn smith_field(a: &ExactMatrix) -> SmithNormalForm {
    let mut w = Work::new(a);
    let ring = a.ring();
    let bound = a.rows().min(a.cols());
    let mut n = 0;
    while n < bound {
        // Find any nonzero pivot in the remaining block.
        let mut pivot = None;
        'search: for j in n..a.cols() {
            for i in n..a.rows() {
                if !w.d.get(i, j).is_zero() {
                    pivot = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        w.swap_rows(n, pi);
        w.swap_cols(n, pj);
        let inv = ring.inv(&w.d.get(n, n).clone()).expect("nonzero field element");
        w.scale_row(n, &inv);
        for i in (n + 1)..a.rows() {
            let c = w.d.get(i, n).clone();
            if !c.is_zero() {
                w.add_row(i, n, &ring.neg(&c));
            }
        }
        for j in (n + 1)..a.cols() {
            let c = w.d.get(n, j).clone();
            if !c.is_zero() {
                w.add_col(j, n, &ring.neg(&c));
            }
        }
        n += 1;
    }
    SmithNormalForm { u: w.u, u_inv: w.u_inv, d: w.d, v: w.v, v_inv: w.v_inv, rank: n }
}

fn smith_integers(a: &ExactMatrix) -> SmithNormalForm {
    let mut w = Work::new(a);
    let bound = a.rows().min(a.cols());
    let mut n = 0;
    while n < bound {
        if !clear_block(&mut w, n, a.rows(), a.cols()) {
            break;
        }
        n += 1;
    }
    let rank = n;
    enforce_divisibility(&mut w, rank, a.rows(), a.cols());
    // Make diagonal entries positive.
    for i in 0..rank {
        if w.d.get(i, i).numer().is_negative() {
            let minus_one = Scalar::from(BigInt::from(-1));
            w.scale_row(i, &minus_one);
        }
    }
    SmithNormalForm { u: w.u, u_inv: w.u_inv, d: w.d, v: w.v, v_inv: w.v_inv, rank }
}

fn abs_int(x: &Scalar) -> BigInt {
    x.numer().abs()
}

/// Bring the trailing block starting at `(n, n)` to the form where `(n, n)`
/// is the only nonzero entry in its row and column. Returns false if the
/// block is entirely zero.
fn clear_block(w: &mut Work, n: usize, rows: usize, cols: usize) -> bool {
    loop {
        // Smallest nonzero entry to the pivot slot.
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in n..rows {
            for j in n..cols {
                let v = w.d.get(i, j);
                if v.is_zero() {
                    continue;
                }
                let m = abs_int(v);
                if best.as_ref().is_none_or(|(_, _, b)| &m < b) {
                    best = Some((i, j, m));
                }
            }
        }
        let Some((pi, pj, _)) = best else { return false };
        w.swap_rows(n, pi);
        w.swap_cols(n, pj);

        let mut dirty = false;
        let pivot = w.d.get(n, n).clone();
        for i in (n + 1)..rows {
            let v = w.d.get(i, n).clone();
            if v.is_zero() {
                continue;
            }
            let q = Scalar::from(v.numer() / pivot.numer());
            if !q.is_zero() {
                w.add_row(i, n, &w.ring.neg(&q));
            }
            if !w.d.get(i, n).is_zero() {
                dirty = true;
            }
        }
        let pivot = w.d.get(n, n).clone();
        for j in (n + 1)..cols {
            let v = w.d.get(n, j).clone();
            if v.is_zero() {
                continue;
            }
            let q = Scalar::from(v.numer() / pivot.numer());
            if !q.is_zero() {
                w.add_col(j, n, &w.ring.neg(&q));
            }
            if !w.d.get(n, j).is_zero() {
                dirty = true;
            }
        }
        if !dirty {
            let clean = ((n + 1)..rows).all(|i| w.d.get(i, n).is_zero())
                && ((n + 1)..cols).all(|j| w.d.get(n, j).is_zero());
            if clean {
                return true;
            }
        }
    }
}

fn enforce_divisibility(w: &mut Work, rank: usize, _rows: usize, _cols: usize) {
    if rank < 2 {
        return;
    }
    loop {
        let mut fixed = true;
        for i in 0..rank.saturating_sub(1) {
            let di = abs_int(w.d.get(i, i));
            let dj = abs_int(w.d.get(i + 1, i + 1));
            if di.is_zero() || (&dj % &di).is_zero() {
                continue;
            }
            fixed = false;
            // Fold d_{i+1} into column i; the 2x2 block becomes
            // [[d_i, 0], [d_{i+1}, d_{i+1}]] and a local clearing turns the
            // pivot into gcd(d_i, d_{i+1}).
            let one = Scalar::from(BigInt::from(1));
            w.add_col(i, i + 1, &one);
            fix_pair(w, i);
        }
        if fixed {
            return;
        }
    }
}

/// Diagonalize the 2x2 block at rows/cols `{i, i+1}` without touching
/// anything else.
fn fix_pair(w: &mut Work, i: usize) {
    let j = i + 1;
    loop {
        // Move the smallest nonzero block entry to (i, i).
        let mut best: Option<(usize, usize, BigInt)> = None;
        for r in [i, j] {
            for c in [i, j] {
                let v = w.d.get(r, c);
                if v.is_zero() {
                    continue;
                }
                let m = abs_int(v);
                if best.as_ref().is_none_or(|(_, _, b)| &m < b) {
                    best = Some((r, c, m));
                }
            }
        }
        let Some((r, c, _)) = best else { return };
        w.swap_rows(i, r);
        w.swap_cols(i, c);

        let mut dirty = false;
        let pivot = w.d.get(i, i).clone();
        let below = w.d.get(j, i).clone();
        if !below.is_zero() {
            let q = Scalar::from(below.numer() / pivot.numer());
            if !q.is_zero() {
                w.add_row(j, i, &w.ring.neg(&q));
            }
            dirty |= !w.d.get(j, i).is_zero();
        }
        let right = w.d.get(i, j).clone();
        if !right.is_zero() {
            let q = Scalar::from(right.numer() / pivot.numer());
            if !q.is_zero() {
                w.add_col(j, i, &w.ring.neg(&q));
            }
            dirty |= !w.d.get(i, j).is_zero();
        }
        if !dirty && w.d.get(j, i).is_zero() && w.d.get(i, j).is_zero() {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    fn check_decomposition(a: &ExactMatrix) {
        let s = smith_normal_form(a);
        let lhs = s.u.mul(a).unwrap().mul(&s.v).unwrap();
        assert_eq!(lhs, s.d, "U*A*V = D must hold exactly");
        assert!(s.u.mul(&s.u_inv).unwrap().is_identity());
        assert!(s.v.mul(&s.v_inv).unwrap().is_identity());
        // Diagonal, nonnegative, divisibility chain.
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[0].is_zero() && !w[1].is_zero() {
                assert!(
                    a.ring().div_exact(&w[1], &w[0]).is_some(),
                    "divisibility chain violated: {} then {}",
                    w[0],
                    w[1]
                );
            }
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            }
        }
        for d in &diag {
            assert!(!d.numer().is_negative());
        }
    }

    #[test]
    fn snf_fixed_example() {
        // d_1 = gcd of the entries, d_1*d_2 = |det|.
        let a = ExactMatrix::from_i64(Ring::Integers, 2, 2, &[2, 4, 0, 6]);
        let s = smith_normal_form(&a);
        check_decomposition(&a);
        assert_eq!(s.diagonal(), vec![Scalar::from(BigInt::from(2)), Scalar::from(BigInt::from(6))]);
    }

    #[test]
    fn snf_zero_and_identity() {
        let z = ExactMatrix::zeros(Ring::Integers, 3, 2);
        let s = smith_normal_form(&z);
        assert!(s.d.is_zero());
        assert!(s.u.is_identity());
        assert!(s.v.is_identity());
        assert_eq!(s.rank, 0);

        let id = ExactMatrix::identity(Ring::Integers, 4);
        let s = smith_normal_form(&id);
        assert!(s.d.is_identity());
        assert_eq!(s.rank, 4);
    }

    #[test]
    fn snf_divisibility_non_adjacent() {
        let a = ExactMatrix::from_i64(Ring::Integers, 3, 3, &[2, 0, 0, 0, 3, 0, 0, 0, 4]);
        let s = smith_normal_form(&a);
        check_decomposition(&a);
        let diag = s.diagonal();
        assert!(diag[0].is_one());
        // 2*3*4 = 24 must be preserved as the product of the diagonal.
        let prod: BigInt = diag.iter().map(|d| d.numer().clone()).product();
        assert_eq!(prod, BigInt::from(24));
    }

    #[test]
    fn snf_over_fields() {
        let a = ExactMatrix::from_i64(Ring::PrimeField(5), 2, 3, &[1, 2, 3, 2, 4, 6]);
        let s = smith_normal_form(&a);
        check_decomposition(&a);
        assert_eq!(s.rank, 1);

        let b = ExactMatrix::from_entries(
            Ring::Rationals,
            2,
            2,
            vec![
                Scalar::new(1.into(), 2.into()),
                Scalar::new(1.into(), 3.into()),
                Scalar::new(1.into(), 4.into()),
                Scalar::new(1.into(), 6.into()),
            ],
        )
        .unwrap();
        let s = smith_normal_form(&b);
        check_decomposition(&b);
        assert_eq!(s.rank, 1);
    }

    #[test]
    fn snf_random_shapes() {
        let cases: Vec<(usize, usize, Vec<i64>)> = vec![
            (1, 2, vec![1, 1]),
            (3, 1, vec![6, 10, 15]),
            (2, 3, vec![4, 6, 8, 10, 12, 14]),
            (3, 3, vec![-2, 1, 0, 7, -3, 5, 4, 4, 4]),
        ];
        for (r, c, e) in cases {
            let a = ExactMatrix::from_i64(Ring::Integers, r, c, &e);
            check_decomposition(&a);
        }
    }
}
