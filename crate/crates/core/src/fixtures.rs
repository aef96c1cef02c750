//! Worked instances used across tests, the CLI, and the verification
//! campaigns.

use crate::complexes::ChainComplex;
use crate::exact_linalg::{ExactMatrix, Ring};
use crate::filtered::{FilteredComplex, TailHigh};
use crate::multiplicative::FilteredDGA;
use num::BigInt;
use std::collections::BTreeMap;

/// The two-term complex `Z<a> -> Z<b>`, `da = b`, with the filtration
/// `F^0 = all`, `F^1 = F^2 = (0, Zb)`, `F^3 = 0`. Its spectral sequence
/// degenerates after a single `d^2` isomorphism.
pub fn toy_d2() -> FilteredComplex {
    let ring = Ring::Integers;
    let c = ChainComplex::new(
        ring,
        0,
        vec![1, 1],
        vec![ExactMatrix::from_i64(ring, 1, 1, &[1])],
    )
    .unwrap();
    FilteredComplex::new(
        c,
        &[0, 1, 2, 3],
        |s, n| match (s, n) {
            (s, _) if s <= 0 => ExactMatrix::identity(ring, 1),
            (1, 0) | (2, 0) => ExactMatrix::from_i64(ring, 1, 1, &[1]),
            _ => ExactMatrix::zeros(ring, 1, 0),
        },
        TailHigh::Zero,
    )
    .unwrap()
}

/// `Z` in degree 0 with `F^s = p^s Z` for `0 ≤ s ≤ levels` and zero above:
/// the finite truncation of the p-adic filtration. The steps are not
/// saturated, so gradeds are torsion modules `Z/p`.
pub fn truncated_padic(p: u64, levels: u32) -> FilteredComplex {
    let ring = Ring::Integers;
    let c = ChainComplex::concentrated(ring, 0, 1);
    let bps: Vec<i64> = (0..=(levels as i64 + 1)).collect();
    FilteredComplex::new(
        c,
        &bps,
        |s, _n| {
            if s <= levels as i64 {
                let v = BigInt::from(p).pow(s as u32);
                ExactMatrix::from_entries(ring, 1, 1, vec![v.into()]).unwrap()
            } else {
                ExactMatrix::zeros(ring, 1, 0)
            }
        },
        TailHigh::Zero,
    )
    .unwrap()
}

/// Cellular chain complex of `RP^2`: one cell in each dimension 0, 1, 2
/// with `∂_1 = 0`, `∂_2 = 2`.
pub fn rp2_cellular(ring: Ring) -> ChainComplex {
    ChainComplex::new(
        ring,
        0,
        vec![1, 1, 1],
        vec![
            ExactMatrix::from_i64(ring, 1, 1, &[0]),
            ExactMatrix::from_i64(ring, 1, 1, &[2]),
        ],
    )
    .unwrap()
}

/// A rank-one complex concentrated in degree 0.
pub fn point_complex(ring: Ring) -> ChainComplex {
    ChainComplex::concentrated(ring, 0, 1)
}

/// A coefficient complex with zero differential in degrees `{0, -2}`,
/// modelling a two-stage generalized cohomology theory.
pub fn two_stage_coefficients(ring: Ring) -> ChainComplex {
    ChainComplex::new(
        ring,
        -2,
        vec![1, 0, 1],
        vec![ExactMatrix::zeros(ring, 1, 0), ExactMatrix::zeros(ring, 0, 1)],
    )
    .unwrap()
}

/// The Koszul algebra `Z[x]/x^{N+1} ⊗ Λ(e)` with `de = x`, `|x| = 0`,
/// `|e| = 1`, filtered by powers of `(x)`. Basis order: `1, x, ..., x^N`
/// in degree 0 and `e, xe, ..., x^N e` in degree 1.
pub fn koszul_dga(n: u32) -> FilteredDGA {
    let ring = Ring::Integers;
    let rank = (n + 1) as usize;
    let mut d = ExactMatrix::zeros(ring, rank, rank);
    for k in 0..rank - 1 {
        d.set(k + 1, k, ring.one());
    }
    let complex = ChainComplex::new(ring, 0, vec![rank, rank], vec![d]).unwrap();
    let bps: Vec<i64> = (0..=(n as i64 + 1)).collect();
    let base = FilteredComplex::new(
        complex,
        &bps,
        |s, _deg| {
            let keep: Vec<Vec<crate::exact_linalg::Scalar>> = (0..rank)
                .filter(|&k| k as i64 >= s)
                .map(|k| {
                    let mut col = vec![num::BigRational::from(BigInt::from(0)); rank];
                    col[k] = ring.one();
                    col
                })
                .collect();
            ExactMatrix::from_columns(ring, rank, &keep).unwrap()
        },
        TailHigh::Zero,
    )
    .unwrap();
    // x^i * x^j = x^{i+j} (truncated); same on the e-line.
    let truncated_product = |rows: usize| {
        let mut m = ExactMatrix::zeros(ring, rows, rank * rank);
        for i in 0..rank {
            for j in 0..rank {
                if i + j < rows {
                    m.set(i + j, i * rank + j, ring.one());
                }
            }
        }
        m
    };
    let mut products = BTreeMap::new();
    products.insert((0, 0), truncated_product(rank));
    products.insert((0, 1), truncated_product(rank));
    products.insert((1, 0), truncated_product(rank));
    let mut unit = vec![num::BigRational::from(BigInt::from(0)); rank];
    unit[0] = ring.one();
    FilteredDGA::new(base, products, Some(unit), true).unwrap()
}

/// The exterior algebra on one degree-1 generator with the constant
/// filtration and zero differential.
pub fn exterior_dga() -> FilteredDGA {
    let ring = Ring::Integers;
    let complex =
        ChainComplex::new(ring, 0, vec![1, 1], vec![ExactMatrix::zeros(ring, 1, 1)]).unwrap();
    let base = FilteredComplex::constant(complex);
    let one = ExactMatrix::from_i64(ring, 1, 1, &[1]);
    let mut products = BTreeMap::new();
    products.insert((0, 0), one.clone());
    products.insert((0, 1), one.clone());
    products.insert((1, 0), one);
    FilteredDGA::new(base, products, Some(vec![ring.one()]), true).unwrap()
}

/// A product that violates filtration weights: `v` has weight 1 but
/// `v·v = u` has weight 0 instead of 2.
pub fn weight_violating_dga() -> FilteredDGA {
    let ring = Ring::Integers;
    let complex = ChainComplex::concentrated(ring, 0, 2);
    let base = FilteredComplex::new(
        complex,
        &[0, 1, 2],
        |s, _n| match s {
            0 => ExactMatrix::identity(ring, 2),
            1 => ExactMatrix::from_i64(ring, 2, 1, &[0, 1]),
            _ => ExactMatrix::zeros(ring, 2, 0),
        },
        TailHigh::Zero,
    )
    .unwrap();
    // u is the unit; v*v = u.
    let mut product = ExactMatrix::zeros(ring, 2, 4);
    product.set(0, 0, ring.one()); // u*u = u
    product.set(1, 1, ring.one()); // u*v = v
    product.set(1, 2, ring.one()); // v*u = v
    product.set(0, 3, ring.one()); // v*v = u
    let mut products = BTreeMap::new();
    products.insert((0, 0), product);
    FilteredDGA::new(base, products, Some(vec![ring.one(), ring.zero()]), true).unwrap()
}
