//! Seeded random instances for the verification campaigns: bounded strictly
//! filtered complexes with controllable torsion and multi-page
//! differentials, and small filtered DGAs.
//!
//! Instances are built constructively. A "weighted staircase" picks ranks,
//! a partial matching for the differential with nonzero scalars, and
//! per-basis-vector weights that grow along the differential; the filtration
//! by weight is then strict, compatible, and saturated by construction.
//! Conjugating everything by random unimodular changes of basis hides the
//! staircase while preserving validity exactly.

use crate::complexes::ChainComplex;
use crate::exact_linalg::{ExactMatrix, Ring, Scalar};
use crate::filtered::{FilteredComplex, TailHigh};
use crate::multiplicative::FilteredDGA;
use num::{BigInt, Zero};
use rand::Rng;
use std::collections::BTreeMap;

/// Size bounds for random instances. The defaults stay at desk scale:
/// degree span and weight span at most 5, ranks at most 4, scalars in
/// `[-3, 3]`.
#[derive(Clone, Debug)]
pub struct SampleParams {
    pub ring: Ring,
    pub max_degrees: usize,
    pub max_rank: usize,
    pub max_weight_span: i64,
    pub mix_rounds: usize,
}

impl SampleParams {
    pub fn new(ring: Ring) -> Self {
        SampleParams { ring, max_degrees: 5, max_rank: 4, max_weight_span: 5, mix_rounds: 3 }
    }
}

fn scalar(v: i64) -> Scalar {
    Scalar::from(BigInt::from(v))
}

/// A nonzero scalar in `[-3, 3]` valid for the ring (for `F_2` this is 1).
fn nonzero_scalar(rng: &mut impl Rng, ring: Ring) -> Scalar {
    loop {
        let v = rng.gen_range(-3i64..=3);
        if v == 0 {
            continue;
        }
        let s = scalar(v);
        if let Some(canon) = ring.normalize(&s) {
            if !canon.is_zero() {
                return canon;
            }
        }
    }
}

/// A random bounded strictly filtered complex passing validation.
pub fn random_filtered_complex(rng: &mut impl Rng, params: &SampleParams) -> FilteredComplex {
    let ring = params.ring;
    let degrees = rng.gen_range(1..=params.max_degrees);
    let min_degree = rng.gen_range(-2..=1);
    let ranks: Vec<usize> = (0..degrees).map(|_| rng.gen_range(0..=params.max_rank)).collect();

    // Partial matching: d out of degree (min+i+1) maps the last u_i basis
    // vectors onto the first u_i of the next degree down, scaled.
    let mut hit = vec![0usize; degrees]; // vectors of M_i hit from above
    let mut used = vec![0usize; degrees]; // vectors of M_i mapped out by d
    for i in (1..degrees).rev() {
        let avail_src = ranks[i].saturating_sub(hit[i]);
        let avail_dst = ranks[i - 1];
        let u = if avail_src.min(avail_dst) == 0 {
            0
        } else {
            rng.gen_range(0..=avail_src.min(avail_dst))
        };
        used[i] = u;
        hit[i - 1] = u;
    }

    let mut differentials = Vec::new();
    let mut scalars: Vec<Vec<Scalar>> = vec![vec![]; degrees];
    for i in 1..degrees {
        let mut d = ExactMatrix::zeros(ring, ranks[i - 1], ranks[i]);
        let u = used[i];
        for k in 0..u {
            let c = nonzero_scalar(rng, ring);
            d.set(k, ranks[i] - u + k, c.clone());
            scalars[i].push(c);
        }
        differentials.push(d);
    }

    // Weights per basis vector, increasing along the differential.
    let w_lo = rng.gen_range(-2..=1);
    let w_hi = w_lo + rng.gen_range(1..=params.max_weight_span);
    let mut weights: Vec<Vec<i64>> = Vec::new();
    for &rank in &ranks {
        weights.push((0..rank).map(|_| rng.gen_range(w_lo..=w_hi)).collect());
    }
    for i in (1..degrees).rev() {
        let u = used[i];
        for k in 0..u {
            let src = weights[i][ranks[i] - u + k];
            if weights[i - 1][k] < src {
                weights[i - 1][k] = rng.gen_range(src..=w_hi.max(src));
            }
        }
    }

    // Random unimodular change of basis per degree.
    let mut bases: Vec<ExactMatrix> = Vec::new();
    let mut bases_inv: Vec<ExactMatrix> = Vec::new();
    for &rank in &ranks {
        let (u, u_inv) = random_unimodular(rng, ring, rank, params.mix_rounds);
        bases.push(u);
        bases_inv.push(u_inv);
    }
    let conjugated: Vec<ExactMatrix> = differentials
        .iter()
        .enumerate()
        .map(|(idx, d)| {
            bases[idx].mul(d).expect("shape").mul(&bases_inv[idx + 1]).expect("shape")
        })
        .collect();
    let complex =
        ChainComplex::new(ring, min_degree, ranks.clone(), conjugated).expect("staircase complex");

    let steps_for = |s: i64, n: i64| -> ExactMatrix {
        let i = (n - min_degree) as usize;
        let cols: Vec<Vec<Scalar>> = (0..ranks[i])
            .filter(|&k| weights[i][k] >= s)
            .map(|k| {
                let mut v = vec![Scalar::zero(); ranks[i]];
                v[k] = ring.one();
                v
            })
            .collect();
        let coords = ExactMatrix::from_columns(ring, ranks[i], &cols).expect("columns");
        bases[i].mul(&coords).expect("shape")
    };
    let bps: Vec<i64> = (w_lo..=(w_hi + 1)).collect();
    let f = FilteredComplex::new(complex, &bps, steps_for, TailHigh::Zero)
        .expect("staircase filtration");
    debug_assert!(f.validate().is_empty(), "{:?}", f.validate());
    f
}

/// A random unimodular matrix and its inverse: a short product of
/// elementary operations with small coefficients.
fn random_unimodular(
    rng: &mut impl Rng,
    ring: Ring,
    n: usize,
    rounds: usize,
) -> (ExactMatrix, ExactMatrix) {
    let mut u = ExactMatrix::identity(ring, n);
    let mut u_inv = ExactMatrix::identity(ring, n);
    if n < 2 {
        return (u, u_inv);
    }
    for _ in 0..rounds {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        if i == j {
            j = (j + 1) % n;
        }
        match rng.gen_range(0..3u8) {
            0 => {
                u.swap_rows(i, j);
                u_inv.swap_cols(i, j);
            }
            _ => {
                let c = scalar(*[-2, -1, 1, 2].get(rng.gen_range(0..4)).unwrap());
                let c = ring.normalize(&c).unwrap();
                u.add_row_multiple(i, j, &c);
                u_inv.add_col_multiple(j, i, &ring.neg(&c));
            }
        }
    }
    (u, u_inv)
}

/// Families of random small filtered DGAs (differentials included), all
/// genuinely multiplicative by construction.
pub fn random_filtered_dga(rng: &mut impl Rng, ring: Ring) -> FilteredDGA {
    if rng.gen_bool(0.5) {
        truncated_koszul_dga(rng, ring)
    } else {
        exterior_two_generators(rng, ring)
    }
}

/// `R[x]/x^{a} ⊗ Λ(e)` with `de = x^k`, `x` in weight 1 and `e` in weight
/// `w_e ≤ k`, filtered by total weight. The page-level differentials jump
/// `k - w_e` weights, exercising higher pages.
fn truncated_koszul_dga(rng: &mut impl Rng, ring: Ring) -> FilteredDGA {
    let a = rng.gen_range(2..=4usize); // x^a = 0
    let k = rng.gen_range(1..=2i64); // de = x^k
    let w_e = rng.gen_range(0..=k);
    let rank = a;
    let mut d = ExactMatrix::zeros(ring, rank, rank);
    for i in 0..rank {
        let j = i as i64 + k;
        if (j as usize) < rank {
            d.set(j as usize, i, ring.one());
        }
    }
    let complex = ChainComplex::new(ring, 0, vec![rank, rank], vec![d]).unwrap();
    // Weight of x^i is i; weight of x^i e is i + w_e.
    let weight = |deg: i64, idx: usize| -> i64 {
        idx as i64 + if deg == 1 { w_e } else { 0 }
    };
    let w_max = (rank as i64 - 1) + w_e;
    let bps: Vec<i64> = (0..=(w_max + 1)).collect();
    let base = FilteredComplex::new(
        complex,
        &bps,
        |s, n| {
            let cols: Vec<Vec<Scalar>> = (0..rank)
                .filter(|&i| weight(n, i) >= s)
                .map(|i| {
                    let mut v = vec![Scalar::zero(); rank];
                    v[i] = ring.one();
                    v
                })
                .collect();
            ExactMatrix::from_columns(ring, rank, &cols).unwrap()
        },
        TailHigh::Zero,
    )
    .unwrap();
    let truncated = |rows: usize| {
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
    products.insert((0, 0), truncated(rank));
    products.insert((0, 1), truncated(rank));
    products.insert((1, 0), truncated(rank));
    let mut unit = vec![Scalar::zero(); rank];
    unit[0] = ring.one();
    FilteredDGA::new(base, products, Some(unit), true).expect("koszul family is well formed")
}

/// `Λ(e_1, e_2)` with zero differential and generators in random weights,
/// filtered by total weight. Basis: 1; e1, e2; e1e2.
fn exterior_two_generators(rng: &mut impl Rng, ring: Ring) -> FilteredDGA {
    let w1 = rng.gen_range(0..=2i64);
    let w2 = rng.gen_range(0..=2i64);
    let complex = ChainComplex::new(
        ring,
        0,
        vec![1, 2, 1],
        vec![ExactMatrix::zeros(ring, 1, 2), ExactMatrix::zeros(ring, 2, 1)],
    )
    .unwrap();
    let weights: Vec<Vec<i64>> = vec![vec![0], vec![w1, w2], vec![w1 + w2]];
    let w_max = w1 + w2;
    let bps: Vec<i64> = (0..=(w_max + 1)).collect();
    let base = FilteredComplex::new(
        complex,
        &bps,
        |s, n| {
            let row = &weights[n as usize];
            let cols: Vec<Vec<Scalar>> = (0..row.len())
                .filter(|&i| row[i] >= s)
                .map(|i| {
                    let mut v = vec![Scalar::zero(); row.len()];
                    v[i] = ring.one();
                    v
                })
                .collect();
            ExactMatrix::from_columns(ring, row.len(), &cols).unwrap()
        },
        TailHigh::Zero,
    )
    .unwrap();
    let one = ring.one();
    let minus = ring.neg(&one);
    let mut products = BTreeMap::new();
    products.insert((0, 0), ExactMatrix::from_entries(ring, 1, 1, vec![one.clone()]).unwrap());
    products.insert((0, 1), ExactMatrix::identity(ring, 2));
    products.insert((1, 0), ExactMatrix::identity(ring, 2));
    // e1*e2 = e1e2, e2*e1 = -e1e2, squares vanish.
    let mut mu11 = ExactMatrix::zeros(ring, 1, 4);
    mu11.set(0, 1, one.clone());
    mu11.set(0, 2, minus);
    products.insert((1, 1), mu11);
    products.insert((0, 2), ExactMatrix::identity(ring, 1));
    products.insert((2, 0), ExactMatrix::identity(ring, 1));
    FilteredDGA::new(base, products, Some(vec![one]), true)
        .expect("exterior family is well formed")
}
