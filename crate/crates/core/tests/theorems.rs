//! Randomized structural checks: the décalage comparison, oracle agreement,
//! page turning, convergence, and the graded-piece identity on seeded
//! corpora over all four coefficient rings. The full-size acceptance runs
//! live in the CLI crate; these are the fast core-side versions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use specseq::decalage::{
    comparison_map_e1_to_e2, decalage_iterate, deligne_decalage, truncation_graded_check_all,
};
use specseq::indexing::page_shift_transform;
use specseq::pages::{
    compare_pages, convergence_mismatches, differentials_square_to_zero, er_classical, er_lurie,
    page_turn_certificate, stabilization_index,
};
use specseq::sample::{random_filtered_complex, SampleParams};
use specseq::Ring;

const RINGS: [Ring; 4] =
    [Ring::Integers, Ring::Rationals, Ring::PrimeField(2), Ring::PrimeField(97)];

fn corpus(ring: Ring, seed: u64, count: usize) -> Vec<specseq::FilteredComplex> {
    let params = SampleParams::new(ring);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_filtered_complex(&mut rng, &params)).collect()
}

#[test]
fn decalage_turns_the_page_on_random_instances() {
    let (t1, _) = page_shift_transform(1);
    for ring in RINGS {
        for f in corpus(ring, 101, 12) {
            let dec = deligne_decalage(&f).unwrap();
            assert!(dec.page_blocking_violations().is_empty());
            for r in 1..=3u32 {
                let lhs = er_classical(&dec, r).unwrap();
                let rhs = er_classical(&f, r + 1).unwrap();
                let report = compare_pages(&lhs, &rhs, t1).unwrap();
                assert!(report.is_clean(), "{ring} r={r}: {:?}", report.mismatches);
            }
        }
    }
}

#[test]
fn iterated_decalage_reads_off_later_pages() {
    for ring in RINGS {
        for f in corpus(ring, 202, 6) {
            for r in 1..=3u32 {
                let (tr, _) = page_shift_transform(r);
                let dec_r = decalage_iterate(&f, r).unwrap();
                let lhs = er_classical(&dec_r, 1).unwrap();
                let rhs = er_classical(&f, r + 1).unwrap();
                let report = compare_pages(&lhs, &rhs, tr).unwrap();
                assert!(report.is_clean(), "{ring} r={r}: {:?}", report.mismatches);
            }
        }
    }
}

#[test]
fn oracles_agree_and_pages_turn() {
    let id = specseq::indexing::Mat2::identity();
    for ring in RINGS {
        for f in corpus(ring, 303, 8) {
            let rstar = stabilization_index(&f);
            for r in 1..=rstar.min(5) {
                let a = er_classical(&f, r).unwrap();
                let b = er_lurie(&f, r).unwrap();
                let report = compare_pages(&a, &b, id).unwrap();
                assert!(report.is_clean(), "{ring} r={r}: {:?}", report.mismatches);
                assert!(differentials_square_to_zero(&a), "{ring} r={r}");
                assert!(differentials_square_to_zero(&b), "{ring} r={r}");
                let cert = page_turn_certificate(&f, r).unwrap();
                assert!(cert.is_empty(), "{ring} r={r}: {cert:?}");
            }
        }
    }
}

#[test]
fn bounded_convergence_is_exact() {
    for ring in RINGS {
        for f in corpus(ring, 404, 10) {
            let bad = convergence_mismatches(&f).unwrap();
            assert!(bad.is_empty(), "{ring}: {bad:?}");
        }
    }
}

#[test]
fn rebased_interval_homology_matches_ambient_spans() {
    // The interval graded F^i/F^j can be presented two ways: rebased onto a
    // free basis, or through relative-homology spans anchored in M_n. Their
    // homologies must agree degreewise.
    use specseq::exact_linalg::{preimage_span, intersect_spans, subquotient, sum_spans};
    for ring in RINGS {
        for f in corpus(ring, 606, 6) {
            let (w_lo, w_hi) = f.weight_support();
            let (n_min, n_max) = f.complex().degree_range();
            for i in w_lo..=w_hi {
                for j in [i, i + 1, i + 2, w_hi + 1] {
                    if j < i {
                        continue;
                    }
                    let Ok(rebased) = f.interval_graded(i, Some(j)) else { continue };
                    for n in n_min..=n_max {
                        let rank = f.complex().rank(n);
                        if rank == 0 {
                            continue;
                        }
                        let d = f.complex().differential(n);
                        let num = if f.complex().rank(n - 1) == 0 {
                            f.step_span(i, n)
                        } else {
                            intersect_spans(
                                &f.step_span(i, n),
                                &preimage_span(&d, &f.step_span(j, n - 1)),
                            )
                        };
                        let den = sum_spans(
                            &f.step_span(j, n),
                            &f.complex().differential(n + 1).mul(&f.step_span(i, n + 1)).unwrap(),
                        );
                        let ambient = subquotient(rank, &num, &den).unwrap();
                        assert_eq!(
                            rebased.complex().homology(n),
                            ambient,
                            "{ring} gr^[{i},{j}) degree {n}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn graded_identity_and_comparison_map() {
    for ring in RINGS {
        for f in corpus(ring, 505, 5) {
            for check in truncation_graded_check_all(&f).unwrap() {
                assert!(check.holds, "{ring} (s,w)=({},{}): {:?}", check.s, check.w, check.failures);
            }
            let report = comparison_map_e1_to_e2(&f).unwrap();
            assert!(report.is_clean(), "{ring}: {:?}", report.entries);
        }
    }
}
