//! The randomized verification campaign: generate seeded corpora of valid
//! instances, run a named structural property on each, and report the first
//! counterexample (serialized to disk by the caller). A fault can be
//! injected to confirm the campaign actually detects broken oracles.

use crate::io;
use rayon::prelude::*;
use specseq::decalage::{
    comparison_map_e1_to_e2, decalage_iterate, deligne_decalage, truncation_graded_check_all,
};
use specseq::indexing::{page_shift_transform, Mat2};
use specseq::multiplicative::{check_leibniz, decalage_multiplicativity_violations};
use specseq::pages::{
    compare_pages, convergence_mismatches_against, differentials_square_to_zero, einfty_page,
    er_classical, er_lurie, page_turn_certificate, stabilization_index, Page,
};
use specseq::sample::{random_filtered_complex, random_filtered_dga, SampleParams};
use specseq::{ahss, fixtures, FgModule, FilteredComplex, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    Decalage,
    Convergence,
    Leibniz,
    Maunder,
    Oracles,
}

impl Theorem {
    pub fn parse(name: &str) -> Option<Theorem> {
        match name {
            "decalage" => Some(Theorem::Decalage),
            "convergence" => Some(Theorem::Convergence),
            "leibniz" => Some(Theorem::Leibniz),
            "maunder" => Some(Theorem::Maunder),
            "oracles" => Some(Theorem::Oracles),
            _ => None,
        }
    }
}

/// A deliberate corruption of one computed object, for mutation smoke
/// tests: a passing build must report a counterexample under any of these.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Bump the free rank of one computed page term.
    TermRank,
    /// Zero out one page differential (with its kernel/image data).
    ZeroDifferential,
    /// Compare under an off-by-one reindexing transform.
    Transform,
    /// Corrupt one entry of a DGA product matrix.
    ProductEntry,
}

impl Fault {
    pub fn parse(name: &str) -> Option<Fault> {
        match name {
            "term-rank" => Some(Fault::TermRank),
            "zero-differential" => Some(Fault::ZeroDifferential),
            "transform" => Some(Fault::Transform),
            "product-entry" => Some(Fault::ProductEntry),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub seed: u64,
    pub count: usize,
    pub rings: Vec<Ring>,
    pub rmax: u32,
    pub fault: Option<Fault>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            seed: 0,
            count: 200,
            rings: vec![Ring::PrimeField(2), Ring::PrimeField(97), Ring::Rationals, Ring::Integers],
            rmax: 4,
            fault: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub description: String,
    /// The offending instance as a `*.fc.json` document.
    pub artifact: String,
}

#[derive(Clone, Debug)]
pub struct CampaignOutcome {
    pub checks: usize,
    pub counterexample: Option<Counterexample>,
}

impl CampaignOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn instance_rng(seed: u64, ring: Ring, index: usize) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    let tag = match ring {
        Ring::Integers => 1u64,
        Ring::Rationals => 2,
        Ring::PrimeField(p) => 1000 + p,
    };
    rand_chacha::ChaCha8Rng::seed_from_u64(
        seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (index as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9),
    )
}

fn perturb_page(page: &mut Page, fault: Fault, ring: Ring) -> bool {
    match fault {
        Fault::TermRank => {
            if let Some(term) = page.terms.values_mut().next_back() {
                term.subquotient.module.free_rank += 1;
                return true;
            }
            false
        }
        Fault::ZeroDifferential => {
            let key = page
                .terms
                .iter()
                .rev()
                .find(|(_, t)| !t.d_image.is_zero())
                .map(|(k, _)| *k);
            if let Some(key) = key {
                let term = page.terms.get_mut(&key).unwrap();
                term.d_image = FgModule::zero(ring);
                term.d_kernel = term.subquotient.module.clone();
                term.differential = None;
                return true;
            }
            false
        }
        _ => false,
    }
}

/// Build a rayon pool honoring the `SPECSEQ_THREADS` cap.
pub fn thread_pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("SPECSEQ_THREADS") {
        if let Ok(k) = v.parse::<usize>() {
            if k > 0 {
                builder = builder.num_threads(k);
            }
        }
    }
    builder.build().expect("thread pool")
}

/// Run the named property over the seeded corpus. Deterministic for a
/// fixed seed: instances are generated per (ring, index) independently of
/// scheduling, and the first counterexample in (ring, index) order wins.
pub fn run(theorem: Theorem, config: &CampaignConfig) -> CampaignOutcome {
    if theorem == Theorem::Maunder {
        return run_maunder(config);
    }
    if theorem == Theorem::Leibniz {
        return run_leibniz(config);
    }
    let pool = thread_pool();
    let mut jobs: Vec<(Ring, usize)> = Vec::new();
    for &ring in &config.rings {
        for i in 0..config.count {
            jobs.push((ring, i));
        }
    }
    let results: Vec<Option<Counterexample>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(ring, i)| {
                let mut rng = instance_rng(config.seed, ring, i);
                let f = random_filtered_complex(&mut rng, &SampleParams::new(ring));
                let outcome = match theorem {
                    Theorem::Decalage => check_decalage(&f, config),
                    Theorem::Convergence => check_convergence(&f, config),
                    Theorem::Oracles => check_oracles(&f, config),
                    Theorem::Leibniz | Theorem::Maunder => unreachable!(),
                };
                outcome.err().map(|description| Counterexample {
                    description: format!("{description} (ring {ring}, instance {i})"),
                    artifact: io::filtered_to_json(&f, None),
                })
            })
            .collect()
    });
    CampaignOutcome {
        checks: jobs.len(),
        counterexample: results.into_iter().flatten().next(),
    }
}

fn check_decalage(f: &FilteredComplex, config: &CampaignConfig) -> Result<(), String> {
    let err = |e: specseq::Error| e.to_string();
    let dec = deligne_decalage(f).map_err(err)?;
    if !dec.page_blocking_violations().is_empty() {
        return Err("décalage output fails validation".into());
    }
    let (t1, _) = page_shift_transform(1);
    let t1 = match config.fault {
        Some(Fault::Transform) => Mat2([[0, -1], [1, 1]]),
        _ => t1,
    };
    for r in 1..=config.rmax {
        let mut lhs = er_classical(&dec, r).map_err(err)?;
        let rhs = er_classical(f, r + 1).map_err(err)?;
        if let Some(fault) = config.fault {
            perturb_page(&mut lhs, fault, f.ring());
        }
        let report = compare_pages(&lhs, &rhs, t1).map_err(err)?;
        if !report.is_clean() {
            return Err(format!(
                "E^{r}(Dec F) vs E^{}(F) mismatches: {:?}",
                r + 1,
                report.mismatches
            ));
        }
    }
    // Iterated form, r ≤ 3.
    for r in 1..=config.rmax.min(3) {
        let (tr, _) = page_shift_transform(r);
        let tr = match config.fault {
            Some(Fault::Transform) => Mat2([[0, -1], [1, 1]]),
            _ => tr,
        };
        let dec_r = decalage_iterate(f, r).map_err(err)?;
        let mut lhs = er_classical(&dec_r, 1).map_err(err)?;
        if let Some(fault) = config.fault {
            perturb_page(&mut lhs, fault, f.ring());
        }
        let rhs = er_classical(f, r + 1).map_err(err)?;
        let report = compare_pages(&lhs, &rhs, tr).map_err(err)?;
        if !report.is_clean() {
            return Err(format!(
                "E^1(Dec^({r}) F) vs E^{}(F) mismatches: {:?}",
                r + 1,
                report.mismatches
            ));
        }
    }
    // Graded identity and the explicit comparison map.
    for check in truncation_graded_check_all(f).map_err(err)? {
        if !check.holds {
            return Err(format!(
                "graded identity fails at (s,w) = ({},{}): {:?}",
                check.s, check.w, check.failures
            ));
        }
    }
    let map_report = comparison_map_e1_to_e2(f).map_err(err)?;
    if !map_report.is_clean() {
        return Err(format!("comparison map E^1(Dec) → E^2 not clean: {:?}", map_report.entries));
    }
    Ok(())
}

fn check_convergence(f: &FilteredComplex, config: &CampaignConfig) -> Result<(), String> {
    let err = |e: specseq::Error| e.to_string();
    let mut einf = einfty_page(f).map_err(err)?;
    if let Some(fault) = config.fault {
        perturb_page(&mut einf, fault, f.ring());
    }
    let bad = convergence_mismatches_against(f, &einf).map_err(err)?;
    if bad.is_empty() {
        Ok(())
    } else {
        Err(format!("gr^s H_n vs E^∞ mismatches: {bad:?}"))
    }
}

fn check_oracles(f: &FilteredComplex, config: &CampaignConfig) -> Result<(), String> {
    let err = |e: specseq::Error| e.to_string();
    let rstar = stabilization_index(f);
    for r in 1..=rstar.min(config.rmax.max(2) + 2) {
        let mut a = er_lurie(f, r).map_err(err)?;
        if let Some(fault) = config.fault {
            perturb_page(&mut a, fault, f.ring());
        }
        let b = er_classical(f, r).map_err(err)?;
        let report = compare_pages(&a, &b, Mat2::identity()).map_err(err)?;
        if !report.is_clean() {
            return Err(format!("interval vs classical E^{r}: {:?}", report.mismatches));
        }
        if !differentials_square_to_zero(&a) || !differentials_square_to_zero(&b) {
            return Err(format!("d^{r} ∘ d^{r} ≠ 0"));
        }
        let cert = page_turn_certificate(f, r).map_err(err)?;
        if !cert.is_empty() {
            return Err(format!("page-turning span identity fails at r = {r}: {cert:?}"));
        }
    }
    Ok(())
}

fn run_leibniz(config: &CampaignConfig) -> CampaignOutcome {
    let pool = thread_pool();
    let ring = Ring::PrimeField(2);
    let mut jobs: Vec<usize> = (0..config.count).collect();
    // Instance index `count` stands for the Koszul fixture.
    jobs.push(config.count);
    let results: Vec<Option<Counterexample>> = pool.install(|| {
        jobs.par_iter()
            .map(|&i| {
                let dga = if i == config.count {
                    fixtures::koszul_dga(3)
                } else {
                    let mut rng = instance_rng(config.seed, ring, i);
                    random_filtered_dga(&mut rng, ring)
                };
                let dga = match config.fault {
                    Some(Fault::ProductEntry) => corrupt_product(&dga),
                    _ => dga,
                };
                let outcome = check_leibniz_instance(&dga, config);
                outcome.err().map(|description| Counterexample {
                    description: format!("{description} (instance {i})"),
                    artifact: io::filtered_to_json(&dga.base, Some(&dga)),
                })
            })
            .collect()
    });
    CampaignOutcome {
        checks: jobs.len(),
        counterexample: results.into_iter().flatten().next(),
    }
}

fn corrupt_product(dga: &specseq::multiplicative::FilteredDGA) -> specseq::multiplicative::FilteredDGA {
    let mut products = dga.products().clone();
    if let Some(((m, n), mat)) = products.iter().map(|(k, v)| (*k, v.clone())).next() {
        let mut mat = mat;
        if mat.rows() > 0 && mat.cols() > 0 {
            let ring = dga.ring();
            let cur = mat.get(mat.rows() - 1, mat.cols() - 1).clone();
            mat.set(mat.rows() - 1, mat.cols() - 1, ring.add(&cur, &ring.one()));
        }
        products.insert((m, n), mat);
    }
    specseq::multiplicative::FilteredDGA::new(
        dga.base.clone(),
        products,
        dga.unit.clone(),
        dga.commutative,
    )
    .expect("shapes unchanged")
}

fn check_leibniz_instance(
    dga: &specseq::multiplicative::FilteredDGA,
    config: &CampaignConfig,
) -> Result<(), String> {
    let violations = dga.validate();
    if !violations.is_empty() {
        return Err(format!("DGA validation: {violations:?}"));
    }
    for r in 1..=config.rmax.min(3) {
        let report = check_leibniz(dga, r).map_err(|e| e.to_string())?;
        if !report.holds() {
            return Err(format!("Leibniz at r = {r}: {:?}", report.violations));
        }
    }
    let dec_bad = decalage_multiplicativity_violations(dga).map_err(|e| e.to_string())?;
    if !dec_bad.is_empty() {
        return Err(format!("décalage multiplicativity: {dec_bad:?}"));
    }
    Ok(())
}

fn run_maunder(config: &CampaignConfig) -> CampaignOutcome {
    let spaces: Vec<(&str, ahss::CWComplex)> = vec![
        ("point", ahss::CWComplex::point()),
        ("S2", ahss::CWComplex::sphere2()),
        ("RP2", ahss::CWComplex::rp2()),
        ("T2", ahss::CWComplex::torus2()),
        ("CP2", ahss::CWComplex::cp2()),
    ];
    let coefficients = vec![
        ("Z", fixtures::point_complex(Ring::Integers)),
        ("two-stage", fixtures::two_stage_coefficients(Ring::Integers)),
    ];
    let mut checks = 0usize;
    for (xname, x) in &spaces {
        for (mname, m) in &coefficients {
            checks += 1;
            let fail = |description: String| Counterexample {
                description,
                artifact: match ahss::skeletal_filtration(x, m) {
                    Ok(f) => io::filtered_to_json(&f, None),
                    Err(_) => String::new(),
                },
            };
            match ahss::maunder_compare(x, m, config.rmax) {
                Err(e) => {
                    return CampaignOutcome {
                        checks,
                        counterexample: Some(fail(format!("{xname} ⊗ {mname}: {e}"))),
                    }
                }
                Ok(report) => {
                    if !report.is_clean() {
                        return CampaignOutcome {
                            checks,
                            counterexample: Some(fail(format!(
                                "{xname} ⊗ {mname}: {report:?}"
                            ))),
                        };
                    }
                }
            }
            if let Some(fault) = config.fault {
                // Mutation smoke test: a corrupted page must be caught.
                let outcome = (|| -> Result<(), String> {
                    let skel = ahss::skeletal_filtration(x, m).map_err(|e| e.to_string())?;
                    let wh = ahss::whitehead_filtration_coeff(x, m).map_err(|e| e.to_string())?;
                    let dec = deligne_decalage(&skel).map_err(|e| e.to_string())?;
                    let mut a = er_classical(&dec, 2).map_err(|e| e.to_string())?;
                    perturb_page(&mut a, fault, Ring::Integers);
                    let b = er_classical(&wh, 2).map_err(|e| e.to_string())?;
                    let t = match fault {
                        Fault::Transform => Mat2([[0, -1], [1, 1]]),
                        _ => Mat2::identity(),
                    };
                    let report = compare_pages(&a, &b, t).map_err(|e| e.to_string())?;
                    if report.is_clean() {
                        Ok(())
                    } else {
                        Err(format!("{:?}", report.mismatches))
                    }
                })();
                if let Err(description) = outcome {
                    return CampaignOutcome {
                        checks,
                        counterexample: Some(fail(format!("{xname} ⊗ {mname}: {description}"))),
                    };
                }
            }
        }
    }
    CampaignOutcome { checks, counterexample: None }
}
