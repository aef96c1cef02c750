use super::fg::{FgModule, Presentation};
use super::matrix::ExactMatrix;
use super::ring::{Ring, Scalar};
use super::snf::smith_normal_form;
use super::span::{
    intersect_spans, preimage_span, span_basis, span_contains, sum_spans, Solver,
};
use crate::{Error, Result};
use num::{BigInt, One, Signed, Zero};

/// The subquotient `(span N + span D) / span D` of an ambient free module,
/// classified up to isomorphism with tracked generator representatives.
/// `span(D) ⊆ span(N)` is not required.
pub fn subquotient(ambient_rank: usize, n: &ExactMatrix, d: &ExactMatrix) -> Result<FgModule> {
    Ok(Subquotient::new(ambient_rank, n, d)?.module)
}

/// A subquotient together with its defining spans, supporting class
/// arithmetic and induced maps. Everything is anchored element-wise in the
/// ambient free module.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub ambient_rank: usize,
    pub numerator: ExactMatrix,
    pub denominator: ExactMatrix,
    pub module: FgModule,
}

impl Subquotient {
    pub fn new(ambient_rank: usize, n: &ExactMatrix, d: &ExactMatrix) -> Result<Self> {
        if n.rows() != ambient_rank || d.rows() != ambient_rank {
            return Err(Error::Shape(format!(
                "subquotient spans must have {} rows, got {} and {}",
                ambient_rank,
                n.rows(),
                d.rows()
            )));
        }
        if n.ring() != d.ring() {
            return Err(Error::RingMismatch(n.ring(), d.ring()));
        }
        let ring = n.ring();
        let numerator = span_basis(n);
        let denominator = span_basis(d);
        let module = classify(ring, ambient_rank, &numerator, &denominator)?;
        Ok(Subquotient { ambient_rank, numerator, denominator, module })
    }

    pub fn ring(&self) -> Ring {
        self.numerator.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.module.is_zero()
    }

    /// Generator representatives in the ambient module (torsion generators
    /// first, then free), as columns.
    pub fn generator_lift(&self) -> &ExactMatrix {
        self.module.generator_lift.as_ref().expect("subquotients always carry lifts")
    }

    /// Span of numerator plus denominator: all elements with a class here.
    pub fn total_span(&self) -> ExactMatrix {
        sum_spans(&self.numerator, &self.denominator)
    }

    /// Canonical coefficients of the class of `v` on the generators, or
    /// `None` if `v` has no class here (does not lie in `N + D`).
    /// Torsion coordinates are reduced modulo their invariant factor.
    pub fn class_coeffs(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let gens = self.generator_lift();
        let mix = gens.hcat(&self.denominator).expect("ambient ranks match");
        let sol = Solver::new(&mix).solve(v)?;
        let mut coeffs: Vec<Scalar> = sol[..gens.cols()].to_vec();
        self.reduce_coeffs(&mut coeffs);
        Some(coeffs)
    }

    /// Reduce generator coefficients to canonical form (torsion coordinates
    /// modulo the invariant factor).
    pub fn reduce_coeffs(&self, coeffs: &mut [Scalar]) {
        if self.ring() != Ring::Integers {
            return;
        }
        for (i, d) in self.module.invariant_factors.iter().enumerate() {
            use num::Integer;
            let reduced = coeffs[i].numer().mod_floor(d);
            coeffs[i] = Scalar::from(reduced);
        }
    }

    /// Is the class of `v` zero, i.e. `v ∈ span(D)`?
    pub fn class_is_zero(&self, v: &[Scalar]) -> bool {
        span_contains(&self.denominator, v)
    }

    /// A representative of the class with the given generator coefficients.
    pub fn representative(&self, coeffs: &[Scalar]) -> Vec<Scalar> {
        self.generator_lift().mul_vec(coeffs).expect("coefficient length")
    }

    /// The matrix of the map induced by the ambient matrix `t` (or the
    /// identity if `None`), with respect to the generators of `self` and
    /// `target`. Fails if the map is not well defined into the target,
    /// i.e. some generator image has no class there.
    pub fn induced_matrix(
        &self,
        target: &Subquotient,
        t: Option<&ExactMatrix>,
    ) -> Result<ExactMatrix> {
        let gens = self.generator_lift();
        let mut cols = Vec::with_capacity(gens.cols());
        for j in 0..gens.cols() {
            let v = gens.column(j);
            let image = match t {
                Some(t) => t.mul_vec(&v).expect("ambient map shape"),
                None => v,
            };
            let coeffs = target.class_coeffs(&image).ok_or_else(|| {
                Error::NoSolution("induced map does not land in the target subquotient".into())
            })?;
            cols.push(coeffs);
        }
        ExactMatrix::from_columns(self.ring(), target.module.num_generators(), &cols)
    }

    /// Kernel of the induced map as an isomorphism class: classes `[x]`
    /// with `t·x ∈ span(D_target)`.
    pub fn kernel_of_map(
        &self,
        target: &Subquotient,
        t: Option<&ExactMatrix>,
    ) -> Result<FgModule> {
        let total = self.total_span();
        let pre = match t {
            Some(t) => preimage_span(t, &target.denominator),
            None => target.denominator.clone(),
        };
        let n_ker = intersect_spans(&total, &pre);
        subquotient(self.ambient_rank, &n_ker, &self.denominator)
    }

    /// Image of the induced map as an isomorphism class.
    pub fn image_of_map(
        &self,
        target: &Subquotient,
        t: Option<&ExactMatrix>,
    ) -> Result<FgModule> {
        let mapped = match t {
            Some(t) => t.mul(&self.total_span()).expect("ambient map shape"),
            None => self.total_span(),
        };
        subquotient(target.ambient_rank, &mapped, &target.denominator)
    }
}

fn classify(
    ring: Ring,
    ambient_rank: usize,
    numerator: &ExactMatrix,
    denominator: &ExactMatrix,
) -> Result<FgModule> {
    let total = sum_spans(numerator, denominator);
    if total.cols() == 0 {
        let mut m = FgModule::zero(ring);
        m.generator_lift = Some(ExactMatrix::zeros(ring, ambient_rank, 0));
        return Ok(m);
    }
    match ring {
        Ring::Integers => classify_integers(ambient_rank, &total, denominator),
        _ => classify_field(ring, ambient_rank, &total, denominator),
    }
}

fn classify_field(
    ring: Ring,
    ambient_rank: usize,
    total: &ExactMatrix,
    denominator: &ExactMatrix,
) -> Result<FgModule> {
    // Greedily extend a basis of D to a basis of N + D; the extension
    // vectors represent a basis of the quotient.
    let mut current = denominator.clone();
    let mut lifts: Vec<Vec<Scalar>> = Vec::new();
    for j in 0..total.cols() {
        let v = total.column(j);
        if !span_contains(&current, &v) {
            current = sum_spans(&current, &ExactMatrix::from_columns(ring, ambient_rank, std::slice::from_ref(&v))?);
            lifts.push(v);
        }
    }
    let free_rank = lifts.len();
    let lift = ExactMatrix::from_columns(ring, ambient_rank, &lifts)?;
    Ok(FgModule {
        ring,
        free_rank,
        invariant_factors: vec![],
        generator_lift: Some(lift),
        presentation: Some(Presentation {
            generators: free_rank,
            relations: ExactMatrix::zeros(ring, free_rank, 0),
        }),
    })
}

fn classify_integers(
    _ambient_rank: usize,
    total: &ExactMatrix,
    denominator: &ExactMatrix,
) -> Result<FgModule> {
    let ring = Ring::Integers;
    // total is a lattice basis (Hermite form), so D expands over it
    // integrally and the quotient is coker of the coefficient matrix.
    let coeffs = super::span::solve_matrix(total, denominator)
        .ok_or_else(|| Error::NoSolution("denominator escapes numerator + denominator".into()))?;
    let s = smith_normal_form(&coeffs);
    let k = total.cols();
    let new_basis = total.mul(&s.u_inv).expect("basis change shape");
    let diag = s.diagonal();
    let mut torsion_idx: Vec<usize> = Vec::new();
    let mut torsion: Vec<BigInt> = Vec::new();
    let mut free_idx: Vec<usize> = Vec::new();
    for i in 0..k {
        let d = diag.get(i).cloned().unwrap_or_else(Scalar::zero);
        if d.is_zero() {
            free_idx.push(i);
        } else if !d.numer().abs().is_one() {
            torsion_idx.push(i);
            torsion.push(d.numer().abs());
        }
    }
    let mut order: Vec<usize> = torsion_idx;
    order.extend(free_idx.iter().copied());
    let lift = new_basis.select_cols(&order);
    Ok(FgModule {
        ring,
        free_rank: free_idx.len(),
        invariant_factors: torsion,
        generator_lift: Some(lift),
        presentation: Some(Presentation { generators: k, relations: coeffs }),
    })
}
