use super::matrix::ExactMatrix;
use super::ring::Ring;
use num::BigInt;
use std::fmt;

/// A presentation of a finitely generated module: `generators` free
/// generators modulo the column span of `relations`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    pub relations: ExactMatrix,
}

/// Isomorphism data of a finitely generated module over the coefficient
/// ring: a free rank plus invariant factors `d_1 | d_2 | ...` (each a
/// positive non-unit; always empty over a field). Two modules are
/// isomorphic iff these agree. When the module arises as a subquotient of
/// an ambient free module, `generator_lift` holds one ambient representative
/// per generator: torsion generators first, in invariant-factor order, then
/// free generators.
#[derive(Clone, Debug)]
pub struct FgModule {
    pub ring: Ring,
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
    pub generator_lift: Option<ExactMatrix>,
    pub presentation: Option<Presentation>,
}

impl PartialEq for FgModule {
    /// Isomorphism-class equality: ring, free rank, and invariant factors.
    /// Generator lifts are representatives, not part of the class.
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.free_rank == other.free_rank
            && self.invariant_factors == other.invariant_factors
    }
}

impl Eq for FgModule {}

impl FgModule {
    pub fn zero(ring: Ring) -> Self {
        FgModule {
            ring,
            free_rank: 0,
            invariant_factors: vec![],
            generator_lift: None,
            presentation: None,
        }
    }

    pub fn free(ring: Ring, rank: usize) -> Self {
        FgModule {
            ring,
            free_rank: rank,
            invariant_factors: vec![],
            generator_lift: None,
            presentation: None,
        }
    }

    /// `Z/d` and friends, given cyclic orders. Orders must form a
    /// divisibility chain to be invariant factors; use
    /// [`FgModule::from_cyclic_orders`] to normalize arbitrary orders.
    pub fn torsion(ring: Ring, factors: Vec<BigInt>) -> Self {
        FgModule {
            ring,
            free_rank: 0,
            invariant_factors: factors,
            generator_lift: None,
            presentation: None,
        }
    }

    /// Build the isomorphism class of `⊕ Z/n_i ⊕ Z^free` from an arbitrary
    /// multiset of cyclic orders (`0` meaning a free summand).
    pub fn from_cyclic_orders(ring: Ring, orders: &[BigInt], mut free: usize) -> Self {
        use num::{Integer, One, Signed, Zero};
        let mut torsion: Vec<BigInt> = Vec::new();
        for n in orders {
            let n = n.abs();
            if n.is_zero() {
                free += 1;
            } else if !n.is_one() {
                torsion.push(n);
            }
        }
        // Repeatedly fold pairs (a, b) into (gcd, lcm) until the list is a
        // divisibility chain.
        loop {
            torsion.sort();
            let mut changed = false;
            for i in 0..torsion.len().saturating_sub(1) {
                let a = torsion[i].clone();
                let b = torsion[i + 1].clone();
                if (&b % &a).is_zero() {
                    continue;
                }
                let g = a.gcd(&b);
                let l = &a * &b / &g;
                torsion[i] = g;
                torsion[i + 1] = l;
                changed = true;
            }
            if !changed {
                break;
            }
        }
        torsion.retain(|d| !d.is_one());
        FgModule {
            ring,
            free_rank: free,
            invariant_factors: torsion,
            generator_lift: None,
            presentation: None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Number of generators in the stored lift (torsion then free).
    pub fn num_generators(&self) -> usize {
        self.invariant_factors.len() + self.free_rank
    }

    /// Direct sum of isomorphism classes.
    pub fn direct_sum(&self, other: &FgModule) -> FgModule {
        assert_eq!(self.ring, other.ring, "direct sum over one ring");
        let mut orders: Vec<BigInt> = self.invariant_factors.clone();
        orders.extend(other.invariant_factors.iter().cloned());
        FgModule::from_cyclic_orders(self.ring, &orders, self.free_rank + other.free_rank)
    }
}

impl fmt::Display for FgModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let base = match self.ring {
            Ring::Integers => "Z".to_string(),
            Ring::Rationals => "Q".to_string(),
            Ring::PrimeField(p) => format!("F{p}"),
        };
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(base.clone()),
            r => parts.push(format!("{base}^{r}")),
        }
        for d in &self.invariant_factors {
            parts.push(format!("{base}/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}
