//! Dirichlet characters with values in a base number field F = Q(chi).

use crate::nf::{Field, NfCtx, NfElem, NumberField};
use crate::zp::kronecker;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Construction recipe, kept for serialization/provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CharacterKind {
    Trivial,
    /// Kronecker symbol (disc | .), disc a fundamental discriminant whose
    /// conductor divides the modulus.
    Kronecker { disc: i64 },
    /// chi(gen) = zeta_order^power on (Z/modulus)^* cyclic with generator gen.
    CyclicGen { gen: u64, order: u64, power: u64 },
}

#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    pub modulus: u64,
    pub kind: CharacterKind,
    pub base: Arc<NumberField>,
    /// chi(a) for a = 0..modulus-1 (zero element of F at non-units)
    values: Vec<NfElem>,
    pub order: u64,
}

impl DirichletCharacter {
    pub fn trivial(modulus: u64) -> Self {
        let base = NumberField::rationals();
        let ctx = NfCtx(base.clone());
        let values = (0..modulus.max(1))
            .map(|a| {
                if crate::modsym::arith::gcd_i64(a as i64, modulus as i64) == 1 || modulus == 1 {
                    ctx.one()
                } else {
                    ctx.zero()
                }
            })
            .collect();
        DirichletCharacter { modulus, kind: CharacterKind::Trivial, base, values, order: 1 }
    }

    pub fn kronecker_char(modulus: u64, disc: i64) -> Self {
        let base = NumberField::rationals();
        let ctx = NfCtx(base.clone());
        let values = (0..modulus)
            .map(|a| {
                if crate::modsym::arith::gcd_i64(a as i64, modulus as i64) != 1 {
                    ctx.zero()
                } else {
                    ctx.0.elem_from_q(crate::nf::q_from_i64(kronecker(disc, a as i64)))
                }
            })
            .collect();
        DirichletCharacter { modulus, kind: CharacterKind::Kronecker { disc }, base, values, order: 2 }
    }

    /// Character on a cyclic unit group with chosen generator: values are
    /// powers of the canonical generator of Q(zeta_order).
    pub fn cyclic(modulus: u64, gen: u64, order: u64, power: u64) -> Self {
        // base field = Q(zeta_order) via the cyclotomic polynomial
        let cyc = cyclotomic_zpoly(order);
        let base = NumberField::new(cyc);
        let ctx = NfCtx(base.clone());
        // discrete logs base gen
        let mut dlog = vec![u64::MAX; modulus as usize];
        let mut x = 1u64;
        for t in 0..modulus {
            if dlog[x as usize] == u64::MAX {
                dlog[x as usize] = t;
            }
            x = (x * gen) % modulus;
        }
        let zeta = base.gen();
        let values = (0..modulus)
            .map(|a| {
                if crate::modsym::arith::gcd_i64(a as i64, modulus as i64) != 1 {
                    ctx.zero()
                } else {
                    let t = dlog[a as usize];
                    assert!(t != u64::MAX, "generator does not generate");
                    // zeta^(power * t)
                    let mut acc = ctx.one();
                    for _ in 0..((power * t) % order) {
                        acc = ctx.mul(&acc, &zeta);
                    }
                    acc
                }
            })
            .collect();
        DirichletCharacter { modulus, kind: CharacterKind::CyclicGen { gen, order, power }, base, values, order }
    }

    pub fn value(&self, a: i64) -> NfElem {
        let m = self.modulus.max(1) as i64;
        self.values[a.rem_euclid(m) as usize].clone()
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.kind, CharacterKind::Trivial)
    }

    /// chi(-1) as +1/-1.
    pub fn parity(&self) -> i8 {
        let v = self.value(-1);
        let ctx = NfCtx(self.base.clone());
        if v == ctx.one() {
            1
        } else {
            -1
        }
    }

    /// The inverse character (same base field).
    pub fn inverse(&self) -> Self {
        match &self.kind {
            CharacterKind::Trivial | CharacterKind::Kronecker { .. } => self.clone(),
            CharacterKind::CyclicGen { gen, order, power } => {
                DirichletCharacter::cyclic(self.modulus, *gen, *order, (order - power % order) % order)
            }
        }
    }
}

/// Cyclotomic polynomial Phi_order as integer coefficients (monic).
pub fn cyclotomic_zpoly(order: u64) -> Vec<BigInt> {
    use num_traits::{One, Zero};
    if order == 1 {
        return vec![-BigInt::one(), BigInt::one()];
    }
    // compute x^order - 1 divided by product of Phi_d for proper divisors d
    let mut num = vec![BigInt::zero(); order as usize + 1];
    num[0] = -BigInt::one();
    num[order as usize] = BigInt::one();
    for d in 1..order {
        if order % d == 0 {
            let phi_d = cyclotomic_zpoly(d);
            num = zpoly_exact_div(&num, &phi_d);
        }
    }
    num
}

fn zpoly_exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    use num_traits::Zero;
    let mut r: Vec<BigInt> = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i].clone();
        if !c.is_zero() {
            // b is monic up to sign of leading coeff (cyclotomics are monic)
            let lead = b.last().unwrap();
            let f = &c / lead;
            q[i - db] = f.clone();
            for j in 0..=db {
                let t = &b[j] * &f;
                r[i - db + j] -= t;
            }
        }
    }
    assert!(r.iter().all(|c| c.is_zero()), "division not exact");
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::q_from_i64;

    #[test]
    fn parity_checks() {
        assert_eq!(DirichletCharacter::trivial(11).parity(), 1);
        assert_eq!(DirichletCharacter::kronecker_char(7, -7).parity(), -1);
        assert_eq!(DirichletCharacter::kronecker_char(4, -4).parity(), -1);
        assert_eq!(DirichletCharacter::kronecker_char(8, -8).parity(), -1);
        // order-6 character mod 13 (generator 2): chi(-1) = chi(2^6) = zeta^6 = 1
        let chi = DirichletCharacter::cyclic(13, 2, 6, 1);
        assert_eq!(chi.parity(), 1);
    }

    #[test]
    fn kronecker_m8_values() {
        let chi = DirichletCharacter::kronecker_char(8, -8);
        assert_eq!(chi.value(1), vec![q_from_i64(1)]);
        assert_eq!(chi.value(3), vec![q_from_i64(1)]);
        assert_eq!(chi.value(5), vec![q_from_i64(-1)]);
        assert_eq!(chi.value(7), vec![q_from_i64(-1)]);
    }

    #[test]
    fn cyclotomic_polys() {
        use num_bigint::BigInt;
        let z = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(cyclotomic_zpoly(6), z(&[1, -1, 1]));
        assert_eq!(cyclotomic_zpoly(4), z(&[1, 0, 1]));
        assert_eq!(cyclotomic_zpoly(5), z(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn order6_character_multiplicative() {
        let chi = DirichletCharacter::cyclic(13, 2, 6, 1);
        let ctx = NfCtx(chi.base.clone());
        for a in 1..13i64 {
            for b in 1..13i64 {
                let lhs = ctx.mul(&chi.value(a), &chi.value(b));
                assert_eq!(lhs, chi.value(a * b));
            }
        }
        // order is exactly 6
        let mut acc = ctx.one();
        for _ in 0..6 {
            acc = ctx.mul(&acc, &chi.value(2));
        }
        assert_eq!(acc, ctx.one());
        let mut acc3 = ctx.one();
        for _ in 0..3 {
            acc3 = ctx.mul(&acc3, &chi.value(2));
        }
        assert_ne!(acc3, ctx.one());
    }
}
