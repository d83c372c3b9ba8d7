//! Arithmetic in Z/p^M: the coefficient ring for everything p-adic in this
//! crate. Residues are `BigUint`s in [0, p^M); the context carries p and M.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZpCtx {
    pub p: u64,
    pub m: u32,
    modulus: BigUint,
}

impl ZpCtx {
    pub fn new(p: u64, m: u32) -> Self {
        assert!(m >= 1);
        let modulus = BigUint::from(p).pow(m);
        ZpCtx { p, m, modulus }
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn reduce_int(&self, x: &BigInt) -> BigUint {
        let m = BigInt::from(self.modulus.clone());
        let mut r = x % &m;
        if r.is_negative() {
            r += &m;
        }
        r.to_biguint().unwrap()
    }

    pub fn reduce(&self, x: &BigUint) -> BigUint {
        x % &self.modulus
    }

    pub fn from_u64(&self, x: u64) -> BigUint {
        self.reduce(&BigUint::from(x))
    }

    pub fn from_i64(&self, x: i64) -> BigUint {
        self.reduce_int(&BigInt::from(x))
    }

    pub fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + b) % &self.modulus
    }

    pub fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        ((a + &self.modulus) - b) % &self.modulus
    }

    pub fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.modulus - a
        }
    }

    pub fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.modulus
    }

    pub fn pow(&self, a: &BigUint, e: u64) -> BigUint {
        a.modpow(&BigUint::from(e), &self.modulus)
    }

    /// p-adic valuation of a residue; `None` means the residue is 0 mod p^M
    /// (valuation >= M, not further resolvable at this precision).
    pub fn val(&self, a: &BigUint) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let p = BigUint::from(self.p);
        let mut v = 0u32;
        let mut x = a.clone();
        while (&x % &p).is_zero() {
            x /= &p;
            v += 1;
        }
        Some(v)
    }

    /// Write a = unit * p^v; `None` for the zero residue.
    pub fn unit_and_exp(&self, a: &BigUint) -> Option<(BigUint, u32)> {
        let v = self.val(a)?;
        let pv = BigUint::from(self.p).pow(v);
        Some((a / pv, v))
    }

    /// Inverse of a unit residue (Newton lift of the mod-p inverse).
    pub fn inv_unit(&self, a: &BigUint) -> BigUint {
        assert!(!(a % BigUint::from(self.p)).is_zero(), "not a unit");
        let a0 = (a % BigUint::from(self.p)).to_u64().unwrap();
        let mut x = BigUint::from(mod_inverse_u64(a0, self.p));
        // x_{k+1} = x_k (2 - a x_k) doubles correct digits each step.
        let two = BigUint::from(2u32);
        let mut digits = 1u32;
        while digits < self.m {
            let t = self.sub(&two, &self.mul(a, &x));
            x = self.mul(&x, &t);
            digits *= 2;
        }
        x
    }

    /// Teichmueller lift of a (gcd(a,p)=1): the (p-1)-st root of unity
    /// congruent to a mod p, computed by iterating x -> x^p to its fixed
    /// point mod p^M.
    pub fn teichmuller(&self, a: u64) -> BigUint {
        assert!(a % self.p != 0, "teichmuller requires gcd(a,p)=1");
        let mut x = self.from_u64(a);
        for _ in 0..self.m {
            let y = self.pow(&x, self.p);
            if y == x {
                break;
            }
            x = y;
        }
        debug_assert_eq!(self.pow(&x, self.p), x);
        x
    }

    /// Row of binomial coefficients C(n, i) mod p^M for 0 <= i < len,
    /// computed exactly (the running p-power is tracked separately so the
    /// divisions in C(n,i+1) = C(n,i)(n-i)/(i+1) never hit non-units).
    pub fn binom_row(&self, n: u64, len: usize) -> Vec<BigUint> {
        let mut out = Vec::with_capacity(len);
        // current = unit * p^exp
        let mut unit = BigUint::one();
        let mut exp: i64 = 0;
        for i in 0..len as u64 {
            if i > n {
                out.push(BigUint::zero());
                continue;
            }
            if i > 0 {
                let (nu, ne) = split_p(n - i + 1, self.p);
                let (du, de) = split_p(i, self.p);
                unit = self.mul(&unit, &self.from_u64(nu));
                unit = self.mul(&unit, &self.inv_unit(&self.from_u64(du)));
                exp += ne as i64 - de as i64;
            }
            debug_assert!(exp >= 0, "binomial coefficient must be integral");
            let e = exp.min(self.m as i64) as u32;
            if e >= self.m {
                out.push(BigUint::zero());
            } else {
                let pe = BigUint::from(self.p).pow(e);
                out.push(self.mul(&unit, &pe));
            }
        }
        out
    }
}

fn split_p(mut x: u64, p: u64) -> (u64, u32) {
    assert!(x > 0);
    let mut e = 0;
    while x % p == 0 {
        x /= p;
        e += 1;
    }
    (x, e)
}

pub fn mod_inverse_u64(a: u64, m: u64) -> u64 {
    // extended Euclid
    let (mut t, mut newt) = (0i128, 1i128);
    let (mut r, mut newr) = (m as i128, (a % m) as i128);
    while newr != 0 {
        let q = r / newr;
        (t, newt) = (newt, t - q * newt);
        (r, newr) = (newr, r - q * newr);
    }
    assert!(r == 1, "not invertible");
    (((t % m as i128) + m as i128) % m as i128) as u64
}

/// Kronecker symbol (a|n), defined for all integers.
pub fn kronecker(mut a: i64, mut n: i64) -> i64 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    let mut k = if v % 2 == 0 {
        1
    } else {
        // (a|2)^v
        match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        }
    };
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    // now n odd positive
    loop {
        a = a.rem_euclid(n);
        if a == 0 {
            return if n == 1 { k } else { 0 };
        }
        v = 0;
        while a % 2 == 0 {
            a /= 2;
            v += 1;
        }
        if v % 2 == 1 {
            match n.rem_euclid(8) {
                3 | 5 => k = -k,
                _ => {}
            }
        }
        // quadratic reciprocity for odd positive a, n
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            k = -k;
        }
        std::mem::swap(&mut a, &mut n);
        if n == 1 {
            return k;
        }
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn teichmuller_examples() {
        // omega(1) = 1 in any context
        let z = ZpCtx::new(5, 2);
        assert_eq!(z.teichmuller(1), BigUint::one());
        // p=5, M=2: omega(2) = 7 mod 25 (2^5 = 32 = 7, 7^5 = 7 mod 25)
        assert_eq!(z.teichmuller(2), BigUint::from(7u32));
        // defining property at p=7: omega(a)^6 = 1 mod 7^M for all a
        let z7 = ZpCtx::new(7, 8);
        for a in 1..7u64 {
            let w = z7.teichmuller(a);
            assert_eq!(z7.pow(&w, 6), BigUint::one());
            assert_eq!(&w % BigUint::from(7u32), BigUint::from(a));
        }
    }

    #[test]
    fn teichmuller_multiplicative() {
        let z = ZpCtx::new(7, 10);
        for a in 1..7u64 {
            for b in 1..7u64 {
                let lhs = z.mul(&z.teichmuller(a), &z.teichmuller(b));
                let rhs = z.teichmuller((a * b) % 7);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn binom_row_matches_exact() {
        let z = ZpCtx::new(5, 12);
        let row = z.binom_row(25, 26);
        // C(25, 5) = 53130  (contains a factor 5)
        assert_eq!(row[5], z.from_u64(53130));
        // C(25, 25) = 1
        assert_eq!(row[25], BigUint::one());
        // Pascal check against exact bigints
        let mut exact = vec![BigUint::one()];
        for i in 0..25u64 {
            let last = exact.last().unwrap().clone();
            exact.push(last * BigUint::from(25 - i) / BigUint::from(i + 1));
        }
        for (i, e) in exact.iter().enumerate() {
            assert_eq!(row[i], z.reduce(e), "i={i}");
        }
    }

    #[test]
    fn inv_unit_roundtrip() {
        let z = ZpCtx::new(5, 20);
        for a in [1u64, 2, 3, 4, 6, 7, 123, 999_983] {
            let x = z.from_u64(a);
            if (&x % BigUint::from(5u32)).is_zero() {
                continue;
            }
            assert_eq!(z.mul(&x, &z.inv_unit(&x)), BigUint::one());
        }
    }

    #[test]
    fn kronecker_agrees_with_legendre() {
        // (a|7): squares mod 7 are 1,2,4
        for (a, want) in [(1i64, 1i64), (2, 1), (3, -1), (4, 1), (5, -1), (6, -1)] {
            assert_eq!(kronecker(a, 7), want);
        }
        assert_eq!(kronecker(-4, 7), -1); // chi_{-4}(7) = -1
        assert_eq!(kronecker(-8, 3), 1);
        assert_eq!(kronecker(-8, 5), -1);
        assert_eq!(kronecker(-8, 7), -1);
        assert_eq!(kronecker(-3, 7), 1); // 7 = 1 mod 3 splits
    }
}
