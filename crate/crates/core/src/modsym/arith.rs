//! Small integer utilities for the modular symbol engine: 2x2 integer
//! matrices, cusps, Manin's continued-fraction path decomposition.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Row-major 2x2 integer matrix (a, b; c, d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct M2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

pub const SIGMA: M2 = M2 { a: 0, b: -1, c: 1, d: 0 };
pub const TAU: M2 = M2 { a: 0, b: -1, c: 1, d: -1 };
pub const ETA: M2 = M2 { a: -1, b: 0, c: 0, d: 1 };

impl M2 {
    pub fn ident() -> Self {
        M2 { a: 1, b: 0, c: 0, d: 1 }
    }
    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }
    pub fn mul(&self, o: &M2) -> M2 {
        M2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
    /// Inverse for det = ±1 matrices.
    pub fn inv_unimodular(&self) -> M2 {
        let det = self.det();
        assert!(det == 1 || det == -1);
        M2 { a: det * self.d, b: -det * self.b, c: -det * self.c, d: det * self.a }
    }
    /// Adjugate (d, -b; -c, a).
    pub fn adj(&self) -> M2 {
        M2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }
    /// Action on a cusp (as column vector / projective point).
    pub fn act_cusp(&self, x: &Cusp) -> Cusp {
        Cusp::new(self.a * x.num + self.b * x.den, self.c * x.num + self.d * x.den)
    }
}

/// A cusp p/q in lowest terms with q >= 0; infinity is (1, 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cusp {
    pub num: i64,
    pub den: i64,
}

impl Cusp {
    pub fn new(mut num: i64, mut den: i64) -> Self {
        assert!(num != 0 || den != 0);
        let g = gcd_i64(num, den);
        num /= g;
        den /= g;
        if den < 0 || (den == 0 && num < 0) {
            num = -num;
            den = -den;
        }
        Cusp { num, den }
    }
    pub fn infinity() -> Self {
        Cusp { num: 1, den: 0 }
    }
    pub fn zero() -> Self {
        Cusp { num: 0, den: 1 }
    }
    pub fn is_infinity(&self) -> bool {
        self.den == 0
    }
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended gcd: (g, x, y) with a x + b y = g >= 0.
pub fn xgcd_i64(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Lift a pair (c, d) mod N with gcd(c, d, N) = 1 to a matrix in SL_2(Z)
/// whose bottom row is congruent to (c, d) mod N.
pub fn lift_to_sl2(c: u64, d: u64, n: u64) -> M2 {
    if n == 1 {
        return M2::ident();
    }
    let n = n as i64;
    let mut c0 = (c as i64) % n;
    let mut d0 = (d as i64) % n;
    if c0 == 0 && d0 == 0 {
        panic!("invalid P1 pair");
    }
    // adjust to gcd(c0, d0) = 1 by adding multiples of N to d (or c)
    if c0 == 0 {
        c0 = n;
    }
    let mut t = 0;
    loop {
        let dd = d0 + t * n;
        if gcd_i64(c0, dd) == 1 {
            d0 = dd;
            break;
        }
        let dd = d0 - t * n;
        if gcd_i64(c0, dd) == 1 {
            d0 = dd;
            break;
        }
        t += 1;
        assert!(t < 10_000, "lift_to_sl2 failed");
    }
    let (g, x, y) = xgcd_i64(d0, -c0);
    assert_eq!(g, 1);
    // a*d0 - b*c0 = 1 with a = x, b = y
    M2 { a: x, b: y, c: c0, d: d0 }
}

/// Manin's trick: {infinity} - {x} as a sum of unimodular path divisors
/// div(g) = {g0} - {g infinity}: returns matrices g_i with
/// sum_i div(g_i) = {infinity} - {x}.
pub fn paths_from_infinity(x: &Cusp) -> Vec<M2> {
    if x.is_infinity() {
        return vec![];
    }
    // continued fraction convergents of x
    let (mut p, mut q) = (x.num, x.den);
    // CF digits by floor division
    let mut digits = Vec::new();
    while q != 0 {
        let a = p.div_euclid(q);
        digits.push(a);
        let r = p - a * q;
        p = q;
        q = r;
    }
    // convergents p_i/q_i with p_{-1}/q_{-1} = 1/0
    let (mut pm1, mut qm1) = (1i64, 0i64);
    let (mut pm2, mut qm2) = (0i64, 1i64);
    let mut out = Vec::new();
    for (i, &a) in digits.iter().enumerate() {
        let pi = a * pm1 + pm2;
        let qi = a * qm1 + qm2;
        // gamma_i = (p_i, eps*p_{i-1}; q_i, eps*q_{i-1}), eps = (-1)^(i-1)
        let eps = if i % 2 == 0 { -1 } else { 1 };
        let g = M2 { a: pi, b: eps * pm1, c: qi, d: eps * qm1 };
        debug_assert_eq!(g.det(), 1);
        debug_assert_eq!(g.act_cusp(&Cusp::zero()), Cusp::new(pm1, qm1));
        debug_assert_eq!(g.act_cusp(&Cusp::infinity()), Cusp::new(pi, qi));
        out.push(g);
        pm2 = pm1;
        qm2 = qm1;
        pm1 = pi;
        qm1 = qi;
    }
    out
}

/// Decompose {to} - {from} into signed unimodular paths:
/// returns (sign, g) with sum sign * div(g) = {to} - {from}.
pub fn decompose_divisor(from: &Cusp, to: &Cusp) -> Vec<(i8, M2)> {
    // {to} - {from} = ({inf} - {from}) - ({inf} - {to})
    let mut out: Vec<(i8, M2)> = paths_from_infinity(from).into_iter().map(|g| (1i8, g)).collect();
    out.extend(paths_from_infinity(to).into_iter().map(|g| (-1i8, g)));
    out
}

/// Matrix of the right action P -> P|g on V_m in the monomial basis
/// (X^j Y^(m-j), j = 0..m), exact integer entries:
/// (P|g)(X, Y) = P(dX - cY, -bX + aY).
pub fn act_matrix(g: &M2, m: usize) -> Vec<Vec<BigInt>> {
    // column j = image of X^j Y^(m-j) expanded in the basis
    let d = BigInt::from(g.d);
    let c = BigInt::from(g.c);
    let b = BigInt::from(g.b);
    let a = BigInt::from(g.a);
    // (dX - cY)^j coefficients in X^t Y^(j-t)
    let mut mat = vec![vec![BigInt::zero(); m + 1]; m + 1];
    for j in 0..=m {
        // first = (dX - cY)^j: coeff of X^t Y^(j-t) = C(j,t) d^t (-c)^(j-t)
        let mut first = vec![BigInt::zero(); j + 1];
        for t in 0..=j {
            first[t] = binom_big(j, t) * d.pow(t as u32) * (-c.clone()).pow((j - t) as u32);
        }
        // second = (-bX + aY)^(m-j): coeff of X^s Y^(m-j-s) = C(m-j,s)(-b)^s a^(m-j-s)
        let mj = m - j;
        let mut second = vec![BigInt::zero(); mj + 1];
        for s in 0..=mj {
            second[s] = binom_big(mj, s) * (-b.clone()).pow(s as u32) * a.pow((mj - s) as u32);
        }
        // product: X^(t+s) Y^(m-t-s)
        for t in 0..=j {
            if first[t].is_zero() {
                continue;
            }
            for s in 0..=mj {
                if second[s].is_zero() {
                    continue;
                }
                let prod = &first[t] * &second[s];
                mat[t + s][j] += prod;
            }
        }
    }
    mat
}

pub fn binom_big(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_decomposition_telescopes() {
        // check on a few rationals that the signed paths telescope correctly
        for (num, den) in [(3i64, 7i64), (-5, 12), (22, 7), (1, 5), (0, 1), (-1, 1)] {
            let x = Cusp::new(num, den);
            let paths = paths_from_infinity(&x);
            // formal sum of {g0} - {ginf}
            let mut acc: std::collections::HashMap<Cusp, i64> = Default::default();
            for g in &paths {
                *acc.entry(g.act_cusp(&Cusp::zero())).or_insert(0) += 1;
                *acc.entry(g.act_cusp(&Cusp::infinity())).or_insert(0) -= 1;
            }
            acc.retain(|_, v| *v != 0);
            let mut expect: std::collections::HashMap<Cusp, i64> = Default::default();
            expect.insert(Cusp::infinity(), 1);
            *expect.entry(x).or_insert(0) -= 1;
            expect.retain(|_, v| *v != 0);
            assert_eq!(acc, expect, "x = {num}/{den}");
        }
    }

    #[test]
    fn act_matrix_composition() {
        // (P|g1)|g2 = P|(g1 g2) as matrices: act(g1 g2) = act(g2) * act(g1)
        let g1 = M2 { a: 2, b: 1, c: 3, d: 2 };
        let g2 = M2 { a: 1, b: -1, c: 1, d: 0 };
        let m = 4;
        let a1 = act_matrix(&g1, m);
        let a2 = act_matrix(&g2, m);
        let a12 = act_matrix(&g1.mul(&g2), m);
        // compose: apply g1 then g2 = multiply matrices act(g2)*act(g1)
        let mut comp = vec![vec![BigInt::zero(); m + 1]; m + 1];
        for i in 0..=m {
            for j in 0..=m {
                for k in 0..=m {
                    let t = &a2[i][k] * &a1[k][j];
                    comp[i][j] += t;
                }
            }
        }
        assert_eq!(comp, a12);
    }

    #[test]
    fn lift_bottom_row() {
        for n in [1u64, 5, 9, 14, 23, 27, 45] {
            for c in 0..n {
                for d in 0..n {
                    if gcd_i64(gcd_i64(c as i64, d as i64), n as i64) != 1 {
                        continue;
                    }
                    let g = lift_to_sl2(c, d, n);
                    assert_eq!(g.det(), 1);
                    assert_eq!(g.c.rem_euclid(n as i64) as u64, c % n);
                    assert_eq!(g.d.rem_euclid(n as i64) as u64, d % n);
                }
            }
        }
    }
}
