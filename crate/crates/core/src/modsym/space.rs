//! Weight-k modular symbol spaces for Gamma_0(N) with nebentype over exact
//! fields: Manin-symbol presentation (2- and 3-term relations), boundary map
//! to cusps, cuspidal subspace, star involution and Hecke operators.
//!
//! The space is the homological (coinvariants) model twisted by psi =
//! chi^{-1}; Hecke-eigen *functionals* on it (the Hom-side symbols, which
//! carry chi) are built in `eigen`.

use super::arith::{act_matrix, decompose_divisor, gcd_i64, lift_to_sl2, xgcd_i64, Cusp, M2, ETA, SIGMA, TAU};
use super::character::DirichletCharacter;
use crate::error::Error;
use crate::linalg::{solve_presentation, Mat};
use crate::nf::{Field, NfCtx, NfElem};
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

/// Desk-scale guard: N*k beyond this errors with `TooLarge`.
pub const DEFAULT_SIZE_GUARD: u64 = 4096;

/// P^1(Z/N): canonical representatives and unit normalizers.
#[derive(Debug, Clone)]
pub struct P1Table {
    pub n: u64,
    pub reps: Vec<(u64, u64)>,
    /// (c, d) -> (rep index, lambda) with (c, d) = lambda * rep mod N
    index: HashMap<(u64, u64), (usize, u64)>,
}

impl P1Table {
    pub fn new(n: u64) -> Self {
        if n == 1 {
            let mut index = HashMap::new();
            index.insert((0, 0), (0usize, 1u64));
            return P1Table { n, reps: vec![(0, 0)], index };
        }
        let units: Vec<u64> = (1..n).filter(|&u| gcd_i64(u as i64, n as i64) == 1).collect();
        let mut reps = Vec::new();
        let mut index: HashMap<(u64, u64), (usize, u64)> = HashMap::new();
        for c in 0..n {
            for d in 0..n {
                if gcd_i64(gcd_i64(c as i64, d as i64), n as i64) != 1 {
                    continue;
                }
                if index.contains_key(&(c, d)) {
                    continue;
                }
                // canonical representative: lexicographic minimum of the orbit
                let mut best = (c, d);
                let mut best_l = 1u64;
                for &u in &units {
                    let cand = ((u * c) % n, (u * d) % n);
                    if cand < best {
                        best = cand;
                        best_l = u;
                    }
                }
                let rep_idx = reps.len();
                reps.push(best);
                // (c,d) = lambda * rep with lambda = best_l^{-1}; fill whole orbit
                for &u in &units {
                    let pt = ((u * best.0) % n, (u * best.1) % n);
                    index.entry(pt).or_insert((rep_idx, u));
                }
            }
        }
        P1Table { n, reps, index }
    }
    pub fn len(&self) -> usize {
        self.reps.len()
    }
    /// Normalize (c, d) (any integers): (rep index, lambda) with
    /// (c, d) = lambda * rep mod N.
    pub fn normalize(&self, c: i64, d: i64) -> (usize, u64) {
        if self.n == 1 {
            return (0, 1);
        }
        let n = self.n as i64;
        let key = ((c.rem_euclid(n)) as u64, (d.rem_euclid(n)) as u64);
        *self.index.get(&key).unwrap_or_else(|| panic!("non-primitive pair {key:?} mod {n}"))
    }
}

/// Data for one cusp class of Gamma_0(N).
#[derive(Debug, Clone)]
pub struct CuspClass {
    pub rep: Cusp,
    pub width: u64,
    /// parabolic generator of the stabilizer
    pub pgen: M2,
}

#[derive(Debug)]
pub struct ModSymSpace {
    pub level: u64,
    pub weight: u32,
    /// nebentype carried by eigen functionals (the forms' character)
    pub chi: DirichletCharacter,
    /// coinvariant twist chi^{-1} (used in all class normalizations)
    pub psi: DirichletCharacter,
    pub field: NfCtx,
    pub p1: P1Table,
    pub lifts: Vec<M2>,
    /// k - 2
    pub m: usize,
    pub ngens: usize,
    /// free generator ids after relations
    pub basis: Vec<usize>,
    /// expression of every generator over the basis
    pub expr: Vec<Vec<NfElem>>,
    pub cusp_classes: Vec<CuspClass>,
    /// basis of the cuspidal subspace in quotient coordinates
    pub cuspidal: Vec<Vec<NfElem>>,
    /// raw boundary images of the quotient basis (after stabilizer reduction)
    boundary_reduced: Mat<NfCtx>,
    hecke_cache: Mutex<BTreeMap<u64, Mat<NfCtx>>>,
    star_cache: Mutex<Option<Mat<NfCtx>>>,
}

impl ModSymSpace {
    pub fn gen_id(&self, class: usize, j: usize) -> usize {
        class * (self.m + 1) + j
    }

    /// psi(lambda)^{-1} = psi(lambda^{-1}), the class-normalization scalar.
    fn psi_inv_scalar(&self, lambda: u64) -> NfElem {
        if self.level == 1 {
            return self.field.one();
        }
        let linv = crate::zp::mod_inverse_u64(lambda % self.level, self.level);
        self.psi.value(linv as i64)
    }

    /// chi(lambda), the function-side scalar (used by eigen symbols).
    pub fn chi_scalar(&self, lambda: u64) -> NfElem {
        if self.level == 1 {
            return self.field.one();
        }
        self.chi.value((lambda % self.level) as i64)
    }

    /// The Manin class vector of Q (x) div(g) over the quotient basis,
    /// where Q is a V_m coefficient vector over F.
    pub fn manin_class_vector(&self, q_coeffs: &[NfElem], g: &M2) -> Vec<NfElem> {
        let f = &self.field;
        // [Q, g]-form: the element Q (x) div(g) equals [Q|g, g]
        let act = act_matrix(g, self.m);
        let r = apply_act(f, &act, q_coeffs);
        let (class, lambda) = self.p1.normalize(g.c, g.d);
        let scalar = self.psi_inv_scalar(lambda);
        let mut out = vec![f.zero(); self.basis.len()];
        for (j, coeff) in r.iter().enumerate() {
            if f.is_zero(coeff) {
                continue;
            }
            let c = f.mul(coeff, &scalar);
            let gid = self.gen_id(class, j);
            for (b, e) in self.expr[gid].iter().enumerate() {
                if !f.is_zero(e) {
                    out[b] = f.add(&out[b], &f.mul(&c, e));
                }
            }
        }
        out
    }

    /// Class vector of P (x) D for a degree-0 divisor D given as signed
    /// unimodular paths.
    pub fn divisor_class_vector(&self, p_coeffs: &[NfElem], from: &Cusp, to: &Cusp) -> Vec<NfElem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.basis.len()];
        for (sign, g) in decompose_divisor(from, to) {
            let v = self.manin_class_vector(p_coeffs, &g);
            for (i, c) in v.into_iter().enumerate() {
                if sign > 0 {
                    out[i] = f.add(&out[i], &c);
                } else {
                    out[i] = f.sub(&out[i], &c);
                }
            }
        }
        out
    }

    /// Hecke operator T_ell (ell coprime to N) or U_ell (ell | N) on the
    /// quotient basis.
    pub fn hecke(&self, ell: u64) -> Mat<NfCtx> {
        if let Some(m) = self.hecke_cache.lock().unwrap().get(&ell) {
            return m.clone();
        }
        let f = &self.field;
        let dim = self.basis.len();
        let mut cols: Vec<Vec<NfElem>> = Vec::with_capacity(dim);
        let reps = self.hecke_reps(ell);
        for &gid in &self.basis {
            let class = gid / (self.m + 1);
            let j = gid % (self.m + 1);
            let g0 = self.lifts[class];
            let mut acc = vec![f.zero(); dim];
            let mut p = vec![f.zero(); self.m + 1];
            p[j] = f.one();
            for delta in &reps {
                // P' = P|delta^adj
                let pprime = apply_act(f, &act_matrix(&delta.adj(), self.m), &p);
                let h = delta.mul(&g0);
                let from = h.act_cusp(&Cusp::infinity());
                let to = h.act_cusp(&Cusp::zero());
                let v = self.divisor_class_vector(&pprime, &from, &to);
                for (i, c) in v.into_iter().enumerate() {
                    acc[i] = f.add(&acc[i], &c);
                }
            }
            cols.push(acc);
        }
        // assemble column-wise into a matrix
        let mut mat = Mat::zero(f, dim, dim);
        for (cidx, col) in cols.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                *mat.at_mut(r, cidx) = v.clone();
            }
        }
        self.hecke_cache.lock().unwrap().insert(ell, mat.clone());
        mat
    }

    fn hecke_reps(&self, ell: u64) -> Vec<M2> {
        let l = ell as i64;
        let mut reps: Vec<M2> = (0..l).map(|r| M2 { a: 1, b: r, c: 0, d: l }).collect();
        if self.level % ell != 0 {
            // gamma_ell in Gamma_0(N) with lower-right = ell mod N
            let n = self.level as i64;
            let (g, a, b) = xgcd_i64(l, n);
            assert_eq!(g, 1);
            // a*l + b*n = 1 -> matrix (a, -b; n, l) has det a*l + b*n = 1
            let gamma = M2 { a, b: -b, c: n, d: l };
            debug_assert_eq!(gamma.det(), 1);
            reps.push(gamma.mul(&M2 { a: l, b: 0, c: 0, d: 1 }));
        }
        reps
    }

    /// Star involution (complex conjugation) on the quotient basis.
    pub fn star(&self) -> Mat<NfCtx> {
        if let Some(m) = self.star_cache.lock().unwrap().as_ref() {
            return m.clone();
        }
        let f = &self.field;
        let dim = self.basis.len();
        let mut mat = Mat::zero(f, dim, dim);
        for (cidx, &gid) in self.basis.iter().enumerate() {
            let class = gid / (self.m + 1);
            let j = gid % (self.m + 1);
            let g0 = self.lifts[class];
            // star[P, g] = [P|eta, eta g eta]
            let ge = ETA.mul(&g0).mul(&ETA);
            let mut p = vec![f.zero(); self.m + 1];
            p[j] = f.one();
            let pe = apply_act(f, &act_matrix(&ETA, self.m), &p);
            // [Q, h] = sum_j Q_j * psi-normalized expr(class(h), j)
            let (class2, lambda) = self.p1.normalize(ge.c, ge.d);
            let scalar = self.psi_inv_scalar(lambda);
            for (jj, coeff) in pe.iter().enumerate() {
                if f.is_zero(coeff) {
                    continue;
                }
                let c = f.mul(coeff, &scalar);
                let gid2 = self.gen_id(class2, jj);
                for (b, e) in self.expr[gid2].iter().enumerate() {
                    if !f.is_zero(e) {
                        *mat.at_mut(b, cidx) = f.add(mat.at(b, cidx), &f.mul(&c, e));
                    }
                }
            }
        }
        *self.star_cache.lock().unwrap() = Some(mat.clone());
        mat
    }

    pub fn dim_quotient(&self) -> usize {
        self.basis.len()
    }
    pub fn dim_cuspidal(&self) -> usize {
        self.cuspidal.len()
    }

    /// Reduced boundary image of a quotient vector (zero iff cuspidal).
    pub fn boundary_image(&self, v: &[NfElem]) -> Vec<NfElem> {
        self.boundary_reduced.apply(&self.field, v)
    }
}

fn apply_act(f: &NfCtx, act: &[Vec<BigInt>], v: &[NfElem]) -> Vec<NfElem> {
    let n = act.len();
    let mut out = vec![f.zero(); n];
    for i in 0..n {
        for j in 0..n {
            if act[i][j].is_zero() || f.is_zero(&v[j]) {
                continue;
            }
            let c = f.0.elem_from_q(BigRational::from(act[i][j].clone()));
            out[i] = f.add(&out[i], &f.mul(&c, &v[j]));
        }
    }
    out
}

use num_traits::Zero;

/// Find gamma in Gamma_0(N) with gamma * from = to, if the cusps are
/// equivalent.
pub fn cusp_transporter(from: &Cusp, to: &Cusp, n: u64) -> Option<M2> {
    let a_m = extend_cusp(from);
    let b_m = extend_cusp(to);
    let a_inv = a_m.inv_unimodular();
    for t in 0..n as i64 {
        let gamma = b_m.mul(&M2 { a: 1, b: t, c: 0, d: 1 }).mul(&a_inv);
        if gamma.c.rem_euclid(n as i64) == 0 {
            debug_assert_eq!(gamma.act_cusp(from), *to);
            return Some(gamma);
        }
    }
    None
}

/// Matrix in SL_2(Z) sending infinity to the cusp.
fn extend_cusp(x: &Cusp) -> M2 {
    let (g, s, t) = xgcd_i64(x.num, x.den);
    assert_eq!(g, 1);
    // (p, -t; q, s): det = p*s + t*q = 1
    let m = M2 { a: x.num, b: -t, c: x.den, d: s };
    debug_assert_eq!(m.det(), 1);
    debug_assert_eq!(m.act_cusp(&Cusp::infinity()), *x);
    m
}

/// Build the modular symbol space for (N, k, chi).
pub fn build_space(level: u64, weight: u32, chi: DirichletCharacter) -> Result<ModSymSpace> {
    if level as u64 * weight as u64 > DEFAULT_SIZE_GUARD {
        return Err(Error::TooLarge(format!("N*k = {} exceeds guard", level * weight as u64)));
    }
    assert!(weight >= 2);
    assert_eq!(chi.modulus, level.max(1));
    // parity: chi(-1) must equal (-1)^k
    let want = if weight % 2 == 0 { 1 } else { -1 };
    if chi.parity() != want {
        return Err(Error::Invalid("character parity does not match weight".into()));
    }
    let psi = chi.inverse();
    let field = NfCtx(chi.base.clone());
    let p1 = P1Table::new(level);
    let m = (weight - 2) as usize;
    let lifts: Vec<M2> = p1.reps.iter().map(|&(c, d)| lift_to_sl2(c, d, level)).collect();
    let ngens = p1.len() * (m + 1);

    let tmp = SpaceBuilder { level, field: field.clone(), psi: psi.clone(), p1: &p1, m };

    // relations: for every class, the sigma and tau rows for every monomial
    let mut rows: Vec<Vec<NfElem>> = Vec::new();
    for class in 0..p1.len() {
        let g0 = lifts[class];
        for j in 0..=m {
            let mut p = vec![field.zero(); m + 1];
            p[j] = field.one();
            // x + x|sigma
            let mut row = vec![field.zero(); ngens];
            row[class * (m + 1) + j] = field.one();
            tmp.add_manin_term(&mut row, &p, &g0.mul(&SIGMA), &SIGMA);
            rows.push(row);
            // x + x|tau + x|tau^2
            let mut row = vec![field.zero(); ngens];
            row[class * (m + 1) + j] = field.one();
            tmp.add_manin_term(&mut row, &p, &g0.mul(&TAU), &TAU);
            tmp.add_manin_term(&mut row, &p, &g0.mul(&TAU.mul(&TAU)), &TAU.mul(&TAU));
            rows.push(row);
        }
    }
    let (basis, expr) = solve_presentation(&field, rows, ngens);

    let mut space = ModSymSpace {
        level,
        weight,
        chi,
        psi,
        field: field.clone(),
        p1,
        lifts,
        m,
        ngens,
        basis,
        expr,
        cusp_classes: vec![],
        cuspidal: vec![],
        boundary_reduced: Mat::zero(&field, 0, 0),
        hecke_cache: Mutex::new(BTreeMap::new()),
        star_cache: Mutex::new(None),
    };
    build_boundary(&mut space)?;
    Ok(space)
}

struct SpaceBuilder<'a> {
    level: u64,
    field: NfCtx,
    psi: DirichletCharacter,
    p1: &'a P1Table,
    m: usize,
}

impl<'a> SpaceBuilder<'a> {
    /// Add the Manin term [P|h, g] (g has bottom row of g0*h) into a
    /// relation row.
    fn add_manin_term(&self, row: &mut [NfElem], p: &[NfElem], g: &M2, h: &M2) {
        let f = &self.field;
        let ph = apply_act(f, &act_matrix(h, self.m), p);
        let (class, lambda) = self.p1.normalize(g.c, g.d);
        let scalar = if self.level == 1 {
            f.one()
        } else {
            let linv = crate::zp::mod_inverse_u64(lambda % self.level, self.level);
            self.psi.value(linv as i64)
        };
        for (j, c) in ph.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let t = f.mul(c, &scalar);
            row[class * (self.m + 1) + j] = f.add(&row[class * (self.m + 1) + j], &t);
        }
    }
}

fn build_boundary(space: &mut ModSymSpace) -> Result<()> {
    let f = space.field.clone();
    let m = space.m;
    let n = space.level;
    // collect cusps appearing as endpoints of generator paths
    let mut classes: Vec<CuspClass> = Vec::new();
    let mut class_of: HashMap<Cusp, (usize, M2)> = HashMap::new();
    let mut locate = |x: Cusp, classes: &mut Vec<CuspClass>, class_of: &mut HashMap<Cusp, (usize, M2)>| -> (usize, M2) {
        if let Some(v) = class_of.get(&x) {
            return *v;
        }
        for (i, cc) in classes.iter().enumerate() {
            if let Some(g) = cusp_transporter(&cc.rep, &x, n) {
                class_of.insert(x, (i, g));
                return (i, g);
            }
        }
        // new class
        let width = n / gcd_i64((x.den * x.den) as i64 % n.max(1) as i64, n as i64).max(1) as u64;
        let width = if n == 1 { 1 } else { width };
        let a = extend_cusp(&x);
        let t = M2 { a: 1, b: width as i64, c: 0, d: 1 };
        let pgen = a.mul(&t).mul(&a.inv_unimodular());
        debug_assert_eq!(pgen.c.rem_euclid(n.max(1) as i64), 0);
        let idx = classes.len();
        classes.push(CuspClass { rep: x, width, pgen });
        class_of.insert(x, (idx, M2::ident()));
        (idx, M2::ident())
    };

    // boundary of each quotient-basis generator
    let mut endpoints: Vec<(usize, M2, usize, M2)> = Vec::new(); // per class idx of g0: (class(g.0), gamma0, class(g.inf), gammainf)
    for class in 0..space.p1.len() {
        let g0 = space.lifts[class];
        let c0 = g0.act_cusp(&Cusp::zero());
        let ci = g0.act_cusp(&Cusp::infinity());
        let (i0, t0) = locate(c0, &mut classes, &mut class_of);
        let (i1, t1) = locate(ci, &mut classes, &mut class_of);
        endpoints.push((i0, t0, i1, t1));
    }

    let nclasses = classes.len();
    let slot_dim = m + 1;
    let total = nclasses * slot_dim;

    // stabilizer relation rows in the full slot space
    let mut rel_rows: Vec<Vec<NfElem>> = Vec::new();
    for (i, cc) in classes.iter().enumerate() {
        let pinv = cc.pgen.inv_unimodular();
        let act = act_matrix(&pinv, m);
        let dpi = cc.pgen.d.rem_euclid(n.max(1) as i64);
        let scalar = if n == 1 { f.one() } else { space.psi.value(dpi) };
        // rows: e_j - scalar * act(pgen^{-1}) e_j
        for j in 0..slot_dim {
            let mut row = vec![f.zero(); total];
            row[i * slot_dim + j] = f.one();
            for t in 0..slot_dim {
                if act[t][j].is_zero() {
                    continue;
                }
                let c = f.mul(&scalar, &f.0.elem_from_q(BigRational::from(act[t][j].clone())));
                row[i * slot_dim + t] = f.sub(&row[i * slot_dim + t], &c);
            }
            rel_rows.push(row);
        }
    }
    // rref the relation rows to get a reducer
    let mut relmat = Mat::from_rows(&f, rel_rows);
    if relmat.nrows == 0 {
        relmat = Mat::zero(&f, 0, total);
    }
    let rel_pivots = relmat.rref(&f);

    // boundary map on each basis generator, reduced modulo the relation rows
    let dim = space.basis.len();
    let mut reduced = Mat::zero(&f, total, dim);
    for (bidx, &gid) in space.basis.iter().enumerate() {
        let class = gid / (m + 1);
        let j = gid % (m + 1);
        let g0 = space.lifts[class];
        let mut p = vec![f.zero(); m + 1];
        p[j] = f.one();
        // Q = P|g0^{-1}
        let q = apply_act(&f, &act_matrix(&g0.inv_unimodular(), m), &p);
        let (i0, t0, i1, t1) = endpoints[class];
        let mut slot_vec = vec![f.zero(); total];
        // value at cusp g0*0 with transporter t0: psi(d_t0)^{-1} Q|t0 at slot i0
        for (sign, i, tr) in [(1i64, i0, t0), (-1, i1, t1)] {
            let qtr = apply_act(&f, &act_matrix(&tr, m), &q);
            let dtr = tr.d.rem_euclid(n.max(1) as i64);
            let scalar = if n == 1 {
                f.one()
            } else {
                let v = space.psi.value(dtr);
                f.inv(&v)
            };
            for (t, c) in qtr.iter().enumerate() {
                if f.is_zero(c) {
                    continue;
                }
                let mut val = f.mul(c, &scalar);
                if sign < 0 {
                    val = f.neg(&val);
                }
                slot_vec[i * slot_dim + t] = f.add(&slot_vec[i * slot_dim + t], &val);
            }
        }
        // reduce modulo relation row space
        for (ri, &pc) in rel_pivots.iter().enumerate() {
            if f.is_zero(&slot_vec[pc]) {
                continue;
            }
            let factor = slot_vec[pc].clone();
            for col in 0..total {
                let t = f.mul(&factor, relmat.at(ri, col));
                slot_vec[col] = f.sub(&slot_vec[col], &t);
            }
        }
        for t in 0..total {
            *reduced.at_mut(t, bidx) = slot_vec[t].clone();
        }
    }

    space.cusp_classes = classes;
    space.cuspidal = reduced.kernel(&f);
    space.boundary_reduced = reduced;
    Ok(())
}

/// Express a vector in the span of given columns; None if not in span.
pub fn express_in_span(f: &NfCtx, span: &[Vec<NfElem>], target: &[NfElem]) -> Option<Vec<NfElem>> {
    let dim = target.len();
    let cols = span.len();
    let mut aug = Mat::zero(f, dim, cols + 1);
    for (j, col) in span.iter().enumerate() {
        for i in 0..dim {
            *aug.at_mut(i, j) = col[i].clone();
        }
    }
    for i in 0..dim {
        *aug.at_mut(i, cols) = target[i].clone();
    }
    let pivots = aug.rref(f);
    // inconsistent if last column is a pivot
    if pivots.contains(&cols) {
        return None;
    }
    let mut sol = vec![f.zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        sol[pc] = aug.at(r, cols).clone();
    }
    Some(sol)
}

/// Restrict an operator (matrix on quotient coords) to an invariant
/// subspace given by basis vectors; errors if not invariant.
pub fn restrict_operator(f: &NfCtx, op: &Mat<NfCtx>, sub: &[Vec<NfElem>]) -> Result<Mat<NfCtx>> {
    let k = sub.len();
    let mut out = Mat::zero(f, k, k);
    for (j, v) in sub.iter().enumerate() {
        let img = op.apply(f, v);
        let sol = express_in_span(f, sub, &img)
            .ok_or_else(|| Error::Invalid("subspace not invariant under operator".into()))?;
        for i in 0..k {
            *out.at_mut(i, j) = sol[i].clone();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::{q_from_i64, QQ};

    fn dims(n: u64, k: u32) -> (usize, usize) {
        let space = build_space(n, k, DirichletCharacter::trivial(n)).unwrap();
        (space.dim_quotient(), space.dim_cuspidal())
    }

    #[test]
    fn dimension_oracles() {
        // dim S_2(Gamma_0(11)) = 1: cuspidal modular symbols dim 2
        assert_eq!(dims(11, 2).1, 2);
        // level 1 weight 12 (Delta): cuspidal dim 2
        assert_eq!(dims(1, 12).1, 2);
        // S_4(Gamma_0(9)) = 1-dimensional
        assert_eq!(dims(9, 4).1, 2);
        // S_2(Gamma_0(14)) = 1-dimensional
        assert_eq!(dims(14, 2).1, 2);
    }

    #[test]
    fn boundary_composed_with_cuspidal_inclusion_is_zero() {
        let space = build_space(11, 2, DirichletCharacter::trivial(11)).unwrap();
        let f = &space.field;
        for v in &space.cuspidal {
            let img = space.boundary_image(v);
            assert!(img.iter().all(|c| f.is_zero(c)));
        }
    }

    #[test]
    fn hecke_eigenvalue_11a() {
        // T_2 on the cuspidal part of level 11 weight 2 has eigenvalue -2
        let space = build_space(11, 2, DirichletCharacter::trivial(11)).unwrap();
        let f = space.field.clone();
        let t2 = space.hecke(2);
        let r = restrict_operator(&f, &t2, &space.cuspidal).unwrap();
        let cp = r.charpoly(&f);
        // both signs: (x+2)^2 = x^2 + 4x + 4
        assert_eq!(
            cp.iter().map(|e| e[0].clone()).collect::<Vec<_>>(),
            vec![q_from_i64(4), q_from_i64(4), q_from_i64(1)]
        );
        let t3 = space.hecke(3);
        let r3 = restrict_operator(&f, &t3, &space.cuspidal).unwrap();
        let cp3 = r3.charpoly(&f);
        // a_3(11a) = -1: (x+1)^2
        assert_eq!(
            cp3.iter().map(|e| e[0].clone()).collect::<Vec<_>>(),
            vec![q_from_i64(1), q_from_i64(2), q_from_i64(1)]
        );
        // a_5(11a) = 1
        let r5 = restrict_operator(&f, &space.hecke(5), &space.cuspidal).unwrap();
        let cp5 = r5.charpoly(&f);
        assert_eq!(
            cp5.iter().map(|e| e[0].clone()).collect::<Vec<_>>(),
            vec![q_from_i64(1), q_from_i64(-2), q_from_i64(1)]
        );
    }

    #[test]
    fn hecke_eigenvalue_delta() {
        // tau(2) = -24, tau(3) = 252 on level 1 weight 12
        let space = build_space(1, 12, DirichletCharacter::trivial(1)).unwrap();
        let f = space.field.clone();
        let r2 = restrict_operator(&f, &space.hecke(2), &space.cuspidal).unwrap();
        let cp2 = r2.charpoly(&f);
        // (x + 24)^2 = x^2 + 48x + 576
        assert_eq!(
            cp2.iter().map(|e| e[0].clone()).collect::<Vec<_>>(),
            vec![q_from_i64(576), q_from_i64(48), q_from_i64(1)]
        );
        let r3 = restrict_operator(&f, &space.hecke(3), &space.cuspidal).unwrap();
        let cp3 = r3.charpoly(&f);
        // (x - 252)^2
        assert_eq!(
            cp3.iter().map(|e| e[0].clone()).collect::<Vec<_>>(),
            vec![q_from_i64(252 * 252), q_from_i64(-504), q_from_i64(1)]
        );
    }

    #[test]
    fn hecke_commute_and_star() {
        let space = build_space(11, 2, DirichletCharacter::trivial(11)).unwrap();
        let f = space.field.clone();
        let t2 = space.hecke(2);
        let t3 = space.hecke(3);
        assert_eq!(t2.matmul(&f, &t3), t3.matmul(&f, &t2));
        let s = space.star();
        // star^2 = 1
        let s2 = s.matmul(&f, &s);
        let id = Mat::identity(&f, space.dim_quotient());
        assert_eq!(s2, id);
        // star commutes with Hecke
        assert_eq!(s.matmul(&f, &t2), t2.matmul(&f, &s));
        let _ = QQ;
    }

    #[test]
    fn character_space_small() {
        // S_3(Gamma_0(7), chi_{-7}): 1-dimensional (CM form 7.3.b.a)
        let chi = DirichletCharacter::kronecker_char(7, -7);
        let space = build_space(7, 3, chi).unwrap();
        assert_eq!(space.dim_cuspidal(), 2);
        // S_5(Gamma_0(4), chi_{-4}): 1-dimensional (4.5.b.a)
        let chi4 = DirichletCharacter::kronecker_char(4, -4);
        let space45 = build_space(4, 5, chi4).unwrap();
        assert_eq!(space45.dim_cuspidal(), 2);
    }

    #[test]
    fn hecke_well_defined_on_relations() {
        // applying the Hecke formula to a relation element must give zero in
        // the quotient: emit one relation and push it through manually.
        let space = build_space(11, 2, DirichletCharacter::trivial(11)).unwrap();
        let f = space.field.clone();
        // x + x|sigma for class 0: express through manin_class_vector both ways
        let g0 = space.lifts[0];
        let p = vec![f.one()];
        let mut v = space.manin_class_vector(&p, &g0);
        let v2 = space.manin_class_vector(&p, &g0.mul(&SIGMA));
        for (a, b) in v.iter_mut().zip(&v2) {
            *a = f.add(a, b);
        }
        assert!(v.iter().all(|c| f.is_zero(c)));
    }
}
