//! The cotangent-product sums x_k(r;p) and their exact tables.
//!
//! All exact arithmetic is carried out on z_k(r) := i^k x_k(r;p), which lies
//! in Q(xi_p) for every k; the factor i^{-k} is reintroduced only when a
//! floating-point value of x_k is extracted. Tables are built by k-1
//! multiplicative convolutions over (Z/pZ)^* indexed by discrete logarithms;
//! the brute-force enumeration `xk_naive` is kept as an independent oracle.

use crate::arith;
use crate::error::{Error, Result};
use crate::exactalg::{rat_i64, Ctx, CycloElem, Rational};
use crate::par;
use astro_float::BigFloat;
use serde::Serialize;

/// i * cot(pi m / p) as the exact element -(xi^m + 1)/(xi^m - 1) of Q(xi_p).
#[derive(Clone, Debug, PartialEq)]
pub struct CotElement {
    pub p: u32,
    pub m: u32,
    pub value: CycloElem,
}

/// Exact element i*cot(pi m/p) for 1 <= m <= p-1.
///
/// The inverse of xi^m - 1 is written down directly from the identity
/// (xi - 1) * sum_{j=1}^{p-1} j xi^j = p.
pub fn cot_element(p: u32, m: u32) -> Result<CotElement> {
    if !arith::is_odd_prime(p as u64) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    let m_red = m % p;
    if m_red == 0 {
        return Err(Error::CotangentPole);
    }
    // inv(xi^m - 1) = (1/p) sum_{j=1}^{p-1} j xi^{jm}
    let mut inv = CycloElem::zero(p);
    for j in 1..p {
        let e = (j as u64 * m_red as u64 % p as u64) as i64;
        inv = inv.add(&CycloElem::xi_pow(p, e).scale(&rat_i64(j as i64, p as i64)))?;
    }
    let num = CycloElem::xi_pow(p, m_red as i64)
        .add(&CycloElem::one(p))?
        .neg();
    let value = num.mul(&inv)?;
    Ok(CotElement { p, m: m_red, value })
}

/// All values z_k(r) = i^k x_k(r;p) for r = 1..p-1 at fixed (p, k).
#[derive(Clone, Debug, Serialize)]
pub struct XkTable {
    p: u32,
    k: u32,
    /// z[r-1] holds z_k(r).
    z: Vec<CycloElem>,
}

impl XkTable {
    /// Build the full table by k-1 cyclic convolutions of the length-(p-1)
    /// sequence a_j = i cot(pi g^j / p) / p indexed by discrete logs base the
    /// smallest primitive root g.
    pub fn build(p: u32, k: u32) -> Result<Self> {
        Self::build_with(p, k, cyclic_convolve)
    }

    /// Sequential build, bypassing the data-parallel convolution. Produces the
    /// identical table; kept for the bench comparison.
    pub fn build_seq(p: u32, k: u32) -> Result<Self> {
        Self::build_with(p, k, cyclic_convolve_seq)
    }

    fn build_with(
        p: u32,
        k: u32,
        convolve: fn(&[CycloElem], &[CycloElem]) -> Vec<CycloElem>,
    ) -> Result<Self> {
        if !arith::is_odd_prime(p as u64) {
            return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
        }
        if k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        let n = (p - 1) as usize;
        let g = arith::primitive_root(p as u64);
        let inv_p = rat_i64(1, p as i64);
        let mut power = 1u64;
        let mut a = Vec::with_capacity(n);
        for _ in 0..n {
            a.push(cot_element(p, power as u32)?.value.scale(&inv_p));
            power = power * g % p as u64;
        }
        let mut b = a.clone();
        for _ in 1..k {
            b = convolve(&a, &b);
        }
        // scatter from dlog order back to residue order
        let mut z = vec![CycloElem::zero(p); n];
        let mut power = 1u64;
        for item in b {
            z[(power - 1) as usize] = item;
            power = power * g % p as u64;
        }
        Ok(XkTable { p, k, z })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// z_k(r) for r not divisible by p.
    pub fn z(&self, r: i64) -> Result<&CycloElem> {
        let rr = r.rem_euclid(self.p as i64) as u32;
        if rr == 0 {
            return Err(Error::InvalidInput(
                "r = 0 mod p: the defining sum is empty".into(),
            ));
        }
        Ok(&self.z[(rr - 1) as usize])
    }

    /// x_k(r;p) = embed(z_k(r)) * i^{-k} as a real high-precision float.
    ///
    /// Fails with a realness violation if the imaginary residue exceeds
    /// 10^{-(digits-10)}.
    pub fn xk_float(&self, r: i64, ctx: &Ctx) -> Result<BigFloat> {
        let w = self.z(r)?.embed(ctx).mul_i_pow(-(self.k as i64));
        let floor = ctx.ten_pow(-(ctx.digits() as i64 - 10));
        if w.im.abs() > floor {
            return Err(Error::RealnessViolation(ctx.to_decimal_string(&w.im, 8)));
        }
        Ok(w.re)
    }

    /// Rational trace attached to x_k(r;p).
    ///
    /// When v_2(p-1) > v_2(k) this is Tr_{Q(xi_p)/Q}(i^k x_k(r;p)), which
    /// vanishes. Otherwise k is even and the value returned is the trace of
    /// x_k(r;p) over the maximal real subfield, i.e. half the trace of
    /// (-1)^{k/2} z_k(r) over Q.
    pub fn trace_xk(&self, r: i64) -> Result<Rational> {
        let t = self.z(r)?.trace_q();
        if arith::v2((self.p - 1) as u64) > arith::v2(self.k.into()) {
            Ok(t)
        } else {
            let sign = if self.k.is_multiple_of(4) { 1 } else { -1 };
            Ok(t * rat_i64(sign, 2))
        }
    }

    /// Residues 1..p-1.
    pub fn residues(&self) -> impl Iterator<Item = u32> {
        1..self.p
    }
}

/// Brute-force oracle: z_k(r) by direct enumeration of all k-tuples with
/// product congruent to r. Guarded by p^{k-1} <= 10^7.
pub fn xk_naive(p: u32, k: u32, r: i64) -> Result<CycloElem> {
    if !arith::is_odd_prime(p as u64) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let guard = (p as u128).pow(k - 1);
    if guard > 10_000_000 {
        return Err(Error::OracleTooLarge(guard, 10_000_000));
    }
    let rr = r.rem_euclid(p as i64) as u64;
    if rr == 0 {
        return Err(Error::InvalidInput(
            "r = 0 mod p: the defining sum is empty".into(),
        ));
    }
    let cots: Vec<CycloElem> = (1..p)
        .map(|m| cot_element(p, m).map(|c| c.value))
        .collect::<Result<_>>()?;
    let inverses: Vec<u64> = (1..p as u64)
        .map(|m| arith::mod_inv(m, p as u64).expect("unit mod p"))
        .collect();
    let mut sum = CycloElem::zero(p);
    // depth-first over (m_1, ..., m_{k-1}) with shared prefix products
    let mut stack: Vec<(u32, u64, CycloElem)> = vec![(0, 1, CycloElem::one(p))];
    while let Some((depth, prod, acc)) = stack.pop() {
        if depth == k - 1 {
            let mk = rr * inverses[(prod - 1) as usize] % p as u64;
            sum = sum.add(&acc.mul(&cots[(mk - 1) as usize])?)?;
            continue;
        }
        for m in 1..p as u64 {
            stack.push((
                depth + 1,
                prod * m % p as u64,
                acc.mul(&cots[(m - 1) as usize])?,
            ));
        }
    }
    let scale = Rational::new(1.into(), num_bigint::BigInt::from(p).pow(k));
    Ok(sum.scale(&scale))
}

fn convolve_entry(a: &[CycloElem], b: &[CycloElem], s: usize) -> CycloElem {
    let n = a.len();
    let mut acc = a[0].mul(&b[s]).expect("same conductor");
    for j in 1..n {
        let t = a[j].mul(&b[(s + n - j) % n]).expect("same conductor");
        acc = acc.add(&t).expect("same conductor");
    }
    acc
}

fn cyclic_convolve(a: &[CycloElem], b: &[CycloElem]) -> Vec<CycloElem> {
    par::map_indexed(a.len(), |s| convolve_entry(a, b, s))
}

fn cyclic_convolve_seq(a: &[CycloElem], b: &[CycloElem]) -> Vec<CycloElem> {
    par::map_indexed_seq(a.len(), |s| convolve_entry(a, b, s))
}

/// CSV rows `r, x_k(r;p)` for the whole table.
pub fn table_to_csv(table: &XkTable, ctx: &Ctx) -> Result<String> {
    let mut out = String::from("r,x_k\n");
    for r in table.residues() {
        let x = table.xk_float(r as i64, ctx)?;
        out.push_str(&format!(
            "{},{}\n",
            r,
            ctx.to_decimal_string(&x, ctx.digits())
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat_int, GaloisMap};

    fn ctx() -> Ctx {
        Ctx::new(50)
    }

    #[test]
    fn cot_element_embeds_to_cotangent() {
        // embed(value)/i = cot(pi m/p); frozen oracle value for cot(pi/5)
        let ctx = ctx();
        let c = cot_element(5, 1).unwrap();
        let w = c.value.embed(&ctx).mul_i_pow(-1);
        let expect = ctx.parse_decimal("1.376381920471173538207209581910887679525899336008158663");
        assert!(ctx.sub(&w.re, &expect).abs() < ctx.ten_pow(-45));
        assert!(w.im.abs() < ctx.ten_pow(-45));
    }

    #[test]
    fn cot_element_p3() {
        // cot(pi/3) = 1/sqrt(3)
        let ctx = ctx();
        let c = cot_element(3, 1).unwrap();
        let w = c.value.embed(&ctx).mul_i_pow(-1);
        let expect = ctx.parse_decimal("0.577350269189625764509148780501957455647601751270126876");
        assert!(ctx.sub(&w.re, &expect).abs() < ctx.ten_pow(-45));
    }

    #[test]
    fn cot_odd_symmetry() {
        let a = cot_element(5, 2).unwrap();
        let b = cot_element(5, 3).unwrap();
        assert_eq!(a.value, b.value.neg());
    }

    #[test]
    fn cot_pole_rejected() {
        assert!(matches!(cot_element(5, 5), Err(Error::CotangentPole)));
        assert!(matches!(cot_element(5, 10), Err(Error::CotangentPole)));
    }

    #[test]
    fn cot_inverse_agrees_with_euclid() {
        // the closed-form inverse matches the extended-Euclid route
        for m in 1..7u32 {
            let xi_m = CycloElem::xi_pow(7, m as i64);
            let denom = xi_m.sub(&CycloElem::one(7)).unwrap();
            let via_euclid = denom.inv().unwrap();
            let num = xi_m.add(&CycloElem::one(7)).unwrap().neg();
            let expect = num.mul(&via_euclid).unwrap();
            assert_eq!(cot_element(7, m).unwrap().value, expect);
        }
    }

    #[test]
    fn naive_k1_is_single_cotangent() {
        // x_1(1;3) = cot(pi/3)/3
        let ctx = ctx();
        let z = xk_naive(3, 1, 1).unwrap();
        let x = z.embed(&ctx).mul_i_pow(-1);
        let expect = ctx.parse_decimal("0.1924500897298752548363829268339858185492005837567089587");
        assert!(ctx.sub(&x.re, &expect).abs() < ctx.ten_pow(-45));
    }

    #[test]
    fn intro_values_p5() {
        // x_2(1;5) = 8 sqrt(5)/125 and x_2(2;5) is exactly half of it
        let ctx = ctx();
        let t = XkTable::build(5, 2).unwrap();
        let x1 = t.xk_float(1, &ctx).unwrap();
        let x2 = t.xk_float(2, &ctx).unwrap();
        let expect = ctx.parse_decimal("0.1431083505599865405701871147988016790681995750151376464");
        assert!(ctx.sub(&x1, &expect).abs() < ctx.ten_pow(-45));
        let twice = ctx.mul(&x2, &ctx.from_i64(2));
        assert!(ctx.sub(&x1, &twice).abs() < ctx.ten_pow(-45));
        // exact statement: z_2(1) = 2 z_2(2)
        assert_eq!(*t.z(1).unwrap(), t.z(2).unwrap().scale(&rat_int(2)));
    }

    #[test]
    fn table_matches_naive_oracle() {
        for (p, k) in [(5, 2), (5, 3), (7, 2), (7, 3)] {
            let t = XkTable::build(p, k).unwrap();
            for r in 1..p {
                assert_eq!(
                    *t.z(r as i64).unwrap(),
                    xk_naive(p, k, r as i64).unwrap(),
                    "mismatch at p={p} k={k} r={r}"
                );
            }
        }
    }

    #[test]
    fn oddness_and_zero_sum() {
        let t = XkTable::build(13, 2).unwrap();
        assert_eq!(*t.z(12).unwrap(), t.z(1).unwrap().neg());
        let mut sum = CycloElem::zero(13);
        for r in t.residues() {
            sum = sum.add(t.z(r as i64).unwrap()).unwrap();
        }
        assert!(sum.is_zero());
    }

    #[test]
    fn galois_equivariance() {
        // sigma_c(z_k(r)) = z_k(c^k r) for (p,k) = (7,3)
        let t = XkTable::build(7, 3).unwrap();
        for c in 1..7u32 {
            let s = GaloisMap::new(7, c).unwrap();
            for r in 1..7i64 {
                let lhs = s.apply(t.z(r).unwrap()).unwrap();
                let ck_r = arith::mod_pow(c as u64, 3, 7) as i64 * r;
                assert_eq!(lhs, *t.z(ck_r).unwrap());
            }
        }
    }

    #[test]
    fn fixed_field_membership() {
        // gcd(k, p-1) = u: the subgroup of order u fixes every z_k(r)
        let (p, k) = (13u32, 4u32);
        let t = XkTable::build(p, k).unwrap();
        let g = arith::primitive_root(p as u64);
        let u = arith::gcd(k as u64, (p - 1) as u64);
        let step = (p as u64 - 1) / u;
        for j in 0..u {
            let c = arith::mod_pow(g, j * step, p as u64) as u32;
            let s = GaloisMap::new(p, c).unwrap();
            for r in [1i64, 2, 5] {
                assert_eq!(s.apply(t.z(r).unwrap()).unwrap(), *t.z(r).unwrap());
            }
        }
    }

    #[test]
    fn trace_vanishes_when_v2_dominates() {
        let t = XkTable::build(5, 2).unwrap();
        for r in 1..5i64 {
            assert_eq!(t.trace_xk(r).unwrap(), rat_int(0));
        }
    }

    #[test]
    fn trace_quadratic_case_p7() {
        // exact trace over the real subfield: 2 (r/7) h(-7)^2 / 7 with h(-7)=1
        let t = XkTable::build(7, 2).unwrap();
        assert_eq!(t.trace_xk(1).unwrap(), rat_i64(2, 7));
        assert_eq!(t.trace_xk(3).unwrap(), rat_i64(-2, 7));
    }

    #[test]
    fn naive_guard() {
        assert!(matches!(
            xk_naive(101, 5, 1),
            Err(Error::OracleTooLarge(_, _))
        ));
    }

    #[test]
    fn x4_at_p5_is_rational() {
        // gcd(4,4) = 4 fixes the whole Galois group, so x_4(r;5) is rational
        let t = XkTable::build(5, 4).unwrap();
        assert_eq!(t.z(1).unwrap().as_rational().unwrap(), &rat_i64(96, 3125));
        assert_eq!(t.z(2).unwrap().as_rational().unwrap(), &rat_i64(128, 3125));
    }
}
