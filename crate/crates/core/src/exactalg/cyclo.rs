//! Elements of Q(xi_p) for odd prime p, stored in the power basis
//! {1, xi, ..., xi^{p-2}} with the reduction xi^{p-1} = -(1 + xi + ... + xi^{p-2}).
//! The representation is canonical: two elements are equal iff their
//! coefficient vectors are equal.

use super::{rat_from_string, rat_to_string, ComplexApprox, Ctx, Rational};
use crate::arith;
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElem {
    p: u32,
    coeffs: Vec<Rational>, // length p-1, power-basis coordinates c_0..c_{p-2}
}

impl CycloElem {
    /// Build from power-basis coordinates; `coeffs` must have length p-1.
    pub fn new(p: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if !arith::is_odd_prime(p as u64) {
            return Err(Error::InvalidInput(format!(
                "conductor {p} is not an odd prime"
            )));
        }
        if coeffs.len() != (p - 1) as usize {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients for conductor {p}, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(CycloElem { p, coeffs })
    }

    pub fn zero(p: u32) -> Self {
        CycloElem {
            p,
            coeffs: vec![Rational::zero(); (p - 1) as usize],
        }
    }

    pub fn one(p: u32) -> Self {
        Self::constant(p, Rational::one())
    }

    pub fn constant(p: u32, q: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); (p - 1) as usize];
        coeffs[0] = q;
        CycloElem { p, coeffs }
    }

    /// xi_p^j for any integer exponent (reduced mod p, canonicalized).
    pub fn xi_pow(p: u32, j: i64) -> Self {
        let e = j.rem_euclid(p as i64) as usize;
        let mut lift = vec![Rational::zero(); p as usize];
        lift[e] = Rational::one();
        Self::from_lift(p, lift)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True iff the element lies in Q (all xi-coordinates vanish).
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element is a constant.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.coeffs[0])
    }

    fn check_conductor(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ConductorMismatch(self.p, other.p));
        }
        Ok(())
    }

    /// Canonicalize a length-p vector of coordinates mod (x^p - 1):
    /// c_j = d_j - d_{p-1} for j < p-1.
    fn from_lift(p: u32, mut lift: Vec<Rational>) -> Self {
        debug_assert_eq!(lift.len(), p as usize);
        let top = lift.pop().expect("nonempty lift");
        if !top.is_zero() {
            for c in lift.iter_mut() {
                *c -= &top;
            }
        }
        CycloElem { p, coeffs: lift }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_conductor(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloElem { p: self.p, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_conductor(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycloElem { p: self.p, coeffs })
    }

    pub fn neg(&self) -> Self {
        CycloElem {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycloElem {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Product, reduced to the power basis via cyclic convolution mod (x^p - 1)
    /// followed by canonicalization.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_conductor(other)?;
        let p = self.p as usize;
        let mut lift = vec![Rational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let idx = (i + j) % p;
                lift[idx] += a * b;
            }
        }
        Ok(Self::from_lift(self.p, lift))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm over Q[x]
    /// against the minimal polynomial Phi_p = 1 + x + ... + x^{p-1}.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p as usize;
        let phi = vec![Rational::one(); p];
        let a = poly_trim(self.coeffs.clone());
        let (mut r0, mut r1) = (phi, a);
        let (mut t0, mut t1) = (vec![], vec![Rational::one()]);
        while !r1.is_empty() {
            let (q, rem) = poly_divmod(&r0, &r1);
            let tnext = poly_sub(&t0, &poly_mul(&q, &t1));
            r0 = r1;
            r1 = rem;
            t0 = t1;
            t1 = tnext;
        }
        // r0 = gcd: a nonzero constant since Phi_p is irreducible over Q
        debug_assert_eq!(r0.len(), 1);
        let g = r0[0].clone();
        let mut coeffs = vec![Rational::zero(); p - 1];
        for (j, c) in t0.into_iter().enumerate() {
            coeffs[j] = c / &g;
        }
        Ok(CycloElem { p: self.p, coeffs })
    }

    /// Field trace to Q: Tr(a) = (p-1) c_0 - sum_{j>=1} c_j.
    pub fn trace_q(&self) -> Rational {
        let mut t = &self.coeffs[0] * Rational::from_integer((self.p - 1).into());
        for c in &self.coeffs[1..] {
            t -= c;
        }
        t
    }

    /// Canonical embedding xi_p -> e^{2 pi i / p}, evaluated at the context
    /// precision.
    pub fn embed(&self, ctx: &Ctx) -> ComplexApprox {
        let roots = ctx.unity_roots(self.p as u64);
        self.embed_with_roots(ctx, &roots)
    }

    /// Embedding with a precomputed table of p-th roots of unity
    /// (`roots[j]` = e^{2 pi i j / p}).
    pub fn embed_with_roots(&self, ctx: &Ctx, roots: &[ComplexApprox]) -> ComplexApprox {
        let mut acc = ctx.complex_zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = roots[j].scale(&ctx.from_rational(c), ctx);
            acc = acc.add(&w, ctx);
        }
        acc
    }
}

impl Serialize for CycloElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            p: u32,
            coeffs: Vec<String>,
            #[serde(skip)]
            _m: std::marker::PhantomData<&'a ()>,
        }
        Repr {
            p: self.p,
            coeffs: self.coeffs.iter().map(rat_to_string).collect(),
            _m: std::marker::PhantomData,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycloElem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            p: u32,
            coeffs: Vec<String>,
        }
        let r = Repr::deserialize(deserializer)?;
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| rat_from_string(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        CycloElem::new(r.p, coeffs).map_err(D::Error::custom)
    }
}

/// The automorphism sigma_c of Q(xi_p) with xi_p -> xi_p^c.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaloisMap {
    p: u32,
    c: u32,
}

impl GaloisMap {
    pub fn new(p: u32, c: u32) -> Result<Self> {
        if !arith::is_odd_prime(p as u64) {
            return Err(Error::InvalidInput(format!(
                "conductor {p} is not an odd prime"
            )));
        }
        let c = c % p;
        if c == 0 {
            return Err(Error::InvalidInput("sigma_c requires gcd(c, p) = 1".into()));
        }
        Ok(GaloisMap { p, c })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    /// Composition: sigma_{c1} o sigma_{c2} = sigma_{c1 c2 mod p}.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::ConductorMismatch(self.p, other.p));
        }
        GaloisMap::new(
            self.p,
            ((self.c as u64 * other.c as u64) % self.p as u64) as u32,
        )
    }

    /// Apply to an element: every xi^j is replaced by xi^{cj mod p}.
    pub fn apply(&self, a: &CycloElem) -> Result<CycloElem> {
        if self.p != a.p {
            return Err(Error::ConductorMismatch(self.p, a.p));
        }
        let p = self.p as usize;
        let mut lift = vec![Rational::zero(); p];
        for (j, coeff) in a.coeffs.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let idx = (j * self.c as usize) % p;
            lift[idx] += coeff;
        }
        Ok(CycloElem::from_lift(self.p, lift))
    }
}

// --- dense polynomial helpers over Q (little-endian, trimmed) ---

fn poly_trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_trim(out)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    poly_trim(out)
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    debug_assert!(!b.is_empty());
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return (vec![], poly_trim(rem));
    }
    let mut quot = vec![Rational::zero(); rem.len() - b.len() + 1];
    let lead = b.last().expect("nonzero divisor");
    for i in (b.len() - 1..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let q = &rem[i] / lead;
        let shift = i + 1 - b.len();
        for (j, c) in b.iter().enumerate() {
            let t = c * &q;
            rem[shift + j] -= t;
        }
        quot[shift] = q;
    }
    (poly_trim(quot), poly_trim(rem))
}

#[cfg(test)]
mod tests {
    use super::super::{rat_i64, rat_int};
    use super::*;

    fn xi(p: u32, j: i64) -> CycloElem {
        CycloElem::xi_pow(p, j)
    }

    #[test]
    fn xi_power_wraps() {
        // xi_5 * xi_5^4 = 1
        let prod = xi(5, 1).mul(&xi(5, 4)).unwrap();
        assert_eq!(prod, CycloElem::one(5));
    }

    #[test]
    fn phi_at_one_is_p() {
        // (1 - xi)(1 - xi^2)(1 - xi^3)(1 - xi^4) = 5
        let one = CycloElem::one(5);
        let mut prod = one.clone();
        for j in 1..5 {
            prod = prod.mul(&one.sub(&xi(5, j)).unwrap()).unwrap();
        }
        assert_eq!(prod, CycloElem::constant(5, rat_int(5)));
    }

    #[test]
    fn inv_of_xi() {
        assert_eq!(xi(5, 1).inv().unwrap(), xi(5, 4));
    }

    #[test]
    fn inv_of_constant() {
        let two = CycloElem::constant(7, rat_int(2));
        assert_eq!(two.inv().unwrap(), CycloElem::constant(7, rat_i64(1, 2)));
    }

    #[test]
    fn inv_multiplies_back_to_one() {
        let a = xi(7, 1).sub(&CycloElem::one(7)).unwrap(); // xi_7 - 1
        let b = a.inv().unwrap();
        assert_eq!(a.mul(&b).unwrap(), CycloElem::one(7));
    }

    #[test]
    fn inv_of_zero_fails() {
        assert!(matches!(
            CycloElem::zero(5).inv(),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn conductor_mismatch() {
        assert!(matches!(
            xi(5, 1).mul(&xi(7, 1)),
            Err(Error::ConductorMismatch(5, 7))
        ));
    }

    #[test]
    fn galois_on_sum() {
        // sigma_2 (xi + xi^4) = xi^2 + xi^3 over Q(xi_5)
        let a = xi(5, 1).add(&xi(5, 4)).unwrap();
        let s = GaloisMap::new(5, 2).unwrap();
        let expect = xi(5, 2).add(&xi(5, 3)).unwrap();
        assert_eq!(s.apply(&a).unwrap(), expect);
    }

    #[test]
    fn galois_identity() {
        let a = xi(7, 3).scale(&rat_i64(2, 3));
        let id = GaloisMap::new(7, 1).unwrap();
        assert_eq!(id.apply(&a).unwrap(), a);
    }

    #[test]
    fn galois_composition() {
        let a = xi(7, 1).add(&xi(7, 5)).unwrap();
        let s2 = GaloisMap::new(7, 2).unwrap();
        let s3 = GaloisMap::new(7, 3).unwrap();
        let via_compose = s2.compose(&s3).unwrap().apply(&a).unwrap();
        let via_apply = s2.apply(&s3.apply(&a).unwrap()).unwrap();
        assert_eq!(via_compose, via_apply);
    }

    #[test]
    fn trace_values() {
        assert_eq!(CycloElem::one(7).trace_q(), rat_int(6));
        for j in 1..7 {
            assert_eq!(xi(7, j).trace_q(), rat_int(-1));
        }
    }

    #[test]
    fn trace_matches_galois_sum() {
        // brute-force sum over all automorphisms, p = 11
        let p = 11;
        let a = xi(p, 1)
            .scale(&rat_i64(3, 7))
            .add(&xi(p, 5).scale(&rat_i64(-2, 9)))
            .unwrap()
            .add(&CycloElem::constant(p, rat_i64(1, 4)))
            .unwrap();
        let mut total = CycloElem::zero(p);
        for c in 1..p {
            let s = GaloisMap::new(p, c).unwrap();
            total = total.add(&s.apply(&a).unwrap()).unwrap();
        }
        assert!(total.is_rational());
        assert_eq!(total.as_rational().unwrap(), &a.trace_q());
    }

    #[test]
    fn serde_roundtrip() {
        let a = xi(5, 1).scale(&rat_i64(-7, 3));
        let json = serde_json::to_string(&a).unwrap();
        assert!(json.contains("\"p\":5"));
        assert!(json.contains("-7/3"));
        let back: CycloElem = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }
}
