//! High-precision real and complex arithmetic on top of `astro_float`.
//!
//! A [`Ctx`] fixes the working decimal precision (default 50 digits) and owns
//! the transcendental-constant cache. Contexts are cheap to create and are not
//! `Sync`; parallel jobs construct their own.

use super::Rational;
use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

const RM: RoundingMode = RoundingMode::ToEven;
/// Guard bits beyond the requested decimal precision.
const GUARD_BITS: usize = 96;

pub struct Ctx {
    digits: usize,
    bits: usize,
    cc: RefCell<Consts>,
    roots: RefCell<HashMap<u64, Rc<Vec<ComplexApprox>>>>,
}

impl Ctx {
    /// A context carrying `digits` decimal digits of working precision.
    pub fn new(digits: usize) -> Self {
        let digits = digits.max(20);
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS;
        Ctx {
            digits,
            bits,
            cc: RefCell::new(Consts::new().expect("constants cache")),
            roots: RefCell::new(HashMap::new()),
        }
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn pi(&self) -> BigFloat {
        self.cc.borrow_mut().pi(self.bits, RM)
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_i64(0, self.bits)
    }

    pub fn one(&self) -> BigFloat {
        BigFloat::from_i64(1, self.bits)
    }

    pub fn from_i64(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.bits)
    }

    pub fn from_f64(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.bits)
    }

    pub fn parse_decimal(&self, s: &str) -> BigFloat {
        BigFloat::parse(s, Radix::Dec, self.bits, RM, &mut self.cc.borrow_mut())
    }

    pub fn from_rational(&self, q: &Rational) -> BigFloat {
        let num = self.parse_decimal(&q.numer().to_string());
        let den = self.parse_decimal(&q.denom().to_string());
        num.div(&den, self.bits, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        a.powi(n, self.bits, RM)
    }

    pub fn ln(&self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.cc.borrow_mut())
    }

    pub fn exp(&self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.cc.borrow_mut())
    }

    pub fn sin(&self, a: &BigFloat) -> BigFloat {
        a.sin(self.bits, RM, &mut self.cc.borrow_mut())
    }

    pub fn cos(&self, a: &BigFloat) -> BigFloat {
        a.cos(self.bits, RM, &mut self.cc.borrow_mut())
    }

    /// `base^(num/den)` for positive `base`, via exp((num/den) ln base).
    pub fn pow_frac(&self, base: &BigFloat, num: i64, den: u64) -> BigFloat {
        let e = self.mul(
            &self.div(&self.from_i64(num), &self.from_i64(den as i64)),
            &self.ln(base),
        );
        self.exp(&e)
    }

    /// 10^e as a positive threshold value.
    pub fn ten_pow(&self, e: i64) -> BigFloat {
        let ten = self.from_i64(10);
        let p = self.powi(&ten, e.unsigned_abs() as usize);
        if e >= 0 {
            p
        } else {
            self.div(&self.one(), &p)
        }
    }

    /// cot(pi m / p) evaluated at the working precision.
    pub fn cot_pi_frac(&self, m: u64, p: u64) -> BigFloat {
        let theta = self.div(
            &self.mul(&self.pi(), &self.from_i64(m as i64)),
            &self.from_i64(p as i64),
        );
        self.div(&self.cos(&theta), &self.sin(&theta))
    }

    /// Table of n-th roots of unity e^{2 pi i j / n}, j = 0..n-1 (cached).
    pub fn unity_roots(&self, n: u64) -> Rc<Vec<ComplexApprox>> {
        if let Some(r) = self.roots.borrow().get(&n) {
            return Rc::clone(r);
        }
        let two_pi_over_n = self.div(
            &self.mul(&self.pi(), &self.from_i64(2)),
            &self.from_i64(n as i64),
        );
        let mut v = Vec::with_capacity(n as usize);
        for j in 0..n {
            let theta = self.mul(&two_pi_over_n, &self.from_i64(j as i64));
            v.push(ComplexApprox::new(
                self.cos(&theta),
                self.sin(&theta),
                self.digits,
            ));
        }
        let rc = Rc::new(v);
        self.roots.borrow_mut().insert(n, Rc::clone(&rc));
        rc
    }

    /// e^{2 pi i j / n} for any integer j.
    pub fn root_of_unity(&self, j: i64, n: u64) -> ComplexApprox {
        let roots = self.unity_roots(n);
        roots[j.rem_euclid(n as i64) as usize].clone()
    }

    pub fn complex_zero(&self) -> ComplexApprox {
        ComplexApprox::new(self.zero(), self.zero(), self.digits)
    }

    pub fn complex_one(&self) -> ComplexApprox {
        ComplexApprox::new(self.one(), self.zero(), self.digits)
    }

    pub fn complex_from_f64(&self, re: f64, im: f64) -> ComplexApprox {
        ComplexApprox::new(self.from_f64(re), self.from_f64(im), self.digits)
    }

    /// Lossy conversion for reporting, correctly rounded through the decimal
    /// string form.
    pub fn to_f64(&self, x: &BigFloat) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        let (sign, digits, exp) =
            match x.convert_to_radix(Radix::Dec, RoundingMode::None, &mut self.cc.borrow_mut()) {
                Ok(t) => t,
                Err(_) => return f64::NAN,
            };
        let mut s = String::with_capacity(32);
        if sign == Sign::Neg {
            s.push('-');
        }
        s.push_str("0.");
        for &d in digits.iter().take(25) {
            s.push((b'0' + d) as char);
        }
        s.push('e');
        s.push_str(&exp.to_string());
        s.parse::<f64>().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with `sig` significant digits. Values with moderate
    /// exponent print positionally, others in e-notation.
    pub fn to_decimal_string(&self, x: &BigFloat, sig: usize) -> String {
        if x.is_zero() {
            return "0".into();
        }
        if x.is_nan() {
            return "NaN".into();
        }
        let (sign, digits, exp) =
            match x.convert_to_radix(Radix::Dec, RoundingMode::None, &mut self.cc.borrow_mut()) {
                Ok(t) => t,
                Err(_) => return "NaN".into(),
            };
        // round to sig significant digits (value = 0.d1 d2 ... x 10^exp)
        let mut ds: Vec<u8> = digits.iter().take(sig + 1).copied().collect();
        let mut exp = exp as i64;
        if ds.len() > sig {
            let last = ds.pop().unwrap();
            if last >= 5 {
                let mut i = ds.len();
                loop {
                    if i == 0 {
                        ds.insert(0, 1);
                        exp += 1;
                        break;
                    }
                    i -= 1;
                    if ds[i] == 9 {
                        ds[i] = 0;
                    } else {
                        ds[i] += 1;
                        break;
                    }
                }
            }
        }
        while ds.len() > 1 && ds.last() == Some(&0) {
            ds.pop();
        }
        let neg = sign == Sign::Neg;
        let digit_str: String = ds.iter().map(|d| (b'0' + d) as char).collect();
        let body = if exp >= 1 && (exp as usize) <= sig.max(digit_str.len()) && exp <= 18 {
            // positional with the point inside or right after the digits
            let e = exp as usize;
            if e >= digit_str.len() {
                format!("{}{}", digit_str, "0".repeat(e - digit_str.len()))
            } else {
                format!("{}.{}", &digit_str[..e], &digit_str[e..])
            }
        } else if (-5..=0).contains(&exp) {
            format!("0.{}{}", "0".repeat((-exp) as usize), digit_str)
        } else {
            // e-notation: d.ddd e (exp-1)
            let mut s = String::new();
            s.push(digit_str.as_bytes()[0] as char);
            if digit_str.len() > 1 {
                s.push('.');
                s.push_str(&digit_str[1..]);
            }
            format!("{}e{}", s, exp - 1)
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl std::fmt::Debug for Ctx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ctx")
            .field("digits", &self.digits)
            .field("bits", &self.bits)
            .finish()
    }
}

/// Complex number at a declared decimal working precision.
#[derive(Clone, Debug)]
pub struct ComplexApprox {
    pub re: BigFloat,
    pub im: BigFloat,
    pub digits: usize,
}

impl ComplexApprox {
    pub fn new(re: BigFloat, im: BigFloat, digits: usize) -> Self {
        ComplexApprox { re, im, digits }
    }

    pub fn add(&self, o: &Self, ctx: &Ctx) -> Self {
        Self::new(
            ctx.add(&self.re, &o.re),
            ctx.add(&self.im, &o.im),
            self.digits,
        )
    }

    pub fn sub(&self, o: &Self, ctx: &Ctx) -> Self {
        Self::new(
            ctx.sub(&self.re, &o.re),
            ctx.sub(&self.im, &o.im),
            self.digits,
        )
    }

    pub fn mul(&self, o: &Self, ctx: &Ctx) -> Self {
        let re = ctx.sub(&ctx.mul(&self.re, &o.re), &ctx.mul(&self.im, &o.im));
        let im = ctx.add(&ctx.mul(&self.re, &o.im), &ctx.mul(&self.im, &o.re));
        Self::new(re, im, self.digits)
    }

    pub fn div(&self, o: &Self, ctx: &Ctx) -> Self {
        let d = ctx.add(&ctx.mul(&o.re, &o.re), &ctx.mul(&o.im, &o.im));
        let re = ctx.div(
            &ctx.add(&ctx.mul(&self.re, &o.re), &ctx.mul(&self.im, &o.im)),
            &d,
        );
        let im = ctx.div(
            &ctx.sub(&ctx.mul(&self.im, &o.re), &ctx.mul(&self.re, &o.im)),
            &d,
        );
        Self::new(re, im, self.digits)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg(), self.digits)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg(), self.digits)
    }

    pub fn scale(&self, s: &BigFloat, ctx: &Ctx) -> Self {
        Self::new(ctx.mul(&self.re, s), ctx.mul(&self.im, s), self.digits)
    }

    pub fn abs(&self, ctx: &Ctx) -> BigFloat {
        ctx.sqrt(&ctx.add(&ctx.mul(&self.re, &self.re), &ctx.mul(&self.im, &self.im)))
    }

    /// Multiply by i^k (an exact quarter rotation).
    pub fn mul_i_pow(&self, k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => Self::new(self.im.neg(), self.re.clone(), self.digits),
            2 => self.neg(),
            3 => Self::new(self.im.clone(), self.re.neg(), self.digits),
            _ => unreachable!(),
        }
    }

    pub fn powi(&self, n: usize, ctx: &Ctx) -> Self {
        let mut acc = ctx.complex_one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, ctx);
            }
        }
        acc
    }
}
