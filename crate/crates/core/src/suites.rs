//! Curated verification suites exposed through the command-line driver.
//!
//! Each suite runs a set of named checks and reports one line per check.
//! PASS/FAIL checks gate the exit code; EVIDENCE lines record observed
//! deviations that carry no proven bound (the moment comparisons for k >= 2).

use crate::analytics;
use crate::arith;
use crate::cotsum::{xk_naive, XkTable};
use crate::error::Result;
use crate::exactalg::{rat_i64, rat_int, Ctx, CycloElem, GaloisMap, Rational};
use crate::lseries::{dk1_via_characters, dk1_via_xk, OddPeriodicFunction};
use crate::par;
use crate::structmat::{
    self, class_number_neg, galois_matrix, linalg_factorization_check, relative_class_number,
    verify_fcd, Corollary, Kind,
};
use crate::vanish::{
    self, dim_bound, dim_case, rank_over_q, subset_rank, v0_kernel, v0_kernel_with, DimCase,
    PivotStrategy, ResidueClass,
};
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::BTreeMap;

/// The desk-scale sweep.
pub const SWEEP_PRIMES: [u32; 6] = [5, 7, 11, 13, 17, 29];

#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    pub pmax: u32,
    pub kmax: u32,
    pub digits: usize,
    pub series_x: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            pmax: 13,
            kmax: 4,
            digits: 50,
            series_x: 1_000_000,
        }
    }
}

impl SweepConfig {
    pub fn primes(&self) -> Vec<u32> {
        SWEEP_PRIMES
            .iter()
            .copied()
            .filter(|&p| p <= self.pmax)
            .collect()
    }

    pub fn pairs(&self) -> Vec<(u32, u32)> {
        let mut v = Vec::new();
        for p in self.primes() {
            for k in 1..=self.kmax {
                v.push((p, k));
            }
        }
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "EVIDENCE")]
    Evidence,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn assert(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    fn evidence(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Evidence,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn failed(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .count()
    }
}

/// Exact tables for every (p, k) in the sweep, built in parallel up front.
pub struct SweepTables {
    map: BTreeMap<(u32, u32), XkTable>,
}

impl SweepTables {
    pub fn build(cfg: &SweepConfig) -> Result<Self> {
        let pairs = cfg.pairs();
        let tables = par::map_indexed(pairs.len(), |i| {
            let (p, k) = pairs[i];
            XkTable::build(p, k)
        });
        let mut map = BTreeMap::new();
        for (pair, t) in pairs.into_iter().zip(tables) {
            map.insert(pair, t?);
        }
        Ok(SweepTables { map })
    }

    pub fn get(&self, p: u32, k: u32) -> &XkTable {
        &self.map[&(p, k)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &XkTable)> {
        self.map.iter()
    }
}

/// Small deterministic generator for the randomized checks.
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [lo, hi].
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as i64
    }

    pub fn rational(&mut self) -> Rational {
        let num = self.range_i64(-9, 9);
        let den = self.range_i64(1, 7);
        rat_i64(num, den)
    }

    /// A nonzero odd function with small rational values.
    pub fn odd_function(&mut self, p: u32) -> OddPeriodicFunction {
        loop {
            let vals: Vec<Rational> = (0..(p - 1) / 2).map(|_| self.rational()).collect();
            let f = OddPeriodicFunction::new(p, vals).expect("half-length");
            if !f.is_zero() {
                return f;
            }
        }
    }
}

/// Table invariants: oddness, zero sum, Galois equivariance, conjugation,
/// fixed-field membership, float realness, trace vanishing, and the
/// brute-force oracle equivalence at small sizes.
pub fn suite_xk(cfg: &SweepConfig, tables: &SweepTables) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let ctx = Ctx::new(cfg.digits);
    for (&(p, k), t) in tables.iter() {
        let mut odd_ok = true;
        let mut sum = CycloElem::zero(p);
        for r in 1..p {
            sum = sum.add(t.z(r as i64)?)?;
            odd_ok &= *t.z((p - r) as i64)? == t.z(r as i64)?.neg();
        }
        checks.push(Check::assert(
            format!("xk/odd-symmetry p={p} k={k}"),
            odd_ok && sum.is_zero(),
            "z(p-r) = -z(r) and sum_r z(r) = 0, exact",
        ));

        let mut equiv_ok = true;
        for c in 1..p {
            let sigma = GaloisMap::new(p, c)?;
            for r in 1..p {
                let lhs = sigma.apply(t.z(r as i64)?)?;
                let target = (arith::mod_pow(c as u64, k as u64, p as u64) * r as u64) as i64;
                equiv_ok &= lhs == *t.z(target)?;
            }
        }
        checks.push(Check::assert(
            format!("xk/galois-equivariance p={p} k={k}"),
            equiv_ok,
            "sigma_c(z_k(r)) = z_k(c^k r), exact on all (c, r)",
        ));

        let conj = GaloisMap::new(p, p - 1)?;
        let mut conj_ok = true;
        for r in 1..p {
            let lhs = conj.apply(t.z(r as i64)?)?;
            let rhs = if k % 2 == 0 {
                t.z(r as i64)?.clone()
            } else {
                t.z(r as i64)?.neg()
            };
            conj_ok &= lhs == rhs;
        }
        checks.push(Check::assert(
            format!("xk/conjugation p={p} k={k}"),
            conj_ok,
            "sigma_{p-1}(z_k(r)) = (-1)^k z_k(r), exact",
        ));

        let u = arith::gcd(k as u64, (p - 1) as u64);
        let g = arith::primitive_root(p as u64);
        let mut fixed_ok = true;
        for j in 0..u {
            let c = arith::mod_pow(g, j * ((p as u64 - 1) / u), p as u64) as u32;
            let sigma = GaloisMap::new(p, c)?;
            for r in 1..p {
                fixed_ok &= sigma.apply(t.z(r as i64)?)? == *t.z(r as i64)?;
            }
        }
        checks.push(Check::assert(
            format!("xk/fixed-field p={p} k={k}"),
            fixed_ok,
            format!("subgroup of order gcd(k,p-1) = {u} fixes every value"),
        ));

        let mut max_im = ctx.zero();
        for r in 1..p {
            let w = t.z(r as i64)?.embed(&ctx).mul_i_pow(-(k as i64));
            max_im = max_im.max(&w.im.abs());
        }
        checks.push(Check::assert(
            format!("xk/realness p={p} k={k}"),
            max_im < ctx.ten_pow(-40),
            format!(
                "max |Im(embed(z) i^-k)| = {}",
                ctx.to_decimal_string(&max_im, 4)
            ),
        ));

        if arith::v2((p - 1) as u64) > arith::v2(k as u64) {
            let mut zero_ok = true;
            for r in 1..p {
                zero_ok &= t.z(r as i64)?.trace_q() == rat_int(0);
            }
            checks.push(Check::assert(
                format!("xk/trace-vanishing p={p} k={k}"),
                zero_ok,
                "Tr(z_k(r)) = 0 whenever v2(p-1) > v2(k)",
            ));
        }
    }

    // oracle equivalence at feasible sizes
    for (&(p, k), t) in tables.iter() {
        if p > 13 || k > 4 {
            continue;
        }
        let mut ok = true;
        for r in 1..p {
            ok &= *t.z(r as i64)? == xk_naive(p, k, r as i64)?;
        }
        checks.push(Check::assert(
            format!("xk/oracle-equivalence p={p} k={k}"),
            ok,
            "convolution table equals brute-force enumeration entrywise",
        ));
    }

    Ok(SuiteReport {
        suite: "xk".into(),
        checks,
    })
}

/// Kernel dimensions, the dimension bound, linear independence, subset
/// ranks, and cross-route rechecks of kernel vectors.
pub fn suite_kernel(cfg: &SweepConfig, tables: &SweepTables) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let ctx = Ctx::new(cfg.digits);
    for (&(p, k), t) in tables.iter() {
        let kernel = v0_kernel(t);
        let bound = dim_bound(p, k)?;
        let case = dim_case(p, k);
        let dim = kernel.dim();
        let dim_ok = dim >= bound && (case == DimCase::BoundOnly || dim == bound);
        checks.push(Check::assert(
            format!("kernel/dim p={p} k={k}"),
            dim_ok,
            format!("dim = {dim}, bound = {bound}, case = {case:?}"),
        ));

        let half = ((p - 1) / 2) as usize;
        let values: Vec<CycloElem> = (1..=half)
            .map(|r| t.z(r as i64).cloned())
            .collect::<Result<_>>()?;
        let rank = rank_over_q(&values)?;
        checks.push(Check::assert(
            format!("kernel/rank-nullity p={p} k={k}"),
            rank + dim == half,
            format!("rank {rank} + dim {dim} = {half}"),
        ));

        let u = arith::gcd(k as u64, (p - 1) as u64);
        let independent = u == 1 || (u == 2 && p % 4 == 3);
        checks.push(Check::assert(
            format!("kernel/independence-iff p={p} k={k}"),
            (rank == half) == independent,
            format!(
                "full rank {} expected {} (gcd = {u}, p mod 4 = {})",
                rank == half,
                independent,
                p % 4
            ),
        ));

        let det_a = v0_kernel_with(t, PivotStrategy::FirstNonZero);
        let det_b = v0_kernel_with(t, PivotStrategy::LargestNumerator);
        checks.push(Check::assert(
            format!("kernel/echelon-determinism p={p} k={k}"),
            det_a.basis == det_b.basis,
            "two pivot strategies give the identical normalized basis",
        ));

        let mut char_ok = true;
        let mut worst = ctx.zero();
        for f in &kernel.basis {
            let v = dk1_via_characters(f, k, &ctx)?;
            let a = v.abs(&ctx);
            worst = worst.max(&a);
            char_ok &= a < ctx.ten_pow(-30);
        }
        if !kernel.basis.is_empty() {
            checks.push(Check::assert(
                format!("kernel/character-recheck p={p} k={k}"),
                char_ok,
                format!(
                    "max |D_k(1,f)| over basis via characters = {}",
                    ctx.to_decimal_string(&worst, 4)
                ),
            ));
        }

        let hypothesis = (u == 2 && p % 4 == 1) || (u == 4 && p % 8 == 5);
        if hypothesis {
            let qr = class_residues_len(p, ResidueClass::Quadratic);
            let qnr = class_residues_len(p, ResidueClass::NonResidue);
            let rq = subset_rank(t, ResidueClass::Quadratic)?;
            let rn = subset_rank(t, ResidueClass::NonResidue)?;
            checks.push(Check::assert(
                format!("kernel/subset-ranks p={p} k={k}"),
                rq == qr && rn == qnr,
                format!("QR rank {rq}/{qr}, QNR rank {rn}/{qnr}"),
            ));
            checks.push(Check::assert(
                format!("kernel/qr-support p={p} k={k}"),
                vanish::qr_support_check(t)?,
                "no kernel vector supported on a single residue class",
            ));
        }
    }

    // pinned examples
    if cfg.pmax >= 5 && cfg.kmax >= 2 {
        let kb = v0_kernel(tables.get(5, 2));
        checks.push(Check::assert(
            "kernel/p5-basis",
            kb.dim() == 1 && kb.basis[0].half_values() == [rat_int(1), rat_int(-2)],
            "normalized basis of the p=5 kernel is (1, -2)",
        ));
    }
    if cfg.pmax >= 13 && cfg.kmax >= 2 {
        let kb = v0_kernel(tables.get(13, 2));
        let mut ok = kb.dim() == 3;
        for (a, b, c) in [(1i64, 0i64, 0i64), (0, 1, 0), (0, 0, 1)] {
            let f = OddPeriodicFunction::new(
                13,
                vec![
                    rat_int(18 * a),
                    rat_int(-(19 * a + 11 * b + 4 * c)),
                    rat_int(18 * c),
                    rat_int(18 * b),
                    rat_int(-(4 * a - 19 * b - 11 * c)),
                    rat_int(11 * a + 4 * b - 19 * c),
                ],
            )?;
            ok &= kb.contains(&f);
        }
        checks.push(Check::assert(
            "kernel/p13-family",
            ok,
            "sign-corrected three-parameter family lies in the kernel span",
        ));
    }

    Ok(SuiteReport {
        suite: "kernel".into(),
        checks,
    })
}

fn class_residues_len(p: u32, class: ResidueClass) -> usize {
    vanish::class_residues(p, class).len()
}

/// Structured-matrix identities and the determinant corollaries.
pub fn suite_det(cfg: &SweepConfig, tables: &SweepTables) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let ctx = Ctx::new(cfg.digits);
    let mut rng = SplitMix64::new(0x5eed_0001);

    let mut shift_ok = true;
    let mut factor_ok = true;
    let mut worst: Option<String> = None;
    for trial in 0..100 {
        let m = (rng.range_i64(1, 8)) as usize;
        let v: Vec<Rational> = (0..m).map(|_| rng.rational()).collect();
        let j = rng.range_i64(0, m as i64 - 1) as usize;
        for kind in [Kind::APlus, Kind::AMinus] {
            shift_ok &= structmat::shift_identity_check(kind, &v, j)?;
            let rep = linalg_factorization_check(kind, &v, &ctx)?;
            if !rep.pass && worst.is_none() {
                worst = Some(format!("trial {trial} kind {kind:?}: {}", rep.abs_dev));
            }
            factor_ok &= rep.pass;
        }
    }
    checks.push(Check::assert(
        "det/shift-identities",
        shift_ok,
        "A(v_j) = C(u_j) A(v) exactly on 100 random vectors",
    ));
    checks.push(Check::assert(
        "det/eigen-factorization",
        factor_ok,
        worst.unwrap_or_else(|| "eigenvalue products match exact determinants".into()),
    ));

    for (&(p, k), t) in tables.iter() {
        if p > 13 {
            continue;
        }
        let gm = galois_matrix(t, 1)?;
        let mut twist_ok = true;
        for j in 0..(p as usize - 1) {
            twist_ok &= gm.twist_check(j)?;
        }
        checks.push(Check::assert(
            format!("det/galois-twist p={p} k={k}"),
            twist_ok,
            format!(
                "sigma wraps match C_{{+/-}} structure, variant {:?}",
                gm.variant
            ),
        ));

        if let Some(which) = Corollary::select(p, k) {
            let mut ok = true;
            let mut detail = String::new();
            for r in 1..p {
                let rep = verify_fcd(t, r as i64, which, &ctx)?;
                if !ok {
                    continue;
                }
                if !rep.pass {
                    ok = false;
                    detail = format!(
                        "r={r}: det {} vs formula {}",
                        rep.det_float, rep.formula_float
                    );
                }
            }
            // determinant nonvanishing is part of the claim
            let dz = gm.det_z()?;
            ok &= !dz.is_zero();
            checks.push(Check::assert(
                format!("det/{:?} p={p} k={k}", which),
                ok,
                if detail.is_empty() {
                    "closed form matches for all r; det nonzero".to_string()
                } else {
                    detail
                },
            ));
        }
    }

    // the two class-number oracles agree where both apply (h_p^- = h(-p) for
    // small p = 3 mod 4 with one class per genus pattern broken only beyond
    // the desk scale; checked instances)
    for p in [7u32, 11, 23] {
        if p > cfg.pmax.max(23) {
            continue;
        }
        let a = class_number_neg(p)?;
        let b = relative_class_number(p)?;
        checks.push(Check::assert(
            format!("det/class-number-consistency p={p}"),
            a == b,
            format!("form count {a}, Bernoulli product {b}"),
        ));
    }

    Ok(SuiteReport {
        suite: "det".into(),
        checks,
    })
}

/// Moment identities: exact odd-moment vanishing, the k=1 closed forms, and
/// deviation evidence for k >= 2.
pub fn suite_moments(cfg: &SweepConfig, tables: &SweepTables) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for (&(p, k), t) in tables.iter() {
        if k > 3 {
            continue;
        }
        let mut ok = true;
        for m in [1u32, 3] {
            ok &= analytics::moment_lhs(t, m).exact == rat_int(0);
        }
        checks.push(Check::assert(
            format!("moments/odd-vanish p={p} k={k}"),
            ok,
            "odd moments are exactly zero",
        ));
    }
    for p in cfg.primes() {
        let t = tables.get(p, 1);
        let lhs = analytics::moment_lhs(t, 2);
        let expect = Rational::new(
            ((p as i64 - 1) * (p as i64 - 2)).into(),
            (3 * p as i64 * p as i64).into(),
        );
        checks.push(Check::assert(
            format!("moments/k1-closed-form p={p}"),
            lhs.exact == expect,
            "sum x_1(r)^2 = (p-1)(p-2)/(3p^2) exactly",
        ));
        let rep = analytics::moment_report(t, 2, cfg.series_x)?;
        checks.push(Check::assert(
            format!("moments/k1-bound p={p}"),
            rep.pass,
            format!("deviation {:.3e} < bound {:.3e}", rep.deviation, rep.bound),
        ));
    }
    if cfg.kmax >= 2 {
        for p in cfg.primes() {
            let rep = analytics::moment_report(tables.get(p, 2), 2, cfg.series_x)?;
            checks.push(Check::evidence(
                format!("moments/k2-deviation p={p}"),
                format!(
                    "deviation {:.3e} vs 4/p^0.9 = {:.3e} ({})",
                    rep.deviation,
                    rep.bound,
                    if rep.pass { "within" } else { "above" }
                ),
            ));
        }
    }
    // pinned large-p instances when requested
    if cfg.pmax >= 101 {
        let t = XkTable::build(101, 1)?;
        let lhs = analytics::moment_lhs(&t, 2);
        checks.push(Check::assert(
            "moments/p101-m2",
            lhs.exact == rat_i64(3300, 10201)
                && (lhs.float - 1.0 / 3.0).abs() < 4.0 / 101f64.powf(0.9),
            "exact 3300/10201, within 4/101^0.9 of 1/3",
        ));
        let lhs4 = analytics::moment_lhs(&t, 4);
        checks.push(Check::assert(
            "moments/p101-m4",
            (lhs4.float - 1.0 / 45.0).abs() < 4.0 / 101f64.powf(0.9),
            format!("lhs {:.8}, target 1/45", lhs4.float),
        ));
    }
    Ok(SuiteReport {
        suite: "moments".into(),
        checks,
    })
}

/// Truncated congruence sums against the exact cotangent values.
pub fn suite_pass(cfg: &SweepConfig, tables: &SweepTables) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let ctx = Ctx::new(cfg.digits);
    if cfg.pmax >= 5 && cfg.kmax >= 2 {
        let rep = analytics::verify_pass(tables.get(5, 2), 1, cfg.series_x, 1e-3, &ctx)?;
        checks.push(Check::assert(
            "pass/p5-k2-r1",
            rep.pass,
            format!("deviation {:.3e} at X = {}", rep.deviation, rep.x_final),
        ));
    }
    if cfg.pmax >= 7 && cfg.kmax >= 2 {
        let t = tables.get(7, 2);
        let mut ok = true;
        let mut worst = 0f64;
        for r in 1..7 {
            let rep = analytics::verify_pass(t, r, cfg.series_x, 1e-3, &ctx)?;
            ok &= rep.pass;
            worst = worst.max(rep.deviation);
        }
        checks.push(Check::assert(
            "pass/p7-k2-all-r",
            ok,
            format!("worst deviation {worst:.3e}"),
        ));
    }
    if cfg.pmax >= 13 && cfg.kmax >= 3 {
        let rep = analytics::verify_pass(tables.get(13, 3), 2, cfg.series_x, 1e-2, &ctx)?;
        checks.push(Check::assert(
            "pass/p13-k3-r2",
            rep.pass,
            format!("deviation {:.3e} (relaxed tolerance 1e-2)", rep.deviation),
        ));
    }
    // monotone shrinking of the k=1 truncation error under doubling
    {
        let t = XkTable::build(3, 1)?;
        let target = {
            let v = t.xk_float(1, &ctx)?;
            let half_pi = ctx.div(&ctx.pi(), &ctx.from_i64(2));
            ctx.to_f64(&ctx.mul(&ctx.mul(&half_pi, &ctx.from_i64(2)), &v))
        };
        let mut devs = Vec::new();
        for mult in [1u64, 2, 4] {
            // keep X divisible by 3 so the truncation boundary stays aligned
            let x = cfg.series_x / 4 / 3 * 3 * mult;
            let dt = analytics::dk_sieve(1, x);
            let s = analytics::congruence_sum_with(&dt, 3, 1, x);
            devs.push((s - target).abs());
        }
        checks.push(Check::assert(
            "pass/doubling-shrinks-k1",
            devs.windows(2).all(|w| w[1] <= w[0] * 1.05),
            format!(
                "deviations {:.3e} -> {:.3e} -> {:.3e}",
                devs[0], devs[1], devs[2]
            ),
        ));
    }
    Ok(SuiteReport {
        suite: "pass".into(),
        checks,
    })
}

/// Three-route agreement on random odd functions: the exact route against the
/// character route at 1e-30, and against the truncated series within its
/// oscillation band (the spread of the last raw truncations bounds the true
/// error on this corpus with a comfortable margin).
pub fn suite_routes(cfg: &SweepConfig, tables: &SweepTables) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let ctx = Ctx::new(cfg.digits);
    let functions_per_pair = 50usize;
    let ladder: Vec<u64> = (0..4).map(|i| cfg.series_x << i).collect();
    for k in 1..=cfg.kmax.min(4) {
        // one sieve ladder per k, shared across primes and functions
        let sieves: Vec<analytics::DivisorTable> =
            ladder.iter().map(|&x| analytics::dk_sieve(k, x)).collect();
        for (&(p, kk), t) in tables.iter() {
            if kk != k || p > 13 {
                continue;
            }
            let sums: Vec<Vec<f64>> = sieves
                .iter()
                .zip(&ladder)
                .map(|(dt, &x)| dt.residue_harmonic_sums(p, x))
                .collect();
            let mut rng = SplitMix64::new(0xab5e_0000 + ((p as u64) << 8) + k as u64);
            let mut exact_ok = true;
            let mut series_ok = true;
            let mut worst_pair = ctx.zero();
            let mut worst_series: f64 = 0.0;
            for _ in 0..functions_per_pair {
                let f = rng.odd_function(p);
                let via_xk = dk1_via_xk(&f, t, &ctx)?;
                let via_chi = dk1_via_characters(&f, k, &ctx)?;
                let dev = ctx
                    .sub(&via_xk.value, &via_chi.re)
                    .abs()
                    .max(&via_chi.im.abs());
                worst_pair = worst_pair.max(&dev);
                exact_ok &= dev < ctx.ten_pow(-30);
                let fv: Vec<f64> = (0..p)
                    .map(|res| f.value(res as i64).to_f64().expect("small rational"))
                    .collect();
                let raw: Vec<f64> = sums
                    .iter()
                    .map(|s| s.iter().enumerate().map(|(res, v)| fv[res] * v).sum())
                    .collect();
                let n = raw.len();
                let est = (raw[n - 2] + raw[n - 1]) / 2.0;
                let spread = raw[n - 3..]
                    .iter()
                    .fold(f64::NEG_INFINITY, |a, &b| a.max(b))
                    - raw[n - 3..].iter().fold(f64::INFINITY, |a, &b| a.min(b));
                let target = ctx.to_f64(&via_xk.value);
                let dev_series = (est - target).abs();
                let tol = (8.0 * spread).max(1e-6 * (1.0 + target.abs()));
                worst_series = worst_series.max(dev_series / (1.0 + target.abs()));
                series_ok &= dev_series <= tol;
            }
            checks.push(Check::assert(
                format!("routes/exact-pair p={p} k={k}"),
                exact_ok,
                format!(
                    "max |xk-route - character-route| = {} over {} functions",
                    ctx.to_decimal_string(&worst_pair, 4),
                    functions_per_pair
                ),
            ));
            checks.push(Check::assert(
                format!("routes/series p={p} k={k}"),
                series_ok,
                format!("worst relative series deviation {worst_series:.3e}"),
            ));
        }
    }
    Ok(SuiteReport {
        suite: "routes".into(),
        checks,
    })
}

/// Exact traces against the independent form-counting oracle.
pub fn suite_trace(_cfg: &SweepConfig, tables: &SweepTables) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for (&(p, k), t) in tables.iter() {
        let u = arith::gcd(k as u64, (p - 1) as u64);
        if arith::v2((p - 1) as u64) > arith::v2(k as u64) {
            let mut ok = true;
            for r in 1..p {
                ok &= t.trace_xk(r as i64)? == rat_int(0);
            }
            checks.push(Check::assert(
                format!("trace/vanishing p={p} k={k}"),
                ok,
                "trace of z_k over Q vanishes in the v2-dominant case",
            ));
        } else if u == 2 && p % 4 == 3 && p > 3 {
            // Tr over the real subfield = 2^{k-1} (r/p) h(-p)^k p^{-k/2}
            let h = class_number_neg(p)? as i64;
            let mut ok = true;
            for r in 1..p {
                let leg = arith::legendre(r as i64, p as u64) as i64;
                let expect = rat_i64(leg * 2i64.pow(k - 1) * h.pow(k), (p as i64).pow(k / 2));
                ok &= t.trace_xk(r as i64)? == expect;
            }
            checks.push(Check::assert(
                format!("trace/quadratic-case p={p} k={k}"),
                ok,
                format!("Tr = 2^(k-1) (r/p) h^k p^(-k/2) with h(-{p}) = {h} from form counting"),
            ));
        }
    }
    Ok(SuiteReport {
        suite: "trace".into(),
        checks,
    })
}

/// Run the named suite ("xk", "kernel", "det", "moments", "pass", "routes",
/// "trace", or "all").
pub fn run_suites(which: &str, cfg: &SweepConfig) -> Result<Vec<SuiteReport>> {
    let tables = SweepTables::build(cfg)?;
    let mut out = Vec::new();
    let all = which == "all";
    if all || which == "xk" {
        out.push(suite_xk(cfg, &tables)?);
    }
    if all || which == "kernel" {
        out.push(suite_kernel(cfg, &tables)?);
    }
    if all || which == "det" {
        out.push(suite_det(cfg, &tables)?);
    }
    if all || which == "moments" {
        out.push(suite_moments(cfg, &tables)?);
    }
    if all || which == "pass" {
        out.push(suite_pass(cfg, &tables)?);
    }
    if all || which == "routes" {
        out.push(suite_routes(cfg, &tables)?);
    }
    if all || which == "trace" {
        out.push(suite_trace(cfg, &tables)?);
    }
    if out.is_empty() {
        return Err(crate::error::Error::InvalidInput(format!(
            "unknown suite {which:?}"
        )));
    }
    Ok(out)
}
