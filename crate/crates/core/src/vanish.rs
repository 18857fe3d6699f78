//! Exact rational linear algebra for the vanishing space: kernel bases in
//! reduced echelon normal form, rank computations over Q, the dimension
//! bound, and the residue-class independence checks.
//!
//! A kernel element f is a rational vector on 1..(p-1)/2 with
//! sum_r f(r) z_k(r) = 0 exactly; writing the z-values coordinate-wise in the
//! power basis turns this into p-1 rational equations, which subsume every
//! Galois-orbit equation since the orbit maps act Q-linearly on coordinates.

use crate::arith;
use crate::cotsum::XkTable;
use crate::error::{Error, Result};
use crate::exactalg::{CycloElem, Rational};
use crate::lseries::OddPeriodicFunction;
use crate::par;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>, // row-major
}

/// Pivot-row selection order; any strategy yields the same reduced echelon
/// form, which the tests exploit as a determinism check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotStrategy {
    /// First row with a nonzero entry in the pivot column.
    FirstNonZero,
    /// Row whose entry has the largest numerator bit-length.
    LargestNumerator,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    /// Reduced row echelon form; returns the transformed matrix and the pivot
    /// column indices (strictly increasing).
    pub fn rref(&self, strategy: PivotStrategy) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let candidates: Vec<usize> =
                (row..m.rows).filter(|&i| !m.at(i, col).is_zero()).collect();
            let Some(&pick) = (match strategy {
                PivotStrategy::FirstNonZero => candidates.first(),
                PivotStrategy::LargestNumerator => candidates
                    .iter()
                    .max_by_key(|&&i| m.at(i, col).numer().bits()),
            }) else {
                continue;
            };
            if pick != row {
                for j in 0..m.cols {
                    m.data.swap(pick * m.cols + j, row * m.cols + j);
                }
            }
            let inv = m.at(row, col).recip();
            for j in col..m.cols {
                let v = m.at(row, j) * &inv;
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row || m.at(i, col).is_zero() {
                    continue;
                }
                let factor = m.at(i, col).clone();
                for j in col..m.cols {
                    let v = m.at(i, j) - &factor * m.at(row, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref(PivotStrategy::FirstNonZero).1.len()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination on the
    /// denominator-cleared integer matrix.
    pub fn det_bareiss(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        // clear denominators per row, tracking the product of scales
        let mut scale = Rational::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut lcm = BigInt::one();
            for j in 0..n {
                lcm = lcm.lcm(self.at(i, j).denom());
            }
            scale /= Rational::from_integer(lcm.clone());
            a.push(
                (0..n)
                    .map(|j| {
                        let q = self.at(i, j);
                        q.numer() * (&lcm / q.denom())
                    })
                    .collect(),
            );
        }
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Ok(Rational::zero());
                };
                a.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    a[i][j] = q;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let det = Rational::from_integer(a[n - 1][n - 1].clone()) * scale;
        Ok(if sign < 0 { -det } else { det })
    }
}

/// Rank over Q of a family of cyclotomic values: each value contributes its
/// p-1 power-basis coordinates as a row. Scaling every value by a fixed
/// nonzero scalar (such as i^k) does not change rational dependencies, so
/// ranks of x-values and z-values coincide.
pub fn rank_over_q(values: &[CycloElem]) -> Result<usize> {
    if values.is_empty() {
        return Ok(0);
    }
    let p = values[0].p();
    for v in values {
        if v.p() != p {
            return Err(Error::ConductorMismatch(p, v.p()));
        }
    }
    let rows = values
        .iter()
        .map(|v| v.coeffs().to_vec())
        .collect::<Vec<_>>();
    Ok(RationalMatrix::from_rows(rows)?.rank())
}

/// Exact rational basis of the vanishing space with its dimension data.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    pub p: u32,
    pub k: u32,
    /// dim of the ambient space of odd functions, (p-1)/2.
    pub dim_v: usize,
    /// Basis in reduced echelon normal form (leading coefficient 1, pivots
    /// strictly increasing, zeros above and below pivots).
    pub basis: Vec<OddPeriodicFunction>,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Exact membership test against the echelon basis.
    pub fn contains(&self, f: &OddPeriodicFunction) -> bool {
        if f.p() != self.p {
            return false;
        }
        let mut v: Vec<Rational> = f.half_values().to_vec();
        for b in &self.basis {
            let row = b.half_values();
            let pivot = row
                .iter()
                .position(|c| !c.is_zero())
                .expect("basis rows are nonzero");
            if v[pivot].is_zero() {
                continue;
            }
            let factor = v[pivot].clone();
            for (vi, ri) in v.iter_mut().zip(row) {
                *vi -= &factor * ri;
            }
        }
        v.iter().all(|c| c.is_zero())
    }

    /// Basis rows scaled to coprime integers with positive leading entry.
    pub fn integer_basis(&self) -> Vec<Vec<BigInt>> {
        self.basis
            .iter()
            .map(|f| {
                let vals = f.half_values();
                let mut lcm = BigInt::one();
                for q in vals {
                    lcm = lcm.lcm(q.denom());
                }
                let mut ints: Vec<BigInt> = vals
                    .iter()
                    .map(|q| q.numer() * (&lcm / q.denom()))
                    .collect();
                let mut gcd = BigInt::zero();
                for c in &ints {
                    gcd = gcd.gcd(c);
                }
                if !gcd.is_zero() && !gcd.is_one() {
                    for c in ints.iter_mut() {
                        *c = &*c / &gcd;
                    }
                }
                if ints
                    .iter()
                    .find(|c| !c.is_zero())
                    .is_some_and(|c| c.is_negative())
                {
                    for c in ints.iter_mut() {
                        *c = -&*c;
                    }
                }
                ints
            })
            .collect()
    }
}

/// Build the coordinate matrix of the defining combination: column r holds
/// the power-basis coordinates of z_k(r), r = 1..(p-1)/2.
fn kernel_matrix(table: &XkTable) -> RationalMatrix {
    let p = table.p();
    let half = ((p - 1) / 2) as usize;
    let coords = par::map_indexed(half, |i| {
        table
            .z(i as i64 + 1)
            .expect("unit residue")
            .coeffs()
            .to_vec()
    });
    let mut m = RationalMatrix::zeros((p - 1) as usize, half);
    for (col, cs) in coords.iter().enumerate() {
        for (row, c) in cs.iter().enumerate() {
            m.set(row, col, c.clone());
        }
    }
    m
}

/// Exact nullspace of the defining system in echelon normal form.
pub fn v0_kernel(table: &XkTable) -> KernelBasis {
    v0_kernel_with(table, PivotStrategy::FirstNonZero)
}

pub fn v0_kernel_with(table: &XkTable, strategy: PivotStrategy) -> KernelBasis {
    let p = table.p();
    let half = ((p - 1) / 2) as usize;
    let m = kernel_matrix(table);
    let (r, pivots) = m.rref(strategy);
    let free: Vec<usize> = (0..half).filter(|c| !pivots.contains(c)).collect();
    // standard kernel vectors, one per free column
    let raw: Vec<Vec<Rational>> = free
        .iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); half];
            v[fc] = Rational::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.at(ri, fc).clone();
            }
            v
        })
        .collect();
    // normalize the basis itself to reduced echelon form: unique per subspace
    let basis = if raw.is_empty() {
        Vec::new()
    } else {
        let (b, bp) = RationalMatrix::from_rows(raw)
            .expect("rectangular")
            .rref(strategy);
        bp.iter()
            .enumerate()
            .map(|(i, _)| {
                let row = (0..half).map(|j| b.at(i, j).clone()).collect();
                OddPeriodicFunction::new(p, row).expect("half-length row")
            })
            .collect()
    };
    KernelBasis {
        p,
        k: table.k(),
        dim_v: half,
        basis,
    }
}

/// Dimension bound: (p-1)/2 * (r-1)/r when v_2(p-1) > v_2(k), else
/// (p-1)/2 * (r-2)/r, with r = gcd(k, p-1). Always an integer; a non-integer
/// outcome signals an internal inconsistency.
pub fn dim_bound(p: u32, k: u32) -> Result<usize> {
    if !arith::is_odd_prime(p as u64) || k == 0 {
        return Err(Error::InvalidInput(
            "dim_bound requires odd prime p and k >= 1".into(),
        ));
    }
    let r = arith::gcd(k as u64, (p - 1) as u64);
    let numerator = if arith::v2((p - 1) as u64) > arith::v2(k as u64) {
        (p as u64 - 1) * (r - 1)
    } else {
        (p as u64 - 1) * (r - 2)
    };
    let denominator = 2 * r;
    if numerator % denominator != 0 {
        return Err(Error::FormulaInconsistency(p, k));
    }
    Ok((numerator / denominator) as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DimCase {
    #[serde(rename = "EQUALITY-PROVEN")]
    EqualityProven,
    #[serde(rename = "BOUND-ONLY")]
    BoundOnly,
}

/// Equality in the dimension formula is proven for gcd <= 2, and for gcd = 4
/// with p = 5 mod 8.
pub fn dim_case(p: u32, k: u32) -> DimCase {
    let r = arith::gcd(k as u64, (p - 1) as u64);
    if r <= 2 || (r == 4 && p % 8 == 5) {
        DimCase::EqualityProven
    } else {
        DimCase::BoundOnly
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DimReport {
    pub p: u32,
    pub k: u32,
    pub dim: usize,
    pub bound: usize,
    pub case: DimCase,
    pub basis: Vec<Vec<String>>,
}

/// Compare the computed kernel dimension with the bound; classification is
/// EQUALITY-PROVEN or BOUND-ONLY. `dim < bound` is an implementation bug and
/// errors; `dim != bound` in a proven case likewise.
pub fn verify_dim(table: &XkTable) -> Result<DimReport> {
    let p = table.p();
    let k = table.k();
    let kernel = v0_kernel(table);
    let bound = dim_bound(p, k)?;
    let case = dim_case(p, k);
    let dim = kernel.dim();
    if dim < bound || (case == DimCase::EqualityProven && dim != bound) {
        return Err(Error::TheoremViolation { p, k, dim, bound });
    }
    let basis = kernel
        .integer_basis()
        .iter()
        .map(|row| row.iter().map(|c| format!("{c}/1")).collect())
        .collect();
    Ok(DimReport {
        p,
        k,
        dim,
        bound,
        case,
        basis,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidueClass {
    Quadratic,
    NonResidue,
}

/// Residues in 1..(p-1)/2 belonging to the class.
pub fn class_residues(p: u32, class: ResidueClass) -> Vec<u32> {
    let want = match class {
        ResidueClass::Quadratic => 1,
        ResidueClass::NonResidue => -1,
    };
    (1..=(p - 1) / 2)
        .filter(|&r| arith::legendre(r as i64, p as u64) == want)
        .collect()
}

/// Rank over Q of the z-values supported on one residue class of the half
/// range.
pub fn subset_rank(table: &XkTable, class: ResidueClass) -> Result<usize> {
    let values: Vec<CycloElem> = class_residues(table.p(), class)
        .iter()
        .map(|&r| table.z(r as i64).cloned())
        .collect::<Result<_>>()?;
    rank_over_q(&values)
}

/// True iff no nonzero kernel element is supported entirely on quadratic
/// residues or entirely on non-residues; equivalent to both subset ranks
/// being full.
pub fn qr_support_check(table: &XkTable) -> Result<bool> {
    let p = table.p();
    for class in [ResidueClass::Quadratic, ResidueClass::NonResidue] {
        let size = class_residues(p, class).len();
        if subset_rank(table, class)? != size {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat_i64, rat_int};

    fn table(p: u32, k: u32) -> XkTable {
        XkTable::build(p, k).unwrap()
    }

    #[test]
    fn chowla_independence_k1() {
        let t = table(7, 1);
        let vals: Vec<CycloElem> = (1..=3).map(|r| t.z(r).unwrap().clone()).collect();
        assert_eq!(rank_over_q(&vals).unwrap(), 3);
    }

    #[test]
    fn dependent_pair_p5() {
        let t = table(5, 2);
        let vals = vec![t.z(1).unwrap().clone(), t.z(2).unwrap().clone()];
        assert_eq!(rank_over_q(&vals).unwrap(), 1);
    }

    #[test]
    fn duplicate_rank_one() {
        let a = CycloElem::xi_pow(7, 2);
        assert_eq!(rank_over_q(&[a.clone(), a]).unwrap(), 1);
        assert_eq!(rank_over_q(&[]).unwrap(), 0);
    }

    #[test]
    fn kernel_p5_intro() {
        let kb = v0_kernel(&table(5, 2));
        assert_eq!(kb.dim(), 1);
        assert_eq!(kb.basis[0].half_values(), &[rat_int(1), rat_int(-2)]);
        assert_eq!(
            kb.integer_basis(),
            vec![vec![BigInt::from(1), BigInt::from(-2)]]
        );
    }

    #[test]
    fn kernel_p7_trivial() {
        let kb = v0_kernel(&table(7, 2));
        assert_eq!(kb.dim(), 0);
    }

    #[test]
    fn kernel_p13_dim3_and_family() {
        let kb = v0_kernel(&table(13, 2));
        assert_eq!(kb.dim(), 3);
        // the corrected intro family members lie in the span
        for (a, b, c) in [(1i64, 0i64, 0i64), (0, 1, 0), (0, 0, 1), (2, -3, 5)] {
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
            )
            .unwrap();
            assert!(kb.contains(&f), "family member {a},{b},{c} not in span");
        }
        // the uncorrected sign pattern is not
        let g = OddPeriodicFunction::from_i64(13, &[18, 19, 0, 0, 4, -11]).unwrap();
        assert!(!kb.contains(&g));
    }

    #[test]
    fn rank_nullity() {
        for (p, k) in [(5u32, 2u32), (7, 3), (13, 2), (13, 4)] {
            let t = table(p, k);
            let vals: Vec<CycloElem> = (1..=(p - 1) / 2)
                .map(|r| t.z(r as i64).unwrap().clone())
                .collect();
            let rank = rank_over_q(&vals).unwrap();
            let dim = v0_kernel(&t).dim();
            assert_eq!(rank + dim, ((p - 1) / 2) as usize, "p={p} k={k}");
        }
    }

    #[test]
    fn echelon_determinism_across_strategies() {
        for (p, k) in [(13u32, 2u32), (13, 4), (11, 3)] {
            let t = table(p, k);
            let a = v0_kernel_with(&t, PivotStrategy::FirstNonZero);
            let b = v0_kernel_with(&t, PivotStrategy::LargestNumerator);
            assert_eq!(a.basis.len(), b.basis.len());
            for (x, y) in a.basis.iter().zip(&b.basis) {
                assert_eq!(x, y, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn bound_values() {
        assert_eq!(dim_bound(13, 2).unwrap(), 3);
        assert_eq!(dim_bound(7, 2).unwrap(), 0);
        assert_eq!(dim_bound(13, 4).unwrap(), 3);
        assert_eq!(dim_bound(7, 3).unwrap(), 2);
        assert_eq!(dim_bound(5, 2).unwrap(), 1);
    }

    #[test]
    fn verify_dim_cases() {
        let r = verify_dim(&table(5, 2)).unwrap();
        assert_eq!((r.dim, r.bound, r.case), (1, 1, DimCase::EqualityProven));
        let r = verify_dim(&table(13, 4)).unwrap();
        assert_eq!((r.dim, r.bound, r.case), (3, 3, DimCase::EqualityProven));
        let r = verify_dim(&table(7, 3)).unwrap();
        assert_eq!(r.bound, 2);
        assert_eq!(r.case, DimCase::BoundOnly);
        assert!(r.dim >= 2);
    }

    #[test]
    fn subset_ranks_p13() {
        for k in [2u32, 4] {
            let t = table(13, k);
            assert_eq!(class_residues(13, ResidueClass::Quadratic), vec![1, 3, 4]);
            assert_eq!(class_residues(13, ResidueClass::NonResidue), vec![2, 5, 6]);
            assert_eq!(subset_rank(&t, ResidueClass::Quadratic).unwrap(), 3);
            assert_eq!(subset_rank(&t, ResidueClass::NonResidue).unwrap(), 3);
            assert!(qr_support_check(&t).unwrap());
        }
    }

    #[test]
    fn qr_support_small_cases() {
        assert!(qr_support_check(&table(5, 2)).unwrap());
        assert!(qr_support_check(&table(7, 2)).unwrap()); // vacuous: kernel is 0
    }

    #[test]
    fn bareiss_det_matches_cofactor() {
        let m = RationalMatrix::from_rows(vec![
            vec![rat_i64(1, 2), rat_int(3), rat_int(-1)],
            vec![rat_int(0), rat_i64(2, 3), rat_int(4)],
            vec![rat_int(5), rat_int(-2), rat_i64(1, 7)],
        ])
        .unwrap();
        // cofactor expansion by hand:
        // det = 1/2*(2/3*1/7 - 4*(-2)) - 3*(0*1/7 - 4*5) + (-1)*(0*(-2) - 2/3*5)
        let expect = rat_i64(1, 2) * (rat_i64(2, 21) + rat_int(8)) + rat_int(60) + rat_i64(10, 3);
        assert_eq!(m.det_bareiss().unwrap(), expect);
    }

    #[test]
    fn singular_det_is_zero() {
        let m = RationalMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ])
        .unwrap();
        assert_eq!(m.det_bareiss().unwrap(), rat_int(0));
    }

    #[test]
    fn orbit_equations_redundant() {
        // applying a Galois map to the defining combination of a kernel
        // vector yields another exact zero
        let t = table(13, 2);
        let kb = v0_kernel(&t);
        let f = &kb.basis[0];
        let mut combo = CycloElem::zero(13);
        for (i, c) in f.half_values().iter().enumerate() {
            combo = combo.add(&t.z(i as i64 + 1).unwrap().scale(c)).unwrap();
        }
        assert!(combo.is_zero());
        for c in 2..13 {
            let s = crate::exactalg::GaloisMap::new(13, c).unwrap();
            assert!(s.apply(&combo).unwrap().is_zero());
        }
    }
}
