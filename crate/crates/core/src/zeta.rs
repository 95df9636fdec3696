//! Exact truncated power series in `t = q^{-s}` and the zeta identities
//! `Π_H ζ(X/H)^{n_H} = 1` and `Π_H ζ_{f_H}(V/H)^{n_H} = 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::relations::IdempotentRelation;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ZetaError {
    #[error("{op} needs constant term {expected}")]
    ConstantTerm { op: &'static str, expected: u8 },
    #[error("series truncated at different degrees ({left} and {right})")]
    DegreeMismatch { left: usize, right: usize },
    #[error("count table has {found} rows for a relation of length {expected}")]
    TableShape { expected: usize, found: usize },
    #[error("count row {row} covers degrees up to {found}, need {needed}")]
    ShortRow { row: usize, found: usize, needed: usize },
    #[error("a log residual does not fit in 64 bits")]
    Overflow,
}

/// `c_0 + c_1 t + ... + c_{n_max} t^{n_max}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

impl TruncatedSeries {
    pub fn new(mut coeffs: Vec<BigRational>, n_max: usize) -> TruncatedSeries {
        coeffs.resize(n_max + 1, BigRational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn from_integers(coeffs: &[i64], n_max: usize) -> TruncatedSeries {
        Self::new(coeffs.iter().take(n_max + 1).map(|&c| int(c)).collect(), n_max)
    }

    pub fn one(n_max: usize) -> TruncatedSeries {
        Self::new(vec![BigRational::one()], n_max)
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// First index `>= 1` with a nonzero coefficient.
    pub fn first_nonconstant(&self) -> Option<usize> {
        (1..self.coeffs.len()).find(|&i| !self.coeffs[i].is_zero())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_string).collect()
    }

    fn same_degree(&self, other: &TruncatedSeries) -> Result<(), ZetaError> {
        if self.n_max() == other.n_max() {
            Ok(())
        } else {
            Err(ZetaError::DegreeMismatch {
                left: self.n_max(),
                right: other.n_max(),
            })
        }
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, ZetaError> {
        self.same_degree(other)?;
        Ok(TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, k: &BigRational) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, ZetaError> {
        self.same_degree(other)?;
        let n = self.n_max();
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `log A` for `c_0 = 1`, from `A' = L' A`.
    pub fn log(&self) -> Result<TruncatedSeries, ZetaError> {
        if !self.coeffs[0].is_one() {
            return Err(ZetaError::ConstantTerm { op: "log", expected: 1 });
        }
        let n = self.n_max();
        let mut l = vec![BigRational::zero(); n + 1];
        for m in 1..=n {
            let mut s = BigRational::zero();
            for k in 1..m {
                s += int(k as i64) * &l[k] * &self.coeffs[m - k];
            }
            l[m] = &self.coeffs[m] - s / int(m as i64);
        }
        Ok(TruncatedSeries { coeffs: l })
    }

    /// `exp A` for `c_0 = 0`, from `B' = A' B`.
    pub fn exp(&self) -> Result<TruncatedSeries, ZetaError> {
        if !self.coeffs[0].is_zero() {
            return Err(ZetaError::ConstantTerm { op: "exp", expected: 0 });
        }
        let n = self.n_max();
        let mut b = vec![BigRational::zero(); n + 1];
        b[0] = BigRational::one();
        for m in 1..=n {
            let mut s = BigRational::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    s += int(k as i64) * &self.coeffs[k] * &b[m - k];
                }
            }
            b[m] = s / int(m as i64);
        }
        Ok(TruncatedSeries { coeffs: b })
    }

    fn mul_power(&self, k: u64) -> TruncatedSeries {
        let mut acc = TruncatedSeries::one(self.n_max());
        for _ in 0..k {
            acc = acc.mul(self).expect("same degree");
        }
        acc
    }

    /// `A^k`. For `c_0 = 1` this is `exp(k log A)`, checked against repeated
    /// multiplication when `|k| <= 3`.
    pub fn int_pow(&self, k: i64) -> Result<TruncatedSeries, ZetaError> {
        if !self.coeffs[0].is_one() {
            if k < 0 {
                return Err(ZetaError::ConstantTerm { op: "negative power", expected: 1 });
            }
            let (mut base, mut e, mut acc) = (self.clone(), k as u64, TruncatedSeries::one(self.n_max()));
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc.mul(&base)?;
                }
                base = base.mul(&base)?;
                e >>= 1;
            }
            return Ok(acc);
        }
        let out = self.log()?.scale(&int(k)).exp()?;
        if k.abs() <= 3 {
            let direct = self.mul_power(k.unsigned_abs());
            let check = if k >= 0 { direct } else { direct.mul(&out)? };
            let expected = if k >= 0 { out.clone() } else { TruncatedSeries::one(self.n_max()) };
            assert_eq!(check, expected, "exp(k log A) disagrees with repeated multiplication");
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<TruncatedSeries, ZetaError> {
        self.int_pow(-1)
    }
}

/// `Σ_{n>=1} counts[n-1] t^n / n` truncated at `n_max`.
pub fn count_log(counts: &[u64], n_max: usize) -> TruncatedSeries {
    let mut c = vec![BigRational::zero(); n_max + 1];
    for (i, &k) in counts.iter().take(n_max).enumerate() {
        c[i + 1] = BigRational::new(BigInt::from(k), BigInt::from(i + 1));
    }
    TruncatedSeries { coeffs: c }
}

/// `exp(Σ counts_n t^n / n)`, with `counts[n-1]` the count over `F_{q^n}`.
pub fn zeta_series(counts: &[u64], n_max: usize) -> TruncatedSeries {
    count_log(counts, n_max).exp().expect("zero constant term")
}

/// `ζ_f` from periodic counts; same construction as [`zeta_series`].
pub fn zeta_f_series(periodic_counts: &[u64], n_max: usize) -> TruncatedSeries {
    zeta_series(periodic_counts, n_max)
}

/// Verdict of `Π_H ζ_H^{n_H} = 1` together with its log-linear form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaCheck {
    pub n_max: usize,
    /// Coefficients of the truncated product.
    pub product: Vec<String>,
    pub product_is_one: bool,
    /// `Σ_H n_H count_H(n)` for `n = 1..n_max`.
    pub log_residuals: Vec<i64>,
    pub residuals_vanish: bool,
    pub agree: bool,
    /// First degree where the product differs from 1.
    pub first_bad: Option<usize>,
    pub pass: bool,
}

/// `table[h][n-1]` is the count for subgroup `h` over `F_{q^n}`; only rows
/// with nonzero coefficient are read.
pub fn zeta_product_check(
    table: &[Vec<u64>],
    relation: &IdempotentRelation,
    n_max: usize,
) -> Result<ZetaCheck, ZetaError> {
    if table.len() != relation.len() {
        return Err(ZetaError::TableShape {
            expected: relation.len(),
            found: table.len(),
        });
    }
    let mut product = TruncatedSeries::one(n_max);
    let mut residuals = vec![0i128; n_max];
    for (row, (counts, &c)) in table.iter().zip(&relation.coefficients).enumerate() {
        if c == 0 {
            continue;
        }
        if counts.len() < n_max {
            return Err(ZetaError::ShortRow {
                row,
                found: counts.len(),
                needed: n_max,
            });
        }
        product = product.mul(&zeta_series(counts, n_max).int_pow(c)?)?;
        for (r, &k) in residuals.iter_mut().zip(counts) {
            *r += c as i128 * k as i128;
        }
    }
    let residuals = residuals
        .into_iter()
        .map(|r| i64::try_from(r).map_err(|_| ZetaError::Overflow))
        .collect::<Result<Vec<i64>, _>>()?;
    let product_is_one = product.is_one();
    let residuals_vanish = residuals.iter().all(|&r| r == 0);
    let first_bad = product.first_nonconstant();
    let agree = product_is_one == residuals_vanish
        && first_bad == residuals.iter().position(|&r| r != 0).map(|i| i + 1);
    Ok(ZetaCheck {
        n_max,
        product: product.to_strings(),
        product_is_one,
        log_residuals: residuals,
        residuals_vanish,
        agree,
        first_bad,
        pass: product_is_one && agree,
    })
}

/// `Π_H ζ(X/H)^{n_H} = 1` from a rational count table.
pub fn theorem_c_check(
    table: &[Vec<u64>],
    relation: &IdempotentRelation,
    n_max: usize,
) -> Result<ZetaCheck, ZetaError> {
    zeta_product_check(table, relation, n_max)
}

/// `Π_H ζ_{f_H}(V/H)^{n_H} = 1` from a periodic count table.
pub fn theorem_d_check(
    table: &[Vec<u64>],
    relation: &IdempotentRelation,
    n_max: usize,
) -> Result<ZetaCheck, ZetaError> {
    zeta_product_check(table, relation, n_max)
}

/// Whether `n c_n = Σ_{k=1}^n counts_k c_{n-k}` holds for every `n`.
pub fn newton_recurrence_holds(series: &TruncatedSeries, counts: &[u64]) -> bool {
    (1..=series.n_max()).all(|n| {
        let rhs: BigRational = (1..=n)
            .map(|k| BigRational::from_integer(BigInt::from(counts[k - 1])) * series.coeff(n - k))
            .sum();
        int(n as i64) * series.coeff(n) == rhs
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| {
                assert!(c.is_integer());
                i64::try_from(c.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn geometric_series() {
        let one_minus_t = TruncatedSeries::from_integers(&[1, -1], 8);
        assert_eq!(ints(&one_minus_t.int_pow(-1).unwrap()), vec![1; 9]);
        let g = one_minus_t.inverse().unwrap();
        assert_eq!(ints(&g.log().unwrap().exp().unwrap()), vec![1; 9]);
    }

    #[test]
    fn log_one_plus_t() {
        let s = TruncatedSeries::from_integers(&[1, 1], 10).log().unwrap();
        for n in 1..=10i64 {
            let sign = if n % 2 == 1 { 1 } else { -1 };
            assert_eq!(s.coeff(n as usize), &BigRational::new(sign.into(), n.into()));
        }
        assert!(s.coeff(0).is_zero());
    }

    #[test]
    fn constant_term_preconditions() {
        let s = TruncatedSeries::from_integers(&[2, 1], 4);
        assert!(matches!(s.log(), Err(ZetaError::ConstantTerm { op: "log", .. })));
        assert!(matches!(s.exp(), Err(ZetaError::ConstantTerm { op: "exp", .. })));
        assert!(s.int_pow(-1).is_err());
        assert_eq!(ints(&s.int_pow(2).unwrap()), vec![4, 4, 1, 0, 0]);
        assert!(matches!(
            s.mul(&TruncatedSeries::one(3)),
            Err(ZetaError::DegreeMismatch { left: 4, right: 3 })
        ));
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(ints(&zeta_series(&[1; 6], 6)), vec![1; 7]);
        let a1: Vec<u64> = (1..=5).map(|n| 4u64.pow(n)).collect();
        assert_eq!(ints(&zeta_series(&a1, 5)), vec![1, 4, 16, 64, 256, 1024]);
        let x16: Vec<u64> = (1..=8).map(|n| if n % 2 == 1 { 4 } else { 16 }).collect();
        let z = zeta_series(&x16, 8);
        assert_eq!(&ints(&z)[..4], &[1, 4, 16, 44]);
        assert!(newton_recurrence_holds(&z, &x16));
        // (1 - t)^-4 (1 - t^2)^-6
        let a = TruncatedSeries::from_integers(&[1, -1], 8).int_pow(-4).unwrap();
        let b = TruncatedSeries::from_integers(&[1, 0, -1], 8).int_pow(-6).unwrap();
        assert_eq!(z, a.mul(&b).unwrap());
    }

    #[test]
    fn powers_agree_beyond_cross_check_range() {
        let s = TruncatedSeries::from_integers(&[1, 3, -2, 5], 7);
        let direct = s.mul_power(5);
        assert_eq!(s.int_pow(5).unwrap(), direct);
        assert!(s.int_pow(-5).unwrap().mul(&direct).unwrap().is_one());
        assert!(s.int_pow(0).unwrap().is_one());
    }

    #[test]
    fn product_check() {
        let rel = IdempotentRelation::new(vec![1, -1, -1, -1, 2]);
        let x16: Vec<u64> = (1..=8).map(|n| if n % 2 == 1 { 4 } else { 16 }).collect();
        let quot: Vec<u64> = (1..=8).map(|n| if n % 2 == 1 { 4 } else { 8 }).collect();
        let g: Vec<u64> = vec![4; 8];
        // |X/H| for the three order-two subgroups, chosen to satisfy the relation
        let table = vec![x16.clone(), quot.clone(), quot.clone(), quot, g];
        let ok = theorem_c_check(&table, &rel, 8).unwrap();
        assert!(ok.pass && ok.product_is_one && ok.residuals_vanish && ok.agree);
        assert_eq!(ok.first_bad, None);

        let mut bad = table.clone();
        bad[1][2] += 1;
        let r = theorem_c_check(&bad, &rel, 8).unwrap();
        assert!(!r.pass && !r.product_is_one && r.agree);
        assert_eq!(r.first_bad, Some(3));
        assert_eq!(r.log_residuals.iter().filter(|&&x| x != 0).count(), 1);

        let zero = theorem_d_check(&table, &IdempotentRelation::zero(5), 8).unwrap();
        assert!(zero.pass);
        assert_eq!(zero.product[0], "1/1");
    }
}
