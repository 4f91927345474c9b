//! Partitions, Weyl dimensions and related combinatorics.
//!
//! Counts are exact (`BigUint`); inequalities against closed-form real
//! expressions are evaluated in log space with a stated relative slack.

use num_bigint::BigUint;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReprError {
    #[error("partition has {0} parts, more than the rank bound {1}")]
    TooManyParts(usize, usize),
    #[error("character formula implemented for partitions with at most 2 parts (got {0})")]
    UnsupportedRank(usize),
    #[error("eigenphase modulus {0} deviates from the unit circle")]
    InvalidPhase(f64),
}

pub type Result<T> = std::result::Result<T, ReprError>;

/// Young-diagram shape: non-increasing non-negative parts, trailing zeros
/// stripped so equal shapes compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(parts: Vec<u64>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "parts must be non-increasing"
        );
        let mut parts = parts;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Self { parts }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Part at `row`, zero beyond the last row.
    pub fn part(&self, row: usize) -> u64 {
        self.parts.get(row).copied().unwrap_or(0)
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` into at most `d` parts, lexicographically descending.
pub fn partitions(n: u64, d: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut prefix: Vec<u64> = Vec::new();
    fn rec(remaining: u64, max_part: u64, slots: usize, prefix: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::new(prefix.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        let hi = remaining.min(max_part);
        // Feasibility: `slots` parts of size <= p must reach `remaining`.
        for p in (1..=hi).rev() {
            if p * slots as u64 >= remaining {
                prefix.push(p);
                rec(remaining - p, p, slots - 1, prefix, out);
                prefix.pop();
            }
        }
    }
    if d >= 1 {
        rec(n, n, d, &mut prefix, &mut out);
    }
    if n == 0 && d >= 1 {
        // rec pushed the empty partition already via remaining == 0.
    }
    out
}

/// Shapes reachable from `lambda` by adding one box, clipped to at most `d`
/// rows (the Pieri branching used for the character sums).
pub fn add_one_box(lambda: &Partition, d: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let rows = lambda.num_parts();
    for row in 0..=rows.min(d - 1) {
        let grown = lambda.part(row) + 1;
        if row == 0 || lambda.part(row - 1) >= grown {
            let mut parts: Vec<u64> = (0..rows.max(row + 1)).map(|r| lambda.part(r)).collect();
            parts[row] = grown;
            out.push(Partition::new(parts));
        }
    }
    out
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for j in 1..=k {
        acc *= BigUint::from(n - k + j);
        acc /= BigUint::from(j);
    }
    acc
}

/// Dimension of the irreducible `U(d)` module with highest weight `lambda`,
/// by the Weyl dimension formula `prod_{i<j} (l_i - l_j + j - i) / (j - i)`.
pub fn weyl_dimension(lambda: &Partition, d: usize) -> Result<BigUint> {
    if lambda.num_parts() > d {
        return Err(ReprError::TooManyParts(lambda.num_parts(), d));
    }
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..d {
        for j in (i + 1)..d {
            let li = lambda.part(i) as i128;
            let lj = lambda.part(j) as i128;
            let gap = (j - i) as i128;
            num *= BigUint::from((li - lj + gap) as u128);
            den *= BigUint::from(gap as u128);
        }
    }
    Ok(num / den)
}

/// `C(n + d^2 - 1, d^2 - 1)`: dimension of the subspace carrying information
/// about `n` parallel uses of a `d`-dimensional unitary.
pub fn program_dimension_dn(n: u64, d: u64) -> BigUint {
    let dd = d * d;
    binomial(n + dd - 1, dd - 1)
}

/// Natural log of a positive big integer, accurate to ~1e-15 relative.
pub fn ln_biguint(x: &BigUint) -> f64 {
    use num_traits_shim::ToF64;
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64_lossy().ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64_lossy();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

mod num_traits_shim {
    use num_bigint::BigUint;

    pub trait ToF64 {
        fn to_f64_lossy(&self) -> f64;
    }

    impl ToF64 for BigUint {
        fn to_f64_lossy(&self) -> f64 {
            let digits = self.to_u64_digits();
            match digits.len() {
                0 => 0.0,
                1 => digits[0] as f64,
                _ => {
                    let hi = digits[digits.len() - 1] as f64;
                    let lo = digits[digits.len() - 2] as f64;
                    (hi * 2f64.powi(64) + lo) * 2f64.powi((64 * (digits.len() - 2)) as i32)
                }
            }
        }
    }
}

/// Natural log of the lower-bound expression
/// `(1/(m+k+1)) (1 + k/(m+1))^{m+1} (1 + m/(k+1))^{k+1}`.
pub fn binomial_lb_ln(m: u64, k: u64) -> f64 {
    let (m, k) = (m as f64, k as f64);
    -((m + k + 1.0).ln()) + (m + 1.0) * (k / (m + 1.0)).ln_1p() + (k + 1.0) * (m / (k + 1.0)).ln_1p()
}

/// The lower-bound expression itself. Evaluated in log space, so the
/// intermediate never overflows; the result fits an f64 for m, k up to ~1e5.
pub fn binomial_lb_rhs(m: u64, k: u64) -> f64 {
    binomial_lb_ln(m, k).exp()
}

/// Checks `C(m+k, k) >= rhs` in log space with 1e-9 relative slack; returns
/// the log-space margin.
pub fn binomial_lb_margin(m: u64, k: u64) -> f64 {
    let lhs = ln_biguint(&binomial(m + k, k));
    let rhs = binomial_lb_ln(m, k);
    lhs - rhs + 1e-9 * rhs.abs().max(1.0)
}

/// Schur polynomial `s_lambda(x, y)` for a two-row shape evaluated at unit
/// eigenphases: `(xy)^{l2} * sum_{j=0..m} x^j y^{m-j}` with `m = l1 - l2`.
/// The summed form is exact at `x = y`, where it reduces to `(m+1) x^m (xy)^{l2}`.
pub fn schur_character(lambda: &Partition, x: Complex64, y: Complex64) -> Result<Complex64> {
    if lambda.num_parts() > 2 {
        return Err(ReprError::UnsupportedRank(lambda.num_parts()));
    }
    for z in [x, y] {
        if (z.norm() - 1.0).abs() > 1e-9 {
            return Err(ReprError::InvalidPhase(z.norm()));
        }
    }
    let l1 = lambda.part(0);
    let l2 = lambda.part(1);
    let m = (l1 - l2) as i32;
    let mut hom = Complex64::new(0.0, 0.0);
    for j in 0..=m {
        hom += x.powi(j) * y.powi(m - j);
    }
    Ok((x * y).powi(l2 as i32) * hom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn partitions_small_cases() {
        let got = partitions(2, 2);
        assert_eq!(got, vec![p(&[2]), p(&[1, 1])]);
        let got = partitions(4, 2);
        assert_eq!(got, vec![p(&[4]), p(&[3, 1]), p(&[2, 2])]);
        assert_eq!(got.len(), 3);
        assert_eq!(partitions(7, 1), vec![p(&[7])]);
        assert_eq!(partitions(0, 3), vec![p(&[])]);
    }

    #[test]
    fn weyl_dimension_examples() {
        assert_eq!(weyl_dimension(&p(&[1]), 2).unwrap(), BigUint::from(2u32));
        assert_eq!(weyl_dimension(&p(&[1, 1]), 2).unwrap(), BigUint::from(1u32));
        assert_eq!(weyl_dimension(&p(&[2, 1, 0]), 3).unwrap(), BigUint::from(8u32));
        assert!(weyl_dimension(&p(&[1, 1, 1]), 2).is_err());
        // Symmetric representations of U(2) have dimension n + 1.
        for n in 0..=50u64 {
            assert_eq!(
                weyl_dimension(&p(&[n]), 2).unwrap(),
                BigUint::from(n + 1)
            );
        }
    }

    #[test]
    fn program_dimension_examples() {
        assert_eq!(program_dimension_dn(1, 2), BigUint::from(4u32));
        assert_eq!(program_dimension_dn(2, 2), BigUint::from(10u32));
        assert_eq!(program_dimension_dn(9, 1), BigUint::from(1u32));
    }

    #[test]
    fn cauchy_identity_exact() {
        // sum_lambda (dim W_lambda^d)^2 == C(n + d^2 - 1, d^2 - 1), exactly.
        for d in 1..=4usize {
            for n in 0..=8u64 {
                let mut total = BigUint::from(0u32);
                for lambda in partitions(n, d) {
                    let w = weyl_dimension(&lambda, d).unwrap();
                    total += &w * &w;
                }
                assert_eq!(
                    total,
                    program_dimension_dn(n, d as u64),
                    "d = {d}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn binomial_lower_bound_examples() {
        for k in [0u64, 1, 5, 60] {
            assert!((binomial_lb_rhs(0, k) - 1.0).abs() < 1e-12);
        }
        assert!((binomial_lb_rhs(1, 1) - 1.6875).abs() < 1e-12);
        let big = binomial(200, 100);
        assert!(ln_biguint(&big) >= binomial_lb_ln(100, 100));
    }

    #[test]
    fn binomial_lower_bound_sweep() {
        for m in 0..=200u64 {
            for k in 0..=200u64 {
                assert!(
                    binomial_lb_margin(m, k) >= 0.0,
                    "bound violated at m = {m}, k = {k}"
                );
            }
        }
    }

    #[test]
    fn ln_biguint_accuracy() {
        let x = BigUint::from(12345u64).pow(40);
        let want = 40.0 * 12345f64.ln();
        assert!((ln_biguint(&x) - want).abs() < 1e-9 * want);
    }

    #[test]
    fn schur_character_small_shapes() {
        let x = Complex64::from_polar(1.0, 0.4);
        let y = Complex64::from_polar(1.0, -1.1);
        let s1 = schur_character(&p(&[1]), x, y).unwrap();
        assert!((s1 - (x + y)).norm() < 1e-12);
        let s11 = schur_character(&p(&[1, 1]), x, y).unwrap();
        assert!((s11 - x * y).norm() < 1e-12);
        let s2 = schur_character(&p(&[2]), x, y).unwrap();
        assert!((s2 - (x * x + x * y + y * y)).norm() < 1e-12);
        assert!(schur_character(&p(&[1, 1, 1]), x, y).is_err());
    }

    #[test]
    fn character_product_branches_into_added_boxes() {
        // chi_(1) * chi_(1) = chi_(2) + chi_(1,1) pointwise.
        for i in 0..1000u64 {
            let a = (i as f64) * 0.006283;
            let b = (i as f64) * 0.012566 + 0.3;
            let x = Complex64::from_polar(1.0, a);
            let y = Complex64::from_polar(1.0, b);
            let lhs = schur_character(&p(&[1]), x, y).unwrap().powi(2);
            let rhs: Complex64 = add_one_box(&p(&[1]), 2)
                .iter()
                .map(|mu| schur_character(mu, x, y).unwrap())
                .sum();
            assert!((lhs - rhs).norm() < 1e-9, "i = {i}");
        }
    }

    #[test]
    fn add_one_box_respects_rank_bound() {
        assert_eq!(add_one_box(&p(&[1]), 2), vec![p(&[2]), p(&[1, 1])]);
        assert_eq!(add_one_box(&p(&[1, 1]), 2), vec![p(&[2, 1])]);
        assert_eq!(add_one_box(&p(&[2]), 2), vec![p(&[3]), p(&[2, 1])]);
        assert_eq!(add_one_box(&p(&[]), 2), vec![p(&[1])]);
    }
}
