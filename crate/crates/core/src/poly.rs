//! Minimal dense univariate polynomials over Q: Lagrange interpolation and
//! rational root extraction, enough to solve the tuning determinants exactly.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients, constant term first; kept with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    fn trim(mut coeffs: Vec<BigRational>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn add_scaled(&self, other: &Poly, factor: &BigRational) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] = &out[i] + &(c * factor);
        }
        Poly::trim(out)
    }

    fn mul_linear(&self, a: &BigRational, b: &BigRational) -> Poly {
        // self * (a + b x)
        let mut out = vec![BigRational::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = &out[i] + &(c * a);
            out[i + 1] = &out[i + 1] + &(c * b);
        }
        Poly::trim(out)
    }

    /// Unique polynomial of degree < points.len() through the given points
    /// (x values pairwise distinct).
    pub fn interpolate(points: &[(BigRational, BigRational)]) -> Poly {
        let mut acc = Poly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Poly {
                coeffs: vec![BigRational::one()],
            };
            let mut denom = BigRational::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                basis = basis.mul_linear(&-xj.clone(), &BigRational::one());
                denom *= xi - xj;
            }
            acc = acc.add_scaled(&basis, &(yi / denom));
        }
        acc
    }

    /// All rational roots, ascending, found by the rational root theorem on
    /// the primitive integer form.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        if self.is_zero() || self.coeffs.len() == 1 {
            return vec![];
        }
        let mut roots = Vec::new();
        let mut coeffs = self.coeffs.clone();
        // factor out x^v
        let mut shift = 0usize;
        while coeffs.first().is_some_and(Zero::is_zero) {
            coeffs.remove(0);
            shift += 1;
        }
        if shift > 0 {
            roots.push(BigRational::zero());
        }
        if coeffs.len() <= 1 {
            roots.sort();
            return roots;
        }
        // clear denominators
        let mut lcm = BigInt::one();
        for c in &coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let a0 = ints.first().unwrap().abs();
        let an = ints.last().unwrap().abs();
        for p in divisors(&a0) {
            for q in divisors(&an) {
                for sign in [1i32, -1] {
                    let cand = BigRational::new(&p * BigInt::from(sign), q.clone());
                    if self.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    assert!(!n.is_zero());
    let mut out = Vec::new();
    let mut d = BigInt::one();
    loop {
        let dd = &d * &d;
        if dd > *n {
            break;
        }
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn interpolate_quadratic() {
        // f(x) = 2x^2 - 3x + 1
        let pts: Vec<(BigRational, BigRational)> = (0..3)
            .map(|i| {
                let x = r(i, 1);
                (x.clone(), r(2, 1) * &x * &x - r(3, 1) * &x + r(1, 1))
            })
            .collect();
        let f = Poly::interpolate(&pts);
        assert_eq!(f.coeffs, vec![r(1, 1), r(-3, 1), r(2, 1)]);
        assert_eq!(f.rational_roots(), vec![r(1, 2), r(1, 1)]);
    }

    #[test]
    fn roots_of_linear_and_degenerate() {
        let f = Poly {
            coeffs: vec![r(-22, 1), r(2, 1)],
        };
        assert_eq!(f.rational_roots(), vec![r(11, 1)]);
        assert!(Poly::zero().rational_roots().is_empty());
        let c = Poly {
            coeffs: vec![r(3, 1)],
        };
        assert!(c.rational_roots().is_empty());
    }

    #[test]
    fn root_at_zero_and_fractions() {
        // x * (3x - 2) = 3x^2 - 2x
        let f = Poly {
            coeffs: vec![r(0, 1), r(-2, 1), r(3, 1)],
        };
        assert_eq!(f.rational_roots(), vec![r(0, 1), r(2, 3)]);
    }
}
