//! Dense integer polynomials in one variable `t`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Polynomial with `i64` coefficients, stored in ascending powers of `t`.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// an empty coefficient vector and equality is structural.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: i64, degree: usize) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    /// `(-t)^d`.
    pub fn minus_t_pow(d: usize) -> Self {
        Self::monomial(if d.is_multiple_of(2) { 1 } else { -1 }, d)
    }

    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Builds `Σ c_d (-t)^d` from coefficients in powers of `-t`.
    pub fn from_minus_t_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .enumerate()
                .map(|(d, &c)| if d % 2 == 0 { c } else { -c })
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest power of `t` with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    /// Coefficients in powers of `-t`, i.e. `c_k (-1)^k`.
    pub fn minus_t_coeffs(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c } else { -c })
            .collect()
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    pub fn is_palindromic(&self) -> bool {
        let c = &self.coeffs;
        c.iter().eq(c.iter().rev())
    }

    /// Multiplies by `(-t)^m` so that the lowest-order term becomes a positive
    /// constant. Returns the normalized polynomial and `m`, or `None` when the
    /// polynomial is zero or no power of `-t` makes the constant term positive.
    pub fn normalize(&self) -> Option<(IntPoly, i32)> {
        let k = self.low_degree()?;
        let lead = self.coeffs[k];
        let sign = if k % 2 == 0 { lead } else { -lead };
        if sign <= 0 {
            return None;
        }
        let shifted = self.coeffs[k..]
            .iter()
            .map(|&c| if k % 2 == 0 { c } else { -c })
            .collect();
        Some((IntPoly::from_coeffs(shifted), -(k as i32)))
    }

    /// Exact division; `None` if `divisor` is zero or does not divide `self`
    /// over the integers.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let lead = divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return None;
        }
        let mut quot = vec![0i64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dd];
            if top % lead != 0 {
                return None;
            }
            let q = top / lead;
            quot[k] = q;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= q * d;
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return None;
        }
        Some(IntPoly::from_coeffs(quot))
    }

    /// Renders the polynomial as a sum of powers of `(-t)`, e.g.
    /// `1 + (-t) + (-t)^2`.
    pub fn display_minus_t(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (d, c) in self.minus_t_coeffs().into_iter().enumerate() {
            if c == 0 {
                continue;
            }
            let var = match d {
                0 => String::new(),
                1 => "(-t)".to_string(),
                _ => format!("(-t)^{d}"),
            };
            push_term(&mut out, c, &var);
        }
        out
    }
}

fn push_term(out: &mut String, c: i64, var: &str) {
    let abs = c.unsigned_abs();
    if out.is_empty() {
        if c < 0 {
            out.push('-');
        }
    } else {
        out.push_str(if c < 0 { " - " } else { " + " });
    }
    if var.is_empty() || abs != 1 {
        out.push_str(&abs.to_string());
    }
    out.push_str(var);
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let var = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            push_term(&mut out, c, &var);
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(coeffs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
