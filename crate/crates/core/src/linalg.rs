//! Fraction-free (Bareiss) determinants over exact rings.

use crate::poly::IntPoly;

/// Commutative ring with exact division, as needed by Bareiss elimination.
pub trait ExactRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division known to be exact; `None` signals an inexact quotient.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
}

impl ExactRing for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        (*rhs != 0 && self % rhs == 0).then(|| self / rhs)
    }
}

impl ExactRing for IntPoly {
    fn zero() -> Self {
        IntPoly::zero()
    }
    fn one() -> Self {
        IntPoly::one()
    }
    fn is_zero(&self) -> bool {
        IntPoly::is_zero(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        IntPoly::div_exact(self, rhs)
    }
}

/// Determinant of a square matrix by Bareiss elimination with row pivoting.
///
/// Every intermediate entry is itself a minor of the input, so all divisions
/// are exact. Panics if the matrix is not square or a division turns out
/// inexact (which would mean the ring implementation is broken).
pub fn determinant<R: ExactRing>(matrix: &[Vec<R>]) -> R {
    let n = matrix.len();
    assert!(
        matrix.iter().all(|row| row.len() == n),
        "matrix must be square"
    );
    if n == 0 {
        return R::one();
    }
    let mut a: Vec<Vec<R>> = matrix.to_vec();
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss step must divide exactly");
            }
            a[i][k] = R::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn permutation_det(m: &[Vec<i128>]) -> i128 {
        // Leibniz expansion, used only as an independent check.
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.len();
        perms(n)
            .into_iter()
            .map(|p| {
                let inversions = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                let sign = if inversions % 2 == 0 { 1 } else { -1 };
                sign * (0..n).map(|i| m[i][p[i]]).product::<i128>()
            })
            .sum()
    }

    #[test]
    fn integer_determinants() {
        assert_eq!(determinant::<i128>(&[]), 1);
        assert_eq!(determinant(&[vec![2i128, -1], vec![-1, 2]]), 3);
        let m = vec![
            vec![0i128, 2, 1, 3],
            vec![1, 0, 4, -2],
            vec![5, 1, 0, 1],
            vec![2, 2, 2, 0],
        ];
        assert_eq!(determinant(&m), permutation_det(&m));
        let singular = vec![vec![1i128, 2], vec![2, 4]];
        assert_eq!(determinant(&singular), 0);
    }

    #[test]
    fn polynomial_determinant() {
        // [[1-t, t], [-1, 1-t]] has determinant (1-t)^2 + t = 1 - t + t^2.
        let a = IntPoly::from_coeffs(vec![1, -1]);
        let m = vec![
            vec![a.clone(), IntPoly::from_coeffs(vec![0, 1])],
            vec![IntPoly::constant(-1), a],
        ];
        assert_eq!(determinant(&m), IntPoly::from_coeffs(vec![1, -1, 1]));
    }
}
