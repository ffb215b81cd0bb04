//! Exact linear algebra over an [`Exact`] field.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::scalar::{fmt_exact, Exact};

/// A rational vector in the fundamental coweight basis of `V = Y ⊗ Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoweightVec<T: Exact> {
    pub coords: Vec<T>,
}

impl<T: Exact> CoweightVec<T> {
    pub fn zero(n: usize) -> Self {
        Self { coords: vec![T::zero(); n] }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self { coords: v.iter().map(|&x| T::from_int(x)).collect() }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self { coords: self.coords.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    /// Pairing with a character given in simple-root coordinates.
    pub fn pair(&self, root: &[i32]) -> T {
        let mut s = T::zero();
        for (c, &r) in self.coords.iter().zip(root) {
            if r != 0 {
                s = s + c.clone() * T::from_int(r as i64);
            }
        }
        s
    }

    /// The coordinates as integers, if all are integral.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(|c| c.to_int()).collect()
    }
}

impl<T: Exact> Add for &CoweightVec<T> {
    type Output = CoweightVec<T>;
    fn add(self, o: &CoweightVec<T>) -> CoweightVec<T> {
        CoweightVec {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Exact> Sub for &CoweightVec<T> {
    type Output = CoweightVec<T>;
    fn sub(self, o: &CoweightVec<T>) -> CoweightVec<T> {
        CoweightVec {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: Exact> Neg for &CoweightVec<T> {
    type Output = CoweightVec<T>;
    fn neg(self) -> CoweightVec<T> {
        CoweightVec { coords: self.coords.iter().map(|a| -a.clone()).collect() }
    }
}

impl<T: Exact> fmt::Display for CoweightVec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(fmt_exact).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl<T: Exact> Serialize for CoweightVec<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter().map(fmt_exact))
    }
}

/// Row-reduces `m` in place and returns the pivot columns.
pub fn row_reduce<T: Exact>(m: &mut [Vec<T>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = T::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = f.clone() * m[r][j].clone();
                    m[i][j] = m[i][j].clone() - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of the row space.
pub fn rank<T: Exact>(rows: &[Vec<T>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Solves `a x = b` for square non-singular `a`.
pub fn solve<T: Exact>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = row_reduce(&mut m);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Inverse of a square non-singular matrix.
pub fn inverse<T: Exact>(a: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let piv = row_reduce(&mut m);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Matrix-vector product.
pub fn mat_vec<T: Exact>(a: &[Vec<T>], v: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(T::zero(), |s, (x, y)| s + x.clone() * y.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type R = Ratio<i64>;

    fn m(rows: &[&[i64]]) -> Vec<Vec<R>> {
        rows.iter().map(|r| r.iter().map(|&x| R::from_integer(x)).collect()).collect()
    }

    #[test]
    fn inverse_of_a2_cartan() {
        let a = m(&[&[2, -1], &[-1, 2]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0][0], R::new(2, 3));
        assert_eq!(inv[0][1], R::new(1, 3));
    }

    #[test]
    fn rank_detects_dependence() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[1, 2], &[2, 5]])), 2);
        assert_eq!(rank::<R>(&[]), 0);
    }

    #[test]
    fn solve_agrees_with_inverse() {
        let a = m(&[&[2, -1, 0], &[-1, 2, -2], &[0, -1, 2]]);
        let b: Vec<R> = vec![R::from_integer(1), R::from_integer(0), R::from_integer(3)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(mat_vec(&a, &x), b);
    }
}
