//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers ([`Int`]) and
//! exact rationals ([`Rat`]); there is no floating point anywhere in the crate.
//! The Smith normal form is the workhorse: lattice indices, saturated
//! quotient maps, integer kernels and class-group presentations all go
//! through [`smith_normal_form`].

pub mod lp;
mod matrix;
mod snf;

pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn rat_of(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

/// A point of the lattice `Z^n`. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<Int>);

impl LatticeVector {
    pub fn new(coords: Vec<Int>) -> Self {
        Self(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![Int::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut c = vec![Int::zero(); dim];
        c[i] = Int::one();
        Self(c)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Gcd of the coordinates (0 for the zero vector).
    pub fn content(&self) -> Int {
        self.0.iter().fold(Int::zero(), |g, c| g.gcd(c))
    }

    pub fn dot(&self, covector: &[Int]) -> Int {
        debug_assert_eq!(self.dim(), covector.len());
        self.0.iter().zip(covector).map(|(a, b)| a * b).sum()
    }

    pub fn dot_rat(&self, covector: &[Rat]) -> Rat {
        debug_assert_eq!(self.dim(), covector.len());
        self.0
            .iter()
            .zip(covector)
            .fold(Rat::zero(), |acc, (a, b)| acc + b * a)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &Int) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    /// Row vector times matrix.
    pub fn apply(&self, m: &IntMatrix) -> Self {
        assert_eq!(self.dim(), m.rows(), "dimension mismatch");
        Self(
            (0..m.cols())
                .map(|j| (0..m.rows()).map(|i| &self.0[i] * &m[(i, j)]).sum())
                .collect(),
        )
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn to_rat(&self) -> Vec<Rat> {
        self.0.iter().map(rat_of).collect()
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        Self::from_i64(&v)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The primitive lattice vector on the ray through `v`.
pub fn primitive(v: &LatticeVector) -> Result<LatticeVector> {
    let g = v.content();
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(LatticeVector(v.0.iter().map(|c| c / &g).collect()))
}

/// Index of the sublattice generated by `vectors` inside the saturation of
/// their span, i.e. the product of the elementary divisors.
pub fn lattice_index(vectors: &[LatticeVector]) -> Result<Int> {
    if vectors.is_empty() {
        return Ok(Int::one());
    }
    let m = IntMatrix::from_vectors(vectors);
    let snf = smith_normal_form(&m);
    if snf.rank() != vectors.len() {
        return Err(Error::NotIndependent);
    }
    Ok(snf.diagonal().iter().fold(Int::one(), |acc, d| acc * d))
}

/// Integer matrix `Q` (n × (n − rank)) such that `x ↦ x·Q` is the quotient
/// map `N → N / (N ∩ span(vectors))` in some basis of the quotient.
pub fn quotient_map(vectors: &[LatticeVector], dim: usize) -> IntMatrix {
    if vectors.is_empty() {
        return IntMatrix::identity(dim);
    }
    let snf = smith_normal_form(&IntMatrix::from_vectors(vectors));
    let r = snf.rank();
    snf.v.select_cols(&(r..dim).collect::<Vec<_>>())
}

/// Primitive integer covector vanishing on `vectors`, which must span a
/// hyperplane.
pub fn hyperplane_normal(vectors: &[LatticeVector], dim: usize) -> Option<Vec<Int>> {
    let q = quotient_map(vectors, dim);
    if q.cols() != 1 {
        return None;
    }
    Some(q.col(0))
}

/// Rank over the rationals.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

pub fn rank_of_vectors(vectors: &[LatticeVector]) -> usize {
    rank(&vectors.iter().map(LatticeVector::to_rat).collect::<Vec<_>>())
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rat>]) -> Vec<usize> {
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
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `m·x = b` exactly; `None` when inconsistent. Free variables are set to 0.
pub fn solve_rat(m: &[Vec<Rat>], b: &[Rat], ncols: usize) -> Option<Vec<Rat>> {
    assert_eq!(m.len(), b.len(), "dimension mismatch");
    let mut aug: Vec<Vec<Rat>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = aug[i][ncols].clone();
    }
    Some(x)
}

pub fn solve_rational(m: &IntMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    solve_rat(&m.to_rat_rows(), b, m.cols())
}

/// Basis of the rational kernel of `m` (as a map on column vectors).
pub fn rational_kernel(m: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<Rat>> {
    rational_kernel(&m.to_rat_rows(), m.cols())
}

/// Z-basis of the integer kernel `{x ∈ Z^c : m·x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<Int>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols()).map(|j| snf.v.col(j)).collect()
}

pub fn is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Least common multiple of the denominators.
pub fn common_denominator(v: &[Rat]) -> Int {
    v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()))
}

/// Largest positive rational `c` with `v / c` integral (0 for the zero vector).
pub fn rational_content(v: &[Rat]) -> Rat {
    let l = common_denominator(v);
    let g = v
        .iter()
        .map(|x| (x * rat_of(&l)).to_integer())
        .fold(Int::zero(), |acc, z| acc.gcd(&z));
    Rat::new(g, l)
}

/// Scales a nonzero rational vector to the primitive integer vector on the same ray.
pub fn primitive_direction(v: &[Rat]) -> Option<Vec<Int>> {
    let c = rational_content(v);
    if c.is_zero() {
        return None;
    }
    Some(v.iter().map(|x| (x / &c).to_integer()).collect())
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn format_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.trim().parse().ok()?;
            let q: Int = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => s.parse::<Int>().ok().map(Rat::from_integer),
    }
}

pub(crate) fn abs_int(x: &Int) -> Int {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(c)
    }

    #[test]
    fn primitive_divides_by_gcd() {
        assert_eq!(primitive(&v(&[2, 4, 6])).unwrap(), v(&[1, 2, 3]));
        assert_eq!(primitive(&v(&[1, 0])).unwrap(), v(&[1, 0]));
        assert_eq!(primitive(&v(&[-3, -6])).unwrap(), v(&[-1, -2]));
        assert_eq!(primitive(&v(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn lattice_index_examples() {
        assert_eq!(lattice_index(&[v(&[1, 0]), v(&[0, 1])]).unwrap(), int(1));
        assert_eq!(lattice_index(&[v(&[1, 1]), v(&[1, -1])]).unwrap(), int(2));
        // Gram determinant of the three vectors is 4, so the index is sqrt(4) = 2.
        assert_eq!(
            lattice_index(&[v(&[1, 0, 0]), v(&[0, 1, 1]), v(&[0, 1, -1])]).unwrap(),
            int(2)
        );
        // a non-full-rank but saturated-in-span example
        assert_eq!(lattice_index(&[v(&[2, 2, 0])]).unwrap(), int(2));
        assert_eq!(
            lattice_index(&[v(&[1, 2]), v(&[2, 4])]),
            Err(Error::NotIndependent)
        );
    }

    #[test]
    fn solve_examples() {
        let id = IntMatrix::identity(2);
        assert_eq!(solve_rational(&id, &[rat(5), rat(7)]), Some(vec![rat(5), rat(7)]));

        let m = IntMatrix::from_i64(&[vec![1, 1]]);
        let x = solve_rational(&m, &[rat(2)]).unwrap();
        assert_eq!(&x[0] + &x[1], rat(2));
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(&k[0][0] + &k[0][1], rat(0));

        let bad = IntMatrix::from_i64(&[vec![1, 0], vec![1, 0]]);
        assert_eq!(solve_rational(&bad, &[rat(1), rat(2)]), None);
    }

    #[test]
    fn quotient_map_kills_span() {
        let w = [v(&[1, 2, 3])];
        let q = quotient_map(&w, 3);
        assert_eq!(q.cols(), 2);
        assert!(w[0].apply(&q).is_zero());
        // surjective: the 2x2 minors of Q have gcd 1
        let snf = smith_normal_form(&q);
        assert!(snf.diagonal().iter().all(|d| d == &int(1)));
    }

    #[test]
    fn integer_kernel_is_saturated() {
        let m = IntMatrix::from_i64(&[vec![2, 4, 6]]);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 2);
        let km = IntMatrix::from_rows(k.clone()).transpose();
        assert!(m.mul(&km).is_zero());
        let snf = smith_normal_form(&IntMatrix::from_rows(k));
        assert!(snf.diagonal().iter().all(|d| d == &int(1)));
    }

    #[test]
    fn rational_content_and_direction() {
        let y = vec![Rat::new(int(5), int(2)), rat(0)];
        assert_eq!(rational_content(&y), Rat::new(int(5), int(2)));
        assert_eq!(primitive_direction(&y), Some(vec![int(1), int(0)]));
        assert_eq!(rational_content(&[rat(4), rat(6)]), rat(2));
        assert_eq!(parse_rat("-3/6"), Some(Rat::new(int(-1), int(2))));
        assert_eq!(format_rat(&Rat::new(int(6), int(3))), "2");
    }
}
