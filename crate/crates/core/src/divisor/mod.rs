//! Torus-invariant divisors on a complete fan.
//!
//! Conventions: a divisor `D = Σ d_i V(v_i)` is Q-Cartier when on every
//! maximal cone `σ` there is `m_σ ∈ M_Q` with `⟨m_σ, v_i⟩ = −d_i` for the rays
//! of `σ`. The class group is `Z^r / im(M)` and the Picard lattice is the
//! image of the T-Cartier divisors in it; both are computed through Smith
//! normal forms and memoized on the fan.

mod json;

pub use json::{divisor_from_json, divisor_to_json};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{
    common_denominator, integer_kernel, is_integral, rat, rat_of, rational_content, smith_normal_form, solve_rat,
    Int, IntMatrix, Rat,
};
use crate::mori;

/// Rational coefficient per ray of the parent fan.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusDivisor {
    coeffs: Vec<Rat>,
    boundary: bool,
}

impl TorusDivisor {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        Self { coeffs, boundary: false }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_ints(coeffs: &[Int]) -> Self {
        Self::new(coeffs.iter().map(rat_of).collect())
    }

    /// A boundary `B = Σ d_j B_j` with every `d_j ∈ [0, 1]`.
    pub fn boundary(coeffs: Vec<Rat>) -> Result<Self> {
        if let Some(index) = coeffs.iter().position(|c| c.is_negative() || *c > Rat::one()) {
            return Err(Error::BoundaryCoefficient { index });
        }
        Ok(Self { coeffs, boundary: true })
    }

    pub fn zero(len: usize) -> Self {
        Self::new(vec![Rat::zero(); len])
    }

    /// The prime divisor `V(v_i)`.
    pub fn prime(len: usize, i: usize) -> Self {
        let mut d = Self::zero(len);
        d.coeffs[i] = Rat::one();
        d
    }

    /// `div(χ^m) = Σ ⟨m, v_i⟩ V(v_i)`.
    pub fn principal(fan: &Fan, m: &[Int]) -> Self {
        Self::from_ints(&fan.rays().iter().map(|v| v.dot(m)).collect::<Vec<_>>())
    }

    #[inline]
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_boundary(&self) -> bool {
        self.boundary
    }

    pub fn is_integral(&self) -> bool {
        is_integral(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat(-1))
    }

    fn check_len(&self, fan: &Fan) -> Result<()> {
        if self.len() != fan.num_rays() {
            return Err(Error::DivisorLength { expected: fan.num_rays(), found: self.len() });
        }
        Ok(())
    }
}

/// `K_X = −Σ V(v_i)`.
pub fn canonical_divisor(fan: &Fan) -> TorusDivisor {
    TorusDivisor::from_i64(&vec![-1; fan.num_rays()])
}

/// Local linear functionals certifying that a divisor is Q-Cartier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierData {
    /// `functionals[k]` is `m_σ` for maximal cone `k`.
    pub functionals: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierStatus {
    pub data: Option<CartierData>,
    pub is_q_cartier: bool,
    pub is_cartier: bool,
    /// Least `k ≥ 1` with `kD` Cartier.
    pub cartier_index: Option<Int>,
}

/// Solves `⟨m_σ, v_i⟩ = −d_i` cone by cone.
pub fn cartier_data(fan: &Fan, d: &TorusDivisor) -> Result<CartierStatus> {
    d.check_len(fan)?;
    let n = fan.dim();
    let mut functionals = Vec::with_capacity(fan.max_cones().len());
    for cone in fan.max_cones() {
        let rows: Vec<Vec<Rat>> = cone.rays().iter().map(|&i| fan.ray(i).to_rat()).collect();
        let rhs: Vec<Rat> = cone.rays().iter().map(|&i| -d.coeffs[i].clone()).collect();
        match solve_rat(&rows, &rhs, n) {
            Some(m) => functionals.push(m),
            None => {
                return Ok(CartierStatus { data: None, is_q_cartier: false, is_cartier: false, cartier_index: None })
            }
        }
    }
    for (cone, m) in fan.max_cones().iter().zip(&functionals) {
        for &i in cone.rays() {
            if fan.ray(i).dot_rat(m) != -d.coeffs[i].clone() {
                return Err(Error::Internal("Cartier data fails its defining equation".into()));
            }
        }
    }
    let index = functionals.iter().fold(Int::one(), |acc, m| num_integer::lcm(acc, common_denominator(m)));
    Ok(CartierStatus {
        is_cartier: index.is_one(),
        cartier_index: Some(index),
        is_q_cartier: true,
        data: Some(CartierData { functionals }),
    })
}

pub(crate) fn require_cartier_data(fan: &Fan, d: &TorusDivisor) -> Result<CartierData> {
    cartier_data(fan, d)?.data.ok_or(Error::NotQCartier)
}

/// `Cl(X) = Z^r / im(M)` with a projection for divisors.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    /// Elementary divisors greater than one.
    pub torsion: Vec<Int>,
    pub free_rank: usize,
    u: IntMatrix,
    diag: Vec<Int>,
}

/// Image of a divisor in `Cl(X)`; `torsion` is `None` for non-integral divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    pub free: Vec<Rat>,
    pub torsion: Option<Vec<Int>>,
}

impl DivisorClass {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.as_ref().is_none_or(|t| t.iter().all(Zero::is_zero))
    }

    pub fn free_is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero)
    }
}

impl ClassGroup {
    pub fn project(&self, d: &TorusDivisor) -> DivisorClass {
        let y = self.u.mul_vec_rat(d.coeffs());
        let n = self.diag.len();
        let torsion = d.is_integral().then(|| {
            (0..n)
                .filter(|&i| self.diag[i] > Int::one())
                .map(|i| num_integer::Integer::mod_floor(&y[i].to_integer(), &self.diag[i]))
                .collect()
        });
        DivisorClass { free: y[n..].to_vec(), torsion }
    }
}

pub fn class_group(fan: &Fan) -> Result<&ClassGroup> {
    fan.memo.class_group.get_or_init(|| compute_class_group(fan)).as_ref().map_err(Clone::clone)
}

fn compute_class_group(fan: &Fan) -> Result<ClassGroup> {
    let a = fan.ray_matrix();
    let snf = smith_normal_form(&a);
    if snf.rank() != fan.dim() {
        return Err(Error::TorusFactor);
    }
    let diag = snf.diagonal();
    let mut u = snf.u;
    let all_ones = vec![Int::one(); fan.num_rays()];
    let anti_k = u.mul_vec(&all_ones);
    for (i, a) in anti_k.iter().enumerate().skip(fan.dim()) {
        if a.is_negative() {
            u.negate_row(i);
        }
    }
    Ok(ClassGroup {
        torsion: diag.iter().filter(|d| **d > Int::one()).cloned().collect(),
        free_rank: fan.num_rays() - fan.dim(),
        u,
        diag,
    })
}

/// The lattice of Cartier divisor classes inside `Cl(X)`.
#[derive(Clone, Debug)]
pub struct PicardLattice {
    /// `r × ℓ`: columns form a Z-basis of the T-Cartier divisors.
    cartier_basis: IntMatrix,
    /// `ℓ × ℓ` unimodular; rows `n..ℓ` give Picard coordinates.
    transform: IntMatrix,
    basis: Vec<TorusDivisor>,
    dim: usize,
}

impl PicardLattice {
    pub fn rho(&self) -> usize {
        self.basis.len()
    }

    /// Cartier divisors whose classes form a basis of `Pic(X)`.
    pub fn basis(&self) -> &[TorusDivisor] {
        &self.basis
    }

    /// Coordinates of a Q-Cartier divisor's class in `Pic(X) ⊗ Q`; `None`
    /// when the divisor is not Q-Cartier.
    pub fn coordinates(&self, d: &TorusDivisor) -> Option<Vec<Rat>> {
        let rows = self.cartier_basis.to_rat_rows();
        let y = solve_rat(&rows, d.coeffs(), self.cartier_basis.cols())?;
        let z = self.transform.mul_vec_rat(&y);
        Some(z[self.dim..].to_vec())
    }

    /// A Cartier divisor with the given integral Picard coordinates.
    pub fn divisor_with_coordinates(&self, coords: &[Rat]) -> TorusDivisor {
        self.basis
            .iter()
            .zip(coords)
            .fold(TorusDivisor::zero(self.cartier_basis.rows()), |acc, (b, c)| acc.add(&b.scale(c)))
    }
}

pub fn picard_lattice(fan: &Fan) -> Result<&PicardLattice> {
    fan.memo.picard.get_or_init(|| compute_picard(fan)).as_ref().map_err(Clone::clone)
}

pub fn rho(fan: &Fan) -> Result<usize> {
    picard_lattice(fan).map(PicardLattice::rho)
}

fn compute_picard(fan: &Fan) -> Result<PicardLattice> {
    fan.check_complete()?;
    let n = fan.dim();
    let k = fan.max_cones().len();
    let r = fan.num_rays();
    let width = n * k;

    // compatibility of the local functionals on shared rays
    let mut constraints: Vec<Vec<Int>> = Vec::new();
    for i in 0..r {
        let cs = fan.cones_containing(i);
        for &c in &cs[1..] {
            let mut row = vec![Int::zero(); width];
            for (t, x) in fan.ray(i).coords().iter().enumerate() {
                row[cs[0] * n + t] = x.clone();
                row[c * n + t] = -x.clone();
            }
            constraints.push(row);
        }
    }
    let kernel = if constraints.is_empty() {
        IntMatrix::identity(width)
    } else {
        let c = IntMatrix::from_rows(constraints);
        let basis = integer_kernel(&c);
        IntMatrix::from_rows(basis).transpose()
    };
    let mut eval = IntMatrix::zeros(r, width);
    for i in 0..r {
        let c = fan.cones_containing(i)[0];
        for (t, x) in fan.ray(i).coords().iter().enumerate() {
            eval[(i, c * n + t)] = -x.clone();
        }
    }
    let cartier_basis = eval.mul(&kernel);
    let ell = cartier_basis.cols();

    // principal divisors in Cartier coordinates
    let b_rows = cartier_basis.to_rat_rows();
    let a = fan.ray_matrix();
    let mut t = IntMatrix::zeros(ell, n);
    for j in 0..n {
        let col: Vec<Rat> = a.col(j).iter().map(rat_of).collect();
        let y = solve_rat(&b_rows, &col, ell)
            .ok_or_else(|| Error::Internal("principal divisor is not Cartier".into()))?;
        for (i, yi) in y.iter().enumerate() {
            if !yi.is_integer() {
                return Err(Error::Internal("principal divisor has non-integral Cartier coordinates".into()));
            }
            t[(i, j)] = yi.to_integer();
        }
    }
    let snf = smith_normal_form(&t);
    if snf.rank() != n || snf.diagonal().iter().any(|d| !d.is_one()) {
        return Err(Error::Internal("Picard group of a complete fan has torsion".into()));
    }
    let mut transform = snf.u;
    let inv = transform.inverse_unimodular();
    let mut basis: Vec<TorusDivisor> =
        (n..ell).map(|j| TorusDivisor::from_ints(&cartier_basis.mul_vec(&inv.col(j)))).collect();

    // orient coordinates so that −K (when Q-Cartier) has nonnegative entries
    let mut lattice = PicardLattice { cartier_basis, transform: transform.clone(), basis: basis.clone(), dim: n };
    if let Some(c) = lattice.coordinates(&canonical_divisor(fan).neg()) {
        for (j, cj) in c.iter().enumerate() {
            if cj.is_negative() {
                transform.negate_row(n + j);
                basis[j] = basis[j].neg();
            }
        }
        lattice.transform = transform;
        lattice.basis = basis;
    }
    Ok(lattice)
}

/// `D1 ≡ D2`, decided by intersecting with every wall curve and
/// cross-checked against triviality in `Cl(X) ⊗ Q`.
pub fn numerically_equivalent(fan: &Fan, d1: &TorusDivisor, d2: &TorusDivisor) -> Result<bool> {
    let diff = d1.sub(d2);
    let data = require_cartier_data(fan, &diff)?;
    let walls = fan.walls()?;
    let numerical = walls.iter().all(|w| mori::intersection_from_data(fan, &data, w).is_zero());
    let class_trivial = class_group(fan)?.project(&diff).free_is_zero();
    if numerical != class_trivial {
        return Err(Error::Internal("numerical triviality and Q-linear triviality disagree".into()));
    }
    Ok(numerical)
}

/// Nonnegative against every invariant curve; cross-checked with convexity
/// of the support function.
pub fn is_nef(fan: &Fan, d: &TorusDivisor) -> Result<bool> {
    positivity(fan, d, false)
}

/// Positive against every invariant curve; cross-checked with strict
/// convexity of the support function.
pub fn is_ample(fan: &Fan, d: &TorusDivisor) -> Result<bool> {
    positivity(fan, d, true)
}

fn positivity(fan: &Fan, d: &TorusDivisor, strict: bool) -> Result<bool> {
    let data = require_cartier_data(fan, d)?;
    let walls = fan.walls()?;
    let by_walls = walls.iter().all(|w| {
        let x = mori::intersection_from_data(fan, &data, w);
        if strict {
            x.is_positive()
        } else {
            !x.is_negative()
        }
    });
    // ⟨m_σ, v_j⟩ ≥ −d_j for all rays, strictly off σ
    let by_convexity = fan.max_cones().iter().zip(&data.functionals).all(|(cone, m)| {
        (0..fan.num_rays()).filter(|j| !cone.contains(*j)).all(|j| {
            let lhs = fan.ray(j).dot_rat(m) + &d.coeffs()[j];
            if strict {
                lhs.is_positive()
            } else {
                !lhs.is_negative()
            }
        })
    });
    if by_walls != by_convexity {
        return Err(Error::Internal("wall positivity and support-function convexity disagree".into()));
    }
    Ok(by_walls)
}

/// Outcome of computing the largest `N` with `−K ≡ N·D`, `D` Cartier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divisibility {
    Index { n: Int, witness: TorusDivisor },
    KNotQCartier,
    NotDivisible,
}

impl Divisibility {
    pub fn index(&self) -> Option<&Int> {
        match self {
            Divisibility::Index { n, .. } => Some(n),
            _ => None,
        }
    }
}

pub fn divisibility_index(fan: &Fan) -> Result<Divisibility> {
    let pic = picard_lattice(fan)?;
    let anti_k = canonical_divisor(fan).neg();
    let Some(y) = pic.coordinates(&anti_k) else {
        return Ok(Divisibility::KNotQCartier);
    };
    if !is_integral(&y) || y.iter().all(Zero::is_zero) {
        return Ok(Divisibility::NotDivisible);
    }
    let n = rational_content(&y).to_integer();
    let target: Vec<Rat> = y.iter().map(|c| c / rat_of(&n)).collect();
    let witness = (0..fan.num_rays())
        .rev()
        .map(|i| TorusDivisor::prime(fan.num_rays(), i))
        .find(|p| pic.coordinates(p).as_deref() == Some(&target[..]) && cartier_data(fan, p).is_ok_and(|s| s.is_cartier))
        .unwrap_or_else(|| pic.divisor_with_coordinates(&target));
    Ok(Divisibility::Index { n, witness })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogBoundReport {
    pub q_cartier: bool,
    /// Largest positive rational `N` with `−(K+B) ≡ N·D`, `D` Cartier.
    pub n: Option<Rat>,
    pub k_plus_b_nef: Option<bool>,
    pub bound_holds: bool,
}

/// Checks `N ≤ n + 1` for `−(K+B) ≡ N·D` when `K + B` is not nef.
pub fn log_bound_check(fan: &Fan, b: &TorusDivisor) -> Result<LogBoundReport> {
    b.check_len(fan)?;
    if let Some(index) = b.coeffs().iter().position(|c| c.is_negative() || *c > Rat::one()) {
        return Err(Error::BoundaryCoefficient { index });
    }
    let kb = canonical_divisor(fan).add(b);
    let pic = picard_lattice(fan)?;
    let Some(y) = pic.coordinates(&kb.neg()) else {
        return Ok(LogBoundReport { q_cartier: false, n: None, k_plus_b_nef: None, bound_holds: true });
    };
    let nef = is_nef(fan, &kb)?;
    let c = rational_content(&y);
    let n = (!c.is_zero()).then_some(c);
    let bound_holds = match (&n, nef) {
        (Some(n), false) => *n <= rat(fan.dim() as i64 + 1),
        _ => true,
    };
    Ok(LogBoundReport { q_cartier: true, n, k_plus_b_nef: Some(nef), bound_holds })
}
