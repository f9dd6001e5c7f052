//! Builders for the fan families used as fixtures and as ground truth.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{int, primitive, smith_normal_form, Int, IntMatrix, LatticeVector};
use crate::mori::{contract_ray, mori_cone, Contraction, ContractionType};

/// Sorted positive weights `a_1 ≤ ⋯ ≤ a_{n+1}`, well-formed: any `n` of them
/// are coprime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector(Vec<i64>);

impl WeightVector {
    pub fn new(mut weights: Vec<i64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::BadParameter("need at least two weights".into()));
        }
        if weights.iter().any(|&a| a <= 0) {
            return Err(Error::BadParameter("weights must be positive".into()));
        }
        weights.sort_unstable();
        if !is_well_formed(&weights) {
            return Err(Error::NotWellFormed(weights));
        }
        Ok(Self(weights))
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    /// Dimension `n` of the variety (one less than the number of weights).
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn as_ints(&self) -> Vec<Int> {
        self.0.iter().map(|&a| int(a)).collect()
    }
}

fn is_well_formed(weights: &[i64]) -> bool {
    (0..weights.len()).all(|skip| {
        weights.iter().enumerate().filter(|&(i, _)| i != skip).fold(0i64, |g, (_, &a)| g.gcd(&a)) == 1
    })
}

/// Sorted integer twists `q_1 ≤ ⋯ ≤ q_n` of a split bundle over `P^1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistVector(Vec<i64>);

impl TwistVector {
    pub fn new(mut twists: Vec<i64>) -> Self {
        twists.sort_unstable();
        Self(twists)
    }

    pub fn twists(&self) -> &[i64] {
        &self.0
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Representative with `q_1 = 0`.
    pub fn normalized(&self) -> Self {
        let m = self.0.first().copied().unwrap_or(0);
        Self(self.0.iter().map(|q| q - m).collect())
    }

    pub fn shifted(&self, t: i64) -> Self {
        Self(self.0.iter().map(|q| q + t).collect())
    }

    /// Whether some shift of the twists sums to 2.
    pub fn has_representative_summing_to_two(&self) -> bool {
        let n = self.0.len() as i64;
        (2 - self.sum()).rem_euclid(n) == 0
    }
}

fn simplex_cones(n: usize) -> Vec<Vec<usize>> {
    // cone k omits ray k
    (0..=n).map(|k| (0..=n).filter(|&i| i != k).collect()).collect()
}

pub fn projective_space(n: usize) -> Result<Fan> {
    if n < 1 {
        return Err(Error::BadParameter("projective space needs n ≥ 1".into()));
    }
    let mut rays: Vec<LatticeVector> = (0..n).map(|i| LatticeVector::unit(n, i)).collect();
    rays.push(LatticeVector::new(vec![int(-1); n]));
    Ok(Fan::new(n, rays, simplex_cones(n))?.with_name(format!("P^{n}")))
}

/// Fan of `P(a_1, …, a_{n+1})`: rays with `Σ a_i v_i = 0` that generate `Z^n`,
/// one maximal cone omitting each ray.
///
/// When some weight is 1 the rays are unit vectors except at that position;
/// otherwise they come from a unimodular completion of the weight row.
pub fn weighted_projective(a: &WeightVector) -> Result<Fan> {
    let w = a.weights();
    let n = a.dim();
    let rays: Vec<LatticeVector> = match w.iter().rposition(|&x| x == 1).map(|p| p.min(1)) {
        Some(p) => {
            let mut rays = Vec::with_capacity(n + 1);
            let mut next = 0;
            for i in 0..=n {
                if i == p {
                    rays.push(LatticeVector::zero(n));
                } else {
                    rays.push(LatticeVector::unit(n, next));
                    next += 1;
                }
            }
            let sum = (0..=n).filter(|&i| i != p).fold(LatticeVector::zero(n), |acc, i| acc.add(&rays[i].scale(&int(w[i]))));
            rays[p] = sum.neg();
            rays
        }
        None => {
            let row = IntMatrix::from_rows(vec![a.as_ints()]);
            let v = smith_normal_form(&row).v;
            // columns 1..=n of v span the integer kernel of the weight row
            (0..=n).map(|i| LatticeVector::new(v.row(i)[1..].to_vec())).collect()
        }
    };
    let label = w.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    Ok(Fan::new(n, rays, simplex_cones(n))?.with_name(format!("P({label})")))
}

/// Fan of `P(O(q_1) ⊕ ⋯ ⊕ O(q_n))` over `P^1`.
///
/// Rays, in order: fiber rays `u_1, …, u_{n−1} = e_i`, `u_n = −Σ e_i`, then
/// `w_+ = e_n` and `w_− = −e_n + Σ_{i<n} (q_i − q_n) e_i`. Maximal cones:
/// `⟨{u_j}_{j≠i}, w_+⟩` for each `i`, then the same with `w_−`.
pub fn bundle_over_p1(q: &TwistVector) -> Result<Fan> {
    let n = q.twists().len();
    if n < 2 {
        return Err(Error::BadParameter("bundle over P^1 needs n ≥ 2".into()));
    }
    let qs = q.twists();
    let mut rays: Vec<LatticeVector> = (0..n - 1).map(|i| LatticeVector::unit(n, i)).collect();
    let mut last = vec![int(-1); n];
    last[n - 1] = int(0);
    rays.push(LatticeVector::new(last));
    rays.push(LatticeVector::unit(n, n - 1));
    let mut minus: Vec<Int> = (0..n - 1).map(|i| int(qs[i] - qs[n - 1])).collect();
    minus.push(int(-1));
    rays.push(LatticeVector::new(minus));
    let mut cones = Vec::with_capacity(2 * n);
    for w in [n, n + 1] {
        for i in 0..n {
            let mut c: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            c.push(w);
            cones.push(c);
        }
    }
    let label = qs.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    Ok(Fan::new(n, rays, cones)?.with_name(format!("P_P1({label})")))
}

/// The source bundle `Y = bundle_over_p1(0,…,0,1,1)` and its small contraction.
pub fn flop_contraction(n: usize) -> Result<(Fan, Contraction)> {
    if n < 3 {
        return Err(Error::BadParameter("every toric surface is Q-factorial; flop target needs n ≥ 3".into()));
    }
    let mut q = vec![0; n];
    q[n - 2] = 1;
    q[n - 1] = 1;
    let y = bundle_over_p1(&TwistVector::new(q))?;
    for ray in mori_cone(&y)? {
        match contract_ray(&y, &ray.class) {
            Ok(c) if c.kind == ContractionType::Small => return Ok((y, c)),
            Ok(_) | Err(Error::UnsupportedFibration(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::Internal("no small contraction on the (0,…,0,1,1) bundle".into()))
}

/// Target of the small contraction of `bundle_over_p1(0,…,0,1,1)`.
pub fn flop_target(n: usize) -> Result<Fan> {
    let (_, c) = flop_contraction(n)?;
    Ok(c.target.with_name(format!("flop_target({n})")))
}

/// Hirzebruch surface `F_a`: rays `(1,0), (0,1), (−1,a), (0,−1)` in cyclic order.
pub fn hirzebruch(a: i64) -> Result<Fan> {
    let fan = surface_from_cycle(&[vec![int(1), int(0)], vec![int(0), int(1)], vec![int(-1), int(a)], vec![int(0), int(-1)]])?;
    Ok(fan.with_name(format!("F_{a}")))
}

/// Complete 2-dimensional fan whose rays are listed in cyclic order.
pub fn surface_from_cycle(rays: &[Vec<Int>]) -> Result<Fan> {
    let r = rays.len();
    let cones = (0..r).map(|i| vec![i, (i + 1) % r]).collect();
    Fan::new(2, rays.iter().cloned().map(LatticeVector::new).collect(), cones)
}

/// Star subdivision of a simplicial maximal cone at the primitive vector on
/// the sum of its rays.
pub fn star_subdivide(fan: &Fan, cone: usize) -> Result<Fan> {
    let sigma = fan.max_cones().get(cone).ok_or(Error::RayOutOfRange(cone))?;
    if !fan.is_simplicial_cone(cone) {
        return Err(Error::NotSimplicial);
    }
    let sum = sigma.rays().iter().fold(LatticeVector::zero(fan.dim()), |acc, &i| acc.add(fan.ray(i)));
    let new_ray = fan.num_rays();
    let mut rays = fan.rays().to_vec();
    rays.push(primitive(&sum)?);
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for (k, c) in fan.max_cones().iter().enumerate() {
        if k != cone {
            cones.push(c.rays().to_vec());
            continue;
        }
        for &drop in c.rays() {
            let mut sub: Vec<usize> = c.rays().iter().copied().filter(|&i| i != drop).collect();
            sub.push(new_ray);
            cones.push(sub);
        }
    }
    Fan::new(fan.dim(), rays, cones)
}

/// Self-intersection numbers `D_i²` of a smooth complete surface given by
/// rays in cyclic order: `v_{i−1} + v_{i+1} = −D_i² · v_i`.
pub fn self_intersections(cycle: &[Vec<Int>]) -> Vec<Int> {
    let r = cycle.len();
    (0..r)
        .map(|i| {
            let (p, c, s) = (&cycle[(i + r - 1) % r], &cycle[i], &cycle[(i + 1) % r]);
            let j = if c[0].is_zero() { 1 } else { 0 };
            -((&p[j] + &s[j]) / &c[j])
        })
        .collect()
}

/// Dihedral-canonical form of a cyclic sequence: the lexicographically least
/// rotation of the sequence or of its reverse.
fn dihedral_canonical(seq: &[Int]) -> Vec<Int> {
    let r = seq.len();
    let mut best: Option<Vec<Int>> = None;
    for rev in [false, true] {
        let base: Vec<Int> = if rev { seq.iter().rev().cloned().collect() } else { seq.to_vec() };
        for s in 0..r {
            let cand: Vec<Int> = (0..r).map(|i| base[(s + i) % r].clone()).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Smooth complete toric surfaces with at most `max_rays` rays, up to
/// isomorphism: `P^2`, `F_a` for `0 ≤ a ≤ max_a`, and all their iterated
/// blow-ups at torus-fixed points.
///
/// Every smooth complete toric surface is such a blow-up, so the list is
/// exhaustive among those whose minimal models have `a ≤ max_a`.
pub fn smooth_complete_surfaces(max_rays: usize, max_a: i64) -> Result<Vec<Fan>> {
    let mut seen: std::collections::BTreeSet<Vec<Int>> = std::collections::BTreeSet::new();
    let mut frontier: Vec<Vec<Vec<Int>>> = Vec::new();
    let mut starts = vec![vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![int(-1), int(-1)]]];
    for a in 0..=max_a {
        starts.push(vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![int(-1), int(a)], vec![int(0), int(-1)]]);
    }
    for s in starts {
        if s.len() <= max_rays && seen.insert(dihedral_canonical(&self_intersections(&s))) {
            frontier.push(s);
        }
    }
    let mut out = Vec::new();
    while let Some(cycle) = frontier.pop() {
        if cycle.len() < max_rays {
            for i in 0..cycle.len() {
                let j = (i + 1) % cycle.len();
                let sum: Vec<Int> = cycle[i].iter().zip(&cycle[j]).map(|(x, y)| x + y).collect();
                let mut next = cycle.clone();
                next.insert(i + 1, sum);
                if seen.insert(dihedral_canonical(&self_intersections(&next))) {
                    frontier.push(next);
                }
            }
        }
        out.push(cycle);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| dihedral_canonical(&self_intersections(a)).cmp(&dihedral_canonical(&self_intersections(b)))));
    out.iter()
        .map(|c| {
            let label = dihedral_canonical(&self_intersections(c)).iter().map(Int::to_string).collect::<Vec<_>>().join(",");
            Ok(surface_from_cycle(c)?.with_name(format!("surface[{label}]")))
        })
        .collect()
}

/// All well-formed weight vectors of length `n + 1` with entries in `1..=bound`,
/// in lexicographic order.
pub fn well_formed_weights(n: usize, bound: i64) -> Vec<WeightVector> {
    fn rec(len: usize, lo: i64, bound: i64, cur: &mut Vec<i64>, out: &mut Vec<WeightVector>) {
        if cur.len() == len {
            if let Ok(w) = WeightVector::new(cur.clone()) {
                out.push(w);
            }
            return;
        }
        for a in lo..=bound {
            cur.push(a);
            rec(len, a, bound, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n + 1, 1, bound, &mut Vec::new(), &mut out);
    out
}

/// Lattice maps used to produce fake weighted projective spaces: each has
/// determinant greater than 1, so the image rays generate a proper sublattice
/// or, after re-primitivization, a different fan with the same combinatorics.
pub fn fake_lattice_maps(n: usize) -> Vec<IntMatrix> {
    let mut diag = IntMatrix::identity(n);
    diag[(n - 1, n - 1)] = int(2);
    let mut shear = IntMatrix::identity(n);
    shear[(n - 1, n - 1)] = int(3);
    shear[(0, n - 1)] = int(1);
    vec![diag, shear]
}

/// Fake weighted projective fixtures of dimension `n`: each well-formed weight
/// vector with largest entry at most `bound`, its fan, and its images under
/// [`fake_lattice_maps`]. Entries are `(relation weights, fan)`.
pub fn fake_wps_fixtures(n: usize, bound: i64) -> Result<Vec<(Vec<Int>, Fan)>> {
    let mut out = Vec::new();
    for w in well_formed_weights(n, bound) {
        let base = weighted_projective(&w)?;
        out.push((w.as_ints(), base.clone()));
        for (k, m) in fake_lattice_maps(n).iter().enumerate() {
            let img = base.image(m)?;
            let weights = crate::mori::relation_weights(&img)
                .ok_or_else(|| Error::Internal("image of a weighted projective fan lost its relation".into()))?;
            let name = format!("{}·M{k}", base.name().unwrap_or("wps"));
            out.push((weights, img.with_name(name)));
        }
    }
    Ok(out)
}

/// A random unimodular `n × n` matrix, as a product of elementary moves.
pub fn random_unimodular<R: Rng + ?Sized>(n: usize, rng: &mut R) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n >= 2 {
        for _ in 0..3 * n {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            m.add_row_multiple(i, j, &int(rng.gen_range(-2..=2)));
            if rng.gen_bool(0.5) {
                m.swap_rows(i, j);
            }
        }
    }
    if rng.gen_bool(0.5) {
        m.negate_row(0);
    }
    debug_assert!(m.det().abs().is_one());
    m
}
