//! Complete rational polyhedral fans.
//!
//! A [`Fan`] is validated once at construction and is immutable afterwards.
//! Maximal cones may be non-simplicial; they are stored by the full list of
//! their rays and their facets are found from supporting hyperplanes through
//! `n − 1` of those rays. Derived tables (walls, Picard data) are memoized
//! behind [`OnceLock`]s, so a `Fan` can be shared freely across threads.

mod json;

pub use json::{fan_from_json, fan_to_json, FanJson};

use num_traits::{One, Signed, Zero};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use crate::divisor::{ClassGroup, PicardLattice};
use crate::error::{Error, Result};
use crate::lattice::{
    hyperplane_normal, lattice_index, lp, primitive, quotient_map, rank_of_vectors, rat, Int, IntMatrix,
    LatticeVector, Rat,
};

/// A cone of a fan, given by sorted indices into the fan's ray list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    rays: Vec<usize>,
}

impl Cone {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Self { rays }
    }

    #[inline]
    pub fn rays(&self) -> &[usize] {
        &self.rays
    }

    pub fn contains(&self, ray: usize) -> bool {
        self.rays.binary_search(&ray).is_ok()
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_subset(&self, other: &Cone) -> bool {
        self.rays.iter().all(|r| other.contains(*r))
    }

    pub fn intersection(&self, other: &Cone) -> Cone {
        Cone { rays: self.rays.iter().copied().filter(|r| other.contains(*r)).collect() }
    }
}

/// A facet of a maximal cone with its inward primitive normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub cone: Cone,
    pub normal: Vec<Int>,
}

/// A codimension-one cone shared by two maximal cones.
///
/// `normal` is the primitive covector vanishing on the wall and positive on
/// the `right` cone; it generates the dual of `N / (N ∩ span(wall))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub cone: Cone,
    pub left: usize,
    pub right: usize,
    pub normal: Vec<Int>,
}

#[derive(Default)]
pub(crate) struct FanMemo {
    walls: OnceLock<Result<Vec<Wall>>>,
    pub(crate) class_group: OnceLock<Result<ClassGroup>>,
    pub(crate) picard: OnceLock<Result<PicardLattice>>,
}

impl Clone for FanMemo {
    fn clone(&self) -> Self {
        Self::default()
    }
}

#[derive(Clone)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Cone>,
    facets: Vec<Vec<Facet>>,
    name: Option<String>,
    pub(crate) memo: FanMemo,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rays == other.rays && self.max_cones == other.max_cones && self.name == other.name
    }
}

impl Eq for Fan {}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fan")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("rays", &self.rays.iter().map(ToString::to_string).collect::<Vec<_>>())
            .field("max_cones", &self.max_cones.iter().map(|c| c.rays.clone()).collect::<Vec<_>>())
            .finish()
    }
}

impl Fan {
    /// Validates and builds a fan. Checks primitivity and distinctness of the
    /// rays, that every maximal cone is full-dimensional, strongly convex and
    /// generated minimally by its listed rays, that every pair of maximal
    /// cones meets in a common face, and that every ray is used.
    pub fn new(dim: usize, rays: Vec<LatticeVector>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadDimension);
        }
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: r.dim() });
            }
            if r.is_zero() {
                return Err(Error::ZeroRay { ray: i });
            }
            if !r.content().is_one() {
                return Err(Error::RayNotPrimitive { ray: i });
            }
        }
        let mut seen: HashMap<&LatticeVector, usize> = HashMap::new();
        for (i, r) in rays.iter().enumerate() {
            if let Some(&j) = seen.get(r) {
                return Err(Error::DuplicateRay { first: j, second: i });
            }
            seen.insert(r, i);
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for (k, c) in max_cones.into_iter().enumerate() {
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::RayIndexOutOfRange { cone: k, index: bad });
            }
            cones.push(Cone::new(c));
        }
        for i in 0..cones.len() {
            for j in 0..i {
                if cones[i] == cones[j] {
                    return Err(Error::DuplicateCone { first: j, second: i });
                }
            }
        }
        let used: BTreeSet<usize> = cones.iter().flat_map(|c| c.rays.iter().copied()).collect();
        if let Some(unused) = (0..rays.len()).find(|i| !used.contains(i)) {
            return Err(Error::UnusedRay { ray: unused });
        }

        let mut facets = Vec::with_capacity(cones.len());
        for (k, c) in cones.iter().enumerate() {
            let gens: Vec<LatticeVector> = c.rays.iter().map(|&i| rays[i].clone()).collect();
            if rank_of_vectors(&gens) != dim {
                return Err(Error::ConeNotFullDimensional { cone: k });
            }
            if gens.len() > dim {
                if !strongly_convex(&gens) {
                    return Err(Error::ConeNotStronglyConvex { cone: k });
                }
                for (pos, &ray) in c.rays.iter().enumerate() {
                    let others: Vec<Vec<Rat>> =
                        gens.iter().enumerate().filter(|&(p, _)| p != pos).map(|(_, g)| g.to_rat()).collect();
                    if lp::in_cone(&others, &gens[pos].to_rat()) {
                        return Err(Error::ConeRayNotExtremal { cone: k, ray });
                    }
                }
            }
            facets.push(cone_facets(c, &rays, dim));
        }

        let fan = Fan { dim, rays, max_cones: cones, facets, name: None, memo: FanMemo::default() };
        for i in 0..fan.max_cones.len() {
            for j in 0..i {
                if !fan.meet_in_common_face(j, i) {
                    return Err(Error::ConesNotIntersectingInFace { first: j, second: i });
                }
            }
        }
        Ok(fan)
    }

    pub fn from_i64(dim: usize, rays: &[Vec<i64>], max_cones: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(dim, rays.iter().map(|r| LatticeVector::from_i64(r)).collect(), max_cones)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    #[inline]
    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    #[inline]
    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    pub fn facets(&self, cone: usize) -> &[Facet] {
        &self.facets[cone]
    }

    pub fn cone_vectors(&self, cone: &Cone) -> Vec<LatticeVector> {
        cone.rays.iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// `r × n` matrix whose rows are the rays.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_vectors(&self.rays)
    }

    pub fn cones_containing(&self, ray: usize) -> Vec<usize> {
        (0..self.max_cones.len()).filter(|&k| self.max_cones[k].contains(ray)).collect()
    }

    /// Whether `subset` (ray indices of maximal cone `cone`) is the ray set of a face.
    pub fn is_face_of(&self, cone: usize, subset: &Cone) -> bool {
        debug_assert!(subset.is_subset(&self.max_cones[cone]));
        self.face_closure(cone, subset) == *subset
    }

    /// Rays of the smallest face of maximal cone `cone` containing `subset`.
    pub fn face_closure(&self, cone: usize, subset: &Cone) -> Cone {
        let mut closure = self.max_cones[cone].clone();
        for f in &self.facets[cone] {
            if subset.is_subset(&f.cone) {
                closure = closure.intersection(&f.cone);
            }
        }
        closure
    }

    /// Index of the sublattice generated by the cone's rays in the lattice of
    /// its span. Defined for simplicial cones only.
    pub fn multiplicity(&self, cone: &Cone) -> Result<Int> {
        if let Some(&bad) = cone.rays.iter().find(|&&i| i >= self.rays.len()) {
            return Err(Error::RayOutOfRange(bad));
        }
        lattice_index(&self.cone_vectors(cone)).map_err(|e| match e {
            Error::NotIndependent => Error::NonSimplicialCone,
            other => other,
        })
    }

    pub fn is_simplicial_cone(&self, k: usize) -> bool {
        self.max_cones[k].len() == self.dim
    }

    pub fn is_simplicial(&self) -> bool {
        (0..self.max_cones.len()).all(|k| self.is_simplicial_cone(k))
    }

    pub fn is_smooth(&self) -> bool {
        self.is_simplicial() && self.max_cones.iter().all(|c| self.multiplicity(c).is_ok_and(|m| m.is_one()))
    }

    /// Facet-incidence completeness test: every facet of every maximal cone
    /// is shared by exactly two maximal cones, the rays span `R^n`, and the
    /// maximal cones are connected through walls. Together with the pairwise
    /// face-intersection property checked at construction this forces the
    /// support to be all of `R^n`.
    pub fn is_complete(&self) -> bool {
        self.walls().is_ok()
    }

    pub fn check_complete(&self) -> Result<()> {
        self.walls().map(|_| ())
    }

    /// All walls, each listed once with `left < right`.
    pub fn walls(&self) -> Result<&[Wall]> {
        self.memo.walls.get_or_init(|| self.compute_walls()).as_deref().map_err(Clone::clone)
    }

    fn compute_walls(&self) -> Result<Vec<Wall>> {
        if rank_of_vectors(&self.rays) != self.dim {
            return Err(Error::TorusFactor);
        }
        let mut by_rays: HashMap<&Cone, Vec<(usize, usize)>> = HashMap::new();
        for (k, fs) in self.facets.iter().enumerate() {
            for (fi, f) in fs.iter().enumerate() {
                by_rays.entry(&f.cone).or_default().push((k, fi));
            }
        }
        let mut walls = Vec::new();
        for (k, fs) in self.facets.iter().enumerate() {
            for f in fs {
                let inc = &by_rays[&f.cone];
                if inc.len() != 2 {
                    return Err(Error::NotComplete { cone: k, facet: f.cone.rays.clone(), count: inc.len() });
                }
                let other = if inc[0].0 == k { inc[1].0 } else { inc[0].0 };
                if k < other {
                    walls.push(Wall {
                        cone: f.cone.clone(),
                        left: k,
                        right: other,
                        normal: f.normal.iter().map(|x| -x).collect(),
                    });
                }
            }
        }
        // connectivity through walls
        let k = self.max_cones.len();
        let mut parent: Vec<usize> = (0..k).collect();
        for w in &walls {
            let (a, b) = (find(&mut parent, w.left), find(&mut parent, w.right));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        if (0..k).any(|i| find(&mut parent, i) != root) {
            return Err(Error::Disconnected);
        }
        Ok(walls)
    }

    /// Whether maximal cones `a` and `b` meet in a common face: there is a
    /// linear form vanishing on their shared rays, positive on the other rays
    /// of `a` and negative on the other rays of `b`.
    fn meet_in_common_face(&self, a: usize, b: usize) -> bool {
        let (ca, cb) = (&self.max_cones[a], &self.max_cones[b]);
        let common = ca.intersection(cb);
        let eqs: Vec<(Vec<Rat>, Rat)> = common.rays.iter().map(|&i| (self.rays[i].to_rat(), rat(0))).collect();
        let mut ges = Vec::new();
        for &i in &ca.rays {
            if !common.contains(i) {
                ges.push((self.rays[i].to_rat(), rat(1)));
            }
        }
        for &i in &cb.rays {
            if !common.contains(i) {
                ges.push((self.rays[i].neg().to_rat(), rat(1)));
            }
        }
        lp::find_point(self.dim, &eqs, &ges).is_some()
    }

    /// The fan of the invariant divisor `V(v_i)`: images in `N / Z v_i` of the
    /// cones containing `v_i`.
    pub fn star_fan(&self, ray: usize) -> Result<StarFan> {
        if ray >= self.rays.len() {
            return Err(Error::RayOutOfRange(ray));
        }
        if self.dim < 2 {
            return Err(Error::BadDimension);
        }
        self.check_complete()?;
        let q = quotient_map(std::slice::from_ref(&self.rays[ray]), self.dim);
        let mut source_rays: Vec<usize> = Vec::new();
        let mut star_rays: Vec<LatticeVector> = Vec::new();
        let mut cones = Vec::new();
        for k in self.cones_containing(ray) {
            let mut cone = Vec::new();
            for &j in &self.max_cones[k].rays {
                if j == ray || !self.is_face_of(k, &Cone::new(vec![ray, j])) {
                    continue;
                }
                let pos = match source_rays.iter().position(|&s| s == j) {
                    Some(p) => p,
                    None => {
                        source_rays.push(j);
                        star_rays.push(primitive(&self.rays[j].apply(&q))?);
                        source_rays.len() - 1
                    }
                };
                cone.push(pos);
            }
            cones.push(cone);
        }
        let fan = Fan::new(self.dim - 1, star_rays, cones)?;
        Ok(StarFan { fan, source_rays, quotient: q })
    }

    /// Image of the fan under `x ↦ x·m` for an integer matrix of nonzero
    /// determinant; rays are re-primitivized.
    pub fn image(&self, m: &IntMatrix) -> Result<Fan> {
        if m.rows() != self.dim || m.cols() != self.dim || m.det().is_zero() {
            return Err(Error::BadParameter("lattice map must be square and invertible".into()));
        }
        let rays = self.rays.iter().map(|r| primitive(&r.apply(m))).collect::<Result<Vec<_>>>()?;
        let fan = Fan::new(self.dim, rays, self.max_cones.iter().map(|c| c.rays.clone()).collect())?;
        Ok(match &self.name {
            Some(n) => fan.with_name(n.clone()),
            None => fan,
        })
    }

    /// Same fan with the rays listed in a different order: ray `i` of the
    /// result is ray `order[i]` of `self`.
    pub fn permute_rays(&self, order: &[usize]) -> Result<Fan> {
        let mut inv = vec![usize::MAX; order.len()];
        for (new, &old) in order.iter().enumerate() {
            inv[old] = new;
        }
        let rays = order.iter().map(|&o| self.rays[o].clone()).collect();
        let cones = self.max_cones.iter().map(|c| c.rays.iter().map(|&r| inv[r]).collect()).collect();
        Fan::new(self.dim, rays, cones)
    }

    /// Hex digest of the canonical JSON form (name excluded).
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = FanJson::from_fan(self).map(|mut j| {
            j.name = None;
            serde_json::to_string(&j).unwrap_or_default()
        });
        let bytes = Sha256::digest(json.unwrap_or_default().as_bytes());
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Star fan of a ray together with the bookkeeping needed to push divisors down.
#[derive(Clone, Debug)]
pub struct StarFan {
    pub fan: Fan,
    /// `source_rays[j]` is the ray of the parent fan whose image is star ray `j`.
    pub source_rays: Vec<usize>,
    /// Quotient map `N → N / Z v_i` as a matrix acting on row vectors.
    pub quotient: IntMatrix,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn strongly_convex(gens: &[LatticeVector]) -> bool {
    let dim = gens[0].dim();
    let ges: Vec<(Vec<Rat>, Rat)> = gens.iter().map(|g| (g.to_rat(), rat(1))).collect();
    lp::find_point(dim, &[], &ges).is_some()
}

fn cone_facets(cone: &Cone, rays: &[LatticeVector], dim: usize) -> Vec<Facet> {
    let idx = &cone.rays;
    let mut out: Vec<Facet> = Vec::new();
    if dim == 1 {
        // a half-line: its only proper face is the origin
        return vec![Facet { cone: Cone::new(vec![]), normal: rays[idx[0]].coords().to_vec() }];
    }
    for subset in combinations(idx.len(), dim - 1) {
        let vecs: Vec<LatticeVector> = subset.iter().map(|&p| rays[idx[p]].clone()).collect();
        let Some(mut normal) = hyperplane_normal(&vecs, dim) else {
            continue;
        };
        let vals: Vec<Int> = idx.iter().map(|&i| rays[i].dot(&normal)).collect();
        let pos = vals.iter().any(Signed::is_positive);
        let neg = vals.iter().any(Signed::is_negative);
        if pos && neg {
            continue;
        }
        if neg {
            normal = normal.iter().map(|x| -x).collect();
        }
        let face = Cone::new(idx.iter().zip(&vals).filter(|(_, v)| v.is_zero()).map(|(&i, _)| i).collect());
        if !out.iter().any(|f| f.cone == face) {
            out.push(Facet { cone: face, normal });
        }
    }
    out
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int;

    pub(crate) fn p2() -> Fan {
        Fan::from_i64(2, &[vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap()
    }

    fn f2() -> Fan {
        Fan::from_i64(
            2,
            &[vec![1, 0], vec![0, 1], vec![-1, 2], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap()
    }

    fn p112() -> Fan {
        Fan::from_i64(2, &[vec![1, 0], vec![-1, -2], vec![0, 1]], vec![vec![0, 2], vec![1, 2], vec![0, 1]]).unwrap()
    }

    #[test]
    fn multiplicities() {
        let p = p2();
        assert_eq!(p.multiplicity(&Cone::new(vec![0, 1])).unwrap(), int(1));
        assert_eq!(p.multiplicity(&Cone::new(vec![0])).unwrap(), int(1));
        assert_eq!(p112().multiplicity(&Cone::new(vec![0, 1])).unwrap(), int(2));
        assert_eq!(p112().multiplicity(&Cone::new(vec![1, 2])).unwrap(), int(1));
    }

    #[test]
    fn simplicial_and_smooth() {
        assert!(p2().is_simplicial() && p2().is_smooth());
        assert!(p112().is_simplicial() && !p112().is_smooth());
        assert!(f2().is_smooth());
    }

    #[test]
    fn completeness() {
        assert!(p2().is_complete());
        let orthant = Fan::from_i64(2, &[vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert!(!orthant.is_complete());
        assert_eq!(orthant.walls().unwrap_err().code(), "not_complete");
    }

    #[test]
    fn wall_counts() {
        assert_eq!(p2().walls().unwrap().len(), 3);
        assert_eq!(f2().walls().unwrap().len(), 4);
        let f = f2();
        for w in f.walls().unwrap() {
            // normal is positive on the right cone
            let right = &f.max_cones()[w.right];
            assert!(right.rays().iter().all(|&r| f.ray(r).dot(&w.normal) >= int(0)));
        }
    }

    #[test]
    fn validation_errors() {
        let e = Fan::from_i64(2, &[vec![2, 4], vec![0, 1]], vec![vec![0, 1]]).unwrap_err();
        assert_eq!(e, Error::RayNotPrimitive { ray: 0 });
        let e = Fan::from_i64(2, &[vec![1, 0], vec![1, 0]], vec![vec![0, 1]]).unwrap_err();
        assert_eq!(e.code(), "duplicate_ray");
        // two overlapping quadrants
        let e = Fan::from_i64(
            2,
            &[vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, 2]],
            vec![vec![0, 1], vec![2, 3]],
        )
        .unwrap_err();
        assert_eq!(e.code(), "cones_not_intersecting_in_face");
        let e = Fan::from_i64(2, &[vec![1, 0], vec![-1, 0]], vec![vec![0, 1]]).unwrap_err();
        assert_eq!(e.code(), "cone_not_full_dimensional");
        let e = Fan::from_i64(2, &[vec![1, 0], vec![0, 1], vec![1, 1]], vec![vec![0, 1, 2]]).unwrap_err();
        assert_eq!(e.code(), "cone_ray_not_extremal");
        let e = Fan::from_i64(2, &[vec![1, 0], vec![0, 1], vec![-1, 0]], vec![vec![0, 1]]).unwrap_err();
        assert_eq!(e, Error::UnusedRay { ray: 2 });
    }

    #[test]
    fn star_of_p2_ray_is_p1() {
        for i in 0..3 {
            let s = p2().star_fan(i).unwrap();
            assert_eq!(s.fan.dim(), 1);
            assert_eq!(s.fan.num_rays(), 2);
            assert!(s.fan.is_complete());
        }
        let s = f2().star_fan(0).unwrap();
        assert_eq!(s.fan.num_rays(), 2);
        assert_eq!(p2().star_fan(7).unwrap_err(), Error::RayOutOfRange(7));
    }

    #[test]
    fn non_simplicial_facets() {
        // cone over a square: four rays, four facets
        let fan = Fan::from_i64(
            3,
            &[vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]],
            vec![vec![0, 1, 2, 3]],
        )
        .unwrap();
        assert_eq!(fan.facets(0).len(), 4);
        assert!(fan.is_face_of(0, &Cone::new(vec![0, 1])));
        assert!(!fan.is_face_of(0, &Cone::new(vec![0, 2])));
        assert_eq!(fan.face_closure(0, &Cone::new(vec![0, 2])), Cone::new(vec![0, 1, 2, 3]));
        assert!(fan.multiplicity(&Cone::new(vec![0, 1, 2, 3])).is_err());
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
