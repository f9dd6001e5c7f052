//! Invariant curves, their intersection numbers, the Mori cone and
//! combinatorial contraction of its extremal rays.
//!
//! Every wall `τ = σ ∩ σ′` gives an invariant curve `V(τ)`. For a Q-Cartier
//! divisor with local data `m_σ`, `m_σ′` the difference `m_σ − m_σ′` vanishes
//! on `τ` and so is a multiple `c·ℓ` of the wall normal `ℓ` (primitive,
//! positive on `σ′`); that multiple is `D·V(τ)`. This is the only route used
//! for intersection numbers; the weighted-projective closed formula
//! [`wps_wall_degree`] exists to cross-check it.

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::divisor::{canonical_divisor, picard_lattice, require_cartier_data, CartierData, TorusDivisor};
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan, FanJson, Wall};
use crate::lattice::{
    format_rat, integer_kernel, lattice_index, lp, primitive, primitive_direction, quotient_map, rank_of_vectors,
    rat_of, Int, IntMatrix, LatticeVector, Rat,
};

/// The linear relation among the `n + 1` rays of two simplicial cones
/// sharing a wall, scaled to the minimal integral vector whose two off-wall
/// coefficients are positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallRelation {
    pub wall: usize,
    /// `(ray index, coefficient)` sorted by ray index.
    pub coefficients: Vec<(usize, Int)>,
}

impl WallRelation {
    pub fn coefficient(&self, ray: usize) -> Option<&Int> {
        self.coefficients.iter().find(|(r, _)| *r == ray).map(|(_, c)| c)
    }
}

fn off_wall_ray(fan: &Fan, cone: usize, wall: &Wall) -> Result<usize> {
    if !fan.is_simplicial_cone(cone) {
        return Err(Error::NonSimplicialCone);
    }
    fan.max_cones()[cone]
        .rays()
        .iter()
        .copied()
        .find(|r| !wall.cone.contains(*r))
        .ok_or_else(|| Error::Internal("wall equals a maximal cone".into()))
}

pub fn wall_relation(fan: &Fan, wall_index: usize) -> Result<WallRelation> {
    let walls = fan.walls()?;
    let wall = walls.get(wall_index).ok_or(Error::RayOutOfRange(wall_index))?;
    let a = off_wall_ray(fan, wall.left, wall)?;
    let b = off_wall_ray(fan, wall.right, wall)?;
    let mut rays: Vec<usize> = wall.cone.rays().to_vec();
    rays.push(a);
    rays.push(b);
    // columns are the rays; the kernel is the relation
    let m = IntMatrix::from_vectors(&rays.iter().map(|&i| fan.ray(i).clone()).collect::<Vec<_>>()).transpose();
    let kernel = integer_kernel(&m);
    if kernel.len() != 1 {
        return Err(Error::Internal("wall relation is not unique".into()));
    }
    let mut rel = kernel.into_iter().next().unwrap_or_default();
    let g = LatticeVector::new(rel.clone()).content();
    rel = rel.into_iter().map(|x| x / &g).collect();
    let pos_a = rays.len() - 2;
    if rel[pos_a].is_negative() {
        rel = rel.into_iter().map(|x| -x).collect();
    }
    if !rel[pos_a].is_positive() || !rel[pos_a + 1].is_positive() {
        return Err(Error::Internal("off-wall coefficients of a wall relation must be positive".into()));
    }
    let mut coefficients: Vec<(usize, Int)> = rays.into_iter().zip(rel).collect();
    coefficients.sort_by_key(|(r, _)| *r);
    Ok(WallRelation { wall: wall_index, coefficients })
}

/// `D·V(τ)` from the jump of the Cartier data across the wall.
pub fn intersection_from_data(fan: &Fan, data: &CartierData, wall: &Wall) -> Rat {
    let (ml, mr) = (&data.functionals[wall.left], &data.functionals[wall.right]);
    let jump: Vec<Rat> = ml.iter().zip(mr).map(|(a, b)| a - b).collect();
    let j = wall.normal.iter().position(|x| !x.is_zero()).unwrap_or(0);
    let c = &jump[j] / rat_of(&wall.normal[j]);
    debug_assert!(
        jump.iter().zip(&wall.normal).all(|(x, l)| *x == &c * rat_of(l)),
        "Cartier data disagree on a wall"
    );
    let _ = fan;
    c
}

pub fn intersection_number(fan: &Fan, d: &TorusDivisor, wall_index: usize) -> Result<Rat> {
    let walls = fan.walls()?;
    let wall = walls.get(wall_index).ok_or(Error::RayOutOfRange(wall_index))?;
    let data = require_cartier_data(fan, d)?;
    Ok(intersection_from_data(fan, &data, wall))
}

/// `D·V(τ)` for every wall, in wall order.
pub fn intersection_numbers(fan: &Fan, d: &TorusDivisor) -> Result<Vec<Rat>> {
    let walls = fan.walls()?;
    let data = require_cartier_data(fan, d)?;
    Ok(walls.iter().map(|w| intersection_from_data(fan, &data, w)).collect())
}

/// Positive weights `a` with `Σ a_i v_i = 0`, minimal and integral, for a fan
/// with exactly `n + 1` rays; `None` if no positive relation exists.
pub fn relation_weights(fan: &Fan) -> Option<Vec<Int>> {
    if fan.num_rays() != fan.dim() + 1 {
        return None;
    }
    let m = fan.ray_matrix().transpose();
    let k = integer_kernel(&m);
    if k.len() != 1 {
        return None;
    }
    let mut w = k.into_iter().next()?;
    if w.iter().all(|x| !x.is_positive()) {
        w = w.into_iter().map(|x| -x).collect();
    }
    w.iter().all(Signed::is_positive).then_some(w)
}

/// `−K·V(μ_{l,m})` on a fake weighted projective fan with weights `a`,
/// where `μ_{l,m}` is the wall spanned by all rays except `v_l`, `v_m`:
///
/// `(Σ a_i) · mult(μ_{l,m}) / (a_l · mult(σ_m))`, `σ_m` the maximal cone
/// omitting `v_m`.
pub fn wps_wall_degree(weights: &[Int], fan: &Fan, wall_index: usize) -> Result<Rat> {
    let n = fan.dim();
    if weights.len() != n + 1 || fan.num_rays() != n + 1 {
        return Err(Error::WeightMismatch(format!("expected {} weights and rays", n + 1)));
    }
    if weights.iter().any(|a| !a.is_positive()) {
        return Err(Error::WeightMismatch("weights must be positive".into()));
    }
    let sum = fan
        .rays()
        .iter()
        .zip(weights)
        .fold(LatticeVector::zero(n), |acc, (v, a)| acc.add(&v.scale(a)));
    if !sum.is_zero() {
        return Err(Error::WeightMismatch("Σ a_i v_i ≠ 0".into()));
    }
    let walls = fan.walls()?;
    let wall = walls.get(wall_index).ok_or(Error::RayOutOfRange(wall_index))?;
    let missing: Vec<usize> = (0..n + 1).filter(|i| !wall.cone.contains(*i)).collect();
    let [l, m] = missing[..] else {
        return Err(Error::WeightMismatch("wall does not omit exactly two rays".into()));
    };
    let sigma_m = Cone::new((0..n + 1).filter(|&i| i != m).collect());
    let mult_mu = lattice_index(&fan.cone_vectors(&wall.cone))?;
    let mult_sigma = lattice_index(&fan.cone_vectors(&sigma_m))?;
    let total: Int = weights.iter().sum();
    Ok(Rat::new(total * mult_mu, &weights[l] * mult_sigma))
}

/// A numerical curve class: its values against the Picard basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveClass(pub Vec<Rat>);

impl CurveClass {
    pub fn values(&self) -> &[Rat] {
        &self.0
    }

    pub fn direction(&self) -> Option<Vec<Int>> {
        primitive_direction(&self.0)
    }

    pub fn same_ray(&self, other: &CurveClass) -> bool {
        self.direction().is_some() && self.direction() == other.direction()
    }
}

/// An extremal ray of `NE(X)` together with the wall curves spanning it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalRay {
    /// Primitive integral generator in Picard-dual coordinates.
    pub class: CurveClass,
    pub walls: Vec<usize>,
}

/// Numerical class of every wall curve, in wall order.
pub fn wall_classes(fan: &Fan) -> Result<Vec<CurveClass>> {
    let pic = picard_lattice(fan)?;
    let walls = fan.walls()?;
    let data: Vec<CartierData> =
        pic.basis().iter().map(|b| require_cartier_data(fan, b)).collect::<Result<_>>()?;
    Ok(walls
        .iter()
        .map(|w| CurveClass(data.iter().map(|d| intersection_from_data(fan, d, w)).collect()))
        .collect())
}

/// Extremal rays of the cone generated by the wall-curve classes, each with
/// the walls whose classes lie on it.
pub fn mori_cone(fan: &Fan) -> Result<Vec<ExtremalRay>> {
    let classes = wall_classes(fan)?;
    let mut dirs: Vec<(Vec<Int>, Vec<usize>)> = Vec::new();
    for (w, c) in classes.iter().enumerate() {
        let Some(d) = c.direction() else { continue };
        match dirs.iter_mut().find(|(e, _)| *e == d) {
            Some((_, ws)) => ws.push(w),
            None => dirs.push((d, vec![w])),
        }
    }
    let gens: Vec<Vec<Rat>> = dirs.iter().map(|(d, _)| d.iter().map(rat_of).collect()).collect();
    let mut rays = Vec::new();
    for (i, (d, ws)) in dirs.iter().enumerate() {
        let others: Vec<Vec<Rat>> =
            gens.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
        if !lp::in_cone(&others, &gens[i]) {
            rays.push(ExtremalRay { class: CurveClass(d.iter().map(rat_of).collect()), walls: ws.clone() });
        }
    }
    Ok(rays)
}

/// `min(−K·C)` over the wall curves whose class lies on the ray.
pub fn extremal_length(fan: &Fan, ray: &CurveClass) -> Result<Rat> {
    let walls: Vec<usize> = wall_classes(fan)?
        .iter()
        .enumerate()
        .filter(|(_, c)| c.same_ray(ray))
        .map(|(w, _)| w)
        .collect();
    let degrees = intersection_numbers(fan, &canonical_divisor(fan).neg())?;
    walls
        .iter()
        .map(|&w| degrees[w].clone())
        .min()
        .ok_or_else(|| Error::Internal("extremal ray carries no wall curve".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionType {
    Fibration,
    Divisorial,
    Small,
}

impl ContractionType {
    pub fn as_str(self) -> &'static str {
        match self {
            ContractionType::Fibration => "fibration",
            ContractionType::Divisorial => "divisorial",
            ContractionType::Small => "small",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Contraction {
    pub kind: ContractionType,
    pub crepant: bool,
    pub target: Fan,
    /// For each maximal cone of the target, the source cones merged into it.
    pub merged_cones: Vec<Vec<usize>>,
    /// Walls whose curves are contracted.
    pub contracted_walls: Vec<usize>,
    /// Source rays that are not rays of the target (birational case).
    pub removed_rays: Vec<usize>,
    /// For birational contractions, the source index of each target ray.
    pub target_ray_sources: Vec<usize>,
}

impl Contraction {
    pub fn to_json(&self) -> Result<Value> {
        Ok(json!({
            "type": self.kind.as_str(),
            "crepant": self.crepant,
            "target": serde_json::to_value(FanJson::from_fan(&self.target)?).map_err(|e| Error::Json(e.to_string()))?,
            "merged_cones": self.merged_cones,
        }))
    }
}

/// Locate the extremal ray whose generator is proportional to `class`.
pub fn find_extremal_ray(fan: &Fan, class: &CurveClass) -> Result<ExtremalRay> {
    mori_cone(fan)?.into_iter().find(|r| r.class.same_ray(class)).ok_or(Error::NotExtremal)
}

/// Contracts an extremal ray by merging the maximal cones glued along the
/// walls whose curves lie on it.
pub fn contract_ray(fan: &Fan, class: &CurveClass) -> Result<Contraction> {
    let ray = find_extremal_ray(fan, class)?;
    let walls = fan.walls()?;
    let k = fan.max_cones().len();
    let n = fan.dim();

    let mut parent: Vec<usize> = (0..k).collect();
    for &w in &ray.walls {
        let (a, b) = (find(&mut parent, walls[w].left), find(&mut parent, walls[w].right));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for c in 0..k {
        let root = find(&mut parent, c);
        match groups.iter_mut().find(|g| find_root(&parent, g[0]) == root) {
            Some(g) => g.push(c),
            None => groups.push(vec![c]),
        }
    }

    let mut regions = Vec::with_capacity(groups.len());
    for g in &groups {
        regions.push(merged_region(fan, walls, g)?);
    }

    let length = extremal_length(fan, &ray.class)?;
    let crepant = length.is_zero();

    if regions.iter().all(|r| r.lineality.is_empty()) {
        let mut target_ray_sources: Vec<usize> = regions.iter().flat_map(|r| r.hull_rays.iter().copied()).collect();
        target_ray_sources.sort_unstable();
        target_ray_sources.dedup();
        let removed_rays: Vec<usize> = (0..fan.num_rays()).filter(|i| !target_ray_sources.contains(i)).collect();
        let pos = |src: usize| target_ray_sources.iter().position(|&s| s == src).unwrap_or(usize::MAX);
        let cones: Vec<Vec<usize>> = regions.iter().map(|r| r.hull_rays.iter().map(|&s| pos(s)).collect()).collect();
        let rays: Vec<LatticeVector> = target_ray_sources.iter().map(|&s| fan.ray(s).clone()).collect();
        let target = Fan::new(n, rays, cones)
            .map_err(|e| Error::NotContractible(format!("merged cones do not form a fan ({e})")))?;
        target.check_complete()?;
        let kind = if removed_rays.is_empty() { ContractionType::Small } else { ContractionType::Divisorial };
        return Ok(Contraction {
            kind,
            crepant,
            target,
            merged_cones: groups,
            contracted_walls: ray.walls.clone(),
            removed_rays,
            target_ray_sources,
        });
    }

    // fibration: every region contains the same (n−1)-dimensional linear subspace
    let lin: Vec<LatticeVector> = regions[0].lineality.iter().map(|&i| fan.ray(i).clone()).collect();
    let lin_rank = rank_of_vectors(&lin);
    if lin_rank == n {
        return Err(Error::UnsupportedFibration("contraction to a point".into()));
    }
    if lin_rank != n - 1 || regions.len() != 2 {
        return Err(Error::UnsupportedFibration("only fibrations over P^1 are supported".into()));
    }
    for r in &regions[1..] {
        let mut both = lin.clone();
        both.extend(r.lineality.iter().map(|&i| fan.ray(i).clone()));
        if r.lineality.is_empty() || rank_of_vectors(&both) != n - 1 {
            return Err(Error::UnsupportedFibration("regions have different linear parts".into()));
        }
    }
    let q = quotient_map(&lin, n);
    let mut base_rays = Vec::new();
    for r in &regions {
        let off = r
            .rays
            .iter()
            .find(|&&i| !r.lineality.contains(&i))
            .ok_or_else(|| Error::Internal("fibration region without base direction".into()))?;
        base_rays.push(primitive(&fan.ray(*off).apply(&q))?);
    }
    let target = Fan::new(1, base_rays, vec![vec![0], vec![1]])?;
    Ok(Contraction {
        kind: ContractionType::Fibration,
        crepant,
        target,
        merged_cones: groups,
        contracted_walls: ray.walls.clone(),
        removed_rays: Vec::new(),
        target_ray_sources: Vec::new(),
    })
}

struct Region {
    rays: Vec<usize>,
    hull_rays: Vec<usize>,
    lineality: Vec<usize>,
}

/// Checks that a union of maximal cones is convex (every boundary facet
/// supports all of its rays) and returns its generators, extremal rays and
/// the rays lying in its lineality space.
fn merged_region(fan: &Fan, walls: &[Wall], group: &[usize]) -> Result<Region> {
    let mut rays: Vec<usize> = group.iter().flat_map(|&c| fan.max_cones()[c].rays().iter().copied()).collect();
    rays.sort_unstable();
    rays.dedup();
    for &c in group {
        for f in fan.facets(c) {
            let internal = walls.iter().any(|w| {
                w.cone == f.cone
                    && ((w.left == c && group.contains(&w.right)) || (w.right == c && group.contains(&w.left)))
            });
            if internal {
                continue;
            }
            if rays.iter().any(|&r| fan.ray(r).dot(&f.normal).is_negative()) {
                return Err(Error::NotContractible("merged region is not convex".into()));
            }
        }
    }
    if group.len() == 1 {
        return Ok(Region { hull_rays: rays.clone(), rays, lineality: Vec::new() });
    }
    let gens: Vec<Vec<Rat>> = rays.iter().map(|&r| fan.ray(r).to_rat()).collect();
    let lineality: Vec<usize> = rays
        .iter()
        .enumerate()
        .filter(|&(p, _)| lp::in_cone(&gens, &gens[p].iter().map(|x| -x).collect::<Vec<_>>()))
        .map(|(_, &r)| r)
        .collect();
    let hull_rays = if lineality.is_empty() {
        rays.iter()
            .enumerate()
            .filter(|&(p, _)| {
                let others: Vec<Vec<Rat>> =
                    gens.iter().enumerate().filter(|&(q, _)| q != p).map(|(_, g)| g.clone()).collect();
                !lp::in_cone(&others, &gens[p])
            })
            .map(|(_, &r)| r)
            .collect()
    } else {
        Vec::new()
    };
    Ok(Region { rays, hull_rays, lineality })
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn find_root(parent: &[usize], mut x: usize) -> usize {
    while parent[x] != x {
        x = parent[x];
    }
    x
}

/// Display helper for reports.
pub fn class_to_strings(c: &CurveClass) -> Vec<String> {
    c.0.iter().map(format_rat).collect()
}
