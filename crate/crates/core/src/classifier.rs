//! Classification of complete toric varieties by the divisibility index of
//! `−K`, recognizers for each terminal shape, the bounded weight exhaustion
//! and the normal-bundle criterion for projective space.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::constructions::{flop_target, well_formed_weights, weighted_projective, TwistVector, WeightVector};
use crate::divisor::{
    canonical_divisor, cartier_data, divisibility_index, divisor_to_json, is_ample, is_nef, rho, Divisibility,
    TorusDivisor,
};
use crate::error::{Error, Result};
use crate::fan::{combinations, fan_to_json, Cone, Fan};
use crate::lattice::{
    hyperplane_normal, int, integer_kernel, lattice_index, lp, rat, rat_of, smith_normal_form, solve_rat, Int,
    IntMatrix, LatticeVector, Rat,
};
use crate::mori::{intersection_numbers, relation_weights, wall_classes};

/// The structure matched by [`classify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Case {
    ProjectiveSpace,
    P1Bundle(TwistVector),
    Wps112(WeightVector),
    FlopTarget { certified_by_invariants: bool },
    Unclassified,
}

impl Case {
    pub fn name(&self) -> &'static str {
        match self {
            Case::ProjectiveSpace => "ProjectiveSpace",
            Case::P1Bundle(_) => "P1Bundle",
            Case::Wps112(_) => "WPS_1_1_2",
            Case::FlopTarget { .. } => "FlopTarget",
            Case::Unclassified => "Unclassified",
        }
    }
}

/// Why a report carries no divisibility analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    KNotQCartier,
    NotProjective,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::KNotQCartier => "k_not_q_cartier",
            Status::NotProjective => "not_projective",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub n: usize,
    pub status: Status,
    pub k_q_cartier: bool,
    pub cartier_index: Option<Int>,
    pub gorenstein: bool,
    pub k_nef: Option<bool>,
    pub rho: usize,
    pub simplicial: bool,
    pub smooth: bool,
    /// The divisibility index `N`, when `−K` is a positive multiple of a Cartier class.
    pub divisibility: Option<Int>,
    pub witness: Option<TorusDivisor>,
    pub case: Case,
    pub certificates: Map<String, Value>,
    pub flags: Vec<String>,
}

impl ClassificationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "N": self.divisibility.as_ref().and_then(ToPrimitive::to_i64),
            "case": self.case.name(),
            "status": self.status.as_str(),
            "rho": self.rho,
            "simplicial": self.simplicial,
            "smooth": self.smooth,
            "k": {
                "q_cartier": self.k_q_cartier,
                "cartier_index": self.cartier_index.as_ref().and_then(ToPrimitive::to_i64),
                "gorenstein": self.gorenstein,
                "nef": self.k_nef,
            },
            "witness": self.witness.as_ref().map(divisor_to_json),
            "certificates": Value::Object(self.certificates.clone()),
            "flags": self.flags,
        })
    }
}

/// Determines the structure of a complete toric variety from the
/// divisibility index `N` of `−K`.
///
/// `N = n + 1` must be projective space; `N = n` must be a `P^{n−1}`-bundle
/// over `P^1` with twists summing to 2, `P(1,1,2,…,2)`, or the target of the
/// small contraction of `P(O^{n−2} ⊕ O(1)²)`. A mismatch is returned as
/// [`Error::TheoremViolation`].
pub fn classify(fan: &Fan) -> Result<ClassificationReport> {
    fan.check_complete()?;
    let n = fan.dim();
    let k = canonical_divisor(fan);
    let k_status = cartier_data(fan, &k)?;
    let mut report = ClassificationReport {
        n,
        status: Status::Ok,
        k_q_cartier: k_status.is_q_cartier,
        cartier_index: k_status.cartier_index.clone(),
        gorenstein: k_status.is_cartier,
        k_nef: None,
        rho: rho(fan)?,
        simplicial: fan.is_simplicial(),
        smooth: fan.is_smooth(),
        divisibility: None,
        witness: None,
        case: Case::Unclassified,
        certificates: Map::new(),
        flags: Vec::new(),
    };
    if !fan.is_smooth() {
        report.flags.push("singular".into());
    }
    if !report.simplicial {
        report.flags.push("non-simplicial".into());
    }
    if !k_status.is_q_cartier {
        report.status = Status::KNotQCartier;
        return Ok(report);
    }
    if ample_class(fan)?.is_none() {
        report.status = Status::NotProjective;
        return Ok(report);
    }
    report.k_nef = Some(is_nef(fan, &k)?);

    let (index, witness) = match divisibility_index(fan)? {
        Divisibility::Index { n, witness } => (n, witness),
        Divisibility::NotDivisible => {
            report.flags.push("anticanonical class not an integral Picard class".into());
            return Ok(report);
        }
        Divisibility::KNotQCartier => return Err(Error::Internal("K lost Q-Cartier status".into())),
    };
    report.divisibility = Some(index.clone());
    report.witness = Some(witness);

    if index == int(n as i64 + 1) {
        if !recognize_projective_space(fan) {
            return Err(violation(fan, "N = n + 1 but the fan is not projective space"));
        }
        report.case = Case::ProjectiveSpace;
        report.certificates.insert("rays".into(), json!(fan.num_rays()));
    } else if index == int(n as i64) {
        if report.simplicial {
            classify_simplicial(fan, &mut report)?;
        } else {
            classify_non_simplicial(fan, &mut report)?;
        }
    } else if index > int(n as i64 + 1) {
        return Err(violation(fan, "N exceeds n + 1"));
    }
    Ok(report)
}

fn violation(fan: &Fan, what: &str) -> Error {
    let json = fan_to_json(fan).unwrap_or_default();
    Error::TheoremViolation(format!("{what}: {json}"))
}

fn classify_simplicial(fan: &Fan, report: &mut ClassificationReport) -> Result<()> {
    let bundle = if report.smooth && report.rho == 2 { recognize_p1_bundle(fan) } else { None };
    let wps = if report.rho == 1 { recognize_wps_1_1_2(fan) } else { None };
    match (bundle, wps) {
        (Some(q), None) => {
            if !q.has_representative_summing_to_two() {
                return Err(violation(fan, "N = n on a P^1-bundle whose twists have no representative summing to 2"));
            }
            let shift = (2 - q.sum()) / q.twists().len() as i64;
            report.certificates.insert("q".into(), json!(q.twists()));
            report.certificates.insert("q_sum_two".into(), json!(q.shifted(shift).twists()));
            report.case = Case::P1Bundle(q);
        }
        (None, Some(w)) => {
            report.certificates.insert("weights".into(), json!(w.weights()));
            report.case = Case::Wps112(w);
        }
        _ => return Err(violation(fan, "N = n on a simplicial fan that is neither a P^1-bundle nor P(1,1,2,…,2)")),
    }
    Ok(())
}

fn classify_non_simplicial(fan: &Fan, report: &mut ClassificationReport) -> Result<()> {
    let n = fan.dim();
    if n < 3 || report.rho != 1 || !report.gorenstein {
        return Err(violation(fan, "N = n on a non-simplicial fan without ρ = 1 and Gorenstein"));
    }
    let walls = fan.walls()?.len();
    report.certificates.insert("walls".into(), json!(walls));
    if let Some((refined, q)) = bundle_refinement(fan)? {
        report.certificates.insert("refinement".into(), serde_json::from_str(&fan_to_json(&refined)?).unwrap_or(Value::Null));
        report.certificates.insert("refinement_q".into(), json!(q.twists()));
        report.case = Case::FlopTarget { certified_by_invariants: false };
        return Ok(());
    }
    if walls == flop_target(n)?.walls()?.len() {
        report.flags.push("certified-by-invariants".into());
        report.case = Case::FlopTarget { certified_by_invariants: true };
        return Ok(());
    }
    Err(violation(fan, "N = n on a non-simplicial fan with no flop-target evidence"))
}

/// Searches the triangulations of the non-simplicial maximal cones that use
/// no new rays for a smooth refinement isomorphic to the `(0,…,0,1,1)` bundle.
///
/// Only cones with `n + 1` rays are re-subdivided; such a cone has exactly
/// two triangulations, one per sign class of its circuit.
fn bundle_refinement(fan: &Fan) -> Result<Option<(Fan, TwistVector)>> {
    let n = fan.dim();
    let mut target = vec![0; n];
    target[n - 1] = 1;
    target[n - 2] = 1;
    let target = TwistVector::new(target);

    let mut options: Vec<Vec<Vec<Vec<usize>>>> = Vec::new();
    for (k, cone) in fan.max_cones().iter().enumerate() {
        if fan.is_simplicial_cone(k) {
            options.push(vec![vec![cone.rays().to_vec()]]);
            continue;
        }
        if cone.len() != n + 1 {
            return Ok(None);
        }
        options.push(circuit_triangulations(fan, cone));
    }
    let choices: usize = options.iter().map(Vec::len).product();
    if choices > 1 << 10 {
        return Ok(None);
    }
    for pick in 0..choices {
        let mut rest = pick;
        let mut cones = Vec::new();
        for opt in &options {
            cones.extend(opt[rest % opt.len()].iter().cloned());
            rest /= opt.len();
        }
        let Ok(refined) = Fan::new(n, fan.rays().to_vec(), cones) else { continue };
        if !refined.is_complete() || !refined.is_smooth() || rho(&refined)? != 2 {
            continue;
        }
        if let Some(q) = recognize_p1_bundle(&refined) {
            if q == target {
                return Ok(Some((refined, q)));
            }
        }
    }
    Ok(None)
}

/// The two triangulations of a cone on `n + 1` rays: drop one ray from the
/// positive, respectively negative, part of the unique linear relation.
fn circuit_triangulations(fan: &Fan, cone: &Cone) -> Vec<Vec<Vec<usize>>> {
    let rays = cone.rays();
    let m = IntMatrix::from_vectors(&fan.cone_vectors(cone)).transpose();
    let Some(lambda) = integer_kernel(&m).into_iter().next() else { return Vec::new() };
    let side = |positive: bool| -> Vec<Vec<usize>> {
        rays.iter()
            .zip(&lambda)
            .filter(|(_, l)| if positive { l.is_positive() } else { l.is_negative() })
            .map(|(&drop, _)| rays.iter().copied().filter(|&r| r != drop).collect())
            .collect()
    };
    vec![side(true), side(false)]
}

/// An ample class in Picard coordinates, if one exists: `x` with
/// `x · [C] ≥ 1` for every wall curve.
pub fn ample_class(fan: &Fan) -> Result<Option<Vec<Rat>>> {
    let classes = wall_classes(fan)?;
    let rho = rho(fan)?;
    let ges: Vec<(Vec<Rat>, Rat)> = classes.iter().map(|c| (c.values().to_vec(), rat(1))).collect();
    Ok(lp::find_point(rho, &[], &ges))
}

/// `n + 1` rays with `Σ v_i = 0`, every `n` of them a lattice basis, and the
/// `n + 1` simplicial cones.
pub fn recognize_projective_space(fan: &Fan) -> bool {
    let n = fan.dim();
    if fan.num_rays() != n + 1 || fan.max_cones().len() != n + 1 {
        return false;
    }
    let sum = fan.rays().iter().fold(LatticeVector::zero(n), |acc, v| acc.add(v));
    if !sum.is_zero() {
        return false;
    }
    combinations(n + 1, n).iter().all(|s| {
        let vecs: Vec<LatticeVector> = s.iter().map(|&i| fan.ray(i).clone()).collect();
        lattice_index(&vecs).is_ok_and(|d| d.is_one())
    })
}

/// Weights `(1,1,2,…,2)` from the positive relation among `n + 1` rays that
/// generate the lattice, with both cones omitting a weight-1 ray smooth.
pub fn recognize_wps_1_1_2(fan: &Fan) -> Option<WeightVector> {
    let n = fan.dim();
    if n < 2 || fan.num_rays() != n + 1 || !fan.is_simplicial() {
        return None;
    }
    let w = relation_weights(fan)?;
    let mut sorted: Vec<Int> = w.clone();
    sorted.sort();
    let expected: Vec<Int> = (0..=n).map(|i| if i < 2 { int(1) } else { int(2) }).collect();
    if sorted != expected {
        return None;
    }
    for (i, a) in w.iter().enumerate() {
        if !a.is_one() {
            continue;
        }
        let omit = Cone::new((0..=n).filter(|&j| j != i).collect());
        if !fan.max_cones().contains(&omit) || !fan.multiplicity(&omit).ok()?.is_one() {
            return None;
        }
    }
    let snf = smith_normal_form(&fan.ray_matrix());
    if !snf.diagonal().iter().all(One::is_one) {
        return None;
    }
    WeightVector::new(expected.iter().map(|x| x.to_i64().unwrap_or(0)).collect()).ok()
}

/// A `P^{n−1}`-bundle structure over `P^1`, read from a primitive covector
/// `ℓ` vanishing on `n` fiber rays and equal to `±1` on the two others.
///
/// The twists `q` satisfy `w_+ + w_− = Σ (q_i − q_n) u_i` and are reported
/// with `q_1 = 0`.
pub fn recognize_p1_bundle(fan: &Fan) -> Option<TwistVector> {
    let n = fan.dim();
    if n < 2 || fan.num_rays() != n + 2 || !fan.is_smooth() || !fan.is_complete() {
        return None;
    }
    let mut tried: Vec<Vec<Int>> = Vec::new();
    for subset in combinations(fan.num_rays(), n - 1) {
        let vecs: Vec<LatticeVector> = subset.iter().map(|&i| fan.ray(i).clone()).collect();
        let Some(ell) = hyperplane_normal(&vecs, n) else { continue };
        let neg: Vec<Int> = ell.iter().map(|x| -x).collect();
        if tried.contains(&ell) || tried.contains(&neg) {
            continue;
        }
        tried.push(ell.clone());
        if let Some(q) = bundle_over_covector(fan, &ell) {
            return Some(q);
        }
    }
    None
}

fn bundle_over_covector(fan: &Fan, ell: &[Int]) -> Option<TwistVector> {
    let n = fan.dim();
    let values: Vec<Int> = fan.rays().iter().map(|v| v.dot(ell)).collect();
    let fiber: Vec<usize> = (0..fan.num_rays()).filter(|&i| values[i].is_zero()).collect();
    let plus = (0..fan.num_rays()).find(|&i| values[i] == int(1))?;
    let minus = (0..fan.num_rays()).find(|&i| values[i] == int(-1))?;
    if fiber.len() != n {
        return None;
    }
    let sum = fiber.iter().fold(LatticeVector::zero(n), |acc, &i| acc.add(fan.ray(i)));
    if !sum.is_zero() {
        return None;
    }
    let mut expected: Vec<Cone> = Vec::new();
    for w in [plus, minus] {
        for &drop in &fiber {
            let mut c: Vec<usize> = fiber.iter().copied().filter(|&i| i != drop).collect();
            c.push(w);
            let cone = Cone::new(c);
            let vecs = fan.cone_vectors(&cone);
            if !lattice_index(&vecs).is_ok_and(|d| d.is_one()) {
                return None;
            }
            expected.push(cone);
        }
    }
    let mut actual: Vec<Cone> = fan.max_cones().to_vec();
    actual.sort();
    expected.sort();
    if actual != expected {
        return None;
    }
    // w_+ + w_− = Σ c_i u_i with c_n = 0
    let base: Vec<usize> = fiber[..n - 1].to_vec();
    let rows: Vec<Vec<Rat>> = (0..n).map(|t| base.iter().map(|&i| rat_of(&fan.ray(i).coords()[t])).collect()).collect();
    let target: Vec<Rat> = fan.ray(plus).add(fan.ray(minus)).to_rat();
    let c = solve_rat(&rows, &target, n - 1)?;
    let mut q: Vec<i64> = c.iter().map(|x| x.is_integer().then(|| x.to_integer().to_i64()).flatten()).collect::<Option<_>>()?;
    q.push(0);
    Some(TwistVector::new(q).normalized())
}

/// Well-formed weights with largest entry at most `bound` whose weighted
/// projective space has `−K·C ≥ n` on every wall curve, in lexicographic order.
pub fn enumerate_long_ray_weights(n: usize, bound: i64) -> Result<Vec<WeightVector>> {
    if n < 2 || bound < 2 {
        return Err(Error::BadParameter("need n ≥ 2 and bound ≥ 2".into()));
    }
    let min = rat(n as i64);
    let kept: Vec<Option<WeightVector>> = well_formed_weights(n, bound)
        .into_par_iter()
        .map(|w| {
            let fan = weighted_projective(&w)?;
            let degrees = intersection_numbers(&fan, &canonical_divisor(&fan).neg())?;
            Ok(degrees.iter().all(|d| *d >= min).then_some(w))
        })
        .collect::<Result<_>>()?;
    Ok(kept.into_iter().flatten().collect())
}

/// Whether `O_{D_i}(D_i)` is ample, via the restriction of `D_i` to the star
/// fan of ray `i`.
pub fn normal_bundle_ample(fan: &Fan, ray: usize) -> Result<bool> {
    if ray >= fan.num_rays() {
        return Err(Error::RayOutOfRange(ray));
    }
    if !fan.is_smooth() {
        return Err(Error::NotSmooth);
    }
    let star = fan.star_fan(ray)?;
    // D_i + div(χ^m) with ⟨m, v_i⟩ = −1 avoids D_i; its restriction has
    // coefficient ⟨m, v_j⟩ on each neighbour v_j
    let data = crate::divisor::require_cartier_data(fan, &TorusDivisor::prime(fan.num_rays(), ray))?;
    let cone = fan.cones_containing(ray)[0];
    let m = &data.functionals[cone];
    let coeffs: Vec<Rat> = star.source_rays.iter().map(|&j| fan.ray(j).dot_rat(m)).collect();
    debug_assert_eq!(fan.ray(ray).dot_rat(m), rat(-1));
    is_ample(&star.fan, &TorusDivisor::new(coeffs))
}

/// `true` when every invariant divisor has ample normal bundle, which forces
/// projective space; a fan passing the test that is not projective space is
/// reported as [`Error::TheoremViolation`].
pub fn mabuchi_classify(fan: &Fan) -> Result<bool> {
    if !fan.is_smooth() {
        return Err(Error::NotSmooth);
    }
    fan.check_complete()?;
    for i in 0..fan.num_rays() {
        if !normal_bundle_ample(fan, i)? {
            return Ok(false);
        }
    }
    if !recognize_projective_space(fan) {
        return Err(violation(fan, "every normal bundle is ample but the fan is not projective space"));
    }
    Ok(true)
}
