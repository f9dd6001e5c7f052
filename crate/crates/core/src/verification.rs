//! The verification suite behind `toricdiv verify`: each check exercises
//! one statement over fixtures and enumerated fans, and failing checks carry
//! a minimal reproducer.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::classifier::{
    classify, enumerate_long_ray_weights, mabuchi_classify, recognize_wps_1_1_2, Case,
};
use crate::constructions::{
    bundle_over_p1, fake_wps_fixtures, flop_contraction, flop_target, hirzebruch, projective_space,
    smooth_complete_surfaces, weighted_projective, TwistVector, WeightVector,
};
use crate::divisor::{
    canonical_divisor, cartier_data, class_group, divisibility_index, is_nef, log_bound_check, numerically_equivalent,
    picard_lattice, rho, Divisibility, TorusDivisor,
};
use crate::error::{Error, Result};
use crate::fan::{Fan, FanJson};
use crate::lattice::{int, rat, Int, Rat};
use crate::mori::{contract_ray, extremal_length, intersection_number, intersection_numbers, mori_cone, wps_wall_degree, ContractionType};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub max_n: usize,
    pub weight_bound: i64,
    /// Replace one fixture by a wrong one so the harness can be seen to fail.
    pub inject_corrupt: bool,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { max_n: 5, weight_bound: 6, inject_corrupt: false, seed: 0x5eed }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub certifies: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
    pub reproducer: Option<Value>,
}

impl CheckResult {
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "name": self.name,
            "certifies": self.certifies,
            "passed": self.passed,
            "cases": self.cases,
            "detail": self.detail,
            "reproducer": self.reproducer,
        })
    }
}

/// Running tally of one check.
struct Tally {
    cases: usize,
    failure: Option<(String, Option<Value>)>,
}

impl Tally {
    fn new() -> Self {
        Self { cases: 0, failure: None }
    }

    fn record(&mut self, ok: bool, fan: Option<&Fan>, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some((what(), fan.map(reproducer)));
        }
    }

    fn error(&mut self, fan: Option<&Fan>, e: &Error) {
        self.record(false, fan, || format!("error: {e}"));
    }
}

fn reproducer(fan: &Fan) -> Value {
    FanJson::from_fan(fan).ok().and_then(|j| serde_json::to_value(j).ok()).unwrap_or(Value::Null)
}

struct Check {
    name: &'static str,
    certifies: &'static str,
    run: fn(&VerifyOptions, &mut Tally),
}

const CHECKS: [Check; 10] = [
    Check {
        name: "divisibility extremes",
        certifies: "N(P^n) = n + 1, and N ≤ n + 1 whenever K is Q-Cartier and not nef",
        run: check_divisibility_extremes,
    },
    Check {
        name: "P(1,1,2,...,2) family",
        certifies: "on P(1,1,2,...,2) the weight-2 divisors are Cartier and −K ∼ n·V(v_i)",
        run: check_wps_family,
    },
    Check {
        name: "P^1-bundle family",
        certifies: "a P^{n-1}-bundle over P^1 has N = n exactly when its twists can be shifted to sum to 2",
        run: check_bundle_family,
    },
    Check {
        name: "flop target",
        certifies: "the small contraction of P(O^{n-2} ⊕ O(1)^2) is Gorenstein, non-Q-factorial, ρ = 1, N = n",
        run: check_flop_target,
    },
    Check {
        name: "crepant resolution",
        certifies: "contracting the negative section of P(O^{n-1} ⊕ O(2)) is a crepant resolution of P(1,1,2,...,2)",
        run: check_crepant_resolution,
    },
    Check {
        name: "long-ray exhaustion",
        certifies: "weighted projective spaces with −K·C ≥ n on every invariant curve are P^n and P(1,1,2,...,2)",
        run: check_long_rays,
    },
    Check {
        name: "intersection oracle",
        certifies: "Cartier-jump intersection numbers agree with the weighted projective closed formula",
        run: check_oracle_agreement,
    },
    Check {
        name: "numerical vs linear triviality",
        certifies: "a Q-Cartier divisor is numerically trivial exactly when it is Q-linearly trivial",
        run: check_numerical_triviality,
    },
    Check {
        name: "normal bundle criterion",
        certifies: "a smooth complete toric variety whose invariant divisors all have ample normal bundle is P^n",
        run: check_normal_bundles,
    },
    Check {
        name: "log bound",
        certifies: "−(K+B) ≡ N·D with D Cartier and K+B not nef implies N ≤ n + 1",
        run: check_log_bound,
    },
];

/// Runs every check (in parallel) and returns results in check order.
pub fn run_suite(opts: &VerifyOptions) -> Vec<CheckResult> {
    CHECKS
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let mut t = Tally::new();
            (c.run)(opts, &mut t);
            let (passed, detail, reproducer) = match t.failure {
                None => (true, format!("{} cases", t.cases), None),
                Some((d, r)) => (false, d, r),
            };
            CheckResult { id: i + 1, name: c.name, certifies: c.certifies, passed, cases: t.cases, detail, reproducer }
        })
        .collect()
}

pub fn suite_json(opts: &VerifyOptions, results: &[CheckResult]) -> Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "options": {
            "max_n": opts.max_n,
            "weight_bound": opts.weight_bound,
            "inject_corrupt": opts.inject_corrupt,
            "seed": opts.seed,
        },
        "passed": results.iter().all(|r| r.passed),
        "checks": results.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
    })
}

/// Human-readable table, one line per check.
pub fn render_table(results: &[CheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{:>2}  {mark}  {:<32} {:>6} cases  {}\n", r.id, r.name, r.cases, r.certifies));
        if !r.passed {
            out.push_str(&format!("        {}\n", r.detail));
        }
    }
    out
}

fn dims(opts: &VerifyOptions, lo: usize, hi: usize) -> std::ops::RangeInclusive<usize> {
    lo..=hi.min(opts.max_n)
}

fn wps_112(n: usize) -> Result<Fan> {
    let w: Vec<i64> = (0..=n).map(|i| if i < 2 { 1 } else { 2 }).collect();
    weighted_projective(&WeightVector::new(w)?)
}

/// Named fixtures used across checks.
pub fn fixture_set(max_n: usize) -> Result<Vec<Fan>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.push(projective_space(n)?);
    }
    for n in 2..=max_n {
        out.push(wps_112(n)?);
    }
    for a in 0..=4 {
        out.push(hirzebruch(a)?);
    }
    for q in [vec![0, 0, 2], vec![0, 1, 1], vec![0, 1, 3], vec![0, 0, 1, 1], vec![0, 0, 0, 2]] {
        if q.len() <= max_n {
            out.push(bundle_over_p1(&TwistVector::new(q))?);
        }
    }
    for n in 3..=max_n.min(4) {
        out.push(flop_target(n)?);
    }
    out.push(weighted_projective(&WeightVector::new(vec![1, 2, 3])?)?);
    out.push(weighted_projective(&WeightVector::new(vec![1, 1, 1, 3])?)?);
    Ok(out)
}

fn check_divisibility_extremes(opts: &VerifyOptions, t: &mut Tally) {
    for n in dims(opts, 1, 5) {
        let fan = if opts.inject_corrupt && n == 2 { hirzebruch(1) } else { projective_space(n) };
        let fan = match fan {
            Ok(f) => f,
            Err(e) => return t.error(None, &e),
        };
        match divisibility_index(&fan) {
            Ok(d) => t.record(d.index() == Some(&int(n as i64 + 1)), Some(&fan), || {
                format!("divisibility index of P^{n} fixture is {:?}, expected {}", d.index(), n + 1)
            }),
            Err(e) => t.error(Some(&fan), &e),
        }
    }
    let mut fans = match fixture_set(opts.max_n) {
        Ok(f) => f,
        Err(e) => return t.error(None, &e),
    };
    for n in dims(opts, 2, 3) {
        match fake_wps_fixtures(n, opts.weight_bound) {
            Ok(f) => fans.extend(f.into_iter().map(|(_, fan)| fan)),
            Err(e) => return t.error(None, &e),
        }
    }
    for fan in &fans {
        let r = (|| -> Result<Option<bool>> {
            let k = canonical_divisor(fan);
            if !cartier_data(fan, &k)?.is_q_cartier || is_nef(fan, &k)? {
                return Ok(None);
            }
            Ok(Some(match divisibility_index(fan)? {
                Divisibility::Index { n, .. } => n <= int(fan.dim() as i64 + 1),
                _ => true,
            }))
        })();
        match r {
            Ok(None) => {}
            Ok(Some(ok)) => t.record(ok, Some(fan), || "divisibility index exceeds n + 1".into()),
            Err(e) => t.error(Some(fan), &e),
        }
    }
}

fn check_wps_family(opts: &VerifyOptions, t: &mut Tally) {
    for n in dims(opts, 2, 5) {
        let fan = match wps_112(n) {
            Ok(f) => f,
            Err(e) => return t.error(None, &e),
        };
        let r = (|| -> Result<Option<String>> {
            let r = fan.num_rays();
            let cg = class_group(&fan)?;
            let anti_k = cg.project(&canonical_divisor(&fan).neg());
            for i in 2..r {
                let d = TorusDivisor::prime(r, i);
                if !cartier_data(&fan, &d)?.is_cartier {
                    return Ok(Some(format!("V(v_{}) is not Cartier", i + 1)));
                }
                if cg.project(&d.scale(&rat(n as i64))) != anti_k {
                    return Ok(Some(format!("−K is not linearly equivalent to {n}·V(v_{})", i + 1)));
                }
            }
            if rho(&fan)? != 1 || fan.is_smooth() {
                return Ok(Some("expected ρ = 1 and a singular fan".into()));
            }
            let case = classify(&fan)?.case;
            if !matches!(case, Case::Wps112(_)) {
                return Ok(Some(format!("classified as {}", case.name())));
            }
            Ok(None)
        })();
        match r {
            Ok(bad) => t.record(bad.is_none(), Some(&fan), || bad.unwrap_or_default()),
            Err(e) => t.error(Some(&fan), &e),
        }
    }
}

/// Sorted vectors of length `n` with entries in `lo..=hi`.
pub fn sorted_vectors(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn rec(n: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in lo..=hi {
            cur.push(x);
            rec(n, x, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, lo, hi, &mut Vec::new(), &mut out);
    out
}

fn check_bundle_family(opts: &VerifyOptions, t: &mut Tally) {
    for n in dims(opts, 2, 4) {
        let results: Vec<(Fan, Result<Option<String>>)> = sorted_vectors(n, -3, 3)
            .into_par_iter()
            .filter_map(|q| {
                let q = TwistVector::new(q);
                let fan = bundle_over_p1(&q).ok()?;
                let verdict = bundle_verdict(&fan, &q);
                Some((fan, verdict))
            })
            .collect();
        for (fan, r) in results {
            match r {
                Ok(bad) => t.record(bad.is_none(), Some(&fan), || bad.unwrap_or_default()),
                Err(e) => t.error(Some(&fan), &e),
            }
        }
    }
}

fn bundle_verdict(fan: &Fan, q: &TwistVector) -> Result<Option<String>> {
    let n = int(fan.dim() as i64);
    let index = divisibility_index(fan)?;
    if q.has_representative_summing_to_two() {
        if index.index() != Some(&n) {
            return Ok(Some(format!("q = {:?}: divisibility index {:?}, expected {n}", q.twists(), index.index())));
        }
        let case = classify(fan)?.case;
        if case != Case::P1Bundle(q.normalized()) {
            return Ok(Some(format!("q = {:?}: classified as {case:?}", q.twists())));
        }
    } else if index.index() == Some(&n) {
        return Ok(Some(format!("q = {:?}: divisibility index is n without a twist summing to 2", q.twists())));
    }
    Ok(None)
}

fn check_flop_target(opts: &VerifyOptions, t: &mut Tally) {
    for n in dims(opts, 3, 4) {
        let r = (|| -> Result<(Fan, Option<String>)> {
            let (y, c) = flop_contraction(n)?;
            let x = flop_target(n)?;
            let anti_k = canonical_divisor(&x);
            let ray = mori_cone(&y)?
                .into_iter()
                .find(|r| contract_ray(&y, &r.class).is_ok_and(|c| c.kind == ContractionType::Small))
                .ok_or_else(|| Error::Internal("no small ray".into()))?;
            let length = extremal_length(&y, &ray.class)?;
            let bad = if !x.is_complete() || x.is_simplicial() {
                Some("target must be complete and non-simplicial".to_string())
            } else if !cartier_data(&x, &anti_k)?.is_cartier {
                Some("target is not Gorenstein".into())
            } else if rho(&x)? != 1 {
                Some(format!("target has ρ = {}", rho(&x)?))
            } else if divisibility_index(&x)?.index() != Some(&int(n as i64)) {
                Some("target divisibility index is not n".into())
            } else if c.kind != ContractionType::Small || !c.crepant || !length.is_zero() {
                Some("contraction is not small and crepant".into())
            } else if !matches!(classify(&x)?.case, Case::FlopTarget { .. }) {
                Some("target not classified as FlopTarget".into())
            } else {
                None
            };
            Ok((x, bad))
        })();
        match r {
            Ok((x, bad)) => t.record(bad.is_none(), Some(&x), || bad.unwrap_or_default()),
            Err(e) => t.error(None, &e),
        }
    }
}

fn check_crepant_resolution(opts: &VerifyOptions, t: &mut Tally) {
    for n in dims(opts, 2, 4) {
        let mut q = vec![0; n];
        q[n - 1] = 2;
        let fan = match bundle_over_p1(&TwistVector::new(q)) {
            Ok(f) => f,
            Err(e) => return t.error(None, &e),
        };
        let r = (|| -> Result<Option<String>> {
            for ray in mori_cone(&fan)? {
                let c = match contract_ray(&fan, &ray.class) {
                    Ok(c) if c.kind == ContractionType::Fibration => continue,
                    Ok(c) => c,
                    Err(e) => return Err(e),
                };
                if c.kind != ContractionType::Divisorial || !c.crepant {
                    return Ok(Some(format!("non-fiber contraction is {} (crepant = {})", c.kind.as_str(), c.crepant)));
                }
                if recognize_wps_1_1_2(&c.target).is_none() {
                    return Ok(Some("target not recognized as P(1,1,2,...,2)".into()));
                }
                return Ok(None);
            }
            Ok(Some("no non-fiber extremal ray".into()))
        })();
        match r {
            Ok(bad) => t.record(bad.is_none(), Some(&fan), || bad.unwrap_or_default()),
            Err(e) => t.error(Some(&fan), &e),
        }
    }
}

fn check_long_rays(opts: &VerifyOptions, t: &mut Tally) {
    let b = opts.weight_bound.max(2);
    for (n, bound) in [(2usize, b), (3, (b - 2).max(2))] {
        if n > opts.max_n {
            continue;
        }
        let expected: Vec<Vec<i64>> = vec![vec![1; n + 1], (0..=n).map(|i| if i < 2 { 1 } else { 2 }).collect()];
        for bd in [bound, bound + 1] {
            match enumerate_long_ray_weights(n, bd) {
                Ok(ws) => {
                    let got: Vec<Vec<i64>> = ws.iter().map(|w| w.weights().to_vec()).collect();
                    t.record(got == expected, None, || format!("n = {n}, bound = {bd}: got {got:?}"));
                }
                Err(e) => t.error(None, &e),
            }
        }
    }
}

fn check_oracle_agreement(opts: &VerifyOptions, t: &mut Tally) {
    for n in dims(opts, 2, 3) {
        let fixtures = match fake_wps_fixtures(n, opts.weight_bound) {
            Ok(f) => f,
            Err(e) => return t.error(None, &e),
        };
        for (weights, fan) in &fixtures {
            let r = (|| -> Result<Option<String>> {
                let anti_k = canonical_divisor(fan).neg();
                for w in 0..fan.walls()?.len() {
                    let a = wps_wall_degree(weights, fan, w)?;
                    let b = intersection_number(fan, &anti_k, w)?;
                    if a != b {
                        return Ok(Some(format!("wall {w}: closed formula {a}, Cartier jump {b}")));
                    }
                }
                Ok(None)
            })();
            match r {
                Ok(bad) => t.record(bad.is_none(), Some(fan), || bad.unwrap_or_default()),
                Err(e) => t.error(Some(fan), &e),
            }
        }
    }
}

fn triviality_fixtures(max_n: usize) -> Result<Vec<Fan>> {
    let mut fans = vec![
        projective_space(2)?,
        hirzebruch(2)?,
        weighted_projective(&WeightVector::new(vec![1, 1, 2])?)?,
        weighted_projective(&WeightVector::new(vec![1, 2, 3])?)?,
    ];
    if max_n >= 3 {
        fans.push(wps_112(3)?);
        fans.push(bundle_over_p1(&TwistVector::new(vec![0, 1, 3]))?);
        fans.push(flop_target(3)?);
    }
    for n in 2..=max_n.min(3) {
        fans.extend(fake_wps_fixtures(n, 3)?.into_iter().map(|(_, f)| f).filter(|f| !f.is_smooth()));
    }
    Ok(fans)
}

/// A random Q-Cartier divisor; about half are rational multiples of
/// principal divisors.
pub fn random_q_cartier<R: Rng>(fan: &Fan, rng: &mut R) -> Result<TorusDivisor> {
    let r = fan.num_rays();
    let principal = |rng: &mut R| {
        let m: Vec<Int> = (0..fan.dim()).map(|_| int(rng.gen_range(-4..=4))).collect();
        TorusDivisor::principal(fan, &m).scale(&Rat::new(int(rng.gen_range(1..=3)), int(rng.gen_range(1..=3))))
    };
    let base = if rng.gen_bool(0.5) {
        TorusDivisor::zero(r)
    } else if fan.is_simplicial() {
        TorusDivisor::from_i64(&(0..r).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>())
    } else {
        let pic = picard_lattice(fan)?;
        pic.basis().iter().fold(TorusDivisor::zero(r), |acc, b| acc.add(&b.scale(&rat(rng.gen_range(-3..=3)))))
    };
    Ok(base.add(&principal(rng)))
}

fn check_numerical_triviality(opts: &VerifyOptions, t: &mut Tally) {
    let fans = match triviality_fixtures(opts.max_n) {
        Ok(f) => f,
        Err(e) => return t.error(None, &e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for k in 0..200 {
        let fan = &fans[k % fans.len()];
        let m: Vec<Int> = (0..fan.dim()).map(|_| int(rng.gen_range(-5..=5))).collect();
        let d = TorusDivisor::principal(fan, &m);
        let r = (|| -> Result<bool> {
            Ok(numerically_equivalent(fan, &d, &TorusDivisor::zero(fan.num_rays()))? && class_group(fan)?.project(&d).is_zero())
        })();
        match r {
            Ok(ok) => t.record(ok, Some(fan), || format!("principal divisor div(χ^{m:?}) is not trivial")),
            Err(e) => t.error(Some(fan), &e),
        }
    }
    for k in 0..200 {
        let fan = &fans[k % fans.len()];
        let r = (|| -> Result<(TorusDivisor, bool, bool)> {
            let d = random_q_cartier(fan, &mut rng)?;
            let numerical = intersection_numbers(fan, &d)?.iter().all(Zero::is_zero);
            let linear = class_group(fan)?.project(&d).free_is_zero();
            Ok((d, numerical, linear))
        })();
        match r {
            Ok((d, a, b)) => t.record(a == b, Some(fan), || {
                format!("divisor {:?}: numerically trivial = {a}, Q-linearly trivial = {b}", d.coeffs())
            }),
            Err(e) => t.error(Some(fan), &e),
        }
    }
}

fn check_normal_bundles(opts: &VerifyOptions, t: &mut Tally) {
    for n in dims(opts, 2, 4) {
        match projective_space(n) {
            Ok(f) => match mabuchi_classify(&f) {
                Ok(v) => t.record(v, Some(&f), || "P^n rejected".into()),
                Err(e) => t.error(Some(&f), &e),
            },
            Err(e) => t.error(None, &e),
        }
    }
    let mut negatives = vec![hirzebruch(1), hirzebruch(2), hirzebruch(0)];
    if opts.max_n >= 3 {
        negatives.push(bundle_over_p1(&TwistVector::new(vec![0, 0, 2])));
    }
    for f in negatives {
        match f.and_then(|f| mabuchi_classify(&f).map(|v| (f, v))) {
            Ok((f, v)) => t.record(!v, Some(&f), || "non-projective-space fixture accepted".into()),
            Err(e) => t.error(None, &e),
        }
    }
    let surfaces = match smooth_complete_surfaces(8, SURFACE_MAX_A) {
        Ok(s) => s,
        Err(e) => return t.error(None, &e),
    };
    let outcomes: Vec<(usize, Result<bool>)> =
        surfaces.par_iter().enumerate().map(|(i, f)| (i, mabuchi_classify(f))).collect();
    for (i, r) in outcomes {
        let f = &surfaces[i];
        match r {
            Ok(v) => t.record(v == (f.num_rays() == 3), Some(f), || "normal-bundle test disagrees with P^2".into()),
            Err(e) => t.error(Some(f), &e),
        }
    }
}

/// Largest `a` among the Hirzebruch surfaces seeding the surface enumeration.
pub const SURFACE_MAX_A: i64 = 6;

fn check_log_bound(opts: &VerifyOptions, t: &mut Tally) {
    let fans = match (|| -> Result<Vec<Fan>> {
        Ok(vec![projective_space(2)?, hirzebruch(2)?, weighted_projective(&WeightVector::new(vec![1, 1, 2])?)?])
    })() {
        Ok(f) => f,
        Err(e) => return t.error(None, &e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x10b);
    for k in 0..200 {
        let fan = &fans[k % fans.len()];
        let b = random_boundary(fan.num_rays(), &mut rng);
        match log_bound_check(fan, &b) {
            Ok(rep) => t.record(rep.bound_holds, Some(fan), || {
                format!("boundary {:?}: N = {:?} exceeds n + 1", b.coeffs(), rep.n)
            }),
            Err(e) => t.error(Some(fan), &e),
        }
    }
}

/// A boundary with coefficients `p/q ∈ [0, 1]`, `q ≤ 6`.
pub fn random_boundary<R: Rng>(len: usize, rng: &mut R) -> TorusDivisor {
    let coeffs = (0..len)
        .map(|_| {
            let q = rng.gen_range(1..=6);
            Rat::new(int(rng.gen_range(0..=q)), int(q))
        })
        .collect();
    TorusDivisor::new(coeffs)
}
