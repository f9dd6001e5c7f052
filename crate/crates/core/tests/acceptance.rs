//! Acceptance criteria, one PASS/FAIL line each. Exact arithmetic throughout:
//! every comparison is equality of rationals, no tolerances.
//!
//! Where a criterion has a computable ground truth, it is recomputed here by
//! a route independent of the library code under test (closed formulas,
//! direct linear algebra on ray matrices, self-intersection sequences).

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toricdiv::classifier::{
    classify, enumerate_long_ray_weights, mabuchi_classify, normal_bundle_ample, recognize_wps_1_1_2, Case,
};
use toricdiv::constructions::{
    bundle_over_p1, flop_contraction, flop_target, hirzebruch, projective_space, smooth_complete_surfaces,
    weighted_projective, TwistVector, WeightVector,
};
use toricdiv::divisor::{
    canonical_divisor, cartier_data, class_group, divisibility_index, is_nef, log_bound_check, numerically_equivalent,
    picard_lattice, rho, Divisibility, TorusDivisor,
};
use toricdiv::lattice::{IntMatrix, LatticeVector};
use toricdiv::mori::{
    contract_ray, extremal_length, intersection_number, intersection_numbers, mori_cone, wps_wall_degree,
    ContractionType,
};
use toricdiv::Fan;

type Int = BigInt;
type Rat = BigRational;
type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn int(x: i64) -> Int {
    Int::from(x)
}

fn rat(x: i64) -> Rat {
    Rat::from_integer(int(x))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn wps(w: &[i64]) -> Fan {
    weighted_projective(&WeightVector::new(w.to_vec()).unwrap()).unwrap()
}

fn wps_112_weights(n: usize) -> Vec<i64> {
    (0..=n).map(|i| if i < 2 { 1 } else { 2 }).collect()
}

/// Exact Gaussian elimination: a solution of `m x = b` with free variables 0.
fn solve(m: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: Vec<Vec<Rat>> = m.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][cols].clone();
    }
    Some(x)
}

/// Rows `⟨·, v_j⟩` for all rays: the map `M → Z^r` whose image is the
/// principal divisors.
fn ray_rows(fan: &Fan) -> Vec<Vec<Rat>> {
    fan.rays().iter().map(|v| v.coords().iter().map(|x| Rat::from_integer(x.clone())).collect()).collect()
}

/// `d` is (integrally) linearly equivalent to zero: `d = div(χ^m)`, `m ∈ Z^n`.
/// The solution is unique because the rays span.
fn is_principal(fan: &Fan, d: &[Rat]) -> bool {
    solve(&ray_rows(fan), d).is_some_and(|m| m.iter().all(|x| x.is_integer()))
}

fn is_q_principal(fan: &Fan, d: &[Rat]) -> bool {
    solve(&ray_rows(fan), d).is_some()
}

fn det_abs(fan: &Fan, rays: &[usize]) -> Int {
    let m = IntMatrix::from_vectors(&rays.iter().map(|&i| fan.ray(i).clone()).collect::<Vec<_>>());
    m.det().abs()
}

/// Largest positive rational `c` with `v / c` integral.
fn rat_content(v: &[Rat]) -> Rat {
    let num = v.iter().fold(Int::zero(), |g, x| g.gcd(x.numer()));
    let den = v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
    Rat::new(num, den)
}

// 1 ------------------------------------------------------------------------

fn criterion_1() -> Outcome {
    for n in 1..=5 {
        let d = e(divisibility_index(&e(projective_space(n))?))?;
        ensure(d.index() == Some(&int(n as i64 + 1)), || format!("N(P^{n}) = {:?}", d.index()))?;
    }
    let mut fans: Vec<Fan> = toricdiv::verification::fixture_set(5).map_err(|e| e.to_string())?;
    let mut fake = 0;
    for n in 2..=3 {
        for (_, f) in e(toricdiv::constructions::fake_wps_fixtures(n, 6))? {
            fans.push(f);
            fake += 1;
        }
    }
    let (mut checked, mut violations) = (0, 0);
    for f in &fans {
        let k = canonical_divisor(f);
        if !e(cartier_data(f, &k))?.is_q_cartier || e(is_nef(f, &k))? {
            continue;
        }
        checked += 1;
        if let Divisibility::Index { n, .. } = e(divisibility_index(f))? {
            if n > int(f.dim() as i64 + 1) {
                violations += 1;
            }
        }
    }
    ensure(violations == 0 && checked > fake / 2, || format!("{violations} violations among {checked} fans"))?;
    Ok(format!("N(P^n) = n+1 for n ≤ 5; {checked} fans with K not nef, 0 violations"))
}

// 2 ------------------------------------------------------------------------

fn criterion_2() -> Outcome {
    for n in 2..=5 {
        let f = wps(&wps_112_weights(n));
        let r = f.num_rays();
        let anti_k: Vec<Rat> = vec![rat(1); r];
        for i in 2..r {
            // Cartier: local equations ⟨m_σ, v_j⟩ = −δ_ij have integral solutions
            for (k, cone) in f.max_cones().iter().enumerate() {
                if !cone.contains(i) {
                    continue;
                }
                let rows: Vec<Vec<Rat>> = cone.rays().iter().map(|&j| ray_rows(&f)[j].clone()).collect();
                let rhs: Vec<Rat> = cone.rays().iter().map(|&j| if j == i { rat(-1) } else { rat(0) }).collect();
                let m = solve(&rows, &rhs).ok_or("inconsistent local system")?;
                ensure(m.iter().all(|x| x.is_integer()), || format!("n = {n}: V(v_{}) not Cartier on cone {k}", i + 1))?;
            }
            ensure(e(cartier_data(&f, &TorusDivisor::prime(r, i)))?.is_cartier, || "library disagrees on Cartier".into())?;
            // −K − n·V(v_i) is principal
            let mut diff = anti_k.clone();
            diff[i] -= rat(n as i64);
            ensure(is_principal(&f, &diff), || format!("n = {n}: −K ≁ {n}·V(v_{})", i + 1))?;
            let cg = e(class_group(&f))?;
            ensure(
                cg.project(&canonical_divisor(&f).neg()) == cg.project(&TorusDivisor::prime(r, i).scale(&rat(n as i64))),
                || "class group disagrees".into(),
            )?;
        }
        // simplicial complete: ρ = r − n
        ensure(e(rho(&f))? == r - n && r - n == 1, || format!("n = {n}: ρ ≠ 1"))?;
        let singular = f.max_cones().iter().any(|c| !det_abs(&f, c.rays()).is_one());
        ensure(singular && !f.is_smooth(), || format!("n = {n}: fan is smooth"))?;
        let case = e(classify(&f))?.case;
        ensure(matches!(case, Case::Wps112(_)), || format!("n = {n}: classified {}", case.name()))?;
    }
    Ok("n = 2..5: V(v_i) Cartier, −K ∼ n·V(v_i), ρ = 1, singular, WPS_1_1_2".into())
}

// 3 ------------------------------------------------------------------------

fn sorted_vectors(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in lo..=hi {
        for mut rest in sorted_vectors(n - 1, first, hi) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let (mut yes, mut no) = (0, 0);
    for n in 2..=4usize {
        for q in sorted_vectors(n, -3, 3) {
            let sum: i64 = q.iter().sum();
            let has_rep = (2 - sum).rem_euclid(n as i64) == 0;
            let f = e(bundle_over_p1(&TwistVector::new(q.clone())))?;
            let idx = e(divisibility_index(&f))?;
            let nn = int(n as i64);
            if has_rep {
                yes += 1;
                ensure(idx.index() == Some(&nn), || format!("q = {q:?}: N = {:?}", idx.index()))?;
                let expected: Vec<i64> = q.iter().map(|x| x - q[0]).collect();
                let case = e(classify(&f))?.case;
                ensure(case == Case::P1Bundle(TwistVector::new(expected.clone())), || {
                    format!("q = {q:?}: classified {case:?}, expected twists {expected:?}")
                })?;
            } else {
                no += 1;
                ensure(idx.index() != Some(&nn), || format!("q = {q:?}: N = n without a twist summing to 2"))?;
            }
        }
    }
    Ok(format!("{yes} twist vectors with Σ ≡ 2 classified, {no} others have N ≠ n"))
}

// 4 ------------------------------------------------------------------------

fn criterion_4() -> Outcome {
    for n in 3..=4 {
        let x = e(flop_target(n))?;
        let (y, c) = e(flop_contraction(n))?;
        ensure(x.is_complete(), || "not complete".into())?;
        ensure(x.max_cones().iter().any(|c| c.len() > n), || "no non-simplicial cone".into())?;
        ensure(e(cartier_data(&x, &canonical_divisor(&x)))?.is_cartier, || "not Gorenstein".into())?;
        ensure(e(rho(&x))? == 1, || "ρ ≠ 1".into())?;
        ensure(e(rho(&y))? == 2, || "source ρ ≠ 2".into())?;
        ensure(e(divisibility_index(&x))?.index() == Some(&int(n as i64)), || "N ≠ n".into())?;
        ensure(c.kind == ContractionType::Small && c.crepant, || format!("contraction {:?}", c.kind))?;
        let small = e(mori_cone(&y))?
            .into_iter()
            .find(|r| contract_ray(&y, &r.class).is_ok_and(|c| c.kind == ContractionType::Small))
            .ok_or("no small ray")?;
        ensure(e(extremal_length(&y, &small.class))?.is_zero(), || "extremal length ≠ 0".into())?;
        // every contracted curve is K-trivial
        let deg = e(intersection_numbers(&y, &canonical_divisor(&y)))?;
        ensure(c.contracted_walls.iter().all(|&w| deg[w].is_zero()), || "contracted curve not K-trivial".into())?;
        let case = e(classify(&x))?.case;
        ensure(matches!(case, Case::FlopTarget { .. }), || format!("classified {}", case.name()))?;
    }
    Ok("n = 3, 4: complete, non-simplicial, Gorenstein, ρ = 1, N = n, small crepant, FlopTarget".into())
}

// 5 ------------------------------------------------------------------------

fn criterion_5() -> Outcome {
    for n in 2..=4 {
        let mut q = vec![0; n];
        q[n - 1] = 2;
        let f = e(bundle_over_p1(&TwistVector::new(q)))?;
        let mut found = false;
        for ray in e(mori_cone(&f))? {
            let c = e(contract_ray(&f, &ray.class))?;
            if c.kind == ContractionType::Fibration {
                continue;
            }
            found = true;
            ensure(c.kind == ContractionType::Divisorial && c.crepant, || format!("n = {n}: {:?}", c.kind))?;
            ensure(recognize_wps_1_1_2(&c.target).is_some(), || format!("n = {n}: target not recognized"))?;
            // independent: the target's n + 1 rays satisfy Σ a_i v_i = 0 with a = (1,1,2,…,2)
            let t = &c.target;
            ensure(t.num_rays() == n + 1, || "target ray count".into())?;
            let mut pairs: Vec<(i64, LatticeVector)> = Vec::new();
            for v in t.rays() {
                // the weight of v is the coefficient in the unique relation; try 1 and 2
                pairs.push((0, v.clone()));
            }
            let ok = (0..1u32 << (n + 1)).any(|mask| {
                let w: Vec<i64> = (0..=n).map(|i| if mask >> i & 1 == 1 { 2 } else { 1 }).collect();
                w.iter().filter(|&&x| x == 1).count() == 2
                    && pairs
                        .iter()
                        .zip(&w)
                        .fold(LatticeVector::zero(n), |acc, ((_, v), &a)| acc.add(&v.scale(&int(a))))
                        .is_zero()
            });
            ensure(ok, || format!("n = {n}: no relation with weights (1,1,2,…,2)"))?;
            ensure(e(rho(t))? == e(rho(&f))? - 1, || "ρ did not drop by one".into())?;
        }
        ensure(found, || format!("n = {n}: no birational extremal ray"))?;
    }
    Ok("n = 2..4: divisorial crepant contraction onto P(1,1,2,…,2)".into())
}

// 6 ------------------------------------------------------------------------

fn well_formed(w: &[i64]) -> bool {
    (0..w.len()).all(|s| w.iter().enumerate().filter(|&(i, _)| i != s).fold(0i64, |g, (_, &a)| g.gcd(&a)) == 1)
}

/// Brute force with the closed formula for every wall degree.
fn long_ray_oracle(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for w in sorted_vectors(n + 1, 1, bound) {
        if !well_formed(&w) {
            continue;
        }
        let f = wps(&w);
        let weights: Vec<Int> = w.iter().map(|&a| int(a)).collect();
        let walls = f.walls().unwrap().len();
        if (0..walls).all(|k| wps_wall_degree(&weights, &f, k).unwrap() >= rat(n as i64)) {
            out.push(w);
        }
    }
    out
}

fn criterion_6() -> Outcome {
    for (n, bound) in [(2usize, 6i64), (3, 4)] {
        let expected = vec![vec![1; n + 1], wps_112_weights(n)];
        for b in [bound, bound + 1] {
            let got: Vec<Vec<i64>> = e(enumerate_long_ray_weights(n, b))?.iter().map(|w| w.weights().to_vec()).collect();
            ensure(got == expected, || format!("n = {n}, bound = {b}: {got:?}"))?;
            let oracle = long_ray_oracle(n, b);
            ensure(oracle == expected, || format!("closed-formula brute force gave {oracle:?}"))?;
        }
    }
    Ok("n = 2 (bound 6, 7) and n = 3 (bound 4, 5): exactly P^n and P(1,1,2,…,2)".into())
}

// 7 ------------------------------------------------------------------------

fn criterion_7() -> Outcome {
    let mut walls_checked = 0;
    let mut fixtures = 0;
    for n in 2..=3usize {
        let mut maps = vec![IntMatrix::identity(n)];
        let mut m = IntMatrix::identity(n);
        m[(0, 0)] = int(2);
        maps.push(m);
        let mut m = IntMatrix::identity(n);
        m[(n - 1, n - 1)] = int(3);
        m[(n - 1, 0)] = int(1);
        maps.push(m);
        for w in sorted_vectors(n + 1, 1, 6) {
            if !well_formed(&w) {
                continue;
            }
            let base = wps(&w);
            for m in &maps {
                let f = e(base.image(m))?;
                // the relation survives with weights a_i·(content of v_i·M)
                let weights: Vec<Int> = base
                    .rays()
                    .iter()
                    .zip(&w)
                    .map(|(v, &a)| int(a) * v.apply(m).content())
                    .collect();
                let g = weights.iter().fold(Int::zero(), |g, x| g.gcd(x));
                let weights: Vec<Int> = weights.iter().map(|x| x / &g).collect();
                let anti_k = canonical_divisor(&f).neg();
                fixtures += 1;
                for k in 0..e(f.walls())?.len() {
                    let a = e(wps_wall_degree(&weights, &f, k))?;
                    let b = e(intersection_number(&f, &anti_k, k))?;
                    walls_checked += 1;
                    ensure(a == b, || format!("weights {w:?}, wall {k}: formula {a} vs Cartier jump {b}"))?;
                }
            }
        }
    }
    Ok(format!("{walls_checked} walls on {fixtures} fake weighted projective fans agree exactly"))
}

// 8 ------------------------------------------------------------------------

fn triviality_fixtures() -> Vec<Fan> {
    let mut m = IntMatrix::identity(2);
    m[(1, 1)] = int(3);
    vec![
        projective_space(2).unwrap(),
        hirzebruch(2).unwrap(),
        wps(&[1, 1, 2]),
        wps(&[1, 2, 3]),
        wps(&[1, 1, 2]).image(&m).unwrap(),
        wps(&[1, 1, 2, 2]),
        bundle_over_p1(&TwistVector::new(vec![0, 1, 3])).unwrap(),
        flop_target(3).unwrap(),
    ]
}

fn criterion_8() -> Outcome {
    let fans = triviality_fixtures();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..200 {
        let f = &fans[k % fans.len()];
        let m: Vec<Int> = (0..f.dim()).map(|_| int(rng.gen_range(-5..=5))).collect();
        let d = TorusDivisor::principal(f, &m);
        ensure(is_principal(f, d.coeffs()), || "oracle rejects a principal divisor".into())?;
        ensure(e(numerically_equivalent(f, &d, &TorusDivisor::zero(f.num_rays())))?, || {
            format!("div(χ^{m:?}) not numerically trivial on {:?}", f.name())
        })?;
    }
    let (mut trivial, mut nontrivial) = (0, 0);
    for k in 0..200 {
        let f = &fans[k % fans.len()];
        let r = f.num_rays();
        let d = loop {
            let m: Vec<Int> = (0..f.dim()).map(|_| int(rng.gen_range(-4..=4))).collect();
            let scale = Rat::new(int(rng.gen_range(1..=3)), int(rng.gen_range(1..=3)));
            let mut d = TorusDivisor::principal(f, &m).scale(&scale);
            if rng.gen_bool(0.5) {
                let pic = e(picard_lattice(f))?;
                for b in pic.basis() {
                    d = d.add(&b.scale(&rat(rng.gen_range(-2..=2))));
                }
            }
            if e(cartier_data(f, &d))?.is_q_cartier {
                break d;
            }
        };
        let numerical = e(intersection_numbers(f, &d))?.iter().all(Zero::is_zero);
        let q_linear = is_q_principal(f, d.coeffs());
        let class_free = e(class_group(f))?.project(&d).free_is_zero();
        ensure(numerical == q_linear && q_linear == class_free, || {
            format!("{:?} on {:?}: numerical {numerical}, Q-linear {q_linear}, class {class_free}", d.coeffs(), f.name())
        })?;
        if numerical {
            trivial += 1;
        } else {
            nontrivial += 1;
        }
        debug_assert_eq!(d.len(), r);
    }
    ensure(trivial > 20 && nontrivial > 20, || format!("unbalanced sample: {trivial} trivial, {nontrivial} not"))?;
    Ok(format!("200 principal trivial; 200 Q-Cartier ({trivial} trivial, {nontrivial} not) agree on all routes"))
}

// 9 ------------------------------------------------------------------------

/// `D_i²` from the neighbours `u + w = −D_i² · v_i` of each ray.
fn surface_self_intersections(f: &Fan) -> Vec<Int> {
    (0..f.num_rays())
        .map(|i| {
            let nbrs: Vec<usize> = f
                .max_cones()
                .iter()
                .filter(|c| c.contains(i))
                .flat_map(|c| c.rays().iter().copied().filter(|&j| j != i))
                .collect();
            let s = f.ray(nbrs[0]).add(f.ray(nbrs[1]));
            let v = f.ray(i);
            let j = if v.coords()[0].is_zero() { 1 } else { 0 };
            -(&s.coords()[j] / &v.coords()[j])
        })
        .collect()
}

fn criterion_9() -> Outcome {
    for n in 2..=4 {
        ensure(e(mabuchi_classify(&e(projective_space(n))?))?, || format!("P^{n} rejected"))?;
    }
    let negatives = [
        e(hirzebruch(1))?,
        e(hirzebruch(2))?,
        e(hirzebruch(0))?,
        e(bundle_over_p1(&TwistVector::new(vec![0, 0, 2])))?,
    ];
    for f in &negatives {
        ensure(!e(mabuchi_classify(f))?, || format!("{:?} accepted", f.name()))?;
    }
    let surfaces = e(smooth_complete_surfaces(8, 6))?;
    let mut seen = BTreeSet::new();
    for f in &surfaces {
        ensure(f.is_smooth() && f.is_complete() && f.num_rays() <= 8, || "bad enumerated surface".into())?;
        seen.insert(f.digest());
        let selfint = surface_self_intersections(f);
        for (i, b) in selfint.iter().enumerate() {
            let ample = e(normal_bundle_ample(f, i))?;
            ensure(ample == b.is_positive(), || format!("{:?} ray {i}: D² = {b}, ample = {ample}", f.name()))?;
        }
        let accepted = mabuchi_classify(f).map_err(|e| format!("{:?}: {e}", f.name()))?;
        ensure(accepted == (f.num_rays() == 3), || format!("{:?}: accepted = {accepted}", f.name()))?;
    }
    ensure(seen.len() == surfaces.len(), || "duplicate surfaces".into())?;
    Ok(format!("P^2..P^4 accepted, 4 negatives rejected, {} smooth surfaces (≤ 8 rays) without error", surfaces.len()))
}

// 10 -----------------------------------------------------------------------

/// `(N, K+B nef)` from closed-form intersection theory of each surface.
fn log_oracle(which: usize, b: &[Rat]) -> (Option<Rat>, bool) {
    let c: Vec<Rat> = b.iter().map(|x| Rat::one() - x).collect(); // −(K+B) = Σ c_i D_i
    match which {
        // P^2: all D_i ∼ H, Pic = Z·H, H·line = 1
        0 => {
            let a = &c[0] + &c[1] + &c[2];
            let n = (!a.is_zero()).then(|| a.abs());
            (n, !a.is_positive())
        }
        // F_2 (rays (1,0),(0,1),(−1,2),(0,−1)): D_0 ∼ D_2 = f, D_3 ∼ D_1 + 2f,
        // f² = 0, f·D_1 = 1, D_1² = −2; −(K+B) = a·f + s·D_1
        1 => {
            let a = &c[0] + &c[2] + rat(2) * &c[3];
            let s = &c[1] + &c[3];
            let n = (!(a.is_zero() && s.is_zero())).then(|| rat_content(&[a.clone(), s.clone()]));
            let degrees = [s.clone(), &a - rat(2) * &s, a.clone()];
            (n, degrees.iter().all(|d| !d.is_positive()))
        }
        // P(1,1,2) (rays (1,0),(−1,−2),(0,1)): Cl = Z with classes 1,1,2,
        // Pic = 2Z, and a Cartier generator has degree 1/2·2 on each curve
        _ => {
            let cl = &c[0] + &c[1] + rat(2) * &c[2];
            let a = &cl / rat(2);
            let n = (!a.is_zero()).then(|| a.abs());
            (n, !a.is_positive())
        }
    }
}

fn criterion_10() -> Outcome {
    let fans = [e(projective_space(2))?, e(hirzebruch(2))?, wps(&[1, 1, 2])];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut active = 0;
    for k in 0..200 {
        let which = k % 3;
        let f = &fans[which];
        let b: Vec<Rat> = (0..f.num_rays())
            .map(|_| {
                let q = rng.gen_range(1..=6);
                Rat::new(int(rng.gen_range(0..=q)), int(q))
            })
            .collect();
        let report = e(log_bound_check(f, &TorusDivisor::new(b.clone())))?;
        let (n, nef) = log_oracle(which, &b);
        ensure(report.n == n && report.k_plus_b_nef == Some(nef), || {
            format!("{:?}, B = {b:?}: library (N {:?}, nef {:?}) vs oracle (N {n:?}, nef {nef})", f.name(), report.n, report.k_plus_b_nef)
        })?;
        if let (Some(n), false) = (&n, nef) {
            active += 1;
            ensure(*n <= rat(3), || format!("{:?}, B = {b:?}: N = {n}", f.name()))?;
        }
        ensure(report.bound_holds, || "library reports a violation".into())?;
    }
    ensure(active > 100, || format!("only {active} boundaries with K+B not nef"))?;
    Ok(format!("200 boundaries, {active} with K+B not nef, 0 violations"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("divisibility extremes", criterion_1),
        ("P(1,1,2,...,2) family", criterion_2),
        ("P^1-bundle family", criterion_3),
        ("flop target", criterion_4),
        ("crepant resolution", criterion_5),
        ("long-ray exhaustion", criterion_6),
        ("intersection oracle agreement", criterion_7),
        ("numerical vs linear triviality", criterion_8),
        ("normal bundle criterion", criterion_9),
        ("log bound", criterion_10),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.2}s", 10 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
