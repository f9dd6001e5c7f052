//! Exact rational linear feasibility.
//!
//! Dense two-phase-style simplex (only phase I is needed here) over
//! [`Rat`], with Bland's rule so that degenerate pivots cannot cycle.
//! Problem sizes in this crate are a few dozen variables at most.

use num_traits::{One, Signed, Zero};

use super::Rat;

/// Finds `x ≥ 0` with `a·x = b`, or `None` if the system is infeasible.
pub fn feasible_nonneg(a: &[Vec<Rat>], b: &[Rat], nvars: usize) -> Option<Vec<Rat>> {
    let m = a.len();
    assert_eq!(m, b.len(), "dimension mismatch");
    if m == 0 {
        return Some(vec![Rat::zero(); nvars]);
    }
    let width = nvars + m + 1;
    let rhs = width - 1;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m + 1);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), nvars, "dimension mismatch");
        let flip = bi.is_negative();
        let mut r = vec![Rat::zero(); width];
        for (j, x) in row.iter().enumerate() {
            r[j] = if flip { -x.clone() } else { x.clone() };
        }
        r[nvars + i] = Rat::one();
        r[rhs] = if flip { -bi.clone() } else { bi.clone() };
        t.push(r);
    }
    // reduced costs of "minimise the sum of artificials"
    let mut cost = vec![Rat::zero(); width];
    for r in &t {
        for j in 0..nvars {
            cost[j] -= &r[j];
        }
        cost[rhs] -= &r[rhs];
    }
    t.push(cost);
    let mut basis: Vec<usize> = (nvars..nvars + m).collect();

    while let Some(enter) = (0..width - 1).find(|&j| t[m][j].is_negative()) {
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][rhs] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // phase I objective is bounded below by 0, so a leaving row always exists
        let (p, _) = leave.expect("unbounded phase-I objective");
        pivot(&mut t, p, enter);
        basis[p] = enter;
    }

    if !t[m][rhs].is_zero() {
        return None;
    }
    let mut x = vec![Rat::zero(); nvars];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < nvars {
            x[bv] = t[i][rhs].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rat>], p: usize, q: usize) {
    let inv = t[p][q].recip();
    for x in t[p].iter_mut() {
        *x = &*x * &inv;
    }
    let prow = t[p].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == p || row[q].is_zero() {
            continue;
        }
        let f = row[q].clone();
        for (x, y) in row.iter_mut().zip(&prow) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
}

/// A point `x ∈ Q^nvars` (free variables) satisfying `eq·x = c` for every
/// equation and `ge·x ≥ c` for every inequality.
pub fn find_point(nvars: usize, eqs: &[(Vec<Rat>, Rat)], ges: &[(Vec<Rat>, Rat)]) -> Option<Vec<Rat>> {
    let slack = ges.len();
    let total = 2 * nvars + slack;
    let mut a = Vec::with_capacity(eqs.len() + ges.len());
    let mut b = Vec::with_capacity(eqs.len() + ges.len());
    let split = |row: &[Rat]| {
        let mut r = vec![Rat::zero(); total];
        for (j, x) in row.iter().enumerate() {
            r[j] = x.clone();
            r[nvars + j] = -x.clone();
        }
        r
    };
    for (row, c) in eqs {
        a.push(split(row));
        b.push(c.clone());
    }
    for (k, (row, c)) in ges.iter().enumerate() {
        let mut r = split(row);
        r[2 * nvars + k] = -Rat::one();
        a.push(r);
        b.push(c.clone());
    }
    let x = feasible_nonneg(&a, &b, total)?;
    Some((0..nvars).map(|j| &x[j] - &x[nvars + j]).collect())
}

/// Nonnegative coefficients `λ` with `Σ λ_j generators[j] = target`, if any.
pub fn cone_combination(generators: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let dim = target.len();
    let a: Vec<Vec<Rat>> = (0..dim).map(|i| generators.iter().map(|g| g[i].clone()).collect()).collect();
    feasible_nonneg(&a, target, generators.len())
}

pub fn in_cone(generators: &[Vec<Rat>], target: &[Rat]) -> bool {
    cone_combination(generators, target).is_some()
}
