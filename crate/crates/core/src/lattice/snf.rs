use num_traits::{One, Signed, Zero};

use super::{abs_int, Int, IntMatrix};

/// `u · m · v = s` with `s` diagonal, `d_1 | d_2 | ⋯`, all `d_i ≥ 0`, and
/// `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The `min(rows, cols)` diagonal entries of `s`.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Number of nonzero elementary divisors; they always come first.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

/// Smith normal form by repeated elimination, always pivoting on the
/// nonzero entry of smallest absolute value in the remaining block. That
/// choice keeps entries of `u` and `v` small on the lattice-sized inputs
/// this crate deals with.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = min_pivot(&s, t) else {
                return SmithForm { s, u, v };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if !s[(i, t)].is_zero() {
                    let q = -(&s[(i, t)] / &s[(t, t)]);
                    s.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    clean &= s[(i, t)].is_zero();
                }
            }
            for j in t + 1..c {
                if !s[(t, j)].is_zero() {
                    let q = -(&s[(t, j)] / &s[(t, t)]);
                    s.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    clean &= s[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let p = s[(t, t)].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(&s[(i, j)] % &p).is_zero()));
            match bad {
                Some(i) => {
                    s.add_row_multiple(t, i, &Int::one());
                    u.add_row_multiple(t, i, &Int::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { s, u, v }
}

fn min_pivot(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, Int)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let a = abs_int(&s[(i, j)]);
            if a.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| &a < b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}
