//! Hermite and Smith normal forms with unimodular transforms.
//!
//! Row convention throughout: `U * A = H` for the Hermite form, and
//! `left * A * right = D` for the Smith form.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::matrix::{extended_gcd, IntMatrix, Integer};

/// Row Hermite normal form `h` of a matrix together with a unimodular `u`
/// such that `u * A = h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
    /// Pivot column of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

/// Smith normal form `d` with unimodular `left`, `right` such that
/// `left * A * right = d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries `d_1 | d_2 | ...`, including trailing zeros.
    pub fn invariants(&self) -> Vec<Integer> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Row Hermite normal form: positive pivots in strictly increasing columns,
/// entries above each pivot reduced into `[0, pivot)`, zero rows last.
pub fn hnf(a: &IntMatrix) -> HnfResult {
    let (m, n) = a.shape();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        for i in r + 1..m {
            if h[(i, col)].is_zero() {
                continue;
            }
            if !h[(r, col)].is_zero() && h[(i, col)].is_multiple_of(&h[(r, col)]) {
                let q = -(&h[(i, col)] / &h[(r, col)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                continue;
            }
            let (g, x, y) = extended_gcd(&h[(r, col)], &h[(i, col)]);
            let p = &h[(r, col)] / &g;
            let q = &h[(i, col)] / &g;
            let nq = -q;
            h.combine_rows(r, i, [&x, &y, &nq, &p]);
            u.combine_rows(r, i, [&x, &y, &nq, &p]);
        }
        if h[(r, col)].is_zero() {
            continue;
        }
        if h[(r, col)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, col)].div_floor(&h[(r, col)]);
            if !q.is_zero() {
                let nq = -q;
                h.add_row_multiple(i, r, &nq);
                u.add_row_multiple(i, r, &nq);
            }
        }
        pivots.push(col);
        r += 1;
    }
    HnfResult {
        h,
        u,
        rank: r,
        pivots,
    }
}

/// True when `a` already satisfies every row-HNF condition.
pub fn is_hnf(a: &IntMatrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero_row = false;
    for i in 0..a.rows() {
        let row = a.row(i);
        match row.iter().position(|x| !x.is_zero()) {
            None => seen_zero_row = true,
            Some(p) => {
                if seen_zero_row || last_pivot.is_some_and(|lp| p <= lp) {
                    return false;
                }
                if !row[p].is_positive() {
                    return false;
                }
                for k in 0..i {
                    let e = &a[(k, p)];
                    if e.is_negative() || e >= &row[p] {
                        return false;
                    }
                }
                last_pivot = Some(p);
            }
        }
    }
    true
}

/// Smith normal form with transforms.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (m, n) = a.shape();
    let mut d = a.clone();
    let mut left = IntMatrix::identity(m);
    let mut right = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        let Some((pi, pj)) = smallest_entry(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        left.swap_rows(t, pi);
        d.swap_columns(t, pj);
        right.swap_columns(t, pj);
        loop {
            clear_column(&mut d, &mut left, t);
            clear_row(&mut d, &mut right, t);
            if (t + 1..m).any(|i| !d[(i, t)].is_zero()) {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)]))
            });
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, &Integer::one());
                    left.add_row_multiple(t, i, &Integer::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
    }
    SnfResult { d, left, right }
}

fn smallest_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let v = &d[(i, j)];
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn clear_column(d: &mut IntMatrix, left: &mut IntMatrix, t: usize) {
    for i in t + 1..d.rows() {
        if d[(i, t)].is_zero() {
            continue;
        }
        if d[(i, t)].is_multiple_of(&d[(t, t)]) {
            let q = -(&d[(i, t)] / &d[(t, t)]);
            d.add_row_multiple(i, t, &q);
            left.add_row_multiple(i, t, &q);
        } else {
            let (g, x, y) = extended_gcd(&d[(t, t)], &d[(i, t)]);
            let p = &d[(t, t)] / &g;
            let nq = -(&d[(i, t)] / &g);
            d.combine_rows(t, i, [&x, &y, &nq, &p]);
            left.combine_rows(t, i, [&x, &y, &nq, &p]);
        }
    }
}

fn clear_row(d: &mut IntMatrix, right: &mut IntMatrix, t: usize) {
    for j in t + 1..d.cols() {
        if d[(t, j)].is_zero() {
            continue;
        }
        if d[(t, j)].is_multiple_of(&d[(t, t)]) {
            let q = -(&d[(t, j)] / &d[(t, t)]);
            d.add_column_multiple(j, t, &q);
            right.add_column_multiple(j, t, &q);
        } else {
            let (g, x, y) = extended_gcd(&d[(t, t)], &d[(t, j)]);
            let p = &d[(t, t)] / &g;
            let nq = -(&d[(t, j)] / &g);
            d.combine_columns(t, j, [&x, &y, &nq, &p]);
            right.combine_columns(t, j, [&x, &y, &nq, &p]);
        }
    }
}
