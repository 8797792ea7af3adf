//! Gale duality and the fan-matrix / weight-matrix predicates.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, FCondition, Result, WCondition};
use crate::lattice::{kernel_saturation, Lattice};
use crate::matrix::{IntMatrix, Integer};
use crate::normal_forms::hnf;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMatrixReport {
    pub is_f: bool,
    pub is_cf: bool,
    pub is_reduced: bool,
    /// Failed conditions among (a)-(d), followed by (e) when the column
    /// lattice has cotorsion.
    pub failed: Vec<FCondition>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WMatrixReport {
    pub is_w: bool,
    /// Whether the Gale dual is a reduced F-matrix.
    pub is_reduced: bool,
    pub failed: Vec<WCondition>,
}

/// A basis (in canonical HNF) of the saturated integer kernel of `a`.
///
/// For an `n x (n+r)` fan matrix this is an `r x (n+r)` weight matrix, and
/// conversely.
pub fn gale_dual(a: &IntMatrix) -> Result<IntMatrix> {
    let rank = a.rank();
    if rank < a.rows() {
        return Err(Error::RankDeficient {
            rank,
            rows: a.rows(),
        });
    }
    Ok(kernel_saturation(a).into_basis())
}

fn check_wide(a: &IntMatrix) -> Result<()> {
    if a.rows() == 0 || a.rows() >= a.cols() {
        return Err(Error::Shape(format!(
            "expected a k x m matrix with 0 < k < m, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

fn zero_columns(a: &IntMatrix) -> Vec<usize> {
    (0..a.cols())
        .filter(|&j| (0..a.rows()).all(|i| a[(i, j)].is_zero()))
        .collect()
}

/// Decides `<columns of a> = R^k` exactly, `k = a.rows()`.
///
/// If the cone were proper it would have a facet spanned by `k - 1`
/// independent columns with all columns weakly on one side of it.
pub fn positively_spans(a: &IntMatrix) -> bool {
    let k = a.rows();
    if a.rank() < k {
        return false;
    }
    if k == 0 {
        return true;
    }
    let cols: Vec<usize> = (0..a.cols()).collect();
    for face in combinations(&cols, k - 1) {
        let normal = hyperplane_normal(&a.select_columns(&face));
        let Some(normal) = normal else { continue };
        let mut pos = false;
        let mut neg = false;
        for j in 0..a.cols() {
            let s = dot(&normal, &a.column(j));
            pos |= s.is_positive();
            neg |= s.is_negative();
        }
        if !(pos && neg) {
            return false;
        }
    }
    true
}

/// Normal `c` of the hyperplane spanned by the `k-1` columns of `face`
/// (`c·x = det[face | x]`), or `None` when the columns are dependent.
pub(crate) fn hyperplane_normal(face: &IntMatrix) -> Option<Vec<Integer>> {
    let k = face.rows();
    let mut normal = Vec::with_capacity(k);
    for i in 0..k {
        let mut e = IntMatrix::zeros(k, 1);
        e[(i, 0)] = Integer::one();
        normal.push(face.hstack(&e).ok()?.det().ok()?);
    }
    if normal.iter().all(Zero::is_zero) {
        None
    } else {
        Some(normal)
    }
}

pub(crate) fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// All `k`-element subsets of `items` in lexicographic order.
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(items, k, 0, &mut current, &mut out);
    out
}

fn positively_proportional(u: &[Integer], v: &[Integer]) -> bool {
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if &u[i] * &v[j] != &u[j] * &v[i] {
                return false;
            }
        }
    }
    dot(u, v).is_positive()
}

/// True when the HNF of `a^T` is `[I; 0]`, i.e. the columns of `a` span `Z^k`.
pub fn columns_span_lattice(a: &IntMatrix) -> bool {
    let k = a.rows();
    let h = hnf(&a.transpose()).h;
    let mut expected = IntMatrix::identity(k);
    if a.cols() > k {
        expected = expected.vstack(&IntMatrix::zeros(a.cols() - k, k)).unwrap();
    }
    a.cols() >= k && h == expected
}

/// Gcd of all maximal (`k x k`) minors of a `k x m` matrix.
pub fn maximal_minors_gcd(a: &IntMatrix) -> Integer {
    let cols: Vec<usize> = (0..a.cols()).collect();
    combinations(&cols, a.rows())
        .into_iter()
        .fold(Integer::zero(), |g, c| {
            g.gcd(&a.select_columns(&c).det().expect("square"))
        })
}

pub fn classify_f(v: &IntMatrix) -> Result<FMatrixReport> {
    check_wide(v)?;
    let n = v.rows();
    let mut failed = Vec::new();
    if v.rank() < n {
        failed.push(FCondition::A);
    }
    if !positively_spans(v) {
        failed.push(FCondition::B);
    }
    let zeros = zero_columns(v);
    if !zeros.is_empty() {
        failed.push(FCondition::C);
    }
    let columns: Vec<Vec<Integer>> = (0..v.cols()).map(|j| v.column(j)).collect();
    let proportional = (0..columns.len()).any(|i| {
        (i + 1..columns.len()).any(|j| positively_proportional(&columns[i], &columns[j]))
    });
    if proportional {
        failed.push(FCondition::D);
    }
    let is_f = failed.is_empty();
    if !columns_span_lattice(v) {
        failed.push(FCondition::E);
    }
    let is_cf = is_f && !failed.contains(&FCondition::E);
    let is_reduced = v.column_gcds().iter().all(One::is_one);
    Ok(FMatrixReport {
        is_f,
        is_cf,
        is_reduced,
        failed,
    })
}

/// Rejects anything that is not a reduced F-matrix.
pub fn require_reduced_f(v: &IntMatrix) -> Result<FMatrixReport> {
    let report = classify_f(v)?;
    if !report.is_f {
        let failed = report
            .failed
            .iter()
            .copied()
            .filter(|c| *c != FCondition::E)
            .collect();
        return Err(Error::NotFMatrix(failed));
    }
    if let Some(j) = v.column_gcds().iter().position(|g| !g.is_one()) {
        return Err(Error::NotReduced(j));
    }
    Ok(report)
}

/// The sublattice of `L_r(q)` of vectors supported on `support`, written in
/// the coordinates of `support`.
fn support_lattice(q: &IntMatrix, support: &[usize]) -> Lattice {
    let rest = q.complement_columns(support);
    let coefficients = kernel_saturation(&rest.transpose());
    Lattice::from_rows(&(coefficients.basis() * &q.select_columns(support)))
}

pub fn classify_w(q: &IntMatrix) -> Result<WMatrixReport> {
    check_wide(q)?;
    let r = q.rows();
    let m = q.cols();
    let mut failed = Vec::new();
    if q.rank() < r {
        failed.push(WCondition::A);
    }
    if !Lattice::from_rows(q).is_saturated() {
        failed.push(WCondition::B);
    }
    let dual = kernel_saturation(q).into_basis();
    if !positively_spans(&dual) {
        failed.push(WCondition::C);
    }
    if !zero_columns(q).is_empty() {
        failed.push(WCondition::D);
    }
    let unit = (0..m).any(|j| {
        let l = support_lattice(q, &[j]);
        l.rank() == 1 && l.basis()[(0, 0)].is_one()
    });
    if unit {
        failed.push(WCondition::E);
    }
    let mixed_pair = (0..m).any(|i| {
        (i + 1..m).any(|j| {
            let l = support_lattice(q, &[i, j]);
            match l.rank() {
                // a full-rank sublattice of Z^2 contains (k, -k) for its index k
                2 => true,
                1 => (&l.basis()[(0, 0)] * &l.basis()[(0, 1)]).is_negative(),
                _ => false,
            }
        })
    });
    if mixed_pair {
        failed.push(WCondition::F);
    }
    let is_reduced = dual.rows() > 0 && dual.column_gcds().iter().all(One::is_one);
    Ok(WMatrixReport {
        is_w: failed.is_empty(),
        is_reduced,
        failed,
    })
}

pub fn require_w(q: &IntMatrix) -> Result<WMatrixReport> {
    let report = classify_w(q)?;
    if !report.is_w {
        return Err(Error::NotWMatrix(report.failed));
    }
    Ok(report)
}

/// Divides every column by the gcd of its entries.
pub fn reduce_f(v: &IntMatrix) -> Result<IntMatrix> {
    let gcds = v.column_gcds();
    if let Some(j) = gcds.iter().position(Zero::is_zero) {
        return Err(Error::ZeroColumn(j));
    }
    let mut out = v.clone();
    for (j, g) in gcds.iter().enumerate() {
        for i in 0..v.rows() {
            out[(i, j)] = &v[(i, j)] / g;
        }
    }
    Ok(out)
}
