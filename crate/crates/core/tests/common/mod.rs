//! Fixtures, generators and brute-force oracles shared by the integration
//! tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use torifactor::covering::TorsionMatrix;
use torifactor::divisors::weight_switching_matrix;
use torifactor::gale::{classify_f, reduce_f};
use torifactor::normal_forms::{hnf, is_hnf, snf};
use torifactor::*;

pub fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(rows.iter().map(|r| r.iter().copied()))
}

pub fn ints(xs: &[i64]) -> Vec<Integer> {
    xs.iter().map(|&x| Integer::from(x)).collect()
}

// ---------------------------------------------------------------------------
// fake weighted projective space of dimension 3

pub fn fake_p3_v() -> IntMatrix {
    m(&[&[1, 0, 1, -2], &[0, 1, -3, 2], &[0, 0, 5, -5]])
}

pub fn fake_p3_q() -> IntMatrix {
    m(&[&[1, 1, 1, 1]])
}

pub fn fake_p3_u_q() -> IntMatrix {
    m(&[&[1, 0, 0, 0], &[1, 0, 1, -2], &[0, 1, -3, 2], &[0, 0, 1, -1]])
}

pub fn fake_p3_v_hat() -> IntMatrix {
    fake_p3_u_q().bottom_rows(3)
}

pub fn fake_p3_gamma() -> TorsionMatrix {
    TorsionMatrix::new(ints(&[5]), m(&[&[4, 3, 1, 0]])).unwrap()
}

pub fn fake_p3_c_x() -> IntMatrix {
    m(&[&[1, 0, 0, 0], &[1, 0, 1, -2], &[0, 1, -3, 2], &[0, 0, 5, -5]])
}

pub fn fake_p3_quotient_gamma() -> TorsionMatrix {
    TorsionMatrix::new(ints(&[5]), m(&[&[1, 2, 3, 4]])).unwrap()
}

pub fn fake_p3_quotient_k() -> IntMatrix {
    m(&[&[-4], &[1], &[-1], &[5]])
}

pub fn fake_p3_quotient_beta() -> IntMatrix {
    m(&[&[1, 4, 0], &[0, 1, 1], &[2, 3, 0]])
}

pub fn fake_p3_quotient_v() -> IntMatrix {
    m(&[&[1, 4, -11, 6], &[0, 1, -2, 1], &[2, 3, -7, 2]])
}

pub fn fake_p3_quotient_r() -> IntMatrix {
    m(&[&[1, -11, -6], &[0, -2, -1], &[2, -7, -4]])
}

// ---------------------------------------------------------------------------
// the rank 2 fourfold with torsion Z/3 + Z/15

pub fn fourfold_v() -> IntMatrix {
    m(&[
        &[18, -21, -9, 333, -492, 120],
        &[-3, 8, 4, -14, 13, -4],
        &[-23, 33, 14, -404, 588, -144],
        &[-20, 26, 12, -337, 493, -121],
    ])
}

pub fn fourfold_q() -> IntMatrix {
    m(&[&[2, 4, 1, 5, 4, 3], &[1, 1, 3, 2, 3, 7]])
}

pub fn fourfold_u_q() -> IntMatrix {
    m(&[
        &[5, -2, -1, 0, 0, 0],
        &[2, -1, 0, 0, 0, 0],
        &[11, -5, -2, 0, 0, 0],
        &[4, -3, -1, 1, 0, 0],
        &[7, -4, -2, 0, 1, 0],
        &[15, -7, -5, 0, 0, 1],
    ])
}

pub fn fourfold_v_hat() -> IntMatrix {
    fourfold_u_q().bottom_rows(4)
}

pub fn fourfold_h_hat() -> IntMatrix {
    m(&[
        &[1, 0, 0, 16, -25, 6],
        &[0, 1, 0, 7, -12, 3],
        &[0, 0, 1, 4, -6, 1],
        &[0, 0, 0, 19, -29, 7],
    ])
}

pub fn fourfold_h() -> IntMatrix {
    m(&[
        &[1, 0, 2, 100, -153, 36],
        &[0, 1, 2, 53, -82, 19],
        &[0, 0, 3, 69, -105, 24],
        &[0, 0, 0, 285, -435, 105],
    ])
}

pub fn fourfold_beta_h() -> IntMatrix {
    m(&[&[1, 0, 2, 4], &[0, 1, 2, 2], &[0, 0, 3, 3], &[0, 0, 0, 15]])
}

pub fn fourfold_beta() -> IntMatrix {
    m(&[
        &[30, 333, -492, 120],
        &[2, -14, 13, -4],
        &[-33, -404, 588, -144],
        &[-28, -337, 493, -121],
    ])
}

pub fn fourfold_mu() -> IntMatrix {
    m(&[
        &[1410, -1138, 551, 780],
        &[1140, -916, 420, 661],
        &[-1623, 1304, -598, -941],
        &[8425, -6769, 3104, 4885],
    ])
}

pub fn fourfold_nu() -> IntMatrix {
    m(&[
        &[1, 58, 2224, 2022],
        &[0, 1, 27, 24],
        &[0, 0, 1, 1],
        &[0, -2, -78, -71],
    ])
}

pub fn fourfold_v_hat_prime() -> IntMatrix {
    m(&[
        &[521, -251, -168, -2, 14, 28],
        &[388, -222, -112, 7, 45, 3],
        &[-184, 105, 53, -2, -23, -1],
        &[191, -109, -55, 2, 24, 1],
    ])
}

pub fn fourfold_v_prime() -> IntMatrix {
    m(&[
        &[521, -251, -168, -2, 14, 28],
        &[388, -222, -112, 7, 45, 3],
        &[-552, 315, 159, -6, -69, -3],
        &[2865, -1635, -825, 30, 360, 15],
    ])
}

pub fn fourfold_torsion_generators() -> IntMatrix {
    fourfold_v_hat_prime().bottom_rows(2)
}

pub fn fourfold_gamma() -> TorsionMatrix {
    TorsionMatrix::new(
        ints(&[3, 15]),
        m(&[&[1, 1, 1, 0, 0, 0], &[8, 8, 3, 4, 13, 0]]),
    )
    .unwrap()
}

pub fn fourfold_picard_bases() -> Vec<IntMatrix> {
    vec![
        m(&[&[5909475, 0], &[-238040, 165]]),
        m(&[&[5805800, 0], &[-4648596, 1]]),
        m(&[&[5805800, 0], &[-217580, 55]]),
    ]
}

pub fn fourfold_cartier_first() -> IntMatrix {
    m(&[
        &[29547375, -11818950, -5909475, 0, 0, 0],
        &[-1189870, 475915, 238040, 0, 0, 0],
        &[18, -21, -9, 333, -492, 120],
        &[-3, 8, 4, -14, 13, -4],
        &[-23, 33, 14, -404, 588, -144],
        &[-20, 26, 12, -337, 493, -121],
    ])
}

// ---------------------------------------------------------------------------
// reconstruction of the fourfold from its quotient data

pub fn fourfold_quotient_k() -> IntMatrix {
    m(&[&[4, 42], &[0, 9], &[1, 31], &[3, 49], &[3, 0], &[0, 15]])
}

pub fn fourfold_quotient_beta() -> IntMatrix {
    m(&[
        &[-9, -82, 36, 0],
        &[-8, -68, 29, 1],
        &[-3, -17, 9, 0],
        &[-3, -29, 12, 0],
    ])
}

pub fn fourfold_quotient_v() -> IntMatrix {
    m(&[
        &[-175, 147, 28, -82, 36, 0],
        &[-142, 121, 21, -68, 29, 1],
        &[-38, 30, 5, -17, 9, 0],
        &[-65, 54, 11, -29, 12, 0],
    ])
}

pub fn fourfold_quotient_r() -> IntMatrix {
    m(&[
        &[-646, 512, -203, -416],
        &[-533, 422, -166, -345],
        &[-143, 113, -45, -92],
        &[-237, 188, -75, -152],
    ])
}

pub fn fourfold_quotient_presentation() -> QuotientPresentation {
    QuotientPresentation::new(fourfold_q(), fourfold_gamma())
        .unwrap()
        .with_covering(fourfold_v_hat())
        .unwrap()
}

// ---------------------------------------------------------------------------
// generators

/// Reduced F-matrices with `n <= 4`, `n + r <= 7` and small entries.
///
/// The last column is minus the sum of the others, so the columns always
/// admit a strictly positive linear dependency.
pub fn f_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4)
        .prop_flat_map(|n| (Just(n), 1usize..=(7 - n)))
        .prop_flat_map(|(n, r)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, n + r - 1), n)
                .prop_map(move |rows| (n, r, rows))
        })
        .prop_filter_map("not a reduced F-matrix", |(_, _, rows)| {
            let full: Vec<Vec<i64>> = rows
                .into_iter()
                .map(|mut row| {
                    let s: i64 = row.iter().sum();
                    row.push(-s);
                    row
                })
                .collect();
            let v = reduce_f(&IntMatrix::from_rows(full)).ok()?;
            classify_f(&v).ok()?.is_f.then_some(v)
        })
}

/// F-matrices with a good share of non-trivial cotorsion: a random CF-style
/// matrix multiplied on the left by a small upper triangular matrix.
pub fn mixed_f_matrix() -> impl Strategy<Value = IntMatrix> {
    (f_matrix(), proptest::collection::vec(-2i64..=2, 16), proptest::collection::vec(1i64..=3, 4))
        .prop_filter_map("not a reduced F-matrix", |(v, off, diag)| {
            let n = v.rows();
            let mut t = IntMatrix::identity(n);
            for i in 0..n {
                t[(i, i)] = diag[i].into();
                for j in i + 1..n {
                    t[(i, j)] = off[i * 4 + j].into();
                }
            }
            let w = reduce_f(&(&t * &v)).ok()?;
            classify_f(&w).ok()?.is_f.then_some(w)
        })
}

/// Arbitrary small integer matrices.
pub fn int_matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-bound..=bound, c), r)
            .prop_map(IntMatrix::from_rows)
    })
}

// ---------------------------------------------------------------------------
// invariant checks returning a description of the first violation

pub type Check = std::result::Result<(), String>;

pub fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

pub fn check_hnf(a: &IntMatrix) -> Check {
    let r = hnf(a);
    ensure(&r.u * a == r.h, || format!("U·A != H for {a}"))?;
    ensure(r.u.is_unimodular(), || format!("HNF transform not unimodular for {a}"))?;
    ensure(is_hnf(&r.h), || format!("not in HNF: {}", r.h))?;
    ensure(hnf(&r.h).h == r.h, || "HNF not idempotent".into())
}

pub fn check_snf(a: &IntMatrix) -> Check {
    let s = snf(a);
    ensure(&(&s.left * a) * &s.right == s.d, || format!("left·A·right != D for {a}"))?;
    ensure(s.left.is_unimodular() && s.right.is_unimodular(), || {
        format!("SNF transforms not unimodular for {a}")
    })?;
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            ensure(i == j || s.d[(i, j)].is_zero(), || format!("D not diagonal: {}", s.d))?;
        }
    }
    let diag = s.invariants();
    ensure(diag.iter().all(|x| !x.is_negative()), || "negative invariant".into())?;
    for w in diag.windows(2) {
        ensure(
            if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) },
            || format!("invariants not a divisibility chain: {diag:?}"),
        )?;
    }
    Ok(())
}

pub fn check_gale(v: &IntMatrix) -> Check {
    let q = gale_dual(v).map_err(|e| e.to_string())?;
    ensure(q.rows() == v.cols() - v.rows(), || "wrong Gale dual size".into())?;
    ensure((&q * &v.transpose()).is_zero(), || format!("Q·Vᵀ != 0 for {v}"))?;
    let v_hat = gale_dual(&q).map_err(|e| e.to_string())?;
    let report = classify_f(&v_hat).map_err(|e| e.to_string())?;
    ensure(report.is_cf, || format!("G(G(V)) is not CF for {v}"))
}

/// Covering, torsion and Γ invariants for a reduced F-matrix.
pub fn check_covering(v: &IntMatrix) -> Check {
    let cd = covering_decomposition(v).map_err(|e| e.to_string())?;
    ensure(&cd.beta * &cd.v_hat == *v, || "β·V̂ != V".into())?;
    ensure(&(&cd.mu * &cd.beta) * &cd.nu == cd.delta, || "μ·β·ν != Δ".into())?;
    ensure(&cd.delta * &cd.v_hat_aligned == cd.v_aligned, || "V′ != Δ·V̂′".into())?;
    let det = cd.beta.det().map_err(|e| e.to_string())?.abs();
    ensure(det == cd.torsion_order(), || {
        format!("|det β| = {det} but torsion order {}", cd.torsion_order())
    })?;
    // the torsion order is also the index of L_r(V) in its saturation
    let lattice = Lattice::from_rows(v);
    let sat = lattice.saturation();
    let index = index_in(&lattice, &sat);
    ensure(index == det, || format!("saturation index {index} != |det β| {det}"))?;
    let gens = torsion_generators(&cd);
    let n = v.rows();
    let s = cd.s();
    for k in 0..s {
        let tau = &cd.torsion_invariants[k];
        let scaled: Vec<Integer> = gens.row(k).iter().map(|x| x * tau).collect();
        ensure(scaled.as_slice() == cd.v_aligned.row(n - s + k), || {
            "torsion generator is not an aligned row divided by τ".into()
        })?;
    }
    let gamma = torsion_matrix(&cd).map_err(|e| e.to_string())?;
    ensure(gamma.annihilates(&cd.v_aligned).unwrap(), || "Γ·V′ᵀ ≢ 0".into())?;
    ensure(s == 0 || gamma.is_dual_to(&gens).unwrap(), || "Γ·(_sV̂′)ᵀ ≢ I".into())?;
    ensure(gamma.annihilates(v).unwrap(), || "Γ·Vᵀ ≢ 0".into())
}

/// Index of a full-rank sublattice `a` of `b` (same rank).
pub fn index_in(a: &Lattice, b: &Lattice) -> Integer {
    let da = gram_volume(a.basis());
    let db = gram_volume(b.basis());
    let (q, r) = da.div_rem(&db);
    assert!(r.is_zero());
    num_integer::Roots::sqrt(&q)
}

fn gram_volume(b: &IntMatrix) -> Integer {
    if b.rows() == 0 {
        return Integer::one();
    }
    (b * &b.transpose()).det().unwrap()
}

/// `δ_Σ | [F : Pic] | |det C_X|` for every fan.
pub fn check_divisibility_chain(v: &IntMatrix) -> Check {
    let cd = covering_decomposition(v).map_err(|e| e.to_string())?;
    let q = gale_dual(v).map_err(|e| e.to_string())?;
    let u_q = weight_switching_matrix(&q, Some(&cd.v_hat)).map_err(|e| e.to_string())?;
    let fans = enumerate_fans(v).map_err(|e| e.to_string())?;
    ensure(!fans.is_empty(), || format!("no fans over {v}"))?;
    for fan in &fans {
        let p = picard_basis(&q, &picard_index_sets(fan)).map_err(|e| e.to_string())?;
        let c_x = cartier_basis(&p.b, &u_q, &cd.beta).map_err(|e| e.to_string())?;
        let det_c = c_x.det().map_err(|e| e.to_string())?.abs();
        ensure(p.index.is_multiple_of(&p.delta_sigma), || "δ_Σ ∤ [F:Pic]".into())?;
        ensure(det_c.is_multiple_of(&p.index), || "[F:Pic] ∤ |det C_X|".into())?;
        ensure(det_c == &p.index * cd.torsion_order(), || {
            "|det C_X| != |det B|·|det β|".into()
        })?;
        ensure(c_x.bottom_rows(v.rows()) == *v, || "lower rows of C_X differ from V".into())?;
        for set in &picard_index_sets(fan).sets {
            let q_i = Lattice::from_columns(&q.select_columns(set));
            ensure(
                p.b.row_iter().all(|r| q_i.contains(r)),
                || "Picard basis outside L_c(Q_I)".into(),
            )?;
        }
    }
    Ok(())
}

/// `V → (Q, Γ) → V′` recovers `V` up to equivalence.
pub fn check_round_trip(v: &IntMatrix) -> Check {
    let cd = covering_decomposition(v).map_err(|e| e.to_string())?;
    let gamma = torsion_matrix(&cd).map_err(|e| e.to_string())?;
    let q = gale_dual(v).map_err(|e| e.to_string())?;
    let p = QuotientPresentation::new(q.clone(), gamma.clone()).map_err(|e| e.to_string())?;
    let rebuilt = reconstruct_fan_matrix(&p).map_err(|e| e.to_string())?;
    ensure((&rebuilt * &q.transpose()).is_zero(), || "V′·Qᵀ != 0".into())?;
    ensure(gamma.annihilates(&rebuilt).unwrap(), || "V′·Γᵀ ≢ 0".into())?;
    let w = fan_matrix_equivalence(v, &rebuilt).map_err(|e| e.to_string())?;
    let w = w.ok_or_else(|| format!("round trip of {v} gave inequivalent {rebuilt}"))?;
    ensure(w.verify(v, &rebuilt), || "equivalence witness does not verify".into())
}

/// Items 2-4 of the characterisation of 1-connected coverings.
pub fn check_cf_equivalence(v: &IntMatrix) -> Check {
    let cd = covering_decomposition(v).map_err(|e| e.to_string())?;
    let trivial_torsion = cd.torsion_invariants.is_empty();
    let coprime_minors = torifactor::gale::maximal_minors_gcd(v).abs().is_one();
    let spans = torifactor::gale::columns_span_lattice(v);
    ensure(trivial_torsion == coprime_minors && coprime_minors == spans, || {
        format!(
            "disagreement for {v}: torsion trivial {trivial_torsion}, coprime minors {coprime_minors}, HNF(Vᵀ) = [I;0] {spans}"
        )
    })
}

// ---------------------------------------------------------------------------
// brute-force oracles over the rationals, independent of the library

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frac {
    num: i128,
    den: i128,
}

impl Frac {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0);
        let g = num.gcd(&den);
        let s = if den < 0 { -1 } else { 1 };
        Frac {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub fn int(x: i128) -> Self {
        Frac { num: x, den: 1 }
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }

    fn sub(self, o: Frac) -> Frac {
        Frac::new(self.num * o.den - o.num * self.den, self.den * o.den)
    }

    fn mul(self, o: Frac) -> Frac {
        Frac::new(self.num * o.num, self.den * o.den)
    }

    fn div(self, o: Frac) -> Frac {
        Frac::new(self.num * o.den, self.den * o.num)
    }
}

/// Row-reduces `a` over Q in place, returning the pivot columns.
fn rref(a: &mut [Vec<Frac>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pv = a[r][c];
        for x in a[r].iter_mut() {
            *x = x.div(pv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                let pivot_row = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                    *x = x.sub(p.mul(f));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn to_small(a: &IntMatrix) -> Vec<Vec<i64>> {
    a.to_rows()
        .into_iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("small entry")).collect())
        .collect()
}

pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<Frac>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Frac::int(x as i128)).collect())
        .collect();
    rref(&mut a).len()
}

/// Whether `x` is an integer combination of the independent rows `basis`.
pub fn in_row_lattice(basis: &[Vec<i64>], x: &[i64]) -> bool {
    let k = basis.len();
    let m = x.len();
    if k == 0 {
        return x.iter().all(|&v| v == 0);
    }
    // solve c·B = x through the system Bᵀ cᵀ = xᵀ
    let mut a: Vec<Vec<Frac>> = (0..m)
        .map(|j| {
            let mut row: Vec<Frac> = (0..k).map(|i| Frac::int(basis[i][j] as i128)).collect();
            row.push(Frac::int(x[j] as i128));
            row
        })
        .collect();
    let pivots = rref(&mut a);
    if pivots.contains(&k) {
        return false;
    }
    // independent rows: every coefficient is a pivot variable
    (0..pivots.len()).all(|i| a[i][k].is_integer())
}

/// All integer vectors of `[-bound, bound]^m`.
pub fn box_points(m: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-bound..=bound).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn big(xs: &[i64]) -> Vec<BigInt> {
    ints(xs)
}

/// Lattices with independent small bases in `Z^m`, `m <= 3`.
pub fn small_basis(m: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=m)
        .prop_flat_map(move |k| {
            proptest::collection::vec(proptest::collection::vec(-4i64..=4, m), k)
        })
        .prop_filter("dependent rows", |rows| rational_rank(rows) == rows.len())
}

pub fn kernel_oracle(a: &[Vec<i64>], bound: i64) -> Check {
    let mat = IntMatrix::from_rows(a.to_vec());
    let m = mat.cols();
    let kernel = kernel_saturation(&mat);
    let basis = to_small(kernel.basis());
    ensure(kernel.rank() == m - rational_rank(a), || {
        format!("kernel rank {} for {mat}", kernel.rank())
    })?;
    for b in &basis {
        ensure(
            a.iter().all(|row| row.iter().zip(b).map(|(x, y)| x * y).sum::<i64>() == 0),
            || format!("basis vector {b:?} not in the kernel of {mat}"),
        )?;
    }
    for x in box_points(m, bound) {
        let in_kernel = a
            .iter()
            .all(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum::<i64>() == 0);
        ensure(in_kernel == in_row_lattice(&basis, &x), || {
            format!("kernel of {mat} disagrees with enumeration at {x:?}")
        })?;
        ensure(in_kernel == kernel.contains(&big(&x)), || {
            format!("membership in kernel of {mat} wrong at {x:?}")
        })?;
    }
    Ok(())
}

pub fn intersection_oracle(a: &[Vec<i64>], b: &[Vec<i64>], bound: i64) -> Check {
    let la = Lattice::from_rows(&IntMatrix::from_rows(a.to_vec()));
    let lb = Lattice::from_rows(&IntMatrix::from_rows(b.to_vec()));
    let meet = lattice_intersection(&la, &lb).map_err(|e| e.to_string())?;
    let basis = to_small(meet.basis());
    let m = a[0].len();
    let mut both: Vec<Vec<i64>> = a.to_vec();
    both.extend(b.iter().cloned());
    let expected_rank = a.len() + b.len() - rational_rank(&both);
    ensure(meet.rank() == expected_rank, || {
        format!("intersection rank {} expected {expected_rank}", meet.rank())
    })?;
    for v in &basis {
        ensure(in_row_lattice(a, v) && in_row_lattice(b, v), || {
            format!("basis vector {v:?} escapes one of the lattices")
        })?;
    }
    for x in box_points(m, bound) {
        let expected = in_row_lattice(a, &x) && in_row_lattice(b, &x);
        ensure(expected == in_row_lattice(&basis, &x), || {
            format!("intersection disagrees with enumeration at {x:?}")
        })?;
    }
    Ok(())
}
