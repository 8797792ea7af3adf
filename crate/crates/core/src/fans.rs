//! Complete simplicial fans over a fan matrix.
//!
//! A fan is described by its maximal cones, each a sorted list of `n` column
//! indices (0-based) of the fan matrix. Geometry is decided exactly through
//! determinant signs and the circuits of the column configuration: two
//! simplicial cones meet in a common face unless some circuit has its
//! positive part in one cone and its negative part in the other.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};

use crate::error::{Error, FCondition, Result};
use crate::gale::{classify_f, combinations, dot, hyperplane_normal};
use crate::lattice::kernel_saturation;
use crate::matrix::{IntMatrix, Integer};

const MAX_RAYS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    matrix: IntMatrix,
    cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Validates `cones` against `matrix` and builds the fan.
    pub fn new(matrix: IntMatrix, cones: Vec<Vec<usize>>) -> Result<Self> {
        let check = validate_fan(&matrix, &cones)?;
        if !check.valid {
            return Err(Error::InvalidFan(check.diagnostics.join("; ")));
        }
        Ok(Self::from_parts(matrix, cones))
    }

    fn from_parts(matrix: IntMatrix, cones: Vec<Vec<usize>>) -> Self {
        let mut cones: Vec<Vec<usize>> = cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        cones.sort();
        Fan { matrix, cones }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    pub fn ray_count(&self) -> usize {
        self.matrix.cols()
    }
}

/// Complements of the maximal cones, one size-`r` set per cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardIndexFamily {
    pub sets: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanCheck {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

fn mask_of(idx: &[usize]) -> u64 {
    idx.iter().fold(0, |m, &i| m | (1 << i))
}

fn indices_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1 << i) != 0).collect()
}

/// Oriented circuits `(positive, negative)` of the column configuration.
fn circuits(v: &IntMatrix) -> Vec<(u64, u64)> {
    let m = v.cols();
    let max_size = v.rows() + 1;
    let mut out = Vec::new();
    for mask in 1u64..(1 << m) {
        let size = mask.count_ones() as usize;
        if size > max_size {
            continue;
        }
        let idx = indices_of(mask);
        let kernel = kernel_saturation(&v.select_columns(&idx));
        if kernel.rank() != 1 {
            continue;
        }
        let row = kernel.basis().row(0);
        if row.iter().any(Zero::is_zero) {
            continue;
        }
        let mut pos = 0;
        let mut neg = 0;
        for (k, x) in row.iter().enumerate() {
            if x.is_positive() {
                pos |= 1 << idx[k];
            } else {
                neg |= 1 << idx[k];
            }
        }
        out.push((pos, neg));
    }
    out
}

fn meet_properly(circuits: &[(u64, u64)], a: u64, b: u64) -> bool {
    !circuits.iter().any(|&(p, n)| {
        (p & !a == 0 && n & !b == 0) || (n & !a == 0 && p & !b == 0)
    })
}

/// Geometry of one fan matrix: cached facet normals and circuits.
struct Geometry<'a> {
    v: &'a IntMatrix,
    columns: Vec<Vec<Integer>>,
    circuits: Vec<(u64, u64)>,
    normals: HashMap<u64, Option<Vec<Integer>>>,
}

impl<'a> Geometry<'a> {
    fn new(v: &'a IntMatrix) -> Self {
        Geometry {
            v,
            columns: (0..v.cols()).map(|j| v.column(j)).collect(),
            circuits: circuits(v),
            normals: HashMap::new(),
        }
    }

    fn normal(&mut self, facet: u64) -> Option<Vec<Integer>> {
        let v = self.v;
        self.normals
            .entry(facet)
            .or_insert_with(|| hyperplane_normal(&v.select_columns(&indices_of(facet))))
            .clone()
    }

    /// Sign of `x` relative to the hyperplane through `facet`.
    fn side(&mut self, facet: u64, x: &[Integer]) -> i32 {
        match self.normal(facet) {
            None => 0,
            Some(c) => {
                let s = dot(&c, x);
                if s.is_positive() {
                    1
                } else if s.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    fn is_simplicial(&self, cone: u64) -> bool {
        !self
            .v
            .select_columns(&indices_of(cone))
            .det()
            .expect("square")
            .is_zero()
    }

    /// Whether `p` lies in the interior of the simplicial cone.
    fn contains_interior(&mut self, cone: u64, p: &[Integer]) -> bool {
        indices_of(cone).into_iter().all(|j| {
            let facet = cone & !(1 << j);
            let col = self.columns[j].clone();
            let s = self.side(facet, p);
            s != 0 && s == self.side(facet, &col)
        })
    }

    /// Whether `a` and `b`, both containing `facet`, lie on opposite sides of it.
    fn opposite(&mut self, facet: u64, a: u64, b: u64) -> bool {
        let ja = (a & !facet).trailing_zeros() as usize;
        let jb = (b & !facet).trailing_zeros() as usize;
        let ca = self.columns[ja].clone();
        let cb = self.columns[jb].clone();
        let sa = self.side(facet, &ca);
        let sb = self.side(facet, &cb);
        sa != 0 && sb != 0 && sa != sb
    }

    /// A point off every hyperplane spanned by columns, on the moment curve.
    fn generic_point(&mut self) -> Vec<Integer> {
        let n = self.v.rows();
        let cols: Vec<usize> = (0..self.v.cols()).collect();
        let facets: Vec<u64> = combinations(&cols, n.saturating_sub(1))
            .iter()
            .map(|f| mask_of(f))
            .collect();
        let mut t = Integer::from(1);
        loop {
            let mut p = Vec::with_capacity(n);
            let mut x = Integer::from(1);
            for _ in 0..n {
                p.push(x.clone());
                x *= &t;
            }
            let ok = facets.iter().all(|&f| match self.normal(f) {
                None => true,
                Some(c) => !dot(&c, &p).is_zero(),
            });
            if ok {
                return p;
            }
            t += 1;
        }
    }
}

fn check_size(v: &IntMatrix) -> Result<()> {
    if v.cols() > MAX_RAYS {
        return Err(Error::Shape(format!(
            "{} rays exceed the supported maximum of {MAX_RAYS}",
            v.cols()
        )));
    }
    Ok(())
}

/// Checks that `cones` are the maximal cones of a complete simplicial fan
/// whose rays are exactly the columns of `v`.
pub fn validate_fan(v: &IntMatrix, cones: &[Vec<usize>]) -> Result<FanCheck> {
    check_size(v)?;
    let n = v.rows();
    let m = v.cols();
    for cone in cones {
        for &i in cone {
            if i >= m {
                return Err(Error::IndexOutOfRange { index: i, bound: m });
            }
        }
        let distinct: BTreeSet<_> = cone.iter().collect();
        if cone.len() != n || distinct.len() != n {
            return Err(Error::InvalidFan(format!(
                "cone {cone:?} does not consist of {n} distinct rays"
            )));
        }
    }
    let mut diagnostics = Vec::new();
    if cones.is_empty() {
        diagnostics.push("no cones".to_string());
    }
    let masks: Vec<u64> = cones.iter().map(|c| mask_of(c)).collect();
    let mut geometry = Geometry::new(v);
    let distinct: BTreeSet<u64> = masks.iter().copied().collect();
    if distinct.len() != masks.len() {
        diagnostics.push("repeated cone".to_string());
    }
    for (cone, &mask) in cones.iter().zip(&masks) {
        if !geometry.is_simplicial(mask) {
            diagnostics.push(format!("cone {cone:?} is not full-dimensional"));
        }
    }
    for i in 0..masks.len() {
        for j in i + 1..masks.len() {
            if masks[i] != masks[j] && !meet_properly(&geometry.circuits, masks[i], masks[j]) {
                diagnostics.push(format!(
                    "cones {:?} and {:?} do not meet in a common face",
                    cones[i], cones[j]
                ));
            }
        }
    }
    let mut facets: BTreeMap<Vec<usize>, Vec<u64>> = BTreeMap::new();
    for &mask in &distinct {
        for j in indices_of(mask) {
            facets
                .entry(indices_of(mask & !(1 << j)))
                .or_default()
                .push(mask);
        }
    }
    for (facet, owners) in &facets {
        let f = mask_of(facet);
        match owners.as_slice() {
            [a, b] if geometry.opposite(f, *a, *b) => {}
            [_, _] => diagnostics.push(format!("cones on facet {facet:?} lie on the same side")),
            _ => diagnostics.push(format!(
                "facet {facet:?} belongs to {} cones instead of 2",
                owners.len()
            )),
        }
    }
    let used = masks.iter().fold(0, |a, b| a | b);
    for j in 0..m {
        if used & (1 << j) == 0 {
            diagnostics.push(format!("ray {j} is not used"));
        }
    }
    Ok(FanCheck {
        valid: diagnostics.is_empty(),
        diagnostics,
    })
}

/// Every complete simplicial fan whose rays are the columns of `v`, ordered
/// lexicographically by their sorted cone lists.
pub fn enumerate_fans(v: &IntMatrix) -> Result<Vec<Fan>> {
    let report = classify_f(v)?;
    if !report.is_f {
        let failed = report.failed.into_iter().filter(|c| *c != FCondition::E);
        return Err(Error::NotFMatrix(failed.collect()));
    }
    check_size(v)?;
    let n = v.rows();
    let m = v.cols();
    let mut geometry = Geometry::new(v);
    let all: Vec<usize> = (0..m).collect();
    let candidates: Vec<u64> = combinations(&all, n)
        .iter()
        .map(|c| mask_of(c))
        .filter(|&c| geometry.is_simplicial(c))
        .collect();
    let p = geometry.generic_point();
    let mut search = Search {
        geometry,
        candidates,
        full: (1u64 << m) - 1,
        found: BTreeSet::new(),
    };
    for start in search.candidates.clone() {
        if search.geometry.contains_interior(start, &p) {
            search.extend(&mut vec![start]);
        }
    }
    Ok(search
        .found
        .into_iter()
        .map(|cones| Fan::from_parts(v.clone(), cones))
        .collect())
}

struct Search<'a> {
    geometry: Geometry<'a>,
    candidates: Vec<u64>,
    full: u64,
    found: BTreeSet<Vec<Vec<usize>>>,
}

impl Search<'_> {
    fn extend(&mut self, chosen: &mut Vec<u64>) {
        let mut owners: BTreeMap<Vec<usize>, Vec<u64>> = BTreeMap::new();
        for &c in chosen.iter() {
            for j in indices_of(c) {
                owners.entry(indices_of(c & !(1 << j))).or_default().push(c);
            }
        }
        let open = owners.iter().find(|(_, o)| o.len() == 1);
        let Some((facet, owner)) = open else {
            if chosen.iter().fold(0, |a, b| a | b) == self.full {
                let mut cones: Vec<Vec<usize>> = chosen.iter().map(|&c| indices_of(c)).collect();
                cones.sort();
                self.found.insert(cones);
            }
            return;
        };
        let facet = mask_of(facet);
        let owner = owner[0];
        for k in 0..self.candidates.len() {
            let c = self.candidates[k];
            if c & facet != facet || chosen.contains(&c) {
                continue;
            }
            if !self.geometry.opposite(facet, owner, c) {
                continue;
            }
            if !chosen
                .iter()
                .all(|&d| meet_properly(&self.geometry.circuits, c, d))
            {
                continue;
            }
            chosen.push(c);
            self.extend(chosen);
            chosen.pop();
        }
    }
}

pub fn picard_index_sets(fan: &Fan) -> PicardIndexFamily {
    let m = fan.ray_count();
    PicardIndexFamily {
        sets: fan
            .cones()
            .iter()
            .map(|c| (0..m).filter(|j| !c.contains(j)).collect())
            .collect(),
    }
}
