//! Subcommand implementations. Every job maps a parsed input document to a
//! JSON value so that single runs and batch runs share one code path.

use std::str::FromStr;

use num_traits::Signed;
use serde_json::{json, Map, Value};
use torifactor::divisors::divisibility_chain;
use torifactor::{
    cartier_basis, classify_f, classify_w, covering_decomposition, covering_decomposition_with,
    enumerate_fans, gale_dual, hnf, picard_basis, picard_index_sets, reconstruct_beta,
    reconstruct_fan_matrix, snf, torsion_generators, torsion_matrix, weight_switching_matrix,
    weil_inclusion, CoveringData, Error, EquivalenceSearch, Fan, IntMatrix, Integer, Lattice,
    QuotientPresentation,
};

use crate::input::{self, field, main_matrix, optional_matrix, required_matrix};
use crate::output::{self, int, ints};
use crate::CliError;

const V: &[&str] = &["V", "v", "matrix"];
const Q: &[&str] = &["Q", "q"];
const V_HAT: &[&str] = &["V_hat", "v_hat"];
const GAMMA: &[&str] = &["Gamma", "gamma"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Hnf,
    Snf,
    Gale,
    Classify,
    Fans,
    Cover,
    Torsion,
    Gamma,
    Picard,
    Cartier,
    Reconstruct,
    Equiv,
    Pipeline,
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "hnf" => Command::Hnf,
            "snf" => Command::Snf,
            "gale" => Command::Gale,
            "classify" => Command::Classify,
            "fans" => Command::Fans,
            "cover" => Command::Cover,
            "torsion" => Command::Torsion,
            "gamma" => Command::Gamma,
            "picard" => Command::Picard,
            "cartier" => Command::Cartier,
            "reconstruct" => Command::Reconstruct,
            "equiv" => Command::Equiv,
            "pipeline" => Command::Pipeline,
            other => return Err(CliError::Malformed(format!("unknown command {other:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    /// 1-based fan selector.
    pub fan: Option<usize>,
    pub count: bool,
    pub verify: bool,
    pub max_perm: Option<u64>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            fan: None,
            count: false,
            verify: true,
            max_perm: None,
        }
    }
}

pub fn run(cmd: Command, doc: &Value, opts: &Options) -> Result<Value, CliError> {
    match cmd {
        Command::Hnf => hnf_job(doc),
        Command::Snf => snf_job(doc),
        Command::Gale => gale_job(doc),
        Command::Classify => classify_job(doc),
        Command::Fans => fans_job(doc, opts),
        Command::Cover => cover_job(doc),
        Command::Torsion => torsion_job(doc),
        Command::Gamma => gamma_job(doc),
        Command::Picard => picard_job(doc, opts),
        Command::Cartier => cartier_job(doc, opts),
        Command::Reconstruct => reconstruct_job(doc, opts),
        Command::Equiv => equiv_job(doc, opts),
        Command::Pipeline => pipeline_job(doc, opts),
    }
}

fn obj(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

fn hnf_job(doc: &Value) -> Result<Value, CliError> {
    let a = main_matrix(doc, &["A", "a", "matrix", "V"])?;
    let h = hnf(&a);
    Ok(obj(vec![
        ("H", output::matrix(&h.h)),
        ("U", output::matrix(&h.u)),
        ("rank", json!(h.rank)),
        ("pivots", json!(h.pivots.iter().map(|p| p + 1).collect::<Vec<_>>())),
    ]))
}

fn snf_job(doc: &Value) -> Result<Value, CliError> {
    let a = main_matrix(doc, &["A", "a", "matrix", "V"])?;
    let s = snf(&a);
    Ok(obj(vec![
        ("D", output::matrix(&s.d)),
        ("left", output::matrix(&s.left)),
        ("right", output::matrix(&s.right)),
        ("invariants", ints(&s.invariants())),
    ]))
}

fn gale_job(doc: &Value) -> Result<Value, CliError> {
    let a = main_matrix(doc, &["A", "a", "matrix", "V", "Q"])?;
    Ok(obj(vec![("dual", output::matrix(&gale_dual(&a)?))]))
}

fn labels<T: Copy>(failed: &[T], label: impl Fn(T) -> &'static str) -> Value {
    json!(failed.iter().map(|c| label(*c)).collect::<Vec<_>>())
}

fn classify_job(doc: &Value) -> Result<Value, CliError> {
    let a = main_matrix(doc, &["A", "a", "matrix", "V", "Q"])?;
    let f = classify_f(&a)?;
    let w = classify_w(&a)?;
    Ok(obj(vec![
        ("rows", json!(a.rows())),
        ("cols", json!(a.cols())),
        (
            "F",
            obj(vec![
                ("is_F", json!(f.is_f)),
                ("is_CF", json!(f.is_cf)),
                ("reduced", json!(f.is_reduced)),
                ("failed", labels(&f.failed, |c| c.label())),
            ]),
        ),
        (
            "W",
            obj(vec![
                ("is_W", json!(w.is_w)),
                ("reduced", json!(w.is_reduced)),
                ("failed", labels(&w.failed, |c| c.label())),
            ]),
        ),
    ]))
}

/// All fans, or only the one picked by `--fan`, paired with 1-based labels.
fn selected_fans(v: &IntMatrix, choice: Option<usize>) -> Result<Vec<(usize, Fan)>, CliError> {
    pick(enumerate_fans(v)?, choice)
}

fn pick(fans: Vec<Fan>, choice: Option<usize>) -> Result<Vec<(usize, Fan)>, CliError> {
    let total = fans.len();
    let labelled = fans.into_iter().enumerate().map(|(i, f)| (i + 1, f));
    match choice {
        None => Ok(labelled.collect()),
        Some(k) if (1..=total).contains(&k) => Ok(labelled.filter(|(i, _)| *i == k).collect()),
        Some(k) => Err(CliError::Malformed(format!(
            "--fan {k} is out of range: there are {total} fans"
        ))),
    }
}

fn fans_job(doc: &Value, opts: &Options) -> Result<Value, CliError> {
    let v = main_matrix(doc, V)?;
    let all = enumerate_fans(&v)?;
    let total = all.len();
    if opts.count {
        return Ok(json!(total));
    }
    let fans = pick(all, opts.fan)?;
    Ok(obj(vec![
        ("count", json!(total)),
        (
            "fans",
            Value::Array(
                fans.iter()
                    .map(|(i, f)| obj(vec![("index", json!(i)), ("cones", output::cones(f.cones()))]))
                    .collect(),
            ),
        ),
    ]))
}

fn covering(doc: &Value) -> Result<(IntMatrix, CoveringData), CliError> {
    let v = main_matrix(doc, V)?;
    let cd = match optional_matrix(doc, V_HAT)? {
        Some(v_hat) => covering_decomposition_with(&v, &v_hat)?,
        None => covering_decomposition(&v)?,
    };
    Ok((v, cd))
}

fn cover_job(doc: &Value) -> Result<Value, CliError> {
    let (_, cd) = covering(doc)?;
    Ok(obj(vec![
        ("V_hat", output::matrix(&cd.v_hat)),
        ("beta", output::matrix(&cd.beta)),
        ("Delta", output::matrix(&cd.delta)),
        ("mu", output::matrix(&cd.mu)),
        ("nu", output::matrix(&cd.nu)),
        ("V_aligned", output::matrix(&cd.v_aligned)),
        ("V_hat_aligned", output::matrix(&cd.v_hat_aligned)),
        ("torsion_invariants", ints(&cd.torsion_invariants)),
    ]))
}

fn torsion_job(doc: &Value) -> Result<Value, CliError> {
    let (_, cd) = covering(doc)?;
    Ok(obj(vec![
        ("torsion_invariants", ints(&cd.torsion_invariants)),
        ("order", int(&cd.torsion_order())),
        ("torsion_generators", output::matrix(&torsion_generators(&cd))),
    ]))
}

fn gamma_job(doc: &Value) -> Result<Value, CliError> {
    let (_, cd) = covering(doc)?;
    Ok(obj(vec![("Gamma", output::torsion(&torsion_matrix(&cd)?))]))
}

/// The supplied weight matrix, checked against `V`, or the Gale dual of `V`.
fn weights(doc: &Value, v: &IntMatrix) -> Result<IntMatrix, CliError> {
    let dual = gale_dual(v)?;
    match optional_matrix(doc, Q)? {
        None => Ok(dual),
        Some(q) => {
            if q.shape() != dual.shape() || Lattice::from_rows(&q) != Lattice::from_rows(&dual) {
                return Err(Error::Inconsistent("Q is not a Gale dual of V".into()).into());
            }
            Ok(q)
        }
    }
}

fn fan_divisors(
    q: &IntMatrix,
    u_q: &IntMatrix,
    beta: &IntMatrix,
    label: usize,
    fan: &Fan,
) -> Result<(Map<String, Value>, Integer, torifactor::PicardData, IntMatrix), CliError> {
    let p = picard_basis(q, &picard_index_sets(fan))?;
    let c_x = cartier_basis(&p.b, u_q, beta)?;
    let cartier_index = c_x.det()?.abs();
    let mut entry = Map::new();
    entry.insert("index".into(), json!(label));
    entry.insert("cones".into(), output::cones(fan.cones()));
    entry.insert("B".into(), output::matrix(&p.b));
    entry.insert("C_X".into(), output::matrix(&c_x));
    entry.insert("index_F_Pic".into(), int(&p.index));
    entry.insert("delta_sigma".into(), int(&p.delta_sigma));
    entry.insert("index_Weil_Cart".into(), int(&cartier_index));
    Ok((entry, cartier_index, p, c_x))
}

fn picard_job(doc: &Value, opts: &Options) -> Result<Value, CliError> {
    let v = main_matrix(doc, V)?;
    let q = weights(doc, &v)?;
    let fans = selected_fans(&v, opts.fan)?;
    let mut entries = Vec::new();
    for (label, fan) in &fans {
        let p = picard_basis(&q, &picard_index_sets(fan))?;
        entries.push(obj(vec![
            ("index", json!(label)),
            ("cones", output::cones(fan.cones())),
            ("B", output::matrix(&p.b)),
            ("index_F_Pic", int(&p.index)),
            ("delta_sigma", int(&p.delta_sigma)),
        ]));
    }
    Ok(obj(vec![("Q", output::matrix(&q)), ("fans", Value::Array(entries))]))
}

fn cartier_job(doc: &Value, opts: &Options) -> Result<Value, CliError> {
    let (v, cd) = covering(doc)?;
    let q = weights(doc, &v)?;
    let u_q = weight_switching_matrix(&q, Some(&cd.v_hat))?;
    let mut entries = Vec::new();
    for (label, fan) in selected_fans(&v, opts.fan)? {
        let (entry, ..) = fan_divisors(&q, &u_q, &cd.beta, label, &fan)?;
        entries.push(Value::Object(entry));
    }
    Ok(obj(vec![
        ("U_Q", output::matrix(&u_q)),
        ("A", output::matrix(&weil_inclusion(&u_q, &cd.beta)?)),
        ("fans", Value::Array(entries)),
    ]))
}

fn presentation(doc: &Value) -> Result<QuotientPresentation, CliError> {
    let q = required_matrix(doc, Q)?;
    let gamma = match field(doc, GAMMA) {
        Some(g) => input::torsion(g)?,
        None => torifactor::TorsionMatrix::empty(q.cols()),
    };
    let p = QuotientPresentation::new(q, gamma)?;
    Ok(match optional_matrix(doc, V_HAT)? {
        Some(v_hat) => p.with_covering(v_hat)?,
        None => p,
    })
}

fn search(opts: &Options) -> EquivalenceSearch {
    opts.max_perm
        .map(EquivalenceSearch::with_limit)
        .unwrap_or_default()
}

fn witness_json(
    v1: &IntMatrix,
    v2: &IntMatrix,
    opts: &Options,
    with_fans: bool,
) -> Result<Value, CliError> {
    let Some(w) = search(opts).run(v1, v2)? else {
        return Ok(obj(vec![("equivalent", json!(false))]));
    };
    let mut pairs = vec![
        ("equivalent", json!(true)),
        ("R", output::matrix(&w.r)),
        ("permutation", json!(w.permutation.iter().map(|p| p + 1).collect::<Vec<_>>())),
        ("S", output::matrix(&w.to_matrix())),
    ];
    if with_fans {
        let f1 = enumerate_fans(v1)?;
        let f2 = enumerate_fans(v2)?;
        let related: Vec<[usize; 2]> = f1
            .iter()
            .enumerate()
            .flat_map(|(i, a)| {
                f2.iter()
                    .enumerate()
                    .filter(|(_, b)| w.relates_fans(a, b))
                    .map(move |(j, _)| [i + 1, j + 1])
            })
            .collect();
        pairs.push(("related_fans", json!(related)));
    }
    Ok(obj(pairs))
}

fn reconstruct_job(doc: &Value, opts: &Options) -> Result<Value, CliError> {
    let p = presentation(doc)?;
    let k = p.relation_matrix()?;
    let beta = reconstruct_beta(&p)?;
    let v_r = reconstruct_fan_matrix(&p)?;
    let mut pairs = vec![
        ("V_hat", output::matrix(&p.v_hat()?)),
        ("K", output::matrix(&k)),
        ("beta", output::matrix(&beta)),
        ("V", output::matrix(&v_r)),
    ];
    if let Some(v) = optional_matrix(doc, V)? {
        pairs.push(("equivalence", witness_json(&v, &v_r, opts, false)?));
    }
    Ok(obj(pairs))
}

fn equiv_job(doc: &Value, opts: &Options) -> Result<Value, CliError> {
    let v1 = required_matrix(doc, &["V1", "v1"])?;
    let v2 = required_matrix(doc, &["V2", "v2"])?;
    witness_json(&v1, &v2, opts, true)
}

fn check(ok: bool, what: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(Error::Inconsistent(format!("verification failed: {what}")).into())
    }
}

fn pipeline_job(doc: &Value, opts: &Options) -> Result<Value, CliError> {
    let (v, cd) = covering(doc)?;
    let q = weights(doc, &v)?;
    let t = torsion_generators(&cd);
    let gamma = torsion_matrix(&cd)?;
    let u_q = weight_switching_matrix(&q, Some(&cd.v_hat))?;
    let fans = selected_fans(&v, opts.fan)?;
    let det_beta = cd.beta.det()?.abs();

    if opts.verify {
        check((&q * &v.transpose()).is_zero(), "Q·Vᵀ = 0")?;
        check(&cd.beta * &cd.v_hat == v, "β·V̂ = V")?;
        check((&q * &cd.v_hat.transpose()).is_zero(), "Q·V̂ᵀ = 0")?;
        check(&(&cd.mu * &cd.beta) * &cd.nu == cd.delta, "μ·β·ν = Δ")?;
        check(det_beta == cd.torsion_order(), "|det β| = |Tors|")?;
        check(gamma.annihilates(&cd.v_aligned)?, "Γ·V′ᵀ ≡ 0")?;
        check(gamma.is_dual_to(&t)?, "Γ pairs dually with the torsion generators")?;
        check(
            Lattice::from_rows(&t.vstack(&v)?) == Lattice::from_rows(&cd.v_hat),
            "torsion generators and V span L_r(V̂)",
        )?;
    }

    let mut entries = Vec::new();
    for (label, fan) in &fans {
        let (entry, cartier_index, p, c_x) = fan_divisors(&q, &u_q, &cd.beta, *label, fan)?;
        if opts.verify {
            check(divisibility_chain(&p, &cartier_index), "δ_Σ | [F : Pic] | [Weil : Cart]")?;
            check(cartier_index == &p.index * &det_beta, "|det C_X| = |det B|·|det β|")?;
            check(
                c_x.bottom_rows(v.rows()) == v,
                "the lower rows of C_X reproduce V",
            )?;
        }
        entries.push(Value::Object(entry));
    }

    let mut pairs = vec![
        ("Q", output::matrix(&q)),
        ("V_hat", output::matrix(&cd.v_hat)),
        ("beta", output::matrix(&cd.beta)),
        ("Delta", output::matrix(&cd.delta)),
        ("torsion_invariants", ints(&cd.torsion_invariants)),
        ("torsion_generators", output::matrix(&t)),
        ("Gamma", output::torsion(&gamma)),
        ("U_Q", output::matrix(&u_q)),
        ("fans", Value::Array(entries)),
    ];
    if opts.verify {
        pairs.push(("verified", json!(true)));
    }
    Ok(obj(pairs))
}
