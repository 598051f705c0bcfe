//! Caldero-Chapoton functions, linear independence of Laurent polynomials,
//! and the chain of conditions on B_Q guaranteeing it.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::algebra::TruncatedAlgebra;
use crate::error::{Error, Result};
use crate::grassmannian::{chi_table, Method};
use crate::laurent::LaurentPolynomial;
use crate::linalg::{rat, Matrix, Rational};
use crate::rep::{g_vector, DecoratedRepresentation};

/// C(X) = x^g Σ_e χ(Gr_e(M)) x^{B e}.
pub fn cc_function(
    a: &TruncatedAlgebra,
    x: &DecoratedRepresentation,
    method: Method,
    budget: u64,
) -> Result<LaurentPolynomial> {
    let q = a.quiver();
    let g = g_vector(a, x)?;
    let b = q.b_matrix();
    let table = chi_table(q, &x.module, method, budget)?;
    let mut out = LaurentPolynomial::zero(q.n());
    for (e, chi) in &table {
        let exps: Vec<i64> = (0..q.n())
            .map(|i| g.0[i] + b[i].iter().zip(e).map(|(&bij, &ej)| bij * ej as i64).sum::<i64>())
            .collect();
        out.add_term(exps, chi);
    }
    Ok(out)
}

/// Outcome of an exact rank test on a family of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Independence {
    pub independent: bool,
    pub rank: usize,
    /// Primitive integer dependence, first nonzero entry positive.
    pub witness: Option<Vec<BigInt>>,
}

pub fn linear_independence(fns: &[LaurentPolynomial]) -> Independence {
    let support: BTreeSet<&Vec<i64>> = fns.iter().flat_map(|f| f.terms().keys()).collect();
    let rows: Vec<&Vec<i64>> = support.into_iter().collect();
    let mut m = Matrix::zeros(rows.len(), fns.len());
    for (j, f) in fns.iter().enumerate() {
        for (i, e) in rows.iter().enumerate() {
            m[(i, j)] = Rational::from_integer(f.coefficient(e));
        }
    }
    let rank = m.rank();
    let kernel = m.kernel();
    let witness = (kernel.cols() > 0).then(|| primitive(&kernel.column(0)));
    Independence { independent: rank == fns.len(), rank, witness }
}

/// Scales a rational vector to coprime integers with positive leading entry.
pub fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let ints = clear_denominators(v);
    match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => ints.into_iter().map(|x| -x).collect(),
        _ => ints,
    }
}

/// Independent rows, and each remaining row as a combination of them.
pub type RowWitness = (Vec<usize>, Vec<(usize, Vec<Rational>)>);

/// Verdicts on the four conditions on B_Q, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BqReport {
    pub n: usize,
    pub rank: usize,
    /// rank B = n
    pub a: bool,
    /// rows nonzero, and the others are non-negative combinations of `rank` independent rows
    pub b: bool,
    /// the image meets the open positive orthant
    pub c: bool,
    /// the kernel meets the closed positive orthant only in 0
    pub d: bool,
    /// independent rows (0-based) and the coefficients of every other row
    pub b_witness: Option<RowWitness>,
    /// e with B e > 0
    pub c_witness: Option<Vec<BigInt>>,
    /// nonzero e ≥ 0 with B e = 0
    pub d_witness: Option<Vec<BigInt>>,
    pub kernel_basis: Vec<Vec<BigInt>>,
}

impl BqReport {
    /// Whether (a) ⇒ (b) ⇒ (c) ⇒ (d) holds for the recorded verdicts.
    pub fn chain_holds(&self) -> bool {
        (!self.a || self.b) && (!self.b || self.c) && (!self.c || self.d)
    }

    pub fn to_json(&self) -> Value {
        let ints = |v: &[BigInt]| -> Value { Value::Array(v.iter().map(int_json).collect()) };
        json!({
            "n": self.n,
            "rank": self.rank,
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "d": self.d,
            "b_witness": self.b_witness.as_ref().map(|(rows, others)| json!({
                "rows": rows.iter().map(|r| r + 1).collect::<Vec<_>>(),
                "combinations": others.iter().map(|(k, lam)| json!({
                    "row": k + 1,
                    "coefficients": lam.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            })),
            "c_witness": self.c_witness.as_deref().map(ints),
            "d_witness": self.d_witness.as_deref().map(ints),
            "kernel_basis": self.kernel_basis.iter().map(|v| ints(v)).collect::<Vec<_>>(),
        })
    }
}

fn int_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

pub fn bq_conditions(b: &[Vec<i64>]) -> Result<BqReport> {
    let n = b.len();
    if b.iter().any(|r| r.len() != n) || (0..n).any(|i| (0..n).any(|j| b[i][j] != -b[j][i])) {
        return Err(Error::NotSkewSymmetric);
    }
    let flat: Vec<i64> = b.iter().flatten().copied().collect();
    let bm = Matrix::from_i64(n, n, &flat);
    let rank = bm.rank();
    let kernel = bm.kernel();
    let kernel_basis: Vec<Vec<BigInt>> = (0..kernel.cols()).map(|j| primitive(&kernel.column(j))).collect();

    let b_witness = row_combination(&bm, rank);

    // B e ≥ 1 is feasible iff B e > 0 is
    let rows: Vec<Constraint> = (0..n).map(|i| Constraint { coeffs: bm.row(i), rhs: rat(1) }).collect();
    let c_witness = fourier_motzkin(rows, n).map(|e| clear_denominators(&e));

    // e = K t with K t ≥ 0 and Σ K t = 1
    let k = kernel.cols();
    let mut sys: Vec<Constraint> = (0..n).map(|i| Constraint { coeffs: kernel.row(i), rhs: rat(0) }).collect();
    let sums: Vec<Rational> = (0..k).map(|j| kernel.column(j).into_iter().fold(rat(0), |s, x| s + x)).collect();
    sys.push(Constraint { coeffs: sums.clone(), rhs: rat(1) });
    sys.push(Constraint { coeffs: sums.iter().map(|x| -x).collect(), rhs: rat(-1) });
    let d_witness = if k == 0 {
        None
    } else {
        fourier_motzkin(sys, k).map(|t| {
            let e = kernel.mul(&Matrix::column_vector(t)).column(0);
            primitive(&e)
        })
    };

    Ok(BqReport {
        n,
        rank,
        a: rank == n,
        b: b_witness.is_some(),
        c: c_witness.is_some(),
        d: d_witness.is_none(),
        b_witness,
        c_witness,
        d_witness,
        kernel_basis,
    })
}

/// Positive multiple of `v` with coprime integer entries.
fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if gcd.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &gcd).collect()
    }
}

fn row_combination(bm: &Matrix, rank: usize) -> Option<RowWitness> {
    let n = bm.rows();
    if (0..n).any(|i| bm.row(i).iter().all(Zero::is_zero)) {
        return None;
    }
    for subset in combinations(n, rank) {
        let basis = bm.select_rows(&subset).transpose();
        if basis.rank() < rank {
            continue;
        }
        let mut others = Vec::new();
        let mut ok = true;
        for k in (0..n).filter(|k| !subset.contains(k)) {
            let target = Matrix::column_vector(bm.row(k));
            let lam = basis.solve(&target).expect("rows lie in the row space").column(0);
            if lam.iter().any(Signed::is_negative) {
                ok = false;
                break;
            }
            others.push((k, lam));
        }
        if ok {
            return Some((subset, others));
        }
    }
    None
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// coeffs · x ≥ rhs
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Constraint {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

impl Constraint {
    /// Divides by the absolute value of the first nonzero coefficient.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
            for x in self.coeffs.iter_mut() {
                *x /= &lead;
            }
            self.rhs /= &lead;
        }
        self
    }
}

/// Exact feasibility of a system of non-strict inequalities, with a solution.
fn fourier_motzkin(system: Vec<Constraint>, vars: usize) -> Option<Vec<Rational>> {
    let mut stages: Vec<Vec<Constraint>> = Vec::with_capacity(vars + 1);
    let mut current: Vec<Constraint> = dedup(system);
    for v in (0..vars).rev() {
        stages.push(current.clone());
        let (mut keep, mut pos, mut neg) = (Vec::new(), Vec::new(), Vec::new());
        for c in current {
            if c.coeffs[v].is_positive() {
                pos.push(c);
            } else if c.coeffs[v].is_negative() {
                neg.push(c);
            } else {
                keep.push(c);
            }
        }
        for p in &pos {
            for m in &neg {
                let (s, t) = (-&m.coeffs[v], p.coeffs[v].clone());
                let coeffs = p.coeffs.iter().zip(&m.coeffs).map(|(x, y)| x * &s + y * &t).collect();
                keep.push(Constraint { coeffs, rhs: &p.rhs * &s + &m.rhs * &t });
            }
        }
        current = dedup(keep);
    }
    if current.iter().any(|c| c.rhs.is_positive()) {
        return None;
    }
    let mut x = vec![rat(0); vars];
    for (v, stage) in (0..vars).zip(stages.iter().rev()) {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for c in stage {
            let a = &c.coeffs[v];
            if a.is_zero() {
                continue;
            }
            let rest: Rational = (0..v).map(|j| &c.coeffs[j] * &x[j]).fold(rat(0), |s, t| s + t);
            let bound = (&c.rhs - rest) / a;
            if a.is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            }
        }
        x[v] = match (lo, hi) {
            (Some(l), Some(h)) if l <= rat(0) && rat(0) <= h => rat(0),
            (None, Some(h)) if rat(0) <= h => rat(0),
            (Some(l), None) if l <= rat(0) => rat(0),
            (Some(l), _) => l,
            (None, Some(h)) => h,
            (None, None) => rat(0),
        };
    }
    Some(x)
}

fn dedup(cs: Vec<Constraint>) -> Vec<Constraint> {
    let set: BTreeSet<Constraint> = cs.into_iter().map(Constraint::normalized).collect();
    set.into_iter().collect()
}
