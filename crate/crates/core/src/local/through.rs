use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::intersect::intersection_number;
use super::resolvers::ord;
use super::Germ;
use crate::cluster::WeightedCluster;
use crate::error::{Error, Result};
use crate::field::{BiPoly, Elem, Rational, Tower};

pub const RETRY_BUDGET: usize = 32;
const COEFF_RANGE: i64 = 10;

/// Two germs through a weighted cluster with exactly the prescribed
/// multiplicities and no further common point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvePair {
    pub w: Germ,
    pub z: Germ,
    pub degree: u32,
    /// Number of sampled candidates before both passed verification.
    pub attempts: usize,
}

/// How a node is reached from its parent in the fixed realization.
#[derive(Clone, Debug)]
enum Move {
    Slope(Rational),
    Vertical,
}

/// Concrete position of every node: free children at slopes 1, −1, 2, −2, …,
/// satellites at the corner they are proximate to.
fn realize(k: &WeightedCluster) -> Result<Vec<Option<Move>>> {
    let f = k.forest();
    let mut free_count = vec![0i64; f.len()];
    let mut moves = Vec::with_capacity(f.len());
    for q in 0..f.len() {
        let Some(p) = f.parent(q) else {
            moves.push(None);
            continue;
        };
        let m = match f.second_proximity(q) {
            None => {
                let n = free_count[p];
                free_count[p] += 1;
                let t = if n % 2 == 0 { n / 2 + 1 } else { -(n / 2 + 1) };
                Move::Slope(Rational::from_integer(t.into()))
            }
            Some(s) if f.second_proximity(p) == Some(s) => Move::Slope(Rational::zero()),
            Some(s) if f.parent(p) == Some(s) => Move::Vertical,
            Some(_) => return Err(Error::PreconditionViolated(format!("satellite {} is not realizable", f.id(q)))),
        };
        moves.push(Some(m));
    }
    Ok(moves)
}

/// Polynomial whose coefficients are linear forms in the unknown
/// coefficients of the general curve.
#[derive(Clone, Debug, Default)]
struct LinPoly {
    terms: BTreeMap<(u32, u32), Vec<Rational>>,
}

fn axpy(acc: &mut Vec<Rational>, c: &Rational, v: &[Rational]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += c * b;
    }
}

fn binomial_row(n: u32) -> Vec<Rational> {
    let mut row = vec![Rational::one()];
    for k in 1..=n {
        let prev = row[k as usize - 1].clone();
        row.push(prev * Rational::from_integer((n - k + 1).into()) / Rational::from_integer(k.into()));
    }
    row
}

impl LinPoly {
    fn general(degree: u32) -> (Self, Vec<(u32, u32)>) {
        let monos: Vec<(u32, u32)> =
            (0..=degree).flat_map(|d| (0..=d).map(move |j| (d - j, j))).collect();
        let n = monos.len();
        let mut terms = BTreeMap::new();
        for (k, &m) in monos.iter().enumerate() {
            let mut v = vec![Rational::zero(); n];
            v[k] = Rational::one();
            terms.insert(m, v);
        }
        (LinPoly { terms }, monos)
    }

    fn add_term(&mut self, key: (u32, u32), c: &Rational, v: &[Rational]) {
        let n = v.len();
        let e = self.terms.entry(key).or_insert_with(|| vec![Rational::zero(); n]);
        axpy(e, c, v);
    }

    /// Forms of the terms of total degree below `nu`, removing them.
    fn take_low(&mut self, nu: u32) -> Vec<Vec<Rational>> {
        let low: Vec<(u32, u32)> = self.terms.keys().filter(|&&(i, j)| i + j < nu).copied().collect();
        low.into_iter().map(|k| self.terms.remove(&k).unwrap()).collect()
    }

    fn transform(&self, nu: u32, m: &Move) -> LinPoly {
        let mut out = LinPoly::default();
        for (&(i, j), v) in &self.terms {
            match m {
                Move::Slope(t) => {
                    // x^i (x(y+t))^j = x^(i+j) Σ C(j,k) t^(j-k) y^k
                    let binom = binomial_row(j);
                    for k in 0..=j {
                        let c = &binom[k as usize] * pow(t, j - k);
                        if !c.is_zero() {
                            out.add_term((i + j - nu, k), &c, v);
                        }
                    }
                }
                Move::Vertical => {
                    // x ↦ x y, divide by y^nu, then swap
                    out.add_term((i + j - nu, i), &Rational::one(), v);
                }
            }
        }
        out
    }
}

fn pow(t: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= t;
    }
    acc
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(rows: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

fn nullspace(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let pivots = rref(&mut rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); ncols];
            v[fc] = Rational::one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = -row[fc].clone();
            }
            v
        })
        .collect()
}

fn apply_move(p: &BiPoly, nu: u32, m: &Move, t: &Tower) -> BiPoly {
    match m {
        Move::Slope(s) => p.subst_chart_x(&Elem::Q(s.clone()), t).div_x_pow(nu),
        Move::Vertical => p.subst_chart_y().div_y_pow(nu).map(|q| q.swap()),
    }
    .expect("multiplicity divides the total transform")
}

/// Check exact multiplicities along the realization; `Err` describes the
/// first failure.
fn check_multiplicities(k: &WeightedCluster, moves: &[Option<Move>], p: &BiPoly) -> std::result::Result<(), String> {
    let t = Tower::rational();
    let f = k.forest();
    let mut at: Vec<Option<BiPoly>> = vec![None; f.len()];
    for q in 0..f.len() {
        let here = match (f.parent(q), &moves[q]) {
            (None, _) => p.clone(),
            (Some(par), Some(m)) => apply_move(at[par].as_ref().unwrap(), k.weight(par) as u32, m, &t),
            _ => unreachable!(),
        };
        let m = ord(&here, &t).map_err(|e| e.to_string())?;
        if m as i64 != k.weight(q) {
            return Err(format!("multiplicity {m} at {} instead of {}", f.id(q), k.weight(q)));
        }
        at[q] = Some(here);
    }
    Ok(())
}

/// Two curves of degree `1 + Σν` through `k` with multiplicity exactly `ν_q`
/// at every `q` and intersection number `𝒦²` at the origin, sampled from the
/// linear system with a seeded generator and certified.
pub fn curves_through(k: &WeightedCluster, seed: u64) -> Result<CurvePair> {
    k.require_consistent()?;
    let f = k.forest();
    if f.roots().count() != 1 {
        return Err(Error::PreconditionViolated("cluster must have exactly one proper point".into()));
    }
    if (0..f.len()).any(|q| f.orbit(q) != 1) {
        return Err(Error::PreconditionViolated("conjugate orbits are not supported here".into()));
    }
    if k.weight(0) < 1 {
        return Err(Error::PreconditionViolated("root weight must be positive".into()));
    }
    let moves = realize(k)?;
    let degree = 1 + k.weight_sum() as u32;
    let (general, monos) = LinPoly::general(degree);
    let n = monos.len();
    let mut conditions = Vec::new();
    let mut at: Vec<Option<LinPoly>> = vec![None; f.len()];
    for q in 0..f.len() {
        let mut here = match (f.parent(q), &moves[q]) {
            (None, _) => general.clone(),
            (Some(par), Some(m)) => at[par].as_ref().unwrap().transform(k.weight(par) as u32, m),
            _ => unreachable!(),
        };
        conditions.extend(here.take_low(k.weight(q) as u32));
        at[q] = Some(here);
    }
    let basis = nullspace(conditions, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |rng: &mut ChaCha8Rng| -> BiPoly {
        let mut coeffs = vec![Rational::zero(); n];
        for b in &basis {
            let r = Rational::from_integer(rng.gen_range(-COEFF_RANGE..=COEFF_RANGE).into());
            axpy(&mut coeffs, &r, b);
        }
        let t = Tower::rational();
        BiPoly::from_terms(monos.iter().zip(coeffs).map(|(&m, c)| (m, Elem::Q(c))), &t)
    };
    let t = Tower::rational();
    let target = k.self_intersection() as u64;
    let mut last = String::from("no candidate sampled");
    for attempt in 1..=RETRY_BUDGET {
        let w = sample(&mut rng);
        let z = sample(&mut rng);
        if w.is_zero() || z.is_zero() {
            last = "zero member".into();
            continue;
        }
        if let Err(e) = check_multiplicities(k, &moves, &w).and_then(|_| check_multiplicities(k, &moves, &z)) {
            last = e;
            continue;
        }
        match intersection_number(&w, &z, &t)? {
            Some(i) if i == target => {
                return Ok(CurvePair {
                    w: Germ::new(w, t.clone())?,
                    z: Germ::new(z, t.clone())?,
                    degree,
                    attempts: attempt,
                })
            }
            other => last = format!("intersection {other:?} instead of {target}"),
        }
    }
    Err(Error::RetryBudgetExceeded { attempts: RETRY_BUDGET, last })
}
