use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Elem, FieldResult, Rational, Tower, UniPoly};

/// One tangent direction: a root of the input, possibly in an extended tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Direction {
    pub root: Elem,
    /// Tower containing `root`; equal to the input tower for roots found there.
    pub tower: Tower,
    /// Number of conjugate roots this representative stands for.
    pub orbit: u64,
    pub multiplicity: u32,
    /// Whether the factor defining the root is known to be irreducible.
    pub certified: bool,
    /// Monic factor whose root this is (degree = orbit).
    pub factor: UniPoly,
}

// Bounds for the rational-root search. Above them the factor is adjoined
// optimistically and dynamic evaluation takes over.
const TRIAL_DIVISION_LIMIT: u64 = 100_000;
const CANDIDATE_LIMIT: usize = 50_000;

/// Split a nonzero univariate polynomial into direction representatives:
/// squarefree decomposition first, then rational roots, then one adjoined
/// root per remaining factor.
///
/// `Σ orbit · multiplicity = deg p` holds for the output.
pub fn split_directions(p: &UniPoly, tower: &Tower) -> FieldResult<Vec<Direction>> {
    let mut out = Vec::new();
    for (factor, multiplicity) in p.squarefree_decomposition(tower)? {
        let mut rest = factor;
        let mut search_complete = false;
        if rest.is_rational() {
            if let Some(roots) = rational_roots(&rest) {
                search_complete = true;
                for r in roots {
                    let lin = UniPoly::new(vec![Elem::Q(-r.clone()), Elem::one()]);
                    rest = rest.div_exact(&lin, tower)?.expect("root divides");
                    out.push(Direction {
                        root: Elem::Q(r),
                        tower: tower.clone(),
                        orbit: 1,
                        multiplicity,
                        certified: true,
                        factor: lin,
                    });
                }
            }
        }
        match rest.degree() {
            None | Some(0) => {}
            Some(1) => {
                let monic = rest.monic(tower)?;
                out.push(Direction {
                    root: tower.neg(&monic.coeffs()[0]),
                    tower: tower.clone(),
                    orbit: 1,
                    multiplicity,
                    certified: true,
                    factor: monic,
                });
            }
            Some(d) => {
                let certified = rest.is_rational()
                    && ((search_complete && d <= 3) || irreducible_binomial(&rest));
                let var = format!("t{}", tower.depth() + 1);
                let ext = tower.extend(var, &rest)?;
                let monic = UniPoly::new(ext.level(ext.depth()).modulus.clone());
                out.push(Direction {
                    root: ext.generator(ext.depth()),
                    tower: ext,
                    orbit: d as u64,
                    multiplicity,
                    certified,
                    factor: monic,
                });
            }
        }
    }
    Ok(out)
}

fn to_integer_poly(p: &UniPoly) -> Vec<BigInt> {
    let rats: Vec<&Rational> = p.coeffs().iter().map(|c| c.as_rational().unwrap()).collect();
    let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (*r * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e > 0 {
            primes.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        let lim = BigInt::from(TRIAL_DIVISION_LIMIT);
        if n > &lim * &lim {
            return None;
        }
        primes.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for dv in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(dv * &pk);
                pk *= &p;
            }
        }
        divs = next;
        if divs.len() > CANDIDATE_LIMIT {
            return None;
        }
    }
    Some(divs)
}

fn vanishes_at(c: &[BigInt], num: &BigInt, den: &BigInt) -> bool {
    // Σ c_i num^i den^(n-i)
    let n = c.len() - 1;
    let mut acc = BigInt::zero();
    let mut den_pow = vec![BigInt::one(); n + 1];
    for i in 1..=n {
        den_pow[i] = &den_pow[i - 1] * den;
    }
    let mut num_pow = BigInt::one();
    for (i, ci) in c.iter().enumerate() {
        acc += ci * &num_pow * &den_pow[n - i];
        num_pow *= num;
    }
    acc.is_zero()
}

/// All rational roots of a polynomial with rational coefficients, ascending,
/// each listed once. `None` when the candidate set is too large to enumerate.
pub fn rational_roots(p: &UniPoly) -> Option<Vec<Rational>> {
    assert!(p.is_rational(), "rational_roots needs rational coefficients");
    if p.degree().unwrap_or(0) == 0 {
        return Some(Vec::new());
    }
    let mut c = to_integer_poly(p);
    let mut roots = Vec::new();
    let shift = c.iter().take_while(|x| x.is_zero()).count();
    if shift > 0 {
        roots.push(Rational::zero());
        c.drain(..shift);
    }
    if c.len() > 1 {
        let nums = divisors(&c[0])?;
        let dens = divisors(c.last().unwrap())?;
        if nums.len() * dens.len() > CANDIDATE_LIMIT {
            return None;
        }
        for n in &nums {
            for d in &dens {
                if !n.gcd(d).is_one() {
                    continue;
                }
                for s in [n.clone(), -n.clone()] {
                    if vanishes_at(&c, &s, d) {
                        roots.push(Rational::new(s, d.clone()));
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Some(roots)
}

fn is_perfect_power(r: &Rational, k: u32) -> bool {
    let root_int = |n: &BigInt| -> bool {
        if n.is_negative() {
            if k % 2 == 0 {
                return false;
            }
            let a = -n;
            let rt = a.nth_root(k);
            rt.pow(k) == a
        } else {
            let rt = n.nth_root(k);
            &rt.pow(k) == n
        }
    };
    root_int(r.numer()) && root_int(r.denom())
}

/// Capelli's criterion for `t^d - a` over ℚ.
fn irreducible_binomial(p: &UniPoly) -> bool {
    let d = match p.degree() {
        Some(d) if d >= 2 => d,
        _ => return false,
    };
    let cs = p.coeffs();
    if cs[1..d].iter().any(|c| !c.is_zero()) {
        return false;
    }
    let (Some(c0), Some(lc)) = (cs[0].as_rational(), cs[d].as_rational()) else {
        return false;
    };
    if c0.is_zero() {
        return false;
    }
    let a = -(c0 / lc);
    let mut n = d;
    let mut prime = 2;
    while n > 1 {
        if n % prime == 0 {
            if is_perfect_power(&a, prime as u32) {
                return false;
            }
            while n % prime == 0 {
                n /= prime;
            }
        }
        prime += 1;
    }
    if d % 4 == 0 {
        let b = -a / Rational::from_integer(BigInt::from(4));
        if is_perfect_power(&b, 4) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;

    fn rat(p: &[i64]) -> UniPoly {
        UniPoly::from_ints(p)
    }

    #[test]
    fn cube_roots_of_unity() {
        let t = Tower::rational();
        let dirs = split_directions(&rat(&[-1, 0, 0, 1]), &t).unwrap();
        assert_eq!(dirs.len(), 2);
        assert_eq!((dirs[0].root.clone(), dirs[0].orbit, dirs[0].multiplicity), (Elem::int(1), 1, 1));
        assert_eq!((dirs[1].orbit, dirs[1].multiplicity), (2, 1));
        assert!(dirs[1].certified);
        assert_eq!(dirs[1].factor, rat(&[1, 1, 1]));
    }

    #[test]
    fn repeated_zero_root() {
        let dirs = split_directions(&rat(&[0, 0, 1]), &Tower::rational()).unwrap();
        assert_eq!(dirs.len(), 1);
        assert_eq!((dirs[0].root.clone(), dirs[0].orbit, dirs[0].multiplicity), (Elem::zero(), 1, 2));
    }

    #[test]
    fn sqrt_two_is_adjoined() {
        let dirs = split_directions(&rat(&[-2, 0, 1]), &Tower::rational()).unwrap();
        assert_eq!(dirs.len(), 1);
        assert_eq!((dirs[0].orbit, dirs[0].multiplicity), (2, 1));
        assert_eq!(dirs[0].tower.depth(), 1);
        assert!(dirs[0].certified);
    }

    #[test]
    fn binomials_follow_capelli() {
        assert!(irreducible_binomial(&rat(&[-2, 0, 0, 0, 0, 1])));
        assert!(!irreducible_binomial(&rat(&[-4, 0, 1])));
        // t^4 + 4 = (t^2+2t+2)(t^2-2t+2)
        assert!(!irreducible_binomial(&rat(&[4, 0, 0, 0, 1])));
        assert!(irreducible_binomial(&rat(&[-3, 0, 0, 0, 1])));
    }

    #[test]
    fn rational_roots_with_denominators() {
        // (2t - 1)(3t + 4)(t^2 + 1)
        let t = Tower::rational();
        let p = rat(&[-1, 2]).mul(&rat(&[4, 3]), &t).mul(&rat(&[1, 0, 1]), &t);
        assert_eq!(rational_roots(&p).unwrap(), vec![q(-4, 3), q(1, 2)]);
    }
}
