//! Exact coefficient arithmetic over ℚ and towers of simple algebraic
//! extensions.
//!
//! A [`Tower`] is a list of levels `t1, t2, …`, each adjoined by a monic
//! modulus whose coefficients live in the previous level. Elements are stored
//! recursively ([`Elem`]) and always reduced. Moduli are not required to be
//! irreducible: inversion follows the dynamic-evaluation (D5) discipline and
//! reports a [`FieldError::ModulusSplit`] as soon as a zero divisor is found,
//! so the caller can branch on the two factors.

mod bipoly;
mod json;
mod poly;
mod split;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use bipoly::BiPoly;
pub use json::{CoeffJson, FormatError, LevelJson, PolyJson, TowerJson};
pub use poly::UniPoly;
pub use split::{rational_roots, split_directions, Direction};

pub type Rational = BigRational;

/// Build a rational from a pair of machine integers.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Build an integral rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    /// A zero divisor was met while inverting modulo the modulus of `level`;
    /// `factor` is a proper monic factor of that modulus.
    #[error("modulus of level {level} splits (factor of degree {})", factor.degree().unwrap_or(0))]
    ModulusSplit { level: usize, factor: UniPoly },
    #[error("invalid tower: {0}")]
    InvalidTower(String),
}

pub type FieldResult<T> = Result<T, FieldError>;

/// An element of a tower, in recursive dense form.
///
/// `Alg { level, coeffs }` is a polynomial in the generator of `level`
/// (1-based) with at least two coefficients, the last one nonzero, and every
/// coefficient of strictly lower level. Constants collapse to the level below,
/// so every element has a unique representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Q(Rational),
    Alg { level: usize, coeffs: Vec<Elem> },
}

impl Elem {
    pub fn zero() -> Self {
        Elem::Q(Rational::zero())
    }

    pub fn one() -> Self {
        Elem::Q(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        Elem::Q(qi(n))
    }

    pub fn level(&self) -> usize {
        match self {
            Elem::Q(_) => 0,
            Elem::Alg { level, .. } => *level,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Elem::Q(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Elem::Q(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Elem::Q(r) => Some(r),
            Elem::Alg { .. } => None,
        }
    }

    fn normalize(level: usize, mut coeffs: Vec<Elem>) -> Elem {
        while coeffs.last().is_some_and(Elem::is_zero) {
            coeffs.pop();
        }
        match coeffs.len() {
            0 => Elem::zero(),
            1 => coeffs.pop().unwrap(),
            _ => Elem::Alg { level, coeffs },
        }
    }

    /// Coefficients of `self` viewed as a polynomial in the generator of `level`.
    fn coeffs_at(&self, level: usize) -> Vec<Elem> {
        match self {
            Elem::Alg { level: l, coeffs } if *l == level => coeffs.clone(),
            _ if self.is_zero() => Vec::new(),
            _ => vec![self.clone()],
        }
    }
}

impl From<Rational> for Elem {
    fn from(r: Rational) -> Self {
        Elem::Q(r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub var: String,
    /// Monic modulus, coefficients from the constant term up.
    pub modulus: Vec<Elem>,
}

impl Level {
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

/// A finitely presented coefficient domain `ℚ[t1,…,tn]/(m1,…,mn)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Tower {
    levels: Arc<Vec<Level>>,
}

impl Tower {
    /// The empty tower, i.e. ℚ.
    pub fn rational() -> Self {
        Tower::default()
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level(&self, level: usize) -> &Level {
        &self.levels[level - 1]
    }

    /// Total degree of the tower over ℚ.
    pub fn degree(&self) -> usize {
        self.levels.iter().map(Level::degree).product()
    }

    /// Keep only the first `depth` levels.
    pub fn truncate(&self, depth: usize) -> Tower {
        Tower { levels: Arc::new(self.levels[..depth].to_vec()) }
    }

    /// True when `self` is `other` followed by zero or more levels.
    pub fn extends(&self, other: &Tower) -> bool {
        other.depth() <= self.depth() && self.levels[..other.depth()] == other.levels[..]
    }

    /// Adjoin a root of `modulus` (made monic). The modulus must have degree ≥ 2
    /// and coefficients in this tower.
    pub fn extend(&self, var: impl Into<String>, modulus: &UniPoly) -> FieldResult<Tower> {
        let deg = modulus.degree().unwrap_or(0);
        if deg < 2 {
            return Err(FieldError::InvalidTower(format!("modulus degree {deg} < 2")));
        }
        let monic = modulus.monic(self)?;
        if monic.coeffs().iter().any(|c| c.level() > self.depth()) {
            return Err(FieldError::InvalidTower("modulus coefficient outside base".into()));
        }
        let mut levels = (*self.levels).clone();
        levels.push(Level { var: var.into(), modulus: monic.coeffs().to_vec() });
        Ok(Tower { levels: Arc::new(levels) })
    }

    /// Replace the modulus of the top level by one of its factors.
    pub fn with_top_modulus(&self, modulus: &UniPoly) -> FieldResult<Tower> {
        let var = self.levels.last().map(|l| l.var.clone()).unwrap_or_default();
        self.truncate(self.depth() - 1).extend(var, modulus)
    }

    /// The generator `t_level`.
    pub fn generator(&self, level: usize) -> Elem {
        Elem::Alg { level, coeffs: vec![Elem::zero(), Elem::one()] }
    }

    /// Validate moduli: monic, degree ≥ 2, coefficients reduced in lower levels.
    /// Squarefreeness is checked through a gcd with the derivative.
    pub fn validate(&self) -> FieldResult<()> {
        for (idx, level) in self.levels.iter().enumerate() {
            let base = self.truncate(idx);
            if level.degree() < 2 {
                return Err(FieldError::InvalidTower(format!("level {} has degree < 2", idx + 1)));
            }
            if !level.modulus.last().is_some_and(Elem::is_one) {
                return Err(FieldError::InvalidTower(format!("level {} modulus not monic", idx + 1)));
            }
            let m = UniPoly::new(level.modulus.clone());
            let g = m.gcd(&m.derivative(&base), &base)?;
            if g.degree().unwrap_or(0) > 0 {
                return Err(FieldError::InvalidTower(format!(
                    "level {} modulus not squarefree",
                    idx + 1
                )));
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let (la, lb) = (a.level(), b.level());
        match (a, b) {
            (Elem::Q(x), Elem::Q(y)) => Elem::Q(x + y),
            _ if la == lb => {
                let (ca, cb) = (a.coeffs_at(la), b.coeffs_at(la));
                let n = ca.len().max(cb.len());
                let zero = Elem::zero();
                let coeffs = (0..n)
                    .map(|i| self.add(ca.get(i).unwrap_or(&zero), cb.get(i).unwrap_or(&zero)))
                    .collect();
                Elem::normalize(la, coeffs)
            }
            _ if la > lb => {
                let mut c = a.coeffs_at(la);
                c[0] = self.add(&c[0], b);
                Elem::normalize(la, c)
            }
            _ => self.add(b, a),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Q(x) => Elem::Q(-x),
            Elem::Alg { level, coeffs } => {
                Elem::Alg { level: *level, coeffs: coeffs.iter().map(|c| self.neg(c)).collect() }
            }
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::zero();
        }
        let (la, lb) = (a.level(), b.level());
        match (a, b) {
            (Elem::Q(x), Elem::Q(y)) => Elem::Q(x * y),
            _ if la == lb => {
                let (ca, cb) = (a.coeffs_at(la), b.coeffs_at(la));
                let mut prod = vec![Elem::zero(); ca.len() + cb.len() - 1];
                for (i, x) in ca.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in cb.iter().enumerate() {
                        let t = self.mul(x, y);
                        prod[i + j] = self.add(&prod[i + j], &t);
                    }
                }
                self.reduce(la, prod)
            }
            _ if la > lb => {
                let c = a.coeffs_at(la).iter().map(|x| self.mul(x, b)).collect();
                Elem::normalize(la, c)
            }
            _ => self.mul(b, a),
        }
    }

    pub fn scale_q(&self, a: &Elem, r: &Rational) -> Elem {
        self.mul(a, &Elem::Q(r.clone()))
    }

    pub fn pow(&self, a: &Elem, mut e: u32) -> Elem {
        let mut base = a.clone();
        let mut acc = Elem::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Reduce a coefficient vector in `t_level` modulo the level's modulus.
    fn reduce(&self, level: usize, mut coeffs: Vec<Elem>) -> Elem {
        let m = &self.level(level).modulus;
        let d = m.len() - 1;
        while coeffs.len() > d {
            let top = coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = coeffs.len() - d;
            for (j, mj) in m[..d].iter().enumerate() {
                let t = self.mul(&top, mj);
                coeffs[shift + j] = self.sub(&coeffs[shift + j], &t);
            }
        }
        Elem::normalize(level, coeffs)
    }

    /// Multiplicative inverse with dynamic evaluation.
    pub fn inv(&self, a: &Elem) -> FieldResult<Elem> {
        match a {
            Elem::Q(x) if x.is_zero() => Err(FieldError::DivisionByZero),
            Elem::Q(x) => Ok(Elem::Q(x.recip())),
            Elem::Alg { level, coeffs } => {
                let modulus = UniPoly::new(self.level(*level).modulus.clone());
                let value = UniPoly::new(coeffs.clone());
                let (g, _, s) = modulus.ext_gcd(&value, self)?;
                if g.degree().unwrap_or(0) > 0 {
                    return Err(FieldError::ModulusSplit { level: *level, factor: g });
                }
                let c = self.inv(&g.coeffs()[0])?;
                let s = s.scale(&c, self);
                Ok(self.reduce(*level, s.coeffs().to_vec()))
            }
        }
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> FieldResult<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Zero test that is uniform over every root of every modulus: `Ok(true)`
    /// for the zero element, `Ok(false)` for a unit, a split for a zero divisor.
    pub fn is_zero(&self, a: &Elem) -> FieldResult<bool> {
        if a.is_zero() {
            return Ok(true);
        }
        if a.level() > 0 {
            self.inv(a)?;
        }
        Ok(false)
    }

    /// Exact arithmetic entry point mirroring the binary/unary operations.
    pub fn arith(&self, a: &Elem, b: &Elem, op: ArithOp) -> FieldResult<Elem> {
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::Invert => self.inv(a),
        }
    }

    /// Render an element with the tower's variable names.
    pub fn render(&self, a: &Elem) -> String {
        match a {
            Elem::Q(r) => render_rational(r),
            Elem::Alg { level, coeffs } => {
                let var = &self.level(*level).var;
                let mut parts = Vec::new();
                for (i, c) in coeffs.iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    let cs = self.render(c);
                    let cs = if c.level() > 0 { format!("({cs})") } else { cs };
                    parts.push(match i {
                        0 => cs,
                        1 => format!("{cs}*{var}"),
                        _ => format!("{cs}*{var}^{i}"),
                    });
                }
                parts.join(" + ")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Invert,
}

/// `p/q` in lowest terms, or `p` when integral.
pub fn render_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Decimal rendering with `digits` significant digits, computed exactly and
/// rounded in the last place. Display only.
pub fn render_decimal(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10);
    let mut exp: i64 = 0;
    let mut scaled = a.clone();
    while scaled >= Rational::from_integer(ten.clone()) {
        scaled /= Rational::from_integer(ten.clone());
        exp += 1;
    }
    while scaled < Rational::one() {
        scaled *= Rational::from_integer(ten.clone());
        exp -= 1;
    }
    let mut mant = scaled;
    for _ in 1..digits {
        mant *= Rational::from_integer(ten.clone());
    }
    let digits_str = mant.round().to_integer().to_string();
    // rounding may carry into a new digit
    let (digits_str, exp) = if digits_str.len() > digits {
        (digits_str[..digits].to_string(), exp + 1)
    } else {
        (digits_str, exp)
    };
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits_str)
    } else if point as usize >= digits_str.len() {
        format!("{}{}", digits_str, "0".repeat(point as usize - digits_str.len()))
    } else {
        format!("{}.{}", &digits_str[..point as usize], &digits_str[point as usize..])
    };
    let body = if body.contains('.') {
        body.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        body
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Tower::rational().render_unnamed(self))
    }
}

impl Tower {
    fn render_unnamed(&self, a: &Elem) -> String {
        match a {
            Elem::Q(r) => render_rational(r),
            Elem::Alg { level, coeffs } => {
                let inner: Vec<String> = coeffs.iter().map(|c| self.render_unnamed(c)).collect();
                format!("t{}[{}]", level, inner.join(", "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2_tower() -> Tower {
        let m = UniPoly::new(vec![Elem::int(-2), Elem::zero(), Elem::one()]);
        Tower::rational().extend("t", &m).unwrap()
    }

    #[test]
    fn invert_generator_of_sqrt2() {
        let t = sqrt2_tower();
        let g = t.generator(1);
        let inv = t.inv(&g).unwrap();
        // t/2
        assert_eq!(inv, Elem::Alg { level: 1, coeffs: vec![Elem::zero(), Elem::Q(q(1, 2))] });
        assert!(t.mul(&g, &inv).is_one());
    }

    #[test]
    fn rational_inverse_pair() {
        let t = Tower::rational();
        let r = t.arith(&Elem::Q(q(1, 3)), &Elem::Q(q(3, 1)), ArithOp::Mul).unwrap();
        assert!(r.is_one());
    }

    #[test]
    fn zero_divisor_reports_split() {
        let m = UniPoly::new(vec![Elem::int(-1), Elem::zero(), Elem::one()]);
        let t = Tower::rational().extend("t", &m).unwrap();
        let a = t.sub(&t.generator(1), &Elem::one());
        match t.inv(&a) {
            Err(FieldError::ModulusSplit { level, factor }) => {
                assert_eq!(level, 1);
                assert_eq!(factor, UniPoly::new(vec![Elem::int(-1), Elem::one()]));
            }
            other => panic!("expected split, got {other:?}"),
        }
        assert_eq!(t.inv(&Elem::zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn two_level_tower_inverse() {
        // t1^2 = 2, t2^2 = t1
        let t1 = sqrt2_tower();
        let m2 = UniPoly::new(vec![t1.neg(&t1.generator(1)), Elem::zero(), Elem::one()]);
        let t = t1.extend("u", &m2).unwrap();
        let a = t.add(&t.generator(2), &t.generator(1));
        let inv = t.inv(&a).unwrap();
        assert!(t.mul(&a, &inv).is_one());
        let u4 = t.pow(&t.generator(2), 4);
        assert_eq!(u4, Elem::int(2));
        t.validate().unwrap();
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(render_decimal(&q(-25, 7), 10), "-3.571428571");
        assert_eq!(render_decimal(&q(-1283, 410), 6), "-3.12927");
        assert_eq!(render_decimal(&qi(5292), 10), "5292");
        assert_eq!(render_decimal(&q(1, 800), 3), "0.00125");
        assert_eq!(parse_rational("-225/67"), Some(q(-225, 67)));
        assert_eq!(parse_rational("x"), None);
    }
}
