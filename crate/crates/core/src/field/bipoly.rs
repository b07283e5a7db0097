use std::collections::BTreeMap;

use super::{Elem, FieldError, FieldResult, Tower, UniPoly};

/// Sparse bivariate polynomial in `x, y`; the key `(i, j)` stands for `x^i y^j`.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Elem>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::constant(Elem::one())
    }

    pub fn constant(c: Elem) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(0, 0, c, &Tower::rational());
        p
    }

    pub fn x() -> Self {
        BiPoly::monomial(1, 0, Elem::one())
    }

    pub fn y() -> Self {
        BiPoly::monomial(0, 1, Elem::one())
    }

    pub fn monomial(i: u32, j: u32, c: Elem) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        BiPoly { terms }
    }

    /// Build from integer triples `(i, j, c)`.
    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        let t = Tower::rational();
        let mut p = BiPoly::zero();
        for &(i, j, c) in terms {
            p.add_term(i, j, Elem::int(c), &t);
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Elem)>, tower: &Tower) -> Self {
        let mut p = BiPoly::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, c, tower);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Elem {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Elem::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.level() == 0)
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Elem, tower: &Tower) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Elem::zero);
        *e = tower.add(e, &c);
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    /// Constant term.
    pub fn at_origin(&self) -> Elem {
        self.coeff(0, 0)
    }

    /// Order of vanishing at the origin: least total degree of a nonzero term.
    /// Coefficients at that degree are checked to be units so the answer holds
    /// at every root of the tower. `None` for the zero polynomial.
    pub fn order(&self, tower: &Tower) -> FieldResult<Option<u32>> {
        let mut by_degree: BTreeMap<u32, Vec<&Elem>> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            by_degree.entry(i + j).or_default().push(c);
        }
        for (d, cs) in by_degree {
            let mut any = false;
            for c in cs {
                if !tower.is_zero(c)? {
                    any = true;
                }
            }
            if any {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j == d)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// For a form of degree `d`: its dehomogenization `L(1, t)` as a polynomial in `t`.
    pub fn dehomogenize_x(&self) -> UniPoly {
        let n = self.deg_y().unwrap_or(0) as usize;
        let mut c = vec![Elem::zero(); n + 1];
        for (&(_, j), v) in &self.terms {
            c[j as usize] = v.clone();
        }
        UniPoly::new(c)
    }

    /// Largest `e` with `x^e` dividing the polynomial.
    pub fn x_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).min()
    }

    pub fn y_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).min()
    }

    pub fn add(&self, other: &Self, tower: &Tower) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone(), tower);
        }
        out
    }

    pub fn neg(&self, tower: &Tower) -> Self {
        BiPoly { terms: self.terms.iter().map(|(k, c)| (*k, tower.neg(c))).collect() }
    }

    pub fn sub(&self, other: &Self, tower: &Tower) -> Self {
        self.add(&other.neg(tower), tower)
    }

    pub fn scale(&self, c: &Elem, tower: &Tower) -> Self {
        let mut out = BiPoly::zero();
        for (&(i, j), v) in &self.terms {
            out.add_term(i, j, tower.mul(v, c), tower);
        }
        out
    }

    pub fn mul(&self, other: &Self, tower: &Tower) -> Self {
        let mut out = BiPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                out.add_term(i + k, j + l, tower.mul(a, b), tower);
            }
        }
        out
    }

    pub fn pow(&self, e: u32, tower: &Tower) -> Self {
        let mut acc = BiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, tower);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, tower);
            }
        }
        acc
    }

    /// Substitute `x ↦ px`, `y ↦ py`.
    pub fn compose(&self, px: &BiPoly, py: &BiPoly, tower: &Tower) -> Self {
        let max_i = self.deg_x().unwrap_or(0);
        let max_j = self.deg_y().unwrap_or(0);
        let mut xp = vec![BiPoly::one()];
        for _ in 0..max_i {
            let next = xp.last().unwrap().mul(px, tower);
            xp.push(next);
        }
        let mut yp = vec![BiPoly::one()];
        for _ in 0..max_j {
            let next = yp.last().unwrap().mul(py, tower);
            yp.push(next);
        }
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            let t = xp[i as usize].mul(&yp[j as usize], tower).scale(c, tower);
            out = out.add(&t, tower);
        }
        out
    }

    pub fn swap(&self) -> Self {
        BiPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect() }
    }

    /// Chart `y ↦ x·(y + t)` of the blowup at the origin, centred at direction `t`.
    pub fn subst_chart_x(&self, t: &Elem, tower: &Tower) -> Self {
        let max_j = self.deg_y().unwrap_or(0) as usize;
        // (y + t)^j expanded once per j
        let mut powers: Vec<UniPoly> = vec![UniPoly::constant(Elem::one())];
        let lin = UniPoly::new(vec![t.clone(), Elem::one()]);
        for _ in 0..max_j {
            let next = powers.last().unwrap().mul(&lin, tower);
            powers.push(next);
        }
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            for (k, pk) in powers[j as usize].coeffs().iter().enumerate() {
                if pk.is_zero() {
                    continue;
                }
                out.add_term(i + j, k as u32, tower.mul(c, pk), tower);
            }
        }
        out
    }

    /// Chart `x ↦ x·y` of the blowup at the origin (the direction `x = 0`).
    pub fn subst_chart_y(&self) -> Self {
        BiPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((i, i + j), c.clone())).collect() }
    }

    /// Exact division by `x^e`; fails if some term has lower `x`-degree.
    pub fn div_x_pow(&self, e: u32) -> Option<Self> {
        if self.terms.keys().any(|&(i, _)| i < e) {
            return None;
        }
        Some(BiPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((i - e, j), c.clone())).collect() })
    }

    pub fn div_y_pow(&self, e: u32) -> Option<Self> {
        self.swap().div_x_pow(e).map(|p| p.swap())
    }

    /// Drop every term of total degree below `d` (virtual transform helper).
    pub fn drop_below(&self, d: u32) -> Self {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j >= d)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn derivative_x(&self, tower: &Tower) -> Self {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                out.add_term(i - 1, j, tower.mul(c, &Elem::int(i as i64)), tower);
            }
        }
        out
    }

    pub fn derivative_y(&self, tower: &Tower) -> Self {
        self.swap().derivative_x(tower).swap()
    }

    /// Restriction to the line `x = 0`, as a polynomial in `y`.
    pub fn restrict_x0(&self) -> UniPoly {
        let n = self.deg_y().unwrap_or(0) as usize;
        let mut c = vec![Elem::zero(); n + 1];
        for (&(i, j), v) in &self.terms {
            if i == 0 {
                c[j as usize] = v.clone();
            }
        }
        UniPoly::new(c)
    }

    /// View as a polynomial in `y` whose coefficients are polynomials in `x`.
    pub fn y_coeffs(&self) -> Vec<UniPoly> {
        let n = match self.deg_y() {
            Some(n) => n as usize,
            None => return Vec::new(),
        };
        let mut rows: Vec<Vec<Elem>> = vec![Vec::new(); n + 1];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, Elem::zero());
            }
            row[i as usize] = c.clone();
        }
        rows.into_iter().map(UniPoly::new).collect()
    }

    pub fn from_y_coeffs(cs: &[UniPoly]) -> Self {
        let mut terms = BTreeMap::new();
        for (j, p) in cs.iter().enumerate() {
            for (i, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    terms.insert((i as u32, j as u32), c.clone());
                }
            }
        }
        BiPoly { terms }
    }

    /// Leading term for the lexicographic order with `x ≻ y`.
    pub fn lex_leading(&self) -> Option<((u32, u32), &Elem)> {
        self.terms.iter().next_back().map(|(k, c)| (*k, c))
    }

    /// Scale so that the lex-leading coefficient is 1.
    pub fn lex_monic(&self, tower: &Tower) -> FieldResult<Self> {
        match self.lex_leading() {
            None => Ok(BiPoly::zero()),
            Some((_, c)) if c.is_one() => Ok(self.clone()),
            Some((_, c)) => {
                let inv = tower.inv(c)?;
                Ok(self.scale(&inv, tower))
            }
        }
    }

    /// Exact quotient `self / d`, `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Self, tower: &Tower) -> FieldResult<Option<Self>> {
        let ((di, dj), dc) = match d.lex_leading() {
            Some((k, c)) => (k, c.clone()),
            None => return Err(FieldError::DivisionByZero),
        };
        let inv = tower.inv(&dc)?;
        let mut rem = self.clone();
        let mut quot = BiPoly::zero();
        while let Some(((ri, rj), rc)) = rem.lex_leading() {
            if ri < di || rj < dj {
                return Ok(None);
            }
            let c = tower.mul(rc, &inv);
            let m = BiPoly::monomial(ri - di, rj - dj, c);
            rem = rem.sub(&m.mul(d, tower), tower);
            quot = quot.add(&m, tower);
        }
        Ok(Some(quot))
    }

    /// Greatest common divisor, normalized lex-monic. `gcd(p, 0) = p` normalized.
    pub fn gcd(&self, other: &Self, tower: &Tower) -> FieldResult<Self> {
        if self.is_zero() {
            return other.lex_monic(tower);
        }
        if other.is_zero() {
            return self.lex_monic(tower);
        }
        let (ca, pa) = self.content_primitive(tower)?;
        let (cb, pb) = other.content_primitive(tower)?;
        let content = ca.gcd(&cb, tower)?;
        let prim = primitive_gcd(pa, pb, tower)?;
        let content_poly = BiPoly::from_y_coeffs(&[content]);
        content_poly.mul(&prim, tower).lex_monic(tower)
    }

    /// Split into content (a polynomial in `x`) and primitive part in `y`.
    fn content_primitive(&self, tower: &Tower) -> FieldResult<(UniPoly, BiPoly)> {
        let cs = self.y_coeffs();
        let mut g = UniPoly::zero();
        for c in &cs {
            g = g.gcd(c, tower)?;
            if g.degree() == Some(0) {
                break;
            }
        }
        if g.degree().unwrap_or(0) == 0 {
            return Ok((UniPoly::constant(Elem::one()), self.clone()));
        }
        let mut out = Vec::with_capacity(cs.len());
        for c in &cs {
            out.push(c.div_exact(&g, tower)?.expect("content divides"));
        }
        Ok((g, BiPoly::from_y_coeffs(&out)))
    }

    /// Pseudo-remainder in `y` over `K[x]`.
    fn prem_y(&self, d: &Self, tower: &Tower) -> Self {
        let dc = d.y_coeffs();
        let dn = dc.len() - 1;
        let lc = dc[dn].clone();
        let mut r = self.y_coeffs();
        while r.len() > dn && !r.is_empty() {
            let top = r.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = r.len() - dn;
            for c in r.iter_mut() {
                *c = c.mul(&lc, tower);
            }
            for (j, dj) in dc[..dn].iter().enumerate() {
                r[k + j] = r[k + j].sub(&top.mul(dj, tower), tower);
            }
            while r.last().is_some_and(UniPoly::is_zero) {
                r.pop();
            }
        }
        BiPoly::from_y_coeffs(&r)
    }

    pub fn render(&self, tower: &Tower) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (&(i, j), c) in self.terms.iter().rev() {
            let cs = tower.render(c);
            let cs = if c.level() > 0 { format!("({cs})") } else { cs };
            let mut mono = String::new();
            if i > 0 {
                mono.push_str(&if i == 1 { "x".to_string() } else { format!("x^{i}") });
            }
            if j > 0 {
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(&if j == 1 { "y".to_string() } else { format!("y^{j}") });
            }
            parts.push(if mono.is_empty() {
                cs
            } else if c.is_one() {
                mono
            } else {
                format!("{cs}*{mono}")
            });
        }
        parts.join(" + ")
    }
}

fn primitive_gcd(a: BiPoly, b: BiPoly, tower: &Tower) -> FieldResult<BiPoly> {
    let (mut a, mut b) = (a, b);
    if a.deg_y() < b.deg_y() {
        std::mem::swap(&mut a, &mut b);
    }
    if b.deg_y() == Some(0) {
        // b is a unit multiple of its (trivial) content
        return Ok(BiPoly::one());
    }
    loop {
        let r = a.prem_y(&b, tower);
        if r.is_zero() {
            return Ok(b);
        }
        if r.deg_y() == Some(0) {
            return Ok(BiPoly::one());
        }
        let (_, pr) = r.content_primitive(tower)?;
        a = b;
        b = pr;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    #[test]
    fn gcd_of_monomials() {
        let t = Tower::rational();
        let g = p(&[(2, 1, 1)]).gcd(&p(&[(1, 2, 1)]), &t).unwrap();
        assert_eq!(g, p(&[(1, 1, 1)]));
    }

    #[test]
    fn gcd_coprime_and_with_zero() {
        let t = Tower::rational();
        let a = p(&[(2, 0, 1), (0, 2, 1)]);
        let b = p(&[(1, 0, 1), (0, 1, 1)]);
        assert_eq!(a.gcd(&b, &t).unwrap(), BiPoly::one());
        let c = p(&[(1, 0, 3), (0, 1, 6)]);
        assert_eq!(c.gcd(&BiPoly::zero(), &t).unwrap(), p(&[(1, 0, 1), (0, 1, 2)]));
    }

    #[test]
    fn gcd_divides_both() {
        let t = Tower::rational();
        let common = p(&[(0, 1, 1), (2, 0, -1), (1, 1, 3)]);
        let a = common.mul(&p(&[(1, 0, 2), (0, 2, 1)]), &t);
        let b = common.mul(&p(&[(0, 1, 1), (3, 0, 1)]), &t);
        let g = a.gcd(&b, &t).unwrap();
        assert!(a.div_exact(&g, &t).unwrap().is_some());
        assert!(b.div_exact(&g, &t).unwrap().is_some());
        assert_eq!(g.total_degree(), Some(2));
    }

    #[test]
    fn chart_substitution_of_cusp() {
        let t = Tower::rational();
        // y^2 - x^3, y = x*y1 -> x^2 (y1^2 - x)
        let cusp = p(&[(0, 2, 1), (3, 0, -1)]);
        let s = cusp.subst_chart_x(&Elem::zero(), &t).div_x_pow(2).unwrap();
        assert_eq!(s, p(&[(0, 2, 1), (1, 0, -1)]));
        assert_eq!(s.order(&t).unwrap(), Some(1));
    }
}
