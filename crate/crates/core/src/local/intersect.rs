use super::Germ;
use crate::error::{Error, Result};
use crate::field::{BiPoly, Elem, FieldResult, Rational, Tower, UniPoly};

/// Resultant of two univariate polynomials (formal degrees = actual degrees).
fn uni_resultant(a: &UniPoly, b: &UniPoly, t: &Tower) -> FieldResult<Elem> {
    let (Some(m), Some(n)) = (a.degree(), b.degree()) else {
        return Ok(Elem::zero());
    };
    if n == 0 {
        return Ok(t.pow(b.lc().unwrap(), m as u32));
    }
    if m == 0 {
        return Ok(t.pow(a.lc().unwrap(), n as u32));
    }
    let (_, r) = a.divrem(b, t)?;
    let Some(dr) = r.degree() else {
        return Ok(Elem::zero());
    };
    let inner = uni_resultant(b, &r, t)?;
    let mut v = t.mul(&t.pow(b.lc().unwrap(), (m - dr) as u32), &inner);
    if m * n % 2 == 1 {
        v = t.neg(&v);
    }
    Ok(v)
}

/// `p(x0, y)` as a polynomial in `y`.
fn eval_x(p: &BiPoly, x0: &Rational, t: &Tower) -> UniPoly {
    let x0 = Elem::Q(x0.clone());
    UniPoly::new(p.y_coeffs().iter().map(|r| r.eval(&x0, t)).collect())
}

/// `Res_y(a, b)` as a polynomial in `x`, by evaluation at integer points where
/// neither leading coefficient in `y` vanishes, then Newton interpolation.
pub fn resultant_y(a: &BiPoly, b: &BiPoly, t: &Tower) -> Result<UniPoly> {
    let (Some(da), Some(db)) = (a.deg_y(), b.deg_y()) else {
        return Ok(UniPoly::zero());
    };
    let bound = (a.total_degree().unwrap() * b.total_degree().unwrap()) as usize;
    let lca = a.y_coeffs().pop().unwrap();
    let lcb = b.y_coeffs().pop().unwrap();
    let mut nodes: Vec<Rational> = Vec::with_capacity(bound + 1);
    let mut values: Vec<Elem> = Vec::with_capacity(bound + 1);
    let mut k: i64 = 0;
    while nodes.len() <= bound {
        let x0 = Rational::from_integer(k.into());
        k = if k > 0 { -k } else { -k + 1 };
        let e = Elem::Q(x0.clone());
        if t.is_zero(&lca.eval(&e, t))? || t.is_zero(&lcb.eval(&e, t))? {
            continue;
        }
        let (pa, pb) = (eval_x(a, &x0, t), eval_x(b, &x0, t));
        debug_assert_eq!((pa.degree(), pb.degree()), (Some(da as usize), Some(db as usize)));
        values.push(uni_resultant(&pa, &pb, t)?);
        nodes.push(x0);
    }
    // divided differences
    let n = nodes.len();
    let mut coef = values;
    for j in 1..n {
        for i in (j..n).rev() {
            let num = t.sub(&coef[i], &coef[i - 1]);
            let den = &nodes[i] - &nodes[i - j];
            coef[i] = t.scale_q(&num, &den.recip());
        }
    }
    // Newton form to monomial basis
    let mut poly = UniPoly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        let lin = UniPoly::new(vec![Elem::Q(-nodes[i].clone()), Elem::one()]);
        poly = poly.mul(&lin, t).add(&UniPoly::constant(coef[i].clone()), t);
    }
    Ok(poly)
}

/// `x ↦ x + c·y`
fn shear(p: &BiPoly, c: i64, t: &Tower) -> BiPoly {
    if c == 0 {
        return p.clone();
    }
    let px = BiPoly::from_int_terms(&[(1, 0, 1), (0, 1, c)]);
    p.compose(&px, &BiPoly::y(), t)
}

/// Whether the coefficient of `y^deg` is a nonzero constant.
fn y_monic_like(p: &BiPoly, t: &Tower) -> Result<bool> {
    let d = p.total_degree().unwrap_or(0);
    Ok(!t.is_zero(&p.coeff(0, d))?)
}

const SHEAR_ATTEMPTS: i64 = 256;

/// Local intersection number at the origin; `None` for a common component
/// through the origin.
pub fn intersection_multiplicity(a: &Germ, b: &Germ) -> Result<Option<u64>> {
    intersection_number(a.equation(), b.equation(), a.tower())
}

pub(crate) fn intersection_number(a: &BiPoly, b: &BiPoly, t: &Tower) -> Result<Option<u64>> {
    if !t.is_zero(&a.at_origin())? || !t.is_zero(&b.at_origin())? {
        return Ok(Some(0));
    }
    // Coprime inputs (the common case) never need the bivariate gcd: a
    // nonzero resultant after a shear certifies it.
    if let Some(r) = sheared_resultant(a, b, t)? {
        if let Some(o) = r.order(t)? {
            return Ok(Some(o as u64));
        }
    }
    let g = a.gcd(b, t)?;
    if g.is_constant() {
        return Err(Error::PreconditionViolated("no admissible shear found".into()));
    }
    if t.is_zero(&g.at_origin())? {
        return Ok(None);
    }
    let (a, b) = (a.div_exact(&g, t)?.unwrap(), b.div_exact(&g, t)?.unwrap());
    let r = sheared_resultant(&a, &b, t)?
        .ok_or_else(|| Error::PreconditionViolated("no admissible shear found".into()))?;
    Ok(Some(r.order(t)?.expect("coprime inputs have nonzero resultant") as u64))
}

/// `Res_y` after the first shear `x ↦ x + c·y` (c = 0, 1, 2, …) for which
/// one input is monic-like in `y` and the line `x = 0` meets both curves
/// only at the origin. Its order at 0 is the intersection number when the
/// inputs are coprime; it vanishes identically otherwise.
fn sheared_resultant(a: &BiPoly, b: &BiPoly, t: &Tower) -> Result<Option<UniPoly>> {
    for c in 0..SHEAR_ATTEMPTS {
        let (sa, sb) = (shear(a, c, t), shear(b, c, t));
        let (sa, sb) = if y_monic_like(&sa, t)? {
            (sa, sb)
        } else if y_monic_like(&sb, t)? {
            (sb, sa)
        } else {
            continue;
        };
        let h = sa.restrict_x0().gcd(&sb.restrict_x0(), t)?;
        let only_origin = match h.degree() {
            None => false,
            Some(d) => h == UniPoly::monomial(d),
        };
        if only_origin {
            return Ok(Some(resultant_y(&sa, &sb, t)?));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(terms)
    }

    fn im(a: &[(u32, u32, i64)], b: &[(u32, u32, i64)]) -> Option<u64> {
        intersection_number(&p(a), &p(b), &Tower::rational()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(im(&[(0, 1, 1), (2, 0, -1)], &[(0, 1, 1), (2, 0, 1)]), Some(2));
        assert_eq!(im(&[(1, 0, 1)], &[(0, 1, 1)]), Some(1));
        assert_eq!(im(&[(1, 0, 1)], &[(1, 0, 1)]), None);
        assert_eq!(im(&[(0, 0, 1), (1, 0, 1)], &[(0, 1, 1)]), Some(0));
        // cusp and its tangent line: 3
        assert_eq!(im(&[(0, 2, 1), (3, 0, -1)], &[(0, 1, 1)]), Some(3));
        // two cusps y^2-x^3, y^2+x^3 ... resultant order 6
        assert_eq!(im(&[(0, 2, 1), (3, 0, -1)], &[(0, 2, 1), (3, 0, 1)]), Some(6));
        // common factor away from the origin is ignored
        assert_eq!(
            im(&[(1, 0, 1), (2, 0, 1), (1, 1, 1)], &[(0, 1, 1), (1, 1, 1), (0, 2, 1)]),
            Some(1)
        );
    }

    #[test]
    fn uni_resultant_matches_product() {
        let t = Tower::rational();
        // Res(t^2 - 1, t - 2) = (1-2)(-1-2)·... = 3
        let a = UniPoly::from_ints(&[-1, 0, 1]);
        let b = UniPoly::from_ints(&[-2, 1]);
        assert_eq!(uni_resultant(&a, &b, &t).unwrap(), Elem::int(3));
        assert_eq!(uni_resultant(&b, &a, &t).unwrap(), Elem::int(3));
    }
}
