use super::{Elem, FieldResult, Tower};

/// Dense univariate polynomial over a tower, coefficients from degree 0 up.
/// The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(Elem::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn constant(c: Elem) -> Self {
        UniPoly::new(vec![c])
    }

    /// `t^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![Elem::zero(); n + 1];
        c[n] = Elem::one();
        UniPoly { coeffs: c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UniPoly::new(c.iter().map(|&x| Elem::int(x)).collect())
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(Elem::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&Elem> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient (zero-divisor aware).
    pub fn order(&self, tower: &Tower) -> FieldResult<Option<usize>> {
        for (i, c) in self.coeffs.iter().enumerate() {
            if !tower.is_zero(c)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.level() == 0)
    }

    pub fn add(&self, other: &Self, tower: &Tower) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Elem::zero();
        UniPoly::new(
            (0..n)
                .map(|i| {
                    tower.add(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z))
                })
                .collect(),
        )
    }

    pub fn neg(&self, tower: &Tower) -> Self {
        UniPoly { coeffs: self.coeffs.iter().map(|c| tower.neg(c)).collect() }
    }

    pub fn sub(&self, other: &Self, tower: &Tower) -> Self {
        self.add(&other.neg(tower), tower)
    }

    pub fn mul(&self, other: &Self, tower: &Tower) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Elem::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = tower.mul(a, b);
                out[i + j] = tower.add(&out[i + j], &t);
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &Elem, tower: &Tower) -> Self {
        UniPoly::new(self.coeffs.iter().map(|x| tower.mul(x, c)).collect())
    }

    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Elem::zero(); n];
        c.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs: c }
    }

    pub fn pow(&self, e: u32, tower: &Tower) -> Self {
        let mut acc = UniPoly::constant(Elem::one());
        for _ in 0..e {
            acc = acc.mul(self, tower);
        }
        acc
    }

    pub fn derivative(&self, tower: &Tower) -> Self {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| tower.mul(c, &Elem::int(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Elem, tower: &Tower) -> Elem {
        let mut acc = Elem::zero();
        for c in self.coeffs.iter().rev() {
            acc = tower.add(&tower.mul(&acc, x), c);
        }
        acc
    }

    /// Euclidean division over the tower's (dynamically evaluated) field.
    pub fn divrem(&self, d: &Self, tower: &Tower) -> FieldResult<(Self, Self)> {
        let dd = match d.degree() {
            Some(dd) => dd,
            None => return Err(super::FieldError::DivisionByZero),
        };
        let inv = tower.inv(d.lc().unwrap())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut quot = vec![Elem::zero(); rem.len() - dd];
        while rem.len() > dd {
            let top = rem.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let c = tower.mul(&top, &inv);
            let k = rem.len() - dd;
            for (j, dj) in d.coeffs[..dd].iter().enumerate() {
                let t = tower.mul(&c, dj);
                rem[k + j] = tower.sub(&rem[k + j], &t);
            }
            quot[k] = c;
        }
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }

    /// Quotient when the division is exact, `None` otherwise.
    pub fn div_exact(&self, d: &Self, tower: &Tower) -> FieldResult<Option<Self>> {
        let (q, r) = self.divrem(d, tower)?;
        Ok(if r.is_zero() { Some(q) } else { None })
    }

    pub fn monic(&self, tower: &Tower) -> FieldResult<Self> {
        match self.lc() {
            None => Ok(UniPoly::zero()),
            Some(lc) if lc.is_one() => Ok(self.clone()),
            Some(lc) => {
                let inv = tower.inv(lc)?;
                Ok(self.scale(&inv, tower))
            }
        }
    }

    /// Largest `g` such that every exponent with a nonzero coefficient is a multiple of `g`.
    fn stride(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(0, |g, (i, _)| num_integer::gcd(g, i))
    }

    fn compress(&self, g: usize) -> Self {
        UniPoly::new(self.coeffs.iter().step_by(g).cloned().collect())
    }

    fn expand(&self, g: usize) -> Self {
        let mut c = vec![Elem::zero(); self.coeffs.len().saturating_sub(1) * g + 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[i * g] = x.clone();
        }
        UniPoly::new(c)
    }

    /// Monic gcd (the zero polynomial only when both inputs vanish).
    pub fn gcd(&self, other: &Self, tower: &Tower) -> FieldResult<Self> {
        let g = num_integer::gcd(self.stride(), other.stride());
        if g > 1 {
            let inner = self.compress(g).gcd(&other.compress(g), tower)?;
            return Ok(inner.expand(g));
        }
        let (mut a, mut b) = (self.monic(tower)?, other.monic(tower)?);
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (_, r) = a.divrem(&b, tower)?;
            a = b;
            b = r.monic(tower)?;
        }
        Ok(a)
    }

    /// Extended Euclid: `(g, s, t)` with `g = s·self + t·other`, `g` not normalized.
    pub fn ext_gcd(&self, other: &Self, tower: &Tower) -> FieldResult<(Self, Self, Self)> {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let one = UniPoly::constant(Elem::one());
        let (mut s0, mut s1) = (one.clone(), UniPoly::zero());
        let (mut t0, mut t1) = (UniPoly::zero(), one);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, tower)?;
            let s = s0.sub(&q.mul(&s1, tower), tower);
            let t = t0.sub(&q.mul(&t1, tower), tower);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        Ok((r0, s0, t0))
    }

    /// Yun's squarefree decomposition: `[(a1, 1), (a2, 2), …]` with
    /// `self = lc · ∏ ai^i`, every `ai` monic and squarefree, pairwise coprime.
    pub fn squarefree_decomposition(&self, tower: &Tower) -> FieldResult<Vec<(UniPoly, u32)>> {
        let f = self.monic(tower)?;
        if f.degree().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        let df = f.derivative(tower);
        let a0 = f.gcd(&df, tower)?;
        let mut b = f.div_exact(&a0, tower)?.expect("gcd divides");
        let mut c = df.div_exact(&a0, tower)?.expect("gcd divides");
        let mut d = c.sub(&b.derivative(tower), tower);
        let mut out = Vec::new();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d, tower)?;
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a, tower)?.expect("gcd divides");
            c = d.div_exact(&a, tower)?.expect("gcd divides");
            d = c.sub(&b.derivative(tower), tower);
            i += 1;
        }
        Ok(out)
    }

    /// `self(t + c)`.
    pub fn taylor_shift(&self, c: &Elem, tower: &Tower) -> Self {
        let lin = UniPoly::new(vec![c.clone(), Elem::one()]);
        let mut acc = UniPoly::zero();
        for coef in self.coeffs.iter().rev() {
            acc = acc.mul(&lin, tower).add(&UniPoly::constant(coef.clone()), tower);
        }
        acc
    }

    pub fn render(&self, var: &str, tower: &Tower) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = tower.render(c);
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
