use serde::{Deserialize, Serialize};

use super::{parse_rational, render_rational, BiPoly, Elem, Level, Tower, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct FormatError(pub String);

fn bad(msg: impl Into<String>) -> FormatError {
    FormatError(msg.into())
}

/// A coefficient: `"p/q"`, a bare integer, or a polynomial in a named tower
/// generator with coefficients of lower level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Rat(String),
    Int(i64),
    Ext { ext: String, coeffs: Vec<CoeffJson> },
}

impl CoeffJson {
    pub fn from_elem(e: &Elem, tower: &Tower) -> Self {
        match e {
            Elem::Q(r) => CoeffJson::Rat(render_rational(r)),
            Elem::Alg { level, coeffs } => CoeffJson::Ext {
                ext: tower.level(*level).var.clone(),
                coeffs: coeffs.iter().map(|c| CoeffJson::from_elem(c, tower)).collect(),
            },
        }
    }

    pub fn to_elem(&self, tower: &Tower) -> Result<Elem, FormatError> {
        match self {
            CoeffJson::Int(n) => Ok(Elem::int(*n)),
            CoeffJson::Rat(s) => {
                parse_rational(s).map(Elem::Q).ok_or_else(|| bad(format!("bad rational {s:?}")))
            }
            CoeffJson::Ext { ext, coeffs } => {
                let level = tower
                    .levels()
                    .iter()
                    .position(|l| &l.var == ext)
                    .ok_or_else(|| bad(format!("unknown extension variable {ext:?}")))?
                    + 1;
                let mut acc = Elem::zero();
                let mut power = Elem::one();
                let gen = tower.generator(level);
                for c in coeffs {
                    let ce = c.to_elem(tower)?;
                    if ce.level() >= level {
                        return Err(bad(format!("coefficient of {ext} must lie below its level")));
                    }
                    acc = tower.add(&acc, &tower.mul(&ce, &power));
                    power = tower.mul(&power, &gen);
                }
                Ok(acc)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelJson {
    pub var: String,
    pub modulus: Vec<CoeffJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct TowerJson {
    pub levels: Vec<LevelJson>,
}

impl TowerJson {
    pub fn from_tower(t: &Tower) -> Self {
        let levels = t
            .levels()
            .iter()
            .enumerate()
            .map(|(i, Level { var, modulus })| {
                let base = t.truncate(i);
                LevelJson {
                    var: var.clone(),
                    modulus: modulus.iter().map(|c| CoeffJson::from_elem(c, &base)).collect(),
                }
            })
            .collect();
        TowerJson { levels }
    }

    /// Build and validate the tower (monic, degree ≥ 2, squarefree moduli).
    pub fn to_tower(&self) -> Result<Tower, FormatError> {
        let mut t = Tower::rational();
        for l in &self.levels {
            if t.levels().iter().any(|x| x.var == l.var) {
                return Err(bad(format!("duplicate tower variable {:?}", l.var)));
            }
            let coeffs = l.modulus.iter().map(|c| c.to_elem(&t)).collect::<Result<Vec<_>, _>>()?;
            let m = UniPoly::new(coeffs);
            if !m.lc().is_some_and(Elem::is_one) {
                return Err(bad(format!("modulus of {} is not monic", l.var)));
            }
            t = t.extend(l.var.clone(), &m).map_err(|e| bad(e.to_string()))?;
        }
        t.validate().map_err(|e| bad(e.to_string()))?;
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<(u32, u32, CoeffJson)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerJson>,
}

impl PolyJson {
    /// Terms in increasing `(i, j)` order; the tower is included only when
    /// it is nontrivial.
    pub fn from_poly(p: &BiPoly, tower: &Tower) -> Self {
        PolyJson {
            vars: vec!["x".into(), "y".into()],
            terms: p.terms().map(|(&(i, j), c)| (i, j, CoeffJson::from_elem(c, tower))).collect(),
            tower: (tower.depth() > 0).then(|| TowerJson::from_tower(tower)),
        }
    }

    /// Parse against `outer` when the JSON carries no tower of its own.
    pub fn to_poly(&self, outer: &Tower) -> Result<(BiPoly, Tower), FormatError> {
        if self.vars.len() != 2 {
            return Err(bad("expected exactly two variables"));
        }
        let tower = match &self.tower {
            Some(t) => t.to_tower()?,
            None => outer.clone(),
        };
        let mut p = BiPoly::zero();
        for (i, j, c) in &self.terms {
            p.add_term(*i, *j, c.to_elem(&tower)?, &tower);
        }
        Ok((p, tower))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_rational_poly() {
        let p = BiPoly::from_int_terms(&[(0, 2, 1), (3, 0, -1)]);
        let j = PolyJson::from_poly(&p, &Tower::rational());
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(s, r#"{"vars":["x","y"],"terms":[[0,2,"1"],[3,0,"-1"]]}"#);
        let back: PolyJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_poly(&Tower::rational()).unwrap().0, p);
    }

    #[test]
    fn roundtrip_with_tower() {
        let s = r#"{"vars":["x","y"],
            "terms":[[1,0,{"ext":"t1","coeffs":["0","1/2"]}],[0,1,1]],
            "tower":{"levels":[{"var":"t1","modulus":["-2","0","1"]}]}}"#;
        let j: PolyJson = serde_json::from_str(s).unwrap();
        let (p, t) = j.to_poly(&Tower::rational()).unwrap();
        assert_eq!(t.depth(), 1);
        assert_eq!(p.len(), 2);
        let again = PolyJson::from_poly(&p, &t);
        assert_eq!(again.to_poly(&Tower::rational()).unwrap().0, p);
    }

    #[test]
    fn reject_non_squarefree_modulus() {
        let s = r#"{"levels":[{"var":"a","modulus":["1","2","1"]}]}"#;
        let j: TowerJson = serde_json::from_str(s).unwrap();
        assert!(j.to_tower().is_err());
    }
}
