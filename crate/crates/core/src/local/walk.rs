use serde::{Deserialize, Serialize};

use super::Chart;
use crate::cluster::{NodeSpec, WeightedCluster};
use crate::error::{Error, Result};
use crate::field::{split_directions, Direction, FieldError, Tower, UniPoly};

/// Hard cap on the depth of any resolution.
pub const BLOWUP_BUDGET: usize = 64;

/// A direction to blow up along, in the tower where its root lives.
#[derive(Clone, Debug)]
pub(crate) struct Branch {
    pub chart: Chart,
    pub tower: Tower,
    pub orbit: u64,
    /// Tower level introduced for this branch, if any; a split of that level
    /// is resolved here by retrying with both factors.
    pub owned: Option<usize>,
}

impl Branch {
    fn from_direction(d: Direction, base: &Tower) -> Self {
        let owned = (d.tower.depth() > base.depth()).then(|| d.tower.depth());
        Branch { chart: Chart::Slope(d.root), tower: d.tower, orbit: d.orbit, owned }
    }

    pub fn vertical(tower: &Tower) -> Self {
        Branch { chart: Chart::Vertical, tower: tower.clone(), orbit: 1, owned: None }
    }

    /// Replace a branch whose owned level splits by one branch per factor.
    fn resplit(&self, factor: &UniPoly) -> Result<Vec<Branch>> {
        let level = self.owned.expect("only owned levels are re-split");
        let base = self.tower.truncate(level - 1);
        let modulus = UniPoly::new(self.tower.level(level).modulus.clone());
        let cof = modulus.div_exact(factor, &base)?.expect("split factor divides the modulus");
        let var = self.tower.level(level).var.clone();
        let mut out = Vec::new();
        for h in [factor.clone(), cof] {
            match h.degree() {
                Some(1) => {
                    let h = h.monic(&base)?;
                    out.push(Branch {
                        chart: Chart::Slope(base.neg(&h.coeffs()[0])),
                        tower: base.clone(),
                        orbit: 1,
                        owned: None,
                    });
                }
                Some(d) if d >= 2 => out.push(Branch {
                    chart: Chart::Slope(base.generator(level)),
                    tower: base.extend(var.clone(), &h)?,
                    orbit: d as u64,
                    owned: Some(level),
                }),
                _ => {}
            }
        }
        Ok(out)
    }
}

/// Slope branches for the distinct roots of `p`, followed by the vertical
/// branch when requested. Only roots of multiplicity ≥ `min_mult` are kept.
pub(crate) fn branches(p: &UniPoly, min_mult: u32, vertical: bool, tower: &Tower) -> Result<Vec<Branch>> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) > 0 {
        for d in split_directions(p, tower)? {
            if d.multiplicity >= min_mult {
                out.push(Branch::from_direction(d, tower));
            }
        }
    }
    if vertical {
        out.push(Branch::vertical(tower));
    }
    Ok(out)
}

/// What a resolver reports at the current point.
pub(crate) struct Visit {
    /// Whether the point belongs to the cluster being computed; if not, the
    /// walk stops here.
    pub record: bool,
    pub weight: i64,
    pub extra: Vec<i64>,
    pub branches: Vec<Branch>,
}

impl Visit {
    pub fn stop() -> Self {
        Visit { record: false, weight: 0, extra: Vec::new(), branches: Vec::new() }
    }
}

pub(crate) trait Resolver: Sized {
    fn visit(&self, tower: &Tower) -> Result<Visit>;
    /// State at the origin of the chart of `branch`, in coordinates where the
    /// new exceptional curve is `x = 0`.
    fn blow_up(&self, visit: &Visit, branch: &Branch) -> Result<Self>;
}

/// A resolved point with its subtree.
#[derive(Clone, Debug)]
pub(crate) struct Point {
    pub weight: i64,
    pub extra: Vec<i64>,
    /// Depth (on the current path) of the second point this one is
    /// proximate to.
    pub second: Option<usize>,
    /// Orbit size relative to the parent.
    pub orbit: u64,
    pub chart: Option<ChartDescriptor>,
    pub children: Vec<Point>,
}

/// One blowup step, for diagnostic traces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartDescriptor {
    pub node: String,
    /// `"slope"` (`y = x(y1 + t)`) or `"vertical"` (`x = x1 y`).
    pub chart: String,
    pub root: Option<String>,
    pub orbit: u64,
    pub tower_depth: usize,
}

/// Exceptional coordinate axes at the current point, as depths of the
/// points whose exceptional curves they are.
#[derive(Clone, Copy, Debug, Default)]
struct Frame {
    x: Option<usize>,
    y: Option<usize>,
}

fn is_split_at(e: &Error, level: Option<usize>) -> Option<UniPoly> {
    match (e, level) {
        (Error::Field(FieldError::ModulusSplit { level: l, factor }), Some(o)) if *l == o => Some(factor.clone()),
        _ => None,
    }
}

pub(crate) fn resolve<R: Resolver>(r: R, tower: &Tower) -> Result<Option<Point>> {
    walk(r, tower, Frame::default(), 0, None, 1, None)
}

fn walk<R: Resolver>(
    r: R,
    tower: &Tower,
    frame: Frame,
    depth: usize,
    second: Option<usize>,
    orbit: u64,
    chart: Option<ChartDescriptor>,
) -> Result<Option<Point>> {
    if depth >= BLOWUP_BUDGET {
        return Err(Error::BudgetExceeded { levels: BLOWUP_BUDGET, partial: depth });
    }
    let visit = r.visit(tower)?;
    if !visit.record {
        return Ok(None);
    }
    let mut children = Vec::new();
    let mut work: Vec<Branch> = visit.branches.iter().rev().cloned().collect();
    while let Some(b) = work.pop() {
        match step(&r, &visit, &b, frame, depth) {
            Ok(Some(p)) => children.push(p),
            Ok(None) => {}
            Err(e) => match is_split_at(&e, b.owned) {
                Some(factor) => work.extend(b.resplit(&factor)?.into_iter().rev()),
                None => return Err(e),
            },
        }
    }
    Ok(Some(Point { weight: visit.weight, extra: visit.extra, second, orbit, chart, children }))
}

fn step<R: Resolver>(r: &R, visit: &Visit, b: &Branch, frame: Frame, depth: usize) -> Result<Option<Point>> {
    let (child_frame, child_second, desc) = match &b.chart {
        Chart::Slope(t) => {
            let on_y_axis = b.tower.is_zero(t)?;
            let y = if on_y_axis { frame.y } else { None };
            let desc = ChartDescriptor {
                node: String::new(),
                chart: "slope".into(),
                root: Some(b.tower.render(t)),
                orbit: b.orbit,
                tower_depth: b.tower.depth(),
            };
            (Frame { x: Some(depth), y }, y, desc)
        }
        Chart::Vertical => {
            let desc = ChartDescriptor {
                node: String::new(),
                chart: "vertical".into(),
                root: None,
                orbit: 1,
                tower_depth: b.tower.depth(),
            };
            (Frame { x: Some(depth), y: frame.x }, frame.x, desc)
        }
    };
    let child = r.blow_up(visit, b)?;
    walk(child, &b.tower, child_frame, depth + 1, child_second, b.orbit, Some(desc))
}

/// Flattened output of a resolution: node specs in walk order.
pub(crate) struct Flat {
    pub nodes: Vec<(NodeSpec, i64, Vec<i64>)>,
    pub trace: Vec<ChartDescriptor>,
}

pub(crate) fn flatten(root_id: &str, p: &Point) -> Flat {
    let mut flat = Flat { nodes: Vec::new(), trace: Vec::new() };
    let mut path: Vec<String> = Vec::new();
    go(root_id.to_string(), p, 1, &mut path, &mut flat);
    flat
}

fn go(id: String, p: &Point, parent_orbit: u64, path: &mut Vec<String>, flat: &mut Flat) {
    let orbit = parent_orbit * p.orbit;
    let spec = NodeSpec {
        id: id.clone(),
        parent: path.last().cloned(),
        second_proximity: p.second.map(|d| path[d].clone()),
        orbit,
    };
    flat.nodes.push((spec, p.weight, p.extra.clone()));
    if let Some(c) = &p.chart {
        flat.trace.push(ChartDescriptor { node: id.clone(), ..c.clone() });
    }
    path.push(id.clone());
    for (k, c) in p.children.iter().enumerate() {
        go(format!("{id}.{}", k + 1), c, orbit, path, flat);
    }
    path.pop();
}

/// Cluster from a resolution, weights taken from `Point::weight`.
pub(crate) fn to_cluster(root_id: &str, p: Option<&Point>) -> WeightedCluster {
    match p {
        None => WeightedCluster::empty(),
        Some(p) => {
            let flat = flatten(root_id, p);
            let nodes = flat.nodes.into_iter().map(|(s, w, _)| (s, w)).collect();
            WeightedCluster::from_nodes(nodes).expect("resolutions produce valid forests")
        }
    }
}
