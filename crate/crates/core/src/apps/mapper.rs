use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use petgraph::unionfind::UnionFind;
use serde_json::{json, Value};

use crate::complexes::{PointCloud, Simplex, SimplicialComplex};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct MapperNode {
    pub id: usize,
    /// Sorted point indices.
    pub points: Vec<usize>,
    pub interval: usize,
    /// Mean filter value over the node's points.
    pub filter: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapperGraph {
    pub nodes: Vec<MapperNode>,
    /// Pairs `a < b` of nodes sharing a point.
    pub edges: Vec<(usize, usize)>,
}

impl MapperGraph {
    pub fn filter_values(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n.filter).collect()
    }

    /// The graph as a 1-dimensional complex on vertices `0..nodes`.
    pub fn to_complex(&self) -> SimplicialComplex {
        graph_complex(self.nodes.len(), &self.edges)
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> =
            self.nodes.iter().map(|n| json!({"id": n.id, "points": n.points, "filter": n.filter})).collect();
        let edges: Vec<Value> = self.edges.iter().map(|&(a, b)| json!([a, b])).collect();
        json!({"nodes": nodes, "edges": edges})
    }
}

fn graph_complex(n: usize, edges: &[(usize, usize)]) -> SimplicialComplex {
    let mut simplices: Vec<Simplex> = (0..n).map(Simplex::vertex).collect();
    simplices.extend(edges.iter().filter(|(a, b)| a != b).map(|&(a, b)| Simplex::new(vec![a, b]).expect("distinct")));
    SimplicialComplex::closure_of(simplices)
}

/// One-dimensional mapper: cover `[min f, max f]` by `intervals` equal
/// windows whose consecutive overlap is the fraction `overlap` of a window,
/// cluster each preimage by single linkage at `link_threshold`, and join
/// clusters that share a point.
pub fn mapper_1d(
    points: &PointCloud,
    filter: &[f64],
    intervals: usize,
    overlap: f64,
    link_threshold: f64,
) -> Result<MapperGraph> {
    if intervals == 0 {
        return invalid("mapper needs at least one interval");
    }
    if !(overlap > 0.0 && overlap < 1.0) {
        return invalid(format!("overlap must lie in (0, 1), got {overlap}"));
    }
    if !(link_threshold >= 0.0) {
        return invalid(format!("link threshold must be non-negative, got {link_threshold}"));
    }
    if filter.len() != points.len() {
        return invalid(format!("{} filter values for {} points", filter.len(), points.len()));
    }
    if filter.iter().any(|f| !f.is_finite()) {
        return invalid("filter values must be finite");
    }
    if points.is_empty() {
        return Ok(MapperGraph { nodes: Vec::new(), edges: Vec::new() });
    }
    let lo = filter.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = filter.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let windows: Vec<(f64, f64)> = if hi == lo {
        vec![(lo, hi)]
    } else {
        let width = (hi - lo) / (intervals as f64 - (intervals as f64 - 1.0) * overlap);
        let step = width * (1.0 - overlap);
        (0..intervals)
            .map(|i| {
                let a = lo + i as f64 * step;
                (a, if i + 1 == intervals { hi } else { a + width })
            })
            .collect()
    };

    let mut nodes = Vec::new();
    for (w, &(a, b)) in windows.iter().enumerate() {
        let members: Vec<usize> = (0..points.len()).filter(|&i| filter[i] >= a && filter[i] <= b).collect();
        if members.is_empty() {
            continue;
        }
        let mut uf = UnionFind::<usize>::new(members.len());
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                if points.distance(members[i], members[j]) <= link_threshold {
                    uf.union(i, j);
                }
            }
        }
        let mut clusters: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &m) in members.iter().enumerate() {
            clusters.entry(uf.find(i)).or_default().push(m);
        }
        let mut groups: Vec<Vec<usize>> = clusters.into_values().collect();
        groups.sort();
        for pts in groups {
            let filter_mean = pts.iter().map(|&i| filter[i]).sum::<f64>() / pts.len() as f64;
            nodes.push(MapperNode { id: nodes.len(), points: pts, interval: w, filter: filter_mean });
        }
    }

    let mut edges = Vec::new();
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            let shared = {
                let (pa, pb) = (&nodes[a].points, &nodes[b].points);
                pa.iter().any(|p| pb.binary_search(p).is_ok())
            };
            if shared {
                edges.push((a, b));
            }
        }
    }
    Ok(MapperGraph { nodes, edges })
}

/// Which vertices count as local maxima.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MaximumRule {
    /// Value at least every neighbour's; plateaus count.
    #[default]
    Plateau,
    /// Value strictly above every neighbour's.
    Strict,
}

impl FromStr for MaximumRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plateau" => Ok(MaximumRule::Plateau),
            "strict" => Ok(MaximumRule::Strict),
            other => invalid(format!("unknown maximum rule {other:?}; use plateau or strict")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuotientGraph {
    pub complex: SimplicialComplex,
    /// Quotient vertex of every input vertex.
    pub class_of: Vec<usize>,
    /// Filter value per quotient vertex (the largest over its class).
    pub values: Vec<f64>,
}

/// Identifies the local maxima of each connected component to one vertex,
/// dropping the self-loops and merging the parallel edges this creates.
pub fn quotient_local_maxima(
    n: usize,
    edges: &[(usize, usize)],
    values: &[f64],
    rule: MaximumRule,
) -> Result<QuotientGraph> {
    if values.len() != n {
        return invalid(format!("{} filter values for {n} vertices", values.len()));
    }
    if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
        return invalid(format!("edge ({a}, {b}) leaves the vertex range 0..{n}"));
    }
    let mut neighbours = vec![Vec::new(); n];
    let mut uf = UnionFind::<usize>::new(n);
    for &(a, b) in edges {
        if a != b {
            neighbours[a].push(b);
            neighbours[b].push(a);
            uf.union(a, b);
        }
    }
    let is_max = |v: usize| {
        neighbours[v].iter().all(|&u| match rule {
            MaximumRule::Plateau => values[v] >= values[u],
            MaximumRule::Strict => values[v] > values[u],
        })
    };
    // representative of every vertex before relabelling: the first maximum
    // of its component, or itself
    let mut first_max: BTreeMap<usize, usize> = BTreeMap::new();
    let mut rep = vec![0; n];
    for v in 0..n {
        rep[v] = if is_max(v) { *first_max.entry(uf.find(v)).or_insert(v) } else { v };
    }
    let reps: BTreeSet<usize> = rep.iter().copied().collect();
    let label: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let class_of: Vec<usize> = rep.iter().map(|r| label[r]).collect();
    let mut vals = vec![f64::NEG_INFINITY; reps.len()];
    for v in 0..n {
        vals[class_of[v]] = vals[class_of[v]].max(values[v]);
    }
    let merged: BTreeSet<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| (class_of[a].min(class_of[b]), class_of[a].max(class_of[b])))
        .filter(|(a, b)| a != b)
        .collect();
    let merged: Vec<(usize, usize)> = merged.into_iter().collect();
    Ok(QuotientGraph { complex: graph_complex(reps.len(), &merged), class_of, values: vals })
}

impl MapperGraph {
    pub fn quotient_local_maxima(&self, rule: MaximumRule) -> Result<QuotientGraph> {
        quotient_local_maxima(self.nodes.len(), &self.edges, &self.filter_values(), rule)
    }
}
