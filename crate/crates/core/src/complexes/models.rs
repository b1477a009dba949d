use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::complexes::{Simplex, SimplicialComplex};
use crate::error::{invalid, Error, Result};

/// Small model complexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelComplex {
    Point,
    /// Boundary of a triangle: three vertices and three edges.
    Triangle,
    /// Four-cycle with edges `[0,1],[1,2],[2,3],[0,3]`.
    Square,
    /// Cycle graph on `n >= 3` vertices.
    NGon(usize),
    FilledTriangle,
    Octahedron,
    Icosahedron,
}

impl FromStr for ModelComplex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let ngon = |n: &str| -> Result<ModelComplex> {
            n.trim()
                .parse::<usize>()
                .map(ModelComplex::NGon)
                .map_err(|_| Error::InvalidInput(format!("bad polygon size in {s:?}")))
        };
        match lower.as_str() {
            "point" => Ok(ModelComplex::Point),
            "triangle" => Ok(ModelComplex::Triangle),
            "square" => Ok(ModelComplex::Square),
            "octagon" => Ok(ModelComplex::NGon(8)),
            "filled_triangle" | "filled-triangle" => Ok(ModelComplex::FilledTriangle),
            "octahedron" => Ok(ModelComplex::Octahedron),
            "icosahedron" => Ok(ModelComplex::Icosahedron),
            other => {
                if let Some(n) = other.strip_prefix("ngon:").or_else(|| other.strip_prefix("n_gon:")) {
                    ngon(n)
                } else if let Some(n) = other.strip_prefix("n_gon(").and_then(|r| r.strip_suffix(')')) {
                    ngon(n)
                } else {
                    invalid(format!("unknown model complex {s:?}"))
                }
            }
        }
    }
}

impl fmt::Display for ModelComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelComplex::Point => write!(f, "point"),
            ModelComplex::Triangle => write!(f, "triangle"),
            ModelComplex::Square => write!(f, "square"),
            ModelComplex::NGon(n) => write!(f, "ngon:{n}"),
            ModelComplex::FilledTriangle => write!(f, "filled_triangle"),
            ModelComplex::Octahedron => write!(f, "octahedron"),
            ModelComplex::Icosahedron => write!(f, "icosahedron"),
        }
    }
}

fn with_points(lists: Vec<Vec<usize>>, points: Vec<Vec<f64>>) -> Result<SimplicialComplex> {
    let simplices = lists.into_iter().map(Simplex::new).collect::<Result<Vec<_>>>()?;
    let geometry: BTreeMap<usize, Vec<f64>> = points.into_iter().enumerate().collect();
    SimplicialComplex::closure_of(simplices).with_geometry(geometry)
}

fn polygon_points(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n as f64;
            vec![a.cos(), a.sin()]
        })
        .collect()
}

/// Builds a model complex. Polygons and polyhedra carry planar or spatial
/// vertex coordinates.
pub fn model_complex(model: ModelComplex) -> Result<SimplicialComplex> {
    match model {
        ModelComplex::Point => with_points(vec![vec![0]], vec![vec![0.0, 0.0]]),
        ModelComplex::Triangle => with_points(vec![vec![0, 1], vec![0, 2], vec![1, 2]], polygon_points(3)),
        ModelComplex::Square => {
            with_points(vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]], polygon_points(4))
        }
        ModelComplex::NGon(n) => {
            if n < 3 {
                return invalid(format!("a polygon needs at least 3 vertices, got {n}"));
            }
            let edges = (0..n).map(|k| vec![k, (k + 1) % n]).collect();
            with_points(edges, polygon_points(n))
        }
        ModelComplex::FilledTriangle => with_points(vec![vec![0, 1, 2]], polygon_points(3)),
        ModelComplex::Octahedron => {
            // 0:+x 1:-x 2:+y 3:-y 4:+z 5:-z
            let pts = vec![
                vec![1.0, 0.0, 0.0],
                vec![-1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, -1.0, 0.0],
                vec![0.0, 0.0, 1.0],
                vec![0.0, 0.0, -1.0],
            ];
            let mut faces = Vec::new();
            for a in [0, 1] {
                for b in [2, 3] {
                    for c in [4, 5] {
                        faces.push(vec![a, b, c]);
                    }
                }
            }
            with_points(faces, pts)
        }
        ModelComplex::Icosahedron => {
            let phi = (1.0 + 5f64.sqrt()) / 2.0;
            let mut pts = Vec::with_capacity(12);
            for s1 in [1.0, -1.0] {
                for s2 in [1.0, -1.0] {
                    pts.push(vec![0.0, s1, s2 * phi]);
                    pts.push(vec![s1, s2 * phi, 0.0]);
                    pts.push(vec![s2 * phi, 0.0, s1]);
                }
            }
            let d2 = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>();
            // adjacent vertices sit at distance 2
            let adjacent = |i: usize, j: usize| (d2(&pts[i], &pts[j]) - 4.0).abs() < 1e-9;
            let mut faces = Vec::new();
            for i in 0..12 {
                for j in i + 1..12 {
                    for k in j + 1..12 {
                        if adjacent(i, j) && adjacent(j, k) && adjacent(i, k) {
                            faces.push(vec![i, j, k]);
                        }
                    }
                }
            }
            with_points(faces, pts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(c: &SimplicialComplex) -> Vec<usize> {
        (0..=c.dim().unwrap()).map(|d| c.count(d)).collect()
    }

    #[test]
    fn named_models() {
        let t = model_complex(ModelComplex::Triangle).unwrap();
        assert_eq!(counts(&t), vec![3, 3]);
        let s = model_complex(ModelComplex::Square).unwrap();
        assert_eq!(counts(&s), vec![4, 4]);
        let edges: Vec<String> = s.simplices_of_dim(1).iter().map(ToString::to_string).collect();
        assert_eq!(edges, vec!["[0,1]", "[0,3]", "[1,2]", "[2,3]"]);
        let o = model_complex(ModelComplex::NGon(8)).unwrap();
        assert_eq!(counts(&o), vec![8, 8]);
    }

    #[test]
    fn polyhedra() {
        assert_eq!(counts(&model_complex(ModelComplex::Octahedron).unwrap()), vec![6, 12, 8]);
        assert_eq!(counts(&model_complex(ModelComplex::Icosahedron).unwrap()), vec![12, 30, 20]);
    }

    #[test]
    fn small_polygon_rejected() {
        assert!(model_complex(ModelComplex::NGon(2)).is_err());
    }

    #[test]
    fn parse_names() {
        assert_eq!("ngon:16".parse::<ModelComplex>().unwrap(), ModelComplex::NGon(16));
        assert_eq!("n_gon(5)".parse::<ModelComplex>().unwrap(), ModelComplex::NGon(5));
        assert!("klein".parse::<ModelComplex>().is_err());
    }
}
