use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complexes::{PointCloud, Simplex, SimplicialComplex};
use crate::error::{invalid, Result};

/// Flag complex on vertices `0..n` from weighted edges, keeping simplices of
/// dimension at most `max_dim`. A simplex's filtration value is the largest
/// weight among its edges; vertices enter at zero.
fn flag_complex(
    n: usize,
    edges: &BTreeMap<(usize, usize), f64>,
    max_dim: usize,
) -> Result<SimplicialComplex> {
    let mut upper: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges.keys() {
        upper[a].push(b);
    }
    let weight = |a: usize, b: usize| edges[&(a.min(b), a.max(b))];

    let mut out: Vec<(Simplex, f64)> = (0..n).map(|v| (Simplex::vertex(v), 0.0)).collect();
    // depth-first clique expansion; `candidates` are common upper neighbours
    fn expand(
        current: &mut Vec<usize>,
        value: f64,
        candidates: &[usize],
        max_dim: usize,
        upper: &[Vec<usize>],
        weight: &dyn Fn(usize, usize) -> f64,
        out: &mut Vec<(Simplex, f64)>,
    ) {
        if current.len() > max_dim {
            return;
        }
        for (k, &u) in candidates.iter().enumerate() {
            let v = current.iter().map(|&s| weight(s, u)).fold(value, f64::max);
            current.push(u);
            out.push((Simplex::new(current.clone()).expect("increasing"), v));
            let next: Vec<usize> = candidates[k + 1..]
                .iter()
                .copied()
                .filter(|w| upper[u].binary_search(w).is_ok())
                .collect();
            expand(current, v, &next, max_dim, upper, weight, out);
            current.pop();
        }
    }
    if max_dim >= 1 {
        for v in 0..n {
            let mut current = vec![v];
            let cands = upper[v].clone();
            expand(&mut current, 0.0, &cands, max_dim, &upper, &weight, &mut out);
        }
    }
    let complex = SimplicialComplex::closure_of(out.iter().map(|(s, _)| s.clone()));
    let mut values = vec![0.0; complex.len()];
    for (s, v) in &out {
        values[complex.index_of(s).expect("present")] = *v;
    }
    complex.with_filtration(values)
}

fn attach_points(complex: SimplicialComplex, cloud: &PointCloud, ids: &[usize]) -> Result<SimplicialComplex> {
    let geometry: BTreeMap<usize, Vec<f64>> =
        ids.iter().enumerate().map(|(v, &p)| (v, cloud.point(p).to_vec())).collect();
    complex.with_geometry(geometry)
}

/// Vietoris-Rips complex: a simplex is present when all pairwise distances
/// are at most `r_max` (closed threshold). Vertex `i` is point `i`.
pub fn vietoris_rips(cloud: &PointCloud, r_max: f64, max_dim: usize) -> Result<SimplicialComplex> {
    if !(r_max >= 0.0) {
        return invalid(format!("r_max must be non-negative, got {r_max}"));
    }
    let d = cloud.distance_matrix();
    let n = cloud.len();
    let mut edges = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            if d[i][j] <= r_max {
                edges.insert((i, j), d[i][j]);
            }
        }
    }
    let ids: Vec<usize> = (0..n).collect();
    attach_points(flag_complex(n, &edges, max_dim)?, cloud, &ids)
}

/// Landmark selection result.
#[derive(Clone, Debug, PartialEq)]
pub struct Landmarks {
    /// Point indices in selection order.
    pub indices: Vec<usize>,
    /// The first landmark, drawn from the seed.
    pub first: usize,
    pub seed: Option<u64>,
}

/// Sequential max-min landmark selection with a seeded first pick.
pub fn maxmin_landmarks(cloud: &PointCloud, count: usize, seed: u64) -> Result<Landmarks> {
    check_count(cloud, count)?;
    let first = ChaCha8Rng::seed_from_u64(seed).random_range(0..cloud.len());
    let mut lm = maxmin_landmarks_from(cloud, count, first)?;
    lm.seed = Some(seed);
    Ok(lm)
}

fn check_count(cloud: &PointCloud, count: usize) -> Result<()> {
    if count == 0 || count > cloud.len() {
        return invalid(format!("landmark count {count} outside 1..={}", cloud.len()));
    }
    Ok(())
}

/// Max-min selection starting from a given point. Each next landmark
/// maximizes the distance to the chosen set; ties go to the lowest index.
pub fn maxmin_landmarks_from(cloud: &PointCloud, count: usize, first: usize) -> Result<Landmarks> {
    check_count(cloud, count)?;
    if first >= cloud.len() {
        return invalid(format!("first landmark {first} out of range"));
    }
    let n = cloud.len();
    let mut indices = vec![first];
    let mut nearest: Vec<f64> = (0..n).map(|i| cloud.distance(first, i)).collect();
    let mut chosen = vec![false; n];
    chosen[first] = true;
    while indices.len() < count {
        let mut best: Option<usize> = None;
        for i in 0..n {
            if chosen[i] {
                continue;
            }
            if best.is_none_or(|b| nearest[i] > nearest[b]) {
                best = Some(i);
            }
        }
        let next = best.expect("count <= n");
        chosen[next] = true;
        indices.push(next);
        for i in 0..n {
            nearest[i] = nearest[i].min(cloud.distance(next, i));
        }
    }
    Ok(Landmarks { indices, first, seed: None })
}

/// Lazy-witness complex on the given landmarks, with every point acting as a
/// witness.
///
/// For a witness `w`, let `m(w)` be the distance to its `nu`-th nearest
/// landmark (`m = 0` when `nu = 0`). Edge `[a, b]` enters at
/// `min_w max(d(a, w), d(b, w)) - m(w)`, clamped at zero, and is kept when
/// that value is at most `r_max`. Higher simplices are the cliques of the
/// 1-skeleton up to `max_dim`. Vertex `k` is landmark `landmarks[k]`.
pub fn lazy_witness(
    cloud: &PointCloud,
    landmarks: &[usize],
    nu: usize,
    r_max: f64,
    max_dim: usize,
) -> Result<SimplicialComplex> {
    if landmarks.is_empty() {
        return invalid("lazy witness needs at least one landmark");
    }
    if let Some(&bad) = landmarks.iter().find(|&&l| l >= cloud.len()) {
        return invalid(format!("landmark index {bad} out of range"));
    }
    if !(r_max >= 0.0) {
        return invalid(format!("r_max must be non-negative, got {r_max}"));
    }
    let l = landmarks.len();
    if nu > l {
        return invalid(format!("nu = {nu} exceeds the number of landmarks {l}"));
    }
    // witness-to-landmark distances
    let dist: Vec<Vec<f64>> = (0..cloud.len())
        .map(|w| landmarks.iter().map(|&p| cloud.distance(w, p)).collect())
        .collect();
    let m: Vec<f64> = dist
        .iter()
        .map(|row| {
            if nu == 0 {
                0.0
            } else {
                let mut sorted = row.clone();
                sorted.sort_by(f64::total_cmp);
                sorted[nu - 1]
            }
        })
        .collect();
    let mut edges = BTreeMap::new();
    for a in 0..l {
        for b in a + 1..l {
            let entry = dist
                .iter()
                .zip(&m)
                .map(|(row, mw)| (row[a].max(row[b]) - mw).max(0.0))
                .fold(f64::INFINITY, f64::min);
            if entry <= r_max {
                edges.insert((a, b), entry);
            }
        }
    }
    attach_points(flag_complex(l, &edges, max_dim)?, cloud, landmarks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> PointCloud {
        PointCloud::new(xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn rips_threshold_is_closed() {
        let pc = line(&[0.0, 1.0]);
        assert_eq!(vietoris_rips(&pc, 0.5, 1).unwrap().count(1), 0);
        assert_eq!(vietoris_rips(&pc, 1.0, 1).unwrap().count(1), 1);
        assert!(vietoris_rips(&pc, -1.0, 1).is_err());
    }

    #[test]
    fn rips_filtration_is_max_distance() {
        let pc = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let k = vietoris_rips(&pc, 10.0, 2).unwrap();
        let tri = Simplex::new(vec![0, 1, 2]).unwrap();
        let f = k.filtration().unwrap()[k.index_of(&tri).unwrap()];
        assert!((f - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn maxmin_examples() {
        let pc = line(&[0.0, 1.0, 10.0]);
        let lm = maxmin_landmarks_from(&pc, 2, 0).unwrap();
        assert_eq!(lm.indices, vec![0, 2]);
        let mut all = maxmin_landmarks(&pc, 3, 9).unwrap().indices;
        all.sort();
        assert_eq!(all, vec![0, 1, 2]);
        assert!(maxmin_landmarks(&pc, 0, 1).is_err());
        assert!(maxmin_landmarks(&pc, 4, 1).is_err());
    }

    #[test]
    fn single_landmark_witness() {
        let pc = line(&[0.0, 1.0, 2.0]);
        let k = lazy_witness(&pc, &[1], 1, 100.0, 2).unwrap();
        assert_eq!(k.len(), 1);
    }
}
