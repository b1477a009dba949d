use std::io::Read;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::parallel;

/// A finite set of points in a common Euclidean space.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    points: Vec<Vec<f64>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return invalid("point cloud is empty");
        };
        let d = first.len();
        if d == 0 {
            return invalid("points must have at least one coordinate");
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != d {
                return invalid(format!("point {i} has {} coordinates, expected {d}", p.len()));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return invalid(format!("point {i} has a non-finite coordinate"));
            }
        }
        Ok(PointCloud { points })
    }

    /// One point per row, comma separated, no header.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut points = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let row = record
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .or_else(|e| invalid(format!("bad coordinate on row {}: {e}", points.len() + 1)))?;
            points.push(row);
        }
        Self::new(points)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|x| format!("{x}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        euclidean(&self.points[i], &self.points[j])
    }

    /// Dense pairwise distance matrix, row-major.
    pub fn distance_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        parallel::install(|| {
            (0..n)
                .into_par_iter()
                .map(|i| (0..n).map(|j| self.distance(i, j)).collect())
                .collect()
        })
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let pc = PointCloud::from_csv("0,0\n3, 4\n".as_bytes()).unwrap();
        assert_eq!(pc.len(), 2);
        assert_eq!(pc.distance(0, 1), 5.0);
        assert_eq!(PointCloud::from_csv(pc.to_csv().as_bytes()).unwrap(), pc);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PointCloud::new(vec![]).is_err());
        assert!(PointCloud::new(vec![vec![0.0], vec![0.0, 1.0]]).is_err());
        assert!(PointCloud::new(vec![vec![f64::NAN]]).is_err());
        assert!(PointCloud::from_csv("1,x\n".as_bytes()).is_err());
    }
}
