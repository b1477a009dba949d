use std::cmp::Ordering;
use std::fmt;

use crate::error::{invalid, Result};

/// An oriented simplex given by strictly increasing vertex ids.
///
/// Ordering is by dimension first, then lexicographic on vertices, which is
/// the basis order used for every chain group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return invalid("a simplex needs at least one vertex");
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return invalid(format!("repeated vertex in simplex {vertices:?}"));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces with their incidence signs `(-1)^i`.
    pub fn boundary(&self) -> Vec<(Simplex, i64)> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|i| {
                let mut face = self.0.clone();
                face.remove(i);
                (Simplex(face), if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }

    /// All nonempty faces, including the simplex itself.
    pub fn all_faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1u64 << n))
            .map(|mask| {
                Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect())
            })
            .collect()
    }

    /// Front face `[v0..vi]`.
    pub fn front(&self, i: usize) -> Simplex {
        Simplex(self.0[..=i].to_vec())
    }

    /// Back face `[vi..vn]`.
    pub fn back(&self, i: usize) -> Simplex {
        Simplex(self.0[i..].to_vec())
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_validated() {
        assert_eq!(Simplex::new(vec![2, 0, 1]).unwrap().vertices(), &[0, 1, 2]);
        assert!(Simplex::new(vec![1, 1]).is_err());
        assert!(Simplex::new(vec![]).is_err());
    }

    #[test]
    fn boundary_signs() {
        let s = Simplex::new(vec![0, 1, 2]).unwrap();
        let b: Vec<(String, i64)> = s.boundary().into_iter().map(|(f, c)| (f.to_string(), c)).collect();
        assert_eq!(b, vec![("[1,2]".into(), 1), ("[0,2]".into(), -1), ("[0,1]".into(), 1)]);
    }

    #[test]
    fn dimension_first_order() {
        let mut v = vec![
            Simplex::new(vec![0, 1]).unwrap(),
            Simplex::vertex(3),
            Simplex::vertex(1),
        ];
        v.sort();
        assert_eq!(v.iter().map(ToString::to_string).collect::<Vec<_>>(), vec!["[1]", "[3]", "[0,1]"]);
    }
}
