//! Coordinate naming for points and lines of `D(n, K)`.
//!
//! Index 0 is `(1)`, then `(1,1)`, `(1,2)`, `(2,1)`, then for every `i >= 2`
//! the block `(i,i)`, `(i,i)'`, `(i,i+1)`, `(i+1,i)`, truncated at `n`.
//! Coordinate `j >= 1` is the unknown of the `j`-th incidence relation.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoordLabel {
    /// The first coordinate, `p_1` / `l_1`.
    First,
    /// `(i, j)` with `|i - j| <= 1`.
    Pair(u32, u32),
    /// `(i, i)'`
    Prime(u32),
}

impl fmt::Display for CoordLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoordLabel::First => write!(f, "1"),
            CoordLabel::Pair(i, j) => write!(f, "{i},{j}"),
            CoordLabel::Prime(i) => write!(f, "{i},{i}'"),
        }
    }
}

/// One incidence relation `l_j - p_j = (product)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `l_j - p_j = l_1 * p_a`
    LineFirst(usize),
    /// `l_j - p_j = l_a * p_1`
    PointFirst(usize),
}

pub fn label_at(index: usize) -> CoordLabel {
    match index {
        0 => CoordLabel::First,
        1 => CoordLabel::Pair(1, 1),
        2 => CoordLabel::Pair(1, 2),
        3 => CoordLabel::Pair(2, 1),
        _ => {
            let i = (index / 4 + 1) as u32;
            match index % 4 {
                0 => CoordLabel::Pair(i, i),
                1 => CoordLabel::Prime(i),
                2 => CoordLabel::Pair(i, i + 1),
                _ => CoordLabel::Pair(i + 1, i),
            }
        }
    }
}

/// Position of a genuine coordinate, ignoring truncation. `(1,1)'` is the same
/// coordinate as `(1,1)`.
pub fn index_of(label: CoordLabel) -> Option<usize> {
    match label {
        CoordLabel::First => Some(0),
        CoordLabel::Pair(1, 1) | CoordLabel::Prime(1) => Some(1),
        CoordLabel::Pair(1, 2) => Some(2),
        CoordLabel::Pair(2, 1) => Some(3),
        CoordLabel::Pair(i, j) if i >= 2 && i == j => Some(4 * i as usize - 4),
        CoordLabel::Prime(i) if i >= 2 => Some(4 * i as usize - 3),
        CoordLabel::Pair(i, j) if i >= 2 && j == i + 1 => Some(4 * i as usize - 2),
        CoordLabel::Pair(i, j) if j >= 2 && i == j + 1 => Some(4 * j as usize - 1),
        _ => None,
    }
}

fn index(label: CoordLabel) -> usize {
    index_of(label).expect("relation references a genuine coordinate")
}

/// The relation whose unknown is coordinate `index >= 1`.
pub fn relation_at(index_j: usize) -> Relation {
    match label_at(index_j) {
        CoordLabel::Pair(1, 1) => Relation::LineFirst(0),
        CoordLabel::Pair(1, 2) => Relation::PointFirst(index(CoordLabel::Pair(1, 1))),
        CoordLabel::Pair(2, 1) => Relation::LineFirst(index(CoordLabel::Pair(1, 1))),
        CoordLabel::Pair(i, j) if i == j => Relation::LineFirst(index(CoordLabel::Pair(i - 1, i))),
        CoordLabel::Prime(i) => Relation::PointFirst(index(CoordLabel::Pair(i, i - 1))),
        CoordLabel::Pair(i, j) if j == i + 1 => Relation::PointFirst(index(CoordLabel::Pair(i, i))),
        CoordLabel::Pair(_, j) => Relation::LineFirst(index(CoordLabel::Prime(j))),
        CoordLabel::First => unreachable!("coordinate 0 has no relation"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    relations: Vec<Relation>,
}

impl Layout {
    pub fn new(n: usize) -> Self {
        Layout {
            relations: (1..n).map(relation_at).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.relations.len() + 1
    }

    /// Relation for coordinate `j >= 1`.
    pub fn relation(&self, j: usize) -> Relation {
        self.relations[j - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_labels() {
        let labels: Vec<String> = (0..12).map(|i| label_at(i).to_string()).collect();
        assert_eq!(
            labels,
            ["1", "1,1", "1,2", "2,1", "2,2", "2,2'", "2,3", "3,2", "3,3", "3,3'", "3,4", "4,3"]
        );
    }

    #[test]
    fn index_inverts_label() {
        for i in 0..200 {
            assert_eq!(index_of(label_at(i)), Some(i));
        }
        assert_eq!(index_of(CoordLabel::Pair(0, 0)), None);
        assert_eq!(index_of(CoordLabel::Pair(1, 3)), None);
    }

    #[test]
    fn relations_reference_earlier_coordinates() {
        let layout = Layout::new(40);
        for j in 1..40 {
            let a = match layout.relation(j) {
                Relation::LineFirst(a) | Relation::PointFirst(a) => a,
            };
            assert!(a < j, "relation {j} references {a}");
        }
        // (2,2)' : l'_22 - p'_22 = l_21 p_1
        assert_eq!(layout.relation(5), Relation::PointFirst(3));
        // (3,2) : l_32 - p_32 = l_1 p'_22
        assert_eq!(layout.relation(7), Relation::LineFirst(5));
    }
}
