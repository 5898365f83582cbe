//! Finite graded posets given by their cover relation.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetElement {
    pub label: String,
    pub grade: i64,
}

/// A finite poset stored as its Hasse diagram. A cover `(i, j)` means
/// element `i` lies directly below element `j`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FacePoset {
    pub elements: Vec<PosetElement>,
    pub covers: Vec<(usize, usize)>,
}

impl FacePoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Number of elements in each grade.
    pub fn grade_counts(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for e in &self.elements {
            *m.entry(e.grade).or_insert(0) += 1;
        }
        m
    }

    /// True when every cover raises the grade by exactly one.
    pub fn is_graded(&self) -> bool {
        self.covers
            .iter()
            .all(|&(i, j)| self.elements[j].grade == self.elements[i].grade + 1)
    }

    pub fn upper_covers(&self) -> Vec<Vec<usize>> {
        let mut up = vec![Vec::new(); self.len()];
        for &(i, j) in &self.covers {
            up[i].push(j);
        }
        up
    }

    /// Reflexive-transitive closure as a dense boolean matrix: `m[i][j]` iff `i ≤ j`.
    pub fn order_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let up = self.upper_covers();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.elements[i].grade));
        let mut m = vec![vec![false; n]; n];
        for &i in &order {
            m[i][i] = true;
            for &j in &up[i] {
                let row = m[j].clone();
                for (k, b) in row.into_iter().enumerate() {
                    if b {
                        m[i][k] = true;
                    }
                }
            }
        }
        m
    }

    /// Checks the Eulerian property of the poset extended by a bottom element
    /// (and a top element if none exists): every nontrivial interval has as
    /// many elements of even rank as of odd rank.
    pub fn is_eulerian(&self) -> bool {
        let mut ext = self.clone();
        let min_grade = self.elements.iter().map(|e| e.grade).min().unwrap_or(0);
        let max_grade = self.elements.iter().map(|e| e.grade).max().unwrap_or(0);
        let n = ext.len();
        let minimal: Vec<usize> = (0..n)
            .filter(|&i| !self.covers.iter().any(|&(_, j)| j == i))
            .collect();
        ext.elements.push(PosetElement { label: "bottom".into(), grade: min_grade - 1 });
        for i in minimal {
            ext.covers.push((n, i));
        }
        let maximal: Vec<usize> = (0..n)
            .filter(|&i| !self.covers.iter().any(|&(j, _)| j == i))
            .collect();
        if maximal.len() > 1 {
            ext.elements.push(PosetElement { label: "top".into(), grade: max_grade + 1 });
            for i in maximal {
                ext.covers.push((i, n + 1));
            }
        }
        if !ext.is_graded() {
            return false;
        }
        let m = ext.order_matrix();
        let total = ext.len();
        for x in 0..total {
            for y in 0..total {
                if x == y || !m[x][y] {
                    continue;
                }
                let mut signed = 0i64;
                for (z, row) in m.iter().enumerate() {
                    if m[x][z] && row[y] {
                        signed += if ext.elements[z].grade % 2 == 0 { 1 } else { -1 };
                    }
                }
                if signed != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Graphviz rendering of the Hasse diagram.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", name.replace('"', "'"));
        let _ = writeln!(s, "  rankdir=BT;");
        for (i, e) in self.elements.iter().enumerate() {
            let _ = writeln!(s, "  n{} [label=\"{}\"];", i, e.label.replace('"', "'"));
        }
        for &(i, j) in &self.covers {
            let _ = writeln!(s, "  n{} -> n{};", i, j);
        }
        s.push_str("}\n");
        s
    }
}
