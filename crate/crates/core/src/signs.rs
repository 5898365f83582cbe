//! Formal orientation lines and the Koszul sign rule.
//!
//! A line is a named generator in an integer degree. Words are ordered tensor
//! products of lines and duals of lines carrying an accumulated sign. Nothing
//! here models actual vector spaces; only degrees and signs are tracked.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientationLine {
    pub label: String,
    pub degree: i64,
}

impl OrientationLine {
    pub fn new(label: &str, degree: i64) -> Self {
        OrientationLine { label: label.to_string(), degree }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub line: OrientationLine,
    pub dual: bool,
}

impl Factor {
    pub fn line(l: OrientationLine) -> Self {
        Factor { line: l, dual: false }
    }

    pub fn dual_of(l: OrientationLine) -> Self {
        Factor { line: l, dual: true }
    }

    pub fn degree(&self) -> i64 {
        if self.dual {
            -self.line.degree
        } else {
            self.line.degree
        }
    }

    fn odd(&self) -> bool {
        self.degree().rem_euclid(2) == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineWord {
    pub factors: Vec<Factor>,
    /// `+1` or `−1`.
    pub sign: i8,
}

impl Default for LineWord {
    fn default() -> Self {
        LineWord { factors: Vec::new(), sign: 1 }
    }
}

impl LineWord {
    pub fn new(factors: Vec<Factor>) -> Self {
        LineWord { factors, sign: 1 }
    }

    pub fn degree(&self) -> i64 {
        self.factors.iter().map(Factor::degree).sum()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Labels with a trailing `^` on duals, for compact comparisons.
    pub fn labels(&self) -> Vec<String> {
        self.factors.iter().map(|f| if f.dual { format!("{}^", f.line.label) } else { f.line.label.clone() }).collect()
    }
}

impl fmt::Display for LineWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.sign < 0 { "-" } else { "+" })?;
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for x in &self.factors {
            write!(f, "\\mathfrak{{o}}({})", x.line.label)?;
            if x.dual {
                write!(f, "^\\vee")?;
            }
        }
        Ok(())
    }
}

/// Applies `new[i] = old[perm[i]]` and multiplies the sign by `(−1)^{pq}` for
/// every pair of factors of degrees `p`, `q` whose relative order flips.
pub fn reorder_sign(w: &LineWord, perm: &[usize]) -> Result<LineWord> {
    let n = w.factors.len();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::invalid(format!("{perm:?} is not a permutation of {n} factors")));
    }
    let mut odd_swaps = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if perm[i] > perm[j] && w.factors[perm[i]].odd() && w.factors[perm[j]].odd() {
                odd_swaps += 1;
            }
        }
    }
    Ok(LineWord {
        factors: perm.iter().map(|&p| w.factors[p].clone()).collect(),
        sign: if odd_swaps.is_multiple_of(2) { w.sign } else { -w.sign },
    })
}

/// Swaps the factors at `i` and `i + 1`.
pub fn swap_adjacent(w: &LineWord, i: usize) -> Result<LineWord> {
    let mut perm: Vec<usize> = (0..w.len()).collect();
    if i + 1 >= w.len() {
        return Err(Error::invalid(format!("no adjacent pair at position {i}")));
    }
    perm.swap(i, i + 1);
    reorder_sign(w, &perm)
}

/// Contracts a line against its dual. The later factor is first moved next to
/// the earlier one; if the pair then reads `o^∨ o` it is swapped to `o o^∨`,
/// which pairs to `+1`.
pub fn contract_dual_pair(w: &LineWord, i: usize, j: usize) -> Result<LineWord> {
    let n = w.len();
    if i >= n || j >= n || i == j {
        return Err(Error::invalid(format!("positions {i}, {j} do not name two factors")));
    }
    let (a, b) = (i.min(j), i.max(j));
    let (fa, fb) = (&w.factors[a], &w.factors[b]);
    if fa.line != fb.line || fa.dual == fb.dual {
        return Err(Error::invalid(format!(
            "factors `{}` and `{}` are not a line and its dual",
            w.labels()[a],
            w.labels()[b]
        )));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let moved = perm.remove(b);
    perm.insert(a + 1, moved);
    let mut out = reorder_sign(w, &perm)?;
    if out.factors[a].dual {
        out = swap_adjacent(&out, a)?;
    }
    out.factors.drain(a..a + 2);
    Ok(out)
}

pub fn tensor(a: &LineWord, b: &LineWord) -> LineWord {
    LineWord { factors: a.factors.iter().chain(&b.factors).cloned().collect(), sign: a.sign * b.sign }
}

/// `(x₁ ⋯ x_k)^∨ = x_k^∨ ⋯ x₁^∨`.
pub fn dual(w: &LineWord) -> LineWord {
    LineWord {
        factors: w.factors.iter().rev().map(|f| Factor { line: f.line.clone(), dual: !f.dual }).collect(),
        sign: w.sign,
    }
}

/// Label of the contracted line and the two positions it occupied.
pub type ContractionStep = (String, usize, usize);

/// Contracts line/dual pairs until none remain, always taking the pair with
/// the fewest factors between them (leftmost on ties). Returns the reduced
/// word and the contraction steps as `(label, i, j)`.
pub fn reduce(w: &LineWord) -> Result<(LineWord, Vec<ContractionStep>)> {
    let mut cur = w.clone();
    let mut steps = Vec::new();
    loop {
        let mut best: Option<(usize, usize)> = None;
        for i in 0..cur.len() {
            for j in i + 1..cur.len() {
                let (x, y) = (&cur.factors[i], &cur.factors[j]);
                if x.line == y.line && x.dual != y.dual && best.is_none_or(|(a, b)| j - i < b - a) {
                    best = Some((i, j));
                }
            }
        }
        let Some((i, j)) = best else { break };
        steps.push((cur.factors[i].line.label.clone(), i, j));
        cur = contract_dual_pair(&cur, i, j)?;
    }
    Ok((cur, steps))
}

/// Degrees of the pieces in the orientation identity for a rigid curve with
/// `punctures` punctures: `D` the linearized operator, `E` the obstruction
/// space, `𝔤` one half of the automorphism Lie algebra and `M̄` the moduli
/// space. The translation direction and each circle have degree one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancellationDegrees {
    pub d: i64,
    pub e: i64,
    pub g: i64,
    pub m: i64,
    pub punctures: usize,
}

/// `𝔬(D) 𝔬(E) 𝔬(ℝ)^∨ 𝔬(𝔭𝔤𝔩) 𝔬(M̄) 𝔬(S¹)^{⊗Γ} (𝔬(S¹)^{⊗Γ})^∨ 𝔬(𝔤)^∨ 𝔬(𝔤)^∨ 𝔬(E)^∨`
/// with `𝔬(𝔭𝔤𝔩) = 𝔬(𝔤_re) 𝔬(𝔤_im)`.
pub fn cancellation_word(deg: CancellationDegrees) -> LineWord {
    let d = OrientationLine::new("D", deg.d);
    let e = OrientationLine::new("E", deg.e);
    let r = OrientationLine::new("R", 1);
    let g_re = OrientationLine::new("g_re", deg.g);
    let g_im = OrientationLine::new("g_im", deg.g);
    let m = OrientationLine::new("M", deg.m);
    let circles = LineWord::new((1..=deg.punctures).map(|i| Factor::line(OrientationLine::new(&format!("S{i}"), 1))).collect());
    let head = LineWord::new(vec![
        Factor::line(d),
        Factor::line(e.clone()),
        Factor::dual_of(r),
        Factor::line(g_re.clone()),
        Factor::line(g_im.clone()),
        Factor::line(m),
    ]);
    let tail = LineWord::new(vec![Factor::dual_of(g_im), Factor::dual_of(g_re), Factor::dual_of(e)]);
    tensor(&tensor(&tensor(&head, &circles), &dual(&circles)), &tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(degs: &[i64]) -> LineWord {
        LineWord::new(degs.iter().enumerate().map(|(i, &d)| Factor::line(OrientationLine::new(&format!("x{i}"), d))).collect())
    }

    #[test]
    fn koszul_swaps() {
        assert_eq!(swap_adjacent(&w(&[1, 1]), 0).unwrap().sign, -1);
        assert_eq!(swap_adjacent(&w(&[1, 2]), 0).unwrap().sign, 1);
        assert_eq!(swap_adjacent(&w(&[-3, 5]), 0).unwrap().sign, -1);
        let x = w(&[1, 2, 3, 1]);
        let p = [2, 0, 3, 1];
        let y = reorder_sign(&x, &p).unwrap();
        let mut inv = [0; 4];
        for (i, &pi) in p.iter().enumerate() {
            inv[pi] = i;
        }
        assert_eq!(reorder_sign(&y, &inv).unwrap(), x);
        assert!(reorder_sign(&x, &[0, 0, 1, 2]).is_err());
    }

    #[test]
    fn contraction() {
        let o = OrientationLine::new("o", 1);
        let a = LineWord::new(vec![Factor::line(o.clone()), Factor::dual_of(o.clone())]);
        let r = contract_dual_pair(&a, 0, 1).unwrap();
        assert!(r.is_empty() && r.sign == 1);
        let b = LineWord::new(vec![Factor::dual_of(o.clone()), Factor::line(o.clone())]);
        assert_eq!(contract_dual_pair(&b, 0, 1).unwrap().sign, -1);
        let z = OrientationLine::new("z", 0);
        let c = LineWord::new(vec![Factor::dual_of(z.clone()), Factor::line(z)]);
        assert_eq!(contract_dual_pair(&c, 1, 0).unwrap().sign, 1);
        let mixed = LineWord::new(vec![Factor::line(o.clone()), Factor::dual_of(OrientationLine::new("p", 1))]);
        assert!(contract_dual_pair(&mixed, 0, 1).is_err());
        // o x o^∨ with x odd: moving o^∨ past x costs a sign.
        let x = OrientationLine::new("x", 1);
        let d = LineWord::new(vec![Factor::line(o.clone()), Factor::line(x.clone()), Factor::dual_of(o)]);
        let r = contract_dual_pair(&d, 0, 2).unwrap();
        assert_eq!((r.labels(), r.sign), (vec!["x".to_string()], -1));
    }

    #[test]
    fn tensor_and_dual() {
        let a = w(&[1, 2]);
        let b = w(&[3]);
        assert_eq!(tensor(&LineWord::default(), &a), a);
        let c = w(&[5, 1]);
        assert_eq!(tensor(&tensor(&a, &b), &c), tensor(&a, &tensor(&b, &c)));
        assert_eq!(tensor(&a, &b).degree(), 6);
        assert_eq!(dual(&a).labels(), vec!["x1^", "x0^"]);
        assert_eq!(dual(&a).degree(), -3);
    }

    #[test]
    fn cancellation_reduces_to_three_factors() {
        for punctures in 0..4 {
            for d in 0..2 {
                for e in 0..2 {
                    let deg = CancellationDegrees { d, e, g: 3, m: 1, punctures };
                    let word = cancellation_word(deg);
                    assert_eq!(word.len(), 9 + 2 * punctures);
                    let (r, steps) = reduce(&word).unwrap();
                    assert_eq!(r.labels(), vec!["D", "R^", "M"]);
                    assert_eq!(steps.len(), 3 + punctures);
                    assert_eq!(reduce(&word).unwrap().0.sign, r.sign);
                }
            }
        }
    }
}
