//! The associative (tensor-algebra) embedding, used as an independent check
//! on normalization: a Lie element vanishes iff its image does.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::element::koszul_sign;
use super::{BracketTree, LieElement};

/// A noncommutative polynomial over ℚ; words are sequences of generator
/// indices.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct AssocPoly {
    terms: BTreeMap<Vec<u16>, BigRational>,
}

impl AssocPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(word: Vec<u16>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(word, BigRational::one());
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &[u16]) -> BigRational {
        self.terms.get(word).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, other: &AssocPoly, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        for (w, v) in &other.terms {
            let add = v * c;
            match self.terms.get_mut(w) {
                Some(e) => {
                    *e += add;
                    if e.is_zero() {
                        self.terms.remove(w);
                    }
                }
                None => {
                    self.terms.insert(w.clone(), add);
                }
            }
        }
    }

    pub fn mul(&self, other: &AssocPoly) -> AssocPoly {
        let mut out = AssocPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = Vec::with_capacity(w1.len() + w2.len());
                w.extend_from_slice(w1);
                w.extend_from_slice(w2);
                let c = c1 * c2;
                match out.terms.get_mut(&w) {
                    Some(e) => {
                        *e += c;
                        if e.is_zero() {
                            out.terms.remove(&w);
                        }
                    }
                    None => {
                        out.terms.insert(w, c);
                    }
                }
            }
        }
        out
    }
}

/// `leaf ↦ word`, `[u,v] ↦ uv − (−1)^{|u||v|} vu`.
pub fn embed_tree(t: &BracketTree) -> AssocPoly {
    match t.children() {
        None => AssocPoly::word(vec![t.generator().expect("leaf") as u16]),
        Some((u, v)) => {
            let eu = embed_tree(u);
            let ev = embed_tree(v);
            let mut out = eu.mul(&ev);
            let s = -koszul_sign(u.degree(), v.degree());
            out.add_scaled(&ev.mul(&eu), &BigRational::from_integer(BigInt::from(s)));
            out
        }
    }
}

pub fn assoc_embed(e: &LieElement) -> AssocPoly {
    let mut out = AssocPoly::zero();
    for (t, c) in e.terms() {
        out.add_scaled(&embed_tree(t), c);
    }
    out
}

/// Coefficient of one word in `embed_tree(t)`, without expanding the whole
/// polynomial. Subtrees map to contiguous subwords, so memoizing on
/// (subtree, offset) makes this polynomial in the tree size.
pub fn embed_coefficient(t: &BracketTree, word: &[u16]) -> BigInt {
    if word.len() != t.len() as usize {
        return BigInt::zero();
    }
    let mut memo = HashMap::new();
    coefficient_at(t, word, 0, &mut memo)
}

fn coefficient_at(
    t: &BracketTree,
    word: &[u16],
    start: usize,
    memo: &mut HashMap<(BracketTree, usize), BigInt>,
) -> BigInt {
    let Some((u, v)) = t.children() else {
        let hit = t.generator().map(|g| g as u16) == Some(word[start]);
        return if hit { BigInt::one() } else { BigInt::zero() };
    };
    let key = (t.clone(), start);
    if let Some(c) = memo.get(&key) {
        return c.clone();
    }
    let (lu, lv) = (u.len() as usize, v.len() as usize);
    let mut c = coefficient_at(u, word, start, memo) * coefficient_at(v, word, start + lu, memo);
    let vu = coefficient_at(v, word, start, memo) * coefficient_at(u, word, start + lv, memo);
    if koszul_sign(u.degree(), v.degree()) == 1 {
        c -= vu;
    } else {
        c += vu;
    }
    memo.insert(key, c.clone());
    c
}

/// Decides `embed_tree(t) ≠ 0`, returning a word with nonzero coefficient.
///
/// Small trees are embedded in full. Larger ones are probed on a few
/// candidate words (both leaf readings and both sorted arrangements), which
/// finds a witness for the iterated brackets used here; only if all probes
/// vanish is the full polynomial expanded.
pub fn embed_witness(t: &BracketTree) -> Option<Vec<u16>> {
    const FULL_EXPANSION_LEAVES: u32 = 12;
    if t.len() > FULL_EXPANSION_LEAVES {
        let mut left_first = Vec::new();
        let mut right_first = Vec::new();
        reading(t, false, &mut left_first);
        reading(t, true, &mut right_first);
        let mut ascending = left_first.clone();
        ascending.sort_unstable();
        let mut descending = ascending.clone();
        descending.reverse();
        for w in [left_first, right_first, ascending, descending] {
            if !embed_coefficient(t, &w).is_zero() {
                return Some(w);
            }
        }
    }
    embed_tree(t).terms().next().map(|(w, _)| w.clone())
}

fn reading(t: &BracketTree, right_first: bool, out: &mut Vec<u16>) {
    match t.children() {
        None => out.push(t.generator().expect("leaf") as u16),
        Some((u, v)) if right_first => {
            reading(v, right_first, out);
            reading(u, right_first, out);
        }
        Some((u, v)) => {
            reading(u, right_first, out);
            reading(v, right_first, out);
        }
    }
}

/// Rank over ℚ of a family of polynomials (Gaussian elimination on the
/// coefficient matrix).
pub fn rank(polys: &[AssocPoly]) -> usize {
    let mut columns: BTreeMap<&Vec<u16>, usize> = BTreeMap::new();
    for p in polys {
        for w in p.terms.keys() {
            let next = columns.len();
            columns.entry(w).or_insert(next);
        }
    }
    let ncols = columns.len();
    let mut rows: Vec<Vec<BigRational>> = polys
        .iter()
        .map(|p| {
            let mut row = vec![BigRational::zero(); ncols];
            for (w, c) in &p.terms {
                row[columns[w]] = c.clone();
            }
            row
        })
        .collect();

    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip();
        for v in &mut rows[rank][col..] {
            *v *= &inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *v -= &factor * p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
