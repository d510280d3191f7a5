//! Rewriting into the Hall basis.
//!
//! Basis elements are the Hall trees (see [`super::hall::is_strict_hall`])
//! and the self-brackets `[w,w]` of odd Hall trees `w`. A tree is normalized
//! bottom-up: both children are normalized, then the bracket of two basis
//! elements is expanded by [`Normalizer::bracket_basis`] using
//!
//! - graded antisymmetry `[u,v] = −(−1)^{|u||v|}[v,u]`,
//! - the graded Leibniz form of Jacobi
//!   `[u,[a,b]] = [[u,a],b] + (−1)^{|u||a|}[a,[u,b]]`,
//! - `[w,[w,w]] = 0` for odd `w`.
//!
//! For two Hall trees `u > v` with `v = [v1,v2]` and `v1 < u`, the Jacobi step
//! produces brackets whose arguments are strictly closer to the Hall
//! condition in the standard Hall-set rewriting order, so the recursion is
//! well founded; self-brackets only enter as arguments from the input and are
//! consumed by the Leibniz step. Results are memoized per pair.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::element::koszul_sign;
use super::{BracketTree, LieElement};

type Combo = BTreeMap<BracketTree, BigRational>;

// A rewrite chain this deep means the termination argument is broken.
const MAX_DEPTH: usize = 100_000;

#[derive(Default)]
pub(crate) struct Normalizer {
    pairs: HashMap<(BracketTree, BracketTree), Arc<Combo>>,
    trees: HashMap<BracketTree, Arc<Combo>>,
    depth: usize,
}

fn add_scaled(acc: &mut Combo, combo: &Combo, scale: &BigRational) {
    for (t, c) in combo {
        let v = c * scale;
        match acc.get_mut(t) {
            Some(existing) => {
                *existing += v;
                if existing.is_zero() {
                    acc.remove(t);
                }
            }
            None => {
                if !v.is_zero() {
                    acc.insert(t.clone(), v);
                }
            }
        }
    }
}

fn sign(s: i32) -> BigRational {
    BigRational::from_integer(BigInt::from(s))
}

fn single(t: BracketTree) -> Combo {
    let mut m = Combo::new();
    m.insert(t, BigRational::one());
    m
}

impl Normalizer {
    pub(crate) fn normalize(&mut self, e: &LieElement) -> LieElement {
        let mut acc = Combo::new();
        for (t, c) in e.terms() {
            let n = self.normalize_tree(t);
            add_scaled(&mut acc, &n, c);
        }
        LieElement::from_map_unchecked(acc)
    }

    fn normalize_tree(&mut self, t: &BracketTree) -> Arc<Combo> {
        if let Some(hit) = self.trees.get(t) {
            return hit.clone();
        }
        let out = match t.children() {
            None => Arc::new(single(t.clone())),
            Some((l, r)) => {
                let nl = self.normalize_tree(l);
                let nr = self.normalize_tree(r);
                Arc::new(self.bracket_combos(&nl, &nr))
            }
        };
        self.trees.insert(t.clone(), out.clone());
        out
    }

    fn bracket_combos(&mut self, a: &Combo, b: &Combo) -> Combo {
        let mut acc = Combo::new();
        for (ta, ca) in a {
            for (tb, cb) in b {
                let prod = self.bracket_basis(ta, tb);
                add_scaled(&mut acc, &prod, &(ca * cb));
            }
        }
        acc
    }

    /// Expands `[h1,h2]` for two basis elements.
    fn bracket_basis(&mut self, h1: &BracketTree, h2: &BracketTree) -> Arc<Combo> {
        let key = (h1.clone(), h2.clone());
        if let Some(hit) = self.pairs.get(&key) {
            return hit.clone();
        }
        self.depth += 1;
        assert!(
            self.depth < MAX_DEPTH,
            "Hall rewriting exceeded {MAX_DEPTH} nested steps on [{h1:?},{h2:?}]"
        );
        let out = Arc::new(self.expand(h1, h2));
        self.depth -= 1;
        self.pairs.insert(key, out.clone());
        out
    }

    fn expand(&mut self, h1: &BracketTree, h2: &BracketTree) -> Combo {
        if h1 == h2 {
            // [a,a] = −(−1)^{|a|²}[a,a]: zero for even a, a basis element for odd a.
            return if h1.is_odd() {
                single(BracketTree::bracket(h1, h2))
            } else {
                Combo::new()
            };
        }
        if h2.is_self_bracket() {
            return self.leibniz_self_bracket(h1, h2);
        }
        if h1.is_self_bracket() {
            // self-brackets have even degree, so [s,v] = −[v,s]
            let mut acc = Combo::new();
            let swapped = self.bracket_basis(h2, h1);
            add_scaled(&mut acc, &swapped, &sign(-1));
            return acc;
        }
        if h1 < h2 {
            let mut acc = Combo::new();
            let swapped = self.bracket_basis(h2, h1);
            add_scaled(&mut acc, &swapped, &sign(-koszul_sign(h1.degree(), h2.degree())));
            return acc;
        }
        // h1 > h2, both Hall trees
        let (v1, v2) = match h2.children() {
            None => return single(BracketTree::bracket(h1, h2)),
            Some((v1, v2)) => (v1.clone(), v2.clone()),
        };
        if v1 >= *h1 {
            return single(BracketTree::bracket(h1, h2));
        }
        // [u,[v1,v2]] = [[u,v1],v2] + (−1)^{|u||v1|}[v1,[u,v2]]
        let mut acc = Combo::new();
        let u_v1 = self.bracket_basis(h1, &v1);
        for (x, c) in u_v1.iter() {
            let term = self.bracket_basis(x, &v2);
            add_scaled(&mut acc, &term, c);
        }
        let s = sign(koszul_sign(h1.degree(), v1.degree()));
        let u_v2 = self.bracket_basis(h1, &v2);
        for (y, c) in u_v2.iter() {
            let term = self.bracket_basis(&v1, y);
            add_scaled(&mut acc, &term, &(c * &s));
        }
        acc
    }

    /// `[u,[w,w]] = [[u,w],w] + (−1)^{|u||w|}[w,[u,w]]`, and `[w,[w,w]] = 0`.
    fn leibniz_self_bracket(&mut self, u: &BracketTree, s: &BracketTree) -> Combo {
        let w = s.left().expect("self-bracket has children").clone();
        if *u == w {
            return Combo::new();
        }
        let mut acc = Combo::new();
        let sgn = sign(koszul_sign(u.degree(), w.degree()));
        let u_w = self.bracket_basis(u, &w);
        for (x, c) in u_w.iter() {
            let first = self.bracket_basis(x, &w);
            add_scaled(&mut acc, &first, c);
            let second = self.bracket_basis(&w, x);
            add_scaled(&mut acc, &second, &(c * &sgn));
        }
        acc
    }
}
