//! Free graded Lie algebras over ℚ.
//!
//! A wedge of spheres `⋁ S^{n_i}` has rational homotopy Lie algebra free on
//! one generator of degree `n_i − 1` per sphere, with the Whitehead product
//! as bracket. This module provides exact arithmetic there:
//!
//! - [`BracketTree`] and [`LieElement`] for formal brackets and rational
//!   combinations,
//! - [`LieElement::normalize`] to rewrite into the Hall basis,
//! - [`assoc_embed`] into the tensor algebra as an independent zero test,
//! - [`LieAlgebra::hall_basis`] and [`LieAlgebra::hilbert_check`].
//!
//! Sign convention: `[u,v] = −(−1)^{|u||v|}[v,u]`, matching the
//! super-commutator `uv − (−1)^{|u||v|}vu` in the tensor algebra.

mod element;
mod embed;
mod hall;
mod json;
mod normalize;
mod tree;

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

pub use element::LieElement;
pub use embed::{assoc_embed, embed_coefficient, embed_tree, embed_witness, rank, AssocPoly};
pub use hall::{is_hall, is_strict_hall, HallMonomial, HilbertReport, HilbertRow};
pub use tree::BracketTree;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("generator {name:?}: sphere dimension {sphere_dim} is below 2")]
    SphereDimension { name: String, sphere_dim: u32 },
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("an algebra needs at least one generator")]
    NoGenerators,
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("cannot combine elements of degree {left} and {right}")]
    Inhomogeneous { left: u32, right: u32 },
    #[error("cannot parse bracket expression {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("malformed JSON: {0}")]
    Json(String),
}

/// A sphere `S^{sphere_dim}` in the wedge, i.e. a generator of lie degree
/// `sphere_dim − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub sphere_dim: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, sphere_dim: u32) -> Self {
        Self {
            name: name.into(),
            sphere_dim,
        }
    }

    pub fn lie_degree(&self) -> u32 {
        self.sphere_dim - 1
    }
}

/// The free graded Lie algebra on an ordered list of generators.
///
/// Generators listed earlier are larger in the Hall order, so for
/// generators `[x, y]` the order is `y < x` and `[x,y]`, `[x,[x,y]]` are
/// Hall trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    generators: Vec<Generator>,
}

impl LieAlgebra {
    pub fn new(generators: Vec<Generator>) -> Result<Self, LieError> {
        if generators.is_empty() {
            return Err(LieError::NoGenerators);
        }
        let mut seen = HashSet::new();
        for g in &generators {
            if g.sphere_dim < 2 {
                return Err(LieError::SphereDimension {
                    name: g.name.clone(),
                    sphere_dim: g.sphere_dim,
                });
            }
            if !seen.insert(g.name.as_str()) {
                return Err(LieError::DuplicateName(g.name.clone()));
            }
        }
        Ok(Self { generators })
    }

    /// Generators of the given lie degrees, named `x, y, z, w, x4, x5, …`.
    pub fn from_degrees(degrees: &[u32]) -> Result<Self, LieError> {
        const NAMES: [&str; 4] = ["x", "y", "z", "w"];
        let gens = degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let name = NAMES
                    .get(i)
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| format!("x{i}"));
                Generator::new(name, d + 1)
            })
            .collect();
        Self::new(gens)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn leaf(&self, index: usize) -> BracketTree {
        BracketTree::leaf(index, self.generators[index].lie_degree())
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn leaf_named(&self, name: &str) -> Result<BracketTree, LieError> {
        self.generator_index(name)
            .map(|i| self.leaf(i))
            .ok_or_else(|| LieError::UnknownGenerator(name.to_string()))
    }

    /// Renders a tree as `[x,[x,y]]`.
    pub fn display(&self, t: &BracketTree) -> String {
        let mut s = String::new();
        t.write_with(&mut s, &|g| self.generators[g].name.clone())
            .expect("writing to a String");
        s
    }

    pub fn display_element(&self, e: &LieElement) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        e.terms()
            .map(|(t, c)| format!("{c}·{}", self.display(t)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses `x`, `[x,y]`, `[x,[x,y]]`, ….
    pub fn parse(&self, input: &str) -> Result<BracketTree, LieError> {
        let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let tree = self.parse_at(&chars, &mut pos, input)?;
        if pos != chars.len() {
            return Err(LieError::Parse {
                input: input.to_string(),
                reason: format!("trailing input at {pos}"),
            });
        }
        Ok(tree)
    }

    fn parse_at(&self, s: &[char], pos: &mut usize, input: &str) -> Result<BracketTree, LieError> {
        let err = |reason: String| LieError::Parse {
            input: input.to_string(),
            reason,
        };
        match s.get(*pos) {
            Some('[') => {
                *pos += 1;
                let l = self.parse_at(s, pos, input)?;
                if s.get(*pos) != Some(&',') {
                    return Err(err(format!("expected ',' at {}", *pos)));
                }
                *pos += 1;
                let r = self.parse_at(s, pos, input)?;
                if s.get(*pos) != Some(&']') {
                    return Err(err(format!("expected ']' at {}", *pos)));
                }
                *pos += 1;
                Ok(BracketTree::bracket(&l, &r))
            }
            Some(_) => {
                let start = *pos;
                while *pos < s.len() && !matches!(s[*pos], '[' | ']' | ',') {
                    *pos += 1;
                }
                if start == *pos {
                    return Err(err(format!("expected a generator at {start}")));
                }
                let name: String = s[start..*pos].iter().collect();
                self.leaf_named(&name)
            }
            None => Err(err("unexpected end of input".into())),
        }
    }

    /// Hall monomials of degree ≤ `max_degree` plus the self-brackets `[a,a]`
    /// of odd Hall `a` with `2|a| ≤ max_degree`, sorted by degree and then by
    /// the Hall order.
    pub fn hall_basis(&self, max_degree: u32) -> Vec<HallMonomial> {
        hall::hall_basis(self, max_degree)
    }

    pub fn hilbert_check(&self, max_degree: u32) -> HilbertReport {
        hall::hilbert_check(self, max_degree)
    }

    /// Checks through the associative embedding that the basis elements up to
    /// `max_degree` are linearly independent, one multidegree at a time.
    pub fn basis_is_independent(&self, max_degree: u32) -> bool {
        let mut groups: BTreeMap<Vec<u32>, Vec<AssocPoly>> = BTreeMap::new();
        for h in self.hall_basis(max_degree) {
            groups
                .entry(h.tree().leaf_counts(self.generators.len()))
                .or_default()
                .push(embed_tree(h.tree()));
        }
        groups.values().all(|polys| rank(polys) == polys.len())
    }
}

/// Lie degree of a tree (the sum of its leaf degrees).
pub fn lie_degree(t: &BracketTree) -> u32 {
    t.degree()
}

/// Formal bracket of two elements.
pub fn bracket(u: &LieElement, v: &LieElement) -> LieElement {
    u.bracket(v)
}

pub fn normalize(e: &LieElement) -> LieElement {
    e.normalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    /// x from S³ (degree 2), y from S⁴ (degree 3); y < x.
    fn xy() -> LieAlgebra {
        LieAlgebra::new(vec![Generator::new("x", 3), Generator::new("y", 4)]).unwrap()
    }

    #[test]
    fn validates_generators() {
        assert_eq!(LieAlgebra::new(vec![]), Err(LieError::NoGenerators));
        assert!(matches!(
            LieAlgebra::new(vec![Generator::new("x", 1)]),
            Err(LieError::SphereDimension { .. })
        ));
        assert_eq!(
            LieAlgebra::new(vec![Generator::new("x", 3), Generator::new("x", 4)]),
            Err(LieError::DuplicateName("x".into()))
        );
    }

    #[test]
    fn lie_degrees() {
        let alg = xy();
        assert_eq!(lie_degree(&alg.leaf(0)), 2);
        assert_eq!(lie_degree(&alg.parse("[x,y]").unwrap()), 5);
    }

    #[test]
    fn parse_and_display_round_trip() {
        let alg = xy();
        for s in ["x", "[x,y]", "[x,[x,y]]", "[[x,y],[x,y]]"] {
            assert_eq!(alg.display(&alg.parse(s).unwrap()), s);
        }
        assert_eq!(alg.display(&alg.parse(" [ x , y ] ").unwrap()), "[x,y]");
        for bad in ["", "[x,y", "[x y]", "z", "[x,y]]", "[,y]"] {
            assert!(alg.parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn normalize_generator_is_identity() {
        let alg = xy();
        let x = LieElement::from_tree(alg.leaf(0));
        assert_eq!(x.normalize(), x);
    }

    #[test]
    fn even_self_bracket_vanishes() {
        let alg = xy();
        let xx = LieElement::from_tree(alg.parse("[x,x]").unwrap());
        assert!(xx.normalize().is_zero());
    }

    #[test]
    fn swap_sign() {
        // [y,x] = −(−1)^{2·3}[x,y] = −[x,y]
        let alg = xy();
        let yx = LieElement::from_tree(alg.parse("[y,x]").unwrap()).normalize();
        let xy_tree = alg.parse("[x,y]").unwrap();
        assert_eq!(yx, LieElement::monomial(xy_tree, q(-1)));
        assert_eq!(
            assoc_embed(&yx),
            assoc_embed(&LieElement::from_tree(alg.parse("[y,x]").unwrap()))
        );
    }

    #[test]
    fn odd_swap_sign_is_plus() {
        // both odd: [b,a] = +[a,b]
        let alg = LieAlgebra::from_degrees(&[1, 3]).unwrap();
        let ba = LieElement::from_tree(alg.parse("[y,x]").unwrap()).normalize();
        assert_eq!(ba, LieElement::from_tree(alg.parse("[x,y]").unwrap()));
    }

    #[test]
    fn triple_odd_bracket_vanishes() {
        let alg = LieAlgebra::from_degrees(&[3]).unwrap();
        let t = LieElement::from_tree(alg.parse("[x,[x,x]]").unwrap());
        assert!(t.normalize().is_zero());
        assert!(assoc_embed(&t).is_zero());
    }

    #[test]
    fn hall_examples() {
        let alg = xy();
        assert!(is_hall(&alg.parse("x").unwrap()));
        assert!(is_hall(&alg.parse("[x,y]").unwrap()));
        assert!(is_hall(&alg.parse("[x,[x,y]]").unwrap()));
        assert!(!is_hall(&alg.parse("[y,x]").unwrap()));
        assert!(!is_hall(&alg.parse("[x,x]").unwrap()));
        assert!(is_hall(&alg.parse("[y,y]").unwrap()));
        assert!(is_hall(&alg.parse("[[x,y],[x,y]]").unwrap()));
        assert!(is_hall(&alg.parse("[[x,[x,y]],[x,[x,y]]]").unwrap()));
        // [y,y] is a basis element but not a Hall tree, so its square is not allowed
        assert!(!is_hall(&alg.parse("[[y,y],[y,y]]").unwrap()));
        assert!(!is_hall(&alg.parse("[x,[y,y]]").unwrap()));
    }

    #[test]
    fn hall_basis_two_generators_to_six() {
        let alg = LieAlgebra::from_degrees(&[2, 3]).unwrap();
        let names: Vec<String> = alg
            .hall_basis(6)
            .iter()
            .map(|h| alg.display(h.tree()))
            .collect();
        assert_eq!(names, ["x", "y", "[x,y]", "[y,y]"]);
    }

    #[test]
    fn hall_basis_contains_odd_square_at_ten() {
        let alg = LieAlgebra::from_degrees(&[2, 3]).unwrap();
        let sq = alg.parse("[[x,y],[x,y]]").unwrap();
        assert!(alg.hall_basis(10).iter().any(|h| *h.tree() == sq));
    }

    #[test]
    fn single_generator_bases() {
        let even = LieAlgebra::from_degrees(&[2]).unwrap();
        assert_eq!(even.hall_basis(10).len(), 1);
        let odd = LieAlgebra::from_degrees(&[3]).unwrap();
        let names: Vec<String> = odd
            .hall_basis(6)
            .iter()
            .map(|h| odd.display(h.tree()))
            .collect();
        assert_eq!(names, ["x", "[x,x]"]);
        assert!(odd.hilbert_check(12).ok);
    }

    #[test]
    fn hilbert_rows_for_two_three() {
        let alg = LieAlgebra::from_degrees(&[2, 3]).unwrap();
        let report = alg.hilbert_check(6);
        assert!(report.ok);
        let tensor: Vec<i128> = report.rows[1..].iter().map(|r| r.tensor_coeff).collect();
        assert_eq!(tensor, [1, 1, 1, 2, 2]);
        let dims: Vec<u64> = report.rows[1..].iter().map(|r| r.basis_dim).collect();
        assert_eq!(dims, [1, 1, 0, 1, 1]);
    }
}
