use std::collections::BTreeMap;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::normalize::Normalizer;
use super::{BracketTree, LieError};

/// `(−1)^{ab}`.
pub(crate) fn koszul_sign(a: u32, b: u32) -> i32 {
    if (a % 2 == 1) && (b % 2 == 1) {
        -1
    } else {
        1
    }
}

/// A homogeneous rational combination of bracket trees.
///
/// Every tree in the support has the same lie degree and no coefficient is
/// zero; the zero element has no degree.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LieElement {
    terms: BTreeMap<BracketTree, BigRational>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_tree(tree: BracketTree) -> Self {
        Self::monomial(tree, BigRational::one())
    }

    pub fn monomial(tree: BracketTree, coefficient: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(tree, coefficient);
        }
        Self { terms }
    }

    /// Sums the given terms, rejecting mixed degrees.
    pub fn from_terms(
        terms: impl IntoIterator<Item = (BracketTree, BigRational)>,
    ) -> Result<Self, LieError> {
        let mut out = Self::zero();
        for (tree, c) in terms {
            out = out.checked_add(&Self::monomial(tree, c))?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of the support; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(BracketTree::degree)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BracketTree, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, tree: &BracketTree) -> BigRational {
        self.terms.get(tree).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LieError> {
        if let (Some(a), Some(b)) = (self.degree(), other.degree()) {
            if a != b {
                return Err(LieError::Inhomogeneous { left: a, right: b });
            }
        }
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LieError> {
        self.checked_add(&-other.clone())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(t, v)| (t.clone(), v * c))
                .collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    /// Formal bilinear bracket; the result is not normalized.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(BracketTree::bracket(a, b), ca * cb);
            }
        }
        out
    }

    /// Rewrites the element in the Hall basis (Hall monomials plus odd
    /// self-brackets).
    pub fn normalize(&self) -> Self {
        Normalizer::default().normalize(self)
    }

    pub(crate) fn add_term(&mut self, tree: BracketTree, c: BigRational) {
        if c.is_zero() {
            return;
        }
        debug_assert!(self.degree().is_none_or(|d| d == tree.degree()));
        let entry = self.terms.entry(tree);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn from_map_unchecked(terms: BTreeMap<BracketTree, BigRational>) -> Self {
        Self { terms }
    }
}

impl Neg for LieElement {
    type Output = LieElement;

    fn neg(self) -> LieElement {
        LieElement {
            terms: self.terms.into_iter().map(|(t, c)| (t, -c)).collect(),
        }
    }
}

impl From<BracketTree> for LieElement {
    fn from(tree: BracketTree) -> Self {
        Self::from_tree(tree)
    }
}

impl std::fmt::Debug for LieElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})·{t:?}")?;
        }
        Ok(())
    }
}
