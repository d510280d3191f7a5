use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// A bracket monomial: a generator or the bracket of two trees.
///
/// Trees are totally ordered by the Hall order: trees with more leaves are
/// smaller, leaves compare by generator rank (generators listed earlier in
/// the algebra are larger), and trees with equal leaf count compare left
/// subtree first, then right subtree.
#[derive(Clone)]
pub struct BracketTree(Arc<Node>);

#[derive(PartialEq, Eq, Hash)]
enum Node {
    Leaf {
        generator: usize,
        degree: u32,
    },
    Bracket {
        left: BracketTree,
        right: BracketTree,
        degree: u32,
        len: u32,
    },
}

impl BracketTree {
    /// A leaf for generator index `generator` of lie degree `degree`.
    ///
    /// Prefer [`super::LieAlgebra::leaf`], which looks the degree up.
    pub fn leaf(generator: usize, degree: u32) -> Self {
        BracketTree(Arc::new(Node::Leaf { generator, degree }))
    }

    pub fn bracket(left: &BracketTree, right: &BracketTree) -> Self {
        BracketTree(Arc::new(Node::Bracket {
            degree: left.degree() + right.degree(),
            len: left.len() + right.len(),
            left: left.clone(),
            right: right.clone(),
        }))
    }

    /// Lie degree: the sum of the leaf degrees.
    pub fn degree(&self) -> u32 {
        match *self.0 {
            Node::Leaf { degree, .. } | Node::Bracket { degree, .. } => degree,
        }
    }

    /// Number of leaves.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u32 {
        match *self.0 {
            Node::Leaf { .. } => 1,
            Node::Bracket { len, .. } => len,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(*self.0, Node::Leaf { .. })
    }

    pub fn is_odd(&self) -> bool {
        self.degree() % 2 == 1
    }

    pub fn generator(&self) -> Option<usize> {
        match *self.0 {
            Node::Leaf { generator, .. } => Some(generator),
            Node::Bracket { .. } => None,
        }
    }

    pub fn children(&self) -> Option<(&BracketTree, &BracketTree)> {
        match &*self.0 {
            Node::Leaf { .. } => None,
            Node::Bracket { left, right, .. } => Some((left, right)),
        }
    }

    pub fn left(&self) -> Option<&BracketTree> {
        self.children().map(|(l, _)| l)
    }

    /// Depth of the tree; a leaf has depth 0.
    pub fn depth(&self) -> u32 {
        match self.children() {
            None => 0,
            Some((l, r)) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Number of leaves of each generator, indexed by generator.
    pub fn leaf_counts(&self, generators: usize) -> Vec<u32> {
        let mut counts = vec![0; generators];
        self.visit_leaves(&mut |g| {
            if g >= counts.len() {
                counts.resize(g + 1, 0);
            }
            counts[g] += 1;
        });
        counts
    }

    fn visit_leaves(&self, f: &mut impl FnMut(usize)) {
        match &*self.0 {
            Node::Leaf { generator, .. } => f(*generator),
            Node::Bracket { left, right, .. } => {
                left.visit_leaves(f);
                right.visit_leaves(f);
            }
        }
    }

    /// Rebuilds the tree with every leaf replaced through `f`.
    pub fn map_leaves(&self, f: &impl Fn(usize, u32) -> BracketTree) -> BracketTree {
        match &*self.0 {
            Node::Leaf { generator, degree } => f(*generator, *degree),
            Node::Bracket { left, right, .. } => {
                BracketTree::bracket(&left.map_leaves(f), &right.map_leaves(f))
            }
        }
    }

    /// `true` for a node whose two children are equal.
    pub fn is_self_bracket(&self) -> bool {
        matches!(self.children(), Some((l, r)) if l == r)
    }

    /// Writes the tree with generator names supplied by `name`.
    pub(crate) fn write_with(
        &self,
        f: &mut impl fmt::Write,
        name: &impl Fn(usize) -> String,
    ) -> fmt::Result {
        match &*self.0 {
            Node::Leaf { generator, .. } => f.write_str(&name(*generator)),
            Node::Bracket { left, right, .. } => {
                f.write_char('[')?;
                left.write_with(f, name)?;
                f.write_char(',')?;
                right.write_with(f, name)?;
                f.write_char(']')
            }
        }
    }
}

impl PartialEq for BracketTree {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for BracketTree {}

impl Hash for BracketTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl Ord for BracketTree {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        // more leaves = smaller
        match other.len().cmp(&self.len()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (&*self.0, &*other.0) {
            (Node::Leaf { generator: a, .. }, Node::Leaf { generator: b, .. }) => b.cmp(a),
            (
                Node::Bracket {
                    left: l1,
                    right: r1,
                    ..
                },
                Node::Bracket {
                    left: l2,
                    right: r2,
                    ..
                },
            ) => l1.cmp(l2).then_with(|| r1.cmp(r2)),
            _ => unreachable!("trees with equal leaf counts have the same shape at the root"),
        }
    }
}

impl PartialOrd for BracketTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BracketTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, &|g| format!("g{g}"))
    }
}
