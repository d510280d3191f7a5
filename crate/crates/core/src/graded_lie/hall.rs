use serde::Serialize;

use super::{BracketTree, LieAlgebra};

/// Membership in the Hall set (without self-brackets).
///
/// A leaf is Hall. A node `[u,v]` is Hall iff `u` and `v` are Hall, `v < u`,
/// and either `v` is a leaf or `v = [v1,v2]` with `v1 ≥ u`.
pub fn is_strict_hall(t: &BracketTree) -> bool {
    match t.children() {
        None => true,
        Some((u, v)) => {
            v < u
                && v.left().is_none_or(|v1| v1 >= u)
                && is_strict_hall(u)
                && is_strict_hall(v)
        }
    }
}

/// Hall trees, plus `[a,a]` for every odd-degree Hall tree `a`.
pub fn is_hall(t: &BracketTree) -> bool {
    match t.children() {
        Some((a, b)) if a == b => a.is_odd() && is_strict_hall(a),
        _ => is_strict_hall(t),
    }
}

/// A basis element of the free graded Lie algebra.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HallMonomial(BracketTree);

impl HallMonomial {
    pub fn new(tree: BracketTree) -> Option<Self> {
        is_hall(&tree).then_some(HallMonomial(tree))
    }

    pub fn tree(&self) -> &BracketTree {
        &self.0
    }

    pub fn into_tree(self) -> BracketTree {
        self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.degree()
    }

    pub fn is_self_bracket(&self) -> bool {
        self.0.is_self_bracket()
    }
}

pub(crate) fn hall_basis(algebra: &LieAlgebra, max_degree: u32) -> Vec<HallMonomial> {
    // by_len[k] holds the Hall trees with k+1 leaves
    let mut by_len: Vec<Vec<BracketTree>> = vec![(0..algebra.generators().len())
        .map(|i| algebra.leaf(i))
        .filter(|t| t.degree() <= max_degree)
        .collect()];
    let min_degree = algebra
        .generators()
        .iter()
        .map(|g| g.lie_degree())
        .min()
        .unwrap_or(1)
        .max(1);
    let max_len = (max_degree / min_degree) as usize;
    for len in 2..=max_len {
        let mut level = Vec::new();
        for left_len in 1..len {
            let right_len = len - left_len;
            for u in &by_len[left_len - 1] {
                for v in &by_len[right_len - 1] {
                    if u.degree() + v.degree() > max_degree || v >= u {
                        continue;
                    }
                    if v.left().is_none_or(|v1| v1 >= u) {
                        level.push(BracketTree::bracket(u, v));
                    }
                }
            }
        }
        by_len.push(level);
    }
    let mut out: Vec<HallMonomial> = by_len.into_iter().flatten().map(HallMonomial).collect();
    let squares: Vec<HallMonomial> = out
        .iter()
        .filter(|h| h.0.is_odd() && 2 * h.degree() <= max_degree)
        .map(|h| HallMonomial(BracketTree::bracket(&h.0, &h.0)))
        .collect();
    out.extend(squares);
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.0.cmp(&b.0)));
    out
}

/// One row of the Poincaré-series comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertRow {
    pub degree: u32,
    /// Number of Hall basis elements of this degree.
    pub basis_dim: u64,
    /// Coefficient of `t^degree` in `1/(1 − Σ t^{deg g})`.
    pub tensor_coeff: i128,
    /// Coefficient of `t^degree` in the product over basis elements.
    pub product_coeff: i128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertReport {
    pub max_degree: u32,
    pub rows: Vec<HilbertRow>,
    pub first_mismatch: Option<u32>,
    pub ok: bool,
}

fn mul_trunc(a: &[i128], b: &[i128]) -> Vec<i128> {
    let n = a.len();
    let mut out = vec![0i128; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Checks `∏_{d even}(1−t^d)^{−e_d} · ∏_{d odd}(1+t^d)^{o_d} = 1/(1 − Σ t^{deg g_i})`
/// through `max_degree`, where `e_d`, `o_d` count basis elements of degree `d`.
pub(crate) fn hilbert_check(algebra: &LieAlgebra, max_degree: u32) -> HilbertReport {
    let n = max_degree as usize + 1;
    let basis = hall_basis(algebra, max_degree);
    let mut dims = vec![0u64; n];
    for h in &basis {
        dims[h.degree() as usize] += 1;
    }

    // 1/(1 − Σ t^{d_i}) by c_k = Σ_i c_{k − d_i}
    let mut tensor = vec![0i128; n];
    tensor[0] = 1;
    for k in 1..n {
        tensor[k] = algebra
            .generators()
            .iter()
            .map(|g| g.lie_degree() as usize)
            .filter(|&d| d >= 1 && d <= k)
            .map(|d| tensor[k - d])
            .sum();
    }

    let mut product = vec![0i128; n];
    product[0] = 1;
    for (d, &count) in dims.iter().enumerate().skip(1) {
        for _ in 0..count {
            let mut factor = vec![0i128; n];
            if d % 2 == 0 {
                // 1/(1 − t^d)
                for k in (0..n).step_by(d) {
                    factor[k] = 1;
                }
            } else {
                factor[0] = 1;
                factor[d] = 1;
            }
            product = mul_trunc(&product, &factor);
        }
    }

    let rows: Vec<HilbertRow> = (1..n)
        .map(|d| HilbertRow {
            degree: d as u32,
            basis_dim: dims[d],
            tensor_coeff: tensor[d],
            product_coeff: product[d],
        })
        .collect();
    let first_mismatch = rows
        .iter()
        .find(|r| r.tensor_coeff != r.product_coeff)
        .map(|r| r.degree);
    HilbertReport {
        max_degree,
        rows,
        first_mismatch,
        ok: first_mismatch.is_none(),
    }
}
