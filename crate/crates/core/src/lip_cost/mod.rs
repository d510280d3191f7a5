//! Asymptotic Lipschitz costs.
//!
//! A [`CostExpr`] is a sum of atoms `L^α (log L)^k exp(κ√log L)^{0|1}`, each
//! carrying an opaque positive constant. Products, maxima and sums are
//! closed over atoms, and comparison is by the leading atom, so the calculus
//! works with `O(·)` classes and never needs a numeric constant. Numeric
//! evaluation fixes every constant and `κ` to 1.

mod budget;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::cw_spaces::ComplexSpec;
use crate::growth_count::ln_big;
use crate::rational::{to_f64, Exponent};
use crate::Q;

pub use budget::{
    budget_sweep, example2_side_conditions, example_budget, sample_admissible, strengthened_bounds,
    BudgetError, BudgetReport, SideConditions, Stage, StageSummary, StrengthenedBounds,
    SweepLevel, SweepReport, DEFAULT_CONSTANT,
};

/// One term `L^pow_l · (log L)^pow_log · exp(κ√log L)^[subexp]`.
///
/// Atoms are ordered by growth: `pow_l` first, then the subexponential
/// factor, then the log power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Atom {
    pub pow_l: Q,
    pub pow_log: u32,
    pub subexp: bool,
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.pow_l
            .cmp(&other.pow_l)
            .then(self.subexp.cmp(&other.subexp))
            .then(self.pow_log.cmp(&other.pow_log))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Atom {
    pub const CONSTANT: Atom = Atom {
        pow_l: Q::ZERO,
        pow_log: 0,
        subexp: false,
    };

    fn mul(self, other: Atom) -> Atom {
        Atom {
            pow_l: self.pow_l + other.pow_l,
            pow_log: self.pow_log + other.pow_log,
            // exp(κ√log L)² = exp(2κ√log L) is the same class
            subexp: self.subexp || other.subexp,
        }
    }

    /// `ln` of the atom's value at `L = e^{ln_l}` with unit constants.
    pub fn ln_eval(&self, ln_l: f64) -> f64 {
        let mut v = to_f64(&self.pow_l) * ln_l;
        if self.pow_log > 0 {
            v += self.pow_log as f64 * ln_l.ln();
        }
        if self.subexp {
            v += ln_l.sqrt();
        }
        v
    }
}

/// A canonical sum of atoms: sorted descending, duplicates merged (equal
/// classes add to the same class).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CostExpr {
    atoms: Vec<Atom>,
}

impl CostExpr {
    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut atoms: Vec<Atom> = atoms.into_iter().collect();
        if atoms.is_empty() {
            atoms.push(Atom::CONSTANT);
        }
        atoms.sort_by(|a, b| b.cmp(a));
        atoms.dedup();
        Self { atoms }
    }

    pub fn constant() -> Self {
        Self::from_atoms([Atom::CONSTANT])
    }

    pub fn power(pow_l: Q) -> Self {
        Self::atom(pow_l, 0, false)
    }

    pub fn atom(pow_l: Q, pow_log: u32, subexp: bool) -> Self {
        Self::from_atoms([Atom {
            pow_l,
            pow_log,
            subexp,
        }])
    }

    /// `exp(κ√log L)`.
    pub fn subexp() -> Self {
        Self::atom(Q::ZERO, 0, true)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Re-canonicalizes; a no-op on values built through this API.
    pub fn canonical(&self) -> Self {
        Self::from_atoms(self.atoms.iter().copied())
    }

    pub fn leading(&self) -> Atom {
        self.atoms[0]
    }

    pub fn is_constant(&self) -> bool {
        self.leading() == Atom::CONSTANT
    }

    pub fn product(&self, other: &Self) -> Self {
        Self::from_atoms(
            self.atoms
                .iter()
                .flat_map(|a| other.atoms.iter().map(move |b| a.mul(*b))),
        )
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::from_atoms(self.atoms.iter().chain(&other.atoms).copied())
    }

    /// The dominant operand; with equal leading atoms, their sum, which is
    /// the same class.
    pub fn max(&self, other: &Self) -> Self {
        match self.compare(other) {
            Ordering::Greater => self.clone(),
            Ordering::Less => other.clone(),
            Ordering::Equal => self.sum(other),
        }
    }

    /// Growth comparison of the leading atoms.
    pub fn compare(&self, other: &Self) -> Ordering {
        self.leading().cmp(&other.leading())
    }

    /// `self = O(other)`.
    pub fn dominated_by(&self, other: &Self) -> bool {
        self.compare(other) != Ordering::Greater
    }

    /// `other = O(self)`.
    pub fn dominates(&self, other: &Self) -> bool {
        other.dominated_by(self)
    }

    /// `ln` of the value at `L = e^{ln_l}` with unit constants and `κ = 1`.
    pub fn ln_eval(&self, ln_l: f64) -> f64 {
        let vals: Vec<f64> = self.atoms.iter().map(|a| a.ln_eval(ln_l)).collect();
        let top = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        top + vals.iter().map(|v| (v - top).exp()).sum::<f64>().ln()
    }

    pub fn eval(&self, l: f64) -> f64 {
        self.ln_eval(l.ln()).exp()
    }

    /// For `self` strictly dominating `other`, a value of `ln L` past which
    /// `self` evaluates at least as large as `other`, found by scanning a
    /// geometric grid of `ln L` up to `1e12`. `None` when `self` does not
    /// strictly dominate or no crossover appears on the grid.
    pub fn crossover_ln_l(&self, other: &Self) -> Option<f64> {
        if self.compare(other) != Ordering::Greater {
            return None;
        }
        let mut grid = Vec::new();
        let mut x = std::f64::consts::LN_2;
        while x < 1e12 {
            grid.push(x);
            x *= 1.02;
        }
        let mut threshold = None;
        for &x in grid.iter().rev() {
            if self.ln_eval(x) >= other.ln_eval(x) {
                threshold = Some(x);
            } else {
                break;
            }
        }
        threshold
    }

    /// Renders with the given variable name, e.g. `N^(1/9)`.
    pub fn display_in(&self, var: &str) -> String {
        self.atoms
            .iter()
            .map(|a| display_atom(a, var))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn display_atom(a: &Atom, var: &str) -> String {
    let mut parts = Vec::new();
    if !a.pow_l.is_zero() {
        if a.pow_l.is_one() {
            parts.push(var.to_string());
        } else {
            parts.push(format!("{var}^{}", Exponent(&a.pow_l)));
        }
    }
    match a.pow_log {
        0 => {}
        1 => parts.push(format!("log {var}")),
        k => parts.push(format!("log^{k} {var}")),
    }
    if a.subexp {
        parts.push(format!("exp(κ√log {var})"));
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("·")
    }
}

impl fmt::Display for CostExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("L"))
    }
}

impl Serialize for CostExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Cost of a maximally efficient degree-`d` self-map of `S^k` when `d` is
/// given as a class: `O(d^{1/k})`. Log powers are rounded up after
/// division, which keeps the result an upper bound.
pub fn cost_degree_map(k: u32, degree: &CostExpr) -> CostExpr {
    assert!(k >= 2, "degree maps need k ≥ 2");
    CostExpr::from_atoms(degree.atoms.iter().map(|a| Atom {
        pow_l: a.pow_l / Q::from_integer(k as i64),
        pow_log: a.pow_log.div_ceil(k),
        subexp: a.subexp,
    }))
}

/// Numeric form of [`cost_degree_map`]: `d^{1/k}`, and 0 for the constant
/// map of degree 0.
pub fn cost_degree_map_value(k: u32, d: &BigUint) -> f64 {
    assert!(k >= 2, "degree maps need k ≥ 2");
    if d.is_zero() {
        0.0
    } else {
        (ln_big(d) / k as f64).exp()
    }
}

/// Composition with the attaching map of the top cell of `S^i × S^j`: the
/// larger of the two costs, times a constant.
pub fn cost_whitehead(c1: &CostExpr, c2: &CostExpr) -> CostExpr {
    c1.max(c2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NullhomotopyMode {
    /// The proven bound: an extra `exp(κ√log L)` factor.
    Theorem,
    /// The conjectured linear bound.
    Conjecture,
}

pub fn cost_nullhomotopy(c: &CostExpr, mode: NullhomotopyMode) -> CostExpr {
    match mode {
        NullhomotopyMode::Theorem => c.product(&CostExpr::subexp()),
        NullhomotopyMode::Conjecture => c.clone(),
    }
}

/// Cost classes bracketing the distortion of `N·ζ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionBounds {
    /// Any nullhomotopy of `N·ζ` in `Y` has Lipschitz constant `Ω(N^{1/n})`.
    pub lower: CostExpr,
    /// Scaling the leaf on the largest sphere realizes `N·ζ` at `O(N^{1/k})`.
    pub upper: CostExpr,
    pub lower_value: f64,
    pub upper_value: f64,
}

/// Bounds in the variable `N`.
pub fn distortion_bounds(spec: &ComplexSpec, n: &BigUint) -> DistortionBounds {
    let lower_exp = Q::new(1, spec.n as i64);
    let lower_value = (ln_big(n) / spec.n as f64).exp();
    if n.is_one() {
        return DistortionBounds {
            lower: CostExpr::constant(),
            upper: CostExpr::constant(),
            lower_value,
            upper_value: 1.0,
        };
    }
    let (px, qy) = crate::cw_spaces::leaf_exponents(&spec.zeta);
    // scale one leaf by N; the other leaves stay identity maps of constant cost
    let (k, upper) = [(spec.ell, px), (spec.m, qy)]
        .into_iter()
        .filter(|&(_, count)| count > 0)
        .map(|(k, _)| {
            let c = cost_whitehead(&CostExpr::constant(), &cost_degree_map(k, &CostExpr::power(Q::ONE)));
            (k, c)
        })
        .min_by(|a, b| a.1.compare(&b.1))
        .expect("ζ has leaves");
    DistortionBounds {
        lower: CostExpr::power(lower_exp),
        upper,
        lower_value,
        upper_value: cost_degree_map_value(k, n),
    }
}
