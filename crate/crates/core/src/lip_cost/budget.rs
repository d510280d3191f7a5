//! Numeric checks of the cost budget behind the lower-bound construction
//! for `example1`.
//!
//! For degrees `(a, b)` within the strengthened bounds
//! `|a| ≤ L^{3−ε}`, `|b| ≤ L^{4−ε}`, `|a²b| ≤ L^{9−2ε}`, the construction
//! splits `a²b = s·t + e` with `s = ⌊L^{3−ε}⌋` and `t = ⌊a²b / L^{3−ε}⌋`
//! and prices each piece. Every real power `L^{k−ε}` with `ε = u/v` is
//! handled exactly through `L^{kv−u}` and integer `v`-th roots.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Pow, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{cost_degree_map_value, cost_nullhomotopy, CostExpr, NullhomotopyMode};
use crate::cw_spaces::{ComplexSpec, Family};
use crate::growth_count::integer_root;
use crate::rational::{format_rational, to_f64};
use crate::Q;

/// The single constant class used by every stage check.
pub const DEFAULT_CONSTANT: f64 = 8.0;

/// Ratio slopes within this distance of zero count as flat.
pub const FLAT_SLOPE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BudgetError {
    #[error("the budget checker applies to example1, not {0}")]
    WrongFamily(Family),
    #[error("ε must satisfy 0 < ε < 1 with denominator at most 1000, got {0}")]
    Eps(String),
    #[error("L must be at least 2, got {0}")]
    SmallL(u64),
    #[error("{bound} violated: {value} > {limit}")]
    Bound {
        bound: &'static str,
        value: String,
        limit: String,
    },
    #[error("sampling range {0} does not fit in 128 bits")]
    TooLarge(String),
}

/// `⌊L^{3−ε}⌋`, `⌊L^{4−ε}⌋` and `⌊L^{9−2ε}⌋`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrengthenedBounds {
    pub a_max: BigUint,
    pub b_max: BigUint,
    pub a2b_max: BigUint,
}

fn check_eps(eps: Q) -> Result<(u32, u32), BudgetError> {
    // the denominator cap keeps L^{9v} within reach of exact arithmetic
    if eps <= Q::ZERO || eps >= Q::ONE || *eps.denom() > 1000 {
        return Err(BudgetError::Eps(format_rational(&eps)));
    }
    Ok((*eps.numer() as u32, *eps.denom() as u32))
}

/// `⌊L^{k − u/v}⌋ = ⌊(L^{kv−u})^{1/v}⌋`.
fn floor_power(l: u64, k: u32, u: u32, v: u32) -> BigUint {
    integer_root(&Pow::pow(BigUint::from(l), k * v - u), v)
}

pub fn strengthened_bounds(l: u64, eps: Q) -> Result<StrengthenedBounds, BudgetError> {
    let (u, v) = check_eps(eps)?;
    if l < 2 {
        return Err(BudgetError::SmallL(l));
    }
    Ok(StrengthenedBounds {
        a_max: floor_power(l, 3, u, v),
        b_max: floor_power(l, 4, u, v),
        a2b_max: floor_power(l, 9, 2 * u, v),
    })
}

/// One priced piece of the construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    pub name: &'static str,
    /// `None` for stages that are checked only symbolically.
    pub measured: Option<f64>,
    pub claimed: CostExpr,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetReport {
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(serialize_with = "ser_q")]
    pub eps: Q,
    #[serde(serialize_with = "ser_big")]
    pub a: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub b: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub s: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub t: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub e: BigInt,
    pub stages: Vec<Stage>,
}

fn ser_big<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_q<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(v))
}

impl BudgetReport {
    pub fn all_pass(&self) -> bool {
        self.stages.iter().all(|s| s.pass)
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    /// `measured / claimed(L)` with unit constants.
    pub fn ratio(&self, name: &str) -> Option<f64> {
        let st = self.stage(name)?;
        Some(st.measured? / st.claimed.eval(self.l as f64))
    }
}

/// `⌊N / L^{3−ε}⌋` for any sign of `N`.
fn floor_div_power(n: &BigInt, l: u64, u: u32, v: u32) -> BigInt {
    let denom_pow: BigUint = Pow::pow(BigUint::from(l), 3 * v - u);
    let nv: BigUint = Pow::pow(n.magnitude(), v);
    // t₀ = ⌊|N| / L^{3−ε}⌋ is the largest t with t^v · L^{3v−u} ≤ |N|^v
    let t0 = integer_root(&(&nv / &denom_pow), v);
    match n.sign() {
        Sign::Minus => {
            let exact = Pow::pow(&t0, v) * &denom_pow == nv;
            let ceil = if exact { t0 } else { t0 + 1u32 };
            -BigInt::from(ceil)
        }
        _ => BigInt::from(t0),
    }
}

fn root_value(k: u32, x: &BigInt) -> f64 {
    cost_degree_map_value(k, x.magnitude())
}

/// Runs every stage check for one pair `(a, b)`.
///
/// `constant` is the single constant class `C`: a numeric stage passes when
/// its measured cost is at most `C` times the claimed class evaluated at `L`.
pub fn example_budget(
    spec: &ComplexSpec,
    l: u64,
    eps: Q,
    a: &BigInt,
    b: &BigInt,
    constant: f64,
) -> Result<BudgetReport, BudgetError> {
    if spec.family != Family::Example1 {
        return Err(BudgetError::WrongFamily(spec.family));
    }
    let (u, v) = check_eps(eps)?;
    let bounds = strengthened_bounds(l, eps)?;
    let n = a * a * b;
    for (bound, value, limit) in [
        ("|a| ≤ L^(3−ε)", a.magnitude(), &bounds.a_max),
        ("|b| ≤ L^(4−ε)", b.magnitude(), &bounds.b_max),
        ("|a²b| ≤ L^(9−2ε)", n.magnitude(), &bounds.a2b_max),
    ] {
        if value > limit {
            return Err(BudgetError::Bound {
                bound,
                value: value.to_string(),
                limit: limit.to_string(),
            });
        }
    }

    let s = BigInt::from(bounds.a_max.clone());
    let t = floor_div_power(&n, l, u, v);
    let e = &n - &s * &t;

    let lf = l as f64;
    let sub_linear = CostExpr::power(Q::ONE - eps / 4);
    let check = |measured: f64, claimed: &CostExpr| measured <= constant * claimed.eval(lf);

    let g1 = root_value(3, a).max(root_value(4, b));
    let u3s = root_value(3, &s);
    let st = u3s.max(root_value(6, &t));
    let e_abs = e.abs().to_f64().unwrap_or(f64::INFINITY);
    let e_corr = root_value(8, &e);
    let total = g1.max(st).max(e_corr);

    let numeric = [
        ("g1", g1, sub_linear.clone()),
        ("u3s", u3s, sub_linear.clone()),
        ("st_product", st, sub_linear.clone()),
        ("e_bound", e_abs, CostExpr::power(Q::from_integer(6))),
        ("e_correction", e_corr, CostExpr::power(Q::new(3, 4))),
    ];
    let mut stages: Vec<Stage> = numeric
        .into_iter()
        .map(|(name, measured, claimed)| Stage {
            name,
            measured: Some(measured),
            pass: check(measured, &claimed),
            claimed,
        })
        .collect();

    // g1 ≃ g2 through maps of cost L^{1−ε/4}: only the class is checked
    let homotopy = cost_nullhomotopy(&sub_linear, NullhomotopyMode::Theorem);
    let linear = CostExpr::power(Q::ONE);
    stages.push(Stage {
        name: "homotopy_g1_g2",
        measured: None,
        pass: homotopy.dominated_by(&linear),
        claimed: homotopy,
    });
    stages.push(Stage {
        name: "total",
        measured: Some(total),
        pass: check(total, &linear),
        claimed: linear,
    });

    Ok(BudgetReport {
        l,
        eps,
        a: a.clone(),
        b: b.clone(),
        s,
        t,
        e,
        stages,
    })
}

/// A uniformly random admissible pair: `a` uniform in its range, then `b`
/// uniform among the values allowed with that `a`.
pub fn sample_admissible<R: Rng>(rng: &mut R, bounds: &StrengthenedBounds) -> Result<(BigInt, BigInt), BudgetError> {
    let fit = |x: &BigUint| x.to_u128().ok_or_else(|| BudgetError::TooLarge(x.to_string()));
    let a_max = fit(&bounds.a_max)?;
    let a_abs = rng.random_range(0..=a_max);
    let b_lim = if a_abs == 0 {
        bounds.b_max.clone()
    } else {
        let a2 = BigUint::from(a_abs) * BigUint::from(a_abs);
        (&bounds.a2b_max / a2).min(bounds.b_max.clone())
    };
    let b_abs = rng.random_range(0..=fit(&b_lim)?);
    let sign = |neg: bool| if neg { -1 } else { 1 };
    let a = BigInt::from(a_abs) * sign(rng.random_bool(0.5));
    let b = BigInt::from(b_abs) * sign(rng.random_bool(0.5));
    Ok((a, b))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageSummary {
    pub name: &'static str,
    pub passed: usize,
    /// Largest `measured / claimed(L)` over the trials, for numeric stages.
    pub max_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepLevel {
    #[serde(rename = "L")]
    pub l: u64,
    pub trials: usize,
    pub e_identity: bool,
    pub stages: Vec<StageSummary>,
    /// Every trial, in sampling order.
    pub reports: Vec<BudgetReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeSummary {
    pub stage: &'static str,
    /// Least-squares slope of `ln max_ratio` against `ln L`.
    pub slope: f64,
    pub claimed_exponent: f64,
    /// `claimed_exponent + slope`: the exponent the data actually shows.
    pub observed_exponent: f64,
    pub flat: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    #[serde(serialize_with = "ser_q")]
    pub eps: Q,
    pub constant: f64,
    pub trials: usize,
    pub levels: Vec<SweepLevel>,
    /// One entry per numeric stage; empty when fewer than two `L` values.
    pub slopes: Vec<SlopeSummary>,
    pub all_stages_pass: bool,
    pub e_identity: bool,
    pub all_flat: bool,
}

impl SweepReport {
    pub fn pass(&self) -> bool {
        self.all_stages_pass && self.e_identity && self.all_flat
    }
}

fn level_seed(seed: u64, l: u64) -> u64 {
    seed ^ l.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs [`example_budget`] on `trials` random admissible pairs at every `L`.
pub fn budget_sweep(
    spec: &ComplexSpec,
    ls: &[u64],
    eps: Q,
    trials: usize,
    seed: u64,
    constant: f64,
) -> Result<SweepReport, BudgetError> {
    let mut levels = Vec::with_capacity(ls.len());
    let mut ratios: Vec<Vec<Option<f64>>> = Vec::new();
    for &l in ls {
        let bounds = strengthened_bounds(l, eps)?;
        let mut rng = ChaCha8Rng::seed_from_u64(level_seed(seed, l));
        let pairs = (0..trials)
            .map(|_| sample_admissible(&mut rng, &bounds))
            .collect::<Result<Vec<_>, _>>()?;
        let reports = pairs
            .par_iter()
            .map(|(a, b)| example_budget(spec, l, eps, a, b, constant))
            .collect::<Result<Vec<_>, _>>()?;

        let e_identity = reports.iter().all(|r| &r.a * &r.a * &r.b == &r.s * &r.t + &r.e);
        let names: Vec<&'static str> = match reports.first() {
            Some(r) => r.stages.iter().map(|s| s.name).collect(),
            None => Vec::new(),
        };
        let stages: Vec<StageSummary> = names
            .iter()
            .map(|&name| StageSummary {
                name,
                passed: reports
                    .iter()
                    .filter(|r| r.stage(name).is_some_and(|s| s.pass))
                    .count(),
                max_ratio: reports.iter().filter_map(|r| r.ratio(name)).reduce(f64::max),
            })
            .collect();
        ratios.push(stages.iter().map(|s| s.max_ratio).collect());
        levels.push(SweepLevel {
            l,
            trials,
            e_identity,
            stages,
            reports,
        });
    }

    let mut slopes = Vec::new();
    if let Some(first) = levels.first() {
        let distinct_ls = ls.iter().collect::<std::collections::BTreeSet<_>>().len();
        for (i, summary) in first.stages.iter().enumerate() {
            if summary.max_ratio.is_none() || distinct_ls < 2 {
                continue;
            }
            let points: Vec<(f64, f64)> = levels
                .iter()
                .zip(&ratios)
                .map(|(lev, r)| ((lev.l as f64).ln(), r[i].map_or(f64::NEG_INFINITY, f64::ln)))
                .collect();
            let slope = ls_slope(&points);
            let claimed = claimed_exponent(summary.name, eps);
            slopes.push(SlopeSummary {
                stage: summary.name,
                slope,
                claimed_exponent: claimed,
                observed_exponent: claimed + slope,
                flat: slope.abs() <= FLAT_SLOPE,
            });
        }
    }

    let all_stages_pass = levels
        .iter()
        .all(|lev| lev.stages.iter().all(|s| s.passed == lev.trials));
    let e_identity = levels.iter().all(|lev| lev.e_identity);
    let all_flat = slopes.iter().all(|s| s.flat);
    Ok(SweepReport {
        seed,
        eps,
        constant,
        trials,
        levels,
        slopes,
        all_stages_pass,
        e_identity,
        all_flat,
    })
}

fn claimed_exponent(stage: &str, eps: Q) -> f64 {
    match stage {
        "e_bound" => 6.0,
        "e_correction" => 0.75,
        "total" => 1.0,
        _ => to_f64(&(Q::ONE - eps / 4)),
    }
}

/// Slope of the least-squares line through the points; NaN when undefined.
fn ls_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Arithmetic side conditions of the `example2` construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SideConditions {
    /// `⌈|a| / L²⌉`
    pub s: u128,
    /// `⌈|b| / L³⌉`
    pub t: u128,
    /// `s·t ≤ 2L`
    pub st_le_2l: bool,
    /// `(2s + 1)·t ≤ C·L`
    pub figure_bound: bool,
}

/// Checks the side conditions for a pair with `|a| ≤ L³`, `|b| ≤ L⁴`,
/// `|ab| ≤ L⁶`.
pub fn example2_side_conditions(l: u64, a: i128, b: i128, constant: u128) -> Result<SideConditions, BudgetError> {
    let l = l as u128;
    let (a, b) = (a.unsigned_abs(), b.unsigned_abs());
    for (bound, value, limit) in [
        ("|a| ≤ L^3", a, l.pow(3)),
        ("|b| ≤ L^4", b, l.pow(4)),
        ("|ab| ≤ L^6", a * b, l.pow(6)),
    ] {
        if value > limit {
            return Err(BudgetError::Bound {
                bound,
                value: value.to_string(),
                limit: limit.to_string(),
            });
        }
    }
    let s = a.div_ceil(l * l);
    let t = b.div_ceil(l * l * l);
    Ok(SideConditions {
        s,
        t,
        st_le_2l: s * t <= 2 * l,
        figure_bound: (2 * s + 1) * t <= constant * l,
    })
}
