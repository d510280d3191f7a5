//! Exact counts of degree pairs allowed by a [`ConstraintSystem`].
//!
//! `count_pairs(sys, L)` is the number of integer pairs `(a, b)` with
//! `|a| ≤ L^ℓ`, `|b| ≤ L^m` and `|a|^p |b|^q ≤ L^n`, which is the number of
//! candidate homotopy classes of `L`-Lipschitz maps up to bounded torsion.

mod closed_form;
mod fit;

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cw_spaces::ConstraintSystem;

pub use closed_form::closed_form_exponent;
pub use fit::{fit_growth, ln_big, FitModel, FitResult};

/// Default cap on the number of `a` values visited by one count.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrowthError {
    #[error("L must be at least 1")]
    ZeroL,
    #[error(
        "count needs {needed} iterations but the budget is {budget}; \
         raise --budget or pass --blocked"
    )]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("fitting needs at least 4 samples, got {0}")]
    TooFewSamples(usize),
    #[error("fitting needs every L ≥ 2, got {0}")]
    SmallL(u64),
    #[error("sample L values must be distinct, {0} repeats")]
    DuplicateL(u64),
    #[error("sample at L = {0} has a zero count")]
    ZeroCount(u64),
    #[error("the least-squares fit failed: {0}")]
    Fit(&'static str),
    #[error("degenerate constraint system: {0}")]
    Degenerate(&'static str),
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("could not start the worker pool: {0}")]
    Pool(String),
}

/// `⌊N^{1/k}⌋`, the largest `t` with `t^k ≤ N`.
///
/// Backed by `BigUint::nth_root`; values that fit in a `u128` take the
/// primitive path.
pub fn integer_root(n: &BigUint, k: u32) -> BigUint {
    assert!(k >= 1, "integer_root needs k ≥ 1");
    match n.to_u128() {
        Some(small) => BigUint::from(small.nth_root(k)),
        None => n.nth_root(k),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    /// Maximum number of loop iterations (values of `|a|`, or blocks in
    /// blocked mode).
    pub budget: u64,
    /// Group runs of `a` that share the same bound on `|b|`.
    pub blocked: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            blocked: false,
        }
    }
}

/// An exact count at one value of `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthSample {
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(serialize_with = "ser_decimal")]
    pub count: BigUint,
}

fn ser_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn count_pairs(sys: &ConstraintSystem, l: u64, opts: CountOptions) -> Result<BigUint, GrowthError> {
    if l == 0 {
        return Err(GrowthError::ZeroL);
    }
    let lb = BigUint::from(l);
    let a_max: BigUint = Pow::pow(&lb, sys.ell);
    let b_max: BigUint = Pow::pow(&lb, sys.m);
    let Some(mono) = sys.monomial else {
        return Ok((2u32 * &a_max + 1u32) * (2u32 * &b_max + 1u32));
    };
    let n: BigUint = Pow::pow(&lb, mono.n);
    let (p, q) = (mono.p, mono.q);

    if p == 0 && q == 0 {
        return Err(GrowthError::Degenerate("monomial with p = q = 0"));
    }
    if p == 0 {
        // the bound does not involve a
        let b = integer_root(&n, q).min(b_max);
        return Ok((2u32 * &a_max + 1u32) * (2u32 * b + 1u32));
    }
    if q == 0 {
        // the bound does not involve b
        let a = integer_root(&n, p).min(a_max);
        return Ok((2u32 * a + 1u32) * (2u32 * &b_max + 1u32));
    }

    let counter = Counter::new(&n, &b_max, p, q);
    if opts.blocked {
        return counter.blocked(&a_max, opts.budget);
    }
    let needed = &a_max + 1u32;
    let Some(iterations) = needed.to_u64().filter(|&v| v <= opts.budget) else {
        return Err(GrowthError::BudgetExceeded {
            needed: needed.to_string(),
            budget: opts.budget,
        });
    };
    Ok(counter.plain(iterations - 1))
}

/// Bound on `|b|` for a given `|a|`, with a primitive fast path.
struct Counter<'a> {
    n: &'a BigUint,
    b_max: &'a BigUint,
    p: u32,
    q: u32,
    small: Option<(u128, u128)>,
}

impl<'a> Counter<'a> {
    fn new(n: &'a BigUint, b_max: &'a BigUint, p: u32, q: u32) -> Self {
        // keep the u128 running total well clear of overflow
        let small = n.to_u128().zip(b_max.to_u128().filter(|&b| b < 1 << 96));
        Self {
            n,
            b_max,
            p,
            q,
            small,
        }
    }

    /// Largest admissible `|b|` for `|a| = a` (`a ≥ 1`).
    fn b_bound(&self, a: &BigUint) -> BigUint {
        if let (Some((n, b_max)), Some(a)) = (self.small, a.to_u128()) {
            return BigUint::from(self.b_bound_small(a, n, b_max));
        }
        let ap: BigUint = Pow::pow(a, self.p);
        integer_root(&(self.n / ap), self.q).min(self.b_max.clone())
    }

    fn b_bound_small(&self, a: u128, n: u128, b_max: u128) -> u128 {
        match a.checked_pow(self.p) {
            // a^p > N, so only b = 0 survives
            None => 0,
            Some(ap) => (n / ap).nth_root(self.q).min(b_max),
        }
    }

    /// Visits every `|a| ∈ [0, a_max]`.
    fn plain(&self, a_max: u64) -> BigUint {
        if let Some((n, b_max)) = self.small {
            // a = 0 contributes 2·b_max + 1; every a > 0 counts for ±a
            let mut total: u128 = 2 * b_max + 1;
            for a in 1..=a_max as u128 {
                let b = self.b_bound_small(a, n, b_max);
                total += 2 * (2 * b + 1);
            }
            return BigUint::from(total);
        }
        let mut total = 2u32 * self.b_max + 1u32;
        for a in 1..=a_max {
            let b = self.b_bound(&BigUint::from(a));
            total += 2u32 * (2u32 * b + 1u32);
        }
        total
    }

    /// Walks maximal runs of `a` on which the bound on `|b|` is constant: for
    /// bound `v > 0` the run ends at `⌊(N / v^q)^{1/p}⌋`.
    fn blocked(&self, a_max: &BigUint, budget: u64) -> Result<BigUint, GrowthError> {
        let mut total = 2u32 * self.b_max + 1u32;
        let mut a = BigUint::one();
        let mut blocks: u64 = 0;
        while &a <= a_max {
            blocks += 1;
            if blocks > budget {
                return Err(GrowthError::BudgetExceeded {
                    needed: format!("more than {budget} blocks"),
                    budget,
                });
            }
            let v = self.b_bound(&a);
            let end = if v.is_zero() {
                a_max.clone()
            } else {
                let vq: BigUint = Pow::pow(&v, self.q);
                integer_root(&(self.n / vq), self.p).min(a_max.clone())
            };
            let run = &end - &a + 1u32;
            total += 2u32 * run * (2u32 * v + 1u32);
            a = end + 1u32;
        }
        Ok(total)
    }
}

/// Spacing of an `L` grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

/// `points` values from `lmin` to `lmax` inclusive, rounded to integers and
/// deduplicated.
pub fn l_grid(lmin: u64, lmax: u64, points: usize, spacing: Spacing) -> Result<Vec<u64>, GrowthError> {
    if lmin < 1 || lmax < lmin {
        return Err(GrowthError::Grid(format!("need 1 ≤ lmin ≤ lmax, got {lmin}..{lmax}")));
    }
    if points < 1 {
        return Err(GrowthError::Grid("need at least one point".into()));
    }
    if points == 1 {
        return Ok(vec![lmin]);
    }
    let (lo, hi) = (lmin as f64, lmax as f64);
    let mut out: Vec<u64> = (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            let v = match spacing {
                Spacing::Log => (lo.ln() + t * (hi.ln() - lo.ln())).exp(),
                Spacing::Linear => lo + t * (hi - lo),
            };
            (v.round() as u64).clamp(lmin, lmax)
        })
        .collect();
    out.dedup();
    Ok(out)
}

/// Counts every `L` of the grid on a pool of `workers` threads.
///
/// `on_sample` sees the samples in grid order as soon as each prefix of the
/// grid is complete, so a caller can stream results and keep them if a later
/// count fails.
pub fn count_grid<F>(
    sys: &ConstraintSystem,
    ls: &[u64],
    opts: CountOptions,
    workers: usize,
    on_sample: F,
) -> Result<Vec<GrowthSample>, GrowthError>
where
    F: Fn(&GrowthSample) + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| GrowthError::Pool(e.to_string()))?;

    struct Pending {
        next: usize,
        done: BTreeMap<usize, GrowthSample>,
    }
    let pending = Mutex::new(Pending {
        next: 0,
        done: BTreeMap::new(),
    });

    let results: Result<Vec<GrowthSample>, GrowthError> = pool.install(|| {
        ls.par_iter()
            .enumerate()
            .map(|(i, &l)| {
                let sample = GrowthSample {
                    l,
                    count: count_pairs(sys, l, opts)?,
                };
                let mut guard = pending.lock().expect("grid state lock");
                guard.done.insert(i, sample.clone());
                loop {
                    let next = guard.next;
                    let Some(ready) = guard.done.remove(&next) else {
                        break;
                    };
                    on_sample(&ready);
                    guard.next += 1;
                }
                Ok(sample)
            })
            .collect()
    });
    results
}
