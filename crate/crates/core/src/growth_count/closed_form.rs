use num_traits::Zero;

use super::GrowthError;
use crate::cw_spaces::ConstraintSystem;
use crate::Q;

/// Growth exponent of `count_pairs(sys, L)` as `L → ∞`, and whether a
/// `log L` factor appears.
///
/// In log coordinates the admissible region is the polygon
/// `0 ≤ α ≤ ℓ, 0 ≤ β ≤ m, pα + qβ ≤ n`, and the count grows like
/// `L^{max(α+β)}`. The candidate vertices on the monomial edge give
/// `e₁ = ℓ + (n − pℓ)/q` and `e₂ = m + (n − qm)/p`. When `e₁ = e₂` the
/// maximum is attained along the whole edge, which contributes one `log L`.
/// The axes `a = 0` and `b = 0` always contribute `L^m` and `L^ℓ`.
pub fn closed_form_exponent(sys: &ConstraintSystem) -> Result<(Q, bool), GrowthError> {
    if sys.ell < 1 || sys.m < 1 {
        return Err(GrowthError::Degenerate("box exponents must be at least 1"));
    }
    let ell = Q::from_integer(sys.ell.into());
    let m = Q::from_integer(sys.m.into());
    let Some(mono) = sys.monomial else {
        return Ok((ell + m, false));
    };
    let (p, q, n) = (
        Q::from_integer(mono.p.into()),
        Q::from_integer(mono.q.into()),
        Q::from_integer(mono.n.into()),
    );
    match (p.is_zero(), q.is_zero()) {
        (true, true) => return Err(GrowthError::Degenerate("monomial with p = q = 0")),
        (true, false) => return Ok((ell + m.min(n / q), false)),
        (false, true) => return Ok((ell.min(n / p) + m, false)),
        (false, false) => {}
    }
    if n >= p * ell + q * m {
        return Ok((ell + m, false));
    }
    let e1 = ell + (n - p * ell) / q;
    let e2 = m + (n - q * m) / p;
    let area = e1.max(e2);
    let axes = ell.max(m);
    if area >= axes {
        Ok((area, e1 == e2))
    } else {
        Ok((axes, false))
    }
}
