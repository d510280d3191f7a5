//! A self-contained log-log SVG: axes, sample points, fitted curve.

use std::fmt::Write;

use mapgrowth::growth_count::{ln_big, FitModel, FitResult, GrowthSample};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

/// Intercept of the fitted model: the mean residual once the slope terms
/// are removed, which is the least-squares intercept for fixed slopes.
fn intercept(samples: &[GrowthSample], fit: &FitResult) -> f64 {
    let n = samples.len() as f64;
    samples
        .iter()
        .map(|s| ln_big(&s.count) - curve_without_intercept(fit, (s.l as f64).ln()))
        .sum::<f64>()
        / n
}

fn curve_without_intercept(fit: &FitResult, x: f64) -> f64 {
    match fit.model {
        FitModel::PurePower => fit.r_hat * x,
        FitModel::PowerLog => fit.r_hat * x + fit.gamma_hat * x.ln(),
    }
}

pub fn render(samples: &[GrowthSample], fit: &FitResult) -> String {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| ((s.l as f64).ln(), ln_big(&s.count)))
        .collect();
    let c = intercept(samples, fit);
    let (x0, x1) = bounds(pts.iter().map(|p| p.0));
    let (y0, y1) = bounds(pts.iter().map(|p| p.1));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        out,
        r#"<path d="M{left},{top} L{left},{bottom} L{right},{bottom}" stroke="black" fill="none"/>"#
    );
    for (v, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="{anchor}">{v:.2}</text>"#,
            sx(v),
            bottom + 18.0
        );
    }
    for v in [y0, y1] {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="end">{v:.2}</text>"#,
            left - 6.0,
            sy(v) + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="14" text-anchor="middle">log L</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.1}" font-size="14" text-anchor="middle" transform="rotate(-90 18 {:.1})">log count</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    let steps = 100;
    let path: Vec<String> = (0..=steps)
        .map(|i| {
            let x = x0 + (x1 - x0) * i as f64 / steps as f64;
            format!("{:.2},{:.2}", sx(x), sy(c + curve_without_intercept(fit, x)))
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline points="{}" stroke="steelblue" stroke-width="2" fill="none"/>"#,
        path.join(" ")
    );
    for (x, y) in &pts {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="crimson"/>"#,
            sx(*x),
            sy(*y)
        );
    }
    let label = match fit.model {
        FitModel::PurePower => format!("fit: L^{:.4}", fit.r_hat),
        FitModel::PowerLog => format!("fit: L^{:.4} (log L)^{:.4}", fit.r_hat, fit.gamma_hat),
    };
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="14">{label}</text>"#,
        left + 10.0,
        top + 10.0
    );
    out.push_str("</svg>\n");
    out
}

fn bounds(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 1.0, hi + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn draws_every_sample() {
        let samples: Vec<GrowthSample> = [4u64, 8, 16, 32]
            .iter()
            .map(|&l| GrowthSample { l, count: BigUint::from(l * l * l) })
            .collect();
        let fit = FitResult {
            model: FitModel::PurePower,
            r_hat: 3.0,
            gamma_hat: 0.0,
            residual: 0.0,
            n_samples: 4,
        };
        let svg = render(&samples, &fit);
        assert_eq!(svg.matches("<circle").count(), 4);
        assert!(svg.contains("<polyline"));
        assert!((intercept(&samples, &fit)).abs() < 1e-12);
    }
}
