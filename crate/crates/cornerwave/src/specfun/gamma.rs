use crate::error::{invalid, Result};

/// Natural logarithm of the gamma function for positive arguments.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return invalid(format!("log_gamma needs a positive finite argument, got {x}"));
    }
    Ok(log_gamma_pos(x))
}

pub(crate) fn log_gamma_pos(x: f64) -> f64 {
    // Shift to x >= 12 and use the Stirling series there.
    let mut shift = 0.0;
    let mut prod = 1.0;
    let mut y = x;
    while y < 12.0 {
        prod *= y;
        if prod > 1e280 {
            shift += prod.ln();
            prod = 1.0;
        }
        y += 1.0;
    }
    shift += prod.ln();
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    // Bernoulli terms B_{2j} / (2j (2j-1) y^{2j-1}).
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
    ];
    let mut series = 0.0;
    let mut p = inv;
    for c in C {
        series += c * p;
        p *= inv2;
    }
    let half_ln_2pi = 0.918_938_533_204_672_8;
    (y - 0.5) * y.ln() - y + half_ln_2pi + series - shift
}
