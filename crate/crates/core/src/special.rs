//! Gamma function on the positive real axis.
//!
//! Lanczos approximation with Godfrey's coefficient set (g = 607/128, 15
//! terms). Relative error stays near 1e-15 on `[0.1, 60]`. Arguments below
//! 0.5 are lifted with `Γ(x) = Γ(x+1)/x`; there is no reflection, so
//! nonpositive arguments are rejected.

use crate::{QhatmError, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;

const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

const SQRT_2PI: f64 = 2.506_628_274_631_000_2;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn check_domain(x: f64) -> Result<()> {
    // NaN also fails this test.
    if x > 0.0 {
        Ok(())
    } else {
        Err(QhatmError::GammaDomain { argument: x })
    }
}

/// Lanczos sum and shifted base for `Γ(y + 1)`, valid for `y >= -0.5`.
fn lanczos_parts(y: f64) -> (f64, f64) {
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (y + i as f64);
    }
    (sum, y + LANCZOS_G + 0.5)
}

/// Γ(x) for `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    check_domain(x)?;
    if x < 0.5 {
        return Ok(gamma(x + 1.0)? / x);
    }
    let y = x - 1.0;
    let (sum, base) = lanczos_parts(y);
    // Split the power to keep base^(y+0.5) finite up to x ~ 171.
    let half = libm::pow(base, 0.5 * (y + 0.5));
    Ok(SQRT_2PI * half * (half * libm::exp(-base)) * sum)
}

/// ln Γ(x) for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_domain(x)?;
    if x < 0.5 {
        return Ok(ln_gamma(x + 1.0)? - libm::log(x));
    }
    let y = x - 1.0;
    let (sum, base) = lanczos_parts(y);
    Ok(LN_SQRT_2PI + (y + 0.5) * libm::log(base) - base + libm::log(sum))
}

/// Γ(num) / Γ(den), switching to log space once either argument exceeds 30.
pub fn gamma_ratio(num: f64, den: f64) -> Result<f64> {
    if num > 30.0 || den > 30.0 {
        Ok(libm::exp(ln_gamma(num)? - ln_gamma(den)?))
    } else {
        Ok(gamma(num)? / gamma(den)?)
    }
}
