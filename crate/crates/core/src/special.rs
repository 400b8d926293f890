//! Error function family: `erf`, `erfc`, and their inverses.
//!
//! `erf`/`erfc` follow the piecewise rational scheme of fdlibm's `s_erf.c`;
//! the coefficients below are taken from it.
//!
//! ====================================================
//! Copyright (C) 1993 by Sun Microsystems, Inc. All rights reserved.
//!
//! Developed at SunPro, a Sun Microsystems, Inc. business.
//! Permission to use, copy, modify, and distribute this
//! software is freely granted, provided that this notice
//! is preserved.
//! ====================================================
//!
//! The inverses start from a rational approximation of the normal quantile
//! and are polished with Halley steps on the forward function.

#![allow(clippy::excessive_precision)]

use std::f64::consts::{FRAC_2_SQRT_PI, SQRT_2};

const ERX: f64 = 8.45062911510467529297e-01;
const EFX: f64 = 1.28379167095512586316e-01;

// [0, 0.84375]
const PP: [f64; 5] = [
    1.28379167095512558561e-01,
    -3.25042107247001499370e-01,
    -2.84817495755985104766e-02,
    -5.77027029648944159157e-03,
    -2.37630166566501626084e-05,
];
const QQ: [f64; 5] = [
    3.97917223959155352819e-01,
    6.50222499887672944485e-02,
    5.08130628187576562776e-03,
    1.32494738004321644526e-04,
    -3.96022827877536812320e-06,
];

// [0.84375, 1.25]
const PA: [f64; 7] = [
    -2.36211856075265944077e-03,
    4.14856118683748331666e-01,
    -3.72207876035701323847e-01,
    3.18346619901161753674e-01,
    -1.10894694282396677476e-01,
    3.54783043256182359371e-02,
    -2.16637559486879084300e-03,
];
const QA: [f64; 6] = [
    1.06420880400844228286e-01,
    5.40397917702171048937e-01,
    7.18286544141962662868e-02,
    1.26171219808761642112e-01,
    1.36370839120290507362e-02,
    1.19844998467991074170e-02,
];

// [1.25, 1/0.35]
const RA: [f64; 8] = [
    -9.86494403484714822705e-03,
    -6.93858572707181764372e-01,
    -1.05586262253232909814e+01,
    -6.23753324503260060396e+01,
    -1.62396669462573470355e+02,
    -1.84605092906711035994e+02,
    -8.12874355063065934246e+01,
    -9.81432934416914548592e+00,
];
const SA: [f64; 8] = [
    1.96512716674392571292e+01,
    1.37657754143519042600e+02,
    4.34565877475229228821e+02,
    6.45387271733267880336e+02,
    4.29008140027567833386e+02,
    1.08635005541779435134e+02,
    6.57024977031928170135e+00,
    -6.04244152148580987438e-02,
];

// [1/0.35, 28]
const RB: [f64; 7] = [
    -9.86494292470009928597e-03,
    -7.99283237680523006574e-01,
    -1.77579549177547519889e+01,
    -1.60636384855821916062e+02,
    -6.37566443368389627722e+02,
    -1.02509513161107724954e+03,
    -4.83519191608651397019e+02,
];
const SB: [f64; 7] = [
    3.03380607434824582924e+01,
    3.25792512996573918826e+02,
    1.53672958608443695994e+03,
    3.19985821950859553908e+03,
    2.55305040643316442583e+03,
    4.74528541206955367215e+02,
    -2.24409524465858183362e+01,
];

/// Horner evaluation, coefficients in ascending order.
fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// 1 + x * poly(coeffs, x).
fn poly1(coeffs: &[f64], x: f64) -> f64 {
    1.0 + x * poly(coeffs, x)
}

/// erf(|x|) - x on the inner interval, as the correction x * R/S.
fn inner_correction(x: f64) -> f64 {
    let z = x * x;
    x * (poly(&PP, z) / poly1(&QQ, z))
}

/// erf(1 + s) - ERX near x = 1.
fn near_one(x: f64) -> f64 {
    let s = x - 1.0;
    poly(&PA, s) / poly1(&QA, s)
}

/// x * erfc(x) for 1.25 <= x < 28, computed without cancellation.
fn tail_scaled(x: f64) -> f64 {
    let s = 1.0 / (x * x);
    let (r, q) = if x < 1.0 / 0.35 {
        (poly(&RA, s), poly1(&SA, s))
    } else {
        (poly(&RB, s), poly1(&SB, s))
    };
    // Split x so -x*x is evaluated without losing low bits.
    let z = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
    (-z * z - 0.5625).exp() * ((z - x) * (z + x) + r / q).exp()
}

pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let a = x.abs();
    let value = if a < 2f64.powi(-28) {
        a + EFX * a
    } else if a < 0.84375 {
        a + inner_correction(a)
    } else if a < 1.25 {
        ERX + near_one(a)
    } else if a < 6.0 {
        1.0 - tail_scaled(a) / a
    } else {
        1.0
    };
    value.copysign(x)
}

pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let a = x.abs();
    let negative = x < 0.0;
    if a < 0.84375 {
        let e = if a < 2f64.powi(-56) {
            a
        } else if a < 0.25 {
            a + inner_correction(a)
        } else {
            // 1 - erf(a) with the large part of erf(a) split off.
            let z = a * a;
            let y = poly(&PP, z) / poly1(&QQ, z);
            let rest = 0.5 + (a * y + (a - 0.5));
            return if negative { 1.0 + rest } else { 1.0 - rest };
        };
        return if negative { 1.0 + e } else { 1.0 - e };
    }
    if a < 1.25 {
        let p = near_one(a);
        return if negative {
            1.0 + ERX + p
        } else {
            1.0 - ERX - p
        };
    }
    if a < 28.0 {
        if negative && a > 6.0 {
            return 2.0;
        }
        let t = tail_scaled(a) / a;
        return if negative { 2.0 - t } else { t };
    }
    if negative {
        2.0
    } else {
        0.0
    }
}

/// Standard normal quantile, rational approximation with relative error
/// around 1e-9. Used only as a starting point.
fn normal_quantile_guess(p: f64) -> f64 {
    const A: [f64; 6] = [
        2.506628277459239e+00,
        -3.066479806614716e+01,
        1.383577518672690e+02,
        -2.759285104469687e+02,
        2.209460984245205e+02,
        -3.969683028665376e+01,
    ];
    const B: [f64; 5] = [
        -1.328068155288572e+01,
        6.680131188771972e+01,
        -1.556989798598866e+02,
        1.615858368580409e+02,
        -5.447609879822406e+01,
    ];
    const C: [f64; 6] = [
        2.938163982698783e+00,
        4.374664141464968e+00,
        -2.549732539343734e+00,
        -2.400758277161838e+00,
        -3.223964580411365e-01,
        -7.784894002430293e-03,
    ];
    const D: [f64; 4] = [
        3.754408661907416e+00,
        2.445134137142996e+00,
        3.224671290700398e-01,
        7.784695709041462e-03,
    ];
    const LOW: f64 = 0.02425;

    let tail = |q: f64| poly(&C, q) / poly1(&D, q);
    if p < LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - LOW {
        let q = p - 0.5;
        let r = q * q;
        poly(&A, r) * q / poly1(&B, r)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    }
}

/// Inverse of `erfc` on (0, 2). Returns +inf at 0, -inf at 2 and NaN
/// outside [0, 2].
pub fn erfc_inv(y: f64) -> f64 {
    if !(0.0..=2.0).contains(&y) {
        return f64::NAN;
    }
    if y == 0.0 {
        return f64::INFINITY;
    }
    if y == 2.0 {
        return f64::NEG_INFINITY;
    }
    if y == 1.0 {
        return 0.0;
    }
    if y > 1.0 {
        // Reflect so the root-finding always works in the upper tail,
        // where erfc carries full relative precision.
        return -erfc_inv(2.0 - y);
    }
    let mut x = -normal_quantile_guess(0.5 * y) / SQRT_2;
    for _ in 0..8 {
        let f = erfc(x) - y;
        let slope = -FRAC_2_SQRT_PI * (-x * x).exp();
        if slope == 0.0 {
            break;
        }
        let newton = f / slope;
        // Halley: erfc'' / erfc' = -2x.
        let step = newton / (1.0 + x * newton);
        x -= step;
        if step.abs() <= 1e-16 * x.abs().max(1e-300) {
            break;
        }
    }
    x
}

/// Inverse of `erf` on (-1, 1).
pub fn erf_inv(y: f64) -> f64 {
    if !(-1.0..=1.0).contains(&y) {
        return f64::NAN;
    }
    if y.abs() >= 0.5 {
        return erfc_inv(1.0 - y);
    }
    if y == 0.0 {
        return 0.0;
    }
    // Near zero 1 - y drops digits; refine against erf itself.
    let mut x = erfc_inv(1.0 - y);
    for _ in 0..4 {
        let f = erf(x) - y;
        let slope = FRAC_2_SQRT_PI * (-x * x).exp();
        let newton = f / slope;
        let step = newton / (1.0 + x * newton);
        x -= step;
        if step.abs() <= 1e-16 * x.abs() {
            break;
        }
    }
    x
}
