//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's numerical code paths.

#![allow(dead_code)]

use std::f64::consts::PI;

/// `[c1..c10, x]` straight from the coefficient tables.
pub fn coefficients(name: &str) -> [f64; 11] {
    match name {
        "Slootweg2003" => [
            0.73, 151.0, 0.58, 0.0, 0.002, 13.2, 18.4, 0.0, -0.02, 0.003, 2.14,
        ],
        "Heier2014" => [0.5, 116.0, 0.4, 0.0, 0.0, 5.0, 21.0, 0.0, 0.08, 0.035, 0.0],
        "Thongam2009" => [
            0.5176, 116.0, 0.4, 0.0, 0.0, 5.0, 21.0, 0.006795, 0.08, 0.035, 0.0,
        ],
        "DeKooning2013" => [0.77, 151.0, 0.0, 0.0, 0.0, 13.65, 18.4, 0.0, 0.0, 0.0, 0.0],
        "Ochieng2014" => [0.5, 116.0, 0.0, 0.4, 0.0, 5.0, 21.0, 0.0, 0.08, 0.035, 0.0],
        "Dai2016" => [0.22, 116.0, 0.4, 0.0, 0.0, 5.0, 12.5, 0.0, 0.08, 0.035, 0.0],
        other => panic!("no oracle coefficients for {other}"),
    }
}

pub const MODELS: [&str; 6] = [
    "Slootweg2003",
    "Heier2014",
    "Thongam2009",
    "DeKooning2013",
    "Ochieng2014",
    "Dai2016",
];

/// Cp at β = 0; `None` where the intermediate ratio degenerates.
pub fn naive_cp(c: &[f64; 11], lambda: f64) -> Option<f64> {
    if lambda <= 0.0 {
        return None;
    }
    let inv = 1.0 / lambda - c[9];
    if inv <= 0.0 {
        return None;
    }
    let cp = c[0] * (c[1] * inv - c[5]) * (-c[6] * inv).exp() + c[7] * lambda;
    Some(if cp > 0.0 { cp } else { 0.0 })
}

/// Exhaustive scan of [0.5, 25] at Δλ = 1e-5.
pub fn brute_force_lambda_opt(c: &[f64; 11]) -> (f64, f64) {
    let n = 2_450_000usize;
    let mut best = (0.5, naive_cp(c, 0.5).unwrap_or(0.0));
    for i in 1..=n {
        let l = 0.5 + i as f64 * 1e-5;
        let cp = naive_cp(c, l).unwrap_or(0.0);
        if cp > best.1 {
            best = (l, cp);
        }
    }
    best
}

#[derive(Debug, Clone)]
pub struct NaiveTurbine {
    pub model: &'static str,
    pub d: f64,
    pub rated: f64,
    pub cut_in: f64,
    pub cut_out: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub cp_max: f64,
    pub hub: f64,
    pub rho: f64,
    pub ti: f64,
    pub alpha: f64,
    pub veer: f64,
}

/// Ideal power at one wind speed: speed schedule, Cp, power equation, cap,
/// region gates. Cut-out gate optional.
pub fn naive_ideal(
    t: &NaiveTurbine,
    lambda_opt: f64,
    cp_peak: f64,
    v: f64,
    gate_cut_out: bool,
) -> f64 {
    if v <= 0.0 || v < t.cut_in || (gate_cut_out && v > t.cut_out) {
        return 0.0;
    }
    let r = t.d / 2.0;
    let omega_rads = (lambda_opt * v / r)
        .max(t.omega_min * 2.0 * PI / 60.0)
        .min(t.omega_max * 2.0 * PI / 60.0);
    let lambda = omega_rads * r / v;
    let c = coefficients(t.model);
    let cp = naive_cp(&c, lambda).unwrap_or(0.0) * t.cp_max / cp_peak;
    let p = 0.5 * t.rho * PI * r * r * v * v * v * cp / 1000.0;
    p.min(t.rated)
}

/// REWS-to-hub ratio by direct segment geometry: area above height h of a
/// disc of radius R is R²·acos(h/R) − h·√(R² − h²).
pub fn naive_rews_ratio(d: f64, hub: f64, alpha: f64, veer: f64, n: usize) -> f64 {
    let r = d / 2.0;
    let above = |h: f64| {
        let h = h.clamp(-r, r);
        r * r * (h / r).acos() - h * (r * r - h * h).sqrt()
    };
    // Outer edges pinned to ±R: near the rim √(R² − h²) turns a rounding
    // error in h into a visible area error.
    let edge = |k: usize| {
        if k == n {
            r
        } else {
            -r + d * k as f64 / n as f64
        }
    };
    let mut acc = 0.0;
    for k in 0..n {
        let (lo, hi) = (edge(k), edge(k + 1));
        let area = above(lo) - above(hi);
        let mid = 0.5 * (lo + hi);
        let u = ((hub + mid) / hub).powf(alpha) * (veer * mid * PI / 180.0).cos();
        acc += area / (PI * r * r) * u.powi(3);
    }
    acc.cbrt()
}

fn interp(values: &[f64], step: f64, v: f64) -> f64 {
    let x = v / step;
    let i = x.floor() as usize;
    if i + 1 >= values.len() {
        return *values.last().unwrap();
    }
    let f = x - i as f64;
    values[i] * (1.0 - f) + values[i + 1] * f
}

/// Whole synthesis chain written out point by point: ideal curve, hold the
/// cut-out value beyond cut-out, remap at the equivalent wind speed,
/// smooth with a truncated Gaussian, zero above cut-out.
pub fn naive_pipeline(t: &NaiveTurbine, v_max: f64, step: f64) -> Vec<f64> {
    let n = (v_max / step + 1e-9).floor() as usize + 1;
    let (lambda_opt, cp_peak) = brute_force_lambda_opt(&coefficients(t.model));
    let speed = |i: usize| i as f64 * step;
    let last_producing = (0..n).rev().find(|&i| speed(i) <= t.cut_out).unwrap();
    let hold = |xs: &mut Vec<f64>| {
        let held = xs[last_producing];
        for x in xs.iter_mut().skip(last_producing + 1) {
            *x = held;
        }
    };

    let mut stage: Vec<f64> = (0..n)
        .map(|i| naive_ideal(t, lambda_opt, cp_peak, speed(i), true))
        .collect();

    if t.alpha != 0.0 || t.veer != 0.0 {
        hold(&mut stage);
        let ratio = naive_rews_ratio(t.d, t.hub, t.alpha, t.veer, 100);
        stage = (0..n)
            .map(|i| {
                if speed(i) > t.cut_out {
                    0.0
                } else {
                    interp(&stage, step, ratio * speed(i))
                }
            })
            .collect();
    }

    if t.ti > 0.0 {
        hold(&mut stage);
        stage = (0..n)
            .map(|i| {
                let u = speed(i);
                if u > t.cut_out {
                    return 0.0;
                }
                let sigma = u * t.ti;
                if sigma < step / 2.0 {
                    return stage[i];
                }
                let (mut num, mut den) = (0.0, 0.0);
                let mut k = 0usize;
                loop {
                    let vk = k as f64 * step;
                    if vk > u + 5.0 * sigma {
                        break;
                    }
                    if vk >= u - 5.0 * sigma {
                        let w = (-(vk - u) * (vk - u) / (2.0 * sigma * sigma)).exp();
                        num += w * stage[k.min(n - 1)];
                        den += w;
                    }
                    k += 1;
                }
                num / den
            })
            .collect();
    }
    stage
}

/// Region-gate-free ideal Cp as a function of v, for clamping checks.
pub fn naive_cp_along_curve(t: &NaiveTurbine, lambda_opt: f64, v: f64) -> f64 {
    let r = t.d / 2.0;
    let omega = (lambda_opt * v / r)
        .max(t.omega_min * 2.0 * PI / 60.0)
        .min(t.omega_max * 2.0 * PI / 60.0);
    naive_cp(&coefficients(t.model), omega * r / v).unwrap_or(0.0)
}
