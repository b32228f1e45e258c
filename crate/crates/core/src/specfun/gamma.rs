use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// `Γ(x)` stored as `sign · exp(log_abs)`.
///
/// `sign == 0` marks a pole (`x ∈ {0, -1, -2, …}`), where `1/Γ(x) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaPair {
    pub log_abs: f64,
    pub sign: i8,
}

impl GammaPair {
    pub fn is_pole(&self) -> bool {
        self.sign == 0
    }

    pub fn value(&self) -> f64 {
        match self.sign {
            0 => f64::INFINITY,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }

    pub fn reciprocal(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * (-self.log_abs).exp(),
        }
    }
}

// Lanczos approximation, g = 671/128, 14 terms.
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

fn ln_gamma_lanczos(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut y = x;
    let tmp = x + LANCZOS_G;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_092;
    for c in LANCZOS_COEF {
        y += 1.0;
        ser += c / y;
    }
    tmp + (SQRT_2PI * ser / x).ln()
}

/// `sin(πx)` with exact argument reduction, so zeros at integers are exact.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = x - 2.0 * (0.5 * x).round();
    let (sign, a) = if r < 0.0 { (-1.0, -r) } else { (1.0, r) };
    let a = if a > 0.5 { 1.0 - a } else { a };
    sign * (PI * a).sin()
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Sign/log representation of `Γ(x)`, valid on the whole real line.
///
/// Negative arguments go through the reflection formula
/// `Γ(x) Γ(1-x) = π / sin(πx)`.
pub fn gamma_pair(x: f64) -> GammaPair {
    if x.is_nan() {
        return GammaPair {
            log_abs: f64::NAN,
            sign: 1,
        };
    }
    if is_nonpositive_integer(x) {
        return GammaPair {
            log_abs: f64::INFINITY,
            sign: 0,
        };
    }
    if x >= 0.5 {
        return GammaPair {
            log_abs: ln_gamma_lanczos(x),
            sign: 1,
        };
    }
    let s = sin_pi(x);
    GammaPair {
        log_abs: PI.ln() - s.abs().ln() - ln_gamma_lanczos(1.0 - x),
        sign: if s > 0.0 { 1 } else { -1 },
    }
}

/// `ln|Γ(x)|`; `+∞` at the poles.
pub fn ln_gamma(x: f64) -> f64 {
    gamma_pair(x).log_abs
}

/// `Γ(x)`; `+∞` at the poles.
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    // Exact factorials keep small integer arguments exact.
    if x >= 1.0 && x <= 23.0 && x == x.floor() {
        return (1..x as u64).map(|k| k as f64).product();
    }
    gamma_pair(x).value()
}

/// `1/Γ(x)`, the entire extension: exactly zero at `0, -1, -2, …`.
pub fn reciprocal_gamma(x: f64) -> f64 {
    if x >= 1.0 && x <= 23.0 && x == x.floor() {
        return 1.0 / gamma(x);
    }
    gamma_pair(x).reciprocal()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    // Reference values from mpmath at 30 digits.
    const REFERENCE: [(f64, f64); 9] = [
        (0.1, 9.513_507_698_668_731_836_292_487),
        (0.5, 1.772_453_850_905_516_027_298_167),
        (0.75, 1.225_416_702_465_177_645_129_098),
        (1.5, 0.886_226_925_452_758_013_649_083_7),
        (2.5, 1.329_340_388_179_137_020_473_626),
        (7.3, 1_271.423_633_663_909_273_057_993_6),
        (-0.5, -3.544_907_701_811_032_054_596_335),
        (-1.5, 2.363_271_801_207_354_703_064_223),
        (-2.25, -1.742_814_865_728_252_650_850_273),
    ];

    #[test]
    fn reference_values() {
        for (x, g) in REFERENCE {
            assert!(rel(gamma(x), g) < 1e-13, "Γ({x}) = {} vs {g}", gamma(x));
        }
    }

    #[test]
    fn poles_are_exact() {
        for x in [0.0, -1.0, -2.0, -3.0, -17.0] {
            assert_eq!(reciprocal_gamma(x), 0.0);
            assert!(gamma_pair(x).is_pole());
        }
    }

    #[test]
    fn reciprocal_trivial_values() {
        assert_eq!(reciprocal_gamma(1.0), 1.0);
        assert!(rel(reciprocal_gamma(0.5), 1.0 / PI.sqrt()) < 1e-14);
        assert!(rel(reciprocal_gamma(0.5), 0.564_189_583_5) < 1e-10);
    }

    #[test]
    fn pair_reconstructs_gamma_on_positive_axis() {
        for i in 1..300 {
            let x = i as f64 * 0.1;
            let p = gamma_pair(x);
            let direct = gamma(x);
            assert!(rel(p.value(), direct) < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn recurrence_holds_across_zero() {
        for i in 0..200 {
            let x = -9.95 + i as f64 * 0.1;
            if is_nonpositive_integer(x) || is_nonpositive_integer(x + 1.0) {
                continue;
            }
            assert!(rel(gamma(x + 1.0), x * gamma(x)) < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn sin_pi_zero_at_integers() {
        for k in -20..20 {
            assert_eq!(sin_pi(k as f64), 0.0);
        }
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(-0.5) + 1.0).abs() < 1e-16);
    }
}
