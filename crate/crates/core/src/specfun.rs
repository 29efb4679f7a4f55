//! Real-argument Bessel functions `J_n`, `Y_n` and Hankel functions
//! `H⁽²⁾_n = J_n − iY_n` for orders 0, 1, 2.
//!
//! Ascending series below `x = 12`, the Hankel asymptotic expansion (summed
//! to its smallest term) from there on.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::integrate_oscillatory;

/// Series/asymptotic switchover point.
pub const SWITCHOVER: f64 = 12.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402;
const MAX_ORDER: u32 = 2;

/// Complex value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: Complex64,
    pub est_error: f64,
}

fn check(n: u32, x: f64) -> Result<()> {
    if n > MAX_ORDER {
        return Err(Error::OutOfDomain {
            what: "Bessel order",
            value: n as f64,
            range: "{0, 1, 2}".into(),
        });
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::OutOfDomain {
            what: "Bessel argument",
            value: x,
            range: "(0, ∞)".into(),
        });
    }
    Ok(())
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn series_j(n: u32, x: f64) -> f64 {
    let quarter_x2 = 0.25 * x * x;
    let mut term = (0.5 * x).powi(n as i32) / factorial(n);
    let mut sum = term;
    for m in 1..200u32 {
        term *= -quarter_x2 / (f64::from(m) * f64::from(m + n));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `Y_n` from the ascending series with the logarithmic term.
fn series_y(n: u32, x: f64, j: f64) -> f64 {
    let half = 0.5 * x;
    let quarter_x2 = half * half;

    // −(1/π) (x/2)^{−n} Σ_{k<n} (n−k−1)!/k! (x²/4)^k
    let mut singular = 0.0;
    for k in 0..n {
        singular += factorial(n - k - 1) / factorial(k) * quarter_x2.powi(k as i32);
    }
    singular *= -half.powi(-(n as i32)) / PI;

    // −(1/π) (x/2)^n Σ_k [ψ(k+1) + ψ(n+k+1)] (−x²/4)^k / (k!(n+k)!)
    let mut psi_k = -EULER_GAMMA;
    let mut psi_nk = -EULER_GAMMA + (1..=n).map(|i| 1.0 / f64::from(i)).sum::<f64>();
    let mut term = 1.0 / factorial(n);
    let mut regular = (psi_k + psi_nk) * term;
    for k in 1..200u32 {
        psi_k += 1.0 / f64::from(k);
        psi_nk += 1.0 / f64::from(n + k);
        term *= -quarter_x2 / (f64::from(k) * f64::from(n + k));
        let contribution = (psi_k + psi_nk) * term;
        regular += contribution;
        if contribution.abs() <= 1e-17 * regular.abs() {
            break;
        }
    }
    regular *= -half.powi(n as i32) / PI;

    singular + FRAC_2_PI * half.ln() * j + regular
}

/// `(J_n, Y_n)` from the Hankel asymptotic expansion.
fn asymptotic(n: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * f64::from(n * n);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    for k in 1..100u32 {
        let odd = f64::from(2 * k - 1);
        let next = term * (mu - odd * odd) / (f64::from(k) * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let phase = x - (f64::from(n) * FRAC_PI_2 + FRAC_PI_4);
    let (sin, cos) = phase.sin_cos();
    let amplitude = (FRAC_2_PI / x).sqrt();
    (amplitude * (p * cos - q * sin), amplitude * (p * sin + q * cos))
}

/// Bessel function of the first kind, `n ∈ {0, 1, 2}`, `x > 0`.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    check(n, x)?;
    Ok(if x < SWITCHOVER { series_j(n, x) } else { asymptotic(n, x).0 })
}

/// Bessel function of the second kind, `n ∈ {0, 1, 2}`, `x > 0`.
pub fn bessel_y(n: u32, x: f64) -> Result<f64> {
    check(n, x)?;
    Ok(if x < SWITCHOVER {
        series_y(n, x, series_j(n, x))
    } else {
        asymptotic(n, x).1
    })
}

/// Hankel function of the second kind `H⁽²⁾_n(x) = J_n(x) − i Y_n(x)`.
pub fn hankel2(n: u32, x: f64) -> Result<Complex64> {
    check(n, x)?;
    let (j, y) = if x < SWITCHOVER {
        let j = series_j(n, x);
        (j, series_y(n, x, j))
    } else {
        asymptotic(n, x)
    };
    Ok(Complex64::new(j, -y))
}

/// Both evaluation routes at one point, for checking the switchover overlap.
pub fn series_and_asymptotic(n: u32, x: f64) -> Result<((f64, f64), (f64, f64))> {
    check(n, x)?;
    let j = series_j(n, x);
    Ok(((j, series_y(n, x, j)), asymptotic(n, x)))
}

/// Derivative `C_n'(x)` from `C_0' = −C_1` and `C_n' = C_{n−1} − (n/x) C_n`.
fn derivative(f: fn(u32, f64) -> Result<f64>, n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        Ok(-f(1, x)?)
    } else {
        Ok(f(n - 1, x)? - f64::from(n) / x * f(n, x)?)
    }
}

/// `J_n Y_n' − J_n' Y_n`, which equals `2/(πx)`.
pub fn wronskian(n: u32, x: f64) -> Result<f64> {
    let j = bessel_j(n, x)?;
    let y = bessel_y(n, x)?;
    Ok(j * derivative(bessel_y, n, x)? - derivative(bessel_j, n, x)? * y)
}

/// Literal evaluation of `(2/π) ∫₀^{π/2} exp(−i r sin θ) dθ`.
///
/// The real part is `J₀(r)`. The imaginary part is `−H₀(r)` with `H₀` the
/// Struve function, not `−Y₀(r)`; the value is returned as computed.
pub fn hankel_integral_rep(r: f64, tol: f64) -> Result<SpecFunResult> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::OutOfDomain {
            what: "integral representation argument",
            value: r,
            range: "(0, ∞)".into(),
        });
    }
    let q = integrate_oscillatory(
        |theta| Complex64::from_polar(1.0, -r * theta.sin()),
        r,
        0.0,
        FRAC_PI_2,
        tol / FRAC_2_PI,
    )?;
    Ok(SpecFunResult {
        value: q.value * FRAC_2_PI,
        est_error: q.est_error * FRAC_2_PI,
    })
}

/// Comparison of the integral representation against `H⁽²⁾₀(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralRepComparison {
    pub r: f64,
    pub integral: SpecFunResult,
    pub hankel: Complex64,
    /// `|Re(integral) − J₀(r)|`
    pub real_mismatch: f64,
    /// `|Im(integral) + Y₀(r)|`
    pub imag_mismatch: f64,
}

pub fn compare_integral_rep(r: f64, tol: f64) -> Result<IntegralRepComparison> {
    let integral = hankel_integral_rep(r, tol)?;
    let hankel = hankel2(0, r)?;
    Ok(IntegralRepComparison {
        r,
        integral,
        hankel,
        real_mismatch: (integral.value.re - hankel.re).abs(),
        imag_mismatch: (integral.value.im - hankel.im).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::linspace;
    use approx::assert_relative_eq;

    // 40-digit reference values: (x, [J0, J1, J2], [Y0, Y1, Y2])
    const REFERENCE: [(f64, [f64; 3], [f64; 3]); 13] = [
        (0.1, [9.97501562066040015e-01, 4.99375260362419984e-02, 1.24895865879991901e-03], [-1.53423865135036674e+00, -6.45895109470202655e+00, -1.27644783242690153e+02]),
        (0.5, [9.38469807240812859e-01, 2.42268457674873899e-01, 3.06040234586826415e-02], [-4.44518733506706565e-01, -1.47147239267024310e+00, -5.44137083717426595e+00]),
        (1.0, [7.65197686557966605e-01, 4.40050585744933498e-01, 1.14903484931900474e-01], [8.82569642156769557e-02, -7.81212821300288685e-01, -1.65068260681625434e+00]),
        (2.5, [-4.83837764681979976e-02, 4.97094102464274046e-01, 4.46059058439617240e-01], [4.98070359615231883e-01, 1.45918137966785794e-01, -3.81335849241803249e-01]),
        (5.0, [-1.77596771314338292e-01, -3.27579137591465230e-01, 4.65651162777522137e-02], [-3.08517625249033756e-01, 1.47863143391226831e-01, 3.67662882605524544e-01]),
        (8.0, [1.71650807137553901e-01, 2.34636346853914629e-01, -1.12991720424075251e-01], [2.23521489387566219e-01, -1.58060461731247492e-01, -2.63036604820378106e-01]),
        (11.9, [2.50494416995896453e-02, -2.28983249661924043e-01, -6.35340214747029258e-02], [-2.29833213943375053e-01, -3.47114983340306091e-02, 2.23999348677151433e-01]),
        (12.0, [4.76893107968335353e-02, -2.23447104490627602e-01, -8.49304948786048092e-02], [-2.25237312634361447e-01, -5.70992182608965199e-02, 2.15720776257545349e-01]),
        (12.1, [6.96667736068073140e-02, -2.15748973376924807e-01, -1.05327760941836213e-01], [-2.18438380550925487e-01, -7.87369314513957502e-02, 2.05424011715984040e-01]),
        (15.0, [-1.42244728267807725e-02, 2.05104038613522749e-01, 4.15716779752504720e-02], [2.05464296038918276e-01, 2.10736280368735117e-02, -2.02654478967335128e-01]),
        (20.0, [1.67024664340583162e-01, 6.68331241758500505e-02, -1.60341351922998143e-01], [6.26405968093838306e-02, -1.65511614362521292e-01, -7.91917582456359570e-02]),
        (30.0, [-8.63679835810402113e-02, -1.18751062616622938e-01, 7.84512460732653544e-02], [-1.17295731686664031e-01, 8.44255706617472318e-02, 1.22924103064113846e-01]),
        (50.0, [5.58123276692518155e-02, -9.75118281251751429e-02, -5.97128007942588218e-02], [-9.80649954700770765e-02, -5.67956685620147686e-02, 9.57931687275964949e-02]),
    ];

    #[test]
    fn against_reference_values() {
        for (x, js, ys) in REFERENCE {
            for n in 0..3u32 {
                let j = bessel_j(n, x).unwrap();
                let y = bessel_y(n, x).unwrap();
                assert!((j - js[n as usize]).abs() <= 1e-12, "J{n}({x}) = {j}, err {:e}", j - js[n as usize]);
                // Y₂ at x = 0.1 is ~ −128; hold it to a relative bound
                let y_ref = ys[n as usize];
                assert!((y - y_ref).abs() <= 1e-12 * y_ref.abs().max(1.0), "Y{n}({x}) err {:e}", y - y_ref);
            }
        }
    }

    #[test]
    fn small_argument_behaviour() {
        assert_relative_eq!(bessel_j(0, 1e-10).unwrap(), 1.0);
        assert_relative_eq!(bessel_j(1, 1e-6).unwrap(), 0.5e-6, max_relative = 1e-12);
        let x = 1e-8_f64;
        let y0 = bessel_y(0, x).unwrap();
        assert_relative_eq!(y0, FRAC_2_PI * ((x / 2.0).ln() + EULER_GAMMA), max_relative = 1e-12);
        assert!(bessel_y(0, 1e-300).unwrap() < bessel_y(0, 1e-100).unwrap());
    }

    #[test]
    fn j0_of_one_from_power_series() {
        // Σ (−1)^m (1/2)^{2m} / (m!)², 25 terms
        let mut sum = 0.0;
        let mut term = 1.0;
        for m in 0..25 {
            if m > 0 {
                term *= -0.25 / (m as f64 * m as f64);
            }
            sum += term;
        }
        assert!((bessel_j(0, 1.0).unwrap() - sum).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(bessel_j(0, 0.0).is_err());
        assert!(bessel_j(1, -1.0).is_err());
        assert!(bessel_y(3, 1.0).is_err());
        assert!(hankel2(0, f64::NAN).is_err());
        assert!(hankel_integral_rep(0.0, 1e-10).is_err());
    }

    #[test]
    fn wronskian_identity() {
        for x in linspace(0.1, 20.0, 400) {
            for n in 0..3 {
                let w = wronskian(n, x).unwrap();
                assert!((w - 2.0 / (PI * x)).abs() <= 1e-10, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn y1_from_wronskian_rearrangement() {
        for x in [0.3, 1.7, 4.0, 6.5, 9.1, 13.3, 17.0] {
            let (j0, j1, y0) = (bessel_j(0, x).unwrap(), bessel_j(1, x).unwrap(), bessel_y(0, x).unwrap());
            let y1 = (j1 * y0 - 2.0 / (PI * x)) / j0;
            assert!((bessel_y(1, x).unwrap() - y1).abs() <= 1e-11 / j0.abs().min(1.0));
        }
    }

    #[test]
    fn three_term_recurrence() {
        for x in linspace(0.1, 20.0, 400) {
            for f in [bessel_j, bessel_y] {
                let lhs = f(0, x).unwrap() + f(2, x).unwrap();
                let rhs = 2.0 / x * f(1, x).unwrap();
                assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0), "x={x}");
            }
            let h = [hankel2(0, x).unwrap(), hankel2(1, x).unwrap(), hankel2(2, x).unwrap()];
            assert!((h[2] - (2.0 / x * h[1] - h[0])).norm() <= 1e-10 * h[2].norm().max(1.0));
        }
    }

    #[test]
    fn switchover_overlap_agrees() {
        for x in linspace(10.0, 14.0, 81) {
            for n in 0..3 {
                let ((js, ys), (ja, ya)) = series_and_asymptotic(n, x).unwrap();
                assert!((js - ja).abs() < 1e-10 && (ys - ya).abs() < 1e-10, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn hankel_large_argument_modulus() {
        let x = 30.0;
        let h = hankel2(0, x).unwrap();
        assert_relative_eq!(h.norm(), (2.0 / (PI * x)).sqrt(), max_relative = 1e-2);
        assert_eq!(h.im, -bessel_y(0, x).unwrap());
    }

    #[test]
    fn integral_rep_real_part_is_j0() {
        let tol = 1e-12;
        for r in linspace(0.1, 20.0, 60) {
            let rep = hankel_integral_rep(r, tol).unwrap();
            assert!((rep.value.re - bessel_j(0, r).unwrap()).abs() <= tol + 1e-12, "r={r}");
        }
        let tiny = hankel_integral_rep(1e-9, 1e-12).unwrap();
        assert!((tiny.value - 1.0).norm() < 1e-8);
    }

    #[test]
    fn integral_rep_imaginary_part_is_struve_not_y0() {
        // 40-digit Struve H₀ values
        for (r, struve) in [(0.5, 3.09555914583754699e-01), (3.0, 5.74306148814398343e-01), (10.0, 1.18743683687461271e-01)] {
            let cmp = compare_integral_rep(r, 1e-12).unwrap();
            assert!((cmp.integral.value.im + struve).abs() < 1e-11, "r={r}");
            assert!(cmp.imag_mismatch > 1e-2);
            assert!(cmp.real_mismatch < 1e-11);
        }
    }
}
