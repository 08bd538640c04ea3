//! Numerical foundations: normal-distribution kernels, a smooth-function
//! maximizer, quadrature, resampling, and deterministic parallel fan-out.

pub mod bivar;
pub mod bootstrap;
pub mod exec;
pub mod normal;
pub mod optim;
pub mod quad;

pub use bivar::{bivariate_cdf_da, bivariate_normal_cdf, bivariate_normal_pdf};
pub use bootstrap::{cluster_bootstrap, derive_seed, BootstrapResult, VarianceMethod, VarianceSpec};
pub use normal::{cdf as std_normal_cdf, pdf as std_normal_pdf, quantile as std_normal_quantile};
pub use optim::{gradient_check, maximize, Maximum, OptimizerSettings};
pub use quad::adaptive_simpson;

/// Survival function of the chi-squared distribution with `df` degrees of
/// freedom, via the regularized incomplete gamma function.
pub fn chi_squared_sf(x: f64, df: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_q(0.5 * df as f64, 0.5 * x)
}

// Regularized upper incomplete gamma Q(a, x) = Γ(a,x)/Γ(a).
// Series for x < a+1, continued fraction otherwise.
fn gamma_q(a: f64, x: f64) -> f64 {
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..500 {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * 1e-16 {
            break;
        }
    }
    sum * (-x + a * x.ln() - libm::lgamma(a)).exp()
}

fn gamma_q_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x + a * x.ln() - libm::lgamma(a)).exp() * h
}
