use requestiv::numkit::{maximize, OptimizerSettings, bivariate_normal_cdf};
use nalgebra::DVector;
fn main() {
    let f = |x: &DVector<f64>| {
        let (a, b) = (x[0], x[1]);
        let v = -a * a - 2.0 * b * b + a * b;
        let g = DVector::from_vec(vec![-2.0 * a + b, -4.0 * b + a]);
        (v, g)
    };
    let m = maximize(f, &[5.0, -7.0], &OptimizerSettings::default()).unwrap();
    println!("converged={} iters={} x={:?} grad={:.3e} val={:.6e}", m.converged, m.iterations, m.argmax.as_slice(), m.grad_inf_norm, m.value);

    for r in [-0.99899f64, -0.99901, 0.99899, 0.99901] {
        let v = bivariate_normal_cdf(0.0, 0.0, r).unwrap();
        let truth = 0.25 + r.asin() / std::f64::consts::TAU;
        println!("rho={r}: got {v:.12}  true {truth:.12}  err {:.2e}", (v - truth).abs());
    }
}
