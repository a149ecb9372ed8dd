// debug: compare AFE weights between dampings
use num_complex::Complex64;
use subconv_core::lfunc::GammaFactorSpec;
use std::f64::consts::PI;

fn weight(gf: &GammaFactorSpec, t: f64, c_damp: f64, sigma0: f64, n: f64, v_range: f64, nodes: usize) -> Complex64 {
    let ln_a = (4.0 * PI * PI).ln();
    let w = Complex64::new(0.5, t);
    let lg_w = gf.log_gamma_factor(w) - w * ln_a;
    let dv = 2.0 * v_range / (nodes - 1) as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let v = -v_range + j as f64 * dv;
        let u = Complex64::new(sigma0, v);
        let g = (c_damp * u * u).exp();
        let lg = gf.log_gamma_factor(w + u) - (w + u) * ln_a;
        let trap = if j == 0 || j == nodes - 1 { 0.5 } else { 1.0 };
        acc += trap * dv / (2.0 * PI) * g / u * (lg - lg_w).exp() * (-u * n.ln()).exp();
    }
    acc
}

fn main() {
    let gf = GammaFactorSpec::both_holomorphic(12, 12);
    let t = 50.0;
    let sqrt_c = gf.afe_length(t);
    println!("sqrt_c = {sqrt_c}");
    for y in [0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 24.0] {
        let n = y * sqrt_c;
        let w1 = weight(&gf, t, 1.0/12.0, 2.0, n, 40.0, 2101);
        let w2 = weight(&gf, t, 1.0/8.0, 2.0, n, 40.0, 2101);
        let w1b = weight(&gf, t, 1.0/12.0, 5.0, n, 40.0, 2101);
        let w1c = weight(&gf, t, 1.0/12.0, 2.0, n, 40.0, 8405);
        println!("y={y:5.1} |W12|={:+.3e} |W8|={:+.3e} diff={:.2e}  sigma5-diff={:.2e} nodes4x-diff={:.2e}",
            w1.norm(), w2.norm(), (w1-w2).norm(), (w1-w1b).norm(), (w1-w1c).norm());
    }
}
