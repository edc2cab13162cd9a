use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum QuadratureError {
    #[error("tolerance {tol:e} not reached on [{a}, {b}]")]
    ToleranceNotReached { a: f64, b: f64, tol: f64 },
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights on XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// (Kronrod estimate, |Kronrod − Gauss|) on [a, b].
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod 7/15 with interval halving.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64, QuadratureError> {
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64, QuadratureError> {
        let (k, err) = gk15(f, a, b);
        if err <= tol {
            return Ok(k);
        }
        if depth == 0 {
            return Err(QuadratureError::ToleranceNotReached { a, b, tol });
        }
        let m = 0.5 * (a + b);
        Ok(rec(f, a, m, 0.5 * tol, depth - 1)? + rec(f, m, b, 0.5 * tol, depth - 1)?)
    }
    rec(&f, a, b, tol, 40)
}

/// J₀(x) = (1/π)∫₀^π cos(x sin θ) dθ.
pub fn bessel_j0_oracle(x: f64) -> Result<f64, QuadratureError> {
    let pi = std::f64::consts::PI;
    Ok(integrate(|t| (x * t.sin()).cos(), 0.0, pi, 1e-13)? / pi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_and_exp() {
        let v = integrate(|x| x.powi(5) - 2.0 * x, 0.0, 2.0, 1e-13).unwrap();
        assert!((v - (64.0 / 6.0 - 4.0)).abs() < 1e-12);
        let e = integrate(f64::exp, 0.0, 1.0, 1e-13).unwrap();
        assert!((e - (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn j0_values() {
        assert!((bessel_j0_oracle(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((bessel_j0_oracle(2.3).unwrap() - 0.0555397844456021).abs() < 1e-12);
    }

    #[test]
    fn first_zero() {
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..60 {
            let m = 0.5 * (lo + hi);
            if bessel_j0_oracle(m).unwrap() > 0.0 {
                lo = m;
            } else {
                hi = m;
            }
        }
        assert!((lo - 2.404825557695773).abs() < 1e-9);
    }
}
