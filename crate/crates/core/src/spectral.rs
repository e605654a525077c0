//! Numeric constants attached to the characteristic polynomial.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genfunc::Moments;
use crate::sequences::KBonacciContext;

/// Largest order handled by the root finder.
pub const MAX_ORDER: usize = 12;

const ROOT_RESIDUAL: f64 = 1e-10;
const BINET_DRIFT: f64 = 1e-9;
const LEK_DRIFT: f64 = 1e-6;

/// Window of layer indices over which the Lekkerkerker slope is measured.
pub const LEK_WINDOW: (usize, usize) = (40, 60);

/// Horner evaluation of a monic-or-not polynomial (descending coefficients)
/// and its derivative.
fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of a polynomial with real coefficients (descending, leading
/// coefficient nonzero), by Aberth iteration followed by Newton polishing.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let lead = coeffs[0];
    let coeffs: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    // Cauchy bound on root moduli.
    let bound = 1.0 + coeffs[1..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..deg)
        .map(|j| Complex64::from_polar(bound * 0.7, 0.4 + 2.0 * std::f64::consts::PI * j as f64 / deg as f64))
        .collect();
    let mut converged = false;
    for _ in 0..2000 {
        let mut largest = 0.0f64;
        for i in 0..deg {
            let (p, dp) = horner(&coeffs, z[i]);
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= w;
            largest = largest.max(w.norm() / z[i].norm().max(1.0));
        }
        if largest < 1e-15 {
            converged = true;
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&coeffs, *r);
            if dp.norm() > 0.0 {
                *r -= p / dp;
            }
        }
    }
    let worst = z.iter().map(|&r| horner(&coeffs, r).0.norm()).fold(0.0, f64::max);
    if !converged && worst >= ROOT_RESIDUAL {
        return Err(Error::ConvergenceFailure(format!("Aberth iteration stalled, residual {worst:e}")));
    }
    if worst >= ROOT_RESIDUAL {
        return Err(Error::ConvergenceFailure(format!("root residual {worst:e} too large")));
    }
    Ok(z)
}

fn check_order(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::UnsupportedOrder { k, min: 2 });
    }
    if k > MAX_ORDER {
        return Err(Error::ConvergenceFailure(format!("order k = {k} above supported maximum {MAX_ORDER}")));
    }
    Ok(())
}

/// `x^k - x^{k-1} - ... - x - 1`, descending coefficients.
pub fn char_poly(k: usize) -> Vec<f64> {
    let mut c = vec![-1.0; k + 1];
    c[0] = 1.0;
    c
}

/// Roots of the characteristic polynomial, sorted by descending modulus.
/// The first is the real dominant root.
pub fn char_poly_roots(k: usize) -> Result<Vec<Complex64>> {
    check_order(k)?;
    let mut roots = polynomial_roots(&char_poly(k))?;
    roots.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    // The dominant root is real; snap it and polish on the real line.
    let mut l = roots[0].re;
    let p = char_poly(k);
    for _ in 0..5 {
        let (v, d) = horner(&p, Complex64::new(l, 0.0));
        l -= v.re / d.re;
    }
    roots[0] = Complex64::new(l, 0.0);
    Ok(roots)
}

/// `x_{n+1} / lambda_1^n` at `n = 60`, checked against `n = 50`.
pub fn binet_a1(ctx: &KBonacciContext, lambda1: f64) -> Result<f64> {
    let at = |n: i64| -> Result<f64> {
        let x = ctx.x(n + 1)?.to_f64().ok_or(Error::VectorTooLarge)?;
        Ok(x / lambda1.powi(n as i32))
    };
    let a60 = at(60)?;
    let a50 = at(50)?;
    let drift = ((a60 - a50) / a60).abs();
    if drift >= BINET_DRIFT {
        return Err(Error::ConvergenceFailure(format!("Binet coefficient drift {drift:e}")));
    }
    Ok(a60)
}

/// Slope `(mu_hi - mu_lo) / (hi - lo)` of exact layer means.
///
/// Fails if any successive difference in the window is more than `1e-6` from
/// the slope. `means[n]` is the mean at layer `n`.
pub fn lekkerkerker_slope(means: &[BigRational], n_lo: usize, n_hi: usize) -> Result<f64> {
    if n_hi <= n_lo || n_hi >= means.len() {
        return Err(Error::ConvergenceFailure(format!("bad window [{n_lo}, {n_hi}]")));
    }
    let f = |n: usize| means[n].to_f64().unwrap_or(f64::NAN);
    let slope = ((&means[n_hi] - &means[n_lo]) / BigRational::from_integer((n_hi - n_lo).into()))
        .to_f64()
        .unwrap_or(f64::NAN);
    let drift = (n_lo + 1..=n_hi).map(|n| (f(n) - f(n - 1) - slope).abs()).fold(0.0, f64::max);
    if drift.is_nan() || drift >= LEK_DRIFT {
        return Err(Error::ConvergenceFailure(format!("Lekkerkerker slope drift {drift:e}")));
    }
    Ok(slope)
}

/// Constants of the closed form `Z_{-n} = A r^n e^{i n theta} + B r^n e^{-i n theta} + C eps^n`
/// for `Z_{-n} = v_1 + i v_2` with `X_{-n} = (v_1, v_2)` and `k = 3`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BackwardConstants {
    pub r: f64,
    pub theta: f64,
    pub epsilon: f64,
    #[serde(serialize_with = "ser_complex")]
    pub a: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub b: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub c: Complex64,
    /// `arcsin(|B| / |A|)`, the limiting angular deviation of `Z_{-n}` from `A e^{i n theta}`.
    pub angle_bound: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl BackwardConstants {
    pub fn z(&self, n: usize) -> Complex64 {
        let rn = self.r.powi(n as i32);
        let t = self.theta * n as f64;
        self.a * Complex64::from_polar(rn, t) + self.b * Complex64::from_polar(rn, -t) + self.c * self.epsilon.powi(n as i32)
    }
}

/// Solves `M x = rhs` by Gaussian elimination with partial pivoting.
fn solve3(mut m: [[Complex64; 3]; 3], mut rhs: [Complex64; 3]) -> Result<[Complex64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm())).unwrap();
        if m[piv][col].norm() < 1e-14 {
            return Err(Error::ConvergenceFailure("singular initial-value system".into()));
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for j in col..3 {
                let t = m[col][j];
                m[row][j] -= f * t;
            }
            let t = rhs[col];
            rhs[row] -= f * t;
        }
    }
    let mut x = [Complex64::zero(); 3];
    for row in (0..3).rev() {
        let s: Complex64 = (row + 1..3).map(|j| m[row][j] * x[j]).sum();
        x[row] = (rhs[row] - s) / m[row][row];
    }
    Ok(x)
}

/// Solves `mu^3 + mu^2 + mu - 1 = 0` and fits `A, B, C` to `Z_0 = 0`,
/// `Z_{-1} = 1`, `Z_{-2} = i`, then checks the closed form against the
/// vectors for `1 <= n <= 20` after rounding.
pub fn backward_constants_k3(ctx: &KBonacciContext) -> Result<BackwardConstants> {
    if ctx.k() != 3 {
        return Err(Error::UnsupportedOrder { k: ctx.k(), min: 3 });
    }
    let roots = polynomial_roots(&[1.0, 1.0, 1.0, -1.0])?;
    let real = roots
        .iter()
        .copied()
        .min_by(|a, b| a.im.abs().total_cmp(&b.im.abs()))
        .expect("cubic has three roots");
    let upper = roots
        .iter()
        .copied()
        .max_by(|a, b| a.im.total_cmp(&b.im))
        .expect("cubic has three roots");
    let epsilon = real.re;
    let (r, theta) = upper.to_polar();
    let lower = upper.conj();
    let e = Complex64::new(epsilon, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let m = [[one, one, one], [upper, lower, e], [upper * upper, lower * lower, e * e]];
    let [a, b, c] = solve3(m, [Complex64::zero(), one, Complex64::i()])?;
    let consts = BackwardConstants { r, theta, epsilon, a, b, c, angle_bound: (b.norm() / a.norm()).asin() };
    for n in 1..=20usize {
        let z = consts.z(n);
        let v = ctx.vector(n as i64)?;
        let want: Vec<f64> = v.entries().iter().map(|e| e.to_f64().unwrap_or(f64::NAN)).collect();
        if z.re.round() != want[0] || z.im.round() != want[1] {
            return Err(Error::ReconstructionMismatch { n });
        }
    }
    Ok(consts)
}

/// Everything this module computes for one order.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralData {
    pub k: usize,
    pub lambda1: f64,
    #[serde(serialize_with = "ser_roots")]
    pub all_roots: Vec<Complex64>,
    pub a1: f64,
    pub c_lek: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backward: Option<BackwardConstants>,
}

fn ser_roots<S: serde::Serializer>(z: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    z.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
}

impl SpectralData {
    pub fn compute(ctx: &KBonacciContext) -> Result<Self> {
        let k = ctx.k();
        let all_roots = char_poly_roots(k)?;
        let lambda1 = all_roots[0].re;
        let a1 = binet_a1(ctx, lambda1)?;
        let moments = Moments::compute(k, LEK_WINDOW.1)?;
        let c_lek = lekkerkerker_slope(&moments.means(), LEK_WINDOW.0, LEK_WINDOW.1)?;
        let backward = if k == 3 { Some(backward_constants_k3(ctx)?) } else { None };
        Ok(SpectralData { k, lambda1, all_roots, a1, c_lek, backward })
    }

    /// Modulus of the subdominant root.
    pub fn lambda2_modulus(&self) -> f64 {
        self.all_roots.get(1).map_or(0.0, |z| z.norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(lo) < 0.0) == (f(mid) < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn round4(x: f64) -> f64 {
        (x * 1e4).round() / 1e4
    }

    #[test]
    fn dominant_roots() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((char_poly_roots(2).unwrap()[0].re - phi).abs() < 1e-12);
        let oracle = bisect(|x| x * x * x - x * x - x - 1.0, 1.0, 2.0);
        let l = char_poly_roots(3).unwrap()[0].re;
        assert!((l - oracle).abs() < 1e-12);
        assert!((l - 1.839_286_755_2).abs() < 1e-9);
    }

    #[test]
    fn all_orders_have_accurate_roots() {
        for k in 2..=MAX_ORDER {
            let roots = char_poly_roots(k).unwrap();
            assert_eq!(roots.len(), k);
            let p = char_poly(k);
            for z in &roots {
                assert!(horner(&p, *z).0.norm() < 1e-10, "k={k}");
            }
            let l = roots[0];
            assert!(l.im == 0.0 && l.re > 1.0 && l.re < 2.0);
            assert!(roots[1..].iter().all(|z| z.norm() < l.re));
            assert!(roots.windows(2).all(|w| w[0].norm() >= w[1].norm()));
        }
        assert!(char_poly_roots(1).is_err());
        assert!(char_poly_roots(13).is_err());
    }

    #[test]
    fn binet_coefficient() {
        let c3 = KBonacciContext::new(3).unwrap();
        let l = char_poly_roots(3).unwrap()[0].re;
        let a1 = binet_a1(&c3, l).unwrap();
        assert!(a1 > 0.0);
        assert!(((a1 * l.powi(18) - 35890.0) / 35890.0).abs() < 1e-6);

        let c2 = KBonacciContext::new(2).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        // x_{n+1} = F_{n+1} = phi^{n+1} / sqrt 5 + o(1)
        assert!((binet_a1(&c2, phi).unwrap() - phi / 5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn backward_constants() {
        let c = KBonacciContext::new(3).unwrap();
        let b = backward_constants_k3(&c).unwrap();
        assert_eq!(round4(b.r), 1.3562);
        assert_eq!(round4(b.theta), 2.1762);
        assert_eq!(round4(b.epsilon), 0.5437);
        assert_eq!((round4(b.a.re), round4(b.a.im)), (-0.4578, -0.3103));
        assert_eq!((round4(b.b.re), round4(b.b.im)), (-0.0612, -0.0259));
        assert_eq!((round4(b.c.re), round4(b.c.im)), (0.5190, 0.3362));
        assert_eq!(round4(b.angle_bound), 0.1204);
        assert!((b.epsilon * b.r * b.r - 1.0).abs() < 1e-9);
        let l2 = char_poly_roots(3).unwrap()[1].norm();
        assert!((l2 * b.r - 1.0).abs() < 1e-9);
        assert!(backward_constants_k3(&KBonacciContext::new(4).unwrap()).is_err());
    }

    #[test]
    fn lekkerkerker_fibonacci() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let m = Moments::compute(2, 60).unwrap();
        let s = lekkerkerker_slope(&m.means(), 40, 60).unwrap();
        assert!((s - 1.0 / (phi * phi + 1.0)).abs() < 1e-9);
        for k in 3..=6 {
            let m = Moments::compute(k, 60).unwrap();
            let a = lekkerkerker_slope(&m.means(), 30, 50).unwrap();
            let b = lekkerkerker_slope(&m.means(), 40, 60).unwrap();
            assert!(a > 0.0 && a < 1.0 && (a - b).abs() < 1e-6, "k={k}");
        }
    }

    #[test]
    fn spectral_data() {
        let c = KBonacciContext::new(3).unwrap();
        let s = SpectralData::compute(&c).unwrap();
        assert!(s.backward.is_some());
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(json["k"], 3);
        assert!(SpectralData::compute(&KBonacciContext::new(5).unwrap()).unwrap().backward.is_none());
    }
}
