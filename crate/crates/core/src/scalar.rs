use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real field underlying the complex scalars: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Default tolerance for relation residuals.
    fn relation_tol() -> Self;
    /// Default tolerance for table round trips.
    fn table_tol() -> Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }
}

impl Real for f64 {
    fn relation_tol() -> Self {
        1e-9
    }
    fn table_tol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn relation_tol() -> Self {
        1e-4
    }
    fn table_tol() -> Self {
        1e-5
    }
}

pub type Scalar<T> = Complex<T>;

pub fn real<T: Real>(x: T) -> Scalar<T> {
    Complex::new(x, T::zero())
}

pub fn one<T: Real>() -> Scalar<T> {
    Complex::new(T::one(), T::zero())
}

pub fn zero<T: Real>() -> Scalar<T> {
    Complex::new(T::zero(), T::zero())
}

/// Unit-modulus scalar `exp(i * theta)`.
pub fn phase<T: Real>(theta: T) -> Scalar<T> {
    Complex::new(theta.cos(), theta.sin())
}

pub fn to_c64<T: Real>(z: Scalar<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

pub fn from_c64<T: Real>(z: Complex<f64>) -> Scalar<T> {
    Complex::new(T::lit(z.re), T::lit(z.im))
}

/// Both square roots of `z`, principal root first.
///
/// The principal root has argument in `(-pi/2, pi/2]`.
pub fn square_roots<T: Real>(z: Scalar<T>) -> [Scalar<T>; 2] {
    let r = z.sqrt();
    [r, -r]
}

/// Groups values into clusters of absolute width `tol` (greedy, in input order).
/// Returns the mean of each cluster.
pub fn cluster<T: Real>(values: &[Scalar<T>], tol: T) -> Vec<Scalar<T>> {
    let mut clusters: Vec<(Scalar<T>, Scalar<T>, usize)> = Vec::new();
    for &v in values {
        match clusters.iter_mut().find(|(first, _, _)| (v - *first).norm() <= tol) {
            Some((_, sum, count)) => {
                *sum = *sum + v;
                *count += 1;
            }
            None => clusters.push((v, v, 1)),
        }
    }
    clusters
        .into_iter()
        .map(|(_, sum, count)| sum / T::from_usize(count).unwrap())
        .collect()
}

/// Formats a real number with at least twelve significant digits.
pub fn fmt_real<T: Real>(x: T) -> String {
    let v = x.to_f64().unwrap_or(f64::NAN);
    if v == 0.0 {
        return "0".to_string();
    }
    let mag = v.abs().log10().floor();
    if (-4.0..9.0).contains(&mag) {
        let decimals = (13.0 - mag).max(0.0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.13e}")
    }
}

pub fn fmt_scalar<T: Real>(z: Scalar<T>) -> String {
    if z.im == T::zero() {
        fmt_real(z.re)
    } else if z.im < T::zero() {
        format!("{} - {}i", fmt_real(z.re), fmt_real(-z.im))
    } else {
        format!("{} + {}i", fmt_real(z.re), fmt_real(z.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cluster_groups_close_values() {
        let vals = [real(1.0), real(1.0 + 1e-12), real(2.0)];
        let c = cluster(&vals, 1e-9);
        assert_eq!(c.len(), 2);
        assert!((c[0] - real(1.0)).norm() < 1e-11);
    }

    #[test]
    fn principal_root_in_right_half_plane() {
        let [r, s] = square_roots(Complex::new(-1.0_f64, 0.0));
        assert!((r * r + 1.0).norm() < 1e-15);
        assert!((r + s).norm() < 1e-15);
        assert!(r.arg() > -std::f64::consts::FRAC_PI_2 && r.arg() <= std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn twelve_significant_digits() {
        let s = fmt_real(1.618_033_988_749_895_f64);
        assert!(s.starts_with("1.618033988749"), "{s}");
        assert!(fmt_real(3.0e-12_f64).contains('e'));
    }
}
