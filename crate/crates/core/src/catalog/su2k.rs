use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::{phase, real, Real, Scalar};
use crate::tensor_system::{BraidedTensorSystem, FKey, RKey, TensorSystemBuilder};

use super::finish_real_orthogonal;

/// Name of the spin `twice / 2`: `0`, `1/2`, `1`, `3/2`, ...
pub fn su2k_label(twice: u32) -> String {
    if twice % 2 == 0 {
        (twice / 2).to_string()
    } else {
        format!("{twice}/2")
    }
}

/// Quantum integers and factorials at level `k`, `[n] = sin(nπ/(k+2)) / sin(π/(k+2))`.
struct QuantumNumbers<T> {
    fact: Vec<T>,
}

impl<T: Real> QuantumNumbers<T> {
    fn new(k: u32) -> Self {
        let s = T::PI() / T::from_u32(k + 2).unwrap();
        let max = 2 * k as usize + 4;
        let mut fact = vec![T::one(); max + 1];
        for n in 1..=max {
            let qn = (T::from_usize(n).unwrap() * s).sin() / s.sin();
            fact[n] = fact[n - 1] * qn;
        }
        Self { fact }
    }

    fn int(&self, n: i64) -> T {
        self.fact[n as usize] / self.fact[n as usize - 1]
    }

    fn fact(&self, n: i64) -> T {
        self.fact[usize::try_from(n).expect("nonnegative factorial argument")]
    }

    /// Triangle coefficient for doubled spins.
    fn delta(&self, a: i64, b: i64, c: i64) -> T {
        (self.fact((a + b - c) / 2) * self.fact((a - b + c) / 2) * self.fact((-a + b + c) / 2)
            / self.fact((a + b + c) / 2 + 1))
        .sqrt()
    }

    /// Quantum 6j symbol `{a b e; c d f}` (doubled spins) via the Racah sum.
    fn six_j(&self, a: i64, b: i64, e: i64, c: i64, d: i64, f: i64) -> T {
        let t = [(a + b + e) / 2, (a + d + f) / 2, (c + b + f) / 2, (c + d + e) / 2];
        let u = [(a + b + c + d) / 2, (b + e + d + f) / 2, (a + e + c + f) / 2];
        let lo = *t.iter().max().unwrap();
        let hi = *u.iter().min().unwrap();
        let mut sum = T::zero();
        for z in lo..=hi {
            let mut den = T::one();
            for x in t {
                den = den * self.fact(z - x);
            }
            for x in u {
                den = den * self.fact(x - z);
            }
            let sign = if z % 2 == 0 { T::one() } else { -T::one() };
            sum = sum + sign * self.fact(z + 1) / den;
        }
        self.delta(a, b, e) * self.delta(a, d, f) * self.delta(c, b, f) * self.delta(c, d, e) * sum
    }
}

fn admissible(k: i64, a: i64, b: i64, c: i64) -> bool {
    (a + b + c) % 2 == 0 && c >= (a - b).abs() && c <= a + b && a + b + c <= 2 * k
}

/// The su(2)_k system on spins `0, 1/2, ..., k/2`.
pub fn su2k<T: Real>(k: u32) -> Result<BraidedTensorSystem<T>> {
    if k < 1 {
        return Err(Error::CatalogParam(format!("su2k requires k >= 1, got {k}")));
    }
    let spins: Vec<i64> = (0..=k as i64).collect();
    let names: Vec<String> = (0..=k).map(su2k_label).collect();
    let mut b = TensorSystemBuilder::<T>::new(names.iter().cloned())?;
    let kk = k as i64;
    for &x in &spins {
        for &y in &spins {
            for &z in &spins {
                if admissible(kk, x, y, z) {
                    b.fuse(&names[x as usize], &names[y as usize], &names[z as usize])?;
                }
            }
        }
        b.dual(&names[x as usize], &names[x as usize])?;
    }
    b.identity("0")?;
    let ids: Vec<usize> = names.iter().map(|s| b.labels().id(s)).collect::<Result<_>>()?;

    let q = QuantumNumbers::<T>::new(k);
    let mut special: HashMap<FKey, Scalar<T>> = HashMap::new();
    for &a in &spins {
        for &bb in &spins {
            for &c in &spins {
                for &d in &spins {
                    for &e in &spins {
                        if !(admissible(kk, a, bb, e) && admissible(kk, e, c, d)) {
                            continue;
                        }
                        for &f in &spins {
                            if !(admissible(kk, bb, c, f) && admissible(kk, a, f, d)) {
                                continue;
                            }
                            let sign = if ((a + bb + c + d) / 2) % 2 == 0 { T::one() } else { -T::one() };
                            let v = sign * (q.int(e + 1) * q.int(f + 1)).sqrt() * q.six_j(a, bb, e, c, d, f);
                            let key = [a, bb, c, d, e, f].map(|x| ids[x as usize]);
                            special.insert(key, real(v));
                        }
                    }
                }
            }
        }
    }

    // R^{ab}_c = (-1)^{c-a-b} exp(2πi/(k+2) * (c(c+1) - a(a+1) - b(b+1)) / 2), doubled spins
    let step = T::PI() * T::lit(2.0) / T::from_u32(k + 2).unwrap();
    let mut r: HashMap<RKey, Scalar<T>> = HashMap::new();
    for &a in &spins {
        for &bb in &spins {
            for &c in &spins {
                if !admissible(kk, a, bb, c) {
                    continue;
                }
                let casimir = c * (c + 2) - a * (a + 2) - bb * (bb + 2);
                let sign = if ((c - a - bb) / 2).rem_euclid(2) == 0 { T::one() } else { -T::one() };
                let v = phase(step * T::from_i64(casimir).unwrap() / T::lit(8.0)) * sign;
                r.insert([a, bb, c].map(|x| ids[x as usize]), v);
            }
        }
    }
    finish_real_orthogonal(&b, &special, r)
}
