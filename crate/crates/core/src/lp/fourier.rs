//! Dense functions on `Z_q^n` and their Fourier transforms
//! `f^(w) = sum_x f(x) exp(2 pi i <w, x> / q)`.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::word::ExtendedWeight;

/// Largest group accepted for dense storage.
pub const DENSE_LIMIT: usize = 10_000_000;

/// A complex-valued function on `Z_q^n`, indexed by base-`q` digits with the
/// first coordinate most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    n: usize,
    q: usize,
    values: Vec<Complex64>,
}

fn group_size(n: usize, q: usize) -> Result<usize> {
    if q < 2 {
        return domain(format!("modulus {q} too small"));
    }
    let size = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > DENSE_LIMIT as u128 {
        return Err(Error::SizeGuard {
            states: size,
            limit: DENSE_LIMIT as u128,
        });
    }
    Ok(size as usize)
}

impl GroupFunction {
    pub fn zeros(n: usize, q: usize) -> Result<Self> {
        let size = group_size(n, q)?;
        Ok(Self {
            n,
            q,
            values: vec![Complex64::new(0.0, 0.0); size],
        })
    }

    pub fn from_values(n: usize, q: usize, values: Vec<Complex64>) -> Result<Self> {
        let size = group_size(n, q)?;
        if values.len() != size {
            return Err(Error::LengthMismatch {
                left: size,
                right: values.len(),
            });
        }
        Ok(Self { n, q, values })
    }

    /// Builds a real function from a closure over coordinates.
    pub fn from_fn<F: FnMut(&[usize]) -> f64>(n: usize, q: usize, mut f: F) -> Result<Self> {
        let size = group_size(n, q)?;
        let mut coords = vec![0usize; n];
        let values = (0..size)
            .map(|i| {
                decode_into(i, q, &mut coords);
                Complex64::new(f(&coords), 0.0)
            })
            .collect();
        Ok(Self { n, q, values })
    }

    /// Indicator of a set of group elements given by index.
    pub fn indicator(n: usize, q: usize, members: &[usize]) -> Result<Self> {
        let mut f = Self::zeros(n, q)?;
        for &m in members {
            if m >= f.values.len() {
                return domain(format!("element {m} outside Z_{q}^{n}"));
            }
            f.values[m] = Complex64::new(1.0, 0.0);
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn at(&self, index: usize) -> Complex64 {
        self.values[index]
    }

    pub fn coords(&self, index: usize) -> Vec<usize> {
        let mut c = vec![0; self.n];
        decode_into(index, self.q, &mut c);
        c
    }

    pub fn index_of(&self, coords: &[usize]) -> usize {
        coords.iter().fold(0, |acc, &c| acc * self.q + c % self.q)
    }

    fn check_same_group(&self, other: &GroupFunction) -> Result<()> {
        if self.n != other.n || self.q != other.q {
            return domain("functions live on different groups");
        }
        Ok(())
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GroupFunction) -> Result<GroupFunction> {
        self.check_same_group(other)?;
        Ok(GroupFunction {
            n: self.n,
            q: self.q,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// `(f * g)(x) = sum_y f(y) g(x - y)`, evaluated directly.
    pub fn convolve(&self, other: &GroupFunction) -> Result<GroupFunction> {
        self.check_same_group(other)?;
        let size = self.values.len();
        let mut out = vec![Complex64::new(0.0, 0.0); size];
        let mut cx = vec![0usize; self.n];
        let mut cy = vec![0usize; self.n];
        let mut diff = vec![0usize; self.n];
        for (x, slot) in out.iter_mut().enumerate() {
            decode_into(x, self.q, &mut cx);
            for y in 0..size {
                if self.values[y] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                decode_into(y, self.q, &mut cy);
                for k in 0..self.n {
                    diff[k] = (cx[k] + self.q - cy[k]) % self.q;
                }
                *slot += self.values[y] * other.values[self.index_of(&diff)];
            }
        }
        Ok(GroupFunction {
            n: self.n,
            q: self.q,
            values: out,
        })
    }

    /// `(f, g) = q^-n sum_x conj(f(x)) g(x)`.
    pub fn inner(&self, other: &GroupFunction) -> Result<Complex64> {
        self.check_same_group(other)?;
        let total: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(total / self.values.len() as f64)
    }

    /// Forward transform, one axis at a time.
    pub fn dft(&self) -> GroupFunction {
        self.transform(1.0, 1.0)
    }

    /// Inverse of [`GroupFunction::dft`]:
    /// `f(x) = q^-n sum_w f^(w) exp(-2 pi i <w, x> / q)`.
    pub fn inverse_dft(&self) -> GroupFunction {
        self.transform(-1.0, 1.0 / self.values.len() as f64)
    }

    fn transform(&self, sign: f64, scale: f64) -> GroupFunction {
        let q = self.q;
        let roots: Vec<Complex64> = (0..q)
            .map(|k| Complex64::from_polar(1.0, sign * 2.0 * std::f64::consts::PI * k as f64 / q as f64))
            .collect();
        let mut data = self.values.clone();
        let mut buf = vec![Complex64::new(0.0, 0.0); q];
        let size = data.len();
        // stride of axis k (axis 0 is most significant)
        for axis in 0..self.n {
            let stride = q.pow((self.n - 1 - axis) as u32);
            for base in 0..size {
                if (base / stride) % q != 0 {
                    continue;
                }
                for (w, slot) in buf.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for x in 0..q {
                        acc += data[base + x * stride] * roots[(w * x) % q];
                    }
                    *slot = acc;
                }
                for (w, &v) in buf.iter().enumerate() {
                    data[base + w * stride] = v;
                }
            }
        }
        if scale != 1.0 {
            for v in &mut data {
                *v *= scale;
            }
        }
        GroupFunction {
            n: self.n,
            q: self.q,
            values: data,
        }
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }
}

fn decode_into(mut index: usize, q: usize, coords: &mut [usize]) {
    for slot in coords.iter_mut().rev() {
        *slot = index % q;
        index /= q;
    }
}

/// Typewriter weight on `Z_q^n`: 0 for 0, 1 for ±1, infinite otherwise,
/// summed over coordinates.
pub fn group_weight(coords: &[usize], q: usize) -> ExtendedWeight {
    coords
        .iter()
        .map(|&c| match c % q {
            0 => ExtendedWeight::Finite(0),
            x if x == 1 || x == q - 1 => ExtendedWeight::Finite(1),
            _ => ExtendedWeight::Infinite,
        })
        .sum()
}
