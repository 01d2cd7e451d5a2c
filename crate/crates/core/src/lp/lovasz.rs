//! Lovász's assignment on `Z_q^n` and the sphere transforms that reduce the
//! finite-distance problem to a Krawtchouk linear program.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::fourier::GroupFunction;
use crate::error::{domain, Result};
use crate::scalar::{binomial, krawtchouk, KrawtchoukParams};

pub(crate) fn check_odd_modulus(q: usize) -> Result<()> {
    if q < 5 || q % 2 == 0 {
        return domain(format!("modulus {q} must be odd and at least 5"));
    }
    Ok(())
}

/// `phi = 1 / (2 cos(pi/q))`.
pub fn phi(q: usize) -> f64 {
    1.0 / (2.0 * (PI / q as f64).cos())
}

/// The non-integer alphabet parameter `q' = 1 + 1/cos(pi/q)`; `sqrt 5` for
/// `q = 5`.
pub fn qprime(q: usize) -> f64 {
    1.0 + 1.0 / (PI / q as f64).cos()
}

/// `c = (q - 1)/2`, the frequency at which the one-letter transform vanishes.
pub fn half_frequency(q: usize) -> usize {
    (q - 1) / 2
}

/// One-letter assignment: 1 at 0, `phi` at ±1, 0 elsewhere.
pub fn g1(x: usize, q: usize) -> f64 {
    match x % q {
        0 => 1.0,
        v if v == 1 || v == q - 1 => phi(q),
        _ => 0.0,
    }
}

/// Closed form of the one-letter transform, `1 + 2 phi cos(2 pi w / q)`.
pub fn g1_hat(omega: usize, q: usize) -> f64 {
    1.0 + 2.0 * phi(q) * (2.0 * PI * omega as f64 / q as f64).cos()
}

/// `g(x) = prod_j g1(x_j)` on `Z_q^n`.
pub fn lovasz_assignment(n: usize, q: usize) -> Result<GroupFunction> {
    check_odd_modulus(q)?;
    GroupFunction::from_fn(n, q, |c| c.iter().map(|&x| g1(x, q)).product())
}

/// Lovász's bound `q^n (cos(pi/q) / (1 + cos(pi/q)))^n` on codes of infinite
/// minimum distance.
pub fn lovasz_bound(n: usize, q: usize) -> Result<f64> {
    check_odd_modulus(q)?;
    let c = (PI / q as f64).cos();
    Ok((q as f64 * c / (1.0 + c)).powi(n as i32))
}

/// The same bound computed as `q^n g(0) / g^(0)` from a dense transform.
pub fn lovasz_bound_from_dft(n: usize, q: usize) -> Result<f64> {
    let g = lovasz_assignment(n, q)?;
    let g_hat = g.dft();
    Ok(g.len() as f64 * g.at(0).re / g_hat.at(0).re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereKind {
    /// `S_l^c`: `l` coordinates equal to `±c`, the rest zero.
    Frequency,
    /// `S_u^1`: `u` coordinates equal to `±1`, the rest zero.
    Input,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphereSpec {
    pub n: usize,
    pub q: usize,
    pub c: usize,
    pub kind: SphereKind,
    pub index: usize,
}

impl SphereSpec {
    pub fn new(n: usize, q: usize, kind: SphereKind, index: usize) -> Result<Self> {
        check_odd_modulus(q)?;
        if index > n {
            return domain(format!("sphere index {index} exceeds length {n}"));
        }
        Ok(Self {
            n,
            q,
            c: half_frequency(q),
            kind,
            index,
        })
    }

    fn radius_symbol(&self) -> usize {
        match self.kind {
            SphereKind::Frequency => self.c,
            SphereKind::Input => 1,
        }
    }

    /// Every member of the sphere as coordinates.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let r = self.radius_symbol();
        for support in combinations(self.n, self.index) {
            for signs in 0..(1usize << self.index) {
                let mut w = vec![0usize; self.n];
                for (b, &pos) in support.iter().enumerate() {
                    w[pos] = if signs >> b & 1 == 1 { self.q - r } else { r };
                }
                out.push(w);
            }
        }
        out
    }

    pub fn contains(&self, coords: &[usize]) -> bool {
        let r = self.radius_symbol();
        coords.len() == self.n
            && coords.iter().all(|&x| x == 0 || x == r || x == self.q - r)
            && coords.iter().filter(|&&x| x != 0).count() == self.index
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Both evaluations of the transform of a frequency sphere at a point of an
/// input sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereTransform {
    /// `sum_{w in S_l^c} exp(2 pi i <w, x> / q)`.
    pub direct: Complex64,
    /// `(2 cos(pi/q))^l K_l(u; q')`.
    pub closed_form: f64,
}

pub fn sphere_transform(spec: &SphereSpec, x: &[usize]) -> Result<SphereTransform> {
    if spec.kind != SphereKind::Frequency {
        return domain("sphere_transform expects a frequency sphere");
    }
    let input = SphereSpec {
        kind: SphereKind::Input,
        index: x.iter().filter(|&&v| v % spec.q != 0).count(),
        ..*spec
    };
    if !input.contains(x) {
        return domain("evaluation point must have entries in {0, ±1}");
    }
    let q = spec.q;
    let direct: Complex64 = spec
        .members()
        .iter()
        .map(|w| {
            let dot: usize = w.iter().zip(x).map(|(a, b)| a * b).sum::<usize>() % q;
            Complex64::from_polar(1.0, 2.0 * PI * dot as f64 / q as f64)
        })
        .sum();
    let kraw = krawtchouk(KrawtchoukParams::new(
        spec.n,
        qprime(q),
        spec.index,
        input.index as f64,
    )?)?;
    let closed_form = (2.0 * (PI / q as f64).cos()).powi(spec.index as i32) * kraw;
    Ok(SphereTransform {
        direct,
        closed_form,
    })
}

/// Size of `S_l^c`, `C(n, l) 2^l`.
pub fn sphere_size(n: usize, ell: usize) -> f64 {
    binomial(n, ell) * (ell as f64).exp2()
}
