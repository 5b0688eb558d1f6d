//! Periodic spectral utilities on uniform grids.
//!
//! Everything here follows the `(1/pi) \int f(t) cos(lt) dt` coefficient
//! normalization so that Galerkin matrix and right-hand-side formulas
//! transcribe directly, and the periodic trapezoid rule throughout, which is
//! spectrally accurate for smooth periodic integrands.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Real trigonometric polynomial `mean + sum_{l=1}^{M} (cos_l cos lt + sin_l sin lt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    mean: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigPoly {
    /// Build from a mean and coefficient arrays; both arrays index harmonic
    /// `l` at position `l - 1` and must have equal length.
    pub fn new(mean: f64, cos: Vec<f64>, sin: Vec<f64>) -> TrigPoly {
        assert_eq!(cos.len(), sin.len(), "coefficient arrays must match in length");
        TrigPoly { mean, cos, sin }
    }

    pub fn zero(order: usize) -> TrigPoly {
        TrigPoly::new(0.0, vec![0.0; order], vec![0.0; order])
    }

    pub fn order(&self) -> usize {
        self.cos.len()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    /// Evaluate at angle `t`.
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = self.mean;
        for (i, (&a, &b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let lt = (i + 1) as f64 * t;
            acc += a * lt.cos() + b * lt.sin();
        }
        acc
    }

    /// Samples on the uniform `n`-point grid.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        let h = 2.0 * std::f64::consts::PI / n as f64;
        (0..n).map(|i| self.eval(h * i as f64)).collect()
    }

    pub fn max_coeff(&self) -> f64 {
        self.cos
            .iter()
            .chain(&self.sin)
            .fold(self.mean.abs(), |m, &c| m.max(c.abs()))
    }

    /// Termwise derivative: `cos lt -> -l sin lt`, `sin lt -> l cos lt`.
    pub fn derivative(&self) -> TrigPoly {
        let m = self.order();
        let mut cos = vec![0.0; m];
        let mut sin = vec![0.0; m];
        for l in 1..=m {
            cos[l - 1] = self.sin[l - 1] * l as f64;
            sin[l - 1] = -self.cos[l - 1] * l as f64;
        }
        TrigPoly::new(0.0, cos, sin)
    }

    /// Periodic antiderivative with zero mean:
    /// `cos lt -> sin lt / l`, `sin lt -> -cos lt / l`.
    ///
    /// Requires zero mean; a constant term has no periodic antiderivative.
    pub fn antiderivative(&self) -> Result<TrigPoly> {
        if self.mean.abs() > 1e-10 * self.max_coeff().max(f64::MIN_POSITIVE) {
            return Err(Error::NonzeroMean { mean: self.mean });
        }
        let m = self.order();
        let mut cos = vec![0.0; m];
        let mut sin = vec![0.0; m];
        for l in 1..=m {
            sin[l - 1] = self.cos[l - 1] / l as f64;
            cos[l - 1] = -self.sin[l - 1] / l as f64;
        }
        Ok(TrigPoly::new(0.0, cos, sin))
    }
}

/// Discrete Fourier analysis of uniform samples up to order `m`.
///
/// Coefficients approximate `(1/pi) \int f cos lt dt` and
/// `(1/pi) \int f sin lt dt` by the trapezoid rule, which is exact (up to
/// rounding) for band-limited input with `n >= 2m + 2`.
pub fn analyze(samples: &[f64], m: usize) -> Result<TrigPoly> {
    let n = samples.len();
    if n % 2 != 0 {
        return Err(Error::OddSampleCount { n });
    }
    if n < 2 * m + 2 {
        return Err(Error::InsufficientSamples { n, m });
    }
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let mean = samples.iter().sum::<f64>() / n as f64;
    let mut cos = vec![0.0; m];
    let mut sin = vec![0.0; m];
    for l in 1..=m {
        let mut ac = 0.0;
        let mut asn = 0.0;
        for (i, &f) in samples.iter().enumerate() {
            let lt = l as f64 * h * i as f64;
            ac += f * lt.cos();
            asn += f * lt.sin();
        }
        cos[l - 1] = ac * 2.0 / n as f64;
        sin[l - 1] = asn * 2.0 / n as f64;
    }
    Ok(TrigPoly::new(mean, cos, sin))
}

/// Trigonometric basis selector for Galerkin projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Cos,
    Sin,
}

/// The four `M x M` projection blocks of a kernel grid:
/// `block[j-1][k-1] = (1/pi^2) \int\int k(tau, t) rowtrig(jt) coltrig(k tau) dtau dt`
/// with the double trapezoid rule on the grid nodes.
#[derive(Debug, Clone)]
pub struct GalerkinBlocks {
    pub m: usize,
    /// row cos jt, column cos k tau
    pub cc: Vec<f64>,
    /// row cos jt, column sin k tau
    pub cs: Vec<f64>,
    /// row sin jt, column cos k tau
    pub sc: Vec<f64>,
    /// row sin jt, column sin k tau
    pub ss: Vec<f64>,
}

impl GalerkinBlocks {
    pub fn entry(&self, row: (Trig, usize), col: (Trig, usize)) -> f64 {
        let (rt, j) = row;
        let (ct, k) = col;
        assert!((1..=self.m).contains(&j) && (1..=self.m).contains(&k));
        let idx = (j - 1) * self.m + (k - 1);
        match (rt, ct) {
            (Trig::Cos, Trig::Cos) => self.cc[idx],
            (Trig::Cos, Trig::Sin) => self.cs[idx],
            (Trig::Sin, Trig::Cos) => self.sc[idx],
            (Trig::Sin, Trig::Sin) => self.ss[idx],
        }
    }
}

/// Project an `n x n` kernel grid (`values[i * n + l] = k(tau_l, t_i)`) onto
/// the trigonometric product basis for all `j, k <= m` at once.
///
/// Implemented as a row FFT over the source angle followed by column FFTs
/// over the target angle, so a whole block costs `O(n^2 log n)` instead of
/// `O(m^2 n^2)` for entrywise quadrature.
pub fn galerkin_blocks(values: &[f64], n: usize, m: usize) -> Result<GalerkinBlocks> {
    assert_eq!(values.len(), n * n, "grid must be n x n");
    if n < 2 * m + 2 {
        return Err(Error::InsufficientSamples { n, m });
    }
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);

    // Row transforms over tau. After the FFT of row i,
    //   Re X_i(k) = sum_l k(tau_l, t_i) cos(k tau_l)
    //   Im X_i(k) = -sum_l k(tau_l, t_i) sin(k tau_l).
    let mut cos_part = vec![0.0f64; n * m]; // [i * m + (k-1)]
    let mut sin_part = vec![0.0f64; n * m];
    let mut buf: Vec<Complex64> = vec![Complex64::default(); n];
    for i in 0..n {
        for l in 0..n {
            buf[l] = Complex64::new(values[i * n + l], 0.0);
        }
        fft.process(&mut buf);
        for k in 1..=m {
            cos_part[i * m + (k - 1)] = buf[k].re;
            sin_part[i * m + (k - 1)] = -buf[k].im;
        }
    }

    // Column transforms over t for each retained source harmonic.
    let scale = 4.0 / (n as f64 * n as f64); // (1/pi^2) (2pi/n)^2
    let mut cc = vec![0.0f64; m * m];
    let mut cs = vec![0.0f64; m * m];
    let mut sc = vec![0.0f64; m * m];
    let mut ss = vec![0.0f64; m * m];
    for k in 1..=m {
        for i in 0..n {
            buf[i] = Complex64::new(cos_part[i * m + (k - 1)], 0.0);
        }
        fft.process(&mut buf);
        for j in 1..=m {
            cc[(j - 1) * m + (k - 1)] = buf[j].re * scale;
            sc[(j - 1) * m + (k - 1)] = -buf[j].im * scale;
        }
        for i in 0..n {
            buf[i] = Complex64::new(sin_part[i * m + (k - 1)], 0.0);
        }
        fft.process(&mut buf);
        for j in 1..=m {
            cs[(j - 1) * m + (k - 1)] = buf[j].re * scale;
            ss[(j - 1) * m + (k - 1)] = -buf[j].im * scale;
        }
    }

    Ok(GalerkinBlocks { m, cc, cs, sc, ss })
}

/// Single projection entry; computes the enclosing block and indexes into it.
pub fn galerkin_entry(
    values: &[f64],
    n: usize,
    row: (Trig, usize),
    col: (Trig, usize),
) -> Result<f64> {
    let m = row.1.max(col.1);
    Ok(galerkin_blocks(values, n, m)?.entry(row, col))
}

/// In-place forward FFT of a real sample vector; returns the complex spectrum.
pub(crate) fn real_fft(samples: &[f64]) -> Vec<Complex64> {
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(samples.len());
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft.process(&mut buf);
    buf
}

/// Inverse FFT returning real parts, normalized by `1/n`.
pub(crate) fn inverse_fft_real(mut spectrum: Vec<Complex64>) -> Vec<f64> {
    let n = spectrum.len();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_inverse(n);
    fft.process(&mut spectrum);
    spectrum.iter().map(|c| c.re / n as f64).collect()
}
