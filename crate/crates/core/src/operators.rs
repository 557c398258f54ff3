//! Forward operator constructors and synthetic ground-truth phantoms.
//!
//! Three operator families are supported: a diagonal model problem with
//! power-law singular values, periodic 1-d convolution, and a small
//! parallel-beam tomography discretization assembled from exact ray–pixel
//! intersection lengths.

use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::rng::{mix_seed, rng_for};
use crate::system::SingularSystem;

/// Pixel-count cap that keeps the tomography SVD desk-sized.
const MAX_RADON_PIXELS: usize = 4096;

/// Description of a discretized forward operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorSpec {
    /// diag(n^(-decay)), n = 1..=size.
    Diagonal { decay: f64, size: usize },
    /// Circulant matrix of `kernel` acting on signals of length `length`.
    Convolution1d { kernel: Vec<f64>, length: usize },
    /// Parallel-beam ray transform of a `side`×`side` image.
    ///
    /// `angles` view angles equally spaced in [0, π); `detectors` offsets at
    /// bin centers spanning the image diagonal (default ⌈√2·side⌉).
    Radon2d {
        side: usize,
        angles: usize,
        #[serde(default)]
        detectors: Option<usize>,
    },
}

impl OperatorSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            OperatorSpec::Diagonal { decay, size } => {
                if *decay <= 0.0 || !decay.is_finite() {
                    return Err(Error::InvalidParameter(
                        "diagonal decay exponent must be positive".into(),
                    ));
                }
                if *size == 0 {
                    return Err(Error::InvalidParameter(
                        "diagonal size must be positive".into(),
                    ));
                }
            }
            OperatorSpec::Convolution1d { kernel, length } => {
                if kernel.is_empty() || kernel.len() > *length {
                    return Err(Error::InvalidParameter(
                        "kernel must be nonempty and no longer than the signal".into(),
                    ));
                }
                if kernel.iter().any(|k| !k.is_finite()) {
                    return Err(Error::InvalidParameter("kernel must be finite".into()));
                }
                if kernel.iter().all(|k| *k == 0.0) {
                    return Err(Error::InvalidParameter("kernel must be nonzero".into()));
                }
            }
            OperatorSpec::Radon2d {
                side,
                angles,
                detectors,
            } => {
                if *side < 2 || *angles == 0 || detectors.is_some_and(|d| d == 0) {
                    return Err(Error::InvalidParameter(
                        "tomography needs side >= 2 and positive ray counts".into(),
                    ));
                }
                if side * side > MAX_RADON_PIXELS {
                    return Err(Error::ResourceLimit(format!(
                        "radon2d image {side}x{side} exceeds {MAX_RADON_PIXELS} pixels"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Dimension of the domain X the assembled operator acts on.
    pub fn dim_x(&self) -> usize {
        match self {
            OperatorSpec::Diagonal { size, .. } => *size,
            OperatorSpec::Convolution1d { length, .. } => *length,
            OperatorSpec::Radon2d { side, .. } => side * side,
        }
    }
}

/// Default detector count for a `side`×`side` image.
pub fn default_detectors(side: usize) -> usize {
    (std::f64::consts::SQRT_2 * side as f64).ceil() as usize
}

/// Assemble the dense matrix of the described operator.
pub fn build_operator(spec: &OperatorSpec) -> Result<DenseMatrix> {
    spec.validate()?;
    match spec {
        OperatorSpec::Diagonal { decay, size } => {
            let mut m = DenseMatrix::zeros(*size, *size)?;
            for n in 0..*size {
                m.set(n, n, ((n + 1) as f64).powf(-decay));
            }
            Ok(m)
        }
        OperatorSpec::Convolution1d { kernel, length } => {
            let l = *length;
            let mut m = DenseMatrix::zeros(l, l)?;
            for i in 0..l {
                for (k, kv) in kernel.iter().enumerate() {
                    // (Ax)_i = Σ_k kernel_k x_{(i-k) mod L}
                    m.set(i, (i + l - k) % l, *kv);
                }
            }
            Ok(m)
        }
        OperatorSpec::Radon2d {
            side,
            angles,
            detectors,
        } => {
            let d = detectors.unwrap_or_else(|| default_detectors(*side));
            build_radon(*side, *angles, d)
        }
    }
}

/// Parallel-beam system matrix. Row `t·detectors + d` holds the intersection
/// lengths of ray (θ_t, s_d) with every pixel of the [-1,1]² image.
fn build_radon(side: usize, angles: usize, detectors: usize) -> Result<DenseMatrix> {
    let n_rays = angles * detectors;
    let n_pix = side * side;
    let span = std::f64::consts::SQRT_2;
    let rows: Vec<Vec<f64>> = (0..n_rays)
        .into_par_iter()
        .map(|ray| {
            let t = ray / detectors;
            let d = ray % detectors;
            let theta = std::f64::consts::PI * t as f64 / angles as f64;
            let offset = -span + (d as f64 + 0.5) * (2.0 * span / detectors as f64);
            radon_row(side, theta, offset)
        })
        .collect();
    let mut entries = Vec::with_capacity(n_rays * n_pix);
    for row in rows {
        entries.extend(row);
    }
    DenseMatrix::new(n_rays, n_pix, entries)
}

/// Exact segment-length weights of one ray against the pixel grid.
///
/// The ray is p(t) = s·n̂ + t·d̂ with n̂ = (cosθ, sinθ), d̂ = (−sinθ, cosθ).
/// Pixels are stored row-major with row 0 at the top of the image (y = 1).
fn radon_row(side: usize, theta: f64, s: f64) -> Vec<f64> {
    let mut row = vec![0.0; side * side];
    let (sin_t, cos_t) = theta.sin_cos();
    let h = 2.0 / side as f64;

    // Clip the ray parameter against x(t) ∈ [-1,1] and y(t) ∈ [-1,1].
    let mut t_lo = f64::NEG_INFINITY;
    let mut t_hi = f64::INFINITY;
    // x(t) = s·cosθ − t·sinθ
    if sin_t.abs() > 0.0 {
        let t1 = (s * cos_t - 1.0) / sin_t;
        let t2 = (s * cos_t + 1.0) / sin_t;
        t_lo = t_lo.max(t1.min(t2));
        t_hi = t_hi.min(t1.max(t2));
    } else if s.abs() > 1.0 {
        return row;
    }
    // y(t) = s·sinθ + t·cosθ
    if cos_t.abs() > 0.0 {
        let t1 = (-1.0 - s * sin_t) / cos_t;
        let t2 = (1.0 - s * sin_t) / cos_t;
        t_lo = t_lo.max(t1.min(t2));
        t_hi = t_hi.min(t1.max(t2));
    } else if (s * sin_t).abs() > 1.0 {
        return row;
    }
    if t_lo >= t_hi || !t_lo.is_finite() || !t_hi.is_finite() {
        return row;
    }

    // Grid-line crossings inside (t_lo, t_hi).
    let mut cuts = Vec::with_capacity(2 * side + 4);
    cuts.push(t_lo);
    cuts.push(t_hi);
    if sin_t.abs() > 0.0 {
        for k in 0..=side {
            let x = -1.0 + k as f64 * h;
            let t = (s * cos_t - x) / sin_t;
            if t > t_lo && t < t_hi {
                cuts.push(t);
            }
        }
    }
    if cos_t.abs() > 0.0 {
        for k in 0..=side {
            let y = -1.0 + k as f64 * h;
            let t = (y - s * sin_t) / cos_t;
            if t > t_lo && t < t_hi {
                cuts.push(t);
            }
        }
    }
    cuts.sort_by(|a, b| a.total_cmp(b));

    for w in cuts.windows(2) {
        let len = w[1] - w[0];
        if len <= 0.0 {
            continue;
        }
        let tm = 0.5 * (w[0] + w[1]);
        let x = s * cos_t - tm * sin_t;
        let y = s * sin_t + tm * cos_t;
        let col = (((x + 1.0) / h).floor() as isize).clamp(0, side as isize - 1) as usize;
        let r = (((1.0 - y) / h).floor() as isize).clamp(0, side as isize - 1) as usize;
        row[r * side + col] += len;
    }
    row
}

/// Synthetic ground-truth image: a clipped superposition of random ellipses.
#[derive(Debug, Clone, PartialEq)]
pub struct Phantom {
    pixels: Vec<f64>,
    side: usize,
    seed: u64,
    generator: &'static str,
}

impl Phantom {
    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn generator(&self) -> &'static str {
        self.generator
    }

    pub fn mean_intensity(&self) -> f64 {
        self.pixels.iter().sum::<f64>() / self.pixels.len() as f64
    }

    pub fn to_matrix(&self) -> DenseMatrix {
        DenseMatrix::new(self.side, self.side, self.pixels.clone())
            .expect("phantom pixels are finite by construction")
    }

    /// Binary 16-bit PGM (P5, maxval 65535), big-endian samples.
    pub fn write_pgm<W: std::io::Write>(&self, w: &mut W) -> Result<()> {
        write_pgm16(w, self.side, self.side, &self.pixels)
    }

    pub fn save_pgm(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_pgm(&mut f)
    }
}

/// Write values clipped to \[0,1\] as a 16-bit P5 image.
pub fn write_pgm16<W: std::io::Write>(
    w: &mut W,
    width: usize,
    height: usize,
    values: &[f64],
) -> Result<()> {
    if values.len() != width * height {
        return Err(Error::DimensionMismatch {
            what: "pgm values",
            expected: width * height,
            got: values.len(),
        });
    }
    write!(w, "P5\n{width} {height}\n65535\n")?;
    for v in values {
        let q = (v.clamp(0.0, 1.0) * 65535.0).round() as u16;
        w.write_all(&q.to_be_bytes())?;
    }
    Ok(())
}

/// Deterministic ellipse phantom on a `p`×`p` grid, values in \[0,1\].
pub fn generate_phantom(p: usize, seed: u64) -> Result<Phantom> {
    if p < 4 {
        return Err(Error::InvalidParameter(
            "phantom side length must be at least 4".into(),
        ));
    }
    let mut rng = rng_for(seed, 0);
    let count = rng.random_range(3..=8usize);
    struct Ellipse {
        cx: f64,
        cy: f64,
        a: f64,
        b: f64,
        cos_phi: f64,
        sin_phi: f64,
        intensity: f64,
    }
    let ellipses: Vec<Ellipse> = (0..count)
        .map(|_| {
            let cx = rng.random_range(0.2..0.8);
            let cy = rng.random_range(0.2..0.8);
            let a = rng.random_range(0.05..0.35);
            let b = rng.random_range(0.05..0.35);
            let phi = rng.random_range(0.0..std::f64::consts::PI);
            let intensity = rng.random_range(0.15..0.85);
            Ellipse {
                cx,
                cy,
                a,
                b,
                cos_phi: phi.cos(),
                sin_phi: phi.sin(),
                intensity,
            }
        })
        .collect();

    let mut pixels = vec![0.0; p * p];
    for r in 0..p {
        let y = (r as f64 + 0.5) / p as f64;
        for c in 0..p {
            let x = (c as f64 + 0.5) / p as f64;
            let mut v = 0.0;
            for e in &ellipses {
                let dx = x - e.cx;
                let dy = y - e.cy;
                let xr = (dx * e.cos_phi + dy * e.sin_phi) / e.a;
                let yr = (-dx * e.sin_phi + dy * e.cos_phi) / e.b;
                if xr * xr + yr * yr <= 1.0 {
                    v += e.intensity;
                }
            }
            pixels[r * p + c] = v.clamp(0.0, 1.0);
        }
    }
    Ok(Phantom {
        pixels,
        side: p,
        seed,
        generator: "ellipses-v1",
    })
}

/// Draw a corpus of ground-truth vectors for the given operator.
///
/// Tomography uses flattened phantoms. The synthetic kinds use
/// x = Σ_n c_n ξ_n u_n with c_n² = n^(-q) over the retained modes, which
/// keeps the per-mode data variance summable and positive; the generator
/// therefore needs the singular system of the operator. `q` must exceed 1.
pub fn sample_data_corpus(
    spec: &OperatorSpec,
    sys: &SingularSystem,
    q: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    if q <= 1.0 || !q.is_finite() {
        return Err(Error::TraceClassViolated { q });
    }
    if count == 0 {
        return Err(Error::InvalidParameter(
            "corpus must contain at least one sample".into(),
        ));
    }
    match spec {
        OperatorSpec::Radon2d { side, .. } => {
            if side * side != sys.dim_x() {
                return Err(Error::DimensionMismatch {
                    what: "phantom pixels",
                    expected: sys.dim_x(),
                    got: side * side,
                });
            }
            (0..count)
                .map(|i| Ok(generate_phantom(*side, mix_seed(seed, i as u64))?.pixels))
                .collect()
        }
        _ => (0..count)
            .map(|i| {
                let mut rng = rng_for(seed, i as u64);
                let coeffs: Vec<f64> = (0..sys.n_modes())
                    .map(|n| {
                        let c = ((n + 1) as f64).powf(-q / 2.0);
                        let xi: f64 = rng.sample(StandardNormal);
                        c * xi
                    })
                    .collect();
                sys.expand_in_u(&coeffs)
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svd::compute_svd;

    #[test]
    fn diagonal_formula() {
        let m = build_operator(&OperatorSpec::Diagonal {
            decay: 1.0,
            size: 3,
        })
        .unwrap();
        assert_eq!(m.at(0, 0), 1.0);
        assert_eq!(m.at(1, 1), 0.5);
        assert!((m.at(2, 2) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.at(0, 1), 0.0);
    }

    #[test]
    fn unit_kernel_gives_identity() {
        let m = build_operator(&OperatorSpec::Convolution1d {
            kernel: vec![1.0],
            length: 4,
        })
        .unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.at(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn convolution_commutes_with_cyclic_shift() {
        let m = build_operator(&OperatorSpec::Convolution1d {
            kernel: vec![0.5, 0.3, 0.2],
            length: 7,
        })
        .unwrap();
        let x = [0.9, -0.2, 0.4, 1.5, -1.0, 0.3, 0.1];
        let shift = |v: &[f64]| -> Vec<f64> {
            let mut out = v.to_vec();
            out.rotate_right(1);
            out
        };
        let lhs = m.matvec(&shift(&x)).unwrap();
        let rhs = shift(&m.matvec(&x).unwrap());
        for (a, b) in lhs.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn radon_entries_nonnegative_and_zero_image_maps_to_zero() {
        let m = build_operator(&OperatorSpec::Radon2d {
            side: 8,
            angles: 6,
            detectors: None,
        })
        .unwrap();
        assert!(m.entries().iter().all(|e| *e >= 0.0));
        let sino = m.matvec(&vec![0.0; 64]).unwrap();
        assert!(sino.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn radon_row_sums_match_chord_lengths() {
        let side = 8;
        let angles = 6;
        let detectors = default_detectors(side);
        let m = build_operator(&OperatorSpec::Radon2d {
            side,
            angles,
            detectors: Some(detectors),
        })
        .unwrap();
        let span = std::f64::consts::SQRT_2;
        for t in 0..angles {
            let theta = std::f64::consts::PI * t as f64 / angles as f64;
            for d in 0..detectors {
                let s = -span + (d as f64 + 0.5) * (2.0 * span / detectors as f64);
                let chord = square_chord_length(theta, s);
                let sum: f64 = m.row(t * detectors + d).iter().sum();
                assert!(
                    (sum - chord).abs() < 1e-9,
                    "theta={theta} s={s}: row sum {sum} vs chord {chord}"
                );
            }
        }
    }

    /// Independent chord length of the ray (θ, s) through [-1,1]².
    fn square_chord_length(theta: f64, s: f64) -> f64 {
        let (sin_t, cos_t) = theta.sin_cos();
        let mut t_lo = f64::NEG_INFINITY;
        let mut t_hi = f64::INFINITY;
        if sin_t.abs() > 0.0 {
            let t1 = (s * cos_t - 1.0) / sin_t;
            let t2 = (s * cos_t + 1.0) / sin_t;
            t_lo = t_lo.max(t1.min(t2));
            t_hi = t_hi.min(t1.max(t2));
        } else if s.abs() > 1.0 {
            return 0.0;
        }
        if cos_t.abs() > 0.0 {
            let t1 = (-1.0 - s * sin_t) / cos_t;
            let t2 = (1.0 - s * sin_t) / cos_t;
            t_lo = t_lo.max(t1.min(t2));
            t_hi = t_hi.min(t1.max(t2));
        } else if (s * sin_t).abs() > 1.0 {
            return 0.0;
        }
        (t_hi - t_lo).max(0.0)
    }

    #[test]
    fn adjoint_consistency_for_all_kinds() {
        let specs = [
            OperatorSpec::Diagonal {
                decay: 1.5,
                size: 9,
            },
            OperatorSpec::Convolution1d {
                kernel: vec![0.6, 0.3, 0.1],
                length: 9,
            },
            OperatorSpec::Radon2d {
                side: 4,
                angles: 5,
                detectors: None,
            },
        ];
        for spec in &specs {
            let m = build_operator(spec).unwrap();
            let mut rng = rng_for(11, 0);
            let x: Vec<f64> = (0..m.cols()).map(|_| rng.sample(StandardNormal)).collect();
            let y: Vec<f64> = (0..m.rows()).map(|_| rng.sample(StandardNormal)).collect();
            let ax = m.matvec(&x).unwrap();
            let aty = m.matvec_transpose(&y).unwrap();
            let lhs: f64 = ax.iter().zip(&y).map(|(a, b)| a * b).sum();
            let rhs: f64 = x.iter().zip(&aty).map(|(a, b)| a * b).sum();
            let scale = m.max_abs()
                * x.iter().map(|v| v * v).sum::<f64>().sqrt()
                * y.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((lhs - rhs).abs() <= 1e-10 * scale.max(1.0));
        }
    }

    #[test]
    fn diagonal_svd_recovers_decay_exactly() {
        let spec = OperatorSpec::Diagonal {
            decay: 1.0,
            size: 12,
        };
        let sys = compute_svd(&build_operator(&spec).unwrap(), 0.0).unwrap();
        for (n, s) in sys.sigma().iter().enumerate() {
            assert!((s - 1.0 / (n + 1) as f64).abs() <= 1e-12);
        }
    }

    #[test]
    fn phantom_is_deterministic_and_clipped() {
        let a = generate_phantom(16, 42).unwrap();
        let b = generate_phantom(16, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.pixels().iter().all(|v| (0.0..=1.0).contains(v)));
        assert_ne!(a, generate_phantom(16, 43).unwrap());
    }

    #[test]
    fn phantom_exports_round_trip_through_matrix_csv_and_pgm() {
        let p = generate_phantom(8, 7).unwrap();
        let m = p.to_matrix();
        let back = DenseMatrix::from_csv_str(&m.to_csv_string()).unwrap();
        assert_eq!(m, back);
        let mut pgm = Vec::new();
        p.write_pgm(&mut pgm).unwrap();
        assert!(pgm.starts_with(b"P5\n8 8\n65535\n"));
        assert_eq!(pgm.len(), b"P5\n8 8\n65535\n".len() + 2 * 64);
    }

    #[test]
    fn phantom_rejects_tiny_grids() {
        assert!(generate_phantom(3, 0).is_err());
    }

    #[test]
    fn corpus_is_deterministic_and_guards_trace_class() {
        let spec = OperatorSpec::Diagonal {
            decay: 1.0,
            size: 6,
        };
        let sys = compute_svd(&build_operator(&spec).unwrap(), 0.0).unwrap();
        let a = sample_data_corpus(&spec, &sys, 2.0, 1, 5).unwrap();
        let b = sample_data_corpus(&spec, &sys, 2.0, 1, 5).unwrap();
        assert_eq!(a, b);
        match sample_data_corpus(&spec, &sys, 1.0, 1, 5) {
            Err(Error::TraceClassViolated { q }) => assert_eq!(q, 1.0),
            other => panic!("expected trace-class guard, got {other:?}"),
        }
    }
}
