//! The singular system type, its spectral operations, and the binary
//! `.svdsys` container.
//!
//! A `SingularSystem` is immutable after construction and safe to share
//! across threads.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{dot, DenseMatrix};

const MAGIC: &[u8; 8] = b"SVDSYS\0\0";
const FORMAT_VERSION: u32 = 1;

/// Singular system {σ_n; u_n, v_n} of a discretized forward operator.
///
/// `u` holds the domain-side vectors as columns (dim X × n_modes), `v` the
/// range-side vectors (dim Y × n_modes). σ is strictly positive and
/// non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSystem {
    sigma: Vec<f64>,
    u: DenseMatrix,
    v: DenseMatrix,
}

impl SingularSystem {
    pub fn from_parts(sigma: Vec<f64>, u: DenseMatrix, v: DenseMatrix) -> Result<Self> {
        let n = sigma.len();
        if n == 0 {
            return Err(Error::EmptySpectrum);
        }
        if u.cols() != n || v.cols() != n {
            return Err(Error::DimensionMismatch {
                what: "singular vector columns",
                expected: n,
                got: u.cols().min(v.cols()),
            });
        }
        if let Some(i) = sigma.iter().position(|s| *s <= 0.0 || !s.is_finite()) {
            return Err(Error::NotFinite {
                what: "singular values",
                index: i,
            });
        }
        if sigma.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(
                "singular values must be non-increasing".into(),
            ));
        }
        Ok(Self { sigma, u, v })
    }

    pub fn n_modes(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn u(&self) -> &DenseMatrix {
        &self.u
    }

    pub fn v(&self) -> &DenseMatrix {
        &self.v
    }

    /// Dimension of the domain X.
    pub fn dim_x(&self) -> usize {
        self.u.rows()
    }

    /// Dimension of the measurement space Y.
    pub fn dim_y(&self) -> usize {
        self.v.rows()
    }

    /// ⟨x, u_n⟩ for every retained mode.
    pub fn project_onto_u(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim_x() {
            return Err(Error::DimensionMismatch {
                what: "domain vector",
                expected: self.dim_x(),
                got: x.len(),
            });
        }
        Ok(column_projections(&self.u, x))
    }

    /// ⟨y, v_n⟩ for every retained mode.
    pub fn project_onto_v(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.dim_y() {
            return Err(Error::DimensionMismatch {
                what: "measurement vector",
                expected: self.dim_y(),
                got: y.len(),
            });
        }
        Ok(column_projections(&self.v, y))
    }

    /// Expand mode coefficients in the u-basis: Σ c_n u_n.
    pub fn expand_in_u(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        self.expand(&self.u, coeffs)
    }

    /// Expand mode coefficients in the v-basis: Σ c_n v_n.
    pub fn expand_in_v(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        self.expand(&self.v, coeffs)
    }

    fn expand(&self, basis: &DenseMatrix, coeffs: &[f64]) -> Result<Vec<f64>> {
        if coeffs.len() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                what: "mode coefficients",
                expected: self.n_modes(),
                got: coeffs.len(),
            });
        }
        let mut out = vec![0.0; basis.rows()];
        for (r, o) in out.iter_mut().enumerate() {
            *o = dot(basis.row(r), coeffs);
        }
        Ok(out)
    }

    /// Swap the roles of U and V (the singular system of the transpose).
    pub fn swapped(self) -> Self {
        Self {
            sigma: self.sigma,
            u: self.v,
            v: self.u,
        }
    }

    /// Max absolute deviation of UᵀU and VᵀV from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        gram_defect(&self.u).max(gram_defect(&self.v))
    }

    /// Worst violation of A u_n = σ_n v_n against the source matrix,
    /// normalized by σ_1.
    pub fn map_defect(&self, a: &DenseMatrix) -> f64 {
        let mut worst = 0.0f64;
        for m in 0..self.n_modes() {
            let u_m: Vec<f64> = (0..self.dim_x()).map(|r| self.u.at(r, m)).collect();
            let au = match a.matvec(&u_m) {
                Ok(v) => v,
                Err(_) => return f64::INFINITY,
            };
            for (r, val) in au.iter().enumerate() {
                worst = worst.max((val - self.sigma[m] * self.v.at(r, m)).abs());
            }
        }
        worst / self.sigma[0]
    }

    /// Max absolute entry of A − V diag(σ) Uᵀ.
    pub fn reconstruction_defect(&self, a: &DenseMatrix) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                let mut acc = 0.0;
                for (m, s) in self.sigma.iter().enumerate() {
                    acc += s * self.v.at(r, m) * self.u.at(c, m);
                }
                worst = worst.max((a.at(r, c) - acc).abs());
            }
        }
        worst
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(file);
        self.write_to(&mut w)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let mut r = std::io::BufReader::new(file);
        Self::read_from(&mut r)
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        for dim in [
            self.dim_x() as u64,
            self.dim_y() as u64,
            self.n_modes() as u64,
        ] {
            w.write_all(&dim.to_le_bytes())?;
        }
        for s in &self.sigma {
            w.write_all(&s.to_le_bytes())?;
        }
        for e in self.u.entries() {
            w.write_all(&e.to_le_bytes())?;
        }
        for e in self.v.entries() {
            w.write_all(&e.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let mut cursor = Cursor {
            inner: r,
            offset: 0,
        };
        let mut magic = [0u8; 8];
        cursor.fill(&mut magic, "magic string")?;
        if &magic != MAGIC {
            return Err(Error::Parse {
                offset: 0,
                what: "bad magic string".into(),
            });
        }
        let version = u32::from_le_bytes(cursor.array("format version")?);
        if version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion {
                found: version,
                supported: FORMAT_VERSION,
            });
        }
        let dim_x = cursor.u64_field("domain dimension")? as usize;
        let dim_y = cursor.u64_field("range dimension")? as usize;
        let n_modes = cursor.u64_field("mode count")? as usize;
        if n_modes == 0 || dim_x == 0 || dim_y == 0 {
            return Err(Error::Parse {
                offset: cursor.offset,
                what: "dimensions must be positive".into(),
            });
        }
        let limit = 4096usize * 4096;
        if n_modes > dim_x.max(dim_y)
            || dim_x.checked_mul(n_modes).is_none_or(|e| e > limit)
            || dim_y.checked_mul(n_modes).is_none_or(|e| e > limit)
        {
            return Err(Error::Parse {
                offset: cursor.offset,
                what: "implausible dimensions".into(),
            });
        }
        let sigma = cursor.f64_block(n_modes, "singular values")?;
        let u = cursor.f64_block(dim_x * n_modes, "u entries")?;
        let v = cursor.f64_block(dim_y * n_modes, "v entries")?;
        Self::from_parts(
            sigma,
            DenseMatrix::new(dim_x, n_modes, u)?,
            DenseMatrix::new(dim_y, n_modes, v)?,
        )
    }
}

struct Cursor<'a, R: Read> {
    inner: &'a mut R,
    offset: u64,
}

impl<R: Read> Cursor<'_, R> {
    fn fill(&mut self, buf: &mut [u8], what: &str) -> Result<()> {
        self.inner.read_exact(buf).map_err(|e| {
            if e.kind() == std::io::ErrorKind::UnexpectedEof {
                Error::Parse {
                    offset: self.offset,
                    what: format!("truncated while reading {what}"),
                }
            } else {
                Error::Io(e)
            }
        })?;
        self.offset += buf.len() as u64;
        Ok(())
    }

    fn array<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.fill(&mut buf, what)?;
        Ok(buf)
    }

    fn u64_field(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.array(what)?))
    }

    fn f64_block(&mut self, count: usize, what: &str) -> Result<Vec<f64>> {
        let mut bytes = vec![0u8; count * 8];
        self.fill(&mut bytes, what)?;
        Ok(bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }
}

fn column_projections(basis: &DenseMatrix, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; basis.cols()];
    for (r, &xr) in x.iter().enumerate() {
        for (m, o) in out.iter_mut().enumerate() {
            *o += basis.at(r, m) * xr;
        }
    }
    out
}

fn gram_defect(basis: &DenseMatrix) -> f64 {
    let n = basis.cols();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for r in 0..basis.rows() {
                acc += basis.at(r, i) * basis.at(r, j);
            }
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((acc - target).abs());
        }
    }
    worst
}

/// Forward map through the retained spectrum: Σ σ_n ⟨x, u_n⟩ v_n.
///
/// The null-space component of `x` is annihilated.
pub fn apply_forward(sys: &SingularSystem, x: &[f64]) -> Result<Vec<f64>> {
    let mut coeffs = sys.project_onto_u(x)?;
    for (c, s) in coeffs.iter_mut().zip(sys.sigma()) {
        *c *= s;
    }
    sys.expand_in_v(&coeffs)
}

/// Orthogonal projection onto span{u_n}: Σ ⟨x, u_n⟩ u_n. Idempotent.
pub fn project_row_space(sys: &SingularSystem, x: &[f64]) -> Result<Vec<f64>> {
    let coeffs = sys.project_onto_u(x)?;
    sys.expand_in_u(&coeffs)
}
