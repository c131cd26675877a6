//! Hermitian operator bases on `k` qunits of radix `n`.
//!
//! The single-qunit generator set is the identity followed by the
//! generalized Gell-Mann matrices (symmetric pairs, antisymmetric pairs,
//! diagonal traceless), normalized so that `tr(g_a g_b) = 2 delta_ab` for
//! the traceless ones. Multi-qunit elements are tensor products in
//! lexicographic label order, qunit 0 being the most significant digit.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{HermitianOperator, Matrix};

/// Largest full-space dimension `n^k` accepted by default.
pub const DEFAULT_MAX_DIM: usize = 64;

/// Relative singular-value cutoff used when solving for frame coefficients.
pub const FRAME_SV_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QunitSpace {
    radix: usize,
    count: usize,
    dim: usize,
}

impl QunitSpace {
    pub fn new(radix: usize, count: usize) -> Result<Self> {
        if radix < 2 {
            return invalid(format!("radix must be at least 2, got {radix}"));
        }
        if count < 1 {
            return invalid("need at least one qunit");
        }
        let dim = u32::try_from(count)
            .ok()
            .and_then(|k| radix.checked_pow(k))
            .ok_or_else(|| Error::ResourceLimit(format!("{radix}^{count} overflows")))?;
        Ok(Self { radix, count, dim })
    }

    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// `n^k`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis elements, `n^{2k}`.
    pub fn basis_len(&self) -> usize {
        self.dim * self.dim
    }

    /// Base-`n` digits of a computational index, most significant first.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut d = vec![0; self.count];
        for slot in d.iter_mut().rev() {
            *slot = index % self.radix;
            index /= self.radix;
        }
        d
    }

    pub fn check_cap(&self, max_dim: usize) -> Result<()> {
        if self.dim > max_dim {
            return Err(Error::ResourceLimit(format!(
                "space dimension {}^{} = {} exceeds cap {max_dim}",
                self.radix, self.count, self.dim
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct HermitianBasis {
    pub space: QunitSpace,
    pub elements: Vec<HermitianOperator>,
    /// One single-qunit generator index per qunit position (0 = identity).
    pub labels: Vec<Vec<usize>>,
}

impl HermitianBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Pairwise trace inner products `tr(B_I B_J)`.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        self.elements
            .iter()
            .map(|a| self.elements.iter().map(|b| a.trace_inner(b)).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameDecomposition {
    pub coefficients: Vec<f64>,
    pub residual_norm: f64,
}

/// Identity plus the `n^2 - 1` generalized Gell-Mann matrices.
pub fn single_qunit_generators(n: usize) -> Vec<Matrix> {
    let unit = |i: usize, j: usize, z: Complex64| {
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        m[(i, j)] = z;
        m
    };
    let one = Complex64::new(1.0, 0.0);
    let i_unit = Complex64::new(0.0, 1.0);

    let mut out = vec![DMatrix::identity(n, n)];
    for j in 0..n {
        for k in j + 1..n {
            out.push(unit(j, k, one) + unit(k, j, one));
        }
    }
    for j in 0..n {
        for k in j + 1..n {
            out.push(unit(j, k, -i_unit) + unit(k, j, i_unit));
        }
    }
    for l in 1..n {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let diag = DVector::from_fn(n, |j, _| match j.cmp(&l) {
            std::cmp::Ordering::Less => Complex64::new(norm, 0.0),
            std::cmp::Ordering::Equal => Complex64::new(-(l as f64) * norm, 0.0),
            std::cmp::Ordering::Greater => Complex64::new(0.0, 0.0),
        });
        out.push(DMatrix::from_diagonal(&diag));
    }
    out
}

/// Tensor-product basis of size `n^{2k}`, capped at [`DEFAULT_MAX_DIM`].
pub fn build_basis(space: QunitSpace) -> Result<HermitianBasis> {
    build_basis_capped(space, DEFAULT_MAX_DIM)
}

pub fn build_basis_capped(space: QunitSpace, max_dim: usize) -> Result<HermitianBasis> {
    space.check_cap(max_dim)?;
    let singles = single_qunit_generators(space.radix());
    let per_site = singles.len();
    let total = space.basis_len();

    let mut elements = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    for flat in 0..total {
        let mut label = vec![0; space.count()];
        let mut rest = flat;
        for slot in label.iter_mut().rev() {
            *slot = rest % per_site;
            rest /= per_site;
        }
        let m = label.iter().skip(1).fold(singles[label[0]].clone(), |acc, &g| acc.kronecker(&singles[g]));
        elements.push(HermitianOperator::from_matrix(m)?);
        labels.push(label);
    }
    Ok(HermitianBasis { space, elements, labels })
}

/// Embeds a local operator acting on `targets` (in the given order) into the full space.
pub fn embed_local(local: &HermitianOperator, targets: &[usize], space: QunitSpace) -> Result<HermitianOperator> {
    if targets.is_empty() {
        return invalid("embedding needs at least one target");
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= space.count() {
            return invalid(format!("target {t} out of range for {} qunits", space.count()));
        }
        if targets[..i].contains(&t) {
            return invalid(format!("target {t} repeated"));
        }
    }
    let expected = u32::try_from(targets.len()).ok().and_then(|m| space.radix().checked_pow(m));
    if expected != Some(local.dim()) {
        return invalid(format!(
            "local operator has dim {} but {} targets of radix {} need {:?}",
            local.dim(),
            targets.len(),
            space.radix(),
            expected
        ));
    }

    let n = space.radix();
    let dim = space.dim();
    let digits: Vec<Vec<usize>> = (0..dim).map(|i| space.digits(i)).collect();
    let sub_index = |d: &[usize]| targets.iter().fold(0, |acc, &t| acc * n + d[t]);
    let spectators: Vec<usize> = (0..space.count()).filter(|p| !targets.contains(p)).collect();

    let lm = local.as_matrix();
    let m = DMatrix::from_fn(dim, dim, |r, c| {
        let (dr, dc) = (&digits[r], &digits[c]);
        if spectators.iter().all(|&p| dr[p] == dc[p]) {
            lm[(sub_index(dr), sub_index(dc))]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    HermitianOperator::from_matrix(m)
}

/// Real vectorization under which the dot product equals `tr(AB)`.
pub(crate) fn real_vec(h: &HermitianOperator) -> DVector<f64> {
    let m = h.as_matrix();
    DVector::from_iterator(2 * m.len(), m.iter().flat_map(|z| [z.re, z.im]))
}

/// Minimum-norm least-squares real coefficients of `h` over `frame`.
pub fn decompose_on_frame(h: &HermitianOperator, frame: &[HermitianOperator]) -> Result<FrameDecomposition> {
    if frame.is_empty() {
        return invalid("frame is empty");
    }
    if let Some(f) = frame.iter().find(|f| f.dim() != h.dim()) {
        return invalid(format!("frame element dim {} differs from operator dim {}", f.dim(), h.dim()));
    }
    let rows = 2 * h.dim() * h.dim();
    let mut a = DMatrix::<f64>::zeros(rows, frame.len());
    for (j, f) in frame.iter().enumerate() {
        a.set_column(j, &real_vec(f));
    }
    let b = real_vec(h);

    let svd = a.svd(true, true);
    let sigma_max = svd.singular_values.max();
    let coefficients: Vec<f64> = if sigma_max == 0.0 {
        vec![0.0; frame.len()]
    } else {
        let x = svd
            .solve(&b, FRAME_SV_THRESHOLD * sigma_max)
            .map_err(|e| Error::Numeric(format!("least squares failed: {e}")))?;
        x.iter().copied().collect()
    };

    let approx = reconstruct_raw(&coefficients, frame);
    let residual_norm = (h.as_matrix() - approx).norm();
    Ok(FrameDecomposition { coefficients, residual_norm })
}

fn reconstruct_raw(coefficients: &[f64], frame: &[HermitianOperator]) -> Matrix {
    let n = frame[0].dim();
    coefficients.iter().zip(frame).fold(DMatrix::zeros(n, n), |acc, (&c, f)| acc + f.as_matrix().scale(c))
}

/// `sum_M c_M F_M`.
pub fn reconstruct(dec: &FrameDecomposition, frame: &[HermitianOperator]) -> Result<HermitianOperator> {
    if frame.is_empty() {
        return invalid("frame is empty");
    }
    if dec.coefficients.len() != frame.len() {
        return invalid(format!("{} coefficients for a frame of {}", dec.coefficients.len(), frame.len()));
    }
    if frame.iter().any(|f| f.dim() != frame[0].dim()) {
        return invalid("frame elements differ in dimension");
    }
    HermitianOperator::from_matrix(reconstruct_raw(&dec.coefficients, frame))
}
