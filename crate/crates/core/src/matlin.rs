//! Dense complex matrix kernel: arithmetic helpers, tolerance-based rank,
//! Hermitian eigendecomposition, Takagi factorization, Sylvester inertia.
//!
//! Everything here works on `nalgebra` dynamic matrices over `Complex<f64>`.
//! The decompositions are backed by `nalgebra` (Hermitian eigensolver, SVD,
//! Schur); the Takagi factorization and the inertia transform are assembled
//! on top of them so that the exact output contracts hold.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::{Error, Result};

/// Complex scalar used throughout.
pub type Cx = Complex<f64>;
/// Dense complex matrix, the universal carrier.
pub type CMatrix = DMatrix<Cx>;
/// Dense real matrix.
pub type RMatrix = DMatrix<f64>;
/// Dense complex column vector.
pub type CVector = DVector<Cx>;

/// Shorthand complex constructor.
#[inline]
pub fn cx(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

/// Numerical thresholds used by all structure decisions.
///
/// `rank_tol` is relative to the largest singular value, `eig_cluster_tol`
/// is an absolute gap used when grouping eigenvalues, `residual_tol` is the
/// acceptance threshold for certificate and reconstruction residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rank_tol: f64,
    pub eig_cluster_tol: f64,
    pub residual_tol: f64,
}

impl Tolerances {
    /// Defaults for an `n`-dimensional problem on unit-normalized inputs.
    pub fn default_for(n: usize) -> Self {
        Tolerances {
            rank_tol: (n.max(1) as f64) * f64::EPSILON * 64.0,
            eig_cluster_tol: 1e-6,
            residual_tol: 1e-8,
        }
    }

    /// All thresholds strictly positive and `rank_tol < 1`.
    pub fn validate(&self) -> Result<()> {
        if !(self.rank_tol > 0.0 && self.rank_tol < 1.0)
            || !(self.eig_cluster_tol > 0.0)
            || !(self.residual_tol > 0.0)
        {
            return Err(Error::BadInput("invalid tolerances".into()));
        }
        Ok(())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::default_for(4)
    }
}

/// Result of Sylvester's inertia reduction `Q* A Q = -I_p + I_r + 0`.
#[derive(Debug, Clone)]
pub struct InertiaTriple {
    pub n_neg: usize,
    pub n_pos: usize,
    pub n_zero: usize,
    /// Nonsingular transform with `Q* A Q = -I_p ⊕ I_r ⊕ 0`.
    pub transform: CMatrix,
}

impl InertiaTriple {
    /// The diagonal matrix `-I_p ⊕ I_r ⊕ 0`.
    pub fn matrix(&self) -> CMatrix {
        let n = self.n_neg + self.n_pos + self.n_zero;
        CMatrix::from_fn(n, n, |i, j| {
            if i != j {
                Cx::default()
            } else if i < self.n_neg {
                cx(-1.0, 0.0)
            } else if i < self.n_neg + self.n_pos {
                cx(1.0, 0.0)
            } else {
                Cx::default()
            }
        })
    }

    /// Signature as `(p, r, z)`.
    pub fn signature(&self) -> (usize, usize, usize) {
        (self.n_neg, self.n_pos, self.n_zero)
    }
}

// ── Small helpers ───────────────────────────────────────────────────

/// Entrywise complex conjugate (no transpose).
pub fn conj_mat(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

/// Frobenius norm.
pub fn fro(m: &CMatrix) -> f64 {
    m.norm()
}

/// `‖M − M*‖` (deviation from Hermitian).
pub fn herm_deviation(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

/// `‖M − M^T‖` (deviation from symmetric).
pub fn sym_deviation(m: &CMatrix) -> f64 {
    (m - m.transpose()).norm()
}

/// Error unless `m` is square and Hermitian within `tol.residual_tol` (scaled).
pub fn check_hermitian(m: &CMatrix, tol: &Tolerances) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::SizeMismatch(m.nrows(), m.ncols()));
    }
    let dev = herm_deviation(m);
    let scale = 1.0 + fro(m);
    if dev > tol.residual_tol * scale {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// Error unless `m` is square and symmetric within `tol.residual_tol` (scaled).
pub fn check_symmetric(m: &CMatrix, tol: &Tolerances) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::SizeMismatch(m.nrows(), m.ncols()));
    }
    let dev = sym_deviation(m);
    let scale = 1.0 + fro(m);
    if dev > tol.residual_tol * scale {
        return Err(Error::NotSymmetric(dev));
    }
    Ok(())
}

/// Block-diagonal direct sum of the given matrices.
pub fn direct_sum(blocks: &[CMatrix]) -> CMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let m: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(n, m);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Backward identity `E_m` (ones on the anti-diagonal).
pub fn backward_identity(m: usize) -> CMatrix {
    CMatrix::from_fn(m, m, |i, j| {
        if i + j == m - 1 {
            cx(1.0, 0.0)
        } else {
            Cx::default()
        }
    })
}

/// Build a matrix from nested row data.
pub fn from_rows(rows: &[Vec<Cx>]) -> CMatrix {
    let r = rows.len();
    let c = if r == 0 { 0 } else { rows[0].len() };
    CMatrix::from_fn(r, c, |i, j| rows[i][j])
}

/// Greedy clustering of an arbitrary value list by absolute gap.
///
/// Returns groups of indices; two values land in the same group when they
/// are within `gap` of some chain of values already in it.
pub fn cluster_by_gap(values: &[Cx], gap: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    // Deterministic order: by magnitude then argument (ties broken by index).
    order.sort_by(|&a, &b| {
        let (va, vb) = (values[a], values[b]);
        va.norm()
            .partial_cmp(&vb.norm())
            .unwrap()
            .then(va.arg().partial_cmp(&vb.arg()).unwrap())
            .then(a.cmp(&b))
    });
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for idx in order {
        let v = values[idx];
        let mut placed = false;
        for g in groups.iter_mut() {
            if g.iter().any(|&k| (values[k] - v).norm() <= gap) {
                g.push(idx);
                placed = true;
                break;
            }
        }
        if !placed {
            groups.push(vec![idx]);
        }
    }
    groups
}

/// Complex matrix inverse through LU; `Singular` if it fails.
pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    m.clone().lu().try_inverse().ok_or(Error::Singular)
}

/// Orthonormal basis of the nullspace of `m`, rank decided by `rank_tol`.
pub fn nullspace(m: &CMatrix, tol: &Tolerances) -> CMatrix {
    let ncols = m.ncols();
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("svd v_t");
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let thresh = if smax == 0.0 { 0.0 } else { tol.rank_tol * smax };
    let mut cols: Vec<usize> = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s <= thresh {
            cols.push(k);
        }
    }
    // Rows of V^T beyond the recorded singular values also span the kernel.
    for k in svd.singular_values.len()..vt.nrows() {
        cols.push(k);
    }
    let mut out = CMatrix::zeros(ncols, cols.len());
    for (j, &k) in cols.iter().enumerate() {
        for i in 0..ncols {
            out[(i, j)] = vt[(k, i)].conj();
        }
    }
    out
}

// ── Spec operations ─────────────────────────────────────────────────

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues sorted ascending and a unitary `Q` with
/// `A Q = Q diag(eigenvalues)`.
pub fn hermitian_eigendecomposition(
    a: &CMatrix,
    tol: &Tolerances,
) -> Result<(Vec<f64>, CMatrix)> {
    check_hermitian(a, tol)?;
    let n = a.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let evals: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut q = CMatrix::zeros(n, n);
    for (j, &i) in idx.iter().enumerate() {
        let mut col = eig.eigenvectors.column(i).into_owned();
        // Canonical phase: the first entry within a whisker of the largest
        // magnitude becomes real positive. Keeps outputs deterministic.
        let mut mx = 0.0f64;
        for v in col.iter() {
            mx = mx.max(v.norm());
        }
        if mx > 0.0 {
            let pivot = *col
                .iter()
                .find(|v| v.norm() >= mx * (1.0 - 1e-9))
                .expect("pivot");
            let phase = pivot / cx(pivot.norm(), 0.0);
            col /= phase;
        }
        q.set_column(j, &col);
    }
    Ok((evals, q))
}

/// Autonne-Takagi factorization of a complex symmetric matrix.
///
/// Returns a unitary `U`, the nonnegative diagonal values in descending
/// order, and the numerical rank `m`, with `U^T B U = diag(Λ, 0)`.
///
/// Works through the Hermitian eigendecomposition of `conj(B)·B`: on each
/// positive eigenvalue cluster the conjugate-linear map `w ↦ conj(B w)/σ`
/// is an involution whose fixed subspace carries a real orthonormal basis;
/// those fixed vectors diagonalize `B` under T-congruence.
pub fn takagi_factorization(
    b: &CMatrix,
    tol: &Tolerances,
) -> Result<(CMatrix, Vec<f64>, usize)> {
    check_symmetric(b, tol)?;
    let n = b.nrows();
    if n == 0 {
        return Ok((CMatrix::zeros(0, 0), Vec::new(), 0));
    }
    let bbar = conj_mat(b);
    let psd = &bbar * b; // = B* B for symmetric B, Hermitian PSD
    let psd = (&psd + psd.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(psd);
    // Sort descending by eigenvalue (sigma^2).
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let sigmas: Vec<f64> = idx
        .iter()
        .map(|&i| eig.eigenvalues[i].max(0.0).sqrt())
        .collect();
    let smax = sigmas.first().cloned().unwrap_or(0.0);
    let zero_thresh = tol.rank_tol * smax;

    // Cluster the positive sigmas by absolute gap; everything at or below
    // the rank threshold is the kernel.
    let mut clusters: Vec<(f64, Vec<usize>)> = Vec::new(); // (sigma, positions in idx)
    let mut kernel: Vec<usize> = Vec::new();
    for (pos, &s) in sigmas.iter().enumerate() {
        if smax == 0.0 || s <= zero_thresh {
            kernel.push(pos);
        } else if let Some(last) = clusters.last_mut() {
            if (last.0 - s).abs() <= tol.eig_cluster_tol {
                last.1.push(pos);
            } else {
                clusters.push((s, vec![pos]));
            }
        } else {
            clusters.push((s, vec![pos]));
        }
    }

    let mut columns: Vec<CVector> = Vec::new();
    let mut diag: Vec<f64> = Vec::new();
    for (_, members) in &clusters {
        let d = members.len();
        let mut v = CMatrix::zeros(n, d);
        for (j, &pos) in members.iter().enumerate() {
            v.set_column(j, &eig.eigenvectors.column(idx[pos]));
        }
        let sigma = members.iter().map(|&p| sigmas[p]).sum::<f64>() / d as f64;
        // Conjugate-linear involution in cluster coordinates: a ↦ J conj(a).
        let j_model = (v.adjoint() * &bbar * conj_mat(&v)).scale(1.0 / sigma);
        let jr = j_model.map(|z| z.re);
        let ji = j_model.map(|z| z.im);
        // Fixed points J conj(a) = a as a real kernel problem.
        let mut k = RMatrix::zeros(2 * d, 2 * d);
        k.view_mut((0, 0), (d, d)).copy_from(&(&jr - RMatrix::identity(d, d)));
        k.view_mut((0, d), (d, d)).copy_from(&ji);
        k.view_mut((d, 0), (d, d)).copy_from(&ji);
        k.view_mut((d, d), (d, d)).copy_from(&(-&jr - RMatrix::identity(d, d)));
        let svd = k.svd(false, true);
        let vt = svd.v_t.expect("svd v_t");
        // The d right singular vectors with smallest singular values span the
        // fixed space; they are real-orthonormal, hence Hermitian-orthonormal
        // on the fixed space.
        for row in (d..2 * d).rev() {
            let mut a = CVector::zeros(d);
            for t in 0..d {
                a[t] = cx(vt[(row, t)], vt[(row, t + d)]);
            }
            let w = &v * a;
            columns.push(w);
            diag.push(sigma);
        }
    }
    let m = columns.len();
    for &pos in &kernel {
        columns.push(eig.eigenvectors.column(idx[pos]).into_owned());
        diag.push(0.0);
    }
    let mut u = CMatrix::zeros(n, n);
    for (j, col) in columns.iter().enumerate() {
        u.set_column(j, col);
    }
    // Refresh the diagonal from the actual congruence and validate.
    let d_actual = u.transpose() * b * &u;
    let mut values = Vec::with_capacity(n);
    let mut resid: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j && i < m {
                values.push(d_actual[(i, i)].re);
                resid = resid.max(d_actual[(i, i)].im.abs());
            } else {
                resid = resid.max(d_actual[(i, j)].norm());
            }
        }
    }
    values.truncate(m);
    let scale = 1.0 + fro(b);
    if resid > tol.residual_tol * scale {
        return Err(Error::ToleranceBreakdown(format!(
            "takagi residual {resid:.3e}"
        )));
    }
    // Unitarity check.
    let udev = (u.adjoint() * &u - CMatrix::identity(n, n)).norm();
    if udev > tol.residual_tol * (n as f64) {
        return Err(Error::ToleranceBreakdown(format!(
            "takagi factor not unitary ({udev:.3e})"
        )));
    }
    for i in 0..m {
        values[i] = values[i].max(0.0);
    }
    Ok((u, values, m))
}

/// Number of singular values above an absolute threshold. Used for rank
/// staircases of matrix powers, where the threshold must be taken relative
/// to the scale of the base matrix, not of the (possibly vanishing) power.
pub fn rank_abs(m: &CMatrix, thresh: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = m.clone().svd(false, false);
    svd.singular_values.iter().filter(|&&s| s > thresh).count()
}

/// Orthonormal basis of the nullspace with an absolute singular value cut.
pub fn nullspace_abs(m: &CMatrix, thresh: f64) -> CMatrix {
    let ncols = m.ncols();
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("svd v_t");
    let mut cols: Vec<usize> = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s <= thresh {
            cols.push(k);
        }
    }
    for k in svd.singular_values.len()..vt.nrows() {
        cols.push(k);
    }
    let mut out = CMatrix::zeros(ncols, cols.len());
    for (j, &k) in cols.iter().enumerate() {
        for i in 0..ncols {
            out[(i, j)] = vt[(k, i)].conj();
        }
    }
    out
}

/// Number of singular values above `rank_tol` times the largest one.
pub fn numerical_rank(m: &CMatrix, tol: &Tolerances) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if smax == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > tol.rank_tol * smax)
        .count()
}

/// Sylvester inertia reduction of a Hermitian matrix.
///
/// The transform columns are orthogonal eigenvectors scaled by
/// `1/sqrt(|λ|)` (unit norm on the kernel), ordered so that
/// `Q* A Q = -I_p ⊕ I_r ⊕ 0`.
pub fn sylvester_inertia(a: &CMatrix, tol: &Tolerances) -> Result<InertiaTriple> {
    let (evals, q) = hermitian_eigendecomposition(a, tol)?;
    let n = a.nrows();
    let mut neg: Vec<usize> = Vec::new();
    let mut pos: Vec<usize> = Vec::new();
    let mut zer: Vec<usize> = Vec::new();
    for (i, &l) in evals.iter().enumerate() {
        if l.abs() <= tol.eig_cluster_tol {
            zer.push(i);
        } else if l < 0.0 {
            neg.push(i);
        } else {
            pos.push(i);
        }
    }
    let mut t = CMatrix::zeros(n, n);
    let mut col = 0;
    for &i in neg.iter().chain(pos.iter()) {
        let s = 1.0 / evals[i].abs().sqrt();
        let v = q.column(i).into_owned().scale(s);
        t.set_column(col, &v);
        col += 1;
    }
    for &i in &zer {
        t.set_column(col, &q.column(i).into_owned());
        col += 1;
    }
    Ok(InertiaTriple {
        n_neg: neg.len(),
        n_pos: pos.len(),
        n_zero: zer.len(),
        transform: t,
    })
}

/// Principal matrix square root through the complex Schur form.
///
/// Fails when the spectrum touches the closed negative real axis in a way
/// that breaks the Parlett recurrence.
pub fn principal_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let n = m.nrows();
    if n == 0 {
        return Ok(m.clone());
    }
    let schur = m
        .clone()
        .try_schur(1e-14, 100_000)
        .ok_or_else(|| Error::ToleranceBreakdown("schur did not converge".into()))?;
    let (q, t) = schur.unpack();
    let mut s = CMatrix::zeros(n, n);
    for i in 0..n {
        s[(i, i)] = t[(i, i)].sqrt();
    }
    for off in 1..n {
        for i in 0..n - off {
            let j = i + off;
            let mut acc = t[(i, j)];
            for k in i + 1..j {
                acc -= s[(i, k)] * s[(k, j)];
            }
            let den = s[(i, i)] + s[(j, j)];
            if den.norm() < 1e-14 {
                return Err(Error::ToleranceBreakdown(
                    "square root branch collision".into(),
                ));
            }
            s[(i, j)] = acc / den;
        }
    }
    Ok(&q * s * q.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default_for(4)
    }

    #[test]
    fn hermitian_eig_identity() {
        let a = CMatrix::identity(2, 2);
        let (ev, q) = hermitian_eigendecomposition(&a, &tol()).unwrap();
        assert_eq!(ev, vec![1.0, 1.0]);
        assert!((q.adjoint() * &q - CMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn hermitian_eig_h2_at_zero() {
        // (1/2)[[1, i], [-i, 1]] has eigenvalues 0 and 1.
        let a = from_rows(&[
            vec![cx(0.5, 0.0), cx(0.0, 0.5)],
            vec![cx(0.0, -0.5), cx(0.5, 0.0)],
        ]);
        let (ev, q) = hermitian_eigendecomposition(&a, &tol()).unwrap();
        assert!((ev[0] - 0.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
        let d = CMatrix::from_fn(2, 2, |i, j| if i == j { cx(ev[i], 0.0) } else { Cx::default() });
        assert!((&a * &q - &q * d).norm() < 1e-12);
    }

    #[test]
    fn hermitian_eig_h3_at_zero() {
        // (1/2)[[0,1+i,0],[1-i,0,1+i],[0,1-i,0]] has eigenvalues -1, 0, 1.
        let a = from_rows(&[
            vec![Cx::default(), cx(0.5, 0.5), Cx::default()],
            vec![cx(0.5, -0.5), Cx::default(), cx(0.5, 0.5)],
            vec![Cx::default(), cx(0.5, -0.5), Cx::default()],
        ]);
        let (ev, _) = hermitian_eigendecomposition(&a, &tol()).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-12);
        assert!(ev[1].abs() < 1e-12);
        assert!((ev[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = from_rows(&[
            vec![cx(0.0, 0.0), cx(1.0, 0.0)],
            vec![cx(0.0, 0.0), cx(1.0, 0.0)],
        ]);
        assert!(matches!(
            hermitian_eigendecomposition(&a, &tol()),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn takagi_identity() {
        let b = CMatrix::identity(2, 2);
        let (u, d, m) = takagi_factorization(&b, &tol()).unwrap();
        assert_eq!(m, 2);
        assert!((d[0] - 1.0).abs() < 1e-12 && (d[1] - 1.0).abs() < 1e-12);
        assert!((u.adjoint() * &u - CMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn takagi_backward_identity() {
        let b = backward_identity(2);
        let (u, d, m) = takagi_factorization(&b, &tol()).unwrap();
        assert_eq!(m, 2);
        let recon = u.transpose() * &b * &u;
        assert!((recon - CMatrix::from_diagonal(&CVector::from_fn(2, |i, _| cx(d[i], 0.0)))).norm() < 1e-12);
    }

    #[test]
    fn takagi_diagonal_singular() {
        let b = from_rows(&[
            vec![cx(4.0, 0.0), Cx::default()],
            vec![Cx::default(), Cx::default()],
        ]);
        let (_, d, m) = takagi_factorization(&b, &tol()).unwrap();
        assert_eq!(m, 1);
        assert!((d[0] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rank_basics() {
        let t = tol();
        assert_eq!(numerical_rank(&CMatrix::zeros(3, 3), &t), 0);
        assert_eq!(numerical_rank(&CMatrix::identity(4, 4), &t), 4);
        // H_2(0) has rank 1.
        let a = from_rows(&[
            vec![cx(0.5, 0.0), cx(0.0, 0.5)],
            vec![cx(0.0, -0.5), cx(0.5, 0.0)],
        ]);
        assert_eq!(numerical_rank(&a, &t), 1);
    }

    #[test]
    fn inertia_diagonal() {
        let a = CMatrix::from_diagonal(&CVector::from_vec(vec![
            cx(3.0, 0.0),
            cx(-5.0, 0.0),
            Cx::default(),
        ]));
        let it = sylvester_inertia(&a, &tol()).unwrap();
        assert_eq!(it.signature(), (1, 1, 1));
        let r = it.transform.adjoint() * &a * &it.transform;
        assert!((r - it.matrix()).norm() < 1e-12);
    }

    #[test]
    fn principal_sqrt_roundtrip() {
        let m = from_rows(&[
            vec![cx(2.0, 1.0), cx(0.3, -0.2)],
            vec![cx(0.1, 0.4), cx(1.5, -0.8)],
        ]);
        let s = principal_sqrt(&m).unwrap();
        assert!((&s * &s - &m).norm() < 1e-10);
    }
}
