//! Consimilarity machinery.
//!
//! Two square matrices `A`, `B` are consimilar when `B = conj(Q)^{-1} A Q`
//! for some nonsingular `Q`. The invariants live in the conjugate-linear map
//! `T(w) = conj(A)·conj(w)`, whose square is the ordinary linear map
//! `conj(A)·A`; the eigenvalues of `A·conj(A)` split into nonnegative real,
//! negative real and conjugate non-real classes, which parameterize the
//! `H`/`K`/`L` blocks of the Hermitian canonical form.
//!
//! The chain engine extracts T-adapted Jordan chains through the double-size
//! matrix `[[0, conj(A)], [A, 0]]` and, for Hermitian input, normalizes them
//! against the bilinear form `u^T v`. The achievable Gram signs are exactly
//! the block signs `ε`, and the normalized chains stack into a complex
//! orthogonal witness.

use crate::matlin::{
    backward_identity, cluster_by_gap, conj_mat, cx, fro, CMatrix, CVector, Cx,
    Tolerances,
};
use crate::{Error, Result};

/// Classes of eigenvalues of `A·conj(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeigenClass {
    /// Eigenvalue `λ² ≥ 0`, parameter `λ ≥ 0`, one `H` block per Jordan block.
    NonnegReal,
    /// Eigenvalue `-μ² < 0`, parameter `μ > 0`; Jordan blocks pair into `K` blocks.
    NegReal,
    /// Non-real pair `ξ², conj(ξ)²`, canonical parameter `ξ`; `L` blocks.
    ComplexPair,
}

/// One block of the coneigenvalue structure.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeigenBlock {
    pub class: ConeigenClass,
    /// `λ ≥ 0`, `μ > 0` or the canonical non-real `ξ` (Re > 0, Im > 0).
    pub parameter: Cx,
    /// Jordan size: an `H` block spans `size` columns, `K`/`L` span `2·size`.
    pub size: usize,
}

impl ConeigenBlock {
    /// Columns this block occupies in the canonical form.
    pub fn dim(&self) -> usize {
        match self.class {
            ConeigenClass::NonnegReal => self.size,
            _ => 2 * self.size,
        }
    }
}

/// Coneigenvalue structure: block data plus the alternating-product ranks
/// that pin the nilpotent part.
#[derive(Debug, Clone)]
pub struct ConeigenStructure {
    pub blocks: Vec<ConeigenBlock>,
    pub alt_ranks: Vec<usize>,
}

impl ConeigenStructure {
    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim()).sum()
    }
}

/// Quasi-Jordan form under consimilarity.
#[derive(Debug, Clone)]
pub struct QuasiJordan {
    pub blocks: Vec<ConeigenBlock>,
    pub matrix: CMatrix,
}

// ── Basic maps ──────────────────────────────────────────────────────

/// `T(w) = conj(A)·conj(w)`, the conjugate-linear map attached to `A`.
pub(crate) fn t_apply(abar: &CMatrix, w: &CVector) -> CVector {
    abar * w.map(|z| z.conj())
}

/// The double-size matrix `[[0, conj(A)], [A, 0]]`.
pub(crate) fn ahat(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut out = CMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, n), (n, n)).copy_from(&conj_mat(a));
    out.view_mut((n, 0), (n, n)).copy_from(a);
    out
}

/// Exact double-size embeddings `([[0, conj A],[A, 0]], [[A1, A2],[A2, -A1]])`
/// for `A = A1 + i A2`.
pub fn double_size_embed(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let hat = ahat(a);
    let mut tilde = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let (re, im) = (a[(i, j)].re, a[(i, j)].im);
            tilde[(i, j)] = cx(re, 0.0);
            tilde[(i, j + n)] = cx(im, 0.0);
            tilde[(i + n, j)] = cx(im, 0.0);
            tilde[(i + n, j + n)] = cx(-re, 0.0);
        }
    }
    (hat, tilde)
}

/// Eigenpairs `(±sqrt(λ_j), [u_j; ±A* u_j / sqrt(λ_j)])` of `[[0, A],[A*, 0]]`
/// for nonsingular `A`, built from the eigenpairs of the positive definite
/// `A A*`.
pub fn double_block_eigenvectors(a: &CMatrix, tol: &Tolerances) -> Result<Vec<(f64, CVector)>> {
    let n = a.nrows();
    if crate::matlin::numerical_rank(a, tol) < n {
        return Err(Error::Singular);
    }
    let aas = a * a.adjoint();
    let aas = (&aas + aas.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(aas);
    let mut out = Vec::with_capacity(2 * n);
    for j in 0..n {
        let lam = eig.eigenvalues[j].max(0.0);
        let s = lam.sqrt();
        let u = eig.eigenvectors.column(j).into_owned();
        let w = (a.adjoint() * &u).scale(1.0 / s);
        for sign in [1.0f64, -1.0] {
            let mut v = CVector::zeros(2 * n);
            v.rows_mut(0, n).copy_from(&u);
            v.rows_mut(n, n).copy_from(&w.scale(sign));
            out.push((sign * s, v));
        }
    }
    Ok(out)
}

/// Ranks of the alternating products `A, A·conj(A), A·conj(A)·A, ...` up to
/// length `2n`. The sequence is eventually constant.
pub fn alternating_rank_sequence(a: &CMatrix, tol: &Tolerances) -> Vec<usize> {
    let n = a.nrows();
    if n == 0 {
        return Vec::new();
    }
    let base = fro(a);
    if base == 0.0 {
        return vec![0; 2 * n];
    }
    let abar = conj_mat(a);
    // Track scaling in log space: prod_true = exp(logc) * prod. Rank cuts
    // are absolute against base^k, the natural norm bound of the product.
    let mut prod = a.clone();
    let mut logc = 0.0f64;
    let mut out = Vec::with_capacity(2 * n);
    for k in 1..=(2 * n) {
        let logthresh = tol.rank_tol.ln() + (k as f64) * base.ln() - logc;
        out.push(crate::matlin::rank_abs(&prod, logthresh.min(700.0).exp()));
        let f = fro(&prod);
        if f > 0.0 {
            prod /= cx(f, 0.0);
            logc += f.ln();
        }
        prod = if k % 2 == 1 { &prod * &abar } else { &prod * a };
    }
    out
}

// ── Spectral grouping of A·conj(A) ──────────────────────────────────

#[derive(Debug, Clone)]
pub(crate) struct SpectralGroup {
    pub class: ConeigenClass,
    /// Canonical parameter: `λ ≥ 0`, `μ > 0`, or `ξ` with Re > 0, Im > 0.
    pub param: Cx,
    /// Jordan sizes at this eigenvalue, one entry per canonical block,
    /// descending.
    pub sizes: Vec<usize>,
}

fn complex_eigenvalues(m: &CMatrix) -> Result<Vec<Cx>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    // Already (numerically) triangular matrices can stall the QR iteration.
    let mut lower = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            lower += m[(i, j)].norm_sqr();
        }
    }
    if lower.sqrt() <= 1e-14 * (1.0 + fro(m)) {
        return Ok((0..n).map(|i| m[(i, i)]).collect());
    }
    let schur = m
        .clone()
        .try_schur(1e-13, 200_000)
        .ok_or_else(|| Error::ToleranceBreakdown("schur did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Rank staircase of `(M - λI)^j`, `j = 1..`, until it stabilizes. Rank cuts
/// are absolute against the j-th power of the base norm.
fn shifted_power_ranks(m: &CMatrix, lambda: Cx, tol: &Tolerances, max_len: usize) -> Vec<usize> {
    let n = m.nrows();
    let shifted = m - CMatrix::identity(n, n) * lambda;
    let base = fro(&shifted).max(1e-300);
    let mut prod = shifted.clone();
    let mut logc = 0.0f64;
    let mut out = Vec::new();
    for k in 1..=max_len {
        let logthresh = tol.rank_tol.ln() + (k as f64) * base.ln() - logc;
        let r = crate::matlin::rank_abs(&prod, logthresh.min(700.0).exp());
        out.push(r);
        if out.len() >= 2 && out[out.len() - 2] == r {
            break;
        }
        let f = fro(&prod);
        if f > 0.0 {
            prod /= cx(f, 0.0);
            logc += f.ln();
        }
        prod = &prod * &shifted;
    }
    out
}

/// Block sizes (descending) from a rank staircase: the number of blocks of
/// size at least `s` is `r_{s-1} - r_s` with `r_0 = n`.
fn sizes_from_staircase(n: usize, ranks: &[usize]) -> Vec<usize> {
    let mut r = vec![n];
    r.extend_from_slice(ranks);
    let last = *r.last().unwrap();
    r.push(last);
    let mut sizes = Vec::new();
    for s in 1..r.len() - 1 {
        let ge_s = r[s - 1].saturating_sub(r[s]);
        let ge_s1 = r[s].saturating_sub(r[s + 1]);
        for _ in 0..ge_s.saturating_sub(ge_s1) {
            sizes.push(s);
        }
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Canonical non-real representative: rotate into Re > 0, Im > 0.
fn canonical_xi(z: Cx) -> Cx {
    let mut w = if z.re < 0.0 { -z } else { z };
    if w.im < 0.0 {
        w = w.conj();
    }
    w
}

fn keep_to_multiplicity(sizes: &mut Vec<usize>, mult: usize) {
    let mut acc = 0;
    let mut keep = 0;
    for (i, &s) in sizes.iter().enumerate() {
        if acc + s <= mult {
            acc += s;
            keep = i + 1;
        } else {
            break;
        }
    }
    sizes.truncate(keep);
}

pub(crate) fn spectral_groups(a: &CMatrix, tol: &Tolerances) -> Result<Vec<SpectralGroup>> {
    spectral_groups_with_gap(a, tol, tol.eig_cluster_tol)
}

/// Defective eigenvalues scatter like `eps^(1/k)` under the QR iteration, so
/// structure extraction retries with widened cluster gaps; this is the
/// gap-parameterized worker.
pub(crate) fn spectral_groups_with_gap(
    a: &CMatrix,
    tol: &Tolerances,
    gap: f64,
) -> Result<Vec<SpectralGroup>> {
    let n = a.nrows();
    let m = a * conj_mat(a);
    let eigs = complex_eigenvalues(&m)?;
    let clusters = cluster_by_gap(&eigs, gap);
    let scale = eigs.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    let axis_tol = gap * scale.max(1.0);

    let reps: Vec<Cx> = clusters
        .iter()
        .map(|c| {
            let s: Cx = c.iter().map(|&i| eigs[i]).sum();
            s / cx(c.len() as f64, 0.0)
        })
        .collect();
    let mut used: Vec<bool> = vec![false; clusters.len()];
    let mut groups: Vec<SpectralGroup> = Vec::new();

    for ci in 0..clusters.len() {
        if used[ci] {
            continue;
        }
        used[ci] = true;
        let rep = reps[ci];
        let mult = clusters[ci].len();
        if rep.norm() <= axis_tol {
            // Nilpotent part: sizes come from the alternating product ranks.
            let alt = alternating_rank_sequence(a, tol);
            let sizes = sizes_from_staircase(n, &alt);
            let total: usize = sizes.iter().sum();
            if total != mult {
                return Err(Error::ToleranceBreakdown(format!(
                    "nilpotent sizes {sizes:?} inconsistent with multiplicity {mult}"
                )));
            }
            if !sizes.is_empty() {
                groups.push(SpectralGroup {
                    class: ConeigenClass::NonnegReal,
                    param: Cx::default(),
                    sizes,
                });
            }
        } else if rep.im.abs() <= axis_tol && rep.re > 0.0 {
            let ranks = shifted_power_ranks(&m, cx(rep.re, 0.0), tol, n + 1);
            let mut sizes = sizes_from_staircase(n, &ranks);
            keep_to_multiplicity(&mut sizes, mult);
            groups.push(SpectralGroup {
                class: ConeigenClass::NonnegReal,
                param: cx(rep.re.sqrt(), 0.0),
                sizes,
            });
        } else if rep.im.abs() <= axis_tol && rep.re < 0.0 {
            let ranks = shifted_power_ranks(&m, cx(rep.re, 0.0), tol, n + 1);
            let mut sizes = sizes_from_staircase(n, &ranks);
            keep_to_multiplicity(&mut sizes, mult);
            // Jordan blocks at a negative eigenvalue pair up into K blocks.
            let mut halved = Vec::new();
            let mut i = 0;
            while i < sizes.len() {
                if i + 1 >= sizes.len() || sizes[i] != sizes[i + 1] {
                    return Err(Error::ToleranceBreakdown(format!(
                        "unpaired Jordan blocks {:?} at negative eigenvalue {}",
                        sizes, rep.re
                    )));
                }
                halved.push(sizes[i]);
                i += 2;
            }
            groups.push(SpectralGroup {
                class: ConeigenClass::NegReal,
                param: cx((-rep.re).sqrt(), 0.0),
                sizes: halved,
            });
        } else {
            // Non-real eigenvalue: consume the conjugate cluster as well.
            let mut partner = None;
            for (cj, r) in reps.iter().enumerate() {
                if !used[cj] && (r - rep.conj()).norm() <= 10.0 * axis_tol {
                    partner = Some(cj);
                    break;
                }
            }
            let pj = partner.ok_or_else(|| {
                Error::ToleranceBreakdown(format!("no conjugate partner for eigenvalue {rep}"))
            })?;
            used[pj] = true;
            let ranks = shifted_power_ranks(&m, rep, tol, n + 1);
            let mut sizes = sizes_from_staircase(n, &ranks);
            keep_to_multiplicity(&mut sizes, mult);
            groups.push(SpectralGroup {
                class: ConeigenClass::ComplexPair,
                param: canonical_xi(rep.sqrt()),
                sizes,
            });
        }
    }
    groups.sort_by(|a, b| group_key(a).partial_cmp(&group_key(b)).unwrap());
    Ok(groups)
}

fn group_key(g: &SpectralGroup) -> (u8, f64, f64) {
    match g.class {
        ConeigenClass::NonnegReal => (0, g.param.re, 0.0),
        ConeigenClass::NegReal => (1, g.param.re, 0.0),
        ConeigenClass::ComplexPair => (2, g.param.norm(), g.param.arg()),
    }
}

/// Gap ladder for structure extraction retries.
pub(crate) fn gap_ladder(a: &CMatrix, tol: &Tolerances) -> Vec<f64> {
    let scale = 1.0 + fro(a);
    let cap = 0.05 * scale;
    [1.0, 10.0, 100.0, 1000.0, 10_000.0]
        .iter()
        .map(|f| (tol.eig_cluster_tol * f).min(cap))
        .collect()
}

/// Coneigenvalue structure of a square matrix.
pub fn coneigen_structure(a: &CMatrix, tol: &Tolerances) -> Result<ConeigenStructure> {
    let mut last = Error::ToleranceBreakdown("empty gap ladder".into());
    for gap in gap_ladder(a, tol) {
        match coneigen_structure_with_gap(a, tol, gap) {
            Ok(st) => return Ok(st),
            Err(e) => last = e,
        }
    }
    Err(last)
}

fn coneigen_structure_with_gap(
    a: &CMatrix,
    tol: &Tolerances,
    gap: f64,
) -> Result<ConeigenStructure> {
    let groups = spectral_groups_with_gap(a, tol, gap)?;
    let mut blocks = Vec::new();
    for g in &groups {
        let mut sizes = g.sizes.clone();
        sizes.sort_unstable();
        for s in sizes {
            blocks.push(ConeigenBlock {
                class: g.class,
                parameter: g.param,
                size: s,
            });
        }
    }
    let st = ConeigenStructure {
        blocks,
        alt_ranks: alternating_rank_sequence(a, tol),
    };
    if st.total_dim() != a.nrows() {
        return Err(Error::ToleranceBreakdown(format!(
            "coneigen blocks cover {} of {} dimensions",
            st.total_dim(),
            a.nrows()
        )));
    }
    Ok(st)
}

/// Jordan block `J_m(λ, 1)` (eigenvalue on the diagonal, ones above).
pub fn jordan_block(m: usize, lambda: Cx) -> CMatrix {
    CMatrix::from_fn(m, m, |i, j| {
        if i == j {
            lambda
        } else if j == i + 1 {
            cx(1.0, 0.0)
        } else {
            Cx::default()
        }
    })
}

/// Assemble the quasi-Jordan form from the coneigenvalue structure.
pub fn quasi_jordan_form(a: &CMatrix, tol: &Tolerances) -> Result<QuasiJordan> {
    let st = coneigen_structure(a, tol)?;
    let parts: Vec<CMatrix> = st.blocks.iter().map(quasi_jordan_block).collect();
    Ok(QuasiJordan {
        matrix: crate::matlin::direct_sum(&parts),
        blocks: st.blocks,
    })
}

fn quasi_jordan_block(b: &ConeigenBlock) -> CMatrix {
    let m = b.size;
    match b.class {
        ConeigenClass::NonnegReal => jordan_block(m, b.parameter),
        ConeigenClass::NegReal => {
            let j = jordan_block(m, b.parameter);
            let mut out = CMatrix::zeros(2 * m, 2 * m);
            out.view_mut((0, m), (m, m)).copy_from(&j);
            out.view_mut((m, 0), (m, m)).copy_from(&(-&j));
            out
        }
        ConeigenClass::ComplexPair => {
            let j = jordan_block(m, b.parameter);
            let mut out = CMatrix::zeros(2 * m, 2 * m);
            out.view_mut((0, m), (m, m)).copy_from(&j);
            out.view_mut((m, 0), (m, m)).copy_from(&conj_mat(&j));
            out
        }
    }
}

// ── Block builders ──────────────────────────────────────────────────

/// `H_m(z)`: half the sum of the anti-Hankel pattern (2z on the
/// anti-diagonal, ones beside it) and `i` times the `±1` tridiagonal.
pub fn block_h(m: usize, z: Cx) -> CMatrix {
    CMatrix::from_fn(m, m, |i, j| {
        let mut v = Cx::default();
        let s = i + j;
        if s + 1 == m {
            v += 2.0 * z;
        } else if s + 2 == m || s == m {
            v += cx(1.0, 0.0);
        }
        if j == i + 1 {
            v += cx(0.0, 1.0);
        } else if i == j + 1 {
            v += cx(0.0, -1.0);
        }
        v * cx(0.5, 0.0)
    })
}

/// `K_m(z) = [[0, -i H_m(z)],[i H_m(z), 0]]`.
pub fn block_k(m: usize, z: Cx) -> CMatrix {
    let h = block_h(m, z);
    let mut out = CMatrix::zeros(2 * m, 2 * m);
    out.view_mut((0, m), (m, m)).copy_from(&(&h * cx(0.0, -1.0)));
    out.view_mut((m, 0), (m, m)).copy_from(&(&h * cx(0.0, 1.0)));
    out
}

/// `L_m(z) = [[0, H_m(z)],[H_m(z)*, 0]]`.
pub fn block_l(m: usize, z: Cx) -> CMatrix {
    let h = block_h(m, z);
    let mut out = CMatrix::zeros(2 * m, 2 * m);
    out.view_mut((0, m), (m, m)).copy_from(&h);
    out.view_mut((m, 0), (m, m)).copy_from(&h.adjoint());
    out
}

// ── Jordan chain extraction ─────────────────────────────────────────

pub(crate) fn hstack(cols: &[CVector]) -> CMatrix {
    if cols.is_empty() {
        return CMatrix::zeros(0, 0);
    }
    let n = cols[0].len();
    let mut out = CMatrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}

/// Bilinear pairing `u^T v` (no conjugation).
pub(crate) fn bilin(u: &CVector, v: &CVector) -> Cx {
    u.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
}

/// The conjugate-linear swap `(x, y) -> (conj y, conj x)` on double vectors.
fn sigma_swap_conj(v: &CVector) -> CVector {
    let n = v.len() / 2;
    let mut out = CVector::zeros(2 * n);
    for i in 0..n {
        out[i] = v[i + n].conj();
        out[i + n] = v[i].conj();
    }
    out
}

/// Chain partner map at `-iμ`: a conjugate-linear commutant of the double
/// matrix that exchanges the two chain copies of each `K` block.
fn sigma_j_partner(v: &CVector) -> CVector {
    let n = v.len() / 2;
    let mut out = CVector::zeros(2 * n);
    for i in 0..n {
        out[i] = cx(0.0, 1.0) * v[i + n].conj();
        out[i + n] = cx(0.0, -1.0) * v[i].conj();
    }
    out
}

fn project_out(basis: &CMatrix, v: &CVector) -> CVector {
    if basis.ncols() == 0 {
        return v.clone();
    }
    v - basis * (basis.adjoint() * v)
}

/// Orthonormalize columns, dropping near-dependent ones.
fn orthonormalize(n: usize, cols: &[CVector], drop_tol: f64) -> CMatrix {
    let mut basis = CMatrix::zeros(n, 0);
    for c in cols {
        let r = project_out(&basis, c);
        let nr = r.norm();
        if nr > drop_tol {
            let r = project_out(&basis, &(r / cx(nr, 0.0)));
            let k = basis.ncols();
            basis = basis.insert_column(k, Cx::default());
            basis.set_column(k, &(&r / cx(r.norm(), 0.0)));
        }
    }
    basis
}

/// Extract Jordan chains of `m` at eigenvalue `eta`.
///
/// `counts` lists `(size, how many)` in descending size order. Chains are
/// stored bottom-first (`chain[0]` in the kernel). With `sigma_fix`, tops are
/// symmetrized under the swap-conjugation so they descend to T-chains; `eta`
/// must be real in that case.
fn jordan_chains(
    m: &CMatrix,
    eta: Cx,
    counts: &[(usize, usize)],
    tol: &Tolerances,
    sigma_fix: bool,
    extra_obstruction: &[CVector],
) -> Result<Vec<Vec<CVector>>> {
    let n = m.nrows();
    let nmat = m - CMatrix::identity(n, n) * eta;
    let p = counts.iter().map(|&(s, _)| s).max().unwrap_or(0);
    if p == 0 {
        return Ok(Vec::new());
    }
    let base = fro(&nmat).max(1e-300);
    let mut kernels: Vec<CMatrix> = Vec::with_capacity(p);
    let mut power = nmat.clone();
    let mut logc = 0.0f64;
    for j in 1..=p {
        if j > 1 {
            let f = fro(&power);
            if f > 0.0 {
                power /= cx(f, 0.0);
                logc += f.ln();
            }
            power = &power * &nmat;
        }
        let logthresh = tol.rank_tol.ln() + (j as f64) * base.ln() - logc;
        kernels.push(crate::matlin::nullspace_abs(&power, logthresh.min(700.0).exp()));
    }
    let mut chains: Vec<Vec<CVector>> = Vec::new();
    for h in (1..=p).rev() {
        let needed: usize = counts
            .iter()
            .filter(|&&(s, _)| s == h)
            .map(|&(_, c)| c)
            .sum();
        if needed == 0 {
            continue;
        }
        let mut obs: Vec<CVector> = Vec::new();
        if h >= 2 {
            let kprev = &kernels[h - 2];
            for j in 0..kprev.ncols() {
                obs.push(kprev.column(j).into_owned());
            }
        }
        for ch in &chains {
            if ch.len() >= h {
                obs.push(ch[h - 1].clone());
            }
        }
        obs.extend_from_slice(extra_obstruction);
        let ob = orthonormalize(n, &obs, 1e-10);
        let kh = &kernels[h - 1];
        let mut resid = CMatrix::zeros(n, kh.ncols());
        for j in 0..kh.ncols() {
            resid.set_column(j, &project_out(&ob, &kh.column(j).into_owned()));
        }
        let svd = resid.svd(true, false);
        let u = svd.u.as_ref().expect("svd u");
        let mut sv: Vec<(f64, usize)> = svd
            .singular_values
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        sv.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut raw_tops: Vec<CVector> = Vec::new();
        for &(s, i) in sv.iter().take(2 * needed) {
            if s > 1e-9 {
                raw_tops.push(u.column(i).into_owned());
            }
        }
        if raw_tops.len() < needed {
            return Err(Error::ToleranceBreakdown(format!(
                "only {} independent chain tops at height {h} (need {needed})",
                raw_tops.len()
            )));
        }
        if std::env::var("HERMPAIR_DEBUG").is_ok() {
            let pw = if h >= 2 { Some(&kernels[h - 1]) } else { None };
            eprintln!(
                "  at h={h}: kernel dims {:?}, raw_tops {} (ncols k_h = {:?})",
                kernels.iter().map(|k| k.ncols()).collect::<Vec<_>>(),
                raw_tops.len(),
                pw.map(|k| k.ncols())
            );
            for (i, t) in raw_tops.iter().enumerate() {
                let mut pw = t.clone();
                for _ in 0..h {
                    pw = &nmat * pw;
                }
                eprintln!("    raw top {i}: |N^h t| = {:.3e}", pw.norm());
            }
        }
        let pool: Vec<CVector> = if sigma_fix {
            let mut pool = Vec::new();
            for t in &raw_tops {
                let st = sigma_swap_conj(t);
                let plus = t + &st;
                let minus = (t - &st) * cx(0.0, 1.0);
                if plus.norm() > 1e-9 {
                    pool.push(plus.normalize());
                }
                if minus.norm() > 1e-9 {
                    pool.push(minus.normalize());
                }
            }
            pool
        } else {
            raw_tops
        };
        let mut block_basis = ob.clone();
        let mut taken = 0;
        while taken < needed {
            let mut best: Option<(f64, &CVector)> = None;
            for c in &pool {
                let nr = project_out(&block_basis, c).norm();
                if best.map(|b| nr > b.0).unwrap_or(true) {
                    best = Some((nr, c));
                }
            }
            let (nr, top) = best.ok_or_else(|| {
                Error::ToleranceBreakdown("chain top pool exhausted".into())
            })?;
            if nr < 1e-9 {
                return Err(Error::ToleranceBreakdown(
                    "chain tops are numerically dependent".into(),
                ));
            }
            let top = top.clone();
            if std::env::var("HERMPAIR_DEBUG").is_ok() {
                let sdev = (sigma_swap_conj(&top) - &top).norm();
                eprintln!(
                    "jordan_chains eta={eta} h={h} needed={needed} nr={nr:.3e} sigma_dev={sdev:.3e} pool={}",
                    pool.len()
                );
            }
            let pr = project_out(&block_basis, &top).normalize();
            let k = block_basis.ncols();
            block_basis = block_basis.insert_column(k, Cx::default());
            block_basis.set_column(k, &pr);
            let mut chain = vec![top];
            for _ in 1..h {
                let next = &nmat * chain.last().unwrap();
                chain.push(next);
            }
            chain.reverse();
            if std::env::var("HERMPAIR_DEBUG").is_ok() {
                let bot = &chain[0];
                eprintln!(
                    "  chain bottom: |N bot|={:.3e} sigma_dev={:.3e} |bot|={:.3e}",
                    (&nmat * bot).norm(),
                    (sigma_swap_conj(bot) - bot).norm(),
                    bot.norm()
                );
            }
            chains.push(chain);
            taken += 1;
        }
    }
    chains.sort_by(|a, b| b.len().cmp(&a.len()));
    Ok(chains)
}

// ── T-chain extraction per spectral group ───────────────────────────

fn count_sizes(sizes: &[usize]) -> Vec<(usize, usize)> {
    let mut counts: Vec<(usize, usize)> = Vec::new();
    for &s in sizes {
        if let Some(e) = counts.iter_mut().find(|e| e.0 == s) {
            e.1 += 1;
        } else {
            counts.push((s, 1));
        }
    }
    counts.sort_by(|a, b| b.0.cmp(&a.0));
    counts
}

/// T-chains at real coneigenvalue `x ≥ 0`: `T u_j = x u_j + u_{j-1}`.
fn h_chains(
    a: &CMatrix,
    abar: &CMatrix,
    x: f64,
    sizes: &[usize],
    tol: &Tolerances,
) -> Result<Vec<Vec<CVector>>> {
    if x == 0.0 {
        return t_nilpotent_chains(a, abar, sizes, tol);
    }
    let n = a.nrows();
    let counts = count_sizes(sizes);
    let hat = ahat(a);
    let chains2n = jordan_chains(&hat, cx(x, 0.0), &counts, tol, true, &[])?;
    let mut out = Vec::new();
    for ch in chains2n {
        let us: Vec<CVector> = ch.iter().map(|v| v.rows(0, n).into_owned()).collect();
        out.push(us);
    }
    verify_h_chains(abar, x, &out)?;
    Ok(out)
}

fn verify_h_chains(abar: &CMatrix, x: f64, chains: &[Vec<CVector>]) -> Result<()> {
    for ch in chains {
        for j in 0..ch.len() {
            let lhs = t_apply(abar, &ch[j]);
            let mut rhs = ch[j].scale(x);
            if j > 0 {
                rhs += &ch[j - 1];
            }
            let scale = (1.0 + ch[j].norm()) * (1.0 + x);
            let dev = (lhs - rhs).norm();
            if dev > 1e-6 * scale {
                return Err(Error::ToleranceBreakdown(format!(
                    "H chain relation violated at x={x} (chain len {}, pos {j}, resid {dev:.3e}, |u|={:.3e})",
                    ch.len(),
                    ch[j].norm()
                )));
            }
        }
    }
    Ok(())
}

/// Nilpotent T-chains (`T u_j = u_{j-1}`); sizes come from the alternating
/// product ranks, and the kernels of `T^j` are kernels of those products.
fn t_nilpotent_chains(
    a: &CMatrix,
    abar: &CMatrix,
    sizes: &[usize],
    tol: &Tolerances,
) -> Result<Vec<Vec<CVector>>> {
    let n = a.nrows();
    let p = sizes.iter().cloned().max().unwrap_or(0);
    if p == 0 {
        return Ok(Vec::new());
    }
    // ker T^1 = ker A, ker T^2 = ker(conj(A) A), ker T^3 = ker(A conj(A) A), ...
    let base = fro(a).max(1e-300);
    let mut kernels: Vec<CMatrix> = Vec::with_capacity(p);
    let mut prod = a.clone();
    let mut logc = 0.0f64;
    for j in 1..=p {
        let logthresh = tol.rank_tol.ln() + (j as f64) * base.ln() - logc;
        kernels.push(crate::matlin::nullspace_abs(&prod, logthresh.min(700.0).exp()));
        let f = fro(&prod);
        if f > 0.0 {
            prod /= cx(f, 0.0);
            logc += f.ln();
        }
        prod = if j % 2 == 1 { abar * &prod } else { a * &prod };
    }
    let counts = count_sizes(sizes);
    let mut chains: Vec<Vec<CVector>> = Vec::new();
    for h in (1..=p).rev() {
        let needed: usize = counts
            .iter()
            .filter(|&&(s, _)| s == h)
            .map(|&(_, c)| c)
            .sum();
        if needed == 0 {
            continue;
        }
        let mut obs: Vec<CVector> = Vec::new();
        if h >= 2 {
            let kprev = &kernels[h - 2];
            for j in 0..kprev.ncols() {
                obs.push(kprev.column(j).into_owned());
            }
        }
        for ch in &chains {
            if ch.len() >= h {
                obs.push(ch[h - 1].clone());
            }
        }
        let ob = orthonormalize(n, &obs, 1e-10);
        let kh = &kernels[h - 1];
        let mut resid = CMatrix::zeros(n, kh.ncols());
        for j in 0..kh.ncols() {
            resid.set_column(j, &project_out(&ob, &kh.column(j).into_owned()));
        }
        let svd = resid.svd(true, false);
        let u = svd.u.as_ref().expect("svd u");
        let mut sv: Vec<(f64, usize)> = svd
            .singular_values
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        sv.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut block_basis = ob.clone();
        let mut taken = 0;
        for &(s, i) in sv.iter() {
            if taken == needed || s <= 1e-9 {
                break;
            }
            let top = u.column(i).into_owned();
            let pr = project_out(&block_basis, &top);
            if pr.norm() < 1e-9 {
                continue;
            }
            let k = block_basis.ncols();
            block_basis = block_basis.insert_column(k, Cx::default());
            block_basis.set_column(k, &pr.normalize());
            let mut chain = vec![top];
            for _ in 1..h {
                chain.push(t_apply(abar, chain.last().unwrap()));
            }
            chain.reverse();
            chains.push(chain);
            taken += 1;
        }
        if taken < needed {
            return Err(Error::ToleranceBreakdown(format!(
                "nilpotent chain extraction found {taken} of {needed} at height {h}"
            )));
        }
    }
    chains.sort_by(|a, b| b.len().cmp(&a.len()));
    verify_h_chains(abar, 0.0, &chains)?;
    Ok(chains)
}

/// K-pair chains at `μ > 0`:
/// `T u_j = -(μ u'_j + u'_{j-1})`, `T u'_j = μ u_j + u_{j-1}`.
fn k_chains(
    a: &CMatrix,
    abar: &CMatrix,
    mu: f64,
    sizes: &[usize],
    tol: &Tolerances,
) -> Result<Vec<(Vec<CVector>, Vec<CVector>)>> {
    let n = a.nrows();
    let hat = ahat(a);
    let eta = cx(0.0, -mu);
    let mut out: Vec<(Vec<CVector>, Vec<CVector>)> = Vec::new();
    let mut obstruction: Vec<CVector> = Vec::new();
    for &beta in sizes {
        let chains = jordan_chains(&hat, eta, &[(beta, 1)], tol, false, &obstruction)?;
        let ch = chains
            .into_iter()
            .next()
            .ok_or_else(|| Error::ToleranceBreakdown("missing K chain".into()))?;
        // Chain components are (α_j u'_j, i α_j conj(u_j)) with α_β = 1 and
        // α_{j-1} = -i α_j.
        let mut us = Vec::with_capacity(beta);
        let mut vps = Vec::with_capacity(beta);
        for (jm1, x) in ch.iter().enumerate() {
            let j = jm1 + 1;
            let alpha = cx(0.0, -1.0).powu((beta - j) as u32);
            let xv = x.rows(0, n).into_owned();
            let yv = x.rows(n, n).into_owned();
            vps.push(xv.map(|z| z / alpha));
            us.push(yv.map(|z| (z / (cx(0.0, 1.0) * alpha)).conj()));
        }
        verify_k_pair(abar, mu, &us, &vps)?;
        for x in &ch {
            obstruction.push(x.clone());
            obstruction.push(sigma_j_partner(x));
        }
        out.push((us, vps));
    }
    Ok(out)
}

fn verify_k_pair(abar: &CMatrix, mu: f64, us: &[CVector], vps: &[CVector]) -> Result<()> {
    for j in 0..us.len() {
        let s = (1.0 + us[j].norm()) * (1.0 + mu);
        let lhs = t_apply(abar, &us[j]);
        let mut rhs = vps[j].scale(-mu);
        if j > 0 {
            rhs -= &vps[j - 1];
        }
        if (lhs - rhs).norm() > 1e-6 * s {
            return Err(Error::ToleranceBreakdown("K chain relation (u) violated".into()));
        }
        let lhs2 = t_apply(abar, &vps[j]);
        let mut rhs2 = us[j].scale(mu);
        if j > 0 {
            rhs2 += &us[j - 1];
        }
        if (lhs2 - rhs2).norm() > 1e-6 * s {
            return Err(Error::ToleranceBreakdown("K chain relation (u') violated".into()));
        }
    }
    Ok(())
}

/// L-pair chains at non-real `ξ`:
/// `T u_j = ξ u'_j + u'_{j-1}`, `T u'_j = conj(ξ) u_j + u_{j-1}`.
fn l_chains(
    a: &CMatrix,
    abar: &CMatrix,
    xi: Cx,
    sizes: &[usize],
    tol: &Tolerances,
) -> Result<Vec<(Vec<CVector>, Vec<CVector>)>> {
    let n = a.nrows();
    let hat = ahat(a);
    let counts = count_sizes(sizes);
    let chains = jordan_chains(&hat, xi, &counts, tol, false, &[])?;
    let mut out = Vec::new();
    for ch in chains {
        // Chain components are (u'_j, conj(u_j)).
        let mut us = Vec::with_capacity(ch.len());
        let mut vps = Vec::with_capacity(ch.len());
        for x in &ch {
            vps.push(x.rows(0, n).into_owned());
            us.push(x.rows(n, n).map(|z| z.conj()));
        }
        verify_l_pair(abar, xi, &us, &vps)?;
        out.push((us, vps));
    }
    Ok(out)
}

fn verify_l_pair(abar: &CMatrix, xi: Cx, us: &[CVector], vps: &[CVector]) -> Result<()> {
    for j in 0..us.len() {
        let s = (1.0 + us[j].norm()) * (1.0 + xi.norm());
        let lhs = t_apply(abar, &us[j]);
        let mut rhs = &vps[j] * xi;
        if j > 0 {
            rhs += &vps[j - 1];
        }
        if (lhs - rhs).norm() > 1e-6 * s {
            return Err(Error::ToleranceBreakdown("L chain relation (u) violated".into()));
        }
        let lhs2 = t_apply(abar, &vps[j]);
        let mut rhs2 = &us[j] * xi.conj();
        if j > 0 {
            rhs2 += &us[j - 1];
        }
        if (lhs2 - rhs2).norm() > 1e-6 * s {
            return Err(Error::ToleranceBreakdown("L chain relation (u') violated".into()));
        }
    }
    Ok(())
}

// ── Gram normalization ──────────────────────────────────────────────

/// Damped Gauss-Newton with a numerical Jacobian.
fn gauss_newton<F>(f: F, p0: Vec<f64>, max_iter: usize, target: f64) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let norm = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut p = p0;
    let mut r = f(&p);
    let mut rn = norm(&r);
    if p.is_empty() {
        return (p, rn);
    }
    for _ in 0..max_iter {
        if rn <= target {
            break;
        }
        let m = r.len();
        let k = p.len();
        let mut jac = nalgebra::DMatrix::<f64>::zeros(m, k);
        for j in 0..k {
            let h = 1e-7 * (1.0 + p[j].abs());
            let mut pj = p.clone();
            pj[j] += h;
            let rj = f(&pj);
            for i in 0..m {
                jac[(i, j)] = (rj[i] - r[i]) / h;
            }
        }
        let rv = nalgebra::DVector::<f64>::from_vec(r.clone());
        let svd = jac.svd(true, true);
        let delta = match svd.solve(&rv, 1e-12) {
            Ok(d) => d,
            Err(_) => break,
        };
        let mut improved = false;
        for damp in [1.0f64, 0.5, 0.25, 0.1, 0.01] {
            let cand: Vec<f64> = p
                .iter()
                .zip(delta.iter())
                .map(|(a, d)| a - damp * d)
                .collect();
            let rc = f(&cand);
            let rcn = norm(&rc);
            if rcn < rn {
                p = cand;
                r = rc;
                rn = rcn;
                improved = true;
                break;
            }
        }
        if !improved {
            break;
        }
    }
    (p, rn)
}

fn push_cx(v: &mut Vec<f64>, z: Cx) {
    v.push(z.re);
    v.push(z.im);
}

/// `C` with `C^T Φ C = I` for a nondegenerate complex symmetric `Φ`.
fn complex_sym_orthonormalize(phi: &CMatrix) -> Result<CMatrix> {
    let d = phi.nrows();
    let quad = |v: &CVector| -> Cx { (v.transpose() * phi * v)[(0, 0)] };
    let pair = |v: &CVector, w: &CVector| -> Cx { (v.transpose() * phi * w)[(0, 0)] };
    let mut basis: Vec<CVector> = (0..d)
        .map(|i| {
            let mut e = CVector::zeros(d);
            e[i] = cx(1.0, 0.0);
            e
        })
        .collect();
    let mut out: Vec<CVector> = Vec::with_capacity(d);
    while out.len() < d {
        let mut cands: Vec<CVector> = basis.clone();
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                cands.push(&basis[i] + &basis[j]);
                cands.push(&basis[i] + &basis[j] * cx(0.0, 1.0));
            }
        }
        let mut best: Option<(f64, CVector)> = None;
        for v in cands {
            let q = quad(&v).norm() / v.norm_squared();
            if best.as_ref().map(|b| q > b.0).unwrap_or(true) {
                best = Some((q, v));
            }
        }
        let (val, v) = best.unwrap();
        if val < 1e-12 {
            return Err(Error::ToleranceBreakdown(
                "degenerate symmetric form in orthonormalization".into(),
            ));
        }
        let v = &v / quad(&v).sqrt();
        let deflated: Vec<CVector> = basis
            .iter()
            .map(|w| w - &v * pair(&v, w))
            .collect();
        let keep = orthonormalize(d, &deflated, 1e-9);
        if keep.ncols() < d - out.len() - 1 {
            return Err(Error::ToleranceBreakdown(
                "could not complete symmetric orthonormal basis".into(),
            ));
        }
        basis = (0..(d - out.len() - 1))
            .map(|j| keep.column(j).into_owned())
            .collect();
        out.push(v);
    }
    Ok(hstack(&out))
}

fn regen_h(abar: &CMatrix, x: f64, top: &CVector, len: usize) -> Vec<CVector> {
    let mut rev = vec![top.clone()];
    for _ in 1..len {
        let u = rev.last().unwrap();
        rev.push(t_apply(abar, u) - u.scale(x));
    }
    rev.reverse();
    rev
}

fn regen_k(
    abar: &CMatrix,
    mu: f64,
    top_u: &CVector,
    top_v: &CVector,
    len: usize,
) -> (Vec<CVector>, Vec<CVector>) {
    let mut us = vec![top_u.clone()];
    let mut vs = vec![top_v.clone()];
    for _ in 1..len {
        let u = us.last().unwrap().clone();
        let v = vs.last().unwrap().clone();
        us.push(t_apply(abar, &v) - u.scale(mu));
        vs.push(-t_apply(abar, &u) - v.scale(mu));
    }
    us.reverse();
    vs.reverse();
    (us, vs)
}

fn regen_l(
    abar: &CMatrix,
    xi: Cx,
    top_u: &CVector,
    top_v: &CVector,
    len: usize,
) -> (Vec<CVector>, Vec<CVector>) {
    let mut us = vec![top_u.clone()];
    let mut vs = vec![top_v.clone()];
    for _ in 1..len {
        let u = us.last().unwrap().clone();
        let v = vs.last().unwrap().clone();
        us.push(t_apply(abar, &v) - &u * xi.conj());
        vs.push(t_apply(abar, &u) - &v * xi);
    }
    us.reverse();
    vs.reverse();
    (us, vs)
}

/// Normalize the bilinear Grams of H chains at coneigenvalue `x` to `ε E`
/// per chain; the achieved signs are the block signs.
fn normalize_h_group(
    abar: &CMatrix,
    x: f64,
    mut chains: Vec<Vec<CVector>>,
) -> Result<Vec<(Vec<CVector>, i8)>> {
    chains.sort_by(|a, b| b.len().cmp(&a.len()));
    let lens: Vec<usize> = chains.iter().map(|c| c.len()).collect();
    let nilpotent = x == 0.0;
    let mut eps: Vec<i8> = vec![1; chains.len()];

    // Level 0: diagonalize the bottom-top pairing per length class.
    let mut classes: Vec<usize> = lens.clone();
    classes.dedup();
    for &alpha in &classes {
        let idx: Vec<usize> = (0..chains.len()).filter(|&i| lens[i] == alpha).collect();
        let k = idx.len();
        let mut phi = CMatrix::zeros(k, k);
        for (ai, &i) in idx.iter().enumerate() {
            for (bi, &j) in idx.iter().enumerate() {
                phi[(ai, bi)] = bilin(&chains[i][0], &chains[j][alpha - 1]);
            }
        }
        let tops: Vec<CVector> = idx.iter().map(|&i| chains[i][alpha - 1].clone()).collect();
        if !nilpotent {
            // Real symmetric form; mixing must stay real.
            let dev = phi.iter().map(|z| z.im.abs()).fold(0.0f64, f64::max);
            if dev > 1e-6 * (1.0 + phi.norm()) {
                return Err(Error::ToleranceBreakdown(
                    "anti-diagonal chain form is not real".into(),
                ));
            }
            let phr = nalgebra::DMatrix::<f64>::from_fn(k, k, |i, j| {
                0.5 * (phi[(i, j)].re + phi[(j, i)].re)
            });
            let eig = nalgebra::SymmetricEigen::new(phr);
            for (jj, &i) in idx.iter().enumerate() {
                let d = eig.eigenvalues[jj];
                if d.abs() < 1e-10 {
                    return Err(Error::ToleranceBreakdown("singular anti-diagonal form".into()));
                }
                let s = 1.0 / d.abs().sqrt();
                let mut t = CVector::zeros(tops[0].len());
                for (aa, tv) in tops.iter().enumerate() {
                    t += tv * cx(eig.eigenvectors[(aa, jj)] * s, 0.0);
                }
                chains[i] = regen_h(abar, x, &t, alpha);
                eps[i] = if d > 0.0 { 1 } else { -1 };
            }
        } else if alpha % 2 == 0 {
            // Hermitian form; complex mixing, signs survive.
            let phi_h = (&phi + phi.adjoint()).scale(0.5);
            if (&phi - &phi_h).norm() > 1e-6 * (1.0 + phi.norm()) {
                return Err(Error::ToleranceBreakdown(
                    "anti-diagonal chain form is not Hermitian".into(),
                ));
            }
            let eig = nalgebra::SymmetricEigen::new(phi_h);
            for (jj, &i) in idx.iter().enumerate() {
                let d = eig.eigenvalues[jj];
                if d.abs() < 1e-10 {
                    return Err(Error::ToleranceBreakdown("singular anti-diagonal form".into()));
                }
                let s = 1.0 / d.abs().sqrt();
                let mut t = CVector::zeros(tops[0].len());
                for (aa, tv) in tops.iter().enumerate() {
                    t += tv * (eig.eigenvectors[(aa, jj)] * cx(s, 0.0));
                }
                chains[i] = regen_h(abar, x, &t, alpha);
                eps[i] = if d > 0.0 { 1 } else { -1 };
            }
        } else {
            // Nilpotent odd length: bilinear symmetric, sign-free.
            if (&phi - phi.transpose()).norm() > 1e-6 * (1.0 + phi.norm()) {
                return Err(Error::ToleranceBreakdown(
                    "anti-diagonal chain form is not symmetric".into(),
                ));
            }
            let c = complex_sym_orthonormalize(&phi)?;
            for (jj, &i) in idx.iter().enumerate() {
                let mut t = CVector::zeros(tops[0].len());
                for (aa, tv) in tops.iter().enumerate() {
                    t += tv * c[(aa, jj)];
                }
                chains[i] = regen_h(abar, x, &t, alpha);
                eps[i] = 1;
            }
        }
    }

    // Gauss-Newton sweep for the deeper Gram levels.
    let base_tops: Vec<CVector> = chains.iter().map(|c| c.last().unwrap().clone()).collect();
    let lens2 = lens.clone();
    let eps2 = eps.clone();
    let mut layout: Vec<(usize, usize, usize)> = Vec::new();
    for c in 0..chains.len() {
        for cp in 0..chains.len() {
            let smin = usize::from(c == cp);
            for s in smin..lens2[c] {
                let h = lens2[c] - s;
                if h >= 1 && h <= lens2[cp] {
                    layout.push((c, cp, s));
                }
            }
        }
    }
    let per = if nilpotent { 2 } else { 1 };
    let abar2 = abar.clone();
    let rebuild = |p: &[f64]| -> Vec<Vec<CVector>> {
        let mut tops = base_tops.clone();
        for (k, &(c, cp, s)) in layout.iter().enumerate() {
            let t = if nilpotent {
                cx(p[2 * k], p[2 * k + 1])
            } else {
                cx(p[k], 0.0)
            };
            let h = lens2[c] - s;
            let donor = regen_h(&abar2, x, &base_tops[cp], lens2[cp]);
            tops[c] += &donor[h - 1] * t;
        }
        tops.iter()
            .enumerate()
            .map(|(c, t)| regen_h(&abar2, x, t, lens2[c]))
            .collect()
    };
    let residual = |p: &[f64]| -> Vec<f64> {
        let chs = rebuild(p);
        let mut r = Vec::new();
        for c in 0..chs.len() {
            for cp in c..chs.len() {
                for i in 0..lens2[c] {
                    for j in 0..lens2[cp] {
                        let g = bilin(&chs[c][i], &chs[cp][j]);
                        let target = if c == cp && i + j == lens2[c] - 1 {
                            cx(eps2[c] as f64, 0.0)
                        } else {
                            Cx::default()
                        };
                        push_cx(&mut r, g - target);
                    }
                }
            }
        }
        r
    };
    let p0 = vec![0.0; layout.len() * per];
    let (p, rn) = gauss_newton(&residual, p0, 50, 1e-12);
    if rn > 1e-7 * (1.0 + chains.len() as f64) {
        return Err(Error::ToleranceBreakdown(format!(
            "H Gram normalization stalled at {rn:.3e} (x={x})"
        )));
    }
    Ok(rebuild(&p).into_iter().zip(eps).collect())
}

/// Normalize K pairs to the Gram target `[U1 U2]^T [U1 U2] = i (E ⊕ E)`.
fn normalize_k_group(
    abar: &CMatrix,
    mu: f64,
    pairs: Vec<(Vec<CVector>, Vec<CVector>)>,
) -> Result<Vec<(Vec<CVector>, Vec<CVector>)>> {
    let lens: Vec<usize> = pairs.iter().map(|(u, _)| u.len()).collect();
    let tops: Vec<(CVector, CVector)> = pairs
        .iter()
        .map(|(u, v)| (u.last().unwrap().clone(), v.last().unwrap().clone()))
        .collect();
    let nb = pairs.len();
    let mut layout: Vec<(usize, usize, usize, bool)> = Vec::new();
    for c in 0..nb {
        for cp in 0..nb {
            let smin = usize::from(c == cp);
            for s in smin..lens[c] {
                let h = lens[c] - s;
                if h >= 1 && h <= lens[cp] {
                    layout.push((c, cp, s, false));
                    layout.push((c, cp, s, true));
                }
            }
        }
    }
    let abar2 = abar.clone();
    let lens2 = lens.clone();
    let rebuild = |p: &[f64]| -> Vec<(Vec<CVector>, Vec<CVector>)> {
        let mut newtops: Vec<(CVector, CVector)> = Vec::with_capacity(nb);
        for c in 0..nb {
            let a = cx(p[4 * c], p[4 * c + 1]);
            let b = cx(p[4 * c + 2], p[4 * c + 3]);
            let (tu, tv) = &tops[c];
            // gauge: (u, u') -> (a u + b u', -conj(b) u + conj(a) u')
            newtops.push((tu * a + tv * b, tu * (-b.conj()) + tv * a.conj()));
        }
        let off = 4 * nb;
        for (k, &(c, cp, s, twist)) in layout.iter().enumerate() {
            let t = cx(p[off + 2 * k], p[off + 2 * k + 1]);
            let h = lens2[c] - s;
            let donor = regen_k(&abar2, mu, &tops[cp].0, &tops[cp].1, lens2[cp]);
            if !twist {
                newtops[c].0 += &donor.0[h - 1] * t;
                newtops[c].1 += &donor.1[h - 1] * t.conj();
            } else {
                newtops[c].0 += &donor.1[h - 1] * t;
                newtops[c].1 -= &donor.0[h - 1] * t.conj();
            }
        }
        newtops
            .iter()
            .enumerate()
            .map(|(c, (tu, tv))| regen_k(&abar2, mu, tu, tv, lens2[c]))
            .collect()
    };
    let residual = |p: &[f64]| -> Vec<f64> {
        let prs = rebuild(p);
        let mut r = Vec::new();
        for c in 0..nb {
            for cp in c..nb {
                let (uc, vc) = &prs[c];
                let (ucp, vcp) = &prs[cp];
                for i in 0..lens2[c] {
                    for j in 0..lens2[cp] {
                        let anti = c == cp && i + j == lens2[c] - 1;
                        let tgt = if anti { cx(0.0, 1.0) } else { Cx::default() };
                        push_cx(&mut r, bilin(&uc[i], &ucp[j]) - tgt);
                        push_cx(&mut r, bilin(&vc[i], &vcp[j]) - tgt);
                        push_cx(&mut r, bilin(&uc[i], &vcp[j]));
                        if c != cp {
                            push_cx(&mut r, bilin(&vc[i], &ucp[j]));
                        }
                    }
                }
            }
        }
        r
    };
    let mut p0 = vec![0.0; 4 * nb + 2 * layout.len()];
    for c in 0..nb {
        p0[4 * c] = 1.0;
    }
    let r2 = 1.0 / 2.0f64.sqrt();
    let mut starts: Vec<Vec<f64>> = vec![p0.clone()];
    for (ar, ai, br, bi) in [
        (r2, 0.0, r2, 0.0),
        (r2, 0.0, -r2, 0.0),
        (r2, 0.0, 0.0, r2),
        (r2, 0.0, 0.0, -r2),
        (0.0, r2, r2, 0.0),
        (0.5, 0.5, 0.5, -0.5),
    ] {
        let mut q = p0.clone();
        for c in 0..nb {
            q[4 * c] = ar;
            q[4 * c + 1] = ai;
            q[4 * c + 2] = br;
            q[4 * c + 3] = bi;
        }
        starts.push(q);
    }
    let mut best: Option<(Vec<f64>, f64)> = None;
    for st in starts {
        let (p, rn) = gauss_newton(&residual, st, 60, 1e-12);
        if best.as_ref().map(|b| rn < b.1).unwrap_or(true) {
            best = Some((p, rn));
        }
        if best.as_ref().unwrap().1 < 1e-10 {
            break;
        }
    }
    let (p, rn) = best.unwrap();
    if rn > 1e-7 {
        return Err(Error::ToleranceBreakdown(format!(
            "K Gram normalization stalled at {rn:.3e}"
        )));
    }
    Ok(rebuild(&p))
}

/// Normalize L pairs to `U1^T U1 = E`, `U2^T U2 = E`.
fn normalize_l_group(
    abar: &CMatrix,
    xi: Cx,
    pairs: Vec<(Vec<CVector>, Vec<CVector>)>,
) -> Result<Vec<(Vec<CVector>, Vec<CVector>)>> {
    let lens: Vec<usize> = pairs.iter().map(|(u, _)| u.len()).collect();
    let tops: Vec<(CVector, CVector)> = pairs
        .iter()
        .map(|(u, v)| (u.last().unwrap().clone(), v.last().unwrap().clone()))
        .collect();
    let nb = pairs.len();
    let mut layout: Vec<(usize, usize, usize)> = Vec::new();
    for c in 0..nb {
        for cp in 0..nb {
            for s in 0..lens[c] {
                let h = lens[c] - s;
                if h >= 1 && h <= lens[cp] && !(c == cp && s == 0) {
                    layout.push((c, cp, s));
                }
            }
        }
    }
    let abar2 = abar.clone();
    let lens2 = lens.clone();
    let rebuild = |p: &[f64]| -> Vec<(Vec<CVector>, Vec<CVector>)> {
        let mut newtops: Vec<(CVector, CVector)> = Vec::with_capacity(nb);
        for c in 0..nb {
            let sc = cx(p[2 * c], p[2 * c + 1]);
            let (tu, tv) = &tops[c];
            newtops.push((tu * sc, tv * sc.conj()));
        }
        let off = 2 * nb;
        for (k, &(c, cp, s)) in layout.iter().enumerate() {
            let t = cx(p[off + 2 * k], p[off + 2 * k + 1]);
            let h = lens2[c] - s;
            let donor = regen_l(&abar2, xi, &tops[cp].0, &tops[cp].1, lens2[cp]);
            newtops[c].0 += &donor.0[h - 1] * t;
            newtops[c].1 += &donor.1[h - 1] * t.conj();
        }
        newtops
            .iter()
            .enumerate()
            .map(|(c, (tu, tv))| regen_l(&abar2, xi, tu, tv, lens2[c]))
            .collect()
    };
    let residual = |p: &[f64]| -> Vec<f64> {
        let prs = rebuild(p);
        let mut r = Vec::new();
        for c in 0..nb {
            for cp in c..nb {
                let (uc, vc) = &prs[c];
                let (ucp, vcp) = &prs[cp];
                for i in 0..lens2[c] {
                    for j in 0..lens2[cp] {
                        let anti = c == cp && i + j == lens2[c] - 1;
                        let tgt = if anti { cx(1.0, 0.0) } else { Cx::default() };
                        push_cx(&mut r, bilin(&uc[i], &ucp[j]) - tgt);
                        push_cx(&mut r, bilin(&vc[i], &vcp[j]) - tgt);
                    }
                }
            }
        }
        r
    };
    let mut p0 = vec![0.0; 2 * nb + 2 * layout.len()];
    for c in 0..nb {
        p0[2 * c] = 1.0;
    }
    let (p, rn) = gauss_newton(&residual, p0, 60, 1e-12);
    if rn > 1e-7 {
        return Err(Error::ToleranceBreakdown(format!(
            "L Gram normalization stalled at {rn:.3e}"
        )));
    }
    Ok(rebuild(&p))
}

// ── Raw canonical blocks with witness columns ───────────────────────

/// A canonical block together with witness columns:
/// `A · cols = conj(cols) · block_matrix`.
#[derive(Debug, Clone)]
pub(crate) struct RawBlock {
    pub class: ConeigenClass,
    pub size: usize,
    pub param: Cx,
    pub eps: i8,
    pub cols: CMatrix,
}

/// `P_m = e^{-iπ/4}/√2 (I_m + i E_m)`, the block transform from quasi-Jordan
/// chains to the Hermitian blocks.
pub(crate) fn p_factor(m: usize) -> CMatrix {
    let e = backward_identity(m);
    let phase = Cx::from_polar(1.0 / 2.0f64.sqrt(), -std::f64::consts::FRAC_PI_4);
    (CMatrix::identity(m, m) + e * cx(0.0, 1.0)) * phase
}

/// Canonical matrix of a raw block (`ε H`, `K`, or `L`).
pub(crate) fn raw_block_matrix(b: &RawBlock) -> CMatrix {
    match b.class {
        ConeigenClass::NonnegReal => block_h(b.size, b.param) * cx(b.eps as f64, 0.0),
        ConeigenClass::NegReal => block_k(b.size, b.param),
        ConeigenClass::ComplexPair => block_l(b.size, b.param),
    }
}

/// Decompose `A` into canonical blocks with witness columns.
///
/// With `orthogonal = true` (Hermitian `A`) the Grams are normalized so the
/// stacked witness is complex orthogonal and the `ε` signs are extracted;
/// with `orthogonal = false` any consimilarity witness is produced and all
/// signs are `+1` (the all-plus Hermitian canonical form).
pub(crate) fn t_chain_blocks(
    a: &CMatrix,
    tol: &Tolerances,
    orthogonal: bool,
) -> Result<Vec<RawBlock>> {
    canonical_decomposition(a, tol, orthogonal).map(|(b, _, _)| b)
}

/// Full decomposition with verified assembly: blocks, canonical matrix `H`
/// and witness `Q` with `A Q = conj(Q) H` (and `Q^T Q = I` when orthogonal).
/// Retries across the cluster-gap ladder until the residuals check out.
pub(crate) fn canonical_decomposition(
    a: &CMatrix,
    tol: &Tolerances,
    orthogonal: bool,
) -> Result<(Vec<RawBlock>, CMatrix, CMatrix)> {
    let n = a.nrows();
    let scale = 1.0 + fro(a);
    let mut last = Error::ToleranceBreakdown("empty gap ladder".into());
    for gap in gap_ladder(a, tol) {
        let attempt = t_chain_blocks_with_gap(a, tol, orthogonal, gap)
            .and_then(|b| assemble_blocks(a, &b, orthogonal).map(|(h, q)| (b, h, q)));
        match attempt {
            Ok((b, h, q)) => {
                let rel_dev = (a * &q - conj_mat(&q) * &h).norm() / scale;
                let orth_dev = if orthogonal {
                    (q.transpose() * &q - CMatrix::identity(n, n)).norm()
                } else {
                    0.0
                };
                if rel_dev <= tol.residual_tol && orth_dev <= tol.residual_tol {
                    return Ok((b, h, q));
                }
                last = Error::ToleranceBreakdown(format!(
                    "witness residuals {orth_dev:.3e} / {rel_dev:.3e} at gap {gap:.1e}"
                ));
            }
            Err(e) => last = e,
        }
    }
    Err(last)
}

fn t_chain_blocks_with_gap(
    a: &CMatrix,
    tol: &Tolerances,
    orthogonal: bool,
    gap: f64,
) -> Result<Vec<RawBlock>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let abar = conj_mat(a);
    let groups = spectral_groups_with_gap(a, tol, gap)?;
    let mut blocks: Vec<RawBlock> = Vec::new();
    for g in &groups {
        match g.class {
            ConeigenClass::NonnegReal => {
                let x = g.param.re;
                let chains = h_chains(a, &abar, x, &g.sizes, tol)?;
                let normalized: Vec<(Vec<CVector>, i8)> = if orthogonal {
                    normalize_h_group(&abar, x, chains)?
                } else {
                    chains.into_iter().map(|c| (c, 1i8)).collect()
                };
                for (ch, mut e) in normalized {
                    let m = ch.len();
                    if x == 0.0 && m % 2 == 1 {
                        e = 1; // odd nilpotent blocks are sign-ambiguous
                    }
                    let u = hstack(&ch);
                    let mut conv = conj_mat(&p_factor(m));
                    if orthogonal && e == -1 {
                        conv *= cx(0.0, 1.0);
                    }
                    blocks.push(RawBlock {
                        class: ConeigenClass::NonnegReal,
                        size: m,
                        param: cx(x, 0.0),
                        eps: if orthogonal { e } else { 1 },
                        cols: &u * conv,
                    });
                }
            }
            ConeigenClass::NegReal => {
                let mu = g.param.re;
                let pairs = k_chains(a, &abar, mu, &g.sizes, tol)?;
                let pairs = if orthogonal {
                    normalize_k_group(&abar, mu, pairs)?
                } else {
                    pairs
                };
                for (us, vs) in pairs {
                    let m = us.len();
                    let mut cols: Vec<CVector> = us.clone();
                    cols.extend(vs.iter().cloned());
                    let u = hstack(&cols);
                    let pk = crate::matlin::direct_sum(&[p_factor(m), p_factor(m)])
                        * Cx::from_polar(1.0, std::f64::consts::FRAC_PI_4);
                    blocks.push(RawBlock {
                        class: ConeigenClass::NegReal,
                        size: m,
                        param: cx(mu, 0.0),
                        eps: 1,
                        cols: &u * conj_mat(&pk),
                    });
                }
            }
            ConeigenClass::ComplexPair => {
                let xi = g.param;
                let pairs = l_chains(a, &abar, xi, &g.sizes, tol)?;
                let pairs = if orthogonal {
                    normalize_l_group(&abar, xi, pairs)?
                } else {
                    pairs
                };
                for (us, vs) in pairs {
                    let m = us.len();
                    let mut cols: Vec<CVector> = us.clone();
                    cols.extend(vs.iter().cloned());
                    let u = hstack(&cols);
                    let pl = crate::matlin::direct_sum(&[p_factor(m), p_factor(m)]);
                    blocks.push(RawBlock {
                        class: ConeigenClass::ComplexPair,
                        size: m,
                        param: xi,
                        eps: 1,
                        cols: &u * conj_mat(&pl),
                    });
                }
            }
        }
    }
    blocks.sort_by(|p, q| {
        let kp = (class_rank(p.class), sort_param(p), p.size, -(p.eps as i32));
        let kq = (class_rank(q.class), sort_param(q), q.size, -(q.eps as i32));
        kp.partial_cmp(&kq).unwrap()
    });
    Ok(blocks)
}

fn class_rank(c: ConeigenClass) -> u8 {
    match c {
        ConeigenClass::NonnegReal => 0,
        ConeigenClass::NegReal => 1,
        ConeigenClass::ComplexPair => 2,
    }
}

fn sort_param(b: &RawBlock) -> (f64, f64) {
    match b.class {
        ConeigenClass::ComplexPair => (b.param.norm(), b.param.arg()),
        _ => (b.param.re, 0.0),
    }
}

/// Stack blocks into a witness and the canonical matrix; for orthogonal
/// witnesses run one polishing pass through the Gram square root (the Gram
/// lies in the stabilizer algebra of the relation).
pub(crate) fn assemble_blocks(
    a: &CMatrix,
    blocks: &[RawBlock],
    orthogonal: bool,
) -> Result<(CMatrix, CMatrix)> {
    let n = a.nrows();
    let mut q = CMatrix::zeros(n, n);
    let mut col = 0;
    let mut parts = Vec::new();
    for b in blocks {
        let w = b.cols.ncols();
        if col + w > n {
            return Err(Error::ToleranceBreakdown("blocks exceed dimension".into()));
        }
        q.view_mut((0, col), (n, w)).copy_from(&b.cols);
        col += w;
        parts.push(raw_block_matrix(b));
    }
    if col != n {
        return Err(Error::ToleranceBreakdown(format!(
            "blocks cover {col} of {n} columns"
        )));
    }
    let h = crate::matlin::direct_sum(&parts);
    if orthogonal {
        let s = q.transpose() * &q;
        if let Ok(shalf) = crate::matlin::principal_sqrt(&s) {
            if let Some(sinv) = shalf.lu().try_inverse() {
                let q2 = &q * sinv;
                let dev1 = (q.transpose() * &q - CMatrix::identity(n, n)).norm()
                    + (a * &q - conj_mat(&q) * &h).norm();
                let dev2 = (q2.transpose() * &q2 - CMatrix::identity(n, n)).norm()
                    + (a * &q2 - conj_mat(&q2) * &h).norm();
                if dev2 < dev1 {
                    q = q2;
                }
            }
        }
    }
    Ok((h, q))
}

/// Hermitian canonical form with all signs `+1` and a consimilarity witness:
/// `A W = conj(W) H1` with `W` nonsingular.
pub fn hermitian_canonical_h1(a: &CMatrix, tol: &Tolerances) -> Result<(CMatrix, CMatrix)> {
    let (_, h, w) = canonical_decomposition(a, tol, false)?;
    Ok((h, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matlin::from_rows;
    use crate::matlin::CVector;

    fn tol() -> Tolerances {
        Tolerances::default_for(4)
    }

    #[test]
    fn block_builders_match_displays() {
        // H_1(x) = [x]
        assert!((block_h(1, cx(0.7, 0.0)) - from_rows(&[vec![cx(0.7, 0.0)]])).norm() < 1e-15);
        // H_2(x) = 1/2 [[1, 2x+i],[2x-i, 1]]
        let h2 = block_h(2, cx(1.5, 0.0));
        let want = from_rows(&[
            vec![cx(0.5, 0.0), cx(1.5, 0.5)],
            vec![cx(1.5, -0.5), cx(0.5, 0.0)],
        ]);
        assert!((h2 - want).norm() < 1e-15);
        // H_3(0) = 1/2 [[0,1+i,0],[1-i,0,1+i],[0,1-i,0]]
        let h30 = block_h(3, Cx::default());
        let want = from_rows(&[
            vec![Cx::default(), cx(0.5, 0.5), Cx::default()],
            vec![cx(0.5, -0.5), Cx::default(), cx(0.5, 0.5)],
            vec![Cx::default(), cx(0.5, -0.5), Cx::default()],
        ]);
        assert!((h30 - want).norm() < 1e-15);
        // K_1(y) = [[0, -iy],[iy, 0]], L_1(z) = [[0, z],[conj z, 0]]
        let k1 = block_k(1, cx(2.0, 0.0));
        let want = from_rows(&[
            vec![Cx::default(), cx(0.0, -2.0)],
            vec![cx(0.0, 2.0), Cx::default()],
        ]);
        assert!((k1 - want).norm() < 1e-15);
        let l1 = block_l(1, cx(1.0, 2.0));
        let want = from_rows(&[
            vec![Cx::default(), cx(1.0, 2.0)],
            vec![cx(1.0, -2.0), Cx::default()],
        ]);
        assert!((l1 - want).norm() < 1e-15);
        // L_1(-iy) = K_1(y)
        assert!((block_l(1, cx(0.0, -3.0)) - block_k(1, cx(3.0, 0.0))).norm() < 1e-15);
    }

    #[test]
    fn h4_block_matches_display() {
        let x = 0.8;
        let h4 = block_h(4, cx(x, 0.0));
        let want = from_rows(&[
            vec![Cx::default(), cx(0.0, 0.5), cx(0.5, 0.0), cx(x, 0.0)],
            vec![cx(0.0, -0.5), cx(0.5, 0.0), cx(x, 0.5), cx(0.5, 0.0)],
            vec![cx(0.5, 0.0), cx(x, -0.5), cx(0.5, 0.0), cx(0.0, 0.5)],
            vec![cx(x, 0.0), cx(0.5, 0.0), cx(0.0, -0.5), Cx::default()],
        ]);
        assert!((h4 - want).norm() < 1e-15);
    }

    #[test]
    fn alt_ranks_basics() {
        let t = tol();
        assert_eq!(
            alternating_rank_sequence(&CMatrix::zeros(2, 2), &t),
            vec![0, 0, 0, 0]
        );
        assert_eq!(alternating_rank_sequence(&CMatrix::identity(3, 3), &t), vec![3; 6]);
        let h20 = block_h(2, Cx::default());
        assert_eq!(alternating_rank_sequence(&h20, &t), vec![1, 0, 0, 0]);
    }

    #[test]
    fn structure_identity() {
        let st = coneigen_structure(&CMatrix::identity(3, 3), &tol()).unwrap();
        assert_eq!(st.blocks.len(), 3);
        for b in &st.blocks {
            assert_eq!(b.class, ConeigenClass::NonnegReal);
            assert!((b.parameter - cx(1.0, 0.0)).norm() < 1e-9);
            assert_eq!(b.size, 1);
        }
    }

    #[test]
    fn structure_k1() {
        let k1 = block_k(1, cx(1.0, 0.0));
        let prod = &k1 * conj_mat(&k1);
        assert!((prod + CMatrix::identity(2, 2)).norm() < 1e-12);
        let st = coneigen_structure(&k1, &tol()).unwrap();
        assert_eq!(st.blocks.len(), 1);
        assert_eq!(st.blocks[0].class, ConeigenClass::NegReal);
        assert!((st.blocks[0].parameter - cx(1.0, 0.0)).norm() < 1e-9);
        assert_eq!(st.blocks[0].size, 1);
    }

    #[test]
    fn structure_h3_zero() {
        let h30 = block_h(3, Cx::default());
        let st = coneigen_structure(&h30, &tol()).unwrap();
        assert_eq!(st.blocks.len(), 1);
        assert_eq!(st.blocks[0].class, ConeigenClass::NonnegReal);
        assert_eq!(st.blocks[0].size, 3);
        assert!(st.blocks[0].parameter.norm() < 1e-9);
    }

    #[test]
    fn quasi_jordan_k1() {
        let k1 = block_k(1, cx(1.0, 0.0));
        let qj = quasi_jordan_form(&k1, &tol()).unwrap();
        let expect = from_rows(&[
            vec![Cx::default(), cx(1.0, 0.0)],
            vec![cx(-1.0, 0.0), Cx::default()],
        ]);
        assert!((qj.matrix - expect).norm() < 1e-9);
    }

    #[test]
    fn double_embed_scalars() {
        let a = from_rows(&[vec![cx(1.0, 0.0)]]);
        let (hat, tilde) = double_size_embed(&a);
        let e2 = backward_identity(2);
        assert!((hat - e2).norm() < 1e-15);
        let want = from_rows(&[
            vec![cx(1.0, 0.0), Cx::default()],
            vec![Cx::default(), cx(-1.0, 0.0)],
        ]);
        assert!((tilde - want).norm() < 1e-15);
        let b = from_rows(&[vec![cx(0.0, 1.0)]]);
        let (hatb, tildeb) = double_size_embed(&b);
        let want_hat = from_rows(&[
            vec![Cx::default(), cx(0.0, -1.0)],
            vec![cx(0.0, 1.0), Cx::default()],
        ]);
        assert!((hatb - want_hat).norm() < 1e-15);
        assert!((tildeb - backward_identity(2)).norm() < 1e-15);
    }

    #[test]
    fn double_block_eigs_scalar() {
        let a = from_rows(&[vec![cx(0.0, 2.0)]]);
        let pairs = double_block_eigenvectors(&a, &tol()).unwrap();
        assert_eq!(pairs.len(), 2);
        let m = from_rows(&[
            vec![Cx::default(), cx(0.0, 2.0)],
            vec![cx(0.0, -2.0), Cx::default()],
        ]);
        for (lam, v) in pairs {
            assert!((lam.abs() - 2.0).abs() < 1e-12);
            assert!(((&m * &v) - v.scale(lam)).norm() < 1e-10);
        }
    }

    #[test]
    fn h1_diag_fixed_point() {
        let a = CMatrix::from_diagonal(&CVector::from_vec(vec![cx(2.0, 0.0), cx(3.0, 0.0)]));
        let (h1, w) = hermitian_canonical_h1(&a, &tol()).unwrap();
        assert!((&h1 - &a).norm() < 1e-9);
        assert!((&a * &w - conj_mat(&w) * &h1).norm() < 1e-9);
    }

    #[test]
    fn h1_quasi_jordan_k_block() {
        let qj = from_rows(&[
            vec![Cx::default(), cx(1.0, 0.0)],
            vec![cx(-1.0, 0.0), Cx::default()],
        ]);
        let (h1, w) = hermitian_canonical_h1(&qj, &tol()).unwrap();
        let k1 = block_k(1, cx(1.0, 0.0));
        assert!((&h1 - &k1).norm() < 1e-9, "h1 = {h1}");
        assert!((&qj * &w - conj_mat(&w) * &h1).norm() < 1e-9);
    }

    #[test]
    fn h1_h3_zero_idempotent() {
        let h30 = block_h(3, Cx::default());
        let (h1, w) = hermitian_canonical_h1(&h30, &tol()).unwrap();
        assert!((&h1 - &h30).norm() < 1e-9);
        assert!((&h30 * &w - conj_mat(&w) * &h1).norm() < 1e-9);
    }
}
