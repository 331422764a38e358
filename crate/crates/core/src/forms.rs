//! The three normal forms of a Hermitian matrix under the pair equivalence
//! `(A, I) ~ (±Q* A Q, Q^T Q)` with `Q` complex orthogonal, plus the generic
//! fast path and the closed-form small-block reference tables.

use crate::consim::{self, ConeigenClass, RawBlock};
pub use crate::consim::{block_h, block_k, block_l, jordan_block};
use crate::matlin::{
    self, backward_identity, conj_mat, cx, direct_sum, fro, CMatrix, CVector, Cx, InertiaTriple,
    Tolerances,
};
use crate::{Error, Result};

/// Block kind of the Hermitian canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    H,
    K,
    L,
}

/// One canonical block `ε H_m(λ)`, `K_m(μ)` or `L_m(ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormBlock {
    pub kind: BlockKind,
    pub size: usize,
    pub parameter: Cx,
    /// Sign; `K` and `L` blocks always carry `+1`.
    pub eps: i8,
}

impl FormBlock {
    pub fn dim(&self) -> usize {
        match self.kind {
            BlockKind::H => self.size,
            _ => 2 * self.size,
        }
    }

    pub fn matrix(&self) -> CMatrix {
        match self.kind {
            BlockKind::H => block_h(self.size, self.parameter) * cx(self.eps as f64, 0.0),
            BlockKind::K => block_k(self.size, self.parameter),
            BlockKind::L => block_l(self.size, self.parameter),
        }
    }
}

fn kind_of(c: ConeigenClass) -> BlockKind {
    match c {
        ConeigenClass::NonnegReal => BlockKind::H,
        ConeigenClass::NegReal => BlockKind::K,
        ConeigenClass::ComplexPair => BlockKind::L,
    }
}

/// FORM 1: the Hermitian block canonical form with a complex orthogonal
/// witness: `global_sign · Q* A Q = assembled`, `Q^T Q = I`.
#[derive(Debug, Clone)]
pub struct Form1 {
    pub blocks: Vec<FormBlock>,
    pub assembled: CMatrix,
    pub witness: CMatrix,
    pub global_sign: i8,
}

impl Form1 {
    /// Blocks agree (kind, size, sign; parameters within `gap`).
    pub fn blocks_match(&self, other: &Form1, gap: f64) -> bool {
        blocks_match(&self.blocks, &other.blocks, gap)
    }
}

/// Compare two canonical block lists.
pub fn blocks_match(a: &[FormBlock], b: &[FormBlock], gap: f64) -> bool {
    a.len() == b.len()
        && a.iter().zip(b.iter()).all(|(x, y)| {
            x.kind == y.kind
                && x.size == y.size
                && x.eps == y.eps
                && (x.parameter - y.parameter).norm() <= gap
        })
}

/// Eigenvalue datum of a FORM 2 block.
#[derive(Debug, Clone, PartialEq)]
pub enum Form2Eigen {
    /// Real eigenvalue `λ ≥ 0` of the double-size matrix.
    Real(f64),
    /// Rotation block `[[a, -b],[b, a]]`, `a ≥ 0`, `b > 0`.
    Rotation { a: f64, b: f64 },
}

/// One FORM 2 block `ε E J(λ)` or `E J(Λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Form2Block {
    pub size: usize,
    pub eigen: Form2Eigen,
    pub eps: i8,
}

/// FORM 2: the backward-identity Jordan pair `(J_E, E)`.
#[derive(Debug, Clone)]
pub struct Form2 {
    pub blocks: Vec<Form2Block>,
    pub j_matrix: CMatrix,
    pub e_matrix: CMatrix,
}

/// FORM 3: the inertia pair `(I(A), N_I(A))`.
#[derive(Debug, Clone)]
pub struct Form3 {
    /// Inertia of the assembled FORM 1 matrix; its transform maps the
    /// canonical form onto `-I_p ⊕ I_r ⊕ 0`.
    pub inertia: InertiaTriple,
    /// `N = P^T P` for the full transform `P` from `(A, I)`.
    pub n_matrix: CMatrix,
    /// Total transform with `P* A P = I(A)`, `P^T P = N`.
    pub witness: CMatrix,
}

fn raw_to_block(b: &RawBlock) -> FormBlock {
    FormBlock {
        kind: kind_of(b.class),
        size: b.size,
        parameter: b.param,
        eps: b.eps,
    }
}

/// FORM 1 of a Hermitian matrix, with verified complex orthogonal witness.
pub fn form1(a: &CMatrix, tol: &Tolerances) -> Result<Form1> {
    matlin::check_hermitian(a, tol)?;
    let (raw, h, q) = consim::canonical_decomposition(a, tol, true)?;
    Ok(Form1 {
        blocks: raw.iter().map(raw_to_block).collect(),
        assembled: h,
        witness: q,
        global_sign: 1,
    })
}

/// FORM 2 derived from the FORM 1 block data: block dimensions and
/// eigenvalues agree between the two forms.
pub fn form2(a: &CMatrix, tol: &Tolerances) -> Result<Form2> {
    let f1 = form1(a, tol)?;
    Ok(form2_from_blocks(&f1.blocks))
}

pub(crate) fn form2_from_blocks(blocks: &[FormBlock]) -> Form2 {
    let mut out = Vec::new();
    for b in blocks {
        match b.kind {
            BlockKind::H => out.push(Form2Block {
                size: b.size,
                eigen: Form2Eigen::Real(b.parameter.re),
                eps: b.eps,
            }),
            BlockKind::K => out.push(Form2Block {
                size: b.size,
                eigen: Form2Eigen::Rotation {
                    a: 0.0,
                    b: b.parameter.re,
                },
                eps: 1,
            }),
            BlockKind::L => out.push(Form2Block {
                size: b.size,
                eigen: Form2Eigen::Rotation {
                    a: b.parameter.re,
                    b: b.parameter.im,
                },
                eps: 1,
            }),
        }
    }
    let mut jparts = Vec::new();
    let mut eparts = Vec::new();
    for b in &out {
        let (j, e) = form2_block_matrices(b);
        jparts.push(j);
        eparts.push(e);
    }
    Form2 {
        blocks: out,
        j_matrix: direct_sum(&jparts),
        e_matrix: direct_sum(&eparts),
    }
}

/// `(ε E_m J_m(λ,1), E_m)` or `(E_{2m} J_m(Λ, I_2), E_{2m})`.
pub fn form2_block_matrices(b: &Form2Block) -> (CMatrix, CMatrix) {
    match b.eigen {
        Form2Eigen::Real(lam) => {
            let m = b.size;
            let e = backward_identity(m);
            let j = jordan_block(m, cx(lam, 0.0));
            ((&e * j) * cx(b.eps as f64, 0.0), e)
        }
        Form2Eigen::Rotation { a, b: bb } => {
            let m = b.size;
            let e = backward_identity(2 * m);
            let lam = CMatrix::from_row_slice(
                2,
                2,
                &[cx(a, 0.0), cx(-bb, 0.0), cx(bb, 0.0), cx(a, 0.0)],
            );
            let mut j = CMatrix::zeros(2 * m, 2 * m);
            for k in 0..m {
                j.view_mut((2 * k, 2 * k), (2, 2)).copy_from(&lam);
                if k + 1 < m {
                    j.view_mut((2 * k, 2 * k + 2), (2, 2))
                        .copy_from(&CMatrix::identity(2, 2));
                }
            }
            (&e * j, e)
        }
    }
}

/// Convert FORM 2 back to FORM 1 block by block: Takagi-normalize the
/// backward identity with `U^T E U = I` and canonicalize `U* (E J) U`.
///
/// The returned witness `T` maps the assembled FORM 2 pair onto the FORM 1
/// pair: `T* J_E T = assembled`, `T^T E T = I`.
pub fn form2_to_form1(f: &Form2, tol: &Tolerances) -> Result<Form1> {
    let mut blocks: Vec<FormBlock> = Vec::new();
    let mut t_parts: Vec<CMatrix> = Vec::new();
    for b in &f.blocks {
        let (ej, e) = form2_block_matrices(b);
        let m = ej.nrows();
        // U = conj(P_m) satisfies U^T E_m U = I exactly.
        let u = conj_mat(&consim::p_factor(m));
        let edev = (u.transpose() * &e * &u - CMatrix::identity(m, m)).norm();
        if edev > tol.residual_tol * 10.0 {
            return Err(Error::ToleranceBreakdown(format!(
                "backward identity normalization residual {edev:.3e}"
            )));
        }
        let a = u.adjoint() * &ej * &u;
        let a = (&a + a.adjoint()).scale(0.5);
        let f1 = form1(&a, tol)?;
        if f1.blocks.len() != 1 {
            return Err(Error::ToleranceBreakdown(format!(
                "form2 block split into {} form1 blocks",
                f1.blocks.len()
            )));
        }
        blocks.push(f1.blocks[0].clone());
        t_parts.push(&u * &f1.witness);
    }
    let witness = direct_sum(&t_parts);
    let assembled = direct_sum(&blocks.iter().map(|b| b.matrix()).collect::<Vec<_>>());
    Ok(Form1 {
        blocks,
        assembled,
        witness,
        global_sign: 1,
    })
}

/// FORM 3 of a Hermitian matrix: inertia of the canonical form plus the
/// symmetric image `N = P^T P` of the identity, with total witness from `A`.
pub fn form3(a: &CMatrix, tol: &Tolerances) -> Result<Form3> {
    let f1 = form1(a, tol)?;
    form3_from_form1(a, &f1, tol)
}

pub(crate) fn form3_from_form1(a: &CMatrix, f1: &Form1, tol: &Tolerances) -> Result<Form3> {
    let inertia = matlin::sylvester_inertia(&f1.assembled, tol)?;
    let q2 = inertia.transform.clone();
    let total = &f1.witness * &q2;
    let n_matrix = total.transpose() * &total;
    let n_matrix = (&n_matrix + n_matrix.transpose()).scale(0.5);
    let resid_a = (total.adjoint() * a * &total - inertia.matrix()).norm() / (1.0 + fro(a));
    if resid_a > tol.residual_tol * 10.0 {
        return Err(Error::ToleranceBreakdown(format!(
            "form3 witness residual {resid_a:.3e}"
        )));
    }
    Ok(Form3 {
        inertia,
        n_matrix,
        witness: total,
    })
}

// ── Polynomial helpers (characteristic polynomial, resultant) ───────

/// Monic characteristic polynomial coefficients of `M`, ascending powers:
/// `det(λI - M) = c[0] + c[1] λ + ... + λ^n`.
pub fn char_poly(m: &CMatrix) -> Vec<Cx> {
    // Faddeev-LeVerrier.
    let n = m.nrows();
    let mut coeffs = vec![Cx::default(); n + 1];
    coeffs[n] = cx(1.0, 0.0);
    let mut aux = CMatrix::identity(n, n);
    for k in 1..=n {
        aux = m * aux;
        let tr: Cx = (0..n).map(|i| aux[(i, i)]).sum();
        let c = -tr / cx(k as f64, 0.0);
        coeffs[n - k] = c;
        for i in 0..n {
            aux[(i, i)] += c;
        }
    }
    coeffs
}

/// Resultant of two polynomials (ascending coefficients) via the Sylvester
/// matrix determinant.
pub fn resultant(p: &[Cx], q: &[Cx]) -> Cx {
    let dp = p.len() - 1;
    let dq = q.len() - 1;
    if dp == 0 || dq == 0 {
        if dp == 0 {
            return p[0].powu(dq as u32);
        }
        return q[0].powu(dp as u32);
    }
    let n = dp + dq;
    let mut s = CMatrix::zeros(n, n);
    for r in 0..dq {
        for (k, idx) in (0..=dp).rev().enumerate() {
            s[(r, r + k)] = p[idx];
        }
    }
    for r in 0..dp {
        for (k, idx) in (0..=dq).rev().enumerate() {
            s[(dq + r, r + k)] = q[idx];
        }
    }
    s.lu().determinant()
}

/// Derivative of a polynomial (ascending coefficients).
pub fn poly_derivative(p: &[Cx]) -> Vec<Cx> {
    if p.len() <= 1 {
        return vec![Cx::default()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * cx(k as f64, 0.0))
        .collect()
}

/// Discriminant `(-1)^{n(n-1)/2} Res(p, p') / lc(p)`.
pub fn poly_discriminant(p: &[Cx]) -> Cx {
    let n = p.len() - 1;
    if n == 0 {
        return cx(1.0, 0.0);
    }
    let dp = poly_derivative(p);
    let res = resultant(p, &dp);
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    res / p[n] * cx(sign, 0.0)
}

/// Scale against which a computed resultant should be judged: product of the
/// coefficient-norm bounds of the Sylvester matrix rows.
pub fn resultant_scale(p: &[Cx], q: &[Cx]) -> f64 {
    let np: f64 = p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    let nq: f64 = q.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    np.powi((q.len() - 1) as i32) * nq.powi((p.len() - 1) as i32)
}

/// Generic fast path: when the discriminant of the characteristic polynomial
/// of `A·conj(A)` is (relatively) nonzero, all blocks are `±H_1` and `L_1`
/// and the three forms take the simple closed structures. Returns `None`
/// when the discriminant test fails.
pub fn generic_forms(a: &CMatrix, tol: &Tolerances) -> Result<Option<(Form1, Form2, Form3)>> {
    matlin::check_hermitian(a, tol)?;
    let m = a * conj_mat(a);
    let p = char_poly(&m);
    let dp = poly_derivative(&p);
    let res = resultant(&p, &dp);
    let scale = resultant_scale(&p, &dp);
    if res.norm() <= tol.rank_tol * scale {
        return Ok(None);
    }
    let f1 = form1(a, tol)?;
    if f1.blocks.iter().any(|b| b.size != 1 || b.kind == BlockKind::K) {
        return Err(Error::ToleranceBreakdown(
            "discriminant test passed but blocks are not generic".into(),
        ));
    }
    let f2 = form2_from_blocks(&f1.blocks);
    let f3 = form3_from_form1(a, &f1, tol)?;
    Ok(Some((f1, f2, f3)))
}

/// The closed-form inertia/symmetric pair of the generic structure: for each
/// `ε x` block the entries `(ε, 1/x)` (or `(0, 1)` at `x = 0`), and for each
/// `L_1(ξ)` the pair `(diag(-1, 1), N(ξ))`.
pub fn generic_inertia_pair(blocks: &[FormBlock]) -> Result<(CMatrix, CMatrix)> {
    let mut iparts = Vec::new();
    let mut nparts = Vec::new();
    for b in blocks {
        if b.size != 1 {
            return Err(Error::Unsupported("generic pair needs size-1 blocks".into()));
        }
        match b.kind {
            BlockKind::H => {
                let x = b.parameter.re;
                if x == 0.0 {
                    iparts.push(CMatrix::zeros(1, 1));
                    nparts.push(CMatrix::identity(1, 1));
                } else {
                    iparts.push(CMatrix::identity(1, 1) * cx(b.eps as f64, 0.0));
                    nparts.push(CMatrix::identity(1, 1) * cx(1.0 / x, 0.0));
                }
            }
            BlockKind::K | BlockKind::L => {
                let xi = if b.kind == BlockKind::L {
                    b.parameter
                } else {
                    cx(0.0, -b.parameter.re) // K_1(y) = L_1(-iy)
                };
                iparts.push(CMatrix::from_row_slice(
                    2,
                    2,
                    &[cx(-1.0, 0.0), Cx::default(), Cx::default(), cx(1.0, 0.0)],
                ));
                nparts.push(n_matrix_l1(xi));
            }
        }
    }
    Ok((direct_sum(&iparts), direct_sum(&nparts)))
}

// ── Small-block reference tables ────────────────────────────────────

/// Closed-form reference data for the tabulated small blocks.
#[derive(Debug, Clone)]
pub struct SmallBlockReference {
    /// Monic characteristic polynomial, ascending coefficients.
    pub char_poly: Vec<f64>,
    /// Eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// The tabulated `N_I` matrix, when one is listed.
    pub n_matrix: Option<CMatrix>,
    /// Closed-form discriminant of the characteristic polynomial, when the
    /// table gives one.
    pub discriminant: Option<f64>,
}

/// `N_{I_2}(L_1(z))`.
pub fn n_matrix_l1(z: Cx) -> CMatrix {
    let s = cx(1.0, 0.0) / (2.0 * z.conj() * z.norm());
    CMatrix::from_row_slice(
        2,
        2,
        &[
            (z + z.conj()) * s,
            (z.conj() - z) * s,
            (z.conj() - z) * s,
            (z + z.conj()) * s,
        ],
    )
}

/// `N_{I_2}(H_2(x))` (backward identity at `x = 0`).
pub fn n_matrix_h2(x: f64) -> CMatrix {
    if x == 0.0 {
        return backward_identity(2);
    }
    let w = (1.0 + 4.0 * x * x).sqrt();
    let s = cx(1.0, 0.0) / cx(2.0 * x, -1.0);
    CMatrix::from_row_slice(
        2,
        2,
        &[
            cx(4.0 * x / (w - 1.0), 0.0) * s,
            cx(0.0, -1.0 / x) * s,
            cx(0.0, -1.0 / x) * s,
            cx(4.0 * x / (w + 1.0), 0.0) * s,
        ],
    )
}

/// `N_{I_3}(H_3(0)) = 1/2 [[i,-i,√2],[-i,i,√2],[√2,√2,0]]`.
pub fn n_matrix_h3_zero() -> CMatrix {
    let r2 = 2.0f64.sqrt();
    CMatrix::from_row_slice(
        3,
        3,
        &[
            cx(0.0, 0.5),
            cx(0.0, -0.5),
            cx(r2 / 2.0, 0.0),
            cx(0.0, -0.5),
            cx(0.0, 0.5),
            cx(r2 / 2.0, 0.0),
            cx(r2 / 2.0, 0.0),
            cx(r2 / 2.0, 0.0),
            Cx::default(),
        ],
    )
}

/// `N_{I_3}(H_3(x)) = -i [r(λ_j, λ_k) s(λ_j) s(λ_k)]`, eigenvalues ascending.
pub fn n_matrix_h3(x: f64) -> CMatrix {
    if x == 0.0 {
        return n_matrix_h3_zero();
    }
    let eigs = h3_eigenvalues(x);
    let r = |l: f64, m: f64| -> f64 {
        l * l * m * m - x * x * (l * l + m * m) + x * (l + m) + x.powi(4)
    };
    let s = |l: f64| -> Cx {
        let num = cx((l * l + x * x).sqrt(), 0.0);
        let den = cx(x, -l)
            * cx(
                (l.abs() * (l.powi(4) + l * l * (1.0 - 2.0 * x * x) + x * x + x.powi(4))).sqrt(),
                0.0,
            );
        num / den
    };
    CMatrix::from_fn(3, 3, |j, k| {
        cx(0.0, -1.0) * cx(r(eigs[j], eigs[k]), 0.0) * s(eigs[j]) * s(eigs[k])
    })
}

/// `N_{I_2}(K_1(y)) = (1/y) E_2`.
pub fn n_matrix_k1(y: f64) -> CMatrix {
    backward_identity(2) * cx(1.0 / y, 0.0)
}

/// `N_{I_4}(K_2(y))`.
pub fn n_matrix_k2(y: f64) -> CMatrix {
    let w = (1.0 + 4.0 * y * y).sqrt();
    let s = cx(1.0, 0.0) / (cx(y, 0.0) * cx(2.0 * y, -1.0));
    let p = cx(4.0 * y / (1.0 + w), 0.0);
    let q = cx(4.0 * y / (w - 1.0), 0.0);
    let mi = cx(0.0, -1.0);
    let z = Cx::default();
    CMatrix::from_row_slice(
        4,
        4,
        &[
            z, mi, z, p, //
            mi, z, q, z, //
            z, q, z, mi, //
            p, z, mi, z,
        ],
    ) * s
}

/// Real roots of the depressed cubic `t³ + p t + q` (three real roots).
fn cubic_real_roots(p: f64, q: f64) -> [f64; 3] {
    if p.abs() < 1e-300 {
        let r = -q.signum() * q.abs().cbrt();
        return [r, r, r];
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
    let theta = arg.acos() / 3.0;
    let mut roots = [
        m * theta.cos(),
        m * (theta - 2.0 * std::f64::consts::PI / 3.0).cos(),
        m * (theta - 4.0 * std::f64::consts::PI / 3.0).cos(),
    ];
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// Eigenvalues of `H_3(x)`: roots of `λ³ - xλ² - (x²+1)λ + x³`, ascending.
pub fn h3_eigenvalues(x: f64) -> [f64; 3] {
    let b = -x;
    let c = -(x * x + 1.0);
    let d = x.powi(3);
    let p = c - b * b / 3.0;
    let q = 2.0 * b.powi(3) / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let mut r = cubic_real_roots(p, q);
    for v in &mut r {
        *v += shift;
    }
    r
}

/// Eigenvalues of `H_4(x)`: roots of `λ⁴ - λ³ - (2x²+1)λ² + (x²+1)λ + x⁴`
/// through the companion matrix (no closed form is tabulated).
pub fn h4_eigenvalues(x: f64) -> [f64; 4] {
    let coeffs = [x.powi(4), x * x + 1.0, -(2.0 * x * x + 1.0), -1.0];
    let mut comp = nalgebra::DMatrix::<f64>::zeros(4, 4);
    for i in 1..4 {
        comp[(i, i - 1)] = 1.0;
    }
    for (i, c) in coeffs.iter().enumerate() {
        comp[(i, 3)] = -c;
    }
    let eig = comp.schur().complex_eigenvalues();
    let mut out: Vec<f64> = eig.iter().map(|z| z.re).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    [out[0], out[1], out[2], out[3]]
}

/// Closed-form reference data for the tabulated `(kind, m)` combinations.
pub fn small_block_reference(kind: BlockKind, m: usize, param: Cx) -> Result<SmallBlockReference> {
    match (kind, m) {
        (BlockKind::H, 1) => {
            let x = param.re;
            Ok(SmallBlockReference {
                char_poly: vec![-x, 1.0],
                eigenvalues: vec![x],
                n_matrix: Some(
                    CMatrix::identity(1, 1) * cx(if x != 0.0 { 1.0 / x } else { 1.0 }, 0.0),
                ),
                discriminant: Some(1.0),
            })
        }
        (BlockKind::H, 2) => {
            let x = param.re;
            let w = (1.0 + 4.0 * x * x).sqrt();
            Ok(SmallBlockReference {
                char_poly: vec![-x * x, -1.0, 1.0],
                eigenvalues: vec![0.5 * (1.0 - w), 0.5 * (1.0 + w)],
                n_matrix: Some(n_matrix_h2(x)),
                discriminant: Some(1.0 + 4.0 * x * x),
            })
        }
        (BlockKind::H, 3) => {
            let x = param.re;
            let e = h3_eigenvalues(x);
            Ok(SmallBlockReference {
                char_poly: vec![x.powi(3), -(x * x + 1.0), -x, 1.0],
                eigenvalues: e.to_vec(),
                n_matrix: Some(n_matrix_h3(x)),
                // never vanishes
                discriminant: Some(32.0 * x.powi(4) + 13.0 * x * x + 4.0),
            })
        }
        (BlockKind::H, 4) => {
            let x = param.re;
            Ok(SmallBlockReference {
                char_poly: vec![x.powi(4), x * x + 1.0, -(2.0 * x * x + 1.0), -1.0, 1.0],
                eigenvalues: h4_eigenvalues(x).to_vec(),
                n_matrix: None,
                // multiple eigenvalues precisely at x = 0
                discriminant: None,
            })
        }
        (BlockKind::K, 1) => {
            let y = param.re;
            Ok(SmallBlockReference {
                char_poly: vec![-y * y, 0.0, 1.0],
                eigenvalues: vec![-y, y],
                n_matrix: Some(n_matrix_k1(y)),
                discriminant: Some(4.0 * y * y),
            })
        }
        (BlockKind::K, 2) => {
            let y = param.re;
            let w = (1.0 + 4.0 * y * y).sqrt();
            let mut e = vec![
                0.5 * (-1.0 - w),
                0.5 * (-1.0 + w),
                0.5 * (1.0 - w),
                0.5 * (1.0 + w),
            ];
            e.sort_by(|a, b| a.partial_cmp(b).unwrap());
            Ok(SmallBlockReference {
                char_poly: vec![y.powi(4), 0.0, -(2.0 * y * y + 1.0), 0.0, 1.0],
                eigenvalues: e,
                n_matrix: Some(n_matrix_k2(y)),
                discriminant: None,
            })
        }
        (BlockKind::L, 1) => {
            let z = param;
            Ok(SmallBlockReference {
                char_poly: vec![-z.norm_sqr(), 0.0, 1.0],
                eigenvalues: vec![-z.norm(), z.norm()],
                n_matrix: Some(n_matrix_l1(z)),
                discriminant: Some(4.0 * z.norm_sqr()),
            })
        }
        (BlockKind::L, 2) => {
            let c = param.norm_sqr();
            let w = (1.0 + 4.0 * c).sqrt();
            let mut e = vec![
                0.5 * (-1.0 - w),
                0.5 * (-1.0 + w),
                0.5 * (1.0 - w),
                0.5 * (1.0 + w),
            ];
            e.sort_by(|a, b| a.partial_cmp(b).unwrap());
            Ok(SmallBlockReference {
                char_poly: vec![c * c, 0.0, -(2.0 * c + 1.0), 0.0, 1.0],
                eigenvalues: e,
                n_matrix: None,
                discriminant: None,
            })
        }
        _ => Err(Error::Unsupported(format!(
            "no tabulated reference for kind {kind:?} size {m}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default_for(4)
    }

    fn check_form1(a: &CMatrix, f: &Form1) {
        let n = a.nrows();
        let q = &f.witness;
        assert!(
            (q.transpose() * q - CMatrix::identity(n, n)).norm() < 1e-8,
            "witness not orthogonal"
        );
        assert!(
            (q.adjoint() * a * q - &f.assembled).norm() < 1e-8 * (1.0 + fro(a)),
            "congruence residual too large"
        );
    }

    #[test]
    fn form1_diag_signs() {
        let a = CMatrix::from_diagonal(&CVector::from_vec(vec![cx(2.0, 0.0), cx(-3.0, 0.0)]));
        let f = form1(&a, &tol()).unwrap();
        assert_eq!(f.blocks.len(), 2);
        assert_eq!(f.blocks[0].kind, BlockKind::H);
        assert_eq!(f.blocks[0].eps, 1);
        assert!((f.blocks[0].parameter.re - 2.0).abs() < 1e-9);
        assert_eq!(f.blocks[1].eps, -1);
        assert!((f.blocks[1].parameter.re - 3.0).abs() < 1e-9);
        check_form1(&a, &f);
    }

    #[test]
    fn form1_zero_matrix() {
        let a = CMatrix::zeros(3, 3);
        let f = form1(&a, &tol()).unwrap();
        assert_eq!(f.blocks.len(), 3);
        for b in &f.blocks {
            assert_eq!(b.kind, BlockKind::H);
            assert_eq!(b.size, 1);
            assert!(b.parameter.norm() < 1e-12);
        }
        check_form1(&a, &f);
    }

    #[test]
    fn form1_k1_fixed_point() {
        let a = block_k(1, cx(1.0, 0.0));
        let f = form1(&a, &tol()).unwrap();
        assert_eq!(f.blocks.len(), 1);
        assert_eq!(f.blocks[0].kind, BlockKind::K);
        assert_eq!(f.blocks[0].size, 1);
        assert!((f.blocks[0].parameter.re - 1.0).abs() < 1e-9);
        check_form1(&a, &f);
        assert!((&f.assembled - &a).norm() < 1e-9);
    }

    #[test]
    fn form1_h2_fixed_point() {
        for x in [0.0f64, 0.7] {
            let a = block_h(2, cx(x, 0.0));
            let f = form1(&a, &tol()).unwrap();
            assert_eq!(f.blocks.len(), 1, "x={x}: {:?}", f.blocks);
            assert_eq!(f.blocks[0].kind, BlockKind::H);
            assert_eq!(f.blocks[0].size, 2);
            assert_eq!(f.blocks[0].eps, 1);
            check_form1(&a, &f);
        }
    }

    #[test]
    fn form1_h3_and_h4() {
        for (m, x) in [(3usize, 0.0f64), (3, 1.2), (4, 0.0), (4, 0.9)] {
            let a = block_h(m, cx(x, 0.0));
            let f = form1(&a, &tol()).unwrap();
            assert_eq!(f.blocks.len(), 1, "m={m} x={x}: {:?}", f.blocks);
            assert_eq!(f.blocks[0].size, m);
            check_form1(&a, &f);
        }
    }

    #[test]
    fn form1_k2_l1_l2() {
        let cases: Vec<CMatrix> = vec![
            block_k(2, cx(0.8, 0.0)),
            block_l(1, cx(1.0, 1.0)),
            block_l(2, cx(0.5, 1.0)),
        ];
        for a in cases {
            let f = form1(&a, &tol()).unwrap();
            assert_eq!(f.blocks.len(), 1, "{:?}", f.blocks);
            check_form1(&a, &f);
        }
    }

    #[test]
    fn form1_minus_a_flips_h_signs() {
        let a = block_h(2, cx(0.6, 0.0));
        let big = direct_sum(&[a, CMatrix::identity(1, 1) * cx(1.5, 0.0)]);
        let f = form1(&big, &tol()).unwrap();
        let g = form1(&(-&big), &tol()).unwrap();
        assert_eq!(f.blocks.len(), g.blocks.len());
        for (x, y) in f.blocks.iter().zip(g.blocks.iter()) {
            assert_eq!(x.kind, y.kind);
            assert_eq!(x.size, y.size);
            assert!((x.parameter - y.parameter).norm() < 1e-9);
            if x.kind == BlockKind::H {
                assert_eq!(x.eps, -y.eps);
            }
        }
    }

    #[test]
    fn form2_matches_form1_dims() {
        let a = direct_sum(&[block_k(1, cx(1.0, 0.0)), block_h(2, cx(0.5, 0.0))]);
        let f2 = form2(&a, &tol()).unwrap();
        assert_eq!(f2.blocks.len(), 2);
        assert_eq!(f2.j_matrix.nrows(), 4);
        assert!(matlin::herm_deviation(&f2.j_matrix) < 1e-12);
        assert!(matlin::sym_deviation(&f2.e_matrix) < 1e-12);
    }

    #[test]
    fn form2_roundtrip_to_form1() {
        let a = direct_sum(&[
            block_h(2, cx(1.0, 0.0)),
            block_l(1, cx(1.0, 2.0)),
            block_k(1, cx(0.5, 0.0)),
        ]);
        let f1 = form1(&a, &tol()).unwrap();
        let f2 = form2(&a, &tol()).unwrap();
        let back = form2_to_form1(&f2, &tol()).unwrap();
        let key = |b: &FormBlock| {
            (
                match b.kind {
                    BlockKind::H => 0,
                    BlockKind::K => 1,
                    BlockKind::L => 2,
                },
                (b.parameter.norm() * 1e6) as i64,
                b.size,
                b.eps,
            )
        };
        let mut b1 = f1.blocks.clone();
        let mut b2 = back.blocks.clone();
        b1.sort_by_key(key);
        b2.sort_by_key(key);
        assert!(blocks_match(&b1, &b2, 1e-7), "{b1:?} vs {b2:?}");
        let t = &back.witness;
        let n = a.nrows();
        assert!((t.transpose() * &f2.e_matrix * t - CMatrix::identity(n, n)).norm() < 1e-8);
        assert!((t.adjoint() * &f2.j_matrix * t - &back.assembled).norm() < 1e-8);
    }

    #[test]
    fn form3_h2_zero_is_backward_identity_pair() {
        let a = block_h(2, Cx::default());
        let f3 = form3(&a, &tol()).unwrap();
        assert_eq!(f3.inertia.signature(), (0, 1, 1));
        assert!(
            (f3.n_matrix.clone() - backward_identity(2)).norm() < 1e-8,
            "N = {}",
            f3.n_matrix
        );
    }

    #[test]
    fn form3_k1_defining_relations() {
        let y = 2.0;
        let a = block_k(1, cx(y, 0.0));
        let f3 = form3(&a, &tol()).unwrap();
        assert_eq!(f3.inertia.signature(), (1, 1, 0));
        let t = &f3.witness;
        assert!((t.adjoint() * &a * t - f3.inertia.matrix()).norm() < 1e-8);
        assert!((t.transpose() * t - &f3.n_matrix).norm() < 1e-10);
    }

    #[test]
    fn generic_forms_accepts_distinct_rejects_repeated() {
        let a = CMatrix::from_diagonal(&CVector::from_vec(vec![cx(1.0, 0.0), cx(2.0, 0.0)]));
        assert!(generic_forms(&a, &tol()).unwrap().is_some());
        let b = CMatrix::identity(2, 2);
        assert!(generic_forms(&b, &tol()).unwrap().is_none());
    }

    #[test]
    fn h3_reference_eigenvalues() {
        // At x = 0 the cubic factors as -(λ+1)(λ-1)λ.
        let e = h3_eigenvalues(0.0);
        assert!((e[0] + 1.0).abs() < 1e-12 && e[1].abs() < 1e-12 && (e[2] - 1.0).abs() < 1e-12);
        // One negative and two positive eigenvalues for x > 0.
        let e = h3_eigenvalues(1.0);
        assert!(e[0] < 0.0 && e[1] > 0.0 && e[2] > 0.0);
        let r = small_block_reference(BlockKind::H, 3, cx(1.0, 0.0)).unwrap();
        assert!((r.discriminant.unwrap() - 49.0).abs() < 1e-12); // 32+13+4
    }

    #[test]
    fn reference_matches_hermitian_eig() {
        let t = tol();
        for (kind, m, p) in [
            (BlockKind::H, 2usize, cx(0.8, 0.0)),
            (BlockKind::K, 2, cx(1.1, 0.0)),
            (BlockKind::L, 2, cx(0.5, 0.5)),
            (BlockKind::H, 3, cx(0.4, 0.0)),
            (BlockKind::H, 4, cx(1.3, 0.0)),
        ] {
            let mat = FormBlock {
                kind,
                size: m,
                parameter: p,
                eps: 1,
            }
            .matrix();
            let (ev, _) = matlin::hermitian_eigendecomposition(&mat, &t).unwrap();
            let rf = small_block_reference(kind, m, p).unwrap();
            assert_eq!(ev.len(), rf.eigenvalues.len());
            for (a, b) in ev.iter().zip(rf.eigenvalues.iter()) {
                assert!((a - b).abs() < 1e-10, "{kind:?} m={m}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn char_poly_and_discriminant() {
        let a = CMatrix::from_diagonal(&CVector::from_vec(vec![cx(1.0, 0.0), cx(2.0, 0.0)]));
        let p = char_poly(&a);
        assert!((p[0] - cx(2.0, 0.0)).norm() < 1e-12);
        assert!((p[1] - cx(-3.0, 0.0)).norm() < 1e-12);
        assert!((p[2] - cx(1.0, 0.0)).norm() < 1e-12);
        assert!((poly_discriminant(&p) - cx(1.0, 0.0)).norm() < 1e-12);
        // H_3(x) discriminant matches the closed form on a grid.
        for x in [0.0f64, 0.1, 0.5, 1.0, 2.0] {
            let h = block_h(3, cx(x, 0.0));
            let p = char_poly(&h);
            let d = poly_discriminant(&p);
            let want = 32.0 * x.powi(4) + 13.0 * x * x + 4.0;
            assert!(
                (d - cx(want, 0.0)).norm() < 1e-8 * want.max(1.0),
                "x={x}: {d} vs {want}"
            );
        }
    }
}
