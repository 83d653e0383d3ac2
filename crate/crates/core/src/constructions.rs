//! Worked families: `sl₂`, Heisenberg algebras and their one-derivation
//! extensions, double extensions and Witt splits, and the `α` maps that
//! put invariant metrics on their current algebras.

use num_traits::{One, Zero};

use crate::assoc::AssocAlgebra;
use crate::current::{check_alpha, AlphaMap};
use crate::error::{Error, Result};
use crate::exact::rational::{int, one};
use crate::exact::{
    add_vectors, nullspace, scale_vector, solve, unit_vector, Rational, RationalMatrix, Solution,
    Subspace,
};
use crate::form::BilinearForm;
use crate::lie::LieAlgebra;

/// `sl₂` on the basis `(e, h, f)`.
pub fn sl2() -> LieAlgebra {
    LieAlgebra::from_brackets(
        vec!["e".into(), "h".into(), "f".into()],
        &[(1, 0, 0, int(2)), (1, 2, 2, int(-2)), (0, 2, 1, int(1))],
    )
    .expect("sl2 is well formed")
}

/// Standard symplectic matrix on `(p_1..p_n, q_1..q_n)`.
pub fn standard_symplectic(n: usize) -> RationalMatrix {
    RationalMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i < n && j == i + n {
            one()
        } else if i >= n && i == j + n {
            int(-1)
        } else {
            Rational::zero()
        }
    })
}

fn heisenberg_names(n: usize) -> Vec<String> {
    (1..=n)
        .map(|i| format!("p{i}"))
        .chain((1..=n).map(|i| format!("q{i}")))
        .chain(std::iter::once("hbar".to_string()))
        .collect()
}

/// `h_n` on `(p_1..p_n, q_1..q_n, ℏ)` with `[x, y] = ω(x, y) ℏ`.
pub fn heisenberg(n: usize) -> Result<LieAlgebra> {
    if n == 0 {
        return Err(Error::InvalidAlgebra("heisenberg needs n >= 1".into()));
    }
    let hbar = 2 * n;
    let brackets: Vec<_> = (0..n).map(|i| (i, i + n, hbar, one())).collect();
    LieAlgebra::from_brackets(heisenberg_names(n), &brackets)
}

/// `h_n(D)` with its canonical metric and the nilpotent centroid `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergData {
    pub n: usize,
    /// Basis `(D, p_1..p_n, q_1..q_n, ℏ)`.
    pub algebra: LieAlgebra,
    pub metric: BilinearForm,
    pub omega: RationalMatrix,
    pub phi: RationalMatrix,
    /// `N(D) = ℏ`, zero elsewhere.
    pub nilpotent: RationalMatrix,
}

/// `φ = diag(1, …, 1, −1, …, −1)` on `(p, q)`.
pub fn default_phi(n: usize) -> RationalMatrix {
    RationalMatrix::from_fn(2 * n, 2 * n, |i, j| match (i == j, i < n) {
        (true, true) => one(),
        (true, false) => int(-1),
        _ => Rational::zero(),
    })
}

pub fn heisenberg_extended(n: usize, phi: Option<&RationalMatrix>) -> Result<HeisenbergData> {
    if n == 0 {
        return Err(Error::InvalidAlgebra("heisenberg needs n >= 1".into()));
    }
    let v = 2 * n;
    let phi = phi.cloned().unwrap_or_else(|| default_phi(n));
    if phi.rows() != v || phi.cols() != v {
        return Err(Error::InvalidPhi(format!("phi must be {v}x{v}")));
    }
    let phi_inv = phi
        .inverse()
        .ok_or_else(|| Error::InvalidPhi("phi is not invertible".into()))?;
    let omega = standard_symplectic(n);
    // ω(φx, y) = −ω(x, φy)  ⟺  φᵀΩ + Ωφ = 0
    let anti = &(&phi.transpose() * &omega) + &(&omega * &phi);
    if !anti.is_zero() {
        let (i, j) = (0..v)
            .flat_map(|i| (0..v).map(move |j| (i, j)))
            .find(|&(i, j)| !anti.get(i, j).is_zero())
            .expect("nonzero");
        return Err(Error::InvalidPhi(format!(
            "ω(φx, y) ≠ −ω(x, φy) on basis pair ({i}, {j})"
        )));
    }
    let dim = v + 2;
    let (d, hbar) = (0, v + 1);
    let mut brackets = Vec::new();
    for j in 0..v {
        for k in 0..v {
            let c = phi.get(k, j);
            if !c.is_zero() {
                brackets.push((d, 1 + j, 1 + k, c.clone()));
            }
        }
    }
    for i in 0..v {
        for j in i + 1..v {
            let w = omega.get(i, j);
            if !w.is_zero() {
                brackets.push((1 + i, 1 + j, hbar, w.clone()));
            }
        }
    }
    let mut names = vec!["D".to_string()];
    names.extend(heisenberg_names(n));
    let algebra = LieAlgebra::from_brackets(names, &brackets)?;

    let bv = &phi_inv.transpose() * &omega;
    let mut b = RationalMatrix::zeros(dim, dim);
    for i in 0..v {
        for j in 0..v {
            b.set(1 + i, 1 + j, bv.get(i, j).clone());
        }
    }
    b.set(d, hbar, one());
    b.set(hbar, d, one());
    let mut nilpotent = RationalMatrix::zeros(dim, dim);
    nilpotent.set(hbar, d, one());
    Ok(HeisenbergData {
        n,
        algebra,
        metric: BilinearForm::new(b)?,
        omega,
        phi,
        nilpotent,
    })
}

/// `N` on `h_n(D)`: `N(D) = ℏ`, zero on the other basis vectors.
pub fn heisenberg_nilpotent(n: usize) -> RationalMatrix {
    let dim = 2 * n + 2;
    let mut m = RationalMatrix::zeros(dim, dim);
    m.set(dim - 1, 0, one());
    m
}

/// `α(s, t) = γ(s, t) Id + ξ(s, t) N` on `h_n(D)`.
pub fn heisenberg_current_alpha(
    n: usize,
    s: &AssocAlgebra,
    gamma: &BilinearForm,
    xi: &BilinearForm,
) -> Result<AlphaMap> {
    if gamma.dim() != s.dim() || !s.is_frobenius_form(gamma) {
        return Err(Error::BadGamma(
            "γ must be a symmetric, nondegenerate, invariant form on S".into(),
        ));
    }
    if xi.dim() != s.dim() || !xi.is_symmetric() {
        return Err(Error::BadXi("ξ must be a symmetric form on S".into()));
    }
    Ok(heisenberg_current_alpha_unchecked(n, gamma, xi))
}

/// Same formula without the hypotheses on `γ` and `ξ`.
pub fn heisenberg_current_alpha_unchecked(n: usize, gamma: &BilinearForm, xi: &BilinearForm) -> AlphaMap {
    let dim = 2 * n + 2;
    let id = RationalMatrix::identity(dim);
    let nil = heisenberg_nilpotent(n);
    AlphaMap::from_fn(dim, gamma.dim(), |a, b| &id.scale(gamma.entry(a, b)) + &nil.scale(xi.entry(a, b)))
}

/// `h(D) = 𝔽d ⊕ h ⊕ 𝔽c` with its metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleExtensionData {
    pub h: LieAlgebra,
    pub b_h: BilinearForm,
    pub derivation: RationalMatrix,
    /// Basis `(d, h-basis, c)`.
    pub result: LieAlgebra,
    pub b_ext: BilinearForm,
}

impl DoubleExtensionData {
    pub fn d_index(&self) -> usize {
        0
    }

    pub fn c_index(&self) -> usize {
        self.h.dim() + 1
    }
}

fn require_metric(h: &LieAlgebra, b: &BilinearForm) -> Result<()> {
    if b.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: b.dim(),
        });
    }
    if !h.is_invariant_metric(b) {
        return Err(Error::HypothesisViolated("form is not an invariant metric".into()));
    }
    Ok(())
}

/// First basis pair where `D` fails to be a derivation.
pub fn derivation_witness(h: &LieAlgebra, d: &RationalMatrix) -> Option<(usize, usize)> {
    let n = h.dim();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| {
        let lhs = d.mul_vec(&h.bracket_basis(i, j));
        let rhs = add_vectors(
            &h.bracket(&d.column(i), &unit_vector(n, j)).expect("sized"),
            &h.bracket(&unit_vector(n, i), &d.column(j)).expect("sized"),
        );
        lhs != rhs
    })
}

/// First basis pair where `B(Dx, y) ≠ −B(x, Dy)`.
pub fn skew_witness(b: &BilinearForm, d: &RationalMatrix) -> Option<(usize, usize)> {
    let m = &(&d.transpose() * b.matrix()) + &(b.matrix() * d);
    let n = b.dim();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !m.get(i, j).is_zero())
}

/// `[x, y] = [x, y]_h + B_h(Dx, y) c`, `[d, x] = Dx`, `B(c, d) = 1`.
pub fn double_extension(h: &LieAlgebra, b_h: &BilinearForm, d: &RationalMatrix) -> Result<DoubleExtensionData> {
    if !h.validate().is_ok() {
        return Err(Error::InvalidAlgebra("h fails validation".into()));
    }
    require_metric(h, b_h)?;
    let k = h.dim();
    if d.rows() != k || d.cols() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: d.rows(),
        });
    }
    if let Some((i, j)) = derivation_witness(h, d) {
        return Err(Error::NotDerivation { i, j });
    }
    if let Some((i, j)) = skew_witness(b_h, d) {
        return Err(Error::NotSkew { i, j });
    }
    let dim = k + 2;
    let (di, ci) = (0, k + 1);
    let mut c = vec![Rational::zero(); dim * dim * dim];
    let idx = |i: usize, j: usize, l: usize| (i * dim + j) * dim + l;
    // (D^T B_h)[i][j] = B_h(D e_i, e_j)
    let cocycle = &d.transpose() * b_h.matrix();
    for i in 0..k {
        for j in 0..k {
            for (l, v) in h.bracket_support(i, j) {
                c[idx(1 + i, 1 + j, 1 + l)] = v.clone();
            }
            let w = cocycle.get(i, j);
            if !w.is_zero() {
                c[idx(1 + i, 1 + j, ci)] = w.clone();
            }
        }
        for l in 0..k {
            let v = d.get(l, i);
            if !v.is_zero() {
                c[idx(di, 1 + i, 1 + l)] = v.clone();
                c[idx(1 + i, di, 1 + l)] = -v;
            }
        }
    }
    let mut names = vec!["d".to_string()];
    names.extend(h.basis_names().iter().cloned());
    names.push("c".to_string());
    let result = LieAlgebra::new(names, c)?;

    let mut b = RationalMatrix::zeros(dim, dim);
    for i in 0..k {
        for j in 0..k {
            b.set(1 + i, 1 + j, b_h.entry(i, j).clone());
        }
    }
    b.set(di, ci, one());
    b.set(ci, di, one());
    let b_ext = BilinearForm::new(b)?;

    if !result.validate().is_ok() || !result.is_invariant_metric(&b_ext) {
        return Err(Error::InternalInconsistency(
            "double extension failed its own verification".into(),
        ));
    }
    if !result.center().contains(&unit_vector(dim, ci)) {
        return Err(Error::InternalInconsistency("c is not central".into()));
    }
    // For nonabelian h an inner D makes the extension split, so c can sit outside [g,g].
    if !d.is_zero() && h.is_abelian() && !result.derived_subalgebra().contains(&unit_vector(dim, ci)) {
        return Err(Error::InternalInconsistency("c is not in the derived algebra".into()));
    }
    Ok(DoubleExtensionData {
        h: h.clone(),
        b_h: b_h.clone(),
        derivation: d.clone(),
        result,
        b_ext,
    })
}

/// Basis of the `B_h`-skew derivations of `h`.
pub fn skew_derivations(h: &LieAlgebra, b_h: &BilinearForm) -> Result<Vec<RationalMatrix>> {
    require_metric(h, b_h)?;
    let n = h.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let var = |r: usize, s: usize| r * n + s;
    let mut rows = Vec::new();
    // D[e_i,e_j] - [D e_i, e_j] - [e_i, D e_j] = 0, coordinate k.
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut row = vec![Rational::zero(); n * n];
                for (l, v) in h.bracket_support(i, j) {
                    row[var(k, *l)] += v;
                }
                for l in 0..n {
                    let a = h.structure(l, j, k);
                    if !a.is_zero() {
                        row[var(l, i)] -= a;
                    }
                    let b = h.structure(i, l, k);
                    if !b.is_zero() {
                        row[var(l, j)] -= b;
                    }
                }
                if row.iter().any(|v| !v.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    // (DᵀB + BD)[i][j] = 0
    let b = b_h.matrix();
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![Rational::zero(); n * n];
            for l in 0..n {
                row[var(l, i)] += b.get(l, j);
                row[var(l, j)] += b.get(i, l);
            }
            if row.iter().any(|v| !v.is_zero()) {
                rows.push(row);
            }
        }
    }
    Ok(crate::lie::solve_matrix_space(n, n, rows))
}

/// Inputs of [`double_extension_alpha`] beyond the extension itself.
#[derive(Clone, Debug)]
pub struct ExtensionAlphaInputs<'a> {
    pub s: &'a AssocAlgebra,
    /// Defaults to `γ′ · Id_h`.
    pub alpha_h: Option<&'a AlphaMap>,
    pub gammap: &'a BilinearForm,
    /// `f(s_a, s_b)` in `h` coordinates at `a * m + b`; `None` means zero.
    pub f: Option<&'a [Vec<Rational>]>,
    /// `None` means zero.
    pub zeta: Option<&'a BilinearForm>,
}

/// `α(s,t)(d) = γ′(s,t) d + f(s,t) + ζ(s,t) c`,
/// `α(s,t)(x) = α_h(s,t) x + B_h(f(t,s), x) c`, `α(s,t)(c) = γ′(s,t) c`.
pub fn double_extension_alpha(ext: &DoubleExtensionData, inputs: &ExtensionAlphaInputs<'_>) -> Result<AlphaMap> {
    let s = inputs.s;
    let m = s.dim();
    let k = ext.h.dim();
    let dim = k + 2;
    let (di, ci) = (ext.d_index(), ext.c_index());
    let gp = inputs.gammap;
    if gp.dim() != m || !s.is_frobenius_form(gp) {
        return Err(Error::CompatibilityFailed(
            "γ′ is not a symmetric, nondegenerate, invariant form on S".into(),
        ));
    }
    let zero_zeta = BilinearForm::zero(m);
    let zeta = inputs.zeta.unwrap_or(&zero_zeta);
    if zeta.dim() != m || !zeta.is_symmetric() {
        return Err(Error::CompatibilityFailed("ζ(s,t) = ζ(t,s) fails".into()));
    }
    let zero_f = vec![vec![Rational::zero(); k]; m * m];
    let f = inputs.f.unwrap_or(&zero_f);
    if f.len() != m * m || f.iter().any(|v| v.len() != k) {
        return Err(Error::DimensionMismatch {
            expected: m * m,
            found: f.len(),
        });
    }
    let center = ext.h.center();
    let ker_d = Subspace::kernel(&ext.derivation);
    for (idx, v) in f.iter().enumerate() {
        if !center.contains(v) || !ker_d.contains(v) {
            return Err(Error::CompatibilityFailed(format!(
                "f(s{}, s{}) ∉ C(h) ∩ Ker D",
                idx / m,
                idx % m
            )));
        }
    }
    let default_alpha;
    let alpha_h = match inputs.alpha_h {
        Some(a) => a,
        None => {
            default_alpha = AlphaMap::scalar_times(gp, &RationalMatrix::identity(k));
            &default_alpha
        }
    };
    if alpha_h.g_dim() != k || alpha_h.s_dim() != m {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: alpha_h.g_dim(),
        });
    }
    let dmat = &ext.derivation;
    for a in 0..m {
        for b in 0..m {
            let t = alpha_h.get(a, b);
            let gd = dmat.scale(gp.entry(a, b));
            if t * dmat != gd {
                return Err(Error::CompatibilityFailed(format!(
                    "α_h(s{a}, s{b}) ∘ D ≠ γ′(s{a}, s{b}) D"
                )));
            }
            if dmat * t != gd {
                return Err(Error::CompatibilityFailed(format!(
                    "D ∘ α_h(s{a}, s{b}) ≠ γ′(s{a}, s{b}) D"
                )));
            }
        }
    }
    let bh = ext.b_h.matrix();
    let alpha = AlphaMap::from_fn(dim, m, |a, b| {
        let g = gp.entry(a, b);
        let mut t = RationalMatrix::zeros(dim, dim);
        // column d
        t.set(di, di, g.clone());
        for (l, v) in f[a * m + b].iter().enumerate() {
            t.set(1 + l, di, v.clone());
        }
        t.set(ci, di, zeta.entry(a, b).clone());
        // columns of h
        let ah = alpha_h.get(a, b);
        let fts = &f[b * m + a];
        for x in 0..k {
            for l in 0..k {
                t.set(1 + l, 1 + x, ah.get(l, x).clone());
            }
            let mut w = Rational::zero();
            for (l, v) in fts.iter().enumerate() {
                w += v * bh.get(l, x);
            }
            t.set(ci, 1 + x, w);
        }
        t.set(ci, ci, g.clone());
        t
    });
    let report = check_alpha(&ext.result, &ext.b_ext, s, &alpha)?;
    if let Some((a, b)) = report.centroid_witness {
        return Err(Error::CompatibilityFailed(format!("α(s{a}, s{b}) ∉ Γ(h(D))")));
    }
    if let Some((a, b, x)) = report.condition_i_witness {
        return Err(Error::CompatibilityFailed(format!(
            "α(s{a}, s{b}) x ≠ α(s{a} s{b}, 1) x for derived basis vector {x}"
        )));
    }
    if let Some((a, b)) = report.condition_iii_witness {
        return Err(Error::CompatibilityFailed(format!("α(s{a}, s{b})* ≠ α(s{b}, s{a})")));
    }
    if !report.kernel.is_zero() {
        return Err(Error::CompatibilityFailed("⋂ Ker ℱ(s) ≠ 0".into()));
    }
    Ok(alpha)
}

/// `g = 𝔽d ⊕ h ⊕ 𝔽c` relative to an isotropic central `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittSplit {
    pub c: Vec<Rational>,
    /// Whether `c ∈ [g, g]`. The split itself only needs `c` central and
    /// isotropic.
    pub c_in_derived: bool,
    pub d: Vec<Rational>,
    /// RREF basis of `(𝔽c + 𝔽d)^⊥`.
    pub h_basis: Vec<Vec<Rational>>,
    /// Bracket of `g` projected to `h` along `𝔽c`.
    pub h: LieAlgebra,
    pub b_h: BilinearForm,
    /// `ad(d)` restricted to `h`, in `h` coordinates.
    pub derivation: RationalMatrix,
    /// Columns `d, h-basis, c`.
    pub change_of_basis: RationalMatrix,
}

fn coordinates(basis: &RationalMatrix, v: &[Rational]) -> Result<Vec<Rational>> {
    match solve(basis, v) {
        Solution::Solved(x) => Ok(x),
        Solution::Inconsistent { .. } => Err(Error::InternalInconsistency(
            "vector left the complement it was projected to".into(),
        )),
    }
}

pub fn witt_split(g: &LieAlgebra, b: &BilinearForm, c: &[Rational]) -> Result<WittSplit> {
    let n = g.dim();
    if b.dim() != n || !g.is_invariant_metric(b) {
        return Err(Error::HypothesisViolated("B is not an invariant metric on g".into()));
    }
    if c.len() != n {
        return Err(Error::BadCenterVector(format!("c must have {n} coordinates")));
    }
    if c.iter().all(Zero::is_zero) {
        return Err(Error::BadCenterVector("c is zero".into()));
    }
    if !g.center().contains(c) {
        return Err(Error::BadCenterVector("c is not central".into()));
    }
    if !b.eval(c, c).is_zero() {
        return Err(Error::BadCenterVector("B(c, c) ≠ 0".into()));
    }
    let bc: Vec<Rational> = (0..n).map(|j| b.eval(c, &unit_vector(n, j))).collect();
    let j = bc.iter().position(|v| !v.is_zero()).expect("nondegenerate");
    let d0 = scale_vector(&bc[j].recip(), &unit_vector(n, j));
    let half = b.eval(&d0, &d0) / int(2);
    let d = add_vectors(&d0, &scale_vector(&-half, c));
    let bd: Vec<Rational> = (0..n).map(|j| b.eval(&d, &unit_vector(n, j))).collect();
    let h_space = Subspace::span(n, &nullspace(&RationalMatrix::from_rows(vec![bc, bd])));
    let h_basis = h_space.basis().to_vec();
    let k = h_basis.len();
    let hm = h_space.basis_matrix();

    let project = |v: &[Rational]| -> Result<Vec<Rational>> {
        // Drop the c-component B(v, d) and the d-component B(v, c).
        let along_c = b.eval(v, &d);
        let along_d = b.eval(v, c);
        let w = add_vectors(
            v,
            &add_vectors(&scale_vector(&-along_c, c), &scale_vector(&-along_d, &d)),
        );
        coordinates(&hm, &w)
    };

    let mut cst = vec![Rational::zero(); k * k * k];
    for x in 0..k {
        for y in 0..k {
            let v = project(&g.bracket(&h_basis[x], &h_basis[y])?)?;
            for (z, val) in v.into_iter().enumerate() {
                cst[(x * k + y) * k + z] = val;
            }
        }
    }
    let names = (0..k).map(|i| format!("x{}", i + 1)).collect();
    let h = LieAlgebra::new(names, cst)?;
    let b_h = BilinearForm::new(RationalMatrix::from_fn(k, k, |x, y| b.eval(&h_basis[x], &h_basis[y])))?;
    let cols: Vec<Vec<Rational>> = h_basis
        .iter()
        .map(|x| project(&g.bracket(&d, x)?))
        .collect::<Result<_>>()?;
    let derivation = RationalMatrix::from_columns(k, &cols);
    let mut all = vec![d.clone()];
    all.extend(h_basis.iter().cloned());
    all.push(c.to_vec());
    let change_of_basis = RationalMatrix::from_columns(n, &all);
    Ok(WittSplit {
        c: c.to_vec(),
        c_in_derived: g.derived_subalgebra().contains(c),
        d,
        h_basis,
        h,
        b_h,
        derivation,
        change_of_basis,
    })
}

impl WittSplit {
    /// `g` and `B` rewritten in the basis `(d, h, c)`, for comparison with
    /// [`double_extension`] of the split data.
    pub fn rebased(&self, g: &LieAlgebra, b: &BilinearForm) -> Result<(LieAlgebra, BilinearForm)> {
        Ok((g.change_basis(&self.change_of_basis)?, b.change_basis(&self.change_of_basis)))
    }

    /// Rebuilds `g` from the split and compares structure constants and
    /// forms in the `(d, h, c)` basis.
    pub fn round_trip(&self, g: &LieAlgebra, b: &BilinearForm) -> Result<bool> {
        let ext = double_extension(&self.h, &self.b_h, &self.derivation)?;
        let (g2, b2) = self.rebased(g, b)?;
        Ok(g2.structure_constants() == ext.result.structure_constants() && b2 == ext.b_ext)
    }
}

/// Anti-diagonal form `γ(X^i, X^j) = δ_{i+j, m-1}` on `𝔽[X]/(X^m)`.
pub fn antidiagonal_form(m: usize) -> BilinearForm {
    BilinearForm::new(RationalMatrix::from_fn(m, m, |i, j| {
        if i + j + 1 == m {
            Rational::one()
        } else {
            Rational::zero()
        }
    }))
    .expect("square")
}
