//! Lie algebras given by structure constants.
//!
//! `c[i][j][k]` is the coefficient of `e_k` in `[e_i, e_j]`. The adjoint
//! matrix `ad(e_i)` has `[e_i, e_j]` as its column `j`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::poly;
use crate::exact::search::{grid_bound, search_boxes, SearchLimits, SearchOutcome};
use crate::exact::{
    nullspace, scalar_plus_nilpotent_split, Rational, RationalMatrix, Subspace,
};
use crate::form::BilinearForm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    basis_names: Vec<String>,
    c: Vec<Rational>,
    // Nonzero entries of [e_i, e_j], indexed by i * dim + j.
    sparse: Vec<Vec<(usize, Rational)>>,
}

/// Verdict of [`LieAlgebra::validate`], with the first violation found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    Ok,
    Antisymmetry {
        i: usize,
        j: usize,
        k: usize,
        residue: Rational,
    },
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        residue: Rational,
    },
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        matches!(self, Validation::Ok)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Indecomposability {
    Indecomposable,
    /// A nontrivial B-symmetric idempotent centroid; its image is a proper
    /// nondegenerate ideal.
    Splits { idempotent: RationalMatrix },
    Inconclusive { reason: String },
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{}", i + 1)).collect()
}

impl LieAlgebra {
    /// Takes the full dense tensor; no axioms are checked here.
    pub fn new(basis_names: Vec<String>, c: Vec<Rational>) -> Result<Self> {
        let dim = basis_names.len();
        if c.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                found: c.len(),
            });
        }
        let sparse = (0..dim * dim)
            .map(|ij| {
                (0..dim)
                    .filter(|&k| !c[ij * dim + k].is_zero())
                    .map(|k| (k, c[ij * dim + k].clone()))
                    .collect()
            })
            .collect();
        Ok(Self {
            dim,
            basis_names,
            c,
            sparse,
        })
    }

    /// Builds from one-sided brackets `[e_i, e_j] ∋ v e_k`, filling in
    /// `[e_j, e_i]` by antisymmetry.
    pub fn from_brackets(
        basis_names: Vec<String>,
        entries: &[(usize, usize, usize, Rational)],
    ) -> Result<Self> {
        let n = basis_names.len();
        let mut c = vec![Rational::zero(); n * n * n];
        for (i, j, k, v) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i >= n || j >= n || k >= n {
                return Err(Error::InvalidAlgebra(format!("index ({i},{j},{k}) out of range")));
            }
            c[(i * n + j) * n + k] += v;
            c[(j * n + i) * n + k] -= v;
        }
        Self::new(basis_names, c)
    }

    pub fn abelian(n: usize) -> Self {
        Self::new(default_names(n), vec![Rational::zero(); n * n * n]).expect("sized")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn structure(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn structure_constants(&self) -> &[Rational] {
        &self.c
    }

    pub fn bracket_support(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.sparse[i * self.dim + j]
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        for (k, val) in self.bracket_support(i, j) {
            v[*k] = val.clone();
        }
        v
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: v.len(),
                });
            }
        }
        let mut out = vec![Rational::zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let coeff = xi * yj;
                for (k, c) in self.bracket_support(i, j) {
                    out[*k] += &coeff * c;
                }
            }
        }
        Ok(out)
    }

    pub fn ad_basis(&self, i: usize) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for (k, v) in self.bracket_support(i, j) {
                m.set(*k, j, v.clone());
            }
        }
        m
    }

    pub fn ad(&self, x: &[Rational]) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            m = &m + &self.ad_basis(i).scale(xi);
        }
        m
    }

    /// Antisymmetry on all index triples, then Jacobi on `i < j < k` for
    /// every output index `l` (alternating once antisymmetry holds).
    pub fn validate(&self) -> Validation {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let residue = self.structure(i, j, k) + self.structure(j, i, k);
                    if !residue.is_zero() {
                        return Validation::Antisymmetry { i, j, k, residue };
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut acc = vec![Rational::zero(); n];
                    for (a, b, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (m, cm) in self.bracket_support(a, b) {
                            for (l, v) in self.bracket_support(*m, z) {
                                acc[*l] += cm * v;
                            }
                        }
                    }
                    if let Some(l) = acc.iter().position(|v| !v.is_zero()) {
                        return Validation::Jacobi {
                            i,
                            j,
                            k,
                            l,
                            residue: acc[l].clone(),
                        };
                    }
                }
            }
        }
        Validation::Ok
    }

    pub fn derived_subalgebra(&self) -> Subspace {
        let n = self.dim;
        let vectors: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.bracket_basis(i, j))
            .collect();
        Subspace::span(n, &vectors)
    }

    pub fn center(&self) -> Subspace {
        // x is central iff ad(e_j) x = 0 for all j.
        let blocks: Vec<_> = (0..self.dim).map(|j| self.ad_basis(j)).collect();
        if blocks.is_empty() {
            return Subspace::zero(0);
        }
        Subspace::kernel(&RationalMatrix::vstack(&blocks))
    }

    /// `[g, V]` for a subspace `V`.
    pub fn bracket_with(&self, v: &Subspace) -> Subspace {
        let mut vectors = Vec::new();
        for i in 0..self.dim {
            let ad = self.ad_basis(i);
            vectors.extend(v.basis().iter().map(|b| ad.mul_vec(b)));
        }
        Subspace::span(self.dim, &vectors)
    }

    /// `g, [g,g], [g,[g,g]], ...` until it stabilizes.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let mut series = vec![Subspace::full(self.dim)];
        loop {
            let next = self.bracket_with(series.last().unwrap());
            if &next == series.last().unwrap() {
                return series;
            }
            series.push(next);
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().is_zero()
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subalgebra().dim() == self.dim
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// Basis of `Γ(g) = { T : T[e_i, e_j] = [T e_i, e_j] }`, from the
    /// canonical nullspace over the row-major entries of `T`.
    pub fn centroid_basis(&self) -> Vec<RationalMatrix> {
        let n = self.dim;
        let var = |r: usize, s: usize| r * n + s;
        let mut rows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut row = vec![Rational::zero(); n * n];
                    for (m, v) in self.bracket_support(i, j) {
                        row[var(k, *m)] += v;
                    }
                    for r in 0..n {
                        let c = self.structure(r, j, k);
                        if !c.is_zero() {
                            row[var(r, i)] -= c;
                        }
                    }
                    if row.iter().any(|v| !v.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        solve_matrix_space(n, n, rows)
    }

    pub fn is_centroid(&self, t: &RationalMatrix) -> bool {
        (0..self.dim).all(|i| {
            let lhs = t * &self.ad_basis(i);
            let rhs = self.ad(&t.column(i));
            lhs == rhs
        })
    }

    /// First `(i, j, k)` with `B([e_i,e_j],e_k) != B(e_i,[e_j,e_k])`.
    pub fn invariance_witness(&self, form: &BilinearForm) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        let b = form.matrix();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut lhs = Rational::zero();
                    for (m, v) in self.bracket_support(i, j) {
                        lhs += v * b.get(*m, k);
                    }
                    let mut rhs = Rational::zero();
                    for (m, v) in self.bracket_support(j, k) {
                        rhs += b.get(i, *m) * v;
                    }
                    if lhs != rhs {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn is_invariant(&self, form: &BilinearForm) -> bool {
        form.dim() == self.dim && self.invariance_witness(form).is_none()
    }

    pub fn is_invariant_metric(&self, form: &BilinearForm) -> bool {
        form.is_symmetric() && form.is_nondegenerate() && self.is_invariant(form)
    }

    /// Basis of the symmetric invariant forms.
    pub fn invariant_symmetric_forms(&self) -> Vec<BilinearForm> {
        let n = self.dim;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|p| (p..n).map(move |q| (p, q))).collect();
        let var = |p: usize, q: usize| {
            let (a, b) = if p <= q { (p, q) } else { (q, p) };
            // index of (a, b) in the upper-triangular enumeration
            a * n - a * (a + 1) / 2 + b
        };
        let mut rows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut row = vec![Rational::zero(); pairs.len()];
                    for (m, v) in self.bracket_support(i, j) {
                        row[var(*m, k)] += v;
                    }
                    for (m, v) in self.bracket_support(j, k) {
                        row[var(i, *m)] -= v;
                    }
                    if row.iter().any(|v| !v.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let ns = if rows.is_empty() {
            RationalMatrix::identity(pairs.len()).to_rows()
        } else {
            nullspace(&RationalMatrix::from_rows(rows))
        };
        ns.into_iter()
            .map(|v| {
                let m = RationalMatrix::from_fn(n, n, |p, q| v[var(p, q)].clone());
                BilinearForm::new(m).expect("square")
            })
            .collect()
    }

    /// `K(x, y) = tr(ad x ∘ ad y)`.
    pub fn killing_form(&self) -> BilinearForm {
        let ads: Vec<_> = (0..self.dim).map(|i| self.ad_basis(i)).collect();
        let m = RationalMatrix::from_fn(self.dim, self.dim, |i, j| (&ads[i] * &ads[j]).trace());
        BilinearForm::new(m).expect("square")
    }

    /// Structure constants in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &RationalMatrix) -> Result<LieAlgebra> {
        let n = self.dim;
        let inv = p.inverse().ok_or_else(|| {
            Error::InvalidAlgebra("change of basis matrix is singular".into())
        })?;
        let cols: Vec<_> = (0..n).map(|a| p.column(a)).collect();
        let mut c = vec![Rational::zero(); n * n * n];
        for a in 0..n {
            for b in 0..n {
                let v = self.bracket(&cols[a], &cols[b])?;
                let w = inv.mul_vec(&v);
                for (k, x) in w.into_iter().enumerate() {
                    c[(a * n + b) * n + k] = x;
                }
            }
        }
        LieAlgebra::new(default_names(n), c)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: names.len(),
            });
        }
        self.basis_names = names;
        Ok(self)
    }

    /// `g ⊕ h` with the basis of `g` first.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let (n1, n2) = (self.dim, other.dim);
        let n = n1 + n2;
        let mut c = vec![Rational::zero(); n * n * n];
        for i in 0..n1 {
            for j in 0..n1 {
                for (k, v) in self.bracket_support(i, j) {
                    c[(i * n + j) * n + k] = v.clone();
                }
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                for (k, v) in other.bracket_support(i, j) {
                    c[((n1 + i) * n + n1 + j) * n + n1 + k] = v.clone();
                }
            }
        }
        let names = self
            .basis_names
            .iter()
            .map(|s| format!("{s}'1"))
            .chain(other.basis_names.iter().map(|s| format!("{s}'2")))
            .collect();
        LieAlgebra::new(names, c).expect("sized")
    }

    /// Basis of `{ T ∈ Γ(g) : T* = T }` with respect to `form`.
    pub fn symmetric_centroids(&self, form: &BilinearForm) -> Result<Vec<RationalMatrix>> {
        if !form.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        let gamma = self.centroid_basis();
        let b = form.matrix();
        // T* = T  ⟺  T^T B - B T = 0
        let cols: Vec<Vec<Rational>> = gamma
            .iter()
            .map(|t| (&(&t.transpose() * b) - &(b * t)).entries().to_vec())
            .collect();
        let n = self.dim;
        if cols.is_empty() {
            return Ok(Vec::new());
        }
        let system = RationalMatrix::from_columns(n * n, &cols);
        Ok(nullspace(&system)
            .into_iter()
            .map(|coeffs| combine_matrices(&gamma, &coeffs))
            .collect())
    }

    /// Looks for a nontrivial idempotent among the B-symmetric centroids.
    ///
    /// If every basis element is `γ I + N` with the nilpotent parts
    /// commuting, every symmetric centroid has that form and none is a
    /// nontrivial idempotent. Otherwise a failing element whose minimal
    /// polynomial has a rational root `r` of a proper factor `(x - r)^k`
    /// yields the projector onto its generalized `r`-eigenspace, which is a
    /// polynomial in the element and hence a symmetric centroid.
    pub fn is_indecomposable(&self, form: &BilinearForm) -> Result<Indecomposability> {
        if self.dim == 0 {
            return Ok(Indecomposability::Inconclusive {
                reason: "zero algebra".into(),
            });
        }
        let syms = self.symmetric_centroids(form)?;
        let mut nilpotents = Vec::new();
        let mut failing = Vec::new();
        for t in &syms {
            match scalar_plus_nilpotent_split(t) {
                Ok((_, nil)) => nilpotents.push(nil),
                Err(_) => failing.push(t),
            }
        }
        if failing.is_empty() {
            let commute = nilpotents.iter().enumerate().all(|(i, a)| {
                nilpotents[..i].iter().all(|b| a * b == b * a)
            });
            return Ok(if commute {
                Indecomposability::Indecomposable
            } else {
                Indecomposability::Inconclusive {
                    reason: "nilpotent parts of symmetric centroids do not commute".into(),
                }
            });
        }
        for t in failing {
            if let Some(e) = idempotent_from(t) {
                return Ok(Indecomposability::Splits {
                    idempotent: canonical_idempotent(e),
                });
            }
        }
        Ok(Indecomposability::Inconclusive {
            reason: "semisimple part of a symmetric centroid has no rational eigenvalue split"
                .into(),
        })
    }

    /// Common kernel of the nilpotent symmetric centroids (the subspace `𝒜`
    /// used to choose the central vector of a Witt split).
    pub fn nilpotent_annihilator(&self, form: &BilinearForm) -> Result<Subspace> {
        let mut space = Subspace::full(self.dim);
        for t in self.symmetric_centroids(form)? {
            let (_, nil) = scalar_plus_nilpotent_split(&t)?;
            space = space.intersect(&Subspace::kernel(&nil));
        }
        Ok(space)
    }
}

/// Linear combination `Σ coeffs[i] · mats[i]`.
pub fn combine_matrices(mats: &[RationalMatrix], coeffs: &[Rational]) -> RationalMatrix {
    let (r, c) = mats.first().map_or((0, 0), |m| (m.rows(), m.cols()));
    let mut acc = RationalMatrix::zeros(r, c);
    for (m, k) in mats.iter().zip(coeffs) {
        if !k.is_zero() {
            acc = &acc + &m.scale(k);
        }
    }
    acc
}

/// Nullspace of a linear system on `rows × cols` matrices whose unknowns are
/// row-major entries, returned as matrices.
pub(crate) fn solve_matrix_space(rows_n: usize, cols_n: usize, eqs: Vec<Vec<Rational>>) -> Vec<RationalMatrix> {
    let unknowns = rows_n * cols_n;
    let ns = if eqs.is_empty() {
        RationalMatrix::identity(unknowns).to_rows()
    } else {
        nullspace(&RationalMatrix::from_rows(eqs))
    };
    ns.into_iter()
        .map(|v| RationalMatrix::from_fn(rows_n, cols_n, |r, s| v[r * cols_n + s].clone()))
        .collect()
}

fn idempotent_from(t: &RationalMatrix) -> Option<RationalMatrix> {
    let m = poly::minimal_polynomial(t);
    for r in poly::rational_roots(&m) {
        let linear = vec![-r.clone(), Rational::one()];
        let mut p = vec![Rational::one()];
        let mut q = m.clone();
        loop {
            let (quot, rem) = poly::div_rem(&q, &linear);
            if !rem.is_empty() {
                break;
            }
            p = poly::mul(&p, &linear);
            q = quot;
        }
        if poly::degree(&q) == Some(0) {
            continue;
        }
        let (_, _, v) = poly::ext_gcd(&p, &q);
        // v q ≡ 1 mod p and ≡ 0 mod q: projector onto ker p(T).
        let e = poly::eval_matrix(&poly::mul(&v, &q), t);
        return Some(e);
    }
    None
}

fn canonical_idempotent(e: RationalMatrix) -> RationalMatrix {
    let n = e.rows();
    let other = &RationalMatrix::identity(n) - &e;
    let first_col = |m: &RationalMatrix| (0..n).find(|&j| m.column(j).iter().any(|x| !x.is_zero()));
    if first_col(&e) <= first_col(&other) {
        e
    } else {
        other
    }
}

/// Outcome of picking a nondegenerate member of a space of forms.
pub type NondegenerateSearch = SearchOutcome<BilinearForm>;

/// First integer combination of `forms` (in box-enumeration order) with
/// nonzero determinant. Exhausting the grid bound for the ambient dimension
/// proves every member is degenerate.
pub fn find_nondegenerate(forms: &[BilinearForm], dim: usize, limits: SearchLimits) -> NondegenerateSearch {
    let mats: Vec<RationalMatrix> = forms.iter().map(|f| f.matrix().clone()).collect();
    search_boxes(forms.len(), grid_bound(dim), limits, |coeffs| {
        let cs: Vec<Rational> = coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect();
        let m = if mats.is_empty() {
            RationalMatrix::zeros(dim, dim)
        } else {
            combine_matrices(&mats, &cs)
        };
        let f = BilinearForm::new(m).expect("square");
        f.is_nondegenerate().then_some(f)
    })
}

/// Checks `T* = T` on all basis pairs via `B(T e_i, e_j) = B(e_i, T e_j)`.
pub fn is_self_adjoint(t: &RationalMatrix, form: &BilinearForm) -> bool {
    let b = form.matrix();
    &t.transpose() * b == b * t
}
