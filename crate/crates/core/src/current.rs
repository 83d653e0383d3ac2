//! Current Lie algebras `g ⊗ S` and the bilinear maps `α: S × S → Γ(g)`
//! that induce invariant metrics on them.
//!
//! Composite basis vectors `e_i ⊗ s_a` are indexed by `i * m + a`, where
//! `m = dim S`. Every matrix on `g ⊗ S` in this crate uses that order.

use num_traits::Zero;

use crate::assoc::AssocAlgebra;
use crate::error::{Error, Result};
use crate::exact::search::{grid_bound, search_boxes, SearchLimits, SearchOutcome};
use crate::exact::{
    nullspace, scalar_plus_nilpotent_split, unit_vector, Rational, RationalMatrix, Subspace,
};
use crate::form::BilinearForm;
use crate::lie::{combine_matrices, find_nondegenerate, Indecomposability, LieAlgebra};

/// Text of the composite index convention, for reports and certificates.
pub const INDEX_CONVENTION: &str = "(i,a) -> i*m + a";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentAlgebra {
    g: LieAlgebra,
    s: AssocAlgebra,
    lie: LieAlgebra,
}

impl CurrentAlgebra {
    pub fn build(g: &LieAlgebra, s: &AssocAlgebra) -> Result<Self> {
        if !g.validate().is_ok() {
            return Err(Error::InvalidAlgebra("Lie algebra fails validation".into()));
        }
        if !s.validate().is_ok() {
            return Err(Error::InvalidAlgebra("associative algebra fails validation".into()));
        }
        let (n, m) = (g.dim(), s.dim());
        let dim = n * m;
        let mut c = vec![Rational::zero(); dim * dim * dim];
        for i in 0..n {
            for j in 0..n {
                for (k, cij) in g.bracket_support(i, j) {
                    for a in 0..m {
                        for b in 0..m {
                            for d in 0..m {
                                let mu = s.structure(a, b, d);
                                if mu.is_zero() {
                                    continue;
                                }
                                let (p, q, r) = (i * m + a, j * m + b, k * m + d);
                                c[(p * dim + q) * dim + r] = cij * mu;
                            }
                        }
                    }
                }
            }
        }
        let names = g
            .basis_names()
            .iter()
            .flat_map(|x| s.basis_names().iter().map(move |t| format!("{x}⊗{t}")))
            .collect();
        Ok(Self {
            g: g.clone(),
            s: s.clone(),
            lie: LieAlgebra::new(names, c)?,
        })
    }

    pub fn g(&self) -> &LieAlgebra {
        &self.g
    }

    pub fn s(&self) -> &AssocAlgebra {
        &self.s
    }

    pub fn as_lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn index(&self, i: usize, a: usize) -> usize {
        i * self.s.dim() + a
    }

    /// `x ⊗ s` as a composite coordinate vector.
    pub fn tensor(&self, x: &[Rational], s: &[Rational]) -> Vec<Rational> {
        tensor(x, s)
    }

    /// `ι_s: x ↦ x ⊗ s` as an `nm × n` matrix.
    pub fn iota(&self, s: &[Rational]) -> RationalMatrix {
        iota(self.g.dim(), s)
    }

    /// Checks that `ι_1` preserves brackets on all basis pairs.
    pub fn iota_unit_is_homomorphism(&self) -> bool {
        let n = self.g.dim();
        let iota1 = self.iota(self.s.unit());
        (0..n).all(|i| {
            (0..n).all(|j| {
                let lhs = iota1.mul_vec(&self.g.bracket_basis(i, j));
                let rhs = self
                    .lie
                    .bracket(&iota1.column(i), &iota1.column(j))
                    .expect("sized");
                lhs == rhs
            })
        })
    }
}

pub fn tensor(x: &[Rational], s: &[Rational]) -> Vec<Rational> {
    x.iter().flat_map(|xi| s.iter().map(move |sa| xi * sa)).collect()
}

pub fn iota(n: usize, s: &[Rational]) -> RationalMatrix {
    let m = s.len();
    RationalMatrix::from_fn(n * m, n, |r, i| {
        if r / m == i {
            s[r % m].clone()
        } else {
            Rational::zero()
        }
    })
}

/// Values `α(s_a, s_b)` on basis pairs, stored at `a * m + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaMap {
    g_dim: usize,
    s_dim: usize,
    maps: Vec<RationalMatrix>,
}

impl AlphaMap {
    pub fn zero(g_dim: usize, s_dim: usize) -> Self {
        Self {
            g_dim,
            s_dim,
            maps: vec![RationalMatrix::zeros(g_dim, g_dim); s_dim * s_dim],
        }
    }

    pub fn from_fn(g_dim: usize, s_dim: usize, mut f: impl FnMut(usize, usize) -> RationalMatrix) -> Self {
        let maps = (0..s_dim)
            .flat_map(|a| (0..s_dim).map(move |b| (a, b)))
            .map(|(a, b)| f(a, b))
            .collect::<Vec<_>>();
        assert!(maps.iter().all(|t| t.rows() == g_dim && t.cols() == g_dim));
        Self { g_dim, s_dim, maps }
    }

    /// `α(s, t) = γ(s, t) · T` for a fixed operator `T`.
    pub fn scalar_times(gamma: &BilinearForm, t: &RationalMatrix) -> Self {
        Self::from_fn(t.rows(), gamma.dim(), |a, b| t.scale(gamma.entry(a, b)))
    }

    pub fn g_dim(&self) -> usize {
        self.g_dim
    }

    pub fn s_dim(&self) -> usize {
        self.s_dim
    }

    pub fn get(&self, a: usize, b: usize) -> &RationalMatrix {
        &self.maps[a * self.s_dim + b]
    }

    pub fn maps(&self) -> &[RationalMatrix] {
        &self.maps
    }

    /// Bilinear extension to arbitrary `s, t`.
    pub fn eval(&self, s: &[Rational], t: &[Rational]) -> RationalMatrix {
        let mut acc = RationalMatrix::zeros(self.g_dim, self.g_dim);
        for (a, sa) in s.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, tb) in t.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                acc = &acc + &self.get(a, b).scale(&(sa * tb));
            }
        }
        acc
    }

    pub fn add(&self, other: &AlphaMap) -> AlphaMap {
        AlphaMap {
            g_dim: self.g_dim,
            s_dim: self.s_dim,
            maps: self.maps.iter().zip(&other.maps).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> AlphaMap {
        AlphaMap {
            g_dim: self.g_dim,
            s_dim: self.s_dim,
            maps: self.maps.iter().map(|x| x.scale(k)).collect(),
        }
    }

    /// `ℱ(s_a): x ⊗ s_b ↦ α(s_a, s_b) x`, an `n × nm` matrix.
    pub fn f_map(&self, a: usize) -> RationalMatrix {
        let (n, m) = (self.g_dim, self.s_dim);
        RationalMatrix::from_fn(n, n * m, |k, col| self.get(a, col % m).get(k, col / m).clone())
    }

    /// All `ℱ(s_a)` stacked; its kernel is `⋂_s Ker ℱ(s)`.
    pub fn stacked_f(&self) -> RationalMatrix {
        let blocks: Vec<_> = (0..self.s_dim).map(|a| self.f_map(a)).collect();
        if blocks.is_empty() {
            return RationalMatrix::zeros(0, 0);
        }
        RationalMatrix::vstack(&blocks)
    }

    pub fn kernel_of_f(&self) -> Subspace {
        if self.s_dim == 0 {
            return Subspace::zero(0);
        }
        Subspace::kernel(&self.stacked_f())
    }

    /// Coordinates of each `α(s_a, s_b)` over `basis`, or the first pair
    /// whose value leaves its span.
    pub fn coordinates(&self, basis: &[RationalMatrix]) -> Result<Vec<Vec<Rational>>> {
        let n2 = self.g_dim * self.g_dim;
        let cols: Vec<Vec<Rational>> = basis.iter().map(|t| t.entries().to_vec()).collect();
        let system = RationalMatrix::from_columns(n2, &cols);
        let mut out = Vec::with_capacity(self.maps.len());
        for (idx, t) in self.maps.iter().enumerate() {
            match crate::exact::solve(&system, t.entries()) {
                crate::exact::Solution::Solved(x) => out.push(x),
                crate::exact::Solution::Inconsistent { .. } => {
                    return Err(Error::NotInCentroid(format!(
                        "α(s{}, s{})",
                        idx / self.s_dim,
                        idx % self.s_dim
                    )))
                }
            }
        }
        Ok(out)
    }
}

/// Product metric `B(x, y) γ(s, t)`.
pub fn product_metric(b: &BilinearForm, gamma: &BilinearForm) -> BilinearForm {
    BilinearForm::new(b.matrix().kron(gamma.matrix())).expect("square")
}

/// `B̄(x ⊗ s, y ⊗ t) = B(α(t, s) x, y)`.
pub fn metric_from_alpha(b: &BilinearForm, alpha: &AlphaMap) -> BilinearForm {
    let (n, m) = (alpha.g_dim(), alpha.s_dim());
    // (α(t,s)^T B)[i][j] = B(α(t,s) e_i, e_j)
    let blocks: Vec<RationalMatrix> = alpha
        .maps()
        .iter()
        .map(|t| &t.transpose() * b.matrix())
        .collect();
    let mat = RationalMatrix::from_fn(n * m, n * m, |p, q| {
        let (i, a) = (p / m, p % m);
        let (j, bb) = (q / m, q % m);
        blocks[bb * m + a].get(i, j).clone()
    });
    BilinearForm::new(mat).expect("square")
}

/// Independent verdicts on symmetry, invariance and nondegeneracy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricReport {
    pub symmetric: bool,
    pub invariant: bool,
    pub nondegenerate: bool,
    pub symmetry_witness: Option<(usize, usize)>,
    pub invariance_witness: Option<(usize, usize, usize)>,
    pub kernel_witness: Option<Vec<Rational>>,
}

impl MetricReport {
    pub fn all_ok(&self) -> bool {
        self.symmetric && self.invariant && self.nondegenerate
    }
}

pub fn verify_invariant_metric(l: &LieAlgebra, form: &BilinearForm) -> Result<MetricReport> {
    if form.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            found: form.dim(),
        });
    }
    let n = l.dim();
    let symmetry_witness = (0..n)
        .flat_map(|i| (0..i).map(move |j| (j, i)))
        .find(|&(i, j)| form.entry(i, j) != form.entry(j, i));
    let invariance_witness = l.invariance_witness(form);
    let kernel_witness = if form.is_nondegenerate() {
        None
    } else {
        form.left_radical().basis().first().cloned()
    };
    Ok(MetricReport {
        symmetric: symmetry_witness.is_none(),
        invariant: invariance_witness.is_none(),
        nondegenerate: kernel_witness.is_none(),
        symmetry_witness,
        invariance_witness,
        kernel_witness,
    })
}

fn require_metric(g: &LieAlgebra, b: &BilinearForm) -> Result<()> {
    if b.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: b.dim(),
        });
    }
    if !b.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    if !b.is_symmetric() || !g.is_invariant(b) {
        return Err(Error::HypothesisViolated("B is not a symmetric invariant form on g".into()));
    }
    Ok(())
}

/// A linear space of bilinear maps `α`, with the centroid basis it was
/// expressed over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaSpace {
    pub centroid_basis: Vec<RationalMatrix>,
    pub elements: Vec<AlphaMap>,
    /// Centroid coordinates of each element, `m² × r` per element.
    pub coordinates: Vec<Vec<Vec<Rational>>>,
}

impl AlphaSpace {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn combine(&self, coeffs: &[Rational], g_dim: usize, s_dim: usize) -> AlphaMap {
        let mut acc = AlphaMap::zero(g_dim, s_dim);
        for (e, c) in self.elements.iter().zip(coeffs) {
            if !c.is_zero() {
                acc = acc.add(&e.scale(c));
            }
        }
        acc
    }
}

/// All `α: S × S → Γ(g)` with `α(s,t) = α(st,1)` on `[g,g]` and
/// `α(s,t)* = α(t,s)`. Nondegeneracy is not imposed.
#[allow(clippy::needless_range_loop)]
pub fn alpha_condition_space(g: &LieAlgebra, b: &BilinearForm, s: &AssocAlgebra) -> Result<AlphaSpace> {
    require_metric(g, b)?;
    let (n, m) = (g.dim(), s.dim());
    let centroid = g.centroid_basis();
    let r = centroid.len();
    let var = |a: usize, bb: usize, i: usize| (a * m + bb) * r + i;
    let unknowns = m * m * r;
    let derived = g.derived_subalgebra();
    let images: Vec<Vec<Vec<Rational>>> = centroid
        .iter()
        .map(|t| derived.basis().iter().map(|x| t.mul_vec(x)).collect())
        .collect();
    let unit = s.unit();
    let mut rows: Vec<Vec<Rational>> = Vec::new();

    // (i): α(s_a,s_b) x - Σ_{c,d} μ_ab^c u_d α(s_c,s_d) x = 0 on a basis of [g,g].
    for a in 0..m {
        for bb in 0..m {
            for (xi, _) in derived.basis().iter().enumerate() {
                for k in 0..n {
                    let mut row = vec![Rational::zero(); unknowns];
                    for i in 0..r {
                        let v = &images[i][xi][k];
                        if v.is_zero() {
                            continue;
                        }
                        row[var(a, bb, i)] += v;
                        for c in 0..m {
                            let mu = s.structure(a, bb, c);
                            if mu.is_zero() {
                                continue;
                            }
                            for (d, ud) in unit.iter().enumerate().filter(|(_, u)| !u.is_zero()) {
                                row[var(c, d, i)] -= &(mu * ud) * v;
                            }
                        }
                    }
                    if row.iter().any(|v| !v.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
    }

    // (iii): α(s_a,s_b)^T B - B α(s_b,s_a) = 0.
    let left: Vec<RationalMatrix> = centroid.iter().map(|t| &t.transpose() * b.matrix()).collect();
    let right: Vec<RationalMatrix> = centroid.iter().map(|t| b.matrix() * t).collect();
    for a in 0..m {
        for bb in 0..m {
            for p in 0..n {
                for q in 0..n {
                    let mut row = vec![Rational::zero(); unknowns];
                    for i in 0..r {
                        row[var(a, bb, i)] += left[i].get(p, q);
                        row[var(bb, a, i)] -= right[i].get(p, q);
                    }
                    if row.iter().any(|v| !v.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
    }

    let ns = if rows.is_empty() {
        RationalMatrix::identity(unknowns).to_rows()
    } else {
        nullspace(&RationalMatrix::from_rows(rows))
    };
    let mut elements = Vec::with_capacity(ns.len());
    let mut coordinates = Vec::with_capacity(ns.len());
    for v in ns {
        let coords: Vec<Vec<Rational>> = (0..m * m).map(|ab| v[ab * r..(ab + 1) * r].to_vec()).collect();
        let alpha = AlphaMap::from_fn(n, m, |a, bb| combine_matrices(&centroid, &coords[a * m + bb]));
        elements.push(alpha);
        coordinates.push(coords);
    }
    Ok(AlphaSpace {
        centroid_basis: centroid,
        elements,
        coordinates,
    })
}

/// Per-condition verdicts for a supplied `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaCheck {
    /// First pair `(a, b)` with `α(s_a, s_b) ∉ Γ(g)`.
    pub centroid_witness: Option<(usize, usize)>,
    /// First `(a, b, x)` with `α(s_a,s_b) x ≠ α(s_a s_b, 1) x`, `x` an index
    /// into the basis of `[g, g]`.
    pub condition_i_witness: Option<(usize, usize, usize)>,
    pub kernel: Subspace,
    /// First pair with `α(s_a,s_b)* ≠ α(s_b,s_a)`.
    pub condition_iii_witness: Option<(usize, usize)>,
}

impl AlphaCheck {
    pub fn all_ok(&self) -> bool {
        self.centroid_witness.is_none()
            && self.condition_i_witness.is_none()
            && self.kernel.is_zero()
            && self.condition_iii_witness.is_none()
    }
}

pub fn check_alpha(g: &LieAlgebra, b: &BilinearForm, s: &AssocAlgebra, alpha: &AlphaMap) -> Result<AlphaCheck> {
    require_metric(g, b)?;
    let m = s.dim();
    if alpha.g_dim() != g.dim() || alpha.s_dim() != m {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: alpha.g_dim(),
        });
    }
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (0..m).map(move |bb| (a, bb))).collect();
    let centroid_witness = pairs.iter().copied().find(|&(a, bb)| !g.is_centroid(alpha.get(a, bb)));
    let derived = g.derived_subalgebra();
    let mut condition_i_witness = None;
    'outer: for &(a, bb) in &pairs {
        let st = s.product_basis(a, bb);
        let lhs = alpha.get(a, bb);
        let rhs = alpha.eval(&st, s.unit());
        for (xi, x) in derived.basis().iter().enumerate() {
            if lhs.mul_vec(x) != rhs.mul_vec(x) {
                condition_i_witness = Some((a, bb, xi));
                break 'outer;
            }
        }
    }
    let bm = b.matrix();
    let condition_iii_witness = pairs
        .iter()
        .copied()
        .find(|&(a, bb)| &alpha.get(a, bb).transpose() * bm != bm * alpha.get(bb, a));
    Ok(AlphaCheck {
        centroid_witness,
        condition_i_witness,
        kernel: alpha.kernel_of_f(),
        condition_iii_witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveRoute {
    /// `α = γ · Id` for a Frobenius form `γ` on `S`.
    ProductFastPath { gamma: BilinearForm },
    /// Integer combination of the condition-space basis.
    BoxSearch { coeffs: Vec<i64>, k: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentMetricSolution {
    pub alpha: AlphaMap,
    pub alpha_coordinates: Vec<Vec<Rational>>,
    pub metric: BilinearForm,
    pub report: MetricReport,
    pub kernel: Subspace,
    pub route: SolveRoute,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurrentMetricOutcome {
    Found(Box<CurrentMetricSolution>),
    /// Every `α` in the condition space induces a degenerate form, proven
    /// by exhausting the grid bound.
    NoMetric {
        space: AlphaSpace,
        searched_k: u32,
        proven_bound: u32,
    },
    /// The search stopped before the grid bound.
    Inconclusive {
        space: AlphaSpace,
        searched_k: u32,
        proven_bound: u32,
        candidates_tried: u64,
    },
}

fn finish(
    g: &LieAlgebra,
    b: &BilinearForm,
    s: &AssocAlgebra,
    centroid: &[RationalMatrix],
    alpha: AlphaMap,
    route: SolveRoute,
) -> Result<CurrentMetricOutcome> {
    let current = CurrentAlgebra::build(g, s)?;
    let metric = metric_from_alpha(b, &alpha);
    let report = verify_invariant_metric(current.as_lie(), &metric)?;
    let kernel = alpha.kernel_of_f();
    if kernel.is_zero() != metric.is_nondegenerate() {
        return Err(Error::InternalInconsistency(
            "kernel condition (ii) disagrees with nondegeneracy of the induced form".into(),
        ));
    }
    if !report.all_ok() {
        return Err(Error::InternalInconsistency(format!(
            "accepted α induces a form failing verification: {report:?}"
        )));
    }
    let alpha_coordinates = alpha.coordinates(centroid)?;
    Ok(CurrentMetricOutcome::Found(Box::new(CurrentMetricSolution {
        alpha,
        alpha_coordinates,
        metric,
        report,
        kernel,
        route,
    })))
}

/// Finds `α` satisfying all three conditions. Tries `α = γ · Id` with a
/// Frobenius form `γ` first, then enumerates the condition space.
pub fn solve_current_metric(
    g: &LieAlgebra,
    b: &BilinearForm,
    s: &AssocAlgebra,
    limits: SearchLimits,
) -> Result<CurrentMetricOutcome> {
    require_metric(g, b)?;
    let (n, m) = (g.dim(), s.dim());
    let centroid = g.centroid_basis();

    let frob = s.frobenius_forms();
    if let Some(gamma) = find_nondegenerate(&frob, m, limits).found() {
        let alpha = AlphaMap::scalar_times(gamma, &RationalMatrix::identity(n));
        return finish(g, b, s, &centroid, alpha, SolveRoute::ProductFastPath { gamma: gamma.clone() });
    }

    let space = alpha_condition_space(g, b, s)?;
    let outcome = search_boxes(space.dim(), grid_bound(n * m), limits, |coeffs| {
        let cs: Vec<Rational> = coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect();
        let alpha = space.combine(&cs, n, m);
        metric_from_alpha(b, &alpha).is_nondegenerate().then_some(alpha)
    });
    match outcome {
        SearchOutcome::Found { coeffs, k, value, .. } => {
            finish(g, b, s, &centroid, value, SolveRoute::BoxSearch { coeffs, k })
        }
        SearchOutcome::Exhausted {
            searched_k,
            proven_bound,
            certified: true,
            ..
        } => Ok(CurrentMetricOutcome::NoMetric {
            space,
            searched_k,
            proven_bound,
        }),
        SearchOutcome::Exhausted {
            searched_k,
            proven_bound,
            candidates_tried,
            ..
        } => Ok(CurrentMetricOutcome::Inconclusive {
            space,
            searched_k,
            proven_bound,
            candidates_tried,
        }),
    }
}

/// `ᾱ(s,t) = α(s,t) + α(t,s) = γ(s,t) Id + σ(s,t)` on basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusExtraction {
    pub gamma: BilinearForm,
    /// `σ(s_a, s_b)` at `a * m + b`.
    pub sigma: Vec<RationalMatrix>,
}

pub fn extract_frobenius_from_alpha(
    s: &AssocAlgebra,
    alpha: &AlphaMap,
    verdict: &Indecomposability,
) -> Result<FrobeniusExtraction> {
    if *verdict != Indecomposability::Indecomposable {
        return Err(Error::HypothesisViolated(format!(
            "g must be indecomposable, verdict was {verdict:?}"
        )));
    }
    let m = s.dim();
    let mut gamma = RationalMatrix::zeros(m, m);
    let mut sigma = Vec::with_capacity(m * m);
    for a in 0..m {
        for bb in 0..m {
            let sym = alpha.get(a, bb) + alpha.get(bb, a);
            let (scalar, nil) = scalar_plus_nilpotent_split(&sym)?;
            gamma.set(a, bb, scalar);
            sigma.push(nil);
        }
    }
    // Additivity in the first slot on sums of basis vectors.
    for a in 0..m {
        for a2 in a + 1..m {
            for c in 0..m {
                let sum = crate::exact::add_vectors(&unit_vector(m, a), &unit_vector(m, a2));
                let t = unit_vector(m, c);
                let sym = &alpha.eval(&sum, &t) + &alpha.eval(&t, &sum);
                let (scalar, _) = scalar_plus_nilpotent_split(&sym)?;
                if scalar != gamma.get(a, c) + gamma.get(a2, c) {
                    return Err(Error::InternalInconsistency("extracted γ is not additive".into()));
                }
            }
        }
    }
    let gamma = BilinearForm::new(gamma)?;
    if !s.is_frobenius_form(&gamma) {
        return Err(Error::InternalInconsistency(
            "extracted γ is not a Frobenius form on S".into(),
        ));
    }
    Ok(FrobeniusExtraction { gamma, sigma })
}
