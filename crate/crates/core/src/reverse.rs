//! Recovering an invariant metric on `g` from one on `g ⊗ S`.
//!
//! Maps are matrices acting on column coordinates: `F` is `n × nm`
//! (`g ⊗ S → g`), `H` is `nm × n`, and `ψ_s` is the `n × n` matrix with
//! `ψ_s(x)(y) = xᵀ Ψ y`.

use num_traits::Zero;

use crate::assoc::AssocAlgebra;
use crate::current::{iota, verify_invariant_metric, CurrentAlgebra};
use crate::error::{Error, Result};
use crate::exact::search::{grid_bound, search_boxes, SearchLimits, SearchOutcome};
use crate::exact::{nullspace, unit_vector, Rational, RationalMatrix, Subspace};
use crate::form::BilinearForm;
use crate::lie::{combine_matrices, LieAlgebra};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferPair {
    pub s: Vec<Rational>,
    pub f: RationalMatrix,
    pub h: RationalMatrix,
    pub psi: RationalMatrix,
}

fn check_dims(g: &LieAlgebra, s: &AssocAlgebra, bbar: &BilinearForm) -> Result<()> {
    let nm = g.dim() * s.dim();
    if bbar.dim() != nm {
        return Err(Error::DimensionMismatch {
            expected: nm,
            found: bbar.dim(),
        });
    }
    Ok(())
}

/// `P̃(y ⊗ s) = p¹(s) y`.
fn unit_projection(n: usize, s: &AssocAlgebra) -> RationalMatrix {
    let p1 = s.unit_dual_functional();
    let m = s.dim();
    RationalMatrix::from_fn(n, n * m, |i, col| {
        if col / m == i {
            p1[col % m].clone()
        } else {
            Rational::zero()
        }
    })
}

/// First `(t, x, y)` with `F([x ⊗ s_t, y ⊗ 1]) ≠ [F(x ⊗ s_t), y]`.
pub fn equivariance_witness(
    g: &LieAlgebra,
    s: &AssocAlgebra,
    f: &RationalMatrix,
) -> Result<Option<(usize, usize, usize)>> {
    let current = CurrentAlgebra::build(g, s)?;
    let (n, m) = (g.dim(), s.dim());
    let one_iota = iota(n, s.unit());
    for t in 0..m {
        for x in 0..n {
            let xt = current.tensor(&unit_vector(n, x), &unit_vector(m, t));
            let fxt = f.mul_vec(&xt);
            for y in 0..n {
                let lhs = f.mul_vec(&current.as_lie().bracket(&xt, &one_iota.column(y))?);
                let rhs = g.bracket(&fxt, &unit_vector(n, y))?;
                if lhs != rhs {
                    return Ok(Some((t, x, y)));
                }
            }
        }
    }
    Ok(None)
}

/// `F` with `B̄(x ⊗ s, y ⊗ 1) = B(F(x ⊗ s), y)`.
pub fn canonical_f(
    g: &LieAlgebra,
    s: &AssocAlgebra,
    b: &BilinearForm,
    bbar: &BilinearForm,
) -> Result<RationalMatrix> {
    check_dims(g, s, bbar)?;
    if !bbar.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    let b_inv = b.sharp()?;
    let u = iota(g.dim(), s.unit());
    let f = (&(bbar.matrix() * &u) * &b_inv).transpose();
    let current = CurrentAlgebra::build(g, s)?;
    if current.as_lie().is_invariant(bbar) {
        if let Some((t, x, y)) = equivariance_witness(g, s, &f)? {
            return Err(Error::InternalInconsistency(format!(
                "canonical F is not equivariant at (t, x, y) = ({t}, {x}, {y})"
            )));
        }
    }
    Ok(f)
}

/// `H` with `B̄(H(x), y ⊗ s) = p¹(s) B(x, y)`.
pub fn canonical_h(
    g: &LieAlgebra,
    s: &AssocAlgebra,
    b: &BilinearForm,
    bbar: &BilinearForm,
) -> Result<RationalMatrix> {
    check_dims(g, s, bbar)?;
    if !b.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    let bbar_inv = bbar.sharp()?;
    let p = unit_projection(g.dim(), s);
    let h = &(&bbar_inv.transpose() * &p.transpose()) * &b.matrix().transpose();
    let f = canonical_f(g, s, b, bbar)?;
    if &f * &h != RationalMatrix::identity(g.dim()) {
        return Err(Error::InternalInconsistency("F ∘ H ≠ Id".into()));
    }
    Ok(h)
}

/// `Ψ = ι_sᵀ B̄ H`, i.e. `ψ_s(x)(y) = B̄(x ⊗ s, H(y))`.
pub fn psi_matrix(n: usize, s: &[Rational], bbar: &BilinearForm, h: &RationalMatrix) -> RationalMatrix {
    &(&iota(n, s).transpose() * bbar.matrix()) * h
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagramVerdict {
    Commutes {
        perp: Subspace,
        kernel: Subspace,
    },
    Fails {
        /// First entry `(x, Y)` where `B̄(x ⊗ s, Y) ≠ ψ_s(x)(F Y)`.
        witness: (usize, usize),
        perp: Subspace,
        kernel: Subspace,
    },
}

impl DiagramVerdict {
    pub fn commutes(&self) -> bool {
        matches!(self, DiagramVerdict::Commutes { .. })
    }

    pub fn perp(&self) -> &Subspace {
        match self {
            DiagramVerdict::Commutes { perp, .. } | DiagramVerdict::Fails { perp, .. } => perp,
        }
    }

    pub fn kernel(&self) -> &Subspace {
        match self {
            DiagramVerdict::Commutes { kernel, .. } | DiagramVerdict::Fails { kernel, .. } => kernel,
        }
    }
}

/// Tests `B̄♭ ∘ ι_s = F* ∘ ψ_s` entrywise and, separately,
/// `Im(ι_s)^⊥ = Ker F`. The two verdicts must agree.
pub fn check_diagram(
    g: &LieAlgebra,
    s: &AssocAlgebra,
    bbar: &BilinearForm,
    sv: &[Rational],
    f: &RationalMatrix,
    h: &RationalMatrix,
) -> Result<DiagramVerdict> {
    check_dims(g, s, bbar)?;
    let n = g.dim();
    if sv.iter().all(Zero::is_zero) {
        return Err(Error::HypothesisViolated("s must be nonzero".into()));
    }
    if f.rank() != n {
        return Err(Error::HypothesisViolated("F is not surjective".into()));
    }
    if f * h != RationalMatrix::identity(n) {
        return Err(Error::HypothesisViolated("F ∘ H ≠ Id".into()));
    }
    let psi = psi_matrix(n, sv, bbar, h);
    let lhs = &iota(n, sv).transpose() * bbar.matrix();
    let rhs = &psi * f;
    let witness = (0..lhs.rows())
        .flat_map(|i| (0..lhs.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| lhs.get(i, j) != rhs.get(i, j));
    let perp = Subspace::kernel(&lhs);
    let kernel = Subspace::kernel(f);
    if witness.is_none() != (perp == kernel) {
        return Err(Error::InternalInconsistency(
            "diagram equality and Im(ι_s)^⊥ = Ker F disagree".into(),
        ));
    }
    Ok(match witness {
        None => {
            if psi.rank() != n {
                return Err(Error::InternalInconsistency(
                    "diagram commutes but ψ_s is not bijective".into(),
                ));
            }
            DiagramVerdict::Commutes { perp, kernel }
        }
        Some(witness) => DiagramVerdict::Fails {
            witness,
            perp,
            kernel,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredMetric {
    pub pair: TransferPair,
    pub metric: BilinearForm,
    pub perp: Subspace,
}

fn require_current_metric(current: &CurrentAlgebra, bbar: &BilinearForm) -> Result<()> {
    if !bbar.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    if !bbar.is_symmetric() || !current.as_lie().is_invariant(bbar) {
        return Err(Error::HypothesisViolated(
            "B̄ is not a symmetric invariant form on g ⊗ S".into(),
        ));
    }
    Ok(())
}

/// `B(x, y) = ψ_s(x)(y)` after checking the diagram, symmetry of `ψ_s`,
/// and equivariance plus surjectivity of `F`.
pub fn recover_metric(
    g: &LieAlgebra,
    s: &AssocAlgebra,
    bbar: &BilinearForm,
    sv: &[Rational],
    f: &RationalMatrix,
    h: &RationalMatrix,
) -> Result<RecoveredMetric> {
    check_dims(g, s, bbar)?;
    let current = CurrentAlgebra::build(g, s)?;
    require_current_metric(&current, bbar)?;
    let n = g.dim();
    if f.rank() != n {
        return Err(Error::ConditionFailed {
            condition: "iii",
            witness: format!("F has rank {} < {n}", f.rank()),
        });
    }
    let verdict = check_diagram(g, s, bbar, sv, f, h)?;
    if let DiagramVerdict::Fails { witness, .. } = &verdict {
        return Err(Error::ConditionFailed {
            condition: "i",
            witness: format!("entry {witness:?} of B̄♭∘ι_s − F*∘ψ_s"),
        });
    }
    let psi = psi_matrix(n, sv, bbar, h);
    if let Some((x, y)) = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| psi.get(x, y) != psi.get(y, x))
    {
        return Err(Error::ConditionFailed {
            condition: "ii",
            witness: format!("ψ_s(e{x})(e{y}) ≠ ψ_s(e{y})(e{x})"),
        });
    }
    if let Some((t, x, y)) = equivariance_witness(g, s, f)? {
        return Err(Error::ConditionFailed {
            condition: "iii",
            witness: format!("F([e{x} ⊗ s{t}, e{y} ⊗ 1]) ≠ [F(e{x} ⊗ s{t}), e{y}]"),
        });
    }
    let metric = BilinearForm::new(psi.clone())?;
    let report = verify_invariant_metric(g, &metric)?;
    if !report.all_ok() {
        return Err(Error::InternalInconsistency(format!(
            "all three conditions hold but the recovered form fails verification: {report:?}"
        )));
    }
    Ok(RecoveredMetric {
        pair: TransferPair {
            s: sv.to_vec(),
            f: f.clone(),
            h: h.clone(),
            psi,
        },
        metric,
        perp: verdict.perp().clone(),
    })
}

/// `B_t(x, y) = B̄(x ⊗ t, y ⊗ 1)`.
pub fn b_t(n: usize, s: &AssocAlgebra, bbar: &BilinearForm, t: &[Rational]) -> BilinearForm {
    let m = &(&iota(n, t).transpose() * bbar.matrix()) * &iota(n, s.unit());
    BilinearForm::new(m).expect("square")
}

/// `B_{s^{m-1}}` for perfect `g` and `s` of nil index `m = dim S`.
pub fn metric_from_nilpotent(
    g: &LieAlgebra,
    s: &AssocAlgebra,
    bbar: &BilinearForm,
    sv: &[Rational],
) -> Result<BilinearForm> {
    check_dims(g, s, bbar)?;
    if !g.is_perfect() {
        return Err(Error::NotPerfect);
    }
    let m = s.dim();
    let found = s.nil_index(sv);
    if sv.iter().all(Zero::is_zero) || found != Some(m) {
        return Err(Error::WrongNilIndex { expected: m, found });
    }
    let current = CurrentAlgebra::build(g, s)?;
    require_current_metric(&current, bbar)?;
    let t = s.power(sv, m - 1);
    let form = b_t(g.dim(), s, bbar, &t);
    let report = verify_invariant_metric(g, &form)?;
    if !report.all_ok() {
        return Err(Error::InternalInconsistency(format!(
            "B_(s^(m-1)) fails verification: {report:?}"
        )));
    }
    Ok(form)
}

/// Basis of `{ F : F([x ⊗ t, y ⊗ 1]) = [F(x ⊗ t), y] }`.
pub fn equivariant_f_space(g: &LieAlgebra, s: &AssocAlgebra) -> Result<Vec<RationalMatrix>> {
    let current = CurrentAlgebra::build(g, s)?;
    let (n, m) = (g.dim(), s.dim());
    let nm = n * m;
    let var = |r: usize, c: usize| r * nm + c;
    let one_iota = iota(n, s.unit());
    let mut rows = Vec::new();
    for t in 0..m {
        for x in 0..n {
            let xt = current.index(x, t);
            for y in 0..n {
                let br = current
                    .as_lie()
                    .bracket(&unit_vector(nm, xt), &one_iota.column(y))?;
                // Σ_c F[k][c] br[c] − Σ_l F[l][xt] c_g[l][y][k] = 0
                for k in 0..n {
                    let mut row = vec![Rational::zero(); n * nm];
                    for (c, v) in br.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                        row[var(k, c)] += v;
                    }
                    for l in 0..n {
                        let cg = g.structure(l, y, k);
                        if !cg.is_zero() {
                            row[var(l, xt)] -= cg;
                        }
                    }
                    if row.iter().any(|v| !v.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let ns = if rows.is_empty() {
        RationalMatrix::identity(n * nm).to_rows()
    } else {
        nullspace(&RationalMatrix::from_rows(rows))
    };
    Ok(ns
        .into_iter()
        .map(|v| RationalMatrix::from_fn(n, nm, |r, c| v[var(r, c)].clone()))
        .collect())
}

/// A right inverse of a surjective `F`, supported on its pivot columns.
pub fn right_inverse(f: &RationalMatrix) -> Option<RationalMatrix> {
    let n = f.rows();
    let (_, pivots) = f.rref();
    if pivots.len() != n {
        return None;
    }
    let cols: Vec<Vec<Rational>> = pivots.iter().map(|&p| f.column(p)).collect();
    let square = RationalMatrix::from_columns(n, &cols);
    let inv = square.inverse()?;
    let mut h = RationalMatrix::zeros(f.cols(), n);
    for (r, &p) in pivots.iter().enumerate() {
        for c in 0..n {
            h.set(p, c, inv.get(r, c).clone());
        }
    }
    Some(h)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransferSearch {
    Found(Box<RecoveredMetric>),
    Exhausted {
        s_candidates: usize,
        f_space_dim: usize,
        searched_k: u32,
        candidates_tried: u64,
    },
}

/// Bounded search over `s ∈ {1, s_0, s_1, …}` and integer combinations of
/// the equivariant `F` space, in box-enumeration order, for a pair that
/// passes [`recover_metric`].
pub fn search_transfer(
    g: &LieAlgebra,
    s: &AssocAlgebra,
    bbar: &BilinearForm,
    limits: SearchLimits,
) -> Result<TransferSearch> {
    check_dims(g, s, bbar)?;
    let current = CurrentAlgebra::build(g, s)?;
    require_current_metric(&current, bbar)?;
    let n = g.dim();
    let m = s.dim();
    let space = equivariant_f_space(g, s)?;
    let mut s_candidates = vec![s.unit().to_vec()];
    for a in 0..m {
        let e = unit_vector(m, a);
        if !s_candidates.contains(&e) {
            s_candidates.push(e);
        }
    }
    let mut tried = 0u64;
    let mut searched_k = 0;
    for sv in &s_candidates {
        let budget = SearchLimits {
            max_k: limits.max_k,
            max_candidates: limits.max_candidates.saturating_sub(tried),
        };
        let out = search_boxes(space.len(), grid_bound(n), budget, |coeffs| {
            let cs: Vec<Rational> = coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect();
            let f = if space.is_empty() {
                RationalMatrix::zeros(n, n * m)
            } else {
                combine_matrices(&space, &cs)
            };
            let h = right_inverse(&f)?;
            recover_metric(g, s, bbar, sv, &f, &h).ok()
        });
        match out {
            SearchOutcome::Found { value, .. } => return Ok(TransferSearch::Found(Box::new(value))),
            SearchOutcome::Exhausted {
                searched_k: k,
                candidates_tried,
                ..
            } => {
                tried += candidates_tried;
                searched_k = searched_k.max(k);
            }
        }
    }
    Ok(TransferSearch::Exhausted {
        s_candidates: s_candidates.len(),
        f_space_dim: space.len(),
        searched_k,
        candidates_tried: tried,
    })
}
