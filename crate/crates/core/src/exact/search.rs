//! Deterministic integer box enumeration.
//!
//! Searches coefficient vectors `c ∈ Z^d` in boxes `[-k, k]^d` for
//! `k = 0, 1, 2, ...`, visiting only the shell `max |c_i| = k` of each box.
//! Inside a shell the order is lexicographic with coordinate 0 most
//! significant and per-coordinate values ordered `0, 1, -1, 2, -2, ...`.
//!
//! If the quantity being tested is a polynomial of degree at most `deg` in
//! the coefficients, a grid with more than `deg` points per axis contains a
//! non-root of any nonzero such polynomial, so exhausting
//! `k = grid_bound(deg)` proves the polynomial vanishes identically.

/// Bounds on a box search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_k: u32,
    pub max_candidates: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_k: u32::MAX,
            max_candidates: 50_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found {
        coeffs: Vec<i64>,
        k: u32,
        value: T,
        candidates_tried: u64,
    },
    Exhausted {
        searched_k: u32,
        proven_bound: u32,
        /// True when every shell up to `proven_bound` was visited.
        certified: bool,
        candidates_tried: u64,
    },
}

impl<T> SearchOutcome<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            SearchOutcome::Found { value, .. } => Some(value),
            SearchOutcome::Exhausted { .. } => None,
        }
    }
}

/// Smallest box radius whose grid certifies a degree-`deg` polynomial.
pub fn grid_bound(deg: usize) -> u32 {
    (deg as u32).div_ceil(2) + 1
}

fn value_order(k: i64) -> Vec<i64> {
    let mut v = vec![0];
    for j in 1..=k {
        v.push(j);
        v.push(-j);
    }
    v
}

/// Visits the shell of radius `k` in dimension `d`, in the documented order.
pub fn for_each_in_shell(d: usize, k: u32, mut visit: impl FnMut(&[i64]) -> bool) -> bool {
    let k = i64::from(k);
    let values = value_order(k);
    if d == 0 {
        return if k == 0 { visit(&[]) } else { true };
    }
    let mut idx = vec![0usize; d];
    let mut coeffs = vec![0i64; d];
    loop {
        for (c, &i) in coeffs.iter_mut().zip(&idx) {
            *c = values[i];
        }
        if coeffs.iter().map(|c| c.abs()).max() == Some(k) && !visit(&coeffs) {
            return false;
        }
        // Odometer, last coordinate fastest.
        let mut pos = d;
        loop {
            if pos == 0 {
                return true;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < values.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Returns the first coefficient vector (in enumeration order) on which
/// `test` succeeds, searching shells up to `min(limits.max_k, proven_bound)`.
pub fn search_boxes<T>(
    d: usize,
    proven_bound: u32,
    limits: SearchLimits,
    mut test: impl FnMut(&[i64]) -> Option<T>,
) -> SearchOutcome<T> {
    let top = limits.max_k.min(proven_bound);
    let mut tried = 0u64;
    let mut hit: Option<(Vec<i64>, u32, T)> = None;
    let mut capped = false;
    let mut searched = 0;
    for k in 0..=top {
        let completed = for_each_in_shell(d, k, |c| {
            if tried >= limits.max_candidates {
                capped = true;
                return false;
            }
            tried += 1;
            if let Some(v) = test(c) {
                hit = Some((c.to_vec(), k, v));
                return false;
            }
            true
        });
        if let Some((coeffs, k, value)) = hit {
            return SearchOutcome::Found {
                coeffs,
                k,
                value,
                candidates_tried: tried,
            };
        }
        if !completed || capped {
            break;
        }
        searched = k;
        if d == 0 {
            break;
        }
    }
    let finished_all = !capped && (searched >= proven_bound || d == 0);
    SearchOutcome::Exhausted {
        searched_k: searched,
        proven_bound,
        certified: finished_all,
        candidates_tried: tried,
    }
}
