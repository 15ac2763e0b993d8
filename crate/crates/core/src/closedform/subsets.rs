//! Enumeration of index subsets grouped by the β values they select.
//!
//! Every summand of the volume and facet formulas depends on an index subset
//! only through the multiset of selected β values and the multiset of the
//! remaining ones. With β values `v_1 < … < v_q` occurring `c_1, …, c_q`
//! times, a group is a choice `j_i ∈ [0, c_i]` with `Σ j_i = r`, and it
//! stands for `Π C(c_i, j_i)` index subsets.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::specfun::BetaParam;

use super::BetaVector;

/// One group of index subsets of equal size.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetGroup<T> {
    /// Distinct selected β values with their counts, ascending.
    pub selected: Vec<(BetaParam<T>, usize)>,
    /// Distinct unselected β values with their counts, ascending.
    pub complement: Vec<(BetaParam<T>, usize)>,
    /// Number of index subsets in the group.
    pub multiplicity: u128,
}

impl<T: Scalar> SubsetGroup<T> {
    /// Selected β values expanded with repetition.
    pub fn selected_values(&self) -> Vec<BetaParam<T>> {
        self.selected
            .iter()
            .flat_map(|&(b, c)| std::iter::repeat_n(b, c))
            .collect()
    }

    /// Σ β over the selected indices.
    pub fn selected_sum(&self) -> T {
        self.selected
            .iter()
            .map(|&(b, c)| b.value() * T::from_usize_lossy(c))
            .sum()
    }
}

/// Distinct β values in ascending order with their multiplicities.
pub(crate) fn distinct_counts<T: Scalar>(betas: &BetaVector<T>) -> Vec<(BetaParam<T>, usize)> {
    let mut sorted: Vec<BetaParam<T>> = betas.iter().copied().collect();
    sorted.sort_by(|a, b| a.value().partial_cmp(&b.value()).expect("finite β"));
    let mut out: Vec<(BetaParam<T>, usize)> = Vec::new();
    for b in sorted {
        match out.last_mut() {
            Some((last, c)) if *last == b => *c += 1,
            _ => out.push((b, 1)),
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

/// Number of groups for subset size `r`, saturating at `u128::MAX`.
fn group_count(counts: &[usize], r: usize) -> u128 {
    // ways[s] = number of partial choices summing to s
    let mut ways = vec![0u128; r + 1];
    ways[0] = 1;
    for &c in counts {
        let mut next = vec![0u128; r + 1];
        for (s, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for j in 0..=c.min(r - s) {
                next[s + j] = next[s + j].saturating_add(w);
            }
        }
        ways = next;
    }
    ways[r]
}

/// Groups the r-subsets of `betas` by their (selected, complement) β
/// multisets. Groups come out in a canonical order that does not depend on
/// the order of `betas`.
pub fn enumerate_subsets_grouped<T: Scalar>(
    betas: &BetaVector<T>,
    r: usize,
    budget: u128,
) -> Result<Vec<SubsetGroup<T>>> {
    let n = betas.len();
    if r == 0 || r > n {
        return Err(Error::domain(
            "closedform::enumerate_subsets_grouped",
            format!("subset size must lie in 1..={n}, got {r}"),
        ));
    }
    let distinct = distinct_counts(betas);
    let counts: Vec<usize> = distinct.iter().map(|&(_, c)| c).collect();
    let groups = group_count(&counts, r);
    if groups > budget {
        return Err(Error::Budget {
            op: "closedform::enumerate_subsets_grouped",
            groups,
            budget,
        });
    }

    let mut out = Vec::with_capacity(groups as usize);
    let mut choice = vec![0usize; distinct.len()];
    // suffix[i] = Σ counts[i..]
    let mut suffix = vec![0usize; distinct.len() + 1];
    for i in (0..distinct.len()).rev() {
        suffix[i] = suffix[i + 1] + counts[i];
    }
    fill(&distinct, &suffix, 0, r, &mut choice, &mut out)?;
    debug_assert_eq!(out.len() as u128, groups);
    Ok(out)
}

fn fill<T: Scalar>(
    distinct: &[(BetaParam<T>, usize)],
    suffix: &[usize],
    i: usize,
    remaining: usize,
    choice: &mut [usize],
    out: &mut Vec<SubsetGroup<T>>,
) -> Result<()> {
    if i == distinct.len() {
        if remaining == 0 {
            out.push(build_group(distinct, choice)?);
        }
        return Ok(());
    }
    if suffix[i] < remaining {
        return Ok(());
    }
    let c = distinct[i].1;
    for j in 0..=c.min(remaining) {
        choice[i] = j;
        fill(distinct, suffix, i + 1, remaining - j, choice, out)?;
    }
    choice[i] = 0;
    Ok(())
}

fn build_group<T: Scalar>(
    distinct: &[(BetaParam<T>, usize)],
    choice: &[usize],
) -> Result<SubsetGroup<T>> {
    let mut selected = Vec::new();
    let mut complement = Vec::new();
    let mut multiplicity: u128 = 1;
    for (&(b, c), &j) in distinct.iter().zip(choice) {
        if j > 0 {
            selected.push((b, j));
        }
        if c > j {
            complement.push((b, c - j));
        }
        multiplicity = binomial(c, j)
            .and_then(|w| multiplicity.checked_mul(w))
            .ok_or(Error::Budget {
                op: "closedform::enumerate_subsets_grouped",
                groups: u128::MAX,
                budget: u128::MAX,
            })?;
    }
    Ok(SubsetGroup {
        selected,
        complement,
        multiplicity,
    })
}
