//! Brute-force representation counting over explicit finite sets.
//!
//! Everything here is deliberately the obvious quadratic computation: a
//! pair loop over `A x B`, or a linear walk with binary-search membership.
//! Fast paths elsewhere in the crate are tested against this module, so it
//! shares no shortcuts with them. Results are either provably complete for
//! the queried window or refused; the oracle never silently truncates.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::set::FiniteSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// A sum query beyond what the stored sets can certify.
    SumBeyondBound {
        n: BigUint,
        max_certifiable: BigUint,
    },
    /// A difference window containing a value whose count would only be a
    /// lower bound given the stored elements.
    DiffWindowIncomplete { n: BigInt },
    /// Window with `lo > hi`.
    InvalidWindow { lo: BigInt, hi: BigInt },
    /// Window too large to enumerate in memory.
    WindowTooLarge { size: BigInt },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::SumBeyondBound { n, max_certifiable } => write!(
                f,
                "sum count at {n} is not certifiable: window is complete only up to {max_certifiable}"
            ),
            OracleError::DiffWindowIncomplete { n } => write!(
                f,
                "difference count at {n} would be a lower bound only; shrink the window or extend the sets"
            ),
            OracleError::InvalidWindow { lo, hi } => write!(f, "invalid window [{lo},{hi}]"),
            OracleError::WindowTooLarge { size } => {
                write!(f, "window of size {size} is too large to enumerate")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// Exact number of representations `n = a + b` with `a` in `A`, `b` in `B`.
pub fn r_of(a: &FiniteSet, b: &FiniteSet, n: &BigUint) -> Result<u64, OracleError> {
    let max = a.bound().min(b.bound());
    if n > max {
        return Err(OracleError::SumBeyondBound {
            n: n.clone(),
            max_certifiable: max.clone(),
        });
    }
    let mut count = 0u64;
    for x in a.iter().take_while(|x| *x <= n) {
        if b.contains(&(n - x)) {
            count += 1;
        }
    }
    Ok(count)
}

/// All witnesses `(a, b)` with `a + b = n`, ordered by `a`.
pub fn sum_witnesses(
    a: &FiniteSet,
    b: &FiniteSet,
    n: &BigUint,
) -> Result<Vec<(BigUint, BigUint)>, OracleError> {
    let max = a.bound().min(b.bound());
    if n > max {
        return Err(OracleError::SumBeyondBound {
            n: n.clone(),
            max_certifiable: max.clone(),
        });
    }
    let mut out = Vec::new();
    for x in a.iter().take_while(|x| *x <= n) {
        let rest = n - x;
        if b.contains(&rest) {
            out.push((x.clone(), rest));
        }
    }
    Ok(out)
}

/// A difference count plus the completeness verdict for its query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffCount {
    pub count: u64,
    /// When false the count is a lower bound only: the stored windows are
    /// too short to have seen every possible pair.
    pub complete: bool,
}

fn diff_complete(a: &FiniteSet, b: &FiniteSet, n: &BigInt) -> bool {
    let a_bound = BigInt::from(a.bound().clone());
    let b_bound = BigInt::from(b.bound().clone());
    if n.is_negative() {
        // Pairs with b <= B.bound force a = b + n <= B.bound + n.
        b_bound + n <= a_bound
    } else {
        // Pairs with a <= A.bound force b = a - n <= A.bound - n.
        a_bound - n <= b_bound
    }
}

/// Number of representations `n = a - b` among the stored elements, with an
/// explicit marker instead of a silently incomplete count.
pub fn d_of(a: &FiniteSet, b: &FiniteSet, n: &BigInt) -> DiffCount {
    DiffCount {
        count: diff_witnesses(a, b, n).0.len() as u64,
        complete: diff_complete(a, b, n),
    }
}

/// All stored witnesses `(a, b)` with `a - b = n`, ordered by `a`, plus the
/// completeness verdict.
pub fn diff_witnesses(a: &FiniteSet, b: &FiniteSet, n: &BigInt) -> (Vec<(BigUint, BigUint)>, bool) {
    let mut out = Vec::new();
    for x in a.iter() {
        let y = BigInt::from(x.clone()) - n;
        if y.is_negative() {
            continue;
        }
        let y = y.to_biguint().expect("nonnegative");
        if b.contains(&y) {
            out.push((x.clone(), y));
        }
    }
    (out, diff_complete(a, b, n))
}

/// Census controls. `workers` contiguous window chunks are scanned
/// independently and merged in order, so the result is identical for any
/// worker count. `witness_cap` truncates each bucket's stored witnesses
/// (the smallest survive); totals are always exact.
#[derive(Debug, Clone)]
pub struct CensusOptions {
    pub workers: usize,
    pub witness_cap: Option<usize>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            workers: 1,
            witness_cap: None,
        }
    }
}

/// The values of a window grouped by their representation count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bucket {
    /// Number of window values with this count.
    pub total: u64,
    /// Those values in increasing order, possibly capped.
    pub witnesses: Vec<BigInt>,
}

/// Histogram of representation counts over an integer window `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusHistogram {
    lo: BigInt,
    hi: BigInt,
    buckets: BTreeMap<u64, Bucket>,
}

impl CensusHistogram {
    pub fn window(&self) -> (&BigInt, &BigInt) {
        (&self.lo, &self.hi)
    }

    pub fn buckets(&self) -> impl Iterator<Item = (u64, &Bucket)> {
        self.buckets.iter().map(|(c, b)| (*c, b))
    }

    pub fn bucket(&self, c: u64) -> Option<&Bucket> {
        self.buckets.get(&c)
    }

    /// Total across buckets; equals the window size by construction.
    pub fn total(&self) -> u64 {
        self.buckets.values().map(|b| b.total).sum()
    }

    /// The representation count of a single window value. Exact only when
    /// the census was built without a witness cap.
    pub fn count_of(&self, n: &BigInt) -> Option<u64> {
        if n < &self.lo || n > &self.hi {
            return None;
        }
        for (c, bucket) in &self.buckets {
            if bucket.witnesses.binary_search(n).is_ok() {
                return Some(*c);
            }
        }
        None
    }

    /// The smallest window value whose count differs from `expected`,
    /// with its actual count.
    pub fn first_not_equal(&self, expected: u64) -> Option<(BigInt, u64)> {
        self.buckets
            .iter()
            .filter(|(c, _)| **c != expected)
            .filter_map(|(c, b)| b.witnesses.first().map(|n| (n.clone(), *c)))
            .min()
    }

    /// All `(n, count)` rows in increasing `n`. Requires an uncapped census
    /// to be a faithful listing.
    pub fn rows(&self) -> Vec<(BigInt, u64)> {
        let mut rows: Vec<(BigInt, u64)> = self
            .buckets
            .iter()
            .flat_map(|(c, b)| b.witnesses.iter().map(move |n| (n.clone(), *c)))
            .collect();
        rows.sort();
        rows
    }
}

enum ScanKind {
    Sum,
    Diff,
}

/// Count per window value by the plain pair loop, for one contiguous chunk.
fn scan_chunk(
    a: &FiniteSet,
    b: &FiniteSet,
    chunk_lo: &BigInt,
    chunk_len: usize,
    kind: &ScanKind,
) -> Vec<u64> {
    let chunk_hi = chunk_lo + (chunk_len as u64 - 1);
    let mut counts = vec![0u64; chunk_len];
    for x in a.iter() {
        let x = BigInt::from(x.clone());
        match kind {
            ScanKind::Sum => {
                if x > chunk_hi {
                    break;
                }
                for y in b.iter() {
                    let s = &x + BigInt::from(y.clone());
                    if s > chunk_hi {
                        break;
                    }
                    if s >= *chunk_lo {
                        let idx = (s - chunk_lo).to_usize().expect("chunk offset fits usize");
                        counts[idx] += 1;
                    }
                }
            }
            ScanKind::Diff => {
                for y in b.iter() {
                    let s = &x - BigInt::from(y.clone());
                    if s < *chunk_lo {
                        break;
                    }
                    if s <= chunk_hi {
                        let idx = (s - chunk_lo).to_usize().expect("chunk offset fits usize");
                        counts[idx] += 1;
                    }
                }
            }
        }
    }
    counts
}

fn census_scan(
    a: &FiniteSet,
    b: &FiniteSet,
    lo: &BigInt,
    hi: &BigInt,
    opts: &CensusOptions,
    kind: ScanKind,
) -> Result<CensusHistogram, OracleError> {
    if lo > hi {
        return Err(OracleError::InvalidWindow {
            lo: lo.clone(),
            hi: hi.clone(),
        });
    }
    let size = hi - lo + 1;
    let window: usize = size
        .to_usize()
        .filter(|&w| w <= (1 << 28))
        .ok_or(OracleError::WindowTooLarge { size })?;
    let workers = opts.workers.max(1).min(window);

    // Near-equal contiguous chunks; merged in order below, so the result
    // does not depend on the worker count.
    let base = window / workers;
    let extra = window % workers;
    let mut chunks = Vec::with_capacity(workers);
    let mut start = 0usize;
    for i in 0..workers {
        let len = base + usize::from(i < extra);
        if len > 0 {
            chunks.push((start, len));
        }
        start += len;
    }

    let chunk_counts: Vec<Vec<u64>> = if workers == 1 {
        chunks
            .iter()
            .map(|(s, l)| scan_chunk(a, b, &(lo + *s as u64), *l, &kind))
            .collect()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|(s, l)| {
                    let chunk_lo = lo + *s as u64;
                    let kind_ref = &kind;
                    scope.spawn(move || scan_chunk(a, b, &chunk_lo, *l, kind_ref))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("scan worker")).collect()
        })
    };

    let mut buckets: BTreeMap<u64, Bucket> = BTreeMap::new();
    for ((start, len), counts) in chunks.iter().zip(chunk_counts) {
        debug_assert_eq!(*len, counts.len());
        for (offset, c) in counts.into_iter().enumerate() {
            let n = lo + (start + offset) as u64;
            let bucket = buckets.entry(c).or_insert_with(|| Bucket {
                total: 0,
                witnesses: Vec::new(),
            });
            bucket.total += 1;
            if opts.witness_cap.map_or(true, |cap| bucket.witnesses.len() < cap) {
                bucket.witnesses.push(n);
            }
        }
    }
    Ok(CensusHistogram {
        lo: lo.clone(),
        hi: hi.clone(),
        buckets,
    })
}

/// Histogram of `r(n)` over `[lo, hi]`; refuses windows beyond the bounds.
pub fn sum_census(
    a: &FiniteSet,
    b: &FiniteSet,
    lo: &BigUint,
    hi: &BigUint,
    opts: &CensusOptions,
) -> Result<CensusHistogram, OracleError> {
    let max = a.bound().min(b.bound());
    if hi > max {
        return Err(OracleError::SumBeyondBound {
            n: hi.clone(),
            max_certifiable: max.clone(),
        });
    }
    census_scan(
        a,
        b,
        &BigInt::from(lo.clone()),
        &BigInt::from(hi.clone()),
        opts,
        ScanKind::Sum,
    )
}

/// Histogram of `d(n)` over `[lo, hi]`; refuses windows in which any count
/// would be a lower bound only.
pub fn diff_census(
    a: &FiniteSet,
    b: &FiniteSet,
    lo: &BigInt,
    hi: &BigInt,
    opts: &CensusOptions,
) -> Result<CensusHistogram, OracleError> {
    if lo > hi {
        return Err(OracleError::InvalidWindow {
            lo: lo.clone(),
            hi: hi.clone(),
        });
    }
    // The completeness condition is monotone on each sign, so checking the
    // extreme window values of each sign suffices.
    if hi.is_positive() || hi.is_zero() {
        let n = if lo.is_negative() { BigInt::zero() } else { lo.clone() };
        if !diff_complete(a, b, &n) {
            return Err(OracleError::DiffWindowIncomplete { n });
        }
    }
    if lo.is_negative() {
        let minus_one = BigInt::from(-1);
        let n = if hi < &minus_one { hi.clone() } else { minus_one };
        if !diff_complete(a, b, &n) {
            return Err(OracleError::DiffWindowIncomplete { n });
        }
    }
    census_scan(a, b, lo, hi, opts, ScanKind::Diff)
}

/// Witness lists for every `n` in `[lo, hi]`: the map sends `n` to all
/// pairs `(a, b)` with `a + b = n`, ordered by `a`. Values with no
/// representation map to an empty list.
pub fn sum_witness_census(
    a: &FiniteSet,
    b: &FiniteSet,
    lo: &BigUint,
    hi: &BigUint,
) -> Result<BTreeMap<BigUint, Vec<(BigUint, BigUint)>>, OracleError> {
    let max = a.bound().min(b.bound());
    if hi > max {
        return Err(OracleError::SumBeyondBound {
            n: hi.clone(),
            max_certifiable: max.clone(),
        });
    }
    if lo > hi {
        return Err(OracleError::InvalidWindow {
            lo: BigInt::from(lo.clone()),
            hi: BigInt::from(hi.clone()),
        });
    }
    let size = ((hi - lo) + 1u32)
        .to_usize()
        .filter(|&w| w <= (1 << 28))
        .ok_or_else(|| OracleError::WindowTooLarge {
            size: BigInt::from(hi - lo + 1u32),
        })?;
    let mut map: BTreeMap<BigUint, Vec<(BigUint, BigUint)>> = BTreeMap::new();
    let mut n = lo.clone();
    for _ in 0..size {
        map.insert(n.clone(), Vec::new());
        n += 1u32;
    }
    for x in a.iter() {
        if x > hi {
            break;
        }
        for y in b.iter() {
            let s = x + y;
            if &s > hi {
                break;
            }
            if &s >= lo {
                map.get_mut(&s).expect("window value").push((x.clone(), y.clone()));
            }
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn i(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn set(elems: &[u64], bound: u64) -> FiniteSet {
        FiniteSet::new(elems.iter().map(|&e| u(e)).collect(), u(bound)).unwrap()
    }

    fn moser_pair(bound: u64) -> (FiniteSet, FiniteSet) {
        use crate::radix::{PairDescriptor, RadixSequence, SetLabel, SideFlag};
        let pd = PairDescriptor::new(RadixSequence::all_twos(), SideFlag::EvenInA);
        (
            pd.elements_up_to(SetLabel::A, &u(bound)),
            pd.elements_up_to(SetLabel::B, &u(bound)),
        )
    }

    #[test]
    fn r_of_examples() {
        let a = set(&[0, 1, 4, 5], 5);
        let b = set(&[0, 2, 8, 10], 10);
        assert_eq!(r_of(&a, &b, &u(0)).unwrap(), 1);
        assert_eq!(r_of(&a, &b, &u(5)).unwrap(), 1);
        let a = set(&[0, 1], 1);
        let b = set(&[0, 1], 1);
        assert_eq!(r_of(&a, &b, &u(1)).unwrap(), 2);
    }

    #[test]
    fn r_of_refuses_uncertifiable_window() {
        let a = set(&[0, 1, 4, 5], 5);
        let b = set(&[0, 2, 8, 10], 10);
        let err = r_of(&a, &b, &u(6)).unwrap_err();
        assert!(matches!(err, OracleError::SumBeyondBound { .. }));
    }

    #[test]
    fn d_of_examples() {
        let a = set(&[0, 1, 4, 5], 5);
        let b = set(&[0, 2, 8, 10], 10);
        let r = d_of(&a, &b, &i(0));
        assert_eq!((r.count, r.complete), (1, true));
        let r = d_of(&a, &b, &i(3));
        assert_eq!((r.count, r.complete), (1, true));
        let r = d_of(&a, &b, &i(-7));
        assert_eq!((r.count, r.complete), (1, true));
        assert_eq!(diff_witnesses(&a, &b, &i(-7)).0, vec![(u(1), u(8))]);
    }

    #[test]
    fn d_of_flags_incomplete_windows() {
        // n = 1 needs B certified up to A.bound - 1 = 4, but B stops at 2,
        // so a pair like (a, a - 1) with a = 4 or 5 could be missed.
        let a = set(&[0, 1, 4, 5], 5);
        let b = set(&[0, 2], 2);
        assert!(!d_of(&a, &b, &i(1)).complete);
    }

    #[test]
    fn sum_census_examples() {
        let (a, b) = moser_pair(63);
        let h = sum_census(&a, &b, &u(0), &u(63), &CensusOptions::default()).unwrap();
        assert_eq!(h.total(), 64);
        assert_eq!(h.bucket(1).unwrap().total, 64);
        assert_eq!(h.first_not_equal(1), None);

        let a = set(&[0], 9);
        let b = set(&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9], 9);
        let h = sum_census(&a, &b, &u(0), &u(9), &CensusOptions::default()).unwrap();
        assert_eq!(h.bucket(1).unwrap().total, 10);

        let a = set(&[0, 1, 2], 2);
        let h = sum_census(&a, &a, &u(0), &u(2), &CensusOptions::default()).unwrap();
        assert_eq!(h.bucket(1).unwrap().witnesses, vec![i(0)]);
        assert_eq!(h.bucket(2).unwrap().witnesses, vec![i(1)]);
        assert_eq!(h.bucket(3).unwrap().witnesses, vec![i(2)]);
    }

    #[test]
    fn diff_census_examples() {
        let (a, b) = moser_pair(4095);
        let h = diff_census(&a, &b, &i(-42), &i(21), &CensusOptions::default()).unwrap();
        assert_eq!(h.bucket(1).unwrap().total, 64);
        assert_eq!(h.first_not_equal(1), None);

        let a = set(&[0], 0);
        let b = set(&[0, 2], 2);
        let h = diff_census(&a, &b, &i(-2), &i(0), &CensusOptions::default()).unwrap();
        assert_eq!(h.bucket(1).unwrap().witnesses, vec![i(-2), i(0)]);
        assert_eq!(h.bucket(0).unwrap().witnesses, vec![i(-1)]);
    }

    #[test]
    fn diff_census_refuses_incomplete_window() {
        let a = set(&[0, 1, 4, 5], 5);
        let b = set(&[0, 2], 2);
        let err = diff_census(&a, &b, &i(0), &i(1), &CensusOptions::default()).unwrap_err();
        assert!(matches!(err, OracleError::DiffWindowIncomplete { .. }));
    }

    #[test]
    fn census_rows_and_count_of() {
        let a = set(&[0], 0);
        let b = set(&[0, 2], 2);
        let h = diff_census(&a, &b, &i(-2), &i(0), &CensusOptions::default()).unwrap();
        assert_eq!(h.rows(), vec![(i(-2), 1), (i(-1), 0), (i(0), 1)]);
        assert_eq!(h.count_of(&i(-1)), Some(0));
        assert_eq!(h.count_of(&i(7)), None);
    }

    #[test]
    fn witness_cap_keeps_smallest() {
        let (a, b) = moser_pair(63);
        let opts = CensusOptions {
            workers: 1,
            witness_cap: Some(3),
        };
        let h = sum_census(&a, &b, &u(0), &u(63), &opts).unwrap();
        let bucket = h.bucket(1).unwrap();
        assert_eq!(bucket.total, 64);
        assert_eq!(bucket.witnesses, vec![i(0), i(1), i(2)]);
    }

    #[test]
    fn partitioning_does_not_change_results() {
        let (a, b) = moser_pair(4095);
        let base = sum_census(&a, &b, &u(0), &u(4095), &CensusOptions::default()).unwrap();
        for workers in [2, 3, 8, 64] {
            let opts = CensusOptions {
                workers,
                witness_cap: None,
            };
            let h = sum_census(&a, &b, &u(0), &u(4095), &opts).unwrap();
            assert_eq!(h, base);
        }
    }

    #[test]
    fn sum_witness_census_matches_split() {
        use crate::radix::{PairDescriptor, RadixSequence, SideFlag};
        let pd = PairDescriptor::new(RadixSequence::all_twos(), SideFlag::EvenInA);
        let (a, b) = moser_pair(63);
        let map = sum_witness_census(&a, &b, &u(0), &u(63)).unwrap();
        assert_eq!(map.len(), 64);
        for (n, witnesses) in map {
            assert_eq!(witnesses.len(), 1, "n = {n}");
            assert_eq!(witnesses[0], pd.split(&n));
        }
    }

    proptest! {
        #[test]
        fn census_partitions_window(
            elems_a in proptest::collection::btree_set(0u64..40, 1..10),
            elems_b in proptest::collection::btree_set(0u64..40, 1..10),
            workers in 1usize..5,
        ) {
            let a = FiniteSet::new(elems_a.iter().map(|&e| u(e)).collect(), u(40)).unwrap();
            let b = FiniteSet::new(elems_b.iter().map(|&e| u(e)).collect(), u(40)).unwrap();
            let opts = CensusOptions { workers, witness_cap: None };
            let h = sum_census(&a, &b, &u(0), &u(40), &opts).unwrap();
            // Buckets partition the window.
            prop_assert_eq!(h.total(), 41);
            let rows = h.rows();
            prop_assert_eq!(rows.len(), 41);
            for (n, c) in rows {
                let n_u = n.to_biguint().unwrap();
                prop_assert_eq!(r_of(&a, &b, &n_u).unwrap(), c);
            }
        }

        #[test]
        fn diff_symmetry(
            elems_a in proptest::collection::btree_set(0u64..30, 1..8),
            elems_b in proptest::collection::btree_set(0u64..30, 1..8),
            n in -30i64..30,
        ) {
            let a = FiniteSet::new(elems_a.iter().map(|&e| u(e)).collect(), u(30)).unwrap();
            let b = FiniteSet::new(elems_b.iter().map(|&e| u(e)).collect(), u(30)).unwrap();
            let fwd = d_of(&a, &b, &i(n));
            let back = d_of(&b, &a, &i(-n));
            prop_assert_eq!(fwd.count, back.count);
            prop_assert_eq!(fwd.complete, back.complete);
        }
    }
}
