//! Mixed-radix arithmetic and the interleaved digit-set pair generator.
//!
//! A radix sequence `m_1, m_2, ...` (every entry at least 2) defines a
//! mixed-radix numeral system: every nonnegative integer is uniquely
//! `e_0 + e_1*m_1 + e_2*m_1*m_2 + ...` with `0 <= e_i < m_{i+1}`. Splitting
//! the digit positions into evens and odds yields a pair of sets `(A, B)`
//! whose sums cover every nonnegative integer exactly once. The all-2
//! sequence produces the Moser-de Bruijn sequence as the even-position set.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::set::FiniteSet;

/// Hard ceiling on digit expansions. Every radix entry is at least 2, so an
/// expansion of `n` never needs more than `n.bits()` digits; hitting this
/// limit means a corrupted radix sequence, and we fail loudly rather than
/// loop.
pub const MAX_ENCODED_DIGITS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RadixError {
    /// A radix entry below 2.
    EntryTooSmall(u64),
    /// A cycle tail with no entries.
    EmptyCycle,
    /// A digit that does not fit its position.
    DigitOutOfRange {
        position: usize,
        digit: u64,
        radix: u64,
    },
    /// Unparseable radix specification.
    Malformed(String),
}

impl fmt::Display for RadixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadixError::EntryTooSmall(v) => {
                write!(f, "radix entry {v} is below the minimum of 2")
            }
            RadixError::EmptyCycle => write!(f, "cycle tail must list at least one radix"),
            RadixError::DigitOutOfRange {
                position,
                digit,
                radix,
            } => write!(
                f,
                "digit {digit} at position {position} exceeds radix {radix}"
            ),
            RadixError::Malformed(s) => write!(f, "malformed radix spec: {s}"),
        }
    }
}

impl std::error::Error for RadixError {}

/// Rule producing radices beyond the explicit prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    /// Every remaining radix equals the value.
    Constant(u64),
    /// Remaining radices repeat the cycle forever.
    Cycle(Vec<u64>),
}

/// A conceptually infinite sequence of radices `m_1, m_2, ...`, stored as a
/// finite prefix plus a tail rule. Indexing is 1-based to match the usual
/// `m_1` convention; positions in a digit expansion are 0-based, and
/// position `p` is governed by `m_{p+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadixSequence {
    prefix: Vec<u64>,
    tail: Tail,
}

impl RadixSequence {
    pub fn new(prefix: Vec<u64>, tail: Tail) -> Result<Self, RadixError> {
        for &m in &prefix {
            if m < 2 {
                return Err(RadixError::EntryTooSmall(m));
            }
        }
        match &tail {
            Tail::Constant(v) => {
                if *v < 2 {
                    return Err(RadixError::EntryTooSmall(*v));
                }
            }
            Tail::Cycle(cycle) => {
                if cycle.is_empty() {
                    return Err(RadixError::EmptyCycle);
                }
                for &m in cycle {
                    if m < 2 {
                        return Err(RadixError::EntryTooSmall(m));
                    }
                }
            }
        }
        Ok(RadixSequence { prefix, tail })
    }

    /// The all-2 sequence, whose even-position set is Moser-de Bruijn.
    pub fn all_twos() -> Self {
        RadixSequence {
            prefix: Vec::new(),
            tail: Tail::Constant(2),
        }
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// The radix `m_index` (1-based).
    pub fn entry(&self, index: usize) -> u64 {
        assert!(index >= 1, "radix indices are 1-based");
        if index <= self.prefix.len() {
            return self.prefix[index - 1];
        }
        match &self.tail {
            Tail::Constant(v) => *v,
            Tail::Cycle(cycle) => cycle[(index - self.prefix.len() - 1) % cycle.len()],
        }
    }

    /// The radix governing digit position `pos` (0-based). This is the one
    /// place fixing the position-to-index mapping `pos <-> m_{pos+1}`.
    pub fn radix_for_position(&self, pos: usize) -> u64 {
        self.entry(pos + 1)
    }

    /// `w_j = m_1 * m_2 * ... * m_j`, with `w_0 = 1`.
    pub fn weight(&self, j: usize) -> BigUint {
        let mut w = BigUint::one();
        for i in 1..=j {
            w *= self.entry(i);
        }
        w
    }
}

impl fmt::Display for RadixSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = self
            .prefix
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(",");
        match &self.tail {
            Tail::Constant(v) => write!(f, "{prefix}|c{v}"),
            Tail::Cycle(cycle) => {
                let cy = cycle
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                write!(f, "{prefix}|r{cy}")
            }
        }
    }
}

fn parse_entry_list(s: &str) -> Result<Vec<u64>, RadixError> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<u64>()
                .map_err(|_| RadixError::Malformed(format!("bad radix entry {part:?}")))
        })
        .collect()
}

impl FromStr for RadixSequence {
    type Err = RadixError;

    /// Grammar: comma-separated prefix, then an optional `|` tail spec.
    /// `"2,3|c2"` is prefix 2,3 with a constant-2 tail; `"2,3|r4,5"` repeats
    /// 4,5 forever after the prefix. A bare list `"2,3"` keeps repeating its
    /// last entry (so `"2"` is the all-2 sequence).
    fn from_str(s: &str) -> Result<Self, RadixError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(RadixError::Malformed("empty spec".into()));
        }
        if let Some((prefix_part, tail_part)) = s.split_once('|') {
            let prefix = if prefix_part.trim().is_empty() {
                Vec::new()
            } else {
                parse_entry_list(prefix_part)?
            };
            let tail_part = tail_part.trim();
            let tail = if let Some(v) = tail_part.strip_prefix('c') {
                let v = v
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| RadixError::Malformed(format!("bad constant tail {v:?}")))?;
                Tail::Constant(v)
            } else if let Some(list) = tail_part.strip_prefix('r') {
                if list.trim().is_empty() {
                    return Err(RadixError::EmptyCycle);
                }
                Tail::Cycle(parse_entry_list(list)?)
            } else {
                return Err(RadixError::Malformed(format!(
                    "tail {tail_part:?} must start with 'c' or 'r'"
                )));
            };
            RadixSequence::new(prefix, tail)
        } else {
            let entries = parse_entry_list(s)?;
            let last = *entries.last().expect("list is nonempty");
            RadixSequence::new(entries, Tail::Constant(last))
        }
    }
}

/// Digit vector `e_0, e_1, ..., e_{L-1}` of a mixed-radix expansion.
/// Canonical form has no trailing zero digit; the empty vector encodes 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedRadixDigits(Vec<u64>);

impl MixedRadixDigits {
    pub fn new(digits: Vec<u64>) -> Self {
        MixedRadixDigits(digits)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.0.last().map_or(true, |&d| d != 0)
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }
}

/// Which of the two sets owns the even digit positions (position 0 is even,
/// so the even owner is the set containing 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideFlag {
    EvenInA,
    EvenInB,
}

impl SideFlag {
    pub fn swapped(self) -> SideFlag {
        match self {
            SideFlag::EvenInA => SideFlag::EvenInB,
            SideFlag::EvenInB => SideFlag::EvenInA,
        }
    }
}

impl fmt::Display for SideFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideFlag::EvenInA => write!(f, "A"),
            SideFlag::EvenInB => write!(f, "B"),
        }
    }
}

impl FromStr for SideFlag {
    type Err = RadixError;

    fn from_str(s: &str) -> Result<Self, RadixError> {
        match s.trim() {
            "A" | "a" => Ok(SideFlag::EvenInA),
            "B" | "b" => Ok(SideFlag::EvenInB),
            other => Err(RadixError::Malformed(format!(
                "side {other:?} must be A or B"
            ))),
        }
    }
}

/// Selects one set of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetLabel {
    A,
    B,
}

impl SetLabel {
    pub fn other(self) -> SetLabel {
        match self {
            SetLabel::A => SetLabel::B,
            SetLabel::B => SetLabel::A,
        }
    }
}

impl fmt::Display for SetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetLabel::A => write!(f, "A"),
            SetLabel::B => write!(f, "B"),
        }
    }
}

impl FromStr for SetLabel {
    type Err = RadixError;

    fn from_str(s: &str) -> Result<Self, RadixError> {
        match s.trim() {
            "A" | "a" => Ok(SetLabel::A),
            "B" | "b" => Ok(SetLabel::B),
            other => Err(RadixError::Malformed(format!(
                "set {other:?} must be A or B"
            ))),
        }
    }
}

/// A radix sequence plus the side flag, fully describing a pair `(A, B)`
/// with unique sum representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDescriptor {
    pub radix: RadixSequence,
    pub side: SideFlag,
}

impl PairDescriptor {
    pub fn new(radix: RadixSequence, side: SideFlag) -> Self {
        PairDescriptor { radix, side }
    }

    pub fn even_owner(&self) -> SetLabel {
        match self.side {
            SideFlag::EvenInA => SetLabel::A,
            SideFlag::EvenInB => SetLabel::B,
        }
    }

    /// Whether `label`'s set owns digit position `pos`.
    pub fn owns(&self, label: SetLabel, pos: usize) -> bool {
        (pos % 2 == 0) == (label == self.even_owner())
    }

    /// `w_j = m_1 * ... * m_j` with `w_0 = 1`.
    pub fn weight(&self, j: usize) -> BigUint {
        self.radix.weight(j)
    }

    /// Canonical digit expansion of `n`.
    pub fn encode(&self, n: &BigUint) -> MixedRadixDigits {
        let mut digits = Vec::new();
        let mut rest = n.clone();
        let mut pos = 0usize;
        while !rest.is_zero() {
            assert!(
                pos < MAX_ENCODED_DIGITS,
                "digit expansion of {n} exceeded {MAX_ENCODED_DIGITS} digits"
            );
            let m = BigUint::from(self.radix.radix_for_position(pos));
            let (q, r) = rest.div_rem(&m);
            digits.push(r.to_u64().expect("remainder below a u64 radix"));
            rest = q;
            pos += 1;
        }
        MixedRadixDigits(digits)
    }

    /// Value of a digit vector; rejects digits outside their position range.
    /// Trailing zeros are tolerated (the value is unaffected).
    pub fn decode(&self, digits: &MixedRadixDigits) -> Result<BigUint, RadixError> {
        let mut value = BigUint::zero();
        let mut w = BigUint::one();
        for (pos, &d) in digits.as_slice().iter().enumerate() {
            let m = self.radix.radix_for_position(pos);
            if d >= m {
                return Err(RadixError::DigitOutOfRange {
                    position: pos,
                    digit: d,
                    radix: m,
                });
            }
            if d != 0 {
                value += &w * d;
            }
            w *= m;
        }
        Ok(value)
    }

    /// Membership test: `n` is in `label`'s set iff all digits at positions
    /// the set does not own are zero.
    pub fn member(&self, label: SetLabel, n: &BigUint) -> bool {
        self.encode(n)
            .as_slice()
            .iter()
            .enumerate()
            .all(|(pos, &d)| d == 0 || self.owns(label, pos))
    }

    /// The `idx`-th smallest element of `label`'s set (0-based). Writes
    /// `idx` in the mixed radix formed by the set's own position radices and
    /// places those digits at the owned positions.
    pub fn nth_element(&self, label: SetLabel, idx: &BigUint) -> BigUint {
        let offset = if self.owns(label, 0) { 0 } else { 1 };
        let mut value = BigUint::zero();
        let mut rest = idx.clone();
        let mut pos = offset;
        let mut w = self.radix.weight(offset);
        while !rest.is_zero() {
            let m = self.radix.radix_for_position(pos);
            let (q, r) = rest.div_rem(&BigUint::from(m));
            if !r.is_zero() {
                value += &w * r;
            }
            rest = q;
            w *= self.radix.radix_for_position(pos) * self.radix.radix_for_position(pos + 1);
            pos += 2;
        }
        value
    }

    /// All elements of `label`'s set that are at most `x`, as a finite set
    /// with completeness bound `x`.
    pub fn elements_up_to(&self, label: SetLabel, x: &BigUint) -> FiniteSet {
        let mut elements = Vec::new();
        let mut idx = BigUint::zero();
        loop {
            let e = self.nth_element(label, &idx);
            if &e > x {
                break;
            }
            elements.push(e);
            idx += 1u32;
        }
        FiniteSet::new(elements, x.clone()).expect("enumeration stays within the bound")
    }

    /// The unique split `n = a + b` with `a` in `A` and `b` in `B`:
    /// `a` collects the digits at A-owned positions, `b` the rest.
    pub fn split(&self, n: &BigUint) -> (BigUint, BigUint) {
        let digits = self.encode(n);
        let mut a = BigUint::zero();
        let mut b = BigUint::zero();
        let mut w = BigUint::one();
        for (pos, &d) in digits.as_slice().iter().enumerate() {
            if d != 0 {
                if self.owns(SetLabel::A, pos) {
                    a += &w * d;
                } else {
                    b += &w * d;
                }
            }
            w *= self.radix.radix_for_position(pos);
        }
        (a, b)
    }

    /// Counting function `|{s in set : s <= x}|`, by most-significant-first
    /// digit dynamic programming: walk the digits of `x` downward, adding
    /// the number of members that first fall below `x` at each position;
    /// the tight path survives only while non-owned digits are zero.
    pub fn count(&self, label: SetLabel, x: &BigUint) -> BigUint {
        let digits = self.encode(x);
        let ds = digits.as_slice();
        // free[p] = number of digit choices at owned positions below p
        let mut free = Vec::with_capacity(ds.len() + 1);
        free.push(BigUint::one());
        for pos in 0..ds.len() {
            let next = if self.owns(label, pos) {
                &free[pos] * self.radix.radix_for_position(pos)
            } else {
                free[pos].clone()
            };
            free.push(next);
        }
        let mut total = BigUint::zero();
        for pos in (0..ds.len()).rev() {
            if self.owns(label, pos) {
                if ds[pos] != 0 {
                    total += &free[pos] * ds[pos];
                }
            } else if ds[pos] != 0 {
                // No member matches x at this position; everything below is free.
                total += &free[pos];
                return total;
            }
        }
        // All non-owned digits of x are zero, so x itself is a member.
        total + 1u32
    }
}

impl fmt::Display for PairDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} side {}", self.radix, self.side)
    }
}
