//! Explicit finite sets of nonnegative integers with a completeness bound.
//!
//! A `FiniteSet` promises to contain *every* element of some underlying
//! (possibly infinite) set that does not exceed its bound. All window-based
//! reasoning in the crate relies on that contract.

use std::fmt;

use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetError {
    /// An element above the declared completeness bound.
    ElementAboveBound { element: BigUint, bound: BigUint },
    /// File input without a `# bound <N>` header.
    MissingBoundHeader,
    /// More than one `# bound` header.
    DuplicateBoundHeader { line: usize },
    /// A line that is neither a comment nor a base-10 integer.
    BadInteger { line: usize, text: String },
}

impl fmt::Display for SetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetError::ElementAboveBound { element, bound } => {
                write!(f, "element {element} exceeds the completeness bound {bound}")
            }
            SetError::MissingBoundHeader => {
                write!(f, "set file is missing the required \"# bound <N>\" header")
            }
            SetError::DuplicateBoundHeader { line } => {
                write!(f, "duplicate \"# bound\" header on line {line}")
            }
            SetError::BadInteger { line, text } => {
                write!(f, "line {line}: {text:?} is not a nonnegative integer")
            }
        }
    }
}

impl std::error::Error for SetError {}

/// Sorted distinct nonnegative integers, complete up to `bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSet {
    elements: Vec<BigUint>,
    bound: BigUint,
}

impl FiniteSet {
    /// Sorts and deduplicates; rejects elements beyond the bound.
    pub fn new(mut elements: Vec<BigUint>, bound: BigUint) -> Result<Self, SetError> {
        elements.sort_unstable();
        elements.dedup();
        if let Some(last) = elements.last() {
            if last > &bound {
                return Err(SetError::ElementAboveBound {
                    element: last.clone(),
                    bound,
                });
            }
        }
        Ok(FiniteSet { elements, bound })
    }

    pub fn elements(&self) -> &[BigUint] {
        &self.elements
    }

    pub fn bound(&self) -> &BigUint {
        &self.bound
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, value: &BigUint) -> bool {
        self.elements.binary_search(value).is_ok()
    }

    pub fn contains_u64(&self, value: u64) -> bool {
        self.contains(&BigUint::from(value))
    }

    /// Number of elements not exceeding `x`.
    pub fn count_up_to(&self, x: &BigUint) -> usize {
        self.elements.partition_point(|e| e <= x)
    }

    /// The `idx`-th smallest element (0-based).
    pub fn nth(&self, idx: usize) -> Option<&BigUint> {
        self.elements.get(idx)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigUint> {
        self.elements.iter()
    }

    /// The same set truncated to a smaller completeness bound.
    pub fn restrict(&self, new_bound: &BigUint) -> FiniteSet {
        let keep = self.count_up_to(new_bound);
        FiniteSet {
            elements: self.elements[..keep].to_vec(),
            bound: new_bound.clone(),
        }
    }

    /// Parses the interchange format: base-10 integers one per line, `#`
    /// comments ignored, one mandatory `# bound <N>` header. Unsorted or
    /// duplicated input is repaired and reported in the returned warnings.
    pub fn parse(text: &str) -> Result<(Self, Vec<String>), SetError> {
        let mut bound: Option<BigUint> = None;
        let mut elements = Vec::new();
        let mut warnings = Vec::new();
        let mut unsorted = false;
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                if let Some(rest) = comment.strip_prefix("bound") {
                    let rest = rest.trim();
                    let value = rest.parse::<BigUint>().map_err(|_| SetError::BadInteger {
                        line: line_no,
                        text: rest.to_string(),
                    })?;
                    if bound.is_some() {
                        return Err(SetError::DuplicateBoundHeader { line: line_no });
                    }
                    bound = Some(value);
                }
                continue;
            }
            // Strip a trailing comment from an element line.
            let payload = match line.split_once('#') {
                Some((head, _)) => head.trim(),
                None => line,
            };
            let value = payload.parse::<BigUint>().map_err(|_| SetError::BadInteger {
                line: line_no,
                text: payload.to_string(),
            })?;
            if let Some(prev) = elements.last() {
                if &value <= prev {
                    unsorted = true;
                }
            }
            elements.push(value);
        }
        let bound = bound.ok_or(SetError::MissingBoundHeader)?;
        let raw_len = elements.len();
        let set = FiniteSet::new(elements, bound)?;
        if unsorted {
            warnings.push("input was not strictly increasing; sorted on load".to_string());
        }
        if set.len() < raw_len {
            warnings.push(format!(
                "input contained {} duplicate value(s); deduplicated on load",
                raw_len - set.len()
            ));
        }
        Ok((set, warnings))
    }

    /// Serializes to the interchange format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# bound {}\n", self.bound));
        for e in &self.elements {
            out.push_str(&format!("{e}\n"));
        }
        out
    }
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a BigUint;
    type IntoIter = std::slice::Iter<'a, BigUint>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn new_sorts_and_dedups() {
        let s = FiniteSet::new(vec![u(5), u(0), u(5), u(2)], u(10)).unwrap();
        assert_eq!(s.elements(), &[u(0), u(2), u(5)]);
        assert_eq!(s.count_up_to(&u(2)), 2);
        assert!(s.contains(&u(2)));
        assert!(!s.contains(&u(3)));
    }

    #[test]
    fn new_rejects_element_above_bound() {
        let err = FiniteSet::new(vec![u(11)], u(10)).unwrap_err();
        assert!(matches!(err, SetError::ElementAboveBound { .. }));
    }

    #[test]
    fn parse_requires_bound_header() {
        assert_eq!(FiniteSet::parse("0\n1\n"), Err(SetError::MissingBoundHeader));
    }

    #[test]
    fn parse_round_trip_with_comments() {
        let text = "# generated by hand\n# bound 10\n0\n2 # two\n\n5\n";
        let (s, warnings) = FiniteSet::parse(text).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(s.elements(), &[u(0), u(2), u(5)]);
        assert_eq!(s.bound(), &u(10));
        let (again, _) = FiniteSet::parse(&s.to_file_string()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn parse_warns_on_unsorted_and_duplicates() {
        let (s, warnings) = FiniteSet::parse("# bound 9\n3\n1\n3\n").unwrap();
        assert_eq!(s.elements(), &[u(1), u(3)]);
        assert_eq!(warnings.len(), 2);
    }

    #[test]
    fn parse_rejects_duplicate_bound() {
        let err = FiniteSet::parse("# bound 3\n# bound 4\n").unwrap_err();
        assert!(matches!(err, SetError::DuplicateBoundHeader { line: 2 }));
    }

    #[test]
    fn restrict_truncates() {
        let s = FiniteSet::new(vec![u(0), u(4), u(9)], u(9)).unwrap();
        let r = s.restrict(&u(4));
        assert_eq!(r.elements(), &[u(0), u(4)]);
        assert_eq!(r.bound(), &u(4));
    }
}
