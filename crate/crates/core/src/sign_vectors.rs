//! Sign vectors over a ground set of at most 64 elements.
//!
//! A [`SignVector`] packs its entries into two bitmasks (one for `+`, one for
//! `-`); an entry is `0` when neither bit is set. Subsets of the ground set are
//! [`LabelSet`]s, plain bitmasks indexed by ground-set position.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_ELEMENTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

impl Sign {
    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Zero => '0',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            '0' => Some(Sign::Zero),
            _ => None,
        }
    }

    /// Position in the canonical text order `+ < - < 0`.
    fn rank(self) -> u8 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
            Sign::Zero => 2,
        }
    }

    pub fn product(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Plus,
            _ => Sign::Minus,
        }
    }
}

/// A subset of ground-set positions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet(pub u64);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn full(n: usize) -> LabelSet {
        LabelSet(mask(n))
    }

    pub fn singleton(i: usize) -> LabelSet {
        LabelSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> LabelSet {
        LabelSet(it.into_iter().fold(0u64, |m, i| m | (1u64 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 | other.0)
    }

    pub fn intersection(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 & other.0)
    }

    pub fn difference(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: LabelSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: LabelSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Renders as `{a,b,c}` using the given labels.
    pub fn render(self, labels: &[String]) -> String {
        let names: Vec<&str> = self.iter().map(|i| labels[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Parses `a,b,c` or `{a,b,c}` against the given labels.
    pub fn parse(text: &str, labels: &[String]) -> Result<LabelSet> {
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut set = LabelSet::EMPTY;
        for name in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let i = labels
                .iter()
                .position(|l| l == name)
                .ok_or_else(|| Error::UnknownLabel(name.to_string()))?;
            set.insert(i);
        }
        Ok(set)
    }
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A vector over `{+, -, 0}` indexed by ground-set positions `0..len`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignVector {
    plus: u64,
    minus: u64,
    len: u8,
}

impl SignVector {
    pub fn zero(len: usize) -> SignVector {
        assert!(
            len <= MAX_ELEMENTS,
            "ground set exceeds {MAX_ELEMENTS} elements"
        );
        SignVector {
            plus: 0,
            minus: 0,
            len: len as u8,
        }
    }

    /// Builds from raw masks; bits outside `0..len` and overlapping bits are rejected.
    pub fn from_masks(len: usize, plus: u64, minus: u64) -> Result<SignVector> {
        if len > MAX_ELEMENTS {
            return Err(Error::TooManyElements(len, MAX_ELEMENTS));
        }
        if plus & minus != 0 || (plus | minus) & !mask(len) != 0 {
            return Err(Error::Internal("malformed sign masks".into()));
        }
        Ok(SignVector {
            plus,
            minus,
            len: len as u8,
        })
    }

    pub fn from_signs(signs: &[Sign]) -> SignVector {
        let mut v = SignVector::zero(signs.len());
        for (i, s) in signs.iter().enumerate() {
            v.set(i, *s);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn plus_mask(&self) -> u64 {
        self.plus
    }

    pub fn minus_mask(&self) -> u64 {
        self.minus
    }

    pub fn get(&self, i: usize) -> Sign {
        if self.plus >> i & 1 == 1 {
            Sign::Plus
        } else if self.minus >> i & 1 == 1 {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }

    pub fn set(&mut self, i: usize, s: Sign) {
        debug_assert!(i < self.len());
        let bit = 1u64 << i;
        self.plus &= !bit;
        self.minus &= !bit;
        match s {
            Sign::Plus => self.plus |= bit,
            Sign::Minus => self.minus |= bit,
            Sign::Zero => {}
        }
    }

    pub fn with(mut self, i: usize, s: Sign) -> SignVector {
        self.set(i, s);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.plus | self.minus == 0
    }

    pub fn support(&self) -> LabelSet {
        LabelSet(self.plus | self.minus)
    }

    /// `z(σ)`: positions with entry 0.
    pub fn zero_set(&self) -> LabelSet {
        LabelSet(!(self.plus | self.minus) & mask(self.len()))
    }

    pub fn opposite(&self) -> SignVector {
        SignVector {
            plus: self.minus,
            minus: self.plus,
            len: self.len,
        }
    }

    /// `σ ∘ τ`: σ where nonzero, τ elsewhere.
    pub fn compose(&self, other: &SignVector) -> SignVector {
        debug_assert_eq!(self.len, other.len);
        let free = !(self.plus | self.minus);
        SignVector {
            plus: self.plus | (other.plus & free),
            minus: self.minus | (other.minus & free),
            len: self.len,
        }
    }

    pub fn checked_compose(&self, other: &SignVector) -> Result<SignVector> {
        self.same_ground(other)?;
        Ok(self.compose(other))
    }

    /// `S(σ, τ)`: positions where the two vectors carry opposite nonzero signs.
    pub fn separator(&self, other: &SignVector) -> LabelSet {
        debug_assert_eq!(self.len, other.len);
        LabelSet((self.plus & other.minus) | (self.minus & other.plus))
    }

    pub fn checked_separator(&self, other: &SignVector) -> Result<LabelSet> {
        self.same_ground(other)?;
        Ok(self.separator(other))
    }

    /// Componentwise order with `0 < +` and `0 < -`.
    pub fn leq(&self, other: &SignVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.plus & !other.plus == 0 && self.minus & !other.minus == 0
    }

    pub fn checked_leq(&self, other: &SignVector) -> Result<bool> {
        self.same_ground(other)?;
        Ok(self.leq(other))
    }

    /// `σ|_A` with entries listed in increasing position order.
    pub fn restrict(&self, positions: &[usize]) -> SignVector {
        let mut out = SignVector::zero(positions.len());
        for (j, &i) in positions.iter().enumerate() {
            out.set(j, self.get(i));
        }
        out
    }

    pub fn checked_restrict(&self, set: LabelSet) -> Result<SignVector> {
        if !set.is_subset(LabelSet::full(self.len())) {
            return Err(Error::UnknownElement(format!("{:?}", set)));
        }
        let positions: Vec<usize> = set.iter().collect();
        Ok(self.restrict(&positions))
    }

    /// Appends one entry at position `len`.
    pub fn extend_by(&self, s: Sign) -> SignVector {
        assert!(self.len() < MAX_ELEMENTS);
        let mut out = SignVector {
            plus: self.plus,
            minus: self.minus,
            len: self.len + 1,
        };
        out.set(self.len(), s);
        out
    }

    pub fn agrees_on(&self, other: &SignVector, set: LabelSet) -> bool {
        (self.plus ^ other.plus) & set.0 == 0 && (self.minus ^ other.minus) & set.0 == 0
    }

    pub fn parse(text: &str) -> Result<SignVector> {
        let text = text.trim();
        let n = text.chars().count();
        if n > MAX_ELEMENTS {
            return Err(Error::TooManyElements(n, MAX_ELEMENTS));
        }
        let mut v = SignVector::zero(n);
        for (i, c) in text.chars().enumerate() {
            let s = Sign::from_char(c).ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("invalid sign character `{c}` in `{text}`"),
            })?;
            v.set(i, s);
        }
        Ok(v)
    }

    fn same_ground(&self, other: &SignVector) -> Result<()> {
        if self.len != other.len {
            Err(Error::GroundMismatch {
                left: self.len(),
                right: other.len(),
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.get(i).to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector({self})")
    }
}

/// Lexicographic order of the canonical text form (`+ < - < 0`).
impl Ord for SignVector {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = (self.plus ^ other.plus) | (self.minus ^ other.minus);
        if diff == 0 {
            return self.len.cmp(&other.len);
        }
        let i = diff.trailing_zeros() as usize;
        self.get(i).rank().cmp(&other.get(i).rank())
    }
}

impl PartialOrd for SignVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(s: &str) -> SignVector {
        SignVector::parse(s).unwrap()
    }

    #[test]
    fn composition_examples() {
        assert_eq!(sv("+0-").compose(&sv("0++")), sv("++-"));
        let s = sv("+0-+");
        let z = SignVector::zero(4);
        assert_eq!(s.compose(&z), s);
        assert_eq!(z.compose(&s), s);
        assert_eq!(s.compose(&s), s);
    }

    #[test]
    fn separator_examples() {
        assert_eq!(sv("++0").separator(&sv("-+0")), LabelSet::singleton(0));
        let s = sv("+0-+");
        assert!(s.separator(&s).is_empty());
        assert_eq!(
            s.separator(&s.opposite()),
            LabelSet::full(4).difference(s.zero_set())
        );
    }

    #[test]
    fn zero_set_order_restrict() {
        assert_eq!(sv("+0-").zero_set(), LabelSet::singleton(1));
        assert!(sv("00+").leq(&sv("+-+")));
        assert!(!sv("+00").leq(&sv("-+0")));
        assert_eq!(sv("+0-").restrict(&[0, 2]), sv("+-"));
        assert_eq!(
            sv("+0-")
                .checked_restrict(LabelSet::from_indices([0, 2]))
                .unwrap(),
            sv("+-")
        );
    }

    #[test]
    fn mismatched_grounds_are_errors() {
        let err = sv("+0").checked_compose(&sv("+0-")).unwrap_err();
        assert_eq!(err, Error::GroundMismatch { left: 2, right: 3 });
        assert!(sv("+0").checked_separator(&sv("+")).is_err());
        assert!(sv("+0").checked_restrict(LabelSet::singleton(5)).is_err());
    }

    #[test]
    fn canonical_order_matches_text() {
        let mut v = [sv("0+-"), sv("-00"), sv("+0+"), sv("+-0"), sv("000")];
        v.sort();
        let mut texts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        let mut sorted = texts.clone();
        sorted.sort_by(|a, b| {
            let key = |s: &String| {
                s.chars()
                    .map(|c| Sign::from_char(c).unwrap().rank())
                    .collect::<Vec<_>>()
            };
            key(a).cmp(&key(b))
        });
        assert_eq!(texts, sorted);
        texts.dedup();
        assert_eq!(texts.len(), 5);
    }

    #[test]
    fn label_set_render_parse() {
        let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let s = LabelSet::from_indices([0, 2]);
        assert_eq!(s.render(&labels), "{a,c}");
        assert_eq!(LabelSet::parse("{a,c}", &labels).unwrap(), s);
        assert_eq!(LabelSet::parse("a, c", &labels).unwrap(), s);
        assert!(LabelSet::parse("d", &labels).is_err());
        assert_eq!(LabelSet::parse("{}", &labels).unwrap(), LabelSet::EMPTY);
    }
}
