//! Exact linear algebra over 𝔽₂: fixed-length bit words, linear codes given
//! by generator rows, and coset decompositions of one code inside another.
//!
//! Bit index 0 is the first (leftmost) character of the displayed bit-string.
//! Words of equal length are ordered lexicographically on that form, so `0001`
//! sorts before `0010`.

use smallvec::{smallvec, SmallVec};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Default cap on code dimension for full enumeration (2^24 codewords).
pub const ENUMERATION_BOUND: u32 = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("word lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty bit-string")]
    EmptyWord,
    #[error("invalid character {character:?} at position {position}; expected '0' or '1'")]
    InvalidBit { position: usize, character: char },
    #[error("enumeration of 2^{dim} codewords exceeds the 2^{bound} guard")]
    EnumerationTooLarge { dim: usize, bound: u32 },
    #[error("the claimed subcode is not contained in the ambient code")]
    NotASubcode,
    #[error("expected {expected} coset representatives, got {got}")]
    RepresentativeCount { expected: usize, got: usize },
    #[error("representative #{index} lies outside the ambient code")]
    RepresentativeOutsideAmbient { index: usize },
    #[error("representatives #{first} and #{second} lie in the same coset")]
    RepresentativeCosetCollision { first: usize, second: usize },
    #[error("no representative for the subcode's own coset (the zero word is required)")]
    MissingZeroRepresentative,
}

type Limbs = SmallVec<[u64; 1]>;

/// A fixed-length vector over 𝔽₂. Unused high bits of the last limb are kept
/// zero so equality and hashing can work limb-wise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryWord {
    len: usize,
    limbs: Limbs,
}

fn limb_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BinaryWord {
    pub fn zero(len: usize) -> Self {
        Self {
            len,
            limbs: smallvec![0u64; limb_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = Self {
            len,
            limbs: smallvec![!0u64; limb_count(len)],
        };
        w.mask_spare();
        w
    }

    fn mask_spare(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.limbs.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        self.limbs[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn set_bit(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let mask = 1u64 << (index % 64);
        if value {
            self.limbs[index / 64] |= mask;
        } else {
            self.limbs[index / 64] &= !mask;
        }
    }

    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|l| *l == 0)
    }

    fn check_len(&self, other: &Self) -> Result<(), Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(())
    }

    /// Componentwise sum over 𝔽₂.
    pub fn xor(&self, other: &Self) -> Result<Self, Gf2Error> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.xor_in_place(other);
        Ok(out)
    }

    /// Componentwise (Schur) product.
    pub fn schur(&self, other: &Self) -> Result<Self, Gf2Error> {
        self.check_len(other)?;
        let mut out = self.clone();
        for (a, b) in out.limbs.iter_mut().zip(&other.limbs) {
            *a &= *b;
        }
        Ok(out)
    }

    pub(crate) fn xor_in_place(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= *b;
        }
    }

    /// Index of the first set bit, if any.
    fn leading_index(&self) -> Option<usize> {
        for (i, limb) in self.limbs.iter().enumerate() {
            if *limb != 0 {
                return Some(i * 64 + limb.trailing_zeros() as usize);
            }
        }
        None
    }
}

impl Ord for BinaryWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.limbs.iter().zip(&other.limbs) {
                let diff = a ^ b;
                if diff != 0 {
                    let first = diff.trailing_zeros();
                    return if a >> first & 1 == 0 {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for BinaryWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryWord({self})")
    }
}

impl FromStr for BinaryWord {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Gf2Error> {
        if s.is_empty() {
            return Err(Gf2Error::EmptyWord);
        }
        let mut w = BinaryWord::zero(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => w.set_bit(i, true),
                _ => {
                    return Err(Gf2Error::InvalidBit {
                        position: i,
                        character: ch,
                    })
                }
            }
        }
        Ok(w)
    }
}

/// A binary linear code stored as a spanning set of independent generator
/// rows plus a reduced row-echelon basis of the same span.
///
/// Dependent or zero rows supplied at construction are folded away by Gaussian
/// elimination: the effective rank is what [`LinearCode::dim`] reports, and
/// [`LinearCode::supplied_rows`] remembers how many rows were handed in.
#[derive(Clone, Debug)]
pub struct LinearCode {
    len: usize,
    generators: Vec<BinaryWord>,
    rref: Vec<BinaryWord>,
    pivots: Vec<usize>,
    supplied: usize,
}

impl LinearCode {
    pub fn from_generators(len: usize, rows: Vec<BinaryWord>) -> Result<Self, Gf2Error> {
        let mut rref: Vec<BinaryWord> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for row in &rows {
            if row.len() != len {
                return Err(Gf2Error::LengthMismatch {
                    left: row.len(),
                    right: len,
                });
            }
            let mut r = row.clone();
            for (rrow, p) in rref.iter().zip(&pivots) {
                if r.bit(*p) {
                    r.xor_in_place(rrow);
                }
            }
            if let Some(p) = r.leading_index() {
                for rrow in rref.iter_mut() {
                    if rrow.bit(p) {
                        rrow.xor_in_place(&r);
                    }
                }
                let pos = pivots.partition_point(|q| *q < p);
                rref.insert(pos, r);
                pivots.insert(pos, p);
            }
        }
        let supplied = rows.len();
        let generators = if rref.len() == rows.len() {
            rows
        } else {
            rref.clone()
        };
        Ok(Self {
            len,
            generators,
            rref,
            pivots,
            supplied,
        })
    }

    /// The code containing only the zero word.
    pub fn zero_code(len: usize) -> Self {
        Self::from_generators(len, Vec::new()).expect("no rows to mismatch")
    }

    /// The full space 𝔽₂^len.
    pub fn full_space(len: usize) -> Self {
        let rows = (0..len)
            .map(|i| {
                let mut w = BinaryWord::zero(len);
                w.set_bit(i, true);
                w
            })
            .collect();
        Self::from_generators(len, rows).expect("identity rows are well-formed")
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Effective rank (number of independent generators).
    pub fn dim(&self) -> usize {
        self.rref.len()
    }

    /// Number of generator rows supplied at construction.
    pub fn supplied_rows(&self) -> usize {
        self.supplied
    }

    pub fn had_dependent_rows(&self) -> bool {
        self.supplied != self.dim()
    }

    /// The enumeration basis: the supplied rows when they were independent,
    /// otherwise the reduced basis.
    pub fn generators(&self) -> &[BinaryWord] {
        &self.generators
    }

    /// Number of codewords, 2^dim.
    pub fn size(&self) -> u64 {
        1u64 << self.dim()
    }

    /// Reduce `word` against the basis; the result is zero exactly for
    /// codewords and is otherwise a canonical label of `word`'s coset.
    pub fn canonical_residue(&self, word: &BinaryWord) -> Result<BinaryWord, Gf2Error> {
        if word.len() != self.len {
            return Err(Gf2Error::LengthMismatch {
                left: word.len(),
                right: self.len,
            });
        }
        let mut r = word.clone();
        for (rrow, p) in self.rref.iter().zip(&self.pivots) {
            if r.bit(*p) {
                r.xor_in_place(rrow);
            }
        }
        Ok(r)
    }

    /// Membership test by rank reduction (never by enumeration).
    pub fn contains(&self, word: &BinaryWord) -> Result<bool, Gf2Error> {
        Ok(self.canonical_residue(word)?.is_zero())
    }

    pub fn is_subcode_of(&self, other: &LinearCode) -> Result<bool, Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Span equality.
    pub fn same_span(&self, other: &LinearCode) -> Result<bool, Gf2Error> {
        Ok(self.dim() == other.dim() && self.is_subcode_of(other)?)
    }

    /// Iterate all codewords in lexicographic order of the message vector
    /// (coefficients of [`LinearCode::generators`], first generator most
    /// significant). Guarded by [`ENUMERATION_BOUND`].
    pub fn enumerate(&self) -> Result<Codewords<'_>, Gf2Error> {
        self.enumerate_bounded(ENUMERATION_BOUND)
    }

    /// Like [`LinearCode::enumerate`] with a caller-chosen dimension cap.
    pub fn enumerate_bounded(&self, max_dim: u32) -> Result<Codewords<'_>, Gf2Error> {
        if self.dim() as u32 > max_dim {
            return Err(Gf2Error::EnumerationTooLarge {
                dim: self.dim(),
                bound: max_dim,
            });
        }
        Ok(Codewords {
            generators: &self.generators,
            counter: 0,
            total: 1u64 << self.dim(),
            current: BinaryWord::zero(self.len),
        })
    }

    /// All codewords collected in enumeration order.
    pub fn words(&self) -> Result<Vec<BinaryWord>, Gf2Error> {
        Ok(self.enumerate()?.collect())
    }
}

/// Iterator over the codewords of a [`LinearCode`].
///
/// Between consecutive message counters only the trailing run of message bits
/// changes, so each step applies a handful of row XORs instead of rebuilding
/// the word.
pub struct Codewords<'a> {
    generators: &'a [BinaryWord],
    counter: u64,
    total: u64,
    current: BinaryWord,
}

impl Iterator for Codewords<'_> {
    type Item = BinaryWord;

    fn next(&mut self) -> Option<BinaryWord> {
        if self.counter == self.total {
            return None;
        }
        if self.counter > 0 {
            let flipped = self.counter ^ (self.counter - 1);
            let k = self.generators.len();
            for b in 0..64 {
                if flipped >> b & 1 == 1 {
                    self.current.xor_in_place(&self.generators[k - 1 - b as usize]);
                } else {
                    break;
                }
            }
        }
        self.counter += 1;
        Some(self.current.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.counter) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Codewords<'_> {}

/// How to pick the stored representative of each coset.
#[derive(Clone, Debug)]
pub enum LeaderPolicy {
    /// Minimal Hamming weight, ties broken lexicographically.
    MinWeight,
    /// Caller-supplied representatives, validated to hit every coset exactly
    /// once and to include the zero word.
    Explicit(Vec<BinaryWord>),
}

/// A partition of an ambient code into cosets of a subcode, with one stored
/// representative per coset. The zero word always represents the subcode's
/// own coset and sorts first (representatives are ordered by weight, then
/// lexicographically).
#[derive(Clone, Debug)]
pub struct CosetDecomposition {
    subcode: LinearCode,
    ambient: LinearCode,
    representatives: Vec<BinaryWord>,
}

impl CosetDecomposition {
    pub fn subcode(&self) -> &LinearCode {
        &self.subcode
    }

    pub fn ambient(&self) -> &LinearCode {
        &self.ambient
    }

    pub fn representatives(&self) -> &[BinaryWord] {
        &self.representatives
    }

    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }
}

/// Decompose `ambient` into cosets of `subcode`.
pub fn decompose_cosets(
    subcode: &LinearCode,
    ambient: &LinearCode,
    policy: LeaderPolicy,
) -> Result<CosetDecomposition, Gf2Error> {
    if subcode.len() != ambient.len() {
        return Err(Gf2Error::LengthMismatch {
            left: subcode.len(),
            right: ambient.len(),
        });
    }
    if !subcode.is_subcode_of(ambient)? {
        return Err(Gf2Error::NotASubcode);
    }
    if ambient.dim() as u32 > ENUMERATION_BOUND {
        return Err(Gf2Error::EnumerationTooLarge {
            dim: ambient.dim(),
            bound: ENUMERATION_BOUND,
        });
    }

    // Extend the subcode's basis to the ambient code; the extension rows
    // index the cosets.
    let mut basis_rows = subcode.rref.clone();
    let mut basis_pivots = subcode.pivots.clone();
    let mut extension: Vec<BinaryWord> = Vec::new();
    for row in &ambient.rref {
        let mut r = row.clone();
        for (brow, p) in basis_rows.iter().zip(&basis_pivots) {
            if r.bit(*p) {
                r.xor_in_place(brow);
            }
        }
        if let Some(p) = r.leading_index() {
            let pos = basis_pivots.partition_point(|q| *q < p);
            basis_rows.insert(pos, r.clone());
            basis_pivots.insert(pos, p);
            extension.push(r);
        }
    }
    debug_assert_eq!(extension.len(), ambient.dim() - subcode.dim());

    let class_count = 1usize << extension.len();
    let mut representatives = match policy {
        LeaderPolicy::MinWeight => {
            let mut leaders = Vec::with_capacity(class_count);
            for m in 0..class_count as u64 {
                let mut raw = BinaryWord::zero(ambient.len());
                for (i, ext) in extension.iter().enumerate() {
                    if m >> (extension.len() - 1 - i) & 1 == 1 {
                        raw.xor_in_place(ext);
                    }
                }
                let mut best: Option<BinaryWord> = None;
                for c in subcode.enumerate()? {
                    let candidate = raw.xor(&c)?;
                    let better = match &best {
                        None => true,
                        Some(b) => {
                            (candidate.weight(), &candidate) < (b.weight(), b)
                        }
                    };
                    if better {
                        best = Some(candidate);
                    }
                }
                leaders.push(best.expect("a code is never empty"));
            }
            leaders
        }
        LeaderPolicy::Explicit(list) => {
            if list.len() != class_count {
                return Err(Gf2Error::RepresentativeCount {
                    expected: class_count,
                    got: list.len(),
                });
            }
            if !list.iter().any(|w| w.is_zero()) {
                return Err(Gf2Error::MissingZeroRepresentative);
            }
            let mut seen: Vec<(BinaryWord, usize)> = Vec::with_capacity(list.len());
            for (index, rep) in list.iter().enumerate() {
                if rep.len() != ambient.len() || !ambient.contains(rep)? {
                    return Err(Gf2Error::RepresentativeOutsideAmbient { index });
                }
                let residue = subcode.canonical_residue(rep)?;
                if let Some((_, first)) = seen.iter().find(|(r, _)| *r == residue) {
                    return Err(Gf2Error::RepresentativeCosetCollision {
                        first: *first,
                        second: index,
                    });
                }
                seen.push((residue, index));
            }
            list
        }
    };
    representatives.sort_by(|a, b| (a.weight(), a).cmp(&(b.weight(), b)));
    debug_assert!(representatives[0].is_zero());

    Ok(CosetDecomposition {
        subcode: subcode.clone(),
        ambient: ambient.clone(),
        representatives,
    })
}
