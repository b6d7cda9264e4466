//! Words read as `levels` layers of `width` bits and their exact arithmetic
//! in ℤ_{2^levels}^width.
//!
//! The packing map ψ sends a layered word to the point whose j-th coordinate
//! is Σ_i 2^i · layer_i[j]; layer 0 (the first `width` bits of the word) is
//! least significant. Addition and negation are implemented on the binary
//! side by carry propagation — XOR plus a level-shifted Schur product —
//! and every result is cross-checked in debug builds against plain modular
//! integer arithmetic through ψ.

use crate::gf2::BinaryWord;
use std::fmt;
use thiserror::Error;

/// Largest supported level count: coordinates are u64 values below 2^levels.
pub const MAX_LEVELS: usize = 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayeredError {
    #[error("word length {len} does not equal width {width} × levels {levels}")]
    LengthMismatch {
        len: usize,
        width: usize,
        levels: usize,
    },
    #[error("width must be at least 1")]
    ZeroWidth,
    #[error("levels must lie in 1..={MAX_LEVELS}, got {levels}")]
    LevelsOutOfRange { levels: usize },
    #[error("geometries differ: {left_width}×{left_levels} vs {right_width}×{right_levels}")]
    GeometryMismatch {
        left_width: usize,
        left_levels: usize,
        right_width: usize,
        right_levels: usize,
    },
    #[error("level shift by {shift} outside 1..={max} for {levels} levels")]
    ShiftOutOfRange {
        shift: usize,
        max: usize,
        levels: usize,
    },
    #[error("coordinate #{index} is {value}, outside the modulus {modulus}")]
    CoordinateOutOfRange {
        index: usize,
        value: u64,
        modulus: u64,
    },
    #[error("expected {expected} layers of width {width}")]
    BadLayerShape { expected: usize, width: usize },
}

fn check_geometry_raw(
    lw: usize,
    ll: usize,
    rw: usize,
    rl: usize,
) -> Result<(), LayeredError> {
    if lw != rw || ll != rl {
        return Err(LayeredError::GeometryMismatch {
            left_width: lw,
            left_levels: ll,
            right_width: rw,
            right_levels: rl,
        });
    }
    Ok(())
}

/// A point of ℤ_{2^levels}^width with every coordinate reduced.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    coords: Vec<u64>,
    levels: usize,
}

impl Point {
    pub fn new(coords: Vec<u64>, levels: usize) -> Result<Self, LayeredError> {
        if coords.is_empty() {
            return Err(LayeredError::ZeroWidth);
        }
        if levels == 0 || levels > MAX_LEVELS {
            return Err(LayeredError::LevelsOutOfRange { levels });
        }
        let modulus = 1u64 << levels;
        for (index, &value) in coords.iter().enumerate() {
            if value >= modulus {
                return Err(LayeredError::CoordinateOutOfRange {
                    index,
                    value,
                    modulus,
                });
            }
        }
        Ok(Self { coords, levels })
    }

    pub fn zero(width: usize, levels: usize) -> Self {
        Self::new(vec![0; width.max(1)], levels).expect("zero point is always valid")
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn width(&self) -> usize {
        self.coords.len()
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn modulus(&self) -> u64 {
        1u64 << self.levels
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check_geometry(&self, other: &Self) -> Result<(), LayeredError> {
        check_geometry_raw(self.width(), self.levels, other.width(), other.levels)
    }

    /// Coordinate-wise sum mod 2^levels.
    pub fn add(&self, other: &Self) -> Result<Self, LayeredError> {
        self.check_geometry(other)?;
        let m = self.modulus();
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a + b) % m)
            .collect();
        Ok(Self {
            coords,
            levels: self.levels,
        })
    }

    /// Coordinate-wise difference mod 2^levels.
    pub fn sub(&self, other: &Self) -> Result<Self, LayeredError> {
        self.check_geometry(other)?;
        let m = self.modulus();
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a + m - b) % m)
            .collect();
        Ok(Self {
            coords,
            levels: self.levels,
        })
    }

    /// Coordinate-wise negation mod 2^levels.
    pub fn neg(&self) -> Self {
        let m = self.modulus();
        Self {
            coords: self.coords.iter().map(|a| (m - a) % m).collect(),
            levels: self.levels,
        }
    }
}

/// Single-coordinate points print bare ("4"); wider points as a tuple ("(4,0)").
impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            write!(f, "{}", self.coords[0])
        } else {
            write!(f, "(")?;
            for (i, c) in self.coords.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point({self} mod 2^{})", self.levels)
    }
}

/// A binary word of length `width × levels` viewed as `levels` layers of
/// `width` bits. Layer `i` occupies bit positions `i·width .. (i+1)·width`
/// and carries weight 2^i under ψ.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LayeredWord {
    word: BinaryWord,
    width: usize,
    levels: usize,
}

impl LayeredWord {
    pub fn new(word: BinaryWord, width: usize, levels: usize) -> Result<Self, LayeredError> {
        if width == 0 {
            return Err(LayeredError::ZeroWidth);
        }
        if levels == 0 || levels > MAX_LEVELS {
            return Err(LayeredError::LevelsOutOfRange { levels });
        }
        if word.len() != width * levels {
            return Err(LayeredError::LengthMismatch {
                len: word.len(),
                width,
                levels,
            });
        }
        Ok(Self {
            word,
            width,
            levels,
        })
    }

    pub fn zero(width: usize, levels: usize) -> Result<Self, LayeredError> {
        Self::new(BinaryWord::zero(width * levels), width, levels)
    }

    pub fn from_layers(layers: &[BinaryWord], width: usize) -> Result<Self, LayeredError> {
        let levels = layers.len();
        if levels == 0 || levels > MAX_LEVELS {
            return Err(LayeredError::LevelsOutOfRange { levels });
        }
        let mut word = BinaryWord::zero(width * levels);
        for (i, layer) in layers.iter().enumerate() {
            if layer.len() != width {
                return Err(LayeredError::BadLayerShape {
                    expected: levels,
                    width,
                });
            }
            for j in 0..width {
                if layer.bit(j) {
                    word.set_bit(i * width + j, true);
                }
            }
        }
        Self::new(word, width, levels)
    }

    pub fn word(&self) -> &BinaryWord {
        &self.word
    }

    pub fn into_word(self) -> BinaryWord {
        self.word
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn is_zero(&self) -> bool {
        self.word.is_zero()
    }

    /// Layer `i` (0-based; layer 0 is least significant) as a width-bit word.
    pub fn layer(&self, i: usize) -> BinaryWord {
        assert!(i < self.levels, "layer {i} out of range {}", self.levels);
        let mut out = BinaryWord::zero(self.width);
        for j in 0..self.width {
            if self.word.bit(i * self.width + j) {
                out.set_bit(j, true);
            }
        }
        out
    }

    fn check_geometry(&self, other: &Self) -> Result<(), LayeredError> {
        check_geometry_raw(self.width, self.levels, other.width, other.levels)
    }

    /// Componentwise 𝔽₂ sum of the underlying words.
    pub fn xor(&self, other: &Self) -> Result<Self, LayeredError> {
        self.check_geometry(other)?;
        Ok(Self {
            word: self.word.xor(&other.word).expect("geometry checked"),
            width: self.width,
            levels: self.levels,
        })
    }

    /// Componentwise (Schur) product of the underlying words.
    pub fn schur(&self, other: &Self) -> Result<Self, LayeredError> {
        self.check_geometry(other)?;
        Ok(Self {
            word: self.word.schur(&other.word).expect("geometry checked"),
            width: self.width,
            levels: self.levels,
        })
    }

    /// Pack the layers into a point: coordinate j is Σ_i 2^i · layer_i[j].
    pub fn psi(&self) -> Point {
        let mut coords = vec![0u64; self.width];
        for i in 0..self.levels {
            for (j, coord) in coords.iter_mut().enumerate() {
                if self.word.bit(i * self.width + j) {
                    *coord |= 1u64 << i;
                }
            }
        }
        Point {
            coords,
            levels: self.levels,
        }
    }

    /// Inverse of [`LayeredWord::psi`]: binary-expand each coordinate.
    pub fn from_point(point: &Point) -> Self {
        let width = point.width();
        let levels = point.levels();
        let mut word = BinaryWord::zero(width * levels);
        for (j, &value) in point.coords().iter().enumerate() {
            for i in 0..levels {
                if value >> i & 1 == 1 {
                    word.set_bit(i * width + j, true);
                }
            }
        }
        Self {
            word,
            width,
            levels,
        }
    }

    /// Move every layer up by `shift` positions, filling the bottom with zero
    /// layers and truncating the top; ψ of the result is 2^shift·ψ(self)
    /// mod 2^levels. `shift` must lie in 1..=levels−1.
    pub fn level_shift(&self, shift: usize) -> Result<Self, LayeredError> {
        if shift == 0 || shift >= self.levels {
            return Err(LayeredError::ShiftOutOfRange {
                shift,
                max: self.levels.saturating_sub(1),
                levels: self.levels,
            });
        }
        Ok(self.shift_up(shift))
    }

    /// Unchecked layer shift; shifting by `levels` or more yields zero.
    fn shift_up(&self, shift: usize) -> Self {
        let mut word = BinaryWord::zero(self.width * self.levels);
        if shift < self.levels {
            let movable = (self.levels - shift) * self.width;
            for idx in 0..movable {
                if self.word.bit(idx) {
                    word.set_bit(idx + shift * self.width, true);
                }
            }
        }
        Self {
            word,
            width: self.width,
            levels: self.levels,
        }
    }

    /// The Schur product shifted one level up: the carry word of `self + other`.
    /// With a single level the shift truncates everything, giving zero.
    pub fn schur_shift(&self, other: &Self) -> Result<Self, LayeredError> {
        Ok(self.schur(other)?.shift_up(1))
    }

    /// Word whose layer 0 is all ones: ψ maps it to (1,…,1).
    fn one(width: usize, levels: usize) -> Self {
        let mut word = BinaryWord::zero(width * levels);
        for j in 0..width {
            word.set_bit(j, true);
        }
        Self {
            word,
            width,
            levels,
        }
    }

    /// Resolve a (sum, carry) pair by repeated XOR / shifted-Schur steps. The
    /// carry's lowest occupied layer rises every round, so at most `levels`
    /// rounds can occur; more means the algebra is broken.
    fn propagate_carry(mut sum: Self, mut carry: Self) -> Self {
        let mut rounds = 0usize;
        while !carry.is_zero() {
            rounds += 1;
            assert!(
                rounds <= sum.levels,
                "carry propagation exceeded the level count"
            );
            let overlap = sum.schur(&carry).expect("same geometry");
            sum = sum.xor(&carry).expect("same geometry");
            carry = overlap.shift_up(1);
        }
        sum
    }

    /// Sum in ℤ_{2^levels}^width computed on the binary side: XOR plus
    /// carry propagation through the shifted Schur product.
    pub fn add_mod(&self, other: &Self) -> Result<Self, LayeredError> {
        self.check_geometry(other)?;
        let sum = self.xor(other)?;
        let carry = self.schur(other)?.shift_up(1);
        let out = Self::propagate_carry(sum, carry);
        debug_assert_eq!(
            out.psi(),
            self.psi().add(&other.psi()).expect("same geometry"),
            "carry recursion disagrees with modular addition"
        );
        Ok(out)
    }

    /// Reference implementation of [`LayeredWord::add_mod`] through ψ:
    /// integer sum mod 2^levels, then binary expansion.
    pub fn add_mod_integers(&self, other: &Self) -> Result<Self, LayeredError> {
        self.check_geometry(other)?;
        Ok(Self::from_point(
            &self.psi().add(&other.psi()).expect("same geometry"),
        ))
    }

    /// Two's-complement negation: complement every bit, then add (1,…,1) by
    /// carry propagation, so ψ(result) = −ψ(self) mod 2^levels.
    pub fn negate(&self) -> Self {
        let ones = BinaryWord::ones(self.width * self.levels);
        let complement = Self {
            word: self.word.xor(&ones).expect("same length"),
            width: self.width,
            levels: self.levels,
        };
        let one = Self::one(self.width, self.levels);
        let sum = complement.xor(&one).expect("same geometry");
        let carry = complement.schur(&one).expect("same geometry").shift_up(1);
        let out = Self::propagate_carry(sum, carry);
        debug_assert_eq!(
            out.psi(),
            self.psi().neg(),
            "complement recursion disagrees with modular negation"
        );
        out
    }

    /// Reference implementation of [`LayeredWord::negate`] through ψ.
    pub fn negate_integers(&self) -> Self {
        Self::from_point(&self.psi().neg())
    }
}

impl fmt::Display for LayeredWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word)
    }
}

impl fmt::Debug for LayeredWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LayeredWord({} as {}x{})",
            self.word, self.width, self.levels
        )
    }
}
