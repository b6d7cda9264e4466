//! Constellations carved out of ℤ_{2^levels}^width by binary codes.
//!
//! A length-`width·levels` code C is cut into per-level projection codes
//! C_1,…,C_levels (layer i of every codeword), whose block-diagonal product
//! code C̄ = C_1 × ⋯ × C_levels contains C. Packing codewords through ψ gives
//! two nested point sets: the code's own points ψ(C) and the product's points
//! ψ(C̄). The product constellation is a lattice — a subgroup of
//! ℤ_{2^levels}^width — exactly when the projection chain is nested and
//! closed under componentwise products, which [`is_schur_closed_chain`]
//! decides by exhaustive check.

use crate::gf2::{BinaryWord, Gf2Error, LinearCode};
use crate::layered::{LayeredError, LayeredWord, Point};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstellationError {
    #[error(transparent)]
    Code(#[from] Gf2Error),
    #[error(transparent)]
    Layered(#[from] LayeredError),
}

/// A finite set of points with a common geometry, ordered lexicographically.
#[derive(Clone, PartialEq, Eq)]
pub struct PointSet {
    width: usize,
    levels: usize,
    points: BTreeSet<Point>,
}

impl PointSet {
    pub fn empty(width: usize, levels: usize) -> Self {
        Self {
            width,
            levels,
            points: BTreeSet::new(),
        }
    }

    pub fn from_points(
        width: usize,
        levels: usize,
        points: impl IntoIterator<Item = Point>,
    ) -> Result<Self, LayeredError> {
        let mut set = Self::empty(width, levels);
        for point in points {
            set.insert(point)?;
        }
        Ok(set)
    }

    fn check_point(&self, point: &Point) -> Result<(), LayeredError> {
        if point.width() != self.width || point.levels() != self.levels {
            return Err(LayeredError::GeometryMismatch {
                left_width: self.width,
                left_levels: self.levels,
                right_width: point.width(),
                right_levels: point.levels(),
            });
        }
        Ok(())
    }

    pub fn check_geometry(&self, other: &Self) -> Result<(), LayeredError> {
        if other.width != self.width || other.levels != self.levels {
            return Err(LayeredError::GeometryMismatch {
                left_width: self.width,
                left_levels: self.levels,
                right_width: other.width,
                right_levels: other.levels,
            });
        }
        Ok(())
    }

    /// Insert a point; `Ok(true)` when it was not already present.
    pub fn insert(&mut self, point: Point) -> Result<bool, LayeredError> {
        self.check_point(&point)?;
        Ok(self.points.insert(point))
    }

    pub fn contains(&self, point: &Point) -> bool {
        self.points.contains(point)
    }

    /// Remove a point; `true` when it was present.
    pub fn remove(&mut self, point: &Point) -> bool {
        self.points.remove(point)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Points in ascending lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &Point> + '_ {
        self.points.iter()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Point::zero(self.width, self.levels))
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool, LayeredError> {
        self.check_geometry(other)?;
        Ok(self.points.is_subset(&other.points))
    }

    /// The set of pairwise differences {a − b : a, b ∈ self} mod 2^levels.
    /// Always symmetric and, when the set is nonempty, contains zero.
    pub fn difference_set(&self) -> Self {
        let mut out = Self::empty(self.width, self.levels);
        for a in &self.points {
            for b in &self.points {
                let d = a.sub(b).expect("points share the set's geometry");
                out.points.insert(d);
            }
        }
        out
    }

    /// Whether the set is a subgroup of ℤ_{2^levels}^width: it contains zero
    /// and is closed under addition (inverses follow in a finite group).
    pub fn is_group(&self) -> bool {
        if !self.contains_zero() {
            return false;
        }
        for a in &self.points {
            for b in &self.points {
                let s = a.add(b).expect("points share the set's geometry");
                if !self.points.contains(&s) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PointSet({} of {}x{})",
            self,
            self.width,
            self.levels
        )
    }
}

/// Split a code of length `width·levels` into its per-level projections:
/// entry i is the code spanned by layer i of every generator.
pub fn project(
    code: &LinearCode,
    width: usize,
    levels: usize,
) -> Result<Vec<LinearCode>, ConstellationError> {
    check_code_shape(code, width, levels)?;
    let mut projections = Vec::with_capacity(levels);
    for level in 0..levels {
        let rows = code
            .generators()
            .iter()
            .map(|g| {
                let layered =
                    LayeredWord::new(g.clone(), width, levels).expect("shape checked above");
                layered.layer(level)
            })
            .collect();
        projections.push(LinearCode::from_generators(width, rows)?);
    }
    Ok(projections)
}

fn check_code_shape(
    code: &LinearCode,
    width: usize,
    levels: usize,
) -> Result<(), ConstellationError> {
    if width == 0 {
        return Err(LayeredError::ZeroWidth.into());
    }
    if levels == 0 || levels > crate::layered::MAX_LEVELS {
        return Err(LayeredError::LevelsOutOfRange { levels }.into());
    }
    if code.len() != width * levels {
        return Err(LayeredError::LengthMismatch {
            len: code.len(),
            width,
            levels,
        }
        .into());
    }
    Ok(())
}

/// Block-diagonal product of per-level codes: each generator of chain entry i
/// becomes a generator supported on layer i alone, so the result is
/// C_1 × ⋯ × C_levels read through the layer packing.
pub fn product_code(chain: &[LinearCode], width: usize) -> Result<LinearCode, ConstellationError> {
    let levels = chain.len();
    if levels == 0 || levels > crate::layered::MAX_LEVELS {
        return Err(LayeredError::LevelsOutOfRange { levels }.into());
    }
    let mut rows = Vec::new();
    for (level, code) in chain.iter().enumerate() {
        if code.len() != width {
            return Err(LayeredError::LengthMismatch {
                len: code.len(),
                width,
                levels: 1,
            }
            .into());
        }
        for g in code.generators() {
            let mut row = BinaryWord::zero(width * levels);
            for j in 0..width {
                if g.bit(j) {
                    row.set_bit(level * width + j, true);
                }
            }
            rows.push(row);
        }
    }
    Ok(LinearCode::from_generators(width * levels, rows)?)
}

/// Whether consecutive chain entries are nested (C_i ⊆ C_{i+1}) and every
/// componentwise product of two codewords of C_i lands in C_{i+1}. Every
/// codeword pair is checked outright rather than just generator pairs.
pub fn is_schur_closed_chain(chain: &[LinearCode]) -> Result<bool, ConstellationError> {
    for pair in chain.windows(2) {
        let (lower, upper) = (&pair[0], &pair[1]);
        if !lower.is_subcode_of(upper)? {
            return Ok(false);
        }
        let words = lower.words()?;
        for u in &words {
            for v in &words {
                let product = u.schur(v)?;
                if !upper.contains(&product)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// ψ applied to every codeword.
pub fn psi_image(
    code: &LinearCode,
    width: usize,
    levels: usize,
) -> Result<PointSet, ConstellationError> {
    check_code_shape(code, width, levels)?;
    let mut set = PointSet::empty(width, levels);
    for word in code.enumerate()? {
        let layered = LayeredWord::new(word, width, levels).expect("shape checked above");
        set.insert(layered.psi())?;
    }
    Ok(set)
}

/// A code together with everything the construction derives from it: the
/// projection chain, the product code, both ψ-images, and whether the product
/// constellation is a lattice.
#[derive(Clone)]
pub struct ConstellationPair {
    code: LinearCode,
    width: usize,
    levels: usize,
    projections: Vec<LinearCode>,
    product: LinearCode,
    code_points: PointSet,
    product_points: PointSet,
    is_lattice: bool,
}

impl ConstellationPair {
    pub fn build(
        code: LinearCode,
        width: usize,
        levels: usize,
    ) -> Result<Self, ConstellationError> {
        check_code_shape(&code, width, levels)?;
        let projections = project(&code, width, levels)?;
        let product = product_code(&projections, width)?;
        debug_assert!(
            code.is_subcode_of(&product).expect("equal lengths"),
            "a code must embed in the product of its projections"
        );
        let code_points = psi_image(&code, width, levels)?;
        let product_points = psi_image(&product, width, levels)?;
        let is_lattice = is_schur_closed_chain(&projections)?;
        Ok(Self {
            code,
            width,
            levels,
            projections,
            product,
            code_points,
            product_points,
            is_lattice,
        })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn projections(&self) -> &[LinearCode] {
        &self.projections
    }

    pub fn product_code(&self) -> &LinearCode {
        &self.product
    }

    /// ψ(C): the points of the code itself, the prospective tile.
    pub fn code_points(&self) -> &PointSet {
        &self.code_points
    }

    /// ψ(C̄): the points of the product code, the constellation to be tiled.
    pub fn product_points(&self) -> &PointSet {
        &self.product_points
    }

    /// Whether the product constellation is a subgroup of ℤ_{2^levels}^width.
    pub fn is_lattice(&self) -> bool {
        self.is_lattice
    }

    pub fn code_dim(&self) -> usize {
        self.code.dim()
    }

    pub fn product_dim(&self) -> usize {
        self.product.dim()
    }

    /// |ψ(C̄)| / |ψ(C)| — how many translates a tiling must use.
    pub fn class_count(&self) -> u64 {
        let (m, mbar) = (self.code.dim(), self.product.dim());
        debug_assert!(m <= mbar);
        1u64 << (mbar - m)
    }
}

impl fmt::Debug for ConstellationPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConstellationPair")
            .field("width", &self.width)
            .field("levels", &self.levels)
            .field("code_dim", &self.code.dim())
            .field("product_dim", &self.product.dim())
            .field("is_lattice", &self.is_lattice)
            .finish()
    }
}
