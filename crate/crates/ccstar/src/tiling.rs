//! Deciding whether translates of a tile cover a constellation exactly once,
//! verifying the algebraic conditions that predict this, and searching for
//! shift sets that achieve it.
//!
//! Throughout, the *ambient* set is the constellation being covered (ψ of the
//! product code), the *tile* is the set being translated (ψ of the code), and
//! the *shift set* holds the translation vectors, always including zero.
//! [`check_tiling`] is the brute-force ground truth; [`difference_criterion`]
//! is the exact characterisation available when the ambient set is a group;
//! [`schur_shifts_vanish`] is the one-sided algebraic test on coset
//! representatives; [`select_class_representatives`] runs the pruned search
//! for valid shift sets on lattice constellations; [`enumerate_all_tilings`]
//! exhausts every zero-containing shift set outright.

use crate::constellation::{ConstellationError, ConstellationPair, PointSet};
use crate::gf2::{decompose_cosets, BinaryWord, Gf2Error, LeaderPolicy};
use crate::layered::{LayeredError, LayeredWord, Point};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Which operand of a tiling question a validation error refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetRole {
    Tile,
    Shifts,
}

impl fmt::Display for SetRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetRole::Tile => write!(f, "tile"),
            SetRole::Shifts => write!(f, "shift set"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilingError {
    #[error("the {role} must lie within the ambient set")]
    NotWithinAmbient { role: SetRole },
    #[error("the {role} must contain the zero point")]
    MissingZero { role: SetRole },
    #[error("the ambient set is not a group, so the difference criterion does not apply")]
    NotAGroup,
    #[error("the constellation is not a lattice, so representative selection does not apply")]
    NotALattice,
    #[error("the search would need {classes} translates, above the bound {bound}")]
    SearchTooLarge { classes: u64, bound: u64 },
    #[error(transparent)]
    Code(#[from] Gf2Error),
    #[error(transparent)]
    Layered(#[from] LayeredError),
    #[error(transparent)]
    Constellation(#[from] ConstellationError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Tiling,
    NotTiling,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Tiling => write!(f, "tiling"),
            Verdict::NotTiling => write!(f, "not a tiling"),
        }
    }
}

/// The first witness, in deterministic scan order, that the translates fail
/// to cover the ambient set exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    /// A nonzero point lies in both the tile and the shift set, so the two
    /// translates through it collide at that point.
    NonzeroIntersection { point: Point },
    /// A translate leaves the ambient set.
    SumOutsideAmbient {
        tile_point: Point,
        shift: Point,
        sum: Point,
    },
    /// Two distinct (tile point, shift) pairs land on the same point.
    MultipleDecompositions {
        point: Point,
        first: (Point, Point),
        second: (Point, Point),
    },
    /// An ambient point is hit by no translate.
    Uncovered { point: Point },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::NonzeroIntersection { point } => {
                write!(f, "nonzero point {point} lies in both the tile and the shift set")
            }
            Counterexample::SumOutsideAmbient {
                tile_point,
                shift,
                sum,
            } => write!(
                f,
                "{tile_point} + {shift} = {sum} falls outside the ambient set"
            ),
            Counterexample::MultipleDecompositions {
                point,
                first,
                second,
            } => write!(
                f,
                "{point} decomposes as {} + {} and as {} + {}",
                first.0, first.1, second.0, second.1
            ),
            Counterexample::Uncovered { point } => {
                write!(f, "{point} is covered by no translate")
            }
        }
    }
}

/// The algebraic side conditions evaluated alongside the brute-force check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionFlags {
    /// Whether every shifted componentwise product of a codeword with a coset
    /// representative vanishes. Only known when the shift set was derived
    /// from coset representatives; `None` when shifts were given as raw
    /// points.
    pub schur_shifts_vanish: Option<bool>,
    /// Whether the difference sets of tile and shift set meet only in zero.
    pub disjoint_differences: bool,
    /// Whether |tile| · |shift set| equals |ambient set|.
    pub cardinality_matches: bool,
}

/// Outcome of [`check_tiling`]: the verdict, a full decomposition table when
/// the translates tile, the first counterexample when they do not, and the
/// side conditions either way.
#[derive(Clone, Debug)]
pub struct TilingReport {
    pub verdict: Verdict,
    /// For each ambient point, the unique (tile point, shift) pair reaching
    /// it. Present exactly when the verdict is `Tiling`.
    pub decomposition: Option<BTreeMap<Point, (Point, Point)>>,
    /// Present exactly when the verdict is `NotTiling`.
    pub counterexample: Option<Counterexample>,
    pub flags: ConditionFlags,
}

fn validate_operands(
    ambient: &PointSet,
    tile: &PointSet,
    shifts: &PointSet,
) -> Result<(), TilingError> {
    if !tile.is_subset_of(ambient)? {
        return Err(TilingError::NotWithinAmbient { role: SetRole::Tile });
    }
    if !shifts.is_subset_of(ambient)? {
        return Err(TilingError::NotWithinAmbient {
            role: SetRole::Shifts,
        });
    }
    if !tile.contains_zero() {
        return Err(TilingError::MissingZero { role: SetRole::Tile });
    }
    if !shifts.contains_zero() {
        return Err(TilingError::MissingZero {
            role: SetRole::Shifts,
        });
    }
    Ok(())
}

fn difference_flags(tile: &PointSet, shifts: &PointSet, ambient_len: usize) -> ConditionFlags {
    let tile_diffs = tile.difference_set();
    let shift_diffs = shifts.difference_set();
    let disjoint = shift_diffs
        .iter()
        .all(|d| d.is_zero() || !tile_diffs.contains(d));
    ConditionFlags {
        schur_shifts_vanish: None,
        disjoint_differences: disjoint,
        cardinality_matches: tile.len() * shifts.len() == ambient_len,
    }
}

/// Decide by direct enumeration whether the translates of `tile` by `shifts`
/// cover `ambient` exactly once.
///
/// Both `tile` and `shifts` must lie within `ambient` and contain zero. The
/// scan is deterministic: first the tile/shift intersection in ascending
/// order, then every translate sum (tile ascending outer, shifts ascending
/// inner) checked against the ambient set, then the same sweep for repeated
/// sums, and finally ambient coverage in ascending order; the first failure
/// found becomes the counterexample. The difference and cardinality flags
/// are reported regardless of the verdict; the componentwise-product flag is
/// left unset because raw point sets carry no codeword information.
pub fn check_tiling(
    ambient: &PointSet,
    tile: &PointSet,
    shifts: &PointSet,
) -> Result<TilingReport, TilingError> {
    validate_operands(ambient, tile, shifts)?;
    let flags = difference_flags(tile, shifts, ambient.len());
    let fail = |counterexample| TilingReport {
        verdict: Verdict::NotTiling,
        decomposition: None,
        counterexample: Some(counterexample),
        flags: flags.clone(),
    };

    // A nonzero common point makes the zero-shift and its own translate
    // collide immediately.
    for p in tile.iter() {
        if !p.is_zero() && shifts.contains(p) {
            return Ok(fail(Counterexample::NonzeroIntersection { point: p.clone() }));
        }
    }

    // Every translate must stay inside the ambient set.
    for y in tile.iter() {
        for z in shifts.iter() {
            let sum = y.add(z).expect("validated common geometry");
            if !ambient.contains(&sum) {
                return Ok(fail(Counterexample::SumOutsideAmbient {
                    tile_point: y.clone(),
                    shift: z.clone(),
                    sum,
                }));
            }
        }
    }

    // No point may be reached twice.
    let mut decomposition: BTreeMap<Point, (Point, Point)> = BTreeMap::new();
    for y in tile.iter() {
        for z in shifts.iter() {
            let sum = y.add(z).expect("validated common geometry");
            if let Some(first) = decomposition.get(&sum) {
                return Ok(fail(Counterexample::MultipleDecompositions {
                    point: sum.clone(),
                    first: first.clone(),
                    second: (y.clone(), z.clone()),
                }));
            }
            decomposition.insert(sum, (y.clone(), z.clone()));
        }
    }

    // Every ambient point must be reached.
    for x in ambient.iter() {
        if !decomposition.contains_key(x) {
            return Ok(fail(Counterexample::Uncovered { point: x.clone() }));
        }
    }

    Ok(TilingReport {
        verdict: Verdict::Tiling,
        decomposition: Some(decomposition),
        counterexample: None,
        flags,
    })
}

/// The exact tiling characterisation for group constellations: when the
/// ambient set is a subgroup, the translates tile it if and only if the
/// difference sets of tile and shift set meet only in zero and the
/// cardinalities multiply out. Refuses with [`TilingError::NotAGroup`]
/// otherwise, since for non-groups the condition is neither necessary nor
/// sufficient.
pub fn difference_criterion(
    ambient: &PointSet,
    tile: &PointSet,
    shifts: &PointSet,
) -> Result<bool, TilingError> {
    validate_operands(ambient, tile, shifts)?;
    if !ambient.is_group() {
        return Err(TilingError::NotAGroup);
    }
    let flags = difference_flags(tile, shifts, ambient.len());
    Ok(flags.disjoint_differences && flags.cardinality_matches)
}

fn layered_codewords(
    pair: &ConstellationPair,
) -> Result<Vec<LayeredWord>, TilingError> {
    pair.code()
        .words()?
        .into_iter()
        .map(|w| Ok(LayeredWord::new(w, pair.width(), pair.levels())?))
        .collect()
}

fn layered_representatives(
    pair: &ConstellationPair,
    representatives: &[BinaryWord],
) -> Result<Vec<LayeredWord>, TilingError> {
    // Validating through the coset machinery guarantees the words are
    // genuine representatives: inside the product code, pairwise in distinct
    // cosets of the code, one per coset, zero included.
    decompose_cosets(
        pair.code(),
        pair.product_code(),
        LeaderPolicy::Explicit(representatives.to_vec()),
    )?;
    representatives
        .iter()
        .map(|w| Ok(LayeredWord::new(w.clone(), pair.width(), pair.levels())?))
        .collect()
}

/// Whether the shifted componentwise product of every codeword with every
/// coset representative is the zero word. When this holds, each translate of
/// the tile is the ψ-image of a coset, and the translates are guaranteed to
/// tile the ambient set.
///
/// `representatives` must be a full system of coset representatives of the
/// code inside the product code, zero included.
pub fn schur_shifts_vanish(
    pair: &ConstellationPair,
    representatives: &[BinaryWord],
) -> Result<bool, TilingError> {
    let codewords = layered_codewords(pair)?;
    let reps = layered_representatives(pair, representatives)?;
    for c in &codewords {
        for d in &reps {
            if !c.schur_shift(d).expect("common geometry").is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Why [`check_shift_membership`] could not be evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipBlocker {
    /// The supplied report says the translates do not tile, so the
    /// conclusion is not claimed.
    VerdictNotTiling,
    /// A second-order shifted product is nonzero, so the conclusion is not
    /// claimed. The first offending pair in scan order is recorded.
    SecondOrderShiftNonzero {
        codeword: BinaryWord,
        representative: BinaryWord,
    },
}

/// Outcome of the membership consequence check on shifted products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftMembership {
    /// The preconditions fail, so nothing is claimed.
    NotApplicable(MembershipBlocker),
    /// Every first-order shifted product lies in the product code, as the
    /// preconditions force.
    Holds,
    /// A first-order shifted product escapes the product code even though
    /// the preconditions hold. This cannot happen for well-formed inputs;
    /// seeing it means the implementation is broken.
    Violated {
        codeword: BinaryWord,
        representative: BinaryWord,
        shift: BinaryWord,
    },
}

impl fmt::Display for ShiftMembership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftMembership::NotApplicable(MembershipBlocker::VerdictNotTiling) => {
                write!(f, "not applicable: the translates do not tile the constellation")
            }
            ShiftMembership::NotApplicable(MembershipBlocker::SecondOrderShiftNonzero {
                codeword,
                representative,
            }) => write!(
                f,
                "not applicable: the second-order shift of codeword {codeword} \
                 with representative {representative} is nonzero"
            ),
            ShiftMembership::Holds => {
                write!(f, "every first-order shifted product lies in the product code")
            }
            ShiftMembership::Violated {
                codeword,
                representative,
                shift,
            } => write!(
                f,
                "first-order shifted product {shift} of codeword {codeword} \
                 with representative {representative} escapes the product code"
            ),
        }
    }
}

/// Check the membership consequence: when the translates tile the ambient
/// set and every second-order shifted product
/// `shift(((c ⊕ d) ∗ shift(c ∗ d)))` vanishes, each first-order shifted
/// product `shift(c ∗ d)` must lie in the product code.
///
/// Both precondition scans run over every (codeword, representative) pair —
/// codewords in enumeration order outer, representatives in the given order
/// inner — and the first failing pair is reported. The membership pass runs
/// only after the full precondition pass succeeds.
pub fn check_shift_membership(
    pair: &ConstellationPair,
    representatives: &[BinaryWord],
    report: &TilingReport,
) -> Result<ShiftMembership, TilingError> {
    let codewords = layered_codewords(pair)?;
    let reps = layered_representatives(pair, representatives)?;

    if report.verdict != Verdict::Tiling {
        return Ok(ShiftMembership::NotApplicable(
            MembershipBlocker::VerdictNotTiling,
        ));
    }

    for c in &codewords {
        for d in &reps {
            let first_order = c.schur_shift(d).expect("common geometry");
            let second_order = c
                .xor(d)
                .expect("common geometry")
                .schur_shift(&first_order)
                .expect("common geometry");
            if !second_order.is_zero() {
                return Ok(ShiftMembership::NotApplicable(
                    MembershipBlocker::SecondOrderShiftNonzero {
                        codeword: c.word().clone(),
                        representative: d.word().clone(),
                    },
                ));
            }
        }
    }

    for c in &codewords {
        for d in &reps {
            let first_order = c.schur_shift(d).expect("common geometry");
            if !pair.product_code().contains(first_order.word())? {
                return Ok(ShiftMembership::Violated {
                    codeword: c.word().clone(),
                    representative: d.word().clone(),
                    shift: first_order.word().clone(),
                });
            }
        }
    }
    Ok(ShiftMembership::Holds)
}

/// The successive candidate pools and final results of
/// [`select_class_representatives`]. Every word list is sorted by ψ-value,
/// which places the zero word first.
#[derive(Clone, Debug)]
pub struct SelectionTrace {
    /// Words of the product code outside the code, plus zero.
    pub initial: Vec<BinaryWord>,
    /// After removing words whose negated ψ-image is a nonzero code point.
    pub after_negation_pruning: Vec<BinaryWord>,
    /// After removing words whose ψ-image is a difference of two distinct
    /// nonzero code points.
    pub after_difference_pruning: Vec<BinaryWord>,
    /// After the optional per-coset collapse; `None` when not requested.
    pub after_coset_filter: Option<Vec<BinaryWord>>,
    /// Every shift set of full class count buildable from the surviving pool
    /// whose internal differences avoid the tile's nonzero differences. Each
    /// is sorted by ψ-value; the list is ordered by its search, which
    /// explores pool positions in ascending order.
    pub candidates: Vec<Vec<BinaryWord>>,
    /// ψ-images of the candidates, in matching order.
    pub z_sets: Vec<PointSet>,
}

/// Search for all valid shift sets built from coset-representative words,
/// pruning the pool before the exhaustive phase.
///
/// Requires the constellation to be a lattice (so that the difference
/// criterion is exact and every surviving candidate set is a genuine
/// tiling). The pool starts as the product-code words outside the code plus
/// zero; pruning removes words that could never share a shift set with zero,
/// and the optional coset filter keeps, inside each coset that still has
/// one, only the best surviving word whose shifted products with all
/// codewords vanish. The final search extends {zero} to full class count
/// while keeping all pairwise ψ-differences off the tile's nonzero
/// difference set.
pub fn select_class_representatives(
    pair: &ConstellationPair,
    use_coset_filter: bool,
) -> Result<SelectionTrace, TilingError> {
    if !pair.is_lattice() {
        return Err(TilingError::NotALattice);
    }
    let width = pair.width();
    let levels = pair.levels();
    let codewords = layered_codewords(pair)?;
    let code_points: Vec<Point> = codewords.iter().map(|c| c.psi()).collect();

    // Pool: words of the product code outside the code, plus zero, by ψ.
    let mut pool: Vec<(Point, LayeredWord)> = Vec::new();
    for word in pair.product_code().enumerate()? {
        if word.is_zero() || !pair.code().contains(&word)? {
            let layered = LayeredWord::new(word, width, levels)?;
            pool.push((layered.psi(), layered));
        }
    }
    pool.sort_by(|a, b| a.0.cmp(&b.0));
    let initial = words_of(&pool);

    // A shift z with −z a nonzero code point collides with the zero shift:
    // tile_point + z = 0 + 0.
    let nonzero_code_points: Vec<&Point> =
        code_points.iter().filter(|p| !p.is_zero()).collect();
    pool.retain(|(point, _)| {
        let negated = point.neg();
        !nonzero_code_points.iter().any(|y| **y == negated)
    });
    let after_negation_pruning = words_of(&pool);

    // A shift equal to a difference of two distinct nonzero code points
    // likewise collides with the zero shift.
    let mut nonzero_differences: Vec<Point> = Vec::new();
    for a in &nonzero_code_points {
        for b in &nonzero_code_points {
            if a != b {
                nonzero_differences.push(a.sub(b).expect("common geometry"));
            }
        }
    }
    pool.retain(|(point, _)| !nonzero_differences.contains(point));
    let after_difference_pruning = words_of(&pool);

    // Optional collapse: inside each coset of the code, if some surviving
    // word has vanishing shifted products with every codeword, keep only the
    // best such word (minimal weight, then lexicographic) and drop the
    // coset's other survivors.
    let after_coset_filter = if use_coset_filter {
        let mut best_aligned: BTreeMap<BinaryWord, BinaryWord> = BTreeMap::new();
        for (_, layered) in &pool {
            if codewords
                .iter()
                .all(|c| c.schur_shift(layered).expect("common geometry").is_zero())
            {
                let residue = pair.code().canonical_residue(layered.word())?;
                let word = layered.word();
                let better = match best_aligned.get(&residue) {
                    None => true,
                    Some(b) => (word.weight(), word) < (b.weight(), b),
                };
                if better {
                    best_aligned.insert(residue, word.clone());
                }
            }
        }
        let mut keep: Vec<(Point, LayeredWord)> = Vec::with_capacity(pool.len());
        for (point, layered) in pool {
            let residue = pair.code().canonical_residue(layered.word())?;
            match best_aligned.get(&residue) {
                Some(best) if best != layered.word() => {}
                _ => keep.push((point, layered)),
            }
        }
        pool = keep;
        Some(words_of(&pool))
    } else {
        None
    };

    // Exhaustive phase: grow {zero} to full class count, keeping every
    // pairwise difference of chosen shifts away from the tile's nonzero
    // differences (in both directions, though the set is symmetric).
    assert!(
        pool.first().is_some_and(|(p, _)| p.is_zero()),
        "the zero word always survives pruning"
    );
    let forbidden: Vec<Point> = {
        let tile = PointSet::from_points(width, levels, code_points.iter().cloned())?;
        tile.difference_set()
            .iter()
            .filter(|d| !d.is_zero())
            .cloned()
            .collect()
    };
    let target = pair.class_count() as usize;
    let mut candidates: Vec<Vec<BinaryWord>> = Vec::new();
    let mut chosen: Vec<usize> = vec![0];
    search_shift_sets(&pool, &forbidden, target, 1, &mut chosen, &mut candidates);

    let mut z_sets = Vec::with_capacity(candidates.len());
    for words in &candidates {
        let points = words
            .iter()
            .map(|w| Ok(LayeredWord::new(w.clone(), width, levels)?.psi()))
            .collect::<Result<Vec<_>, TilingError>>()?;
        z_sets.push(PointSet::from_points(width, levels, points)?);
    }

    Ok(SelectionTrace {
        initial,
        after_negation_pruning,
        after_difference_pruning,
        after_coset_filter,
        candidates,
        z_sets,
    })
}

fn words_of(pool: &[(Point, LayeredWord)]) -> Vec<BinaryWord> {
    pool.iter().map(|(_, w)| w.word().clone()).collect()
}

fn search_shift_sets(
    pool: &[(Point, LayeredWord)],
    forbidden: &[Point],
    target: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<BinaryWord>>,
) {
    if chosen.len() == target {
        out.push(chosen.iter().map(|&i| pool[i].1.word().clone()).collect());
        return;
    }
    for i in start..pool.len() {
        if pool.len() - i < target - chosen.len() {
            break;
        }
        let point = &pool[i].0;
        let compatible = chosen.iter().all(|&j| {
            let other = &pool[j].0;
            let d1 = point.sub(other).expect("common geometry");
            let d2 = other.sub(point).expect("common geometry");
            !forbidden.contains(&d1) && !forbidden.contains(&d2)
        });
        if compatible {
            chosen.push(i);
            search_shift_sets(pool, forbidden, target, i + 1, chosen, out);
            chosen.pop();
        }
    }
}

/// Exhaust every zero-containing shift set that makes the translates of
/// `tile` cover `ambient` exactly once, in ascending lexicographic order.
///
/// Candidates are drawn from `restrict` intersected with the ambient set
/// when given, otherwise from the whole ambient set. Returns an empty list
/// when the tile size does not divide the ambient size or when zero is not
/// an available candidate; refuses with [`TilingError::SearchTooLarge`] when
/// more than `max_classes` translates would be needed. Every produced set is
/// re-verified with [`check_tiling`] before being returned.
pub fn enumerate_all_tilings(
    ambient: &PointSet,
    tile: &PointSet,
    restrict: Option<&PointSet>,
    max_classes: u64,
) -> Result<Vec<PointSet>, TilingError> {
    if !tile.is_subset_of(ambient)? {
        return Err(TilingError::NotWithinAmbient { role: SetRole::Tile });
    }
    if !tile.contains_zero() {
        return Err(TilingError::MissingZero { role: SetRole::Tile });
    }
    if !ambient.len().is_multiple_of(tile.len()) {
        return Ok(Vec::new());
    }
    let classes = (ambient.len() / tile.len()) as u64;
    if classes > max_classes {
        return Err(TilingError::SearchTooLarge {
            classes,
            bound: max_classes,
        });
    }

    let pool: Vec<Point> = match restrict {
        Some(set) => {
            ambient.check_geometry(set)?;
            set.iter().filter(|p| ambient.contains(p)).cloned().collect()
        }
        None => ambient.iter().cloned().collect(),
    };
    if pool.first().is_none_or(|p| !p.is_zero()) {
        return Ok(Vec::new());
    }

    let zero = Point::zero(ambient.width(), ambient.levels());
    let mut covered = PointSet::empty(ambient.width(), ambient.levels());
    for y in tile.iter() {
        covered.insert(y.clone()).expect("tile points share geometry");
    }
    let mut chosen = vec![zero];
    let mut found = Vec::new();
    extend_tiling(
        ambient,
        tile,
        &pool,
        classes as usize,
        1,
        &mut chosen,
        &mut covered,
        &mut found,
    );

    // Each complete candidate is confirmed against the brute-force check.
    let mut verified = Vec::with_capacity(found.len());
    for shifts in found {
        let report = check_tiling(ambient, tile, &shifts)?;
        debug_assert_eq!(report.verdict, Verdict::Tiling);
        if report.verdict == Verdict::Tiling {
            verified.push(shifts);
        }
    }
    Ok(verified)
}

#[allow(clippy::too_many_arguments)]
fn extend_tiling(
    ambient: &PointSet,
    tile: &PointSet,
    pool: &[Point],
    target: usize,
    start: usize,
    chosen: &mut Vec<Point>,
    covered: &mut PointSet,
    out: &mut Vec<PointSet>,
) {
    if chosen.len() == target {
        let set = PointSet::from_points(
            ambient.width(),
            ambient.levels(),
            chosen.iter().cloned(),
        )
        .expect("chosen points share the ambient geometry");
        out.push(set);
        return;
    }
    for i in start..pool.len() {
        if pool.len() - i < target - chosen.len() {
            break;
        }
        let z = &pool[i];
        let translate: Vec<Point> = tile
            .iter()
            .map(|y| y.add(z).expect("common geometry"))
            .collect();
        let fits = translate
            .iter()
            .all(|p| ambient.contains(p) && !covered.contains(p));
        if !fits {
            continue;
        }
        for p in &translate {
            covered.insert(p.clone()).expect("geometry checked");
        }
        chosen.push(z.clone());
        extend_tiling(ambient, tile, pool, target, i + 1, chosen, covered, out);
        chosen.pop();
        for p in &translate {
            covered.remove(p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::psi_image;
    use crate::gf2::LinearCode;

    fn code(len: usize, rows: &[&str]) -> LinearCode {
        LinearCode::from_generators(len, rows.iter().map(|r| r.parse().unwrap()).collect())
            .unwrap()
    }

    fn pair(width: usize, levels: usize, rows: &[&str]) -> ConstellationPair {
        ConstellationPair::build(code(width * levels, rows), width, levels).unwrap()
    }

    fn points(width: usize, levels: usize, coords: &[&[u64]]) -> PointSet {
        PointSet::from_points(
            width,
            levels,
            coords
                .iter()
                .map(|c| Point::new(c.to_vec(), levels).unwrap()),
        )
        .unwrap()
    }

    fn pt(coords: &[u64], levels: usize) -> Point {
        Point::new(coords.to_vec(), levels).unwrap()
    }

    fn words(list: &[&str]) -> Vec<BinaryWord> {
        list.iter().map(|w| w.parse().unwrap()).collect()
    }

    fn psi_of(pair: &ConstellationPair, reps: &[BinaryWord]) -> PointSet {
        PointSet::from_points(
            pair.width(),
            pair.levels(),
            reps.iter().map(|w| {
                LayeredWord::new(w.clone(), pair.width(), pair.levels())
                    .unwrap()
                    .psi()
            }),
        )
        .unwrap()
    }

    /// Demo code over two-bit layers whose min-weight coset leaders make the
    /// shifted products vanish.
    fn demo_pair() -> ConstellationPair {
        pair(2, 3, &["110000", "000100", "001010"])
    }

    #[test]
    fn demo_min_weight_leaders_give_a_tiling() {
        let p = demo_pair();
        let decomposition = decompose_cosets(
            p.code(),
            p.product_code(),
            LeaderPolicy::MinWeight,
        )
        .unwrap();
        assert_eq!(decomposition.representatives(), &words(&["000000", "000010"])[..]);
        assert!(schur_shifts_vanish(&p, decomposition.representatives()).unwrap());

        let shifts = psi_of(&p, decomposition.representatives());
        assert_eq!(shifts, points(2, 3, &[&[0, 0], &[4, 0]]));
        let report = check_tiling(p.product_points(), p.code_points(), &shifts).unwrap();
        assert_eq!(report.verdict, Verdict::Tiling);
        assert!(report.counterexample.is_none());
        assert!(report.flags.disjoint_differences);
        assert!(report.flags.cardinality_matches);
        assert!(report.flags.schur_shifts_vanish.is_none());

        let table = report.decomposition.as_ref().unwrap();
        assert_eq!(table.len(), 16);
        assert_eq!(
            table[&pt(&[5, 1], 3)],
            (pt(&[1, 1], 3), pt(&[4, 0], 3)),
        );
        assert_eq!(
            table[&pt(&[2, 2], 3)],
            (pt(&[6, 2], 3), pt(&[4, 0], 3)),
        );
        assert_eq!(table[&pt(&[0, 0], 3)], (pt(&[0, 0], 3), pt(&[0, 0], 3)));
        // Every table entry recombines to its key.
        for (x, (y, z)) in table {
            assert_eq!(y.add(z).unwrap(), *x);
            assert!(p.code_points().contains(y));
            assert!(shifts.contains(z));
        }

        let membership =
            check_shift_membership(&p, decomposition.representatives(), &report).unwrap();
        assert_eq!(membership, ShiftMembership::Holds);
    }

    /// Code whose constellation is not even a group: {0,…,7} inside ℤ16 with
    /// tile {0,3,5,6}. No two-translate shift set works.
    fn no_tiling_pair() -> ConstellationPair {
        pair(1, 4, &["1100", "0110"])
    }

    #[test]
    fn every_shift_of_the_no_tiling_pair_fails() {
        let p = no_tiling_pair();
        let x = p.product_points();
        let y = p.code_points();
        assert_eq!(*y, points(1, 4, &[&[0], &[3], &[5], &[6]]));

        let case = |t: u64| {
            let shifts = points(1, 4, &[&[0], &[t]]);
            check_tiling(x, y, &shifts).unwrap()
        };

        let r = case(1);
        assert_eq!(r.verdict, Verdict::NotTiling);
        assert_eq!(
            r.counterexample.unwrap(),
            Counterexample::MultipleDecompositions {
                point: pt(&[6], 4),
                first: (pt(&[5], 4), pt(&[1], 4)),
                second: (pt(&[6], 4), pt(&[0], 4)),
            }
        );

        let r = case(2);
        assert_eq!(
            r.counterexample.unwrap(),
            Counterexample::SumOutsideAmbient {
                tile_point: pt(&[6], 4),
                shift: pt(&[2], 4),
                sum: pt(&[8], 4),
            }
        );

        let r = case(4);
        assert_eq!(
            r.counterexample.unwrap(),
            Counterexample::SumOutsideAmbient {
                tile_point: pt(&[5], 4),
                shift: pt(&[4], 4),
                sum: pt(&[9], 4),
            }
        );

        let r = case(7);
        assert_eq!(
            r.counterexample.unwrap(),
            Counterexample::SumOutsideAmbient {
                tile_point: pt(&[3], 4),
                shift: pt(&[7], 4),
                sum: pt(&[10], 4),
            }
        );

        for t in [3u64, 5, 6] {
            let r = case(t);
            assert_eq!(
                r.counterexample.unwrap(),
                Counterexample::NonzeroIntersection { point: pt(&[t], 4) }
            );
        }

        // The exhaustive search agrees: no two-translate shift set exists.
        assert_eq!(
            enumerate_all_tilings(x, y, None, 16).unwrap(),
            Vec::<PointSet>::new()
        );
    }

    #[test]
    fn uncovered_points_are_reported_in_order() {
        let p = pair(1, 4, &["1010", "0101"]);
        let shifts = points(1, 4, &[&[0]]);
        let report = check_tiling(p.product_points(), p.code_points(), &shifts).unwrap();
        assert_eq!(report.verdict, Verdict::NotTiling);
        assert_eq!(
            report.counterexample.unwrap(),
            Counterexample::Uncovered { point: pt(&[1], 4) }
        );
        assert!(!report.flags.cardinality_matches);
        assert!(report.flags.disjoint_differences);
    }

    #[test]
    fn operand_validation_is_strict() {
        let p = pair(1, 4, &["1010", "0101"]);
        let x = p.product_points();
        let y = p.code_points();

        let no_zero = points(1, 4, &[&[4], &[8]]);
        assert!(matches!(
            check_tiling(x, y, &no_zero),
            Err(TilingError::MissingZero { role: SetRole::Shifts })
        ));

        let escaped = points(1, 5, &[&[0], &[4]]);
        assert!(matches!(
            check_tiling(x, y, &escaped),
            Err(TilingError::Layered(LayeredError::GeometryMismatch { .. }))
        ));

        let tile_without_zero = points(1, 4, &[&[5], &[10]]);
        assert!(matches!(
            check_tiling(x, &tile_without_zero, y),
            Err(TilingError::MissingZero { role: SetRole::Tile })
        ));

        let outside = points(1, 4, &[&[0], &[3]]);
        let narrow_ambient = points(1, 4, &[&[0], &[1], &[2]]);
        assert!(matches!(
            check_tiling(&narrow_ambient, &outside, &outside),
            Err(TilingError::NotWithinAmbient { role: SetRole::Tile })
        ));
    }

    #[test]
    fn difference_criterion_matches_breach_and_agreement() {
        let p = pair(1, 4, &["1010", "0101"]);
        let x = p.product_points();
        let y = p.code_points();

        let good = points(1, 4, &[&[0], &[4], &[8], &[12]]);
        assert!(difference_criterion(x, y, &good).unwrap());
        let report = check_tiling(x, y, &good).unwrap();
        assert_eq!(report.verdict, Verdict::Tiling);

        let bad = points(1, 4, &[&[0], &[1], &[2], &[3]]);
        assert!(!difference_criterion(x, y, &bad).unwrap());
        let report = check_tiling(x, y, &bad).unwrap();
        assert_eq!(report.verdict, Verdict::NotTiling);

        // Non-group constellations are refused outright.
        let q = no_tiling_pair();
        let shifts = points(1, 4, &[&[0], &[1]]);
        assert!(matches!(
            difference_criterion(q.product_points(), q.code_points(), &shifts),
            Err(TilingError::NotAGroup)
        ));
    }

    #[test]
    fn vanishing_shifts_fail_when_products_reach_low_layers() {
        let p = pair(1, 4, &["1010", "0101"]);
        let decomposition =
            decompose_cosets(p.code(), p.product_code(), LeaderPolicy::MinWeight).unwrap();
        assert_eq!(
            decomposition.representatives(),
            &words(&["0000", "0001", "0010", "0011"])[..]
        );
        assert!(!schur_shifts_vanish(&p, decomposition.representatives()).unwrap());

        // The min-weight leaders still tile: ψ gives {0, 4, 8, 12}.
        let shifts = psi_of(&p, decomposition.representatives());
        assert_eq!(shifts, points(1, 4, &[&[0], &[4], &[8], &[12]]));
        let report = check_tiling(p.product_points(), p.code_points(), &shifts).unwrap();
        assert_eq!(report.verdict, Verdict::Tiling);

        // Tiling holds and all second-order shifts vanish, so the
        // first-order shifts must lie in the product code.
        let membership =
            check_shift_membership(&p, decomposition.representatives(), &report).unwrap();
        assert_eq!(membership, ShiftMembership::Holds);
    }

    #[test]
    fn membership_check_reports_second_order_blocker() {
        let p = pair(1, 4, &["1100", "0011"]);
        let reps = words(&["0000", "0001", "0100", "0101"]);
        let shifts = psi_of(&p, &reps);
        assert_eq!(shifts, points(1, 4, &[&[0], &[2], &[8], &[10]]));
        let report = check_tiling(p.product_points(), p.code_points(), &shifts).unwrap();
        assert_eq!(report.verdict, Verdict::Tiling);

        let membership = check_shift_membership(&p, &reps, &report).unwrap();
        assert_eq!(
            membership,
            ShiftMembership::NotApplicable(MembershipBlocker::SecondOrderShiftNonzero {
                codeword: "1111".parse().unwrap(),
                representative: "0100".parse().unwrap(),
            })
        );
    }

    #[test]
    fn membership_check_requires_a_tiling_verdict() {
        let p = pair(1, 4, &["1010", "0101"]);
        let reps = words(&["0000", "0100", "1000", "1100"]);
        let shifts = psi_of(&p, &reps);
        assert_eq!(shifts, points(1, 4, &[&[0], &[1], &[2], &[3]]));
        let report = check_tiling(p.product_points(), p.code_points(), &shifts).unwrap();
        assert_eq!(report.verdict, Verdict::NotTiling);

        let membership = check_shift_membership(&p, &reps, &report).unwrap();
        assert_eq!(
            membership,
            ShiftMembership::NotApplicable(MembershipBlocker::VerdictNotTiling)
        );
    }

    #[test]
    fn membership_holds_with_nonzero_shifts_in_a_proper_product_code() {
        // All-ones repetition code over three two-bit layers: the product
        // code is the diagonal {(t,t)}, a proper subcode of the full space,
        // and two of the representative products shift to the nonzero word
        // 000011, which the product code must and does contain.
        let p = pair(2, 3, &["111111"]);
        assert!(p.is_lattice());
        let reps = words(&["000000", "000011", "001100", "001111"]);
        let shifts = psi_of(&p, &reps);
        assert_eq!(
            shifts,
            points(2, 3, &[&[0, 0], &[2, 2], &[4, 4], &[6, 6]])
        );
        let report = check_tiling(p.product_points(), p.code_points(), &shifts).unwrap();
        assert_eq!(report.verdict, Verdict::Tiling);
        assert!(!schur_shifts_vanish(&p, &reps).unwrap());

        let membership = check_shift_membership(&p, &reps, &report).unwrap();
        assert_eq!(membership, ShiftMembership::Holds);
    }

    #[test]
    fn representative_validation_rejects_malformed_lists() {
        let p = pair(1, 4, &["1010", "0101"]);
        // Wrong count.
        assert!(schur_shifts_vanish(&p, &words(&["0000", "0001"])).is_err());
        // Two words in the same coset.
        assert!(
            schur_shifts_vanish(&p, &words(&["0000", "1000", "0010", "0100"])).is_err()
        );
        // Zero missing.
        assert!(
            schur_shifts_vanish(&p, &words(&["1010", "1000", "0100", "1100"])).is_err()
        );
    }

    #[test]
    fn selection_walks_the_expected_trace() {
        let p = pair(1, 4, &["1100", "0011"]);
        let trace = select_class_representatives(&p, false).unwrap();

        let psi_values = |list: &[BinaryWord]| -> Vec<u64> {
            list.iter()
                .map(|w| {
                    LayeredWord::new(w.clone(), 1, 4).unwrap().psi().coords()[0]
                })
                .collect()
        };

        assert_eq!(
            psi_values(&trace.initial),
            vec![0, 1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 13, 14]
        );
        assert_eq!(
            psi_values(&trace.after_negation_pruning),
            vec![0, 2, 5, 6, 7, 8, 9, 10, 11, 14]
        );
        assert_eq!(
            psi_values(&trace.after_difference_pruning),
            vec![0, 2, 5, 6, 8, 10, 11, 14]
        );
        assert!(trace.after_coset_filter.is_none());

        assert_eq!(trace.candidates.len(), 2);
        assert_eq!(psi_values(&trace.candidates[0]), vec![0, 2, 8, 10]);
        assert_eq!(psi_values(&trace.candidates[1]), vec![0, 6, 8, 14]);
        assert_eq!(trace.z_sets[0], points(1, 4, &[&[0], &[2], &[8], &[10]]));
        assert_eq!(trace.z_sets[1], points(1, 4, &[&[0], &[6], &[8], &[14]]));

        // Both candidates are genuine tilings.
        for z in &trace.z_sets {
            let report = check_tiling(p.product_points(), p.code_points(), z).unwrap();
            assert_eq!(report.verdict, Verdict::Tiling);
        }
    }

    #[test]
    fn coset_filter_prunes_without_losing_candidates() {
        let p = pair(1, 4, &["1100", "0011"]);
        let trace = select_class_representatives(&p, true).unwrap();

        let psi_values = |list: &[BinaryWord]| -> Vec<u64> {
            list.iter()
                .map(|w| {
                    LayeredWord::new(w.clone(), 1, 4).unwrap().psi().coords()[0]
                })
                .collect()
        };

        // The filter collapses only the coset that still holds an aligned
        // word (0001, ψ = 8), removing its companion 1101 (ψ = 11).
        assert_eq!(
            psi_values(trace.after_coset_filter.as_ref().unwrap()),
            vec![0, 2, 5, 6, 8, 10, 14]
        );
        assert_eq!(trace.candidates.len(), 2);
        assert_eq!(psi_values(&trace.candidates[0]), vec![0, 2, 8, 10]);
        assert_eq!(psi_values(&trace.candidates[1]), vec![0, 6, 8, 14]);
    }

    #[test]
    fn filtered_selection_pins_the_unique_grid_shift_set() {
        let p = pair(1, 4, &["1010", "0101"]);
        let trace = select_class_representatives(&p, true).unwrap();
        let psi_values = |list: &[BinaryWord]| -> Vec<u64> {
            list.iter()
                .map(|w| {
                    LayeredWord::new(w.clone(), 1, 4).unwrap().psi().coords()[0]
                })
                .collect()
        };
        assert_eq!(
            psi_values(trace.after_coset_filter.as_ref().unwrap()),
            vec![0, 3, 4, 8, 9, 12, 14]
        );
        assert_eq!(trace.candidates.len(), 1);
        assert_eq!(psi_values(&trace.candidates[0]), vec![0, 4, 8, 12]);

        // The unfiltered search lands on the same unique candidate.
        let unfiltered = select_class_representatives(&p, false).unwrap();
        assert_eq!(unfiltered.candidates, trace.candidates);
    }

    #[test]
    fn selection_requires_a_lattice() {
        assert!(matches!(
            select_class_representatives(&demo_pair(), false),
            Err(TilingError::NotALattice)
        ));
        assert!(matches!(
            select_class_representatives(&no_tiling_pair(), true),
            Err(TilingError::NotALattice)
        ));
    }

    #[test]
    fn selection_is_trivial_when_the_code_fills_its_product() {
        let p = pair(1, 2, &["10", "01"]);
        let trace = select_class_representatives(&p, false).unwrap();
        assert_eq!(trace.initial, words(&["00"]));
        assert_eq!(trace.candidates, vec![words(&["00"])]);
        assert_eq!(trace.z_sets[0], points(1, 2, &[&[0]]));
    }

    #[test]
    fn exhaustive_search_finds_the_unique_demo_shift_set() {
        let p = demo_pair();
        let all =
            enumerate_all_tilings(p.product_points(), p.code_points(), None, 16).unwrap();
        assert_eq!(all, vec![points(2, 3, &[&[0, 0], &[4, 0]])]);
    }

    #[test]
    fn exhaustive_search_agrees_with_a_subset_oracle() {
        let p = pair(1, 4, &["1010", "0101"]);
        let x = p.product_points();
        let y = p.code_points();
        let found = enumerate_all_tilings(x, y, None, 16).unwrap();

        // Oracle: test every zero-containing four-point subset of the
        // ambient set directly.
        let candidates: Vec<Point> = x.iter().filter(|p| !p.is_zero()).cloned().collect();
        let mut expected = Vec::new();
        for i in 0..candidates.len() {
            for j in i + 1..candidates.len() {
                for k in j + 1..candidates.len() {
                    let shifts = PointSet::from_points(
                        1,
                        4,
                        [
                            Point::zero(1, 4),
                            candidates[i].clone(),
                            candidates[j].clone(),
                            candidates[k].clone(),
                        ],
                    )
                    .unwrap();
                    let report = check_tiling(x, y, &shifts).unwrap();
                    if report.verdict == Verdict::Tiling {
                        expected.push(shifts);
                    }
                }
            }
        }
        assert_eq!(found, expected);
        assert!(found.contains(&points(1, 4, &[&[0], &[4], &[8], &[12]])));
    }

    #[test]
    fn exhaustive_search_respects_restriction_and_bounds() {
        let p = pair(1, 4, &["1010", "0101"]);
        let x = p.product_points();
        let y = p.code_points();

        assert!(matches!(
            enumerate_all_tilings(x, y, None, 3),
            Err(TilingError::SearchTooLarge { classes: 4, bound: 3 })
        ));

        let restricted = points(1, 4, &[&[0], &[4], &[8], &[12]]);
        let found = enumerate_all_tilings(x, y, Some(&restricted), 16).unwrap();
        assert_eq!(found, vec![restricted.clone()]);

        // A pool without zero cannot produce a shift set.
        let no_zero = points(1, 4, &[&[4], &[8], &[12]]);
        assert_eq!(
            enumerate_all_tilings(x, y, Some(&no_zero), 16).unwrap(),
            Vec::<PointSet>::new()
        );
    }

    #[test]
    fn non_dividing_sizes_yield_no_tilings() {
        let ambient = points(1, 2, &[&[0], &[1], &[2]]);
        let tile = points(1, 2, &[&[0], &[1]]);
        assert_eq!(
            enumerate_all_tilings(&ambient, &tile, None, 16).unwrap(),
            Vec::<PointSet>::new()
        );
    }

    #[test]
    fn reports_stay_consistent_on_random_group_instances() {
        use rand_chacha::rand_core::{RngCore, SeedableRng};
        use rand_chacha::ChaCha8Rng;

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ambient = psi_image(&LinearCode::full_space(6), 1, 6).unwrap();
        assert!(ambient.is_group());

        let consistent = |tile: &PointSet, shifts: &PointSet| -> Verdict {
            let report = check_tiling(&ambient, tile, shifts).unwrap();
            let predicted = difference_criterion(&ambient, tile, shifts).unwrap();
            assert_eq!(predicted, report.verdict == Verdict::Tiling);
            assert_eq!(report.verdict == Verdict::Tiling, report.decomposition.is_some());
            assert_eq!(
                report.verdict == Verdict::NotTiling,
                report.counterexample.is_some()
            );
            if report.verdict == Verdict::Tiling {
                assert!(report.flags.disjoint_differences);
                assert!(report.flags.cardinality_matches);
            }
            report.verdict
        };

        // Interval-by-progression tilings of ℤ64 at every block size.
        for exp in 0..=6u64 {
            let block = 1u64 << exp;
            let tile =
                PointSet::from_points(1, 6, (0..block).map(|v| pt(&[v], 6))).unwrap();
            let shifts = PointSet::from_points(
                1,
                6,
                (0..64 / block).map(|v| pt(&[v * block], 6)),
            )
            .unwrap();
            assert_eq!(consistent(&tile, &shifts), Verdict::Tiling);
        }

        // Random tile and shift set containing zero: almost always a
        // non-tiling, checked against the criterion either way.
        for _ in 0..400 {
            let mut tile = points(1, 6, &[&[0]]);
            let mut shifts = points(1, 6, &[&[0]]);
            for _ in 0..(1 + rng.next_u64() % 7) {
                tile.insert(pt(&[rng.next_u64() % 64], 6)).unwrap();
            }
            for _ in 0..(1 + rng.next_u64() % 7) {
                shifts.insert(pt(&[rng.next_u64() % 64], 6)).unwrap();
            }
            consistent(&tile, &shifts);
        }
    }
}
