//! Shared helpers for the integration suites: seeded randomness plus
//! generators for random words, codes, and Schur-closed chains.

use ccstar::constellation::PointSet;
use ccstar::gf2::{BinaryWord, LinearCode};
use ccstar::layered::{LayeredWord, Point};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_word(rng: &mut ChaCha8Rng, len: usize) -> BinaryWord {
    let mut word = BinaryWord::zero(len);
    for index in 0..len {
        if rng.next_u32() & 1 == 1 {
            word.set_bit(index, true);
        }
    }
    word
}

pub fn random_code(rng: &mut ChaCha8Rng, len: usize, max_rows: usize) -> LinearCode {
    let rows = (rng.next_u32() as usize) % (max_rows + 1);
    let generators = (0..rows).map(|_| random_word(rng, len)).collect();
    LinearCode::from_generators(len, generators).expect("row lengths match")
}

/// Build a random chain of level codes C₁ ⊆ … ⊆ C_L over `width` bits in
/// which every componentwise product of two codewords of one level lands in
/// the next. Containment holds because each level keeps the previous
/// level's generators; closure holds because the next level also absorbs
/// all pairwise products of those generators, and products distribute over
/// sums of generators.
pub fn random_closed_chain(
    rng: &mut ChaCha8Rng,
    width: usize,
    levels: usize,
    extra_row_percent: u32,
) -> Vec<LinearCode> {
    let mut chain: Vec<LinearCode> = Vec::new();
    for _ in 0..levels {
        let mut generators: Vec<BinaryWord> = match chain.last() {
            None => {
                if rng.next_u32() & 1 == 1 {
                    vec![random_word(rng, width)]
                } else {
                    Vec::new()
                }
            }
            Some(previous) => {
                let prev = previous.generators().to_vec();
                let mut rows = prev.clone();
                for i in 0..prev.len() {
                    for j in i..prev.len() {
                        rows.push(prev[i].schur(&prev[j]).expect("equal widths"));
                    }
                }
                rows
            }
        };
        if rng.next_u32() % 100 < extra_row_percent {
            generators.push(random_word(rng, width));
        }
        chain.push(LinearCode::from_generators(width, generators).expect("row lengths match"));
    }
    chain
}

pub fn psi_point(word: &BinaryWord, width: usize, levels: usize) -> Point {
    LayeredWord::new(word.clone(), width, levels)
        .expect("word length matches the geometry")
        .psi()
}

pub fn point_set(width: usize, levels: usize, points: Vec<Point>) -> PointSet {
    PointSet::from_points(width, levels, points).expect("points share the geometry")
}

/// Choose a zero-containing subset of `pool` with `size` elements.
/// `pool` must be zero-first (sorted ascending with zero present).
pub fn random_zero_subset(rng: &mut ChaCha8Rng, pool: &[Point], size: usize) -> Vec<Point> {
    assert!(size >= 1 && size <= pool.len());
    assert!(pool[0].is_zero());
    let mut picked = std::collections::BTreeSet::new();
    picked.insert(0usize);
    while picked.len() < size {
        picked.insert(1 + (rng.next_u32() as usize) % (pool.len() - 1));
    }
    picked.iter().map(|&index| pool[index].clone()).collect()
}
