//! The cycle graph, the move convention, and the exact domination table.
//!
//! Vertices of `C_n` carry 1-based labels `1..=n` and every table row/column
//! is keyed by a `(site, move-bit)` pair. The move bit follows a fixed
//! convention throughout the crate: **0 steps to the predecessor** (`i - 1`)
//! and **1 steps to the successor** (`i + 1`), both cyclically. Flipping both
//! players' bits while reflecting site labels (`i -> n + 2 - i`) maps the
//! table onto itself, so every aggregate quantity is independent of which of
//! the two possible conventions is picked.

use num_rational::Rational64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// One coin outcome: the neighbor a player steps to.
///
/// Bit value 0 is the step to the predecessor vertex, bit value 1 the step to
/// the successor vertex. Serialized as the bare bit (`0` / `1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Move {
    ToPredecessor = 0,
    ToSuccessor = 1,
}

impl Move {
    /// The bit value of this move (0 = predecessor, 1 = successor).
    #[inline]
    pub fn bit(self) -> u8 {
        self as u8
    }

    /// Move for a bit value; any nonzero bit means the successor step.
    #[inline]
    pub fn from_bit(bit: u8) -> Self {
        if bit == 0 {
            Move::ToPredecessor
        } else {
            Move::ToSuccessor
        }
    }

    /// The opposite step.
    #[inline]
    pub fn flipped(self) -> Self {
        match self {
            Move::ToPredecessor => Move::ToSuccessor,
            Move::ToSuccessor => Move::ToPredecessor,
        }
    }
}

impl Serialize for Move {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.bit())
    }
}

impl<'de> Deserialize<'de> for Move {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match u8::deserialize(deserializer)? {
            0 => Ok(Move::ToPredecessor),
            1 => Ok(Move::ToSuccessor),
            other => Err(D::Error::custom(format!("move bit must be 0 or 1, got {other}"))),
        }
    }
}

/// The playing field: a cycle graph `C_n` with `n >= 3`, labels `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CycleGame {
    n: u32,
}

impl CycleGame {
    pub fn new(n: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::CycleTooSmall(n));
        }
        Ok(CycleGame { n })
    }

    #[inline]
    pub fn n(self) -> u32 {
        self.n
    }

    fn check_site(self, site: u32) -> Result<()> {
        if site == 0 || site > self.n {
            return Err(Error::InvalidSite { n: self.n, site });
        }
        Ok(())
    }

    /// Cyclic distance between two vertices.
    pub fn distance(self, u: u32, v: u32) -> Result<u32> {
        self.check_site(u)?;
        self.check_site(v)?;
        Ok(self.distance_0(u - 1, v - 1))
    }

    #[inline]
    fn distance_0(self, u0: u32, v0: u32) -> u32 {
        let d = u0.abs_diff(v0) % self.n;
        d.min(self.n - d)
    }

    /// The vertex a player standing on `site` ends on after `mv`.
    pub fn end_position(self, site: u32, mv: Move) -> Result<u32> {
        self.check_site(site)?;
        Ok(self.end_position_0(site - 1, mv) + 1)
    }

    #[inline]
    fn end_position_0(self, site0: u32, mv: Move) -> u32 {
        match mv {
            Move::ToPredecessor => (site0 + self.n - 1) % self.n,
            Move::ToSuccessor => (site0 + 1) % self.n,
        }
    }

    /// Number of vertices dominated after both players move: the size of
    /// `N[a'] ∪ N[b']` where `a'`, `b'` are the end positions and `N[v]` is
    /// the closed neighborhood `{v-1, v, v+1}`.
    ///
    /// Two closed neighborhoods on a cycle cover `min(n, 6, 3 + d)` vertices,
    /// with `d` the cyclic distance between the end positions.
    pub fn dominated_count(
        self,
        alice_site: u32,
        alice_move: Move,
        bob_site: u32,
        bob_move: Move,
    ) -> Result<u32> {
        self.check_site(alice_site)?;
        self.check_site(bob_site)?;
        let a = self.end_position_0(alice_site - 1, alice_move);
        let b = self.end_position_0(bob_site - 1, bob_move);
        Ok(self.dominated_count_0(a, b))
    }

    #[inline]
    fn dominated_count_0(self, a0: u32, b0: u32) -> u32 {
        self.n.min(6).min(3 + self.distance_0(a0, b0))
    }
}

/// Exact dominated counts for all `4n^2` combinations of both players'
/// `(site, move)` pairs. Entries are integers in `3..=min(n, 6)`; the table
/// is immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominationTable {
    game: CycleGame,
    /// Row-major over ((alice_site, alice_bit), (bob_site, bob_bit)).
    counts: Vec<u8>,
}

impl DominationTable {
    pub fn build(game: CycleGame) -> Self {
        let n = game.n() as usize;
        let mut counts = vec![0u8; 4 * n * n];
        for i0 in 0..n {
            for a in [Move::ToPredecessor, Move::ToSuccessor] {
                let ea = game.end_position_0(i0 as u32, a);
                for j0 in 0..n {
                    for b in [Move::ToPredecessor, Move::ToSuccessor] {
                        let eb = game.end_position_0(j0 as u32, b);
                        let idx = Self::index(n, i0, a.bit(), j0, b.bit());
                        counts[idx] = game.dominated_count_0(ea, eb) as u8;
                    }
                }
            }
        }
        DominationTable { game, counts }
    }

    #[inline]
    fn index(n: usize, i0: usize, a_bit: u8, j0: usize, b_bit: u8) -> usize {
        (i0 * 2 + a_bit as usize) * 2 * n + j0 * 2 + b_bit as usize
    }

    #[inline]
    pub fn game(&self) -> CycleGame {
        self.game
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.game.n()
    }

    /// Dominated count for 1-based sites; validates the labels.
    pub fn count(
        &self,
        alice_site: u32,
        alice_move: Move,
        bob_site: u32,
        bob_move: Move,
    ) -> Result<u32> {
        self.game.check_site(alice_site)?;
        self.game.check_site(bob_site)?;
        Ok(self.at(
            alice_site as usize - 1,
            alice_move.bit(),
            bob_site as usize - 1,
            bob_move.bit(),
        ))
    }

    /// Unvalidated 0-based lookup for hot loops.
    #[inline]
    pub(crate) fn at(&self, i0: usize, a_bit: u8, j0: usize, b_bit: u8) -> u32 {
        self.counts[Self::index(self.game.n() as usize, i0, a_bit, j0, b_bit)] as u32
    }

    /// Unweighted mean of all `4n^2` entries, exact.
    pub fn mean(&self) -> Rational64 {
        let sum: i64 = self.counts.iter().map(|&c| c as i64).sum();
        Rational64::new(sum, self.counts.len() as i64)
    }

    pub fn min_entry(&self) -> u32 {
        *self.counts.iter().min().expect("table is never empty") as u32
    }

    pub fn max_entry(&self) -> u32 {
        *self.counts.iter().max().expect("table is never empty") as u32
    }

    /// All entries as `(alice_site, alice_bit, bob_site, bob_bit, count)`
    /// rows, sorted lexicographically by the four key columns.
    pub fn rows(&self) -> impl Iterator<Item = (u32, u8, u32, u8, u32)> + '_ {
        let n = self.game.n();
        (1..=n).flat_map(move |i| {
            (0..2u8).flat_map(move |a| {
                (1..=n).flat_map(move |j| {
                    (0..2u8).map(move |b| {
                        (i, a, j, b, self.at(i as usize - 1, a, j as usize - 1, b))
                    })
                })
            })
        })
    }

    /// CSV export: header `alice_site,alice_bit,bob_site,bob_bit,count`,
    /// rows in the order of [`DominationTable::rows`].
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "alice_site,alice_bit,bob_site,bob_bit,count")?;
        for (i, a, j, b, c) in self.rows() {
            writeln!(w, "{i},{a},{j},{b},{c}")?;
        }
        Ok(())
    }
}
