//! Strategy representations: correlated angle pairs, deterministic maps, and
//! the coin-flip baseline they are measured against.
//!
//! An [`AngleStrategy`] gives each player one angle per landing site. The
//! players' two bits are drawn from the joint distribution determined by the
//! angle pair of the realized sites (see [`outcome_distribution`]); only the
//! *difference* of the two angles matters, which leaves a global gauge
//! freedom. A [`ClassicalStrategy`] fixes each player's move per site
//! deterministically.

use serde::{Deserialize, Serialize};

use crate::graph::Move;
use crate::{Error, Result};

/// Per-site angles for both players on `C_n`.
///
/// Angles are stored unreduced, in radians; all consumers feed them into
/// trigonometry of half-differences, so any representative modulo `4π` is
/// equivalent. JSON form: `{"n": .., "alice": [..], "bob": [..]}` with full
/// round-trip float precision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleStrategy {
    n: u32,
    alice: Vec<f64>,
    bob: Vec<f64>,
}

impl AngleStrategy {
    pub fn new(alice: Vec<f64>, bob: Vec<f64>) -> Result<Self> {
        if alice.is_empty() || alice.len() != bob.len() {
            return Err(Error::BadStrategyShape {
                alice: alice.len(),
                bob: bob.len(),
            });
        }
        Ok(AngleStrategy {
            n: alice.len() as u32,
            alice,
            bob,
        })
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Alice's angles, indexed by site - 1.
    #[inline]
    pub fn alice_angles(&self) -> &[f64] {
        &self.alice
    }

    /// Bob's angles, indexed by site - 1.
    #[inline]
    pub fn bob_angles(&self) -> &[f64] {
        &self.bob
    }

    /// The same strategy with Alice's first angle subtracted from every
    /// angle, for comparable reporting; distributions are unchanged.
    pub fn gauge_fixed(&self) -> AngleStrategy {
        let offset = self.alice[0];
        AngleStrategy {
            n: self.n,
            alice: self.alice.iter().map(|a| a - offset).collect(),
            bob: self.bob.iter().map(|b| b - offset).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("angle strategy serializes infallibly")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            #[allow(dead_code)]
            n: Option<u32>,
            alice: Vec<f64>,
            bob: Vec<f64>,
        }
        let raw: Raw = serde_json::from_str(text)?;
        Self::new(raw.alice, raw.bob)
    }
}

/// Joint distribution of the two players' bits for one site pair.
///
/// `pXY` is the probability that Alice reads `X` and Bob reads `Y`. The
/// shared correlation imposes `p00 = p11` and `p01 = p10`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeDistribution {
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
}

impl OutcomeDistribution {
    /// Distribution for angle difference `delta` (Bob's angle minus
    /// Alice's): equal bits with probability `cos^2(delta/2)`, split evenly
    /// between 00 and 11; opposite bits with probability `sin^2(delta/2)`.
    pub fn from_angle_difference(delta: f64) -> Self {
        let (s, c) = (delta / 2.0).sin_cos();
        let equal = 0.5 * c * c;
        let opposite = 0.5 * s * s;
        OutcomeDistribution {
            p00: equal,
            p01: opposite,
            p10: opposite,
            p11: equal,
        }
    }

    #[inline]
    pub fn as_array(self) -> [f64; 4] {
        [self.p00, self.p01, self.p10, self.p11]
    }

    pub fn sum(self) -> f64 {
        self.p00 + self.p01 + self.p10 + self.p11
    }
}

/// Joint bit distribution when Alice lands on `alice_site` and Bob on
/// `bob_site`.
pub fn outcome_distribution(
    strategy: &AngleStrategy,
    alice_site: u32,
    bob_site: u32,
) -> Result<OutcomeDistribution> {
    let n = strategy.n();
    for site in [alice_site, bob_site] {
        if site == 0 || site > n {
            return Err(Error::InvalidSite { n, site });
        }
    }
    let delta =
        strategy.bob[bob_site as usize - 1] - strategy.alice[alice_site as usize - 1];
    Ok(OutcomeDistribution::from_angle_difference(delta))
}

/// The linear-increment angle family: site `i` gets angle `(i-1)·theta` for
/// Alice and `π + (i-1)·theta` for Bob.
///
/// The `π` offset anti-correlates the players at equal sites, spreading them
/// apart whenever they start together.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams {
    pub n: u32,
    pub theta: f64,
}

impl AnsatzParams {
    pub fn new(n: u32, theta: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::CycleTooSmall(n));
        }
        Ok(AnsatzParams { n, theta })
    }
}

/// Build the concrete [`AngleStrategy`] of the linear-increment family.
pub fn ansatz_strategy(params: &AnsatzParams) -> AngleStrategy {
    let alice: Vec<f64> = (0..params.n).map(|i| i as f64 * params.theta).collect();
    let bob: Vec<f64> = alice.iter().map(|a| std::f64::consts::PI + a).collect();
    AngleStrategy {
        n: params.n,
        alice,
        bob,
    }
}

/// The known-optimal increment for the linear family: `2π/n` for
/// `n = 5..=10`, `4π/n` for `n = 11..=13`. Outside that range no optimal
/// increment is known a priori; run the sweep optimizer instead.
///
/// At `n = 10` the two expressions tie exactly; the smaller one is returned.
pub fn schedule_theta(n: u32) -> Result<f64> {
    use std::f64::consts::TAU;
    match n {
        5..=10 => Ok(TAU / n as f64),
        11..=13 => Ok(2.0 * TAU / n as f64),
        _ => Err(Error::OutOfSchedule(n)),
    }
}

/// Which player a deterministic lookup refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Player {
    Alice,
    Bob,
}

/// A deterministic strategy: one fixed move per site per player.
///
/// JSON form: `{"n": .., "alice": [bits..], "bob": [bits..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalStrategy {
    n: u32,
    alice: Vec<Move>,
    bob: Vec<Move>,
}

impl ClassicalStrategy {
    pub fn new(alice: Vec<Move>, bob: Vec<Move>) -> Result<Self> {
        if alice.is_empty() || alice.len() != bob.len() {
            return Err(Error::BadStrategyShape {
                alice: alice.len(),
                bob: bob.len(),
            });
        }
        Ok(ClassicalStrategy {
            n: alice.len() as u32,
            alice,
            bob,
        })
    }

    /// The known-optimal deterministic strategy on `C_5` (expected score
    /// 23/5): Alice steps forward from sites 1 and 5, back otherwise; Bob
    /// mirrors her.
    pub fn c5_reference() -> Self {
        use Move::{ToPredecessor as P, ToSuccessor as S};
        ClassicalStrategy {
            n: 5,
            alice: vec![S, P, P, P, S],
            bob: vec![P, S, S, S, P],
        }
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn alice_map(&self) -> &[Move] {
        &self.alice
    }

    #[inline]
    pub fn bob_map(&self) -> &[Move] {
        &self.bob
    }

    /// Deterministic lookup; never depends on the other player's site.
    pub fn move_for(&self, player: Player, site: u32) -> Result<Move> {
        if site == 0 || site > self.n {
            return Err(Error::InvalidSite { n: self.n, site });
        }
        let map = match player {
            Player::Alice => &self.alice,
            Player::Bob => &self.bob,
        };
        Ok(map[site as usize - 1])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("classical strategy serializes infallibly")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            #[allow(dead_code)]
            n: Option<u32>,
            alice: Vec<Move>,
            bob: Vec<Move>,
        }
        let raw: Raw = serde_json::from_str(text)?;
        Self::new(raw.alice, raw.bob)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn distribution_at_zero_difference_is_perfectly_correlated() {
        let d = OutcomeDistribution::from_angle_difference(0.0);
        assert_eq!(d.as_array(), [0.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn distribution_at_pi_is_perfectly_anticorrelated() {
        let d = OutcomeDistribution::from_angle_difference(PI);
        assert_abs_diff_eq!(d.p00, 0.0, epsilon = 1e-32);
        assert_abs_diff_eq!(d.p11, 0.0, epsilon = 1e-32);
        assert_abs_diff_eq!(d.p01, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.p10, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn distribution_at_half_pi_is_uniform() {
        let d = OutcomeDistribution::from_angle_difference(PI / 2.0);
        for p in d.as_array() {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-15);
        }
    }

    #[test]
    fn ansatz_on_c5_lays_out_linear_angles() {
        let s = ansatz_strategy(&AnsatzParams::new(5, TAU / 5.0).unwrap());
        let step = TAU / 5.0;
        for i in 0..5 {
            assert_relative_eq!(s.alice_angles()[i], i as f64 * step, max_relative = 1e-15);
            assert_relative_eq!(
                s.bob_angles()[i],
                PI + i as f64 * step,
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn ansatz_degenerate_zero_increment() {
        let s = ansatz_strategy(&AnsatzParams::new(3, 0.0).unwrap());
        assert_eq!(s.alice_angles(), &[0.0, 0.0, 0.0]);
        assert_eq!(s.bob_angles(), &[PI, PI, PI]);
    }

    #[test]
    fn schedule_covers_known_range_only() {
        assert_eq!(schedule_theta(5).unwrap(), TAU / 5.0);
        assert_eq!(schedule_theta(10).unwrap(), TAU / 10.0);
        assert_eq!(schedule_theta(11).unwrap(), 2.0 * TAU / 11.0);
        assert_eq!(schedule_theta(12).unwrap(), 2.0 * TAU / 12.0);
        assert!(matches!(schedule_theta(4), Err(Error::OutOfSchedule(4))));
        assert!(matches!(schedule_theta(14), Err(Error::OutOfSchedule(14))));
    }

    #[test]
    fn equal_site_ansatz_play_always_spreads() {
        let s = ansatz_strategy(&AnsatzParams::new(7, 0.83).unwrap());
        for i in 1..=7 {
            let d = outcome_distribution(&s, i, i).unwrap();
            assert!(d.p00 < 1e-30 && d.p11 < 1e-30, "site {i}: {d:?}");
            assert_abs_diff_eq!(d.p01, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn c5_reference_moves_match_its_description() {
        let s = ClassicalStrategy::c5_reference();
        // Alice starting on 1 steps forward to 2; Bob starting on 5 steps
        // back to 4.
        assert_eq!(s.move_for(Player::Alice, 1).unwrap(), Move::ToSuccessor);
        assert_eq!(s.move_for(Player::Bob, 5).unwrap(), Move::ToPredecessor);
        assert!(s.move_for(Player::Alice, 6).is_err());
    }

    #[test]
    fn constant_map_is_constant() {
        let s = ClassicalStrategy::new(
            vec![Move::ToSuccessor; 6],
            vec![Move::ToSuccessor; 6],
        )
        .unwrap();
        for site in 1..=6 {
            assert_eq!(s.move_for(Player::Alice, site).unwrap(), Move::ToSuccessor);
            assert_eq!(s.move_for(Player::Bob, site).unwrap(), Move::ToSuccessor);
        }
    }

    #[test]
    fn strategy_json_round_trips() {
        let s = ansatz_strategy(&AnsatzParams::new(5, 1.2566370614359172).unwrap());
        let back = AngleStrategy::from_json(&s.to_json()).unwrap();
        assert_eq!(s, back);

        let c = ClassicalStrategy::c5_reference();
        let back = ClassicalStrategy::from_json(&c.to_json()).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn mismatched_angle_lists_are_rejected() {
        assert!(matches!(
            AngleStrategy::new(vec![0.0; 3], vec![0.0; 4]),
            Err(Error::BadStrategyShape { alice: 3, bob: 4 })
        ));
        assert!(AngleStrategy::from_json(r#"{"alice":[0.0],"bob":[]}"#).is_err());
    }

    proptest! {
        /// Only angle differences matter: shifting all 2n angles by a common
        /// offset leaves every distribution unchanged.
        #[test]
        fn gauge_offset_leaves_distributions_unchanged(
            theta in -6.0..6.0f64,
            offset in -20.0..20.0f64,
            i in 1u32..=6,
            j in 1u32..=6,
        ) {
            let base = ansatz_strategy(&AnsatzParams::new(6, theta).unwrap());
            let shifted = AngleStrategy::new(
                base.alice_angles().iter().map(|a| a + offset).collect(),
                base.bob_angles().iter().map(|b| b + offset).collect(),
            ).unwrap();
            let d0 = outcome_distribution(&base, i, j).unwrap();
            let d1 = outcome_distribution(&shifted, i, j).unwrap();
            for (a, b) in d0.as_array().iter().zip(d1.as_array()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        /// The distribution is even in the difference and 2π-periodic.
        #[test]
        fn distribution_symmetries(delta in -12.0..12.0f64) {
            let d = OutcomeDistribution::from_angle_difference(delta);
            let neg = OutcomeDistribution::from_angle_difference(-delta);
            let per = OutcomeDistribution::from_angle_difference(delta + TAU);
            for (a, b) in d.as_array().iter().zip(neg.as_array()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            for (a, b) in d.as_array().iter().zip(per.as_array()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        /// Probabilities are a distribution with the pairing symmetry.
        #[test]
        fn distribution_is_normalized(delta in -12.0..12.0f64) {
            let d = OutcomeDistribution::from_angle_difference(delta);
            prop_assert!((d.sum() - 1.0).abs() < 1e-12);
            prop_assert!(d.p00 == d.p11 && d.p01 == d.p10);
            prop_assert!(d.as_array().iter().all(|p| (0.0..=1.0).contains(p)));
        }
    }

    #[test]
    fn gauge_fixing_pins_alices_first_angle() {
        let s = AngleStrategy::new(vec![1.5, 2.0, 2.5], vec![4.0, 4.5, 5.0]).unwrap();
        let g = s.gauge_fixed();
        assert_eq!(g.alice_angles()[0], 0.0);
        assert_relative_eq!(g.bob_angles()[0], 2.5, max_relative = 1e-15);
    }
}
