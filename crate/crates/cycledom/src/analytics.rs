//! Exact expected scores, the long-cycle cosine closed form, series
//! coefficient extraction, and the advantage ratio.
//!
//! Everything here is deterministic. Quantities that are rational by
//! construction (deterministic and coin-flip expectations, series
//! coefficients) are returned as exact rationals; angle-dependent values are
//! `f64`.

use std::f64::consts::PI;

use num_rational::Rational64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::graph::{CycleGame, DominationTable};
use crate::strategy::{
    ansatz_strategy, AngleStrategy, AnsatzParams, ClassicalStrategy, OutcomeDistribution,
};
use crate::{Error, Result};

/// Expected score of an angle strategy under uniformly random starting
/// sites: the table average weighted by each site pair's bit distribution.
pub fn exact_expectation_quantum(
    table: &DominationTable,
    strategy: &AngleStrategy,
) -> Result<f64> {
    if table.n() != strategy.n() {
        return Err(Error::DimensionMismatch {
            table_n: table.n(),
            strategy_n: strategy.n(),
        });
    }
    let n = table.n() as usize;
    let alice = strategy.alice_angles();
    let bob = strategy.bob_angles();
    let mut total = 0.0;
    for i0 in 0..n {
        for j0 in 0..n {
            let d = OutcomeDistribution::from_angle_difference(bob[j0] - alice[i0]);
            total += d.p00 * table.at(i0, 0, j0, 0) as f64
                + d.p01 * table.at(i0, 0, j0, 1) as f64
                + d.p10 * table.at(i0, 1, j0, 0) as f64
                + d.p11 * table.at(i0, 1, j0, 1) as f64;
        }
    }
    Ok(total / (n * n) as f64)
}

/// Expected score of a deterministic strategy, as an exact rational with
/// denominator dividing `n^2`.
pub fn exact_expectation_classical(
    table: &DominationTable,
    strategy: &ClassicalStrategy,
) -> Result<Rational64> {
    if table.n() != strategy.n() {
        return Err(Error::DimensionMismatch {
            table_n: table.n(),
            strategy_n: strategy.n(),
        });
    }
    let n = table.n() as usize;
    let alice = strategy.alice_map();
    let bob = strategy.bob_map();
    let mut total: i64 = 0;
    for i0 in 0..n {
        for j0 in 0..n {
            total += table.at(i0, alice[i0].bit(), j0, bob[j0].bit()) as i64;
        }
    }
    Ok(Rational64::new(total, (n * n) as i64))
}

/// Expected score when both players flip fair coins: the plain average of
/// all `4n^2` table entries.
pub fn exact_expectation_random(n: u32) -> Result<Rational64> {
    Ok(DominationTable::build(CycleGame::new(n)?).mean())
}

/// Closed-form expected score of the linear-increment family at increment
/// `theta`, valid for `n >= 5`: a constant `6` plus `1/n` and `1/n^2`
/// cosine corrections whose frequencies include the wrap-around harmonics
/// `n-4 .. n-1`.
///
/// Agrees with the table-sum expectation to floating-point accuracy; it
/// exists so the two independent computations can cross-check each other.
pub fn closed_form_long(n: u32, theta: f64) -> Result<f64> {
    if n < 5 {
        return Err(Error::BelowClosedFormRange(n));
    }
    let nf = n as f64;
    let c = |k: f64| (k * theta).cos();
    let order1 = -8.0 + c(1.0) - 0.5 * c(2.0) - c(3.0) - 0.5 * c(4.0);
    let order2 = -c(1.0) + c(2.0) + 3.0 * c(3.0) + 2.0 * c(4.0)
        - 2.0 * c(nf - 4.0)
        - 3.0 * c(nf - 3.0)
        - c(nf - 2.0)
        + c(nf - 1.0);
    Ok(6.0 + order1 / nf + order2 / (nf * nf))
}

/// Exact cosine-series form of the linear-increment expectation:
///
/// ```text
/// D(θ) = (5n + λ + Σ_{l=1}^{n-1} μ_l cos(lθ)) / n²
/// ```
///
/// with half-integer coefficients `λ`, `μ_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormSeries {
    pub n: u32,
    pub lambda: Rational64,
    /// `mu[l-1]` is the coefficient of `cos(lθ)`, `l = 1..=n-1`.
    pub mu: Vec<Rational64>,
}

impl ClosedFormSeries {
    /// Evaluate the series at `theta`.
    pub fn value_at(&self, theta: f64) -> f64 {
        let nf = self.n as f64;
        let mut acc = 5.0 * nf + rational_to_f64(self.lambda);
        for (idx, mu) in self.mu.iter().enumerate() {
            let l = (idx + 1) as f64;
            acc += rational_to_f64(*mu) * (l * theta).cos();
        }
        acc / (nf * nf)
    }
}

fn rational_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

const HALF_INTEGER_TOL: f64 = 1e-6;
const ROUND_TRIP_TOL: f64 = 1e-9;

fn round_half_integer(harmonic: usize, raw: f64) -> Result<Rational64> {
    let doubled = (2.0 * raw).round();
    let residual = (raw - doubled / 2.0).abs();
    if residual > HALF_INTEGER_TOL {
        return Err(Error::SeriesNormalizationMismatch {
            harmonic,
            raw,
            residual,
            tolerance: HALF_INTEGER_TOL,
        });
    }
    Ok(Rational64::new(doubled as i64, 2))
}

/// Recover the exact series coefficients for cycle length `n`.
///
/// The expectation is sampled at the `2n` angles `θ_k = πk/n`, where the
/// cosines of the `n-1` participating harmonics are mutually orthogonal, so
/// each coefficient is a plain weighted sum of samples. Raw coefficients are
/// rounded to the nearest half-integer (harmonic 0 denotes `λ`); rounding
/// beyond tolerance or a failed round-trip against the samples is an error,
/// since either would mean the assumed series shape does not hold.
pub fn extract_series(n: u32) -> Result<ClosedFormSeries> {
    let game = CycleGame::new(n)?;
    let table = DominationTable::build(game);
    let nf = n as f64;
    let samples = 2 * n as usize;
    let mut shifted = Vec::with_capacity(samples);
    for k in 0..samples {
        let theta = PI * k as f64 / nf;
        let strategy = ansatz_strategy(&AnsatzParams::new(n, theta)?);
        let d = exact_expectation_quantum(&table, &strategy)?;
        shifted.push(nf * nf * d - 5.0 * nf);
    }

    let lambda_raw = shifted.iter().sum::<f64>() / samples as f64;
    let lambda = round_half_integer(0, lambda_raw)?;
    let mut mu = Vec::with_capacity(n as usize - 1);
    for l in 1..n as usize {
        let raw = shifted
            .iter()
            .enumerate()
            .map(|(k, f)| f * (PI * (l * k) as f64 / nf).cos())
            .sum::<f64>()
            / nf;
        mu.push(round_half_integer(l, raw)?);
    }

    let series = ClosedFormSeries { n, lambda, mu };
    for (k, f) in shifted.iter().enumerate() {
        let theta = PI * k as f64 / nf;
        let exact = (f + 5.0 * nf) / (nf * nf);
        let residual = (series.value_at(theta) - exact).abs();
        if residual > ROUND_TRIP_TOL {
            return Err(Error::SeriesRoundTripMismatch {
                sample: k,
                residual,
                tolerance: ROUND_TRIP_TOL,
            });
        }
    }
    Ok(series)
}

/// The three reference values and the advantage ratio
/// `a = (q - c) / (c - r)`: how far the correlated value `q` exceeds the
/// deterministic optimum `c`, measured in units of the deterministic
/// strategy's own edge over the coin-flip baseline `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvantageReport {
    pub q: f64,
    pub c: f64,
    pub r: f64,
    pub a: f64,
}

impl AdvantageReport {
    /// The ratio as a whole percentage, rounding exact halves to even.
    pub fn a_percent(&self) -> i64 {
        (100.0 * self.a).round_ties_even() as i64
    }
}

impl Serialize for AdvantageReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("AdvantageReport", 5)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("c", &self.c)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("a_percent", &self.a_percent())?;
        st.end()
    }
}

/// Build an [`AdvantageReport`] from the three reference values; the ratio
/// is undefined unless `c > r`.
pub fn advantage(q: f64, c: f64, r: f64) -> Result<AdvantageReport> {
    if c <= r {
        return Err(Error::DegenerateBaseline { c, r });
    }
    Ok(AdvantageReport {
        q,
        c,
        r,
        a: (q - c) / (c - r),
    })
}
