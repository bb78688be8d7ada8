//! The CHSH XOR game as an operational layer over the Bell machinery: exact
//! conditional outcome distributions from projective measurements, the
//! analytic win probability (identical to the ½[1 + ⟨B⟩/4] identity), the
//! classical deterministic maximum of 3/4, and a seeded round-by-round Monte
//! Carlo simulator whose output is reproducible bit for bit.
//!
//! Rules: the referee draws questions (s, t) uniformly; Alice answers a,
//! Bob answers b; the round is won when a ⊕ b = s·t. Measurement settings
//! carry the witness-form sign pattern by default, so Bob's t = 1 observable
//! is negated internally to keep the win rule in its standard form; with the
//! game-form pattern the directions are used exactly as given.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bell::{MeasurementSetting, SignPattern};
use crate::linalg::{pauli, tensor, ComplexMatrix, DensityMatrix};
use crate::{tol, Error, Result};

/// One played round: questions, answers, and whether a ⊕ b = s·t held.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GameRound {
    pub s: u8,
    pub t: u8,
    pub a: u8,
    pub b: u8,
    pub win: bool,
}

/// The full conditional distribution of a quantum strategy:
/// `p[a][b][s][t]` = P(a, b | s, t) for binary answers and questions.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct OutcomeDistribution {
    pub p: [[[[f64; 2]; 2]; 2]; 2],
}

impl OutcomeDistribution {
    /// Win probability under uniform questions:
    /// ¼ Σ_{s,t} Σ_{a ⊕ b = s·t} p(a, b | s, t).
    pub fn win_probability(&self) -> f64 {
        let mut total = 0.0;
        for s in 0..2 {
            for t in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        if a ^ b == s & t {
                            total += self.p[a][b][s][t];
                        }
                    }
                }
            }
        }
        total / 4.0
    }

    /// Largest deviation of any one-party marginal from being independent of
    /// the other party's question; zero (to rounding) for quantum strategies.
    pub fn no_signaling_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..2 {
            for s in 0..2 {
                let with_t0: f64 = (0..2).map(|b| self.p[a][b][s][0]).sum();
                let with_t1: f64 = (0..2).map(|b| self.p[a][b][s][1]).sum();
                worst = worst.max((with_t0 - with_t1).abs());
            }
        }
        for b in 0..2 {
            for t in 0..2 {
                let with_s0: f64 = (0..2).map(|a| self.p[a][b][0][t]).sum();
                let with_s1: f64 = (0..2).map(|a| self.p[a][b][1][t]).sum();
                worst = worst.max((with_s0 - with_s1).abs());
            }
        }
        worst
    }

    /// Largest deviation of Σ_{a,b} p(a, b | s, t) from one over the four
    /// question pairs.
    pub fn normalization_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for s in 0..2 {
            for t in 0..2 {
                let sum: f64 = (0..2)
                    .flat_map(|a| (0..2).map(move |b| (a, b)))
                    .map(|(a, b)| self.p[a][b][s][t])
                    .sum();
                worst = worst.max((sum - 1.0).abs());
            }
        }
        worst
    }
}

/// ½(I + (−1)^outcome v·σ), the projector onto the ±1 eigenspace of v·σ.
fn projector(v: [f64; 3], outcome: usize) -> ComplexMatrix {
    let sign = if outcome == 0 { 1.0 } else { -1.0 };
    let mut m = ComplexMatrix::identity(2);
    for (axis, &weight) in v.iter().enumerate() {
        if weight != 0.0 {
            m = m.add(&pauli(axis).scale_re(sign * weight));
        }
    }
    m.scale_re(0.5)
}

fn negate(v: [f64; 3]) -> [f64; 3] {
    [-v[0], -v[1], -v[2]]
}

/// Conditional outcome distribution with the default (witness-form) sign
/// pattern, under which Bob's t = 1 direction is negated so that the win
/// rule a ⊕ b = s·t reproduces the setting's Bell combination.
pub fn joint_distribution(
    rho: &DensityMatrix,
    setting: &MeasurementSetting,
) -> Result<OutcomeDistribution> {
    joint_distribution_with(rho, setting, SignPattern::default())
}

/// Conditional outcome distribution under an explicit sign pattern.
pub fn joint_distribution_with(
    rho: &DensityMatrix,
    setting: &MeasurementSetting,
    pattern: SignPattern,
) -> Result<OutcomeDistribution> {
    if rho.dim() != 4 {
        return Err(Error::Dimension {
            context: "the game strategy needs a two-qubit state",
            got: format!("{0}×{0}", rho.dim()),
        });
    }
    let alice = [setting.a0, setting.a1];
    let bob_t1 = match pattern {
        SignPattern::MinusA0B1 => negate(setting.b1),
        SignPattern::MinusA1B1 => setting.b1,
    };
    let bob = [setting.b0, bob_t1];

    let mut p = [[[[0.0; 2]; 2]; 2]; 2];
    for s in 0..2 {
        for t in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    let effect = tensor(&projector(alice[s], a), &projector(bob[t], b));
                    let tr = effect.matmul(rho.matrix()).trace();
                    if tr.im.abs() > tol::IMAG_RESIDUE {
                        return Err(Error::NotHermitian { residual: tr.im.abs() });
                    }
                    p[a][b][s][t] = tr.re.max(0.0);
                }
            }
        }
    }
    Ok(OutcomeDistribution { p })
}

/// Win probability of the quantum strategy, computed from the outcome
/// distribution; agrees with ½[1 + ⟨B⟩/4] at the same setting.
pub fn analytic_win_probability(
    rho: &DensityMatrix,
    setting: &MeasurementSetting,
) -> Result<f64> {
    Ok(joint_distribution(rho, setting)?.win_probability())
}

/// Best win probability over all 16 deterministic classical strategies;
/// always 3/4 for this game, computed rather than asserted.
pub fn classical_maximum() -> f64 {
    let mut best: f64 = 0.0;
    for answers in 0..16u8 {
        let a = [answers & 1, (answers >> 1) & 1];
        let b = [(answers >> 2) & 1, (answers >> 3) & 1];
        let mut wins = 0;
        for s in 0..2u8 {
            for t in 0..2u8 {
                if a[s as usize] ^ b[t as usize] == s & t {
                    wins += 1;
                }
            }
        }
        best = best.max(f64::from(wins) / 4.0);
    }
    best
}

/// Draws questions uniformly and samples answers from the conditional
/// distribution with a single uniform variate.
pub fn play_round(dist: &OutcomeDistribution, rng: &mut impl Rng) -> GameRound {
    let s: u8 = rng.random_range(0..2);
    let t: u8 = rng.random_range(0..2);
    let u: f64 = rng.random();

    let mut cumulative = 0.0;
    let mut answers = (1u8, 1u8);
    'outer: for a in 0..2u8 {
        for b in 0..2u8 {
            cumulative += dist.p[a as usize][b as usize][s as usize][t as usize];
            if u < cumulative {
                answers = (a, b);
                break 'outer;
            }
        }
    }
    let (a, b) = answers;
    GameRound { s, t, a, b, win: a ^ b == s & t }
}

/// Aggregate result of a seeded simulation run.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SimulationReport {
    pub rounds: u64,
    pub wins: u64,
    pub win_rate: f64,
    /// Exact win probability of the same strategy, for comparison.
    pub analytic: f64,
}

/// Plays `rounds` independent rounds of the game. Each round runs on its own
/// ChaCha stream derived from (`seed`, round index), so results are
/// reproducible and independent of iteration order.
pub fn simulate(
    rho: &DensityMatrix,
    setting: &MeasurementSetting,
    rounds: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if rounds == 0 {
        return Err(Error::OutOfRange {
            context: "a simulation needs at least one round",
            value: 0.0,
        });
    }
    let dist = joint_distribution(rho, setting)?;
    let mut wins = 0u64;
    for round in 0..rounds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(round);
        if play_round(&dist, &mut rng).win {
            wins += 1;
        }
    }
    Ok(SimulationReport {
        rounds,
        wins,
        win_rate: wins as f64 / rounds as f64,
        analytic: dist.win_probability(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::p_max;
    use crate::sampling::{random_density, seeded_rng};
    use crate::states::{named_state, NamedFamily, PauliDiagonalForm};

    const EXACT: f64 = 1e-12;

    fn phi_plus() -> DensityMatrix {
        PauliDiagonalForm::new([0.0; 3], [0.0; 3], [1.0, -1.0, 1.0]).to_density().unwrap()
    }

    fn zx_setting() -> MeasurementSetting {
        MeasurementSetting::new(
            [0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0],
        )
        .unwrap()
    }

    #[test]
    fn classical_strategies_top_out_at_three_quarters() {
        assert_eq!(classical_maximum(), 0.75);
    }

    #[test]
    fn maximally_mixed_input_gives_uniform_outcomes() {
        let dist = joint_distribution(
            &DensityMatrix::maximally_mixed(4),
            &MeasurementSetting::tsirelson(SignPattern::MinusA0B1),
        )
        .unwrap();
        for s in 0..2 {
            for t in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        assert!((dist.p[a][b][s][t] - 0.25).abs() < EXACT);
                    }
                }
            }
        }
        assert!((dist.win_probability() - 0.5).abs() < EXACT);
    }

    #[test]
    fn aligned_z_measurements_on_phi_plus_correlate_perfectly() {
        let dist = joint_distribution(&phi_plus(), &zx_setting()).unwrap();
        assert!((dist.p[0][0][0][0] - 0.5).abs() < EXACT);
        assert!((dist.p[1][1][0][0] - 0.5).abs() < EXACT);
        assert!(dist.p[0][1][0][0].abs() < EXACT);
        assert!(dist.p[1][0][0][0].abs() < EXACT);
    }

    #[test]
    fn distributions_are_normalized_and_non_signaling() {
        for seed in 0..10u64 {
            let rho = random_density(4, 900 + seed).unwrap();
            let mut rng = seeded_rng(seed);
            let setting = MeasurementSetting::random(&mut rng);
            let dist = joint_distribution(&rho, &setting).unwrap();
            assert!(dist.normalization_residual() < EXACT);
            assert!(dist.no_signaling_residual() < EXACT);
        }
    }

    #[test]
    fn win_probability_matches_the_bell_identity() {
        for seed in 0..10u64 {
            let rho = random_density(4, 950 + seed).unwrap();
            let mut rng = seeded_rng(100 + seed);
            let setting = MeasurementSetting::random(&mut rng);
            let from_game = analytic_win_probability(&rho, &setting).unwrap();
            let from_bell = p_max(&rho, &setting).unwrap();
            assert!((from_game - from_bell).abs() < EXACT);
        }
    }

    #[test]
    fn tsirelson_strategy_on_phi_plus_wins_at_the_quantum_maximum() {
        let target = 0.5 + std::f64::consts::SQRT_2 / 4.0;
        let setting = MeasurementSetting::tsirelson(SignPattern::MinusA0B1);
        let p = analytic_win_probability(&phi_plus(), &setting).unwrap();
        assert!((p - target).abs() < EXACT);

        // The game-form pattern reaches the same maximum with its own
        // directions passed through unchanged.
        let game_form = MeasurementSetting::tsirelson(SignPattern::MinusA1B1);
        let dist =
            joint_distribution_with(&phi_plus(), &game_form, SignPattern::MinusA1B1).unwrap();
        assert!((dist.win_probability() - target).abs() < EXACT);
    }

    #[test]
    fn printed_example_strategy_wins_at_its_quoted_rate() {
        let rho = named_state(NamedFamily::Rho1).unwrap();
        let setting = MeasurementSetting::normalized(
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.8, 0.4, 0.447],
            [-0.4, 0.8, 0.447],
        )
        .unwrap();
        let p = analytic_win_probability(&rho, &setting).unwrap();
        assert!((p - 0.7535242127185272).abs() < 1e-9);
    }

    #[test]
    fn simulation_is_deterministic_in_the_seed() {
        let setting = MeasurementSetting::tsirelson(SignPattern::MinusA0B1);
        let first = simulate(&phi_plus(), &setting, 4000, 7).unwrap();
        let second = simulate(&phi_plus(), &setting, 4000, 7).unwrap();
        assert_eq!(first.wins, second.wins);
        let other = simulate(&phi_plus(), &setting, 4000, 8).unwrap();
        assert_ne!(first.wins, other.wins);
    }

    #[test]
    fn long_simulation_tracks_the_analytic_rate() {
        let setting = MeasurementSetting::tsirelson(SignPattern::MinusA0B1);
        let report = simulate(&phi_plus(), &setting, 1_000_000, 20260825).unwrap();
        let sigma = (report.analytic * (1.0 - report.analytic) / report.rounds as f64).sqrt();
        assert!(
            (report.win_rate - report.analytic).abs() < 4.0 * sigma,
            "rate {} vs analytic {} (σ = {sigma})",
            report.win_rate,
            report.analytic
        );
    }

    #[test]
    fn degenerate_round_counts_are_handled() {
        let setting = MeasurementSetting::tsirelson(SignPattern::MinusA0B1);
        assert!(matches!(
            simulate(&phi_plus(), &setting, 0, 1),
            Err(Error::OutOfRange { .. })
        ));
        let one = simulate(&phi_plus(), &setting, 1, 1).unwrap();
        assert!(one.wins <= 1);
        assert_eq!(one.rounds, 1);
    }

    #[test]
    fn played_rounds_follow_the_distribution() {
        let dist = joint_distribution(&phi_plus(), &zx_setting()).unwrap();
        let mut rng = seeded_rng(42);
        let mut mismatched = 0;
        for _ in 0..2000 {
            let round = play_round(&dist, &mut rng);
            // Questions (0, 0) measure σ_z on both sides of |Φ+⟩: the answers
            // must agree every single time.
            if round.s == 0 && round.t == 0 && round.a != round.b {
                mismatched += 1;
            }
        }
        assert_eq!(mismatched, 0);
    }
}
