//! One-stop analysis reports and reproduction datasets. `analyze` gathers
//! every two-qubit quantity this library computes — M(ρ), plane Bell and
//! witness expectations, win probabilities, negativity, K, the q threshold,
//! both strength measures, and every applicable bound check — into a single
//! serializable document. The remaining functions build the benchmark
//! datasets (the seven-row strength-cap table, the mixed-strength surface for
//! the x family, and the worked-example scalar list) that the command-line
//! `reproduce` targets write to disk.

use crate::bell::{
    expectation, horodecki_m, max_bell_value, violates_chsh, MeasurementSetting, Plane,
};
use crate::linalg::{ComplexMatrix, DensityMatrix};
use crate::states::{named_state, NamedFamily};
use crate::strength::{bound_suite, negativity, BoundCheck};
use crate::witness::{
    chsh_sum_bounds, u_bound, w_opt, w_plane, witness_inequality, witness_window_low,
    WitnessKind,
};
use crate::{tol, Error, Result};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Inputs steering an analysis run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    /// Plane whose witness feeds the K/mixed-strength pipeline.
    pub plane: Plane,
    /// Mixing weight for the mixed strength measure, if requested.
    pub q: Option<f64>,
    /// Optional explicit CHSH setting; adds a dedicated report entry and
    /// replaces the plane witness in the bound suite.
    pub setting: Option<MeasurementSetting>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self { plane: Plane::Xy, q: None, setting: None }
    }
}

/// Bell/witness numbers for one fixed operator choice.
#[derive(Debug, Clone, serde::Serialize)]
pub struct OperatorEntry {
    pub label: String,
    /// ⟨B⟩ for the underlying Bell combination.
    pub bell: f64,
    /// Tr[Wρ] for the matching witness W = 2I − B.
    pub witness: f64,
    /// Game win probability ½(1 + ⟨B⟩/4).
    pub p_max: f64,
    /// max{P − 3/4, 0}.
    pub excess: f64,
    /// Witness detection verdict (strictly negative expectation).
    pub detected: bool,
}

/// The full analysis document for one two-qubit state.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AnalysisReport {
    /// Horodecki quantity; > 1 exactly when some setting violates CHSH.
    pub m: f64,
    /// 2√M, the best reachable Bell expectation.
    pub max_bell: f64,
    pub violates_chsh: bool,
    /// Fixed-plane entries for xy, yz, xz in that order.
    pub planes: Vec<OperatorEntry>,
    /// Entry for the explicitly supplied setting, when one was given.
    pub custom: Option<OperatorEntry>,
    /// Tr[W^opt ρ].
    pub w_opt: f64,
    /// W^opt window check: (value, lies inside [¼ − 3/(4√2), ¼ + 3/(4√2)]).
    pub witness_window: Option<(f64, bool)>,
    /// Plane-witness sum check: (Σ Tr[W_ij ρ], lies inside [6 + 2√2, 12]).
    pub witness_sum: Option<(f64, bool)>,
    /// Strength cap U = ¾ − 1/(2√2) + √2·Tr[W^opt ρ], when applicable.
    pub u: Option<f64>,
    pub negativity: f64,
    /// K for the active witness; present for entangled, undetected states.
    pub k: Option<f64>,
    /// Largest admissible mixing weight, when K > 0.
    pub q_threshold: Option<f64>,
    /// The q actually applied to the mixed measure, if any survived checks.
    pub q_used: Option<f64>,
    /// Largest plane excess max{P_ij − 3/4, 0}.
    pub s_nl_planes: f64,
    /// Detected strength (√M − 1)/4, floored at zero.
    pub s_nl_detected: f64,
    /// Mixed strength q(P − 3/4) + (1 − q)K, when q was usable.
    pub s_nl_new: Option<f64>,
    /// Every instantiated inequality with its verdict.
    pub bounds: Vec<BoundCheck>,
}

impl AnalysisReport {
    /// True when every instantiated bound check passed.
    pub fn all_bounds_hold(&self) -> bool {
        self.bounds.iter().all(|b| b.passed)
    }
}

fn operator_entry(
    rho: &DensityMatrix,
    label: String,
    bell_op: &ComplexMatrix,
    witness_op: &ComplexMatrix,
) -> Result<OperatorEntry> {
    let bell = expectation(bell_op, rho)?;
    let witness = expectation(witness_op, rho)?;
    let p_max = 0.5 * (1.0 + bell / 4.0);
    Ok(OperatorEntry {
        label,
        bell,
        witness,
        p_max,
        excess: (p_max - 0.75).max(0.0),
        detected: witness < -tol::DETECTION,
    })
}

/// Builds the full analysis document for a two-qubit state.
pub fn analyze(rho: &DensityMatrix, options: &AnalysisOptions) -> Result<AnalysisReport> {
    if rho.dim() != 4 {
        return Err(Error::Dimension {
            context: "analysis expects a two-qubit state",
            got: format!("{0}×{0}", rho.dim()),
        });
    }

    let m = horodecki_m(rho)?;
    let mut planes = Vec::with_capacity(3);
    for p in Plane::ALL {
        let kind = WitnessKind::Plane(p);
        planes.push(operator_entry(
            rho,
            kind.label(),
            &crate::bell::plane_bell_operator(p),
            &w_plane(p),
        )?);
    }
    let custom = match &options.setting {
        Some(s) => {
            let kind = WitnessKind::Chsh(*s);
            Some(operator_entry(
                rho,
                kind.label(),
                &crate::bell::bell_operator(s)?,
                &kind.operator()?,
            )?)
        }
        None => None,
    };

    let w_opt_value = expectation(&w_opt(), rho)?;
    let witness_window = witness_inequality(rho).ok();
    let witness_sum = chsh_sum_bounds(rho).ok();
    let u = u_bound(rho).ok();

    // The bound suite runs against the custom setting when one is supplied,
    // otherwise against the selected plane witness. An out-of-range q is
    // reported as absent rather than failing the whole analysis.
    let kind = match &options.setting {
        Some(s) => WitnessKind::Chsh(*s),
        None => WitnessKind::Plane(options.plane),
    };
    let (strength, q_used) = match bound_suite(rho, &kind, options.q) {
        Ok(report) => (report, options.q),
        Err(Error::OutOfRange { .. }) => (bound_suite(rho, &kind, None)?, None),
        Err(e) => return Err(e),
    };

    let s_nl_planes = planes.iter().fold(0.0f64, |best, e| best.max(e.excess));
    Ok(AnalysisReport {
        m,
        max_bell: max_bell_value(rho)?,
        violates_chsh: violates_chsh(rho)?,
        planes,
        custom,
        w_opt: w_opt_value,
        witness_window,
        witness_sum,
        u,
        negativity: negativity(rho)?,
        k: strength.k,
        q_threshold: strength.q_upper,
        q_used,
        s_nl_planes,
        s_nl_detected: ((m.sqrt() - 1.0) / 4.0).max(0.0),
        s_nl_new: strength.s_nl_new,
        bounds: strength.bounds,
    })
}

// ---------------------------------------------------------------------------
// Reproduction datasets
// ---------------------------------------------------------------------------

/// One row of the strength-cap table: the witness expectation w, the cap
/// U(w) recomputed from its formula, the value quoted alongside it, and the
/// gap between the two.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TableRow {
    pub w: f64,
    pub u_computed: f64,
    pub u_published: f64,
    pub difference: f64,
}

/// The seven-row table of strength caps U = ¾ − 1/(2√2) + √2·w at the
/// published witness expectations, including the saturating endpoint.
pub fn table_one_rows() -> Vec<TableRow> {
    let published: [(f64, f64); 7] = [
        (0.0, 0.3964),
        (-0.05, 0.3257),
        (-0.1, 0.2550),
        (-0.15, 0.1843),
        (-0.2, 0.1136),
        (-0.25, 0.0429),
        (-0.28033, 0.0001),
    ];
    published
        .iter()
        .map(|&(w, u_published)| {
            let u_computed = crate::witness::u_bound_at(w);
            TableRow { w, u_computed, u_published, difference: (u_computed - u_published).abs() }
        })
        .collect()
}

/// One point of the mixed-strength surface for the x family.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct MixedSurfaceRow {
    pub x: f64,
    pub q: f64,
    pub s_new: f64,
    pub s_new_closed: f64,
    pub difference: f64,
}

/// Closed-form pieces for the x family on the xy witness: the win-probability
/// offset (4√2·x − 2)/8 and K = (1 − 2(1+√2)x + 6x²)/(2(√(72x² − 12x + 1) − 1)).
fn x_family_closed(x: f64, q: f64) -> f64 {
    let offset = (4.0 * SQRT2 * x - 2.0) / 8.0;
    let root = (72.0 * x * x - 12.0 * x + 1.0).sqrt();
    let k = (1.0 - 2.0 * (1.0 + SQRT2) * x + 6.0 * x * x) / (2.0 * (root - 1.0));
    q * offset + (1.0 - q) * k
}

/// Mixed-strength surface over the x family's entangled range, for mixing
/// weights below every point's threshold (q up to 0.55). Each row carries the
/// component-pipeline value and its closed form.
pub fn mixed_surface_rows(x_points: usize, q_values: &[f64]) -> Result<Vec<MixedSurfaceRow>> {
    if x_points < 2 {
        return Err(Error::OutOfRange {
            context: "the surface grid needs at least two x points",
            value: x_points as f64,
        });
    }
    let (lo, hi) = (0.1668, 0.33299);
    let mut rows = Vec::with_capacity(x_points * q_values.len());
    for i in 0..x_points {
        let x = lo + (hi - lo) * i as f64 / (x_points - 1) as f64;
        let rho = named_state(NamedFamily::XFamily { x })?;
        for &q in q_values {
            if !(0.0..0.55).contains(&q) {
                return Err(Error::OutOfRange {
                    context: "surface mixing weights must lie in (0, 0.55)",
                    value: q,
                });
            }
            let s_new = crate::strength::s_nl_new(&rho, &w_plane(Plane::Xy), q)?;
            let s_new_closed = x_family_closed(x, q);
            rows.push(MixedSurfaceRow {
                x,
                q,
                s_new,
                s_new_closed,
                difference: (s_new - s_new_closed).abs(),
            });
        }
    }
    Ok(rows)
}

/// One worked-example scalar: the label, the value this library computes,
/// the value quoted for it, and the absolute gap. Rows with a large gap are
/// exactly the ones the compatibility report documents.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ExampleRow {
    pub label: &'static str,
    pub computed: f64,
    pub published: f64,
    pub difference: f64,
}

fn example_row(label: &'static str, computed: f64, published: f64) -> ExampleRow {
    ExampleRow { label, computed, published, difference: (computed - published).abs() }
}

/// Every worked-example scalar with a quoted value: the first witness
/// example, the second example's squared-witness trace, the diagonal state's
/// plane suite, the noisy family's suite and strength cap, and the window
/// endpoints of the witness-sum inequality.
pub fn worked_examples() -> Result<Vec<ExampleRow>> {
    let mut rows = Vec::new();

    let rho1 = named_state(NamedFamily::Rho1)?;
    let setting = MeasurementSetting::normalized(
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.8, 0.4, 0.447],
        [-0.4, 0.8, 0.447],
    )?;
    let kind = WitnessKind::Chsh(setting);
    let w1 = expectation(&kind.operator()?, &rho1)?;
    rows.push(example_row("rho1_witness_value", w1, -0.028));
    rows.push(example_row("rho1_strength", (-w1 / 8.0).max(0.0), 0.0035));
    rows.push(example_row("rho1_win_probability", 0.75 - w1 / 8.0, 0.7535));

    let rho2 = named_state(NamedFamily::Rho2)?;
    let setting2 = MeasurementSetting::normalized(
        [0.7, 0.5, 0.5099],
        [0.7, 0.5, 0.5099],
        [0.4, 0.4, 0.8246],
        [0.5, 0.3, 0.812404],
    )?;
    let tr_w2 = expectation(&WitnessKind::Chsh(setting2).operator()?, &rho2)?;
    rows.push(example_row("rho2_witness_value", tr_w2, 1.9845));

    let rho3 = named_state(NamedFamily::Rho3)?;
    let report3 = analyze(&rho3, &AnalysisOptions::default())?;
    rows.push(example_row("rho3_bell_xy", report3.planes[0].bell, -1.9799));
    rows.push(example_row("rho3_bell_yz", report3.planes[1].bell, -1.93747));
    rows.push(example_row("rho3_bell_xz", report3.planes[2].bell, -1.93747));
    rows.push(example_row("rho3_optimal_witness", report3.w_opt, -0.2675));
    let sum3 = report3.witness_sum.map(|(s, _)| s).unwrap_or(f64::NAN);
    rows.push(example_row("rho3_witness_sum", sum3, 11.85484));

    let rhon = named_state(NamedFamily::RhoN { a: 0.3 })?;
    let reportn = analyze(&rhon, &AnalysisOptions::default())?;
    rows.push(example_row("rhon_bell_xy", reportn.planes[0].bell, -1.41987));
    rows.push(example_row("rhon_bell_yz", reportn.planes[1].bell, -1.65416));
    rows.push(example_row("rhon_bell_xz", reportn.planes[2].bell, -1.65133));
    rows.push(example_row("rhon_optimal_witness", reportn.w_opt, -0.167667));
    rows.push(example_row("rhon_strength_cap", reportn.u.unwrap_or(f64::NAN), 0.15933));

    rows.push(example_row("witness_window_low", witness_window_low(), -0.28033));
    rows.push(example_row(
        "witness_window_high",
        crate::witness::witness_window_high(),
        0.78033,
    ));
    Ok(rows)
}
