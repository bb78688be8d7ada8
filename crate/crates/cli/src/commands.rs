//! The four subcommand implementations. All numeric work lives in the
//! library; this module only wires inputs to reports and reports to files.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use nonlocality::analysis::{mixed_surface_rows, table_one_rows, worked_examples};
use nonlocality::analyze;
use nonlocality::bell::optimize_settings;
use nonlocality::compat::compat_report;
use nonlocality::game::simulate;
use nonlocality::states::{named_state, NamedFamily};
use nonlocality::tripartite::{default_grid, family_curves, CurveFamily};
use nonlocality::{AnalysisOptions, AnalysisReport};

use crate::render::{cell, csv_document, emit, sig6, write_file};
use crate::{input, AnalyzeArgs, Failure, Format, GameArgs, ReproduceArgs, ScanArgs, Target};

fn yes_no(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::input(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Bound-check verdicts become consistency failures (exit code 2) so a state
/// that breaks a promised inequality is loud even in batch runs.
fn failed_bounds(report: &AnalysisReport, context: &str) -> Vec<String> {
    report
        .bounds
        .iter()
        .filter(|b| !b.passed)
        .map(|b| format!("{context}: bound `{}` failed ({} vs {})", b.label, b.lhs, b.rhs))
        .collect()
}

fn text_report(source: &str, report: &AnalysisReport) -> String {
    let mut out = String::new();
    let push = |out: &mut String, line: String| {
        out.push_str(&line);
        out.push('\n');
    };
    push(&mut out, format!("state            : {source}"));
    push(
        &mut out,
        format!(
            "M                = {}   (violates CHSH: {}, max <B> = {})",
            sig6(report.m),
            yes_no(report.violates_chsh),
            sig6(report.max_bell)
        ),
    );
    for entry in report.planes.iter().chain(report.custom.iter()) {
        push(
            &mut out,
            format!(
                "{:<17}: <B> = {}  Tr[W rho] = {}  P = {}  detected = {}",
                entry.label,
                sig6(entry.bell),
                sig6(entry.witness),
                sig6(entry.p_max),
                yes_no(entry.detected)
            ),
        );
    }
    push(&mut out, format!("Tr[W_opt rho]    = {}", sig6(report.w_opt)));
    if let Some((value, inside)) = report.witness_window {
        push(
            &mut out,
            format!("witness window   = {} (inside: {})", sig6(value), yes_no(inside)),
        );
    }
    if let Some((value, inside)) = report.witness_sum {
        push(
            &mut out,
            format!("witness sum      = {} (inside: {})", sig6(value), yes_no(inside)),
        );
    }
    if let Some(u) = report.u {
        push(&mut out, format!("strength cap U   = {}", sig6(u)));
    }
    push(&mut out, format!("negativity       = {}", sig6(report.negativity)));
    if let Some(k) = report.k {
        push(&mut out, format!("K quantity       = {}", sig6(k)));
    }
    if let Some(q) = report.q_threshold {
        push(&mut out, format!("q threshold      = {}", sig6(q)));
    }
    if let Some(q) = report.q_used {
        push(&mut out, format!("q used           = {}", sig6(q)));
    }
    push(&mut out, format!("S_NL (planes)    = {}", sig6(report.s_nl_planes)));
    push(&mut out, format!("S_NL (detected)  = {}", sig6(report.s_nl_detected)));
    if let Some(s) = report.s_nl_new {
        push(&mut out, format!("S_NL (mixed)     = {}", sig6(s)));
    }
    push(&mut out, "bounds:".to_string());
    for bound in &report.bounds {
        push(
            &mut out,
            format!(
                "  {:<34} {}  vs  {}  -> {}",
                bound.label,
                sig6(bound.lhs),
                sig6(bound.rhs),
                if bound.passed { "ok" } else { "FAILED" }
            ),
        );
    }
    out
}

pub fn analyze_command(args: &AnalyzeArgs) -> Result<(), Failure> {
    let rho = input::load_state(&args.state)?;
    let mut options = AnalysisOptions::default();
    if let Some(plane) = input::parse_plane(args.plane.as_deref())? {
        options.plane = plane;
    }
    if let Some(path) = &args.setting {
        options.setting = Some(input::load_setting(path)?);
    }
    options.q = args.q;

    let report = analyze(&rho, &options)?;
    let document = match args.format {
        Format::Json => to_json(&report)?,
        Format::Text => text_report(&args.state, &report),
    };
    emit(args.out.as_deref(), &document)?;

    let problems = failed_bounds(&report, &args.state);
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Tolerance(problems))
    }
}

pub fn game(args: &GameArgs) -> Result<(), Failure> {
    let rho = input::load_state(&args.state)?;
    let setting = match &args.setting {
        Some(path) => input::load_setting(path)?,
        None => optimize_settings(&rho)?.0,
    };
    let report = simulate(&rho, &setting, args.rounds, args.seed)?;
    let sigma = (report.analytic * (1.0 - report.analytic) / report.rounds as f64).sqrt();
    let z = if sigma > 0.0 { (report.win_rate - report.analytic) / sigma } else { 0.0 };

    match args.format {
        Format::Json => {
            #[derive(serde::Serialize)]
            struct GameDocument {
                rounds: u64,
                wins: u64,
                win_rate: f64,
                analytic: f64,
                z_score: f64,
            }
            let doc = GameDocument {
                rounds: report.rounds,
                wins: report.wins,
                win_rate: report.win_rate,
                analytic: report.analytic,
                z_score: z,
            };
            print!("{}", to_json(&doc)?);
        }
        Format::Text => {
            println!("rounds    = {}", report.rounds);
            println!("wins      = {}", report.wins);
            println!("empirical = {}", sig6(report.win_rate));
            println!("analytic  = {}", sig6(report.analytic));
            println!("z-score   = {}", sig6(z));
        }
    }

    // A seeded run sitting six sigmas out means the sampler and the closed
    // form disagree, not bad luck.
    if z.abs() >= 6.0 {
        return Err(Failure::Tolerance(vec![format!(
            "empirical rate {} is {} sigma from analytic {}",
            report.win_rate,
            sig6(z.abs()),
            report.analytic
        )]));
    }
    Ok(())
}

pub fn scan(args: &ScanArgs) -> Result<(), Failure> {
    if args.points < 2 {
        return Err(Failure::input("--points must be at least 2"));
    }
    if !args.from.is_finite() || !args.to.is_finite() || args.from >= args.to {
        return Err(Failure::input("--from must be strictly below --to"));
    }
    let plane = input::parse_plane(args.plane.as_deref())?;
    // Validate the family tag and both endpoints before spawning workers.
    let probe = NamedFamily::parse(&args.family, Some(args.from))?;
    if probe.parameter().is_none() {
        return Err(Failure::input(format!(
            "family `{}` takes no parameter; nothing to scan",
            args.family
        )));
    }
    NamedFamily::parse(&args.family, Some(args.to))?;

    let step = (args.to - args.from) / (args.points - 1) as f64;
    let grid: Vec<f64> = (0..args.points).map(|i| args.from + step * i as f64).collect();

    let mut options = AnalysisOptions::default();
    if let Some(plane) = plane {
        options.plane = plane;
    }
    options.q = args.q;

    // Grid points are independent; workers pull indices from a shared cursor
    // and deposit rows into per-index slots, so the output order is the grid
    // order no matter which worker finishes first.
    type Slot = Option<Result<(Vec<String>, bool), nonlocality::Error>>;
    let slots: Mutex<Vec<Slot>> = Mutex::new(vec![None; grid.len()]);
    let cursor = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(grid.len());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let index = cursor.fetch_add(1, Ordering::Relaxed);
                if index >= grid.len() {
                    break;
                }
                let parameter = grid[index];
                let outcome = scan_point(&args.family, parameter, &options);
                slots.lock().unwrap()[index] = Some(outcome);
            });
        }
    });

    let mut rows = Vec::with_capacity(grid.len());
    let mut problems = Vec::new();
    for (index, slot) in slots.into_inner().unwrap().into_iter().enumerate() {
        match slot.expect("every grid index is visited") {
            Err(e) => return Err(Failure::input(format!("grid point {}: {e}", grid[index]))),
            Ok((row, bounds_ok)) => {
                if !bounds_ok {
                    problems.push(format!("grid point {}: a bound check failed", grid[index]));
                }
                rows.push(row);
            }
        }
    }

    let header = [
        "parameter",
        "m",
        "max_bell",
        "violates_chsh",
        "bell_xy",
        "bell_yz",
        "bell_xz",
        "witness_xy",
        "witness_yz",
        "witness_xz",
        "p_xy",
        "p_yz",
        "p_xz",
        "w_opt",
        "negativity",
        "k",
        "q_threshold",
        "s_nl_planes",
        "s_nl_detected",
        "s_nl_new",
        "bounds_ok",
    ];
    emit(args.out.as_deref(), &csv_document(&header, &rows))?;

    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Tolerance(problems))
    }
}

fn scan_point(
    family: &str,
    parameter: f64,
    options: &AnalysisOptions,
) -> Result<(Vec<String>, bool), nonlocality::Error> {
    let rho = named_state(NamedFamily::parse(family, Some(parameter))?)?;
    let report = analyze(&rho, options)?;
    let p = &report.planes;
    let row = vec![
        format!("{parameter}"),
        format!("{}", report.m),
        format!("{}", report.max_bell),
        format!("{}", report.violates_chsh),
        format!("{}", p[0].bell),
        format!("{}", p[1].bell),
        format!("{}", p[2].bell),
        format!("{}", p[0].witness),
        format!("{}", p[1].witness),
        format!("{}", p[2].witness),
        format!("{}", p[0].p_max),
        format!("{}", p[1].p_max),
        format!("{}", p[2].p_max),
        format!("{}", report.w_opt),
        format!("{}", report.negativity),
        cell(report.k),
        cell(report.q_threshold),
        format!("{}", report.s_nl_planes),
        format!("{}", report.s_nl_detected),
        cell(report.s_nl_new),
        format!("{}", report.all_bounds_hold()),
    ];
    Ok((row, report.all_bounds_hold()))
}

pub fn reproduce(args: &ReproduceArgs) -> Result<(), Failure> {
    std::fs::create_dir_all(&args.out)
        .map_err(|e| Failure::input(format!("cannot create `{}`: {e}", args.out.display())))?;
    let mut problems = Vec::new();

    match args.target {
        Target::Table1 => {
            let rows = table_one_rows();
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        format!("{}", r.w),
                        format!("{}", r.u_computed),
                        format!("{}", r.u_published),
                        format!("{}", r.difference),
                    ]
                })
                .collect();
            for row in &rows {
                if row.difference >= 5e-4 {
                    problems.push(format!(
                        "table1: U({}) = {} drifts from quoted {}",
                        row.w, row.u_computed, row.u_published
                    ));
                }
            }
            let path = args.out.join("table1.csv");
            write_file(
                &path,
                &csv_document(&["w", "u_computed", "u_published", "difference"], &cells),
            )?;
            announce(&path);
        }
        Target::Fig1 => {
            let rows = mixed_surface_rows(25, &[0.1, 0.2, 0.3, 0.4, 0.5])?;
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        format!("{}", r.x),
                        format!("{}", r.q),
                        format!("{}", r.s_new),
                        format!("{}", r.s_new_closed),
                        format!("{}", r.difference),
                    ]
                })
                .collect();
            for row in &rows {
                if row.difference >= 1e-9 {
                    problems.push(format!(
                        "fig1: surface point (x = {}, q = {}) drifts by {}",
                        row.x, row.q, row.difference
                    ));
                }
            }
            let path = args.out.join("fig1.csv");
            write_file(
                &path,
                &csv_document(&["x", "q", "s_new", "s_new_closed", "difference"], &cells),
            )?;
            announce(&path);
        }
        Target::Fig2 => {
            reproduce_curve(CurveFamily::MsXy, 23, &args.out.join("fig2.csv"), &mut problems)?;
        }
        Target::Fig3 => {
            reproduce_curve(CurveFamily::MsYz, 20, &args.out.join("fig3.csv"), &mut problems)?;
        }
        Target::Examples => {
            let rows = worked_examples()?;
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.label.to_string(),
                        format!("{}", r.computed),
                        format!("{}", r.published),
                        format!("{}", r.difference),
                        compat_reference(r.label).unwrap_or_default().to_string(),
                    ]
                })
                .collect();
            for row in &rows {
                if row.difference >= 1e-3 && compat_reference(row.label).is_none() {
                    problems.push(format!(
                        "examples: `{}` computed {} vs quoted {}",
                        row.label, row.computed, row.published
                    ));
                }
            }
            let path = args.out.join("examples.csv");
            write_file(
                &path,
                &csv_document(
                    &["label", "computed", "published", "difference", "compat_ref"],
                    &cells,
                ),
            )?;
            announce(&path);
        }
        Target::Compat => {
            let report = compat_report()?;
            let json_path = args.out.join("compat.json");
            write_file(&json_path, &to_json(&report)?)?;
            announce(&json_path);
            let mut text = String::new();
            for entry in &report {
                text.push_str(&format!("{}: {}\n", entry.id, entry.title));
                text.push_str(&format!("  quoted   = {}\n", entry.published));
                text.push_str(&format!("  computed = {}\n", entry.computed));
                text.push_str(&format!("  {}\n\n", entry.details));
            }
            let text_path = args.out.join("compat.txt");
            write_file(&text_path, &text)?;
            announce(&text_path);
        }
    }

    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Tolerance(problems))
    }
}

fn reproduce_curve(
    family: CurveFamily,
    points: usize,
    path: &Path,
    problems: &mut Vec<String>,
) -> Result<(), Failure> {
    let grid = default_grid(family, points)?;
    let rows = family_curves(family, &grid)?;
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                format!("{}", r.parameter),
                format!("{}", r.s_value),
                format!("{}", r.s_closed),
                format!("{}", r.sv_seesaw),
                format!("{}", r.sv_bound),
                format!("{}", r.sv_closed),
                format!("{}", r.difference),
            ]
        })
        .collect();
    let label = family.label();
    for row in &rows {
        if (row.s_value - row.s_closed).abs() >= 1e-9 {
            problems.push(format!(
                "{label}: strength at {} drifts from its closed form",
                row.parameter
            ));
        }
        if row.sv_seesaw <= 4.0 {
            problems.push(format!(
                "{label}: hybrid threshold not beaten at {} ({})",
                row.parameter, row.sv_seesaw
            ));
        }
        if row.sv_seesaw > row.sv_bound + 1e-6 {
            problems.push(format!(
                "{label}: see-saw {} exceeds the singular-value cap {}",
                row.sv_seesaw, row.sv_bound
            ));
        }
        if row.difference >= 1e-3 {
            problems.push(format!(
                "{label}: companion value at {} drifts by {}",
                row.parameter, row.difference
            ));
        }
    }
    write_file(
        path,
        &csv_document(
            &["parameter", "s_value", "s_closed", "sv_seesaw", "sv_bound", "sv_closed", "difference"],
            &cells,
        ),
    )?;
    announce(path);
    Ok(())
}

fn announce(path: &Path) {
    println!("wrote {}", path.display());
}

/// Worked rows whose quoted value is a documented discrepancy. They appear in
/// the dataset with the full difference but point at the compatibility report
/// instead of tripping the strict gate, which is reserved for drifts the
/// library has no explanation for.
fn compat_reference(label: &str) -> Option<&'static str> {
    match label {
        "rho2_witness_value" => Some("second-example-witness-trace"),
        _ => None,
    }
}
