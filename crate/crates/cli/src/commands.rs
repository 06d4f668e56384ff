use std::fs;
use std::path::Path;

use l1tv::analytic::{
    annulus_touch_delta, argmin_candidate, candidates, energies, CellOutcome, Param, Params,
    PhaseCell, WinnerReport,
};
use l1tv::oracle::{verify_problem, Tolerances};
use l1tv::shapes::{validate, Family, Problem};
use l1tv::solver::{classify_result, solve_problem, GraphOptions};

use crate::args::{EnergyArgs, PhaseArgs, SolveArgs, VerifyArgs};
use crate::output::{
    ensure_parent, graymap, num, opt, with_suffix, write_atomic, write_stdout, Table,
};
use crate::CliError;

/// Builds the problem and rejects it unless every admissibility
/// inequality holds.
fn admissible(family: Family, params: &Params) -> Result<Problem, CliError> {
    let problem = params.problem(family)?;
    validate(&problem).into_result()?;
    Ok(problem)
}

/// `annulus R=1 r=0.8 delta=0.1 lambda=10`, listing only the parameters the
/// family uses.
fn describe(family: Family, params: &Params) -> String {
    let mut s = family.to_string();
    for &p in Params::shape_params(family).iter().chain(&[Param::Lambda]) {
        if let Some(v) = params.get(p) {
            s.push_str(&format!(" {p}={v}"));
        }
    }
    s
}

/// `S3:omega`, or `S2:empty|S3:omega` on a tie.
fn winner_label(w: &WinnerReport) -> String {
    w.winners
        .iter()
        .map(|c| c.describe())
        .collect::<Vec<_>>()
        .join("|")
}

pub fn energy(args: &EnergyArgs) -> Result<(), CliError> {
    let problem = admissible(args.shape.family(), &args.shape.params())?;
    let list = energies(&problem)?;
    let winner = argmin_candidate(&list)?;

    let mut table = Table::new([
        "candidate",
        "validity",
        "perimeter",
        "fidelity_area",
        "total",
    ]);
    for e in &list {
        let t = e.terms;
        table.row([
            e.candidate.describe(),
            e.validity.label().to_string(),
            opt(t.map(|t| t.perimeter)),
            opt(t.map(|t| t.fidelity_area)),
            opt(t.map(|t| t.total)),
        ]);
    }
    table.row([
        "winner".to_string(),
        winner_label(&winner),
        String::new(),
        String::new(),
        num(winner.energy),
    ]);
    write_stdout(&table.into_bytes())
}

pub fn phase(args: &PhaseArgs) -> Result<(), CliError> {
    let family = args.shape.family();
    let fixed = args.shape.params();
    let cells = l1tv::analytic::phase_sweep(family, &fixed, &args.x, &args.y)?;
    let k = candidates(family).len();

    let mut header = vec![
        "axis1_name".to_string(),
        "axis1_value".to_string(),
        "axis2_name".to_string(),
        "axis2_value".to_string(),
    ];
    header.extend((1..=k).map(|i| format!("E_{i}")));
    header.extend((1..=k).map(|i| format!("validity_{i}")));
    header.extend(["winner".to_string(), "tie_flag".to_string()]);

    let mut table = Table::new(&header);
    for cell in &cells {
        let mut row = vec![
            args.x.param.to_string(),
            num(cell.axis1_value),
            args.y.param.to_string(),
            num(cell.axis2_value),
        ];
        match &cell.outcome {
            CellOutcome::Evaluated { energies, winner } => {
                row.extend(energies.iter().map(|e| opt(e.total())));
                row.extend(energies.iter().map(|e| e.validity.label().to_string()));
                row.push(winner_label(winner));
                row.push((winner.is_tie() as u8).to_string());
            }
            CellOutcome::Inadmissible(_) => {
                row.extend((0..k).map(|_| String::new()));
                row.extend((0..k).map(|_| "inadmissible".to_string()));
                row.push("inadmissible".to_string());
                row.push("0".to_string());
            }
        }
        table.row(&row);
    }

    let csv_path = with_suffix(&args.out, ".csv");
    ensure_parent(&csv_path)?;
    write_atomic(&csv_path, &table.into_bytes())?;

    if args.image {
        let (w, h) = (args.x.steps, args.y.steps);
        write_atomic(
            &with_suffix(&args.out, ".pgm"),
            &graymap(w, h, &winner_pixels(&cells, w, h)),
        )?;
    }

    if family == Family::Annulus {
        if let Some(bytes) = touch_table(args, &fixed) {
            write_atomic(&with_suffix(&args.out, "_touch.csv"), &bytes)?;
        } else {
            eprintln!("note: touching curve skipped, it needs fixed R and r");
        }
    }
    Ok(())
}

/// Gray level per cell: 0 inadmissible, `40 i` for a unique winner `Si`,
/// 255 for a tie. The largest second-axis value is the top row.
fn winner_pixels(cells: &[PhaseCell], width: usize, height: usize) -> Vec<u8> {
    let mut pixels = Vec::with_capacity(width * height);
    for j in (0..height).rev() {
        for cell in &cells[j * width..(j + 1) * width] {
            pixels.push(match cell.winner() {
                None => 0,
                Some(w) => match w.unique() {
                    Some(c) => 40 * c.index,
                    None => 255,
                },
            });
        }
    }
    pixels
}

/// Where the two tangent balls of the annulus opening touch, for every λ on
/// the sweep (or the fixed λ). `None` when R or r is swept or missing.
fn touch_table(args: &PhaseArgs, fixed: &Params) -> Option<Vec<u8>> {
    let swept = [args.x.param, args.y.param];
    if swept.contains(&Param::OuterRadius) || swept.contains(&Param::InnerRadius) {
        return None;
    }
    let outer = fixed.get(Param::OuterRadius)?;
    let inner = fixed.get(Param::InnerRadius)?;
    let lambdas: Vec<f64> = if args.x.param == Param::Lambda {
        args.x.values().collect()
    } else if args.y.param == Param::Lambda {
        args.y.values().collect()
    } else {
        vec![fixed.get(Param::Lambda)?]
    };

    let mut table = Table::new(["lambda", "delta_star", "residual", "root_count", "status"]);
    for lambda in lambdas {
        let row = match annulus_touch_delta(outer, inner, lambda) {
            Ok(t) => [
                num(lambda),
                num(t.delta),
                num(t.residual),
                t.roots.len().to_string(),
                "ok".into(),
            ],
            Err(l1tv::Error::Inadmissible(_)) => [
                num(lambda),
                String::new(),
                String::new(),
                "0".into(),
                "inadmissible".into(),
            ],
            Err(_) => [
                num(lambda),
                String::new(),
                String::new(),
                "0".into(),
                "no-root".into(),
            ],
        };
        table.row(row);
    }
    Some(table.into_bytes())
}

/// One problem per non-empty line: `family=annulus R=1 r=0.8 ...`.
fn read_samples(path: &Path) -> Result<Vec<(Family, Params)>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| CliError::Usage(format!("{}:{}: {msg}", path.display(), n + 1));
        let mut family = None;
        let mut params = Params::new();
        for token in line.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got '{token}'")))?;
            if key == "family" {
                family = Some(value.parse::<Family>().map_err(|e| bad(e.to_string()))?);
            } else {
                let p: Param = key.parse().map_err(|e: l1tv::Error| bad(e.to_string()))?;
                let v: f64 = value
                    .parse()
                    .map_err(|_| bad(format!("'{value}' is not a number")))?;
                params.set(p, v);
            }
        }
        out.push((family.ok_or_else(|| bad("missing family=".into()))?, params));
    }
    Ok(out)
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let problems = match &args.samples {
        Some(path) => read_samples(path)?,
        None => vec![(args.shape.family(), args.shape.params())],
    };
    let tol = Tolerances {
        angle: args.angle_tol,
        energy: args.energy_tol,
        raster: args.raster_tol,
    };

    let mut table = Table::new([
        "problem",
        "check",
        "analytic",
        "oracle",
        "error",
        "tolerance",
        "status",
    ]);
    let (mut total, mut failed) = (0, 0);
    for (family, params) in &problems {
        let problem = params.problem(*family)?;
        let name = describe(*family, params);
        for check in verify_problem(&problem, args.resolution, &tol)? {
            total += 1;
            failed += !check.status.passed() as usize;
            table.row([
                name.clone(),
                check.name,
                num(check.analytic),
                num(check.oracle),
                num(check.error),
                num(check.tolerance),
                check.status.label().to_string(),
            ]);
        }
    }

    let bytes = table.into_bytes();
    match &args.out {
        Some(path) => {
            ensure_parent(path)?;
            write_atomic(path, &bytes)?;
        }
        None => write_stdout(&bytes)?,
    }
    if failed > 0 {
        return Err(CliError::VerifyFailed { failed, total });
    }
    Ok(())
}

pub fn solve(args: &SolveArgs) -> Result<(), CliError> {
    let family = args.shape.family();
    let problem = admissible(family, &args.shape.params())?;
    let options = GraphOptions {
        neighborhood: args.stencil,
        memory_budget: args.memory_budget,
    };
    let result = solve_problem(&problem, args.resolution, options)?;
    let class = classify_result(&result, &problem.shape, problem.lambda)?;
    let winner = argmin_candidate(&energies(&problem)?)?;

    let mut table = Table::new([
        "family",
        "lambda",
        "resolution",
        "stencil",
        "energy_discrete",
        "maxflow",
        "best_candidate",
        "best_energy",
        "classification",
        "symmetric_difference_fraction",
        "pushes",
        "relabels",
        "global_updates",
    ]);
    table.row([
        family.to_string(),
        num(problem.lambda),
        args.resolution.to_string(),
        args.stencil.to_string(),
        num(result.energy_discrete),
        num(result.maxflow),
        winner_label(&winner),
        num(winner.energy),
        class.label(),
        num(class.fraction),
        result.work.pushes.to_string(),
        result.work.relabels.to_string(),
        result.work.global_updates.to_string(),
    ]);
    let summary = table.into_bytes();

    let csv_path = with_suffix(&args.out, ".csv");
    ensure_parent(&csv_path)?;
    write_atomic(&with_suffix(&args.out, ".pgm"), &result.mask.to_pgm())?;
    write_atomic(&csv_path, &summary)?;
    write_stdout(&summary)?;

    if class.novel {
        let nearest = class
            .nearest
            .map_or_else(|| "none".to_string(), |c| c.describe());
        return Err(CliError::Novel(format!(
            "nearest candidate {nearest} differs in {:.2}% of Ω",
            100.0 * class.fraction
        )));
    }
    Ok(())
}
