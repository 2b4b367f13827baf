use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;
use swkb_core::oracle::{numerical_energies, solve_spectrum, OracleConfig};
use swkb_core::report::SWKB_COLUMNS;
use swkb_core::shape_invariance::{
    classify, grid, residual_pde1, residual_pde2, residual_sic, standard_a_range, ResidualReport,
};
use swkb_core::spectrum::SpectrumModel;
use swkb_core::superpotential::catalog_document;
use swkb_core::swkb::{integrand_samples, swkb_integral_at_energy, QuadratureConfig, SwkbResult};
use swkb_core::{catalog, catalog_entry, DomainInterval, SuperpotentialSpec};

use crate::args::{
    CatalogAction, Cli, Command, Format, OracleArgs, QuadratureArgs, SiCheckArgs, SpectrumArgs,
    SweepArgs, VerifyArgs,
};
use crate::error::CliError;
use crate::report::{parse_rendered, Cell, Report, RunManifest};

/// What a command produced: an optional report, where it goes, and whether
/// every check passed.
pub struct Outcome {
    pub report: Option<Report>,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Plain output for commands without a report.
    pub text: Option<String>,
    pub summary: String,
    pub passed: bool,
}

impl Outcome {
    fn text(text: String) -> Self {
        Self { report: None, format: Format::Csv, out: None, text: Some(text), summary: String::new(), passed: true }
    }
}

/// `args` is the command line after the program name, recorded in the
/// manifest. Replays pass `side_effects = false` so no extra files are
/// written.
pub fn run(cli: Cli, args: &[String], side_effects: bool) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Catalog { action: CatalogAction::List { json, name } } => catalog_list(json, name.as_deref()),
        Command::Verify(a) => verify(a, args, side_effects),
        Command::SiCheck(a) => si_check(a, args),
        Command::Spectrum(a) => spectrum(a, args),
        Command::Sweep(a) => sweep(a, args),
        Command::OracleCompare(a) => oracle_compare(a, args),
        Command::Replay { report } => replay(&report),
    }
}

fn catalog_list(as_json: bool, name: Option<&str>) -> Result<Outcome, CliError> {
    let entries = match name {
        Some(n) => vec![catalog_entry(n).map_err(|_| CliError::invalid(format!("no catalog entry named `{n}`")))?],
        None => catalog(),
    };
    if as_json {
        let mut doc = catalog_document();
        if name.is_some() {
            let wanted: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
            if let Some(list) = doc.get_mut("entries").and_then(|v| v.as_array_mut()) {
                list.retain(|e| e["name"].as_str().is_some_and(|n| wanted.contains(&n)));
            }
        }
        return Ok(Outcome::text(serde_json::to_string_pretty(&doc).map_err(CliError::io)? + "\n"));
    }
    let mut out = String::new();
    for s in &entries {
        let constants: Vec<String> = s.constants.entries().iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!("{:<20} {:<16} a={} hbar={} {}\n", s.name, s.si_class, s.a, s.hbar, constants.join(" ")));
        out.push_str(&format!("{:<20} domain {}\n", "", s.domain));
        if s.perturbation_amplitude != 0.0 {
            out.push_str(&format!("{:<20} amplitude {}\n", "", s.perturbation_amplitude));
        }
        for c in s.constraint_expressions() {
            out.push_str(&format!("{:<20} requires {c}\n", ""));
        }
    }
    Ok(Outcome::text(out))
}

fn parse_overrides(set: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    for item in set {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::invalid(format!("--set expects KEY=VALUE, got `{item}`")))?;
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::invalid(format!("--set {k}: `{v}` is not a number")))?;
        out.insert(k.trim().to_string(), value);
    }
    Ok(out)
}

fn load_spec(name: &str, set: &[String]) -> Result<(SuperpotentialSpec, BTreeMap<String, f64>), CliError> {
    let overrides = parse_overrides(set)?;
    let spec = catalog_entry(name)?.with_overrides(overrides.iter().map(|(k, v)| (k.as_str(), *v)))?;
    Ok((spec, overrides))
}

fn parse_pair(text: &str, what: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::invalid(format!("{what} expects LO,HI, got `{text}`"));
    let (lo, hi) = text.split_once(',').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(CliError::invalid(format!("{what}: need finite LO < HI, got `{text}`")));
    }
    Ok((lo, hi))
}

fn parse_levels(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::invalid(format!("--n expects A..B or N, got `{text}`"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let n = text.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(CliError::invalid(format!("--n: empty range {lo}..{hi}")));
    }
    Ok((lo, hi))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn quadrature_config(q: &QuadratureArgs) -> Result<QuadratureConfig, CliError> {
    let mut cfg = match &q.config {
        Some(path) => read_json::<QuadratureConfig>(path)?,
        None => QuadratureConfig::default(),
    };
    if let Some(m) = q.method {
        cfg.method = m.into();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn check_tolerance(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::invalid(format!("tolerance must be > 0, got {tol}")))
    }
}

/// E_n for n = 0..=top: algebraic where a spectrum exists, otherwise the
/// eigensolver's H- levels.
fn energies(spec: &SuperpotentialSpec, top: usize) -> Result<(Vec<f64>, &'static str), CliError> {
    if spec.si_class.is_conventional() {
        let model = SpectrumModel::from_spec(spec)?;
        Ok(((0..=top).map(|n| model.energy(n)).collect::<Result<_, _>>()?, "algebraic"))
    } else {
        Ok((numerical_energies(spec, top + 1)?, "eigensolver"))
    }
}

fn swkb_cells(spec: &SuperpotentialSpec, r: &SwkbResult) -> Vec<Cell> {
    vec![
        spec.name.as_str().into(),
        spec.si_class.to_string().into(),
        r.n.into(),
        r.energy.into(),
        r.turning.x1.into(),
        r.turning.x2.into(),
        r.integral.into(),
        r.residual.into(),
        r.converged.into(),
    ]
}

fn verify(a: VerifyArgs, args: &[String], side_effects: bool) -> Result<Outcome, CliError> {
    let (spec, overrides) = load_spec(&a.spec.potential, &a.spec.set)?;
    let (lo, hi) = parse_levels(&a.n)?;
    let cfg = quadrature_config(&a.quadrature)?;
    check_tolerance(a.tolerance)?;
    let (levels, source) = energies(&spec, hi)?;

    let results: Vec<SwkbResult> = (lo..=hi)
        .into_par_iter()
        .map(|n| swkb_integral_at_energy(&spec, n, levels[n], &cfg))
        .collect::<Result<_, _>>()?;

    let mut manifest = RunManifest::new("verify", args);
    manifest.spec_overrides = overrides;
    manifest.config = serde_json::to_value(cfg).map_err(CliError::io)?;
    let mut report = Report::new(manifest, &SWKB_COLUMNS);
    let mut worst: f64 = 0.0;
    let mut passed = true;
    for r in &results {
        report.push(swkb_cells(&spec, r));
        let scaled = r.residual.abs() / (r.n as f64 * PI * spec.hbar).max(spec.hbar);
        worst = worst.max(scaled);
        passed &= r.converged && scaled <= a.tolerance;
    }
    report.detail = Some(json!({ "energy_source": source, "tolerance": a.tolerance, "results": results }));

    if let (Some(path), true) = (&a.plot_data, side_effects) {
        write_plot_data(path, &spec, &results, &cfg)?;
    }
    let max_abs = results.iter().map(|r| r.residual.abs()).fold(0.0, f64::max);
    Ok(Outcome {
        report: Some(report),
        format: a.output.format,
        out: a.output.out,
        text: None,
        summary: format!(
            "verify {}: n = {lo}..{hi}, energies from {source}, max |I - n*pi*hbar| = {max_abs:.3e}, \
             max scaled residual = {worst:.3e} (tolerance {:e}): {}",
            spec.name,
            a.tolerance,
            verdict(passed)
        ),
        passed,
    })
}

fn write_plot_data(path: &Path, spec: &SuperpotentialSpec, results: &[SwkbResult], cfg: &QuadratureConfig) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(CliError::io)?;
    w.write_record(["n", "x", "integrand"]).map_err(CliError::io)?;
    for r in results {
        for (x, y) in integrand_samples(spec, r.energy, 201, cfg)? {
            w.write_record([r.n.to_string(), swkb_core::report::fmt_real(x), swkb_core::report::fmt_real(y)])
                .map_err(CliError::io)?;
        }
    }
    w.flush().map_err(CliError::io)
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn si_check(a: SiCheckArgs, args: &[String]) -> Result<Outcome, CliError> {
    let (spec, overrides) = load_spec(&a.spec.potential, &a.spec.set)?;
    check_tolerance(a.tolerance)?;
    let x_range = match &a.x_range {
        Some(t) => parse_pair(t, "--x-range")?,
        None => spec.sample_window(),
    };
    let a_range = match &a.a_range {
        Some(t) => parse_pair(t, "--a-range")?,
        None => standard_a_range(&spec),
    };
    let points = grid(&spec, x_range, a_range, a.nx, a.na)?;
    let checks: Vec<(&str, ResidualReport)> = vec![
        ("shape_invariance", residual_sic(&spec, &points)?),
        ("pde1", residual_pde1(&spec, &points)?),
        ("pde2", residual_pde2(&spec, &points)?),
    ];
    let classification = classify(&spec);

    let mut manifest = RunManifest::new("si-check", args);
    manifest.spec_overrides = overrides;
    manifest.config = json!({ "x_range": x_range, "a_range": a_range, "nx": a.nx, "na": a.na, "tolerance": a.tolerance });
    let mut report = Report::new(
        manifest,
        &["name", "check", "max_abs_residual", "rms_residual", "sample_count", "worst_x", "worst_a"],
    );
    let mut passed = true;
    let mut worst: f64 = 0.0;
    for (check, r) in &checks {
        report.push(vec![
            spec.name.as_str().into(),
            (*check).into(),
            r.max_abs_residual.into(),
            r.rms_residual.into(),
            r.sample_count.into(),
            r.worst_point.x.into(),
            r.worst_point.a.into(),
        ]);
        passed &= r.max_abs_residual <= a.tolerance;
        worst = worst.max(r.max_abs_residual);
    }
    let reports: BTreeMap<&str, &ResidualReport> = checks.iter().map(|(k, r)| (*k, r)).collect();
    report.detail = Some(json!({ "classification": classification, "reports": reports }));
    Ok(Outcome {
        report: Some(report),
        format: a.output.format,
        out: a.output.out,
        text: None,
        summary: format!(
            "si-check {}: {} points, max residual {worst:.3e} (tolerance {:e}), classified {}: {}",
            spec.name,
            points.len(),
            a.tolerance,
            classification.class,
            verdict(passed)
        ),
        passed,
    })
}

fn spectrum(a: SpectrumArgs, args: &[String]) -> Result<Outcome, CliError> {
    let mut overrides = BTreeMap::new();
    let specs = match &a.potential {
        Some(name) => {
            let (spec, o) = load_spec(name, &a.set)?;
            overrides = o;
            vec![spec]
        }
        None => catalog().into_iter().filter(|s| s.si_class.is_conventional()).collect(),
    };
    let mut manifest = RunManifest::new("spectrum", args);
    manifest.spec_overrides = overrides;
    manifest.config = json!({ "n_max": a.n_max });
    let mut report = Report::new(manifest, &["name", "class", "n", "E_n", "dE_dhbar"]);
    for spec in &specs {
        let model = SpectrumModel::from_spec(spec)?;
        let top = match (a.n_max, model.bound_limit) {
            (Some(n), Some(limit)) => n.min(limit),
            (Some(n), None) => n,
            (None, _) => model.n_max,
        };
        for n in 0..=top {
            report.push(vec![
                spec.name.as_str().into(),
                spec.si_class.to_string().into(),
                n.into(),
                model.energy(n)?.into(),
                model.de_dhbar(n)?.into(),
            ]);
        }
    }
    let rows = report.rows.len();
    Ok(Outcome {
        report: Some(report),
        format: a.output.format,
        out: a.output.out,
        text: None,
        summary: format!("spectrum: {rows} levels over {} entries", specs.len()),
        passed: true,
    })
}

fn sweep(a: SweepArgs, args: &[String]) -> Result<Outcome, CliError> {
    let (spec, overrides) = load_spec(&a.spec.potential, &a.spec.set)?;
    let cfg = quadrature_config(&a.quadrature)?;
    check_tolerance(a.tolerance)?;
    if a.hbar.is_empty() {
        return Err(CliError::invalid("--hbar needs at least one value"));
    }
    let specs: Vec<SuperpotentialSpec> = a.hbar.iter().map(|&h| spec.with_hbar(h)).collect::<Result<_, _>>()?;
    let n = a.n;
    let results: Vec<SwkbResult> = specs
        .par_iter()
        .map(|s| -> Result<SwkbResult, CliError> {
            let (levels, _) = energies(s, n)?;
            Ok(swkb_integral_at_energy(s, n, levels[n], &cfg)?)
        })
        .collect::<Result<_, _>>()?;

    let mut manifest = RunManifest::new("sweep", args);
    manifest.spec_overrides = overrides;
    manifest.config = serde_json::to_value(cfg).map_err(CliError::io)?;
    let mut report = Report::new(manifest, &["name", "n", "hbar", "integral", "integral_over_hbar", "residual"]);
    let ratios: Vec<f64> = results.iter().zip(&specs).map(|(r, s)| r.integral / s.hbar).collect();
    for ((r, s), ratio) in results.iter().zip(&specs).zip(&ratios) {
        report.push(vec![
            spec.name.as_str().into(),
            n.into(),
            s.hbar.into(),
            r.integral.into(),
            (*ratio).into(),
            r.residual.into(),
        ]);
    }
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = (hi - lo) / hi.abs().max(1.0);
    let passed = spread <= a.tolerance && results.iter().all(|r| r.converged);
    report.detail = Some(json!({ "relative_spread": spread, "tolerance": a.tolerance, "results": results }));
    Ok(Outcome {
        report: Some(report),
        format: a.output.format,
        out: a.output.out,
        text: None,
        summary: format!(
            "sweep {} n = {n}: I/hbar spread {spread:.3e} over {} values of hbar (tolerance {:e}): {}",
            spec.name,
            specs.len(),
            a.tolerance,
            verdict(passed)
        ),
        passed,
    })
}

/// Optional oracle settings read from a JSON file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OracleFile {
    grid_points: Option<usize>,
    #[serde(rename = "box")]
    box_: Option<(f64, f64)>,
    convergence_rel_tol: Option<f64>,
    max_refinements: Option<usize>,
}

fn oracle_box(lo: f64, hi: f64) -> Result<DomainInterval, CliError> {
    DomainInterval::new(lo, hi, true, true).map_err(|e| CliError::invalid(e.to_string()))
}

fn oracle_compare(a: OracleArgs, args: &[String]) -> Result<Outcome, CliError> {
    let (spec, overrides) = load_spec(&a.spec.potential, &a.spec.set)?;
    let mut cfg = OracleConfig::for_spec(&spec, a.eigen_count);
    if let Some(path) = &a.config {
        let file: OracleFile = read_json(path)?;
        if let Some(g) = file.grid_points {
            cfg.grid_points = g;
        }
        if let Some((lo, hi)) = file.box_ {
            cfg.box_ = oracle_box(lo, hi)?;
        }
        if let Some(t) = file.convergence_rel_tol {
            cfg.convergence_rel_tol = t;
        }
        if let Some(m) = file.max_refinements {
            cfg.max_refinements = m;
        }
    }
    if let Some(b) = &a.box_ {
        let (lo, hi) = parse_pair(b, "--box")?;
        cfg.box_ = oracle_box(lo, hi)?;
    }
    if let Some(g) = a.grid_points {
        cfg.grid_points = g;
    }
    let tolerance = a.tolerance.unwrap_or_else(|| spec.oracle_tolerance());
    check_tolerance(tolerance)?;
    cfg.validate(&spec)?;

    let result = solve_spectrum(&spec, a.sign.into(), &cfg)?;
    let mut manifest = RunManifest::new("oracle-compare", args);
    manifest.spec_overrides = overrides;
    manifest.config = serde_json::to_value(&cfg).map_err(CliError::io)?;
    let mut report = Report::new(
        manifest,
        &["name", "sign", "n", "numerical", "algebraic", "rel_deviation", "edge_decay"],
    );
    for (n, e) in result.eigenvalues.iter().enumerate() {
        let alg = result.algebraic.get(n).copied();
        report.push(vec![
            spec.name.as_str().into(),
            result.sign.to_string().into(),
            n.into(),
            (*e).into(),
            alg.into(),
            alg.map(|v| (e - v).abs() / v.abs().max(spec.hbar)).into(),
            result.edge_decay[n].into(),
        ]);
    }
    let passed = result.max_rel_deviation.is_none_or(|d| d <= tolerance);
    let summary = format!(
        "oracle-compare {} H{}: {} levels on {} cells, max relative deviation {} (tolerance {tolerance:e}): {}",
        spec.name,
        if result.sign == swkb_core::PartnerSign::Minus { "-" } else { "+" },
        result.eigenvalues.len(),
        result.grid_points_used,
        result.max_rel_deviation.map_or("n/a".to_string(), |d| format!("{d:.3e}")),
        verdict(passed)
    );
    report.detail = Some(serde_json::to_value(&result).map_err(CliError::io)?);
    Ok(Outcome { report: Some(report), format: a.output.format, out: a.output.out, text: None, summary, passed })
}

fn replay(path: &Path) -> Result<Outcome, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    let (manifest, format, stored) = parse_rendered(&text)?;
    let argv = std::iter::once("swkb-lab".to_string()).chain(manifest.args.iter().cloned());
    let cli = <Cli as clap::Parser>::try_parse_from(argv)
        .map_err(|e| CliError::invalid(format!("recorded arguments no longer parse: {e}")))?;
    if matches!(cli.command, Command::Replay { .. } | Command::Catalog { .. }) {
        return Err(CliError::invalid("report was not produced by a replayable command"));
    }
    let outcome = run(cli, &manifest.args, false)?;
    let fresh = outcome.report.ok_or_else(|| CliError::invalid("recorded command produced no report"))?.body(format)?;
    let identical = fresh == stored;
    let summary = format!(
        "replay {} ({} {}): body {}",
        path.display(),
        manifest.command,
        manifest.timestamp,
        if identical { "identical" } else { "differs" }
    );
    Ok(Outcome { report: None, format, out: None, text: None, summary, passed: identical })
}
