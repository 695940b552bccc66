use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use realdw::cohomology::{cohomology_classes, is_twisted_cocycle, CocycleJson, TwistedCochain};
use realdw::cyclotomic::Cyclotomic;
use realdw::groups::{enumerate_gradings, group_by_name, GradedGroup};
use realdw::moduli::{Surface, DEFAULT_BUDGET};
use realdw::reptheory::{blocks_with_indicators, DEFAULT_SEED};
use realdw::sweep::{cases_for_group, catalog, grading_label, run_sweep, SweepCase};
use realdw::tqft::{
    check_turaev_axioms, check_unoriented_frobenius, orbifold, partition_direct,
    signed_square_root_count, turaev_from_tau, AxiomReport, ConsistencyReport, ReportOptions, RouteRecord,
};
use realdw::transgression::{tau_ref, tau_ref_formula};
use realdw::Error;

mod exit {
    pub const FAILURE: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const RESOURCE: u8 = 3;
}

#[derive(Parser)]
#[command(name = "realdw", version, about = "Twisted unoriented Dijkgraaf-Witten invariants of finite graded groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the gradings (index-2 subgroups) of a group.
    Gradings {
        #[arg(long)]
        group: String,
        #[command(flatten)]
        output: Output,
    },
    /// Twisted cohomology of a graded group.
    Cohomology {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 0)]
        grading: usize,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        degree: u8,
        #[command(flatten)]
        output: Output,
    },
    /// Partition functions by every route, with their deltas.
    Partition {
        #[command(flatten)]
        selection: Selection,
        /// Comma-separated surfaces, e.g. S2,T2,Sigma2,RP2,K,N3.
        #[arg(long, default_value = "S2,T2,Sigma2,RP2,K,N3,N4")]
        surfaces: String,
        #[arg(long, default_value_t = 1e-6, value_parser = positive_tolerance)]
        tol: f64,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Blocks, Frobenius-Schur indicators and the projective plane.
    Indicators {
        #[command(flatten)]
        selection: Selection,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Check the Turaev conditions and the unoriented Frobenius conditions.
    VerifyAxioms {
        #[command(flatten)]
        selection: Selection,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Selection {
    /// Catalog name such as C4, D8, Q8xC2; omit for the bundled catalog.
    #[arg(long)]
    group: Option<String>,
    /// Grading index or "all".
    #[arg(long, default_value = "all")]
    grading: String,
    /// Cohomology class index or "all".
    #[arg(long, default_value = "all")]
    class: String,
    /// JSON cocycle to use instead of the class representatives.
    #[arg(long)]
    cocycle_file: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Cap on enumerated bundles per surface.
    #[arg(long, env = "DW_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[arg(long, hide = true)]
    debug_flip_tau: bool,
}

impl RunArgs {
    fn options(&self) -> ReportOptions {
        ReportOptions {
            seed: self.seed,
            budget: self.budget,
            flip_tau: self.debug_flip_tau,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn open(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn positive_tolerance(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("`{s}` is not a positive tolerance")),
    }
}

/// Failure raised by a subcommand, with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: code_for(&e),
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: exit::FAILURE,
            message: format!("i/o: {e}"),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: exit::USAGE,
        message: message.into(),
    }
}

fn code_for(e: &Error) -> u8 {
    match e {
        Error::Argument(_) | Error::UnknownGroup(_) | Error::Parse { .. } | Error::GroupAxiom { .. } => exit::USAGE,
        Error::Resource { .. } => exit::RESOURCE,
        Error::Numerical { .. } | Error::Internal(_) | Error::Serde(_) => exit::FAILURE,
    }
}

fn parse_index(s: &str, what: &str) -> Result<Option<usize>, Failure> {
    if s == "all" {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| usage(format!("--{what} expects an index or \"all\", got `{s}`")))
}

fn graded(group: &str, grading: usize) -> Result<GradedGroup, Failure> {
    let g = group_by_name(group)?;
    let mut all = enumerate_gradings(&g);
    if all.is_empty() {
        return Err(usage(format!("{group} has no index-2 subgroup, so it carries no grading")));
    }
    if grading >= all.len() {
        return Err(usage(format!("{group} has {} gradings, index {grading} is out of range", all.len())));
    }
    Ok(all.swap_remove(grading))
}

impl Selection {
    fn cases(&self) -> Result<Vec<SweepCase>, Failure> {
        let grading = parse_index(&self.grading, "grading")?;
        let class = parse_index(&self.class, "class")?;
        if let Some(path) = &self.cocycle_file {
            let (Some(group), Some(grading)) = (&self.group, grading) else {
                return Err(usage("--cocycle-file needs --group and a single --grading"));
            };
            let text = std::fs::read_to_string(path)?;
            let parsed: CocycleJson = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let gg = Arc::new(graded(group, grading)?);
            let lambda_hat = TwistedCochain::from_json(gg.clone(), &parsed)?;
            if lambda_hat.degree() != 2 || !is_twisted_cocycle(&lambda_hat) {
                return Err(usage(format!("{} is not a twisted 2-cocycle", path.display())));
            }
            return Ok(vec![SweepCase {
                group: group.clone(),
                grading_index: grading,
                grading: grading_label(&gg),
                class: 0,
                lambda_hat,
            }]);
        }
        match &self.group {
            Some(group) => Ok(cases_for_group(group, grading, class)?),
            None if grading.is_none() && class.is_none() => {
                let mut out = Vec::new();
                for name in catalog() {
                    out.extend(cases_for_group(&name, None, None)?);
                }
                Ok(out)
            }
            None => Err(usage("--grading and --class need --group")),
        }
    }
}

fn tag(c: &SweepCase) -> serde_json::Value {
    json!({"group": c.group, "grading": c.grading, "class": c.class})
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn write_line(out: &mut dyn Write, v: &serde_json::Value) -> io::Result<()> {
    writeln!(out, "{v}")
}

fn cmd_gradings(group: &str, output: &Output) -> Result<u8, Failure> {
    let g = group_by_name(group)?;
    let gradings = enumerate_gradings(&g);
    let mut out = output.open()?;
    if gradings.is_empty() {
        eprintln!("note: {group} has no index-2 subgroup, so it carries no grading");
    }
    if output.format == Format::Csv {
        writeln!(out, "index,sign,even_part,split")?;
    }
    for (i, gg) in gradings.iter().enumerate() {
        let even: Vec<String> = gg.even_part().iter().map(|x| x.to_string()).collect();
        match output.format {
            Format::Json => write_line(
                &mut out,
                &json!({"index": i, "sign": grading_label(gg), "even_part": gg.even_part(), "split": gg.is_split()}),
            )?,
            Format::Csv => writeln!(out, "{i},{},{},{}", grading_label(gg), even.join(" "), gg.is_split())?,
        }
    }
    out.flush()?;
    Ok(0)
}

fn cmd_cohomology(group: &str, grading: usize, degree: u8, output: &Output) -> Result<u8, Failure> {
    let gg = Arc::new(graded(group, grading)?);
    let h = cohomology_classes(&gg, degree as usize)?;
    let mut out = output.open()?;
    let label = grading_label(&gg);
    match output.format {
        Format::Json => write_line(
            &mut out,
            &json!({
                "group": group,
                "grading": label,
                "degree": degree,
                "order": h.order(),
                "invariant_factors": h.invariant_factors,
                "representatives": h.representatives.iter().enumerate()
                    .map(|(i, r)| json!({"class": i, "fingerprint": r.fingerprint()}))
                    .collect::<Vec<_>>(),
            }),
        )?,
        Format::Csv => {
            let factors: Vec<String> = h.invariant_factors.iter().map(|f| f.to_string()).collect();
            writeln!(out, "group,grading,degree,invariant_factors,class,fingerprint")?;
            for (i, r) in h.representatives.iter().enumerate() {
                writeln!(out, "{group},{label},{degree},{},{i},{}", factors.join(" "), r.fingerprint())?;
            }
        }
    }
    out.flush()?;
    Ok(0)
}

fn pair_csv(z: [f64; 2]) -> String {
    format!("{},{}", z[0], z[1])
}

fn write_report(out: &mut dyn Write, format: Format, report: &ConsistencyReport) -> io::Result<()> {
    let route_csv = |r: &RouteRecord| {
        let verlinde = r.verlinde.map(pair_csv).unwrap_or_else(|| ",".into());
        format!(
            "{},{},{},{},{},{},{},{},{}",
            csv_field(&r.group),
            r.grading,
            r.class,
            r.surface,
            pair_csv(r.direct),
            pair_csv(r.tqft),
            verlinde,
            r.max_delta,
            csv_field(r.note.as_deref().unwrap_or("")),
        )
    };
    for r in &report.records {
        match format {
            Format::Json => writeln!(out, "{}", serde_json::to_string(r).map_err(io::Error::other)?)?,
            Format::Csv => writeln!(out, "{}", route_csv(r))?,
        }
    }
    if let Some(s) = &report.summary {
        match format {
            Format::Json => writeln!(out, "{}", serde_json::to_string(s).map_err(io::Error::other)?)?,
            Format::Csv => {
                // the surface independent identities as two extra rows
                let rows = [("KR", s.kr_rank, s.one_loop), ("RP2-trace", s.rp2, s.crosscap_trace)];
                for (name, a, b) in rows {
                    let delta = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
                    writeln!(
                        out,
                        "{},{},{},{name},{},{},,,{delta},",
                        csv_field(&s.group),
                        s.grading,
                        s.class,
                        pair_csv(a),
                        pair_csv(b)
                    )?;
                }
            }
        }
    }
    Ok(())
}

/// Cases are run in parallel chunks and written in order, chunk by chunk.
const CHUNK: usize = 64;

fn cmd_partition(selection: &Selection, surfaces: &str, tol: f64, run: &RunArgs, output: &Output) -> Result<u8, Failure> {
    let surfaces = Surface::parse_list(surfaces)?;
    let cases = selection.cases()?;
    let opts = run.options();
    let mut out = output.open()?;
    if output.format == Format::Csv {
        writeln!(
            out,
            "group,grading,class,surface,direct_re,direct_im,tqft_re,tqft_im,verlinde_re,verlinde_im,max_delta,note"
        )?;
    }
    let mut code = 0u8;
    for chunk in cases.chunks(CHUNK) {
        for (c, result) in chunk.iter().zip(run_sweep(chunk, &surfaces, &opts)) {
            match result {
                Ok(report) => {
                    write_report(&mut out, output.format, &report)?;
                    let delta = report.max_delta();
                    if delta > tol || delta.is_nan() {
                        eprintln!("failing tuple {}: max delta {delta:e} exceeds {tol:e}", tag(c));
                        code = code.max(exit::FAILURE);
                    }
                }
                Err(e) => {
                    eprintln!("failing tuple {}: {e}", tag(c));
                    if output.format == Format::Json {
                        let mut v = tag(c);
                        v["error"] = json!(e.to_string());
                        write_line(&mut out, &v)?;
                    }
                    code = code.max(code_for(&e));
                }
            }
        }
        out.flush()?;
    }
    Ok(code)
}

fn single(selection: &Selection) -> Result<Vec<SweepCase>, Failure> {
    if selection.group.is_none() {
        return Err(usage("--group is required"));
    }
    selection.cases()
}

fn cmd_indicators(selection: &Selection, run: &RunArgs, output: &Output) -> Result<u8, Failure> {
    let cases = single(selection)?;
    let mut out = output.open()?;
    if output.format == Format::Csv {
        writeln!(out, "group,grading,class,block,dim,indicator,fingerprint,rp2_re,rp2_im,signed_square_roots")?;
    }
    let mut code = 0u8;
    for c in &cases {
        let lh = &c.lambda_hat;
        let order = lh.graded_group().even_group().order();
        let (_, blocks) = blocks_with_indicators(lh, run.seed)?;
        let rp2 = partition_direct(lh, Surface::projective_plane(), run.budget)?;
        let roots = signed_square_root_count(lh);
        // Z(RP²) three ways: bundles, odd square roots, blocks
        let via_roots = &roots * &Cyclotomic::from_ratio(1, order as i64);
        let via_blocks: i64 = blocks.iter().map(|b| b.indicator.unwrap_or(0) as i64 * b.dimension as i64).sum();
        let identity = rp2 == via_roots && rp2 == Cyclotomic::from_ratio(via_blocks, order as i64);
        if !identity {
            eprintln!("failing tuple {}: projective plane identities disagree", tag(c));
            code = exit::FAILURE;
        }
        let z = rp2.to_complex();
        match output.format {
            Format::Json => {
                let mut v = tag(c);
                v["blocks"] = json!(blocks.iter().map(|b| b.report()).collect::<Vec<_>>());
                v["rp2"] = json!([z.re, z.im]);
                v["rp2_exact"] = json!(rp2.to_string());
                v["signed_square_roots"] = json!(roots.to_string());
                v["identity_holds"] = json!(identity);
                write_line(&mut out, &v)?;
            }
            Format::Csv => {
                for (i, b) in blocks.iter().enumerate() {
                    let nu = b.indicator.map(|n| n.to_string()).unwrap_or_default();
                    writeln!(
                        out,
                        "{},{},{},{i},{},{nu},{},{},{},{}",
                        c.group,
                        c.grading,
                        c.class,
                        b.dimension,
                        b.fingerprint,
                        z.re,
                        z.im,
                        csv_field(&roots.to_string())
                    )?;
                }
            }
        }
    }
    out.flush()?;
    Ok(code)
}

fn cmd_verify_axioms(selection: &Selection, run: &RunArgs, output: &Output) -> Result<u8, Failure> {
    let cases = single(selection)?;
    let mut out = output.open()?;
    if output.format == Format::Csv {
        writeln!(out, "group,grading,class,algebra,check,passed,witness")?;
    }
    let mut code = 0u8;
    for c in &cases {
        let lh = &c.lambda_hat;
        let tau = if run.debug_flip_tau {
            tau_ref_formula(lh, true)
        } else {
            tau_ref(lh)?
        };
        let t = turaev_from_tau(lh, &tau);
        let mut reports: Vec<(&str, AxiomReport)> = vec![("turaev", check_turaev_axioms(&t))];
        match orbifold(&t) {
            Ok(f) => reports.push(("frobenius", check_unoriented_frobenius(&f))),
            Err(e) => eprintln!("tuple {}: no orbifold: {e}", tag(c)),
        }
        for (name, report) in &reports {
            if !report.all_passed() {
                code = exit::FAILURE;
                for f in report.failures() {
                    eprintln!("failing tuple {}: {name} {}", tag(c), f.name);
                }
            }
            match output.format {
                Format::Json => {
                    let mut v = tag(c);
                    v["algebra"] = json!(name);
                    v["passed"] = json!(report.all_passed());
                    v["checks"] = json!(report.checks);
                    write_line(&mut out, &v)?;
                }
                Format::Csv => {
                    for check in &report.checks {
                        writeln!(
                            out,
                            "{},{},{},{name},{},{},{}",
                            c.group,
                            c.grading,
                            c.class,
                            csv_field(check.name),
                            check.passed,
                            csv_field(check.witness.as_deref().unwrap_or(""))
                        )?;
                    }
                }
            }
        }
        if reports.len() == 1 {
            code = exit::FAILURE;
        }
    }
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gradings { group, output } => cmd_gradings(group, output),
        Command::Cohomology {
            group,
            grading,
            degree,
            output,
        } => cmd_cohomology(group, *grading, *degree, output),
        Command::Partition {
            selection,
            surfaces,
            tol,
            run,
            output,
        } => cmd_partition(selection, surfaces, *tol, run, output),
        Command::Indicators { selection, run, output } => cmd_indicators(selection, run, output),
        Command::VerifyAxioms { selection, run, output } => cmd_verify_axioms(selection, run, output),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
