use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use limitop::algebra::{convolve, i_norm, reduced_norm, regular_representation, AlgebraElement};
use limitop::band::{laurent_symbol, limit_operator, DirectionSpec, LaurentSymbol, LimitConfig};
use limitop::error::Error;
use limitop::fredholm::{
    fredholm_report, section_trace_csv, symbol_trace_csv, truncation_kernel_oracle, winding_number_with_threshold,
    FredholmConfig, FredholmReport, TruncationInput, DEFAULT_RANK_TOL,
};
use limitop::groupoid::FiniteGroupoid;
use limitop::invertibility::{exel_invertibility, invert, main_theorem_check, InvertibilityReport, Mode};
use limitop::io::{
    element_from_doc, element_to_doc, fibre_matrix_to_doc, means_from_doc, parse_band, resolve_groupoid, ElementDoc,
    GroupoidDoc, MeansDoc,
};
use limitop::mean::mean_defect;
use limitop::section::BoundaryDecomposition;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "limitop",
    version,
    about = "Groupoid convolution algebras and band operators on Z"
)]
struct Cli {
    /// Symbol threshold for Fredholm/index certification, or the Cauchy
    /// tolerance for `limit-op`.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Circle samples for symbol evaluation.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Finite-section half-widths, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    sections: Option<Vec<usize>>,
    /// Probe depths for limit extraction, comma separated and increasing.
    #[arg(long, global = true, value_delimiter = ',')]
    depths: Option<Vec<u64>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(clap::Args)]
struct ElementArgs {
    /// Element document.
    element: PathBuf,
    /// Groupoid document; defaults to the element's own `groupoid` field.
    #[arg(short, long)]
    groupoid: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the groupoid axioms of a groupoid document.
    Validate { groupoid: PathBuf },
    /// Print the regular representation of an element at a unit.
    Rep {
        #[command(flatten)]
        el: ElementArgs,
        #[arg(short, long)]
        unit: String,
    },
    /// Reduced and I-norms of an element.
    Norm {
        #[command(flatten)]
        el: ElementArgs,
    },
    /// Convolution product of two elements on the same groupoid.
    Convolve {
        #[command(flatten)]
        el: ElementArgs,
        other: PathBuf,
    },
    /// Fredholm report for a band operator.
    Fredholm { band: PathBuf },
    /// Winding number and Toeplitz index of a Laurent symbol.
    Index {
        symbol: PathBuf,
        /// Also report the truncation estimate at this size.
        #[arg(long)]
        oracle: Option<usize>,
    },
    /// Fibrewise invertibility of an element (or of 1 + element).
    Exel {
        #[command(flatten)]
        el: ElementArgs,
        #[arg(long)]
        unitized: bool,
    },
    /// Invertibility modulo the open part, for a boundary given by unit labels.
    Maintheorem {
        #[command(flatten)]
        el: ElementArgs,
        /// Boundary unit labels, comma separated (must form an invariant set).
        /// Empty means no boundary.
        #[arg(short, long, value_delimiter = ',')]
        boundary: Vec<String>,
    },
    /// Mass and invariance defects of a sequence of mean families.
    MeanDefect {
        means: PathBuf,
        #[arg(short, long)]
        groupoid: Option<PathBuf>,
    },
    /// Limit operator of a band operator along a direction.
    LimitOp {
        band: PathBuf,
        /// `plus`, `minus` or `arith:START:STEP`.
        #[arg(short, long, default_value = "plus")]
        direction: String,
    },
}

/// Exit status of a completed command.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Yes,
    No,
}

struct Output {
    json: Value,
    pretty: String,
    csv: Option<String>,
    status: Status,
}

impl Output {
    fn new(json: Value, pretty: String) -> Self {
        Output {
            json,
            pretty,
            csv: None,
            status: Status::Yes,
        }
    }

    fn csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    fn negative_if(mut self, no: bool) -> Self {
        if no {
            self.status = Status::No;
        }
        self
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text)
        .map_err(|e| anyhow!(Error::from(e)))
        .with_context(|| format!("in {}", path.display()))
}

fn base_dir(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

fn load_groupoid(path: &Path) -> anyhow::Result<FiniteGroupoid> {
    let v: Value = parse_json(path)?;
    Ok(resolve_groupoid(&v, base_dir(path))?)
}

/// The groupoid named by `-g`, else the one referenced by the document.
fn groupoid_for(explicit: Option<&Path>, embedded: Option<&Value>, doc: &Path) -> anyhow::Result<Arc<FiniteGroupoid>> {
    let g = match (explicit, embedded) {
        (Some(p), _) => load_groupoid(p)?,
        (None, Some(v)) => resolve_groupoid(v, base_dir(doc))?,
        (None, None) => {
            return Err(anyhow!(Error::Format(format!(
                "{} names no groupoid; pass --groupoid",
                doc.display()
            ))))
        }
    };
    Ok(Arc::new(g))
}

fn load_element(args: &ElementArgs) -> anyhow::Result<AlgebraElement> {
    let doc: ElementDoc = parse_json(&args.element)?;
    let g = groupoid_for(args.groupoid.as_deref(), doc.groupoid.as_ref(), &args.element)?;
    Ok(element_from_doc(&doc, &g)?)
}

fn load_element_on(path: &Path, g: &Arc<FiniteGroupoid>) -> anyhow::Result<AlgebraElement> {
    let doc: ElementDoc = parse_json(path)?;
    Ok(element_from_doc(&doc, g)?)
}

fn fmt_c(z: limitop::Complex64) -> String {
    if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}{}i", z.re, z.im)
    }
}

fn coeff_lines(f: &AlgebraElement) -> String {
    let g = f.groupoid();
    let mut s = String::new();
    for a in f.support() {
        writeln!(s, "  {}: {}", g.arrow_label(a), fmt_c(f.coeff(a))).unwrap();
    }
    s
}

fn fredholm_config(cli: &Cli) -> FredholmConfig {
    let mut cfg = FredholmConfig::default();
    if let Some(n) = cli.samples {
        cfg.samples = n;
        cfg.max_samples = cfg.max_samples.max(n);
    }
    if let Some(t) = cli.tolerance {
        cfg.threshold = t;
    }
    if let Some(s) = &cli.sections {
        cfg.sizes = s.clone();
    }
    cfg.limit = limit_config(cli, false);
    cfg
}

fn limit_config(cli: &Cli, tolerance_applies: bool) -> LimitConfig {
    let mut cfg = LimitConfig::default();
    if tolerance_applies {
        if let Some(t) = cli.tolerance {
            cfg.tolerance = t;
        }
    }
    if let Some(d) = &cli.depths {
        cfg.depths = d.clone();
    }
    cfg
}

fn parse_direction(s: &str) -> anyhow::Result<DirectionSpec> {
    let bad = || {
        anyhow!(Error::InvalidDirection(format!(
            "{s:?}; expected plus, minus or arith:START:STEP"
        )))
    };
    match s {
        "plus" | "+inf" => Ok(DirectionSpec::PlusInfinity),
        "minus" | "-inf" => Ok(DirectionSpec::MinusInfinity),
        _ => {
            let rest = s.strip_prefix("arith:").ok_or_else(bad)?;
            let (a, b) = rest.split_once(':').ok_or_else(bad)?;
            let (start, step) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            Ok(DirectionSpec::arithmetic(start, step)?)
        }
    }
}

/// `NotConvergent` as a structured refusal instead of an error.
fn not_convergent(e: &Error) -> Option<Output> {
    let Error::NotConvergent { diagonal, probes } = e else {
        return None;
    };
    let json = json!({
        "refusal": "not_convergent",
        "diagonal": diagonal,
        "probes": probes.iter().map(|(n, z)| json!([n, z.re, z.im])).collect::<Vec<_>>(),
    });
    let mut pretty = format!("refused: diagonal {diagonal} does not converge\n");
    for (n, z) in probes {
        writeln!(pretty, "  probe n = {n}: {}", fmt_c(*z)).unwrap();
    }
    Some(Output::new(json, pretty).negative_if(true))
}

fn invertibility_pretty(r: &InvertibilityReport) -> String {
    let mut s = String::new();
    for u in &r.per_unit {
        let mark = if u.invertible { "invertible" } else { "SINGULAR" };
        writeln!(s, "  {}: sigma_min = {:e} ({mark})", u.unit, u.sigma_min).unwrap();
    }
    if let Some(c) = &r.conditions {
        writeln!(s, "conditions: (1) {} (2) {} (3) {} (4) {}", c.c1, c.c2, c.c3, c.c4).unwrap();
    }
    if let Some(n) = r.sup_inverse_norm {
        writeln!(s, "sup inverse norm: {n}").unwrap();
    }
    if !r.near_threshold.is_empty() {
        writeln!(s, "near threshold: {}", r.near_threshold.join(", ")).unwrap();
    }
    for n in &r.notes {
        writeln!(s, "note: {n}").unwrap();
    }
    writeln!(
        s,
        "verdict: {}",
        if r.verdict { "invertible" } else { "not invertible" }
    )
    .unwrap();
    s
}

fn fredholm_pretty(r: &FredholmReport) -> String {
    let mut s = String::new();
    for (side, sym, cert, mm, w) in [
        (
            "+inf",
            &r.symbols.plus,
            r.certification.plus,
            &r.min_modulus.plus,
            r.windings.plus,
        ),
        (
            "-inf",
            &r.symbols.minus,
            r.certification.minus,
            &r.min_modulus.minus,
            r.windings.minus,
        ),
    ] {
        writeln!(s, "{side}: symbol {}", symbol_pretty(sym)).unwrap();
        writeln!(
            s,
            "  min |s| = {:e} at theta = {:.6} (lower bound {:e}, {} samples), {cert:?}, winding {}",
            mm.min,
            mm.theta,
            mm.lower_bound,
            mm.samples,
            w.map_or("-".into(), |w| w.to_string())
        )
        .unwrap();
    }
    for e in &r.evidence {
        writeln!(s, "section n = {}: sigma_min = {:e}", e.n, e.sigma_min).unwrap();
    }
    writeln!(s, "orientation: {}", r.orientation).unwrap();
    for n in &r.notes {
        writeln!(s, "note: {n}").unwrap();
    }
    match r.index {
        Some(i) if r.fredholm => writeln!(s, "Fredholm, index {i}").unwrap(),
        _ => writeln!(s, "not certified Fredholm").unwrap(),
    }
    s
}

fn symbol_pretty(s: &LaurentSymbol) -> String {
    let terms: Vec<String> = s
        .coeffs()
        .iter()
        .map(|(m, c)| format!("({}) e^{{{m}iθ}}", fmt_c(*c)))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    Ok(match &cli.command {
        Command::Validate { groupoid } => {
            let v: Value = parse_json(groupoid)?;
            let doc = GroupoidDoc::from_value(&v)?;
            match doc.build() {
                Ok(g) => Output::new(
                    json!({"valid": true, "units": g.num_units(), "arrows": g.num_arrows()}),
                    format!("valid: {} units, {} arrows\n", g.num_units(), g.num_arrows()),
                ),
                Err(Error::Axioms(vs)) => {
                    let mut pretty = format!("invalid: {} violation(s)\n", vs.len());
                    for v in &vs {
                        writeln!(pretty, "  {v}").unwrap();
                    }
                    Output::new(json!({"valid": false, "violations": vs}), pretty).negative_if(true)
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Rep { el, unit } => {
            let f = load_element(el)?;
            let g = f.groupoid();
            let m = regular_representation(&f, g.unit_by_label(unit)?)?;
            let doc = fibre_matrix_to_doc(g, &m);
            let mut pretty = format!(
                "fibre: {}\n",
                doc.fibre.iter().map(|l| l.0.as_str()).collect::<Vec<_>>().join(" ")
            );
            let mut csv = String::from("row,col,re,im\n");
            for i in 0..m.dim() {
                let row: Vec<String> = (0..m.dim()).map(|j| fmt_c(m.matrix[(i, j)])).collect();
                writeln!(pretty, "  [{}]", row.join(", ")).unwrap();
                for j in 0..m.dim() {
                    let z = m.matrix[(i, j)];
                    writeln!(csv, "{i},{j},{},{}", z.re, z.im).unwrap();
                }
            }
            Output::new(serde_json::to_value(doc)?, pretty).csv(csv)
        }
        Command::Norm { el } => {
            let f = load_element(el)?;
            let (r, i) = (reduced_norm(&f), i_norm(&f));
            Output::new(
                json!({"reduced": r, "i_norm": i}),
                format!("reduced norm: {r}\nI-norm: {i}\n"),
            )
            .csv(format!("reduced,i_norm\n{r},{i}\n"))
        }
        Command::Convolve { el, other } => {
            let f = load_element(el)?;
            let h = load_element_on(other, f.groupoid())?;
            let p = convolve(&f, &h)?;
            Output::new(serde_json::to_value(element_to_doc(&p, true))?, coeff_lines(&p))
        }
        Command::Fredholm { band } => {
            let t = parse_band(&read(band)?)?;
            let cfg = fredholm_config(cli);
            match fredholm_report(&t, &cfg) {
                Ok(r) => {
                    let mut csv = String::new();
                    for (side, s) in [("plus", &r.symbols.plus), ("minus", &r.symbols.minus)] {
                        writeln!(csv, "# symbol {side}").unwrap();
                        csv += &symbol_trace_csv(s, cfg.samples);
                    }
                    csv += "# sections\n";
                    csv += &section_trace_csv(&r.evidence);
                    let no = !r.fredholm;
                    Output::new(serde_json::to_value(&r)?, fredholm_pretty(&r))
                        .csv(csv)
                        .negative_if(no)
                }
                Err(e) => not_convergent(&e).ok_or(e)?,
            }
        }
        Command::Index { symbol, oracle } => {
            let s: LaurentSymbol = parse_json(symbol)?;
            let threshold = cli.tolerance.unwrap_or(limitop::fredholm::DEFAULT_THRESHOLD);
            let samples = cli.samples.unwrap_or(limitop::fredholm::DEFAULT_SAMPLES);
            let wind = match winding_number_with_threshold(&s, samples, threshold) {
                Ok(w) => w,
                Err(e @ (Error::NearZeroSymbol { .. } | Error::StepTooCoarse { .. })) => {
                    let msg = e.to_string();
                    return Ok(Output::new(json!({"refusal": msg}), format!("refused: {msg}\n")).negative_if(true));
                }
                Err(e) => return Err(e.into()),
            };
            let index = -wind;
            let mut json = json!({"winding": wind, "toeplitz_index": index});
            let mut pretty = format!("winding: {wind}\nToeplitz index: {index}\n");
            if let Some(n) = oracle {
                let (k, c) = truncation_kernel_oracle(TruncationInput::Toeplitz(&s), *n, DEFAULT_RANK_TOL);
                json["oracle"] = json!({"n": n, "kernel": k, "cokernel": c});
                writeln!(pretty, "truncation n = {n}: kernel {k}, cokernel {c}").unwrap();
            }
            Output::new(json, pretty)
        }
        Command::Exel { el, unitized } => {
            let f = load_element(el)?;
            let mode = if *unitized { Mode::Unitized } else { Mode::Plain };
            let r = exel_invertibility(&f, mode);
            let mut json = serde_json::to_value(&r)?;
            let mut pretty = invertibility_pretty(&r);
            if r.verdict {
                let inv = invert(&f, mode)?;
                json["inverse"] = serde_json::to_value(element_to_doc(&inv, false))?;
                pretty += "inverse:\n";
                pretty += &coeff_lines(&inv);
            }
            Output::new(json, pretty).negative_if(!r.verdict)
        }
        Command::Maintheorem { el, boundary } => {
            let f = load_element(el)?;
            let labels: Vec<&str> = boundary.iter().map(String::as_str).filter(|l| !l.is_empty()).collect();
            let d = BoundaryDecomposition::from_labels(f.groupoid(), &labels)?;
            let (r, cert) = main_theorem_check(&f, &d)?;
            let mut json = serde_json::to_value(&r)?;
            let mut pretty = invertibility_pretty(&r);
            if let Some(q) = cert {
                let h = q.lift.to_element();
                json["quotient_inverse"] = serde_json::to_value(element_to_doc(&h, false))?;
                pretty += "quotient inverse (lift, zero on the open part):\n";
                pretty += &coeff_lines(&h);
            }
            Output::new(json, pretty).negative_if(!r.verdict)
        }
        Command::MeanDefect { means, groupoid } => {
            let doc: MeansDoc = parse_json(means)?;
            let g = groupoid_for(groupoid.as_deref(), doc.groupoid.as_ref(), means)?;
            let fams = means_from_doc(&doc, &g)?;
            let defects = mean_defect(&g, &fams)?;
            let mut pretty = String::new();
            let mut csv = String::from("k,mass,invariance\n");
            for (k, d) in defects.iter().enumerate() {
                writeln!(pretty, "{k}: mass {:e}, invariance {:e}", d.mass, d.invariance).unwrap();
                writeln!(csv, "{k},{},{}", d.mass, d.invariance).unwrap();
            }
            Output::new(serde_json::to_value(&defects)?, pretty).csv(csv)
        }
        Command::LimitOp { band, direction } => {
            let t = parse_band(&read(band)?)?;
            let dir = parse_direction(direction)?;
            match limit_operator(&t, &dir, &limit_config(cli, true)) {
                Ok(l) => {
                    let s = laurent_symbol(&l);
                    let pretty = format!("limit symbol: {}\n", symbol_pretty(&s));
                    let mut csv = String::from("m,re,im\n");
                    for (m, c) in l.coeffs() {
                        writeln!(csv, "{m},{},{}", c.re, c.im).unwrap();
                    }
                    Output::new(serde_json::to_value(&l)?, pretty).csv(csv)
                }
                Err(e) => not_convergent(&e).ok_or(e)?,
            }
        }
    })
}

/// 1 for domain-negative outcomes, 2 for malformed input.
fn exit_code(e: &anyhow::Error) -> u8 {
    let Some(e) = e.chain().find_map(|c| c.downcast_ref::<Error>()) else {
        return 2;
    };
    match e {
        Error::Axioms(_)
        | Error::NotInvariant { .. }
        | Error::UnknownUnit(_)
        | Error::UnknownPoint(_)
        | Error::SingularFibre(_)
        | Error::NoConvergence(_)
        | Error::NotConvergent { .. }
        | Error::NearZeroSymbol { .. }
        | Error::StepTooCoarse { .. } => 1,
        _ => 2,
    }
}

fn emit(cli: &Cli, out: &Output) -> anyhow::Result<()> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out.json)? + "\n",
        Format::Pretty => out.pretty.clone(),
        Format::Csv => match &out.csv {
            Some(c) => c.clone(),
            None => bail!(Error::Format("csv output is not available for this command".into())),
        },
    };
    match &cli.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|out| emit(&cli, &out).map(|()| out.status)) {
        Ok(Status::Yes) => ExitCode::SUCCESS,
        Ok(Status::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
