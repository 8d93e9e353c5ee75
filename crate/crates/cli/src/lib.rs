//! Command implementations behind the `sodkit` binary. Each command takes a
//! parsed [`config::ProjectConfig`] plus flags and returns its rendered
//! output, so everything here is directly testable and deterministic.

pub mod config;
pub mod svg;

use std::fmt;

use sodkit::polytope::WeightPolytope;
use sodkit::ratlin::{IntVec, Rat, RatVec};
use sodkit::sod::{
    self, enumerate_summands, lambda_data, locate, window, InequalityReport, QuadraticNorm,
    Sampling, SodConfig, SummandTable,
};
use sodkit::weights::SignedWeightMultiset;

use config::ProjectConfig;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed configuration; maps to exit code 2.
    Config(String),
    /// A core invariant or computation failure; maps to exit code 1.
    Core(sodkit::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<sodkit::Error> for CliError {
    fn from(e: sodkit::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Csv,
    Svg,
}

/// Rendered output plus the command's verdict; `passed = false` maps to
/// exit code 1.
pub struct CommandResult {
    pub output: String,
    pub passed: bool,
}

impl CommandResult {
    fn pass(output: String) -> Self {
        CommandResult {
            output,
            passed: true,
        }
    }
}

fn fmt_ints(v: &[i64]) -> String {
    let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", inner.join(", "))
}

fn fmt_points(points: &[IntVec]) -> String {
    let inner: Vec<String> = points.iter().map(|p| fmt_ints(p)).collect();
    inner.join("; ")
}

fn parse_rat_vector(s: &str, rank: usize) -> Result<RatVec, CliError> {
    let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
    let coords: Result<Vec<Rat>, CliError> = trimmed
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<Rat>()
                .map_err(|e| CliError::Config(format!("bad coordinate {p:?}: {e}")))
        })
        .collect();
    let v = RatVec(coords?);
    if v.len() != rank {
        return Err(CliError::Config(format!(
            "expected {rank} coordinates, got {}",
            v.len()
        )));
    }
    Ok(v)
}

fn parse_int_vector(s: &str, rank: usize) -> Result<IntVec, CliError> {
    let v = parse_rat_vector(s, rank)?;
    v.to_ints()
        .ok_or_else(|| CliError::Config(format!("expected integer coordinates in {s:?}")))
}

/// Model pieces before validation, for the staged `check` command.
fn model_pieces(
    cfg: &ProjectConfig,
) -> Result<
    (
        sodkit::root_datum::RootDatum,
        SignedWeightMultiset,
        QuadraticNorm,
        RatVec,
    ),
    CliError,
> {
    if cfg.root_datum.is_some() || cfg.representation.is_some() {
        let rd = cfg
            .root_datum
            .as_ref()
            .ok_or_else(|| CliError::Config("representation given without root_datum".into()))?
            .build()?;
        let rep = cfg.representation_multiset()?;
        let rank = rd.rank();
        let q = match &cfg.q {
            Some(m) => QuadraticNorm::new(ProjectConfig::parse_matrix(m)?)?,
            None => QuadraticNorm::standard(rank),
        };
        let delta = match &cfg.delta {
            Some(d) => {
                let rats: Result<Vec<Rat>, CliError> =
                    d.iter().map(|r| r.to_rat()).collect();
                RatVec(rats?)
            }
            None => RatVec::zeros(rank),
        };
        Ok((rd, rep, q, delta))
    } else if let Some(qd) = &cfg.quiver {
        sodkit::presets::quiver_model(&qd.spec()?).map_err(CliError::Core)
    } else {
        Err(CliError::Config(
            "config needs either root_datum + representation or a quiver".into(),
        ))
    }
}

/// Run every load-time invariant in order, reporting the first failure.
pub fn run_check(cfg: &ProjectConfig) -> Result<CommandResult, CliError> {
    let mut out = String::new();
    let (rd, rep, q, delta) = match model_pieces(cfg) {
        Ok(pieces) => pieces,
        Err(CliError::Core(e)) => {
            out.push_str(&format!("model assembly: FAIL ({e})\ncheck: FAIL\n"));
            return Ok(CommandResult {
                output: out,
                passed: false,
            });
        }
        Err(other) => return Err(other),
    };
    out.push_str(&format!(
        "root datum: ok (rank {}, {} roots, |W| = {})\n",
        rd.rank(),
        rd.roots().len(),
        rd.weyl_order()
    ));

    let fail = |out: &mut String, name: &str, err: &dyn fmt::Display| {
        out.push_str(&format!("{name}: FAIL ({err})\n"));
        out.push_str("check: FAIL\n");
    };

    if let Err(e) = rep.is_representation() {
        fail(&mut out, "representation multiset", &e);
        return Ok(CommandResult { output: out, passed: false });
    }
    out.push_str(&format!(
        "representation multiset: ok ({} distinct weights)\n",
        rep.len()
    ));

    if !rep.is_weyl_stable(&rd) {
        fail(&mut out, "Weyl stability", &sodkit::Error::NotWeylStable);
        return Ok(CommandResult { output: out, passed: false });
    }
    out.push_str("Weyl stability: ok\n");

    if let Some((line, sum)) = rep.quasi_symmetry_violation() {
        fail(
            &mut out,
            "quasi-symmetry",
            &sodkit::Error::NotQuasiSymmetric { line, sum },
        );
        return Ok(CommandResult { output: out, passed: false });
    }
    out.push_str(&format!(
        "quasi-symmetry: ok{}\n",
        if rep.is_symmetric() { " (symmetric)" } else { "" }
    ));

    if let Err(e) = q.check_weyl_invariance(&rd) {
        fail(&mut out, "form Weyl-invariance", &e);
        return Ok(CommandResult { output: out, passed: false });
    }
    out.push_str("quadratic form: ok (symmetric, positive definite, Weyl-invariant)\n");

    let delta_invariant = rd.weyl().iter().all(|pi| pi.apply_rat(&delta) == delta);
    if !delta_invariant {
        fail(&mut out, "delta Weyl-invariance", &sodkit::Error::DeltaNotInvariant);
        return Ok(CommandResult { output: out, passed: false });
    }
    out.push_str("delta Weyl-invariance: ok\n");

    let fm_cap = cfg.fm_cap.unwrap_or(sodkit::ratlin::DEFAULT_FM_CAP);
    match SodConfig::with_fm_cap(rd, rep, q, delta, fm_cap) {
        Ok(built) => {
            out.push_str(&format!(
                "locator caches: ok ({} arrangement faces, central rank {})\n",
                built.arrangement().faces.len(),
                built.central_basis().len()
            ));
            out.push_str("check: PASS\n");
            Ok(CommandResult::pass(out))
        }
        Err(e) => {
            fail(&mut out, "configuration", &e);
            Ok(CommandResult { output: out, passed: false })
        }
    }
}

/// Print the weight polytope data: rays, support values, lattice points.
pub fn run_polytope(
    cfg: &ProjectConfig,
    format: OutputFormat,
) -> Result<CommandResult, CliError> {
    let sod_cfg = cfg.build_sod()?;
    let poly = WeightPolytope::new(sod_cfg.rank(), sod_cfg.vg().clone())?;
    if format == OutputFormat::Csv {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["point"])
            .map_err(|e| CliError::Config(e.to_string()))?;
        for p in poly.lattice_points(sod_cfg.delta()) {
            wtr.write_record([fmt_ints(&p)])
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
        let bytes = wtr
            .into_inner()
            .map_err(|e| CliError::Config(e.to_string()))?;
        return Ok(CommandResult::pass(
            String::from_utf8(bytes).map_err(|e| CliError::Config(e.to_string()))?,
        ));
    }
    let mut out = String::new();
    out.push_str(&format!(
        "rank {}; generator multiset has {} weights; empty: {}\n",
        poly.rank(),
        poly.generators().len(),
        poly.is_empty()
    ));
    if sod_cfg
        .vg()
        .iter()
        .any(|(v, m)| m < 0 && v.iter().any(|&x| x != 0))
    {
        out.push_str(
            "note: nonzero weights with negative multiplicity remain; \
             membership uses the interval H-description semantics\n",
        );
    }
    out.push_str(&format!(
        "lineality basis: [{}]\n",
        fmt_points(poly.lineality_basis())
    ));
    for r in poly.rays() {
        let upper = poly.upper_support(&RatVec::from_ints(r));
        let lower = -poly.upper_support(&RatVec::from_ints(&r.iter().map(|x| -x).collect::<Vec<_>>()));
        out.push_str(&format!(
            "ray {}: interval [{}, {}]\n",
            fmt_ints(r),
            lower,
            upper
        ));
    }
    let pts = poly.lattice_points(sod_cfg.delta());
    out.push_str(&format!(
        "lattice points of the shifted polytope ({}): {}\n",
        pts.len(),
        fmt_points(&pts)
    ));
    Ok(CommandResult::pass(out))
}

/// Locate a weight in the lattice partition.
pub fn run_locate(cfg: &ProjectConfig, weight: &str) -> Result<CommandResult, CliError> {
    let sod_cfg = cfg.build_sod()?;
    let w = parse_int_vector(weight, sod_cfg.rank())?;
    let located = locate(&sod_cfg, &w)?;
    let mut out = String::new();
    out.push_str(&format!("weight {}\n", fmt_ints(&w)));
    out.push_str(&format!("raw lambda = {}\n", located.raw_lambda));
    out.push_str(&format!("anti-dominant lambda = {}\n", located.data.lambda));
    out.push_str(&format!("norm_sq = {}\n", located.data.norm_sq));
    out.push_str(&format!("delta_lambda = {}\n", located.data.delta_lambda));
    out.push_str(&format!("v_lambda = {}\n", located.data.v_lambda));
    out.push_str(&format!(
        "fixed slice: {} weights; Levi roots: {}\n",
        located.data.fixed.len(),
        located.data.levi_roots.len()
    ));
    Ok(CommandResult::pass(out))
}

fn table_text(table: &SummandTable) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# summands within radius {} ({} labels)\n",
        table.radius,
        table.summands.len()
    ));
    out.push_str(&format!(
        "# central basis: [{}]\n",
        fmt_points(&table.central_basis)
    ));
    for block in table.blocks() {
        out.push_str(&format!(
            "# central weight {} block: {} summands\n",
            block.0,
            block.1.len()
        ));
    }
    for s in &table.summands {
        out.push_str(&format!(
            "lambda={} norm_sq={} delta_lambda={} central={} dominant={} points=[{}]\n",
            s.window.lam.lambda,
            s.window.lam.norm_sq,
            s.window.lam.delta_lambda,
            s.window.central_weight,
            s.window.dominant_points.len(),
            fmt_points(&s.window.dominant_points),
        ));
    }
    out
}

fn table_csv(table: &SummandTable) -> Result<String, CliError> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record([
        "lambda",
        "norm_sq",
        "delta_lambda",
        "central_weight",
        "n_dominant",
        "points",
    ])
    .map_err(|e| CliError::Config(e.to_string()))?;
    for s in &table.summands {
        wtr.write_record([
            s.window.lam.lambda.to_string(),
            s.window.lam.norm_sq.to_string(),
            s.window.lam.delta_lambda.to_string(),
            s.window.central_weight.to_string(),
            s.window.dominant_points.len().to_string(),
            fmt_points(&s.window.dominant_points),
        ])
        .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| CliError::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Config(e.to_string()))
}

/// Enumerate summands within the radius; optional SVG for rank 2.
pub fn run_enumerate(
    cfg: &ProjectConfig,
    radius_flag: Option<&str>,
    format: OutputFormat,
) -> Result<CommandResult, CliError> {
    let sod_cfg = cfg.build_sod()?;
    let radius = cfg.radius(radius_flag)?;
    let table = enumerate_summands(&sod_cfg, &radius)?;
    let output = match format {
        OutputFormat::Text => table_text(&table),
        OutputFormat::Csv => table_csv(&table)?,
        OutputFormat::Svg => {
            if sod_cfg.rank() == 2 {
                svg::render(&table)
            } else {
                format!(
                    "# SVG output needs rank 2, have rank {}; table follows\n{}",
                    sod_cfg.rank(),
                    table_text(&table)
                )
            }
        }
    };
    Ok(CommandResult::pass(output))
}

/// Formal induced-generator presentation for a label and a window weight.
pub fn run_bwb(
    cfg: &ProjectConfig,
    lambda: &str,
    weight: &str,
    format: OutputFormat,
) -> Result<CommandResult, CliError> {
    let sod_cfg = cfg.build_sod()?;
    let lam = parse_rat_vector(lambda, sod_cfg.rank())?;
    let w = parse_int_vector(weight, sod_cfg.rank())?;
    let p = sodkit::bwb::presentation(&sod_cfg, &lam, &w)?;
    if format == OutputFormat::Csv {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["shift", "weight", "multiplicity"])
            .map_err(|e| CliError::Config(e.to_string()))?;
        for t in &p.terms {
            wtr.write_record([
                t.shift.to_string(),
                fmt_ints(&t.weight),
                t.multiplicity.to_string(),
            ])
            .map_err(|e| CliError::Config(e.to_string()))?;
        }
        let bytes = wtr
            .into_inner()
            .map_err(|e| CliError::Config(e.to_string()))?;
        return Ok(CommandResult::pass(
            String::from_utf8(bytes).map_err(|e| CliError::Config(e.to_string()))?,
        ));
    }
    let mut out = String::new();
    out.push_str(&format!(
        "presentation of lambda={} w={}\n",
        p.lambda,
        fmt_ints(&p.source)
    ));
    out.push_str(&format!(
        "admissible selections: {}; dropped on walls: {}\n",
        p.admissible, p.dropped
    ));
    for t in &p.terms {
        out.push_str(&format!(
            "shift={} weight={} multiplicity={}\n",
            t.shift,
            fmt_ints(&t.weight),
            t.multiplicity
        ));
    }
    Ok(CommandResult::pass(out))
}

fn report_line(kind: &str, r: &InequalityReport) -> String {
    format!(
        "{kind} lambda={} lambda'={}: checked={} dropped={} min_margin={} violations={}\n",
        r.lambda,
        r.lambda_prime,
        r.checked,
        r.dropped,
        r.min_margin
            .as_ref()
            .map_or_else(|| "-".to_string(), |m| m.to_string()),
        r.violations.len()
    )
}

/// Run the semiorthogonality suite over all label pairs within the radius
/// plus full faithfulness per label. Exit code 0 only without violations.
pub fn run_verify(
    cfg: &ProjectConfig,
    radius_flag: Option<&str>,
    seed_flag: Option<u64>,
) -> Result<CommandResult, CliError> {
    let sod_cfg = cfg.build_sod()?;
    let radius = cfg.radius(radius_flag)?;
    let sampling = cfg.sample_cap.map(|cap| Sampling {
        seed: seed_flag.or(cfg.seed).unwrap_or(0),
        cap,
    });
    let table = enumerate_summands(&sod_cfg, &radius)?;
    let labels: Vec<RatVec> = table
        .summands
        .iter()
        .map(|s| s.window.lam.lambda.clone())
        .collect();
    let norms: Vec<Rat> = table
        .summands
        .iter()
        .map(|s| s.window.lam.norm_sq.clone())
        .collect();
    let mut out = String::new();
    let mut violations = 0usize;
    let mut pairs = 0usize;
    for i in 0..labels.len() {
        for j in 0..labels.len() {
            if i == j || norms[i] > norms[j] {
                continue;
            }
            let report =
                sod::check_semiorthogonality(&sod_cfg, &labels[i], &labels[j], sampling)?;
            pairs += 1;
            violations += report.violations.len();
            out.push_str(&report_line("semiorthogonality", &report));
            for v in &report.violations {
                out.push_str(&format!(
                    "  violation: w={} w'={} |J|={} lhs={} rhs={}\n",
                    fmt_ints(&v.w),
                    fmt_ints(&v.w_prime),
                    v.j.iter().map(|(_, k)| u64::from(*k)).sum::<u64>(),
                    v.lhs,
                    v.rhs
                ));
            }
        }
    }
    for label in &labels {
        let report = sod::check_full_faithfulness(&sod_cfg, label, sampling)?;
        violations += report.violations.len();
        out.push_str(&report_line("full-faithfulness", &report));
        for v in &report.violations {
            out.push_str(&format!(
                "  violation: w={} w'={} lhs={} rhs={}\n",
                fmt_ints(&v.w),
                fmt_ints(&v.w_prime),
                v.lhs,
                v.rhs
            ));
        }
    }
    out.push_str(&format!(
        "verification: {} ({} semiorthogonality pairs, {} labels, {} violations)\n",
        if violations == 0 { "PASS" } else { "FAIL" },
        pairs,
        labels.len(),
        violations
    ));
    Ok(CommandResult {
        output: out,
        passed: violations == 0,
    })
}

/// Enumerate all ordered partitions of a dimension vector into nonzero
/// blocks.
fn compositions(d: &[u32]) -> Vec<Vec<Vec<u32>>> {
    fn nonzero_subvectors(d: &[u32]) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for &x in d {
            let mut next = Vec::new();
            for v in &out {
                for c in 0..=x {
                    let mut w = v.clone();
                    w.push(c);
                    next.push(w);
                }
            }
            out = next;
        }
        out.retain(|v| v.iter().any(|&x| x > 0));
        out
    }
    fn rec(rest: &[u32], acc: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if rest.iter().all(|&x| x == 0) {
            if !acc.is_empty() {
                out.push(acc.clone());
            }
            return;
        }
        for first in nonzero_subvectors(rest) {
            if first.iter().zip(rest).any(|(&a, &b)| a > b) {
                continue;
            }
            let remaining: Vec<u32> = rest.iter().zip(&first).map(|(&a, &b)| a - b).collect();
            acc.push(first);
            rec(&remaining, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, &mut Vec::new(), &mut out);
    out
}

/// Partition-labelled table for a quiver config: all compositions of the
/// dimension vector with integer block weights bounded by `w_bound`, slopes
/// strictly increasing, sort key at most the radius.
pub fn run_quiver(
    cfg: &ProjectConfig,
    radius_flag: Option<&str>,
    format: OutputFormat,
) -> Result<CommandResult, CliError> {
    let qd = cfg
        .quiver
        .as_ref()
        .ok_or_else(|| CliError::Config("quiver command needs a quiver in the config".into()))?;
    let spec = qd.spec()?;
    // validates quasi-symmetry of the assembled model
    let _ = sodkit::presets::quiver_config(&spec)?;
    let radius = cfg.radius(radius_flag)?;
    let w_bound = qd.w_bound.unwrap_or(3);

    #[allow(clippy::type_complexity)]
    let mut rows: Vec<(Rat, Vec<(Vec<u32>, Rat)>, Vec<RatVec>)> = Vec::new();
    for blocks in compositions(&spec.dimension) {
        let k = blocks.len();
        let mut ws = vec![-w_bound; k];
        'grid: loop {
            let label = sodkit::presets::PartitionLabel::new(
                blocks
                    .iter()
                    .zip(&ws)
                    .map(|(b, &w)| (b.clone(), sodkit::ratlin::rint(w)))
                    .collect(),
            );
            if let Ok(partition) = label {
                let key = sodkit::presets::quiver_sort_key(&partition)?;
                if key <= radius {
                    let labels = sodkit::presets::quiver_delta_labels(&spec, &partition)?;
                    rows.push((key, partition.blocks.clone(), labels));
                }
            }
            for i in (0..k).rev() {
                ws[i] += 1;
                if ws[i] <= w_bound {
                    continue 'grid;
                }
                ws[i] = -w_bound;
            }
            break;
        }
    }
    rows.sort_by(|a, b| {
        b.0.cmp(&a.0).then_with(|| {
            let ka: Vec<_> = a.1.iter().map(|(d, w)| (d.clone(), w.clone())).collect();
            let kb: Vec<_> = b.1.iter().map(|(d, w)| (d.clone(), w.clone())).collect();
            ka.cmp(&kb)
        })
    });

    let fmt_blocks = |blocks: &[(Vec<u32>, Rat)]| -> String {
        blocks
            .iter()
            .map(|(d, w)| {
                let dims: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                format!("({};{})", dims.join(","), w)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let fmt_labels = |labels: &[RatVec]| -> String {
        labels
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };

    let output = match format {
        OutputFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record(["sort_key", "partition", "delta_labels"])
                .map_err(|e| CliError::Config(e.to_string()))?;
            for (key, blocks, labels) in &rows {
                wtr.write_record([
                    key.to_string(),
                    fmt_blocks(blocks),
                    fmt_labels(labels),
                ])
                .map_err(|e| CliError::Config(e.to_string()))?;
            }
            let bytes = wtr
                .into_inner()
                .map_err(|e| CliError::Config(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Config(e.to_string()))?
        }
        _ => {
            let mut out = String::new();
            out.push_str(&format!(
                "# {} partitions with sort key <= {} and |w_j| <= {}\n",
                rows.len(),
                radius,
                w_bound
            ));
            out.push_str(
                "# windows live on semistable substacks; labels are the linear-model layer\n",
            );
            for (key, blocks, labels) in &rows {
                out.push_str(&format!(
                    "key={} partition={} labels={}\n",
                    key,
                    fmt_blocks(blocks),
                    fmt_labels(labels)
                ));
            }
            out
        }
    };
    Ok(CommandResult::pass(output))
}

/// Levi data table, with optional slope test and curve label for a weight.
pub fn run_levis(
    cfg: &ProjectConfig,
    weight: Option<&str>,
    kappa: Option<&str>,
) -> Result<CommandResult, CliError> {
    let sod_cfg = cfg.build_sod()?;
    let rd = sod_cfg.root_datum();
    let plus_norm = match &cfg.killing_q {
        Some(m) => {
            let norm = QuadraticNorm::new(ProjectConfig::parse_matrix(m)?)?;
            norm.check_weyl_invariance(rd)?;
            Some(norm)
        }
        None => None,
    };
    let mut out = String::new();
    if plus_norm.is_some() {
        out.push_str(
            "note: positive-cone test uses killing_q, which differs from the ordering form q\n",
        );
    }
    let norm = plus_norm.as_ref().unwrap_or_else(|| sod_cfg.norm());
    let kappa_rat = match kappa {
        Some(k) => Some(
            k.parse::<Rat>()
                .map_err(|e| CliError::Config(format!("bad kappa {k:?}: {e}")))?,
        ),
        None => None,
    };
    let w = match weight {
        Some(s) => Some(parse_rat_vector(s, rd.rank())?),
        None => None,
    };
    let n_simple = rd.simple_indices().len();
    for mask in 0..(1u32 << n_simple) {
        let subset: Vec<usize> = (0..n_simple).filter(|i| mask & (1 << i) != 0).collect();
        let levi = rd.levi(&subset)?;
        let (rho_l, complement) = rd.levi_data(&levi);
        let subset_str: Vec<String> = subset.iter().map(|s| s.to_string()).collect();
        out.push_str(&format!(
            "levi {{{}}}: rho_L={} rho_G-rho_L={} outside_roots={}\n",
            subset_str.join(","),
            rho_l,
            rd.rho() - &rho_l,
            complement.len()
        ));
        if let Some(wv) = &w {
            if !rd.is_levi_invariant(&levi, wv) {
                out.push_str("  weight: not Levi-invariant, skipped\n");
                continue;
            }
            let (mu, in_plus) = rd.slope_and_plus_test(&levi, wv, norm)?;
            out.push_str(&format!("  slope mu(w)={mu} in_plus={in_plus}\n"));
            if let (true, Some(kap)) = (in_plus, &kappa_rat) {
                let label = sodkit::presets::curve_labels(rd, kap, &levi, wv, norm)?;
                out.push_str(&format!("  label (kappa={kap}): {label}\n"));
            }
        }
    }
    Ok(CommandResult::pass(out))
}

/// Negative-control helper used by tests: the semiorthogonality suite with
/// one window shifted by an integer offset. A nonzero shift must produce
/// violations on genuine configurations.
pub fn corrupted_semiorthogonality(
    sod_cfg: &SodConfig,
    lambda: &RatVec,
    lambda_prime: &RatVec,
    offset: i64,
) -> Result<InequalityReport, CliError> {
    let lam = lambda_data(sod_cfg, lambda)?;
    let lam_p = lambda_data(sod_cfg, lambda_prime)?;
    let win = window(sod_cfg, &lam.lambda)?;
    let win_p = window(sod_cfg, &lam_p.lambda)?;
    let corrupted: Vec<IntVec> = win_p
        .dominant_points
        .iter()
        .map(|p| p.iter().map(|&x| x + offset).collect())
        .collect();
    sod::check_semiorthogonality_points(
        sod_cfg,
        &lam.lambda,
        &win.dominant_points,
        &lam_p.lambda,
        &corrupted,
        None,
    )
    .map_err(CliError::Core)
}
