use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use anyhow::{Context, Result};
use rankprobe::dataset::{prepare, AttributeMatrix, Preset};
use rankprobe::enforce::{self, DiagnoseMode, EnforceConfig, FeasibilityReport};
use rankprobe::improve::{improve_case_one, improvement_histogram, DEFAULT_BUCKETS};
use rankprobe::kemeny::{self, KemenyIlp, RankAggregator, RankTable};
use rankprobe::lp::{emit_lp_format, LpModel, SolverOptions};
use rankprobe::registry::Registry;
use rankprobe::sampler::{monte_carlo, MonteCarloConfig, MonteCarloStats, SeededGenerator};
use rankprobe::scoring::{rank_by_score, scorers, ArithmeticMean, GeometricMean, Ranking, Scorer, WeightVector};
use rankprobe::Error;

use crate::report::{emit, Cell, Report};
use crate::{Cli, Command, Common, Diagnose};

type Header = Vec<(String, String)>;

/// Stream used for `--weights random`; Monte Carlo runs use streams from 0.
const RANDOM_WEIGHTS_STREAM: u64 = u64::MAX;

fn config_error(msg: impl Into<String>) -> anyhow::Error {
    Error::Config(msg.into()).into()
}

pub fn run(cli: &Cli) -> Result<()> {
    let c = &cli.common;
    if c.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(c.threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let cfg = enforce_config(c)?;
    let header = header(cli);
    let reports = match &cli.command {
        Command::Prepare => cmd_prepare(c, &header)?,
        Command::Rank => cmd_rank(c, &header)?,
        Command::Montecarlo => cmd_montecarlo(c, &header)?,
        Command::Feasible { k, max_k, diagnose } => cmd_feasible(c, &header, &cfg, *k, *max_k, *diagnose)?,
        Command::Appealing { k } => cmd_appealing(c, &header, &cfg, *k)?,
        Command::Bestrank => cmd_bestrank(c, &header, &cfg)?,
        Command::Kemeny { rankings, method, top } => cmd_kemeny(c, &header, &cfg, rankings.as_deref(), method, *top)?,
        Command::Improve => cmd_improve(c, &header)?,
    };
    emit(&reports, c.format, c.out.as_deref())
}

fn enforce_config(c: &Common) -> Result<EnforceConfig> {
    let cfg = EnforceConfig {
        epsilon: c.epsilon,
        big_m_slack: c.big_m_slack,
        big_m_rank: c.big_m_rank,
        solver: SolverOptions {
            max_iterations: c.max_iterations,
            max_nodes: c.max_nodes,
        },
    };
    cfg.validate()?;
    if c.group_size == 0 {
        return Err(config_error("--group-size must be positive"));
    }
    if c.top_k == 0 {
        return Err(config_error("--top-k must be positive"));
    }
    Ok(cfg)
}

fn header(cli: &Cli) -> Header {
    let c = &cli.common;
    let command = match &cli.command {
        Command::Prepare => "prepare".to_string(),
        Command::Rank => "rank".to_string(),
        Command::Montecarlo => "montecarlo".to_string(),
        Command::Feasible { k, max_k, diagnose } => {
            let mut s = "feasible".to_string();
            if let Some(k) = k {
                s.push_str(&format!(" --k {k}"));
            }
            if *max_k {
                s.push_str(" --max-k");
            }
            if let Some(d) = diagnose {
                s.push_str(match d {
                    Diagnose::Slack => " --diagnose slack",
                    Diagnose::MinCount => " --diagnose min-count",
                });
            }
            s
        }
        Command::Appealing { k } => format!("appealing --k {k}"),
        Command::Bestrank => "bestrank".to_string(),
        Command::Kemeny { rankings, method, top } => {
            let mut s = format!("kemeny --method {method} --top {top}");
            if let Some(r) = rankings {
                s.push_str(&format!(" --rankings {}", r.display()));
            }
            s
        }
        Command::Improve => "improve".to_string(),
    };
    let inputs: Vec<String> = c.input.iter().map(|p| p.display().to_string()).collect();
    let mut h = vec![
        ("command".to_string(), command),
        ("input".to_string(), inputs.join(" ")),
        (
            "preset".to_string(),
            c.preset.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
        ),
        ("mean".to_string(), c.mean.clone()),
        ("weights".to_string(), c.weights.clone()),
        ("runs".to_string(), c.runs.to_string()),
        ("seed".to_string(), c.seed.to_string()),
        ("epsilon".to_string(), c.epsilon.to_string()),
        ("big_m_rank".to_string(), c.big_m_rank.to_string()),
        ("big_m_slack".to_string(), c.big_m_slack.to_string()),
        ("top_k".to_string(), c.top_k.to_string()),
        ("group_size".to_string(), c.group_size.to_string()),
        ("max_iterations".to_string(), c.max_iterations.to_string()),
        ("max_nodes".to_string(), c.max_nodes.to_string()),
    ];
    if !c.target.is_empty() {
        h.push(("target".to_string(), c.target.join(" | ")));
    }
    h
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_matrix(c: &Common) -> Result<AttributeMatrix> {
    if c.input.is_empty() {
        return Err(config_error("--input is required"));
    }
    if let Some(preset) = &c.preset {
        let preset = Preset::load(preset)?;
        let inputs = c.input.iter().map(|p| read(p)).collect::<Result<Vec<_>>>()?;
        return Ok(prepare(&preset, &inputs)?.matrix);
    }
    if c.input.len() != 1 {
        return Err(config_error("a prepared matrix is a single --input; pass --preset for raw tables"));
    }
    let text = read(&c.input[0])?;
    Ok(AttributeMatrix::read_csv(text.as_bytes())?)
}

fn load_weights(c: &Common, m: usize) -> Result<WeightVector> {
    match c.weights.as_str() {
        "uniform" => Ok(WeightVector::uniform(m)?),
        "random" => Ok(SeededGenerator::new(c.seed).weights(RANDOM_WEIGHTS_STREAM, m)?),
        path => {
            let text = read(Path::new(path))?;
            let mut values = Vec::new();
            for line in text.lines() {
                let line = line.split('#').next().unwrap_or("");
                for tok in line.split(|ch: char| ch == ',' || ch.is_whitespace()).filter(|t| !t.is_empty()) {
                    values.push(tok.parse::<f64>().map_err(|_| Error::InvalidWeights(format!("`{tok}` in {path}")))?);
                }
            }
            if values.len() != m {
                return Err(Error::Dimension {
                    expected: m,
                    found: values.len(),
                }
                .into());
            }
            Ok(WeightVector::new(values)?)
        }
    }
}

fn scorer(c: &Common) -> Result<&'static dyn Scorer> {
    static SCORERS: OnceLock<Registry<dyn Scorer>> = OnceLock::new();
    Ok(SCORERS.get_or_init(scorers).get(&c.mean)?)
}

fn base_ranking(c: &Common, a: &AttributeMatrix) -> Result<Ranking> {
    let w = load_weights(c, a.cols())?;
    Ok(rank_by_score(&scorer(c)?.score(a, &w)?))
}

fn target_rows(c: &Common, a: &AttributeMatrix) -> Result<Vec<usize>> {
    c.target
        .iter()
        .map(|t| a.row_index(t).ok_or_else(|| config_error(format!("no row labelled `{t}`"))))
        .collect()
}

fn write_lp(dir: Option<&Path>, name: &str, model: &LpModel) -> Result<()> {
    if let Some(dir) = dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path: PathBuf = dir.join(format!("{name}.lp"));
        fs::write(&path, emit_lp_format(model)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn weight_columns(a: &AttributeMatrix) -> Vec<String> {
    a.columns().iter().map(|c| format!("w_{c}")).collect()
}

fn weight_cells(w: Option<&WeightVector>, m: usize) -> Vec<Cell> {
    match w {
        Some(w) => w.as_slice().iter().map(|&v| Cell::Float(v)).collect(),
        None => vec![Cell::Empty; m],
    }
}

fn cmd_prepare(c: &Common, header: &Header) -> Result<Vec<Report>> {
    let Some(preset_path) = &c.preset else {
        return Err(config_error("prepare needs --preset"));
    };
    let preset = Preset::load(preset_path)?;
    let inputs = c.input.iter().map(|p| read(p)).collect::<Result<Vec<_>>>()?;
    let prepared = prepare(&preset, &inputs)?;
    let a = &prepared.matrix;

    let mut cols = vec!["label".to_string()];
    cols.extend(a.columns().iter().cloned());
    let mut matrix = Report::with_columns("matrix", header, cols);
    for i in 0..a.rows() {
        let mut row = vec![Cell::Text(a.labels()[i].clone())];
        row.extend(a.row(i).iter().map(|&v| Cell::Float(v)));
        matrix.push(row);
    }

    let p = &prepared.provenance;
    let mut prov = Report::new("provenance", header, &["stage", "value"]);
    for (name, n) in &p.parsed {
        prov.push(vec![format!("parsed:{name}").into(), (*n).into()]);
    }
    prov.push(vec!["joined".into(), p.joined.into()]);
    prov.push(vec!["complete_without_imputation".into(), p.complete_without_imputation.into()]);
    prov.push(vec!["complete".into(), p.complete.into()]);
    prov.push(vec!["division_by_zero".into(), p.division_by_zero.into()]);
    prov.push(vec!["normalized_columns".into(), p.normalized_columns.join(" ").into()]);
    Ok(vec![matrix, prov])
}

fn cmd_rank(c: &Common, header: &Header) -> Result<Vec<Report>> {
    let a = load_matrix(c)?;
    let w = load_weights(c, a.cols())?;
    let uniform = WeightVector::uniform(a.cols())?;
    let chosen = scorer(c)?;
    let scores = chosen.score(&a, &w)?;
    let main = rank_by_score(&scores);
    let rank = |s: &dyn Scorer, w: &WeightVector| -> Result<Ranking> { Ok(rank_by_score(&s.score(&a, w)?)) };
    let geom = GeometricMean::default();
    let table = [
        rank(&ArithmeticMean, &uniform)?,
        rank(&geom, &uniform)?,
        rank(&ArithmeticMean, &w)?,
        rank(&geom, &w)?,
    ];

    let mut h = header.clone();
    let values: Vec<String> = w.as_slice().iter().map(|v| v.to_string()).collect();
    h.push(("weight_values".to_string(), values.join(" ")));
    let mut r = Report::new(
        "ranking",
        &h,
        &["rank", "label", "score", "arith_uniform", "geom_uniform", "arith_weights", "geom_weights"],
    );
    for (p, &i) in main.order().iter().enumerate() {
        let mut row: Vec<Cell> = vec![(p + 1).into(), a.labels()[i].as_str().into(), scores.as_slice()[i].into()];
        row.extend(table.iter().map(|t| Cell::from(t.rank_of(i))));
        r.push(row);
    }
    Ok(vec![r])
}

fn run_monte_carlo(c: &Common, a: &AttributeMatrix) -> Result<MonteCarloStats> {
    if c.runs == 0 {
        return Err(config_error("--runs must be positive"));
    }
    let config = MonteCarloConfig {
        runs: c.runs,
        top_k: c.top_k,
        group_size: c.group_size,
    };
    Ok(monte_carlo(a, scorer(c)?, &SeededGenerator::new(c.seed), config)?)
}

fn cmd_montecarlo(c: &Common, header: &Header) -> Result<Vec<Report>> {
    let a = load_matrix(c)?;
    let stats = run_monte_carlo(c, &a)?;
    let mut r = Report::new(
        "montecarlo",
        header,
        &[
            "label",
            "score_avg",
            "score_std",
            "score_cv",
            "rank_avg",
            "rank_std",
            "rank_cv",
            "prob_top_k",
            "group",
            "min_rank",
            "max_rank",
            "min_count",
            "max_count",
            "product",
            "product_relative",
        ],
    );
    for s in &stats.rows {
        r.push(vec![
            s.label.as_str().into(),
            s.score_avg.into(),
            s.score_std.into(),
            s.score_cv.into(),
            s.rank_avg.into(),
            s.rank_std.into(),
            s.rank_cv.into(),
            s.prob_top_k.into(),
            s.group.into(),
            s.min_rank.into(),
            s.max_rank.into(),
            s.min_count.into(),
            s.max_count.into(),
            s.product.raw.into(),
            s.product.relative.into(),
        ]);
    }
    let mut hist = Report::new("rank_histogram", header, &["label", "rank", "count"]);
    for i in 0..a.rows() {
        for (rank, count) in stats.histogram.row_counts(i) {
            hist.push(vec![a.labels()[i].as_str().into(), rank.into(), count.into()]);
        }
    }
    Ok(vec![r, hist])
}

fn diagnose_mode(d: Diagnose) -> DiagnoseMode {
    match d {
        Diagnose::Slack => DiagnoseMode::Slack,
        Diagnose::MinCount => DiagnoseMode::MinCount,
    }
}

fn diagnosis_report(
    a: &AttributeMatrix,
    header: &Header,
    cfg: &EnforceConfig,
    scope: &str,
    pairs: &[enforce::Pair],
    mode: Diagnose,
    lp_dir: Option<&Path>,
) -> Result<Report> {
    match mode {
        Diagnose::Slack => write_lp(lp_dir, &format!("diagnose_{scope}"), &enforce::slack_model(a, pairs, cfg)?.model)?,
        Diagnose::MinCount => write_lp(
            lp_dir,
            &format!("diagnose_{scope}"),
            &enforce::count_model(a, pairs, cfg, false)?.model,
        )?,
    }
    let rep = enforce::diagnose_pairs(a, pairs, cfg, diagnose_mode(mode))?;
    let mut r = Report::new("diagnosis", header, &["scope", "above", "below"]);
    for &(hi, lo) in &rep.violated {
        r.push(vec![
            scope.into(),
            a.labels()[hi].as_str().into(),
            a.labels()[lo].as_str().into(),
        ]);
    }
    Ok(r)
}

fn cmd_feasible(
    c: &Common,
    header: &Header,
    cfg: &EnforceConfig,
    k: Option<usize>,
    max_k: bool,
    diagnose: Option<Diagnose>,
) -> Result<Vec<Report>> {
    let a = load_matrix(c)?;
    let base = base_ranking(c, &a)?;
    let m = a.cols();
    let lp_dir = c.emit_lp.as_deref();

    if max_k {
        let (best, reports) = enforce::max_feasible_k(&a, base.order(), cfg)?;
        let mut cols = vec!["k".to_string(), "feasible".to_string()];
        cols.extend(weight_columns(&a));
        let mut r = Report::with_columns("feasible_prefix", header, cols);
        for (i, rep) in reports.iter().enumerate() {
            let mut row = vec![Cell::from(i + 1), rep.feasible.into()];
            row.extend(weight_cells(rep.weights.as_ref(), m));
            r.push(row);
        }
        let mut s = Report::new("summary", header, &["metric", "value"]);
        s.push(vec!["max_feasible_k".into(), best.into()]);
        return Ok(vec![r, s]);
    }

    if let Some(k) = k {
        if k == 0 || k > a.rows() {
            return Err(config_error(format!("--k must be in 1..={}", a.rows())));
        }
        write_lp(lp_dir, &format!("topk_{k}"), &enforce::topk_model(&a, base.order(), k, cfg)?.model)?;
        let rep = enforce::feasible_topk(&a, base.order(), k, cfg)?;
        let mut cols = vec!["k".to_string(), "feasible".to_string()];
        cols.extend(weight_columns(&a));
        let mut r = Report::with_columns("feasible_topk", header, cols);
        let mut row = vec![Cell::from(k), rep.feasible.into()];
        row.extend(weight_cells(rep.weights.as_ref(), m));
        r.push(row);
        let mut out = vec![r];
        if let (false, Some(d)) = (rep.feasible, diagnose) {
            let pairs = enforce::topk_pairs(&a, base.order(), k)?;
            out.push(diagnosis_report(&a, header, cfg, &format!("top{k}"), &pairs, d, lp_dir)?);
        }
        return Ok(out);
    }

    let targets = target_rows(c, &a)?;
    let rows: Vec<usize> = if targets.is_empty() { (0..a.rows()).collect() } else { targets };
    for &t in &rows {
        write_lp(
            lp_dir,
            &format!("top1_row{}", t + 1),
            &enforce::pairs_model(&a, &enforce::top1_pairs(&a, t)?, cfg)?.model,
        )?;
    }
    let reports: Vec<FeasibilityReport> = if rows.len() == a.rows() {
        enforce::feasible_top1_all(&a, cfg)?
    } else {
        rows.iter()
            .map(|&t| enforce::feasible_top1(&a, t, cfg))
            .collect::<rankprobe::Result<_>>()?
    };
    let mut cols = vec!["label".to_string(), "base_rank".to_string(), "feasible".to_string()];
    cols.extend(weight_columns(&a));
    let mut r = Report::with_columns("feasible_top1", header, cols);
    for (&t, rep) in rows.iter().zip(&reports) {
        let mut row = vec![a.labels()[t].as_str().into(), base.rank_of(t).into(), rep.feasible.into()];
        row.extend(weight_cells(rep.weights.as_ref(), m));
        r.push(row);
    }
    let feasible: Vec<usize> = rows
        .iter()
        .zip(&reports)
        .filter(|(_, rep)| rep.feasible)
        .map(|(&t, _)| base.rank_of(t))
        .collect();
    let mut s = Report::new("summary", header, &["metric", "value"]);
    s.push(vec!["rows".into(), rows.len().into()]);
    s.push(vec!["feasible".into(), feasible.len().into()]);
    s.push(vec!["worst_feasible_base_rank".into(), feasible.iter().max().copied().into()]);
    let mut out = vec![r, s];
    if let Some(d) = diagnose {
        let mut all = Report::new("diagnosis", header, &["scope", "above", "below"]);
        for (&t, rep) in rows.iter().zip(&reports) {
            if !rep.feasible {
                let pairs = enforce::top1_pairs(&a, t)?;
                let part = diagnosis_report(&a, header, cfg, &format!("top1_row{}", t + 1), &pairs, d, lp_dir)?;
                all.rows.extend(part.rows);
            }
        }
        out.push(all);
    }
    Ok(out)
}

fn cmd_appealing(c: &Common, header: &Header, cfg: &EnforceConfig, k: usize) -> Result<Vec<Report>> {
    let a = load_matrix(c)?;
    if k > a.rows() {
        return Err(config_error(format!("--k must be at most {}", a.rows())));
    }
    let base = base_ranking(c, &a)?;
    let pairs = if k == 0 { Vec::new() } else { enforce::topk_pairs(&a, base.order(), k)? };
    write_lp(c.emit_lp.as_deref(), &format!("appealing_{k}"), &enforce::appealing_model(&a, &pairs, cfg)?.model)?;
    let rep = enforce::appealing_weights(&a, base.order(), k, cfg)?;
    let mut r = Report::new("appealing", header, &["attribute", "weight"]);
    let weights = weight_cells(rep.weights.as_ref(), a.cols());
    for (name, w) in a.columns().iter().zip(weights) {
        r.push(vec![name.as_str().into(), w]);
    }
    let mut s = Report::new("summary", header, &["metric", "value"]);
    s.push(vec!["k".into(), k.into()]);
    s.push(vec!["feasible".into(), rep.feasible.into()]);
    s.push(vec!["spread".into(), rep.weights.as_ref().map(WeightVector::spread).into()]);
    Ok(vec![r, s])
}

fn cmd_bestrank(c: &Common, header: &Header, cfg: &EnforceConfig) -> Result<Vec<Report>> {
    let a = load_matrix(c)?;
    let targets = target_rows(c, &a)?;
    let rows: Vec<usize> = if targets.is_empty() { (0..a.rows()).collect() } else { targets };
    for &t in &rows {
        write_lp(
            c.emit_lp.as_deref(),
            &format!("bestrank_row{}", t + 1),
            &enforce::best_rank_model(&a, t, cfg)?.model,
        )?;
    }
    let mc = run_monte_carlo(c, &a)?;
    let table = enforce::best_rank_table(&a, cfg, &mc, &rows)?;
    let mut cols = vec![
        "label".to_string(),
        "deterministic".to_string(),
        "random".to_string(),
        "optimal".to_string(),
    ];
    cols.extend(weight_columns(&a));
    let mut r = Report::with_columns("bestrank", header, cols);
    for row in &table {
        let mut cells = vec![
            row.label.as_str().into(),
            row.deterministic.into(),
            row.random.into(),
            row.optimal.into(),
        ];
        cells.extend(weight_cells(Some(&row.weights), a.cols()));
        r.push(cells);
    }
    let mut s = Report::new("summary", header, &["metric", "value"]);
    s.push(vec!["rows".into(), table.len().into()]);
    s.push(vec![
        "optimal_rank_1".into(),
        table.iter().filter(|r| r.optimal == 1).count().into(),
    ]);
    Ok(vec![r, s])
}

fn cmd_kemeny(
    c: &Common,
    header: &Header,
    cfg: &EnforceConfig,
    rankings: Option<&Path>,
    method: &str,
    top: usize,
) -> Result<Vec<Report>> {
    let table = match rankings {
        Some(path) => RankTable::parse_lists(&read(path)?, b',')?,
        None => {
            let a = load_matrix(c)?;
            if top == 0 {
                return Err(config_error("--top must be positive"));
            }
            let base = base_ranking(c, &a)?;
            let rows = &base.order()[..top.min(a.rows())];
            kemeny::per_attribute_ranks(&a.select_rows(rows)?)
        }
    };
    let registry = kemeny::aggregators();
    let chosen = registry.get(method)?;
    let ilp = KemenyIlp { options: cfg.solver };
    let aggregator: &dyn RankAggregator = if chosen.name() == "kemeny-ilp" { &ilp } else { chosen };
    if c.emit_lp.is_some() {
        write_lp(c.emit_lp.as_deref(), "kemeny", &kemeny::kemeny_model(&kemeny::precedence_counts(&table))?)?;
    }
    let rep = kemeny::kemeny_report(table, aggregator)?;
    let t = &rep.table;

    let mut cols = vec!["item".to_string()];
    cols.extend(t.sources().iter().cloned());
    cols.push("kemeny".to_string());
    cols.push("average".to_string());
    let mut r = Report::with_columns("kemeny", header, cols);
    for &i in rep.kemeny.order() {
        let mut row = vec![Cell::Text(t.items()[i].clone())];
        row.extend(t.rankings().iter().map(|x| Cell::from(x.rank_of(i))));
        row.push(rep.kemeny.rank_of(i).into());
        row.push(rep.average.rank_of(i).into());
        r.push(row);
    }
    let mut d = Report::new("kemeny_distances", header, &["source", "footrule"]);
    for (s, dist) in t.sources().iter().zip(&rep.distances) {
        d.push(vec![s.as_str().into(), (*dist).into()]);
    }
    let mut s = Report::new("summary", header, &["metric", "value"]);
    s.push(vec!["method".into(), aggregator.name().into()]);
    s.push(vec!["items".into(), t.len().into()]);
    s.push(vec!["kemeny_cost".into(), rep.kemeny_cost.into()]);
    s.push(vec!["average_cost".into(), rep.average_cost.into()]);
    s.push(vec!["footrule_average_vs_kemeny".into(), rep.average_vs_kemeny.into()]);
    s.push(vec!["mean_footrule_to_kemeny".into(), rep.mean_distance.into()]);
    Ok(vec![r, d, s])
}

fn cmd_improve(c: &Common, header: &Header) -> Result<Vec<Report>> {
    let a = load_matrix(c)?;
    let w = load_weights(c, a.cols())?;
    let rep = improve_case_one(&a, &w)?;
    let mut h = header.clone();
    h.push(("scoring".to_string(), "arith".to_string()));
    let mut r = Report::new(
        "improve",
        &h,
        &[
            "label",
            "old_rank",
            "attribute",
            "delta",
            "old_score",
            "new_score",
            "case_one_rank",
            "case_all_rank",
            "improvement",
            "case_all_improvement",
            "score_ratio",
        ],
    );
    let mut rows: Vec<_> = rep.rows.iter().collect();
    rows.sort_by_key(|x| x.old_rank);
    for x in rows {
        r.push(vec![
            x.label.as_str().into(),
            x.old_rank.into(),
            a.columns()[x.attribute].as_str().into(),
            x.delta.into(),
            x.old_score.into(),
            x.new_score.into(),
            x.case_one_rank.into(),
            x.case_all_rank.into(),
            x.improvement.into(),
            x.case_all_improvement.into(),
            x.score_ratio.into(),
        ]);
    }
    let one = improvement_histogram(&rep.improvements(), DEFAULT_BUCKETS)?;
    let all = improvement_histogram(&rep.case_all_improvements(), DEFAULT_BUCKETS)?;
    let mut hist = Report::new(
        "improve_histogram",
        &h,
        &["low", "high", "case_one", "case_one_cumulative", "case_all", "case_all_cumulative"],
    );
    for b in 0..DEFAULT_BUCKETS {
        hist.push(vec![
            one.edge(b).into(),
            one.edge(b + 1).into(),
            one.counts[b].into(),
            one.cumulative[b].into(),
            all.counts[b].into(),
            all.cumulative[b].into(),
        ]);
    }
    Ok(vec![r, hist])
}
