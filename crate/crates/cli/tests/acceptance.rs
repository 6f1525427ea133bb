//! Acceptance criteria, one PASS/FAIL/SKIP line each.
//!
//! Criteria 9-12 need the College data files (`usnews.data`, `aaup.data`) in
//! the directory named by `COLLEGE_DATA_DIR`; without it they print SKIP.
//! Criterion 13 falls back to a synthetic matrix of the same shape. Set
//! `COLLEGE_FULL_BESTRANK` to run criterion 11 through the full best-rank
//! program for every row.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rayon::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankprobe::dataset::{prepare, AttributeMatrix, Preset};
use rankprobe::enforce::{self, EnforceConfig};
use rankprobe::improve::{improve_case_one, score_delta};
use rankprobe::kemeny::{self, PrecedenceMatrix, RankTable};
use rankprobe::lp::{self, LpBuilder, LpModel, Relation, Sense, SolveStatus, SolverOptions};
use rankprobe::sampler::{monte_carlo, MonteCarloConfig, SeededGenerator};
use rankprobe::scoring::{rank_by_score, ArithmeticMean, GeometricMean, Ranking, Scorer, WeightVector};

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

// ---------------------------------------------------------------- LP oracle

struct RandomLp {
    n: usize,
    bounds: Vec<(f64, f64)>,
    rows: Vec<(Vec<f64>, Relation, f64)>,
    cost: Vec<f64>,
    sense: Sense,
}

fn random_lp(rng: &mut ChaCha8Rng, binary: bool) -> RandomLp {
    let n = if binary { rng.gen_range(1..=12) } else { rng.gen_range(1..=4) };
    let k = rng.gen_range(0..=6);
    let bounds = (0..n)
        .map(|_| {
            if binary {
                (0.0, 1.0)
            } else {
                let lo = rng.gen_range(-5..=2) as f64;
                (lo, lo + rng.gen_range(1..=8) as f64)
            }
        })
        .collect();
    let rows = (0..k)
        .map(|_| {
            let coefs: Vec<f64> = (0..n).map(|_| rng.gen_range(-4..=4) as f64).collect();
            let rel = match rng.gen_range(0..5) {
                0 => Relation::Eq,
                1 | 2 => Relation::Ge,
                _ => Relation::Le,
            };
            (coefs, rel, rng.gen_range(-6..=8) as f64)
        })
        .collect();
    let cost = (0..n).map(|_| rng.gen_range(-5..=5) as f64).collect();
    let sense = if rng.gen_bool(0.5) { Sense::Minimize } else { Sense::Maximize };
    RandomLp {
        n,
        bounds,
        rows,
        cost,
        sense,
    }
}

fn build(p: &RandomLp, binary: bool) -> LpModel {
    let mut b = LpBuilder::new();
    let vars: Vec<_> = (0..p.n)
        .map(|j| {
            if binary {
                b.binary(format!("y{j}"))
            } else {
                b.var(format!("x{j}"), p.bounds[j].0, p.bounds[j].1)
            }
        })
        .collect();
    for (coefs, rel, rhs) in &p.rows {
        b.constraint(vars.iter().copied().zip(coefs.iter().copied()).collect(), *rel, *rhs);
    }
    b.objective(p.sense, vars.iter().copied().zip(p.cost.iter().copied()).collect(), 0.0);
    b.build().unwrap()
}

fn feasible_point(p: &RandomLp, x: &[f64], tol: f64) -> bool {
    x.iter().zip(&p.bounds).all(|(&v, &(lo, hi))| v >= lo - tol && v <= hi + tol)
        && p.rows.iter().all(|(c, rel, rhs)| {
            let act: f64 = c.iter().zip(x).map(|(a, b)| a * b).sum();
            match rel {
                Relation::Le => act <= rhs + tol,
                Relation::Ge => act >= rhs - tol,
                Relation::Eq => (act - rhs).abs() <= tol,
            }
        })
}

fn objective(p: &RandomLp, x: &[f64]) -> f64 {
    p.cost.iter().zip(x).map(|(c, v)| c * v).sum()
}

// Gaussian elimination with partial pivoting; None if singular.
fn solve_square(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-10 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..n {
                    m[r][c] -= f * m[col][c];
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}

// Best objective over all basic feasible points; None if infeasible.
fn vertex_oracle(p: &RandomLp) -> Option<f64> {
    let mut planes: Vec<(Vec<f64>, f64)> = p.rows.iter().map(|(c, _, r)| (c.clone(), *r)).collect();
    for j in 0..p.n {
        let mut e = vec![0.0; p.n];
        e[j] = 1.0;
        planes.push((e.clone(), p.bounds[j].0));
        planes.push((e, p.bounds[j].1));
    }
    let mut best: Option<f64> = None;
    let mut pick = Vec::new();
    fn combos(start: usize, total: usize, need: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if pick.len() == need {
            f(pick);
            return;
        }
        for i in start..total {
            pick.push(i);
            combos(i + 1, total, need, pick, f);
            pick.pop();
        }
    }
    let sign = if p.sense == Sense::Minimize { 1.0 } else { -1.0 };
    combos(0, planes.len(), p.n, &mut pick, &mut |idx| {
        let m: Vec<Vec<f64>> = idx.iter().map(|&i| planes[i].0.clone()).collect();
        let r: Vec<f64> = idx.iter().map(|&i| planes[i].1).collect();
        if let Some(x) = solve_square(m, r) {
            if feasible_point(p, &x, 1e-7) {
                let v = objective(p, &x);
                if best.map_or(true, |b| sign * v < sign * b) {
                    best = Some(v);
                }
            }
        }
    });
    best
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for case in 0..500 {
        let p = random_lp(&mut rng, false);
        let res = lp::solve_lp(&build(&p, false), &SolverOptions::default()).unwrap();
        match (vertex_oracle(&p), res.status) {
            (None, SolveStatus::Infeasible) => {}
            (Some(v), SolveStatus::Optimal) => {
                let err = (v - res.objective).abs();
                worst = worst.max(err);
                if err > 1e-6 {
                    bad.push(case);
                }
            }
            _ => bad.push(case),
        }
    }
    let took = start.elapsed();
    check(
        bad.is_empty() && took < Duration::from_secs(10),
        format!("500 LPs, max |error| {worst:.1e}, mismatches {bad:?}, {took:.2?}"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    let mut bad = Vec::new();
    for case in 0..200 {
        let p = random_lp(&mut rng, true);
        let sign = if p.sense == Sense::Minimize { 1.0 } else { -1.0 };
        let mut best: Option<f64> = None;
        for mask in 0u32..(1 << p.n) {
            let x: Vec<f64> = (0..p.n).map(|j| f64::from((mask >> j) & 1)).collect();
            if feasible_point(&p, &x, 0.0) {
                let v = objective(&p, &x);
                if best.map_or(true, |b| sign * v < sign * b) {
                    best = Some(v);
                }
            }
        }
        let res = lp::solve(&build(&p, true), &SolverOptions::default());
        let ok = match (best, res.status) {
            (None, SolveStatus::Infeasible) => true,
            (Some(v), SolveStatus::Optimal) => (v - res.objective).abs() < 1e-9,
            _ => false,
        };
        if !ok {
            bad.push(case);
        }
    }
    check(bad.is_empty(), format!("200 binary models, mismatches {bad:?}"))
}

// ------------------------------------------------------------------- Kemeny

fn enumeration(p: &PrecedenceMatrix) -> u64 {
    let mut order: Vec<usize> = (0..p.len()).collect();
    let mut best = p.cost(&order);
    // Heap's algorithm over all n! orders
    let n = order.len();
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            best = best.min(p.cost(&order));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3003);
    let mut bad = Vec::new();
    for case in 0..200 {
        let n = rng.gen_range(1..=8);
        let r = rng.gen_range(1..=7);
        let rankings: Vec<Ranking> = (0..r)
            .map(|_| {
                let mut o: Vec<usize> = (0..n).collect();
                o.shuffle(&mut rng);
                Ranking::from_order(o).unwrap()
            })
            .collect();
        let t = RankTable::new(
            (0..n).map(|i| i.to_string()).collect(),
            (0..r).map(|i| i.to_string()).collect(),
            rankings,
        )
        .unwrap();
        let p = kemeny::precedence_counts(&t);
        let ilp = kemeny::kemeny_ilp(&p, &SolverOptions::default()).unwrap();
        let dp = kemeny::kemeny_dp(&p).unwrap();
        let exact = enumeration(&p);
        if p.cost(ilp.order()) != exact || p.cost(dp.order()) != exact {
            bad.push(case);
        }
    }
    check(bad.is_empty(), format!("200 instances, ILP = DP = n! search; mismatches {bad:?}"))
}

// ------------------------------------------------------------------ Sampler

fn criterion_4() -> Outcome {
    let (m, n) = (11, 10_000u64);
    let gen = SeededGenerator::new(404);
    let mut sum = vec![0.0; m];
    let mut sq = vec![0.0; m];
    let mut worst_sum = 0.0f64;
    for run in 0..n {
        let w = gen.weights(run, m).unwrap();
        worst_sum = worst_sum.max((w.as_slice().iter().sum::<f64>() - 1.0).abs());
        for (j, &v) in w.as_slice().iter().enumerate() {
            sum[j] += v;
            sq[j] += v * v;
        }
    }
    let mut worst_z = 0.0f64;
    for j in 0..m {
        let mean = sum[j] / n as f64;
        let var = sq[j] / n as f64 - mean * mean;
        let se = (var / n as f64).sqrt();
        worst_z = worst_z.max((mean - 1.0 / m as f64).abs() / se);
    }
    check(
        worst_z <= 4.0 && worst_sum <= 1e-12,
        format!("max |mean - 1/11| = {worst_z:.2} SE, max |sum - 1| = {worst_sum:.1e}"),
    )
}

// -------------------------------------------------------------- Enforcement

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, m: usize) -> AttributeMatrix {
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| rng.gen::<f64>()).collect()).collect();
    AttributeMatrix::from_values(&rows).unwrap()
}

fn arith_ranking(a: &AttributeMatrix, w: &WeightVector) -> Ranking {
    rank_by_score(&ArithmeticMean.score(a, w).unwrap())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5005);
    let cfg = EnforceConfig::default();
    let zero = EnforceConfig::with_epsilon(0.0);
    let (mut witness_bad, mut equiv_bad, mut mc_bad, mut checked) = (0, 0, 0, 0);
    for case in 0..100 {
        let a = random_matrix(&mut rng, 10, 4);
        let base = arith_ranking(&a, &WeightVector::uniform(4).unwrap());
        for t in 0..10 {
            let rep = enforce::feasible_top1(&a, t, &cfg).unwrap();
            if let Some(w) = &rep.weights {
                checked += 1;
                if arith_ranking(&a, w).order()[0] != t {
                    witness_bad += 1;
                }
            }
            let best = enforce::best_rank(&a, t, &cfg).unwrap();
            if (best.rank == 1) != rep.feasible {
                equiv_bad += 1;
            }
        }
        for k in 1..=10 {
            let rep = enforce::feasible_topk(&a, base.order(), k, &cfg).unwrap();
            if let Some(w) = &rep.weights {
                checked += 1;
                if arith_ranking(&a, w).order()[..k] != base.order()[..k] {
                    witness_bad += 1;
                }
            }
        }
        // Sampled ranks carry no margin, so the comparison uses ε = 0.
        let mc = monte_carlo(
            &a,
            &ArithmeticMean,
            &SeededGenerator::new(case),
            MonteCarloConfig {
                runs: 1000,
                ..MonteCarloConfig::default()
            },
        )
        .unwrap();
        for t in 0..10 {
            if enforce::best_rank(&a, t, &zero).unwrap().rank > mc.rows[t].min_rank {
                mc_bad += 1;
            }
        }
    }
    check(
        witness_bad == 0 && equiv_bad == 0 && mc_bad == 0,
        format!(
            "{checked} witnesses re-scored ({witness_bad} bad); rank-1 vs top-1 disagreements {equiv_bad}; optimal > MC min {mc_bad}"
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6006);
    let eps = [0.0, 1e-4, 5e-4, 1e-3, 5e-3, 1e-2, 5e-2];
    let (mut eps_bad, mut k_bad) = (0, 0);
    for _ in 0..100 {
        let a = random_matrix(&mut rng, 10, 4);
        for t in 0..10 {
            let mut prev = true;
            for &e in &eps {
                let f = enforce::feasible_top1(&a, t, &EnforceConfig::with_epsilon(e)).unwrap().feasible;
                if f && !prev {
                    eps_bad += 1;
                }
                prev = f;
            }
        }
        let mut order: Vec<usize> = (0..10).collect();
        order.shuffle(&mut rng);
        let mut prev = true;
        for k in 1..=10 {
            let f = enforce::feasible_topk(&a, &order, k, &EnforceConfig::default()).unwrap().feasible;
            if f && !prev {
                k_bad += 1;
            }
            prev = f;
        }
    }
    check(
        eps_bad == 0 && k_bad == 0,
        format!("100 instances; ε violations {eps_bad}, k-prefix violations {k_bad}"),
    )
}

// ------------------------------------------------------------------ Improve

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7007);
    let (mut bad, mut negative) = (0, 0);
    for _ in 0..100 {
        let a = random_matrix(&mut rng, 20, 5);
        let raw: Vec<f64> = (0..5).map(|_| rng.gen()).collect();
        let w = WeightVector::normalize(&raw).unwrap();
        for i in 0..20 {
            for k in 0..5 {
                if score_delta(&a, &w, i, k).unwrap() < 0.0 {
                    negative += 1;
                }
            }
        }
        let rep = improve_case_one(&a, &w).unwrap();
        for r in &rep.rows {
            let top = a.column_max(r.attribute);
            let rescored = |rows: &[usize]| -> usize {
                let data: Vec<Vec<f64>> = (0..20)
                    .map(|i| {
                        let mut row = a.row(i).to_vec();
                        if rows.contains(&i) {
                            row[r.attribute] = top;
                        }
                        row
                    })
                    .collect();
                let b = AttributeMatrix::from_values(&data).unwrap();
                arith_ranking(&b, &w).rank_of(r.row)
            };
            let all: Vec<usize> = (0..20).collect();
            if r.case_one_rank != rescored(&[r.row]) || r.case_all_rank != rescored(&all) {
                bad += 1;
            }
        }
    }
    check(
        bad == 0 && negative == 0,
        format!("2000 rows; rank mismatches {bad}, negative deltas {negative}"),
    )
}

// -------------------------------------------------------------- Determinism

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn criterion_8() -> Outcome {
    let commands: &[&[&str]] = &[
        &["prepare", "--preset", "mini.toml", "--input", "profile.csv", "--input", "faculty.csv"],
        &["rank", "--input", "synthetic8.csv"],
        &["montecarlo", "--input", "synthetic8.csv", "--runs", "2000"],
        &["feasible", "--input", "synthetic8.csv", "--diagnose", "min-count"],
        &["appealing", "--input", "synthetic8.csv", "--k", "3"],
        &["bestrank", "--input", "synthetic8.csv", "--runs", "500"],
        &["kemeny", "--input", "synthetic8.csv"],
        &["improve", "--input", "synthetic8.csv"],
    ];
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_rankprobe"))
            .args(args)
            .current_dir(fixtures())
            .output()
            .unwrap()
    };
    let mut differing = Vec::new();
    for args in commands {
        let (a, b) = (run(args), run(args));
        if !a.status.success() || a.stdout != b.stdout {
            differing.push(args[0]);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8008);
    let a = random_matrix(&mut rng, 60, 6);
    let stats = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            monte_carlo(
                &a,
                &GeometricMean::default(),
                &SeededGenerator::new(88),
                MonteCarloConfig {
                    runs: 20_000,
                    ..MonteCarloConfig::default()
                },
            )
            .unwrap()
        })
    };
    let (one, many) = (stats(1), stats(8));
    let mut worst = 0.0f64;
    for (x, y) in one.rows.iter().zip(&many.rows) {
        for (u, v) in [
            (x.score_avg, y.score_avg),
            (x.score_std, y.score_std),
            (x.rank_avg, y.rank_avg),
            (x.rank_std, y.rank_std),
            (x.prob_top_k, y.prob_top_k),
            (x.product.raw, y.product.raw),
            (x.min_rank as f64, y.min_rank as f64),
            (x.max_rank as f64, y.max_rank as f64),
            (x.group as f64, y.group as f64),
        ] {
            worst = worst.max((u - v).abs());
        }
    }
    check(
        differing.is_empty() && worst <= 1e-9,
        format!(
            "{} commands run twice, differing {differing:?}; 1 vs 8 threads max |diff| {worst:.1e}",
            commands.len()
        ),
    )
}

// ----------------------------------------------------------------- Dataset

fn college() -> Option<AttributeMatrix> {
    college_prepared().map(|p| p.matrix)
}

fn college_prepared() -> Option<rankprobe::dataset::Prepared> {
    let dir = PathBuf::from(std::env::var_os("COLLEGE_DATA_DIR")?);
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let preset = Preset::load(&root.join("presets/college.toml")).ok()?;
    let inputs: Vec<String> = ["usnews.data", "aaup.data"]
        .iter()
        .map(|f| std::fs::read_to_string(dir.join(f)))
        .collect::<Result<_, _>>()
        .ok()?;
    prepare(&preset, &inputs).ok()
}

fn no_data() -> Outcome {
    Outcome::Skip("COLLEGE_DATA_DIR not set or unreadable".into())
}

fn within(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want
}

fn criterion_9() -> Outcome {
    let Some(p) = college_prepared() else { return no_data() };
    let v = &p.provenance;
    let raw = v.parsed.first().map_or(0, |x| x.1);
    check(
        raw == 1133 && v.complete_without_imputation == 603 && v.complete == 609,
        format!(
            "rows {raw} -> {} -> {} (expected 1133 -> 603 -> 609)",
            v.complete_without_imputation, v.complete
        ),
    )
}

fn geometric_base(a: &AttributeMatrix) -> Ranking {
    rank_by_score(&GeometricMean::default().score(a, &WeightVector::uniform(a.cols()).unwrap()).unwrap())
}

fn top1_counts(a: &AttributeMatrix, eps: f64) -> (usize, usize) {
    let base = geometric_base(a);
    let reps = enforce::feasible_top1_all(a, &EnforceConfig::with_epsilon(eps)).unwrap();
    let ranks: Vec<usize> = (0..a.rows()).filter(|&i| reps[i].feasible).map(|i| base.rank_of(i)).collect();
    (ranks.len(), ranks.iter().copied().max().unwrap_or(0))
}

fn criterion_10() -> Outcome {
    let Some(a) = college() else { return no_data() };
    let (n0, r0) = top1_counts(&a, 0.0);
    let (n1, r1) = top1_counts(&a, 0.0005);
    check(
        within(n0 as f64, 45.0, 0.1) && within(n1 as f64, 28.0, 0.1) && within(r0 as f64, 553.0, 0.1) && within(r1 as f64, 536.0, 0.1),
        format!("feasible {n0} / {n1} (45 / 28), worst original rank {r0} / {r1} (553 / 536)"),
    )
}

fn criterion_11() -> Outcome {
    let Some(a) = college() else { return no_data() };
    let cfg = EnforceConfig::default();
    // The full table takes hours on one machine; best rank 1 holds exactly
    // when top-1 is feasible (checked in criterion 5), so that is the default.
    let (n, how) = if std::env::var_os("COLLEGE_FULL_BESTRANK").is_some() {
        let ranks: Result<Vec<usize>, _> = (0..a.rows()).into_par_iter().map(|i| enforce::best_rank(&a, i, &cfg).map(|b| b.rank)).collect();
        match ranks {
            Ok(r) => (r.iter().filter(|&&x| x == 1).count(), "best rank per row"),
            Err(e) => return Outcome::Fail(format!("best rank failed: {e}")),
        }
    } else {
        (top1_counts(&a, cfg.epsilon).0, "top-1 feasibility")
    };
    check((n as i64 - 27).abs() <= 3, format!("{n} rows attain rank 1 via {how} (27 ± 3)"))
}

fn criterion_12() -> Outcome {
    let Some(a) = college() else { return no_data() };
    let base = geometric_base(&a);
    let top = a.select_rows(&base.order()[..20]).unwrap();
    let table = kemeny::per_attribute_ranks(&top);
    let p = kemeny::precedence_counts(&table);
    let k = kemeny::kemeny_ilp(&p, &SolverOptions::default()).unwrap();
    let d = kemeny::footrule(&kemeny::average_rank(&table), &k).unwrap();
    check((d as i64 - 3).abs() <= 2, format!("footrule(average, Kemeny) = {d} (3 ± 2)"))
}

// ------------------------------------------------------------------ Runtime

fn synthetic_college(rows: usize, cols: usize) -> AttributeMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(1313);
    let data: Vec<Vec<f64>> = (0..rows)
        .map(|_| {
            let q: f64 = rng.gen();
            (0..cols)
                .map(|_| (q + 0.25 * (rng.gen::<f64>() - 0.5)).clamp(0.0, 1.0))
                .collect()
        })
        .collect();
    AttributeMatrix::from_values(&data).unwrap()
}

fn criterion_13() -> Outcome {
    let (a, source) = match college() {
        Some(a) => (a, "College data"),
        None => (synthetic_college(609, 11), "synthetic 609x11 stand-in"),
    };
    let start = Instant::now();
    let reps = enforce::feasible_top1_all(&a, &EnforceConfig::default()).unwrap();
    let took = start.elapsed();
    let feasible = reps.iter().filter(|r| r.feasible).count();
    check(
        took < Duration::from_secs(60),
        format!("{} top-1 LPs on {source} in {took:.2?} ({feasible} feasible)", a.rows()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("LP solver matches vertex enumeration", criterion_1),
        ("ILP matches exhaustive enumeration", criterion_2),
        ("Kemeny ILP, DP and enumeration agree", criterion_3),
        ("simplex sampler is unbiased", criterion_4),
        ("enforcement witnesses and rank bounds", criterion_5),
        ("ε and k monotonicity", criterion_6),
        ("improvement ranks match re-scoring", criterion_7),
        ("determinism", criterion_8),
        ("College pipeline row counts", criterion_9),
        ("College top-1 feasibility counts", criterion_10),
        ("College rows attaining rank 1", criterion_11),
        ("College top-20 average vs Kemeny footrule", criterion_12),
        ("top-1 batch runtime", criterion_13),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (tag, detail) = match f() {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Outcome::Skip(d) => ("SKIP", d),
        };
        println!("{tag} {:>2} {name}: {detail}", i + 1);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
