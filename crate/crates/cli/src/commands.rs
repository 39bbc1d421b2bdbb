use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};
use thiserror::Error;

use ddtree_core::bounds::{
    self, expected_frank_bound_exact, expected_frank_bound_mc, f, f_p, frank_lower_bound, BoundsError, ShapeTable,
};
use ddtree_core::count::{sci, to_f64, BigCount};
use ddtree_core::engine::notation::{parse_deal, DealParseError};
use ddtree_core::estimator::{
    branching_profile, estimate_tree_size, paired_trump_nt_profile, BranchingProfile, EstimatorError, Mode, RunSpec,
    TreeSizeReport,
};
use ddtree_core::oracle::{
    count_leaves, count_reachable_states, verify_unbiasedness, EnumerationGuard, OracleError,
};
use ddtree_core::rng::seeded;
use ddtree_core::stats::MomentSummary;
use ddtree_core::{Deal, EngineError, GameParams};

use crate::args::*;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Guard(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Guard(_) => 3,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<DealParseError> for CliError {
    fn from(e: DealParseError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::TooLarge { .. } => CliError::Guard(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<EstimatorError> for CliError {
    fn from(e: EstimatorError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::GuardExceeded(_) => CliError::Guard(e.to_string()),
            OracleError::Engine(e) => e.into(),
        }
    }
}

pub type Output = Result<String, CliError>;

impl GameArgs {
    pub fn params(&self) -> Result<GameParams, CliError> {
        let base = match self.preset {
            Preset::Bridge => GameParams::bridge(),
        };
        Ok(GameParams::new(
            self.hands.unwrap_or(base.hands()),
            self.cards.unwrap_or(base.cards_per_hand()),
            self.suits.unwrap_or(base.num_suits()),
            self.ranks.unwrap_or(base.ranks_per_suit()),
            self.trump.or(base.trump()),
        )?)
    }
}

impl GuardArgs {
    fn guard(&self) -> EnumerationGuard {
        EnumerationGuard {
            max_leaves: BigCount::from(self.max_leaves),
            max_states: self.max_states,
        }
    }
}

/// Reads and parses a deal file in either supported format.
pub fn parse_deal_file(path: &Path, params: &GameParams) -> Result<Deal, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_deal(&text, params).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn params_json(p: &GameParams) -> Value {
    json!({
        "hands": p.hands(),
        "cards": p.cards_per_hand(),
        "suits": p.num_suits(),
        "ranks": p.ranks_per_suit(),
        "trump": p.trump(),
    })
}

fn params_line(p: &GameParams) -> String {
    format!(
        "hands={} cards={} suits={} ranks={} trump={}",
        p.hands(),
        p.cards_per_hand(),
        p.num_suits(),
        p.ranks_per_suit(),
        p.trump().map_or("none".to_string(), |t| t.to_string())
    )
}

fn exact_json(x: &BigCount) -> Value {
    json!({ "exact": x.to_str_radix(10), "approx": to_f64(x) })
}

fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x != 0.0 && (x.abs() >= 1e6 || x.abs() < 1e-3) {
        format!("{x:.6e}")
    } else {
        format!("{x:.6}")
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

pub fn bounds_cmd(args: &BoundsArgs) -> Output {
    let p = args.game.params()?;
    let k_max = p.cards_per_hand();
    let rows: Vec<(usize, BigCount, BigCount)> = (0..=k_max)
        .map(|k| Ok((k, f(&p, k)?, f_p(&p, k)?)))
        .collect::<Result<_, BoundsError>>()?;
    let scored = bounds::state_space_upper_bound(&p, true);
    let scoreless = bounds::state_space_upper_bound(&p, false);
    let upper = bounds::tree_size_upper_bound(&p);
    let weak = bounds::tree_size_weak_lower_bound(&p);
    let mut out = String::new();
    match args.format {
        Format::Csv => {
            out.push_str("k,f,f_p\n");
            for (k, fk, fpk) in &rows {
                writeln!(out, "{k},{:e},{:e}", to_f64(fk), to_f64(fpk)).unwrap();
            }
        }
        Format::Json => {
            let table: Vec<Value> = rows
                .iter()
                .map(|(k, fk, fpk)| json!({ "k": k, "f": exact_json(fk), "f_p": exact_json(fpk) }))
                .collect();
            out = to_json(&json!({
                "params": params_json(&p),
                "rows": table,
                "state_space_with_scores": exact_json(&scored),
                "state_space_without_scores": exact_json(&scoreless),
                "tree_size_upper": exact_json(&upper),
                "tree_size_weak_lower": exact_json(&weak),
            }));
        }
        Format::Text => {
            writeln!(out, "params: {}", params_line(&p)).unwrap();
            writeln!(out, "{:>3}  {:>28}  {:>28}", "k", "f(k)", "f_p(k)").unwrap();
            for (k, fk, fpk) in &rows {
                writeln!(out, "{k:>3}  {:>28}  {:>28}", fk.to_str_radix(10), fpk.to_str_radix(10)).unwrap();
            }
            for (name, v) in [
                ("state_space_with_scores", &scored),
                ("state_space_without_scores", &scoreless),
                ("tree_size_upper", &upper),
                ("tree_size_weak_lower", &weak),
            ] {
                writeln!(out, "{name} = {} (~{})", v.to_str_radix(10), sci(v, 3)).unwrap();
            }
        }
    }
    Ok(out)
}

fn shape_string(rows: &[Vec<usize>]) -> String {
    rows.iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("-"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn frank_cmd(args: &FrankArgs) -> Output {
    let p = args.game.params()?;
    let mut out = String::new();
    if let Some(path) = &args.deal {
        let deal = parse_deal_file(path, &p)?;
        let shape = ShapeTable::from_deal(&deal, &p);
        let bound = frank_lower_bound(&shape);
        match args.format {
            Format::Json => {
                out = to_json(&json!({
                    "params": params_json(&p),
                    "shape": shape.rows(),
                    "frank_lower_bound": exact_json(&bound),
                }))
            }
            Format::Csv => {
                out.push_str("shape,frank_lower_bound\n");
                writeln!(out, "{},{:e}", shape_string(shape.rows()), to_f64(&bound)).unwrap();
            }
            Format::Text => {
                writeln!(out, "shape: {}", shape_string(shape.rows())).unwrap();
                writeln!(out, "frank_lower_bound = {} (~{})", bound.to_str_radix(10), sci(&bound, 3)).unwrap();
            }
        }
        return Ok(out);
    }
    let exact = expected_frank_bound_exact(&p, args.max_shapes)?;
    let mc = args
        .games
        .map(|n| (expected_frank_bound_mc(&p, n, args.seed, args.workers), n));
    match args.format {
        Format::Json => {
            let mut doc = json!({
                "params": params_json(&p),
                "expected_frank_bound": {
                    "exact": exact.render(),
                    "approx": exact.to_f64(),
                    "sci": exact.sci(3),
                },
            });
            if let Some((est, n)) = &mc {
                doc["monte_carlo"] = json!({
                    "deals": n,
                    "seed": args.seed,
                    "workers": args.workers,
                    "summary": est.moments.summary(),
                });
            }
            out = to_json(&doc);
        }
        Format::Csv => {
            out.push_str("quantity,value,stderr,n\n");
            writeln!(out, "exact,{:e},0,", exact.to_f64()).unwrap();
            if let Some((est, n)) = &mc {
                writeln!(out, "monte_carlo,{:e},{:e},{n}", est.moments.mean(), est.moments.stderr()).unwrap();
            }
        }
        Format::Text => {
            writeln!(out, "params: {}", params_line(&p)).unwrap();
            writeln!(out, "expected_frank_bound = {} (~{})", exact.render(), exact.sci(3)).unwrap();
            if let Some((est, n)) = &mc {
                let m = &est.moments;
                let z = (m.mean() - exact.to_f64()) / m.stderr();
                writeln!(
                    out,
                    "monte_carlo: deals={n} seed={} mean={} stderr={} z={}",
                    args.seed,
                    fmt_float(m.mean()),
                    fmt_float(m.stderr()),
                    fmt_float(z)
                )
                .unwrap();
            }
        }
    }
    Ok(out)
}

fn spec_of(args: &RunArgs) -> RunSpec {
    RunSpec::new(args.games, args.seed)
        .workers(args.workers)
        .leader(args.leader)
        .playouts_per_deal(args.playouts_per_deal)
}

fn report_rate(what: &str, playouts: u64, start: Instant) {
    let secs = start.elapsed().as_secs_f64();
    eprintln!(
        "# {what}: {playouts} playouts in {secs:.2} s ({:.0} playouts/s)",
        playouts as f64 / secs.max(1e-9)
    );
}

pub fn profile_cmd(args: &RunArgs) -> Output {
    let p = args.game.params()?;
    let spec = spec_of(args);
    let start = Instant::now();
    let profiles: Vec<(Mode, BranchingProfile)> = match args.mode {
        ModeArg::Both => {
            let paired = paired_trump_nt_profile(&p, &spec)?;
            vec![(Mode::NoTrump, paired.nt), (Mode::Trump, paired.trump)]
        }
        single => {
            let mode = single.modes()[0];
            vec![(mode, branching_profile(&mode.apply(&p), &spec)?)]
        }
    };
    let playouts = args.games * args.playouts_per_deal as u64 * profiles.len() as u64;
    report_rate("profile", playouts, start);
    let mut out = String::new();
    match args.format {
        Format::Csv => {
            let with_mode = profiles.len() > 1;
            out.push_str(if with_mode { "mode,trick,avg_moves,stderr,n\n" } else { "trick,avg_moves,stderr,n\n" });
            for (mode, prof) in &profiles {
                for row in prof.rows() {
                    if with_mode {
                        write!(out, "{mode},").unwrap();
                    }
                    writeln!(out, "{},{},{},{}", row.trick, row.avg_moves, row.stderr, row.n).unwrap();
                }
            }
        }
        Format::Json => {
            let list: Vec<Value> = profiles
                .iter()
                .map(|(mode, prof)| {
                    json!({
                        "mode": mode.as_str(),
                        "rows": prof.rows(),
                        "exact": prof.tricks.iter().map(|t| json!({
                            "n": t.n, "sum": t.sum.to_string(), "sum_sq": t.sum_sq.to_string(),
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            out = to_json(&json!({
                "params": params_json(&p),
                "games": args.games,
                "playouts_per_deal": args.playouts_per_deal,
                "leader": args.leader,
                "seed": args.seed,
                "workers": args.workers,
                "profiles": list,
            }));
        }
        Format::Text => {
            writeln!(out, "params: {}", params_line(&p)).unwrap();
            writeln!(out, "games={} seed={} leader={}", args.games, args.seed, args.leader).unwrap();
            for (mode, prof) in &profiles {
                writeln!(out, "mode {mode}").unwrap();
                writeln!(out, "{:>5}  {:>10}  {:>10}  {:>10}", "trick", "avg_moves", "stderr", "n").unwrap();
                for row in prof.rows() {
                    writeln!(out, "{:>5}  {:>10.5}  {:>10.6}  {:>10}", row.trick, row.avg_moves, row.stderr, row.n)
                        .unwrap();
                }
            }
        }
    }
    Ok(out)
}

fn summary_json(s: &MomentSummary) -> Value {
    json!({
        "n": s.n,
        "mean": { "exact": s.mean, "approx": s.mean_approx },
        "variance": { "exact": s.variance },
        "stderr": { "approx": s.stderr_approx },
        "stddev": { "approx": s.stddev_approx },
        "min": { "exact": s.min, "approx": s.min_approx },
        "max": { "exact": s.max, "approx": s.max_approx },
    })
}

pub fn estimate_cmd(args: &RunArgs) -> Output {
    let p = args.game.params()?;
    let spec = spec_of(args);
    let start = Instant::now();
    let reports: Vec<(Mode, TreeSizeReport)> = args
        .mode
        .modes()
        .into_iter()
        .map(|mode| Ok((mode, estimate_tree_size(&mode.apply(&p), &spec)?)))
        .collect::<Result<_, EstimatorError>>()?;
    let playouts = args.games * args.playouts_per_deal as u64 * reports.len() as u64;
    report_rate("estimate", playouts, start);
    let mut out = String::new();
    match args.format {
        Format::Json => {
            let list: Vec<Value> = reports
                .iter()
                .map(|(mode, r)| {
                    let mut v = summary_json(&r.summary());
                    v["mode"] = json!(mode.as_str());
                    v["seed"] = json!(r.seed);
                    v["workers"] = json!(r.workers);
                    v
                })
                .collect();
            out = to_json(&json!({
                "params": params_json(&p),
                "games": args.games,
                "playouts_per_deal": args.playouts_per_deal,
                "leader": args.leader,
                "reports": list,
            }));
        }
        Format::Csv => {
            out.push_str("mode,n,mean,stderr,stddev,min,max\n");
            for (mode, r) in &reports {
                let s = r.summary();
                writeln!(
                    out,
                    "{mode},{},{:e},{:e},{:e},{:e},{:e}",
                    s.n,
                    s.mean_approx,
                    s.stderr_approx,
                    s.stddev_approx,
                    s.min_approx.unwrap_or(f64::NAN),
                    s.max_approx.unwrap_or(f64::NAN)
                )
                .unwrap();
            }
        }
        Format::Text => {
            writeln!(out, "params: {}", params_line(&p)).unwrap();
            for (mode, r) in &reports {
                let s = r.summary();
                writeln!(out, "mode {mode}: n={} seed={} workers={}", s.n, r.seed, r.workers).unwrap();
                writeln!(out, "  mean   = {}", fmt_float(s.mean_approx)).unwrap();
                writeln!(out, "  stderr = {}", fmt_float(s.stderr_approx)).unwrap();
                writeln!(out, "  stddev = {}", fmt_float(s.stddev_approx)).unwrap();
                writeln!(out, "  min    = {}", s.min.as_deref().unwrap_or("-")).unwrap();
                writeln!(out, "  max    = {}", s.max.as_deref().unwrap_or("-")).unwrap();
            }
        }
    }
    Ok(out)
}

fn oracle_deal(p: &GameParams, deal: &Option<std::path::PathBuf>, seed: u64) -> Result<Deal, CliError> {
    match deal {
        Some(path) => parse_deal_file(path, p),
        None => Ok(Deal::random(p, &mut seeded(seed))),
    }
}

pub fn oracle_leaves_cmd(args: &OracleArgs) -> Output {
    let p = args.game.params()?;
    let deal = oracle_deal(&p, &args.deal, args.seed)?;
    let leaves = count_leaves(&deal, &p, args.leader, &args.guard.guard())?;
    let frank = bounds::frank_lower_bound_for_deal(&deal, &p);
    let upper = bounds::tree_size_upper_bound(&p);
    let mut out = String::new();
    match args.format {
        Format::Json => {
            out = to_json(&json!({
                "params": params_json(&p),
                "deal": ddtree_core::engine::notation::format_json_deal(&deal, &p),
                "leader": args.leader,
                "leaves": exact_json(&leaves),
                "frank_lower_bound": exact_json(&frank),
                "tree_size_upper": exact_json(&upper),
            }))
        }
        Format::Csv => {
            out.push_str("leaves,frank_lower_bound,tree_size_upper\n");
            writeln!(out, "{:e},{:e},{:e}", to_f64(&leaves), to_f64(&frank), to_f64(&upper)).unwrap();
        }
        Format::Text => {
            writeln!(out, "params: {}", params_line(&p)).unwrap();
            writeln!(out, "leaves = {}", leaves.to_str_radix(10)).unwrap();
            writeln!(out, "frank_lower_bound = {}", frank.to_str_radix(10)).unwrap();
            writeln!(out, "tree_size_upper = {}", upper.to_str_radix(10)).unwrap();
        }
    }
    Ok(out)
}

pub fn oracle_states_cmd(args: &OracleArgs) -> Output {
    let p = args.game.params()?;
    let guard = args.guard.guard();
    let mut out = String::new();
    let scored = count_reachable_states(&p, args.leader, true, &guard)?;
    let scoreless = count_reachable_states(&p, args.leader, false, &guard)?;
    let bound_scored = bounds::state_space_upper_bound(&p, true);
    let bound_scoreless = bounds::state_space_upper_bound(&p, false);
    match args.format {
        Format::Json => {
            out = to_json(&json!({
                "params": params_json(&p),
                "leader": args.leader,
                "with_scores": { "counts": scored, "bound": exact_json(&bound_scored) },
                "without_scores": { "counts": scoreless, "bound": exact_json(&bound_scoreless) },
            }))
        }
        Format::Csv => {
            out.push_str("scores,deals,max_per_deal,min_per_deal,family_union,bound\n");
            for (label, c, b) in [("with", &scored, &bound_scored), ("without", &scoreless, &bound_scoreless)] {
                writeln!(
                    out,
                    "{label},{},{},{},{},{:e}",
                    c.deals,
                    c.max_per_deal,
                    c.min_per_deal,
                    c.family_union,
                    to_f64(b)
                )
                .unwrap();
            }
        }
        Format::Text => {
            writeln!(out, "params: {}", params_line(&p)).unwrap();
            for (label, c, b) in [("with scores", &scored, &bound_scored), ("without scores", &scoreless, &bound_scoreless)]
            {
                writeln!(
                    out,
                    "{label}: deals={} max_per_deal={} min_per_deal={} family_union={} bound={}",
                    c.deals,
                    c.max_per_deal,
                    c.min_per_deal,
                    c.family_union,
                    b.to_str_radix(10)
                )
                .unwrap();
            }
        }
    }
    Ok(out)
}

pub fn verify_cmd(args: &VerifyArgs) -> Output {
    let p = args.game.params()?;
    let deal = oracle_deal(&p, &args.deal, args.seed)?;
    let rep = verify_unbiasedness(&deal, &p, args.leader, args.games, args.seed, &args.guard.guard())?;
    let verdict = if rep.passes(3.0) { "PASS" } else { "FAIL" };
    let mut out = String::new();
    match args.format {
        Format::Json => {
            out = to_json(&json!({
                "params": params_json(&p),
                "deal": ddtree_core::engine::notation::format_json_deal(&deal, &p),
                "exact_leaves": exact_json(&rep.exact_leaves),
                "playouts": rep.moments.n(),
                "seed": args.seed,
                "sample_mean": rep.sample_mean,
                "stderr": rep.stderr,
                "z_score": rep.z_score,
                "result": verdict,
            }))
        }
        Format::Csv => {
            out.push_str("exact_leaves,sample_mean,stderr,z_score,result\n");
            writeln!(
                out,
                "{},{},{},{},{verdict}",
                rep.exact_leaves.to_str_radix(10),
                rep.sample_mean,
                rep.stderr,
                rep.z_score
            )
            .unwrap();
        }
        Format::Text => {
            writeln!(out, "params: {}", params_line(&p)).unwrap();
            writeln!(out, "exact_leaves = {}", rep.exact_leaves.to_str_radix(10)).unwrap();
            writeln!(out, "sample_mean = {} over {} playouts", fmt_float(rep.sample_mean), rep.moments.n()).unwrap();
            writeln!(out, "stderr = {}", fmt_float(rep.stderr)).unwrap();
            writeln!(out, "z = {:.4} -> {verdict} at |z| <= 3", rep.z_score).unwrap();
        }
    }
    Ok(out)
}
