//! The `cychom` command line: JSON inputs, JSON reports, golden files.
//!
//! Exit codes: 0 when every audit passes, 1 when an audit fails, 2 on
//! input or usage errors, 3 on a golden-file mismatch or a missing golden.

mod input;
mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::Value;

pub use input::{
    algebra_from_file, algebra_to_file, bimodule_from_file, cocycle_from_file, field_name, load_algebra, load_bimodule, load_cocycle,
    load_resolution, load_tau, tau_from_file, AlgebraFile, BimoduleFile, CocycleFile, Loaded, TauFile,
};
pub use report::{check_golden, GoldenOutcome, Report};

use crate::algebra::{cocycle_violation, hh};
use crate::cyclic_bimod::{check_cyclic_structure, hc_with_coefficients};
use crate::cyclic_space::{build_a_sharp, connes_sequence_check, hc, hp, ModelKind};
use crate::deform::{gauss_manin_splitting, goodwillie_check, square_zero};
use crate::exactlin::{Field, Matrix};
use crate::lambda_cat::{category_homology, hom_set, lambda_leq, Representation};
use crate::trace_res::{
    bar_resolution, compare_with_bicomplex, connes_b_via_trace, lambda2_check, small_resolution_ingest, SolveOrder,
};
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "cychom", version, about = "Exact Hochschild, cyclic and periodic cyclic homology")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// `Q` or `Fp:<p>`; overrides the field of an algebra file.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Degrees: `N` (0 to N), `LO..=HI` or `LO..HI`.
    #[arg(long, global = true)]
    pub range: Option<String>,
    /// Truncation of cyclic objects (`hc`) or the `N` of `Λ≤N` (`lambda`).
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    /// Stabilization window for HP towers.
    #[arg(long, global = true)]
    pub window: Option<usize>,
    /// Worker threads for per-degree work.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Directory of golden reports to compare against.
    #[arg(long, global = true)]
    pub golden: Option<PathBuf>,
    /// With `--golden`, write the report as the new golden.
    #[arg(long, global = true, requires = "golden")]
    pub bless: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hochschild homology HH_*(A, M).
    Hh {
        /// `builtin:<name>` or an algebra file.
        algebra: String,
        /// `diagonal` (default), `free`, `zero` or a bimodule file.
        #[arg(long)]
        bimodule: Option<String>,
    },
    /// Cyclic homology of A_#, with the Connes sequence audit.
    Hc { algebra: String },
    /// Periodic cyclic homology of A_# with stabilization flags.
    Hp { algebra: String },
    /// HC_*(A, M_#) for a cyclic bimodule.
    HcCoeff {
        algebra: String,
        #[arg(long)]
        bimodule: Option<String>,
        /// `tautological` (default) or a tau file.
        #[arg(long)]
        tau: Option<String>,
    },
    /// The Gauss-Manin splitting for a square-zero extension.
    GaussManin {
        algebra: String,
        #[arg(long)]
        bimodule: Option<String>,
        #[arg(long)]
        tau: Option<String>,
        /// `zero` (default) or a cocycle file.
        #[arg(long)]
        cocycle: Option<String>,
        /// Window of the appended HP(Ã) = HP(A) comparison (characteristic 0 only).
        #[arg(long, default_value_t = 2)]
        goodwillie_window: usize,
    },
    /// Connes' B from a resolution, compared with the bicomplex B.
    ConnesB {
        algebra: String,
        /// A resolution file; the bar resolution is used otherwise.
        #[arg(long)]
        resolution: Option<String>,
        /// Also run the Λ≤2 section check.
        #[arg(long)]
        lambda2: bool,
    },
    /// Hom-set counts of Λ≤N and H_*(Λ≤N, k).
    Lambda,
}

/// Inclusive degree range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Range {
    pub lo: usize,
    pub hi: usize,
}

impl Range {
    pub fn parse(s: &str) -> Result<Range, Error> {
        let bad = || Error::Parse(format!("bad range `{s}`; use N, LO..=HI or LO..HI"));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let r = if let Some((a, b)) = s.split_once("..=") {
            Range { lo: num(a)?, hi: num(b)? }
        } else if let Some((a, b)) = s.split_once("..") {
            let hi = num(b)?.checked_sub(1).ok_or_else(bad)?;
            Range { lo: num(a)?, hi }
        } else {
            Range { lo: 0, hi: num(s)? }
        };
        if r.lo > r.hi {
            return Err(bad());
        }
        Ok(r)
    }

    fn slice<T: Clone>(&self, v: &[T]) -> Vec<T> {
        v[self.lo..=self.hi].to_vec()
    }

    fn text(&self) -> String {
        format!("{}..={}", self.lo, self.hi)
    }
}

fn dense_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.to_dense().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

/// Builds the report for one invocation.
pub fn execute(cli: &Cli) -> Result<Report, Error> {
    let field = cli.field.as_deref().map(Field::parse).transpose()?;
    let range = |default: usize| -> Result<Range, Error> {
        cli.range.as_deref().map_or(Ok(Range { lo: 0, hi: default }), Range::parse)
    };
    let window = cli.window.unwrap_or(3);
    let mut params = BTreeMap::new();
    match &cli.command {
        Command::Hh { algebra, bimodule } => {
            let r = range(3)?;
            params.insert("range".into(), Value::from(r.text()));
            let a = load_algebra(algebra, field)?;
            let m = load_bimodule(bimodule.as_deref(), &a.value)?;
            let mut rep = Report::new(
                "hh",
                field_name(a.value.field()),
                &[("algebra", a.canonical.clone()), ("bimodule", m.canonical.clone())],
                params,
            );
            rep.result("hh", &r.slice(&hh(&a.value, &m.value, r.hi)));
            rep.audit("inputs", true);
            Ok(rep)
        }
        Command::Hc { algebra } => {
            let r = range(6)?;
            let a = load_algebra(algebra, field)?;
            let n_max = cli.n_max.unwrap_or(r.hi + 2);
            if n_max < r.hi + 2 {
                return Err(Error::Truncation(format!("HC up to degree {} needs --n-max ≥ {}", r.hi, r.hi + 2)));
            }
            params.insert("range".into(), Value::from(r.text()));
            params.insert("n_max".into(), Value::from(n_max));
            let mut rep = Report::new("hc", field_name(a.value.field()), &[("algebra", a.canonical.clone())], params);
            let e = build_a_sharp(&a.value, n_max + 1);
            let wide = hc(&e, r.hi + 1)?;
            let cs = connes_sequence_check(&e.truncate(n_max), r.hi)?;
            rep.result("hh", &r.slice(&cs.hh));
            rep.result("hc", &r.slice(&cs.hc));
            rep.result("connes_nodes", &cs.nodes);
            rep.audit("connes_sequence_exact", cs.exact());
            rep.audit("truncation_stable", wide[..=r.hi] == cs.hc[..=r.hi]);
            Ok(rep)
        }
        Command::Hp { algebra } => {
            let r = range(1)?;
            let a = load_algebra(algebra, field)?;
            params.insert("range".into(), Value::from(r.text()));
            params.insert("window".into(), Value::from(window));
            let mut rep = Report::new("hp", field_name(a.value.field()), &[("algebra", a.canonical.clone())], params);
            let n_max = crate::deform::hp_objects(r.hi, window);
            let e = build_a_sharp(&a.value, n_max);
            let degrees = r.slice(&hp(&e, r.hi, window)?);
            rep.result("hp", &degrees.iter().map(|d| d.dim).collect::<Vec<_>>());
            rep.result("towers", &degrees.iter().map(|d| d.tower_ranks.clone()).collect::<Vec<_>>());
            rep.stabilized.insert("hp".into(), degrees.iter().map(|d| d.stabilized).collect());
            rep.audit("inputs", true);
            Ok(rep)
        }
        Command::HcCoeff { algebra, bimodule, tau } => {
            let r = range(4)?;
            params.insert("range".into(), Value::from(r.text()));
            let a = load_algebra(algebra, field)?;
            let m = load_bimodule(bimodule.as_deref(), &a.value)?;
            let t = load_tau(tau.as_deref(), &a.value, &m.value)?;
            let mut rep = Report::new(
                "hc-coeff",
                field_name(a.value.field()),
                &[("algebra", a.canonical), ("bimodule", m.canonical), ("tau", t.canonical.clone())],
                params,
            );
            let structure = check_cyclic_structure(&t.value);
            rep.audit("cyclic_structure", structure.passed());
            if !structure.passed() {
                rep.result("failures", &structure.failures);
                return Ok(rep);
            }
            let dims = hc_with_coefficients(&t.value, r.hi)?;
            rep.result("hc", &r.slice(&dims));
            if t.canonical == "tautological" {
                let plain = hc(&build_a_sharp(&a.value, r.hi + 2), r.hi)?;
                rep.audit("matches_hc", plain == dims);
            }
            Ok(rep)
        }
        Command::GaussManin {
            algebra,
            bimodule,
            tau,
            cocycle,
            goodwillie_window,
        } => {
            let r = range(1)?;
            params.insert("range".into(), Value::from(r.text()));
            params.insert("window".into(), Value::from(window));
            let a = load_algebra(algebra, field)?;
            let m = load_bimodule(bimodule.as_deref(), &a.value)?;
            let t = load_tau(tau.as_deref(), &a.value, &m.value)?;
            let c = load_cocycle(cocycle.as_deref(), &a.value, &m.value)?;
            let char0 = a.value.field().characteristic() == 0;
            if char0 {
                params.insert("goodwillie_window".into(), Value::from(*goodwillie_window));
            }
            let mut rep = Report::new(
                "gauss-manin",
                field_name(a.value.field()),
                &[("algebra", a.canonical), ("bimodule", m.canonical), ("tau", t.canonical), ("cocycle", c.canonical)],
                params,
            );
            if let Some((i, j, k)) = cocycle_violation(&a.value, &m.value, &c.value) {
                rep.audit("cocycle", false);
                let l = a.value.labels();
                rep.result("cocycle_witness", &[&l[i], &l[j], &l[k]]);
                return Ok(rep);
            }
            rep.audit("cocycle", true);
            let structure = check_cyclic_structure(&t.value);
            rep.audit("cyclic_structure", structure.passed());
            if !structure.passed() {
                rep.result("failures", &structure.failures);
                return Ok(rep);
            }
            let ext = square_zero(&a.value, &m.value, &c.value)?;
            let split = gauss_manin_splitting(&ext, &t.value, r.hi, window)?;
            let degrees = r.slice(&split.degrees);
            rep.stabilized.insert("splitting".into(), degrees.iter().map(|d| d.stabilized).collect());
            rep.result("splitting", &degrees);
            rep.audit("splitting", split.passed());
            if char0 {
                let g = goodwillie_check(&ext, r.hi, *goodwillie_window, ModelKind::Tsygan)?;
                let gd = r.slice(&g.degrees);
                rep.stabilized.insert("goodwillie".into(), gd.iter().map(|d| d.stabilized).collect());
                rep.result("goodwillie", &gd);
                rep.audit("goodwillie", g.passed());
            }
            Ok(rep)
        }
        Command::ConnesB {
            algebra,
            resolution,
            lambda2,
        } => {
            let r = range(3)?;
            params.insert("range".into(), Value::from(r.text()));
            params.insert("lambda2".into(), Value::from(*lambda2));
            let a = load_algebra(algebra, field)?;
            let (res, res_canon) = match resolution {
                Some(p) => {
                    let data = load_resolution(p)?;
                    (small_resolution_ingest(&a.value, &data.value)?, data.canonical)
                }
                None => (bar_resolution(&a.value, r.hi + 2)?, "bar".to_string()),
            };
            let mut rep = Report::new(
                "connes-b",
                field_name(a.value.field()),
                &[("algebra", a.canonical), ("resolution", res_canon)],
                params,
            );
            let tb = connes_b_via_trace(&res, r.hi, SolveOrder::Natural)?;
            let other = connes_b_via_trace(&res, r.hi, SolveOrder::Reversed)?;
            let cmp = compare_with_bicomplex(&res, &tb)?;
            rep.result("b_matrices", &r.slice(&tb.b).iter().map(dense_strings).collect::<Vec<_>>());
            rep.result("trace_ranks", &r.slice(&cmp.trace_ranks));
            rep.result("bicomplex_ranks", &r.slice(&cmp.bicomplex_ranks));
            rep.result("identification", &"tr(tau_1)");
            rep.signs.insert("trace_vs_bicomplex".into(), cmp.sign.clone().unwrap_or_else(|| "undetermined".into()));
            rep.audit("iota_difference_chain_map", true);
            rep.audit("matches_bicomplex", cmp.agrees);
            rep.audit("homotopy_independent", other.b == tb.b);
            if *lambda2 {
                let l2 = lambda2_check(&res, SolveOrder::Natural)?;
                rep.result("lambda2", &l2);
                rep.audit("lambda2_section", l2.agrees);
            }
            Ok(rep)
        }
        Command::Lambda => {
            let r = range(5)?;
            let n = cli.n_max.unwrap_or(3);
            if n == 0 {
                return Err(Error::Invalid("Λ≤N needs N ≥ 1".into()));
            }
            let f = field.unwrap_or(Field::Rationals);
            params.insert("range".into(), Value::from(r.text()));
            params.insert("n_max".into(), Value::from(n));
            let mut rep = Report::new("lambda", field_name(f), &[], params);
            let counts: Vec<Vec<usize>> = (1..=n).map(|s| (1..=n).map(|t| hom_set(s, t).len()).collect()).collect();
            let lam = lambda_leq(n);
            let dims = category_homology(&lam.category, &Representation::constant(&lam.category, f), r.hi)?;
            rep.audit("points", (1..=n).all(|m| counts[0][m - 1] == m));
            rep.result("hom_counts", &counts);
            rep.result("homology", &r.slice(&dims));
            Ok(rep)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Audit(_) | Error::NotAComplex(_) => 1,
        _ => 2,
    }
}

/// Runs one invocation, writing the report and diagnostics; returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let go = || -> i32 {
        let rep = match execute(cli) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return exit_code_for(&e);
            }
        };
        let text = rep.to_json();
        match &cli.output {
            Some(p) => {
                if let Err(e) = std::fs::write(p, &text) {
                    eprintln!("error: {}: {e}", p.display());
                    return 2;
                }
            }
            None => print!("{text}"),
        }
        if let Some(dir) = &cli.golden {
            match check_golden(&rep, dir, cli.bless) {
                Ok(GoldenOutcome::Matched) => {}
                Ok(GoldenOutcome::Written) => eprintln!("wrote {}", dir.join(rep.golden_name()).display()),
                Ok(GoldenOutcome::Missing) => {
                    eprintln!("golden {} is missing; rerun with --bless to record it", dir.join(rep.golden_name()).display());
                    return 3;
                }
                Ok(GoldenOutcome::Mismatch { line, expected, actual }) => {
                    eprintln!("golden mismatch at line {line}:\n  expected: {expected}\n  actual:   {actual}");
                    return 3;
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            }
        }
        if rep.passed {
            0
        } else {
            for (k, ok) in &rep.audits {
                if !ok {
                    eprintln!("audit failed: {k}");
                }
            }
            1
        }
    };
    match cli.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(go),
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        None => go(),
    }
}
