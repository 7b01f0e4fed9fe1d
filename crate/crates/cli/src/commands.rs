use std::path::Path;

use anyhow::anyhow;
use num_traits::ToPrimitive;
use pmds::codes::{default_gabidulin_points, first_singular_minor};
use pmds::combinat::binomial_u64;
use pmds::erasure::{count_lemma3_patterns, random_lemma3_pattern, BlockRoute, Outcome};
use pmds::field::{prime_power, MAX_ORDER};
use pmds::format::{matrix_to_doc, Artifact};
use pmds::pmds::{
    count_mstar, degree_bound, degree_budget, estimate_success_rate, verify_definition, verify_tkl, FieldRecipe,
    MStarCount, StepwiseError, StepwiseOptions,
};
use pmds::rng::{seeded, RNG_NAME};
use pmds::{
    construct_mrd, construct_random, construct_stepwise, decode, encode, field_size_recipe, gabidulin, is_correctable,
    lemma3_patterns, mrd_criterion, probability_bound, vandermonde_mds, CodeArtifact, ErasurePattern, FieldSpec,
    MrdCertificate, PmdsParams, Verdict,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::{Command, Failure, MethodArg, ParamArgs, Report, VerifyMode, EXIT_NEGATIVE, EXIT_OK};

/// Largest pattern family `simulate` sweeps exhaustively.
const EXHAUSTIVE_PATTERN_LIMIT: u64 = 1_000_000;

/// Two-sided 99% normal quantile.
const Z_99: f64 = 2.575_829_303_548_901;

pub fn dispatch(command: &Command, seed: Option<u64>) -> Result<Report, Failure> {
    let seed_or_zero = seed.unwrap_or(0);
    match command {
        Command::Construct { method, params, p, q_deg, big_n, max_attempts } => {
            construct(*method, params, *p, *q_deg, *big_n, *max_attempts, seed_or_zero)
        }
        Command::Verify { input, mode } => verify(input, *mode),
        Command::Simulate { input, trials } => simulate(input, *trials, seed_or_zero),
        Command::Bounds { params, q, p } => bounds(params, q, *p),
        Command::Estimate { params, q, trials } => estimate(params, *q, *trials, seed_or_zero),
        Command::MdsGen { p, q_deg, n, k } => mds_gen(*p, *q_deg, *n, *k),
        Command::MrdGen { p, q_deg, big_n, n, k } => mrd_gen(*p, *q_deg, *big_n, *n, *k),
        Command::MdsCheck { input } => mds_check(input),
        Command::MrdCheck { input } => mrd_check(input),
        Command::Replay { .. } => unreachable!("handled by the caller"),
    }
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report documents serialize");
    s.push('\n');
    s
}

fn params_of(args: &ParamArgs) -> Result<PmdsParams, Failure> {
    PmdsParams::new(args.m, args.ell, args.s, args.r.clone()).map_err(Failure::usage)
}

fn field_of_order(q: u64) -> Result<FieldSpec, Failure> {
    let (p, e) = prime_power(q).ok_or_else(|| Failure::usage(anyhow!("{q} is not a prime power")))?;
    FieldSpec::new(p, e).map_err(Failure::usage)
}

/// Smallest `e` with `p^e > threshold` (and `p^e >= floor`).
fn smallest_degree(p: u32, threshold: u64, floor: u64) -> Result<u32, Failure> {
    let mut q = u64::from(p);
    let mut e = 1;
    while q <= threshold || q < floor {
        q = q.saturating_mul(u64::from(p));
        e += 1;
        if q > MAX_ORDER {
            return Err(Failure::usage(anyhow!("no supported field of characteristic {p} exceeds {threshold}")));
        }
    }
    Ok(e)
}

fn load(path: &Path) -> Result<Artifact, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(anyhow!("reading {}: {e}", path.display())))?;
    Artifact::from_json(&text).map_err(|e| Failure::usage(anyhow!("{}: {e}", path.display())))
}

fn load_pmds(path: &Path) -> Result<CodeArtifact, Failure> {
    match load(path)? {
        Artifact::Pmds(code) => Ok(code),
        _ => Err(Failure::usage(anyhow!("{} does not hold a PMDS code", path.display()))),
    }
}

fn construct(
    method: MethodArg,
    args: &ParamArgs,
    p: u32,
    q_deg: Option<u32>,
    big_n: Option<u32>,
    max_attempts: u64,
    seed: u64,
) -> Result<Report, Failure> {
    let params = params_of(args)?;
    let (code, detail) = match method {
        MethodArg::Mrd => {
            let recipe = field_size_recipe(&params, p).map_err(Failure::usage)?;
            let b = q_deg.unwrap_or(recipe.n0);
            let n = big_n.unwrap_or(recipe.big_n);
            let base = FieldSpec::new(p, b).map_err(Failure::usage)?;
            let tower = FieldSpec::tower(p, b, n).map_err(Failure::usage)?;
            let code = construct_mrd(&params, &base, &tower).map_err(|e| match e {
                pmds::Error::Precondition(_) | pmds::Error::IncompatibleFields => Failure::usage(e),
                other => Failure::construction(other),
            })?;
            (code, format!("rank-metric product, base GF({})", base.order()))
        }
        MethodArg::Random => {
            let e = match q_deg {
                Some(e) => e,
                None => {
                    let bound = degree_bound(&params).to_u64().unwrap_or(u64::MAX);
                    smallest_degree(p, bound, 2)?
                }
            };
            let field = FieldSpec::new(p, e).map_err(Failure::usage)?;
            let code = construct_random(&params, &field, seed, max_attempts).map_err(|f| {
                Failure::construction(anyhow!(
                    "no PMDS fill in {} attempts (per-attempt success bound {})",
                    f.attempts,
                    f.bound
                ))
            })?;
            let attempts = code.provenance.attempts.unwrap_or(0);
            (code, format!("random fill, seed {seed}, {attempts} attempt(s)"))
        }
        MethodArg::Stepwise => {
            let e = match q_deg {
                Some(e) => e,
                None => {
                    let mstar = count_mstar(&params).mstar;
                    smallest_degree(p, mstar, (params.m * params.ell) as u64 - 1)?
                }
            };
            let field = FieldSpec::new(p, e).map_err(Failure::usage)?;
            let code = construct_stepwise(&params, &field, seed, &StepwiseOptions::default()).map_err(|e| match e {
                StepwiseError::Precondition(_) => Failure::usage(e),
                StepwiseError::Stuck { .. } => Failure::construction(e),
            })?;
            (code, format!("column by column, seed {seed}"))
        }
    };
    let human = format!("constructed {} code over {} ({detail})", code.params, code.field);
    Ok(Report { json: Artifact::from(code).to_json(), human, code: EXIT_OK })
}

#[derive(Serialize)]
struct VerifyDoc {
    pmds: bool,
    first_failing_selection: Option<Vec<usize>>,
    selections_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tkl: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    definition: Option<Verdict>,
}

fn verify(input: &Path, mode: VerifyMode) -> Result<Report, Failure> {
    let code = load_pmds(input)?;
    let layout = code.layout();
    let tkl = matches!(mode, VerifyMode::Tkl | VerifyMode::Both).then(|| verify_tkl(&code.generator, &layout));
    let def =
        matches!(mode, VerifyMode::Definition | VerifyMode::Both).then(|| verify_definition(&code.generator, &layout));
    let (pmds, first, checked) = match (&tkl, &def) {
        (Some(t), Some(d)) => {
            let first = t.first_failing_selection.clone().or_else(|| d.first_failing_selection.clone());
            (t.pmds && d.pmds, first, t.selections_checked + d.selections_checked)
        }
        (Some(v), None) | (None, Some(v)) => (v.pmds, v.first_failing_selection.clone(), v.selections_checked),
        (None, None) => unreachable!(),
    };
    let mut human = format!(
        "{} code over {}: {} ({checked} selections checked)",
        code.params,
        code.field,
        if pmds { "PMDS" } else { "not PMDS" }
    );
    if let Some(sel) = &first {
        human.push_str(&format!("\nfirst failing selection: {sel:?}"));
    }
    if let (Some(t), Some(d)) = (&tkl, &def) {
        if t.pmds != d.pmds {
            human.push_str("\nwarning: the two verifiers disagree");
        }
    }
    let doc = VerifyDoc { pmds, first_failing_selection: first, selections_checked: checked, tkl, definition: def };
    Ok(Report { json: to_json(&doc), human, code: if pmds { EXIT_OK } else { EXIT_NEGATIVE } })
}

#[derive(Default, Serialize)]
struct SimulateDoc {
    mode: &'static str,
    family_size: String,
    patterns_tested: u64,
    correctable: u64,
    recovered_locally: u64,
    recovered_globally: u64,
    unrecoverable: u64,
    mismatches: u64,
    local_block_repairs: u64,
    global_block_repairs: u64,
    max_local_contacts: usize,
    first_unrecoverable: Option<Vec<usize>>,
    capability: bool,
    seed: u64,
    rng: &'static str,
}

struct Trial {
    pattern: ErasurePattern,
    correctable: bool,
    outcome: Option<Outcome>,
    exact: bool,
    local_blocks: u64,
    global_blocks: u64,
    max_contacts: usize,
}

fn run_trial(code: &CodeArtifact, index: u64, seed: u64, pattern: Option<ErasurePattern>) -> Trial {
    let f = &code.field;
    let mut rng = seeded(seed, index + 1);
    let pattern = pattern.unwrap_or_else(|| random_lemma3_pattern(&code.params, &mut rng));
    let message: Vec<_> = (0..code.params.k()).map(|_| f.random(&mut rng)).collect();
    let codeword = encode(code, &message).expect("message length is k");
    let correctable = is_correctable(code, &pattern);
    let mut trial =
        Trial { pattern, correctable, outcome: None, exact: false, local_blocks: 0, global_blocks: 0, max_contacts: 0 };
    if let Ok(report) = decode(code, &trial.pattern.apply(&codeword)) {
        trial.exact = match report.outcome {
            Outcome::Unrecoverable => !correctable,
            _ => report.codeword.as_deref() == Some(&codeword[..]),
        };
        for route in &report.routes {
            match route {
                BlockRoute::Local { contacted } => {
                    trial.local_blocks += 1;
                    trial.max_contacts = trial.max_contacts.max(contacted.len());
                }
                BlockRoute::Global | BlockRoute::Unrecovered => trial.global_blocks += 1,
                BlockRoute::Intact => {}
            }
        }
        trial.outcome = Some(report.outcome);
    }
    trial
}

fn simulate(input: &Path, trials: u64, seed: u64) -> Result<Report, Failure> {
    let code = load_pmds(input)?;
    let family = count_lemma3_patterns(&code.params);
    let exhaustive = family.to_u64().is_some_and(|c| c <= EXHAUSTIVE_PATTERN_LIMIT);
    let results: Vec<Trial> = if exhaustive {
        let patterns: Vec<ErasurePattern> = lemma3_patterns(&code.params).collect();
        patterns.into_par_iter().enumerate().map(|(i, p)| run_trial(&code, i as u64, seed, Some(p))).collect()
    } else {
        (0..trials).into_par_iter().map(|i| run_trial(&code, i, seed, None)).collect()
    };

    let mut doc = SimulateDoc {
        mode: if exhaustive { "exhaustive" } else { "sampled" },
        family_size: family.to_string(),
        seed,
        rng: RNG_NAME,
        ..Default::default()
    };
    for t in &results {
        doc.patterns_tested += 1;
        doc.correctable += u64::from(t.correctable);
        match t.outcome {
            Some(Outcome::RecoveredLocally) => doc.recovered_locally += 1,
            Some(Outcome::RecoveredGlobally) => doc.recovered_globally += 1,
            Some(Outcome::Unrecoverable) | None => {
                doc.unrecoverable += 1;
                if doc.first_unrecoverable.is_none() {
                    doc.first_unrecoverable = Some(t.pattern.indices().to_vec());
                }
            }
        }
        doc.mismatches += u64::from(!t.exact);
        doc.local_block_repairs += t.local_blocks;
        doc.global_block_repairs += t.global_blocks;
        doc.max_local_contacts = doc.max_local_contacts.max(t.max_contacts);
    }
    doc.capability = doc.unrecoverable == 0 && doc.mismatches == 0;
    let human = format!(
        "{} code over {}: {} sweep of {} pattern(s) from a family of {}\n  recovered locally  {}\n  recovered globally {}\n  unrecoverable      {}\n  mismatches         {}\n  block repairs: {} local (at most {} contacts), {} global",
        code.params,
        code.field,
        doc.mode,
        doc.patterns_tested,
        doc.family_size,
        doc.recovered_locally,
        doc.recovered_globally,
        doc.unrecoverable,
        doc.mismatches,
        doc.local_block_repairs,
        doc.max_local_contacts,
        doc.global_block_repairs,
    );
    let code = if doc.capability { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Report { json: to_json(&doc), human, code })
}

#[derive(Serialize)]
struct BudgetDoc {
    t: usize,
    column_degrees: Vec<u8>,
    total: String,
    summation: String,
}

#[derive(Serialize)]
struct BoundsRow {
    q: u64,
    probability_bound: String,
    probability_bound_value: f64,
    /// `q > C(n − 1, k − 1)`.
    above_binomial: bool,
    /// `q > M*`.
    above_mstar: bool,
}

#[derive(Serialize)]
struct RecipeDoc {
    p: u32,
    #[serde(flatten)]
    recipe: FieldRecipe,
}

#[derive(Serialize)]
struct BoundsDoc {
    params: PmdsParams,
    n: usize,
    k: usize,
    degree_budget: BudgetDoc,
    binomial: u64,
    mstar: MStarCount,
    rows: Vec<BoundsRow>,
    recipes: Vec<RecipeDoc>,
}

fn bounds(args: &ParamArgs, qs: &[u64], p: Option<u32>) -> Result<Report, Failure> {
    let params = params_of(args)?;
    let budget = degree_budget(&params);
    let mstar = count_mstar(&params);
    let binomial = binomial_u64(params.n() - 1, params.k() - 1);
    let mut chars = Vec::new();
    let mut rows = Vec::new();
    for &q in qs {
        let (pq, _) = prime_power(q).ok_or_else(|| Failure::usage(anyhow!("{q} is not a prime power")))?;
        if !chars.contains(&pq) {
            chars.push(pq);
        }
        let bound = probability_bound(&params, q);
        rows.push(BoundsRow {
            q,
            probability_bound: bound.to_string(),
            probability_bound_value: bound.to_f64().unwrap_or(f64::NAN),
            above_binomial: q > binomial,
            above_mstar: q > mstar.mstar,
        });
    }
    if let Some(p) = p {
        if !chars.contains(&p) {
            chars.insert(0, p);
        }
    }
    let recipes = chars
        .into_iter()
        .map(|p| field_size_recipe(&params, p).map(|recipe| RecipeDoc { p, recipe }))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::usage)?;

    let mut human = format!(
        "{}: degree bound {}, C(n-1,k-1) = {}, M* = {}{}\n",
        params,
        budget.total,
        binomial,
        mstar.mstar,
        if mstar.strict { " (strictly smaller)" } else { "" }
    );
    human.push_str(&format!("column degrees: {:?}\n", budget.column_degrees));
    human.push_str(&format!("{:>12}  {:>24}  {:>10}  {:>8}\n", "q", "P(PMDS) >=", "q > C", "q > M*"));
    for row in &rows {
        human.push_str(&format!(
            "{:>12}  {:>24}  {:>10}  {:>8}\n",
            row.q, row.probability_bound, row.above_binomial, row.above_mstar
        ));
    }
    for r in &recipes {
        human.push_str(&format!(
            "rank-metric recipe for p = {}: q = {} (n0 = {}{}), field GF({}^{}), N = {}\n",
            r.p,
            r.recipe.q,
            r.recipe.n0,
            if r.recipe.floored { ", floored" } else { "" },
            r.p,
            r.recipe.l,
            r.recipe.big_n
        ));
    }
    let doc = BoundsDoc {
        params: params.clone(),
        n: params.n(),
        k: params.k(),
        degree_budget: BudgetDoc {
            t: budget.t,
            column_degrees: budget.column_degrees,
            total: budget.total.to_string(),
            summation: budget.summation.to_string(),
        },
        binomial,
        mstar,
        rows,
        recipes,
    };
    Ok(Report { json: to_json(&doc), human: human.trim_end().to_string(), code: EXIT_OK })
}

#[derive(Serialize)]
struct EstimateDoc {
    params: PmdsParams,
    q: u64,
    trials: u64,
    successes: u64,
    rate: f64,
    std_error: f64,
    ci99: [f64; 2],
    bound: String,
    bound_value: f64,
    seed: u64,
    rng: &'static str,
}

fn estimate(args: &ParamArgs, q: u64, trials: u64, seed: u64) -> Result<Report, Failure> {
    let params = params_of(args)?;
    if trials == 0 {
        return Err(Failure::usage(anyhow!("--trials must be at least 1")));
    }
    let field = field_of_order(q)?;
    let est = estimate_success_rate(&params, &field, trials, seed);
    let (lo, hi) = est.wilson_interval(Z_99);
    let bound = probability_bound(&params, q);
    let doc = EstimateDoc {
        params: params.clone(),
        q,
        trials,
        successes: est.successes,
        rate: est.rate(),
        std_error: est.std_error(),
        ci99: [lo, hi],
        bound: bound.to_string(),
        bound_value: bound.to_f64().unwrap_or(f64::NAN),
        seed,
        rng: RNG_NAME,
    };
    let human = format!(
        "{params} over GF({q}): {}/{} random fills PMDS, rate {:.4} (99% CI {:.4}..{:.4}), bound {} = {:.4}",
        doc.successes, trials, doc.rate, lo, hi, doc.bound, doc.bound_value
    );
    Ok(Report { json: to_json(&doc), human, code: EXIT_OK })
}

fn mds_gen(p: u32, q_deg: u32, n: usize, k: usize) -> Result<Report, Failure> {
    let field = FieldSpec::new(p, q_deg).map_err(Failure::usage)?;
    let code = vandermonde_mds(&field, n, k, None).map_err(Failure::usage)?;
    let human = format!("[{n}, {k}] Vandermonde MDS code over {field}");
    Ok(Report { json: Artifact::from(code).to_json(), human, code: EXIT_OK })
}

fn mrd_gen(p: u32, q_deg: u32, big_n: u32, n: Option<usize>, k: usize) -> Result<Report, Failure> {
    let tower = FieldSpec::tower(p, q_deg, big_n).map_err(Failure::usage)?;
    let n = n.unwrap_or(big_n as usize);
    let points = default_gabidulin_points(&tower, n);
    let code = gabidulin(&tower, n, k, &points).map_err(Failure::usage)?;
    let human = format!("[{n}, {k}] Gabidulin code over {tower}");
    Ok(Report { json: Artifact::from(code).to_json(), human, code: EXIT_OK })
}

#[derive(Serialize)]
struct MdsCheckDoc {
    mds: bool,
    singular_minor: Option<Vec<usize>>,
}

fn mds_check(input: &Path) -> Result<Report, Failure> {
    let artifact = load(input)?;
    let g = artifact.generator();
    let singular = first_singular_minor(g).map_err(Failure::usage)?;
    let doc = MdsCheckDoc { mds: singular.is_none(), singular_minor: singular };
    let human = match &doc.singular_minor {
        None => format!("[{}, {}] code over {} is MDS", g.cols(), g.rows(), g.field()),
        Some(cols) => {
            format!("[{}, {}] code over {} is not MDS: columns {cols:?} are dependent", g.cols(), g.rows(), g.field())
        }
    };
    Ok(Report { json: to_json(&doc), human, code: if doc.mds { EXIT_OK } else { EXIT_NEGATIVE } })
}

#[derive(Serialize)]
struct MrdCheckDoc {
    certificate: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    checked: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<Vec<Vec<u32>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    representatives: Option<String>,
}

fn mrd_check(input: &Path) -> Result<Report, Failure> {
    let artifact = load(input)?;
    let g = artifact.generator();
    let cert = mrd_criterion(g).map_err(Failure::usage)?;
    let (doc, human) = match cert {
        MrdCertificate::Mrd { checked } => (
            MrdCheckDoc { certificate: "mrd", checked: Some(checked), witness: None, representatives: None },
            format!("MRD: all {checked} subspace representatives keep full rank"),
        ),
        MrdCertificate::NotMrd { witness } => (
            MrdCheckDoc {
                certificate: "not-mrd",
                checked: None,
                witness: Some(matrix_to_doc(&witness)),
                representatives: None,
            },
            format!("not MRD: witness {:?}", witness.to_values()),
        ),
        MrdCertificate::NotCertified { representatives } => (
            MrdCheckDoc {
                certificate: "not-certified",
                checked: None,
                witness: None,
                representatives: Some(representatives.to_string()),
            },
            format!("not certified: {representatives} representatives exceed the enumeration limit"),
        ),
    };
    let code = if doc.certificate == "mrd" { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Report { json: to_json(&doc), human, code })
}
