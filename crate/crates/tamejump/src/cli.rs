//! Argument parsing and command dispatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tamejump_core::arith::is_prime;
use tamejump_core::dvr::PrecisionPolicy;
use tamejump_core::glattice::{
    flasque_resolve, invariant_rank, tate_cohomology, FiniteGroup, GLattice, Provenance, Subgroup, TateDegree,
};
use tamejump_core::intmat::{self, IMat};
use tamejump_core::jumps::{self, GroupDescriptor};
use tamejump_core::weights::{apply_scale, induced_weights, GradedSubstitution, Scale, WeightMultiset};
use tamejump_core::zeta::{self, ZetaInput};

use crate::corpus;
use crate::dto::{format_rational, read_json, GLatticeJson, GroupJson, ZetaInputJson};
use crate::error::CliError;
use crate::oracle::{run_grid, summarize, DSelection, GridSpec};
use crate::render::{self, Format, Report};

#[derive(Parser, Debug)]
#[command(name = "tamejump", version, about = "Jumps, d-jumps, conductors and zeta series of Néron models")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized changes of presentation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Residue characteristic.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    #[arg(long, global = true, env = "TAMEJUMP_PRECISION_FACTOR", default_value_t = 2)]
    pub precision_factor: u64,
    #[arg(long, global = true, env = "TAMEJUMP_PRECISION_OFFSET", default_value_t = 1)]
    pub precision_offset: u64,
    #[arg(long, global = true, env = "TAMEJUMP_MAX_DOUBLINGS", default_value_t = 8)]
    pub max_doublings: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Jumps, or d-jumps with `--d`.
    Jumps {
        #[arg(long, global = true)]
        d: Option<u64>,
        #[command(subcommand)]
        source: GroupSource,
    },
    Djumps {
        #[arg(long, global = true)]
        d: Option<u64>,
        #[command(subcommand)]
        source: GroupSource,
    },
    /// `ord(d)`; with `--q`, also checks the recurrence from `d` to `d + q·e`.
    Ord {
        #[arg(long, global = true)]
        d: Option<u64>,
        #[arg(long, global = true)]
        q: Option<u64>,
        #[command(subcommand)]
        source: GroupSource,
    },
    Ctame {
        #[command(subcommand)]
        source: GroupSource,
    },
    Zeta(ZetaArgs),
    /// Compares oracle elementary divisors with the closed formula.
    Oracle(OracleArgs),
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    Weights {
        #[command(subcommand)]
        command: WeightsCommand,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum GroupSource {
    Induced {
        #[arg(long)]
        e: u64,
        #[arg(long, default_value_t = 1)]
        f: u64,
    },
    Split {
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
    /// `ν₁(r)` in characteristic `--p`.
    Nu1 {
        #[arg(long)]
        r: u32,
    },
    /// A descriptor given inline as JSON.
    Json { text: String },
    File { path: PathBuf },
    Corpus { name: String },
}

#[derive(Args, Debug)]
pub struct ZetaArgs {
    #[arg(long, global = true, default_value_t = 20)]
    pub terms: u64,
    #[arg(long, global = true)]
    pub closed_form: bool,
    /// Compare the closed form with the truncation.
    #[arg(long, global = true)]
    pub verify: bool,
    #[arg(long, global = true, default_value_t = 60)]
    pub verify_terms: u64,
    /// Fail unless the JSON result equals this file.
    #[arg(long, global = true)]
    pub golden: Option<PathBuf>,
    #[command(subcommand)]
    pub source: ZetaSource,
}

#[derive(Subcommand, Debug, Clone)]
pub enum ZetaSource {
    Induced {
        #[arg(long)]
        e: u64,
        #[arg(long, default_value_t = 1)]
        f: u64,
    },
    Split {
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
    Json { text: String },
    File { path: PathBuf },
    Corpus { name: String },
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub e_max: u64,
    #[arg(long)]
    pub f_max: u64,
    #[arg(long)]
    pub d_max: u64,
    /// Oracle field size; chosen per cell when absent.
    #[arg(long)]
    pub q: Option<u64>,
    /// Every `d` prime to `p`, not only `d ≡ 1 mod e`.
    #[arg(long)]
    pub all_d: bool,
}

#[derive(Args, Debug, Clone)]
pub struct LatticeInput {
    /// JSON file with `group` and `lattice`.
    #[arg(long, conflicts_with = "json")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum LatticeCommand {
    TateCohomology {
        #[arg(long, allow_negative_numbers = true)]
        degree: i32,
        /// Comma-separated elements; every subgroup when absent.
        #[arg(long)]
        subgroup: Option<String>,
        #[command(flatten)]
        input: LatticeInput,
    },
    FlasqueResolve {
        #[command(flatten)]
        input: LatticeInput,
    },
    InvariantRank {
        #[arg(long)]
        subgroup: Option<String>,
        #[command(flatten)]
        input: LatticeInput,
    },
}

#[derive(Subcommand, Debug)]
pub enum WeightsCommand {
    /// Multiplies each weight by `p^{e_i}`.
    ApplyScale {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        weights: String,
        #[arg(long)]
        scale: String,
    },
    /// Weights of a graded substitution; `--image` once per target
    /// parameter, monomials separated by `;`, exponents by `,`.
    Induced {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        weights: String,
        #[arg(long = "image", required = true)]
        images: Vec<String>,
    },
}

/// A finished command: the report and the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome { report, exit_code: 0 }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::Descriptor(format!("bad {what} entry {t:?}"))))
        .collect()
}

/// Least prime for which the jumps are defined and prime to every jump
/// denominator.
pub fn default_p(g: &GroupDescriptor) -> Result<u64, CliError> {
    if let GroupDescriptor::Nu1 { p, .. } = g {
        return Ok(*p);
    }
    let mut last = None;
    for p in (2u64..200).filter(|&n| is_prime(n)) {
        match jumps::jump_denominator(g, p) {
            Ok(e) if e % p != 0 => return Ok(p),
            Ok(_) => {}
            Err(err) => last = Some(err),
        }
    }
    Err(match last {
        Some(err) => err.into(),
        None => CliError::Descriptor("no residue characteristic below 200 suits this descriptor".into()),
    })
}

fn resolve_group(source: &GroupSource, p: Option<u64>) -> Result<(GroupDescriptor, u64), CliError> {
    let g = match source {
        GroupSource::Induced { e, f } => GroupDescriptor::induced(*e, *f),
        GroupSource::Split { n } => GroupDescriptor::split_torus(*n),
        GroupSource::Nu1 { r } => {
            let p = p.ok_or_else(|| CliError::Descriptor("nu1 needs --p".into()))?;
            GroupDescriptor::Nu1 { r: *r, p }
        }
        GroupSource::Json { text } => serde_json::from_str::<GroupJson>(text)
            .map_err(|e| CliError::Descriptor(e.to_string()))?
            .to_descriptor()?,
        GroupSource::File { path } => read_json::<GroupJson>(path)?.to_descriptor()?,
        GroupSource::Corpus { name } => {
            let entry = corpus::group(name)
                .ok_or_else(|| CliError::Descriptor(format!("no corpus group named {name:?}")))?;
            return Ok((entry.group, p.unwrap_or(entry.p)));
        }
    };
    g.validate()?;
    let p = match p {
        Some(p) => p,
        None => default_p(&g)?,
    };
    Ok((g, p))
}

fn group_header(g: &GroupDescriptor, p: u64) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("group".into(), serde_json::to_value(GroupJson::from_descriptor(g)).expect("descriptor serializes"));
    m.insert("p".into(), json!(p));
    m
}

fn cmd_jumps(g: &GroupDescriptor, p: u64) -> Result<Report, CliError> {
    let j = jumps::jumps_of(g, p)?;
    let mut obj = group_header(g, p);
    obj.insert("jumps".into(), render::jumps_json(&j));
    obj.insert("threshold".into(), json!(j.threshold()));
    obj.insert("denominator".into(), json!(j.denominator_lcm()));
    Ok(Report { text: j.to_string(), json: Value::Object(obj), csv: render::jumps_csv(&j), tex: render::jumps_tex(&j) })
}

fn cmd_djumps(g: &GroupDescriptor, d: u64, p: u64) -> Result<Report, CliError> {
    let j = jumps::d_jumps_of(g, d, p)?;
    let mut obj = group_header(g, p);
    obj.insert("d".into(), json!(d));
    obj.insert("d_jumps".into(), render::d_jumps_json(&j));
    Ok(Report {
        text: j.to_string(),
        json: Value::Object(obj),
        csv: render::d_jumps_csv(&j),
        tex: render::d_jumps_tex(&j),
    })
}

fn cmd_ord(g: &GroupDescriptor, d: u64, q: Option<u64>, p: u64) -> Result<Outcome, CliError> {
    let value = jumps::ord(g, d, p)?;
    let mut obj = group_header(g, p);
    obj.insert("d".into(), json!(d));
    obj.insert("ord".into(), json!(value));
    let mut text = value.to_string();
    let mut csv = format!("d,ord\n{d},{value}\n");
    let mut exit_code = 0;
    if let Some(q) = q {
        let holds = jumps::check_ord_recurrence(g, d, q, p)?;
        let e = jumps::jump_denominator(g, p)?;
        let next = jumps::ord(g, d + q * e, p)?;
        text.push_str(&format!(
            "\nrecurrence from d = {d} to d = {}: {}",
            d + q * e,
            if holds { "holds" } else { "fails" }
        ));
        csv.push_str(&format!("{},{next}\n", d + q * e));
        obj.insert("recurrence".into(), json!({"q": q, "target": d + q * e, "ord": next, "holds": holds}));
        if !holds {
            exit_code = 1;
        }
    }
    let tex = format!("$\\operatorname{{ord}}({d}) = {value}$");
    Ok(Outcome { report: Report { text, json: Value::Object(obj), csv, tex }, exit_code })
}

fn cmd_ctame(g: &GroupDescriptor, p: u64) -> Result<Report, CliError> {
    let c = jumps::c_tame(g, p)?;
    let mut obj = group_header(g, p);
    obj.insert("c_tame".into(), json!(format_rational(&c)));
    Ok(Report {
        text: render::text_rational(&c),
        json: Value::Object(obj),
        csv: format!("c_tame\n{}\n", format_rational(&c)),
        tex: format!("$c_{{\\mathrm{{tame}}}} = {}$", render::tex_rational(&c)),
    })
}

/// `f` copies of the regular lattice of `ℤ/e`.
fn induced_zeta_input(e: u64, f: u64, p: u64) -> Result<ZetaInput, CliError> {
    if e == 0 || f == 0 {
        return Err(CliError::Descriptor("e and f must be positive".into()));
    }
    let gal = FiniteGroup::cyclic(e as usize);
    let reg = GLattice::regular(&gal);
    let x = (1..f).fold(reg.clone(), |acc, _| acc.direct_sum(&reg));
    Ok(ZetaInput::from_character_lattice(GroupDescriptor::induced(e, f), p, &x)?)
}

fn resolve_zeta(source: &ZetaSource, p: Option<u64>) -> Result<ZetaInput, CliError> {
    Ok(match source {
        ZetaSource::Induced { e, f } => {
            let g = GroupDescriptor::induced(*e, *f);
            g.validate()?;
            let p = match p {
                Some(p) => p,
                None => default_p(&g)?,
            };
            induced_zeta_input(*e, *f, p)?
        }
        ZetaSource::Split { n } => induced_zeta_input(1, *n, p.unwrap_or(2))?,
        ZetaSource::Json { text } => serde_json::from_str::<ZetaInputJson>(text)
            .map_err(|e| CliError::Descriptor(e.to_string()))?
            .build()?,
        ZetaSource::File { path } => read_json::<ZetaInputJson>(path)?.build()?,
        ZetaSource::Corpus { name } => corpus::zeta_input(name)
            .ok_or_else(|| CliError::Descriptor(format!("no corpus zeta input named {name:?}")))?,
    })
}

fn cmd_zeta(args: &ZetaArgs, p: Option<u64>) -> Result<Outcome, CliError> {
    let z = resolve_zeta(&args.source, p)?;
    let mut obj = serde_json::Map::new();
    obj.insert("input".into(), serde_json::to_value(ZetaInputJson::from_input(&z))?);
    let (series, truncated) = if args.closed_form {
        (zeta::zeta_closed_form(&z)?, false)
    } else {
        (zeta::zeta_truncated(&z, args.terms)?, true)
    };
    let key = if truncated { "truncated" } else { "closed_form" };
    if truncated {
        obj.insert("terms".into(), json!(args.terms));
    }
    obj.insert(key.into(), render::series_json(&series));
    let mut text = render::series_text(&series, truncated);
    if args.verify {
        let check = zeta::verify_rationality(&z, args.verify_terms)?;
        if let Some(k) = check.first_mismatch {
            return Err(CliError::Mismatch(format!(
                "closed form and truncated series differ at x^{k}"
            )));
        }
        text.push_str(&format!("\nverified to {} terms", check.terms));
        obj.insert("verified_terms".into(), json!(check.terms));
    }
    let report = Report {
        text,
        json: Value::Object(obj),
        csv: render::series_csv(&series),
        tex: render::tex_series(&series, truncated),
    };
    if let Some(path) = &args.golden {
        compare_golden(&report.json, path)?;
    }
    Ok(Outcome::ok(report))
}

fn compare_golden(actual: &Value, path: &Path) -> Result<(), CliError> {
    let expected: Value = read_json(path)?;
    if &expected != actual {
        return Err(CliError::Mismatch(format!("result differs from golden file {}", path.display())));
    }
    Ok(())
}

fn cmd_oracle(args: &OracleArgs, p: Option<u64>, seed: Option<u64>, policy: PrecisionPolicy) -> Result<Outcome, CliError> {
    let mut spec = GridSpec::new(args.e_max, args.f_max, args.d_max);
    if let Some(p) = p {
        if !is_prime(p) {
            return Err(CliError::Descriptor(format!("p = {p} is not prime")));
        }
        spec.p = p;
    }
    if let Some(q) = args.q {
        if tamejump_core::arith::prime_power(q).is_none() {
            return Err(CliError::Descriptor(format!("q = {q} is not a prime power")));
        }
    }
    spec.q = args.q;
    spec.seed = seed;
    spec.policy = policy;
    if args.all_d {
        spec.selection = DSelection::All;
    }
    let cells = run_grid(&spec);
    let fail = summarize(&cells).fail;
    Ok(Outcome { report: render::oracle_report(&cells), exit_code: i32::from(fail > 0) })
}

fn load_lattice(input: &LatticeInput) -> Result<(FiniteGroup, GLattice), CliError> {
    let spec: GLatticeJson = match (&input.input, &input.json) {
        (Some(path), None) => read_json(path)?,
        (None, Some(text)) => serde_json::from_str(text).map_err(|e| CliError::Descriptor(e.to_string()))?,
        _ => return Err(CliError::Descriptor("give one of --input and --json".into())),
    };
    spec.build()
}

fn subgroups_of(g: &FiniteGroup, spec: &Option<String>) -> Result<Vec<Subgroup>, CliError> {
    match spec {
        Some(s) => Ok(vec![g.subgroup(&parse_list::<usize>(s, "subgroup")?)?]),
        None => Ok(g.subgroups()?),
    }
}

/// A random product of elementary integer matrices.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> IMat {
    let mut u = IMat::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c: i128 = rng.gen_range(-2..=2);
        let mut rows = u.to_rows();
        for k in 0..n {
            rows[i][k] += c * rows[j][k];
        }
        u = IMat::from_rows(&rows);
    }
    u
}

/// The same lattice in the basis given by the columns of `u`.
pub fn change_basis(g: &FiniteGroup, a: &GLattice, u: &IMat) -> Result<GLattice, CliError> {
    let inv = intmat::inverse(u).ok_or_else(|| CliError::Computation("basis change is not unimodular".into()))?;
    let mats = (0..g.order()).map(|x| inv.mul(a.action(x)).mul(u)).collect();
    Ok(GLattice::from_action(g, mats, Provenance::General)?)
}

fn cyclic_text(factors: &[i128]) -> String {
    if factors.is_empty() {
        return "0".into();
    }
    factors.iter().map(|n| format!("ℤ/{n}")).collect::<Vec<_>>().join(" ⊕ ")
}

fn elements_text(h: &Subgroup) -> String {
    format!("{{{}}}", h.elements().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn cmd_tate(degree: i32, subgroup: &Option<String>, input: &LatticeInput, seed: Option<u64>) -> Result<Report, CliError> {
    let deg = TateDegree::from_int(degree)
        .ok_or_else(|| CliError::Descriptor(format!("Tate degree {degree} is not supported; use -1 or 0")))?;
    let (g, mut a) = load_lattice(input)?;
    if let Some(seed) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unimodular(&mut rng, a.rank(), 4 * a.rank());
        a = change_basis(&g, &a, &u)?;
    }
    let mut text = String::new();
    let mut csv = String::from("subgroup,invariant_factors\n");
    let mut tex = String::new();
    let mut rows = Vec::new();
    let sup = if degree < 0 { "-1" } else { "0" };
    for h in subgroups_of(&g, subgroup)? {
        let t = tate_cohomology(&g, &h, &a, deg)?;
        text.push_str(&format!("H = {}: Ĥ^{sup} = {}\n", elements_text(&h), cyclic_text(&t.invariant_factors)));
        let factors = t.invariant_factors.iter().map(|n| n.to_string()).collect::<Vec<_>>();
        csv.push_str(&format!(
            "{},{}\n",
            h.elements().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
            factors.join(" ")
        ));
        let tex_group = if factors.is_empty() {
            "0".to_string()
        } else {
            factors.iter().map(|n| format!("\\mathbb{{Z}}/{n}")).collect::<Vec<_>>().join(" \\oplus ")
        };
        tex.push_str(&format!("$\\hat H^{{{sup}}}(H, A) = {tex_group}$\n"));
        rows.push(json!({"subgroup": h.elements(), "invariant_factors": t.invariant_factors.iter().map(|&n| n as i64).collect::<Vec<_>>()}));
    }
    Ok(Report { text, json: json!({"degree": degree, "groups": rows}), csv, tex })
}

fn matrix_json(m: &IMat) -> Value {
    json!(m.to_rows().iter().map(|r| r.iter().map(|&x| x as i64).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn matrix_text(m: &IMat) -> String {
    m.to_rows()
        .iter()
        .map(|r| format!("  [{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join("\n")
}

fn cmd_flasque(input: &LatticeInput) -> Result<Report, CliError> {
    let (g, m) = load_lattice(input)?;
    let res = flasque_resolve(&g, &m)?;
    res.verify(&g, &m)?;
    let summands: Vec<String> = res.summands.iter().map(|h| format!("ℤ[G/{}]", elements_text(h))).collect();
    let text = format!(
        "0 → M → P → F → 0 with rank M = {}, rank P = {}, rank F = {}\nP = {}\ninclusion M → P:\n{}\nprojection P → F:\n{}\nexact, equivariant, F flasque\n",
        m.rank(),
        res.p.rank(),
        res.f.rank(),
        summands.join(" ⊕ "),
        matrix_text(&res.inclusion),
        matrix_text(&res.projection)
    );
    let json = json!({
        "rank_m": m.rank(),
        "rank_p": res.p.rank(),
        "rank_f": res.f.rank(),
        "summands": res.summands.iter().map(|h| h.elements().to_vec()).collect::<Vec<_>>(),
        "inclusion": matrix_json(&res.inclusion),
        "projection": matrix_json(&res.projection),
        "verified": true,
    });
    let csv = format!("rank_m,rank_p,rank_f\n{},{},{}\n", m.rank(), res.p.rank(), res.f.rank());
    let tex = format!(
        "$0 \\to M \\to P \\to F \\to 0,\\quad \\operatorname{{rk}} P = {},\\ \\operatorname{{rk}} F = {}$\n",
        res.p.rank(),
        res.f.rank()
    );
    Ok(Report { text, json, csv, tex })
}

fn cmd_invariant_rank(subgroup: &Option<String>, input: &LatticeInput) -> Result<Report, CliError> {
    let (g, a) = load_lattice(input)?;
    let mut text = String::new();
    let mut csv = String::from("subgroup,invariant_rank\n");
    let mut tex = String::new();
    let mut rows = Vec::new();
    for h in subgroups_of(&g, subgroup)? {
        let r = invariant_rank(&g, &h, &a)?;
        text.push_str(&format!("H = {}: rank A^H = {r}\n", elements_text(&h)));
        csv.push_str(&format!(
            "{},{r}\n",
            h.elements().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        ));
        tex.push_str(&format!("$\\operatorname{{rk}} A^H = {r}$\n"));
        rows.push(json!({"subgroup": h.elements(), "invariant_rank": r}));
    }
    Ok(Report { text, json: json!({"groups": rows}), csv, tex })
}

fn weights_report(w: &WeightMultiset) -> Report {
    Report {
        text: w.to_string(),
        json: json!({"modulus": w.modulus(), "weights": w.weights()}),
        csv: format!(
            "modulus,weights\n{},{}\n",
            w.modulus(),
            w.weights().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        ),
        tex: format!(
            "$({})$",
            w.weights().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        ),
    }
}

fn cmd_weights(cmd: &WeightsCommand, p: Option<u64>) -> Result<Report, CliError> {
    match cmd {
        WeightsCommand::ApplyScale { d, weights, scale } => {
            let p = p.ok_or_else(|| CliError::Descriptor("apply-scale needs --p".into()))?;
            let w = WeightMultiset::new(*d, parse_list::<u64>(weights, "weight")?)?;
            let s = Scale::new(parse_list::<u32>(scale, "scale")?);
            Ok(weights_report(&apply_scale(&w, &s, p)?))
        }
        WeightsCommand::Induced { d, weights, images } => {
            let w = WeightMultiset::new(*d, parse_list::<u64>(weights, "weight")?)?;
            let images = images
                .iter()
                .map(|img| img.split(';').map(|mono| parse_list::<u64>(mono, "exponent")).collect())
                .collect::<Result<Vec<Vec<Vec<u64>>>, CliError>>()?;
            let g = GradedSubstitution::new(w, images)?;
            Ok(weights_report(&induced_weights(&g)?))
        }
    }
}

fn require_d(d: Option<u64>) -> Result<u64, CliError> {
    d.ok_or_else(|| CliError::Descriptor("--d is required".into()))
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let policy = PrecisionPolicy {
        factor: cli.precision_factor,
        offset: cli.precision_offset,
        max_doublings: cli.max_doublings,
    };
    match &cli.command {
        Command::Jumps { d, source } => {
            let (g, p) = resolve_group(source, cli.p)?;
            Ok(Outcome::ok(match d {
                Some(d) => cmd_djumps(&g, *d, p)?,
                None => cmd_jumps(&g, p)?,
            }))
        }
        Command::Djumps { d, source } => {
            let (g, p) = resolve_group(source, cli.p)?;
            Ok(Outcome::ok(cmd_djumps(&g, require_d(*d)?, p)?))
        }
        Command::Ord { d, q, source } => {
            let (g, p) = resolve_group(source, cli.p)?;
            cmd_ord(&g, require_d(*d)?, *q, p)
        }
        Command::Ctame { source } => {
            let (g, p) = resolve_group(source, cli.p)?;
            Ok(Outcome::ok(cmd_ctame(&g, p)?))
        }
        Command::Zeta(args) => cmd_zeta(args, cli.p),
        Command::Oracle(args) => cmd_oracle(args, cli.p, cli.seed, policy),
        Command::Lattice { command } => Ok(Outcome::ok(match command {
            LatticeCommand::TateCohomology { degree, subgroup, input } => cmd_tate(*degree, subgroup, input, cli.seed)?,
            LatticeCommand::FlasqueResolve { input } => cmd_flasque(input)?,
            LatticeCommand::InvariantRank { subgroup, input } => cmd_invariant_rank(subgroup, input)?,
        })),
        Command::Weights { command } => Ok(Outcome::ok(cmd_weights(command, cli.p)?)),
    }
}

/// Parses, runs and writes the result; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let text = outcome.report.render(cli.format);
            let written = match &cli.out {
                Some(path) => std::fs::write(path, text).map_err(CliError::from),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => outcome.exit_code,
                Err(e) => {
                    eprintln!("{}", e.to_json());
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
