//! Named certification stages for the two built-in targets, the claims each
//! stage establishes, and the text and json-lines reports.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::roots::RootMethod;
use crate::arith::{dec, exact_str, int, rat, sci};
use crate::cert::{localopt_certificate, Certificate};
use crate::error::{Error, Result};
use crate::lattice::{
    e8_lattice, e8_witness_vectors, enumerate_short_vectors, gram_of, leech_lattice, leech_witness_vectors, EnumConfig,
    LatticeData, MinVectorSet, Witnesses,
};
use crate::localopt::{
    adjugate, alpha_chain, alpha_exact_lp_min, drho_lower_bound, final_inequality, local_optimality_certificate,
    perfection_rank,
};
use crate::radial::certify::{certify_packing_bound, counting_lower_bound, SignHints};
use crate::radial::io::{parse_coeffs, parse_roots};
use crate::radial::newton::{default_spec, first_root_radius, newton_construct};
use crate::radial::{counting_recipe, solve_forced_roots, RadialFn};
use crate::scheme::{
    basis_transfer_check, bose_mesner_projection_check, classify_pairs, classify_pairs_in, count_intersection_numbers,
    e8_labels, eutaxy_check, first_pass_sigma, inner_product_chain, leech_labels, moment_matrix_inverse_norm,
    moment_table, perturbation_budget, sigma_chain, BaseScope, PairScope, SchemeTable, SphericalCode, TransferParams,
};
use crate::sphere_lp::{design_defect_constant, kissing_poly, lp_code_bound, lp_slack, perturbed_cos};
use crate::{Rat, RatInterval};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Leech,
    E8,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Leech => "leech",
            Target::E8 => "e8",
        }
    }

    pub fn dimension(self) -> u32 {
        self.constants().n
    }

    fn constants(self) -> &'static Constants {
        match self {
            Target::Leech => &LEECH,
            Target::E8 => &E8,
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "leech" => Ok(Target::Leech),
            "e8" => Ok(Target::E8),
            _ => Err(Error::Parse(format!("unknown target {s:?} (expected leech or e8)"))),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Kissing,
    Counting,
    Scheme,
    Sigma,
    Basis,
    Localopt,
    Magicfn,
}

impl Stage {
    /// Every stage in execution order.
    pub const ALL: [Stage; 7] =
        [Stage::Kissing, Stage::Counting, Stage::Scheme, Stage::Sigma, Stage::Basis, Stage::Localopt, Stage::Magicfn];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Kissing => "kissing",
            Stage::Counting => "counting",
            Stage::Scheme => "scheme",
            Stage::Sigma => "sigma",
            Stage::Basis => "basis",
            Stage::Localopt => "localopt",
            Stage::Magicfn => "magicfn",
        }
    }

    pub fn dependencies(self) -> &'static [Stage] {
        match self {
            Stage::Basis | Stage::Localopt => &[Stage::Scheme],
            _ => &[],
        }
    }

    /// Parses a comma-separated list; `full` expands to every stage.
    pub fn parse_list(s: &str) -> Result<Vec<Stage>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part.eq_ignore_ascii_case("full") {
                out.extend(Stage::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::Parse("no stages given".into()));
        }
        Ok(out)
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown stage {s:?}")))
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The requested stages plus their dependencies, deduplicated and in
/// execution order.
pub fn resolve_stages(requested: &[Stage]) -> Vec<Stage> {
    let mut want: Vec<Stage> = Vec::new();
    let mut stack: Vec<Stage> = requested.to_vec();
    while let Some(s) = stack.pop() {
        if !want.contains(&s) {
            want.push(s);
            stack.extend(s.dependencies());
        }
    }
    want.sort();
    want
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub target: Target,
    pub stages: Vec<Stage>,
    /// Enumeration node cap; `None` keeps the library default.
    pub node_cap: Option<u64>,
    /// Accepted for interface stability; stages run on the calling thread.
    pub threads: usize,
    pub fcoeffs: Option<PathBuf>,
    pub roots: Option<PathBuf>,
    pub allow_heavy: bool,
}

impl PipelineConfig {
    pub fn new(target: Target, stages: Vec<Stage>) -> Self {
        PipelineConfig { target, stages, node_cap: None, threads: 1, fcoeffs: None, roots: None, allow_heavy: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn phrase(self) -> &'static str {
        match self {
            Relation::Eq => "certified =",
            Relation::Le => "certified ≤",
            Relation::Ge => "certified ≥",
        }
    }
}

/// One certified statement, compared with the published constant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub id: String,
    pub anchor: String,
    pub relation: Relation,
    pub ours: String,
    pub published: String,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    Certification,
    Resource,
    Input,
}

impl FailureKind {
    pub fn of(e: &Error) -> Self {
        match e {
            Error::Parse(_) | Error::Format(_) | Error::Io(_) => FailureKind::Input,
            Error::ResourceLimit(_) | Error::BoundTooLarge { .. } | Error::TooManyMinors(_) => FailureKind::Resource,
            _ => FailureKind::Certification,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageFailure {
    pub kind: FailureKind,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageReport {
    pub stage: Stage,
    pub claims: Vec<Claim>,
    /// Set when the stage stopped early; claims made before that are kept.
    pub failure: Option<StageFailure>,
}

impl StageReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.claims.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub target: Target,
    pub stages: Vec<StageReport>,
    /// Input problems found before any stage ran.
    pub input_error: Option<String>,
    /// Emitted by the localopt stage.
    pub certificate: Option<Certificate>,
}

#[derive(Serialize)]
struct ClaimRecord<'a> {
    target: &'a str,
    stage: &'a str,
    id: &'a str,
    anchor: &'a str,
    relation: Relation,
    ours: &'a str,
    published: &'a str,
    verdict: &'a str,
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    target: &'a str,
    stage: &'a str,
    kind: FailureKind,
    message: &'a str,
    verdict: &'a str,
}

impl Report {
    pub fn claims(&self) -> impl Iterator<Item = &Claim> {
        self.stages.iter().flat_map(|s| &s.claims)
    }

    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims().find(|c| c.id == id)
    }

    pub fn passed(&self) -> bool {
        self.input_error.is_none() && self.stages.iter().all(StageReport::passed)
    }

    /// 0 on success, else 2 for input errors, 3 for resource limits and 1
    /// for certification failures, in that priority.
    pub fn exit_code(&self) -> i32 {
        if self.input_error.is_some() {
            return 2;
        }
        let worst = self.stages.iter().filter_map(|s| s.failure.as_ref().map(|f| f.kind)).max();
        match worst {
            Some(FailureKind::Input) => 2,
            Some(FailureKind::Resource) => 3,
            Some(FailureKind::Certification) => 1,
            None if self.passed() => 0,
            None => 1,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("latcert report, target {}\n", self.target);
        if let Some(e) = &self.input_error {
            out.push_str(&format!("input error: {e}\n"));
        }
        for s in &self.stages {
            out.push_str(&format!("\n[{}] {}\n", s.stage, if s.passed() { "PASS" } else { "FAIL" }));
            for c in &s.claims {
                out.push_str(&format!(
                    "  {} {}: {} {} (published: {}) [{}]\n",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.id,
                    c.relation.phrase(),
                    c.ours,
                    c.published,
                    c.anchor
                ));
            }
            if let Some(f) = &s.failure {
                out.push_str(&format!("  ERROR ({}): {}\n", kind_name(f.kind), f.message));
            }
        }
        let total = self.claims().count();
        let passed = self.claims().filter(|c| c.pass).count();
        out.push_str(&format!("\n{passed}/{total} claims certified; exit {}\n", self.exit_code()));
        out
    }

    pub fn to_json_lines(&self) -> String {
        let target = self.target.name();
        let mut out = String::new();
        let mut push = |v: serde_json::Result<String>| {
            out.push_str(&v.expect("report records serialize"));
            out.push('\n');
        };
        if let Some(e) = &self.input_error {
            push(serde_json::to_string(&ErrorRecord {
                target,
                stage: "input",
                kind: FailureKind::Input,
                message: e,
                verdict: "ERROR",
            }));
        }
        for s in &self.stages {
            for c in &s.claims {
                push(serde_json::to_string(&ClaimRecord {
                    target,
                    stage: s.stage.name(),
                    id: &c.id,
                    anchor: &c.anchor,
                    relation: c.relation,
                    ours: &c.ours,
                    published: &c.published,
                    verdict: if c.pass { "PASS" } else { "FAIL" },
                }));
            }
            if let Some(f) = &s.failure {
                push(serde_json::to_string(&ErrorRecord {
                    target,
                    stage: s.stage.name(),
                    kind: f.kind,
                    message: &f.message,
                    verdict: "ERROR",
                }));
            }
        }
        out
    }
}

fn kind_name(k: FailureKind) -> &'static str {
    match k {
        FailureKind::Certification => "certification failure",
        FailureKind::Resource => "resource limit",
        FailureKind::Input => "input error",
    }
}

/// Published and working constants per target. Decimal strings are exact.
struct Constants {
    n: u32,
    min_norm: i64,
    next_norm: i64,
    size: u64,
    eps: &'static str,
    mu: &'static str,
    nu: &'static str,
    omega: &'static str,
    perturbed_cap: &'static str,
    perturbed_published: &'static str,
    counting_recipe: (u32, usize, u32),
    counting_mu: &'static str,
    counting_eps: &'static str,
    first_pass_cap: &'static str,
    sigma_cap: &'static str,
    defect_cap: &'static str,
    inverse_norm: i64,
    budget_cap: &'static str,
    budget_strict: bool,
    dev_factor: i64,
    coord_sup: i64,
    coefficient_bound: i64,
    transfer_cap: Option<&'static str>,
    rank: usize,
    adj_sum: i64,
    minor_published: i64,
    /// Whether the published value for order 2 includes the factor `2^{2/2}`.
    minor_scaled: bool,
    c_published: &'static str,
    alpha: (i64, i64),
    alpha_denominator: i64,
    rho_max: &'static str,
    final_cap: &'static str,
}

static LEECH: Constants = Constants {
    n: 24,
    min_norm: 4,
    next_norm: 6,
    size: 196560,
    eps: "6.733e-27",
    mu: "3.981e-13",
    nu: "3.219e-12",
    omega: "1.703e-11",
    perturbed_cap: "1e-19",
    perturbed_published: "< 196560 + 1e-19",
    counting_recipe: (4, 10, 8),
    counting_mu: "3.981e-13",
    counting_eps: "6.733e-27",
    first_pass_cap: "6.411e-9",
    sigma_cap: "6.43801e-12",
    defect_cap: "2.50193e-5",
    inverse_norm: 7225,
    budget_cap: "0.05",
    budget_strict: true,
    dev_factor: 75,
    coord_sup: 4,
    coefficient_bound: 156,
    transfer_cap: Some("1e-17"),
    rank: 300,
    adj_sum: 2028,
    minor_published: 818153,
    minor_scaled: false,
    c_published: "201636306",
    alpha: (4, 1055),
    alpha_denominator: 1055,
    rho_max: "1e-20",
    final_cap: "1.8e-22",
};

static E8: Constants = Constants {
    n: 8,
    min_norm: 2,
    next_norm: 4,
    size: 240,
    eps: "1.45e-13",
    mu: "1.03e-6",
    nu: "4.44e-6",
    omega: "0",
    perturbed_cap: "1",
    perturbed_published: "< 241",
    counting_recipe: (2, 5, 3),
    counting_mu: "1.03e-6",
    counting_eps: "1.45e-13",
    first_pass_cap: "6e-5",
    sigma_cap: "8.89e-6",
    defect_cap: "3.48e-4",
    inverse_norm: 100,
    budget_cap: "0.44",
    budget_strict: false,
    dev_factor: 7,
    coord_sup: 2,
    coefficient_bound: 40,
    transfer_cap: None,
    rank: 36,
    adj_sum: 620,
    minor_published: 7936,
    minor_scaled: true,
    c_published: "7973",
    alpha: (1, 20),
    alpha_denominator: 40,
    rho_max: "2.5e-5",
    final_cap: "1.6e-10",
};

struct Inputs {
    f: Option<RadialFn>,
    roots: Option<Vec<Rat>>,
}

fn load_inputs(cfg: &PipelineConfig) -> Result<Inputs> {
    let read = |p: &PathBuf| {
        std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
    };
    let f = cfg.fcoeffs.as_ref().map(|p| parse_coeffs(&read(p)?)).transpose()?;
    let roots = cfg.roots.as_ref().map(|p| parse_roots(&read(p)?)).transpose()?;
    if let Some(f) = &f {
        if f.n != cfg.target.dimension() {
            return Err(Error::Parse(format!(
                "coefficient file is for dimension {}, target {} has dimension {}",
                f.n,
                cfg.target,
                cfg.target.dimension()
            )));
        }
    }
    if roots.is_some() && f.is_none() {
        return Err(Error::Parse("--roots needs --fcoeffs".into()));
    }
    if roots.as_ref().is_some_and(|r| r.is_empty()) {
        return Err(Error::Parse("root file lists no roots".into()));
    }
    Ok(Inputs { f, roots })
}

struct Ctx<'a> {
    cfg: &'a PipelineConfig,
    k: &'static Constants,
    inputs: Inputs,
    lattice: LatticeData,
    witnesses: Witnesses,
    minvecs: Option<MinVectorSet>,
    table: Option<SchemeTable>,
    certificate: Option<Certificate>,
}

fn claim(id: &str, anchor: &str, relation: Relation, ours: String, published: impl Into<String>, pass: bool) -> Claim {
    Claim { id: id.into(), anchor: anchor.into(), relation, ours, published: published.into(), pass }
}

fn lt_or_le(x: &Rat, cap: &Rat, strict: bool) -> bool {
    if strict {
        x < cap
    } else {
        x <= cap
    }
}

impl Ctx<'_> {
    fn m(&self) -> Rat {
        int(self.k.min_norm)
    }

    fn eps(&self) -> Rat {
        dec(self.k.eps)
    }

    fn minvecs(&mut self) -> Result<&MinVectorSet> {
        if self.minvecs.is_none() {
            let mut cfg = EnumConfig::default();
            if let Some(cap) = self.cfg.node_cap {
                cfg.node_limit = cap;
            }
            self.minvecs = Some(enumerate_short_vectors(&self.lattice, &self.m(), &cfg)?);
        }
        Ok(self.minvecs.as_ref().expect("just set"))
    }

    fn labels(&self) -> Vec<Rat> {
        match self.cfg.target {
            Target::Leech => leech_labels(),
            Target::E8 => e8_labels(),
        }
    }

    /// Labels of the moment matrix whose inverse norm is published: the
    /// non-unit classes for Leech, all five classes for E8.
    fn moment_labels(&self) -> Vec<Rat> {
        match self.cfg.target {
            Target::Leech => [0, 1, -1, 2, -2].iter().map(|&k| rat(k, 4)).collect(),
            Target::E8 => e8_labels(),
        }
    }

    fn kissing(&mut self, out: &mut Vec<Claim>) -> Result<()> {
        let k = self.k;
        let n = k.n;
        let size = int(k.size as i64);
        let f = kissing_poly(n, &Rat::zero())?;
        let b = lp_code_bound(&f, n, &rat(1, 2))?;
        out.push(claim(
            "kissing.lp_bound",
            "kissing number, linear programming bound",
            Relation::Eq,
            exact_str(b.bound.hi()),
            k.size.to_string(),
            b.bound == RatInterval::point(size.clone()),
        ));
        let eps = self.eps();
        let f = kissing_poly(n, &eps)?;
        let b = lp_code_bound(&f, n, &perturbed_cos(&eps))?;
        out.push(claim(
            "kissing.perturbed_bound",
            "perturbed kissing configuration, code size bound",
            Relation::Le,
            format!("{} + {}", k.size, sci(&(b.bound.hi() - &size), 6)),
            k.perturbed_published,
            b.bound.hi() < &(&size + dec(k.perturbed_cap)),
        ));
        let m = self.m();
        let mv = self.minvecs()?;
        let count = mv.count();
        let single_shell = mv.norm() == Some(&m);
        out.push(claim(
            "kissing.min_vectors",
            "minimal vectors by enumeration",
            Relation::Eq,
            count.to_string(),
            k.size.to_string(),
            count as u64 == k.size && single_shell,
        ));
        out.push(claim(
            "kissing.min_norm",
            "no nonzero vectors below the minimal norm",
            Relation::Eq,
            mv.shells.first().map_or("none".into(), |(norm, _)| exact_str(norm)),
            k.min_norm.to_string(),
            single_shell,
        ));
        Ok(())
    }

    fn counting(&mut self, out: &mut Vec<Claim>) -> Result<()> {
        let k = self.k;
        let (m, kk, digits) = k.counting_recipe;
        let (spec, deg) = counting_recipe(m, kk, digits);
        let g = solve_forced_roots(&spec, deg, k.n)?;
        let hints = SignHints::from_spec(&spec, RootMethod::Sturm);
        let one = Rat::from_integer(1.into());
        let e = &one + dec(k.counting_eps);
        let u = &one - dec(k.counting_mu);
        let mn = self.m();
        let b = counting_lower_bound(&g, &mn, &(&mn * &e * &e), &(int(k.next_norm) * &u * &u), &hints)?;
        out.push(claim(
            "counting.lower_bound",
            "nearly minimal vectors, Poisson summation count",
            Relation::Ge,
            sci(b.bound.lo(), 12),
            format!("> {}", k.size - 1),
            b.bound.lo() > &int(k.size as i64 - 1),
        ));
        Ok(())
    }

    fn scheme(&mut self, out: &mut Vec<Claim>) -> Result<()> {
        let k = self.k;
        let labels = self.labels();
        let target = self.cfg.target;
        let mv = self.minvecs()?.clone();
        let code = SphericalCode::from_min_vectors(&mv)?;
        let table = match target {
            Target::E8 => {
                let cls = classify_pairs(&code, &labels, &Rat::zero())?;
                count_intersection_numbers(&code, &cls, &BaseScope::All)?
            }
            Target::Leech => {
                let rows = vec![0, 1000, 98765];
                let cls = classify_pairs_in(&code, &labels, &Rat::zero(), PairScope::Rows(rows.clone()))?;
                count_intersection_numbers(&code, &cls, &BaseScope::Sample { rows, per_class: 4 })?
            }
        };
        let consistent = table.consistency_violation();
        out.push(claim(
            "scheme.consistency",
            "intersection numbers, row sums and symmetry",
            Relation::Eq,
            consistent.clone().unwrap_or_else(|| "consistent".into()),
            "consistent",
            consistent.is_none(),
        ));
        let moments = moment_table(k.n, k.size, &labels)?;
        out.push(claim(
            "scheme.intersection_numbers",
            "intersection number table, direct count against moment system",
            Relation::Eq,
            if moments == table { "tables agree".into() } else { "tables differ".into() },
            "published table",
            moments == table,
        ));
        let inv = moment_matrix_inverse_norm(k.n, &self.moment_labels())?;
        out.push(claim(
            "scheme.moment_inverse_norm",
            "moment matrix inverse, infinity norm",
            Relation::Eq,
            exact_str(&inv),
            k.inverse_norm.to_string(),
            inv == int(k.inverse_norm),
        ));
        let c = Rat::new(k.n.into(), (k.min_norm as u64 * k.size).into());
        let eutactic = eutaxy_check(&mv, &c);
        out.push(claim(
            "scheme.eutaxy",
            "eutaxy constant C",
            Relation::Eq,
            exact_str(&c),
            exact_str(&c),
            eutactic,
        ));
        let proj = bose_mesner_projection_check(&table, k.n, k.size, &c, &self.m());
        out.push(claim(
            "scheme.projection",
            "scaled Gram matrix is an orthogonal projection, trace",
            Relation::Eq,
            exact_str(&proj.trace),
            k.n.to_string(),
            proj.passed,
        ));
        self.table = Some(table);
        Ok(())
    }

    fn sigma(&mut self, out: &mut Vec<Claim>) -> Result<()> {
        let k = self.k;
        let eps = self.eps();
        let fp = first_pass_sigma(k.n, &eps)?;
        out.push(claim(
            "sigma.first_pass",
            "first-pass inner product deviation",
            Relation::Le,
            sci(&fp.sigma, 6),
            k.first_pass_cap,
            fp.sigma <= dec(k.first_pass_cap),
        ));
        let chain = sigma_chain(&eps, &dec(k.mu), &dec(k.nu), &dec(k.omega), k.n)?;
        out.push(claim(
            "sigma.refined",
            "refined inner product deviation sigma",
            Relation::Le,
            sci(&chain.sigma, 6),
            k.sigma_cap,
            chain.sigma <= dec(k.sigma_cap),
        ));
        let f = kissing_poly(k.n, &eps)?;
        let slack = lp_slack(&f, k.size);
        let defect = design_defect_constant(&f, k.n, k.size, &RatInterval::point(slack))?;
        out.push(claim(
            "sigma.design_defect",
            "spherical design defect",
            Relation::Le,
            sci(defect.hi(), 6),
            k.defect_cap,
            defect.hi() <= &dec(k.defect_cap),
        ));
        let budget = perturbation_budget(k.n, &chain.sigma, defect.hi(), k.size)?;
        let product = budget.hi() * moment_matrix_inverse_norm(k.n, &self.moment_labels())?;
        out.push(claim(
            "sigma.budget",
            "perturbation budget times moment inverse norm",
            Relation::Le,
            sci(&product, 6),
            format!("{} {}", if k.budget_strict { "<" } else { "<=" }, k.budget_cap),
            lt_or_le(&product, &dec(k.budget_cap), k.budget_strict),
        ));
        Ok(())
    }

    fn basis(&mut self, out: &mut Vec<Claim>) -> Result<()> {
        let k = self.k;
        let eps = self.eps();
        let table = self.table.as_ref().expect("scheme stage ran");
        let config = gram_of(&self.lattice, &self.witnesses.config);
        let config = (k.n == 24).then_some(config.as_slice());
        let chain = inner_product_chain(&eps, table, k.n, config)?;
        let cap = &eps * int(k.dev_factor);
        out.push(claim(
            "basis.inner_products",
            "inner products of nearly minimal vectors, deviation",
            Relation::Le,
            sci(&chain.max_deviation, 6),
            format!("{}ε = {}", k.dev_factor, sci(&cap, 6)),
            chain.max_deviation <= cap,
        ));
        let p = TransferParams {
            eps: eps.clone(),
            mu: dec(k.mu),
            min_norm: self.m(),
            next_norm: int(k.next_norm),
            coord_sup: int(k.coord_sup),
            max_dev: cap,
            cap: k.transfer_cap.map(dec),
        };
        let t = basis_transfer_check(&self.lattice, &p)?;
        out.push(claim(
            "basis.coefficient_bound",
            "basis coefficients of minimal vectors",
            Relation::Le,
            exact_str(&t.coefficient_bound),
            k.coefficient_bound.to_string(),
            t.coefficient_bound <= int(k.coefficient_bound),
        ));
        out.push(claim(
            "basis.transfer",
            "nearly minimal vectors keep their reference coefficients",
            Relation::Le,
            sci(&t.norm_budget, 6),
            match k.transfer_cap {
                Some(c) => format!("< {c}"),
                None => format!("< {}", sci(&t.norm_gap, 6)),
            },
            t.passed,
        ));
        Ok(())
    }

    fn localopt(&mut self, out: &mut Vec<Claim>) -> Result<()> {
        let k = self.k;
        let n = k.n as usize;
        let target = self.cfg.target;
        let mv = self.minvecs()?.clone();
        let rank = perfection_rank(&mv, n);
        out.push(claim(
            "localopt.perfection_rank",
            "perfection, rank of minimal vector projections",
            Relation::Eq,
            rank.to_string(),
            k.rank.to_string(),
            rank == k.rank,
        ));
        let gram = self.lattice.gram.clone();
        let adj = adjugate(&gram);
        out.push(claim(
            "localopt.determinant",
            "Gram determinant",
            Relation::Eq,
            exact_str(&adj.det),
            "1",
            adj.det == int(1),
        ));
        out.push(claim(
            "localopt.adjugate_sum",
            "sum of absolute adjugate entries",
            Relation::Eq,
            exact_str(&adj.abs_sum),
            k.adj_sum.to_string(),
            adj.abs_sum == int(k.adj_sum),
        ));
        let rho = dec(k.rho_max);
        let drho = drho_lower_bound(&gram, &rho, 100_000)?;
        let two = drho.terms.iter().find(|t| t.k == 2).expect("order 2 present");
        let minor = if k.minor_scaled { int(2) * &two.minor_sum } else { two.minor_sum.clone() };
        out.push(claim(
            "localopt.minor_sum",
            "order-two minor sum in the determinant expansion",
            Relation::Eq,
            exact_str(&minor),
            k.minor_published.to_string(),
            minor == int(k.minor_published) && two.exact,
        ));
        out.push(claim(
            "localopt.determinant_constant",
            "quadratic constant c in det(S + ρT) ≥ 1 - cρ²",
            Relation::Le,
            sci(&drho.c, 12),
            k.c_published,
            drho.c <= dec(k.c_published),
        ));
        let table = self.table.as_ref().expect("scheme stage ran");
        let chain = alpha_chain(&self.lattice, table, &self.witnesses, &self.m())?;
        let entry = chain
            .entries
            .iter()
            .find(|e| e.alpha == chain.alpha && !e.weights.is_empty())
            .ok_or_else(|| Error::CertificationFailed("the minimum α has no recorded derivation".into()))?;
        let total: Rat = entry.weights.iter().sum();
        let alpha_published = rat(k.alpha.0, k.alpha.1);
        out.push(claim(
            "localopt.alpha",
            "perturbation descent constant α",
            Relation::Eq,
            exact_str(&chain.alpha),
            exact_str(&alpha_published),
            chain.alpha == alpha_published,
        ));
        out.push(claim(
            "localopt.alpha_weights",
            "denominator of the α derivation",
            Relation::Eq,
            format!("{}/{}", exact_str(&entry.numerator), exact_str(&total)),
            format!("{}/{}", k.alpha.0 * k.alpha_denominator / k.alpha.1, k.alpha_denominator),
            total == int(k.alpha_denominator) && &entry.numerator / &total == chain.alpha,
        ));
        if target == Target::E8 || self.cfg.allow_heavy {
            let exact = alpha_exact_lp_min(&mv, &adj.adj, self.cfg.allow_heavy)?;
            out.push(claim(
                "localopt.alpha_exact_lp",
                "best α from the exact linear programs",
                Relation::Ge,
                exact_str(&exact.alpha),
                format!(">= {}", exact_str(&alpha_published)),
                exact.alpha >= alpha_published,
            ));
        }
        let closure = local_optimality_certificate(n, &self.m(), &chain.alpha, &drho.c, &rho);
        out.push(claim(
            "localopt.closure",
            "perturbed determinant exceeds the packing ratio on (0, ρ_max]",
            Relation::Eq,
            match &closure {
                Ok(_) => format!("holds up to ρ = {}", k.rho_max),
                Err(e) => e.to_string(),
            },
            format!("holds up to ρ = {}", k.rho_max),
            closure.is_ok(),
        ));
        let dev = self.eps() * int(k.dev_factor);
        let max_gram = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| gram[(i, j)].abs()).max().expect("n ≥ 1");
        let fb = final_inequality(&dev, &adj.abs_sum, &max_gram, n)?;
        let cap = dec(k.final_cap);
        out.push(claim(
            "localopt.final_bound",
            "perturbation size of the nearby lattice",
            Relation::Le,
            sci(&fb, 6),
            format!("< {}", k.final_cap),
            fb < cap && fb <= rho,
        ));
        let cert = localopt_certificate(
            target.name(),
            n,
            &self.m(),
            &chain.alpha,
            &entry.numerator,
            &entry.weights,
            &drho.c,
            &rho,
            &dev,
            &adj.abs_sum,
            &max_gram,
            &cap,
        )?;
        self.certificate = Some(cert);
        Ok(())
    }

    fn magicfn(&mut self, out: &mut Vec<Claim>) -> Result<()> {
        let k = self.k;
        if let Some(f) = self.inputs.f.clone() {
            let r = match &self.inputs.roots {
                Some(roots) => {
                    let r_sq = roots.iter().min().expect("nonempty");
                    crate::arith::consts::sqrt_enclosure(r_sq, 160).hi().clone()
                }
                None => first_root_radius(&f)?,
            };
            let p = certify_packing_bound(&f, &RatInterval::point(r))?;
            let ratio = p.ratio.as_ref().map_or("unknown".into(), |x| sci(x.hi(), 12));
            let published = match self.cfg.target {
                Target::Leech => "1 + 1.65e-30",
                Target::E8 => "1",
            };
            out.push(claim(
                "magicfn.external",
                "supplied auxiliary function, density ratio",
                Relation::Le,
                ratio,
                published,
                p.checks.iter().all(|c| c.pass),
            ));
            return Ok(());
        }
        let roots: &[usize] = if self.cfg.allow_heavy { &[5, 6] } else { &[5] };
        let mut last: Option<f64> = None;
        for &kk in roots {
            let res = newton_construct(&default_spec(k.min_norm as u32, kk, kk), k.n, 200, 256)?;
            let ratio = res.ratio_to_min_distance().unwrap_or(f64::INFINITY);
            out.push(claim(
                &format!("magicfn.newton_{kk}"),
                "polynomial auxiliary function, radius over minimal distance",
                Relation::Le,
                format!("{ratio:.6}"),
                "< 1.01",
                ratio < 1.01 && last.is_none_or(|prev| ratio <= prev),
            ));
            last = Some(ratio);
        }
        Ok(())
    }
}

/// Runs the configured stages in dependency order. Every stage runs even
/// after an earlier one fails, unless it depends on a failed stage.
pub fn run_pipeline(cfg: &PipelineConfig) -> Report {
    let target = cfg.target;
    let stages = resolve_stages(&cfg.stages);
    let inputs = match load_inputs(cfg) {
        Ok(i) => i,
        Err(e) => return Report { target, stages: Vec::new(), input_error: Some(e.to_string()), certificate: None },
    };
    let lattice = match target {
        Target::Leech => leech_lattice(),
        Target::E8 => e8_lattice(),
    };
    let witnesses = match target {
        Target::Leech => leech_witness_vectors(&lattice),
        Target::E8 => e8_witness_vectors(&lattice),
    };
    let mut ctx = Ctx {
        cfg,
        k: target.constants(),
        inputs,
        lattice,
        witnesses,
        minvecs: None,
        table: None,
        certificate: None,
    };
    let mut reports: Vec<StageReport> = Vec::new();
    for stage in stages {
        let mut claims = Vec::new();
        let blocked = stage
            .dependencies()
            .iter()
            .find(|d| reports.iter().any(|r| r.stage == **d && r.failure.is_some()));
        let result = match blocked {
            Some(d) => Err(Error::PreconditionViolation(format!("stage {d} did not complete"))),
            None => match stage {
                Stage::Kissing => ctx.kissing(&mut claims),
                Stage::Counting => ctx.counting(&mut claims),
                Stage::Scheme => ctx.scheme(&mut claims),
                Stage::Sigma => ctx.sigma(&mut claims),
                Stage::Basis => ctx.basis(&mut claims),
                Stage::Localopt => ctx.localopt(&mut claims),
                Stage::Magicfn => ctx.magicfn(&mut claims),
            },
        };
        let failure = result.err().map(|e| StageFailure { kind: FailureKind::of(&e), message: e.to_string() });
        reports.push(StageReport { stage, claims, failure });
    }
    Report { target, stages: reports, input_error: None, certificate: ctx.certificate }
}
