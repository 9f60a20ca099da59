//! Argument parsing and dispatch.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cobarkit_core::appendix::verify_appendix;
use cobarkit_core::chains::{chain_homology, dg_homology, normalized_chains};
use cobarkit_core::coalgebra::{chains_coalgebra, CoalgebraMap, SimplicialCoalgebra};
use cobarkit_core::cobar::{
    bar, cobar, cobar_homology, fundamental_bialgebra, h0_presentation, lambda, localized_cobar, monoidlike_reps, AlgebraPresentation,
    FiniteDgAlgebra, FreeDgAlgebra, PolyTensor, TruncationSpec,
};
use cobarkit_core::equivalence::{
    check_omega_qi, check_omegahat_qi, check_pi1_r_equivalence, check_qi_coalgebra, check_r_equivalence, verify_phi_psi, Budgets,
};
use cobarkit_core::homology::{BettiEntry, BettiTable};
use cobarkit_core::simplicial::colimit::{simplicial_localization, MarkedSSet};
use cobarkit_core::simplicial::presentation::{pi1_presentation, GroupPresentation};
use cobarkit_core::simplicial::{SSet, SSetMap};
use cobarkit_core::verdict::{Status, Verdict};
use cobarkit_core::Field;

use crate::fixture::{field_name, parse_document, parse_field, parse_fixture, Fixture};
use crate::report::{Record, Report};

#[derive(Parser, Debug, Clone)]
#[command(name = "cobarkit", version, about = "Exact cobar, chains and localization computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Structured)]
    pub format: Format,
    /// Append wall-clock timing records.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Structured,
}

fn field_arg(s: &str) -> Result<Field, String> {
    parse_field(s).ok_or_else(|| format!("expected `q` or `fp:<prime>`, found `{s}`"))
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Builtin name, `builtin: NAME level=N`, or a fixture file.
    #[arg(long)]
    pub fixture: Option<String>,
    /// Builtin map name or a fixture file declaring a map.
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long, value_parser = field_arg, default_value = "q")]
    pub field: Field,
    #[arg(long, default_value_t = 4)]
    pub max_degree: usize,
    /// Word-length bound; defaults to 4 when degree-0 generators are present.
    #[arg(long)]
    pub max_length: Option<usize>,
    /// Length budget for ideal membership.
    #[arg(long, default_value_t = 6)]
    pub budget: usize,
    /// Simplicial level; each command documents its default.
    #[arg(long)]
    pub level: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notion {
    #[value(name = "r-eq")]
    REq,
    Omega,
    #[value(name = "omega-hat")]
    OmegaHat,
    #[value(name = "pi1-r")]
    Pi1R,
    Qi,
}

impl Notion {
    fn name(self) -> &'static str {
        match self {
            Notion::REq => "r-eq",
            Notion::Omega => "omega",
            Notion::OmegaHat => "omega-hat",
            Notion::Pi1R => "pi1-r",
            Notion::Qi => "qi",
        }
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Betti numbers of normalized chains.
    ChainHomology(Common),
    /// Betti numbers of the cobar construction.
    CobarHomology(Common),
    /// Presentation of H₀ of the cobar construction with its coproduct.
    FundamentalBialgebra(Common),
    /// Simplicial localization at every edge.
    Localize(Common),
    /// Localized cobar construction: homology and H₀.
    LocalizedCobar(Common),
    /// One of the weak-equivalence notions on a map.
    Check {
        #[arg(long, value_enum)]
        notion: Notion,
        #[command(flatten)]
        common: Common,
    },
    /// φ and ψ are mutually inverse bialgebra maps.
    VerifyPhiPsi(Common),
    /// The four cylinder and cobar homotopy identities.
    VerifyAppendix(Common),
    /// Homology of cobar(bar(A)) against H(A).
    BarCobarCheck {
        #[arg(long, default_value = "exterior")]
        algebra: String,
        #[command(flatten)]
        common: Common,
    },
    /// Runs the validators of a fixture or map.
    Validate(Common),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ChainHomology(_) => "chain-homology",
            Command::CobarHomology(_) => "cobar-homology",
            Command::FundamentalBialgebra(_) => "fundamental-bialgebra",
            Command::Localize(_) => "localize",
            Command::LocalizedCobar(_) => "localized-cobar",
            Command::Check { .. } => "check",
            Command::VerifyPhiPsi(_) => "verify-phi-psi",
            Command::VerifyAppendix(_) => "verify-appendix",
            Command::BarCobarCheck { .. } => "bar-cobar-check",
            Command::Validate(_) => "validate",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::ChainHomology(c)
            | Command::CobarHomology(c)
            | Command::FundamentalBialgebra(c)
            | Command::Localize(c)
            | Command::LocalizedCobar(c)
            | Command::VerifyPhiPsi(c)
            | Command::VerifyAppendix(c)
            | Command::Validate(c) => c,
            Command::Check { common, .. } | Command::BarCobarCheck { common, .. } => common,
        }
    }
}

fn echo(cmd: &Command) -> BTreeMap<String, String> {
    let c = cmd.common();
    let mut m = BTreeMap::new();
    m.insert("field".into(), field_name(c.field));
    m.insert("max-degree".into(), c.max_degree.to_string());
    m.insert("budget".into(), c.budget.to_string());
    let opt = [
        ("fixture", c.fixture.clone()),
        ("map", c.map.clone()),
        ("max-length", c.max_length.map(|v| v.to_string())),
        ("level", c.level.map(|v| v.to_string())),
    ];
    for (k, v) in opt {
        if let Some(v) = v {
            m.insert(k.into(), v);
        }
    }
    match cmd {
        Command::Check { notion, .. } => {
            m.insert("notion".into(), notion.name().into());
        }
        Command::BarCobarCheck { algebra, .. } => {
            m.insert("algebra".into(), algebra.clone());
        }
        _ => {}
    }
    m
}

type Failure = String;

fn fail<E: std::fmt::Display>(e: E) -> Failure {
    e.to_string()
}

/// Reads `spec` as a file when one exists, otherwise as a builtin line.
fn load(spec: &str, map: bool, defaults: (Field, usize)) -> Result<Fixture, Failure> {
    let text = if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?;
        return parse_fixture(&text, defaults).map_err(|e| format!("{spec}: {e}"));
    } else if spec.starts_with("builtin") {
        spec.to_string()
    } else if map {
        format!("builtin-map: {spec}")
    } else {
        format!("builtin: {spec}")
    };
    parse_fixture(&text, defaults).map_err(fail)
}

fn fixture(c: &Common, level: usize) -> Result<Fixture, Failure> {
    let spec = c.fixture.as_deref().ok_or("--fixture is required")?;
    load(spec, false, (c.field, level))
}

fn sset(c: &Common, level: usize) -> Result<SSet, Failure> {
    match fixture(c, level)? {
        Fixture::SSet(x) => Ok(x),
        other => Err(format!("this command needs a simplicial set, the fixture is a {}", other.kind())),
    }
}

fn map(c: &Common, level: usize) -> Result<SSetMap, Failure> {
    let spec = c.map.as_deref().ok_or("--map is required")?;
    match load(spec, true, (c.field, level))? {
        Fixture::Map(f) => Ok(f),
        other => Err(format!("--map needs a map, the fixture is a {}", other.kind())),
    }
}

/// Simplicial set or coalgebra; a simplicial set `X` becomes `F[X]`.
fn coalgebra(c: &Common, level: usize) -> Result<SimplicialCoalgebra, Failure> {
    match fixture(c, level)? {
        Fixture::SSet(x) => chains_coalgebra(&x, c.field, level).map_err(fail),
        Fixture::Coalgebra(k) => {
            if level <= k.truncation() {
                k.at_level(level).map_err(fail)
            } else {
                Ok(k)
            }
        }
        Fixture::Map(_) => Err("this command needs a simplicial set or a coalgebra, the fixture is a map".into()),
    }
}

fn spec_for(a: &FreeDgAlgebra, c: &Common) -> TruncationSpec {
    match c.max_length {
        Some(l) => TruncationSpec::bounded(c.max_degree, l),
        None if !a.degree0_generators().is_empty() => TruncationSpec::bounded(c.max_degree, 4),
        None => TruncationSpec::degree(c.max_degree),
    }
}

fn map_spec(f: &SSetMap, c: &Common) -> TruncationSpec {
    let edges = f.source.count(1) + f.target.count(1) > 0;
    match c.max_length {
        Some(l) => TruncationSpec::bounded(c.max_degree, l),
        None if edges => TruncationSpec::bounded(c.max_degree, 4),
        None => TruncationSpec::degree(c.max_degree),
    }
}

fn budgets(c: &Common) -> Budgets {
    Budgets { ideal: c.budget, ..Budgets::default() }
}

fn budget_record(b: Budgets, t: Option<TruncationSpec>) -> Record {
    let mut entries = BTreeMap::new();
    entries.insert("ideal".into(), b.ideal);
    entries.insert("cosets".into(), b.cosets);
    entries.insert("inverse_candidates".into(), b.inverse_candidates);
    if let Some(t) = t {
        entries.insert("max_degree".into(), t.max_degree);
        if let Some(l) = t.max_length {
            entries.insert("max_length".into(), l);
        }
    }
    Record::Budgets { entries }
}

fn render_word(w: &[u32], names: &[String]) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.iter().map(|g| names[*g as usize].as_str()).collect::<Vec<_>>().join("·")
    }
}

fn render_tensor(t: &PolyTensor, names: &[String]) -> String {
    if t.is_empty() {
        return "0".into();
    }
    t.iter().map(|((a, b), c)| format!("{c}·{}⊗{}", render_word(a, names), render_word(b, names))).collect::<Vec<_>>().join(" + ")
}

fn algebra_record(label: &str, p: &AlgebraPresentation) -> Record {
    let mut relations: Vec<String> = p.ideal_generators.iter().map(|r| format!("{} = 0", r.render(&p.generators))).collect();
    if let Some(cp) = &p.coproduct {
        for (g, t) in cp.iter().enumerate() {
            relations.push(format!("∇{} = {}", p.generators[g], render_tensor(t, &p.generators)));
        }
    }
    Record::Presentation {
        label: label.into(),
        kind: "algebra".into(),
        generators: p.generators.clone(),
        relations,
        oracle: p.oracle.as_ref().map(|o| o.tag().to_string()),
    }
}

fn group_record(label: &str, g: &GroupPresentation) -> Record {
    Record::Presentation {
        label: label.into(),
        kind: "group".into(),
        generators: g.generators.clone(),
        relations: g.relators.iter().map(|r| format!("{} = 1", g.render(r))).collect(),
        oracle: None,
    }
}

fn chain_homology_cmd(c: &Common, r: &mut Report) -> Result<(), Failure> {
    let md = c.max_degree;
    let level = c.level.unwrap_or(md + 1);
    let table = match fixture(c, level)? {
        Fixture::SSet(x) => chain_homology(&x, c.field, md).map_err(fail)?,
        Fixture::Coalgebra(k) => {
            let k = if level <= k.truncation() { k.at_level(level).map_err(fail)? } else { k };
            dg_homology(&normalized_chains(&k).map_err(fail)?, md).map_err(fail)?
        }
        Fixture::Map(_) => return Err("chain-homology needs a simplicial set or a coalgebra".into()),
    };
    r.push(Record::Betti { label: "chain-homology".into(), table });
    Ok(())
}

fn cobar_homology_cmd(c: &Common, r: &mut Report) -> Result<(), Failure> {
    let level = c.level.unwrap_or(c.max_degree + 2);
    let a = match fixture(c, level)? {
        Fixture::SSet(x) => lambda(&x, c.field, level).map_err(fail)?,
        Fixture::Coalgebra(_) => cobar(&normalized_chains(&coalgebra(c, level)?).map_err(fail)?).map_err(fail)?,
        Fixture::Map(_) => return Err("cobar-homology needs a simplicial set or a coalgebra".into()),
    };
    let t = spec_for(&a, c);
    r.push(budget_record(budgets(c), Some(t)));
    let table = cobar_homology(&a, t).map_err(fail)?.truncated(c.max_degree);
    r.push(Record::Betti { label: "cobar-homology".into(), table });
    Ok(())
}

fn fundamental_bialgebra_cmd(c: &Common, r: &mut Report) -> Result<(), Failure> {
    let k = coalgebra(c, c.level.unwrap_or(2).max(2))?;
    let p = fundamental_bialgebra(&k).map_err(fail)?;
    r.push(algebra_record("fundamental-bialgebra", &p));
    Ok(())
}

fn localize_cmd(c: &Common, r: &mut Report) -> Result<(), Failure> {
    let level = c.level.unwrap_or(c.max_degree);
    let x = sset(c, level)?;
    let loc = simplicial_localization(&MarkedSSet::sharp(&x), level).map_err(fail)?;
    r.push(Record::Counts { label: "source".into(), counts: x.at_level(level).map_err(fail)?.counts() });
    r.push(Record::Counts { label: "localization".into(), counts: loc.object.counts() });
    r.verdict(
        "validate",
        match loc.object.validate() {
            Ok(()) => Verdict::with(Status::Verified, "simplicial identities hold through the level"),
            Err(e) => Verdict::with(Status::Refuted, e.to_string()),
        },
    );
    let mut images = std::collections::BTreeSet::new();
    let mut injective = true;
    for (d, row) in loc.unit.images.iter().enumerate() {
        for s in row {
            injective &= !s.is_degenerate() && s.base.dim == d && images.insert(s.base);
        }
    }
    r.verdict(
        "unit-monomorphism",
        if injective {
            Verdict::with(Status::Verified, "the unit is injective on nondegenerate simplices")
        } else {
            Verdict::with(Status::Refuted, "the unit identifies or degenerates a nondegenerate simplex")
        },
    );
    let pi = pi1_presentation(&loc.object).map_err(fail)?;
    r.push(group_record("pi1(localization)", &pi.simplified));
    Ok(())
}

fn localized_cobar_cmd(c: &Common, r: &mut Report) -> Result<(), Failure> {
    let level = c.level.unwrap_or(c.max_degree + 2);
    let k = coalgebra(c, level)?;
    let reps = monoidlike_reps(&k, None).map_err(fail)?;
    r.push(Record::Counts { label: "monoid-like representatives".into(), counts: vec![reps.len()] });
    let a = localized_cobar(&k, &reps, level).map_err(fail)?;
    let t = spec_for(&a, c);
    r.push(budget_record(budgets(c), Some(t)));
    let table = cobar_homology(&a, t).map_err(fail)?.truncated(c.max_degree);
    r.push(Record::Betti { label: "localized-cobar-homology".into(), table });
    r.push(algebra_record("H0(localized cobar)", &h0_presentation(&a).map_err(fail)?));
    Ok(())
}

fn check_cmd(notion: Notion, c: &Common, r: &mut Report) -> Result<(), Failure> {
    let md = c.max_degree;
    let level = c.level.unwrap_or(md);
    let f = map(c, level + 3)?;
    let b = budgets(c);
    let t = map_spec(&f, c);
    match notion {
        Notion::REq => {
            r.push(budget_record(b, None));
            r.verdict("r-equivalence", check_r_equivalence(&f, c.field, level).map_err(fail)?);
        }
        Notion::Qi => {
            r.push(budget_record(b, None));
            let g = CoalgebraMap::from_sset_map(&f, c.field, level + 1).map_err(fail)?;
            r.verdict("quasi-isomorphism", check_qi_coalgebra(&g, level).map_err(fail)?);
        }
        Notion::Omega => {
            r.push(budget_record(b, Some(t)));
            r.verdict("omega-quasi-isomorphism", check_omega_qi(&f, c.field, t, b).map_err(fail)?);
        }
        Notion::OmegaHat => {
            r.push(budget_record(b, Some(t)));
            r.verdict("omega-hat-quasi-isomorphism", check_omegahat_qi(&f, c.field, t, b).map_err(fail)?);
        }
        Notion::Pi1R => {
            r.push(budget_record(b, Some(t)));
            let v = check_pi1_r_equivalence(&f, c.field, level, t, b).map_err(fail)?;
            r.push(Record::Route { check: "presentation-route".into(), verdict: v.presentation_route });
            r.push(Record::Route { check: "algebraic-route".into(), verdict: v.algebraic_route });
            r.verdict("pi1-r-equivalence", v.verdict);
        }
    }
    Ok(())
}

fn verify_phi_psi_cmd(c: &Common, r: &mut Report) -> Result<(), Failure> {
    let x = sset(c, c.level.unwrap_or(2).max(2))?;
    r.push(budget_record(budgets(c), None));
    r.verdict("phi-psi", verify_phi_psi(&x, c.field, c.budget).map_err(fail)?);
    Ok(())
}

fn verify_appendix_cmd(c: &Common, r: &mut Report) -> Result<(), Failure> {
    let level = c.level.unwrap_or(3);
    let t = TruncationSpec::bounded(c.max_degree, c.max_length.unwrap_or(4));
    let k = coalgebra(c, (level + 1).max(t.max_degree + 3))?;
    r.push(budget_record(budgets(c), Some(t)));
    for rep in verify_appendix(&k, level, t).map_err(fail)? {
        r.push(Record::Identity { fixture: k.name.clone(), field: k.field.label(), report: rep });
    }
    Ok(())
}

fn bar_cobar_cmd(algebra: &str, c: &Common, r: &mut Report) -> Result<(), Failure> {
    let a = match algebra {
        "exterior" => FiniteDgAlgebra::exterior(c.field),
        other => return Err(format!("unknown algebra `{other}`, the builtin is `exterior`")),
    };
    let md = c.max_degree;
    let b = bar(&a, md + 2).map_err(fail)?;
    let table = cobar_homology(&cobar(&b).map_err(fail)?, TruncationSpec::degree(md)).map_err(fail)?.truncated(md);
    let expected = algebra_homology(&a, md);
    let mut v = Verdict::new(Status::Verified);
    v.note(format!("H(A) = {:?}, H(Ω B A) = {:?}", expected.numbers(), table.numbers()));
    for e in &table.entries {
        let want = expected.get(e.degree).map(|x| x.betti).unwrap_or(0);
        if e.exact && e.betti != want {
            v.status = Status::Refuted;
            v.note(format!("degree {} differs", e.degree));
        }
    }
    if !table.all_exact() && v.status == Status::Verified {
        v.status = Status::Inconclusive;
        v.note("some degrees of the window are not exact");
    }
    r.push(Record::Betti { label: "algebra-homology".into(), table: expected });
    r.push(Record::Betti { label: "bar-cobar-homology".into(), table });
    r.verdict("counit-betti", v);
    Ok(())
}

/// Homology of a finite dg algebra, zero above its stored degrees.
fn algebra_homology(a: &FiniteDgAlgebra, md: usize) -> BettiTable {
    let dim = |n: usize| a.labels.get(n).map(Vec::len).unwrap_or(0);
    let rank = |n: usize| a.differential.get(n).map(|m| m.rank()).unwrap_or(0);
    let entries = (0..=md).map(|n| BettiEntry { degree: n, betti: dim(n) - rank(n) - rank(n + 1), exact: true }).collect();
    BettiTable { field: a.field, entries }
}

fn validate_cmd(c: &Common, r: &mut Report) -> Result<(), Failure> {
    let level = c.level.unwrap_or(c.max_degree);
    for (flag, spec, is_map) in [("fixture", &c.fixture, false), ("map", &c.map, true)] {
        let Some(spec) = spec else { continue };
        let obj = if Path::new(spec).is_file() {
            let text = std::fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?;
            let doc = parse_document(&text, (c.field, level)).map_err(|e| format!("parse error at {e}"))?;
            doc.primary().cloned().expect("non-empty document")
        } else {
            load(spec, is_map, (c.field, level))?
        };
        if let Fixture::SSet(x) = &obj {
            r.push(Record::Counts { label: format!("{flag} nondegenerate simplices"), counts: x.counts() });
        }
        let mut v = match obj.validate() {
            Ok(()) => Verdict::with(Status::Verified, format!("{} {} passes its validator", obj.kind(), obj.name())),
            Err(e) => Verdict::with(Status::Refuted, format!("{} {}: {e}", obj.kind(), obj.name())),
        };
        if let Fixture::SSet(x) = &obj {
            if x.count(0) != 1 {
                v.status = Status::Refuted;
                v.note(format!("{} has {} vertices and is not reduced", x.name, x.count(0)));
            }
        }
        r.verdict(format!("validate-{flag}"), v);
    }
    if c.fixture.is_none() && c.map.is_none() {
        return Err("validate needs --fixture or --map".into());
    }
    Ok(())
}

/// Runs one command; failures become error records.
pub fn run(cmd: &Command) -> Report {
    let mut r = Report::new(cmd.name());
    r.args = echo(cmd);
    let start = Instant::now();
    let out = match cmd {
        Command::ChainHomology(c) => chain_homology_cmd(c, &mut r),
        Command::CobarHomology(c) => cobar_homology_cmd(c, &mut r),
        Command::FundamentalBialgebra(c) => fundamental_bialgebra_cmd(c, &mut r),
        Command::Localize(c) => localize_cmd(c, &mut r),
        Command::LocalizedCobar(c) => localized_cobar_cmd(c, &mut r),
        Command::Check { notion, common } => check_cmd(*notion, common, &mut r),
        Command::VerifyPhiPsi(c) => verify_phi_psi_cmd(c, &mut r),
        Command::VerifyAppendix(c) => verify_appendix_cmd(c, &mut r),
        Command::BarCobarCheck { algebra, common } => bar_cobar_cmd(algebra, common, &mut r),
        Command::Validate(c) => validate_cmd(c, &mut r),
    };
    if let Err(e) = out {
        r.error(e);
    }
    r.timing.push(("total".into(), start.elapsed().as_secs_f64() * 1000.0));
    r
}

/// Parses `args` (without the program name) and runs the command.
pub fn run_args<I, S>(args: I) -> Result<(Report, Cli), clap::Error>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(std::iter::once("cobarkit".into()).chain(args.into_iter().map(Into::into)))?;
    Ok((run(&cli.command), cli))
}

/// Renders the report in the format selected on the command line.
pub fn render(r: &Report, cli: &Cli) -> String {
    match cli.format {
        Format::Structured => crate::report::structured(r, cli.timing),
        Format::Human => crate::report::human(r, cli.timing),
    }
}
