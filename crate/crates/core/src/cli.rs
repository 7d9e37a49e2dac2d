//! Command-line front end: builders, validation, homology and spin
//! reports, condition checks, and the partition-function comparison
//! pipeline. Every number in a report is reproducible through the library;
//! exit code 0 means pass, 1 a failed mathematical check, 2 an input or
//! usage error.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::builders;
use crate::cochain::{self, UnitCochain};
use crate::dbar;
use crate::dimer;
use crate::dirac;
use crate::error::{Error, Result};
use crate::homology;
use crate::io::{self, NamedSurface};
use crate::spin;
use crate::surface::{Nu, RhombicSurface, TAU};

#[derive(Parser)]
#[command(name = "isodirac", version, about = "discrete Dirac operators and Kasteleyn matrices on flat surfaces")]
struct Cli {
    /// Emit a machine-readable JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for randomized property commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum NuArg {
    Dual,
    Unit,
}

impl From<NuArg> for Nu {
    fn from(v: NuArg) -> Nu {
        match v {
            NuArg::Dual => Nu::Dual,
            NuArg::Unit => Nu::Unit,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Construct an example surface and write it as JSON.
    Build(BuildArgs),
    /// Validate a surface file and print its shape.
    Validate { surface: PathBuf },
    /// Genus, basis cycle lengths, and the mod-2 intersection matrix.
    Homology { surface: PathBuf },
    /// The 2^{2g} ±1 flat cochain classes as edge-sign maps.
    Kasteleyn { surface: PathBuf },
    /// The 2^{2g} discrete spin structures with q values and Arf invariants.
    Spins { surface: PathBuf },
    /// Kasteleyn conditions (i) and (ii) with residues; exit 1 on failure.
    Check { surface: PathBuf },
    /// Per-sector Dirac determinants with Arf invariants.
    Dets {
        surface: PathBuf,
        #[arg(long, value_enum, default_value_t = NuArg::Dual)]
        nu: NuArg,
    },
    /// Apply the discrete ∂̄ operator to a black-vertex function.
    Dbar { surface: PathBuf, function: PathBuf },
    /// Brute-force vs determinant partition functions, with a seeded Pf-K
    /// character check.
    Zcompare {
        surface: PathBuf,
        #[arg(long, value_enum, default_value_t = NuArg::Dual)]
        nu: NuArg,
    },
}

#[derive(Args)]
struct BuildArgs {
    #[command(subcommand)]
    kind: BuildKind,
}

#[derive(Subcommand)]
enum BuildKind {
    /// rows × cols hexagons on a flat torus.
    Honeycomb {
        rows: usize,
        cols: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// m rows of n rhombi on a torus, with optional shift and per-row shear.
    Rtorus {
        m: usize,
        n: usize,
        #[arg(long, default_value_t = 0)]
        shift: usize,
        /// comma-separated shear angles, one per row
        #[arg(long, value_delimiter = ',')]
        shear: Vec<f64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Square lattice on the genus-2 staircase octagon.
    Genus2 {
        #[arg(default_value_t = 1)]
        n: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Isoradial realization of an abstract bipartite graph (surface JSON
    /// with the alpha fields ignored).
    Realize {
        graph: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

/// Round to 12 significant decimal digits, the report precision.
fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let scale = 10f64.powf(11.0 - x.abs().log10().floor());
    (x * scale).round() / scale
}

fn load(path: &PathBuf) -> Result<NamedSurface> {
    let text = std::fs::read_to_string(path)?;
    io::from_json(&text)
}

fn emit(json_mode: bool, report: &Value, human: &str) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(report).expect("report serialization"));
    } else {
        println!("{human}");
    }
}

pub fn run(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 }
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ConditionsViolated(_) | Error::CurvatureIdentityFailed { .. } => 1,
                _ => 2,
            }
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Build(args) => build(cli, args),
        Command::Validate { surface } => validate(cli, surface),
        Command::Homology { surface } => homology_cmd(cli, surface),
        Command::Kasteleyn { surface } => kasteleyn_cmd(cli, surface),
        Command::Spins { surface } => spins_cmd(cli, surface),
        Command::Check { surface } => check_cmd(cli, surface),
        Command::Dets { surface, nu } => dets_cmd(cli, surface, (*nu).into()),
        Command::Dbar { surface, function } => dbar_cmd(cli, surface, function),
        Command::Zcompare { surface, nu } => zcompare_cmd(cli, surface, (*nu).into()),
    }
}

fn write_surface(s: RhombicSurface, path: &PathBuf) -> Result<()> {
    let named = NamedSurface::with_default_names(s);
    std::fs::write(path, io::to_json(&named))?;
    Ok(())
}

fn build(cli: &Cli, args: &BuildArgs) -> Result<i32> {
    let (s, out) = match &args.kind {
        BuildKind::Honeycomb { rows, cols, output } => {
            (builders::honeycomb_torus(*rows, *cols)?, output)
        }
        BuildKind::Rtorus { m, n, shift, shear, output } => {
            (builders::rhombi_torus(*m, *n, *shift, shear)?, output)
        }
        BuildKind::Genus2 { n, output } => (builders::genus2_octagon(*n)?, output),
        BuildKind::Realize { graph, output } => {
            let named = load(graph)?;
            let s = &named.surface;
            let colors = s.vertices().map(|v| s.color(v)).collect();
            let edges = s.edges().map(|e| (s.white_end(e), s.black_end(e))).collect();
            let rotations = s.vertices().map(|v| s.rotation(v).to_vec()).collect();
            (builders::realize_bipartite(colors, edges, rotations, s.delta())?, output)
        }
    };
    let report = json!({
        "vertices": s.vertex_count(),
        "edges": s.edge_count(),
        "faces": s.face_count(),
        "genus": s.genus(),
        "output": out.display().to_string(),
    });
    let human = format!(
        "built surface: V={} E={} F={} g={} -> {}",
        s.vertex_count(),
        s.edge_count(),
        s.face_count(),
        s.genus(),
        out.display()
    );
    write_surface(s, out)?;
    emit(cli.json, &report, &human);
    Ok(0)
}

fn validate(cli: &Cli, path: &PathBuf) -> Result<i32> {
    let named = load(path)?;
    let s = &named.surface;
    let singular: Vec<Value> = s
        .singular_set()
        .iter()
        .map(|(p, theta)| json!({ "at": p.to_string(), "theta": sig12(*theta) }))
        .collect();
    let report = json!({
        "valid": true,
        "vertices": s.vertex_count(),
        "edges": s.edge_count(),
        "faces": s.face_count(),
        "genus": s.genus(),
        "delta": sig12(s.delta()),
        "singularities": singular,
    });
    let human = format!(
        "valid surface: V={} E={} F={} g={}, {} singular cone point(s)",
        s.vertex_count(),
        s.edge_count(),
        s.face_count(),
        s.genus(),
        s.singular_set().len(),
    );
    emit(cli.json, &report, &human);
    Ok(0)
}

fn homology_cmd(cli: &Cli, path: &PathBuf) -> Result<i32> {
    let named = load(path)?;
    let s = &named.surface;
    let basis = homology::cycle_basis(s)?;
    let lengths: Vec<usize> = basis.cycles.iter().map(|c| c.len()).collect();
    let q: Vec<Vec<u8>> =
        basis.q.iter().map(|row| row.iter().map(|&b| u8::from(b)).collect()).collect();
    let report = json!({
        "genus": s.genus(),
        "cycle_lengths": lengths,
        "intersection_matrix": q,
    });
    let human = format!("g = {}\ncycle lengths: {:?}\nQ = {:?}", s.genus(), lengths, q);
    emit(cli.json, &report, &human);
    Ok(0)
}

fn kasteleyn_cmd(cli: &Cli, path: &PathBuf) -> Result<i32> {
    let named = load(path)?;
    let s = &named.surface;
    let basis = homology::cycle_basis(s)?;
    let classes = cochain::flat_classes(s, &basis)?;
    let maps: Vec<Value> = classes
        .iter()
        .map(|c: &UnitCochain| {
            let signs: BTreeMap<String, i8> = s
                .edges()
                .map(|e| {
                    (named.edge_name(e).to_string(), if c.value(e).re > 0.0 { 1 } else { -1 })
                })
                .collect();
            json!(signs)
        })
        .collect();
    let report = json!({ "count": classes.len(), "classes": maps });
    if cli.json {
        emit(true, &report, "");
    } else {
        println!("{} Kasteleyn orientation classes (2^(2g), g = {})", classes.len(), s.genus());
        println!("{}", serde_json::to_string(&report["classes"]).expect("class serialization"));
    }
    Ok(0)
}

fn spins_cmd(cli: &Cli, path: &PathBuf) -> Result<i32> {
    let named = load(path)?;
    let s = &named.surface;
    let basis = homology::cycle_basis(s)?;
    let kappa = spin::canonical_cochain(s)?;
    let base = spin::spin_base(s, &kappa)?;
    let family = spin::spin_family(&basis, &base);
    let mut rows = Vec::new();
    for (mask, lambda) in family.iter().enumerate() {
        let on_cycles: Vec<Value> = basis
            .cycles
            .iter()
            .map(|c| {
                let v = lambda.eval_walk(c);
                json!([sig12(v.re), sig12(v.im)])
            })
            .collect();
        let q = spin::quadratic_form(s, lambda, &basis).ok();
        let arf = q.as_ref().and_then(|q| spin::arf(q).ok());
        rows.push(json!({
            "epsilon": mask,
            "on_basis_cycles": on_cycles,
            "q": q.map(|q| q.values.iter().map(|&b| u8::from(b)).collect::<Vec<u8>>()),
            "arf": arf.map(u8::from),
        }));
    }
    let report = json!({ "count": family.len(), "structures": rows });
    let human = {
        let mut lines = vec![format!("{} discrete spin structures", family.len())];
        for row in &rows {
            lines.push(format!("  ε={} q={} arf={}", row["epsilon"], row["q"], row["arf"]));
        }
        lines.join("\n")
    };
    emit(cli.json, &report, &human);
    Ok(0)
}

fn check_cmd(cli: &Cli, path: &PathBuf) -> Result<i32> {
    let named = load(path)?;
    let s = &named.surface;
    let basis = homology::cycle_basis(s)?;
    let cond_i = dirac::condition_i(s);
    let residues = dirac::condition_ii_residues(s, &basis)?;
    let cond_ii = residues.iter().all(|r| r.abs() < crate::surface::ANGLE_TOL);
    let report = json!({
        "condition_i": cond_i,
        "condition_ii": cond_ii,
        "residues": residues.iter().map(|&r| sig12(r)).collect::<Vec<f64>>(),
        "kasteleyn": cond_i && cond_ii,
    });
    let human = format!(
        "condition (i): {}\ncondition (ii): {} (residues {:?})\nDirac operators are Kasteleyn matrices: {}",
        if cond_i { "pass" } else { "fail" },
        if cond_ii { "pass" } else { "fail" },
        residues.iter().map(|&r| sig12(r)).collect::<Vec<f64>>(),
        cond_i && cond_ii
    );
    emit(cli.json, &report, &human);
    Ok(if cond_i && cond_ii { 0 } else { 1 })
}

fn sector_rows(sectors: &dimer::DiracSectors) -> Vec<Value> {
    sectors
        .reports
        .iter()
        .map(|r| {
            json!({
                "epsilon": r.mask,
                "arf": r.arf.map(u8::from),
                "det_re": sig12(r.det.re),
                "det_im": sig12(r.det.im),
                "det_abs": sig12(r.det.norm()),
            })
        })
        .collect()
}

fn dets_cmd(cli: &Cli, path: &PathBuf, nu: Nu) -> Result<i32> {
    let named = load(path)?;
    let s = &named.surface;
    let basis = homology::cycle_basis(s)?;
    let sectors = dimer::dirac_sectors(s, &basis, nu)?;
    let rows = sector_rows(&sectors);
    let report = json!({ "sectors": rows });
    let human = rows
        .iter()
        .map(|r| {
            format!(
                "ε={} arf={} det=({}, {}) |det|={}",
                r["epsilon"], r["arf"], r["det_re"], r["det_im"], r["det_abs"]
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    emit(cli.json, &report, &human);
    Ok(0)
}

fn dbar_cmd(cli: &Cli, surface: &PathBuf, function: &PathBuf) -> Result<i32> {
    let named = load(surface)?;
    let s = &named.surface;
    let text = std::fs::read_to_string(function)?;
    let raw: BTreeMap<String, [f64; 2]> = serde_json::from_str(&text)?;
    let mut f = dbar::BlackFunction::zeros(s);
    for (name, [re, im]) in &raw {
        let v = named
            .vertex_by_name(name)
            .ok_or_else(|| Error::InvalidSurface(format!("unknown vertex {name:?} in function")))?;
        if s.is_white(v) {
            return Err(Error::InvalidSurface(format!("{name:?} is white; functions live on blacks")));
        }
        f.set(v, Complex64::new(*re, *im));
    }
    let mut rows = Vec::new();
    let mut human_lines = Vec::new();
    for w in s.white_vertices() {
        let v = dbar::dbar_apply(s, &f, w);
        rows.push(json!({
            "white": named.vertex_name(w),
            "value": [sig12(v.re), sig12(v.im)],
            "abs": sig12(v.norm()),
        }));
        human_lines.push(format!(
            "dbar at {}: ({}, {})",
            named.vertex_name(w),
            sig12(v.re),
            sig12(v.im)
        ));
    }
    let holo = dbar::is_discrete_holomorphic(s, &f);
    let report = json!({ "values": rows, "discrete_holomorphic": holo });
    human_lines.push(format!("discrete holomorphic: {holo}"));
    emit(cli.json, &report, &human_lines.join("\n"));
    Ok(0)
}

/// Vertex cap for brute-force enumeration through the CLI.
pub const BRUTE_CAP: usize = 60;

fn zcompare_cmd(cli: &Cli, path: &PathBuf, nu: Nu) -> Result<i32> {
    let named = load(path)?;
    let s = &named.surface;
    if s.vertex_count() > BRUTE_CAP {
        return Err(Error::TooLarge { vertices: s.vertex_count(), cap: BRUTE_CAP });
    }
    let basis = homology::cycle_basis(s)?;
    let census = dimer::enumerate_matchings(s)?;
    let z_brute = dimer::partition_brute(s, &census, nu);
    let sectors = dimer::dirac_sectors(s, &basis, nu)?;
    let z_pfd = dimer::partition_via_determinants(s, &basis, nu)?;
    let z_pfarf = dimer::partition_via_arf(s, &basis, nu)?;
    let tol = 1e-9 * z_brute.abs().max(1.0);
    let pass_d = (z_pfd - z_brute).abs() <= tol;
    let pass_arf = (z_pfarf - z_brute).abs() <= tol;

    // seeded Pf-K characters
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut pfk_rows = Vec::new();
    let mut pass_pfk = true;
    for _ in 0..3 {
        let phi: Vec<Complex64> = (0..basis.rank())
            .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..TAU)))
            .collect();
        let rep = dimer::pf_k_check(s, &census, &basis, &phi, nu)?;
        pass_pfk &= rep.pass;
        pfk_rows.push(json!({
            "phi": phi.iter().map(|u| [sig12(u.re), sig12(u.im)]).collect::<Vec<_>>(),
            "lhs": sig12(rep.lhs),
            "rhs": sig12(rep.rhs),
            "pass": rep.pass,
        }));
    }

    let pass = pass_d && pass_arf && pass_pfk;
    let report = json!({
        "matchings": census.len(),
        "z_brute": sig12(z_brute),
        "z_pfd": sig12(z_pfd),
        "z_pfarf": sig12(z_pfarf),
        "sectors": sector_rows(&sectors),
        "pfk": pfk_rows,
        "pass": pass,
    });
    let human = format!(
        "matchings: {}\nZ_brute  = {}\nZ_pfd    = {}\nZ_pfarf  = {}\nPf-K checks: {}\nresult: {}",
        census.len(),
        sig12(z_brute),
        sig12(z_pfd),
        sig12(z_pfarf),
        if pass_pfk { "pass" } else { "fail" },
        if pass { "PASS" } else { "FAIL" }
    );
    emit(cli.json, &report, &human);
    Ok(if pass { 0 } else { 1 })
}

