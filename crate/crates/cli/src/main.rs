//! canopy: decide colim sieves, verify Grothendieck topologies and sheaf
//! conditions, and check homotopy colimits through integer homology.
//!
//! Every command prints a JSON report (or text with --pretty) and exits with
//! 0 when the checked property holds, 1 when it fails (the report carries a
//! witness), 2 on input errors, and 3 when a resource guard tripped.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use canopy_core::document::{
    homology_rows, CategoryDoc, CoverDoc, FunctionDoc, FunctorDoc, NatTransDoc, PresheafDoc,
    SSetDiagramDoc, SSetDoc, SieveDoc, TopologyDoc,
};
use canopy_core::error::Error as CoreError;
use canopy_core::fincat::FinCategory;
use canopy_core::gensieve::{
    build_generalized_sieve, diagram_one, transitivity_argument_at,
};
use canopy_core::homology::{homology_of, normalized_chains};
use canopy_core::sieves::{
    is_colim_sieve, is_colim_sieve_generated, is_universal_colim_sieve,
    is_universal_colim_sieve_generated, ColimWitness,
};
use canopy_core::simplicial::{cech_map_sets, cech_cover, cylinder_homotopy, hocolim, simplex_category};
use canopy_core::topology::{
    canonical_topology, is_sheaf, representable_presheaf, verify_topology_axioms,
    TopologyAssignment,
};

#[derive(Parser)]
#[command(name = "canopy", version, about = "executable sieves, topologies and homotopy colimits")]
struct Cli {
    #[command(flatten)]
    config: Config,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Config {
    /// Probe bound for quantifications over finite sets.
    #[arg(long, global = true, default_value_t = 4)]
    probe: usize,

    /// Truncation dimension for simplicial constructions built here.
    #[arg(long, global = true, default_value_t = 4)]
    dim: usize,

    /// Guard on enumeration sizes (cocone assignments, hom products, tuples).
    #[arg(long, global = true, default_value_t = 1_000_000)]
    guard: usize,

    /// Guard on the number of arrows into one object for sieve enumeration.
    #[arg(long, global = true, default_value_t = 16)]
    sieve_guard: usize,

    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a category document.
    Category {
        #[command(subcommand)]
        action: CategoryAction,
    },
    /// Decide the (universal) colim sieve property of a sieve document.
    Sieve {
        #[command(subcommand)]
        action: SieveAction,
    },
    /// Compute the canonical topology or verify the axioms of an assignment.
    Topology {
        /// Category document.
        category: PathBuf,
        /// Compute the canonical topology.
        #[arg(long, conflicts_with = "verify")]
        canonical: bool,
        /// Verify this topology document instead.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Check the sheaf condition for a presheaf against a topology.
    Sheaf {
        /// Category document.
        category: PathBuf,
        /// Presheaf document.
        #[arg(long, conflicts_with = "representable")]
        presheaf: Option<PathBuf>,
        /// Use the representable presheaf at this object.
        #[arg(long)]
        representable: Option<String>,
        /// Topology document; defaults to the canonical topology.
        #[arg(long)]
        topology: Option<PathBuf>,
    },
    /// Homology of a homotopy colimit (diagram, cover, simplex category or
    /// Cech complex of a map).
    Hocolim {
        /// Simplicial-set diagram document.
        #[arg(long, group = "source")]
        diagram: Option<PathBuf>,
        /// Cover document: a space and parts given by generating simplices.
        #[arg(long, group = "source")]
        cech: Option<PathBuf>,
        /// Simplicial set document; uses its category of simplices.
        #[arg(long, group = "source")]
        simplices: Option<PathBuf>,
        /// Function document; uses its Cech complex.
        #[arg(long, group = "source")]
        cech_map: Option<PathBuf>,
    },
    /// Build a cylinder homotopy and check its endpoint identities.
    Cylinder {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long)]
        alpha: PathBuf,
        #[arg(long)]
        beta: PathBuf,
        #[arg(long)]
        theta: PathBuf,
    },
    /// Realize generalized sieves and run the transitivity diagram.
    Gensieve {
        /// Category document.
        category: PathBuf,
        /// Apex object.
        #[arg(long)]
        apex: String,
        /// Sieve documents, innermost first.
        #[arg(long = "sieve", required = true)]
        sieves: Vec<PathBuf>,
        /// With exactly two sieves R and S: assemble the transitivity
        /// diagram and verify the hom-level argument at every object.
        #[arg(long)]
        diagram_one: bool,
    },
}

#[derive(Subcommand)]
enum CategoryAction {
    /// Check the tables: totality, identities, associativity.
    Validate { path: PathBuf },
}

#[derive(Subcommand)]
enum SieveAction {
    /// Decide whether the sieve is a (universal) colim sieve.
    Check {
        /// Sieve document (explicit or generated form).
        sieve: PathBuf,
        /// Category document (required for explicit sieves).
        #[arg(long)]
        category: Option<PathBuf>,
        /// Also decide universality.
        #[arg(long)]
        universal: bool,
    },
}

enum Outcome {
    Holds(Value),
    Fails(Value),
}

enum CliError {
    Input(String),
    Guard(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::AmbientTooLarge { .. } => CliError::Guard(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_category(path: &PathBuf) -> Result<FinCategory, CliError> {
    let doc: CategoryDoc = read_json(path)?;
    doc.to_category().map_err(CliError::from)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = cli.config.clone();
    let result = run(cli.command, &config);
    let (code, report) = match result {
        Ok(Outcome::Holds(v)) => (0u8, v),
        Ok(Outcome::Fails(v)) => (1u8, v),
        Err(CliError::Input(msg)) => (2u8, json!({ "error": msg })),
        Err(CliError::Guard(msg)) => (3u8, json!({ "error": msg, "guard": true })),
    };
    let mut report = report;
    if let Value::Object(ref mut map) = report {
        map.insert(
            "config".into(),
            json!({
                "probe": config.probe,
                "dim": config.dim,
                "guard": config.guard,
                "sieve_guard": config.sieve_guard,
            }),
        );
    }
    let rendered = if config.pretty {
        render_pretty(&report)
    } else {
        serde_json::to_string_pretty(&report).expect("reports serialize")
    };
    match config.output {
        Some(path) => {
            if std::fs::write(&path, rendered).is_err() {
                eprintln!("cannot write {}", path.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{rendered}"),
    }
    ExitCode::from(code)
}

fn render_pretty(v: &Value) -> String {
    fn walk(v: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match v {
            Value::Object(map) => {
                for (k, val) in map {
                    match val {
                        Value::Object(_) | Value::Array(_) => {
                            out.push_str(&format!("{pad}{k}:\n"));
                            walk(val, indent + 1, out);
                        }
                        _ => out.push_str(&format!("{pad}{k}: {val}\n")),
                    }
                }
            }
            Value::Array(items) => {
                for item in items {
                    match item {
                        Value::Object(_) | Value::Array(_) => walk(item, indent, out),
                        _ => out.push_str(&format!("{pad}- {item}\n")),
                    }
                }
            }
            _ => out.push_str(&format!("{pad}{v}\n")),
        }
    }
    let mut out = String::new();
    walk(v, 0, &mut out);
    out
}

fn run(command: Command, config: &Config) -> Result<Outcome, CliError> {
    match command {
        Command::Category { action: CategoryAction::Validate { path } } => {
            let doc: CategoryDoc = read_json(&path)?;
            match doc.to_category() {
                Ok(cat) => Ok(Outcome::Holds(json!({
                    "valid": true,
                    "objects": cat.objects().len(),
                    "morphisms": cat.arrows().len(),
                }))),
                Err(e) => Ok(Outcome::Fails(json!({ "valid": false, "error": e.to_string() }))),
            }
        }

        Command::Sieve { action: SieveAction::Check { sieve, category, universal } } => {
            let doc: SieveDoc = read_json(&sieve)?;
            match &doc {
                SieveDoc::Explicit { .. } => {
                    let cat_path = category.ok_or_else(|| {
                        CliError::Input("explicit sieves need --category".into())
                    })?;
                    let cat = load_category(&cat_path)?;
                    let s = doc.to_explicit(&cat)?;
                    let colim = is_colim_sieve(&cat, &s, config.guard)?;
                    let mut report = json!({
                        "form": "explicit",
                        "colim_sieve": colim.is_colim_sieve,
                        "witness": witness_json(&colim.witness),
                    });
                    let mut holds = colim.is_colim_sieve;
                    if universal {
                        let u = is_universal_colim_sieve(&cat, &s, config.guard)?;
                        report["universal_colim_sieve"] = json!(u.is_universal_colim_sieve);
                        if let Some((arrow, inner)) = &u.witness {
                            report["universal_witness"] = json!({
                                "pullback_along": arrow,
                                "inner": witness_json(&inner.witness),
                            });
                        }
                        holds = u.is_universal_colim_sieve;
                    }
                    if holds {
                        Ok(Outcome::Holds(report))
                    } else {
                        Ok(Outcome::Fails(report))
                    }
                }
                SieveDoc::Generated { .. } => {
                    let s = doc.to_generated()?;
                    let colim = is_colim_sieve_generated(&s)?;
                    let mut report = json!({
                        "form": "generated",
                        "colim_sieve": colim.is_colim_sieve,
                        "witness": witness_json(&colim.witness),
                    });
                    let mut holds = colim.is_colim_sieve;
                    if universal {
                        let u = is_universal_colim_sieve_generated(&s, config.probe)?;
                        report["universal_colim_sieve"] = json!(u.is_universal_colim_sieve);
                        report["decided_by"] = json!("coproduct-criterion");
                        report["probe_bound"] = json!(u.probe_bound);
                        report["probes_checked"] = json!(u.probes_checked);
                        if let Some(x) = &u.uncovered {
                            report["uncovered"] = json!(x);
                        }
                        holds = u.is_universal_colim_sieve;
                    }
                    if holds {
                        Ok(Outcome::Holds(report))
                    } else {
                        Ok(Outcome::Fails(report))
                    }
                }
            }
        }

        Command::Topology { category, canonical, verify } => {
            let cat = load_category(&category)?;
            match (canonical, verify) {
                (_, Some(path)) => {
                    let doc: TopologyDoc = read_json(&path)?;
                    let assignment = assignment_from_doc(&cat, &doc)?;
                    let report = verify_topology_axioms(&cat, &assignment, config.sieve_guard)?;
                    let value = topology_report_json(&report);
                    if report.all_pass() {
                        Ok(Outcome::Holds(value))
                    } else {
                        Ok(Outcome::Fails(value))
                    }
                }
                _ => {
                    let j = canonical_topology(&cat, config.sieve_guard, config.guard)?;
                    let report = verify_topology_axioms(&cat, &j, config.sieve_guard)?;
                    let covers: Value = j
                        .iter()
                        .map(|(x, sieves)| {
                            (
                                x.clone(),
                                json!(sieves
                                    .iter()
                                    .map(|s| s.morphisms().iter().cloned().collect::<Vec<_>>())
                                    .collect::<Vec<_>>()),
                            )
                        })
                        .collect::<serde_json::Map<String, Value>>()
                        .into();
                    let mut value = topology_report_json(&report);
                    value["covers"] = covers;
                    if report.all_pass() {
                        Ok(Outcome::Holds(value))
                    } else {
                        Ok(Outcome::Fails(value))
                    }
                }
            }
        }

        Command::Sheaf { category, presheaf, representable, topology } => {
            let cat = load_category(&category)?;
            let assignment = match topology {
                Some(path) => {
                    let doc: TopologyDoc = read_json(&path)?;
                    assignment_from_doc(&cat, &doc)?
                }
                None => canonical_topology(&cat, config.sieve_guard, config.guard)?,
            };
            let f = match (presheaf, representable) {
                (Some(path), _) => {
                    let doc: PresheafDoc = read_json(&path)?;
                    doc.to_presheaf(&cat)?
                }
                (None, Some(m)) => representable_presheaf(&cat, &m)?,
                (None, None) => {
                    return Err(CliError::Input("need --presheaf or --representable".into()))
                }
            };
            let d = is_sheaf(&cat, &f, &assignment)?;
            let value = json!({
                "sheaf": d.is_sheaf,
                "witness": d.witness.map(|(x, s)| json!({
                    "object": x,
                    "sieve": s.morphisms().iter().cloned().collect::<Vec<_>>(),
                })),
            });
            if d.is_sheaf {
                Ok(Outcome::Holds(value))
            } else {
                Ok(Outcome::Fails(value))
            }
        }

        Command::Hocolim { diagram, cech, simplices, cech_map } => {
            if let Some(path) = diagram {
                let doc: SSetDiagramDoc = read_json(&path)?;
                let d = doc.to_diagram()?;
                let h = hocolim(&d)?;
                let rows = homology_rows(&homology_of(&h)?);
                return Ok(Outcome::Holds(json!({ "source": "diagram", "homology": rows })));
            }
            if let Some(path) = cech {
                let doc: CoverDoc = read_json(&path)?;
                let space = doc.space.to_sset()?;
                let (_, h) = cech_cover(&space, &doc.parts)?;
                let hs = homology_of(&h)?;
                let target = homology_of(&space)?;
                let matches = hs == target;
                let value = json!({
                    "source": "cech-cover",
                    "homology": homology_rows(&hs),
                    "space_homology": homology_rows(&target),
                    "matches_space": matches,
                });
                return if matches { Ok(Outcome::Holds(value)) } else { Ok(Outcome::Fails(value)) };
            }
            if let Some(path) = simplices {
                let doc: SSetDoc = read_json(&path)?;
                let space = doc.to_sset()?;
                let d = simplex_category(&space)?;
                let h = hocolim(&d)?;
                let hs = homology_of(&h)?;
                let target = homology_of(&space)?;
                let matches = hs == target;
                let value = json!({
                    "source": "simplex-category",
                    "homology": homology_rows(&hs),
                    "space_homology": homology_rows(&target),
                    "matches_space": matches,
                });
                return if matches { Ok(Outcome::Holds(value)) } else { Ok(Outcome::Fails(value)) };
            }
            if let Some(path) = cech_map {
                let doc: FunctionDoc = read_json(&path)?;
                let f = doc.to_function()?;
                let c = cech_map_sets(&f, config.dim)?;
                let chains = normalized_chains(&c)?;
                let rows = homology_rows(&homology_of(&c)?);
                return Ok(Outcome::Holds(json!({
                    "source": "cech-map",
                    "levels": (0..=config.dim).map(|n| c.size(n)).collect::<Vec<_>>(),
                    "nondegenerate": (0..=config.dim).map(|n| chains.rank(n)).collect::<Vec<_>>(),
                    "homology": rows,
                })));
            }
            Err(CliError::Input("need one of --diagram, --cech, --simplices, --cech-map".into()))
        }

        Command::Cylinder { diagram, alpha, beta, theta } => {
            let ddoc: SSetDiagramDoc = read_json(&diagram)?;
            let d = ddoc.to_diagram()?;
            let adoc: FunctorDoc = read_json(&alpha)?;
            let a = adoc.to_functor()?;
            let bdoc: FunctorDoc = read_json(&beta)?;
            let b = bdoc.to_functor()?;
            let tdoc: NatTransDoc = read_json(&theta)?;
            let nat = match tdoc.to_nat_trans(a, b) {
                Ok(nat) => nat,
                Err(CoreError::NotNatural { at }) => {
                    return Ok(Outcome::Fails(json!({
                        "not_natural": at,
                    })))
                }
                Err(e) => return Err(e.into()),
            };
            let cyl = cylinder_homotopy(&d, &nat)?;
            let value = json!({
                "endpoint_zero_is_alpha_sharp": cyl.endpoint_zero_is_alpha_sharp,
                "endpoint_one_is_beta_sharp_after_theta": cyl.endpoint_one_is_beta_sharp_after_theta,
                "factorization_holds": cyl.factorization_holds,
                "pushout_holds": cyl.pushout_holds,
            });
            if cyl.all_checks() {
                Ok(Outcome::Holds(value))
            } else {
                Ok(Outcome::Fails(value))
            }
        }

        Command::Gensieve { category, apex, sieves, diagram_one: run_diagram } => {
            let cat = load_category(&category)?;
            let mut list = Vec::new();
            for path in &sieves {
                let doc: SieveDoc = read_json(path)?;
                list.push(doc.to_explicit(&cat)?);
            }
            let gs = build_generalized_sieve(&cat, &apex, &list, config.guard)?;
            let mut value = json!({
                "objects": gs.category().objects().len(),
                "morphisms": gs.category().arrows().len(),
            });
            if !run_diagram {
                return Ok(Outcome::Holds(value));
            }
            if list.len() != 2 {
                return Err(CliError::Input("--diagram-one needs exactly two sieves R S".into()));
            }
            let d = diagram_one(&cat, &list[0], &list[1], config.guard)?;
            let mut all = true;
            let mut per_object = Vec::new();
            for y in cat.objects() {
                let t = transitivity_argument_at(&cat, &d, y, config.guard)?;
                all &= t.upper_triangle_commutes
                    && t.lower_triangle_commutes
                    && t.verticals_bijective
                    && t.phi_r_bijective;
                per_object.push(json!({
                    "object": y,
                    "upper_triangle": t.upper_triangle_commutes,
                    "lower_triangle": t.lower_triangle_commutes,
                    "verticals_bijective": t.verticals_bijective,
                    "phi_r_bijective": t.phi_r_bijective,
                }));
            }
            value["diagram"] = json!({
                "rsr_objects": d.rsr.category().objects().len(),
                "at": per_object,
            });
            if all {
                Ok(Outcome::Holds(value))
            } else {
                Ok(Outcome::Fails(value))
            }
        }
    }
}

fn witness_json(w: &ColimWitness) -> Value {
    match w {
        ColimWitness::UniversalCocone(c) => json!({
            "universal_cocone": { "nadir": c.nadir, "legs": c.legs }
        }),
        ColimWitness::FailingCocone { cocone, factorizations } => json!({
            "failing_cocone": { "nadir": cocone.nadir, "legs": cocone.legs },
            "factorizations": factorizations,
        }),
        ColimWitness::NoColimit => json!("no-colimit"),
        ColimWitness::Coequalizer { colim, missed, collapsed } => json!({
            "coequalizer_size": colim.len(),
            "missed": missed,
            "collapsed": collapsed,
        }),
    }
}

fn topology_report_json(report: &canopy_core::topology::TopologyReport) -> Value {
    use canopy_core::topology::AxiomOutcome;
    let fmt = |a: &AxiomOutcome| match a {
        AxiomOutcome::Pass => (true, None),
        AxiomOutcome::Fail { witness } => (false, Some(witness.clone())),
    };
    let (m, mw) = fmt(&report.maximality);
    let (s, sw) = fmt(&report.stability);
    let (t, tw) = fmt(&report.transitivity);
    let witnesses: Vec<String> = [mw, sw, tw].into_iter().flatten().collect();
    json!({
        "maximality": m,
        "stability": s,
        "transitivity": t,
        "witnesses": witnesses,
    })
}

fn assignment_from_doc(
    cat: &FinCategory,
    doc: &TopologyDoc,
) -> Result<TopologyAssignment, CliError> {
    let mut covers = std::collections::BTreeMap::new();
    for (x, sieves) in &doc.covers {
        let list = sieves
            .iter()
            .map(|s| s.to_explicit(cat))
            .collect::<Result<Vec<_>, _>>()?;
        covers.insert(x.clone(), list);
    }
    TopologyAssignment::new(cat, covers).map_err(CliError::from)
}
