//! `fusionscope`: fusion systems, p-local equivalence and related invariants
//! of small permutation groups from the command line.
//!
//! Exit status: 0 on any computed answer (including "not equivalent"),
//! 2 on usage or parse errors, 3 when a size cap is exceeded, 1 otherwise.

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fusionscope_core::abelian::torsion_profile;
use fusionscope_core::alperin::{self, alperin_decompose, verify_factorization};
use fusionscope_core::arith::{p_part, prime_divisors};
use fusionscope_core::catalog::parse_and_build;
use fusionscope_core::describe::label;
use fusionscope_core::diagram::{self, diagram, essential_subsystem, object_name};
use fusionscope_core::equivalence::{
    cc_p, h1_mod_p, nilpotency_report_with, p_locally_equivalent_with, p_nilpotency_criteria, stable_h1,
    EquivalenceOptions,
};
use fusionscope_core::group::DEFAULT_ORDER_CAP;
use fusionscope_core::{Error, FusionSystem, Group, Limits};

#[derive(Parser)]
#[command(name = "fusionscope", version, about = "Fusion systems and p-local equivalence of small finite groups")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// largest group order any computation may build
    #[arg(long, env = "FUSIONSCOPE_CAP_ORDER", default_value_t = DEFAULT_ORDER_CAP, global = true)]
    cap_order: usize,

    /// largest subgroup whose lattice may be enumerated
    #[arg(long, default_value_t = Limits::default().max_subgroup_enumeration, global = true)]
    cap_subgroups: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Verb {
    /// Order, type and basic structure of a group
    Info { group: String },
    /// A Sylow p-subgroup
    Sylow {
        group: String,
        #[arg(short)]
        p: u64,
    },
    /// The fusion system F_S(G) with its classes and diagram
    Fusion {
        group: String,
        #[arg(short)]
        p: u64,
    },
    /// Essential subgroups and the subsystem they control with S
    Essential {
        group: String,
        #[arg(short)]
        p: u64,
    },
    /// p-nilpotency by four independent criteria
    Pnilpotent {
        group: String,
        #[arg(short)]
        p: u64,
    },
    /// Nilpotency by three independent criteria
    Nilpotent { group: String },
    /// Decide whether two groups are p-locally equivalent
    Equiv {
        left: String,
        right: String,
        #[arg(short)]
        p: u64,
        /// screen candidates with the definition of fusion preservation
        #[arg(long)]
        oracle: bool,
    },
    /// Number of conjugacy classes of p-elements
    Ccp {
        group: String,
        #[arg(short)]
        p: u64,
    },
    /// The p-local invariants compared by `equiv`
    Invariants {
        group: String,
        #[arg(short)]
        p: u64,
    },
    /// Torsion coefficients of an abelian group, at p or at every prime
    Torsion {
        group: String,
        #[arg(short)]
        p: Option<u64>,
    },
    /// Factor fusion morphisms through essential subgroups and S
    Alperin {
        group: String,
        #[arg(short)]
        p: u64,
        /// only morphisms out of this object index
        #[arg(long)]
        source: Option<usize>,
    },
    /// Stable homomorphisms S -> Z/p
    Stableh1 {
        group: String,
        #[arg(short)]
        p: u64,
    },
}

enum Output {
    Text(String),
    Json(Value),
    Dot(String),
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => 3,
            Error::Parse(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = match out {
                Output::Text(s) | Output::Dot(s) => s,
                Output::Json(v) => serde_json::to_string_pretty(&v).expect("json") + "\n",
            };
            // a closed pipe downstream is not an error of ours
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("fusionscope: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn check_prime(p: u64) -> Result<u64, Failure> {
    if fusionscope_core::arith::is_prime(p) {
        Ok(p)
    } else {
        Err(usage(format!("{p} is not a prime")))
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let limits = Limits {
        max_order: cli.cap_order,
        max_subgroup_enumeration: cli.cap_subgroups,
    };
    let build = |src: &str| parse_and_build(src, limits.max_order).map_err(Failure::from);
    fn fusion(g: &Group, p: u64, limits: Limits) -> Result<FusionSystem<'_>, Failure> {
        Ok(FusionSystem::with_limits(g, check_prime(p)?, limits)?)
    }
    let format = cli.format;
    let no_dot = |verb: &str| -> Result<(), Failure> {
        if format == Format::Dot {
            Err(usage(format!("{verb} has no dot output")))
        } else {
            Ok(())
        }
    };

    match &cli.verb {
        Verb::Info { group } => {
            no_dot("info")?;
            let g = build(group)?;
            info(&g, format)
        }
        Verb::Sylow { group, p } => {
            no_dot("sylow")?;
            let g = build(group)?;
            let p = check_prime(*p)?;
            let s = g.sylow(p);
            let gens: Vec<String> = g.generating_set(&s).iter().map(|&x| g.element(x).to_string()).collect();
            let ty = label(&g.subgroup_as_group(&s)?);
            Ok(match format {
                Format::Json => Output::Json(json!({"p": p, "order": s.order(), "type": ty, "generators": gens})),
                _ => Output::Text(format!("order {}\ntype {ty}\ngenerators {}\n", s.order(), braces(&gens))),
            })
        }
        Verb::Fusion { group, p } => {
            let g = build(group)?;
            let f = fusion(&g, *p, limits)?;
            let d = diagram(&f);
            Ok(match format {
                Format::Dot => Output::Dot(diagram::to_dot(&d, &f)),
                Format::Json => Output::Json(diagram::to_json(&d, &f)),
                Format::Text => Output::Text(fusion_text(&f, &d)),
            })
        }
        Verb::Essential { group, p } => {
            let g = build(group)?;
            let f = fusion(&g, *p, limits)?;
            let d = essential_subsystem(&f);
            Ok(match format {
                Format::Dot => Output::Dot(diagram::to_dot(&d, &f)),
                Format::Json => Output::Json(diagram::to_json(&d, &f)),
                Format::Text => Output::Text(fusion_text(&f, &d)),
            })
        }
        Verb::Pnilpotent { group, p } => {
            no_dot("pnilpotent")?;
            let g = build(group)?;
            let p = check_prime(*p)?;
            let c = p_nilpotency_criteria(&g, p, limits)?;
            if c.iter().any(|&b| b != c[0]) {
                return Err(Error::CriteriaDisagree(format!("{c:?}")).into());
            }
            let names = ["p_prime_elements_closed", "normal_complement", "locally_equivalent_to_sylow", "automizers_are_p_groups"];
            Ok(match format {
                Format::Json => {
                    let mut m = serde_json::Map::new();
                    m.insert("p".into(), json!(p));
                    m.insert("p_nilpotent".into(), json!(c[0]));
                    for (n, b) in names.iter().zip(c) {
                        m.insert((*n).into(), json!(b));
                    }
                    Output::Json(Value::Object(m))
                }
                _ => {
                    let mut s = format!("{p}-nilpotent {}\n", c[0]);
                    for (n, b) in names.iter().zip(c) {
                        let _ = writeln!(s, "  {n} {b}");
                    }
                    Output::Text(s)
                }
            })
        }
        Verb::Nilpotent { group } => {
            no_dot("nilpotent")?;
            let g = build(group)?;
            let r = nilpotency_report_with(&g, limits)?;
            Ok(match format {
                Format::Json => Output::Json(serde_json::to_value(r).expect("json")),
                _ => Output::Text(format!(
                    "nilpotent {}\n  sylow_product_iso {}\n  all_p_nilpotent {}\n",
                    r.nilpotent, r.sylow_product_iso, r.all_p_nilpotent
                )),
            })
        }
        Verb::Equiv { left, right, p, oracle } => {
            no_dot("equiv")?;
            let (g, h) = (build(left)?, build(right)?);
            let options = EquivalenceOptions {
                limits,
                oracle: *oracle,
                skip_invariants: false,
            };
            let v = p_locally_equivalent_with(&g, &h, check_prime(*p)?, options)?;
            Ok(match format {
                Format::Json => Output::Json(v.to_json(&g, &h)),
                _ => {
                    let mut s = format!("equivalent {}\n", v.equivalent);
                    if let Some(r) = &v.refutation {
                        let _ = writeln!(s, "refuted_by {} ({} vs {})", r.invariant, r.left, r.right);
                    }
                    if v.witness.is_some() {
                        let w = &v.to_json(&g, &h)["witness"];
                        for (k, val) in w.as_object().expect("witness map") {
                            let _ = writeln!(s, "  {k} -> {}", val.as_str().expect("string"));
                        }
                    }
                    Output::Text(s)
                }
            })
        }
        Verb::Ccp { group, p } => {
            no_dot("ccp")?;
            let g = build(group)?;
            let p = check_prime(*p)?;
            let n = cc_p(&g, p)?;
            Ok(match format {
                Format::Json => Output::Json(json!({"p": p, "cc_p": n})),
                _ => Output::Text(format!("{n}\n")),
            })
        }
        Verb::Invariants { group, p } => {
            no_dot("invariants")?;
            let g = build(group)?;
            let f = fusion(&g, *p, limits)?;
            invariants(&f, format)
        }
        Verb::Torsion { group, p } => {
            no_dot("torsion")?;
            let g = build(group)?;
            let primes = match p {
                Some(p) => vec![check_prime(*p)?],
                None => prime_divisors(g.order() as u64),
            };
            let profiles = primes
                .iter()
                .map(|&q| torsion_profile(&g, q))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(match format {
                Format::Json => Output::Json(json!(profiles)),
                _ => {
                    let mut s = String::new();
                    for t in &profiles {
                        if p.is_some() {
                            let _ = writeln!(s, "{t}");
                        } else {
                            let _ = writeln!(s, "{} {t}", t.p);
                        }
                    }
                    Output::Text(s)
                }
            })
        }
        Verb::Alperin { group, p, source } => {
            no_dot("alperin")?;
            let g = build(group)?;
            let f = fusion(&g, *p, limits)?;
            alperin_all(&f, *source, format)
        }
        Verb::Stableh1 { group, p } => {
            no_dot("stableh1")?;
            let g = build(group)?;
            let f = fusion(&g, *p, limits)?;
            let st = stable_h1(&f)?;
            let h1 = h1_mod_p(&g, f.prime())?;
            let basis: Vec<String> = st.basis_elements.iter().map(|&x| g.element(x).to_string()).collect();
            Ok(match format {
                Format::Json => Output::Json(json!({
                    "p": f.prime(),
                    "dimension": st.dimension,
                    "hom_dimension": st.hom_dimension,
                    "h1": h1,
                    "frattini_basis": basis,
                    "stable_basis": st.basis,
                })),
                _ => {
                    let mut s = format!(
                        "stable {}\nhom(S,Z/{}) {}\nh1(G) {h1}\nfrattini basis {}\n",
                        st.dimension,
                        f.prime(),
                        st.hom_dimension,
                        braces(&basis)
                    );
                    for v in &st.basis {
                        let coords: Vec<String> = v.iter().map(u64::to_string).collect();
                        let _ = writeln!(s, "  ({})", coords.join(","));
                    }
                    Output::Text(s)
                }
            })
        }
    }
}

fn braces(items: &[String]) -> String {
    format!("<{}>", items.join(", "))
}

fn info(g: &Group, format: Format) -> Result<Output, Failure> {
    let primes = prime_divisors(g.order() as u64);
    let sylows: Vec<(u64, u64)> = primes.iter().map(|&p| (p, p_part(g.order() as u64, p))).collect();
    let classes = g.conjugacy_classes().len();
    let gens: Vec<String> = g.generators().iter().map(ToString::to_string).collect();
    let ty = label(g);
    Ok(match format {
        Format::Json => Output::Json(json!({
            "order": g.order(),
            "degree": g.degree(),
            "type": ty,
            "generators": gens,
            "abelian": g.is_abelian(),
            "nilpotent": g.is_nilpotent(),
            "center_order": g.center().order(),
            "conjugacy_classes": classes,
            "sylow_orders": sylows.iter().map(|(p, n)| json!({"p": p, "order": n})).collect::<Vec<_>>(),
        })),
        _ => {
            let mut s = format!(
                "order {}\ndegree {}\ntype {ty}\ngenerators {}\nabelian {}\nnilpotent {}\ncenter {}\nconjugacy classes {classes}\n",
                g.order(),
                g.degree(),
                braces(&gens),
                g.is_abelian(),
                g.is_nilpotent(),
                g.center().order()
            );
            for (p, n) in sylows {
                let _ = writeln!(s, "sylow {p} order {n}");
            }
            Output::Text(s)
        }
    })
}

fn fusion_text(f: &FusionSystem, d: &diagram::FusionDiagram) -> String {
    let mut s = format!(
        "p {}\n|G| {}\n|S| {}\nobjects {}\nclasses {}\n",
        f.prime(),
        f.group().order(),
        f.sylow().order(),
        d.node_count(),
        d.classes.len()
    );
    for c in &d.classes {
        let mut flags = Vec::new();
        if c.centric {
            flags.push("centric");
        }
        if c.essential {
            flags.push("essential");
        }
        let _ = writeln!(
            s,
            "  class {} order {} size {} automizer {} rep {}{}",
            c.class,
            c.order,
            c.size,
            c.automizer,
            object_name(f, c.representative),
            if flags.is_empty() { String::new() } else { format!(" [{}]", flags.join(", ")) }
        );
    }
    s
}

fn invariants(f: &FusionSystem, format: Format) -> Result<Output, Failure> {
    let g = f.group();
    let p = f.prime();
    let s_type = label(&g.subgroup_as_group(f.sylow())?);
    let ccp = cc_p(g, p)?;
    let aut_s = f.class(f.sylow_object()).automizer_label.clone();
    let essentials: Vec<(usize, String)> = f
        .classes()
        .iter()
        .filter(|c| c.essential)
        .map(|c| (f.object(c.representative).order(), c.automizer_label.clone()))
        .collect();
    let h1 = h1_mod_p(g, p)?;
    let stable = stable_h1(f)?.dimension;
    Ok(match format {
        Format::Json => Output::Json(json!({
            "p": p,
            "p_part": p_part(g.order() as u64, p),
            "sylow": s_type,
            "cc_p": ccp,
            "automizer_S": aut_s,
            "essential": essentials.iter().map(|(o, l)| json!({"order": o, "automizer": l})).collect::<Vec<_>>(),
            "h1": h1,
            "stable_h1": stable,
        })),
        _ => {
            let ess: Vec<String> = essentials.iter().map(|(o, l)| format!("{o}:{l}")).collect();
            Output::Text(format!(
                "p-part {}\nsylow {s_type}\ncc_p {ccp}\nautomizer-S {aut_s}\nessential [{}]\nh1 {h1}\nstable_h1 {stable}\n",
                p_part(g.order() as u64, p),
                ess.join(", ")
            ))
        }
    })
}

fn alperin_all(f: &FusionSystem, source: Option<usize>, format: Format) -> Result<Output, Failure> {
    let n = f.objects().len();
    let sources: Vec<usize> = match source {
        Some(i) if i < n => vec![i],
        Some(i) => return Err(usage(format!("object index {i} out of range (0..{n})"))),
        None => (0..n).collect(),
    };
    let s = f.sylow_object();
    let mut docs = Vec::new();
    let mut text = String::new();
    let mut count = 0;
    for o in sources {
        for m in f.hom(o, s) {
            let fac = alperin_decompose(f, &m)?;
            if !verify_factorization(f, &fac) {
                return Err(Error::CriteriaDisagree("factorization failed verification".into()).into());
            }
            count += 1;
            match format {
                Format::Json => docs.push(alperin::to_json(f, &fac)),
                _ => {
                    let image = f.object_of_members(&m.image()).expect("object");
                    let _ = writeln!(
                        text,
                        "{} -> {} via c_{}: {} step(s)",
                        object_name(f, o),
                        object_name(f, image),
                        f.group().element(m.witness().expect("hom carries witnesses")),
                        fac.steps.len()
                    );
                    for step in &fac.steps {
                        let _ = writeln!(
                            text,
                            "  R = {} phi = c_{}",
                            object_name(f, step.subgroup),
                            step.automorphism
                                .witness()
                                .map(|w| f.group().element(w).to_string())
                                .unwrap_or_else(|| "?".into())
                        );
                    }
                }
            }
        }
    }
    Ok(match format {
        Format::Json => Output::Json(json!({"p": f.prime(), "morphisms": count, "factorizations": docs})),
        _ => {
            let _ = writeln!(text, "{count} morphism(s) factored and verified");
            Output::Text(text)
        }
    })
}
