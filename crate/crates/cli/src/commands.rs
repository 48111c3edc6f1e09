use std::path::Path as FsPath;
use std::sync::Arc;

use serde_json::{json, Value};

use selfsim::dynamics::{
    ae_class, ae_equivalent_bi, ae_witness, act_infinite, check_recurrent, germ_equal, is_hausdorff, is_regular,
    level_transitive, shift_class, stable_witness, unstable_equivalent, DynamicsError, FixedWitness, Germ,
    Recurrence,
};
use selfsim::ktheory::{katsura_ktheory, katsura_system, smith_normal_form, IntMatrix};
use selfsim::schreier::{Generators, SchreierGraph};
use selfsim::{
    AnyPath, Automaton, AutomatonError, Bounds, Element, Nucleus, NucleusError, PathLiteral, SpecError, SpecFile,
};

use crate::report::{Failure, Report};
use crate::{Command, GraphFormat, LabelSet, NucleusFormat, Property, SpecArg};

type Outcome = Result<Report, Failure>;

pub fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Validate(_) => "validate",
        Command::Act { .. } => "act",
        Command::Restrict { .. } => "restrict",
        Command::Eq { .. } => "eq",
        Command::Nucleus { .. } => "nucleus",
        Command::Rk { .. } => "rk",
        Command::Check { .. } => "check",
        Command::Ae { .. } => "ae",
        Command::Class { .. } => "class",
        Command::Shift { .. } => "shift",
        Command::GermEq { .. } => "germ-eq",
        Command::Stable { .. } => "stable",
        Command::Unstable { .. } => "unstable",
        Command::Schreier { .. } => "schreier",
        Command::Katsura { .. } => "katsura",
        Command::Snf { .. } => "snf",
        Command::Ktheory { .. } => "ktheory",
    }
}

pub fn run(cmd: &Command) -> Outcome {
    match cmd {
        Command::Validate(spec) => validate(spec),
        Command::Act { spec, elem, path } => act(&Loaded::new(spec)?, elem, path),
        Command::Restrict { spec, elem, path } => restrict(&Loaded::new(spec)?, elem, path),
        Command::Eq { spec, g, h } => equal(&Loaded::new(spec)?, g, h),
        Command::Nucleus { spec, format } => nucleus(&Loaded::new(spec)?, *format),
        Command::Rk { spec, k } => rk(&Loaded::new(spec)?, *k),
        Command::Check {
            property,
            spec,
            depth,
            level,
        } => check(&Loaded::new(spec)?, *property, *depth, *level),
        Command::Ae { spec, x, y } => ae(&Loaded::new(spec)?, x, y),
        Command::Class { spec, x } => class(&Loaded::new(spec)?, x),
        Command::Shift { spec, x } => shift(&Loaded::new(spec)?, x),
        Command::GermEq { spec, a, b } => germ_eq(&Loaded::new(spec)?, a, b),
        Command::Stable { spec, x, y } => stable(&Loaded::new(spec)?, x, y),
        Command::Unstable { spec, x, y } => unstable(&Loaded::new(spec)?, x, y),
        Command::Schreier {
            spec,
            level,
            format,
            labels,
            project,
        } => schreier(&Loaded::new(spec)?, *level, *format, *labels, *project),
        Command::Katsura { a, b, out } => katsura(a, b, out.as_deref()),
        Command::Snf { matrix } => snf(matrix),
        Command::Ktheory { a, b } => ktheory(a, b),
    }
}

struct Loaded {
    aut: Arc<Automaton>,
    bounds: Bounds,
}

fn read(path: &FsPath) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn env_bounds(mut bounds: Bounds) -> Result<Bounds, Failure> {
    if let Ok(v) = std::env::var("SELFSIM_MAX_STATES") {
        bounds.max_states = v
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("SELFSIM_MAX_STATES=`{v}` is not a number")))?;
    }
    Ok(bounds)
}

impl Loaded {
    fn new(arg: &SpecArg) -> Result<Loaded, Failure> {
        let text = read(&arg.spec)?;
        let spec = selfsim::parse_spec(&text).map_err(|e| Failure::Input(format!("{}: {e}", arg.spec.display())))?;
        let aut = spec
            .automaton()
            .map_err(|e| Failure::Input(format!("{}: {e}", arg.spec.display())))?;
        Ok(Loaded {
            aut: Arc::new(aut),
            bounds: env_bounds(spec.bounds())?,
        })
    }

    fn elem(&self, text: &str) -> Result<Element, Failure> {
        self.aut.parse_element(text).map_err(Failure::input)
    }

    fn literal(&self, text: &str) -> Result<AnyPath, Failure> {
        let g = self.aut.graph();
        PathLiteral::parse(g, text)
            .and_then(|l| l.into_any(g))
            .map_err(|e| Failure::Input(format!("`{text}`: {e}")))
    }

    fn nucleus(&self) -> Result<Nucleus, Failure> {
        Nucleus::compute(&self.aut, self.bounds).map_err(Failure::bound)
    }

    fn name(&self, g: &Element) -> String {
        self.aut.format_element(g)
    }
}

fn dyn_err(e: DynamicsError) -> Failure {
    match e {
        DynamicsError::Closure(c) => Failure::bound(c),
        other => Failure::input(other),
    }
}

fn validate(arg: &SpecArg) -> Outcome {
    let text = read(&arg.spec)?;
    let spec = selfsim::parse_spec(&text).map_err(|e| Failure::Input(format!("{}: {e}", arg.spec.display())))?;
    match spec.automaton() {
        Ok(aut) => {
            let g = aut.graph();
            let st = g.structure();
            let gens: Vec<String> = aut.generator_specs().iter().map(|s| s.name.clone()).collect();
            Ok(Report::verdict(true)
                .line(format!(
                    "valid: {} vertices, {} edges, {} generators",
                    g.num_vertices(),
                    g.num_edges(),
                    gens.len()
                ))
                .line(format!(
                    "no sources: {}, no sinks: {}, strongly connected: {}, primitive: {}",
                    st.no_sources, st.no_sinks, st.strongly_connected, st.primitive
                ))
                .field("vertices", g.num_vertices())
                .field("edges", g.num_edges())
                .field("generators", gens)
                .field("structure", serde_json::to_value(st).expect("plain struct")))
        }
        Err(SpecError::Validation(AutomatonError::Invalid(vs))) => {
            let msgs: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
            Ok(Report::verdict(false)
                .line("invalid:")
                .lines(msgs.iter().map(|m| format!("  {m}")))
                .field("violations", msgs))
        }
        Err(e) => Ok(Report::verdict(false).line(format!("invalid: {e}")).field("violations", vec![e.to_string()])),
    }
}

fn act(l: &Loaded, elem: &str, path: &str) -> Outcome {
    let g = l.elem(elem)?;
    let graph = l.aut.graph();
    let image = match l.literal(path)? {
        AnyPath::Finite(p) => l.aut.act(&g, &p).map_err(Failure::input)?.display(graph).to_string(),
        AnyPath::Right(y) => act_infinite(&l.aut, &g, &y, l.bounds).map_err(dyn_err)?.display(graph).to_string(),
        _ => return Err(Failure::Input("act takes a finite or right-infinite path".into())),
    };
    Ok(Report::done().line(&image).field("image", image))
}

fn restrict(l: &Loaded, elem: &str, path: &str) -> Outcome {
    let g = l.elem(elem)?;
    let AnyPath::Finite(p) = l.literal(path)? else {
        return Err(Failure::Input("restrict takes a finite path".into()));
    };
    let (image, r) = l.aut.act_restrict(&g, &p).map_err(Failure::input)?;
    let word = l.name(&r);
    let mut report = Report::done()
        .field("image", image.display(l.aut.graph()).to_string())
        .field("restriction", word.clone());
    // canonical nucleus name when the restriction lies in the nucleus
    let class = Nucleus::compute(&l.aut, l.bounds)
        .ok()
        .and_then(|n| n.classify(&r).ok().flatten().map(|s| n.machine().name(s)));
    report = match &class {
        Some(c) if *c != word => report.line(format!("{word} = {c}")),
        _ => report.line(&word),
    };
    Ok(report.field("class", class))
}

fn equal(l: &Loaded, g: &str, h: &str) -> Outcome {
    let (g, h) = (l.elem(g)?, l.elem(h)?);
    let eq = l.aut.equal_with(&g, &h, l.bounds).map_err(Failure::bound)?;
    Ok(Report::verdict(eq).line(if eq { "equal" } else { "not equal" }))
}

fn nucleus(l: &Loaded, format: NucleusFormat) -> Outcome {
    let n = l.nucleus()?;
    let names = n.names();
    let report = Report::done()
        .field("size", names.len())
        .field("elements", names.clone())
        .field("rounds", n.rounds())
        .field("machine", serde_json::to_value(n.moore_diagram()).expect("plain struct"));
    Ok(match format {
        NucleusFormat::Text => report
            .line(format!("nucleus: {} elements", names.len()))
            .lines(names.iter().map(|s| format!("  {s}"))),
        NucleusFormat::Dot => report.raw(&n.machine().to_dot()),
    })
}

fn rk(l: &Loaded, k: usize) -> Outcome {
    if k == 0 {
        return Err(Failure::Input("k must be at least 1".into()));
    }
    let n = l.nucleus()?;
    let r = n.r_k(k).map_err(|e| match e {
        NucleusError::NotContractingWithinBound(_) | NucleusError::Diverged { .. } => Failure::bound(e),
    })?;
    Ok(Report::done().line(format!("R_{k} = {r}")).field("k", k).field("r", r))
}

fn fixed_report(l: &Loaded, holds: Result<(), FixedWitness>, yes: &str, no: &str) -> Report {
    match holds {
        Ok(()) => Report::verdict(true).line(yes),
        Err(w) => {
            let g = l.aut.graph();
            let el = l.name(&w.element);
            let path = w.path.display(g).to_string();
            let escape = w.escape.as_ref().map(|p| p.display(g).to_string());
            let mut r = Report::verdict(false)
                .line(format!("{no}: {el} fixes {path}"))
                .field("element", el)
                .field("path", path);
            if let Some(e) = &escape {
                r = r.line(format!("  and reaches a unit along {e}"));
            }
            r.field("escape", escape)
        }
    }
}

fn check(l: &Loaded, property: Property, depth: usize, level: usize) -> Outcome {
    match property {
        Property::Regular => {
            let n = l.nucleus()?;
            Ok(fixed_report(l, is_regular(&n), "regular", "not regular"))
        }
        Property::Hausdorff => {
            let n = l.nucleus()?;
            Ok(fixed_report(l, is_hausdorff(&n), "hausdorff", "not hausdorff"))
        }
        Property::Contracting => {
            let n = l.nucleus()?;
            Ok(Report::verdict(true)
                .line(format!("contracting, nucleus of {} elements", n.len()))
                .field("nucleus_size", n.len()))
        }
        Property::LevelTransitive => {
            if level == 0 {
                return Err(Failure::Input("level must be at least 1".into()));
            }
            let bad = (1..=level).find(|&k| !level_transitive(&l.aut, k));
            Ok(match bad {
                None => Report::verdict(true)
                    .line(format!("transitive on levels 1..={level}"))
                    .field("levels", level),
                Some(k) => Report::verdict(false)
                    .line(format!("not transitive on level {k}"))
                    .field("level", k),
            })
        }
        Property::Recurrent => match check_recurrent(&l.aut, depth, l.bounds) {
            Ok(Recurrence::Recurrent) => Ok(Report::verdict(true).line("recurrent").field("depth", depth)),
            Ok(Recurrence::Inconclusive {
                depth,
                edge,
                image,
                restriction,
            }) => Err(Failure::Inconclusive(format!(
                "no word of length <= {depth} maps {edge} to {image} with restriction {restriction}"
            ))),
            Err(DynamicsError::NotStronglyConnected) => {
                Ok(Report::verdict(false).line("not recurrent: the graph is not strongly connected"))
            }
            Err(e) => Err(dyn_err(e)),
        },
    }
}

fn ae(l: &Loaded, x: &str, y: &str) -> Outcome {
    let n = l.nucleus()?;
    match (l.literal(x)?, l.literal(y)?) {
        (AnyPath::Left(x), AnyPath::Left(y)) => {
            let w = ae_witness(&n, &x, &y);
            let m = n.machine();
            let mut r = Report::verdict(w.is_some()).line(if w.is_some() { "equivalent" } else { "not equivalent" });
            if let Some(w) = w {
                let cycle: Vec<String> = w.cycle.iter().map(|&s| m.name(s)).collect();
                let tail: Vec<String> = w.tail.iter().map(|&s| m.name(s)).collect();
                r = r
                    .line(if tail.is_empty() {
                        format!("run: ({})^inf", cycle.join(", "))
                    } else {
                        format!("run: ({})^inf . {}", cycle.join(", "), tail.join(", "))
                    })
                    .field("run", json!({"cycle": cycle, "tail": tail}));
            }
            Ok(r)
        }
        (AnyPath::Bi(x), AnyPath::Bi(y)) => {
            let eq = ae_equivalent_bi(&n, &x, &y);
            Ok(Report::verdict(eq).line(if eq { "equivalent" } else { "not equivalent" }))
        }
        _ => Err(Failure::Input("ae takes two left-infinite or two bi-infinite paths".into())),
    }
}

fn left(l: &Loaded, text: &str) -> Result<selfsim::LeftInfinitePath, Failure> {
    let g = l.aut.graph();
    PathLiteral::parse(g, text)
        .and_then(|p| p.left_infinite(g))
        .map_err(|e| Failure::Input(format!("`{text}`: {e}")))
}

fn bi(l: &Loaded, text: &str) -> Result<selfsim::BiInfinitePath, Failure> {
    let g = l.aut.graph();
    PathLiteral::parse(g, text)
        .and_then(|p| p.bi_infinite(g))
        .map_err(|e| Failure::Input(format!("`{text}`: {e}")))
}

fn class(l: &Loaded, x: &str) -> Outcome {
    let x = left(l, x)?;
    let n = l.nucleus()?;
    let g = l.aut.graph();
    let members: Vec<String> = ae_class(&n, &x).iter().map(|y| y.display(g).to_string()).collect();
    Ok(Report::done()
        .lines(&members)
        .field("size", members.len())
        .field("members", members))
}

fn shift(l: &Loaded, x: &str) -> Outcome {
    let x = left(l, x)?;
    let s = shift_class(&x).display(l.aut.graph()).to_string();
    Ok(Report::done().line(&s).field("shift", s))
}

fn germ_eq(l: &Loaded, a: &str, b: &str) -> Outcome {
    let a = Germ::parse(&l.aut, a, l.bounds).map_err(dyn_err)?;
    let b = Germ::parse(&l.aut, b, l.bounds).map_err(dyn_err)?;
    let eq = germ_equal(&l.aut, &a, &b, l.bounds).map_err(dyn_err)?;
    Ok(Report::verdict(eq).line(if eq { "equal" } else { "not equal" }))
}

fn stable(l: &Loaded, x: &str, y: &str) -> Outcome {
    let (x, y) = (bi(l, x)?, bi(l, y)?);
    let n = l.nucleus()?;
    Ok(match stable_witness(&n, &x, &y) {
        Some(m) => Report::verdict(true)
            .line(format!("stably equivalent; left halves agree from cut -{m}"))
            .field("cut", m),
        None => Report::verdict(false).line("not stably equivalent"),
    })
}

fn unstable(l: &Loaded, x: &str, y: &str) -> Outcome {
    let (x, y) = (bi(l, x)?, bi(l, y)?);
    let n = l.nucleus()?;
    Ok(match unstable_equivalent(&n, &x, &y).map_err(dyn_err)? {
        Some(w) => {
            let el = l.name(&w.element);
            Report::verdict(true)
                .line(format!("unstably equivalent: {el} carries x past {} onto y", w.cut))
                .field("cut", w.cut)
                .field("element", el)
        }
        None => Report::verdict(false).line("not unstably equivalent"),
    })
}

fn edge_line(gamma: &SchreierGraph, e: &selfsim::schreier::SchreierEdge) -> String {
    let names = gamma.vertex_names();
    format!("{}: {} - {}", gamma.label(e.label), names[e.from], names[e.to])
}

fn schreier(l: &Loaded, level: usize, format: GraphFormat, labels: LabelSet, project: bool) -> Outcome {
    let gens = match labels {
        LabelSet::Standard => Generators::standard(&l.nucleus()?),
        LabelSet::Letters => Generators::letters(&l.aut, l.bounds),
    }
    .map_err(Failure::bound)?;
    let gamma = gens.level(level);
    let mut report = Report::done()
        .field("level", level)
        .field("graph", gamma.to_json())
        .field("connected", gamma.is_connected())
        .field("cycle", gamma.is_cycle());
    report = match format {
        GraphFormat::Dot => report.raw(&gamma.to_dot()),
        GraphFormat::Json => report.raw(&format!("{}\n", gamma.to_json())),
        GraphFormat::Text => report
            .line(format!(
                "level {level}: {} vertices, {} edges, connected: {}, cycle: {}",
                gamma.vertices().len(),
                gamma.edges().len(),
                gamma.is_connected(),
                gamma.is_cycle()
            ))
            .lines(gamma.edges().iter().map(|e| edge_line(&gamma, e))),
    };
    if project {
        if level == 0 {
            return Err(Failure::Input("level 0 has no level below".into()));
        }
        let lower = gens.level(level - 1);
        let psi = gens.project(&gamma, &lower);
        let pairs: Vec<String> = gamma
            .edges()
            .iter()
            .zip(&psi.edge_map)
            .map(|(e, f)| format!("{} -> {}", edge_line(&gamma, e), edge_line(&lower, f)))
            .collect();
        if format == GraphFormat::Text {
            report = report.line("projection:").lines(pairs.iter().map(|p| format!("  {p}")));
        }
        report = report.field("projection", pairs);
    }
    Ok(report)
}

fn matrix(arg: &str) -> Result<IntMatrix, Failure> {
    let p = FsPath::new(arg);
    let text = if p.is_file() { read(p)? } else { arg.to_string() };
    text.parse().map_err(Failure::input)
}

fn groups_json(k: &selfsim::ktheory::KGroups) -> Value {
    serde_json::to_value(k).expect("plain struct")
}

fn katsura(a: &str, b: &str, out: Option<&FsPath>) -> Outcome {
    let (a, b) = (matrix(a)?, matrix(b)?);
    let (graph, gens) = katsura_system(&a, &b).map_err(Failure::input)?;
    let aut = Automaton::new(graph, gens).map_err(Failure::input)?;
    let spec = SpecFile::from_automaton(&aut);
    let text = selfsim::format_spec(&spec);
    let k = katsura_ktheory(&a, &b).map_err(Failure::input)?;
    let mut report = Report::done();
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        }
        None => report = report.raw(&text),
    }
    Ok(report
        .line(format!("# K0 = {}", k.k0))
        .line(format!("# K1 = {}", k.k1))
        .field("spec", text)
        .field("K0", groups_json(&k)["K0"].clone())
        .field("K1", groups_json(&k)["K1"].clone()))
}

fn snf(m: &str) -> Outcome {
    let m = matrix(m)?;
    let s = smith_normal_form(&m);
    let verified = s.verify(&m);
    let diag: Vec<String> = s.d.diagonal().iter().map(|x| x.to_string()).collect();
    let report = Report::done()
        .line(format!("D = {}", s.d))
        .line(format!("U = {}", s.u))
        .line(format!("V = {}", s.v))
        .line(format!("invariant factors: {}", diag.join(", ")))
        .field("D", s.d.to_string())
        .field("U", s.u.to_string())
        .field("V", s.v.to_string())
        .field("diagonal", diag)
        .field("verified", verified);
    if verified {
        Ok(report)
    } else {
        Err(Failure::Input("internal check U·M·V = D failed".into()))
    }
}

fn ktheory(a: &str, b: &str) -> Outcome {
    let (a, b) = (matrix(a)?, matrix(b)?);
    let k = katsura_ktheory(&a, &b).map_err(Failure::input)?;
    let j = groups_json(&k);
    Ok(Report::done()
        .line(format!("K0 = {}", k.k0))
        .line(format!("K1 = {}", k.k1))
        .field("K0", j["K0"].clone())
        .field("K1", j["K1"].clone()))
}
