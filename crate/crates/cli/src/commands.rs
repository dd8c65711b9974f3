use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use tropdet::birkhoff_positivity::{
    birkhoff_edge_positive, cartoon_has_marked_triangle, cartoon_of_edge, orthant_coloring_with,
    positive_prevariety_member_with, signed_prevariety_member_with, verify_cut_property, PositivityCertificate,
};
use tropdet::dot::{cartoon_dot, label_dot, orthant_dot, tree_dot};
use tropdet::label_graphs::{
    bipartite_complement, label_degree_check, label_graph_with, label_positivity_necessary, rank2_label_is_positive,
};
use tropdet::plane_toolkit::{
    certify_nonpositive_rank3, detect_starship, jmap_from_faces, marked_faces, tree_arrangement, ColumnPlacement,
    FaceMarking, Starship, TropicalPlaneDescription,
};
use tropdet::rank_engine::{prevariety_member_with, rank_report_with};
use tropdet::tree_space::{
    bicolored_reading, bicolored_tree_from_matrix, first_four_point_violation, plucker_from_tree, project_plucker,
    tree_from_plucker, BicoloredTree, Bicoloring, PlueckerVector,
};
use tropdet::{Budget, Error, Permutation, Rational, SignPattern, TropicalMatrix};

use crate::args::{ArrangementArgs, Command, OrthantArgs, PluckerCommand};
use crate::error::{CliError, CliResult};
use crate::report::{Report, ReportBuilder};

/// Largest `n` for `orthants --all` (2^(n*n) patterns).
const MAX_ALL_PATTERNS_N: usize = 4;

pub struct Context {
    pub budget: Budget,
    pub out_dir: Option<PathBuf>,
    /// Base for relative input paths.
    pub base: Option<PathBuf>,
}

impl Context {
    fn resolve(&self, p: &Path) -> PathBuf {
        match &self.base {
            Some(b) if p.is_relative() => b.join(p),
            _ => p.to_path_buf(),
        }
    }
}

pub fn run(cmd: &Command, ctx: &Context) -> CliResult<Report> {
    let echo = serde_json::to_value(cmd).expect("commands serialize");
    let mut b = ReportBuilder::new(echo, ctx.out_dir.clone());
    match cmd {
        Command::Rank { matrix } => rank(&mut b, ctx, matrix)?,
        Command::Positivity { matrix, rank, signs } => positivity(&mut b, ctx, matrix, *rank, signs.as_deref())?,
        Command::Cartoon { sigma, pi, n } => cartoon(&mut b, sigma, pi, *n)?,
        Command::Orthants(args) => orthants(&mut b, ctx, args)?,
        Command::Tree { matrix } => tree(&mut b, ctx, matrix)?,
        Command::Label { matrix, rank } => label(&mut b, ctx, matrix, *rank)?,
        Command::Plucker(p) => plucker(&mut b, ctx, p)?,
        Command::Arrangement(args) => arrangement(&mut b, ctx, args)?,
        Command::VerifyPaper { .. } => return Err(CliError::Usage("verify-paper cannot be nested".into())),
    }
    Ok(b.finish())
}

fn read_matrix(b: &mut ReportBuilder, ctx: &Context, p: &Path) -> CliResult<TropicalMatrix> {
    Ok(TropicalMatrix::from_json_str(&b.read(&ctx.resolve(p))?)?)
}

fn rank(b: &mut ReportBuilder, ctx: &Context, path: &Path) -> CliResult<()> {
    let a = read_matrix(b, ctx, path)?;
    let r = rank_report_with(&a, &ctx.budget)?;
    b.verdict("tropical_rank", r.tropical_rank);
    b.verdict("kapranov_lower", r.kapranov_lower);
    b.verdict("kapranov_upper", r.kapranov_upper);
    b.verdict("kapranov_exact", r.kapranov_exact);
    b.verdict("barvinok_rank", r.barvinok_rank);
    if let Some(w) = &r.witness {
        b.certificate("barvinok_factors", json!({ "x": w.x, "y": w.y }));
    }
    // A nonsingular minor of size t certifies tropical rank >= t.
    if r.tropical_rank >= 2 {
        let v = prevariety_member_with(&a, r.tropical_rank - 1, &ctx.budget)?;
        b.certificate("nonsingular_minor", v.witness);
    }
    Ok(())
}

/// Records a certificate, or the nonsingular minor when `a` is outside the prevariety.
fn record_positivity(b: &mut ReportBuilder, outcome: tropdet::Result<PositivityCertificate>) -> CliResult<()> {
    match outcome {
        Ok(cert) => {
            b.verdict("in_prevariety", true);
            b.verdict("verdict", cert.verdict);
            b.certificate("certificate", cert);
        }
        Err(Error::NotInPrevariety(ij)) => {
            b.verdict("in_prevariety", false);
            b.verdict("verdict", "not_in_prevariety");
            b.certificate("nonsingular_minor", ij);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn positivity(b: &mut ReportBuilder, ctx: &Context, path: &Path, r: usize, signs: Option<&Path>) -> CliResult<()> {
    let a = read_matrix(b, ctx, path)?;
    let outcome = match signs {
        Some(sp) => {
            let s = SignPattern::from_json_str(&b.read(&ctx.resolve(sp))?)?;
            b.verdict("orthant", "signed");
            signed_prevariety_member_with(&a, &s, r, &ctx.budget)
        }
        None => {
            b.verdict("orthant", "positive");
            positive_prevariety_member_with(&a, r, &ctx.budget)
        }
    };
    record_positivity(b, outcome)
}

fn cartoon(b: &mut ReportBuilder, sigma: &str, pi: &str, n: usize) -> CliResult<()> {
    let s = Permutation::parse(sigma, n)?;
    let p = Permutation::parse(pi, n)?;
    let positive = birkhoff_edge_positive(&s, &p)?;
    let c = cartoon_of_edge(&s, &p)?;
    let triangle = cartoon_has_marked_triangle(&c);
    b.verdict("edge_positive", positive);
    b.verdict("marked_triangle", triangle);
    b.verdict("triangle_criterion_agrees", triangle != positive);
    b.certificate("sigma", s.to_string());
    b.certificate("pi", p.to_string());
    b.certificate("quotient", s.compose(&p.inverse())?.to_string());
    b.certificate("cartoon", &c);
    b.artifact("cartoon.dot", &cartoon_dot(&c))
}

fn orthants(b: &mut ReportBuilder, ctx: &Context, args: &OrthantArgs) -> CliResult<()> {
    let n = args.n;
    if let Some(path) = &args.source.signs {
        let s = SignPattern::from_json_str(&b.read(&ctx.resolve(path))?)?;
        if (s.rows(), s.cols()) != (n, n) {
            return Err(Error::Dimension(format!("{}x{} sign pattern for n = {n}", s.rows(), s.cols())).into());
        }
        let oc = orthant_coloring_with(n, &s, &ctx.budget)?;
        let cut = verify_cut_property(&oc);
        b.verdict("cut_property", cut.holds);
        b.verdict("red_components", cut.components.len());
        let comps: Vec<Vec<String>> =
            cut.components.iter().map(|c| c.iter().map(|&v| oc.vertices[v].to_string()).collect()).collect();
        b.certificate("components", comps);
        b.certificate("green_edges", oc.green_edges.len());
        b.certificate("red_edges", oc.red_edges.len());
        return b.artifact("orthants.dot", &orthant_dot(&oc));
    }
    if n > MAX_ALL_PATTERNS_N {
        return Err(Error::Budget(format!("--all enumerates 2^(n*n) patterns; n <= {MAX_ALL_PATTERNS_N}")).into());
    }
    let counts: Vec<usize> = (0..1u64 << (n * n))
        .into_par_iter()
        .map(|mask| {
            let oc = orthant_coloring_with(n, &SignPattern::from_mask(n, n, mask), &ctx.budget)?;
            Ok(verify_cut_property(&oc).components.len())
        })
        .collect::<tropdet::Result<_>>()?;
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &counts {
        *histogram.entry(c).or_default() += 1;
    }
    let failing: Vec<usize> = (0..counts.len()).filter(|&m| counts[m] != 2).collect();
    b.verdict("patterns", counts.len());
    b.verdict("cut_property_holds", counts.len() - failing.len());
    b.verdict("cut_property_fails", failing.len());
    b.certificate("component_histogram", histogram);
    let examples: Vec<SignPattern> =
        failing.iter().take(5).map(|&m| SignPattern::from_mask(n, n, m as u64)).collect();
    b.certificate("failing_examples", examples);
    Ok(())
}

fn tree(b: &mut ReportBuilder, ctx: &Context, path: &Path) -> CliResult<()> {
    let a = read_matrix(b, ctx, path)?;
    let t = bicolored_tree_from_matrix(&a)?;
    b.verdict("caterpillar", t.is_caterpillar());
    b.verdict("maximal", t.is_maximal());
    b.verdict("splits", t.splits.len());
    b.certificate("tree", t.to_json());
    b.artifact("tree.json", &pretty(&t.to_json()))?;
    b.artifact("tree.dot", &tree_dot(&t))
}

fn label(b: &mut ReportBuilder, ctx: &Context, path: &Path, r: usize) -> CliResult<()> {
    let a = read_matrix(b, ctx, path)?;
    let g = match label_graph_with(&a, r, &ctx.budget) {
        Ok(g) => g,
        Err(Error::NotInPrevariety(ij)) => {
            b.verdict("in_prevariety", false);
            b.certificate("nonsingular_minor", ij);
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    b.verdict("in_prevariety", true);
    b.verdict("degree_check", label_degree_check(&g, r));
    if r < a.rows().min(a.cols()) {
        let cycles = label_positivity_necessary(&g, r)?;
        b.verdict("cycle_condition", cycles.holds);
        b.certificate("cycle_violation", cycles.violation);
    }
    if r == 2 {
        b.verdict("rank2_positive_shape", rank2_label_is_positive(&g));
    }
    b.certificate("label", &g);
    b.certificate("complement", bipartite_complement(&g));
    b.artifact("label.dot", &label_dot(&g))
}

fn read_plucker(b: &mut ReportBuilder, ctx: &Context, p: &Path) -> CliResult<PlueckerVector> {
    Ok(PlueckerVector::from_json_str(&b.read(&ctx.resolve(p))?)?)
}

fn phylo_json(t: &tropdet::tree_space::PhyloTree, lengths: &[Rational]) -> Value {
    let splits: Vec<Value> = t
        .splits
        .iter()
        .map(|(s, w)| json!({ "part": s.part_indices().iter().map(|x| x + 1).collect::<Vec<_>>(), "weight": w }))
        .collect();
    json!({ "m": t.m, "splits": splits, "leaf_lengths": lengths })
}

fn plucker(b: &mut ReportBuilder, ctx: &Context, cmd: &PluckerCommand) -> CliResult<()> {
    match cmd {
        PluckerCommand::Check { plucker } => {
            let p = read_plucker(b, ctx, plucker)?;
            let violation = first_four_point_violation(&p);
            b.verdict("four_point", violation.is_none());
            match violation {
                Some(q) => b.certificate("violation", q.map(|x| x + 1)),
                None => {
                    let (t, lengths) = tree_from_plucker(&p)?;
                    b.certificate("tree", phylo_json(&t, &lengths));
                }
            }
        }
        PluckerCommand::Project { plucker, red } => {
            let p = read_plucker(b, ctx, plucker)?;
            if red.iter().any(|&i| i == 0 || i > p.m()) {
                return Err(Error::IndexOutOfRange(format!("red leaves must lie in 1..={}", p.m())).into());
            }
            let zero_based: Vec<usize> = red.iter().map(|i| i - 1).collect();
            let coloring = Bicoloring::new(p.m(), &zero_based)?;
            // The projection is only defined on the fan of an admissible tree.
            if let Some(q) = first_four_point_violation(&p) {
                b.verdict("four_point", false);
                b.certificate("violation", q.map(|x| x + 1));
                return Ok(());
            }
            b.verdict("four_point", true);
            let (t, _) = tree_from_plucker(&p)?;
            let admissible = coloring.is_admissible_for(&t)?;
            b.verdict("admissible", admissible);
            if !admissible {
                return Ok(());
            }
            let a = project_plucker(&p, &coloring)?;
            let reading = bicolored_reading(&t, &coloring)?;
            b.verdict("round_trip", bicolored_tree_from_matrix(&a)? == reading);
            b.certificate("matrix", &a);
            b.certificate("bicolored_tree", reading.to_json());
            b.artifact("matrix.json", &pretty(&serde_json::to_value(&a).expect("matrix serializes")))?;
        }
        PluckerCommand::FromTree { tree } => {
            let t = BicoloredTree::from_json_str(&b.read(&ctx.resolve(tree))?)?;
            let m = t.d + t.n;
            let p = plucker_from_tree(&t.as_phylo(), &vec![Rational::ZERO; m])?;
            let coloring = Bicoloring::new(m, &(0..t.d).collect::<Vec<_>>())?;
            let back = bicolored_tree_from_matrix(&project_plucker(&p, &coloring)?)?;
            b.verdict("four_point", first_four_point_violation(&p).is_none());
            b.verdict("round_trip", back == t);
            b.certificate("plucker", p.to_json());
            b.artifact("plucker.json", &pretty(&p.to_json()))?;
        }
    }
    Ok(())
}

fn marking_json(m: &FaceMarking) -> Value {
    let rows: Vec<Value> = m
        .placements
        .iter()
        .enumerate()
        .map(|(j, p)| match p {
            ColumnPlacement::Interior(f) => json!({ "column": j + 1, "kind": "interior", "face": f + 1 }),
            ColumnPlacement::Boundary(f) => json!({ "column": j + 1, "kind": "boundary", "face": f + 1 }),
            ColumnPlacement::Off => json!({ "column": j + 1, "kind": "off" }),
        })
        .collect();
    Value::Array(rows)
}

fn starship_json(s: &Starship) -> Value {
    json!({
        "faces": s.faces.map(|f| f + 1),
        "columns": s.columns.map(|j| j + 1),
        "vertex": s.vertex,
        "ray": s.ray,
    })
}

fn one_based_lists(v: &[Vec<usize>]) -> Vec<Vec<usize>> {
    v.iter().map(|l| l.iter().map(|x| x + 1).collect()).collect()
}

fn arrangement(b: &mut ReportBuilder, ctx: &Context, args: &ArrangementArgs) -> CliResult<()> {
    let a = read_matrix(b, ctx, &args.matrix)?;
    let jmap = if let Some(pp) = &args.source.plane {
        let e = TropicalPlaneDescription::from_json_str(&b.read(&ctx.resolve(pp))?)?;
        let marking = marked_faces(&a, &e)?;
        b.verdict("generic", marking.is_generic());
        b.certificate("placements", marking_json(&marking));
        let starship = detect_starship(&marking, &e)?;
        b.verdict("starship", starship.is_some());
        if let Some(s) = &starship {
            b.certificate("starship", starship_json(s));
        }
        if a.rows().min(a.cols()) >= 3 {
            match certify_nonpositive_rank3(&a, Some(&e)) {
                Ok(cert) => {
                    b.verdict("rank3_verdict", cert.certificate.verdict);
                    if let Some(p) = &cert.starship {
                        b.verdict("starship_consistent", p.consistent);
                        b.certificate("starship_predicted_minors", &p.predicted);
                    }
                    b.certificate("rank3_certificate", &cert.certificate);
                }
                Err(Error::NotInPrevariety(ij)) => {
                    b.verdict("rank3_verdict", "not_in_prevariety");
                    b.certificate("nonsingular_minor", ij);
                }
                Err(e) => return Err(e.into()),
            }
        }
        if !marking.is_generic() {
            return Ok(());
        }
        jmap_from_faces(&marking, &e)?
    } else {
        let path = args.source.jmap.as_ref().expect("clap enforces one source");
        let raw: Vec<Vec<usize>> =
            serde_json::from_str(&b.read(&ctx.resolve(path))?).map_err(|e| Error::Parse(format!("jmap: {e}")))?;
        if raw.iter().flatten().any(|&j| j == 0) {
            return Err(Error::Parse("jmap columns are 1-based".into()).into());
        }
        raw.iter().map(|l| l.iter().map(|j| j - 1).collect()).collect()
    };
    let trees = tree_arrangement(&a, &jmap)?;
    b.certificate("jmap", one_based_lists(&jmap));
    b.verdict("trees", trees.len());
    b.verdict("all_caterpillars", trees.iter().all(|t| t.caterpillar));
    for t in &trees {
        b.artifact(&format!("arrangement_{}.dot", t.facet + 1), &tree_dot(&t.tree))?;
    }
    b.certificate("arrangement", &trees);
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}
