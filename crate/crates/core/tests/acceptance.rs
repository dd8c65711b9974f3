//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Built with `harness = false` so the lines are printed on every run. The
//! process exits non-zero when a criterion fails, except for failures
//! recorded as known and analysed (see `KnownFail`): the scans behind
//! criteria 2 and 3 find counterexamples to the stated claims, and the exact
//! shape of those counterexamples is pinned below.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropdet::birkhoff_positivity::{
    birkhoff_edge_positive, cartoon_has_marked_triangle, cartoon_of_edge, minor_positivity, orthant_coloring,
    plucker_linear_forms, positive_prevariety_member, verify_cut_property, violating_minors, MinorStatus,
};
use tropdet::label_graphs::{
    bipartite_complement, label_degree_check, label_graph, label_positivity_necessary, rank2_label_is_positive,
    BipartiteLabel,
};
use tropdet::plane_toolkit::{
    certify_nonpositive_rank3, detect_starship, jmap_from_faces, marked_faces, tree_arrangement, PlaneFace,
    TropicalPlaneDescription,
};
use tropdet::random::{
    random_bicolored_tree, random_matrix, random_product, random_snowflake, rational, shift_randomly,
};
use tropdet::rank_engine::{
    barvinok_rank, barvinok_rank_le, kapranov_status, min_plus_product, minors_form_tropical_basis,
    prevariety_member, rank_report, tropical_rank, KapranovStatus,
};
use tropdet::semiring_core::all_permutations;
use tropdet::tree_space::{
    all_binary_topologies, bicolored_tree_from_matrix, cherry_count, count_bicolorings, count_bicolorings_brute_force,
    four_point_check, plucker_from_tree, project_plucker, tree_from_plucker, Bicoloring, PhyloTree, Split,
};
use tropdet::{Budget, MinorIndex, Permutation, Rational, SignPattern, TropicalMatrix};

// Pinned limits. All comparisons are exact, so there is no numeric tolerance.
const C1_TIME: Duration = Duration::from_secs(1);
const C2_TIME: Duration = Duration::from_secs(30);
const C6_TIME_EACH: Duration = Duration::from_secs(1);
const C3_RANDOM_PATTERNS: usize = 500;
const C4_INSTANCES: usize = 1000;
const C5_INSTANCES: usize = 500;
const C8_INSTANCES: usize = 1000;
const C10_INSTANCES: usize = 300;
const C10_SNOWFLAKES: usize = 100;

/// Non-positive, triangle-free edges at n = 5 found by the scan: exactly the
/// edges whose quotient is a 5-cycle (120 * 24 / 2).
const C2_KNOWN_COUNTEREXAMPLES: usize = 1440;

/// Sign patterns at n = 4 whose red subgraph has more than two components,
/// counted exhaustively over all 2^16 patterns (each has five).
const C3_KNOWN_N4_FAILURES: usize = 768;

enum Outcome {
    Pass(String),
    Fail(String),
    /// Failure matching the recorded analysis exactly.
    KnownFail(String),
}

type Check = Result<String, String>;

fn lib<T>(r: tropdet::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn int(v: i64) -> Rational {
    Rational::from_int(v)
}

fn m<R: AsRef<[i64]>>(rows: &[R]) -> TropicalMatrix {
    TropicalMatrix::from_ints(rows)
}

/// Single-cycle test written directly on images.
fn is_single_cycle(q: &Permutation) -> bool {
    let n = q.len();
    let moved: Vec<usize> = (0..n).filter(|&i| q.apply(i) != i).collect();
    let Some(&start) = moved.first() else { return false };
    let mut len = 1;
    let mut x = q.apply(start);
    while x != start {
        len += 1;
        x = q.apply(x);
    }
    len == moved.len()
}

fn edges_by_definition(n: usize) -> Vec<(Permutation, Permutation)> {
    let perms: Vec<Permutation> = all_permutations(n).collect();
    let mut out = Vec::new();
    for (a, s) in perms.iter().enumerate() {
        for p in &perms[a + 1..] {
            if is_single_cycle(&s.compose(&p.inverse()).unwrap()) {
                out.push((s.clone(), p.clone()));
            }
        }
    }
    out
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut counts = Vec::new();
    for (n, expected) in [(3usize, 15usize), (4, 240)] {
        let edges = edges_by_definition(n);
        ensure!(edges.len() == expected, "n={n}: {} edges, expected {expected}", edges.len());
        for (s, p) in &edges {
            let positive = lib(birkhoff_edge_positive(s, p))?;
            let triangle = cartoon_has_marked_triangle(&lib(cartoon_of_edge(s, p))?);
            ensure!(triangle == !positive, "n={n}: edge ({s}, {p}) positive={positive} triangle={triangle}");
        }
        counts.push(edges.len());
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < C1_TIME, "took {elapsed:?}");
    Ok(format!("{} + {} edges, zero exceptions, {elapsed:.2?}", counts[0], counts[1]))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let id = Permutation::identity(5);
    let t45 = Permutation::parse("(45)", 5).unwrap();
    let positive = birkhoff_edge_positive(&id, &t45).unwrap();
    let triangle = cartoon_has_marked_triangle(&cartoon_of_edge(&id, &t45).unwrap());
    if !(positive && triangle) {
        return Outcome::Fail(format!("edge (id,(45)): positive={positive} triangle={triangle}"));
    }

    let edges = edges_by_definition(5);
    let mut one_sided = 0;
    let mut other_side = Vec::new();
    let mut quotient_lengths = BTreeSet::new();
    for (s, p) in &edges {
        let pos = birkhoff_edge_positive(s, p).unwrap();
        let tri = cartoon_has_marked_triangle(&cartoon_of_edge(s, p).unwrap());
        if pos && tri {
            one_sided += 1;
        }
        if !pos && !tri {
            let q = s.compose(&p.inverse()).unwrap();
            quotient_lengths.insert((0..5).filter(|&i| q.apply(i) != i).count());
            other_side.push((s.clone(), p.clone()));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= C2_TIME {
        return Outcome::Fail(format!("took {elapsed:?}"));
    }
    if other_side.is_empty() {
        return Outcome::Pass(format!(
            "(id,(45)) positive with marked triangle; {one_sided} one-sided failures, none the other way, {elapsed:.2?}"
        ));
    }
    let detail = format!(
        "(id,(45)) positive with marked triangle holds; but the scan of {} edges finds {} non-positive \
         triangle-free edges (quotient lengths {:?}, first ({}, {})), {elapsed:.2?}",
        edges.len(),
        other_side.len(),
        quotient_lengths,
        other_side[0].0,
        other_side[0].1
    );
    if other_side.len() == C2_KNOWN_COUNTEREXAMPLES && quotient_lengths == BTreeSet::from([5]) {
        Outcome::KnownFail(detail)
    } else {
        Outcome::Fail(detail)
    }
}

/// Checks one pattern and returns the number of red components. Green edges
/// must be exactly the edges between the two classes of `sgn(σ) Π s[i][σ(i)]`,
/// computed here from scratch.
fn cut_check(n: usize, s: &SignPattern, expected_edges: usize) -> Result<usize, String> {
    let oc = lib(orthant_coloring(n, s))?;
    let total = oc.green_edges.len() + oc.red_edges.len();
    ensure!(total == expected_edges, "n={n}: {total} edges");
    let class: Vec<i8> =
        oc.vertices.iter().map(|p| (0..n).fold(p.sign(), |acc, i| acc * s.get(i, p.apply(i)))).collect();
    for &(a, b) in &oc.green_edges {
        ensure!(class[a] != class[b], "n={n}: green edge inside a sign class");
    }
    for &(a, b) in &oc.red_edges {
        ensure!(class[a] == class[b], "n={n}: red edge across sign classes");
    }
    let report = verify_cut_property(&oc);
    for comp in &report.components {
        ensure!(comp.iter().all(|&v| class[v] == class[comp[0]]), "n={n}: red component mixes classes");
    }
    ensure!(report.holds == (report.components.len() == 2), "n={n}: verdict disagrees with the components");
    Ok(report.components.len())
}

fn criterion_3() -> Outcome {
    match criterion_3_scan() {
        Err(e) => Outcome::Fail(e),
        Ok((n4_bad, n4_shapes, n5_bad)) => {
            let detail = format!(
                "n=3: all 512 patterns hold; n=4: {n4_bad} of 65536 patterns have red component counts {n4_shapes:?}; \
                 n=5: {n5_bad} of {C3_RANDOM_PATTERNS} random patterns fail; green edges always equal the sign-class \
                 cut; s=+1 gives A_n and its coset"
            );
            if n4_bad == 0 && n5_bad == 0 {
                Outcome::Pass(detail)
            } else if n4_bad == C3_KNOWN_N4_FAILURES && n4_shapes == BTreeSet::from([5]) {
                Outcome::KnownFail(detail)
            } else {
                Outcome::Fail(detail)
            }
        }
    }
}

fn criterion_3_scan() -> Result<(usize, BTreeSet<usize>, usize), String> {
    for mask in 0..512u64 {
        let c = cut_check(3, &SignPattern::from_mask(3, 3, mask), 15)?;
        ensure!(c == 2, "n=3: {c} red components for mask {mask}");
    }
    // Exhaustive at n = 4 covers the random sample asked for there.
    let (mut n4_bad, mut n4_shapes) = (0, BTreeSet::new());
    for mask in 0..1u64 << 16 {
        let c = cut_check(4, &SignPattern::from_mask(4, 4, mask), 240)?;
        if c != 2 {
            n4_bad += 1;
            n4_shapes.insert(c);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut n5_bad = 0;
    for _ in 0..C3_RANDOM_PATTERNS {
        let mask = rng.gen_range(0..1u64 << 25);
        if cut_check(5, &SignPattern::from_mask(5, 5, mask), 5040)? != 2 {
            n5_bad += 1;
        }
    }
    for n in 3..=5 {
        let oc = lib(orthant_coloring(n, &SignPattern::all_positive(n, n)))?;
        let comps = verify_cut_property(&oc).components;
        ensure!(comps.len() == 2, "n={n}: trivial pattern has {} components", comps.len());
        for comp in &comps {
            let parity = oc.vertices[comp[0]].is_even();
            ensure!(comp.iter().all(|&v| oc.vertices[v].is_even() == parity), "n={n}: component mixes parities");
            ensure!(comp.len() * 2 == oc.vertices.len(), "n={n}: component of size {}", comp.len());
        }
    }
    Ok((n4_bad, n4_shapes, n5_bad))
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut positive, mut negative, mut kinds) = (0, 0, [0usize; 3]);
    for k in 0..C4_INSTANCES {
        let d = rng.gen_range(2..=5);
        let n = rng.gen_range(2..=6);
        let kind = k % 3;
        let a = match kind {
            0 => {
                let r = rng.gen_range(1..=2);
                random_product(&mut rng, d, n, r, 5, 4)
            }
            1 => {
                let (d, n) = (d.max(3), n.max(3));
                let base = random_snowflake(&mut rng, d, n, 8);
                // Perturb along the tree: re-read the splits and rescale one weight.
                let mut t = lib(bicolored_tree_from_matrix(&base))?;
                let key = *t.splits.keys().nth(rng.gen_range(0..t.splits.len())).unwrap();
                let w = t.splits[&key];
                t.splits.insert(key, w + rational(&mut rng, 0, 2, 8).abs() + Rational::new(1, 8).unwrap());
                shift_randomly(&mut rng, &t.to_matrix(), 4)
            }
            _ => {
                let t = random_bicolored_tree(&mut rng, d, n, 8, 0.8);
                shift_randomly(&mut rng, &t.to_matrix(), 4)
            }
        };
        kinds[kind] += 1;
        ensure!(lib(tropical_rank(&a))? <= 2, "generator produced rank > 2: {a}");
        let b = lib(barvinok_rank_le(&a, 2))?.is_some();
        let c = lib(bicolored_tree_from_matrix(&a))?.is_caterpillar();
        let p = lib(positive_prevariety_member(&a, 2))?.is_positive();
        ensure!(b == c && c == p, "disagreement on {a}: barvinok={b} caterpillar={c} positive={p}");
        if p {
            positive += 1;
        } else {
            negative += 1;
        }
    }
    ensure!(positive > 0 && negative > 0, "only one class generated ({positive} / {negative})");
    Ok(format!(
        "{C4_INSTANCES} matrices ({} products, {} perturbed snowflakes, {} tree matrices); {positive} positive, {negative} not",
        kinds[0], kinds[1], kinds[2]
    ))
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..C5_INSTANCES {
        let total = rng.gen_range(3..=10);
        let d = rng.gen_range(1..total);
        let n = total - d;
        let t = random_bicolored_tree(&mut rng, d, n, 8, 0.8);

        // Interleave the colours: red leaf i goes to the i-th red position.
        let mut red_pos: Vec<usize> = rand::seq::index::sample(&mut rng, total, d).into_vec();
        red_pos.sort_unstable();
        let green_pos: Vec<usize> = (0..total).filter(|x| !red_pos.contains(x)).collect();
        let place = |leaf: usize| if leaf < d { red_pos[leaf] } else { green_pos[leaf - d] };
        let splits: Vec<(Split, Rational)> = t
            .splits
            .iter()
            .map(|(s, &w)| {
                let side: Vec<usize> = s.part_indices().into_iter().map(place).collect();
                (Split::from_indices(total, &side).unwrap(), w)
            })
            .collect();
        let tree = lib(PhyloTree::new(total, splits))?;
        let lengths: Vec<Rational> = (0..total)
            .map(|_| {
                let den = rng.gen_range(1..=8);
                rational(&mut rng, -3, 3, den)
            })
            .collect();

        let p = lib(plucker_from_tree(&tree, &lengths))?;
        ensure!(four_point_check(&p), "four-point condition fails");
        let (back, back_lengths) = lib(tree_from_plucker(&p))?;
        ensure!(back == tree && back_lengths == lengths, "tree or leaf lengths not recovered");
        let coloring = lib(Bicoloring::new(total, &red_pos))?;
        ensure!(lib(coloring.is_admissible_for(&tree))?, "coloring not admissible");
        let a = lib(project_plucker(&p, &coloring))?;
        let recovered = lib(bicolored_tree_from_matrix(&a))?;
        ensure!(recovered == t, "splits or weights changed: {:?} vs {:?}", recovered.splits, t.splits);
    }

    // The same coloring is admissible for one tree and not for a neighbour.
    let s = |side: &[usize]| Split::from_indices(5, side).unwrap();
    let p1 = lib(PhyloTree::new(5, [(s(&[0, 1]), int(1)), (s(&[0, 1, 2]), int(1))]))?;
    let p2 = lib(PhyloTree::new(5, [(s(&[1, 2]), int(1)), (s(&[0, 1, 2]), int(1))]))?;
    let c = lib(Bicoloring::new(5, &[0, 3]))?;
    ensure!(lib(c.is_admissible_for(&p1))?, "{{1,4}} should be admissible for 12|345, 123|45");
    ensure!(!lib(c.is_admissible_for(&p2))?, "{{1,4}} should not be admissible for 23|145, 123|45");
    Ok(format!("{C5_INSTANCES} round trips exact; admissibility asymmetry reproduced"))
}

fn wing(base: &[i64], i: usize, j: usize) -> PlaneFace {
    let unit = |k: usize| (0..5).map(|x| u8::from(x == k)).collect::<Vec<u8>>();
    PlaneFace { base: vec![base.iter().map(|&x| int(x)).collect()], rays: vec![unit(i), unit(j)], flag: None }
}

fn timed(name: &str, f: impl FnOnce() -> Result<(), String>) -> Result<(), String> {
    let start = Instant::now();
    f()?;
    let elapsed = start.elapsed();
    ensure!(elapsed < C6_TIME_EACH, "{name} took {elapsed:?}");
    Ok(())
}

fn criterion_6() -> Check {
    timed("cartoon example", || {
        let a = m(&[[0, 0, 2], [0, 0, 1], [3, 1, 0]]);
        ensure!(lib(minor_positivity(&a, &MinorIndex::full(3)))?.status() == MinorStatus::Positive, "minor");
        ensure!(lib(positive_prevariety_member(&a, 2))?.is_positive(), "not positive");
        Ok(())
    })?;
    timed("label example", || {
        let g = lib(label_graph(&m(&[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]]), 2))?;
        let missing = lib(BipartiteLabel::one_based(3, 4, &[(1, 1), (2, 2), (3, 3), (3, 4)]))?;
        ensure!(g == bipartite_complement(&missing), "label {g:?}");
        Ok(())
    })?;
    timed("difference example", || {
        let g = lib(label_graph(&m(&[[1, 0, 0], [0, 1, 0], [0, 0, 2], [0, 0, 1]]), 2))?;
        let check = lib(label_positivity_necessary(&g, 2))?;
        ensure!(!check.holds, "even-cycle condition holds");
        Ok(())
    })?;
    let a = m(&[[2, 2, 0, 0, 0], [0, 2, 2, 0, 1], [0, 0, 2, 2, 0], [0, 0, 0, 2, 2], [2, 0, 0, 0, 2]]);
    let o = [0, 0, 0, 0, 0];
    let faces =
        vec![wing(&o, 0, 4), wing(&o, 0, 1), wing(&o, 1, 2), wing(&o, 2, 3), wing(&[0, 1, 0, 0, 0], 3, 4)];
    let plane = lib(TropicalPlaneDescription::new(5, faces))?;
    timed("starship example", || {
        ensure!(lib(prevariety_member(&a, 3))?.member, "not in the rank-3 prevariety");
        let marking = lib(marked_faces(&a, &plane))?;
        ensure!(lib(detect_starship(&marking, &plane))?.is_none(), "unexpected starship");
        let cert = lib(certify_nonpositive_rank3(&a, Some(&plane)))?;
        ensure!(!cert.certificate.is_positive(), "reported positive");
        let bad = lib(violating_minors(&a, 3, None, &Budget::default()))?;
        ensure!(bad.iter().any(|v| v.index.cols == vec![0, 1, 2, 4]), "no violating minor on columns 1,2,3,5");
        Ok(())
    })?;
    timed("arrangement example", || {
        let marking = lib(marked_faces(&a, &plane))?;
        let jmap = lib(jmap_from_faces(&marking, &plane))?;
        let trees = lib(tree_arrangement(&a, &jmap))?;
        ensure!(trees.len() == 5 && trees.iter().all(|t| t.caterpillar), "arrangement {trees:?}");
        Ok(())
    })?;
    Ok("five worked examples reproduced, each under 1 s".into())
}

fn criterion_7() -> Check {
    let s = |side: &[usize]| Split::from_indices(5, side).unwrap();
    let five = lib(PhyloTree::new(5, [(s(&[0, 1]), int(1)), (s(&[3, 4]), int(1))]))?;
    ensure!(lib(count_bicolorings(&five, 2, 3))? == 4, "five-leaf tree, d=2");
    ensure!(lib(count_bicolorings(&five, 1, 4))? == 0, "five-leaf tree, d=1");
    let mut checked = 0;
    for total in 3..=8 {
        for tree in all_binary_topologies(total) {
            ensure!(tree.is_maximal(), "enumerated tree not maximal");
            let k = cherry_count(&tree);
            for d in 1..total {
                ensure!(2 * k <= total, "k = {k} on {total} leaves");
                let formula = lib(count_bicolorings(&tree, d, total - d))?;
                let brute = lib(count_bicolorings_brute_force(&tree, d))?;
                ensure!(formula == brute, "{total} leaves, d={d}: formula {formula}, enumeration {brute}");
                checked += 1;
            }
        }
    }
    Ok(format!("counts 4 and 0 reproduced; {checked} (topology, d) pairs match enumeration"))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut decided = 0;
    for k in 0..C8_INSTANCES {
        let d = rng.gen_range(1..=5);
        let n = rng.gen_range(1..=5);
        let (a, inner) = if k % 2 == 0 {
            let inner = rng.gen_range(1..=4);
            let x = random_matrix(&mut rng, d, inner, 0, 4, 1);
            let y = random_matrix(&mut rng, inner, n, 0, 4, 1);
            (lib(min_plus_product(&x, &y))?, Some(inner))
        } else {
            (random_matrix(&mut rng, d, n, 0, 3, 2), None)
        };
        let report = lib(rank_report(&a))?;
        ensure!(report.tropical_rank <= report.barvinok_rank, "tropical > barvinok on {a}");
        ensure!(
            report.kapranov_lower <= report.kapranov_upper && report.kapranov_upper <= report.barvinok_rank,
            "kapranov bracket out of order on {a}"
        );
        if let Some(inner) = inner {
            ensure!(report.barvinok_rank <= inner, "product with inner {inner} has barvinok rank {}", report.barvinok_rank);
        }
        ensure!(lib(barvinok_rank(&a))?.0 == report.barvinok_rank, "barvinok rank differs between routes");
        for r in 1..=d.min(n) {
            let member = lib(prevariety_member(&a, r))?.member;
            ensure!(member == (report.tropical_rank <= r), "prevariety and tropical rank disagree at r={r}");
            match lib(kapranov_status(&a, r))? {
                KapranovStatus::NonMember => ensure!(!member, "non-member inside the prevariety"),
                KapranovStatus::Member => {
                    ensure!(member, "member outside the prevariety");
                    decided += 1;
                }
                KapranovStatus::UndecidableByMinors => {
                    ensure!(member && !minors_form_tropical_basis(r + 1, d, n), "undecided in a basis regime")
                }
            }
        }
        if report.kapranov_exact {
            ensure!(report.kapranov_upper == report.tropical_rank, "exact bracket is not a point");
        }
    }
    Ok(format!("{C8_INSTANCES} matrices; rank chain holds; {decided} decided memberships consistent"))
}

fn criterion_9() -> Check {
    let p: Vec<Rational> = [1, -1, -2, 1, -1, 3].into_iter().map(int).collect();
    // Rows (1, 0, -1, 1) and (0, 1, -1, -2) have these Plücker coordinates.
    let rows = [[1i64, 0, -1, 1], [0, 1, -1, -2]];
    let forms = lib(plucker_linear_forms(4, &p))?;
    for (_, f) in &forms {
        for row in &rows {
            let value: Rational = f.coeffs.iter().zip(row).map(|(&c, &x)| c * int(x)).fold(Rational::ZERO, |s, t| s + t);
            ensure!(value.is_zero(), "form {:?} does not vanish on the row space", f.coeffs);
        }
    }
    let by_triple = |t: (usize, usize, usize)| forms.iter().find(|(k, _)| *k == t).map(|(_, f)| f.clone()).unwrap();
    let f1 = by_triple((0, 1, 2));
    let f3 = by_triple((0, 1, 3));
    ensure!(f1.coeffs == vec![int(1), int(1), int(1), int(0)], "f1 = {:?}", f1.coeffs);
    ensure!(f3.coeffs == vec![int(-1), int(2), int(0), int(1)], "f3 = {:?}", f3.coeffs);

    ensure!(f1.is_monomial_signed() && f1.positive_witness().is_none(), "f1 has a positive part");
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let w: Vec<Rational> = (0..4).map(|_| rational(&mut rng, -2, 2, 2)).collect();
        ensure!(!lib(f1.is_positive_at(&w))?, "f1 positive at {w:?}");
    }
    let s = [-1i8, 1, 1, 1];
    let f3s = lib(f3.twist(&s))?;
    let f1s = lib(f1.twist(&s))?;
    ensure!(f3s.is_monomial_signed() && f3s.positive_witness().is_none(), "twisted f3 is mixed");
    let w = f1s.positive_witness().ok_or("twisted f1 has no witness")?;
    ensure!(lib(f1s.is_positive_at(&w))?, "witness rejected");
    ensure!(w[..3] == [int(0), int(0), int(1)], "witness {w:?}");
    Ok(format!("f1 empty; under s: f3 empty, f1 positive at {w:?}"))
}

fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut from_trees, mut from_products, mut tries) = (0, 0, 0);
    while from_trees + from_products < C10_INSTANCES {
        tries += 1;
        ensure!(tries < 200 * C10_INSTANCES, "generator starved");
        let d = rng.gen_range(3..=5);
        let n = rng.gen_range(3..=5);
        let a = if tries % 2 == 0 {
            let t = random_bicolored_tree(&mut rng, d, n, 8, 1.0);
            shift_randomly(&mut rng, &t.to_matrix(), 4)
        } else {
            random_product(&mut rng, d, n, 2, 6, 4)
        };
        let t = lib(bicolored_tree_from_matrix(&a))?;
        if !t.is_maximal() || !t.is_caterpillar() {
            continue;
        }
        ensure!(lib(positive_prevariety_member(&a, 2))?.is_positive(), "maximal caterpillar not positive: {a}");
        let g = lib(label_graph(&a, 2))?;
        ensure!(label_degree_check(&g, 2), "degree bound fails on {a}");
        ensure!(rank2_label_is_positive(&g), "complement of the label of {a} is {:?}", bipartite_complement(&g));
        if tries % 2 == 0 {
            from_trees += 1;
        } else {
            from_products += 1;
        }
    }
    // Snowflakes: maximal trees with a vertex meeting three internal edges.
    // Non-maximal ones are outside the classification; their labels are only
    // checked for the degree bound and tallied.
    let (mut snowflakes, mut outside, mut outside_shaped, mut tries) = (0, 0, 0, 0);
    while snowflakes < C10_SNOWFLAKES {
        tries += 1;
        ensure!(tries < 200 * C10_SNOWFLAKES, "snowflake generator starved");
        let d = rng.gen_range(3..=5);
        let n = rng.gen_range(3..=5);
        let a = if tries % 2 == 0 {
            random_snowflake(&mut rng, d, n, 8)
        } else {
            let t = random_bicolored_tree(&mut rng, d, n, 8, 1.0);
            shift_randomly(&mut rng, &t.to_matrix(), 4)
        };
        let t = lib(bicolored_tree_from_matrix(&a))?;
        if t.is_caterpillar() {
            continue;
        }
        let g = lib(label_graph(&a, 2))?;
        ensure!(label_degree_check(&g, 2), "degree bound fails on snowflake {a}");
        if !t.is_maximal() {
            outside += 1;
            outside_shaped += usize::from(rank2_label_is_positive(&g));
            continue;
        }
        ensure!(!lib(positive_prevariety_member(&a, 2))?.is_positive(), "maximal snowflake reported positive: {a}");
        ensure!(!rank2_label_is_positive(&g), "snowflake {a} has a positive-shaped label");
        snowflakes += 1;
    }
    Ok(format!(
        "{} positive maximal instances ({from_trees} tree matrices, {from_products} products); \
         {snowflakes} maximal snowflakes rejected; {outside_shaped} of {outside} non-maximal ones have the positive shape",
        from_trees + from_products
    ))
}

fn main() -> ExitCode {
    let checks: Vec<(u8, &str, Box<dyn Fn() -> Outcome>)> = vec![
        (1, "triangle criterion at n=3,4", Box::new(|| wrap(criterion_1()))),
        (2, "one-sided failure at n=5", Box::new(criterion_2)),
        (3, "orthant cut property", Box::new(criterion_3)),
        (4, "rank-2 equivalences", Box::new(|| wrap(criterion_4()))),
        (5, "Plücker round trip", Box::new(|| wrap(criterion_5()))),
        (6, "worked examples", Box::new(|| wrap(criterion_6()))),
        (7, "bicoloring counts", Box::new(|| wrap(criterion_7()))),
        (8, "rank chain", Box::new(|| wrap(criterion_8()))),
        (9, "signed linear forms", Box::new(|| wrap(criterion_9()))),
        (10, "label classification", Box::new(|| wrap(criterion_10()))),
    ];
    let mut unexpected = 0;
    for (id, name, check) in &checks {
        let start = Instant::now();
        let outcome = check();
        let t = start.elapsed();
        match outcome {
            Outcome::Pass(detail) => println!("PASS criterion {id:>2} ({name}): {detail} [{t:.2?}]"),
            Outcome::KnownFail(detail) => {
                println!("FAIL criterion {id:>2} ({name}): {detail} [{t:.2?}] (known, recorded in the decisions ledger)")
            }
            Outcome::Fail(detail) => {
                unexpected += 1;
                println!("FAIL criterion {id:>2} ({name}): {detail} [{t:.2?}]");
            }
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn wrap(c: Check) -> Outcome {
    match c {
        Ok(s) => Outcome::Pass(s),
        Err(s) => Outcome::Fail(s),
    }
}
