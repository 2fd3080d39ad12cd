//! Acceptance suite: ten criteria, one PASS/FAIL line each, with the time
//! limit of every criterion pinned below. Runs with its own harness so the
//! lines are always printed.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use serde_json::Value;
use sheafdual::cli::{parse_instance, Instance};
use sheafdual::cohomtree::{
    bar_cohomology, ext_via_resolution, mayer_vietoris_check, restrict_to_subgroup, shapiro_check,
    tree_ses,
};
use sheafdual::cosheafside::{roundtrip_prosheaf, universal_property_check};
use sheafdual::dualbridge::{
    product_sum_duality_check, square_commutes_check, square_commutes_check_co,
    sum_product_duality_check,
};
use sheafdual::finab::{
    check_exact, double_dual_check, dual_group, dual_hom, smith_normal_form, FinAbGroup,
};
use sheafdual::random::{
    groups_up_to, random_etale, random_group_ses, random_matrix, random_presheaf_table,
    random_prosheaf, random_universal_triple, seeded, RingChoice, TableShape,
};
use sheafdual::ringmod::{
    permutation_module, FinGroup, FinModule, FiniteRing, FunctorTag, GSet, Side,
};
use sheafdual::sheafside::{lift_functor_sheaf, roundtrip_etale, PresheafTable};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.expect("corpus entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json") && !p.ends_with("manifest.json"))
        .collect();
    files.sort();
    files
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn snf_suite() -> Outcome {
    let mut rng = seeded(1);
    for k in 0..1000 {
        let m = random_matrix(&mut rng, 5, 9);
        let s = smith_normal_form(&m);
        ensure(s.u.mul(&m).mul(&s.v) == s.d, || {
            format!("matrix {k}: U M V != D")
        })?;
        ensure(
            s.u.determinant().abs() == 1 && s.v.determinant().abs() == 1,
            || format!("matrix {k}: not unimodular"),
        )?;
        let d = &s.d;
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                ensure(i == j || d.row(i)[j] == 0, || {
                    format!("matrix {k}: D is not diagonal")
                })?;
            }
        }
        let diag: Vec<i64> = (0..d.rows().min(d.cols())).map(|i| d.row(i)[i]).collect();
        ensure(diag.iter().all(|&x| x >= 0), || {
            format!("matrix {k}: negative diagonal entry")
        })?;
        for w in diag.windows(2) {
            let ok = if w[0] == 0 {
                w[1] == 0
            } else {
                w[1] % w[0] == 0
            };
            ensure(ok, || {
                format!("matrix {k}: divisibility fails on {:?}", diag)
            })?;
        }
    }
    Ok("1000 matrices".into())
}

fn group_duality() -> Outcome {
    let groups = groups_up_to(64);
    for g in &groups {
        ensure(dual_group(g).order() == g.order(), || {
            format!("|dual| differs for {:?}", g.factors())
        })?;
        ensure(double_dual_check(g), || {
            format!("evaluation not bijective for {:?}", g.factors())
        })?;
    }
    let mut rng = seeded(2);
    for k in 0..200 {
        let (f, g) = random_group_ses(&mut rng, 64);
        let dual = [dual_hom(&g), dual_hom(&f)];
        for pos in 0..=2 {
            let v = check_exact(&dual, pos).map_err(|e| e.to_string())?;
            ensure(v.exact, || {
                format!("sequence {k}: dual not exact at position {pos}")
            })?;
        }
    }
    Ok(format!("{} groups, 200 sequences", groups.len()))
}

fn sheaf_matches_disjoint_union(p: &PresheafTable) -> Result<bool, String> {
    let covers = p.all_covers_check().map_err(|e| e.to_string())?.is_none();
    let partitions = p.disjoint_union_check().holds;
    ensure(covers == partitions, || {
        format!("cover check {covers}, partition check {partitions}")
    })?;
    Ok(covers)
}

fn sheaf_equivalence() -> Outcome {
    let mut corpus_tables = 0;
    let mut counterexample_fails = false;
    for path in corpus_files() {
        let Ok((_, Instance::Sheaf(p))) = parse_instance(&path) else {
            continue;
        };
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let holds = sheaf_matches_disjoint_union(&p).map_err(|e| format!("{name}: {e}"))?;
        if name == "sheaf-counterexample.json" {
            counterexample_fails = !holds;
        }
        corpus_tables += 1;
    }
    ensure(counterexample_fails, || "the counterexample passes".into())?;
    let mut rng = seeded(3);
    let mut sheaves = 0;
    for k in 0..100 {
        let ring = RingChoice::ALL[k % 2].ring();
        let shape = TableShape::ALL[(k / 2) % 4];
        let points = k % 4;
        let p =
            random_presheaf_table(&mut rng, &ring, shape, points, 8).map_err(|e| e.to_string())?;
        if sheaf_matches_disjoint_union(&p).map_err(|e| format!("table {k}: {e}"))? {
            sheaves += 1;
        }
    }
    Ok(format!(
        "{corpus_tables} corpus tables, 100 random tables ({sheaves} sheaves)"
    ))
}

fn equivalence_round_trips() -> Outcome {
    let mut rng = seeded(4);
    for k in 0..100 {
        let ring = RingChoice::pick(&mut rng).ring();
        let e = random_etale(&mut rng, &ring, 3, 8).map_err(|e| e.to_string())?;
        let r = roundtrip_etale(&e).map_err(|e| e.to_string())?;
        ensure(r.holds, || {
            format!("étale system {k}: {:?}", failing(&r.checks))
        })?;
        let s = random_prosheaf(&mut rng, &ring, 3, 8).map_err(|e| e.to_string())?;
        let r = roundtrip_prosheaf(&s).map_err(|e| e.to_string())?;
        ensure(r.holds, || {
            format!("profinite system {k}: {:?}", failing(&r.checks))
        })?;
    }
    Ok("100 étale and 100 profinite systems".into())
}

fn failing(checks: &[sheafdual::sheafside::NamedCheck]) -> Vec<&str> {
    checks
        .iter()
        .filter(|c| !c.holds)
        .map(|c| c.name.as_str())
        .collect()
}

fn sum_product_duality() -> Outcome {
    let mut rng = seeded(5);
    let mut passed = 0;
    for k in 0..100u64 {
        let ring = RingChoice::pick(&mut rng).ring();
        let e = random_etale(&mut rng, &ring, 3, 8).map_err(|e| e.to_string())?;
        let w = sum_product_duality_check(&e).map_err(|e| e.to_string())?;
        ensure(w.holds, || {
            format!("étale system {k}: {:?}", failing(&w.checks))
        })?;
        ensure(w.levels.iter().all(|l| l.table.is_nondegenerate()), || {
            format!("étale system {k}: degenerate pairing")
        })?;
        let sq = square_commutes_check(&e, k).map_err(|e| e.to_string())?;
        ensure(sq.holds, || {
            format!("étale system {k}: square {:?}", failing(&sq.checks))
        })?;
        let s = random_prosheaf(&mut rng, &ring, 3, 8).map_err(|e| e.to_string())?;
        let w = product_sum_duality_check(&s).map_err(|e| e.to_string())?;
        ensure(w.holds, || {
            format!("profinite system {k}: {:?}", failing(&w.checks))
        })?;
        let sq = square_commutes_check_co(&s).map_err(|e| e.to_string())?;
        ensure(sq.holds, || {
            format!("profinite system {k}: square {:?}", failing(&sq.checks))
        })?;
        passed += 1;
    }
    Ok(format!("{passed}/100 instances"))
}

fn universal_property() -> Outcome {
    let mut rng = seeded(6);
    let mut searched = 0;
    for k in 0..100 {
        let ring = RingChoice::pick(&mut rng).ring();
        let (s, p, beta) =
            random_universal_triple(&mut rng, &ring, 3, 8, 16, 16).map_err(|e| e.to_string())?;
        let v = universal_property_check(&s, &p, &beta).map_err(|e| e.to_string())?;
        ensure(v.holds, || format!("triple {k}: no unique factorization"))?;
        let count = v
            .exhaustive_count
            .ok_or_else(|| format!("triple {k}: exhaustive search skipped"))?;
        ensure(count == 1, || format!("triple {k}: {count} factorizations"))?;
        searched += 1;
    }
    Ok(format!(
        "{searched} triples, each with exactly one factorization"
    ))
}

fn functor_lifting() -> Outcome {
    let mut rng = seeded(7);
    for tag in [FunctorTag::HomFrom(2), FunctorTag::Tensor(2)] {
        for k in 0..50 {
            let ring = RingChoice::pick(&mut rng).ring();
            let e = random_etale(&mut rng, &ring, 3, 8).map_err(|e| e.to_string())?;
            let lifted = lift_functor_sheaf(tag, &e).map_err(|e| e.to_string())?;
            ensure(lifted.report.holds, || {
                format!(
                    "{tag:?}, instance {k}: {:?}",
                    failing(&lifted.report.checks)
                )
            })?;
        }
    }
    Ok("50 instances for each functor".into())
}

/// `H^n(C_2, Z/2)` for `n <= 2` by enumerating all cochains.
fn c2_cohomology_by_enumeration() -> Vec<u64> {
    // cochains G^n -> Z/2 as bit masks over the 2^n tuples of {0, 1}
    let mul = |a: usize, b: usize| a ^ b;
    let delta = |n: usize, f: u64| -> u64 {
        let mut out = 0u64;
        for t in 0..1usize << (n + 1) {
            let g: Vec<usize> = (0..=n).map(|i| (t >> i) & 1).collect();
            let idx = |v: &[usize]| {
                v.iter()
                    .enumerate()
                    .fold(0usize, |acc, (i, &x)| acc | (x << i))
            };
            let value = |v: &[usize]| (f >> idx(v)) & 1;
            let mut s = value(&g[1..]);
            for i in 0..n {
                let mut h: Vec<usize> = g[..i].to_vec();
                h.push(mul(g[i], g[i + 1]));
                h.extend_from_slice(&g[i + 2..]);
                s ^= value(&h);
            }
            s ^= value(&g[..n]);
            out |= s << t;
        }
        out
    };
    let mut orders = Vec::new();
    for n in 0..=2usize {
        let cochains = 1u64 << (1 << n);
        let cocycles = (0..cochains).filter(|&f| delta(n, f) == 0).count() as u64;
        let boundaries = if n == 0 {
            1
        } else {
            let prev = 1u64 << (1 << (n - 1));
            let mut seen: Vec<u64> = (0..prev).map(|f| delta(n - 1, f)).collect();
            seen.sort_unstable();
            seen.dedup();
            seen.len() as u64
        };
        orders.push(cocycles / boundaries);
    }
    orders
}

fn family() -> Vec<(&'static str, FinGroup)> {
    vec![
        ("C2", FinGroup::cyclic(2)),
        ("C3", FinGroup::cyclic(3)),
        ("C4", FinGroup::cyclic(4)),
        ("C2xC2", FinGroup::klein_four()),
        ("S3", FinGroup::symmetric(3)),
    ]
}

/// Left `(Z/m)[G]`-modules of order at most 8: trivial modules of exponent
/// dividing `m` and permutation modules on coset spaces.
fn coefficients(group: &FinGroup) -> Vec<(String, FinModule)> {
    let mut out = Vec::new();
    for m in [2i64, 3, 4] {
        let ring = FiniteRing::group_ring(m, group).expect("group ring");
        for g in groups_up_to(8) {
            if g.is_trivial() || m % g.exponent() != 0 {
                continue;
            }
            let a =
                FinModule::trivial_action(&ring, g.clone(), Side::Left).expect("trivial module");
            out.push((format!("trivial {:?} over Z/{m}", g.factors()), a));
        }
        for h in group.subgroups() {
            let index = group.order() / h.len();
            if index == 1 || (m as u64).pow(index as u32) > 8 {
                continue;
            }
            let y = GSet::cosets(group, &h).expect("cosets");
            let a = permutation_module(&ring, &y).expect("permutation module");
            out.push((format!("(Z/{m})[G/{h:?}]"), a));
        }
    }
    out
}

fn cohomology_cross_validation() -> Outcome {
    let oracle = c2_cohomology_by_enumeration();
    ensure(oracle == [2, 2, 2], || {
        format!("enumeration gives orders {oracle:?}")
    })?;
    let c2 = FinGroup::cyclic(2);
    let z2 = FinModule::trivial_action(
        &FiniteRing::group_ring(2, &c2).expect("ring"),
        FinAbGroup::cyclic(2),
        Side::Left,
    )
    .expect("module");
    let h = bar_cohomology(&c2, &z2, 2).map_err(|e| e.to_string())?;
    ensure(h == vec![FinAbGroup::cyclic(2); 3], || {
        format!("bar complex gives {h:?}")
    })?;
    let mut pairs = 0;
    for (gname, g) in family() {
        for (aname, a) in coefficients(&g) {
            let m = a.ring().as_group_ring().expect("group ring").0;
            for sub in g.subgroups() {
                let s = g.subgroup(&sub).map_err(|e| e.to_string())?;
                let restricted = restrict_to_subgroup(&a, &s).map_err(|e| e.to_string())?;
                let ring = restricted.ring().clone();
                let unit = FinModule::trivial_action(&ring, FinAbGroup::cyclic(m), Side::Left)
                    .map_err(|e| e.to_string())?;
                let ext = ext_via_resolution(&unit, &restricted, 2).map_err(|e| e.to_string())?;
                let bar = bar_cohomology(&s.group, &restricted, 2).map_err(|e| e.to_string())?;
                ensure(ext == bar, || {
                    format!("{gname} ⊇ {sub:?} with {aname}: Ext {ext:?}, bar {bar:?}")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} (subgroup, coefficient) pairs"))
}

fn shapiro_and_mayer_vietoris() -> Outcome {
    let mut shapiro = 0;
    for (gname, g) in family() {
        for (aname, a) in coefficients(&g) {
            for sub in g.subgroups() {
                let v = shapiro_check(&g, &sub, &a, 2).map_err(|e| e.to_string())?;
                ensure(v.holds, || {
                    format!(
                        "{gname} ⊇ {sub:?} with {aname}: {:?} vs {:?}",
                        v.ext, v.cohomology
                    )
                })?;
                shapiro += 1;
            }
        }
    }
    let mut trees = Vec::new();
    let mut cycle_rejected = false;
    for path in corpus_files() {
        let Ok((_, Instance::Tree(t))) = parse_instance(&path) else {
            continue;
        };
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        if t.tree_error.is_some() {
            cycle_rejected |= tree_ses(t.modulus, &t.action).is_err();
            continue;
        }
        let r = mayer_vietoris_check(t.modulus, &t.action, &t.coefficients, 2)
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(r.exact && r.holds, || {
            format!("{name}: not exact everywhere")
        })?;
        trees.push(name);
    }
    for needed in ["tree-point.json", "tree-segment.json", "tree-c2-star.json"] {
        ensure(trees.iter().any(|t| t == needed), || {
            format!("{needed} was not checked")
        })?;
    }
    ensure(cycle_rejected, || "the 3-cycle was accepted".into())?;
    Ok(format!(
        "{shapiro} Shapiro instances, {} trees exact, cycle rejected",
        trees.len()
    ))
}

fn cli_determinism() -> Outcome {
    let manifest: Value = serde_json::from_str(
        &std::fs::read_to_string(corpus_dir().join("manifest.json")).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let entries = manifest["instances"]
        .as_array()
        .ok_or("manifest has no instances")?;
    ensure(entries.len() == corpus_files().len(), || {
        "manifest and corpus differ".into()
    })?;
    let mut runs = 0;
    for entry in entries {
        let file = corpus_dir().join(
            entry["file"]
                .as_str()
                .ok_or("manifest entry without file")?,
        );
        for (cmd, expected) in entry["expect"]
            .as_object()
            .ok_or("manifest entry without expectations")?
        {
            let run = || {
                Command::new(env!("CARGO_BIN_EXE_sheafdual"))
                    .args([cmd.as_str(), "--seed", "0", "--format", "structured"])
                    .arg(&file)
                    .env_remove("SHEAFDUAL_DEGREE_CAP")
                    .output()
                    .map_err(|e| e.to_string())
            };
            let (a, b) = (run()?, run()?);
            let name = format!("{cmd} {}", file.file_name().unwrap().to_string_lossy());
            ensure(a.stdout == b.stdout && a.stderr == b.stderr, || {
                format!("{name}: output differs between runs")
            })?;
            ensure(a.status.code() == b.status.code(), || {
                format!("{name}: exit code differs between runs")
            })?;
            let code = a.status.code().unwrap_or(-1) as i64;
            ensure(Some(code) == expected.as_i64(), || {
                format!("{name}: exit {code}, documented {expected}")
            })?;
            runs += 1;
        }
    }
    Ok(format!("{runs} invocations, each run twice"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Smith normal form suite", 5, snf_suite),
        ("duality of finite abelian groups", 10, group_duality),
        ("sheaf condition vs disjoint unions", 30, sheaf_equivalence),
        ("equivalence round trips", 60, equivalence_round_trips),
        (
            "sum/product duality and the duality square",
            60,
            sum_product_duality,
        ),
        (
            "universal property of the profinite direct sum",
            60,
            universal_property,
        ),
        ("functor lifting", 30, functor_lifting),
        (
            "cohomology cross-validation",
            120,
            cohomology_cross_validation,
        ),
        (
            "Shapiro and Mayer-Vietoris",
            120,
            shapiro_and_mayer_vietoris,
        ),
        ("CLI determinism and exit codes", 120, cli_determinism),
    ];
    let mut failures = 0;
    for (k, (name, limit, run)) in criteria.into_iter().enumerate() {
        let limit = Duration::from_secs(limit);
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over the time limit")),
            Err(e) => (false, e),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} criterion {:>2}: {name} [{:.2}s / {}s] {detail}",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failures == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} of 10 criteria fail");
        ExitCode::FAILURE
    }
}
