use serde_json::{json, Value};

use crate::cohomtree::{
    bar_cohomology, ext_via_resolution, mayer_vietoris_check, shapiro_check, tree_ses, LESReport,
};
use crate::cosheafside::{
    coetale_of_cosheaf, direct_sum_summary, profinite_direct_sum, roundtrip_cosheaf,
    roundtrip_prosheaf, universal_property_check, CosheafTable, CosheafVerdict, ProSheafSystem,
};
use crate::dualbridge::{
    cosheaf_dual_check, dual_cosheaf_table, dual_etale_to_prosheaf, dual_presheaf_table,
    dual_prosheaf_to_etale, fibre_duality_check, product_sum_duality_check, sheaf_dual_check,
    square_commutes_check, square_commutes_check_co, sum_product_duality_check,
};
use crate::error::Error;
use crate::finab::{double_dual_check, dual_group, FinAbGroup};
use crate::ringmod::{dual_module, module_evaluation, FinModule, Side};
use crate::sheafside::{
    etale_of_sheaf, global_sections, roundtrip_etale, roundtrip_sheaf, sheaf_of_etale,
    DisjointUnionVerdict, EtaleSystem, PresheafTable, SheafVerdict, MAX_TABLE_POINTS,
};
use crate::stone::validate_chain;

use super::document::{DocumentError, Instance, Kind, TreeDocument};
use super::report::{group_value, hom_value, mod_hom_value, module_value, Report};
use super::Command;

/// Errors that make a command inapplicable to its input (exit code 2).
type CmdResult<T> = std::result::Result<T, DocumentError>;

fn input(e: Error) -> DocumentError {
    DocumentError::new("", e.to_string())
}

fn not_applicable(cmd: Command, kind: Kind) -> DocumentError {
    DocumentError::new(
        "kind",
        format!("`{}` does not apply to {kind} instances", cmd.name()),
    )
}

/// Turns a failed precondition into a failing check and anything else into
/// an input error.
fn precondition<T>(report: &mut Report, name: &str, r: crate::Result<T>) -> CmdResult<Option<T>> {
    match r {
        Ok(v) => {
            report.check(name, true, || Value::Null);
            Ok(Some(v))
        }
        Err(
            e @ (Error::NotASheaf(_)
            | Error::NotExact(_)
            | Error::InvalidGraph(_)
            | Error::EdgeInversion { .. }),
        ) => {
            report.check(name, false, || json!({ "error": e.to_string() }));
            Ok(None)
        }
        Err(e) => Err(input(e)),
    }
}

pub(super) fn run(
    cmd: Command,
    kind: Kind,
    inst: &Instance,
    seed: u64,
    cap: usize,
) -> CmdResult<Report> {
    if !applies(cmd, kind) {
        return Err(not_applicable(cmd, kind));
    }
    let mut r = Report::new(cmd.name(), kind, seed, cap);
    match cmd {
        Command::Validate => validate(&mut r, inst)?,
        Command::Dualize => dualize(&mut r, inst)?,
        Command::Sections => sections(&mut r, inst)?,
        Command::Directsum => directsum(&mut r, inst)?,
        Command::Roundtrip => roundtrip(&mut r, inst)?,
        Command::DualitySquare => duality_square(&mut r, inst, seed)?,
        Command::Cohomology => cohomology(&mut r, inst, cap)?,
        Command::Shapiro => shapiro(&mut r, inst, cap)?,
        Command::MvCheck => mv_check(&mut r, inst, cap)?,
    }
    Ok(r.finish())
}

/// Which instance kinds each subcommand accepts.
pub(super) fn applies(cmd: Command, kind: Kind) -> bool {
    use Kind::*;
    match cmd {
        Command::Validate => true,
        Command::Dualize => matches!(kind, Group | Module | Sheaf | Cosheaf | Etale | Prosheaf),
        Command::Sections => matches!(kind, Etale | Sheaf),
        Command::Directsum => matches!(kind, Prosheaf | Cosheaf),
        Command::Roundtrip | Command::DualitySquare => {
            matches!(kind, Sheaf | Cosheaf | Etale | Prosheaf)
        }
        Command::Cohomology | Command::Shapiro => kind == Module,
        Command::MvCheck => kind == TreeAction,
    }
}

fn sheaf_witness(v: &SheafVerdict) -> Value {
    json!({
        "cover": v.cover.iter().map(|c| &c.points).collect::<Vec<_>>(),
        "injective": v.injective,
        "middle": v.middle,
    })
}

fn cosheaf_witness(v: &CosheafVerdict) -> Value {
    json!({
        "cover": v.cover.iter().map(|c| &c.points).collect::<Vec<_>>(),
        "middle": v.middle,
        "surjective": v.surjective,
    })
}

fn partition_witness(v: &DisjointUnionVerdict) -> Value {
    json!({
        "set": v.failing_set.as_ref().map(|c| &c.points),
        "partition": v.failing_partition.iter().map(|c| &c.points).collect::<Vec<_>>(),
    })
}

fn sheaf_checks(r: &mut Report, prefix: &str, p: &PresheafTable) -> CmdResult<bool> {
    let cover = p.all_covers_check().map_err(input)?;
    let du = p.disjoint_union_check();
    r.check(format!("{prefix}sheaf_condition"), cover.is_none(), || {
        sheaf_witness(cover.as_ref().expect("failed"))
    });
    r.check(format!("{prefix}disjoint_union"), du.holds, || {
        partition_witness(&du)
    });
    Ok(cover.is_none() && du.holds)
}

fn cosheaf_checks(r: &mut Report, prefix: &str, c: &CosheafTable) -> CmdResult<bool> {
    let cover = c.all_covers_check().map_err(input)?;
    let du = c.disjoint_union_check();
    r.check(
        format!("{prefix}cosheaf_condition"),
        cover.is_none(),
        || cosheaf_witness(cover.as_ref().expect("failed")),
    );
    r.check(format!("{prefix}disjoint_union"), du.holds, || {
        partition_witness(&du)
    });
    Ok(cover.is_none() && du.holds)
}

fn table_values(values: &[FinModule]) -> Value {
    Value::Array(values.iter().map(|m| group_value(m.group())).collect())
}

fn fibre_orders<'a>(levels: impl Iterator<Item = &'a [FinModule]>) -> Value {
    json!(levels
        .map(|fs| fs
            .iter()
            .map(|m| m.group().factors().to_vec())
            .collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn validate(r: &mut Report, inst: &Instance) -> CmdResult<()> {
    match inst {
        Instance::Group(g) => {
            r.check("invariant_factors", true, || Value::Null);
            r.data("factors", g.factors());
            r.data("order", g.order());
        }
        Instance::Ring(ring) => {
            r.check("ring_axioms", true, || Value::Null);
            r.data("additive", ring.additive().factors());
            r.data("order", ring.order());
            r.data("commutative", ring.is_commutative());
        }
        Instance::Module(m) => {
            r.check("module_axioms", true, || Value::Null);
            r.data("module", module_value(m));
        }
        Instance::Chain { sizes, projections } => {
            let v = validate_chain(sizes, projections).map_err(input)?;
            r.check(
                "projections_surjective",
                v.valid,
                || json!({ "projection": v.failing_projection, "missed_point": v.missed_point }),
            );
            r.data("sizes", sizes);
        }
        Instance::Sheaf(p) => {
            sheaf_checks(r, "", p)?;
            r.data("values", table_values(p.values()));
        }
        Instance::Cosheaf(c) => {
            cosheaf_checks(r, "", c)?;
            r.data("values", table_values(c.values()));
        }
        Instance::Etale(e) => {
            for l in 0..e.chain().num_levels() {
                if e.chain().size(l) <= MAX_TABLE_POINTS {
                    let p = sheaf_of_etale(e, l).map_err(input)?;
                    sheaf_checks(r, &format!("level{l}/"), &p)?;
                }
            }
            r.data(
                "fibres",
                fibre_orders((0..e.chain().num_levels()).map(|l| e.fibres(l))),
            );
        }
        Instance::Prosheaf(s) => {
            for l in 0..s.chain().num_levels() {
                if s.chain().size(l) <= MAX_TABLE_POINTS {
                    let c = crate::cosheafside::coshf_of_prosheaf(s, l).map_err(input)?;
                    cosheaf_checks(r, &format!("level{l}/"), &c)?;
                }
            }
            r.data(
                "fibres",
                fibre_orders((0..s.chain().num_levels()).map(|l| s.fibres(l))),
            );
        }
        Instance::Tree(t) => {
            r.check(
                "is_tree",
                t.tree_error.is_none(),
                || json!({ "error": t.tree_error }),
            );
            if let Some(ses) = precondition(r, "tree_ses", tree_ses(t.modulus, &t.action))? {
                r.data("edge_module", group_value(ses.sequence.sub().group()));
                r.data("vertex_module", group_value(ses.sequence.mid().group()));
            }
            r.data("vertex_orbits", t.action.vertex_set().orbits());
            r.data("edge_orbits", t.action.edge_set().orbits());
        }
    }
    Ok(())
}

fn dualize(r: &mut Report, inst: &Instance) -> CmdResult<()> {
    match inst {
        Instance::Group(g) => {
            let d = dual_group(g);
            r.check(
                "equal_order",
                d.order() == g.order(),
                || json!({ "dual": d.factors() }),
            );
            r.check(
                "double_dual_evaluation",
                double_dual_check(g),
                || json!({ "group": g.factors() }),
            );
            r.data("dual", group_value(&d));
        }
        Instance::Module(m) => {
            let d = dual_module(m);
            r.check("equal_order", d.order() == m.order(), || module_value(&d));
            let ev = module_evaluation(m).map_err(input)?;
            r.check("double_dual_evaluation", ev.is_bijective(), || {
                mod_hom_value(&ev)
            });
            r.data("dual", module_value(&d));
        }
        Instance::Sheaf(p) => {
            let v = sheaf_dual_check(p).map_err(input)?;
            r.check(
                "condition_preserved",
                v.original == v.dual,
                || json!({ "sheaf": v.original, "dual_cosheaf": v.dual }),
            );
            let d = dual_presheaf_table(p).map_err(input)?;
            r.data("dual_values", table_values(d.values()));
            r.data("sheaf", v.original);
        }
        Instance::Cosheaf(c) => {
            let v = cosheaf_dual_check(c).map_err(input)?;
            r.check(
                "condition_preserved",
                v.original == v.dual,
                || json!({ "cosheaf": v.original, "dual_sheaf": v.dual }),
            );
            let d = dual_cosheaf_table(c).map_err(input)?;
            r.data("dual_values", table_values(d.values()));
            r.data("cosheaf", v.original);
        }
        Instance::Etale(e) => {
            let d = dual_etale_to_prosheaf(e);
            let rep = fibre_duality_check(e).map_err(input)?;
            r.named("fibre_duality", &rep.checks);
            r.data(
                "dual_fibres",
                fibre_orders((0..d.chain().num_levels()).map(|l| d.fibres(l))),
            );
        }
        Instance::Prosheaf(s) => {
            let d = dual_prosheaf_to_etale(s);
            let rep = fibre_duality_check(&d).map_err(input)?;
            r.named("fibre_duality", &rep.checks);
            r.data(
                "dual_fibres",
                fibre_orders((0..d.chain().num_levels()).map(|l| d.fibres(l))),
            );
        }
        _ => {}
    }
    Ok(())
}

/// Elements are listed when the module has at most this many.
const LISTING_LIMIT: u128 = 64;

fn list_sections(r: &mut Report, e: &EtaleSystem) -> CmdResult<()> {
    let s = global_sections(e).map_err(input)?;
    let mut levels = Vec::new();
    for (l, sum) in s.levels.iter().enumerate() {
        let product: u128 = e.fibres(l).iter().map(|m| m.order()).product();
        r.check(
            format!("level{l}/order_is_product"),
            sum.module.order() == product,
            || json!({ "sections": sum.module.order(), "product": product }),
        );
        let elements = (sum.module.order() <= LISTING_LIMIT).then(|| {
            sum.module
                .group()
                .elements()
                .map(|x| sum.unpack(&x))
                .collect::<Vec<_>>()
        });
        levels.push(json!({
            "level": l,
            "group": sum.module.group().factors(),
            "order": sum.module.order(),
            "sections": elements,
        }));
    }
    r.data("levels", levels);
    Ok(())
}

fn sections(r: &mut Report, inst: &Instance) -> CmdResult<()> {
    match inst {
        Instance::Etale(e) => list_sections(r, e)?,
        Instance::Sheaf(p) => {
            if let Some(e) = precondition(r, "sheaf", etale_of_sheaf(p))? {
                let full = (1u32 << p.num_points()) - 1;
                r.data("value_on_space", group_value(p.value(full).group()));
                list_sections(r, &e)?;
            }
        }
        _ => {}
    }
    Ok(())
}

fn sum_checks(r: &mut Report, s: &ProSheafSystem) -> CmdResult<()> {
    let summary = direct_sum_summary(s).map_err(input)?;
    let (sum, omega) = profinite_direct_sum(s).map_err(input)?;
    for l in 0..s.chain().num_levels() {
        let product: u128 = s.fibres(l).iter().map(|m| m.order()).product();
        let order = summary.level_orders[l];
        r.check(
            format!("level{l}/order_is_product"),
            order == product,
            || json!({ "sum": order, "product": product }),
        );
    }
    r.check("omega_injective", summary.omega_injective, || {
        json!({ "kernels": omega.components.iter().map(|w| w.kernel().module.group().factors().to_vec()).collect::<Vec<_>>() })
    });
    r.check(
        "omega_jointly_surjective",
        summary.omega_jointly_surjective,
        || json!({ "components": omega.components.iter().map(mod_hom_value).collect::<Vec<_>>() }),
    );
    let beta: Vec<_> = omega.components.iter().map(|w| w.map().clone()).collect();
    let u = universal_property_check(s, sum.value(), &beta).map_err(input)?;
    r.check(
        "universal_property/omega",
        u.holds,
        || json!({ "factorization": mod_hom_value(&u.factorization), "count": u.exhaustive_count }),
    );
    r.data("level_orders", &summary.level_orders);
    r.data("value", group_value(sum.value().group()));
    r.data(
        "connecting_maps",
        sum.maps.iter().map(mod_hom_value).collect::<Vec<_>>(),
    );
    Ok(())
}

fn directsum(r: &mut Report, inst: &Instance) -> CmdResult<()> {
    match inst {
        Instance::Prosheaf(s) => sum_checks(r, s)?,
        Instance::Cosheaf(c) => {
            if let Some(s) = precondition(r, "cosheaf", coetale_of_cosheaf(c))? {
                sum_checks(r, &s)?;
            }
        }
        _ => {}
    }
    Ok(())
}

fn roundtrip(r: &mut Report, inst: &Instance) -> CmdResult<()> {
    let rep = match inst {
        Instance::Sheaf(p) => precondition(r, "precondition", roundtrip_sheaf(p))?,
        Instance::Cosheaf(c) => precondition(r, "precondition", roundtrip_cosheaf(c))?,
        Instance::Etale(e) => Some(roundtrip_etale(e).map_err(input)?),
        Instance::Prosheaf(s) => Some(roundtrip_prosheaf(s).map_err(input)?),
        _ => return Ok(()),
    };
    if let Some(rep) = rep {
        r.named("", &rep.checks);
    }
    Ok(())
}

fn co_square(r: &mut Report, s: &ProSheafSystem) -> CmdResult<()> {
    let w = product_sum_duality_check(s).map_err(input)?;
    r.named("duality", &w.checks);
    let sq = square_commutes_check_co(s).map_err(input)?;
    r.named("square", &sq.checks);
    Ok(())
}

fn duality_square(r: &mut Report, inst: &Instance, seed: u64) -> CmdResult<()> {
    let etale = match inst {
        Instance::Etale(e) => Some(e.clone()),
        Instance::Sheaf(p) => precondition(r, "sheaf", etale_of_sheaf(p))?,
        Instance::Prosheaf(s) => return co_square(r, s),
        Instance::Cosheaf(c) => {
            if let Some(s) = precondition(r, "cosheaf", coetale_of_cosheaf(c))? {
                co_square(r, &s)?;
            }
            return Ok(());
        }
        _ => return Ok(()),
    };
    if let Some(e) = etale {
        let w = sum_product_duality_check(&e).map_err(input)?;
        r.named("duality", &w.checks);
        r.data(
            "level_isomorphisms",
            w.levels
                .iter()
                .map(|l| l.isomorphism.as_ref().map(mod_hom_value))
                .collect::<Vec<_>>(),
        );
        let sq = square_commutes_check(&e, seed).map_err(input)?;
        r.named("square", &sq.checks);
    }
    Ok(())
}

fn group_of(inst: &Instance) -> CmdResult<(&FinModule, crate::ringmod::FinGroup)> {
    let Instance::Module(a) = inst else {
        return Err(DocumentError::new(
            "kind",
            "cohomology needs a module over a group ring",
        ));
    };
    let (_, g) = a.ring().as_group_ring().ok_or_else(|| {
        DocumentError::new("instance.module", "the module is not over a group ring")
    })?;
    Ok((a, g.clone()))
}

fn groups_value(gs: &[FinAbGroup]) -> Value {
    Value::Array(gs.iter().map(group_value).collect())
}

fn cohomology(r: &mut Report, inst: &Instance, cap: usize) -> CmdResult<()> {
    if !matches!(inst, Instance::Module(_)) {
        return Ok(());
    }
    let (a, g) = group_of(inst)?;
    let bar = bar_cohomology(&g, a, cap).map_err(input)?;
    let (m, _) = a.ring().as_group_ring().expect("checked");
    let trivial =
        FinModule::trivial_action(a.ring(), FinAbGroup::cyclic(m), a.side()).map_err(input)?;
    let ext = ext_via_resolution(&trivial, a, cap).map_err(input)?;
    for n in 0..=cap {
        r.check(
            format!("bar_matches_resolution/H^{n}"),
            bar[n] == ext[n],
            || json!({ "bar": group_value(&bar[n]), "resolution": group_value(&ext[n]) }),
        );
    }
    r.data("cohomology", groups_value(&bar));
    Ok(())
}

fn shapiro(r: &mut Report, inst: &Instance, cap: usize) -> CmdResult<()> {
    if !matches!(inst, Instance::Module(_)) {
        return Ok(());
    }
    let (a, g) = group_of(inst)?;
    if a.side() != Side::Left {
        return Err(DocumentError::new(
            "instance.module",
            "Shapiro's lemma is checked for left modules",
        ));
    }
    let mut rows = Vec::new();
    for h in g.subgroups() {
        let v = shapiro_check(&g, &h, a, cap).map_err(input)?;
        r.check(
            format!("shapiro/{h:?}"),
            v.holds,
            || json!({ "ext": groups_value(&v.ext), "cohomology": groups_value(&v.cohomology) }),
        );
        rows.push(json!({ "subgroup": h, "cohomology": groups_value(&v.cohomology) }));
    }
    r.data("subgroups", rows);
    Ok(())
}

fn les_checks(r: &mut Report, les: &LESReport) {
    for (p, v) in les.verdicts.iter().enumerate() {
        r.check(
            format!("exact/{p:02}/{}", les.terms[p].label),
            v.exact,
            || json!(v),
        );
    }
    r.named("", &les.identifications);
    r.data(
        "terms",
        les.terms
            .iter()
            .map(|t| json!({ "label": t.label, "group": group_value(&t.group) }))
            .collect::<Vec<_>>(),
    );
    r.data("maps", les.maps.iter().map(hom_value).collect::<Vec<_>>());
}

fn mv_check(r: &mut Report, inst: &Instance, cap: usize) -> CmdResult<()> {
    let Instance::Tree(TreeDocument {
        action,
        modulus,
        coefficients,
        tree_error,
    }) = inst
    else {
        return Ok(());
    };
    r.check(
        "is_tree",
        tree_error.is_none(),
        || json!({ "error": tree_error }),
    );
    if let Some(les) = precondition(
        r,
        "tree_ses",
        mayer_vietoris_check(*modulus, action, coefficients, cap),
    )? {
        les_checks(r, &les);
    }
    Ok(())
}
