use sheafdual::ringmod::{
    dual_module, module_evaluation, orbit_decomposition, permutation_module, FinGroup, FinModule,
    FiniteRing, GSet, Side,
};

fn main() -> sheafdual::Result<()> {
    let s3 = FinGroup::symmetric(3);
    let ring = FiniteRing::group_ring(2, &s3)?;
    println!(
        "(Z/2)[S3]: order {}, commutative: {}",
        ring.order(),
        ring.is_commutative()
    );

    let regular = FinModule::regular(&ring, Side::Left);
    let dual = dual_module(&regular);
    println!(
        "regular module {:?} ({:?}), dual {:?} ({:?})",
        regular.group().factors(),
        regular.side(),
        dual.group().factors(),
        dual.side()
    );
    println!(
        "evaluation M -> M^^ bijective: {}",
        module_evaluation(&regular)?.is_bijective()
    );

    // S3 acting on the cosets of a subgroup of order 2, plus a fixed point
    let c2 = s3
        .subgroups()
        .into_iter()
        .find(|h| h.len() == 2)
        .expect("a transposition");
    let cosets = GSet::cosets(&s3, &c2)?;
    let mut action: Vec<Vec<usize>> = (0..s3.order())
        .map(|g| cosets.permutation(g).to_vec())
        .collect();
    for row in &mut action {
        row.push(3);
    }
    let y = GSet::new(s3.clone(), 4, action)?;
    let pm = permutation_module(&ring, &y)?;
    let d = orbit_decomposition(&ring, &y)?;
    println!(
        "(Z/2)[Y] has order {}, orbits {:?}, witness bijective: {}",
        pm.order(),
        d.orbits,
        d.witness.is_bijective()
    );
    Ok(())
}
