use std::collections::BTreeMap;

use sheafdual::finab::FinAbGroup;
use sheafdual::ringmod::{FinModule, FiniteRing, ModHom, Side};
use sheafdual::sheafside::{
    global_sections, roundtrip_sheaf, sheaf_of_etale, EtaleSystem, PresheafTable,
};
use sheafdual::stone::LevelChain;

fn main() -> sheafdual::Result<()> {
    let ring = FiniteRing::cyclic(6)?;
    let fibres = vec![
        FinModule::over_cyclic(&ring, FinAbGroup::cyclic(2), Side::Left)?,
        FinModule::over_cyclic(&ring, FinAbGroup::cyclic(3), Side::Left)?,
    ];
    let e = EtaleSystem::single_level(&ring, Side::Left, fibres)?;
    let sections = global_sections(&e)?;
    println!("global sections: {:?}", sections.value().group().factors());

    let p = sheaf_of_etale(&e, 0)?;
    println!(
        "table values: {:?}",
        p.values()
            .iter()
            .map(|m| m.group().factors().to_vec())
            .collect::<Vec<_>>()
    );
    println!("sheaf on every cover: {}", p.all_covers_check()?.is_none());
    println!("round trip: {}", roundtrip_sheaf(&p)?.holds);

    // zero on the whole space but Z/2 on each point: gluing fails
    let ring = FiniteRing::cyclic(2)?;
    let zero = FinModule::zero(&ring, Side::Left);
    let z2 = FinModule::over_cyclic(&ring, FinAbGroup::cyclic(2), Side::Left)?;
    let values = vec![zero.clone(), z2.clone(), z2.clone(), zero.clone()];
    let mut res = BTreeMap::new();
    for (v, x) in [(0b11u32, 0usize), (0b11, 1), (0b01, 0), (0b10, 1)] {
        let u = v & !(1 << x);
        res.insert(
            (v, x),
            ModHom::zero(&values[v as usize], &values[u as usize]),
        );
    }
    let bad = PresheafTable::from_elementary(LevelChain::single(2), 0, values, &res)?;
    match bad.all_covers_check()? {
        Some(v) => println!(
            "counterexample fails on cover {:?}: exact in the middle {}",
            v.cover.iter().map(|c| &c.points).collect::<Vec<_>>(),
            v.middle.exact
        ),
        None => println!("counterexample unexpectedly glues"),
    }
    println!("disjoint unions: {}", bad.disjoint_union_check().holds);
    Ok(())
}
