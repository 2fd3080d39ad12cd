use sheafdual::cosheafside::{
    profinite_direct_sum, roundtrip_prosheaf, universal_property_check, ProSheafSystem,
};
use sheafdual::finab::{AbHom, FinAbGroup};
use sheafdual::ringmod::{FinModule, FiniteRing, ModHom, Side};
use sheafdual::stone::LevelChain;

fn main() -> sheafdual::Result<()> {
    let ring = FiniteRing::cyclic(2)?;
    let z2 = FinModule::over_cyclic(&ring, FinAbGroup::cyclic(2), Side::Left)?;
    // {a, b} -> {*}, with identity maps from both top fibres down to the base
    let chain = LevelChain::two_level(1, vec![0, 0])?;
    let id = ModHom::identity(&z2);
    let s = ProSheafSystem::new(
        chain,
        ring.clone(),
        Side::Left,
        vec![vec![z2.clone()], vec![z2.clone(), z2.clone()]],
        vec![vec![id.clone(), id]],
    )?;

    let (sum, omega) = profinite_direct_sum(&s)?;
    for (l, level) in sum.levels.iter().enumerate() {
        println!("level {l}: {:?}", level.module.group().factors());
    }
    println!(
        "connecting map (fold): {:?}",
        sum.maps[0].map().matrix().to_rows()
    );
    println!(
        "omega injective on fibres: {}",
        omega.is_fibrewise_injective()
    );

    let p = FinModule::over_cyclic(&ring, FinAbGroup::new(vec![2, 2])?, Side::Left)?;
    let beta = vec![
        AbHom::from_images(FinAbGroup::cyclic(2), p.group().clone(), &[vec![1, 0]])?,
        AbHom::from_images(FinAbGroup::cyclic(2), p.group().clone(), &[vec![1, 1]])?,
    ];
    let v = universal_property_check(&s, &p, &beta)?;
    println!(
        "factorization {:?}, unique: {} ({:?} candidates)",
        v.factorization.map().matrix().to_rows(),
        v.holds,
        v.exhaustive_count
    );
    println!("round trip: {}", roundtrip_prosheaf(&s)?.holds);
    Ok(())
}
