use sheafdual::cohomtree::{bar_cohomology, ext_via_resolution, shapiro_check};
use sheafdual::finab::FinAbGroup;
use sheafdual::ringmod::{FinGroup, FinModule, FiniteRing, Side};

fn factors(groups: &[FinAbGroup]) -> Vec<Vec<i64>> {
    groups.iter().map(|g| g.factors().to_vec()).collect()
}

fn main() -> sheafdual::Result<()> {
    for (name, g) in [
        ("C2", FinGroup::cyclic(2)),
        ("C4", FinGroup::cyclic(4)),
        ("S3", FinGroup::symmetric(3)),
    ] {
        let ring = FiniteRing::group_ring(2, &g)?;
        let z2 = FinModule::trivial_action(&ring, FinAbGroup::cyclic(2), Side::Left)?;
        let bar = bar_cohomology(&g, &z2, 2)?;
        let ext = ext_via_resolution(&z2, &z2, 2)?;
        println!(
            "H^0..2({name}, Z/2): bar {:?}, Ext {:?}",
            factors(&bar),
            factors(&ext)
        );
    }

    let s3 = FinGroup::symmetric(3);
    let ring = FiniteRing::group_ring(2, &s3)?;
    let z2 = FinModule::trivial_action(&ring, FinAbGroup::cyclic(2), Side::Left)?;
    for h in s3.subgroups() {
        let v = shapiro_check(&s3, &h, &z2, 2)?;
        println!(
            "subgroup {h:?}: Ext {:?} = H {:?}: {}",
            factors(&v.ext),
            factors(&v.cohomology),
            v.holds
        );
    }
    Ok(())
}
