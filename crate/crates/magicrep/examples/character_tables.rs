//! Exact character tables of a few small permutation groups.

use magicrep::characters::character_table;
use magicrep::group::GroupTable;
use magicrep::spec::corpus;

fn main() -> magicrep::error::Result<()> {
    let groups: [(&str, Vec<&str>); 3] = [
        ("S3", vec!["(1,2)", "(1,2,3)"]),
        ("Q8", corpus::Q8_GENS.to_vec()),
        ("SL(2,3)", corpus::SL23_GENS.to_vec()),
    ];
    for (name, gens) in groups {
        let g = GroupTable::from_cycle_strings(&gens)?;
        let t = character_table(&g.full())?;
        let reps: Vec<String> = t.sub.class_reps().iter().map(|&x| g.element(x).to_cycles()).collect();
        println!("{name}, order {}, values in Q(z{})", g.order(), t.conductor);
        println!("  classes: {}", reps.join("  "));
        for chi in &t.irr {
            println!("  {}", chi.value_strings().join("  "));
        }
    }
    Ok(())
}
