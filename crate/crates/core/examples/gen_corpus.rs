//! Regenerates `corpus/`: `cargo run -p uvlab --example gen_corpus -- corpus`

use std::fs;
use std::path::PathBuf;

use uvlab::corpus::{Manifest, ManifestEntry, MANIFEST};
use uvlab::graph::{
    brute_force_3color, encode_explicit, expand, min_violation_coloring, write_sgc, ExplicitGraph,
};

fn main() -> uvlab::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "corpus".into()));
    fs::create_dir_all(&dir).expect("create corpus dir");
    let petersen = ExplicitGraph::petersen();
    let instances = [
        ("k2", ExplicitGraph::complete(2), vec![1]),
        ("empty2", ExplicitGraph::edgeless(2), vec![1]),
        ("k3", ExplicitGraph::complete(3), vec![2, 3, 4]),
        ("k4", ExplicitGraph::complete(4), vec![2, 3, 4]),
        ("c5", ExplicitGraph::cycle(5), vec![3, 4]),
        ("c7", ExplicitGraph::cycle(7), vec![3, 4]),
        ("petersen4", petersen.induced_prefix(4), vec![2]),
        ("petersen8", petersen.induced_prefix(8), vec![3]),
        ("petersen", petersen.clone(), vec![4]),
    ];
    let mut entries = Vec::new();
    for (base, g, bits) in instances {
        let oracle = brute_force_3color(&g)?;
        let near = if oracle.is_none() { Some(min_violation_coloring(&g)?) } else { None };
        for n in bits {
            let c = encode_explicit(&g, n)?;
            assert_eq!(expand(&c)?, g, "round trip of {base} at n = {n}");
            let name = format!("{base}_n{n}");
            let file = format!("{name}.sgc");
            let header = format!("# {base}: {} vertices, {} edges\n", g.m(), g.edge_count());
            fs::write(dir.join(&file), header + &write_sgc(&c)).expect("write instance");
            entries.push(ManifestEntry {
                name,
                file,
                n,
                m: g.m() as u64,
                colorable: oracle.is_some(),
                coloring: oracle.clone(),
                near_coloring: near.as_ref().map(|(c, _)| c.clone()),
                min_violations: near.as_ref().map(|(_, k)| *k),
            });
        }
    }
    let manifest = Manifest { instances: entries };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(dir.join(MANIFEST), text + "\n").expect("write manifest");
    Ok(())
}
