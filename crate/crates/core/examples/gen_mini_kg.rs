//! Regenerates `data/mini_kg.tsv` from its recipe.

use kgscope::graph::write_generic_file;
use kgscope::synthetic::{mini_kg_spec, translational_graph};

fn main() -> kgscope::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/mini_kg.tsv");
    let graph = translational_graph(&mini_kg_spec())?;
    write_generic_file(&graph, path)?;
    println!("wrote {} triples to {path}", graph.len());
    Ok(())
}
