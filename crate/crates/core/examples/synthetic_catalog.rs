//! Writes a synthetic metadata dump with planted communities, pendant
//! products and isolated products.
//!
//! ```text
//! cargo run --example synthetic_catalog -- out.txt
//! ```

use copurchase::meta::write_metadata;
use copurchase::synthetic::{planted_records, PlantedConfig};
use std::io::BufWriter;

fn main() -> copurchase::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "synthetic-meta.txt".into());
    let cfg = PlantedConfig {
        communities: 12,
        community_size: 80,
        pendants: 40,
        isolated: 200,
        p_in: 0.06,
        ..Default::default()
    };
    let records = planted_records(&cfg);
    let mut out = BufWriter::new(std::fs::File::create(&path)?);
    write_metadata(&mut out, records.iter())?;
    println!("wrote {} records to {path}", records.len());
    Ok(())
}
