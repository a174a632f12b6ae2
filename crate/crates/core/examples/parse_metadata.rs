//! Streams a metadata dump, skipping malformed blocks, and applies the
//! default validity filter.
//!
//! ```text
//! cargo run --example parse_metadata -- amazon-meta.txt.gz
//! ```

use copurchase::meta::{open_metadata, parse_category_line, parse_metadata, FilterPolicy};
use std::io::Cursor;

const SAMPLE: &str = "\
Id:   0
ASIN: 0771044445
  discontinued product

Id:   1
ASIN: 0827229534
  title: Patterns of Preaching: A Sermon Sampler
  group: Book
  salesrank: 396585
  similar: 5  0804215715  156101074X  0687023955  0687074231  082721619X
  categories: 2
   |Books[283155]|Subjects[1000]|Religion & Spirituality[22]|Christianity[12290]|Clergy[12360]|Preaching[12368]
   |Books[283155]|Subjects[1000]|Religion & Spirituality[22]|Christianity[12290]|Clergy[12360]|Sermons[12370]
  reviews: total: 2  downloaded: 2  avg rating: 5
    2000-7-28  cutomer: A2JW67OY8U6HHK  rating: 5  votes:  10  helpful:   9
    2003-12-14  cutomer: A2VE83MZF98ITY  rating: 5  votes:   6  helpful:   5
";

fn main() -> copurchase::Result<()> {
    let policy = FilterPolicy::default();
    let (mut total, mut kept, mut bad) = (0, 0, 0);
    let mut handle = |item: copurchase::Result<copurchase::ProductRecord>| match item {
        Ok(r) => {
            total += 1;
            if policy.accepts(&r) {
                kept += 1;
            }
        }
        Err(e) => {
            bad += 1;
            eprintln!("skipped: {e}");
        }
    };
    match std::env::args().nth(1) {
        Some(path) => parse_metadata(open_metadata(path)?).for_each(&mut handle),
        None => {
            for r in parse_metadata(Cursor::new(SAMPLE)) {
                if let Ok(r) = &r {
                    println!("{} {:?} similar={} paths={}", r.asin, r.title, r.similar_asins.len(), r.category_paths.len());
                }
                handle(r);
            }
        }
    }
    println!("records: {total}, retained: {kept}, malformed: {bad}");

    let path = parse_category_line("|Books[283155]|Subjects[1000]|Drama[2159]")?;
    println!("category ids: {:?}", path.ids());
    Ok(())
}
