//! Reader and writer for the SNAP `amazon-meta` product metadata dump.

mod parser;
mod record;
mod writer;

pub use parser::{open_metadata, parse_category_line, parse_metadata, read_all, MetaReader};
pub use record::{filter_valid, CategoryPath, FilterPolicy, Group, ProductRecord, ReviewSummary};
pub use writer::{write_metadata, write_record};
