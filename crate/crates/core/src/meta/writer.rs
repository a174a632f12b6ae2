use super::record::ProductRecord;
use std::io::{self, Write};

/// Writes one record in the dump's text layout, followed by a blank line.
pub fn write_record<W: Write>(out: &mut W, r: &ProductRecord) -> io::Result<()> {
    writeln!(out, "Id:   {}", r.id)?;
    writeln!(out, "ASIN: {}", r.asin)?;
    if r.discontinued {
        writeln!(out, "  discontinued product")?;
    }
    if let Some(t) = &r.title {
        writeln!(out, "  title: {t}")?;
    }
    if let Some(g) = &r.group {
        writeln!(out, "  group: {g}")?;
    }
    if let Some(s) = r.salesrank {
        writeln!(out, "  salesrank: {s}")?;
    }
    if !r.discontinued || !r.similar_asins.is_empty() {
        write!(out, "  similar: {}", r.similar_asins.len())?;
        for a in &r.similar_asins {
            write!(out, "  {a}")?;
        }
        writeln!(out)?;
    }
    if !r.discontinued || !r.category_paths.is_empty() {
        writeln!(out, "  categories: {}", r.category_paths.len())?;
        for p in &r.category_paths {
            write!(out, "   ")?;
            for (name, id) in &p.levels {
                write!(out, "|{name}[{id}]")?;
            }
            writeln!(out)?;
        }
    }
    if let Some(rs) = &r.review_summary {
        writeln!(
            out,
            "  reviews: total: {}  downloaded: {}  avg rating: {}",
            rs.total, rs.downloaded, rs.avg_rating
        )?;
    }
    writeln!(out)
}

/// Writes a full dump, including the usual two header lines.
pub fn write_metadata<'a, W, I>(out: &mut W, records: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a ProductRecord>,
    I::IntoIter: ExactSizeIterator,
{
    let records = records.into_iter();
    writeln!(out, "# Full information about Amazon Share the Love products")?;
    writeln!(out, "Total items: {}", records.len())?;
    writeln!(out)?;
    for r in records {
        write_record(out, r)?;
    }
    Ok(())
}
