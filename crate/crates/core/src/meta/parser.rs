//! Single-pass streaming parser. Only one record block is held in memory at
//! a time; review rows are consumed and discarded.

use super::record::{CategoryPath, Group, ProductRecord, ReviewSummary};
use crate::error::{Error, Result};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

/// Opens a metadata file, transparently decompressing gzip input.
pub fn open_metadata(path: impl AsRef<Path>) -> Result<Box<dyn BufRead + Send>> {
    let mut file = File::open(path.as_ref())?;
    let mut magic = [0u8; 2];
    let n = file.read(&mut magic)?;
    drop(file);
    let file = File::open(path.as_ref())?;
    if n == 2 && magic == [0x1f, 0x8b] {
        Ok(Box::new(BufReader::new(flate2::read::MultiGzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::with_capacity(1 << 20, file)))
    }
}

/// Streams records from `input`. Malformed blocks surface as `Err` items and
/// iteration continues with the next block, so callers can skip or abort.
pub fn parse_metadata<R: BufRead>(input: R) -> MetaReader<R> {
    MetaReader::new(input)
}

/// Collects every record, failing on the first malformed block.
pub fn read_all<R: BufRead>(input: R) -> Result<Vec<ProductRecord>> {
    parse_metadata(input).collect()
}

pub struct MetaReader<R> {
    input: R,
    buf: Vec<u8>,
    offset: u64,
    /// A line read ahead of the current block (the next `Id:` line).
    pending: Option<(u64, String)>,
    done: bool,
}

struct Line {
    offset: u64,
    text: String,
}

impl<R: BufRead> MetaReader<R> {
    pub fn new(input: R) -> Self {
        Self {
            input,
            buf: Vec::with_capacity(4096),
            offset: 0,
            pending: None,
            done: false,
        }
    }

    /// Bytes consumed so far.
    pub fn position(&self) -> u64 {
        self.offset
    }

    fn read_line(&mut self) -> Result<Option<(u64, String)>> {
        if let Some(p) = self.pending.take() {
            return Ok(Some(p));
        }
        self.buf.clear();
        let start = self.offset;
        let n = self.input.read_until(b'\n', &mut self.buf)?;
        if n == 0 {
            return Ok(None);
        }
        self.offset += n as u64;
        while matches!(self.buf.last(), Some(b'\n' | b'\r')) {
            self.buf.pop();
        }
        Ok(Some((start, String::from_utf8_lossy(&self.buf).into_owned())))
    }

    /// Reads the next block: an `Id:` line plus everything up to a blank line,
    /// the next `Id:` line, or end of input.
    fn next_block(&mut self) -> Result<Option<Vec<Line>>> {
        let first = loop {
            match self.read_line()? {
                None => return Ok(None),
                Some((off, text)) if text.starts_with("Id:") => break Line { offset: off, text },
                // header comments, "Total items:", blank separators
                Some(_) => continue,
            }
        };
        let mut lines = vec![first];
        while let Some((off, text)) = self.read_line()? {
            if text.trim().is_empty() {
                break;
            }
            if text.starts_with("Id:") {
                self.pending = Some((off, text));
                break;
            }
            lines.push(Line { offset: off, text });
        }
        Ok(Some(lines))
    }
}

impl<R: BufRead> Iterator for MetaReader<R> {
    type Item = Result<ProductRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.next_block() {
            Ok(None) => {
                self.done = true;
                None
            }
            Ok(Some(lines)) => {
                let at_eof = self.pending.is_none() && self.input.fill_buf().map_or(true, |b| b.is_empty());
                Some(parse_block(&lines, at_eof))
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

fn parse_err(id: Option<u64>, offset: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        id,
        offset,
        message: message.into(),
    }
}

fn field<'a>(line: &'a str, label: &str) -> Option<&'a str> {
    let rest = line.trim_start().strip_prefix(label)?;
    Some(rest.strip_prefix(' ').unwrap_or(rest))
}

fn parse_block(lines: &[Line], at_eof: bool) -> Result<ProductRecord> {
    let start = lines[0].offset;
    let id_text = field(&lines[0].text, "Id:").unwrap_or_default().trim();
    let id: u64 = id_text
        .parse()
        .map_err(|_| parse_err(None, start, format!("bad Id `{id_text}`")))?;
    let err = |offset: u64, msg: String| parse_err(Some(id), offset, msg);
    let truncated = |offset: u64, what: &str| {
        if at_eof {
            err(offset, format!("truncated final record: {what}"))
        } else {
            err(offset, format!("malformed record: {what}"))
        }
    };

    let asin_line = lines.get(1).ok_or_else(|| truncated(start, "missing ASIN line"))?;
    let asin = field(&asin_line.text, "ASIN:")
        .ok_or_else(|| err(asin_line.offset, "expected `ASIN:` after `Id:`".into()))?
        .trim()
        .to_string();
    if asin.is_empty() {
        return Err(err(asin_line.offset, "empty ASIN".into()));
    }

    let mut rec = ProductRecord {
        id,
        asin,
        ..Default::default()
    };

    let mut i = 2;
    while i < lines.len() {
        let line = &lines[i];
        let text = line.text.as_str();
        let trimmed = text.trim_start();
        i += 1;
        if trimmed == "discontinued product" {
            rec.discontinued = true;
        } else if let Some(v) = field(text, "title:") {
            rec.title = Some(v.to_string());
        } else if let Some(v) = field(text, "group:") {
            let v = v.trim();
            if !v.is_empty() {
                rec.group = Some(Group::parse(v));
            }
        } else if let Some(v) = field(text, "salesrank:") {
            let v = v.trim();
            rec.salesrank = Some(
                v.parse()
                    .map_err(|_| err(line.offset, format!("bad salesrank `{v}`")))?,
            );
        } else if let Some(v) = field(text, "similar:") {
            let mut parts = v.split_whitespace();
            let declared: usize = parts
                .next()
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| err(line.offset, "bad similar count".into()))?;
            let listed: Vec<&str> = parts.collect();
            if listed.len() != declared {
                return Err(err(
                    line.offset,
                    format!("similar declares {declared} ASINs but lists {}", listed.len()),
                ));
            }
            let mut seen = std::collections::HashSet::with_capacity(listed.len());
            rec.similar_asins = listed
                .into_iter()
                .filter(|a| seen.insert(*a))
                .map(str::to_string)
                .collect();
        } else if let Some(v) = field(text, "categories:") {
            let declared: usize = v
                .trim()
                .parse()
                .map_err(|_| err(line.offset, format!("bad categories count `{}`", v.trim())))?;
            let mut paths = Vec::with_capacity(declared);
            for _ in 0..declared {
                let path_line = lines.get(i).ok_or_else(|| {
                    truncated(
                        line.offset,
                        &format!("categories declares {declared} paths but lists {}", paths.len()),
                    )
                })?;
                if !path_line.text.trim_start().starts_with('|') {
                    return Err(err(
                        path_line.offset,
                        format!("categories declares {declared} paths but lists {}", paths.len()),
                    ));
                }
                let path = parse_category_line(&path_line.text).map_err(|e| err(path_line.offset, e.to_string()))?;
                paths.push(path);
                i += 1;
            }
            rec.category_paths = paths;
        } else if let Some(v) = field(text, "reviews:") {
            rec.review_summary = parse_review_summary(v);
            // individual review rows: consumed, not retained
            while i < lines.len() && !is_field_line(&lines[i].text) {
                i += 1;
            }
        } else {
            log::debug!("record {id}: ignoring unrecognized line `{text}`");
        }
    }
    Ok(rec)
}

fn is_field_line(text: &str) -> bool {
    let t = text.trim_start();
    ["title:", "group:", "salesrank:", "similar:", "categories:", "reviews:"]
        .iter()
        .any(|l| t.starts_with(l))
        || t == "discontinued product"
}

fn parse_review_summary(v: &str) -> Option<ReviewSummary> {
    let mut total = None;
    let mut downloaded = None;
    let mut avg = None;
    let toks: Vec<&str> = v.split_whitespace().collect();
    let mut k = 0;
    while k < toks.len() {
        match toks[k] {
            "total:" => total = toks.get(k + 1).and_then(|t| t.parse().ok()),
            "downloaded:" => downloaded = toks.get(k + 1).and_then(|t| t.parse().ok()),
            "rating:" => avg = toks.get(k + 1).and_then(|t| t.parse().ok()),
            _ => {}
        }
        k += 1;
    }
    Some(ReviewSummary {
        total: total?,
        downloaded: downloaded?,
        avg_rating: avg?,
    })
}

/// Parses `|Name[id]|Name[id]...` into an ordered category path. The id is
/// taken from the last bracket pair of each token, so names may themselves
/// contain brackets.
pub fn parse_category_line(line: &str) -> Result<CategoryPath> {
    let line = line.trim();
    let body = line.strip_prefix('|').unwrap_or(line);
    let mut levels = Vec::new();
    for token in body.split('|') {
        let bad = || Error::CategoryToken(token.to_string());
        let inner = token.strip_suffix(']').ok_or_else(bad)?;
        let open = inner.rfind('[').ok_or_else(bad)?;
        let digits = &inner[open + 1..];
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let id: u32 = digits.parse().map_err(|_| bad())?;
        levels.push((inner[..open].to_string(), id));
    }
    Ok(CategoryPath { levels })
}
