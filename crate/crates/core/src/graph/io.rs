//! Graph persistence: a compact binary snapshot, a CSV edge list with a
//! node-attribute sidecar, and GEXF/CSV exports for visualization tools.

use super::{Adjacency, CoPurchaseGraph, NodeAttrs};
use crate::error::{Error, Result};
use crate::meta::Group;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

const MAGIC: &[u8; 8] = b"CPGRAPH1";

pub fn save_binary(g: &CoPurchaseGraph, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    bincode::serialize_into(&mut w, g)?;
    w.flush()?;
    Ok(())
}

pub fn load_binary(path: impl AsRef<Path>) -> Result<CoPurchaseGraph> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Serde("not a graph snapshot".into()));
    }
    let mut g: CoPurchaseGraph = bincode::deserialize_from(r)?;
    g.reindex();
    g.check_invariants().map_err(Error::Invariant)?;
    Ok(g)
}

fn encode_categories(paths: &[Vec<u32>]) -> String {
    paths
        .iter()
        .map(|p| p.iter().map(u32::to_string).collect::<Vec<_>>().join("/"))
        .collect::<Vec<_>>()
        .join(";")
}

fn decode_categories(s: &str) -> Result<Vec<Vec<u32>>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|p| {
            if p.is_empty() {
                return Ok(Vec::new());
            }
            p.split('/')
                .map(|id| id.parse().map_err(|_| Error::invalid(format!("bad category id `{id}`"))))
                .collect()
        })
        .collect()
}

/// Writes `u,v` edges (each undirected edge once) and a
/// `node,asin,group,categories` sidecar.
pub fn write_edge_list<W1: Write, W2: Write>(g: &CoPurchaseGraph, edges: W1, nodes: W2) -> Result<()> {
    let mut ew = csv::Writer::from_writer(edges);
    ew.write_record(["u", "v"])?;
    for (u, v) in g.edges() {
        ew.write_record([u.to_string(), v.to_string()])?;
    }
    ew.flush()?;
    let mut nw = csv::Writer::from_writer(nodes);
    nw.write_record(["node", "asin", "group", "categories"])?;
    for (i, a) in g.node_attrs().iter().enumerate() {
        nw.write_record([
            i.to_string(),
            a.asin.clone(),
            a.group.to_string(),
            encode_categories(&a.categories),
        ])?;
    }
    nw.flush()?;
    Ok(())
}

pub fn read_edge_list<R1: Read, R2: Read>(edges: R1, nodes: R2) -> Result<CoPurchaseGraph> {
    let mut attrs = Vec::new();
    for (row, rec) in csv::Reader::from_reader(nodes).records().enumerate() {
        let rec = rec?;
        let idx: usize = rec[0].parse().map_err(|_| Error::invalid(format!("bad node index on row {row}")))?;
        if idx != row {
            return Err(Error::invalid(format!("node rows must be dense and ordered; row {row} has {idx}")));
        }
        attrs.push(NodeAttrs {
            asin: rec[1].to_string(),
            group: Group::parse(&rec[2]),
            categories: decode_categories(&rec[3])?,
        });
    }
    let n = attrs.len();
    let mut list = Vec::new();
    for rec in csv::Reader::from_reader(edges).records() {
        let rec = rec?;
        let u: usize = rec[0].parse().map_err(|_| Error::invalid(format!("bad edge `{}`", &rec[0])))?;
        let v: usize = rec[1].parse().map_err(|_| Error::invalid(format!("bad edge `{}`", &rec[1])))?;
        if u >= n || v >= n {
            return Err(Error::invalid(format!("edge ({u},{v}) references a missing node")));
        }
        list.push((u, v));
    }
    Ok(CoPurchaseGraph::with_attrs(attrs, list))
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if (c as u32) < 0x20 && c != '\t' && c != '\n' && c != '\r' => {}
            c => out.push(c),
        }
    }
    out
}

/// GEXF 1.3 with `group` and `degree` node attributes, labels set to ASINs.
pub fn write_gexf<W: Write>(g: &CoPurchaseGraph, out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(w, r#"<gexf xmlns="http://gexf.net/1.3" version="1.3">"#)?;
    writeln!(w, r#"  <graph mode="static" defaultedgetype="undirected">"#)?;
    writeln!(w, r#"    <attributes class="node">"#)?;
    writeln!(w, r#"      <attribute id="0" title="group" type="string"/>"#)?;
    writeln!(w, r#"      <attribute id="1" title="degree" type="integer"/>"#)?;
    writeln!(w, r#"    </attributes>"#)?;
    writeln!(w, "    <nodes>")?;
    for (i, a) in g.node_attrs().iter().enumerate() {
        writeln!(
            w,
            r#"      <node id="{i}" label="{}"><attvalues><attvalue for="0" value="{}"/><attvalue for="1" value="{}"/></attvalues></node>"#,
            xml_escape(&a.asin),
            xml_escape(a.group.as_str()),
            g.degree(i)
        )?;
    }
    writeln!(w, "    </nodes>")?;
    writeln!(w, "    <edges>")?;
    for (k, (u, v)) in g.edges().enumerate() {
        writeln!(w, r#"      <edge id="{k}" source="{u}" target="{v}"/>"#)?;
    }
    writeln!(w, "    </edges>")?;
    writeln!(w, "  </graph>")?;
    writeln!(w, "</gexf>")?;
    w.flush()?;
    Ok(())
}

/// Gephi-style CSV pair: `Id,Label,group,degree` nodes and `Source,Target` edges.
pub fn write_viz_csv<W1: Write, W2: Write>(g: &CoPurchaseGraph, nodes: W1, edges: W2) -> Result<()> {
    let mut nw = csv::Writer::from_writer(nodes);
    nw.write_record(["Id", "Label", "group", "degree"])?;
    for (i, a) in g.node_attrs().iter().enumerate() {
        nw.write_record([i.to_string(), a.asin.clone(), a.group.to_string(), g.degree(i).to_string()])?;
    }
    nw.flush()?;
    let mut ew = csv::Writer::from_writer(edges);
    ew.write_record(["Source", "Target", "Type"])?;
    for (u, v) in g.edges() {
        ew.write_record([u.to_string(), v.to_string(), "Undirected".to_string()])?;
    }
    ew.flush()?;
    Ok(())
}
