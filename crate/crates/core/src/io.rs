//! File formats: digraph documents, group catalogs, and the three CSV
//! schemas, plus whole-run validation.

use std::collections::HashMap;

use crate::altinv::AttachmentType;
use crate::census::{AtdEntry, AtdRecord, GhatRecord, HatRecord};
use crate::classify::CayleyType;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup};

/// Serialises a digraph as a self-describing text document: a header line
/// with the vertex count, one line of sorted out-neighbors per vertex, and
/// `#` comment lines (the name travels in one).
pub fn write_digraph(d: &Digraph, name: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        out.push_str(&format!("# name: {name}\n"));
    }
    out.push_str(&format!("ATD-DIGRAPH v1 {}\n", d.order()));
    for v in 0..d.order() as u32 {
        let row: Vec<String> = d.out_neighbors(v).iter().map(|w| w.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a digraph document, returning the digraph and the recorded name
/// when present.
pub fn read_digraph(text: &str) -> Result<(Digraph, Option<String>)> {
    let mut name = None;
    let mut order: Option<usize> = None;
    let mut arcs: Vec<(u32, u32)> = Vec::new();
    let mut vertex = 0u32;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(n) = comment.trim().strip_prefix("name:") {
                name = Some(n.trim().to_string());
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("ATD-DIGRAPH v1") {
            if order.is_some() {
                return Err(Error::Parse {
                    position: lineno,
                    message: "duplicate header".into(),
                });
            }
            order = Some(rest.trim().parse().map_err(|_| Error::Parse {
                position: lineno,
                message: "bad vertex count".into(),
            })?);
            continue;
        }
        if line.is_empty() && (order.is_none() || vertex as usize >= order.unwrap()) {
            continue;
        }
        let n = order.ok_or(Error::Parse {
            position: lineno,
            message: "neighbor line before header".into(),
        })?;
        if (vertex as usize) >= n {
            return Err(Error::Parse {
                position: lineno,
                message: "more neighbor lines than vertices".into(),
            });
        }
        // An empty line inside the block is a sink vertex.
        for tok in line.split_whitespace() {
            let w: u32 = tok.parse().map_err(|_| Error::Parse {
                position: lineno,
                message: format!("bad neighbor `{tok}`"),
            })?;
            if w as usize >= n {
                return Err(Error::VertexOutOfRange { vertex: w, order: n });
            }
            arcs.push((vertex, w));
        }
        vertex += 1;
    }
    let n = order.ok_or(Error::Parse {
        position: 0,
        message: "missing header".into(),
    })?;
    if (vertex as usize) != n {
        return Err(Error::Parse {
            position: 0,
            message: format!("expected {n} neighbor lines, found {vertex}"),
        });
    }
    Ok((Digraph::from_arcs(n, &arcs)?, name))
}

/// Parses a group catalog: blocks of the form
/// `GROUP <name> degree=<d> [order=<o>]` followed by one permutation per
/// line as `d` space-separated images, ended by a blank line or EOF.
/// A declared order is verified against the stabiliser chain.
pub fn read_group_catalog(text: &str) -> Result<Vec<(String, PermutationGroup)>> {
    let mut out = Vec::new();
    let mut header: Option<(String, usize, Option<u128>)> = None;
    let mut gens: Vec<Permutation> = Vec::new();

    let finish = |header: &mut Option<(String, usize, Option<u128>)>,
                      gens: &mut Vec<Permutation>,
                      out: &mut Vec<(String, PermutationGroup)>|
     -> Result<()> {
        if let Some((name, degree, declared)) = header.take() {
            let group = PermutationGroup::from_generators(degree, std::mem::take(gens))?;
            if let Some(order) = declared {
                let actual = group.order()?;
                if actual != order {
                    return Err(Error::Parse {
                        position: 0,
                        message: format!(
                            "group {name}: declared order {order}, computed {actual}"
                        ),
                    });
                }
            }
            out.push((name, group));
        }
        Ok(())
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            finish(&mut header, &mut gens, &mut out)?;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("GROUP ") {
            finish(&mut header, &mut gens, &mut out)?;
            let mut name = None;
            let mut degree = None;
            let mut order = None;
            for tok in rest.split_whitespace() {
                if let Some(d) = tok.strip_prefix("degree=") {
                    degree = Some(d.parse().map_err(|_| Error::Parse {
                        position: lineno,
                        message: "bad degree".into(),
                    })?);
                } else if let Some(o) = tok.strip_prefix("order=") {
                    order = Some(o.parse().map_err(|_| Error::Parse {
                        position: lineno,
                        message: "bad order".into(),
                    })?);
                } else if name.is_none() {
                    name = Some(tok.to_string());
                }
            }
            let name = name.ok_or(Error::Parse {
                position: lineno,
                message: "GROUP line needs a name".into(),
            })?;
            let degree = degree.ok_or(Error::Parse {
                position: lineno,
                message: "GROUP line needs degree=<d>".into(),
            })?;
            header = Some((name, degree, order));
            continue;
        }
        let (_, degree, _) = header.as_ref().ok_or(Error::Parse {
            position: lineno,
            message: "permutation line before GROUP header".into(),
        })?;
        let images: Vec<u32> = line
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| Error::Parse {
                    position: lineno,
                    message: format!("bad image `{t}`"),
                })
            })
            .collect::<Result<_>>()?;
        if images.len() != *degree {
            return Err(Error::Parse {
                position: lineno,
                message: format!("expected {degree} images, got {}", images.len()),
            });
        }
        gens.push(Permutation::from_images(images)?);
    }
    finish(&mut header, &mut gens, &mut out)?;
    Ok(out)
}

pub fn write_group_catalog(groups: &[(String, PermutationGroup)]) -> Result<String> {
    let mut out = String::new();
    for (name, g) in groups {
        out.push_str(&format!(
            "GROUP {} degree={} order={}\n",
            name,
            g.degree(),
            g.order()?
        ));
        for p in g.generators() {
            let images: Vec<String> = p.images().iter().map(|x| x.to_string()).collect();
            out.push_str(&images.join(" "));
            out.push('\n');
        }
        out.push('\n');
    }
    Ok(out)
}

pub const ATD_HEADER: &str = "Name,|V|,SelfOpp,Opp,IsUndAT,UndGrph,s,GvAb,|Tv:Gv|,|Av:Gv|,Solv,Rad,AtNo,AtTy,|AltCyc|,AltExp,AltPer,AltSeq,IsGWD";
pub const GHAT_HEADER: &str = "Name,|V|,gir,bip,CayTy,|Av|,|Gv|,solv,[|ConCyc|]";
pub const HAT_HEADER: &str =
    "Name,|V|,gir,bip,IsCay,|Gv|,Solv,Rad,AtNo,AtTy,AltExp,AltPer,AltSeq,CCa,CCb,MetaCircTy";

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn solv(b: bool) -> &'static str {
    if b {
        "solve"
    } else {
        "n-solv"
    }
}

fn attachment_type(t: AttachmentType) -> &'static str {
    match t {
        AttachmentType::Loose => "loose",
        AttachmentType::Antipodal => "antipodal",
        AttachmentType::Tight => "tight",
        AttachmentType::Other => "---",
    }
}

fn cayley(c: CayleyType) -> &'static str {
    match c {
        CayleyType::Circulant => "Circ",
        CayleyType::AbelianCayley => "AbCay",
        CayleyType::Cayley => "Cay",
        CayleyType::NonCayley => "n-Cay",
        CayleyType::Unknown => "?",
    }
}

fn int_sequence(seq: &[usize]) -> String {
    let items: Vec<String> = seq.iter().map(|s| s.to_string()).collect();
    format!("[{}]", items.join(";"))
}

fn option_index(v: Option<u128>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => "?".to_string(),
    }
}

/// Commas inside field values become semicolons; the rule that keeps the
/// documents one-value-per-comma.
fn field(s: String) -> String {
    s.replace(',', ";")
}

fn atd_row(e: &AtdEntry, r: &AtdRecord) -> String {
    let cols = [
        field(e.name.clone()),
        r.order.to_string(),
        yes_no(r.self_opposite).to_string(),
        field(e.opposite_name.clone()),
        yes_no(r.underlying_arc_transitive).to_string(),
        field(e.underlying_name.clone()),
        r.s_level.to_string(),
        if r.stab_abelian { "Ab" } else { "n-Ab" }.to_string(),
        option_index(r.index_to_at_overgroup),
        option_index(r.index_in_graph_aut),
        solv(r.solvable).to_string(),
        r.radius.to_string(),
        r.attachment.to_string(),
        attachment_type(r.attachment_type).to_string(),
        r.alt_cycle_count.to_string(),
        r.alter_exponent.to_string(),
        r.alter_perimeter.to_string(),
        int_sequence(&r.alter_sequence),
        yes_no(r.is_gw).to_string(),
    ];
    cols.join(",")
}

pub fn atd_csv(entries: &[AtdEntry]) -> Result<String> {
    let mut out = String::from(ATD_HEADER);
    out.push('\n');
    for e in entries {
        let r = e
            .record
            .as_ref()
            .ok_or_else(|| Error::Census(format!("{} has no record", e.name)))?;
        out.push_str(&atd_row(e, r));
        out.push('\n');
    }
    Ok(out)
}

fn girth(g: Option<usize>) -> String {
    match g {
        Some(v) => v.to_string(),
        None => "inf".to_string(),
    }
}

pub fn ghat_csv(records: &[GhatRecord]) -> Result<String> {
    let mut out = String::from(GHAT_HEADER);
    out.push('\n');
    for g in records {
        let profile: Vec<String> = g
            .consistent_profile
            .iter()
            .map(|&(len, chiral)| format!("{len}{}", if chiral { "c" } else { "s" }))
            .collect();
        let cols = [
            field(g.name.clone()),
            g.order.to_string(),
            girth(g.girth),
            if g.bipartite { "b" } else { "nb" }.to_string(),
            cayley(g.cayley).to_string(),
            g.graph_stab_order.to_string(),
            int_sequence_u128(&g.hat_stab_orders),
            solv(g.solvable).to_string(),
            format!("[{}]", profile.join(";")),
        ];
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn int_sequence_u128(seq: &[u128]) -> String {
    let items: Vec<String> = seq.iter().map(|s| s.to_string()).collect();
    format!("[{}]", items.join(";"))
}

pub fn hat_csv(records: &[HatRecord]) -> Result<String> {
    let mut out = String::from(HAT_HEADER);
    out.push('\n');
    for h in records {
        let cols = [
            field(h.name.clone()),
            h.order.to_string(),
            girth(h.girth),
            if h.bipartite { "b" } else { "nb" }.to_string(),
            match h.cayley {
                CayleyType::NonCayley => "n-Cay".to_string(),
                CayleyType::Unknown => "?".to_string(),
                _ => "Cay".to_string(),
            },
            h.stab_order.to_string(),
            solv(h.solvable).to_string(),
            h.radius.to_string(),
            h.attachment.to_string(),
            attachment_type(h.attachment_type).to_string(),
            h.alter_exponent.to_string(),
            h.alter_perimeter.to_string(),
            int_sequence(&h.alter_sequence),
            h.shortest_consistent.to_string(),
            h.longest_consistent.to_string(),
            h.metacirculant_classes.clone().unwrap_or_else(|| "?".to_string()),
        ];
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Re-parses and recomputes every CSV row from the digraph documents and
/// reports the differences (empty = clean).
pub fn validate_csv(documents: &HashMap<String, Digraph>, csv: &str) -> Result<Vec<String>> {
    let mut lines = csv.lines();
    let header = lines.next().unwrap_or("");
    let rows: Vec<&str> = lines.filter(|l| !l.trim().is_empty()).collect();
    match header {
        h if h == ATD_HEADER => validate_atd_rows(documents, &rows),
        h if h == GHAT_HEADER || h == HAT_HEADER => validate_family_rows(documents, csv),
        _ => Err(Error::Parse {
            position: 0,
            message: "unrecognised CSV header".into(),
        }),
    }
}

fn validate_atd_rows(
    documents: &HashMap<String, Digraph>,
    rows: &[&str],
) -> Result<Vec<String>> {
    let mut entries = crate::census::entries_from_documents(documents)?;
    // Family derivation assigns the underlying-graph names.
    let _ = crate::census::derive_families(&mut entries)?;
    let expected = atd_csv(&entries)?;
    let expected_rows: HashMap<&str, &str> = expected
        .lines()
        .skip(1)
        .map(|l| (l.split(',').next().unwrap_or(""), l))
        .collect();
    let mut diffs = Vec::new();
    for row in rows {
        let name = row.split(',').next().unwrap_or("");
        match expected_rows.get(name) {
            None => diffs.push(format!("{name}: no digraph document for this row")),
            Some(exp) if *exp != *row => {
                diffs.push(format!("{name}: row mismatch\n  file: {row}\n  real: {exp}"))
            }
            _ => {}
        }
    }
    if rows.len() != expected_rows.len() {
        diffs.push(format!(
            "row count {} differs from document count {}",
            rows.len(),
            expected_rows.len()
        ));
    }
    Ok(diffs)
}

fn validate_family_rows(
    documents: &HashMap<String, Digraph>,
    csv: &str,
) -> Result<Vec<String>> {
    let mut entries = crate::census::entries_from_documents(documents)?;
    let (ghat, hat) = crate::census::derive_families(&mut entries)?;
    let expected = if csv.starts_with(GHAT_HEADER) {
        ghat_csv(&ghat)?
    } else {
        hat_csv(&hat)?
    };
    let mut diffs = Vec::new();
    let expected_lines: Vec<&str> = expected.lines().collect();
    let file_lines: Vec<&str> = csv.lines().collect();
    if expected_lines.len() != file_lines.len() {
        diffs.push(format!(
            "line count {} differs from recomputation {}",
            file_lines.len(),
            expected_lines.len()
        ));
    }
    for (i, (a, b)) in file_lines.iter().zip(&expected_lines).enumerate() {
        if a != b {
            diffs.push(format!("line {}: mismatch\n  file: {a}\n  real: {b}", i + 1));
        }
    }
    Ok(diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::wreath;

    #[test]
    fn digraph_document_round_trip() {
        let w3 = wreath(3).unwrap();
        let text = write_digraph(&w3, Some("ATD[6;1]"));
        let (parsed, name) = read_digraph(&text).unwrap();
        assert_eq!(parsed, w3);
        assert_eq!(name.as_deref(), Some("ATD[6;1]"));
    }

    #[test]
    fn document_rejects_bad_input() {
        assert!(read_digraph("ATD-DIGRAPH v1 2\n0 7\n1\n").is_err());
        assert!(read_digraph("ATD-DIGRAPH v1 2\nATD-DIGRAPH v1 2\n0\n1\n").is_err());
        assert!(read_digraph("0 1\n").is_err());
        assert!(read_digraph("ATD-DIGRAPH v1 3\n1\n2\n").is_err());
    }

    #[test]
    fn sink_vertices_have_empty_lines() {
        let d = Digraph::from_arcs(2, &[(0, 1)]).unwrap();
        let doc = write_digraph(&d, None);
        let (parsed, _) = read_digraph(&doc).unwrap();
        assert_eq!(parsed, d);
        // Explicit form: vertex 1 has no out-neighbors.
        let (parsed, _) = read_digraph("ATD-DIGRAPH v1 2\n1\n\n").unwrap();
        assert_eq!(parsed, d);
    }

    #[test]
    fn group_catalog_round_trip() {
        let s3 = PermutationGroup::from_generators(
            3,
            vec![
                Permutation::from_cycles(3, &[vec![0, 1]]).unwrap(),
                Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap(),
            ],
        )
        .unwrap();
        let text = write_group_catalog(&[("S3".into(), s3)]).unwrap();
        let parsed = read_group_catalog(&text).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0].0, "S3");
        assert_eq!(parsed[0].1.order().unwrap(), 6);
    }

    #[test]
    fn catalog_verifies_declared_order() {
        let text = "GROUP bad degree=3 order=7\n1 0 2\n0 1 2\n";
        assert!(read_group_catalog(text).is_err());
        let text = "GROUP a degree=3 order=2\n1 0 2\n\nGROUP b degree=2 order=2\n1 0\n";
        assert_eq!(read_group_catalog(text).unwrap().len(), 2);
    }

    #[test]
    fn headers_have_the_documented_column_counts() {
        assert_eq!(ATD_HEADER.split(',').count(), 19);
        assert_eq!(GHAT_HEADER.split(',').count(), 9);
        assert_eq!(HAT_HEADER.split(',').count(), 16);
    }
}
