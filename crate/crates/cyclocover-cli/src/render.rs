//! Output-only formatting for the table and search subcommands.

use cyclocover::monodromy::Signature;
use cyclocover::polygon::NewtonPolygon;
use cyclocover::survey::{SearchHit, TableRow};
use serde_json::json;

fn label(poly: &NewtonPolygon, ascii: bool) -> String {
    if ascii {
        poly.label_ascii()
    } else {
        poly.label()
    }
}

fn inertia(a: [u64; 3]) -> String {
    format!("({},{},{})", a[0], a[1], a[2])
}

fn signature(sig: &Signature) -> String {
    let parts: Vec<String> = sig.values().iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(","))
}

fn class_header(members: &[u64], m: u64) -> String {
    let parts: Vec<String> = members.iter().map(|r| r.to_string()).collect();
    format!("{} mod {}", parts.join(","), m)
}

fn orbit_list(subgroup: &std::collections::BTreeSet<u64>, m: u64) -> String {
    // partition of nonzero residues into orbits under the subgroup,
    // shown in the prime-orbits header row
    let mut seen = std::collections::BTreeSet::new();
    let mut orbits = Vec::new();
    for n in 1..m {
        if seen.contains(&n) {
            continue;
        }
        let orbit: std::collections::BTreeSet<u64> =
            subgroup.iter().map(|&h| h * n % m).collect();
        seen.extend(orbit.iter().copied());
        let parts: Vec<String> = orbit.iter().map(|r| r.to_string()).collect();
        orbits.push(format!("({})", parts.join(",")));
    }
    orbits.join(" ")
}

pub fn table_markdown(m: u64, rows: &[TableRow], ascii: bool) -> String {
    let groups: Vec<_> = rows
        .first()
        .map(|r| r.cells.iter().map(|(g, _)| g.clone()).collect())
        .unwrap_or_default();
    let mut out = String::new();
    let mut header = vec!["a".to_string(), "signature".to_string()];
    header.extend(groups.iter().map(|g| class_header(&g.members, m)));
    out.push_str(&format!("| {} |\n", header.join(" | ")));
    out.push_str(&format!(
        "|{}\n",
        "---|".repeat(header.len())
    ));
    let mut prime_row = vec!["prime orbits".to_string(), String::new()];
    prime_row.extend(groups.iter().map(|g| {
        if g.members == [1] {
            "split".to_string()
        } else {
            orbit_list(&g.subgroup, m)
        }
    }));
    out.push_str(&format!("| {} |\n", prime_row.join(" | ")));
    for row in rows {
        let mut cells = vec![inertia(row.datum.a()), signature(&row.signature)];
        cells.extend(row.cells.iter().map(|(_, p)| label(p, ascii)));
        out.push_str(&format!("| {} |\n", cells.join(" | ")));
    }
    out
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn table_csv(m: u64, rows: &[TableRow], ascii: bool) -> String {
    let groups: Vec<_> = rows
        .first()
        .map(|r| r.cells.iter().map(|(g, _)| g.clone()).collect())
        .unwrap_or_default();
    let mut out = String::new();
    let mut header = vec!["a".to_string(), "signature".to_string()];
    header.extend(groups.iter().map(|g| class_header(&g.members, m)));
    out.push_str(&header.iter().map(|f| csv_quote(f)).collect::<Vec<_>>().join(","));
    out.push('\n');
    for row in rows {
        let mut cells = vec![inertia(row.datum.a()), signature(&row.signature)];
        cells.extend(row.cells.iter().map(|(_, p)| label(p, ascii)));
        out.push_str(&cells.iter().map(|f| csv_quote(f)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

pub fn table_json(m: u64, rows: &[TableRow], ascii: bool) -> String {
    let value = json!({
        "m": m,
        "rows": rows.iter().map(|row| json!({
            "m": row.datum.m(),
            "a": row.datum.a(),
            "genus": row.datum.genus(),
            "signature": row.signature.values(),
            "cells": row.cells.iter().map(|(g, p)| json!({
                "m": row.datum.m(),
                "a": row.datum.a(),
                "classes": g.members,
                "slopes": p.entries().iter().map(|&(s, mult)| json!({
                    "num": *s.numer(), "den": *s.denom(), "mult": mult
                })).collect::<Vec<_>>(),
                "p_rank": p.p_rank(),
                "supersingular": p.is_supersingular(),
                "label": label(p, ascii),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    let mut text = serde_json::to_string_pretty(&value).expect("valid json");
    text.push('\n');
    text
}

pub fn search_hit(hit: &SearchHit, compress: bool, ascii: bool) -> String {
    let (modulus, classes) = if compress {
        hit.compressed_congruence()
    } else {
        (hit.m, hit.classes.clone())
    };
    let classes: Vec<String> = classes.iter().map(|r| r.to_string()).collect();
    let which = match &hit.datum {
        Some(d) => format!("a={}", inertia(d.a())),
        None => "any a".to_string(),
    };
    format!(
        "m={}, {}, p ≡ {} mod {}: {} (g={})",
        hit.m,
        which,
        classes.join(","),
        modulus,
        label(&hit.polygon, ascii),
        hit.genus
    )
}
