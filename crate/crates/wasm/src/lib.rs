//! Browser bindings for the demo page in `www/`. Every entry point takes
//! plain strings and numbers and returns JSON text.

use osp_core::character::{osp_character, schur_expand};
use osp_core::crystal::{build_graph, check_connected, highest_element, Convention};
use osp_core::osp::{enumerate, GKind, PShape};
use osp_core::Alphabet;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Keeps the page responsive.
const MAX_NODES: usize = 3000;

fn setup(g: &str, lambda: &str, ell: usize, m: u32, n: u32) -> Result<(PShape, Alphabet), String> {
    let g: GKind = g.parse().map_err(|e: osp_core::Error| e.to_string())?;
    let parts = lambda
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().map_err(|_| format!("bad part {p:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let shape = PShape::new(g, parts, ell).map_err(|e| e.to_string())?;
    if m == 0 {
        return Err("m must be at least 1".into());
    }
    let alphabet = Alphabet::sup(m, n);
    shape.check_fits(&alphabet).map_err(|e| e.to_string())?;
    Ok((shape, alphabet))
}

/// Tableaux of the shape up to `degree` cells, as display strings.
#[wasm_bindgen]
pub fn tableaux(g: &str, lambda: &str, ell: usize, m: u32, n: u32, degree: usize) -> Result<String, String> {
    let (shape, alphabet) = setup(g, lambda, ell, m, n)?;
    let all = enumerate(&shape, &alphabet, degree);
    let rows: Vec<_> = all.iter().map(|t| json!({ "tableau": t.to_string(), "degree": t.degree() })).collect();
    Ok(json!({ "shape": shape.to_string(), "alphabet": alphabet.to_string(), "tableaux": rows }).to_string())
}

/// Crystal graph: node labels, edges and the BFS depth of each node from
/// the sources, for a layered drawing.
#[wasm_bindgen]
pub fn crystal(g: &str, lambda: &str, ell: usize, m: u32, n: u32, degree: usize) -> Result<String, String> {
    let (shape, alphabet) = setup(g, lambda, ell, m, n)?;
    let conv = Convention::for_alphabet(&alphabet);
    let seed = highest_element(&shape, &alphabet, conv).map_err(|e| e.to_string())?;
    let graph = build_graph(&seed, &alphabet, conv, degree, MAX_NODES);
    let conn = check_connected(&graph);
    let mut out_edges = vec![Vec::new(); graph.nodes.len()];
    for e in &graph.edges {
        out_edges[e.from].push(e.to);
    }
    let mut depth = vec![usize::MAX; graph.nodes.len()];
    let mut queue: std::collections::VecDeque<usize> = conn.sources.iter().copied().collect();
    for &s in &queue {
        depth[s] = 0;
    }
    while let Some(v) = queue.pop_front() {
        for &w in &out_edges[v] {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let nodes: Vec<_> = graph
        .nodes
        .iter()
        .map(|v| json!({ "id": v.id, "label": v.tableau.to_string(), "weight": v.weight.to_string(), "depth": depth[v.id] }))
        .collect();
    let edges: Vec<_> = graph.edges.iter().map(|e| json!({ "from": e.from, "to": e.to, "index": e.index.to_string() })).collect();
    Ok(json!({
        "nodes": nodes,
        "edges": edges,
        "truncated": graph.truncated,
        "cut_edges": graph.truncated_edges.len(),
        "sources": conn.sources,
    })
    .to_string())
}

/// Character coefficients together with the Schur expansion check.
#[wasm_bindgen]
pub fn character(g: &str, lambda: &str, ell: usize, m: u32, n: u32, degree: usize) -> Result<String, String> {
    let (shape, alphabet) = setup(g, lambda, ell, m, n)?;
    let ch = osp_character(&shape, &alphabet, degree);
    let letters: Vec<String> = alphabet.letters().iter().map(|a| a.to_string()).collect();
    let terms: Vec<_> = ch
        .terms
        .iter()
        .map(|(w, c)| json!({ "weight": alphabet.letters().iter().map(|&a| w.get(a)).collect::<Vec<_>>(), "coefficient": c }))
        .collect();
    let report = schur_expand(&shape, &alphabet, degree);
    let kostka: Vec<_> = report.kostka.iter().map(|(mu, k)| json!({ "mu": mu, "count": k })).collect();
    Ok(json!({ "letters": letters, "terms": terms, "kostka": kostka, "expansion_agrees": report.ok() }).to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn entry_points_return_json() {
        let t: Value = serde_json::from_str(&tableaux("c", "1", 1, 2, 0, 10).unwrap()).unwrap();
        assert_eq!(t["tableaux"].as_array().unwrap().len(), 4);
        let g: Value = serde_json::from_str(&crystal("c", "1", 1, 2, 0, 10).unwrap()).unwrap();
        assert_eq!(g["nodes"].as_array().unwrap().len(), 4);
        assert!(g["nodes"].as_array().unwrap().iter().all(|v| v["depth"].as_u64().unwrap() < 4));
        let c: Value = serde_json::from_str(&character("b", "1", 2, 1, 1, 4).unwrap()).unwrap();
        assert_eq!(c["expansion_agrees"], true);
    }

    #[test]
    fn bad_input_is_an_error() {
        assert!(tableaux("q", "", 1, 2, 0, 4).is_err());
        assert!(tableaux("b", "2", 1, 2, 0, 4).is_err());
        assert!(crystal("c", "", 1, 0, 1, 4).is_err());
    }
}
