//! Line-based text formats.
//!
//! Face instance:
//!
//! ```text
//! planar <n> <m>
//! edge <id> <u> <v> <cap>
//! rot <v> <dart>...
//! demand <u> <v> <face-id> <value>
//! ```
//!
//! Cut cover instance:
//!
//! ```text
//! cutcover <n>
//! cedge <id> <u> <v> <cost>
//! yedge <u> <v>
//! ```
//!
//! `#` starts a comment. Rationals are written `p/q` or as integers.

use std::fmt::Write;

use crate::cutcheck::{CutCertificate, Verdict};
use crate::cutcover::{CoverEdge, CutCoverInstance};
use crate::planar::{Edge, FaceDemand, FaceInstance, PlanarGraph};
use crate::rational::{self, Rational};
use crate::route::Flow;
use crate::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let words: Vec<&str> = l.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn num(line: usize, w: &str) -> Result<usize> {
    w.parse()
        .map_err(|_| err(line, format!("expected a nonnegative integer, found `{w}`")))
}

fn rat(line: usize, w: &str) -> Result<Rational> {
    rational::parse(w).ok_or_else(|| err(line, format!("expected a rational, found `{w}`")))
}

fn arity(line: usize, words: &[&str], n: usize) -> Result<()> {
    if words.len() != n {
        return Err(err(
            line,
            format!(
                "`{}` takes {} fields, found {}",
                words[0],
                n - 1,
                words.len() - 1
            ),
        ));
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<FaceInstance> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<Option<Edge>> = Vec::new();
    let mut rotation: Vec<Option<Vec<usize>>> = Vec::new();
    let mut demands = Vec::new();
    let mut last = 0;
    for (ln, w) in lines(text) {
        last = ln;
        match w[0] {
            "planar" => {
                arity(ln, &w, 3)?;
                if header.is_some() {
                    return Err(err(ln, "second `planar` line"));
                }
                let (n, m) = (num(ln, w[1])?, num(ln, w[2])?);
                header = Some((n, m));
                edges = vec![None; m];
                rotation = vec![None; n];
            }
            kw => {
                let Some((n, m)) = header else {
                    return Err(err(ln, "expected `planar <n> <m>` first"));
                };
                match kw {
                    "edge" => {
                        arity(ln, &w, 5)?;
                        let id = num(ln, w[1])?;
                        let (u, v) = (num(ln, w[2])?, num(ln, w[3])?);
                        let cap = rat(ln, w[4])?;
                        if id >= m {
                            return Err(err(ln, format!("edge id {id} outside 0..{m}")));
                        }
                        if u >= n || v >= n {
                            return Err(err(
                                ln,
                                format!("edge {id} has an endpoint outside 0..{n}"),
                            ));
                        }
                        if edges[id].is_some() {
                            return Err(err(ln, format!("edge {id} defined twice")));
                        }
                        edges[id] = Some(Edge { u, v, cap });
                    }
                    "rot" => {
                        if w.len() < 2 {
                            return Err(err(ln, "`rot` needs a vertex"));
                        }
                        let v = num(ln, w[1])?;
                        if v >= n {
                            return Err(err(ln, format!("vertex {v} outside 0..{n}")));
                        }
                        if rotation[v].is_some() {
                            return Err(err(ln, format!("rotation of {v} given twice")));
                        }
                        let darts = w[2..]
                            .iter()
                            .map(|d| num(ln, d))
                            .collect::<Result<Vec<_>>>()?;
                        rotation[v] = Some(darts);
                    }
                    "demand" => {
                        arity(ln, &w, 5)?;
                        let value = num(ln, w[4])? as u64;
                        demands.push(FaceDemand {
                            u: num(ln, w[1])?,
                            v: num(ln, w[2])?,
                            face: num(ln, w[3])?,
                            value,
                        });
                    }
                    other => return Err(err(ln, format!("unknown keyword `{other}`"))),
                }
            }
        }
    }
    if header.is_none() {
        return Err(err(last.max(1), "missing `planar <n> <m>` line"));
    }
    let edges = edges
        .into_iter()
        .enumerate()
        .map(|(i, e)| e.ok_or_else(|| err(last, format!("edge {i} is never defined"))))
        .collect::<Result<Vec<_>>>()?;
    let n = rotation.len();
    let rotation = rotation
        .into_iter()
        .map(Option::unwrap_or_default)
        .collect();
    let graph = PlanarGraph::new(n, edges, rotation)?;
    FaceInstance::new(graph, demands)
}

pub fn print_instance(inst: &FaceInstance) -> String {
    let g = &inst.graph;
    let mut s = String::new();
    writeln!(s, "planar {} {}", g.n(), g.m()).unwrap();
    for (i, e) in g.edges().iter().enumerate() {
        writeln!(s, "edge {i} {} {} {}", e.u, e.v, rational::fmt(&e.cap)).unwrap();
    }
    for (v, rot) in g.rotation().iter().enumerate() {
        let darts: Vec<String> = rot.iter().map(|d| d.to_string()).collect();
        writeln!(s, "rot {v} {}", darts.join(" ")).unwrap();
    }
    for d in &inst.demands {
        writeln!(s, "demand {} {} {} {}", d.u, d.v, d.face, d.value).unwrap();
    }
    s
}

pub fn parse_cutcover(text: &str) -> Result<CutCoverInstance> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(usize, CoverEdge)> = Vec::new();
    let mut y = Vec::new();
    let mut last = 0;
    for (ln, w) in lines(text) {
        last = ln;
        match w[0] {
            "cutcover" => {
                arity(ln, &w, 2)?;
                if n.is_some() {
                    return Err(err(ln, "second `cutcover` line"));
                }
                n = Some(num(ln, w[1])?);
            }
            "cedge" => {
                arity(ln, &w, 5)?;
                let id = num(ln, w[1])?;
                edges.push((
                    id,
                    CoverEdge {
                        u: num(ln, w[2])?,
                        v: num(ln, w[3])?,
                        cost: rat(ln, w[4])?,
                    },
                ));
            }
            "yedge" => {
                arity(ln, &w, 3)?;
                y.push((num(ln, w[1])?, num(ln, w[2])?));
            }
            other => return Err(err(ln, format!("unknown keyword `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| err(last.max(1), "missing `cutcover <n>` line"))?;
    edges.sort_by_key(|(id, _)| *id);
    for (i, (id, _)) in edges.iter().enumerate() {
        if *id != i {
            return Err(err(
                last,
                format!("candidate edge ids must be 0..{} without gaps", edges.len()),
            ));
        }
    }
    CutCoverInstance::new(n, edges.into_iter().map(|(_, e)| e).collect(), y)
}

pub fn print_cutcover(inst: &CutCoverInstance) -> String {
    let mut s = String::new();
    writeln!(s, "cutcover {}", inst.n).unwrap();
    for (i, e) in inst.edges.iter().enumerate() {
        writeln!(s, "cedge {i} {} {} {}", e.u, e.v, rational::fmt(&e.cost)).unwrap();
    }
    for (u, v) in &inst.y {
        writeln!(s, "yedge {u} {v}").unwrap();
    }
    s
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn print_certificate(c: &CutCertificate) -> String {
    let mut s = String::new();
    match c.verdict {
        Verdict::Satisfied => writeln!(s, "verdict satisfied").unwrap(),
        Verdict::Violated => {
            writeln!(s, "verdict violated").unwrap();
            writeln!(s, "set {}", join(&c.set)).unwrap();
            writeln!(s, "supply {}", rational::fmt(&c.supply)).unwrap();
            writeln!(s, "demand {}", rational::fmt(&c.demand)).unwrap();
        }
    }
    s
}

pub fn print_flow(f: &Flow) -> String {
    let mut s = String::new();
    writeln!(s, "lambda {}", rational::fmt(&f.lambda)).unwrap();
    for p in &f.paths {
        writeln!(
            s,
            "path {} {} {}",
            p.demand,
            rational::fmt(&p.value),
            join(&p.edges)
        )
        .unwrap();
    }
    s
}

/// Graphviz rendering: supply edges labelled with capacity (and load when
/// given), demands dashed and labelled with their value.
pub fn to_dot(inst: &FaceInstance, loads: Option<&[Rational]>) -> String {
    let g = &inst.graph;
    let mut s = String::from("graph instance {\n  node [shape=circle];\n");
    for v in 0..g.n() {
        writeln!(s, "  {v};").unwrap();
    }
    for (i, e) in g.edges().iter().enumerate() {
        let label = match loads {
            Some(l) => format!("{}/{}", rational::fmt(&l[i]), rational::fmt(&e.cap)),
            None => rational::fmt(&e.cap),
        };
        writeln!(s, "  {} -- {} [label=\"e{i}: {label}\"];", e.u, e.v).unwrap();
    }
    for (i, d) in inst.demands.iter().enumerate() {
        writeln!(
            s,
            "  {} -- {} [style=dashed, color=red, constraint=false, label=\"d{i}: {}\"];",
            d.u, d.v, d.value
        )
        .unwrap();
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "\
# a triangle with one demand
planar 3 3
edge 0 0 1 1
edge 1 1 2 3/2
edge 2 2 0 1
rot 0 0 5
rot 1 2 1
rot 2 4 3
demand 0 2 0 1
";

    #[test]
    fn round_trip() {
        let inst = parse_instance(TRIANGLE).unwrap();
        assert_eq!(inst.graph.faces().len(), 2);
        let again = parse_instance(&print_instance(&inst)).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn errors_name_lines() {
        let bad = TRIANGLE.replace("edge 1 1 2 3/2", "edge 1 1 2 x");
        match parse_instance(&bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_instance("edge 0 0 1 1"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn cutcover_round_trip() {
        let text = "cutcover 3\ncedge 0 0 1 2\ncedge 1 1 2 1/2\nyedge 0 2\n";
        let inst = parse_cutcover(text).unwrap();
        assert_eq!(print_cutcover(&inst), text);
    }

    #[test]
    fn dot_mentions_every_edge() {
        let inst = parse_instance(TRIANGLE).unwrap();
        let dot = to_dot(&inst, None);
        assert_eq!(dot.matches(" -- ").count(), 4);
        assert!(dot.contains("style=dashed"));
    }
}
