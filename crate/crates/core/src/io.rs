//! PACE `.gr` graph and `.td` tree-decomposition text formats.
//!
//! Node and bag ids are 1-based on disk and 0-based in memory.

use std::fmt::Write as _;

use thiserror::Error;

use crate::decomposition::{validate_td, TdViolation, TreeDecomposition};
use crate::graph::{Graph, NodeSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrError {
    #[error("no problem line")]
    MissingProblemLine,
    #[error("line {line}: second problem line")]
    DuplicateProblemLine { line: usize },
    #[error("line {line}: edge before the problem line")]
    EdgeBeforeProblemLine { line: usize },
    #[error("line {line}: expected \"p tw <nodes> <edges>\"")]
    MalformedProblemLine { line: usize },
    #[error("line {line}: expected two node ids")]
    MalformedEdgeLine { line: usize },
    #[error("line {line}: {token:?} is not a nonnegative integer")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: node {node} out of range 1..={nodes}")]
    NodeOutOfRange { line: usize, node: usize, nodes: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedGr {
    pub graph: Graph,
    /// Edge count announced on the problem line.
    pub declared_edges: usize,
    /// Self-loops and repeated edges that were skipped.
    pub dropped_edges: usize,
}

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r').split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty() && t[0] != "c")
}

fn number(token: &str, line: usize) -> Result<usize, (usize, String)> {
    token.parse::<usize>().map_err(|_| (line, token.to_string()))
}

fn node(token: &str, line: usize, nodes: usize) -> Result<usize, GrError> {
    let v = number(token, line).map_err(|(line, token)| GrError::InvalidToken { line, token })?;
    if v == 0 || v > nodes {
        return Err(GrError::NodeOutOfRange { line, node: v, nodes });
    }
    Ok(v - 1)
}

pub fn parse_gr(text: &str) -> Result<ParsedGr, GrError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (line, t) in lines(text) {
        if t[0] == "p" {
            if header.is_some() {
                return Err(GrError::DuplicateProblemLine { line });
            }
            if t.len() != 4 || t[1] != "tw" {
                return Err(GrError::MalformedProblemLine { line });
            }
            let n = number(t[2], line).map_err(|(line, token)| GrError::InvalidToken { line, token })?;
            let m = number(t[3], line).map_err(|(line, token)| GrError::InvalidToken { line, token })?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(GrError::EdgeBeforeProblemLine { line });
        };
        if t.len() != 2 {
            return Err(GrError::MalformedEdgeLine { line });
        }
        edges.push((node(t[0], line, n)?, node(t[1], line, n)?));
    }
    let (n, m) = header.ok_or(GrError::MissingProblemLine)?;
    let (graph, dropped_edges) = Graph::from_edges_counting(n, edges);
    Ok(ParsedGr { graph, declared_edges: m, dropped_edges })
}

/// Canonical form: edges with the smaller endpoint first, ascending.
pub fn write_gr(g: &Graph) -> String {
    let mut out = format!("p tw {} {}\n", g.node_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", u + 1, v + 1);
    }
    out
}

/// Bags with ascending node ids, then backbone edges with the smaller bag
/// id first, ascending.
pub fn write_td(td: &TreeDecomposition, node_count: usize) -> String {
    let mut out = format!("s td {} {} {}\n", td.bag_count(), td.max_bag_size(), node_count);
    for (i, bag) in td.bags.iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for v in bag {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    for (a, b) in td.normalized_edges() {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TdParseError {
    #[error("no solution line")]
    MissingSolutionLine,
    #[error("line {line}: second solution line")]
    DuplicateSolutionLine { line: usize },
    #[error("line {line}: content before the solution line")]
    BeforeSolutionLine { line: usize },
    #[error("line {line}: expected \"s td <bags> <max bag size> <nodes>\"")]
    MalformedSolutionLine { line: usize },
    #[error("line {line}: malformed line")]
    MalformedLine { line: usize },
    #[error("line {line}: {token:?} is not a nonnegative integer")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: bag id {id} out of range 1..={bags}")]
    BagIdOutOfRange { line: usize, id: usize, bags: usize },
    #[error("line {line}: bag {id} listed twice")]
    DuplicateBag { line: usize, id: usize },
    #[error("bag {0} is never listed")]
    MissingBag(usize),
    #[error("line {line}: node {node} out of range 1..={nodes}")]
    NodeOutOfRange { line: usize, node: usize, nodes: usize },
    #[error("line {line}: node {node} listed twice in one bag")]
    DuplicateNode { line: usize, node: usize },
    #[error("solution line claims {declared} nodes, graph has {actual}")]
    NodeCountMismatch { declared: usize, actual: usize },
    #[error("solution line claims max bag size {declared}, largest bag has {actual}")]
    MaxBagMismatch { declared: usize, actual: usize },
    #[error("backbone is not a tree: {0}")]
    Backbone(TdViolation),
}

/// Parses a decomposition of `g`. Checks the header against the body and
/// the backbone for being a tree; bag contents are checked by
/// [`validate_td`].
pub fn parse_td(text: &str, g: &Graph) -> Result<TreeDecomposition, TdParseError> {
    let int = |token: &str, line: usize| {
        number(token, line).map_err(|(line, token)| TdParseError::InvalidToken { line, token })
    };
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<NodeSet>> = Vec::new();
    let mut edges = Vec::new();
    for (line, t) in lines(text) {
        if t[0] == "s" {
            if header.is_some() {
                return Err(TdParseError::DuplicateSolutionLine { line });
            }
            if t.len() != 5 || t[1] != "td" {
                return Err(TdParseError::MalformedSolutionLine { line });
            }
            let (b, w, n) = (int(t[2], line)?, int(t[3], line)?, int(t[4], line)?);
            if n != g.node_count() {
                return Err(TdParseError::NodeCountMismatch { declared: n, actual: g.node_count() });
            }
            bags = vec![None; b];
            header = Some((b, w, n));
            continue;
        }
        let Some((b, _, n)) = header else {
            return Err(TdParseError::BeforeSolutionLine { line });
        };
        let bag_id = |token: &str| -> Result<usize, TdParseError> {
            let id = int(token, line)?;
            if id == 0 || id > b {
                return Err(TdParseError::BagIdOutOfRange { line, id, bags: b });
            }
            Ok(id - 1)
        };
        if t[0] == "b" {
            if t.len() < 2 {
                return Err(TdParseError::MalformedLine { line });
            }
            let id = bag_id(t[1])?;
            if bags[id].is_some() {
                return Err(TdParseError::DuplicateBag { line, id: id + 1 });
            }
            let mut nodes = Vec::with_capacity(t.len() - 2);
            for token in &t[2..] {
                let v = int(token, line)?;
                if v == 0 || v > n {
                    return Err(TdParseError::NodeOutOfRange { line, node: v, nodes: n });
                }
                nodes.push(v - 1);
            }
            let set = NodeSet::from_unsorted(nodes.clone());
            if set.len() != nodes.len() {
                nodes.sort_unstable();
                let dup = nodes.windows(2).find(|w| w[0] == w[1]).map_or(0, |w| w[0]);
                return Err(TdParseError::DuplicateNode { line, node: dup + 1 });
            }
            bags[id] = Some(set);
        } else {
            if t.len() != 2 {
                return Err(TdParseError::MalformedLine { line });
            }
            edges.push((bag_id(t[0])?, bag_id(t[1])?));
        }
    }
    let (_, declared_max, _) = header.ok_or(TdParseError::MissingSolutionLine)?;
    let bags: Vec<NodeSet> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or(TdParseError::MissingBag(i + 1)))
        .collect::<Result<_, _>>()?;
    let td = TreeDecomposition::new(bags, edges, None);
    if td.max_bag_size() != declared_max {
        return Err(TdParseError::MaxBagMismatch { declared: declared_max, actual: td.max_bag_size() });
    }
    td.check_backbone().map_err(TdParseError::Backbone)?;
    Ok(td)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TdCheckError {
    #[error(transparent)]
    Parse(#[from] TdParseError),
    #[error(transparent)]
    Invalid(#[from] TdViolation),
}

/// Coarse category of a rejected `.td` document.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationClass {
    Syntax,
    HeaderMismatch,
    BagIds,
    BackboneCycle,
    BackboneDisconnected,
    NodeOutOfRange,
    UncoveredNode,
    UncoveredEdge,
    DisconnectedOccurrence,
}

impl TdCheckError {
    pub fn class(&self) -> ViolationClass {
        use ViolationClass as C;
        let violation = |v: &TdViolation| match v {
            TdViolation::NoBags | TdViolation::RootOutOfRange(_) | TdViolation::EdgeOutOfRange(_) => C::BagIds,
            TdViolation::BackboneCycle(_) => C::BackboneCycle,
            TdViolation::BackboneDisconnected(_) => C::BackboneDisconnected,
            TdViolation::NodeOutOfRange { .. } => C::NodeOutOfRange,
            TdViolation::UncoveredNode(_) => C::UncoveredNode,
            TdViolation::UncoveredEdge(_) => C::UncoveredEdge,
            TdViolation::DisconnectedOccurrence(_) => C::DisconnectedOccurrence,
        };
        match self {
            TdCheckError::Invalid(v) | TdCheckError::Parse(TdParseError::Backbone(v)) => violation(v),
            TdCheckError::Parse(e) => match e {
                TdParseError::NodeCountMismatch { .. } | TdParseError::MaxBagMismatch { .. } => C::HeaderMismatch,
                TdParseError::BagIdOutOfRange { .. } | TdParseError::DuplicateBag { .. } | TdParseError::MissingBag(_) => {
                    C::BagIds
                }
                TdParseError::NodeOutOfRange { .. } => C::NodeOutOfRange,
                _ => C::Syntax,
            },
        }
    }
}

/// Parses and validates in one step.
pub fn check_td(text: &str, g: &Graph) -> Result<TreeDecomposition, TdCheckError> {
    let td = parse_td(text, g)?;
    validate_td(g, &td)?;
    Ok(td)
}

/// Splits a stream of concatenated `.td` documents at their solution
/// lines. Comment lines stay with the document they follow.
pub fn split_documents(text: &str) -> Vec<&str> {
    let mut starts = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if line.trim_start().starts_with("s ") {
            starts.push(offset);
        }
        offset += line.len();
    }
    if starts.is_empty() {
        return Vec::new();
    }
    starts[0] = 0;
    starts.push(text.len());
    starts.windows(2).map(|w| &text[w[0]..w[1]]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> NodeSet {
        NodeSet::from_unsorted(v.to_vec())
    }

    #[test]
    fn parses_minimal_inputs() {
        let p = parse_gr("p tw 3 2\n1 2\n2 3").unwrap();
        assert_eq!(p.graph, Graph::from_edges(3, [(0, 1), (1, 2)]));
        let p = parse_gr("c hi\np tw 1 0").unwrap();
        assert_eq!(p.graph.node_count(), 1);
        assert_eq!(p.graph.edge_count(), 0);
    }

    #[test]
    fn gr_errors_carry_line_numbers() {
        assert_eq!(parse_gr("p tw 2 1\n2 3"), Err(GrError::NodeOutOfRange { line: 2, node: 3, nodes: 2 }));
        assert_eq!(parse_gr("1 2\np tw 2 1"), Err(GrError::EdgeBeforeProblemLine { line: 1 }));
        assert_eq!(parse_gr("p tw 2 1\np tw 2 1"), Err(GrError::DuplicateProblemLine { line: 2 }));
        assert_eq!(parse_gr("c only"), Err(GrError::MissingProblemLine));
        assert_eq!(
            parse_gr("p tw 2 1\n1 x"),
            Err(GrError::InvalidToken { line: 2, token: "x".into() })
        );
        assert_eq!(parse_gr("p tw 2 1\n1 2 3"), Err(GrError::MalformedEdgeLine { line: 2 }));
    }

    #[test]
    fn duplicates_and_loops_are_dropped() {
        let p = parse_gr("p tw 3 4\r\n1 2\r\n2  1\r\n3 3\r\n2 3\r\n").unwrap();
        assert_eq!(p.graph.edge_count(), 2);
        assert_eq!(p.dropped_edges, 2);
        assert_eq!(p.declared_edges, 4);
    }

    #[test]
    fn writes_single_bag() {
        let td = TreeDecomposition::single_bag(2);
        assert_eq!(write_td(&td, 2), "s td 1 2 2\nb 1 1 2\n");
    }

    #[test]
    fn writes_sorted_backbone_and_empty_bags() {
        let td = TreeDecomposition::new(vec![set(&[1]), NodeSet::new(), set(&[0, 1])], vec![(2, 0), (1, 0)], None);
        assert_eq!(write_td(&td, 2), "s td 3 2 2\nb 1 2\nb 2\nb 3 1 2\n1 2\n1 3\n");
    }

    #[test]
    fn td_round_trip() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let td = TreeDecomposition::new(vec![set(&[0, 1]), set(&[1, 2])], vec![(0, 1)], None);
        let text = write_td(&td, 3);
        assert!(parse_td(&text, &g).unwrap().same_structure(&td));
        assert_eq!(check_td(&text, &g).unwrap().bags, td.bags);
    }

    #[test]
    fn td_errors() {
        let g = Graph::empty(2);
        let cyc = "s td 3 1 2\nb 1 1\nb 2 2\nb 3\n1 2\n2 3\n3 1\n";
        assert_eq!(check_td(cyc, &g).unwrap_err().class(), ViolationClass::BackboneCycle);
        let gap = "s td 2 1 2\nb 1 1\nb 3 2\n";
        assert!(matches!(parse_td(gap, &g), Err(TdParseError::BagIdOutOfRange { line: 3, id: 3, bags: 2 })));
        let missing = "s td 2 1 2\nb 1 1 2\n";
        assert_eq!(parse_td(missing, &g), Err(TdParseError::MissingBag(2)));
        let header = "s td 1 1 2\nb 1 1 2\n";
        assert_eq!(check_td(header, &g).unwrap_err().class(), ViolationClass::HeaderMismatch);
        let nodes = "s td 1 2 3\nb 1 1 2\n";
        assert_eq!(check_td(nodes, &g).unwrap_err().class(), ViolationClass::HeaderMismatch);
        let dup = "s td 1 2 2\nb 1 1 1\n";
        assert_eq!(parse_td(dup, &g), Err(TdParseError::DuplicateNode { line: 2, node: 1 }));
        let uncovered = "s td 1 1 2\nb 1 1\n";
        assert_eq!(check_td(uncovered, &g).unwrap_err().class(), ViolationClass::UncoveredNode);
    }

    #[test]
    fn splits_concatenated_documents() {
        let text = "c width 1\ns td 1 1 1\nb 1 1\nc width 0\ns td 1 1 1\nb 1 1\n";
        let docs = split_documents(text);
        assert_eq!(docs.len(), 2);
        assert_eq!(docs[0], "c width 1\ns td 1 1 1\nb 1 1\nc width 0\n");
        assert_eq!(docs[1], "s td 1 1 1\nb 1 1\n");
        assert!(split_documents("c nothing\n").is_empty());
    }
}
