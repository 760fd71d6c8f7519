//! Line-based instance and solution files.
//!
//! ```text
//! c free-form comment
//! c transformed
//! p dsp <n> <m> <k> <c> <vertex|edge>
//! c label <v> <text>
//! a <u> <v> <w>
//! d <s> <t>
//! ```
//!
//! Solutions are `s 1` followed by one `p <i> <len> <v1> ... <vL>` line per
//! demand, or just `s 0`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Dag, Edge, Instance, Mode, Path, Solution, Vertex};

/// An instance together with its free-form comment lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub comments: Vec<String>,
}

pub fn write_instance(inst: &Instance, comments: &[String]) -> String {
    let dag = inst.dag();
    let mut out = String::new();
    for c in comments {
        writeln!(out, "c {c}").unwrap();
    }
    if dag.is_transformed() {
        out.push_str("c transformed\n");
    }
    writeln!(
        out,
        "p dsp {} {} {} {} {}",
        dag.vertex_count(),
        dag.edge_count(),
        inst.k(),
        inst.congestion(),
        inst.mode()
    )
    .unwrap();
    for v in dag.vertices() {
        if let Some(label) = dag.label(v) {
            writeln!(out, "c label {v} {label}").unwrap();
        }
    }
    for e in dag.edges() {
        writeln!(out, "a {} {} {}", e.tail, e.head, e.weight).unwrap();
    }
    for &(s, t) in inst.demands() {
        writeln!(out, "d {s} {t}").unwrap();
    }
    out
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_instance_file(text).map(|f| f.instance)
}

struct Header {
    line: usize,
    n: usize,
    m: usize,
    k: usize,
    c: u32,
    mode: Mode,
}

pub fn parse_instance_file(text: &str) -> Result<InstanceFile> {
    let mut header: Option<Header> = None;
    let mut transformed = false;
    let mut comments = Vec::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut demands = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| Error::Parse { line, msg };
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (tag, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let rest = rest.trim();
        let fields: Vec<&str> = rest.split_whitespace().collect();
        match tag {
            "c" => {
                if rest == "transformed" {
                    transformed = true;
                } else if let Some(label) = rest.strip_prefix("label ") {
                    let (v, text) = label.trim().split_once(' ').unwrap_or((label.trim(), ""));
                    let v: Vertex = v.parse().map_err(|_| err(format!("bad label vertex {v:?}")))?;
                    labels.push((line, v, text.trim().to_string()));
                } else {
                    comments.push(rest.to_string());
                }
            }
            "p" => {
                if header.is_some() {
                    return Err(err("second header line".into()));
                }
                if fields.len() != 6 || fields[0] != "dsp" {
                    return Err(err("expected `p dsp <n> <m> <k> <c> <mode>`".into()));
                }
                let num = |s: &str| s.parse::<usize>().map_err(|_| err(format!("bad number {s:?}")));
                let mode: Mode = fields[5].parse().map_err(err)?;
                let c = u32::try_from(num(fields[4])?).map_err(|_| err("congestion too large".into()))?;
                header = Some(Header { line, n: num(fields[1])?, m: num(fields[2])?, k: num(fields[3])?, c, mode });
            }
            "a" | "d" => {
                let Some(h) = &header else {
                    return Err(err(format!("`{tag}` line before the header")));
                };
                let want = if tag == "a" { 3 } else { 2 };
                if fields.len() != want {
                    return Err(err(format!("`{tag}` takes {want} fields, got {}", fields.len())));
                }
                let mut nums = Vec::with_capacity(want);
                for f in &fields {
                    nums.push(f.parse::<u64>().map_err(|_| err(format!("bad number {f:?}")))?);
                }
                for &v in &nums[..2] {
                    if v == 0 || v as usize > h.n {
                        return Err(err(format!("vertex {v} outside 1..={}", h.n)));
                    }
                }
                let (u, v) = (nums[0] as usize, nums[1] as usize);
                if tag == "a" {
                    edges.push(Edge { tail: u, head: v, weight: nums[2] });
                } else {
                    demands.push((u, v));
                }
            }
            other => return Err(err(format!("unknown line type {other:?}"))),
        }
    }

    let Some(h) = header else {
        return Err(Error::Parse { line: text.lines().count().max(1), msg: "missing `p dsp` header".into() });
    };
    if edges.len() != h.m || demands.len() != h.k {
        return Err(Error::Parse {
            line: h.line,
            msg: format!(
                "header announces {} arcs and {} demands, found {} and {}",
                h.m,
                h.k,
                edges.len(),
                demands.len()
            ),
        });
    }
    let mut dag = Dag::with_transformed_flag(h.n, edges, transformed)?;
    for (line, v, text) in labels {
        if v == 0 || v > h.n {
            return Err(Error::Parse { line, msg: format!("label for vertex {v} outside 1..={}", h.n) });
        }
        dag.set_label(v, text);
    }
    let instance = Instance::new(dag, demands, h.c, h.mode)?;
    Ok(InstanceFile { instance, comments })
}

pub fn write_solution(sol: Option<&Solution>) -> String {
    let Some(sol) = sol else {
        return "s 0\n".to_string();
    };
    let mut out = String::from("s 1\n");
    for (i, p) in sol.paths.iter().enumerate() {
        write!(out, "p {} {}", i + 1, p.length()).unwrap();
        for v in p.vertices() {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Reads a solution file as written. Paths are taken at face value, stated
/// lengths included, so [`crate::graph::verify_solution`] can judge them.
pub fn parse_solution(text: &str) -> Result<Option<Solution>> {
    let mut feasible: Option<bool> = None;
    let mut paths = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| Error::Parse { line, msg };
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first() {
            None => continue,
            Some(&"c") => continue,
            Some(&"s") => {
                if feasible.is_some() {
                    return Err(err("second status line".into()));
                }
                feasible = match fields.get(1..) {
                    Some(["1"]) => Some(true),
                    Some(["0"]) => Some(false),
                    _ => return Err(err("expected `s 1` or `s 0`".into())),
                };
            }
            Some(&"p") => {
                if feasible != Some(true) {
                    return Err(err("path line without `s 1`".into()));
                }
                if fields.len() < 4 {
                    return Err(err("expected `p <i> <len> <v1> ...`".into()));
                }
                let nums: Vec<u64> = fields[1..]
                    .iter()
                    .map(|f| f.parse::<u64>().map_err(|_| err(format!("bad number {f:?}"))))
                    .collect::<Result<_>>()?;
                if nums[0] as usize != paths.len() + 1 {
                    return Err(err(format!("expected path {}, found {}", paths.len() + 1, nums[0])));
                }
                let vertices: Vec<Vertex> = nums[2..].iter().map(|&v| v as usize).collect();
                paths.push(Path::from_parts(vertices, nums[1]));
            }
            Some(other) => return Err(err(format!("unknown line type {other:?}"))),
        }
    }
    match feasible {
        None => Err(Error::Parse { line: text.lines().count().max(1), msg: "missing status line".into() }),
        Some(false) => Ok(None),
        Some(true) => Ok(Some(Solution::new(paths))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::verify_solution;

    const DIAMOND: &str = "c a diamond\np dsp 4 4 2 1 vertex\na 1 2 1\na 1 3 1\na 2 4 1\na 3 4 1\nd 1 4\nd 1 4\n";

    #[test]
    fn minimal_instance() {
        let inst = parse_instance("p dsp 1 0 1 1 vertex\nd 1 1\n").unwrap();
        assert_eq!(inst.dag().vertex_count(), 1);
        assert_eq!(inst.demands(), &[(1, 1)]);
    }

    #[test]
    fn diamond_round_trip() {
        let file = parse_instance_file(DIAMOND).unwrap();
        assert_eq!(file.comments, vec!["a diamond".to_string()]);
        assert_eq!(write_instance(&file.instance, &file.comments), DIAMOND);
    }

    #[test]
    fn labels_and_transformed_flag_survive() {
        let text = "c transformed\np dsp 2 1 1 1 edge\nc label 2 sink node\na 1 2 0\nd 1 2\n";
        let inst = parse_instance(text).unwrap();
        assert!(inst.dag().is_transformed());
        assert_eq!(inst.dag().label(2), Some("sink node"));
        assert_eq!(write_instance(&inst, &[]), text);
    }

    #[test]
    fn malformed_inputs_carry_line_numbers() {
        let cases = [
            ("p dsp 2 2 1 1 vertex\na 1 2 1\nd 1 2\n", 1),
            ("p dsp 2 1 1 1 vertex\na 1 3 1\nd 1 2\n", 2),
            ("a 1 2 1\n", 1),
            ("p dsp 2 1 1 1 sideways\n", 1),
            ("p dsp 2 1 1 1 vertex\na 1 2\n", 2),
            ("p dsp 2 1 1 1 vertex\nx\n", 2),
        ];
        for (text, line) in cases {
            match parse_instance(text) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn graph_errors_propagate() {
        let cycle = "p dsp 2 2 1 1 vertex\na 1 2 1\na 2 1 1\nd 1 2\n";
        assert_eq!(parse_instance(cycle).unwrap_err(), Error::CycleDetected);
        let zero = "p dsp 2 1 1 1 vertex\na 1 2 0\nd 1 2\n";
        assert!(matches!(parse_instance(zero), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn solution_round_trip_and_tampering() {
        let inst = parse_instance(DIAMOND).unwrap();
        let inst = inst.with_congestion(2).unwrap();
        let text = "s 1\np 1 2 1 2 4\np 2 2 1 3 4\n";
        let sol = parse_solution(text).unwrap().unwrap();
        assert_eq!(write_solution(Some(&sol)), text);
        assert!(verify_solution(&inst, &sol).unwrap().feasible);
        let broken = parse_solution("s 1\np 1 2 1 4\np 2 2 1 3 4\n").unwrap().unwrap();
        assert!(!verify_solution(&inst, &broken).unwrap().feasible);
        assert_eq!(parse_solution("s 0\n").unwrap(), None);
        assert!(matches!(parse_solution("p 1 2 1 2 4\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_solution("s 1\np 2 2 1 2 4\n"), Err(Error::Parse { line: 2, .. })));
    }
}
