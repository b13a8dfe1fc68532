//! Line-oriented instance files: a kind tag on the first line, then a
//! kind-specific payload. Deliberately trivial to parse or emit from any
//! language and friendly to diffs.
//!
//! ```text
//! modular            coverage           uniform    partition    graphic
//! 3                  3 5                3          2            4
//! 1 2 3              0 1                2          0 0 1        0 1
//!                    2                             1 1          1 2
//!                    3 4                                        2 3
//! ```
//!
//! `intersect` nests constituent matroid specs separated by `--` lines;
//! `hidden-partition` is `n p slope seed` on one line.

use crate::core::{Error, MatroidOracle, Result, SubmodularOracle};
use crate::functions::{CoverageFunction, ModularFunction};
use crate::matroids::{
    make_hidden_partition, GraphicMatroid, IntersectionConstraint, PartitionMatroid,
    UniformMatroid,
};

/// Declarative description of a value oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Modular { weights: Vec<f64> },
    Coverage { universe: usize, covers: Vec<Vec<usize>> },
}

/// Declarative description of a feasibility constraint.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintSpec {
    Uniform { n: usize, k: usize },
    Partition { part_of: Vec<usize>, capacities: Vec<usize> },
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
    Intersect(Vec<ConstraintSpec>),
    HiddenPartition { n: usize, parts: usize, slope: usize, seed: u64 },
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

/// Non-empty trimmed lines with their 1-based line numbers.
struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .collect();
        Self { lines, pos: 0 }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        while self.pos < self.lines.len() {
            let (no, text) = self.lines[self.pos];
            self.pos += 1;
            if !text.is_empty() {
                return Ok((no, text));
            }
        }
        Err(parse_err(
            self.lines.last().map_or(1, |(no, _)| no + 1),
            format!("unexpected end of file, expected {what}"),
        ))
    }

    /// Next line even when blank; used where empty payload lines are legal.
    fn next_raw(&mut self, what: &str) -> Result<(usize, &'a str)> {
        if self.pos < self.lines.len() {
            let item = self.lines[self.pos];
            self.pos += 1;
            Ok(item)
        } else {
            Err(parse_err(
                self.lines.last().map_or(1, |(no, _)| no + 1),
                format!("unexpected end of file, expected {what}"),
            ))
        }
    }

    fn rest_is_blank(&self) -> bool {
        self.lines[self.pos..].iter().all(|(_, l)| l.is_empty())
    }
}

fn fields<T: std::str::FromStr>(line: usize, text: &str, what: &str) -> Result<Vec<T>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<T>()
                .map_err(|_| parse_err(line, format!("bad {what} token `{tok}`")))
        })
        .collect()
}

fn single<T: std::str::FromStr>(line: usize, text: &str, what: &str) -> Result<T> {
    let v: Vec<T> = fields(line, text, what)?;
    if v.len() != 1 {
        return Err(parse_err(line, format!("expected exactly one {what}")));
    }
    Ok(v.into_iter().next().unwrap())
}

impl FunctionSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (kind_line, kind) = lines.next("a function kind tag")?;
        match kind {
            "modular" => {
                let (no, n_text) = lines.next("the element count")?;
                let n: usize = single(no, n_text, "element count")?;
                let (no, w_text) = lines.next("the weight list")?;
                let weights: Vec<f64> = fields(no, w_text, "weight")?;
                if weights.len() != n {
                    return Err(parse_err(
                        no,
                        format!("expected {n} weights, found {}", weights.len()),
                    ));
                }
                if !lines.rest_is_blank() {
                    return Err(parse_err(no + 1, "trailing content after the weights"));
                }
                Ok(Self::Modular { weights })
            }
            "coverage" => {
                let (no, head) = lines.next("`n u`")?;
                let head: Vec<usize> = fields(no, head, "size")?;
                if head.len() != 2 {
                    return Err(parse_err(no, "expected `n u` (element and universe counts)"));
                }
                let (n, universe) = (head[0], head[1]);
                let mut covers = Vec::with_capacity(n);
                for _ in 0..n {
                    let (no, line) = lines.next_raw("a cover line")?;
                    covers.push(fields(no, line, "universe item")?);
                }
                if !lines.rest_is_blank() {
                    return Err(parse_err(no + n + 1, "trailing content after the covers"));
                }
                Ok(Self::Coverage { universe, covers })
            }
            other => Err(parse_err(kind_line, format!("unknown function kind `{other}`"))),
        }
    }

    pub fn serialize(&self) -> String {
        match self {
            Self::Modular { weights } => {
                let w: Vec<String> = weights.iter().map(|v| format!("{v}")).collect();
                format!("modular\n{}\n{}\n", weights.len(), w.join(" "))
            }
            Self::Coverage { universe, covers } => {
                let mut out = format!("coverage\n{} {}\n", covers.len(), universe);
                for cover in covers {
                    let items: Vec<String> = cover.iter().map(|i| i.to_string()).collect();
                    out.push_str(&items.join(" "));
                    out.push('\n');
                }
                out
            }
        }
    }

    pub fn ground_size(&self) -> usize {
        match self {
            Self::Modular { weights } => weights.len(),
            Self::Coverage { covers, .. } => covers.len(),
        }
    }

    pub fn build(&self) -> Result<Box<dyn SubmodularOracle>> {
        Ok(match self {
            Self::Modular { weights } => Box::new(ModularFunction::new(weights.clone())?),
            Self::Coverage { universe, covers } => {
                Box::new(CoverageFunction::new(*universe, covers.clone())?)
            }
        })
    }
}

impl ConstraintSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let spec = Self::parse_at(&mut lines)?;
        if !lines.rest_is_blank() {
            let (no, _) = lines.lines[lines.pos];
            return Err(parse_err(no, "trailing content after the constraint"));
        }
        Ok(spec)
    }

    fn parse_at(lines: &mut Lines<'_>) -> Result<Self> {
        let (kind_line, kind) = lines.next("a matroid kind tag")?;
        match kind {
            "uniform" => {
                let (no, n_text) = lines.next("the element count")?;
                let n: usize = single(no, n_text, "element count")?;
                let (no, k_text) = lines.next("the rank bound")?;
                let k: usize = single(no, k_text, "rank bound")?;
                Ok(Self::Uniform { n, k })
            }
            "partition" => {
                let (no, p_text) = lines.next("the part count")?;
                let parts: usize = single(no, p_text, "part count")?;
                let (no, assignment) = lines.next("the part assignment")?;
                let part_of: Vec<usize> = fields(no, assignment, "part id")?;
                if let Some(&bad) = part_of.iter().find(|&&p| p >= parts) {
                    return Err(parse_err(no, format!("part id {bad} out of {parts} parts")));
                }
                let (no, caps) = lines.next("the capacities")?;
                let capacities: Vec<usize> = fields(no, caps, "capacity")?;
                if capacities.len() != parts {
                    return Err(parse_err(
                        no,
                        format!("expected {parts} capacities, found {}", capacities.len()),
                    ));
                }
                Ok(Self::Partition { part_of, capacities })
            }
            "graphic" => {
                let (no, v_text) = lines.next("the vertex count")?;
                let vertices: usize = single(no, v_text, "vertex count")?;
                let mut edges = Vec::new();
                while lines.pos < lines.lines.len() {
                    let (no, text) = lines.lines[lines.pos];
                    if text.is_empty() || text == "--" {
                        break;
                    }
                    lines.pos += 1;
                    let pair: Vec<usize> = fields(no, text, "vertex")?;
                    if pair.len() != 2 {
                        return Err(parse_err(no, "expected `u v` per edge line"));
                    }
                    edges.push((pair[0], pair[1]));
                }
                if edges.is_empty() {
                    return Err(parse_err(no + 1, "graphic matroid needs at least one edge"));
                }
                Ok(Self::Graphic { vertices, edges })
            }
            "intersect" => {
                let mut members = Vec::new();
                loop {
                    members.push(Self::parse_at(lines)?);
                    // a `--` separator continues the list
                    let more = loop {
                        if lines.pos >= lines.lines.len() {
                            break false;
                        }
                        let (_, text) = lines.lines[lines.pos];
                        if text.is_empty() {
                            lines.pos += 1;
                            continue;
                        }
                        if text == "--" {
                            lines.pos += 1;
                            break true;
                        }
                        break false;
                    };
                    if !more {
                        break;
                    }
                }
                if members.len() < 2 {
                    return Err(parse_err(
                        kind_line,
                        "intersect needs at least two constituent matroids",
                    ));
                }
                Ok(Self::Intersect(members))
            }
            "hidden-partition" => {
                let (no, text) = lines.next("`n p slope seed`")?;
                let v: Vec<u64> = fields(no, text, "hidden-partition parameter")?;
                if v.len() != 4 {
                    return Err(parse_err(no, "expected `n p slope seed`"));
                }
                Ok(Self::HiddenPartition {
                    n: v[0] as usize,
                    parts: v[1] as usize,
                    slope: v[2] as usize,
                    seed: v[3],
                })
            }
            other => Err(parse_err(kind_line, format!("unknown matroid kind `{other}`"))),
        }
    }

    pub fn serialize(&self) -> String {
        match self {
            Self::Uniform { n, k } => format!("uniform\n{n}\n{k}\n"),
            Self::Partition { part_of, capacities } => {
                let p: Vec<String> = part_of.iter().map(|v| v.to_string()).collect();
                let c: Vec<String> = capacities.iter().map(|v| v.to_string()).collect();
                format!(
                    "partition\n{}\n{}\n{}\n",
                    capacities.len(),
                    p.join(" "),
                    c.join(" ")
                )
            }
            Self::Graphic { vertices, edges } => {
                let mut out = format!("graphic\n{vertices}\n");
                for (u, v) in edges {
                    out.push_str(&format!("{u} {v}\n"));
                }
                out
            }
            Self::Intersect(members) => {
                let parts: Vec<String> = members.iter().map(|m| m.serialize()).collect();
                format!("intersect\n{}", parts.join("--\n"))
            }
            Self::HiddenPartition { n, parts, slope, seed } => {
                format!("hidden-partition\n{n} {parts} {slope} {seed}\n")
            }
        }
    }

    pub fn ground_size(&self) -> usize {
        match self {
            Self::Uniform { n, .. } => *n,
            Self::Partition { part_of, .. } => part_of.len(),
            Self::Graphic { edges, .. } => edges.len(),
            Self::Intersect(members) => members.first().map_or(0, |m| m.ground_size()),
            Self::HiddenPartition { n, .. } => *n,
        }
    }

    pub fn build(&self) -> Result<Box<dyn MatroidOracle>> {
        Ok(match self {
            Self::Uniform { n, k } => Box::new(UniformMatroid::new(*n, *k)?),
            Self::Partition { part_of, capacities } => {
                Box::new(PartitionMatroid::new(part_of.clone(), capacities.clone())?)
            }
            Self::Graphic { vertices, edges } => {
                Box::new(GraphicMatroid::new(*vertices, edges.clone())?)
            }
            Self::Intersect(members) => {
                let built: Result<Vec<_>> = members.iter().map(|m| m.build()).collect();
                Box::new(IntersectionConstraint::new(built?)?)
            }
            Self::HiddenPartition { n, parts, slope, seed } => {
                Box::new(make_hidden_partition(*n, *parts, *slope, *seed)?)
            }
        })
    }
}

/// A complete instance: value oracle plus constraint, agreeing on the ground
/// set.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub function: FunctionSpec,
    pub constraint: ConstraintSpec,
}

impl InstanceSpec {
    pub fn new(function: FunctionSpec, constraint: ConstraintSpec) -> Result<Self> {
        let spec = Self { function, constraint };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let nf = self.function.ground_size();
        let nc = self.constraint.ground_size();
        if nf != nc {
            return Err(Error::InvalidParameter(format!(
                "function has {nf} elements but the constraint has {nc}"
            )));
        }
        if let ConstraintSpec::Intersect(members) = &self.constraint {
            if members.iter().any(|m| m.ground_size() != nf) {
                return Err(Error::InvalidParameter(
                    "intersected matroids disagree on the ground set".into(),
                ));
            }
        }
        // constructing the oracles performs the deep validation
        self.function.build()?;
        self.constraint.build()?;
        Ok(())
    }

    pub fn ground_size(&self) -> usize {
        self.function.ground_size()
    }
}

/// Loads and cross-validates a function file and a matroid file.
pub fn parse_instance(
    function_path: &std::path::Path,
    matroid_path: &std::path::Path,
) -> Result<InstanceSpec> {
    let ftext = std::fs::read_to_string(function_path)?;
    let mtext = std::fs::read_to_string(matroid_path)?;
    InstanceSpec::new(FunctionSpec::parse(&ftext)?, ConstraintSpec::parse(&mtext)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_the_documented_examples() {
        let f = FunctionSpec::parse("modular\n3\n1 2 3\n").unwrap();
        assert_eq!(
            f,
            FunctionSpec::Modular {
                weights: vec![1.0, 2.0, 3.0]
            }
        );
        let m = ConstraintSpec::parse("partition\n2\n0 0 1\n1 1\n").unwrap();
        assert_eq!(
            m,
            ConstraintSpec::Partition {
                part_of: vec![0, 0, 1],
                capacities: vec![1, 1]
            }
        );
    }

    #[test]
    fn truncated_files_report_the_line() {
        match FunctionSpec::parse("modular\n3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }
        match FunctionSpec::parse("modular\n3\n1 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }
        match ConstraintSpec::parse("partition\n2\n0 0 5\n1 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_kinds_are_rejected() {
        assert!(matches!(
            FunctionSpec::parse("laplacian\n1\n1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            ConstraintSpec::parse("laminar\n1\n1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn coverage_allows_empty_cover_lines() {
        let f = FunctionSpec::parse("coverage\n3 5\n0 1\n\n3 4\n").unwrap();
        assert_eq!(
            f,
            FunctionSpec::Coverage {
                universe: 5,
                covers: vec![vec![0, 1], vec![], vec![3, 4]]
            }
        );
        let round = FunctionSpec::parse(&f.serialize()).unwrap();
        assert_eq!(round, f);
    }

    #[test]
    fn intersect_round_trips() {
        let text = "intersect\npartition\n2\n0 0 1\n1 1\n--\nuniform\n3\n2\n";
        let spec = ConstraintSpec::parse(text).unwrap();
        match &spec {
            ConstraintSpec::Intersect(members) => assert_eq!(members.len(), 2),
            other => panic!("expected an intersection, got {other:?}"),
        }
        assert_eq!(ConstraintSpec::parse(&spec.serialize()).unwrap(), spec);
    }

    #[test]
    fn instance_cross_validation() {
        let f = FunctionSpec::Modular {
            weights: vec![1.0, 2.0],
        };
        let m = ConstraintSpec::Uniform { n: 3, k: 1 };
        assert!(InstanceSpec::new(f, m).is_err());
    }

    fn arb_function() -> impl Strategy<Value = FunctionSpec> {
        prop_oneof![
            proptest::collection::vec(0.0f64..50.0, 1..10)
                .prop_map(|weights| FunctionSpec::Modular { weights }),
            (1usize..8, 1usize..10).prop_flat_map(|(u, n)| {
                proptest::collection::vec(
                    proptest::collection::vec(0usize..u, 0..u),
                    n..=n,
                )
                .prop_map(move |covers| FunctionSpec::Coverage { universe: u, covers })
            }),
        ]
    }

    fn arb_constraint() -> impl Strategy<Value = ConstraintSpec> {
        let base = prop_oneof![
            (1usize..10, 0usize..5).prop_map(|(n, k)| ConstraintSpec::Uniform { n, k }),
            (1usize..4, 1usize..9).prop_flat_map(|(parts, n)| {
                (
                    proptest::collection::vec(0usize..parts, n..=n),
                    proptest::collection::vec(0usize..3, parts..=parts),
                )
                    .prop_map(|(part_of, capacities)| ConstraintSpec::Partition {
                        part_of,
                        capacities,
                    })
            }),
            (2usize..6).prop_flat_map(|v| {
                proptest::collection::vec((0usize..v, 0usize..v), 1..8)
                    .prop_map(move |edges| ConstraintSpec::Graphic { vertices: v, edges })
            }),
            (2usize..5, 1usize..4, 1usize..3, 0u64..100).prop_map(|(p, sz, slope, seed)| {
                ConstraintSpec::HiddenPartition {
                    n: p * sz,
                    parts: p,
                    slope,
                    seed,
                }
            }),
        ];
        prop_oneof![
            base.clone(),
            proptest::collection::vec(base, 2..4).prop_map(ConstraintSpec::Intersect),
        ]
    }

    proptest! {
        #[test]
        fn function_specs_round_trip(spec in arb_function()) {
            let round = FunctionSpec::parse(&spec.serialize()).unwrap();
            // weight formatting is exact for f64 display round-trips
            prop_assert_eq!(round, spec);
        }

        #[test]
        fn constraint_specs_round_trip(spec in arb_constraint()) {
            let round = ConstraintSpec::parse(&spec.serialize()).unwrap();
            prop_assert_eq!(round, spec);
        }
    }
}
