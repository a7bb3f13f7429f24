//! TNTP network and trip file parsing.
//!
//! The network file carries a metadata header (`<NUMBER OF NODES>`,
//! `<NUMBER OF LINKS>`, `<FIRST THRU NODE>`, `<END OF METADATA>`) followed by
//! whitespace-separated link rows in the de-facto column order
//! `init term capacity length free_flow_time b power speed toll type`,
//! each terminated by `;`. Trip files carry `<NUMBER OF ZONES>` and
//! `<TOTAL OD FLOW>` metadata and then `Origin o` blocks with `dest : flow;`
//! entries. Lines starting with `~` are comments. Node and zone ids are
//! 1-based in the files and converted to 0-based here.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header: {message}")]
    MalformedHeader { line: usize, message: String },
    #[error("line {line}: expected {expected} fields, found {found}")]
    WrongFieldCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: non-numeric field {field:?}")]
    NonNumericField { line: usize, field: String },
    #[error("declared {declared} {what} but parsed {parsed}")]
    CountMismatch {
        what: &'static str,
        declared: usize,
        parsed: usize,
    },
    #[error("line {line}: {message}")]
    InvalidRow { line: usize, message: String },
    #[error("line {line}: malformed origin block: {message}")]
    MalformedOrigin { line: usize, message: String },
    #[error("line {line}: negative demand {value} for pair ({origin}, {dest})")]
    NegativeDemand {
        line: usize,
        origin: u32,
        dest: u32,
        value: f64,
    },
    #[error("line {line}: duplicate OD pair ({origin}, {dest})")]
    DuplicatePair { line: usize, origin: u32, dest: u32 },
}

/// One directed link with its BPR cost parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub id: u32,
    pub tail: u32,
    pub head: u32,
    pub capacity: f64,
    pub free_flow_time: f64,
    pub bpr_alpha: f64,
    pub bpr_power: f64,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub node_count: usize,
    pub links: Vec<Link>,
    /// Outgoing link ids per node.
    pub adjacency: Vec<Vec<u32>>,
    pub first_thru_node: u32,
}

impl Network {
    pub fn num_links(&self) -> usize {
        self.links.len()
    }

    fn from_links(node_count: usize, links: Vec<Link>, first_thru_node: u32) -> Self {
        let mut adjacency = vec![Vec::new(); node_count];
        for link in &links {
            adjacency[link.tail as usize].push(link.id);
        }
        Network {
            node_count,
            links,
            adjacency,
            first_thru_node,
        }
    }
}

/// One origin-destination pair with positive demand, 0-based node ids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdPair {
    pub origin: u32,
    pub dest: u32,
    pub demand: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DemandTable {
    pub od_pairs: Vec<OdPair>,
}

impl DemandTable {
    pub fn total_demand(&self) -> f64 {
        self.od_pairs.iter().map(|p| p.demand).sum()
    }
}

fn parse_number(line: usize, tok: &str) -> Result<f64, ParseError> {
    tok.parse::<f64>().map_err(|_| ParseError::NonNumericField {
        line,
        field: tok.to_string(),
    })
}

/// Strips `~` comments and the trailing `;` tokens from a raw line.
fn clean_line(raw: &str) -> String {
    let no_comment = match raw.find('~') {
        Some(pos) => &raw[..pos],
        None => raw,
    };
    no_comment.replace(';', " ").trim().to_string()
}

fn metadata_value<'a>(
    line_no: usize,
    line: &'a str,
    key: &str,
) -> Result<Option<&'a str>, ParseError> {
    if let Some(rest) = line.strip_prefix(key) {
        let value = rest.trim();
        if value.is_empty() {
            return Err(ParseError::MalformedHeader {
                line: line_no,
                message: format!("{key} has no value"),
            });
        }
        Ok(Some(value))
    } else {
        Ok(None)
    }
}

/// Parses a TNTP network file.
pub fn parse_network(text: &str) -> Result<Network, ParseError> {
    let mut node_count: Option<usize> = None;
    let mut link_count: Option<usize> = None;
    let mut first_thru: u32 = 0;
    let mut in_body = false;
    let mut links: Vec<Link> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = clean_line(raw);
        if line.is_empty() {
            continue;
        }
        if !in_body {
            if let Some(v) = metadata_value(line_no, &line, "<NUMBER OF NODES>")? {
                node_count = Some(parse_number(line_no, v)? as usize);
                continue;
            }
            if let Some(v) = metadata_value(line_no, &line, "<NUMBER OF LINKS>")? {
                link_count = Some(parse_number(line_no, v)? as usize);
                continue;
            }
            if let Some(v) = metadata_value(line_no, &line, "<FIRST THRU NODE>")? {
                first_thru = parse_number(line_no, v)? as u32;
                continue;
            }
            if line.starts_with("<END OF METADATA>") {
                in_body = true;
                continue;
            }
            if line.starts_with('<') {
                // unknown metadata tag, tolerated
                continue;
            }
            return Err(ParseError::MalformedHeader {
                line: line_no,
                message: format!("unexpected content before <END OF METADATA>: {line:?}"),
            });
        }

        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 10 {
            return Err(ParseError::WrongFieldCount {
                line: line_no,
                expected: 10,
                found: fields.len(),
            });
        }
        let nums: Vec<f64> = fields
            .iter()
            .map(|t| parse_number(line_no, t))
            .collect::<Result<_, _>>()?;
        let tail_1b = nums[0] as u32;
        let head_1b = nums[1] as u32;
        if tail_1b == 0 || head_1b == 0 {
            return Err(ParseError::InvalidRow {
                line: line_no,
                message: "node ids are 1-based; found 0".into(),
            });
        }
        if tail_1b == head_1b {
            return Err(ParseError::InvalidRow {
                line: line_no,
                message: format!("self-loop link at node {tail_1b}"),
            });
        }
        let (capacity, length, fft, alpha, power) = (nums[2], nums[3], nums[4], nums[5], nums[6]);
        if capacity <= 0.0 {
            return Err(ParseError::InvalidRow {
                line: line_no,
                message: format!("capacity must be positive, got {capacity}"),
            });
        }
        if fft < 0.0 {
            return Err(ParseError::InvalidRow {
                line: line_no,
                message: format!("free flow time must be nonnegative, got {fft}"),
            });
        }
        if power < 1.0 {
            return Err(ParseError::InvalidRow {
                line: line_no,
                message: format!("BPR power must be >= 1, got {power}"),
            });
        }
        links.push(Link {
            id: links.len() as u32,
            tail: tail_1b - 1,
            head: head_1b - 1,
            capacity,
            free_flow_time: fft,
            bpr_alpha: alpha,
            bpr_power: power,
            length,
        });
    }

    let node_count = node_count.ok_or(ParseError::MalformedHeader {
        line: 0,
        message: "<NUMBER OF NODES> missing".into(),
    })?;
    let declared_links = link_count.ok_or(ParseError::MalformedHeader {
        line: 0,
        message: "<NUMBER OF LINKS> missing".into(),
    })?;
    if declared_links != links.len() {
        return Err(ParseError::CountMismatch {
            what: "links",
            declared: declared_links,
            parsed: links.len(),
        });
    }
    for link in &links {
        if link.tail as usize >= node_count || link.head as usize >= node_count {
            return Err(ParseError::CountMismatch {
                what: "nodes",
                declared: node_count,
                parsed: link.tail.max(link.head) as usize + 1,
            });
        }
    }
    Ok(Network::from_links(node_count, links, first_thru))
}

/// Writes a network back to TNTP text; `parse_network` on the result yields an
/// identical `Network`.
pub fn write_network(net: &Network) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "<NUMBER OF NODES> {}", net.node_count);
    let _ = writeln!(out, "<NUMBER OF LINKS> {}", net.links.len());
    let _ = writeln!(out, "<FIRST THRU NODE> {}", net.first_thru_node);
    let _ = writeln!(out, "<END OF METADATA>");
    let _ = writeln!(out, "~ init term capacity length fft b power speed toll type ;");
    for l in &net.links {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {} 0 0 1 ;",
            l.tail + 1,
            l.head + 1,
            l.capacity,
            l.length,
            l.free_flow_time,
            l.bpr_alpha,
            l.bpr_power
        );
    }
    out
}

/// Parses a TNTP trips file. Zero-demand and intrazonal entries are dropped.
pub fn parse_trips(text: &str) -> Result<DemandTable, ParseError> {
    let mut zone_count: Option<usize> = None;
    let mut in_body = false;
    let mut current_origin: Option<u32> = None;
    let mut pairs: Vec<OdPair> = Vec::new();
    let mut seen: HashSet<(u32, u32)> = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let no_comment = match raw.find('~') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = no_comment.trim();
        if line.is_empty() {
            continue;
        }
        if !in_body {
            if let Some(v) = metadata_value(line_no, line, "<NUMBER OF ZONES>")? {
                zone_count = Some(parse_number(line_no, v)? as usize);
                continue;
            }
            if line.starts_with("<TOTAL OD FLOW>") {
                continue;
            }
            if line.starts_with("<END OF METADATA>") {
                in_body = true;
                continue;
            }
            if line.starts_with('<') {
                continue;
            }
            return Err(ParseError::MalformedHeader {
                line: line_no,
                message: format!("unexpected content before <END OF METADATA>: {line:?}"),
            });
        }

        if let Some(rest) = line.strip_prefix("Origin") {
            let tok = rest.trim();
            if tok.is_empty() {
                return Err(ParseError::MalformedOrigin {
                    line: line_no,
                    message: "missing origin id".into(),
                });
            }
            let id = parse_number(line_no, tok)? as u32;
            if id == 0 {
                return Err(ParseError::MalformedOrigin {
                    line: line_no,
                    message: "origin ids are 1-based; found 0".into(),
                });
            }
            current_origin = Some(id - 1);
            continue;
        }

        let origin = current_origin.ok_or(ParseError::MalformedOrigin {
            line: line_no,
            message: "demand entry before any Origin header".into(),
        })?;
        // entries look like "2 : 100.0; 3 : 50.0;"
        for entry in line.split(';') {
            let entry = entry.trim();
            if entry.is_empty() {
                continue;
            }
            let mut halves = entry.splitn(2, ':');
            let dest_tok = halves.next().unwrap_or("").trim();
            let flow_tok = halves.next().map(str::trim).unwrap_or("");
            if flow_tok.is_empty() {
                return Err(ParseError::MalformedOrigin {
                    line: line_no,
                    message: format!("destination {dest_tok:?} without demand"),
                });
            }
            let dest_1b = parse_number(line_no, dest_tok)? as u32;
            if dest_1b == 0 {
                return Err(ParseError::MalformedOrigin {
                    line: line_no,
                    message: "destination ids are 1-based; found 0".into(),
                });
            }
            let dest = dest_1b - 1;
            let flow = parse_number(line_no, flow_tok)?;
            if flow < 0.0 {
                return Err(ParseError::NegativeDemand {
                    line: line_no,
                    origin: origin + 1,
                    dest: dest_1b,
                    value: flow,
                });
            }
            if flow == 0.0 || dest == origin {
                continue;
            }
            if !seen.insert((origin, dest)) {
                return Err(ParseError::DuplicatePair {
                    line: line_no,
                    origin: origin + 1,
                    dest: dest_1b,
                });
            }
            pairs.push(OdPair {
                origin,
                dest,
                demand: flow,
            });
        }
    }

    let _ = zone_count; // declared zone count is informational only
    Ok(DemandTable { od_pairs: pairs })
}

/// Writes a demand table as a TNTP trips file.
pub fn write_trips(demand: &DemandTable, zone_count: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "<NUMBER OF ZONES> {zone_count}");
    let _ = writeln!(out, "<TOTAL OD FLOW> {}", demand.total_demand());
    let _ = writeln!(out, "<END OF METADATA>");
    let mut last_origin = None;
    for p in &demand.od_pairs {
        if last_origin != Some(p.origin) {
            let _ = writeln!(out, "Origin {}", p.origin + 1);
            last_origin = Some(p.origin);
        }
        let _ = writeln!(out, " {} : {};", p.dest + 1, p.demand);
    }
    out
}

/// One unreachable OD pair found by [`validate_network`].
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub origin: u32,
    pub dest: u32,
    pub message: String,
}

/// Checks that every OD pair is connected by some directed path. Returns one
/// diagnostic per unreachable pair; an empty list means the pair set is usable.
pub fn validate_network(net: &Network, demand: &DemandTable) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut reach_cache: Vec<Option<Vec<bool>>> = vec![None; net.node_count];
    for pair in &demand.od_pairs {
        let o = pair.origin as usize;
        if pair.origin as usize >= net.node_count || pair.dest as usize >= net.node_count {
            diags.push(Diagnostic {
                origin: pair.origin,
                dest: pair.dest,
                message: "node id outside network".into(),
            });
            continue;
        }
        if reach_cache[o].is_none() {
            reach_cache[o] = Some(reachable_from(net, o));
        }
        let reach = reach_cache[o].as_ref().unwrap();
        if !reach[pair.dest as usize] {
            diags.push(Diagnostic {
                origin: pair.origin,
                dest: pair.dest,
                message: format!(
                    "destination {} unreachable from origin {}",
                    pair.dest + 1,
                    pair.origin + 1
                ),
            });
        }
    }
    diags
}

fn reachable_from(net: &Network, start: usize) -> Vec<bool> {
    let mut seen = vec![false; net.node_count];
    let mut queue = std::collections::VecDeque::new();
    seen[start] = true;
    queue.push_back(start);
    while let Some(u) = queue.pop_front() {
        for &lid in &net.adjacency[u] {
            let v = net.links[lid as usize].head as usize;
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "<NUMBER OF NODES> 2\n<NUMBER OF LINKS> 1\n<FIRST THRU NODE> 1\n<END OF METADATA>\n1 2 100.0 1.0 1.0 0.15 4 0 0 1 ;\n";

    #[test]
    fn parses_minimal_network() {
        let net = parse_network(MINIMAL).unwrap();
        assert_eq!(net.node_count, 2);
        assert_eq!(net.num_links(), 1);
        let l = &net.links[0];
        assert_eq!((l.tail, l.head), (0, 1));
        assert_eq!(l.capacity, 100.0);
        assert_eq!(l.free_flow_time, 1.0);
        assert_eq!(l.bpr_alpha, 0.15);
        assert_eq!(l.bpr_power, 4.0);
        assert_eq!(l.length, 1.0);
    }

    #[test]
    fn link_count_mismatch_is_error() {
        let text = MINIMAL.replace("<NUMBER OF LINKS> 1", "<NUMBER OF LINKS> 2");
        match parse_network(&text) {
            Err(ParseError::CountMismatch {
                what: "links",
                declared: 2,
                parsed: 1,
            }) => {}
            other => panic!("expected count mismatch, got {other:?}"),
        }
    }

    #[test]
    fn wrong_field_count_reports_line() {
        let text = "<NUMBER OF NODES> 2\n<NUMBER OF LINKS> 1\n<END OF METADATA>\n1 2 100.0 ;\n";
        match parse_network(text) {
            Err(ParseError::WrongFieldCount { line: 4, found: 3, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn non_numeric_field_reports_token() {
        let text = MINIMAL.replace("100.0", "abc");
        match parse_network(text.as_str()) {
            Err(ParseError::NonNumericField { line: 5, field }) => assert_eq!(field, "abc"),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn trips_single_entry() {
        let t = "<NUMBER OF ZONES> 2\n<TOTAL OD FLOW> 100.0\n<END OF METADATA>\nOrigin 1\n 2 : 100.0;\n";
        let d = parse_trips(t).unwrap();
        assert_eq!(d.od_pairs.len(), 1);
        assert_eq!(
            d.od_pairs[0],
            OdPair {
                origin: 0,
                dest: 1,
                demand: 100.0
            }
        );
    }

    #[test]
    fn trips_zero_demand_dropped() {
        let t = "<NUMBER OF ZONES> 2\n<END OF METADATA>\nOrigin 1\n 2 : 0.0;\n";
        let d = parse_trips(t).unwrap();
        assert!(d.od_pairs.is_empty());
    }

    #[test]
    fn trips_negative_demand_is_error() {
        let t = "<NUMBER OF ZONES> 2\n<END OF METADATA>\nOrigin 1\n 2 : -5.0;\n";
        assert!(matches!(
            parse_trips(t),
            Err(ParseError::NegativeDemand { line: 4, .. })
        ));
    }

    #[test]
    fn trips_missing_flow_is_error() {
        let t = "<NUMBER OF ZONES> 2\n<END OF METADATA>\nOrigin 1\n 2 ;\n";
        assert!(matches!(
            parse_trips(t),
            Err(ParseError::MalformedOrigin { line: 4, .. })
        ));
    }

    #[test]
    fn validate_reports_unreachable() {
        let net = parse_network(MINIMAL).unwrap();
        let fwd = DemandTable {
            od_pairs: vec![OdPair {
                origin: 0,
                dest: 1,
                demand: 1.0,
            }],
        };
        assert!(validate_network(&net, &fwd).is_empty());
        let rev = DemandTable {
            od_pairs: vec![OdPair {
                origin: 1,
                dest: 0,
                demand: 1.0,
            }],
        };
        let diags = validate_network(&net, &rev);
        assert_eq!(diags.len(), 1);
        assert_eq!((diags[0].origin, diags[0].dest), (1, 0));
    }

    #[test]
    fn network_roundtrip_identical() {
        let net = parse_network(MINIMAL).unwrap();
        let text = write_network(&net);
        let reparsed = parse_network(&text).unwrap();
        assert_eq!(net, reparsed);
    }
}
