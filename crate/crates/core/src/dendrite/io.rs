//! Text records and DOT export for tree stages.

use std::fmt::Write as _;

use crate::rational::{fmt_q, parse_q};
use crate::textio::{bad, body_lines, fields, need, FormatError, HEADER};

use super::stage::{Color, Edge, Order, Role, StageMode, TreeStage, Vertex};

fn mode_fields(mode: &StageMode) -> String {
    match mode {
        StageMode::Wazewski { orders, width } => {
            let os: Vec<String> = orders.iter().map(Order::to_string).collect();
            format!("mode=wazewski orders={} width={width}", os.join(","))
        }
        StageMode::TwoColor { blocks, marks } => format!("mode=twocolor blocks={blocks} marks={marks}"),
    }
}

pub fn write_stage(stage: &TreeStage) -> String {
    let mut s = String::new();
    writeln!(s, "{HEADER}").unwrap();
    writeln!(s, "stage index={} {}", stage.index, mode_fields(&stage.mode)).unwrap();
    for v in stage.vertices() {
        let parent = v.parent.map_or("-".to_string(), |p| p.to_string());
        writeln!(
            s,
            "vertex {} color={} role={} gen={} parent={}",
            v.id,
            v.color.as_str(),
            stage.role(v.id).as_str(),
            v.gen,
            parent
        )
        .unwrap();
    }
    for e in stage.edges() {
        writeln!(s, "edge {} {} len={}", e.u, e.v, fmt_q(&e.len)).unwrap();
    }
    if let Some(b) = stage.bonding() {
        for (v, w) in b.iter().enumerate() {
            writeln!(s, "bond {v} -> {w}").unwrap();
        }
    }
    s
}

fn parse_order(s: &str) -> Option<Order> {
    if s == "w" {
        Some(Order::Omega)
    } else {
        s.parse().ok().map(Order::Finite)
    }
}

fn num<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T, FormatError> {
    s.parse().map_err(|_| bad(line, format!("bad {what} `{s}`")))
}

/// Parses a stage file. Roles are checked against the degrees they imply.
pub fn read_stage(text: &str) -> Result<TreeStage, FormatError> {
    let mut header: Option<(u32, StageMode)> = None;
    let mut vertices = Vec::new();
    let mut roles = Vec::new();
    let mut edges = Vec::new();
    let mut bonds = Vec::new();
    for (line, l) in body_lines(text)? {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        let (bare, kv) = fields(&tokens[1..]);
        match tokens[0] {
            "stage" => {
                let index = num(need(&kv, "index", line)?, line, "index")?;
                let mode = match need(&kv, "mode", line)? {
                    "wazewski" => StageMode::Wazewski {
                        orders: need(&kv, "orders", line)?
                            .split(',')
                            .map(|o| parse_order(o).ok_or_else(|| bad(line, format!("bad order `{o}`"))))
                            .collect::<Result<_, _>>()?,
                        width: num(need(&kv, "width", line)?, line, "width")?,
                    },
                    "twocolor" => StageMode::TwoColor {
                        blocks: kv.get("blocks").map_or(Ok(2), |b| num(b, line, "blocks"))?,
                        marks: num(need(&kv, "marks", line)?, line, "marks")?,
                    },
                    m => return Err(bad(line, format!("unknown mode `{m}`"))),
                };
                header = Some((index, mode));
            }
            "vertex" => {
                let id: usize = num(bare.first().ok_or_else(|| bad(line, "vertex id missing"))?, line, "id")?;
                if id != vertices.len() {
                    return Err(bad(line, format!("vertex {id} out of order")));
                }
                let color = Color::parse(need(&kv, "color", line)?).ok_or_else(|| bad(line, "bad color"))?;
                let gen = kv.get("gen").map_or(Ok(0), |g| num(g, line, "gen"))?;
                let parent = match kv.get("parent").map(String::as_str) {
                    None | Some("-") => None,
                    Some(p) => Some(num(p, line, "parent")?),
                };
                roles.push((line, kv.get("role").cloned()));
                vertices.push(Vertex { id, color, gen, parent });
            }
            "edge" => {
                if bare.len() != 2 {
                    return Err(bad(line, "edge needs two endpoints"));
                }
                let len = need(&kv, "len", line)?;
                edges.push(Edge {
                    u: num(&bare[0], line, "vertex")?,
                    v: num(&bare[1], line, "vertex")?,
                    len: parse_q(len).ok_or_else(|| bad(line, format!("bad length `{len}`")))?,
                });
            }
            "bond" => {
                if tokens.len() != 4 || tokens[2] != "->" {
                    return Err(bad(line, "bond needs `bond <a> -> <b>`"));
                }
                bonds.push((num::<usize>(tokens[1], line, "vertex")?, num::<usize>(tokens[3], line, "vertex")?));
            }
            other => return Err(bad(line, format!("unknown record `{other}`"))),
        }
    }
    // Whole-file problems are reported at the last line.
    let end = text.lines().count();
    let (index, mode) = header.ok_or_else(|| bad(end, "no stage record"))?;
    let bonding = if bonds.is_empty() {
        None
    } else {
        let mut b = vec![usize::MAX; vertices.len()];
        for (v, w) in bonds {
            *b.get_mut(v).ok_or_else(|| bad(end, format!("bond from unknown vertex {v}")))? = w;
        }
        if b.contains(&usize::MAX) {
            return Err(bad(end, "bonding map is partial"));
        }
        Some(b)
    };
    let stage = TreeStage::from_parts(index, mode, vertices, edges, bonding).map_err(|e| bad(end, format!("{e} (input ends here)")))?;
    for (v, (line, role)) in roles.into_iter().enumerate() {
        if let Some(r) = role {
            if r != stage.role(v).as_str() {
                return Err(bad(line, format!("vertex {v} marked {r} but has degree {}", stage.degree(v))));
            }
        }
    }
    Ok(stage)
}

/// Graphviz text; colors as attributes, exact lengths as edge labels.
pub fn to_dot(stage: &TreeStage) -> String {
    let mut s = String::new();
    writeln!(s, "graph stage{} {{", stage.index).unwrap();
    for v in stage.vertices() {
        let shape = match stage.role(v.id) {
            Role::Endpoint => "point",
            Role::Regular => "circle",
            Role::Ramification => "doublecircle",
        };
        let color = match v.color {
            Color::Uncolored => "black",
            c => c.as_str(),
        };
        writeln!(s, "  v{} [label=\"{}\" shape={shape} color={color}];", v.id, v.id).unwrap();
    }
    for e in stage.edges() {
        writeln!(s, "  v{} -- v{} [label=\"{}\"];", e.u, e.v, fmt_q(&e.len)).unwrap();
    }
    s.push_str("}\n");
    s
}
