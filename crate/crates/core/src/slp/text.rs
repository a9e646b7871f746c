//! Line-based circuit format.
//!
//! ```text
//! paramvar S
//! input X
//! param A = 1 + S
//! const c2 = 1/1
//! v3 = mul v0 v1
//! v4 = add v3 c2
//! output v4
//! ```
//!
//! `input`, `param` and `const` lines each create the next node; `v<k> = ...`
//! lines must use the next free index `k`. Operands may name a node as
//! `v<k>` or by its input name, parameter id or constant id. Blank lines and
//! lines starting with `#` are ignored.

use std::collections::{BTreeMap, HashMap};

use super::{Circuit, Node};
use crate::error::{Error, Result};
use crate::field::{fmt_rational, parse_rational};
use crate::polyring::Poly;

pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    for pv in c.param_vars() {
        out.push_str(&format!("paramvar {pv}\n"));
    }
    for (k, node) in c.nodes().iter().enumerate() {
        let line = match node {
            Node::Input(name) => format!("input {name}"),
            Node::Const(q) => format!("const c{k} = {}", fmt_rational(q)),
            Node::Param(id) => format!("param {id} = {}", c.param_table()[id]),
            Node::Add(a, b) => format!("v{k} = add v{a} v{b}"),
            Node::Sub(a, b) => format!("v{k} = sub v{a} v{b}"),
            Node::Mul(a, b) => format!("v{k} = mul v{a} v{b}"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    for o in c.outputs() {
        out.push_str(&format!("output v{o}\n"));
    }
    out
}

fn node_ref(s: &str) -> Option<usize> {
    let digits = s.strip_prefix('v')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && node_ref(s).is_none()
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut inputs = Vec::new();
    let mut param_vars = Vec::new();
    let mut table: BTreeMap<String, Poly> = BTreeMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut outputs = Vec::new();
    let mut names: HashMap<String, usize> = HashMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |message: String| Error::Syntax { line: line_no, message };
        let resolve = |r: &str, nodes_len: usize, names: &HashMap<String, usize>| -> Result<usize> {
            if let Some(k) = node_ref(r) {
                if k >= nodes_len {
                    return Err(Error::Syntax { line: line_no, message: format!("reference `{r}` to an undefined node") });
                }
                return Ok(k);
            }
            names
                .get(r)
                .copied()
                .ok_or_else(|| Error::Syntax { line: line_no, message: format!("unknown reference `{r}`") })
        };
        let declare = |name: &str, idx: usize, names: &mut HashMap<String, usize>| -> Result<()> {
            if !is_ident(name) {
                return Err(syntax(format!("`{name}` is not a valid name")));
            }
            if names.insert(name.to_string(), idx).is_some() {
                return Err(syntax(format!("`{name}` declared twice")));
            }
            Ok(())
        };

        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "input" => {
                if words.len() != 2 {
                    return Err(syntax("expected `input <name>`".into()));
                }
                declare(words[1], nodes.len(), &mut names)?;
                inputs.push(words[1].to_string());
                nodes.push(Node::Input(words[1].to_string()));
            }
            "paramvar" => {
                if words.len() != 2 || !is_ident(words[1]) {
                    return Err(syntax("expected `paramvar <name>`".into()));
                }
                param_vars.push(words[1].to_string());
            }
            "param" | "const" => {
                let rest = line[words[0].len()..].trim();
                let Some((id, value)) = rest.split_once('=') else {
                    return Err(syntax(format!("expected `{} <id> = <value>`", words[0])));
                };
                let id = id.trim();
                declare(id, nodes.len(), &mut names)?;
                if words[0] == "param" {
                    let poly: Poly = value.trim().parse().map_err(|e| syntax(format!("{e}")))?;
                    table.insert(id.to_string(), poly);
                    nodes.push(Node::Param(id.to_string()));
                } else {
                    let q = parse_rational(value)
                        .ok_or_else(|| syntax(format!("`{}` is not a rational num/den", value.trim())))?;
                    nodes.push(Node::Const(q));
                }
            }
            "output" => {
                if words.len() != 2 {
                    return Err(syntax("expected `output <ref>`".into()));
                }
                outputs.push(resolve(words[1], nodes.len(), &names)?);
            }
            target => {
                let Some(k) = node_ref(target) else {
                    return Err(syntax(format!("unknown statement `{target}`")));
                };
                if words.len() != 5 || words[1] != "=" {
                    return Err(syntax("expected `v<k> = add|sub|mul <ref> <ref>`".into()));
                }
                if k != nodes.len() {
                    return Err(syntax(format!("expected v{} but found {target}", nodes.len())));
                }
                let a = resolve(words[3], nodes.len(), &names)?;
                let b = resolve(words[4], nodes.len(), &names)?;
                nodes.push(match words[2] {
                    "add" => Node::Add(a, b),
                    "sub" => Node::Sub(a, b),
                    "mul" => Node::Mul(a, b),
                    op => return Err(syntax(format!("unsupported operation `{op}`"))),
                });
            }
        }
    }
    Circuit::from_parts(inputs, param_vars, table, nodes, outputs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_line_builds_mul_node() {
        let c = parse_circuit("input X\ninput Y\nv2 = mul v0 v1\noutput v2\n").unwrap();
        assert_eq!(c.nodes()[2], Node::Mul(0, 1));
        let named = parse_circuit("input X\ninput Y\nv2 = mul X Y\noutput v2\n").unwrap();
        assert_eq!(named, c);
    }

    #[test]
    fn division_is_a_syntax_error() {
        let err = parse_circuit("input X\ninput Y\nv2 = div v0 v1\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn index_must_be_next() {
        let err = parse_circuit("input X\nv5 = add v0 v0\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
        let err = parse_circuit("input X\nv1 = add v0 v3\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
    }

    #[test]
    fn params_and_consts() {
        let text = "paramvar S\nparamvar T\ninput U\nparam A = 1 + S*T\nconst one = 3/6\nv3 = mul A U\nv4 = add v3 one\noutput v4\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.param_table()["A"], "1 + S*T".parse().unwrap());
        let again = parse_circuit(&serialize_circuit(&c)).unwrap();
        assert_eq!(again, c);
        assert!(serialize_circuit(&c).contains("const c2 = 1/2"));
    }

    #[test]
    fn undeclared_param_var_fails_validation() {
        let err = parse_circuit("param A = S\noutput v0\n").unwrap_err();
        assert_eq!(err, Error::UndeclaredParamVar { id: "A".into(), var: "S".into() });
    }
}
