use alloc::string::String;
use core::fmt::Write as _;

use super::{NodeKind, Scalar, TreeNode};

/// Compact JSON text for a subtree. Numbers keep their source text.
pub fn to_json(node: &TreeNode) -> String {
    let mut out = String::new();
    write_node(&mut out, node, None, 0);
    out
}

/// Two-space indented JSON text for a subtree.
pub fn to_json_pretty(node: &TreeNode) -> String {
    let mut out = String::new();
    write_node(&mut out, node, Some(2), 0);
    out
}

fn newline(out: &mut String, indent: Option<usize>, level: usize) {
    if let Some(width) = indent {
        out.push('\n');
        for _ in 0..width * level {
            out.push(' ');
        }
    }
}

fn write_node(out: &mut String, node: &TreeNode, indent: Option<usize>, level: usize) {
    match node.kind() {
        NodeKind::Leaf(scalar) => write_scalar(out, scalar),
        NodeKind::Object(children) => {
            if children.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, child) in children.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(out, indent, level + 1);
                write_json_string(out, child.label().unwrap_or(""));
                out.push(':');
                if indent.is_some() {
                    out.push(' ');
                }
                write_node(out, child, indent, level + 1);
            }
            newline(out, indent, level);
            out.push('}');
        }
        NodeKind::Array(children) => {
            if children.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, child) in children.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(out, indent, level + 1);
                write_node(out, child, indent, level + 1);
            }
            newline(out, indent, level);
            out.push(']');
        }
    }
}

fn write_scalar(out: &mut String, scalar: &Scalar) {
    match scalar {
        Scalar::String(s) => write_json_string(out, s),
        Scalar::Number(n) => out.push_str(n.text()),
        Scalar::Bool(true) => out.push_str("true"),
        Scalar::Bool(false) => out.push_str("false"),
        Scalar::Null => out.push_str("null"),
    }
}

pub(crate) fn write_json_string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\u{8}' => out.push_str("\\b"),
            '\u{c}' => out.push_str("\\f"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}
