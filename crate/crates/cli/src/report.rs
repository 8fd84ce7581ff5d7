//! Reports hold an ordered fact tree rendered either as indented text or as
//! JSON, so both renderings carry the same facts.

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Text(String),
    Int(i64),
    Bool(bool),
    List(Vec<Node>),
    Map(Vec<(String, Node)>),
}

impl Node {
    pub fn map() -> Node {
        Node::Map(Vec::new())
    }

    /// Appends `key: value` to a map node.
    pub fn set(&mut self, key: &str, value: impl Into<Node>) -> &mut Self {
        if let Node::Map(entries) = self {
            entries.push((key.to_string(), value.into()));
        }
        self
    }

    pub fn with(mut self, key: &str, value: impl Into<Node>) -> Self {
        self.set(key, value);
        self
    }

    fn is_scalar(&self) -> bool {
        matches!(self, Node::Text(_) | Node::Int(_) | Node::Bool(_))
    }

    fn scalar_text(&self) -> String {
        match self {
            Node::Text(s) => s.clone(),
            Node::Int(k) => k.to_string(),
            Node::Bool(b) => b.to_string(),
            Node::List(v) if v.is_empty() => "[]".into(),
            Node::Map(v) if v.is_empty() => "{}".into(),
            _ => String::new(),
        }
    }

    fn is_inline(&self) -> bool {
        self.is_scalar() || matches!(self, Node::List(v) if v.is_empty()) || matches!(self, Node::Map(v) if v.is_empty())
    }

    fn render(&self, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match self {
            Node::Map(entries) => {
                for (k, v) in entries {
                    if v.is_inline() {
                        out.push_str(&format!("{pad}{k}: {}\n", v.scalar_text()));
                    } else {
                        out.push_str(&format!("{pad}{k}:\n"));
                        v.render(indent + 1, out);
                    }
                }
            }
            Node::List(items) => {
                for item in items {
                    if item.is_inline() {
                        out.push_str(&format!("{pad}- {}\n", item.scalar_text()));
                    } else {
                        out.push_str(&format!("{pad}-\n"));
                        item.render(indent + 1, out);
                    }
                }
            }
            scalar => out.push_str(&format!("{pad}{}\n", scalar.scalar_text())),
        }
    }
}

impl From<String> for Node {
    fn from(s: String) -> Self {
        Node::Text(s)
    }
}

impl From<&str> for Node {
    fn from(s: &str) -> Self {
        Node::Text(s.to_string())
    }
}

impl From<bool> for Node {
    fn from(b: bool) -> Self {
        Node::Bool(b)
    }
}

impl From<i64> for Node {
    fn from(k: i64) -> Self {
        Node::Int(k)
    }
}

impl From<usize> for Node {
    fn from(k: usize) -> Self {
        Node::Int(k as i64)
    }
}

impl From<u32> for Node {
    fn from(k: u32) -> Self {
        Node::Int(k.into())
    }
}

impl<T: Into<Node>> From<Vec<T>> for Node {
    fn from(v: Vec<T>) -> Self {
        Node::List(v.into_iter().map(Into::into).collect())
    }
}

impl Serialize for Node {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Node::Text(t) => s.serialize_str(t),
            Node::Int(k) => s.serialize_i64(*k),
            Node::Bool(b) => s.serialize_bool(*b),
            Node::List(items) => {
                let mut seq = s.serialize_seq(Some(items.len()))?;
                for item in items {
                    seq.serialize_element(item)?;
                }
                seq.end()
            }
            Node::Map(entries) => {
                let mut map = s.serialize_map(Some(entries.len()))?;
                for (k, v) in entries {
                    map.serialize_entry(k, v)?;
                }
                map.end()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub digest: String,
    pub body: Node,
    pub summary: Option<String>,
    pub error: Option<String>,
    pub status: &'static str,
    pub exit: i32,
}

impl Report {
    fn tree(&self) -> Node {
        let mut root = Node::map().with("command", self.command.as_str()).with("inputs", self.digest.as_str());
        if !matches!(&self.body, Node::Map(v) if v.is_empty()) {
            root.set("result", self.body.clone());
        }
        if let Some(s) = &self.summary {
            root.set("summary", s.as_str());
        }
        if let Some(e) = &self.error {
            root.set("error", e.as_str());
        }
        root.with("status", self.status).with("exit", i64::from(self.exit))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = String::new();
                self.tree().render(0, &mut out);
                out
            }
            Format::Machine => {
                let mut out = serde_json::to_string_pretty(&self.tree()).expect("fact trees always serialize");
                out.push('\n');
                out
            }
        }
    }
}
