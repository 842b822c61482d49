//! Newick reading and writing.
//!
//! Leaf names carry the integer labels, e.g. `((1,5),9);`. Internal node
//! names and `:length` suffixes are accepted and ignored when reading.
//! Written trees put each internal node's label in its name slot:
//! `((1,5)5,9)5;`.
//!
//! Nodes are numbered in the order they appear in the text, so the root is
//! node 0 and siblings keep their left-to-right order.

use thiserror::Error;

use crate::cost::{CostError, Label, LeafLabeling};
use crate::tree::{build_tree, NodeId, Tree, TreeError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum NewickError {
    #[error("syntax error at byte {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("leaf name {0:?} is not an integer")]
    NonIntegerLeafName(String),
    #[error("input contains no tree")]
    EmptyTree,
    #[error("node {0} has no label")]
    MissingNodeLabel(usize),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Cost(#[from] CostError),
}

impl NewickError {
    pub fn code(&self) -> &'static str {
        match self {
            NewickError::SyntaxError { .. } => "SyntaxError",
            NewickError::NonIntegerLeafName(_) => "NonIntegerLeafName",
            NewickError::EmptyTree => "EmptyTree",
            NewickError::MissingNodeLabel(_) => "MissingNodeLabel",
            NewickError::Tree(e) => e.code(),
            NewickError::Cost(e) => e.code(),
        }
    }
}

/// A tree whose nodes keep the raw names from the text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedTree {
    pub tree: Tree,
    pub names: Vec<String>,
}

/// A parsed tree together with its integer leaf labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTreeDocument {
    pub tree: Tree,
    pub leaf_labels: LeafLabeling,
    pub source_name: String,
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> NewickError {
        NewickError::SyntaxError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    /// Skips whitespace and `[...]` comments.
    fn skip_trivia(&mut self) -> Result<(), NewickError> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => self.bump(),
                Some('[') => match self.text[self.pos..].find(']') {
                    Some(end) => self.pos += end + 1,
                    None => return Err(self.error("unterminated comment")),
                },
                _ => return Ok(()),
            }
        }
    }

    fn name(&mut self) -> Result<String, NewickError> {
        self.skip_trivia()?;
        if self.peek() == Some('\'') {
            self.bump();
            let mut out = String::new();
            loop {
                match self.peek() {
                    None => return Err(self.error("unterminated quoted name")),
                    Some('\'') => {
                        self.bump();
                        if self.peek() == Some('\'') {
                            out.push('\'');
                            self.bump();
                        } else {
                            return Ok(out);
                        }
                    }
                    Some(c) => {
                        out.push(c);
                        self.bump();
                    }
                }
            }
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || "()[]',:;".contains(c) {
                break;
            }
            self.bump();
        }
        Ok(self.text[start..self.pos].to_string())
    }

    fn branch_length(&mut self) -> Result<(), NewickError> {
        self.skip_trivia()?;
        if self.peek() != Some(':') {
            return Ok(());
        }
        self.bump();
        self.skip_trivia()?;
        let at = self.pos;
        let length = self.name()?;
        if length.parse::<f64>().is_err() {
            self.pos = at;
            return Err(self.error(format!("bad branch length {length:?}")));
        }
        Ok(())
    }

    fn tree(&mut self) -> Result<NamedTree, NewickError> {
        let mut parents: Vec<Option<usize>> = Vec::new();
        let mut names: Vec<String> = Vec::new();
        let mut leaf: Vec<bool> = Vec::new();
        let mut open: Vec<usize> = Vec::new();

        self.skip_trivia()?;
        if matches!(self.peek(), None | Some(';')) {
            return Err(NewickError::EmptyTree);
        }

        let mut expect_node = true;
        loop {
            self.skip_trivia()?;
            if expect_node {
                let parent = open.last().copied();
                if self.peek() == Some('(') {
                    self.bump();
                    open.push(parents.len());
                    parents.push(parent);
                    names.push(String::new());
                    leaf.push(false);
                    continue;
                }
                parents.push(parent);
                names.push(self.name()?);
                leaf.push(true);
                self.branch_length()?;
                expect_node = false;
                continue;
            }
            match self.peek() {
                Some(',') if !open.is_empty() => {
                    self.bump();
                    expect_node = true;
                }
                Some(')') => {
                    let Some(node) = open.pop() else {
                        return Err(self.error("unbalanced ')'"));
                    };
                    self.bump();
                    names[node] = self.name()?;
                    self.branch_length()?;
                }
                Some(';') if open.is_empty() => {
                    self.bump();
                    self.skip_trivia()?;
                    if self.pos != self.text.len() {
                        return Err(self.error("trailing text after ';'"));
                    }
                    let tree = build_tree(&parents, &leaf)?;
                    return Ok(NamedTree { tree, names });
                }
                Some(';') => return Err(self.error("unbalanced '(' before ';'")),
                None if open.is_empty() => return Err(self.error("missing ';'")),
                None => return Err(self.error("unbalanced '(' at end of input")),
                Some(c) => return Err(self.error(format!("unexpected {c:?}"))),
            }
        }
    }
}

/// Parses one Newick expression, keeping every node's raw name.
pub fn parse_named(text: &str) -> Result<NamedTree, NewickError> {
    Parser { text, pos: 0 }.tree()
}

/// Parses one Newick tree whose leaf names are integers.
pub fn parse_newick(text: &str) -> Result<LabeledTreeDocument, NewickError> {
    let NamedTree { tree, names } = parse_named(text)?;
    let mut pairs = Vec::with_capacity(tree.leaf_count());
    for leaf in tree.leaves() {
        let name = &names[leaf.index()];
        let label = name
            .parse::<Label>()
            .map_err(|_| NewickError::NonIntegerLeafName(name.clone()))?;
        pairs.push((leaf, label));
    }
    let leaf_labels = LeafLabeling::new(&tree, pairs)?;
    Ok(LabeledTreeDocument {
        tree,
        leaf_labels,
        source_name: String::new(),
    })
}

/// One tree per nonblank line, each tagged `<source>:<line>`.
pub fn parse_newick_batch(
    text: &str,
    source: &str,
) -> Vec<Result<LabeledTreeDocument, NewickError>> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            parse_newick(line).map(|mut doc| {
                doc.source_name = format!("{source}:{}", i + 1);
                doc
            })
        })
        .collect()
}

/// Writes `tree` with `name(v)` in every node's name slot.
pub fn write_newick(tree: &Tree, mut name: impl FnMut(NodeId) -> String) -> String {
    let mut out = String::new();
    let mut stack = vec![(tree.root(), 0usize)];
    while let Some((node, next)) = stack.pop() {
        let children = tree.children(node);
        if children.is_empty() {
            out.push_str(&name(node));
            continue;
        }
        if next == 0 {
            out.push('(');
        } else if next < children.len() {
            out.push(',');
        }
        if next < children.len() {
            stack.push((node, next + 1));
            stack.push((children[next], 0));
        } else {
            out.push(')');
            out.push_str(&name(node));
        }
    }
    out.push(';');
    out
}

/// Plain Newick with only the leaf labels.
pub fn serialize_tree(tree: &Tree, leaves: &LeafLabeling) -> String {
    write_newick(tree, |v| {
        leaves.get(v).map(|l| l.to_string()).unwrap_or_default()
    })
}

/// Newick with every node's label from `full`.
pub fn serialize_labeled(doc: &LabeledTreeDocument, full: &[Label]) -> Result<String, NewickError> {
    if full.len() < doc.tree.node_count() {
        return Err(NewickError::MissingNodeLabel(full.len()));
    }
    Ok(write_newick(&doc.tree, |v| full[v.index()].to_string()))
}
