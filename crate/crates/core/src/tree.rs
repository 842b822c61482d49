//! Rooted trees with ordered children.
//!
//! Nodes live in a flat arena addressed by [`NodeId`]. A [`Tree`] is only
//! obtainable through [`build_tree`], which validates the parent array, so
//! every `Tree` value satisfies the structural invariants: one root, no
//! cycles, every node reachable, leaves childless, internal nodes with at
//! least one child. Children are kept in ascending id order and both
//! traversals are computed once at construction.

use std::fmt;

use thiserror::Error;

/// Index of a node in a [`Tree`], dense in `0..node_count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(usize);

impl NodeId {
    pub const fn new(index: usize) -> Self {
        NodeId(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for NodeId {
    fn from(index: usize) -> Self {
        NodeId(index)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    kind: NodeKind,
}

/// Errors raised while validating a tree description.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree has no nodes")]
    Empty,
    #[error("parent array has {parents} entries but leaf flags have {flags}")]
    LengthMismatch { parents: usize, flags: usize },
    #[error("node {node} names parent {parent}, which is out of range")]
    ParentOutOfRange { node: usize, parent: usize },
    #[error("no node without a parent")]
    NoRoot,
    #[error("nodes {0} and {1} both lack a parent")]
    MultipleRoots(usize, usize),
    #[error("node {0} lies on a parent cycle")]
    CycleDetected(usize),
    #[error("node {0} is not reachable from the root")]
    UnreachableNode(usize),
    #[error("leaf {0} has children")]
    LeafWithChildren(usize),
    #[error("internal node {0} has no children")]
    ChildlessInternalNode(usize),
}

impl TreeError {
    /// Stable identifier used in machine-readable diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            TreeError::Empty => "EmptyTree",
            TreeError::LengthMismatch { .. } => "LengthMismatch",
            TreeError::ParentOutOfRange { .. } => "ParentOutOfRange",
            TreeError::NoRoot => "NoRoot",
            TreeError::MultipleRoots(..) => "MultipleRoots",
            TreeError::CycleDetected(_) => "CycleDetected",
            TreeError::UnreachableNode(_) => "UnreachableNode",
            TreeError::LeafWithChildren(_) => "LeafWithChildren",
            TreeError::ChildlessInternalNode(_) => "ChildlessInternalNode",
        }
    }
}

/// An immutable rooted tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    nodes: Vec<Node>,
    root: NodeId,
    leaf_count: usize,
    postorder: Vec<NodeId>,
    preorder: Vec<NodeId>,
}

/// Validates a parent array and leaf flags and assembles a [`Tree`].
///
/// `parent_of[v]` is the parent of node `v`, `None` for the root. Children
/// end up ordered by ascending id.
pub fn build_tree(parent_of: &[Option<usize>], leaf_flags: &[bool]) -> Result<Tree, TreeError> {
    let n = parent_of.len();
    if n != leaf_flags.len() {
        return Err(TreeError::LengthMismatch {
            parents: n,
            flags: leaf_flags.len(),
        });
    }
    if n == 0 {
        return Err(TreeError::Empty);
    }

    let mut root = None;
    for (node, parent) in parent_of.iter().enumerate() {
        match *parent {
            Some(p) if p >= n => return Err(TreeError::ParentOutOfRange { node, parent: p }),
            Some(_) => {}
            None => match root {
                Some(r) => return Err(TreeError::MultipleRoots(r, node)),
                None => root = Some(node),
            },
        }
    }
    let root = root.ok_or(TreeError::NoRoot)?;

    // Walk each parent chain; a chain longer than n must revisit a node.
    // 0 = unknown, 1 = on the current walk, 2 = known to reach the root.
    let mut state = vec![0u8; n];
    state[root] = 2;
    let mut walk = Vec::new();
    for start in 0..n {
        let mut v = start;
        while state[v] == 0 {
            state[v] = 1;
            walk.push(v);
            v = parent_of[v].expect("only the root lacks a parent");
        }
        if state[v] == 1 {
            return Err(TreeError::CycleDetected(v));
        }
        for w in walk.drain(..) {
            state[w] = 2;
        }
    }

    let mut nodes: Vec<Node> = leaf_flags
        .iter()
        .zip(parent_of)
        .map(|(&leaf, &parent)| Node {
            parent: parent.map(NodeId),
            children: Vec::new(),
            kind: if leaf {
                NodeKind::Leaf
            } else {
                NodeKind::Internal
            },
        })
        .collect();
    for (child, parent) in parent_of.iter().enumerate() {
        if let Some(p) = *parent {
            nodes[p].children.push(NodeId(child));
        }
    }
    let mut leaf_count = 0;
    for (id, node) in nodes.iter().enumerate() {
        match node.kind {
            NodeKind::Leaf if !node.children.is_empty() => {
                return Err(TreeError::LeafWithChildren(id))
            }
            NodeKind::Internal if node.children.is_empty() => {
                return Err(TreeError::ChildlessInternalNode(id))
            }
            NodeKind::Leaf => leaf_count += 1,
            NodeKind::Internal => {}
        }
    }

    let root = NodeId(root);
    let preorder = compute_preorder(&nodes, root);
    if preorder.len() != n {
        let mut seen = vec![false; n];
        for v in &preorder {
            seen[v.0] = true;
        }
        let missing = seen.iter().position(|&s| !s).unwrap_or(0);
        return Err(TreeError::UnreachableNode(missing));
    }
    let postorder = compute_postorder(&nodes, root);

    Ok(Tree {
        nodes,
        root,
        leaf_count,
        postorder,
        preorder,
    })
}

fn compute_preorder(nodes: &[Node], root: NodeId) -> Vec<NodeId> {
    let mut order = Vec::with_capacity(nodes.len());
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        order.push(v);
        stack.extend(nodes[v.0].children.iter().rev().copied());
    }
    order
}

fn compute_postorder(nodes: &[Node], root: NodeId) -> Vec<NodeId> {
    let mut order = Vec::with_capacity(nodes.len());
    // (node, index of the next child to descend into)
    let mut stack = vec![(root, 0usize)];
    while let Some((v, next)) = stack.pop() {
        let children = &nodes[v.0].children;
        if next < children.len() {
            stack.push((v, next + 1));
            stack.push((children[next], 0));
        } else {
            order.push(v);
        }
    }
    order
}

impl Tree {
    pub fn root(&self) -> NodeId {
        self.root
    }

    /// N, the number of nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// n, the number of leaves.
    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.nodes[v.0].parent
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.nodes[v.0].children
    }

    pub fn kind(&self, v: NodeId) -> NodeKind {
        self.nodes[v.0].kind
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.nodes[v.0].kind == NodeKind::Leaf
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).map(NodeId)
    }

    /// Leaves in ascending id order.
    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_ids().filter(|&v| self.is_leaf(v))
    }

    /// Internal nodes in ascending id order.
    pub fn internal_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_ids().filter(|&v| !self.is_leaf(v))
    }

    /// Every node after all of its descendants, children in stored order.
    pub fn postorder(&self) -> &[NodeId] {
        &self.postorder
    }

    /// Every node before all of its descendants, children in stored order.
    pub fn preorder(&self) -> &[NodeId] {
        &self.preorder
    }

    /// True iff every internal node has exactly two children.
    pub fn is_binary(&self) -> bool {
        self.nodes
            .iter()
            .all(|node| node.kind == NodeKind::Leaf || node.children.len() == 2)
    }

    /// The parent array this tree was built from.
    pub fn parent_array(&self) -> Vec<Option<usize>> {
        self.nodes
            .iter()
            .map(|node| node.parent.map(NodeId::index))
            .collect()
    }

    pub fn leaf_flags(&self) -> Vec<bool> {
        self.nodes
            .iter()
            .map(|node| node.kind == NodeKind::Leaf)
            .collect()
    }

    /// Edges as `(parent, child)` pairs in ascending child id order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(child, node)| node.parent.map(|p| (p, NodeId(child))))
    }
}
