//! Clopen subsets of the Cantor space as canonical binary tries.

use std::fmt;

use density_core::word::{format_binary, parse_binary};
use density_core::{BinaryMeasure, Error, Rational, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Node {
    Empty,
    Full,
    Split(Box<Node>, Box<Node>),
}

fn split(a: Node, b: Node) -> Node {
    match (&a, &b) {
        (Node::Empty, Node::Empty) => Node::Empty,
        (Node::Full, Node::Full) => Node::Full,
        _ => Node::Split(Box::new(a), Box::new(b)),
    }
}

fn union(a: &Node, b: &Node) -> Node {
    match (a, b) {
        (Node::Full, _) | (_, Node::Full) => Node::Full,
        (Node::Empty, x) | (x, Node::Empty) => x.clone(),
        (Node::Split(a0, a1), Node::Split(b0, b1)) => split(union(a0, b0), union(a1, b1)),
    }
}

fn intersection(a: &Node, b: &Node) -> Node {
    match (a, b) {
        (Node::Empty, _) | (_, Node::Empty) => Node::Empty,
        (Node::Full, x) | (x, Node::Full) => x.clone(),
        (Node::Split(a0, a1), Node::Split(b0, b1)) => {
            split(intersection(a0, b0), intersection(a1, b1))
        }
    }
}

fn complement(a: &Node) -> Node {
    match a {
        Node::Empty => Node::Full,
        Node::Full => Node::Empty,
        Node::Split(a0, a1) => split(complement(a0), complement(a1)),
    }
}

fn wrap(prefix: &[u8], inner: Node) -> Node {
    prefix.iter().rev().fold(inner, |node, &b| {
        if b == 0 {
            split(node, Node::Empty)
        } else {
            split(Node::Empty, node)
        }
    })
}

/// Where a cylinder `N_s` sits relative to a clopen set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Inside,
    Outside,
    Straddles,
}

/// A clopen subset of `2^ω`, stored as a canonical trie whose `Full` leaves
/// are the generators: a finite antichain of binary words with no sibling
/// pair `s⌢0, s⌢1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CylinderSet {
    root: Node,
}

impl CylinderSet {
    pub fn empty() -> Self {
        CylinderSet { root: Node::Empty }
    }

    pub fn full() -> Self {
        CylinderSet { root: Node::Full }
    }

    /// The basic clopen set `N_s`.
    pub fn cylinder(s: &[u8]) -> Self {
        CylinderSet {
            root: wrap(s, Node::Full),
        }
    }

    pub fn from_generators<I, W>(gens: I) -> Self
    where
        I: IntoIterator<Item = W>,
        W: AsRef<[u8]>,
    {
        gens.into_iter().fold(CylinderSet::empty(), |acc, g| {
            acc.union(&CylinderSet::cylinder(g.as_ref()))
        })
    }

    pub fn is_empty(&self) -> bool {
        self.root == Node::Empty
    }

    pub fn is_full(&self) -> bool {
        self.root == Node::Full
    }

    pub fn union(&self, other: &Self) -> Self {
        CylinderSet {
            root: union(&self.root, &other.root),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        CylinderSet {
            root: intersection(&self.root, &other.root),
        }
    }

    pub fn complement(&self) -> Self {
        CylinderSet {
            root: complement(&self.root),
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    /// `s⌢A = {s⌢x : x ∈ A}`.
    pub fn prefixed(&self, s: &[u8]) -> Self {
        CylinderSet {
            root: wrap(s, self.root.clone()),
        }
    }

    fn subtree(&self, s: &[u8]) -> Node {
        let mut node = &self.root;
        for &b in s {
            match node {
                Node::Split(a0, a1) => node = if b == 0 { a0 } else { a1 },
                leaf => return leaf.clone(),
            }
        }
        node.clone()
    }

    /// `LOC(A, s) = {x : s⌢x ∈ A}`.
    pub fn localize(&self, s: &[u8]) -> Self {
        CylinderSet {
            root: self.subtree(s),
        }
    }

    /// `A ∩ N_s`.
    pub fn restrict(&self, s: &[u8]) -> Self {
        CylinderSet {
            root: wrap(s, self.subtree(s)),
        }
    }

    pub fn position(&self, s: &[u8]) -> Position {
        match self.subtree(s) {
            Node::Full => Position::Inside,
            Node::Empty => Position::Outside,
            Node::Split(..) => Position::Straddles,
        }
    }

    /// Membership of the point `x` when `x` is long enough to decide it.
    pub fn decides(&self, x: &[u8]) -> Option<bool> {
        match self.position(x) {
            Position::Inside => Some(true),
            Position::Outside => Some(false),
            Position::Straddles => None,
        }
    }

    /// Generators in length-lexicographic order.
    pub fn generators(&self) -> Vec<Vec<u8>> {
        fn walk(n: &Node, path: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            match n {
                Node::Empty => {}
                Node::Full => out.push(path.clone()),
                Node::Split(a0, a1) => {
                    path.push(0);
                    walk(a0, path, out);
                    path.pop();
                    path.push(1);
                    walk(a1, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut Vec::new(), &mut out);
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn generator_count(&self) -> usize {
        fn count(n: &Node) -> usize {
            match n {
                Node::Empty => 0,
                Node::Full => 1,
                Node::Split(a, b) => count(a) + count(b),
            }
        }
        count(&self.root)
    }

    /// Length of the longest generator (0 for the empty and full sets).
    pub fn depth(&self) -> usize {
        fn d(n: &Node) -> usize {
            match n {
                Node::Split(a, b) => 1 + d(a).max(d(b)),
                _ => 0,
            }
        }
        d(&self.root)
    }

    /// `Σ_{s generator} w(s)`.
    pub fn measure(&self, w: &dyn BinaryMeasure) -> Rational {
        self.measure_below(&mut Vec::new(), &self.root, w)
    }

    fn measure_below(&self, path: &mut Vec<u8>, n: &Node, w: &dyn BinaryMeasure) -> Rational {
        match n {
            Node::Empty => Rational::zero(),
            Node::Full => w.weight(path),
            Node::Split(a0, a1) => {
                path.push(0);
                let m0 = self.measure_below(path, a0, w);
                path.pop();
                path.push(1);
                let m1 = self.measure_below(path, a1, w);
                path.pop();
                m0 + m1
            }
        }
    }

    /// `w(A ∩ N_s)`.
    pub fn measure_within(&self, s: &[u8], w: &dyn BinaryMeasure) -> Rational {
        let sub = self.subtree(s);
        self.measure_below(&mut s.to_vec(), &sub, w)
    }

    pub fn to_json(&self) -> CylinderJson {
        CylinderJson {
            alphabet: "binary".to_string(),
            generators: self.generators().iter().map(|g| format_binary(g)).collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: CylinderJson =
            serde_json::from_str(s).map_err(|e| Error::parse(format!("cylinder set: {e}")))?;
        CylinderSet::try_from(j)
    }
}

impl fmt::Debug for CylinderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators().iter().map(|g| format_binary(g)).collect();
        write!(f, "CylinderSet{gens:?}")
    }
}

/// Wire format `{"alphabet":"binary","generators":["0","11"]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CylinderJson {
    pub alphabet: String,
    pub generators: Vec<String>,
}

impl TryFrom<CylinderJson> for CylinderSet {
    type Error = Error;

    /// Generators need not form an antichain; the result is their union.
    fn try_from(j: CylinderJson) -> Result<Self> {
        if j.alphabet != "binary" {
            return Err(Error::parse(format!(
                "unsupported alphabet {:?}",
                j.alphabet
            )));
        }
        let mut acc = CylinderSet::empty();
        for g in &j.generators {
            acc = acc.union(&CylinderSet::cylinder(&parse_binary(g)?));
        }
        Ok(acc)
    }
}

impl From<CylinderSet> for CylinderJson {
    fn from(c: CylinderSet) -> Self {
        c.to_json()
    }
}

impl Serialize for CylinderSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CylinderSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CylinderJson::deserialize(d)?;
        CylinderSet::try_from(j).map_err(serde::de::Error::custom)
    }
}
