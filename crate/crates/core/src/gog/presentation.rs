use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::{EdgeId, GbsGraph, SpanningTree, VertexId};

/// A generator of the canonical presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Generator {
    /// `a_v`, generating the vertex group at `v`.
    Vertex(VertexId),
    /// `t_e` for an edge outside the spanning tree.
    Stable(EdgeId),
}

/// A relator as a word of `(generator, exponent)` syllables, one per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relator {
    pub edge: EdgeId,
    pub word: Vec<(Generator, i64)>,
}

impl Relator {
    pub fn evaluate<G: Group>(&self, group: &G, image: impl Fn(Generator) -> G::Elem) -> G::Elem {
        self.word.iter().fold(group.identity(), |acc, &(x, e)| group.mul(&acc, &group.pow(&image(x), e)))
    }

    pub fn display(&self, g: &GbsGraph) -> String {
        let mut s = String::new();
        for (i, &(x, e)) in self.word.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(g.generator_name(x));
            if e != 1 {
                let _ = write!(s, "^{e}");
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    /// Vertex generators first, in vertex order, then stable letters.
    pub generators: Vec<Generator>,
    pub relators: Vec<Relator>,
    pub names: Vec<String>,
}

impl Presentation {
    /// The first relator that does not evaluate to the identity.
    pub fn first_failure<G: Group>(&self, group: &G, image: impl Fn(Generator) -> G::Elem) -> Option<&Relator> {
        let id = group.identity();
        self.relators.iter().find(|r| r.evaluate(group, &image) != id)
    }

    pub fn display(&self, g: &GbsGraph) -> String {
        let rels: Vec<String> = self.relators.iter().map(|r| r.display(g)).collect();
        alloc::format!("<{} | {}>", self.names.join(", "), rels.join(", "))
    }
}

/// A group given by its multiplication, for evaluating words.
pub trait Group {
    type Elem: Clone + PartialEq;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, e: i64) -> Self::Elem {
        let mut base = if e < 0 { self.inv(a) } else { a.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// Generators `a_v` and `t_e` (`e ∉ tree`). A tree edge `e` gives the relator
/// `a_{d₀}^{λ₀} a_{d₁}^{−λ₁}`, a non-tree edge `t_e a_{d₀}^{λ₀} t_e⁻¹ a_{d₁}^{−λ₁}`.
pub fn canonical_presentation(g: &GbsGraph, tree: &SpanningTree) -> Presentation {
    let mut generators: Vec<Generator> = g.vertex_ids().map(Generator::Vertex).collect();
    generators.extend(tree.non_tree_edges(g).map(Generator::Stable));
    let relators = g
        .edge_ids()
        .map(|e| {
            let edge = g.edge(e);
            let a0 = (Generator::Vertex(edge.src), edge.lambda0);
            let a1 = (Generator::Vertex(edge.dst), -edge.lambda1);
            let word = if tree.contains(e) {
                alloc::vec![a0, a1]
            } else {
                let t = Generator::Stable(e);
                alloc::vec![(t, 1), a0, (t, -1), a1]
            };
            Relator { edge: e, word }
        })
        .collect();
    let names = generators.iter().map(|&x| String::from(g.generator_name(x))).collect();
    Presentation { generators, relators, names }
}
