//! Face lattices computed by closing vertex-facet incidences under
//! intersection.

use std::collections::{HashMap, HashSet, VecDeque};

/// Set of vertex (or facet) indices over a fixed universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
    universe: usize,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            words: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            universe: self.universe,
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
            universe: self.universe,
        }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// A face: its vertex set, dimension (`-1` for the empty face) and the facets
/// containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertices: VertexSet,
    pub dim: isize,
    pub facets: Vec<usize>,
}

/// All faces of a polytope, sorted by dimension then by vertex indices.
/// Face ids are positions in this order; id 0 is the empty face and the last
/// id is the polytope itself.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    faces: Vec<Face>,
    index: HashMap<VertexSet, usize>,
}

impl FaceLattice {
    /// Builds the lattice from the facet incidence sets. `dim_of` returns the
    /// affine dimension of a nonempty vertex subset.
    pub fn build(
        num_vertices: usize,
        incidence: &[VertexSet],
        dim_of: impl Fn(&VertexSet) -> isize,
    ) -> Self {
        let top = VertexSet::full(num_vertices);
        let mut seen: HashSet<VertexSet> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(top.clone());
        queue.push_back(top);
        while let Some(face) = queue.pop_front() {
            for facet in incidence {
                let g = face.intersection(facet);
                if g != face && seen.insert(g.clone()) {
                    queue.push_back(g);
                }
            }
        }
        let mut faces: Vec<Face> = seen
            .into_iter()
            .map(|vertices| {
                let dim = if vertices.is_empty() {
                    -1
                } else {
                    dim_of(&vertices)
                };
                let facets = incidence
                    .iter()
                    .enumerate()
                    .filter(|(_, inc)| vertices.is_subset(inc))
                    .map(|(f, _)| f)
                    .collect();
                Face {
                    vertices,
                    dim,
                    facets,
                }
            })
            .collect();
        if !faces.iter().any(|f| f.vertices.is_empty()) {
            // A 0-dimensional polytope has no facets to intersect.
            faces.push(Face {
                vertices: VertexSet::empty(num_vertices),
                dim: -1,
                facets: (0..incidence.len()).collect(),
            });
        }
        faces.sort_by_cached_key(|f| (f.dim, f.vertices.to_vec()));
        let index = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.vertices.clone(), i))
            .collect();
        FaceLattice { faces, index }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn top(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn find(&self, vertices: &VertexSet) -> Option<usize> {
        self.index.get(vertices).copied()
    }

    pub fn ids_of_dim(&self, dim: isize) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(move |&i| self.faces[i].dim == dim)
    }

    pub fn count_of_dim(&self, dim: isize) -> usize {
        self.ids_of_dim(dim).count()
    }

    /// True iff face `inner` is contained in face `outer`.
    pub fn contains(&self, outer: usize, inner: usize) -> bool {
        self.faces[inner]
            .vertices
            .is_subset(&self.faces[outer].vertices)
    }

    /// Edges as vertex index pairs `(i, j)`, `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.ids_of_dim(1)
            .map(|id| {
                let v = self.faces[id].vertices.to_vec();
                debug_assert_eq!(v.len(), 2, "edges have two vertices");
                (v[0], v[1])
            })
            .collect()
    }

    /// `f_k` counts for `k = -1 ..= max dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        let max = self.faces.last().map_or(-1, |f| f.dim);
        (-1..=max).map(|k| self.count_of_dim(k)).collect()
    }
}
