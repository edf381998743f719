//! Abstract simplicial complexes built from maximal simplices.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// A simplex is a sorted set of vertex indices.
pub type Simplex = Vec<usize>;

/// A finite simplicial complex, closed under non-empty subsets, with all
/// maximal simplices of the same (top) dimension.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    vertex_names: Vec<String>,
    /// all simplices, grouped by dimension: simplices[k] has k+1 vertices
    simplices: Vec<BTreeSet<Simplex>>,
    top_dim: usize,
    orientable: bool,
}

/// A codimension-2 simplex together with its star of top simplices.
#[derive(Debug, Clone)]
pub struct Hinge {
    pub simplex: Simplex,
    pub star: Vec<Simplex>,
    pub interior: bool,
}

fn subsets_nonempty(s: &[usize]) -> Vec<Simplex> {
    let mut out = Vec::new();
    let n = s.len();
    for mask in 1u32..(1 << n) {
        let sub: Simplex = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
        out.push(sub);
    }
    out
}

impl SimplicialComplex {
    /// Build from vertex names and maximal simplices (as name lists); the
    /// closure under subsets is generated eagerly.
    pub fn from_maximal(vertex_names: Vec<String>, maximal: &[Vec<String>]) -> Result<Self> {
        let index: BTreeMap<&str, usize> = vertex_names
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        if index.len() != vertex_names.len() {
            return Err(Error::InvalidComplex("duplicate vertex names".into()));
        }
        let mut maximal_idx = Vec::with_capacity(maximal.len());
        for simplex in maximal {
            let mut s: Simplex = simplex
                .iter()
                .map(|v| {
                    index
                        .get(v.as_str())
                        .copied()
                        .ok_or_else(|| Error::InvalidComplex(format!("unknown vertex {v}")))
                })
                .collect::<Result<_>>()?;
            s.sort_unstable();
            s.dedup();
            if s.len() != simplex.len() {
                return Err(Error::InvalidComplex(format!(
                    "repeated vertex in simplex {simplex:?}"
                )));
            }
            maximal_idx.push(s);
        }
        Self::from_maximal_indices(vertex_names, &maximal_idx)
    }

    pub fn from_maximal_indices(vertex_names: Vec<String>, maximal: &[Simplex]) -> Result<Self> {
        if maximal.is_empty() {
            return Err(Error::InvalidComplex("no maximal simplices".into()));
        }
        let dims: BTreeSet<usize> = maximal.iter().map(|s| s.len()).collect();
        if dims.len() != 1 {
            return Err(Error::InvalidComplex(
                "maximal simplices of mixed dimension (complex is not pure)".into(),
            ));
        }
        let top_dim = maximal[0].len() - 1;
        let mut simplices: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); top_dim + 1];
        for s in maximal {
            for v in s {
                if *v >= vertex_names.len() {
                    return Err(Error::InvalidComplex(format!("vertex index {v} out of range")));
                }
            }
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != top_dim + 1 {
                return Err(Error::InvalidComplex(format!("repeated vertex in simplex {s:?}")));
            }
            for sub in subsets_nonempty(&s) {
                simplices[sub.len() - 1].insert(sub);
            }
        }
        let orientable = check_orientable(&simplices[top_dim]);
        Ok(SimplicialComplex {
            vertex_names,
            simplices,
            top_dim,
            orientable,
        })
    }

    pub fn top_dim(&self) -> usize {
        self.top_dim
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.vertex_names[i]
    }

    /// Simplices of dimension k (k+1 vertices).
    pub fn simplices_of_dim(&self, k: usize) -> impl Iterator<Item = &Simplex> {
        self.simplices[k].iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices_of_dim(1)
    }

    pub fn top_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices_of_dim(self.top_dim)
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        s.len() <= self.top_dim + 1 && self.simplices[s.len() - 1].contains(s)
    }

    /// All codimension-2 simplices with their stars and interiority.
    pub fn hinges(&self) -> Vec<Hinge> {
        if self.top_dim < 2 {
            return Vec::new();
        }
        let hinge_dim = self.top_dim - 2;
        self.simplices_of_dim(hinge_dim)
            .map(|h| {
                let star: Vec<Simplex> = self
                    .top_simplices()
                    .filter(|t| is_subset(h, t))
                    .cloned()
                    .collect();
                let interior = link_is_circle(h, &star);
                Hinge {
                    simplex: h.clone(),
                    star,
                    interior,
                }
            })
            .collect()
    }

    pub fn hinge(&self, simplex: &[usize]) -> Result<Hinge> {
        if self.top_dim < 2 || simplex.len() != self.top_dim - 1 {
            return Err(Error::InvalidComplex(format!(
                "{simplex:?} is not a codimension-2 simplex of this complex"
            )));
        }
        let star: Vec<Simplex> = self
            .top_simplices()
            .filter(|t| is_subset(simplex, t))
            .cloned()
            .collect();
        if star.is_empty() {
            return Err(Error::InvalidComplex(format!("{simplex:?} has empty star")));
        }
        let interior = link_is_circle(simplex, &star);
        Ok(Hinge {
            simplex: simplex.to_vec(),
            star,
            interior,
        })
    }
}

pub fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}

/// The hinge is interior iff its link is a single circle: the graph whose
/// nodes are the star's top simplices, with an edge whenever two of them
/// share a facet containing the hinge, is a single cycle, and every such
/// facet lies in exactly two star members.
fn link_is_circle(hinge: &[usize], star: &[Simplex]) -> bool {
    if star.len() < 3 {
        return false;
    }
    // facets-at-hinge of each star member: hinge + one extra vertex
    let mut facet_owners: BTreeMap<Simplex, Vec<usize>> = BTreeMap::new();
    for (ti, t) in star.iter().enumerate() {
        let extras: Vec<usize> = t.iter().copied().filter(|v| hinge.binary_search(v).is_err()).collect();
        if extras.len() != 2 {
            return false;
        }
        for e in extras {
            let mut facet = hinge.to_vec();
            facet.push(e);
            facet.sort_unstable();
            facet_owners.entry(facet).or_default().push(ti);
        }
    }
    if facet_owners.values().any(|o| o.len() != 2) {
        return false;
    }
    // walk the cycle
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); star.len()];
    for owners in facet_owners.values() {
        adj[owners[0]].push(owners[1]);
        adj[owners[1]].push(owners[0]);
    }
    if adj.iter().any(|a| a.len() != 2) {
        return false;
    }
    let mut visited = vec![false; star.len()];
    let mut cur = 0usize;
    let mut prev = usize::MAX;
    for _ in 0..star.len() {
        visited[cur] = true;
        let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
        prev = cur;
        cur = next;
    }
    cur == 0 && visited.iter().all(|&v| v)
}

/// Greedy orientation propagation across shared facets; true iff a globally
/// consistent orientation of the top simplices exists (and every facet is
/// shared by at most two of them).
fn check_orientable(tops: &BTreeSet<Simplex>) -> bool {
    let tops: Vec<&Simplex> = tops.iter().collect();
    let mut facet_map: BTreeMap<Simplex, Vec<usize>> = BTreeMap::new();
    for (i, t) in tops.iter().enumerate() {
        for k in 0..t.len() {
            let mut f = (*t).clone();
            f.remove(k);
            facet_map.entry(f).or_default().push(i);
        }
    }
    if facet_map.values().any(|v| v.len() > 2) {
        return false;
    }
    // sign[i] in {+1,-1,0=unassigned}
    let mut sign = vec![0i8; tops.len()];
    for start in 0..tops.len() {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for k in 0..tops[i].len() {
                let mut f = tops[i].clone();
                f.remove(k);
                let owners = &facet_map[&f];
                for &j in owners {
                    if j == i {
                        continue;
                    }
                    // relative orientation: for sorted vertex lists, two
                    // n-simplices sharing a facet are consistently oriented
                    // iff the removed-vertex positions have opposite parity.
                    let kj = tops[j]
                        .iter()
                        .position(|v| f.binary_search(v).is_err())
                        .expect("facet differs by one vertex");
                    let rel: i8 = if (k + kj) % 2 == 0 { -1 } else { 1 };
                    let want = sign[i] * rel;
                    if sign[j] == 0 {
                        sign[j] = want;
                        stack.push(j);
                    } else if sign[j] != want {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Boundary of the 4-simplex on vertices 0..4: all five 4-subsets.
pub fn boundary_4_simplex() -> SimplicialComplex {
    let names = (0..5).map(|i| format!("v{i}")).collect();
    let maximal: Vec<Simplex> = (0..5)
        .map(|skip| (0..5).filter(|v| *v != skip).collect())
        .collect();
    SimplicialComplex::from_maximal_indices(names, &maximal).unwrap()
}
