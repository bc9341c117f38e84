use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::Deserialize;

use crate::graphs::Multigraph;
use crate::{Error, Result};

/// Largest group order accepted by [`FiniteGroup`] constructors.
pub const MAX_GROUP_ORDER: usize = 120;

/// Bijection of `0..d`, stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation((0..d).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in &images {
            if i >= d || std::mem::replace(&mut seen[i], true) {
                return Err(Error::invalid(format!(
                    "{images:?} is not a permutation of 0..{d}"
                )));
            }
        }
        Ok(Permutation(images))
    }

    /// Builds a permutation of `0..d` from 0-indexed cycles.
    pub fn from_cycles(d: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut img: Vec<usize> = (0..d).collect();
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                if a >= d {
                    return Err(Error::invalid(format!("cycle entry {a} outside 0..{d}")));
                }
                img[a] = c[(k + 1) % c.len()];
            }
        }
        Self::from_images(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|&(i, &j)| i == j).count()
    }
}

impl fmt::Display for Permutation {
    /// 0-indexed cycle notation, e.g. `(0 2 1)(3 4)`; the identity is `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.0[i];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// All `d!` permutations of `0..d` in lexicographic order of image arrays.
pub fn all_permutations(d: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..d).collect();
    loop {
        out.push(Permutation(cur.clone()));
        // next lexicographic permutation
        let Some(i) = (1..d).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..d).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Finite group on element indices `0..order` with a multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    /// Concrete permutations when the group was built from generators.
    elements: Option<Vec<Permutation>>,
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let m = table.len();
        if m == 0 {
            return Err(Error::invalid("group table is empty"));
        }
        if m > MAX_GROUP_ORDER {
            return Err(Error::invalid(format!(
                "group order {m} exceeds {MAX_GROUP_ORDER}"
            )));
        }
        if table
            .iter()
            .any(|row| row.len() != m || row.iter().any(|&x| x >= m))
        {
            return Err(Error::invalid("group table is not a closed square table"));
        }
        let identity = (0..m)
            .find(|&e| (0..m).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::invalid("group table has no identity"))?;
        let mut inverses = vec![0; m];
        for a in 0..m {
            inverses[a] = (0..m)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::invalid(format!("element {a} has no inverse")))?;
        }
        for a in 0..m {
            for b in 0..m {
                let ab = table[a][b];
                for c in 0..m {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::invalid(format!(
                            "table is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            table,
            identity,
            inverses,
            elements: None,
        })
    }

    /// Closure of permutation generators. Elements are indexed in
    /// lexicographic order of their image arrays; products compose as
    /// functions, `(g·h)(x) = g(h(x))`.
    pub fn from_perm_gens(gens: &[Permutation]) -> Result<Self> {
        let d = gens.first().map_or(0, Permutation::degree);
        if gens.iter().any(|g| g.degree() != d) {
            return Err(Error::invalid("generators act on different sets"));
        }
        let mut found = BTreeSet::from([Permutation::identity(d)]);
        let mut queue = VecDeque::from([Permutation::identity(d)]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = g.compose(&p);
                if found.insert(q.clone()) {
                    if found.len() > MAX_GROUP_ORDER {
                        return Err(Error::invalid(format!(
                            "generated group exceeds order {MAX_GROUP_ORDER}"
                        )));
                    }
                    queue.push_back(q);
                }
            }
        }
        Self::from_permutations(found.into_iter().collect())
    }

    /// A list of permutations closed under composition, in the given order.
    pub fn from_permutations(elements: Vec<Permutation>) -> Result<Self> {
        let m = elements.len();
        if m > MAX_GROUP_ORDER {
            return Err(Error::invalid(format!(
                "group order {m} exceeds {MAX_GROUP_ORDER}"
            )));
        }
        let index = |p: &Permutation| elements.iter().position(|q| q == p);
        let mut table = vec![vec![0; m]; m];
        for (a, g) in elements.iter().enumerate() {
            for (b, h) in elements.iter().enumerate() {
                table[a][b] = index(&g.compose(h))
                    .ok_or_else(|| Error::invalid("permutation list is not closed"))?;
            }
        }
        let mut group = Self::from_table(table)?;
        group.elements = Some(elements);
        Ok(group)
    }

    /// `Z/m` with `a·b = a + b mod m`.
    pub fn cyclic(m: usize) -> Result<Self> {
        Self::from_table(
            (0..m)
                .map(|a| (0..m).map(|b| (a + b) % m).collect())
                .collect(),
        )
    }

    /// `S_d`, elements in lexicographic order of image arrays.
    pub fn symmetric(d: usize) -> Result<Self> {
        Self::from_permutations(all_permutations(d))
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn elements(&self) -> Option<&[Permutation]> {
        self.elements.as_deref()
    }

    /// Index of a concrete permutation, if the group carries them.
    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.elements.as_ref()?.iter().position(|q| q == p)
    }

    /// Parses `{"order": m, "table": [[…]]}` or `{"perm_gens": [[…], …]}`.
    pub fn parse(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct GroupJson {
            order: Option<usize>,
            table: Option<Vec<Vec<usize>>>,
            perm_gens: Option<Vec<Vec<usize>>>,
        }
        let j: GroupJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad group JSON: {e}")))?;
        let as_parse = |e: Error| Error::Parse(e.to_string());
        match (j.table, j.perm_gens) {
            (Some(table), None) => {
                if let Some(m) = j.order {
                    if m != table.len() {
                        return Err(Error::Parse(format!(
                            "order {m} does not match table size {}",
                            table.len()
                        )));
                    }
                }
                Self::from_table(table).map_err(as_parse)
            }
            (None, Some(gens)) => {
                let gens = gens
                    .into_iter()
                    .map(Permutation::from_images)
                    .collect::<Result<Vec<_>>>()
                    .map_err(as_parse)?;
                let g = Self::from_perm_gens(&gens).map_err(as_parse)?;
                if let Some(m) = j.order {
                    if m != g.order() {
                        return Err(Error::Parse(format!(
                            "declared order {m}, generated order {}",
                            g.order()
                        )));
                    }
                }
                Ok(g)
            }
            _ => Err(Error::Parse(
                "group JSON needs exactly one of \"table\" or \"perm_gens\"".into(),
            )),
        }
    }
}

/// Assignment of a group element to every positive edge of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupLabeling {
    pub assignment: Vec<usize>,
}

impl GroupLabeling {
    pub fn new(group: &FiniteGroup, g: &Multigraph, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != g.num_edges() {
            return Err(Error::invalid(format!(
                "labeling has {} entries for {} edges",
                assignment.len(),
                g.num_edges()
            )));
        }
        if let Some(&a) = assignment.iter().find(|&&a| a >= group.order()) {
            return Err(Error::invalid(format!(
                "element {a} is not in a group of order {}",
                group.order()
            )));
        }
        Ok(GroupLabeling { assignment })
    }

    /// Adjacency matrix of the `(Γ, reg)`-covering: vertex `(v, h)` is
    /// `v·|Γ| + h`, and edge `e` joins `(h(e), a)` to `(t(e), γ(e)·a)`.
    pub fn regular_covering(&self, group: &FiniteGroup, g: &Multigraph) -> Multigraph {
        let m = group.order();
        let mut edges = Vec::with_capacity(g.num_edges() * m);
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            for a in 0..m {
                edges.push((u * m + a, v * m + group.mul(self.assignment[e], a)));
            }
        }
        Multigraph::new(g.n() * m, edges).expect("indices are in range")
    }
}

/// Cayley multigraph of `group` with respect to `gens`: one vertex per
/// element and, for each generator `g` and element `h`, an edge `{h, g·h}`.
/// Equals the regular covering of the bouquet labelled by `gens`.
pub fn cayley_from_bouquet(group: &FiniteGroup, gens: &[usize]) -> Result<Multigraph> {
    let bouquet = Multigraph::bouquet(gens.len());
    let labeling = GroupLabeling::new(group, &bouquet, gens.to_vec())?;
    Ok(labeling.regular_covering(group, &bouquet))
}
