//! Semisimple root data over a chosen lattice, and the Weyl group with
//! lengths, canonical reduced words, Bruhat order and inversion sets.
//!
//! All coordinates are relative to the chosen lattice basis: adjoint
//! (simple roots), simply connected (fundamental weights), or an explicit
//! intermediate basis given in weight coordinates.  Lattice inclusions
//! are certified by exact integer solvability.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlinalg::{lattice_index, solve_linear, IntMatrix, LatticeIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynkinType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeKind {
    Adjoint,
    SimplyConnected,
    /// Rows are the basis vectors of the lattice in weight coordinates.
    Intermediate(Vec<Vec<i64>>),
}

/// One root with all the coordinate data the operator layer needs.
#[derive(Debug, Clone)]
pub struct Root {
    /// Coordinates in the chosen lattice basis.
    pub lattice: Vec<i64>,
    /// The coroot as a linear functional on lattice coordinates.
    pub coroot: Vec<i64>,
    /// Coordinates in the simple-root basis (all of one sign).
    pub simple_coords: Vec<i64>,
    pub positive: bool,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.simple_coords.iter().sum()
    }

    /// Pairing of the coroot with a lattice vector.
    pub fn pair(&self, lambda: &[i64]) -> i64 {
        self.coroot.iter().zip(lambda).map(|(a, b)| a * b).sum()
    }
}

#[derive(Debug, Clone)]
pub struct RootDatum {
    pub components: Vec<(DynkinType, usize)>,
    pub rank: usize,
    pub lattice: LatticeKind,
    /// Cartan matrix: column j holds the simple root alpha_j in the
    /// fundamental-weight basis.
    pub cartan: Vec<Vec<i64>>,
    /// Columns are the lattice basis vectors in weight coordinates.
    basis: Vec<Vec<i64>>,
    roots: Vec<Root>,
    n_positive: usize,
    root_lookup: HashMap<Vec<i64>, usize>,
    /// Matrices of the simple reflections on lattice coordinates.
    simple_reflections: Vec<LatMat>,
    /// Fundamental weights in lattice coordinates, when they lie in the
    /// lattice.
    weights_in_lattice: Vec<Option<Vec<i64>>>,
}

/// Small square integer matrix acting on lattice coordinates, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatMat {
    pub n: usize,
    pub a: Vec<i64>,
}

impl LatMat {
    pub fn identity(n: usize) -> Self {
        let mut a = vec![0; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        LatMat { n, a }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    pub fn mul(&self, other: &LatMat) -> LatMat {
        let n = self.n;
        let mut a = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0;
                for k in 0..n {
                    s += self.get(i, k) * other.get(k, j);
                }
                a[i * n + j] = s;
            }
        }
        LatMat { n, a }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }
}

fn cartan_matrix_component(ty: DynkinType, rank: usize) -> Result<Vec<Vec<i64>>> {
    let bad = |detail: String| Err(Error::UnknownType { detail });
    let n = rank;
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = |c: &mut Vec<Vec<i64>>, edges: &[(usize, usize)]| {
        for &(i, j) in edges {
            c[i][j] = -1;
            c[j][i] = -1;
        }
    };
    match (ty, rank) {
        (DynkinType::A, r) if r >= 1 => {
            chain(&mut c, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>());
        }
        (DynkinType::B, r) if r >= 2 => {
            chain(&mut c, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>());
            // alpha_n short: its coroot pairs to -2 with alpha_{n-1}
            c[n - 1][n - 2] = -2;
        }
        (DynkinType::C, r) if r >= 1 => {
            if n >= 2 {
                chain(&mut c, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>());
                // alpha_n long
                c[n - 2][n - 1] = -2;
            }
        }
        (DynkinType::D, r) if r >= 3 => {
            chain(&mut c, &(0..n - 2).map(|i| (i, i + 1)).collect::<Vec<_>>());
            c[n - 3][n - 1] = -1;
            c[n - 1][n - 3] = -1;
            c[n - 2][n - 1] = 0;
            c[n - 1][n - 2] = 0;
        }
        (DynkinType::E, r) if (6..=8).contains(&r) => {
            // Bourbaki numbering: node 2 hangs off node 4
            let mut edges = vec![(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)];
            if r >= 7 {
                edges.push((5, 6));
            }
            if r == 8 {
                edges.push((6, 7));
            }
            chain(&mut c, &edges);
        }
        (DynkinType::F, 4) => {
            chain(&mut c, &[(0, 1), (2, 3)]);
            c[1][2] = -1;
            c[2][1] = -2;
        }
        (DynkinType::G, 2) => {
            c[0][1] = -1;
            c[1][0] = -3;
        }
        _ => return bad(format!("{ty}{rank} is not a supported Dynkin type")),
    }
    Ok(c)
}

/// Number of roots of the irreducible type, for cross-checking the
/// reflection closure.
fn root_count(ty: DynkinType, n: usize) -> usize {
    match ty {
        DynkinType::A => n * (n + 1),
        DynkinType::B | DynkinType::C => 2 * n * n,
        DynkinType::D => 2 * n * (n - 1),
        DynkinType::E => match n {
            6 => 72,
            7 => 126,
            _ => 240,
        },
        DynkinType::F => 48,
        DynkinType::G => 12,
    }
}

impl RootDatum {
    pub fn build(components: &[(DynkinType, usize)], lattice: LatticeKind) -> Result<RootDatum> {
        if components.is_empty() {
            return Err(Error::UnknownType { detail: "empty type".into() });
        }
        let rank: usize = components.iter().map(|(_, r)| r).sum();
        // block-diagonal Cartan matrix
        let mut cartan = vec![vec![0i64; rank]; rank];
        let mut offset = 0;
        for &(ty, r) in components {
            let block = cartan_matrix_component(ty, r)?;
            for i in 0..r {
                for j in 0..r {
                    cartan[offset + i][offset + j] = block[i][j];
                }
            }
            offset += r;
        }

        // lattice basis in weight coordinates (columns)
        let basis: Vec<Vec<i64>> = match &lattice {
            LatticeKind::SimplyConnected => {
                (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect()
            }
            LatticeKind::Adjoint => cartan.clone(),
            LatticeKind::Intermediate(rows) => {
                if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
                    return Err(Error::InvalidLattice {
                        reason: format!("basis must be a {rank}x{rank} integer matrix"),
                    });
                }
                // rows of the config are basis vectors; store as columns
                (0..rank).map(|i| (0..rank).map(|j| rows[j][i]).collect()).collect()
            }
        };
        let basis_mat = IntMatrix::from_fn(rank, rank, |i, j| BigInt::from(basis[i][j]));
        match lattice_index(&basis_mat) {
            LatticeIndex::Infinite => {
                return Err(Error::InvalidLattice {
                    reason: "basis matrix is singular".into(),
                })
            }
            LatticeIndex::Finite(_) => {}
        }

        // root lattice inside the chosen lattice: every simple root must
        // be an integer combination of the basis
        let to_lattice = |weight_coords: &[i64]| -> Result<Vec<i64>> {
            let b: Vec<BigInt> = weight_coords.iter().map(|&v| BigInt::from(v)).collect();
            let x = solve_linear(&basis_mat, &b, None).map_err(|_| Error::InvalidLattice {
                reason: format!(
                    "vector {weight_coords:?} (weight coords) is not in the lattice: root lattice not contained"
                ),
            })?;
            Ok(x.iter().map(big_to_i64).collect())
        };

        // closure of the simple roots under simple reflections, tracked in
        // weight coordinates together with coroot coordinates
        let simple_in_weights: Vec<Vec<i64>> =
            (0..rank).map(|j| (0..rank).map(|i| cartan[i][j]).collect()).collect();
        let mut seen: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        let mut queue: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
        for j in 0..rank {
            let coroot: Vec<i64> = (0..rank).map(|i| i64::from(i == j)).collect();
            seen.insert(simple_in_weights[j].clone(), coroot.clone());
            queue.push((simple_in_weights[j].clone(), coroot));
        }
        while let Some((y, d)) = queue.pop() {
            for i in 0..rank {
                // s_i on weight coordinates
                let mut y2 = y.clone();
                let yi = y[i];
                for (k, item) in y2.iter_mut().enumerate() {
                    *item -= yi * cartan[k][i];
                }
                // s_i on coroot coordinates
                let pair: i64 = (0..rank).map(|k| d[k] * cartan[k][i]).sum();
                let mut d2 = d.clone();
                d2[i] -= pair;
                if !seen.contains_key(&y2) {
                    seen.insert(y2.clone(), d2.clone());
                    queue.push((y2, d2));
                }
            }
        }

        let expected: usize = components.iter().map(|&(ty, r)| root_count(ty, r)).sum();
        if seen.len() != expected {
            return Err(Error::UnknownType {
                detail: format!("reflection closure found {} roots, expected {expected}", seen.len()),
            });
        }

        // simple-root coordinates: invert the Cartan matrix over Z on the
        // root lattice
        let cartan_mat = IntMatrix::from_fn(rank, rank, |i, j| BigInt::from(cartan[i][j]));
        let mut roots = Vec::new();
        for (y, d) in &seen {
            let b: Vec<BigInt> = y.iter().map(|&v| BigInt::from(v)).collect();
            let z = solve_linear(&cartan_mat, &b, None).expect("roots lie in the root lattice");
            let z: Vec<i64> = z.iter().map(big_to_i64).collect();
            let positive = z.iter().all(|&v| v >= 0);
            if !positive {
                assert!(z.iter().all(|&v| v <= 0), "root signs must be uniform");
            }
            let lattice_coords = to_lattice(y)?;
            // the coroot functional on lattice coordinates: sum_j d_j *
            // (weight coordinate j of the lattice vector)
            let coroot: Vec<i64> = (0..rank)
                .map(|col| (0..rank).map(|j| d[j] * basis[j][col]).sum())
                .collect();
            let root = Root { lattice: lattice_coords, coroot, simple_coords: z, positive };
            // alpha^vee(alpha) = 2 for every root
            assert_eq!(root.pair(&root.lattice), 2, "coroot pairing normalization");
            roots.push(root);
        }
        // positives first: by height then by simple coordinates with the
        // earlier simple root first; negatives mirror the positives
        let mut positives: Vec<Root> = roots.iter().filter(|r| r.positive).cloned().collect();
        positives.sort_by(|a, b| {
            (a.height(), b.simple_coords.clone()).cmp(&(b.height(), a.simple_coords.clone()))
        });
        let negatives: Vec<Root> = positives
            .iter()
            .map(|r| Root {
                lattice: r.lattice.iter().map(|v| -v).collect(),
                coroot: r.coroot.iter().map(|v| -v).collect(),
                simple_coords: r.simple_coords.iter().map(|v| -v).collect(),
                positive: false,
            })
            .collect();
        let n_positive = positives.len();
        let roots: Vec<Root> = positives.into_iter().chain(negatives).collect();
        let root_lookup: HashMap<Vec<i64>, usize> =
            roots.iter().enumerate().map(|(i, r)| (r.lattice.clone(), i)).collect();

        // simple reflections on lattice coordinates
        let mut simple_reflections = Vec::new();
        for i in 0..rank {
            let mut a = vec![0i64; rank * rank];
            let alpha = &roots[i];
            debug_assert_eq!(alpha.simple_coords, {
                let mut e = vec![0; rank];
                e[i] = 1;
                e
            });
            for j in 0..rank {
                let mut col = vec![0i64; rank];
                col[j] = 1;
                let p = alpha.pair(&col);
                for k in 0..rank {
                    a[k * rank + j] = i64::from(k == j) - p * alpha.lattice[k];
                }
            }
            simple_reflections.push(LatMat { n: rank, a });
        }

        let weights_in_lattice = (0..rank)
            .map(|j| {
                let mut e = vec![0i64; rank];
                e[j] = 1;
                to_lattice(&e).ok()
            })
            .collect();

        Ok(RootDatum {
            components: components.to_vec(),
            rank,
            lattice,
            cartan,
            basis,
            roots,
            n_positive,
            root_lookup,
            simple_reflections,
            weights_in_lattice,
        })
    }

    /// Parse "G2", "B3", "A1+C1" plus a lattice kind.
    pub fn parse(type_str: &str, lattice: LatticeKind) -> Result<RootDatum> {
        let mut components = Vec::new();
        for part in type_str.split('+') {
            let part = part.trim();
            let (ty, rank) = part.split_at(1);
            let ty = match ty {
                "A" => DynkinType::A,
                "B" => DynkinType::B,
                "C" => DynkinType::C,
                "D" => DynkinType::D,
                "E" => DynkinType::E,
                "F" => DynkinType::F,
                "G" => DynkinType::G,
                _ => {
                    return Err(Error::UnknownType { detail: format!("bad type letter in {part}") })
                }
            };
            let rank: usize = rank.parse().map_err(|_| Error::UnknownType {
                detail: format!("bad rank in {part}"),
            })?;
            components.push((ty, rank));
        }
        Self::build(&components, lattice)
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, index: usize) -> &Root {
        &self.roots[index]
    }

    pub fn num_positive(&self) -> usize {
        self.n_positive
    }

    /// Index of the opposite root.
    pub fn negate_root(&self, index: usize) -> usize {
        if index < self.n_positive {
            index + self.n_positive
        } else {
            index - self.n_positive
        }
    }

    pub fn root_index(&self, lattice_coords: &[i64]) -> Option<usize> {
        self.root_lookup.get(lattice_coords).copied()
    }

    pub fn simple_reflection(&self, i: usize) -> &LatMat {
        &self.simple_reflections[i]
    }

    /// Matrix of the reflection along any root.
    pub fn reflection_action(&self, root_index: usize) -> Result<LatMat> {
        if root_index >= self.roots.len() {
            return Err(Error::NotARoot { vector: format!("index {root_index}") });
        }
        let alpha = &self.roots[root_index];
        let n = self.rank;
        let mut a = vec![0i64; n * n];
        for j in 0..n {
            let mut col = vec![0i64; n];
            col[j] = 1;
            let p = alpha.pair(&col);
            for k in 0..n {
                a[k * n + j] = i64::from(k == j) - p * alpha.lattice[k];
            }
        }
        Ok(LatMat { n, a })
    }

    /// Lattice basis in weight coordinates (columns are basis vectors).
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rank, self.rank, |i, j| BigInt::from(self.basis[i][j]))
    }

    pub fn cartan_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rank, self.rank, |i, j| BigInt::from(self.cartan[i][j]))
    }

    /// Order of s_i s_j in the Weyl group.
    pub fn braid_order(&self, i: usize, j: usize) -> usize {
        match self.cartan[i][j] * self.cartan[j][i] {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            other => panic!("impossible Cartan product {other}"),
        }
    }

    pub fn fundamental_weight_in_lattice(&self, j: usize) -> Option<&Vec<i64>> {
        self.weights_in_lattice[j].as_ref()
    }

    /// Largest |coroot(basis vector)| over all roots: bounds the formal
    /// multiples needed by the operator layer.
    pub fn max_pairing(&self) -> i64 {
        let mut best = 0;
        for r in &self.roots {
            for j in 0..self.rank {
                best = best.max(r.coroot[j].abs());
            }
        }
        best
    }

    pub fn max_root_coordinate(&self) -> i64 {
        self.roots
            .iter()
            .flat_map(|r| r.lattice.iter())
            .map(|v| v.abs())
            .max()
            .unwrap_or(1)
    }

    pub fn roots_to_json(&self) -> serde_json::Value {
        let roots: Vec<serde_json::Value> = self
            .roots
            .iter()
            .enumerate()
            .map(|(i, r)| {
                serde_json::json!({
                    "index": i,
                    "lattice": r.lattice,
                    "coroot": r.coroot,
                    "simple_coords": r.simple_coords,
                    "positive": r.positive,
                })
            })
            .collect();
        serde_json::json!(roots)
    }
}

fn big_to_i64(b: &BigInt) -> i64 {
    i64::try_from(b).expect("lattice coordinate fits i64")
}

/// Weyl group data: elements as matrices, lengths, canonical words,
/// Bruhat order, and multiplication tables.
#[derive(Debug)]
pub struct WeylGroup {
    pub rank: usize,
    elements: Vec<WeylElement>,
    lookup: HashMap<LatMat, usize>,
    /// left_mul[w][i] = s_i * w
    left_mul: Vec<Vec<usize>>,
    /// right_mul[w][i] = w * s_i
    right_mul: Vec<Vec<usize>>,
    bruhat: Vec<bool>,
    longest: usize,
}

#[derive(Debug, Clone)]
pub struct WeylElement {
    pub matrix: LatMat,
    pub length: u32,
    pub word: Vec<usize>,
    pub inverse: usize,
}

pub const DEFAULT_WEYL_CAP: usize = 1200;

impl WeylGroup {
    pub fn enumerate(datum: &RootDatum, cap: usize) -> Result<WeylGroup> {
        let rank = datum.rank;
        let gens: Vec<LatMat> = (0..rank).map(|i| datum.simple_reflection(i).clone()).collect();

        // breadth-first closure of the simple reflections
        let mut mats = vec![LatMat::identity(rank)];
        let mut lengths = vec![0u32];
        let mut lookup: HashMap<LatMat, usize> = HashMap::new();
        lookup.insert(mats[0].clone(), 0);
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &w in &frontier {
                for g in &gens {
                    let m = g.mul(&mats[w]);
                    if !lookup.contains_key(&m) {
                        if mats.len() >= cap {
                            return Err(Error::GroupTooLarge { cap });
                        }
                        lookup.insert(m.clone(), mats.len());
                        lengths.push(lengths[w] + 1);
                        next.push(mats.len());
                        mats.push(m);
                    }
                }
            }
            frontier = next;
        }

        let size = mats.len();
        let left: Vec<Vec<usize>> = (0..size)
            .map(|w| gens.iter().map(|g| lookup[&g.mul(&mats[w])]).collect())
            .collect();

        // canonical reduced word: repeatedly strip the smallest left
        // descent
        let mut words: Vec<Vec<usize>> = vec![Vec::new(); size];
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by_key(|&w| lengths[w]);
        for &w in &order {
            if lengths[w] == 0 {
                continue;
            }
            let i = (0..rank)
                .find(|&i| lengths[left[w][i]] < lengths[w])
                .expect("every nontrivial element has a descent");
            let mut word = vec![i];
            word.extend_from_slice(&words[left[w][i]]);
            words[w] = word;
        }

        // deterministic order: length, then canonical word
        let mut perm: Vec<usize> = (0..size).collect();
        perm.sort_by(|&a, &b| (lengths[a], &words[a]).cmp(&(lengths[b], &words[b])));
        let mut new_id = vec![0usize; size];
        for (new, &old) in perm.iter().enumerate() {
            new_id[old] = new;
        }

        let mut elements: Vec<WeylElement> = perm
            .iter()
            .map(|&old| WeylElement {
                matrix: mats[old].clone(),
                length: lengths[old],
                word: words[old].clone(),
                inverse: 0,
            })
            .collect();
        let lookup: HashMap<LatMat, usize> =
            elements.iter().enumerate().map(|(i, e)| (e.matrix.clone(), i)).collect();
        let left_mul: Vec<Vec<usize>> = elements
            .iter()
            .map(|e| gens.iter().map(|g| lookup[&g.mul(&e.matrix)]).collect())
            .collect();
        let right_mul: Vec<Vec<usize>> = elements
            .iter()
            .map(|e| gens.iter().map(|g| lookup[&e.matrix.mul(g)]).collect())
            .collect();
        for i in 0..size {
            let mut inv = 0usize;
            for &g in elements[i].word.iter().rev() {
                inv = right_mul[inv][g];
            }
            elements[i].inverse = inv;
        }
        let longest = size - 1;
        assert!(
            elements[longest].length as usize == datum.num_positive(),
            "length of the longest element must be the number of positive roots"
        );

        let mut group = WeylGroup {
            rank,
            elements,
            lookup,
            left_mul,
            right_mul,
            bruhat: Vec::new(),
            longest,
        };
        group.bruhat = group.build_bruhat();
        Ok(group)
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn longest(&self) -> usize {
        self.longest
    }

    pub fn element(&self, w: usize) -> &WeylElement {
        &self.elements[w]
    }

    pub fn length(&self, w: usize) -> u32 {
        self.elements[w].length
    }

    pub fn word(&self, w: usize) -> &[usize] {
        &self.elements[w].word
    }

    pub fn inverse(&self, w: usize) -> usize {
        self.elements[w].inverse
    }

    pub fn left_descend(&self, w: usize, i: usize) -> usize {
        self.left_mul[w][i]
    }

    pub fn right_multiply(&self, w: usize, i: usize) -> usize {
        self.right_mul[w][i]
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        let mut out = a;
        for &i in self.elements[b].word.iter().to_owned() {
            out = self.right_mul[out][i];
        }
        out
    }

    pub fn element_of_matrix(&self, m: &LatMat) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    pub fn word_to_element(&self, word: &[usize]) -> usize {
        let mut w = 0;
        for &i in word {
            w = self.right_mul[w][i];
        }
        w
    }

    pub fn is_reduced(&self, word: &[usize]) -> bool {
        self.length(self.word_to_element(word)) as usize == word.len()
    }

    /// Bruhat order by the descent recursion, cross-checked elsewhere
    /// against the subword characterization.
    fn build_bruhat(&self) -> Vec<bool> {
        let size = self.size();
        let mut table = vec![false; size * size];
        // elements are sorted by length, so v's recursion targets are
        // already complete
        for v in 0..size {
            if self.length(v) == 0 {
                table[v] = true; // only e <= e
                continue;
            }
            let i = self.elements[v].word[0];
            let sv = self.left_mul[v][i];
            for u in 0..size {
                let su = self.left_mul[u][i];
                let le = if self.length(su) < self.length(u) {
                    table[su * size + sv]
                } else {
                    table[u * size + sv]
                };
                table[u * size + v] = le;
            }
            // v <= v always; the recursion already gives it, but make the
            // invariant explicit
            debug_assert!(table[v * size + v]);
        }
        table
    }

    pub fn bruhat_leq(&self, u: usize, v: usize) -> bool {
        self.bruhat[u * self.size() + v]
    }

    /// Positive roots sent to negatives by the inverse: v(neg) ∩ pos,
    /// returned as indices into the datum's root list.  |result| = l(v).
    pub fn inversion_set(&self, datum: &RootDatum, v: usize) -> Vec<usize> {
        let vinv = &self.elements[self.inverse(v)].matrix;
        let mut out = Vec::new();
        for p in 0..datum.num_positive() {
            let img = vinv.apply(&datum.root(p).lattice);
            let idx = datum.root_index(&img).expect("roots are permuted by W");
            if !datum.root(idx).positive {
                out.push(p);
            }
        }
        assert_eq!(out.len(), self.length(v) as usize);
        out
    }

    /// Image root index under w.
    pub fn act_on_root(&self, datum: &RootDatum, w: usize, root_index: usize) -> usize {
        let img = self.elements[w].matrix.apply(&datum.root(root_index).lattice);
        datum.root_index(&img).expect("roots are permuted by W")
    }

    pub fn elements_to_json(&self) -> serde_json::Value {
        let list: Vec<serde_json::Value> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| {
                serde_json::json!({
                    "index": i,
                    "length": e.length,
                    "word": e.word.iter().map(|&g| g + 1).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!(list)
    }
}

/// Default reduced words: the canonical word of every element.
pub fn canonical_words(weyl: &WeylGroup) -> Vec<Vec<usize>> {
    (0..weyl.size()).map(|w| weyl.word(w).to_vec()).collect()
}

/// Validate an override word map: one reduced word per element, covering
/// the group exactly.
pub fn validate_words(weyl: &WeylGroup, words: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    if words.len() != weyl.size() {
        return Err(Error::BadWord { word: vec![words.len()] });
    }
    let mut by_element: Vec<Option<Vec<usize>>> = vec![None; weyl.size()];
    for word in words {
        let w = weyl.word_to_element(word);
        if !weyl.is_reduced(word) || by_element[w].is_some() {
            return Err(Error::BadWord { word: word.clone() });
        }
        by_element[w] = Some(word.clone());
    }
    Ok(by_element.into_iter().map(|w| w.unwrap()).collect())
}
