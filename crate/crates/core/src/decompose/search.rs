//! Exhaustive search for unit-distance preserving maps of GF(p)^2.
//!
//! Variables are the p^2 points, values their images. The only constraint
//! is that unit edges map to unit edges; it is propagated by arc
//! consistency on bitset domains. Variables are chosen most-constrained
//! first (singletons count as settled), ties broken by breadth-first rank
//! from the origin; values are tried in index order. The first variable
//! (the origin) is split across workers, each subtree getting an equal
//! share of the node budget, so the result does not depend on the number
//! of workers.

use std::collections::VecDeque;

use super::decompose;
use crate::error::Result;
use crate::exec;
use crate::fields::Field;
use crate::maps::{self, MapTable};
use crate::sampling::{self, Domain};

#[derive(Clone, Debug)]
pub struct Anomaly {
    pub table: MapTable,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub p: u64,
    pub found: usize,
    /// `p^2 * |O(2, p)|`: translations times orthogonal matrices, the only
    /// homomorphism of a prime field being the identity.
    pub expected: usize,
    /// False when some subtree ran out of nodes.
    pub complete: bool,
    pub nodes: u64,
    pub anomalies: Vec<Anomaly>,
}

impl Census {
    /// Complete, no anomalies, and exactly the expected count.
    pub fn confirms(&self) -> bool {
        self.complete && self.anomalies.is_empty() && self.found == self.expected
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub maps: Vec<MapTable>,
    pub census: Census,
}

struct Graph {
    n: usize,
    words: usize,
    neighbors: Vec<Vec<u32>>,
    /// Bitset of the neighbours of each point.
    masks: Vec<u64>,
    /// Variables in breadth-first order from the origin.
    bfs: Vec<usize>,
}

impl Graph {
    fn new(k: &Field) -> Result<Graph> {
        let p = k.modulus().expect("prime field") as usize;
        let n = p * p;
        let words = n.div_ceil(64);
        let circle: Vec<(usize, usize)> = maps::unit_circle(k)?
            .iter()
            .map(|u| {
                (
                    u.x1().residue().unwrap() as usize,
                    u.x2().residue().unwrap() as usize,
                )
            })
            .collect();
        let mut neighbors = vec![Vec::new(); n];
        let mut masks = vec![0u64; n * words];
        for x in 0..n {
            let (a, b) = (x / p, x % p);
            for &(u1, u2) in &circle {
                let y = ((a + u1) % p) * p + (b + u2) % p;
                neighbors[x].push(y as u32);
                masks[x * words + y / 64] |= 1 << (y % 64);
            }
        }
        let mut seen = vec![false; n];
        let mut bfs = Vec::with_capacity(n);
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            bfs.push(x);
            for &y in &neighbors[x] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    queue.push_back(y as usize);
                }
            }
        }
        // The unit-distance graph is connected, but keep every point.
        bfs.extend((0..n).filter(|&x| !seen[x]));
        Ok(Graph {
            n,
            words,
            neighbors,
            masks,
            bfs,
        })
    }
}

struct Search<'g> {
    g: &'g Graph,
    domains: Vec<u64>,
    assigned: Vec<bool>,
    /// Saved domains: the variable, then its old words in `trail_words`.
    trail: Vec<u32>,
    trail_words: Vec<u64>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
    solutions: Vec<Vec<u32>>,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, budget: u64) -> Self {
        let mut domains = vec![u64::MAX; g.n * g.words];
        let tail = g.n % 64;
        if tail != 0 {
            for x in 0..g.n {
                domains[x * g.words + g.words - 1] = (1u64 << tail) - 1;
            }
        }
        Search {
            g,
            domains,
            assigned: vec![false; g.n],
            trail: Vec::new(),
            trail_words: Vec::new(),
            queue: VecDeque::new(),
            queued: vec![false; g.n],
            nodes: 0,
            budget,
            exhausted: false,
            solutions: Vec::new(),
        }
    }

    fn domain(&self, x: usize) -> &[u64] {
        &self.domains[x * self.g.words..(x + 1) * self.g.words]
    }

    fn size(&self, x: usize) -> u32 {
        self.domain(x).iter().map(|w| w.count_ones()).sum()
    }

    fn pick(&self) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        for &x in &self.g.bfs {
            if self.assigned[x] {
                continue;
            }
            let s = self.size(x);
            // A singleton is settled: arc consistency already checked it.
            if s == 1 {
                continue;
            }
            if best.is_none_or(|(b, _)| s < b) {
                best = Some((s, x));
            }
        }
        best.map(|(_, x)| x)
    }

    fn save(&mut self, y: usize) {
        let w = self.g.words;
        self.trail.push(y as u32);
        self.trail_words
            .extend_from_slice(&self.domains[y * w..(y + 1) * w]);
    }

    /// Union of the neighbourhoods of the values left for `y`.
    fn support(&self, y: usize, out: &mut [u64]) {
        let w = self.g.words;
        out.fill(0);
        for (j, &word) in self.domain(y).iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let v = j * 64 + bits.trailing_zeros() as usize;
                for (o, m) in out.iter_mut().zip(&self.g.masks[v * w..(v + 1) * w]) {
                    *o |= m;
                }
                bits &= bits - 1;
            }
        }
    }

    /// Assigns `x -> v` and restores arc consistency; false on a wipe-out.
    fn assign(&mut self, x: usize, v: usize) -> bool {
        let w = self.g.words;
        self.assigned[x] = true;
        self.save(x);
        let d = &mut self.domains[x * w..(x + 1) * w];
        d.fill(0);
        d[v / 64] = 1 << (v % 64);
        self.queue.clear();
        self.queued.fill(false);
        self.queue.push_back(x);
        self.queued[x] = true;
        let mut sup = vec![0u64; w];
        while let Some(y) = self.queue.pop_front() {
            self.queued[y] = false;
            self.support(y, &mut sup);
            for &z in &self.g.neighbors[y] {
                let z = z as usize;
                let cur = self.domain(z);
                if cur.iter().zip(&sup).all(|(c, s)| c & !s == 0) {
                    continue;
                }
                self.save(z);
                let mut empty = true;
                for (d, s) in self.domains[z * w..(z + 1) * w].iter_mut().zip(&sup) {
                    *d &= s;
                    empty &= *d == 0;
                }
                if empty {
                    return false;
                }
                if !self.queued[z] {
                    self.queued[z] = true;
                    self.queue.push_back(z);
                }
            }
        }
        true
    }

    fn undo(&mut self, x: usize, mark: usize) {
        let w = self.g.words;
        while self.trail.len() > mark {
            let y = self.trail.pop().expect("trail entry") as usize;
            let at = self.trail_words.len() - w;
            self.domains[y * w..(y + 1) * w].copy_from_slice(&self.trail_words[at..]);
            self.trail_words.truncate(at);
        }
        self.assigned[x] = false;
    }

    fn values(&self, x: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (j, &word) in self.domain(x).iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                out.push(j * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }

    fn solution(&self) -> Vec<u32> {
        (0..self.g.n).map(|x| self.values(x)[0] as u32).collect()
    }

    fn run(&mut self) {
        let Some(x) = self.pick() else {
            self.solutions.push(self.solution());
            return;
        };
        for v in self.values(x) {
            if self.nodes >= self.budget {
                self.exhausted = true;
                return;
            }
            self.nodes += 1;
            let mark = self.trail.len();
            if self.assign(x, v) {
                self.run();
            }
            self.undo(x, mark);
            if self.exhausted {
                return;
            }
        }
    }
}

/// Every unit-distance preserving map of GF(p)^2 within `node_budget`
/// search nodes, each fed through [`decompose`]; maps that fail are
/// reported as anomalies, never dropped.
pub fn search_unit_preservers(p: u64, node_budget: u64) -> Result<SearchOutcome> {
    let k = Field::prime(p)?;
    let g = Graph::new(&k)?;
    let root = g.bfs[0];
    let share = (node_budget / g.n as u64).max(1);
    let parts = exec::scan(g.n, |v| {
        let mut s = Search::new(&g, share);
        s.nodes = 1;
        if s.assign(root, v) {
            s.run();
        }
        Some((s.solutions, s.nodes, s.exhausted))
    });
    let mut tables = Vec::new();
    let mut nodes = 0;
    let mut complete = true;
    for (sols, n, exhausted) in parts {
        nodes += n;
        complete &= !exhausted;
        for images in sols {
            tables.push(MapTable::from_indices(&k, images)?);
        }
    }
    let anomalies: Vec<Anomaly> = exec::scan(tables.len(), |j| {
        decompose(&tables[j], Domain::Exhaustive)
            .err()
            .map(|e| Anomaly {
                table: tables[j].clone(),
                reason: e.to_string(),
            })
    });
    let expected = g.n * maps::enumerate_orthogonal_group(&k)?.len();
    debug_assert_eq!(sampling::all_points(&k)?.len(), g.n);
    Ok(SearchOutcome {
        census: Census {
            p,
            found: tables.len(),
            expected,
            complete,
            nodes,
            anomalies,
        },
        maps: tables,
    })
}
