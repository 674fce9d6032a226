//! Δ–Y reduction of straight and bent linear 2-trees in exact arithmetic.
//!
//! A reduction walks a *frontier*: the positional vertex sequence of a
//! straight chain, read from one end. Each step replaces the leading triangle
//! `(a, b, c)` of the frontier by a star centred at a new node `*`, then
//! either merges `b` in series into the next frontier vertex `d` or, when no
//! such vertex exists, leaves it for the final clean-up. The star branch at
//! `a` (the tail) never takes part in another transform.
//!
//! The bent tree is reduced from both ends. With the bend at `k`, the left
//! frontier is `1, 2, …, k+1` and the right frontier is
//! `n, n-1, …, k+3, k+2, k, k+1`; both are unit straight chains. After
//! `k - 2` left and `n - k - 1` right transforms the circuit is a pair of
//! parallel branches between two tails.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{validate_bent, WeightedGraph};
use crate::numeric::{parallel_combine, series_combine, Rational};

/// The Δ–Y transform: returns `(R1, R2, R3)` for a triangle with sides
/// `R_A = r(N2, N3)`, `R_B = r(N1, N3)`, `R_C = r(N1, N2)`.
pub fn delta_y(ra: &Rational, rb: &Rational, rc: &Rational) -> Result<(Rational, Rational, Rational)> {
    for r in [ra, rb, rc] {
        if !r.is_positive() {
            return Err(Error::NonPositiveResistance(r.to_string()));
        }
    }
    let total = ra + rb + rc;
    Ok((
        &(rb * rc) / &total,
        &(ra * rc) / &total,
        &(ra * rb) / &total,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A node of the evolving circuit: an original vertex or the centre of the
/// `step`-th star on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Vertex(usize),
    Star(Side, usize),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Vertex(v) => write!(f, "{v}"),
            Node::Star(Side::Left, j) => write!(f, "*L{j}"),
            Node::Star(Side::Right, j) => write!(f, "*R{j}"),
        }
    }
}

impl Serialize for Node {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Outputs of the `j`-th transform on one side: tail `t = R3`, the branch
/// `s = R2` that is merged next, and the branch `b = R1` toward the far
/// triangle vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailTriple {
    pub j: usize,
    pub t: Rational,
    pub s: Rational,
    pub b: Rational,
}

/// One entry of the step log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepRecord {
    DeltaY {
        side: Side,
        step: usize,
        /// `(j, j+1, j+2)` in the frontier's positional order.
        triangle: [Node; 3],
        ra: Rational,
        rb: Rational,
        rc: Rational,
        r1: Rational,
        r2: Rational,
        r3: Rational,
        star: Node,
    },
    /// A degree-2 node removed by adding its two branches in series; when
    /// `parallel_with` is set, the sum was then combined in parallel with an
    /// existing branch between the same endpoints.
    Series {
        removed: Node,
        ends: [Node; 2],
        left: Rational,
        right: Rational,
        parallel_with: Option<Rational>,
        result: Rational,
    },
    /// A dangling non-terminal node, which carries no current.
    Prune { removed: Node, branch: Rational },
}

/// The circuit during a reduction, with tail bookkeeping and the step log.
#[derive(Debug, Clone)]
pub struct ReductionState {
    branches: BTreeMap<(Node, Node), Rational>,
    terminals: (Node, Node),
    left_frontier: Vec<Node>,
    right_frontier: Vec<Node>,
    left_tails: Vec<TailTriple>,
    right_tails: Vec<TailTriple>,
    log: Vec<StepRecord>,
}

fn key(a: Node, b: Node) -> (Node, Node) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl ReductionState {
    fn from_graph(g: &WeightedGraph, left: Vec<Node>, right: Vec<Node>) -> Result<Self> {
        let mut branches = BTreeMap::new();
        for (i, j, w) in g.edges() {
            branches.insert(key(Node::Vertex(i), Node::Vertex(j)), w.recip()?);
        }
        Ok(Self {
            branches,
            terminals: (Node::Vertex(1), Node::Vertex(g.n())),
            left_frontier: left,
            right_frontier: right,
            left_tails: Vec::new(),
            right_tails: Vec::new(),
            log: Vec::new(),
        })
    }

    pub fn left_tails(&self) -> &[TailTriple] {
        &self.left_tails
    }

    pub fn right_tails(&self) -> &[TailTriple] {
        &self.right_tails
    }

    pub fn log(&self) -> &[StepRecord] {
        &self.log
    }

    pub fn terminals(&self) -> (Node, Node) {
        self.terminals
    }

    /// Resistance of the branch between two nodes, if present.
    pub fn branch(&self, a: Node, b: Node) -> Option<&Rational> {
        self.branches.get(&key(a, b))
    }

    pub fn branches(&self) -> impl Iterator<Item = (Node, Node, &Rational)> {
        self.branches.iter().map(|(&(a, b), r)| (a, b, r))
    }

    fn take(&mut self, a: Node, b: Node) -> Result<Rational> {
        self.branches.remove(&key(a, b)).ok_or_else(|| {
            Error::UnsupportedTopology(format!("expected a branch between {a} and {b}"))
        })
    }

    fn neighbours(&self, v: Node) -> Vec<(Node, Rational)> {
        self.branches
            .iter()
            .filter_map(|(&(a, b), r)| {
                if a == v {
                    Some((b, r.clone()))
                } else if b == v {
                    Some((a, r.clone()))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Translates the circuit into a weighted graph (conductance = 1/r) whose
    /// vertices are the circuit nodes in sorted order. Returns the graph and
    /// the 1-based labels of the two terminals.
    pub fn to_weighted_graph(&self) -> Result<(WeightedGraph, usize, usize)> {
        let mut nodes: Vec<Node> = self
            .branches
            .keys()
            .flat_map(|&(a, b)| [a, b])
            .chain([self.terminals.0, self.terminals.1])
            .collect();
        nodes.sort();
        nodes.dedup();
        let label = |v: Node| nodes.binary_search(&v).unwrap() + 1;
        let mut g = WeightedGraph::new(nodes.len());
        for (&(a, b), r) in &self.branches {
            g.add_edge(label(a), label(b), r.recip()?)?;
        }
        Ok((g, label(self.terminals.0), label(self.terminals.1)))
    }

    /// Transforms the leading triangle of one frontier. Returns `false` when
    /// the frontier has fewer than three nodes.
    fn transform(&mut self, side: Side) -> Result<bool> {
        let frontier = match side {
            Side::Left => &self.left_frontier,
            Side::Right => &self.right_frontier,
        };
        if frontier.len() < 3 {
            return Ok(false);
        }
        let (a, b, c) = (frontier[0], frontier[1], frontier[2]);
        let d = frontier.get(3).copied();
        let step = match side {
            Side::Left => self.left_tails.len() + 1,
            Side::Right => self.right_tails.len() + 1,
        };
        let star = Node::Star(side, step);

        let ra = self.take(a, b)?;
        let rb = self.take(a, c)?;
        let rc = self.take(b, c)?;
        let (r1, r2, r3) = delta_y(&ra, &rb, &rc)?;
        self.branches.insert(key(a, star), r3.clone());
        self.branches.insert(key(b, star), r2.clone());
        self.branches.insert(key(c, star), r1.clone());
        self.log.push(StepRecord::DeltaY {
            side,
            step,
            triangle: [a, b, c],
            ra,
            rb,
            rc,
            r1: r1.clone(),
            r2: r2.clone(),
            r3: r3.clone(),
            star,
        });
        let triple = TailTriple {
            j: step,
            t: r3,
            s: r2,
            b: r1,
        };
        match side {
            Side::Left => self.left_tails.push(triple),
            Side::Right => self.right_tails.push(triple),
        }

        // b now hangs off the star; fold it into d when the chain continues.
        if let Some(d) = d {
            if self.neighbours(b).len() == 2 && self.branch(b, d).is_some() {
                self.eliminate_series(b)?;
            }
        }

        let frontier = match side {
            Side::Left => &mut self.left_frontier,
            Side::Right => &mut self.right_frontier,
        };
        // [a, b, c, d, ...] -> [*, c, d, ...]
        frontier.drain(..2);
        frontier.insert(0, star);
        Ok(true)
    }

    /// Removes a degree-2 node, replacing its two branches by their series
    /// sum (combined in parallel with any existing branch between the ends).
    fn eliminate_series(&mut self, v: Node) -> Result<()> {
        let nbrs = self.neighbours(v);
        let [(x, rx), (y, ry)] = <[_; 2]>::try_from(nbrs).map_err(|nbrs: Vec<_>| {
            Error::UnsupportedTopology(format!("{v} has degree {}, expected 2", nbrs.len()))
        })?;
        self.take(v, x)?;
        self.take(v, y)?;
        let sum = series_combine(&rx, &ry);
        let existing = self.branches.remove(&key(x, y));
        let result = match &existing {
            Some(p) => parallel_combine(p, &sum)?,
            None => sum,
        };
        self.branches.insert(key(x, y), result.clone());
        self.log.push(StepRecord::Series {
            removed: v,
            ends: [x, y],
            left: rx,
            right: ry,
            parallel_with: existing,
            result,
        });
        Ok(())
    }

    fn prune(&mut self, v: Node) -> Result<()> {
        let nbrs = self.neighbours(v);
        let [(x, r)] = <[_; 1]>::try_from(nbrs).map_err(|_| {
            Error::UnsupportedTopology(format!("{v} is not a dangling node"))
        })?;
        self.take(v, x)?;
        self.log.push(StepRecord::Prune { removed: v, branch: r });
        Ok(())
    }

    /// Total resistance of the circuit once it has been reduced to a simple
    /// path between the terminals.
    fn path_resistance(&self) -> Result<Rational> {
        let mut degree: BTreeMap<Node, usize> = BTreeMap::new();
        for &(a, b) in self.branches.keys() {
            *degree.entry(a).or_default() += 1;
            *degree.entry(b).or_default() += 1;
        }
        let (s, t) = self.terminals;
        let is_path = degree.len() == self.branches.len() + 1
            && degree
                .iter()
                .all(|(&v, &d)| d == if v == s || v == t { 1 } else { 2 });
        if !is_path {
            return Err(Error::UnsupportedTopology(
                "reduced circuit is not a terminal-to-terminal path".into(),
            ));
        }
        Ok(self.branches.values().sum())
    }
}

/// Drives a reduction one step at a time. After every step the observer sees
/// the current state; the audited entry points use it to re-solve the circuit.
struct Driver<F: FnMut(&ReductionState) -> Result<()>> {
    state: ReductionState,
    observer: F,
}

impl<F: FnMut(&ReductionState) -> Result<()>> Driver<F> {
    fn new(state: ReductionState, mut observer: F) -> Result<Self> {
        observer(&state)?;
        Ok(Self { state, observer })
    }

    fn transform(&mut self, side: Side) -> Result<()> {
        if !self.state.transform(side)? {
            return Err(Error::UnsupportedTopology(format!(
                "{side:?} frontier exhausted"
            )));
        }
        (self.observer)(&self.state)
    }

    fn eliminate_series(&mut self, v: Node) -> Result<()> {
        self.state.eliminate_series(v)?;
        (self.observer)(&self.state)
    }

    fn prune(&mut self, v: Node) -> Result<()> {
        self.state.prune(v)?;
        (self.observer)(&self.state)
    }
}

/// Result of reducing a bent 2-tree.
#[derive(Debug, Clone)]
pub struct BentReduction {
    /// Effective resistance between vertices 1 and n.
    pub r: Rational,
    /// Parallel pair left after all transforms: `(b_p + s_ℓ, s_p + b_ℓ + 1)`.
    pub parallel_pair: (Rational, Rational),
    pub state: ReductionState,
}

/// Reduces the unit straight 2-tree with `steps` triangles and returns the
/// tail triple of every transform. Triple `j` depends only on `j`.
pub fn reduce_straight_chain(steps: usize) -> Result<Vec<TailTriple>> {
    if steps == 0 {
        return Err(Error::InvalidParams("need at least one transform".into()));
    }
    let (_, state) = run_straight(steps + 2, |_| Ok(()))?;
    Ok(state.left_tails)
}

/// Effective resistance between the end vertices of the straight 2-tree on
/// `n` vertices, by Δ–Y reduction.
pub fn reduce_straight(n: usize) -> Result<Rational> {
    run_straight(n, |_| Ok(())).map(|(r, _)| r)
}

/// [`reduce_straight`] that also returns the final state with its step log.
pub fn reduce_straight_logged(n: usize) -> Result<(Rational, ReductionState)> {
    run_straight(n, |_| Ok(()))
}

/// [`reduce_straight`] with a callback after every individual step.
pub fn reduce_straight_observed<F>(n: usize, observer: F) -> Result<(Rational, ReductionState)>
where
    F: FnMut(&ReductionState) -> Result<()>,
{
    run_straight(n, observer)
}

fn run_straight<F>(n: usize, observer: F) -> Result<(Rational, ReductionState)>
where
    F: FnMut(&ReductionState) -> Result<()>,
{
    let g = crate::graph::straight_2tree(n)?;
    let left = (1..=n).map(Node::Vertex).collect();
    let state = ReductionState::from_graph(&g, left, Vec::new())?;
    let mut driver = Driver::new(state, observer)?;
    for _ in 0..n - 3 {
        driver.transform(Side::Left)?;
    }
    // The last triangle has no successor to merge into; its middle vertex
    // is left dangling off the final star.
    let dangling = driver.state.left_frontier[1];
    driver.transform(Side::Left)?;
    driver.prune(dangling)?;
    let r = driver.state.path_resistance()?;

    // Path of tails then b_m into vertex n.
    let tails = &driver.state.left_tails;
    let expected: Rational =
        tails.iter().map(|t| &t.t).sum::<Rational>() + &tails.last().expect("n >= 3").b;
    debug_assert_eq!(r, expected);
    Ok((r, driver.state))
}

/// Effective resistance between vertices 1 and n of the bent 2-tree with the
/// bend at `k`, by Δ–Y reduction.
pub fn reduce_bent(n: usize, k: usize) -> Result<BentReduction> {
    run_bent(n, k, |_| Ok(()))
}

/// [`reduce_bent`] with a callback after every individual step.
pub fn reduce_bent_observed<F>(n: usize, k: usize, observer: F) -> Result<BentReduction>
where
    F: FnMut(&ReductionState) -> Result<()>,
{
    run_bent(n, k, observer)
}

fn run_bent<F>(n: usize, k: usize, observer: F) -> Result<BentReduction>
where
    F: FnMut(&ReductionState) -> Result<()>,
{
    validate_bent(n, k)?;
    let g = crate::graph::bent_2tree(n, k)?;
    let left: Vec<Node> = (1..=k + 1).map(Node::Vertex).collect();
    let right: Vec<Node> = (k + 2..=n)
        .rev()
        .chain([k, k + 1])
        .map(Node::Vertex)
        .collect();
    let state = ReductionState::from_graph(&g, left, right)?;
    let mut driver = Driver::new(state, observer)?;

    let p = k - 2;
    let ell = n - k - 1;
    for _ in 0..p {
        driver.transform(Side::Left)?;
    }
    for _ in 0..ell {
        driver.transform(Side::Right)?;
    }
    // k and k+1 now each sit between the two outermost stars.
    driver.eliminate_series(Node::Vertex(k))?;
    driver.eliminate_series(Node::Vertex(k + 1))?;
    let collapsed = driver.state.path_resistance()?;

    let state = driver.state;
    let lp = &state.left_tails[p - 1];
    let rl = &state.right_tails[ell - 1];
    let one = Rational::one();
    let parallel_pair = (&lp.b + &rl.s, &lp.s + &rl.b + &one);
    let tails: Rational = state
        .left_tails
        .iter()
        .chain(&state.right_tails)
        .map(|t| &t.t)
        .sum();
    let r = parallel_combine(&parallel_pair.0, &parallel_pair.1)? + tails;
    if r != collapsed {
        return Err(Error::UnsupportedTopology(format!(
            "final circuit ({collapsed}) disagrees with parallel pair plus tails ({r})"
        )));
    }
    Ok(BentReduction {
        r,
        parallel_pair,
        state,
    })
}
