//! Hyper-arc consistency via the value graph.
//!
//! The constraint is encoded as a bipartite graph joining variables to
//! their domain values. A maximum matching smaller than the variable count
//! proves infeasibility (Hall's condition fails); otherwise an edge
//! survives exactly when it belongs to *some* matching covering all
//! variables. Those edges are identified without enumerating matchings:
//! orient matched edges variable→value and unmatched edges value→variable,
//! then an unmatched edge is kept iff its endpoints share a strongly
//! connected component (it lies on an even alternating cycle) or its value
//! endpoint is reachable from a free value node (it lies on an even
//! alternating path from a free node). Everything else belongs to no
//! maximum matching and the corresponding domain value is deleted.
//!
//! Matching is phase-based layered augmentation (Hopcroft–Karp),
//! `O(√|X| · m)`; component search is an iterative Tarjan, `O(n + m)`.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{
    AllDifferentConstraint, Domain, DomainStore, FilterOutcome, Infeasible, InfeasibleCause,
    ModelError, Value, VariableId,
};

/// Bipartite variable–value graph of one constraint. Values are the
/// constraint's view values (offsets applied), deduplicated and sorted;
/// adjacency lists are ascending, so iteration order is deterministic.
#[derive(Debug, Clone)]
pub struct ValueGraph {
    vars: Vec<VariableId>,
    vals: Vec<Value>,
    /// Per variable position: indices into `vals`, ascending.
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

impl ValueGraph {
    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn val_count(&self) -> usize {
        self.vals.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vars(&self) -> &[VariableId] {
        &self.vars
    }

    pub fn values(&self) -> &[Value] {
        &self.vals
    }

    /// All edges as `(variable, view value)`, in (variable position,
    /// ascending value) order.
    pub fn edges(&self) -> Vec<(VariableId, Value)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (p, adj) in self.adj.iter().enumerate() {
            for &q in adj {
                out.push((self.vars[p], self.vals[q as usize]));
            }
        }
        out
    }
}

/// A matching in a [`ValueGraph`]: an edge set in which no two edges share
/// a node, stored as the partner of each side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    var_to_val: Vec<Option<u32>>,
    val_to_var: Vec<Option<u32>>,
    size: usize,
}

impl Matching {
    fn empty(nvars: usize, nvals: usize) -> Self {
        Matching {
            var_to_val: alloc::vec![None; nvars],
            val_to_var: alloc::vec![None; nvals],
            size: 0,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn covers_all_vars(&self) -> bool {
        self.var_to_val.iter().all(Option::is_some)
    }

    /// Matched edges as `(variable, view value)` pairs, by variable
    /// position.
    pub fn edges<'g>(&self, g: &'g ValueGraph) -> impl Iterator<Item = (VariableId, Value)> + 'g {
        let pairs: Vec<(usize, u32)> = self
            .var_to_val
            .iter()
            .enumerate()
            .filter_map(|(p, q)| q.map(|q| (p, q)))
            .collect();
        pairs
            .into_iter()
            .map(move |(p, q)| (g.vars[p], g.vals[q as usize]))
    }

    pub fn matched_value(&self, g: &ValueGraph, position: usize) -> Option<Value> {
        self.var_to_val[position].map(|q| g.vals[q as usize])
    }

    /// Matching from explicit `(variable, view value)` edges.
    ///
    /// Panics on edges absent from the graph or sharing endpoints; this
    /// is a test/oracle constructor, not a validation path.
    pub fn from_edges(g: &ValueGraph, edges: &[(VariableId, Value)]) -> Self {
        let mut m = Matching::empty(g.var_count(), g.val_count());
        for &(var, val) in edges {
            let p = g
                .vars
                .iter()
                .position(|&x| x == var)
                .expect("variable in graph");
            let q = g.vals.binary_search(&val).expect("value in graph") as u32;
            assert!(g.adj[p].contains(&q), "edge in graph");
            assert!(m.var_to_val[p].is_none(), "variable matched once");
            assert!(m.val_to_var[q as usize].is_none(), "value matched once");
            m.var_to_val[p] = Some(q);
            m.val_to_var[q as usize] = Some(p as u32);
            m.size += 1;
        }
        m
    }
}

/// Builds the value graph of `c` under `store`. Empty domains yield
/// isolated variable nodes; the matching stage reports them.
pub fn build_value_graph(c: &AllDifferentConstraint, store: &DomainStore) -> ValueGraph {
    let view = c.view_domains(store);
    graph_from_view(c.vars().to_vec(), &view)
}

fn graph_from_view(vars: Vec<VariableId>, view: &[Domain]) -> ValueGraph {
    let mut vals: Vec<Value> = Vec::with_capacity(view.iter().map(Domain::len).sum());
    for d in view {
        vals.extend(d.iter());
    }
    vals.sort_unstable();
    vals.dedup();

    let mut edge_count = 0;
    let adj: Vec<Vec<u32>> = view
        .iter()
        .map(|d| {
            edge_count += d.len();
            d.iter()
                .map(|v| vals.binary_search(&v).expect("value in union") as u32)
                .collect()
        })
        .collect();

    ValueGraph {
        vars,
        vals,
        adj,
        edge_count,
    }
}

/// Maximum-cardinality matching by layered augmentation. Deterministic:
/// free variables are processed in index order and adjacency ascending,
/// so a given graph always yields the same matching.
pub fn maximum_matching(g: &ValueGraph) -> Matching {
    let nvars = g.var_count();
    let nvals = g.val_count();
    let mut m = Matching::empty(nvars, nvals);

    // Greedy seed pass: cheap, and shortens the phase loop.
    for p in 0..nvars {
        for &q in &g.adj[p] {
            if m.val_to_var[q as usize].is_none() {
                m.var_to_val[p] = Some(q);
                m.val_to_var[q as usize] = Some(p as u32);
                m.size += 1;
                break;
            }
        }
    }

    const INF: u32 = u32::MAX;
    let mut dist: Vec<u32> = alloc::vec![INF; nvars];
    let mut queue: VecDeque<u32> = VecDeque::new();

    loop {
        // BFS phase: layer variables by alternating distance from the
        // free ones; stop layering once a free value is reachable.
        queue.clear();
        for (p, matched) in m.var_to_val.iter().enumerate() {
            if matched.is_none() {
                dist[p] = 0;
                queue.push_back(p as u32);
            } else {
                dist[p] = INF;
            }
        }
        let mut found = false;
        let mut frontier_limit = INF;
        while let Some(p) = queue.pop_front() {
            if dist[p as usize] >= frontier_limit {
                continue;
            }
            for &q in &g.adj[p as usize] {
                match m.val_to_var[q as usize] {
                    None => {
                        found = true;
                        frontier_limit = dist[p as usize] + 1;
                    }
                    Some(p2) => {
                        if dist[p2 as usize] == INF {
                            dist[p2 as usize] = dist[p as usize] + 1;
                            queue.push_back(p2);
                        }
                    }
                }
            }
        }
        if !found {
            break;
        }
        // Keep only layers on shortest augmenting paths.
        for d in dist.iter_mut() {
            if *d >= frontier_limit {
                *d = INF;
            }
        }
        // DFS phase: vertex-disjoint shortest augmenting paths.
        for p in 0..nvars {
            if m.var_to_val[p].is_none() && augment(g, &mut m, &mut dist, p as u32) {
                m.size += 1;
            }
        }
    }
    m
}

fn augment(g: &ValueGraph, m: &mut Matching, dist: &mut [u32], p: u32) -> bool {
    let d = dist[p as usize];
    dist[p as usize] = u32::MAX; // visited this phase
    for &q in &g.adj[p as usize] {
        match m.val_to_var[q as usize] {
            None => {
                m.var_to_val[p as usize] = Some(q);
                m.val_to_var[q as usize] = Some(p);
                return true;
            }
            Some(p2) => {
                if dist[p2 as usize] == d + 1 && augment(g, m, dist, p2) {
                    m.var_to_val[p as usize] = Some(q);
                    m.val_to_var[q as usize] = Some(p);
                    return true;
                }
            }
        }
    }
    false
}

/// Directed view for the Berge computation: node ids `0..nvars` are
/// variables, `nvars..nvars+nvals` are values. Matched edges point
/// variable→value, unmatched edges value→variable.
struct Oriented<'g> {
    g: &'g ValueGraph,
    m: &'g Matching,
    /// Reverse adjacency: for each value position, variable positions.
    radj: Vec<Vec<u32>>,
}

impl<'g> Oriented<'g> {
    fn new(g: &'g ValueGraph, m: &'g Matching) -> Self {
        let mut radj: Vec<Vec<u32>> = alloc::vec![Vec::new(); g.val_count()];
        for (p, adj) in g.adj.iter().enumerate() {
            for &q in adj {
                radj[q as usize].push(p as u32);
            }
        }
        Oriented { g, m, radj }
    }

    fn node_count(&self) -> usize {
        self.g.var_count() + self.g.val_count()
    }

    /// Successor enumeration by cursor, so DFS frames stay O(1).
    fn next_successor(&self, node: u32, cursor: &mut usize) -> Option<u32> {
        let nvars = self.g.var_count() as u32;
        if node < nvars {
            if *cursor == 0 {
                *cursor = 1;
                if let Some(q) = self.m.var_to_val[node as usize] {
                    return Some(nvars + q);
                }
            }
            None
        } else {
            let q = (node - nvars) as usize;
            let back = &self.radj[q];
            while *cursor < back.len() {
                let p = back[*cursor];
                *cursor += 1;
                if self.m.var_to_val[p as usize] != Some(q as u32) {
                    return Some(p);
                }
            }
            None
        }
    }
}

/// Iterative Tarjan; returns the component id of every node. Explicit
/// stack because value graphs can chain thousands of nodes deep.
fn tarjan_scc(o: &Oriented<'_>) -> Vec<u32> {
    const UNSET: u32 = u32::MAX;
    let n = o.node_count();
    let mut index: Vec<u32> = alloc::vec![UNSET; n];
    let mut lowlink: Vec<u32> = alloc::vec![0; n];
    let mut on_stack: Vec<bool> = alloc::vec![false; n];
    let mut comp: Vec<u32> = alloc::vec![UNSET; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut work: Vec<(u32, usize)> = Vec::new();
    let mut next_index = 0u32;
    let mut comp_count = 0u32;

    for start in 0..n as u32 {
        if index[start as usize] != UNSET {
            continue;
        }
        index[start as usize] = next_index;
        lowlink[start as usize] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start as usize] = true;
        work.push((start, 0));

        while !work.is_empty() {
            let top = work.len() - 1;
            let (node, mut cursor) = work[top];
            match o.next_successor(node, &mut cursor) {
                Some(next) => {
                    work[top].1 = cursor;
                    if index[next as usize] == UNSET {
                        index[next as usize] = next_index;
                        lowlink[next as usize] = next_index;
                        next_index += 1;
                        stack.push(next);
                        on_stack[next as usize] = true;
                        work.push((next, 0));
                    } else if on_stack[next as usize] {
                        lowlink[node as usize] =
                            lowlink[node as usize].min(index[next as usize]);
                    }
                }
                None => {
                    work.pop();
                    if lowlink[node as usize] == index[node as usize] {
                        loop {
                            let w = stack.pop().expect("scc stack");
                            on_stack[w as usize] = false;
                            comp[w as usize] = comp_count;
                            if w == node {
                                break;
                            }
                        }
                        comp_count += 1;
                    }
                    if let Some(&(parent, _)) = work.last() {
                        lowlink[parent as usize] =
                            lowlink[parent as usize].min(lowlink[node as usize]);
                    }
                }
            }
        }
    }
    comp
}

/// Value nodes reachable from free value nodes along the orientation.
fn reachable_from_free(o: &Oriented<'_>) -> Vec<bool> {
    let n = o.node_count();
    let nvars = o.g.var_count();
    let mut seen = alloc::vec![false; n];
    let mut queue: VecDeque<u32> = VecDeque::new();
    for q in 0..o.g.val_count() {
        if o.m.val_to_var[q].is_none() {
            seen[nvars + q] = true;
            queue.push_back((nvars + q) as u32);
        }
    }
    while let Some(node) = queue.pop_front() {
        let mut cursor = 0;
        while let Some(next) = o.next_successor(node, &mut cursor) {
            if !seen[next as usize] {
                seen[next as usize] = true;
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Edges belonging to no maximum matching, as `(variable, view value)`
/// pairs in (variable position, ascending value) order.
///
/// Requires `m` to be maximum and to cover every variable node; with all
/// variables covered, only value nodes can be free, so alternating-path
/// reachability is seeded from free value nodes alone.
pub fn mark_removable_edges(
    g: &ValueGraph,
    m: &Matching,
) -> Result<Vec<(VariableId, Value)>, ModelError> {
    if !m.covers_all_vars() {
        return Err(ModelError::ArityMismatch {
            expected: g.var_count(),
            got: m.size(),
        });
    }
    Ok(removable_positions(g, m)
        .into_iter()
        .map(|(p, q)| (g.vars[p], g.vals[q]))
        .collect())
}

fn removable_positions(g: &ValueGraph, m: &Matching) -> Vec<(usize, usize)> {
    let o = Oriented::new(g, m);
    let comp = tarjan_scc(&o);
    let reach = reachable_from_free(&o);
    let nvars = g.var_count();

    let mut removable = Vec::new();
    for (p, adj) in g.adj.iter().enumerate() {
        for &q in adj {
            if m.var_to_val[p] == Some(q) {
                continue; // matched edges always survive
            }
            let val_node = nvars + q as usize;
            // Even alternating cycle: endpoints in one component.
            if comp[p] == comp[val_node] {
                continue;
            }
            // Even alternating path: the unmatched edge is oriented
            // value→variable, so it is traversed iff its value end is
            // reachable from a free value node.
            if reach[val_node] {
                continue;
            }
            removable.push((p, q as usize));
        }
    }
    removable
}

/// Hyper-arc consistency filter: infeasible when the maximum matching
/// leaves a variable uncovered, otherwise deletes every domain value whose
/// edge belongs to no maximum matching.
pub fn gac_filter(c: &AllDifferentConstraint, store: &DomainStore) -> FilterOutcome {
    let mut out = store.clone();
    let view = c.view_domains(&out);
    if let Some(i) = view.iter().position(Domain::is_empty) {
        return FilterOutcome::Infeasible(Infeasible::new(InfeasibleCause::EmptyDomain(
            c.vars()[i],
        )));
    }

    let g = graph_from_view(c.vars().to_vec(), &view);
    let m = maximum_matching(&g);
    if m.size() < g.var_count() {
        return FilterOutcome::Infeasible(Infeasible::new(InfeasibleCause::MatchingDeficit {
            matched: m.size(),
            vars: g.var_count(),
        }));
    }

    let removable = removable_positions(&g, &m);
    if removable.is_empty() {
        return FilterOutcome::Fixpoint(out);
    }

    let mut new_view = view;
    for (p, q) in removable {
        new_view[p].remove(g.vals[q]);
    }
    c.store_view(&mut out, &new_view);
    FilterOutcome::Fixpoint(out)
}

/// Plain-text adjacency dump: one `var: matched_value | other_values`
/// line per variable, `-` when unmatched. Values are view values.
pub fn dump_graph(g: &ValueGraph, m: &Matching) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (p, adj) in g.adj.iter().enumerate() {
        let matched = m.var_to_val[p];
        let _ = write!(out, "{}: ", g.vars[p]);
        match matched {
            Some(q) => {
                let _ = write!(out, "{}", g.vals[q as usize]);
            }
            None => out.push('-'),
        }
        out.push_str(" |");
        for &q in adj {
            if Some(q) != matched {
                let _ = write!(out, " {}", g.vals[q as usize]);
            }
        }
        out.push('\n');
    }
    out
}
