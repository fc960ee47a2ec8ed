//! Search tree shared by all planners: node storage with an R-tree over node
//! positions, parent selection, rewiring and solution extraction.

use std::collections::VecDeque;

use rstar::primitives::GeomWithData;
use rstar::RTree;
use serde::{Deserialize, Serialize};

use crate::env::{angle_diff, HazardMap, Point};
use crate::vessel::{Steering, TrajectorySegment, VesselState};

pub type NodeId = usize;

/// How the cost of an edge is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostMetric {
    /// Length of the sampled trajectory polyline.
    #[default]
    Polyline,
    /// Straight-line distance between the edge endpoints.
    Endpoint,
}

impl CostMetric {
    pub fn edge_cost(self, edge: &TrajectorySegment) -> f64 {
        match self {
            CostMetric::Polyline => edge.length(),
            CostMetric::Endpoint => edge.endpoint_distance(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub state: VesselState,
    pub parent: Option<NodeId>,
    /// Path cost from the root.
    pub cost: f64,
    /// Cost of the edge from the parent.
    pub edge_cost: f64,
    /// Trajectory from the parent; empty for the root.
    pub edge: TrajectorySegment,
}

/// Returned by [`Tree::insert`] when the node budget is used up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("node budget exhausted")]
pub struct BudgetExceeded;

type IndexedNode = GeomWithData<[f64; 2], NodeId>;

#[derive(Debug, Clone)]
pub struct Tree {
    nodes: Vec<Node>,
    children: Vec<Vec<NodeId>>,
    index: RTree<IndexedNode>,
    max_nodes: usize,
    metric: CostMetric,
}

/// A solution path extracted from the tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub node: NodeId,
    pub cost: f64,
    /// Polyline length of `trajectory`.
    pub length: f64,
    pub waypoints: Vec<Point>,
    pub trajectory: TrajectorySegment,
}

impl Tree {
    pub fn new(root: VesselState, max_nodes: usize, metric: CostMetric, dt: f64) -> Self {
        let mut index = RTree::new();
        index.insert(GeomWithData::new([root.x, root.y], 0));
        Tree {
            nodes: vec![Node {
                id: 0,
                state: root,
                parent: None,
                cost: 0.0,
                edge_cost: 0.0,
                edge: TrajectorySegment::empty(dt),
            }],
            children: vec![Vec::new()],
            index,
            max_nodes: max_nodes.max(1),
            metric,
        }
    }

    pub const ROOT: NodeId = 0;

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.nodes.len() >= self.max_nodes
    }

    pub fn max_nodes(&self) -> usize {
        self.max_nodes
    }

    pub fn metric(&self) -> CostMetric {
        self.metric
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.children[id]
    }

    pub fn cost(&self, id: NodeId) -> f64 {
        self.nodes[id].cost
    }

    pub fn position(&self, id: NodeId) -> Point {
        self.nodes[id].state.position()
    }

    pub fn edge_cost(&self, edge: &TrajectorySegment) -> f64 {
        self.metric.edge_cost(edge)
    }

    pub fn insert(&mut self, parent: NodeId, state: VesselState, edge: TrajectorySegment) -> Result<NodeId, BudgetExceeded> {
        assert!(parent < self.nodes.len(), "unknown parent {parent}");
        if self.is_full() {
            return Err(BudgetExceeded);
        }
        let id = self.nodes.len();
        let edge_cost = self.edge_cost(&edge);
        self.nodes.push(Node {
            id,
            state,
            parent: Some(parent),
            cost: self.nodes[parent].cost + edge_cost,
            edge_cost,
            edge,
        });
        self.children.push(Vec::new());
        self.children[parent].push(id);
        self.index.insert(GeomWithData::new([state.x, state.y], id));
        Ok(id)
    }

    /// Node closest to `p`; ties go to the lowest id.
    pub fn nearest(&self, p: Point) -> NodeId {
        let mut best: Option<(f64, NodeId)> = None;
        for (n, d2) in self.index.nearest_neighbor_iter_with_distance_2(&p.into()) {
            match best {
                Some((bd, bid)) if d2 > bd => return bid,
                Some((bd, bid)) if d2 == bd && bid < n.data => {}
                _ => best = Some((d2, n.data)),
            }
        }
        best.expect("tree is never empty").1
    }

    /// The `k` nodes closest to `p`, ordered by distance then id.
    pub fn k_nearest(&self, p: Point, k: usize) -> Vec<NodeId> {
        let mut hits: Vec<(f64, NodeId)> = Vec::with_capacity(k + 1);
        for (n, d2) in self.index.nearest_neighbor_iter_with_distance_2(&p.into()) {
            if hits.len() >= k && d2 > hits[k - 1].0 {
                break;
            }
            hits.push((d2, n.data));
        }
        hits.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        hits.truncate(k);
        hits.into_iter().map(|(_, id)| id).collect()
    }

    /// Nodes within `radius` of `p`, ordered by distance then id.
    pub fn within(&self, p: Point, radius: f64) -> Vec<NodeId> {
        let mut hits: Vec<(f64, NodeId)> = self
            .index
            .locate_within_distance(p.into(), radius * radius)
            .map(|n| (p.distance_2(Point::from(*n.geom())), n.data))
            .collect();
        hits.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        hits.into_iter().map(|(_, id)| id).collect()
    }

    /// Shrinking neighbor radius `min(l_max, γ·sqrt(ln n / n))` for the current
    /// node count `n` (at least 2 inside the logarithm).
    pub fn near_radius(&self, gamma: f64, l_max: f64) -> f64 {
        let n = self.len() as f64;
        (gamma * (n.max(2.0).ln() / n).sqrt()).min(l_max)
    }

    /// The at most `k_max` closest nodes within the shrinking radius.
    pub fn nearest_neighbors(&self, p: Point, gamma: f64, l_max: f64, k_max: usize) -> Vec<NodeId> {
        let mut near = self.within(p, self.near_radius(gamma, l_max));
        near.truncate(k_max);
        near
    }

    /// The `phi`-th parent of `z`, if the tree is deep enough.
    pub fn ancestor(&self, z: NodeId, phi: usize) -> Option<NodeId> {
        let mut cur = z;
        for _ in 0..phi {
            cur = self.nodes[cur].parent?;
        }
        Some(cur)
    }

    /// Union of the ancestors at levels `1..=depth` of every node in `zs`,
    /// sorted by id.
    pub fn ancestry(&self, zs: &[NodeId], depth: usize) -> Vec<NodeId> {
        let mut out = Vec::new();
        for &z in zs {
            let mut cur = z;
            for _ in 0..depth {
                match self.nodes[cur].parent {
                    Some(p) => {
                        out.push(p);
                        cur = p;
                    }
                    None => break,
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// True if `a` lies on the path from the root to `b` (including `b`).
    pub fn is_ancestor_or_self(&self, a: NodeId, b: NodeId) -> bool {
        let mut cur = Some(b);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.nodes[c].parent;
        }
        false
    }

    /// Node ids from the root to `z`.
    pub fn path_to(&self, z: NodeId) -> Vec<NodeId> {
        let mut path = vec![z];
        let mut cur = z;
        while let Some(p) = self.nodes[cur].parent {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Concatenated edge trajectories from the root to `z`.
    pub fn trajectory_to(&self, z: NodeId) -> TrajectorySegment {
        let path = self.path_to(z);
        let root = &self.nodes[path[0]];
        let mut traj = TrajectorySegment::single(root.state, root.edge.dt());
        for &id in &path[1..] {
            traj.extend(&self.nodes[id].edge);
        }
        traj
    }

    pub fn waypoints_to(&self, z: NodeId) -> Vec<Point> {
        self.path_to(z).into_iter().map(|id| self.position(id)).collect()
    }

    /// Moves `q` under `parent` with a new edge and propagates the cost change
    /// to every descendant. `q` keeps its state.
    pub fn reparent(&mut self, q: NodeId, parent: NodeId, edge: TrajectorySegment) {
        assert!(q != Self::ROOT, "cannot reparent the root");
        assert!(!self.is_ancestor_or_self(q, parent), "reparenting would create a cycle");
        let old = self.nodes[q].parent.expect("non-root node has a parent");
        self.children[old].retain(|&c| c != q);
        self.children[parent].push(q);
        let edge_cost = self.edge_cost(&edge);
        let node = &mut self.nodes[q];
        node.parent = Some(parent);
        node.edge_cost = edge_cost;
        node.edge = edge;
        let mut queue = VecDeque::from([q]);
        while let Some(id) = queue.pop_front() {
            let p = self.nodes[id].parent.expect("non-root");
            self.nodes[id].cost = self.nodes[p].cost + self.nodes[id].edge_cost;
            queue.extend(self.children[id].iter().copied());
        }
    }

    /// Cost of `z` recomputed by summing edge costs from the root.
    pub fn recomputed_cost(&self, z: NodeId) -> f64 {
        self.path_to(z)
            .into_iter()
            .skip(1)
            .fold(0.0, |acc, id| acc + self.nodes[id].edge_cost)
    }

    /// Lowest-cost node within `r_a` of `goal` (ties to the lowest id).
    pub fn best_goal_node(&self, goal: Point, r_a: f64) -> Option<NodeId> {
        self.index
            .locate_within_distance(goal.into(), r_a * r_a)
            .map(|n| n.data)
            .min_by(|&a, &b| self.nodes[a].cost.total_cmp(&self.nodes[b].cost).then(a.cmp(&b)))
    }

    /// Best solution reaching within `r_a` of `goal`, if any.
    pub fn extract_best_solution(&self, goal: Point, r_a: f64) -> Option<Solution> {
        let node = self.best_goal_node(goal, r_a)?;
        let trajectory = self.trajectory_to(node);
        Some(Solution {
            node,
            cost: self.nodes[node].cost,
            length: trajectory.length(),
            waypoints: self.waypoints_to(node),
            trajectory,
        })
    }

    /// Checks structural invariants: one root, acyclic parent links consistent
    /// with the child lists, index census and cost coherence within `tol`.
    pub fn check_invariants(&self, tol: f64) -> Result<(), String> {
        let n = self.nodes.len();
        if self.nodes[0].parent.is_some() {
            return Err("root has a parent".into());
        }
        for (id, node) in self.nodes.iter().enumerate() {
            if node.id != id {
                return Err(format!("node {id} has id {}", node.id));
            }
            if id > 0 {
                let p = node.parent.ok_or(format!("node {id} has no parent"))?;
                if !self.children[p].contains(&id) {
                    return Err(format!("node {id} missing from children of {p}"));
                }
                let mut steps = 0;
                let mut cur = id;
                while let Some(q) = self.nodes[cur].parent {
                    cur = q;
                    steps += 1;
                    if steps > n {
                        return Err(format!("cycle through node {id}"));
                    }
                }
                if cur != 0 {
                    return Err(format!("node {id} does not reach the root"));
                }
            }
            let want = self.recomputed_cost(id);
            if (node.cost - want).abs() > tol {
                return Err(format!("node {id} cost {} != recomputed {want}", node.cost));
            }
        }
        let child_total: usize = self.children.iter().map(Vec::len).sum();
        if child_total != n - 1 {
            return Err(format!("{child_total} child links for {n} nodes"));
        }
        if self.index.size() != n {
            return Err(format!("index holds {} of {n} nodes", self.index.size()));
        }
        let mut seen = vec![false; n];
        for e in self.index.iter() {
            let id = e.data;
            if id >= n || seen[id] || Point::from(*e.geom()) != self.position(id) {
                return Err(format!("index entry for node {id} is wrong"));
            }
            seen[id] = true;
        }
        Ok(())
    }

    pub fn snapshot(&self) -> TreeSnapshot {
        TreeSnapshot {
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeRecord {
                    id: n.id,
                    parent: n.parent,
                    state: n.state,
                    cost: n.cost,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    pub state: VesselState,
    pub cost: f64,
}

/// Serializable view of a tree without edge trajectories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeSnapshot {
    pub nodes: Vec<NodeRecord>,
}

/// Parent search and rewiring settings shared by the optimal planners.
#[derive(Debug, Clone, Copy)]
pub struct WireContext<'a> {
    pub steering: Steering,
    pub map: &'a HazardMap,
    /// A connecting steer must end within this distance of its target.
    pub connect_radius: f64,
    /// Minimum spacing between a new node and existing nodes.
    pub d_node_min: f64,
    /// Nodes inside this disc (centre, radius) are exempt from the spacing rule.
    pub goal_region: Option<(Point, f64)>,
}

impl WireContext<'_> {
    /// Steering used for connections: stops within the connect radius of the
    /// target, with a horizon long enough to cover the distance.
    fn connect_steering(&self, from: Point, target: Point) -> (Steering, f64) {
        let mut s = self.steering;
        s.guidance.wp_switch_radius = self.connect_radius;
        let reach = s.u_d.max(1e-6) * s.t_max;
        let k = (from.distance(target) / reach).ceil() + 1.0;
        (s, k * s.t_max)
    }

    /// Steers from `from` towards `target`; succeeds when the trajectory ends
    /// within the connect radius, stays in bounds and is collision-free.
    pub fn connect(&self, from: &VesselState, target: Point) -> Option<TrajectorySegment> {
        let (s, horizon) = self.connect_steering(from.position(), target);
        let traj = s.steer_for(from, target, horizon).ok()?;
        let end = traj.last()?.position();
        (end.distance(target) <= self.connect_radius && self.is_valid_edge(&traj)).then_some(traj)
    }

    pub fn is_valid_edge(&self, traj: &TrajectorySegment) -> bool {
        let pts = traj.positions();
        self.map.path_within_bounds(&pts) && self.map.path_is_free(&pts)
    }

    pub fn in_goal_region(&self, p: Point) -> bool {
        self.goal_region.is_some_and(|(g, r)| p.distance(g) <= r)
    }

    /// Whether a node at `p` respects the minimum spacing.
    pub fn spacing_ok(&self, tree: &Tree, p: Point) -> bool {
        self.in_goal_region(p) || p.distance(tree.position(tree.nearest(p))) >= self.d_node_min
    }
}

/// Parent chosen for a new node together with its edge and endpoint state.
#[derive(Debug, Clone)]
pub struct ParentChoice {
    pub parent: NodeId,
    pub edge: TrajectorySegment,
    pub state: VesselState,
    pub cost: f64,
}

/// Chooses the parent minimizing the cost to reach the endpoint of `sigma_new`
/// (the steer from `z_nearest`). Other candidates steer to that endpoint and
/// must arrive within the connect radius. Every option must be collision-free
/// and respect node spacing. Ties go to the lower existing cost, then the
/// lower id. Returns `None` when no option is valid.
pub fn find_parent(
    tree: &Tree,
    candidates: &[NodeId],
    z_nearest: NodeId,
    sigma_new: &TrajectorySegment,
    ctx: &WireContext,
) -> Option<ParentChoice> {
    let target = sigma_new.last()?.position();
    let mut ids: Vec<NodeId> = candidates.to_vec();
    ids.push(z_nearest);
    ids.sort_unstable();
    ids.dedup();
    let mut best: Option<ParentChoice> = None;
    for id in ids {
        let edge = if id == z_nearest {
            if !ctx.is_valid_edge(sigma_new) {
                continue;
            }
            sigma_new.clone()
        } else {
            match ctx.connect(&tree.node(id).state, target) {
                Some(t) => t,
                None => continue,
            }
        };
        let state = *edge.last().expect("steer output is nonempty");
        let cost = tree.cost(id) + tree.edge_cost(&edge);
        let better = match &best {
            None => true,
            Some(b) => cost < b.cost || (cost == b.cost && tree.cost(id) < tree.cost(b.parent)),
        };
        if better && ctx.spacing_ok(tree, state.position()) {
            best = Some(ParentChoice {
                parent: id,
                edge,
                state,
                cost,
            });
        }
    }
    best
}

/// Tries to reach `q` from `p` in a way that keeps `q`'s own state: the steer
/// must end within one step of travel of `q` with a course difference of at
/// most one step of turning. A direct steer rarely arrives on `q`'s course, so
/// the fallback follows the line through `q` along its course instead.
fn rewire_edge(tree: &Tree, p: NodeId, q: NodeId, ctx: &WireContext) -> Option<TrajectorySegment> {
    let from = tree.node(p).state;
    let qs = tree.node(q).state;
    let s = &ctx.steering;
    let pos_tol = ctx.connect_radius.min(s.ship.u_max * s.dt);
    let chi_tol = s.ship.r_max * s.dt;
    let fits = |t: &TrajectorySegment| {
        t.last().is_some_and(|end| {
            end.position().distance(qs.position()) <= pos_tol && angle_diff(end.chi, qs.chi).abs() <= chi_tol
        })
    };
    if let Some(t) = ctx.connect(&from, qs.position()) {
        if fits(&t) {
            return Some(t);
        }
    }
    let heading = Point::new(qs.chi.cos(), qs.chi.sin());
    let lead = from.position().distance(qs.position()) + s.guidance.delta;
    let p1 = qs.position() - heading * lead;
    let (along, _) = crate::vessel::path_errors(p1, qs.position(), from.position());
    if along >= lead - s.u_d * s.t_min {
        return None;
    }
    let (_, horizon) = ctx.connect_steering(from.position(), qs.position());
    let t = s.follow_segment(&from, p1, qs.position(), horizon, pos_tol).ok()?;
    (fits(&t) && ctx.is_valid_edge(&t)).then_some(t)
}

/// Rewires every neighbor through `z_new` when that lowers its cost.
/// Returns the number of re-parent operations.
pub fn rewire(tree: &mut Tree, neighbors: &[NodeId], z_new: NodeId, ctx: &WireContext) -> usize {
    rewire_via(tree, neighbors, &[z_new], ctx)
}

/// Like [`rewire`], but each neighbor may also be re-parented to the parent of
/// `z_new` when `n_ancestry > 0`. The cheapest valid option wins.
pub fn pq_rewire(tree: &mut Tree, neighbors: &[NodeId], z_new: NodeId, n_ancestry: usize, ctx: &WireContext) -> usize {
    let mut via = vec![z_new];
    via.extend(tree.ancestry(&[z_new], n_ancestry.min(1)));
    rewire_via(tree, neighbors, &via, ctx)
}

fn rewire_via(tree: &mut Tree, neighbors: &[NodeId], via: &[NodeId], ctx: &WireContext) -> usize {
    let mut count = 0;
    for &q in neighbors {
        if q == Tree::ROOT {
            continue;
        }
        let mut best: Option<(f64, NodeId, TrajectorySegment)> = None;
        for &p in via {
            if tree.is_ancestor_or_self(q, p) {
                continue;
            }
            let Some(edge) = rewire_edge(tree, p, q, ctx) else {
                continue;
            };
            let cost = tree.cost(p) + tree.edge_cost(&edge);
            if cost < tree.cost(q) && best.as_ref().is_none_or(|b| cost < b.0 || (cost == b.0 && p < b.1)) {
                best = Some((cost, p, edge));
            }
        }
        if let Some((_, p, edge)) = best {
            tree.reparent(q, p, edge);
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Rect;
    use crate::vessel::{GuidanceParams, ShipParams};

    fn st(x: f64, y: f64) -> VesselState {
        VesselState::new(x, y, 0.0, 4.0)
    }

    fn line(a: VesselState, b: VesselState) -> TrajectorySegment {
        TrajectorySegment::new(vec![a, b], 0.5)
    }

    fn tree() -> Tree {
        Tree::new(st(0.0, 0.0), 100, CostMetric::Polyline, 0.5)
    }

    #[test]
    fn insert_costs() {
        let mut t = tree();
        let a = t.insert(0, st(10.0, 0.0), line(st(0.0, 0.0), st(10.0, 0.0))).unwrap();
        assert_eq!(t.cost(a), 10.0);

        let mut t = tree();
        let pts = [st(0.0, 0.0), st(3.0, 0.0), st(3.0, 4.0), st(6.0, 8.0)];
        let mut prev = 0;
        for w in pts.windows(2) {
            prev = t.insert(prev, w[1], line(w[0], w[1])).unwrap();
        }
        assert_eq!(t.cost(prev), 12.0);

        let mut t = Tree::new(st(0.0, 0.0), 2, CostMetric::Polyline, 0.5);
        t.insert(0, st(1.0, 0.0), line(st(0.0, 0.0), st(1.0, 0.0))).unwrap();
        assert_eq!(t.insert(0, st(2.0, 0.0), line(st(0.0, 0.0), st(2.0, 0.0))), Err(BudgetExceeded));
    }

    #[test]
    fn nearest_and_ties() {
        let mut t = tree();
        assert_eq!(t.nearest(Point::new(5.0, 5.0)), 0);
        t.insert(0, st(10.0, 0.0), line(st(0.0, 0.0), st(10.0, 0.0))).unwrap();
        assert_eq!(t.nearest(Point::new(6.0, 0.0)), 1);
        assert_eq!(t.nearest(Point::new(5.0, 0.0)), 0);
    }

    #[test]
    fn neighbor_radius() {
        let mut t = tree();
        for i in 1..=15 {
            t.insert(0, st(i as f64, 0.0), line(st(0.0, 0.0), st(i as f64, 0.0))).unwrap();
        }
        let r = t.near_radius(1000.0, 1e9);
        assert!(r > 15.0);
        let near = t.nearest_neighbors(Point::new(0.0, 0.0), 1000.0, 1e9, 10);
        assert_eq!(near, (0..10).collect::<Vec<_>>());
        assert!(t.nearest_neighbors(Point::new(500.0, 500.0), 1.0, 1e9, 10).is_empty());
    }

    fn chain() -> (Tree, [NodeId; 4]) {
        let mut t = tree();
        let a = t.insert(0, st(1.0, 0.0), line(st(0.0, 0.0), st(1.0, 0.0))).unwrap();
        let b = t.insert(a, st(2.0, 0.0), line(st(1.0, 0.0), st(2.0, 0.0))).unwrap();
        let c = t.insert(b, st(3.0, 0.0), line(st(2.0, 0.0), st(3.0, 0.0))).unwrap();
        (t, [0, a, b, c])
    }

    #[test]
    fn ancestors() {
        let (t, [root, a, b, c]) = chain();
        assert_eq!(t.ancestor(c, 1), Some(b));
        assert_eq!(t.ancestor(c, 3), Some(root));
        assert_eq!(t.ancestor(c, 5), None);
        assert_eq!(t.ancestry(&[c], 2), vec![a, b]);
        assert!(t.ancestry(&[root], 4).is_empty());
        assert_eq!(t.ancestry(&[b, c], 1), vec![a, b]);
        assert!(t.ancestry(&[c], 0).is_empty());
    }

    #[test]
    fn reparent_propagates() {
        let mut t = tree();
        let far = t.insert(0, st(0.0, 20.0), line(st(0.0, 0.0), st(0.0, 20.0))).unwrap();
        let q = t.insert(far, st(0.0, 40.0), line(st(0.0, 20.0), st(0.0, 40.0))).unwrap();
        let leaf = t.insert(q, st(0.0, 45.0), line(st(0.0, 40.0), st(0.0, 45.0))).unwrap();
        let z = t.insert(0, st(0.0, 30.0), line(st(0.0, 0.0), st(0.0, 30.0))).unwrap();
        t.reparent(q, z, line(st(0.0, 30.0), st(0.0, 40.0)));
        assert_eq!(t.cost(q), 40.0);
        assert_eq!(t.cost(leaf), 45.0);
        t.check_invariants(1e-9).unwrap();
        assert_eq!(t.children(far), &[] as &[NodeId]);
    }

    #[test]
    fn extraction() {
        let mut t = tree();
        assert!(t.extract_best_solution(Point::new(100.0, 0.0), 10.0).is_none());
        let a = t.insert(0, st(50.0, 0.0), line(st(0.0, 0.0), st(50.0, 0.0))).unwrap();
        let g1 = t.insert(a, st(95.0, 0.0), line(st(50.0, 0.0), st(95.0, 0.0))).unwrap();
        let detour = t.insert(0, st(40.0, 30.0), line(st(0.0, 0.0), st(40.0, 30.0))).unwrap();
        let _g2 = t.insert(detour, st(98.0, 0.0), line(st(40.0, 30.0), st(98.0, 0.0))).unwrap();
        let sol = t.extract_best_solution(Point::new(100.0, 0.0), 10.0).unwrap();
        assert_eq!(sol.node, g1);
        assert_eq!(sol.length, 95.0);
        assert_eq!(sol.waypoints.len(), 3);
    }

    fn ctx(map: &HazardMap) -> WireContext<'_> {
        WireContext {
            steering: Steering {
                ship: ShipParams::default(),
                guidance: GuidanceParams::default(),
                u_d: 4.0,
                t_min: 1.0,
                t_max: 30.0,
                dt: 0.5,
            },
            map,
            connect_radius: 5.0,
            d_node_min: 5.0,
            goal_region: None,
        }
    }

    #[test]
    fn find_parent_prefers_cheaper_route() {
        let map = HazardMap::open(Rect::new(-500.0, -500.0, 500.0, 500.0));
        let c = ctx(&map);
        let mut t = Tree::new(VesselState::new(0.0, 0.0, 0.0, 4.0), 100, CostMetric::Endpoint, 0.5);
        let detour = c.connect(&t.node(0).state, Point::new(0.0, 80.0)).unwrap();
        let a = t.insert(0, *detour.last().unwrap(), detour).unwrap();
        let sigma = c.connect(&t.node(a).state, Point::new(60.0, 0.0)).unwrap();
        let choice = find_parent(&t, &[0, a], a, &sigma, &c).unwrap();
        assert_eq!(choice.parent, 0);
        assert!(choice.cost < t.cost(a) + t.edge_cost(&sigma));
    }
}
