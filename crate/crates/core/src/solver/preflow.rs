//! Highest-label push-relabel on an implicit grid graph.
//!
//! Only the first phase runs: once no node with excess can reach the sink,
//! the flow into the sink is the maximum flow value and the sink side of
//! the minimum cut is the set of nodes that can still reach the sink in
//! the residual graph. Excess stranded on the source side is never
//! returned, which the cut does not need.
//!
//! Source arcs are saturated at the start, so the source never appears as
//! a node. Sink arcs are a per-node residual.

use super::CutGraph;

/// How much work one max-flow run did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WorkCounters {
    /// Pushes along grid arcs and into the sink.
    pub pushes: u64,
    pub relabels: u64,
    /// Breadth-first recomputations of all labels.
    pub global_updates: u64,
}

pub(crate) struct FlowOutcome {
    pub source_side: Vec<bool>,
    pub flow: u64,
    pub work: WorkCounters,
}

/// Global relabels run after this many arc scans per node.
const GLOBAL_RELABEL_PERIOD: u64 = 12;

const NIL: u32 = u32::MAX;

struct Preflow {
    width: usize,
    height: usize,
    m: usize,
    /// Linear index offset per direction.
    step: Vec<isize>,
    dx: Vec<isize>,
    dy: Vec<isize>,
    reverse: Vec<usize>,
    residual: Vec<u32>,
    to_sink: Vec<u64>,
    excess: Vec<u64>,
    label: Vec<u32>,
    current: Vec<u8>,
    buckets: Vec<Vec<u32>>,
    highest: usize,
    /// Every live node, linked per label, for the gap heuristic.
    level_head: Vec<u32>,
    level_next: Vec<u32>,
    level_prev: Vec<u32>,
    top_level: usize,
    dead: u32,
    flow: u64,
    scans_since_relabel: u64,
    work: WorkCounters,
}

impl Preflow {
    fn new(graph: &CutGraph) -> Self {
        let grid = graph.grid();
        let (width, height) = (grid.width, grid.height);
        let stencil = graph.stencil();
        let m = stencil.len();
        let dx: Vec<isize> = stencil.offsets().iter().map(|&(x, _)| x as isize).collect();
        let dy: Vec<isize> = stencil.offsets().iter().map(|&(_, y)| y as isize).collect();
        let step = dx
            .iter()
            .zip(&dy)
            .map(|(&x, &y)| y * width as isize + x)
            .collect();
        let reverse = (0..m).map(|k| stencil.reverse(k)).collect();
        let n = width * height;

        let mut residual = vec![0u32; n * m];
        for j in 0..height {
            for i in 0..width {
                let base = (j * width + i) * m;
                for k in 0..m {
                    let (x, y) = (i as isize + dx[k], j as isize + dy[k]);
                    if x >= 0 && y >= 0 && (x as usize) < width && (y as usize) < height {
                        residual[base + k] = graph.edge_units()[k];
                    }
                }
            }
        }

        let mut flow = 0;
        let mut excess = vec![0u64; n];
        let mut to_sink = vec![0u64; n];
        for p in 0..n {
            let (s, t) = (graph.source_units()[p], graph.sink_units()[p]);
            let direct = s.min(t);
            flow += direct;
            excess[p] = s - direct;
            to_sink[p] = t - direct;
        }

        Self {
            width,
            height,
            m,
            step,
            dx,
            dy,
            reverse,
            residual,
            to_sink,
            excess,
            label: vec![0; n],
            current: vec![0; n],
            buckets: Vec::new(),
            highest: 0,
            level_head: Vec::new(),
            level_next: vec![NIL; n],
            level_prev: vec![NIL; n],
            top_level: 0,
            dead: n as u32 + 1,
            flow,
            scans_since_relabel: 0,
            work: WorkCounters::default(),
        }
    }

    fn neighbor(&self, p: usize, k: usize) -> Option<usize> {
        let (i, j) = ((p % self.width) as isize, (p / self.width) as isize);
        let (x, y) = (i + self.dx[k], j + self.dy[k]);
        (x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height)
            .then(|| (p as isize + self.step[k]) as usize)
    }

    /// Exact distance to the sink in the residual graph, by breadth-first
    /// search backwards from the nodes with residual sink capacity.
    fn global_relabel(&mut self) {
        self.work.global_updates += 1;
        let n = self.label.len();
        let m = self.m;
        self.label.fill(self.dead);
        let mut queue: Vec<u32> = Vec::with_capacity(n);
        for p in 0..n {
            if self.to_sink[p] > 0 {
                self.label[p] = 1;
                queue.push(p as u32);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head] as usize;
            head += 1;
            let next = self.label[v] + 1;
            for k in 0..m {
                let Some(u) = self.neighbor(v, k) else {
                    continue;
                };
                if self.label[u] == self.dead && self.residual[u * m + self.reverse[k]] > 0 {
                    self.label[u] = next;
                    queue.push(u as u32);
                }
            }
        }
        let top = queue.last().map_or(0, |&p| self.label[p as usize] as usize);
        self.buckets.iter_mut().for_each(Vec::clear);
        self.buckets.resize_with(top + 1, Vec::new);
        // Enqueue in decreasing index so buckets pop in increasing index.
        for p in (0..n).rev() {
            if self.excess[p] > 0 && self.label[p] < self.dead {
                self.buckets[self.label[p] as usize].push(p as u32);
            }
        }
        self.level_head.clear();
        self.level_head.resize(top + 1, NIL);
        for &p in queue.iter().rev() {
            self.link(p as usize);
        }
        self.top_level = top;
        self.current.fill(0);
        self.highest = top;
        self.scans_since_relabel = 0;
    }

    fn link(&mut self, p: usize) {
        let l = self.label[p] as usize;
        if l >= self.level_head.len() {
            self.level_head.resize(l + 1, NIL);
        }
        let head = self.level_head[l];
        self.level_next[p] = head;
        self.level_prev[p] = NIL;
        if head != NIL {
            self.level_prev[head as usize] = p as u32;
        }
        self.level_head[l] = p as u32;
        self.top_level = self.top_level.max(l);
    }

    fn unlink(&mut self, p: usize) {
        let (prev, next) = (self.level_prev[p], self.level_next[p]);
        if prev == NIL {
            self.level_head[self.label[p] as usize] = next;
        } else {
            self.level_next[prev as usize] = next;
        }
        if next != NIL {
            self.level_prev[next as usize] = prev;
        }
    }

    /// No live node is left at `level`, so nothing above it can reach the
    /// sink any more.
    fn gap(&mut self, level: usize) {
        for l in level + 1..=self.top_level {
            let mut p = std::mem::replace(&mut self.level_head[l], NIL);
            while p != NIL {
                self.label[p as usize] = self.dead;
                p = self.level_next[p as usize];
            }
        }
        self.top_level = level.saturating_sub(1);
    }

    fn enqueue(&mut self, p: usize) {
        let l = self.label[p] as usize;
        if l >= self.buckets.len() {
            self.buckets.resize_with(l + 1, Vec::new);
        }
        self.buckets[l].push(p as u32);
        self.highest = self.highest.max(l);
    }

    fn pop_highest(&mut self) -> Option<usize> {
        loop {
            if let Some(p) = self.buckets[self.highest].pop() {
                return Some(p as usize);
            }
            if self.highest == 0 {
                return None;
            }
            self.highest -= 1;
        }
    }

    /// Pushes `p`'s excess along admissible arcs, relabelling as needed,
    /// until it is gone or `p` can no longer reach the sink.
    fn discharge(&mut self, p: usize) {
        let m = self.m;
        while self.excess[p] > 0 {
            if self.label[p] == 1 && self.to_sink[p] > 0 {
                let b = self.excess[p].min(self.to_sink[p]);
                self.excess[p] -= b;
                self.to_sink[p] -= b;
                self.flow += b;
                self.work.pushes += 1;
                continue;
            }
            let mut k = self.current[p] as usize;
            while k < m {
                if self.residual[p * m + k] > 0 {
                    if let Some(q) = self.neighbor(p, k) {
                        if self.label[q] + 1 == self.label[p] {
                            break;
                        }
                    }
                }
                k += 1;
            }
            self.scans_since_relabel += (k - self.current[p] as usize) as u64;
            if k < m {
                self.current[p] = k as u8;
                let q = self
                    .neighbor(p, k)
                    .expect("admissible arcs stay on the grid");
                let b = self.excess[p].min(self.residual[p * m + k] as u64);
                self.residual[p * m + k] -= b as u32;
                self.residual[q * m + self.reverse[k]] += b as u32;
                self.excess[p] -= b;
                if self.excess[q] == 0 {
                    self.enqueue(q);
                }
                self.excess[q] += b;
                self.work.pushes += 1;
                continue;
            }
            // Relabel.
            self.work.relabels += 1;
            self.scans_since_relabel += m as u64;
            let mut best = if self.to_sink[p] > 0 { 1 } else { self.dead };
            for k in 0..m {
                if self.residual[p * m + k] > 0 {
                    if let Some(q) = self.neighbor(p, k) {
                        best = best.min(self.label[q].saturating_add(1));
                    }
                }
            }
            let old = self.label[p] as usize;
            self.unlink(p);
            if self.level_head[old] == NIL {
                self.gap(old);
                self.label[p] = self.dead;
                return;
            }
            self.label[p] = best.min(self.dead);
            self.current[p] = 0;
            if self.label[p] >= self.dead {
                return;
            }
            self.link(p);
        }
    }

    fn run(mut self) -> FlowOutcome {
        let n = self.label.len() as u64;
        self.global_relabel();
        while let Some(p) = self.pop_highest() {
            if self.label[p] >= self.dead || self.excess[p] == 0 {
                continue;
            }
            self.discharge(p);
            if self.scans_since_relabel > GLOBAL_RELABEL_PERIOD * n {
                self.global_relabel();
            }
        }
        // Everything that can still reach the sink is on the sink side.
        self.global_relabel();
        FlowOutcome {
            source_side: self.label.iter().map(|&l| l == self.dead).collect(),
            flow: self.flow,
            work: self.work,
        }
    }
}

pub(crate) fn max_flow(graph: &CutGraph) -> FlowOutcome {
    Preflow::new(graph).run()
}
