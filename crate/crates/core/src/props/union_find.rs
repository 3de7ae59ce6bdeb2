/// Union-find that also tracks, for each vertex, the parity of its path to
/// the root. Adding an edge asks its endpoints to be on opposite sides, so a
/// component stays consistent exactly while it is bipartite.
#[derive(Clone, Debug)]
pub struct ParityUnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    // parity of the edge to the parent
    parity: Vec<bool>,
    components: usize,
    odd_cycle: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityUnion {
    /// Two components were merged.
    Merged,
    /// Both endpoints were already in one component, on opposite sides.
    Consistent,
    /// Both endpoints were on the same side: the edge closes an odd cycle.
    OddCycle,
}

impl ParityUnionFind {
    pub fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
            parity: vec![false; n],
            components: n,
            odd_cycle: false,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Root of `x` and the parity of `x` relative to it.
    pub fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, parent_parity) = self.find(p);
        self.parity[x] ^= parent_parity;
        self.parent[x] = root;
        (root, self.parity[x])
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> ParityUnion {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            if pa == pb {
                self.odd_cycle = true;
                return ParityUnion::OddCycle;
            }
            return ParityUnion::Consistent;
        }
        // attach the lower-rank root; its parity makes a and b opposite
        let (child, root) = if self.rank[ra] < self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[child] = root;
        self.parity[child] = !(pa ^ pb);
        if self.rank[child] == self.rank[root] {
            self.rank[root] += 1;
        }
        self.components -= 1;
        ParityUnion::Merged
    }

    pub fn same_component(&mut self, a: usize, b: usize) -> bool {
        self.find(a).0 == self.find(b).0
    }

    /// Whether `a` and `b` lie in one component on opposite sides.
    pub fn opposite_sides(&mut self, a: usize, b: usize) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        ra == rb && pa != pb
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    /// True once any added edge closed an odd cycle.
    pub fn has_odd_cycle(&self) -> bool {
        self.odd_cycle
    }
}

/// Plain union-find with a running component count and sizes.
#[derive(Clone, Debug)]
pub struct ComponentTracker {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl ComponentTracker {
    pub fn new(n: usize) -> Self {
        ComponentTracker {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns true if the edge merged two components.
    pub fn add_edge(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (small, big) = if self.size[ra] < self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        self.components -= 1;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn component_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }

    pub fn component_count(&self) -> usize {
        self.components
    }
}
