//! Max segment tree with smallest-index argmax.

#[derive(Debug, Clone, Copy, PartialEq)]
struct Node {
    value: f64,
    index: usize,
}

impl Node {
    const EMPTY: Node = Node {
        value: f64::NEG_INFINITY,
        index: usize::MAX,
    };

    #[inline]
    fn merge(left: Node, right: Node) -> Node {
        // left covers smaller indices, so it wins ties
        if right.value > left.value || (left.index == usize::MAX && right.index != usize::MAX) {
            right
        } else {
            left
        }
    }
}

#[derive(Debug, Clone)]
pub struct MaxTree {
    len: usize,
    size: usize,
    nodes: Vec<Node>,
}

impl MaxTree {
    pub fn new(values: &[f64]) -> Self {
        let len = values.len();
        let size = len.max(1).next_power_of_two();
        let mut nodes = vec![Node::EMPTY; 2 * size];
        for (i, &v) in values.iter().enumerate() {
            nodes[size + i] = Node { value: v, index: i };
        }
        for k in (1..size).rev() {
            nodes[k] = Node::merge(nodes[2 * k], nodes[2 * k + 1]);
        }
        MaxTree { len, size, nodes }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// ceil(log2 len), the number of internal levels above a leaf.
    pub fn height(&self) -> usize {
        self.size.trailing_zeros() as usize
    }

    pub fn get(&self, i: usize) -> f64 {
        self.nodes[self.size + i].value
    }

    /// Point update. Returns the number of nodes written (leaf plus ancestors).
    pub fn set(&mut self, i: usize, value: f64) -> usize {
        assert!(i < self.len, "leaf {i} out of range");
        let mut k = self.size + i;
        self.nodes[k].value = value;
        let mut visits = 1;
        while k > 1 {
            k >>= 1;
            self.nodes[k] = Node::merge(self.nodes[2 * k], self.nodes[2 * k + 1]);
            visits += 1;
        }
        visits
    }

    /// (max value, smallest index attaining it). `None` when empty.
    pub fn max(&self) -> Option<(f64, usize)> {
        let root = self.nodes[1];
        (root.index != usize::MAX).then_some((root.value, root.index))
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

/// Linear-scan max with smallest-index tie-break.
pub fn scan_max(values: &[f64]) -> Option<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some((b, _)) if v <= b => {}
            _ => best = Some((v, i)),
        }
    }
    best
}
