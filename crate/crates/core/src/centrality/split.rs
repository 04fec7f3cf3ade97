//! Best two-way split of a vertex's neighborhood.
//!
//! Given the pair betweenness of a vertex (shortest-path flow entering from
//! one neighbor and leaving through another), a split into sides A and B
//! scores the flow that would have to cross the imaginary edge between the
//! two copies: the sum of pair betweenness over pairs with one neighbor on
//! each side.

/// Largest degree for which every split is enumerated.
pub const EXHAUSTIVE_MAX_DEGREE: usize = 12;

/// Symmetric pair-flow matrix over a vertex's neighbor slots.
pub(crate) struct PairFlow {
    d: usize,
    w: Vec<f64>,
}

impl PairFlow {
    pub fn new(d: usize) -> Self {
        PairFlow {
            d,
            w: vec![0.0; d * d],
        }
    }

    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.w[i * self.d + j] = x;
        self.w[j * self.d + i] = x;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.d + j]
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn cross(&self, side_b: &[bool]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.d {
            for j in i + 1..self.d {
                if side_b[i] != side_b[j] {
                    s += self.get(i, j);
                }
            }
        }
        s
    }
}

/// Returns (score, membership in side B). Slot 0 always stays on side A.
pub(crate) fn best_split(flow: &PairFlow) -> (f64, Vec<bool>) {
    if flow.degree() <= EXHAUSTIVE_MAX_DEGREE {
        exhaustive(flow)
    } else {
        greedy(flow)
    }
}

fn exhaustive(flow: &PairFlow) -> (f64, Vec<bool>) {
    let d = flow.degree();
    let mut best = (f64::NEG_INFINITY, vec![false; d]);
    let mut side_b = vec![false; d];
    for mask in 1u32..(1u32 << (d - 1)) {
        for (i, b) in side_b.iter_mut().enumerate().skip(1) {
            *b = mask & (1 << (i - 1)) != 0;
        }
        let score = flow.cross(&side_b);
        if score > best.0 {
            best = (score, side_b.clone());
        }
    }
    best
}

/// Agglomerates neighbor groups, always merging the two groups with the
/// least flow between them, until two groups remain.
fn greedy(flow: &PairFlow) -> (f64, Vec<bool>) {
    let d = flow.degree();
    let mut group: Vec<usize> = (0..d).collect();
    let mut live: Vec<usize> = (0..d).collect();
    // inter-group flow, indexed by group representative
    let mut between = PairFlow::new(d);
    for i in 0..d {
        for j in i + 1..d {
            between.set(i, j, flow.get(i, j));
        }
    }
    while live.len() > 2 {
        let mut pick = (f64::INFINITY, 0, 0);
        for (x, &a) in live.iter().enumerate() {
            for &b in &live[x + 1..] {
                let f = between.get(a, b);
                if f < pick.0 {
                    pick = (f, a, b);
                }
            }
        }
        let (_, keep, gone) = pick;
        for &c in &live {
            if c != keep && c != gone {
                let merged = between.get(keep, c) + between.get(gone, c);
                between.set(keep, c, merged);
            }
        }
        for g in group.iter_mut() {
            if *g == gone {
                *g = keep;
            }
        }
        live.retain(|&c| c != gone);
    }
    let side_b: Vec<bool> = group.iter().map(|&g| g != group[0]).collect();
    (flow.cross(&side_b), side_b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_middle_has_single_split() {
        let mut f = PairFlow::new(2);
        f.set(0, 1, 1.0);
        assert_eq!(best_split(&f), (1.0, vec![false, true]));
    }

    #[test]
    fn greedy_matches_exhaustive_on_block_structure() {
        // two groups of neighbors with heavy flow across and none within
        let d = 14;
        let mut f = PairFlow::new(d);
        for i in 0..d {
            for j in i + 1..d {
                f.set(i, j, if (i < 7) != (j < 7) { 1.0 } else { 0.0 });
            }
        }
        let (score, side_b) = greedy(&f);
        assert_eq!(score, 49.0);
        assert!(side_b[..7].iter().all(|b| !b));
        assert!(side_b[7..].iter().all(|b| *b));
    }
}
