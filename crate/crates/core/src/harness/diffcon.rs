//! Difference-constraint feasibility by Bellman-Ford.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Add;

/// `x[to] - x[from] <= bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constraint<W> {
    pub from: usize,
    pub to: usize,
    pub bound: W,
}

/// Finds `x` satisfying every constraint, or returns the indices of
/// constraints forming a negative cycle (in traversal order).
///
/// Uses an implicit source joined to every variable with weight zero, so the
/// returned potentials are all `<= zero`.
pub fn solve<W>(n: usize, constraints: &[Constraint<W>], zero: W) -> Result<Vec<W>, Vec<usize>>
where
    W: Copy + Ord + Add<Output = W>,
{
    let mut dist = vec![zero; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut last_updated = None;
    for _ in 0..n {
        last_updated = None;
        for (i, c) in constraints.iter().enumerate() {
            let candidate = dist[c.from] + c.bound;
            if candidate < dist[c.to] {
                dist[c.to] = candidate;
                pred[c.to] = Some(i);
                last_updated = Some(c.to);
            }
        }
        if last_updated.is_none() {
            return Ok(dist);
        }
    }
    let Some(mut v) = last_updated else {
        return Ok(dist);
    };
    // Walking back n steps lands inside the cycle.
    for _ in 0..n {
        v = constraints[pred[v].expect("updated vertices have predecessors")].from;
    }
    let start = v;
    let mut cycle = Vec::new();
    loop {
        let i = pred[v].expect("cycle vertices have predecessors");
        cycle.push(i);
        v = constraints[i].from;
        if v == start {
            break;
        }
    }
    cycle.reverse();
    Err(cycle)
}
