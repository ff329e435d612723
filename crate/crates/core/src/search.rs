//! Bidirectional breadth-first search over reduction graphs.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum JoinError {
    /// The bound on visited nodes was hit. Inconclusive.
    #[error("no common reduct among the first {visited} visited expressions")]
    NotFoundWithinBound { visited: usize },
    /// Both reduction graphs were explored completely without meeting.
    #[error("reduction graphs exhausted after {visited} expressions; no common reduct exists")]
    Exhausted { visited: usize },
    #[error("cannot join a {left} with a {right}")]
    SortMismatch { left: String, right: String },
}

struct Side<T, K> {
    seen: HashMap<K, T>,
    frontier: VecDeque<T>,
}

impl<T: Clone, K: Hash + Eq + Clone> Side<T, K> {
    fn new(start: T, key: K) -> Self {
        let mut seen = HashMap::new();
        seen.insert(key, start.clone());
        Side { seen, frontier: VecDeque::from([start]) }
    }
}

/// Searches for a node reachable from both `a` and `b`. The two sides are
/// expanded one BFS layer at a time, alternating, so the witness is the
/// first meeting point in that order and does not depend on hashing.
pub fn join<T, K>(
    a: T,
    b: T,
    bound: usize,
    successors: impl Fn(&T) -> Vec<T>,
    key: impl Fn(&T) -> K,
) -> Result<T, JoinError>
where
    T: Clone,
    K: Hash + Eq + Clone,
{
    let ka = key(&a);
    let kb = key(&b);
    if ka == kb {
        return Ok(a);
    }
    let mut sides = [Side::new(a, ka), Side::new(b, kb)];
    let mut turn = 0;
    loop {
        let visited = sides[0].seen.len() + sides[1].seen.len();
        if sides[0].frontier.is_empty() && sides[1].frontier.is_empty() {
            return Err(JoinError::Exhausted { visited });
        }
        if !sides[turn].frontier.is_empty() {
            let layer: Vec<T> = sides[turn].frontier.drain(..).collect();
            for node in layer {
                for next in successors(&node) {
                    let k = key(&next);
                    if sides[1 - turn].seen.contains_key(&k) {
                        return Ok(next);
                    }
                    if sides[turn].seen.contains_key(&k) {
                        continue;
                    }
                    if sides[0].seen.len() + sides[1].seen.len() >= bound {
                        return Err(JoinError::NotFoundWithinBound {
                            visited: sides[0].seen.len() + sides[1].seen.len(),
                        });
                    }
                    sides[turn].seen.insert(k, next.clone());
                    sides[turn].frontier.push_back(next);
                }
            }
        }
        turn = 1 - turn;
    }
}

/// Whether `target` (by key) is reachable from `start` within `bound` nodes.
pub fn reaches<T, K>(
    start: T,
    target: &K,
    bound: usize,
    successors: impl Fn(&T) -> Vec<T>,
    key: impl Fn(&T) -> K,
) -> bool
where
    K: Hash + Eq,
{
    let k0 = key(&start);
    if &k0 == target {
        return true;
    }
    let mut seen = HashSet::from([k0]);
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        for next in successors(&node) {
            let k = key(&next);
            if &k == target {
                return true;
            }
            if seen.len() >= bound {
                return false;
            }
            if seen.insert(k) {
                queue.push_back(next);
            }
        }
    }
    false
}
