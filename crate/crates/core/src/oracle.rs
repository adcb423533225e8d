//! Brute-force ground truth for list colouring at desk scale.
//!
//! Order-static backtracking with no propagation beyond immediate
//! feasibility. This module deliberately shares no search code with the
//! propagation or 2-list machinery; being an independent check is its job.

use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::lists::{mask_colours, Colour, Colouring, ListAssignment};

/// Default vertex bound for witness search.
pub const SEARCH_BOUND: usize = 60;
/// Default vertex bound for exact counting.
pub const COUNT_BOUND: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices, over the oracle bound {bound}")]
    TooLarge { n: usize, bound: usize },
}

struct Search<'a> {
    order: Vec<Vertex>,
    // Neighbours of order[i] that appear earlier in the order.
    earlier: Vec<Vec<usize>>,
    lists: &'a ListAssignment,
}

impl<'a> Search<'a> {
    fn new(g: &Graph, lists: &'a ListAssignment) -> Self {
        // Descending degree, ties by index: a speed choice only.
        let mut order: Vec<Vertex> = g.vertices().collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        let mut position = vec![0usize; g.n()];
        for (i, &v) in order.iter().enumerate() {
            position[v as usize] = i;
        }
        let earlier = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                g.neighbours(v)
                    .iter()
                    .map(|&u| position[u as usize])
                    .filter(|&j| j < i)
                    .collect()
            })
            .collect();
        Search {
            order,
            earlier,
            lists,
        }
    }

    fn find(&self, chosen: &mut Vec<Colour>) -> bool {
        let i = chosen.len();
        if i == self.order.len() {
            return true;
        }
        for c in mask_colours(self.lists.get(self.order[i])) {
            if self.earlier[i].iter().any(|&j| chosen[j] == c) {
                continue;
            }
            chosen.push(c);
            if self.find(chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    fn count(&self, chosen: &mut Vec<Colour>) -> u64 {
        let i = chosen.len();
        if i == self.order.len() {
            return 1;
        }
        let mut total = 0;
        for c in mask_colours(self.lists.get(self.order[i])) {
            if self.earlier[i].iter().any(|&j| chosen[j] == c) {
                continue;
            }
            chosen.push(c);
            total += self.count(chosen);
            chosen.pop();
        }
        total
    }
}

/// A list-respecting colouring, or `None` when no such colouring exists.
pub fn oracle_list_colour(
    g: &Graph,
    lists: &ListAssignment,
) -> Result<Option<Colouring>, OracleError> {
    oracle_list_colour_bounded(g, lists, SEARCH_BOUND)
}

pub fn oracle_list_colour_bounded(
    g: &Graph,
    lists: &ListAssignment,
    bound: usize,
) -> Result<Option<Colouring>, OracleError> {
    if g.n() > bound {
        return Err(OracleError::TooLarge { n: g.n(), bound });
    }
    let search = Search::new(g, lists);
    let mut chosen = Vec::with_capacity(g.n());
    if !search.find(&mut chosen) {
        return Ok(None);
    }
    let mut colouring = Colouring::empty(g.n());
    for (i, &v) in search.order.iter().enumerate() {
        colouring.set(v, chosen[i]);
    }
    debug_assert!(crate::lists::respects(&colouring, g, lists));
    Ok(Some(colouring))
}

/// Exact number of list-respecting total colourings.
pub fn count_colourings(g: &Graph, lists: &ListAssignment) -> Result<u64, OracleError> {
    count_colourings_bounded(g, lists, COUNT_BOUND)
}

pub fn count_colourings_bounded(
    g: &Graph,
    lists: &ListAssignment,
    bound: usize,
) -> Result<u64, OracleError> {
    if g.n() > bound {
        return Err(OracleError::TooLarge { n: g.n(), bound });
    }
    let search = Search::new(g, lists);
    let mut chosen = Vec::with_capacity(g.n());
    Ok(search.count(&mut chosen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lists::respects;

    #[test]
    fn triangle_with_forced_lists() {
        let g = Graph::complete(3);
        let lists = ListAssignment::from_masks(vec![0b001, 0b010, 0b100]).unwrap();
        let c = oracle_list_colour(&g, &lists).unwrap().unwrap();
        assert_eq!((c.get(0), c.get(1), c.get(2)), (Some(1), Some(2), Some(3)));
    }

    #[test]
    fn triangle_with_two_colours_fails() {
        let g = Graph::complete(3);
        let lists = ListAssignment::from_masks(vec![0b011; 3]).unwrap();
        assert_eq!(oracle_list_colour(&g, &lists).unwrap(), None);
    }

    #[test]
    fn petersen_is_three_colourable() {
        let g = crate::families::petersen();
        let lists = ListAssignment::full(10);
        let c = oracle_list_colour(&g, &lists).unwrap().unwrap();
        assert!(respects(&c, &g, &lists));
    }

    #[test]
    fn counts_match_hand_computations() {
        let k3 = Graph::complete(3);
        assert_eq!(count_colourings(&k3, &ListAssignment::full(3)).unwrap(), 6);

        let edge = Graph::new(2, &[(0, 1)]).unwrap();
        let two = ListAssignment::from_masks(vec![0b011, 0b011]).unwrap();
        assert_eq!(count_colourings(&edge, &two).unwrap(), 2);

        let c5 = Graph::cycle(5);
        assert_eq!(count_colourings(&c5, &ListAssignment::full(5)).unwrap(), 30);
    }

    #[test]
    fn bounds_are_enforced() {
        let g = Graph::empty(17);
        assert_eq!(
            count_colourings(&g, &ListAssignment::full(17)),
            Err(OracleError::TooLarge { n: 17, bound: 16 })
        );
        let g = Graph::empty(61);
        assert_eq!(
            oracle_list_colour(&g, &ListAssignment::full(61)),
            Err(OracleError::TooLarge { n: 61, bound: 60 })
        );
    }

    #[test]
    fn empty_list_means_no_colouring() {
        let g = Graph::empty(2);
        let lists = ListAssignment::from_masks(vec![0b000, 0b111]).unwrap();
        assert_eq!(oracle_list_colour(&g, &lists).unwrap(), None);
        assert_eq!(count_colourings(&g, &lists).unwrap(), 0);
    }
}
