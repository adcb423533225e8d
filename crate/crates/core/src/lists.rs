//! Palette-`{1,2,3}` list assignments, colourings and precolourings.
//!
//! A list is a 3-bit mask (bit `i` = colour `i+1`), so whole assignments are
//! byte vectors with value semantics: propagation branches clone the
//! assignment and never interfere.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// A colour in `1..=3`.
pub type Colour = u8;

/// 3-bit subset of the palette.
pub type ColourMask = u8;

pub const FULL_MASK: ColourMask = 0b111;
pub const PALETTE: [Colour; 3] = [1, 2, 3];

#[inline]
pub fn colour_bit(c: Colour) -> ColourMask {
    debug_assert!((1..=3).contains(&c));
    1 << (c - 1)
}

#[inline]
pub fn mask_contains(mask: ColourMask, c: Colour) -> bool {
    mask & colour_bit(c) != 0
}

#[inline]
pub fn mask_size(mask: ColourMask) -> u32 {
    (mask & FULL_MASK).count_ones()
}

/// Colours of a mask in ascending order.
pub fn mask_colours(mask: ColourMask) -> impl Iterator<Item = Colour> {
    PALETTE.into_iter().filter(move |&c| mask_contains(mask, c))
}

/// The single colour of a singleton mask.
#[inline]
pub fn mask_singleton(mask: ColourMask) -> Option<Colour> {
    if mask_size(mask) == 1 {
        Some(mask.trailing_zeros() as Colour + 1)
    } else {
        None
    }
}

/// Renders a mask as `{1,3}`.
pub fn mask_to_string(mask: ColourMask) -> String {
    let inner: Vec<String> = mask_colours(mask).map(|c| c.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ListError {
    #[error("precolouring domain has {size} vertices, over the configured bound {bound}")]
    DomainTooLarge { size: usize, bound: usize },
    #[error("mask {0:#b} is not a subset of the palette")]
    BadMask(ColourMask),
}

/// Per-vertex admissible-colour sets. Empty lists are representable;
/// the propagation layer detects them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListAssignment {
    masks: Vec<ColourMask>,
}

impl ListAssignment {
    /// Every list `{1,2,3}`.
    pub fn full(n: usize) -> Self {
        ListAssignment {
            masks: vec![FULL_MASK; n],
        }
    }

    pub fn from_masks(masks: Vec<ColourMask>) -> Result<Self, ListError> {
        if let Some(&m) = masks.iter().find(|&&m| m & !FULL_MASK != 0) {
            return Err(ListError::BadMask(m));
        }
        Ok(ListAssignment { masks })
    }

    pub fn n(&self) -> usize {
        self.masks.len()
    }

    #[inline]
    pub fn get(&self, v: Vertex) -> ColourMask {
        self.masks[v as usize]
    }

    #[inline]
    pub fn set(&mut self, v: Vertex, mask: ColourMask) {
        debug_assert_eq!(mask & !FULL_MASK, 0);
        self.masks[v as usize] = mask;
    }

    #[inline]
    pub fn size(&self, v: Vertex) -> u32 {
        mask_size(self.get(v))
    }

    pub fn masks(&self) -> &[ColourMask] {
        &self.masks
    }

    /// True iff every list here is a subset of the corresponding list in
    /// `other`. Propagation only ever shrinks lists.
    pub fn refines(&self, other: &ListAssignment) -> bool {
        self.masks
            .iter()
            .zip(&other.masks)
            .all(|(a, b)| a & !b == 0)
    }

    /// Total list mass; each reduction step strictly decreases it.
    pub fn total_size(&self) -> u32 {
        self.masks.iter().map(|&m| mask_size(m)).sum()
    }
}

impl fmt::Display for ListAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, &m) in self.masks.iter().enumerate() {
            if v > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}:{}", mask_to_string(m))?;
        }
        Ok(())
    }
}

/// A (possibly partial) vertex colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    colours: Vec<Option<Colour>>,
}

impl Colouring {
    pub fn empty(n: usize) -> Self {
        Colouring {
            colours: vec![None; n],
        }
    }

    pub fn from_total(colours: Vec<Colour>) -> Self {
        Colouring {
            colours: colours.into_iter().map(Some).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.colours.len()
    }

    #[inline]
    pub fn get(&self, v: Vertex) -> Option<Colour> {
        self.colours[v as usize]
    }

    pub fn set(&mut self, v: Vertex, c: Colour) {
        debug_assert!((1..=3).contains(&c));
        self.colours[v as usize] = Some(c);
    }

    pub fn unset(&mut self, v: Vertex) {
        self.colours[v as usize] = None;
    }

    pub fn is_total(&self) -> bool {
        self.colours.iter().all(|c| c.is_some())
    }

    /// Proper on its domain: no edge with both endpoints coloured alike.
    pub fn is_proper_on(&self, g: &Graph) -> bool {
        g.edges()
            .iter()
            .all(|&(u, v)| match (self.get(u), self.get(v)) {
                (Some(a), Some(b)) => a != b,
                _ => true,
            })
    }
}

impl fmt::Display for Colouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, c) in self.colours.iter().enumerate() {
            if v > 0 {
                write!(f, " ")?;
            }
            match c {
                Some(c) => write!(f, "{c}")?,
                None => write!(f, "-")?,
            }
        }
        Ok(())
    }
}

/// True iff `c` is total, proper on `g`, and picks from `lists` everywhere.
pub fn respects(c: &Colouring, g: &Graph, lists: &ListAssignment) -> bool {
    if c.n() != g.n() || !c.is_total() {
        return false;
    }
    if !g
        .vertices()
        .all(|v| mask_contains(lists.get(v), c.get(v).unwrap()))
    {
        return false;
    }
    c.is_proper_on(g)
}

/// A proper, list-respecting colouring of a chosen vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precolouring {
    pairs: Vec<(Vertex, Colour)>,
}

impl Precolouring {
    pub fn new(mut pairs: Vec<(Vertex, Colour)>) -> Self {
        pairs.sort_unstable_by_key(|&(v, _)| v);
        Precolouring { pairs }
    }

    pub fn pairs(&self) -> &[(Vertex, Colour)] {
        &self.pairs
    }

    pub fn domain(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.pairs.iter().map(|&(v, _)| v)
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl fmt::Display for Precolouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(v, c)| format!("{v}={c}")).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Default bound on the precoloured-set size; every driver in this crate
/// uses sets of at most 7 vertices.
pub const DEFAULT_DOMAIN_BOUND: usize = 8;

/// All proper, list-respecting colourings of `G[n0]`, in lexicographic
/// order of the colour vector (domain sorted ascending).
///
/// The count is at most `3^|n0|`; `n0` larger than `bound` is rejected.
pub fn enumerate_promising(
    g: &Graph,
    lists: &ListAssignment,
    n0: &[Vertex],
    bound: usize,
) -> Result<Vec<Precolouring>, ListError> {
    let mut domain: Vec<Vertex> = n0.to_vec();
    domain.sort_unstable();
    domain.dedup();
    if domain.len() > bound {
        return Err(ListError::DomainTooLarge {
            size: domain.len(),
            bound,
        });
    }

    // Earlier-position neighbours inside the domain, for the properness check.
    let earlier: Vec<Vec<usize>> = domain
        .iter()
        .enumerate()
        .map(|(i, &v)| (0..i).filter(|&j| g.has_edge(v, domain[j])).collect())
        .collect();

    let mut out = Vec::new();
    let mut chosen: Vec<Colour> = Vec::with_capacity(domain.len());
    fn rec(
        domain: &[Vertex],
        lists: &ListAssignment,
        earlier: &[Vec<usize>],
        chosen: &mut Vec<Colour>,
        out: &mut Vec<Precolouring>,
    ) {
        let i = chosen.len();
        if i == domain.len() {
            out.push(Precolouring::new(
                domain.iter().copied().zip(chosen.iter().copied()).collect(),
            ));
            return;
        }
        for c in mask_colours(lists.get(domain[i])) {
            if earlier[i].iter().any(|&j| chosen[j] == c) {
                continue;
            }
            chosen.push(c);
            rec(domain, lists, earlier, chosen, out);
            chosen.pop();
        }
    }
    rec(&domain, lists, &earlier, &mut chosen, &mut out);
    Ok(out)
}

/// New assignment with singleton lists on the precoloured set and the
/// original lists elsewhere. The input is untouched.
pub fn restrict_to_precolouring(lists: &ListAssignment, pre: &Precolouring) -> ListAssignment {
    let mut out = lists.clone();
    for &(v, c) in pre.pairs() {
        debug_assert!(
            mask_contains(lists.get(v), c),
            "precolouring must respect the lists"
        );
        out.set(v, colour_bit(c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_helpers() {
        assert_eq!(mask_size(FULL_MASK), 3);
        assert_eq!(mask_singleton(0b010), Some(2));
        assert_eq!(mask_singleton(0b011), None);
        assert_eq!(mask_colours(0b101).collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(mask_to_string(0b101), "{1,3}");
        assert_eq!(mask_to_string(0), "{}");
    }

    #[test]
    fn respects_on_triangle() {
        let g = Graph::complete(3);
        let full = ListAssignment::full(3);
        assert!(respects(&Colouring::from_total(vec![1, 2, 3]), &g, &full));
        assert!(!respects(&Colouring::from_total(vec![1, 1, 2]), &g, &full));
    }

    #[test]
    fn respects_checks_lists() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let lists = ListAssignment::from_masks(vec![0b110, 0b011]).unwrap(); // {2,3}, {1,2}
        assert!(!respects(&Colouring::from_total(vec![1, 2]), &g, &lists));
        assert!(respects(&Colouring::from_total(vec![3, 2]), &g, &lists));
    }

    #[test]
    fn promising_single_vertex() {
        let g = Graph::empty(1);
        let lists = ListAssignment::from_masks(vec![0b011]).unwrap(); // {1,2}
        let pre = enumerate_promising(&g, &lists, &[0], DEFAULT_DOMAIN_BOUND).unwrap();
        assert_eq!(pre.len(), 2);
    }

    #[test]
    fn promising_triangle_counts_proper_colourings() {
        let g = Graph::complete(3);
        let lists = ListAssignment::full(3);
        let pre = enumerate_promising(&g, &lists, &[0, 1, 2], DEFAULT_DOMAIN_BOUND).unwrap();
        assert_eq!(pre.len(), 6);
    }

    #[test]
    fn promising_c5_matches_chromatic_polynomial() {
        let g = Graph::cycle(5);
        let lists = ListAssignment::full(5);
        let n0: Vec<Vertex> = (0..5).collect();
        let pre = enumerate_promising(&g, &lists, &n0, DEFAULT_DOMAIN_BOUND).unwrap();
        assert_eq!(pre.len(), 30);
    }

    #[test]
    fn promising_respects_domain_bound() {
        let g = Graph::empty(9);
        let lists = ListAssignment::full(9);
        let n0: Vec<Vertex> = (0..9).collect();
        assert_eq!(
            enumerate_promising(&g, &lists, &n0, DEFAULT_DOMAIN_BOUND),
            Err(ListError::DomainTooLarge { size: 9, bound: 8 })
        );
    }

    #[test]
    fn restriction_fixes_domain_only() {
        let lists = ListAssignment::full(3);
        let pre = Precolouring::new(vec![(1, 2)]);
        let out = restrict_to_precolouring(&lists, &pre);
        assert_eq!(out.get(0), FULL_MASK);
        assert_eq!(out.get(1), 0b010);
        assert_eq!(out.get(2), FULL_MASK);
        assert_eq!(lists.get(1), FULL_MASK);
    }

    #[test]
    fn empty_restriction_is_identity() {
        let lists = ListAssignment::full(2);
        let out = restrict_to_precolouring(&lists, &Precolouring::new(vec![]));
        assert_eq!(out, lists);
    }
}
