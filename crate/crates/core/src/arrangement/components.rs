use serde::Serialize;

use super::{bit, bits, Arrangement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", content = "length", rename_all = "kebab-case")]
pub enum ComponentShape {
    Isolated,
    /// The component is an induced cycle of the given length (at least 3).
    ChordlessCycle(usize),
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub lines: Vec<usize>,
    pub shape: ComponentShape,
}

impl Component {
    pub fn mask(&self) -> u64 {
        self.lines.iter().fold(0, |m, &i| m | bit(i))
    }
}

/// Connected components ordered by their smallest line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentDecomposition {
    pub components: Vec<Component>,
}

impl ComponentDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Lengths of the chordless-cycle components, in component order.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.components
            .iter()
            .filter_map(|c| match c.shape {
                ComponentShape::ChordlessCycle(len) => Some(len),
                _ => None,
            })
            .collect()
    }
}

pub fn components(a: &Arrangement) -> ComponentDecomposition {
    let mut unseen = a.all_mask();
    let mut out = Vec::new();
    while unseen != 0 {
        let start = unseen.trailing_zeros() as usize;
        let mut comp = bit(start);
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= a.neighbors(v);
            }
            frontier = next & !comp;
            comp |= next;
        }
        unseen &= !comp;
        out.push(Component { lines: bits(comp).collect(), shape: shape_of(a, comp) });
    }
    ComponentDecomposition { components: out }
}

/// Shape of a connected vertex set. A connected set whose induced degrees are
/// all exactly 2 is an induced cycle.
pub(crate) fn shape_of(a: &Arrangement, comp: u64) -> ComponentShape {
    let size = comp.count_ones() as usize;
    if size == 1 {
        return ComponentShape::Isolated;
    }
    if size >= 3 && bits(comp).all(|v| (a.neighbors(v) & comp).count_ones() == 2) {
        ComponentShape::ChordlessCycle(size)
    } else {
        ComponentShape::Other
    }
}
