use serde::{Deserialize, Serialize};

/// Set of bit patterns over the lowest `width` wires of a register.
///
/// A full basis index `i` belongs to the mask when `i & (2^width − 1)` does, so
/// a mask over data wires ignores whatever the ancilla wires hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisMask {
    width: usize,
    members: Vec<bool>,
    len: usize,
}

impl BasisMask {
    pub fn empty(width: usize) -> Self {
        BasisMask {
            width,
            members: vec![false; 1 << width],
            len: 0,
        }
    }

    pub fn from_predicate(width: usize, pred: impl Fn(usize) -> bool) -> Self {
        let members: Vec<bool> = (0..1usize << width).map(pred).collect();
        let len = members.iter().filter(|&&m| m).count();
        BasisMask {
            width,
            members,
            len,
        }
    }

    pub fn insert(&mut self, pattern: usize) {
        if !self.members[pattern] {
            self.members[pattern] = true;
            self.len += 1;
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Membership of a full basis index (only the low `width` bits are read).
    pub fn contains(&self, index: usize) -> bool {
        self.members[index & ((1 << self.width) - 1)]
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| i)
    }
}
