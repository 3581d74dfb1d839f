use crate::family::FamilyDescriptor;
use crate::graph::{degeneracy, Graph};

/// Degeneracy, which never exceeds the treewidth and hence the pathwidth.
pub fn lower_bound(g: &Graph) -> usize {
    degeneracy(g)
}

/// Pathwidth of families with a known closed form; `None` otherwise.
pub fn closed_form(desc: &FamilyDescriptor) -> Option<usize> {
    match *desc {
        FamilyDescriptor::Complete { n } => Some(n.saturating_sub(1)),
        FamilyDescriptor::Grid { m, n } => Some(match m.min(n) {
            0 => return None,
            1 if m.max(n) == 1 => 0,
            1 => 1,
            k => k,
        }),
        FamilyDescriptor::Path { n } => Some(usize::from(n >= 2)),
        FamilyDescriptor::Cycle { n } if n >= 3 => Some(2),
        _ => None,
    }
}
