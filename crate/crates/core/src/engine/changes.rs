use crate::model::{EdgeId, ElementId, ItemRef, Outcome};
use serde::Serialize;

/// What one rule application did. An id appears in at most one list.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ChangeSet {
    pub created_elements: Vec<ElementId>,
    pub merged_elements: Vec<ElementId>,
    /// Existing items that gained a container, multiplicity or new name.
    pub refined: Vec<ItemRef>,
    pub created_edges: Vec<EdgeId>,
    pub merged_edges: Vec<EdgeId>,
}

impl ChangeSet {
    pub fn record_element(&mut self, id: ElementId, outcome: Outcome) {
        let item = ItemRef::Element(id);
        if self.created_elements.contains(&id) || self.refined.contains(&item) {
            return;
        }
        match outcome {
            Outcome::Created => self.created_elements.push(id),
            Outcome::Refined => {
                self.merged_elements.retain(|m| *m != id);
                self.refined.push(item);
            }
            Outcome::Merged => {
                if !self.merged_elements.contains(&id) {
                    self.merged_elements.push(id);
                }
            }
        }
    }

    pub fn record_edge(&mut self, id: EdgeId, outcome: Outcome) {
        let item = ItemRef::Edge(id);
        if self.created_edges.contains(&id) || self.refined.contains(&item) {
            return;
        }
        match outcome {
            Outcome::Created => self.created_edges.push(id),
            Outcome::Refined => {
                self.merged_edges.retain(|m| *m != id);
                self.refined.push(item);
            }
            Outcome::Merged => {
                if !self.merged_edges.contains(&id) {
                    self.merged_edges.push(id);
                }
            }
        }
    }

    /// True when the application created or refined anything.
    pub fn changed(&self) -> bool {
        !self.created_elements.is_empty() || !self.created_edges.is_empty() || !self.refined.is_empty()
    }

    pub fn created(&self) -> usize {
        self.created_elements.len() + self.created_edges.len()
    }

    pub fn merged(&self) -> usize {
        self.merged_elements.len() + self.merged_edges.len()
    }

    /// Every item the application touched.
    pub fn targets(&self) -> Vec<ItemRef> {
        let mut out: Vec<ItemRef> = self
            .created_elements
            .iter()
            .chain(&self.merged_elements)
            .map(|id| ItemRef::Element(*id))
            .chain(self.created_edges.iter().chain(&self.merged_edges).map(|id| ItemRef::Edge(*id)))
            .chain(self.refined.iter().copied())
            .collect();
        out.sort();
        out
    }
}
