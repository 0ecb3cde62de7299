//! Anchored, greedy matching of a rule's source part.
//!
//! The anchor takes a single-occurrence item; the match then grows to the
//! right and then to the left, one item at a time. Each step only looks at
//! elements next to the previous one: members of a partition or region,
//! operations of a class, endpoints of an edge item, or otherwise anything
//! joined by an edge. Candidates are tried in creation order, forward edges
//! before backward ones.

use crate::dsl::{Arg, ElemItem, Item, ItemLetter, OccurrenceArg, Quant};
use crate::model::{
    Architecture, Attachment, Diagram, Edge, EdgeId, EdgeKind, Element, ElementId, ElementKind, Host, ItemRef,
};
use crate::table::DiagramLetter;
use serde::Serialize;
use std::fmt;

/// One matched occurrence of a source item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Element(ElementId),
    Edge(EdgeId),
    /// The `op`-th operation of a class.
    Member {
        class: ElementId,
        op: usize,
    },
}

impl Bound {
    pub fn item_ref(self) -> ItemRef {
        match self {
            Bound::Element(id) | Bound::Member { class: id, .. } => ItemRef::Element(id),
            Bound::Edge(id) => ItemRef::Edge(id),
        }
    }
}

/// Result of matching a source part around its anchor. `slots` holds the
/// occurrences bound to each source item, in item order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub diagram: DiagramLetter,
    pub anchor: ItemRef,
    pub slots: Vec<Vec<Bound>>,
}

impl Binding {
    /// All occurrences in item order.
    pub fn flat(&self) -> Vec<Bound> {
        self.slots.iter().flatten().copied().collect()
    }

    pub fn items(&self) -> Vec<ItemRef> {
        let mut out: Vec<ItemRef> = Vec::new();
        for b in self.flat() {
            let r = b.item_ref();
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }

    pub fn elements(&self) -> Vec<ElementId> {
        self.flat()
            .into_iter()
            .filter_map(|b| match b {
                Bound::Element(id) => Some(id),
                _ => None,
            })
            .collect()
    }

    pub fn anchor_element(&self) -> Option<ElementId> {
        match self.anchor {
            ItemRef::Element(id) => Some(id),
            ItemRef::Edge(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchFailure {
    /// 1-based position of the first source item that could not be bound.
    pub item: usize,
    pub letter: char,
    pub reason: String,
}

impl fmt::Display for MatchFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "source item {} (`{}`): {}", self.item, self.letter, self.reason)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchError {
    HostMissing,
    Failed(MatchFailure),
    /// The source part uses a construct the matcher does not support.
    Unsupported(String),
}

/// Locates the attachment's host in its diagram.
pub fn find_host(arch: &Architecture, att: &Attachment) -> Option<ItemRef> {
    let d = arch.diagram(att.host_diagram)?;
    match &att.host {
        Host::Element { kind, spec } => d
            .elements
            .iter()
            .find(|e| kind.is_none_or(|k| e.kind == k) && e.spec == *spec)
            .map(|e| ItemRef::Element(e.id)),
        Host::Edge { kind, from, to, label } => {
            let spec_of = |id| d.element(id).map(|e: &Element| &e.spec);
            d.edges
                .iter()
                .find(|e| {
                    e.kind == *kind
                        && label.as_ref().is_none_or(|l| e.label.as_ref() == Some(l))
                        && from.as_ref().is_none_or(|f| spec_of(e.from) == Some(f))
                        && to.as_ref().is_none_or(|t| spec_of(e.to) == Some(t))
                })
                .map(|e| ItemRef::Edge(e.id))
        }
    }
}

pub fn match_source(arch: &Architecture, att: &Attachment) -> Result<Binding, MatchError> {
    let anchor = find_host(arch, att).ok_or(MatchError::HostMissing)?;
    let source = att.rule.source();
    let mut items = Vec::new();
    for item in &source.items {
        match item {
            Item::Elem(e) => items.push(e),
            Item::Group(_) => return Err(MatchError::Unsupported("groups are not supported in a source part".into())),
        }
    }
    let d = arch.diagram(att.host_diagram).expect("host found");
    let m = Matcher { d, slots: items.iter().map(|i| Slot::new(i)).collect() };

    let mut first_failure = None;
    for (k, slot) in m.slots.iter().enumerate() {
        if slot.need != Need::One || !m.fits(anchor_bound(anchor), slot, 0) {
            continue;
        }
        match m.grow(k, anchor) {
            Ok(slots) => return Ok(Binding { diagram: d.letter, anchor, slots }),
            Err(f) => {
                first_failure.get_or_insert(f);
            }
        }
    }
    Err(MatchError::Failed(first_failure.unwrap_or_else(|| MatchFailure {
        item: 1,
        letter: items[0].letter.as_char(),
        reason: format!("anchor {} fits no single-occurrence item", arch.describe(anchor)),
    })))
}

fn anchor_bound(anchor: ItemRef) -> Bound {
    match anchor {
        ItemRef::Element(id) => Bound::Element(id),
        ItemRef::Edge(id) => Bound::Edge(id),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Need {
    One,
    Exactly(usize),
    Plus,
    Opt,
}

struct Slot<'a> {
    item: &'a ElemItem,
    args: Vec<OccurrenceArg<'a>>,
    need: Need,
}

impl<'a> Slot<'a> {
    fn new(item: &'a ElemItem) -> Self {
        let args = item.occurrence_args();
        let need = match (args.len(), item.quant) {
            (k, _) if k >= 2 => Need::Exactly(k),
            (_, Quant::Plus) => Need::Plus,
            (_, Quant::Opt) => Need::Opt,
            _ => Need::One,
        };
        Slot { item, args, need }
    }

    fn arg(&self, occurrence: usize) -> Option<OccurrenceArg<'a>> {
        match self.need {
            Need::Exactly(_) => self.args.get(occurrence).copied(),
            _ => self.args.first().copied(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dir {
    Right,
    Left,
}

/// Where the walk stands: on a bound element or member, or on an edge
/// whose far endpoint is the next element.
#[derive(Debug, Clone, Copy)]
enum Cursor {
    At(Bound),
    Via { far: ElementId },
}

struct Matcher<'a> {
    d: &'a Diagram,
    slots: Vec<Slot<'a>>,
}

impl<'a> Matcher<'a> {
    fn grow(&self, anchor_slot: usize, anchor: ItemRef) -> Result<Vec<Vec<Bound>>, MatchFailure> {
        let n = self.slots.len();
        let mut bound: Vec<Vec<Bound>> = vec![Vec::new(); n];
        let a = anchor_bound(anchor);
        bound[anchor_slot].push(a);
        let start = |dir| match (a, dir) {
            (Bound::Edge(id), Dir::Right) => Cursor::Via { far: self.d.edge(id).expect("anchor").to },
            (Bound::Edge(id), Dir::Left) => Cursor::Via { far: self.d.edge(id).expect("anchor").from },
            _ => Cursor::At(a),
        };

        let mut cursor = start(Dir::Right);
        for j in anchor_slot + 1..n {
            let (occ, next) = self.fill(j, cursor, Dir::Right, &bound)?;
            bound[j] = occ;
            cursor = next;
        }
        let mut cursor = start(Dir::Left);
        for j in (0..anchor_slot).rev() {
            let (occ, next) = self.fill(j, cursor, Dir::Left, &bound)?;
            bound[j] = occ;
            cursor = next;
        }
        Ok(bound)
    }

    fn fill(
        &self,
        j: usize,
        cursor: Cursor,
        dir: Dir,
        bound: &[Vec<Bound>],
    ) -> Result<(Vec<Bound>, Cursor), MatchFailure> {
        let slot = &self.slots[j];
        let used = |b: &Bound| bound.iter().flatten().any(|x| x == b);
        let cands: Vec<(Bound, Cursor)> =
            self.candidates(cursor, slot.item, dir).into_iter().filter(|(b, _)| !used(b)).collect();
        let fail = |reason: String| MatchFailure { item: j + 1, letter: slot.item.letter.as_char(), reason };

        let mut chosen: Vec<(Bound, Cursor)> = Vec::new();
        match slot.need {
            Need::One | Need::Opt => {
                if let Some(c) = cands.iter().find(|(b, _)| self.fits(*b, slot, 0)) {
                    chosen.push(*c);
                }
            }
            Need::Plus => {
                chosen.extend(cands.iter().filter(|(b, _)| self.fits(*b, slot, 0)).copied());
            }
            Need::Exactly(k) => {
                for occ in 0..k {
                    let hit =
                        cands.iter().find(|(b, _)| !chosen.iter().any(|(x, _)| x == b) && self.fits(*b, slot, occ));
                    match hit {
                        Some(c) => chosen.push(*c),
                        None => return Err(fail(format!("no neighbour satisfies argument {}", occ + 1))),
                    }
                }
            }
        }

        if chosen.is_empty() {
            if slot.need == Need::Opt || self.lenient_operation(cursor, slot.item) {
                return Ok((Vec::new(), cursor));
            }
            return Err(fail("no matching neighbour".into()));
        }
        let next = match dir {
            Dir::Right => chosen.last().expect("non-empty").1,
            Dir::Left => chosen[0].1,
        };
        Ok((chosen.into_iter().map(|(b, _)| b).collect(), next))
    }

    /// An `h` item next to a class without operations is satisfied by the
    /// class alone.
    fn lenient_operation(&self, cursor: Cursor, item: &ElemItem) -> bool {
        item.letter == ItemLetter::Element(ElementKind::Operation)
            && item.args.is_empty()
            && matches!(cursor, Cursor::At(Bound::Element(id))
                if self.d.element(id).is_some_and(|c| c.kind == ElementKind::Class && c.operations.is_empty()))
    }

    fn candidates(&self, cursor: Cursor, item: &ElemItem, dir: Dir) -> Vec<(Bound, Cursor)> {
        let d = self.d;
        let at = |b: Bound| (b, Cursor::At(b));
        let here = match cursor {
            Cursor::Via { far } => {
                return if item.letter.is_edge() || d.element(far).is_none() {
                    Vec::new()
                } else {
                    vec![at(Bound::Element(far))]
                };
            }
            Cursor::At(Bound::Edge(_)) => return Vec::new(),
            Cursor::At(Bound::Member { class, .. }) => class,
            Cursor::At(Bound::Element(id)) => id,
        };
        let Some(prev) = d.element(here) else { return Vec::new() };

        if item.letter.is_edge() {
            return self
                .incident(here, dir)
                .into_iter()
                .map(|e| {
                    let far = if e.from == here { e.to } else { e.from };
                    (Bound::Edge(e.id), Cursor::Via { far })
                })
                .collect();
        }
        let kind = item.letter.element_kind().expect("element item");
        if let Cursor::At(Bound::Member { class, .. }) = cursor {
            if kind == ElementKind::Class {
                return vec![at(Bound::Element(class))];
            }
        }
        if kind == ElementKind::Operation {
            if prev.kind != ElementKind::Class {
                return Vec::new();
            }
            return (0..prev.operations.len()).map(|op| at(Bound::Member { class: here, op })).collect();
        }
        if prev.kind.is_container() && !kind.is_container() {
            return d.contained_in(here).map(|e| at(Bound::Element(e.id))).collect();
        }
        if kind.is_container() {
            return prev.container.map(|c| vec![at(Bound::Element(c))]).unwrap_or_default();
        }
        let mut out: Vec<(Bound, Cursor)> = Vec::new();
        for e in self.incident(here, dir) {
            let other = if e.from == here { e.to } else { e.from };
            if d.element(other).is_some() && !out.iter().any(|(b, _)| *b == Bound::Element(other)) {
                out.push(at(Bound::Element(other)));
            }
        }
        out
    }

    /// Edges touching `id`, those pointing in the walking direction first,
    /// each group in creation order.
    fn incident(&self, id: ElementId, dir: Dir) -> Vec<&'a Edge> {
        let outgoing = self.d.edges_from(id);
        let incoming = self.d.edges_to(id);
        match dir {
            Dir::Right => outgoing.chain(incoming).collect(),
            Dir::Left => incoming.chain(outgoing).collect(),
        }
    }

    fn fits(&self, b: Bound, slot: &Slot<'_>, occurrence: usize) -> bool {
        let item = slot.item;
        let arg = slot.arg(occurrence);
        match b {
            Bound::Element(id) => {
                let Some(el) = self.d.element(id) else { return false };
                element_fits(self.d.letter, el, item, arg)
            }
            Bound::Member { class, op } => {
                let Some(spec) = self.d.element(class).and_then(|c| c.operations.get(op)) else {
                    return false;
                };
                item.letter == ItemLetter::Element(ElementKind::Operation)
                    && match arg {
                        Some(OccurrenceArg::Name(n)) => n.constrains(spec),
                        Some(OccurrenceArg::State(_)) => false,
                        None => true,
                    }
            }
            Bound::Edge(id) => self.d.edge(id).is_some_and(|e| edge_fits(e, item)),
        }
    }
}

pub(crate) fn element_fits(
    letter: DiagramLetter,
    el: &Element,
    item: &ElemItem,
    arg: Option<OccurrenceArg<'_>>,
) -> bool {
    let kind_ok = match item.letter {
        ItemLetter::Element(k) => {
            el.kind == k
                // The process decomposition has no events: its inputs are
                // instances, so `e` stands for those.
                || (letter == DiagramLetter::R && k == ElementKind::Event && el.kind == ElementKind::Instance)
        }
        _ => false,
    };
    let stereo_ok = item.stereotype.as_ref().is_none_or(|s| el.stereotype.as_ref() == Some(s));
    let arg_ok = match arg {
        None => true,
        Some(OccurrenceArg::Name(n)) => n.constrains(&el.spec),
        Some(OccurrenceArg::State(s)) => el.spec.state.as_deref() == Some(s),
    };
    kind_ok && stereo_ok && arg_ok
}

fn edge_fits(e: &Edge, item: &ElemItem) -> bool {
    let kind_ok = match item.letter {
        ItemLetter::Link => match item.stereotype.as_deref() {
            None => true,
            Some(st) => EdgeKind::from_flow_stereotype(st) == Some(e.kind),
        },
        ItemLetter::Dependency => e.kind == EdgeKind::Dependency,
        ItemLetter::Element(ElementKind::Message) => e.kind == EdgeKind::Message,
        ItemLetter::Element(ElementKind::Transition) => e.kind == EdgeKind::Transition,
        ItemLetter::Element(_) => false,
    };
    kind_ok
        && item.args.iter().all(|a| match a {
            Arg::Multiplicity(m) => e.multiplicity.as_ref() == Some(m),
            Arg::Name(n) => {
                n.name.as_ref().is_none_or(|l| e.label.as_ref() == Some(l))
                    && n.classifier.as_ref().is_none_or(|c| e.returns.as_ref() == Some(c))
            }
            Arg::States(_) | Arg::Pattern(_) => true,
        })
}
