//! Hypernym taxonomy over a loaded database.
//!
//! Only `@` and `@i` pointers become edges, so adjectives and adverbs are
//! isolated nodes. Distances are counted in edges. The distance between two
//! synsets is the shortest *ancestral* path: up from each side to one shared
//! ancestor, never zigzagging through unrelated branches.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::wndb::{PartOfSpeech, SynsetId, WordNetDatabase};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TaxonomyError {
    #[error("unknown synset {0}")]
    UnknownSynset(SynsetId),
    #[error("hypernym cycle through {}", format_cycle(.0))]
    Cycle(Vec<SynsetId>),
}

fn format_cycle(ids: &[SynsetId]) -> String {
    ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" -> ")
}

/// Dense index of a synset inside a [`TaxonomyGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Minimal up-distance from an origin synset to each of its ancestors,
/// the origin itself included at distance zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AncestorMap {
    origin: NodeId,
    /// Sorted by node.
    entries: Vec<(NodeId, u32)>,
}

impl AncestorMap {
    pub fn origin(&self) -> NodeId {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, node: NodeId) -> Option<u32> {
        self.entries
            .binary_search_by_key(&node, |&(n, _)| n)
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, u32)> + '_ {
        self.entries.iter().copied()
    }

    /// Every common ancestor with its summed path length.
    pub fn common<'a>(&'a self, other: &'a AncestorMap) -> impl Iterator<Item = (NodeId, u32)> + 'a {
        let (mut i, mut j) = (0, 0);
        std::iter::from_fn(move || {
            while i < self.entries.len() && j < other.entries.len() {
                let (a, da) = self.entries[i];
                let (b, db) = other.entries[j];
                match a.cmp(&b) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        i += 1;
                        j += 1;
                        return Some((a, da + db));
                    }
                }
            }
            None
        })
    }

    /// Shortest ancestral path length between the two origins.
    pub fn distance_to(&self, other: &AncestorMap) -> Option<u32> {
        if self.origin == other.origin {
            return Some(0);
        }
        self.common(other).map(|(_, d)| d).min()
    }
}

pub struct TaxonomyGraph {
    ids: Vec<SynsetId>,
    node_of: HashMap<SynsetId, NodeId>,
    up: Vec<Vec<NodeId>>,
    down: Vec<Vec<NodeId>>,
    /// Roots per taxonomic part of speech (noun, verb).
    roots: [Vec<NodeId>; 2],
    depth: Vec<Option<u32>>,
    max_depth: [Option<u32>; 2],
    cycles: Vec<Vec<SynsetId>>,
    cache: RwLock<HashMap<NodeId, Arc<AncestorMap>>>,
}

impl std::fmt::Debug for TaxonomyGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TaxonomyGraph")
            .field("nodes", &self.ids.len())
            .field("noun_roots", &self.roots[0].len())
            .field("verb_roots", &self.roots[1].len())
            .field("max_depth", &self.max_depth)
            .finish()
    }
}

fn taxonomic_slot(pos: PartOfSpeech) -> Option<usize> {
    match pos {
        PartOfSpeech::Noun => Some(0),
        PartOfSpeech::Verb => Some(1),
        _ => None,
    }
}

/// Offset 0 never holds a record (every data file starts with its license
/// header), so it is free to name the virtual verb root.
pub const VIRTUAL_VERB_ROOT: SynsetId = SynsetId {
    pos: PartOfSpeech::Verb,
    offset: 0,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GraphOptions {
    /// Adds one synthetic synset above every verb root so any two verbs
    /// connect. Verb depths then count the extra edge.
    pub virtual_verb_root: bool,
    /// Keeps going when up edges form cycles instead of failing. Ancestor
    /// maps are breadth-first closures, so distances stay well defined;
    /// synsets whose every upward path ends in a cycle have no depth.
    pub allow_cycles: bool,
}

impl GraphOptions {
    /// Settings for released WordNet data: verb root on, cycles tolerated.
    pub fn wordnet() -> Self {
        GraphOptions {
            virtual_verb_root: true,
            allow_cycles: true,
        }
    }
}

impl TaxonomyGraph {
    /// Builds the graph exactly as the data describes it, refusing
    /// hypernym cycles.
    pub fn build(db: &WordNetDatabase) -> Result<Self, TaxonomyError> {
        Self::build_with(db, GraphOptions::default())
    }

    pub fn build_with(db: &WordNetDatabase, options: GraphOptions) -> Result<Self, TaxonomyError> {
        let mut ids: Vec<SynsetId> = db.synsets().iter().map(|s| s.id).collect();
        let mut up: Vec<Vec<NodeId>> = vec![Vec::new(); ids.len()];
        let mut down: Vec<Vec<NodeId>> = vec![Vec::new(); ids.len()];
        let mut node_of: HashMap<SynsetId, NodeId> =
            ids.iter().enumerate().map(|(i, &id)| (id, NodeId(i as u32))).collect();
        for (i, synset) in db.synsets().iter().enumerate() {
            for target in synset.hypernyms() {
                let t = node_of[&target];
                if !up[i].contains(&t) {
                    up[i].push(t);
                    down[t.index()].push(NodeId(i as u32));
                }
            }
        }

        let cycles = find_cycles(&ids, &up);
        if let (false, Some(cycle)) = (options.allow_cycles, cycles.first()) {
            return Err(TaxonomyError::Cycle(cycle.clone()));
        }

        if options.virtual_verb_root {
            let root = NodeId(ids.len() as u32);
            let verb_roots: Vec<usize> = (0..ids.len())
                .filter(|&i| ids[i].pos == PartOfSpeech::Verb && up[i].is_empty())
                .collect();
            for &i in &verb_roots {
                up[i].push(root);
            }
            down.push(verb_roots.into_iter().map(|i| NodeId(i as u32)).collect());
            up.push(Vec::new());
            ids.push(VIRTUAL_VERB_ROOT);
            node_of.insert(VIRTUAL_VERB_ROOT, root);
        }

        let mut roots: [Vec<NodeId>; 2] = [Vec::new(), Vec::new()];
        for (i, id) in ids.iter().enumerate() {
            if let Some(slot) = taxonomic_slot(id.pos) {
                if up[i].is_empty() {
                    roots[slot].push(NodeId(i as u32));
                }
            }
        }

        // Multi-source BFS down from the roots gives each synset its minimal
        // distance to any root.
        let mut depth = vec![None; ids.len()];
        let mut max_depth = [None, None];
        for slot_roots in &roots {
            let mut queue: VecDeque<NodeId> = slot_roots.iter().copied().collect();
            for r in slot_roots {
                depth[r.index()] = Some(0);
            }
            while let Some(n) = queue.pop_front() {
                let d = depth[n.index()].unwrap();
                for &c in &down[n.index()] {
                    if depth[c.index()].is_none() {
                        depth[c.index()] = Some(d + 1);
                        queue.push_back(c);
                    }
                }
            }
        }

        // The maximum uses the longest root path of each synset, so twice it
        // bounds every ancestral distance even under multiple inheritance.
        // Synsets at or below a cycle are left out.
        let mut pending: Vec<usize> = up.iter().map(Vec::len).collect();
        let mut height = vec![0u32; ids.len()];
        let mut queue: VecDeque<NodeId> = roots.iter().flatten().copied().collect();
        while let Some(n) = queue.pop_front() {
            let h = height[n.index()];
            if let Some(slot) = taxonomic_slot(ids[n.index()].pos) {
                max_depth[slot] = Some(max_depth[slot].map_or(h, |m: u32| m.max(h)));
            }
            for &c in &down[n.index()] {
                height[c.index()] = height[c.index()].max(h + 1);
                pending[c.index()] -= 1;
                if pending[c.index()] == 0 {
                    queue.push_back(c);
                }
            }
        }

        Ok(TaxonomyGraph {
            ids,
            node_of,
            up,
            down,
            roots,
            depth,
            max_depth,
            cycles,
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// Hypernym cycles found at build time, each listed from its first
    /// member back to itself. Empty unless cycles were allowed.
    pub fn cycles(&self) -> &[Vec<SynsetId>] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn node(&self, id: SynsetId) -> Result<NodeId, TaxonomyError> {
        self.node_of.get(&id).copied().ok_or(TaxonomyError::UnknownSynset(id))
    }

    /// Display name such as `dog.n.01`; the virtual verb root is `*root*.v.00`.
    pub fn name(&self, db: &WordNetDatabase, id: SynsetId) -> String {
        if id == VIRTUAL_VERB_ROOT && self.node_of.contains_key(&id) {
            return "*root*.v.00".to_string();
        }
        db.display_name(id).unwrap_or_else(|| id.to_string())
    }

    pub fn synset_id(&self, node: NodeId) -> SynsetId {
        self.ids[node.index()]
    }

    pub fn hypernyms(&self, node: NodeId) -> &[NodeId] {
        &self.up[node.index()]
    }

    pub fn hyponyms(&self, node: NodeId) -> &[NodeId] {
        &self.down[node.index()]
    }

    /// Synsets without hypernyms. Empty for adjectives and adverbs, which
    /// have no taxonomy.
    pub fn roots(&self, pos: PartOfSpeech) -> Vec<SynsetId> {
        taxonomic_slot(pos)
            .map(|s| self.roots[s].iter().map(|&n| self.synset_id(n)).collect())
            .unwrap_or_default()
    }

    /// Longest root path over all synsets of a part of speech.
    pub fn max_depth(&self, pos: PartOfSpeech) -> Option<u32> {
        taxonomic_slot(pos).and_then(|s| self.max_depth[s])
    }

    pub fn node_depth(&self, node: NodeId) -> Option<u32> {
        self.depth[node.index()]
    }

    /// Minimal up-distance from a synset to any root of its part of speech.
    pub fn depth(&self, id: SynsetId) -> Result<Option<u32>, TaxonomyError> {
        Ok(self.node_depth(self.node(id)?))
    }

    /// Breadth-first closure over hypernym edges, without touching the cache.
    pub fn compute_ancestor_map(&self, origin: NodeId) -> AncestorMap {
        let mut entries = vec![(origin, 0u32)];
        let mut seen = HashSet::from([origin]);
        let mut head = 0;
        while head < entries.len() {
            let (n, d) = entries[head];
            head += 1;
            for &p in &self.up[n.index()] {
                if seen.insert(p) {
                    entries.push((p, d + 1));
                }
            }
        }
        entries.sort_unstable_by_key(|&(n, _)| n);
        AncestorMap { origin, entries }
    }

    /// Memoized ancestor map. Safe to call from several threads.
    pub fn ancestors(&self, origin: NodeId) -> Arc<AncestorMap> {
        if let Some(m) = self.cache.read().unwrap().get(&origin) {
            return Arc::clone(m);
        }
        let map = Arc::new(self.compute_ancestor_map(origin));
        self.cache.write().unwrap().entry(origin).or_insert(map).clone()
    }

    pub fn ancestor_map(&self, id: SynsetId) -> Result<Arc<AncestorMap>, TaxonomyError> {
        Ok(self.ancestors(self.node(id)?))
    }

    pub fn cached_maps(&self) -> usize {
        self.cache.read().unwrap().len()
    }

    pub fn node_distance(&self, a: NodeId, b: NodeId) -> Option<u32> {
        if a == b {
            return Some(0);
        }
        self.ancestors(a).distance_to(&self.ancestors(b))
    }

    /// Length in edges of the shortest ancestral path, `None` when the two
    /// synsets share no ancestor (always the case across parts of speech).
    pub fn shortest_ancestral_distance(&self, a: SynsetId, b: SynsetId) -> Result<Option<u32>, TaxonomyError> {
        Ok(self.node_distance(self.node(a)?, self.node(b)?))
    }

    pub fn node_lcs(&self, a: NodeId, b: NodeId) -> Option<NodeId> {
        let (ma, mb) = (self.ancestors(a), self.ancestors(b));
        ma.common(&mb)
            .min_by(|&(x, dx), &(y, dy)| {
                dx.cmp(&dy)
                    .then_with(|| self.node_depth(y).cmp(&self.node_depth(x)))
                    .then_with(|| self.synset_id(x).offset.cmp(&self.synset_id(y).offset))
            })
            .map(|(n, _)| n)
    }

    /// Common ancestor on the shortest ancestral path. Ties go to the deeper
    /// ancestor, then to the lower offset.
    pub fn least_common_subsumer(&self, a: SynsetId, b: SynsetId) -> Result<Option<SynsetId>, TaxonomyError> {
        Ok(self.node_lcs(self.node(a)?, self.node(b)?).map(|n| self.synset_id(n)))
    }
}

/// One cycle per strongly connected tangle of up edges, each listed from
/// its first member back to itself.
fn find_cycles(ids: &[SynsetId], up: &[Vec<NodeId>]) -> Vec<Vec<SynsetId>> {
    // Kahn's algorithm on the up edges; whatever survives sits on or above a cycle.
    let mut indegree = vec![0usize; ids.len()];
    for edges in up {
        for e in edges {
            indegree[e.index()] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..ids.len()).filter(|&i| indegree[i] == 0).collect();
    while let Some(n) = queue.pop() {
        for e in &up[n] {
            indegree[e.index()] -= 1;
            if indegree[e.index()] == 0 {
                queue.push(e.index());
            }
        }
    }

    // Walk up through leftover nodes until one repeats. A walk that runs
    // into an earlier walk has nothing new to report.
    let mut cycles = Vec::new();
    let mut seen = vec![false; ids.len()];
    for start in 0..ids.len() {
        if indegree[start] == 0 || seen[start] {
            continue;
        }
        let mut path = vec![start];
        let mut pos_in_path = HashMap::from([(start, 0usize)]);
        seen[start] = true;
        let mut cur = start;
        loop {
            let next = up[cur]
                .iter()
                .map(|n| n.index())
                .find(|&n| indegree[n] > 0)
                .expect("leftover node keeps a leftover parent");
            if let Some(&at) = pos_in_path.get(&next) {
                let mut cycle: Vec<SynsetId> = path[at..].iter().map(|&i| ids[i]).collect();
                cycle.push(ids[next]);
                cycles.push(cycle);
                break;
            }
            if seen[next] {
                break;
            }
            seen[next] = true;
            pos_in_path.insert(next, path.len());
            path.push(next);
            cur = next;
        }
    }
    cycles
}
