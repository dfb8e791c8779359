//! Exact transposition table over canonical keys.
//!
//! Keys are stored whole in an append-only byte arena, so membership is
//! exact and a stored key can be decoded back into a state. The hash index
//! holds a 32-bit key id and 32 hash bits per entry. The table is split
//! into independently locked shards; with a single shard, entry ids are
//! dense and follow insertion order.

use std::hash::Hasher;

use hashbrown::hash_table::{Entry, HashTable};
use parking_lot::Mutex;
use rustc_hash::FxHasher;

const NO_PARENT: u64 = u64::MAX;

/// Identifies a stored key: shard in the high 32 bits, index within the
/// shard in the low 32.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntryId(u64);

impl EntryId {
    pub fn new(shard: u32, index: u32) -> EntryId {
        EntryId(((shard as u64) << 32) | index as u64)
    }

    pub fn shard(self) -> usize {
        (self.0 >> 32) as usize
    }

    pub fn index(self) -> usize {
        self.0 as u32 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Insert {
    New(EntryId),
    Present(EntryId),
}

#[derive(Default)]
struct Shard {
    arena: Vec<u8>,
    ends: Vec<u64>,
    parents: Vec<u64>,
    index: HashTable<u64>,
}

impl Shard {
    fn key(&self, i: usize) -> &[u8] {
        let start = if i == 0 { 0 } else { self.ends[i - 1] as usize };
        &self.arena[start..self.ends[i] as usize]
    }
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub struct TranspositionTable {
    shards: Box<[Mutex<Shard>]>,
    shard_mask: u64,
    track_parents: bool,
}

impl TranspositionTable {
    /// `shards` is rounded up to a power of two.
    pub fn new(shards: usize, track_parents: bool) -> TranspositionTable {
        let n = shards.max(1).next_power_of_two();
        TranspositionTable {
            shards: (0..n).map(|_| Mutex::new(Shard::default())).collect(),
            shard_mask: n as u64 - 1,
            track_parents,
        }
    }

    pub fn tracks_parents(&self) -> bool {
        self.track_parents
    }

    /// Inserts `key` unless present. `parent` is recorded for new entries
    /// when the table tracks parents.
    pub fn insert(&self, key: &[u8], parent: Option<EntryId>) -> Insert {
        let mut h = FxHasher::default();
        h.write(key);
        let full = mix(h.finish());
        let shard_no = (full & self.shard_mask) as u32;
        let tag = full >> 32;
        let mut guard = self.shards[shard_no as usize].lock();
        let Shard {
            arena,
            ends,
            parents,
            index,
        } = &mut *guard;
        let lookup = |v: &u64| {
            if v & 0xffff_ffff != tag {
                return false;
            }
            let i = (v >> 32) as usize;
            let start = if i == 0 { 0 } else { ends[i - 1] as usize };
            &arena[start..ends[i] as usize] == key
        };
        match index.entry(mix(tag), lookup, |v| mix(v & 0xffff_ffff)) {
            Entry::Occupied(e) => Insert::Present(EntryId::new(shard_no, (e.get() >> 32) as u32)),
            Entry::Vacant(e) => {
                let i = ends.len();
                assert!(i < u32::MAX as usize, "transposition shard full");
                e.insert(((i as u64) << 32) | tag);
                arena.extend_from_slice(key);
                ends.push(arena.len() as u64);
                if self.track_parents {
                    parents.push(parent.map_or(NO_PARENT, |p| p.0));
                }
                Insert::New(EntryId::new(shard_no, i as u32))
            }
        }
    }

    pub fn contains(&self, key: &[u8]) -> bool {
        let mut h = FxHasher::default();
        h.write(key);
        let full = mix(h.finish());
        let tag = full >> 32;
        let guard = self.shards[(full & self.shard_mask) as usize].lock();
        guard
            .index
            .find(mix(tag), |v| {
                v & 0xffff_ffff == tag && guard.key((v >> 32) as usize) == key
            })
            .is_some()
    }

    /// Copies the key of `id` into `out`, replacing its contents.
    pub fn key_into(&self, id: EntryId, out: &mut Vec<u8>) {
        let guard = self.shards[id.shard()].lock();
        out.clear();
        out.extend_from_slice(guard.key(id.index()));
    }

    pub fn parent(&self, id: EntryId) -> Option<EntryId> {
        assert!(self.track_parents, "table does not track parents");
        let p = self.shards[id.shard()].lock().parents[id.index()];
        (p != NO_PARENT).then_some(EntryId(p))
    }

    pub fn len(&self) -> u64 {
        self.shards.iter().map(|s| s.lock().ends.len() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries in the first shard; the whole table when unsharded.
    pub fn first_shard_len(&self) -> u64 {
        self.shards[0].lock().ends.len() as u64
    }

    /// Approximate heap bytes held.
    pub fn memory_bytes(&self) -> u64 {
        self.shards
            .iter()
            .map(|s| {
                let s = s.lock();
                (s.arena.capacity() + 8 * s.ends.capacity() + 8 * s.parents.capacity()) as u64
                    + 9 * s.index.capacity() as u64
            })
            .sum()
    }
}
