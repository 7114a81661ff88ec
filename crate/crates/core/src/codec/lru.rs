//! Fixed-capacity lookup table with least-recently-used id reuse.
//!
//! Entries live in a slot array indexed by id and threaded on an intrusive
//! doubly-linked recency list, so hit, insert and evict are all O(1).

use rustc_hash::FxHashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LookupEvent {
    /// The value was present; its recency was refreshed.
    Hit,
    /// The value got an id that was never used before.
    New,
    /// The least-recently-used entry's id was reassigned to the value.
    Evicted,
}

const NIL: u32 = 0;

#[derive(Debug, Clone)]
struct Slot {
    value: Box<str>,
    prev: u32,
    next: u32,
}

#[derive(Debug, Clone)]
pub struct LruLookup {
    capacity: u32,
    index: FxHashMap<Box<str>, u32>,
    // slots[0] is an unused placeholder so ids index directly.
    slots: Vec<Slot>,
    // least recently used
    head: u32,
    // most recently used
    tail: u32,
}

impl LruLookup {
    /// Creates an empty table.
    ///
    /// # Panics
    /// If `capacity` is zero.
    pub fn new(capacity: u32) -> Self {
        assert!(capacity > 0, "lookup capacity must be positive");
        LruLookup {
            capacity,
            index: FxHashMap::default(),
            slots: vec![Slot {
                value: Box::from(""),
                prev: NIL,
                next: NIL,
            }],
            head: NIL,
            tail: NIL,
        }
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Returns the id for `value`, assigning one if needed. The returned id
    /// maps to `value` and is the most recently used afterwards.
    pub fn get_or_insert(&mut self, value: &str) -> (u32, LookupEvent) {
        if let Some(&id) = self.index.get(value) {
            self.touch(id);
            return (id, LookupEvent::Hit);
        }
        let assigned = (self.slots.len() - 1) as u32;
        if assigned < self.capacity {
            let id = assigned + 1;
            self.slots.push(Slot {
                value: Box::from(value),
                prev: NIL,
                next: NIL,
            });
            self.index.insert(Box::from(value), id);
            self.link_tail(id);
            return (id, LookupEvent::New);
        }
        let id = self.head;
        self.unlink(id);
        let old = std::mem::replace(&mut self.slots[id as usize].value, Box::from(value));
        self.index.remove(&old);
        self.index.insert(Box::from(value), id);
        self.link_tail(id);
        (id, LookupEvent::Evicted)
    }

    /// Looks up `value` without refreshing its recency.
    pub fn peek(&self, value: &str) -> Option<u32> {
        self.index.get(value).copied()
    }

    pub fn value_of(&self, id: u32) -> Option<&str> {
        if id == NIL {
            return None;
        }
        self.slots.get(id as usize).map(|s| &*s.value)
    }

    /// Live entries from least to most recently used.
    pub fn recency_order(&self) -> Vec<(&str, u32)> {
        let mut out = Vec::with_capacity(self.len());
        let mut cur = self.head;
        while cur != NIL {
            let slot = &self.slots[cur as usize];
            out.push((&*slot.value, cur));
            cur = slot.next;
        }
        out
    }

    fn touch(&mut self, id: u32) {
        if self.tail != id {
            self.unlink(id);
            self.link_tail(id);
        }
    }

    fn unlink(&mut self, id: u32) {
        let Slot { prev, next, .. } = self.slots[id as usize];
        if prev == NIL {
            self.head = next;
        } else {
            self.slots[prev as usize].next = next;
        }
        if next == NIL {
            self.tail = prev;
        } else {
            self.slots[next as usize].prev = prev;
        }
    }

    fn link_tail(&mut self, id: u32) {
        let old_tail = self.tail;
        {
            let slot = &mut self.slots[id as usize];
            slot.prev = old_tail;
            slot.next = NIL;
        }
        if old_tail == NIL {
            self.head = id;
        } else {
            self.slots[old_tail as usize].next = id;
        }
        self.tail = id;
    }
}
