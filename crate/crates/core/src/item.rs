use std::fmt::Debug;

/// Sort key. All buffers handed to the pipeline are 32-bit unsigned keys.
pub type Key = u32;

/// A key paired with its zero-based position in the input buffer.
///
/// Ordering is lexicographic on `(key, tag)`. Tags are unique within one
/// buffer, so no two items of that buffer compare equal, and sorting by this
/// order is a stable sort of the keys.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedItem {
    pub key: Key,
    pub tag: u64,
}

impl TaggedItem {
    #[inline]
    pub fn new(key: Key, tag: u64) -> Self {
        TaggedItem { key, tag }
    }
}

/// Element type the pipeline can move around: plain keys (raw mode) or
/// tagged items.
pub trait SortItem: Copy + Ord + Send + Sync + Debug + 'static {
    fn key(&self) -> Key;
}

impl SortItem for Key {
    #[inline]
    fn key(&self) -> Key {
        *self
    }
}

impl SortItem for TaggedItem {
    #[inline]
    fn key(&self) -> Key {
        self.key
    }
}

/// Attach input positions to a key buffer.
pub fn tag_keys(keys: &[Key]) -> Vec<TaggedItem> {
    keys.iter()
        .enumerate()
        .map(|(i, &key)| TaggedItem::new(key, i as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_keys_order_by_tag() {
        let a = TaggedItem::new(7, 3);
        let b = TaggedItem::new(7, 9);
        let c = TaggedItem::new(6, 100);
        assert!(a < b);
        assert!(c < a);
        assert_ne!(a, b);
    }

    #[test]
    fn tagging_records_positions() {
        let tagged = tag_keys(&[5, 3, 3]);
        assert_eq!(tagged[2], TaggedItem::new(3, 2));
        assert_eq!(tagged.iter().map(SortItem::key).collect::<Vec<_>>(), vec![5, 3, 3]);
    }
}
