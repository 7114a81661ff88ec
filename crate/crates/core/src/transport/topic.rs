use std::collections::VecDeque;
use std::sync::{Condvar, Mutex, MutexGuard};
use std::time::{Duration, Instant};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("topic is closed")]
pub struct TopicClosed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("timed out waiting for a frame")]
pub struct TimedOut;

#[derive(Debug, Default)]
struct State {
    queue: VecDeque<Vec<u8>>,
    closed: bool,
}

/// Single-partition in-process topic: FIFO, exactly-once delivery. Share it
/// between producer and consumer behind an `Arc`.
#[derive(Debug)]
pub struct TopicChannel {
    name: String,
    state: Mutex<State>,
    ready: Condvar,
}

impl TopicChannel {
    pub fn new(name: impl Into<String>) -> Self {
        TopicChannel {
            name: name.into(),
            state: Mutex::default(),
            ready: Condvar::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Frames buffered and not yet consumed.
    pub fn len(&self) -> usize {
        self.lock().queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn produce(&self, frame: Vec<u8>) -> Result<(), TopicClosed> {
        let mut st = self.lock();
        if st.closed {
            return Err(TopicClosed);
        }
        st.queue.push_back(frame);
        drop(st);
        self.ready.notify_one();
        Ok(())
    }

    /// Blocks until a frame is available. `None` once the topic is closed and
    /// drained.
    pub fn consume(&self) -> Option<Vec<u8>> {
        let mut st = self.lock();
        loop {
            if let Some(f) = st.queue.pop_front() {
                return Some(f);
            }
            if st.closed {
                return None;
            }
            st = self.ready.wait(st).unwrap_or_else(|e| e.into_inner());
        }
    }

    /// Like [`consume`](Self::consume) but gives up after `timeout`, returning
    /// [`TimedOut`] if nothing arrived.
    pub fn consume_timeout(&self, timeout: Duration) -> Result<Option<Vec<u8>>, TimedOut> {
        let deadline = Instant::now() + timeout;
        let mut st = self.lock();
        loop {
            if let Some(f) = st.queue.pop_front() {
                return Ok(Some(f));
            }
            if st.closed {
                return Ok(None);
            }
            let now = Instant::now();
            if now >= deadline {
                return Err(TimedOut);
            }
            st = self
                .ready
                .wait_timeout(st, deadline - now)
                .unwrap_or_else(|e| e.into_inner())
                .0;
        }
    }

    /// Rejects further produces; buffered frames remain consumable.
    pub fn close(&self) {
        self.lock().closed = true;
        self.ready.notify_all();
    }

    pub fn is_closed(&self) -> bool {
        self.lock().closed
    }

    fn lock(&self) -> MutexGuard<'_, State> {
        self.state.lock().unwrap_or_else(|e| e.into_inner())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifo_and_drain() {
        let t = TopicChannel::new("t");
        t.produce(b"A".to_vec()).unwrap();
        t.produce(b"B".to_vec()).unwrap();
        t.close();
        assert_eq!(t.produce(b"C".to_vec()), Err(TopicClosed));
        assert_eq!(t.consume(), Some(b"A".to_vec()));
        assert_eq!(t.consume(), Some(b"B".to_vec()));
        assert_eq!(t.consume(), None);
    }

    #[test]
    fn empty_open_topic_waits() {
        let t = TopicChannel::new("t");
        let start = Instant::now();
        assert_eq!(t.consume_timeout(Duration::from_millis(30)), Err(TimedOut));
        assert!(start.elapsed() >= Duration::from_millis(30));
    }
}
