//! Event sweep over a sliding window of von Mangoldt weights.
//!
//! For a window rule in which a prime power `m` belongs to the window at
//! position `x` exactly when `enter(m) <= x < m`, the window sum
//! `S(x) = Σ Λ(m)` is a step function. It only changes at the enter and leave
//! coordinates, and both coordinate sequences are sorted whenever `enter` is
//! increasing in `m`. The sweep merges the two sequences with two cursors into
//! one sorted slice of events, so the window content at any moment is the
//! contiguous run `events[left..right]`.

use crate::sieve::LambdaEvent;
use crate::sum::WeightSum;

/// Where a prime power enters the window.
pub trait WindowShape: Copy {
    fn enter(&self, m: u64) -> f64;
}

/// Fixed-length window `(x, x + h]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shifted {
    pub h: f64,
}

impl WindowShape for Shifted {
    #[inline]
    fn enter(&self, m: u64) -> f64 {
        m as f64 - self.h
    }
}

/// Proportional window `(x, (1 + δ) x]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub delta: f64,
}

impl WindowShape for Scaled {
    #[inline]
    fn enter(&self, m: u64) -> f64 {
        m as f64 / (1.0 + self.delta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    Leave,
    Enter,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepEvent {
    pub x: f64,
    pub kind: EventKind,
    pub weight: f64,
}

/// Sliding window over a sorted slice of Λ events.
///
/// Every event in the slice must have `n > x_lo`, and the slice must contain
/// every prime power with `enter(m) <= x_hi`; extra events beyond that are
/// ignored.
#[derive(Debug, Clone)]
pub struct WindowState<'a, W> {
    events: &'a [LambdaEvent],
    shape: W,
    x_hi: f64,
    left: usize,
    right: usize,
    anchor: f64,
    window_sum: WeightSum,
}

impl<'a, W: WindowShape> WindowState<'a, W> {
    /// Window positioned at `x_lo`, with its content initialized from the
    /// events rather than assumed empty.
    pub fn new(events: &'a [LambdaEvent], shape: W, x_lo: f64, x_hi: f64) -> Self {
        let skip = events.partition_point(|e| (e.n as f64) <= x_lo);
        let events = &events[skip..];
        let right = events.partition_point(|e| shape.enter(e.n) <= x_lo);
        let window_sum = events[..right].iter().map(|e| e.weight).sum();
        WindowState {
            events,
            shape,
            x_hi,
            left: 0,
            right,
            anchor: x_lo,
            window_sum,
        }
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    /// Window sum as maintained incrementally.
    pub fn window_sum(&self) -> f64 {
        self.window_sum.value()
    }

    /// Events currently inside the window.
    pub fn buffer(&self) -> &'a [LambdaEvent] {
        &self.events[self.left..self.right]
    }

    /// Window sum recomputed from the buffer.
    pub fn rebuilt_sum(&self) -> f64 {
        self.buffer()
            .iter()
            .map(|e| e.weight)
            .sum::<WeightSum>()
            .value()
    }

    /// Applies the next event at or before `x_hi`, moving the anchor to it.
    /// Equal coordinates (within one ulp) are taken leave-first.
    pub fn advance(&mut self) -> Option<SweepEvent> {
        let leave = (self.left < self.right)
            .then(|| self.events[self.left])
            .map(|e| (e.n as f64, e))
            .filter(|&(x, _)| x <= self.x_hi);
        let enter = self
            .events
            .get(self.right)
            .map(|&e| (self.shape.enter(e.n), e))
            .filter(|&(x, _)| x <= self.x_hi);

        let take_leave = match (leave, enter) {
            (None, None) => return None,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some((lx, _)), Some((ex, _))) => lx <= ex.next_up(),
        };
        let ev = if take_leave {
            let (x, e) = leave.unwrap();
            self.left += 1;
            self.window_sum.sub(e.weight);
            SweepEvent {
                x,
                kind: EventKind::Leave,
                weight: e.weight,
            }
        } else {
            let (x, e) = enter.unwrap();
            self.right += 1;
            self.window_sum.add(e.weight);
            SweepEvent {
                x,
                kind: EventKind::Enter,
                weight: e.weight,
            }
        };
        self.anchor = self.anchor.max(ev.x);
        Some(ev)
    }

    /// Calls `piece(S, a, b)` for every maximal interval `[a, b)` of positive
    /// length on which the window sum is the constant `S`, up to `x_hi`.
    pub fn for_each_piece(mut self, mut piece: impl FnMut(f64, f64, f64)) -> Self {
        loop {
            let start = self.anchor;
            let sum = self.window_sum();
            match self.advance() {
                Some(_) => {
                    if self.anchor > start {
                        piece(sum, start, self.anchor);
                    }
                }
                None => {
                    if self.x_hi > start {
                        piece(sum, start, self.x_hi);
                        self.anchor = self.x_hi;
                    }
                    return self;
                }
            }
        }
    }
}
