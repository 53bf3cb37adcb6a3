//! Anonymous channel model: ballots carry no sender, and are released in
//! shuffled batches of `window`.

use rand::seq::SliceRandom;
use rand::RngCore;

use super::messages::BallotMessage;

#[derive(Debug, Clone)]
pub struct MixChannel {
    window: usize,
    pending: Vec<BallotMessage>,
}

impl MixChannel {
    pub fn new(window: usize) -> Self {
        MixChannel {
            window: window.max(1),
            pending: Vec::new(),
        }
    }

    pub fn pending(&self) -> usize {
        self.pending.len()
    }

    /// Queues `bm`; once the window is full the whole batch comes back in
    /// random order.
    pub fn submit<R: RngCore>(&mut self, bm: BallotMessage, rng: &mut R) -> Option<Vec<BallotMessage>> {
        self.pending.push(bm);
        (self.pending.len() >= self.window).then(|| self.flush(rng))
    }

    /// Releases whatever is queued, shuffled.
    pub fn flush<R: RngCore>(&mut self, rng: &mut R) -> Vec<BallotMessage> {
        let mut batch = std::mem::take(&mut self.pending);
        batch.shuffle(rng);
        batch
    }
}
