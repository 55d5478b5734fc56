use rand::Rng;

use crate::stream::LabeledExample;

/// Bounded replay store filled by classical reservoir sampling, so every
/// stream example has equal probability capacity/seen of residing in memory.
#[derive(Debug, Clone)]
pub struct ReplayMemory {
    items: Vec<LabeledExample>,
    capacity: usize,
    seen: u64,
}

impl ReplayMemory {
    pub fn new(capacity: usize) -> Self {
        Self {
            items: Vec::with_capacity(capacity),
            capacity,
            seen: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn items(&self) -> &[LabeledExample] {
        &self.items
    }

    /// Offer a batch of stream examples to the reservoir.
    pub fn reservoir_update<R: Rng>(&mut self, batch: &[LabeledExample], rng: &mut R) {
        for ex in batch {
            self.seen += 1;
            if self.capacity == 0 {
                continue;
            }
            if self.items.len() < self.capacity {
                self.items.push(ex.clone());
            } else {
                let j = rng.random_range(0..self.seen);
                if (j as usize) < self.capacity {
                    self.items[j as usize] = ex.clone();
                }
            }
        }
    }

    /// Uniform sample of `count` stored examples without replacement
    /// (all of memory when fewer are stored).
    pub fn sample<R: Rng>(&self, count: usize, rng: &mut R) -> Vec<LabeledExample> {
        let take = count.min(self.items.len());
        let mut indices: Vec<usize> = (0..self.items.len()).collect();
        for i in 0..take {
            let j = rng.random_range(i..indices.len());
            indices.swap(i, j);
        }
        indices[..take]
            .iter()
            .map(|&i| self.items[i].clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ex(id: usize) -> LabeledExample {
        LabeledExample::new(vec![id as f64], id % 2, 0)
    }

    #[test]
    fn pre_saturation_keeps_everything() {
        let mut mem = ReplayMemory::new(500);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let batch: Vec<LabeledExample> = (0..500).map(ex).collect();
        mem.reservoir_update(&batch, &mut rng);
        assert_eq!(mem.len(), 500);
        assert_eq!(mem.items(), &batch[..]);
    }

    #[test]
    fn zero_capacity_stays_empty() {
        let mut mem = ReplayMemory::new(0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        mem.reservoir_update(&(0..100).map(ex).collect::<Vec<_>>(), &mut rng);
        assert!(mem.is_empty());
        assert_eq!(mem.seen(), 100);
    }

    #[test]
    fn size_never_exceeds_capacity() {
        let mut mem = ReplayMemory::new(50);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for chunk in (0..2000).map(ex).collect::<Vec<_>>().chunks(10) {
            mem.reservoir_update(chunk, &mut rng);
            assert!(mem.len() <= 50);
        }
        assert_eq!(mem.len(), 50);
    }

    #[test]
    fn inclusion_frequency_follows_the_reservoir_law() {
        // Monte-Carlo against the m/t law: every stream position should be
        // retained with probability capacity/stream = 100/10000 = 0.01.
        // Individual items are too noisy at 500 trials, so the law is
        // checked on position deciles (1000 items each).
        let capacity = 100;
        let stream_len = 10_000usize;
        let trials = 500u64;
        let mut hits = vec![0u64; stream_len];
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(trial);
            let mut mem = ReplayMemory::new(capacity);
            let stream: Vec<LabeledExample> = (0..stream_len).map(ex).collect();
            mem.reservoir_update(&stream, &mut rng);
            for item in mem.items() {
                hits[item.features[0] as usize] += 1;
            }
        }
        for (d, decile) in hits.chunks(stream_len / 10).enumerate() {
            let freq =
                decile.iter().sum::<u64>() as f64 / (decile.len() as u64 * trials) as f64;
            assert!(
                (freq - 0.01).abs() < 0.003,
                "decile {d}: inclusion frequency {freq} outside 0.01 +- 0.003"
            );
        }
    }

    #[test]
    fn sample_is_without_replacement() {
        let mut mem = ReplayMemory::new(20);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        mem.reservoir_update(&(0..20).map(ex).collect::<Vec<_>>(), &mut rng);
        let sample = mem.sample(10, &mut rng);
        assert_eq!(sample.len(), 10);
        let mut ids: Vec<usize> = sample.iter().map(|e| e.features[0] as usize).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 10, "sample contained duplicates");
        // Requesting more than stored returns everything.
        assert_eq!(mem.sample(50, &mut rng).len(), 20);
    }
}
