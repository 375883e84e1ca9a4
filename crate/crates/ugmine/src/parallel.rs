//! Multi-threaded mining over independent root subtrees.
//!
//! Workers pull root edges from a shared counter and share one candidate
//! list. The list is ordered by a total rank, and pruning only drops
//! subtrees that cannot reach the final list, so the result does not depend
//! on scheduling.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use ugmine_core::miner::{mine as mine_serial, CandidateList, Miner};
use ugmine_core::{CandidatePool, Dataset, ExtendedScore, MinedFeature, MiningConfig, MiningOutcome, MiningStats};

/// Candidate list behind a mutex, with the threshold mirrored in an atomic
/// so readers do not take the lock.
#[derive(Debug)]
pub struct SharedPool {
    list: Mutex<CandidateList>,
    theta: AtomicU64,
}

impl SharedPool {
    pub fn new(top: usize) -> Self {
        let list = CandidateList::new(top);
        let theta = AtomicU64::new(list.threshold().value().to_bits());
        SharedPool { list: Mutex::new(list), theta }
    }

    pub fn into_sorted(self) -> Vec<MinedFeature> {
        self.list.into_inner().expect("pool lock").into_sorted()
    }
}

impl CandidatePool for SharedPool {
    fn threshold(&self) -> ExtendedScore {
        ExtendedScore::new(f64::from_bits(self.theta.load(Ordering::Acquire)))
    }

    fn offer(&self, f: MinedFeature) {
        let mut list = self.list.lock().expect("pool lock");
        if list.offer(f) {
            self.theta.store(list.threshold().value().to_bits(), Ordering::Release);
        }
    }
}

/// Mines with `threads` workers; `threads <= 1` runs on the calling thread.
pub fn mine(dataset: &Dataset, cfg: &MiningConfig, threads: usize) -> ugmine_core::Result<MiningOutcome> {
    if threads <= 1 {
        return mine_serial(dataset, cfg);
    }
    let miner = Miner::new(dataset, cfg)?;
    let pool = SharedPool::new(cfg.top);
    let next = AtomicUsize::new(0);
    let roots = miner.roots();
    let stats = std::thread::scope(|s| {
        let workers: Vec<_> = (0..threads)
            .map(|_| {
                s.spawn(|| {
                    let mut st = MiningStats::default();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(&root) = roots.get(i) else { break };
                        st.merge(&miner.explore(root, &pool));
                    }
                    st
                })
            })
            .collect();
        let mut total = MiningStats::default();
        for w in workers {
            total.merge(&w.join().expect("mining worker panicked"));
        }
        total
    });
    Ok(MiningOutcome { features: pool.into_sorted(), stats })
}
