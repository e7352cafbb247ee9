//! Round-by-round records of online learning runs.
//!
//! Both the non-private and the private online learners produce a
//! [`RunTranscript`]: one [`RoundRecord`] per round, in order. The transcript
//! renders to CSV in two layouts — a plain online layout and a private-run
//! layout that additionally reports the switching counter and epoch.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// What happened in one online round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    /// 1-based round index.
    pub round: u64,
    /// Predicted label, `+1` or `-1`.
    pub prediction: i8,
    /// True label, `+1` or `-1`.
    pub label: i8,
    /// Whether `prediction != label`.
    pub mistake: bool,
    /// Whether the learner updated its state this round.
    pub update: bool,
    /// Cumulative number of updates after this round.
    pub updates_so_far: u64,
    /// Epoch the round belongs to (0-based; always 0 for non-private runs).
    pub epoch: u64,
}

/// An ordered run history.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunTranscript {
    pub rounds: Vec<RoundRecord>,
}

impl RunTranscript {
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn push(&mut self, record: RoundRecord) {
        self.rounds.push(record);
    }

    /// Total mistakes over the run.
    pub fn mistakes(&self) -> u64 {
        self.rounds.iter().filter(|r| r.mistake).count() as u64
    }

    /// Total updates over the run.
    pub fn updates(&self) -> u64 {
        self.rounds.iter().filter(|r| r.update).count() as u64
    }

    /// Checks internal consistency: rounds numbered `1..=n`, the cumulative
    /// update counter increments exactly on update rounds, and epochs are
    /// non-decreasing.
    pub fn validate(&self) -> Result<()> {
        let mut updates = 0u64;
        let mut last_epoch = 0u64;
        for (i, r) in self.rounds.iter().enumerate() {
            if r.round != i as u64 + 1 {
                return Err(Error::InvalidHistory(format!(
                    "round {} out of order at position {i}",
                    r.round
                )));
            }
            if r.mistake != (r.prediction != r.label) {
                return Err(Error::InvalidHistory(format!(
                    "round {}: mistake flag disagrees with labels",
                    r.round
                )));
            }
            if r.update {
                updates += 1;
            }
            if r.updates_so_far != updates {
                return Err(Error::InvalidHistory(format!(
                    "round {}: cumulative updates {} but {} updates seen",
                    r.round, r.updates_so_far, updates
                )));
            }
            if r.epoch < last_epoch {
                return Err(Error::InvalidHistory(format!(
                    "round {}: epoch decreased from {} to {}",
                    r.round, last_epoch, r.epoch
                )));
            }
            last_epoch = r.epoch;
        }
        Ok(())
    }

    /// CSV for non-private runs:
    /// `round,prediction,label,mistake,update,cumulative_updates`.
    pub fn to_online_csv(&self) -> String {
        let mut out = String::from("round,prediction,label,mistake,update,cumulative_updates\n");
        for r in &self.rounds {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.round,
                r.prediction,
                r.label,
                u8::from(r.mistake),
                u8::from(r.update),
                r.updates_so_far
            );
        }
        out
    }

    /// CSV for private runs:
    /// `round,prediction,label,mistake,update,k,epoch_id` where `k` is the
    /// cumulative number of weight switches.
    pub fn to_dp_csv(&self) -> String {
        let mut out = String::from("round,prediction,label,mistake,update,k,epoch_id\n");
        for r in &self.rounds {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.round,
                r.prediction,
                r.label,
                u8::from(r.mistake),
                u8::from(r.update),
                r.updates_so_far,
                r.epoch
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(round: u64, pred: i8, label: i8, update: bool, ups: u64, epoch: u64) -> RoundRecord {
        RoundRecord {
            round,
            prediction: pred,
            label,
            mistake: pred != label,
            update,
            updates_so_far: ups,
            epoch,
        }
    }

    #[test]
    fn counting_and_validation() {
        let mut t = RunTranscript::default();
        t.push(record(1, 1, -1, true, 1, 0));
        t.push(record(2, -1, -1, false, 1, 0));
        t.push(record(3, 1, 1, true, 2, 1));
        assert_eq!(t.mistakes(), 1);
        assert_eq!(t.updates(), 2);
        t.validate().unwrap();
    }

    #[test]
    fn validation_rejects_bad_histories() {
        let mut misnumbered = RunTranscript::default();
        misnumbered.push(record(2, 1, 1, false, 0, 0));
        assert!(misnumbered.validate().is_err());

        let mut bad_counter = RunTranscript::default();
        bad_counter.push(record(1, 1, -1, true, 2, 0));
        assert!(bad_counter.validate().is_err());

        let mut epoch_drop = RunTranscript::default();
        epoch_drop.push(record(1, 1, 1, false, 0, 3));
        epoch_drop.push(record(2, 1, 1, false, 0, 1));
        assert!(epoch_drop.validate().is_err());

        let mut bad_flag = RunTranscript::default();
        bad_flag.push(RoundRecord {
            round: 1,
            prediction: 1,
            label: 1,
            mistake: true,
            update: false,
            updates_so_far: 0,
            epoch: 0,
        });
        assert!(bad_flag.validate().is_err());
    }

    #[test]
    fn csv_layouts() {
        let mut t = RunTranscript::default();
        t.push(record(1, 1, -1, true, 1, 0));
        t.push(record(2, -1, -1, false, 1, 2));
        let online = t.to_online_csv();
        let mut lines = online.lines();
        assert_eq!(
            lines.next().unwrap(),
            "round,prediction,label,mistake,update,cumulative_updates"
        );
        assert_eq!(lines.next().unwrap(), "1,1,-1,1,1,1");
        assert_eq!(lines.next().unwrap(), "2,-1,-1,0,0,1");
        let dp = t.to_dp_csv();
        let mut lines = dp.lines();
        assert_eq!(
            lines.next().unwrap(),
            "round,prediction,label,mistake,update,k,epoch_id"
        );
        assert_eq!(lines.next().unwrap(), "1,1,-1,1,1,1,0");
        assert_eq!(lines.next().unwrap(), "2,-1,-1,0,0,1,2");
    }
}
