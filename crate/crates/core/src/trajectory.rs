//! Solution storage with per-node regime provenance.

/// Which regime produced a node. Breakpoint nodes are shared between
/// segments and carry the label of the segment they start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Segment {
    Classical,
    Fractional,
    Stochastic,
}

impl Segment {
    /// 1-based regime index as written to CSV output.
    pub fn index(&self) -> u8 {
        match self {
            Segment::Classical => 1,
            Segment::Fractional => 2,
            Segment::Stochastic => 3,
        }
    }
}

/// Uniform-grid solution samples over all three regimes.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    /// Grid times, times[j] = j * dt, length n + 1.
    pub times: Vec<f64>,
    /// States, one row per node, each of the field's dimension.
    pub states: Vec<Vec<f64>>,
    /// Regime label per node: 1 on [0, a1), 2 on [a1, a2), 3 on [a2, a].
    pub segment_of: Vec<Segment>,
    /// First node of the fractional segment (a1 = k1 * dt).
    pub k1: usize,
    /// First node of the stochastic segment (a2 = k2 * dt).
    pub k2: usize,
    pub seed_used: u64,
}

/// Per-segment summary derivable from a finished trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub segment: Segment,
    pub steps_taken: usize,
    pub max_state_norm: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    /// Largest |component| over the whole trajectory.
    pub fn max_abs_state(&self) -> f64 {
        self.states
            .iter()
            .flat_map(|row| row.iter())
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// All states finite?
    pub fn is_finite(&self) -> bool {
        self.states
            .iter()
            .all(|row| row.iter().all(|v| v.is_finite()))
    }

    /// Per-segment step counts and sup norms.
    pub fn segment_reports(&self) -> [StepReport; 3] {
        let norm_over = |from: usize, to: usize| {
            self.states[from..=to]
                .iter()
                .flat_map(|row| row.iter())
                .fold(0.0f64, |acc, v| acc.max(v.abs()))
        };
        let n = self.len() - 1;
        [
            StepReport {
                segment: Segment::Classical,
                steps_taken: self.k1,
                max_state_norm: norm_over(0, self.k1),
            },
            StepReport {
                segment: Segment::Fractional,
                steps_taken: self.k2 - self.k1,
                max_state_norm: norm_over(self.k1, self.k2),
            },
            StepReport {
                segment: Segment::Stochastic,
                steps_taken: n - self.k2,
                max_state_norm: norm_over(self.k2, n),
            },
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> Trajectory {
        Trajectory {
            dt: 0.5,
            times: vec![0.0, 0.5, 1.0, 1.5],
            states: vec![vec![1.0], vec![-2.0], vec![0.5], vec![3.0]],
            segment_of: vec![
                Segment::Classical,
                Segment::Fractional,
                Segment::Fractional,
                Segment::Stochastic,
            ],
            k1: 1,
            k2: 3,
            seed_used: 7,
        }
    }

    #[test]
    fn norms_and_reports() {
        let t = toy();
        assert_eq!(t.max_abs_state(), 3.0);
        assert!(t.is_finite());
        let reports = t.segment_reports();
        assert_eq!(reports[0].steps_taken, 1);
        assert_eq!(reports[1].steps_taken, 2);
        assert_eq!(reports[2].steps_taken, 0);
        // Fractional segment spans nodes k1..=k2 including both shared ends.
        assert_eq!(reports[1].max_state_norm, 3.0);
        assert_eq!(reports[0].max_state_norm, 2.0);
    }

    #[test]
    fn segment_indices() {
        assert_eq!(Segment::Classical.index(), 1);
        assert_eq!(Segment::Fractional.index(), 2);
        assert_eq!(Segment::Stochastic.index(), 3);
    }
}
