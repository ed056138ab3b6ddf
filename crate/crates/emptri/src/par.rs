//! Multi-threaded degree reports.

use emptri_core::engine::{degree_report, DegreeTable, EmptyTriangleReport, SweepScratch, Sweeper, MAX_POINTS};
use emptri_core::{Error, PointSet, Result};
use rayon::prelude::*;

/// Below this size the thread start-up costs more than the sweep.
const PARALLEL_THRESHOLD: usize = 256;

/// Same result as [`degree_report`], with the anchors spread over the rayon
/// pool. Partial tables are merged by integer addition, so the report does
/// not depend on how the anchors were scheduled.
pub fn degree_report_par(set: &PointSet) -> Result<EmptyTriangleReport> {
    let n = set.len();
    if n < PARALLEL_THRESHOLD || rayon::current_num_threads() == 1 {
        return degree_report(set);
    }
    if n > MAX_POINTS {
        return Err(Error::TooManyPoints { n, max: MAX_POINTS });
    }
    let sweeper = Sweeper::new(set.points());
    let (f, table) = (0..sweeper.anchors())
        .into_par_iter()
        .try_fold(
            || (0u64, DegreeTable::new(n), SweepScratch::default()),
            |(mut f, mut table, mut scratch), rank| {
                f += sweeper.sweep_anchor(rank, &mut scratch, |a, b, c| table.add_triangle(a, b, c))?;
                Ok::<_, Error>((f, table, scratch))
            },
        )
        .map(|r| r.map(|(f, table, _)| (f, table)))
        .try_reduce(
            || (0, DegreeTable::new(n)),
            |(f1, mut t1), (f2, t2)| {
                t1.merge(&t2);
                Ok((f1 + f2, t1))
            },
        )?;
    Ok(EmptyTriangleReport::from_table(f, table))
}
