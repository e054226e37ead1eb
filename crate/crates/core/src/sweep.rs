//! Running independent sweep points sequentially or on a thread pool.

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// How to evaluate independent parameter points.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is enabled and falls
    /// back to sequential evaluation otherwise.
    #[default]
    Parallel,
}

/// Evaluate `f(index, point)` for every point. Output order always follows
/// input order, so results do not depend on scheduling.
pub fn map_points<T, R, F>(points: &[T], exec: Execution, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> Result<R> + Sync + Send,
{
    match exec {
        Execution::Sequential => sequential(points, f),
        Execution::Parallel => parallel(points, f),
    }
}

fn sequential<T, R, F>(points: &[T], f: F) -> Result<Vec<R>>
where
    F: Fn(usize, &T) -> Result<R>,
{
    points.iter().enumerate().map(|(i, p)| f(i, p)).collect()
}

#[cfg(feature = "parallel")]
fn parallel<T, R, F>(points: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> Result<R> + Sync + Send,
{
    use rayon::prelude::*;
    points.par_iter().enumerate().map(|(i, p)| f(i, p)).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel<T, R, F>(points: &[T], f: F) -> Result<Vec<R>>
where
    F: Fn(usize, &T) -> Result<R>,
{
    sequential(points, f)
}
