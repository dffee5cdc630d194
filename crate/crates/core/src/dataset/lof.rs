//! Local outlier factor.
//!
//! Neighborhoods include every point tied at the k-distance. Sums run in
//! ascending neighbor index. A point with infinite local reachability
//! density (at least k exact duplicates) scores 1.

use rayon::prelude::*;

use super::{Dataset, DatasetError};

struct Neighborhood {
    k_distance: f64,
    /// (index, distance), ascending index.
    members: Vec<(usize, f64)>,
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn neighborhood(points: &[Vec<f64>], p: usize, k: usize) -> Neighborhood {
    let dist: Vec<f64> = points.iter().map(|q| euclidean(&points[p], q)).collect();
    let mut others: Vec<f64> = dist.iter().enumerate().filter(|&(j, _)| j != p).map(|(_, d)| *d).collect();
    let (_, kth, _) = others.select_nth_unstable_by(k - 1, f64::total_cmp);
    let k_distance = *kth;
    let members = dist.into_iter().enumerate().filter(|&(j, d)| j != p && d <= k_distance).collect();
    Neighborhood { k_distance, members }
}

pub fn lof_scores(points: &[Vec<f64>], k: usize) -> Result<Vec<f64>, DatasetError> {
    let n = points.len();
    if k == 0 || k >= n {
        return Err(DatasetError::InvalidNeighbors { k, n });
    }
    let hoods: Vec<Neighborhood> = (0..n).into_par_iter().map(|p| neighborhood(points, p, k)).collect();
    let lrd: Vec<f64> = hoods
        .iter()
        .map(|h| {
            let reach: f64 = h.members.iter().map(|&(o, d)| hoods[o].k_distance.max(d)).sum();
            1.0 / (reach / h.members.len() as f64)
        })
        .collect();
    Ok(hoods
        .iter()
        .zip(&lrd)
        .map(|(h, &own)| {
            if own.is_infinite() {
                return 1.0;
            }
            let total: f64 = h.members.iter().map(|&(o, _)| lrd[o]).sum();
            (total / h.members.len() as f64) / own
        })
        .collect())
}

/// Drops rows whose LOF exceeds `threshold`; returns the kept rows and the dropped ids with scores.
pub fn remove_outliers(ds: &Dataset, k: usize, threshold: f64) -> Result<(Dataset, Vec<(String, f64)>), DatasetError> {
    let scores = lof_scores(&ds.rows, k)?;
    let mut keep = Vec::new();
    let mut dropped = Vec::new();
    for (i, &s) in scores.iter().enumerate() {
        if s > threshold {
            dropped.push((ds.class_ids[i].clone(), s));
        } else {
            keep.push(i);
        }
    }
    Ok((ds.subset(&keep), dropped))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<Vec<f64>> {
        let mut v = Vec::new();
        for i in 0..7 {
            for j in 0..7 {
                v.push(vec![i as f64, j as f64]);
            }
        }
        v
    }

    #[test]
    fn grid_interior_is_inlier() {
        let s = lof_scores(&grid(), 4).unwrap();
        let center = 3 * 7 + 3;
        assert!((s[center] - 1.0).abs() <= 0.05, "{}", s[center]);
    }

    #[test]
    fn far_point_ranks_first() {
        let mut pts = grid();
        pts.push(vec![30.0, 30.0]);
        let s = lof_scores(&pts, 5).unwrap();
        let top = (0..s.len()).max_by(|&a, &b| s[a].total_cmp(&s[b])).unwrap();
        assert_eq!(top, pts.len() - 1);
        assert!(s[top] > 3.0);
    }

    #[test]
    fn duplicates_score_one() {
        let pts = vec![vec![2.0, 2.0]; 10];
        assert!(lof_scores(&pts, 3).unwrap().iter().all(|&s| s == 1.0));
    }

    #[test]
    fn k_must_be_below_n() {
        assert_eq!(lof_scores(&grid()[..3], 3), Err(DatasetError::InvalidNeighbors { k: 3, n: 3 }));
    }

    #[test]
    fn infinite_threshold_keeps_all() {
        let ds = Dataset::from_xy(grid(), vec![0.0; 49]);
        let (kept, dropped) = remove_outliers(&ds, 4, f64::INFINITY).unwrap();
        assert_eq!(kept, ds);
        assert!(dropped.is_empty());
    }
}
