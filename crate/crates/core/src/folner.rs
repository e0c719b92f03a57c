//! Folner boxes in Z^d and the finite subcomplexes of the cover they
//! determine.
//!
//! The exhaustion uses axis-aligned boxes {0,...,m-1}^d, which satisfy the
//! regularity conditions for Z^d and make the translate counts N_m and the
//! collar counts exactly computable.  The word metric on Z^d with standard
//! generators is the l^1 metric.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::complex::PeriodicComplex;
use crate::error::{Error, Result};

/// The Folner box {0,...,m-1}^d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerBox {
    side: usize,
    rank: usize,
}

impl FolnerBox {
    pub fn new(side: usize, rank: usize) -> Self {
        assert!(side >= 1, "box side must be positive");
        assert!(rank >= 1, "rank must be positive");
        FolnerBox { side, rank }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// N_m = m^d.
    pub fn n_translates(&self) -> usize {
        self.side.pow(self.rank as u32)
    }

    pub fn contains(&self, g: &[i64]) -> bool {
        g.len() == self.rank && g.iter().all(|&x| 0 <= x && (x as usize) < self.side)
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::with_capacity(self.n_translates());
        let mut cur = vec![0i64; self.rank];
        loop {
            out.push(cur.clone());
            let mut k = self.rank;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                cur[k] += 1;
                if (cur[k] as usize) < self.side {
                    break;
                }
                cur[k] = 0;
            }
        }
    }
}

/// A lifted cell of the cover: base cell index within its dimension plus a
/// deck shift.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LiftedCell {
    pub shift: Vec<i64>,
    pub base: usize,
}

/// The finite subcomplex Y_m determined by a Folner box, with its boundary
/// subcomplex and collar data.
#[derive(Clone, Debug)]
pub struct FinitePiece {
    side: usize,
    rank: usize,
    n_m: usize,
    /// Cells per dimension, sorted by (shift, base).  Sorting by shift first
    /// keeps matrix bandwidth small for the banded backends.
    cells: Vec<Vec<LiftedCell>>,
    index: Vec<BTreeMap<LiftedCell, usize>>,
    /// True when the cell belongs to the boundary subcomplex.
    boundary_flag: Vec<Vec<bool>>,
    /// Translates g in the box whose closure meets the boundary subcomplex.
    boundary_translates: BTreeSet<Vec<i64>>,
}

/// Smallest subcomplex of the cover containing every translate of the
/// fundamental domain over the box; the face closure may add cells with
/// shifts outside the box.
pub fn build_piece(x: &PeriodicComplex, folner_box: &FolnerBox) -> Result<FinitePiece> {
    if folner_box.rank() != x.deck_rank() {
        return Err(Error::RankMismatch {
            expected: x.deck_rank(),
            got: folner_box.rank(),
        });
    }
    let top = x.top_dim();
    let mut sets: Vec<BTreeSet<LiftedCell>> = vec![BTreeSet::new(); top + 1];
    let mut queue: VecDeque<(usize, LiftedCell)> = VecDeque::new();
    for g in folner_box.elements() {
        for j in 0..=top {
            for base in 0..x.num_cells(j) {
                let cell = LiftedCell {
                    shift: g.clone(),
                    base,
                };
                if sets[j].insert(cell.clone()) {
                    queue.push_back((j, cell));
                }
            }
        }
    }
    // Face closure.
    while let Some((j, cell)) = queue.pop_front() {
        if j == 0 {
            continue;
        }
        for f in x.faces(j, cell.base) {
            let face = LiftedCell {
                shift: add_shift(&cell.shift, &f.shift),
                base: f.face,
            };
            if sets[j - 1].insert(face.clone()) {
                queue.push_back((j - 1, face));
            }
        }
    }

    let cells: Vec<Vec<LiftedCell>> = sets.iter().map(|s| s.iter().cloned().collect()).collect();
    let index: Vec<BTreeMap<LiftedCell, usize>> = cells
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
        .collect();

    // Boundary subcomplex: cells of Y_m that appear in the iterated face
    // closure of some cell of the cover outside Y_m.  Candidate outside
    // cells live within the face-closure radius of the box.
    let radius = closure_radius(x);
    let mut boundary_flag: Vec<Vec<bool>> = cells.iter().map(|v| vec![false; v.len()]).collect();
    let lo = -(radius as i64);
    let hi = folner_box.side() as i64 + radius as i64;
    for g in box_range(x.deck_rank(), lo, hi) {
        for j in 0..=top {
            for base in 0..x.num_cells(j) {
                let cell = LiftedCell {
                    shift: g.clone(),
                    base,
                };
                if sets[j].contains(&cell) {
                    continue;
                }
                mark_closure_in_piece(x, j, &cell, &index, &mut boundary_flag);
            }
        }
    }

    // Translates whose closure meets the boundary subcomplex.
    let mut boundary_translates = BTreeSet::new();
    for g in folner_box.elements() {
        'translate: for j in 0..=top {
            for base in 0..x.num_cells(j) {
                let cell = LiftedCell {
                    shift: g.clone(),
                    base,
                };
                if closure_touches_boundary(x, j, &cell, &index, &boundary_flag) {
                    boundary_translates.insert(g.clone());
                    break 'translate;
                }
            }
        }
    }

    Ok(FinitePiece {
        side: folner_box.side(),
        rank: folner_box.rank(),
        n_m: folner_box.n_translates(),
        cells,
        index,
        boundary_flag,
        boundary_translates,
    })
}

fn add_shift(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Max l^inf displacement any iterated face chain can accumulate.
fn closure_radius(x: &PeriodicComplex) -> usize {
    let mut total = 0i64;
    for j in 1..=x.top_dim() {
        let mut step = 0i64;
        for i in 0..x.num_cells(j) {
            for f in x.faces(j, i) {
                step = step.max(f.shift.iter().map(|s| s.abs()).max().unwrap_or(0));
            }
        }
        total += step;
    }
    total as usize
}

fn box_range(rank: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![lo; rank];
    loop {
        out.push(cur.clone());
        let mut k = rank;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < hi {
                break;
            }
            cur[k] = lo;
        }
    }
}

/// Flags every cell of the piece lying in the iterated face closure of
/// `cell` (which itself lies outside the piece).
fn mark_closure_in_piece(
    x: &PeriodicComplex,
    j: usize,
    cell: &LiftedCell,
    index: &[BTreeMap<LiftedCell, usize>],
    boundary_flag: &mut [Vec<bool>],
) {
    let mut stack = vec![(j, cell.clone())];
    let mut seen: BTreeSet<(usize, LiftedCell)> = BTreeSet::new();
    while let Some((dim, c)) = stack.pop() {
        if !seen.insert((dim, c.clone())) {
            continue;
        }
        if let Some(&i) = index[dim].get(&c) {
            boundary_flag[dim][i] = true;
        }
        if dim == 0 {
            continue;
        }
        for f in x.faces(dim, c.base) {
            stack.push((
                dim - 1,
                LiftedCell {
                    shift: add_shift(&c.shift, &f.shift),
                    base: f.face,
                },
            ));
        }
    }
}

fn closure_touches_boundary(
    x: &PeriodicComplex,
    j: usize,
    cell: &LiftedCell,
    index: &[BTreeMap<LiftedCell, usize>],
    boundary_flag: &[Vec<bool>],
) -> bool {
    let mut stack = vec![(j, cell.clone())];
    let mut seen: BTreeSet<(usize, LiftedCell)> = BTreeSet::new();
    while let Some((dim, c)) = stack.pop() {
        if !seen.insert((dim, c.clone())) {
            continue;
        }
        if let Some(&i) = index[dim].get(&c) {
            if boundary_flag[dim][i] {
                return true;
            }
        }
        if dim == 0 {
            continue;
        }
        for f in x.faces(dim, c.base) {
            stack.push((
                dim - 1,
                LiftedCell {
                    shift: add_shift(&c.shift, &f.shift),
                    base: f.face,
                },
            ));
        }
    }
    false
}

impl FinitePiece {
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Translate count N_m.
    pub fn n_m(&self) -> usize {
        self.n_m
    }

    pub fn num_cells(&self, j: usize) -> usize {
        self.cells.get(j).map_or(0, Vec::len)
    }

    pub fn cells(&self, j: usize) -> &[LiftedCell] {
        self.cells.get(j).map_or(&[], Vec::as_slice)
    }

    pub fn top_dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cell_index(&self, j: usize, cell: &LiftedCell) -> Option<usize> {
        self.index.get(j).and_then(|m| m.get(cell)).copied()
    }

    pub fn is_boundary(&self, j: usize, i: usize) -> bool {
        self.boundary_flag[j][i]
    }

    pub fn num_boundary_cells(&self, j: usize) -> usize {
        self.boundary_flag
            .get(j)
            .map_or(0, |v| v.iter().filter(|b| **b).count())
    }

    /// Indices of interior j-cells, i.e. those not in the boundary subcomplex.
    pub fn interior_indices(&self, j: usize) -> Vec<usize> {
        match self.boundary_flag.get(j) {
            None => Vec::new(),
            Some(flags) => flags
                .iter()
                .enumerate()
                .filter_map(|(i, b)| (!b).then_some(i))
                .collect(),
        }
    }

    pub fn boundary_translates(&self) -> &BTreeSet<Vec<i64>> {
        &self.boundary_translates
    }

    /// Collar count: translates within l^1 distance delta of a translate
    /// whose closure meets the boundary subcomplex.
    pub fn collar_count(&self, delta: usize) -> usize {
        if self.boundary_translates.is_empty() {
            return 0;
        }
        let the_box = FolnerBox::new(self.side, self.rank);
        the_box
            .elements()
            .iter()
            .filter(|g| {
                self.boundary_translates.iter().any(|b| {
                    let dist: i64 = g.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).sum();
                    dist <= delta as i64
                })
            })
            .count()
    }

    /// l^1 distance from a cell's shift to the nearest boundary-touching
    /// translate, used for deep-interior checks.
    pub fn translate_boundary_distance(&self, shift: &[i64]) -> Option<i64> {
        self.boundary_translates
            .iter()
            .map(|b| shift.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).sum())
            .min()
    }
}

/// One row of a regularity table.
#[derive(Clone, Debug)]
pub struct RegularityRow {
    pub m: usize,
    pub n_m: usize,
    /// (delta, collar count, ratio) per requested delta.
    pub collars: Vec<(usize, usize, f64)>,
}

/// Computes collar ratios for the requested box sides and collar widths.
pub fn regularity_report(
    x: &PeriodicComplex,
    m_values: &[usize],
    delta_values: &[usize],
) -> Result<Vec<RegularityRow>> {
    if m_values.is_empty() || delta_values.is_empty() {
        return Err(Error::Invalid(
            "regularity report needs nonempty m and delta lists".into(),
        ));
    }
    let mut rows = Vec::new();
    for &m in m_values {
        let piece = build_piece(x, &FolnerBox::new(m, x.deck_rank()))?;
        let collars = delta_values
            .iter()
            .map(|&delta| {
                let count = piece.collar_count(delta);
                (delta, count, count as f64 / piece.n_m() as f64)
            })
            .collect();
        rows.push(RegularityRow {
            m,
            n_m: piece.n_m(),
            collars,
        });
    }
    Ok(rows)
}
