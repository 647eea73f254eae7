//! Distance-n motion block and the goal-tracking movement cost.
//!
//! A block of size `n` has eight entries, one per compass direction, each
//! jumping `n` cells. Every cell along a jump is checked, but only the end
//! cell becomes a successor. The movement cost of a successor `q` reached
//! from the current node `cn` is
//!
//! ```text
//! C' = cost(cn) + |q - cn|
//! C  = C' + alpha * |goal - q|
//! arrival = d * C      (d = 1 cardinal, sqrt(2) diagonal)
//! ```

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::KernelError;
use crate::grid::{euclidean, Coord, GridMap, Occupancy, RayIter};

pub const DEFAULT_ALPHA: f64 = 0.007;
pub const ALPHA_RANGE: (f64, f64) = (0.001, 0.009);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DirectionClass {
    Cardinal,
    Diagonal,
}

impl DirectionClass {
    /// Per-cell base cost `d` (1) or `d'` (sqrt 2).
    pub fn base_cost(self) -> f64 {
        match self {
            DirectionClass::Cardinal => 1.0,
            DirectionClass::Diagonal => SQRT_2,
        }
    }

    pub fn of(offset: Coord) -> Option<Self> {
        match (offset.x, offset.y) {
            (0, 0) => None,
            (0, _) | (_, 0) => Some(DirectionClass::Cardinal),
            (x, y) if x.abs() == y.abs() => Some(DirectionClass::Diagonal),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionVector {
    pub offset: Coord,
    pub class: DirectionClass,
    pub base_cost: f64,
}

impl MotionVector {
    fn new(dx: i32, dy: i32) -> Self {
        let offset = Coord::new(dx, dy);
        let class = DirectionClass::of(offset).expect("block offsets are aligned");
        Self { offset, class, base_cost: class.base_cost() }
    }

    /// Offset with each component clamped to -1..=1.
    pub fn unit(&self) -> Coord {
        Coord::new(self.offset.x.signum(), self.offset.y.signum())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MotionBlock {
    n: u32,
    entries: [MotionVector; 8],
}

impl MotionBlock {
    pub fn new(n: u32) -> Result<Self, KernelError> {
        if n == 0 {
            return Err(KernelError::ZeroSize);
        }
        let n = n as i32;
        // cardinal rows first, then diagonals
        let entries = [
            MotionVector::new(n, 0),
            MotionVector::new(0, n),
            MotionVector::new(-n, 0),
            MotionVector::new(0, -n),
            MotionVector::new(-n, -n),
            MotionVector::new(-n, n),
            MotionVector::new(n, -n),
            MotionVector::new(n, n),
        ];
        Ok(Self { n: n as u32, entries })
    }

    pub fn size(&self) -> u32 {
        self.n
    }

    pub fn entries(&self) -> &[MotionVector; 8] {
        &self.entries
    }
}

pub fn build_motion_block(n: u32) -> Result<MotionBlock, KernelError> {
    MotionBlock::new(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveCostParams {
    pub alpha: f64,
    /// When a ray is blocked at step `k`, also emit the cell at `k - 1`.
    /// Off by default.
    pub emit_truncated_steps: bool,
}

impl Default for AdaptiveCostParams {
    fn default() -> Self {
        Self { alpha: DEFAULT_ALPHA, emit_truncated_steps: false }
    }
}

impl AdaptiveCostParams {
    /// Range-checked constructor.
    pub fn new(alpha: f64) -> Result<Self, KernelError> {
        if !(ALPHA_RANGE.0..=ALPHA_RANGE.1).contains(&alpha) {
            return Err(KernelError::AlphaOutOfRange(alpha));
        }
        Ok(Self { alpha, ..Self::default() })
    }

    /// Skips the range check, for ablations such as `alpha = 0`. Negative
    /// and non-finite values are still refused.
    pub fn with_alpha_override(alpha: f64) -> Result<Self, KernelError> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(KernelError::AlphaOutOfRange(alpha));
        }
        Ok(Self { alpha, ..Self::default() })
    }

    pub fn truncated_steps(mut self, on: bool) -> Self {
        self.emit_truncated_steps = on;
        self
    }
}

/// Accumulated cost plus step length plus the alpha-weighted distance from
/// the candidate to the goal.
pub fn adaptive_cost(node_cost: f64, node: Coord, candidate: Coord, goal: Coord, alpha: f64) -> f64 {
    let stepped = node_cost + euclidean(node, candidate);
    stepped + euclidean(goal, candidate) * alpha
}

pub fn move_cost(class: DirectionClass, cost: f64) -> f64 {
    class.base_cost() * cost
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Successor {
    pub cell: Coord,
    pub arrival_cost: f64,
    pub via: MotionVector,
    /// `|q - cn|`
    pub step: f64,
    /// `|goal - q|`
    pub to_goal: f64,
}

/// All successors of `node`. See [`expand`] for the rules.
pub fn successors(
    map: &GridMap,
    node: Coord,
    node_cost: f64,
    goal: Coord,
    block: &MotionBlock,
    params: &AdaptiveCostParams,
) -> Result<Vec<Successor>, KernelError> {
    let mut out = Vec::with_capacity(8);
    expand(map, node, node_cost, goal, block, params, &mut out, |_| {})?;
    Ok(out)
}

/// Walks each direction of the block from `node` and pushes successors onto
/// `out`, calling `inspect` with the row-major index of every cell whose
/// occupancy is read.
///
/// A direction yields its end cell only when every cell up to and including
/// it is free. If the goal sits on the ray before the end, the goal itself is
/// yielded instead and the walk along that direction stops.
#[allow(clippy::too_many_arguments)]
pub fn expand(
    map: &GridMap,
    node: Coord,
    node_cost: f64,
    goal: Coord,
    block: &MotionBlock,
    params: &AdaptiveCostParams,
    out: &mut Vec<Successor>,
    mut inspect: impl FnMut(usize),
) -> Result<(), KernelError> {
    if !map.is_free(node) {
        return Err(KernelError::NodeNotFree(node));
    }
    let n = block.size();
    let cells = map.cells();
    for via in block.entries() {
        let mut last_free = None;
        let mut reached = None;
        for (k, cell) in RayIter::new(node, via.unit(), n).enumerate() {
            let Some(idx) = map.index(cell) else { break };
            inspect(idx);
            if cells[idx] != Occupancy::Free {
                break;
            }
            last_free = Some(cell);
            if cell == goal || k + 1 == n as usize {
                reached = Some(cell);
                break;
            }
        }
        let target = match (reached, last_free) {
            (Some(c), _) => Some(c),
            (None, Some(c)) if params.emit_truncated_steps => Some(c),
            _ => None,
        };
        if let Some(cell) = target {
            let step = euclidean(node, cell);
            let to_goal = euclidean(goal, cell);
            let c = node_cost + step + to_goal * params.alpha;
            out.push(Successor { cell, arrival_cost: move_cost(via.class, c), via: *via, step, to_goal });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::ray_cells;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn block_of_one_is_eight_neighbourhood() {
        let block = MotionBlock::new(1).unwrap();
        let offsets: BTreeSet<_> = block.entries().iter().map(|v| (v.offset.x, v.offset.y)).collect();
        let expected: BTreeSet<_> = (-1..=1)
            .flat_map(|x| (-1..=1).map(move |y| (x, y)))
            .filter(|&p| p != (0, 0))
            .collect();
        assert_eq!(offsets, expected);
    }

    #[test]
    fn block_of_three() {
        let block = MotionBlock::new(3).unwrap();
        for v in block.entries() {
            assert_eq!(v.offset.chebyshev(Coord::default()), 3);
            match v.class {
                DirectionClass::Cardinal => {
                    assert!(v.offset.x == 0 || v.offset.y == 0);
                    assert_eq!(v.base_cost, 1.0);
                }
                DirectionClass::Diagonal => {
                    assert_eq!(v.offset.x.abs(), v.offset.y.abs());
                    assert_eq!(v.base_cost, SQRT_2);
                }
            }
        }
        assert!(matches!(MotionBlock::new(0), Err(KernelError::ZeroSize)));
    }

    #[test]
    fn successor_fields_agree_with_cost() {
        let map = GridMap::from_ascii("......\n......\n......\n......").unwrap();
        let block = MotionBlock::new(2).unwrap();
        let goal = Coord::new(5, 3);
        let params = AdaptiveCostParams::default();
        for s in successors(&map, Coord::new(2, 1), 1.5, goal, &block, &params).unwrap() {
            let c = adaptive_cost(1.5, Coord::new(2, 1), s.cell, goal, params.alpha);
            assert_eq!(s.arrival_cost, move_cost(s.via.class, c));
            assert_eq!(s.step, euclidean(Coord::new(2, 1), s.cell));
            assert_eq!(s.to_goal, euclidean(goal, s.cell));
        }
    }

    #[test]
    fn adaptive_cost_examples() {
        // 0 + 1 + 9 * 0.007
        let c = adaptive_cost(0.0, Coord::new(0, 0), Coord::new(1, 0), Coord::new(10, 0), 0.007);
        assert!((c - 1.063).abs() < 1e-12);
        let c = adaptive_cost(5.0, Coord::new(0, 0), Coord::new(1, 1), Coord::new(1, 1), 0.007);
        assert!((c - (5.0 + SQRT_2)).abs() < 1e-12);
        let c = adaptive_cost(2.5, Coord::new(3, 3), Coord::new(6, 3), Coord::new(40, 9), 0.0);
        assert_eq!(c, 2.5 + 3.0);
    }

    #[test]
    fn move_cost_examples() {
        assert_eq!(move_cost(DirectionClass::Cardinal, 1.063), 1.063);
        assert!((move_cost(DirectionClass::Diagonal, 2.0) - 2.828_427_124_746_19).abs() < 1e-12);
        assert_eq!(move_cost(DirectionClass::Diagonal, 0.0), 0.0);
    }

    #[test]
    fn alpha_range() {
        assert!(AdaptiveCostParams::new(0.007).is_ok());
        assert!(AdaptiveCostParams::new(0.0).is_err());
        assert!(AdaptiveCostParams::new(0.01).is_err());
        assert_eq!(AdaptiveCostParams::with_alpha_override(0.0).unwrap().alpha, 0.0);
        assert!(AdaptiveCostParams::with_alpha_override(-1.0).is_err());
    }

    #[test]
    fn open_interior_gives_eight() {
        let map = GridMap::empty(9, 9).unwrap();
        let block = MotionBlock::new(1).unwrap();
        let s = successors(&map, Coord::new(4, 4), 0.0, Coord::new(8, 8), &block, &Default::default()).unwrap();
        // brute force: every free cell at chebyshev distance 1
        let brute: BTreeSet<_> = (3..=5)
            .flat_map(|x| (3..=5).map(move |y| Coord::new(x, y)))
            .filter(|c| *c != Coord::new(4, 4) && map.is_free(*c))
            .collect();
        let got: BTreeSet<_> = s.iter().map(|s| s.cell).collect();
        assert_eq!(s.len(), 8);
        assert_eq!(got, brute);
    }

    #[test]
    fn wall_blocks_rightward_rays() {
        let map = GridMap::from_ascii(
            "
            ......#..
            ......#..
            ......#..
            ......#..
            ......#..
            ",
        )
        .unwrap();
        let block = MotionBlock::new(2).unwrap();
        let s = successors(&map, Coord::new(5, 2), 0.0, Coord::new(0, 0), &block, &Default::default()).unwrap();
        assert!(s.iter().all(|s| s.via.offset.x <= 0));
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn goal_short_step() {
        let map = GridMap::empty(20, 5).unwrap();
        let block = MotionBlock::new(3).unwrap();
        let node = Coord::new(5, 2);
        let goal = Coord::new(7, 2);
        let s = successors(&map, node, 1.0, goal, &block, &Default::default()).unwrap();
        let east: Vec<_> = s.iter().filter(|s| s.via.offset == Coord::new(3, 0)).collect();
        assert_eq!(east.len(), 1);
        assert_eq!(east[0].cell, goal);
        assert!((east[0].arrival_cost - 3.0).abs() < 1e-12);
    }

    #[test]
    fn truncated_steps_flag() {
        let map = GridMap::from_ascii(
            "
            .....
            .....
            ...#.
            ",
        )
        .unwrap();
        let block = MotionBlock::new(3).unwrap();
        let node = Coord::new(0, 2);
        let off = successors(&map, node, 0.0, Coord::new(4, 0), &block, &Default::default()).unwrap();
        assert!(off.iter().all(|s| s.via.offset != Coord::new(3, 0)));
        let params = AdaptiveCostParams::default().truncated_steps(true);
        let on = successors(&map, node, 0.0, Coord::new(4, 0), &block, &params).unwrap();
        let east: Vec<_> = on.iter().filter(|s| s.via.offset == Coord::new(3, 0)).collect();
        assert_eq!(east[0].cell, Coord::new(2, 2));
    }

    #[test]
    fn blocked_node_rejected() {
        let map = GridMap::from_ascii("#.").unwrap();
        let block = MotionBlock::new(1).unwrap();
        let r = successors(&map, Coord::new(0, 0), 0.0, Coord::new(1, 0), &block, &Default::default());
        assert!(matches!(r, Err(KernelError::NodeNotFree(_))));
    }

    fn random_map(w: u32, h: u32, bits: Vec<bool>) -> GridMap {
        let cells = bits.into_iter().map(|b| if b { Occupancy::Obstacle } else { Occupancy::Free }).collect();
        GridMap::new(w, h, cells).unwrap()
    }

    proptest! {
        #[test]
        fn adaptive_cost_lower_bound(
            ccn in 0.0f64..1e4, alpha in 0.0f64..0.01,
            cx in -50i32..50, cy in -50i32..50, qx in -50i32..50, qy in -50i32..50,
            gx in -50i32..50, gy in -50i32..50,
        ) {
            let (cn, q, g) = (Coord::new(cx, cy), Coord::new(qx, qy), Coord::new(gx, gy));
            let base = ccn + euclidean(cn, q);
            let c = adaptive_cost(ccn, cn, q, g, alpha);
            prop_assert!(c >= base);
            prop_assert_eq!(c == base, alpha == 0.0 || q == g);
            prop_assert!(adaptive_cost(ccn + 1.0, cn, q, g, alpha) >= c);
            prop_assert!(adaptive_cost(ccn, cn, q, g, alpha * 2.0) >= c);
        }

        #[test]
        fn successors_never_cross_obstacles(
            bits in proptest::collection::vec(proptest::bool::weighted(0.3), 15 * 15),
            n in 1u32..6, x in 0i32..15, y in 0i32..15,
        ) {
            let map = random_map(15, 15, bits);
            let node = Coord::new(x, y);
            prop_assume!(map.is_free(node));
            let block = MotionBlock::new(n).unwrap();
            let goal = Coord::new(14, 14);
            for s in successors(&map, node, 0.0, goal, &block, &Default::default()).unwrap() {
                let k = s.cell.chebyshev(node) as u32;
                prop_assert!(k == n || s.cell == goal);
                for c in ray_cells(node, s.via.unit(), k).unwrap() {
                    prop_assert!(map.is_free(c));
                }
            }
        }

        #[test]
        fn block_one_matches_free_neighbourhood(
            bits in proptest::collection::vec(proptest::bool::weighted(0.4), 8 * 8),
            x in 0i32..8, y in 0i32..8,
        ) {
            let map = random_map(8, 8, bits);
            let node = Coord::new(x, y);
            prop_assume!(map.is_free(node));
            let block = MotionBlock::new(1).unwrap();
            let got: BTreeSet<_> = successors(&map, node, 0.0, Coord::new(100, 100), &block, &Default::default())
                .unwrap().into_iter().map(|s| s.cell).collect();
            let brute: BTreeSet<_> = (-1..=1).flat_map(|dx| (-1..=1).map(move |dy| (dx, dy)))
                .filter(|&d| d != (0, 0))
                .map(|(dx, dy)| node.offset(dx, dy))
                .filter(|c| map.is_free(*c))
                .collect();
            prop_assert_eq!(got, brute);
        }
    }
}
