//! Orthonormal 2-D Haar transform on 8×8 blocks, three levels deep.
//!
//! For each 2×2 cell `[[p00, p01], [p10, p11]]` one analysis step yields
//!
//! ```text
//! cA = (p00 + p01 + p10 + p11) / 2
//! cH = (p00 + p01 - p10 - p11) / 2
//! cV = (p00 - p01 + p10 - p11) / 2
//! cD = (p00 - p01 - p10 + p11) / 2
//! ```
//!
//! The step is its own inverse, so energy is preserved at every level and a
//! change of `d` in a level-3 coefficient moves every pixel of the block by
//! `±d / 8`.

use crate::error::{Error, Result};

/// Side length of the blocks the pyramid operates on.
pub const BLOCK: usize = 8;

/// Decomposition depth of [`BlockPyramid`].
pub const LEVELS: usize = 3;

/// Small dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Square {
    side: usize,
    data: Vec<f64>,
}

impl Square {
    pub fn zeros(side: usize) -> Self {
        Self {
            side,
            data: vec![0.0; side * side],
        }
    }

    pub fn from_vec(side: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != side * side {
            return Err(Error::Dimensions(format!(
                "{side}x{side} matrix needs {} values, got {}",
                side * side,
                data.len()
            )));
        }
        Ok(Self { side, data })
    }

    pub fn from_fn(side: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(side * side);
        for r in 0..side {
            for c in 0..side {
                data.push(f(r, c));
            }
        }
        Self { side, data }
    }

    pub fn scalar(value: f64) -> Self {
        Self {
            side: 1,
            data: vec![value],
        }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.side + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.side + col] = value;
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }
}

/// One level of 2-D Haar analysis: approximation plus three detail bands.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandSet {
    pub ca: Square,
    pub ch: Square,
    pub cv: Square,
    pub cd: Square,
}

impl SubbandSet {
    pub fn side(&self) -> usize {
        self.ca.side
    }

    pub fn energy(&self) -> f64 {
        self.ca.energy() + self.ch.energy() + self.cv.energy() + self.cd.energy()
    }

    fn check(&self) -> Result<()> {
        let s = self.ca.side;
        if [&self.ch, &self.cv, &self.cd].iter().any(|m| m.side != s) {
            return Err(Error::Dimensions(format!(
                "subband sides differ: cA {s}, cH {}, cV {}, cD {}",
                self.ch.side, self.cv.side, self.cd.side
            )));
        }
        Ok(())
    }
}

/// Level-3 coefficients of a block; each band is a single scalar there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopCoefficients {
    pub ca: f64,
    pub ch: f64,
    pub cv: f64,
    pub cd: f64,
}

pub fn dwt2_level(input: &Square) -> Result<SubbandSet> {
    let n = input.side;
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::Dimensions(format!(
            "Haar step needs an even side length, got {n}"
        )));
    }
    let half = n / 2;
    let mut out = SubbandSet {
        ca: Square::zeros(half),
        ch: Square::zeros(half),
        cv: Square::zeros(half),
        cd: Square::zeros(half),
    };
    for i in 0..half {
        for j in 0..half {
            let p00 = input.get(2 * i, 2 * j);
            let p01 = input.get(2 * i, 2 * j + 1);
            let p10 = input.get(2 * i + 1, 2 * j);
            let p11 = input.get(2 * i + 1, 2 * j + 1);
            out.ca.set(i, j, (p00 + p01 + p10 + p11) * 0.5);
            out.ch.set(i, j, (p00 + p01 - p10 - p11) * 0.5);
            out.cv.set(i, j, (p00 - p01 + p10 - p11) * 0.5);
            out.cd.set(i, j, (p00 - p01 - p10 + p11) * 0.5);
        }
    }
    Ok(out)
}

pub fn idwt2_level(s: &SubbandSet) -> Result<Square> {
    s.check()?;
    let half = s.side();
    let mut out = Square::zeros(2 * half);
    for i in 0..half {
        for j in 0..half {
            let (a, h, v, d) = (
                s.ca.get(i, j),
                s.ch.get(i, j),
                s.cv.get(i, j),
                s.cd.get(i, j),
            );
            out.set(2 * i, 2 * j, (a + h + v + d) * 0.5);
            out.set(2 * i, 2 * j + 1, (a + h - v - d) * 0.5);
            out.set(2 * i + 1, 2 * j, (a - h + v - d) * 0.5);
            out.set(2 * i + 1, 2 * j + 1, (a - h - v + d) * 0.5);
        }
    }
    Ok(out)
}

/// Three-level Haar decomposition of one 8×8 block.
///
/// `levels[k]` holds level `k + 1`. Each level's approximation is the input
/// of the next, so only the level-3 approximation is consulted on synthesis.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPyramid {
    levels: [SubbandSet; LEVELS],
}

impl BlockPyramid {
    pub fn from_levels(levels: [SubbandSet; LEVELS]) -> Result<Self> {
        for (k, level) in levels.iter().enumerate() {
            level.check()?;
            let want = BLOCK >> (k + 1);
            if level.side() != want {
                return Err(Error::Dimensions(format!(
                    "level {} subbands must be {want}x{want}, got side {}",
                    k + 1,
                    level.side()
                )));
            }
        }
        Ok(Self { levels })
    }

    pub fn level1(&self) -> &SubbandSet {
        &self.levels[0]
    }

    pub fn level2(&self) -> &SubbandSet {
        &self.levels[1]
    }

    pub fn level3(&self) -> &SubbandSet {
        &self.levels[2]
    }

    pub fn levels(&self) -> &[SubbandSet; LEVELS] {
        &self.levels
    }

    pub fn top(&self) -> TopCoefficients {
        let l3 = &self.levels[2];
        TopCoefficients {
            ca: l3.ca.data[0],
            ch: l3.ch.data[0],
            cv: l3.cv.data[0],
            cd: l3.cd.data[0],
        }
    }

    pub fn set_top(&mut self, top: TopCoefficients) {
        let l3 = &mut self.levels[2];
        l3.ca.data[0] = top.ca;
        l3.ch.data[0] = top.ch;
        l3.cv.data[0] = top.cv;
        l3.cd.data[0] = top.cd;
    }

    /// Sum of squares of every coefficient that participates in synthesis:
    /// all detail bands plus the level-3 approximation.
    pub fn energy(&self) -> f64 {
        let details: f64 = self
            .levels
            .iter()
            .map(|l| l.ch.energy() + l.cv.energy() + l.cd.energy())
            .sum();
        details + self.levels[2].ca.energy()
    }
}

pub fn pyramid_forward(block: &Square) -> Result<BlockPyramid> {
    if block.side != BLOCK {
        return Err(Error::Dimensions(format!(
            "pyramid needs an {BLOCK}x{BLOCK} block, got side {}",
            block.side
        )));
    }
    let l1 = dwt2_level(block)?;
    let l2 = dwt2_level(&l1.ca)?;
    let l3 = dwt2_level(&l2.ca)?;
    Ok(BlockPyramid {
        levels: [l1, l2, l3],
    })
}

pub fn pyramid_inverse(p: &BlockPyramid) -> Result<Square> {
    let [l1, l2, l3] = &p.levels;
    let ca2 = idwt2_level(l3)?;
    let ca1 = idwt2_level(&SubbandSet {
        ca: ca2,
        ..l2.clone()
    })?;
    let block = idwt2_level(&SubbandSet {
        ca: ca1,
        ..l1.clone()
    })?;
    if block.side != BLOCK {
        return Err(Error::Dimensions(format!(
            "malformed pyramid synthesised a {0}x{0} block",
            block.side
        )));
    }
    Ok(block)
}

/// Pixel-domain images of unit level-3 `cA`, `cH` and `cV` coefficients,
/// synthesised through [`pyramid_inverse`]. By linearity, adding `d` to one
/// of those coefficients adds `d` times its footprint to the block.
pub fn level3_footprints() -> [Square; 3] {
    let unit = |pick: usize| {
        let mut p = pyramid_forward(&Square::zeros(BLOCK)).expect("8x8 block");
        let mut top = p.top();
        match pick {
            0 => top.ca = 1.0,
            1 => top.ch = 1.0,
            _ => top.cv = 1.0,
        }
        p.set_top(top);
        pyramid_inverse(&p).expect("well-formed pyramid")
    };
    [unit(0), unit(1), unit(2)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sq(rows: &[&[f64]]) -> Square {
        Square::from_vec(
            rows.len(),
            rows.iter().flat_map(|r| r.iter().copied()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn constant_cell() {
        let s = dwt2_level(&sq(&[&[1.0, 1.0], &[1.0, 1.0]])).unwrap();
        assert_eq!(s.ca.as_slice(), &[2.0]);
        assert_eq!(s.ch.as_slice(), &[0.0]);
        assert_eq!(s.cv.as_slice(), &[0.0]);
        assert_eq!(s.cd.as_slice(), &[0.0]);
    }

    #[test]
    fn formula_evaluation() {
        let s = dwt2_level(&sq(&[&[4.0, 2.0], &[2.0, 0.0]])).unwrap();
        assert_eq!(s.ca.as_slice(), &[4.0]);
        assert_eq!(s.ch.as_slice(), &[2.0]);
        assert_eq!(s.cv.as_slice(), &[2.0]);
        assert_eq!(s.cd.as_slice(), &[0.0]);
    }

    #[test]
    fn constant_block_level1() {
        let s = dwt2_level(&Square::from_fn(8, |_, _| 3.0)).unwrap();
        assert!(s.ca.as_slice().iter().all(|&v| v == 6.0));
        for d in [&s.ch, &s.cv, &s.cd] {
            assert!(d.as_slice().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn odd_side_rejected() {
        assert!(dwt2_level(&Square::zeros(3)).is_err());
        assert!(pyramid_forward(&Square::zeros(4)).is_err());
    }

    #[test]
    fn basis_synthesis() {
        let unit = |a, d| SubbandSet {
            ca: Square::scalar(a),
            ch: Square::scalar(0.0),
            cv: Square::scalar(0.0),
            cd: Square::scalar(d),
        };
        assert_eq!(idwt2_level(&unit(2.0, 0.0)).unwrap().as_slice(), &[1.0; 4]);
        assert_eq!(
            idwt2_level(&unit(0.0, 2.0)).unwrap().as_slice(),
            &[1.0, -1.0, -1.0, 1.0]
        );
    }

    #[test]
    fn mismatched_subbands_rejected() {
        let s = SubbandSet {
            ca: Square::zeros(2),
            ch: Square::zeros(1),
            cv: Square::zeros(2),
            cd: Square::zeros(2),
        };
        assert!(idwt2_level(&s).is_err());
    }

    #[test]
    fn constant_block_pyramid() {
        let p = pyramid_forward(&Square::from_fn(8, |_, _| 1.0)).unwrap();
        let top = p.top();
        assert_eq!(top.ca, 8.0);
        assert_eq!((top.ch, top.cv, top.cd), (0.0, 0.0, 0.0));

        let back = pyramid_inverse(&p).unwrap();
        assert!(back.as_slice().iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn malformed_pyramid_rejected() {
        let p = pyramid_forward(&Square::zeros(8)).unwrap();
        let mut levels = p.levels().clone();
        levels[1].ch = Square::zeros(3);
        assert!(BlockPyramid::from_levels(levels).is_err());
    }

    // Oracle: a direct pixel-space expectation for single-coefficient
    // perturbations, compared against full synthesis.
    #[test]
    fn level3_perturbation_footprint() {
        let base = Square::from_fn(8, |r, c| ((r * 31 + c * 17) % 23) as f64);
        let p = pyramid_forward(&base).unwrap();
        let alpha = 5.0;

        let mut pa = p.clone();
        let mut top = pa.top();
        top.ca += alpha;
        pa.set_top(top);
        let ya = pyramid_inverse(&pa).unwrap();
        for r in 0..8 {
            for c in 0..8 {
                assert!((ya.get(r, c) - base.get(r, c) - alpha / 8.0).abs() < 1e-12);
            }
        }

        let mut ph = p.clone();
        let mut top = ph.top();
        top.ch += alpha;
        ph.set_top(top);
        let yh = pyramid_inverse(&ph).unwrap();
        for r in 0..8 {
            let want = if r < 4 { alpha / 8.0 } else { -alpha / 8.0 };
            for c in 0..8 {
                assert!((yh.get(r, c) - base.get(r, c) - want).abs() < 1e-12);
            }
        }

        let mut pv = p;
        let mut top = pv.top();
        top.cv += alpha;
        pv.set_top(top);
        let yv = pyramid_inverse(&pv).unwrap();
        for r in 0..8 {
            for c in 0..8 {
                let want = if c < 4 { alpha / 8.0 } else { -alpha / 8.0 };
                assert!((yv.get(r, c) - base.get(r, c) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn footprints_are_eighths() {
        let [a, h, v] = level3_footprints();
        for r in 0..8 {
            for c in 0..8 {
                assert_eq!(a.get(r, c), 0.125);
                assert_eq!(h.get(r, c), if r < 4 { 0.125 } else { -0.125 });
                assert_eq!(v.get(r, c), if c < 4 { 0.125 } else { -0.125 });
            }
        }
    }

    fn arb_block() -> impl Strategy<Value = Square> {
        proptest::collection::vec(-300.0f64..300.0, 64)
            .prop_map(|v| Square::from_vec(8, v).unwrap())
    }

    proptest! {
        #[test]
        fn single_level_round_trip(v in proptest::collection::vec(-1e3f64..1e3, 16)) {
            let x = Square::from_vec(4, v).unwrap();
            let y = idwt2_level(&dwt2_level(&x).unwrap()).unwrap();
            for (a, b) in x.as_slice().iter().zip(y.as_slice()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn pyramid_round_trip_and_energy(b in arb_block()) {
            let p = pyramid_forward(&b).unwrap();
            let back = pyramid_inverse(&p).unwrap();
            for (x, y) in b.as_slice().iter().zip(back.as_slice()) {
                prop_assert!((x - y).abs() <= 1e-9);
            }
            let e = b.energy();
            let tol = 1e-9 * e.max(1.0);
            prop_assert!((p.energy() - e).abs() <= tol);
            prop_assert!((p.level1().energy() - e).abs() <= tol);
            prop_assert!((p.level2().energy() - p.level1().ca.energy()).abs() <= tol);
            prop_assert!((p.level3().energy() - p.level2().ca.energy()).abs() <= tol);
        }

        #[test]
        fn linearity(x in arb_block(), y in arb_block(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let combo = Square::from_fn(8, |r, c| a * x.get(r, c) + b * y.get(r, c));
            let (px, py, pc) = (
                pyramid_forward(&x).unwrap(),
                pyramid_forward(&y).unwrap(),
                pyramid_forward(&combo).unwrap(),
            );
            for k in 0..LEVELS {
                let (lx, ly, lc) = (&px.levels()[k], &py.levels()[k], &pc.levels()[k]);
                for (mx, my, mc) in [(&lx.ca, &ly.ca, &lc.ca), (&lx.ch, &ly.ch, &lc.ch),
                                     (&lx.cv, &ly.cv, &lc.cv), (&lx.cd, &ly.cd, &lc.cd)] {
                    for i in 0..mc.as_slice().len() {
                        let want = a * mx.as_slice()[i] + b * my.as_slice()[i];
                        prop_assert!((mc.as_slice()[i] - want).abs() <= 1e-9);
                    }
                }
            }
        }

        #[test]
        fn approximation_shift_moves_mean(b in arb_block(), alpha in -20.0f64..20.0) {
            let mut p = pyramid_forward(&b).unwrap();
            let mut top = p.top();
            top.ca += alpha;
            p.set_top(top);
            let y = pyramid_inverse(&p).unwrap();
            let mean = |s: &Square| s.as_slice().iter().sum::<f64>() / 64.0;
            prop_assert!((mean(&y) - mean(&b) - alpha / 8.0).abs() <= 1e-9);
        }
    }
}
