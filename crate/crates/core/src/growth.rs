//! Random-turns vicious walkers, Aztec diamond tilings by domino shuffling,
//! and non-intersecting Poisson buses.

use crate::combinat::{rsk_first_rows, sample_involution, Permutation};
use crate::error::{range_err, Error, Result};
use crate::rng::{par_draws, StreamRng};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

// ---------------------------------------------------------------------------
// walkers

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkerVariant {
    /// Walkers move left for `n` ticks.
    OneSided,
    /// Left for `n` ticks, then right for `n` ticks back to the start.
    Returning,
}

impl std::str::FromStr for WalkerVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" | "one_sided" | "one-sided" => Ok(Self::OneSided),
            "return" | "returning" => Ok(Self::Returning),
            _ => Err(Error::Config(format!("unknown walker variant '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkerEnsembleResult {
    pub variant: WalkerVariant,
    pub n: usize,
    pub d: Vec<usize>,
}

/// Distance statistic of one uniformly random walk of duration `n`, drawn
/// through the tableau bijection: the first row of the insertion tableau
/// of a uniform involution (one-sided) or a uniform permutation
/// (returning).
pub fn sample_walker(variant: WalkerVariant, n: usize, rng: &mut StreamRng) -> Result<usize> {
    if n == 0 {
        return Err(range_err("walk duration must be at least 1"));
    }
    let p = match variant {
        WalkerVariant::OneSided => sample_involution(n, rng),
        WalkerVariant::Returning => Permutation::random(n, rng),
    };
    Ok(rsk_first_rows(&p).0)
}

pub fn walker_ensemble(
    variant: WalkerVariant,
    n: usize,
    draws: usize,
    seed: u64,
) -> Result<WalkerEnsembleResult> {
    let d = par_draws(seed, draws, |rng, _| sample_walker(variant, n, rng))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(WalkerEnsembleResult { variant, n, d })
}

/// `(d - 2 sqrt(n)) / n^{1/6}`
pub fn standardize_walker(d: usize, n: usize) -> f64 {
    let n = n as f64;
    (d as f64 - 2.0 * n.sqrt()) / n.powf(1.0 / 6.0)
}

fn tableau_rows_of(t: &[Vec<u32>]) -> Result<Vec<usize>> {
    let n: usize = t.iter().map(Vec::len).sum();
    let mut row_of = vec![usize::MAX; n];
    for (r, row) in t.iter().enumerate() {
        if row.is_empty() || (r > 0 && row.len() > t[r - 1].len()) {
            return Err(range_err("tableau rows must be nonempty and weakly decreasing"));
        }
        for (c, &v) in row.iter().enumerate() {
            let k = v as usize;
            if k == 0 || k > n || row_of[k - 1] != usize::MAX {
                return Err(range_err(format!("tableau entry {v} repeated or out of range")));
            }
            if (c > 0 && row[c - 1] >= v) || (r > 0 && t[r - 1][c] >= v) {
                return Err(range_err("tableau is not standard"));
            }
            row_of[k - 1] = r;
        }
    }
    Ok(row_of)
}

/// One-sided walk encoded by a standard Young tableau: at tick `k` the
/// walker whose index is the row containing `k` steps left. Returns the
/// walker index moving at each tick.
pub fn walk_from_tableau(t: &[Vec<u32>]) -> Result<Vec<usize>> {
    let moves = tableau_rows_of(t)?;
    replay_walk(WalkerVariant::OneSided, &moves)?;
    Ok(moves)
}

/// Returning walk from a pair of tableaux of equal shape: `p` drives the
/// outward half, `q` read backwards drives the return.
pub fn returning_walk_from_tableaux(p: &[Vec<u32>], q: &[Vec<u32>]) -> Result<Vec<usize>> {
    let shape = |t: &[Vec<u32>]| t.iter().map(Vec::len).collect::<Vec<_>>();
    if shape(p) != shape(q) {
        return Err(range_err("tableaux have different shapes"));
    }
    let mut moves = tableau_rows_of(p)?;
    let back = tableau_rows_of(q)?;
    moves.extend(back.iter().rev());
    replay_walk(WalkerVariant::Returning, &moves)?;
    Ok(moves)
}

/// Replays a walk given as the walker index moving at each tick, checking
/// the exclusion rule, and returns the walker-0 statistic (distance
/// travelled, or maximum excursion for the returning variant).
pub fn replay_walk(variant: WalkerVariant, moves: &[usize]) -> Result<usize> {
    let walkers = moves.iter().copied().max().map_or(1, |m| m + 2);
    let mut pos: Vec<i64> = (0..walkers as i64).collect();
    let half = match variant {
        WalkerVariant::OneSided => moves.len(),
        WalkerVariant::Returning => {
            if moves.len() % 2 != 0 {
                return Err(range_err("returning walk must have even length"));
            }
            moves.len() / 2
        }
    };
    let mut excursion = 0;
    for (tick, &j) in moves.iter().enumerate() {
        if tick < half {
            if j > 0 && pos[j - 1] == pos[j] - 1 {
                return Err(range_err(format!("tick {}: walker {j} blocked on the left", tick + 1)));
            }
            pos[j] -= 1;
        } else {
            if pos[j] + 1 == pos[j + 1] {
                return Err(range_err(format!("tick {}: walker {j} blocked on the right", tick + 1)));
            }
            pos[j] += 1;
        }
        excursion = excursion.max(-pos[0]);
    }
    if variant == WalkerVariant::Returning && pos.iter().enumerate().any(|(j, &p)| p != j as i64) {
        return Err(range_err("returning walk does not end at the start"));
    }
    Ok(excursion as usize)
}

/// Exhaustive count of walks of duration `n` under the exclusion rule,
/// straight from the lattice dynamics.
pub fn enumerate_walks(variant: WalkerVariant, n: usize) -> Result<u64> {
    if n == 0 || n > 10 {
        return Err(range_err(format!("walk enumeration supports 1 <= n <= 10, got {n}")));
    }
    // walker j cannot move before tick j + 1, so walkers 0..n suffice;
    // walker n stays put and only blocks
    let mut pos: Vec<i64> = (0..=n as i64).collect();
    let total = match variant {
        WalkerVariant::OneSided => n,
        WalkerVariant::Returning => 2 * n,
    };
    fn go(pos: &mut [i64], tick: usize, half: usize, total: usize) -> u64 {
        if tick == total {
            return 1;
        }
        let movers = pos.len() - 1;
        let mut count = 0;
        for j in 0..movers {
            if tick < half {
                if j == 0 || pos[j - 1] != pos[j] - 1 {
                    pos[j] -= 1;
                    count += go(pos, tick + 1, half, total);
                    pos[j] += 1;
                }
            } else if pos[j] + 1 != pos[j + 1] {
                pos[j] += 1;
                count += go(pos, tick + 1, half, total);
                pos[j] -= 1;
            }
        }
        count
    }
    Ok(go(&mut pos, 0, n, total))
}

// ---------------------------------------------------------------------------
// Aztec diamond

/// Domino type. `N`/`S` are horizontal, `E`/`W` vertical; the letter is
/// the direction the domino slides during shuffling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DominoKind {
    N,
    S,
    E,
    W,
}

impl DominoKind {
    pub fn is_horizontal(self) -> bool {
        matches!(self, Self::N | Self::S)
    }

    fn code(self) -> u8 {
        match self {
            Self::N => 1,
            Self::S => 2,
            Self::E => 3,
            Self::W => 4,
        }
    }

    fn from_code(c: u8) -> Option<Self> {
        match c {
            1 => Some(Self::N),
            2 => Some(Self::S),
            3 => Some(Self::E),
            4 => Some(Self::W),
            _ => None,
        }
    }
}

/// A domino anchored at unit cell `[x, x+1] x [y, y+1]`; horizontal
/// dominos also cover `(x + 1, y)`, vertical ones `(x, y + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Domino {
    pub x: i32,
    pub y: i32,
    pub kind: DominoKind,
}

impl Domino {
    pub fn cells(&self) -> [(i32, i32); 2] {
        if self.kind.is_horizontal() {
            [(self.x, self.y), (self.x + 1, self.y)]
        } else {
            [(self.x, self.y), (self.x, self.y + 1)]
        }
    }
}

/// Whether cell `(x, y)` lies in the order-`n` diamond
/// `|x + 1/2| + |y + 1/2| <= n`.
pub fn in_diamond(n: i32, x: i32, y: i32) -> bool {
    (2 * x + 1).abs() + (2 * y + 1).abs() <= 2 * n
}

fn kind_for(order: i32, x: i32, y: i32, horizontal: bool) -> DominoKind {
    let even = (x + y + order).rem_euclid(2) == 0;
    match (horizontal, even) {
        (true, true) => DominoKind::N,
        (true, false) => DominoKind::S,
        (false, true) => DominoKind::E,
        (false, false) => DominoKind::W,
    }
}

const COVERED: u8 = 5;

/// Cell grid of an order-`m` diamond: 0 empty, 1..=4 domino anchor,
/// `COVERED` second cell of a domino.
struct Grid {
    m: i32,
    cells: Vec<u8>,
}

impl Grid {
    fn new(m: i32) -> Self {
        let side = (2 * m) as usize;
        Self { m, cells: vec![0; side * side] }
    }

    #[inline]
    fn idx(&self, x: i32, y: i32) -> usize {
        ((y + self.m) * 2 * self.m + (x + self.m)) as usize
    }

    #[inline]
    fn get(&self, x: i32, y: i32) -> u8 {
        if x < -self.m || x >= self.m || y < -self.m || y >= self.m {
            return 0;
        }
        self.cells[self.idx(x, y)]
    }

    fn anchor(&self, x: i32, y: i32) -> Option<DominoKind> {
        DominoKind::from_code(self.get(x, y))
    }

    fn place(&mut self, d: Domino) -> Result<()> {
        for (k, (x, y)) in d.cells().into_iter().enumerate() {
            if !in_diamond(self.m, x, y) {
                return Err(Error::Logic(format!("domino {d:?} leaves the order-{} diamond", self.m)));
            }
            let i = self.idx(x, y);
            if self.cells[i] != 0 {
                return Err(Error::Logic(format!("domino {d:?} overlaps at ({x}, {y})")));
            }
            self.cells[i] = if k == 0 { d.kind.code() } else { COVERED };
        }
        Ok(())
    }

    fn dominos(&self) -> Vec<Domino> {
        let mut out = Vec::new();
        for y in -self.m..self.m {
            for x in -self.m..self.m {
                if let Some(kind) = self.anchor(x, y) {
                    out.push(Domino { x, y, kind });
                }
            }
        }
        out
    }
}

/// Half-width of row `y` of the order-`m` diamond: the row holds cells
/// `x` in `-w..w`.
#[inline]
fn row_half_width(m: i32, y: i32) -> i32 {
    m - ((2 * y + 1).abs() - 1) / 2
}

/// Fair coin flips drawn 64 at a time.
struct Coins {
    bits: u64,
    left: u32,
}

impl Coins {
    fn flip(&mut self, rng: &mut StreamRng) -> bool {
        if self.left == 0 {
            self.bits = rng.gen();
            self.left = 64;
        }
        let b = self.bits & 1 == 1;
        self.bits >>= 1;
        self.left -= 1;
        b
    }
}

/// One shuffling stage: order `m` to `m + 1`.
fn shuffle_step(old: &Grid, rng: &mut StreamRng, coins: &mut Coins) -> Result<Grid> {
    let m = old.m + 1;
    let mut g = Grid::new(m);
    let (so, sn) = ((2 * old.m) as usize, (2 * m) as usize);
    for y in -old.m..old.m {
        let w = row_half_width(old.m, y);
        for x in -w..w {
            let i = old.idx(x, y);
            let Some(kind) = DominoKind::from_code(old.cells[i]) else { continue };
            // facing pairs inside a 2x2 block annihilate
            let (facing, dx, dy) = match kind {
                DominoKind::N => (y + 1 < old.m && old.cells[i + so] == DominoKind::S.code(), 0, 1),
                DominoKind::S => (y > -old.m && old.cells[i - so] == DominoKind::N.code(), 0, -1),
                DominoKind::E => (x + 1 < old.m && old.cells[i + 1] == DominoKind::W.code(), 1, 0),
                DominoKind::W => (x > -old.m && old.cells[i - 1] == DominoKind::E.code(), -1, 0),
            };
            if facing {
                continue;
            }
            let (nx, ny) = (x + dx, y + dy);
            let j = g.idx(nx, ny);
            let k = if kind.is_horizontal() { j + 1 } else { j + sn };
            let inside = if kind.is_horizontal() {
                nx + 1 < row_half_width(m, ny) && nx >= -row_half_width(m, ny)
            } else {
                ny + 1 < m && nx < row_half_width(m, ny).min(row_half_width(m, ny + 1))
                    && nx >= -row_half_width(m, ny).min(row_half_width(m, ny + 1))
            };
            if !inside || g.cells[j] != 0 || g.cells[k] != 0 {
                return Err(Error::Logic(format!(
                    "sliding {kind:?} from ({x}, {y}) collides or leaves the order-{m} diamond"
                )));
            }
            g.cells[j] = kind.code();
            g.cells[k] = COVERED;
        }
    }
    // every empty cell now belongs to a 2x2 block; scanning top to bottom,
    // left to right meets each block at its top-left cell
    for y in (-m..m).rev() {
        let w = row_half_width(m, y);
        for x in -w..w {
            let i = g.idx(x, y);
            if g.cells[i] != 0 {
                continue;
            }
            let below_ok = y > -m && x + 1 < row_half_width(m, y - 1) && x >= -row_half_width(m, y - 1);
            if !(below_ok && x + 1 < w && g.cells[i + 1] == 0 && g.cells[i - sn] == 0 && g.cells[i - sn + 1] == 0) {
                return Err(Error::Logic(format!(
                    "empty cell ({x}, {y}) is not the corner of an empty 2x2 block at order {m}"
                )));
            }
            if coins.flip(rng) {
                g.cells[i] = kind_for(m, x, y, true).code();
                g.cells[i + 1] = COVERED;
                g.cells[i - sn] = kind_for(m, x, y - 1, true).code();
                g.cells[i - sn + 1] = COVERED;
            } else {
                g.cells[i - sn] = kind_for(m, x, y - 1, false).code();
                g.cells[i] = COVERED;
                g.cells[i - sn + 1] = kind_for(m, x + 1, y - 1, false).code();
                g.cells[i + 1] = COVERED;
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AztecTiling {
    pub n: usize,
    pub dominos: Vec<Domino>,
}

impl AztecTiling {
    /// Full cover, no overlap, all cells inside the diamond, and each
    /// domino type consistent with its position.
    pub fn validate(&self) -> Result<()> {
        let m = self.n as i32;
        let mut g = Grid::new(m);
        for d in &self.dominos {
            if d.kind != kind_for(m, d.x, d.y, d.kind.is_horizontal()) {
                return Err(Error::Logic(format!("domino {d:?} has the wrong parity type")));
            }
            g.place(*d)?;
        }
        let cells = 2 * self.n * (self.n + 1);
        if self.dominos.len() * 2 != cells {
            return Err(Error::Logic(format!(
                "{} dominos cannot cover {cells} cells",
                self.dominos.len()
            )));
        }
        Ok(())
    }

    /// Canonical form for comparing tilings: sorted placements.
    pub fn key(&self) -> Vec<(i32, i32, bool)> {
        let mut k: Vec<_> = self.dominos.iter().map(|d| (d.x, d.y, d.kind.is_horizontal())).collect();
        k.sort_unstable();
        k
    }

    /// One line per domino: `x y h|v`.
    pub fn to_lines(&self) -> String {
        let mut s = String::new();
        for d in &self.dominos {
            let o = if d.kind.is_horizontal() { 'h' } else { 'v' };
            s.push_str(&format!("{} {} {o}\n", d.x, d.y));
        }
        s
    }

    fn kind_grid(&self) -> Grid {
        let m = self.n as i32;
        let mut g = Grid::new(m);
        for d in &self.dominos {
            for (x, y) in d.cells() {
                let i = g.idx(x, y);
                g.cells[i] = d.kind.code();
            }
        }
        g
    }
}

/// Uniform random tiling of the order-`n` Aztec diamond by domino
/// shuffling.
pub fn sample_aztec(n: usize, rng: &mut StreamRng) -> Result<AztecTiling> {
    if n == 0 || n > 4096 {
        return Err(range_err(format!("Aztec order {n} not in 1..=4096")));
    }
    let mut g = Grid::new(0);
    let mut coins = Coins { bits: 0, left: 0 };
    for _ in 0..n {
        g = shuffle_step(&g, rng, &mut coins)?;
    }
    let t = AztecTiling { n, dominos: g.dominos() };
    if cfg!(test) {
        t.validate()?;
    }
    Ok(t)
}

/// All tilings of the order-`n` diamond, by backtracking on the first
/// uncovered cell in top-to-bottom, left-to-right order.
pub fn enumerate_aztec(n: usize) -> Result<Vec<AztecTiling>> {
    if n == 0 || n > 4 {
        return Err(range_err(format!("exhaustive enumeration supports n in 1..=4, got {n}")));
    }
    let m = n as i32;
    let mut order = Vec::new();
    for y in (-m..m).rev() {
        for x in -m..m {
            if in_diamond(m, x, y) {
                order.push((x, y));
            }
        }
    }
    let mut g = Grid::new(m);
    let mut placed = Vec::new();
    let mut out = Vec::new();
    fn go(
        g: &mut Grid,
        order: &[(i32, i32)],
        at: usize,
        placed: &mut Vec<Domino>,
        out: &mut Vec<AztecTiling>,
        n: usize,
    ) {
        let Some(k) = (at..order.len()).find(|&k| g.get(order[k].0, order[k].1) == 0) else {
            out.push(AztecTiling { n, dominos: placed.clone() });
            return;
        };
        let (x, y) = order[k];
        let m = g.m;
        for d in [
            Domino { x, y, kind: kind_for(m, x, y, true) },
            Domino { x, y: y - 1, kind: kind_for(m, x, y - 1, false) },
        ] {
            let fits = d.cells().iter().all(|&(cx, cy)| in_diamond(m, cx, cy) && g.get(cx, cy) == 0);
            if fits {
                g.place(d).expect("checked placement");
                placed.push(d);
                go(g, order, k + 1, placed, out, n);
                placed.pop();
                for (cx, cy) in d.cells() {
                    let i = g.idx(cx, cy);
                    g.cells[i] = 0;
                }
            }
        }
    }
    go(&mut g, &order, 0, &mut placed, &mut out, n);
    Ok(out)
}

/// Smallest order for which the arctic statistic is computed.
pub const ARCTIC_MIN_ORDER: usize = 8;

/// Signed distance along the line `u + v = alpha` (coordinates scaled by
/// `n`) from the arctic circle point to the edge of the frozen region.
///
/// The frozen region is the set of cells connected to the east corner
/// (`alpha > 0`) or south corner (`alpha < 0`) through dominos of that
/// corner's brick type. The diagonal of cells nearest the line is walked
/// inward from the boundary; the frozen edge sits halfway between the last
/// frozen cell and the next one. Positive values mean the frozen region
/// reaches beyond the circle.
pub fn arctic_statistic(t: &AztecTiling, alpha: f64) -> Result<f64> {
    if t.n < ARCTIC_MIN_ORDER {
        return Err(range_err(format!(
            "arctic statistic needs order >= {ARCTIC_MIN_ORDER}, got {}",
            t.n
        )));
    }
    if !(alpha.abs() < 1.0) || alpha == 0.0 {
        return Err(range_err(format!("alpha = {alpha} must satisfy 0 < |alpha| < 1")));
    }
    let m = t.n as i32;
    let g = t.kind_grid();
    let (kind, seeds) = if alpha > 0.0 {
        (DominoKind::E, [(m - 1, -1), (m - 1, 0)])
    } else {
        (DominoKind::S, [(-1, -m), (0, -m)])
    };
    let code = kind.code();
    let mut frozen = vec![false; g.cells.len()];
    let mut queue = VecDeque::new();
    for (x, y) in seeds {
        if g.get(x, y) == code {
            frozen[g.idx(x, y)] = true;
            queue.push_back((x, y));
        }
    }
    while let Some((x, y)) = queue.pop_front() {
        for (nx, ny) in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
            if in_diamond(m, nx, ny) && g.get(nx, ny) == code && !frozen[g.idx(nx, ny)] {
                frozen[g.idx(nx, ny)] = true;
                queue.push_back((nx, ny));
            }
        }
    }
    let c = (alpha * t.n as f64 - 1.0).round() as i32;
    let mut x = m - 1;
    while !in_diamond(m, x, c - x) {
        x -= 1;
    }
    let mut last = x - (c - x) + 2;
    while in_diamond(m, x, c - x) && frozen[g.idx(x, c - x)] {
        last = x - (c - x);
        x -= 1;
    }
    let q = (last - 1) as f64 / t.n as f64;
    Ok((q - (1.0 - alpha * alpha).sqrt()) / std::f64::consts::SQRT_2)
}

// ---------------------------------------------------------------------------
// buses

/// Attempt budget of the rejection sampler.
pub const BUS_ATTEMPT_BUDGET: u64 = 10_000_000;
/// Largest bus count the rejection sampler accepts.
pub const BUS_MAX: usize = 6;

/// Non-intersecting bus paths on `[0, T]`. Bus `j` starts at `j - (n - 1)`
/// and makes `route_len` unit jumps at the times in `jumps[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BusRealization {
    pub n: usize,
    pub horizon: f64,
    pub route_len: usize,
    pub jumps: Vec<Vec<f64>>,
    pub attempts: u64,
}

impl BusRealization {
    pub fn start(&self, j: usize) -> i64 {
        j as i64 - (self.n as i64 - 1)
    }

    pub fn position(&self, j: usize, t: f64) -> i64 {
        self.start(j) + self.jumps[j].partition_point(|&s| s <= t) as i64
    }

    /// Times at which the buses reach site `x`, valid for
    /// `1 <= x <= route_len - n + 1`.
    pub fn arrival_times(&self, x: usize) -> Result<Vec<f64>> {
        check_site(self.n, self.route_len, x)?;
        let mut v: Vec<f64> = (0..self.n)
            .map(|j| self.jumps[j][(x as i64 - self.start(j)) as usize - 1])
            .collect();
        v.sort_by(f64::total_cmp);
        Ok(v)
    }

    /// Strict ordering of neighbouring buses at all times.
    pub fn validate(&self) -> Result<()> {
        for j in 0..self.n {
            let p = &self.jumps[j];
            if p.len() != self.route_len || p.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Logic(format!("bus {j} has malformed jump times")));
            }
            if p.iter().any(|&s| !(0.0..=self.horizon).contains(&s)) {
                return Err(Error::Logic(format!("bus {j} jumps outside [0, T]")));
            }
            if j + 1 < self.n {
                let q = &self.jumps[j + 1];
                // bus j sits one site behind bus j + 1, so its k-th jump
                // must come after the k-th jump of the bus ahead
                if p.iter().zip(q).any(|(a, b)| a <= b) {
                    return Err(Error::Logic(format!("buses {j} and {} collide", j + 1)));
                }
            }
        }
        Ok(())
    }
}

fn check_site(n: usize, route_len: usize, x: usize) -> Result<()> {
    if x == 0 || x + n > route_len + 1 {
        return Err(range_err(format!(
            "observation site {x} outside 1..={} for {n} buses on a route of {route_len}",
            route_len + 1 - n
        )));
    }
    Ok(())
}

fn check_bus(n: usize, horizon: f64, route_len: usize) -> Result<()> {
    if n == 0 || n > BUS_MAX {
        return Err(range_err(format!("bus count {n} not in 1..={BUS_MAX}")));
    }
    if route_len <= n {
        return Err(range_err(format!("route length {route_len} must exceed the bus count {n}")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(range_err(format!("horizon {horizon} must be positive")));
    }
    Ok(())
}

/// Rate-1 Poisson paths conditioned on reaching the terminus by `T` (so
/// jump times are uniform order statistics) and on never intersecting,
/// by rejection.
pub fn sample_bus(n: usize, horizon: f64, route_len: usize, rng: &mut StreamRng) -> Result<BusRealization> {
    check_bus(n, horizon, route_len)?;
    let mut jumps = vec![vec![0.0; route_len]; n];
    for attempt in 1..=BUS_ATTEMPT_BUDGET {
        let mut ok = true;
        // front bus first, each new bus checked against the one ahead
        for j in (0..n).rev() {
            let (done, rest) = jumps.split_at_mut(j + 1);
            let p = &mut done[j];
            for s in p.iter_mut() {
                *s = rng.gen::<f64>() * horizon;
            }
            p.sort_by(f64::total_cmp);
            if let Some(q) = rest.first() {
                if p.iter().zip(q).any(|(a, b)| a <= b) {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok(BusRealization { n, horizon, route_len, jumps, attempts: attempt });
        }
    }
    Err(Error::Feasibility(format!(
        "no non-intersecting configuration in {BUS_ATTEMPT_BUDGET} attempts; use fewer buses or a shorter route"
    )))
}

/// Rescaled arrival times `y_j = 2 t_j / T - 1` at site `x`, one sorted
/// vector per draw.
pub fn bus_arrivals(
    n: usize,
    horizon: f64,
    route_len: usize,
    x: usize,
    draws: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    check_bus(n, horizon, route_len)?;
    check_site(n, route_len, x)?;
    par_draws(seed, draws, |rng, _| {
        let b = sample_bus(n, horizon, route_len, rng)?;
        Ok(b.arrival_times(x)?.iter().map(|t| 2.0 * t / horizon - 1.0).collect())
    })
    .into_iter()
    .collect()
}

/// Exponents `(x - 1, N - x - n + 1)` of the Jacobi weight at site `x`.
pub fn jacobi_exponents(n: usize, route_len: usize, x: usize) -> Result<(f64, f64)> {
    check_site(n, route_len, x)?;
    Ok(((x - 1) as f64, (route_len + 1 - x - n) as f64))
}

fn jacobi_log_density(y: &[f64], a: f64, b: f64) -> f64 {
    let mut s = 0.0;
    for (i, &v) in y.iter().enumerate() {
        if v <= -1.0 || v >= 1.0 {
            return f64::NEG_INFINITY;
        }
        s += a * (1.0 + v).ln() + b * (1.0 - v).ln();
        for &w in &y[i + 1..] {
            s += 2.0 * (v - w).abs().ln();
        }
    }
    s
}

/// Independent Metropolis chains for the density
/// `prod (1+y)^a (1-y)^b prod (y_i - y_j)^2` on `(-1, 1)^n`; each draw is
/// the sorted state after `sweeps` single-coordinate sweeps.
pub fn jacobi_metropolis(n: usize, a: f64, b: f64, draws: usize, sweeps: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if n == 0 || !(a > -1.0 && b > -1.0) {
        return Err(range_err(format!("invalid Jacobi ensemble n = {n}, a = {a}, b = {b}")));
    }
    let step = 0.5 / (n as f64).sqrt();
    Ok(par_draws(seed, draws, |rng, _| {
        let mut y: Vec<f64> = (0..n).map(|i| -0.9 + 1.8 * (i as f64 + 0.5) / n as f64).collect();
        let mut cur = jacobi_log_density(&y, a, b);
        for _ in 0..sweeps {
            for i in 0..n {
                let old = y[i];
                let z: f64 = rng.sample(StandardNormal);
                y[i] = old + step * z;
                let prop = jacobi_log_density(&y, a, b);
                if prop - cur >= rng.gen::<f64>().ln() {
                    cur = prop;
                } else {
                    y[i] = old;
                }
            }
        }
        y.sort_by(f64::total_cmp);
        y
    }))
}
