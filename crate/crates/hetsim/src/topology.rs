//! Scenario parameters, hexagonal sector geometry and random network drops.
//!
//! One macro site sits at the origin with three sectors whose boresights
//! point at 0°, 120° and 240°. The site's hexagonal cell (circumradius
//! ISD/√3) is partitioned into three rhombic sectors of two equilateral
//! triangles each. Per sector, `P` picocells are dropped uniformly with
//! minimum-distance constraints, and each picocell attracts a hotspot cluster
//! of UEs while the remaining UEs fall uniformly across the sector.
//!
//! All placement is rejection sampling with a hard attempt budget; an
//! impossible combination of distances fails fast with the name of the
//! violated constraint instead of spinning forever.

use std::fmt;
use std::io::{BufRead, Write};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

// ---------------------------------------------------------------------------
// Scenario configuration
// ---------------------------------------------------------------------------

/// Static description of the network to drop.
///
/// Defaults reproduce the reference deployment: 500 m inter-site distance,
/// three sectors, 30 UEs per sector of which two thirds cluster around the
/// picocells, and 3GPP minimum separation distances.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    /// Inter-site distance of the (virtual) macro grid in meters. Controls
    /// the hexagon size: circumradius = isd / √3.
    pub isd_m: f64,
    /// Number of sectors at the macro site. The rhombic partition of the
    /// hexagon is defined for exactly three.
    pub num_sectors: usize,
    /// Picocells per sector. Zero gives a macro-only deployment.
    pub picos_per_sector: usize,
    /// UEs per sector.
    pub ues_per_sector: usize,
    /// Fraction of UEs placed in picocell hotspots (before the per-pico
    /// ceiling rounds it up).
    pub hotspot_fraction: f64,
    /// Radius of the hotspot disc around each picocell in meters.
    pub hotspot_radius_m: f64,
    /// Minimum macro-site to picocell distance in meters.
    pub min_dist_mbs_pbs_m: f64,
    /// Minimum picocell to picocell distance in meters.
    pub min_dist_pbs_pbs_m: f64,
    /// Minimum macro-site to UE distance in meters.
    pub min_dist_mbs_ue_m: f64,
    /// Minimum picocell to UE distance in meters.
    pub min_dist_pbs_ue_m: f64,
    /// Rejection-sampling budget per placed node.
    pub max_placement_attempts: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            isd_m: 500.0,
            num_sectors: 3,
            picos_per_sector: 2,
            ues_per_sector: 30,
            hotspot_fraction: 2.0 / 3.0,
            hotspot_radius_m: 40.0,
            min_dist_mbs_pbs_m: 75.0,
            min_dist_pbs_pbs_m: 40.0,
            min_dist_mbs_ue_m: 35.0,
            min_dist_pbs_ue_m: 10.0,
            max_placement_attempts: 100_000,
        }
    }
}

impl ScenarioConfig {
    /// Hotspot UEs per picocell: ceil(hotspot_fraction · N_ue / P).
    pub fn hotspot_ues_per_pico(&self) -> usize {
        if self.picos_per_sector == 0 {
            return 0;
        }
        let want = self.hotspot_fraction * self.ues_per_sector as f64;
        (want / self.picos_per_sector as f64).ceil() as usize
    }

    /// Uniformly dropped UEs per sector (the rest of the sector population).
    pub fn uniform_ues_per_sector(&self) -> usize {
        self.ues_per_sector - self.hotspot_ues_per_pico() * self.picos_per_sector
    }

    /// Circumradius of the site's hexagonal cell.
    pub fn hex_circumradius_m(&self) -> f64 {
        self.isd_m / 3f64.sqrt()
    }

    /// Checks internal consistency; every simulation entry point calls this.
    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(SimError::Config(msg));
        if self.num_sectors != 3 {
            return err(format!(
                "num_sectors must be 3 (hexagon partition), got {}",
                self.num_sectors
            ));
        }
        if !(self.isd_m > 0.0) {
            return err(format!("isd_m must be positive, got {}", self.isd_m));
        }
        for (name, v) in [
            ("hotspot_radius_m", self.hotspot_radius_m),
            ("min_dist_mbs_pbs_m", self.min_dist_mbs_pbs_m),
            ("min_dist_pbs_pbs_m", self.min_dist_pbs_pbs_m),
            ("min_dist_mbs_ue_m", self.min_dist_mbs_ue_m),
            ("min_dist_pbs_ue_m", self.min_dist_pbs_ue_m),
        ] {
            if !(v > 0.0) {
                return err(format!("{name} must be positive, got {v}"));
            }
        }
        if self.ues_per_sector == 0 {
            return err("ues_per_sector must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.hotspot_fraction) {
            return err(format!(
                "hotspot_fraction must lie in [0,1], got {}",
                self.hotspot_fraction
            ));
        }
        if self.min_dist_pbs_ue_m >= self.hotspot_radius_m {
            return err(format!(
                "min_dist_pbs_ue_m ({}) must be smaller than hotspot_radius_m ({})",
                self.min_dist_pbs_ue_m, self.hotspot_radius_m
            ));
        }
        let hot = self.hotspot_ues_per_pico() * self.picos_per_sector;
        if hot > self.ues_per_sector {
            return err(format!(
                "hotspot allocation needs {hot} UEs per sector but only {} exist; \
                 reduce picos_per_sector or hotspot_fraction",
                self.ues_per_sector
            ));
        }
        if self.min_dist_mbs_pbs_m >= self.hex_circumradius_m() && self.picos_per_sector > 0 {
            return err(format!(
                "min_dist_mbs_pbs_m ({}) leaves no room inside the hexagon (circumradius {:.1})",
                self.min_dist_mbs_pbs_m,
                self.hex_circumradius_m()
            ));
        }
        if self.max_placement_attempts == 0 {
            return err("max_placement_attempts must be positive".into());
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

/// A point in the horizontal plane, meters, site at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Azimuth in degrees within (-180, 180], measured counterclockwise from
    /// the +x axis (sector-0 boresight).
    pub fn azimuth_deg(&self) -> f64 {
        self.y.atan2(self.x).to_degrees()
    }
}

/// Boresight azimuth of a sector in degrees.
pub fn sector_boresight_deg(sector: usize) -> f64 {
    120.0 * sector as f64
}

/// Sector that covers a point: azimuth within ±60° of the sector boresight.
pub fn sector_of_point(p: &Point) -> usize {
    let az = p.azimuth_deg();
    if (-60.0..60.0).contains(&az) {
        0
    } else if (60.0..180.0).contains(&az) {
        1
    } else {
        2
    }
}

/// True if the point lies inside the site's hexagon (circumradius `r_hex`,
/// vertices along the boresight and inter-sector directions).
pub fn point_in_hex(p: &Point, r_hex: f64) -> bool {
    let inradius = r_hex * 3f64.sqrt() / 2.0;
    // Edge outward normals sit halfway between adjacent vertices.
    for k in 0..6 {
        let phi = (30.0 + 60.0 * k as f64).to_radians();
        if p.x * phi.cos() + p.y * phi.sin() > inradius + 1e-9 {
            return false;
        }
    }
    true
}

/// The two equilateral triangles making up a sector, as vertex triples
/// (origin, vertex a, vertex b). Useful for uniform sampling and for
/// equal-area binning of a sector.
pub fn sector_triangles(sector: usize, r_hex: f64) -> [[Point; 3]; 2] {
    let bore = sector_boresight_deg(sector);
    let vertex = |deg: f64| {
        let rad = deg.to_radians();
        Point::new(r_hex * rad.cos(), r_hex * rad.sin())
    };
    let origin = Point::new(0.0, 0.0);
    [
        [origin, vertex(bore - 60.0), vertex(bore)],
        [origin, vertex(bore), vertex(bore + 60.0)],
    ]
}

/// Uniform point in the triangle (a, b, c).
fn sample_in_triangle(tri: &[Point; 3], rng: &mut ChaCha8Rng) -> Point {
    let (mut u, mut v): (f64, f64) = (rng.gen(), rng.gen());
    if u + v > 1.0 {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    let [a, b, c] = tri;
    Point::new(
        a.x + u * (b.x - a.x) + v * (c.x - a.x),
        a.y + u * (b.y - a.y) + v * (c.y - a.y),
    )
}

/// Uniform point in the given sector of the hexagon.
fn sample_in_sector(sector: usize, r_hex: f64, rng: &mut ChaCha8Rng) -> Point {
    let tris = sector_triangles(sector, r_hex);
    let which = rng.gen_range(0..2usize);
    sample_in_triangle(&tris[which], rng)
}

/// Uniform point in the disc of radius `r` around `center`.
fn sample_in_disc(center: &Point, r: f64, rng: &mut ChaCha8Rng) -> Point {
    let radius = r * rng.gen::<f64>().sqrt();
    let phi = rng.gen::<f64>() * std::f64::consts::TAU;
    Point::new(center.x + radius * phi.cos(), center.y + radius * phi.sin())
}

// ---------------------------------------------------------------------------
// Layout
// ---------------------------------------------------------------------------

/// Index of a cell (macro sector or picocell) in [`NetworkLayout::cells`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId(pub usize);

/// Index of a UE in [`NetworkLayout::ues`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct UeId(pub usize);

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for UeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Transmitter tier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tier {
    Macro,
    Pico,
}

/// One base station: a macro sector (co-located at the site, distinguished by
/// boresight) or a picocell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub id: CellId,
    pub tier: Tier,
    pub pos: Point,
    /// Sector the cell belongs to (coverage sector for macros, drop sector
    /// for picos).
    pub sector: usize,
    /// Antenna boresight azimuth; `None` for omnidirectional picos.
    pub boresight_deg: Option<f64>,
}

/// How a UE was dropped; drives nothing at runtime but documents the drop and
/// keeps export/import lossless.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UeTag {
    /// Clustered within the hotspot radius of the given picocell.
    Hotspot(CellId),
    /// Uniformly dropped in the given sector.
    Uniform(usize),
}

/// One user terminal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ue {
    pub id: UeId,
    pub pos: Point,
    pub tag: UeTag,
}

/// A dropped network: cells (macro sectors first, then picos grouped by
/// sector) and UEs (hotspot clusters first within each sector).
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkLayout {
    pub cells: Vec<Cell>,
    pub ues: Vec<Ue>,
}

impl NetworkLayout {
    pub fn num_macro_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.tier == Tier::Macro).count()
    }

    pub fn num_pico_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.tier == Tier::Pico).count()
    }

    /// Macro sector cell covering the given sector index.
    pub fn macro_of_sector(&self, sector: usize) -> CellId {
        CellId(sector)
    }

    /// Picocell ids belonging to one sector.
    pub fn picos_of_sector(&self, sector: usize) -> Vec<CellId> {
        self.cells
            .iter()
            .filter(|c| c.tier == Tier::Pico && c.sector == sector)
            .map(|c| c.id)
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Drop generation
// ---------------------------------------------------------------------------

/// Drops one network according to `cfg`. Deterministic in the RNG state.
///
/// Placement order is fixed (per sector: picos, then hotspot UEs per pico,
/// then uniform UEs), so identical seeds give bit-identical layouts.
pub fn generate_layout(cfg: &ScenarioConfig, rng: &mut ChaCha8Rng) -> Result<NetworkLayout> {
    cfg.validate()?;
    let r_hex = cfg.hex_circumradius_m();
    let site = Point::new(0.0, 0.0);

    let mut cells = Vec::new();
    for s in 0..cfg.num_sectors {
        cells.push(Cell {
            id: CellId(s),
            tier: Tier::Macro,
            pos: site,
            sector: s,
            boresight_deg: Some(sector_boresight_deg(s)),
        });
    }

    // Picos: uniform in sector, away from the site and from each other.
    let mut pico_positions: Vec<Point> = Vec::new();
    for s in 0..cfg.num_sectors {
        for _ in 0..cfg.picos_per_sector {
            let pos = place(cfg.max_placement_attempts, "picocell", || {
                let cand = sample_in_sector(s, r_hex, rng);
                if cand.dist(&site) < cfg.min_dist_mbs_pbs_m {
                    return Err("mbs_pbs_min_dist");
                }
                if pico_positions
                    .iter()
                    .any(|p| p.dist(&cand) < cfg.min_dist_pbs_pbs_m)
                {
                    return Err("pbs_pbs_min_dist");
                }
                Ok(cand)
            })?;
            pico_positions.push(pos);
            let id = CellId(cells.len());
            cells.push(Cell {
                id,
                tier: Tier::Pico,
                pos,
                sector: s,
                boresight_deg: None,
            });
        }
    }

    // UEs: hotspot clusters first, then the uniform remainder of each sector.
    let n_hot = cfg.hotspot_ues_per_pico();
    let n_uni = cfg.uniform_ues_per_sector();
    let mut ues = Vec::new();
    for s in 0..cfg.num_sectors {
        for pico in &cells[cfg.num_sectors..].to_vec() {
            if pico.sector != s {
                continue;
            }
            for _ in 0..n_hot {
                let pos = place(cfg.max_placement_attempts, "hotspot UE", || {
                    let cand = sample_in_disc(&pico.pos, cfg.hotspot_radius_m, rng);
                    if cand.dist(&site) < cfg.min_dist_mbs_ue_m {
                        return Err("mbs_ue_min_dist");
                    }
                    if pico_positions
                        .iter()
                        .any(|p| p.dist(&cand) < cfg.min_dist_pbs_ue_m)
                    {
                        return Err("pbs_ue_min_dist");
                    }
                    Ok(cand)
                })?;
                let id = UeId(ues.len());
                ues.push(Ue {
                    id,
                    pos,
                    tag: UeTag::Hotspot(pico.id),
                });
            }
        }
        for _ in 0..n_uni {
            let pos = place(cfg.max_placement_attempts, "uniform UE", || {
                let cand = sample_in_sector(s, r_hex, rng);
                if cand.dist(&site) < cfg.min_dist_mbs_ue_m {
                    return Err("mbs_ue_min_dist");
                }
                if pico_positions
                    .iter()
                    .any(|p| p.dist(&cand) < cfg.min_dist_pbs_ue_m)
                {
                    return Err("pbs_ue_min_dist");
                }
                Ok(cand)
            })?;
            let id = UeId(ues.len());
            ues.push(Ue {
                id,
                pos,
                tag: UeTag::Uniform(s),
            });
        }
    }

    Ok(NetworkLayout { cells, ues })
}

/// Rejection-sampling helper: retries `sample` until it accepts or the
/// attempt budget is exhausted, reporting the constraint that failed last.
fn place<F>(budget: u64, entity: &str, mut sample: F) -> Result<Point>
where
    F: FnMut() -> std::result::Result<Point, &'static str>,
{
    let mut last = "none";
    for _ in 0..budget {
        match sample() {
            Ok(p) => return Ok(p),
            Err(c) => last = c,
        }
    }
    Err(SimError::Infeasible {
        entity: entity.to_string(),
        constraint: last.to_string(),
        attempts: budget,
    })
}

// ---------------------------------------------------------------------------
// CSV export / import
// ---------------------------------------------------------------------------

/// Writes the layout as CSV (`id,type,x,y,tag`), one row per node.
pub fn export_layout_csv<W: Write>(layout: &NetworkLayout, mut w: W) -> std::io::Result<()> {
    writeln!(w, "id,type,x,y,tag")?;
    for c in &layout.cells {
        match c.tier {
            Tier::Macro => writeln!(
                w,
                "{},macro,{},{},bore{}",
                c.id.0,
                c.pos.x,
                c.pos.y,
                c.boresight_deg.unwrap_or(0.0)
            )?,
            Tier::Pico => writeln!(
                w,
                "{},pico,{},{},sector{}",
                c.id.0, c.pos.x, c.pos.y, c.sector
            )?,
        }
    }
    for u in &layout.ues {
        let tag = match u.tag {
            UeTag::Hotspot(p) => format!("hotspot{}", p.0),
            UeTag::Uniform(s) => format!("uniform{s}"),
        };
        writeln!(w, "{},ue,{},{},{}", u.id.0, u.pos.x, u.pos.y, tag)?;
    }
    Ok(())
}

/// Reads a layout back from CSV written by [`export_layout_csv`].
pub fn import_layout_csv<R: BufRead>(r: R) -> Result<NetworkLayout> {
    let mut cells = Vec::new();
    let mut ues = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line.map_err(|e| SimError::io("<layout csv>", e))?;
        if lineno == 0 {
            if line.trim() != "id,type,x,y,tag" {
                return Err(SimError::Config(format!(
                    "layout csv: unexpected header {line:?}"
                )));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(SimError::Config(format!(
                "layout csv line {}: expected 5 fields, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let parse_f = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| {
                SimError::Config(format!("layout csv line {}: bad {what} {s:?}", lineno + 1))
            })
        };
        let id: usize = fields[0].parse().map_err(|_| {
            SimError::Config(format!(
                "layout csv line {}: bad id {:?}",
                lineno + 1,
                fields[0]
            ))
        })?;
        let pos = Point::new(parse_f(fields[2], "x")?, parse_f(fields[3], "y")?);
        let tag = fields[4];
        match fields[1] {
            "macro" => {
                let bore = parse_f(tag.strip_prefix("bore").unwrap_or("?"), "boresight tag")?;
                cells.push(Cell {
                    id: CellId(id),
                    tier: Tier::Macro,
                    pos,
                    sector: (bore / 120.0).rem_euclid(3.0) as usize,
                    boresight_deg: Some(bore),
                });
            }
            "pico" => {
                let sector: usize = tag
                    .strip_prefix("sector")
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| {
                        SimError::Config(format!(
                            "layout csv line {}: bad pico tag {tag:?}",
                            lineno + 1
                        ))
                    })?;
                cells.push(Cell {
                    id: CellId(id),
                    tier: Tier::Pico,
                    pos,
                    sector,
                    boresight_deg: None,
                });
            }
            "ue" => {
                let tag = if let Some(p) = tag.strip_prefix("hotspot") {
                    UeTag::Hotspot(CellId(p.parse().map_err(|_| {
                        SimError::Config(format!(
                            "layout csv line {}: bad hotspot tag",
                            lineno + 1
                        ))
                    })?))
                } else if let Some(s) = tag.strip_prefix("uniform") {
                    UeTag::Uniform(s.parse().map_err(|_| {
                        SimError::Config(format!(
                            "layout csv line {}: bad uniform tag",
                            lineno + 1
                        ))
                    })?)
                } else {
                    return Err(SimError::Config(format!(
                        "layout csv line {}: unknown ue tag {tag:?}",
                        lineno + 1
                    )));
                };
                ues.push(Ue {
                    id: UeId(id),
                    pos,
                    tag,
                });
            }
            other => {
                return Err(SimError::Config(format!(
                    "layout csv line {}: unknown node type {other:?}",
                    lineno + 1
                )));
            }
        }
    }
    for (i, c) in cells.iter().enumerate() {
        if c.id.0 != i {
            return Err(SimError::Config(format!(
                "layout csv: cell ids not contiguous at {}",
                c.id.0
            )));
        }
    }
    for (i, u) in ues.iter().enumerate() {
        if u.id.0 != i {
            return Err(SimError::Config(format!(
                "layout csv: ue ids not contiguous at {}",
                u.id.0
            )));
        }
    }
    Ok(NetworkLayout { cells, ues })
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;

    fn cfg_with_picos(p: usize) -> ScenarioConfig {
        ScenarioConfig {
            picos_per_sector: p,
            ..ScenarioConfig::default()
        }
    }

    #[test]
    fn hotspot_split_matches_ceiling_rule() {
        // 30 UEs, 2/3 hotspot fraction: 20 clustered UEs to distribute.
        assert_eq!(cfg_with_picos(2).hotspot_ues_per_pico(), 10);
        assert_eq!(cfg_with_picos(2).uniform_ues_per_sector(), 10);
        assert_eq!(cfg_with_picos(4).hotspot_ues_per_pico(), 5);
        assert_eq!(cfg_with_picos(4).uniform_ues_per_sector(), 10);
        assert_eq!(cfg_with_picos(8).hotspot_ues_per_pico(), 3);
        assert_eq!(cfg_with_picos(8).uniform_ues_per_sector(), 6);
        assert_eq!(cfg_with_picos(0).hotspot_ues_per_pico(), 0);
        assert_eq!(cfg_with_picos(0).uniform_ues_per_sector(), 30);
    }

    #[test]
    fn layout_counts_and_grouping() {
        let cfg = cfg_with_picos(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let l = generate_layout(&cfg, &mut rng).unwrap();
        assert_eq!(l.num_macro_cells(), 3);
        assert_eq!(l.num_pico_cells(), 6);
        assert_eq!(l.ues.len(), 90);
        for s in 0..3 {
            assert_eq!(l.picos_of_sector(s).len(), 2);
            assert_eq!(l.macro_of_sector(s), CellId(s));
        }
        let hotspot = l
            .ues
            .iter()
            .filter(|u| matches!(u.tag, UeTag::Hotspot(_)))
            .count();
        assert_eq!(hotspot, 60);
    }

    #[test]
    fn min_distances_hold_over_many_seeds() {
        let cfg = cfg_with_picos(2);
        for seed in 0..1000u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let l = generate_layout(&cfg, &mut rng).unwrap();
            let site = Point::new(0.0, 0.0);
            let picos: Vec<&Cell> = l.cells.iter().filter(|c| c.tier == Tier::Pico).collect();
            for (i, p) in picos.iter().enumerate() {
                assert!(p.pos.dist(&site) >= cfg.min_dist_mbs_pbs_m, "seed {seed}");
                for q in &picos[i + 1..] {
                    assert!(
                        p.pos.dist(&q.pos) >= cfg.min_dist_pbs_pbs_m,
                        "seed {seed}: picos too close"
                    );
                }
            }
            for u in &l.ues {
                assert!(u.pos.dist(&site) >= cfg.min_dist_mbs_ue_m, "seed {seed}");
                for p in &picos {
                    assert!(
                        u.pos.dist(&p.pos) >= cfg.min_dist_pbs_ue_m,
                        "seed {seed}: ue too close to pico"
                    );
                }
            }
        }
    }

    #[test]
    fn hotspot_ues_cluster_around_their_pico() {
        let cfg = cfg_with_picos(4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let l = generate_layout(&cfg, &mut rng).unwrap();
        for u in &l.ues {
            if let UeTag::Hotspot(pico) = u.tag {
                let d = u.pos.dist(&l.cells[pico.0].pos);
                assert!(d <= cfg.hotspot_radius_m + 1e-9);
                assert!(d >= cfg.min_dist_pbs_ue_m);
            }
        }
    }

    #[test]
    fn uniform_ues_stay_in_their_sector() {
        let cfg = cfg_with_picos(2);
        let r_hex = cfg.hex_circumradius_m();
        for seed in 0..50u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let l = generate_layout(&cfg, &mut rng).unwrap();
            for u in &l.ues {
                if let UeTag::Uniform(s) = u.tag {
                    assert!(point_in_hex(&u.pos, r_hex), "seed {seed}");
                    assert_eq!(sector_of_point(&u.pos), s, "seed {seed}");
                }
            }
        }
    }

    #[test]
    fn identical_seeds_give_identical_layouts() {
        let cfg = cfg_with_picos(4);
        let a = generate_layout(&cfg, &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        let b = generate_layout(&cfg, &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        assert_eq!(a, b);
        let c = generate_layout(&cfg, &mut ChaCha8Rng::seed_from_u64(100)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn impossible_pico_spacing_reports_the_constraint() {
        let cfg = ScenarioConfig {
            picos_per_sector: 3,
            min_dist_pbs_pbs_m: 10_000.0,
            max_placement_attempts: 2_000,
            ..ScenarioConfig::default()
        };
        let err = generate_layout(&cfg, &mut ChaCha8Rng::seed_from_u64(5)).unwrap_err();
        match err {
            SimError::Infeasible {
                entity, constraint, ..
            } => {
                assert_eq!(entity, "picocell");
                assert_eq!(constraint, "pbs_pbs_min_dist");
            }
            other => panic!("expected infeasible error, got {other:?}"),
        }
    }

    #[test]
    fn macro_only_deployment_is_legal() {
        let cfg = cfg_with_picos(0);
        let l = generate_layout(&cfg, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(l.num_pico_cells(), 0);
        assert_eq!(l.ues.len(), 90);
        assert!(l.ues.iter().all(|u| matches!(u.tag, UeTag::Uniform(_))));
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let cfg = cfg_with_picos(2);
        let l = generate_layout(&cfg, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        let mut buf = Vec::new();
        export_layout_csv(&l, &mut buf).unwrap();
        let back = import_layout_csv(std::io::Cursor::new(&buf)).unwrap();
        assert_eq!(l, back);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut cfg = ScenarioConfig::default();
        cfg.hotspot_fraction = 1.5;
        assert!(matches!(cfg.validate(), Err(SimError::Config(_))));

        let mut cfg = ScenarioConfig::default();
        cfg.picos_per_sector = 31; // ceil(20/31)=1 hotspot each, 31 > 30 UEs
        assert!(matches!(cfg.validate(), Err(SimError::Config(_))));

        let mut cfg = ScenarioConfig::default();
        cfg.isd_m = -1.0;
        assert!(matches!(cfg.validate(), Err(SimError::Config(_))));
    }
}
