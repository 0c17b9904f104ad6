//! Subcommand implementations: each sweep is a thin wrapper around the
//! library and emits one deterministic table.

use clap::Args;

use entvis::closedform::{
    enumerate_levels, BlockExcitation, ExcitationLabel, WavefunctionQuery,
};
use entvis::fockspace::{ground_energy_mean_n, mean_n_visibility, sep_min_energy_mean_n};
use entvis::model::{EnsembleSpec, Partition};
use entvis::thermal::thermal_grid;
use entvis::visibility::{max_visibility, optimal_particle_number, partition_visibility};
use entvis::{closedform, Error};

use crate::table::{Cell, Table};
use crate::CliError;

fn ensemble(n: u64, r: f64) -> Result<EnsembleSpec, CliError> {
    EnsembleSpec::new(n, r).map_err(|e| CliError::Param(e.to_string()))
}

/// Evenly spaced samples, linear or logarithmic.
fn grid(min: f64, max: f64, points: usize, log: bool) -> Result<Vec<f64>, CliError> {
    if points == 0 {
        return Err(CliError::Param("need at least one grid point".into()));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    if !(min <= max) {
        return Err(CliError::Param(format!("empty range {min}..{max}")));
    }
    if log && min <= 0.0 {
        return Err(CliError::Param("logarithmic grids need positive endpoints".into()));
    }
    let n = (points - 1) as f64;
    Ok((0..points)
        .map(|k| {
            let t = k as f64 / n;
            if log {
                (min.ln() + t * (max.ln() - min.ln())).exp()
            } else {
                min + t * (max - min)
            }
        })
        .collect())
}

/// Maximal visibility of the two-particle energy witness across a range
/// of coupling ratios.
#[derive(Debug, Args)]
pub struct BipartiteVisibility {
    #[arg(long, default_value_t = 1e-3)]
    pub r_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub r_max: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Linear instead of logarithmic spacing in R.
    #[arg(long)]
    pub linear: bool,
}

impl BipartiteVisibility {
    pub fn run(&self) -> Result<Table, CliError> {
        let mut table = Table::new(vec!["coupling_ratio", "v_max"]);
        for r in grid(self.r_min, self.r_max, self.points, !self.linear)? {
            let v = max_visibility(&ensemble(2, r)?);
            table.push(vec![Cell::Float(r), Cell::Float(v.visibility)]);
        }
        Ok(table)
    }
}

/// The lowest levels of the ordinary and the fully separable spectrum.
#[derive(Debug, Args)]
pub struct Spectrum {
    #[arg(long, default_value_t = 2)]
    pub n: u64,
    #[arg(long, default_value_t = 1.5)]
    pub r: f64,
    #[arg(long, default_value_t = 8)]
    pub count: usize,
}

impl Spectrum {
    pub fn run(&self) -> Result<Table, CliError> {
        let spec = ensemble(self.n, self.r)?;
        let trivial = Partition::trivial(self.n).map_err(CliError::numeric)?;
        let full = Partition::full(self.n).map_err(CliError::numeric)?;
        let standard = enumerate_levels(&spec, &trivial, self.count).map_err(CliError::numeric)?;
        let separable = enumerate_levels(&spec, &full, self.count).map_err(CliError::numeric)?;
        let mut table = Table::new(vec!["level", "e_standard_uE", "e_separable_uE"]);
        for (k, (s, p)) in standard.iter().zip(&separable).enumerate() {
            table.push(vec![Cell::Int(k as u64), Cell::Float(s.value), Cell::Float(p.value)]);
        }
        Ok(table)
    }
}

/// Two-particle eigenfunction or separability eigenfunction amplitudes
/// on a square position grid.
#[derive(Debug, Args)]
pub struct WavefunctionGrid {
    /// Particle count; the grid output is defined for n = 2.
    #[arg(long, default_value_t = 2)]
    pub n: u64,
    #[arg(long, default_value_t = 1.5)]
    pub r: f64,
    /// Which family: the entangled eigenstates (trivial) or the product
    /// separability eigenstates (full).
    #[arg(long, default_value = "trivial")]
    pub partition: String,
    /// Two comma-separated quantum numbers: "n_par,n_perp" for the
    /// trivial partition, "n_a,n_b" for the full one.
    #[arg(long, default_value = "0,0")]
    pub label: String,
    #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
    pub min: f64,
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    pub max: f64,
    #[arg(long, default_value_t = 81)]
    pub points: usize,
    /// Multiply by the analytic factor that makes the state unit-norm.
    #[arg(long)]
    pub normalized: bool,
}

impl WavefunctionGrid {
    pub fn run(&self) -> Result<Table, CliError> {
        if self.n != 2 {
            return Err(CliError::Param("wavefunction-grid plots the two-particle plane; --n must be 2".into()));
        }
        let spec = ensemble(2, self.r)?;
        let nums: Vec<u64> = self
            .label
            .split(',')
            .map(|s| s.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Param(format!("bad --label: {e}")))?;
        if nums.len() != 2 {
            return Err(CliError::Param("--label needs exactly two quantum numbers".into()));
        }
        let (partition, label) = match self.partition.as_str() {
            "trivial" => (
                Partition::trivial(2).unwrap(),
                ExcitationLabel::new(vec![BlockExcitation {
                    parallel: nums[0],
                    perpendicular: vec![nums[1]],
                }]),
            ),
            "full" => (
                Partition::full(2).unwrap(),
                ExcitationLabel::new(vec![
                    BlockExcitation { parallel: nums[0], perpendicular: vec![] },
                    BlockExcitation { parallel: nums[1], perpendicular: vec![] },
                ]),
            ),
            other => {
                return Err(CliError::Param(format!(
                    "--partition must be 'trivial' or 'full', got '{other}'"
                )))
            }
        };
        let axis = grid(self.min, self.max, self.points, false)?;
        let mut points = Vec::with_capacity(axis.len() * axis.len());
        for &xa in &axis {
            for &xb in &axis {
                points.push(vec![xa, xb]);
            }
        }
        let query = WavefunctionQuery { partition, label, points, normalized: self.normalized };
        let amplitudes = closedform::wavefunction_eval(&query, &spec).map_err(CliError::numeric)?;
        let mut table = Table::new(vec!["x_a_ux", "x_b_ux", "amplitude"]);
        let mut k = 0;
        for &xa in &axis {
            for &xb in &axis {
                table.push(vec![Cell::Float(xa), Cell::Float(xb), Cell::Float(amplitudes[k])]);
                k += 1;
            }
        }
        Ok(table)
    }
}

/// Maximal visibility against the particle number at fixed coupling.
#[derive(Debug, Args)]
pub struct VisibilityVsN {
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 1000)]
    pub n_max: u64,
}

impl VisibilityVsN {
    pub fn run(&self) -> Result<Table, CliError> {
        if self.n_max < 1 {
            return Err(CliError::Param("--n-max must be at least 1".into()));
        }
        let mut table = Table::new(vec!["n", "v_max"]);
        for n in 1..=self.n_max {
            let v = max_visibility(&ensemble(n, self.r)?);
            table.push(vec![Cell::Int(n), Cell::Float(v.visibility)]);
        }
        // The real-valued optimum and its two integer neighbors go to the
        // diagnostic stream; the table stays a pure (N, V) sweep.
        match optimal_particle_number(self.r) {
            Ok(n_opt) => {
                let lo = (n_opt.floor() as u64).max(1);
                let hi = n_opt.ceil() as u64;
                let v_lo = max_visibility(&ensemble(lo, self.r)?).visibility;
                eprintln!("optimal particle number (real root): {n_opt:.12}");
                if hi == lo {
                    eprintln!("integer optimum: N={lo} (v_max = {v_lo:.12e})");
                } else {
                    let v_hi = max_visibility(&ensemble(hi, self.r)?).visibility;
                    eprintln!(
                        "neighboring integers: N={lo} (v_max = {v_lo:.12e}), N={hi} (v_max = {v_hi:.12e})"
                    );
                }
            }
            Err(Error::DivergentOptimum) => {
                eprintln!("optimal particle number diverges as R -> 0");
            }
            Err(e) => return Err(CliError::numeric(e)),
        }
        Ok(table)
    }
}

/// Partial-entanglement visibility across equal-block partitions.
#[derive(Debug, Args)]
pub struct PartitionScan {
    #[arg(long, default_value_t = 1024)]
    pub n: u64,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Comma-separated block counts; default: all powers of two from 2
    /// to n that divide n.
    #[arg(long)]
    pub ks: Option<String>,
}

impl PartitionScan {
    pub fn run(&self) -> Result<Table, CliError> {
        let spec = ensemble(self.n, self.r)?;
        let ks: Vec<u64> = match &self.ks {
            Some(list) => list
                .split(',')
                .map(|s| s.trim().parse::<u64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Param(format!("bad --ks: {e}")))?,
            None => {
                let mut ks = Vec::new();
                let mut k = 2;
                while k <= self.n {
                    if self.n % k == 0 {
                        ks.push(k);
                    }
                    k *= 2;
                }
                ks
            }
        };
        let mut table = Table::new(vec!["k", "block_size", "e_min_uE", "v_k"]);
        for k in ks {
            let partition =
                Partition::equal_blocks(self.n, k).map_err(|e| CliError::Param(e.to_string()))?;
            let report = partition_visibility(&spec, &partition).map_err(CliError::numeric)?;
            table.push(vec![
                Cell::Int(k),
                Cell::Int(self.n / k),
                Cell::Float(report.separable_bound),
                Cell::Float(report.visibility),
            ]);
        }
        Ok(table)
    }
}

/// Mean-particle-number visibility sweep (fluctuating particle number).
#[derive(Debug, Args)]
pub struct MeanNVisibility {
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 0.0)]
    pub nbar_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub nbar_max: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

impl MeanNVisibility {
    pub fn run(&self) -> Result<Table, CliError> {
        if self.nbar_min < 0.0 {
            return Err(CliError::Param("--nbar-min must be nonnegative".into()));
        }
        let mut table = Table::new(vec!["nbar", "e_min_uE", "e_sep_min_uE", "v"]);
        for nbar in grid(self.nbar_min, self.nbar_max, self.points, false)? {
            let report = mean_n_visibility(self.r, nbar).map_err(CliError::numeric)?;
            table.push(vec![
                Cell::Float(nbar),
                Cell::Float(ground_energy_mean_n(self.r, nbar)),
                Cell::Float(sep_min_energy_mean_n(self.r, nbar)),
                Cell::Float(report.visibility),
            ]);
        }
        Ok(table)
    }
}

fn parse_range(s: &str, what: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let err = || CliError::Param(format!("--{what} expects 'lo:hi', got '{s}'"));
    if parts.len() != 2 {
        return Err(err());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| err())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| err())?;
    Ok((lo, hi))
}

/// Thermal-state visibility on a (mean particle number) × (temperature)
/// grid.
#[derive(Debug, Args)]
pub struct ThermalGrid {
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Mean particle number range as 'lo:hi'.
    #[arg(long, default_value = "1:100")]
    pub nbar: String,
    #[arg(long, default_value_t = 25)]
    pub nbar_points: usize,
    /// Temperature range as 'lo:hi', in units of u_T.
    #[arg(long, default_value = "0.01:100")]
    pub t: String,
    #[arg(long, default_value_t = 25)]
    pub t_points: usize,
    /// Logarithmic spacing on both axes.
    #[arg(long)]
    pub log: bool,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

impl ThermalGrid {
    pub fn run(&self) -> Result<Table, CliError> {
        let (nbar_lo, nbar_hi) = parse_range(&self.nbar, "nbar")?;
        let (t_lo, t_hi) = parse_range(&self.t, "t")?;
        if nbar_lo <= 0.0 {
            return Err(CliError::Param("mean particle numbers must be positive".into()));
        }
        if t_lo <= 0.0 {
            return Err(CliError::Param("temperatures must be positive".into()));
        }
        let means = grid(nbar_lo, nbar_hi, self.nbar_points, self.log)?;
        let temps = grid(t_lo, t_hi, self.t_points, self.log)?;
        let points = thermal_grid(self.r, &means, &temps, self.tol).map_err(CliError::numeric)?;
        let mut table =
            Table::new(vec!["nbar", "t_uT", "alpha", "mean_energy_uE", "ln_z", "v"]);
        for (idx, point) in points.iter().enumerate() {
            let mean_requested = means[idx / temps.len()];
            table.push(vec![
                Cell::Float(mean_requested),
                Cell::Float(point.temperature),
                Cell::Float(point.alpha),
                Cell::Float(point.mean_energy),
                Cell::Float(point.ln_z),
                Cell::Float(point.visibility),
            ]);
        }
        Ok(table)
    }
}
