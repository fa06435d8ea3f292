use std::fmt::Write as _;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::point::{run_point_with, PointRecord, PointStatus};
use super::spec::SweepSpec;
use crate::error::{Error, Result};
use crate::gaussian::textio::format_f64;
use crate::optomech::OutputOptions;
use crate::swap::ProtocolClass;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    /// Grid indices along axis 1 and axis 2.
    pub index: [usize; 2],
    /// Axis values in SI units.
    pub axis: [f64; 2],
    pub point: PointRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    /// Axis-1-major order.
    pub records: Vec<SweepRecord>,
}

/// Evaluates every grid point on `workers` threads. The records come back in
/// axis-1-major order whatever the worker count.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> SweepResult {
    run_sweep_with(spec, workers, &OutputOptions::default())
}

pub fn run_sweep_with(spec: &SweepSpec, workers: usize, options: &OutputOptions) -> SweepResult {
    let grid = spec.grid();
    let n2 = grid[1].len();
    let total = spec.len();
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<SweepRecord>>> = Mutex::new(vec![None; total]);
    let workers = workers.clamp(1, total.max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= total {
                    break;
                }
                let (i, j) = (k / n2, k % n2);
                let params = spec.params_at(&grid, i, j);
                let record = SweepRecord {
                    index: [i, j],
                    axis: [grid[0][i], grid[1][j]],
                    point: run_point_with(&params, options),
                };
                slots.lock().expect("no worker panics while holding the lock")[k] = Some(record);
            });
        }
    });
    let records = slots
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|r| r.expect("every grid point evaluated"))
        .collect();
    SweepResult { spec: spec.clone(), records }
}

impl SweepResult {
    pub fn flagged(&self) -> usize {
        self.records.iter().filter(|r| !r.point.is_ok()).count()
    }

    pub fn count(&self, class: ProtocolClass) -> usize {
        self.records.iter().filter(|r| r.point.class == Some(class)).count()
    }

    pub fn header(&self) -> String {
        let [a1, a2] = [self.spec.axes[0].param.column(), self.spec.axes[1].param.column()];
        format!("i,j,{a1},{a2},status,stable,class,E_N_RRE,E_N_CCE,mu_B,mu_RB,mu_BC,chi,G_b,G_c,spectral_abscissa")
    }

    /// CSV text: one header row, then one row per grid point with floats at
    /// 17 significant digits.
    pub fn to_csv(&self) -> String {
        let w = self.spec.base.omega_m;
        let mut out = self.header();
        out.push('\n');
        for r in &self.records {
            let p = &r.point;
            let class = p.class.map(|c| c.as_str()).unwrap_or("");
            let nums = [
                self.spec.axes[0].param.display_value(r.axis[0], w),
                self.spec.axes[1].param.display_value(r.axis[1], w),
            ];
            let _ = write!(out, "{},{},{},{},{},{},{}", r.index[0], r.index[1], format_f64(nums[0]), format_f64(nums[1]), p.status, p.stable, class);
            for v in [p.e_n_rre, p.e_n_cce, p.mu_b, p.mu_rb, p.mu_bc, p.chi, p.couplings[0], p.couplings[1], p.spectral_abscissa] {
                out.push(',');
                out.push_str(&format_f64(v));
            }
            out.push('\n');
        }
        out
    }

    /// Gnuplot `nonuniform matrix` text: first row `n2 x_1 .. x_n2`, then
    /// `y_i z_i1 .. z_in2`, with axis 2 along x.
    pub fn gnuplot_matrix(&self, value: impl Fn(&PointRecord) -> f64) -> String {
        let w = self.spec.base.omega_m;
        let [ax1, ax2] = [self.spec.axes[0].param, self.spec.axes[1].param];
        let grid = self.spec.grid();
        let mut out = format!("{}", grid[1].len());
        for x in &grid[1] {
            out.push(' ');
            out.push_str(&format_f64(ax2.display_value(*x, w)));
        }
        out.push('\n');
        for row in self.records.chunks(grid[1].len()) {
            out.push_str(&format_f64(ax1.display_value(row[0].axis[0], w)));
            for r in row {
                out.push(' ');
                out.push_str(&format_f64(value(&r.point)));
            }
            out.push('\n');
        }
        out
    }

    /// Writes the CSV to `path` and gnuplot matrices for the class number and
    /// both log-negativities next to it (`<stem>.class.dat`, `<stem>.rre.dat`,
    /// `<stem>.cce.dat`).
    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, &self.to_csv())?;
        let class_num = |p: &PointRecord| p.class.map(|c| f64::from(c.number())).unwrap_or(f64::NAN);
        let files: [(&str, String); 3] = [
            ("class", self.gnuplot_matrix(class_num)),
            ("rre", self.gnuplot_matrix(|p| p.e_n_rre)),
            ("cce", self.gnuplot_matrix(|p| p.e_n_cce)),
        ];
        for (tag, text) in files {
            write_file(&path.with_extension(format!("{tag}.dat")), &text)?;
        }
        Ok(())
    }

    pub fn summary(&self) -> String {
        let mut s = format!("points {}", self.records.len());
        for c in ProtocolClass::ALL {
            let _ = write!(s, " {}={}", c, self.count(c));
        }
        for st in [PointStatus::Unstable, PointStatus::NotConverged, PointStatus::Failed] {
            let n = self.records.iter().filter(|r| r.point.status == st).count();
            let _ = write!(s, " {st}={n}");
        }
        if let Some(best) = self
            .records
            .iter()
            .filter(|r| r.point.class == Some(ProtocolClass::Certifiable))
            .max_by(|a, b| a.point.e_n_cce.total_cmp(&b.point.e_n_cce))
        {
            let w = self.spec.base.omega_m;
            let _ = write!(
                s,
                "\nbest certified: {}={:.4} {}={:.4} E_N_RRE={:.4} E_N_CCE={:.4}",
                self.spec.axes[0].param.column(),
                self.spec.axes[0].param.display_value(best.axis[0], w),
                self.spec.axes[1].param.column(),
                self.spec.axes[1].param.display_value(best.axis[1], w),
                best.point.e_n_rre,
                best.point.e_n_cce
            );
        }
        s
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}
