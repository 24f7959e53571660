//! Window files: CSV samples and JSON window specifications.
//!
//! CSV files carry a header `x,value_re,value_im` and one grid point per row.
//! JSON files follow this schema (every field except `kind` is optional):
//!
//! ```json
//! {
//!   "kind": "gaussian",
//!   "params": { "center": 0.0, "width": 1.0 },
//!   "amplitude": [1.0, 0.0],
//!   "eps_tail": 1e-12,
//!   "support": [-4.0, 4.0],
//!   "cell_sups": { "scale": 1.0, "decay": { "power": 0.5 }, "overlap": 1, "period": 1.0, "two_sided": false },
//!   "samples": [[0.0, 1.0, 0.0], [0.125, 0.5, 0.0]]
//! }
//! ```
//!
//! `kind` is one of `gaussian`, `rect`, `hat`, `exponential`, `samples`,
//! `paper_f1`, `paper_f2`, `paper_f3`. `samples` rows are `[x, re, im]`.
//! `support` zeroes the sampled window outside `[lo, hi)`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use gabor_fiber_core::spaces::{CellSups, Decay, SampledWindow, WindowSpec};
use gabor_fiber_core::C64;
use serde::{Deserialize, Serialize};

use crate::config::WindowSource;
use crate::CliError;

/// Relative tolerance for `x` coordinates landing on the grid.
const GRID_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Params {
    center: Option<f64>,
    width: Option<f64>,
    lo: Option<f64>,
    hi: Option<f64>,
    half_width: Option<f64>,
    rate: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum DecayDto {
    Compact(u32),
    Geometric(f64),
    Gaussian(f64),
    Power(f64),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellSupsDto {
    #[serde(default = "one")]
    scale: f64,
    decay: DecayDto,
    overlap: Option<u32>,
    #[serde(default = "one")]
    period: f64,
    #[serde(default)]
    two_sided: bool,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct WindowFile {
    kind: String,
    #[serde(default)]
    params: Params,
    amplitude: Option<[f64; 2]>,
    eps_tail: Option<f64>,
    support: Option<[f64; 2]>,
    cell_sups: Option<CellSupsDto>,
    samples: Option<Vec<[f64; 3]>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct CsvRow {
    x: f64,
    value_re: f64,
    value_im: f64,
}

/// A window ready for analysis together with its specification.
#[derive(Debug, Clone)]
pub struct LoadedWindow {
    pub spec: WindowSpec,
    pub samples: SampledWindow,
}

pub fn load_window(source: &WindowSource, step: f64) -> Result<LoadedWindow, CliError> {
    let (spec, support) = match source {
        WindowSource::Builtin(name) => (builtin(name)?, None),
        WindowSource::File(path) => match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => (WindowSpec::samples(read_csv(File::open(path).map_err(|e| io_err(path, e))?, step)?), None),
            _ => {
                let mut text = String::new();
                File::open(path).and_then(|mut f| f.read_to_string(&mut text)).map_err(|e| io_err(path, e))?;
                parse_json_spec(&text, step)?
            }
        },
    };
    let samples = spec.sample(step)?;
    let Some([lo, hi]) = support else {
        return Ok(LoadedWindow { spec, samples });
    };
    let samples = samples.restricted(on_grid(lo, step)?, on_grid(hi, step)?);
    let spec = WindowSpec::samples(samples.clone()).with_cell_sups(spec.cell_sups);
    Ok(LoadedWindow { spec, samples })
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn on_grid(x: f64, step: f64) -> Result<i64, CliError> {
    let t = x / step;
    let i = t.round();
    if (t - i).abs() > GRID_TOL * t.abs().max(1.0) {
        return Err(CliError::Input(format!("x = {x} is not on the grid of step {step}")));
    }
    Ok(i as i64)
}

/// Builtin windows: `gaussian[:center:width]`, `rect[:lo:hi]`,
/// `hat[:center:half_width]`, `exponential[:center:rate]`, `paper_f1..3`.
pub fn builtin(name: &str) -> Result<WindowSpec, CliError> {
    let mut parts = name.split(':');
    let kind = parts.next().unwrap_or_default();
    let args = parts
        .map(|p| p.parse::<f64>().map_err(|_| CliError::Input(format!("bad number {p:?} in window {name:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let two = |d0: f64, d1: f64| -> Result<(f64, f64), CliError> {
        match args.as_slice() {
            [] => Ok((d0, d1)),
            [x, y] => Ok((*x, *y)),
            _ => Err(CliError::Input(format!("window {name:?} takes zero or two parameters"))),
        }
    };
    let none = || -> Result<(), CliError> {
        if args.is_empty() {
            Ok(())
        } else {
            Err(CliError::Input(format!("window {kind:?} takes no parameters")))
        }
    };
    let spec = match kind {
        "gaussian" => two(0.0, 1.0).and_then(|(c, w)| Ok(WindowSpec::gaussian(c, w)?))?,
        "rect" => two(0.0, 1.0).and_then(|(lo, hi)| Ok(WindowSpec::rect(lo, hi)?))?,
        "hat" => two(0.0, 1.0).and_then(|(c, w)| Ok(WindowSpec::hat(c, w)?))?,
        "exponential" => two(0.0, 1.0).and_then(|(c, r)| Ok(WindowSpec::exponential(c, r)?))?,
        "paper_f1" => none().map(|_| WindowSpec::paper_f1())?,
        "paper_f2" => none().map(|_| WindowSpec::paper_f2())?,
        "paper_f3" => none().map(|_| WindowSpec::paper_f3())?,
        _ => return Err(CliError::Input(format!("unknown window {name:?}"))),
    };
    Ok(spec)
}

type Support = Option<[f64; 2]>;

pub fn parse_json_spec(text: &str, step: f64) -> Result<(WindowSpec, Support), CliError> {
    let file: WindowFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("window json: {e}")))?;
    let p = &file.params;
    let need =
        |v: Option<f64>, what: &str| v.ok_or_else(|| CliError::Input(format!("{} needs params.{what}", file.kind)));
    let mut spec = match file.kind.as_str() {
        "gaussian" => WindowSpec::gaussian(p.center.unwrap_or(0.0), p.width.unwrap_or(1.0))?,
        "rect" => WindowSpec::rect(need(p.lo, "lo")?, need(p.hi, "hi")?)?,
        "hat" => WindowSpec::hat(p.center.unwrap_or(0.0), need(p.half_width, "half_width")?)?,
        "exponential" => WindowSpec::exponential(p.center.unwrap_or(0.0), need(p.rate, "rate")?)?,
        "paper_f1" => WindowSpec::paper_f1(),
        "paper_f2" => WindowSpec::paper_f2(),
        "paper_f3" => WindowSpec::paper_f3(),
        "samples" => {
            let rows = file
                .samples
                .as_deref()
                .ok_or_else(|| CliError::Input("samples window needs a samples array".into()))?;
            let rows: Vec<CsvRow> = rows.iter().map(|&[x, re, im]| CsvRow { x, value_re: re, value_im: im }).collect();
            WindowSpec::samples(assemble(&rows, step)?)
        }
        other => return Err(CliError::Input(format!("unknown window kind {other:?}"))),
    };
    if let Some([re, im]) = file.amplitude {
        spec = spec.with_amplitude(C64::new(re, im));
    }
    if let Some(eps) = file.eps_tail {
        if !(eps > 0.0) {
            return Err(CliError::Input("eps_tail must be positive".into()));
        }
        spec = spec.with_eps_tail(eps);
    }
    if let Some(m) = file.cell_sups {
        let decay = match m.decay {
            DecayDto::Compact(cells) => Decay::Compact { cells },
            DecayDto::Geometric(ratio) => Decay::Geometric { ratio },
            DecayDto::Gaussian(rate) => Decay::Gaussian { rate },
            DecayDto::Power(exponent) => Decay::Power { exponent },
        };
        let mut model = CellSups::new(m.scale, decay, m.period)?;
        if let Some(o) = m.overlap {
            model = model.with_overlap(o);
        }
        if m.two_sided {
            model = model.two_sided();
        }
        spec = spec.with_cell_sups(Some(model));
    }
    if let Some([lo, hi]) = file.support {
        if !(hi > lo) {
            return Err(CliError::Input("support needs lo < hi".into()));
        }
    }
    Ok((spec, file.support))
}

pub fn read_csv(reader: impl Read, step: f64) -> Result<SampledWindow, CliError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let rows = rdr
        .deserialize::<CsvRow>()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Input(format!("window csv: {e}")))?;
    assemble(&rows, step)
}

fn assemble(rows: &[CsvRow], step: f64) -> Result<SampledWindow, CliError> {
    let mut points = BTreeMap::new();
    for r in rows {
        if !(r.x.is_finite() && r.value_re.is_finite() && r.value_im.is_finite()) {
            return Err(CliError::Input(format!("non-finite sample at x = {}", r.x)));
        }
        if points.insert(on_grid(r.x, step)?, C64::new(r.value_re, r.value_im)).is_some() {
            return Err(CliError::Input(format!("duplicate sample at x = {}", r.x)));
        }
    }
    let (Some((&lo, _)), Some((&hi, _))) = (points.first_key_value(), points.last_key_value()) else {
        return Ok(SampledWindow::zero(step)?);
    };
    let mut values = vec![C64::new(0.0, 0.0); (hi - lo + 1) as usize];
    for (i, z) in points {
        values[(i - lo) as usize] = z;
    }
    Ok(SampledWindow::new(step, lo, values)?)
}

pub fn write_csv(w: &SampledWindow, out: impl Write) -> Result<(), CliError> {
    let mut wtr = csv::Writer::from_writer(out);
    for (i, z) in (w.start()..w.end()).zip(w.values()) {
        wtr.serialize(CsvRow { x: w.x(i), value_re: z.re, value_im: z.im }).map_err(|e| CliError::Io(e.to_string()))?;
    }
    wtr.flush().map_err(|e| CliError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const STEP: f64 = 0.125;

    #[test]
    fn csv_round_trip() {
        let w = SampledWindow::new(STEP, -3, (0..7).map(|i| C64::new(i as f64, -(i as f64) / 2.0)).collect()).unwrap();
        let mut buf = Vec::new();
        write_csv(&w, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x,value_re,value_im\n-0.375,"));
        assert_eq!(read_csv(buf.as_slice(), STEP).unwrap(), w);
    }

    #[test]
    fn csv_rejects_off_grid_and_duplicates() {
        let off = "x,value_re,value_im\n0.1,1,0\n";
        assert!(matches!(read_csv(off.as_bytes(), STEP), Err(CliError::Input(_))));
        let dup = "x,value_re,value_im\n0.125,1,0\n0.125,2,0\n";
        assert!(matches!(read_csv(dup.as_bytes(), STEP), Err(CliError::Input(_))));
    }

    #[test]
    fn csv_gaps_are_zero() {
        let w = read_csv("x,value_re,value_im\n0,1,0\n0.5,2,0\n".as_bytes(), STEP).unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(w.get(2), C64::new(0.0, 0.0));
        assert_eq!(w.get(4), C64::new(2.0, 0.0));
    }

    #[test]
    fn builtin_names() {
        assert_eq!(builtin("rect").unwrap(), WindowSpec::rect(0.0, 1.0).unwrap());
        assert_eq!(builtin("rect:-1:2").unwrap(), WindowSpec::rect(-1.0, 2.0).unwrap());
        assert_eq!(builtin("gaussian").unwrap(), WindowSpec::gaussian(0.0, 1.0).unwrap());
        assert_eq!(builtin("paper_f2").unwrap(), WindowSpec::paper_f2());
        assert!(builtin("rect:1").is_err());
        assert!(builtin("paper_f1:2:3").is_err());
        assert!(builtin("sinc").is_err());
        assert!(builtin("rect:2:1").is_err());
    }

    #[test]
    fn json_specs() {
        let (spec, support) =
            parse_json_spec(r#"{"kind":"rect","params":{"lo":0,"hi":2},"support":[0,1]}"#, STEP).unwrap();
        assert_eq!(spec, WindowSpec::rect(0.0, 2.0).unwrap());
        assert_eq!(support, Some([0.0, 1.0]));
        let (spec, _) = parse_json_spec(
            r#"{"kind":"samples","samples":[[0,1,0],[0.25,0,1]],"cell_sups":{"decay":{"power":0.5},"overlap":1}}"#,
            STEP,
        )
        .unwrap();
        let w = spec.sample(STEP).unwrap();
        assert_eq!((w.start(), w.len()), (0, 3));
        assert_eq!(w.get(2), C64::new(0.0, 1.0));
        let model = spec.cell_sups.unwrap();
        assert_eq!((model.decay, model.overlap), (Decay::Power { exponent: 0.5 }, Some(1)));
        assert!(parse_json_spec(r#"{"kind":"rect","params":{"lo":0}}"#, STEP).is_err());
        assert!(parse_json_spec(r#"{"kind":"rect","params":{"lo":0,"hi":1},"colour":3}"#, STEP).is_err());
    }
}
