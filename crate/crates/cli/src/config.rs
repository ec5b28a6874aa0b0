use std::path::{Path, PathBuf};
use std::str::FromStr;

use cascade_core::cascade::ExactGridFn;
use cascade_core::cascade::GridFn;
use cascade_core::{ExactScalar, QmfFilter};
use num_rational::BigRational;
use serde::Serialize;

use crate::CliError;

/// Filters shipped with the tool, addressable by name.
pub const BUILTIN_FILTERS: [(&str, &str); 5] = [
    ("haar", include_str!("../filters/haar.json")),
    ("cubic", include_str!("../filters/cubic.json")),
    ("shannon", include_str!("../filters/shannon.json")),
    ("daubechies4", include_str!("../filters/daubechies4.json")),
    ("perturbed_haar", include_str!("../filters/perturbed_haar.json")),
];

/// Reads a filter from a JSON file, falling back to a built-in of the same stem.
pub fn load_filter(spec: &str) -> Result<QmfFilter, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        return Ok(QmfFilter::from_json(&std::fs::read_to_string(path)?)?);
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
    BUILTIN_FILTERS
        .iter()
        .find(|(name, _)| *name == stem)
        .map(|(_, text)| QmfFilter::from_json(text).map_err(CliError::from))
        .unwrap_or_else(|| Err(CliError::Config(format!("no filter file {spec:?} and no built-in named {stem:?}"))))
}

/// Starting vector of a cascade.
#[derive(Clone, Debug, PartialEq)]
pub enum StartSpec {
    /// `χ_[a, b)`.
    Box(BigRational, BigRational),
    /// `χ_[0, 1)`.
    Haar,
    /// Unit-norm Gaussian of width `s`.
    Gauss(f64),
    /// `Σ_k c_k χ_[k, k+1)`.
    Seq(Vec<BigRational>),
}

pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    BigRational::from_str(s.trim()).map_err(|e| CliError::Config(format!("rational {s:?}: {e}")))
}

impl FromStr for StartSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("start {s:?}: expected box:a,b | haar | gauss:s | seq:[c0,c1,...]"));
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        match head.trim() {
            "haar" if rest.is_empty() => Ok(StartSpec::Haar),
            "box" => {
                let (a, b) = rest.split_once(',').ok_or_else(bad)?;
                Ok(StartSpec::Box(parse_rational(a)?, parse_rational(b)?))
            }
            "gauss" => {
                let w: f64 = rest.trim().parse().map_err(|_| bad())?;
                if w > 0.0 && w.is_finite() {
                    Ok(StartSpec::Gauss(w))
                } else {
                    Err(bad())
                }
            }
            "seq" => {
                let body = rest.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
                let cs = body.split(',').filter(|c| !c.trim().is_empty()).map(parse_rational).collect::<Result<Vec<_>, _>>()?;
                if cs.is_empty() {
                    return Err(bad());
                }
                Ok(StartSpec::Seq(cs))
            }
            _ => Err(bad()),
        }
    }
}

impl StartSpec {
    /// The start as an exact grid function; Gaussians have none.
    pub fn grid_fn(&self) -> Result<ExactGridFn, CliError> {
        match self {
            StartSpec::Haar => Ok(GridFn::box_int(0, 1, ExactScalar::from_int(1))),
            StartSpec::Box(a, b) => Ok(GridFn::indicator(a, b)?),
            StartSpec::Seq(cs) => Ok(GridFn::new(0, 0, cs.iter().cloned().map(ExactScalar::from_rational).collect())),
            StartSpec::Gauss(_) => Err(CliError::Config("a gaussian start is only available for band filters".into())),
        }
    }
}

/// `NZ,NX`, or a single size.
pub fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Config(format!("grid {s:?}: expected NZ,NX"));
    let mut it = s.split(',').map(|p| p.trim().parse::<usize>().map_err(|_| bad()));
    let first = it.next().ok_or_else(bad)??;
    let second = it.next().transpose()?.unwrap_or(first);
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((first, second))
}

/// Pass/fail thresholds. Every command reads its limits from here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Zak commutation and dictionary residuals.
    pub zak: f64,
    /// `‖Zh‖² − ‖h‖²` and the round trip.
    pub isometry: f64,
    /// Sub-isometry model identities.
    pub model: f64,
    /// `total² − inf² − B²` in the Shannon trace.
    pub pythagoras: f64,
    /// Agreement of the two forms of `‖φ − MⁿF‖²`.
    pub cascade: f64,
    /// Float fixed-space residual.
    pub ruelle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { zak: 1e-10, isometry: 1e-12, model: 1e-10, pythagoras: 1e-8, cascade: 1e-9, ruelle: 1e-10 }
    }
}

impl Tolerances {
    /// Applies one `name=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<(), CliError> {
        let bad = || CliError::Config(format!("tolerance {assignment:?}: expected NAME=VALUE"));
        let (name, value) = assignment.split_once('=').ok_or_else(bad)?;
        let v: f64 = value.trim().parse().map_err(|_| bad())?;
        if !(v >= 0.0 && v.is_finite()) {
            return Err(bad());
        }
        let slot = match name.trim() {
            "zak" => &mut self.zak,
            "isometry" => &mut self.isometry,
            "model" => &mut self.model,
            "pythagoras" => &mut self.pythagoras,
            "cascade" => &mut self.cascade,
            "ruelle" => &mut self.ruelle,
            other => return Err(CliError::Config(format!("unknown tolerance {other:?}"))),
        };
        *slot = v;
        Ok(())
    }
}

pub const DEFAULT_SEED: u64 = 1;

/// Everything one invocation needs. Unset fields take per-command defaults,
/// and `seed` alone determines every random probe.
#[derive(Clone, Debug, Default)]
pub struct ExperimentConfig {
    pub filter: Option<String>,
    pub iters: Option<usize>,
    pub degree: Option<i64>,
    pub grid: Option<(usize, usize)>,
    pub window: Option<BigRational>,
    pub kmax: Option<u32>,
    pub start: Option<StartSpec>,
    pub trials: Option<usize>,
    pub levels: Option<usize>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub tolerances: Tolerances,
}

impl ExperimentConfig {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn filter(&self) -> Result<QmfFilter, CliError> {
        load_filter(self.filter.as_deref().ok_or_else(|| CliError::Config("a filter is required".into()))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cascade_core::scalar::ratio;

    #[test]
    fn start_specs() {
        assert_eq!("haar".parse::<StartSpec>().unwrap(), StartSpec::Haar);
        assert_eq!("box:0,1/2".parse::<StartSpec>().unwrap(), StartSpec::Box(ratio(0, 1), ratio(1, 2)));
        assert_eq!("gauss:0.5".parse::<StartSpec>().unwrap(), StartSpec::Gauss(0.5));
        assert_eq!(
            "seq:[1, -1/3]".parse::<StartSpec>().unwrap(),
            StartSpec::Seq(vec![ratio(1, 1), ratio(-1, 3)])
        );
        for bad in ["box:1", "gauss:-1", "seq:[]", "seq:1,2", "triangle", "haar:2"] {
            assert!(bad.parse::<StartSpec>().is_err(), "{bad}");
        }
        assert!("box:0,1/3".parse::<StartSpec>().unwrap().grid_fn().is_err());
    }

    #[test]
    fn grids_and_tolerances() {
        assert_eq!(parse_grid("64,32").unwrap(), (64, 32));
        assert_eq!(parse_grid("128").unwrap(), (128, 128));
        assert!(parse_grid("1,2,3").is_err() && parse_grid("a,b").is_err());
        let mut t = Tolerances::default();
        t.set("zak=1e-6").unwrap();
        assert_eq!(t.zak, 1e-6);
        assert!(t.set("zak=-1").is_err() && t.set("speed=1").is_err() && t.set("zak").is_err());
    }

    proptest::proptest! {
        #[test]
        fn specs_round_trip(a in -50i64..50, w in 1i64..50, d in 0u32..5, nz in 1usize..4096, nx in 1usize..4096) {
            let (lo, hi) = (ratio(a, 1 << d), ratio(a + w, 1 << d));
            let spec: StartSpec = format!("box:{lo},{hi}").parse().unwrap();
            proptest::prop_assert_eq!(&spec, &StartSpec::Box(lo, hi));
            // Dyadic endpoints always give a grid function of the right measure.
            let h = spec.grid_fn().unwrap();
            proptest::prop_assert_eq!(ratio(h.values().len() as i64, 1 << h.level()), ratio(w, 1 << d));
            proptest::prop_assert_eq!(parse_grid(&format!("{nz},{nx}")).unwrap(), (nz, nx));
        }
    }

    #[test]
    fn builtins_parse() {
        for (name, _) in BUILTIN_FILTERS {
            load_filter(name).unwrap();
        }
        assert_eq!(load_filter("haar.json").unwrap(), QmfFilter::haar());
        assert_eq!(load_filter("cubic").unwrap(), QmfFilter::cubic());
        assert_eq!(load_filter("shannon").unwrap(), QmfFilter::shannon());
        assert!(load_filter("nonexistent.json").is_err());
    }
}
