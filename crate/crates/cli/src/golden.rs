//! Reference data consumed by `verify`. The bundled copies are compiled in;
//! `--golden DIR` substitutes files of the same names.

use std::path::Path;

use expinv_core::TruncatedSeries;
use serde::Deserialize;

use crate::output::{self, CliResult};

pub const EXP_INVERSE: &str = "exp_inverse.json";
pub const INVERSE_EGF: &str = "inverse_egf.json";
pub const SELFCOMP: &str = "selfcomp.json";
pub const RK_TABLE: &str = "rk_table.csv";

const FILES: [(&str, &str); 4] = [
    (EXP_INVERSE, include_str!("../data/golden/exp_inverse.json")),
    (INVERSE_EGF, include_str!("../data/golden/inverse_egf.json")),
    (SELFCOMP, include_str!("../data/golden/selfcomp.json")),
    (RK_TABLE, include_str!("../data/golden/rk_table.csv")),
];

/// Raw file contents; each suite parses what it needs so a damaged file
/// only fails the checks that read it.
pub struct Golden {
    texts: Vec<(&'static str, String)>,
}

#[derive(Deserialize)]
pub struct ExpInverse {
    pub series: TruncatedSeries,
    pub c10: String,
}

#[derive(Deserialize)]
pub struct InverseEgf {
    pub egf: Vec<String>,
}

#[derive(Deserialize)]
pub struct SelfComp {
    pub prefix: TruncatedSeries,
    pub egf: Vec<String>,
}

/// `(t, v)` display strings per row.
pub type RkTable = Vec<(String, String)>;

impl Golden {
    pub fn load(dir: Option<&Path>) -> CliResult<Self> {
        let texts = match dir {
            None => FILES.iter().map(|&(name, text)| (name, text.to_string())).collect(),
            Some(dir) => FILES
                .iter()
                .map(|&(name, _)| Ok((name, output::read_file(&dir.join(name))?)))
                .collect::<CliResult<_>>()?,
        };
        Ok(Self { texts })
    }

    fn text(&self, name: &str) -> &str {
        &self.texts.iter().find(|(n, _)| *n == name).expect("known golden file").1
    }

    fn json<'a, T: Deserialize<'a>>(&'a self, name: &str) -> Result<T, String> {
        serde_json::from_str(self.text(name)).map_err(|e| format!("{name}: {e}"))
    }

    pub fn exp_inverse(&self) -> Result<ExpInverse, String> {
        self.json(EXP_INVERSE)
    }

    pub fn inverse_egf(&self) -> Result<InverseEgf, String> {
        self.json(INVERSE_EGF)
    }

    pub fn selfcomp(&self) -> Result<SelfComp, String> {
        self.json(SELFCOMP)
    }

    pub fn rk_table(&self) -> Result<RkTable, String> {
        let mut lines = self.text(RK_TABLE).lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
        if lines.next().map(str::trim) != Some("step,t,v") {
            return Err(format!("{RK_TABLE}: expected header step,t,v"));
        }
        lines
            .map(|line| match line.trim().split(',').collect::<Vec<_>>()[..] {
                [_, t, v] => Ok((t.to_string(), v.to_string())),
                _ => Err(format!("{RK_TABLE}: malformed row {line:?}")),
            })
            .collect()
    }
}
