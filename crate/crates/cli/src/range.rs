//! `min:max:points[:log]` range syntax.

use rectenna_core::{Grid, ModelError, Spacing};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub log: bool,
}

impl RangeSpec {
    pub fn to_grid(self) -> Result<Grid, ModelError> {
        let spacing = if self.log { Spacing::Log } else { Spacing::Linear };
        Grid::new(self.min, self.max, self.points, spacing)
    }
}

pub fn parse_range(spec: &str) -> Result<RangeSpec, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(format!("expected `min:max:points[:log]`, got `{spec}`"));
    }
    let num = |s: &str, what: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad {what} `{s}` in `{spec}`: {e}"))
    };
    let min = num(parts[0], "min")?;
    let max = num(parts[1], "max")?;
    let points = parts[2]
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("bad point count `{}` in `{spec}`: {e}", parts[2]))?;
    let log = match parts.get(3).map(|s| s.trim()) {
        None | Some("lin") | Some("linear") => false,
        Some("log") => true,
        Some(other) => return Err(format!("unknown spacing `{other}`; use `log` or `lin`")),
    };
    Ok(RangeSpec {
        min,
        max,
        points,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_linear_and_log() {
        let r = parse_range("1e8:1e11:50").unwrap();
        assert_eq!((r.min, r.max, r.points, r.log), (1e8, 1e11, 50, false));
        assert!(parse_range("1e8:1e11:50:log").unwrap().log);
        assert_eq!(parse_range("1e8:1e11:50:log").unwrap().to_grid().unwrap().spacing, Spacing::Log);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_range("1e8:1e11").is_err());
        assert!(parse_range("a:1:3").is_err());
        assert!(parse_range("1:2:x").is_err());
        assert!(parse_range("1:2:3:cubic").is_err());
        assert!(parse_range("2:1:3").unwrap().to_grid().is_err());
    }
}
