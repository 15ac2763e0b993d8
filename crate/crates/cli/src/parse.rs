//! Parsing of numbers, β lists, and sweep grids from the command line.

/// β values as given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct Betas(pub Vec<f64>);

/// Sweep grid values.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

pub fn betas_arg(s: &str) -> Result<Betas, String> {
    parse_betas(s).map(Betas).map_err(|e| format!("cli::parse_betas: {e}"))
}

pub fn grid_arg(s: &str) -> Result<Grid, String> {
    parse_grid(s).map(Grid).map_err(|e| format!("cli::parse_grid: {e}"))
}

pub fn number_arg(s: &str) -> Result<f64, String> {
    parse_number(s).map_err(|e| format!("cli::parse_number: {e}"))
}

/// A decimal (`0.25`, `1e-3`) or a simple fraction (`-1/2`).
pub fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad_number(s))?;
            let den: f64 = den.trim().parse().map_err(|_| bad_number(s))?;
            if den == 0.0 {
                return Err(format!("zero denominator in '{s}'"));
            }
            num / den
        }
        None => s.parse().map_err(|_| bad_number(s))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad_number(s))
    }
}

fn bad_number(s: &str) -> String {
    format!("'{s}' is not a decimal or a fraction")
}

/// `b1,b2,...` or the shorthand `equal:β:n`.
pub fn parse_betas(s: &str) -> Result<Vec<f64>, String> {
    if let Some(rest) = s.strip_prefix("equal:") {
        let (beta, n) = rest
            .rsplit_once(':')
            .ok_or_else(|| format!("expected equal:<beta>:<n>, got '{s}'"))?;
        let beta = parse_number(beta)?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| format!("'{n}' is not a point count"))?;
        if n == 0 {
            return Err("point count must be at least 1".into());
        }
        return Ok(vec![beta; n]);
    }
    let betas = s
        .split(',')
        .map(parse_number)
        .collect::<Result<Vec<_>, _>>()?;
    if betas.is_empty() {
        return Err("no betas given".into());
    }
    Ok(betas)
}

/// A comma list of numbers, or an inclusive range `start:stop:step`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let start = parse_number(parts[0])?;
        let stop = parse_number(parts[1])?;
        let step = parse_number(parts[2])?;
        if !(step > 0.0) || stop < start {
            return Err(format!("range '{s}' needs start <= stop and step > 0"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 100_000 {
            return Err(format!("range '{s}' has {count} points"));
        }
        return Ok((0..count).map(|i| start + i as f64 * step).collect());
    }
    s.split(',').map(parse_number).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(parse_number("0.25").unwrap(), 0.25);
        assert_eq!(parse_number("-1/2").unwrap(), -0.5);
        assert_eq!(parse_number(" 3/4 ").unwrap(), 0.75);
        assert_eq!(parse_number("1e-3").unwrap(), 1e-3);
        assert!(parse_number("1/0").is_err());
        assert!(parse_number("abc").is_err());
        assert!(parse_number("inf").is_err());
    }

    #[test]
    fn beta_lists() {
        assert_eq!(parse_betas("0,0,1/2").unwrap(), vec![0.0, 0.0, 0.5]);
        assert_eq!(parse_betas("equal:-1/2:3").unwrap(), vec![-0.5; 3]);
        assert!(parse_betas("equal:0").is_err());
        assert!(parse_betas("equal:0:0").is_err());
        assert!(parse_betas("0,,1").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1,2,5").unwrap(), vec![1.0, 2.0, 5.0]);
        assert_eq!(parse_grid("0:1:1/4").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(parse_grid("1:0:1").is_err());
    }
}
