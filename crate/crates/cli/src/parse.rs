use num_complex::Complex64;

use modforms2::numeric::Matrix2;

/// Parses `a+bi` style literals: `i`, `-2i`, `0.4+0.8i`, `1.5`, `1e-3-2i`.
pub fn complex(src: &str) -> Result<Complex64, String> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("invalid complex number `{src}` (expected a+bi)");
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad());
    };
    // split before the last sign that is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re.is_empty() {
        0.0
    } else {
        re.parse::<f64>().map_err(|_| bad())?
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

/// Parses `a,b,c,d` into a matrix; entries are complex literals.
pub fn matrix(src: &str) -> Result<Matrix2, String> {
    let parts: Vec<&str> = src.split(',').collect();
    if parts.len() != 4 {
        return Err(format!(
            "matrix `{src}` needs four comma-separated entries a,b,c,d"
        ));
    }
    let e: Vec<Complex64> = parts.iter().map(|p| complex(p)).collect::<Result<_, _>>()?;
    Matrix2::new(e[0], e[1], e[2], e[3]).map_err(|e| e.to_string())
}

fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.to_lowercase().chars().collect();
    let b: Vec<char> = b.to_lowercase().chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut cur = vec![i + 1];
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur.push(sub.min(prev[j + 1] + 1).min(cur[j] + 1));
        }
        prev = cur;
    }
    prev[b.len()]
}

/// Candidates close to `name`, or all of them when none is close.
pub fn suggestions<'a>(name: &str, candidates: &[&'a str]) -> Vec<&'a str> {
    let close: Vec<&str> = candidates
        .iter()
        .copied()
        .filter(|c| {
            edit_distance(name, c) <= 2 || c.to_lowercase().starts_with(&name.to_lowercase())
        })
        .collect();
    if close.is_empty() {
        candidates.to_vec()
    } else {
        close
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_literals() {
        for (src, want) in [
            ("i", c(0.0, 1.0)),
            ("-i", c(0.0, -1.0)),
            ("2i", c(0.0, 2.0)),
            ("0.4+0.8i", c(0.4, 0.8)),
            ("-0.3-1.2i", c(-0.3, -1.2)),
            ("1+i", c(1.0, 1.0)),
            ("1.5", c(1.5, 0.0)),
            ("1e-3+2e-1i", c(1e-3, 0.2)),
            (" 1 - 2i ", c(1.0, -2.0)),
        ] {
            assert_eq!(complex(src).unwrap(), want, "{src}");
        }
        for bad in ["", "x", "1+", "ii", "1+2j"] {
            assert!(complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn matrices() {
        let m = matrix("1,0,2,1").unwrap();
        assert!(m.is_gamma0_2());
        assert!(matrix("1,0,2").is_err());
        assert!(matrix("1,2,2,4").is_err());
        assert!(matrix("1+i,0,0,0.5-0.5i").is_ok());
    }

    #[test]
    fn suggestion_list() {
        let names = ["Ecal2", "Ecal4", "E2", "Delta"];
        assert_eq!(suggestions("Ecal3", &names), vec!["Ecal2", "Ecal4"]);
        assert_eq!(suggestions("zzzzzz", &names), names.to_vec());
    }
}
