//! Slice memberships of orbit points: the data behind the triple-point pictures.

use tracemap_core::autact::alphabet;
use tracemap_core::exactnum::{fmt_rat, recognize_rational_angle};
use tracemap_core::orbits::{enumerate_orbit, finite_orbit_seeds};
use tracemap_core::tracepoints::eval_e;
use tracemap_core::Limits;

use crate::error::{CliError, CliResult};

/// One CSV row per point: coordinates, level, and a tag `label@rho` for each
/// coordinate ellipse through it, where the ellipse is the level set of `E`
/// in the plane `x_label = cos(2 pi rho)`.
pub fn figure_data(id: &str, limits: &Limits) -> CliResult<String> {
    let (name, seed) = finite_orbit_seeds()
        .into_iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(id))
        .ok_or_else(|| CliError::Usage(format!("unknown orbit `{id}`; expected O1..O5")))?;
    let o = enumerate_orbit(&seed, alphabet(2), limits.orbit_bound)?;
    if !o.exhausted {
        return Err(tracemap_core::Error::NotExhausted { bound: limits.orbit_bound }.into());
    }
    let t = eval_e(&seed)?;
    let labels = seed.labels();
    let mut s = String::from("orbit,index,x1,x2,x12,t,ellipse_1,ellipse_2,ellipse_12\n");
    for (i, p) in o.points.iter().enumerate() {
        let mut tags = Vec::with_capacity(3);
        for (l, c) in labels.iter().zip(p.coords()) {
            let rho = recognize_rational_angle(c)?
                .ok_or_else(|| CliError::Mismatch(format!("{name} point {i}: coordinate {c} is not a rational cosine")))?;
            tags.push(format!("{l}@{}", fmt_rat(&rho)));
        }
        // every point lies on exactly three coordinate ellipses
        if tags.len() != 3 {
            return Err(CliError::Mismatch(format!("{name} point {i}: {} ellipses", tags.len())));
        }
        let c: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
        s.push_str(&format!("{name},{i},{},{t},{}\n", c.join(","), tags.join(",")));
    }
    Ok(s)
}
