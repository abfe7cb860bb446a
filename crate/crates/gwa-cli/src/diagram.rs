//! ASCII factor-stack diagrams: one grid per orbit, with `P` markers at the
//! positions of the factors of `p` and `Q` markers at those of `q`, plus an
//! optional second panel showing the socle configuration.

use gwa_core::error::MathResult;
use gwa_core::factored::{orbit_partition, FactoredElement};
use gwa_core::gwa::GwaSpec;
use gwa_core::polyring::Poly;
use gwa_core::rank1::{Rank1Module, SocleMethod};

const RED: &str = "\x1b[31m";
const BLUE: &str = "\x1b[34m";
const RESET: &str = "\x1b[0m";

fn paint(marker: char, ansi: bool) -> String {
    if !ansi {
        return marker.to_string();
    }
    match marker {
        'P' => format!("{RED}P{RESET}"),
        'Q' => format!("{BLUE}Q{RESET}"),
        other => other.to_string(),
    }
}

/// Marker stacks per position for one orbit: `P`s below, `Q`s above.
fn orbit_stacks(
    spec: &GwaSpec,
    rep: &Poly,
    p: &FactoredElement,
    q: &FactoredElement,
) -> MathResult<Vec<(i64, Vec<char>)>> {
    let mut stacks: std::collections::BTreeMap<i64, Vec<char>> = std::collections::BTreeMap::new();
    for (element, marker) in [(p, 'P'), (q, 'Q')] {
        for (factor, mult) in element.factors() {
            if let Some(k) = spec.orbit_shift(rep, factor)? {
                for _ in 0..*mult {
                    stacks.entry(k).or_default().push(marker);
                }
            }
        }
    }
    Ok(stacks.into_iter().collect())
}

fn render_grid(stacks: &[(i64, Vec<char>)], ansi: bool) -> String {
    if stacks.is_empty() {
        return "  (empty)\n".to_string();
    }
    let lo = stacks.first().unwrap().0;
    let hi = stacks.last().unwrap().0;
    let height = stacks.iter().map(|(_, s)| s.len()).max().unwrap_or(0);
    let width = (lo..=hi)
        .map(|k| k.to_string().len())
        .max()
        .unwrap_or(1)
        .max(1);
    let cell = |content: &str| format!(" {content:>width$}");
    let mut out = String::new();
    for level in (1..=height).rev() {
        out.push_str(&format!("{level:>3} |"));
        for k in lo..=hi {
            let marker = stacks
                .iter()
                .find(|(pos, _)| *pos == k)
                .and_then(|(_, s)| s.get(level - 1))
                .copied();
            match marker {
                Some(m) => {
                    let plain = cell(&m.to_string());
                    if ansi {
                        out.push_str(&plain.replace(m, &paint(m, true)));
                    } else {
                        out.push_str(&plain);
                    }
                }
                None => out.push_str(&cell(".")),
            }
        }
        out.push('\n');
    }
    out.push_str("    +");
    for _ in lo..=hi {
        out.push_str(&"-".repeat(width + 1));
    }
    out.push('\n');
    out.push_str("pos |");
    for k in lo..=hi {
        out.push_str(&cell(&k.to_string()));
    }
    out.push('\n');
    out
}

/// Panels for the module itself: positions of the factors of `p` and of `q`
/// in each orbit they touch.
pub fn render_module_diagram(m: &Rank1Module, ansi: bool) -> MathResult<String> {
    let spec = m.spec();
    let combined = m.p().mul(m.q());
    if combined.is_unit() {
        return Ok("(empty)\n".to_string());
    }
    let parts = orbit_partition(&combined, spec)?;
    let mut out = String::new();
    for (rep, _) in &parts {
        out.push_str(&format!("orbit of [{rep}]:\n"));
        let stacks = orbit_stacks(spec, rep, m.p(), m.q())?;
        out.push_str(&render_grid(&stacks, ansi));
    }
    Ok(out)
}

/// The socle configuration in the same orbit frames: `P` markers at the
/// factors of the socle parameter, `Q` markers at the complementary ones.
pub fn render_socle_diagram(m: &Rank1Module, ansi: bool) -> MathResult<Option<String>> {
    let spec = m.spec();
    let socle = match m.socle(SocleMethod::ColorSwitch) {
        Ok(s) => s,
        Err(_) => return Ok(None), // infinite length: no socle panel
    };
    let socle_q = spec
        .a()
        .try_div(&socle)
        .expect("socle parameter divides a")
        .apply_sigma(spec.sigma(), 1);
    let combined = m.p().mul(m.q());
    if combined.is_unit() {
        return Ok(Some("(empty)\n".to_string()));
    }
    let parts = orbit_partition(&combined, spec)?;
    let mut out = String::new();
    for (rep, _) in &parts {
        out.push_str(&format!("orbit of [{rep}] (socle):\n"));
        let stacks = orbit_stacks(spec, rep, &socle, &socle_q)?;
        out.push_str(&render_grid(&stacks, ansi));
    }
    Ok(Some(out))
}
