//! Replays Rolle's worked quartic: the four cascades, the great hypotheses,
//! the sign table, the narrowing of the second cascade, the ascent to the
//! left root, and the full isolation, each checked against the published
//! values.

use std::fmt::Write as _;

use cascades_core::bounds::great_hypothesis;
use cascades_core::certify::check_interleaving;
use cascades_core::isolate::{cascade_ascent, isolate_all_roots, narrow, sign_change, Located};
use cascades_core::poly::cascade_chain;
use cascades_core::refine::{bisect, RefineOptions};
use cascades_core::{int, Polynomial, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::commands::{located_json, root_json};
use crate::render::{interval_json, rational_json, render_enclosure};
use crate::report::{CommandError, CommandOutput, ExitStatus};

/// `v^4 - 24v^3 + 198v^2 - 648v + 473`
pub const QUARTIC: [i64; 5] = [473, -648, 198, -24, 1];

/// The cascades as Rolle wrote them, linear first.
const CASCADES: [&[i64]; 4] = [
    &[-24, 4],
    &[198, -72, 6],
    &[-648, 396, -72, 4],
    &QUARTIC,
];

/// (cascade level, great hypothesis)
const GREAT_HYPOTHESES: [(usize, i64); 3] = [(4, 649), (2, 13), (3, 163)];

/// (cascade level, point, value)
const SIGN_TABLE: [(usize, i64, i64); 9] = [
    (2, 5, -12),
    (2, 4, 6),
    (3, 0, -648),
    (3, 5, 32),
    (3, 4, 40),
    (3, 3, 0),
    (4, 0, 473),
    (4, 3, -256),
    (4, 1, 0),
];

pub fn quartic() -> Polynomial {
    Polynomial::from_ints(&QUARTIC)
}

struct Transcript {
    checks: Vec<Value>,
    mismatches: Vec<String>,
    text: String,
}

impl Transcript {
    fn check(&mut self, name: &str, expected: impl ToString, actual: impl ToString) {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        let matched = expected == actual;
        let sep = if actual.starts_with("Exact") { " " } else { " = " };
        if matched {
            writeln!(self.text, "  {name}{sep}{actual}  [ok]").unwrap();
        } else {
            writeln!(self.text, "  {name}{sep}{actual}, expected {expected}  [MISMATCH]").unwrap();
            self.mismatches.push(name.to_string());
        }
        self.checks.push(json!({
            "name": name,
            "expected": expected,
            "actual": actual,
            "matched": matched,
        }));
    }
}

fn exact_or_bracket(l: &Located) -> String {
    match l {
        Located::Exact(x) => format!("Exact {x}"),
        Located::Enclosed { lo, hi } => format!("({lo}, {hi})"),
    }
}

pub fn replay(digits: usize) -> Result<CommandOutput, CommandError> {
    let p = quartic();
    let mut t = Transcript {
        checks: Vec::new(),
        mismatches: Vec::new(),
        text: String::new(),
    };
    writeln!(t.text, "Rolle's quartic: {p}").unwrap();

    writeln!(t.text, "cascades (root sets compared via monic forms)").unwrap();
    let chain = cascade_chain(&p)?;
    let rolle: Vec<Polynomial> = CASCADES.iter().map(|c| Polynomial::from_ints(c)).collect();
    for (k, (ours, theirs)) in chain.levels.iter().zip(&rolle).enumerate() {
        let same_roots = ours.monic() == theirs.monic();
        writeln!(t.text, "  cascade {}: {theirs}  ~  {ours}", k + 1).unwrap();
        t.check(
            &format!("cascade {} roots match", k + 1),
            true,
            same_roots,
        );
    }
    t.check("cascade count", rolle.len(), chain.len());

    writeln!(t.text, "great hypotheses").unwrap();
    let mut greats = Vec::new();
    for (level, expected) in GREAT_HYPOTHESES {
        let g = great_hypothesis(&chain.levels[level - 1])?;
        t.check(&format!("great_hypothesis level {level}"), expected, &g);
        greats.push(json!({ "level": level, "value": rational_json(&g, digits) }));
    }

    // The printed cascades carry Rolle's own scalings, which follow no rule;
    // each library level is rescaled to the printed leading coefficient.
    writeln!(t.text, "sign table").unwrap();
    let rescaled: Vec<Polynomial> = chain
        .levels
        .iter()
        .zip(&rolle)
        .map(|(ours, theirs)| ours.scale(&(theirs.leading().unwrap() / ours.leading().unwrap())))
        .collect();
    let mut table = Vec::new();
    for (level, at, expected) in SIGN_TABLE {
        let v = rescaled[level - 1].eval(&int(at));
        t.check(&format!("f{level}({at})"), expected, &v);
        table.push(json!({ "cascade": level, "at": at, "value": rational_json(&v, digits) }));
    }

    writeln!(t.text, "second cascade: narrowing (0, 6) at 5 then 4").unwrap();
    let f2 = &rescaled[1];
    let cert = sign_change(f2, &int(0), &int(6))?;
    let cert = narrow(f2, &cert, &int(5))?;
    let cert = narrow(f2, &cert, &int(4))?;
    t.check("second cascade left root bracket", "(4, 5)", format!("({}, {})", cert.lo, cert.hi));
    let tol = Rational::new(BigInt::one(), BigInt::from(10).pow(12));
    let refined = bisect(f2, &cert, &tol, &RefineOptions::default())?;
    // 6 - sqrt(3) is the root of (6 - x)^2 - 3 below 6
    let g = |x: &Rational| (int(6) - x) * (int(6) - x) - int(3);
    let holds = g(&refined.lo).is_positive() && g(&refined.hi).is_negative();
    writeln!(
        t.text,
        "  6 - sqrt(3) ~ {} after {} bisections",
        render_enclosure(&refined.lo, &refined.hi, 14),
        refined.iterations
    )
    .unwrap();
    t.check("6 - sqrt(3) enclosed", true, holds);

    writeln!(t.text, "ascent").unwrap();
    let ascent = cascade_ascent(&p)?;
    let left = |level: usize| ascent[level - 1].roots.first().map(exact_or_bracket).unwrap_or_default();
    t.check("level 1 root", "Exact 6", left(1));
    t.check("third cascade left root", "Exact 3", left(3));
    t.check("left root", "Exact 1", left(4));

    writeln!(t.text, "isolation").unwrap();
    let roots = isolate_all_roots(&p)?;
    let listed: Vec<String> = roots
        .iter()
        .map(|r| match r.exact() {
            Some(x) => format!("Exact {x}"),
            None => format!("({}, {})", r.lo(), r.hi()),
        })
        .collect();
    t.check("real roots", "Exact 1, Exact 11", listed.join(", "));

    writeln!(t.text, "interleaving").unwrap();
    let report = check_interleaving(&p)?;
    let dp: Vec<String> = report
        .dp_roots
        .iter()
        .map(|r| r.exact().map_or_else(|| "?".into(), |x| x.to_string()))
        .collect();
    t.check("derivative roots", "3, 6, 9", dp.join(", "));
    t.check(
        "gap count between 1 and 11",
        3,
        report.gaps.first().map_or(0, |g| g.count),
    );
    t.check("interleaving violations", 0, report.violations.len());

    let matched = t.mismatches.is_empty();
    writeln!(
        t.text,
        "{}",
        if matched {
            "all values match".to_string()
        } else {
            format!("{} mismatch(es): {}", t.mismatches.len(), t.mismatches.join("; "))
        }
    )
    .unwrap();

    let results = json!({
        "chain": chain.levels.iter().zip(&chain.scalings).map(|(l, s)| json!({
            "polynomial": l.to_string(),
            "scaling": rational_json(s, digits),
        })).collect::<Vec<_>>(),
        "rolle_cascades": rolle.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "great_hypotheses": greats,
        "sign_table": table,
        "second_cascade_bracket": interval_json(&cert.lo, &cert.hi, digits),
        "six_minus_sqrt3": interval_json(&refined.lo, &refined.hi, digits),
        "ascent": ascent.iter().map(|l| json!({
            "level": l.level,
            "positive_roots": l.roots.iter().map(|r| located_json(r, digits)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "roots": roots.iter().map(|r| root_json(r, digits)).collect::<Vec<_>>(),
        "checks": t.checks,
        "mismatches": t.mismatches,
        "matched": matched,
    });
    Ok(CommandOutput {
        results,
        text: t.text,
        status: if matched { ExitStatus::Success } else { ExitStatus::Mismatch },
    })
}
