//! Acceptance gate: one PASS/FAIL line per criterion. Exits 1 if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use qdisk_core::deform::quantization_defect;
use qdisk_core::elements::ball_lift;
use qdisk_core::fock::op_norm_bounds;
use qdisk_core::norms::free_norm;
use qdisk_core::qcombinat::{q_pochhammer_inf, MultiIndex, Word, FIBER_CAP};
use qdisk_core::spectral::{poincare_gap, radius_estimate, Generators, TupleSpec};
use qdisk_core::verify::{run_suite, Formula, SuiteConfig};
use qdisk_core::{Family, NormSpec, QParam, QPolynomial, C64};

struct Gate {
    failures: usize,
}

impl Gate {
    fn criterion(&mut self, id: u32, title: &str, f: impl FnOnce() -> Result<String, String>) {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("criterion {id:>2} PASS  {title} ({note}; {secs:.1} s)"),
            Err(why) => {
                self.failures += 1;
                println!("criterion {id:>2} FAIL  {title}: {why} ({secs:.1} s)");
            }
        }
    }
}

/// Runs suites with the default seed; fails on any failed check, with its name and worst value.
fn suites(names: &[&str]) -> Result<Duration, String> {
    let start = Instant::now();
    for name in names {
        let r = run_suite(name, &SuiteConfig::default()).map_err(|e| format!("{name}: {e}"))?;
        if let Some(c) = r.checks.iter().find(|c| !c.passed) {
            return Err(format!(
                "{name}: `{}` worst {:.3e} > {:.1e}",
                c.name, c.worst, c.limit
            ));
        }
    }
    Ok(start.elapsed())
}

fn expect(label: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    if (got - want).abs() <= tol * want.abs().max(1.0) {
        Ok(())
    } else {
        Err(format!("{label}: got {got}, expected {want}"))
    }
}

fn q(x: f64) -> QParam {
    QParam::real(x).unwrap()
}

fn main() {
    let mut gate = Gate { failures: 0 };

    gate.criterion(1, "q-Chu-Vandermonde, n <= 4, |k|,|l| <= 6, five q", || {
        let t = suites(&["chu-vandermonde"])?;
        if t > Duration::from_secs(30) {
            return Err(format!("took {t:?}"));
        }
        Ok("exhaustive grid".into())
    });

    gate.criterion(
        2,
        "fiber-enumeration norm formula, |k| <= 8, n <= 3",
        || {
            suites(&["lemma-7-9"])?;
            let lift = ball_lift(&MultiIndex::new(vec![1, 1]), q(0.5), FIBER_CAP)
                .map_err(|e| e.to_string())?;
            let v = free_norm(&lift, &NormSpec::simple(Family::FreeBallCirc, 1.0).unwrap())
                .map_err(|e| e.to_string())?;
            expect("k=(1,1), |q|=0.5", v, 5f64.powf(-0.5), 1e-12)?;
            Ok(format!("(1,1) value {v:.5}"))
        },
    );

    gate.criterion(3, "spectral examples and the Poincare gap", || {
        suites(&["spectral-examples", "poincare-gap"])?;
        let t = TupleSpec::new(
            Generators::Coordinates {
                n: 2,
                q: QParam::unimodular(0.0),
            },
            NormSpec::simple(Family::Ball, 1.0).unwrap(),
            2.0,
            2,
        )
        .map_err(|e| e.to_string())?;
        let v = radius_estimate(&t, 2).map_err(|e| e.to_string())?;
        expect("d=2 ball value", v, 3f64.powf(0.25), 1e-12)?;
        let (p, b) =
            poincare_gap(2, QParam::unimodular(0.3), 1.0, 50).map_err(|e| e.to_string())?;
        let ratio = p / b;
        if !(ratio > 1.35 && ratio < 2f64.sqrt()) {
            return Err(format!("D=50 ratio {ratio}"));
        }
        Ok(format!("3^(1/4) = {v:.5}, D=50 ratio {ratio:.4}"))
    });

    gate.criterion(
        4,
        "seven submultiplicative families, 1000 pairs each",
        || {
            let t = suites(&["submult-all"])?;
            if t > Duration::from_secs(60) {
                return Err(format!("took {t:?}"));
            }
            Ok("7000 pairs".into())
        },
    );

    gate.criterion(
        5,
        "ball/polydisk sandwich with the Pochhammer constant",
        || {
            suites(&["theorem-4-2"])?;
            let e = q_pochhammer_inf(C64::new(0.25, 0.0), C64::new(0.25, 0.0), 1e-12)
                .map_err(|e| e.to_string())?;
            expect("(0.25;0.25)", e.value.re, 0.688_537_537_120_339_7, 1e-12)?;
            Ok(format!(
                "(0.25;0.25) = {:.5} from {} factors",
                e.value.re, e.factors
            ))
        },
    );

    gate.criterion(
        6,
        "normal ordering vs rewriting, n <= 4, length <= 8",
        || {
            suites(&["normal-order-rewrite"])?;
            let words = Word::all_of_length(4, 8, 1 << 20)
                .map_err(|e| e.to_string())?
                .len();
            if words != 65_536 {
                return Err(format!("{words} words of length 8"));
            }
            Ok("all words, three q".into())
        },
    );

    gate.criterion(
        7,
        "Fock vacuum images, generator limit, sandwich bounds",
        || {
            suites(&["fock-lemma-5-2", "fock-xnorm-limit", "fock-sandwich-5-4"])?;
            let x = QPolynomial::generator(1, q(0.5), 1);
            let lower = op_norm_bounds(&x, 1.0, 20)
                .map_err(|e| e.to_string())?
                .lower;
            if lower < 1.0 - 1e-10 {
                return Err(format!("D=20 lower bound {lower}"));
            }
            Ok(format!("D=20 lower bound {lower:.12}"))
        },
    );

    gate.criterion(
        8,
        "lifts attain their norms; perturbations never win",
        || {
            suites(&["lift-attainment", "quotient-contraction"])?;
            Ok("|k| <= 7, 200 perturbations".into())
        },
    );

    gate.criterion(
        9,
        "inversion procedure, inversion bound, omega, Laurent words",
        || {
            suites(&[
                "lemma-8-5",
                "lemma-8-6",
                "lemma-8-10",
                "laurent-word-identity",
            ])?;
            Ok("exhaustive".into())
        },
    );

    gate.criterion(10, "star product and quantization defect", || {
        suites(&["star-associativity", "star-defect-8-23"])?;
        let one = q(1.0);
        let (x1, x2) = (
            QPolynomial::generator(2, one, 1),
            QPolynomial::generator(2, one, 2),
        );
        let spec = NormSpec::simple(Family::PolydiskL1, 1.0).unwrap();
        let h = 0.01;
        let d = quantization_defect(&x1, &x2, h, &spec).map_err(|e| e.to_string())?;
        let exact =
            ((C64::new(1.0, 0.0) - C64::from_polar(1.0, -h)) / h - C64::new(0.0, 1.0)).norm();
        expect("defect at h=0.01", d, exact, 1e-12)?;
        if (d - 0.005).abs() > 0.05 * 0.005 {
            return Err(format!("defect {d} not within 5% of 0.005"));
        }
        Ok(format!("defect {d:.6}"))
    });

    gate.criterion(11, "formal ball lift through order 3", || {
        suites(&["formal-lift-8-39"])?;
        Ok("|k| <= 5, n <= 3".into())
    });

    gate.criterion(
        12,
        "`verify all` under 5 minutes; every mutation is caught",
        || {
            let bin = env!("CARGO_BIN_EXE_qdisk");
            let start = Instant::now();
            let status = Command::new(bin)
                .args(["verify", "all"])
                .output()
                .map_err(|e| e.to_string())?
                .status;
            let took = start.elapsed();
            if status.code() != Some(0) {
                return Err(format!("verify all exited {status}"));
            }
            if took > Duration::from_secs(300) {
                return Err(format!("verify all took {took:?}"));
            }
            let mut missed = Vec::new();
            for f in Formula::all() {
                let out = Command::new(bin)
                    .args(["verify", f.suite(), "--perturb", f.name()])
                    .output()
                    .map_err(|e| e.to_string())?;
                if out.status.code() != Some(1) {
                    missed.push(format!("{} ({})", f.name(), f.suite()));
                }
            }
            if !missed.is_empty() {
                return Err(format!("mutations not caught: {}", missed.join(", ")));
            }
            Ok(format!(
                "verify all {:.1} s, {} mutations caught",
                took.as_secs_f64(),
                Formula::all().count()
            ))
        },
    );

    if gate.failures > 0 {
        println!("{} criteria failed", gate.failures);
        std::process::exit(1);
    }
    println!("all 12 criteria pass");
}
