//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;

use common::{bar_tuples, nested_frames, ring_cubical, torsion_fixture};
use morseward::chain::{apply_boundary, validate_reduction, ComplexBuilder, FilteredComplex};
use morseward::dvf::{max_admissible_dvf, VectorField};
use morseward::image::{build_simplicial, ridge_image, sweep_filtration, Axis};
use morseward::morse::{reduce_complex, reduce_filtered_complex, reduce_one_degree};
use morseward::oracle::{direct_groups, direct_persistence, random_complex_batch, seed_from_env};
use morseward::persist::{barcode, field_barcode, field_mu, persistent_generators, Persistence};
use morseward::IntMatrix;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn worked_matrix() -> IntMatrix {
    IntMatrix::from_i32_rows(&[
        &[0, 0, -1, -1, 0],
        &[0, -1, 0, 0, 1],
        &[0, 0, 0, 1, 1],
        &[0, -1, 1, 0, -1],
        &[-1, 1, -1, 0, 0],
    ])
}

fn worked_dvf() -> (Outcome, Duration) {
    let m = worked_matrix();
    let t = Instant::now();
    let v = max_admissible_dvf(&m);
    let took = t.elapsed();
    let shown = v.to_string();
    let out = check(shown == "{(1;3), (2;2), (3;4), (5;1)}", format!("got {shown}"))
        .and_then(|_| check(took < Duration::from_millis(1), format!("{took:?} >= 1 ms")))
        .map(|_| format!("V = {shown}"));
    (out, took)
}

fn worked_reduction() -> (Outcome, Duration) {
    let m = worked_matrix();
    let mut cb = ComplexBuilder::<BigInt>::new(1).with_degrees(2);
    let lo: Vec<_> = (0..5).map(|_| cb.add_cell(0, 1, None)).collect();
    let hi: Vec<_> = (0..5).map(|_| cb.add_cell(1, 1, None)).collect();
    for (r, c, x) in m.entries() {
        cb.add_face(hi[c], lo[r], x.clone());
    }
    let c = Arc::new(cb.build().unwrap());
    let v = VectorField::from_one_based(&[(5, 1), (3, 4), (4, 5)]);
    let t = Instant::now();
    let rho = reduce_one_degree(&c, 1, &v);
    let took = t.elapsed();
    let out = rho.map_err(|e| e.to_string()).and_then(|rho| {
        let expected = IntMatrix::from_i32_rows(&[&[-1, 0], &[-2, 1]]);
        check(*rho.dst.boundary(1) == expected, format!("d' = {:?}", rho.dst.boundary(1)))?;
        check(validate_reduction(&rho).is_valid(), "reduction laws fail")?;
        check(took < Duration::from_millis(1), format!("{took:?} >= 1 ms"))?;
        Ok("d' = [[-1,0],[-2,1]]".to_string())
    });
    (out, took)
}

fn toy_image() -> (Outcome, Duration) {
    let t = Instant::now();
    let out = (|| {
        let c = ring_cubical();
        check(c.counts() == vec![16, 24, 8], format!("counts {:?}", c.counts()))?;
        let red = reduce_complex(c.clone()).map_err(|e| e.to_string())?;
        let p = Persistence::new(red.reduction.dst.clone());
        let (h0, h1) = (p.homology_at(1, 0).unwrap().to_string(), p.homology_at(1, 1).unwrap().to_string());
        check(h0 == "Z" && h1 == "Z", format!("H0 = {h0}, H1 = {h1}"))?;
        let gens = persistent_generators(&red.reduction, 1, 1, 1).map_err(|e| e.to_string())?;
        check(gens.len() == 1 && !gens[0].is_zero(), "missing degree-1 generator")?;
        check(apply_boundary(&c, &gens[0]).unwrap().is_zero(), "generator is not a cycle")?;
        Ok(format!("16/24/8, H0 = {h0}, H1 = {h1}, generator with {} edges", gens[0].len()))
    })();
    let took = t.elapsed();
    (out.and_then(|s| check(took < Duration::from_millis(10), format!("{took:?} >= 10 ms")).map(|_| s)), took)
}

fn nested_frames_case() -> (Outcome, Duration) {
    let t = Instant::now();
    let out = (|| {
        let c = nested_frames();
        check(c.counts() == vec![203, 408, 208], format!("counts {:?}", c.counts()))?;
        let red = reduce_filtered_complex(c).map_err(|e| e.to_string())?;
        let p = Persistence::new(red.reduction.dst.clone());
        let g = |i, j, n| p.persistent_group(i, j, n).unwrap().to_string();
        let found = [g(4, 4, 0), g(4, 4, 1), g(1, 4, 0), g(2, 4, 1)];
        check(found == ["Z^7", "Z^4", "Z^4", "Z^2"], format!("groups {found:?}"))?;
        let v = &red.stats.vectors;
        let near = |x: usize, target: f64| (x as f64 - target).abs() <= 0.15 * target;
        check(near(v[1], 187.0) && near(v[2], 201.0), format!("vectors {v:?}"))?;
        let crit = red.stats.total_critical();
        check(crit <= 86, format!("critical {crit}"))?;
        Ok(format!("203/408/208, H0 = Z^7, H1 = Z^4, H^(1,4)_0 = Z^4, H^(2,4)_1 = Z^2, vectors {}/{}, critical {:?}", v[1], v[2], red.stats.critical))
    })();
    let took = t.elapsed();
    (out.and_then(|s| check(took < Duration::from_secs(1), format!("{took:?} >= 1 s")).map(|_| s)), took)
}

fn batch() -> Vec<Arc<FilteredComplex<BigInt>>> {
    random_complex_batch(seed_from_env(), 500, 50, 5).into_iter().map(Arc::new).collect()
}

fn reduction_laws(cs: &[Arc<FilteredComplex<BigInt>>]) -> (Outcome, Duration) {
    let t = Instant::now();
    let failures: Vec<String> = cs
        .par_iter()
        .enumerate()
        .filter_map(|(s, c)| {
            let red = match reduce_filtered_complex(c.clone()) {
                Ok(r) => r.reduction,
                Err(e) => return Some(format!("complex {s}: {e}")),
            };
            let report = validate_reduction(&red);
            (!report.is_valid() || report.measured_order > 0)
                .then(|| format!("complex {s}: {:?}, order {}", report.violations.first(), report.measured_order))
        })
        .collect();
    let took = t.elapsed();
    let out = check(failures.is_empty(), failures.first().cloned().unwrap_or_default())
        .and_then(|_| check(took < Duration::from_secs(30), format!("{took:?} >= 30 s")))
        .map(|_| format!("{} complexes, all relations exact, order 0", cs.len()));
    (out, took)
}

fn compare_with_oracle(c: &Arc<FilteredComplex<BigInt>>) -> Result<(), String> {
    let red = reduce_filtered_complex(c.clone()).map_err(|e| e.to_string())?.reduction;
    let p = Persistence::new(red.dst.clone());
    let ours = bar_tuples(&p.barcode(false).map_err(|e| e.to_string())?);
    check(ours == direct_persistence(c).map_err(|e| e.to_string())?, "barcodes differ")?;
    let m = c.steps();
    for n in 0..c.num_degrees() {
        for i in 1..=m {
            for j in i..=m {
                for k in j..=m {
                    let (h, tr, bd) = direct_groups(c, i, j, k, n).map_err(|e| e.to_string())?;
                    let err = |e: morseward::persist::PersistError| e.to_string();
                    let same = p.persistent_group(i, j, n).map_err(err)? == h
                        && p.triple_group(i, j, k, n).map_err(err)? == tr
                        && (k == i || p.bd_group(i, Some(k), n).map_err(err)? == bd);
                    check(same, format!("({i},{j},{k},{n}) differs"))?;
                }
            }
        }
    }
    Ok(())
}

fn oracle_equivalence(cs: &[Arc<FilteredComplex<BigInt>>]) -> (Outcome, Duration) {
    let t = Instant::now();
    let tuples: usize = cs.iter().map(|c| c.num_degrees() * (1..=c.steps()).map(|i| (i..=c.steps()).map(|j| c.steps() - j + 1).sum::<usize>()).sum::<usize>()).sum();
    let failures: Vec<String> = cs
        .par_iter()
        .enumerate()
        .filter_map(|(s, c)| compare_with_oracle(c).err().map(|e| format!("complex {s}: {e}")))
        .collect();
    let took = t.elapsed();
    let out = check(failures.is_empty(), failures.first().cloned().unwrap_or_default())
        .and_then(|_| check(took < Duration::from_secs(120), format!("{took:?} >= 2 min")))
        .map(|_| format!("{} complexes, {tuples} (i,j,k,n) tuples, groups identical", cs.len()));
    (out, took)
}

fn torsion_barcode() -> (Outcome, Duration) {
    let c = torsion_fixture();
    let t = Instant::now();
    let out = (|| {
        let bc = barcode(&c).map_err(|e| e.to_string())?;
        let deg1: Vec<_> = bar_tuples(&bc).into_iter().filter(|b| b.0 == 1).collect();
        let expected = vec![(1, 1, Some(2), "Z".to_string()), (1, 1, None, "Z_2".to_string())];
        check(deg1 == expected, format!("bars {deg1:?}"))?;
        let mu = field_mu(&c, 1, Some(2), 1, 0).map_err(|e| e.to_string())?;
        check(mu == 1, format!("mu = {mu}"))?;
        Ok("H1 bars Z [1,2) and Z_2 [1,inf), mu^(1,2)_1 = 1 over Q".to_string())
    })();
    let took = t.elapsed();
    (out.and_then(|s| check(took < Duration::from_millis(10), format!("{took:?} >= 10 ms")).map(|_| s)), took)
}

fn field_consistency(cs: &[Arc<FilteredComplex<BigInt>>]) -> (Outcome, Duration) {
    let t = Instant::now();
    let results: Vec<Option<Result<(), String>>> = cs
        .par_iter()
        .enumerate()
        .map(|(s, c)| {
            let p = Persistence::new(c.clone());
            let bc = match p.barcode(false) {
                Ok(bc) => bc,
                Err(e) => return Some(Err(format!("complex {s}: {e}"))),
            };
            let free_homology = (0..=c.steps()).all(|i| (0..c.num_degrees()).all(|n| p.homology_at(i, n).unwrap().torsion.is_empty()));
            if !free_homology || bc.bars.iter().any(|b| b.is_torsion()) {
                return None;
            }
            let mut ours: Vec<_> = bc.bars.iter().map(|b| (b.dim, b.birth, b.death)).collect();
            ours.sort();
            for ch in [0, 2] {
                let raw = match field_barcode(c, ch) {
                    Ok(v) => v,
                    Err(e) => return Some(Err(format!("complex {s}: {e}"))),
                };
                let mut field: Vec<_> = raw
                    .into_iter()
                    .flat_map(|(n, i, k, mu)| std::iter::repeat_n((n, i, k), mu))
                    .collect();
                field.sort();
                if field != ours {
                    return Some(Err(format!("complex {s}: differs over characteristic {ch}")));
                }
            }
            Some(Ok(()))
        })
        .collect();
    let took = t.elapsed();
    let checked = results.iter().filter(|r| r.is_some()).count();
    let failure = results.into_iter().flatten().find_map(Result::err);
    let out = match failure {
        Some(f) => Err(f),
        None => check(checked > 0, "no torsion-free complexes").map(|_| format!("{checked} torsion-free complexes, equal over Q and Z/2")),
    };
    (out, took)
}

fn fingerprint_scale() -> (Outcome, Duration) {
    let img = ridge_image(300, 300, 16);
    let t = Instant::now();
    let out = (|| {
        let spec = sweep_filtration(&img, Axis::Rows, 10).map_err(|e| e.to_string())?;
        let c: Arc<FilteredComplex<BigInt>> = Arc::new(build_simplicial(&img, &spec).map_err(|e| e.to_string())?);
        let red = reduce_filtered_complex(c.clone()).map_err(|e| e.to_string())?;
        let bc = Persistence::new(red.reduction.dst.clone()).barcode(false).map_err(|e| e.to_string())?;
        let (orig, crit) = (red.stats.total_original(), red.stats.total_critical());
        check(orig >= 10_000, format!("only {orig} cells"))?;
        check(crit * 20 < orig, format!("reduced to {crit} of {orig} cells"))?;
        let loops: Vec<_> = bc.bars_in_degree(1).collect();
        check(!loops.is_empty() && loops.iter().all(|b| b.death.is_none()), "finite degree-1 deaths in a nested sweep")?;
        Ok(format!(
            "{:?} -> {:?} cells ({:.2}%), {} degree-1 bars, none dying",
            c.counts(),
            red.stats.critical,
            100.0 * crit as f64 / orig as f64,
            loops.len()
        ))
    })();
    let took = t.elapsed();
    (out.and_then(|s| check(took < Duration::from_secs(5), format!("{took:?} >= 5 s")).map(|_| s)), took)
}

type Criterion<'a> = Box<dyn Fn() -> (Outcome, Duration) + 'a>;

fn main() {
    let cs = batch();
    let criteria: Vec<(&str, Criterion<'_>)> = vec![
        ("worked DVF on the 5x5 matrix", Box::new(worked_dvf)),
        ("worked one-degree reduction", Box::new(worked_reduction)),
        ("3x3 ring image", Box::new(toy_image)),
        ("four nested frames", Box::new(nested_frames_case)),
        ("reduction laws on 500 random complexes", Box::new(|| reduction_laws(&cs))),
        ("oracle equivalence on 500 random complexes", Box::new(|| oracle_equivalence(&cs))),
        ("torsion barcode of the fixture", Box::new(torsion_barcode)),
        ("field consistency (Q and Z/2)", Box::new(|| field_consistency(&cs))),
        ("fingerprint-scale ridge image", Box::new(fingerprint_scale)),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let (out, took) = run();
        match out {
            Ok(detail) => println!("PASS  {name}: {detail} [{took:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why} [{took:.2?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
