//! Single corruptions of certified inputs. Each case first checks that the
//! untouched input is accepted, then that the corrupted one is rejected.

use std::sync::OnceLock;

use latcert::arith::{dec, int, rat};
use latcert::cert::{kissing_certificate, localopt_certificate, verify_certificate, Certificate};
use latcert::lattice::{
    e8_lattice, e8_witness_vectors, enumerate_short_vectors, gram_shells, leech_lattice, EnumConfig, MinVectorSet,
};
use latcert::localopt::{final_inequality, frame_check, local_optimality_certificate};
use latcert::radial::certify::certify_packing_bound;
use latcert::radial::newton::{default_spec, newton_construct};
use latcert::radial::RadialFn;
use latcert::scheme::{
    basis_transfer_check, bose_mesner_projection_check, classify_pairs, count_intersection_numbers, e8_labels,
    eutaxy_check, inner_product_chain, moment_table, sigma_chain, BaseScope, SchemeTable, SphericalCode,
    TransferParams,
};
use latcert::sphere_lp::{design_defect_constant, kissing_poly, lp_code_bound, lp_slack};
use latcert::{Rat, RatInterval, UniPoly};

pub struct TamperCase {
    pub name: &'static str,
    pub run: fn() -> Result<(), String>,
}

fn e8_minvecs() -> &'static MinVectorSet {
    static MV: OnceLock<MinVectorSet> = OnceLock::new();
    MV.get_or_init(|| enumerate_short_vectors(&e8_lattice(), &int(2), &EnumConfig::default()).unwrap())
}

fn e8_table() -> &'static SchemeTable {
    static T: OnceLock<SchemeTable> = OnceLock::new();
    T.get_or_init(|| {
        let code = SphericalCode::from_min_vectors(e8_minvecs()).unwrap();
        let cls = classify_pairs(&code, &e8_labels(), &Rat::from_integer(0.into())).unwrap();
        count_intersection_numbers(&code, &cls, &BaseScope::All).unwrap()
    })
}

fn small_e8_function() -> &'static RadialFn {
    static F: OnceLock<RadialFn> = OnceLock::new();
    F.get_or_init(|| newton_construct(&default_spec(2, 2, 2), 8, 5, 256).unwrap().f)
}

fn e8_localopt_cert() -> Certificate {
    localopt_certificate(
        "e8",
        8,
        &int(2),
        &rat(1, 20),
        &int(2),
        &[1, 15, 1, 15, 1, 7].map(int),
        &int(7973),
        &dec("2.5e-5"),
        &(int(7) * dec("1.45e-13")),
        &int(620),
        &int(2),
        &dec("1.6e-10"),
    )
    .unwrap()
}

fn expect(ok: bool, what: &str) -> Result<(), String> {
    ok.then_some(()).ok_or_else(|| what.to_string())
}

fn kissing_polynomial_constant() -> Result<(), String> {
    let f = kissing_poly(8, &Rat::from_integer(0.into())).unwrap();
    expect(lp_code_bound(&f, 8, &rat(1, 2)).is_ok(), "baseline kissing bound fails")?;
    let mut c = f.coeffs().to_vec();
    c[0] += rat(1, 1000);
    let g = UniPoly::new(c);
    let detected = match lp_code_bound(&g, 8, &rat(1, 2)) {
        Ok(b) => b.bound != RatInterval::point(int(240)),
        Err(_) => true,
    };
    expect(detected, "bumped constant term still certifies 240")
}

fn kissing_certificate_digit() -> Result<(), String> {
    let f = kissing_poly(8, &Rat::from_integer(0.into())).unwrap();
    let text = kissing_certificate("e8", &f, 8, &rat(1, 2), &int(240)).unwrap().to_text();
    expect(verify_certificate(&text).is_ok_and(|v| v.passed()), "baseline certificate rejected")?;
    let bad = text.replacen("field expected 240", "field expected 241", 1);
    expect(bad != text && verify_certificate(&bad).is_err(), "altered digit passes the seal")
}

fn resealed_localopt_certificate() -> Result<(), String> {
    let mut cert = e8_localopt_cert();
    expect(verify_certificate(&cert.to_text()).is_ok_and(|v| v.passed()), "baseline certificate rejected")?;
    for (k, v) in cert.fields.iter_mut() {
        if k == "adj_sum" {
            *v = "6200000".into();
        }
    }
    // a fresh seal over an inconsistent body still fails the recomputation
    expect(verify_certificate(&cert.to_text()).is_err(), "resealed edit accepted")
}

fn scheme_table_entry() -> Result<(), String> {
    let c = rat(1, 60);
    expect(bose_mesner_projection_check(e8_table(), 8, 240, &c, &int(2)).passed, "baseline projection fails")?;
    let mut t = e8_table().clone();
    let h = rat(1, 2);
    // classes with label 0 carry no weight in P², so corrupt a weighted one
    let v = t.get(&h, &h, &h).unwrap() + int(1);
    t.set(&h, &h, &h, v);
    expect(!bose_mesner_projection_check(&t, 8, 240, &c, &int(2)).passed, "corrupted table is a projection")
}

fn moment_table_mismatch() -> Result<(), String> {
    let m = moment_table(8, 240, &e8_labels()).unwrap();
    expect(&m == e8_table(), "baseline tables differ")?;
    let mut t = e8_table().clone();
    let z = Rat::from_integer(0.into());
    let v = t.get(&z, &z, &z).unwrap() + int(2);
    t.set(&z, &z, &z, v);
    expect(m != t, "corrupted count matches the moment system")
}

fn eutaxy_vector() -> Result<(), String> {
    expect(eutaxy_check(e8_minvecs(), &rat(1, 60)), "baseline eutaxy fails")?;
    let mut mv = e8_minvecs().clone();
    let v = mv.coords[0].clone();
    mv.coords[1] = v;
    expect(!eutaxy_check(&mv, &rat(1, 60)), "duplicated vector keeps eutaxy")
}

fn gram_entry_changes_enumeration() -> Result<(), String> {
    let l = e8_lattice();
    let count = |g| gram_shells(g, &int(2), &EnumConfig::default()).map(|s| s.iter().map(|x| x.1).sum::<u64>());
    expect(count(&l.gram) == Ok(240), "baseline count is not 240")?;
    let mut g = l.gram.clone();
    g[(0, 0)] += int(2);
    expect(count(&g) != Ok(240), "changed Gram still has 240 short vectors")
}

fn orthogonal_frame() -> Result<(), String> {
    let l = e8_lattice();
    let mut w = e8_witness_vectors(&l);
    expect(frame_check(&l, &w.frame, &int(2)).is_ok(), "baseline frame rejected")?;
    w.frame[2] = w.frame[3].clone();
    expect(frame_check(&l, &w.frame, &int(2)).is_err(), "repeated frame vector accepted")
}

fn alpha_zero_closure() -> Result<(), String> {
    let (m, c, rho) = (int(2), int(7973), dec("2.5e-5"));
    expect(local_optimality_certificate(8, &m, &rat(1, 20), &c, &rho).is_ok(), "baseline closure fails")?;
    expect(local_optimality_certificate(8, &m, &Rat::from_integer(0.into()), &c, &rho).is_err(), "α = 0 closes")
}

fn inflated_adjugate_sum() -> Result<(), String> {
    let dev = int(7) * dec("1.45e-13");
    let cap = dec("1.6e-10");
    let ok = |adj: i64| final_inequality(&dev, &int(adj), &int(2), 8).is_ok_and(|b| b < cap);
    expect(ok(620), "baseline final bound fails")?;
    expect(!ok(6200), "inflated adjugate sum passes")
}

fn inflated_sigma_eps() -> Result<(), String> {
    let run = |eps: &str| sigma_chain(&dec(eps), &dec("3.981e-13"), &dec("3.219e-12"), &dec("1.703e-11"), 24).unwrap().sigma;
    let cap = dec("6.43801e-12");
    expect(run("6.733e-27") <= cap, "baseline σ above cap")?;
    expect(run("6.733e-12") > cap, "inflated ε still meets the σ cap")
}

fn inflated_transfer_eps() -> Result<(), String> {
    let check = |eps: Rat| {
        let p = TransferParams {
            max_dev: &eps * int(75),
            eps,
            mu: dec("3.981e-13"),
            min_norm: int(4),
            next_norm: int(6),
            coord_sup: int(4),
            cap: Some(dec("1e-17")),
        };
        basis_transfer_check(&leech_lattice(), &p).unwrap().passed
    };
    expect(check(dec("6.733e-27")), "baseline transfer fails")?;
    expect(!check(dec("1e-9")), "inflated ε transfers")
}

fn missing_scheme_fact() -> Result<(), String> {
    let eps = dec("1.45e-13");
    expect(inner_product_chain(&eps, e8_table(), 8, None).is_ok(), "baseline chain fails")?;
    let mut t = e8_table().clone();
    let h = rat(1, 2);
    t.set(&Rat::from_integer(0.into()), &h, &h, Rat::from_integer(0.into()));
    expect(inner_product_chain(&eps, &t, 8, None).is_err(), "chain ran without its scheme fact")
}

fn design_defect_slack() -> Result<(), String> {
    let f = kissing_poly(8, &dec("1.45e-13")).unwrap();
    let slack = lp_slack(&f, 240);
    expect(design_defect_constant(&f, 8, 240, &RatInterval::point(slack.clone())).is_ok(), "baseline defect fails")?;
    let wrong = RatInterval::point(slack / int(2));
    expect(design_defect_constant(&f, 8, 240, &wrong).is_err(), "understated slack accepted")
}

fn radial_coefficient() -> Result<(), String> {
    let f = small_e8_function().clone();
    let r = latcert::radial::newton::first_root_radius(&f).unwrap();
    expect(certify_packing_bound(&f, &RatInterval::point(r.clone())).is_ok(), "baseline function rejected")?;
    let mut g = f.clone();
    let last = g.coeffs.len() - 1;
    g.coeffs[last] += int(1);
    expect(certify_packing_bound(&g, &RatInterval::point(r)).is_err(), "corrupted coefficient certifies")
}

fn shrunken_radius() -> Result<(), String> {
    let f = small_e8_function();
    let r = latcert::radial::newton::first_root_radius(f).unwrap();
    expect(certify_packing_bound(f, &RatInterval::point(r.clone())).is_ok(), "baseline radius rejected")?;
    let smaller = r * rat(99, 100);
    expect(certify_packing_bound(f, &RatInterval::point(smaller)).is_err(), "radius below the sign change certifies")
}

pub fn cases() -> Vec<TamperCase> {
    macro_rules! case {
        ($f:ident) => {
            TamperCase { name: stringify!($f), run: $f }
        };
    }
    vec![
        case!(kissing_polynomial_constant),
        case!(kissing_certificate_digit),
        case!(resealed_localopt_certificate),
        case!(scheme_table_entry),
        case!(moment_table_mismatch),
        case!(eutaxy_vector),
        case!(gram_entry_changes_enumeration),
        case!(orthogonal_frame),
        case!(alpha_zero_closure),
        case!(inflated_adjugate_sum),
        case!(inflated_sigma_eps),
        case!(inflated_transfer_eps),
        case!(missing_scheme_fact),
        case!(design_defect_slack),
        case!(radial_coefficient),
        case!(shrunken_radius),
    ]
}
