use kgsphere::equation::{wave_operator, FSpec, OnShell};
use kgsphere::geom::{killing_check, ChartMetric};
use kgsphere::liesym::{
    commutator_table, gauge, isometries, listed_subalgebras, negative_definite, s4,
    shift_reduction_check, subalgebra_check, symmetry_check, symmetry_residual, VectorField,
};
use kgsphere::noether::{
    canonical_currents, compare_with_reference, current_from_gauge, current_from_isometry,
    divergence_check, lagrangian, noether_identity_defect, reference_current_for,
    variational_check, ConservedCurrent, CurrentExport, VariationalOutcome,
};
use kgsphere::symcore::{is_zero, parse, Expr};
use rand_chacha::ChaCha8Rng;

use crate::report::{Check, RunReport};

/// Component mismatches against the reference currents that are known
/// discrepancies: the `y` components of the S3 and gauge currents.
const KNOWN_DISCREPANCIES: [(&str, usize); 2] = [("S3", 2), ("Sinf", 2)];

const AXES: [&str; 3] = ["t", "x", "y"];

pub fn s2xr() -> ChartMetric {
    ChartMetric::preset("s2xr").expect("bundled metric")
}

fn linear() -> FSpec {
    FSpec::linear_symbolic()
}

fn c() -> Expr {
    Expr::param("c")
}

pub fn killing(r: &mut RunReport, rng: &mut ChaCha8Rng) -> anyhow::Result<()> {
    let m = s2xr();
    for f in isometries() {
        let k = killing_check(&m, &f, rng)?;
        for comp in &k.components {
            let name = format!(
                "killing {} (L_X g)[{},{}]",
                f.label(),
                AXES[comp.i],
                AXES[comp.j]
            );
            r.check(Check::zero(&name, &comp.verdict));
        }
    }
    let witness =
        VectorField::new([Expr::t(), Expr::zero(), Expr::zero()], Expr::zero()).named("t*d_t");
    let k = killing_check(&m, &witness, rng)?;
    r.check(Check::holds(
        "killing witness t*d_t is not an isometry",
        !k.is_killing(),
    ));
    r.data("killing_witness", &k);
    r.mark("killing");
    Ok(())
}

pub fn symmetry(r: &mut RunReport, spec: &FSpec, rng: &mut ChaCha8Rng) {
    for f in isometries() {
        let s = symmetry_check(&f, spec, rng);
        r.check(Check::zero(
            &format!("symmetry {} with f = {spec}", f.label()),
            &s.verdict,
        ));
    }
    let lin = linear();
    let s = symmetry_check(&s4(), &lin, rng);
    r.check(Check::zero("symmetry S4 with f = c*u", &s.verdict));
    let on = OnShell::new(&lin).with_linear_field("b", &c());
    let res = symmetry_residual(&gauge("b"), &lin, &on);
    r.check(Check::zero(
        "symmetry Sinf with f = c*u, b solving the linear equation",
        &is_zero(&res, rng),
    ));
    let bare = symmetry_residual(&gauge("b"), &lin, &OnShell::new(&lin));
    let expected = wave_operator("b") - c() * Expr::field("b");
    r.check(Check::zero(
        "Sinf residual equals b_tt - Δb - c*b",
        &is_zero(&(bare - expected), rng),
    ));
    for (label, other) in [
        ("opaque f", FSpec::Arbitrary),
        ("f = u^2", FSpec::Explicit(Expr::field("u").pow(2))),
    ] {
        let s = symmetry_check(&s4(), &other, rng);
        r.check(Check::nonzero(
            &format!("S4 is not a symmetry for {label}"),
            &s.verdict,
        ));
        let g = symmetry_check(&gauge("b"), &other, rng);
        r.check(Check::nonzero(
            &format!("Sinf is not a symmetry for {label}"),
            &g.verdict,
        ));
    }
    let shift = shift_reduction_check(&Expr::param("k"), rng);
    r.check(Check::zero(
        "u = v + k*t^2/2 removes a constant source",
        &shift.verdict,
    ));
    r.mark("symmetry");
}

pub fn noether(r: &mut RunReport, spec: &FSpec, rng: &mut ChaCha8Rng) -> anyhow::Result<()> {
    let l = lagrangian(spec)?;
    r.data("lagrangian", l.density.to_string());
    let off = OnShell::off_shell();
    let zero = [Expr::zero(), Expr::zero(), Expr::zero()];
    for f in isometries() {
        let v = variational_check(&f, &l, &off, rng);
        let name = format!("variational {} exact with F from f = {spec}", f.label());
        r.check(
            Check::holds(&name, v.outcome == VariationalOutcome::ExactZero)
                .detail(v.verdict.label()),
        );
        let a = kgsphere::noether::noether_current(&f, &l, &zero);
        let id = noether_identity_defect(&f, &l, &a);
        r.check(Check::holds(
            &format!("Noether identity for {}", f.label()),
            id.is_zero(),
        ));
    }
    let ll = lagrangian(&linear())?;
    let on_b = OnShell::off_shell().with_linear_field("b", &c());
    let v = variational_check(&gauge("b"), &ll, &on_b, rng);
    let expected =
        ["sin(x)*b_t*u", "-sin(x)*b_x*u", "-b_y*u/sin(x)"].map(|s| parse(s).expect("literal"));
    let ok = v.outcome == VariationalOutcome::Divergence(expected);
    r.check(Check::holds(
        "Sinf is a divergence symmetry with flux (sin(x)*b_t*u, -sin(x)*b_x*u, -b_y*u/sin(x))",
        ok,
    ));
    r.data("gauge_variational", &v);
    let s = variational_check(&s4(), &ll, &off, rng);
    r.check(Check::holds("S4 is not variational", !s.is_variational()).info());
    r.mark("noether");
    Ok(())
}

fn compare(
    r: &mut RunReport,
    computed: &ConservedCurrent,
    name: &str,
    spec: &FSpec,
) -> anyhow::Result<()> {
    let reference = reference_current_for(name, spec)?.expect("bundled reference");
    let mismatches = compare_with_reference(computed, &reference);
    let unexpected: Vec<_> = mismatches
        .iter()
        .filter(|m| !KNOWN_DISCREPANCIES.contains(&(name, m.component)))
        .collect();
    let agree: Vec<_> = (0..3)
        .filter(|k| !mismatches.iter().any(|m| m.component == *k))
        .map(|k| AXES[k])
        .collect();
    r.check(
        Check::holds(
            &format!("{name} current matches the reference components"),
            unexpected.is_empty(),
        )
        .detail(format!("agreeing components: {}", agree.join(","))),
    );
    for m in &mismatches {
        r.warn(
            &format!("{name} A^{}", AXES[m.component]),
            format!(
                "reference `{}` differs from computed `{}` by `{}`",
                m.reference, m.computed, m.difference
            ),
        );
    }
    Ok(())
}

fn conserved(
    r: &mut RunReport,
    a: &ConservedCurrent,
    spec: &FSpec,
    on: &OnShell,
    label: &str,
    rng: &mut ChaCha8Rng,
) {
    let d = divergence_check(a, spec, on, rng);
    let mut c = Check::zero(
        &format!("Div({label} {}) = 0 on solutions, f = {spec}", a.generator),
        &d.verdict,
    );
    if !d.is_conserved() {
        c = c.detail(format!("residual {}", d.residual));
    }
    r.check(c);
}

pub fn currents(
    r: &mut RunReport,
    spec: &FSpec,
    source: &str,
    rng: &mut ChaCha8Rng,
) -> anyhow::Result<()> {
    let m = s2xr();
    let on = OnShell::new(spec);
    let lin = linear();
    let on_gauge = OnShell::new(&lin).with_linear_field("b", &c());
    let mut exports = Vec::new();
    match source {
        "generated" => {
            for f in isometries() {
                let a = current_from_isometry(&m, &f, spec, rng)?;
                compare(r, &a, &f.label(), spec)?;
                conserved(r, &a, spec, &on, "contracted", rng);
                exports.push(CurrentExport::from(&a));
            }
            let a = current_from_gauge(&m, "b")?;
            compare(r, &a, "Sinf", &lin)?;
            conserved(r, &a, &lin, &on_gauge, "gauge", rng);
            exports.push(CurrentExport::from(&a));
            for a in canonical_currents(spec)? {
                conserved(r, &a, spec, &on, "canonical", rng);
            }
        }
        "reference" => {
            for name in ["S0", "S1", "S2", "S3", "Sinf"] {
                let (s, o) = if name == "Sinf" {
                    (&lin, &on_gauge)
                } else {
                    (spec, &on)
                };
                let a = reference_current_for(name, s)?.expect("bundled reference");
                let d = divergence_check(&a, s, o, rng);
                r.check(
                    Check::zero(
                        &format!("Div(reference {name}) = 0 on solutions"),
                        &d.verdict,
                    )
                    .info(),
                );
                if !d.is_conserved() {
                    r.warn(
                        &format!("reference {name}"),
                        format!("divergence on solutions is `{}`", d.residual),
                    );
                }
                let computed = if name == "Sinf" {
                    current_from_gauge(&m, "b")?
                } else {
                    let f = isometries()
                        .into_iter()
                        .find(|f| f.label() == name)
                        .expect("isometry");
                    current_from_isometry(&m, &f, spec, rng)?
                };
                compare(r, &computed, name, s)?;
                exports.push(CurrentExport::from(&a));
            }
        }
        other => anyhow::bail!("unknown current source `{other}`; use generated or reference"),
    }
    r.data("currents", &exports);
    r.mark("currents");
    Ok(())
}

pub fn algebra(r: &mut RunReport) {
    let iso = isometries();
    let t = commutator_table(&iso);
    r.line("commutator table:");
    for e in t.entries() {
        r.line(format!("  [{}, {}] = {}", e.left, e.right, e.value));
    }
    r.data("commutators", t.entries());
    let expect = [(1, 2, 3, 1), (1, 3, 2, -1), (2, 3, 1, 1)];
    for (i, j, k, s) in expect {
        let ok = (0..4).all(|m| {
            let want = if m == k { s } else { 0 };
            t.rational_constant(i, j, m) == Some(kgsphere::symcore::rat(want, 1))
        });
        r.check(Check::holds(
            &format!("[S{i}, S{j}] = {}S{k}", if s < 0 { "-" } else { "" }),
            ok,
        ));
    }
    r.check(Check::holds("S0 is central", t.is_central(0)));
    r.check(Check::holds(
        "antisymmetry",
        t.antisymmetry_defects().is_empty(),
    ));
    r.check(Check::holds(
        "Jacobi identity",
        t.jacobi_defects().is_empty(),
    ));
    let rot = commutator_table(&iso[1..]);
    let form = rot.killing_form();
    r.data(
        "killing_form_S1_S2_S3",
        form.iter()
            .map(|row| row.iter().map(Expr::to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    );
    r.check(Check::holds(
        "Killing form of <S1,S2,S3> is negative definite",
        negative_definite(&form) == Some(true),
    ));
    let mut ext = iso.clone();
    ext.push(s4());
    let te = commutator_table(&ext);
    r.check(Check::holds(
        "S4 is central in <S0,...,S4>",
        te.is_closed() && te.is_central(4),
    ));
    for sub in listed_subalgebras() {
        let rep = subalgebra_check(sub.name, &sub.generators);
        let mut c = Check::holds(
            &format!(
                "{} = <{}> closed, type {}",
                sub.name,
                rep.generators.join(", "),
                sub.expected
            ),
            rep.closed && rep.tag == sub.expected,
        );
        if !rep.conditions.is_empty() {
            c = c.detail(format!("assuming {}", rep.conditions.join(", ")));
        }
        r.check(c);
    }
    r.mark("algebra");
}
