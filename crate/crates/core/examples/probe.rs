//! Scratch probe for tuning threshold and gap profiles (not shipped).

use isolab::model::WModel;
use isolab::parabolicity::{
    euclidean_threshold_stretching, hyperbolic_threshold, hyperbolic_threshold_stretching,
    TailOptions, TailProfile,
};
use isolab::radial::{FnRadial, Jet2, Radial, RadialExpr};

fn report(tag: &str, tail: &TailProfile) {
    eprintln!("[{tag}] built, reporting...");
    let mut min = f64::INFINITY;
    let mut min_r = 0.0;
    for &(r, m) in tail.balance_rows() {
        if m < min {
            min = m;
            min_r = r;
        }
    }
    let mut min1 = f64::INFINITY;
    let mut min1_r = 0.0;
    for &(r, m) in tail.balance_rows() {
        if r >= 1.0 && m < min1 {
            min1 = m;
            min1_r = r;
        }
    }
    println!(
        "[{tag}] overlap {:.3e}  min margin {:+.6e} at r = {:.5}  min(r>=1) {:+.6e} at r = {:.5}  violation {:?}",
        tail.overlap_error(),
        min,
        min_r,
        min1,
        min1_r,
        tail.first_balance_violation()
    );
    for (name, res) in [
        ("sphere", tail.sphere_test()),
        ("ball", tail.ball_test()),
        ("log-ball", tail.log_ball_test()),
    ] {
        match res {
            Ok(v) => {
                println!("  {name}: {:?} — {}", v.verdict, v.summary);
                if let isolab::parabolicity::Evidence::Tail(t) = &v.evidence {
                    let ps = t.partial_sums();
                    let n = ps.len();
                    for w in ps.windows(2).skip(n.saturating_sub(5)) {
                        let inc0 = w[1].1 - w[0].1;
                        println!("      H={:>9.0} inc={:+.6e}", w[1].0, inc0);
                    }
                }
            }
            Err(e) => println!("  {name}: ERROR {e}"),
        }
    }
}

fn main() {
    let which: Vec<String> = std::env::args().skip(1).collect();
    let want = |name: &str| which.is_empty() || which.iter().any(|w| w == name);

    if want("bench") && !which.is_empty() {
        let model = WModel::space_form(-1.0, 2).unwrap();
        let g = hyperbolic_threshold_stretching(2, -1.0, 0.75, 2.0).unwrap();
        for &r in &[128.0_f64, 1024.0, 4096.0, 8192.0, 9000.0, 12000.0, 16384.0] {
            let t0 = std::time::Instant::now();
            let mut acc = 0.0;
            for k in 0..10000 {
                let rr = r * (1.0 + 1e-9 * k as f64);
                let wj = model.warping().log_jet(rr).unwrap();
                acc += wj.v.ln_abs;
            }
            let t_w = t0.elapsed();
            let t1 = std::time::Instant::now();
            for k in 0..10000 {
                let rr = r * (1.0 + 1e-9 * k as f64);
                acc += g.value(rr).unwrap();
            }
            let t_g = t1.elapsed();
            println!("r = {r:9.0}: 10k log_jet(w) {t_w:?}, 10k g.value {t_g:?}  ({acc:.3})");
        }
        return;
    }

    // --- flat-plane critical profile, spliced at e -------------------------
    if want("euclid") {
        eprintln!("building euclid threshold...");
        let g = euclidean_threshold_stretching(std::f64::consts::E).unwrap();
        let model = WModel::space_form(0.0, 2).unwrap();
        match TailProfile::build(
            model,
            g,
            RadialExpr::constant(0.0),
            TailOptions::default(),
        ) {
            Ok(t) => report("euclid threshold", &t),
            Err(e) => println!("[euclid threshold] BUILD ERROR {e}"),
        }
    }

    // --- hyperbolic critical profile, constant bound, several splices ------
    for &(c, splice) in &[
        (0.5_f64, 2.0_f64),
        (0.5, 3.0),
        (0.6, 2.0),
        (0.6, 3.0),
        (0.75, 2.0),
        (0.9, 2.0),
    ] {
        if !want("hyp") {
            break;
        }
        eprintln!("building hyp C={c} splice={splice} (constant h)...");
        let model = WModel::space_form(-1.0, 2).unwrap();
        let g = match hyperbolic_threshold_stretching(2, -1.0, c, splice) {
            Ok(g) => g,
            Err(e) => {
                println!("[hyp C={c} splice={splice}] SPLICE ERROR {e}");
                continue;
            }
        };
        println!(
            "  g~({splice}) = {:.6}, g~(8) = {:.6}, g~(30) = {:.6}",
            hyperbolic_threshold(2, -1.0, c, splice).unwrap(),
            hyperbolic_threshold(2, -1.0, c, 8.0).unwrap(),
            hyperbolic_threshold(2, -1.0, c, 30.0).unwrap(),
        );
        let h = RadialExpr::constant(c);
        match TailProfile::build(model, g, h, TailOptions::default()) {
            Ok(t) => report(&format!("hyp C={c} splice={splice} const-h"), &t),
            Err(e) => println!("[hyp C={c} splice={splice} const-h] BUILD ERROR {e}"),
        }
    }

    // --- stretch round-trip parameter sweep ---------------------------------
    if want("roundtrip") && !which.is_empty() {
        use isolab::constellation::{BuildOptions, Constellation};
        for &b in &[-1.0_f64, -0.5, -0.125, -1e-3, -1e-9, -0.0] {
            for m in [2usize, 3, 4] {
                for &a in &[0.0_f64, 0.5, 1.0] {
                    let t0 = std::time::Instant::now();
                    let model = WModel::space_form(b, m).unwrap();
                    let g = RadialExpr::parse(&format!("1/(1 + ({a})*r^2)")).unwrap();
                    let c = Constellation::build_with(
                        model,
                        g,
                        RadialExpr::constant(0.0),
                        6.0,
                        BuildOptions {
                            nodes: 256,
                            ..BuildOptions::default()
                        },
                    );
                    match c {
                        Ok(c) => {
                            let mut worst = 0.0_f64;
                            for k in 1..=10 {
                                let r = 0.6 * k as f64;
                                let back = c.unstretch(c.stretch(r));
                                worst = worst.max((back - r).abs() / (1.0 + r));
                            }
                            println!(
                                "b={b:<8} m={m} a={a}: worst {worst:.3e}  ({:?})",
                                t0.elapsed()
                            );
                        }
                        Err(e) => println!("b={b:<8} m={m} a={a}: BUILD ERROR {e}"),
                    }
                }
            }
        }
    }

    // --- reduced space-form models ------------------------------------------
    if want("models") && !which.is_empty() {
        for &(b, m) in &[(0.0_f64, 3usize), (-1.0, 2)] {
            eprintln!("building reduced b={b} m={m}...");
            let model = WModel::space_form(b, m).unwrap();
            match TailProfile::reduced(model, TailOptions::default()) {
                Ok(t) => report(&format!("reduced b={b} m={m}"), &t),
                Err(e) => println!("[reduced b={b} m={m}] BUILD ERROR {e}"),
            }
        }
    }

    // --- surface-side criteria over the catalog ----------------------------
    if want("surf") && !which.is_empty() {
        use isolab::parabolicity::{ichihara_test, milnor_test, tangency_test, total_curvature};
        use isolab::radial::quad::QuadOpts;
        use isolab::surface::RevolutionSurface;
        for s in RevolutionSurface::catalog() {
            let tc = total_curvature(
                &s,
                QuadOpts {
                    abs_tol: 1e-10,
                    rel_tol: 1e-10,
                },
            );
            match tc {
                Ok(tc) => println!(
                    "[{}] total |K| dA = {:?} (mirrored {})",
                    s.name(),
                    tc.total,
                    tc.mirrored
                ),
                Err(e) => println!("[{}] total ERROR {e}", s.name()),
            }
            match milnor_test(&s) {
                Ok(v) => println!("  milnor: {:?} — {}", v.verdict, v.summary),
                Err(e) => println!("  milnor: ERROR {e}"),
            }
            match ichihara_test(&s) {
                Ok(v) => println!("  ichihara: {:?} — {}", v.verdict, v.summary),
                Err(e) => println!("  ichihara: ERROR {e}"),
            }
            let u0 = match s.name() {
                "catenoid" => 0.25,
                "hyperboloid" | "cone" => 0.5,
                _ => 1.0,
            };
            match tangency_test(&s, u0) {
                Ok(v) => println!("  tangency(u0={u0}): {:?} — {}", v.verdict, v.summary),
                Err(e) => println!("  tangency(u0={u0}): ERROR {e}"),
            }
        }
        let shifted = RevolutionSurface::new(
            "shifted pseudosphere",
            RadialExpr::parse("1/cosh(u + 0.5)").unwrap(),
            RadialExpr::parse("u + 0.5 - tanh(u + 0.5)").unwrap(),
            1.0 / 0.5_f64.cosh(),
            3.0,
        );
        match shifted {
            Ok(s) => match milnor_test(&s) {
                Ok(v) => println!("[pseudosphere] milnor: {:?} — {}", v.verdict, v.summary),
                Err(e) => println!("[pseudosphere] milnor: ERROR {e}"),
            },
            Err(e) => println!("[pseudosphere] BUILD ERROR {e}"),
        }
    }

    // --- gap profile: sphere-divergent, ball-unresolved --------------------
    if !want("gap") {
        return;
    }
    eprintln!("building gap...");
    let g = RadialExpr::parse("1/sqrt(1 + sqrt(r)*log(1+r))").unwrap();
    let eq = RadialExpr::parse("tanh(r/2)").unwrap();
    let psi_form = RadialExpr::parse(
        "(exp(r)-exp(0-r))*(1/r + (exp(r)+exp(0-r))/(exp(r)-exp(0-r)) \
         - 1/((1+r)*(1+log(1+r))))/(4*(1+sqrt(r)*log(1+r)))",
    )
    .unwrap();
    let form = RadialExpr::parse(
        "1/tanh(r) - (1/r + 1/tanh(r) - 1/((1+r)*(1+log(1+r))))/(2*(1+sqrt(r)*log(1+r)))",
    )
    .unwrap();
    for &r in &[0.5, 1.0, 1.5, 2.0, 2.1, 2.2, 2.5, 3.0, 4.0] {
        println!(
            "  psi_form({r}) = {:.6}  form h = {:.6}  eq h = {:.6}",
            psi_form.value(r).unwrap(),
            form.value(r).unwrap(),
            eq.value(r).unwrap()
        );
    }
    let nan = || Jet2::constant(f64::NAN);
    let h = FnRadial::new(move |r: f64| {
        if r < 0.5 {
            return eq.jet(r).unwrap_or_else(|_| nan());
        }
        if r < 4.0 {
            let psi = psi_form.value(r).unwrap_or(f64::NAN);
            if !(psi >= 1.0) {
                return eq.jet(r).unwrap_or_else(|_| nan());
            }
        }
        form.jet(r).unwrap_or_else(|_| nan())
    });
    let model = WModel::space_form(-1.0, 2).unwrap();
    match TailProfile::build(model, g, h, TailOptions::default()) {
        Ok(t) => report("gap", &t),
        Err(e) => println!("[gap] BUILD ERROR {e}"),
    }
}
