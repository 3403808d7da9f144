use crate::files::{BetaFile, GraphFile, LoadedGraph};
use crate::render::{opt, table};
use crate::{CliError, Command, Report, RunConfig, Verdict};
use iwagraph::algebra::rational::{check_prime, format_rational, parse_rational, Rational};
use iwagraph::algebra::valuation::Valuation;
use iwagraph::charelem::{char_element_by_orientation, char_element_direct, CharElement};
use iwagraph::complexity::{characters, kappa_matrix_tree, product_formula_kappa, three_term_check};
use iwagraph::graph::arborescence::MAX_ORACLE_VERTICES;
use iwagraph::graph::{
    derived_cover, enumerate_arborescences, validate_graph, FiniteGroup, FiniteVoltage,
    WeightedGraph, ZVoltage,
};
use iwagraph::invariants::{kida_verify, tower_report, TowerOptions, TowerOutcome};
use iwagraph::qwalk::qwalk_growth;
use serde::Serialize;

pub fn dispatch(c: &RunConfig) -> Result<Report, CliError> {
    let g = GraphFile::read(&c.graph)?.load(c.dims)?;
    match c.command {
        Command::Validate => validate(&g),
        Command::Cover => cover(c, &g),
        Command::Kappa => kappa(&g),
        Command::Charelem => charelem(c, &g),
        Command::Tower => tower(c, &g),
        Command::Kida => kida(c, &g),
        Command::Qwalk => qwalk(c, &g),
        Command::ProductCheck => product_check(c, &g),
    }
}

fn prime(c: &RunConfig, g: &LoadedGraph) -> Result<u64, CliError> {
    let p = c.prime.or(g.prime).ok_or_else(|| {
        CliError::Usage("no prime given: pass --prime or set \"prime\" in the graph file".into())
    })?;
    check_prime(p)?;
    Ok(p)
}

fn alpha(g: &LoadedGraph) -> Result<&ZVoltage, CliError> {
    g.alpha.as_ref().ok_or_else(|| {
        CliError::Usage("the graph file has no Z^d voltages; add \"voltage\" to its edges".into())
    })
}

fn beta(c: &RunConfig, x: &WeightedGraph) -> Result<(FiniteGroup, FiniteVoltage), CliError> {
    let path = c
        .beta
        .as_ref()
        .ok_or_else(|| CliError::Usage("this command needs --beta".into()))?;
    BetaFile::read(path)?.load(x)
}

fn options(c: &RunConfig) -> TowerOptions {
    TowerOptions {
        box_bound: c.box_bound,
        size_limit: if c.force_size { None } else { TowerOptions::default().size_limit },
        ..TowerOptions::default()
    }
}

fn rat_str(q: &Rational) -> String {
    format_rational(q)
}

fn validate(g: &LoadedGraph) -> Result<Report, CliError> {
    let report = validate_graph(&g.graph);
    let text = match &report.violation {
        None => format!(
            "valid: {} vertices, {} edges\n",
            g.graph.num_vertices(),
            g.graph.num_edges()
        ),
        Some(v) => format!("invalid: {v}\n"),
    };
    let mut r = Report::new(&report, text);
    if let Some(v) = &report.violation {
        r.verdict = Verdict::Invalid(v.to_string());
    }
    Ok(r)
}

fn cover(c: &RunConfig, g: &LoadedGraph) -> Result<Report, CliError> {
    g.graph.require_valid()?;
    let (group, b) = beta(c, &g.graph)?;
    let cov = derived_cover(&g.graph, &group, &b);
    let y = cov.graph();
    let alpha_y = g
        .alpha
        .as_ref()
        .map(|a| a.pull_back(|e| cov.dart_projection(e), y.num_darts()));
    let mut file = GraphFile::from_graph(y, alpha_y.as_ref(), g.prime);
    file.description = Some(format!("derived cover of degree {}", group.order()));
    let text = format!(
        "derived cover: {} vertices, {} edges, connected: {}\n",
        y.num_vertices(),
        y.num_edges(),
        y.is_connected()
    );
    let mut r = Report::new(&file, text);
    r.csv = (
        ["id", "from", "to", "weight"].map(String::from).to_vec(),
        file.edges
            .iter()
            .map(|e| {
                let w = match &e.weight {
                    crate::files::RationalField::Int(n) => n.to_string(),
                    crate::files::RationalField::Text(s) => s.clone(),
                };
                vec![e.id.clone(), e.from.clone(), e.to.clone(), w]
            })
            .collect(),
    );
    Ok(r)
}

#[derive(Serialize)]
struct KappaOutput {
    vertices: usize,
    kappa: String,
    /// Sum over enumerated arborescences rooted at the first vertex.
    kappa_arborescences: Option<String>,
    arborescences: Option<usize>,
}

fn kappa(g: &LoadedGraph) -> Result<Report, CliError> {
    g.graph.require_valid()?;
    let k = kappa_matrix_tree(&g.graph);
    let oracle = (g.graph.num_vertices() <= MAX_ORACLE_VERTICES)
        .then(|| enumerate_arborescences(&g.graph, 0))
        .transpose()?;
    let out = KappaOutput {
        vertices: g.graph.num_vertices(),
        kappa: rat_str(&k),
        kappa_arborescences: oracle.as_ref().map(|a| rat_str(&a.weight_sum)),
        arborescences: oracle.as_ref().map(|a| a.trees.len()),
    };
    let text = format!(
        "kappa = {}\narborescence sum = {} ({} arborescences)\n",
        out.kappa,
        opt(&out.kappa_arborescences),
        opt(&out.arborescences)
    );
    let mut r = Report::new(&out, text);
    if let Some(a) = &oracle {
        if a.weight_sum != k {
            r.verdict = Verdict::Mismatch(format!(
                "kappa by matrix-tree = kappa by arborescences: {} vs {}",
                out.kappa,
                rat_str(&a.weight_sum)
            ));
        }
    }
    Ok(r)
}

#[derive(Serialize)]
struct OrientationOutput {
    voltages: Vec<Vec<i64>>,
    polynomial: String,
    agrees_with_direct: bool,
}

#[derive(Serialize)]
struct CharElemOutput {
    p: u64,
    d: usize,
    display: String,
    t_form: Option<String>,
    mu: Valuation,
    unit_part: Option<String>,
    char_element: CharElement,
    orientation_route: Option<OrientationOutput>,
    orientation_route_skipped: Option<String>,
}

fn charelem(c: &RunConfig, g: &LoadedGraph) -> Result<Report, CliError> {
    let p = prime(c, g)?;
    let a = alpha(g)?;
    g.graph.require_valid()?;
    let q = char_element_direct(&g.graph, a, p)?;
    let (mu, unit_part) = if q.is_zero() {
        (Valuation::Infinity, None)
    } else {
        let (mu, f0) = q.poly.normalize(p)?;
        (mu, Some(f0.to_string()))
    };
    let (orientation_route, orientation_route_skipped) = if g.graph.is_strongly_symmetric() {
        let r = char_element_by_orientation(&g.graph, &g.graph.default_orientation(), a, p)?;
        (
            Some(OrientationOutput {
                polynomial: r.polynomial.display_with(&r.variable_names),
                voltages: r.voltages,
                agrees_with_direct: true,
            }),
            None,
        )
    } else {
        (None, Some("weights of some dart pair differ".to_string()))
    };
    let out = CharElemOutput {
        p,
        d: a.dims(),
        display: q.poly.to_string(),
        t_form: if a.dims() == 1 { q.poly.t_form_string() } else { None },
        mu,
        unit_part,
        char_element: q,
        orientation_route,
        orientation_route_skipped,
    };
    let mut text = format!("Q = {}\n", out.display);
    if let Some(t) = &out.t_form {
        text += &format!("Q = {t}  (u = 1 + T)\n");
    }
    text += &format!("mu = {}\nunit part = {}\n", out.mu, opt(&out.unit_part));
    if let Some(o) = &out.orientation_route {
        text += &format!("P = {}\norientation route agrees\n", o.polynomial);
    }
    Ok(Report::new(&out, text))
}

fn tower(c: &RunConfig, g: &LoadedGraph) -> Result<Report, CliError> {
    let p = prime(c, g)?;
    let a = alpha(g)?;
    let outcome = tower_report(&g.graph, a, p, c.nmax, &options(c))?;
    let (rows, header_text, verdict) = match &outcome {
        TowerOutcome::Iwasawa(r) => {
            let head = format!(
                "Q = {}\nmu = {}  lambda = {}  (lambda(Q) = {})\nstable from n = {}\n",
                r.char_element,
                rat_str(&r.mu),
                r.lambda,
                r.lambda_q,
                opt(&r.stable_from)
            );
            let verdict = if r.closed_form_holds {
                Verdict::Pass
            } else {
                Verdict::Mismatch(r.warnings.join("; "))
            };
            (&r.table, head, verdict)
        }
        TowerOutcome::ZeroCase(z) => {
            let head = format!(
                "Q = {}\nkappa_n = 0 from n = {} (vanishing characters: {:?})\n",
                z.char_element, z.first_zero_layer, z.vanishing
            );
            (&z.table, head, Verdict::Pass)
        }
    };
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.vertices.to_string(),
                opt(&r.kappa_direct.as_ref().map(rat_str)),
                opt(&r.kappa_product.as_ref().map(rat_str)),
                r.valuation.to_string(),
                opt(&r.predicted.as_ref().map(rat_str)),
            ]
        })
        .collect();
    let header = ["n", "vertices", "kappa_direct", "kappa_product", "v_p", "predicted"];
    let text = header_text + &table(&header, &cells);
    let mut r = Report::new(&outcome, text);
    r.csv = (header.map(String::from).to_vec(), cells);
    r.verdict = verdict;
    Ok(r)
}

fn kida(c: &RunConfig, g: &LoadedGraph) -> Result<Report, CliError> {
    let p = prime(c, g)?;
    let a = alpha(g)?;
    let (group, b) = beta(c, &g.graph)?;
    let r = kida_verify(&g.graph, a, &group, &b, p, c.box_bound)?;
    let text = format!(
        "[Y:X] = {}\nX: mu = {}  lambda = {}\nY: mu = {}  lambda = {}\npredicted lambda(Y) = {}\nrelation {}\n",
        r.degree,
        rat_str(&r.mu_x),
        r.lambda_x,
        rat_str(&r.mu_y),
        r.lambda_y,
        r.lambda_y_predicted,
        if !r.applicable {
            "not applicable (mu != 0)"
        } else if r.relation_holds {
            "holds"
        } else {
            "fails"
        }
    );
    let mut rep = Report::new(&r, text);
    if r.applicable && !r.relation_holds {
        rep.verdict = Verdict::Mismatch(format!(
            "lambda(Y) = {} but the degree formula gives {}",
            r.lambda_y, r.lambda_y_predicted
        ));
    }
    Ok(rep)
}

fn qwalk(c: &RunConfig, g: &LoadedGraph) -> Result<Report, CliError> {
    let p = prime(c, g)?;
    let al = alpha(g)?;
    let a = c
        .a
        .as_deref()
        .ok_or_else(|| CliError::Usage("qwalk needs --a".into()))?;
    let a = parse_rational(a)?;
    let r = qwalk_growth(&g.graph, al, p, &a, c.nmax, &options(c))?;
    let cells: Vec<Vec<String>> = r
        .table
        .iter()
        .map(|row| {
            vec![
                row.n.to_string(),
                row.darts.to_string(),
                row.valuation.to_string(),
                opt(&row.predicted.as_ref().map(rat_str)),
            ]
        })
        .collect();
    let header = ["n", "darts", "v_p", "predicted"];
    let text = format!(
        "a = {}\nQ_a = {}\nmu = {}  lambda = {}  chi = {}\nstable from n = {}\n",
        rat_str(&r.a),
        r.char_element_a,
        rat_str(&r.mu),
        r.lambda,
        r.chi,
        opt(&r.stable_from)
    ) + &table(&header, &cells);
    let mut rep = Report::new(&r, text);
    rep.csv = (header.map(String::from).to_vec(), cells);
    if !r.closed_form_holds {
        rep.verdict = Verdict::Mismatch(r.warnings.join("; "));
    }
    Ok(rep)
}

#[derive(Serialize)]
struct ThreeTerm {
    character: Vec<u64>,
    holds: bool,
}

#[derive(Serialize)]
struct ProductCheckOutput {
    #[serde(flatten)]
    product: iwagraph::complexity::ProductFormulaReport,
    three_term: Vec<ThreeTerm>,
}

fn product_check(c: &RunConfig, g: &LoadedGraph) -> Result<Report, CliError> {
    g.graph.require_valid()?;
    let (group, b) = beta(c, &g.graph)?;
    let report = product_formula_kappa(&g.graph, &group, &b)?;
    let three_term: Vec<ThreeTerm> = characters(&group)?
        .iter()
        .map(|psi| ThreeTerm {
            character: psi.images().to_vec(),
            holds: three_term_check(&g.graph, &group, &b, psi),
        })
        .collect();
    let cells: Vec<Vec<String>> = report
        .h_values
        .iter()
        .map(|h| {
            vec![
                format!("{:?}", h.character.images()),
                h.value.to_string(),
                h.valuation.to_string(),
            ]
        })
        .collect();
    let header = ["character", "h", "v_p"];
    let failed: Vec<&ThreeTerm> = three_term.iter().filter(|t| !t.holds).collect();
    let text = format!(
        "kappa(cover) = {} (matrix-tree) = {} (product)\n",
        rat_str(&report.kappa_direct),
        rat_str(&report.kappa_product)
    ) + &table(&header, &cells)
        + &format!(
            "three-term identity: {}/{} characters\n",
            three_term.len() - failed.len(),
            three_term.len()
        );
    let verdict = match failed.first() {
        None => Verdict::Pass,
        Some(t) => Verdict::Mismatch(format!(
            "three-term determinant identity fails for character {:?}",
            t.character
        )),
    };
    let mut rep = Report::new(&ProductCheckOutput { product: report, three_term }, text);
    rep.csv = (header.map(String::from).to_vec(), cells);
    rep.verdict = verdict;
    Ok(rep)
}
