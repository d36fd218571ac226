//! The `matcon` command line: argument handling, command dispatch and
//! report assembly. [`run`] does all the work and returns what the binary
//! prints, so commands can be exercised without spawning a process.

pub mod report;

use std::ffi::OsString;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use matcon::atlas::ProductCoding;
use matcon::conformity::BundleSource;
use matcon::{
    check_couniform_class, check_couniform_syntactic, check_uniform_bundle,
    check_uniform_syntactic, conservativity_check, entails_class, lindenbaum_theories,
    load_matrix_file, parse_formula, parse_formula_list, print_set, product_atlas, sigma_family,
    single_matrix_report, wojcicki_entails, Atlas, Catalog, Error, FormulaSet, Fragment, Language,
    LiftedConsequence, MatrixClass, SearchBudget, Var, Verdict,
};

pub use report::{Format, Report};

#[derive(Debug, Parser)]
#[command(
    name = "matcon",
    version,
    about = "Consequence relations of finite logical matrices"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Matrix file with additional algebras, matrices and atlases.
    #[arg(long, global = true, value_name = "FILE")]
    matrices: Option<std::path::PathBuf>,
    /// Matrices and atlases forming the class, comma separated.
    #[arg(
        long = "use",
        global = true,
        value_name = "NAME,...",
        default_value = "CL2"
    )]
    names: String,
    /// Fragment variables, comma separated.
    #[arg(long, global = true, value_name = "LIST", default_value = "p,q")]
    vars: String,
    /// Fragment nesting depth.
    #[arg(long, global = true, default_value_t = 1)]
    depth: usize,
    #[arg(long, global = true, default_value_t = 2)]
    set_size: usize,
    #[arg(long, global = true, default_value_t = 3)]
    family_size: usize,
    /// Candidate cap; larger spaces are sampled.
    #[arg(long, global = true, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Args)]
struct Inference {
    /// Comma separated premises (may be empty).
    #[arg(long, default_value = "")]
    premises: String,
    #[arg(long)]
    conclusion: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide X ⊨ α in the class.
    Check(Inference),
    /// Truth sets of each member over the fragment.
    Sigma,
    /// Theories of the class restricted to the fragment.
    Theories,
    /// The product atlas of the class.
    Product,
    /// Search for a uniformity counterexample.
    Uniformity {
        /// Check the bundle condition on truth sets instead of the consequence.
        #[arg(long)]
        semantic: bool,
    },
    /// Search for a couniformity counterexample.
    Couniformity {
        /// Check the class condition on truth sets instead of the consequence.
        #[arg(long)]
        semantic: bool,
    },
    /// All four conformity checks and the product atlas summary.
    SingleMatrix,
    /// Search for a substitution-instance witness of X ⊢ α in the extension.
    Wojcicki {
        #[command(flatten)]
        inference: Inference,
        /// Variables added by the extension, comma separated.
        #[arg(long, value_name = "LIST", default_value = "r1,r2")]
        new_vars: String,
    },
    /// Compare base and lifted entailment over the fragment.
    Conservativity {
        #[arg(long, value_name = "LIST", default_value = "r1,r2")]
        new_vars: String,
    },
}

/// What the binary prints and its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Exit status for true entailments and empty searches.
pub const HOLDS: i32 = 0;
/// Exit status for false entailments and found counterexamples.
pub const FAILS: i32 = 1;
/// Exit status for usage and resource errors.
pub const ERROR: i32 = 2;

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Output {
                    code: ERROR,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli) {
        Ok((code, report)) => Output {
            code,
            stdout: report.render(cli.common.format),
            stderr: String::new(),
        },
        Err(e) => Output {
            code: ERROR,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn split_list(text: &str) -> Vec<&str> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

struct Setup {
    names: Vec<String>,
    class: MatrixClass,
    lang: Language,
    frag: Fragment,
    budget: SearchBudget,
}

impl Setup {
    fn new(c: &Common) -> matcon::Result<Self> {
        let catalog = match &c.matrices {
            Some(path) => load_matrix_file(path)?,
            None => Catalog::builtins(),
        };
        let names: Vec<String> = split_list(&c.names).into_iter().map(String::from).collect();
        let class = catalog.resolve(&names)?;
        let vars: Vec<Var> = split_list(&c.vars).into_iter().map(Var::new).collect();
        let lang = Language::new(Arc::clone(class.signature()), vars.clone())?;
        let budget = SearchBudget {
            max_vars: vars.len(),
            max_depth: c.depth,
            max_set_size: c.set_size,
            max_family_size: c.family_size,
            samples: c.samples,
            seed: c.seed,
        };
        Ok(Setup {
            names,
            class,
            lang,
            frag: Fragment::new(vars, c.depth),
            budget,
        })
    }

    fn header(&self, command: &str, report: &mut Report, searching: bool) {
        report.push("command", command);
        report.push("use", self.names.join(","));
        report.push(
            "vars",
            self.frag
                .vars
                .iter()
                .map(Var::name)
                .collect::<Vec<_>>()
                .join(","),
        );
        report.push("depth", self.frag.depth);
        if searching {
            let b = &self.budget;
            report.push("set_size", b.max_set_size);
            report.push("family_size", b.max_family_size);
            report.push("samples", b.samples);
            report.push("seed", b.seed);
        }
    }

    fn lift(&self, new_vars: &str) -> matcon::Result<LiftedConsequence> {
        LiftedConsequence::lift(
            self.class.clone(),
            self.lang.clone(),
            split_list(new_vars).into_iter().map(Var::new),
        )
    }

    /// The class itself when its members share an algebra, else its product.
    fn bundle(&self) -> matcon::Result<(Atlas, BundleSource)> {
        Ok(match Atlas::from_class(&self.class) {
            Some(a) => (a, BundleSource::SharedAlgebra),
            None => (product_atlas(&self.class)?, BundleSource::ProductAtlas),
        })
    }
}

fn verdict_code(v: &Verdict) -> i32 {
    if v.is_counterexample() {
        FAILS
    } else {
        HOLDS
    }
}

fn parse_inference(
    inf: &Inference,
    lang: &Language,
) -> matcon::Result<(FormulaSet, matcon::Formula)> {
    let premises = parse_formula_list(&inf.premises, lang)?
        .into_iter()
        .collect();
    Ok((premises, parse_formula(&inf.conclusion, lang)?))
}

fn source_name(s: BundleSource) -> &'static str {
    match s {
        BundleSource::SharedAlgebra => "shared-algebra",
        BundleSource::ProductAtlas => "product-atlas",
    }
}

fn execute(cli: &Cli) -> Result<(i32, Report), Error> {
    let s = Setup::new(&cli.common)?;
    let mut r = Report::new();
    let code = match &cli.command {
        Command::Check(inf) => {
            s.header("check", &mut r, false);
            let (xs, a) = parse_inference(inf, &s.lang)?;
            let entails = entails_class(&s.class, &xs, &a)?;
            r.push("premises", print_set(&xs));
            r.push("conclusion", &a);
            r.push("entails", entails);
            if entails {
                HOLDS
            } else {
                FAILS
            }
        }
        Command::Sigma => {
            s.header("sigma", &mut r, false);
            for (i, m) in s.class.members().iter().enumerate() {
                let fam = sigma_family(m, &s.frag)?;
                r.push("member", i);
                r.push("properly_extendable", fam.properly_extendable());
                r.push("truth_sets", fam.len());
                for k in 0..fam.len() {
                    r.push("truth_set", print_set(&fam.formulas(k)));
                }
            }
            HOLDS
        }
        Command::Theories => {
            s.header("theories", &mut r, false);
            let theories = lindenbaum_theories(&s.class, &s.frag)?;
            r.push("theories", theories.len());
            for t in theories.iter() {
                r.push("theory", print_set(&t));
            }
            HOLDS
        }
        Command::Product => {
            s.header("product", &mut r, false);
            let star = product_atlas(&s.class)?;
            let coding =
                ProductCoding::new(s.class.members().iter().map(|m| m.carrier()).collect());
            r.push("members", s.class.len());
            r.push("carrier", star.algebra().carrier());
            r.push("filters", star.filters().len());
            r.push(
                "filter_sizes",
                star.filters()
                    .iter()
                    .map(|f| f.len().to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            for f in star.filters() {
                let tuples: Vec<String> = f
                    .elements()
                    .map(|e| {
                        let coords: Vec<String> = (0..s.class.len())
                            .map(|i| coding.coordinate(e, i).to_string())
                            .collect();
                        format!("({})", coords.join(","))
                    })
                    .collect();
                r.push("filter", format!("{{{}}}", tuples.join(", ")));
            }
            HOLDS
        }
        Command::Uniformity { semantic } => {
            s.header("uniformity", &mut r, true);
            let v = if *semantic {
                let (atlas, source) = s.bundle()?;
                r.push("check", "bundle");
                r.push("bundle_source", source_name(source));
                check_uniform_bundle(&atlas, &s.frag, &s.budget)?
            } else {
                r.push("check", "syntactic");
                check_uniform_syntactic(&s.class, &s.lang, &s.budget)?
            };
            r.verdict("", &v);
            verdict_code(&v)
        }
        Command::Couniformity { semantic } => {
            s.header("couniformity", &mut r, true);
            let v = if *semantic {
                r.push("check", "class");
                check_couniform_class(&s.class, &s.frag, &s.budget)?
            } else {
                r.push("check", "syntactic");
                check_couniform_syntactic(&s.class, &s.lang, &s.budget)?
            };
            r.verdict("", &v);
            verdict_code(&v)
        }
        Command::SingleMatrix => {
            s.header("single-matrix", &mut r, true);
            let report = single_matrix_report(&s.class, &s.frag, &s.budget)?;
            let ok = report.consistent_with_single_matrix();
            r.push(
                "classification",
                if ok {
                    "consistent-with-single-matrix"
                } else {
                    "not-single-matrix"
                },
            );
            r.push("product.carrier", report.product.carrier);
            r.push(
                "product.filter_sizes",
                report
                    .product
                    .filter_sizes
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            );
            r.push("bundle_source", source_name(report.bundle_source));
            for (name, v) in report.verdicts() {
                r.verdict(&format!("{name}."), v);
            }
            if ok {
                HOLDS
            } else {
                FAILS
            }
        }
        Command::Wojcicki {
            inference,
            new_vars,
        } => {
            s.header("wojcicki", &mut r, true);
            let lc = s.lift(new_vars)?;
            r.push("new_vars", split_list(new_vars).join(","));
            let (xs, a) = parse_inference(inference, lc.extended_lang())?;
            let res = wojcicki_entails(&lc, &xs, &a, &s.budget)?;
            r.push("premises", print_set(&xs));
            r.push("conclusion", &a);
            r.push("entails", res.entails);
            if let Some(w) = &res.witness {
                r.push("witness.y", print_set(&w.y));
                r.push("witness.beta", &w.beta);
                r.push("witness.sigma", &w.sigma);
            }
            r.stats("", &res.stats);
            if !res.entails {
                r.push("note", "no witness within budget; this is not a refutation");
            }
            if res.entails {
                HOLDS
            } else {
                FAILS
            }
        }
        Command::Conservativity { new_vars } => {
            s.header("conservativity", &mut r, true);
            let lc = s.lift(new_vars)?;
            r.push("new_vars", split_list(new_vars).join(","));
            let v = conservativity_check(&lc, &s.frag, &s.budget)?;
            r.verdict("", &v);
            verdict_code(&v)
        }
    };
    Ok((code, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_ignore_blanks() {
        assert_eq!(split_list(" p, q ,,r"), ["p", "q", "r"]);
        assert!(split_list("").is_empty());
    }
}
